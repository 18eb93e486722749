//! Statistical checks that need thousands of transmissions.

use freeride::channel::BiosChannel;
use freeride::gf2::BitVector;
use freeride::random::{stat_model, syndrome_histogram, RandomFreeRideCode, SyndromeHistogram};
use freeride::rng::{binomial_std_err, stream_rng};
use freeride::sim::{run_sweep, CodeSource, Experiment, SimConfig};
use freeride::superposition::cancel_and_decode;
use freeride::{DecisionMode, FreeRideCode, LdpcCode};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[test]
fn long_code_ber_at_one_and_a_half_db() {
    let code = LdpcCode::construct_regular(8064, 3, 6, 1).unwrap();
    let ch = BiosChannel::from_snr_db(1.5);
    let frames = 1_000_000usize.div_ceil(code.k()) as u64;
    let errors: usize = (0..frames)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream_rng(5, t, 0, 0);
            let u = BitVector::random(code.k(), &mut rng);
            let y = ch.transmit(&code.encode(&u).unwrap(), &mut rng);
            let res = code.decode(&ch.llr(&y), 50).unwrap();
            code.extract_info(&res.codeword).unwrap().distance(&u)
        })
        .sum();
    let bits = frames as usize * code.k();
    let ber = errors as f64 / bits as f64;
    assert!(bits >= 1_000_000);
    assert!(ber < 1e-4, "BER {ber} over {bits} bits");
}

/// Payload BER after genie cancellation and on a link without extra bits.
#[test]
fn genie_cancellation_is_transparent() {
    let code = LdpcCode::construct_regular(1024, 3, 6, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let frc = RandomFreeRideCode::generate(8, &code, &mut rng).unwrap();
    let ch = BiosChannel::from_snr_db(1.8);
    let frames = 3000u64;
    let run = |extra: bool, domain: u64| -> (f64, f64) {
        let per_frame: Vec<f64> = (0..frames)
            .into_par_iter()
            .map(|t| {
                let mut r = stream_rng(2, t, 0, domain);
                let u = BitVector::random(code.k(), &mut r);
                let w = if extra {
                    frc.encode(&BitVector::random(8, &mut r)).unwrap()
                } else {
                    BitVector::zeros(code.n())
                };
                let y = ch.transmit(&(&code.encode(&u).unwrap() ^ &w), &mut r);
                let (u_hat, _) = cancel_and_decode(&code, &ch, &y, &w, 50).unwrap();
                u_hat.distance(&u) as f64 / code.k() as f64
            })
            .collect();
        freeride::rng::sample_std_err(&per_frame)
    };
    let (genie, se_g) = run(true, 1);
    let (plain, se_p) = run(false, 2);
    assert!(
        genie > 0.0 && plain > 0.0,
        "SNR too high to compare: {genie} {plain}"
    );
    assert!(
        (genie - plain).abs() <= 3.0 * se_g.hypot(se_p),
        "genie {genie}±{se_g} plain {plain}±{se_p}"
    );
}

fn small_config(decoder: DecisionMode, snr: f64) -> SimConfig {
    SimConfig {
        experiment: Experiment::WerExtra,
        code: CodeSource::Regular {
            n: 1024,
            gamma: 3,
            rho: 6,
            seed: 2,
        },
        k1: 6,
        decoder,
        snr_db: vec![snr],
        max_trials: 10_000,
        max_errors: u64::MAX,
        seed: 3,
        ..Default::default()
    }
}

#[test]
fn sdd_dominates_hdd_over_ten_thousand_trials() {
    let code = LdpcCode::construct_regular(1024, 3, 6, 2).unwrap();
    for snr in [1.0, 2.0] {
        let hdd_cfg = small_config(DecisionMode::Hdd, snr);
        let scheme = freeride::sim::build_scheme(&code, &hdd_cfg).unwrap();
        let hdd = &run_sweep(&code, scheme.as_dyn(), &hdd_cfg).unwrap().rows[0];
        let sdd = &run_sweep(
            &code,
            scheme.as_dyn(),
            &small_config(DecisionMode::Sdd, snr),
        )
        .unwrap()
        .rows[0];
        assert_eq!(hdd.trials, 10_000);
        assert!(
            sdd.wer <= hdd.wer + 3.0 * hdd.std_err_wer.hypot(sdd.std_err_wer),
            "{snr} dB: {sdd:?} {hdd:?}"
        );
        assert!((hdd.std_err_wer - binomial_std_err(hdd.wer, hdd.trials)).abs() < 1e-15);
    }
}

#[test]
fn wrong_candidate_mean_is_half_the_checks() {
    let code = LdpcCode::construct_regular(2048, 3, 6, 5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let frc = RandomFreeRideCode::generate(10, &code, &mut rng).unwrap();
    for snr in [0.0, 2.0, 4.0] {
        let ch = BiosChannel::from_snr_db(snr);
        let h = syndrome_histogram(&code, &frc, &ch, 4000, &mut rng).unwrap();
        let (mw, sw) = SyndromeHistogram::mean_and_std_err(&h.wrong);
        let (mc, sc) = SyndromeHistogram::mean_and_std_err(&h.correct);
        let model = stat_model(&code, &ch).unwrap();
        assert!(
            (mw - model.mu1).abs() <= 3.0 * sw,
            "{snr} dB: wrong mean {mw}±{sw}"
        );
        assert!(
            (mc - model.mu0).abs() <= 3.0 * sc,
            "{snr} dB: correct mean {mc}±{sc} vs {}",
            model.mu0
        );
    }
}
