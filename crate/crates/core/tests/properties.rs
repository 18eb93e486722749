use freeride::channel::{flip_prob_from_llr, BiosChannel};
use freeride::gf2::BitVector;
use freeride::random::RandomFreeRideCode;
use freeride::structured::{build_repetition, build_rm1, lift};
use freeride::{successive_cancellation, DecisionMode, FreeRideCode, LdpcCode};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

fn code_128() -> &'static LdpcCode {
    static CODE: OnceLock<LdpcCode> = OnceLock::new();
    CODE.get_or_init(|| LdpcCode::construct_regular(128, 3, 6, 4).unwrap())
}

fn channel() -> impl Strategy<Value = BiosChannel> {
    prop_oneof![
        (0.05f64..3.0).prop_map(|s| BiosChannel::awgn(s).unwrap()),
        (0.0f64..0.5).prop_map(|p| BiosChannel::bsc(p).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn codewords_have_zero_syndrome(seed in any::<u64>()) {
        let code = code_128();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = code.encode(&BitVector::random(code.k(), &mut rng)).unwrap();
        prop_assert!(code.syndrome(&c).unwrap().is_zero());
    }

    #[test]
    fn flip_is_an_involution(ch in channel(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = BitVector::random(40, &mut rng);
        let w = BitVector::random(40, &mut rng);
        let y = ch.transmit(&x, &mut rng);
        let once = ch.flip(&y, &w).unwrap();
        prop_assert_eq!(ch.flip(&once, &w).unwrap(), y.clone());
        for (j, (a, b)) in ch.llr(&once).iter().zip(ch.llr(&y)).enumerate() {
            let expected = if w.get(j) { -b } else { b };
            prop_assert!((a - expected).abs() <= 1e-12 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn channel_symmetry(sigma in 0.2f64..3.0, y in -6.0f64..6.0) {
        let ch = BiosChannel::awgn(sigma).unwrap();
        let a = ch.density(y, true);
        let b = ch.density(ch.symmetry(y), false);
        prop_assert!((a - b).abs() <= 1e-12 * a.max(b).max(1e-300));
    }

    #[test]
    fn posterior_flip_prob_range(ch in channel(), y in -8.0f64..8.0) {
        let y = if ch.is_bsc() { f64::from(u8::from(y > 0.0)) } else { y };
        let p = ch.posterior_flip_prob(y);
        prop_assert!((0.0..=0.5).contains(&p));
        prop_assert_eq!(p == 0.5, ch.llr_scalar(y) == 0.0);
        prop_assert!((flip_prob_from_llr(ch.llr_scalar(y)) - p).abs() < 1e-15);
    }

    #[test]
    fn decoder_is_bios_symmetric(seed in any::<u64>(), sigma in 0.5f64..1.2) {
        let code = code_128();
        let ch = BiosChannel::awgn(sigma).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = code.encode(&BitVector::random(code.k(), &mut rng)).unwrap();
        let y0 = ch.transmit(&BitVector::zeros(code.n()), &mut rng);
        let base = code.decode(&ch.llr(&y0), 20).unwrap();
        let shifted = code.decode(&ch.llr(&ch.flip(&y0, &c).unwrap()), 20).unwrap();
        prop_assert_eq!(&base.codeword ^ &c, shifted.codeword);
        prop_assert_eq!(base.converged, shifted.converged);
        prop_assert_eq!(base.iterations, shifted.iterations);
    }

    #[test]
    fn superposition_is_linear(seed in any::<u64>(), k1 in 1usize..12) {
        let code = code_128();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let frc = RandomFreeRideCode::generate(k1, code, &mut rng).unwrap();
        let a = BitVector::random(k1, &mut rng);
        let b = BitVector::random(k1, &mut rng);
        let sum = frc.encode(&(&a ^ &b)).unwrap();
        prop_assert_eq!(sum, &frc.encode(&a).unwrap() ^ &frc.encode(&b).unwrap());
        // Distinct messages land in distinct cosets of the payload code.
        if a != b {
            let diff = &frc.encode(&a).unwrap() ^ &frc.encode(&b).unwrap();
            prop_assert!(!code.syndrome(&diff).unwrap().is_zero());
        }
    }

    #[test]
    fn structured_lift_matches_syndrome_generator(k1 in 1usize..16, rm in any::<bool>()) {
        let code = code_128();
        let sc = if rm { build_rm1(k1, code.m()) } else { build_repetition(k1, code.m()) };
        let Ok(sc) = sc else { return Ok(()) };
        let frc = lift(code, &sc).unwrap();
        for r in 0..k1 {
            prop_assert_eq!(code.syndrome(&frc.g1().row(r)).unwrap(), sc.gs().row(r));
        }
    }

    #[test]
    fn noiseless_pipeline_recovers_everything(
        seed in any::<u64>(),
        scheme in 0usize..3,
        sdd in any::<bool>(),
    ) {
        let code = code_128();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let frc: Box<dyn FreeRideCode> = match scheme {
            0 => Box::new(RandomFreeRideCode::generate(6, code, &mut rng).unwrap()),
            1 => Box::new(lift(code, &build_repetition(6, code.m()).unwrap()).unwrap()),
            _ => Box::new(lift(code, &build_rm1(6, code.m()).unwrap()).unwrap()),
        };
        let mode = if sdd { DecisionMode::Sdd } else { DecisionMode::Hdd };
        let ch = BiosChannel::from_snr_db(40.0);
        let u = BitVector::random(code.k(), &mut rng);
        let v = BitVector::random(6, &mut rng);
        let x = &code.encode(&u).unwrap() ^ &frc.encode(&v).unwrap();
        let y = ch.transmit(&x, &mut rng);
        let out = successive_cancellation(code, frc.as_ref(), &ch, &y, mode, 10).unwrap();
        prop_assert_eq!(out.extra, v);
        prop_assert_eq!(out.payload, u);
    }
}
