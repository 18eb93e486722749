//! LDPC payload codes: construction, systematic encoding, syndromes and
//! sum-product decoding.

pub mod alist;
mod decoder;
mod peg;

pub use decoder::DecodeResult;

use crate::error::{check_len, Error, Result};
use crate::gf2::{BitVector, DenseBitMatrix, SparseBitMatrix};

/// Systematic generator matrix derived from a full-rank parity-check matrix,
/// together with the pivot structure used to lift syndrome-domain vectors
/// back into codeword space.
#[derive(Clone, Debug)]
pub struct SystematicGenerator {
    /// `k × n`, every row a codeword.
    pub g: DenseBitMatrix,
    /// Non-pivot columns of `H`; row `i` of `g` has a 1 at `info_positions[i]`
    /// and is zero on every other information position.
    pub info_positions: Vec<usize>,
    /// Leftmost set of `m` linearly independent columns of `H`.
    pub pivot_cols: Vec<usize>,
    /// Inverse of `H` restricted to `pivot_cols`.
    pub pivot_inverse: DenseBitMatrix,
}

/// Derives a systematic generator for the null space of `h`.
///
/// One Gauss-Jordan pass over `[H | I]` yields both the reduced form of `H`
/// and the row transform `E` with `E H = R`. Since `R` is the identity on the
/// pivot columns, `E` is also the inverse of `H` restricted to them.
pub fn derive_generator(h: &SparseBitMatrix) -> Result<SystematicGenerator> {
    let (m, n) = (h.rows(), h.cols());
    let mut aug = h.to_dense().hstack(&DenseBitMatrix::identity(m))?;
    let pivots = aug.reduce_in_place(n);
    if pivots.len() < m {
        return Err(Error::RankDeficient {
            rank: pivots.len(),
            expected: m,
        });
    }

    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let info_positions: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
    let mut info_index = vec![usize::MAX; n];
    for (i, &c) in info_positions.iter().enumerate() {
        info_index[c] = i;
    }

    let k = n - m;
    let mut g = DenseBitMatrix::zeros(k, n);
    for (i, &c) in info_positions.iter().enumerate() {
        g.set(i, c, true);
    }
    // Row r of R reads x_{pivot r} = Σ_f R[r][f] x_f over free columns f.
    for (r, &p) in pivots.iter().enumerate() {
        for c in aug.row(r).iter_ones().take_while(|&c| c < n) {
            if !is_pivot[c] {
                g.set(info_index[c], p, true);
            }
        }
    }

    let pivot_inverse = aug.column_range(n, n + m);
    Ok(SystematicGenerator {
        g,
        info_positions,
        pivot_cols: pivots,
        pivot_inverse,
    })
}

/// Edge layout of the Tanner graph, edges numbered in check order.
#[derive(Clone, Debug)]
pub(crate) struct TannerGraph {
    pub check_start: Vec<usize>,
    pub edge_var: Vec<usize>,
    pub var_start: Vec<usize>,
    pub var_edges: Vec<usize>,
}

impl TannerGraph {
    fn new(h: &SparseBitMatrix) -> Self {
        let mut check_start = Vec::with_capacity(h.rows() + 1);
        let mut edge_var = Vec::with_capacity(h.nnz());
        check_start.push(0);
        for row in h.iter_rows() {
            edge_var.extend_from_slice(row);
            check_start.push(edge_var.len());
        }
        let mut per_var: Vec<Vec<usize>> = vec![Vec::new(); h.cols()];
        for (e, &v) in edge_var.iter().enumerate() {
            per_var[v].push(e);
        }
        let mut var_start = Vec::with_capacity(h.cols() + 1);
        let mut var_edges = Vec::with_capacity(edge_var.len());
        var_start.push(0);
        for list in per_var {
            var_edges.extend(list);
            var_start.push(var_edges.len());
        }
        Self {
            check_start,
            edge_var,
            var_start,
            var_edges,
        }
    }
}

/// A binary LDPC code `C0[n, k]` given by a full-rank parity-check matrix.
#[derive(Clone, Debug)]
pub struct LdpcCode {
    h: SparseBitMatrix,
    generator: SystematicGenerator,
    graph: TannerGraph,
    regular: Option<(usize, usize)>,
}

impl LdpcCode {
    /// Wraps a parity-check matrix, which must have full row rank.
    pub fn from_parity_check(h: SparseBitMatrix) -> Result<Self> {
        if h.rows() == 0 || h.rows() >= h.cols() {
            return Err(Error::InvalidParameter(format!(
                "parity-check matrix must satisfy 0 < m < n, got {}x{}",
                h.rows(),
                h.cols()
            )));
        }
        let generator = derive_generator(&h)?;
        let cw = h.column_weights();
        let rw = h.row_weights();
        let regular = (cw.iter().all(|&w| w == cw[0]) && rw.iter().all(|&w| w == rw[0]))
            .then(|| (cw[0], rw[0]));
        let graph = TannerGraph::new(&h);
        Ok(Self {
            h,
            generator,
            graph,
            regular,
        })
    }

    /// Builds a `(gamma, rho)`-regular code of length `n` by progressive
    /// edge growth, retrying with fresh randomness until `H` has full rank
    /// and (when the parameters allow it) no 4-cycles.
    pub fn construct_regular(n: usize, gamma: usize, rho: usize, seed: u64) -> Result<Self> {
        peg::construct_regular(n, gamma, rho, seed)
    }

    pub fn h(&self) -> &SparseBitMatrix {
        &self.h
    }

    pub fn generator(&self) -> &DenseBitMatrix {
        &self.generator.g
    }

    pub fn systematic(&self) -> &SystematicGenerator {
        &self.generator
    }

    pub fn n(&self) -> usize {
        self.h.cols()
    }

    pub fn m(&self) -> usize {
        self.h.rows()
    }

    pub fn k(&self) -> usize {
        self.n() - self.m()
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n() as f64
    }

    /// `(column weight, row weight)` if `H` is regular.
    pub fn regularity(&self) -> Option<(usize, usize)> {
        self.regular
    }

    /// Positions of the payload bits inside a codeword.
    pub fn info_positions(&self) -> &[usize] {
        &self.generator.info_positions
    }

    /// `c = u G`.
    pub fn encode(&self, u: &BitVector) -> Result<BitVector> {
        self.generator.g.left_mul(u)
    }

    /// Reads the payload bits back out of a codeword estimate.
    pub fn extract_info(&self, codeword: &BitVector) -> Result<BitVector> {
        check_len(self.n(), codeword.len())?;
        Ok(codeword.select(&self.generator.info_positions))
    }

    /// `v Hᵀ`.
    pub fn syndrome(&self, v: &BitVector) -> Result<BitVector> {
        self.h.mul_vec(v)
    }

    /// True iff the hard decisions (one byte per bit) satisfy every check.
    pub(crate) fn checks_satisfied(&self, hard: &[u8]) -> bool {
        let g = &self.graph;
        g.check_start.windows(2).all(|w| {
            g.edge_var[w[0]..w[1]]
                .iter()
                .fold(0u8, |acc, &v| acc ^ hard[v])
                == 0
        })
    }

    /// True if some pair of columns shares two or more checks.
    pub fn has_four_cycle(&self) -> bool {
        peg::has_four_cycle(&self.h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn extended_hamming_h() -> SparseBitMatrix {
        SparseBitMatrix::from_dense(
            &DenseBitMatrix::parse_rows(&["11111111", "01010101", "00110011", "00001111"]).unwrap(),
        )
    }

    /// All vectors with zero syndrome, by enumeration.
    fn null_space(h: &SparseBitMatrix) -> std::collections::HashSet<BitVector> {
        let n = h.cols();
        (0u64..1 << n)
            .map(|x| BitVector::from_u64(x, n))
            .filter(|v| h.mul_vec(v).unwrap().is_zero())
            .collect()
    }

    #[test]
    fn generator_of_standard_form() {
        // H = [I | A]  =>  G = [Aᵀ | I]
        let h = DenseBitMatrix::parse_rows(&["100110", "010011", "001101"]).unwrap();
        let gen = derive_generator(&SparseBitMatrix::from_dense(&h)).unwrap();
        let expected = DenseBitMatrix::parse_rows(&["101100", "110010", "011001"]).unwrap();
        assert_eq!(gen.g, expected);
        assert_eq!(gen.pivot_cols, vec![0, 1, 2]);
        assert_eq!(gen.info_positions, vec![3, 4, 5]);
        assert_eq!(gen.pivot_inverse, DenseBitMatrix::identity(3));
    }

    #[test]
    fn generator_of_repetition_code() {
        let h = SparseBitMatrix::new(2, vec![vec![0, 1]]).unwrap();
        let gen = derive_generator(&h).unwrap();
        assert_eq!(gen.g, DenseBitMatrix::parse_rows(&["11"]).unwrap());
    }

    #[test]
    fn generator_spans_extended_hamming_null_space() {
        let h = extended_hamming_h();
        let code = LdpcCode::from_parity_check(h.clone()).unwrap();
        assert_eq!(code.k(), 4);
        let span: std::collections::HashSet<BitVector> = (0u64..16)
            .map(|u| code.encode(&BitVector::from_u64(u, 4)).unwrap())
            .collect();
        assert_eq!(span.len(), 16);
        assert_eq!(span, null_space(&h));
        assert_eq!(code.regularity(), None);
    }

    #[test]
    fn rank_deficient_rejected() {
        let h = SparseBitMatrix::new(4, vec![vec![0, 1], vec![2, 3], vec![0, 1, 2, 3]]).unwrap();
        assert!(matches!(
            derive_generator(&h),
            Err(Error::RankDeficient {
                rank: 2,
                expected: 3
            })
        ));
        assert!(LdpcCode::from_parity_check(h).is_err());
    }

    #[test]
    fn pivot_inverse_inverts_pivot_columns() {
        let code = LdpcCode::construct_regular(96, 3, 6, 5).unwrap();
        let gen = code.systematic();
        let h1 = code.h().to_dense().select_columns(&gen.pivot_cols);
        assert_eq!(
            h1.mul(&gen.pivot_inverse).unwrap(),
            DenseBitMatrix::identity(code.m())
        );
    }

    #[test]
    fn encode_and_syndrome() {
        let code = LdpcCode::construct_regular(128, 3, 6, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        assert!(code.encode(&BitVector::zeros(code.k())).unwrap().is_zero());
        for i in [0, 7, code.k() - 1] {
            assert_eq!(
                code.encode(&BitVector::unit(code.k(), i)).unwrap(),
                code.generator().row(i)
            );
        }
        for _ in 0..20 {
            let u = BitVector::random(code.k(), &mut rng);
            let c = code.encode(&u).unwrap();
            assert!(code.syndrome(&c).unwrap().is_zero());
            assert_eq!(code.extract_info(&c).unwrap(), u);
        }
        assert!(code.encode(&BitVector::zeros(code.k() + 1)).is_err());
        assert!(code.syndrome(&BitVector::zeros(3)).is_err());
    }

    #[test]
    fn single_error_syndrome_is_column() {
        let code = LdpcCode::construct_regular(128, 3, 6, 2).unwrap();
        let cols = code.h().column_indices();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let c = code.encode(&BitVector::random(code.k(), &mut rng)).unwrap();
        for j in [0, 50, 127] {
            let mut y = c.clone();
            y.toggle(j);
            let s = code.syndrome(&y).unwrap();
            assert_eq!(s.iter_ones().collect::<Vec<_>>(), cols[j]);
        }
    }

    #[test]
    fn syndrome_matches_per_check_parity() {
        let code = LdpcCode::construct_regular(64, 3, 6, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let dense = code.h().to_dense();
        for _ in 0..20 {
            let v = BitVector::random(64, &mut rng);
            let s = code.syndrome(&v).unwrap();
            for r in 0..code.m() {
                let parity = (0..64).filter(|&c| dense.get(r, c) && v.get(c)).count() % 2 == 1;
                assert_eq!(s.get(r), parity);
            }
        }
    }
}
