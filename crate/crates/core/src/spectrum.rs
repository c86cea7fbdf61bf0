//! Spectrum of the rank-one matrix `abᵀ`, with a characteristic-polynomial
//! oracle and a pivoted-elimination determinant.
//!
//! `abᵀ` has rank at most one, so its eigenvalues are `⟨a,b⟩` (once) and `0`
//! (`n − 1` times). The analytic form is the primary path; [`char_poly`] and
//! [`det_via_elimination`] work on the dense matrix and share no code with it.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sum::compensated_dot;
use crate::vector::{ensure_same_dim, Vector};

/// Whether eigenvalues are counted with algebraic multiplicity or as distinct values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumMode {
    #[default]
    Multiset,
    Set,
}

impl SpectrumMode {
    pub const ALL: [SpectrumMode; 2] = [SpectrumMode::Multiset, SpectrumMode::Set];
}

impl fmt::Display for SpectrumMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpectrumMode::Multiset => "multiset",
            SpectrumMode::Set => "set",
        })
    }
}

impl FromStr for SpectrumMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "multiset" => Ok(SpectrumMode::Multiset),
            "set" => Ok(SpectrumMode::Set),
            other => Err(Error::Config(format!("unknown spectrum mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalue {
    pub value: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumMultiset {
    pub entries: Vec<Eigenvalue>,
    pub mode: SpectrumMode,
}

impl SpectrumMultiset {
    /// `#Spec`: total multiplicity in multiset mode, number of distinct values in set mode.
    pub fn count(&self) -> usize {
        match self.mode {
            SpectrumMode::Multiset => self.entries.iter().map(|e| e.multiplicity).sum(),
            SpectrumMode::Set => self.entries.len(),
        }
    }

    /// `(eigenvalue, weight)` pairs, where the weight is the multiplicity
    /// honored by the current mode.
    pub fn weighted(&self) -> impl Iterator<Item = (f64, usize)> + '_ {
        self.entries.iter().map(move |e| {
            let weight = match self.mode {
                SpectrumMode::Multiset => e.multiplicity,
                SpectrumMode::Set => 1,
            };
            (e.value, weight)
        })
    }

    pub fn max(&self) -> f64 {
        self.entries.iter().map(|e| e.value).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|e| e.value)
    }

    pub fn with_mode(&self, mode: SpectrumMode) -> Self {
        let entries = match mode {
            SpectrumMode::Multiset => self.entries.clone(),
            SpectrumMode::Set => self.entries.iter().map(|e| Eigenvalue { multiplicity: 1, ..*e }).collect(),
        };
        Self { entries, mode }
    }
}

/// `⟨a,b⟩`, the only possibly nonzero eigenvalue of `abᵀ`.
pub fn inner_product(a: &Vector, b: &Vector) -> Result<f64> {
    ensure_same_dim(a, b)?;
    Ok(compensated_dot(a.coords(), b.coords()))
}

/// Spectrum of `abᵀ` in closed form: `{⟨a,b⟩, 0^(n−1)}`, or `{0^n}` when
/// `⟨a,b⟩` is exactly zero. Entries are listed nonzero eigenvalue first.
pub fn rank_one_spectrum(a: &Vector, b: &Vector, mode: SpectrumMode) -> Result<SpectrumMultiset> {
    let ip = inner_product(a, b)?;
    let n = a.dim();
    let entries = if ip == 0.0 {
        vec![Eigenvalue { value: 0.0, multiplicity: n }]
    } else if n == 1 {
        vec![Eigenvalue { value: ip, multiplicity: 1 }]
    } else {
        vec![Eigenvalue { value: ip, multiplicity: 1 }, Eigenvalue { value: 0.0, multiplicity: n - 1 }]
    };
    Ok(SpectrumMultiset { entries, mode: SpectrumMode::Multiset }.with_mode(mode))
}

/// Dense row-major square matrix, only used by the oracles.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Input("matrix must be square and non-empty".into()));
        }
        Ok(Self { n, data: rows.concat() })
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    /// `abᵀ − shift·I`.
    pub fn rank_one_shift(a: &Vector, b: &Vector, shift: f64) -> Result<Self> {
        ensure_same_dim(a, b)?;
        let n = a.dim();
        let mut m = Self::zeros(n);
        for (i, ai) in a.coords().iter().enumerate() {
            for (j, bj) in b.coords().iter().enumerate() {
                m[(i, j)] = ai * bj;
            }
            m[(i, i)] -= shift;
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

}

impl std::ops::Index<(usize, usize)> for SquareMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// Monic characteristic polynomial, coefficients in descending degree.
#[derive(Debug, Clone, PartialEq)]
pub struct CharPoly {
    pub coeffs: Vec<f64>,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner evaluation.
    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, c| acc * t + c)
    }
}

pub const CHAR_POLY_MAX_DIM: usize = 8;
pub const ELIMINATION_MAX_DIM: usize = 16;

/// Unevaluated sum `hi + lo` carrying about 106 bits of significand.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl DoubleDouble {
    fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    fn normalized(hi: f64, lo: f64) -> Self {
        let s = hi + lo;
        Self { hi: s, lo: lo - (s - hi) }
    }

    fn add(self, other: Self) -> Self {
        let s = self.hi + other.hi;
        let bb = s - self.hi;
        let err = (self.hi - (s - bb)) + (other.hi - bb);
        Self::normalized(s, err + self.lo + other.lo)
    }

    fn mul(self, other: Self) -> Self {
        let p = self.hi * other.hi;
        let err = self.hi.mul_add(other.hi, -p);
        Self::normalized(p, err + self.hi * other.lo + self.lo * other.hi)
    }

    fn neg(self) -> Self {
        Self { hi: -self.hi, lo: -self.lo }
    }

    fn div_f64(self, d: f64) -> Self {
        let q = self.hi / d;
        let p = q * d;
        let err = q.mul_add(d, -p);
        Self::normalized(q, ((self.hi - p) - err + self.lo) / d)
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// `det(tI − M)` by the Faddeev–LeVerrier recursion
/// `M₁ = I`, `c_{n−k} = −tr(M·M_k)/k`, `M_{k+1} = M·M_k + c_{n−k}·I`.
///
/// Rounding in `M_k` is amplified by `‖M‖` at every step, so the recursion
/// runs in double-double arithmetic.
pub fn char_poly(m: &SquareMatrix) -> Result<CharPoly> {
    let n = m.dim();
    if n > CHAR_POLY_MAX_DIM {
        return Err(Error::Input(format!("char_poly oracle supports n <= {CHAR_POLY_MAX_DIM}, got {n}")));
    }
    let entry = |i: usize, j: usize| DoubleDouble::from_f64(m[(i, j)]);
    let mut coeffs = vec![0.0; n + 1];
    coeffs[0] = 1.0;
    let mut mk: Vec<DoubleDouble> = (0..n * n)
        .map(|idx| DoubleDouble::from_f64(if idx / n == idx % n { 1.0 } else { 0.0 }))
        .collect();
    for k in 1..=n {
        let mut am = vec![DoubleDouble::default(); n * n];
        for i in 0..n {
            for j in 0..n {
                am[i * n + j] = (0..n).fold(DoubleDouble::default(), |acc, l| acc.add(entry(i, l).mul(mk[l * n + j])));
            }
        }
        let trace = (0..n).fold(DoubleDouble::default(), |acc, i| acc.add(am[i * n + i]));
        let c = trace.neg().div_f64(k as f64);
        coeffs[k] = c.to_f64();
        for i in 0..n {
            am[i * n + i] = am[i * n + i].add(c);
        }
        mk = am;
    }
    Ok(CharPoly { coeffs })
}

/// `det(abᵀ − tI) = (−t)^(n−1)·(⟨a,b⟩ − t)` by the matrix determinant lemma.
pub fn det_rank_one_shift(a: &Vector, b: &Vector, t: f64) -> Result<f64> {
    let ip = inner_product(a, b)?;
    Ok(det_rank_one_shift_with(ip, a.dim(), t))
}

pub(crate) fn det_rank_one_shift_with(ip: f64, n: usize, t: f64) -> f64 {
    (-t).powi(n as i32 - 1) * (ip - t)
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det_via_elimination(m: &SquareMatrix) -> Result<f64> {
    let n = m.dim();
    if n > ELIMINATION_MAX_DIM {
        return Err(Error::Input(format!("elimination oracle supports n <= {ELIMINATION_MAX_DIM}, got {n}")));
    }
    let mut w = m.clone();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| w[(i, col)].abs().total_cmp(&w[(j, col)].abs()))
            .expect("non-empty range");
        if w[(pivot, col)] == 0.0 {
            return Ok(0.0);
        }
        if pivot != col {
            for j in 0..n {
                w.data.swap(pivot * n + j, col * n + j);
            }
            det = -det;
        }
        let p = w[(col, col)];
        det *= p;
        for i in col + 1..n {
            let factor = w[(i, col)] / p;
            if factor != 0.0 {
                for j in col..n {
                    let v = w[(col, j)];
                    w[(i, j)] -= factor * v;
                }
            }
        }
    }
    Ok(det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    fn entries(s: &SpectrumMultiset) -> Vec<(f64, usize)> {
        s.entries.iter().map(|e| (e.value, e.multiplicity)).collect()
    }

    #[test]
    fn orthogonal_pair_is_nilpotent() {
        let s = rank_one_spectrum(&v(&[2.0, 0.0]), &v(&[0.0, 3.0]), SpectrumMode::Multiset).unwrap();
        assert_eq!(entries(&s), vec![(0.0, 2)]);
        assert_eq!(s.count(), 2);
        let set = s.with_mode(SpectrumMode::Set);
        assert_eq!(entries(&set), vec![(0.0, 1)]);
        assert_eq!(set.count(), 1);
    }

    #[test]
    fn all_ones_has_trace_two() {
        let s = rank_one_spectrum(&v(&[1.0, 1.0]), &v(&[1.0, 1.0]), SpectrumMode::Multiset).unwrap();
        assert_eq!(entries(&s), vec![(2.0, 1), (0.0, 1)]);
        assert_eq!(s.with_mode(SpectrumMode::Set).count(), 2);
    }

    #[test]
    fn projection_in_three_dimensions() {
        let e1 = Vector::basis(3, 0).unwrap();
        let s = rank_one_spectrum(&e1, &e1, SpectrumMode::Multiset).unwrap();
        assert_eq!(entries(&s), vec![(1.0, 1), (0.0, 2)]);
        assert_eq!(s.max(), 1.0);
    }

    #[test]
    fn spectrum_rejects_dimension_mismatch() {
        assert!(rank_one_spectrum(&v(&[1.0]), &v(&[1.0, 2.0]), SpectrumMode::Set).is_err());
    }

    #[test]
    fn double_double_keeps_low_order_bits() {
        let x = DoubleDouble::from_f64(1.0).add(DoubleDouble::from_f64(1e-20));
        let y = x.add(DoubleDouble::from_f64(-1.0));
        assert_eq!(y.to_f64(), 1e-20);
        let third = DoubleDouble::from_f64(1.0).div_f64(3.0);
        let back = third.mul(DoubleDouble::from_f64(3.0)).add(DoubleDouble::from_f64(-1.0));
        assert!(back.to_f64().abs() < 1e-30);
    }

    #[test]
    fn char_poly_examples() {
        let ones = SquareMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(char_poly(&ones).unwrap().coeffs, vec![1.0, -2.0, 0.0]);
        assert_eq!(char_poly(&SquareMatrix::identity(2)).unwrap().coeffs, vec![1.0, -2.0, 1.0]);
        assert_eq!(char_poly(&SquareMatrix::zeros(3)).unwrap().coeffs, vec![1.0, 0.0, 0.0, 0.0]);
        assert!(char_poly(&SquareMatrix::zeros(9)).is_err());
    }

    #[test]
    fn determinant_lemma_examples() {
        assert_eq!(det_rank_one_shift(&v(&[1.5, 0.0]), &v(&[0.0, 2.5]), 2.0).unwrap(), 4.0);
        assert_eq!(det_rank_one_shift(&v(&[2.0, 0.0]), &v(&[3.0, 0.0]), 1.0).unwrap(), -5.0);
        assert_eq!(det_rank_one_shift(&v(&[1.0, 2.0, 3.0]), &v(&[4.0, 5.0, 6.0]), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn elimination_examples() {
        let upper = SquareMatrix::from_rows(&[vec![-2.0, 3.75], vec![0.0, -2.0]]).unwrap();
        assert_eq!(det_via_elimination(&upper).unwrap(), 4.0);
        assert_eq!(det_via_elimination(&SquareMatrix::identity(7)).unwrap(), 1.0);
        let dup = SquareMatrix::from_rows(&[
            vec![1.0, 2.0, 3.0],
            vec![4.0, 5.0, 6.5],
            vec![1.0, 2.0, 3.0],
        ])
        .unwrap();
        assert!(det_via_elimination(&dup).unwrap().abs() <= 1e-12 * 6.5);
        let swapped = SquareMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(det_via_elimination(&swapped).unwrap(), -1.0);
    }

    #[test]
    fn cross_check_of_lemma_against_dense_matrix() {
        let (a, b) = (v(&[1.5, 0.0]), v(&[0.0, 2.5]));
        let m = SquareMatrix::rank_one_shift(&a, &b, 2.0).unwrap();
        assert_eq!(m, SquareMatrix::from_rows(&[vec![-2.0, 3.75], vec![0.0, -2.0]]).unwrap());
        assert_eq!(det_via_elimination(&m).unwrap(), 4.0);
    }

    fn pair(dims: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (Vector, Vector)> {
        dims.prop_flat_map(|n| {
            (prop::collection::vec(-5.0f64..5.0, n), prop::collection::vec(-5.0f64..5.0, n))
                .prop_map(|(x, y)| (Vector::new(x).unwrap(), Vector::new(y).unwrap()))
        })
    }

    proptest! {
        #[test]
        fn char_poly_matches_rank_one_form((a, b) in pair(2..=6)) {
            let ip = inner_product(&a, &b).unwrap();
            let m = SquareMatrix::rank_one_shift(&a, &b, 0.0).unwrap();
            let got = char_poly(&m).unwrap();
            let mut want = vec![0.0; a.dim() + 1];
            want[0] = 1.0;
            want[1] = -ip;
            let scale = want.iter().chain(&got.coeffs).fold(1.0f64, |s, c| s.max(c.abs()));
            for (g, w) in got.coeffs.iter().zip(&want) {
                prop_assert!((g - w).abs() <= 1e-9 * scale, "{:?} vs {:?}", got.coeffs, want);
            }
        }

        #[test]
        fn eigenvalues_are_roots_of_char_poly((a, b) in pair(2..=6)) {
            let m = SquareMatrix::rank_one_shift(&a, &b, 0.0).unwrap();
            let p = char_poly(&m).unwrap();
            let na = crate::vector::norm(&a, crate::NormKind::Euclidean).unwrap();
            let nb = crate::vector::norm(&b, crate::NormKind::Euclidean).unwrap();
            let bound = 1e-8 * (na * nb).max(1.0).powi(a.dim() as i32);
            for lam in rank_one_spectrum(&a, &b, SpectrumMode::Multiset).unwrap().values() {
                prop_assert!(p.eval(lam).abs() <= bound);
            }
        }

        #[test]
        fn lemma_matches_elimination((a, b) in pair(1..=8), t in -10.0f64..10.0) {
            let closed = det_rank_one_shift(&a, &b, t).unwrap();
            let dense = det_via_elimination(&SquareMatrix::rank_one_shift(&a, &b, t).unwrap()).unwrap();
            prop_assert!((closed - dense).abs() <= 1e-9 * closed.abs().max(dense.abs()).max(1e-300),
                "closed {closed} dense {dense}");
        }

        #[test]
        fn spectrum_of_transpose_is_identical((a, b) in pair(1..=8)) {
            for mode in SpectrumMode::ALL {
                prop_assert_eq!(
                    rank_one_spectrum(&a, &b, mode).unwrap(),
                    rank_one_spectrum(&b, &a, mode).unwrap()
                );
            }
        }
    }
}
