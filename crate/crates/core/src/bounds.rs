//! Both sides of the three inequalities built on the outer product.
//!
//! With `Δ = ‖b‖ − ‖a‖`, `s = ‖a‖ + ‖b‖` and `C = Σ_λ ln(1 − 2λ/s)`:
//!
//! | statement  | left-hand side                          | right-hand side              |
//! |------------|-----------------------------------------|------------------------------|
//! | `prop_key` | `(a;b)` in the requested mode           | `#Spec·Δ·ln(s/2) + C`        |
//! | `theorem1` | `Σ_λ min_{t∈[‖a‖,‖b‖]} ln|t − λ|`       | `#Spec·ln(s/2) + C/Δ`        |
//! | `theorem2` | `∫_{‖a‖}^{‖b‖} ln|det(abᵀ − tI)| dt`    | `#Spec·Δ·ln(s/2) + C`        |
//!
//! Logarithms are natural throughout.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::integrals::{adaptive_logdet_estimate, outer_product, QuadratureConfig};
use crate::spectrum::{rank_one_spectrum, SpectrumMode, SpectrumMultiset};
use crate::sum::NeumaierSum;
use crate::vector::{check_admissible, AdmissibilityReport, Hypotheses, NormKind, Vector};

/// A real number or one of the two infinities.
///
/// Serialized as a JSON number, or as the strings `"-inf"` / `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    NegInfinity,
    Finite(f64),
    /// Only produced as a margin `rhs − (−∞)`.
    PosInfinity,
}

impl ExtendedReal {
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(x) => Some(x),
            _ => None,
        }
    }

    pub fn is_neg_infinity(self) -> bool {
        self == ExtendedReal::NegInfinity
    }

    pub fn to_f64(self) -> f64 {
        match self {
            ExtendedReal::NegInfinity => f64::NEG_INFINITY,
            ExtendedReal::Finite(x) => x,
            ExtendedReal::PosInfinity => f64::INFINITY,
        }
    }

    /// `self + x` for finite `x`; infinities absorb.
    pub fn add_finite(self, x: f64) -> Self {
        match self {
            ExtendedReal::Finite(y) => ExtendedReal::Finite(y + x),
            inf => inf,
        }
    }

    /// `x − self` for finite `x`.
    pub fn subtracted_from(self, x: f64) -> Self {
        match self {
            ExtendedReal::NegInfinity => ExtendedReal::PosInfinity,
            ExtendedReal::Finite(y) => ExtendedReal::Finite(x - y),
            ExtendedReal::PosInfinity => ExtendedReal::NegInfinity,
        }
    }
}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        use ExtendedReal::*;
        match (self, other) {
            (Finite(x), Finite(y)) => x.partial_cmp(y),
            (NegInfinity, NegInfinity) | (PosInfinity, PosInfinity) => Some(Ordering::Equal),
            (NegInfinity, _) | (_, PosInfinity) => Some(Ordering::Less),
            (_, NegInfinity) | (PosInfinity, _) => Some(Ordering::Greater),
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::NegInfinity => f.write_str("-inf"),
            ExtendedReal::Finite(x) => write!(f, "{x}"),
            ExtendedReal::PosInfinity => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtendedReal::NegInfinity => serializer.serialize_str("-inf"),
            ExtendedReal::Finite(x) => serializer.serialize_f64(*x),
            ExtendedReal::PosInfinity => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ExtendedVisitor;

        impl Visitor<'_> for ExtendedVisitor {
            type Value = ExtendedReal;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number, \"-inf\" or \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Self::Value, E> {
                Ok(ExtendedReal::Finite(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Self::Value, E> {
                Ok(ExtendedReal::Finite(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Self::Value, E> {
                Ok(ExtendedReal::Finite(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
                match v {
                    "-inf" => Ok(ExtendedReal::NegInfinity),
                    "inf" => Ok(ExtendedReal::PosInfinity),
                    other => Err(E::invalid_value(de::Unexpected::Str(other), &self)),
                }
            }
        }

        deserializer.deserialize_any(ExtendedVisitor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statement {
    PropKey,
    Theorem1,
    Theorem2,
}

impl Statement {
    pub const ALL: [Statement; 3] = [Statement::PropKey, Statement::Theorem1, Statement::Theorem2];

    pub fn as_str(self) -> &'static str {
        match self {
            Statement::PropKey => "prop_key",
            Statement::Theorem1 => "theorem1",
            Statement::Theorem2 => "theorem2",
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Statement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Statement::ALL
            .into_iter()
            .find(|st| st.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown statement {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Fails,
    /// The left-hand side is `−∞`; the inequality holds vacuously.
    DegenerateLhsNegInf,
    /// Some `1 − 2λ/s ≤ 0`, so the right-hand side has no real value.
    RhsUndefined,
}

impl Status {
    pub const ALL: [Status; 4] = [Status::Holds, Status::Fails, Status::DegenerateLhsNegInf, Status::RhsUndefined];

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::DegenerateLhsNegInf => "degenerate_lhs_neg_inf",
            Status::RhsUndefined => "rhs_undefined",
        }
    }

    /// Whether the inequality is satisfied (vacuous satisfaction included).
    pub fn is_satisfied(self) -> bool {
        matches!(self, Status::Holds | Status::DegenerateLhsNegInf)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalitySides {
    pub lhs: ExtendedReal,
    /// `None` when the right-hand side is undefined.
    pub rhs: Option<f64>,
    /// `rhs − lhs`; `None` when the right-hand side is undefined.
    pub margin: Option<ExtendedReal>,
    pub status: Status,
    pub mode: SpectrumMode,
    pub count_multiset: usize,
    pub count_set: usize,
    /// Evaluated with some hypothesis relaxed.
    #[serde(default)]
    pub outside_hypotheses: bool,
}

impl InequalitySides {
    fn classify(lhs: ExtendedReal, rhs: Option<f64>, mode: SpectrumMode, pair: &PreparedPair) -> Self {
        let (margin, status) = match rhs {
            None => (None, Status::RhsUndefined),
            Some(r) => {
                let margin = lhs.subtracted_from(r);
                let status = if lhs.is_neg_infinity() {
                    Status::DegenerateLhsNegInf
                } else if lhs <= ExtendedReal::Finite(r) {
                    Status::Holds
                } else {
                    Status::Fails
                };
                (Some(margin), status)
            }
        };
        InequalitySides {
            lhs,
            rhs,
            margin,
            status,
            mode,
            count_multiset: pair.spectrum.count(),
            count_set: pair.spectrum.with_mode(SpectrumMode::Set).count(),
            outside_hypotheses: pair.outside_hypotheses,
        }
    }
}

/// `min_{t ∈ [α, β]} ln|t − λ|`: `−∞` when `λ ∈ [α, β]`, else the log of the distance.
pub fn min_log_distance(lam: f64, alpha: f64, beta: f64) -> ExtendedReal {
    if alpha <= lam && lam <= beta {
        ExtendedReal::NegInfinity
    } else {
        let dist = (lam - alpha).abs().min((lam - beta).abs());
        ExtendedReal::Finite(dist.ln())
    }
}

/// `Σ_λ ln(1 − 2λ/s)` with weights per the spectrum's mode; `None` if any argument is `≤ 0`.
pub fn rhs_correction_sum(spec: &SpectrumMultiset, s: f64) -> Option<f64> {
    let mut acc = NeumaierSum::new();
    for (lam, weight) in spec.weighted() {
        let arg = 1.0 - 2.0 * lam / s;
        if !(arg > 0.0) {
            return None;
        }
        acc.add(weight as f64 * arg.ln());
    }
    Some(acc.value())
}

/// A pair that has passed the admissibility check, with its norms and spectrum.
#[derive(Debug, Clone)]
pub struct PreparedPair {
    pub a: Vector,
    pub b: Vector,
    pub kind: NormKind,
    pub report: AdmissibilityReport,
    /// Multiset spectrum; set mode is derived on demand.
    pub spectrum: SpectrumMultiset,
    pub outside_hypotheses: bool,
}

impl PreparedPair {
    pub fn new(a: &Vector, b: &Vector, kind: NormKind, hypotheses: &Hypotheses) -> Result<Self> {
        let report = check_admissible(a, b, kind)?;
        report.require(hypotheses)?;
        let spectrum = rank_one_spectrum(a, b, SpectrumMode::Multiset)?;
        Ok(Self {
            a: a.clone(),
            b: b.clone(),
            kind,
            outside_hypotheses: report.outside_hypotheses(hypotheses),
            report,
            spectrum,
        })
    }

    fn width(&self) -> f64 {
        self.report.norm_b - self.report.norm_a
    }

    fn log_midpoint(&self) -> f64 {
        self.report.midpoint.ln()
    }

    fn correction(&self, mode: SpectrumMode) -> Option<f64> {
        rhs_correction_sum(&self.spectrum.with_mode(mode), self.report.norm_a + self.report.norm_b)
    }

    fn count(&self, mode: SpectrumMode) -> f64 {
        self.spectrum.with_mode(mode).count() as f64
    }

    /// `#Spec·Δ·ln(s/2) + C`, shared by `prop_key` and `theorem2`.
    pub fn integral_rhs(&self, mode: SpectrumMode) -> Option<f64> {
        self.correction(mode).map(|c| self.count(mode) * self.width() * self.log_midpoint() + c)
    }

    /// `#Spec·ln(s/2) + C/Δ`.
    pub fn min_rhs(&self, mode: SpectrumMode) -> Option<f64> {
        self.correction(mode).map(|c| self.count(mode) * self.log_midpoint() + c / self.width())
    }

    pub fn prop_key(&self, mode: SpectrumMode) -> Result<InequalitySides> {
        let lhs = outer_product(&self.a, &self.b, self.kind, mode)?;
        Ok(InequalitySides::classify(ExtendedReal::Finite(lhs), self.integral_rhs(mode), mode, self))
    }

    pub fn theorem1(&self, mode: SpectrumMode) -> InequalitySides {
        let (alpha, beta) = (self.report.norm_a, self.report.norm_b);
        let mut lhs = ExtendedReal::Finite(0.0);
        let mut acc = NeumaierSum::new();
        for (lam, weight) in self.spectrum.with_mode(mode).weighted() {
            match min_log_distance(lam, alpha, beta) {
                ExtendedReal::Finite(x) => acc.add(weight as f64 * x),
                _ => lhs = ExtendedReal::NegInfinity,
            }
        }
        let lhs = lhs.add_finite(acc.value());
        InequalitySides::classify(lhs, self.min_rhs(mode), mode, self)
    }

    /// The determinant integral always counts eigenvalues with multiplicity;
    /// `mode` only selects `#Spec` and `C` on the right-hand side.
    pub fn theorem2(&self, mode: SpectrumMode) -> Result<InequalitySides> {
        let lhs = outer_product(&self.a, &self.b, self.kind, SpectrumMode::Multiset)?;
        Ok(InequalitySides::classify(ExtendedReal::Finite(lhs), self.integral_rhs(mode), mode, self))
    }

    pub fn sides(&self, statement: Statement, mode: SpectrumMode) -> Result<InequalitySides> {
        match statement {
            Statement::PropKey => self.prop_key(mode),
            Statement::Theorem1 => Ok(self.theorem1(mode)),
            Statement::Theorem2 => self.theorem2(mode),
        }
    }

    /// Recomputes the `theorem2` left-hand side by quadrature of `ln|det(abᵀ − tI)|`.
    pub fn quadrature_check(&self, cfg: &QuadratureConfig) -> Result<QuadratureCheck> {
        let closed_form = outer_product(&self.a, &self.b, self.kind, SpectrumMode::Multiset)?;
        let (alpha, beta) = (self.report.norm_a, self.report.norm_b);
        let singular_interior = self.spectrum.values().any(|lam| alpha < lam && lam < beta);
        let tolerance = if singular_interior { 1e-4 } else { 1e-8 * (1.0 + closed_form.abs()) };
        let estimate = adaptive_logdet_estimate(&self.a, &self.b, self.kind, cfg)?;
        let abs_error = (estimate.value - closed_form).abs();
        Ok(QuadratureCheck {
            closed_form,
            quadrature: estimate.value,
            abs_error,
            error_bound: estimate.error_bound,
            tolerance,
            singular_interior,
            agrees: abs_error <= tolerance,
        })
    }
}

/// Closed-form `theorem2` left-hand side compared against quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureCheck {
    pub closed_form: f64,
    pub quadrature: f64,
    pub abs_error: f64,
    /// Error bound reported by the integrator.
    pub error_bound: f64,
    /// `1e-8·(1 + |closed form|)`, or `1e-4` absolute with an interior eigenvalue.
    pub tolerance: f64,
    pub singular_interior: bool,
    pub agrees: bool,
}

pub fn prop_key_sides(a: &Vector, b: &Vector, kind: NormKind, mode: SpectrumMode) -> Result<InequalitySides> {
    PreparedPair::new(a, b, kind, &Hypotheses::strict())?.prop_key(mode)
}

pub fn theorem1_sides(a: &Vector, b: &Vector, kind: NormKind, mode: SpectrumMode) -> Result<InequalitySides> {
    Ok(PreparedPair::new(a, b, kind, &Hypotheses::strict())?.theorem1(mode))
}

/// Also recomputes the left-hand side by quadrature with the default
/// configuration and returns a quadrature error if the two disagree.
pub fn theorem2_sides(a: &Vector, b: &Vector, kind: NormKind, mode: SpectrumMode) -> Result<InequalitySides> {
    let pair = PreparedPair::new(a, b, kind, &Hypotheses::strict())?;
    let check = pair.quadrature_check(&QuadratureConfig::default())?;
    if !check.agrees {
        return Err(Error::Quadrature { estimate: check.quadrature, error_bound: check.abs_error });
    }
    pair.theorem2(mode)
}

/// Cross-checks the closed-form `theorem2` left-hand side against quadrature.
/// Disagreement beyond tolerance is reported as a quadrature error.
pub fn verify_theorem2_lhs(a: &Vector, b: &Vector, kind: NormKind, cfg: &QuadratureConfig) -> Result<QuadratureCheck> {
    let check = PreparedPair::new(a, b, kind, &Hypotheses::relaxed())?.quadrature_check(cfg)?;
    if check.agrees {
        Ok(check)
    } else {
        Err(Error::Quadrature { estimate: check.quadrature, error_bound: check.abs_error })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrals::integral_log_abs;
    use crate::spectrum::Eigenvalue;
    use crate::vector::HypothesisFailure;
    use proptest::prelude::*;

    const LN_1_5: f64 = 0.405_465_108_108_164_4;
    const LN_2: f64 = std::f64::consts::LN_2;
    // 2·∫_{1.5}^{2.5} ln t dt
    const LOGDET_FIXTURE: f64 = 1.365_058_335_046_282_2;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    fn fixture() -> (Vector, Vector) {
        (v(&[1.5, 0.0]), v(&[0.0, 2.5]))
    }

    fn spec(entries: &[(f64, usize)]) -> SpectrumMultiset {
        SpectrumMultiset {
            entries: entries.iter().map(|&(value, multiplicity)| Eigenvalue { value, multiplicity }).collect(),
            mode: SpectrumMode::Multiset,
        }
    }

    #[test]
    fn extended_real_ordering() {
        use ExtendedReal::*;
        assert!(NegInfinity < Finite(-1e308));
        assert!(Finite(1e308) < PosInfinity);
        assert_eq!(NegInfinity.add_finite(5.0), NegInfinity);
        assert_eq!(NegInfinity.subtracted_from(1.0), PosInfinity);
        assert_eq!(Finite(1.0).subtracted_from(3.0), Finite(2.0));
    }

    #[test]
    fn extended_real_serde() {
        let xs = vec![ExtendedReal::NegInfinity, ExtendedReal::Finite(0.1), ExtendedReal::PosInfinity];
        let text = serde_json::to_string(&xs).unwrap();
        assert_eq!(text, r#"["-inf",0.1,"inf"]"#);
        let back: Vec<ExtendedReal> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, xs);
        assert!(serde_json::from_str::<ExtendedReal>("\"nan\"").is_err());
    }

    #[test]
    fn min_log_distance_examples() {
        assert_eq!(min_log_distance(0.0, 1.5, 2.5), ExtendedReal::Finite(LN_1_5));
        assert_eq!(min_log_distance(2.0, 1.0, 3.0), ExtendedReal::NegInfinity);
        assert_eq!(min_log_distance(4.0, 1.0, 3.0), ExtendedReal::Finite(0.0));
        assert_eq!(min_log_distance(3.0, 1.0, 3.0), ExtendedReal::NegInfinity);
    }

    #[test]
    fn correction_sum_examples() {
        assert_eq!(rhs_correction_sum(&spec(&[(0.0, 2)]), 7.0), Some(0.0));
        let c = rhs_correction_sum(&spec(&[(2.0, 1), (0.0, 1)]), 8.0).unwrap();
        assert!((c + LN_2).abs() < 1e-15);
        let c = rhs_correction_sum(&spec(&[(-2.0, 1)]), 4.0).unwrap();
        assert!((c - LN_2).abs() < 1e-15);
        assert_eq!(rhs_correction_sum(&spec(&[(2.0, 1)]), 4.0), None);
    }

    #[test]
    fn theorem1_on_fixture() {
        let (a, b) = fixture();
        let s = theorem1_sides(&a, &b, NormKind::Euclidean, SpectrumMode::Multiset).unwrap();
        assert!((s.lhs.finite().unwrap() - 2.0 * LN_1_5).abs() < 1e-15);
        assert!((s.rhs.unwrap() - 2.0 * LN_2).abs() < 1e-15);
        assert_eq!(s.status, Status::Holds);
        assert_eq!((s.count_multiset, s.count_set), (2, 1));

        let s = theorem1_sides(&a, &b, NormKind::Euclidean, SpectrumMode::Set).unwrap();
        assert!((s.lhs.finite().unwrap() - LN_1_5).abs() < 1e-15);
        assert!((s.rhs.unwrap() - LN_2).abs() < 1e-15);
        assert_eq!(s.status, Status::Holds);
    }

    #[test]
    fn theorem1_degenerate_with_interior_eigenvalue() {
        // ⟨a,b⟩ = 1.8 ∈ [1.2, 2.5], midpoint 1.85
        let (a, b) = (v(&[1.2, 0.0]), v(&[1.5, 2.0]));
        for mode in SpectrumMode::ALL {
            let s = theorem1_sides(&a, &b, NormKind::Euclidean, mode).unwrap();
            assert_eq!(s.status, Status::DegenerateLhsNegInf);
            assert_eq!(s.lhs, ExtendedReal::NegInfinity);
            assert_eq!(s.margin, Some(ExtendedReal::PosInfinity));
            assert!(s.status.is_satisfied());
        }
    }

    #[test]
    fn theorem2_on_fixture() {
        let (a, b) = fixture();
        let s = theorem2_sides(&a, &b, NormKind::Euclidean, SpectrumMode::Multiset).unwrap();
        assert!((s.lhs.finite().unwrap() - LOGDET_FIXTURE).abs() < 1e-14);
        assert!((s.rhs.unwrap() - 2.0 * LN_2).abs() < 1e-15);
        assert_eq!(s.status, Status::Holds);

        let check = verify_theorem2_lhs(&a, &b, NormKind::Euclidean, &QuadratureConfig::default()).unwrap();
        assert!(check.abs_error < 1e-8);
        assert!(!check.singular_interior);

        // Counting distinct eigenvalues breaks the bound on this pair.
        let s = theorem2_sides(&a, &b, NormKind::Euclidean, SpectrumMode::Set).unwrap();
        assert!((s.lhs.finite().unwrap() - LOGDET_FIXTURE).abs() < 1e-14);
        assert!((s.rhs.unwrap() - LN_2).abs() < 1e-15);
        assert_eq!(s.status, Status::Fails);
    }

    #[test]
    fn prop_key_on_fixture() {
        let (a, b) = fixture();
        let s = prop_key_sides(&a, &b, NormKind::Euclidean, SpectrumMode::Multiset).unwrap();
        let margin = s.margin.unwrap().finite().unwrap();
        assert!((margin - 0.021_236_026_073_608_44).abs() < 1e-13);
        assert_eq!(s.status, Status::Holds);
    }

    #[test]
    fn inadmissible_pairs_are_rejected() {
        let err = prop_key_sides(&v(&[2.0, 0.0]), &v(&[3.0, 0.0]), NormKind::Euclidean, SpectrumMode::Multiset)
            .unwrap_err();
        assert_eq!(err, Error::Hypothesis { failures: vec![HypothesisFailure::SpectrumBound] });
        let a = v(&[1.5, 0.0]);
        let err = prop_key_sides(&a, &a, NormKind::Euclidean, SpectrumMode::Multiset).unwrap_err();
        assert!(matches!(err, Error::Hypothesis { failures } if failures.contains(&HypothesisFailure::NormOrder)));
    }

    #[test]
    fn relaxed_floor_is_labeled() {
        let (a, b) = (v(&[0.5, 0.0]), v(&[0.0, 2.0]));
        assert!(theorem1_sides(&a, &b, NormKind::Euclidean, SpectrumMode::Multiset).is_err());
        let pair = PreparedPair::new(&a, &b, NormKind::Euclidean, &Hypotheses::relaxed()).unwrap();
        assert!(pair.theorem1(SpectrumMode::Multiset).outside_hypotheses);
    }

    #[test]
    fn sides_round_trip_through_json() {
        let (a, b) = fixture();
        let pair = PreparedPair::new(&a, &b, NormKind::Euclidean, &Hypotheses::strict()).unwrap();
        for st in Statement::ALL {
            for mode in SpectrumMode::ALL {
                let s = pair.sides(st, mode).unwrap();
                let text = crate::json::to_string_pretty(&s).unwrap();
                let back: InequalitySides = serde_json::from_str(&text).unwrap();
                assert_eq!(back, s);
            }
        }
    }

    fn admissible_pair() -> impl Strategy<Value = (Vector, Vector)> {
        (2usize..6)
            .prop_flat_map(|n| (prop::collection::vec(-4.0f64..4.0, n), prop::collection::vec(-4.0f64..4.0, n)))
            .prop_filter_map("inadmissible", |(x, y)| {
                let (a, b) = (Vector::new(x).ok()?, Vector::new(y).ok()?);
                let (a, b) = if crate::norm(&a, NormKind::Euclidean).ok()? > crate::norm(&b, NormKind::Euclidean).ok()? {
                    (b, a)
                } else {
                    (a, b)
                };
                check_admissible(&a, &b, NormKind::Euclidean).ok()?.is_admissible().then_some((a, b))
            })
    }

    proptest! {
        #[test]
        fn min_is_below_mean(lam in -20.0f64..20.0, alpha in -10.0f64..10.0, width in 1e-3f64..8.0) {
            let beta = alpha + width;
            let mean = integral_log_abs(alpha, beta, lam).unwrap().value / width;
            prop_assert!(min_log_distance(lam, alpha, beta) <= ExtendedReal::Finite(mean + 1e-10));
        }

        #[test]
        fn admissible_pairs_never_have_undefined_rhs((a, b) in admissible_pair()) {
            let pair = PreparedPair::new(&a, &b, NormKind::Euclidean, &Hypotheses::strict()).unwrap();
            for st in Statement::ALL {
                for mode in SpectrumMode::ALL {
                    prop_assert_ne!(pair.sides(st, mode).unwrap().status, Status::RhsUndefined);
                }
            }
            for mode in SpectrumMode::ALL {
                prop_assert_eq!(pair.prop_key(mode).unwrap().rhs, pair.theorem2(mode).unwrap().rhs);
            }
        }

        #[test]
        fn sides_invariant_under_coordinate_permutation((a, b) in admissible_pair(), shift in 0usize..6) {
            let rotate = |v: &Vector| {
                let mut c = v.coords().to_vec();
                let k = shift % c.len();
                c.rotate_left(k);
                Vector::new(c).unwrap()
            };
            let (pa, pb) = (rotate(&a), rotate(&b));
            for mode in SpectrumMode::ALL {
                let s1 = theorem1_sides(&a, &b, NormKind::Euclidean, mode).unwrap();
                let p1 = theorem1_sides(&pa, &pb, NormKind::Euclidean, mode).unwrap();
                prop_assert_eq!(s1.status, p1.status);
                prop_assert!((s1.lhs.to_f64() - p1.lhs.to_f64()).abs() <= 1e-12 || s1.lhs == p1.lhs);
                prop_assert!((s1.rhs.unwrap() - p1.rhs.unwrap()).abs() <= 1e-12);
                let s2 = theorem2_sides(&a, &b, NormKind::Euclidean, mode).unwrap();
                let p2 = theorem2_sides(&pa, &pb, NormKind::Euclidean, mode).unwrap();
                prop_assert!((s2.lhs.to_f64() - p2.lhs.to_f64()).abs() <= 1e-12);
                prop_assert!((s2.rhs.unwrap() - p2.rhs.unwrap()).abs() <= 1e-12);
            }
        }
    }
}
