//! Coordinate vectors, norms and the standing hypotheses on a pair `(a, b)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::spectrum::{rank_one_spectrum, SpectrumMode};
use crate::sum::compensated_sum;

/// A finite-dimensional real coordinate vector. Every coordinate is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    coords: Vec<f64>,
}

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Input("vector must have at least one coordinate".into()));
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::Input(format!("coordinate {i} is not finite")));
        }
        Ok(Self { coords })
    }

    /// Parses a JSON array of numbers, e.g. `[1.5, 0]`.
    pub fn from_json(text: &str) -> Result<Self> {
        let coords: Vec<f64> =
            serde_json::from_str(text).map_err(|e| Error::Input(format!("expected a JSON array of numbers: {e}")))?;
        Self::new(coords)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.coords.iter().map(|x| c * x).collect())
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::Input(format!("basis index {index} out of range for dimension {dim}")));
        }
        let mut coords = vec![0.0; dim];
        coords[index] = 1.0;
        Self::new(coords)
    }
}

impl TryFrom<Vec<f64>> for Vector {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Self::new(coords)
    }
}

impl Serialize for Vector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Vector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let coords = Vec::<f64>::deserialize(deserializer)?;
        Vector::new(coords).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn ensure_same_dim(a: &Vector, b: &Vector) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::Input(format!("dimension mismatch: {} vs {}", a.dim(), b.dim())));
    }
    Ok(())
}

/// Which norm `‖·‖` the space carries. Text form: `l2`, `l1`, `linf`, `lp:<p>`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum NormKind {
    #[default]
    Euclidean,
    One,
    Infinity,
    /// General `p`-norm with `1 < p < ∞`.
    P(f64),
}

impl NormKind {
    pub fn validate(self) -> Result<Self> {
        match self {
            NormKind::P(p) if !(p.is_finite() && p > 1.0) => {
                Err(Error::Config(format!("p-norm requires finite p > 1, got {p}")))
            }
            other => Ok(other),
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormKind::Euclidean => f.write_str("l2"),
            NormKind::One => f.write_str("l1"),
            NormKind::Infinity => f.write_str("linf"),
            NormKind::P(p) => write!(f, "lp:{p}"),
        }
    }
}

impl FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let kind = match s.trim() {
            "l2" => NormKind::Euclidean,
            "l1" => NormKind::One,
            "linf" => NormKind::Infinity,
            other => {
                let p = other
                    .strip_prefix("lp:")
                    .ok_or_else(|| Error::Config(format!("unknown norm {other:?}; expected l2, l1, linf or lp:<p>")))?;
                let p: f64 = p.parse().map_err(|_| Error::Config(format!("cannot parse p in {other:?}")))?;
                NormKind::P(p)
            }
        };
        kind.validate()
    }
}

impl Serialize for NormKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NormKind {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Norm of `v`. Coordinates are rescaled by the largest magnitude before
/// powering so that neither overflow nor underflow occurs.
pub fn norm(v: &Vector, kind: NormKind) -> Result<f64> {
    let kind = kind.validate()?;
    let scale = v.coords.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return Ok(0.0);
    }
    let value = match kind {
        NormKind::Infinity => scale,
        NormKind::One => compensated_sum(v.coords.iter().map(|x| x.abs())),
        NormKind::Euclidean => {
            let s = compensated_sum(v.coords.iter().map(|x| {
                let r = x / scale;
                r * r
            }));
            scale * s.sqrt()
        }
        NormKind::P(p) => {
            let s = compensated_sum(v.coords.iter().map(|x| (x.abs() / scale).powf(p)));
            scale * s.powf(p.recip())
        }
    };
    Ok(value)
}

/// One of the standing hypotheses `‖b‖ > ‖a‖ > 1`, `(‖a‖+‖b‖)/2 > |max Spec(abᵀ)|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum HypothesisFailure {
    /// `‖b‖ > ‖a‖` does not hold.
    NormOrder,
    /// `‖a‖ > 1` does not hold.
    NormFloor,
    /// `(‖a‖+‖b‖)/2 > |max Spec(abᵀ)|` does not hold.
    SpectrumBound,
}

impl fmt::Display for HypothesisFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            HypothesisFailure::NormOrder => "NormOrder (requires ||b|| > ||a||)",
            HypothesisFailure::NormFloor => "NormFloor (requires ||a|| > 1)",
            HypothesisFailure::SpectrumBound => "SpectrumBound (requires (||a||+||b||)/2 > |max Spec(ab^T)|)",
        };
        f.write_str(text)
    }
}

/// Which hypotheses are enforced. The default enforces all of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Hypotheses {
    /// Exploration mode: accept `‖a‖ ≤ 1`. Results are labeled outside-hypotheses.
    pub relax_norm_floor: bool,
}

impl Hypotheses {
    pub fn strict() -> Self {
        Self::default()
    }

    pub fn relaxed() -> Self {
        Self { relax_norm_floor: true }
    }

    pub fn enforces(&self, failure: HypothesisFailure) -> bool {
        !(self.relax_norm_floor && failure == HypothesisFailure::NormFloor)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub norm_a: f64,
    pub norm_b: f64,
    pub midpoint: f64,
    /// Largest eigenvalue of `abᵀ`.
    pub max_spec: f64,
    /// Every violated hypothesis, regardless of which ones are enforced.
    pub failures: Vec<HypothesisFailure>,
}

impl AdmissibilityReport {
    pub fn is_admissible(&self) -> bool {
        self.failures.is_empty()
    }

    /// Failures that count under the given policy.
    pub fn enforced_failures(&self, hypotheses: &Hypotheses) -> Vec<HypothesisFailure> {
        self.failures.iter().copied().filter(|f| hypotheses.enforces(*f)).collect()
    }

    pub fn admits(&self, hypotheses: &Hypotheses) -> bool {
        self.enforced_failures(hypotheses).is_empty()
    }

    pub fn require(&self, hypotheses: &Hypotheses) -> Result<()> {
        let failures = self.enforced_failures(hypotheses);
        if failures.is_empty() {
            Ok(())
        } else {
            Err(Error::Hypothesis { failures })
        }
    }

    /// True when the pair is accepted only because some hypothesis is relaxed.
    pub fn outside_hypotheses(&self, hypotheses: &Hypotheses) -> bool {
        self.admits(hypotheses) && !self.is_admissible()
    }
}

/// Evaluates every standing hypothesis with exact (epsilon-free) comparisons.
pub fn check_admissible(a: &Vector, b: &Vector, kind: NormKind) -> Result<AdmissibilityReport> {
    ensure_same_dim(a, b)?;
    let norm_a = norm(a, kind)?;
    let norm_b = norm(b, kind)?;
    let midpoint = (norm_a + norm_b) / 2.0;
    let max_spec = rank_one_spectrum(a, b, SpectrumMode::Multiset)?.max();

    let mut failures = Vec::new();
    if !(norm_b > norm_a) {
        failures.push(HypothesisFailure::NormOrder);
    }
    if !(norm_a > 1.0) {
        failures.push(HypothesisFailure::NormFloor);
    }
    if !(midpoint > max_spec.abs()) {
        failures.push(HypothesisFailure::SpectrumBound);
    }
    Ok(AdmissibilityReport { norm_a, norm_b, midpoint, max_spec, failures })
}
