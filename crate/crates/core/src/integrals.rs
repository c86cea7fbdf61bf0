//! Closed-form integrals of `ln|t − λ|`, the outer product built from them,
//! and adaptive Simpson quadrature used as an independent oracle.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::{det_rank_one_shift_with, inner_product, rank_one_spectrum, SpectrumMode};
use crate::sum::{compensated_sum, NeumaierSum};
use crate::vector::{ensure_same_dim, norm, NormKind, Vector};

/// Antiderivative of `ln|t − λ|`: `(t − λ)(ln|t − λ| − 1)`, taken as `0` at `t = λ`.
pub fn log_abs_primitive(t: f64, lam: f64) -> f64 {
    let x = t - lam;
    if x == 0.0 {
        0.0
    } else {
        x * (x.abs().ln() - 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralPiece {
    pub from: f64,
    pub to: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogIntegralResult {
    pub value: f64,
    /// `λ` lies strictly inside `(α, β)`.
    pub singular_interior: bool,
    pub pieces: Vec<IntegralPiece>,
}

/// `∫_α^β ln|t − λ| dt` in closed form, split at `λ` when it is interior.
pub fn integral_log_abs(alpha: f64, beta: f64, lam: f64) -> Result<LogIntegralResult> {
    if !(alpha.is_finite() && beta.is_finite() && lam.is_finite()) {
        return Err(Error::Input(format!("non-finite integral bounds ({alpha}, {beta}) or eigenvalue {lam}")));
    }
    if alpha > beta {
        return Err(Error::Input(format!("integral bounds out of order: {alpha} > {beta}")));
    }
    let piece = |from: f64, to: f64| IntegralPiece {
        from,
        to,
        value: log_abs_primitive(to, lam) - log_abs_primitive(from, lam),
    };
    let singular_interior = alpha < lam && lam < beta;
    let pieces = if singular_interior {
        vec![piece(alpha, lam), piece(lam, beta)]
    } else {
        vec![piece(alpha, beta)]
    };
    let value = compensated_sum(pieces.iter().map(|p| p.value));
    Ok(LogIntegralResult { value, singular_interior, pieces })
}

/// Norms of the pair and the orientation of `∫_{‖a‖}^{‖b‖}`.
struct Orientation {
    lo: f64,
    hi: f64,
    sign: f64,
}

fn orientation(a: &Vector, b: &Vector, kind: NormKind) -> Result<Orientation> {
    ensure_same_dim(a, b)?;
    let na = norm(a, kind)?;
    let nb = norm(b, kind)?;
    if !(na.is_finite() && nb.is_finite()) {
        return Err(Error::Input("vector norm overflowed".into()));
    }
    Ok(if na <= nb {
        Orientation { lo: na, hi: nb, sign: 1.0 }
    } else {
        Orientation { lo: nb, hi: na, sign: -1.0 }
    })
}

/// `Σ_λ ∫_{min}^{max} ln|t − λ| dt` over the spectrum of `abᵀ`, ignoring orientation.
pub fn unsigned_outer_integral(a: &Vector, b: &Vector, kind: NormKind, mode: SpectrumMode) -> Result<f64> {
    let o = orientation(a, b, kind)?;
    unsigned_sum(a, b, o.lo, o.hi, mode)
}

fn unsigned_sum(a: &Vector, b: &Vector, lo: f64, hi: f64, mode: SpectrumMode) -> Result<f64> {
    if lo == hi {
        return Ok(0.0);
    }
    let spectrum = rank_one_spectrum(a, b, mode)?;
    let mut acc = NeumaierSum::new();
    for (lam, weight) in spectrum.weighted() {
        acc.add(weight as f64 * integral_log_abs(lo, hi, lam)?.value);
    }
    Ok(acc.value())
}

/// The outer product `(a;b) = Σ_λ ∫_{‖a‖}^{‖b‖} ln|t − λ| dt`.
///
/// The integral is oriented: swapping `a` and `b` negates the result exactly,
/// and `(a;b) = 0` whenever `‖a‖ = ‖b‖`.
pub fn outer_product(a: &Vector, b: &Vector, kind: NormKind, mode: SpectrumMode) -> Result<f64> {
    let o = orientation(a, b, kind)?;
    Ok(o.sign * unsigned_sum(a, b, o.lo, o.hi, mode)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
    /// No quadrature node is placed closer than this to a known root.
    pub singularity_margin: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-10, rel_tol: 1e-10, max_depth: 50, singularity_margin: 1e-12 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.abs_tol) || !positive(self.rel_tol) || !positive(self.singularity_margin) {
            return Err(Error::Config("quadrature tolerances and margin must be positive".into()));
        }
        if self.max_depth < 10 {
            return Err(Error::Config(format!("max_depth must be at least 10, got {}", self.max_depth)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureEstimate {
    pub value: f64,
    pub error_bound: f64,
    pub evaluations: usize,
}

#[derive(Debug, Default)]
struct Accumulator {
    value: NeumaierSum,
    error: f64,
    evaluations: usize,
    converged: bool,
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

fn simpson_recurse<F: Fn(f64) -> f64>(
    f: &F,
    p: Panel,
    abs_tol: f64,
    rel_tol: f64,
    depth: u32,
    acc: &mut Accumulator,
) {
    let m = 0.5 * (p.a + p.b);
    let (lm, rm) = (0.5 * (p.a + m), 0.5 * (m + p.b));
    let (flm, frm) = (f(lm), f(rm));
    acc.evaluations += 2;
    let h = p.b - p.a;
    let left = h * (p.fa + 4.0 * flm + p.fm) / 12.0;
    let right = h * (p.fm + 4.0 * frm + p.fb) / 12.0;
    let both = left + right;
    let diff = both - p.whole;
    let tol = abs_tol.max(rel_tol * both.abs());

    if !diff.is_finite() {
        acc.converged = false;
        acc.error = f64::INFINITY;
        acc.value.add(both);
        return;
    }
    if diff.abs() <= 15.0 * tol {
        acc.value.add(both + diff / 15.0);
        acc.error += diff.abs() / 15.0;
        return;
    }
    // Out of depth, or the panel cannot be split further in binary64.
    if depth == 0 || lm <= p.a || rm >= p.b || m <= lm || m >= rm {
        acc.converged = false;
        acc.value.add(both + diff / 15.0);
        acc.error += diff.abs();
        return;
    }
    let half = 0.5 * abs_tol;
    simpson_recurse(f, Panel { a: p.a, b: m, fa: p.fa, fm: flm, fb: p.fm, whole: left }, half, rel_tol, depth - 1, acc);
    simpson_recurse(f, Panel { a: m, b: p.b, fa: p.fm, fm: frm, fb: p.fb, whole: right }, half, rel_tol, depth - 1, acc);
}

fn simpson_segment<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64, cfg: &QuadratureConfig, acc: &mut Accumulator) {
    if a == b {
        return;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    acc.evaluations += 3;
    let whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0;
    simpson_recurse(f, Panel { a, b, fa, fm, fb, whole }, abs_tol, cfg.rel_tol, cfg.max_depth, acc);
}

fn finish(acc: Accumulator) -> Result<QuadratureEstimate> {
    let value = acc.value.value();
    if acc.converged && value.is_finite() {
        Ok(QuadratureEstimate { value, error_bound: acc.error, evaluations: acc.evaluations })
    } else {
        Err(Error::Quadrature { estimate: value, error_bound: acc.error })
    }
}

/// Adaptive Simpson quadrature of a smooth integrand over `[lo, hi]`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, cfg: &QuadratureConfig) -> Result<QuadratureEstimate> {
    cfg.validate()?;
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(Error::Input(format!("invalid quadrature interval [{lo}, {hi}]")));
    }
    let mut acc = Accumulator { converged: true, ..Default::default() };
    simpson_segment(&f, lo, hi, cfg.abs_tol, cfg, &mut acc);
    finish(acc)
}

/// Adaptive Simpson quadrature of an integrand with logarithmic singularities
/// at the known `roots`.
///
/// `[lo, hi]` is split at every interior root and each sub-interval is halved.
/// A half adjacent to a root `r` is integrated in the variable `u = ln|t − r|`,
/// which turns `ln|t − r|·dt` into the smooth `u·eᵘ·du`; its lower limit is
/// `ln(singularity_margin)`, so no node comes closer than the margin to `r`.
/// Other halves use plain Simpson.
pub fn adaptive_simpson_with_roots<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    roots: &[f64],
    cfg: &QuadratureConfig,
) -> Result<QuadratureEstimate> {
    cfg.validate()?;
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(Error::Input(format!("invalid quadrature interval [{lo}, {hi}]")));
    }
    let mut breaks = vec![lo];
    let mut interior: Vec<f64> = roots.iter().copied().filter(|r| lo < *r && *r < hi).collect();
    interior.sort_by(f64::total_cmp);
    interior.dedup();
    breaks.extend(interior);
    breaks.push(hi);

    let margin = cfg.singularity_margin;
    let segments = 2 * (breaks.len() - 1);
    let share = cfg.abs_tol / segments as f64;
    let mut acc = Accumulator { converged: true, ..Default::default() };

    for w in breaks.windows(2) {
        let (p, q) = (w[0], w[1]);
        if p == q {
            continue;
        }
        let m = 0.5 * (p + q);

        let left_anchor = roots.iter().copied().filter(|r| *r <= p && p - r < m - p).fold(f64::NEG_INFINITY, f64::max);
        if left_anchor.is_finite() {
            let r = left_anchor;
            let start = (p - r).max(margin);
            omitted_piece(&f, r + start, start - (p - r), &mut acc);
            if r + start < m {
                let g = |u: f64| {
                    let e = u.exp();
                    f(r + e) * e
                };
                simpson_segment(&g, start.ln(), (m - r).ln(), share, cfg, &mut acc);
            }
        } else {
            simpson_segment(&f, p, m, share, cfg, &mut acc);
        }

        let right_anchor = roots.iter().copied().filter(|r| *r >= q && r - q < q - m).fold(f64::INFINITY, f64::min);
        if right_anchor.is_finite() {
            let r = right_anchor;
            let start = (r - q).max(margin);
            omitted_piece(&f, r - start, start - (r - q), &mut acc);
            if r - start > m {
                let g = |u: f64| {
                    let e = u.exp();
                    f(r - e) * e
                };
                simpson_segment(&g, start.ln(), (r - m).ln(), share, cfg, &mut acc);
            }
        } else {
            simpson_segment(&f, m, q, share, cfg, &mut acc);
        }
    }
    finish(acc)
}

/// Accounts for the sliver of width `width` next to a root that the
/// quadrature skips: it contributes at most `width·(|f(node)| + 1)` in magnitude.
fn omitted_piece<F: Fn(f64) -> f64>(f: &F, node: f64, width: f64, acc: &mut Accumulator) {
    if width > 0.0 {
        acc.error += width * (f(node).abs() + 1.0);
        acc.evaluations += 1;
    }
}

/// `∫_{‖a‖}^{‖b‖} ln|det(abᵀ − tI)| dt` by adaptive quadrature of the
/// determinant-lemma integrand, pre-split at every interior eigenvalue.
pub fn adaptive_logdet_integral(a: &Vector, b: &Vector, kind: NormKind, cfg: &QuadratureConfig) -> Result<f64> {
    adaptive_logdet_estimate(a, b, kind, cfg).map(|e| e.value)
}

pub fn adaptive_logdet_estimate(a: &Vector, b: &Vector, kind: NormKind, cfg: &QuadratureConfig) -> Result<QuadratureEstimate> {
    ensure_same_dim(a, b)?;
    if a.dim() > crate::spectrum::ELIMINATION_MAX_DIM {
        return Err(Error::Input(format!("log-det quadrature supports n <= 16, got {}", a.dim())));
    }
    let na = norm(a, kind)?;
    let nb = norm(b, kind)?;
    if !(na < nb) {
        return Err(Error::Input(format!("log-det quadrature requires ||a|| < ||b|| (got {na} and {nb})")));
    }
    let ip = inner_product(a, b)?;
    let n = a.dim();
    let roots: Vec<f64> = rank_one_spectrum(a, b, SpectrumMode::Set)?.values().collect();
    adaptive_simpson_with_roots(|t| det_rank_one_shift_with(ip, n, t).abs().ln(), na, nb, &roots, cfg)
}
