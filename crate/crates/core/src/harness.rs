//! Seeded randomized campaign over admissible pairs.
//!
//! Trial `i` of a campaign seeded with `seed` draws from its own generator,
//! keyed by `sub_seed(seed, i)`. Trials therefore do not depend on execution
//! order, and a parallel run produces the same report as a sequential one.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{ExtendedReal, InequalitySides, PreparedPair, QuadratureCheck, Statement, Status};
use crate::error::{Error, Result};
use crate::integrals::QuadratureConfig;
use crate::spectrum::{inner_product, SpectrumMode};
use crate::sum::compensated_sum;
use crate::vector::{check_admissible, norm, AdmissibilityReport, Hypotheses, NormKind, Vector};

pub const MAX_CONSECUTIVE_REJECTIONS: usize = 10_000;
pub const DIM_LIMITS: RangeInclusive<usize> = 2..=8;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64_mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `trial_index`: output number `trial_index` of a SplitMix64
/// stream started at `seed`, computed directly from the counter.
pub fn sub_seed(seed: u64, trial_index: u64) -> u64 {
    splitmix64_mix(seed.wrapping_add(trial_index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub trials: u64,
    pub seed: u64,
    pub dim_min: usize,
    pub dim_max: usize,
    pub norm_kind: NormKind,
    pub coord_scale: f64,
    pub modes: Vec<SpectrumMode>,
    pub quadrature: QuadratureConfig,
    pub check_quadrature_every: u64,
    #[serde(default)]
    pub hypotheses: Hypotheses,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            trials: 1000,
            seed: 0,
            dim_min: 2,
            dim_max: 6,
            norm_kind: NormKind::Euclidean,
            coord_scale: 5.0,
            modes: SpectrumMode::ALL.to_vec(),
            quadrature: QuadratureConfig::default(),
            check_quadrature_every: 100,
            hypotheses: Hypotheses::strict(),
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if !(DIM_LIMITS.contains(&self.dim_min) && DIM_LIMITS.contains(&self.dim_max)) || self.dim_min > self.dim_max {
            return Err(Error::Config(format!(
                "dimension range {}..={} must satisfy 2 <= dim_min <= dim_max <= 8",
                self.dim_min, self.dim_max
            )));
        }
        if !(self.coord_scale.is_finite() && self.coord_scale > 0.0) {
            return Err(Error::Config(format!("coord_scale must be positive, got {}", self.coord_scale)));
        }
        if self.modes.is_empty() {
            return Err(Error::Config("at least one spectrum mode is required".into()));
        }
        if self.check_quadrature_every == 0 {
            return Err(Error::Config("check_quadrature_every must be at least 1".into()));
        }
        self.norm_kind.validate()?;
        self.quadrature.validate()
    }

    fn dims(&self) -> RangeInclusive<usize> {
        self.dim_min..=self.dim_max
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledPair {
    pub a: Vector,
    pub b: Vector,
    /// Raw draws discarded before this pair was accepted.
    pub rejections: u64,
}

/// Rejection sampler for pairs satisfying the hypotheses.
///
/// Coordinates are uniform in `[−coord_scale, coord_scale]`; the pair is
/// ordered so that `‖b‖ > ‖a‖`; if `‖a‖ ≤ 1` both vectors are scaled by the
/// smallest common factor that lifts `‖a‖` above 1. A draw that still fails
/// a hypothesis is discarded. The dimension is drawn once per call.
pub fn sample_admissible_pair(
    sub_seed: u64,
    dims: RangeInclusive<usize>,
    coord_scale: f64,
    norm_kind: NormKind,
) -> Result<SampledPair> {
    sample_admissible_pair_with(sub_seed, dims, coord_scale, norm_kind, &Hypotheses::strict())
}

pub fn sample_admissible_pair_with(
    sub_seed: u64,
    dims: RangeInclusive<usize>,
    coord_scale: f64,
    norm_kind: NormKind,
    hypotheses: &Hypotheses,
) -> Result<SampledPair> {
    if dims.is_empty() || *dims.start() == 0 {
        return Err(Error::Config(format!("invalid dimension range {dims:?}")));
    }
    if !(coord_scale.is_finite() && coord_scale > 0.0) {
        return Err(Error::Config(format!("coord_scale must be positive, got {coord_scale}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed);
    let dim = rng.random_range(dims);
    let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        (0..dim).map(|_| rng.random_range(-coord_scale..=coord_scale)).collect()
    };

    for attempt in 0..MAX_CONSECUTIVE_REJECTIONS {
        let (x, y) = (draw(&mut rng), draw(&mut rng));
        if let Some((a, b)) = accept_draw(x, y, norm_kind, hypotheses)? {
            return Ok(SampledPair { a, b, rejections: attempt as u64 });
        }
    }
    Err(Error::SamplerExhausted(MAX_CONSECUTIVE_REJECTIONS))
}

fn accept_draw(x: Vec<f64>, y: Vec<f64>, kind: NormKind, hypotheses: &Hypotheses) -> Result<Option<(Vector, Vector)>> {
    let (mut a, mut b) = (Vector::new(x)?, Vector::new(y)?);
    let (mut na, mut nb) = (norm(&a, kind)?, norm(&b, kind)?);
    if na > nb {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut na, &mut nb);
    }
    if !(nb > na) || na == 0.0 {
        return Ok(None);
    }
    if hypotheses.enforces(crate::vector::HypothesisFailure::NormFloor) && na <= 1.0 {
        let mut factor = 1.0 / na;
        // A few ulps at most; scaling is not exact in binary64.
        for _ in 0..8 {
            let scaled = a.scaled(factor)?;
            if norm(&scaled, kind)? > 1.0 {
                a = scaled;
                b = b.scaled(factor)?;
                break;
            }
            factor = f64::from_bits(factor.to_bits() + 1);
        }
    }
    let report = check_admissible(&a, &b, kind)?;
    Ok(report.admits(hypotheses).then_some((a, b)))
}

pub type SidesMap = BTreeMap<Statement, BTreeMap<SpectrumMode, InequalitySides>>;

/// Everything needed to reproduce one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_index: u64,
    pub sub_seed: u64,
    pub norm: NormKind,
    pub dim: usize,
    pub a: Vector,
    pub b: Vector,
    pub inner_product: f64,
    pub rejections: u64,
    pub admissibility: AdmissibilityReport,
    pub outside_hypotheses: bool,
    pub sides: SidesMap,
    pub quadrature_checked: bool,
    pub quadrature: Option<QuadratureCheck>,
    pub quadrature_error: Option<String>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl TrialRecord {
    pub fn has_status(&self, status: Status) -> bool {
        self.sides.values().flat_map(|m| m.values()).any(|s| s.status == status)
    }
}

/// Evaluates every statement in every requested mode on `pair`.
pub fn evaluate_sides(pair: &PreparedPair, modes: &[SpectrumMode]) -> Result<SidesMap> {
    let mut sides = SidesMap::new();
    for st in Statement::ALL {
        let per_mode = sides.entry(st).or_default();
        for &mode in modes {
            per_mode.insert(mode, pair.sides(st, mode)?);
        }
    }
    Ok(sides)
}

pub fn run_trial(cfg: &CampaignConfig, trial_index: u64) -> Result<TrialRecord> {
    let start = Instant::now();
    let seed = sub_seed(cfg.seed, trial_index);
    let sample = sample_admissible_pair_with(seed, cfg.dims(), cfg.coord_scale, cfg.norm_kind, &cfg.hypotheses)?;
    let mut record = evaluate_trial(cfg, trial_index, seed, &sample.a, &sample.b, sample.rejections)?;
    record.wall_time = start.elapsed();
    Ok(record)
}

/// Runs trial `trial_index` on a caller-supplied pair instead of a sampled one.
pub fn run_trial_on_pair(cfg: &CampaignConfig, trial_index: u64, a: &Vector, b: &Vector) -> Result<TrialRecord> {
    let start = Instant::now();
    let mut record = evaluate_trial(cfg, trial_index, sub_seed(cfg.seed, trial_index), a, b, 0)?;
    record.wall_time = start.elapsed();
    Ok(record)
}

fn evaluate_trial(
    cfg: &CampaignConfig,
    trial_index: u64,
    sub_seed: u64,
    a: &Vector,
    b: &Vector,
    rejections: u64,
) -> Result<TrialRecord> {
    let pair = PreparedPair::new(a, b, cfg.norm_kind, &cfg.hypotheses)?;
    let sides = evaluate_sides(&pair, &cfg.modes)?;
    let quadrature_checked = trial_index % cfg.check_quadrature_every == 0;
    let (quadrature, quadrature_error) = if quadrature_checked {
        match pair.quadrature_check(&cfg.quadrature) {
            Ok(check) => (Some(check), None),
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (None, None)
    };
    Ok(TrialRecord {
        trial_index,
        sub_seed,
        norm: cfg.norm_kind,
        dim: a.dim(),
        a: a.clone(),
        b: b.clone(),
        inner_product: inner_product(a, b)?,
        rejections,
        outside_hypotheses: pair.outside_hypotheses,
        admissibility: pair.report,
        sides,
        quadrature_checked,
        quadrature,
        quadrature_error,
        wall_time: Duration::ZERO,
    })
}

/// Re-evaluates a record's pair from its stored vectors alone.
pub fn replay(record: &TrialRecord) -> Result<SidesMap> {
    let hypotheses = if record.outside_hypotheses { Hypotheses::relaxed() } else { Hypotheses::strict() };
    let pair = PreparedPair::new(&record.a, &record.b, record.norm, &hypotheses)?;
    let modes: Vec<SpectrumMode> = record.sides.values().flat_map(|m| m.keys().copied()).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    evaluate_sides(&pair, &modes)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatusTally {
    pub holds: u64,
    pub fails: u64,
    pub degenerate_lhs_neg_inf: u64,
    pub rhs_undefined: u64,
}

impl StatusTally {
    pub fn record(&mut self, status: Status) {
        match status {
            Status::Holds => self.holds += 1,
            Status::Fails => self.fails += 1,
            Status::DegenerateLhsNegInf => self.degenerate_lhs_neg_inf += 1,
            Status::RhsUndefined => self.rhs_undefined += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.holds + self.fails + self.degenerate_lhs_neg_inf + self.rhs_undefined
    }
}

/// Order statistics of the finite margins of one statement/mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginStats {
    pub finite_count: u64,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub p01: f64,
    pub p25: f64,
    pub p50: f64,
    pub p75: f64,
    pub p99: f64,
}

/// Linear interpolation between closest ranks; `sorted` must be non-empty and ascending.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

impl MarginStats {
    pub fn from_margins(mut margins: Vec<f64>) -> Option<Self> {
        if margins.is_empty() {
            return None;
        }
        margins.sort_by(f64::total_cmp);
        let n = margins.len();
        Some(MarginStats {
            finite_count: n as u64,
            min: margins[0],
            max: margins[n - 1],
            mean: compensated_sum(margins.iter().copied()) / n as f64,
            p01: quantile(&margins, 0.01),
            p25: quantile(&margins, 0.25),
            p50: quantile(&margins, 0.50),
            p75: quantile(&margins, 0.75),
            p99: quantile(&margins, 0.99),
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSummary {
    pub checked: u64,
    /// Integrator errors (depth exhausted).
    pub failures: u64,
    /// Checks whose discrepancy exceeded tolerance.
    pub disagreements: u64,
    pub nonsingular_checked: u64,
    pub max_abs_error_nonsingular: f64,
    pub singular_checked: u64,
    pub max_abs_error_singular: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowOutcome {
    pub statement: Statement,
    pub mode: SpectrumMode,
    pub margin: Option<ExtendedReal>,
    pub status: Status,
}

/// Per-trial summary, one CSV row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub trial_index: u64,
    pub dim: usize,
    pub norm_a: f64,
    pub norm_b: f64,
    pub inner_product: f64,
    pub rejections: u64,
    pub outcomes: Vec<RowOutcome>,
}

impl From<&TrialRecord> for TrialRow {
    fn from(r: &TrialRecord) -> Self {
        let outcomes = r
            .sides
            .iter()
            .flat_map(|(st, per_mode)| {
                per_mode.iter().map(move |(mode, s)| RowOutcome {
                    statement: *st,
                    mode: *mode,
                    margin: s.margin,
                    status: s.status,
                })
            })
            .collect();
        TrialRow {
            trial_index: r.trial_index,
            dim: r.dim,
            norm_a: r.admissibility.norm_a,
            norm_b: r.admissibility.norm_b,
            inner_product: r.inner_product,
            rejections: r.rejections,
            outcomes,
        }
    }
}

pub type PerStatement<T> = BTreeMap<Statement, BTreeMap<SpectrumMode, T>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub config: CampaignConfig,
    pub totals: PerStatement<StatusTally>,
    /// `None` where no trial produced a finite margin.
    pub margins: PerStatement<Option<MarginStats>>,
    /// Raw draws discarded by the sampler across the campaign.
    pub rejection_count: u64,
    pub raw_draws: u64,
    pub rejection_rate: f64,
    pub quadrature: QuadratureSummary,
    /// Every trial with at least one `fails` status.
    pub counterexamples: Vec<TrialRecord>,
    pub rows: Vec<TrialRow>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CampaignReport {
    pub fn fails(&self) -> u64 {
        self.totals.values().flat_map(|m| m.values()).map(|t| t.fails).sum()
    }
}

pub fn fuzz_campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    cfg.validate()?;
    let start = Instant::now();
    let records: Vec<Result<TrialRecord>> = (0..cfg.trials).into_par_iter().map(|i| run_trial(cfg, i)).collect();
    let mut report = aggregate(cfg, records)?;
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Runs the campaign on a dedicated pool of `workers` threads.
pub fn fuzz_campaign_with_workers(cfg: &CampaignConfig, workers: usize) -> Result<CampaignReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot build worker pool: {e}")))?;
    pool.install(|| fuzz_campaign(cfg))
}

/// Sequential fold in trial order.
fn aggregate(cfg: &CampaignConfig, records: Vec<Result<TrialRecord>>) -> Result<CampaignReport> {
    let mut totals: PerStatement<StatusTally> = PerStatement::new();
    let mut margins: PerStatement<Vec<f64>> = PerStatement::new();
    let mut quadrature = QuadratureSummary::default();
    let mut rejection_count = 0;
    let mut counterexamples = Vec::new();
    let mut rows = Vec::with_capacity(records.len());

    for record in records {
        let record = record?;
        rejection_count += record.rejections;
        for (st, per_mode) in &record.sides {
            for (mode, sides) in per_mode {
                totals.entry(*st).or_default().entry(*mode).or_default().record(sides.status);
                let bucket = margins.entry(*st).or_default().entry(*mode).or_default();
                if let Some(m) = sides.margin.and_then(ExtendedReal::finite) {
                    bucket.push(m);
                }
            }
        }
        if record.quadrature_checked {
            quadrature.checked += 1;
            match (&record.quadrature, &record.quadrature_error) {
                (Some(check), _) => {
                    if !check.agrees {
                        quadrature.disagreements += 1;
                    }
                    if check.singular_interior {
                        quadrature.singular_checked += 1;
                        quadrature.max_abs_error_singular = quadrature.max_abs_error_singular.max(check.abs_error);
                    } else {
                        quadrature.nonsingular_checked += 1;
                        quadrature.max_abs_error_nonsingular =
                            quadrature.max_abs_error_nonsingular.max(check.abs_error);
                    }
                }
                _ => quadrature.failures += 1,
            }
        }
        rows.push(TrialRow::from(&record));
        if record.has_status(Status::Fails) {
            counterexamples.push(record);
        }
    }

    let raw_draws = rejection_count + cfg.trials;
    Ok(CampaignReport {
        config: cfg.clone(),
        totals,
        margins: margins
            .into_iter()
            .map(|(st, per_mode)| (st, per_mode.into_iter().map(|(m, v)| (m, MarginStats::from_margins(v))).collect()))
            .collect(),
        rejection_count,
        raw_draws,
        rejection_rate: rejection_count as f64 / raw_draws as f64,
        quadrature,
        counterexamples,
        rows,
        elapsed: Duration::ZERO,
    })
}

/// A counterexample stored on its own: the campaign configuration plus the
/// trial record, replayable both from the seed and from the stored vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleFixture {
    pub config: CampaignConfig,
    pub record: TrialRecord,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplayOutcome {
    /// Re-running `(seed, trial_index)` reproduced the stored record.
    pub seed_reproduces: bool,
    /// Re-evaluating the stored vectors reproduced every stored status.
    pub statuses_reproduce: bool,
    pub still_fails: bool,
}

impl CounterexampleFixture {
    pub fn replay(&self) -> Result<ReplayOutcome> {
        let rerun = run_trial(&self.config, self.record.trial_index)?;
        let seed_reproduces = rerun.a == self.record.a && rerun.b == self.record.b && rerun.sides == self.record.sides;
        let sides = replay(&self.record)?;
        let statuses = |m: &SidesMap| -> Vec<Status> { m.values().flat_map(|x| x.values()).map(|s| s.status).collect() };
        let statuses_reproduce = statuses(&sides) == statuses(&self.record.sides);
        let still_fails = statuses(&sides).contains(&Status::Fails);
        Ok(ReplayOutcome { seed_reproduces, statuses_reproduce, still_fails })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::HypothesisFailure;

    fn small(trials: u64, seed: u64) -> CampaignConfig {
        CampaignConfig { trials, seed, check_quadrature_every: 10, ..Default::default() }
    }

    #[test]
    fn sub_seeds_are_distinct_and_stable() {
        assert_eq!(sub_seed(42, 0), sub_seed(42, 0));
        let seeds: std::collections::HashSet<u64> = (0..10_000).map(|i| sub_seed(42, i)).collect();
        assert_eq!(seeds.len(), 10_000);
        assert_ne!(sub_seed(1, 0), sub_seed(2, 0));
        // First output of SplitMix64 seeded with 0.
        assert_eq!(sub_seed(0, 0), 0xE220_A839_7B1D_CDAF);
    }

    #[test]
    fn sampled_pairs_are_admissible_and_deterministic() {
        for i in 0..500 {
            let kind = [NormKind::Euclidean, NormKind::One, NormKind::Infinity, NormKind::P(3.0)][i % 4];
            let s = sample_admissible_pair(sub_seed(7, i as u64), 2..=8, 5.0, kind).unwrap();
            assert!(check_admissible(&s.a, &s.b, kind).unwrap().failures.is_empty());
            assert_eq!(s, sample_admissible_pair(sub_seed(7, i as u64), 2..=8, 5.0, kind).unwrap());
        }
    }

    #[test]
    fn small_coordinates_are_rescaled() {
        let s = sample_admissible_pair(3, 2..=2, 0.4, NormKind::Euclidean).unwrap();
        assert!(norm(&s.a, NormKind::Euclidean).unwrap() > 1.0);
    }

    #[test]
    fn rejection_rate_regression() {
        // Dimension 2, coord_scale 5, seed 2024: 10^4 accepted pairs.
        let mut rejected = 0;
        let trials = 10_000;
        for i in 0..trials {
            rejected += sample_admissible_pair(sub_seed(2024, i), 2..=2, 5.0, NormKind::Euclidean).unwrap().rejections;
        }
        let rate = rejected as f64 / (rejected + trials) as f64;
        assert!(rejected > 0);
        assert_eq!(rejected, REJECTIONS_DIM2_SEED2024, "rate {rate}");
    }

    const REJECTIONS_DIM2_SEED2024: u64 = 6492;

    #[test]
    fn config_validation() {
        assert!(small(0, 1).validate().is_err());
        assert!(CampaignConfig { dim_min: 1, ..Default::default() }.validate().is_err());
        assert!(CampaignConfig { dim_min: 5, dim_max: 4, ..Default::default() }.validate().is_err());
        assert!(CampaignConfig { dim_max: 9, ..Default::default() }.validate().is_err());
        assert!(CampaignConfig { coord_scale: 0.0, ..Default::default() }.validate().is_err());
        assert!(CampaignConfig { modes: vec![], ..Default::default() }.validate().is_err());
        assert!(matches!(fuzz_campaign(&small(0, 1)), Err(Error::Config(_))));
    }

    #[test]
    fn trial_is_deterministic() {
        let cfg = CampaignConfig { seed: 1, ..Default::default() };
        let r1 = run_trial(&cfg, 0).unwrap();
        let r2 = run_trial(&cfg, 0).unwrap();
        assert_eq!(crate::json::to_string_pretty(&r1).unwrap(), crate::json::to_string_pretty(&r2).unwrap());
        assert!(r1.quadrature_checked);
    }

    #[test]
    fn injected_fixture_trial() {
        let cfg = CampaignConfig::default();
        let a = Vector::new(vec![1.5, 0.0]).unwrap();
        let b = Vector::new(vec![0.0, 2.5]).unwrap();
        let r = run_trial_on_pair(&cfg, 0, &a, &b).unwrap();
        let s = &r.sides[&Statement::Theorem2][&SpectrumMode::Multiset];
        let margin = s.margin.unwrap().finite().unwrap();
        assert!((margin - 0.021_236_026_073_608_44).abs() < 1e-12);
        assert!(r.quadrature.unwrap().agrees);

        let err = run_trial_on_pair(&cfg, 0, &b, &a).unwrap_err();
        assert!(matches!(err, Error::Hypothesis { failures } if failures == vec![HypothesisFailure::NormOrder]));
    }

    #[test]
    fn interior_eigenvalue_trial_is_degenerate() {
        let cfg = CampaignConfig::default();
        let a = Vector::new(vec![1.2, 0.0]).unwrap();
        let b = Vector::new(vec![1.5, 2.0]).unwrap();
        let r = run_trial_on_pair(&cfg, 0, &a, &b).unwrap();
        for mode in SpectrumMode::ALL {
            assert_eq!(r.sides[&Statement::Theorem1][&mode].status, Status::DegenerateLhsNegInf);
        }
        assert!(r.quadrature.unwrap().singular_interior);
    }

    #[test]
    fn campaign_is_reproducible_and_consistent() {
        let cfg = small(100, 42);
        let r1 = fuzz_campaign(&cfg).unwrap();
        let r2 = fuzz_campaign_with_workers(&cfg, 1).unwrap();
        let r3 = fuzz_campaign_with_workers(&cfg, 3).unwrap();
        let j1 = crate::json::to_string_pretty(&r1).unwrap();
        assert_eq!(j1, crate::json::to_string_pretty(&r2).unwrap());
        assert_eq!(j1, crate::json::to_string_pretty(&r3).unwrap());

        for (st, per_mode) in &r1.totals {
            for (mode, tally) in per_mode {
                assert_eq!(tally.total(), cfg.trials, "{st} {mode}");
                if let Some(m) = r1.margins[st][mode] {
                    assert!(m.min <= m.p01 && m.p01 <= m.p25 && m.p25 <= m.p50);
                    assert!(m.p50 <= m.p75 && m.p75 <= m.p99 && m.p99 <= m.max);
                }
            }
        }
        assert_eq!(r1.rows.len(), 100);
        assert_eq!(r1.quadrature.checked, 10);
        assert_eq!(r1.quadrature.failures, 0);
    }

    #[test]
    fn counterexamples_replay() {
        let cfg = small(200, 5);
        let report = fuzz_campaign(&cfg).unwrap();
        assert!(!report.counterexamples.is_empty());
        for record in report.counterexamples.iter().take(20) {
            let fixture = CounterexampleFixture { config: cfg.clone(), record: record.clone() };
            let text = crate::json::to_string_pretty(&fixture).unwrap();
            let back: CounterexampleFixture = serde_json::from_str(&text).unwrap();
            let outcome = back.replay().unwrap();
            assert!(outcome.seed_reproduces && outcome.statuses_reproduce && outcome.still_fails);
        }
    }

    #[test]
    fn quantiles_interpolate() {
        let xs = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(quantile(&xs, 0.0), 1.0);
        assert_eq!(quantile(&xs, 0.5), 3.0);
        assert_eq!(quantile(&xs, 1.0), 5.0);
        assert_eq!(quantile(&xs, 0.25), 2.0);
        assert_eq!(quantile(&[7.0], 0.99), 7.0);
        assert!(MarginStats::from_margins(vec![]).is_none());
    }
}
