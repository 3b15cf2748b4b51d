//! Finite Hausdorff and box-counting dimensions.

use serde::{Deserialize, Serialize};

use crate::cover::{self, classify, CoverClass, CoverProblem, TwoCover, DEFAULT_MAX_EXACT};
use crate::error::{Error, Result};
use crate::metric::{summarize, FiniteMetric, MetricSummary};

/// Bisection stops once the bracket is this narrow.
pub const BISECTION_TOL: f64 = 1e-10;
/// Tolerance of the single-cover root `s_U`.
pub const COVER_ROOT_TOL: f64 = 1e-12;
const BRACKET_PAD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DimensionKind {
    Zero,
    Finite,
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64, slack: f64) -> bool {
        self.lo - slack <= x && x <= self.hi + slack
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionResult {
    pub kind: DimensionKind,
    /// Present iff `kind` is `Finite` or `Zero`.
    pub value: Option<f64>,
    pub witness: Option<TwoCover>,
    pub bounds: Option<Interval>,
    pub iterations: u32,
    /// `|H^s(F) − Δ(F)^s|` at the returned `s` (zero for closed forms).
    pub residual: f64,
    /// Branch-and-bound nodes over all cover solves.
    pub nodes: u64,
}

impl DimensionResult {
    pub fn zero() -> Self {
        DimensionResult {
            kind: DimensionKind::Zero,
            value: Some(0.0),
            witness: None,
            bounds: Some(Interval { lo: 0.0, hi: 0.0 }),
            iterations: 0,
            residual: 0.0,
            nodes: 0,
        }
    }

    pub fn infinite() -> Self {
        DimensionResult {
            kind: DimensionKind::Infinite,
            value: None,
            witness: None,
            bounds: None,
            iterations: 0,
            residual: 0.0,
            nodes: 0,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.kind != DimensionKind::Infinite
    }

    /// The value as an extended real: `+∞` for `Infinite`.
    pub fn extended(&self) -> f64 {
        self.value.unwrap_or(f64::INFINITY)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionOptions {
    pub max_exact: usize,
}

impl Default for DimensionOptions {
    fn default() -> Self {
        DimensionOptions { max_exact: DEFAULT_MAX_EXACT }
    }
}

enum Prelude {
    Done(DimensionResult),
    Proceed(MetricSummary),
}

fn prelude(m: &FiniteMetric) -> Result<Prelude> {
    match m.len() {
        0 => Err(Error::EmptySpace),
        1 => Ok(Prelude::Done(DimensionResult::zero())),
        _ => {
            let summary = summarize(m)?;
            if summary.has_focal_points() {
                Ok(Prelude::Done(DimensionResult::infinite()))
            } else {
                Ok(Prelude::Proceed(summary))
            }
        }
    }
}

/// `ln T / ln(Δ/∇)`.
pub fn box_formula(count: usize, diameter: f64, nabla: f64) -> f64 {
    (count as f64).ln() / (diameter / nabla).ln()
}

pub fn dim_fb(m: &FiniteMetric) -> Result<DimensionResult> {
    dim_fb_with(m, DimensionOptions::default())
}

pub fn dim_fb_with(m: &FiniteMetric, opts: DimensionOptions) -> Result<DimensionResult> {
    let summary = match prelude(m)? {
        Prelude::Done(r) => return Ok(r),
        Prelude::Proceed(s) => s,
    };
    let (d, nabla) = (summary.diameter, summary.covering_diameter);
    let sol = CoverProblem::with_limit(m, nabla, opts.max_exact)?.solve_count()?;
    let ratio = (d / nabla).ln();
    Ok(DimensionResult {
        kind: DimensionKind::Finite,
        value: Some(box_formula(sol.count, d, nabla)),
        witness: Some(sol.witness),
        bounds: Some(Interval { lo: 2f64.ln() / ratio, hi: ((m.len() - 1) as f64).ln() / ratio }),
        iterations: 0,
        residual: 0.0,
        nodes: sol.stats.nodes,
    })
}

/// `[ln 2 / ln(Δ/δ), ln(|F|−1) / ln(Δ/∇)]`.
pub fn dim_bounds(m: &FiniteMetric) -> Result<Interval> {
    let summary = match m.len() {
        0 => return Err(Error::EmptySpace),
        _ => summarize(m)?,
    };
    if summary.has_focal_points() {
        return Err(Error::InfiniteDimension);
    }
    Ok(bounds_from(&summary))
}

fn bounds_from(s: &MetricSummary) -> Interval {
    Interval {
        lo: 2f64.ln() / (s.diameter / s.separation).ln(),
        hi: ((s.size - 1) as f64).ln() / (s.diameter / s.covering_diameter).ln(),
    }
}

pub fn dim_fh(m: &FiniteMetric) -> Result<DimensionResult> {
    dim_fh_with(m, DimensionOptions::default())
}

/// Root of `H^s(F) = Δ(F)^s`, found by bisection on the space rescaled to unit diameter.
pub fn dim_fh_with(m: &FiniteMetric, opts: DimensionOptions) -> Result<DimensionResult> {
    let summary = match prelude(m)? {
        Prelude::Done(r) => return Ok(r),
        Prelude::Proceed(s) => s,
    };
    let d = summary.diameter;
    let unit = m.scaled(1.0 / d).with_tolerance(m.tolerance() / d);
    let problem = CoverProblem::with_limit(&unit, summary.covering_diameter / d, opts.max_exact)?;
    let mut nodes = 0u64;
    let mut g = |s: f64| -> Result<f64> {
        let sol = problem.solve_weighted(s)?;
        nodes += sol.stats.nodes;
        Ok(sol.value - 1.0)
    };

    let bounds = bounds_from(&summary);
    let mut lo = (bounds.lo - BRACKET_PAD).max(0.0);
    let mut hi = bounds.hi + BRACKET_PAD;
    let mut pad = BRACKET_PAD;
    while lo > 0.0 && g(lo)? <= 0.0 {
        pad *= 2.0;
        lo = (bounds.lo - pad).max(0.0);
    }
    pad = BRACKET_PAD;
    while g(hi)? > 0.0 {
        pad *= 2.0;
        hi = bounds.hi + pad;
        if pad > 1e6 {
            return Err(Error::NoUniqueSolution);
        }
    }

    let mut iterations = 0u32;
    while hi - lo > BISECTION_TOL.max(4.0 * ulp(hi)) {
        let mid = 0.5 * (lo + hi);
        if g(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }

    let at_hi = problem.solve_weighted(hi)?;
    nodes += at_hi.stats.nodes;
    let witness_unit = at_hi.witness;
    let value = s_for_cover(&witness_unit, &unit)?;
    let h = problem.solve_weighted(value)?;
    nodes += h.stats.nodes;
    let residual = (h.value - 1.0).abs() * d.powf(value);

    Ok(DimensionResult {
        kind: DimensionKind::Finite,
        value: Some(value),
        witness: Some(rescale_witness(witness_unit, m)),
        bounds: Some(bounds),
        iterations,
        residual,
        nodes,
    })
}

fn rescale_witness(w: TwoCover, m: &FiniteMetric) -> TwoCover {
    let sets = w.sets.into_iter().map(|s| cover::CoverSet::new(m, s.members)).collect();
    TwoCover { sets, class: w.class }
}

fn ulp(x: f64) -> f64 {
    let x = x.abs();
    f64::from_bits(x.to_bits() + 1) - x
}

/// The unique root `s_U` of `Σ Δ(U_i)^s = Δ(F)^s` for a cover in `K1`.
pub fn s_for_cover(cover: &TwoCover, m: &FiniteMetric) -> Result<f64> {
    if classify(cover, m)? != CoverClass::K1 {
        return Err(Error::NoUniqueSolution);
    }
    let d = m.diameter();
    let ratios: Vec<f64> = cover.sets.iter().map(|s| m.subset_diameter(&s.members) / d).collect();
    let k = ratios.len() as f64;
    let rmin = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let rmax = ratios.iter().copied().fold(0.0, f64::max);
    let f = |s: f64| ratios.iter().map(|r| r.powf(s)).sum::<f64>() - 1.0;
    let mut lo = k.ln() / (1.0 / rmin).ln();
    let mut hi = k.ln() / (1.0 / rmax).ln();
    if hi - lo <= COVER_ROOT_TOL {
        return Ok(0.5 * (lo + hi));
    }
    while hi - lo > COVER_ROOT_TOL.max(4.0 * ulp(hi)) {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Shared value of both dimensions on a locally uniform space, without bisection.
pub fn dim_locally_uniform(m: &FiniteMetric) -> Result<DimensionResult> {
    dim_locally_uniform_with(m, DimensionOptions::default())
}

pub fn dim_locally_uniform_with(m: &FiniteMetric, opts: DimensionOptions) -> Result<DimensionResult> {
    if m.len() >= 2 {
        let s = summarize(m)?;
        if s.covering_diameter - s.separation > s.tolerance {
            return Err(Error::FastPathInapplicable(format!(
                "separation {} differs from covering diameter {}",
                s.separation, s.covering_diameter
            )));
        }
    }
    let mut r = dim_fb_with(m, opts)?;
    if r.kind == DimensionKind::Finite {
        let s = summarize(m)?;
        r.bounds = Some(bounds_from(&s));
    }
    Ok(r)
}

/// Point masses `μ(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassDistribution {
    pub mass: Vec<f64>,
}

impl MassDistribution {
    pub fn new(mass: Vec<f64>) -> Result<Self> {
        if let Some(bad) = mass.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
            return Err(Error::BadParameter(format!("mass {bad} is not a nonnegative real")));
        }
        Ok(MassDistribution { mass })
    }

    pub fn uniform(n: usize, each: f64) -> Result<Self> {
        Self::new(vec![each; n])
    }

    pub fn measure(&self, members: &[usize]) -> f64 {
        members.iter().map(|&i| self.mass[i]).sum()
    }

    pub fn total(&self) -> f64 {
        self.mass.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassCertificate {
    pub total_mass: f64,
    pub c: f64,
    pub s: f64,
    /// `H^s(F)`, so that `μ(F) ≤ c·H^s(F)`.
    pub h_s: f64,
    pub sets_checked: usize,
    /// True when `c·Δ(F)^s ≤ μ(F)`, which gives `s ≤ dim_fH(F)`.
    pub certifies_lower_bound: bool,
}

const MASS_SLACK: f64 = 1e-9;

/// Checks `μ(U) ≤ c·Δ(U)^s` on every candidate set at level `∇(F)`.
pub fn mass_lower_bound(m: &FiniteMetric, mu: &MassDistribution, c: f64, s: f64) -> Result<MassCertificate> {
    if mu.mass.len() != m.len() {
        return Err(Error::BadParameter(format!("{} masses for {} points", mu.mass.len(), m.len())));
    }
    if !(c > 0.0 && s > 0.0) {
        return Err(Error::BadParameter("c and s must be positive".into()));
    }
    let summary = summarize(m)?;
    if summary.has_focal_points() {
        return Err(Error::InfiniteDimension);
    }
    let pool = cover::candidates(m, summary.covering_diameter)?;
    for u in &pool {
        let mass = mu.measure(&u.members);
        let bound = c * u.diameter.powf(s);
        if mass > bound * (1.0 + MASS_SLACK) + f64::MIN_POSITIVE {
            return Err(Error::HypothesisViolated { members: u.members.clone(), mass, bound });
        }
    }
    let h_s = cover::min_weighted_cover(m, summary.covering_diameter, s)?.value;
    let total = mu.total();
    Ok(MassCertificate {
        total_mass: total,
        c,
        s,
        h_s,
        sets_checked: pool.len(),
        certifies_lower_bound: total > 0.0 && c * summary.diameter.powf(s) <= total * (1.0 + MASS_SLACK),
    })
}

/// A cover in `K1_∇` with `Σ Δ(U_i)^t < Δ(F)^t`, which exists iff `dim_fH(F) < t`.
pub fn dim_less_than(m: &FiniteMetric, t: f64) -> Result<Option<TwoCover>> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::BadParameter(format!("t = {t} must be positive")));
    }
    if m.len() < 3 {
        return Ok(None);
    }
    let summary = summarize(m)?;
    if summary.has_focal_points() {
        return Ok(None);
    }
    let sol = cover::min_weighted_cover(m, summary.covering_diameter, t)?;
    let target = summary.diameter.powf(t);
    Ok((sol.value < target * (1.0 - 1e-12)).then_some(sol.witness))
}
