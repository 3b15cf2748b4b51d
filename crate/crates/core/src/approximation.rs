//! Lattice approximations `F_ε` of compact sets and convergence experiments.
//!
//! A cube of side `ε` is indexed by the integer vector `i` and occupies
//! `[i_1 ε, (i_1+1) ε] × …`. `F_ε` is the set of corners of all cubes the oracle
//! accepts, kept as integer multiples of `ε`.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::dimension::{box_formula, dim_fb_with, dim_fh_with, DimensionOptions};
use crate::error::{Error, Result};
use crate::generators::{closed_form, ones_mask, Family, FamilySpec, Generated};
use crate::lattice::{CountResult, LatticeSet, TSource};
use crate::metric::PointCloud;

/// Default cap on the number of cubes scanned.
pub const DEFAULT_CUBE_CAP: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CubeDecision {
    Intersects,
    Misses,
}

/// Decides which lattice cubes of side `ε` meet a compact set `X ⊆ ℝ^n`.
pub trait CubeOracle: Sync {
    fn dimension(&self) -> usize;

    /// Axis-aligned box `[lo, hi]` containing `X`.
    fn bounding_box(&self) -> (Vec<f64>, Vec<f64>);

    fn decide(&self, index: &[i64], eps: f64) -> CubeDecision;

    /// Whether `decide` is exact at this side length.
    fn supports(&self, _eps: f64) -> bool {
        true
    }

    /// Classical dimension of `X`, when known.
    fn classical_dimension(&self) -> Option<f64> {
        None
    }

    fn name(&self) -> String;
}

/// `k` with `eps = base^-k`, if there is one.
fn level_of(eps: f64, base: f64) -> Option<u32> {
    let k = (-eps.ln() / base.ln()).round();
    if !(0.0..=40.0).contains(&k) {
        return None;
    }
    let k = k as u32;
    ((base.powi(-(k as i32)) - eps).abs() <= 1e-12 * eps).then_some(k)
}

fn in_range(index: &[i64], side: i64) -> bool {
    index.iter().all(|&i| (0..side).contains(&i))
}

fn decision(b: bool) -> CubeDecision {
    if b {
        CubeDecision::Intersects
    } else {
        CubeDecision::Misses
    }
}

/// Digit-test oracles for the classical self-similar sets, exact at
/// `ε = 3^-k` (Cantor-type) or `ε = 2^-k` (Sierpinski-type). A cube is
/// accepted when it is one of the level-`k` construction cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FractalOracle {
    /// Middle-thirds Cantor set in `[0,1]`.
    Cantor,
    /// Cantor set squared in `[0,1]²`.
    CantorSquare,
    /// Sierpinski carpet in `[0,1]²`.
    Carpet,
    /// Right-angled Sierpinski triangle in `[0,1]²`.
    Sierpinski,
    /// Sierpinski tetrahedron spanned by the unit axes in `[0,1]³`.
    Tetra,
}

impl FractalOracle {
    fn base(self) -> f64 {
        match self {
            FractalOracle::Cantor | FractalOracle::CantorSquare | FractalOracle::Carpet => 3.0,
            FractalOracle::Sierpinski | FractalOracle::Tetra => 2.0,
        }
    }

    pub fn for_family(f: Family) -> Option<Self> {
        match f {
            Family::Cantor => Some(FractalOracle::Cantor),
            Family::CantorSquare => Some(FractalOracle::CantorSquare),
            Family::CantorCarpet => Some(FractalOracle::Carpet),
            Family::Sierpinski => Some(FractalOracle::Sierpinski),
            Family::SierpinskiTetra => Some(FractalOracle::Tetra),
            _ => None,
        }
    }
}

fn no_middle_digit(i: i64) -> bool {
    ones_mask(i as u64) == 0
}

impl CubeOracle for FractalOracle {
    fn dimension(&self) -> usize {
        match self {
            FractalOracle::Cantor => 1,
            FractalOracle::Tetra => 3,
            _ => 2,
        }
    }

    fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        (vec![0.0; self.dimension()], vec![1.0; self.dimension()])
    }

    fn decide(&self, index: &[i64], eps: f64) -> CubeDecision {
        let Some(k) = level_of(eps, self.base()) else {
            return CubeDecision::Misses;
        };
        let side = if self.base() == 3.0 { 3i64.pow(k) } else { 1i64 << k };
        if !in_range(index, side) {
            return CubeDecision::Misses;
        }
        decision(match self {
            FractalOracle::Cantor => no_middle_digit(index[0]),
            FractalOracle::CantorSquare => no_middle_digit(index[0]) && no_middle_digit(index[1]),
            FractalOracle::Carpet => ones_mask(index[0] as u64) & ones_mask(index[1] as u64) == 0,
            FractalOracle::Sierpinski => index[0] & index[1] == 0,
            FractalOracle::Tetra => index[0] & index[1] == 0 && index[0] & index[2] == 0 && index[1] & index[2] == 0,
        })
    }

    fn supports(&self, eps: f64) -> bool {
        level_of(eps, self.base()).is_some()
    }

    fn classical_dimension(&self) -> Option<f64> {
        let ln = f64::ln;
        Some(match self {
            FractalOracle::Cantor => ln(2.0) / ln(3.0),
            FractalOracle::CantorSquare => 2.0 * ln(2.0) / ln(3.0),
            FractalOracle::Carpet => ln(8.0) / ln(3.0),
            FractalOracle::Sierpinski => ln(3.0) / ln(2.0),
            FractalOracle::Tetra => 2.0,
        })
    }

    fn name(&self) -> String {
        format!("{self:?}").to_lowercase()
    }
}

/// The unit cube `[0,1]^n`; a cube is accepted when its interior meets it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnitCube(pub usize);

impl CubeOracle for UnitCube {
    fn dimension(&self) -> usize {
        self.0
    }

    fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        (vec![0.0; self.0], vec![1.0; self.0])
    }

    fn decide(&self, index: &[i64], eps: f64) -> CubeDecision {
        decision(index.iter().all(|&i| i >= 0 && (i as f64) * eps < 1.0 - 1e-12))
    }

    fn classical_dimension(&self) -> Option<f64> {
        Some(self.0 as f64)
    }

    fn name(&self) -> String {
        format!("unit-cube-{}", self.0)
    }
}

/// A set given by a membership test, probed on a grid of sample points per cube.
///
/// Thin parts of `X` falling between samples are missed, so the box count
/// can only be underestimated.
pub struct SampledSet<F> {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub samples_per_axis: usize,
    pub contains: F,
    pub dimension_hint: Option<f64>,
}

impl<F: Fn(&[f64]) -> bool + Sync> CubeOracle for SampledSet<F> {
    fn dimension(&self) -> usize {
        self.lo.len()
    }

    fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        (self.lo.clone(), self.hi.clone())
    }

    fn decide(&self, index: &[i64], eps: f64) -> CubeDecision {
        let n = index.len();
        let s = self.samples_per_axis.max(2);
        let total = s.pow(n as u32);
        let mut x = vec![0.0; n];
        for t in 0..total {
            let mut r = t;
            for a in 0..n {
                let step = (r % s) as f64 / (s - 1) as f64;
                r /= s;
                x[a] = (index[a] as f64 + step) * eps;
            }
            if (self.contains)(&x) {
                return CubeDecision::Intersects;
            }
        }
        CubeDecision::Misses
    }

    fn classical_dimension(&self) -> Option<f64> {
        self.dimension_hint
    }

    fn name(&self) -> String {
        "sampled".into()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeApprox {
    pub epsilon: f64,
    pub lattice: LatticeSet,
    /// `T̄_ε(X)`: accepted cubes.
    pub cube_count: u64,
}

impl LatticeApprox {
    pub fn points(&self) -> PointCloud {
        self.lattice.to_cloud()
    }

    pub fn dimension(&self) -> usize {
        self.lattice.dim()
    }

    /// Upper bound `ε√n` on the Hausdorff distance to `X`.
    pub fn hausdorff_bound(&self) -> f64 {
        self.epsilon * (self.dimension() as f64).sqrt()
    }
}

pub fn lattice_approx(oracle: &dyn CubeOracle, eps: f64) -> Result<LatticeApprox> {
    lattice_approx_with(oracle, eps, DEFAULT_CUBE_CAP)
}

/// Corners of all accepted cubes of side `eps`.
pub fn lattice_approx_with(oracle: &dyn CubeOracle, eps: f64, cap: u64) -> Result<LatticeApprox> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::BadParameter(format!("side length {eps} must be positive")));
    }
    if !oracle.supports(eps) {
        return Err(Error::BadParameter(format!("oracle '{}' is not exact at side {eps}", oracle.name())));
    }
    let n = oracle.dimension();
    let (lo, hi) = oracle.bounding_box();
    let ranges: Vec<(i64, i64)> = lo
        .iter()
        .zip(&hi)
        .map(|(&l, &h)| ((l / eps).floor() as i64, ((h / eps) - 1e-9).ceil().max((l / eps).floor() + 1.0) as i64))
        .collect();
    let scanned = ranges.iter().try_fold(1u64, |acc, &(a, b)| acc.checked_mul((b - a) as u64)).unwrap_or(u64::MAX);
    if scanned > cap {
        return Err(Error::TooFine { cubes: scanned, cap });
    }

    let scan_slice = |first: i64| -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        let mut idx: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        idx[0] = first;
        loop {
            if oracle.decide(&idx, eps) == CubeDecision::Intersects {
                out.push(idx.clone());
            }
            let mut a = 1;
            while a < n {
                idx[a] += 1;
                if idx[a] < ranges[a].1 {
                    break;
                }
                idx[a] = ranges[a].0;
                a += 1;
            }
            if a >= n {
                break;
            }
        }
        out
    };
    #[cfg(feature = "parallel")]
    let cubes: Vec<Vec<i64>> = {
        use rayon::prelude::*;
        (ranges[0].0..ranges[0].1).into_par_iter().flat_map_iter(scan_slice).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let cubes: Vec<Vec<i64>> = (ranges[0].0..ranges[0].1).flat_map(scan_slice).collect();

    if cubes.is_empty() {
        return Err(Error::EmptyApproximation);
    }
    let mut corners = Vec::with_capacity(cubes.len() << n);
    for c in &cubes {
        for bits in 0u32..(1 << n) {
            corners.push(c.iter().enumerate().map(|(a, &x)| x + (bits >> a & 1) as i64).collect());
        }
    }
    Ok(LatticeApprox { epsilon: eps, lattice: LatticeSet::cubic(n, eps, corners)?, cube_count: cubes.len() as u64 })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TInequalityReport {
    pub dimension: usize,
    pub card: usize,
    pub t: u64,
    pub t_source: TSource,
    pub tbar: u64,
    /// `δ(F_ε) = ∇(F_ε) = ε` exactly.
    pub locally_uniform_at_eps: bool,
    /// `T̄/2 ≤ T`.
    pub lower_ok: bool,
    /// `T ≤ 2^{n−1} T̄`.
    pub upper_ok: bool,
    /// `|F_ε| ≥ T̄`.
    pub card_ok: bool,
}

impl TInequalityReport {
    pub fn passed(&self) -> bool {
        self.locally_uniform_at_eps && self.lower_ok && self.upper_ok && self.card_ok
    }
}

/// Checks the `T` versus `T̄` chains in integer arithmetic.
pub fn check_t_inequalities(a: &LatticeApprox, max_exact: usize) -> Result<TInequalityReport> {
    let s = a.lattice.summary()?;
    let CountResult { count: t, source } = a.lattice.exact_cover_count(max_exact)?;
    let n = a.dimension() as u32;
    let tbar = a.cube_count;
    Ok(TInequalityReport {
        dimension: n as usize,
        card: a.lattice.len(),
        t,
        t_source: source,
        tbar,
        locally_uniform_at_eps: s.separation_form == 1 && s.covering_form == 1,
        lower_ok: tbar <= 2 * t,
        upper_ok: t <= (1u64 << (n - 1)) * tbar,
        card_ok: a.lattice.len() as u64 >= tbar,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub level: u32,
    pub eps: f64,
    pub card: u64,
    pub delta: f64,
    pub nabla: f64,
    #[serde(rename = "Delta")]
    pub diameter: f64,
    #[serde(rename = "T")]
    pub t: u64,
    #[serde(rename = "Tbar")]
    pub tbar: Option<u64>,
    #[serde(rename = "dim_fH")]
    pub dim_fh: f64,
    #[serde(rename = "dim_fB")]
    pub dim_fb: f64,
    pub closed_form: Option<f64>,
    pub limit: Option<f64>,
}

impl ConvergenceRow {
    /// `ln T / (−ln ∇)`.
    pub fn estimator(&self) -> f64 {
        (self.t as f64).ln() / -self.nabla.ln()
    }

    pub fn gap(&self) -> Option<f64> {
        self.limit.map(|l| (self.dim_fh - l).abs())
    }
}

/// How each row's dimensions were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DimMethod {
    /// Bisection on `H^s` plus a branch-and-bound `T`.
    FullSolve,
    /// `ln T / ln(Δ/∇)` on a locally uniform level.
    FastPath,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub source: String,
    pub ratio: Option<f64>,
    pub rows: Vec<ConvergenceRow>,
    pub t_sources: Vec<TSource>,
    pub methods: Vec<DimMethod>,
    /// Levels whose gap to the limit did not strictly shrink.
    pub monotone_violations: Vec<u32>,
    /// Levels where `∇(F_{k+1}) < c·∇(F_k)`.
    pub ratio_violations: Vec<u32>,
}

pub const CSV_COLUMNS: [&str; 12] =
    ["level", "eps", "card", "delta", "nabla", "Delta", "T", "Tbar", "dim_fH", "dim_fB", "closed_form", "limit"];

impl ConvergenceTable {
    pub fn gap_strictly_decreasing(&self) -> bool {
        self.monotone_violations.is_empty()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row).map_err(|e| Error::MalformedInput(e.to_string()))?;
        }
        if self.rows.is_empty() {
            w.write_record(CSV_COLUMNS).map_err(|e| Error::MalformedInput(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::MalformedInput(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    fn finish(&mut self) {
        self.monotone_violations.clear();
        self.ratio_violations.clear();
        for w in self.rows.windows(2) {
            if let (Some(a), Some(b)) = (w[0].gap(), w[1].gap()) {
                if b >= a {
                    self.monotone_violations.push(w[1].level);
                }
            }
            if let Some(c) = self.ratio {
                if w[1].nabla < c * w[0].nabla * (1.0 - 1e-12) {
                    self.ratio_violations.push(w[1].level);
                }
            }
        }
    }
}

pub enum ConvergenceInput<'a> {
    Family(Family),
    Oracle(&'a dyn CubeOracle),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceOptions {
    /// Levels up to this many points get the full bisection solve.
    pub max_exact: usize,
    /// Geometric ratio `c` of the side lengths `ε_k = c^k` for oracles.
    pub ratio: f64,
    pub cube_cap: u64,
}

impl Default for ConvergenceOptions {
    fn default() -> Self {
        ConvergenceOptions { max_exact: 128, ratio: 1.0 / 3.0, cube_cap: DEFAULT_CUBE_CAP }
    }
}

struct LevelDims {
    t: u64,
    source: TSource,
    fh: f64,
    fb: f64,
    method: DimMethod,
}

fn level_dims(lattice: &LatticeSet, max_exact: usize, closed_t: Option<u64>) -> Result<LevelDims> {
    let s = lattice.summary()?;
    if s.has_focal_points() {
        return Err(Error::InfiniteDimension);
    }
    if lattice.len() <= max_exact {
        let m = lattice.to_metric();
        let opts = DimensionOptions { max_exact };
        let fh = dim_fh_with(&m, opts)?;
        let fb = dim_fb_with(&m, opts)?;
        let t = fb.witness.as_ref().map_or(0, |w| w.len() as u64);
        return Ok(LevelDims {
            t,
            source: TSource::BranchAndBound,
            fh: fh.value.unwrap(),
            fb: fb.value.unwrap(),
            method: DimMethod::FullSolve,
        });
    }
    if !s.locally_uniform() {
        return Err(Error::FastPathInapplicable(format!("level with {} points is not locally uniform", lattice.len())));
    }
    let CountResult { count, source } = match (lattice.exact_cover_count(max_exact), closed_t) {
        (Ok(c), _) => c,
        (Err(e), Some(t)) if e.is_budget() => CountResult { count: t, source: TSource::ClosedForm },
        (Err(e), _) => return Err(e),
    };
    let d = box_formula(count as usize, s.diameter, s.covering_diameter);
    Ok(LevelDims { t: count, source, fh: d, fb: d, method: DimMethod::FastPath })
}

/// One row per level: exact dimensions, the classical limit, and monotonicity flags.
pub fn convergence_table(
    input: ConvergenceInput<'_>,
    levels: RangeInclusive<u32>,
    opts: ConvergenceOptions,
) -> Result<ConvergenceTable> {
    let mut table = ConvergenceTable {
        source: match &input {
            ConvergenceInput::Family(f) => f.name().to_string(),
            ConvergenceInput::Oracle(o) => o.name(),
        },
        ratio: None,
        rows: Vec::new(),
        t_sources: Vec::new(),
        methods: Vec::new(),
        monotone_violations: Vec::new(),
        ratio_violations: Vec::new(),
    };
    for k in levels {
        let (lattice, tbar, closed, limit, eps) = match &input {
            ConvergenceInput::Family(f) => {
                let Generated::Lattice(l) = FamilySpec::new(*f, k).generate()? else {
                    return Err(Error::BadParameter(format!("family '{f}' has no lattice levels")));
                };
                let cf = closed_form(*f, k);
                let eps = l.summary()?.covering_diameter;
                (l, None, cf, cf.map(|c| c.limit), eps)
            }
            ConvergenceInput::Oracle(o) => {
                let eps = opts.ratio.powi(k as i32);
                let a = lattice_approx_with(*o, eps, opts.cube_cap)?;
                table.ratio = Some(opts.ratio);
                (a.lattice, Some(a.cube_count), None, o.classical_dimension(), eps)
            }
        };
        let s = lattice.summary()?;
        let dims = level_dims(&lattice, opts.max_exact, closed.and_then(|c| c.count))?;
        table.rows.push(ConvergenceRow {
            level: k,
            eps,
            card: lattice.len() as u64,
            delta: s.separation,
            nabla: s.covering_diameter,
            diameter: s.diameter,
            t: dims.t,
            tbar,
            dim_fh: dims.fh,
            dim_fb: dims.fb,
            closed_form: closed.and_then(|c| c.dim),
            limit,
        });
        table.t_sources.push(dims.source);
        table.methods.push(dims.method);
    }
    table.finish();
    Ok(table)
}
