//! The analysis report and its oracle cross-check.

use std::time::Instant;

use findim::cover::{brute_force_oracle, CoverProblem, CoverSet, TwoCover, ORACLE_LIMIT};
use findim::dimension::{
    dim_bounds, dim_fb_with, dim_fh_with, DimensionKind, DimensionOptions, DimensionResult, Interval,
};
use findim::metric::{summarize, MetricSummary};
use findim::nn::{audit, NearestReport};
use findim::FiniteMetric;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Exponents checked against the oracle, besides the dimension itself.
pub const ORACLE_EXPONENTS: [f64; 4] = [0.0, 0.5, 1.0, 2.0];
const ORACLE_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverStats {
    pub fh_nodes: u64,
    pub fb_nodes: u64,
    pub bisection_iterations: u32,
    pub wall_time_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleComparison {
    pub exponent: f64,
    pub solver: f64,
    pub oracle: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub performed: bool,
    pub count: Option<(usize, usize)>,
    pub weighted: Vec<OracleComparison>,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub digest: String,
    pub size: usize,
    pub summary: Option<MetricSummary>,
    pub dim_fh: DimensionResult,
    pub dim_fb: DimensionResult,
    pub bounds: Option<Interval>,
    pub nearest: Option<NearestReport>,
    pub stats: SolverStats,
    pub oracle: Option<OracleCheck>,
}

#[derive(Debug, Clone, Copy)]
pub struct AnalyzeOptions {
    pub max_exact: usize,
    pub oracle: bool,
    pub timing: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { max_exact: findim::cover::DEFAULT_MAX_EXACT, oracle: false, timing: true }
    }
}

pub fn analyze(m: &FiniteMetric, digest: String, opts: AnalyzeOptions) -> Result<AnalysisReport, CliError> {
    let start = Instant::now();
    let dopts = DimensionOptions { max_exact: opts.max_exact };
    let dim_fh = dim_fh_with(m, dopts)?;
    let dim_fb = dim_fb_with(m, dopts)?;
    let (summary, nearest, bounds) = if m.len() >= 2 {
        let s = summarize(m)?;
        let b = if s.has_focal_points() { None } else { Some(dim_bounds(m)?) };
        (Some(s), Some(audit(m)?), b)
    } else {
        (None, None, None)
    };
    let oracle = if opts.oracle { Some(oracle_check(m, &dim_fh, &dim_fb)?) } else { None };
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let report = AnalysisReport {
        digest,
        size: m.len(),
        summary,
        stats: SolverStats {
            fh_nodes: dim_fh.nodes,
            fb_nodes: dim_fb.nodes,
            bisection_iterations: dim_fh.iterations,
            wall_time_ms: opts.timing.then_some(elapsed),
        },
        dim_fh,
        dim_fb,
        bounds,
        nearest,
        oracle,
    };
    if let Some(o) = &report.oracle {
        if !o.agrees {
            return Err(CliError::OracleMismatch(Box::new(report)));
        }
    }
    Ok(report)
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= ORACLE_RTOL * a.abs().max(b.abs()).max(1.0)
}

/// Compares the solvers with the exhaustive oracle on spaces of at most
/// `ORACLE_LIMIT` points; larger spaces are reported as not performed.
pub fn oracle_check(m: &FiniteMetric, fh: &DimensionResult, fb: &DimensionResult) -> Result<OracleCheck, CliError> {
    if m.len() < 2 || m.len() > ORACLE_LIMIT {
        log::warn!("oracle cross-check skipped: needs 2..={ORACLE_LIMIT} points, got {}", m.len());
        return Ok(OracleCheck { performed: false, count: None, weighted: Vec::new(), agrees: true });
    }
    let s = summarize(m)?;
    let nabla = s.covering_diameter;
    let problem = CoverProblem::new(m, nabla)?;
    let mut exponents = ORACLE_EXPONENTS.to_vec();
    if let Some(v) = fh.value.filter(|_| fh.kind == DimensionKind::Finite) {
        exponents.push(v);
    }
    let mut agrees = true;
    let mut weighted = Vec::new();
    for s in exponents {
        let solver = problem.solve_weighted(s)?.value;
        let (_, oracle) = brute_force_oracle(m, nabla, s)?;
        agrees &= close(solver, oracle);
        weighted.push(OracleComparison { exponent: s, solver, oracle });
    }
    if let Some(v) = fh.value.filter(|_| fh.kind == DimensionKind::Finite) {
        let (_, h) = brute_force_oracle(m, nabla, v)?;
        agrees &= close(h, s.diameter.powf(v));
    }
    let count = match fb.kind {
        DimensionKind::Finite => {
            let solver = fb.witness.as_ref().map_or(0, |w| w.len());
            let (oracle, _) = brute_force_oracle(m, nabla, 0.0)?;
            agrees &= solver == oracle;
            Some((solver, oracle))
        }
        _ => None,
    };
    Ok(OracleCheck { performed: true, count, weighted, agrees })
}

/// Rebuilds every witness from its member lists and checks it against the
/// stated diameters and class.
pub fn revalidate(report: &AnalysisReport, m: &FiniteMetric) -> Result<(), CliError> {
    for (name, r) in [("dim_fH", &report.dim_fh), ("dim_fB", &report.dim_fb)] {
        let Some(w) = &r.witness else { continue };
        let sets = w.sets.iter().map(|s| CoverSet::new(m, s.members.clone())).collect();
        let rebuilt = TwoCover::new(m, sets)?;
        let same = rebuilt.class == w.class
            && rebuilt.sets.iter().zip(&w.sets).all(|(a, b)| (a.diameter - b.diameter).abs() <= m.tolerance());
        if !same {
            return Err(CliError::Input(format!("{name} witness does not re-validate against the input")));
        }
    }
    Ok(())
}

/// Flat `key,value` rendering of the headline numbers.
pub fn report_to_csv(r: &AnalysisReport) -> String {
    let fmt = |d: &DimensionResult| match d.value {
        Some(v) => v.to_string(),
        None => "inf".to_string(),
    };
    let mut rows = vec![("digest".to_string(), r.digest.clone()), ("size".into(), r.size.to_string())];
    if let Some(s) = &r.summary {
        rows.push(("diameter".into(), s.diameter.to_string()));
        rows.push(("separation".into(), s.separation.to_string()));
        rows.push(("covering_diameter".into(), s.covering_diameter.to_string()));
        rows.push(("focal".into(), s.focal.len().to_string()));
    }
    rows.push(("dim_fH".into(), fmt(&r.dim_fh)));
    rows.push(("dim_fB".into(), fmt(&r.dim_fb)));
    if let Some(n) = &r.nearest {
        rows.push(("lambda".into(), n.lambda.to_string()));
    }
    let mut out = String::from("key,value\n");
    for (k, v) in rows {
        out.push_str(&format!("{k},{v}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use findim::{Norm, PointCloud};

    fn triple(norm: Norm) -> FiniteMetric {
        let pc = PointCloud::new(vec![vec![0.0, 0.0], vec![0.0, 3.0], vec![4.0, 0.0]], norm);
        FiniteMetric::from_points(&pc, None).unwrap()
    }

    #[test]
    fn golden_triple_reports() {
        let opts = AnalyzeOptions { oracle: true, timing: false, ..Default::default() };
        let r = analyze(&triple(Norm::L2), "x".into(), opts).unwrap();
        assert!((r.dim_fh.value.unwrap() - 2.0).abs() < 1e-8);
        assert!(r.oracle.as_ref().unwrap().agrees);
        let r = analyze(&triple(Norm::Linf), "x".into(), opts).unwrap();
        assert_eq!(r.dim_fh.kind, DimensionKind::Infinite);
        assert!(!r.summary.unwrap().focal.is_empty());
    }

    #[test]
    fn json_round_trip_and_revalidation() {
        let m = triple(Norm::L1);
        let r = analyze(&m, "x".into(), AnalyzeOptions { timing: false, ..Default::default() }).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        let back: AnalysisReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        revalidate(&back, &m).unwrap();
    }
}
