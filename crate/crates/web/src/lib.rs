//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export takes and returns plain strings so the page needs no glue
//! beyond what `wasm-bindgen` generates.

use findim::approximation::{convergence_table, ConvergenceInput, ConvergenceOptions};
use findim::dimension::{dim_fb, dim_fh, DimensionKind, DimensionResult};
use findim::generators::{Family, FamilySpec};
use findim::metric::summarize;
use findim::nn::audit;
use findim::{FiniteMetric, Norm, PointCloud};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest input the demo will solve, to keep the page responsive.
pub const MAX_POINTS: usize = 64;

#[derive(Debug, Serialize)]
pub struct DimOut {
    pub kind: DimensionKind,
    pub value: Option<f64>,
    pub witness: Vec<Vec<usize>>,
}

impl From<DimensionResult> for DimOut {
    fn from(r: DimensionResult) -> Self {
        DimOut {
            kind: r.kind,
            value: r.value,
            witness: r.witness.map(|w| w.sets.into_iter().map(|s| s.members).collect()).unwrap_or_default(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Analysis {
    pub points: Vec<Vec<f64>>,
    pub diameter: f64,
    pub separation: f64,
    pub covering_diameter: f64,
    pub focal: Vec<usize>,
    pub lambda: f64,
    pub dim_fh: DimOut,
    pub dim_fb: DimOut,
}

fn parse_points(text: &str) -> Result<Vec<Vec<f64>>, String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.split([',', ' ', '\t'])
                .filter(|f| !f.is_empty())
                .map(|f| f.parse::<f64>().map_err(|_| format!("'{f}' is not a number")))
                .collect()
        })
        .collect()
}

pub fn analyze_points(text: &str, metric: &str) -> Result<Analysis, String> {
    let norm: Norm = metric.parse().map_err(|e: findim::Error| e.to_string())?;
    let points = parse_points(text)?;
    if points.len() > MAX_POINTS {
        return Err(format!("the demo handles at most {MAX_POINTS} points, got {}", points.len()));
    }
    let cloud = PointCloud::new(points, norm);
    let m = FiniteMetric::from_points(&cloud, None).map_err(|e| e.to_string())?;
    if m.len() < 2 {
        return Err("need at least two points".into());
    }
    let s = summarize(&m).map_err(|e| e.to_string())?;
    let nn = audit(&m).map_err(|e| e.to_string())?;
    Ok(Analysis {
        points: cloud.points,
        diameter: s.diameter,
        separation: s.separation,
        covering_diameter: s.covering_diameter,
        focal: s.focal,
        lambda: nn.lambda,
        dim_fh: dim_fh(&m).map_err(|e| e.to_string())?.into(),
        dim_fb: dim_fb(&m).map_err(|e| e.to_string())?.into(),
    })
}

pub fn family_points(family: &str, level: u32) -> Result<String, String> {
    let f: Family = family.parse().map_err(|e: findim::Error| e.to_string())?;
    let g = FamilySpec::new(f, level).generate().map_err(|e| e.to_string())?;
    let cloud = g.to_cloud().ok_or_else(|| format!("family '{f}' has no coordinates"))?;
    if cloud.len() > MAX_POINTS {
        return Err(format!("level {level} has {} points; the demo handles at most {MAX_POINTS}", cloud.len()));
    }
    Ok(cloud
        .points
        .iter()
        .map(|p| p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join("\n"))
}

pub fn convergence_csv(family: &str, from: u32, to: u32) -> Result<String, String> {
    let f: Family = family.parse().map_err(|e: findim::Error| e.to_string())?;
    if from > to || to > 8 {
        return Err("levels must satisfy from <= to <= 8".into());
    }
    let table = convergence_table(ConvergenceInput::Family(f), from..=to, ConvergenceOptions::default())
        .map_err(|e| e.to_string())?;
    table.to_csv().map_err(|e| e.to_string())
}

/// JSON analysis of a point list (one point per line) under the named metric.
#[wasm_bindgen]
pub fn analyze(text: &str, metric: &str) -> Result<String, JsError> {
    let a = analyze_points(text, metric).map_err(|e| JsError::new(&e))?;
    Ok(serde_json::to_string(&a).expect("analysis serializes"))
}

/// Points of a family level, one per line.
#[wasm_bindgen]
pub fn generate(family: &str, level: u32) -> Result<String, JsError> {
    family_points(family, level).map_err(|e| JsError::new(&e))
}

/// Convergence table of a fractal family as CSV.
#[wasm_bindgen]
pub fn converge(family: &str, from: u32, to: u32) -> Result<String, JsError> {
    convergence_csv(family, from, to).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle() {
        let a = analyze_points("0,0\n0,3\n4,0", "l2").unwrap();
        assert!((a.dim_fh.value.unwrap() - 2.0).abs() < 1e-8);
        assert_eq!(a.dim_fh.witness.len(), 2);
        let a = analyze_points("0 0\n0 3\n4 0\n", "linf").unwrap();
        assert_eq!(a.dim_fh.kind, DimensionKind::Infinite);
        assert_eq!(a.focal, vec![2]);
    }

    #[test]
    fn errors() {
        assert!(analyze_points("0,0\n0,x", "l2").is_err());
        assert!(analyze_points("0,0", "l2").is_err());
        assert!(analyze_points("0,0\n1,1", "l7").is_err());
        assert!(family_points("carpet", 2).is_err());
    }

    #[test]
    fn generate_and_converge() {
        let text = family_points("sierpinski", 2).unwrap();
        assert_eq!(text.lines().count(), 9);
        let a = analyze_points(&text, "l2").unwrap();
        assert!((a.dim_fh.value.unwrap() - 1.0).abs() < 1e-8);
        assert_eq!(convergence_csv("cantor", 2, 4).unwrap().lines().count(), 4);
    }
}
