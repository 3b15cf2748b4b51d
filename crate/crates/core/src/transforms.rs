//! Hölder equivalences `d' = r·d^β`, doubling, and the dimension scaling laws.

use serde::{Deserialize, Serialize};

use crate::dimension::{dim_fb, dim_fh, DimensionKind, DimensionResult};
use crate::error::{Error, Result};
use crate::metric::FiniteMetric;

/// Agreement required between `β·dim(η(F))` and `dim(F)`.
pub const SCALING_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolderParams {
    pub r: f64,
    pub beta: f64,
}

impl HolderParams {
    pub fn new(r: f64, beta: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite() && beta > 0.0 && beta.is_finite()) {
            return Err(Error::BadParameter(format!("need r > 0 and beta > 0, got r = {r}, beta = {beta}")));
        }
        Ok(HolderParams { r, beta })
    }

    pub fn similarity(r: f64) -> Result<Self> {
        Self::new(r, 1.0)
    }

    pub fn apply(&self, d: f64) -> f64 {
        self.r * d.powf(self.beta)
    }
}

/// `d'(i,j) = r·d(i,j)^β`. A triangle violation is logged, or rejected when `strict`.
pub fn holder_transform(m: &FiniteMetric, p: HolderParams, strict: bool) -> Result<FiniteMetric> {
    let out = FiniteMetric::from_fn(m.len(), None, |i, j| p.apply(m.d(i, j)));
    if let Some((i, j, k)) = out.triangle_violation() {
        let msg = format!(
            "d({i},{k}) = {} exceeds d({i},{j}) + d({j},{k}) = {} after transform (r = {}, beta = {})",
            out.d(i, k),
            out.d(i, j) + out.d(j, k),
            p.r,
            p.beta
        );
        if strict {
            return Err(Error::NotAMetric(msg));
        }
        log::warn!("{msg}");
    }
    match m.labels() {
        Some(labels) => out.with_labels(labels.to_vec()),
        None => Ok(out),
    }
}

/// The double `D_x(F)`: two copies of `F` at distance `x`, point `(b, ε)` at index `ε·|F| + b`.
pub fn double(m: &FiniteMetric, x: f64) -> Result<FiniteMetric> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::BadParameter(format!("doubling distance {x} must be positive")));
    }
    let n = m.len();
    Ok(FiniteMetric::from_fn(2 * n, None, |a, b| {
        let d = m.d(a % n, b % n);
        if a / n == b / n {
            d
        } else {
            (d * d + x * x).sqrt()
        }
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub params: HolderParams,
    pub original_fh: DimensionResult,
    pub transformed_fh: DimensionResult,
    pub original_fb: DimensionResult,
    pub transformed_fb: DimensionResult,
    pub fh_ok: bool,
    pub fb_ok: bool,
    pub kinds_ok: bool,
}

impl ScalingReport {
    pub fn passed(&self) -> bool {
        self.fh_ok && self.fb_ok && self.kinds_ok
    }
}

fn scaled_agrees(beta: f64, original: &DimensionResult, transformed: &DimensionResult) -> bool {
    match (original.kind, transformed.kind) {
        (DimensionKind::Finite, DimensionKind::Finite) => {
            (beta * transformed.value.unwrap() - original.value.unwrap()).abs() <= SCALING_TOL
        }
        (a, b) => a == b,
    }
}

/// Checks `β·dim(η(F)) = dim(F)` for both dimensions and that kinds are preserved.
pub fn verify_scaling(m: &FiniteMetric, p: HolderParams) -> Result<ScalingReport> {
    let image = holder_transform(m, p, false)?;
    let original_fh = dim_fh(m)?;
    let transformed_fh = dim_fh(&image)?;
    let original_fb = dim_fb(m)?;
    let transformed_fb = dim_fb(&image)?;
    Ok(ScalingReport {
        params: p,
        fh_ok: scaled_agrees(p.beta, &original_fh, &transformed_fh),
        fb_ok: scaled_agrees(p.beta, &original_fb, &transformed_fb),
        kinds_ok: original_fh.kind == transformed_fh.kind && original_fb.kind == transformed_fb.kind,
        original_fh,
        transformed_fh,
        original_fb,
        transformed_fb,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{summarize, Norm, PointCloud};

    fn line(xs: &[f64]) -> FiniteMetric {
        let pc = PointCloud::new(xs.iter().map(|&x| vec![x]).collect(), Norm::L2);
        FiniteMetric::from_points(&pc, None).unwrap()
    }

    #[test]
    fn square_root_of_linear_four() {
        let m = holder_transform(&line(&[0.0, 1.0, 2.0, 3.0]), HolderParams::new(1.0, 0.5).unwrap(), true).unwrap();
        let mut ds: Vec<f64> = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).map(|(i, j)| m.d(i, j)).collect();
        ds.sort_by(f64::total_cmp);
        let want = [1.0, 1.0, 1.0, 2f64.sqrt(), 2f64.sqrt(), 3f64.sqrt()];
        assert!(ds.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-15));
    }

    #[test]
    fn identity_and_similarity() {
        let m = line(&[0.0, 1.0, 2.5, 4.0]);
        let id = holder_transform(&m, HolderParams::new(1.0, 1.0).unwrap(), true).unwrap();
        assert_eq!(id.to_rows(), m.to_rows());
        let report = verify_scaling(&m, HolderParams::similarity(2.0).unwrap()).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn folded_linear_four() {
        let m = line(&[0.0, 1.0, 2.0, 3.0]);
        let report = verify_scaling(&m, HolderParams::new(1.0, 0.5).unwrap()).unwrap();
        assert!(report.passed());
        let v = report.transformed_fh.value.unwrap();
        assert!((v - 2.0 * 2f64.ln() / 3f64.ln()).abs() < 1e-8);
    }

    #[test]
    fn strict_mode_rejects_non_metrics() {
        let m = line(&[0.0, 1.0, 2.0]);
        let p = HolderParams::new(1.0, 2.0).unwrap();
        assert!(matches!(holder_transform(&m, p, true), Err(Error::NotAMetric(_))));
        assert!(holder_transform(&m, p, false).is_ok());
    }

    #[test]
    fn doubles() {
        let pair = line(&[0.0, 1.0]);
        let x = 15f64.powf(-0.5);
        let d = double(&pair, x).unwrap();
        assert_eq!(d.len(), 4);
        let s = summarize(&d).unwrap();
        assert!(s.locally_uniform);
        assert!((dim_fh(&d).unwrap().value.unwrap() - 0.5).abs() < 1e-9);
        assert!((dim_fb(&d).unwrap().value.unwrap() - 0.5).abs() < 1e-12);

        let single = line(&[3.0]);
        assert_eq!(dim_fh(&double(&single, 1.0).unwrap()).unwrap().kind, DimensionKind::Infinite);
    }
}
