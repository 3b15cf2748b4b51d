//! Nearest-point functions and the meaningfulness audit for nearest-neighbor search.

use serde::{Deserialize, Serialize};

use crate::cover::{CoverClass, CoverSet, Mask, TwoCover};
use crate::dimension::{dim_fb, dim_fh, DimensionKind};
use crate::error::{Error, Result};
use crate::metric::{summarize, FiniteMetric};

/// `n(x)`: a point nearest `x`, ties broken by lowest index.
pub fn nearest_point_function(m: &FiniteMetric) -> Result<Vec<usize>> {
    match m.len() {
        0 => return Err(Error::EmptySpace),
        1 => return Err(Error::SingletonSpace),
        _ => {}
    }
    Ok((0..m.len())
        .map(|i| {
            let mut best = usize::MAX;
            for (j, &d) in m.row(i).iter().enumerate() {
                if j != i && (best == usize::MAX || d < m.d(i, best)) {
                    best = j;
                }
            }
            best
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    MeaningfulNN,
    NoNN,
}

/// The eight equivalent conditions, each evaluated on its own terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Omnibus {
    /// `n` maps every point to a neighbor, i.e. `d(x, n(x)) < Δ`.
    pub nearest_neighbor: bool,
    /// `n` is a `∇/Δ`-MNN function.
    pub nabla_ratio_mnn: bool,
    /// `n` is a `λ`-MNN function for some `λ`.
    pub lambda_mnn: bool,
    pub no_focal_points: bool,
    /// Some 2-covering with at least two sets has all diameters below `Δ`.
    pub k1_nonempty: bool,
    pub ratio_below_one: bool,
    pub dim_fh_finite: bool,
    pub dim_fb_finite: bool,
}

impl Omnibus {
    pub fn as_array(&self) -> [bool; 8] {
        [
            self.nearest_neighbor,
            self.nabla_ratio_mnn,
            self.lambda_mnn,
            self.no_focal_points,
            self.k1_nonempty,
            self.ratio_below_one,
            self.dim_fh_finite,
            self.dim_fb_finite,
        ]
    }

    pub fn consistent(&self) -> bool {
        let a = self.as_array();
        a.iter().all(|&b| b == a[0])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NearestReport {
    pub nearest: Vec<usize>,
    /// `∇(F)/Δ(F)`.
    pub lambda: f64,
    /// `δ(F)/Δ(F)`, which does not detect focal points.
    pub separation_ratio: f64,
    pub focal: Vec<usize>,
    pub verdict: Verdict,
    pub omnibus: Omnibus,
    /// False when the dimensions were too large to solve and their finiteness
    /// was read off the bounds instead.
    pub dimensions_solved: bool,
}

fn k1_nonempty(m: &FiniteMetric, nearest: &[usize], below: f64) -> Result<bool> {
    let n = m.len();
    if n < 3 || nearest.iter().enumerate().any(|(i, &j)| m.d(i, j) >= below) {
        return Ok(false);
    }
    if n > Mask::BITS {
        return Ok(true);
    }
    let mut pairs: Vec<(usize, usize)> = (0..n).map(|i| (i.min(nearest[i]), i.max(nearest[i]))).collect();
    pairs.sort_unstable();
    pairs.dedup();
    let sets = pairs.into_iter().map(|(a, b)| CoverSet::new(m, vec![a, b])).collect();
    Ok(TwoCover::new(m, sets)?.class == CoverClass::K1)
}

fn finite_or_bounds(r: Result<DimensionKind>, fallback: bool, solved: &mut bool) -> Result<bool> {
    match r {
        Ok(k) => Ok(k == DimensionKind::Finite),
        Err(e) if e.is_budget() => {
            *solved = false;
            Ok(fallback)
        }
        Err(e) => Err(e),
    }
}

pub fn audit(m: &FiniteMetric) -> Result<NearestReport> {
    let nearest = nearest_point_function(m)?;
    let s = summarize(m)?;
    let d = s.diameter;
    let below = d - s.tolerance;
    let lambda = s.covering_diameter / d;
    let worst = nearest.iter().enumerate().map(|(i, &j)| m.d(i, j)).fold(0.0, f64::max);
    let nn = nearest.iter().enumerate().all(|(i, &j)| m.d(i, j) < below);
    let mnn_lambda = worst / d;
    let lambda_mnn = nn && mnn_lambda > 0.0 && mnn_lambda < 1.0;
    let nabla_ratio_mnn = lambda_mnn && (mnn_lambda - lambda).abs() <= s.tolerance / d;

    let mut solved = true;
    let bounds_finite = !s.has_focal_points();
    let fh = finite_or_bounds(dim_fh(m).map(|r| r.kind), bounds_finite, &mut solved)?;
    let fb = finite_or_bounds(dim_fb(m).map(|r| r.kind), bounds_finite, &mut solved)?;

    let omnibus = Omnibus {
        nearest_neighbor: nn,
        nabla_ratio_mnn,
        lambda_mnn,
        no_focal_points: s.focal.is_empty(),
        k1_nonempty: k1_nonempty(m, &nearest, below)?,
        ratio_below_one: lambda < 1.0 - s.tolerance / d,
        dim_fh_finite: fh,
        dim_fb_finite: fb,
    };
    Ok(NearestReport {
        nearest,
        lambda,
        separation_ratio: s.separation / d,
        verdict: if s.focal.is_empty() { Verdict::MeaningfulNN } else { Verdict::NoNN },
        focal: s.focal,
        omnibus,
        dimensions_solved: solved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::focal_cube;
    use crate::metric::{Norm, PointCloud};

    fn line(xs: &[f64]) -> FiniteMetric {
        let pc = PointCloud::new(xs.iter().map(|&x| vec![x]).collect(), Norm::L2);
        FiniteMetric::from_points(&pc, None).unwrap()
    }

    #[test]
    fn linear_four() {
        let m = line(&[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(nearest_point_function(&m).unwrap(), vec![1, 0, 1, 2]);
        let r = audit(&m).unwrap();
        assert!((r.lambda - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(r.verdict, Verdict::MeaningfulNN);
        assert!(r.omnibus.consistent() && r.omnibus.nearest_neighbor);
    }

    #[test]
    fn pair_and_singleton() {
        assert_eq!(nearest_point_function(&line(&[0.0, 5.0])).unwrap(), vec![1, 0]);
        assert_eq!(nearest_point_function(&line(&[0.0])).unwrap_err(), Error::SingletonSpace);
        let r = audit(&line(&[0.0, 5.0])).unwrap();
        assert_eq!(r.verdict, Verdict::NoNN);
        assert!(r.omnibus.consistent());
    }

    #[test]
    fn focal_cube_hides_focality() {
        let m = FiniteMetric::from_points(&focal_cube(0.01).unwrap(), None).unwrap();
        let n = nearest_point_function(&m).unwrap();
        assert_eq!((n[6], n[7]), (7, 6));
        let r = audit(&m).unwrap();
        assert!((r.separation_ratio - 0.01).abs() < 1e-15);
        assert_eq!(r.lambda, 1.0);
        assert_eq!(r.verdict, Verdict::NoNN);
        assert_eq!(r.focal, vec![0, 1, 2, 3, 4, 5]);
        assert!(r.omnibus.consistent() && !r.omnibus.k1_nonempty);
    }

    #[test]
    fn equilateral() {
        let pc = PointCloud::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 3f64.sqrt() / 2.0]], Norm::L2);
        let r = audit(&FiniteMetric::from_points(&pc, None).unwrap()).unwrap();
        assert_eq!(r.focal.len(), 3);
        assert_eq!(r.verdict, Verdict::NoNN);
        assert!(r.omnibus.consistent());
    }
}
