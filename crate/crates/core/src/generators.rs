//! Example families: linear sets, triangles, Cantor-type fractals, doubles and folds.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticeSet;
use crate::metric::{FiniteMetric, Norm, PointCloud};
use crate::transforms::double;

/// Largest point set a generator will materialize.
pub const MAX_POINTS: u64 = 400_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Linear,
    Triangle,
    Cantor,
    CantorSquare,
    Sierpinski,
    SierpinskiTetra,
    CantorCarpet,
    Double,
    Fold,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::Linear,
        Family::Triangle,
        Family::Cantor,
        Family::CantorSquare,
        Family::Sierpinski,
        Family::SierpinskiTetra,
        Family::CantorCarpet,
        Family::Double,
        Family::Fold,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Linear => "linear",
            Family::Triangle => "triangle",
            Family::Cantor => "cantor",
            Family::CantorSquare => "cantor-square",
            Family::Sierpinski => "sierpinski",
            Family::SierpinskiTetra => "tetra",
            Family::CantorCarpet => "carpet",
            Family::Double => "double",
            Family::Fold => "fold",
        }
    }

    /// Whether levels are built on an integer lattice with a closed form.
    pub fn is_fractal(self) -> bool {
        matches!(
            self,
            Family::Cantor | Family::CantorSquare | Family::Sierpinski | Family::SierpinskiTetra | Family::CantorCarpet
        )
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        Family::ALL
            .into_iter()
            .find(|f| f.name() == key)
            .or(match key.as_str() {
                "sierpinski-tetra" => Some(Family::SierpinskiTetra),
                "cantor-carpet" => Some(Family::CantorCarpet),
                _ => None,
            })
            .ok_or_else(|| Error::BadParameter(format!("unknown family '{s}'")))
    }
}

/// A family, a level, and the family's real parameter where it has one
/// (spacing for `linear`, `ε` for `triangle`, `x` for `double`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub level: u32,
    pub parameter: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Generated {
    Cloud(PointCloud),
    Lattice(LatticeSet),
    Matrix(FiniteMetric),
}

impl Generated {
    pub fn len(&self) -> usize {
        match self {
            Generated::Cloud(c) => c.len(),
            Generated::Lattice(l) => l.len(),
            Generated::Matrix(m) => m.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_metric(&self) -> Result<FiniteMetric> {
        match self {
            Generated::Cloud(c) => FiniteMetric::from_points(c, None),
            Generated::Lattice(l) => Ok(l.to_metric()),
            Generated::Matrix(m) => Ok(m.clone()),
        }
    }

    pub fn to_cloud(&self) -> Option<PointCloud> {
        match self {
            Generated::Cloud(c) => Some(c.clone()),
            Generated::Lattice(l) => Some(l.to_cloud()),
            Generated::Matrix(_) => None,
        }
    }
}

impl FamilySpec {
    pub fn new(family: Family, level: u32) -> Self {
        FamilySpec { family, level, parameter: None }
    }

    pub fn with_parameter(mut self, p: f64) -> Self {
        self.parameter = Some(p);
        self
    }

    pub fn generate(&self) -> Result<Generated> {
        let n = self.level;
        Ok(match self.family {
            Family::Linear => Generated::Cloud(linear(n as usize, self.parameter.unwrap_or(1.0))?),
            Family::Triangle => Generated::Cloud(triangle(self.parameter.unwrap_or(0.5))?),
            Family::Fold => Generated::Cloud(fold(n as usize)?),
            Family::Double => {
                let base = FiniteMetric::from_points(&linear(n as usize, 1.0)?, None)?;
                Generated::Matrix(double(&base, self.parameter.unwrap_or(0.5))?)
            }
            Family::Cantor => Generated::Lattice(cantor_level(n)?),
            Family::CantorSquare => Generated::Lattice(cantor_square_level(n)?),
            Family::Sierpinski => Generated::Lattice(sierpinski_level(n)?),
            Family::SierpinskiTetra => Generated::Lattice(sierpinski_tetra_level(n)?),
            Family::CantorCarpet => Generated::Lattice(carpet_level(n)?),
        })
    }
}

/// `{0, x, …, (n−1)x} ⊆ ℝ`.
pub fn linear(n: usize, x: f64) -> Result<PointCloud> {
    if n == 0 {
        return Err(Error::EmptySpace);
    }
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::BadParameter(format!("spacing {x} must be positive")));
    }
    Ok(PointCloud::new((0..n).map(|i| vec![i as f64 * x]).collect(), Norm::L2))
}

/// Isosceles triangle with base 1 and legs `1 − ε`.
pub fn triangle(eps: f64) -> Result<PointCloud> {
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::BadParameter(format!("epsilon {eps} must lie in (0, 1/2]")));
    }
    let leg = 1.0 - eps;
    let h = (leg * leg - 0.25).max(0.0).sqrt();
    Ok(PointCloud::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, h]], Norm::L2))
}

/// A space whose finite Hausdorff and box dimensions both equal `t`.
pub fn realize_dimension(t: f64) -> Result<FiniteMetric> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::BadParameter(format!("dimension {t} must be nonnegative")));
    }
    if t == 0.0 {
        return FiniteMetric::from_points(&linear(1, 1.0)?, None);
    }
    if t.is_infinite() {
        return FiniteMetric::from_points(&linear(2, 1.0)?, None);
    }
    if t >= 1.0 {
        let eps = 1.0 - 2f64.powf(-1.0 / t);
        return FiniteMetric::from_points(&triangle(eps)?, None);
    }
    let x = (4f64.powf(1.0 / t) - 1.0).powf(-0.5);
    double(&FiniteMetric::from_points(&linear(2, 1.0)?, None)?, x)
}

/// Unit-cube corners `A, B, C, D, E, G, O` plus `H = (0, 0, t)` under ℓ∞.
/// All distances are 1 except `d(O, H) = t`; `A, …, G` are focal.
pub fn focal_cube(t: f64) -> Result<PointCloud> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::BadParameter(format!("t = {t} must lie in (0, 1]")));
    }
    let pts = [
        [1.0, 0.0, 0.0],
        [1.0, 0.0, 1.0],
        [0.0, 1.0, 0.0],
        [0.0, 1.0, 1.0],
        [1.0, 1.0, 0.0],
        [1.0, 1.0, 1.0],
        [0.0, 0.0, 0.0],
        [0.0, 0.0, t],
    ];
    Ok(PointCloud::new(pts.iter().map(|p| p.to_vec()).collect(), Norm::Linf))
}

/// `y_i = (1, …, 1, 0, …, 0)` with `i` ones, so `d(y_i, y_j) = √|i−j|`.
pub fn fold(n: usize) -> Result<PointCloud> {
    if n == 0 {
        return Err(Error::EmptySpace);
    }
    let dim = (n - 1).max(1);
    Ok(PointCloud::new((0..n).map(|i| (0..dim).map(|k| if k < i { 1.0 } else { 0.0 }).collect()).collect(), Norm::L2))
}

fn check_size(size: u64) -> Result<()> {
    if size > MAX_POINTS {
        return Err(Error::ExactLimitExceeded { size: size as usize, limit: MAX_POINTS as usize });
    }
    Ok(())
}

fn pow(b: u64, e: u32) -> u64 {
    b.checked_pow(e).unwrap_or(u64::MAX)
}

fn cantor_coords(n: u32) -> Vec<i64> {
    (0u64..1 << n).map(|bits| (1..=n).filter(|k| bits >> (k - 1) & 1 == 1).map(|k| 2 * 3i64.pow(n - k)).sum()).collect()
}

/// `L_n`: sums of `2/3^k` over subsets of `{1, …, n}`, in units of `3^-n`.
pub fn cantor_level(n: u32) -> Result<LatticeSet> {
    check_size(pow(2, n))?;
    let pts = cantor_coords(n).into_iter().map(|x| vec![x]).collect();
    LatticeSet::cubic(1, 3f64.powi(-(n as i32)), pts)
}

/// `L_n × L_n` of the Cantor family.
pub fn cantor_square_level(n: u32) -> Result<LatticeSet> {
    check_size(pow(4, n))?;
    let c = cantor_coords(n);
    let pts = c.iter().flat_map(|&x| c.iter().map(move |&y| vec![x, y])).collect();
    LatticeSet::cubic(2, 3f64.powi(-(n as i32)), pts)
}

/// Points `Σ c_k 2^-k` with `c_k ∈ {0, e_1, e_2}` on the triangular lattice.
pub fn sierpinski_level(n: u32) -> Result<LatticeSet> {
    check_size(pow(3, n))?;
    let side = 1i64 << n;
    let pts = (0..side).flat_map(|a| (0..side).filter(move |b| a & b == 0).map(move |b| vec![a, b])).collect();
    LatticeSet::triangular(2f64.powi(-(n as i32)), pts)
}

/// Points `Σ c_k 2^-k` with `c_k ∈ {0, e_1, e_2, e_3}` on the tetrahedral lattice.
pub fn sierpinski_tetra_level(n: u32) -> Result<LatticeSet> {
    check_size(pow(4, n))?;
    let side = 1i64 << n;
    let mut pts = Vec::new();
    for a in 0..side {
        for b in (0..side).filter(|b| a & b == 0) {
            for c in (0..side).filter(|c| a & c == 0 && b & c == 0) {
                pts.push(vec![a, b, c]);
            }
        }
    }
    LatticeSet::tetrahedral(2f64.powi(-(n as i32)), pts)
}

/// Bitmask of the base-3 digit positions of `x` equal to 1.
pub(crate) fn ones_mask(mut x: u64) -> u64 {
    let mut mask = 0;
    let mut bit = 1;
    while x > 0 {
        if x % 3 == 1 {
            mask |= bit;
        }
        x /= 3;
        bit <<= 1;
    }
    mask
}

/// Corner occupancy of the level-`n` carpet on the `(3^n + 1)²` grid.
fn carpet_corners(n: u32) -> (usize, Vec<u64>) {
    let side = 3usize.pow(n);
    let w = side + 1;
    let masks: Vec<u64> = (0..side as u64).map(ones_mask).collect();
    let mut bits = vec![0u64; (w * w).div_ceil(64)];
    let mut set = |x: usize, y: usize| {
        let k = x * w + y;
        bits[k / 64] |= 1 << (k % 64);
    };
    for i in 0..side {
        for j in 0..side {
            if masks[i] & masks[j] == 0 {
                set(i, j);
                set(i + 1, j);
                set(i, j + 1);
                set(i + 1, j + 1);
            }
        }
    }
    (w, bits)
}

/// `|L_n|` of the carpet, counted on the corner grid without building points.
pub fn carpet_count(n: u32) -> Result<u64> {
    if n > 8 {
        return Err(Error::ExactLimitExceeded { size: 3usize.pow(n.min(20)), limit: 3usize.pow(8) });
    }
    let (_, bits) = carpet_corners(n);
    Ok(bits.iter().map(|b| b.count_ones() as u64).sum())
}

/// Corners of the kept level-`n` cells of the carpet, in units of `3^-n`.
pub fn carpet_level(n: u32) -> Result<LatticeSet> {
    if n > 6 {
        return Err(Error::ExactLimitExceeded { size: carpet_count(n)? as usize, limit: MAX_POINTS as usize });
    }
    let (w, bits) = carpet_corners(n);
    let mut pts = Vec::new();
    for k in 0..w * w {
        if bits[k / 64] >> (k % 64) & 1 == 1 {
            pts.push(vec![(k / w) as i64, (k % w) as i64]);
        }
    }
    LatticeSet::cubic(2, 3f64.powi(-(n as i32)), pts)
}

/// Published invariants of a family level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub size: u64,
    /// `T_∇`; `None` where the level has focal points.
    pub count: Option<u64>,
    /// `Δ/∇`.
    pub ratio: f64,
    /// Dimension value; `None` where it is infinite.
    pub dim: Option<f64>,
    /// The classical dimension of the limit set.
    pub limit: f64,
}

/// Carpet cardinalities from `|L_0| = 4`, `|L_{n+1}| = 4|L_n| + 4(|L_n| − 2(3^n + 1))`.
pub fn carpet_recursion(n: u32) -> u64 {
    (0..n).fold(4u64, |l, k| 4 * l + 4 * (l - 2 * (pow(3, k) + 1)))
}

/// Closed-form size, `T`, `Δ/∇` and dimension for a family level.
pub fn closed_form(family: Family, n: u32) -> Option<ClosedForm> {
    let ln = f64::ln;
    let three_n = 3f64.powi(n as i32);
    let two_n = 2f64.powi(n as i32);
    let (size, count, ratio, limit) = match family {
        Family::Linear if n >= 1 => {
            let n64 = n as u64;
            (n64, (n >= 3).then(|| n64.div_ceil(2)), (n as f64 - 1.0).max(1.0), 1.0)
        }
        Family::Cantor => (pow(2, n), (n >= 2).then(|| pow(2, n - 1)), (three_n - 1.0) / 2.0, ln(2.0) / ln(3.0)),
        Family::CantorSquare if n >= 1 => {
            (pow(4, n), Some(pow(2, 2 * n - 1)), 2f64.sqrt() * (three_n - 1.0) / 2.0, 2.0 * ln(2.0) / ln(3.0))
        }
        Family::Sierpinski => (pow(3, n), (n >= 2).then(|| pow(3, n - 1)), two_n - 1.0, ln(3.0) / ln(2.0)),
        Family::SierpinskiTetra => (pow(4, n), (n >= 2).then(|| pow(4, n - 1)), two_n - 1.0, 2.0),
        Family::CantorCarpet => {
            let size = carpet_recursion(n);
            (size, Some(size / 2), 2f64.sqrt() * three_n, ln(8.0) / ln(3.0))
        }
        _ => return None,
    };
    Some(ClosedForm { size, count, ratio, dim: count.map(|t| ln(t as f64) / ln(ratio)), limit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimension::{dim_fh, DimensionKind};
    use crate::metric::summarize;

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("koch".parse::<Family>().is_err());
    }

    #[test]
    fn cantor_level_two_points() {
        let l = cantor_level(2).unwrap();
        let xs: Vec<f64> = l.to_cloud().points.iter().map(|p| p[0]).collect();
        let want = [0.0, 2.0 / 9.0, 2.0 / 3.0, 8.0 / 9.0];
        assert!(xs.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-15));
        let s = l.summary().unwrap();
        assert!(s.locally_uniform());
        assert!((s.covering_diameter - 2.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn sizes_match_closed_forms() {
        for n in 1..=4 {
            assert_eq!(cantor_level(n).unwrap().len() as u64, closed_form(Family::Cantor, n).unwrap().size);
            assert_eq!(
                cantor_square_level(n).unwrap().len() as u64,
                closed_form(Family::CantorSquare, n).unwrap().size
            );
            assert_eq!(sierpinski_level(n).unwrap().len() as u64, closed_form(Family::Sierpinski, n).unwrap().size);
            assert_eq!(
                sierpinski_tetra_level(n).unwrap().len() as u64,
                closed_form(Family::SierpinskiTetra, n).unwrap().size
            );
        }
    }

    #[test]
    fn carpet_small_levels() {
        assert_eq!(carpet_level(0).unwrap().len(), 4);
        assert_eq!(carpet_level(1).unwrap().len(), 16);
        assert_eq!(carpet_level(2).unwrap().len(), 96);
        assert_eq!(carpet_count(2).unwrap(), 96);
        assert_eq!(carpet_recursion(2), 96);
    }

    #[test]
    fn triangle_dimensions() {
        for (eps, want) in [(1.0 - 2f64.powf(-0.5), 2.0), (0.5, 1.0), (1.0 - 2f64.powf(-1.0 / 3.0), 3.0)] {
            let m = FiniteMetric::from_points(&triangle(eps).unwrap(), None).unwrap();
            assert!(summarize(&m).unwrap().locally_uniform);
            assert!((dim_fh(&m).unwrap().value.unwrap() - want).abs() < 1e-8);
        }
        assert!(triangle(0.0).is_err() && triangle(0.6).is_err());
    }

    #[test]
    fn realized_dimensions() {
        assert_eq!(dim_fh(&realize_dimension(0.0).unwrap()).unwrap().kind, DimensionKind::Zero);
        assert_eq!(dim_fh(&realize_dimension(f64::INFINITY).unwrap()).unwrap().kind, DimensionKind::Infinite);
        let half = realize_dimension(0.5).unwrap();
        assert_eq!(half.len(), 4);
        assert!((dim_fh(&half).unwrap().value.unwrap() - 0.5).abs() < 1e-8);
    }

    #[test]
    fn fold_distances() {
        let m = FiniteMetric::from_points(&fold(4).unwrap(), None).unwrap();
        assert!((m.d(0, 3) - 3f64.sqrt()).abs() < 1e-15);
        assert!((m.d(1, 3) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(m.d(2, 3), 1.0);
    }

    #[test]
    fn linear_errors() {
        assert_eq!(linear(0, 1.0).unwrap_err(), Error::EmptySpace);
        assert!(linear(3, -1.0).is_err());
    }
}
