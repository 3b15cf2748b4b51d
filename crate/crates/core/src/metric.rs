//! Finite metric spaces and their first-order invariants.
//!
//! A [`FiniteMetric`] is a validated symmetric distance matrix. Every
//! equality test on distances (focal points, local uniformity, threshold
//! graph membership) goes through the space's absolute tolerance, which
//! defaults to `max(1e-12, 1e-9 * diameter)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Norm used to turn coordinates into distances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Norm {
    L1,
    L2,
    Linf,
    Lp(f64),
}

impl Norm {
    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        let diffs = a.iter().zip(b).map(|(x, y)| (x - y).abs());
        match *self {
            Norm::L1 => diffs.sum(),
            Norm::L2 => diffs.map(|d| d * d).sum::<f64>().sqrt(),
            Norm::Linf => diffs.fold(0.0, f64::max),
            Norm::Lp(p) => diffs.map(|d| d.powf(p)).sum::<f64>().powf(1.0 / p),
        }
    }

    pub fn is_euclidean(&self) -> bool {
        matches!(self, Norm::L2) || matches!(self, Norm::Lp(p) if *p == 2.0)
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Norm::L1 => f.write_str("l1"),
            Norm::L2 => f.write_str("l2"),
            Norm::Linf => f.write_str("linf"),
            Norm::Lp(p) => write!(f, "lp:{p}"),
        }
    }
}

impl FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "l1" => Ok(Norm::L1),
            "l2" => Ok(Norm::L2),
            "linf" | "l_inf" | "max" => Ok(Norm::Linf),
            other => {
                let p = other
                    .strip_prefix("lp:")
                    .and_then(|p| p.parse::<f64>().ok())
                    .ok_or_else(|| Error::MalformedInput(format!("unknown metric '{s}'")))?;
                if !(p >= 1.0 && p.is_finite()) {
                    return Err(Error::MalformedInput(format!("lp exponent must be >= 1, got {p}")));
                }
                Ok(Norm::Lp(p))
            }
        }
    }
}

impl TryFrom<String> for Norm {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Norm> for String {
    fn from(n: Norm) -> String {
        n.to_string()
    }
}

/// Points in R^dim together with the norm that measures them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    pub points: Vec<Vec<f64>>,
    pub norm: Norm,
}

impl PointCloud {
    pub fn new(points: Vec<Vec<f64>>, norm: Norm) -> Self {
        PointCloud { points, norm }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    pub fn with_norm(mut self, norm: Norm) -> Self {
        self.norm = norm;
        self
    }
}

/// Construction options for [`FiniteMetric::from_matrix`].
#[derive(Debug, Clone, Copy)]
pub struct MetricOptions {
    /// Absolute tolerance; `None` picks `max(1e-12, 1e-9 * diameter)`.
    pub tolerance: Option<f64>,
    pub check_triangle: bool,
}

impl Default for MetricOptions {
    fn default() -> Self {
        MetricOptions { tolerance: None, check_triangle: true }
    }
}

pub fn default_tolerance(diameter: f64) -> f64 {
    f64::max(1e-12, 1e-9 * diameter)
}

/// A finite metric space stored as a dense symmetric distance matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteMetric {
    size: usize,
    dist: Vec<f64>,
    labels: Option<Vec<String>>,
    tolerance: f64,
    explicit_tolerance: bool,
}

impl FiniteMetric {
    /// Builds the space from coordinates. Euclidean distances are rooted
    /// once from the summed squares, so integer coordinates give bit-stable ties.
    pub fn from_points(cloud: &PointCloud, tolerance: Option<f64>) -> Result<Self> {
        if cloud.is_empty() {
            return Err(Error::MalformedInput("point cloud is empty".into()));
        }
        let dim = cloud.dim();
        for (i, p) in cloud.points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::MalformedInput(format!("point {i} has {} coordinates, expected {dim}", p.len())));
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::MalformedInput(format!("point {i} has a non-finite coordinate")));
            }
        }
        let n = cloud.len();
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (&cloud.points[i], &cloud.points[j]);
                if a == b {
                    return Err(Error::DegenerateInput(format!("points {i} and {j} coincide")));
                }
                let d = cloud.norm.distance(a, b);
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        let mut m = FiniteMetric { size: n, dist, labels: None, tolerance: 0.0, explicit_tolerance: false };
        m.set_tolerance(tolerance);
        Ok(m)
    }

    /// Builds the space from a full distance matrix, validating the metric axioms.
    pub fn from_matrix(rows: &[Vec<f64>], opts: MetricOptions) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::MalformedInput("distance matrix is empty".into()));
        }
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::MalformedInput(format!("row {i} has {} entries, expected {n}", r.len())));
        }
        let mut diameter = 0.0f64;
        for (i, r) in rows.iter().enumerate() {
            for (j, &d) in r.iter().enumerate() {
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::MalformedInput(format!("entry ({i},{j}) = {d} is not a nonnegative real")));
                }
                diameter = diameter.max(d);
            }
        }
        let tol = opts.tolerance.unwrap_or_else(|| default_tolerance(diameter));
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            if rows[i][i] > tol {
                return Err(Error::MalformedInput(format!("diagonal entry ({i},{i}) = {} is not zero", rows[i][i])));
            }
            for j in i + 1..n {
                let (a, b) = (rows[i][j], rows[j][i]);
                if (a - b).abs() > tol {
                    return Err(Error::MalformedInput(format!("matrix is not symmetric at ({i},{j}): {a} vs {b}")));
                }
                if a <= tol {
                    return Err(Error::DegenerateInput(format!("points {i} and {j} are at distance {a}")));
                }
                dist[i * n + j] = a;
                dist[j * n + i] = a;
            }
        }
        let mut m = FiniteMetric { size: n, dist, labels: None, tolerance: 0.0, explicit_tolerance: false };
        m.set_tolerance(opts.tolerance);
        if opts.check_triangle {
            if let Some((i, j, k)) = m.triangle_violation() {
                return Err(Error::NotAMetric(format!(
                    "d({i},{k}) = {} > d({i},{j}) + d({j},{k}) = {}",
                    m.d(i, k),
                    m.d(i, j) + m.d(j, k)
                )));
            }
        }
        Ok(m)
    }

    /// Builds a space from a distance function on indices, trusting it to be a metric.
    pub(crate) fn from_fn(n: usize, tolerance: Option<f64>, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let d = f(i, j);
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        let mut m = FiniteMetric { size: n, dist, labels: None, tolerance: 0.0, explicit_tolerance: false };
        m.set_tolerance(tolerance);
        m
    }

    fn set_tolerance(&mut self, tolerance: Option<f64>) {
        match tolerance {
            Some(t) => {
                self.tolerance = t;
                self.explicit_tolerance = true;
            }
            None => {
                self.tolerance = default_tolerance(self.diameter());
                self.explicit_tolerance = false;
            }
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.size {
            return Err(Error::MalformedInput(format!("{} labels for {} points", labels.len(), self.size)));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.set_tolerance(Some(tolerance));
        self
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.size + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.dist[i * self.size..(i + 1) * self.size]
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Tolerance that was set explicitly, if any. Derived spaces inherit it.
    pub fn explicit_tolerance(&self) -> Option<f64> {
        self.explicit_tolerance.then_some(self.tolerance)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.size).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn diameter(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    /// Diameter of the subset given by `members`.
    pub fn subset_diameter(&self, members: &[usize]) -> f64 {
        let mut best = 0.0f64;
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                best = best.max(self.d(i, j));
            }
        }
        best
    }

    /// Returns a triple `(i, j, k)` with `d(i,k) > d(i,j) + d(j,k) + tol`, if any.
    pub fn triangle_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.size;
        for i in 0..n {
            for k in i + 1..n {
                let dik = self.d(i, k);
                for j in 0..n {
                    if j != i && j != k && dik > self.d(i, j) + self.d(j, k) + self.tolerance {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn is_metric(&self) -> bool {
        self.triangle_violation().is_none()
    }

    /// Distance from each point to a nearest other point.
    pub fn nu(&self) -> Result<Vec<f64>> {
        if self.size < 2 {
            return Err(Error::SingletonSpace);
        }
        Ok((0..self.size)
            .map(|i| {
                self.row(i).iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &d)| d).fold(f64::INFINITY, f64::min)
            })
            .collect())
    }

    /// Same space with every distance multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> FiniteMetric {
        let tol = self.explicit_tolerance().map(|t| t * factor);
        FiniteMetric::from_fn(self.size, tol, |i, j| self.d(i, j) * factor)
    }

    /// Subspace on the given indices, in the given order.
    pub fn subspace(&self, indices: &[usize]) -> FiniteMetric {
        let mut m =
            FiniteMetric::from_fn(indices.len(), self.explicit_tolerance(), |a, b| self.d(indices[a], indices[b]));
        if let Some(labels) = &self.labels {
            m.labels = Some(indices.iter().map(|&i| labels[i].clone()).collect());
        }
        m
    }
}

/// First-order invariants of a space with at least two points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub size: usize,
    pub diameter: f64,
    pub separation: f64,
    pub covering_diameter: f64,
    pub nu: Vec<f64>,
    pub focal: Vec<usize>,
    pub locally_uniform: bool,
    pub tolerance: f64,
}

impl MetricSummary {
    pub fn has_focal_points(&self) -> bool {
        !self.focal.is_empty()
    }
}

pub fn summarize(m: &FiniteMetric) -> Result<MetricSummary> {
    let nu = m.nu()?;
    let diameter = m.diameter();
    let tol = m.tolerance();
    let separation = nu.iter().copied().fold(f64::INFINITY, f64::min);
    let covering_diameter = nu.iter().copied().fold(0.0, f64::max);
    let focal = (0..m.len()).filter(|&a| nu[a] >= diameter - tol).collect();
    Ok(MetricSummary {
        size: m.len(),
        diameter,
        separation,
        covering_diameter,
        nu,
        focal,
        locally_uniform: covering_diameter - separation <= tol,
        tolerance: tol,
    })
}

/// Whether all points lie on one straight line, judged in the Euclidean norm.
pub fn is_collinear(cloud: &PointCloud, tolerance: Option<f64>) -> bool {
    let pts = &cloud.points;
    if pts.len() <= 2 || cloud.dim() <= 1 {
        return true;
    }
    let base = &pts[0];
    let sub = |p: &[f64]| -> Vec<f64> { p.iter().zip(base).map(|(a, b)| a - b).collect() };
    let norm2 = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (far, far_len) = pts
        .iter()
        .map(|p| {
            let v = sub(p);
            let l = norm2(&v);
            (v, l)
        })
        .fold((Vec::new(), 0.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
    let tol = tolerance.unwrap_or_else(|| default_tolerance(2.0 * far_len));
    let dir: Vec<f64> = far.iter().map(|x| x / far_len).collect();
    pts.iter().all(|p| {
        let v = sub(p);
        let along: f64 = v.iter().zip(&dir).map(|(a, b)| a * b).sum();
        let off: Vec<f64> = v.iter().zip(&dir).map(|(a, b)| a - along * b).collect();
        norm2(&off) <= tol
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triple(norm: Norm) -> PointCloud {
        PointCloud::new(vec![vec![0.0, 0.0], vec![0.0, 3.0], vec![4.0, 0.0]], norm)
    }

    fn sorted_distances(m: &FiniteMetric) -> Vec<f64> {
        let mut v = Vec::new();
        for i in 0..m.len() {
            for j in i + 1..m.len() {
                v.push(m.d(i, j));
            }
        }
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn triple_distances_per_norm() {
        let l2 = FiniteMetric::from_points(&triple(Norm::L2), None).unwrap();
        assert_eq!(sorted_distances(&l2), vec![3.0, 4.0, 5.0]);
        let l1 = FiniteMetric::from_points(&triple(Norm::L1), None).unwrap();
        assert_eq!(sorted_distances(&l1), vec![3.0, 4.0, 7.0]);
        let linf = FiniteMetric::from_points(&triple(Norm::Linf), None).unwrap();
        assert_eq!(sorted_distances(&linf), vec![3.0, 4.0, 4.0]);
    }

    #[test]
    fn singleton_is_zero_matrix() {
        let m = FiniteMetric::from_points(&PointCloud::new(vec![vec![5.0]], Norm::L2), None).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.d(0, 0), 0.0);
        assert_eq!(summarize(&m), Err(Error::SingletonSpace));
    }

    #[test]
    fn rejects_duplicates_and_ragged_input() {
        let dup = PointCloud::new(vec![vec![1.0, 2.0], vec![1.0, 2.0]], Norm::L2);
        assert!(matches!(FiniteMetric::from_points(&dup, None), Err(Error::DegenerateInput(_))));
        let ragged = PointCloud::new(vec![vec![1.0, 2.0], vec![1.0]], Norm::L2);
        assert!(matches!(FiniteMetric::from_points(&ragged, None), Err(Error::MalformedInput(_))));
    }

    #[test]
    fn matrix_validation() {
        let asym = vec![vec![0.0, 1.0], vec![2.0, 0.0]];
        assert!(matches!(FiniteMetric::from_matrix(&asym, MetricOptions::default()), Err(Error::MalformedInput(_))));
        let bad = vec![vec![0.0, 1.0, 5.0], vec![1.0, 0.0, 1.0], vec![5.0, 1.0, 0.0]];
        assert!(matches!(FiniteMetric::from_matrix(&bad, MetricOptions::default()), Err(Error::NotAMetric(_))));
        let skip = MetricOptions { check_triangle: false, ..Default::default() };
        let m = FiniteMetric::from_matrix(&bad, skip).unwrap();
        assert!(!m.is_metric());
        let zero = vec![vec![0.0, 0.0], vec![0.0, 0.0]];
        assert!(matches!(FiniteMetric::from_matrix(&zero, MetricOptions::default()), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn linear_five_summary() {
        let cloud = PointCloud::new((0..5).map(|i| vec![i as f64]).collect(), Norm::L2);
        let s = summarize(&FiniteMetric::from_points(&cloud, None).unwrap()).unwrap();
        assert_eq!((s.separation, s.covering_diameter, s.diameter), (1.0, 1.0, 4.0));
        assert!(s.focal.is_empty());
        assert!(s.locally_uniform);
    }

    #[test]
    fn two_points_are_both_focal() {
        let cloud = PointCloud::new(vec![vec![0.0], vec![7.0]], Norm::L2);
        let s = summarize(&FiniteMetric::from_points(&cloud, None).unwrap()).unwrap();
        assert_eq!((s.separation, s.covering_diameter, s.diameter), (7.0, 7.0, 7.0));
        assert_eq!(s.focal, vec![0, 1]);
    }

    #[test]
    fn cube_with_spike_focal_points() {
        // A B C D E G O H in the sup norm, with d(O,H) = 0.5.
        let pts = vec![
            vec![1.0, 0.0, 0.0],
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 1.0, 1.0],
            vec![1.0, 1.0, 0.0],
            vec![1.0, 1.0, 1.0],
            vec![0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.5],
        ];
        let m = FiniteMetric::from_points(&PointCloud::new(pts, Norm::Linf), None).unwrap();
        let s = summarize(&m).unwrap();
        assert_eq!((s.separation, s.covering_diameter, s.diameter), (0.5, 1.0, 1.0));
        assert_eq!(s.focal, vec![0, 1, 2, 3, 4, 5]);
        assert!(!s.locally_uniform);
    }

    #[test]
    fn collinearity() {
        let line = PointCloud::new(vec![vec![0.0], vec![3.0], vec![7.0]], Norm::L2);
        assert!(is_collinear(&line, None));
        assert!(!is_collinear(&triple(Norm::L2), None));
        let diag = PointCloud::new(vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]], Norm::L2);
        assert!(is_collinear(&diag, None));
    }

    #[test]
    fn norm_round_trips_through_strings() {
        for n in [Norm::L1, Norm::L2, Norm::Linf, Norm::Lp(3.5)] {
            assert_eq!(n.to_string().parse::<Norm>().unwrap(), n);
        }
        assert!("lp:0.5".parse::<Norm>().is_err());
        assert!("cosine".parse::<Norm>().is_err());
    }
}
