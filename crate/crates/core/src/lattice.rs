//! Point sets on integer lattices with exact squared distances.
//!
//! A point is an integer vector `v`; the squared distance between two points is
//! `unit² · (v−w)ᵀ G (v−w) / den` for an integer Gram matrix `G`. Equal
//! distances therefore compare equal exactly, which keeps `δ = ∇` bit-stable
//! for the fractal families and lattice approximations.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::cover::{min_cover_count, Mask};
use crate::error::{Error, Result};
use crate::matching::min_edge_cover;
use crate::metric::{FiniteMetric, Norm, PointCloud};

/// Where an exact `T_∇` value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TSource {
    BranchAndBound,
    Matching,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountResult {
    pub count: u64,
    pub source: TSource,
}

/// `δ`, `∇`, `Δ` as exact quadratic-form values plus their real distances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeSummary {
    pub size: usize,
    pub separation: f64,
    pub covering_diameter: f64,
    pub diameter: f64,
    pub separation_form: i64,
    pub covering_form: i64,
    pub diameter_form: i64,
}

impl LatticeSummary {
    pub fn locally_uniform(&self) -> bool {
        self.separation_form == self.covering_form
    }

    pub fn has_focal_points(&self) -> bool {
        self.covering_form >= self.diameter_form
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeSet {
    dim: usize,
    coords: Vec<i64>,
    gram: Vec<i64>,
    gram_den: i64,
    basis: Vec<Vec<f64>>,
    unit: f64,
}

impl LatticeSet {
    /// Builds a set from lattice points; duplicates are merged and points sorted.
    pub fn new(points: Vec<Vec<i64>>, gram: Vec<i64>, gram_den: i64, basis: Vec<Vec<f64>>, unit: f64) -> Result<Self> {
        let dim = basis.len();
        if gram.len() != dim * dim || gram_den <= 0 || unit.is_nan() || unit <= 0.0 {
            return Err(Error::BadParameter("inconsistent lattice description".into()));
        }
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::MalformedInput(format!("lattice points must have {dim} coordinates")));
        }
        let mut points = points;
        points.sort_unstable();
        points.dedup();
        Ok(LatticeSet { dim, coords: points.concat(), gram, gram_den, basis, unit })
    }

    /// `unit · Z^dim` with the standard Euclidean form.
    pub fn cubic(dim: usize, unit: f64, points: Vec<Vec<i64>>) -> Result<Self> {
        let mut gram = vec![0; dim * dim];
        let mut basis = vec![vec![0.0; dim]; dim];
        for k in 0..dim {
            gram[k * dim + k] = 1;
            basis[k][k] = 1.0;
        }
        Self::new(points, gram, 1, basis, unit)
    }

    /// Plane lattice spanned by `(1,0)` and `(1/2, √3/2)`.
    pub fn triangular(unit: f64, points: Vec<Vec<i64>>) -> Result<Self> {
        let h = 3f64.sqrt() / 2.0;
        Self::new(points, vec![2, 1, 1, 2], 2, vec![vec![1.0, 0.0], vec![0.5, h]], unit)
    }

    /// Space lattice spanned by three unit vectors at pairwise 60°.
    pub fn tetrahedral(unit: f64, points: Vec<Vec<i64>>) -> Result<Self> {
        let basis = vec![
            vec![1.0, 0.0, 0.0],
            vec![0.5, 3f64.sqrt() / 2.0, 0.0],
            vec![0.5, 3f64.sqrt() / 6.0, (2.0f64 / 3.0).sqrt()],
        ];
        Self::new(points, vec![2, 1, 1, 1, 2, 1, 1, 1, 2], 2, basis, unit)
    }

    pub fn len(&self) -> usize {
        self.coords.len().checked_div(self.dim).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> f64 {
        self.unit
    }

    pub fn point(&self, i: usize) -> &[i64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[i64]> {
        self.coords.chunks(self.dim)
    }

    /// `(v_i − v_j)ᵀ G (v_i − v_j)`, the squared distance in units of `unit²/den`.
    pub fn form(&self, i: usize, j: usize) -> i64 {
        self.form_of(self.point(i), self.point(j))
    }

    fn form_of(&self, a: &[i64], b: &[i64]) -> i64 {
        let d = self.dim;
        let mut acc = 0i64;
        for k in 0..d {
            let dk = a[k] - b[k];
            if dk == 0 {
                continue;
            }
            for l in 0..d {
                acc += dk * self.gram[k * d + l] * (a[l] - b[l]);
            }
        }
        acc
    }

    pub fn distance_of_form(&self, form: i64) -> f64 {
        self.unit * (form as f64 / self.gram_den as f64).sqrt()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.distance_of_form(self.form(i, j))
    }

    fn embed(&self, p: &[i64]) -> Vec<f64> {
        let ambient = self.basis.first().map_or(0, Vec::len);
        let mut x = vec![0.0; ambient];
        for (k, &c) in p.iter().enumerate() {
            for (xa, ba) in x.iter_mut().zip(&self.basis[k]) {
                *xa += c as f64 * ba;
            }
        }
        x.iter_mut().for_each(|v| *v *= self.unit);
        x
    }

    pub fn to_cloud(&self) -> PointCloud {
        PointCloud::new(self.points().map(|p| self.embed(p)).collect(), Norm::L2)
    }

    /// Distance matrix computed from the exact forms.
    pub fn to_metric(&self) -> FiniteMetric {
        FiniteMetric::from_fn(self.len(), None, |i, j| self.distance(i, j))
    }

    fn grid(&self) -> SpatialGrid {
        let pts: Vec<Vec<f64>> = self.points().map(|p| self.embed(p)).collect();
        let step = self.basis.iter().map(|b| b.iter().map(|x| x * x).sum::<f64>().sqrt()).fold(f64::INFINITY, f64::min)
            * self.unit;
        SpatialGrid::new(pts, step)
    }

    /// `ν²` of every point as a form value.
    pub fn nearest_forms(&self) -> Result<Vec<i64>> {
        if self.len() < 2 {
            return Err(if self.is_empty() { Error::EmptySpace } else { Error::SingletonSpace });
        }
        let grid = self.grid();
        Ok((0..self.len()).map(|i| grid.nearest(i, |j| self.form(i, j), |f| self.distance_of_form(f))).collect())
    }

    /// Neighbors of every point with form at most `cut`.
    pub fn neighbors_within(&self, cut: i64) -> Vec<Vec<u32>> {
        let grid = self.grid();
        let reach = self.distance_of_form(cut);
        (0..self.len())
            .map(|i| {
                let mut out = Vec::new();
                grid.within(i, reach, |j| {
                    if self.form(i, j) <= cut {
                        out.push(j as u32);
                    }
                });
                out.sort_unstable();
                out
            })
            .collect()
    }

    pub fn diameter_form(&self) -> i64 {
        let n = self.len();
        let candidates: Vec<usize> = match self.dim {
            1 => {
                let (lo, hi) = (0..n).fold((0, 0), |(lo, hi), i| {
                    (
                        if self.point(i)[0] < self.point(lo)[0] { i } else { lo },
                        if self.point(i)[0] > self.point(hi)[0] { i } else { hi },
                    )
                });
                vec![lo, hi]
            }
            // Hull in lattice coordinates; the embedding is linear, so it is the true hull.
            2 => convex_hull(&(0..n).map(|i| [self.point(i)[0], self.point(i)[1]]).collect::<Vec<_>>()),
            _ => (0..n).collect(),
        };
        let mut best = 0;
        for (a, &i) in candidates.iter().enumerate() {
            for &j in &candidates[a + 1..] {
                best = best.max(self.form(i, j));
            }
        }
        best
    }

    pub fn summary(&self) -> Result<LatticeSummary> {
        let nu = self.nearest_forms()?;
        let sep = *nu.iter().min().unwrap();
        let cov = *nu.iter().max().unwrap();
        let diam = self.diameter_form();
        Ok(LatticeSummary {
            size: self.len(),
            separation: self.distance_of_form(sep),
            covering_diameter: self.distance_of_form(cov),
            diameter: self.distance_of_form(diam),
            separation_form: sep,
            covering_form: cov,
            diameter_form: diam,
        })
    }

    /// `T_∇` by branch-and-bound when `|F| ≤ max_exact`, otherwise by matching
    /// when the threshold graph at `∇` is bipartite.
    pub fn exact_cover_count(&self, max_exact: usize) -> Result<CountResult> {
        let summary = self.summary()?;
        if summary.has_focal_points() {
            return Err(Error::InfiniteDimension);
        }
        if self.len() <= max_exact.min(Mask::BITS) {
            let m = self.to_metric();
            let sol = min_cover_count(&m, summary.covering_diameter)?;
            return Ok(CountResult { count: sol.count as u64, source: TSource::BranchAndBound });
        }
        let adj = self.neighbors_within(summary.covering_form);
        let too_big = Error::ExactLimitExceeded { size: self.len(), limit: max_exact.min(Mask::BITS) };
        if has_triangle(&adj) {
            return Err(too_big);
        }
        match min_edge_cover(&adj) {
            Ok(cover) => Ok(CountResult { count: cover.len() as u64, source: TSource::Matching }),
            Err(_) => Err(too_big),
        }
    }
}

fn has_triangle(adj: &[Vec<u32>]) -> bool {
    adj.iter().enumerate().any(|(u, nu)| {
        nu.iter().any(|&v| {
            let nv = &adj[v as usize];
            (v as usize) > u && nu.iter().any(|w| *w != v && nv.binary_search(w).is_ok())
        })
    })
}

fn cross(o: [i64; 2], a: [i64; 2], b: [i64; 2]) -> i128 {
    (a[0] - o[0]) as i128 * (b[1] - o[1]) as i128 - (a[1] - o[1]) as i128 * (b[0] - o[0]) as i128
}

/// Indices of the convex hull vertices (Andrew's monotone chain).
fn convex_hull(pts: &[[i64; 2]]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by_key(|&i| pts[i]);
    if idx.len() <= 2 {
        return idx;
    }
    let mut hull: Vec<usize> = Vec::with_capacity(2 * idx.len());
    for pass in 0..2 {
        let start = hull.len();
        let order: Box<dyn Iterator<Item = &usize>> =
            if pass == 0 { Box::new(idx.iter()) } else { Box::new(idx.iter().rev()) };
        for &i in order {
            while hull.len() >= start + 2 && cross(pts[hull[hull.len() - 2]], pts[hull[hull.len() - 1]], pts[i]) <= 0 {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    hull.sort_unstable();
    hull.dedup();
    hull
}

/// Uniform bucket grid over embedded points.
struct SpatialGrid {
    pts: Vec<Vec<f64>>,
    step: f64,
    cells: HashMap<[i64; 3], Vec<u32>>,
}

impl SpatialGrid {
    const MAX_SHELL: i64 = 48;

    fn new(pts: Vec<Vec<f64>>, step: f64) -> Self {
        let mut cells: HashMap<[i64; 3], Vec<u32>> = HashMap::new();
        let mut grid = SpatialGrid { pts, step, cells: HashMap::new() };
        for i in 0..grid.pts.len() {
            cells.entry(grid.key(i)).or_default().push(i as u32);
        }
        grid.cells = cells;
        grid
    }

    fn key(&self, i: usize) -> [i64; 3] {
        let mut k = [0i64; 3];
        for (a, x) in self.pts[i].iter().enumerate().take(3) {
            k[a] = (x / self.step).floor() as i64;
        }
        k
    }

    fn dims(&self) -> usize {
        self.pts.first().map_or(0, |p| p.len().min(3))
    }

    fn shell(&self, center: [i64; 3], r: i64, mut f: impl FnMut(u32)) {
        let d = self.dims();
        let span = |a: usize| if a < d { -r..=r } else { 0..=0 };
        for dx in span(0) {
            for dy in span(1) {
                for dz in span(2) {
                    if dx.abs().max(dy.abs()).max(dz.abs()) != r {
                        continue;
                    }
                    if let Some(list) = self.cells.get(&[center[0] + dx, center[1] + dy, center[2] + dz]) {
                        list.iter().for_each(|&j| f(j));
                    }
                }
            }
        }
    }

    /// Smallest `form(i, j)` over `j ≠ i`, scanning shells until no unvisited
    /// point can be closer.
    fn nearest(&self, i: usize, form: impl Fn(usize) -> i64, dist: impl Fn(i64) -> f64) -> i64 {
        let center = self.key(i);
        let mut best = i64::MAX;
        for r in 0..=Self::MAX_SHELL {
            self.shell(center, r, |j| {
                if j as usize != i {
                    best = best.min(form(j as usize));
                }
            });
            if best < i64::MAX && dist(best) <= r as f64 * self.step * (1.0 - 1e-12) {
                return best;
            }
        }
        (0..self.pts.len()).filter(|&j| j != i).map(form).min().unwrap_or(i64::MAX)
    }

    fn within(&self, i: usize, reach: f64, mut f: impl FnMut(usize)) {
        let center = self.key(i);
        let r_max = (reach / self.step).ceil() as i64 + 1;
        for r in 0..=r_max {
            self.shell(center, r, |j| {
                if j as usize != i {
                    f(j as usize);
                }
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::summarize;

    #[test]
    fn cubic_grid_summary() {
        let pts: Vec<Vec<i64>> = (0..3).flat_map(|i| (0..3).map(move |j| vec![i, j])).collect();
        let set = LatticeSet::cubic(2, 0.5, pts).unwrap();
        let s = set.summary().unwrap();
        assert_eq!((s.separation_form, s.covering_form, s.diameter_form), (1, 1, 8));
        assert_eq!(s.separation, 0.5);
        assert!((s.diameter - 2f64.sqrt()).abs() < 1e-15);
        assert!(s.locally_uniform() && !s.has_focal_points());
        let m = summarize(&set.to_metric()).unwrap();
        assert_eq!(m.separation, m.covering_diameter);
    }

    #[test]
    fn triangular_distances() {
        let set = LatticeSet::triangular(1.0, vec![vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(set.form(0, 1), 2);
        assert_eq!(set.form(1, 2), 2);
        assert_eq!(set.distance(0, 2), 1.0);
        let cloud = set.to_cloud();
        let d = Norm::L2.distance(&cloud.points[1], &cloud.points[2]);
        assert!((d - 1.0).abs() < 1e-15);
        assert!(set.summary().unwrap().has_focal_points());
    }

    #[test]
    fn hull_diameter_matches_brute_force() {
        let pts: Vec<Vec<i64>> = (0..40).map(|i| vec![(i * 7919) % 23, (i * 104729) % 31]).collect();
        let set = LatticeSet::cubic(2, 1.0, pts).unwrap();
        let brute = (0..set.len())
            .flat_map(|i| (0..set.len()).map(move |j| (i, j)))
            .map(|(i, j)| set.form(i, j))
            .max()
            .unwrap();
        assert_eq!(set.diameter_form(), brute);
    }

    #[test]
    fn nearest_forms_match_brute_force() {
        let pts: Vec<Vec<i64>> = vec![vec![0], vec![2], vec![9], vec![200], vec![203]];
        let set = LatticeSet::cubic(1, 1.0, pts).unwrap();
        assert_eq!(set.nearest_forms().unwrap(), vec![4, 4, 49, 9, 9]);
    }

    #[test]
    fn matching_route_agrees_with_branch_and_bound() {
        let pts: Vec<Vec<i64>> = (0..5).flat_map(|i| (0..3).map(move |j| vec![i, j])).collect();
        let set = LatticeSet::cubic(2, 1.0, pts).unwrap();
        let bb = set.exact_cover_count(128).unwrap();
        let mm = set.exact_cover_count(4).unwrap();
        assert_eq!(bb.source, TSource::BranchAndBound);
        assert_eq!(mm.source, TSource::Matching);
        assert_eq!(bb.count, mm.count);
        assert_eq!(bb.count, 8);
    }
}
