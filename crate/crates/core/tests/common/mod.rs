#![allow(dead_code)]

use findim::{FiniteMetric, Norm, PointCloud};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const NORMS: [Norm; 3] = [Norm::L1, Norm::L2, Norm::Linf];

/// Distinct random points; integer coordinates in `0..=3` when `grid`, to force ties.
pub fn random_cloud(rng: &mut ChaCha8Rng, n: usize, dim: usize, norm: Norm, grid: bool) -> PointCloud {
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(n);
    while pts.len() < n {
        let p: Vec<f64> =
            (0..dim).map(|_| if grid { rng.gen_range(0..=3) as f64 } else { rng.gen_range(0.0..10.0) }).collect();
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    PointCloud::new(pts, norm)
}

pub fn random_space(rng: &mut ChaCha8Rng, sizes: std::ops::RangeInclusive<usize>) -> FiniteMetric {
    let n = rng.gen_range(sizes);
    let dim = rng.gen_range(1..=3);
    let norm = *NORMS.choose(rng).unwrap();
    let grid = rng.gen_bool(0.4) && 4usize.pow(dim as u32) >= n;
    FiniteMetric::from_points(&random_cloud(rng, n, dim, norm, grid), None).unwrap()
}

fn diameter_of(m: &FiniteMetric, mask: u32) -> f64 {
    let idx: Vec<usize> = (0..m.len()).filter(|&i| mask >> i & 1 == 1).collect();
    let mut d = 0.0f64;
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[a + 1..] {
            d = d.max(m.d(i, j));
        }
    }
    d
}

pub struct Facts {
    pub diameter: f64,
    pub separation: f64,
    pub nabla: f64,
    pub focal: bool,
    pub tol: f64,
}

pub fn facts(m: &FiniteMetric) -> Facts {
    let n = m.len();
    let nu: Vec<f64> =
        (0..n).map(|i| (0..n).filter(|&j| j != i).map(|j| m.d(i, j)).fold(f64::INFINITY, f64::min)).collect();
    let diameter = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| m.d(i, j)).fold(0.0, f64::max);
    let tol = m.tolerance();
    let nabla = nu.iter().copied().fold(0.0, f64::max);
    Facts {
        diameter,
        separation: nu.iter().copied().fold(f64::INFINITY, f64::min),
        nabla,
        focal: nu.iter().any(|&v| v >= diameter - tol),
        tol,
    }
}

/// Exact set-cover dynamic program over subsets of `F`, independent of the library solver.
pub struct DpOracle {
    n: usize,
    sets: Vec<(u32, f64)>,
}

impl DpOracle {
    /// Every subset with two or more points and diameter at most `level`,
    /// excluding full-diameter sets unless `F` has focal points.
    pub fn new(m: &FiniteMetric, level: f64) -> Self {
        let n = m.len();
        assert!(n <= 16);
        let f = facts(m);
        let sets = (1u32..1 << n)
            .filter(|s| s.count_ones() >= 2)
            .map(|s| (s, diameter_of(m, s)))
            .filter(|&(_, d)| d <= level + f.tol && (f.focal || d < f.diameter - f.tol))
            .collect();
        DpOracle { n, sets }
    }

    pub fn minimize(&self, weight: impl Fn(f64) -> f64) -> f64 {
        let full = (1u32 << self.n) - 1;
        let mut best = vec![f64::INFINITY; 1 << self.n];
        best[full as usize] = 0.0;
        for covered in (0..full).rev() {
            let low = (!covered).trailing_zeros();
            let mut b = f64::INFINITY;
            for &(s, d) in &self.sets {
                if s >> low & 1 == 1 {
                    b = b.min(weight(d) + best[(covered | s) as usize]);
                }
            }
            best[covered as usize] = b;
        }
        best[0]
    }

    pub fn count(&self) -> usize {
        self.minimize(|_| 1.0) as usize
    }

    pub fn weighted(&self, s: f64) -> f64 {
        self.minimize(|d| d.powf(s))
    }
}

/// Root of `min Σ (d_i/Δ)^s = 1` by plain bisection on the DP oracle.
pub fn oracle_dimension(m: &FiniteMetric) -> Option<f64> {
    let f = facts(m);
    if f.focal {
        return None;
    }
    let dp = DpOracle::new(m, f.nabla);
    let h = |s: f64| dp.minimize(|d| (d / f.diameter).powf(s));
    let (mut lo, mut hi) = (0.0, 1.0);
    while h(hi) > 1.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    Some(0.5 * (lo + hi))
}

pub fn line(xs: &[f64]) -> FiniteMetric {
    FiniteMetric::from_points(&PointCloud::new(xs.iter().map(|&x| vec![x]).collect(), Norm::L2), None).unwrap()
}
