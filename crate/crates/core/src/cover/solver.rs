use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::candidates::{check_level, pool};
use super::{CoverSet, Mask, ThresholdGraph, TwoCover};
use crate::error::{Error, Result};
use crate::metric::FiniteMetric;

/// Default cap on `|F|` for the exact solver.
pub const DEFAULT_MAX_EXACT: usize = Mask::BITS;

const MEMO_CAP: usize = 1 << 21;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveStats {
    pub nodes: u64,
    pub candidates: usize,
    pub components: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountSolution {
    pub count: usize,
    pub witness: TwoCover,
    pub stats: SolveStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedSolution {
    pub value: f64,
    pub witness: TwoCover,
    pub stats: SolveStats,
}

/// `T_δ(F)` with a witness cover.
pub fn min_cover_count(m: &FiniteMetric, delta: f64) -> Result<CountSolution> {
    CoverProblem::new(m, delta)?.solve_count()
}

/// `H^s_δ(F)` with a witness cover.
pub fn min_weighted_cover(m: &FiniteMetric, delta: f64, s: f64) -> Result<WeightedSolution> {
    CoverProblem::new(m, delta)?.solve_weighted(s)
}

#[derive(Debug, Clone)]
struct Component {
    sets: Vec<Mask>,
    weights_base: Vec<f64>,
    by_point: Vec<Vec<u32>>,
    universe: Mask,
}

/// A prepared covering problem at a fixed level, reusable across exponents.
#[derive(Debug, Clone)]
pub struct CoverProblem<'a> {
    metric: &'a FiniteMetric,
    level: f64,
    diameter: f64,
    focal: bool,
    components: Vec<Component>,
    candidates: usize,
}

impl<'a> CoverProblem<'a> {
    pub fn new(m: &'a FiniteMetric, delta: f64) -> Result<Self> {
        Self::with_limit(m, delta, DEFAULT_MAX_EXACT)
    }

    /// Like [`CoverProblem::new`] but rejecting spaces with more than `max_exact` points.
    pub fn with_limit(m: &'a FiniteMetric, delta: f64, max_exact: usize) -> Result<Self> {
        let limit = max_exact.min(Mask::BITS);
        if m.len() > limit {
            return Err(Error::ExactLimitExceeded { size: m.len(), limit });
        }
        let nabla = check_level(m, delta)?;
        let diameter = m.diameter();
        let tol = m.tolerance();
        let focal = nabla >= diameter - tol;
        let mut problem =
            CoverProblem { metric: m, level: delta, diameter, focal, components: Vec::new(), candidates: 0 };
        if focal {
            return Ok(problem);
        }
        // K1 excludes full-diameter sets, so cap the level just below Δ.
        let below = (0..m.len())
            .flat_map(|i| (i + 1..m.len()).map(move |j| (i, j)))
            .map(|(i, j)| m.d(i, j))
            .filter(|&d| d < diameter - tol)
            .fold(0.0, f64::max);
        let level = delta.min(below);
        let sets = pool(m, level);
        problem.candidates = sets.len();
        let graph = ThresholdGraph::new(m, level)?;
        problem.components = graph
            .components()
            .into_iter()
            .map(|universe| {
                let mut comp = Component {
                    sets: Vec::new(),
                    weights_base: Vec::new(),
                    by_point: vec![Vec::new(); m.len()],
                    universe,
                };
                for &(mask, d) in sets.iter().filter(|(mask, _)| mask.is_subset(universe)) {
                    let idx = comp.sets.len() as u32;
                    for p in mask.iter() {
                        comp.by_point[p].push(idx);
                    }
                    comp.sets.push(mask);
                    comp.weights_base.push(d / diameter);
                }
                comp
            })
            .collect();
        Ok(problem)
    }

    pub fn level(&self) -> f64 {
        self.level
    }

    pub fn is_focal(&self) -> bool {
        self.focal
    }

    pub fn candidate_count(&self) -> usize {
        self.candidates
    }

    /// Exact minimum cardinality over `K1_δ`.
    pub fn solve_count(&self) -> Result<CountSolution> {
        if self.focal {
            return Err(Error::InfiniteDimension);
        }
        let (cost, chosen, stats) = self.run(None);
        Ok(CountSolution { count: cost.round() as usize, witness: self.witness(chosen)?, stats })
    }

    /// Exact minimum of `Σ Δ(U_i)^s` over `K1_δ`, or `Δ(F)^s` when `K1` is empty.
    pub fn solve_weighted(&self, s: f64) -> Result<WeightedSolution> {
        if !(s >= 0.0 && s.is_finite()) {
            return Err(Error::BadParameter(format!("exponent {s} must be finite and nonnegative")));
        }
        if self.focal {
            let all = CoverSet::from_mask(self.metric, Mask::full(self.metric.len()));
            return Ok(WeightedSolution {
                value: self.diameter.powf(s),
                witness: TwoCover::new(self.metric, vec![all])?,
                stats: SolveStats::default(),
            });
        }
        let (cost, chosen, stats) = self.run(Some(s));
        Ok(WeightedSolution { value: cost * self.diameter.powf(s), witness: self.witness(chosen)?, stats })
    }

    fn run(&self, s: Option<f64>) -> (f64, Vec<Mask>, SolveStats) {
        let solve = |c: &Component| {
            let weights: Vec<f64> = match s {
                None => vec![1.0; c.sets.len()],
                Some(s) => c.weights_base.iter().map(|b| b.powf(s)).collect(),
            };
            Search::new(c, weights, s.is_none()).run()
        };
        #[cfg(feature = "parallel")]
        let results: Vec<(f64, Vec<Mask>, u64)> = {
            use rayon::prelude::*;
            self.components.par_iter().map(solve).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let results: Vec<(f64, Vec<Mask>, u64)> = self.components.iter().map(solve).collect();

        let mut stats = SolveStats { nodes: 0, candidates: self.candidates, components: self.components.len() };
        let mut total = 0.0;
        let mut chosen = Vec::new();
        for (cost, sets, nodes) in results {
            total += cost;
            chosen.extend(sets);
            stats.nodes += nodes;
        }
        (total, chosen, stats)
    }

    fn witness(&self, mut chosen: Vec<Mask>) -> Result<TwoCover> {
        chosen.sort_by_key(|m| (m.lowest(), m.0));
        let sets = chosen.into_iter().map(|mask| CoverSet::from_mask(self.metric, mask)).collect();
        TwoCover::new(self.metric, sets)
    }
}

struct Search<'c> {
    comp: &'c Component,
    weights: Vec<f64>,
    unit: bool,
    best: f64,
    best_sol: Vec<u32>,
    stack: Vec<u32>,
    nodes: u64,
    memo: HashMap<u128, f64>,
}

impl<'c> Search<'c> {
    fn new(comp: &'c Component, weights: Vec<f64>, unit: bool) -> Self {
        Search {
            comp,
            weights,
            unit,
            best: f64::INFINITY,
            best_sol: Vec::new(),
            stack: Vec::new(),
            nodes: 0,
            memo: HashMap::new(),
        }
    }

    fn run(mut self) -> (f64, Vec<Mask>, u64) {
        let (cost, sol) = self.greedy();
        self.best = cost;
        self.best_sol = sol;
        self.dfs(self.comp.universe, 0.0);
        let sets = self.best_sol.iter().map(|&i| self.comp.sets[i as usize]).collect();
        (self.best, sets, self.nodes)
    }

    fn eps(&self) -> f64 {
        if self.unit {
            0.5
        } else {
            1e-12 * self.best.max(1e-300)
        }
    }

    fn greedy(&self) -> (f64, Vec<u32>) {
        let mut uncovered = self.comp.universe;
        let mut chosen: Vec<u32> = Vec::new();
        while !uncovered.is_empty() {
            let pick = (0..self.comp.sets.len())
                .filter(|&i| self.comp.sets[i].intersects(uncovered))
                .max_by(|&a, &b| {
                    let ra = (self.comp.sets[a] & uncovered).count() as f64 / self.weights[a];
                    let rb = (self.comp.sets[b] & uncovered).count() as f64 / self.weights[b];
                    ra.total_cmp(&rb).then(b.cmp(&a))
                })
                .expect("component is coverable");
            uncovered = uncovered - self.comp.sets[pick];
            chosen.push(pick as u32);
        }
        // Drop redundant sets, heaviest first.
        let mut order: Vec<usize> = (0..chosen.len()).collect();
        order.sort_by(|&a, &b| self.weights[chosen[b] as usize].total_cmp(&self.weights[chosen[a] as usize]));
        let mut keep = vec![true; chosen.len()];
        for k in order {
            let others = chosen
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k && keep[j])
                .fold(Mask::EMPTY, |acc, (_, &i)| acc | self.comp.sets[i as usize]);
            if self.comp.universe.is_subset(others) {
                keep[k] = false;
            }
        }
        let chosen: Vec<u32> = chosen.into_iter().zip(keep).filter(|&(_, k)| k).map(|(i, _)| i).collect();
        let cost = chosen.iter().map(|&i| self.weights[i as usize]).sum();
        (cost, chosen)
    }

    fn lower_bound(&self, uncovered: Mask) -> f64 {
        let mut lb = 0.0;
        for q in uncovered.iter() {
            let mut best = f64::INFINITY;
            for &i in &self.comp.by_point[q] {
                let i = i as usize;
                let r = self.weights[i] / (self.comp.sets[i] & uncovered).count() as f64;
                if r < best {
                    best = r;
                }
            }
            lb += best;
        }
        if self.unit {
            (lb - 1e-9).ceil()
        } else {
            lb
        }
    }

    fn dfs(&mut self, uncovered: Mask, cost: f64) {
        self.nodes += 1;
        let Some(p) = uncovered.lowest() else {
            if cost < self.best - self.eps() {
                self.best = cost;
                self.best_sol = self.stack.clone();
            }
            return;
        };
        if cost + self.lower_bound(uncovered) >= self.best - self.eps() {
            return;
        }
        match self.memo.get(&uncovered.0) {
            Some(&seen) if seen <= cost + self.eps().min(1e-12) => return,
            _ => {
                if self.memo.len() < MEMO_CAP || self.memo.contains_key(&uncovered.0) {
                    self.memo.insert(uncovered.0, cost);
                }
            }
        }

        let options: Vec<(u32, Mask)> =
            self.comp.by_point[p].iter().map(|&i| (i, self.comp.sets[i as usize] & uncovered)).collect();
        for (k, &(i, eff)) in options.iter().enumerate() {
            let wi = self.weights[i as usize];
            let dominated = options.iter().enumerate().any(|(j, &(o, other))| {
                if j == k || !eff.is_subset(other) {
                    return false;
                }
                let wo = self.weights[o as usize];
                wo < wi || (wo == wi && (eff != other || j < k))
            });
            if dominated {
                continue;
            }
            self.stack.push(i);
            self.dfs(uncovered - eff, cost + wi);
            self.stack.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::tests::line;
    use crate::cover::CoverClass;
    use crate::metric::{Norm, PointCloud};

    #[test]
    fn linear_counts() {
        let l4 = line(&[0.0, 1.0, 2.0, 3.0]);
        let sol = min_cover_count(&l4, 1.0).unwrap();
        assert_eq!(sol.count, 2);
        let members: Vec<_> = sol.witness.sets.iter().map(|s| s.members.clone()).collect();
        assert_eq!(members, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(sol.witness.class, CoverClass::K1);
        assert_eq!(min_cover_count(&line(&[0.0, 1.0, 2.0, 3.0, 4.0]), 1.0).unwrap().count, 3);
        assert!((min_weighted_cover(&l4, 1.0, 1.0).unwrap().value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn cantor_level_two() {
        let m = line(&[0.0, 2.0 / 9.0, 2.0 / 3.0, 8.0 / 9.0]);
        assert_eq!(min_cover_count(&m, 2.0 / 9.0).unwrap().count, 2);
        let w = min_weighted_cover(&m, 2.0 / 9.0, 0.5).unwrap().value;
        assert!((w - 2.0 * (2.0f64 / 9.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn right_triangle_weighted() {
        let cloud = PointCloud::new(vec![vec![0.0, 0.0], vec![0.0, 3.0], vec![4.0, 0.0]], Norm::L2);
        let m = FiniteMetric::from_points(&cloud, None).unwrap();
        let sol = min_weighted_cover(&m, 4.0, 2.0).unwrap();
        assert!((sol.value - 25.0).abs() < 1e-9);
        assert_eq!(sol.witness.len(), 2);
    }

    #[test]
    fn focal_spaces() {
        let m = line(&[0.0, 7.0]);
        assert_eq!(min_cover_count(&m, 7.0).unwrap_err(), Error::InfiniteDimension);
        let w = min_weighted_cover(&m, 7.0, 1.0).unwrap();
        assert_eq!(w.value, 7.0);
        assert_eq!(w.witness.class, CoverClass::K0);
    }

    #[test]
    fn level_above_diameter_stays_in_k1() {
        let m = line(&[0.0, 1.0, 2.0, 3.0]);
        let sol = min_cover_count(&m, 10.0).unwrap();
        assert_eq!(sol.count, 2);
        assert_eq!(sol.witness.class, CoverClass::K1);
    }

    #[test]
    fn components_are_solved_separately() {
        let m = line(&[0.0, 1.0, 2.0, 10.0, 11.0, 12.0, 13.0]);
        let sol = min_cover_count(&m, 1.0).unwrap();
        assert_eq!(sol.count, 4);
        assert_eq!(sol.stats.components, 2);
    }

    #[test]
    fn limit_is_enforced() {
        let m = line(&[0.0, 1.0, 2.0, 3.0]);
        let err = CoverProblem::with_limit(&m, 1.0, 3).unwrap_err();
        assert_eq!(err, Error::ExactLimitExceeded { size: 4, limit: 3 });
    }
}
