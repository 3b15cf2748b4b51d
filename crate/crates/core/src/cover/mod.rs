//! 2-coverings of finite metric spaces and exact minimum-cover solvers.
//!
//! A subset of `F` has diameter at most `δ` exactly when it is a clique of
//! the threshold graph at level `δ`, so every covering problem here is a
//! set-cover problem over cliques of that graph.

mod candidates;
mod mask;
mod oracle;
mod solver;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::FiniteMetric;

pub use candidates::candidates;
pub use mask::Mask;
pub use oracle::{brute_force_oracle, irredundant_covers, ORACLE_LIMIT};
pub use solver::{
    min_cover_count, min_weighted_cover, CountSolution, CoverProblem, SolveStats, WeightedSolution, DEFAULT_MAX_EXACT,
};

/// Which part of the decomposition `K = K0 ∪ K1 ∪ K2` a cover lies in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoverClass {
    /// The trivial cover `{F}`.
    K0,
    /// At least two sets, all of diameter below `Δ(F)`.
    K1,
    /// At least two sets, one of them of full diameter.
    K2,
}

/// One member of a 2-covering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverSet {
    pub members: Vec<usize>,
    pub diameter: f64,
}

impl CoverSet {
    pub fn new(m: &FiniteMetric, mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        let diameter = m.subset_diameter(&members);
        CoverSet { members, diameter }
    }

    pub(crate) fn from_mask(m: &FiniteMetric, mask: Mask) -> Self {
        CoverSet::new(m, mask.iter().collect())
    }

    pub fn mask(&self) -> Mask {
        Mask::from_indices(self.members.iter().copied())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoCover {
    pub sets: Vec<CoverSet>,
    pub class: CoverClass,
}

impl TwoCover {
    /// Validates `sets` as a 2-covering of `m` and classifies it.
    pub fn new(m: &FiniteMetric, sets: Vec<CoverSet>) -> Result<Self> {
        let class = classify_sets(&sets, m)?;
        Ok(TwoCover { sets, class })
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// `Δ(U)`: the largest set diameter.
    pub fn diameter(&self) -> f64 {
        self.sets.iter().map(|s| s.diameter).fold(0.0, f64::max)
    }

    /// `H^s_U`: the sum of the set diameters raised to `s`.
    pub fn weight(&self, s: f64) -> f64 {
        self.sets.iter().map(|u| u.diameter.powf(s)).sum()
    }

    pub fn profile(&self, tolerance: f64) -> CoverProfile {
        CoverProfile::from_diameters(self.sets.iter().map(|s| s.diameter), tolerance)
    }

    /// Whether some set's members are all covered by the other sets.
    pub fn is_redundant(&self) -> bool {
        (0..self.sets.len()).any(|i| {
            let others =
                self.sets.iter().enumerate().filter(|&(j, _)| j != i).fold(Mask::EMPTY, |acc, (_, s)| acc | s.mask());
            self.sets[i].mask().is_subset(others)
        })
    }
}

/// Distinct diameters `a_1 < … < a_k` of a cover with their multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverProfile {
    pub diameters: Vec<f64>,
    pub multiplicities: Vec<usize>,
}

impl CoverProfile {
    pub fn from_diameters(diameters: impl IntoIterator<Item = f64>, tolerance: f64) -> Self {
        let mut ds: Vec<f64> = diameters.into_iter().collect();
        ds.sort_by(f64::total_cmp);
        let mut profile = CoverProfile { diameters: Vec::new(), multiplicities: Vec::new() };
        for d in ds {
            match profile.diameters.last_mut() {
                Some(last) if d - *last <= tolerance => {
                    *last = d;
                    *profile.multiplicities.last_mut().unwrap() += 1;
                }
                _ => {
                    profile.diameters.push(d);
                    profile.multiplicities.push(1);
                }
            }
        }
        profile
    }

    pub fn cover_size(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// `m_1 a_1^s + … + m_k a_k^s`.
    pub fn evaluate(&self, s: f64) -> f64 {
        self.diameters.iter().zip(&self.multiplicities).map(|(a, &m)| m as f64 * a.powf(s)).sum()
    }
}

/// Threshold graph at level `δ`: `i ~ j` iff `d(i,j) ≤ δ + τ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdGraph {
    pub level: f64,
    adjacency: Vec<Mask>,
}

impl ThresholdGraph {
    pub fn new(m: &FiniteMetric, level: f64) -> Result<Self> {
        if m.len() > Mask::BITS {
            return Err(Error::ExactLimitExceeded { size: m.len(), limit: Mask::BITS });
        }
        let cut = level + m.tolerance();
        let adjacency =
            (0..m.len()).map(|i| Mask::from_indices((0..m.len()).filter(|&j| j != i && m.d(i, j) <= cut))).collect();
        Ok(ThresholdGraph { level, adjacency })
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn neighbors(&self, i: usize) -> Mask {
        self.adjacency[i]
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].contains(j)
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].count()
    }

    pub fn is_clique(&self, set: Mask) -> bool {
        set.iter().all(|i| (set - Mask::single(i)).is_subset(self.adjacency[i]))
    }

    /// Connected components, each listed in increasing index order.
    pub fn components(&self) -> Vec<Mask> {
        let mut seen = Mask::EMPTY;
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen.contains(start) {
                continue;
            }
            let mut comp = Mask::single(start);
            let mut frontier = comp;
            while let Some(v) = frontier.lowest() {
                frontier = frontier - Mask::single(v);
                let fresh = self.adjacency[v] - comp;
                comp = comp | fresh;
                frontier = frontier | fresh;
            }
            seen = seen | comp;
            out.push(comp);
        }
        out
    }
}

fn classify_sets(sets: &[CoverSet], m: &FiniteMetric) -> Result<CoverClass> {
    let n = m.len();
    if sets.is_empty() {
        return Err(Error::MalformedCover("cover has no sets".into()));
    }
    let mut union = Mask::EMPTY;
    for s in sets {
        if s.members.len() < 2 {
            return Err(Error::MalformedCover(format!("set {:?} has fewer than two points", s.members)));
        }
        if let Some(&bad) = s.members.iter().find(|&&i| i >= n) {
            return Err(Error::MalformedCover(format!("index {bad} out of range for {n} points")));
        }
        union = union | s.mask();
    }
    if union != Mask::full(n) {
        let missing: Vec<usize> = (Mask::full(n) - union).iter().collect();
        return Err(Error::MalformedCover(format!("points {missing:?} are not covered")));
    }
    if sets.len() == 1 {
        return Ok(CoverClass::K0);
    }
    let diameter = m.diameter();
    let tol = m.tolerance();
    Ok(if sets.iter().all(|s| m.subset_diameter(&s.members) < diameter - tol) {
        CoverClass::K1
    } else {
        CoverClass::K2
    })
}

/// Classifies a cover against `m`, re-checking that it is a 2-covering.
pub fn classify(cover: &TwoCover, m: &FiniteMetric) -> Result<CoverClass> {
    if m.len() > Mask::BITS {
        return Err(Error::ExactLimitExceeded { size: m.len(), limit: Mask::BITS });
    }
    classify_sets(&cover.sets, m)
}
