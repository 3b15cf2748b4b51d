use super::{CoverSet, Mask};
use crate::error::{Error, Result};
use crate::metric::FiniteMetric;

/// Dominance-pruned candidate sets at level `δ`, ordered by diameter then mask.
///
/// Every clique of the threshold graph with at least two points that has no
/// strict clique superset of diameter at most its own (up to `τ`).
pub fn candidates(m: &FiniteMetric, delta: f64) -> Result<Vec<CoverSet>> {
    check_level(m, delta)?;
    Ok(pool(m, delta).into_iter().map(|(mask, _)| CoverSet::from_mask(m, mask)).collect())
}

pub(super) fn check_level(m: &FiniteMetric, delta: f64) -> Result<f64> {
    match m.len() {
        0 => return Err(Error::EmptySpace),
        1 => return Err(Error::SingletonSpace),
        n if n > Mask::BITS => return Err(Error::ExactLimitExceeded { size: n, limit: Mask::BITS }),
        _ => {}
    }
    if !delta.is_finite() {
        return Err(Error::BadParameter(format!("level {delta} is not finite")));
    }
    let nabla = m.nu()?.into_iter().fold(0.0, f64::max);
    if delta < nabla - m.tolerance() {
        return Err(Error::NoCoverExists { level: delta, nabla });
    }
    Ok(nabla)
}

/// Candidate masks with their diameters, sorted by `(diameter, mask)`.
pub(super) fn pool(m: &FiniteMetric, level: f64) -> Vec<(Mask, f64)> {
    let n = m.len();
    let tol = m.tolerance();
    let mut dists: Vec<f64> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| m.d(i, j))
        .filter(|&d| d <= level + tol)
        .collect();
    dists.sort_by(f64::total_cmp);
    dists.dedup();

    let mut found: Vec<Mask> = Vec::new();
    let mut prev_edges = usize::MAX;
    for &v in &dists {
        let cut = v + tol;
        let adjacency: Vec<Mask> =
            (0..n).map(|i| Mask::from_indices((0..n).filter(|&j| j != i && m.d(i, j) <= cut))).collect();
        let edges: usize = adjacency.iter().map(|a| a.count()).sum();
        if edges == prev_edges {
            continue;
        }
        prev_edges = edges;
        bron_kerbosch(Mask::EMPTY, Mask::full(n), Mask::EMPTY, &adjacency, &mut found);
    }
    found.sort_unstable();
    found.dedup();

    let sized: Vec<(Mask, f64)> = found
        .into_iter()
        .map(|mask| {
            let members: Vec<usize> = mask.iter().collect();
            (mask, m.subset_diameter(&members))
        })
        .collect();
    let mut kept: Vec<(Mask, f64)> = sized
        .iter()
        .filter(|&&(u, du)| !sized.iter().any(|&(w, dw)| w != u && u.is_subset(w) && dw <= du + tol))
        .copied()
        .collect();
    kept.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    kept
}

fn bron_kerbosch(r: Mask, mut p: Mask, mut x: Mask, adj: &[Mask], out: &mut Vec<Mask>) {
    if p.is_empty() {
        if x.is_empty() && r.count() >= 2 {
            out.push(r);
        }
        return;
    }
    let pivot = (p | x).iter().max_by_key(|&u| (p & adj[u]).count()).unwrap();
    for v in (p - adj[pivot]).iter() {
        let single = Mask::single(v);
        bron_kerbosch(r | single, p & adj[v], x & adj[v], adj, out);
        p = p - single;
        x = x | single;
    }
}
