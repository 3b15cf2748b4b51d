use std::collections::BTreeSet;

use super::candidates::check_level;
use super::{CoverSet, Mask, TwoCover};
use crate::error::{Error, Result};
use crate::metric::FiniteMetric;

/// Largest space the exhaustive oracle accepts.
pub const ORACLE_LIMIT: usize = 10;

/// Admissible sets at level `δ`: every subset with at least two points and
/// diameter at most `δ`, restricted to diameters below `Δ(F)` when `F` has no
/// focal points. Also reports whether `F` has focal points.
fn admissible(m: &FiniteMetric, delta: f64) -> Result<(Vec<(Mask, f64)>, bool)> {
    let n = m.len();
    if n > ORACLE_LIMIT {
        return Err(Error::OracleTooLarge { size: n, limit: ORACLE_LIMIT });
    }
    let nabla = check_level(m, delta)?;
    let tol = m.tolerance();
    let diameter = m.diameter();
    let focal = nabla >= diameter - tol;
    let mut out = Vec::new();
    for bits in 1u128..(1u128 << n) {
        let mask = Mask(bits);
        if mask.count() < 2 {
            continue;
        }
        let members: Vec<usize> = mask.iter().collect();
        let d = m.subset_diameter(&members);
        if d > delta + tol || (!focal && d >= diameter - tol) {
            continue;
        }
        out.push((mask, d));
    }
    // Larger sets first so the trivial cover is met early.
    out.sort_by(|a, b| b.0.count().cmp(&a.0.count()).then(a.0.cmp(&b.0)));
    Ok((out, focal))
}

fn irredundant(sets: &[Mask]) -> bool {
    (0..sets.len()).all(|i| {
        let others = sets.iter().enumerate().filter(|&(j, _)| j != i).fold(Mask::EMPTY, |a, (_, &s)| a | s);
        !sets[i].is_subset(others)
    })
}

/// Exhaustive `(T_δ, H^s_δ)` over all irredundant covers built from every
/// admissible set; no dominance pruning.
pub fn brute_force_oracle(m: &FiniteMetric, delta: f64, s: f64) -> Result<(usize, f64)> {
    let (sets, _) = admissible(m, delta)?;
    let mut best = (usize::MAX, f64::INFINITY);
    let mut stack = Vec::new();
    walk(&sets, Mask::full(m.len()), &mut stack, &mut |chosen, complete| {
        let weight: f64 = chosen.iter().map(|&i| sets[i].1.powf(s)).sum();
        if complete {
            let masks: Vec<Mask> = chosen.iter().map(|&i| sets[i].0).collect();
            if irredundant(&masks) {
                best.0 = best.0.min(chosen.len());
                best.1 = best.1.min(weight);
            }
            return false;
        }
        // A partial cover that can improve neither minimum is abandoned.
        chosen.len() + 1 >= best.0 && weight >= best.1
    });
    if best.0 == usize::MAX {
        return Err(Error::NoCoverExists { level: delta, nabla: delta });
    }
    Ok(best)
}

/// Every irredundant 2-cover in `K1_δ` (empty when `F` has focal points).
pub fn irredundant_covers(m: &FiniteMetric, delta: f64) -> Result<Vec<TwoCover>> {
    let (sets, focal) = admissible(m, delta)?;
    if focal {
        return Ok(Vec::new());
    }
    let mut seen: BTreeSet<Vec<Mask>> = BTreeSet::new();
    let mut stack = Vec::new();
    walk(&sets, Mask::full(m.len()), &mut stack, &mut |chosen, complete| {
        if complete {
            let mut masks: Vec<Mask> = chosen.iter().map(|&i| sets[i].0).collect();
            if irredundant(&masks) {
                masks.sort();
                seen.insert(masks);
            }
        }
        false
    });
    seen.into_iter()
        .map(|masks| {
            let sets = masks.into_iter().map(|mask| CoverSet::from_mask(m, mask)).collect();
            TwoCover::new(m, sets)
        })
        .collect()
}

/// Branches on the lowest uncovered point; `visit(chosen, complete)` returns
/// true to abandon a partial cover.
fn walk(sets: &[(Mask, f64)], uncovered: Mask, stack: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize], bool) -> bool) {
    let Some(p) = uncovered.lowest() else {
        visit(stack, true);
        return;
    };
    if !stack.is_empty() && visit(stack, false) {
        return;
    }
    for (i, &(mask, _)) in sets.iter().enumerate() {
        if !mask.contains(p) {
            continue;
        }
        stack.push(i);
        walk(sets, uncovered - mask, stack, visit);
        stack.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::tests::line;
    use crate::cover::CoverClass;

    #[test]
    fn linear_four() {
        let m = line(&[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(brute_force_oracle(&m, 1.0, 1.0).unwrap(), (2, 2.0));
    }

    #[test]
    fn two_points() {
        let m = line(&[0.0, 7.0]);
        assert_eq!(brute_force_oracle(&m, 7.0, 0.0).unwrap(), (1, 1.0));
        assert!(irredundant_covers(&m, 7.0).unwrap().is_empty());
    }

    #[test]
    fn cantor_level_two() {
        let m = line(&[0.0, 2.0 / 9.0, 2.0 / 3.0, 8.0 / 9.0]);
        let (t, h) = brute_force_oracle(&m, 2.0 / 9.0, 0.5).unwrap();
        assert_eq!(t, 2);
        assert!((h - 2.0 * (2.0f64 / 9.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn enumerates_k1_covers_of_l4() {
        let m = line(&[0.0, 1.0, 2.0, 3.0]);
        let covers = irredundant_covers(&m, 1.0).unwrap();
        assert_eq!(covers.len(), 1);
        assert!(covers.iter().all(|c| !c.is_redundant() && c.class == CoverClass::K1));
        let wider = irredundant_covers(&m, 2.0).unwrap();
        assert!(wider.len() > covers.len());
        assert!(wider.iter().all(|c| !c.is_redundant() && c.class == CoverClass::K1));
    }

    #[test]
    fn too_large() {
        let m = line(&(0..11).map(f64::from).collect::<Vec<_>>());
        assert_eq!(brute_force_oracle(&m, 1.0, 1.0).unwrap_err(), Error::OracleTooLarge { size: 11, limit: 10 });
    }
}
