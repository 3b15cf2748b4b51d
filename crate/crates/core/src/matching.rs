//! Minimum edge covers of bipartite graphs via Hopcroft–Karp.
//!
//! In a triangle-free threshold graph every admissible set is an edge, so the
//! minimum 2-cover is a minimum edge cover, of size `n − ν(G)`.

use std::collections::VecDeque;

use crate::error::{Error, Result};

const NIL: usize = usize::MAX;

/// Two-colouring of an undirected graph, or `None` if it has an odd cycle.
pub fn bipartition(adj: &[Vec<u32>]) -> Option<Vec<bool>> {
    let n = adj.len();
    let mut side: Vec<Option<bool>> = vec![None; n];
    let mut queue = VecDeque::new();
    for start in 0..n {
        if side[start].is_some() {
            continue;
        }
        side[start] = Some(false);
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            let su = side[u].unwrap();
            for &v in &adj[u] {
                let v = v as usize;
                match side[v] {
                    None => {
                        side[v] = Some(!su);
                        queue.push_back(v);
                    }
                    Some(sv) if sv == su => return None,
                    _ => {}
                }
            }
        }
    }
    Some(side.into_iter().map(Option::unwrap).collect())
}

/// Maximum matching; `mate[v]` is the partner of `v` or `None`.
pub fn maximum_matching(adj: &[Vec<u32>]) -> Result<Vec<Option<usize>>> {
    let side = bipartition(adj).ok_or_else(|| Error::BadParameter("graph is not bipartite".into()))?;
    let n = adj.len();
    let left: Vec<usize> = (0..n).filter(|&v| !side[v]).collect();
    let mut mate = vec![NIL; n];
    let mut dist = vec![0u32; n];

    loop {
        // Layered BFS from free left vertices.
        let mut queue = VecDeque::new();
        let mut found = false;
        for &u in &left {
            if mate[u] == NIL {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = u32::MAX;
            }
        }
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = mate[v as usize];
                if w == NIL {
                    found = true;
                } else if dist[w] == u32::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            break;
        }
        let mut progress = false;
        for &u in &left {
            if mate[u] == NIL && augment(u, adj, &mut mate, &mut dist) {
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }
    Ok(mate.into_iter().map(|m| (m != NIL).then_some(m)).collect())
}

fn augment(root: usize, adj: &[Vec<u32>], mate: &mut [usize], dist: &mut [u32]) -> bool {
    // Iterative DFS along the BFS layers.
    let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
    let mut path: Vec<(usize, usize)> = Vec::new();
    while let Some(top) = stack.last_mut() {
        let u = top.0;
        if top.1 >= adj[u].len() {
            dist[u] = u32::MAX;
            stack.pop();
            path.pop();
            continue;
        }
        let v = adj[u][top.1] as usize;
        top.1 += 1;
        let w = mate[v];
        if w == NIL {
            path.push((u, v));
            for &(a, b) in &path {
                mate[a] = b;
                mate[b] = a;
            }
            return true;
        }
        if dist[w] == dist[u].wrapping_add(1) {
            path.push((u, v));
            stack.push((w, 0));
        }
    }
    false
}

/// Minimum edge cover of a bipartite graph without isolated vertices.
pub fn min_edge_cover(adj: &[Vec<u32>]) -> Result<Vec<(usize, usize)>> {
    if let Some(v) = adj.iter().position(|a| a.is_empty()) {
        return Err(Error::BadParameter(format!("vertex {v} is isolated")));
    }
    let mate = maximum_matching(adj)?;
    let mut cover = Vec::new();
    for (v, m) in mate.iter().enumerate() {
        match m {
            Some(w) if v < *w => cover.push((v, *w)),
            Some(_) => {}
            None => cover.push((v.min(adj[v][0] as usize), v.max(adj[v][0] as usize))),
        }
    }
    cover.sort_unstable();
    Ok(cover)
}
