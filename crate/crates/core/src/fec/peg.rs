//! Progressive-edge-growth construction of a regular LDPC Tanner graph.
//!
//! Variable nodes are visited in order. Each new edge goes to the check node
//! that is farthest from the variable in the current graph (unreachable checks
//! first), preferring the lowest check degree; remaining ties are broken by a
//! seeded random draw. Check degrees are capped at `dc`, so a feasible
//! `n * dv = m * dc` yields an exactly regular graph.

use std::collections::VecDeque;

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Builds the check-node adjacency (`m` rows of variable indices).
/// Returns `None` when the degree caps leave no admissible check for some edge.
pub(crate) fn regular_graph(
    n: usize,
    m: usize,
    dv: usize,
    dc: usize,
    seed: u64,
) -> Option<Vec<Vec<usize>>> {
    debug_assert_eq!(n * dv, m * dc);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks: Vec<Vec<usize>> = vec![Vec::with_capacity(dc); m];
    let mut vars: Vec<Vec<usize>> = vec![Vec::with_capacity(dv); n];
    let mut depth = vec![usize::MAX; m];
    let mut seen_var = vec![false; n];
    let mut queue = VecDeque::new();

    for v in 0..n {
        for _ in 0..dv {
            if vars[v].is_empty() {
                depth.fill(usize::MAX);
            } else {
                bfs_depths(v, &checks, &vars, &mut depth, &mut seen_var, &mut queue);
            }
            let eligible = |c: usize| checks[c].len() < dc && !vars[v].contains(&c);
            // rank by (depth desc, degree asc)
            let best = (0..m)
                .filter(|&c| eligible(c))
                .map(|c| (depth[c], std::cmp::Reverse(checks[c].len())))
                .max()?;
            let ties: Vec<usize> = (0..m)
                .filter(|&c| eligible(c) && (depth[c], std::cmp::Reverse(checks[c].len())) == best)
                .collect();
            let c = *ties.choose(&mut rng).expect("non-empty tie set");
            checks[c].push(v);
            vars[v].push(c);
        }
    }
    for row in &mut checks {
        row.sort_unstable();
    }
    Some(checks)
}

/// Depth (in check layers) at which each check node is first reached from
/// variable `root`; `usize::MAX` for unreachable checks.
fn bfs_depths(
    root: usize,
    checks: &[Vec<usize>],
    vars: &[Vec<usize>],
    depth: &mut [usize],
    seen_var: &mut [bool],
    queue: &mut VecDeque<(usize, usize)>,
) {
    depth.fill(usize::MAX);
    seen_var.fill(false);
    queue.clear();
    seen_var[root] = true;
    queue.push_back((root, 0));
    while let Some((v, d)) = queue.pop_front() {
        for &c in &vars[v] {
            if depth[c] != usize::MAX {
                continue;
            }
            depth[c] = d;
            for &u in &checks[c] {
                if !seen_var[u] {
                    seen_var[u] = true;
                    queue.push_back((u, d + 1));
                }
            }
        }
    }
}
