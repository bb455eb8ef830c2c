//! Exact minimum (connected) dominating sets for small graphs, and a greedy
//! connected dominating set for larger ones.

use crate::sinr::CommGraph;
use crate::{Error, Result};

/// Largest `n` accepted by the exact search.
pub const EXACT_CDS_CAP: usize = 14;

fn closed_masks(g: &CommGraph) -> Vec<u32> {
    (0..g.n())
        .map(|i| g.neighbors(i).iter().fold(1u32 << i, |m, &j| m | (1 << j)))
        .collect()
}

fn dominates(closed: &[u32], set: u32, all: u32) -> bool {
    closed
        .iter()
        .enumerate()
        .filter(|(i, _)| set & (1 << i) != 0)
        .fold(0, |m, (_, &c)| m | c)
        == all
}

fn connected_within(g: &CommGraph, set: u32) -> bool {
    let allowed: Vec<bool> = (0..g.n()).map(|i| set & (1 << i) != 0).collect();
    let Some(start) = allowed.iter().position(|&a| a) else {
        return false;
    };
    let reached = g
        .bfs_within(start, &allowed)
        .iter()
        .filter(|d| d.is_some())
        .count();
    reached == set.count_ones() as usize
}

fn check_size(g: &CommGraph) -> Result<()> {
    if g.n() > EXACT_CDS_CAP {
        return Err(Error::ExactTooLarge {
            n: g.n(),
            cap: EXACT_CDS_CAP,
        });
    }
    if g.n() == 0 {
        return Err(Error::InvalidArgument("empty graph".into()));
    }
    Ok(())
}

fn search_by_size(g: &CommGraph, connected: bool) -> Result<Vec<usize>> {
    check_size(g)?;
    let n = g.n();
    let closed = closed_masks(g);
    let all = (1u32 << n) - 1;
    for k in 1..=n {
        // Lexicographic k-combinations of 0..n.
        let mut comb: Vec<usize> = (0..k).collect();
        loop {
            let set = comb.iter().fold(0u32, |m, &i| m | (1 << i));
            if dominates(&closed, set, all) && (!connected || connected_within(g, set)) {
                return Ok(comb);
            }
            let Some(i) = (0..k).rev().find(|&i| comb[i] < n - k + i) else {
                break;
            };
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
        }
    }
    Err(Error::InvalidArgument(
        "graph has no connected dominating set".into(),
    ))
}

/// Minimum connected dominating set by increasing size, node indices.
pub fn min_cds(g: &CommGraph) -> Result<Vec<usize>> {
    search_by_size(g, true)
}

/// Minimum dominating set (connectivity not required).
pub fn min_dominating_set(g: &CommGraph) -> Result<Vec<usize>> {
    search_by_size(g, false)
}

/// Size of a minimum CDS by scanning every bitmask from the top down; an
/// independent path used to cross-check [`min_cds`].
pub fn min_cds_size_by_masks(g: &CommGraph) -> Result<usize> {
    check_size(g)?;
    let n = g.n();
    let closed = closed_masks(g);
    let all = (1u32 << n) - 1;
    let mut best = usize::MAX;
    let mut set = all;
    loop {
        let size = set.count_ones() as usize;
        if size < best && dominates(&closed, set, all) && connected_within(g, set) {
            best = size;
        }
        if set == 1 {
            break;
        }
        set -= 1;
    }
    Ok(best)
}

/// Greedy CDS: grow a connected set from a maximum-degree node, always adding
/// the frontier node that dominates the most new nodes (ties to lower index).
pub fn greedy_cds(g: &CommGraph) -> Vec<usize> {
    let n = g.n();
    if n <= 1 {
        return (0..n).collect();
    }
    let mut in_set = vec![false; n];
    let mut dominated = vec![false; n];
    let start = (0..n)
        .max_by_key(|&i| (g.degree(i), std::cmp::Reverse(i)))
        .unwrap();
    let take = |v: usize, in_set: &mut Vec<bool>, dominated: &mut Vec<bool>| {
        in_set[v] = true;
        dominated[v] = true;
        for &w in g.neighbors(v) {
            dominated[w] = true;
        }
    };
    take(start, &mut in_set, &mut dominated);
    while dominated.iter().any(|d| !d) {
        let gain = |v: usize| {
            usize::from(!dominated[v]) + g.neighbors(v).iter().filter(|&&w| !dominated[w]).count()
        };
        let best = (0..n)
            .filter(|&v| !in_set[v] && g.neighbors(v).iter().any(|&w| in_set[w]))
            .max_by_key(|&v| (gain(v), std::cmp::Reverse(v)))
            .expect("connected graph has a frontier");
        take(best, &mut in_set, &mut dominated);
    }
    (0..n).filter(|&v| in_set[v]).collect()
}
