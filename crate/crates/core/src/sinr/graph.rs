use std::collections::{HashMap, VecDeque};

use super::{distance, range, PhysicalInstance};
use crate::{Error, Label, Result};

/// Undirected communication graph over station labels.
///
/// Node indices follow ascending label order; adjacency lists are sorted.
#[derive(Clone, Debug, PartialEq)]
pub struct CommGraph {
    labels: Vec<Label>,
    index: HashMap<Label, usize>,
    adj: Vec<Vec<usize>>,
}

/// Edge `{u, v}` iff `d(u, v) <= range`. Errors if the graph is disconnected.
pub fn build_graph(inst: &PhysicalInstance) -> Result<CommGraph> {
    let g = CommGraph::from_instance(inst)?;
    let components = g.component_count();
    if components > 1 {
        return Err(Error::Disconnected { components });
    }
    Ok(g)
}

impl CommGraph {
    /// Builds the graph without the connectivity requirement.
    pub fn from_instance(inst: &PhysicalInstance) -> Result<Self> {
        let r = range(inst.params())?;
        let st = inst.stations();
        let mut adj = vec![Vec::new(); st.len()];
        for i in 0..st.len() {
            for j in i + 1..st.len() {
                if distance(st[i].position(), st[j].position()) <= r {
                    adj[i].push(j);
                    adj[j].push(i);
                }
            }
        }
        let labels: Vec<Label> = st.iter().map(|s| s.label).collect();
        Ok(CommGraph::from_parts(labels, adj))
    }

    /// Graph from an explicit edge list (for hand-made topologies).
    pub fn from_edges(labels: &[u32], edges: &[(u32, u32)]) -> Self {
        let mut ls: Vec<Label> = labels.iter().map(|&l| Label(l)).collect();
        ls.sort_unstable();
        ls.dedup();
        let index: HashMap<Label, usize> = ls.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let mut adj = vec![Vec::new(); ls.len()];
        for &(a, b) in edges {
            let (ia, ib) = (index[&Label(a)], index[&Label(b)]);
            if ia != ib && !adj[ia].contains(&ib) {
                adj[ia].push(ib);
                adj[ib].push(ia);
            }
        }
        CommGraph::from_parts(ls, adj)
    }

    fn from_parts(labels: Vec<Label>, mut adj: Vec<Vec<usize>>) -> Self {
        for a in &mut adj {
            a.sort_unstable();
        }
        let index = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        CommGraph { labels, index, adj }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> Label {
        self.labels[i]
    }

    pub fn index_of(&self, label: Label) -> Option<usize> {
        self.index.get(&label).copied()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    /// Neighbour labels of `label`, ascending.
    pub fn neighbor_labels(&self, label: Label) -> Vec<Label> {
        match self.index_of(label) {
            Some(i) => self.adj[i].iter().map(|&j| self.labels[j]).collect(),
            None => Vec::new(),
        }
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, a: Label, b: Label) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.adj[i].binary_search(&j).is_ok(),
            _ => false,
        }
    }

    /// All edges as label pairs `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(Label, Label)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (i, ns) in self.adj.iter().enumerate() {
            for &j in ns {
                if i < j {
                    out.push((self.labels[i], self.labels[j]));
                }
            }
        }
        out
    }

    /// Hop distances from `src` restricted to nodes where `allowed` holds.
    pub fn bfs_within(&self, src: usize, allowed: &[bool]) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        if !allowed[src] {
            return dist;
        }
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &v in &self.adj[u] {
                if allowed[v] && dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn bfs(&self, src: usize) -> Vec<Option<usize>> {
        self.bfs_within(src, &vec![true; self.n()])
    }

    /// Hop distance between two labels, if connected.
    pub fn hop_distance(&self, a: Label, b: Label) -> Option<usize> {
        let (i, j) = (self.index_of(a)?, self.index_of(b)?);
        self.bfs(i)[j]
    }

    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.n()];
        let mut count = 0;
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            count += 1;
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(u) = stack.pop() {
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// Exact hop diameter of the subgraph induced by `members`; `None` if that
    /// subgraph is empty or disconnected.
    pub fn induced_diameter(&self, members: &[bool]) -> Option<usize> {
        let mut best = 0;
        let mut any = false;
        let count = members.iter().filter(|&&m| m).count();
        for s in 0..self.n() {
            if !members[s] {
                continue;
            }
            any = true;
            let dist = self.bfs_within(s, members);
            let reached = dist.iter().filter(|d| d.is_some()).count();
            if reached != count {
                return None;
            }
            best = best.max(dist.iter().flatten().copied().max().unwrap_or(0));
        }
        any.then_some(best)
    }

    pub fn diameter(&self) -> Option<usize> {
        self.induced_diameter(&vec![true; self.n()])
    }
}
