use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::sinr::CommGraph;
use crate::{Error, Label, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Active,
    Leader,
    Inactive,
    Helper,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Active => "active",
            Status::Leader => "leader",
            Status::Inactive => "inactive",
            Status::Helper => "helper",
        }
    }
}

/// A leader-to-leader path through helpers, stored with the smaller leader
/// label first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Route(pub Vec<Label>);

impl Route {
    pub fn new(mut path: Vec<Label>) -> Self {
        if path.first() > path.last() {
            path.reverse();
        }
        Route(path)
    }

    pub fn ends(&self) -> (Label, Label) {
        (self.0[0], self.0[self.0.len() - 1])
    }

    pub fn helpers(&self) -> &[Label] {
        &self.0[1..self.0.len() - 1]
    }

    pub fn edges(&self) -> impl Iterator<Item = (Label, Label)> + '_ {
        self.0.windows(2).map(|w| (w[0].min(w[1]), w[0].max(w[1])))
    }
}

/// Everything a station knows. Built from its neighbour list and the global
/// counts only; updated solely from received messages.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeView {
    pub label: Label,
    pub n: usize,
    pub n_labels: u32,
    pub delta: usize,
    /// Ascending.
    pub neighbors: Vec<Label>,
    status: Status,
    /// Neighbours heard announcing leadership.
    pub leader_neighbors: BTreeSet<Label>,
    /// `N_v` for each neighbouring leader `v`, in the order it was learned.
    pub learned_neighborhoods: BTreeMap<Label, Vec<Label>>,
    /// Routes this station took part in choosing or serves on.
    pub helper_assignments: BTreeSet<Route>,
}

impl NodeView {
    pub fn new(label: Label, neighbors: Vec<Label>, n: usize, n_labels: u32, delta: usize) -> Self {
        let mut neighbors = neighbors;
        neighbors.sort_unstable();
        NodeView {
            label,
            n,
            n_labels,
            delta,
            neighbors,
            status: Status::Active,
            leader_neighbors: BTreeSet::new(),
            learned_neighborhoods: BTreeMap::new(),
            helper_assignments: BTreeSet::new(),
        }
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn degree(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_leader(&self) -> bool {
        self.status == Status::Leader
    }

    /// `i`-th neighbour in ascending label order, 1-based.
    pub fn ith_neighbor(&self, i: usize) -> Option<Label> {
        i.checked_sub(1)
            .and_then(|k| self.neighbors.get(k).copied())
    }

    /// Applies a status change. Allowed: active → leader, active → inactive,
    /// inactive → helper; repeating the current status is a no-op.
    pub fn set_status(&mut self, to: Status) -> Result<()> {
        let ok = matches!(
            (self.status, to),
            (Status::Active, Status::Leader)
                | (Status::Active, Status::Inactive)
                | (Status::Inactive, Status::Helper)
        );
        if self.status == to || ok {
            self.status = to;
            Ok(())
        } else {
            Err(Error::InvalidTransition {
                label: self.label,
                from: self.status.name(),
                to: to.name(),
            })
        }
    }
}

/// Station views keyed by label.
pub type Views = BTreeMap<Label, NodeView>;

/// Initial knowledge of every station: own label, neighbour labels, `n`,
/// `N` and `Δ`.
pub fn initial_views(graph: &CommGraph, n_labels: u32) -> Views {
    let delta = graph.max_degree();
    graph
        .labels()
        .iter()
        .map(|&l| {
            (
                l,
                NodeView::new(l, graph.neighbor_labels(l), graph.n(), n_labels, delta),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transitions() {
        let mut v = NodeView::new(Label(1), vec![], 1, 4, 0);
        assert!(v.set_status(Status::Helper).is_err());
        v.set_status(Status::Inactive).unwrap();
        assert!(v.set_status(Status::Leader).is_err());
        v.set_status(Status::Helper).unwrap();
        v.set_status(Status::Helper).unwrap();
        assert!(v.set_status(Status::Active).is_err());
        let mut w = NodeView::new(Label(2), vec![], 1, 4, 0);
        w.set_status(Status::Leader).unwrap();
        assert!(matches!(
            w.set_status(Status::Inactive),
            Err(Error::InvalidTransition { .. })
        ));
    }

    #[test]
    fn route_normalisation() {
        let r = Route::new(vec![Label(9), Label(4), Label(7), Label(2)]);
        assert_eq!(r.ends(), (Label(2), Label(9)));
        assert_eq!(r.helpers(), &[Label(7), Label(4)]);
        let e: Vec<_> = r.edges().collect();
        assert_eq!(
            e,
            vec![
                (Label(2), Label(7)),
                (Label(4), Label(7)),
                (Label(4), Label(9))
            ]
        );
    }

    #[test]
    fn neighbours_sorted_and_indexed_from_one() {
        let g = CommGraph::from_edges(&[3, 8, 5], &[(3, 8), (3, 5)]);
        let views = initial_views(&g, 16);
        let v = &views[&Label(3)];
        assert_eq!(v.neighbors, vec![Label(5), Label(8)]);
        assert_eq!(v.ith_neighbor(1), Some(Label(5)));
        assert_eq!(v.ith_neighbor(3), None);
        assert_eq!(v.ith_neighbor(0), None);
        assert_eq!(v.delta, 2);
    }
}
