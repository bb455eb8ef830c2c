use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{range, PhysicalInstance, Point};
use crate::{Label, Result};

/// Integer grid-box coordinates `(k, j)`.
pub type BoxCoord = (i64, i64);

fn axis_box(a: f64, side: f64) -> i64 {
    let mut k = (a / side).floor() as i64;
    // Division rounding can land one box off; re-check against k·x ≤ a < (k+1)·x.
    while (k as f64) * side > a {
        k -= 1;
    }
    while ((k + 1) as f64) * side <= a {
        k += 1;
    }
    k
}

/// Box of `p` in the grid of the given side, origin at `(0, 0)`, lower edges inclusive.
pub fn grid_box(p: Point, side: f64) -> BoxCoord {
    assert!(side > 0.0, "grid side must be positive");
    (axis_box(p.x, side), axis_box(p.y, side))
}

/// Box offsets of the pivotal grid that can hold a station within `hops · r`
/// of a station in box `(0, 0)`.
///
/// With side `x = r/√2`, an offset is reachable iff the infimum distance between
/// the two boxes is strictly below `hops·√2·x`; the infimum is never attained
/// for boxes that are not adjacent because upper box edges are open. For
/// `hops = 1` this yields the familiar 21 boxes (a 5×5 block minus corners).
pub fn pivotal_offsets_within_hops(hops: u32) -> Vec<BoxCoord> {
    let limit = 2 * i64::from(hops) * i64::from(hops);
    let span = 2 * i64::from(hops) + 1;
    let gap = |o: i64| (o.abs() - 1).max(0);
    let mut out = Vec::new();
    for i in -span..=span {
        for j in -span..=span {
            let (gi, gj) = (gap(i), gap(j));
            if gi * gi + gj * gj < limit {
                out.push((i, j));
            }
        }
    }
    out
}

/// Assignment of stations to grid boxes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridIndex {
    pub side: f64,
    pub boxes: BTreeMap<Label, BoxCoord>,
}

impl GridIndex {
    pub fn new(inst: &PhysicalInstance, side: f64) -> Self {
        let boxes = inst
            .stations()
            .iter()
            .map(|s| (s.label, grid_box(s.position(), side)))
            .collect();
        GridIndex { side, boxes }
    }

    /// The grid of side `r/√2`, where any two stations sharing a box are in range.
    pub fn pivotal(inst: &PhysicalInstance) -> Result<Self> {
        let side = range(inst.params())? / std::f64::consts::SQRT_2;
        Ok(GridIndex::new(inst, side))
    }

    pub fn box_of(&self, label: Label) -> Option<BoxCoord> {
        self.boxes.get(&label).copied()
    }

    /// Labels per occupied box.
    pub fn occupancy(&self) -> BTreeMap<BoxCoord, Vec<Label>> {
        let mut out: BTreeMap<BoxCoord, Vec<Label>> = BTreeMap::new();
        for (&l, &b) in &self.boxes {
            out.entry(b).or_default().push(l);
        }
        out
    }

    /// Count of the given labels falling in each box.
    pub fn count_per_box<'a>(
        &self,
        labels: impl IntoIterator<Item = &'a Label>,
    ) -> BTreeMap<BoxCoord, usize> {
        let mut out = BTreeMap::new();
        for l in labels {
            if let Some(b) = self.box_of(*l) {
                *out.entry(b).or_insert(0) += 1;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sinr::{distance, SinrParams, Station};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn box_examples() {
        assert_eq!(grid_box(Point::new(0.0, 0.0), 1.0), (0, 0));
        assert_eq!(grid_box(Point::new(2.5, -0.5), 1.0), (2, -1));
        assert_eq!(grid_box(Point::new(3.0, 3.0), 1.0), (3, 3));
        assert_eq!(grid_box(Point::new(-1.0, -0.0), 1.0), (-1, 0));
    }

    #[test]
    fn box_rule_holds_for_awkward_sides() {
        let side = 1.0 / std::f64::consts::SQRT_2;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10_000 {
            let k: i64 = rng.gen_range(-50..50);
            // Points exactly on computed box edges.
            let a = (k as f64) * side;
            let (bk, _) = grid_box(Point::new(a, 0.0), side);
            assert!((bk as f64) * side <= a && a < ((bk + 1) as f64) * side);
        }
    }

    #[test]
    fn one_hop_reach_is_21_boxes() {
        let offsets = pivotal_offsets_within_hops(1);
        assert_eq!(offsets.len(), 21);
        assert!(!offsets.contains(&(2, 2)));
        assert!(offsets.contains(&(2, 1)));
    }

    #[test]
    fn neighbours_always_fall_in_the_21_boxes() {
        // Desk-scale geometric certification of the 21-box count.
        let side = 1.0 / std::f64::consts::SQRT_2;
        let offsets = pivotal_offsets_within_hops(1);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200_000 {
            let a = Point::new(rng.gen_range(0.0..side), rng.gen_range(0.0..side));
            let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let d: f64 = rng.gen_range(0.0..=1.0);
            let b = Point::new(a.x + d * t.cos(), a.y + d * t.sin());
            if distance(a, b) > 1.0 {
                continue;
            }
            let (i, j) = grid_box(b, side);
            assert!(offsets.contains(&(i, j)), "{a:?} -> {b:?} in ({i},{j})");
        }
        // Every offset is actually reachable.
        for &(i, j) in &offsets {
            let pick = |o: i64| {
                if o > 0 {
                    (side * 0.999_999, side * o as f64)
                } else if o < 0 {
                    (0.0, side * (o + 1) as f64 - 1e-9)
                } else {
                    (0.5 * side, 0.5 * side)
                }
            };
            let (ax, bx) = pick(i);
            let (ay, by) = pick(j);
            assert!(
                distance(Point::new(ax, ay), Point::new(bx, by)) <= 1.0,
                "offset ({i},{j})"
            );
        }
    }

    #[test]
    fn pivotal_boxes_are_cliques() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let stations: Vec<Station> = (1..=400)
            .map(|l| Station::new(l, rng.gen_range(0.0..6.0), rng.gen_range(0.0..6.0)))
            .collect();
        let inst = PhysicalInstance::new(stations, SinrParams::default(), 400).unwrap();
        let r = range(inst.params()).unwrap();
        let grid = GridIndex::pivotal(&inst).unwrap();
        for members in grid.occupancy().values() {
            for (i, &a) in members.iter().enumerate() {
                for &b in &members[i + 1..] {
                    let d = distance(inst.position(a).unwrap(), inst.position(b).unwrap());
                    assert!(d <= r);
                }
            }
        }
    }
}
