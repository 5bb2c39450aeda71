use alloc::vec::Vec;

use super::scc::SccPartition;
use super::{bits, encode_rows, low_mask, Branch, Encode, Mask, Outcome, Star, StepPlan};
use crate::graph::VertexId;
use crate::state::{Target, Tc};

/// Shared transversal configuration: target-free reachability among the
/// frontier and the seeds.
///
/// `reached` marks positions reachable from the seeds; their rows are absent.
/// `rows[p]` is the set of unreached positions reachable from `p` (always
/// containing `p`), zero for reached rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Stc {
    reached: Mask,
    rows: Vec<Mask>,
}

impl Stc {
    pub fn root() -> Self {
        Stc { reached: 0, rows: Vec::new() }
    }

    /// Builds an STC from raw reachability among `reach.len()` positions.
    pub fn from_parts(reached: Mask, reach: &[Mask]) -> Self {
        let width = reach.len();
        let reached = reached & low_mask(width);
        let keep = low_mask(width) & !reached;
        let rows = (0..width)
            .map(|p| if (keep >> p) & 1 == 1 { (reach[p] | (1 << p)) & keep } else { 0 })
            .collect();
        Stc { reached, rows }
    }

    pub fn width(&self) -> usize {
        self.rows.len()
    }

    pub fn reached(&self) -> Mask {
        self.reached
    }

    pub fn is_reached(&self, p: usize) -> bool {
        (self.reached >> p) & 1 == 1
    }

    pub fn rows(&self) -> &[Mask] {
        &self.rows
    }

    /// Positions not reached from the seeds.
    pub fn unreached(&self) -> Mask {
        low_mask(self.width()) & !self.reached
    }

    pub fn sccs(&self) -> SccPartition {
        SccPartition::of(self)
    }

    /// Decides the edge of `plan`. Never yields `Top`.
    pub fn transition(&self, plan: &StepPlan, branch: Branch) -> Outcome<Stc> {
        debug_assert_eq!(self.rows.len(), plan.width());
        let s = plan.locals();
        let mut star = Star::new(s + 1);
        star.adj[s] |= self.reached | plan.new_seeds;
        for p in bits(self.unreached()) {
            star.adj[p] |= self.rows[p];
        }
        if branch == Branch::Hi {
            star.edge(plan.tail, plan.head);
        }
        star.close();

        let mut reached = 0;
        for (q, &l) in plan.after.iter().enumerate() {
            reached |= (star.adj[s] >> l & 1) << q;
        }
        if plan.seeds_done() && reached == 0 {
            return Outcome::Bottom;
        }
        let keep = low_mask(plan.width_after()) & !reached;
        let rows = plan
            .after
            .iter()
            .enumerate()
            .map(|(q, &l)| if (keep >> q) & 1 == 1 { plan.compress(star.adj[l as usize]) & keep } else { 0 })
            .collect();
        Outcome::Live(Stc { reached, rows })
    }

    /// TC for target `u` (at frontier position `u_pos`) carried by this STC:
    /// the columns of every position that reaches `u` are dropped.
    ///
    /// # Panics
    /// If `u_pos` is reached from the seeds; its probability is then 1.
    pub fn recover_tc(&self, u_pos: usize, u: VertexId) -> Tc {
        assert!(!self.is_reached(u_pos), "recover_tc on a vertex reached from the seeds");
        let to_target = bits(self.unreached())
            .filter(|&x| (self.rows[x] >> u_pos) & 1 == 1)
            .fold(0, |acc, x| acc | (1 << x));
        Tc::from_parts(Target::Vertex(u), self.reached, to_target, &self.rows)
    }
}

impl Encode for Stc {
    fn encode(&self) -> Vec<u8> {
        let w = self.width();
        let mut out = Vec::with_capacity(10 + (w * w).div_ceil(8));
        out.push(b'Y');
        out.push(w as u8);
        out.extend_from_slice(&self.reached.to_le_bytes());
        encode_rows(&mut out, w, &self.rows);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Edge, SeedSet, UncertainDigraph};
    use crate::ordering::compute_frontiers;
    use crate::state::Sweep;
    use alloc::vec;

    #[test]
    fn empty_frontier_after_seeds_done_is_bottom() {
        let g = UncertainDigraph::new(2, vec![Edge::new(0, 1, 0.5)]).unwrap();
        let o = compute_frontiers(&g, vec![0]).unwrap();
        let s = SeedSet::new([0], 2).unwrap();
        let sweep = Sweep::new(&g, &o, &s);
        let plan = sweep.plan(0);
        for b in Branch::BOTH {
            assert_eq!(Stc::root().transition(&plan, b, ), Outcome::Bottom);
        }
    }

    #[test]
    fn hi_from_reached_removes_row() {
        // 0 -> 1 -> 2 -> 3 with seed 0; level 1 has W = {1}, reached.
        let g = UncertainDigraph::new(
            4,
            vec![Edge::new(0, 1, 0.5), Edge::new(1, 2, 0.5), Edge::new(2, 3, 0.5)],
        )
        .unwrap();
        let o = compute_frontiers(&g, vec![0, 1, 2]).unwrap();
        let s = SeedSet::new([0], 4).unwrap();
        let sweep = Sweep::new(&g, &o, &s);
        let psi = Stc::root().transition(&sweep.plan(0), Branch::Hi).live().unwrap();
        assert_eq!(psi.reached(), 0b1);
        let next = psi.transition(&sweep.plan(1), Branch::Hi).live().unwrap();
        assert_eq!(o.frontier(2), &[2]);
        assert_eq!((next.reached(), next.rows()), (0b1, &[0][..]));
        assert_eq!(psi.transition(&sweep.plan(1), Branch::Lo), Outcome::Bottom);
    }

    #[test]
    fn recover_tc_drops_columns_reaching_target() {
        // Positions 0 <-> 1 mutually reachable, 2 reaches 1, 3 isolated.
        let psi = Stc::from_parts(0, &[0b0011, 0b0011, 0b0111, 0b1000]);
        let phi = psi.recover_tc(1, 7);
        assert_eq!(phi.target(), Target::Vertex(7));
        assert_eq!(phi.to_target(), 0b0111);
        assert_eq!(phi.rows(), &[0, 0, 0, 0b1000]);
    }

    #[test]
    fn recover_tc_single_vertex() {
        let psi = Stc::from_parts(0, &[0b1]);
        let phi = psi.recover_tc(0, 3);
        assert_eq!((phi.reached(), phi.to_target()), (0, 0b1));
        assert_eq!(phi.matrix()[0][1], Some(false));
    }

    #[test]
    #[should_panic]
    fn recover_tc_rejects_reached() {
        Stc::from_parts(0b1, &[0]).recover_tc(0, 0);
    }
}
