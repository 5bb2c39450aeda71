use alloc::vec;
use alloc::vec::Vec;

use super::{bits, encode_rows, low_mask, Branch, Encode, Mask, Outcome, Star, StepPlan, TargetSpec};
use crate::graph::VertexId;

/// Column label of a TC's target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Target {
    Vertex(VertexId),
    /// Stand-in for any retired target; identical TCs of different retired
    /// targets have identical futures and are merged under this label.
    Imaginary,
}

/// Transversal configuration: reachability among the frontier, the seeds and
/// one target, given the decided edges.
///
/// `reached` marks frontier positions reachable from the seeds (their rows are
/// absent). `to_target` marks positions that reach the target (their columns
/// are absent). `rows[p]` is the set of present columns reachable from `p`; it
/// is zero for absent rows and for rows in `to_target`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tc {
    target: Target,
    reached: Mask,
    to_target: Mask,
    rows: Vec<Mask>,
}

impl Tc {
    /// Configuration before any edge is decided (empty frontier).
    pub fn root(target: Target) -> Self {
        Tc { target, reached: 0, to_target: 0, rows: Vec::new() }
    }

    /// Builds a TC from raw reachability, dropping the bits the canonical form
    /// does not keep. `reach[p]` lists positions reachable from `p` (the
    /// diagonal is forced on); rows of reached positions are ignored.
    pub fn from_parts(target: Target, reached: Mask, to_target: Mask, reach: &[Mask]) -> Self {
        let width = reach.len();
        let full = low_mask(width);
        let reached = reached & full;
        let to_target = to_target & full;
        debug_assert_eq!(reached & to_target, 0, "a reached vertex reaching the target means S reaches it");
        let keep = full & !(reached | to_target);
        let rows = (0..width)
            .map(|p| if (keep >> p) & 1 == 1 { (reach[p] | (1 << p)) & keep } else { 0 })
            .collect();
        Tc { target, reached, to_target, rows }
    }

    pub fn target(&self) -> Target {
        self.target
    }

    pub fn width(&self) -> usize {
        self.rows.len()
    }

    pub fn reached(&self) -> Mask {
        self.reached
    }

    pub fn to_target(&self) -> Mask {
        self.to_target
    }

    pub fn rows(&self) -> &[Mask] {
        &self.rows
    }

    /// Relabels the target column to the imaginary target.
    pub fn change_t(&self) -> Tc {
        Tc { target: Target::Imaginary, ..self.clone() }
    }

    /// Decides the edge of `plan` on this configuration.
    pub fn transition(&self, plan: &StepPlan, target: TargetSpec, branch: Branch) -> Outcome<Tc> {
        debug_assert_eq!(self.rows.len(), plan.width());
        let s = plan.locals();
        let t = s + 1;
        let mut star = Star::new(s + 2);
        star.adj[s] |= self.reached | plan.new_seeds;
        for p in bits(low_mask(plan.width()) & !self.reached) {
            star.adj[p] |= self.rows[p];
            if (self.to_target >> p) & 1 == 1 {
                star.edge(p, t);
            }
        }
        if let Some(l) = target.local {
            star.edge(l, t);
            star.edge(t, l);
        }
        if branch == Branch::Hi {
            star.edge(plan.tail, plan.head);
        }
        star.close();

        if star.reaches(s, t) {
            return Outcome::Top;
        }
        let mut reached = 0;
        let mut to_target = 0;
        for (q, &l) in plan.after.iter().enumerate() {
            reached |= (star.adj[s] >> l & 1) << q;
            to_target |= (star.adj[l as usize] >> t & 1) << q;
        }
        if (plan.seeds_done() && reached == 0) || (target.done && to_target == 0) {
            return Outcome::Bottom;
        }
        let keep = low_mask(plan.width_after()) & !(reached | to_target);
        let rows = plan
            .after
            .iter()
            .enumerate()
            .map(|(q, &l)| if (keep >> q) & 1 == 1 { plan.compress(star.adj[l as usize]) & keep } else { 0 })
            .collect();
        Outcome::Live(Tc { target: self.target, reached, to_target, rows })
    }

    /// Dense 0/1 view: rows `S` then positions, columns positions then target.
    /// Absent rows and columns are reported as `None`.
    pub fn matrix(&self) -> Vec<Vec<Option<bool>>> {
        let w = self.width();
        let mut out = vec![vec![None; w + 1]; w + 1];
        for c in 0..w {
            if (self.to_target >> c) & 1 == 0 {
                out[0][c] = Some((self.reached >> c) & 1 == 1);
            }
        }
        out[0][w] = Some(false);
        for r in 0..w {
            if (self.reached >> r) & 1 == 1 {
                continue;
            }
            for c in 0..w {
                if (self.to_target >> c) & 1 == 0 {
                    out[r + 1][c] = Some((self.rows[r] >> c) & 1 == 1);
                }
            }
            out[r + 1][w] = Some((self.to_target >> r) & 1 == 1);
        }
        out
    }
}

impl Encode for Tc {
    fn encode(&self) -> Vec<u8> {
        let w = self.width();
        let mut out = Vec::with_capacity(20 + (w * w).div_ceil(8));
        out.push(b'C');
        out.push(w as u8);
        match self.target {
            Target::Vertex(v) => {
                out.push(0);
                out.extend_from_slice(&v.to_le_bytes());
            }
            Target::Imaginary => out.push(1),
        }
        out.extend_from_slice(&self.reached.to_le_bytes());
        out.extend_from_slice(&self.to_target.to_le_bytes());
        encode_rows(&mut out, w, &self.rows);
        out
    }
}
