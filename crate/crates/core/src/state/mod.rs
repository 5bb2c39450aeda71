//! Frontier reachability states and their transitions.
//!
//! Every state is a small reachability matrix over frontier positions (the
//! frontier `W_k` sorted by vertex id), a seed sentinel `S`, and for
//! [`Tc`] a target sentinel. Transitions rebuild the auxiliary graph over
//! `W_k`, the endpoints of the current edge, `S` and the target, take its
//! transitive closure with word-parallel Warshall, and restrict the result to
//! `W_{k+1}`.
//!
//! Two kinds of bits are never stored because they cannot affect whether a
//! seed reaches anything new: reachability into frontier vertices that the
//! seeds already reach, and (for TCs) anything beyond the target bit in the
//! row of a vertex that already reaches the target.

mod scc;
mod stc;
mod tc;

pub use scc::{successive_scc, SccPartition, Successor};
pub use stc::Stc;
pub use tc::{Target, Tc};

use alloc::vec::Vec;

use crate::graph::{SeedSet, UncertainDigraph, VertexId};
use crate::ordering::EdgeOrdering;

/// Bit set over frontier positions.
pub type Mask = u64;

/// Largest frontier the fixed-width word rows can hold: the two endpoints of
/// the current edge, `S` and the target also need a bit.
pub const MAX_FRONTIER: usize = 60;

const MAX_NODES: usize = 64;
const NO_POSITION: u8 = u8::MAX;

/// Absence (`Lo`) or presence (`Hi`) of the edge being decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Lo,
    Hi,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Lo, Branch::Hi];

    /// Probability of taking this branch for an edge of probability `p`.
    pub fn weight(self, p: f64) -> f64 {
        match self {
            Branch::Lo => 1.0 - p,
            Branch::Hi => p,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Result of a transition: a live state or one of the two pruning sentinels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Outcome<T> {
    /// Reachability is certain from here on.
    Top,
    /// Reachability is impossible from here on.
    Bottom,
    Live(T),
}

impl<T> Outcome<T> {
    pub fn live(self) -> Option<T> {
        match self {
            Outcome::Live(t) => Some(t),
            _ => None,
        }
    }

    pub fn as_live(&self) -> Option<&T> {
        match self {
            Outcome::Live(t) => Some(t),
            _ => None,
        }
    }
}

/// Fixed encodings of the sentinels.
pub const TOP_ENCODING: [u8; 1] = *b"T";
pub const BOTTOM_ENCODING: [u8; 1] = *b"B";

/// Deterministic byte encoding of a state or sentinel; equal iff the states are equal.
pub fn canonical_encode<T: Encode>(state: &Outcome<T>) -> Vec<u8> {
    match state {
        Outcome::Top => TOP_ENCODING.to_vec(),
        Outcome::Bottom => BOTTOM_ENCODING.to_vec(),
        Outcome::Live(s) => s.encode(),
    }
}

pub trait Encode {
    fn encode(&self) -> Vec<u8>;
}

/// Everything about deciding edge `position` that does not depend on the
/// state being transformed. Built once per level and shared by all states.
#[derive(Clone, Debug)]
pub struct StepPlan<'a> {
    pub position: usize,
    pub p: f64,
    pub tail_vertex: VertexId,
    pub head_vertex: VertexId,
    before: &'a [VertexId],
    extras: [VertexId; 2],
    n_extras: usize,
    tail: usize,
    head: usize,
    tail_is_seed: bool,
    new_seeds: Mask,
    after: Vec<u8>,
    carry: Vec<u8>,
    seeds_done: bool,
}

impl<'a> StepPlan<'a> {
    /// Number of frontier positions before the step.
    pub fn width(&self) -> usize {
        self.before.len()
    }

    /// Number of frontier positions after the step.
    pub fn width_after(&self) -> usize {
        self.after.len()
    }

    fn locals(&self) -> usize {
        self.before.len() + self.n_extras
    }

    /// Auxiliary-graph node of `v` for this step: its frontier position, or
    /// a slot past the frontier for an endpoint entering at this step.
    pub fn local_of(&self, v: VertexId) -> Option<usize> {
        if let Ok(p) = self.before.binary_search(&v) {
            return Some(p);
        }
        self.extras[..self.n_extras].iter().position(|&x| x == v).map(|i| self.before.len() + i)
    }

    /// Position in `W_{k+1}` of the vertex at position `p` of `W_k`.
    pub fn carried(&self, p: usize) -> Option<usize> {
        match self.carry[p] {
            NO_POSITION => None,
            q => Some(q as usize),
        }
    }

    /// Whether the seeds have no undecided incident edges once this step is done.
    pub fn seeds_done(&self) -> bool {
        self.seeds_done
    }

    /// Frontier position of the edge's head, if it is on `W_k`.
    fn head_position(&self) -> Option<usize> {
        (self.head < self.before.len()).then_some(self.head)
    }

    /// Maps a mask over auxiliary nodes to a mask over `W_{k+1}` positions.
    fn compress(&self, nodes: Mask) -> Mask {
        self.after
            .iter()
            .enumerate()
            .fold(0, |acc, (q, &l)| acc | (((nodes >> l) & 1) << q))
    }
}

/// Per-sweep context: graph, ordering and seeds. Produces [`StepPlan`]s.
#[derive(Clone, Debug)]
pub struct Sweep<'a> {
    pub graph: &'a UncertainDigraph,
    pub ordering: &'a EdgeOrdering,
    pub seeds: &'a SeedSet,
    last_seed: Option<usize>,
}

impl<'a> Sweep<'a> {
    pub fn new(graph: &'a UncertainDigraph, ordering: &'a EdgeOrdering, seeds: &'a SeedSet) -> Self {
        Sweep { graph, ordering, seeds, last_seed: ordering.last_seed_touch(seeds) }
    }

    pub fn m(&self) -> usize {
        self.ordering.m()
    }

    pub fn plan(&self, position: usize) -> StepPlan<'a> {
        let e = self.graph.edge(self.ordering.order()[position]);
        let before = self.ordering.frontier(position);
        let after_vs = self.ordering.frontier(position + 1);
        let mut extras = [0; 2];
        let mut n_extras = 0;
        let mut slot = |v: VertexId| -> usize {
            match before.binary_search(&v) {
                Ok(p) => p,
                Err(_) => {
                    if let Some(i) = extras[..n_extras].iter().position(|&x| x == v) {
                        before.len() + i
                    } else {
                        extras[n_extras] = v;
                        n_extras += 1;
                        before.len() + n_extras - 1
                    }
                }
            }
        };
        let tail = slot(e.tail);
        let head = slot(e.head);
        let mut new_seeds = 0;
        for (i, &v) in extras[..n_extras].iter().enumerate() {
            if self.seeds.contains(v) {
                new_seeds |= 1 << (before.len() + i);
            }
        }
        let mut plan = StepPlan {
            position,
            p: e.p,
            tail_vertex: e.tail,
            head_vertex: e.head,
            before,
            extras,
            n_extras,
            tail,
            head,
            tail_is_seed: self.seeds.contains(e.tail),
            new_seeds,
            after: Vec::with_capacity(after_vs.len()),
            carry: Vec::with_capacity(before.len()),
            seeds_done: self.last_seed.is_none_or(|l| position >= l),
        };
        plan.after = after_vs
            .iter()
            .map(|&v| plan.local_of(v).expect("vertices entering the frontier are endpoints") as u8)
            .collect();
        plan.carry = before
            .iter()
            .map(|v| after_vs.binary_search(v).map_or(NO_POSITION, |q| q as u8))
            .collect();
        plan
    }

    /// Target description for a real vertex at this step.
    pub fn target(&self, plan: &StepPlan, v: VertexId) -> TargetSpec {
        TargetSpec {
            local: plan.local_of(v),
            done: self.ordering.last_touch(v).is_none_or(|l| plan.position >= l),
        }
    }
}

/// Where the target sits in a step's auxiliary graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TargetSpec {
    /// Auxiliary node of the target when it is on the frontier or an endpoint.
    pub local: Option<usize>,
    /// Whether the target has no undecided incident edges after this step.
    pub done: bool,
}

impl TargetSpec {
    /// The imaginary target of shared lower-level diagrams: already retired.
    pub const IMAGINARY: TargetSpec = TargetSpec { local: None, done: true };
}

/// Auxiliary reachability graph of one transition.
struct Star {
    adj: [Mask; MAX_NODES],
    nodes: usize,
}

impl Star {
    fn new(nodes: usize) -> Self {
        debug_assert!(nodes <= MAX_NODES);
        let mut adj = [0; MAX_NODES];
        for (x, row) in adj.iter_mut().enumerate().take(nodes) {
            *row = 1 << x;
        }
        Star { adj, nodes }
    }

    fn edge(&mut self, from: usize, to: usize) {
        self.adj[from] |= 1 << to;
    }

    fn reaches(&self, from: usize, to: usize) -> bool {
        (self.adj[from] >> to) & 1 == 1
    }

    fn close(&mut self) {
        let adj = &mut self.adj[..self.nodes];
        for k in 0..adj.len() {
            let row_k = adj[k];
            let bit = 1 << k;
            for row in adj.iter_mut() {
                if *row & bit != 0 {
                    *row |= row_k;
                }
            }
        }
    }
}

pub(crate) fn bits(mask: Mask) -> impl Iterator<Item = usize> {
    let mut m = mask;
    core::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

pub(crate) fn low_mask(width: usize) -> Mask {
    if width >= 64 {
        Mask::MAX
    } else {
        (1 << width) - 1
    }
}

pub(crate) fn encode_rows(out: &mut Vec<u8>, width: usize, rows: &[Mask]) {
    let mut acc = 0u8;
    let mut filled = 0;
    for &row in rows {
        for c in 0..width {
            acc |= (((row >> c) & 1) as u8) << filled;
            filled += 1;
            if filled == 8 {
                out.push(acc);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(acc);
    }
}

#[cfg(test)]
pub(crate) mod reference;
