use alloc::vec;
use alloc::vec::Vec;

use super::{bits, Branch, Mask, Outcome, StepPlan, NO_POSITION};
use crate::state::Stc;

/// Strongly connected components of the graph an STC induces on its
/// unreached frontier positions. Components are ranked by their smallest
/// position (equivalently, smallest vertex id).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccPartition {
    of: Vec<u8>,
    members: Vec<Mask>,
}

impl SccPartition {
    pub fn of(psi: &Stc) -> Self {
        let mut comps = tarjan(psi.rows(), psi.unreached());
        comps.sort_unstable_by_key(|m| m.trailing_zeros());
        let mut of = vec![NO_POSITION; psi.width()];
        for (i, &m) in comps.iter().enumerate() {
            for p in bits(m) {
                of[p] = i as u8;
            }
        }
        SccPartition { of, members: comps }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Mask] {
        &self.members
    }

    /// Component index of frontier position `p`, `None` if `p` is reached.
    pub fn component_of(&self, p: usize) -> Option<usize> {
        match self.of[p] {
            NO_POSITION => None,
            c => Some(c as usize),
        }
    }
}

/// Tarjan's algorithm over bit-row adjacency restricted to `vertices`.
fn tarjan(rows: &[Mask], vertices: Mask) -> Vec<Mask> {
    struct State<'r> {
        rows: &'r [Mask],
        vertices: Mask,
        index: [u8; 64],
        low: [u8; 64],
        next: u8,
        stack: Vec<usize>,
        on_stack: Mask,
        visited: Mask,
        out: Vec<Mask>,
    }

    fn visit(st: &mut State, v: usize) {
        st.index[v] = st.next;
        st.low[v] = st.next;
        st.next += 1;
        st.visited |= 1 << v;
        st.stack.push(v);
        st.on_stack |= 1 << v;
        for w in bits(st.rows[v] & st.vertices & !(1 << v)) {
            if (st.visited >> w) & 1 == 0 {
                visit(st, w);
                st.low[v] = st.low[v].min(st.low[w]);
            } else if (st.on_stack >> w) & 1 == 1 {
                st.low[v] = st.low[v].min(st.index[w]);
            }
        }
        if st.low[v] == st.index[v] {
            let mut comp = 0;
            while let Some(w) = st.stack.pop() {
                st.on_stack &= !(1 << w);
                comp |= 1 << w;
                if w == v {
                    break;
                }
            }
            st.out.push(comp);
        }
    }

    let mut st = State {
        rows,
        vertices,
        index: [0; 64],
        low: [0; 64],
        next: 0,
        stack: Vec::new(),
        on_stack: 0,
        visited: 0,
        out: Vec::new(),
    };
    for v in bits(vertices) {
        if (st.visited >> v) & 1 == 0 {
            visit(&mut st, v);
        }
    }
    st.out
}

/// Where an SCC goes when the current edge is decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Successor {
    /// The seeds now reach the component.
    Top,
    /// Nothing can reach the component any more.
    Bottom,
    /// Index of the component in the successor STC's partition.
    Scc(usize),
    /// No member survives on the next frontier; the TC route must be taken.
    Vanishes,
}

/// Successive SCC of component `members` of `psi` under `branch`, given the
/// already computed successor state `next` and its partition.
pub fn successive_scc(
    psi: &Stc,
    members: Mask,
    plan: &StepPlan,
    branch: Branch,
    next: &Outcome<Stc>,
    next_sccs: Option<&SccPartition>,
) -> Successor {
    if branch == Branch::Hi {
        let tail_reached = plan.tail_is_seed || (plan.tail < plan.width() && psi.is_reached(plan.tail));
        if tail_reached && plan.head_position().is_some_and(|h| (members >> h) & 1 == 1) {
            return Successor::Top;
        }
    }
    let next = match next {
        Outcome::Bottom => return Successor::Bottom,
        Outcome::Top => unreachable!("STC transitions never yield Top"),
        Outcome::Live(n) => n,
    };
    match bits(members).find_map(|p| plan.carried(p)) {
        Some(q) if next.is_reached(q) => Successor::Top,
        Some(q) => {
            let sccs = next_sccs.expect("partition of the successor STC");
            Successor::Scc(sccs.component_of(q).expect("unreached position has a component"))
        }
        None => Successor::Vanishes,
    }
}
