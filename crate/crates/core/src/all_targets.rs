//! All targets at once: a shared STC diagram whose SCC links either stay in
//! the STC diagram or drop into one TC diagram for a retired, imaginary
//! target. Three passes over it (P top-down, Q and R bottom-up) give
//! `P(S ⇝ v)` for every vertex on the frontier at some level; pendant
//! vertices are settled afterwards from their single neighbour.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::SpreadError;
use crate::graph::{SeedSet, UncertainDigraph, VertexId};
use crate::intern::Interner;
use crate::ordering::EdgeOrdering;
use crate::single::{dump_line, Link, TcNode};
use crate::state::{
    successive_scc, Branch, Encode, Outcome, SccPartition, Stc, Successor, Sweep, TargetSpec, Tc, MAX_FRONTIER,
};

/// Where an SCC of an STC goes once the current edge is decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SccLink {
    Top,
    Bottom,
    /// Component `scc` of STC `state` on the next level.
    Scc { state: u32, scc: u32 },
    /// TC `index` on the next level of the imaginary-target diagram.
    Tc(u32),
}

#[derive(Clone, Debug)]
pub struct StcNode {
    pub state: Stc,
    pub links: [Link; 2],
    pub sccs: SccPartition,
    /// Per SCC, successors indexed by [`Branch::index`].
    pub scc_links: Vec<[SccLink; 2]>,
    /// Offset of this node's SCCs in the flat per-level R table.
    pub scc_base: u32,
}

#[derive(Clone, Debug)]
pub struct SharedDiagrams {
    /// `stc[k]`: live STCs after `k` decided edges.
    pub stc: Vec<Vec<StcNode>>,
    /// `tc[k]`: live TCs of the imaginary target after `k` decided edges.
    pub tc: Vec<Vec<TcNode>>,
    /// Edge probability at each position of the ordering.
    pub probs: Vec<f64>,
}

impl SharedDiagrams {
    pub fn stc_level_sizes(&self) -> Vec<usize> {
        self.stc.iter().map(|l| l.len()).collect()
    }

    pub fn tc_level_sizes(&self) -> Vec<usize> {
        self.tc.iter().map(|l| l.len()).collect()
    }

    pub fn peak_stc_states(&self) -> usize {
        self.stc.iter().map(|l| l.len()).max().unwrap_or(0)
    }

    pub fn peak_tc_states(&self) -> usize {
        self.tc.iter().map(|l| l.len()).max().unwrap_or(0)
    }

    pub fn total_states(&self) -> usize {
        self.stc.iter().map(|l| l.len()).sum::<usize>() + self.tc.iter().map(|l| l.len()).sum::<usize>()
    }

    fn scc_count(&self, k: usize) -> usize {
        self.stc[k].last().map_or(0, |n| n.scc_base as usize + n.sccs.len())
    }

    /// Text dump, one line per state: `level kind encoding lo hi`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for k in 0..self.stc.len() {
            for node in &self.stc[k] {
                dump_line(&mut out, k, "stc", &node.state.encode(), node.links);
            }
            for node in &self.tc[k] {
                dump_line(&mut out, k, "tc", &node.state.encode(), node.links);
            }
        }
        out
    }
}

/// Interns next-level STCs and keeps the SCC partition of each.
struct NextStcs {
    states: Interner<Stc>,
    sccs: Vec<SccPartition>,
}

impl NextStcs {
    fn intern(&mut self, psi: &Stc) -> u32 {
        let i = self.states.intern(psi.clone());
        if i as usize == self.sccs.len() {
            self.sccs.push(psi.sccs());
        }
        i
    }
}

pub fn build_shared_diagrams(
    g: &UncertainDigraph,
    ordering: &EdgeOrdering,
    seeds: &SeedSet,
) -> Result<SharedDiagrams, SpreadError> {
    if ordering.omega() > MAX_FRONTIER {
        return Err(SpreadError::WidthExceeded { omega: ordering.omega(), max: MAX_FRONTIER });
    }
    let sweep = Sweep::new(g, ordering, seeds);
    let m = sweep.m();
    let mut stc_levels: Vec<Vec<StcNode>> = Vec::with_capacity(m + 1);
    let mut tc_levels: Vec<Vec<TcNode>> = Vec::with_capacity(m + 1);
    let mut probs = Vec::with_capacity(m);

    let root = Stc::root();
    if m == 0 {
        // Nothing to decide: the root is the whole diagram.
        let sccs = root.sccs();
        let node = StcNode { state: root, links: [Link::Bottom; 2], sccs, scc_links: Vec::new(), scc_base: 0 };
        return Ok(SharedDiagrams { stc: vec![vec![node]], tc: vec![Vec::new()], probs });
    }
    let mut current: Vec<(Stc, SccPartition)> = vec![(root.clone(), root.sccs())];
    let mut current_tc: Vec<Tc> = Vec::new();
    for k in 0..m {
        let plan = sweep.plan(k);
        let frontier = ordering.frontier(k);
        probs.push(plan.p);
        let mut next = NextStcs { states: Interner::new(), sccs: Vec::new() };
        let mut next_tc = Interner::new();

        let mut nodes = Vec::with_capacity(current.len());
        let mut scc_base = 0u32;
        for (psi, sccs) in current {
            let mut links = [Link::Bottom; 2];
            let mut scc_links = vec![[SccLink::Bottom; 2]; sccs.len()];
            for branch in Branch::BOTH {
                let outcome = psi.transition(&plan, branch);
                let next_index = match &outcome {
                    Outcome::Live(n) => Some(next.intern(n)),
                    Outcome::Bottom => None,
                    Outcome::Top => return Err(SpreadError::Internal("STC transition yielded Top")),
                };
                links[branch.index()] = next_index.map_or(Link::Bottom, Link::Next);
                let next_sccs = next_index.map(|i| &next.sccs[i as usize]);
                for (c, &members) in sccs.members().iter().enumerate() {
                    let link = match successive_scc(&psi, members, &plan, branch, &outcome, next_sccs) {
                        Successor::Top => SccLink::Top,
                        Successor::Bottom => SccLink::Bottom,
                        Successor::Scc(d) => SccLink::Scc {
                            state: next_index.ok_or(SpreadError::Internal("SCC link into a pruned STC"))?,
                            scc: d as u32,
                        },
                        Successor::Vanishes => {
                            // Positions follow vertex ids, so the lowest bit is the min-id member.
                            let pos = members.trailing_zeros() as usize;
                            let u = frontier[pos];
                            let phi = psi.recover_tc(pos, u);
                            match phi.transition(&plan, sweep.target(&plan, u), branch) {
                                Outcome::Top => SccLink::Top,
                                Outcome::Bottom => SccLink::Bottom,
                                Outcome::Live(t) => SccLink::Tc(next_tc.intern(t.change_t())),
                            }
                        }
                    };
                    scc_links[c][branch.index()] = link;
                }
            }
            let n_sccs = sccs.len() as u32;
            nodes.push(StcNode { state: psi, links, sccs, scc_links, scc_base });
            scc_base += n_sccs;
        }
        stc_levels.push(nodes);

        let mut tc_nodes = Vec::with_capacity(current_tc.len());
        for phi in current_tc {
            let mut links = [Link::Bottom; 2];
            for branch in Branch::BOTH {
                links[branch.index()] = match phi.transition(&plan, TargetSpec::IMAGINARY, branch) {
                    Outcome::Top => Link::Top,
                    Outcome::Bottom => Link::Bottom,
                    Outcome::Live(t) => Link::Next(next_tc.intern(t)),
                };
            }
            tc_nodes.push(TcNode { state: phi, links });
        }
        tc_levels.push(tc_nodes);

        current = next.states.into_items().into_iter().zip(next.sccs).collect();
        current_tc = next_tc.into_items();
    }
    if !current.is_empty() || !current_tc.is_empty() {
        return Err(SpreadError::Internal("live state after the last edge"));
    }
    stc_levels.push(Vec::new());
    tc_levels.push(Vec::new());
    Ok(SharedDiagrams { stc: stc_levels, tc: tc_levels, probs })
}

/// Probability of every stored STC.
#[derive(Clone, Debug)]
pub struct PTable {
    pub p: Vec<Vec<f64>>,
    /// Live mass plus pruned mass at each level; 1 up to rounding.
    pub mass_by_level: Vec<f64>,
}

pub fn run_p_dp(d: &SharedDiagrams) -> PTable {
    let mut p: Vec<Vec<f64>> = d.stc.iter().map(|l| vec![0.0; l.len()]).collect();
    if let Some(root) = p.first_mut().and_then(|l| l.first_mut()) {
        *root = 1.0;
    }
    let mut pruned = 0.0;
    let mut mass_by_level = Vec::with_capacity(d.stc.len());
    for k in 0..d.stc.len() {
        mass_by_level.push(p[k].iter().sum::<f64>() + pruned);
        if k == d.probs.len() {
            break;
        }
        let pe = d.probs[k];
        for (i, node) in d.stc[k].iter().enumerate() {
            let mass = p[k][i];
            for branch in Branch::BOTH {
                let share = branch.weight(pe) * mass;
                match node.links[branch.index()] {
                    Link::Next(j) => p[k + 1][j as usize] += share,
                    _ => pruned += share,
                }
            }
        }
    }
    PTable { p, mass_by_level }
}

/// `Q[k][i]`: probability that the seeds reach the imaginary target of TC
/// `i` on level `k`.
pub fn run_q_dp(d: &SharedDiagrams) -> Vec<Vec<f64>> {
    let mut q: Vec<Vec<f64>> = d.tc.iter().map(|l| vec![0.0; l.len()]).collect();
    for k in (0..d.probs.len()).rev() {
        let pe = d.probs[k];
        let (head, tail) = q.split_at_mut(k + 1);
        let below = &tail[0];
        for (i, node) in d.tc[k].iter().enumerate() {
            head[k][i] = Branch::BOTH
                .iter()
                .map(|&b| {
                    b.weight(pe)
                        * match node.links[b.index()] {
                            Link::Top => 1.0,
                            Link::Bottom => 0.0,
                            Link::Next(j) => below[j as usize],
                        }
                })
                .sum();
        }
    }
    q
}

/// `R[k][node.scc_base + c]`: probability that the seeds reach SCC `c` of
/// STC `node` on level `k`, given that STC.
pub fn run_r_dp(d: &SharedDiagrams, q: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut r: Vec<Vec<f64>> = (0..d.stc.len()).map(|k| vec![0.0; d.scc_count(k)]).collect();
    for k in (0..d.probs.len()).rev() {
        let pe = d.probs[k];
        let (head, tail) = r.split_at_mut(k + 1);
        let below = &tail[0];
        let next_level = &d.stc[k + 1];
        for node in &d.stc[k] {
            for (c, links) in node.scc_links.iter().enumerate() {
                head[k][node.scc_base as usize + c] = Branch::BOTH
                    .iter()
                    .map(|&b| {
                        b.weight(pe)
                            * match links[b.index()] {
                                SccLink::Top => 1.0,
                                SccLink::Bottom => 0.0,
                                SccLink::Tc(j) => q[k + 1][j as usize],
                                SccLink::Scc { state, scc } => {
                                    below[next_level[state as usize].scc_base as usize + scc as usize]
                                }
                            }
                    })
                    .sum();
            }
        }
    }
    r
}

/// `P(S ⇝ v)` for every non-seed vertex that is on some frontier; other
/// entries are left as `None`.
pub fn assemble_results(
    d: &SharedDiagrams,
    p: &PTable,
    r: &[Vec<f64>],
    ordering: &EdgeOrdering,
    seeds: &SeedSet,
    n: usize,
) -> Result<Vec<Option<f64>>, SpreadError> {
    let mut res = vec![None; n];
    for v in 0..n as VertexId {
        if seeds.contains(v) {
            continue;
        }
        let Some(k) = ordering.introduced_at(v) else { continue };
        let pos = ordering
            .frontier(k)
            .binary_search(&v)
            .map_err(|_| SpreadError::Internal("vertex missing from its first frontier"))?;
        let mut total = 0.0;
        for (i, node) in d.stc[k].iter().enumerate() {
            let cond = if node.state.is_reached(pos) {
                1.0
            } else {
                let c = node.sccs.component_of(pos).ok_or(SpreadError::Internal("unreached vertex without SCC"))?;
                r[k][node.scc_base as usize + c]
            };
            total += p.p[k][i] * cond;
        }
        res[v as usize] = Some(total);
    }
    Ok(res)
}

/// Fills in vertices that never sit on a frontier: isolated vertices and
/// those with a single incident edge.
pub fn fix_degree_one(g: &UncertainDigraph, seeds: &SeedSet, res: &mut [Option<f64>]) {
    let degree = g.degrees();
    let mut only_edge = vec![None; g.n()];
    for e in g.edges() {
        for v in [e.tail, e.head] {
            if degree[v as usize] == 1 {
                only_edge[v as usize] = Some(*e);
            }
        }
    }
    let prob_of = |w: VertexId, res: &[Option<f64>]| -> f64 {
        if seeds.contains(w) {
            1.0
        } else {
            res[w as usize].unwrap_or(0.0)
        }
    };
    for v in 0..g.n() as VertexId {
        if seeds.contains(v) || res[v as usize].is_some() {
            continue;
        }
        res[v as usize] = Some(match only_edge[v as usize] {
            Some(e) if e.head == v => e.p * prob_of(e.tail, res),
            _ => 0.0,
        });
    }
}

/// Everything one run of the shared algorithm produces.
#[derive(Clone, Debug)]
pub struct AllTargets {
    /// `P(S ⇝ v)` per vertex; seeds get 1.
    pub probs: Vec<f64>,
    pub omega: usize,
    pub stc_level_sizes: Vec<usize>,
    pub tc_level_sizes: Vec<usize>,
    pub mass_by_level: Vec<f64>,
}

impl AllTargets {
    pub fn peak_states(&self) -> usize {
        self.stc_level_sizes.iter().zip(&self.tc_level_sizes).map(|(a, b)| a + b).max().unwrap_or(0)
    }
}

/// Stages of [`all_targets_observed`], reported as each one starts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase {
    Diagrams,
    PForward,
    QBackward,
    RBackward,
    Assemble,
}

pub fn all_targets(g: &UncertainDigraph, ordering: &EdgeOrdering, seeds: &SeedSet) -> Result<AllTargets, SpreadError> {
    all_targets_observed(g, ordering, seeds, &mut |_| {})
}

/// [`all_targets`] with a callback invoked at the start of every phase.
pub fn all_targets_observed(
    g: &UncertainDigraph,
    ordering: &EdgeOrdering,
    seeds: &SeedSet,
    on_phase: &mut dyn FnMut(Phase),
) -> Result<AllTargets, SpreadError> {
    on_phase(Phase::Diagrams);
    let d = build_shared_diagrams(g, ordering, seeds)?;
    on_phase(Phase::PForward);
    let p = run_p_dp(&d);
    on_phase(Phase::QBackward);
    let q = run_q_dp(&d);
    on_phase(Phase::RBackward);
    let r = run_r_dp(&d, &q);
    on_phase(Phase::Assemble);
    let mut res = assemble_results(&d, &p, &r, ordering, seeds, g.n())?;
    fix_degree_one(g, seeds, &mut res);
    let probs = res
        .iter()
        .enumerate()
        .map(|(v, x)| if seeds.contains(v as VertexId) { 1.0 } else { x.unwrap_or(0.0) })
        .collect();
    Ok(AllTargets {
        probs,
        omega: ordering.omega(),
        stc_level_sizes: d.stc_level_sizes(),
        tc_level_sizes: d.tc_level_sizes(),
        mass_by_level: p.mass_by_level,
    })
}
