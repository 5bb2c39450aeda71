//! Per-target baseline: one TC diagram for a fixed `(S, v)` followed by a
//! top-down sweep that accumulates the probability mass reaching `Top`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::error::SpreadError;
use crate::graph::{SeedSet, UncertainDigraph, VertexId};
use crate::intern::Interner;
use crate::ordering::EdgeOrdering;
use crate::state::{Branch, Encode, Outcome, Sweep, Target, Tc, MAX_FRONTIER};

/// Successor of a diagram node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Link {
    Top,
    Bottom,
    /// Index into the next level.
    Next(u32),
}

impl Link {
    fn from_index(outcome: Outcome<u32>) -> Self {
        match outcome {
            Outcome::Top => Link::Top,
            Outcome::Bottom => Link::Bottom,
            Outcome::Live(i) => Link::Next(i),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TcNode {
    pub state: Tc,
    /// Successors, indexed by [`Branch::index`].
    pub links: [Link; 2],
}

/// Hash-consed TC diagram. `levels[k]` holds the live configurations after
/// `k` decided edges; pruned configurations are not stored.
#[derive(Clone, Debug)]
pub struct TcDiagram {
    pub target: VertexId,
    pub levels: Vec<Vec<TcNode>>,
    /// Edge probability at each position of the ordering.
    pub probs: Vec<f64>,
}

impl TcDiagram {
    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.len()).collect()
    }

    pub fn peak_states(&self) -> usize {
        self.levels.iter().map(|l| l.len()).max().unwrap_or(0)
    }

    pub fn total_states(&self) -> usize {
        self.levels.iter().map(|l| l.len()).sum()
    }

    /// Text dump, one line per state: `level kind encoding lo hi`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (k, level) in self.levels.iter().enumerate() {
            for node in level {
                dump_line(&mut out, k, "tc", &node.state.encode(), node.links);
            }
        }
        out
    }
}

pub(crate) fn dump_line(out: &mut String, level: usize, kind: &str, encoding: &[u8], links: [Link; 2]) {
    let _ = write!(out, "{level} {kind} ");
    for b in encoding {
        let _ = write!(out, "{b:02x}");
    }
    for l in links {
        let _ = match l {
            Link::Top => write!(out, " T"),
            Link::Bottom => write!(out, " B"),
            Link::Next(i) => write!(out, " {}:{i}", level + 1),
        };
    }
    out.push('\n');
}

/// Builds the TC diagram for target `v`.
pub fn build_tc_diagram(
    g: &UncertainDigraph,
    ordering: &EdgeOrdering,
    seeds: &SeedSet,
    v: VertexId,
) -> Result<TcDiagram, SpreadError> {
    if seeds.contains(v) {
        return Err(SpreadError::TargetIsSeed(v));
    }
    if ordering.omega() > MAX_FRONTIER {
        return Err(SpreadError::WidthExceeded { omega: ordering.omega(), max: MAX_FRONTIER });
    }
    let sweep = Sweep::new(g, ordering, seeds);
    let m = sweep.m();
    let mut levels: Vec<Vec<TcNode>> = Vec::with_capacity(m + 1);
    let mut current = vec![Tc::root(Target::Vertex(v))];
    let mut probs = Vec::with_capacity(m);
    for k in 0..m {
        let plan = sweep.plan(k);
        let spec = sweep.target(&plan, v);
        probs.push(plan.p);
        let mut next = Interner::new();
        let mut nodes = Vec::with_capacity(current.len());
        for state in current {
            let mut links = [Link::Bottom; 2];
            for branch in Branch::BOTH {
                links[branch.index()] = match state.transition(&plan, spec, branch) {
                    Outcome::Top => Link::Top,
                    Outcome::Bottom => Link::Bottom,
                    Outcome::Live(t) => Link::from_index(Outcome::Live(next.intern(t))),
                };
            }
            nodes.push(TcNode { state, links });
        }
        levels.push(nodes);
        current = next.into_items();
    }
    debug_assert!(m == 0 || current.is_empty(), "every configuration is pruned once all edges are decided");
    levels.push(current.into_iter().map(|state| TcNode { state, links: [Link::Bottom; 2] }).collect());
    Ok(TcDiagram { target: v, levels, probs })
}

/// Probabilities of every stored configuration plus the mass absorbed by
/// the sentinels.
#[derive(Clone, Debug)]
pub struct TopDown {
    pub p: Vec<Vec<f64>>,
    pub top: f64,
    pub bottom: f64,
    /// `Σ p[k] + mass absorbed before level k`, which should equal 1.
    pub mass_by_level: Vec<f64>,
}

impl TopDown {
    /// `P(S ⇝ v)`.
    pub fn probability(&self) -> f64 {
        self.top
    }
}

pub fn top_down_dp(d: &TcDiagram) -> TopDown {
    let mut p: Vec<Vec<f64>> = d.levels.iter().map(|l| vec![0.0; l.len()]).collect();
    if let Some(root) = p.first_mut().and_then(|l| l.first_mut()) {
        *root = 1.0;
    }
    let (mut top, mut bottom) = (0.0, 0.0);
    let mut mass_by_level = Vec::with_capacity(d.levels.len());
    for (k, level) in d.levels.iter().enumerate() {
        mass_by_level.push(p[k].iter().sum::<f64>() + top + bottom);
        if k == d.probs.len() {
            break;
        }
        let pe = d.probs[k];
        for (i, node) in level.iter().enumerate() {
            let mass = p[k][i];
            for branch in Branch::BOTH {
                let share = branch.weight(pe) * mass;
                match node.links[branch.index()] {
                    Link::Top => top += share,
                    Link::Bottom => bottom += share,
                    Link::Next(j) => p[k + 1][j as usize] += share,
                }
            }
        }
    }
    TopDown { p, top, bottom, mass_by_level }
}

/// `P(S ⇝ v)` by the per-target algorithm.
pub fn single_target_probability(
    g: &UncertainDigraph,
    ordering: &EdgeOrdering,
    seeds: &SeedSet,
    v: VertexId,
) -> Result<f64, SpreadError> {
    Ok(top_down_dp(&build_tc_diagram(g, ordering, seeds, v)?).probability())
}
