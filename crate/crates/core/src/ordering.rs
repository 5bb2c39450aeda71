//! Edge orderings and the frontier bookkeeping derived from them.
//!
//! Levels are numbered `0..=m`: level `k` is the state of the sweep after the
//! first `k` edges of the order have been decided. The frontier `W_k` holds
//! the vertices incident both to a decided edge and to an undecided one, so
//! `W_0` and `W_m` are empty.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::OrderingError;
use crate::graph::{SeedSet, UncertainDigraph, VertexId};

/// Sequence of bags `X_1..X_r` of a path decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathDecomposition {
    bags: Vec<Vec<VertexId>>,
}

impl PathDecomposition {
    pub fn new(bags: Vec<Vec<VertexId>>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        PathDecomposition { bags }
    }

    pub fn bags(&self) -> &[Vec<VertexId>] {
        &self.bags
    }

    /// Largest bag size minus one.
    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(1).saturating_sub(1)
    }

    /// Restricts every bag to the vertices kept by `map` (global id to
    /// `Some(local id)`), dropping bags that become empty.
    pub fn restrict<F>(&self, map: F) -> Self
    where
        F: Fn(VertexId) -> Option<VertexId>,
    {
        PathDecomposition::new(
            self.bags
                .iter()
                .map(|b| b.iter().filter_map(|&v| map(v)).collect::<Vec<_>>())
                .filter(|b| !b.is_empty())
                .collect(),
        )
    }

    /// Checks the decomposition against `g` and returns the run `[first, last]`
    /// of bag indices for every vertex.
    pub fn validate(&self, g: &UncertainDigraph) -> Result<Vec<(usize, usize)>, OrderingError> {
        let n = g.n();
        let mut run: Vec<Option<(usize, usize)>> = vec![None; n];
        for (bi, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v as usize >= n {
                    return Err(OrderingError::BagVertexOutOfRange { vertex: v as usize, n });
                }
                run[v as usize] = match run[v as usize] {
                    None => Some((bi, bi)),
                    Some((first, last)) if last + 1 == bi => Some((first, bi)),
                    Some(_) => return Err(OrderingError::NonContiguous { vertex: v, bag: bi }),
                };
            }
        }
        let runs: Vec<(usize, usize)> = run
            .into_iter()
            .enumerate()
            .map(|(v, r)| r.ok_or(OrderingError::VertexNotCovered(v as VertexId)))
            .collect::<Result<_, _>>()?;
        for (index, e) in g.edges().iter().enumerate() {
            let (a, b) = (runs[e.tail as usize], runs[e.head as usize]);
            if a.0.max(b.0) > a.1.min(b.1) {
                return Err(OrderingError::EdgeNotCovered { index, tail: e.tail, head: e.head });
            }
        }
        Ok(runs)
    }
}

/// An edge permutation plus every frontier it induces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeOrdering {
    order: Vec<usize>,
    frontiers: Vec<Vec<VertexId>>,
    first_touch: Vec<Option<usize>>,
    last_touch: Vec<Option<usize>>,
    omega: usize,
}

impl EdgeOrdering {
    /// Edge indices (into the graph's edge list) in processing order.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn m(&self) -> usize {
        self.order.len()
    }

    /// Frontier `W_k`, sorted by vertex id, for `k` in `0..=m`.
    pub fn frontier(&self, level: usize) -> &[VertexId] {
        &self.frontiers[level]
    }

    pub fn frontiers(&self) -> &[Vec<VertexId>] {
        &self.frontiers
    }

    /// Maximum frontier size.
    pub fn omega(&self) -> usize {
        self.omega
    }

    /// Position of the first edge incident to `v`.
    pub fn first_touch(&self, v: VertexId) -> Option<usize> {
        self.first_touch[v as usize]
    }

    /// Position of the last edge incident to `v`.
    pub fn last_touch(&self, v: VertexId) -> Option<usize> {
        self.last_touch[v as usize]
    }

    /// First level at which `v` is on the frontier.
    pub fn introduced_at(&self, v: VertexId) -> Option<usize> {
        match (self.first_touch(v), self.last_touch(v)) {
            (Some(f), Some(l)) if f < l => Some(f + 1),
            _ => None,
        }
    }

    /// Last level at which `v` is on the frontier.
    pub fn retired_at(&self, v: VertexId) -> Option<usize> {
        self.introduced_at(v).and(self.last_touch(v))
    }

    /// Position of the last edge touching any seed; `None` if no seed has an edge.
    pub fn last_seed_touch(&self, seeds: &SeedSet) -> Option<usize> {
        seeds.members().iter().filter_map(|&s| self.last_touch(s)).max()
    }

    pub fn on_frontier(&self, level: usize, v: VertexId) -> bool {
        self.frontiers[level].binary_search(&v).is_ok()
    }
}

/// Builds an [`EdgeOrdering`] from a permutation of `g`'s edge indices.
pub fn compute_frontiers(g: &UncertainDigraph, order: Vec<usize>) -> Result<EdgeOrdering, OrderingError> {
    let m = g.m();
    if order.len() != m {
        return Err(OrderingError::WrongLength { got: order.len(), expected: m });
    }
    let mut used = vec![false; m];
    for &e in &order {
        if e >= m || used[e] {
            return Err(OrderingError::NotAPermutation(e));
        }
        used[e] = true;
    }

    let mut first_touch = vec![None; g.n()];
    let mut last_touch = vec![None; g.n()];
    for (pos, &ei) in order.iter().enumerate() {
        let e = g.edge(ei);
        for v in [e.tail, e.head] {
            first_touch[v as usize].get_or_insert(pos);
            last_touch[v as usize] = Some(pos);
        }
    }

    let mut frontiers = Vec::with_capacity(m + 1);
    frontiers.push(Vec::new());
    let mut omega = 0;
    for (pos, &ei) in order.iter().enumerate() {
        let e = g.edge(ei);
        let prev: &Vec<VertexId> = &frontiers[pos];
        let mut next: Vec<VertexId> =
            prev.iter().copied().filter(|&v| last_touch[v as usize] != Some(pos)).collect();
        for v in [e.tail, e.head] {
            if first_touch[v as usize] == Some(pos) && last_touch[v as usize] > Some(pos) {
                if let Err(at) = next.binary_search(&v) {
                    next.insert(at, v);
                }
            }
        }
        omega = omega.max(next.len());
        frontiers.push(next);
    }

    Ok(EdgeOrdering { order, frontiers, first_touch, last_touch, omega })
}

/// Orders edges by the first bag containing both endpoints, ties by input
/// order. The resulting frontier width is at most the decomposition width + 1.
pub fn ordering_from_decomposition(
    g: &UncertainDigraph,
    pd: &PathDecomposition,
) -> Result<EdgeOrdering, OrderingError> {
    let runs = pd.validate(g)?;
    let mut keyed: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| (runs[e.tail as usize].0.max(runs[e.head as usize].0), i))
        .collect();
    keyed.sort_by_key(|&(bag, i)| (bag, i));
    compute_frontiers(g, keyed.into_iter().map(|(_, i)| i).collect())
}

/// BFS over the underlying undirected graph starting at a minimum-degree
/// vertex; each dequeued vertex emits its not-yet-emitted incident edges in
/// input order. Components are visited one after another.
pub fn heuristic_ordering(g: &UncertainDigraph) -> EdgeOrdering {
    let n = g.n();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in g.edges().iter().enumerate() {
        incident[e.tail as usize].push(i);
        incident[e.head as usize].push(i);
    }
    let mut by_degree: Vec<usize> = (0..n).filter(|&v| !incident[v].is_empty()).collect();
    by_degree.sort_by_key(|&v| (incident[v].len(), v));

    let mut visited = vec![false; n];
    let mut emitted = vec![false; g.m()];
    let mut order = Vec::with_capacity(g.m());
    let mut queue = VecDeque::new();
    for start in by_degree {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for &ei in &incident[u] {
                if !emitted[ei] {
                    emitted[ei] = true;
                    order.push(ei);
                }
                let w = g.edge(ei).other(u as VertexId) as usize;
                if !visited[w] {
                    visited[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    compute_frontiers(g, order).expect("BFS emits every edge exactly once")
}
