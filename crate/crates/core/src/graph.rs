//! Directed uncertain graphs, seed sets and spread aggregation.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::GraphError;

pub type VertexId = u32;

/// A directed edge present independently with probability `p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub tail: VertexId,
    pub head: VertexId,
    pub p: f64,
}

impl Edge {
    pub fn new(tail: VertexId, head: VertexId, p: f64) -> Self {
        Edge { tail, head, p }
    }

    pub fn touches(&self, v: VertexId) -> bool {
        self.tail == v || self.head == v
    }

    /// The endpoint opposite to `v`.
    pub fn other(&self, v: VertexId) -> VertexId {
        if self.tail == v {
            self.head
        } else {
            self.tail
        }
    }
}

/// Directed graph on dense vertex ids `0..n` whose edges are independently
/// present. Parallel edges are kept as distinct edges; self-loops are not
/// allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct UncertainDigraph {
    n: usize,
    edges: Vec<Edge>,
}

impl UncertainDigraph {
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self, GraphError> {
        for (index, e) in edges.iter().enumerate() {
            for v in [e.tail, e.head] {
                if v as usize >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: v as usize, n });
                }
            }
            if e.tail == e.head {
                return Err(GraphError::SelfLoop { index, vertex: e.tail });
            }
            if !(0.0..=1.0).contains(&e.p) {
                return Err(GraphError::ProbabilityOutOfRange { index, p: e.p });
            }
        }
        Ok(UncertainDigraph { n, edges })
    }

    /// Like [`UncertainDigraph::new`] but silently drops self-loops, which
    /// never affect reachability. Returns the graph and the number of loops
    /// removed.
    pub fn with_self_loops_removed(n: usize, mut edges: Vec<Edge>) -> Result<(Self, usize), GraphError> {
        let before = edges.len();
        edges.retain(|e| e.tail != e.head);
        let dropped = before - edges.len();
        Ok((Self::new(n, edges)?, dropped))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> &Edge {
        &self.edges[index]
    }

    /// Number of incident edges per vertex (in plus out, parallel edges counted).
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n];
        for e in &self.edges {
            deg[e.tail as usize] += 1;
            deg[e.head as usize] += 1;
        }
        deg
    }

    /// Copy of the graph without edges of probability zero.
    pub fn without_impossible_edges(&self) -> Self {
        UncertainDigraph {
            n: self.n,
            edges: self.edges.iter().copied().filter(|e| e.p > 0.0).collect(),
        }
    }

    /// Weakly connected components, each sorted by vertex id, ordered by
    /// their minimum vertex.
    pub fn underlying_components(&self) -> Vec<Vec<VertexId>> {
        let mut uf = UnionFind::new(self.n);
        for e in &self.edges {
            uf.union(e.tail as usize, e.head as usize);
        }
        let mut index_of_root = vec![usize::MAX; self.n];
        let mut comps: Vec<Vec<VertexId>> = Vec::new();
        for v in 0..self.n {
            let r = uf.find(v);
            if index_of_root[r] == usize::MAX {
                index_of_root[r] = comps.len();
                comps.push(Vec::new());
            }
            comps[index_of_root[r]].push(v as VertexId);
        }
        comps
    }

    /// Vertices reachable from `sources` using only edges for which
    /// `present(edge_index)` holds.
    pub fn reachable_from<F>(&self, sources: &[VertexId], present: F) -> Vec<bool>
    where
        F: Fn(usize) -> bool,
    {
        let mut out: Vec<Vec<(usize, VertexId)>> = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            out[e.tail as usize].push((i, e.head));
        }
        let mut seen = vec![false; self.n];
        let mut stack: Vec<VertexId> = Vec::new();
        for &s in sources {
            if !seen[s as usize] {
                seen[s as usize] = true;
                stack.push(s);
            }
        }
        while let Some(u) = stack.pop() {
            for &(i, w) in &out[u as usize] {
                if !seen[w as usize] && present(i) {
                    seen[w as usize] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Non-empty set of seed vertices, kept sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeedSet {
    members: Vec<VertexId>,
}

impl SeedSet {
    pub fn new<I: IntoIterator<Item = VertexId>>(members: I, n: usize) -> Result<Self, GraphError> {
        let mut members: Vec<VertexId> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return Err(GraphError::EmptySeedSet);
        }
        if let Some(&v) = members.iter().find(|&&v| v as usize >= n) {
            return Err(GraphError::VertexOutOfRange { vertex: v as usize, n });
        }
        Ok(SeedSet { members })
    }

    pub fn members(&self) -> &[VertexId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &s in &self.members {
            m[s as usize] = true;
        }
        m
    }
}

/// Per-vertex reachability probabilities and the influence spread.
#[derive(Clone, Debug, PartialEq)]
pub struct SpreadResult {
    /// `P(S ⇝ v)` for every non-seed vertex.
    pub probs: BTreeMap<VertexId, f64>,
    /// Expected number of non-seed vertices reached.
    pub sigma: f64,
    /// `sigma + |S|`.
    pub sigma_with_seeds: f64,
}

/// Sums per-vertex probabilities into a [`SpreadResult`]. Seeds are skipped
/// even if present in `per_vertex`; every non-seed vertex must be present.
pub fn assemble_spread(
    n: usize,
    per_vertex: &BTreeMap<VertexId, f64>,
    seeds: &SeedSet,
) -> Result<SpreadResult, GraphError> {
    let mut probs = BTreeMap::new();
    let mut sigma = 0.0;
    for v in 0..n as VertexId {
        if seeds.contains(v) {
            continue;
        }
        let p = *per_vertex.get(&v).ok_or(GraphError::MissingVertex(v))?;
        sigma += p;
        probs.insert(v, p);
    }
    Ok(SpreadResult { probs, sigma, sigma_with_seeds: sigma + seeds.len() as f64 })
}

/// One weakly connected piece of a graph with locally re-indexed vertices.
#[derive(Clone, Debug)]
pub struct Component {
    pub graph: UncertainDigraph,
    pub seeds: SeedSet,
    /// Local vertex id to global vertex id.
    pub vertices: Vec<VertexId>,
    /// Local edge index to global edge index.
    pub edge_ids: Vec<usize>,
}

/// Result of [`split_components`].
#[derive(Clone, Debug, Default)]
pub struct ComponentSplit {
    /// Components that contain at least one seed and at least one edge.
    pub components: Vec<Component>,
    /// Non-seed vertices that no seed can ever reach (their component holds no seed).
    pub unreachable: Vec<VertexId>,
}

/// Partitions `g` by weak connectivity. Components without a seed are not
/// returned; their vertices are listed in `unreachable`. Components that are
/// a lone seed vertex are dropped entirely.
pub fn split_components(g: &UncertainDigraph, seeds: &SeedSet) -> ComponentSplit {
    let comps = g.underlying_components();
    let mut comp_of = vec![0usize; g.n()];
    let mut local_of = vec![0 as VertexId; g.n()];
    for (ci, c) in comps.iter().enumerate() {
        for (li, &v) in c.iter().enumerate() {
            comp_of[v as usize] = ci;
            local_of[v as usize] = li as VertexId;
        }
    }
    let mut edges: Vec<Vec<(usize, Edge)>> = vec![Vec::new(); comps.len()];
    for (i, e) in g.edges().iter().enumerate() {
        let ci = comp_of[e.tail as usize];
        edges[ci].push((i, Edge::new(local_of[e.tail as usize], local_of[e.head as usize], e.p)));
    }

    let mut split = ComponentSplit::default();
    for (ci, c) in comps.into_iter().enumerate() {
        let local_seeds: Vec<VertexId> =
            c.iter().filter(|&&v| seeds.contains(v)).map(|&v| local_of[v as usize]).collect();
        if local_seeds.is_empty() {
            split.unreachable.extend(c.iter().copied());
            continue;
        }
        if edges[ci].is_empty() {
            continue;
        }
        let (edge_ids, local_edges): (Vec<usize>, Vec<Edge>) = edges[ci].drain(..).unzip();
        let graph = UncertainDigraph { n: c.len(), edges: local_edges };
        let seeds = SeedSet { members: local_seeds };
        split.components.push(Component { graph, seeds, vertices: c, edge_ids });
    }
    split
}
