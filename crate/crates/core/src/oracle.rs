//! Exhaustive ground truth: enumerate every edge subset, weigh it by its
//! probability and search reachability from the seeds on it.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::OracleError;
use crate::graph::{SeedSet, UncertainDigraph, VertexId};
use crate::ordering::EdgeOrdering;

/// Largest number of free edges an enumeration accepts.
pub const MAX_ENUMERATED_EDGES: usize = 24;

#[derive(Clone, Debug, PartialEq)]
pub struct OracleResult {
    /// `P(S ⇝ v)` per vertex; seeds get 1.
    pub probs: Vec<f64>,
    /// Sum over non-seed vertices.
    pub sigma: f64,
    pub subsets_evaluated: u64,
    /// Number of subsets in which each vertex is reached.
    pub contributing: Vec<u64>,
    /// Sum of all subset probabilities; 1 up to rounding.
    pub total_mass: f64,
}

/// Probability of every subset of `probs`, as a lookup split in two halves
/// so a subset's weight is one product of two table entries.
struct SubsetWeights {
    low_bits: usize,
    low: Vec<f64>,
    high: Vec<f64>,
}

impl SubsetWeights {
    fn new(probs: &[f64]) -> Self {
        let low_bits = probs.len() / 2;
        SubsetWeights { low_bits, low: table(&probs[..low_bits]), high: table(&probs[low_bits..]) }
    }

    fn weight(&self, subset: u64) -> f64 {
        let lo = subset & ((1 << self.low_bits) - 1);
        self.low[lo as usize] * self.high[(subset >> self.low_bits) as usize]
    }
}

/// Bit `j` of the index selects edge `j`: each new edge appends a block of
/// "present" weights above the "absent" ones.
fn table(probs: &[f64]) -> Vec<f64> {
    let mut t = vec![1.0];
    for &p in probs {
        let present: Vec<f64> = t.iter().map(|w| w * p).collect();
        t.iter_mut().for_each(|w| *w *= 1.0 - p);
        t.extend(present);
    }
    t
}

struct Searcher {
    out: Vec<Vec<(usize, VertexId)>>,
    seen: Vec<bool>,
    stack: Vec<VertexId>,
}

impl Searcher {
    fn new(g: &UncertainDigraph) -> Self {
        let mut out = vec![Vec::new(); g.n()];
        for (i, e) in g.edges().iter().enumerate() {
            out[e.tail as usize].push((i, e.head));
        }
        Searcher { out, seen: vec![false; g.n()], stack: Vec::new() }
    }

    fn run<F: Fn(usize) -> bool>(&mut self, sources: &[VertexId], present: F) -> &[bool] {
        self.seen.iter_mut().for_each(|s| *s = false);
        for &s in sources {
            if !self.seen[s as usize] {
                self.seen[s as usize] = true;
                self.stack.push(s);
            }
        }
        while let Some(u) = self.stack.pop() {
            for &(i, w) in &self.out[u as usize] {
                if !self.seen[w as usize] && present(i) {
                    self.seen[w as usize] = true;
                    self.stack.push(w);
                }
            }
        }
        &self.seen
    }
}

/// Enumerates all `2^m` edge subsets.
pub fn brute_force(g: &UncertainDigraph, seeds: &SeedSet) -> Result<OracleResult, OracleError> {
    let m = g.m();
    if m > MAX_ENUMERATED_EDGES {
        return Err(OracleError::TooManyEdges { edges: m, limit: MAX_ENUMERATED_EDGES });
    }
    let probs: Vec<f64> = g.edges().iter().map(|e| e.p).collect();
    let weights = SubsetWeights::new(&probs);
    let mut search = Searcher::new(g);
    let mut acc = vec![0.0; g.n()];
    let mut contributing = vec![0u64; g.n()];
    let mut total_mass = 0.0;
    for subset in 0u64..1 << m {
        let w = weights.weight(subset);
        total_mass += w;
        let reached = search.run(seeds.members(), |e| (subset >> e) & 1 == 1);
        for (v, &r) in reached.iter().enumerate() {
            if r {
                acc[v] += w;
                contributing[v] += 1;
            }
        }
    }
    let sigma = (0..g.n()).filter(|&v| !seeds.contains(v as VertexId)).map(|v| acc[v]).sum();
    Ok(OracleResult { probs: acc, sigma, subsets_evaluated: 1 << m, contributing, total_mass })
}

/// `P(S ⇝ v | decided prefix)` for every vertex: the first `level` edges of
/// the ordering are fixed (`decided[j]` is the presence of the `j`-th ordered
/// edge) and every completion of the remaining edges is enumerated.
pub fn conditional_brute_force(
    g: &UncertainDigraph,
    ordering: &EdgeOrdering,
    seeds: &SeedSet,
    level: usize,
    decided: &[bool],
) -> Result<Vec<f64>, OracleError> {
    let order = ordering.order();
    let free = &order[level..];
    if free.len() > MAX_ENUMERATED_EDGES {
        return Err(OracleError::TooManyEdges { edges: free.len(), limit: MAX_ENUMERATED_EDGES });
    }
    let mut present = vec![false; g.m()];
    for (j, &e) in order[..level].iter().enumerate() {
        present[e] = decided[j];
    }
    let probs: Vec<f64> = free.iter().map(|&e| g.edge(e).p).collect();
    let weights = SubsetWeights::new(&probs);
    let mut search = Searcher::new(g);
    let mut acc = vec![0.0; g.n()];
    for h in 0u64..1 << free.len() {
        for (j, &e) in free.iter().enumerate() {
            present[e] = (h >> j) & 1 == 1;
        }
        let w = weights.weight(h);
        let reached = search.run(seeds.members(), |e| present[e]);
        for (v, &r) in reached.iter().enumerate() {
            if r {
                acc[v] += w;
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;
    use crate::ordering::compute_frontiers;

    fn graph(n: usize, edges: &[(u32, u32, f64)]) -> UncertainDigraph {
        UncertainDigraph::new(n, edges.iter().map(|&(a, b, p)| Edge::new(a, b, p)).collect()).unwrap()
    }

    #[test]
    fn subset_weights_match_direct_product() {
        let probs = [0.1, 0.7, 0.3, 1.0, 0.0];
        let w = SubsetWeights::new(&probs);
        for subset in 0u64..32 {
            let direct: f64 = probs
                .iter()
                .enumerate()
                .map(|(j, &p)| if (subset >> j) & 1 == 1 { p } else { 1.0 - p })
                .product();
            assert!((w.weight(subset) - direct).abs() < 1e-15, "{subset:b}");
        }
    }

    #[test]
    fn single_edge_and_diamond() {
        let g = graph(2, &[(0, 1, 0.7)]);
        let r = brute_force(&g, &SeedSet::new([0], 2).unwrap()).unwrap();
        assert_eq!(r.probs[1], 0.7);
        assert_eq!(r.subsets_evaluated, 2);

        let d = graph(4, &[(0, 1, 0.5), (0, 2, 0.5), (1, 3, 0.5), (2, 3, 0.5)]);
        let r = brute_force(&d, &SeedSet::new([0], 4).unwrap()).unwrap();
        assert_eq!(r.probs, vec![1.0, 0.5, 0.5, 0.4375]);
        assert_eq!(r.sigma, 1.4375);
        assert_eq!(r.contributing[3], 7);
        assert!((r.total_mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn refuses_large_graphs() {
        let edges: Vec<(u32, u32, f64)> = (0..25).map(|i| (i, i + 1, 0.5)).collect();
        let g = graph(26, &edges);
        assert_eq!(
            brute_force(&g, &SeedSet::new([0], 26).unwrap()),
            Err(OracleError::TooManyEdges { edges: 25, limit: 24 })
        );
    }

    #[test]
    fn conditional_extremes() {
        let g = graph(3, &[(0, 1, 0.5), (1, 2, 0.25)]);
        let o = compute_frontiers(&g, vec![0, 1]).unwrap();
        let s = SeedSet::new([0], 3).unwrap();
        let full = brute_force(&g, &s).unwrap();
        assert_eq!(conditional_brute_force(&g, &o, &s, 0, &[]).unwrap(), full.probs);
        assert_eq!(conditional_brute_force(&g, &o, &s, 2, &[true, false]).unwrap(), vec![1.0, 1.0, 0.0]);
        assert_eq!(conditional_brute_force(&g, &o, &s, 1, &[true]).unwrap(), vec![1.0, 1.0, 0.25]);
    }
}
