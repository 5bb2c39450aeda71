//! Plain greedy seed selection on exact spread values.

use icspread_core::pipeline::{spread, OrderingSource};
use icspread_core::{SeedSet, SpreadError, UncertainDigraph, VertexId};

#[derive(Clone, Debug, PartialEq)]
pub struct GreedyStep {
    pub vertex: VertexId,
    /// Expected number of reached non-seed vertices after adding `vertex`.
    pub sigma: f64,
    /// `sigma` plus the number of seeds.
    pub sigma_with_seeds: f64,
}

/// Adds `k` seeds one at a time, each maximising the spread of the enlarged
/// set (ties to the smaller id). The full pipeline runs once per candidate.
pub fn greedy(
    g: &UncertainDigraph,
    k: usize,
    source: OrderingSource,
    max_width: usize,
) -> Result<Vec<GreedyStep>, SpreadError> {
    let k = k.min(g.n());
    let mut chosen: Vec<VertexId> = Vec::with_capacity(k);
    let mut trace = Vec::with_capacity(k);
    for _ in 0..k {
        let mut best: Option<GreedyStep> = None;
        for v in (0..g.n() as VertexId).filter(|v| !chosen.contains(v)) {
            let mut members = chosen.clone();
            members.push(v);
            let seeds = SeedSet::new(members, g.n())?;
            let run = spread(g, &seeds, source, max_width)?;
            if best.as_ref().is_none_or(|b| run.result.sigma_with_seeds > b.sigma_with_seeds) {
                best = Some(GreedyStep {
                    vertex: v,
                    sigma: run.result.sigma,
                    sigma_with_seeds: run.result.sigma_with_seeds,
                });
            }
        }
        let step = best.expect("k is at most n");
        chosen.push(step.vertex);
        trace.push(step);
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use icspread_core::pipeline::DEFAULT_MAX_WIDTH;
    use icspread_core::Edge;

    fn graph(n: usize, edges: &[(u32, u32, f64)]) -> UncertainDigraph {
        UncertainDigraph::new(n, edges.iter().map(|&(a, b, p)| Edge::new(a, b, p)).collect()).unwrap()
    }

    #[test]
    fn diamond_picks_source() {
        let g = graph(4, &[(0, 1, 0.5), (0, 2, 0.5), (1, 3, 0.5), (2, 3, 0.5)]);
        let trace = greedy(&g, 4, OrderingSource::Heuristic, DEFAULT_MAX_WIDTH).unwrap();
        assert_eq!(trace[0], GreedyStep { vertex: 0, sigma: 1.4375, sigma_with_seeds: 2.4375 });
        assert!(trace.windows(2).all(|w| w[0].sigma_with_seeds <= w[1].sigma_with_seeds));
        assert_eq!(trace.last().unwrap().sigma, 0.0);
        assert_eq!(trace.last().unwrap().sigma_with_seeds, 4.0);
    }

    #[test]
    fn path_picks_source_endpoint() {
        let g = graph(5, &[(0, 1, 0.5), (1, 2, 0.5), (2, 3, 0.5), (3, 4, 0.5)]);
        let trace = greedy(&g, 1, OrderingSource::Heuristic, DEFAULT_MAX_WIDTH).unwrap();
        assert_eq!(trace[0].vertex, 0);
    }
}
