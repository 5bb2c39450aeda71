//! Whole-graph entry points: split into weakly connected pieces, order each
//! piece, run an algorithm per piece and stitch the answers back together.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::all_targets::{all_targets_observed, Phase};
use crate::error::SpreadError;
use crate::graph::{assemble_spread, split_components, Component, SeedSet, SpreadResult, UncertainDigraph, VertexId};
use crate::ordering::{compute_frontiers, heuristic_ordering, ordering_from_decomposition, EdgeOrdering, PathDecomposition};
use crate::single::{build_tc_diagram, top_down_dp};
use crate::state::MAX_FRONTIER;

/// Default bound on the frontier width a run accepts.
pub const DEFAULT_MAX_WIDTH: usize = 8;

/// How each component gets its edge ordering.
#[derive(Clone, Copy, Debug)]
pub enum OrderingSource<'a> {
    Heuristic,
    /// A decomposition of the whole graph, restricted to each component.
    Decomposition(&'a PathDecomposition),
    /// A permutation of the whole graph's edge indices; each component keeps
    /// the relative order of its own edges.
    Explicit(&'a [usize]),
}

/// Statistics of one component's run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ComponentStats {
    pub vertices: usize,
    pub edges: usize,
    pub omega: usize,
    /// STC counts per level (per-target runs: summed TC counts).
    pub stc_level_sizes: Vec<usize>,
    /// Imaginary-target TC counts per level (per-target runs: peak TC counts).
    pub tc_level_sizes: Vec<usize>,
    /// Largest `|mass - 1|` over the levels of the forward pass.
    pub mass_error: f64,
}

impl ComponentStats {
    pub fn peak_states(&self) -> usize {
        self.stc_level_sizes.iter().zip(&self.tc_level_sizes).map(|(a, b)| a + b).max().unwrap_or(0)
    }

    /// Largest `count / 2^(|W_k|^2)` over levels, for both diagrams.
    pub fn worst_bound_ratio(&self, ordering: &EdgeOrdering) -> f64 {
        let mut worst: f64 = 0.0;
        for (k, w) in ordering.frontiers().iter().enumerate() {
            let cap = exp2(w.len() * w.len());
            for sizes in [&self.stc_level_sizes, &self.tc_level_sizes] {
                if let Some(&c) = sizes.get(k) {
                    worst = worst.max(c as f64 / cap);
                }
            }
        }
        worst
    }
}

/// `2^e` built from the exponent bits; saturates to infinity.
fn exp2(e: usize) -> f64 {
    if e > 1023 {
        f64::INFINITY
    } else {
        f64::from_bits(((1023 + e) as u64) << 52)
    }
}

#[derive(Clone, Debug)]
pub struct SpreadRun {
    pub result: SpreadResult,
    /// `P(S ⇝ v)` for every vertex; seeds get 1.
    pub per_vertex: Vec<f64>,
    pub components: Vec<ComponentStats>,
}

impl SpreadRun {
    pub fn omega(&self) -> usize {
        self.components.iter().map(|c| c.omega).max().unwrap_or(0)
    }

    pub fn peak_states(&self) -> usize {
        self.components.iter().map(|c| c.peak_states()).max().unwrap_or(0)
    }

    pub fn mass_error(&self) -> f64 {
        self.components.iter().map(|c| c.mass_error).fold(0.0, f64::max)
    }
}

/// Ordering for each component of `g`, in [`split_components`] order.
pub fn component_orderings(
    g: &UncertainDigraph,
    components: &[Component],
    source: OrderingSource,
) -> Result<Vec<EdgeOrdering>, SpreadError> {
    let explicit_pos = match source {
        OrderingSource::Explicit(order) => {
            let whole = compute_frontiers(g, order.to_vec())?;
            let mut pos = vec![0; g.m()];
            for (i, &e) in whole.order().iter().enumerate() {
                pos[e] = i;
            }
            Some(pos)
        }
        _ => None,
    };
    let mut local_of = vec![None; g.n()];
    components
        .iter()
        .map(|c| {
            Ok(match source {
                OrderingSource::Heuristic => heuristic_ordering(&c.graph),
                OrderingSource::Decomposition(pd) => {
                    for (l, &v) in c.vertices.iter().enumerate() {
                        local_of[v as usize] = Some(l as VertexId);
                    }
                    let local = pd.restrict(|v| local_of.get(v as usize).copied().flatten());
                    for &v in &c.vertices {
                        local_of[v as usize] = None;
                    }
                    ordering_from_decomposition(&c.graph, &local)?
                }
                OrderingSource::Explicit(_) => {
                    let pos = explicit_pos.as_ref().expect("validated above");
                    let mut order: Vec<usize> = (0..c.edge_ids.len()).collect();
                    order.sort_by_key(|&l| pos[c.edge_ids[l]]);
                    compute_frontiers(&c.graph, order)?
                }
            })
        })
        .collect()
}

fn check_width(ordering: &EdgeOrdering, max_width: usize) -> Result<(), SpreadError> {
    let max = max_width.min(MAX_FRONTIER);
    if ordering.omega() > max {
        return Err(SpreadError::WidthExceeded { omega: ordering.omega(), max });
    }
    Ok(())
}

fn finish(
    g: &UncertainDigraph,
    seeds: &SeedSet,
    per_vertex: Vec<f64>,
    components: Vec<ComponentStats>,
) -> Result<SpreadRun, SpreadError> {
    let map: BTreeMap<VertexId, f64> = per_vertex.iter().enumerate().map(|(v, &p)| (v as VertexId, p)).collect();
    let result = assemble_spread(g.n(), &map, seeds)?;
    Ok(SpreadRun { result, per_vertex, components })
}

/// `P(S ⇝ v)` for all `v` and `σ(S)` with the shared-diagram algorithm.
pub fn spread(
    g: &UncertainDigraph,
    seeds: &SeedSet,
    source: OrderingSource,
    max_width: usize,
) -> Result<SpreadRun, SpreadError> {
    spread_observed(g, seeds, source, max_width, &mut |_| {})
}

/// [`spread`] reporting each component's phases to `on_phase`.
pub fn spread_observed(
    g: &UncertainDigraph,
    seeds: &SeedSet,
    source: OrderingSource,
    max_width: usize,
    on_phase: &mut dyn FnMut(Phase),
) -> Result<SpreadRun, SpreadError> {
    let split = split_components(g, seeds);
    let orderings = component_orderings(g, &split.components, source)?;
    for o in &orderings {
        check_width(o, max_width)?;
    }
    let mut per_vertex: Vec<f64> =
        (0..g.n()).map(|v| if seeds.contains(v as VertexId) { 1.0 } else { 0.0 }).collect();
    let mut stats = Vec::with_capacity(split.components.len());
    for (c, o) in split.components.iter().zip(&orderings) {
        let run = all_targets_observed(&c.graph, o, &c.seeds, on_phase)?;
        for (l, &p) in run.probs.iter().enumerate() {
            per_vertex[c.vertices[l] as usize] = p;
        }
        stats.push(ComponentStats {
            vertices: c.graph.n(),
            edges: c.graph.m(),
            omega: o.omega(),
            mass_error: run.mass_by_level.iter().map(|m| (m - 1.0).abs()).fold(0.0, f64::max),
            stc_level_sizes: run.stc_level_sizes,
            tc_level_sizes: run.tc_level_sizes,
        });
    }
    finish(g, seeds, per_vertex, stats)
}

/// The same quantities with one per-target diagram per vertex.
pub fn spread_per_target(
    g: &UncertainDigraph,
    seeds: &SeedSet,
    source: OrderingSource,
    max_width: usize,
) -> Result<SpreadRun, SpreadError> {
    let split = split_components(g, seeds);
    let orderings = component_orderings(g, &split.components, source)?;
    for o in &orderings {
        check_width(o, max_width)?;
    }
    let mut per_vertex: Vec<f64> =
        (0..g.n()).map(|v| if seeds.contains(v as VertexId) { 1.0 } else { 0.0 }).collect();
    let mut stats = Vec::with_capacity(split.components.len());
    for (c, o) in split.components.iter().zip(&orderings) {
        let mut st = ComponentStats {
            vertices: c.graph.n(),
            edges: c.graph.m(),
            omega: o.omega(),
            stc_level_sizes: vec![0; o.m() + 1],
            tc_level_sizes: vec![0; o.m() + 1],
            mass_error: 0.0,
        };
        for v in (0..c.graph.n() as VertexId).filter(|&v| !c.seeds.contains(v)) {
            let d = build_tc_diagram(&c.graph, o, &c.seeds, v)?;
            let td = top_down_dp(&d);
            per_vertex[c.vertices[v as usize] as usize] = td.probability();
            for (k, size) in d.level_sizes().into_iter().enumerate() {
                st.stc_level_sizes[k] += size;
                st.tc_level_sizes[k] = st.tc_level_sizes[k].max(size);
            }
            st.mass_error = td.mass_by_level.iter().map(|m| (m - 1.0).abs()).fold(st.mass_error, f64::max);
        }
        stats.push(st);
    }
    finish(g, seeds, per_vertex, stats)
}

/// `P(S ⇝ v)` for one target with the per-target algorithm, solving only
/// the component that holds `v`.
pub fn target_probability(
    g: &UncertainDigraph,
    seeds: &SeedSet,
    source: OrderingSource,
    max_width: usize,
    v: VertexId,
) -> Result<(f64, Option<ComponentStats>), SpreadError> {
    if v as usize >= g.n() {
        return Err(crate::error::GraphError::VertexOutOfRange { vertex: v as usize, n: g.n() }.into());
    }
    if seeds.contains(v) {
        return Err(SpreadError::TargetIsSeed(v));
    }
    let split = split_components(g, seeds);
    let Some(ci) = split.components.iter().position(|c| c.vertices.contains(&v)) else {
        return Ok((0.0, None));
    };
    let c = &split.components[ci];
    let o = component_orderings(g, core::slice::from_ref(c), source)?.remove(0);
    check_width(&o, max_width)?;
    let local = c.vertices.iter().position(|&x| x == v).expect("component holds v") as VertexId;
    let d = build_tc_diagram(&c.graph, &o, &c.seeds, local)?;
    let td = top_down_dp(&d);
    let stats = ComponentStats {
        vertices: c.graph.n(),
        edges: c.graph.m(),
        omega: o.omega(),
        stc_level_sizes: vec![0; o.m() + 1],
        tc_level_sizes: d.level_sizes(),
        mass_error: td.mass_by_level.iter().map(|m| (m - 1.0).abs()).fold(0.0, f64::max),
    };
    Ok((td.probability(), Some(stats)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;
    use crate::oracle::brute_force;

    fn graph(n: usize, edges: &[(u32, u32, f64)]) -> UncertainDigraph {
        UncertainDigraph::new(n, edges.iter().map(|&(a, b, p)| Edge::new(a, b, p)).collect()).unwrap()
    }

    #[test]
    fn diamond_sigma() {
        let g = graph(4, &[(0, 1, 0.5), (0, 2, 0.5), (1, 3, 0.5), (2, 3, 0.5)]);
        let s = SeedSet::new([0], 4).unwrap();
        let run = spread(&g, &s, OrderingSource::Heuristic, DEFAULT_MAX_WIDTH).unwrap();
        assert_eq!(run.result.sigma, 1.4375);
        assert_eq!(run.result.sigma_with_seeds, 2.4375);
        let base = spread_per_target(&g, &s, OrderingSource::Heuristic, DEFAULT_MAX_WIDTH).unwrap();
        assert_eq!(base.per_vertex, run.per_vertex);
    }

    #[test]
    fn components_and_isolated_vertices() {
        // Two 2-cycles; seed in the first. Vertex 4 isolated.
        let g = graph(5, &[(0, 1, 0.5), (1, 0, 0.5), (2, 3, 0.5), (3, 2, 0.5)]);
        let s = SeedSet::new([0], 5).unwrap();
        let run = spread(&g, &s, OrderingSource::Heuristic, DEFAULT_MAX_WIDTH).unwrap();
        assert_eq!(run.per_vertex, vec![1.0, 0.5, 0.0, 0.0, 0.0]);
        assert_eq!(run.result.probs.len(), 4);
    }

    #[test]
    fn geometric_path() {
        let n = 1001;
        let edges: Vec<(u32, u32, f64)> = (0..n as u32 - 1).map(|i| (i, i + 1, 0.5)).collect();
        let g = graph(n, &edges);
        let s = SeedSet::new([0], n).unwrap();
        let run = spread(&g, &s, OrderingSource::Heuristic, DEFAULT_MAX_WIDTH).unwrap();
        let want: f64 = (1..n as i32).map(|k| 0.5f64.powi(k)).sum();
        assert!((run.result.sigma - want).abs() < 1e-12);
        assert_eq!(run.omega(), 1);
    }

    #[test]
    fn all_ordering_sources_agree() {
        let g = graph(6, &[(0, 1, 0.3), (1, 2, 0.6), (2, 0, 0.9), (3, 4, 0.5), (4, 5, 0.5), (5, 3, 0.2), (2, 3, 0.7)]);
        let s = SeedSet::new([1], 6).unwrap();
        let want = brute_force(&g, &s).unwrap().probs;
        let pd = PathDecomposition::new(vec![vec![0, 1, 2], vec![2, 3], vec![3, 4, 5]]);
        let order: Vec<usize> = (0..g.m()).rev().collect();
        for source in [OrderingSource::Heuristic, OrderingSource::Decomposition(&pd), OrderingSource::Explicit(&order)] {
            let run = spread(&g, &s, source, DEFAULT_MAX_WIDTH).unwrap();
            for (a, b) in run.per_vertex.iter().zip(&want) {
                assert!((a - b).abs() < 1e-12, "{source:?}");
            }
            let (p5, _) = target_probability(&g, &s, source, DEFAULT_MAX_WIDTH, 5).unwrap();
            assert!((p5 - want[5]).abs() < 1e-12);
        }
    }

    #[test]
    fn width_guard() {
        // Bidirected K5 under an adversarial order has a wide frontier.
        let mut edges = Vec::new();
        for a in 0..5u32 {
            for b in 0..5u32 {
                if a != b {
                    edges.push((a, b, 0.5));
                }
            }
        }
        let g = graph(5, &edges);
        let s = SeedSet::new([0], 5).unwrap();
        match spread(&g, &s, OrderingSource::Heuristic, 2) {
            Err(SpreadError::WidthExceeded { max: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bound_ratio_of_single_level() {
        let stats = ComponentStats { stc_level_sizes: vec![1, 3, 0], tc_level_sizes: vec![0, 1, 0], ..Default::default() };
        let g = graph(3, &[(0, 1, 0.5), (1, 2, 0.5)]);
        let o = compute_frontiers(&g, vec![0, 1]).unwrap();
        assert_eq!(stats.worst_bound_ratio(&o), 1.5);
    }
}
