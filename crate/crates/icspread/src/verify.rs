//! Cross-checks between the shared algorithm, the per-target algorithm and
//! exhaustive enumeration.

use std::collections::BTreeMap;

use icspread_core::oracle::{brute_force, OracleResult, MAX_ENUMERATED_EDGES};
use icspread_core::pipeline::{spread, spread_per_target, OrderingSource, SpreadRun};
use icspread_core::{SeedSet, SpreadError, UncertainDigraph};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::generate::random_digraph;

pub struct Verification {
    pub all_targets: SpreadRun,
    pub per_target: SpreadRun,
    /// Present when the graph is small enough to enumerate.
    pub oracle: Option<OracleResult>,
    /// Largest per-vertex absolute difference for each pair of methods.
    pub deltas: BTreeMap<String, f64>,
}

fn max_delta(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn verify(
    g: &UncertainDigraph,
    seeds: &SeedSet,
    source: OrderingSource,
    max_width: usize,
) -> Result<Verification, SpreadError> {
    let all_targets = spread(g, seeds, source, max_width)?;
    let per_target = spread_per_target(g, seeds, source, max_width)?;
    let oracle = (g.m() <= MAX_ENUMERATED_EDGES).then(|| brute_force(g, seeds).expect("size checked"));
    let mut deltas = BTreeMap::new();
    deltas.insert("all_targets_vs_per_target".into(), max_delta(&all_targets.per_vertex, &per_target.per_vertex));
    if let Some(o) = &oracle {
        deltas.insert("all_targets_vs_oracle".into(), max_delta(&all_targets.per_vertex, &o.probs));
        deltas.insert("per_target_vs_oracle".into(), max_delta(&per_target.per_vertex, &o.probs));
    }
    Ok(Verification { all_targets, per_target, oracle, deltas })
}

/// Runs [`verify`] on `count` random graphs with at most 8 vertices and
/// returns the largest delta seen for each pair.
pub fn verify_random(count: usize, rng_seed: u64, max_width: usize) -> Result<BTreeMap<String, f64>, SpreadError> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut worst: BTreeMap<String, f64> = BTreeMap::new();
    for _ in 0..count {
        let n = rng.gen_range(2..=7usize);
        let m = rng.gen_range(1..=14usize);
        let pendants = rng.gen_range(0..=1usize);
        let g = random_digraph(&mut rng, n, m, pendants);
        let mut vs: Vec<u32> = (0..g.n() as u32).collect();
        vs.shuffle(&mut rng);
        let k = rng.gen_range(1..=2);
        let seeds = SeedSet::new(vs[..k].iter().copied(), g.n()).expect("non-empty");
        let v = verify(&g, &seeds, OrderingSource::Heuristic, max_width)?;
        for (name, d) in v.deltas {
            let w = worst.entry(name).or_insert(0.0);
            *w = w.max(d);
        }
    }
    Ok(worst)
}
