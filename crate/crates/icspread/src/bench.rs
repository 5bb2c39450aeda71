//! Wall-clock comparison of the shared algorithm against one diagram per
//! target.

use std::time::Instant;

use icspread_core::all_targets::all_targets;
use icspread_core::single::single_target_probability;
use icspread_core::{heuristic_ordering, SeedSet, SpreadError, UncertainDigraph, VertexId};

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub m: usize,
    pub n: usize,
    pub omega: usize,
    /// Seconds for the shared algorithm on the whole graph.
    pub t_linear: f64,
    /// Seconds for the per-target algorithm over every non-seed vertex,
    /// extrapolated from `targets_timed` evenly spaced targets.
    pub t_baseline: f64,
    pub targets_timed: usize,
}

/// Times both algorithms on `g` with seed vertex 0. At most `max_targets`
/// per-target runs are timed; their mean is scaled to all targets.
pub fn bench_graph(g: &UncertainDigraph, max_targets: usize) -> Result<BenchRow, SpreadError> {
    let seeds = SeedSet::new([0], g.n())?;
    let ordering = heuristic_ordering(g);

    let start = Instant::now();
    let run = all_targets(g, &ordering, &seeds)?;
    let t_linear = start.elapsed().as_secs_f64();
    std::hint::black_box(&run);

    let targets: Vec<VertexId> = (1..g.n() as VertexId).collect();
    let step = targets.len().div_ceil(max_targets.max(1)).max(1);
    let sample: Vec<VertexId> = targets.iter().copied().step_by(step).collect();
    let start = Instant::now();
    for &v in &sample {
        std::hint::black_box(single_target_probability(g, &ordering, &seeds, v)?);
    }
    let elapsed = start.elapsed().as_secs_f64();
    let t_baseline = if sample.is_empty() { 0.0 } else { elapsed * targets.len() as f64 / sample.len() as f64 };

    Ok(BenchRow { m: g.m(), n: g.n(), omega: ordering.omega(), t_linear, t_baseline, targets_timed: sample.len() })
}

pub fn rows_to_csv(rows: &[BenchRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["m", "n", "omega", "t_linear", "t_baseline", "targets_timed"]).expect("in-memory write");
    for r in rows {
        w.write_record([
            r.m.to_string(),
            r.n.to_string(),
            r.omega.to_string(),
            crate::report::sig12(r.t_linear).to_string(),
            crate::report::sig12(r.t_baseline).to_string(),
            r.targets_timed.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}
