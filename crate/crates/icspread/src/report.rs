use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Rounds to 12 significant digits; the shortest display of the result has
/// at most that many.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VertexRow {
    pub vertex: String,
    pub probability: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stderr: Option<f64>,
}

/// One greedy addition.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub vertex: String,
    pub sigma: f64,
    pub sigma_with_seeds: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub n: usize,
    pub m: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub omega: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub omega_p: Option<usize>,
    pub self_loops_dropped: usize,
    pub seeds: Vec<String>,
    pub vertices: Vec<VertexRow>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sigma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sigma_with_seeds: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub trace: Vec<TraceRow>,
    /// Peak live states per diagram kind.
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub peak_states: BTreeMap<String, usize>,
    /// Wall-clock seconds per phase.
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub seconds: BTreeMap<String, f64>,
    /// Largest absolute differences between methods.
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub deltas: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub metadata: BTreeMap<String, String>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport { command: command.to_string(), ..Default::default() }
    }

    /// Applies 12-significant-digit rounding to every number.
    pub fn rounded(mut self) -> Self {
        for v in &mut self.vertices {
            v.probability = sig12(v.probability);
            v.stderr = v.stderr.map(sig12);
        }
        self.sigma = self.sigma.map(sig12);
        self.sigma_with_seeds = self.sigma_with_seeds.map(sig12);
        for t in &mut self.trace {
            t.sigma = sig12(t.sigma);
            t.sigma_with_seeds = sig12(t.sigma_with_seeds);
        }
        self.seconds.values_mut().for_each(|x| *x = sig12(*x));
        self.deltas.values_mut().for_each(|x| *x = sig12(*x));
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.clone().rounded()).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// `kind,name,value,stderr` rows: one per vertex, then scalars, then
    /// peaks, timings, deltas and metadata.
    pub fn to_csv(&self) -> String {
        let r = self.clone().rounded();
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut row = |kind: &str, name: &str, value: String, stderr: String| {
            w.write_record([kind, name, &value, &stderr]).expect("in-memory write");
        };
        row("kind", "name", "value".into(), "stderr".into());
        for v in &r.vertices {
            row("vertex", &v.vertex, v.probability.to_string(), v.stderr.map(|s| s.to_string()).unwrap_or_default());
        }
        row("stat", "command", r.command.clone(), String::new());
        row("stat", "n", r.n.to_string(), String::new());
        row("stat", "m", r.m.to_string(), String::new());
        for (name, x) in [("omega", r.omega), ("omega_p", r.omega_p)] {
            if let Some(x) = x {
                row("stat", name, x.to_string(), String::new());
            }
        }
        row("stat", "self_loops_dropped", r.self_loops_dropped.to_string(), String::new());
        row("stat", "seeds", r.seeds.join(" "), String::new());
        for (name, x) in [("sigma", r.sigma), ("sigma_with_seeds", r.sigma_with_seeds)] {
            if let Some(x) = x {
                row("stat", name, x.to_string(), String::new());
            }
        }
        for t in &r.trace {
            row("greedy", &t.vertex, t.sigma.to_string(), String::new());
        }
        for (k, v) in &r.peak_states {
            row("peak_states", k, v.to_string(), String::new());
        }
        for (k, v) in &r.seconds {
            row("seconds", k, v.to_string(), String::new());
        }
        for (k, v) in &r.deltas {
            row("delta", k, v.to_string(), String::new());
        }
        for (k, v) in &r.metadata {
            row("meta", k, v.clone(), String::new());
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    /// Human-readable summary.
    pub fn to_text(&self) -> String {
        self.clone().rounded().to_string()
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: n = {}, m = {}", self.command, self.n, self.m)?;
        if let Some(w) = self.omega {
            writeln!(f, "frontier width: {w}")?;
        }
        if !self.seeds.is_empty() {
            writeln!(f, "seeds: {}", self.seeds.join(" "))?;
        }
        for v in &self.vertices {
            match v.stderr {
                Some(se) => writeln!(f, "{}\t{}\t± {}", v.vertex, v.probability, se)?,
                None => writeln!(f, "{}\t{}", v.vertex, v.probability)?,
            }
        }
        if let Some(s) = self.sigma {
            writeln!(f, "sigma: {s}")?;
        }
        if let Some(s) = self.sigma_with_seeds {
            writeln!(f, "sigma with seeds: {s}")?;
        }
        for (i, t) in self.trace.iter().enumerate() {
            writeln!(f, "seed {}: {}\tsigma {}\twith seeds {}", i + 1, t.vertex, t.sigma, t.sigma_with_seeds)?;
        }
        for (k, v) in &self.peak_states {
            writeln!(f, "peak {k} states: {v}")?;
        }
        for (k, v) in &self.deltas {
            writeln!(f, "max delta {k}: {v}")?;
        }
        for (k, v) in &self.seconds {
            writeln!(f, "{k}: {v} s")?;
        }
        Ok(())
    }
}

/// Reads the vertex rows back from [`RunReport::to_csv`] output.
pub fn vertex_rows_from_csv(text: &str) -> Result<Vec<VertexRow>, csv::Error> {
    let mut rows = Vec::new();
    for rec in csv::Reader::from_reader(text.as_bytes()).records() {
        let rec = rec?;
        if &rec[0] == "vertex" {
            rows.push(VertexRow {
                vertex: rec[1].to_string(),
                probability: rec[2].parse().unwrap_or(f64::NAN),
                stderr: (!rec[3].is_empty()).then(|| rec[3].parse().unwrap_or(f64::NAN)),
            });
        }
    }
    Ok(rows)
}
