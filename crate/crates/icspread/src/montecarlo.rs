use icspread_core::{SeedSet, UncertainDigraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Name of the generator, recorded in reports.
pub const RNG_NAME: &str = "ChaCha8";

#[derive(Clone, Debug, PartialEq)]
pub struct Estimate {
    /// Fraction of samples in which each vertex was reached.
    pub mean: Vec<f64>,
    /// Standard error of each mean.
    pub stderr: Vec<f64>,
    pub sigma: f64,
    pub sigma_stderr: f64,
    pub samples: u64,
    pub rng_seed: u64,
}

/// Samples `samples` random subgraphs by independent coin flips and counts
/// how often each vertex is reached from the seeds.
pub fn monte_carlo(g: &UncertainDigraph, seeds: &SeedSet, samples: u64, rng_seed: u64) -> Estimate {
    assert!(samples >= 1, "at least one sample");
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let n = g.n();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in g.edges().iter().enumerate() {
        out[e.tail as usize].push(i);
    }
    let mut hits = vec![0u64; n];
    let mut spread_sum = 0.0;
    let mut spread_sq = 0.0;
    let mut present = vec![false; g.m()];
    let mut seen = vec![false; n];
    let mut stack = Vec::new();
    for _ in 0..samples {
        for (slot, e) in present.iter_mut().zip(g.edges()) {
            *slot = rng.gen::<f64>() < e.p;
        }
        seen.iter_mut().for_each(|s| *s = false);
        for &s in seeds.members() {
            seen[s as usize] = true;
            stack.push(s);
        }
        let mut count = 0u64;
        while let Some(u) = stack.pop() {
            if !seeds.contains(u) {
                count += 1;
            }
            hits[u as usize] += 1;
            for &i in &out[u as usize] {
                let w = g.edge(i).head;
                if present[i] && !seen[w as usize] {
                    seen[w as usize] = true;
                    stack.push(w);
                }
            }
        }
        spread_sum += count as f64;
        spread_sq += (count * count) as f64;
    }
    let s = samples as f64;
    let mean: Vec<f64> = hits.iter().map(|&h| h as f64 / s).collect();
    let stderr = mean.iter().map(|&q| (q * (1.0 - q) / s).sqrt()).collect();
    let sigma = spread_sum / s;
    let var = (spread_sq / s - sigma * sigma).max(0.0);
    Estimate { mean, stderr, sigma, sigma_stderr: (var / s).sqrt(), samples, rng_seed }
}

#[cfg(test)]
mod tests {
    use super::*;
    use icspread_core::Edge;

    #[test]
    fn deterministic_edges_give_exact_answers() {
        let g = UncertainDigraph::new(4, vec![Edge::new(0, 1, 1.0), Edge::new(1, 2, 0.0), Edge::new(3, 0, 1.0)])
            .unwrap();
        let s = SeedSet::new([0], 4).unwrap();
        let est = monte_carlo(&g, &s, 100, 1);
        assert_eq!(est.mean, vec![1.0, 1.0, 0.0, 0.0]);
        assert_eq!(est.stderr, vec![0.0; 4]);
        assert_eq!(est.sigma, 1.0);
    }

    #[test]
    fn same_seed_same_estimate() {
        let g = UncertainDigraph::new(2, vec![Edge::new(0, 1, 0.3)]).unwrap();
        let s = SeedSet::new([0], 2).unwrap();
        assert_eq!(monte_carlo(&g, &s, 1000, 9), monte_carlo(&g, &s, 1000, 9));
        assert_ne!(monte_carlo(&g, &s, 1000, 9).mean, monte_carlo(&g, &s, 1000, 10).mean);
    }
}
