//! Synthetic graph families for benchmarks and tests.

use std::str::FromStr;

use icspread_core::{Edge, UncertainDigraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `0 → 1 → … → m`.
    Path,
    /// Directed cycle on `m` vertices.
    Cycle,
    /// Grid of `width` rows with rightward and alternating vertical edges.
    Ladder,
    /// Random edges between vertices at most `width` apart in id.
    RandomPw,
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "path" => Ok(Family::Path),
            "cycle" => Ok(Family::Cycle),
            "ladder" => Ok(Family::Ladder),
            "random-pw" => Ok(Family::RandomPw),
            _ => Err(format!("unknown family {s:?} (path, cycle, ladder, random-pw)")),
        }
    }
}

/// Edge probabilities: a constant, or uniform in `[0, 1)` from a seed.
#[derive(Clone, Copy, Debug)]
pub enum Probs {
    Fixed(f64),
    Random(u64),
}

/// A member of `family` with about `m` edges. `width` matters for the
/// ladder and random families only.
pub fn generate(family: Family, m: usize, width: usize, probs: Probs) -> UncertainDigraph {
    let mut rng = ChaCha8Rng::seed_from_u64(match probs {
        Probs::Random(s) => s,
        Probs::Fixed(_) => 0,
    });
    let mut p = || match probs {
        Probs::Fixed(p) => p,
        Probs::Random(_) => rng.gen(),
    };
    let width = width.max(1);
    let (n, pairs): (usize, Vec<(u32, u32)>) = match family {
        Family::Path => (m + 1, (0..m as u32).map(|i| (i, i + 1)).collect()),
        Family::Cycle => {
            let n = m.max(2);
            (n, (0..n as u32).map(|i| (i, (i + 1) % n as u32)).collect())
        }
        Family::Ladder => {
            // Each column adds `width - 1` vertical and `width` horizontal edges.
            let cols = (m / (2 * width - 1)).max(1) + 1;
            let id = |c: usize, r: usize| (c * width + r) as u32;
            let mut pairs = Vec::new();
            for c in 0..cols {
                for r in 0..width - 1 {
                    let (a, b) = (id(c, r), id(c, r + 1));
                    pairs.push(if (c + r) % 2 == 0 { (a, b) } else { (b, a) });
                }
                if c + 1 < cols {
                    for r in 0..width {
                        pairs.push((id(c, r), id(c + 1, r)));
                    }
                }
            }
            (cols * width, pairs)
        }
        Family::RandomPw => {
            let mut topo = ChaCha8Rng::seed_from_u64(m as u64 ^ (width as u64) << 32);
            let n = (m / 2).max(2);
            let mut pairs: Vec<(u32, u32)> = (0..n as u32 - 1).map(|i| (i, i + 1)).collect();
            while pairs.len() < m {
                let a = topo.gen_range(0..n);
                let b = (a + topo.gen_range(1..=width)).min(n - 1);
                if a != b {
                    pairs.push(if topo.gen_bool(0.5) { (a as u32, b as u32) } else { (b as u32, a as u32) });
                }
            }
            (n, pairs)
        }
    };
    let edges = pairs.into_iter().map(|(a, b)| Edge::new(a, b, p())).collect();
    UncertainDigraph::new(n, edges).expect("generated graphs are valid")
}

/// Uniform random digraph on `n` vertices with `m` edges (no self-loops,
/// parallel edges allowed). One edge in ten gets probability 0 or 1. With
/// `pendants`, up to two extra vertices hang off random vertices by a single
/// edge of either direction.
pub fn random_digraph(rng: &mut impl Rng, n: usize, m: usize, pendants: usize) -> UncertainDigraph {
    assert!(n >= 2);
    let prob = |rng: &mut dyn rand::RngCore| match rng.gen_range(0..20) {
        0 => 0.0,
        1 => 1.0,
        _ => rng.gen::<f64>(),
    };
    let mut edges = Vec::with_capacity(m + pendants);
    while edges.len() < m {
        let a = rng.gen_range(0..n as u32);
        let b = rng.gen_range(0..n as u32);
        if a != b {
            let p = prob(rng);
            edges.push(Edge::new(a, b, p));
        }
    }
    for k in 0..pendants {
        let leaf = (n + k) as u32;
        let w = rng.gen_range(0..leaf);
        let p = prob(rng);
        edges.push(if rng.gen_bool(0.7) { Edge::new(w, leaf, p) } else { Edge::new(leaf, w, p) });
    }
    UncertainDigraph::new(n + pendants, edges).expect("valid by construction")
}
