//! States built straight from their definitions by graph search on an
//! explicit edge subset. Used only to check the transition machinery.

use alloc::vec;
use alloc::vec::Vec;

use super::{Mask, Outcome, Stc, Target, Tc};
use crate::graph::{SeedSet, UncertainDigraph, VertexId};
use crate::ordering::EdgeOrdering;

/// `present[e]` for every graph edge index; all vertices reachable from `from`.
pub fn reach(g: &UncertainDigraph, present: &[bool], from: &[VertexId]) -> Vec<bool> {
    g.reachable_from(from, |e| present[e])
}

fn frontier_masks(
    g: &UncertainDigraph,
    w: &[VertexId],
    present: &[bool],
    seeds: &SeedSet,
) -> (Mask, Vec<Mask>) {
    let from_s = reach(g, present, seeds.members());
    let mut reached = 0;
    let mut rows = vec![0; w.len()];
    for (p, &u) in w.iter().enumerate() {
        if from_s[u as usize] {
            reached |= 1 << p;
        }
        let r = reach(g, present, &[u]);
        for (q, &x) in w.iter().enumerate() {
            if r[x as usize] {
                rows[p] |= 1 << q;
            }
        }
    }
    (reached, rows)
}

/// TC of `present` (a subset of the first `level` ordered edges) for target `v`;
/// `Top` when the seeds already reach `v`.
pub fn tc_by_definition(
    g: &UncertainDigraph,
    ordering: &EdgeOrdering,
    seeds: &SeedSet,
    level: usize,
    present: &[bool],
    v: VertexId,
) -> Outcome<Tc> {
    if reach(g, present, seeds.members())[v as usize] {
        return Outcome::Top;
    }
    let w = ordering.frontier(level);
    let (reached, rows) = frontier_masks(g, w, present, seeds);
    let mut to_target = 0;
    for (p, &u) in w.iter().enumerate() {
        if reach(g, present, &[u])[v as usize] {
            to_target |= 1 << p;
        }
    }
    Outcome::Live(Tc::from_parts(Target::Vertex(v), reached, to_target, &rows))
}

pub fn stc_by_definition(
    g: &UncertainDigraph,
    ordering: &EdgeOrdering,
    seeds: &SeedSet,
    level: usize,
    present: &[bool],
) -> Stc {
    let (reached, rows) = frontier_masks(g, ordering.frontier(level), present, seeds);
    Stc::from_parts(reached, &rows)
}

/// Presence vector for the subset `bits` of the first `level` ordered edges.
pub fn subset(ordering: &EdgeOrdering, m: usize, level: usize, bits: u64) -> Vec<bool> {
    let mut present = vec![false; m];
    for (j, &e) in ordering.order()[..level].iter().enumerate() {
        present[e] = (bits >> j) & 1 == 1;
    }
    present
}

/// Whether some completion of `present` by edges at positions `from..m` makes
/// `pred` true of the seeds' reach set.
pub fn some_completion<F>(
    g: &UncertainDigraph,
    ordering: &EdgeOrdering,
    seeds: &SeedSet,
    present: &[bool],
    from: usize,
    pred: F,
) -> bool
where
    F: Fn(&[bool]) -> bool,
{
    let free = &ordering.order()[from..];
    (0u64..1 << free.len()).any(|h| {
        let mut all = present.to_vec();
        for (j, &e) in free.iter().enumerate() {
            all[e] = (h >> j) & 1 == 1;
        }
        pred(&reach(g, &all, seeds.members()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;
    use crate::ordering::{compute_frontiers, heuristic_ordering};
    use crate::state::{successive_scc, Branch, Successor, Sweep, TargetSpec};
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_case(rng: &mut ChaCha8Rng) -> (UncertainDigraph, EdgeOrdering, SeedSet) {
        let n = rng.gen_range(2..=6u32);
        let m = rng.gen_range(1..=9usize);
        let mut edges = Vec::new();
        while edges.len() < m {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if a != b {
                edges.push(Edge::new(a, b, 0.5));
            }
        }
        let g = UncertainDigraph::new(n as usize, edges).unwrap();
        let ordering = if rng.gen_bool(0.5) {
            heuristic_ordering(&g)
        } else {
            let mut order: Vec<usize> = (0..m).collect();
            order.shuffle(rng);
            compute_frontiers(&g, order).unwrap()
        };
        let k = rng.gen_range(1..=2usize.min(n as usize - 1));
        let mut vs: Vec<u32> = (0..n).collect();
        vs.shuffle(rng);
        let seeds = SeedSet::new(vs[..k].iter().copied(), n as usize).unwrap();
        (g, ordering, seeds)
    }

    #[test]
    fn tc_transitions_match_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        for _ in 0..150 {
            let (g, o, s) = random_case(&mut rng);
            let sweep = Sweep::new(&g, &o, &s);
            for v in (0..g.n() as u32).filter(|&v| !s.contains(v)) {
                for level in 0..g.m() {
                    let plan = sweep.plan(level);
                    let spec = sweep.target(&plan, v);
                    let e = o.order()[level];
                    for bits in 0u64..1 << level {
                        let present = subset(&o, g.m(), level, bits);
                        let Outcome::Live(phi) = tc_by_definition(&g, &o, &s, level, &present, v) else {
                            continue;
                        };
                        for branch in Branch::BOTH {
                            let mut next = present.clone();
                            next[e] = branch == Branch::Hi;
                            let expect = tc_by_definition(&g, &o, &s, level + 1, &next, v);
                            match phi.transition(&plan, spec, branch) {
                                Outcome::Bottom => assert!(!some_completion(&g, &o, &s, &next, level + 1, |r| r
                                    [v as usize])),
                                got => assert_eq!(got, expect, "level {level} subset {bits:b} {branch:?}"),
                            }
                            checked += 1;
                        }
                    }
                }
            }
        }
        assert!(checked > 1000);
    }

    #[test]
    fn stc_transitions_match_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let (g, o, s) = random_case(&mut rng);
            let sweep = Sweep::new(&g, &o, &s);
            for level in 0..g.m() {
                let plan = sweep.plan(level);
                let e = o.order()[level];
                for bits in 0u64..1 << level {
                    let present = subset(&o, g.m(), level, bits);
                    let psi = stc_by_definition(&g, &o, &s, level, &present);
                    for branch in Branch::BOTH {
                        let mut next = present.clone();
                        next[e] = branch == Branch::Hi;
                        match psi.transition(&plan, branch) {
                            Outcome::Live(got) => {
                                assert_eq!(got, stc_by_definition(&g, &o, &s, level + 1, &next));
                                assert_eq!(got.sccs(), stc_by_definition(&g, &o, &s, level + 1, &next).sccs());
                            }
                            Outcome::Bottom => {
                                // No vertex that still has undecided edges can ever be reached.
                                let alive: Vec<u32> = (0..g.n() as u32)
                                    .filter(|&w| o.last_touch(w).is_some_and(|l| l > level))
                                    .collect();
                                assert!(!some_completion(&g, &o, &s, &next, level + 1, |r| alive
                                    .iter()
                                    .any(|&w| r[w as usize] && !s.contains(w))));
                            }
                            Outcome::Top => panic!("STC transition produced Top"),
                        }
                    }
                }
            }
        }
    }

    /// recover_tc(Ψ_k(E'), u) equals Φ_k^u(E') built directly.
    #[test]
    fn recover_tc_matches_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut checked = 0;
        for _ in 0..200 {
            let (g, o, s) = random_case(&mut rng);
            for level in 1..g.m() {
                for bits in 0u64..1 << level {
                    let present = subset(&o, g.m(), level, bits);
                    let psi = stc_by_definition(&g, &o, &s, level, &present);
                    for (p, &u) in o.frontier(level).iter().enumerate() {
                        if psi.is_reached(p) || s.contains(u) {
                            continue;
                        }
                        let direct = tc_by_definition(&g, &o, &s, level, &present, u);
                        assert_eq!(Outcome::Live(psi.recover_tc(p, u)), direct);
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 200);
    }

    /// Successor links agree with the conditional meaning of an SCC: a
    /// `Top` link means every member is reached once the edge is decided,
    /// `Bottom` means no completion reaches a member, and an SCC link points
    /// at the component of a surviving member.
    #[test]
    fn successive_scc_cases_are_sound() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..200 {
            let (g, o, s) = random_case(&mut rng);
            let sweep = Sweep::new(&g, &o, &s);
            for level in 0..g.m() {
                let plan = sweep.plan(level);
                let e = o.order()[level];
                let w = o.frontier(level);
                for bits in 0u64..1 << level {
                    let present = subset(&o, g.m(), level, bits);
                    let psi = stc_by_definition(&g, &o, &s, level, &present);
                    let part = psi.sccs();
                    for branch in Branch::BOTH {
                        let next = psi.transition(&plan, branch);
                        let next_sccs = next.as_live().map(|n| n.sccs());
                        let mut present_next = present.clone();
                        present_next[e] = branch == Branch::Hi;
                        for &members in part.members() {
                            let vs: Vec<u32> = super::super::bits(members).map(|p| w[p]).collect();
                            match successive_scc(&psi, members, &plan, branch, &next, next_sccs.as_ref()) {
                                Successor::Top => {
                                    let r = reach(&g, &present_next, s.members());
                                    assert!(vs.iter().all(|&v| r[v as usize]));
                                }
                                Successor::Bottom => assert!(!some_completion(&g, &o, &s, &present_next, level + 1, |r| {
                                    vs.iter().any(|&v| r[v as usize])
                                })),
                                Successor::Scc(c) => {
                                    let n = next.as_live().unwrap();
                                    let target = next_sccs.as_ref().unwrap().members()[c];
                                    let survivors: Vec<u32> = super::super::bits(target)
                                        .map(|q| o.frontier(level + 1)[q])
                                        .collect();
                                    assert!(vs.iter().any(|v| survivors.contains(v)));
                                    assert!(n.width() == o.frontier(level + 1).len());
                                }
                                Successor::Vanishes => {
                                    assert!(vs.iter().all(|&v| !o.on_frontier(level + 1, v)));
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn imaginary_target_spec_is_retired() {
        assert_eq!(TargetSpec::IMAGINARY, TargetSpec { local: None, done: true });
    }
}
