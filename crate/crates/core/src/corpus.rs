//! Deterministic test corpora: small graphs up to isomorphism and seeded
//! random hypergraphs and distributions.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coverings::all_permutations;
use crate::distributions::SubsetDistribution;
use crate::graphs::{Hypergraph, Multigraph};
use crate::poly::{random_rational, Rational};
use crate::spectral::closed_form_rho;

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect()
}

/// Connected simple graphs on exactly `n` vertices, one per isomorphism
/// class, ordered by edge count then by canonical edge mask.
pub fn connected_simple_graphs(n: usize) -> Vec<Multigraph> {
    assert!(n <= 7, "exhaustive generation supports n ≤ 7");
    let all = pairs(n);
    let m = all.len();
    let perms = all_permutations(n);
    // where each pair goes under each vertex permutation
    let moved: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| {
            all.iter()
                .map(|&(u, v)| {
                    let (a, b) = (p.apply(u), p.apply(v));
                    all.iter().position(|&q| q == (a.min(b), a.max(b))).unwrap()
                })
                .collect()
        })
        .collect();
    let graph = |mask: u32| {
        let edges = (0..m)
            .filter(|k| mask >> k & 1 == 1)
            .map(|k| all[k])
            .collect();
        Multigraph::new(n, edges).expect("pairs are in range")
    };
    let mut seen = BTreeSet::new();
    for mask in 0u32..1 << m {
        if seen.contains(&(mask.count_ones(), mask)) || !graph(mask).is_connected() {
            continue;
        }
        let canonical = moved
            .iter()
            .map(|img| {
                (0..m)
                    .filter(|k| mask >> k & 1 == 1)
                    .fold(0u32, |acc, k| acc | 1 << img[k])
            })
            .min()
            .unwrap_or(0);
        seen.insert((mask.count_ones(), canonical));
    }
    seen.into_iter().map(|(_, mask)| graph(mask)).collect()
}

/// Connected simple graphs with `1 ≤ n ≤ max_n`, by increasing `n`.
pub fn connected_simple_graphs_up_to(max_n: usize) -> Vec<Multigraph> {
    (1..=max_n).flat_map(connected_simple_graphs).collect()
}

fn canonical_multiset(
    n: usize,
    edges: &[(usize, usize)],
    perms: &[Vec<usize>],
) -> Vec<(usize, usize)> {
    perms
        .iter()
        .map(|p| {
            let mut e: Vec<(usize, usize)> = edges
                .iter()
                .map(|&(u, v)| (p[u].min(p[v]), p[u].max(p[v])))
                .collect();
            e.sort_unstable();
            e
        })
        .min()
        .unwrap_or_else(|| {
            debug_assert_eq!(n, 0);
            Vec::new()
        })
}

/// Multigraphs (loops and parallel edges allowed, not necessarily
/// connected) with `1 ≤ n ≤ max_n` and at most `max_edges` edges, one per
/// isomorphism class, ordered by `n`, edge count, then canonical edge list.
pub fn small_multigraphs(max_n: usize, max_edges: usize) -> Vec<Multigraph> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let slots: Vec<(usize, usize)> = (0..n).flat_map(|u| (u..n).map(move |v| (u, v))).collect();
        let perms: Vec<Vec<usize>> = all_permutations(n)
            .iter()
            .map(|p| p.images().to_vec())
            .collect();
        let mut seen = BTreeSet::new();
        // multisets of slots as non-decreasing index sequences
        let mut stack: Vec<Vec<usize>> = vec![Vec::new()];
        while let Some(seq) = stack.pop() {
            let edges: Vec<(usize, usize)> = seq.iter().map(|&k| slots[k]).collect();
            seen.insert((edges.len(), canonical_multiset(n, &edges, &perms)));
            if seq.len() < max_edges {
                let from = seq.last().copied().unwrap_or(0);
                for k in from..slots.len() {
                    let mut next = seq.clone();
                    next.push(k);
                    stack.push(next);
                }
            }
        }
        out.extend(
            seen.into_iter()
                .map(|(_, e)| Multigraph::new(n, e).expect("slots are in range")),
        );
    }
    out
}

/// Seeded hypergraph with a multiplicity vector `κ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperCase {
    pub hypergraph: Hypergraph,
    pub kappa: Vec<u16>,
}

/// `count` random hypergraphs with `1 ≤ n ≤ 8`, at most 5 edges of size
/// 1 to 4 (repeats allowed) and `κ_i ∈ {0, 1, 2}`.
pub fn random_hypergraphs(count: usize, seed: u64) -> Vec<HyperCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=8);
            let m = rng.gen_range(0..=5);
            let vertices: Vec<usize> = (0..n).collect();
            let edges = (0..m)
                .map(|_| {
                    let size = rng.gen_range(1..=n.min(4));
                    vertices.choose_multiple(&mut rng, size).copied().collect()
                })
                .collect();
            let kappa = (0..n).map(|_| rng.gen_range(0..=2)).collect();
            HyperCase {
                hypergraph: Hypergraph::new(n, edges).expect("edges are valid"),
                kappa,
            }
        })
        .collect()
}

/// Connected graphs on at most `max_n` vertices with a closed-form
/// universal-cover spectral radius: trees, cycles and complete graphs.
pub fn closed_form_family(max_n: usize) -> Vec<Multigraph> {
    connected_simple_graphs_up_to(max_n)
        .into_iter()
        .filter(|g| closed_form_rho(g).is_some())
        .collect()
}

/// Independent inclusion probabilities with denominators at most 10.
pub fn random_bernoulli(n: usize, rng: &mut impl Rng) -> SubsetDistribution {
    let p: Vec<Rational> = (0..n).map(|_| random_rational(rng, 0, 1, 10)).collect();
    SubsetDistribution::bernoulli(&p).expect("probabilities lie in [0, 1]")
}

/// An arbitrary distribution: random support of up to 6 sets with random
/// positive integer weights, normalised.
pub fn random_distribution(n: usize, rng: &mut impl Rng) -> SubsetDistribution {
    let k = rng.gen_range(1..=6.min(1 << n));
    let mut sets = BTreeSet::new();
    while sets.len() < k {
        sets.insert(rng.gen_range(0u32..1 << n));
    }
    let weights: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=9)).collect();
    let total: i64 = weights.iter().sum();
    let entries = sets
        .into_iter()
        .zip(weights)
        .map(|(mask, w)| {
            (
                (0..n).filter(|i| mask >> i & 1 == 1).collect(),
                Rational::new(w.into(), total.into()),
            )
        })
        .collect();
    SubsetDistribution::new(n, entries).expect("weights are normalised")
}

/// `count` seeded (graph, product distribution) pairs over
/// [`closed_form_family`] with `n ≤ 5`.
pub fn bernoulli_pairs(count: usize, seed: u64) -> Vec<(Multigraph, SubsetDistribution)> {
    let family = closed_form_family(5);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let g = family.choose(&mut rng).expect("family is nonempty").clone();
            let p = random_bernoulli(g.n(), &mut rng);
            (g, p)
        })
        .collect()
}

/// Every graph of [`closed_form_family`] with `n ≤ 5`, paired with the
/// uniform distribution on `k`-subsets for each `0 ≤ k ≤ n`.
pub fn uniform_pairs() -> Vec<(Multigraph, SubsetDistribution)> {
    closed_form_family(5)
        .into_iter()
        .flat_map(|g| {
            (0..=g.n()).map(move |k| {
                (
                    g.clone(),
                    SubsetDistribution::uniform_k(g.n(), k).expect("k ≤ n"),
                )
            })
        })
        .collect()
}
