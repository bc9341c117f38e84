//! Matchings of multigraphs and their polynomials.
//!
//! A matching is a set of edge ids, so parallel edges give distinct
//! matchings; loops never occur in a matching.

use num_bigint::BigInt;

use crate::graphs::Multigraph;
use crate::poly::{int, MultiPoly, Rational, UniPoly};

/// A set of pairwise vertex-disjoint non-loop edges, ids ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    pub edges: Vec<usize>,
}

impl Matching {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Covered vertices, ascending.
    pub fn vertices(&self, g: &Multigraph) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .edges
            .iter()
            .flat_map(|&e| [g.edges()[e].0, g.edges()[e].1])
            .collect();
        v.sort_unstable();
        v
    }
}

/// Enumerates index sets of pairwise disjoint masks in lexicographic order
/// of the ascending index sequence, starting with the empty set. Zero masks
/// are never chosen.
pub(crate) struct Packings {
    masks: Vec<u128>,
    chosen: Vec<usize>,
    used: u128,
    started: bool,
}

impl Packings {
    pub(crate) fn new(masks: Vec<u128>) -> Self {
        Packings {
            masks,
            chosen: Vec::new(),
            used: 0,
            started: false,
        }
    }

    fn first_fit(&self, from: usize) -> Option<usize> {
        (from..self.masks.len()).find(|&j| self.masks[j] != 0 && self.masks[j] & self.used == 0)
    }
}

impl Iterator for Packings {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if !self.started {
            self.started = true;
            return Some(Vec::new());
        }
        let from = self.chosen.last().map_or(0, |&k| k + 1);
        if let Some(j) = self.first_fit(from) {
            self.chosen.push(j);
            self.used |= self.masks[j];
            return Some(self.chosen.clone());
        }
        while let Some(k) = self.chosen.pop() {
            self.used ^= self.masks[k];
            if let Some(j) = self.first_fit(k + 1) {
                self.chosen.push(j);
                self.used |= self.masks[j];
                return Some(self.chosen.clone());
            }
        }
        None
    }
}

fn edge_masks(g: &Multigraph) -> Vec<u128> {
    assert!(
        g.n() <= 128,
        "matching enumeration supports at most 128 vertices"
    );
    g.edges()
        .iter()
        .map(|&(u, v)| {
            if u == v {
                0
            } else {
                (1u128 << u) | (1u128 << v)
            }
        })
        .collect()
}

/// All matchings of `g` (including the empty one), lexicographic in edge ids.
pub fn enumerate_matchings(g: &Multigraph) -> impl Iterator<Item = Matching> {
    Packings::new(edge_masks(g)).map(|edges| Matching { edges })
}

/// `m_k`, the number of matchings with `k` edges, for `k = 0..=n/2`.
pub fn matching_counts(g: &Multigraph) -> Vec<BigInt> {
    let mut counts = vec![0u64; g.n() / 2 + 1];
    for m in Packings::new(edge_masks(g)) {
        counts[m.len()] += 1;
    }
    counts.into_iter().map(BigInt::from).collect()
}

/// `Σ_M (-1)^{|M|} Π_{i ∉ V(M)} x_i`: monomials on unmatched vertices.
pub fn matching_poly_multivariate(g: &Multigraph) -> MultiPoly {
    let n = g.n();
    let masks = edge_masks(g);
    let mut p = MultiPoly::zero(n);
    for m in Packings::new(masks.clone()) {
        let covered = m.iter().fold(0u128, |acc, &e| acc | masks[e]);
        let exp = (0..n).map(|i| (covered >> i & 1 == 0) as u16).collect();
        p.add_term(exp, sign(m.len()));
    }
    p
}

/// `Σ_M (-1)^{|M|} Π_{i ∈ V(M)} x_i`: monomials on matched vertices.
pub fn matching_poly_matched(g: &Multigraph) -> MultiPoly {
    let n = g.n();
    let masks = edge_masks(g);
    let mut p = MultiPoly::zero(n);
    for m in Packings::new(masks.clone()) {
        let covered = m.iter().fold(0u128, |acc, &e| acc | masks[e]);
        let exp = (0..n).map(|i| (covered >> i & 1) as u16).collect();
        p.add_term(exp, sign(m.len()));
    }
    p
}

/// `μ_G(x) = Σ_k (-1)^k m_k x^{n-2k}`.
pub fn matching_poly_univariate(g: &Multigraph) -> UniPoly {
    let n = g.n();
    let mut coeffs = vec![BigInt::from(0); n + 1];
    for (k, m) in matching_counts(g).into_iter().enumerate() {
        coeffs[n - 2 * k] = if k % 2 == 0 { m } else { -m };
    }
    UniPoly::from_bigints(coeffs)
}

/// `Π_{{i,j} ∈ E(G)} (1 - x_i x_j)`, loops contributing `1 - x_i²`.
pub fn subgraph_gen_poly(g: &Multigraph) -> MultiPoly {
    let n = g.n();
    let mut p = MultiPoly::one(n);
    for &(u, v) in g.edges() {
        let mut exp = vec![0u16; n];
        exp[u] += 1;
        exp[v] += 1;
        let factor = &MultiPoly::one(n) - &MultiPoly::monomial(exp, int(1));
        p = &p * &factor;
    }
    p
}

fn sign(k: usize) -> Rational {
    int(if k.is_multiple_of(2) { 1 } else { -1 })
}
