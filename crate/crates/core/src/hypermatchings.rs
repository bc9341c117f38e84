//! Relaxed matchings and relaxed κ-subgraphs of hypergraphs.
//!
//! A relaxed matching picks, from distinct edges `e`, pairwise disjoint
//! subsets `S_e ⊆ e` with `|S_e| > 1`. Pairs are labelled by edge id, so
//! repeated edges contribute independently. Within an edge, subsets are
//! listed in colex order.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::One;

use crate::graphs::Hypergraph;
use crate::matchings::Packings;
use crate::poly::{falling_factorial, int, DiffOperator, MultiPoly, Rational, UniPoly};
use crate::{Error, Result};

/// `(edge id, subset)` pairs, edge ids ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelaxedMatching {
    pub parts: Vec<(usize, Vec<usize>)>,
}

/// Like [`RelaxedMatching`] but subsets may overlap.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelaxedSubgraph {
    pub parts: Vec<(usize, Vec<usize>)>,
}

/// `Π (|S| - 1)` over the parts.
pub fn weight(parts: &[(usize, Vec<usize>)]) -> BigInt {
    parts
        .iter()
        .map(|(_, s)| BigInt::from(s.len() - 1))
        .product()
}

impl RelaxedMatching {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn weight(&self) -> BigInt {
        weight(&self.parts)
    }

    /// Covered vertices, ascending.
    pub fn vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .parts
            .iter()
            .flat_map(|(_, s)| s.iter().copied())
            .collect();
        v.sort_unstable();
        v
    }
}

impl RelaxedSubgraph {
    pub fn degree(&self, i: usize) -> usize {
        self.parts.iter().filter(|(_, s)| s.contains(&i)).count()
    }
}

/// Subsets of `e` with at least two elements, colex order.
fn big_subsets(e: &[usize]) -> Vec<Vec<usize>> {
    (1u32..1 << e.len())
        .filter(|m| m.count_ones() > 1)
        .map(|m| {
            (0..e.len())
                .filter(|&k| m >> k & 1 == 1)
                .map(|k| e[k])
                .collect()
        })
        .collect()
}

/// Every usable `(edge, subset)` pair in enumeration order.
fn candidate_parts(h: &Hypergraph) -> Vec<(usize, Vec<usize>)> {
    h.edges()
        .iter()
        .enumerate()
        .flat_map(|(id, e)| big_subsets(e).into_iter().map(move |s| (id, s)))
        .collect()
}

/// All relaxed matchings including the empty one, in lexicographic order of
/// the chosen candidate pairs.
pub fn enumerate_relaxed_matchings(h: &Hypergraph) -> impl Iterator<Item = RelaxedMatching> {
    let n = h.n();
    assert!(
        n + h.num_edges() <= 128,
        "relaxed matching enumeration supports n + |E| ≤ 128"
    );
    let parts = candidate_parts(h);
    // one bit per vertex, plus one per edge so an edge is used at most once
    let masks: Vec<u128> = parts
        .iter()
        .map(|(e, s)| s.iter().fold(1u128 << (n + e), |m, &v| m | 1 << v))
        .collect();
    Packings::new(masks).map(move |idx| RelaxedMatching {
        parts: idx.iter().map(|&k| parts[k].clone()).collect(),
    })
}

/// Number of distinct subset families `{S_e}` over all relaxed matchings,
/// forgetting which edge each subset came from.
pub fn count_unlabeled_relaxed_matchings(h: &Hypergraph) -> usize {
    enumerate_relaxed_matchings(h)
        .map(|m| {
            let mut sets: Vec<Vec<usize>> = m.parts.into_iter().map(|(_, s)| s).collect();
            sets.sort();
            sets
        })
        .collect::<BTreeSet<_>>()
        .len()
}

fn signed(k: usize, w: BigInt) -> Rational {
    Rational::from_integer(if k.is_multiple_of(2) { w } else { -w })
}

/// `η_H(x) = Σ_M (-1)^{|M|} W(M) Π_{i ∉ V(M)} x_i`.
pub fn relaxed_matching_poly(h: &Hypergraph) -> MultiPoly {
    let n = h.n();
    let mut p = MultiPoly::zero(n);
    for m in enumerate_relaxed_matchings(h) {
        let covered = m.vertices();
        let exp = (0..n).map(|i| (!covered.contains(&i)) as u16).collect();
        p.add_term(exp, signed(m.len(), m.weight()));
    }
    p
}

/// `Σ_M (-1)^{|M|} W(M) Π_{i ∈ V(M)} x_i`.
pub fn relaxed_matching_poly_matched(h: &Hypergraph) -> MultiPoly {
    let n = h.n();
    let mut p = MultiPoly::zero(n);
    for m in enumerate_relaxed_matchings(h) {
        let covered = m.vertices();
        let exp = (0..n).map(|i| covered.contains(&i) as u16).collect();
        p.add_term(exp, signed(m.len(), m.weight()));
    }
    p
}

/// `η_H(x) = Σ_M (-1)^{|M|} W(M) x^{n - |V(M)|}`.
pub fn relaxed_matching_poly_univariate(h: &Hypergraph) -> UniPoly {
    relaxed_matching_poly(h).diagonal()
}

fn check_kappa(h: &Hypergraph, kappa: &[u16]) -> Result<()> {
    if kappa.len() != h.n() {
        return Err(Error::invalid(format!(
            "κ has {} entries for {} vertices",
            kappa.len(),
            h.n()
        )));
    }
    Ok(())
}

/// All relaxed κ-subgraphs: at most one subset per edge, `deg(i) ≤ κ_i`.
/// Lexicographic in (edge id, colex subset), the empty subgraph first.
pub fn enumerate_relaxed_kappa_subgraphs(
    h: &Hypergraph,
    kappa: &[u16],
) -> Result<Vec<RelaxedSubgraph>> {
    check_kappa(h, kappa)?;
    let options: Vec<Vec<Vec<usize>>> = h.edges().iter().map(|e| big_subsets(e)).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    let mut deg = vec![0u16; h.n()];
    fn rec(
        from: usize,
        options: &[Vec<Vec<usize>>],
        kappa: &[u16],
        deg: &mut [u16],
        chosen: &mut Vec<(usize, Vec<usize>)>,
        out: &mut Vec<RelaxedSubgraph>,
    ) {
        out.push(RelaxedSubgraph {
            parts: chosen.clone(),
        });
        for e in from..options.len() {
            for s in &options[e] {
                if s.iter().all(|&i| deg[i] < kappa[i]) {
                    s.iter().for_each(|&i| deg[i] += 1);
                    chosen.push((e, s.clone()));
                    rec(e + 1, options, kappa, deg, chosen, out);
                    chosen.pop();
                    s.iter().for_each(|&i| deg[i] -= 1);
                }
            }
        }
    }
    rec(0, &options, kappa, &mut deg, &mut chosen, &mut out);
    Ok(out)
}

/// `η_H^κ(x) = Σ_K (-1)^{|E(K)|} W(K) Π_i x_i^{κ_i - deg_K(i)}` with
/// `W(K) = Π (|S_e| - 1) · Π_i (κ_i)_{deg_K(i)}`.
pub fn relaxed_kappa_subgraph_poly(h: &Hypergraph, kappa: &[u16]) -> Result<MultiPoly> {
    let n = h.n();
    let mut p = MultiPoly::zero(n);
    for k in enumerate_relaxed_kappa_subgraphs(h, kappa)? {
        let degs: Vec<u16> = (0..n).map(|i| k.degree(i) as u16).collect();
        let poch: BigInt = (0..n)
            .map(|i| falling_factorial(kappa[i] as u64, degs[i] as u64))
            .product();
        let exp = (0..n).map(|i| kappa[i] - degs[i]).collect();
        p.add_term(exp, signed(k.parts.len(), weight(&k.parts) * poch));
    }
    Ok(p)
}

/// `MAP[(1 - ∂_e) Π_{i∈e} (1 + ∂_i)]`, built literally.
pub fn edge_operator(n: usize, e: &[usize]) -> DiffOperator {
    let one = DiffOperator::identity(n);
    let base = &one - &DiffOperator::partial_sum(n, e.iter().copied());
    e.iter()
        .fold(base, |acc, &i| {
            acc.compose(&(&one + &DiffOperator::partial(n, i)))
        })
        .map_multiaffine_part()
}

/// `Π_e MAP[(1 - ∂_e) Π_{i∈e} (1 + ∂_i)] x^κ`: the edge operators are
/// expanded, multiplied, then applied once.
pub fn relaxed_poly_via_operators(h: &Hypergraph, kappa: &[u16]) -> Result<MultiPoly> {
    check_kappa(h, kappa)?;
    let n = h.n();
    let op = h.edges().iter().fold(DiffOperator::identity(n), |acc, e| {
        acc.compose(&edge_operator(n, e))
    });
    Ok(op.apply(&MultiPoly::monomial(kappa.to_vec(), Rational::one())))
}

/// `Π_e (1 - ∂_e) Π_i (1 + ∂_i)^{deg_H(i)} x^𝟙`, applied factor by factor.
pub fn relaxed_matching_poly_via_degrees(h: &Hypergraph) -> MultiPoly {
    let n = h.n();
    let one = DiffOperator::identity(n);
    let mut p = MultiPoly::subset_monomial(n, 0..n);
    for i in 0..n {
        let raise = &one + &DiffOperator::partial(n, i);
        for _ in 0..h.degree(i) {
            p = raise.apply(&p);
        }
    }
    for e in h.edges() {
        p = (&one - &DiffOperator::partial_sum(n, e.iter().copied())).apply(&p);
    }
    p
}

/// Outcome of one identity over all its instances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub cases: usize,
    /// First failing instance, if any.
    pub counterexample: Option<String>,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(IdentityCheck::passed)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.checks
                .iter()
                .map(|c| {
                    serde_json::json!({
                        "identity": c.name,
                        "cases": c.cases,
                        "passed": c.passed(),
                        "counterexample": c.counterexample,
                    })
                })
                .collect(),
        )
    }
}

/// `η` of `H` with the vertices of `set` weakly deleted, back in the
/// variables of `H` (deleted vertices carry no variable).
fn eta_after_deleting(h: &Hypergraph, set: &[usize], n: usize) -> MultiPoly {
    let (rest, map) = h.delete_vertices_weak(set);
    let inverse: Vec<usize> = (0..map.len()).filter(|&v| map[v].is_some()).collect();
    relaxed_matching_poly(&rest).embed(n, &inverse)
}

fn record(check: &mut IdentityCheck, ok: bool, describe: impl FnOnce() -> String) {
    check.cases += 1;
    if !ok && check.counterexample.is_none() {
        check.counterexample = Some(describe());
    }
}

/// Checks, for every applicable vertex `i` and edge `e`:
/// (i) edge recursion, (ii) vertex recursion, (iii) multiplicativity over
/// disjoint unions (on `H ⊔ H` and on the connected components of `H`),
/// (iv) `∂_i η_H = η_{H∖i}`.
pub fn identity_suite(h: &Hypergraph) -> IdentityReport {
    let n = h.n();
    let eta = relaxed_matching_poly(h);
    let text = |p: &MultiPoly| p.to_text();

    let mut edge_rec = IdentityCheck {
        name: "(i) edge recursion",
        cases: 0,
        counterexample: None,
    };
    for (e, edge) in h.edges().iter().enumerate() {
        let without = h.delete_edge(e);
        let mut rhs = relaxed_matching_poly(&without);
        for s in big_subsets(edge) {
            rhs -= &eta_after_deleting(&without, &s, n).scale(&int(s.len() as i64 - 1));
        }
        record(&mut edge_rec, rhs == eta, || {
            format!("edge {e}: {} vs {}", text(&eta), text(&rhs))
        });
    }

    let mut vertex_rec = IdentityCheck {
        name: "(ii) vertex recursion",
        cases: 0,
        counterexample: None,
    };
    for i in 0..n {
        let mut rhs = &MultiPoly::var(n, i) * &eta_after_deleting(h, &[i], n);
        for e in h.incidence(i) {
            let without = h.delete_edge(e);
            for s in big_subsets(&h.edges()[e])
                .into_iter()
                .filter(|s| s.contains(&i))
            {
                rhs -= &eta_after_deleting(&without, &s, n).scale(&int(s.len() as i64 - 1));
            }
        }
        record(&mut vertex_rec, rhs == eta, || {
            format!("vertex {i}: {} vs {}", text(&eta), text(&rhs))
        });
    }

    let mut union = IdentityCheck {
        name: "(iii) disjoint union",
        cases: 0,
        counterexample: None,
    };
    let doubled = relaxed_matching_poly(&h.disjoint_union(h));
    let shifted: Vec<usize> = (n..2 * n).collect();
    let identity: Vec<usize> = (0..n).collect();
    let product = &eta.embed(2 * n, &identity) * &eta.embed(2 * n, &shifted);
    record(&mut union, doubled == product, || {
        format!("H ⊔ H: {} vs {}", text(&doubled), text(&product))
    });
    let components = hyper_components(h);
    let mut by_parts = MultiPoly::one(n);
    for comp in &components {
        let others: Vec<usize> = (0..n).filter(|v| !comp.contains(v)).collect();
        by_parts = &by_parts * &eta_after_deleting(h, &others, n);
    }
    record(&mut union, by_parts == eta, || {
        format!(
            "components {components:?}: {} vs {}",
            text(&eta),
            text(&by_parts)
        )
    });

    let mut derivative = IdentityCheck {
        name: "(iv) derivative",
        cases: 0,
        counterexample: None,
    };
    for i in 0..n {
        let lhs = eta.derivative(i);
        let rhs = eta_after_deleting(h, &[i], n);
        record(&mut derivative, lhs == rhs, || {
            format!("vertex {i}: {} vs {}", text(&lhs), text(&rhs))
        });
    }

    IdentityReport {
        checks: vec![edge_rec, vertex_rec, union, derivative],
    }
}

/// Vertex sets of the connected components, each ascending, ordered by
/// smallest vertex.
fn hyper_components(h: &Hypergraph) -> Vec<Vec<usize>> {
    let n = h.n();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(l: &mut [usize], mut x: usize) -> usize {
        while l[x] != x {
            l[x] = l[l[x]];
            x = l[x];
        }
        x
    }
    for e in h.edges() {
        for w in e.windows(2) {
            let (a, b) = (find(&mut label, w[0]), find(&mut label, w[1]));
            label[a.max(b)] = a.min(b);
        }
    }
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut index = vec![usize::MAX; n];
    for v in 0..n {
        let r = find(&mut label, v);
        if index[r] == usize::MAX {
            index[r] = comps.len();
            comps.push(Vec::new());
        }
        comps[index[r]].push(v);
    }
    comps
}
