//! d-sheeted coverings of multigraphs.
//!
//! A labeling assigns a permutation `σ_e ∈ S_d` to every edge in its
//! positive orientation (the reverse orientation implicitly carries
//! `σ_e⁻¹`). The covering graph has vertex `(v, i)` at index `v·d + i` and,
//! for every edge `e` and sheet `i`, an edge from `(h(e), i)` to
//! `(t(e), σ_e(i))`. Loops therefore lift to loops at fixed points and to
//! double edges on 2-cycles.
//!
//! Labelings are enumerated lazily in mixed-radix lexicographic order (edge
//! 0 is the most significant digit, each digit indexing `S_d` in
//! lexicographic order), and every average is an exact streaming fold.

mod group;

pub use group::{
    all_permutations, cayley_from_bouquet, FiniteGroup, GroupLabeling, Permutation, MAX_GROUP_ORDER,
};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::graphs::Multigraph;
use crate::matchings::{matching_counts, matching_poly_matched, matching_poly_multivariate};
use crate::poly::{charpoly, charpoly_integer, int, MultiPoly, Rational, UniPoly};
use crate::{Error, Result};

/// Default cap on the number of labelings an operation may enumerate.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// One permutation per edge of the base graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoveringLabeling {
    d: usize,
    perms: Vec<Permutation>,
}

impl CoveringLabeling {
    pub fn new(g: &Multigraph, d: usize, perms: Vec<Permutation>) -> Result<Self> {
        if perms.len() != g.num_edges() {
            return Err(Error::invalid(format!(
                "labeling has {} permutations for {} edges",
                perms.len(),
                g.num_edges()
            )));
        }
        if perms.iter().any(|p| p.degree() != d) {
            return Err(Error::invalid(format!(
                "every permutation must act on 0..{d}"
            )));
        }
        Ok(CoveringLabeling { d, perms })
    }

    /// All edges labelled by the identity: `d` disjoint copies of the base.
    pub fn trivial(g: &Multigraph, d: usize) -> Self {
        CoveringLabeling {
            d,
            perms: vec![Permutation::identity(d); g.num_edges()],
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }
}

/// `(d!)^k` as a big integer.
pub fn count_labelings(d: usize, edges: usize) -> BigInt {
    let fact: BigInt = (1..=d).map(BigInt::from).product();
    num_traits::pow(fact, edges)
}

fn check_budget(count: &BigInt, budget: u64) -> Result<u64> {
    match count.to_u64() {
        Some(c) if c <= budget => Ok(c),
        _ => Err(Error::BudgetExceeded {
            count: count.to_string(),
            cap: budget,
        }),
    }
}

/// The labelings of a base graph, optionally with some edges pinned to the
/// identity.
#[derive(Clone, Debug)]
pub struct CoveringSpace<'g> {
    graph: &'g Multigraph,
    d: usize,
    sd: Vec<Permutation>,
    free: Vec<usize>,
    len: u64,
}

impl<'g> CoveringSpace<'g> {
    /// Every labeling of `g`: `(d!)^{|E|}` of them.
    pub fn new(graph: &'g Multigraph, d: usize, budget: u64) -> Result<Self> {
        Self::with_free_edges(graph, d, (0..graph.num_edges()).collect(), budget)
    }

    /// Labelings that are the identity on a spanning forest of `g`.
    ///
    /// Relabelling the sheets over each vertex `v` by `τ_v` turns `σ_e` into
    /// `τ_{t(e)} σ_e τ_{h(e)}⁻¹` and yields an isomorphic covering graph.
    /// Every labeling is carried onto the forest-trivial ones by exactly
    /// `(d!)^c` such relabellings (`c` components), so averages of
    /// isomorphism invariants over this smaller space equal averages over
    /// all labelings.
    pub fn gauge_fixed(graph: &'g Multigraph, d: usize, budget: u64) -> Result<Self> {
        let forest = graph.spanning_forest();
        let free = (0..graph.num_edges())
            .filter(|e| !forest.contains(e))
            .collect();
        Self::with_free_edges(graph, d, free, budget)
    }

    fn with_free_edges(
        graph: &'g Multigraph,
        d: usize,
        free: Vec<usize>,
        budget: u64,
    ) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("coverings need d ≥ 1 sheets"));
        }
        let len = check_budget(&count_labelings(d, free.len()), budget)?;
        Ok(CoveringSpace {
            graph,
            d,
            sd: all_permutations(d),
            free,
            len,
        })
    }

    pub fn graph(&self) -> &Multigraph {
        self.graph
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn digits_at(&self, mut idx: u64) -> Vec<usize> {
        let radix = self.sd.len() as u64;
        let mut digits = vec![0; self.free.len()];
        for slot in digits.iter_mut().rev() {
            *slot = (idx % radix) as usize;
            idx /= radix;
        }
        digits
    }

    fn labeling_from_digits(&self, digits: &[usize]) -> CoveringLabeling {
        let mut perms = vec![Permutation::identity(self.d); self.graph.num_edges()];
        for (&e, &k) in self.free.iter().zip(digits) {
            perms[e] = self.sd[k].clone();
        }
        CoveringLabeling { d: self.d, perms }
    }

    /// The `idx`-th labeling in mixed-radix lexicographic order.
    pub fn labeling_at(&self, idx: u64) -> CoveringLabeling {
        assert!(idx < self.len, "labeling index {idx} out of range");
        self.labeling_from_digits(&self.digits_at(idx))
    }

    /// Labelings with indices in `range`, in order.
    pub fn iter_range(
        &self,
        range: std::ops::Range<u64>,
    ) -> impl Iterator<Item = CoveringLabeling> + '_ {
        let end = range.end.min(self.len);
        let mut digits = self.digits_at(range.start.min(end));
        let radix = self.sd.len();
        (range.start..end).map(move |_| {
            let lab = self.labeling_from_digits(&digits);
            for k in digits.iter_mut().rev() {
                *k += 1;
                if *k < radix {
                    break;
                }
                *k = 0;
            }
            lab
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = CoveringLabeling> + '_ {
        self.iter_range(0..self.len)
    }

    /// Serial fold over all labelings.
    pub fn fold<T>(&self, init: T, f: impl Fn(T, &CoveringLabeling) -> T) -> T {
        self.iter().fold(init, |acc, lab| f(acc, &lab))
    }

    /// Folds index-range chunks in parallel and merges the partial results
    /// left to right in index order.
    pub fn par_fold<T, Z, F, M>(&self, zero: Z, f: F, merge: M) -> T
    where
        T: Send,
        Z: Fn() -> T + Sync,
        F: Fn(T, &CoveringLabeling) -> T + Sync,
        M: Fn(T, T) -> T,
    {
        let chunks = (rayon::current_num_threads() as u64 * 8).clamp(1, self.len.max(1));
        let step = self.len.div_ceil(chunks).max(1);
        let partials: Vec<T> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let lo = (c * step).min(self.len);
                let hi = ((c + 1) * step).min(self.len);
                self.iter_range(lo..hi)
                    .fold(zero(), |acc, lab| f(acc, &lab))
            })
            .collect();
        partials.into_iter().fold(zero(), merge)
    }

    /// Exact average of an integer-coefficient polynomial-valued function.
    pub fn average_int_poly(
        &self,
        parallel: bool,
        f: impl Fn(&CoveringLabeling) -> Vec<BigInt> + Sync,
    ) -> UniPoly {
        let add = |mut acc: Vec<BigInt>, v: Vec<BigInt>| {
            if acc.len() < v.len() {
                acc.resize(v.len(), BigInt::zero());
            }
            for (a, b) in acc.iter_mut().zip(v) {
                *a += b;
            }
            acc
        };
        let total = if parallel {
            self.par_fold(Vec::new, |acc, lab| add(acc, f(lab)), add)
        } else {
            self.fold(Vec::new(), |acc, lab| add(acc, f(lab)))
        };
        let len = Rational::from_integer(BigInt::from(self.len));
        UniPoly::new(
            total
                .into_iter()
                .map(|c| Rational::from_integer(c) / &len)
                .collect(),
        )
    }

    /// Exact average of a multivariate-polynomial-valued function.
    pub fn average_multi(
        &self,
        parallel: bool,
        nvars: usize,
        f: impl Fn(&CoveringLabeling) -> MultiPoly + Sync,
    ) -> MultiPoly {
        let total = if parallel {
            self.par_fold(
                || MultiPoly::zero(nvars),
                |acc, lab| acc + f(lab),
                |a, b| a + b,
            )
        } else {
            self.fold(MultiPoly::zero(nvars), |acc, lab| acc + f(lab))
        };
        total.scale(&(Rational::one() / Rational::from_integer(BigInt::from(self.len))))
    }
}

/// The covering graph determined by `sigma`, vertex `(v, i)` at `v·d + i`.
/// Edges are listed edge by edge, sheet by sheet.
pub fn covering_graph(g: &Multigraph, sigma: &CoveringLabeling) -> Multigraph {
    assert_eq!(
        sigma.perms.len(),
        g.num_edges(),
        "labeling does not fit the graph"
    );
    let d = sigma.d;
    let mut edges = Vec::with_capacity(g.num_edges() * d);
    for (&(h, t), p) in g.edges().iter().zip(&sigma.perms) {
        for i in 0..d {
            edges.push((h * d + i, t * d + p.apply(i)));
        }
    }
    Multigraph::new(g.n() * d, edges).expect("covering indices are in range")
}

/// Coefficients (low degree first) of `μ_H` for a covering graph `H`.
fn matching_poly_coeffs(h: &Multigraph) -> Vec<BigInt> {
    let n = h.n();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    for (k, m) in matching_counts(h).into_iter().enumerate() {
        coeffs[n - 2 * k] = if k % 2 == 0 { m } else { -m };
    }
    coeffs
}

/// `μ_{d,G}(x)`: average of `μ_H` over every `d`-sheeted covering `H`.
pub fn d_matching_poly(g: &Multigraph, d: usize, budget: u64) -> Result<UniPoly> {
    let space = CoveringSpace::new(g, d, budget)?;
    Ok(space.average_int_poly(true, |lab| matching_poly_coeffs(&covering_graph(g, lab))))
}

/// Multivariate `μ_{d,G}` in `n·d` variables (unmatched-vertex convention),
/// variable `v·d + i` belonging to vertex `(v, i)`.
pub fn d_matching_poly_multivariate(g: &Multigraph, d: usize, budget: u64) -> Result<MultiPoly> {
    let space = CoveringSpace::new(g, d, budget)?;
    Ok(space.average_multi(true, g.n() * d, |lab| {
        matching_poly_multivariate(&covering_graph(g, lab))
    }))
}

/// Average over all labelings of the matched-vertex matching polynomial of
/// the covering graph.
pub fn average_matched_poly(g: &Multigraph, d: usize, budget: u64) -> Result<MultiPoly> {
    let space = CoveringSpace::new(g, d, budget)?;
    Ok(space.average_multi(true, g.n() * d, |lab| {
        matching_poly_matched(&covering_graph(g, lab))
    }))
}

/// `1 - x_a x_b` in `nvars` variables.
fn one_minus_product(nvars: usize, a: usize, b: usize) -> MultiPoly {
    let mut exp = vec![0u16; nvars];
    exp[a] += 1;
    exp[b] += 1;
    &MultiPoly::one(nvars) - &MultiPoly::monomial(exp, int(1))
}

/// The factor of edge `e` under permutation `p` in `P_{σ,G}`: the product
/// of `1 - x_{h,k} x_{t,p(k)}` over all sheets `k`, except that a loop skips
/// the fixed points of `p`.
fn edge_term(g: &Multigraph, e: usize, p: &Permutation) -> MultiPoly {
    let d = p.degree();
    let nvars = g.n() * d;
    let (h, t) = g.edges()[e];
    let mut out = MultiPoly::one(nvars);
    for k in 0..d {
        if h == t && p.apply(k) == k {
            continue;
        }
        out = &out * &one_minus_product(nvars, h * d + k, t * d + p.apply(k));
    }
    out
}

/// `P_{σ,G}`: the subgraph generating polynomial of the covering graph with
/// the loop factors `1 - x²` removed. Its multiaffine part is the
/// matched-vertex matching polynomial of the covering graph.
pub fn per_labeling_gen_poly(g: &Multigraph, sigma: &CoveringLabeling) -> MultiPoly {
    let nvars = g.n() * sigma.d;
    (0..g.num_edges()).fold(MultiPoly::one(nvars), |acc, e| {
        &acc * &edge_term(g, e, &sigma.perms[e])
    })
}

/// `f_e = Σ_{σ_e ∈ S_d} (edge factor)`.
pub fn edge_factor(g: &Multigraph, e: usize, d: usize) -> MultiPoly {
    let nvars = g.n() * d;
    all_permutations(d)
        .iter()
        .fold(MultiPoly::zero(nvars), |acc, p| acc + edge_term(g, e, p))
}

/// `E_σ P_{σ,G}` in product form: `Π_e f_e / (d!)^{|E|}`. Refuses when the
/// labeling count exceeds `budget`, like the enumerating operations.
pub fn expected_cover_gen_poly(g: &Multigraph, d: usize, budget: u64) -> Result<MultiPoly> {
    if d == 0 {
        return Err(Error::invalid("coverings need d ≥ 1 sheets"));
    }
    check_budget(&count_labelings(d, g.num_edges()), budget)?;
    let fact = Rational::from_integer((1..=d).map(BigInt::from).product());
    let inv = Rational::one() / fact;
    let nvars = g.n() * d;
    Ok((0..g.num_edges()).fold(MultiPoly::one(nvars), |acc, e| {
        &acc * &edge_factor(g, e, d).scale(&inv)
    }))
}

/// `μ_{d,G}(x)` through the product form: the multiaffine part of
/// `E_σ P_{σ,G}`, moved to the unmatched-vertex convention and put on the
/// diagonal. Independent of covering enumeration.
pub fn d_matching_poly_product_form(g: &Multigraph, d: usize, budget: u64) -> Result<UniPoly> {
    let matched = expected_cover_gen_poly(g, d, budget)?.map_multiaffine_part();
    Ok(matched.complement_transform()?.diagonal())
}

/// `E_s det(xI - A^s)` over all `2^{|E|}` signings of a simple graph.
pub fn godsil_gutman_expected_charpoly(g: &Multigraph, budget: u64) -> Result<UniPoly> {
    if !g.is_simple() {
        return Err(Error::invalid(
            "signings are defined for simple graphs only",
        ));
    }
    let m = g.num_edges();
    let count = check_budget(&num_traits::pow(BigInt::from(2), m), budget)?;
    let n = g.n();
    let signed = |s: u64| -> Vec<BigInt> {
        let mut a = vec![vec![0i64; n]; n];
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            let w = if s >> e & 1 == 1 { -1 } else { 1 };
            a[u][v] = w;
            a[v][u] = w;
        }
        charpoly_integer(&a)
    };
    let total = (0..count).into_par_iter().map(signed).reduce(
        || vec![BigInt::zero(); n + 1],
        |mut acc, v| {
            for (a, b) in acc.iter_mut().zip(v) {
                *a += b;
            }
            acc
        },
    );
    let c = Rational::from_integer(BigInt::from(count));
    Ok(UniPoly::new(
        total
            .into_iter()
            .map(|x| Rational::from_integer(x) / &c)
            .collect(),
    ))
}

/// `det(xI - A_{σ,std})` as the exact quotient
/// `charpoly(covering graph) / charpoly(G)`.
pub fn std_cover_charpoly(g: &Multigraph, sigma: &CoveringLabeling) -> Result<UniPoly> {
    let lift = charpoly(&covering_graph(g, sigma).adjacency());
    let base = charpoly(&g.adjacency());
    lift.exact_div(&base).ok_or_else(|| {
        Error::Inconsistency(format!(
            "charpoly of the covering ({}) is not divisible by the base charpoly ({})",
            lift.to_text(),
            base.to_text()
        ))
    })
}

/// `E_σ charpoly(H_σ)` over `sheets`-sheeted coverings, and the number of
/// labelings actually enumerated.
///
/// The covering of a disconnected graph is the disjoint union of the
/// coverings of its components, labelled independently, so the expectation
/// factors over components. Each component is averaged over its gauge-fixed
/// space and `budget` applies per component.
pub fn expected_cover_charpoly(
    g: &Multigraph,
    sheets: usize,
    budget: u64,
) -> Result<(UniPoly, u64)> {
    let labels = g.components();
    let mut total = UniPoly::one();
    let mut enumerated = 0;
    for c in 0..g.num_components() {
        let part = g.induced(&(0..g.n()).filter(|&v| labels[v] == c).collect::<Vec<_>>());
        let space = CoveringSpace::gauge_fixed(&part, sheets, budget)?;
        enumerated += space.len();
        total = &total
            * &space.average_int_poly(true, |lab| {
                charpoly_integer(&covering_graph(&part, lab).adjacency())
            });
    }
    Ok((total, enumerated))
}

/// Both sides of the expected-characteristic-polynomial identity for the
/// standard representation of `S_{d+1}`, whose dimension is `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HpsReport {
    pub d: usize,
    /// Labelings enumerated, summed over components after gauge fixing.
    pub labelings: u64,
    /// `E_σ charpoly(H_σ)` over `(d+1)`-sheeted coverings.
    pub expected_cover_charpoly: UniPoly,
    /// `E_σ det(xI - A_{σ,std})`.
    pub expected_std_charpoly: UniPoly,
    /// `μ_{d,G}(x)` from `d`-sheeted coverings.
    pub d_matching: UniPoly,
    pub base_charpoly: UniPoly,
    pub holds: bool,
}

/// Checks `E_σ det(xI - A_{σ,std}) = μ_{d,G}(x)` over `(d+1)`-sheeted
/// coverings, equivalently `E_σ charpoly(H_σ) = μ_{d,G}(x)·charpoly(G)`.
///
/// The left side is averaged over the gauge-fixed labeling space (see
/// [`CoveringSpace::gauge_fixed`]); `budget` bounds both enumerations.
pub fn hps_identity_check(g: &Multigraph, d: usize, budget: u64) -> Result<HpsReport> {
    if d == 0 {
        return Err(Error::invalid("the identity needs d ≥ 1"));
    }
    let d_matching = d_matching_poly(g, d, budget)?;
    let base_charpoly = charpoly(&g.adjacency());
    let (expected_cover_charpoly, labelings) = expected_cover_charpoly(g, d + 1, budget)?;
    let expected_std_charpoly = expected_cover_charpoly
        .exact_div(&base_charpoly)
        .ok_or_else(|| {
            Error::Inconsistency(
                "expected covering charpoly is not divisible by the base charpoly".into(),
            )
        })?;
    let holds = expected_std_charpoly == d_matching
        && expected_cover_charpoly == &d_matching * &base_charpoly;
    Ok(HpsReport {
        d,
        labelings,
        expected_cover_charpoly,
        expected_std_charpoly,
        d_matching,
        base_charpoly,
        holds,
    })
}
