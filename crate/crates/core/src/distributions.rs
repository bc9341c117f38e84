//! Probability distributions on subsets of `[n]`, partition functions, the
//! Rayleigh inequality, and expected matching polynomials of random induced
//! subgraphs.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::graphs::Multigraph;
use crate::matchings::matching_poly_multivariate;
use crate::poly::{
    fmt_rational, parse_rational, random_rational, DiffOperator, MultiPoly, Rational,
    StabilityVerdict, Witness,
};
use crate::{Error, Result};

/// Largest ground set accepted for distributions.
pub const MAX_GROUND_SET: usize = 20;

/// Coordinates of Rayleigh test points lie in `[-RAYLEIGH_RANGE, RAYLEIGH_RANGE]`.
pub const RAYLEIGH_RANGE: i64 = 5;

/// Exact probability distribution on subsets of `0..n`, keyed by bitmask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetDistribution {
    n: usize,
    support: BTreeMap<u32, Rational>,
}

fn mask_of(set: &[usize]) -> u32 {
    set.iter().fold(0, |m, &i| m | 1 << i)
}

fn set_of(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

impl SubsetDistribution {
    /// Zero-probability entries are dropped; negative ones, repeated sets,
    /// out-of-range elements and totals other than exactly 1 are rejected.
    pub fn new(n: usize, entries: Vec<(Vec<usize>, Rational)>) -> Result<Self> {
        if n > MAX_GROUND_SET {
            return Err(Error::invalid(format!(
                "ground set size {n} exceeds {MAX_GROUND_SET}"
            )));
        }
        let mut support = BTreeMap::new();
        for (set, p) in entries {
            if let Some(&i) = set.iter().find(|&&i| i >= n) {
                return Err(Error::invalid(format!("element {i} outside 0..{n}")));
            }
            let mask = mask_of(&set);
            if mask.count_ones() as usize != set.len() {
                return Err(Error::invalid(format!("set {set:?} repeats an element")));
            }
            if p.is_negative() {
                return Err(Error::invalid(format!(
                    "negative probability {} for {set:?}",
                    fmt_rational(&p)
                )));
            }
            if support.contains_key(&mask) {
                return Err(Error::invalid(format!("set {set:?} listed twice")));
            }
            if !p.is_zero() {
                support.insert(mask, p);
            }
        }
        let total: Rational = support.values().sum();
        if !total.is_one() {
            return Err(Error::invalid(format!(
                "probabilities sum to {}, not 1",
                fmt_rational(&total)
            )));
        }
        Ok(SubsetDistribution { n, support })
    }

    pub fn point_mass(n: usize, set: &[usize]) -> Result<Self> {
        Self::new(n, vec![(set.to_vec(), Rational::one())])
    }

    /// Each `i` included independently with probability `p[i]`.
    pub fn bernoulli(p: &[Rational]) -> Result<Self> {
        let n = p.len();
        if let Some(x) = p.iter().find(|x| x.is_negative() || **x > Rational::one()) {
            return Err(Error::invalid(format!(
                "probability {} outside [0, 1]",
                fmt_rational(x)
            )));
        }
        if n > MAX_GROUND_SET {
            return Err(Error::invalid(format!(
                "ground set size {n} exceeds {MAX_GROUND_SET}"
            )));
        }
        let entries = (0u32..1 << n)
            .map(|mask| {
                let prob = (0..n).fold(Rational::one(), |acc, i| {
                    if mask >> i & 1 == 1 {
                        acc * &p[i]
                    } else {
                        acc * (Rational::one() - &p[i])
                    }
                });
                (set_of(mask, n), prob)
            })
            .collect();
        Self::new(n, entries)
    }

    /// Uniform on the `k`-subsets of `0..n`.
    pub fn uniform_k(n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(Error::invalid(format!("k = {k} exceeds n = {n}")));
        }
        if n > MAX_GROUND_SET {
            return Err(Error::invalid(format!(
                "ground set size {n} exceeds {MAX_GROUND_SET}"
            )));
        }
        let sets: Vec<u32> = (0u32..1 << n)
            .filter(|m| m.count_ones() as usize == k)
            .collect();
        let p = Rational::new(BigInt::one(), BigInt::from(sets.len()));
        Self::new(
            n,
            sets.into_iter()
                .map(|m| (set_of(m, n), p.clone()))
                .collect(),
        )
    }

    /// Two-point ground set with `P({0,1}) = a`, `P({0}) = b`, `P({1}) = c`,
    /// `P(∅) = d`.
    pub fn two_vertex(a: Rational, b: Rational, c: Rational, d: Rational) -> Result<Self> {
        Self::new(
            2,
            vec![(vec![0, 1], a), (vec![0], b), (vec![1], c), (vec![], d)],
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `(set, probability)` pairs, sets ascending by bitmask.
    pub fn support(&self) -> impl Iterator<Item = (Vec<usize>, &Rational)> + '_ {
        self.support.iter().map(|(&m, p)| (set_of(m, self.n), p))
    }

    pub fn prob(&self, set: &[usize]) -> Rational {
        self.support
            .get(&mask_of(set))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// `Z_P(x) = Σ_S P(S) x^S`.
    pub fn partition_function(&self) -> MultiPoly {
        MultiPoly::from_terms(
            self.n,
            self.support.iter().map(|(&m, p)| {
                (
                    (0..self.n).map(|i| (m >> i & 1) as u16).collect(),
                    p.clone(),
                )
            }),
        )
    }

    /// All support sets have sizes of the same parity.
    pub fn has_constant_parity(&self) -> bool {
        let mut parities = self.support.keys().map(|m| m.count_ones() % 2);
        match parities.next() {
            Some(first) => parities.all(|p| p == first),
            None => true,
        }
    }

    pub fn to_json(&self) -> String {
        let support: Vec<_> = self
            .support
            .iter()
            .map(|(&m, p)| {
                serde_json::json!({"set": set_of(m, self.n), "num": p.numer().to_string(), "den": p.denom().to_string()})
            })
            .collect();
        serde_json::json!({"n": self.n, "support": support}).to_string()
    }

    /// Parses `{"n": 2, "support": [{"set": [0, 1], "num": "1", "den": "4"}, …]}`.
    pub fn parse(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Entry {
            set: Vec<i64>,
            num: String,
            den: String,
        }
        #[derive(Deserialize)]
        struct DistJson {
            n: i64,
            support: Vec<Entry>,
        }
        let j: DistJson = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("bad distribution JSON: {e}")))?;
        if j.n < 0 {
            return Err(Error::Parse(format!("negative ground set size {}", j.n)));
        }
        let mut entries = Vec::with_capacity(j.support.len());
        for e in j.support {
            if let Some(&v) = e.set.iter().find(|&&v| v < 0) {
                return Err(Error::Parse(format!("negative element {v}")));
            }
            let set = e.set.into_iter().map(|v| v as usize).collect();
            entries.push((set, parse_rational(&e.num, &e.den)?));
        }
        Self::new(j.n as usize, entries).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// `T_G = Π_{{i,j} ∈ E(G)} (1 - ∂_i ∂_j)` for a simple graph.
pub fn tg_operator(g: &Multigraph) -> Result<DiffOperator> {
    if !g.is_simple() {
        return Err(Error::invalid(
            "T_G is defined for simple graphs (no loops or parallel edges)",
        ));
    }
    let n = g.n();
    let one = DiffOperator::identity(n);
    Ok(g.edges().iter().fold(one.clone(), |acc, &(u, v)| {
        acc.compose(&(&one - &DiffOperator::partial_product(n, [u, v])))
    }))
}

/// `E_{S∼P} μ_{G[S]}(x)` with `μ_{G[S]}` in the variables of `S` only.
///
/// Computed as a direct sum over the support and as `T_G Z_P`; a
/// disagreement is reported as an internal inconsistency.
pub fn expected_induced_matching_poly(g: &Multigraph, p: &SubsetDistribution) -> Result<MultiPoly> {
    if g.n() != p.n() {
        return Err(Error::invalid(format!(
            "graph has {} vertices, distribution {}",
            g.n(),
            p.n()
        )));
    }
    let via_operator = tg_operator(g)?.apply(&p.partition_function());
    let mut direct = MultiPoly::zero(g.n());
    for (set, prob) in p.support() {
        let mu = matching_poly_multivariate(&g.induced(&set)).embed(g.n(), &set);
        direct += &mu.scale(prob);
    }
    if direct != via_operator {
        return Err(Error::Inconsistency(format!(
            "direct sum {} differs from T_G Z_P {}",
            direct.to_text(),
            via_operator.to_text()
        )));
    }
    Ok(direct)
}

/// Searches seeded random real points for a violation of
/// `f·∂_i∂_j f ≤ ∂_i f·∂_j f` for some pair `i < j`. For multiaffine `f` a
/// violation refutes stability.
pub fn rayleigh_refute_poly(f: &MultiPoly, trials: usize, seed: u64) -> StabilityVerdict {
    let n = f.nvars();
    if n < 2 {
        return StabilityVerdict::NotRefuted { trials };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let partials: Vec<MultiPoly> = (0..n).map(|i| f.derivative(i)).collect();
    for _ in 0..trials {
        let point: Vec<Rational> = (0..n)
            .map(|_| {
                random_rational(
                    &mut rng,
                    -RAYLEIGH_RANGE,
                    RAYLEIGH_RANGE,
                    crate::poly::DEFAULT_RATIONAL_BOUND,
                )
            })
            .collect();
        let fv = f.eval(&point);
        let dv: Vec<Rational> = partials.iter().map(|d| d.eval(&point)).collect();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = &fv * partials[i].derivative(j).eval(&point);
                let rhs = &dv[i] * &dv[j];
                if lhs > rhs {
                    return StabilityVerdict::Refuted(Witness::Rayleigh {
                        point,
                        i,
                        j,
                        lhs,
                        rhs,
                    });
                }
            }
        }
    }
    StabilityVerdict::NotRefuted { trials }
}

/// Rayleigh refutation applied to the partition function of `p`.
pub fn rayleigh_refute(p: &SubsetDistribution, trials: usize, seed: u64) -> StabilityVerdict {
    rayleigh_refute_poly(&p.partition_function(), trials, seed)
}

fn reject_negative(vals: [&Rational; 4]) -> Result<()> {
    if vals.iter().any(|v| v.is_negative()) {
        return Err(Error::invalid("coefficients must be nonnegative"));
    }
    Ok(())
}

/// `a x₁x₂ + b x₁ + c x₂ + d` (nonnegative coefficients) is stable iff
/// `bc - ad ≥ 0`.
pub fn bivariate_multiaffine_stable(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    d: &Rational,
) -> Result<bool> {
    reject_negative([a, b, c, d])?;
    Ok(b * c - a * d >= Rational::zero())
}

/// `a(x₁x₂ - 1) + b x₁ + c x₂ + d` is stable iff `bc - a(d - a) ≥ 0`.
pub fn expectation_stable(a: &Rational, b: &Rational, c: &Rational, d: &Rational) -> Result<bool> {
    reject_negative([a, b, c, d])?;
    Ok(b * c - a * (d - a) >= Rational::zero())
}
