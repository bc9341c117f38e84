//! Refuting real stability by restriction to lines.
//!
//! A real polynomial `f` is stable iff `t ↦ f(a + t·v)` is real-rooted for
//! every real base point `a` and every strictly positive direction `v`. A
//! single non-real-rooted restriction is therefore a certificate of
//! instability; the absence of one proves nothing.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{fmt_rational, MultiPoly, Rational, UniPoly};
use crate::{Error, Result};

/// Default bound on numerators and denominators of sampled rationals.
pub const DEFAULT_RATIONAL_BOUND: i64 = 10;

/// `t ↦ f(base + t·dir)`, exact. Every direction entry must be positive.
pub fn restrict_to_line(f: &MultiPoly, base: &[Rational], dir: &[Rational]) -> Result<UniPoly> {
    let n = f.nvars();
    if base.len() != n || dir.len() != n {
        return Err(Error::invalid(format!(
            "line has dimension {}/{} but polynomial has {n} variables",
            base.len(),
            dir.len()
        )));
    }
    if let Some(i) = dir.iter().position(|d| !d.is_positive()) {
        return Err(Error::invalid(format!(
            "direction entry {i} is not strictly positive"
        )));
    }
    // Clear denominators: base_i + t·dir_i = (b_i + t·v_i) / l with integer
    // b_i, v_i, and f = f_int / m with integer coefficients. Each term of
    // degree k is padded by l^(D - k) so the whole sum carries l^D.
    let l = base
        .iter()
        .chain(dir)
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let m = f
        .terms()
        .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let to_int = |r: &Rational| (r * Rational::from_integer(l.clone())).to_integer();
    let lines: Vec<[BigInt; 2]> = (0..n)
        .map(|i| [to_int(&base[i]), to_int(&dir[i])])
        .collect();
    let top = f.total_degree().unwrap_or(0);
    let l_pows: Vec<BigInt> = std::iter::successors(Some(BigInt::one()), |p| Some(p * &l))
        .take(top + 1)
        .collect();
    // powers[i][k] = (b_i + t·v_i)^k, filled on demand
    let mut powers: Vec<Vec<Vec<BigInt>>> = (0..n).map(|_| vec![vec![BigInt::one()]]).collect();
    let mut acc: Vec<BigInt> = vec![BigInt::zero(); top + 1];
    for (exp, c) in f.terms() {
        let degree: usize = exp.iter().map(|&k| k as usize).sum();
        let mut term =
            vec![(c * Rational::from_integer(m.clone())).to_integer() * &l_pows[top - degree]];
        for (i, &k) in exp.iter().enumerate() {
            let k = k as usize;
            while powers[i].len() <= k {
                let next = int_mul(powers[i].last().unwrap(), &lines[i]);
                powers[i].push(next);
            }
            if k > 0 {
                term = int_mul(&term, &powers[i][k]);
            }
        }
        for (a, t) in acc.iter_mut().zip(term) {
            *a += t;
        }
    }
    let scale = Rational::from_integer(m * &l_pows[top]);
    Ok(UniPoly::new(
        acc.into_iter()
            .map(|c| Rational::from_integer(c) / &scale)
            .collect(),
    ))
}

fn int_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Uniform rational `p/q` with `q ∈ [1, bound]` and `p/q ∈ [lo, hi]`.
pub fn random_rational(rng: &mut impl Rng, lo: i64, hi: i64, bound: i64) -> Rational {
    let q = rng.gen_range(1..=bound);
    let p = rng.gen_range(lo * q..=hi * q);
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// A line along which a polynomial fails to be real-rooted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineWitness {
    pub base: Vec<Rational>,
    pub direction: Vec<Rational>,
    pub restriction: UniPoly,
}

/// Evidence attached to a `Refuted` verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// The restriction of the polynomial to this line is not real-rooted.
    Line(LineWitness),
    /// The Rayleigh inequality `Z·∂_i∂_j Z ≤ ∂_i Z·∂_j Z` fails at `point`.
    Rayleigh {
        point: Vec<Rational>,
        i: usize,
        j: usize,
        lhs: Rational,
        rhs: Rational,
    },
}

impl Witness {
    /// Re-checks the witness against `f` from scratch.
    pub fn verify(&self, f: &MultiPoly) -> bool {
        match self {
            Witness::Line(w) => match restrict_to_line(f, &w.base, &w.direction) {
                Ok(r) => r == w.restriction && !r.is_real_rooted(),
                Err(_) => false,
            },
            Witness::Rayleigh {
                point,
                i,
                j,
                lhs,
                rhs,
            } => {
                if point.len() != f.nvars() || i == j {
                    return false;
                }
                let (l, r) = rayleigh_sides(f, point, *i, *j);
                &l == lhs && &r == rhs && l > r
            }
        }
    }
}

/// `(Z·∂_i∂_j Z, ∂_i Z·∂_j Z)` evaluated at `point`.
pub(crate) fn rayleigh_sides(
    z: &MultiPoly,
    point: &[Rational],
    i: usize,
    j: usize,
) -> (Rational, Rational) {
    let zi = z.derivative(i);
    let zj = z.derivative(j);
    let zij = zi.derivative(j);
    let lhs = z.eval(point) * zij.eval(point);
    let rhs = zi.eval(point) * zj.eval(point);
    (lhs, rhs)
}

/// Outcome of a stability refutation attempt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StabilityVerdict {
    Refuted(Witness),
    NotRefuted { trials: usize },
}

impl StabilityVerdict {
    pub fn is_refuted(&self) -> bool {
        matches!(self, StabilityVerdict::Refuted(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            StabilityVerdict::Refuted(w) => Some(w),
            StabilityVerdict::NotRefuted { .. } => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let strs = |v: &[Rational]| v.iter().map(fmt_rational).collect::<Vec<_>>();
        match self {
            StabilityVerdict::NotRefuted { trials } => {
                serde_json::json!({"status": "not-refuted", "trials": trials})
            }
            StabilityVerdict::Refuted(Witness::Line(w)) => serde_json::json!({
                "status": "refuted",
                "witness": {
                    "kind": "line",
                    "base": strs(&w.base),
                    "direction": strs(&w.direction),
                    "restriction": w.restriction.to_text(),
                }
            }),
            StabilityVerdict::Refuted(Witness::Rayleigh {
                point,
                i,
                j,
                lhs,
                rhs,
            }) => {
                serde_json::json!({
                    "status": "refuted",
                    "witness": {
                        "kind": "rayleigh",
                        "point": strs(point),
                        "i": i,
                        "j": j,
                        "lhs": fmt_rational(lhs),
                        "rhs": fmt_rational(rhs),
                    }
                })
            }
        }
    }
}

/// Searches `trials` seeded random lines for a non-real-rooted restriction.
///
/// Base coordinates are rationals in `[-10, 10]`, direction coordinates in
/// `(0, 10]`, all with denominators at most 10. Deterministic in
/// `(f, trials, seed)`.
pub fn refute_stability(f: &MultiPoly, trials: usize, seed: u64) -> StabilityVerdict {
    if f.is_zero() {
        return StabilityVerdict::NotRefuted { trials: 0 };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = f.nvars();
    let bound = DEFAULT_RATIONAL_BOUND;
    for _ in 0..trials {
        let base: Vec<Rational> = (0..n)
            .map(|_| random_rational(&mut rng, -bound, bound, bound))
            .collect();
        let direction: Vec<Rational> = (0..n)
            .map(|_| loop {
                let r = random_rational(&mut rng, 0, bound, bound);
                if !r.is_zero() {
                    break r;
                }
            })
            .collect();
        let restriction = restrict_to_line(f, &base, &direction).expect("direction is positive");
        if !restriction.is_real_rooted() {
            return StabilityVerdict::Refuted(Witness::Line(LineWitness {
                base,
                direction,
                restriction,
            }));
        }
    }
    StabilityVerdict::NotRefuted { trials }
}
