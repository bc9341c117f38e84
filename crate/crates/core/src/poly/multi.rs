use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{fmt_rational, parse_rational, Rational, UniPoly};
use crate::{Error, Result};

/// Exponent vector, one entry per variable.
pub type Exponent = Vec<u16>;

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept in a `BTreeMap`, so iteration (and therefore every
/// serialized form) follows lexicographic exponent order. Zero
/// coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "PolyJson", try_from = "PolyJson")]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Exponent, Rational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    /// The variable `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(
            i < nvars,
            "variable index {i} out of range for {nvars} variables"
        );
        let mut exp = vec![0; nvars];
        exp[i] = 1;
        Self::monomial(exp, Rational::one())
    }

    /// `c · x^exp`.
    pub fn monomial(exp: Exponent, c: Rational) -> Self {
        let mut p = Self::zero(exp.len());
        p.add_term(exp, c);
        p
    }

    /// `Π_{i∈set} x_i` as a multiaffine monomial.
    pub fn subset_monomial(nvars: usize, set: impl IntoIterator<Item = usize>) -> Self {
        let mut exp = vec![0; nvars];
        for i in set {
            exp[i] += 1;
        }
        Self::monomial(exp, Rational::one())
    }

    /// Builds a polynomial from (exponent, coefficient) pairs, summing
    /// repeated exponents.
    ///
    /// Panics if an exponent does not have length `nvars`.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, Rational)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Number of nonzero terms.
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending lexicographic exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &[u16]) -> Rational {
        self.terms.get(exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&k| k as usize).sum())
            .max()
    }

    pub fn is_multiaffine(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k <= 1))
    }

    /// Adds `c · x^exp` in place.
    pub fn add_term(&mut self, exp: Exponent, c: Rational) {
        assert_eq!(exp.len(), self.nvars, "exponent length mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `∂/∂x_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                out.add_term(f, c * BigInt::from(e[i]));
            }
        }
        out
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars, "point dimension mismatch");
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            total += t;
        }
        total
    }

    /// Substitutes `x_i = x` for every variable.
    pub fn diagonal(&self) -> UniPoly {
        let deg = self.total_degree().unwrap_or(0);
        let mut coeffs = vec![Rational::zero(); deg + 1];
        for (e, c) in &self.terms {
            let d: usize = e.iter().map(|&k| k as usize).sum();
            coeffs[d] += c;
        }
        UniPoly::new(coeffs)
    }

    /// Multiaffine part: drops every term in which some variable has
    /// exponent two or more.
    pub fn map_multiaffine_part(&self) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().all(|&k| k <= 1))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// `(Π x_i) · f(-1/x_1, …, -1/x_n)` for multiaffine `f`.
    ///
    /// A term `c·x^S` becomes `c·(-1)^{|S|}·x^{[n]∖S}`.
    pub fn complement_transform(&self) -> Result<Self> {
        if !self.is_multiaffine() {
            return Err(Error::invalid(
                "complement_transform needs a multiaffine polynomial",
            ));
        }
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let size = e.iter().filter(|&&k| k == 1).count();
            let flipped: Exponent = e.iter().map(|&k| 1 - k).collect();
            let c = if size % 2 == 1 { -c.clone() } else { c.clone() };
            out.add_term(flipped, c);
        }
        Ok(out)
    }

    /// Relabels variable `j` as `map[j]` in a space of `nvars` variables.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars, "embedding map has wrong length");
        let mut out = Self::zero(nvars);
        for (e, c) in &self.terms {
            let mut f = vec![0u16; nvars];
            for (j, &k) in e.iter().enumerate() {
                f[map[j]] += k;
            }
            out.add_term(f, c.clone());
        }
        out
    }

    /// Human-readable form with variables `x0, x1, …`, highest
    /// lexicographic term first.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        format!("x{i}")
                    } else {
                        format!("x{i}^{k}")
                    }
                })
                .collect();
            push_signed_term(&mut s, idx == 0, c, &mono.join("*"));
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polynomial serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Appends ` ± |c|*mono` (or the leading form) to `s`.
pub(crate) fn push_signed_term(s: &mut String, first: bool, c: &Rational, mono: &str) {
    let neg = c.is_negative();
    let abs = c.abs();
    if first {
        if neg {
            s.push('-');
        }
    } else {
        s.push_str(if neg { " - " } else { " + " });
    }
    if mono.is_empty() {
        s.push_str(&fmt_rational(&abs));
    } else if abs.is_one() {
        s.push_str(mono);
    } else {
        s.push_str(&fmt_rational(&abs));
        s.push('*');
        s.push_str(mono);
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(mut self, rhs: MultiPoly) -> MultiPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &MultiPoly) {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), c.clone());
        }
    }
}

impl SubAssign<&MultiPoly> for MultiPoly {
    fn sub_assign(&mut self, rhs: &MultiPoly) {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), -c.clone());
        }
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(mut self, rhs: MultiPoly) -> MultiPoly {
        self -= &rhs;
        self
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut acc: HashMap<Exponent, Rational> = HashMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let c = c1 * c2;
                match acc.entry(e) {
                    std::collections::hash_map::Entry::Vacant(v) => {
                        v.insert(c);
                    }
                    std::collections::hash_map::Entry::Occupied(mut o) => *o.get_mut() += c,
                }
            }
        }
        MultiPoly {
            nvars: self.nvars,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<u16>,
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    nvars: usize,
    terms: Vec<TermJson>,
}

impl From<MultiPoly> for PolyJson {
    fn from(p: MultiPoly) -> Self {
        PolyJson {
            nvars: p.nvars,
            terms: p
                .terms
                .into_iter()
                .map(|(exp, c)| TermJson {
                    exp,
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        }
    }
}

impl TryFrom<PolyJson> for MultiPoly {
    type Error = Error;
    fn try_from(j: PolyJson) -> Result<Self> {
        let mut p = MultiPoly::zero(j.nvars);
        for t in j.terms {
            if t.exp.len() != j.nvars {
                return Err(Error::Parse(format!(
                    "exponent {:?} does not have {} entries",
                    t.exp, j.nvars
                )));
            }
            p.add_term(t.exp, parse_rational(&t.num, &t.den)?);
        }
        Ok(p)
    }
}
