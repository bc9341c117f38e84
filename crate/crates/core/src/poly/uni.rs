use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::multi::push_signed_term;
use super::Rational;

/// Dense univariate polynomial, lowest degree first.
///
/// The leading stored coefficient is nonzero unless the polynomial is zero,
/// in which case the coefficient list is empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| Rational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn from_bigints(coeffs: impl IntoIterator<Item = BigInt>) -> Self {
        Self::new(coeffs.into_iter().map(Rational::from_integer).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    /// `c · x^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `a + b·x`.
    pub fn linear(a: Rational, b: Rational) -> Self {
        Self::new(vec![a, b])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_some_and(One::is_one)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &Rational) -> i8 {
        sign(&self.eval(x))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    /// `self / divisor` if the division leaves no remainder.
    pub fn exact_div(&self, divisor: &UniPoly) -> Option<UniPoly> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(a: &UniPoly, b: &UniPoly) -> UniPoly {
        if a.is_zero() || b.is_zero() {
            return if a.is_zero() { b.monic() } else { a.monic() };
        }
        let (mut a, mut b) = (a.primitive_ints(), b.primitive_ints());
        while !b.is_empty() {
            let r = primitive_part(pseudo_rem(&a, &b));
            a = b;
            b = r;
        }
        UniPoly::from_bigints(a).monic()
    }

    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            Some(lc) => {
                let inv = lc.recip();
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    /// Positive rational multiple with coprime integer coefficients.
    /// Root locations and sign patterns are unchanged.
    /// Integer coefficients of [`UniPoly::primitive`]; empty for zero.
    fn primitive_ints(&self) -> Vec<BigInt> {
        self.primitive()
            .coeffs
            .into_iter()
            .map(|c| c.to_integer())
            .collect()
    }

    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let den_lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(den_lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        Self::from_bigints(ints.into_iter().map(|c| c / &g))
    }

    /// `p / gcd(p, p')`: same distinct roots, all simple.
    pub fn square_free_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let chain = SturmChain::new(self);
        let g = chain.seq.last().expect("chain is nonempty");
        self.exact_div(g)
            .expect("gcd divides its argument")
            .primitive()
    }

    /// Number of distinct real roots.
    pub fn count_distinct_real_roots(&self) -> usize {
        assert!(
            !self.is_zero(),
            "the zero polynomial has infinitely many roots"
        );
        SturmChain::new(self).total_real_roots()
    }

    /// True iff every complex root is real. Constants (including zero)
    /// and linear polynomials are real-rooted.
    pub fn is_real_rooted(&self) -> bool {
        match self.degree() {
            None | Some(0) | Some(1) => true,
            Some(d) => {
                // the chain ends in gcd(p, p'), so distinct roots number d - deg(gcd)
                let chain = SturmChain::new(self);
                let g = chain.seq.last().and_then(UniPoly::degree).unwrap_or(0);
                chain.total_real_roots() == d - g
            }
        }
    }

    /// Strict upper bound on the absolute value of every root.
    pub fn root_bound(&self) -> Rational {
        let lc = self
            .leading_coeff()
            .expect("root bound of the zero polynomial")
            .abs();
        let m = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs() / &lc)
            .max()
            .unwrap_or_else(Rational::zero);
        m + Rational::from_integer(2.into())
    }

    /// Disjoint closed intervals, each containing exactly one distinct real
    /// root and of width at most `width`, in increasing order. A root that
    /// lands on a bisection point is reported as a degenerate interval.
    ///
    /// Panics if `self` is zero or `width` is not positive.
    pub fn isolate_real_roots(&self, width: &Rational) -> Vec<RootInterval> {
        assert!(
            !self.is_zero(),
            "cannot isolate roots of the zero polynomial"
        );
        assert!(width.is_positive(), "isolation width must be positive");
        if self.degree() == Some(0) {
            return Vec::new();
        }
        let sf = self.square_free_part();
        let chain = SturmChain::new(&sf);
        let b = sf.root_bound();
        let lo = -b.clone();
        let total = chain.count_in(&lo, &b);
        let mut raw = Vec::new();
        bisect(&chain, lo, b, total, width, &mut raw);

        let mut out: Vec<RootInterval> = Vec::with_capacity(raw.len());
        for (mut lo, mut hi) in raw {
            if let Some(prev) = out.last() {
                // Push the left end past the previous interval.
                while lo <= prev.hi {
                    let mid = (&lo + &hi) / Rational::from_integer(2.into());
                    if chain.count_in(&lo, &mid) == 1 {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
            }
            if sf.eval(&hi).is_zero() {
                lo = hi.clone();
            }
            out.push(RootInterval { lo, hi });
        }
        out
    }

    /// Number of distinct real roots strictly greater than `bound`.
    pub fn count_roots_above(&self, bound: &Rational) -> usize {
        let sf = self.square_free_part();
        if sf.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let chain = SturmChain::new(&sf);
        chain.variations_at(bound) - chain.variations_at_pos_inf()
    }

    /// Number of distinct real roots strictly less than `bound`.
    pub fn count_roots_below(&self, bound: &Rational) -> usize {
        let sf = self.square_free_part();
        if sf.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let chain = SturmChain::new(&sf);
        let at_bound = usize::from(sf.eval(bound).is_zero());
        chain.variations_at_neg_inf() - chain.variations_at(bound) - at_bound
    }

    /// `f(g(x))`.
    pub fn compose(&self, g: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &UniPoly::constant(c.clone());
        }
        acc
    }

    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => "x".into(),
                _ => format!("x^{k}"),
            };
            push_signed_term(&mut s, first, c, &mono);
            first = false;
        }
        s
    }
}

fn sign(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

fn bisect(
    chain: &SturmChain,
    lo: Rational,
    hi: Rational,
    count: usize,
    width: &Rational,
    out: &mut Vec<(Rational, Rational)>,
) {
    if count == 0 {
        return;
    }
    if count == 1 && &(&hi - &lo) <= width {
        out.push((lo, hi));
        return;
    }
    let mid = (&lo + &hi) / Rational::from_integer(2.into());
    let left = chain.count_in(&lo, &mid);
    bisect(chain, lo, mid.clone(), left, width, out);
    bisect(chain, mid, hi, count - left, width, out);
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Closed interval `[lo, hi]` containing exactly one real root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RootInterval {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

/// `|lc(b)|^k · a mod b` over the integers, `k` the number of reduction
/// steps: a positive multiple of the true remainder. `b` must be nonzero.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lc = &b[db];
    let (scale, flip) = (lc.abs(), lc.is_negative());
    let mut r = a.to_vec();
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let top = r.pop().expect("nonempty");
        let top = if flip { -top } else { top };
        for c in r.iter_mut() {
            *c *= &scale;
        }
        for (k, bk) in b[..db].iter().enumerate() {
            r[shift + k] -= &top * bk;
        }
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r
}

/// Divides out the content; the sign is kept.
fn primitive_part(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in v.iter_mut() {
            *c /= &g;
        }
    }
    v
}

/// Sturm sequence `p, p', -rem(p, p'), …`. Every member is stored as a
/// primitive integer polynomial (a positive multiple of the true remainder),
/// which keeps coefficient growth in check without changing any sign.
///
/// The last member is `gcd(p, p')` up to a constant. For square-free `p`
/// the chain counts distinct roots; otherwise the counts stay valid at
/// points that are not multiple roots, since every member shares the
/// factor `gcd(p, p')`.
#[derive(Clone, Debug)]
pub struct SturmChain {
    seq: Vec<UniPoly>,
}

impl SturmChain {
    /// Builds the chain of a nonzero `p`.
    pub fn new(p: &UniPoly) -> Self {
        assert!(!p.is_zero(), "Sturm chain of the zero polynomial");
        let p0 = p.primitive_ints();
        let mut p1 = p.derivative().primitive_ints();
        let mut seq = vec![p0.clone()];
        let mut prev = p0;
        while !p1.is_empty() {
            let r: Vec<BigInt> = pseudo_rem(&prev, &p1).into_iter().map(|c| -c).collect();
            seq.push(p1.clone());
            prev = p1;
            p1 = primitive_part(r);
        }
        SturmChain {
            seq: seq.into_iter().map(UniPoly::from_bigints).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn variations_at(&self, x: &Rational) -> usize {
        variations(self.seq.iter().map(|p| p.sign_at(x)))
    }

    pub fn variations_at_pos_inf(&self) -> usize {
        variations(self.seq.iter().map(|p| sign(p.leading_coeff().unwrap())))
    }

    pub fn variations_at_neg_inf(&self) -> usize {
        variations(self.seq.iter().map(|p| {
            let s = sign(p.leading_coeff().unwrap());
            if p.degree().unwrap() % 2 == 1 {
                -s
            } else {
                s
            }
        }))
    }

    /// Distinct roots in the half-open interval `(a, b]`, `a < b`.
    pub fn count_in(&self, a: &Rational, b: &Rational) -> usize {
        self.variations_at(a) - self.variations_at(b)
    }

    pub fn total_real_roots(&self) -> usize {
        self.variations_at_neg_inf() - self.variations_at_pos_inf()
    }
}

fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl Neg for UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl Add for UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: UniPoly) -> UniPoly {
        &self + &rhs
    }
}

impl Sub for UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: UniPoly) -> UniPoly {
        &self - &rhs
    }
}

impl Mul for UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: UniPoly) -> UniPoly {
        &self * &rhs
    }
}
