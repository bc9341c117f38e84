use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::One;

use super::{MultiPoly, Rational};

/// Constant-coefficient differential operator `Σ a(α) ∂^α`.
///
/// Stored as its symbol: the polynomial obtained by replacing `∂_i` with
/// `x_i`. Composition is multiplication of symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiffOperator {
    symbol: MultiPoly,
}

impl DiffOperator {
    pub fn from_symbol(symbol: MultiPoly) -> Self {
        DiffOperator { symbol }
    }

    pub fn identity(nvars: usize) -> Self {
        Self::from_symbol(MultiPoly::one(nvars))
    }

    /// `∂_i`.
    pub fn partial(nvars: usize, i: usize) -> Self {
        Self::from_symbol(MultiPoly::var(nvars, i))
    }

    /// `∂^S = Π_{i∈S} ∂_i`.
    pub fn partial_product(nvars: usize, set: impl IntoIterator<Item = usize>) -> Self {
        Self::from_symbol(MultiPoly::subset_monomial(nvars, set))
    }

    /// `∂_S = Σ_{i∈S} ∂_i`.
    pub fn partial_sum(nvars: usize, set: impl IntoIterator<Item = usize>) -> Self {
        let mut p = MultiPoly::zero(nvars);
        for i in set {
            p += &MultiPoly::var(nvars, i);
        }
        Self::from_symbol(p)
    }

    pub fn symbol(&self) -> &MultiPoly {
        &self.symbol
    }

    pub fn nvars(&self) -> usize {
        self.symbol.nvars()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_symbol(self.symbol.scale(c))
    }

    pub fn pow(&self, k: u32) -> Self {
        Self::from_symbol(self.symbol.pow(k))
    }

    /// `self ∘ other`; constant-coefficient operators commute.
    pub fn compose(&self, other: &DiffOperator) -> Self {
        Self::from_symbol(&self.symbol * &other.symbol)
    }

    /// Multiaffine part of the symbol.
    pub fn map_multiaffine_part(&self) -> Self {
        Self::from_symbol(self.symbol.map_multiaffine_part())
    }

    /// Applies the operator to `f` exactly:
    /// `∂^α x^β = Π (β_i)_{α_i} x^{β-α}`, zero when some `α_i > β_i`.
    pub fn apply(&self, f: &MultiPoly) -> MultiPoly {
        assert_eq!(
            self.nvars(),
            f.nvars(),
            "operator and polynomial variable counts differ"
        );
        let mut out = MultiPoly::zero(f.nvars());
        for (alpha, a) in self.symbol.terms() {
            for (beta, b) in f.terms() {
                if alpha.iter().zip(beta).any(|(x, y)| x > y) {
                    continue;
                }
                let mut weight = BigInt::one();
                for (&al, &be) in alpha.iter().zip(beta) {
                    weight *= falling_factorial(be as u64, al as u64);
                }
                let exp = beta.iter().zip(alpha).map(|(be, al)| be - al).collect();
                out.add_term(exp, a * b * weight);
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        // same layout as the symbol, with ∂ in place of x
        self.symbol.to_text().replace('x', "∂")
    }
}

/// `(n)_k = n (n-1) ⋯ (n-k+1)`; `(n)_0 = 1`.
pub fn falling_factorial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, j| {
        acc * BigInt::from(n.saturating_sub(j))
    })
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Add for &DiffOperator {
    type Output = DiffOperator;
    fn add(self, rhs: &DiffOperator) -> DiffOperator {
        DiffOperator::from_symbol(&self.symbol + &rhs.symbol)
    }
}

impl Sub for &DiffOperator {
    type Output = DiffOperator;
    fn sub(self, rhs: &DiffOperator) -> DiffOperator {
        DiffOperator::from_symbol(&self.symbol - &rhs.symbol)
    }
}

impl Mul for &DiffOperator {
    type Output = DiffOperator;
    fn mul(self, rhs: &DiffOperator) -> DiffOperator {
        self.compose(rhs)
    }
}
