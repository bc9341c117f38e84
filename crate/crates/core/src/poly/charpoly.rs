//! Division-free characteristic polynomials (Berkowitz).

use num_bigint::BigInt;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Zero};

use super::UniPoly;

/// Dense square integer matrix, row-major.
pub type IntMatrix = Vec<Vec<i64>>;

/// `det(xI - A)` for a square integer matrix.
pub fn charpoly(a: &[Vec<i64>]) -> UniPoly {
    UniPoly::from_bigints(charpoly_integer(a))
}

/// Integer coefficients of `det(xI - A)`, lowest degree first (monic, length
/// `n + 1`). Runs in `i128` and reruns in `BigInt` on overflow.
pub fn charpoly_integer(a: &[Vec<i64>]) -> Vec<BigInt> {
    let n = a.len();
    assert!(
        a.iter().all(|row| row.len() == n),
        "charpoly needs a square matrix"
    );
    let small: Vec<Vec<i128>> = a
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    if let Some(c) = berkowitz(&small) {
        return c.into_iter().map(BigInt::from).collect();
    }
    let big: Vec<Vec<BigInt>> = a
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    berkowitz(&big).expect("BigInt arithmetic does not overflow")
}

/// Returns `None` if an intermediate value overflows `T`.
fn berkowitz<T>(a: &[Vec<T>]) -> Option<Vec<T>>
where
    T: Clone + Zero + One + CheckedAdd + CheckedSub + CheckedMul,
{
    let n = a.len();
    // beta[t] is the coefficient of x^{k - t} in det(xI - A_k), A_k the
    // leading k×k principal submatrix.
    let mut beta: Vec<T> = vec![T::one()];
    for k in 0..n {
        // A_{k+1} = [[A_k, c], [r, diag]]
        let diag = a[k][k].clone();
        // s[l] = r · A_k^l · c for l = 0..k-1
        let mut s: Vec<T> = Vec::with_capacity(k);
        let mut v: Vec<T> = (0..k).map(|i| a[i][k].clone()).collect();
        for l in 0..k {
            let mut dot = T::zero();
            for (j, vj) in v.iter().enumerate() {
                dot = dot.checked_add(&a[k][j].checked_mul(vj)?)?;
            }
            s.push(dot);
            if l + 1 < k {
                let mut w = vec![T::zero(); k];
                for (i, wi) in w.iter_mut().enumerate() {
                    let mut acc = T::zero();
                    for (j, vj) in v.iter().enumerate() {
                        acc = acc.checked_add(&a[i][j].checked_mul(vj)?)?;
                    }
                    *wi = acc;
                }
                v = w;
            }
        }
        // beta'[t] = beta[t] - diag·beta[t-1] - Σ_{i=0}^{t-2} beta[i]·s[t-2-i]
        let mut next: Vec<T> = Vec::with_capacity(k + 2);
        for t in 0..=k + 1 {
            let mut val = if t <= k { beta[t].clone() } else { T::zero() };
            if t >= 1 {
                val = val.checked_sub(&diag.checked_mul(&beta[t - 1])?)?;
            }
            if t >= 2 {
                for i in 0..=t - 2 {
                    if i < beta.len() && t - 2 - i < s.len() {
                        val = val.checked_sub(&beta[i].checked_mul(&s[t - 2 - i])?)?;
                    }
                }
            }
            next.push(val);
        }
        beta = next;
    }
    beta.reverse();
    Some(beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Cofactor expansion of det(xI - A) over polynomial entries.
    fn cofactor_charpoly(a: &[Vec<i64>]) -> UniPoly {
        fn det(m: &[Vec<UniPoly>]) -> UniPoly {
            if m.is_empty() {
                return UniPoly::one();
            }
            let mut total = UniPoly::zero();
            for (j, entry) in m[0].iter().enumerate() {
                if entry.is_zero() {
                    continue;
                }
                let minor: Vec<Vec<UniPoly>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = entry * &det(&minor);
                total = if j % 2 == 0 {
                    &total + &term
                } else {
                    &total - &term
                };
            }
            total
        }
        let n = a.len();
        let m: Vec<Vec<UniPoly>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let c = UniPoly::from_ints(&[-a[i][j]]);
                        if i == j {
                            &c + &UniPoly::x()
                        } else {
                            c
                        }
                    })
                    .collect()
            })
            .collect();
        det(&m)
    }

    #[test]
    fn small_examples() {
        assert_eq!(
            charpoly(&[vec![0, 1], vec![1, 0]]),
            UniPoly::from_ints(&[-1, 0, 1])
        );
        let k3 = vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]];
        assert_eq!(charpoly(&k3), UniPoly::from_ints(&[-2, -3, 0, 1]));
        assert_eq!(cofactor_charpoly(&k3), charpoly(&k3));
        assert_eq!(
            charpoly(&vec![vec![0; 3]; 3]),
            UniPoly::from_ints(&[0, 0, 0, 1])
        );
        assert_eq!(charpoly(&[]), UniPoly::one());
    }

    #[test]
    fn agrees_with_cofactor_expansion() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let n = rng.gen_range(1..=5);
            let a: Vec<Vec<i64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(-4..=4)).collect())
                .collect();
            assert_eq!(charpoly(&a), cofactor_charpoly(&a), "{a:?}");
        }
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big = 1i64 << 40;
        let a = vec![
            vec![big, big, big],
            vec![big, big, big],
            vec![big, big, big],
        ];
        // eigenvalues 3·2^40, 0, 0
        let expected = UniPoly::from_bigints([
            BigInt::zero(),
            BigInt::zero(),
            -BigInt::from(3) * BigInt::from(big),
            BigInt::one(),
        ]);
        assert_eq!(charpoly(&a), expected);
        // entries near 2^62 overflow i128 inside the 4x4 power sums
        let h = i64::MAX / 2;
        let b = vec![vec![h; 4]; 4];
        let hb = BigInt::from(h);
        let expected = UniPoly::from_bigints([
            BigInt::zero(),
            BigInt::zero(),
            BigInt::zero(),
            -BigInt::from(4) * hb,
            BigInt::one(),
        ]);
        assert!(berkowitz(
            &b.iter()
                .map(|r| r.iter().map(|&v| v as i128).collect())
                .collect::<Vec<Vec<i128>>>()
        )
        .is_none());
        assert_eq!(charpoly(&b), expected);
    }
}
