use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Polynomial, PowerFraction, RationalFunction, Scalar};
use crate::error::{Error, Result};

/// Minimal commutative-ring interface used by the Bell recurrences.
///
/// The element passed as `self` to `ring_zero`/`ring_one` only serves as a
/// template (some rings, like [`PowerFraction`], carry context).
pub trait BellRing: Clone {
    fn ring_zero(&self) -> Self;
    fn ring_one(&self) -> Self;
    fn ring_add(&self, o: &Self) -> Self;
    fn ring_mul(&self, o: &Self) -> Self;
    fn ring_scale(&self, n: u64) -> Self;
    fn ring_is_zero(&self) -> bool;
}

impl BellRing for f64 {
    fn ring_zero(&self) -> Self {
        0.0
    }
    fn ring_one(&self) -> Self {
        1.0
    }
    fn ring_add(&self, o: &Self) -> Self {
        self + o
    }
    fn ring_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn ring_scale(&self, n: u64) -> Self {
        self * n as f64
    }
    fn ring_is_zero(&self) -> bool {
        *self == 0.0
    }
}

impl BellRing for BigRational {
    fn ring_zero(&self) -> Self {
        BigRational::zero()
    }
    fn ring_one(&self) -> Self {
        BigRational::one()
    }
    fn ring_add(&self, o: &Self) -> Self {
        self + o
    }
    fn ring_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn ring_scale(&self, n: u64) -> Self {
        self * BigRational::from_int(n as i64)
    }
    fn ring_is_zero(&self) -> bool {
        self.is_zero()
    }
}

impl<F: Scalar> BellRing for Polynomial<F> {
    fn ring_zero(&self) -> Self {
        Polynomial::zero()
    }
    fn ring_one(&self) -> Self {
        Polynomial::one()
    }
    fn ring_add(&self, o: &Self) -> Self {
        self + o
    }
    fn ring_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn ring_scale(&self, n: u64) -> Self {
        self.scale(&F::from_int(n as i64))
    }
    fn ring_is_zero(&self) -> bool {
        self.is_zero()
    }
}

impl<F: Scalar> BellRing for RationalFunction<F> {
    fn ring_zero(&self) -> Self {
        RationalFunction::zero()
    }
    fn ring_one(&self) -> Self {
        RationalFunction::one()
    }
    fn ring_add(&self, o: &Self) -> Self {
        self + o
    }
    fn ring_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn ring_scale(&self, n: u64) -> Self {
        self.scale(&F::from_int(n as i64))
    }
    fn ring_is_zero(&self) -> bool {
        self.is_zero()
    }
}

impl BellRing for PowerFraction {
    fn ring_zero(&self) -> Self {
        self.zero_like()
    }
    fn ring_one(&self) -> Self {
        self.one_like()
    }
    fn ring_add(&self, o: &Self) -> Self {
        self + o
    }
    fn ring_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn ring_scale(&self, n: u64) -> Self {
        self.scale(&BigRational::from_int(n as i64))
    }
    fn ring_is_zero(&self) -> bool {
        self.is_zero()
    }
}

fn binomial_row(n: usize) -> Vec<u64> {
    let mut row = vec![1u64; n + 1];
    for k in 1..n {
        row[k] = row[k - 1] * (n - k + 1) as u64 / k as u64;
    }
    row
}

/// Table `t[m][j] = B_{m,j}(x_1, …)` for `0 <= j <= m <= n`, with
/// `x[i-1]` holding `x_i`. Missing trailing entries count as zero.
pub fn bell_table<T: BellRing>(n: usize, x: &[T], template: &T) -> Vec<Vec<T>> {
    let zero = template.ring_zero();
    let xi = |i: usize| -> &T { x.get(i - 1).unwrap_or(&zero) };
    let mut t: Vec<Vec<T>> = Vec::with_capacity(n + 1);
    t.push(vec![template.ring_one()]);
    for m in 1..=n {
        let binom = binomial_row(m - 1);
        let mut row = vec![zero.clone(); m + 1];
        for j in 1..=m {
            let mut acc = zero.clone();
            for i in 1..=(m - j + 1) {
                let x = xi(i);
                let b = &t[m - i][j - 1];
                if x.ring_is_zero() || b.ring_is_zero() {
                    continue;
                }
                let term = x.ring_mul(b).ring_scale(binom[i - 1]);
                acc = acc.ring_add(&term);
            }
            row[j] = acc;
        }
        t.push(row);
    }
    t
}

/// Partial Bell polynomial `B_{k,j}(x_1, …, x_{k-j+1})`.
pub fn bell_partial<T: BellRing>(k: usize, j: usize, x: &[T]) -> Result<T> {
    if k == 0 || j == 0 || j > k {
        return Err(Error::IndexError(format!(
            "B_{{k,j}} needs 1 <= j <= k, got k = {k}, j = {j}"
        )));
    }
    if x.len() < k - j + 1 {
        return Err(Error::IndexError(format!(
            "B_{{{k},{j}}} needs {} arguments, got {}",
            k - j + 1,
            x.len()
        )));
    }
    let t = bell_table(k, &x[..k - j + 1], &x[0]);
    Ok(t[k][j].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;

    // product of x_{|block|} over all set partitions of {0..k} into j blocks
    fn brute(k: usize, j: usize, x: &[BigRational]) -> BigRational {
        fn rec(
            next: usize,
            k: usize,
            blocks: &mut Vec<usize>,
            j: usize,
            x: &[BigRational],
            acc: &mut BigRational,
        ) {
            if next == k {
                if blocks.len() == j {
                    let mut p = BigRational::one();
                    for &b in blocks.iter() {
                        p *= &x[b - 1];
                    }
                    *acc += p;
                }
                return;
            }
            for b in 0..blocks.len() {
                blocks[b] += 1;
                rec(next + 1, k, blocks, j, x, acc);
                blocks[b] -= 1;
            }
            if blocks.len() < j {
                blocks.push(1);
                rec(next + 1, k, blocks, j, x, acc);
                blocks.pop();
            }
        }
        let mut acc = BigRational::zero();
        rec(0, k, &mut Vec::new(), j, x, &mut acc);
        acc
    }

    #[test]
    fn small_cases() {
        let x: Vec<BigRational> = [2, 3, 5].iter().map(|&n| int(n)).collect();
        assert_eq!(bell_partial(1, 1, &x[..1]).unwrap(), int(2));
        // B_{3,2} = 3 x1 x2
        assert_eq!(bell_partial(3, 2, &x[..2]).unwrap(), int(3 * 2 * 3));
        // B_{k,1} = x_k
        assert_eq!(bell_partial(3, 1, &x).unwrap(), int(5));
    }

    #[test]
    fn matches_partition_enumeration() {
        let x: Vec<BigRational> = [3, -2, 7, 1, -4, 6, 5].iter().map(|&n| int(n)).collect();
        for k in 1..=7 {
            for j in 1..=k {
                assert_eq!(
                    bell_partial(k, j, &x).unwrap(),
                    brute(k, j, &x),
                    "k={k} j={j}"
                );
            }
        }
    }

    #[test]
    fn rejects_bad_indices() {
        let x = vec![1.0, 2.0];
        assert!(matches!(bell_partial(0, 0, &x), Err(Error::IndexError(_))));
        assert!(matches!(bell_partial(2, 3, &x), Err(Error::IndexError(_))));
        assert!(matches!(bell_partial(4, 1, &x), Err(Error::IndexError(_))));
    }

    #[test]
    fn works_over_polynomials() {
        type P = Polynomial<BigRational>;
        let x = vec![P::x(), P::from_ints(&[0, 0, 1])];
        // B_{3,2}(x1, x2) = 3 x1 x2 = 3 t^3
        assert_eq!(bell_partial(3, 2, &x).unwrap(), P::from_ints(&[0, 0, 0, 3]));
    }
}
