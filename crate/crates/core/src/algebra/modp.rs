//! Coprimality filter modulo the Mersenne prime 2^61 - 1.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::Polynomial;

const P: u64 = (1 << 61) - 1;

fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

fn inv(a: u64) -> u64 {
    pow(a, P - 2)
}

fn reduce_int(n: &BigInt) -> u64 {
    n.mod_floor(&BigInt::from(P)).to_u64().expect("residue fits in u64")
}

fn reduce(q: &BigRational) -> Option<u64> {
    let d = reduce_int(q.denom());
    (d != 0).then(|| mul(reduce_int(q.numer()), inv(d)))
}

fn to_modp(p: &Polynomial<BigRational>) -> Option<Vec<u64>> {
    let v: Option<Vec<u64>> = p.coeffs().iter().map(reduce).collect();
    let v = v?;
    // the degree must survive reduction
    (*v.last()? != 0).then_some(v)
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn rem(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = inv(b[db]);
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = mul(*r.last().unwrap(), lb);
        for (j, &bj) in b.iter().enumerate() {
            r[k + j] = (r[k + j] + P - mul(c, bj)) % P;
        }
        r.pop();
        trim(&mut r);
    }
    r
}

/// `Some(true)` when `a` and `b` are certainly coprime over Q, `None` when
/// the modular image cannot decide.
pub(crate) fn certainly_coprime(
    a: &Polynomial<BigRational>,
    b: &Polynomial<BigRational>,
) -> Option<bool> {
    let mut x = to_modp(a)?;
    let mut y = to_modp(b)?;
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    (x.len() == 1).then_some(true)
}
