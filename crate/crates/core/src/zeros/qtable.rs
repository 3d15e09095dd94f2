use std::sync::{Arc, OnceLock};

use num_rational::BigRational;
use serde::Serialize;

use crate::algebra::{bell_table, int, EvalRatFunc, Polynomial, PowerFraction, RationalFunction};
use crate::coeffs::LGCoefficientTable;
use crate::error::{Error, Result};
use crate::real::Real;

type P = Polynomial<BigRational>;
type RF = RationalFunction<BigRational>;

/// Default truncation of the zero expansions.
pub const DEFAULT_K: usize = 10;

/// `q_k(x)` for `k = 2..=k_max`, giving the coefficients `c_{m,k} = q_k(c_{m,0})`.
#[derive(Clone, Debug)]
pub struct QTable {
    k_max: usize,
    q: Vec<EvalRatFunc>,
}

impl QTable {
    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// Exact `q_k`; `k` in `2..=k_max`.
    pub fn q(&self, k: usize) -> Result<&RF> {
        self.check(k)?;
        Ok(&self.q[k].exact)
    }

    pub fn eval<R: Real>(&self, k: usize, x: R) -> Result<R> {
        self.check(k)?;
        Ok(self.q[k].eval(x))
    }

    fn check(&self, k: usize) -> Result<()> {
        if k < 2 || k > self.k_max {
            return Err(Error::IndexError(format!("q_k exists for 2 <= k <= {}, got {k}", self.k_max)));
        }
        Ok(())
    }

    /// Table with `k_max = DEFAULT_K`, built once.
    pub fn shared() -> &'static QTable {
        static SHARED: OnceLock<QTable> = OnceLock::new();
        SHARED.get_or_init(|| gen_q(DEFAULT_K).expect("default q table"))
    }

    /// The shared table if large enough, otherwise a fresh one.
    pub fn with_k(k: usize) -> Result<std::borrow::Cow<'static, QTable>> {
        let shared = Self::shared();
        if k <= shared.k_max {
            Ok(std::borrow::Cow::Borrowed(shared))
        } else {
            Ok(std::borrow::Cow::Owned(gen_q(k)?))
        }
    }

    /// Text rows `(k, numerator, denominator)` for dumps.
    pub fn rows(&self) -> Vec<QRow> {
        (2..=self.k_max)
            .map(|k| QRow {
                k,
                numerator: self.q[k].exact.num().to_string(),
                denominator: self.q[k].exact.den().to_string(),
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct QRow {
    pub k: usize,
    pub numerator: String,
    pub denominator: String,
}

fn factorial(n: usize) -> BigRational {
    (1..=n).fold(int(1), |acc, i| acc * int(i as i64))
}

/// Build `q_2..q_K` from the phase equation by Faà di Bruno composition.
///
/// With `δ = Σ_{k>=2} c_k h^k` and `h = 1/a`, matching powers of `h` in
/// `δ/h = arctan(c_0 + δ) - arctan(c_0) - Σ_s L_s(c_0 + δ) h^s` gives
/// `c_k = 1/(k-1)! Σ_j D^{j-1}(1/(1+x²)) B_{k-1,j}(0, 2!c_2, …)
///        - L_{k-1} - Σ_s Σ_j L_s^{(j)} B_{k-s-1,j}(…)/(k-s-1)!`.
pub fn gen_q(k_max: usize) -> Result<QTable> {
    if k_max < 2 {
        return Err(Error::InvalidArgument(format!("gen_q needs K >= 2, got {k_max}")));
    }
    let table = LGCoefficientTable::with_order(k_max)?;
    let base = Arc::new(P::from_ints(&[1, 0, 1]));
    let pf = |r: &RF| PowerFraction::from_ratfunc(r, base.clone()).expect("L_s has a power of x²+1 below");
    let zero = PowerFraction::from_poly(P::zero(), base.clone());

    // L_s and its derivatives, l[s][j] = L_s^{(j)}
    let mut l: Vec<Vec<PowerFraction>> = vec![vec![]];
    for s in 1..k_max {
        let mut ders = vec![pf(table.l(s))];
        for j in 1..(k_max - s) {
            let next = ders[j - 1].derivative();
            ders.push(next);
        }
        l.push(ders);
    }
    // arctan^{(j)} = D^{j-1}(1/(1+x²))
    let mut atan_d = vec![zero.clone(), PowerFraction::new(P::one(), 1, base.clone())];
    for j in 2..k_max {
        let next = atan_d[j - 1].derivative();
        atan_d.push(next);
    }

    let mut c: Vec<PowerFraction> = vec![zero.clone(), zero.clone()];
    for k in 2..=k_max {
        // x_i = i! c_i, with c_1 = 0
        let xs: Vec<PowerFraction> = (1..k).map(|i| c[i].scale(&factorial(i))).collect();
        let bell = bell_table(k - 1, &xs, &zero);
        let mut ck = zero.clone();
        for j in 1..k {
            ck = &ck + &(&atan_d[j] * &bell[k - 1][j]);
        }
        ck = ck.scale(&(int(1) / factorial(k - 1)));
        ck = &ck - &l[k - 1][0];
        for s in 1..k.saturating_sub(1) {
            let n = k - s - 1;
            let mut inner = zero.clone();
            for j in 1..=n {
                inner = &inner + &(&l[s][j] * &bell[n][j]);
            }
            ck = &ck - &inner.scale(&(int(1) / factorial(n)));
        }
        c.push(ck);
    }
    let q = c
        .iter()
        .map(|p| EvalRatFunc::new(p.to_ratfunc_irreducible_base()))
        .collect();
    Ok(QTable { k_max, q })
}
