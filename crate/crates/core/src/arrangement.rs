//! Reflection arrangements of types A, B and D.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{Polynomial, MAX_VARS};
use crate::rational::{binomial, Rational};
use crate::Kind;

/// Hyperplanes given by one fixed linear form each, and their product `Q`.
///
/// Forms are `x_i - x_j` and `x_i + x_j` with `i < j`, plus `x_i` for type B.
#[derive(Clone, Debug, Serialize)]
pub struct Arrangement {
    pub kind: Kind,
    pub l: usize,
    pub forms: Vec<Polynomial>,
    pub q: Polynomial,
}

impl Arrangement {
    pub fn build(kind: Kind, l: usize) -> Result<Self> {
        if !(2..=MAX_VARS).contains(&l) {
            return Err(Error::InvalidRange(format!("l = {l} outside 2..={MAX_VARS}")));
        }
        let x = |i: usize| Polynomial::var(l, i);
        let mut forms = Vec::new();
        if kind == Kind::B {
            forms.extend((0..l).map(x));
        }
        for i in 0..l {
            for j in i + 1..l {
                forms.push(&x(i) - &x(j));
                if kind != Kind::A {
                    forms.push(&x(i) + &x(j));
                }
            }
        }
        let q = forms.iter().fold(Polynomial::one(l), |acc, f| &acc * f);
        Ok(Arrangement { kind, l, forms, q })
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    /// `Q^{t_m}`.
    pub fn q_power(&self, m: usize) -> Polynomial {
        self.q.pow(t_m_exponent(self.l, m) as u32)
    }
}

/// `s_m = C(ℓ+m-1, m)`, the number of multi-indices of order `m`.
pub fn s_m_size(l: usize, m: usize) -> usize {
    binomial((l + m - 1) as u64, m as u64) as usize
}

/// `t_m = C(ℓ+m-2, m-1)`.
pub fn t_m_exponent(l: usize, m: usize) -> usize {
    binomial((l + m - 2) as u64, (m - 1) as u64) as usize
}

/// Rational points avoiding every hyperplane, deterministic.
pub(crate) fn generic_points(arr: &Arrangement, count: usize) -> Vec<Vec<Rational>> {
    const PRIMES: [i64; 24] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89];
    let mut out = Vec::new();
    let mut offset = 0;
    while out.len() < count && offset + arr.l <= PRIMES.len() {
        let p: Vec<Rational> = PRIMES[offset..offset + arr.l].iter().map(|&v| Rational::from_int(v)).collect();
        if arr.forms.iter().all(|f| !f.eval(&p).expect("dimension").is_zero()) {
            out.push(p);
        }
        offset += 1;
    }
    let mut k = 1i64;
    while out.len() < count {
        let p: Vec<Rational> = (0..arr.l as i64).map(|i| Rational::from_int(k * (i + 1) * (i + 2) + i)).collect();
        if arr.forms.iter().all(|f| !f.eval(&p).expect("dimension").is_zero()) {
            out.push(p);
        }
        k += 1;
    }
    out
}
