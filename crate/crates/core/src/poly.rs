//! Sparse multivariate polynomials and Laurent polynomials over ℚ.
//!
//! Both types store a vector of `(Monomial, Rational)` pairs sorted strictly
//! descending in lexicographic order of exponent vectors, with no zero
//! coefficients. [`LaurentPolynomial`] allows negative exponents;
//! [`Polynomial`] is the same representation restricted to nonnegative ones.
//!
//! Variables are numbered from 0 in the API and rendered from 1 (`x1`, `x2`, …).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Deref, Mul, Neg, Sub};

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::rational::Rational;

/// Largest supported number of variables.
pub const MAX_VARS: usize = 12;

/// Exponent vector; lanes past the ambient dimension are always zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial([i16; MAX_VARS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; MAX_VARS])
    }

    pub fn from_exponents(exps: &[i32]) -> Result<Self> {
        if exps.len() > MAX_VARS {
            return Err(Error::TooManyVariables(exps.len()));
        }
        let mut m = [0i16; MAX_VARS];
        for (slot, &e) in m.iter_mut().zip(exps) {
            *slot = i16::try_from(e).map_err(|_| Error::ExponentOverflow)?;
        }
        Ok(Monomial(m))
    }

    /// Single variable `x_var^exp`.
    pub fn var(var: usize, exp: i32) -> Self {
        let mut m = [0i16; MAX_VARS];
        m[var] = exp as i16;
        Monomial(m)
    }

    #[inline]
    pub fn exp(&self, var: usize) -> i32 {
        self.0[var] as i32
    }

    pub fn exponents(&self, nvars: usize) -> Vec<i32> {
        self.0[..nvars].iter().map(|&e| e as i32).collect()
    }

    #[inline]
    pub fn degree(&self) -> i32 {
        self.0.iter().map(|&e| e as i32).sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = self.0;
        for (a, b) in m.iter_mut().zip(other.0.iter()) {
            *a += *b;
        }
        Monomial(m)
    }

    /// Exponent-wise difference, which may be negative.
    #[inline]
    pub fn div(&self, other: &Monomial) -> Monomial {
        let mut m = self.0;
        for (a, b) in m.iter_mut().zip(other.0.iter()) {
            *a -= *b;
        }
        Monomial(m)
    }

    /// True when `other / self` has no negative exponent.
    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn inverse(&self) -> Monomial {
        let mut m = self.0;
        for a in m.iter_mut() {
            *a = -*a;
        }
        Monomial(m)
    }

    fn with_exp(&self, var: usize, exp: i32) -> Monomial {
        let mut m = self.0;
        m[var] = exp as i16;
        Monomial(m)
    }

    fn render(&self, nvars: usize, prefix: &str) -> String {
        let mut parts = Vec::new();
        for i in 0..nvars {
            match self.0[i] {
                0 => {}
                1 => parts.push(format!("{prefix}{}", i + 1)),
                e => parts.push(format!("{prefix}{}^{e}", i + 1)),
            }
        }
        parts.join("*")
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.0.iter().rposition(|&e| e != 0).map_or(0, |p| p + 1);
        write!(f, "{:?}", &self.0[..last])
    }
}

pub type Term = (Monomial, Rational);

/// Products with more term pairs than this are split across threads.
const PAR_MUL_THRESHOLD: usize = 1 << 16;

mod terms {
    use super::*;

    pub(super) fn normalize(mut v: Vec<Term>) -> Vec<Term> {
        v.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<Term> = Vec::with_capacity(v.len());
        for (m, c) in v {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += &c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        out
    }

    pub(super) fn add(a: &[Term], b: &[Term]) -> Vec<Term> {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = &a[i].1 + &b[j].1;
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        out
    }

    pub(super) fn neg(a: &[Term]) -> Vec<Term> {
        a.iter().map(|(m, c)| (*m, -c)).collect()
    }

    pub(super) fn scale(a: &[Term], m: &Monomial, c: &Rational) -> Vec<Term> {
        if c.is_zero() {
            return Vec::new();
        }
        a.iter().map(|(am, ac)| (am.mul(m), ac * c)).collect()
    }

    fn mul_seq(a: &[Term], b: &[Term]) -> Vec<Term> {
        let mut acc: FxHashMap<Monomial, Rational> =
            FxHashMap::with_capacity_and_hasher(a.len() * b.len() / 2 + 1, Default::default());
        for (am, ac) in a {
            for (bm, bc) in b {
                let p = ac * bc;
                acc.entry(am.mul(bm))
                    .and_modify(|c| *c += &p)
                    .or_insert(p);
            }
        }
        let mut out: Vec<Term> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        out.sort_unstable_by(|x, y| y.0.cmp(&x.0));
        out
    }

    pub(super) fn mul(a: &[Term], b: &[Term]) -> Vec<Term> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        // monomial shifts preserve the order
        if a.len() == 1 {
            return scale(b, &a[0].0, &a[0].1);
        }
        if b.len() == 1 {
            return scale(a, &b[0].0, &b[0].1);
        }
        let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
        if long.len() * short.len() < PAR_MUL_THRESHOLD || par::threads() < 2 {
            return mul_seq(long, short);
        }
        let chunk = long.len().div_ceil(par::threads() * 2).max(1);
        let chunks: Vec<&[Term]> = long.chunks(chunk).collect();
        let parts = par::map(&chunks, |c| mul_seq(c, short));
        parts.into_iter().fold(Vec::new(), |acc, p| add(&acc, &p))
    }

    /// Exact division by a polynomial, returning the quotient.
    pub(super) fn divide(a: &[Term], b: &[Term], require_nonneg: bool) -> Result<Vec<Term>> {
        let (lm, lc) = b.first().ok_or(Error::DivisionByZero)?;
        if a.is_empty() {
            return Ok(Vec::new());
        }
        if b.len() == 1 {
            let inv = lc.recip()?;
            let mut out = Vec::with_capacity(a.len());
            for (am, ac) in a {
                if require_nonneg && !lm.divides(am) {
                    return Err(Error::NotDivisible);
                }
                out.push((am.div(lm), ac * &inv));
            }
            return Ok(out);
        }
        let inv = lc.recip()?;
        let mut rem: BTreeMap<Monomial, Rational> = a.iter().cloned().collect();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            // a single divisor under a monomial order: the leading-term test
            // decides divisibility, so there is no stall case to fall back from
            if require_nonneg && !lm.divides(&m) {
                return Err(Error::NotDivisible);
            }
            let t = m.div(lm);
            if !require_nonneg && !b.iter().all(|(bm, _)| bm.mul(&t) <= m) {
                return Err(Error::NotDivisible);
            }
            let q = &c * &inv;
            for (bm, bc) in &b[1..] {
                let key = bm.mul(&t);
                let delta = &q * bc;
                match rem.entry(key) {
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let v = e.get() - &delta;
                        if v.is_zero() {
                            e.remove();
                        } else {
                            *e.get_mut() = v;
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(-delta);
                    }
                }
            }
            quot.push((t, q));
        }
        Ok(quot)
    }
}

/// A Laurent polynomial in `nvars` variables with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    nvars: usize,
    terms: Vec<Term>,
}

/// A polynomial (all exponents nonnegative).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial(LaurentPolynomial);

fn check_nvars(n: usize) -> Result<()> {
    if n > MAX_VARS {
        Err(Error::TooManyVariables(n))
    } else {
        Ok(())
    }
}

impl LaurentPolynomial {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables are supported");
        LaurentPolynomial { nvars, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.push((Monomial::one(), c));
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    /// The variable `x_{var+1}`.
    pub fn var(nvars: usize, var: usize) -> Self {
        assert!(var < nvars, "variable index out of range");
        Self::term(nvars, Monomial::var(var, 1), Rational::one())
    }

    pub fn term(nvars: usize, m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.push((m, c));
        }
        p
    }

    /// Builds from arbitrary (possibly repeated, unsorted) terms.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<i32>, Rational)>) -> Result<Self> {
        check_nvars(nvars)?;
        let mut v = Vec::new();
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch { left: nvars, right: e.len() });
            }
            v.push((Monomial::from_exponents(&e)?, c));
        }
        Ok(LaurentPolynomial { nvars, terms: terms::normalize(v) })
    }

    pub(crate) fn from_raw(nvars: usize, raw: Vec<Term>) -> Self {
        LaurentPolynomial { nvars, terms: terms::normalize(raw) }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms in descending lexicographic order.
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_term(&self) -> Option<&Term> {
        self.terms.first()
    }

    /// The value if this is a constant (including zero).
    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if *m == Monomial::one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms
            .binary_search_by(|(tm, _)| m.cmp(tm))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_nonnegative())
    }

    pub fn into_polynomial(self) -> Result<Polynomial> {
        if self.is_polynomial() {
            Ok(Polynomial(self))
        } else {
            Err(Error::NotPolynomial)
        }
    }

    pub fn to_polynomial(&self) -> Result<Polynomial> {
        self.clone().into_polynomial()
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.nvars == other.nvars {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { left: self.nvars, right: other.nvars })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(LaurentPolynomial { nvars: self.nvars, terms: terms::add(&self.terms, &other.terms) })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(LaurentPolynomial {
            nvars: self.nvars,
            terms: terms::add(&self.terms, &terms::neg(&other.terms)),
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(LaurentPolynomial { nvars: self.nvars, terms: terms::mul(&self.terms, &other.terms) })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        LaurentPolynomial { nvars: self.nvars, terms: terms::scale(&self.terms, &Monomial::one(), c) }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Self {
        LaurentPolynomial { nvars: self.nvars, terms: terms::scale(&self.terms, m, c) }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Total degree: the largest exponent sum over all terms.
    pub fn degree(&self) -> Result<i32> {
        self.terms.iter().map(|(m, _)| m.degree()).max().ok_or(Error::ZeroPolynomial)
    }

    /// Zero counts as homogeneous.
    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m0, _)) => {
                let d = m0.degree();
                self.terms.iter().all(|(m, _)| m.degree() == d)
            }
        }
    }

    /// Exponent-wise minimum over all terms (zero vector for the zero polynomial).
    pub fn min_exponents(&self) -> Monomial {
        let mut out = match self.terms.first() {
            Some((m, _)) => *m,
            None => return Monomial::one(),
        };
        for (m, _) in &self.terms[1..] {
            for i in 0..self.nvars {
                out.0[i] = out.0[i].min(m.0[i]);
            }
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch { left: self.nvars, right: point.len() });
        }
        let mut cache: FxHashMap<(usize, i32), Rational> = FxHashMap::default();
        let mut sum = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, x) in point.iter().enumerate() {
                let e = m.exp(i);
                if e == 0 {
                    continue;
                }
                let p = match cache.get(&(i, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let p = x.powi(e)?;
                        cache.insert((i, e), p.clone());
                        p
                    }
                };
                t *= &p;
            }
            sum += &t;
        }
        Ok(sum)
    }

    /// Composes `self(values[0], …, values[n-1])`.
    ///
    /// A negative exponent on variable `i` requires `values[i]` to be a
    /// single nonzero term, whose inverse is again a Laurent monomial.
    pub fn substitute(&self, values: &[LaurentPolynomial]) -> Result<LaurentPolynomial> {
        if values.len() != self.nvars {
            return Err(Error::DimensionMismatch { left: self.nvars, right: values.len() });
        }
        let target = match values.first() {
            Some(v) => v.nvars,
            None => return Ok(self.clone()),
        };
        for v in values {
            if v.nvars != target {
                return Err(Error::DimensionMismatch { left: target, right: v.nvars });
            }
        }
        let mut cache: FxHashMap<(usize, i32), LaurentPolynomial> = FxHashMap::default();
        let mut acc: Vec<Term> = Vec::new();
        for (m, c) in &self.terms {
            let mut t = LaurentPolynomial::constant(target, c.clone());
            for (i, v) in values.iter().enumerate() {
                let e = m.exp(i);
                if e == 0 {
                    continue;
                }
                let p = match cache.get(&(i, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let p = if e > 0 {
                            v.pow(e as u32)
                        } else {
                            match v.terms.as_slice() {
                                [(vm, vc)] => LaurentPolynomial::term(target, vm.inverse(), vc.recip()?)
                                    .pow(e.unsigned_abs()),
                                _ => return Err(Error::NotPolynomial),
                            }
                        };
                        cache.insert((i, e), p.clone());
                        p
                    }
                };
                t = &t * &p;
            }
            acc.extend(t.terms);
        }
        Ok(LaurentPolynomial::from_raw(target, acc))
    }

    /// Swaps variables `i` and `j`.
    pub fn swap_vars(&self, i: usize, j: usize) -> Self {
        let raw = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = m.0;
                e.swap(i, j);
                (Monomial(e), c.clone())
            })
            .collect();
        LaurentPolynomial::from_raw(self.nvars, raw)
    }

    /// Invariance under every transposition of variables.
    pub fn is_symmetric(&self) -> bool {
        (0..self.nvars.saturating_sub(1)).all(|i| self.swap_vars(i, i + 1) == *self)
    }

    /// Renders with a chosen variable prefix, e.g. `t` gives `t1^2*t2`.
    pub fn render(&self, prefix: &str) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mono = m.render(self.nvars, prefix);
                if mono.is_empty() {
                    c.to_string()
                } else if c.is_one() {
                    mono
                } else if *c == -Rational::one() {
                    format!("-{mono}")
                } else {
                    format!("{c}*{mono}")
                }
            })
            .collect();
        parts.join(" + ")
    }

    /// Parses sums of products such as `3/2*x1^2*x2 + -x3 - 4`.
    /// Any alphabetic prefix is accepted for variables; the digits give the
    /// 1-based index.
    pub fn parse(s: &str, nvars: usize) -> Result<Self> {
        parse::parse(s, nvars)
    }
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial(LaurentPolynomial::zero(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        Polynomial(LaurentPolynomial::one(nvars))
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Polynomial(LaurentPolynomial::constant(nvars, c))
    }

    pub fn var(nvars: usize, var: usize) -> Self {
        Polynomial(LaurentPolynomial::var(nvars, var))
    }

    pub fn monomial(nvars: usize, exps: &[i32], c: Rational) -> Result<Self> {
        if exps.len() != nvars {
            return Err(Error::DimensionMismatch { left: nvars, right: exps.len() });
        }
        if exps.iter().any(|&e| e < 0) {
            return Err(Error::NotPolynomial);
        }
        Ok(Polynomial(LaurentPolynomial::term(nvars, Monomial::from_exponents(exps)?, c)))
    }

    /// `Σ coeffs[i]·x_{i+1}`.
    pub fn linear(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let raw = coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (Monomial::var(i, 1), c.clone()))
            .collect();
        Polynomial(LaurentPolynomial::from_raw(n, raw))
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<i32>, Rational)>) -> Result<Self> {
        LaurentPolynomial::from_terms(nvars, terms)?.into_polynomial()
    }

    pub fn as_laurent(&self) -> &LaurentPolynomial {
        &self.0
    }

    pub fn into_laurent(self) -> LaurentPolynomial {
        self.0
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.0.checked_add(&other.0).map(Polynomial)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.0.checked_sub(&other.0).map(Polynomial)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.0.checked_mul(&other.0).map(Polynomial)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Polynomial(self.0.scale(c))
    }

    pub fn pow(&self, exp: u32) -> Self {
        Polynomial(self.0.pow(exp))
    }

    /// `∂^times f / ∂x_var^times`.
    pub fn derivative(&self, var: usize, times: u32) -> Self {
        if times == 0 {
            return self.clone();
        }
        let raw = self
            .0
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let e = m.exp(var);
                if e < times as i32 {
                    return None;
                }
                // falling factorial e (e-1) … (e-times+1)
                let f: i64 = (0..times as i64).map(|k| e as i64 - k).product();
                Some((m.with_exp(var, e - times as i32), c * &Rational::from_int(f)))
            })
            .collect();
        Polynomial(LaurentPolynomial::from_raw(self.0.nvars, raw))
    }

    /// Exact quotient `self / divisor`; `NotDivisible` if there is a remainder.
    pub fn exact_divide(&self, divisor: &Polynomial) -> Result<Polynomial> {
        self.0.same_dim(&divisor.0)?;
        let q = terms::divide(&self.0.terms, &divisor.0.terms, true)?;
        Ok(Polynomial(LaurentPolynomial { nvars: self.0.nvars, terms: q }))
    }

    /// Whether `divisor` divides `self` in the polynomial ring.
    ///
    /// Linear divisors are tested by substituting the hyperplane into `self`
    /// and checking for zero, avoiding a full division.
    pub fn is_divisible_by(&self, divisor: &Polynomial) -> Result<bool> {
        self.0.same_dim(&divisor.0)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(true);
        }
        if divisor.is_linear_form() {
            return Ok(self.restrict_to_hyperplane(divisor)?.is_zero());
        }
        match self.exact_divide(divisor) {
            Ok(_) => Ok(true),
            Err(Error::NotDivisible) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// Nonzero homogeneous polynomial of degree one.
    pub fn is_linear_form(&self) -> bool {
        !self.is_zero() && self.0.terms.iter().all(|(m, _)| m.degree() == 1 && m.is_nonnegative())
    }

    /// Image of `self` modulo the linear form `p`: the variable with the
    /// largest index among those with nonzero coefficient in `p` is
    /// eliminated. Zero iff `p` divides `self`.
    pub fn restrict_to_hyperplane(&self, p: &Polynomial) -> Result<Polynomial> {
        if !p.is_linear_form() {
            return Err(Error::NotLinear);
        }
        let n = self.0.nvars;
        // terms are sorted descending lex, so the last term holds the
        // highest-index variable
        let (pivot_mono, pivot_coef) = p.0.terms.last().expect("nonzero");
        let r = (0..n).find(|&i| pivot_mono.exp(i) == 1).expect("linear");
        let inv = -pivot_coef.recip()?;
        let mut replacement = Vec::new();
        for (m, c) in &p.0.terms {
            if m != pivot_mono {
                replacement.push((*m, c * &inv));
            }
        }
        let replacement = LaurentPolynomial::from_raw(n, replacement);
        let values: Vec<LaurentPolynomial> = (0..n)
            .map(|i| if i == r { replacement.clone() } else { LaurentPolynomial::var(n, i) })
            .collect();
        self.0.substitute(&values)?.into_polynomial()
    }

    /// Composes with polynomial values; the result is a polynomial.
    pub fn substitute(&self, values: &[Polynomial]) -> Result<Polynomial> {
        let vals: Vec<LaurentPolynomial> = values.iter().map(|v| v.0.clone()).collect();
        self.0.substitute(&vals)?.into_polynomial()
    }

    pub fn parse(s: &str, nvars: usize) -> Result<Self> {
        LaurentPolynomial::parse(s, nvars)?.into_polynomial()
    }
}

impl Deref for Polynomial {
    type Target = LaurentPolynomial;
    fn deref(&self) -> &LaurentPolynomial {
        &self.0
    }
}

impl From<Polynomial> for LaurentPolynomial {
    fn from(p: Polynomial) -> Self {
        p.0
    }
}

impl TryFrom<LaurentPolynomial> for Polynomial {
    type Error = Error;
    fn try_from(p: LaurentPolynomial) -> Result<Self> {
        p.into_polynomial()
    }
}

macro_rules! binop {
    ($ty:ident, $tr:ident, $m:ident, $checked:ident) => {
        impl<'a> $tr<&'a $ty> for &'a $ty {
            type Output = $ty;
            /// Panics on a dimension mismatch; the `checked_*` methods return an error instead.
            fn $m(self, rhs: &'a $ty) -> $ty {
                self.$checked(rhs).expect("polynomial dimension mismatch")
            }
        }
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty {
                (&self).$m(&rhs)
            }
        }
    };
}
binop!(LaurentPolynomial, Add, add, checked_add);
binop!(LaurentPolynomial, Sub, sub, checked_sub);
binop!(LaurentPolynomial, Mul, mul, checked_mul);
binop!(Polynomial, Add, add, checked_add);
binop!(Polynomial, Sub, sub, checked_sub);
binop!(Polynomial, Mul, mul, checked_mul);

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial { nvars: self.nvars, terms: terms::neg(&self.terms) }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial(-&self.0)
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}

impl fmt::Debug for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: Vec<i32>,
    coef: Rational,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    vars: usize,
    terms: Vec<TermJson>,
}

impl Serialize for LaurentPolynomial {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            vars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson { exp: m.exponents(self.nvars), coef: c.clone() })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let j = PolyJson::deserialize(deserializer)?;
        LaurentPolynomial::from_terms(j.vars, j.terms.into_iter().map(|t| (t.exp, t.coef)))
            .map_err(serde::de::Error::custom)
    }
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        LaurentPolynomial::deserialize(deserializer)?
            .into_polynomial()
            .map_err(serde::de::Error::custom)
    }
}

mod parse {
    use super::*;

    struct Lexer<'a> {
        s: &'a [u8],
        pos: usize,
    }

    impl<'a> Lexer<'a> {
        fn skip_ws(&mut self) {
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
        }

        fn peek(&mut self) -> Option<u8> {
            self.skip_ws();
            self.s.get(self.pos).copied()
        }

        fn eat(&mut self, c: u8) -> bool {
            if self.peek() == Some(c) {
                self.pos += 1;
                true
            } else {
                false
            }
        }

        fn digits(&mut self) -> Option<&'a str> {
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            (self.pos > start).then(|| std::str::from_utf8(&self.s[start..self.pos]).unwrap())
        }

        fn err(&self, msg: &str) -> Error {
            Error::Parse(format!("{msg} at byte {}", self.pos))
        }
    }

    pub(super) fn parse(s: &str, nvars: usize) -> Result<LaurentPolynomial> {
        check_nvars(nvars)?;
        let mut lx = Lexer { s: s.as_bytes(), pos: 0 };
        let mut raw: Vec<Term> = Vec::new();
        let mut first = true;
        loop {
            let mut sign = 1i64;
            if lx.peek().is_none() {
                if first {
                    return Err(lx.err("empty expression"));
                }
                break;
            }
            if !first {
                if lx.eat(b'+') {
                } else if lx.eat(b'-') {
                    sign = -1;
                } else {
                    return Err(lx.err("expected `+` or `-`"));
                }
            }
            while let Some(c) = lx.peek() {
                if c == b'-' {
                    lx.pos += 1;
                    sign = -sign;
                } else if c == b'+' {
                    lx.pos += 1;
                } else {
                    break;
                }
            }
            let (m, c) = parse_product(&mut lx, nvars)?;
            raw.push((m, &c * &Rational::from_int(sign)));
            first = false;
        }
        Ok(LaurentPolynomial::from_raw(nvars, raw))
    }

    fn parse_product(lx: &mut Lexer, nvars: usize) -> Result<(Monomial, Rational)> {
        let mut coef = Rational::one();
        let mut mono = Monomial::one();
        loop {
            match lx.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let num = lx.digits().unwrap();
                    let mut text = num.to_string();
                    if lx.eat(b'/') {
                        let den = lx.digits().ok_or_else(|| lx.err("expected denominator"))?;
                        text = format!("{num}/{den}");
                    }
                    coef *= &text.parse::<Rational>()?;
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    while lx.pos < lx.s.len() && lx.s[lx.pos].is_ascii_alphabetic() {
                        lx.pos += 1;
                    }
                    let idx: usize = lx
                        .digits()
                        .ok_or_else(|| lx.err("expected variable index"))?
                        .parse()
                        .map_err(|_| lx.err("bad variable index"))?;
                    if idx == 0 || idx > nvars {
                        return Err(lx.err(&format!("variable index {idx} outside 1..={nvars}")));
                    }
                    let mut e: i32 = 1;
                    if lx.eat(b'^') {
                        let neg = lx.eat(b'-');
                        let d: i32 = lx
                            .digits()
                            .ok_or_else(|| lx.err("expected exponent"))?
                            .parse()
                            .map_err(|_| lx.err("bad exponent"))?;
                        e = if neg { -d } else { d };
                    }
                    mono = mono.mul(&Monomial::var(idx - 1, e));
                }
                _ => return Err(lx.err("expected number or variable")),
            }
            if !lx.eat(b'*') {
                return Ok((mono, coef));
            }
        }
    }
}
