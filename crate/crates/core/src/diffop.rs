//! Constant-order differential operators `θ = Σ_{|α|=m} f_α ∂^α` with
//! polynomial coefficients, membership in the logarithmic module of an
//! arrangement, and the determinant criterion for bases.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arrangement::{generic_points, s_m_size, t_m_exponent, Arrangement};
use crate::error::{Error, Result};
use crate::matrix::{rational_determinant, PolyMatrix};
use crate::par;
use crate::poly::{Monomial, Polynomial};
use crate::rational::{factorial, Rational};

/// Exponent vector of a derivative `∂^α`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(parts: Vec<u32>) -> Self {
        MultiIndex(parts)
    }

    /// `e_k · n`: the index of `∂_k^n` (k is 0-based).
    pub fn pure(l: usize, k: usize, n: u32) -> Self {
        let mut v = vec![0; l];
        v[k] = n;
        MultiIndex(v)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|α|`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `α! = α_1!⋯α_ℓ!`.
    pub fn factorial(&self) -> BigInt {
        self.0.iter().map(|&a| factorial(a)).product()
    }

    pub fn monomial(&self) -> Monomial {
        let e: Vec<i32> = self.0.iter().map(|&a| a as i32).collect();
        Monomial::from_exponents(&e).expect("bounded length")
    }

    /// `x^α / α!`.
    pub fn scaled_monomial(&self) -> Polynomial {
        let e: Vec<i32> = self.0.iter().map(|&a| a as i32).collect();
        let c = Rational::from(self.factorial()).recip().expect("nonzero factorial");
        Polynomial::monomial(self.0.len(), &e, c).expect("nonnegative")
    }

    /// All `α ∈ ℕ^ℓ` with `|α| = m`, in descending lexicographic order.
    pub fn enumerate(l: usize, m: u32) -> Vec<MultiIndex> {
        fn rec(prefix: &mut Vec<u32>, left: u32, l: usize, out: &mut Vec<MultiIndex>) {
            if prefix.len() + 1 == l {
                prefix.push(left);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for v in (0..=left).rev() {
                prefix.push(v);
                rec(prefix, left - v, l, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if l > 0 {
            rec(&mut Vec::with_capacity(l), m, l, &mut out);
        }
        out
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

/// `Σ_{|α|=m} f_α ∂^α` on ℓ variables. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct DiffOperator {
    l: usize,
    m: u32,
    terms: BTreeMap<MultiIndex, Polynomial>,
}

impl DiffOperator {
    pub fn zero(l: usize, m: u32) -> Self {
        DiffOperator { l, m, terms: BTreeMap::new() }
    }

    pub fn from_terms(l: usize, m: u32, terms: impl IntoIterator<Item = (MultiIndex, Polynomial)>) -> Result<Self> {
        let mut op = Self::zero(l, m);
        for (alpha, f) in terms {
            op.add_term(alpha, f)?;
        }
        Ok(op)
    }

    /// `f·∂^α`.
    pub fn single(alpha: MultiIndex, f: Polynomial) -> Result<Self> {
        let l = alpha.len();
        let m = alpha.order();
        Self::from_terms(l, m, [(alpha, f)])
    }

    /// Adds `f·∂^α` to the operator.
    pub fn add_term(&mut self, alpha: MultiIndex, f: Polynomial) -> Result<()> {
        if alpha.len() != self.l {
            return Err(Error::InvalidMultiIndex(format!("{alpha} has length {} but l = {}", alpha.len(), self.l)));
        }
        if alpha.order() != self.m {
            return Err(Error::InvalidMultiIndex(format!("|{alpha}| = {} but m = {}", alpha.order(), self.m)));
        }
        if f.nvars() != self.l {
            return Err(Error::DimensionMismatch { left: self.l, right: f.nvars() });
        }
        if f.is_zero() {
            return Ok(());
        }
        match self.terms.remove(&alpha) {
            Some(g) => {
                let s = &g + &f;
                if !s.is_zero() {
                    self.terms.insert(alpha, s);
                }
            }
            None => {
                self.terms.insert(alpha, f);
            }
        }
        Ok(())
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn order(&self) -> u32 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending lexicographic order of α.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Polynomial)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> Polynomial {
        self.terms.get(alpha).cloned().unwrap_or_else(|| Polynomial::zero(self.l))
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.l != other.l {
            return Err(Error::DimensionMismatch { left: self.l, right: other.l });
        }
        if self.m != other.m {
            return Err(Error::MixedOrders);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (a, f) in &other.terms {
            out.add_term(a.clone(), f.clone())?;
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map_coefficients(|f| f.scale(c))
    }

    /// Multiplies every coefficient by `g`.
    pub fn mul_poly(&self, g: &Polynomial) -> Result<Self> {
        self.try_map_coefficients(|f| f.checked_mul(g))
    }

    /// Divides every coefficient exactly by `g`.
    pub fn exact_divide(&self, g: &Polynomial) -> Result<Self> {
        self.try_map_coefficients(|f| f.exact_divide(g))
    }

    pub fn map_coefficients(&self, f: impl Fn(&Polynomial) -> Polynomial) -> Self {
        self.try_map_coefficients(|p| Ok(f(p))).expect("infallible")
    }

    pub fn try_map_coefficients(&self, f: impl Fn(&Polynomial) -> Result<Polynomial>) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (a, p) in &self.terms {
            let q = f(p)?;
            if !q.is_zero() {
                terms.insert(a.clone(), q);
            }
        }
        Ok(DiffOperator { l: self.l, m: self.m, terms })
    }

    /// `θ(f) = Σ f_α ∂^α f`.
    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial> {
        if f.nvars() != self.l {
            return Err(Error::DimensionMismatch { left: self.l, right: f.nvars() });
        }
        let mut out = Polynomial::zero(self.l);
        for (alpha, c) in &self.terms {
            let mut d = f.clone();
            for (i, &a) in alpha.0.iter().enumerate() {
                if d.is_zero() {
                    break;
                }
                d = d.derivative(i, a);
            }
            if !d.is_zero() {
                out = &out + &(c * &d);
            }
        }
        Ok(out)
    }

    /// Common degree of all coefficients.
    pub fn degree(&self) -> Result<i32> {
        let mut deg = None;
        for f in self.terms.values() {
            if !f.is_homogeneous() {
                return Err(Error::NotHomogeneous);
            }
            let d = f.degree()?;
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return Err(Error::NotHomogeneous),
                _ => {}
            }
        }
        deg.ok_or(Error::ZeroPolynomial)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree().is_ok()
    }

    /// Whether `θ(p·x^β) ∈ p·S` for every `|β| = m-1`.
    pub fn member_of_form(&self, p: &Polynomial) -> Result<bool> {
        if p.nvars() != self.l {
            return Err(Error::DimensionMismatch { left: self.l, right: p.nvars() });
        }
        if !p.is_linear_form() {
            return Err(Error::NotLinear);
        }
        if self.m == 0 {
            return Ok(true);
        }
        for beta in MultiIndex::enumerate(self.l, self.m - 1) {
            let e: Vec<i32> = beta.0.iter().map(|&b| b as i32).collect();
            let xb = Polynomial::monomial(self.l, &e, Rational::one())?;
            let image = self.apply(&(p * &xb))?;
            if !image.restrict_to_hyperplane(p)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Membership in the module of the arrangement: every hyperplane passes.
    pub fn member_of(&self, arr: &Arrangement) -> Result<bool> {
        if arr.l != self.l {
            return Err(Error::DimensionMismatch { left: self.l, right: arr.l });
        }
        let per_form = par::map(&arr.forms, |p| self.member_of_form(p));
        for r in per_form {
            if !r? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(alpha, c)| {
                let d: Vec<String> = alpha
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, &a)| a > 0)
                    .map(|(i, &a)| if a == 1 { format!("d{}", i + 1) } else { format!("d{}^{a}", i + 1) })
                    .collect();
                let d = d.join("*");
                if d.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{d}")
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct OpTermJson {
    alpha: Vec<u32>,
    coef: Polynomial,
}

#[derive(Serialize, Deserialize)]
struct OpJson {
    l: usize,
    m: u32,
    terms: Vec<OpTermJson>,
}

impl Serialize for DiffOperator {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        OpJson {
            l: self.l,
            m: self.m,
            terms: self
                .terms()
                .map(|(a, c)| OpTermJson { alpha: a.0.clone(), coef: c.clone() })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DiffOperator {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let j = OpJson::deserialize(deserializer)?;
        DiffOperator::from_terms(j.l, j.m, j.terms.into_iter().map(|t| (MultiIndex(t.alpha), t.coef)))
            .map_err(serde::de::Error::custom)
    }
}

/// Checks that all operators share ℓ and m and that there are `s_m` of them.
fn check_family(ops: &[DiffOperator]) -> Result<(usize, u32)> {
    let first = ops.first().ok_or(Error::WrongOperatorCount { expected: 1, found: 0 })?;
    let (l, m) = (first.l, first.m);
    if ops.iter().any(|o| o.l != l || o.m != m) {
        return Err(Error::MixedOrders);
    }
    let expected = s_m_size(l, m as usize);
    if ops.len() != expected {
        return Err(Error::WrongOperatorCount { expected, found: ops.len() });
    }
    Ok((l, m))
}

/// The `s_m × s_m` matrix whose `(i, j)` entry is the coefficient of
/// `∂^{α(j)}` in `θ_i`, columns in descending lexicographic order of α.
pub fn coefficient_matrix(ops: &[DiffOperator]) -> Result<PolyMatrix> {
    let (l, m) = check_family(ops)?;
    let cols = MultiIndex::enumerate(l, m);
    PolyMatrix::from_rows(ops.iter().map(|op| cols.iter().map(|a| op.coefficient(a)).collect()).collect())
}

/// Degrees of the operators, in order.
pub fn exponents(ops: &[DiffOperator]) -> Result<Vec<i32>> {
    ops.iter()
        .enumerate()
        .map(|(index, op)| op.degree().map_err(|_| Error::NonHomogeneous { index }))
        .collect()
}

/// How the determinant criterion is decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertifyMethod {
    /// `Expanded` for at most [`EXPANDED_MAX_SIZE`] operators, else `Saito`.
    Auto,
    /// Expand the determinant and divide it by `Q^{t_m}`.
    Expanded,
    /// Use membership and degrees, then evaluate the determinant at a
    /// rational point off the arrangement.
    Saito,
}

impl std::str::FromStr for CertifyMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(CertifyMethod::Auto),
            "expanded" => Ok(CertifyMethod::Expanded),
            "saito" => Ok(CertifyMethod::Saito),
            _ => Err(Error::Parse(format!("unknown certification method `{s}`"))),
        }
    }
}

/// Largest family size that `Auto` certifies by full expansion.
pub const EXPANDED_MAX_SIZE: usize = 15;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub is_basis: bool,
    /// The expanded determinant; only computed by [`CertifyMethod::Expanded`].
    pub det: Option<Polynomial>,
    /// The constant with `det = c·Q^{t_m}`, when it exists.
    pub c: Option<Rational>,
    pub t_m: usize,
    pub exponents: Vec<i32>,
    pub method: CertifyMethod,
}

/// Decides whether `ops` is a basis of the order-m module of `arr` via the
/// criterion `det M = c·Q^{t_m}` with `c ≠ 0`.
pub fn saito_holm_certify(ops: &[DiffOperator], arr: &Arrangement) -> Result<Certificate> {
    saito_holm_certify_with(ops, arr, CertifyMethod::Auto)
}

pub fn saito_holm_certify_with(ops: &[DiffOperator], arr: &Arrangement, method: CertifyMethod) -> Result<Certificate> {
    let (l, m) = check_family(ops)?;
    if l != arr.l {
        return Err(Error::DimensionMismatch { left: l, right: arr.l });
    }
    let t_m = t_m_exponent(l, m as usize);
    let membership = par::map(ops, |op| op.member_of(arr));
    for (index, r) in membership.into_iter().enumerate() {
        if !r? {
            return Err(Error::NonMember { index });
        }
    }
    let method = match method {
        CertifyMethod::Auto if ops.len() <= EXPANDED_MAX_SIZE => CertifyMethod::Expanded,
        CertifyMethod::Auto => CertifyMethod::Saito,
        other => other,
    };
    let not_basis = |det: Option<Polynomial>, exponents: Vec<i32>| Certificate {
        is_basis: false,
        det,
        c: None,
        t_m,
        exponents,
        method,
    };
    // a zero operator makes the determinant vanish
    if ops.iter().any(DiffOperator::is_zero) {
        let det = (method == CertifyMethod::Expanded).then(|| Polynomial::zero(l));
        return Ok(not_basis(det, Vec::new()));
    }
    let exps = exponents(ops)?;
    let matrix = coefficient_matrix(ops)?;

    if method == CertifyMethod::Expanded {
        let det = matrix.determinant()?;
        if det.is_zero() {
            return Ok(not_basis(Some(det), exps));
        }
        let c = match det.exact_divide(&arr.q_power(m as usize)) {
            Ok(q) => q.constant_value().filter(|c| !c.is_zero()),
            Err(Error::NotDivisible) => None,
            Err(e) => return Err(e),
        };
        return Ok(Certificate { is_basis: c.is_some(), det: Some(det), c, t_m, exponents: exps, method });
    }

    // Membership puts t_m columns of the matrix, written in coordinates
    // adapted to p_H, inside p_H·S. So p_H^{t_m} divides det for every H,
    // and with the forms pairwise coprime Q^{t_m} divides det. Equal degrees
    // leave a constant quotient, which one evaluation determines.
    let total: i64 = exps.iter().map(|&d| d as i64).sum();
    if total != (t_m * arr.len()) as i64 {
        return Ok(not_basis(None, exps));
    }
    let points = generic_points(arr, 2);
    let constants: Vec<Rational> = points
        .iter()
        .map(|p| {
            let d = rational_determinant(matrix.eval(p)?);
            let qp = arr.q.eval(p)?.pow(t_m as u32);
            d.checked_div(&qp)
        })
        .collect::<Result<_>>()?;
    if constants[0] != constants[1] {
        return Err(Error::CertificationFailed(format!(
            "quotient det/Q^t differs between sample points: {} vs {}",
            constants[0], constants[1]
        )));
    }
    let c = constants.into_iter().next().filter(|c| !c.is_zero());
    Ok(Certificate { is_basis: c.is_some(), det: None, c, t_m, exponents: exps, method })
}
