//! Explicit bases of the order-two operator modules of the A, B and D
//! arrangements: pure-power operators `η_k` and symmetric-function operators
//! `θ_λ`.

use serde::Serialize;

use crate::arrangement::Arrangement;
use crate::diffop::{saito_holm_certify_with, Certificate, CertifyMethod, DiffOperator, MultiIndex};
use crate::error::{Error, Result};
use crate::par;
use crate::poly::{LaurentPolynomial, Monomial, Polynomial, MAX_VARS};
use crate::rational::{factorial, Rational};
use crate::schur::{enumerate_lambda, schur, x_alpha, Partition};
use crate::Kind;

fn check_k(k: usize, l: usize) -> Result<()> {
    if k == 0 || k > l {
        return Err(Error::InvalidRange(format!("k = {k} outside 1..={l}")));
    }
    Ok(())
}

fn inv_factorial(n: u32) -> Rational {
    Rational::from(factorial(n)).recip().expect("nonzero")
}

/// `h^A_k = Π_{j≠k}(x_k - x_j)` or `h^B_k = x_k·Π_{j≠k}(x_k² - x_j²)`;
/// kind D gives `h^D_k = Π_{j≠k}(x_k² - x_j²)`. `k` is 1-based.
pub fn h(kind: Kind, k: usize, l: usize) -> Result<Polynomial> {
    check_k(k, l)?;
    let x = |i| Polynomial::var(l, i);
    let xk = x(k - 1);
    let mut out = match kind {
        Kind::B => xk.clone(),
        _ => Polynomial::one(l),
    };
    for j in (0..l).filter(|&j| j != k - 1) {
        let f = match kind {
            Kind::A => &xk - &x(j),
            _ => &xk.pow(2) - &x(j).pow(2),
        };
        out = &out * &f;
    }
    Ok(out)
}

/// `η_k = h_k·(1/m!)∂_k^m` for kinds A and B (`k` is 1-based).
pub fn eta(kind: Kind, k: usize, l: usize, m: u32) -> Result<DiffOperator> {
    if kind == Kind::D {
        if m != 2 {
            return Err(Error::InvalidRange("type D operators are defined for m = 2 only".into()));
        }
        return eta_d(k, l);
    }
    let coef = h(kind, k, l)?.scale(&inv_factorial(m));
    DiffOperator::single(MultiIndex::pure(l, k - 1, m), coef)
}

/// `Σ_{|α|=m} pre·f(x_α)·(1/α!)∂^α`, requiring polynomial coefficients.
fn theta_with_prefactor(f: &LaurentPolynomial, l: usize, m: u32, pre: Option<&LaurentPolynomial>) -> Result<DiffOperator> {
    if f.nvars() != m as usize {
        return Err(Error::DimensionMismatch { left: m as usize, right: f.nvars() });
    }
    if !f.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let alphas = MultiIndex::enumerate(l, m);
    let coefs = par::map(&alphas, |alpha| -> Result<Polynomial> {
        let vals: Vec<LaurentPolynomial> = x_alpha(alpha, m as usize, false)?
            .into_iter()
            .map(Polynomial::into_laurent)
            .collect();
        let mut g = f.substitute(&vals)?;
        if let Some(p) = pre {
            g = &g * p;
        }
        let scale = Rational::from(alpha.factorial()).recip()?;
        g.scale(&scale).into_polynomial()
    });
    let mut op = DiffOperator::zero(l, m);
    for (alpha, c) in alphas.into_iter().zip(coefs) {
        op.add_term(alpha, c?)?;
    }
    Ok(op)
}

/// `θ_f = Σ_{|α|=m} f(x_α)(1/α!)∂^α` for a symmetric `f` in m variables.
pub fn theta_from_symmetric(f: &LaurentPolynomial, l: usize, m: u32) -> Result<DiffOperator> {
    theta_with_prefactor(f, l, m, None)
}

fn check_lambda(lambda: &Partition, l: usize) -> Result<()> {
    Partition::new(lambda.parts().to_vec(), l).map(|_| ())
}

/// `θ_λ` built from the Schur-type function of the given kind.
/// Kind D is only defined for m = 2 and uses [`theta_d`].
pub fn theta(kind: Kind, lambda: &Partition, l: usize, m: u32) -> Result<DiffOperator> {
    check_lambda(lambda, l)?;
    if lambda.len() != m as usize {
        return Err(Error::InvalidPartition { partition: lambda.parts().to_vec(), l, m: m as usize });
    }
    match kind {
        Kind::D if m == 2 => theta_d(lambda, l),
        Kind::D => Err(Error::InvalidRange("type D operators are defined for m = 2 only".into())),
        _ => theta_from_symmetric(&schur(kind, lambda, m as usize)?, l, m),
    }
}

fn product_of_vars(l: usize, e: i32) -> LaurentPolynomial {
    LaurentPolynomial::term(l, Monomial::from_exponents(&vec![e; l]).expect("bounded"), Rational::one())
}

/// The partitions of `Λ(ℓ, 2)` split by whether `λ_2 ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaSplit {
    /// `λ_2 ≥ 1`.
    pub upper: Vec<Partition>,
    /// `λ_2 = 0`, including `(0, 0)`.
    pub lower: Vec<Partition>,
    pub zero: Partition,
}

pub fn lambda_split(l: usize) -> Result<LambdaSplit> {
    let all = enumerate_lambda(l, 2)?;
    let (upper, lower) = all.into_iter().partition(|p| p.parts()[1] >= 1);
    Ok(LambdaSplit { upper, lower, zero: Partition::new(vec![0, 0], l)? })
}

/// `θ^D_λ` for m = 2: the plain operator when `λ_2 ≥ 1`, otherwise scaled
/// by `x_1⋯x_ℓ` (or its square for `λ = (0,0)`) to clear denominators.
pub fn theta_d(lambda: &Partition, l: usize) -> Result<DiffOperator> {
    check_lambda(lambda, l)?;
    if lambda.len() != 2 {
        return Err(Error::InvalidPartition { partition: lambda.parts().to_vec(), l, m: 2 });
    }
    let f = schur(Kind::D, lambda, 2)?;
    let pre = match lambda.parts() {
        [_, b] if *b >= 1 => None,
        [0, 0] => Some(product_of_vars(l, 2)),
        _ => Some(product_of_vars(l, 1)),
    };
    theta_with_prefactor(&f, l, 2, pre.as_ref())
}

/// `η^D_k = (h^D_k/(2x_k))∂_k² - (-1)^{ℓ-1}(1/x_k)θ^D_{(0,0)}` (`k` is 1-based).
pub fn eta_d(k: usize, l: usize) -> Result<DiffOperator> {
    let sign = if l % 2 == 1 { 1 } else { -1 };
    eta_d_with_sign(k, l, sign)
}

/// `η^D_k` with the sign `(-1)^{ℓ-1}` replaced by `sign`. The division by
/// `x_k` is exact only for the correct sign.
pub(crate) fn eta_d_with_sign(k: usize, l: usize, sign: i64) -> Result<DiffOperator> {
    check_k(k, l)?;
    let hk = h(Kind::D, k, l)?.scale(&Rational::new(1, 2)?);
    let lead = DiffOperator::single(MultiIndex::pure(l, k - 1, 2), hk)?;
    let theta0 = theta_d(&Partition::new(vec![0, 0], l)?, l)?;
    let numerator = lead.checked_sub(&theta0.scale(&Rational::from_int(sign)))?;
    numerator.exact_divide(&Polynomial::var(l, k - 1))
}

/// Operators of a basis candidate together with their certificate.
#[derive(Clone, Debug, Serialize)]
pub struct BasisSet {
    pub kind: Kind,
    pub l: usize,
    pub m: u32,
    pub etas: Vec<DiffOperator>,
    /// `θ_λ` for λ in descending order.
    pub thetas: Vec<(Partition, DiffOperator)>,
    pub certificate: Option<Certificate>,
}

impl BasisSet {
    /// `η_1, …, η_ℓ` followed by the `θ_λ`.
    pub fn operators(&self) -> Vec<DiffOperator> {
        self.etas.iter().cloned().chain(self.thetas.iter().map(|(_, t)| t.clone())).collect()
    }

    pub fn is_certified(&self) -> bool {
        self.certificate.as_ref().is_some_and(|c| c.is_basis)
    }

    pub fn c(&self) -> Option<&Rational> {
        self.certificate.as_ref().and_then(|c| c.c.as_ref())
    }

    /// Degrees of [`BasisSet::operators`], in order.
    pub fn exponents(&self) -> Result<Vec<i32>> {
        crate::diffop::exponents(&self.operators())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    pub certify: bool,
    pub method: CertifyMethod,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { certify: true, method: CertifyMethod::Auto }
    }
}

/// Builds and certifies the order-two basis for the given kind.
pub fn build_basis(kind: Kind, l: usize) -> Result<BasisSet> {
    build_basis_with(kind, l, BuildOptions::default())
}

pub fn build_basis_with(kind: Kind, l: usize, opts: BuildOptions) -> Result<BasisSet> {
    let min = if kind == Kind::D { 3 } else { 2 };
    if l < min || l > MAX_VARS {
        return Err(Error::InvalidRange(format!("type {kind} needs {min} <= l <= {MAX_VARS}, got {l}")));
    }
    if kind == Kind::D && l == 3 {
        log::warn!("type D with l = 3 coincides with type A; certification outcome is reported, not assumed");
    }
    let m = 2;
    let etas: Vec<DiffOperator> = par::map_range(l, |k| eta(kind, k + 1, l, m))
        .into_iter()
        .collect::<Result<_>>()?;
    let lambdas = enumerate_lambda(l, m as usize)?;
    let thetas = par::map(&lambdas, |lam| theta(kind, lam, l, m));
    let thetas: Vec<(Partition, DiffOperator)> = lambdas
        .into_iter()
        .zip(thetas)
        .map(|(lam, t)| t.map(|t| (lam, t)))
        .collect::<Result<_>>()?;
    let mut set = BasisSet { kind, l, m, etas, thetas, certificate: None };
    if opts.certify {
        let arr = Arrangement::build(kind, l)?;
        set.certificate = Some(saito_holm_certify_with(&set.operators(), &arr, opts.method)?);
    }
    Ok(set)
}

/// The exponent multiset predicted for the order-two basis, sorted.
///
/// For kind D the `η_k` contribute `2ℓ-3`: their coefficients are
/// degree-`(2ℓ-2)` polynomials divided by `x_k`.
pub fn predicted_exponents(kind: Kind, l: usize) -> Result<Vec<i32>> {
    let l_i = l as i32;
    let mut out: Vec<i32> = Vec::new();
    match kind {
        Kind::A => {
            out.extend(std::iter::repeat_n(l_i - 1, l));
            out.extend(enumerate_lambda(l, 2)?.iter().map(|p| p.weight() as i32));
        }
        Kind::B => {
            out.extend(std::iter::repeat_n(2 * l_i - 1, l));
            out.extend(enumerate_lambda(l, 2)?.iter().map(|p| 2 * p.weight() as i32 + 2));
        }
        Kind::D => {
            let split = lambda_split(l)?;
            out.extend(std::iter::repeat_n(2 * l_i - 3, l));
            out.extend(split.upper.iter().map(|p| 2 * p.weight() as i32 - 2));
            for p in &split.lower {
                let a = p.parts()[0] as i32;
                out.push(if a == 0 { 2 * l_i - 2 } else { 2 * a - 2 + l_i });
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, l: usize) -> Polynomial {
        Polynomial::parse(s, l).unwrap()
    }

    fn half() -> Rational {
        Rational::new(1, 2).unwrap()
    }

    fn part(v: &[u32], l: usize) -> Partition {
        Partition::new(v.to_vec(), l).unwrap()
    }

    #[test]
    fn eta_examples() {
        let e = eta(Kind::A, 1, 3, 2).unwrap();
        let expected = (&p("x1 - x2", 3) * &p("x1 - x3", 3)).scale(&half());
        assert_eq!(e.coefficient(&MultiIndex::pure(3, 0, 2)), expected);
        assert_eq!(e.len(), 1);
        let b = eta(Kind::B, 1, 2, 2).unwrap();
        assert_eq!(b.coefficient(&MultiIndex::pure(2, 0, 2)), p("1/2*x1^3 - 1/2*x1*x2^2", 2));
        let a2 = eta(Kind::A, 2, 2, 2).unwrap();
        assert_eq!(a2.coefficient(&MultiIndex::pure(2, 1, 2)), p("1/2*x2 - 1/2*x1", 2));
        assert!(eta(Kind::A, 0, 3, 2).is_err());
        assert!(eta(Kind::A, 4, 3, 2).is_err());
    }

    #[test]
    fn theta_from_constant() {
        let op = theta_from_symmetric(&LaurentPolynomial::one(2), 3, 2).unwrap();
        assert_eq!(op.len(), 6);
        assert_eq!(op.coefficient(&MultiIndex::new(vec![2, 0, 0])), Polynomial::constant(3, half()));
        assert_eq!(op.coefficient(&MultiIndex::new(vec![0, 1, 1])), Polynomial::one(3));
        let f = LaurentPolynomial::parse("t1*t2", 2).unwrap();
        let op = theta_from_symmetric(&f, 2, 2).unwrap();
        assert_eq!(op.coefficient(&MultiIndex::new(vec![2, 0])), p("1/2*x1^2", 2));
        assert_eq!(op.coefficient(&MultiIndex::new(vec![1, 1])), p("x1*x2", 2));
        let asym = LaurentPolynomial::parse("t1^2*t2", 2).unwrap();
        assert_eq!(theta_from_symmetric(&asym, 2, 2), Err(Error::NotSymmetric));
    }

    #[test]
    fn theta_b_small() {
        let op = theta(Kind::B, &part(&[0, 0], 2), 2, 2).unwrap();
        assert_eq!(op.coefficient(&MultiIndex::new(vec![1, 1])), p("x1*x2", 2));
    }

    #[test]
    fn theta_d_cases() {
        let l = 4;
        let op = theta_d(&part(&[1, 0], l), l).unwrap();
        // (x1x2x3x4)(x_i² + x_j²)/(x_i x_j) for the mixed derivatives
        let c = op.coefficient(&MultiIndex::new(vec![1, 1, 0, 0]));
        assert_eq!(c, p("x1^2*x3*x4 + x2^2*x3*x4", l));
        let upper = theta_d(&part(&[2, 1], l), l).unwrap();
        // λ - (1,1) = (1,0)
        let s_b = schur(Kind::B, &Partition::unbounded(vec![1, 0]).unwrap(), 2).unwrap();
        assert_eq!(schur(Kind::D, &part(&[2, 1], l), 2).unwrap(), s_b);
        assert_eq!(upper.degree().unwrap(), 2 * 3 - 2);
    }

    #[test]
    fn eta_d_sign_is_forced() {
        for l in 3..=5 {
            let right = if l % 2 == 1 { 1 } else { -1 };
            assert!(eta_d_with_sign(1, l, right).is_ok());
            assert_eq!(eta_d_with_sign(1, l, -right), Err(Error::NotDivisible));
        }
    }

    #[test]
    fn predicted_small() {
        assert_eq!(predicted_exponents(Kind::A, 3).unwrap(), vec![0, 1, 2, 2, 2, 2]);
        assert_eq!(predicted_exponents(Kind::B, 3).unwrap(), vec![2, 4, 5, 5, 5, 6]);
        assert_eq!(predicted_exponents(Kind::D, 4).unwrap(), vec![2, 4, 4, 5, 5, 5, 5, 6, 6, 6]);
    }
}
