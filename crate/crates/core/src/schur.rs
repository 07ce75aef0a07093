//! Partitions in the box `ℓ-m ≥ λ_1 ≥ … ≥ λ_m ≥ 0`, Schur-type functions of
//! kinds A, B, D, and the determinant identities for the matrices
//! `(s_λ(x_μ))`.

use std::fmt;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::diffop::MultiIndex;
use crate::error::{Error, Result};
use crate::matrix::{laurent_determinant, PolyMatrix, RowColSelector};
use crate::par;
use crate::poly::{LaurentPolynomial, Monomial, Polynomial};
use crate::rational::{binomial_signed, Rational};
use crate::Kind;

/// A weakly decreasing sequence of `m` nonnegative integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Validates `ℓ-m ≥ λ_1 ≥ … ≥ λ_m ≥ 0` with `m = parts.len()`.
    pub fn new(parts: Vec<u32>, l: usize) -> Result<Self> {
        let m = parts.len();
        let invalid = || Error::InvalidPartition { partition: parts.clone(), l, m };
        if m == 0 || m > l {
            return Err(invalid());
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts[0] as usize > l - m {
            return Err(invalid());
        }
        Ok(Partition(parts))
    }

    /// Accepts any weakly decreasing sequence, without a box bound.
    pub fn unbounded(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() || parts.windows(2).any(|w| w[0] < w[1]) {
            let m = parts.len();
            return Err(Error::InvalidPartition { partition: parts, l: 0, m });
        }
        Ok(Partition(parts))
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

    /// `|λ| = λ_1 + … + λ_m`.
    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Bijective image in the selector set: `μ_i = ℓ-m+i-λ_i`.
    pub fn to_selector(&self, l: usize) -> RowColSelector {
        let m = self.0.len();
        let idx = (1..=m).map(|i| l - m + i - self.0[i - 1] as usize).collect();
        RowColSelector::new(idx, l).expect("partition lies in the box")
    }

    /// Inverse of [`Partition::to_selector`].
    pub fn from_selector(mu: &RowColSelector, l: usize) -> Partition {
        let m = mu.len();
        Partition(mu.indices().iter().enumerate().map(|(i, &u)| (l - m + i + 1 - u) as u32).collect())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

fn check_lm(l: usize, m: usize) -> Result<()> {
    if m == 0 || l < m {
        return Err(Error::InvalidRange(format!("need l >= m >= 1, got l = {l}, m = {m}")));
    }
    Ok(())
}

/// All partitions of the box in descending lexicographic order.
pub fn enumerate_lambda(l: usize, m: usize) -> Result<Vec<Partition>> {
    check_lm(l, m)?;
    fn rec(prefix: &mut Vec<u32>, max: u32, m: usize, out: &mut Vec<Partition>) {
        if prefix.len() == m {
            out.push(Partition(prefix.clone()));
            return;
        }
        for v in (0..=max).rev() {
            prefix.push(v);
            rec(prefix, v, m, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(m), (l - m) as u32, m, &mut out);
    Ok(out)
}

/// All selectors `1 ≤ μ_1 < … < μ_m ≤ ℓ` in increasing lexicographic order.
pub fn enumerate_z(l: usize, m: usize) -> Result<Vec<RowColSelector>> {
    check_lm(l, m)?;
    let z = RowColSelector::all(l, m);
    debug_assert!(z.windows(2).all(|w| Partition::from_selector(&w[0], l) > Partition::from_selector(&w[1], l)));
    Ok(z)
}

fn vars(m: usize) -> Vec<Polynomial> {
    (0..m).map(|i| Polynomial::var(m, i)).collect()
}

/// `det(t_i^{e_j})` for the given column exponents.
fn alternant(m: usize, exps: &[i32]) -> Result<LaurentPolynomial> {
    let rows: Vec<Vec<LaurentPolynomial>> = (0..m)
        .map(|i| {
            exps.iter()
                .map(|&e| LaurentPolynomial::term(m, Monomial::var(i, e), Rational::one()))
                .collect()
        })
        .collect();
    laurent_determinant(&rows)
}

/// Exact quotient of a Laurent polynomial by a polynomial.
fn laurent_divide(num: &LaurentPolynomial, den: &Polynomial) -> Result<LaurentPolynomial> {
    let mut shift = num.min_exponents();
    for v in 0..num.nvars() {
        if shift.exp(v) > 0 {
            shift = shift.mul(&Monomial::var(v, -shift.exp(v)));
        }
    }
    let lifted = num.mul_term(&shift.inverse(), &Rational::one()).into_polynomial()?;
    Ok(lifted.exact_divide(den)?.as_laurent().mul_term(&shift, &Rational::one()))
}

fn check_partition(lambda: &Partition, m: usize) -> Result<()> {
    if lambda.len() != m {
        return Err(Error::InvalidPartition { partition: lambda.0.clone(), l: 0, m });
    }
    Ok(())
}

/// The Schur polynomial as a quotient of alternants.
pub fn schur_a(lambda: &Partition, m: usize) -> Result<Polynomial> {
    check_partition(lambda, m)?;
    let num: Vec<i32> = (0..m).map(|j| (lambda.0[j] as usize + m - 1 - j) as i32).collect();
    let den: Vec<i32> = (0..m).map(|j| (m - 1 - j) as i32).collect();
    let num = alternant(m, &num)?.into_polynomial()?;
    let den = alternant(m, &den)?.into_polynomial()?;
    num.exact_divide(&den)
}

/// `s^A_λ`, `s^B_λ = t_1⋯t_m·s^A_λ(t²)` or `s^D_λ = (t_1⋯t_m)^{-1}·s^A_λ(t²)`.
pub fn schur(kind: Kind, lambda: &Partition, m: usize) -> Result<LaurentPolynomial> {
    let a = schur_a(lambda, m)?;
    if kind == Kind::A {
        return Ok(a.into_laurent());
    }
    let squares: Vec<Polynomial> = vars(m).iter().map(|t| t.pow(2)).collect();
    let sq = a.substitute(&squares)?;
    let e = if kind == Kind::B { 1 } else { -1 };
    let prod = Monomial::from_exponents(&vec![e; m])?;
    Ok(sq.as_laurent().mul_term(&prod, &Rational::one()))
}

/// The defining alternant ratio, computed directly without the factored
/// forms. Kind D divides in the Laurent ring.
pub fn schur_ratio(kind: Kind, lambda: &Partition, m: usize) -> Result<LaurentPolynomial> {
    check_partition(lambda, m)?;
    let (num, den): (Vec<i32>, Vec<i32>) = (0..m)
        .map(|j| {
            let a = lambda.0[j] as i32 + (m - 1 - j) as i32;
            let b = (m - 1 - j) as i32;
            match kind {
                Kind::A => (a, b),
                Kind::B => (2 * a + 1, 2 * b),
                Kind::D => (2 * a - 1, 2 * b),
            }
        })
        .unzip();
    let den = alternant(m, &den)?.into_polynomial()?;
    laurent_divide(&alternant(m, &num)?, &den)
}

/// Sum over semistandard Young tableaux of shape λ with entries in `1..=m`.
pub fn schur_ssyt_oracle(lambda: &Partition, m: usize) -> Result<Polynomial> {
    check_partition(lambda, m)?;
    let shape: Vec<usize> = lambda.0.iter().map(|&p| p as usize).filter(|&p| p > 0).collect();
    let mut grid: Vec<Vec<usize>> = shape.iter().map(|&len| vec![0; len]).collect();
    let mut acc: FxHashMap<Vec<i32>, i64> = FxHashMap::default();

    fn fill(
        grid: &mut Vec<Vec<usize>>,
        shape: &[usize],
        r: usize,
        c: usize,
        m: usize,
        acc: &mut FxHashMap<Vec<i32>, i64>,
    ) {
        if r == shape.len() {
            let mut content = vec![0i32; m];
            for row in grid.iter() {
                for &v in row {
                    content[v - 1] += 1;
                }
            }
            *acc.entry(content).or_insert(0) += 1;
            return;
        }
        let (nr, nc) = if c + 1 == shape[r] { (r + 1, 0) } else { (r, c + 1) };
        let lo_left = if c > 0 { grid[r][c - 1] } else { 1 };
        let lo_up = if r > 0 { grid[r - 1][c] + 1 } else { 1 };
        for v in lo_left.max(lo_up)..=m {
            grid[r][c] = v;
            fill(grid, shape, nr, nc, m, acc);
        }
    }

    if shape.is_empty() {
        return Ok(Polynomial::one(m));
    }
    if shape.len() > m {
        return Ok(Polynomial::zero(m));
    }
    fill(&mut grid, &shape, 0, 0, m, &mut acc);
    Polynomial::from_terms(m, acc.into_iter().map(|(e, c)| (e, Rational::from_int(c))))
}

/// The substitution vector with `α_i` copies of `x_i` (or `x_i²`).
pub fn x_alpha(alpha: &MultiIndex, m: usize, squared: bool) -> Result<Vec<Polynomial>> {
    if alpha.order() as usize != m {
        return Err(Error::InvalidMultiIndex(format!("|{alpha}| != {m}")));
    }
    let l = alpha.len();
    let e = if squared { 2 } else { 1 };
    Ok(alpha
        .parts()
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| std::iter::repeat_n(Polynomial::var(l, i).pow(e), a as usize))
        .collect())
}

/// `f(x_{μ_1}, …, x_{μ_m})` in the ℓ-variable ring.
pub fn substitute_selector(f: &LaurentPolynomial, mu: &RowColSelector, l: usize) -> Result<LaurentPolynomial> {
    let vals: Vec<LaurentPolynomial> = mu.indices().iter().map(|&i| LaurentPolynomial::var(l, i - 1)).collect();
    f.substitute(&vals)
}

/// Outcome of comparing `det(s_λ(x_μ))` against its closed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchurIdentityReport {
    pub kind: Kind,
    pub l: usize,
    pub m: usize,
    pub lhs: LaurentPolynomial,
    pub rhs: LaurentPolynomial,
    /// `1` or `-1` when `lhs = sign·rhs`, `0` when neither holds.
    pub sign: i32,
}

impl SchurIdentityReport {
    pub fn holds(&self) -> bool {
        self.sign != 0
    }
}

/// The closed-form right side for the matrix `(s_λ(x_μ))`.
pub fn schur_identity_rhs(kind: Kind, l: usize, m: usize) -> Result<LaurentPolynomial> {
    check_lm(l, m)?;
    let e_prod = binomial_signed(l as i64 - 2, m as i64 - 1) as u32;
    let e_mono = binomial_signed(l as i64 - 1, m as i64 - 1) as i32;
    let x = |i| Polynomial::var(l, i);
    let mut diff = Polynomial::one(l);
    for i in 0..l {
        for j in i + 1..l {
            let f = match kind {
                Kind::A => &x(i) - &x(j),
                _ => &x(i).pow(2) - &x(j).pow(2),
            };
            diff = &diff * &f;
        }
    }
    let base = diff.pow(e_prod).into_laurent();
    let mono_exp = match kind {
        Kind::A => 0,
        Kind::B => e_mono,
        Kind::D => -e_mono,
    };
    let mono = Monomial::from_exponents(&vec![mono_exp; l])?;
    Ok(base.mul_term(&mono, &Rational::one()))
}

/// The matrix `(s_λ(x_μ))`, rows λ descending, columns μ increasing.
pub fn schur_matrix(kind: Kind, l: usize, m: usize) -> Result<Vec<Vec<LaurentPolynomial>>> {
    let lambdas = enumerate_lambda(l, m)?;
    let z = enumerate_z(l, m)?;
    let funcs = par::map(&lambdas, |lam| schur(kind, lam, m));
    let funcs: Vec<LaurentPolynomial> = funcs.into_iter().collect::<Result<_>>()?;
    funcs
        .iter()
        .map(|f| z.iter().map(|mu| substitute_selector(f, mu, l)).collect())
        .collect()
}

pub fn schur_identity_report(kind: Kind, l: usize, m: usize) -> Result<SchurIdentityReport> {
    let rows = schur_matrix(kind, l, m)?;
    let lhs = laurent_determinant(&rows)?;
    let rhs = schur_identity_rhs(kind, l, m)?;
    let sign = if lhs == rhs {
        1
    } else if lhs == -&rhs {
        -1
    } else {
        0
    };
    Ok(SchurIdentityReport { kind, l, m, lhs, rhs, sign })
}

/// True when `det(s_λ(x_μ))` equals the closed form up to a global sign.
pub fn verify_schur_det_identity(kind: Kind, l: usize, m: usize) -> Result<bool> {
    Ok(schur_identity_report(kind, l, m)?.holds())
}

/// Polynomial matrix for kinds A and B (whose entries are polynomials).
pub fn schur_poly_matrix(kind: Kind, l: usize, m: usize) -> Result<PolyMatrix> {
    let rows = schur_matrix(kind, l, m)?;
    PolyMatrix::from_rows(
        rows.into_iter()
            .map(|r| r.into_iter().map(LaurentPolynomial::into_polynomial).collect::<Result<_>>())
            .collect::<Result<_>>()?,
    )
}
