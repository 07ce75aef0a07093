//! Signed-permutation actions of the Weyl groups of types A, B and D on
//! polynomials and differential operators.

use std::fmt;

use serde::Serialize;

use crate::arrangement::Arrangement;
use crate::bases::{eta, BasisSet};
use crate::diffop::{DiffOperator, MultiIndex};
use crate::error::{Error, Result};
use crate::matrix::rational_nullspace;
use crate::par;
use crate::poly::{LaurentPolynomial, Polynomial};
use crate::rational::Rational;
use crate::Kind;

/// The automorphism `x_k ↦ s_k·x_{π(k)}`, stored 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn identity(l: usize) -> Self {
        SignedPermutation { perm: (0..l).collect(), signs: vec![1; l] }
    }

    /// `perm` holds 0-based images; `signs` are ±1.
    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        let l = perm.len();
        if signs.len() != l {
            return Err(Error::DimensionMismatch { left: l, right: signs.len() });
        }
        let mut seen = vec![false; l];
        for &p in &perm {
            if p >= l || seen[p] {
                return Err(Error::Parse(format!("{perm:?} is not a permutation")));
            }
            seen[p] = true;
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Parse("signs must be +1 or -1".into()));
        }
        Ok(SignedPermutation { perm, signs })
    }

    /// The transposition `σ_{i,j}` (1-based).
    pub fn transposition(l: usize, i: usize, j: usize) -> Result<Self> {
        if i == 0 || j == 0 || i > l || j > l || i == j {
            return Err(Error::InvalidRange(format!("transposition ({i} {j}) in dimension {l}")));
        }
        let mut w = Self::identity(l);
        w.perm.swap(i - 1, j - 1);
        Ok(w)
    }

    /// The sign change `τ_i: x_i ↦ -x_i` (1-based).
    pub fn tau(l: usize, i: usize) -> Result<Self> {
        if i == 0 || i > l {
            return Err(Error::InvalidRange(format!("sign change {i} in dimension {l}")));
        }
        let mut w = Self::identity(l);
        w.signs[i - 1] = -1;
        Ok(w)
    }

    pub fn l(&self) -> usize {
        self.perm.len()
    }

    /// 0-based image of coordinate `k`.
    pub fn image(&self, k: usize) -> usize {
        self.perm[k]
    }

    pub fn sign(&self, k: usize) -> i8 {
        self.signs[k]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.l() != other.l() {
            return Err(Error::DimensionMismatch { left: self.l(), right: other.l() });
        }
        let perm = other.perm.iter().map(|&p| self.perm[p]).collect();
        let signs = (0..self.l()).map(|k| other.signs[k] * self.signs[other.perm[k]]).collect();
        Ok(SignedPermutation { perm, signs })
    }

    pub fn inverse(&self) -> Self {
        let l = self.l();
        let mut perm = vec![0; l];
        let mut signs = vec![1; l];
        for k in 0..l {
            perm[self.perm[k]] = k;
            signs[self.perm[k]] = self.signs[k];
        }
        SignedPermutation { perm, signs }
    }

    /// Membership in `W^A` (no sign changes), `W^B` (any) or `W^D` (even
    /// number of sign changes).
    pub fn belongs_to(&self, kind: Kind) -> bool {
        match kind {
            Kind::A => self.signs.iter().all(|&s| s == 1),
            Kind::B => true,
            Kind::D => self.signs.iter().filter(|&&s| s == -1).count() % 2 == 0,
        }
    }

    /// Parses products such as `s12`, `s1,2`, `t4`, `s34*t3*t4` or `e`.
    /// The rightmost factor acts first.
    pub fn parse(word: &str, l: usize) -> Result<Self> {
        let mut acc = Self::identity(l);
        for factor in word.split('*') {
            let f = factor.trim();
            let g = parse_letter(f, l)?;
            acc = acc.compose(&g)?;
        }
        Ok(acc)
    }

    /// Standard action on `V`: `e_k ↦ s_k·e_{π(k)}`, as an ℓ×ℓ matrix.
    pub fn matrix(&self) -> Vec<Vec<i32>> {
        let l = self.l();
        let mut m = vec![vec![0; l]; l];
        for k in 0..l {
            m[self.perm[k]][k] = self.signs[k] as i32;
        }
        m
    }
}

fn parse_letter(f: &str, l: usize) -> Result<SignedPermutation> {
    let bad = || Error::Parse(format!("cannot parse group element `{f}`"));
    if f == "e" || f == "1" {
        return Ok(SignedPermutation::identity(l));
    }
    let (head, rest) = f.split_at(f.char_indices().nth(1).map_or(f.len(), |(i, _)| i));
    match head {
        "s" => {
            let (i, j) = match rest.split_once(',') {
                Some((a, b)) => (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?),
                None if rest.len() == 2 && rest.chars().all(|c| c.is_ascii_digit()) => {
                    (rest[..1].parse().map_err(|_| bad())?, rest[1..].parse().map_err(|_| bad())?)
                }
                None => return Err(bad()),
            };
            SignedPermutation::transposition(l, i, j)
        }
        "t" => SignedPermutation::tau(l, rest.parse().map_err(|_| bad())?),
        _ => Err(bad()),
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.l())
            .map(|k| {
                let s = if self.signs[k] < 0 { "-" } else { "" };
                format!("x{} -> {s}x{}", k + 1, self.perm[k] + 1)
            })
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

fn transposition_name(i: usize, j: usize) -> String {
    if i < 10 && j < 10 {
        format!("s{i}{j}")
    } else {
        format!("s{i},{j}")
    }
}

/// Named generators: adjacent transpositions, plus `τ_ℓ` for type B or
/// `σ_{ℓ-1,ℓ}τ_{ℓ-1}τ_ℓ` for type D.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub kind: Kind,
    pub l: usize,
    pub generators: Vec<(String, SignedPermutation)>,
}

impl GeneratorSet {
    pub fn new(kind: Kind, l: usize) -> Result<Self> {
        if l < 2 {
            return Err(Error::InvalidRange(format!("l = {l} must be at least 2")));
        }
        let mut generators = Vec::new();
        for i in 1..l {
            generators.push((transposition_name(i, i + 1), SignedPermutation::transposition(l, i, i + 1)?));
        }
        match kind {
            Kind::A => {}
            Kind::B => generators.push((format!("t{l}"), SignedPermutation::tau(l, l)?)),
            Kind::D => {
                let name = format!("{}*t{}*t{l}", transposition_name(l - 1, l), l - 1);
                let w = SignedPermutation::parse(&name, l)?;
                generators.push((name, w));
            }
        }
        Ok(GeneratorSet { kind, l, generators })
    }
}

/// `w·f`: substitute `x_k ↦ s_k·x_{π(k)}`.
pub fn act_laurent(w: &SignedPermutation, f: &LaurentPolynomial) -> Result<LaurentPolynomial> {
    let l = w.l();
    if f.nvars() != l {
        return Err(Error::DimensionMismatch { left: l, right: f.nvars() });
    }
    let terms = f.terms().iter().map(|(m, c)| {
        let mut e = vec![0i32; l];
        let mut negative = false;
        for k in 0..l {
            let ek = m.exp(k);
            e[w.perm[k]] = ek;
            if w.signs[k] < 0 && ek % 2 != 0 {
                negative = !negative;
            }
        }
        (e, if negative { -c } else { c.clone() })
    });
    LaurentPolynomial::from_terms(l, terms)
}

pub fn act_poly(w: &SignedPermutation, f: &Polynomial) -> Result<Polynomial> {
    act_laurent(w, f.as_laurent())?.into_polynomial()
}

/// `w·θ = w∘θ∘w^{-1}`: coefficients transform as polynomials and
/// `∂_k ↦ s_k·∂_{π(k)}`.
pub fn act_op(w: &SignedPermutation, theta: &DiffOperator) -> Result<DiffOperator> {
    let l = w.l();
    if theta.l() != l {
        return Err(Error::DimensionMismatch { left: l, right: theta.l() });
    }
    let mut out = DiffOperator::zero(l, theta.order());
    for (alpha, c) in theta.terms() {
        let mut beta = vec![0u32; l];
        let mut negative = false;
        for (k, &a) in alpha.parts().iter().enumerate() {
            beta[w.perm[k]] = a;
            if w.signs[k] < 0 && a % 2 == 1 {
                negative = !negative;
            }
        }
        let mut image = act_poly(w, c)?;
        if negative {
            image = -&image;
        }
        out.add_term(MultiIndex::new(beta), image)?;
    }
    Ok(out)
}

/// Checks `(w·θ)(f) = w·(θ(w^{-1}·f))` on each sample.
pub fn check_defining_property(w: &SignedPermutation, theta: &DiffOperator, samples: &[Polynomial]) -> Result<bool> {
    let moved = act_op(w, theta)?;
    let inv = w.inverse();
    for f in samples {
        let lhs = moved.apply(f)?;
        let rhs = act_poly(w, &theta.apply(&act_poly(&inv, f)?)?)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Fixed by every generator.
pub fn is_invariant(theta: &DiffOperator, gens: &GeneratorSet) -> Result<bool> {
    for (_, g) in &gens.generators {
        if act_op(g, theta)? != *theta {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Some((j, ±1))` when `img = ±ops[j]`.
fn signed_match(img: &DiffOperator, ops: &[DiffOperator]) -> Option<(usize, i32)> {
    let neg = img.scale(&-Rational::one());
    ops.iter().enumerate().find_map(|(j, op)| {
        if op == img {
            Some((j, 1))
        } else if *op == neg {
            Some((j, -1))
        } else {
            None
        }
    })
}

/// Matrix of `g` on the span of `ops`, where every image must be a signed
/// element of `ops`. Column `k` holds the coordinates of `g·ops[k]`.
fn signed_action_matrix(name: &str, g: &SignedPermutation, ops: &[DiffOperator]) -> Result<Vec<Vec<i32>>> {
    let n = ops.len();
    let images = par::map(ops, |op| act_op(g, op));
    let mut m = vec![vec![0; n]; n];
    for (k, img) in images.into_iter().enumerate() {
        let (j, s) = signed_match(&img?, ops).ok_or(Error::NotClosed { generator: name.to_string(), index: k + 1 })?;
        m[j][k] = s;
    }
    Ok(m)
}

/// Action of each generator on `η_1, …, η_ℓ` (order two), checked against
/// the standard action on `e_1, …, e_ℓ`.
pub fn eta_action_matrices(kind: Kind, l: usize) -> Result<Vec<(String, Vec<Vec<i32>>)>> {
    let gens = GeneratorSet::new(kind, l)?;
    let etas: Vec<DiffOperator> = (1..=l).map(|k| eta(kind, k, l, 2)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for (name, g) in &gens.generators {
        let m = signed_action_matrix(name, g, &etas)?;
        if m != g.matrix() {
            return Err(Error::RepresentationMismatch { generator: name.clone() });
        }
        out.push((name.clone(), m));
    }
    Ok(out)
}

/// Action of each generator on the whole basis, η's first.
pub fn basis_action_matrices(set: &BasisSet) -> Result<Vec<(String, Vec<Vec<i32>>)>> {
    let gens = GeneratorSet::new(set.kind, set.l)?;
    let ops = set.operators();
    gens.generators
        .iter()
        .map(|(name, g)| Ok((name.clone(), signed_action_matrix(name, g, &ops)?)))
        .collect()
}

/// Whether `g·θ` stays in the module for every generator and basis element.
pub fn closed_under_generators(set: &BasisSet, arr: &Arrangement) -> Result<bool> {
    let gens = GeneratorSet::new(set.kind, set.l)?;
    let ops = set.operators();
    for (_, g) in &gens.generators {
        let ok = par::map(&ops, |op| act_op(g, op).and_then(|img| img.member_of(arr)));
        for r in ok {
            if !r? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Basis of `{a : Σ a_k η_k is fixed by every generator}`, via the
/// nullspace of the stacked `M_g - I`.
pub fn invariant_eta_combinations(kind: Kind, l: usize) -> Result<Vec<Vec<Rational>>> {
    let mats = eta_action_matrices(kind, l)?;
    let mut rows = Vec::new();
    for (_, m) in &mats {
        for (i, row) in m.iter().enumerate() {
            rows.push(
                row.iter()
                    .enumerate()
                    .map(|(j, &v)| Rational::from_int(v as i64 - i64::from(i == j)))
                    .collect(),
            );
        }
    }
    Ok(rational_nullspace(&rows, l))
}

/// Fixed sample polynomials of degree at least two.
pub fn sample_polynomials(l: usize) -> Vec<Polynomial> {
    let x = |i: usize| Polynomial::var(l, i.min(l - 1));
    let c = |v: i64| Polynomial::constant(l, Rational::from_int(v));
    vec![
        x(0).pow(3),
        &x(0).pow(2) * &x(1),
        &(&x(0) * &x(l - 1).pow(2)) - &(&c(3) * &x(1)),
        &(&x(0) - &x(l - 1)).pow(3) + &x(2),
        &(&x(1) + &c(2)).pow(2) * &(&x(l - 1) - &x(0)),
    ]
}

/// Summary of the invariance checks for one arrangement.
#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    pub kind: Kind,
    pub l: usize,
    /// Every θ is fixed by every generator.
    pub thetas_invariant: bool,
    /// Each generator acts on the η's as on the standard basis of V.
    pub eta_matches_standard: bool,
    pub eta_matrices: Vec<(String, Vec<Vec<i32>>)>,
    /// The basis matrices are block diagonal: η block plus identity.
    pub block_decomposition: bool,
    pub closed: bool,
    pub defining_property: bool,
    pub invariant_dimension: usize,
    pub invariant_basis: Vec<Vec<Rational>>,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        let expected_dim = if self.kind == Kind::A { 1 } else { 0 };
        self.thetas_invariant
            && self.eta_matches_standard
            && self.block_decomposition
            && self.closed
            && self.defining_property
            && self.invariant_dimension == expected_dim
    }
}

/// Runs all invariance and representation checks on an uncertified basis.
pub fn invariance_suite(set: &BasisSet) -> Result<InvarianceReport> {
    let (kind, l) = (set.kind, set.l);
    let gens = GeneratorSet::new(kind, l)?;
    let arr = Arrangement::build(kind, l)?;
    let mut thetas_invariant = true;
    for (_, t) in &set.thetas {
        thetas_invariant &= is_invariant(t, &gens)?;
    }
    let (eta_matrices, eta_matches_standard) = match eta_action_matrices(kind, l) {
        Ok(m) => (m, true),
        Err(Error::NotClosed { .. }) | Err(Error::RepresentationMismatch { .. }) => (Vec::new(), false),
        Err(e) => return Err(e),
    };
    let n = set.etas.len();
    let block_decomposition = match basis_action_matrices(set) {
        Ok(mats) => mats.iter().all(|(_, m)| {
            m.iter().enumerate().all(|(i, row)| {
                row.iter().enumerate().all(|(j, &v)| {
                    if i < n && j < n {
                        true
                    } else if i == j {
                        v == 1
                    } else {
                        v == 0
                    }
                })
            })
        }) && mats
            .iter()
            .zip(&gens.generators)
            .all(|((_, m), (_, g))| {
                let std = g.matrix();
                (0..n).all(|i| (0..n).all(|j| m[i][j] == std[i][j]))
            }),
        Err(Error::NotClosed { .. }) => false,
        Err(e) => return Err(e),
    };
    let closed = closed_under_generators(set, &arr)?;
    let samples = sample_polynomials(l);
    let mut defining_property = true;
    for (_, g) in &gens.generators {
        for op in set.operators() {
            defining_property &= check_defining_property(g, &op, &samples)?;
        }
    }
    let invariant_basis = if eta_matches_standard { invariant_eta_combinations(kind, l)? } else { Vec::new() };
    Ok(InvarianceReport {
        kind,
        l,
        thetas_invariant,
        eta_matches_standard,
        eta_matrices,
        block_decomposition,
        closed,
        defining_property,
        invariant_dimension: invariant_basis.len(),
        invariant_basis,
    })
}
