use coxops::arrangement::{t_m_exponent, Arrangement};
use coxops::bases::{
    build_basis, build_basis_with, eta, h, lambda_split, predicted_exponents, theta, theta_d, theta_from_symmetric,
    BuildOptions,
};
use coxops::diffop::{DiffOperator, MultiIndex};
use coxops::schur::{enumerate_lambda, Partition};
use coxops::{Error, Kind, LaurentPolynomial, Polynomial, Rational};

fn uncertified(kind: Kind, l: usize) -> coxops::bases::BasisSet {
    build_basis_with(kind, l, BuildOptions { certify: false, ..Default::default() }).unwrap()
}

/// Exponent multisets written out from the basis theorems, except that the
/// type-D `η_k` get `2ℓ-3` (a quotient of degree-`(2ℓ-2)` polynomials by `x_k`).
fn theorem_exponents(kind: Kind, l: usize) -> Vec<i32> {
    let li = l as i32;
    let mut v = Vec::new();
    match kind {
        Kind::A => {
            v.extend(std::iter::repeat_n(li - 1, l));
            for a in 0..=li - 2 {
                for b in 0..=a {
                    v.push(a + b);
                }
            }
        }
        Kind::B => {
            v.extend(std::iter::repeat_n(2 * li - 1, l));
            for a in 0..=li - 2 {
                for b in 0..=a {
                    v.push(2 * (a + b) + 2);
                }
            }
        }
        Kind::D => {
            v.extend(std::iter::repeat_n(2 * li - 3, l));
            for a in 1..=li - 2 {
                for b in 1..=a {
                    v.push(2 * a + 2 * b - 2);
                }
                v.push(2 * a - 2 + li);
            }
            v.push(2 * li - 2);
        }
    }
    v.sort();
    v
}

#[test]
fn h_values() {
    let p = |s: &str| Polynomial::parse(s, 3).unwrap();
    assert_eq!(h(Kind::A, 1, 3).unwrap(), &p("x1 - x2") * &p("x1 - x3"));
    assert_eq!(h(Kind::B, 2, 3).unwrap(), &(&p("x2") * &p("x2^2 - x1^2")) * &p("x2^2 - x3^2"));
    assert_eq!(h(Kind::D, 3, 3).unwrap(), &p("x3^2 - x1^2") * &p("x3^2 - x2^2"));
    assert!(h(Kind::A, 0, 3).is_err());
    assert!(h(Kind::A, 4, 3).is_err());
}

#[test]
fn symmetric_operator_examples() {
    let p = |s: &str| Polynomial::parse(s, 3).unwrap();
    let one = LaurentPolynomial::one(2);
    let t0 = theta_from_symmetric(&one, 3, 2).unwrap();
    let half = Rational::new(1, 2).unwrap();
    for a in MultiIndex::enumerate(3, 2) {
        let expect = if a.parts().contains(&2) { half.clone() } else { Rational::one() };
        assert_eq!(t0.coefficient(&a).constant_value(), Some(expect));
    }
    let sum = LaurentPolynomial::parse("x1 + x2", 2).unwrap();
    let lam = Partition::new(vec![1, 0], 3).unwrap();
    assert_eq!(theta_from_symmetric(&sum, 3, 2).unwrap(), theta(Kind::A, &lam, 3, 2).unwrap());
    assert_eq!(theta(Kind::A, &lam, 3, 2).unwrap().coefficient(&MultiIndex::new(vec![0, 1, 1])), p("x2 + x3"));
    let skew = LaurentPolynomial::parse("x1", 2).unwrap();
    assert_eq!(theta_from_symmetric(&skew, 3, 2), Err(Error::NotSymmetric));
}

// θ applied to x^α/α! substitutes the variables selected by α
#[test]
fn symmetric_operator_action() {
    for l in 3..=5 {
        for lam in enumerate_lambda(l, 2).unwrap() {
            let th = theta(Kind::B, &lam, l, 2).unwrap();
            let s = coxops::schur::schur(Kind::B, &lam, 2).unwrap();
            for a in MultiIndex::enumerate(l, 2) {
                let xa = a.scaled_monomial();
                let vals: Vec<LaurentPolynomial> = coxops::schur::x_alpha(&a, 2, false)
                    .unwrap()
                    .into_iter()
                    .map(Polynomial::into_laurent)
                    .collect();
                let expect = s.substitute(&vals).unwrap().scale(&Rational::from(a.factorial()).recip().unwrap());
                assert_eq!(th.apply(&xa).unwrap().into_laurent(), expect);
            }
        }
    }
}

#[test]
fn every_operator_is_a_member() {
    for (kind, ls) in [(Kind::A, 2..=6), (Kind::B, 2..=5), (Kind::D, 3..=5)] {
        for l in ls {
            let arr = Arrangement::build(kind, l).unwrap();
            for (i, op) in uncertified(kind, l).operators().iter().enumerate() {
                assert!(op.member_of(&arr).unwrap(), "{kind} l={l} op {i}");
            }
        }
    }
}

#[test]
fn higher_order_operators_are_members() {
    for (kind, l, m) in [(Kind::A, 3, 3), (Kind::A, 4, 3), (Kind::B, 3, 3), (Kind::B, 4, 3)] {
        let arr = Arrangement::build(kind, l).unwrap();
        for k in 1..=l {
            assert!(eta(kind, k, l, m).unwrap().member_of(&arr).unwrap());
        }
        for lam in enumerate_lambda(l, m as usize).unwrap() {
            assert!(theta(kind, &lam, l, m).unwrap().member_of(&arr).unwrap(), "{kind} {lam}");
        }
    }
}

#[test]
fn exponents_match_theorems() {
    for (kind, ls) in [(Kind::A, 2..=6), (Kind::B, 2..=5), (Kind::D, 3..=6)] {
        for l in ls {
            let mut got = uncertified(kind, l).exponents().unwrap();
            got.sort();
            let expect = theorem_exponents(kind, l);
            assert_eq!(got, expect, "{kind} l={l}");
            assert_eq!(predicted_exponents(kind, l).unwrap(), expect);
            let arr = Arrangement::build(kind, l).unwrap();
            assert_eq!(got.iter().sum::<i32>() as usize, t_m_exponent(l, 2) * arr.len(), "{kind} l={l}");
        }
    }
}

#[test]
fn type_d_split_and_prefactors() {
    let split = lambda_split(5).unwrap();
    assert_eq!(split.upper.len() + split.lower.len(), 10);
    assert!(split.upper.iter().all(|p| p.parts()[1] >= 1));
    assert!(split.lower.contains(&split.zero));
    for lam in enumerate_lambda(5, 2).unwrap() {
        let op = theta_d(&lam, 5).unwrap();
        let lowered = lam.parts()[1] >= 1;
        if lowered {
            // same operator as the type-B one built from λ − 1
            let b = Partition::unbounded(lam.parts().iter().map(|x| x - 1).collect()).unwrap();
            let sb = coxops::schur::schur(Kind::B, &b, 2).unwrap();
            assert_eq!(op, theta_from_symmetric(&sb, 5, 2).unwrap());
        }
        assert!(op.is_homogeneous());
    }
}

#[test]
fn small_cases_certify() {
    for (kind, l) in [(Kind::A, 2), (Kind::A, 3), (Kind::A, 4), (Kind::B, 2), (Kind::B, 3), (Kind::D, 3), (Kind::D, 4)] {
        let set = build_basis(kind, l).unwrap();
        assert!(set.is_certified(), "{kind} l={l}");
        assert!(!set.c().unwrap().is_zero());
        assert_eq!(set.operators().len(), l * (l + 1) / 2);
    }
}

#[test]
fn perturbed_family_fails() {
    let set = uncertified(Kind::B, 3);
    let mut ops = set.operators();
    let arr = Arrangement::build(Kind::B, 3).unwrap();
    // replace a θ by an S-multiple of another member: still a member, no longer a basis
    ops[3] = ops[4].mul_poly(&Polynomial::var(3, 0)).unwrap();
    let cert = coxops::diffop::saito_holm_certify(&ops, &arr).unwrap();
    assert!(!cert.is_basis);
}

#[test]
fn range_errors() {
    assert!(build_basis(Kind::A, 1).is_err());
    assert!(build_basis(Kind::D, 2).is_err());
    assert!(build_basis(Kind::B, 13).is_err());
    assert!(eta(Kind::D, 1, 4, 3).is_err());
    let lam = Partition::new(vec![1, 0, 0], 4).unwrap();
    assert!(theta(Kind::D, &lam, 4, 3).is_err());
    assert!(theta(Kind::A, &lam, 4, 2).is_err());
    assert_eq!(DiffOperator::zero(3, 2).len(), 0);
}
