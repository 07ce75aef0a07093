use coxops::arrangement::Arrangement;
use coxops::bases::{build_basis_with, BuildOptions};
use coxops::diffop::{DiffOperator, MultiIndex};
use coxops::group::{
    act_op, act_poly, check_defining_property, eta_action_matrices, invariance_suite, invariant_eta_combinations,
    GeneratorSet, SignedPermutation,
};
use coxops::{Kind, Polynomial, Rational};
use proptest::prelude::*;

const L: usize = 4;

fn signed_perm(l: usize) -> impl Strategy<Value = SignedPermutation> {
    (Just((0..l).collect::<Vec<usize>>()).prop_shuffle(), prop::collection::vec(prop::bool::ANY, l)).prop_map(
        |(p, s)| SignedPermutation::new(p, s.into_iter().map(|b| if b { -1 } else { 1 }).collect()).unwrap(),
    )
}

fn small_poly(l: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0i32..=2, l), -3i64..=3), 0..=4).prop_map(move |t| {
        Polynomial::from_terms(l, t.into_iter().map(|(e, c)| (e, Rational::from_int(c)))).unwrap()
    })
}

fn random_op(l: usize) -> impl Strategy<Value = DiffOperator> {
    let idx = MultiIndex::enumerate(l, 2);
    prop::collection::vec(small_poly(l), idx.len())
        .prop_map(move |cs| DiffOperator::from_terms(l, 2, idx.clone().into_iter().zip(cs)).unwrap())
}

/// `w·f` by plain substitution `x_k ↦ s_k·x_{π(k)}`.
fn act_by_substitution(w: &SignedPermutation, f: &Polynomial) -> Polynomial {
    let l = w.l();
    let vals: Vec<Polynomial> = (0..l)
        .map(|k| Polynomial::var(l, w.image(k)).scale(&Rational::from_int(w.sign(k) as i64)))
        .collect();
    f.substitute(&vals).unwrap()
}

fn uncertified(kind: Kind, l: usize) -> coxops::bases::BasisSet {
    build_basis_with(kind, l, BuildOptions { certify: false, ..Default::default() }).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn polynomial_action_is_substitution(w in signed_perm(L), f in small_poly(L)) {
        prop_assert_eq!(act_poly(&w, &f).unwrap(), act_by_substitution(&w, &f));
    }

    #[test]
    fn polynomial_action_is_a_ring_map(w in signed_perm(L), f in small_poly(L), g in small_poly(L)) {
        prop_assert_eq!(act_poly(&w, &(&f * &g)).unwrap(), &act_poly(&w, &f).unwrap() * &act_poly(&w, &g).unwrap());
    }

    #[test]
    fn action_respects_composition(a in signed_perm(L), b in signed_perm(L), op in random_op(L)) {
        let ab = a.compose(&b).unwrap();
        prop_assert_eq!(act_op(&ab, &op).unwrap(), act_op(&a, &act_op(&b, &op).unwrap()).unwrap());
        prop_assert_eq!(a.compose(&a.inverse()).unwrap(), SignedPermutation::identity(L));
    }

    #[test]
    fn defining_property_holds(w in signed_perm(L), op in random_op(L), fs in prop::collection::vec(small_poly(L), 4)) {
        prop_assert!(check_defining_property(&w, &op, &fs).unwrap());
    }

    // the module of a W-stable arrangement is W-stable
    #[test]
    fn members_stay_members(w in signed_perm(4), i in 0usize..10) {
        let arr = Arrangement::build(Kind::B, 4).unwrap();
        let op = &uncertified(Kind::B, 4).operators()[i];
        prop_assert!(act_op(&w, op).unwrap().member_of(&arr).unwrap());
    }
}

#[test]
fn word_parsing() {
    let w = SignedPermutation::parse("s12", 3).unwrap();
    assert_eq!(w, SignedPermutation::transposition(3, 1, 2).unwrap());
    assert_eq!(SignedPermutation::parse("s1,2", 3).unwrap(), w);
    assert_eq!(SignedPermutation::parse("e", 3).unwrap(), SignedPermutation::identity(3));
    // rightmost acts first: x1 -> -x1 -> -x2
    let v = SignedPermutation::parse("s12*t1", 3).unwrap();
    let x1 = Polynomial::var(3, 0);
    assert_eq!(act_poly(&v, &x1).unwrap(), -&Polynomial::var(3, 1));
    assert!(SignedPermutation::parse("s11", 3).is_err());
    assert!(SignedPermutation::parse("q1", 3).is_err());
    assert!(SignedPermutation::parse("t4", 3).is_err());
    assert!(SignedPermutation::parse("s34*t3*t4", 4).unwrap().belongs_to(Kind::D));
    assert!(!SignedPermutation::tau(4, 4).unwrap().belongs_to(Kind::D));
}

#[test]
fn generators_belong_to_their_groups() {
    for kind in [Kind::A, Kind::B, Kind::D] {
        for l in 3..=6 {
            let gens = GeneratorSet::new(kind, l).unwrap();
            assert_eq!(gens.generators.len(), if kind == Kind::A { l - 1 } else { l });
            assert!(gens.generators.iter().all(|(_, g)| g.belongs_to(kind)));
        }
    }
}

#[test]
fn eta_matrices_are_signed_permutation_matrices() {
    for kind in [Kind::A, Kind::B, Kind::D] {
        for l in 3..=5 {
            let gens = GeneratorSet::new(kind, l).unwrap();
            let mats = eta_action_matrices(kind, l).unwrap();
            for ((name, m), (_, g)) in mats.iter().zip(&gens.generators) {
                assert_eq!(m, &g.matrix(), "{kind} l={l} {name}");
            }
        }
    }
    let d = eta_action_matrices(Kind::D, 4).unwrap();
    let last = &d.last().unwrap().1;
    assert_eq!(last[2][3], -1);
    assert_eq!(last[3][2], -1);
    let b = eta_action_matrices(Kind::B, 4).unwrap();
    assert_eq!(b.last().unwrap().1[3][3], -1);
}

#[test]
fn invariant_combinations() {
    for l in [3, 4, 5] {
        let a = invariant_eta_combinations(Kind::A, l).unwrap();
        assert_eq!(a.len(), 1);
        assert!(a[0].iter().all(|c| c == &a[0][0]));
        assert!(invariant_eta_combinations(Kind::B, l).unwrap().is_empty());
        assert!(invariant_eta_combinations(Kind::D, l).unwrap().is_empty());
    }
}

#[test]
fn suite_passes() {
    for kind in [Kind::A, Kind::B, Kind::D] {
        for l in [3, 4] {
            let report = invariance_suite(&uncertified(kind, l)).unwrap();
            assert!(report.passed(), "{kind} l={l}: {report:?}");
        }
    }
}
