use coxops::arrangement::Arrangement;
use coxops::bases::{build_basis_with, eta, BuildOptions};
use coxops::diffop::{
    coefficient_matrix, exponents, saito_holm_certify, saito_holm_certify_with, CertifyMethod, DiffOperator, MultiIndex,
};
use coxops::matrix::PolyMatrix;
use coxops::{Error, Kind, Polynomial, Rational};
use proptest::prelude::*;

fn poly(s: &str, l: usize) -> Polynomial {
    Polynomial::parse(s, l).unwrap()
}

fn alpha(parts: &[u32]) -> MultiIndex {
    MultiIndex::new(parts.to_vec())
}

fn monomials(l: usize, max_deg: u32) -> Vec<Polynomial> {
    (0..=max_deg)
        .flat_map(|d| MultiIndex::enumerate(l, d))
        .map(|b| {
            let e: Vec<i32> = b.parts().iter().map(|&x| x as i32).collect();
            Polynomial::monomial(l, &e, Rational::one()).unwrap()
        })
        .collect()
}

/// θ(p·g) ∈ pS for every monomial g up to a degree bound, decided by long division.
fn membership_oracle(op: &DiffOperator, arr: &Arrangement) -> bool {
    let gs = monomials(op.l(), op.order() + 1);
    arr.forms.iter().all(|p| gs.iter().all(|g| op.apply(&(p * g)).unwrap().is_divisible_by(p).unwrap()))
}

fn small_poly(l: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0i32..=2, l), -3i64..=3), 0..=3).prop_map(move |t| {
        Polynomial::from_terms(l, t.into_iter().map(|(e, c)| (e, Rational::from_int(c)))).unwrap()
    })
}

fn random_op(l: usize, m: u32) -> impl Strategy<Value = DiffOperator> {
    let idx = MultiIndex::enumerate(l, m);
    prop::collection::vec(small_poly(l), idx.len())
        .prop_map(move |cs| DiffOperator::from_terms(l, m, idx.clone().into_iter().zip(cs)).unwrap())
}

#[test]
fn application_basics() {
    let half = Rational::new(1, 2).unwrap();
    let d11 = DiffOperator::single(alpha(&[2, 0]), Polynomial::constant(2, half.clone())).unwrap();
    assert_eq!(d11.apply(&poly("x1^2", 2)).unwrap(), Polynomial::one(2));
    let d12 = DiffOperator::single(alpha(&[1, 1]), Polynomial::one(2)).unwrap();
    assert_eq!(d12.apply(&poly("x1*x2", 2)).unwrap(), Polynomial::one(2));
    let e1 = eta(Kind::A, 1, 3, 2).unwrap();
    let h1 = &poly("x1 - x2", 3) * &poly("x1 - x3", 3);
    assert_eq!(e1.apply(&poly("1/2*x1^2", 3)).unwrap(), h1.scale(&half));
    assert_eq!(e1.apply(&poly("x1^2", 3)).unwrap(), h1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn application_is_linear(op in random_op(2, 2), f in small_poly(2), g in small_poly(2), c in -4i64..4) {
        let c = Rational::from_int(c);
        let lhs = op.apply(&(&f + &g.scale(&c))).unwrap();
        let rhs = &op.apply(&f).unwrap() + &op.apply(&g).unwrap().scale(&c);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn operator_sums_act_additively(a in random_op(3, 2), b in random_op(3, 2), f in small_poly(3)) {
        let s = a.checked_add(&b).unwrap();
        prop_assert_eq!(s.apply(&f).unwrap(), &a.apply(&f).unwrap() + &b.apply(&f).unwrap());
    }

    // random operators, usually outside the module
    #[test]
    fn membership_matches_oracle(op in random_op(3, 2)) {
        let arr = Arrangement::build(Kind::A, 3).unwrap();
        prop_assert_eq!(op.member_of(&arr).unwrap(), membership_oracle(&op, &arr));
    }

    // S-combinations of module elements stay inside
    #[test]
    fn module_is_closed_under_combinations(cs in prop::collection::vec(small_poly(3), 6)) {
        let set = build_basis_with(Kind::B, 3, BuildOptions { certify: false, ..Default::default() }).unwrap();
        let arr = Arrangement::build(Kind::B, 3).unwrap();
        let mut acc = DiffOperator::zero(3, 2);
        for (op, c) in set.operators().iter().zip(&cs) {
            acc = acc.checked_add(&op.mul_poly(c).unwrap()).unwrap();
        }
        prop_assert!(acc.member_of(&arr).unwrap());
        prop_assert!(membership_oracle(&acc, &arr));
    }

    #[test]
    fn operator_json_round_trip(op in random_op(3, 2)) {
        let s = serde_json::to_string(&op).unwrap();
        prop_assert_eq!(serde_json::from_str::<DiffOperator>(&s).unwrap(), op);
    }
}

#[test]
fn membership_examples() {
    let e1 = eta(Kind::A, 1, 3, 2).unwrap();
    assert!(e1.member_of_form(&poly("x1 - x2", 3)).unwrap());
    let d = DiffOperator::single(alpha(&[2, 0]), Polynomial::one(2)).unwrap();
    assert!(!d.member_of_form(&poly("x1 - x2", 2)).unwrap());
    assert!(!d.member_of(&Arrangement::build(Kind::A, 2).unwrap()).unwrap());
    let arr = Arrangement::build(Kind::D, 4).unwrap();
    let q = DiffOperator::single(alpha(&[1, 1, 0, 0]), arr.q.clone()).unwrap();
    assert!(q.member_of(&arr).unwrap());
    assert_eq!(d.member_of_form(&poly("x1^2", 2)), Err(Error::NotLinear));
}

/// The six operators for ℓ = 3, m = 2, typed in by hand.
fn example_family() -> Vec<DiffOperator> {
    let h = |s: &str| poly(s, 3);
    let op = |terms: Vec<([u32; 3], Polynomial)>| {
        DiffOperator::from_terms(3, 2, terms.into_iter().map(|(a, f)| (alpha(&a), f))).unwrap()
    };
    vec![
        op(vec![([2, 0, 0], h("1/2*x1^2 + -1/2*x1*x2 + -1/2*x1*x3 + 1/2*x2*x3"))]),
        op(vec![([0, 2, 0], h("1/2*x2^2 + -1/2*x1*x2 + -1/2*x2*x3 + 1/2*x1*x3"))]),
        op(vec![([0, 0, 2], h("1/2*x3^2 + -1/2*x1*x3 + -1/2*x2*x3 + 1/2*x1*x2"))]),
        op(vec![
            ([2, 0, 0], h("1/2*x1^2")),
            ([0, 2, 0], h("1/2*x2^2")),
            ([0, 0, 2], h("1/2*x3^2")),
            ([1, 1, 0], h("x1*x2")),
            ([1, 0, 1], h("x1*x3")),
            ([0, 1, 1], h("x2*x3")),
        ]),
        op(vec![
            ([2, 0, 0], h("x1")),
            ([0, 2, 0], h("x2")),
            ([0, 0, 2], h("x3")),
            ([1, 1, 0], h("x1 + x2")),
            ([1, 0, 1], h("x1 + x3")),
            ([0, 1, 1], h("x2 + x3")),
        ]),
        op(vec![
            ([2, 0, 0], h("1/2")),
            ([0, 2, 0], h("1/2")),
            ([0, 0, 2], h("1/2")),
            ([1, 1, 0], h("1")),
            ([1, 0, 1], h("1")),
            ([0, 1, 1], h("1")),
        ]),
    ]
}

/// The displayed 6×6 matrix: rows ∂1², ∂2², ∂3², ∂1∂2, ∂1∂3, ∂2∂3, one
/// column per operator. Row 3 of the fifth column reads x3 here.
fn displayed_matrix() -> PolyMatrix {
    let rows = [
        ["x1^2 + -x1*x2 + -x1*x3 + x2*x3", "0", "0", "1/2*x1^2", "x1", "1/2"],
        ["0", "x2^2 + -x1*x2 + -x2*x3 + x1*x3", "0", "1/2*x2^2", "x2", "1/2"],
        ["0", "0", "x3^2 + -x1*x3 + -x2*x3 + x1*x2", "1/2*x3^2", "x3", "1/2"],
        ["0", "0", "0", "x1*x2", "x1 + x2", "1"],
        ["0", "0", "0", "x1*x3", "x1 + x3", "1"],
        ["0", "0", "0", "x2*x3", "x2 + x3", "1"],
    ];
    PolyMatrix::from_rows(rows.iter().map(|r| r.iter().map(|s| poly(s, 3)).collect()).collect()).unwrap()
}

#[test]
fn worked_example_matrix() {
    let built = build_basis_with(Kind::A, 3, BuildOptions { certify: false, ..Default::default() }).unwrap();
    assert_eq!(built.operators(), example_family());

    let m = coefficient_matrix(&example_family()).unwrap();
    let cols: Vec<Vec<u32>> = MultiIndex::enumerate(3, 2).iter().map(|a| a.parts().to_vec()).collect();
    assert_eq!(cols, vec![vec![2, 0, 0], vec![1, 1, 0], vec![1, 0, 1], vec![0, 2, 0], vec![0, 1, 1], vec![0, 0, 2]]);
    // displayed row r is our column order[r]; the η columns are displayed as h rather than h/2
    let order = [0, 3, 5, 1, 2, 4];
    let shown = displayed_matrix();
    let half = Rational::new(1, 2).unwrap();
    for (r, &j) in order.iter().enumerate() {
        for i in 0..6 {
            let ours = if i < 3 { m.get(i, j).scale(&Rational::from_int(2)) } else { m.get(i, j).clone() };
            assert_eq!(&ours, shown.get(r, i), "operator {i}, row {r}");
        }
    }
    let scaled_det = shown.determinant().unwrap().scale(&half.pow(3));
    let det = m.determinant().unwrap();
    assert!(det == scaled_det || det == -&scaled_det);
}

#[test]
fn worked_example_certifies() {
    let ops = example_family();
    let arr = Arrangement::build(Kind::A, 3).unwrap();
    let cert = saito_holm_certify_with(&ops, &arr, CertifyMethod::Expanded).unwrap();
    assert!(cert.is_basis);
    assert_eq!(cert.t_m, 3);
    let det = cert.det.unwrap();
    let c = cert.c.unwrap();
    assert_eq!(det, arr.q_power(2).scale(&c));
    // the displayed factorisation: minus the squared Vandermonde times the lower 3×3 block
    let v = &(&poly("x1 - x2", 3) * &poly("x1 - x3", 3)) * &poly("x2 - x3", 3);
    let shown = displayed_matrix();
    let block = PolyMatrix::from_fn(3, 3, |i, j| shown.get(i + 3, j + 3).clone()).unwrap();
    let factored = -&(&(&v * &v) * &block.determinant().unwrap());
    assert_eq!(shown.determinant().unwrap(), factored);
    assert_eq!(exponents(&ops).unwrap(), vec![2, 2, 2, 2, 1, 0]);
}

#[test]
fn certification_routes_agree() {
    for (kind, l) in [(Kind::A, 2), (Kind::A, 3), (Kind::A, 4), (Kind::B, 2), (Kind::B, 3), (Kind::D, 3), (Kind::D, 4)] {
        let set = build_basis_with(kind, l, BuildOptions { certify: false, ..Default::default() }).unwrap();
        let arr = Arrangement::build(kind, l).unwrap();
        let ops = set.operators();
        let e = saito_holm_certify_with(&ops, &arr, CertifyMethod::Expanded).unwrap();
        let s = saito_holm_certify_with(&ops, &arr, CertifyMethod::Saito).unwrap();
        assert!(e.is_basis && s.is_basis, "{kind} {l}");
        assert_eq!(e.c, s.c, "{kind} {l}");
        assert!(s.det.is_none());
    }
}

#[test]
fn non_bases_are_rejected() {
    let arr = Arrangement::build(Kind::A, 3).unwrap();
    let mut ops = example_family();
    // a repeated operator makes the determinant vanish
    ops[5] = ops[4].clone();
    for method in [CertifyMethod::Expanded, CertifyMethod::Saito] {
        let cert = saito_holm_certify_with(&ops, &arr, method).unwrap();
        assert!(!cert.is_basis);
        assert!(cert.c.is_none());
    }
    // members, but the determinant carries an extra factor
    let mut ops = example_family();
    ops[5] = ops[5].mul_poly(&poly("x1", 3)).unwrap();
    for method in [CertifyMethod::Expanded, CertifyMethod::Saito] {
        assert!(!saito_holm_certify_with(&ops, &arr, method).unwrap().is_basis);
    }
    // outside the module
    let mut ops = example_family();
    ops[0] = DiffOperator::single(alpha(&[2, 0, 0]), Polynomial::one(3)).unwrap();
    assert_eq!(saito_holm_certify(&ops, &arr), Err(Error::NonMember { index: 0 }));
    // wrong count
    assert!(matches!(
        saito_holm_certify(&example_family()[..5], &arr),
        Err(Error::WrongOperatorCount { expected: 6, found: 5 })
    ));
}

#[test]
fn reordering_changes_only_the_sign() {
    let arr = Arrangement::build(Kind::A, 3).unwrap();
    let ops = example_family();
    let mut swapped = ops.clone();
    swapped.swap(0, 4);
    let a = saito_holm_certify_with(&ops, &arr, CertifyMethod::Expanded).unwrap();
    let b = saito_holm_certify_with(&swapped, &arr, CertifyMethod::Expanded).unwrap();
    assert_eq!(a.c.unwrap(), -&b.c.unwrap());
}
