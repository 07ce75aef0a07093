use coxops::arrangement::{s_m_size, t_m_exponent, Arrangement};
use coxops::{Kind, Polynomial, Rational};

#[test]
fn hyperplane_counts() {
    for l in 2..=7 {
        assert_eq!(Arrangement::build(Kind::A, l).unwrap().len(), l * (l - 1) / 2);
        assert_eq!(Arrangement::build(Kind::B, l).unwrap().len(), l * l);
        assert_eq!(Arrangement::build(Kind::D, l).unwrap().len(), l * (l - 1));
    }
    assert!(Arrangement::build(Kind::A, 1).is_err());
}

#[test]
fn sizes() {
    assert_eq!((s_m_size(3, 2), t_m_exponent(3, 2)), (6, 3));
    for l in 2..=8 {
        assert_eq!(s_m_size(l, 2), l * (l + 1) / 2);
        assert_eq!(t_m_exponent(l, 2), l);
        assert_eq!(t_m_exponent(l, 1), 1);
    }
}

#[test]
fn defining_polynomial() {
    let arr = Arrangement::build(Kind::B, 3).unwrap();
    assert_eq!(arr.q.degree().unwrap(), 9);
    assert!(arr.forms.iter().all(|f| arr.q.is_divisible_by(f).unwrap()));
    // vanishes on every hyperplane, not off them
    let on: Vec<Rational> = [2, -2, 5].iter().map(|&v| Rational::from_int(v)).collect();
    let off: Vec<Rational> = [2, 3, 7].iter().map(|&v| Rational::from_int(v)).collect();
    assert!(arr.q.eval(&on).unwrap().is_zero());
    assert!(!arr.q.eval(&off).unwrap().is_zero());
    let d = Arrangement::build(Kind::D, 3).unwrap();
    let b = Arrangement::build(Kind::B, 3).unwrap();
    let xs = &(&Polynomial::var(3, 0) * &Polynomial::var(3, 1)) * &Polynomial::var(3, 2);
    assert_eq!(&d.q * &xs, b.q);
}
