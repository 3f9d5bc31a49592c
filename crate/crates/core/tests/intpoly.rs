use heights_core::intpoly::{IntPoly, IntPolyError};
use num_bigint::BigInt;

fn x(arity: usize, i: usize) -> IntPoly {
    IntPoly::var(arity, i)
}

#[test]
fn divexact_linear() {
    // (2X + 4Y) / 2 = X + 2Y.
    let f = x(2, 0)
        .scale(&BigInt::from(2))
        .add(&x(2, 1).scale(&BigInt::from(4)));
    let q = f.divexact(&BigInt::from(2)).unwrap();
    let expected = x(2, 0).add(&x(2, 1).scale(&BigInt::from(2)));
    assert_eq!(q, expected);
}

#[test]
fn divexact_binomial_square() {
    // ((X+Y)^2 - X^2 - Y^2) / 2 = XY.
    let s = x(2, 0).add(&x(2, 1));
    let f = s.pow(2).sub(&x(2, 0).pow(2)).sub(&x(2, 1).pow(2));
    let q = f.divexact(&BigInt::from(2)).unwrap();
    assert_eq!(q, x(2, 0).mul(&x(2, 1)));
}

#[test]
fn divexact_binomial_cube() {
    // ((X+Y)^3 - X^3 - Y^3) / 3 = X^2 Y + X Y^2.
    let s = x(2, 0).add(&x(2, 1));
    let f = s.pow(3).sub(&x(2, 0).pow(3)).sub(&x(2, 1).pow(3));
    let q = f.divexact(&BigInt::from(3)).unwrap();
    let expected = x(2, 0).pow(2).mul(&x(2, 1)).add(&x(2, 0).mul(&x(2, 1).pow(2)));
    assert_eq!(q, expected);
}

#[test]
fn divexact_rejects_non_divisible() {
    let f = x(1, 0).scale(&BigInt::from(3));
    assert!(matches!(
        f.divexact(&BigInt::from(2)),
        Err(IntPolyError::NotDivisible(_, _))
    ));
}

#[test]
fn arithmetic_identities() {
    let a = x(3, 0).add(&x(3, 1).scale(&BigInt::from(-7)));
    let b = x(3, 2).pow(2).add(&IntPoly::constant(3, BigInt::from(5)));
    let c = x(3, 0).mul(&x(3, 1)).mul(&x(3, 2));
    // Ring axioms on a fixed nontrivial triple.
    assert_eq!(a.add(&b), b.add(&a));
    assert_eq!(a.mul(&b), b.mul(&a));
    assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    assert_eq!(a.sub(&a), IntPoly::zero(3));
    assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
}

#[test]
fn coefficient_lookup() {
    let f = x(2, 0).pow(2).mul(&x(2, 1)).scale(&BigInt::from(9));
    assert_eq!(f.coefficient(&[2, 1]), BigInt::from(9));
    assert_eq!(f.coefficient(&[1, 1]), BigInt::from(0));
}
