mod common;

use heights_core::field::{Field, FieldError, FieldElement};
use heights_core::ring::Ring;
use proptest::prelude::*;

#[test]
fn prime_field_construction() {
    let f5 = Field::new(5, 1, None).unwrap();
    assert_eq!(f5.q(), 5);
    assert_eq!(f5.p(), 5);
}

#[test]
fn composite_characteristic_rejected() {
    assert_eq!(Field::new(4, 1, None).unwrap_err(), FieldError::NotPrime(4));
    assert_eq!(Field::new(1, 1, None).unwrap_err(), FieldError::NotPrime(1));
}

#[test]
fn f4_default_modulus_is_first_irreducible() {
    // Oracle: over F_2 the monic quadratics are t^2, t^2+1, t^2+t, t^2+t+1;
    // the first three factor (roots 0, 1, 0), so the search must return
    // t^2+t+1 regardless of enumeration details.
    let f4 = Field::new(2, 2, None).unwrap();
    assert_eq!(f4.modulus_coeffs(), &[1, 1]);
}

#[test]
fn reducible_modulus_rejected() {
    // t^2 + 1 = (t+2)(t+3) over F_5.
    assert_eq!(
        Field::new(5, 2, Some(&[1, 0])).unwrap_err(),
        FieldError::Reducible(5)
    );
    // t^2 + 2 is irreducible over F_5 (2 is not a square mod 5).
    assert!(Field::new(5, 2, Some(&[2, 0])).is_ok());
}

#[test]
fn frobenius_examples() {
    let f5 = Field::new(5, 1, None).unwrap();
    let two = f5.from_int(2);
    assert_eq!(f5.frobenius(&two), two); // 32 mod 5 = 2

    let f4 = Field::new(2, 2, None).unwrap();
    let t = f4.gen();
    // t^2 reduced by t^2+t+1 is t+1.
    assert_eq!(f4.frobenius(&t), FieldElement::from_coeffs(&[1, 1]));
    assert_eq!(f4.frobenius(&f4.zero()), f4.zero());
}

#[test]
fn frobenius_iterated_d_times_is_identity() {
    for (p, d) in [(2u64, 2usize), (3, 2), (5, 2), (2, 3), (3, 4), (2, 4)] {
        let field = Field::new(p, d, None).unwrap();
        for x in field.elements() {
            let mut y = x;
            for _ in 0..d {
                y = field.frobenius(&y);
            }
            assert_eq!(y, x, "Frobenius orbit broken in F_{}^{}", p, d);
        }
    }
}

#[test]
fn frobenius_inv_roundtrip() {
    for (p, d) in [(2u64, 2usize), (3, 2), (5, 2), (2, 4)] {
        let field = Field::new(p, d, None).unwrap();
        for x in field.elements() {
            assert_eq!(field.frobenius(&field.frobenius_inv(&x)), x);
            assert_eq!(field.frobenius_inv(&field.frobenius(&x)), x);
        }
    }
}

#[test]
fn inverses_exhaustive() {
    for (p, d) in [(2u64, 1usize), (3, 1), (5, 1), (2, 2), (3, 2), (5, 2)] {
        let field = Field::new(p, d, None).unwrap();
        for x in field.elements() {
            if field.is_zero(&x) {
                assert!(field.inv(&x).is_err());
                continue;
            }
            let inv = field.inv(&x).unwrap();
            assert_eq!(field.mul(&x, &inv), field.one());
        }
    }
}

#[test]
fn fermat_little_theorem() {
    for (p, d) in [(2u64, 2usize), (3, 2), (5, 2)] {
        let field = Field::new(p, d, None).unwrap();
        for x in field.elements() {
            assert_eq!(field.pow(&x, field.q()), x, "x^q != x");
        }
    }
}

proptest! {
    #[test]
    fn field_axioms_randomized(selector in 0usize..6, codes in proptest::array::uniform3(0u64..625)) {
        let (p, d) = [(2u64, 1usize), (3, 1), (5, 1), (2, 2), (3, 2), (5, 2)][selector];
        let field = Field::new(p, d, None).unwrap();
        let decode = |code: u64| {
            let mut code = code % field.q();
            let mut c = [0u64; 4];
            for slot in c.iter_mut().take(d) {
                *slot = code % p;
                code /= p;
            }
            FieldElement { c }
        };
        let [a, b, c] = codes.map(decode);
        // Associativity and commutativity.
        prop_assert_eq!(field.add(&field.add(&a, &b), &c), field.add(&a, &field.add(&b, &c)));
        prop_assert_eq!(field.mul(&field.mul(&a, &b), &c), field.mul(&a, &field.mul(&b, &c)));
        prop_assert_eq!(field.add(&a, &b), field.add(&b, &a));
        prop_assert_eq!(field.mul(&a, &b), field.mul(&b, &a));
        // Distributivity.
        prop_assert_eq!(
            field.mul(&a, &field.add(&b, &c)),
            field.add(&field.mul(&a, &b), &field.mul(&a, &c))
        );
        // Identities and inverses.
        prop_assert_eq!(field.add(&a, &field.neg(&a)), field.zero());
        prop_assert_eq!(field.mul(&a, &field.one()), a);
        if !field.is_zero(&a) {
            let inv = field.inv(&a).unwrap();
            prop_assert_eq!(field.mul(&a, &inv), field.one());
        }
    }
}
