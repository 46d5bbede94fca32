#![allow(dead_code)]

use kcomm_core::{FieldKind, FieldTag, Mat2, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

pub fn q() -> FieldTag {
    FieldTag::rational()
}

pub fn qi() -> FieldTag {
    FieldTag::gaussian()
}

pub fn int(field: FieldTag, n: i64) -> Scalar {
    Scalar::from_i64(field.kind, n)
}

pub fn u(field: FieldTag, i: usize, j: usize) -> Mat2 {
    Mat2::unit(field, i, j)
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=5).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

pub fn gaussian_scalar() -> impl Strategy<Value = Scalar> {
    (rational(), rational()).prop_map(|(re, im)| Scalar::gaussian(FieldKind::GaussianQi, re, im).unwrap())
}

pub fn rational_scalar() -> impl Strategy<Value = Scalar> {
    rational().prop_map(Scalar::Rational)
}

pub fn gaussian_mat() -> impl Strategy<Value = Mat2> {
    prop::array::uniform4(gaussian_scalar())
        .prop_map(|[a, b, c, d]| Mat2::new(qi(), [[a, b], [c, d]]).unwrap())
}

pub fn rational_mat() -> impl Strategy<Value = Mat2> {
    prop::array::uniform4(rational_scalar())
        .prop_map(|[a, b, c, d]| Mat2::new(q(), [[a, b], [c, d]]).unwrap())
}

pub fn nonzero_gaussian_vec() -> impl Strategy<Value = [Scalar; 2]> {
    prop::array::uniform2(gaussian_scalar()).prop_filter("nonzero", |v| v.iter().any(|s| !s.is_exact_zero()))
}

/// `[A, B]_k` by expanding the nested commutator into all `2^k` words:
/// every step either right-multiplies by `B` or left-multiplies by `−B`.
/// Independent of both the recursive and the binomial evaluators.
pub fn word_expansion(a: &Mat2, b: &Mat2, k: u32) -> Mat2 {
    let field = *a.field();
    let mut total = Mat2::zero(field);
    for mask in 0u32..(1 << k) {
        let mut term = a.clone();
        let mut sign = 1i64;
        for step in 0..k {
            if mask >> step & 1 == 1 {
                term = b * &term;
                sign = -sign;
            } else {
                term = &term * b;
            }
        }
        total = &total + &term.scale(&int(field, sign));
    }
    total
}
