//! Iterated commutators `[A, B]_k`.
//!
//! `[A, B]_0 = A` and `[A, B]_k = [[A, B]_{k-1}, B]`. The recursive evaluator
//! is the reference; every other evaluator here must agree with it.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::mat2::{Mat2, RankOneFactor};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Method {
    Recursive,
    Closed,
    /// Structure-aware: idempotent and square-zero fast paths, otherwise recursive.
    #[default]
    Auto,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "recursive" => Ok(Method::Recursive),
            "closed" => Ok(Method::Closed),
            "auto" => Ok(Method::Auto),
            other => Err(Error::Parse(format!("unknown method `{other}`"))),
        }
    }
}

pub fn kcomm(a: &Mat2, b: &Mat2, k: u32, method: Method) -> Result<Mat2> {
    match method {
        Method::Recursive => kcomm_recursive(a, b, k),
        Method::Closed => kcomm_closed(a, b, k),
        Method::Auto => {
            a.same_field(b)?;
            if k >= 3 && b.is_nilpotent() {
                kcomm_nilpotent_fast(a, b, k)
            } else if k >= 1 && b.is_idempotent() {
                kcomm_idempotent_fast(a, b, k)
            } else {
                kcomm_recursive(a, b, k)
            }
        }
    }
}

pub fn kcomm_recursive(a: &Mat2, b: &Mat2, k: u32) -> Result<Mat2> {
    a.same_field(b)?;
    let mut acc = a.clone();
    for _ in 0..k {
        acc = acc.commutator(b);
    }
    Ok(acc)
}

/// Binomial coefficients `C(k, 0..=k)`.
pub fn binomial_row(k: u32) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(k as usize + 1);
    let mut c = BigInt::one();
    row.push(c.clone());
    for i in 0..k {
        c = c * BigInt::from(k - i) / BigInt::from(i + 1);
        row.push(c.clone());
    }
    row
}

/// `Σ_{i=0}^{k} (-1)^i C(k,i) B^i A B^{k-i}`.
pub fn kcomm_closed(a: &Mat2, b: &Mat2, k: u32) -> Result<Mat2> {
    a.same_field(b)?;
    let kind = a.kind();
    let mut powers = Vec::with_capacity(k as usize + 1);
    powers.push(Mat2::identity(*a.field()));
    for i in 0..k as usize {
        let next = &powers[i] * b;
        powers.push(next);
    }
    let mut sum = Mat2::zero(*a.field());
    for (i, c) in binomial_row(k).iter().enumerate() {
        let coeff = if i % 2 == 0 { c.clone() } else { -c.clone() };
        let term = &(&powers[i] * a) * &powers[k as usize - i];
        sum = &sum + &term.scale(&Scalar::from_bigint(kind, &coeff));
    }
    Ok(sum)
}

/// For idempotent `q`, `[A, Q]_{k+2} = [A, Q]_k` when `k ≥ 1`, so only one or
/// two commutators are ever needed.
pub fn kcomm_idempotent_fast(a: &Mat2, q: &Mat2, k: u32) -> Result<Mat2> {
    a.same_field(q)?;
    if k == 0 {
        return Err(Error::InvalidOrder(0));
    }
    if !q.is_idempotent() {
        return Err(Error::NotIdempotent);
    }
    let once = a.commutator(q);
    Ok(if k % 2 == 1 { once } else { once.commutator(q) })
}

/// For square-zero `n` and `k ≥ 3`, every term of the binomial sum carries
/// `N²` on one side, so the bracket vanishes.
pub fn kcomm_nilpotent_fast(a: &Mat2, n: &Mat2, k: u32) -> Result<Mat2> {
    a.same_field(n)?;
    if !n.is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    if k < 3 {
        return Err(Error::KTooSmall { k, min: 3 });
    }
    Ok(Mat2::zero(*a.field()))
}

/// `[x f*, S]_k = (β − α)^k x f*` when `S x = α x` and `S* f = conj(β) f`.
pub fn kcomm_eigenpair(
    factor: &RankOneFactor,
    s: &Mat2,
    alpha: &Scalar,
    beta: &Scalar,
    k: u32,
) -> Result<Mat2> {
    let kind = s.kind();
    for v in factor.x.iter().chain(factor.f.iter()).chain([alpha, beta]) {
        if v.kind() != kind {
            return Err(Error::FieldMismatch {
                left: v.kind(),
                right: kind,
            });
        }
    }
    let field = *s.field();
    let apply = |m: &Mat2, v: &[Scalar; 2]| -> [Scalar; 2] {
        let e = m.entries();
        [
            &(&e[0][0] * &v[0]) + &(&e[0][1] * &v[1]),
            &(&e[1][0] * &v[0]) + &(&e[1][1] * &v[1]),
        ]
    };
    let close = |u: &[Scalar; 2], v: &[Scalar; 2]| field.eq(&u[0], &v[0]) && field.eq(&u[1], &v[1]);

    let sx = apply(s, &factor.x);
    let ax = [alpha * &factor.x[0], alpha * &factor.x[1]];
    if !close(&sx, &ax) {
        return Err(Error::NotAnEigenpair("right (x)"));
    }
    let sf = apply(&s.conj_transpose(), &factor.f);
    let bc = beta.conj();
    let bf = [&bc * &factor.f[0], &bc * &factor.f[1]];
    if !close(&sf, &bf) {
        return Err(Error::NotAnEigenpair("left (f)"));
    }
    let gap = (beta - alpha).pow(k);
    Ok(factor.to_matrix(field).scale(&gap))
}

pub mod fixtures {
    //! Closed-form bracket identities on matrix units, used as golden data.

    use super::*;
    use crate::scalar::{FieldKind, FieldTag};

    #[derive(Clone, Debug, PartialEq)]
    pub struct Fixture {
        pub name: String,
        pub k: u32,
        pub a: Mat2,
        pub b: Mat2,
        pub expected: Mat2,
    }

    fn two_pow(kind: FieldKind, e: u32) -> Scalar {
        Scalar::from_bigint(kind, &(BigInt::one() << e as usize))
    }

    /// `[a·E12, E11]_k = (-1)^k a E12`.
    pub fn unit_shift(field: FieldTag, a: &Scalar, k: u32) -> Fixture {
        let e12 = Mat2::unit(field, 0, 1);
        let sign = Scalar::from_i64(field.kind, if k.is_multiple_of(2) { 1 } else { -1 });
        Fixture {
            name: format!("unit-shift[{a}]"),
            k,
            a: e12.scale(a),
            b: Mat2::unit(field, 0, 0),
            expected: e12.scale(&(&sign * a)),
        }
    }

    /// `[E11, E12 + E21]_k` is `2^{k-1}(E12 − E21)` for odd k and
    /// `2^{k-1}(E11 − E22)` for even k. Requires `k ≥ 1`.
    pub fn swap_pair(field: FieldTag, k: u32) -> Fixture {
        assert!(k >= 1);
        let u = |i, j| Mat2::unit(field, i, j);
        let shape = if k % 2 == 1 {
            &u(0, 1) - &u(1, 0)
        } else {
            &u(0, 0) - &u(1, 1)
        };
        Fixture {
            name: "swap-pair".into(),
            k,
            a: u(0, 0),
            b: &u(0, 1) + &u(1, 0),
            expected: shape.scale(&two_pow(field.kind, k - 1)),
        }
    }

    /// `[E21, E11 + E12]_k = −E11 − (1 + (−1)^k) E12 + E21 + E22`. Requires `k ≥ 1`.
    pub fn lower_unit(field: FieldTag, k: u32) -> Fixture {
        assert!(k >= 1);
        let e12_coeff = if k.is_multiple_of(2) { -2 } else { 0 };
        Fixture {
            name: "lower-unit".into(),
            k,
            a: Mat2::unit(field, 1, 0),
            b: &Mat2::unit(field, 0, 0) + &Mat2::unit(field, 0, 1),
            expected: Mat2::from_i64(field, [[-1, e12_coeff], [1, 1]]),
        }
    }

    /// Every unit identity for `k = 1..=k_max`, with shift coefficients
    /// `1`, `2` and `−3/5`.
    pub fn unit_identities(field: FieldTag, k_max: u32) -> Vec<Fixture> {
        let coeffs = [
            Scalar::from_i64(field.kind, 1),
            Scalar::from_i64(field.kind, 2),
            Scalar::ratio(field.kind, -3, 5),
        ];
        let mut out = Vec::new();
        for k in 1..=k_max {
            for a in &coeffs {
                out.push(unit_shift(field, a, k));
            }
            out.push(swap_pair(field, k));
            out.push(lower_unit(field, k));
        }
        out
    }
}
