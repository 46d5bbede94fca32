//! Scalars over a runtime-selected field.
//!
//! Four fields are supported: exact rationals, exact Gaussian rationals
//! (`re + im·i` with rational parts), and machine reals/complexes. Exact
//! fields compare by equality; float fields compare by absolute tolerance.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gauss::GaussRat;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    RationalQ,
    GaussianQi,
    FloatR,
    FloatC,
}

impl FieldKind {
    pub const ALL: [FieldKind; 4] = [
        FieldKind::RationalQ,
        FieldKind::GaussianQi,
        FieldKind::FloatR,
        FieldKind::FloatC,
    ];

    /// Short code used on the command line and in JSON.
    pub fn code(self) -> &'static str {
        match self {
            FieldKind::RationalQ => "Q",
            FieldKind::GaussianQi => "Qi",
            FieldKind::FloatR => "R64",
            FieldKind::FloatC => "C64",
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, FieldKind::RationalQ | FieldKind::GaussianQi)
    }

    pub fn is_complex(self) -> bool {
        matches!(self, FieldKind::GaussianQi | FieldKind::FloatC)
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for FieldKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Q" | "RationalQ" => Ok(FieldKind::RationalQ),
            "Qi" | "GaussianQi" => Ok(FieldKind::GaussianQi),
            "R64" | "R" | "FloatR" => Ok(FieldKind::FloatR),
            "C64" | "C" | "FloatC" => Ok(FieldKind::FloatC),
            other => Err(Error::Parse(format!("unknown field `{other}`"))),
        }
    }
}

/// A field selection plus the comparison tolerance used by the float variants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldTag {
    pub kind: FieldKind,
    pub tolerance: f64,
}

impl FieldTag {
    pub fn new(kind: FieldKind) -> Self {
        FieldTag {
            kind,
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    pub fn rational() -> Self {
        Self::new(FieldKind::RationalQ)
    }

    pub fn gaussian() -> Self {
        Self::new(FieldKind::GaussianQi)
    }

    pub fn real() -> Self {
        Self::new(FieldKind::FloatR)
    }

    pub fn complex() -> Self {
        Self::new(FieldKind::FloatC)
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance.abs();
        self
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Gaussian(z) => z.is_zero(),
            Scalar::Real(x) => x.abs() <= self.tolerance,
            Scalar::Complex(z) => z.norm() <= self.tolerance,
        }
    }

    /// Equality under this field's policy. Both operands must already be in
    /// this field; use [`scalar_eq`] when that is not known.
    pub fn eq(&self, a: &Scalar, b: &Scalar) -> bool {
        match (a, b) {
            (Scalar::Rational(x), Scalar::Rational(y)) => x == y,
            (Scalar::Gaussian(x), Scalar::Gaussian(y)) => x == y,
            (Scalar::Real(x), Scalar::Real(y)) => (x - y).abs() <= self.tolerance,
            (Scalar::Complex(x), Scalar::Complex(y)) => (x - y).norm() <= self.tolerance,
            _ => false,
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero(self.kind)
    }

    pub fn one(&self) -> Scalar {
        Scalar::one(self.kind)
    }
}

impl Default for FieldTag {
    fn default() -> Self {
        FieldTag::rational()
    }
}

/// A field element. The variant determines the field.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Rational(BigRational),
    Gaussian(GaussRat),
    Real(f64),
    Complex(Complex64),
}

impl Scalar {
    pub fn kind(&self) -> FieldKind {
        match self {
            Scalar::Rational(_) => FieldKind::RationalQ,
            Scalar::Gaussian(_) => FieldKind::GaussianQi,
            Scalar::Real(_) => FieldKind::FloatR,
            Scalar::Complex(_) => FieldKind::FloatC,
        }
    }

    pub fn zero(kind: FieldKind) -> Self {
        Self::from_i64(kind, 0)
    }

    pub fn one(kind: FieldKind) -> Self {
        Self::from_i64(kind, 1)
    }

    pub fn from_i64(kind: FieldKind, n: i64) -> Self {
        Self::from_bigint(kind, &BigInt::from(n))
    }

    pub fn from_bigint(kind: FieldKind, n: &BigInt) -> Self {
        match kind {
            FieldKind::RationalQ => Scalar::Rational(BigRational::from_integer(n.clone())),
            FieldKind::GaussianQi => Scalar::Gaussian(GaussRat::from_integer(n.clone())),
            FieldKind::FloatR => Scalar::Real(n.to_f64().unwrap_or(f64::NAN)),
            FieldKind::FloatC => Scalar::Complex(Complex64::new(n.to_f64().unwrap_or(f64::NAN), 0.0)),
        }
    }

    /// `p/q` embedded in `kind`. Panics if `q == 0`.
    pub fn ratio(kind: FieldKind, p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        let r = BigRational::new(BigInt::from(p), BigInt::from(q));
        Self::from_rational(kind, &r)
    }

    pub fn from_rational(kind: FieldKind, r: &BigRational) -> Self {
        match kind {
            FieldKind::RationalQ => Scalar::Rational(r.clone()),
            FieldKind::GaussianQi => Scalar::Gaussian(GaussRat::new(r, &BigRational::zero())),
            FieldKind::FloatR => Scalar::Real(r.to_f64().unwrap_or(f64::NAN)),
            FieldKind::FloatC => Scalar::Complex(Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)),
        }
    }

    /// `re + im·i` with rational parts. Fails for the real fields when `im != 0`.
    pub fn gaussian(kind: FieldKind, re: BigRational, im: BigRational) -> Result<Self> {
        match kind {
            FieldKind::GaussianQi => Ok(Scalar::Gaussian(GaussRat::new(&re, &im))),
            FieldKind::FloatC => Ok(Scalar::Complex(Complex64::new(
                re.to_f64().unwrap_or(f64::NAN),
                im.to_f64().unwrap_or(f64::NAN),
            ))),
            FieldKind::RationalQ | FieldKind::FloatR if im.is_zero() => {
                Ok(Scalar::from_rational(kind, &re))
            }
            _ => Err(Error::Parse(format!("field {kind} has no imaginary unit"))),
        }
    }

    /// The imaginary unit, if the field has one.
    pub fn imaginary_unit(kind: FieldKind) -> Option<Self> {
        match kind {
            FieldKind::GaussianQi => Some(Scalar::Gaussian(GaussRat::i())),
            FieldKind::FloatC => Some(Scalar::Complex(Complex64::new(0.0, 1.0))),
            _ => None,
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            Scalar::Gaussian(z) => Scalar::Gaussian(z.conj()),
            Scalar::Complex(z) => Scalar::Complex(z.conj()),
            other => other.clone(),
        }
    }

    /// Exact zero test (float variants: bitwise zero). Use [`FieldTag::is_zero`]
    /// for the tolerance-aware test.
    pub fn is_exact_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Gaussian(z) => z.is_zero(),
            Scalar::Real(x) => *x == 0.0,
            Scalar::Complex(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    /// Absolute value as a float, used for norms and tolerance scaling.
    pub fn magnitude(&self) -> f64 {
        match self {
            Scalar::Rational(q) => q.abs().to_f64().unwrap_or(f64::INFINITY),
            Scalar::Gaussian(z) => {
                let re = z.re().to_f64().unwrap_or(f64::INFINITY);
                let im = z.im().to_f64().unwrap_or(f64::INFINITY);
                re.hypot(im)
            }
            Scalar::Real(x) => x.abs(),
            Scalar::Complex(z) => z.norm(),
        }
    }

    /// Multiplicative inverse; `None` for exact zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_exact_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Gaussian(z) => Scalar::Gaussian(z.inv()?),
            Scalar::Real(x) => Scalar::Real(1.0 / x),
            Scalar::Complex(z) => Scalar::Complex(z.inv()),
        })
    }

    /// `a·b + c·d`; for Gaussian rationals this reduces once instead of three times.
    pub fn dot2(a: &Scalar, b: &Scalar, c: &Scalar, d: &Scalar) -> Scalar {
        match (a, b, c, d) {
            (Scalar::Gaussian(a), Scalar::Gaussian(b), Scalar::Gaussian(c), Scalar::Gaussian(d)) => {
                Scalar::Gaussian(crate::gauss::dot2(a, b, c, d))
            }
            _ => &(a * b) + &(c * d),
        }
    }

    pub fn div(&self, rhs: &Scalar) -> Option<Self> {
        rhs.inv().map(|r| self * &r)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Scalar::one(self.kind());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Converts to a float complex number, for residual reporting.
    pub fn to_complex64(&self) -> Complex64 {
        match self {
            Scalar::Rational(q) => Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0),
            Scalar::Gaussian(z) => Complex64::new(
                z.re().to_f64().unwrap_or(f64::NAN),
                z.im().to_f64().unwrap_or(f64::NAN),
            ),
            Scalar::Real(x) => Complex64::new(*x, 0.0),
            Scalar::Complex(z) => *z,
        }
    }

    /// Re-embeds this value into another field. Exact-to-float conversion
    /// rounds; complex-to-real conversion fails when the imaginary part is nonzero.
    pub fn convert(&self, kind: FieldKind) -> Result<Self> {
        if self.kind() == kind {
            return Ok(self.clone());
        }
        match self {
            Scalar::Rational(q) => Ok(Scalar::from_rational(kind, q)),
            Scalar::Gaussian(z) => Scalar::gaussian(kind, z.re(), z.im()),
            Scalar::Real(x) => match kind {
                FieldKind::FloatC => Ok(Scalar::Complex(Complex64::new(*x, 0.0))),
                _ => Err(Error::FieldMismatch {
                    left: FieldKind::FloatR,
                    right: kind,
                }),
            },
            Scalar::Complex(z) => match kind {
                FieldKind::FloatR if z.im == 0.0 => Ok(Scalar::Real(z.re)),
                _ => Err(Error::FieldMismatch {
                    left: FieldKind::FloatC,
                    right: kind,
                }),
            },
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{q}"),
            Scalar::Gaussian(z) => {
                let (re, im) = (z.re(), z.im());
                if im.is_zero() {
                    write!(f, "{re}")
                } else if re.is_zero() {
                    write!(f, "{im}i")
                } else if im.is_negative() {
                    write!(f, "{re}-{}i", -im)
                } else {
                    write!(f, "{re}+{im}i")
                }
            }
            Scalar::Real(x) => write!(f, "{x}"),
            Scalar::Complex(z) => write!(f, "{z}"),
        }
    }
}

fn mixed(op: &str, a: &Scalar, b: &Scalar) -> ! {
    panic!("mixed-field {op}: {} and {}", a.kind(), b.kind())
}

// Binary operators panic on mixed fields. Public entry points check field
// agreement up front and report `Error::FieldMismatch` instead.
macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $name:literal) => {
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;

            fn $method(self, rhs: &'a Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a.$method(b)),
                    (Scalar::Gaussian(a), Scalar::Gaussian(b)) => Scalar::Gaussian(a.$method(b)),
                    (Scalar::Real(a), Scalar::Real(b)) => Scalar::Real(a.$method(b)),
                    (Scalar::Complex(a), Scalar::Complex(b)) => Scalar::Complex(a.$method(b)),
                    _ => mixed($name, self, rhs),
                }
            }
        }

        impl $trait<Scalar> for Scalar {
            type Output = Scalar;

            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

scalar_binop!(Add, add, "addition");
scalar_binop!(Sub, sub, "subtraction");
scalar_binop!(Mul, mul, "multiplication");

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a.clone()),
            Scalar::Gaussian(a) => Scalar::Gaussian(-a),
            Scalar::Real(a) => Scalar::Real(-a),
            Scalar::Complex(a) => Scalar::Complex(-a),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        -&self
    }
}

/// Field-aware equality; fails when either operand lies outside `field`.
pub fn scalar_eq(a: &Scalar, b: &Scalar, field: &FieldTag) -> Result<bool> {
    for s in [a, b] {
        if s.kind() != field.kind {
            return Err(Error::FieldMismatch {
                left: s.kind(),
                right: field.kind,
            });
        }
    }
    Ok(field.eq(a, b))
}

/// All `z` in the field with `z^m = 1`, ordered by ascending argument in `[0, 2π)`.
pub fn roots_of_unity(field: &FieldTag, m: u32) -> Result<Vec<Scalar>> {
    if m == 0 {
        return Err(Error::InvalidOrder(0));
    }
    let kind = field.kind;
    let roots = match kind {
        FieldKind::RationalQ | FieldKind::FloatR => {
            let mut v = vec![Scalar::one(kind)];
            if m.is_multiple_of(2) {
                v.push(Scalar::from_i64(kind, -1));
            }
            v
        }
        FieldKind::GaussianQi => {
            let i = Scalar::imaginary_unit(kind).expect("Qi has i");
            let one = Scalar::one(kind);
            [one.clone(), i.clone(), -&one, -&i]
                .into_iter()
                .filter(|z| z.pow(m) == one)
                .collect()
        }
        FieldKind::FloatC => (0..m)
            .map(|j| {
                let theta = 2.0 * std::f64::consts::PI * f64::from(j) / f64::from(m);
                Scalar::Complex(Complex64::from_polar(1.0, theta))
            })
            .collect(),
    };
    Ok(roots)
}
