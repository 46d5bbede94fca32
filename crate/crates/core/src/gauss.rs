//! Gaussian rationals `(re + im·i) / den` over a shared denominator.
//!
//! Kept in lowest terms with `den > 0`, so structural equality is field
//! equality. Each operation needs one gcd instead of the several a pair of
//! independent rationals would.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussRat {
    re: BigInt,
    im: BigInt,
    den: BigInt,
}

impl GaussRat {
    fn reduced(re: BigInt, im: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if re.is_zero() && im.is_zero() {
            return Self::zero();
        }
        let (re, im, den) = if den.is_negative() { (-re, -im, -den) } else { (re, im, den) };
        if den.is_one() {
            return GaussRat { re, im, den };
        }
        // the denominator is usually far smaller than the numerators
        let g = den.gcd(&re);
        let g = if g.is_one() { g } else { g.gcd(&im) };
        if g.is_one() {
            GaussRat { re, im, den }
        } else {
            GaussRat {
                re: re / &g,
                im: im / &g,
                den: den / &g,
            }
        }
    }

    pub fn new(re: &BigRational, im: &BigRational) -> Self {
        let den = re.denom().lcm(im.denom());
        let scale = |q: &BigRational| q.numer() * (&den / q.denom());
        Self::reduced(scale(re), scale(im), den)
    }

    pub fn from_integer(n: BigInt) -> Self {
        GaussRat {
            re: n,
            im: BigInt::zero(),
            den: BigInt::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_integer(BigInt::zero())
    }

    pub fn i() -> Self {
        GaussRat {
            re: BigInt::zero(),
            im: BigInt::one(),
            den: BigInt::one(),
        }
    }

    pub fn re(&self) -> BigRational {
        BigRational::new(self.re.clone(), self.den.clone())
    }

    pub fn im(&self) -> BigRational {
        BigRational::new(self.im.clone(), self.den.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat {
            re: self.re.clone(),
            im: -&self.im,
            den: self.den.clone(),
        }
    }

    /// `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // den / (re + im i) = den (re - im i) / (re² + im²)
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(Self::reduced(&self.den * &self.re, -(&self.den * &self.im), norm))
    }
}

/// `a·b + c·d` with a single reduction.
pub fn dot2(a: &GaussRat, b: &GaussRat, c: &GaussRat, d: &GaussRat) -> GaussRat {
    let re1 = &a.re * &b.re - &a.im * &b.im;
    let im1 = &a.re * &b.im + &a.im * &b.re;
    let den1 = &a.den * &b.den;
    let re2 = &c.re * &d.re - &c.im * &d.im;
    let im2 = &c.re * &d.im + &c.im * &d.re;
    let den2 = &c.den * &d.den;
    if den1 == den2 {
        return GaussRat::reduced(re1 + re2, im1 + im2, den1);
    }
    GaussRat::reduced(&re1 * &den2 + &re2 * &den1, &im1 * &den2 + &im2 * &den1, den1 * den2)
}

impl Add for &GaussRat {
    type Output = GaussRat;

    fn add(self, rhs: &GaussRat) -> GaussRat {
        if self.den == rhs.den {
            return GaussRat::reduced(&self.re + &rhs.re, &self.im + &rhs.im, self.den.clone());
        }
        GaussRat::reduced(
            &self.re * &rhs.den + &rhs.re * &self.den,
            &self.im * &rhs.den + &rhs.im * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &GaussRat {
    type Output = GaussRat;

    fn sub(self, rhs: &GaussRat) -> GaussRat {
        self + &-rhs
    }
}

impl Mul for &GaussRat {
    type Output = GaussRat;

    fn mul(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::reduced(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
            &self.den * &rhs.den,
        )
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;

    fn neg(self) -> GaussRat {
        GaussRat {
            re: -&self.re,
            im: -&self.im,
            den: self.den.clone(),
        }
    }
}
