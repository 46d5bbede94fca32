//! 2×2 matrices over a [`Scalar`] field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{FieldKind, FieldTag, Scalar};

/// A 2×2 matrix, stored row-major, tagged with its field.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat2 {
    e: [[Scalar; 2]; 2],
    field: FieldTag,
}

impl Mat2 {
    pub fn new(field: FieldTag, entries: [[Scalar; 2]; 2]) -> Result<Self> {
        for s in entries.iter().flatten() {
            if s.kind() != field.kind {
                return Err(Error::FieldMismatch {
                    left: s.kind(),
                    right: field.kind,
                });
            }
        }
        Ok(Mat2 { e: entries, field })
    }

    pub(crate) fn from_parts(field: FieldTag, e: [[Scalar; 2]; 2]) -> Self {
        debug_assert!(e.iter().flatten().all(|s| s.kind() == field.kind));
        Mat2 { e, field }
    }

    pub fn from_i64(field: FieldTag, m: [[i64; 2]; 2]) -> Self {
        let k = field.kind;
        let s = |n| Scalar::from_i64(k, n);
        Mat2::from_parts(
            field,
            [[s(m[0][0]), s(m[0][1])], [s(m[1][0]), s(m[1][1])]],
        )
    }

    pub fn zero(field: FieldTag) -> Self {
        Self::from_i64(field, [[0, 0], [0, 0]])
    }

    pub fn identity(field: FieldTag) -> Self {
        Self::from_i64(field, [[1, 0], [0, 1]])
    }

    /// `s·I`.
    pub fn scalar(field: FieldTag, s: Scalar) -> Self {
        let z = field.zero();
        Mat2::from_parts(field, [[s.clone(), z.clone()], [z, s]])
    }

    /// Matrix unit `E_ij`, zero-based indices.
    pub fn unit(field: FieldTag, i: usize, j: usize) -> Self {
        let mut m = [[0; 2]; 2];
        m[i][j] = 1;
        Self::from_i64(field, m)
    }

    pub fn diag(field: FieldTag, a: Scalar, d: Scalar) -> Self {
        let z = field.zero();
        Mat2::from_parts(field, [[a, z.clone()], [z, d]])
    }

    /// `x·f*` for column `x` and the conjugate transpose of column `f`.
    pub fn outer(field: FieldTag, x: &[Scalar; 2], f: &[Scalar; 2]) -> Self {
        let fc = [f[0].conj(), f[1].conj()];
        Mat2::from_parts(
            field,
            [
                [&x[0] * &fc[0], &x[0] * &fc[1]],
                [&x[1] * &fc[0], &x[1] * &fc[1]],
            ],
        )
    }

    pub fn field(&self) -> &FieldTag {
        &self.field
    }

    pub fn kind(&self) -> FieldKind {
        self.field.kind
    }

    pub fn entries(&self) -> &[[Scalar; 2]; 2] {
        &self.e
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.e[i][j]
    }

    /// Row-major vectorization `(t11, t12, t21, t22)`.
    pub fn vec(&self) -> [Scalar; 4] {
        [
            self.e[0][0].clone(),
            self.e[0][1].clone(),
            self.e[1][0].clone(),
            self.e[1][1].clone(),
        ]
    }

    pub fn from_vec(field: FieldTag, v: [Scalar; 4]) -> Self {
        let [a, b, c, d] = v;
        Mat2::from_parts(field, [[a, b], [c, d]])
    }

    /// Replaces the comparison tolerance without touching entries.
    pub fn with_field(mut self, field: FieldTag) -> Result<Self> {
        self.check_kind(field.kind)?;
        self.field = field;
        Ok(self)
    }

    pub fn check_kind(&self, kind: FieldKind) -> Result<()> {
        if self.kind() == kind {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.kind(),
                right: kind,
            })
        }
    }

    pub fn same_field(&self, other: &Mat2) -> Result<()> {
        other.check_kind(self.kind())
    }

    fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Mat2 {
        Mat2::from_parts(
            self.field,
            [
                [f(&self.e[0][0]), f(&self.e[0][1])],
                [f(&self.e[1][0]), f(&self.e[1][1])],
            ],
        )
    }

    fn zip(&self, other: &Mat2, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Mat2 {
        let (a, b) = (&self.e, &other.e);
        Mat2::from_parts(
            self.field,
            [
                [f(&a[0][0], &b[0][0]), f(&a[0][1], &b[0][1])],
                [f(&a[1][0], &b[1][0]), f(&a[1][1], &b[1][1])],
            ],
        )
    }

    pub fn try_add(&self, other: &Mat2) -> Result<Mat2> {
        self.same_field(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Mat2) -> Result<Mat2> {
        self.same_field(other)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &Mat2) -> Result<Mat2> {
        self.same_field(other)?;
        Ok(self * other)
    }

    pub fn try_scale(&self, s: &Scalar) -> Result<Mat2> {
        self.check_kind(s.kind())?;
        Ok(self.scale(s))
    }

    /// Multiplies every entry by `s`. Panics when `s` is in another field.
    pub fn scale(&self, s: &Scalar) -> Mat2 {
        self.map(|x| x * s)
    }

    pub fn conj_transpose(&self) -> Mat2 {
        let e = &self.e;
        Mat2::from_parts(
            self.field,
            [
                [e[0][0].conj(), e[1][0].conj()],
                [e[0][1].conj(), e[1][1].conj()],
            ],
        )
    }

    pub fn pow(&self, n: u32) -> Mat2 {
        let mut acc = Mat2::identity(self.field);
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

    /// `[self, b] = self·b − b·self`.
    pub fn commutator(&self, b: &Mat2) -> Mat2 {
        &(self * b) - &(b * self)
    }

    pub fn trace(&self) -> Scalar {
        &self.e[0][0] + &self.e[1][1]
    }

    pub fn det(&self) -> Scalar {
        &(&self.e[0][0] * &self.e[1][1]) - &(&self.e[0][1] * &self.e[1][0])
    }

    /// Adjugate over determinant; `None` when singular.
    pub fn inverse(&self) -> Option<Mat2> {
        if self.is_singular() {
            return None;
        }
        let inv = self.det().inv()?;
        let e = &self.e;
        let adj = Mat2::from_parts(
            self.field,
            [
                [e[1][1].clone(), -&e[0][1]],
                [-&e[1][0], e[0][0].clone()],
            ],
        );
        Some(adj.scale(&inv))
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.e
            .iter()
            .map(|row| row.iter().map(Scalar::magnitude).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise distance to `other`, as a float.
    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        self.e
            .iter()
            .flatten()
            .zip(other.e.iter().flatten())
            .map(|(a, b)| (a.to_complex64() - b.to_complex64()).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().flatten().all(|s| self.field.is_zero(s))
    }

    /// Entrywise equality under this matrix's field policy.
    pub fn approx_eq(&self, other: &Mat2) -> bool {
        self.kind() == other.kind()
            && self
                .e
                .iter()
                .flatten()
                .zip(other.e.iter().flatten())
                .all(|(a, b)| self.field.eq(a, b))
    }

    /// Returns `c` when `self = c·I`.
    pub fn as_scalar(&self) -> Option<Scalar> {
        let f = &self.field;
        let e = &self.e;
        if f.is_zero(&e[0][1]) && f.is_zero(&e[1][0]) && f.eq(&e[0][0], &e[1][1]) {
            Some(e[0][0].clone())
        } else {
            None
        }
    }

    pub fn is_scalar(&self) -> bool {
        self.as_scalar().is_some()
    }

    /// `A² = 0`. For 2×2 matrices this coincides with `tr A = det A = 0`.
    pub fn is_nilpotent(&self) -> bool {
        let by_square = (self * self).is_zero();
        if self.kind().is_exact() {
            let by_invariants =
                self.field.is_zero(&self.trace()) && self.field.is_zero(&self.det());
            assert_eq!(
                by_square, by_invariants,
                "nilpotency characterizations disagree for {self}"
            );
        }
        by_square
    }

    pub fn is_idempotent(&self) -> bool {
        (self * self).approx_eq(self)
    }

    /// Scale-aware singularity test: exact for exact fields, and
    /// `|det| ≤ tol·(1 + ‖A‖∞²)` for float fields.
    pub fn is_singular(&self) -> bool {
        let det = self.det();
        if self.kind().is_exact() {
            det.is_exact_zero()
        } else {
            let n = self.norm_inf();
            det.magnitude() <= self.field.tolerance * (1.0 + n * n)
        }
    }

    pub fn rank_one_factor(&self) -> Result<RankOneFactor> {
        if self.is_zero() || !self.is_singular() {
            return Err(Error::RankNotOne);
        }
        let f = &self.field;
        let e = &self.e;
        // first nonzero column gives the direction of x
        let col = (0..2)
            .find(|&j| !f.is_zero(&e[0][j]) || !f.is_zero(&e[1][j]))
            .ok_or(Error::RankNotOne)?;
        let lead = if f.is_zero(&e[0][col]) { 1 } else { 0 };
        let pivot_inv = e[lead][col].inv().ok_or(Error::RankNotOne)?;
        let x = [&e[0][col] * &pivot_inv, &e[1][col] * &pivot_inv];
        // x[lead] == 1, so row `lead` of A is f*.
        let fstar = &e[lead];
        let fv = [fstar[0].conj(), fstar[1].conj()];
        Ok(RankOneFactor { x, f: fv })
    }

    /// Splits `S = λI + N` with `N² = 0` when the discriminant vanishes.
    pub fn spectral_split(&self) -> Result<SpectralSplit> {
        let k = self.kind();
        let tr = self.trace();
        let disc = &(&tr * &tr) - &(&Scalar::from_i64(k, 4) * &self.det());
        if !self.field.is_zero(&disc) {
            return Err(Error::NotScalarPlusNilpotent { discriminant: disc });
        }
        let half = Scalar::ratio(k, 1, 2);
        let lambda = &tr * &half;
        let nilpotent = self - &Mat2::scalar(self.field, lambda.clone());
        Ok(SpectralSplit {
            lambda,
            nilpotent,
            discriminant: disc,
        })
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = &self.e;
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            e[0][0], e[0][1], e[1][0], e[1][1]
        )
    }
}

// Operators panic on mixed fields; the `try_*` methods report the mismatch.
impl<'a> Add<&'a Mat2> for &'a Mat2 {
    type Output = Mat2;

    fn add(self, rhs: &'a Mat2) -> Mat2 {
        self.zip(rhs, |a, b| a + b)
    }
}

impl<'a> Sub<&'a Mat2> for &'a Mat2 {
    type Output = Mat2;

    fn sub(self, rhs: &'a Mat2) -> Mat2 {
        self.zip(rhs, |a, b| a - b)
    }
}

impl<'a> Mul<&'a Mat2> for &'a Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: &'a Mat2) -> Mat2 {
        let (a, b) = (&self.e, &rhs.e);
        let cell = |i: usize, j: usize| Scalar::dot2(&a[i][0], &b[0][j], &a[i][1], &b[1][j]);
        Mat2::from_parts(
            self.field,
            [[cell(0, 0), cell(0, 1)], [cell(1, 0), cell(1, 1)]],
        )
    }
}

impl Neg for &Mat2 {
    type Output = Mat2;

    fn neg(self) -> Mat2 {
        self.map(|x| -x)
    }
}

macro_rules! owned_op {
    ($trait:ident, $method:ident) => {
        impl $trait<Mat2> for Mat2 {
            type Output = Mat2;

            fn $method(self, rhs: Mat2) -> Mat2 {
                (&self).$method(&rhs)
            }
        }
    };
}

owned_op!(Add, add);
owned_op!(Sub, sub);
owned_op!(Mul, mul);

/// `A = x f*`.
#[derive(Clone, Debug, PartialEq)]
pub struct RankOneFactor {
    pub x: [Scalar; 2],
    pub f: [Scalar; 2],
}

impl RankOneFactor {
    /// Rejects a zero vector on either side.
    pub fn new(x: [Scalar; 2], f: [Scalar; 2]) -> Result<Self> {
        let kind = x[0].kind();
        for s in x.iter().chain(f.iter()) {
            if s.kind() != kind {
                return Err(Error::FieldMismatch {
                    left: s.kind(),
                    right: kind,
                });
            }
        }
        if x.iter().all(Scalar::is_exact_zero) || f.iter().all(Scalar::is_exact_zero) {
            return Err(Error::RankNotOne);
        }
        Ok(RankOneFactor { x, f })
    }

    /// `⟨x, f⟩ = f*x`.
    pub fn pairing(&self) -> Scalar {
        &(&self.f[0].conj() * &self.x[0]) + &(&self.f[1].conj() * &self.x[1])
    }

    pub fn to_matrix(&self, field: FieldTag) -> Mat2 {
        Mat2::outer(field, &self.x, &self.f)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralSplit {
    pub lambda: Scalar,
    pub nilpotent: Mat2,
    pub discriminant: Scalar,
}

impl SpectralSplit {
    pub fn reassemble(&self) -> Mat2 {
        &Mat2::scalar(*self.nilpotent.field(), self.lambda.clone()) + &self.nilpotent
    }
}
