//! Seeded generators for scalars and matrices.
//!
//! Exact fields draw small rationals (numerators in `-5..=5`, denominators in
//! `1..=4`); float fields draw unit-scale values uniformly from `[-1, 1]`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mat2::{Mat2, RankOneFactor};
use crate::scalar::{FieldKind, FieldTag, Scalar};

pub struct Sampler {
    rng: ChaCha8Rng,
    field: FieldTag,
}

impl Sampler {
    pub fn new(field: FieldTag, seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            field,
        }
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn small_rational(&mut self) -> BigRational {
        let n: i64 = self.rng.gen_range(-5..=5);
        let d: i64 = self.rng.gen_range(1..=4);
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    pub fn scalar(&mut self) -> Scalar {
        match self.field.kind {
            FieldKind::RationalQ => Scalar::Rational(self.small_rational()),
            FieldKind::GaussianQi => {
                let re = self.small_rational();
                let im = self.small_rational();
                Scalar::Gaussian(crate::gauss::GaussRat::new(&re, &im))
            }
            FieldKind::FloatR => Scalar::Real(self.rng.gen_range(-1.0..=1.0)),
            FieldKind::FloatC => Scalar::Complex(Complex64::new(
                self.rng.gen_range(-1.0..=1.0),
                self.rng.gen_range(-1.0..=1.0),
            )),
        }
    }

    /// A scalar bounded away from zero (exactly nonzero, or `|s| > 0.1` for floats).
    pub fn nonzero_scalar(&mut self) -> Scalar {
        loop {
            let s = self.scalar();
            if s.magnitude() > 0.1 {
                return s;
            }
        }
    }

    pub fn vector(&mut self) -> [Scalar; 2] {
        [self.scalar(), self.scalar()]
    }

    pub fn nonzero_vector(&mut self) -> [Scalar; 2] {
        loop {
            let v = self.vector();
            if v.iter().map(Scalar::magnitude).fold(0.0, f64::max) > 0.1 {
                return v;
            }
        }
    }

    pub fn matrix(&mut self) -> Mat2 {
        let e = [[self.scalar(), self.scalar()], [self.scalar(), self.scalar()]];
        Mat2::from_parts(self.field, e)
    }

    pub fn nonzero_matrix(&mut self) -> Mat2 {
        loop {
            let m = self.matrix();
            if m.norm_inf() > 0.1 {
                return m;
            }
        }
    }

    pub fn rank_one_factor(&mut self) -> RankOneFactor {
        RankOneFactor {
            x: self.nonzero_vector(),
            f: self.nonzero_vector(),
        }
    }

    pub fn rank_one(&mut self) -> Mat2 {
        let field = self.field;
        self.rank_one_factor().to_matrix(field)
    }

    /// `c·I + N` with `N` a random nonzero square-zero matrix.
    pub fn scalar_plus_nilpotent(&mut self) -> Mat2 {
        let c = self.scalar();
        let x = self.nonzero_vector();
        let t = self.nonzero_scalar();
        // N = x·g* with g*·x = 0
        let n = Mat2::from_parts(
            self.field,
            [
                [&x[0] * &(-&(&t * &x[1])), &x[0] * &(&t * &x[0])],
                [&x[1] * &(-&(&t * &x[1])), &x[1] * &(&t * &x[0])],
            ],
        );
        &Mat2::scalar(self.field, c) + &n
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn choose<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.rng.gen_range(0..items.len())]
    }
}
