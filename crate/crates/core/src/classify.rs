//! Scalar and scalar-plus-nilpotent classifiers.
//!
//! A matrix `Z` is scalar iff `[Z, A]_k = 0` for every rank-one idempotent `A`;
//! a matrix `S` is `λI + N` with `N² = 0` iff `[A, S]_k = 0` for every rank-one
//! `A` (when `k ≥ 3`). Both universally quantified conditions are replaced here
//! by finite checks: a fixed witness set for the first, and matrix units plus
//! seeded random rank-one samples for the second.

use crate::error::{Error, Result};
use crate::kcomm::kcomm_recursive;
use crate::mat2::{Mat2, SpectralSplit};
use crate::random::Sampler;
use crate::scalar::{FieldTag, Scalar};

pub const DEFAULT_TRIALS: u32 = 32;

/// Outcome of a universally quantified bracket condition checked on finitely
/// many inputs. When `holds` is false, `witness` is an input where the
/// condition fails and `detail` the nonzero bracket there.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Mat2>,
    pub detail: Option<Mat2>,
}

impl Verdict {
    pub fn pass() -> Self {
        Verdict {
            holds: true,
            witness: None,
            detail: None,
        }
    }

    pub fn fail(witness: Mat2, detail: Mat2) -> Self {
        Verdict {
            holds: false,
            witness: Some(witness),
            detail: Some(detail),
        }
    }
}

/// The rank-one idempotents `E11`, `E22`, `E11 + E12`, `E11 + E21` and the
/// all-halves projector, in that order.
pub fn idempotent_witnesses(field: FieldTag) -> Vec<Mat2> {
    let half = Scalar::ratio(field.kind, 1, 2);
    vec![
        Mat2::unit(field, 0, 0),
        Mat2::unit(field, 1, 1),
        Mat2::from_i64(field, [[1, 1], [0, 0]]),
        Mat2::from_i64(field, [[1, 0], [1, 0]]),
        Mat2::from_i64(field, [[1, 1], [1, 1]]).scale(&half),
    ]
}

/// Decides whether `z` is a scalar matrix by evaluating `[z, A]_k` on the
/// idempotent witness set.
pub fn scalar_witness_test(z: &Mat2, k: u32) -> Result<Verdict> {
    if k == 0 {
        return Err(Error::InvalidOrder(0));
    }
    let mut verdict = Verdict::pass();
    for w in idempotent_witnesses(*z.field()) {
        let bracket = kcomm_recursive(z, &w, k)?;
        if !bracket.is_zero() {
            verdict = Verdict::fail(w, bracket);
            break;
        }
    }
    if z.kind().is_exact() {
        assert_eq!(
            verdict.holds,
            z.is_scalar(),
            "witness test disagrees with direct scalar check for {z}"
        );
    }
    Ok(verdict)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralVerdict {
    pub verdict: Verdict,
    pub discriminant: Scalar,
    pub split: Option<SpectralSplit>,
}

/// Exact classifier: `S = λI + N` iff `tr(S)² − 4 det(S) = 0`.
///
/// On failure the witness is the first matrix unit that does not commute
/// with `S` and the detail is that commutator.
pub fn scalar_plus_nilpotent_spectral(s: &Mat2) -> SpectralVerdict {
    match s.spectral_split() {
        Ok(split) => SpectralVerdict {
            verdict: Verdict::pass(),
            discriminant: split.discriminant.clone(),
            split: Some(split),
        },
        Err(Error::NotScalarPlusNilpotent { discriminant }) => {
            let field = *s.field();
            let verdict = units(field)
                .into_iter()
                .map(|e| {
                    let c = e.commutator(s);
                    (e, c)
                })
                .find(|(_, c)| !c.is_zero())
                .map(|(e, c)| Verdict::fail(e, c))
                .expect("nonzero discriminant implies a non-scalar matrix");
            SpectralVerdict {
                verdict,
                discriminant,
                split: None,
            }
        }
        Err(other) => unreachable!("spectral_split only fails with NotScalarPlusNilpotent, got {other}"),
    }
}

fn units(field: FieldTag) -> Vec<Mat2> {
    vec![
        Mat2::unit(field, 0, 0),
        Mat2::unit(field, 0, 1),
        Mat2::unit(field, 1, 0),
        Mat2::unit(field, 1, 1),
    ]
}

/// Sampled certifier: checks `[A, S]_k = 0` for the four matrix units and
/// `trials` seeded random rank-one matrices. The spectral test is the
/// authoritative classifier.
pub fn scalar_plus_nilpotent_kcomm(s: &Mat2, k: u32, trials: u32, seed: u64) -> Result<Verdict> {
    if k < 3 {
        return Err(Error::KTooSmall { k, min: 3 });
    }
    let field = *s.field();
    let mut sampler = Sampler::new(field, seed);
    let samples = units(field)
        .into_iter()
        .chain((0..trials).map(|_| sampler.rank_one()));
    for a in samples {
        let bracket = kcomm_recursive(&a, s, k)?;
        if !bracket.is_zero() {
            return Ok(Verdict::fail(a, bracket));
        }
    }
    Ok(Verdict::pass())
}
