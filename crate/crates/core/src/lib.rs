//! k-commutator calculus on 2×2 matrices.
//!
//! `[A, B]_k` is the k-fold iterated commutator `[[A, B]_{k-1}, B]`. This crate
//! evaluates it exactly over ℚ and ℚ(i) (and approximately over `f64` reals
//! and complexes), classifies matrices by the vanishing of such brackets, and
//! recognizes maps satisfying `[Φ(A), Φ(B)]_k = [A, B]_k` in the form
//! `Φ(A) = λA + h(A)I` with `λ^{k+1} = 1`.

pub mod classify;
pub mod error;
pub mod gauss;
pub mod json;
pub mod kcomm;
pub mod mat2;
pub mod preserver;
pub mod random;
pub mod sandwich;
pub mod scalar;

pub use classify::{
    scalar_plus_nilpotent_kcomm, scalar_plus_nilpotent_spectral, scalar_witness_test, SpectralVerdict, Verdict,
};
pub use error::{Error, RejectStage, Result};
pub use kcomm::{
    kcomm, kcomm_closed, kcomm_eigenpair, kcomm_idempotent_fast, kcomm_nilpotent_fast, kcomm_recursive, Method,
};
pub use mat2::{Mat2, RankOneFactor, SpectralSplit};
pub use preserver::{
    central_shift_check, decompose, generate_map, probe_campaign, probe_set, verify_preserving, CampaignReport,
    Decomposition, HSpec, MapTable,
};
pub use sandwich::{rank_one_identity_solve, sandwich_operator, IdentityOutcome, SandwichSystem, SolveMode};
pub use scalar::{roots_of_unity, scalar_eq, FieldKind, FieldTag, Scalar};
