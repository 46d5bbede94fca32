//! Finite models of maps `Φ` on 2×2 matrices and the strong k-commutativity
//! preserver engine.
//!
//! A map preserves strong k-commutativity when `[Φ(A), Φ(B)]_k = [A, B]_k`.
//! Maps of the form `Φ(A) = λA + h(A)I` with `λ^{k+1} = 1` always do; the
//! decomposer extracts `(λ, h)` from a table and rejects tables that are not
//! of that form.

use std::collections::BTreeMap;

use crate::error::{Error, RejectStage, Result};
use crate::kcomm::kcomm_recursive;
use crate::mat2::Mat2;
use crate::random::Sampler;
use crate::scalar::{roots_of_unity, FieldTag, Scalar};

/// A finitely sampled map: pairs `(A, Φ(A))` with pairwise distinct inputs.
#[derive(Clone, Debug, PartialEq)]
pub struct MapTable {
    pub field: FieldTag,
    pub k: u32,
    pub entries: Vec<(Mat2, Mat2)>,
    pub label: String,
}

impl MapTable {
    pub fn new(field: FieldTag, k: u32, entries: Vec<(Mat2, Mat2)>, label: impl Into<String>) -> Result<Self> {
        for (i, (a, b)) in entries.iter().enumerate() {
            a.check_kind(field.kind)?;
            b.check_kind(field.kind)?;
            let a = a.clone().with_field(field)?;
            if entries[..i].iter().any(|(prev, _)| a.approx_eq(prev)) {
                return Err(Error::DuplicateInput(Box::new(a)));
            }
        }
        let entries = entries
            .into_iter()
            .map(|(a, b)| Ok((a.with_field(field)?, b.with_field(field)?)))
            .collect::<Result<_>>()?;
        Ok(MapTable {
            field,
            k,
            entries,
            label: label.into(),
        })
    }

    pub fn lookup(&self, a: &Mat2) -> Result<&Mat2> {
        self.entries
            .iter()
            .find(|(input, _)| input.approx_eq(a))
            .map(|(_, out)| out)
            .ok_or_else(|| Error::InputNotInTable(Box::new(a.clone())))
    }

    pub fn inputs(&self) -> Vec<Mat2> {
        self.entries.iter().map(|(a, _)| a.clone()).collect()
    }
}

/// `E11, E22, E12, E21, E11 + E12, E12 + E21`: the inputs the decomposer reads.
pub fn probe_set(field: FieldTag) -> Vec<Mat2> {
    let u = |i, j| Mat2::unit(field, i, j);
    vec![
        u(0, 0),
        u(1, 1),
        u(0, 1),
        u(1, 0),
        &u(0, 0) + &u(0, 1),
        &u(0, 1) + &u(1, 0),
    ]
}

/// Every ordered pair, including each input with itself.
pub fn all_pairs(inputs: &[Mat2]) -> Vec<(Mat2, Mat2)> {
    inputs
        .iter()
        .flat_map(|a| inputs.iter().map(move |b| (a.clone(), b.clone())))
        .collect()
}

/// The central part `h` of a canonical-form map.
#[derive(Clone, Debug, PartialEq)]
pub enum HSpec {
    Zero,
    Trace,
    Determinant,
    /// An independent seeded random scalar for each input, in input order.
    Random { seed: u64 },
    Table(Vec<(Mat2, Scalar)>),
}

impl HSpec {
    pub fn values(&self, field: FieldTag, inputs: &[Mat2]) -> Result<Vec<Scalar>> {
        match self {
            HSpec::Zero => Ok(inputs.iter().map(|_| field.zero()).collect()),
            HSpec::Trace => Ok(inputs.iter().map(Mat2::trace).collect()),
            HSpec::Determinant => Ok(inputs.iter().map(Mat2::det).collect()),
            HSpec::Random { seed } => {
                let mut s = Sampler::new(field, *seed);
                Ok(inputs.iter().map(|_| s.scalar()).collect())
            }
            HSpec::Table(rows) => inputs
                .iter()
                .map(|a| {
                    rows.iter()
                        .find(|(input, _)| input.approx_eq(a))
                        .map(|(_, v)| v.clone())
                        .ok_or_else(|| Error::InputNotInTable(Box::new(a.clone())))
                })
                .collect(),
        }
    }
}

/// Checks `λ^{k+1} = 1` under the field policy.
pub fn check_root_of_unity(field: &FieldTag, lambda: &Scalar, k: u32) -> Result<()> {
    let order = k + 1;
    let power = lambda.pow(order);
    if field.eq(&power, &field.one()) {
        Ok(())
    } else {
        Err(Error::LambdaNotRootOfUnity {
            lambda: Box::new(lambda.clone()),
            order,
            power: Box::new(power),
        })
    }
}

/// Tabulates `A ↦ λA + h(A)I` on `inputs`, with no check on `λ`.
pub fn tabulate(field: FieldTag, lambda: &Scalar, h: &HSpec, inputs: &[Mat2], k: u32, label: &str) -> Result<MapTable> {
    if lambda.kind() != field.kind {
        return Err(Error::FieldMismatch {
            left: lambda.kind(),
            right: field.kind,
        });
    }
    let values = h.values(field, inputs)?;
    let entries = inputs
        .iter()
        .zip(values)
        .map(|(a, c)| {
            let out = &a.scale(lambda) + &Mat2::scalar(field, c);
            (a.clone(), out)
        })
        .collect();
    MapTable::new(field, k, entries, label)
}

/// Builds the table of `A ↦ λA + h(A)I`, requiring `k ≥ 1` and `λ^{k+1} = 1`.
pub fn generate_map(field: FieldTag, lambda: &Scalar, h: &HSpec, inputs: &[Mat2], k: u32) -> Result<MapTable> {
    if k == 0 {
        return Err(Error::InvalidOrder(0));
    }
    if lambda.kind() != field.kind {
        return Err(Error::FieldMismatch {
            left: lambda.kind(),
            right: field.kind,
        });
    }
    check_root_of_unity(&field, lambda, k)?;
    tabulate(field, lambda, h, inputs, k, &format!("lambda={lambda}"))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairFailure {
    pub a: Mat2,
    pub b: Mat2,
    /// `[Φ(A), Φ(B)]_k`
    pub mapped: Mat2,
    /// `[A, B]_k`
    pub original: Mat2,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairVerdict {
    pub holds: bool,
    pub checked: usize,
    pub failure: Option<PairFailure>,
}

/// Checks `[Φ(A), Φ(B)]_k = [A, B]_k` on each listed pair, stopping at the first failure.
pub fn verify_preserving(table: &MapTable, pairs: &[(Mat2, Mat2)]) -> Result<PairVerdict> {
    let mut checked = 0;
    for (a, b) in pairs {
        let fa = table.lookup(a)?;
        let fb = table.lookup(b)?;
        let mapped = kcomm_recursive(fa, fb, table.k)?;
        let original = kcomm_recursive(a, b, table.k)?;
        checked += 1;
        if !mapped.approx_eq(&original) {
            return Ok(PairVerdict {
                holds: false,
                checked,
                failure: Some(PairFailure {
                    a: a.clone(),
                    b: b.clone(),
                    mapped,
                    original,
                }),
            });
        }
    }
    Ok(PairVerdict {
        holds: true,
        checked,
        failure: None,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShiftVerdict {
    pub holds: bool,
    /// `Φ(A+B) − Φ(A) − Φ(B)` for each triple, in order.
    pub residues: Vec<Mat2>,
    /// Index of the first triple whose residue is not a multiple of `I`.
    pub failing: Option<usize>,
}

/// Checks that `Φ(A+B) − Φ(A) − Φ(B)` is central for every triple `(A, B, A+B)`.
pub fn central_shift_check(table: &MapTable, triples: &[(Mat2, Mat2, Mat2)]) -> Result<ShiftVerdict> {
    let mut residues = Vec::with_capacity(triples.len());
    let mut failing = None;
    for (i, (a, b, sum)) in triples.iter().enumerate() {
        let r = &(table.lookup(sum)? - table.lookup(a)?) - table.lookup(b)?;
        if failing.is_none() && !r.is_scalar() {
            failing = Some(i);
        }
        residues.push(r);
    }
    Ok(ShiftVerdict {
        holds: failing.is_none(),
        residues,
        failing,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub lambda: Scalar,
    pub h: Vec<(Mat2, Scalar)>,
    pub verified_pairs: usize,
}

impl Decomposition {
    pub fn h_of(&self, a: &Mat2) -> Option<&Scalar> {
        self.h.iter().find(|(m, _)| m.approx_eq(a)).map(|(_, v)| v)
    }
}

/// Extracts `(λ, h)` with `Φ(A) = λA + h(A)I` from a table covering the probe set.
///
/// `λ` is read off `Φ(E11)`, which must be diagonal with distinct diagonal
/// entries. The form is then required entrywise, `λ^{k+1} = 1` is enforced,
/// and the result is cross-validated on all probe pairs.
pub fn decompose(table: &MapTable) -> Result<Decomposition> {
    let field = table.field;
    if table.k == 0 {
        return Err(Error::InvalidOrder(0));
    }
    let probes = probe_set(field);
    let missing: Vec<Mat2> = probes
        .iter()
        .filter(|p| table.lookup(p).is_err())
        .cloned()
        .collect();
    if !missing.is_empty() {
        return Err(Error::ProbeSetIncomplete { missing });
    }

    let d = table.lookup(&probes[0])?;
    let off = Mat2::from_parts(
        field,
        [
            [field.zero(), d.get(0, 1).clone()],
            [d.get(1, 0).clone(), field.zero()],
        ],
    );
    if !off.is_zero() {
        return Err(Error::NotTheoremForm {
            stage: RejectStage::DiagonalProbe,
            residue: Box::new(off),
        });
    }
    let lambda = d.get(0, 0) - d.get(1, 1);
    if field.is_zero(&lambda) {
        return Err(Error::NotTheoremForm {
            stage: RejectStage::ZeroDilation,
            residue: Box::new(d.clone()),
        });
    }
    check_root_of_unity(&field, &lambda, table.k)?;

    let mut h = Vec::with_capacity(table.entries.len());
    for (a, out) in &table.entries {
        let residue = out - &a.scale(&lambda);
        match residue.as_scalar() {
            Some(c) => h.push((a.clone(), c)),
            None => {
                return Err(Error::NotTheoremForm {
                    stage: RejectStage::NonScalarResidue,
                    residue: Box::new(residue),
                })
            }
        }
    }

    let pairs = all_pairs(&probes);
    let verdict = verify_preserving(table, &pairs)?;
    if let Some(failure) = verdict.failure {
        return Err(Error::PreservationFailed(Box::new(failure)));
    }
    Ok(Decomposition {
        lambda,
        h,
        verified_pairs: verdict.checked,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Perturbation {
    /// Canonical form with `λ^{k+1} ≠ 1`.
    BadLambda,
    /// One output shifted by a non-scalar matrix.
    NonScalarShift,
    /// Outputs of two inputs exchanged.
    SwappedEntries,
}

impl Perturbation {
    const ALL: [Perturbation; 3] = [
        Perturbation::BadLambda,
        Perturbation::NonScalarShift,
        Perturbation::SwappedEntries,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Perturbation::BadLambda => "bad-lambda",
            Perturbation::NonScalarShift => "non-scalar-shift",
            Perturbation::SwappedEntries => "swapped-entries",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CampaignReport {
    pub field: FieldTag,
    pub k: u32,
    pub trials: u32,
    pub seed: u64,
    pub valid_cases: u32,
    pub roundtrips: u32,
    pub lambdas: Vec<Scalar>,
    pub perturbed_cases: u32,
    pub rejections: u32,
    pub accepted_impostors: u32,
    /// Rejection error codes and how often each occurred.
    pub rejection_codes: BTreeMap<String, u32>,
    pub anomalies: Vec<String>,
}

impl CampaignReport {
    pub fn is_clean(&self) -> bool {
        self.anomalies.is_empty() && self.accepted_impostors == 0
    }
}

fn iteration_seed(seed: u64, i: u32) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ (u64::from(i).wrapping_add(1)).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn campaign_inputs(s: &mut Sampler) -> Vec<Mat2> {
    let field = s.field();
    let mut inputs = probe_set(field);
    for _ in 0..2 {
        let m = s.matrix();
        if !inputs.iter().any(|p| p.approx_eq(&m)) {
            inputs.push(m);
        }
    }
    inputs
}

fn is_bad_lambda(field: &FieldTag, lambda: &Scalar, k: u32) -> bool {
    let gap = &lambda.pow(k + 1) - &field.one();
    if field.kind.is_exact() {
        !gap.is_exact_zero()
    } else {
        gap.magnitude() > 10.0 * field.tolerance
    }
}

/// Each iteration runs one valid round-trip and one perturbed rejection.
/// Valid maps draw `λ` from the `(k+1)`-th roots of unity in the field and a
/// random `h`; perturbations cycle through [`Perturbation`] kinds. Any
/// round-trip failure or accepted perturbation is recorded as an anomaly.
pub fn probe_campaign(k: u32, field: FieldTag, trials: u32, seed: u64) -> Result<CampaignReport> {
    if k == 0 {
        return Err(Error::InvalidOrder(0));
    }
    let roots = roots_of_unity(&field, k + 1)?;
    let mut report = CampaignReport {
        field,
        k,
        trials,
        seed,
        valid_cases: 0,
        roundtrips: 0,
        lambdas: Vec::new(),
        perturbed_cases: 0,
        rejections: 0,
        accepted_impostors: 0,
        rejection_codes: BTreeMap::new(),
        anomalies: Vec::new(),
    };

    for i in 0..trials {
        let iseed = iteration_seed(seed, i);
        let mut s = Sampler::new(field, iseed);

        // valid canonical-form map
        let lambda = s.choose(&roots).clone();
        if !report.lambdas.iter().any(|l| field.eq(l, &lambda)) {
            report.lambdas.push(lambda.clone());
        }
        let inputs = campaign_inputs(&mut s);
        let h = HSpec::Random { seed: iseed };
        report.valid_cases += 1;
        match round_trip(field, &lambda, &h, &inputs, k) {
            Ok(()) => report.roundtrips += 1,
            Err(msg) => report.anomalies.push(format!("iteration {i}: {msg}")),
        }

        // perturbed map
        let kind = Perturbation::ALL[i as usize % Perturbation::ALL.len()];
        report.perturbed_cases += 1;
        let table = perturbed_table(&mut s, kind, &lambda, &h, &inputs, k)?;
        match decompose(&table) {
            Ok(_) => {
                report.accepted_impostors += 1;
                report
                    .anomalies
                    .push(format!("iteration {i}: {} map accepted", kind.code()));
            }
            Err(err) => match check_rejection(&table, &err) {
                Ok(()) => {
                    report.rejections += 1;
                    *report.rejection_codes.entry(err.code().to_string()).or_default() += 1;
                }
                Err(msg) => report
                    .anomalies
                    .push(format!("iteration {i}: {} rejection: {msg}", kind.code())),
            },
        }
    }
    Ok(report)
}

fn round_trip(field: FieldTag, lambda: &Scalar, h: &HSpec, inputs: &[Mat2], k: u32) -> std::result::Result<(), String> {
    let table = generate_map(field, lambda, h, inputs, k).map_err(|e| e.to_string())?;
    let verdict = verify_preserving(&table, &all_pairs(inputs)).map_err(|e| e.to_string())?;
    if !verdict.holds {
        return Err("canonical map failed preservation".into());
    }
    let dec = decompose(&table).map_err(|e| format!("decompose rejected canonical map: {e}"))?;
    if !field.eq(&dec.lambda, lambda) {
        return Err(format!("lambda {} recovered as {}", lambda, dec.lambda));
    }
    let expected = h.values(field, inputs).map_err(|e| e.to_string())?;
    for (a, want) in inputs.iter().zip(&expected) {
        match dec.h_of(a) {
            Some(got) if field.eq(got, want) => {}
            other => return Err(format!("h({a}) = {want} recovered as {other:?}")),
        }
    }
    Ok(())
}

fn perturbed_table(
    s: &mut Sampler,
    kind: Perturbation,
    lambda: &Scalar,
    h: &HSpec,
    inputs: &[Mat2],
    k: u32,
) -> Result<MapTable> {
    let field = s.field();
    let label = kind.code();
    match kind {
        Perturbation::BadLambda => {
            let bad = loop {
                let c = s.nonzero_scalar();
                if is_bad_lambda(&field, &c, k) {
                    break c;
                }
            };
            tabulate(field, &bad, h, inputs, k, label)
        }
        Perturbation::NonScalarShift => {
            let mut table = tabulate(field, lambda, h, inputs, k, label)?;
            let shift = loop {
                let m = s.nonzero_matrix();
                if !m.is_scalar() {
                    break m;
                }
            };
            let idx = s.index(table.entries.len());
            let out = &table.entries[idx].1 + &shift;
            table.entries[idx].1 = out;
            Ok(table)
        }
        Perturbation::SwappedEntries => {
            let mut table = tabulate(field, lambda, h, inputs, k, label)?;
            let n = table.entries.len();
            let i = s.index(n);
            let j = (i + 1 + s.index(n - 1)) % n;
            let (oi, oj) = (table.entries[i].1.clone(), table.entries[j].1.clone());
            table.entries[i].1 = oj;
            table.entries[j].1 = oi;
            Ok(table)
        }
    }
}

/// A rejection must be one of the structural kinds, reproduce on a second run,
/// and carry evidence that checks out on its own.
fn check_rejection(table: &MapTable, err: &Error) -> std::result::Result<(), String> {
    match decompose(table) {
        Err(again) if &again == err => {}
        other => return Err(format!("not reproducible: {err} then {other:?}")),
    }
    match err {
        Error::NotTheoremForm { stage, residue } => {
            let ok = match stage {
                RejectStage::DiagonalProbe => !residue.is_zero(),
                RejectStage::ZeroDilation => residue.is_scalar(),
                RejectStage::NonScalarResidue => !residue.is_scalar(),
            };
            if ok {
                Ok(())
            } else {
                Err(format!("residue {residue} does not witness {}", stage.code()))
            }
        }
        Error::LambdaNotRootOfUnity { lambda, order, .. } => {
            if check_root_of_unity(&table.field, lambda, order - 1).is_err() {
                Ok(())
            } else {
                Err(format!("{lambda} is a root of unity"))
            }
        }
        Error::PreservationFailed(f) => {
            let mapped = kcomm_recursive(table.lookup(&f.a).map_err(|e| e.to_string())?, table.lookup(&f.b).map_err(|e| e.to_string())?, table.k)
                .map_err(|e| e.to_string())?;
            let original = kcomm_recursive(&f.a, &f.b, table.k).map_err(|e| e.to_string())?;
            if mapped.approx_eq(&original) {
                Err("reported pair actually preserves the bracket".into())
            } else {
                Ok(())
            }
        }
        other => Err(format!("unexpected rejection kind {}", other.code())),
    }
}
