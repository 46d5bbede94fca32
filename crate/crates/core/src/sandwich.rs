//! Sandwich operators `T ↦ Σ A_i T B_i` and the rank-one identity solver.
//!
//! Matrices are vectorized row-major, `vec(T) = (t11, t12, t21, t22)`, so the
//! operator of a single pair `(A, B)` is `A ⊗ Bᵀ`.

use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::scalar::{FieldTag, Scalar};

pub type Pair = (Mat2, Mat2);

/// Matrix of a linear map on vectorized 2×2 matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct SandwichMatrix {
    pub field: FieldTag,
    pub rows: [[Scalar; 4]; 4],
}

impl SandwichMatrix {
    pub fn apply(&self, t: &Mat2) -> Mat2 {
        let v = t.vec();
        let row = |r: &[Scalar; 4]| {
            r.iter()
                .zip(v.iter())
                .fold(self.field.zero(), |acc, (a, b)| &acc + &(a * b))
        };
        Mat2::from_vec(
            self.field,
            [
                row(&self.rows[0]),
                row(&self.rows[1]),
                row(&self.rows[2]),
                row(&self.rows[3]),
            ],
        )
    }

    pub fn column(&self, c: usize) -> [Scalar; 4] {
        [
            self.rows[0][c].clone(),
            self.rows[1][c].clone(),
            self.rows[2][c].clone(),
            self.rows[3][c].clone(),
        ]
    }

    pub fn approx_eq(&self, other: &SandwichMatrix) -> bool {
        self.rows
            .iter()
            .flatten()
            .zip(other.rows.iter().flatten())
            .all(|(a, b)| self.field.eq(a, b))
    }
}

fn check_pairs(pairs: &[Pair]) -> Result<FieldTag> {
    let (first, _) = pairs.first().ok_or(Error::EmptySystem)?;
    let field = *first.field();
    for (a, b) in pairs {
        a.check_kind(field.kind)?;
        b.check_kind(field.kind)?;
    }
    Ok(field)
}

/// Matrix of `T ↦ Σ A_i T B_i` in the row-major basis `(E11, E12, E21, E22)`.
pub fn sandwich_operator(pairs: &[Pair]) -> Result<SandwichMatrix> {
    let field = check_pairs(pairs)?;
    let zero = field.zero();
    let mut rows: [[Scalar; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| zero.clone()));
    for (a, b) in pairs {
        // (A T B)_{ij} = Σ_{p,q} A_{ip} T_{pq} B_{qj}
        for i in 0..2 {
            for j in 0..2 {
                for p in 0..2 {
                    for q in 0..2 {
                        let cell = &mut rows[2 * i + j][2 * p + q];
                        *cell = &*cell + &(a.get(i, p) * b.get(q, j));
                    }
                }
            }
        }
    }
    Ok(SandwichMatrix { field, rows })
}

/// Direct evaluation of `Σ A_i T B_i`.
pub fn sandwich_apply(pairs: &[Pair], t: &Mat2) -> Mat2 {
    pairs
        .iter()
        .fold(Mat2::zero(*t.field()), |acc, (a, b)| &acc + &(&(a * t) * b))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SandwichSystem {
    pub left: Vec<Pair>,
    pub right: Vec<Pair>,
}

impl SandwichSystem {
    pub fn new(left: Vec<Pair>, right: Vec<Pair>) -> Result<Self> {
        let lf = check_pairs(&left)?;
        let rf = check_pairs(&right)?;
        if lf.kind != rf.kind {
            return Err(Error::FieldMismatch {
                left: lf.kind,
                right: rf.kind,
            });
        }
        Ok(SandwichSystem { left, right })
    }

    pub fn field(&self) -> FieldTag {
        *self.left[0].0.field()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SolveMode {
    /// Requires independent `A_i`; expresses each `B_i` through the `D_j`.
    Forward,
    /// Requires independent `B_i`; expresses each `A_i` through the `C_j`.
    Transpose,
    /// `Forward` when its hypothesis holds, else `Transpose`.
    #[default]
    Auto,
}

impl SolveMode {
    pub fn code(self) -> &'static str {
        match self {
            SolveMode::Forward => "forward",
            SolveMode::Transpose => "transpose",
            SolveMode::Auto => "auto",
        }
    }
}

impl std::str::FromStr for SolveMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "forward" => Ok(SolveMode::Forward),
            "transpose" => Ok(SolveMode::Transpose),
            "auto" => Ok(SolveMode::Auto),
            other => Err(Error::Parse(format!("unknown solve mode `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum IdentityOutcome {
    /// The two sides differ at the rank-one matrix `witness`.
    NotAnIdentity {
        witness: Mat2,
        left: Mat2,
        right: Mat2,
    },
    /// `coefficients[i][j]` is the weight of `D_j` in `B_i` (forward mode) or
    /// of `C_j` in `A_i` (transpose mode).
    Coefficients {
        mode: SolveMode,
        coefficients: Vec<Vec<Scalar>>,
    },
}

/// Decides `Σ A_i T B_i = Σ C_j T D_j` for all rank-one `T` and, when it
/// holds, extracts the linear-combination coefficients.
///
/// Both sides are linear in `T` and the matrix units are rank one and span
/// `M_2`, so comparing the two operators on the units decides the identity.
pub fn rank_one_identity_solve(system: &SandwichSystem, mode: SolveMode) -> Result<IdentityOutcome> {
    let field = system.field();
    let lhs = sandwich_operator(&system.left)?;
    let rhs = sandwich_operator(&system.right)?;
    for c in 0..4 {
        let same = lhs
            .column(c)
            .iter()
            .zip(rhs.column(c).iter())
            .all(|(a, b)| field.eq(a, b));
        if !same {
            let witness = Mat2::unit(field, c / 2, c % 2);
            return Ok(IdentityOutcome::NotAnIdentity {
                left: sandwich_apply(&system.left, &witness),
                right: sandwich_apply(&system.right, &witness),
                witness,
            });
        }
    }

    let forward = || coefficients(field, &system.left, &system.right);
    let transpose = || {
        let swap = |ps: &[Pair]| ps.iter().map(|(a, b)| (b.clone(), a.clone())).collect::<Vec<_>>();
        coefficients(field, &swap(&system.left), &swap(&system.right))
    };
    let (used, table) = match mode {
        SolveMode::Forward => (SolveMode::Forward, forward()),
        SolveMode::Transpose => (SolveMode::Transpose, transpose()),
        SolveMode::Auto => match forward() {
            Some(t) => (SolveMode::Forward, Some(t)),
            None => (SolveMode::Transpose, transpose()),
        },
    };
    match table {
        Some(coefficients) => Ok(IdentityOutcome::Coefficients {
            mode: used,
            coefficients,
        }),
        None => Err(Error::SingularSystem(match mode {
            SolveMode::Forward => "left factors A_i are linearly dependent".into(),
            SolveMode::Transpose => "right factors B_i are linearly dependent".into(),
            SolveMode::Auto => "neither the A_i nor the B_i are linearly independent".into(),
        })),
    }
}

/// For an identity `Σ A_i ⊗ B_i = Σ C_j ⊗ D_j` with independent `A_i`,
/// applies the dual functionals of the `A_i` (extended to a basis of `M_2`
/// by matrix units) to the first tensor factor: `B_i = Σ_j φ_i(C_j) D_j`.
/// Returns `None` when the `A_i` are dependent.
fn coefficients(field: FieldTag, left: &[Pair], right: &[Pair]) -> Option<Vec<Vec<Scalar>>> {
    let lead: Vec<[Scalar; 4]> = left.iter().map(|(a, _)| a.vec()).collect();
    let basis = extend_to_basis(field, &lead)?;
    let table: Vec<Vec<Scalar>> = {
        let solved: Vec<Vec<Scalar>> = right
            .iter()
            .map(|(c, _)| solve_columns(field, &basis, &c.vec()).expect("basis is invertible"))
            .collect();
        (0..left.len())
            .map(|i| solved.iter().map(|col| col[i].clone()).collect())
            .collect()
    };
    for (row, (_, b)) in table.iter().zip(left) {
        let rebuilt = row
            .iter()
            .zip(right)
            .fold(Mat2::zero(field), |acc, (c, (_, d))| &acc + &d.scale(c));
        assert!(
            rebuilt.approx_eq(b),
            "extracted coefficients do not reproduce {b}"
        );
    }
    Some(table)
}

/// Extends independent vectors by standard basis vectors to a basis of F⁴.
/// `None` if the input vectors are dependent.
fn extend_to_basis(field: FieldTag, vectors: &[[Scalar; 4]]) -> Option<Vec<[Scalar; 4]>> {
    if rank(field, vectors) < vectors.len() {
        return None;
    }
    let mut basis = vectors.to_vec();
    for c in 0..4 {
        if basis.len() == 4 {
            break;
        }
        let mut e: [Scalar; 4] = std::array::from_fn(|_| field.zero());
        e[c] = field.one();
        basis.push(e);
        if rank(field, &basis) < basis.len() {
            basis.pop();
        }
    }
    Some(basis)
}

/// Row-reduces a copy of `rows` and returns the row echelon form's rank.
pub fn rank(field: FieldTag, rows: &[[Scalar; 4]]) -> usize {
    let mut m: Vec<Vec<Scalar>> = rows.iter().map(|r| r.to_vec()).collect();
    let mut rank = 0;
    for col in 0..4 {
        let Some(p) = pivot(field, &m, rank, col) else { continue };
        m.swap(rank, p);
        eliminate(&mut m, rank, col);
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

fn pivot(field: FieldTag, m: &[Vec<Scalar>], from: usize, col: usize) -> Option<usize> {
    // largest magnitude for float stability; any nonzero is fine for exact fields
    (from..m.len())
        .filter(|&r| !field.is_zero(&m[r][col]))
        .max_by(|&a, &b| m[a][col].magnitude().total_cmp(&m[b][col].magnitude()))
}

fn eliminate(m: &mut [Vec<Scalar>], prow: usize, col: usize) {
    let inv = m[prow][col].inv().expect("pivot is nonzero");
    let pivot_row: Vec<Scalar> = m[prow].iter().map(|x| x * &inv).collect();
    for (r, row) in m.iter_mut().enumerate() {
        if r == prow {
            continue;
        }
        let factor = row[col].clone();
        if factor.is_exact_zero() {
            continue;
        }
        for (x, p) in row.iter_mut().zip(&pivot_row) {
            *x = &*x - &(&factor * p);
        }
    }
    m[prow] = pivot_row;
}

/// Solves `Σ_c y_c · basis[c] = v` by Gauss–Jordan elimination.
fn solve_columns(field: FieldTag, basis: &[[Scalar; 4]], v: &[Scalar; 4]) -> Option<Vec<Scalar>> {
    let n = basis.len();
    // augmented 4 × (n+1) matrix whose columns are the basis vectors
    let mut m: Vec<Vec<Scalar>> = (0..4)
        .map(|r| {
            let mut row: Vec<Scalar> = basis.iter().map(|b| b[r].clone()).collect();
            row.push(v[r].clone());
            row
        })
        .collect();
    let mut prow = 0;
    for col in 0..n {
        let p = pivot(field, &m, prow, col)?;
        m.swap(prow, p);
        eliminate(&mut m, prow, col);
        prow += 1;
    }
    if m[prow..].iter().any(|row| !field.is_zero(&row[n])) {
        return None;
    }
    Some((0..n).map(|i| m[i][n].clone()).collect())
}
