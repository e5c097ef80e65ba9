//! Generalized Gell-Mann operator bases and their partition into the `N`
//! groups of `M - 1` operators consumed by the POVM construction.
//!
//! Canonical order for dimension `d`: for each pair `j < k` in
//! lexicographic order the symmetric operator `(|j⟩⟨k| + |k⟩⟨j|)/√2`
//! followed by the antisymmetric `(-i|j⟩⟨k| + i|k⟩⟨j|)/√2`, then the `d - 1`
//! diagonal operators `diag(1,…,1,-m,0,…,0)/√(m(m+1))`. The normalized
//! identity `I/√d` completes the basis and is never stored.

use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matkernel::{ComplexMatrix, I};

/// Which Gell-Mann family a basis operator belongs to. Indices are zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GellMannKind {
    Symmetric { j: usize, k: usize },
    Antisymmetric { j: usize, k: usize },
    /// `m` ones followed by `-m`, for `m = 1..d-1`.
    Diagonal { m: usize },
}

#[derive(Debug, Clone)]
pub struct OperatorBasis {
    d: usize,
    ops: Vec<ComplexMatrix>,
    kinds: Vec<GellMannKind>,
}

impl OperatorBasis {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    pub fn kinds(&self) -> &[GellMannKind] {
        &self.kinds
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Canonical position of a given operator.
    pub fn index_of(&self, kind: GellMannKind) -> Option<usize> {
        self.kinds.iter().position(|&k| k == kind)
    }

    /// `I/√d` followed by the stored operators.
    pub fn with_identity(&self) -> Vec<ComplexMatrix> {
        let mut all = Vec::with_capacity(self.ops.len() + 1);
        all.push(ComplexMatrix::identity(self.d).scale(1.0 / (self.d as f64).sqrt()));
        all.extend(self.ops.iter().cloned());
        all
    }
}

pub fn gellmann_basis(d: usize) -> Result<OperatorBasis> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut ops = Vec::with_capacity(d * d - 1);
    let mut kinds = Vec::with_capacity(d * d - 1);
    for j in 0..d {
        for k in (j + 1)..d {
            let mut sym = ComplexMatrix::zeros(d, d);
            sym[(j, k)] = Complex64::new(s, 0.0);
            sym[(k, j)] = Complex64::new(s, 0.0);
            ops.push(sym);
            kinds.push(GellMannKind::Symmetric { j, k });

            let mut anti = ComplexMatrix::zeros(d, d);
            anti[(j, k)] = -I * s;
            anti[(k, j)] = I * s;
            ops.push(anti);
            kinds.push(GellMannKind::Antisymmetric { j, k });
        }
    }
    for m in 1..d {
        let norm = 1.0 / ((m * (m + 1)) as f64).sqrt();
        let mut diag = vec![0.0; d];
        diag[..m].iter_mut().for_each(|v| *v = norm);
        diag[m] = -(m as f64) * norm;
        ops.push(ComplexMatrix::diag(&diag));
        kinds.push(GellMannKind::Diagonal { m });
    }
    Ok(OperatorBasis { d, ops, kinds })
}

/// How canonical basis operators are distributed over the `N` groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupingScheme {
    /// Canonical order cut into `N` consecutive blocks of `M - 1`.
    Sequential,
    /// The `(5,4)` grouping for `d = 4`: three antisymmetric operators on
    /// pairs through level 0, then mixed blocks, the symmetric operators
    /// with level 3, and the three diagonals last.
    Ququart54,
    /// The `(8,2)` ordering for `d = 3`: sym/antisym for (0,1), (0,2),
    /// (1,2), then both diagonals. This coincides with the canonical order.
    Qutrit82,
    /// Position `i` of the flattened grouping holds canonical operator `perm[i]`.
    Explicit(Vec<usize>),
}

impl GroupingScheme {
    pub fn name(&self) -> &'static str {
        match self {
            GroupingScheme::Sequential => "sequential",
            GroupingScheme::Ququart54 => "appendix-A",
            GroupingScheme::Qutrit82 => "appendix-B",
            GroupingScheme::Explicit(_) => "explicit",
        }
    }
}

impl FromStr for GroupingScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sequential" | "seq" => Ok(GroupingScheme::Sequential),
            "appendix-a" | "ququart-5x4" => Ok(GroupingScheme::Ququart54),
            "appendix-b" | "qutrit-8x2" => Ok(GroupingScheme::Qutrit82),
            other => Err(Error::ParameterOutOfRange(format!(
                "unknown grouping scheme `{other}` (expected sequential, appendix-A, appendix-B)"
            ))),
        }
    }
}

/// On-disk form of an explicit grouping.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupingFile {
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub perm: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct GroupedBasis {
    d: usize,
    n: usize,
    m: usize,
    perm: Vec<usize>,
    groups: Vec<Vec<ComplexMatrix>>,
}

impl GroupedBasis {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn groups(&self) -> &[Vec<ComplexMatrix>] {
        &self.groups
    }

    /// Canonical index behind each flattened grouped position.
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// `G_α = Σ_k G_{α,k}`.
    pub fn group_sum(&self, alpha: usize) -> ComplexMatrix {
        let mut sum = ComplexMatrix::zeros(self.d, self.d);
        for g in &self.groups[alpha] {
            sum = &sum + g;
        }
        sum
    }

    pub fn flattened(&self) -> impl Iterator<Item = &ComplexMatrix> {
        self.groups.iter().flatten()
    }

    pub fn to_file(&self) -> GroupingFile {
        GroupingFile { d: self.d, n: self.n, m: self.m, perm: self.perm.clone() }
    }
}

fn pair_index(d: usize, j: usize, k: usize) -> usize {
    (0..j).map(|a| d - 1 - a).sum::<usize>() + (k - j - 1)
}

fn canonical_position(d: usize, kind: GellMannKind) -> usize {
    match kind {
        GellMannKind::Symmetric { j, k } => 2 * pair_index(d, j, k),
        GellMannKind::Antisymmetric { j, k } => 2 * pair_index(d, j, k) + 1,
        GellMannKind::Diagonal { m } => d * (d - 1) + m - 1,
    }
}

fn ququart54_permutation() -> Vec<usize> {
    use GellMannKind::{Antisymmetric as A, Diagonal as D, Symmetric as S};
    [
        A { j: 0, k: 1 },
        A { j: 0, k: 2 },
        A { j: 0, k: 3 },
        S { j: 0, k: 1 },
        A { j: 1, k: 2 },
        A { j: 1, k: 3 },
        S { j: 0, k: 2 },
        S { j: 1, k: 2 },
        A { j: 2, k: 3 },
        S { j: 0, k: 3 },
        S { j: 1, k: 3 },
        S { j: 2, k: 3 },
        D { m: 1 },
        D { m: 2 },
        D { m: 3 },
    ]
    .into_iter()
    .map(|kind| canonical_position(4, kind))
    .collect()
}

pub fn group_basis(basis: &OperatorBasis, n: usize, m: usize, scheme: &GroupingScheme) -> Result<GroupedBasis> {
    let d = basis.d;
    let count = d * d - 1;
    if m < 2 || n == 0 || n * (m - 1) != count {
        return Err(Error::CountMismatch { got: n * m.saturating_sub(1), expected: count });
    }
    let perm = match scheme {
        GroupingScheme::Sequential => (0..count).collect(),
        GroupingScheme::Ququart54 => {
            if d != 4 {
                return Err(Error::SchemeDimensionMismatch { scheme: scheme.name().into(), required: 4, got: d });
            }
            if (n, m) != (5, 4) {
                return Err(Error::ParameterOutOfRange(format!(
                    "scheme appendix-A is a (5,4) grouping, requested ({n},{m})"
                )));
            }
            ququart54_permutation()
        }
        GroupingScheme::Qutrit82 => {
            if d != 3 {
                return Err(Error::SchemeDimensionMismatch { scheme: scheme.name().into(), required: 3, got: d });
            }
            if (n, m) != (8, 2) {
                return Err(Error::ParameterOutOfRange(format!(
                    "scheme appendix-B is an (8,2) grouping, requested ({n},{m})"
                )));
            }
            (0..count).collect()
        }
        GroupingScheme::Explicit(perm) => {
            validate_permutation(perm, count)?;
            perm.clone()
        }
    };
    let groups = perm
        .chunks(m - 1)
        .map(|chunk| chunk.iter().map(|&i| basis.ops[i].clone()).collect())
        .collect();
    Ok(GroupedBasis { d, n, m, perm, groups })
}

/// Grouped basis from a grouping file, checked against `gellmann_basis(d)`.
pub fn group_from_file(file: &GroupingFile) -> Result<GroupedBasis> {
    let basis = gellmann_basis(file.d)?;
    group_basis(&basis, file.n, file.m, &GroupingScheme::Explicit(file.perm.clone()))
}

fn validate_permutation(perm: &[usize], count: usize) -> Result<()> {
    if perm.len() != count {
        return Err(Error::InvalidPermutation(format!("length {} but expected {count}", perm.len())));
    }
    let mut seen = vec![false; count];
    for &p in perm {
        if p >= count || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidPermutation(format!("index {p} out of range or repeated")));
        }
    }
    Ok(())
}
