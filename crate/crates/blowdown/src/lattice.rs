//! Exact integral lattices: Gram matrices, characteristic classes, and the
//! integer linear algebra (Hermite forms, kernels, determinants, inertia)
//! that the rest of the crate is built on.
//!
//! All arithmetic is exact. Coordinates and Gram entries are arbitrary
//! precision integers; rational numbers appear only inside the inertia
//! computation and in projection squares, never floating point.
//!
//! Conventions used throughout the crate:
//!
//! * A lattice of signature `(1, n)` is presented in a diagonal basis
//!   `h, e1, ..., en` with `h^2 = 1` and `ei^2 = -1`. Coordinate `0` is the
//!   `h` coefficient.
//! * The pairing of `v` and `w` is `v^T G w` for the Gram matrix `G`.
//! * A class `K` is characteristic when `K.v ≡ v.v (mod 2)` for every `v`;
//!   it suffices to check `v` over a basis.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An integer matrix, stored by rows.
pub(crate) type Mat = Vec<Vec<BigInt>>;

// ---------------------------------------------------------------------------
// ClassVector
// ---------------------------------------------------------------------------

/// A homology class written in the coordinates of some fixed basis.
///
/// The vector does not know its lattice; pair it through [`Lattice::inner`].
/// Ordering is lexicographic on coordinates, which the search and report
/// layers use for canonical output order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassVector {
    coords: Vec<BigInt>,
}

impl ClassVector {
    /// Wraps raw coordinates.
    pub fn new(coords: Vec<BigInt>) -> Self {
        ClassVector { coords }
    }

    /// Builds a vector from machine integers.
    pub fn from_i64(coords: &[i64]) -> Self {
        ClassVector {
            coords: coords.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    /// The zero vector of the given dimension.
    pub fn zero(dim: usize) -> Self {
        ClassVector {
            coords: vec![BigInt::zero(); dim],
        }
    }

    /// The standard basis vector with a 1 in position `index`.
    pub fn standard_basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zero(dim);
        v.coords[index] = BigInt::one();
        v
    }

    /// Number of coordinates.
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Coordinate slice.
    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// Single coordinate.
    pub fn coord(&self, i: usize) -> &BigInt {
        &self.coords[i]
    }

    /// True when every coordinate vanishes.
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        ClassVector {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    /// Coordinatewise sum. Panics on dimension mismatch (internal use is
    /// always dimension-checked at the lattice boundary).
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "vector dimension mismatch");
        ClassVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Coordinatewise difference.
    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Scalar multiple.
    pub fn scale(&self, k: &BigInt) -> Self {
        ClassVector {
            coords: self.coords.iter().map(|c| c * k).collect(),
        }
    }

    /// Appends `extra` zero coordinates (ambient extension under blow-up).
    pub fn extended(&self, extra: usize) -> Self {
        let mut coords = self.coords.clone();
        coords.extend(std::iter::repeat_with(BigInt::zero).take(extra));
        ClassVector { coords }
    }

    /// Renders the vector in `h`/`e` notation for a diagonal `(1, n)` basis,
    /// e.g. `6h - 2e1 - 2e2` or `e10 - e11`; the zero vector prints as `0`.
    pub fn format_he(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let gen = if i == 0 {
                "h".to_string()
            } else {
                format!("e{i}")
            };
            let mag = c.abs();
            let coef = if mag.is_one() {
                String::new()
            } else {
                mag.to_string()
            };
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(&coef);
            out.push_str(&gen);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Parses `h`/`e` notation (`6h-2e1-2e2`, `e10 - e11`, `0`, `-h+e1`)
    /// into a vector of dimension `dim` (so `e(dim-1)` is the last generator).
    pub fn parse_he(text: &str, dim: usize) -> Result<Self> {
        let bad = |reason: String| Error::precondition("parse_he", reason);
        let mut coords = vec![BigInt::zero(); dim];
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(bad("empty class expression".into()));
        }
        if s == "0" {
            return Ok(ClassVector { coords });
        }
        let mut rest = s.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let sign = if let Some(r) = rest.strip_prefix('-') {
                rest = r;
                -1
            } else if let Some(r) = rest.strip_prefix('+') {
                rest = r;
                1
            } else if first {
                1
            } else {
                return Err(bad(format!("expected '+' or '-' before \"{rest}\"")));
            };
            first = false;
            let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
            rest = &rest[digits.len()..];
            let coef: BigInt = if digits.is_empty() {
                BigInt::one()
            } else {
                digits.parse().expect("digit string parses")
            };
            let index = if let Some(r) = rest.strip_prefix('h') {
                rest = r;
                0
            } else if let Some(r) = rest.strip_prefix('e') {
                let idx_digits: String = r.chars().take_while(|c| c.is_ascii_digit()).collect();
                if idx_digits.is_empty() {
                    return Err(bad("generator 'e' needs an index".into()));
                }
                rest = &r[idx_digits.len()..];
                let idx: usize = idx_digits
                    .parse()
                    .map_err(|_| bad(format!("bad generator index \"{idx_digits}\"")))?;
                if idx == 0 || idx >= dim {
                    return Err(bad(format!(
                        "generator e{idx} out of range for {} exceptional classes",
                        dim.saturating_sub(1)
                    )));
                }
                idx
            } else {
                return Err(bad(format!("expected generator at \"{rest}\"")));
            };
            coords[index] += coef * sign;
        }
        Ok(ClassVector { coords })
    }
}

impl fmt::Display for ClassVector {
    /// Tuple form `(a; b1, ..., bn)`: the leading coordinate set off by a
    /// semicolon, matching the usual notation for `(1, n)` lattices.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.coords.split_first() {
            None => write!(f, "()"),
            Some((a, rest)) if rest.is_empty() => write!(f, "({a})"),
            Some((a, rest)) => {
                write!(f, "({a};")?;
                for (i, c) in rest.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, " {c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Lattice
// ---------------------------------------------------------------------------

/// Inertia of a symmetric bilinear form: the number of positive, negative,
/// and zero eigenvalue signs (computed exactly, no floating point).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero == 0 {
            write!(f, "({}, {})", self.positive, self.negative)
        } else {
            write!(
                f,
                "({}, {}, {} null)",
                self.positive, self.negative, self.zero
            )
        }
    }
}

/// A finitely generated free abelian group with a symmetric integer pairing,
/// presented by its Gram matrix in a fixed basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    gram: Mat,
    label: String,
}

impl Lattice {
    /// Builds a lattice from a Gram matrix, checking shape and symmetry.
    pub fn from_gram(gram: Mat, label: impl Into<String>) -> Result<Self> {
        let n = gram.len();
        for (i, row) in gram.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(Lattice {
            gram,
            label: label.into(),
        })
    }

    /// The odd unimodular lattice `diag(+1 x pos, -1 x neg)`; for `pos = 1`
    /// this is the standard `(1, n)` basis `h, e1, ..., en`.
    pub fn diagonal(pos: usize, neg: usize) -> Self {
        let n = pos + neg;
        let mut gram = vec![vec![BigInt::zero(); n]; n];
        for (i, row) in gram.iter_mut().enumerate() {
            row[i] = if i < pos {
                BigInt::one()
            } else {
                -BigInt::one()
            };
        }
        Lattice {
            gram,
            label: format!("diag({pos},{neg})"),
        }
    }

    /// Number of basis vectors.
    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    /// Human-readable label carried through reports.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Replaces the label (builders use this to tag derived lattices).
    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// The Gram matrix, by rows.
    pub fn gram(&self) -> &[Vec<BigInt>] {
        &self.gram
    }

    /// Single Gram entry.
    pub fn gram_entry(&self, i: usize, j: usize) -> &BigInt {
        &self.gram[i][j]
    }

    fn check_dim(&self, v: &ClassVector) -> Result<()> {
        if v.dim() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: v.dim(),
            });
        }
        Ok(())
    }

    /// Exact pairing `v . w = v^T G w`.
    pub fn inner(&self, v: &ClassVector, w: &ClassVector) -> Result<BigInt> {
        self.check_dim(v)?;
        self.check_dim(w)?;
        let mut total = BigInt::zero();
        for (i, vi) in v.coords.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            let mut row = BigInt::zero();
            for (j, wj) in w.coords.iter().enumerate() {
                if !wj.is_zero() {
                    row += &self.gram[i][j] * wj;
                }
            }
            total += vi * row;
        }
        Ok(total)
    }

    /// Self-pairing `v . v`.
    pub fn square(&self, v: &ClassVector) -> Result<BigInt> {
        self.inner(v, v)
    }

    /// True when `k . v ≡ v . v (mod 2)` for every basis vector `v` (and
    /// hence for every class).
    pub fn is_characteristic(&self, k: &ClassVector) -> Result<bool> {
        self.check_dim(k)?;
        let two = BigInt::from(2);
        for i in 0..self.rank() {
            let pairing: BigInt = (0..self.rank()).map(|j| &k.coords[j] * &self.gram[j][i]).sum();
            if (pairing - &self.gram[i][i]).mod_floor(&two) != BigInt::zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Returns `Err(NotCharacteristic)` naming the first offending basis
    /// vector; used by operations that require characteristic input.
    pub fn require_characteristic(&self, k: &ClassVector) -> Result<()> {
        self.check_dim(k)?;
        let two = BigInt::from(2);
        for i in 0..self.rank() {
            let pairing: BigInt = (0..self.rank()).map(|j| &k.coords[j] * &self.gram[j][i]).sum();
            if (pairing - &self.gram[i][i]).mod_floor(&two) != BigInt::zero() {
                return Err(Error::NotCharacteristic { index: i });
            }
        }
        Ok(())
    }

    /// Exact determinant of the Gram matrix (fraction-free elimination).
    pub fn determinant(&self) -> BigInt {
        bareiss_determinant(self.gram.clone())
    }

    /// Exact inertia, via symmetric congruence over the rationals.
    pub fn signature(&self) -> Signature {
        rational_inertia(&self.gram)
    }

    /// True when the form has a nonzero radical.
    pub fn is_degenerate(&self) -> bool {
        self.determinant().is_zero()
    }

    /// True when the determinant is +1 or -1.
    pub fn is_unimodular(&self) -> bool {
        self.determinant().abs().is_one()
    }

    /// A lattice is odd when some class has odd square; it suffices to look
    /// at the Gram diagonal.
    pub fn is_odd(&self) -> bool {
        self.gram.iter().enumerate().any(|(i, row)| row[i].is_odd())
    }

    /// Recognizes the Gram matrix `diag(+1, -1, ..., -1)` and returns `n`
    /// (the number of `-1`s) when it matches.
    pub fn as_diagonal_one_n(&self) -> Option<usize> {
        let r = self.rank();
        if r == 0 {
            return None;
        }
        let one = BigInt::one();
        for i in 0..r {
            for j in 0..r {
                let expect = if i != j {
                    BigInt::zero()
                } else if i == 0 {
                    one.clone()
                } else {
                    -one.clone()
                };
                if self.gram[i][j] != expect {
                    return None;
                }
            }
        }
        Some(r - 1)
    }
}

// ---------------------------------------------------------------------------
// Sublattice
// ---------------------------------------------------------------------------

/// A finite-index-free subgroup of an ambient lattice, given by an ordered
/// basis written in ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sublattice {
    ambient: Lattice,
    basis: Vec<ClassVector>,
}

impl Sublattice {
    /// Builds a sublattice from an explicit basis, checking dimensions and
    /// linear independence.
    pub fn from_basis(ambient: Lattice, basis: Vec<ClassVector>) -> Result<Self> {
        for v in &basis {
            if v.dim() != ambient.rank() {
                return Err(Error::DimensionMismatch {
                    expected: ambient.rank(),
                    found: v.dim(),
                });
            }
        }
        let rows: Mat = basis.iter().map(|v| v.coords().to_vec()).collect();
        let rank = mat_rank(&rows);
        if rank != basis.len() {
            return Err(Error::DependentVectors {
                rank,
                expected: basis.len(),
            });
        }
        Ok(Sublattice { ambient, basis })
    }

    /// The ambient lattice.
    pub fn ambient(&self) -> &Lattice {
        &self.ambient
    }

    /// Basis vectors in ambient coordinates.
    pub fn basis(&self) -> &[ClassVector] {
        &self.basis
    }

    /// Rank of the sublattice.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// The induced Gram matrix on the basis, as a lattice in its own right.
    pub fn gram(&self) -> Lattice {
        let k = self.basis.len();
        let mut gram = vec![vec![BigInt::zero(); k]; k];
        for i in 0..k {
            for j in 0..=i {
                let p = self
                    .ambient
                    .inner(&self.basis[i], &self.basis[j])
                    .expect("basis dimensions checked at construction");
                gram[i][j] = p.clone();
                gram[j][i] = p;
            }
        }
        Lattice {
            gram,
            label: format!("{}|sub", self.ambient.label),
        }
    }

    /// Expresses an ambient vector in this basis, if it lies in the span
    /// over the integers.
    pub fn coordinates_of(&self, v: &ClassVector) -> Result<Option<ClassVector>> {
        if v.dim() != self.ambient.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient.rank(),
                found: v.dim(),
            });
        }
        // Solve B^T x = v where the columns of B^T are the basis vectors.
        let n = self.ambient.rank();
        let k = self.basis.len();
        let mut bt = vec![vec![BigInt::zero(); k]; n];
        for (j, b) in self.basis.iter().enumerate() {
            for i in 0..n {
                bt[i][j] = b.coords[i].clone();
            }
        }
        Ok(solve_linear(&bt, v.coords()).map(ClassVector::new))
    }

    /// True when the ambient vector lies in the integral span of the basis.
    pub fn contains(&self, v: &ClassVector) -> Result<bool> {
        Ok(self.coordinates_of(v)?.is_some())
    }

    /// Maps a coordinate vector in this basis back to ambient coordinates.
    pub fn to_ambient(&self, coords: &ClassVector) -> Result<ClassVector> {
        if coords.dim() != self.basis.len() {
            return Err(Error::DimensionMismatch {
                expected: self.basis.len(),
                found: coords.dim(),
            });
        }
        let mut out = ClassVector::zero(self.ambient.rank());
        for (c, b) in coords.coords().iter().zip(&self.basis) {
            out = out.add(&b.scale(c));
        }
        Ok(out)
    }

    /// True when the subgroup is saturated (primitive): the quotient of the
    /// ambient group by the span is torsion-free. Checked via the Smith
    /// normal form of the basis matrix.
    pub fn is_saturated(&self) -> bool {
        let rows: Mat = self.basis.iter().map(|v| v.coords().to_vec()).collect();
        smith_diagonal(rows)
            .into_iter()
            .filter(|d| !d.is_zero())
            .all(|d| d.abs().is_one())
    }
}

/// The orthogonal complement of a set of independent vectors, returned with
/// its canonical (Hermite-form) basis. The complement of a set is always
/// saturated.
pub fn orthogonal_complement(ambient: &Lattice, span: &[ClassVector]) -> Result<Sublattice> {
    let n = ambient.rank();
    for v in span {
        if v.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.dim(),
            });
        }
    }
    let coord_rows: Mat = span.iter().map(|v| v.coords().to_vec()).collect();
    let rank = mat_rank(&coord_rows);
    if rank != span.len() {
        return Err(Error::DependentVectors {
            rank,
            expected: span.len(),
        });
    }
    // Row i of the constraint matrix is (span[i])^T G; its kernel is the
    // complement, and an integer kernel basis is automatically saturated.
    let mut constraints = vec![vec![BigInt::zero(); n]; span.len()];
    for (r, v) in span.iter().enumerate() {
        for c in 0..n {
            constraints[r][c] = (0..n).map(|j| &v.coords[j] * &ambient.gram[j][c]).sum();
        }
    }
    let basis = kernel_basis(&constraints)
        .into_iter()
        .map(ClassVector::new)
        .collect();
    Ok(Sublattice {
        ambient: ambient.clone(),
        basis,
    })
}

/// Solves for a class with prescribed pairings: given constraints
/// `(v_i, c_i)`, finds `x` with `x . v_i = c_i` for all `i`, or `None` when
/// no integral solution exists. The returned solution is canonical: it is
/// reduced modulo the constraint kernel in a fixed way, so equal inputs give
/// identical outputs.
pub fn solve_pairings(
    ambient: &Lattice,
    constraints: &[(ClassVector, BigInt)],
) -> Result<Option<ClassVector>> {
    let n = ambient.rank();
    if ambient.is_degenerate() {
        return Err(Error::DegenerateForm {
            radical: ambient.signature().zero,
        });
    }
    let mut rows = vec![vec![BigInt::zero(); n]; constraints.len()];
    let mut targets = Vec::with_capacity(constraints.len());
    for (r, (v, c)) in constraints.iter().enumerate() {
        if v.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.dim(),
            });
        }
        for col in 0..n {
            rows[r][col] = (0..n).map(|j| &v.coords[j] * &ambient.gram[j][col]).sum();
        }
        targets.push(c.clone());
    }
    Ok(solve_linear(&rows, &targets).map(ClassVector::new))
}

// ---------------------------------------------------------------------------
// Integer matrix algorithms
// ---------------------------------------------------------------------------

pub(crate) fn identity_mat(n: usize) -> Mat {
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::one();
    }
    m
}

pub(crate) fn transpose(m: &Mat) -> Mat {
    if m.is_empty() {
        return Vec::new();
    }
    let rows = m.len();
    let cols = m[0].len();
    let mut t = vec![vec![BigInt::zero(); rows]; cols];
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            t[j][i] = x.clone();
        }
    }
    t
}

pub(crate) fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    if a.is_empty() || b.is_empty() {
        return vec![Vec::new(); a.len()];
    }
    let n = a.len();
    let k = b.len();
    let m = b[0].len();
    let mut out = vec![vec![BigInt::zero(); m]; n];
    for i in 0..n {
        debug_assert_eq!(a[i].len(), k, "inner dimensions must agree");
        for (l, brow) in b.iter().enumerate() {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                let prod = &a[i][l] * &brow[j];
                out[i][j] += prod;
            }
        }
    }
    out
}

/// Row Hermite normal form with transformation: returns `(H, U)` with
/// `U * M = H`, `U` unimodular, pivots positive and strictly right-moving,
/// entries above each pivot reduced into `[0, pivot)`, zero rows at the
/// bottom. The form is the unique HNF of the row span, so it canonicalizes
/// bases.
pub(crate) fn row_hnf(m: &Mat) -> (Mat, Mat) {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut h = m.clone();
    let mut u = identity_mat(rows);
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        // Euclidean elimination below the pivot: repeatedly reduce by the
        // row with the smallest nonzero entry in this column.
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..rows {
                if !h[r][col].is_zero() {
                    let better = match best {
                        None => true,
                        Some(b) => h[r][col].abs() < h[b][col].abs(),
                    };
                    if better {
                        best = Some(r);
                    }
                }
            }
            let Some(b) = best else { break };
            h.swap(pivot_row, b);
            u.swap(pivot_row, b);
            let mut any_left = false;
            for r in pivot_row + 1..rows {
                if h[r][col].is_zero() {
                    continue;
                }
                let q = h[r][col].div_floor(&h[pivot_row][col]);
                if !q.is_zero() {
                    for c in 0..cols {
                        let s = &q * &h[pivot_row][c];
                        h[r][c] -= s;
                    }
                    for c in 0..rows {
                        let s = &q * &u[pivot_row][c];
                        u[r][c] -= s;
                    }
                }
                if !h[r][col].is_zero() {
                    any_left = true;
                }
            }
            if !any_left {
                break;
            }
        }
        if h[pivot_row][col].is_zero() {
            continue;
        }
        if h[pivot_row][col].is_negative() {
            for c in 0..cols {
                h[pivot_row][c] = -h[pivot_row][c].clone();
            }
            for c in 0..rows {
                u[pivot_row][c] = -u[pivot_row][c].clone();
            }
        }
        // Reduce entries above the pivot into [0, pivot).
        let pivot = h[pivot_row][col].clone();
        for r in 0..pivot_row {
            let q = h[r][col].div_floor(&pivot);
            if !q.is_zero() {
                for c in 0..cols {
                    let s = &q * &h[pivot_row][c];
                    h[r][c] -= s;
                }
                for c in 0..rows {
                    let s = &q * &u[pivot_row][c];
                    u[r][c] -= s;
                }
            }
        }
        pivot_row += 1;
    }
    (h, u)
}

/// Rank of an integer matrix (number of nonzero rows of its HNF).
pub(crate) fn mat_rank(m: &Mat) -> usize {
    if m.is_empty() {
        return 0;
    }
    let (h, _) = row_hnf(m);
    h.iter().filter(|row| row.iter().any(|x| !x.is_zero())).count()
}

/// Canonical basis (rows, in Hermite form) of `{ x : M x = 0 }`.
/// The returned basis spans a saturated subgroup.
pub(crate) fn kernel_basis(m: &Mat) -> Mat {
    if m.is_empty() {
        return identity_mat(0);
    }
    let n = m[0].len();
    if n == 0 {
        return Vec::new();
    }
    let mt = transpose(m);
    let (h, u) = row_hnf(&mt);
    let mut ker: Mat = Vec::new();
    for (row_h, row_u) in h.iter().zip(u.iter()) {
        if row_h.iter().all(|x| x.is_zero()) {
            ker.push(row_u.clone());
        }
    }
    if ker.is_empty() {
        return Vec::new();
    }
    let (kh, _) = row_hnf(&ker);
    kh.into_iter()
        .filter(|row| row.iter().any(|x| !x.is_zero()))
        .collect()
}

/// Finds one integral solution of `A x = t` (A is `k x n`), canonicalized by
/// reducing against the Hermite basis of the kernel; `None` when no integral
/// solution exists.
pub(crate) fn solve_linear(a: &Mat, t: &[BigInt]) -> Option<Vec<BigInt>> {
    let k = a.len();
    debug_assert_eq!(k, t.len());
    if k == 0 {
        return Some(Vec::new());
    }
    let n = a[0].len();
    if n == 0 {
        return if t.iter().all(|x| x.is_zero()) {
            Some(Vec::new())
        } else {
            None
        };
    }
    // Column-reduce A: with U * A^T = H we have A * U^T = H^T, so solving
    // H^T y = t by forward substitution and setting x = U^T y works.
    let at = transpose(a);
    let (h, u) = row_hnf(&at);
    let mut y = vec![BigInt::zero(); n];
    // Pivot structure of H: row j has its pivot in some column pcol(j).
    let mut solved = vec![false; k];
    for (j, hrow) in h.iter().enumerate() {
        let Some(p) = hrow.iter().position(|x| !x.is_zero()) else {
            break;
        };
        // Equation for target row p:  sum_{j' <= j} H[j'][p] * y_{j'} = t_p.
        let acc: BigInt = (0..j).map(|jp| &h[jp][p] * &y[jp]).sum();
        let rhs = &t[p] - acc;
        let (q, r) = rhs.div_rem(&hrow[p]);
        if !r.is_zero() {
            return None;
        }
        y[j] = q;
        solved[p] = true;
    }
    let ut = transpose(&u);
    let mut x = vec![BigInt::zero(); n];
    for (i, xi) in x.iter_mut().enumerate() {
        *xi = (0..n).map(|j| &ut[i][j] * &y[j]).sum();
    }
    // Verify every equation (including non-pivot targets).
    for (row, ti) in a.iter().zip(t) {
        let got: BigInt = row.iter().zip(&x).map(|(c, xi)| c * xi).sum();
        if &got != ti {
            return None;
        }
    }
    // Canonical representative: reduce modulo the kernel's Hermite basis.
    let ker = kernel_basis(a);
    for krow in &ker {
        let p = krow
            .iter()
            .position(|c| !c.is_zero())
            .expect("kernel basis rows are nonzero");
        let q = x[p].div_floor(&krow[p]);
        if !q.is_zero() {
            for (xi, ki) in x.iter_mut().zip(krow) {
                *xi -= &q * ki;
            }
        }
    }
    Some(x)
}

/// Exact determinant by Bareiss fraction-free elimination.
pub fn bareiss_determinant(mut m: Mat) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                m[i][j] = q;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Exact inertia of a symmetric matrix by simultaneous row/column
/// elimination over the rationals.
pub fn rational_inertia(gram: &Mat) -> Signature {
    let n = gram.len();
    let zero = BigRational::zero();
    let mut m: Vec<Vec<BigRational>> = gram
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect();
    let mut sig = Signature {
        positive: 0,
        negative: 0,
        zero: 0,
    };
    let mut i = 0;
    while i < n {
        if m[i][i] == zero {
            // Try to swap in a later nonzero diagonal entry.
            if let Some(j) = (i + 1..n).find(|&j| m[j][j] != zero) {
                swap_sym(&mut m, i, j);
            } else if let Some((r, c)) = find_offdiag(&m, i, n) {
                // All remaining diagonal entries vanish but the block is not
                // zero: adding row/col c into r makes m[r][r] = 2 m[r][c].
                add_sym(&mut m, r, c);
                if r != i {
                    swap_sym(&mut m, i, r);
                }
            } else {
                sig.zero += n - i;
                break;
            }
        }
        let pivot = m[i][i].clone();
        if pivot > zero {
            sig.positive += 1;
        } else {
            sig.negative += 1;
        }
        for r in i + 1..n {
            if m[r][i] != zero {
                let f = &m[r][i] / &pivot;
                for c in i..n {
                    let s = &f * &m[i][c];
                    m[r][c] -= s;
                }
                for c in i..n {
                    let s = &f * &m[c][i];
                    m[c][r] -= s;
                }
            }
        }
        i += 1;
    }
    sig
}

fn swap_sym(m: &mut [Vec<BigRational>], i: usize, j: usize) {
    m.swap(i, j);
    for row in m.iter_mut() {
        row.swap(i, j);
    }
}

fn add_sym(m: &mut Vec<Vec<BigRational>>, r: usize, c: usize) {
    let n = m.len();
    for k in 0..n {
        let v = m[c][k].clone();
        m[r][k] += v;
    }
    for k in 0..n {
        let v = m[k][c].clone();
        m[k][r] += v;
    }
}

fn find_offdiag(m: &[Vec<BigRational>], from: usize, n: usize) -> Option<(usize, usize)> {
    let zero = BigRational::zero();
    for r in from..n {
        for c in from..n {
            if r != c && m[r][c] != zero {
                return Some((r, c));
            }
        }
    }
    None
}

/// Diagonal entries of the Smith normal form (signs normalized to be
/// nonnegative; divisibility chain not enforced). The multiset of nonzero
/// entries' prime content is what saturation and index checks need.
pub(crate) fn smith_diagonal(m: Mat) -> Vec<BigInt> {
    if m.is_empty() || m[0].is_empty() {
        return Vec::new();
    }
    let mut cur = m;
    // Alternate row and column Hermite reduction until the matrix is
    // diagonal; each pass can only shrink the off-diagonal content, and the
    // process terminates for the small matrices used here.
    for _ in 0..64 {
        let (h, _) = row_hnf(&cur);
        cur = h;
        if is_diagonal(&cur) {
            break;
        }
        let (h2, _) = row_hnf(&transpose(&cur));
        cur = h2;
        if is_diagonal(&cur) {
            break;
        }
    }
    assert!(is_diagonal(&cur), "Smith reduction did not converge");
    let rows = cur.len();
    let cols = cur[0].len();
    (0..rows.min(cols)).map(|i| cur[i][i].abs()).collect()
}

fn is_diagonal(m: &Mat) -> bool {
    m.iter().enumerate().all(|(i, row)| {
        row.iter()
            .enumerate()
            .all(|(j, x)| i == j || x.is_zero())
    })
}

/// Gram matrix of a list of vectors under a lattice pairing.
pub fn gram_of(l: &Lattice, vs: &[ClassVector]) -> Mat {
    let k = vs.len();
    let mut g = vec![vec![BigInt::zero(); k]; k];
    for i in 0..k {
        for j in 0..=i {
            let p = l.inner(&vs[i], &vs[j]).expect("dimensions checked by caller");
            g[i][j] = p.clone();
            g[j][i] = p;
        }
    }
    g
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
