//! Characteristic-vector normal forms and explicit lattice isometries.
//!
//! The homeomorphism-level claims of the blow-down constructions reduce to
//! statements about odd unimodular lattices of signature `(1, 9)`: every
//! basic class of square zero can be carried to the canonical
//! `3w1 - w2 - ... - w10` by an explicit isometry. This module provides:
//!
//! * [`BasisIsomorphism`]: an exact, invertible, Gram-preserving linear map
//!   between lattices, with composition;
//! * [`wall_reduce`]: reduction of a characteristic vector of square
//!   `9 - m` in `diag(1, m)` to `(3; 1, ..., 1)` by sign flips, coordinate
//!   permutations, and reflections in square `-2` vectors
//!   `h + e_i + e_j + e_k`;
//! * [`diagonalize`]: an orthogonal basis for an odd unimodular lattice of
//!   signature `(0, n)` or `(1, n)`, found by a bounded sparse search for
//!   unit vectors;
//! * [`reduce_rank10`]: the splitting `K = 3w1 - w2 - ... - w10` for a
//!   square-zero characteristic class in an odd unimodular `(1, 9)` form;
//! * [`build_sw_isomorphism`]: the isometry matching two such presentations
//!   class-to-class, with the forward-cone coherence checks that make the
//!   matched chambers comparable;
//! * [`cone_coherent`]: the positivity lemma those checks rest on.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{
    self, gram_of, identity_mat, mat_mul, orthogonal_complement, ClassVector, Lattice, Mat,
};

/// An exact linear isomorphism between two lattices, stored as the images
/// of the source basis in target coordinates. Construction checks that the
/// map preserves Gram matrices, which forces it to be a lattice isometry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisIsomorphism {
    source: Lattice,
    target: Lattice,
    images: Vec<ClassVector>,
}

impl BasisIsomorphism {
    /// Builds the map sending source basis vector `i` to `images[i]`,
    /// verifying that all pairings are preserved.
    pub fn new(source: Lattice, target: Lattice, images: Vec<ClassVector>) -> Result<Self> {
        if images.len() != source.rank() {
            return Err(Error::DimensionMismatch {
                expected: source.rank(),
                found: images.len(),
            });
        }
        for v in &images {
            if v.dim() != target.rank() {
                return Err(Error::DimensionMismatch {
                    expected: target.rank(),
                    found: v.dim(),
                });
            }
        }
        let got = gram_of(&target, &images);
        for i in 0..source.rank() {
            for j in 0..source.rank() {
                if got[i][j] != *source.gram_entry(i, j) {
                    return Err(Error::precondition(
                        "BasisIsomorphism",
                        format!(
                            "images pair {} where the source Gram matrix has {} (entry {i}, {j})",
                            got[i][j],
                            source.gram_entry(i, j)
                        ),
                    ));
                }
            }
        }
        // Gram preservation between forms of equal nonzero determinant
        // forces det = ±1, so the map is onto.
        if source.determinant() != target.determinant() {
            return Err(Error::precondition(
                "BasisIsomorphism",
                format!(
                    "determinants differ ({} vs {}); the lattices are not isomorphic",
                    source.determinant(),
                    target.determinant()
                ),
            ));
        }
        Ok(BasisIsomorphism {
            source,
            target,
            images,
        })
    }

    pub fn source(&self) -> &Lattice {
        &self.source
    }

    pub fn target(&self) -> &Lattice {
        &self.target
    }

    pub fn images(&self) -> &[ClassVector] {
        &self.images
    }

    /// The identity on `l`.
    pub fn identity(l: &Lattice) -> Self {
        let images = (0..l.rank())
            .map(|i| ClassVector::standard_basis(l.rank(), i))
            .collect();
        BasisIsomorphism {
            source: l.clone(),
            target: l.clone(),
            images,
        }
    }

    /// Applies the map to a vector in source coordinates.
    pub fn apply(&self, v: &ClassVector) -> Result<ClassVector> {
        if v.dim() != self.source.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.source.rank(),
                found: v.dim(),
            });
        }
        let mut out = ClassVector::zero(self.target.rank());
        for (c, img) in v.coords().iter().zip(&self.images) {
            if !c.is_zero() {
                out = out.add(&img.scale(c));
            }
        }
        Ok(out)
    }

    fn matrix(&self) -> Mat {
        let rows = self.target.rank();
        let cols = self.images.len();
        let mut m = vec![vec![BigInt::zero(); cols]; rows];
        for (j, img) in self.images.iter().enumerate() {
            for i in 0..rows {
                m[i][j] = img.coord(i).clone();
            }
        }
        m
    }

    /// The inverse isometry (the matrix is unimodular, so this is exact).
    pub fn inverse(&self) -> Result<BasisIsomorphism> {
        let m = self.matrix();
        let n = self.source.rank();
        let mut images = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![BigInt::zero(); n];
            e[j] = BigInt::one();
            let col = lattice::solve_linear(&m, &e).ok_or_else(|| {
                Error::precondition("inverse", "isometry matrix is not invertible over Z")
            })?;
            images.push(ClassVector::new(col));
        }
        // Columns of the inverse matrix are images of the target basis.
        BasisIsomorphism::new(self.target.clone(), self.source.clone(), images)
    }

    /// `self ∘ inner`: first `inner`, then `self`. Requires
    /// `inner.target == self.source` as forms.
    pub fn compose(&self, inner: &BasisIsomorphism) -> Result<BasisIsomorphism> {
        if inner.target.gram() != self.source.gram() {
            return Err(Error::precondition(
                "compose",
                "inner map lands in a different form than the outer map leaves",
            ));
        }
        let mut images = Vec::with_capacity(inner.images.len());
        for img in &inner.images {
            images.push(self.apply(img)?);
        }
        BasisIsomorphism::new(inner.source.clone(), self.target.clone(), images)
    }

    /// The map composed with the global negation of the target.
    pub fn negated(&self) -> BasisIsomorphism {
        BasisIsomorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            images: self.images.iter().map(ClassVector::neg).collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Wall reduction in diag(1, m)
// ---------------------------------------------------------------------------

/// Result of reducing a characteristic vector to `(3; 1, ..., 1)`.
#[derive(Clone, Debug)]
pub struct WallReduction {
    /// Always `(3; 1, ..., 1)`.
    pub result: ClassVector,
    /// Isometry of `diag(1, m)` with `iso.apply(input) == result`.
    pub iso: BasisIsomorphism,
    /// Whether a global negation was folded in (input had negative leading
    /// coordinate).
    pub negated: bool,
    /// Number of reflections fired.
    pub steps: u64,
}

/// Reduces a characteristic vector of square `9 - m` in `diag(1, m)`
/// (`8 <= m <= 12`) to the canonical `(3; 1, ..., 1)`.
///
/// The moves are the isometries generated by sign flips and permutations of
/// the `e_i` together with reflections in the square `-2` vectors
/// `r = h + e_i + e_j + e_k`; a reflection fires only while the pairing
/// with the sorted top three coordinates is negative, which strictly
/// decreases the leading coordinate. The step cap `10 (a + m)` can only be
/// hit on vectors violating the preconditions, and hitting it reports
/// [`Error::ReductionStalled`] rather than looping.
pub fn wall_reduce(m: usize, k: &ClassVector) -> Result<WallReduction> {
    if !(8..=12).contains(&m) {
        return Err(Error::precondition(
            "wall_reduce",
            format!("rank {m} outside the supported range 8..=12"),
        ));
    }
    let l = Lattice::diagonal(1, m);
    l.require_characteristic(k)?;
    let expected = BigInt::from(9i64 - m as i64);
    let square = l.square(k)?;
    if square != expected {
        return Err(Error::precondition(
            "wall_reduce",
            format!("square {square} differs from 9 - {m} = {expected}"),
        ));
    }
    let dim = m + 1;
    let mut acc = identity_mat(dim);
    let mut cur: Vec<BigInt> = k.coords().to_vec();
    let mut negated = false;
    if cur[0].is_negative() {
        for (i, row) in acc.iter_mut().enumerate() {
            row[i] = -BigInt::one();
        }
        for c in cur.iter_mut() {
            *c = -&*c;
        }
        negated = true;
    }
    let cap: u64 = {
        let a: u64 = cur[0].abs().try_into().unwrap_or(u64::MAX / 16);
        10 * (a + m as u64)
    };
    let mut steps: u64 = 0;
    let target: Vec<BigInt> = std::iter::once(BigInt::from(3))
        .chain(std::iter::repeat(BigInt::one()).take(m))
        .collect();
    loop {
        // Normalize: flip signs so b_i >= 0, then sort descending. Both are
        // isometries of diag(1, m); fold them into the accumulator.
        let mut step = identity_mat(dim);
        let mut order: Vec<usize> = (1..dim).collect();
        order.sort_by(|&i, &j| cur[j].abs().cmp(&cur[i].abs()));
        for (slot, &src) in order.iter().enumerate() {
            for r in step.iter_mut() {
                r[src] = BigInt::zero();
            }
            step[slot + 1][src] = if cur[src].is_negative() {
                -BigInt::one()
            } else {
                BigInt::one()
            };
        }
        cur = apply_mat(&step, &cur);
        acc = mat_mul(&step, &acc);
        if cur == target {
            break;
        }
        // Pairing with r = h + e1 + e2 + e3 is a - (b1 + b2 + b3).
        let fire = &cur[0] - &cur[1] - &cur[2] - &cur[3];
        if !fire.is_negative() {
            return Err(Error::ReductionStalled {
                steps: steps as usize,
                cap: cap as usize,
            });
        }
        // Reflection in r (square -2): v -> v + (v . r) r. Only the top-left
        // 4 x 4 block differs from the identity.
        let mut refl = identity_mat(dim);
        for row in 0..4 {
            refl[row][0] += BigInt::one();
            for col in 1..4 {
                refl[row][col] -= BigInt::one();
            }
        }
        cur = apply_mat(&refl, &cur);
        acc = mat_mul(&refl, &acc);
        steps += 1;
        if steps > cap {
            return Err(Error::ReductionStalled {
                steps: steps as usize,
                cap: cap as usize,
            });
        }
    }
    let images = (0..dim)
        .map(|j| ClassVector::new((0..dim).map(|i| acc[i][j].clone()).collect()))
        .collect();
    let iso = BasisIsomorphism::new(l.clone(), l, images)?;
    let result = ClassVector::new(target);
    debug_assert_eq!(iso.apply(k)?, result);
    Ok(WallReduction {
        result,
        iso,
        negated,
        steps,
    })
}

fn apply_mat(m: &Mat, v: &[BigInt]) -> Vec<BigInt> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

// ---------------------------------------------------------------------------
// Forward-cone coherence
// ---------------------------------------------------------------------------

/// In a lattice of signature `(1, n)`: two positive-square classes pairing
/// positively with a common nonnegative-square class lie in the same
/// component of the positive cone, so they pair positively with each other.
///
/// Checks the hypotheses (`u^2 > 0`, `v^2 > 0`, `w^2 >= 0`, `u.w > 0`,
/// `v.w > 0`) as preconditions and returns the conclusion `u.v > 0` as
/// computed, so a caller can assert the lemma rather than assume it.
pub fn cone_coherent(
    l: &Lattice,
    u: &ClassVector,
    v: &ClassVector,
    w: &ClassVector,
) -> Result<bool> {
    let sig = l.signature();
    if sig.positive != 1 || sig.zero != 0 {
        return Err(Error::precondition(
            "cone_coherent",
            format!("signature {sig} is not (1, n)"),
        ));
    }
    if !l.square(u)?.is_positive() {
        return Err(Error::precondition("cone_coherent", "first class has nonpositive square"));
    }
    if !l.square(v)?.is_positive() {
        return Err(Error::precondition("cone_coherent", "second class has nonpositive square"));
    }
    if l.square(w)?.is_negative() {
        return Err(Error::precondition("cone_coherent", "reference class has negative square"));
    }
    if !l.inner(u, w)?.is_positive() {
        return Err(Error::precondition(
            "cone_coherent",
            "first class does not pair positively with the reference class",
        ));
    }
    if !l.inner(v, w)?.is_positive() {
        return Err(Error::precondition(
            "cone_coherent",
            "second class does not pair positively with the reference class",
        ));
    }
    Ok(l.inner(u, v)?.is_positive())
}

// ---------------------------------------------------------------------------
// Diagonalization of odd unimodular forms
// ---------------------------------------------------------------------------

/// Finds an orthogonal basis of unit vectors for an odd unimodular lattice
/// of signature `(0, n)` or `(1, n)`, returned as the isometry
/// `diag(pos, neg) -> l`.
///
/// Unit vectors are searched among sparse combinations of the basis
/// (support up to 3, then 4, with growing coefficient bounds), accepting
/// only splittings whose complement stays odd so the recursion cannot run
/// into an even form. Inputs that defeat the bounded search report
/// [`Error::SplitterNotFound`].
pub fn diagonalize(l: &Lattice) -> Result<BasisIsomorphism> {
    if l.is_degenerate() {
        return Err(Error::DegenerateForm { radical: 0 });
    }
    if !l.is_unimodular() {
        return Err(Error::NotUnimodular {
            determinant: l.determinant(),
        });
    }
    let sig = l.signature();
    if sig.positive > 1 {
        return Err(Error::precondition(
            "diagonalize",
            format!("signature {sig} has more than one positive square"),
        ));
    }
    let mut images = Vec::with_capacity(l.rank());
    collect_unit_basis(l, &mut images)?;
    // Positive vector first, then the negatives: the diag(pos, neg) order.
    images.sort_by_key(|(square, _)| -square.clone());
    let images: Vec<ClassVector> = images.into_iter().map(|(_, v)| v).collect();
    let diag = Lattice::diagonal(sig.positive, sig.negative);
    BasisIsomorphism::new(diag, l.clone(), images)
}

/// Recursively splits off unit vectors; images are accumulated in
/// ambient (`l`) coordinates along with their squares.
fn collect_unit_basis(l: &Lattice, out: &mut Vec<(BigInt, ClassVector)>) -> Result<()> {
    if l.rank() == 0 {
        return Ok(());
    }
    if l.rank() == 1 {
        let sq = l.gram_entry(0, 0).clone();
        out.push((sq, ClassVector::standard_basis(1, 0)));
        return Ok(());
    }
    let v = find_unit_splitter(l)?;
    let sq = l.square(&v)?;
    let complement = orthogonal_complement(l, std::slice::from_ref(&v))?;
    let mut inner: Vec<(BigInt, ClassVector)> = Vec::new();
    collect_unit_basis(&complement.gram(), &mut inner)?;
    out.push((sq, v));
    for (s, w) in inner {
        out.push((s, complement.to_ambient(&w)?));
    }
    Ok(())
}

/// Bounded sparse search for a vector of square `+1` or `-1` whose
/// orthogonal complement is still odd (or has rank < 2, where oddness is
/// automatic or vacuous).
fn find_unit_splitter(l: &Lattice) -> Result<ClassVector> {
    let n = l.rank();
    let max_bound = 6i64;
    for support_cap in [3usize, 4] {
        let supports: Vec<usize> = if support_cap == 3 {
            (1..=3.min(n)).collect()
        } else if n >= 4 {
            vec![4]
        } else {
            continue;
        };
        for bound in 1..=max_bound {
            for &s in &supports {
                let mut idx: Vec<usize> = (0..s).collect();
                loop {
                    if let Some(v) = first_splitter_at(l, &idx, bound)? {
                        return Ok(v);
                    }
                    if !advance_subset(&mut idx, n) {
                        break;
                    }
                }
            }
        }
    }
    Err(Error::SplitterNotFound { bound: max_bound })
}

/// Advances a strictly increasing index subset to its lexicographic
/// successor within `0..n`; returns `false` after the last subset.
fn advance_subset(idx: &mut [usize], n: usize) -> bool {
    let s = idx.len();
    let mut i = s;
    while i > 0 {
        i -= 1;
        if idx[i] != i + n - s {
            idx[i] += 1;
            for j in i + 1..s {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Enumerates coefficient assignments on the given support with maximum
/// absolute value exactly `bound`, returning the first acceptable splitter.
fn first_splitter_at(l: &Lattice, idx: &[usize], bound: i64) -> Result<Option<ClassVector>> {
    let s = idx.len();
    let span = (2 * bound) as usize; // values in -bound..=bound minus 0
    let total = (span + 1).pow(s as u32);
    'outer: for code in 0..total {
        let mut rem = code;
        let mut coeffs = Vec::with_capacity(s);
        let mut max_abs = 0i64;
        for _ in 0..s {
            let raw = (rem % (span + 1)) as i64 - bound;
            rem /= span + 1;
            if raw == 0 {
                continue 'outer;
            }
            max_abs = max_abs.max(raw.abs());
            coeffs.push(raw);
        }
        if max_abs != bound {
            continue;
        }
        // First nonzero coefficient positive: skip global negations.
        if coeffs[0] < 0 {
            continue;
        }
        let mut v = ClassVector::zero(l.rank());
        for (&c, &i) in coeffs.iter().zip(idx) {
            v = v.add(&ClassVector::standard_basis(l.rank(), i).scale(&BigInt::from(c)));
        }
        let sq = l.square(&v)?;
        if sq.abs() != BigInt::one() {
            continue;
        }
        let complement = orthogonal_complement(l, std::slice::from_ref(&v))?;
        let cgram = complement.gram();
        if complement.rank() < 2 || cgram.is_odd() {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Canonical rank-10 presentation
// ---------------------------------------------------------------------------

/// The canonical presentation `K = 3 w1 - w2 - ... - w10` of a square-zero
/// characteristic class in an odd unimodular `(1, 9)` form.
#[derive(Clone, Debug)]
pub struct Rank10Reduction {
    /// Orthogonal basis with `w1^2 = 1`, `wi^2 = -1`, in source
    /// coordinates.
    pub w_basis: Vec<ClassVector>,
    /// The square `-1` splitter `alpha` used, normalized to `K . alpha = -1`.
    pub splitter: ClassVector,
    /// Whether the internal wall reduction folded in a negation
    /// (diagnostic only; the presentation identity holds either way).
    pub wall_negated: bool,
}

/// Splits a square-zero characteristic class of an odd unimodular `(1, 9)`
/// lattice as `K = 3 w1 - w2 - ... - w10` over an orthogonal unit basis.
///
/// A preferred splitter (square `-1`, pairing `±1` with the class) can be
/// supplied; otherwise one is searched for. The pipeline: split the lattice
/// as `<alpha> ⊕ alpha^perp`, diagonalize the complement (an odd unimodular
/// `(1, 8)` form), and wall-reduce the image of `K - alpha` there.
pub fn reduce_rank10(
    l: &Lattice,
    k: &ClassVector,
    preferred_splitter: Option<&ClassVector>,
) -> Result<Rank10Reduction> {
    let sig = l.signature();
    if l.rank() != 10 || !l.is_unimodular() || !l.is_odd() || sig.positive != 1 || sig.zero != 0 {
        return Err(Error::precondition(
            "reduce_rank10",
            format!(
                "lattice must be odd unimodular of signature (1, 9); found rank {} signature {sig}",
                l.rank()
            ),
        ));
    }
    l.require_characteristic(k)?;
    let square = l.square(k)?;
    if !square.is_zero() {
        return Err(Error::precondition(
            "reduce_rank10",
            format!("class has square {square}; the presentation needs square 0"),
        ));
    }
    let alpha = match preferred_splitter {
        Some(a) => {
            let asq = l.square(a)?;
            if asq != BigInt::from(-1) {
                return Err(Error::precondition(
                    "reduce_rank10",
                    format!("preferred splitter has square {asq}, not -1"),
                ));
            }
            let pairing = l.inner(k, a)?;
            if pairing == BigInt::from(-1) {
                a.clone()
            } else if pairing == BigInt::one() {
                a.neg()
            } else {
                return Err(Error::precondition(
                    "reduce_rank10",
                    format!("preferred splitter pairs {pairing} with the class, need ±1"),
                ));
            }
        }
        None => find_class_splitter(l, k)?,
    };
    // L = K - alpha: square 1, orthogonal to alpha, characteristic in the
    // complement (K . v = v^2 mod 2 persists since alpha . v = 0 there).
    let lvec = k.sub(&alpha);
    debug_assert_eq!(l.square(&lvec)?, BigInt::one());
    let complement = orthogonal_complement(l, std::slice::from_ref(&alpha))?;
    let diag = diagonalize(&complement.gram())?;
    let l_in_comp = complement
        .coordinates_of(&lvec)?
        .ok_or_else(|| Error::precondition("reduce_rank10", "K - alpha not in alpha^perp"))?;
    let l_diag = diag.inverse()?.apply(&l_in_comp)?;
    let reduction = wall_reduce(8, &l_diag)?;
    // Push the diagonal basis through the reduction: in the new basis g',
    // L has coordinates (3; 1, ..., 1).
    let back = reduction.iso.inverse()?;
    let mut g_prime = Vec::with_capacity(9);
    for j in 0..9 {
        let e = ClassVector::standard_basis(9, j);
        let in_diag = back.apply(&e)?;
        let in_comp = diag.apply(&in_diag)?;
        g_prime.push(complement.to_ambient(&in_comp)?);
    }
    // K = L + alpha = 3 g'0 + g'1 + ... + g'8 + alpha
    //   = 3 w1 - w2 - ... - w10 with w1 = g'0, w_{i+1} = -g'_i, w10 = -alpha.
    let mut w_basis = Vec::with_capacity(10);
    w_basis.push(g_prime[0].clone());
    for g in g_prime.iter().skip(1) {
        w_basis.push(g.neg());
    }
    w_basis.push(alpha.neg());
    // Verify the presentation exactly.
    let wgram = gram_of(l, &w_basis);
    let expected = Lattice::diagonal(1, 9);
    for i in 0..10 {
        for j in 0..10 {
            if wgram[i][j] != *expected.gram_entry(i, j) {
                return Err(Error::precondition(
                    "reduce_rank10",
                    format!("w-basis pairing ({i}, {j}) is {}, expected {}", wgram[i][j], expected.gram_entry(i, j)),
                ));
            }
        }
    }
    let mut rebuilt = w_basis[0].scale(&BigInt::from(3));
    for w in w_basis.iter().skip(1) {
        rebuilt = rebuilt.sub(w);
    }
    if &rebuilt != k {
        return Err(Error::precondition(
            "reduce_rank10",
            "presentation identity 3w1 - w2 - ... - w10 failed to rebuild the class",
        ));
    }
    Ok(Rank10Reduction {
        w_basis,
        splitter: alpha,
        wall_negated: reduction.negated,
    })
}

/// Searches for a square `-1` vector pairing `-1` with `k` (sparse, with
/// the same bounds as the diagonalization search).
fn find_class_splitter(l: &Lattice, k: &ClassVector) -> Result<ClassVector> {
    let n = l.rank();
    for bound in 1..=6i64 {
        for s in 1..=4.min(n) {
            let mut idx: Vec<usize> = (0..s).collect();
            loop {
                if let Some(v) = first_class_splitter_at(l, k, &idx, bound)? {
                    return Ok(v);
                }
                if !advance_subset(&mut idx, n) {
                    break;
                }
            }
        }
    }
    Err(Error::SplitterNotFound { bound: 6 })
}

fn first_class_splitter_at(
    l: &Lattice,
    k: &ClassVector,
    idx: &[usize],
    bound: i64,
) -> Result<Option<ClassVector>> {
    let s = idx.len();
    let span = (2 * bound) as usize;
    let total = (span + 1).pow(s as u32);
    'outer: for code in 0..total {
        let mut rem = code;
        let mut coeffs = Vec::with_capacity(s);
        let mut max_abs = 0i64;
        for _ in 0..s {
            let raw = (rem % (span + 1)) as i64 - bound;
            rem /= span + 1;
            if raw == 0 {
                continue 'outer;
            }
            max_abs = max_abs.max(raw.abs());
            coeffs.push(raw);
        }
        if max_abs != bound {
            continue;
        }
        let mut v = ClassVector::zero(l.rank());
        for (&c, &i) in coeffs.iter().zip(idx) {
            v = v.add(&ClassVector::standard_basis(l.rank(), i).scale(&BigInt::from(c)));
        }
        if l.square(&v)? != BigInt::from(-1) {
            continue;
        }
        let pairing = l.inner(k, &v)?;
        if pairing == BigInt::from(-1) {
            return Ok(Some(v));
        }
        if pairing == BigInt::one() {
            return Ok(Some(v.neg()));
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Matching two presentations
// ---------------------------------------------------------------------------

/// One side of an isometry match: a lattice, a square-zero basic class, and
/// a chamber representative, plus an optional preferred splitter.
pub struct SwSide<'a> {
    pub lattice: &'a Lattice,
    pub class: &'a ClassVector,
    pub chamber: &'a ClassVector,
    pub preferred_splitter: Option<&'a ClassVector>,
}

/// An explicit isometry matching two presentations class-to-class, with
/// the chamber coherence data.
pub struct SwIsomorphism {
    /// The isometry from the first lattice to the second; maps the first
    /// class exactly onto the second.
    pub iso: BasisIsomorphism,
    /// Image of the first chamber representative.
    pub chamber_image: ClassVector,
    /// `(-K_b) . H_b` (must be positive).
    pub pairing_target: BigInt,
    /// `(-K_b) . iso(H_a)` (must be positive; equals `(-K_a) . H_a`).
    pub pairing_image: BigInt,
    /// The forward-cone lemma conclusion `H_b . iso(H_a) > 0`, computed,
    /// not assumed.
    pub cone_coherent: bool,
}

/// Builds the isometry carrying `a.class` to `b.class` by matching their
/// canonical rank-10 presentations, then runs the chamber coherence checks
/// that make Seiberg-Witten values transportable along it.
pub fn build_sw_isomorphism(a: &SwSide, b: &SwSide) -> Result<SwIsomorphism> {
    let ra = reduce_rank10(a.lattice, a.class, a.preferred_splitter)?;
    let rb = reduce_rank10(b.lattice, b.class, b.preferred_splitter)?;
    let canon = Lattice::diagonal(1, 9);
    let iso_a = BasisIsomorphism::new(canon.clone(), a.lattice.clone(), ra.w_basis)?;
    let iso_b = BasisIsomorphism::new(canon, b.lattice.clone(), rb.w_basis)?;
    let iso = iso_b.compose(&iso_a.inverse()?)?;
    let image_class = iso.apply(a.class)?;
    if &image_class != b.class {
        return Err(Error::precondition(
            "build_sw_isomorphism",
            "presentation matching failed to carry the first class onto the second",
        ));
    }
    let minus_kb = b.class.neg();
    let pairing_target = b.lattice.inner(&minus_kb, b.chamber)?;
    if !pairing_target.is_positive() {
        return Err(Error::precondition(
            "build_sw_isomorphism",
            format!(
                "negated class pairs {pairing_target} with the target chamber; need positive"
            ),
        ));
    }
    let chamber_image = iso.apply(a.chamber)?;
    let pairing_image = b.lattice.inner(&minus_kb, &chamber_image)?;
    if !pairing_image.is_positive() {
        return Err(Error::precondition(
            "build_sw_isomorphism",
            format!(
                "negated class pairs {pairing_image} with the carried chamber; need positive"
            ),
        ));
    }
    let cone = cone_coherent(b.lattice, b.chamber, &chamber_image, &minus_kb)?;
    Ok(SwIsomorphism {
        iso,
        chamber_image,
        pairing_target,
        pairing_image,
        cone_coherent: cone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset;
    use crate::lattice::Sublattice;
    use crate::rbd::glue_overlattice;

    fn cv(coords: &[i64]) -> ClassVector {
        ClassVector::from_i64(coords)
    }

    #[test]
    fn wall_reduce_fixed_point() {
        let k = cv(&[3, 1, 1, 1, 1, 1, 1, 1, 1]);
        let r = wall_reduce(8, &k).unwrap();
        assert_eq!(r.result, k);
        assert_eq!(r.steps, 0);
        assert!(!r.negated);
        assert_eq!(r.iso.apply(&k).unwrap(), k);
    }

    #[test]
    fn wall_reduce_sign_normalization_only() {
        let k = cv(&[3, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1]);
        let r = wall_reduce(11, &k).unwrap();
        assert_eq!(r.result, cv(&[3, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1]));
        assert_eq!(r.steps, 0);
        assert_eq!(r.iso.apply(&k).unwrap(), r.result);
    }

    #[test]
    fn wall_reduce_worked_example() {
        let k = cv(&[5, 3, 3, 1, 1, 1, 1, 1, 1]);
        let r = wall_reduce(8, &k).unwrap();
        assert_eq!(r.result, cv(&[3, 1, 1, 1, 1, 1, 1, 1, 1]));
        assert!(r.steps >= 1);
        assert_eq!(r.iso.apply(&k).unwrap(), r.result);
    }

    #[test]
    fn wall_reduce_long_orbit() {
        // (3; 1 x11) pushed away by a reflection in the square -1 vector
        // 2h - e1 - ... - e5 comes back.
        let k = cv(&[47, -21, -21, -21, -21, -21, 1, 1, 1, 1, 1, 1]);
        let l = Lattice::diagonal(1, 11);
        assert_eq!(l.square(&k).unwrap(), BigInt::from(-2));
        let r = wall_reduce(11, &k).unwrap();
        assert_eq!(r.result, cv(&[3, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1]));
        assert!(r.steps >= 2);
        assert_eq!(r.iso.apply(&k).unwrap(), r.result);
    }

    #[test]
    fn wall_reduce_negates_when_leading_is_negative() {
        let k = cv(&[-3, -1, -1, -1, -1, -1, -1, -1, -1]);
        let r = wall_reduce(8, &k).unwrap();
        assert!(r.negated);
        assert_eq!(r.result, cv(&[3, 1, 1, 1, 1, 1, 1, 1, 1]));
        assert_eq!(r.iso.apply(&k).unwrap(), r.result);
    }

    #[test]
    fn wall_reduce_rejects_bad_input() {
        // Not characteristic.
        assert!(wall_reduce(8, &cv(&[2, 1, 1, 1, 1, 1, 1, 1, 1])).is_err());
        // Wrong square.
        assert!(wall_reduce(8, &cv(&[1, 1, 1, 1, 1, 1, 1, 1, 1])).is_err());
        // Rank outside the window.
        assert!(wall_reduce(7, &cv(&[3, 1, 1, 1, 1, 1, 1, 1])).is_err());
    }

    #[test]
    fn cone_lemma_on_a_lorentzian_plane() {
        let l = Lattice::diagonal(1, 2);
        let u = cv(&[2, 1, 0]);
        let v = cv(&[3, 0, 1]);
        let w = cv(&[1, 1, 0]);
        assert!(cone_coherent(&l, &u, &v, &w).unwrap());
        // Violated hypotheses are errors, not `false`.
        assert!(cone_coherent(&l, &cv(&[0, 1, 0]), &v, &w).is_err());
        assert!(cone_coherent(&l, &u, &v, &cv(&[0, 1, 0])).is_err());
        let far = cv(&[-2, 1, 0]);
        assert!(cone_coherent(&l, &u, &far, &w).is_err());
    }

    #[test]
    fn diagonalize_worked_rank3() {
        // <-1> + U: odd unimodular of signature (1, 2).
        let l = Lattice::from_gram(
            vec![
                vec![BigInt::from(-1), BigInt::zero(), BigInt::zero()],
                vec![BigInt::zero(), BigInt::zero(), BigInt::one()],
                vec![BigInt::zero(), BigInt::one(), BigInt::zero()],
            ],
            "minus-one-plus-U",
        )
        .unwrap();
        let iso = diagonalize(&l).unwrap();
        assert_eq!(iso.source().label(), "diag(1,2)");
        // Round trip through the inverse is the identity.
        let inv = iso.inverse().unwrap();
        for j in 0..3 {
            let e = ClassVector::standard_basis(3, j);
            assert_eq!(inv.apply(&iso.apply(&e).unwrap()).unwrap(), e);
        }
    }

    #[test]
    fn diagonalize_rejects_even_forms() {
        let u = Lattice::from_gram(
            vec![
                vec![BigInt::zero(), BigInt::one()],
                vec![BigInt::one(), BigInt::zero()],
            ],
            "U",
        )
        .unwrap();
        assert!(matches!(
            diagonalize(&u),
            Err(Error::SplitterNotFound { .. })
        ));
    }

    fn q3_overlattice() -> crate::rbd::Overlattice {
        let data = dataset::builtin();
        let ambient = Lattice::diagonal(1, 11);
        let complement =
            Sublattice::from_basis(ambient, data.q3_complement_basis.clone()).unwrap();
        glue_overlattice(&complement, &data.q3_beta, 3).unwrap()
    }

    #[test]
    fn diagonalize_q3_overlattice() {
        let over = q3_overlattice();
        let iso = diagonalize(over.lattice()).unwrap();
        assert_eq!(iso.source().label(), "diag(1,9)");
    }

    #[test]
    fn rank10_presentation_of_the_descended_class() {
        let data = dataset::builtin();
        let over = q3_overlattice();
        let k = over.descend_class(&data.q3_k_up).unwrap();
        assert_eq!(k.square, BigInt::zero());
        assert_eq!(
            k.coords,
            cv(&[1, 1, 1, 1, 1, 1, 1, 1, -2, -4]),
            "dual expansion of the descended class"
        );
        // Without a preferred splitter.
        let r = reduce_rank10(over.lattice(), &k.coords, None).unwrap();
        assert_eq!(r.w_basis.len(), 10);
        // With the first complement basis vector as preferred splitter
        // (its pairing with the class is -1).
        let alpha1 = ClassVector::standard_basis(10, 0);
        let r2 = reduce_rank10(over.lattice(), &k.coords, Some(&alpha1)).unwrap();
        assert_eq!(r2.splitter, alpha1);
    }

    #[test]
    fn matching_a_presentation_with_itself() {
        let data = dataset::builtin();
        let over = q3_overlattice();
        let k = over.descend_class(&data.q3_k_up).unwrap();
        let h = over.descend_class(&data.q3_chamber).unwrap();
        assert_eq!(h.square, BigInt::from(5));
        let side = SwSide {
            lattice: over.lattice(),
            class: &k.coords,
            chamber: &h.coords,
            preferred_splitter: None,
        };
        let m = build_sw_isomorphism(&side, &side).unwrap();
        assert_eq!(m.iso.apply(&k.coords).unwrap(), k.coords);
        assert_eq!(m.pairing_target, BigInt::one());
        assert_eq!(m.pairing_image, BigInt::one());
        assert!(m.cone_coherent);
    }

    #[test]
    fn matching_the_two_blowdown_presentations() {
        let data = dataset::builtin();
        // Side A: the length-4 chain with the multiplicity-1 end sphere in
        // diag(1, 13); glue vector found by search.
        let ambient13 = Lattice::diagonal(1, 13);
        let comp_a =
            orthogonal_complement(&ambient13, data.prime_config.spheres()).unwrap();
        let glues = crate::rbd::find_glue(&comp_a, 5).unwrap();
        assert_eq!(glues.len(), 1, "unique glue line for the order-25 group");
        let over_a = glue_overlattice(&comp_a, &glues[0], 5).unwrap();
        let sig_a = over_a.lattice().signature();
        assert_eq!((sig_a.positive, sig_a.negative), (1, 9));
        assert!(over_a.lattice().is_odd());
        let ka = over_a.descend_class(&data.prime_k_up).unwrap();
        assert_eq!(ka.square, BigInt::zero());
        let ha = over_a.descend_class(&data.prime_chamber).unwrap();
        assert_eq!(ha.square, BigInt::from(61));
        let alpha_a = over_a.descend_class(&data.prime_alpha).unwrap();
        assert_eq!(alpha_a.square, BigInt::from(-1));
        // Side B: the standard length-2 chain presentation.
        let over_b = q3_overlattice();
        let kb = over_b.descend_class(&data.q3_k_up).unwrap();
        let hb = over_b.descend_class(&data.q3_chamber).unwrap();
        let m = build_sw_isomorphism(
            &SwSide {
                lattice: over_a.lattice(),
                class: &ka.coords,
                chamber: &ha.coords,
                preferred_splitter: Some(&alpha_a.coords),
            },
            &SwSide {
                lattice: over_b.lattice(),
                class: &kb.coords,
                chamber: &hb.coords,
                preferred_splitter: None,
            },
        )
        .unwrap();
        assert_eq!(m.iso.apply(&ka.coords).unwrap(), kb.coords);
        assert_eq!(m.pairing_target, BigInt::one());
        assert_eq!(m.pairing_image, BigInt::from(9));
        assert!(m.cone_coherent, "carried chamber lies in the forward cone");
        // The isometry carries pairings exactly.
        assert_eq!(
            over_b.lattice().square(&m.chamber_image).unwrap(),
            BigInt::from(61)
        );
    }
}
