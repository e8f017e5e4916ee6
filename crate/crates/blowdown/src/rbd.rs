//! The homological layer of rational blow-downs.
//!
//! A rational blow-down replaces a tubular neighborhood of a linear plumbing
//! `C_p` of `p - 1` spheres (squares `-(p+2), -2, ..., -2` read from the
//! heavy end; this module orders chains from the light end, so the Gram
//! matrix is tridiagonal with diagonal `-2, ..., -2, -(p+2)`) by a rational
//! homology ball. Homologically this has three layers, all implemented here
//! over exact arithmetic:
//!
//! * recognizing and constructing the sphere configurations
//!   ([`CpConfiguration`], [`validate_config`], [`standard_p_cq`]);
//! * deciding when a characteristic class upstairs descends: the simple
//!   sufficient pairing condition ([`lift_condition_cor`]) and the full
//!   boundary spin-c criterion ([`liftable_thm`]);
//! * rebuilding the intersection form downstairs: the orthogonal complement
//!   of the configuration has index `p` in the blown-down form, and the
//!   missing classes are fractions `g / p` glued onto it
//!   ([`glue_overlattice`], [`find_glue`], [`Overlattice`]).
//!
//! [`BlowdownModel::build`] packages the whole pipeline and
//! [`BlowdownModel::descend_report`] pushes a chamber-tagged table of SW
//! values through it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{
    self, gram_of, orthogonal_complement, solve_pairings, ClassVector, Lattice, Sublattice,
};
use crate::swchamber::{ManifoldModel, SwEntry, SwReport};

/// A linear plumbing configuration `C_p`: `p - 1` embedded spheres in an
/// ambient lattice, chained from the light end, with squares
/// `-2, ..., -2, -(p+2)` and consecutive pairings `+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CpConfiguration {
    p: u32,
    spheres: Vec<ClassVector>,
}

impl CpConfiguration {
    /// Wraps `p - 1` sphere classes; shape is checked against an ambient
    /// lattice by [`validate_config`].
    pub fn new(p: u32, spheres: Vec<ClassVector>) -> Result<Self> {
        if p < 2 {
            return Err(Error::precondition("CpConfiguration", "p must be at least 2"));
        }
        if spheres.len() != (p - 1) as usize {
            return Err(Error::precondition(
                "CpConfiguration",
                format!("C_{p} needs {} spheres, found {}", p - 1, spheres.len()),
            ));
        }
        Ok(CpConfiguration { p, spheres })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn spheres(&self) -> &[ClassVector] {
        &self.spheres
    }

    /// The heavy-end sphere `u_{p-1}` (square `-(p+2)`).
    pub fn last_sphere(&self) -> &ClassVector {
        self.spheres.last().expect("p >= 2 means at least one sphere")
    }
}

/// Checks that the spheres of `cfg` realize the `C_p` chain Gram matrix in
/// `ambient`, reporting the first offending sphere.
pub fn validate_config(ambient: &Lattice, cfg: &CpConfiguration) -> Result<()> {
    let k = cfg.spheres.len();
    for (i, s) in cfg.spheres.iter().enumerate() {
        if s.dim() != ambient.rank() {
            return Err(Error::DimensionMismatch {
                expected: ambient.rank(),
                found: s.dim(),
            });
        }
        let sq = ambient.square(s)?;
        let expected = if i + 1 == k {
            -BigInt::from(cfg.p + 2)
        } else {
            BigInt::from(-2)
        };
        if sq != expected {
            return Err(Error::InvalidChain {
                index: i,
                reason: format!("expected square {expected}, found {sq}"),
            });
        }
    }
    for i in 0..k {
        for j in i + 1..k {
            let pairing = ambient.inner(&cfg.spheres[i], &cfg.spheres[j])?;
            let expected = if j == i + 1 {
                BigInt::one()
            } else {
                BigInt::zero()
            };
            if pairing != expected {
                return Err(Error::InvalidChain {
                    index: j,
                    reason: format!(
                        "pairing with sphere {i} should be {expected}, found {pairing}"
                    ),
                });
            }
        }
    }
    Ok(())
}

/// The standard embedding of `C_q` into `diag(1, 8 + q)` along a fiber-like
/// class of multiplicity `mult`:
///
/// ```text
/// u_i     = e_{8+q-i} - e_{9+q-i}          (1 <= i <= q-2)
/// u_{q-1} = mult * (3h - e1 - ... - e9) - 2 e10 - e11 - ... - e_{8+q}
/// ```
///
/// Returns the ambient lattice together with the configuration (whose chain
/// parameter is `q`; `mult` is the multiplicity of the underlying cubic
/// class, 2 for the torus-fiber embeddings used throughout).
pub fn standard_p_cq(mult: u32, q: u32) -> Result<(Lattice, CpConfiguration)> {
    if mult < 1 {
        return Err(Error::precondition("standard_p_cq", "multiplicity must be positive"));
    }
    if q < 2 {
        return Err(Error::precondition("standard_p_cq", "chain parameter must be at least 2"));
    }
    let n = 8 + q as usize;
    let dim = n + 1;
    let ambient = Lattice::diagonal(1, n);
    let mut spheres = Vec::with_capacity((q - 1) as usize);
    for i in 1..=(q - 2) as usize {
        let hi = 8 + q as usize - i;
        let mut coords = vec![BigInt::zero(); dim];
        coords[hi] = BigInt::one();
        coords[hi + 1] = -BigInt::one();
        spheres.push(ClassVector::new(coords));
    }
    let m = BigInt::from(mult);
    let mut coords = vec![BigInt::zero(); dim];
    coords[0] = BigInt::from(3) * &m;
    for c in coords.iter_mut().take(10).skip(1) {
        *c = -m.clone();
    }
    coords[10] = BigInt::from(-2);
    for c in coords.iter_mut().take(dim).skip(11) {
        *c = -BigInt::one();
    }
    spheres.push(ClassVector::new(coords));
    let cfg = CpConfiguration::new(q, spheres)?;
    validate_config(&ambient, &cfg).expect("standard embedding satisfies the chain shape");
    Ok((ambient, cfg))
}

/// The sufficient pairing condition for a characteristic class to descend:
/// `k` pairs to zero with every sphere except the heavy end, and to `±p`
/// with the heavy end.
pub fn lift_condition_cor(ambient: &Lattice, k: &ClassVector, cfg: &CpConfiguration) -> Result<bool> {
    validate_config(ambient, cfg)?;
    ambient.require_characteristic(k)?;
    let last = cfg.spheres.len() - 1;
    for (i, s) in cfg.spheres.iter().enumerate() {
        let pairing = ambient.inner(k, s)?;
        if i < last {
            if !pairing.is_zero() {
                return Ok(false);
            }
        } else if pairing.abs() != BigInt::from(cfg.p) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Full descent assessment for a characteristic class against a `C_p`
/// configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftAssessment {
    /// The class descends: the rational projection has square `1 - p` and
    /// the boundary spin-c class admits an admissible parameter.
    pub liftable: bool,
    /// Pairings of the class with the spheres (light end first).
    pub pairings: Vec<BigInt>,
    /// Square of the orthogonal projection of the class onto the span of
    /// the configuration (exact rational).
    pub projection_square: BigRational,
    /// The value the projection square must take, `1 - p`.
    pub required_square: BigInt,
    /// The boundary class `c` in `Z / p^2`, written against the dual of the
    /// heavy-end sphere.
    pub boundary_class: BigInt,
    /// A parameter `m` with `m p ≡ c (mod p^2)` and `m ≡ p - 1 (mod 2)`,
    /// when one exists; recorded both modulo `p` and modulo `p^2` since the
    /// two readings disagree in general and both are useful diagnostics.
    pub witness_m_mod_p: Option<BigInt>,
    pub witness_m_mod_p2: Option<BigInt>,
}

/// Decides descent of a characteristic class through the boundary lens
/// space: the projection square must equal `1 - p` and the boundary spin-c
/// class `c` must be `m p (mod p^2)` for some `m ≡ p - 1 (mod 2)`.
///
/// The pairing condition of [`lift_condition_cor`] implies all of this; the
/// converse direction is strictly weaker, which is why both tests exist.
pub fn liftable_thm(
    ambient: &Lattice,
    k: &ClassVector,
    cfg: &CpConfiguration,
) -> Result<LiftAssessment> {
    validate_config(ambient, cfg)?;
    ambient.require_characteristic(k)?;
    let spheres = cfg.spheres();
    let kdim = spheres.len();
    let gram = gram_of(ambient, spheres);
    let pairings: Vec<BigInt> = spheres
        .iter()
        .map(|s| ambient.inner(k, s))
        .collect::<Result<_>>()?;
    // Rational projection onto the configuration span: x = G^{-1} t, square
    // x . t.
    let x = solve_rational(&gram, &pairings).ok_or_else(|| {
        Error::precondition("liftable_thm", "chain Gram matrix is singular")
    })?;
    let projection_square: BigRational = x
        .iter()
        .zip(&pairings)
        .map(|(xi, ti)| xi * BigRational::from_integer(ti.clone()))
        .sum();
    let p = BigInt::from(cfg.p);
    let p2 = &p * &p;
    // Boundary class: the unique c (mod p^2) with t - c * e_last in G Z^k,
    // i.e. the coordinate of t in coker(G) against the dual of the heavy
    // end. coker(G) is cyclic of order p^2 for a valid chain.
    let mut boundary_class = None;
    let mut c = BigInt::zero();
    while c < p2 {
        let mut shifted = pairings.clone();
        shifted[kdim - 1] -= &c;
        if lattice::solve_linear(&gram, &shifted).is_some() {
            boundary_class = Some(c.clone());
            break;
        }
        c += 1;
    }
    let boundary_class = boundary_class.ok_or_else(|| {
        Error::precondition(
            "liftable_thm",
            "boundary group is not generated by the heavy-end dual (not a valid chain)",
        )
    })?;
    // Admissible parameter: m p ≡ c (mod p^2), m ≡ p - 1 (mod 2). Scan one
    // full period of both congruences.
    let parity = (&p - 1u32).mod_floor(&BigInt::from(2));
    let two_p2: BigInt = &p2 * 2;
    let mut witness = None;
    let mut m = BigInt::zero();
    while m < two_p2 {
        if (&m * &p - &boundary_class).mod_floor(&p2).is_zero()
            && m.mod_floor(&BigInt::from(2)) == parity
        {
            witness = Some(m.clone());
            break;
        }
        m += 1;
    }
    let required_square = BigInt::one() - &p;
    let liftable = witness.is_some()
        && projection_square == BigRational::from_integer(required_square.clone());
    Ok(LiftAssessment {
        liftable,
        pairings,
        projection_square,
        required_square,
        boundary_class,
        witness_m_mod_p: witness.as_ref().map(|m| m.mod_floor(&p)),
        witness_m_mod_p2: witness.map(|m| m.mod_floor(&p2)),
    })
}

/// Euler characteristic and signature after blowing down: the rational ball
/// kills `p - 1` negative-definite directions.
pub fn betti_after_blowdown(model: &ManifoldModel, cfg: &CpConfiguration) -> Result<(i64, i64)> {
    validate_config(model.lattice(), cfg)?;
    let drop = (cfg.p - 1) as i64;
    Ok((model.euler() - drop, model.sigma() + drop))
}

/// Searches for a class pairing `1` with the light-end sphere and `0` with
/// every other sphere (the obstruction to the configuration being
/// homologically split). Returns the canonical solution, or `None`.
pub fn delta_exists(ambient: &Lattice, cfg: &CpConfiguration) -> Result<Option<ClassVector>> {
    validate_config(ambient, cfg)?;
    let mut constraints = Vec::with_capacity(cfg.spheres.len());
    for (i, s) in cfg.spheres.iter().enumerate() {
        let target = if i == 0 { BigInt::one() } else { BigInt::zero() };
        constraints.push((s.clone(), target));
    }
    solve_pairings(ambient, &constraints)
}

// ---------------------------------------------------------------------------
// Overlattices
// ---------------------------------------------------------------------------

/// An index-`p` overlattice of a sublattice `C` of an ambient lattice:
/// `M = C + Z (g / p)` for a glue class `g` in `C`. Basis vectors are kept
/// as ambient numerators over the common denominator `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Overlattice {
    ambient: Lattice,
    lattice: Lattice,
    basis_num: Vec<ClassVector>,
    denominator: BigInt,
}

impl Overlattice {
    /// Gram matrix of the overlattice in its chosen basis.
    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// The ambient lattice everything embeds in.
    pub fn ambient(&self) -> &Lattice {
        &self.ambient
    }

    /// Ambient numerators of the basis: basis vector `i` is
    /// `basis_numerators()[i] / denominator()`.
    pub fn basis_numerators(&self) -> &[ClassVector] {
        &self.basis_num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    pub fn rank(&self) -> usize {
        self.basis_num.len()
    }

    /// Expresses the fractional ambient class `num / denominator` in the
    /// overlattice basis, if it belongs to the overlattice.
    pub fn coords_of_numerator(&self, num: &ClassVector) -> Result<Option<ClassVector>> {
        if num.dim() != self.ambient.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient.rank(),
                found: num.dim(),
            });
        }
        let n = self.ambient.rank();
        let k = self.basis_num.len();
        let mut bt = vec![vec![BigInt::zero(); k]; n];
        for (j, b) in self.basis_num.iter().enumerate() {
            for i in 0..n {
                bt[i][j] = b.coord(i).clone();
            }
        }
        Ok(lattice::solve_linear(&bt, num.coords()).map(ClassVector::new))
    }

    /// Expresses an integral ambient class in the overlattice basis.
    pub fn coords_of(&self, v: &ClassVector) -> Result<Option<ClassVector>> {
        self.coords_of_numerator(&v.scale(&self.denominator))
    }

    /// Pairings of an integral ambient class against the overlattice basis;
    /// fails when some pairing is fractional (the class does not pair
    /// integrally with the overlattice).
    pub fn descend_pairings(&self, v: &ClassVector) -> Result<Vec<BigInt>> {
        let mut out = Vec::with_capacity(self.basis_num.len());
        for (i, b) in self.basis_num.iter().enumerate() {
            let num = self.ambient.inner(v, b)?;
            let (q, r) = num.div_rem(&self.denominator);
            if !r.is_zero() {
                return Err(Error::precondition(
                    "descend_pairings",
                    format!(
                        "class pairs {num}/{} with basis vector {i}; not integral",
                        self.denominator
                    ),
                ));
            }
            out.push(q);
        }
        Ok(out)
    }

    /// Descends an integral ambient class: the unique overlattice class with
    /// the same pairings against the basis. Requires the overlattice to be
    /// unimodular (so the dual coordinates are integral).
    pub fn descend_class(&self, v: &ClassVector) -> Result<DescendedClass> {
        let t = self.descend_pairings(v)?;
        let gram: Vec<Vec<BigInt>> = self.lattice.gram().to_vec();
        let coords = lattice::solve_linear(&gram, &t).ok_or_else(|| {
            Error::precondition(
                "descend_class",
                "pairing vector is not in the image of the Gram matrix (overlattice not unimodular?)",
            )
        })?;
        let coords = ClassVector::new(coords);
        let square = self.lattice.square(&coords)?;
        Ok(DescendedClass {
            pairings: t,
            coords,
            square,
        })
    }

    /// True when `self` and `other` present the same subgroup of the same
    /// ambient rational span (basis choice independent).
    pub fn same_group(&self, other: &Overlattice) -> bool {
        if self.ambient != other.ambient || self.denominator != other.denominator {
            return false;
        }
        let rows_of = |o: &Overlattice| -> Vec<Vec<BigInt>> {
            o.basis_num.iter().map(|v| v.coords().to_vec()).collect()
        };
        let (ha, _) = lattice::row_hnf(&rows_of(self));
        let (hb, _) = lattice::row_hnf(&rows_of(other));
        ha == hb
    }
}

/// A class descended into an overlattice: its pairings against the basis,
/// its coordinates, and its square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescendedClass {
    pub pairings: Vec<BigInt>,
    pub coords: ClassVector,
    pub square: BigInt,
}

/// Glues `glue_num / p` onto a sublattice, producing the index-`p`
/// overlattice with integral pairings.
///
/// Preconditions checked: `glue_num` lies in the sublattice but not in `p`
/// times it; all pairings `glue_num . b_i` are divisible by `p`; the square
/// `glue_num^2` is divisible by `p^2`. The determinant drops by exactly
/// `p^2`.
///
/// Basis choice: when the glue class has coefficient `±1` on some basis
/// vector, that vector is replaced by `glue_num / p` in place (so gluing
/// `beta / p` onto a basis ending in `beta` yields the basis
/// `b_1, ..., b_{k-1}, beta / p`); otherwise a canonical Hermite basis is
/// used.
pub fn glue_overlattice(
    complement: &Sublattice,
    glue_num: &ClassVector,
    p: u32,
) -> Result<Overlattice> {
    if p < 2 {
        return Err(Error::GlueRejected {
            reason: "denominator must be at least 2".into(),
        });
    }
    let pbig = BigInt::from(p);
    let p2 = &pbig * &pbig;
    let ambient = complement.ambient().clone();
    let coords = complement
        .coordinates_of(glue_num)?
        .ok_or_else(|| Error::GlueRejected {
            reason: "glue class does not lie in the sublattice".into(),
        })?;
    if coords.coords().iter().all(|c| c.mod_floor(&pbig).is_zero()) {
        return Err(Error::GlueRejected {
            reason: format!("glue class is divisible by {p} in the sublattice; the extension is trivial"),
        });
    }
    for (i, b) in complement.basis().iter().enumerate() {
        let pairing = ambient.inner(glue_num, b)?;
        if !pairing.mod_floor(&pbig).is_zero() {
            return Err(Error::GlueRejected {
                reason: format!(
                    "pairing {pairing} with basis vector {i} is not divisible by {p}"
                ),
            });
        }
    }
    let square = ambient.square(glue_num)?;
    if !square.mod_floor(&p2).is_zero() {
        return Err(Error::GlueRejected {
            reason: format!("square {square} is not divisible by {p2}"),
        });
    }
    // Choose the basis: replace a ±1-coefficient vector in place if we can.
    let replace = coords
        .coords()
        .iter()
        .rposition(|c| c.abs().is_one());
    let basis_num: Vec<ClassVector> = match replace {
        Some(j) => {
            let mut rows = Vec::with_capacity(complement.rank());
            for (i, b) in complement.basis().iter().enumerate() {
                if i == j {
                    rows.push(glue_num.clone());
                } else {
                    rows.push(b.scale(&pbig));
                }
            }
            rows
        }
        None => {
            let mut rows: Vec<Vec<BigInt>> = complement
                .basis()
                .iter()
                .map(|b| b.scale(&pbig).coords().to_vec())
                .collect();
            rows.push(glue_num.coords().to_vec());
            let (h, _) = lattice::row_hnf(&rows);
            h.into_iter()
                .filter(|r| r.iter().any(|x| !x.is_zero()))
                .map(ClassVector::new)
                .collect()
        }
    };
    if basis_num.len() != complement.rank() {
        return Err(Error::GlueRejected {
            reason: "glued generators do not span a group of the expected rank".into(),
        });
    }
    // Gram of the fractional basis: pairings of numerators over p^2, which
    // the preconditions make integral.
    let k = basis_num.len();
    let mut gram = vec![vec![BigInt::zero(); k]; k];
    for i in 0..k {
        for j in 0..=i {
            let num = ambient.inner(&basis_num[i], &basis_num[j])?;
            let (q, r) = num.div_rem(&p2);
            if !r.is_zero() {
                return Err(Error::GlueRejected {
                    reason: format!("induced pairing {num}/{p2} between basis vectors {i}, {j} is not integral"),
                });
            }
            gram[i][j] = q.clone();
            gram[j][i] = q;
        }
    }
    let lattice = Lattice::from_gram(gram, format!("{}+1/{p}", complement.ambient().label()))?;
    // Index check: determinant must drop by exactly p^2.
    let det_c = complement.gram().determinant();
    let det_m = lattice.determinant();
    if &det_m * &p2 != det_c {
        return Err(Error::GlueRejected {
            reason: format!(
                "determinant {det_m} after gluing is inconsistent with index {p} (sublattice determinant {det_c})"
            ),
        });
    }
    Ok(Overlattice {
        ambient,
        lattice,
        basis_num,
        denominator: pbig,
    })
}

/// Enumerates glue classes making an index-`p` unimodular overlattice:
/// elements of order `p` in the discriminant group with integral square
/// whose glued lattice has determinant `±1`. Returns ambient numerators in
/// a canonical order (one per distinct overlattice).
pub fn find_glue(complement: &Sublattice, p: u32) -> Result<Vec<ClassVector>> {
    if p < 2 {
        return Err(Error::GlueRejected {
            reason: "denominator must be at least 2".into(),
        });
    }
    if !is_prime(p) {
        return Err(Error::GlueRejected {
            reason: format!("denominator {p} must be prime for the order-p search"),
        });
    }
    let gram = complement.gram();
    // A fraction (sum c_i b_i) / p pairs integrally with the sublattice
    // exactly when G c ≡ 0 (mod p).
    let kernel = kernel_mod_p(gram.gram(), p);
    if kernel.len() > 4 {
        return Err(Error::GlueRejected {
            reason: format!(
                "discriminant p-kernel has rank {}, search space too large",
                kernel.len()
            ),
        });
    }
    let mut seen: Vec<Vec<u32>> = Vec::new();
    let mut out = Vec::new();
    let combos = enumerate_fp_combinations(&kernel, p);
    for c in combos {
        if c.iter().all(|&x| x == 0) {
            continue;
        }
        // Normalize the generator of the line: first nonzero coefficient 1.
        let norm = normalize_fp_line(&c, p);
        if seen.contains(&norm) {
            continue;
        }
        seen.push(norm.clone());
        let mut num = ClassVector::zero(complement.ambient().rank());
        for (ci, b) in norm.iter().zip(complement.basis()) {
            if *ci != 0 {
                num = num.add(&b.scale(&BigInt::from(*ci)));
            }
        }
        let Ok(over) = glue_overlattice(complement, &num, p) else {
            continue;
        };
        if over.lattice().is_unimodular() {
            out.push(num);
        }
    }
    Ok(out)
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Kernel of a symmetric integer matrix modulo a prime, as 0..p-1 vectors.
fn kernel_mod_p(gram: &[Vec<BigInt>], p: u32) -> Vec<Vec<u32>> {
    let n = gram.len();
    let pi = i64::from(p);
    let reduce = |x: &BigInt| -> i64 {
        x.mod_floor(&BigInt::from(p))
            .try_into()
            .expect("residue fits in i64")
    };
    let mut a: Vec<Vec<i64>> = gram
        .iter()
        .map(|row| row.iter().map(reduce).collect())
        .collect();
    let inv = |x: i64| -> i64 {
        // Fermat inverse; p is prime and x nonzero mod p.
        let mut result = 1i64;
        let mut base = x.rem_euclid(pi);
        let mut exp = pi - 2;
        while exp > 0 {
            if exp & 1 == 1 {
                result = result * base % pi;
            }
            base = base * base % pi;
            exp >>= 1;
        }
        result
    };
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(r) = (row..n).find(|&r| a[r][col] % pi != 0) else {
            continue;
        };
        a.swap(row, r);
        let f = inv(a[row][col]);
        for x in a[row].iter_mut() {
            *x = *x * f % pi;
        }
        for rr in 0..n {
            if rr != row && a[rr][col] % pi != 0 {
                let factor = a[rr][col];
                for c in 0..n {
                    a[rr][c] = (a[rr][c] - factor * a[row][c]).rem_euclid(pi);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == n {
            break;
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free {
        let mut v = vec![0u32; n];
        v[fc] = 1;
        for (ri, &pc) in pivots.iter().enumerate() {
            let val = (-a[ri][fc]).rem_euclid(pi);
            v[pc] = val as u32;
        }
        basis.push(v);
    }
    basis
}

/// All F_p linear combinations of the given vectors (lexicographic order of
/// coefficient tuples).
fn enumerate_fp_combinations(basis: &[Vec<u32>], p: u32) -> Vec<Vec<u32>> {
    if basis.is_empty() {
        return Vec::new();
    }
    let n = basis[0].len();
    let m = basis.len();
    let total = (p as usize).pow(m as u32);
    let mut out = Vec::with_capacity(total);
    for idx in 0..total {
        let mut rem = idx;
        let mut v = vec![0u32; n];
        for b in basis {
            let c = (rem % p as usize) as u32;
            rem /= p as usize;
            if c != 0 {
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi = (*vi + c * *bi) % p;
                }
            }
        }
        out.push(v);
    }
    out
}

fn normalize_fp_line(v: &[u32], p: u32) -> Vec<u32> {
    let first = v.iter().find(|&&x| x != 0).copied().unwrap_or(0);
    if first == 0 {
        return v.to_vec();
    }
    // Scale so the first nonzero coefficient is 1.
    let pi = i64::from(p);
    let mut inv = 1i64;
    for cand in 1..pi {
        if cand * i64::from(first) % pi == 1 {
            inv = cand;
            break;
        }
    }
    v.iter()
        .map(|&x| ((i64::from(x) * inv) % pi) as u32)
        .collect()
}

fn solve_rational(gram: &[Vec<BigInt>], t: &[BigInt]) -> Option<Vec<BigRational>> {
    let n = gram.len();
    let mut a: Vec<Vec<BigRational>> = gram
        .iter()
        .zip(t)
        .map(|(row, ti)| {
            row.iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .chain(std::iter::once(BigRational::from_integer(ti.clone())))
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let pv = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= pv.clone();
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=n {
                    let s = &f * &a[col][c];
                    a[r][c] -= s;
                }
            }
        }
    }
    Some((0..n).map(|r| a[r][n].clone()).collect())
}

// ---------------------------------------------------------------------------
// Assembled blow-down models
// ---------------------------------------------------------------------------

/// A fully assembled rational blow-down at the homology level: the upstairs
/// model, the configuration, its complement, the glued unimodular
/// overlattice, and the downstairs model with a descended chamber.
#[derive(Clone, Debug)]
pub struct BlowdownModel {
    pub upstairs: ManifoldModel,
    pub config: CpConfiguration,
    pub complement: Sublattice,
    pub overlattice: Overlattice,
    pub downstairs: ManifoldModel,
    pub chamber_up: ClassVector,
    pub chamber_down: ClassVector,
}

impl BlowdownModel {
    /// Builds the blow-down of `upstairs` along `config`, descending the
    /// chamber representative `chamber_up` (which must be orthogonal to the
    /// configuration).
    ///
    /// `complement_basis`, when given, replaces the canonical complement
    /// basis (it is checked to span the full orthogonal complement).
    /// `glue_num`, when given, is used as the glue class; otherwise the
    /// canonical unimodularizing glue is searched for, and the build fails
    /// if there is none.
    pub fn build(
        upstairs: ManifoldModel,
        config: CpConfiguration,
        chamber_up: ClassVector,
        complement_basis: Option<Vec<ClassVector>>,
        glue_num: Option<ClassVector>,
        label: impl Into<String>,
    ) -> Result<Self> {
        validate_config(upstairs.lattice(), &config)?;
        for s in config.spheres() {
            let pairing = upstairs.lattice().inner(&chamber_up, s)?;
            if !pairing.is_zero() {
                return Err(Error::InvalidChamber {
                    reason: format!("chamber representative pairs {pairing} with a configuration sphere; it must be orthogonal"),
                });
            }
        }
        let canonical = orthogonal_complement(upstairs.lattice(), config.spheres())?;
        let complement = match complement_basis {
            None => canonical,
            Some(basis) => {
                let sub = Sublattice::from_basis(upstairs.lattice().clone(), basis)?;
                if sub.rank() != canonical.rank() {
                    return Err(Error::DependentVectors {
                        rank: sub.rank(),
                        expected: canonical.rank(),
                    });
                }
                for b in sub.basis() {
                    if canonical.coordinates_of(b)?.is_none() {
                        return Err(Error::precondition(
                            "BlowdownModel::build",
                            "supplied basis vector is not orthogonal to the configuration",
                        ));
                    }
                }
                let det_sub = sub.gram().determinant();
                let det_canon = canonical.gram().determinant();
                if det_sub != det_canon {
                    return Err(Error::precondition(
                        "BlowdownModel::build",
                        format!(
                            "supplied basis spans index > 1 (determinant {det_sub} vs complement {det_canon})"
                        ),
                    ));
                }
                sub
            }
        };
        let p = config.p();
        let glue = match glue_num {
            Some(g) => g,
            None => find_glue(&complement, p)?
                .into_iter()
                .next()
                .ok_or_else(|| Error::GlueRejected {
                    reason: format!("no index-{p} unimodular overlattice exists"),
                })?,
        };
        let overlattice = glue_overlattice(&complement, &glue, p)?;
        if !overlattice.lattice().is_unimodular() {
            return Err(Error::NotUnimodular {
                determinant: overlattice.lattice().determinant(),
            });
        }
        let chamber_down = overlattice
            .descend_class(&chamber_up)?
            .coords;
        let label = label.into();
        let downstairs = ManifoldModel::new(
            overlattice.lattice().clone().with_label(label.clone()),
            chamber_down.clone(),
            label,
        )?;
        // The homotopy bookkeeping must agree with the lattice-level build.
        let (e_after, sigma_after) = betti_after_blowdown(&upstairs, &config)?;
        if downstairs.euler() != e_after || downstairs.sigma() != sigma_after {
            return Err(Error::InvalidModel {
                reason: format!(
                    "blow-down bookkeeping mismatch: lattice gives (e, sigma) = ({}, {}), counting gives ({e_after}, {sigma_after})",
                    downstairs.euler(),
                    downstairs.sigma()
                ),
            });
        }
        Ok(BlowdownModel {
            upstairs,
            config,
            complement,
            overlattice,
            downstairs,
            chamber_up,
            chamber_down,
        })
    }

    /// Descends every entry of an upstairs SW table. Each class must
    /// satisfy the descent criterion; its value and expected dimension are
    /// preserved.
    pub fn descend_report(&self, report: &SwReport) -> Result<SwReport> {
        let mut entries = Vec::with_capacity(report.entries.len());
        for entry in &report.entries {
            let assessment = liftable_thm(self.upstairs.lattice(), &entry.class, &self.config)?;
            if !assessment.liftable {
                return Err(Error::precondition(
                    "descend_report",
                    format!("class {} does not descend", entry.class),
                ));
            }
            let descended = self.overlattice.descend_class(&entry.class)?;
            let d_down = self.downstairs.d_invariant(&descended.coords)?;
            if d_down != entry.d {
                return Err(Error::precondition(
                    "descend_report",
                    format!(
                        "expected dimension changed under descent ({} vs {})",
                        entry.d, d_down
                    ),
                ));
            }
            entries.push(SwEntry {
                class: descended.coords,
                d: d_down,
                value: entry.value.clone(),
            });
        }
        Ok(SwReport {
            manifold: self.downstairs.label().to_string(),
            chamber: self.chamber_down.clone(),
            orientation: self.downstairs.orientation().clone(),
            entries,
            candidates_examined: report.candidates_examined,
            on_wall_skipped: report.on_wall_skipped,
            derived: report.derived,
        })
    }
}
