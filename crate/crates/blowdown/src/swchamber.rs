//! Chambers and the wall-crossing formula for Seiberg-Witten invariants of
//! simply connected 4-manifolds with `b2+ = 1`.
//!
//! With `b2+ = 1` the positive cone in `H^2(X; R)` has two components; a
//! period point (chamber representative) is a class of positive square in
//! the forward component, and the small-perturbation SW invariant of a
//! characteristic class `K` depends on the chamber only through the signs
//! of `K . H`. Crossing a wall changes the invariant by `±1` according to
//! the sign pattern and the parity of the expected dimension.
//!
//! The normalization used here: for a rational surface model `R_n`
//! (`CP^2 # n CP^2-bar`) the invariant vanishes in the chamber of the
//! hyperplane class `h`, and for chambers `H`, `H'` with `H . H' > 0`,
//!
//! ```text
//! SW_{H'}(K) = SW_H(K) + (s(H) - s(H')) * (-1)^(d/2),   s(H) = [K . H < 0]
//! ```
//!
//! where `d = (K^2 - 2e - 3sigma) / 4` is the expected dimension. The
//! increment is a coboundary in the chamber graph, so crossing is
//! transitive across any chain of pairwise-compatible chambers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{ClassVector, Lattice};

/// A `b2+ = 1` model: the intersection lattice plus the homotopy data
/// (Euler characteristic, signature) needed for dimension counts, and a
/// positive-square class fixing the forward cone.
#[derive(Clone, Debug)]
pub struct ManifoldModel {
    lattice: Lattice,
    euler: i64,
    sigma: i64,
    orientation: ClassVector,
    label: String,
}

impl ManifoldModel {
    /// Builds a model from an intersection lattice, deriving `e = 2 + rank`
    /// and `sigma` from the signature (simply connected, so `b2 = rank`).
    ///
    /// Requires a nondegenerate unimodular-rank lattice with `b2+ = 1` and
    /// an orientation class of positive square.
    pub fn new(lattice: Lattice, orientation: ClassVector, label: impl Into<String>) -> Result<Self> {
        let sig = lattice.signature();
        if sig.zero > 0 {
            return Err(Error::DegenerateForm { radical: sig.zero });
        }
        if sig.positive != 1 {
            return Err(Error::InvalidModel {
                reason: format!("b2+ must be 1, found {}", sig.positive),
            });
        }
        let square = lattice.square(&orientation)?;
        if !square.is_positive() {
            return Err(Error::InvalidModel {
                reason: format!("orientation class has non-positive square {square}"),
            });
        }
        let euler = 2 + lattice.rank() as i64;
        let sigma = sig.positive as i64 - sig.negative as i64;
        Ok(ManifoldModel {
            lattice,
            euler,
            sigma,
            orientation,
            label: label.into(),
        })
    }

    /// The rational surface model `R_n = CP^2 # n CP^2-bar`: lattice
    /// `diag(1, n)`, oriented by the hyperplane class `h`.
    pub fn rational_surface(n: usize) -> Self {
        let lattice = Lattice::diagonal(1, n);
        let orientation = ClassVector::standard_basis(n + 1, 0);
        ManifoldModel::new(lattice, orientation, format!("R{n}"))
            .expect("diagonal (1, n) is a valid model")
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn euler(&self) -> i64 {
        self.euler
    }

    pub fn sigma(&self) -> i64 {
        self.sigma
    }

    pub fn orientation(&self) -> &ClassVector {
        &self.orientation
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Expected dimension `d = (K^2 - 2e - 3sigma) / 4` of the SW moduli
    /// space for a characteristic class `K`. For these models `d` is always
    /// an even integer; a non-integral value means the input was not
    /// characteristic (rejected first) or the model data is inconsistent.
    pub fn d_invariant(&self, k: &ClassVector) -> Result<BigInt> {
        self.lattice.require_characteristic(k)?;
        let ksq = self.lattice.square(k)?;
        let num = ksq - BigInt::from(2 * self.euler + 3 * self.sigma);
        let (d, rem) = num.div_rem(&BigInt::from(4));
        if !rem.is_zero() || d.is_odd() {
            return Err(Error::InvalidModel {
                reason: format!("expected dimension {num}/4 is not an even integer"),
            });
        }
        Ok(d)
    }

    /// Validates a chamber representative: positive square, forward cone.
    pub fn chamber(&self, rep: ClassVector) -> Result<Chamber> {
        let square = self.lattice.square(&rep)?;
        if !square.is_positive() {
            return Err(Error::InvalidChamber {
                reason: format!("representative has non-positive square {square}"),
            });
        }
        let side = self.lattice.inner(&rep, &self.orientation)?;
        if !side.is_positive() {
            return Err(Error::InvalidChamber {
                reason: format!("representative pairs {side} with the orientation class; it must lie in the forward cone"),
            });
        }
        Ok(Chamber { rep })
    }

    /// The chamber of the orientation class itself.
    pub fn base_chamber(&self) -> Chamber {
        Chamber {
            rep: self.orientation.clone(),
        }
    }

    /// True when the invariant cannot depend on the chamber: with
    /// `b2- <= 9` no characteristic class of nonnegative expected dimension
    /// has walls inside the positive cone.
    pub fn chamber_independent(&self) -> bool {
        self.lattice.signature().negative <= 9
    }
}

/// A chamber of the forward positive cone, named by a representative of
/// positive square. Two representatives name the same chamber when no wall
/// `K^perp` separates them; all formulas below depend only on sign data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chamber {
    rep: ClassVector,
}

impl Chamber {
    pub fn representative(&self) -> &ClassVector {
        &self.rep
    }
}

/// Outcome of an SW evaluation: either an actual wall-crossed value, or the
/// zero forced by a negative-dimensional moduli space (reported distinctly
/// so callers can tell "computed 0" from "0 by dimension").
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SwOutcome {
    Value(BigInt),
    NegativeDimension,
}

impl SwOutcome {
    /// The numeric value, with the dimension-forced case collapsing to 0.
    pub fn value(&self) -> BigInt {
        match self {
            SwOutcome::Value(v) => v.clone(),
            SwOutcome::NegativeDimension => BigInt::zero(),
        }
    }
}

/// One enumerated basic-class entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwEntry {
    pub class: ClassVector,
    pub d: BigInt,
    pub value: BigInt,
}

/// A chamber-tagged table of SW values, with search diagnostics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwReport {
    pub manifold: String,
    pub chamber: ClassVector,
    pub orientation: ClassVector,
    pub entries: Vec<SwEntry>,
    /// Candidate vectors inspected by the search that produced this table
    /// (0 when the table was built directly).
    pub candidates_examined: u64,
    /// Candidates discarded because the class sat on the chamber wall.
    pub on_wall_skipped: u64,
    /// True when the table is computed rather than copied from a source;
    /// carried into reports so downstream consumers can tell pinned data
    /// from derived data.
    pub derived: bool,
}

fn sign_state(pairing: &BigInt) -> bool {
    pairing.is_negative()
}

/// The wall-crossing increment `(s(from) - s(to)) * (-1)^(d/2)` added to a
/// base value when moving a characteristic class `k` between chambers.
///
/// Preconditions: `k` characteristic; `d(k) >= 0`; `from . to > 0` (the
/// chambers lie in a common forward cone); `k` pairs nonzero with both
/// representatives (neither sits on the wall `k^perp`).
pub fn wall_cross(
    model: &ManifoldModel,
    k: &ClassVector,
    base: &BigInt,
    from: &Chamber,
    to: &Chamber,
) -> Result<BigInt> {
    let d = model.d_invariant(k)?;
    if d.is_negative() {
        return Err(Error::WallCrossing {
            reason: format!("expected dimension {d} is negative"),
        });
    }
    let compat = model.lattice().inner(&from.rep, &to.rep)?;
    if !compat.is_positive() {
        return Err(Error::WallCrossing {
            reason: format!("chamber representatives pair {compat}; they must pair positively"),
        });
    }
    let kf = model.lattice().inner(k, &from.rep)?;
    let kt = model.lattice().inner(k, &to.rep)?;
    if kf.is_zero() || kt.is_zero() {
        return Err(Error::WallCrossing {
            reason: "class lies on a chamber wall (zero pairing with a representative)".into(),
        });
    }
    let s_from = sign_state(&kf);
    let s_to = sign_state(&kt);
    if s_from == s_to {
        return Ok(base.clone());
    }
    let half_d = &d / BigInt::from(2);
    let unit = if half_d.is_odd() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    // s jumps 0 -> 1 (K . H positive to negative) adds +unit; 1 -> 0
    // subtracts it.
    let delta = if s_to { unit } else { -unit };
    Ok(base + delta)
}

/// SW invariant of a characteristic class on a rational surface `R_n` in a
/// given chamber, from the vanishing normalization in the chamber of `h`.
///
/// Negative expected dimension is reported as
/// [`SwOutcome::NegativeDimension`], not an error.
pub fn sw_rational_surface(
    model: &ManifoldModel,
    k: &ClassVector,
    chamber: &Chamber,
) -> Result<SwOutcome> {
    if model.lattice().as_diagonal_one_n().is_none() {
        return Err(Error::InvalidModel {
            reason: "vanishing normalization requires a rational surface model diag(1, n)".into(),
        });
    }
    let d = model.d_invariant(k)?;
    if d.is_negative() {
        return Ok(SwOutcome::NegativeDimension);
    }
    let base = model.base_chamber();
    let value = wall_cross(model, k, &BigInt::zero(), &base, chamber)?;
    Ok(SwOutcome::Value(value))
}
