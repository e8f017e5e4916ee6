//! Exhaustive basic-class enumeration on rational surfaces.
//!
//! A basic class in a chamber of `diag(1, n)` is a characteristic vector
//! `K = (a; b1, ..., bn)` with nonnegative even expected dimension whose
//! wall-crossed Seiberg-Witten value is nonzero. Starting from the
//! vanishing normalization in the chamber of `h`, the value is nonzero
//! exactly when the hyperplane `K^perp` separates `h` from the chamber
//! representative `H`, which pins the search into a finite box:
//!
//! * `d >= 0` bounds the negative part, `sum b_i^2 <= a^2 + D` where
//!   `D = -(2e + 3*sigma) = n - 9`;
//! * a sign flip of `K . H` against `K . h = a` forces, by the
//!   Cauchy-Schwarz inequality, `a^2 H^2 < S D` with `S` the sum of squares
//!   of the exceptional coordinates of `H` (see [`a_bound`]).
//!
//! Only vectors with positive leading coordinate are walked (the counter
//! reports exactly these); every hit `K` is emitted together with its
//! mirror `-K`, whose value is the exact negation. Candidate generation
//! runs on `i64` with checked arithmetic, and every accepted class is
//! re-verified with big-integer lattice arithmetic before it enters the
//! report.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::lattice::ClassVector;
use crate::swchamber::{Chamber, ManifoldModel, SwEntry, SwReport};

/// Parameters for one enumeration run.
pub struct SearchSpec<'a> {
    pub model: &'a ManifoldModel,
    pub chamber: &'a Chamber,
    /// Worker threads to spread the leading-coordinate slices over (at
    /// least 1; slices are merged in a fixed order, so the result does not
    /// depend on this).
    pub workers: usize,
    /// Replaces the derived leading-coordinate bound. Raising it only adds
    /// vectors that cannot flip sign (useful as a cross-check); lowering it
    /// truncates the search.
    pub a_bound_override: Option<u64>,
}

impl<'a> SearchSpec<'a> {
    pub fn new(model: &'a ManifoldModel, chamber: &'a Chamber) -> Self {
        SearchSpec {
            model,
            chamber,
            workers: 1,
            a_bound_override: None,
        }
    }
}

/// The largest odd `a > 0` admitting a sign flip `K . H < 0 < K . h = a`
/// within `d >= 0`: the largest odd `a` with `a^2 H^2 < S D`. `None` means
/// no leading coordinate works and enumeration is empty outright.
pub fn a_bound(model: &ManifoldModel, chamber: &Chamber) -> Result<Option<u64>> {
    require_diagonal(model)?;
    let rep = chamber.representative();
    let h2 = model.lattice().square(rep)?;
    let s: BigInt = rep.coords()[1..].iter().map(|c| c * c).sum();
    let d_cap = dimension_offset(model);
    let product = s * d_cap;
    if product <= h2 {
        // Even a = 1 fails: a^2 H^2 = H^2 >= S D.
        return Ok(None);
    }
    let amax = ((product - 1u32) / h2).sqrt();
    let amax: u64 = amax
        .try_into()
        .map_err(|_| Error::InvalidSearch {
            reason: "leading-coordinate bound exceeds u64".into(),
        })?;
    Ok(Some(if amax % 2 == 1 { amax } else { amax - 1 }))
}

/// Enumerates every basic class of the chamber, exactly.
pub fn enumerate_basic(spec: &SearchSpec) -> Result<SwReport> {
    let model = spec.model;
    let chamber = spec.chamber;
    let n = require_diagonal(model)?;
    let rep = chamber.representative();
    // The vanishing normalization lives in the chamber of h; the a > 0
    // partition below identifies the base sign state with sign(a).
    if model.orientation() != &ClassVector::standard_basis(n + 1, 0) {
        return Err(Error::InvalidModel {
            reason: "enumeration requires the forward cone oriented by h".into(),
        });
    }
    let bound = match spec.a_bound_override {
        Some(b) => {
            if b % 2 == 0 {
                return Err(Error::InvalidSearch {
                    reason: format!("leading-coordinate bound {b} must be odd"),
                });
            }
            Some(b)
        }
        None => a_bound(model, chamber)?,
    };
    let d_cap: i64 = dimension_offset(model).try_into().map_err(|_| Error::InvalidSearch {
        reason: "dimension offset exceeds i64".into(),
    })?;
    let mut h_coords = Vec::with_capacity(n + 1);
    for c in rep.coords() {
        let c: i64 = c.try_into().map_err(|_| Error::InvalidSearch {
            reason: format!("chamber coordinate {c} exceeds the i64 fast path"),
        })?;
        h_coords.push(c);
    }
    let mut entries: Vec<SwEntry> = Vec::new();
    let mut candidates_examined: u64 = 0;
    let mut on_wall_skipped: u64 = 0;
    if let Some(bound) = bound {
        let a_values: Vec<i64> = (1..=bound as i64).step_by(2).collect();
        let workers = spec.workers.max(1).min(a_values.len().max(1));
        let slices: Vec<SliceResult> = std::thread::scope(|scope| {
            let mut handles = Vec::with_capacity(workers);
            let h_coords = &h_coords;
            for offset in 0..workers {
                let worker_as: Vec<i64> = a_values
                    .iter()
                    .copied()
                    .skip(offset)
                    .step_by(workers)
                    .collect();
                handles.push(scope.spawn(move || {
                    let mut out = Vec::with_capacity(worker_as.len());
                    for a in worker_as {
                        out.push((a, walk_slice(a, n, d_cap, h_coords)));
                    }
                    out
                }));
            }
            let mut collected: Vec<(i64, Result<SliceResult>)> = Vec::new();
            for handle in handles {
                collected.extend(handle.join().expect("enumeration worker panicked"));
            }
            collected.sort_by_key(|(a, _)| *a);
            collected.into_iter().map(|(_, r)| r).collect::<Result<Vec<_>>>()
        })?;
        for slice in slices {
            candidates_examined += slice.examined;
            on_wall_skipped += slice.on_wall;
            for coords in slice.hits {
                let k = ClassVector::from_i64(&coords);
                // Exact re-verification of the fast-path hit.
                model.lattice().require_characteristic(&k)?;
                let d = model.d_invariant(&k)?;
                if d.is_negative() {
                    return Err(Error::InvalidSearch {
                        reason: format!("fast path accepted {k} with negative dimension"),
                    });
                }
                let pairing = model.lattice().inner(&k, rep)?;
                if !pairing.is_negative() {
                    return Err(Error::InvalidSearch {
                        reason: format!("fast path accepted {k} without a sign flip"),
                    });
                }
                let half = &d / BigInt::from(2);
                let unit = if half.is_odd() {
                    -BigInt::one()
                } else {
                    BigInt::one()
                };
                entries.push(SwEntry {
                    class: k.neg(),
                    d: d.clone(),
                    value: -&unit,
                });
                entries.push(SwEntry {
                    class: k,
                    d,
                    value: unit,
                });
            }
        }
    }
    entries.sort_by(|x, y| x.class.cmp(&y.class));
    Ok(SwReport {
        manifold: model.label().to_string(),
        chamber: rep.clone(),
        orientation: model.orientation().clone(),
        entries,
        candidates_examined,
        on_wall_skipped,
        // A searched table is a computed artifact, as opposed to one
        // transcribed from pinned values.
        derived: true,
    })
}

struct SliceResult {
    hits: Vec<Vec<i64>>,
    examined: u64,
    on_wall: u64,
}

/// Walks all odd vectors `(a; b1, ..., bn)` with `sum b_i^2 <= a^2 + D`
/// for one fixed `a > 0`, recording those with `K . H < 0`.
fn walk_slice(a: i64, n: usize, d_cap: i64, h_coords: &[i64]) -> Result<SliceResult> {
    let budget = a
        .checked_mul(a)
        .and_then(|a2| a2.checked_add(d_cap))
        .ok_or_else(|| overflow("leading coordinate"))?;
    let mut result = SliceResult {
        hits: Vec::new(),
        examined: 0,
        on_wall: 0,
    };
    if budget < n as i64 {
        return Ok(result);
    }
    // Partial pairing starts from the h part of K . H.
    let start = a.checked_mul(h_coords[0]).ok_or_else(|| overflow("pairing"))?;
    let mut coords = vec![0i64; n + 1];
    coords[0] = a;
    descend(1, budget, start, &mut coords, n, h_coords, &mut result)?;
    Ok(result)
}

fn descend(
    i: usize,
    remaining: i64,
    pairing: i64,
    coords: &mut Vec<i64>,
    n: usize,
    h_coords: &[i64],
    result: &mut SliceResult,
) -> Result<()> {
    if i > n {
        result.examined += 1;
        match pairing.cmp(&0) {
            std::cmp::Ordering::Less => result.hits.push(coords.clone()),
            std::cmp::Ordering::Equal => result.on_wall += 1,
            std::cmp::Ordering::Greater => {}
        }
        return Ok(());
    }
    // Every remaining coordinate is odd, so costs at least 1.
    let left_after = (n - i) as i64;
    let mut mag = 1i64;
    while mag * mag + left_after <= remaining {
        for b in [-mag, mag] {
            coords[i] = b;
            let term = b
                .checked_mul(h_coords[i])
                .ok_or_else(|| overflow("pairing"))?;
            let next = pairing.checked_sub(term).ok_or_else(|| overflow("pairing"))?;
            descend(i + 1, remaining - mag * mag, next, coords, n, h_coords, result)?;
        }
        mag += 2;
    }
    coords[i] = 0;
    Ok(())
}

fn overflow(what: &str) -> Error {
    Error::InvalidSearch {
        reason: format!("integer overflow computing the {what}; coordinates too large"),
    }
}

fn require_diagonal(model: &ManifoldModel) -> Result<usize> {
    model
        .lattice()
        .as_diagonal_one_n()
        .ok_or_else(|| Error::InvalidModel {
            reason: "enumeration requires a rational surface model diag(1, n)".into(),
        })
}

/// `D = -(2e + 3 sigma)`: the constant making `d = (K^2 + D) / 4`.
fn dimension_offset(model: &ManifoldModel) -> BigInt {
    BigInt::from(-(2 * model.euler() + 3 * model.sigma()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset;
    use num_traits::Zero;

    fn chamber_of(model: &ManifoldModel, rep: &ClassVector) -> Chamber {
        model.chamber(rep.clone()).expect("valid chamber")
    }

    #[test]
    fn leading_bounds_match_hand_computation() {
        let data = dataset::builtin();
        let r11 = ManifoldModel::rational_surface(11);
        let c = chamber_of(&r11, &data.q3_chamber);
        assert_eq!(a_bound(&r11, &c).unwrap(), Some(3));
        let r13 = ManifoldModel::rational_surface(13);
        let c = chamber_of(&r13, &data.prime_chamber);
        assert_eq!(a_bound(&r13, &c).unwrap(), Some(5));
        let c = chamber_of(&r13, &data.q5_chamber);
        assert_eq!(a_bound(&r13, &c).unwrap(), Some(3));
        let r9 = ManifoldModel::rational_surface(9);
        let c = r9.base_chamber();
        assert_eq!(a_bound(&r9, &c).unwrap(), None);
    }

    #[test]
    fn r11_chamber_has_exactly_the_tilde_pair() {
        let data = dataset::builtin();
        let r11 = ManifoldModel::rational_surface(11);
        let c = chamber_of(&r11, &data.q3_chamber);
        let report = enumerate_basic(&SearchSpec::new(&r11, &c)).unwrap();
        assert_eq!(report.entries.len(), 2);
        assert_eq!(report.entries[0].class, data.q3_k_up.neg());
        assert_eq!(report.entries[0].value, BigInt::from(-1));
        assert_eq!(report.entries[1].class, data.q3_k_up);
        assert_eq!(report.entries[1].value, BigInt::one());
        assert!(report.entries.iter().all(|e| e.d.is_zero()));
        assert_eq!(report.candidates_examined, 2048);
        assert_eq!(report.on_wall_skipped, 0);
    }

    #[test]
    fn r13_primed_chamber_has_exactly_the_primed_pair() {
        let data = dataset::builtin();
        let r13 = ManifoldModel::rational_surface(13);
        let c = chamber_of(&r13, &data.prime_chamber);
        let report = enumerate_basic(&SearchSpec::new(&r13, &c)).unwrap();
        assert_eq!(report.entries.len(), 2);
        assert_eq!(report.entries[0].class, data.prime_k_up.neg());
        assert_eq!(report.entries[0].value, BigInt::from(-1));
        assert_eq!(report.entries[1].class, data.prime_k_up);
        assert_eq!(report.entries[1].value, BigInt::one());
        // a = 3 contributes 2^13 complete vectors, a = 5 contributes
        // (1 + 13 + 78) * 2^13, a = 1 none.
        assert_eq!(report.candidates_examined, 8192 + 92 * 8192);
        assert_eq!(report.on_wall_skipped, 0);
    }

    #[test]
    fn r13_fiber_sum_chamber_has_exactly_the_all_minus_pair() {
        let data = dataset::builtin();
        let r13 = ManifoldModel::rational_surface(13);
        let c = chamber_of(&r13, &data.q5_chamber);
        let report = enumerate_basic(&SearchSpec::new(&r13, &c)).unwrap();
        assert_eq!(report.entries.len(), 2);
        assert_eq!(report.entries[0].class, data.q5_k_up.neg());
        assert_eq!(report.entries[1].class, data.q5_k_up);
        assert!(report.entries.iter().all(|e| e.d.is_zero()));
    }

    #[test]
    fn r9_is_empty_for_any_chamber() {
        let r9 = ManifoldModel::rational_surface(9);
        for rep in [
            ClassVector::from_i64(&[1, 0, 0, 0, 0, 0, 0, 0, 0, 0]),
            ClassVector::from_i64(&[2, 1, 0, 0, 0, 0, 0, 0, 0, 1]),
            ClassVector::from_i64(&[4, -2, 1, -1, 1, 0, 0, 2, 0, 1]),
        ] {
            let c = chamber_of(&r9, &rep);
            let report = enumerate_basic(&SearchSpec::new(&r9, &c)).unwrap();
            assert!(report.entries.is_empty(), "chamber {rep}");
            assert_eq!(report.candidates_examined, 0);
        }
    }

    #[test]
    fn workers_do_not_change_the_report() {
        let data = dataset::builtin();
        let r13 = ManifoldModel::rational_surface(13);
        let c = chamber_of(&r13, &data.prime_chamber);
        let mut spec = SearchSpec::new(&r13, &c);
        let one = enumerate_basic(&spec).unwrap();
        spec.workers = 4;
        let four = enumerate_basic(&spec).unwrap();
        assert_eq!(one.entries, four.entries);
        assert_eq!(one.candidates_examined, four.candidates_examined);
    }

    #[test]
    fn override_extends_the_window_without_new_hits() {
        let data = dataset::builtin();
        let r11 = ManifoldModel::rational_surface(11);
        let c = chamber_of(&r11, &data.q3_chamber);
        let mut spec = SearchSpec::new(&r11, &c);
        spec.a_bound_override = Some(5);
        let report = enumerate_basic(&spec).unwrap();
        assert_eq!(report.entries.len(), 2, "wider window finds no further classes");
        assert!(report.candidates_examined > 2048);
        spec.a_bound_override = Some(4);
        assert!(enumerate_basic(&spec).is_err(), "even bound rejected");
    }
}
