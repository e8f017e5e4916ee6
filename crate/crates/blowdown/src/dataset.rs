//! Frozen arithmetic data for the worked constructions.
//!
//! Everything here is an explicit integer vector in a diagonal lattice
//! `diag(1, n)`: the fiber-side sphere chains, the characteristic classes
//! whose Seiberg-Witten values drive the constructions, the chamber
//! representatives, and the orthogonal-complement bases used to glue the
//! blown-down intersection forms. The unit tests and the verification
//! sections re-derive every claimed property of these constants from
//! scratch; this module only stores them.
//!
//! The Kirby-move scripts and manifests shipped with the crate are also
//! embedded here as plain text, keyed by name.

use std::sync::OnceLock;

use crate::lattice::{ClassVector, Lattice};
use crate::rbd::{standard_p_cq, CpConfiguration};

/// The frozen constants, grouped by construction track.
pub struct Dataset {
    /// `diag(1, 9)`: the minimal fiber ambient.
    pub ambient9: Lattice,
    /// `diag(1, 11)`: ambient of the `C_3` track.
    pub ambient11: Lattice,
    /// `diag(1, 13)`: ambient of both `C_5` tracks.
    pub ambient13: Lattice,
    /// Fiber class `6h - 2e1 - ... - 2e9` (square 0) in `diag(1, 9)`.
    pub fiber: ClassVector,

    /// The double-fiber chain `C_3` in `diag(1, 11)`.
    pub q3_config: CpConfiguration,
    /// `3h - e1 - ... - e11`: the descending characteristic class.
    pub q3_k_up: ClassVector,
    /// `7h - 2e1 - ... - 2e11`: chamber representative orthogonal to the
    /// chain (square 5).
    pub q3_chamber: ClassVector,
    /// Basis `alpha1, ..., alpha9, beta` of the orthogonal complement of
    /// the chain (determinant -9).
    pub q3_complement_basis: Vec<ClassVector>,
    /// `beta = 30h - 13e1 - 10e2 - 7e3 - ... - 7e9 - 12e10 - 12e11`
    /// (square 0): `beta / 3` glues the complement to a unimodular form.
    pub q3_beta: ClassVector,

    /// The double-fiber chain `C_5` in `diag(1, 13)`.
    pub q5_config: CpConfiguration,
    /// `3h - e1 - ... - e13`.
    pub q5_k_up: ClassVector,
    /// `35h - 10(e1 + ... + e9) - 6(e10 + ... + e13)`: chamber
    /// representative orthogonal to the chain (square 181).
    pub q5_chamber: ClassVector,
    /// Basis of the orthogonal complement of the `C_5` chain: nine
    /// pairwise-orthogonal square `-1` classes and `beta5` of square 25.
    pub q5_complement_basis: Vec<ClassVector>,
    /// `beta5` (square 25): `beta5 / 5` glues the complement to the
    /// diagonal form outright.
    pub q5_beta: ClassVector,

    /// The twisted chain `C_5'` in `diag(1, 13)` from the 3-handle-free
    /// picture.
    pub prime_config: CpConfiguration,
    /// `3h + e1 + e2 - e3 - ... - e13` (square -4).
    pub prime_k_up: ClassVector,
    /// `23h + 6e1 + 6e2 - 6e3 - ... - 6e13`: chamber representative
    /// orthogonal to the chain (square 61).
    pub prime_chamber: ClassVector,
    /// `3h + e1 - e3 - e4 - e5 - e6 - e7 - e10 - e11 - e12 - e13`: a square
    /// `-1` class orthogonal to the chain pairing `-1` with `prime_k_up`
    /// (the preferred splitter on this side).
    pub prime_alpha: ClassVector,
    /// The twisted fiber `6h + e1 + e2 - 2e3 - ... - 2e11` (square -2).
    pub prime_fiber: ClassVector,
}

static BUILTIN: OnceLock<Dataset> = OnceLock::new();

/// The builtin dataset (constructed once, then shared).
pub fn builtin() -> &'static Dataset {
    BUILTIN.get_or_init(|| {
        let (ambient11, q3_config) = standard_p_cq(2, 3).expect("standard C_3 chain");
        let (ambient13, q5_config) = standard_p_cq(2, 5).expect("standard C_5 chain");
        let cv = ClassVector::from_i64;
        let q3_complement_basis = vec![
            cv(&[4, -1, -1, -1, -1, -1, -1, -1, -1, -1, -2, -2]),
            cv(&[5, -2, -2, -2, -1, -1, -1, -1, -1, -1, -2, -2]),
            cv(&[5, -2, -2, -1, -2, -1, -1, -1, -1, -1, -2, -2]),
            cv(&[5, -2, -2, -1, -1, -2, -1, -1, -1, -1, -2, -2]),
            cv(&[5, -2, -2, -1, -1, -1, -2, -1, -1, -1, -2, -2]),
            cv(&[5, -2, -2, -1, -1, -1, -1, -2, -1, -1, -2, -2]),
            cv(&[5, -2, -2, -1, -1, -1, -1, -1, -2, -1, -2, -2]),
            cv(&[5, -2, -2, -1, -1, -1, -1, -1, -1, -2, -2, -2]),
            cv(&[0, 1, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0]),
            cv(&[30, -13, -10, -7, -7, -7, -7, -7, -7, -7, -12, -12]),
        ];
        let q3_beta = q3_complement_basis[9].clone();
        let q5_complement_basis = vec![
            cv(&[17, -3, -5, -4, -4, -4, -4, -4, -4, -4, -6, -6, -6, -6]),
            cv(&[17, -3, -4, -5, -4, -4, -4, -4, -4, -4, -6, -6, -6, -6]),
            cv(&[17, -3, -4, -4, -5, -4, -4, -4, -4, -4, -6, -6, -6, -6]),
            cv(&[17, -3, -4, -4, -4, -5, -4, -4, -4, -4, -6, -6, -6, -6]),
            cv(&[17, -3, -4, -4, -4, -4, -5, -4, -4, -4, -6, -6, -6, -6]),
            cv(&[17, -3, -4, -4, -4, -4, -4, -5, -4, -4, -6, -6, -6, -6]),
            cv(&[17, -3, -4, -4, -4, -4, -4, -4, -5, -4, -6, -6, -6, -6]),
            cv(&[17, -3, -4, -4, -4, -4, -4, -4, -4, -5, -6, -6, -6, -6]),
            cv(&[96, -19, -23, -23, -23, -23, -23, -23, -23, -23, -34, -34, -34, -34]),
            cv(&[537, -104, -129, -129, -129, -129, -129, -129, -129, -129, -190, -190, -190, -190]),
        ];
        let q5_beta = q5_complement_basis[9].clone();
        let prime_config = CpConfiguration::new(
            5,
            vec![
                cv(&[0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, -1, 0, 0]),
                cv(&[0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, -1, 0]),
                cv(&[0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, -1]),
                cv(&[6, 1, 1, -2, -2, -2, -2, -2, -2, -2, -2, -2, -2, -1]),
            ],
        )
        .expect("four spheres for C_5");
        Dataset {
            ambient9: Lattice::diagonal(1, 9),
            ambient11,
            ambient13,
            fiber: cv(&[6, -2, -2, -2, -2, -2, -2, -2, -2, -2]),
            q3_config,
            q3_k_up: cv(&[3, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1]),
            q3_chamber: cv(&[7, -2, -2, -2, -2, -2, -2, -2, -2, -2, -2, -2]),
            q3_complement_basis,
            q3_beta,
            q5_config,
            q5_k_up: cv(&[3, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1]),
            q5_chamber: cv(&[35, -10, -10, -10, -10, -10, -10, -10, -10, -10, -6, -6, -6, -6]),
            q5_complement_basis,
            q5_beta,
            prime_config,
            prime_k_up: cv(&[3, 1, 1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1]),
            prime_chamber: cv(&[23, 6, 6, -6, -6, -6, -6, -6, -6, -6, -6, -6, -6, -6]),
            prime_alpha: cv(&[3, 1, 0, -1, -1, -1, -1, -1, 0, 0, -1, -1, -1, -1]),
            prime_fiber: cv(&[6, 1, 1, -2, -2, -2, -2, -2, -2, -2, -2, -2, 0, 0]),
        }
    })
}

/// Names of the builtin Kirby-move scripts, in replay order.
pub const SCRIPT_NAMES: [&str; 5] = [
    "lemma-3.1",
    "prop-3.2-q3",
    "prop-3.2-q5",
    "prop-3.3",
    "remark-6.1",
];

/// Source text of a builtin Kirby-move script.
pub fn builtin_script(name: &str) -> Option<&'static str> {
    match name {
        "lemma-3.1" => Some(include_str!("../scripts/lemma-3.1.kms")),
        "prop-3.2-q3" => Some(include_str!("../scripts/prop-3.2-q3.kms")),
        "prop-3.2-q5" => Some(include_str!("../scripts/prop-3.2-q5.kms")),
        "prop-3.3" => Some(include_str!("../scripts/prop-3.3.kms")),
        "remark-6.1" => Some(include_str!("../scripts/remark-6.1.kms")),
        _ => None,
    }
}

/// Names of the builtin manifests.
pub const MANIFEST_NAMES: [&str; 4] = ["r11-c3", "r13-c5", "r13-h5prime", "r9-any"];

/// Source text of a builtin manifest.
pub fn builtin_manifest(name: &str) -> Option<&'static str> {
    match name {
        "r11-c3" => Some(include_str!("../manifests/r11-c3.mf")),
        "r13-c5" => Some(include_str!("../manifests/r13-c5.mf")),
        "r13-h5prime" => Some(include_str!("../manifests/r13-h5prime.mf")),
        "r9-any" => Some(include_str!("../manifests/r9-any.mf")),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::gram_of;
    use crate::rbd::validate_config;
    use num_bigint::BigInt;
    use num_traits::Zero;

    #[test]
    fn configurations_are_valid_chains() {
        let d = builtin();
        validate_config(&d.ambient11, &d.q3_config).unwrap();
        validate_config(&d.ambient13, &d.q5_config).unwrap();
        validate_config(&d.ambient13, &d.prime_config).unwrap();
    }

    #[test]
    fn complement_bases_are_orthogonal_to_their_chains() {
        let d = builtin();
        for b in &d.q3_complement_basis {
            for u in d.q3_config.spheres() {
                assert!(d.ambient11.inner(b, u).unwrap().is_zero(), "{b} vs {u}");
            }
        }
        for b in &d.q5_complement_basis {
            for u in d.q5_config.spheres() {
                assert!(d.ambient13.inner(b, u).unwrap().is_zero(), "{b} vs {u}");
            }
        }
        for u in d.prime_config.spheres() {
            assert!(d.ambient13.inner(&d.prime_alpha, u).unwrap().is_zero());
            assert!(d.ambient13.inner(&d.prime_chamber, u).unwrap().is_zero());
        }
        for u in d.q3_config.spheres() {
            assert!(d.ambient11.inner(&d.q3_chamber, u).unwrap().is_zero());
        }
        for u in d.q5_config.spheres() {
            assert!(d.ambient13.inner(&d.q5_chamber, u).unwrap().is_zero());
        }
    }

    #[test]
    fn complement_gram_matrices() {
        let d = builtin();
        // C_3 track: diag(-1 x8), alpha9^2 = -2, beta^2 = 0, beta.alpha9 = 3.
        let g = gram_of(&d.ambient11, &d.q3_complement_basis);
        for i in 0..8 {
            for j in 0..10 {
                let expected = if i == j { BigInt::from(-1) } else { BigInt::zero() };
                assert_eq!(g[i][j], expected, "entry ({i}, {j})");
            }
        }
        assert_eq!(g[8][8], BigInt::from(-2));
        assert_eq!(g[8][9], BigInt::from(3));
        assert_eq!(g[9][9], BigInt::zero());
        // C_5 track: diag(-1 x9, 25).
        let g = gram_of(&d.ambient13, &d.q5_complement_basis);
        for i in 0..10 {
            for j in 0..10 {
                let expected = if i != j {
                    BigInt::zero()
                } else if i < 9 {
                    BigInt::from(-1)
                } else {
                    BigInt::from(25)
                };
                assert_eq!(g[i][j], expected, "entry ({i}, {j})");
            }
        }
    }

    #[test]
    fn key_squares_and_pairings() {
        let d = builtin();
        assert_eq!(d.ambient9.square(&d.fiber).unwrap(), BigInt::zero());
        assert_eq!(d.ambient11.square(&d.q3_k_up).unwrap(), BigInt::from(-2));
        assert_eq!(d.ambient11.square(&d.q3_chamber).unwrap(), BigInt::from(5));
        assert_eq!(
            d.ambient11.inner(&d.q3_k_up, &d.q3_chamber).unwrap(),
            BigInt::from(-1)
        );
        assert_eq!(d.ambient13.square(&d.q5_k_up).unwrap(), BigInt::from(-4));
        assert_eq!(d.ambient13.square(&d.q5_chamber).unwrap(), BigInt::from(181));
        assert_eq!(d.ambient13.square(&d.prime_k_up).unwrap(), BigInt::from(-4));
        assert_eq!(d.ambient13.square(&d.prime_chamber).unwrap(), BigInt::from(61));
        assert_eq!(
            d.ambient13.inner(&d.prime_k_up, &d.prime_chamber).unwrap(),
            BigInt::from(-9)
        );
        assert_eq!(d.ambient13.square(&d.prime_alpha).unwrap(), BigInt::from(-1));
        assert_eq!(
            d.ambient13.inner(&d.prime_k_up, &d.prime_alpha).unwrap(),
            BigInt::from(-1)
        );
        assert_eq!(d.ambient13.square(&d.prime_fiber).unwrap(), BigInt::from(-2));
        // The heavy-end pairings that drive the descent conditions.
        assert_eq!(
            d.ambient11
                .inner(&d.q3_k_up, d.q3_config.last_sphere())
                .unwrap(),
            BigInt::from(-3)
        );
        assert_eq!(
            d.ambient13
                .inner(&d.q5_k_up, d.q5_config.last_sphere())
                .unwrap(),
            BigInt::from(-5)
        );
        assert_eq!(
            d.ambient13
                .inner(&d.prime_k_up, d.prime_config.last_sphere())
                .unwrap(),
            BigInt::from(-5)
        );
    }

    #[test]
    fn builtin_texts_resolve() {
        for name in SCRIPT_NAMES {
            assert!(builtin_script(name).is_some(), "{name}");
        }
        for name in MANIFEST_NAMES {
            assert!(builtin_manifest(name).is_some(), "{name}");
        }
        assert!(builtin_script("nonexistent").is_none());
        assert!(builtin_manifest("nonexistent").is_none());
    }
}
