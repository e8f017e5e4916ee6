//! Exact-arithmetic homology of rational blow-down constructions on
//! simply connected 4-manifolds with `b2+ = 1`.
//!
//! The crate computes, over arbitrary-precision integers and rationals:
//!
//! * integral lattices, characteristic classes, orthogonal complements,
//!   and canonical solutions of pairing constraints ([`lattice`]);
//! * Seiberg-Witten invariants of rational surfaces through the
//!   wall-crossing formula, including chamber bookkeeping ([`swchamber`]);
//! * the homological layer of rational blow-downs: plumbing-chain
//!   configurations, lift conditions for characteristic classes, and
//!   index-p overlattice gluing ([`rbd`]);
//! * exhaustive basic-class enumeration in a fixed chamber ([`basiclasses`]);
//! * normal forms of characteristic vectors under the isometry group and
//!   the assembly of lattice isomorphisms aligning two models ([`normalform`]);
//! * replay of handle-calculus move scripts against a ledger of handle
//!   counts and 2-handle classes ([`kirbytrace`]).
//!
//! A bundled dataset ([`dataset`]) pins down the worked examples the
//! library is validated against; `blowdown verify-paper` re-derives every
//! number in it from scratch.
//!
//! No floating point is used anywhere: all pairings, determinants,
//! signatures, and projections are exact.

pub mod basiclasses;
pub mod dataset;
pub mod error;
pub mod kirbytrace;
pub mod lattice;
pub mod manifest;
pub mod normalform;
pub mod rbd;
pub mod report;
pub mod swchamber;
pub mod verify;

pub use error::{Error, Result};
pub use lattice::{ClassVector, Lattice, Signature, Sublattice};
