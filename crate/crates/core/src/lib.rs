//! Finite universal algebra workbench.
//!
//! Algebras are carriers `{0..n}` with operations stored as dense tables.
//! On top of that sit congruence lattices, Maltsev-term search, herd and
//! torsor constructions, the commutator of congruences with its central
//! series, abelian theories presented by linear forms, and linear
//! extensions of finite monoids.

pub mod abelian;
pub mod algebra;
pub mod bimodule;
pub mod commutator;
pub mod congruence;
pub mod constants;
pub mod counterexample;
pub mod error;
pub mod maltsev;
pub mod monoid;
pub mod ring;
pub mod term;
pub mod union_find;
pub mod zoo;

pub use abelian::{AffinityModel, AffinityOp, LinearForm};
pub use algebra::{FiniteAlgebra, Homomorphism, OpSource, Operation};
pub use bimodule::{DBimodule, Derivation, DiagramE};
pub use commutator::{SeriesKind, SeriesReport};
pub use congruence::Congruence;
pub use constants::ConstTheory;
pub use error::{Error, Result};
pub use maltsev::{Domain, TernaryTable, TorsorGroup};
pub use monoid::{FiniteMonoid, MonoidExtension, NaturalSystem};
pub use ring::{AbGroup, Bimodule, FiniteRing, LeftModule};
pub use term::{Term, TermOp};

/// Default element budget for term-clone generation.
pub const DEFAULT_CLONE_BUDGET: usize = 200_000;

/// Default carrier-size cap for congruence lattice enumeration.
pub const DEFAULT_LATTICE_SIZE_CAP: usize = 12;

/// Default candidate budget for additive-map and derivation enumeration.
pub const DEFAULT_DER_BUDGET: usize = 1_000_000;
