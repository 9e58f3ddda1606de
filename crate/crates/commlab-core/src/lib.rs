//! Ball-bounded laboratory for commensurators and quasi-normal subgroups.
//!
//! The crate works with finitely generated groups presented through a small
//! catalog of engines with decidable normal forms (free and free abelian
//! groups, Baumslag–Solitar groups, certain HNN extensions, and friends).
//! Everything global is approximated by metric balls: subgroup membership,
//! Hausdorff-distance profiles between cosets, witness certificates for
//! commensurated subgroups, and coset/Schreier-style graphs are all computed
//! exactly on a ball of chosen radius and reported with explicit budgets, so
//! results are either certified on the ball or marked inconclusive.
//!
//! Layering, bottom up: [`words`] (letters, runs, shortlex), [`lattice`]
//! (integer matrix normal forms for abelian quotients), [`group`] and
//! [`catalog`] (engines and their canonical forms), [`subgroup`] (membership
//! rules), [`graph`] (Cayley balls, coset graphs, ends and valence estimates),
//! and [`commensurator`] (profiles, witnesses, witness algebra, quasi-morphism
//! defect and packing census).

pub mod catalog;
pub mod commensurator;
pub mod error;
pub mod exec;
pub mod graph;
pub mod group;
pub mod lattice;
pub mod subgroup;
pub mod words;

pub use error::{CommError, Result};
pub use exec::Exec;
pub use group::GroupHandle;
pub use subgroup::{Membership, SubgroupHandle};
pub use words::{Alphabet, GeneratorSymbol, Word};
