//! Analytic (Ray–Singer) torsion of quotients S³/Γ twisted by flat bundles.
//!
//! The crate is organised around the independent routes to ln T:
//!
//! - [`torsion`]: closed-form class sums of `ln 2 sin(πk/q)`, the lens-space
//!   formula, cyclic decompositions of the binary polyhedral groups, Cheeger's
//!   combinatorial expression and induction from cyclic subgroups.
//! - [`zetalab`]: numeric continuation of the original eigenvalue sums through
//!   Hurwitz and Lerch zeta functions, plus the `F(0) = F'(0) = 0` cancellation.
//!
//! Supporting modules build the deck groups ([`groups`]), their character
//! tables ([`characters`]), first homology ([`homology`]) and exact
//! log-linear bookkeeping of the results ([`exactmath`]).

pub mod characters;
pub mod exactmath;
pub mod groups;
pub mod homology;
pub mod torsion;
pub mod zetalab;

pub use characters::{CharacterTable, ClassFunction};
pub use exactmath::{LogAtom, LogLinearValue, QuadraticSurd, RationalAngle};
pub use groups::{ClassDatum, FiniteSymmetryGroup, GroupSpec, PolytopeSymbol};
pub use torsion::{Convention, TorsionResult, TwistSpec};
