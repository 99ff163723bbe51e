//! Exact computational toolkit for wildly ramified Galois covers of curves in
//! small characteristic: Artin–Schreier towers over F_q(x), ramification and
//! p-rank bookkeeping, finite p-group analysis, and automorphism-count bounds,
//! with a scenario runner that checks a catalog of worked examples end to end.

pub mod catalog;
pub mod counting;
pub mod field;
pub mod group;
pub mod input;
pub mod ramify;
pub mod report;
pub mod scenario;
pub mod tower;

pub use field::{FieldError, Fq, FqElem, Place, Poly, RatFunc, Valuation};
pub use group::{FiniteGroup, GroupError};
pub use tower::{Tower, TowerElem, TowerError};
