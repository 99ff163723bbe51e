//! Exact arithmetic foundations: finite fields F_{p^k}, polynomials and
//! rational functions over them, and places/valuations of F_q(x).

pub mod fq;
pub mod places;
pub mod poly;
pub mod ratfunc;

pub use fq::{FieldError, Fq, FqElem};
pub use places::{
    partial_fractions, place_valuation, pole_places, FractionTerm, PartialFractions, Place,
    Valuation,
};
pub use poly::Poly;
pub use ratfunc::RatFunc;
