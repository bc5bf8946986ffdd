//! Direction sets of point sets in finite affine planes.
//!
//! The crate computes the directions determined by a set `U ⊂ AG(2,q)`, the
//! geometric invariant `s` (line intersection counts), the Rédei polynomial
//! `R(X,Y)` with the quotient `Q` and remainder term `H` of `X^q - X`, the
//! algebraic invariant `t`, linear sets over subfields realised as projected
//! subgeometries, and verdict engines that check the known bounds on
//! `|D|` over concrete sets, exhaustively or by seeded sampling.

pub mod analysis;
pub mod error;
pub mod field;
pub mod geometry;
pub mod io;
pub mod linsets;
pub mod poly;
pub mod redei;
pub mod search;
pub mod verdict;

pub use error::{Error, Result};
pub use field::{Field, FieldElement, Gf};
pub use geometry::{AffinePoint, AffinePointSet, Direction, DirectionSet};
pub use poly::{BiPoly, Poly};
pub use verdict::{Check, Relation, Statement, Verdict};
