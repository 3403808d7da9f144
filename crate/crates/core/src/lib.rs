//! Exact arithmetic for Iwasawa theory of weighted graphs.
//!
//! The crate computes weighted complexities (weighted spanning-arborescence
//! sums) of voltage covers, the characteristic element of a `Z_p^d`-tower of
//! weighted graphs, its Iwasawa `mu`/`lambda` invariants, and checks the
//! resulting growth formulas against directly computed determinants. All
//! arithmetic is exact: rationals, cyclotomic fields `Q(zeta_{p^N})`, and
//! Laurent polynomials over `Q` and `F_p`.
//!
//! Module map:
//!
//! * [`algebra`]: rationals, valuations, cyclotomic numbers, Laurent and
//!   multivariate polynomials, exact determinants.
//! * [`graph`]: weighted symmetric digraphs, groups, voltage assignments,
//!   derived covers and the arborescence oracle.
//! * [`complexity`]: matrix-tree complexities, characters, `h`-values, the
//!   product formula and the three-term determinant identity.
//! * [`charelem`]: the characteristic element, by direct determinant and by
//!   the orientation/indeterminate algorithm.
//! * [`invariants`]: `mu`, `lambda`, valuation sums, growth fits, tower and
//!   Kida reports.
//! * [`qwalk`]: discrete-time quantum walk transition matrices and the
//!   growth of `det(aI - U_n)`.

#![forbid(unsafe_code)]

pub mod algebra;
pub mod charelem;
pub mod complexity;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod invariants;
pub mod qwalk;

pub use error::{Error, Result};
