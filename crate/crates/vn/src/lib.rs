//! Exact computation in the Higman-Thompson groups `V_n`.
//!
//! The crate works over the n-ary Cantor set `K_n` with addresses as finite
//! digit strings and points as eventually periodic digit sequences, so every
//! operation is exact: no floating point, no truncation.
//!
//! - [`cantor`]: addresses, eventually periodic points, the clopen algebra,
//!   and metric neighborhoods.
//! - [`element`]: elements of `V_n` as tree pair diagrams with composition,
//!   inversion, reduction, and exact action on points and clopen sets.
//! - [`revealing`]: Brin's revealing pairs, leaf classification, and the
//!   complete dynamical data of an element (attracting/repelling periodic
//!   orbits, basins, and the pointwise-fixed part).
//! - [`vbar`]: the signed variant where pieces may reverse digit
//!   orientation, and the embedding into `V_2`.
//! - [`words`]: free and surface group word machinery for the commutation
//!   and distortion tools.
//! - [`tits`]: certificate-producing search that, given finitely many
//!   elements, looks for either a finite orbit of the generated subgroup or
//!   a free subgroup witnessed by ping-pong data.
//! - [`parse`]: the shared text formats for all of the above.

pub mod cantor;
pub mod element;
pub mod fixtures;
pub mod parse;
pub mod revealing;
pub mod tits;
pub mod vbar;
pub mod words;
