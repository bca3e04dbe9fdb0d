//! Framing functions of knots.
//!
//! `n_K(k)` is the least number of conjugates of Wirtinger generators whose
//! product is the longitude `l_k`. This crate produces upper bounds as
//! checkable deletion certificates, lower bounds from potentials on free
//! products of cyclic groups (exact for torus knots), and combines them in
//! bound windows.

pub mod framing;
pub mod freeprod;
pub mod group;
pub mod notation;
pub mod properties;
