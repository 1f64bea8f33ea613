//! Exact computation of intersection numbers of polynomial maps into
//! matrix spaces with the set of positive-corank matrices, and cross-cap
//! counting for maps `M^m -> R^(2m-1)`.

pub mod groebner;
pub mod poly;
pub mod matmap;
pub mod intersect;
pub mod numeric;
pub mod crosscap;
pub mod cli;
pub mod regression;
