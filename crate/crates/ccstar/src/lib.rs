//! Exact construction and tiling analysis of multilevel constellations built
//! from binary linear codes.
//!
//! A length-`n·L` binary code is read as `L` layers of `n` bits each; the map
//! ψ packs the layers into a point of ℤ_{2^L}ⁿ with layer 0 least significant.
//! From a code `C` the crate derives its per-layer projection codes, their
//! product code `C̄`, and the finite point sets `X = ψ(C̄)` and `Y = ψ(C)`.
//! The [`tiling`] module decides whether translates of `Y` tile `X`, checks
//! the algebraic conditions that predict this, and searches for valid sets of
//! class representatives.
//!
//! All arithmetic is exact; every search is deterministic, with ties broken
//! lexicographically, so identical inputs always produce identical output.

pub mod cli;
pub mod constellation;
pub mod gf2;
pub mod layered;
pub mod tiling;
