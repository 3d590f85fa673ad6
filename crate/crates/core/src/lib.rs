//! Latin Square network-coding maps for the two-way relay channel.
//!
//! A fade state `s` is singular for a signal set when two pairs `(x_A, x_B)`
//! collide in `x_A + s x_B`. A relay map removes `s` when it is a Latin
//! Square that gives colliding pairs the same symbol. This crate builds the
//! constraint partitions and singularity removal graphs behind such maps,
//! colors the graphs, and constructs removing Latin Squares, including the
//! closed-form `M`-symbol constructions for `2^lambda`-PSK.

pub mod coloring;
pub mod constraint;
pub mod error;
pub mod exact;
pub mod fade_state;
pub mod graph;
pub mod latin;
pub mod psk;
pub mod signal_set;
pub mod srg;

pub use error::{Error, Result};
