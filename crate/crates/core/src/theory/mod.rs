//! Higher contractions, interchange squares, a display canonicalizer for
//! conversion sequences, bounded filler search and convertibility witnesses.

mod canon;
mod convert;
mod search;
mod square;

pub use canon::canonicalize;
pub use convert::{convertible, step_cell, Conversion, Convertibility};
pub use search::{search_filler, SearchReport};
pub use square::{beta_contract, build_beta_square, build_eta_square, eta_contract, SquareSpec};
