//! Direct shaping codes for SLC and MLC flash, with tools for studying how
//! channel errors propagate through the adaptive dictionary.

pub mod analysis;
pub mod dictionary;
pub mod mlc;
pub mod output;
pub mod report;
pub mod sim;
pub mod slc;
pub mod source;
pub mod theory;
pub mod word;

/// Library version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use dictionary::{AdaptiveDictionary, DictionaryError, Entry, Update};
pub use output::{canonical_output_list, slc_output_list, Codebook, OutputList, SymbolCosts};
pub use slc::{slc_decode, slc_encode, CodecError};
pub use word::{BitStream, BitWord, WordError};
