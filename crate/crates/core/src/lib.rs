//! Polarization-adjusted convolutional (PAC) codes: encoding, Gaussian
//! approximation construction, and stack decoding with special-node
//! acceleration and variance-based path pruning.

pub mod channel;
pub mod code;
pub mod config;
pub mod construction;
pub mod decoder;
pub mod depq;
pub mod error;
pub mod polar;
pub mod precoder;
pub mod sim;

pub use code::{AllowedTypes, ChunkPolicy, NodeType, PacCodeSpec, SegmentCounts};
pub use construction::{build_tables, ConstructionTables, ThresholdCombine};
pub use decoder::{
    fast_stack_decode, stack_decode, DecodeOptions, DecodeResult, DecodeStatus, DecoderKind,
};
pub use error::{Error, Result};
pub use precoder::{pac_encode, ConnPoly, ConvState};
