// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use crate::grid::Axis;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse classification used by front ends to choose an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed file, I/O failure.
    Format,
    /// Invalid arguments to geometry, generators or engines.
    Domain,
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension {axis} must be positive")]
    ZeroDimension { axis: Axis },
    #[error("spacing along {axis} must be at least 1")]
    ZeroSpacing { axis: Axis },
    #[error("data length {actual} does not match dims product {expected}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("non-finite component at element {index}")]
    NonFinite { index: usize },
    #[error("basis parameter {0} outside [0, 1)")]
    ParameterOutOfDomain(f64),
    #[error("voxel {voxel:?} outside volume {volume:?}")]
    VoxelOutOfRange { voxel: [usize; 3], volume: [usize; 3] },
    #[error("control grid too small along {axis}: need {required}, have {actual}")]
    GridTooSmall { axis: Axis, required: usize, actual: usize },
    #[error("grid spacing {grid:?} does not match geometry spacing {geometry:?}")]
    SpacingMismatch { grid: [usize; 3], geometry: [usize; 3] },
    #[error("weight tables were built for spacing {tables:?}, geometry has {geometry:?}")]
    TableMismatch { tables: [usize; 3], geometry: [usize; 3] },
    #[error("unknown strategy `{0}`")]
    UnknownStrategy(String),
    #[error("strategy `{0}` cannot run through this entry point")]
    UnsupportedStrategy(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("bad magic {found:?}, expected \"BSIV\"")]
    BadMagic { found: [u8; 4] },
    #[error("unsupported format version {0}")]
    BadVersion(u32),
    #[error("unexpected file kind {found}, expected {expected}")]
    BadKind { found: u32, expected: u32 },
    #[error("unsupported component count {0}, expected 3")]
    BadComponents(u32),
    #[error("unknown precision code {0}")]
    BadPrecision(u32),
    #[error("bad header: {0}")]
    BadHeader(String),
    #[error("truncated file: expected {expected} bytes, found {actual}")]
    Truncated { expected: u64, actual: u64 },
    #[error("trailing data: expected {expected} bytes, found {actual}")]
    TrailingData { expected: u64, actual: u64 },
    #[error("invalid payload: {0}")]
    InvalidPayload(String),
    #[error("dimensions {0:?} overflow the addressable payload size")]
    DimensionOverflow([u32; 3]),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Io { .. }
            | Error::BadMagic { .. }
            | Error::BadVersion(_)
            | Error::BadKind { .. }
            | Error::BadComponents(_)
            | Error::BadPrecision(_)
            | Error::BadHeader(_)
            | Error::Truncated { .. }
            | Error::TrailingData { .. }
            | Error::InvalidPayload(_)
            | Error::DimensionOverflow(_) => ErrorKind::Format,
            _ => ErrorKind::Domain,
        }
    }
}
