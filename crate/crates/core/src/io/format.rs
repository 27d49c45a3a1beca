// SPDX-License-Identifier: Apache-2.0

//! BSIV: a 44-byte little-endian header followed by the payload.
//!
//! | offset | field      | type            |
//! |--------|------------|-----------------|
//! | 0      | magic      | `b"BSIV"`       |
//! | 4      | version    | u32 = 1         |
//! | 8      | kind       | u32, 0 grid / 1 field |
//! | 12     | dims       | 3 × u32         |
//! | 24     | components | u32 = 3         |
//! | 28     | spacing    | 3 × u32, 0 for fields |
//! | 40     | precision  | u32, 0 single / 1 double |
//!
//! The payload is x-fastest with interleaved components, 4 or 8 bytes per
//! scalar.

use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{ControlGrid, DeformationField, Precision};
use crate::real::Real;

pub const MAGIC: [u8; 4] = *b"BSIV";
pub const FORMAT_VERSION: u32 = 1;
pub const HEADER_LEN: usize = 44;
const COMPONENTS: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    ControlGrid = 0,
    DeformationField = 1,
}

impl FileKind {
    fn code(self) -> u32 {
        self as u32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FileHeader {
    pub kind: FileKind,
    pub dims: [u32; 3],
    pub spacing: [u32; 3],
    pub precision: Precision,
}

impl FileHeader {
    pub fn encode(&self) -> [u8; HEADER_LEN] {
        let mut out = [0u8; HEADER_LEN];
        out[..4].copy_from_slice(&MAGIC);
        let words = [
            FORMAT_VERSION,
            self.kind.code(),
            self.dims[0],
            self.dims[1],
            self.dims[2],
            COMPONENTS,
            self.spacing[0],
            self.spacing[1],
            self.spacing[2],
            self.precision.code(),
        ];
        for (i, w) in words.iter().enumerate() {
            out[4 + 4 * i..8 + 4 * i].copy_from_slice(&w.to_le_bytes());
        }
        out
    }

    /// Parses and validates a header expected to describe `expected` data.
    pub fn decode(bytes: &[u8], expected: FileKind) -> Result<Self> {
        if bytes.len() >= 4 && bytes[..4] != MAGIC {
            return Err(Error::BadMagic {
                found: bytes[..4].try_into().expect("4 bytes"),
            });
        }
        if bytes.len() < HEADER_LEN {
            return Err(Error::Truncated {
                expected: HEADER_LEN as u64,
                actual: bytes.len() as u64,
            });
        }
        let word = |i: usize| u32::from_le_bytes(bytes[4 + 4 * i..8 + 4 * i].try_into().expect("4 bytes"));

        let version = word(0);
        if version != FORMAT_VERSION {
            return Err(Error::BadVersion(version));
        }
        let kind = word(1);
        if kind != expected.code() {
            return Err(Error::BadKind {
                found: kind,
                expected: expected.code(),
            });
        }
        let dims = [word(2), word(3), word(4)];
        let components = word(5);
        if components != COMPONENTS {
            return Err(Error::BadComponents(components));
        }
        let spacing = [word(6), word(7), word(8)];
        let precision = Precision::from_code(word(9)).ok_or(Error::BadPrecision(word(9)))?;

        if dims.contains(&0) {
            return Err(Error::BadHeader(format!("zero dimension in {dims:?}")));
        }
        match expected {
            FileKind::ControlGrid if spacing.contains(&0) => {
                return Err(Error::BadHeader(format!("zero grid spacing in {spacing:?}")));
            }
            FileKind::DeformationField if spacing != [0; 3] => {
                return Err(Error::BadHeader(format!(
                    "field spacing must be zero, found {spacing:?}"
                )));
            }
            _ => {}
        }
        Ok(Self {
            kind: expected,
            dims,
            spacing,
            precision,
        })
    }

    pub fn element_count(&self) -> Result<usize> {
        self.dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d as usize))
            .ok_or(Error::DimensionOverflow(self.dims))
    }

    pub fn payload_len(&self) -> Result<u64> {
        let scalar = match self.precision {
            Precision::Single => 4u64,
            Precision::Double => 8u64,
        };
        let bytes = self
            .element_count()
            .ok()
            .and_then(|n| (n as u64).checked_mul(COMPONENTS as u64 * scalar))
            .and_then(|b| b.checked_add(HEADER_LEN as u64))
            .filter(|&b| usize::try_from(b).is_ok())
            .ok_or(Error::DimensionOverflow(self.dims))?;
        Ok(bytes - HEADER_LEN as u64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnyGrid {
    Single(ControlGrid<f32>),
    Double(ControlGrid<f64>),
}

impl AnyGrid {
    pub fn precision(&self) -> Precision {
        match self {
            AnyGrid::Single(_) => Precision::Single,
            AnyGrid::Double(_) => Precision::Double,
        }
    }

    pub fn dims(&self) -> [usize; 3] {
        match self {
            AnyGrid::Single(g) => g.dims(),
            AnyGrid::Double(g) => g.dims(),
        }
    }

    pub fn spacing(&self) -> [usize; 3] {
        match self {
            AnyGrid::Single(g) => g.spacing(),
            AnyGrid::Double(g) => g.spacing(),
        }
    }

    /// Converts to precision `T`, rounding double to single if needed.
    pub fn into_precision<T: Real>(self) -> ControlGrid<T> {
        match self {
            AnyGrid::Single(g) => g.convert(),
            AnyGrid::Double(g) => g.convert(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnyField {
    Single(DeformationField<f32>),
    Double(DeformationField<f64>),
}

impl AnyField {
    pub fn precision(&self) -> Precision {
        match self {
            AnyField::Single(_) => Precision::Single,
            AnyField::Double(_) => Precision::Double,
        }
    }

    pub fn dims(&self) -> [usize; 3] {
        match self {
            AnyField::Single(f) => f.dims(),
            AnyField::Double(f) => f.dims(),
        }
    }
}

fn to_u32_dims(dims: [usize; 3]) -> Result<[u32; 3]> {
    let mut out = [0u32; 3];
    for a in 0..3 {
        out[a] = u32::try_from(dims[a]).map_err(|_| {
            Error::InvalidArgument(format!("dimension {} exceeds the format's u32 range", dims[a]))
        })?;
    }
    Ok(out)
}

fn encode<T: Real>(header: FileHeader, data: &[[T; 3]]) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + data.len() * 3 * T::BYTES);
    out.extend_from_slice(&header.encode());
    for v in data {
        for &c in v {
            c.write_le(&mut out);
        }
    }
    out
}

pub fn encode_grid<T: Real>(grid: &ControlGrid<T>) -> Result<Vec<u8>> {
    let header = FileHeader {
        kind: FileKind::ControlGrid,
        dims: to_u32_dims(grid.dims())?,
        spacing: to_u32_dims(grid.spacing())?,
        precision: T::PRECISION,
    };
    Ok(encode(header, grid.data()))
}

pub fn encode_field<T: Real>(field: &DeformationField<T>) -> Result<Vec<u8>> {
    let header = FileHeader {
        kind: FileKind::DeformationField,
        dims: to_u32_dims(field.dims())?,
        spacing: [0; 3],
        precision: T::PRECISION,
    };
    Ok(encode(header, field.data()))
}

/// Validates the header and the total length, returning the payload.
fn split(bytes: &[u8], kind: FileKind) -> Result<(FileHeader, &[u8])> {
    let header = FileHeader::decode(bytes, kind)?;
    let expected = HEADER_LEN as u64 + header.payload_len()?;
    let actual = bytes.len() as u64;
    if actual < expected {
        return Err(Error::Truncated { expected, actual });
    }
    if actual > expected {
        return Err(Error::TrailingData { expected, actual });
    }
    Ok((header, &bytes[HEADER_LEN..]))
}

fn decode_payload<T: Real>(payload: &[u8]) -> Vec<[T; 3]> {
    payload
        .chunks_exact(3 * T::BYTES)
        .map(|v| {
            [0, 1, 2].map(|c| T::read_le(&v[c * T::BYTES..(c + 1) * T::BYTES]))
        })
        .collect()
}

fn payload_error(e: Error) -> Error {
    match e {
        Error::NonFinite { index } => {
            Error::InvalidPayload(format!("non-finite component in element {index}"))
        }
        other => other,
    }
}

pub fn decode_grid(bytes: &[u8]) -> Result<AnyGrid> {
    let (header, payload) = split(bytes, FileKind::ControlGrid)?;
    let dims = header.dims.map(|d| d as usize);
    let spacing = header.spacing.map(|d| d as usize);
    let grid = match header.precision {
        Precision::Single => {
            AnyGrid::Single(ControlGrid::new(dims, spacing, decode_payload(payload)).map_err(payload_error)?)
        }
        Precision::Double => {
            AnyGrid::Double(ControlGrid::new(dims, spacing, decode_payload(payload)).map_err(payload_error)?)
        }
    };
    Ok(grid)
}

pub fn decode_field(bytes: &[u8]) -> Result<AnyField> {
    let (header, payload) = split(bytes, FileKind::DeformationField)?;
    let dims = header.dims.map(|d| d as usize);
    let field = match header.precision {
        Precision::Single => {
            AnyField::Single(DeformationField::new(dims, decode_payload(payload)).map_err(payload_error)?)
        }
        Precision::Double => {
            AnyField::Double(DeformationField::new(dims, decode_payload(payload)).map_err(payload_error)?)
        }
    };
    Ok(field)
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_grid<T: Real>(path: impl AsRef<Path>, grid: &ControlGrid<T>) -> Result<()> {
    write_bytes(path.as_ref(), &encode_grid(grid)?)
}

pub fn read_grid(path: impl AsRef<Path>) -> Result<AnyGrid> {
    decode_grid(&read_bytes(path.as_ref())?)
}

pub fn write_field<T: Real>(path: impl AsRef<Path>, field: &DeformationField<T>) -> Result<()> {
    write_bytes(path.as_ref(), &encode_field(field)?)
}

pub fn read_field(path: impl AsRef<Path>) -> Result<AnyField> {
    decode_field(&read_bytes(path.as_ref())?)
}
