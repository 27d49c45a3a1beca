// SPDX-License-Identifier: Apache-2.0

//! The BSIV binary format and synthetic grid generators.

mod format;
mod generate;

pub use format::{
    decode_field, decode_grid, encode_field, encode_grid, read_field, read_grid, write_field,
    write_grid, AnyField, AnyGrid, FileHeader, FileKind, FORMAT_VERSION, HEADER_LEN, MAGIC,
};
pub use generate::{generate_for_volume, generate_grid, GridKind, SplitMix64};
