// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use crate::error::{Error, Result};
use crate::grid::TileGeometry;
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Precision {
    Single,
    Double,
}

impl Precision {
    pub fn code(self) -> u32 {
        match self {
            Precision::Single => 0,
            Precision::Double => 1,
        }
    }

    pub fn from_code(code: u32) -> Option<Self> {
        match code {
            0 => Some(Precision::Single),
            1 => Some(Precision::Double),
            _ => None,
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Precision::Single => "single",
            Precision::Double => "double",
        })
    }
}

/// Row-major offset of `p` in an x-fastest array of `dims`.
#[inline(always)]
pub(crate) fn linear_index(dims: [usize; 3], p: [usize; 3]) -> usize {
    p[0] + dims[0] * (p[1] + dims[1] * p[2])
}

pub(crate) fn checked_volume(dims: [usize; 3]) -> Result<usize> {
    for axis in Axis::ALL {
        if dims[axis.index()] == 0 {
            return Err(Error::ZeroDimension { axis });
        }
    }
    dims.iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .ok_or_else(|| Error::InvalidArgument(format!("dims {dims:?} overflow")))
}

fn check_finite<T: Real>(data: &[[T; 3]]) -> Result<()> {
    match data
        .iter()
        .position(|v| !v.iter().all(|c| c.is_finite()))
    {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

/// Control-point displacement vectors on a uniform grid whose spacing is an
/// integral number of voxels per axis.
///
/// Stored index 0 along an axis sits one spacing before the first voxel, so
/// a voxel at `x` reads stored indices `x/δ .. x/δ + 3`.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlGrid<T> {
    dims: [usize; 3],
    spacing: [usize; 3],
    data: Vec<[T; 3]>,
}

impl<T: Real> ControlGrid<T> {
    pub fn new(dims: [usize; 3], spacing: [usize; 3], data: Vec<[T; 3]>) -> Result<Self> {
        let expected = checked_volume(dims)?;
        for axis in Axis::ALL {
            if spacing[axis.index()] == 0 {
                return Err(Error::ZeroSpacing { axis });
            }
        }
        if data.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: data.len(),
            });
        }
        check_finite(&data)?;
        Ok(Self {
            dims,
            spacing,
            data,
        })
    }

    /// Builds a grid by evaluating `f` at every stored index, rounding to `T`.
    pub fn from_fn(
        dims: [usize; 3],
        spacing: [usize; 3],
        mut f: impl FnMut([usize; 3]) -> [f64; 3],
    ) -> Result<Self> {
        let len = checked_volume(dims)?;
        let mut data = Vec::with_capacity(len);
        for k in 0..dims[2] {
            for j in 0..dims[1] {
                for i in 0..dims[0] {
                    data.push(f([i, j, k]).map(T::from_f64));
                }
            }
        }
        Self::new(dims, spacing, data)
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn spacing(&self) -> [usize; 3] {
        self.spacing
    }

    pub fn precision(&self) -> Precision {
        T::PRECISION
    }

    pub fn data(&self) -> &[[T; 3]] {
        &self.data
    }

    pub fn get(&self, index: [usize; 3]) -> [T; 3] {
        self.data[linear_index(self.dims, index)]
    }

    /// Largest absolute component value.
    pub fn max_magnitude(&self) -> f64 {
        self.data
            .iter()
            .flatten()
            .map(|c| c.to_f64().abs())
            .fold(0.0, f64::max)
    }

    pub fn convert<U: Real>(&self) -> ControlGrid<U> {
        ControlGrid {
            dims: self.dims,
            spacing: self.spacing,
            data: self
                .data
                .iter()
                .map(|v| v.map(|c| U::from_f64(c.to_f64())))
                .collect(),
        }
    }

    /// Checks that this grid can drive every voxel of `geom`.
    pub fn check_covers(&self, geom: &TileGeometry) -> Result<()> {
        if self.spacing != geom.spacing() {
            return Err(Error::SpacingMismatch {
                grid: self.spacing,
                geometry: geom.spacing(),
            });
        }
        let required = geom.required_grid_dims();
        for axis in Axis::ALL {
            let a = axis.index();
            if self.dims[a] < required[a] {
                return Err(Error::GridTooSmall {
                    axis,
                    required: required[a],
                    actual: self.dims[a],
                });
            }
        }
        Ok(())
    }
}

/// Dense per-voxel displacement vectors, x-fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformationField<T> {
    dims: [usize; 3],
    data: Vec<[T; 3]>,
}

impl<T: Real> DeformationField<T> {
    pub fn new(dims: [usize; 3], data: Vec<[T; 3]>) -> Result<Self> {
        let expected = checked_volume(dims)?;
        if data.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: data.len(),
            });
        }
        check_finite(&data)?;
        Ok(Self { dims, data })
    }

    pub(crate) fn zeros(dims: [usize; 3]) -> Self {
        let len = dims.iter().product();
        Self {
            dims,
            data: vec![[T::ZERO; 3]; len],
        }
    }

    pub(crate) fn data_mut(&mut self) -> &mut [[T; 3]] {
        &mut self.data
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn precision(&self) -> Precision {
        T::PRECISION
    }

    pub fn voxel_count(&self) -> usize {
        self.data.len()
    }

    pub fn data(&self) -> &[[T; 3]] {
        &self.data
    }

    pub fn into_data(self) -> Vec<[T; 3]> {
        self.data
    }

    pub fn get(&self, voxel: [usize; 3]) -> [T; 3] {
        self.data[linear_index(self.dims, voxel)]
    }

    pub fn convert<U: Real>(&self) -> DeformationField<U> {
        DeformationField {
            dims: self.dims,
            data: self
                .data
                .iter()
                .map(|v| v.map(|c| U::from_f64(c.to_f64())))
                .collect(),
        }
    }

    /// Largest per-component absolute difference, evaluated in double.
    pub fn max_abs_diff<U: Real>(&self, other: &DeformationField<U>) -> f64 {
        assert_eq!(self.dims, other.dims, "field dims differ");
        self.data
            .iter()
            .zip(&other.data)
            .flat_map(|(a, b)| (0..3).map(move |c| (a[c].to_f64() - b[c].to_f64()).abs()))
            .fold(0.0, f64::max)
    }

    /// True when every component has the same bit pattern as in `other`.
    pub fn bit_identical(&self, other: &Self) -> bool {
        self.dims == other.dims
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| (0..3).all(|c| a[c].bits() == b[c].bits()))
    }
}
