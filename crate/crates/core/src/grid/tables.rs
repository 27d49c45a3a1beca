// SPDX-License-Identifier: Apache-2.0

use crate::grid::basis::{basis_unchecked, lerp_form_weights, LerpWeights};
use crate::grid::TileGeometry;
use crate::real::Real;

/// Weights for one in-tile offset along one axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisWeight {
    /// `offset / δ`.
    pub u: f64,
    pub basis: [f64; 4],
    pub lerp: LerpWeights,
}

impl AxisWeight {
    /// Fraction of the ninth, combining trilinear interpolation.
    pub fn final_fraction(&self) -> f64 {
        self.lerp.g1
    }
}

/// Per-axis look-up tables indexed by in-tile offset.
///
/// Built in double precision; engines round the entries once to their
/// working precision.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTables {
    spacing: [usize; 3],
    axes: [Vec<AxisWeight>; 3],
}

impl WeightTables {
    pub fn build(geometry: &TileGeometry) -> Self {
        let spacing = geometry.spacing();
        let axes = spacing.map(|delta| {
            (0..delta)
                .map(|o| {
                    let u = offset_parameter(o, delta);
                    let basis = basis_unchecked(u);
                    AxisWeight {
                        u,
                        basis,
                        lerp: lerp_form_weights(basis),
                    }
                })
                .collect()
        });
        Self { spacing, axes }
    }

    pub fn spacing(&self) -> [usize; 3] {
        self.spacing
    }

    pub fn axis(&self, axis: usize) -> &[AxisWeight] {
        &self.axes[axis]
    }

    /// Total entries over the three axes, `δx + δy + δz`.
    pub fn len(&self) -> usize {
        self.axes.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub(crate) fn typed<T: Real>(&self) -> TypedTables<T> {
        TypedTables {
            axes: [0, 1, 2].map(|a| {
                self.axes[a]
                    .iter()
                    .map(|w| TypedAxisWeight {
                        basis: w.basis.map(T::from_f64),
                        h: [T::from_f64(w.lerp.h0), T::from_f64(w.lerp.h1)],
                        g1: T::from_f64(w.lerp.g1),
                    })
                    .collect()
            }),
        }
    }
}

/// `o / δ` computed the same way everywhere so per-voxel and tabulated
/// weights agree bit for bit.
#[inline]
pub(crate) fn offset_parameter(offset: usize, delta: usize) -> f64 {
    offset as f64 / delta as f64
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct TypedAxisWeight<T> {
    pub basis: [T; 4],
    pub h: [T; 2],
    pub g1: T,
}

#[derive(Debug, Clone)]
pub(crate) struct TypedTables<T> {
    pub axes: [Vec<TypedAxisWeight<T>>; 3],
}
