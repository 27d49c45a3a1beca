// SPDX-License-Identifier: Apache-2.0

use crate::error::{Error, Result};

/// Uniform cubic B-spline weights `(B0, B1, B2, B3)` at `u ∈ [0, 1)`.
///
/// `B0` weighs the control point before the tile, `B3` the one two steps
/// after it.
pub fn basis_weights(u: f64) -> Result<[f64; 4]> {
    if !(0.0..1.0).contains(&u) {
        return Err(Error::ParameterOutOfDomain(u));
    }
    Ok(basis_unchecked(u))
}

#[inline]
pub(crate) fn basis_unchecked(u: f64) -> [f64; 4] {
    let u2 = u * u;
    let u3 = u2 * u;
    let one_minus = 1.0 - u;
    [
        one_minus * one_minus * one_minus / 6.0,
        (3.0 * u3 - 6.0 * u2 + 4.0) / 6.0,
        (-3.0 * u3 + 3.0 * u2 + 3.0 * u + 1.0) / 6.0,
        u3 / 6.0,
    ]
}

/// Pair sums and pair fractions that turn a four-term weighted sum into two
/// nested linear interpolations:
///
/// `B0·a + B1·b + B2·c + B3·d == lerp(lerp(a, b, h0), lerp(c, d, h1), g1)`
/// as long as `g0 + g1 == 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LerpWeights {
    pub g0: f64,
    pub g1: f64,
    pub h0: f64,
    pub h1: f64,
}

/// Both pair sums are at least 1/6 on the valid basis domain, so the
/// fractions are always defined.
pub fn lerp_form_weights(basis: [f64; 4]) -> LerpWeights {
    debug_assert!(basis.iter().all(|&b| b >= 0.0));
    debug_assert!((basis.iter().sum::<f64>() - 1.0).abs() <= 1e-6);
    let g0 = basis[0] + basis[1];
    let g1 = basis[2] + basis[3];
    LerpWeights {
        g0,
        g1,
        h0: basis[1] / g0,
        h1: basis[3] / g1,
    }
}
