//! Scalar arithmetic at the even root of unity `q = exp(iπ/r)`.
//!
//! Complex powers are defined directly as `q^z = exp(iπz/r)`, so there is no
//! branch ambiguity. Brackets follow `{z} = q^z - q^{-z}` and
//! `[z] = {z}/{1}`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use thiserror::Error;

use crate::linalg::{C64, ONE};

/// Default cap on `r`, bounding tensor dimensions (`r^k` for `k` strands).
pub const DEFAULT_MAX_R: u32 = 16;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ParamError {
    #[error("r must be at least 2, got {0}")]
    RootTooSmall(u32),
    #[error("r = {r} exceeds the configured maximum {max}")]
    RootTooLarge { r: u32, max: u32 },
    #[error("q-binomial [{l} choose {k}] needs 0 <= k <= l <= r-1 (r = {r})")]
    BinomialRange { l: i64, k: i64, r: u32 },
}

/// The root order `r` and the primitive `2r`-th root of unity `q`.
///
/// Every module, morphism and diagram is built relative to one instance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GlobalParams {
    r: u32,
    q: C64,
}

impl GlobalParams {
    /// Parameters for root order `r`, capped at [`DEFAULT_MAX_R`].
    pub fn new(r: u32) -> Result<Self, ParamError> {
        Self::with_max_r(r, DEFAULT_MAX_R)
    }

    pub fn with_max_r(r: u32, max_r: u32) -> Result<Self, ParamError> {
        if r < 2 {
            return Err(ParamError::RootTooSmall(r));
        }
        if r > max_r {
            return Err(ParamError::RootTooLarge { r, max: max_r });
        }
        Ok(Self { r, q: C64::from_polar(1.0, PI / r as f64) })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn rf(&self) -> f64 {
        self.r as f64
    }

    pub fn q(&self) -> C64 {
        self.q
    }

    /// `q^z = exp(iπz/r)`.
    pub fn qpow(&self, z: C64) -> C64 {
        (C64::i() * z * (PI / self.rf())).exp()
    }

    pub fn qpow_re(&self, z: f64) -> C64 {
        C64::from_polar(1.0, PI * z / self.rf())
    }

    /// `{z} = q^z - q^{-z}`.
    pub fn qbracket(&self, z: C64) -> C64 {
        self.qpow(z) - self.qpow(-z)
    }

    pub fn qbracket_re(&self, z: f64) -> C64 {
        self.qbracket(C64::new(z, 0.0))
    }

    /// `[z] = {z}/{1}`; finite for every `z` because `{1} = 2i·sin(π/r) ≠ 0`.
    pub fn qint(&self, z: C64) -> C64 {
        self.qbracket(z) / self.qbracket_re(1.0)
    }

    pub fn qint_re(&self, z: f64) -> C64 {
        self.qint(C64::new(z, 0.0))
    }

    /// `{n}!` or `[n]!`, with the empty product equal to 1.
    pub fn qfact(&self, n: u32, variant: Factorial) -> C64 {
        (1..=n)
            .map(|i| match variant {
                Factorial::Braced => self.qbracket_re(i as f64),
                Factorial::Bracket => self.qint_re(i as f64),
            })
            .fold(ONE, |acc, x| acc * x)
    }

    /// Gaussian binomial `[l]! / ([k]! [l-k]!)` for `0 <= k <= l <= r-1`.
    pub fn qbinom(&self, l: i64, k: i64) -> Result<C64, ParamError> {
        if k < 0 || l < k || l > self.r as i64 - 1 {
            return Err(ParamError::BinomialRange { l, k, r: self.r });
        }
        let f = |n: i64| self.qfact(n as u32, Factorial::Bracket);
        Ok(f(l) / (f(k) * f(l - k)))
    }

    /// Coefficients of the `r`-truncated q-exponential.
    ///
    /// With `sign = +1` entry `l` is `q^{l(l-1)/2} / [l]!`. With `sign = -1`
    /// the root is replaced by `q^{-1}`, giving `q^{-l(l-1)/2} / [l]!`
    /// (the quantum integers are invariant under `q ↦ q^{-1}`).
    pub fn qexp_coeffs(&self, sign: Sign) -> Vec<C64> {
        let s = match sign {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        };
        (0..self.r)
            .map(|l| {
                let lf = l as f64;
                self.qpow_re(s * lf * (lf - 1.0) / 2.0) / self.qfact(l, Factorial::Bracket)
            })
            .collect()
    }

    /// Coefficient of `E^l ⊗ F^l` in the R-matrix:
    /// `{1}^{2l} / {l}! · q^{l(l-1)/2}`.
    pub fn r_matrix_coeff(&self, l: u32) -> C64 {
        let lf = l as f64;
        self.qbracket_re(1.0).powu(2 * l) / self.qfact(l, Factorial::Braced) * self.qpow_re(lf * (lf - 1.0) / 2.0)
    }

    /// Coefficient of `E^l ⊗ F^l` in the inverse R-matrix:
    /// `exp_{q^{-1}}` evaluated at `-{1} E ⊗ F`.
    pub fn r_inverse_coeff(&self, l: u32) -> C64 {
        let minus_one = self.qbracket_re(1.0) * -1.0;
        self.qexp_coeffs(Sign::Minus)[l as usize] * minus_one.powu(l)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factorial {
    /// `{n}! = {1}{2}⋯{n}`
    Braced,
    /// `[n]! = [1][2]⋯[n]`
    Bracket,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Distance from `z` to the nearest integer multiple of `step`.
pub fn dist_to_lattice(z: C64, step: f64) -> f64 {
    let k = (z.re / step).round();
    (z - C64::new(k * step, 0.0)).norm()
}

/// The nearest integer multiple of `step` to the real part of `z`, as a
/// multiplier.
pub fn nearest_multiple(z: C64, step: f64) -> i64 {
    (z.re / step).round() as i64
}
