//! Closed-form summation formulas for the trefoil and figure-eight knot, as
//! printed. They are compared against the engine and never used by it.

use crate::linalg::{C64, ONE, ZERO};
use crate::qarith::{Factorial, GlobalParams};

/// Which exponent to use in the trefoil sum: `q^{i(-3α-r+1)}` or
/// `q^{i(-3α-r+i)}`. The two agree at `r = 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrefoilExponent {
    Constant,
    Quadratic,
}

/// `q^{3(α+r-1)²/2 + (α+r-1)(1-r)} Σ_{i<r} q^{i·e_i} Π_{j<i} {i-j-α}`,
/// the scalar of the open right-handed trefoil on `V(α)`.
pub fn trefoil_scalar(params: &GlobalParams, alpha: C64, exponent: TrefoilExponent) -> C64 {
    let rf = params.rf();
    let top = alpha + rf - 1.0;
    let pre = params.qpow(top * top * 1.5 + top * (1.0 - rf));
    let sum = (0..params.r()).fold(ZERO, |acc, i| {
        let fi = i as f64;
        let e = match exponent {
            TrefoilExponent::Constant => -alpha * 3.0 - rf + 1.0,
            TrefoilExponent::Quadratic => -alpha * 3.0 - rf + fi,
        };
        let prod = (0..i).fold(ONE, |p, j| p * params.qbracket(C64::new(fi - j as f64, 0.0) - alpha));
        acc + params.qpow(e * fi) * prod
    });
    pre * sum
}

fn braced_fact(params: &GlobalParams, n: i64) -> C64 {
    if n <= 0 {
        ONE
    } else {
        params.qfact(n as u32, Factorial::Braced)
    }
}

/// The printed figure-eight triple sum without the `d_η(α)` prefactor.
///
/// The printed formula divides by `{l}!` with `l` unbound; it is read here
/// as `l = r-1-i-k`, with `{n}! = 1` for `n ≤ 0`. Products over a range
/// `a..b` run over the integers between the two bounds inclusive.
pub fn figure_eight_scalar(params: &GlobalParams, alpha: C64) -> C64 {
    let r = params.r() as i64;
    let rf = params.rf();
    let q = |z: C64| params.qpow(z);
    let b = |z: C64| params.qbracket(z);
    let c = |x: i64| C64::new(x as f64, 0.0);
    let inclusive = |a: i64, z: i64| a.min(z)..=a.max(z);
    let a0 = -alpha + rf - 1.0;
    let mut total = ZERO;
    for i in 0..r {
        for j in 0..=i {
            for k in 0..=(r - i) {
                let l = r - 1 - i - k;
                let mut term = q((a0 - 2.0 * i as f64) * (alpha - rf + 1.0) / 2.0);
                term *= q(-(a0 - 2.0 * (i - j) as f64) * c(i + r - 1 - j));
                term *= q(-(a0 - 2.0 * (i - j + k) as f64) * (alpha + rf - 1.0 - 2.0 * (i + k) as f64) / 2.0);
                term *= params.qpow_re((j * (j - 1)) as f64 / 2.0);
                term *= params.qpow_re((k * (k - 1)) as f64 / 2.0);
                term *= params.qpow_re(((i + k - r + 1) * (i + k - r)) as f64 / 2.0);
                for x in inclusive(r - 1, r - 1 - j) {
                    term *= b(c(x)) * b(c(x) - alpha) / braced_fact(params, j);
                }
                for y in inclusive(i - j, i - j + k) {
                    term *= b(c(y)) * b(c(y) + alpha) / braced_fact(params, k);
                }
                for z in inclusive(i + k, r - 1) {
                    term *= b(c(z)) * b(c(z) - alpha) / braced_fact(params, l);
                }
                total += term;
            }
        }
    }
    total
}
