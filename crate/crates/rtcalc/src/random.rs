//! Seeded random inputs: colors, braids, links and (2,2)-tangles.

use std::ops::RangeInclusive;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rtcalc_core::qarith::{dist_to_lattice, GlobalParams};
use rtcalc_core::repr::ModuleLabel;
use rtcalc_core::tangle::{Braid, ColorTable, ColoredBraid, Strand, TangleDiagram, TangleError};
use rtcalc_core::C64;

/// Crossing bound for random tangles.
pub const MAX_LETTERS: usize = 8;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A complex α with real part in [-2, 2], imaginary part in [-0.3, 0.3],
/// at least 0.05 away from ½ℤ.
pub fn random_alpha<R: Rng>(rng: &mut R) -> C64 {
    loop {
        let re = rng.gen_range(-2.0..2.0);
        let im = if rng.gen_bool(0.5) { 0.0 } else { rng.gen_range(-0.3..0.3) };
        let z = C64::new(re, im);
        if dist_to_lattice(z, 0.5) >= 0.05 {
            return z;
        }
    }
}

/// A braid on a number of strands drawn from `strands`, with 1 to
/// `max_len` letters.
pub fn random_braid<R: Rng>(rng: &mut R, strands: RangeInclusive<usize>, max_len: usize) -> Braid {
    let n = rng.gen_range(strands);
    let len = if n < 2 { 0 } else { rng.gen_range(1..=max_len) };
    let word = (0..len)
        .map(|_| {
            let i = rng.gen_range(1..n as i32);
            if rng.gen_bool(0.5) {
                i
            } else {
                -i
            }
        })
        .collect();
    Braid::new(n, word).expect("letters are in range")
}

fn colored(
    params: GlobalParams,
    braid: Braid,
    mut color_of: impl FnMut(usize) -> ModuleLabel,
) -> Result<ColoredBraid, TangleError> {
    let labels: Vec<ModuleLabel> = (0..braid.components().len()).map(&mut color_of).collect();
    ColoredBraid::by_components(params, braid, &labels)
}

/// A random braid closure, every component colored by its own random
/// generic Verma module.
pub fn random_link<R: Rng>(rng: &mut R, params: GlobalParams, strands: RangeInclusive<usize>) -> Result<ColoredBraid, TangleError> {
    let braid = random_braid(rng, strands, MAX_LETTERS);
    let n = braid.components().len();
    let alphas: Vec<C64> = (0..n).map(|_| random_alpha(rng)).collect();
    colored(params, braid, |k| ModuleLabel::Verma(alphas[k]))
}

/// Strand counts for random `(2,2)`-tangles: up to 4, or 3 for `r > 5` where
/// the closed diagrams would otherwise exceed memory.
pub fn tangle_strands(params: &GlobalParams) -> RangeInclusive<usize> {
    if params.r() <= 5 {
        2..=4
    } else {
        2..=3
    }
}

/// A random `(2,2)`-tangle: a braid on [`tangle_strands`] strands with at
/// most [`MAX_LETTERS`] letters, strands 3 and up closed on the right. Both
/// open strands carry `v`; closed loops get random generic Verma colors.
pub fn random_ambi_tangle<R: Rng>(rng: &mut R, params: GlobalParams, v: &ModuleLabel) -> Result<TangleDiagram, TangleError> {
    let braid = random_braid(rng, tangle_strands(&params), MAX_LETTERS);
    let comp = braid.component_of_strands();
    let open = [comp[0], comp[1]];
    let n = braid.components().len();
    let loops: Vec<C64> = (0..n).map(|_| random_alpha(rng)).collect();
    let cb = colored(params, braid, |k| if open.contains(&k) { v.clone() } else { ModuleLabel::Verma(loops[k]) })?;
    cb.close_right(2)
}

/// A random `(2,2)`-tangle whose left open strand carries `V(α)` and right
/// open strand `V(β)`, each returning to its own position. Braids joining
/// the two open strands are rejected and redrawn.
pub fn random_two_sided_tangle<R: Rng>(
    rng: &mut R,
    params: GlobalParams,
    alpha: C64,
    beta: C64,
) -> Result<TangleDiagram, TangleError> {
    loop {
        let braid = random_braid(rng, tangle_strands(&params), MAX_LETTERS);
        let comp = braid.component_of_strands();
        if comp[0] == comp[1] {
            continue;
        }
        let n = braid.components().len();
        let loops: Vec<C64> = (0..n).map(|_| random_alpha(rng)).collect();
        let cb = colored(params, braid, |k| {
            if k == comp[0] {
                ModuleLabel::Verma(alpha)
            } else if k == comp[1] {
                ModuleLabel::Verma(beta)
            } else {
                ModuleLabel::Verma(loops[k])
            }
        })?;
        return cb.close_right(2);
    }
}

/// One color per strand, upward, for a braid given explicitly.
pub fn colored_by_strands(params: GlobalParams, braid: Braid, labels: &[ModuleLabel]) -> Result<ColoredBraid, TangleError> {
    let mut table = ColorTable::new();
    let mut strands = Vec::with_capacity(labels.len());
    for l in labels {
        strands.push(Strand::up(table.intern(l.clone())?));
    }
    ColoredBraid::new(params, table, braid, strands)
}
