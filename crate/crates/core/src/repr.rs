//! Finite-dimensional weight modules as explicit operator matrices.
//!
//! A module stores its weight list and the matrices of `E`, `F`, `H` in a
//! fixed weight basis; `K` is always derived as `q^H`. Tensor products use
//! the coproduct `Δ(E) = 1⊗E + E⊗K`, `Δ(F) = F⊗1 + K^{-1}⊗F`,
//! `Δ(H) = H⊗1 + 1⊗H` with the left factor index varying slowest, and duals
//! use the antipode `S(E) = -EK^{-1}`, `S(F) = -KF`, `S(H) = -H` on the
//! literal dual basis.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::linalg::{null_space, CMatrix, C64, ONE, ZERO};
use crate::qarith::{dist_to_lattice, GlobalParams};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ModuleError {
    #[error("simple module S_n^(lr) needs 0 <= n <= r-2, got n = {n} at r = {r}")]
    SimpleOutOfRange { n: i64, r: u32 },
    #[error("modules were built for different root orders ({0} vs {1})")]
    ParamsMismatch(u32, u32),
}

/// Which module a [`WeightModule`] realizes.
///
/// Tensor labels are kept left-associated and never contain `Unit`, so two
/// bracketings of the same product carry equal labels (the matrices agree as
/// well, the associator being trivial).
#[derive(Clone, Debug, PartialEq)]
pub enum ModuleLabel {
    Verma(C64),
    Simple { n: u32, l: i64 },
    Unit,
    Dual(Box<ModuleLabel>),
    Tensor(Box<ModuleLabel>, Box<ModuleLabel>),
}

impl ModuleLabel {
    fn tensor(a: &ModuleLabel, b: &ModuleLabel) -> ModuleLabel {
        match b {
            ModuleLabel::Tensor(b1, b2) => {
                ModuleLabel::Tensor(Box::new(ModuleLabel::tensor(a, b1)), b2.clone())
            }
            _ => ModuleLabel::Tensor(Box::new(a.clone()), Box::new(b.clone())),
        }
    }

    /// Builds the module this label names. `Dual` and `Tensor` labels are
    /// rebuilt recursively.
    pub fn build(&self, params: &GlobalParams) -> Result<WeightModule, ModuleError> {
        match self {
            ModuleLabel::Verma(alpha) => Ok(verma(params, *alpha)),
            ModuleLabel::Simple { n, l } => simple_module(params, *n as i64, *l),
            ModuleLabel::Unit => Ok(unit(params)),
            ModuleLabel::Dual(inner) => Ok(dual_module(&inner.build(params)?)),
            ModuleLabel::Tensor(a, b) => tensor_module(&a.build(params)?, &b.build(params)?),
        }
    }
}

impl fmt::Display for ModuleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleLabel::Verma(a) if a.im == 0.0 => write!(f, "V({})", a.re),
            ModuleLabel::Verma(a) => write!(f, "V({}{:+}i)", a.re, a.im),
            ModuleLabel::Simple { n, l } => write!(f, "S_{n}^({l}r)"),
            ModuleLabel::Unit => write!(f, "1"),
            ModuleLabel::Dual(m) => write!(f, "({m})^*"),
            ModuleLabel::Tensor(a, b) => write!(f, "{a} ⊗ {b}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct WeightModule {
    params: GlobalParams,
    label: ModuleLabel,
    weights: Vec<C64>,
    e: CMatrix,
    f: CMatrix,
    h: CMatrix,
    /// Atomic tensor factors, left to right; empty for non-tensor modules.
    atoms: Vec<WeightModule>,
}

/// Verma module `V_α` of highest weight `α + r - 1` on the basis
/// `v_0, …, v_{r-1}`:
/// `H v_i = (α + r - 1 - 2i) v_i`, `E v_i = {i}{i-α}/{1}² v_{i-1}`,
/// `F v_i = v_{i+1}` (with `v_{-1} = v_r = 0`).
pub fn verma(params: &GlobalParams, alpha: C64) -> WeightModule {
    truncated_verma(params, alpha, params.r() as usize, ModuleLabel::Verma(alpha))
}

/// Simple module `S_n^{lr}` of highest weight `lr + n` and dimension `n + 1`,
/// realized on the first `n + 1` basis vectors of `V_α` with
/// `α = (l-1)r + n + 1`.
pub fn simple_module(params: &GlobalParams, n: i64, l: i64) -> Result<WeightModule, ModuleError> {
    let r = params.r() as i64;
    if n < 0 || n > r - 2 {
        return Err(ModuleError::SimpleOutOfRange { n, r: params.r() });
    }
    let alpha = C64::new(((l - 1) * r + n + 1) as f64, 0.0);
    Ok(truncated_verma(params, alpha, n as usize + 1, ModuleLabel::Simple { n: n as u32, l }))
}

fn truncated_verma(params: &GlobalParams, alpha: C64, dim: usize, label: ModuleLabel) -> WeightModule {
    let rm1 = params.rf() - 1.0;
    let weights: Vec<C64> = (0..dim).map(|i| alpha + rm1 - 2.0 * i as f64).collect();
    let b1 = params.qbracket_re(1.0);
    let mut e = CMatrix::zeros(dim, dim);
    let mut f = CMatrix::zeros(dim, dim);
    for i in 1..dim {
        let fi = i as f64;
        e[(i - 1, i)] = params.qbracket_re(fi) * params.qbracket(C64::new(fi, 0.0) - alpha) / (b1 * b1);
        f[(i, i - 1)] = ONE;
    }
    let h = CMatrix::from_diag(&weights);
    WeightModule { params: *params, label, weights, e, f, h, atoms: Vec::new() }
}

/// The tensor unit: one dimension, `E = F = H = 0`.
pub fn unit(params: &GlobalParams) -> WeightModule {
    WeightModule {
        params: *params,
        label: ModuleLabel::Unit,
        weights: vec![ZERO],
        e: CMatrix::zeros(1, 1),
        f: CMatrix::zeros(1, 1),
        h: CMatrix::zeros(1, 1),
        atoms: Vec::new(),
    }
}

/// Dual module on the dual basis: `x` acts by the transpose of `S(x)`.
/// Weights are negated in the original order.
pub fn dual_module(m: &WeightModule) -> WeightModule {
    if m.label == ModuleLabel::Unit {
        return m.clone();
    }
    let k = m.k();
    let k_inv = m.k_inv();
    let e = (&m.e * &k_inv).scale(-ONE).transpose();
    let f = (&k * &m.f).scale(-ONE).transpose();
    let weights: Vec<C64> = m.weights.iter().map(|w| -w).collect();
    let h = CMatrix::from_diag(&weights);
    WeightModule {
        params: m.params,
        label: ModuleLabel::Dual(Box::new(m.label.clone())),
        weights,
        e,
        f,
        h,
        atoms: Vec::new(),
    }
}

/// Tensor product, left factor slowest. Tensoring with the unit returns the
/// other factor unchanged.
pub fn tensor_module(a: &WeightModule, b: &WeightModule) -> Result<WeightModule, ModuleError> {
    if a.params.r() != b.params.r() {
        return Err(ModuleError::ParamsMismatch(a.params.r(), b.params.r()));
    }
    if a.label == ModuleLabel::Unit {
        return Ok(b.clone());
    }
    if b.label == ModuleLabel::Unit {
        return Ok(a.clone());
    }
    let ia = CMatrix::identity(a.dim());
    let ib = CMatrix::identity(b.dim());
    let e = &ia.kron(&b.e) + &a.e.kron(&b.k());
    let f = &a.f.kron(&ib) + &a.k_inv().kron(&b.f);
    let weights: Vec<C64> = a.weights.iter().flat_map(|x| b.weights.iter().map(move |y| x + y)).collect();
    let h = CMatrix::from_diag(&weights);
    let mut atoms = a.atoms_or_self();
    atoms.extend(b.atoms_or_self());
    Ok(WeightModule {
        params: a.params,
        label: ModuleLabel::tensor(&a.label, &b.label),
        weights,
        e,
        f,
        h,
        atoms,
    })
}

/// Tensor product of a list of modules; the empty list gives the unit.
pub fn tensor_all(params: &GlobalParams, factors: &[WeightModule]) -> Result<WeightModule, ModuleError> {
    factors.iter().try_fold(unit(params), |acc, m| tensor_module(&acc, m))
}

/// Class of a weight in `ℂ/2ℤ`, represented with real part in `[0, 2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Degree {
    Class(C64),
    Inhomogeneous,
}

/// Per-relation maximum residuals of the defining relations on a module.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RelationReport {
    pub k_kinv: f64,
    pub h_k: f64,
    pub h_e: f64,
    pub h_f: f64,
    pub k_e: f64,
    pub k_f: f64,
    pub e_f: f64,
    /// `‖E^r‖₁ / ‖E‖₁^r`.
    pub e_nilpotent: f64,
    pub f_nilpotent: f64,
    pub h_diagonal: f64,
}

impl RelationReport {
    pub fn max(&self) -> f64 {
        [
            self.k_kinv,
            self.h_k,
            self.h_e,
            self.h_f,
            self.k_e,
            self.k_f,
            self.e_f,
            self.e_nilpotent,
            self.f_nilpotent,
            self.h_diagonal,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

impl WeightModule {
    pub fn params(&self) -> &GlobalParams {
        &self.params
    }

    pub fn label(&self) -> &ModuleLabel {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[C64] {
        &self.weights
    }

    pub fn e(&self) -> &CMatrix {
        &self.e
    }

    pub fn f(&self) -> &CMatrix {
        &self.f
    }

    pub fn h(&self) -> &CMatrix {
        &self.h
    }

    /// `K = q^H`, diagonal in the weight basis.
    pub fn k(&self) -> CMatrix {
        self.k_pow(1.0)
    }

    pub fn k_inv(&self) -> CMatrix {
        self.k_pow(-1.0)
    }

    /// `K^s = q^{sH}` for real `s`.
    pub fn k_pow(&self, s: f64) -> CMatrix {
        let d: Vec<C64> = self.weights.iter().map(|w| self.params.qpow(w * s)).collect();
        CMatrix::from_diag(&d)
    }

    /// Atomic tensor factors; a non-tensor module (including the unit) is its
    /// own single factor.
    pub fn atoms_or_self(&self) -> Vec<WeightModule> {
        if self.atoms.is_empty() {
            vec![self.clone()]
        } else {
            self.atoms.clone()
        }
    }

    /// Structural equality: same label and dimension.
    pub fn same_object(&self, other: &WeightModule) -> bool {
        self.params.r() == other.params.r() && self.dim() == other.dim() && self.label == other.label
    }

    /// Residuals of `KK^{-1} = 1`, `HK = KH`, `[H,E] = 2E`, `[H,F] = -2F`,
    /// `KE = q²EK`, `KF = q^{-2}FK`, `[E,F] = (K - K^{-1})/(q - q^{-1})`,
    /// `E^r = F^r = 0` (relative to `‖E‖₁^r`) and `H = diag(weights)`.
    pub fn relation_residuals(&self) -> RelationReport {
        let n = self.dim();
        let r = self.params.r() as usize;
        let q = self.params.q();
        let k = self.k();
        let ki = self.k_inv();
        let id = CMatrix::identity(n);
        let (e, f, h) = (&self.e, &self.f, &self.h);
        let comm = |a: &CMatrix, b: &CMatrix| &(a * b) - &(b * a);
        let ef_rhs = (&k - &ki).scale(ONE / (q - q.inv()));
        RelationReport {
            k_kinv: (&k * &ki).max_abs_diff(&id),
            h_k: comm(h, &k).max_abs(),
            h_e: comm(h, e).max_abs_diff(&e.scale(C64::new(2.0, 0.0))),
            h_f: comm(h, f).max_abs_diff(&f.scale(C64::new(-2.0, 0.0))),
            k_e: (&k * e).max_abs_diff(&(e * &k).scale(q * q)),
            k_f: (&k * f).max_abs_diff(&(f * &k).scale((q * q).inv())),
            e_f: comm(e, f).max_abs_diff(&ef_rhs),
            e_nilpotent: nilpotency(e, r),
            f_nilpotent: nilpotency(f, r),
            h_diagonal: h.max_abs_diff(&CMatrix::from_diag(&self.weights)),
        }
    }

    /// Common class of all weights modulo `2ℤ`, or `Inhomogeneous`.
    pub fn degree(&self, guard: f64) -> Degree {
        let Some(first) = self.weights.first() else {
            return Degree::Inhomogeneous;
        };
        if self.weights.iter().any(|w| dist_to_lattice(w - first, 2.0) > guard) {
            return Degree::Inhomogeneous;
        }
        Degree::Class(reduce_mod_two(*first))
    }

    /// Multiset of weights, sorted by real then imaginary part.
    pub fn character(&self) -> Vec<C64> {
        let mut w = self.weights.clone();
        sort_weights(&mut w);
        w
    }

    /// Orthonormal basis of the highest-weight vectors of weight `lambda`:
    /// the kernel of `E` restricted to the `lambda`-eigenspace of `H`.
    ///
    /// `rank_tol` is the relative singular value cutoff; eigenspace
    /// membership uses `1e-9` on the weights.
    pub fn highest_weight_vectors(&self, lambda: C64, rank_tol: f64) -> Vec<Vec<C64>> {
        let idx: Vec<usize> = (0..self.dim()).filter(|&i| (self.weights[i] - lambda).norm() < 1e-9).collect();
        if idx.is_empty() {
            return Vec::new();
        }
        let restricted = self.e.select_columns(&idx);
        null_space(&restricted, rank_tol)
            .into_iter()
            .map(|v| {
                let mut full = vec![ZERO; self.dim()];
                for (pos, &i) in idx.iter().enumerate() {
                    full[i] = v[pos];
                }
                full
            })
            .collect()
    }

    /// Distinct weights (within `1e-9`), in basis order of first occurrence.
    pub fn distinct_weights(&self) -> Vec<C64> {
        let mut out: Vec<C64> = Vec::new();
        for w in &self.weights {
            if !out.iter().any(|x| (x - w).norm() < 1e-9) {
                out.push(*w);
            }
        }
        out
    }
}

/// `‖X^r‖₁ / ‖X‖₁^r`, which is at most 1. In a tensor product `E^r` vanishes
/// by cancellation between terms of size `‖E‖^r`, so only the ratio is
/// meaningful at large `r`.
fn nilpotency(x: &CMatrix, r: usize) -> f64 {
    let n = x.norm_one();
    if n == 0.0 {
        0.0
    } else {
        x.pow(r).norm_one() / n.powi(r as i32)
    }
}

fn reduce_mod_two(z: C64) -> C64 {
    let re = z.re - 2.0 * (z.re / 2.0).floor();
    let re = if re >= 2.0 - 1e-12 { 0.0 } else { re };
    C64::new(re, z.im)
}

pub(crate) fn sort_weights(w: &mut [C64]) {
    w.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Whether two weight multisets agree up to `tol`, by greedy matching.
pub fn multiset_close(a: &[C64], b: &[C64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    a.iter().all(|x| {
        match (0..b.len()).find(|&j| !used[j] && (b[j] - x).norm() < tol) {
            Some(j) => {
                used[j] = true;
                true
            }
            None => false,
        }
    })
}
