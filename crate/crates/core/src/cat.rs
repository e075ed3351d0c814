//! Morphisms between weight modules and the ribbon structure on them.
//!
//! Duality maps use the literal dual basis `v_i^∨`:
//!
//! * `ev: V^∨⊗V → 1`, `v_i^∨⊗v_j ↦ δ_ij`
//! * `coev: 1 → V⊗V^∨`, `1 ↦ Σ v_i⊗v_i^∨`
//! * `ev_hat: V⊗V^∨ → 1`, `v_i⊗v_j^∨ ↦ δ_ij q^{(1-r)λ_i}`
//! * `coev_hat: 1 → V^∨⊗V`, `1 ↦ Σ q^{(r-1)λ_i} v_i^∨⊗v_i`
//!
//! where `λ_i` is the weight of `v_i`. In `coev_hat` the factor comes from
//! the functional `v_i^∨ ∘ K^{r-1}`, which is what makes the snake relations
//! hold against `ev_hat`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use thiserror::Error;

use crate::linalg::{CMatrix, C64, ONE, ZERO};
use crate::repr::{dual_module, tensor_all, tensor_module, unit, ModuleError, WeightModule};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum CatError {
    #[error("cannot compose: codomain {inner} does not match domain {outer}")]
    Mismatch { inner: String, outer: String },
    #[error("matrix is {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    Shape { rows: usize, cols: usize, expected_rows: usize, expected_cols: usize },
    #[error("partial trace needs an endomorphism of a tensor product with at least {needed} factors")]
    NotTraceable { needed: usize },
    #[error("morphism is not scalar: residual {residual:e} exceeds {tol:e}")]
    NotScalar { residual: f64, tol: f64 },
    #[error(transparent)]
    Module(#[from] ModuleError),
}

/// A linear map `dom → cod`, stored as a `cod.dim × dom.dim` matrix.
#[derive(Clone, Debug)]
pub struct Morphism {
    dom: Arc<WeightModule>,
    cod: Arc<WeightModule>,
    matrix: CMatrix,
}

impl Morphism {
    pub fn new(dom: Arc<WeightModule>, cod: Arc<WeightModule>, matrix: CMatrix) -> Result<Self, CatError> {
        if matrix.rows() != cod.dim() || matrix.cols() != dom.dim() {
            return Err(CatError::Shape {
                rows: matrix.rows(),
                cols: matrix.cols(),
                expected_rows: cod.dim(),
                expected_cols: dom.dim(),
            });
        }
        Ok(Self { dom, cod, matrix })
    }

    fn raw(dom: WeightModule, cod: WeightModule, matrix: CMatrix) -> Self {
        debug_assert_eq!((matrix.rows(), matrix.cols()), (cod.dim(), dom.dim()));
        Self { dom: Arc::new(dom), cod: Arc::new(cod), matrix }
    }

    pub fn dom(&self) -> &WeightModule {
        &self.dom
    }

    pub fn cod(&self) -> &WeightModule {
        &self.cod
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn is_endomorphism(&self) -> bool {
        self.dom.same_object(&self.cod)
    }

    /// `max_x ‖M·x_dom − x_cod·M‖` over `x ∈ {E, F, H}`.
    pub fn linearity_residual(&self) -> f64 {
        let m = &self.matrix;
        [
            (self.dom.e(), self.cod.e()),
            (self.dom.f(), self.cod.f()),
            (self.dom.h(), self.cod.h()),
        ]
        .into_iter()
        .map(|(xd, xc)| (m * xd).max_abs_diff(&(xc * m)))
        .fold(0.0, f64::max)
    }

    /// Largest entrywise difference to another morphism with the same shape.
    pub fn max_abs_diff(&self, other: &Morphism) -> f64 {
        self.matrix.max_abs_diff(&other.matrix)
    }

    pub fn scale(&self, s: C64) -> Morphism {
        Morphism { dom: self.dom.clone(), cod: self.cod.clone(), matrix: self.matrix.scale(s) }
    }
}

pub fn identity(v: &WeightModule) -> Morphism {
    Morphism::raw(v.clone(), v.clone(), CMatrix::identity(v.dim()))
}

/// `g ∘ f`.
pub fn compose(g: &Morphism, f: &Morphism) -> Result<Morphism, CatError> {
    if !f.cod.same_object(&g.dom) {
        return Err(CatError::Mismatch { inner: format!("{}", f.cod.label()), outer: format!("{}", g.dom.label()) });
    }
    Ok(Morphism { dom: f.dom.clone(), cod: g.cod.clone(), matrix: &g.matrix * &f.matrix })
}

/// `f ⊗ g`, left factor slowest.
pub fn tensor_mor(f: &Morphism, g: &Morphism) -> Result<Morphism, CatError> {
    let dom = tensor_module(&f.dom, &g.dom)?;
    let cod = tensor_module(&f.cod, &g.cod)?;
    Ok(Morphism::raw(dom, cod, f.matrix.kron(&g.matrix)))
}

/// `ev_V: V^∨⊗V → 1`.
pub fn ev(v: &WeightModule) -> Morphism {
    let n = v.dim();
    let m = CMatrix::from_fn(1, n * n, |_, c| if c / n == c % n { ONE } else { ZERO });
    Morphism::raw(tensor_module(&dual_module(v), v).expect("same params"), unit(v.params()), m)
}

/// `coev_V: 1 → V⊗V^∨`.
pub fn coev(v: &WeightModule) -> Morphism {
    let n = v.dim();
    let m = CMatrix::from_fn(n * n, 1, |row, _| if row / n == row % n { ONE } else { ZERO });
    Morphism::raw(unit(v.params()), tensor_module(v, &dual_module(v)).expect("same params"), m)
}

/// `ev_hat_V: V⊗V^∨ → 1`.
pub fn ev_hat(v: &WeightModule) -> Morphism {
    let n = v.dim();
    let pivot = pivot_factors(v, 1.0 - v.params().rf());
    let m = CMatrix::from_fn(1, n * n, |_, c| if c / n == c % n { pivot[c / n] } else { ZERO });
    Morphism::raw(tensor_module(v, &dual_module(v)).expect("same params"), unit(v.params()), m)
}

/// `coev_hat_V: 1 → V^∨⊗V`.
pub fn coev_hat(v: &WeightModule) -> Morphism {
    let n = v.dim();
    let pivot = pivot_factors(v, v.params().rf() - 1.0);
    let m = CMatrix::from_fn(n * n, 1, |row, _| if row / n == row % n { pivot[row / n] } else { ZERO });
    Morphism::raw(unit(v.params()), tensor_module(&dual_module(v), v).expect("same params"), m)
}

/// Pivotal isomorphism `p_V: V → V^∨∨`, `v_i ↦ q^{(1-r)λ_i} (v_i^∨)^∨`.
pub fn pivotal(v: &WeightModule) -> Morphism {
    let pivot = pivot_factors(v, 1.0 - v.params().rf());
    Morphism::raw(v.clone(), dual_module(&dual_module(v)), CMatrix::from_diag(&pivot))
}

/// `q^{s λ_i}` for every basis weight.
fn pivot_factors(v: &WeightModule, s: f64) -> Vec<C64> {
    v.weights().iter().map(|w| v.params().qpow(w * s)).collect()
}

/// `Σ_l coeff_l E_V^l ⊗ F_W^l` for `l < r`.
fn quasi_r(v: &WeightModule, w: &WeightModule, coeff: impl Fn(u32) -> C64) -> CMatrix {
    let r = v.params().r();
    let mut acc = CMatrix::zeros(v.dim() * w.dim(), v.dim() * w.dim());
    let mut el = CMatrix::identity(v.dim());
    let mut fl = CMatrix::identity(w.dim());
    for l in 0..r {
        if el.max_abs() == 0.0 || fl.max_abs() == 0.0 {
            break;
        }
        acc = &acc + &el.kron(&fl).scale(coeff(l));
        el = &el * v.e();
        fl = &fl * w.f();
    }
    acc
}

/// `q^{s λ_i μ_j / 2}` for the basis vector `v_i⊗w_j`.
fn qhh(v: &WeightModule, w: &WeightModule, s: f64) -> Vec<C64> {
    let p = v.params();
    v.weights()
        .iter()
        .flat_map(|l| w.weights().iter().map(move |m| p.qpow(l * m * (s / 2.0))))
        .collect()
}

/// Braiding `c_{V,W} = τ ∘ q^{H⊗H/2} ∘ exp_q({1}E⊗F): V⊗W → W⊗V`.
pub fn braiding(v: &WeightModule, w: &WeightModule) -> Result<Morphism, CatError> {
    let dom = tensor_module(v, w)?;
    let cod = tensor_module(w, v)?;
    let p = *v.params();
    let r_mat = quasi_r(v, w, |l| p.r_matrix_coeff(l));
    let diag = qhh(v, w, 1.0);
    let (dv, dw) = (v.dim(), w.dim());
    // row (j, i) of W⊗V is row (i, j) of R
    let m = CMatrix::from_fn(dv * dw, dv * dw, |row, col| {
        let (j, i) = (row / dv, row % dv);
        let src = i * dw + j;
        diag[src] * r_mat[(src, col)]
    });
    Ok(Morphism::raw(dom, cod, m))
}

/// `c_{V,W}^{-1} = exp_{q^{-1}}(-{1}E⊗F) ∘ q^{-H⊗H/2} ∘ τ^{-1}: W⊗V → V⊗W`.
pub fn braiding_inv(v: &WeightModule, w: &WeightModule) -> Result<Morphism, CatError> {
    let dom = tensor_module(w, v)?;
    let cod = tensor_module(v, w)?;
    let p = *v.params();
    let n_mat = quasi_r(v, w, |l| p.r_inverse_coeff(l));
    let diag = qhh(v, w, -1.0);
    let (dv, dw) = (v.dim(), w.dim());
    let m = CMatrix::from_fn(dv * dw, dv * dw, |row, col| {
        let (j, i) = (col / dv, col % dv);
        let src = i * dw + j;
        n_mat[(row, src)] * diag[src]
    });
    Ok(Morphism::raw(dom, cod, m))
}

/// Splits `m` as `left ⊗ right` where `right` consists of the last
/// `n_right` atomic factors.
pub fn split_right(m: &WeightModule, n_right: usize) -> Result<(WeightModule, WeightModule), CatError> {
    let atoms = m.atoms_or_self();
    if n_right == 0 || n_right > atoms.len() {
        return Err(CatError::NotTraceable { needed: n_right.max(1) });
    }
    let cut = atoms.len() - n_right;
    Ok((tensor_all(m.params(), &atoms[..cut])?, tensor_all(m.params(), &atoms[cut..])?))
}

/// Right partial trace over the last `n_traced` atomic factors:
/// `(id_V⊗ev_hat_W)(f⊗id_{W^∨})(id_V⊗coev_W)` for `f ∈ End(V⊗W)`.
///
/// Evaluated as the contraction `Σ_j f[(a,j),(b,j)] q^{(1-r)μ_j}`, which is
/// the same composite written out in the weight basis.
pub fn ptr_right(f: &Morphism, n_traced: usize) -> Result<Morphism, CatError> {
    if !f.is_endomorphism() {
        return Err(CatError::NotTraceable { needed: n_traced });
    }
    let (v, w) = split_right(&f.dom, n_traced)?;
    let pivot = pivot_factors(&w, 1.0 - w.params().rf());
    let (dv, dw) = (v.dim(), w.dim());
    let m = CMatrix::from_fn(dv, dv, |a, b| {
        (0..dw).fold(ZERO, |acc, j| acc + f.matrix[(a * dw + j, b * dw + j)] * pivot[j])
    });
    Ok(Morphism::raw(v.clone(), v, m))
}

/// Left partial trace over the first `n_traced` atomic factors:
/// `(ev_V⊗id_W)(id_{V^∨}⊗f)(coev_hat_V⊗id_W)` for `f ∈ End(V⊗W)`.
pub fn ptr_left(f: &Morphism, n_traced: usize) -> Result<Morphism, CatError> {
    if !f.is_endomorphism() {
        return Err(CatError::NotTraceable { needed: n_traced });
    }
    let n_atoms = f.dom.atoms_or_self().len();
    if n_traced == 0 || n_traced > n_atoms {
        return Err(CatError::NotTraceable { needed: n_traced.max(1) });
    }
    let (v, w) = if n_traced == n_atoms {
        (f.dom.as_ref().clone(), unit(f.dom.params()))
    } else {
        split_right(&f.dom, n_atoms - n_traced)?
    };
    let pivot = pivot_factors(&v, v.params().rf() - 1.0);
    let (dv, dw) = (v.dim(), w.dim());
    let m = CMatrix::from_fn(dw, dw, |a, b| {
        (0..dv).fold(ZERO, |acc, i| acc + f.matrix[(i * dw + a, i * dw + b)] * pivot[i])
    });
    Ok(Morphism::raw(w.clone(), w, m))
}

/// `θ_V = ptr_R(c_{V,V})`.
pub fn twist(v: &WeightModule) -> Result<Morphism, CatError> {
    ptr_right(&braiding(v, v)?, v.atoms_or_self().len().max(1))
}

/// `θ_V^{-1} = ptr_R(c_{V,V}^{-1})`.
pub fn twist_inv(v: &WeightModule) -> Result<Morphism, CatError> {
    ptr_right(&braiding_inv(v, v)?, v.atoms_or_self().len().max(1))
}

/// `⟨f⟩` with `f = ⟨f⟩·id`: the mean diagonal entry, together with the
/// residual `‖f − ⟨f⟩·id‖_max`.
pub fn scalar_of(f: &Morphism, tol: f64) -> Result<(C64, f64), CatError> {
    if !f.is_endomorphism() {
        return Err(CatError::NotTraceable { needed: 0 });
    }
    let (value, residual) = matrix_scalar(&f.matrix);
    if residual > tol || !residual.is_finite() {
        return Err(CatError::NotScalar { residual, tol });
    }
    Ok((value, residual))
}

pub(crate) fn matrix_scalar(m: &CMatrix) -> (C64, f64) {
    let n = m.rows();
    let value = m.diagonal().iter().fold(ZERO, |a, b| a + b) / n as f64;
    let residual = m.max_abs_diff(&CMatrix::identity(n).scale(value));
    (value, residual)
}
