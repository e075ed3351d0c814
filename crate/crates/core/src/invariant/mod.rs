//! Link invariants: the functor on diagrams, quantum and modified
//! dimensions, `S′`, the renormalized invariant and the consistency checks
//! around it.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::cat::{self, CatError, Morphism};
use crate::linalg::{CMatrix, C64, ONE};
use crate::qarith::{dist_to_lattice, nearest_multiple, GlobalParams};
use crate::repr::{dual_module, tensor_all, tensor_module, verma, ModuleError, ModuleLabel, WeightModule};
use crate::tangle::{Braid, ColorTable, ColoredBraid, Orientation, Piece, Strand, TangleDiagram, TangleError};
use crate::tol::Tolerances;

pub mod reference;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum InvariantError {
    #[error("{name} = {value} is within {guard:e} of {excluded}")]
    Guarded { name: &'static str, value: C64, excluded: &'static str, guard: f64 },
    #[error("no generic color: no component is colored by a Verma module V(α) with α ∉ ℤ")]
    NoGenericColor,
    #[error("component {0} is not colored by a generic Verma module")]
    NotGeneric(usize),
    #[error("expected a (1,1)-tangle, got a ({bottom},{top})-tangle")]
    NotOneOne { bottom: usize, top: usize },
    #[error("expected a (2,2)-tangle with upward open strands")]
    NotTwoTwo,
    #[error("deframing needs every component colored by one Verma module")]
    MixedDeframeColors,
    #[error("diagram does not type-check: {}", .0.first().map(|e| e.to_string()).unwrap_or_default())]
    Typing(Vec<TangleError>),
    #[error(transparent)]
    Tangle(#[from] TangleError),
    #[error(transparent)]
    Cat(#[from] CatError),
    #[error(transparent)]
    Module(#[from] ModuleError),
}

impl From<Vec<TangleError>> for InvariantError {
    fn from(e: Vec<TangleError>) -> Self {
        InvariantError::Typing(e)
    }
}

/// A renormalized invariant together with how it was obtained.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantResult {
    pub value: C64,
    pub eta: C64,
    pub r: u32,
    pub cut_color: ModuleLabel,
    pub cut_color_id: String,
    /// Cut component for braid input; `None` for a pre-cut diagram.
    pub cut_component: Option<usize>,
    /// `⟨F(T)⟩` before weighting by `d_η(α)`.
    pub tangle_scalar: C64,
    pub scalar_residual: f64,
    pub diagram_hash: String,
}

type OpKey = (u8, usize, bool, usize, bool);

/// Evaluates diagrams by pushing a state matrix `current × dom` through the
/// slices. Each piece acts on its own tensor factors only, so no slice-wide
/// Kronecker product is ever formed.
struct Evaluator<'a> {
    d: &'a TangleDiagram,
    modules: Vec<(WeightModule, WeightModule)>,
    ops: BTreeMap<OpKey, CMatrix>,
}

impl<'a> Evaluator<'a> {
    fn new(d: &'a TangleDiagram) -> Result<Self, InvariantError> {
        let mut modules = Vec::with_capacity(d.colors.len());
        for e in d.colors.entries() {
            let v = e.label.build(&d.params)?;
            let vd = dual_module(&v);
            modules.push((v, vd));
        }
        Ok(Evaluator { d, modules, ops: BTreeMap::new() })
    }

    fn carried(&self, s: &Strand) -> &WeightModule {
        match s.orientation {
            Orientation::Up => &self.modules[s.color].0,
            Orientation::Down => &self.modules[s.color].1,
        }
    }

    fn local_op(&mut self, piece: Piece, input: &[Strand]) -> Result<Option<CMatrix>, InvariantError> {
        let up = |s: &Strand| s.orientation == Orientation::Up;
        let key: OpKey = match piece {
            Piece::Id => return Ok(None),
            Piece::CrossPos => (0, input[0].color, up(&input[0]), input[1].color, up(&input[1])),
            Piece::CrossNeg => (1, input[0].color, up(&input[0]), input[1].color, up(&input[1])),
            Piece::CapEv => (2, input[1].color, true, 0, true),
            Piece::CapEvHat => (3, input[0].color, true, 0, true),
            Piece::CupCoev(c) => (4, c, true, 0, true),
            Piece::CupCoevHat(c) => (5, c, true, 0, true),
            Piece::TwistPos => (6, input[0].color, up(&input[0]), 0, true),
            Piece::TwistNeg => (7, input[0].color, up(&input[0]), 0, true),
        };
        if let Some(m) = self.ops.get(&key) {
            return Ok(Some(m.clone()));
        }
        let m = match piece {
            Piece::CrossPos => cat::braiding(self.carried(&input[0]), self.carried(&input[1]))?.matrix().clone(),
            // bottom (X, Y) → top (Y, X) is c_{Y,X}^{-1}
            Piece::CrossNeg => cat::braiding_inv(self.carried(&input[1]), self.carried(&input[0]))?.matrix().clone(),
            Piece::CapEv => cat::ev(&self.modules[key.1].0).matrix().clone(),
            Piece::CapEvHat => cat::ev_hat(&self.modules[key.1].0).matrix().clone(),
            Piece::CupCoev(c) => cat::coev(&self.modules[c].0).matrix().clone(),
            Piece::CupCoevHat(c) => cat::coev_hat(&self.modules[c].0).matrix().clone(),
            Piece::TwistPos => cat::twist(self.carried(&input[0]))?.matrix().clone(),
            Piece::TwistNeg => cat::twist_inv(self.carried(&input[0]))?.matrix().clone(),
            Piece::Id => unreachable!(),
        };
        self.ops.insert(key, m.clone());
        Ok(Some(m))
    }

    fn run(mut self) -> Result<Morphism, InvariantError> {
        let info = self.d.validate()?;
        let params = self.d.params;
        let dom = tensor_all(&params, &self.d.bottom.iter().map(|s| self.carried(s).clone()).collect::<Vec<_>>())?;
        let cod = tensor_all(&params, &self.d.top.iter().map(|s| self.carried(s).clone()).collect::<Vec<_>>())?;
        let mut state = CMatrix::identity(dom.dim());
        let mut dims: Vec<usize> = self.d.bottom.iter().map(|s| self.carried(s).dim()).collect();
        for (k, slice) in self.d.slices.iter().enumerate() {
            let below = info.levels[k].clone();
            let (mut pos_in, mut pos_out) = (0, 0);
            for &piece in slice {
                let n_in = piece.arity_in();
                let input = &below[pos_in..pos_in + n_in];
                if let Some(op) = self.local_op(piece, input)? {
                    let left: usize = dims[..pos_out].iter().product();
                    let right: usize = dims[pos_out + n_in..].iter().product();
                    state = state.apply_on_factor(left, right, &op);
                    let out_dims: Vec<usize> = match piece {
                        Piece::CrossPos | Piece::CrossNeg => vec![dims[pos_out + 1], dims[pos_out]],
                        Piece::CapEv | Piece::CapEvHat => vec![],
                        Piece::CupCoev(c) | Piece::CupCoevHat(c) => {
                            let d = self.modules[c].0.dim();
                            vec![d, d]
                        }
                        _ => vec![dims[pos_out]],
                    };
                    dims.splice(pos_out..pos_out + n_in, out_dims);
                }
                pos_in += n_in;
                pos_out += piece.arity_out();
            }
        }
        Ok(Morphism::new(Arc::new(dom), Arc::new(cod), state)?)
    }
}

/// The functor on a validated diagram: a morphism from the tensor product of
/// the bottom objects to that of the top objects.
pub fn eval_diagram(d: &TangleDiagram) -> Result<Morphism, InvariantError> {
    Evaluator::new(d)?.run()
}

/// Scalar of a `(1,1)`-tangle: `⟨F(T)⟩` and its residual.
pub fn tangle_scalar(d: &TangleDiagram, tol: &Tolerances) -> Result<(C64, f64), InvariantError> {
    if d.bottom.len() != 1 || d.top.len() != 1 {
        return Err(InvariantError::NotOneOne { bottom: d.bottom.len(), top: d.top.len() });
    }
    Ok(cat::scalar_of(&eval_diagram(d)?, tol.scalar_residual)?)
}

/// The colored unknot as a closed diagram: `ev_hat ∘ coev`.
pub fn unknot_diagram(params: GlobalParams, label: ModuleLabel) -> Result<TangleDiagram, InvariantError> {
    let mut colors = ColorTable::new();
    let c = colors.push("v", label)?;
    Ok(TangleDiagram {
        params,
        colors,
        bottom: vec![],
        slices: vec![vec![Piece::CupCoev(c)], vec![Piece::CapEvHat]],
        top: vec![],
    })
}

/// `qdim(V) = ⟨ev_hat_V ∘ coev_V⟩`, evaluated on the colored unknot.
/// The unit is accepted as well and gives `1`.
pub fn qdim(params: &GlobalParams, label: &ModuleLabel) -> Result<C64, InvariantError> {
    if *label == ModuleLabel::Unit {
        return Ok(ONE);
    }
    let m = eval_diagram(&unknot_diagram(*params, label.clone())?)?;
    Ok(m.matrix()[(0, 0)])
}

fn guard_not_integer(name: &'static str, z: C64, tol: &Tolerances) -> Result<(), InvariantError> {
    if dist_to_lattice(z, 1.0) < tol.guard {
        return Err(InvariantError::Guarded { name, value: z, excluded: "ℤ ∪ rℤ", guard: tol.guard });
    }
    Ok(())
}

/// Whether `V(α)` can be cut along: `α ∉ ℤ` (which contains `rℤ`).
pub fn is_generic(alpha: C64, tol: &Tolerances) -> bool {
    dist_to_lattice(alpha, 1.0) >= tol.guard
}

/// Closed form of the Hopf scalar
/// `S′(β, α) = q^{βα}{αr}/{α}`, or `q^{βrz}(-1)^{(r+1)z} r` when `α = rz`.
pub fn s_prime(params: &GlobalParams, beta: C64, alpha: C64, tol: &Tolerances) -> C64 {
    let rf = params.rf();
    if dist_to_lattice(alpha, rf) < tol.guard {
        let z = nearest_multiple(alpha, rf);
        let sign = if ((params.r() as i64 + 1) * z).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        return params.qpow(beta * rf * z as f64) * sign * rf;
    }
    params.qpow(beta * alpha) * params.qbracket(alpha * rf) / params.qbracket(alpha)
}

/// The Hopf `(1,1)`-tangle with open strand `V(α)` and a `V(β)` loop:
/// the braid `σ_1²` on strands colored `(α, β)`, closed except strand 1.
pub fn hopf_tangle(params: GlobalParams, beta: C64, alpha: C64) -> Result<TangleDiagram, InvariantError> {
    let labels = [ModuleLabel::Verma(alpha), ModuleLabel::Verma(beta)];
    let cb = ColoredBraid::by_components(params, Braid::new(2, vec![1, 1])?, &labels)?;
    Ok(cb.close(Some(1))?)
}

/// `S′(β, α)` measured by the engine on [`hopf_tangle`].
pub fn s_prime_engine(params: &GlobalParams, beta: C64, alpha: C64, tol: &Tolerances) -> Result<(C64, f64), InvariantError> {
    tangle_scalar(&hopf_tangle(*params, beta, alpha)?, tol)
}

/// Modified dimension `d_η(α) = S′(α, η)/S′(η, α) = {ηr}{α}/({η}{αr})`.
pub fn mod_qdim(params: &GlobalParams, eta: C64, alpha: C64, tol: &Tolerances) -> Result<C64, InvariantError> {
    guard_not_integer("η", eta, tol)?;
    guard_not_integer("α", alpha, tol)?;
    Ok(s_prime(params, alpha, eta, tol) / s_prime(params, eta, alpha, tol))
}

/// `d_η(α)/d_η′(α) = sin(πη)sin(πη′/r) / (sin(πη/r)sin(πη′))`, independent
/// of `α`.
pub fn eta_ratio(params: &GlobalParams, eta: C64, eta2: C64) -> C64 {
    let pi = core::f64::consts::PI;
    let rf = params.rf();
    let s = |z: C64| (z * pi).sin();
    s(eta) * s(eta2 / rf) / (s(eta / rf) * s(eta2))
}

fn verma_alpha(label: &ModuleLabel) -> Option<C64> {
    match label {
        ModuleLabel::Verma(a) => Some(*a),
        _ => None,
    }
}

/// `F′_η` of the closure of a pre-cut `(1,1)`-tangle whose open strand is
/// colored by a generic Verma module.
pub fn renormalized_tangle(d: &TangleDiagram, eta: C64, tol: &Tolerances) -> Result<InvariantResult, InvariantError> {
    if d.bottom.len() != 1 || d.top.len() != 1 {
        return Err(InvariantError::NotOneOne { bottom: d.bottom.len(), top: d.top.len() });
    }
    let color = d.bottom[0].color;
    let label = d.colors.label(color).cloned().ok_or(InvariantError::NoGenericColor)?;
    let alpha = verma_alpha(&label).ok_or(InvariantError::NoGenericColor)?;
    guard_not_integer("α", alpha, tol)?;
    let dim = mod_qdim(&d.params, eta, alpha, tol)?;
    let (scalar, residual) = tangle_scalar(d, tol)?;
    Ok(InvariantResult {
        value: dim * scalar,
        eta,
        r: d.params.r(),
        cut_color: label,
        cut_color_id: d.colors.id(color).unwrap_or_default().to_string(),
        cut_component: None,
        tangle_scalar: scalar,
        scalar_residual: residual,
        diagram_hash: d.fingerprint(),
    })
}

/// Components of a colored braid closure that may be cut along.
pub fn admissible_components(cb: &ColoredBraid, tol: &Tolerances) -> Vec<usize> {
    (0..cb.components().len())
        .filter(|&k| cb.component_label(k).and_then(verma_alpha).is_some_and(|a| is_generic(a, tol)))
        .collect()
}

/// `F′_η` of a braid closure, cut along `cut` or the first admissible
/// component.
pub fn renormalized(cb: &ColoredBraid, eta: C64, cut: Option<usize>, tol: &Tolerances) -> Result<InvariantResult, InvariantError> {
    let admissible = admissible_components(cb, tol);
    let k = match cut {
        None => *admissible.first().ok_or(InvariantError::NoGenericColor)?,
        Some(k) if k >= cb.components().len() => {
            return Err(TangleError::ComponentOutOfRange { component: k, count: cb.components().len() }.into())
        }
        Some(k) if !admissible.contains(&k) => return Err(InvariantError::NotGeneric(k)),
        Some(k) => k,
    };
    let mut res = renormalized_tangle(&cb.cut(k)?, eta, tol)?;
    res.cut_component = Some(k);
    Ok(res)
}

/// Engine value of the twist scalar on `V(α)`.
pub fn twist_scalar(params: &GlobalParams, alpha: C64, tol: &Tolerances) -> Result<C64, InvariantError> {
    Ok(cat::scalar_of(&cat::twist(&verma(params, alpha))?, tol.scalar_residual)?.0)
}

/// `𝓕′(L) = θ^{-fr(L)} F′_η(L)` for a pre-cut diagram all of whose
/// components carry the same Verma color, where `θ` is the measured twist
/// scalar and `fr` is the writhe plus the net number of kinks.
pub fn deframed_tangle(d: &TangleDiagram, eta: C64, tol: &Tolerances) -> Result<C64, InvariantError> {
    let info = d.validate()?;
    let first = d.colors.label(info.components[0].color).cloned();
    if info.components.iter().any(|c| d.colors.label(c.color).cloned() != first) {
        return Err(InvariantError::MixedDeframeColors);
    }
    let alpha = first.as_ref().and_then(verma_alpha).ok_or(InvariantError::MixedDeframeColors)?;
    let f = renormalized_tangle(d, eta, tol)?.value;
    let theta = twist_scalar(&d.params, alpha, tol)?;
    Ok(f * theta.powi(-(info.framing() as i32)))
}

/// [`deframed_tangle`] for a braid closure, cut along its first component.
pub fn deframed(cb: &ColoredBraid, eta: C64, tol: &Tolerances) -> Result<C64, InvariantError> {
    deframed_tangle(&cb.cut(0)?, eta, tol)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AmbiReport {
    /// `⟨ptr_R(F(T))⟩`, closing the right strand.
    pub right: C64,
    /// `⟨ptr_L(F(T))⟩`, closing the left strand.
    pub left: C64,
    /// Largest entry of the difference of the two closed endomorphisms.
    pub deviation: f64,
}

fn check_two_two(t: &TangleDiagram) -> Result<(), InvariantError> {
    let ok = t.bottom.len() == 2
        && t.top.len() == 2
        && t.bottom.iter().chain(&t.top).all(|s| s.orientation == Orientation::Up);
    if ok {
        Ok(())
    } else {
        Err(InvariantError::NotTwoTwo)
    }
}

/// Compares the left and right closures of a `(2,2)`-tangle with both open
/// strands colored `V`.
pub fn check_ambidextrous(t: &TangleDiagram) -> Result<AmbiReport, InvariantError> {
    check_two_two(t)?;
    let right = eval_diagram(&t.close_last()?)?;
    let left = eval_diagram(&t.close_first()?)?;
    if !right.dom().same_object(left.dom()) {
        return Err(InvariantError::NotTwoTwo);
    }
    let (rs, _) = cat::matrix_scalar(right.matrix());
    let (ls, _) = cat::matrix_scalar(left.matrix());
    Ok(AmbiReport { right: rs, left: ls, deviation: right.max_abs_diff(&left) })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwoSidedReport {
    /// `d_η(α)⟨F(right closure)⟩`, the open strand colored `V(α)`.
    pub alpha_side: C64,
    /// `d_η(β)⟨F(left closure)⟩`, the open strand colored `V(β)`.
    pub beta_side: C64,
    /// `|alpha_side − beta_side| / max(1, |alpha_side|)`.
    pub relative: f64,
}

/// For a `(2,2)`-tangle whose open strands are colored `V(α)` (left) and
/// `V(β)` (right) and return to their own positions, checks
/// `d_η(α)⟨F(T closed on the right)⟩ = d_η(β)⟨F(T closed on the left)⟩`.
pub fn two_sided_check(t: &TangleDiagram, eta: C64, tol: &Tolerances) -> Result<TwoSidedReport, InvariantError> {
    check_two_two(t)?;
    let a = renormalized_tangle(&t.close_last()?, eta, tol)?.value;
    let b = renormalized_tangle(&t.close_first()?, eta, tol)?.value;
    Ok(TwoSidedReport { alpha_side: a, beta_side: b, relative: (a - b).norm() / a.norm().max(1.0) })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConnectSumReport {
    /// `d_η(α) F′_η(L#L′)`.
    pub lhs: C64,
    /// `F′_η(L) F′_η(L′)`.
    pub rhs: C64,
    pub relative: f64,
}

/// `d_η(α) F′_η(L#L′) = F′_η(L) F′_η(L′)` with every component colored
/// `V(α)`; the sum joins the last strand of `a` with the first of `b`.
pub fn connect_sum_check(
    params: &GlobalParams,
    a: &Braid,
    b: &Braid,
    alpha: C64,
    eta: C64,
    tol: &Tolerances,
) -> Result<ConnectSumReport, InvariantError> {
    let label = [ModuleLabel::Verma(alpha)];
    let f = |br: &Braid| -> Result<C64, InvariantError> {
        Ok(renormalized(&ColoredBraid::by_components(*params, br.clone(), &label)?, eta, None, tol)?.value)
    };
    let lhs = mod_qdim(params, eta, alpha, tol)? * f(&a.connect_sum(b))?;
    let rhs = f(a)? * f(b)?;
    Ok(ConnectSumReport { lhs, rhs, relative: (lhs - rhs).norm() / rhs.norm().max(1e-300) })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecomposeReport {
    /// Number of highest-weight vectors at weight `2η + 2i`, `i = 0, …, r-1`.
    pub counts: Vec<usize>,
    /// Highest-weight vectors found at any other weight.
    pub extra: usize,
}

/// Highest-weight vectors of `V(η)⊗V(η)`; multiplicity-freeness means one
/// at each weight `2η + 2i` and none elsewhere.
pub fn decompose_check(params: &GlobalParams, eta: C64, tol: &Tolerances) -> Result<DecomposeReport, InvariantError> {
    if dist_to_lattice(eta, 0.5) < tol.guard {
        return Err(InvariantError::Guarded { name: "η", value: eta, excluded: "½ℤ", guard: tol.guard });
    }
    let v = verma(params, eta);
    let vv = tensor_module(&v, &v)?;
    let targets: Vec<C64> = (0..params.r()).map(|i| eta * 2.0 + 2.0 * i as f64).collect();
    let counts = targets.iter().map(|w| vv.highest_weight_vectors(*w, tol.rank).len()).collect();
    let extra = vv
        .distinct_weights()
        .into_iter()
        .filter(|w| !targets.iter().any(|t| (t - w).norm() < 1e-9))
        .map(|w| vv.highest_weight_vectors(w, tol.rank).len())
        .sum();
    Ok(DecomposeReport { counts, extra })
}

/// Skein residual `‖θ^{-1}c − θc^{-1} − {α+1}·id‖` on `V(α)⊗V(α)` at
/// `r = 2`, with `θ` the measured twist scalar.
pub fn alexander_skein_residual(alpha: C64, tol: &Tolerances) -> Result<f64, InvariantError> {
    let params = GlobalParams::new(2).expect("r = 2 is valid");
    let v = verma(&params, alpha);
    let theta = twist_scalar(&params, alpha, tol)?;
    let c = cat::braiding(&v, &v)?;
    let ci = cat::braiding_inv(&v, &v)?;
    let lhs = &c.matrix().scale(theta.inv()) - &ci.matrix().scale(theta);
    let rhs = CMatrix::identity(4).scale(params.qbracket(alpha + 1.0));
    Ok(lhs.max_abs_diff(&rhs))
}

/// Human-readable description of an error's category, used for exit codes
/// and diagnostics.
pub fn error_kind(e: &InvariantError) -> &'static str {
    match e {
        InvariantError::Cat(CatError::NotScalar { .. }) => "residual",
        _ => "domain",
    }
}

/// Formats a complex number as `a+bi`.
pub fn fmt_complex(z: C64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

#[cfg(test)]
mod tests;
