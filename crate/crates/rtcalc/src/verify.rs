//! The verification suites behind `rtcalc verify`. Each suite exercises one
//! identity at the configured `r` and reports its largest residual.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rtcalc_core::cat::{
    self, braiding, braiding_inv, coev, coev_hat, compose, ev, ev_hat, identity, pivotal, tensor_mor, twist, Morphism,
};
use rtcalc_core::invariant::reference::{figure_eight_scalar, trefoil_scalar, TrefoilExponent};
use rtcalc_core::invariant as inv;
use rtcalc_core::qarith::{GlobalParams, ParamError};
use rtcalc_core::repr::{dual_module, simple_module, tensor_module, verma, ModuleLabel, WeightModule};
use rtcalc_core::tangle::{catalog, catalog_colored, Braid, ColoredBraid, Orientation, Piece, TangleDiagram};
use rtcalc_core::{Tolerances, C64};
use serde::Serialize;

use crate::random;

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub r: u32,
    pub seed: u64,
    pub tol: Tolerances,
    pub max_r: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub max_residual: f64,
    pub tol: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip)]
    pub seconds: f64,
}

#[derive(Default)]
struct Acc {
    cases: usize,
    max: f64,
    notes: Vec<String>,
}

impl Acc {
    fn push(&mut self, residual: f64) {
        self.cases += 1;
        // NaN must fail, so it wins over any number
        if residual.is_nan() || residual > self.max {
            self.max = residual;
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

#[derive(Debug)]
pub struct Failure(pub String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type SuiteFn = fn(&Ctx, &mut ChaCha8Rng, &mut Acc) -> Result<(), Failure>;

struct Ctx {
    params: GlobalParams,
    tol: Tolerances,
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

fn p(r: u32) -> GlobalParams {
    GlobalParams::new(r).expect("small r")
}

const SUITES: &[(&str, f64, SuiteFn)] = &[
    ("relations", 1e-10, relations),
    ("dual_character", 1e-10, dual_character),
    ("simplicity", 0.5, simplicity),
    ("snakes", 1e-10, snakes),
    ("pivotal", 1e-9, pivotal_compat),
    ("braiding_inverse", 1e-9, braiding_inverse),
    ("braiding_linearity", 1e-9, braiding_linearity),
    ("hexagons", 1e-9, hexagons),
    ("twist_scalar", 1e-10, twist_scalar),
    ("balancing", 1e-9, balancing),
    ("ribbon_dual", 1e-9, ribbon_dual),
    ("reidemeister", 1e-9, reidemeister),
    ("qdim", 1e-10, qdim),
    ("s_prime", 1e-9, s_prime),
    ("cutting_lemma", 1e-8, cutting_lemma),
    ("rotation", 1e-9, rotation),
    ("markov", 1e-8, markov),
    ("trefoil_scalar", 1e-9, trefoil),
    ("multiplicity_free", 0.5, multiplicity_free),
    ("ambidexterity", 1e-8, ambidexterity),
    ("two_sided", 1e-8, two_sided),
    ("cut_independence", 1e-8, cut_independence),
    ("eta_rescaling", 1e-9, eta_rescaling),
    ("connect_sum", 1e-8, connect_sum),
    ("alexander_skein", 1e-10, alexander_skein),
    ("alexander_link", 1e-8, alexander_link),
    ("deframing", 1e-8, deframing),
    ("figure_eight", 1e-8, figure_eight),
];

/// Names of all suites in run order.
pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.0).collect()
}

fn suite_rng(seed: u64, name: &str) -> ChaCha8Rng {
    let mut h = DefaultHasher::new();
    name.hash(&mut h);
    random::rng(seed ^ h.finish())
}

/// Runs the suites whose names pass `filter`.
pub fn run(cfg: &VerifyConfig, filter: impl Fn(&str) -> bool) -> Result<Vec<SuiteReport>, ParamError> {
    let ctx = Ctx { params: GlobalParams::with_max_r(cfg.r, cfg.max_r)?, tol: cfg.tol };
    let mut out = Vec::new();
    for &(name, tol, f) in SUITES.iter().filter(|s| filter(s.0)) {
        let start = Instant::now();
        let mut rng = suite_rng(cfg.seed, name);
        let mut acc = Acc::default();
        let outcome = f(&ctx, &mut rng, &mut acc);
        let mut note = acc.notes.join("; ");
        let passed = match &outcome {
            Ok(()) => acc.max.is_finite() && acc.max < tol,
            Err(Failure(msg)) => {
                if !note.is_empty() {
                    note.push_str("; ");
                }
                note.push_str(msg);
                false
            }
        };
        out.push(SuiteReport {
            name,
            cases: acc.cases,
            max_residual: acc.max,
            tol,
            passed,
            note: (!note.is_empty()).then_some(note),
            seconds: start.elapsed().as_secs_f64(),
        });
    }
    Ok(out)
}

fn sample_modules(params: &GlobalParams, rng: &mut ChaCha8Rng) -> Vec<WeightModule> {
    let mut out = vec![verma(params, random::random_alpha(rng))];
    let n = rng.gen_range(0..=params.r() as i64 - 2);
    let l = rng.gen_range(-2..=2);
    out.push(simple_module(params, n, l).expect("n in range"));
    out.push(dual_module(&verma(params, random::random_alpha(rng))));
    out
}

fn relations(ctx: &Ctx, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Result<(), Failure> {
    let params = &ctx.params;
    for _ in 0..50 {
        let v = verma(params, random::random_alpha(rng));
        acc.push(v.relation_residuals().max());
        acc.push(dual_module(&v).relation_residuals().max());
    }
    for n in 0..=params.r() as i64 - 2 {
        for l in -2..=2 {
            acc.push(simple_module(params, n, l)?.relation_residuals().max());
        }
    }
    let a = verma(params, random::random_alpha(rng));
    let b = verma(params, random::random_alpha(rng));
    acc.push(tensor_module(&a, &dual_module(&b))?.relation_residuals().max());
    Ok(())
}

fn dual_character(ctx: &Ctx, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Result<(), Failure> {
    for m in sample_modules(&ctx.params, rng) {
        let dd = dual_module(&dual_module(&m));
        let ok = rtcalc_core::repr::multiset_close(&m.character(), &dd.character(), 1e-12);
        acc.push(if ok { 0.0 } else { 1.0 });
    }
    Ok(())
}

/// Highest-weight vectors of `V(α)`: one for α off ℤ∖rℤ, two on it.
fn simplicity(ctx: &Ctx, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Result<(), Failure> {
    let params = &ctx.params;
    let r = params.r() as i64;
    let count = |alpha: C64| -> usize {
        let v = verma(params, alpha);
        v.distinct_weights().iter().map(|w| v.highest_weight_vectors(*w, ctx.tol.rank).len()).sum()
    };
    for _ in 0..10 {
        acc.push((count(random::random_alpha(rng)) as f64 - 1.0).abs());
    }
    for k in -r..=r {
        let expected = if k % r == 0 { 1.0 } else { 2.0 };
        acc.push((count(C64::new(k as f64, 0.0)) as f64 - expected).abs());
    }
    Ok(())
}

fn snakes(ctx: &Ctx, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Result<(), Failure> {
    for v in sample_modules(&ctx.params, rng) {
        let vd = dual_module(&v);
        let (iv, ivd) = (identity(&v), identity(&vd));
        let s1 = compose(&tensor_mor(&iv, &ev(&v))?, &tensor_mor(&coev(&v), &iv)?)?;
        let s2 = compose(&tensor_mor(&ev(&v), &ivd)?, &tensor_mor(&ivd, &coev(&v))?)?;
        let s3 = compose(&tensor_mor(&ev_hat(&v), &iv)?, &tensor_mor(&iv, &coev_hat(&v))?)?;
        let s4 = compose(&tensor_mor(&ivd, &ev_hat(&v))?, &tensor_mor(&coev_hat(&v), &ivd)?)?;
        acc.push(s1.max_abs_diff(&iv));
        acc.push(s2.max_abs_diff(&ivd));
        acc.push(s3.max_abs_diff(&iv));
        acc.push(s4.max_abs_diff(&ivd));
        for m in [ev(&v), coev(&v), ev_hat(&v), coev_hat(&v)] {
            acc.push(m.linearity_residual());
        }
    }
    Ok(())
}

fn pivotal_compat(ctx: &Ctx, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Result<(), Failure> {
    for v in sample_modules(&ctx.params, rng) {
        let vd = dual_module(&v);
        let pv = pivotal(&v);
        acc.push(pv.linearity_residual());
        let lhs = compose(&tensor_mor(&identity(&vd), &pv)?, &coev_hat(&v))?;
        acc.push(lhs.matrix().max_abs_diff(coev(&vd).matrix()));
        let rhs = compose(&ev(&vd), &tensor_mor(&pv, &identity(&vd))?)?;
        acc.push(ev_hat(&v).matrix().max_abs_diff(rhs.matrix()));
    }
    Ok(())
}

fn verma_pair(ctx: &Ctx, rng: &mut ChaCha8Rng) -> (WeightModule, WeightModule) {
    (verma(&ctx.params, random::random_alpha(rng)), verma(&ctx.params, random::random_alpha(rng)))
}

fn braiding_inverse(ctx: &Ctx, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Result<(), Failure> {
    for _ in 0..10 {
        let (v, w) = verma_pair(ctx, rng);
        let vw = tensor_module(&v, &w)?;
        let wv = tensor_module(&w, &v)?;
        acc.push(compose(&braiding_inv(&v, &w)?, &braiding(&v, &w)?)?.max_abs_diff(&identity(&vw)));
        acc.push(compose(&braiding(&v, &w)?, &braiding_inv(&v, &w)?)?.max_abs_diff(&identity(&wv)));
    }
    Ok(())
}

fn braiding_linearity(ctx: &Ctx, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Result<(), Failure> {
    for _ in 0..5 {
        let (v, w) = verma_pair(ctx, rng);
        acc.push(braiding(&v, &w)?.linearity_residual());
        acc.push(braiding_inv(&v, &w)?.linearity_residual());
        let s = simple_module(&ctx.params, ctx.params.r() as i64 - 2, 1)?;
        acc.push(braiding(&v, &dual_module(&s))?.linearity_residual());
    }
    Ok(())
}

fn hexagons(ctx: &Ctx, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Result<(), Failure> {
    for _ in 0..2 {
        let (v, w) = verma_pair(ctx, rng);
        let u = dual_module(&verma(&ctx.params, random::random_alpha(rng)));
        let wu = tensor_module(&w, &u)?;
        let lhs = braiding(&v, &wu)?;
        let rhs = compose(&tensor_mor(&identity(&w), &braiding(&v, &u)?)?, &tensor_mor(&braiding(&v, &w)?, &identity(&u))?)?;
        acc.push(lhs.max_abs_diff(&rhs));
        let vw = tensor_module(&v, &w)?;
        let lhs = braiding(&vw, &u)?;
        let rhs = compose(&tensor_mor(&braiding(&v, &u)?, &identity(&w))?, &tensor_mor(&identity(&v), &braiding(&w, &u)?)?)?;
        acc.push(lhs.max_abs_diff(&rhs));
    }
    Ok(())
}

fn twist_scalar(ctx: &Ctx, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Result<(), Failure> {
    let params = &ctx.params;
    let rf = params.rf();
    for _ in 0..50 {
        let alpha = random::random_alpha(rng);
        let (s, res) = cat::scalar_of(&twist(&verma(params, alpha))?, ctx.tol.scalar_residual)?;
        let expected = params.qpow((alpha + rf - 1.0) * (alpha - rf + 1.0) / 2.0);
        acc.push(rel(s, expected).max(res));
    }
    Ok(())
}

fn balancing(ctx: &Ctx, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Result<(), Failure> {
    let (v, w) = verma_pair(ctx, rng);
    let vw = tensor_module(&v, &w)?;
    let lhs = twist(&vw)?;
    let double = compose(&braiding(&w, &v)?, &braiding(&v, &w)?)?;
    let rhs = compose(&tensor_mor(&twist(&v)?, &twist(&w)?)?, &double)?;
    acc.push(lhs.max_abs_diff(&rhs));
    Ok(())
}

/// `θ_{V^∨} = (θ_V)^∨`; on simple objects the two scalars agree.
fn ribbon_dual(ctx: &Ctx, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Result<(), Failure> {
    let params = &ctx.params;
    let mut modules: Vec<WeightModule> = (0..5).map(|_| verma(params, random::random_alpha(rng))).collect();
    modules.push(simple_module(params, params.r() as i64 - 2, 1)?);
    for v in modules {
        let (s, r1) = cat::scalar_of(&twist(&v)?, ctx.tol.scalar_residual)?;
        let (sd, r2) = cat::scalar_of(&twist(&dual_module(&v))?, ctx.tol.scalar_residual)?;
        acc.push(rel(sd, s).max(r1).max(r2));
    }
    Ok(())
}

fn reidemeister(ctx: &Ctx, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Result<(), Failure> {
    let params = ctx.params;
    let labels: Vec<ModuleLabel> = (0..3).map(|_| ModuleLabel::Verma(random::random_alpha(rng))).collect();
    let eval = |word: &[i32], n: usize| -> Result<Morphism, Failure> {
        let cb = random::colored_by_strands(params, Braid::new(n, word.to_vec())?, &labels[..n])?;
        Ok(inv::eval_diagram(&cb.diagram())?)
    };
    let id2 = eval(&[], 2)?;
    acc.push(eval(&[1, -1], 2)?.max_abs_diff(&id2));
    acc.push(eval(&[-1, 1], 2)?.max_abs_diff(&id2));
    // σ1σ2σ1 and σ2σ1σ2 both swap strands 1 and 3, so those share a color
    let labels = [labels[0].clone(), labels[1].clone(), labels[0].clone()];
    let eval3 = |word: &[i32]| -> Result<Morphism, Failure> {
        let cb = random::colored_by_strands(params, Braid::new(3, word.to_vec())?, &labels)?;
        Ok(inv::eval_diagram(&cb.diagram())?)
    };
    acc.push(eval3(&[1, 2, 1])?.max_abs_diff(&eval3(&[2, 1, 2])?));
    acc.push(eval3(&[-1, 2, 1])?.max_abs_diff(&eval3(&[2, 1, -2])?));
    Ok(())
}

fn qdim(ctx: &Ctx, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Result<(), Failure> {
    let params = &ctx.params;
    let r = params.r() as i64;
    for _ in 0..10 {
        acc.push(inv::qdim(params, &ModuleLabel::Verma(random::random_alpha(rng)))?.norm());
    }
    for n in 0..=r - 2 {
        for l in -3..=3i64 {
            let sign = if (n + l + l * r).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            let expected = params.qint_re((n + 1) as f64) * sign;
            acc.push(rel(inv::qdim(params, &ModuleLabel::Simple { n: n as u32, l })?, expected));
        }
    }
    Ok(())
}

fn s_prime(ctx: &Ctx, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Result<(), Failure> {
    let params = &ctx.params;
    let rf = params.rf();
    for k in 0..20 {
        let beta = random::random_alpha(rng);
        let alpha = if k % 4 == 0 { C64::new(rf * rng.gen_range(-2..=2) as f64, 0.0) } else { random::random_alpha(rng) };
        let (engine, res) = inv::s_prime_engine(params, beta, alpha, &ctx.tol)?;
        acc.push(rel(engine, inv::s_prime(params, beta, alpha, &ctx.tol)).max(res));
    }
    let two = p(2);
    for (beta, alpha, expected) in [(0.0, 0.0, 2.0), (2.0, 0.0, 2.0), (0.0, 2.0, -2.0)] {
        let (engine, _) = inv::s_prime_engine(&two, C64::new(beta, 0.0), C64::new(alpha, 0.0), &ctx.tol)?;
        acc.push((engine - expected).norm());
    }
    Ok(())
}

fn knot(params: GlobalParams, name: &str, label: ModuleLabel) -> Result<ColoredBraid, Failure> {
    Ok(catalog_colored(params, name, &[label])?)
}

/// `⟨F(L)⟩` of the full closure, a `1×1` matrix.
fn closed_value(cb: &ColoredBraid) -> Result<C64, Failure> {
    Ok(inv::eval_diagram(&cb.close(None)?)?.matrix()[(0, 0)])
}

/// `⟨F(L)⟩ = qdim(V)⟨F(T)⟩`, for Verma colors (both sides vanish) and for
/// a simple color.
fn cutting_lemma(ctx: &Ctx, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Result<(), Failure> {
    let params = ctx.params;
    let simple = ModuleLabel::Simple { n: params.r() - 2, l: 1 };
    let alpha = random::random_alpha(rng);
    for name in ["unknot", "hopf", "trefoil", "figure8"] {
        for label in [ModuleLabel::Verma(alpha), simple.clone()] {
            let cb = knot(params, name, label.clone())?;
            let closed = closed_value(&cb)?;
            let (open, res) = inv::tangle_scalar(&cb.cut(0)?, &ctx.tol)?;
            let qd = inv::qdim(&params, &label)?;
            acc.push(rel(closed, qd * open).max(res));
        }
    }
    let (t, _) = inv::tangle_scalar(&knot(params, "trefoil", ModuleLabel::Verma(alpha))?.cut(0)?, &ctx.tol)?;
    if t.norm() < 1e-6 {
        return Err(Failure(format!("open trefoil scalar vanishes at α = {alpha}")));
    }
    Ok(())
}

fn rotation(ctx: &Ctx, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Result<(), Failure> {
    for _ in 0..5 {
        let cb = random::random_link(rng, ctx.params, 1..=3)?;
        let d = cb.cut(0)?;
        let (a, _) = inv::tangle_scalar(&d, &ctx.tol)?;
        let (b, _) = inv::tangle_scalar(&d.rotated().map_err(inv::InvariantError::from)?, &ctx.tol)?;
        acc.push(rel(b, a));
    }
    Ok(())
}

/// Cyclic rotation of the braid word leaves the closure unchanged.
fn markov(ctx: &Ctx, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Result<(), Failure> {
    let params = ctx.params;
    for _ in 0..5 {
        let cb = random::random_link(rng, params, 2..=3)?;
        let mut word = cb.braid.word().to_vec();
        word.rotate_left(1);
        let rotated = Braid::new(cb.braid.strands(), word)?;
        let labels: Vec<ModuleLabel> = (0..cb.components().len()).map(|k| cb.component_label(k).cloned().expect("component")).collect();
        // a rotation can renumber components; recolor strand by strand
        let per_strand: Vec<ModuleLabel> = cb.strands.iter().map(|s| cb.colors.label(s.color).cloned().expect("color")).collect();
        let shifted = shift_colors(&cb.braid, &per_strand);
        let cb2 = random::colored_by_strands(params, rotated, &shifted)?;
        let a = inv::renormalized(&cb, C64::new(0.37, 0.0), None, &ctx.tol)?;
        let b = inv::renormalized(&cb2, C64::new(0.37, 0.0), None, &ctx.tol)?;
        acc.push(rel(b.value, a.value));
        let simple: Vec<ModuleLabel> = labels.iter().enumerate().map(|(k, _)| ModuleLabel::Simple { n: params.r() - 2, l: k as i64 }).collect();
        let s1 = ColoredBraid::by_components(params, cb.braid.clone(), &simple)?;
        let s_strand: Vec<ModuleLabel> = s1.strands.iter().map(|s| s1.colors.label(s.color).cloned().expect("color")).collect();
        let s2 = random::colored_by_strands(params, cb2.braid.clone(), &shift_colors(&cb.braid, &s_strand))?;
        let (x, y) = (closed_value(&s1)?, closed_value(&s2)?);
        acc.push(rel(y, x));
    }
    Ok(())
}

/// Colors of the strands of `σ_rest · σ_first` given the colors of
/// `σ_first · σ_rest`: the first letter's swap is applied up front.
fn shift_colors(braid: &Braid, per_strand: &[ModuleLabel]) -> Vec<ModuleLabel> {
    let mut out = per_strand.to_vec();
    if let Some(&l) = braid.word().first() {
        let i = l.unsigned_abs() as usize - 1;
        out.swap(i, i + 1);
    }
    out
}

fn trefoil(ctx: &Ctx, _rng: &mut ChaCha8Rng, acc: &mut Acc) -> Result<(), Failure> {
    let two = p(2);
    let (s, res) = inv::tangle_scalar(&knot(two, "trefoil", ModuleLabel::Verma(C64::new(2.0, 0.0)))?.cut(0)?, &ctx.tol)?;
    let expected = C64::from_polar(3.0, std::f64::consts::PI / 4.0) * -1.0;
    acc.push((s - expected).norm().max(res));
    let params = ctx.params;
    let alpha = C64::new(0.4, 0.0);
    let (s, _) = inv::tangle_scalar(&knot(params, "trefoil", ModuleLabel::Verma(alpha))?.cut(0)?, &ctx.tol)?;
    for (name, e) in [("constant", TrefoilExponent::Constant), ("quadratic", TrefoilExponent::Quadratic)] {
        let printed = trefoil_scalar(&params, alpha, e);
        let d = rel(printed, s);
        if d > 1e-9 {
            acc.note(format!("printed sum with {name} exponent differs from engine by {d:.2e} at r = {}", params.r()));
        }
    }
    Ok(())
}

fn multiplicity_free(ctx: &Ctx, _rng: &mut ChaCha8Rng, acc: &mut Acc) -> Result<(), Failure> {
    for eta in [C64::new(0.3, 0.0), C64::new(0.45, 0.1)] {
        let rep = inv::decompose_check(&ctx.params, eta, &ctx.tol)?;
        let off: usize = rep.counts.iter().map(|&c| c.abs_diff(1)).sum::<usize>() + rep.extra;
        acc.push(off as f64);
    }
    Ok(())
}

/// The simple module used for ambidexterity checks: `S_1^0`, or `S_0^0` at
/// `r = 2` where `S_1` does not exist.
pub fn ambi_simple(params: &GlobalParams) -> ModuleLabel {
    ModuleLabel::Simple { n: (params.r() - 2).min(1), l: 0 }
}

fn ambidexterity(ctx: &Ctx, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Result<(), Failure> {
    let params = ctx.params;
    let per = 34;
    let colors = [ModuleLabel::Verma(C64::new(0.3, 0.0)), ModuleLabel::Verma(C64::new(0.41, 0.2)), ambi_simple(&params)];
    for v in &colors {
        for _ in 0..per {
            let t = random::random_ambi_tangle(rng, params, v)?;
            let rep = inv::check_ambidextrous(&t)?;
            acc.push(rep.deviation / rep.right.norm().max(1.0));
        }
    }
    Ok(())
}

fn two_sided(ctx: &Ctx, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Result<(), Failure> {
    let params = ctx.params;
    let eta = C64::new(0.37, 0.0);
    let n = 10;
    for _ in 0..n {
        let (a, b) = (random::random_alpha(rng), random::random_alpha(rng));
        let t = random::random_two_sided_tangle(rng, params, a, b)?;
        acc.push(inv::two_sided_check(&t, eta, &ctx.tol)?.relative);
    }
    Ok(())
}

fn cut_independence(ctx: &Ctx, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Result<(), Failure> {
    let params = ctx.params;
    let eta = C64::new(0.37, 0.0);
    for name in ["hopf", "connectsum(hopf,hopf)", "connectsum(trefoil,hopf)"] {
        let braid = catalog(name)?;
        let n = braid.components().len();
        let labels: Vec<ModuleLabel> = (0..n).map(|_| ModuleLabel::Verma(random::random_alpha(rng))).collect();
        let cb = ColoredBraid::by_components(params, braid, &labels)?;
        let values = (0..n)
            .map(|k| inv::renormalized(&cb, eta, Some(k), &ctx.tol).map(|x| x.value))
            .collect::<Result<Vec<_>, _>>()?;
        for v in &values[1..] {
            acc.push(rel(*v, values[0]));
        }
    }
    Ok(())
}

fn eta_rescaling(ctx: &Ctx, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Result<(), Failure> {
    let params = ctx.params;
    let (eta, eta2) = (C64::new(0.37, 0.0), C64::new(0.61, 0.15));
    let ratio = inv::eta_ratio(&params, eta, eta2);
    for _ in 0..10 {
        let cb = random::random_link(rng, params, 1..=3)?;
        let a = inv::renormalized(&cb, eta, None, &ctx.tol)?.value;
        let b = inv::renormalized(&cb, eta2, None, &ctx.tol)?.value;
        acc.push(rel(a, ratio * b));
    }
    Ok(())
}

fn connect_sum(ctx: &Ctx, _rng: &mut ChaCha8Rng, acc: &mut Acc) -> Result<(), Failure> {
    let (alpha, eta) = (C64::new(0.4, 0.0), C64::new(0.3, 0.0));
    let t = catalog("trefoil")?;
    let h = catalog("hopf")?;
    let u = catalog("unknot")?;
    for (a, b) in [(&t, &t), (&h, &t), (&t, &u)] {
        acc.push(inv::connect_sum_check(&ctx.params, a, b, alpha, eta, &ctx.tol)?.relative);
    }
    Ok(())
}

fn alexander_skein(ctx: &Ctx, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Result<(), Failure> {
    for _ in 0..20 {
        acc.push(inv::alexander_skein_residual(random::random_alpha(rng), &ctx.tol)?);
    }
    Ok(())
}

/// `𝓕′(σ₁³) − 𝓕′(σ₁) = {α+1} 𝓕′(σ₁²)` at `r = 2`.
fn alexander_link(ctx: &Ctx, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Result<(), Failure> {
    let two = p(2);
    let eta = C64::new(0.37, 0.0);
    for _ in 0..5 {
        let alpha = random::random_alpha(rng);
        let f = |w: &[i32]| -> Result<C64, Failure> {
            let cb = ColoredBraid::by_components(two, Braid::new(2, w.to_vec())?, &[ModuleLabel::Verma(alpha)])?;
            Ok(inv::deframed(&cb, eta, &ctx.tol)?)
        };
        let lhs = f(&[1, 1, 1])? - f(&[1])?;
        let rhs = two.qbracket(alpha + 1.0) * f(&[1, 1])?;
        acc.push(rel(lhs, rhs));
    }
    Ok(())
}

/// Adding a kink changes `F′` by the twist but leaves `𝓕′` alone.
fn deframing(ctx: &Ctx, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Result<(), Failure> {
    let eta = C64::new(0.37, 0.0);
    for name in ["unknot", "trefoil", "figure8"] {
        let d = knot(ctx.params, name, ModuleLabel::Verma(random::random_alpha(rng)))?.cut(0)?;
        let mut kinked = d.clone();
        let width = d.bottom.len();
        let mut slice = vec![Piece::TwistPos];
        slice.extend(std::iter::repeat(Piece::Id).take(width - 1));
        kinked.slices.insert(0, slice);
        let a = inv::deframed_tangle(&d, eta, &ctx.tol)?;
        let b = inv::deframed_tangle(&kinked, eta, &ctx.tol)?;
        acc.push(rel(b, a));
    }
    Ok(())
}

/// Dense evaluation: every slice becomes one Kronecker product of generator
/// morphisms, and slices are composed from the top down.
pub fn dense_eval(d: &TangleDiagram) -> Result<Morphism, Failure> {
    let info = d.validate().map_err(inv::InvariantError::from)?;
    let mut modules = Vec::new();
    for e in d.colors.entries() {
        modules.push(e.label.build(&d.params)?);
    }
    let carried = |s: &rtcalc_core::tangle::Strand| match s.orientation {
        Orientation::Up => modules[s.color].clone(),
        Orientation::Down => dual_module(&modules[s.color]),
    };
    let mut slices = Vec::with_capacity(d.slices.len());
    for (k, slice) in d.slices.iter().enumerate() {
        let state = &info.levels[k];
        let mut pos = 0;
        let mut acc: Option<Morphism> = None;
        for piece in slice {
            let input = &state[pos..pos + piece.arity_in()];
            pos += piece.arity_in();
            let m = match *piece {
                Piece::Id => identity(&carried(&input[0])),
                Piece::CrossPos => braiding(&carried(&input[0]), &carried(&input[1]))?,
                Piece::CrossNeg => braiding_inv(&carried(&input[1]), &carried(&input[0]))?,
                Piece::CapEv => ev(&modules[input[1].color]),
                Piece::CapEvHat => ev_hat(&modules[input[0].color]),
                Piece::CupCoev(c) => coev(&modules[c]),
                Piece::CupCoevHat(c) => coev_hat(&modules[c]),
                Piece::TwistPos => twist(&carried(&input[0]))?,
                Piece::TwistNeg => cat::twist_inv(&carried(&input[0]))?,
            };
            acc = Some(match acc {
                None => m,
                Some(a) => tensor_mor(&a, &m)?,
            });
        }
        slices.push(acc.ok_or_else(|| Failure("empty slice".into()))?);
    }
    let mut it = slices.into_iter().rev();
    let mut total = it.next().ok_or_else(|| Failure("no slices".into()))?;
    for s in it {
        total = compose(&total, &s)?;
    }
    Ok(total)
}

/// Both cuts of the figure-eight agree, and the engine agrees with
/// [`dense_eval`] (run at `r ≤ 3`, where dense slices stay small).
fn figure_eight(ctx: &Ctx, rng: &mut ChaCha8Rng, acc: &mut Acc) -> Result<(), Failure> {
    let eta = C64::new(0.37, 0.0);
    let alpha = random::random_alpha(rng);
    let cb = knot(ctx.params, "figure8", ModuleLabel::Verma(alpha))?;
    let a = inv::tangle_scalar(&cb.close(Some(1))?, &ctx.tol)?.0;
    let b = inv::tangle_scalar(&cb.close(Some(2))?, &ctx.tol)?.0;
    let c = inv::tangle_scalar(&cb.close(Some(3))?, &ctx.tol)?.0;
    acc.push(rel(b, a));
    acc.push(rel(c, a));
    let small = p(ctx.params.r().min(3));
    for name in ["figure8", "trefoil"] {
        let d = knot(small, name, ModuleLabel::Verma(alpha))?.cut(0)?;
        let engine = inv::eval_diagram(&d)?;
        acc.push(engine.max_abs_diff(&dense_eval(&d)?));
    }
    let f = inv::renormalized(&cb, eta, None, &ctx.tol)?;
    let printed = inv::mod_qdim(&ctx.params, eta, alpha, &ctx.tol)? * figure_eight_scalar(&ctx.params, alpha);
    let d = rel(printed, f.value);
    if d > 1e-8 {
        acc.note(format!("printed triple sum differs from engine by {d:.2e}"));
    }
    Ok(())
}
