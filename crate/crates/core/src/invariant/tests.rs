use super::reference::{trefoil_scalar, TrefoilExponent};
use super::*;
use crate::repr::simple_module;
use crate::tangle::catalog_colored;

fn p(r: u32) -> GlobalParams {
    GlobalParams::new(r).unwrap()
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn tol() -> Tolerances {
    Tolerances::default()
}

fn knot(params: GlobalParams, name: &str, alpha: C64) -> ColoredBraid {
    catalog_colored(params, name, &[ModuleLabel::Verma(alpha)]).unwrap()
}

#[test]
fn unknot_values() {
    for r in 2..=4 {
        let params = p(r);
        assert!(qdim(&params, &ModuleLabel::Verma(C64::new(0.37, 0.2))).unwrap().norm() < 1e-12);
        assert_eq!(qdim(&params, &ModuleLabel::Unit).unwrap(), ONE);
        for n in 0..=(r - 2) {
            for l in -1..=1i64 {
                let label = ModuleLabel::Simple { n, l };
                let sign = if (n as i64 + l + l * r as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                let expected = params.qint_re(n as f64 + 1.0) * sign;
                assert!((qdim(&params, &label).unwrap() - expected).norm() < 1e-12);
            }
        }
    }
    assert!((qdim(&p(3), &ModuleLabel::Simple { n: 1, l: 0 }).unwrap() + 1.0).norm() < 1e-12);
}

#[test]
fn unknot_matches_direct_composite() {
    let params = p(3);
    let v = simple_module(&params, 1, 1).unwrap();
    let direct = cat::compose(&cat::ev_hat(&v), &cat::coev(&v)).unwrap();
    let q = qdim(&params, v.label()).unwrap();
    assert!((direct.matrix()[(0, 0)] - q).norm() < 1e-14);
}

#[test]
fn open_trefoil_r2_alpha2() {
    let params = p(2);
    let t = knot(params, "trefoil", c(2.0)).close(Some(1)).unwrap();
    let (s, res) = tangle_scalar(&t, &tol()).unwrap();
    let expected = C64::from_polar(3.0, core::f64::consts::PI / 4.0) * -1.0;
    assert!((s - expected).norm() < 1e-9, "{s}");
    assert!(res < 1e-9);
}

/// `Σ_j q^{(1-r)λ_j} c³[(0,j),(0,j)]` written out from the R-matrix:
/// only `v_0⊗v_j → v_j⊗v_0 → v_j⊗v_0 (l = j) → v_0⊗v_j` contributes.
fn trefoil_by_hand(params: &GlobalParams, alpha: C64) -> C64 {
    let rf = params.rf();
    let a = alpha + rf - 1.0;
    (0..params.r()).fold(C64::new(0.0, 0.0), |acc, j| {
        let jf = j as f64;
        let lj = a - 2.0 * jf;
        let prod = (0..j).fold(ONE, |p, m| p * params.qbracket(c(jf - m as f64) - alpha));
        acc + params.qpow(lj * (1.0 - rf) + a * lj * 1.5 + jf * (jf - 1.0) / 2.0) * prod
    })
}

#[test]
fn trefoil_sum_against_engine() {
    for r in 2..=5 {
        let params = p(r);
        let alpha = C64::new(0.4, 0.15);
        let (s, _) = tangle_scalar(&knot(params, "trefoil", alpha).close(Some(1)).unwrap(), &tol()).unwrap();
        assert!((s - trefoil_by_hand(&params, alpha)).norm() < 1e-9, "r={r}");
        let quad = trefoil_scalar(&params, alpha, TrefoilExponent::Quadratic);
        let cons = trefoil_scalar(&params, alpha, TrefoilExponent::Constant);
        if r == 2 {
            assert!((s - quad).norm() < 1e-9 && (s - cons).norm() < 1e-9);
        } else {
            // both printed exponents drop or double the q^{i(i-1)/2} of the q-exponential
            assert!((s - quad).norm() > 1e-3 && (s - cons).norm() > 1e-3);
        }
    }
}

#[test]
fn s_prime_examples() {
    let params = p(2);
    let t = tol();
    assert!((s_prime(&params, c(0.0), c(0.0), &t) - 2.0).norm() < 1e-12);
    assert!((s_prime(&params, c(0.0), c(2.0), &t) + 2.0).norm() < 1e-12);
    let (e, _) = s_prime_engine(&params, c(0.0), c(0.0), &t).unwrap();
    assert!((e - 2.0).norm() < 1e-9);
    let (e, _) = s_prime_engine(&params, c(0.0), c(2.0), &t).unwrap();
    assert!((e + 2.0).norm() < 1e-9);
    for r in 2..=4 {
        let params = p(r);
        for (b, a) in [(0.3, 0.45), (-1.2, 2.7), (0.8, r as f64), (1.1, -2.0 * r as f64)] {
            let (e, _) = s_prime_engine(&params, c(b), c(a), &t).unwrap();
            assert!((e - s_prime(&params, c(b), c(a), &t)).norm() < 1e-9, "r={r} β={b} α={a}");
        }
    }
}

#[test]
fn modified_dimension() {
    let params = p(3);
    let t = tol();
    let eta = C64::new(0.37, 0.1);
    assert!((mod_qdim(&params, eta, eta, &t).unwrap() - 1.0).norm() < 1e-12);
    assert!(matches!(mod_qdim(&params, eta, c(3.0), &t), Err(InvariantError::Guarded { .. })));
    assert!(matches!(mod_qdim(&params, c(1.0), eta, &t), Err(InvariantError::Guarded { .. })));
    assert!(matches!(mod_qdim(&p(2), c(0.3), c(2.0), &t), Err(InvariantError::Guarded { .. })));
    let (e1, e2, a) = (c(0.3), C64::new(0.71, -0.2), C64::new(1.45, 0.3));
    let ratio = mod_qdim(&params, e1, a, &t).unwrap() / mod_qdim(&params, e2, a, &t).unwrap();
    assert!((ratio - eta_ratio(&params, e1, e2)).norm() < 1e-12);
}

#[test]
fn renormalized_unknot_is_modified_dimension() {
    let params = p(3);
    let alpha = c(0.4);
    let eta = c(0.3);
    let res = renormalized(&knot(params, "unknot", alpha), eta, None, &tol()).unwrap();
    assert!((res.value - mod_qdim(&params, eta, alpha, &tol()).unwrap()).norm() < 1e-12);
    assert_eq!(res.cut_component, Some(0));
}

#[test]
fn hopf_cut_choices_agree() {
    for r in 2..=3 {
        let params = p(r);
        let (a, b, eta) = (c(0.4), c(1.7), c(0.3));
        let labels = [ModuleLabel::Verma(a), ModuleLabel::Verma(b)];
        let hopf = catalog_colored(params, "hopf", &labels).unwrap();
        let f0 = renormalized(&hopf, eta, Some(0), &tol()).unwrap().value;
        let f1 = renormalized(&hopf, eta, Some(1), &tol()).unwrap().value;
        assert!((f0 - f1).norm() < 1e-8 * f0.norm().max(1.0));
        let t = tol();
        let closed = mod_qdim(&params, eta, a, &t).unwrap() * s_prime(&params, b, a, &t);
        assert!((f0 - closed).norm() < 1e-8 * f0.norm().max(1.0));
    }
}

#[test]
fn no_generic_color() {
    let params = p(2);
    let k = knot(params, "trefoil", c(1.0));
    assert_eq!(renormalized(&k, c(0.3), None, &tol()).unwrap_err(), InvariantError::NoGenericColor);
    let labels = [ModuleLabel::Verma(c(0.4)), ModuleLabel::Verma(c(2.0))];
    let hopf = catalog_colored(params, "hopf", &labels).unwrap();
    assert_eq!(renormalized(&hopf, c(0.3), Some(1), &tol()).unwrap_err(), InvariantError::NotGeneric(1));
    assert!(renormalized(&hopf, c(0.3), Some(0), &tol()).is_ok());
}

#[test]
fn cutting_lemma_closed_links_vanish() {
    let params = p(2);
    for name in ["unknot", "hopf", "trefoil", "figure8"] {
        let cb = knot(params, name, c(0.4));
        let closed = eval_diagram(&cb.close(None).unwrap()).unwrap();
        assert!(closed.matrix()[(0, 0)].norm() < 1e-9, "{name}");
    }
    let (s, _) = tangle_scalar(&knot(params, "trefoil", c(0.4)).close(Some(1)).unwrap(), &tol()).unwrap();
    assert!(s.norm() > 1e-3);
}

#[test]
fn reidemeister_two_is_identity() {
    let params = p(3);
    let labels = [ModuleLabel::Verma(c(0.3)), ModuleLabel::Verma(C64::new(-0.2, 0.4))];
    let braid = Braid::new(2, vec![1, -1]).unwrap();
    let mut table = ColorTable::new();
    let a = table.intern(labels[0].clone()).unwrap();
    let b = table.intern(labels[1].clone()).unwrap();
    let cb = ColoredBraid::new(params, table, braid, vec![Strand::up(a), Strand::up(b)]).unwrap();
    let m = eval_diagram(&cb.diagram()).unwrap();
    assert!(m.matrix().max_abs_diff(&CMatrix::identity(9)) < 1e-9);
}

#[test]
fn rotation_preserves_scalars() {
    let params = p(3);
    let t = knot(params, "trefoil", C64::new(0.4, 0.1)).close(Some(1)).unwrap();
    let (s, _) = tangle_scalar(&t, &tol()).unwrap();
    let (sr, _) = tangle_scalar(&t.rotated().unwrap(), &tol()).unwrap();
    assert!((s - sr).norm() < 1e-9);
}

#[test]
fn ambidextrous_identity_tangle() {
    let params = p(2);
    let cb = knot(params, "unknot", c(0.3));
    let two = ColoredBraid::new(params, cb.colors.clone(), Braid::new(2, vec![]).unwrap(), vec![cb.strands[0]; 2]).unwrap();
    let rep = check_ambidextrous(&two.diagram()).unwrap();
    assert!(rep.deviation < 1e-14);
    assert!((rep.left - rep.right).norm() < 1e-14);
    assert!(rep.left.norm() < 1e-12);
}

#[test]
fn ambidextrous_small_tangles() {
    for r in 2..=3 {
        let params = p(r);
        for label in [ModuleLabel::Verma(C64::new(0.41, 0.2)), ModuleLabel::Simple { n: r - 2, l: 0 }] {
            let cb = ColoredBraid::by_components(params, Braid::new(3, vec![1, 2, -1, 2, 2]).unwrap(), &[label]).unwrap();
            let rep = check_ambidextrous(&cb.close_right(2).unwrap()).unwrap();
            assert!(rep.deviation < 1e-8, "r={r}: {rep:?}");
        }
    }
}

#[test]
fn two_sided_weighting() {
    let params = p(3);
    let labels = [ModuleLabel::Verma(c(0.3)), ModuleLabel::Verma(C64::new(0.45, 0.1)), ModuleLabel::Verma(c(0.8))];
    // strands 1 and 2 return to their own positions; strand 3 is closed
    let braid = Braid::new(3, vec![1, 1, 2, 2, -1, -1, 2, -2]).unwrap();
    let cb = ColoredBraid::by_components(params, braid, &labels).unwrap();
    let rep = two_sided_check(&cb.close_right(2).unwrap(), c(0.37), &tol()).unwrap();
    assert!(rep.relative < 1e-8, "{rep:?}");
}

#[test]
fn deframing_ignores_kinks() {
    let params = p(2);
    let alpha = c(0.4);
    let plain = knot(params, "unknot", alpha).close(Some(1)).unwrap();
    let mut kinked = plain.clone();
    kinked.slices.push(vec![Piece::TwistPos]);
    let eta = c(0.3);
    let a = deframed_tangle(&plain, eta, &tol()).unwrap();
    let b = deframed_tangle(&kinked, eta, &tol()).unwrap();
    assert!((a - b).norm() < 1e-10);
    let fa = renormalized_tangle(&plain, eta, &tol()).unwrap().value;
    let fb = renormalized_tangle(&kinked, eta, &tol()).unwrap().value;
    assert!((fa - fb).norm() > 1e-3);
}

#[test]
fn alexander_skein_matrix_and_link_level() {
    for a in [0.13, 0.4, 1.37, -0.8] {
        assert!(alexander_skein_residual(C64::new(a, 0.05), &tol()).unwrap() < 1e-10);
    }
    let params = p(2);
    let alpha = c(0.4);
    let eta = c(0.3);
    let label = [ModuleLabel::Verma(alpha)];
    let f = |word: Vec<i32>| {
        let cb = ColoredBraid::by_components(params, Braid::new(2, word).unwrap(), &label).unwrap();
        deframed(&cb, eta, &tol()).unwrap()
    };
    let (plus, minus, zero) = (f(vec![1, 1, 1]), f(vec![1]), f(vec![1, 1]));
    let lhs = plus - minus;
    let rhs = zero * params.qbracket(alpha + 1.0);
    assert!((lhs - rhs).norm() < 1e-8, "{lhs} vs {rhs}");
}

#[test]
fn deframing_rejects_mixed_colors() {
    let params = p(2);
    let labels = [ModuleLabel::Verma(c(0.4)), ModuleLabel::Verma(c(0.6))];
    let hopf = catalog_colored(params, "hopf", &labels).unwrap();
    assert_eq!(deframed(&hopf, c(0.3), &tol()).unwrap_err(), InvariantError::MixedDeframeColors);
}

#[test]
fn connect_sum_examples() {
    let params = p(2);
    let t = catalog_braid("trefoil");
    let rep = connect_sum_check(&params, &t, &t, c(0.4), c(0.3), &tol()).unwrap();
    assert!(rep.relative < 1e-8, "{rep:?}");
    let u = catalog_braid("unknot");
    let rep = connect_sum_check(&params, &t, &u, c(0.4), c(0.3), &tol()).unwrap();
    assert!(rep.relative < 1e-8);
    let rep = connect_sum_check(&p(3), &catalog_braid("hopf"), &t, C64::new(0.4, 0.2), c(0.3), &tol()).unwrap();
    assert!(rep.relative < 1e-8);
}

fn catalog_braid(name: &str) -> Braid {
    crate::tangle::catalog(name).unwrap()
}

#[test]
fn decomposition_counts() {
    let rep = decompose_check(&p(3), c(0.3), &tol()).unwrap();
    assert_eq!(rep.counts, vec![1, 1, 1]);
    assert_eq!(rep.extra, 0);
    let rep = decompose_check(&p(2), c(0.25), &tol()).unwrap();
    assert_eq!(rep.counts, vec![1, 1]);
    assert!(matches!(decompose_check(&p(2), c(0.5), &tol()), Err(InvariantError::Guarded { .. })));
}

