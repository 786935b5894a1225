//! End-to-end runs on the worked examples: the Bateman pair, its dual, the
//! coupled pair of Bateman systems, and a Hénon-Heiles variant.

use hamiltonize::canonicalizer::{build_canonical, build_lagrangian, euler_lagrange, lagrangian_equivalent, solve_s1, QuadraticLagrangian};
use hamiltonize::criterion::is_hamiltonian_candidate;
use hamiltonize::dynamics::{observable_drift, simulate, stability, ModeClass};
use hamiltonize::factorization::{factor, factor_via_frobenius, to_structure};
use hamiltonize::potential::{integrate_potential, PolyField};
use hamiltonize::rational::{int, rat};
use hamiltonize::reduction::{extract_eom, standardize, BlockSystem, EquationsOfMotion};
use hamiltonize::{MultiPoly, PhaseVars, RatMatrix, Rational, SearchConfig, UniPoly};

fn r(n: i64) -> Rational {
    int(n)
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Bateman pair in the momenta `p = ẋ`, `q = ẏ`.
fn bateman_m(g: &Rational, l: &Rational) -> RatMatrix {
    RatMatrix::from_rows(vec![
        vec![-g.clone(), r(0), r(-1), -l.clone()],
        vec![r(0), g.clone(), -l.clone(), r(-1)],
        vec![r(1), r(0), r(0), r(0)],
        vec![r(0), r(1), r(0), r(0)],
    ])
}

fn dual_eom(g: &Rational, l: &Rational) -> EquationsOfMotion {
    EquationsOfMotion::new(
        RatMatrix::from_rows(vec![vec![r(0), -g.clone()], vec![g.clone(), r(0)]]),
        RatMatrix::from_rows(vec![vec![r(-1), -l.clone()], vec![-l.clone(), r(-1)]]),
    )
    .unwrap()
}

/// Hessian of a quadratic polynomial computed from second partials.
fn hessian(h: &MultiPoly) -> RatMatrix {
    let n = h.nvars();
    let zero = vec![r(0); n];
    RatMatrix::from_fn(n, n, |i, j| h.partial(i).partial(j).eval(&zero))
}

#[test]
fn bateman_pair_from_the_two_form() {
    let (g, l) = (rat(3, 7), rat(2, 5));
    let vars = names(&["p", "q", "x", "y"]);
    // ω = dp∧dy + dq∧dx + γ dx∧dy
    let mut omega = RatMatrix::zeros(4, 4);
    for (i, j, v) in [(0, 3, r(1)), (1, 2, r(1)), (2, 3, g.clone())] {
        omega[(i, j)] = v.clone();
        omega[(j, i)] = -v;
    }
    let p = MultiPoly::var(vars.clone(), 0);
    let q = MultiPoly::var(vars.clone(), 1);
    let x = MultiPoly::var(vars.clone(), 2);
    let y = MultiPoly::var(vars.clone(), 3);
    let h = &(&(&p * &q) + &(&x * &y)) + &(&x.pow(2) + &y.pow(2)).scale(&(&l / r(2)));
    let m = bateman_m(&g, &l);
    assert_eq!(&omega * &m, hessian(&h));

    let brackets = omega.inverse().unwrap();
    assert_eq!(brackets[(0, 1)], -g.clone());
    assert_eq!(brackets[(0, 3)], r(-1));
    assert_eq!(brackets[(1, 2)], r(-1));
    for (i, j) in [(0, 2), (1, 3), (2, 3)] {
        assert_eq!(brackets[(i, j)], r(0));
    }
}

#[test]
fn bateman_structure_from_the_pipeline() {
    let (g, l) = (r(1), rat(1, 2));
    let m = bateman_m(&g, &l);
    assert!(is_hamiltonian_candidate(&m).unwrap());
    let eom = extract_eom(&BlockSystem::new(m.clone()).unwrap()).unwrap();
    let s1 = solve_s1(&eom, &SearchConfig::default()).unwrap();
    let vars = PhaseVars::default_for(2);
    let semi = hamiltonize::canonicalizer::semi_canonical_pair(&eom, &s1).unwrap();
    let st = to_structure(&semi, &m, &vars).unwrap();
    assert_eq!(st.h.to_string(), "p*q + 1/4*x^2 + x*y + 1/4*y^2");
    assert_eq!(st.omega_display(&vars), "dp∧dy + dq∧dx + dx∧dy");
    let brackets = st.nonzero_brackets(&vars);
    let expect = [("p", "q", r(-1)), ("p", "y", r(-1)), ("q", "x", r(-1))];
    assert_eq!(brackets.len(), expect.len());
    for ((a, b, v), (ea, eb, ev)) in brackets.iter().zip(expect) {
        assert_eq!((a.as_str(), b.as_str(), v), (ea, eb, &ev));
    }
}

#[test]
fn dual_system_pair_and_canonical_form() {
    let (g, l) = (r(1), rat(1, 2));
    let eom = dual_eom(&g, &l);
    let m = eom.standard_matrix();
    assert_eq!(
        m.char_poly().unwrap(),
        UniPoly::new(vec![r(1) - &l * &l, r(0), r(2) + &g * &g, r(0), r(1)])
    );
    let vars = PhaseVars::default_for(2);
    let s1 = solve_s1(&eom, &SearchConfig::default()).unwrap();
    assert_eq!(s1, RatMatrix::identity(2));
    let semi = hamiltonize::canonicalizer::semi_canonical_pair(&eom, &s1).unwrap();
    let st = to_structure(&semi, &m, &vars).unwrap();
    assert_eq!(st.h.to_string(), "1/2*p^2 + 1/2*q^2 + 1/2*x^2 + 1/2*x*y + 1/2*y^2");
    assert_eq!(st.omega_display(&vars), "dp∧dx + dq∧dy - dx∧dy");

    let c = build_canonical(&eom, &s1, &vars).unwrap();
    // ½(p²+q²) + ½γ(qx-py) + λxy + ½(1+γ²/4)(x²+y²)
    let [p, q, x, y] = [0, 1, 2, 3].map(|i| MultiPoly::var(vars.all(), i));
    let expected = &(&(&(&p.pow(2) + &q.pow(2)).scale(&rat(1, 2)) + &(&(&q * &x) - &(&p * &y)).scale(&(&g / r(2))))
        + &(&x * &y).scale(&l))
        + &(&x.pow(2) + &y.pow(2)).scale(&((r(1) + &g * &g / r(4)) / r(2)));
    assert_eq!(c.h_can, expected);
}

#[test]
fn dual_lagrangians_agree() {
    let (g, l) = (rat(2, 3), rat(1, 5));
    let eom = dual_eom(&g, &l);
    let vars = PhaseVars::default_for(2);
    let built = build_lagrangian(&eom, &RatMatrix::identity(2), &vars).unwrap();

    // ½(ẋ²+ẏ²) - ½(x²+y²) - γxẏ - λxy
    let lv = vars.lagrangian_vars();
    let [x, y, xd, yd] = [0, 1, 2, 3].map(|i| MultiPoly::var(lv.clone(), i));
    let l2 = &(&(&(&xd.pow(2) + &yd.pow(2)).scale(&rat(1, 2)) - &(&x.pow(2) + &y.pow(2)).scale(&rat(1, 2)))
        - &(&x * &yd).scale(&g))
        - &(&x * &y).scale(&l);
    let ql2 = QuadraticLagrangian::from_poly(&l2).unwrap();
    assert!(lagrangian_equivalent(&built, &ql2));
    assert_eq!(euler_lagrange(&ql2).unwrap(), eom);
}

#[test]
fn frobenius_route_agrees_with_linear_solve() {
    let m = dual_eom(&rat(1, 3), &rat(3, 4)).standard_matrix();
    let a = factor(&m, &SearchConfig::default()).unwrap().pair;
    let b = factor_via_frobenius(&m).unwrap();
    assert_eq!(a.product(), m);
    assert_eq!(b.product(), m);
    assert!(b.a.is_alternating() && b.s.is_symmetric());
}

#[test]
fn canonical_s1_implies_factorable_standard_form() {
    let g1 = r(1);
    let g2 = rat(1, 2);
    let l1 = rat(1, 3);
    let l2 = rat(1, 4);
    let b1 = RatMatrix::diag(&[-g1.clone(), g1, -g2.clone(), g2]);
    let b2 = RatMatrix::from_rows(vec![
        vec![r(-1), r(0), -l1.clone(), -l2.clone()],
        vec![r(0), r(-1), -l2.clone(), -l1.clone()],
        vec![-l1.clone(), -l2.clone(), r(-1), r(0)],
        vec![-l2.clone(), -l1.clone(), r(0), r(-1)],
    ]);
    let eom = EquationsOfMotion::new(b1, b2).unwrap();
    let s1 = solve_s1(&eom, &SearchConfig::default()).unwrap();
    let m_std = eom.standard_matrix();
    assert!(is_hamiltonian_candidate(&m_std).unwrap());
    assert!(factor(&m_std, &SearchConfig::default()).is_ok());
    let st = standardize(&BlockSystem::new(m_std.clone()).unwrap()).unwrap();
    assert_eq!(st.m_std, m_std);
    assert!(s1.is_symmetric());
}

#[test]
fn henon_heiles_conserves_the_constructed_energy() {
    let g = rat(1, 10);
    let eom = dual_eom(&g, &r(0));
    let xy = names(&["x", "y"]);
    let x = MultiPoly::var(xy.clone(), 0);
    let y = MultiPoly::var(xy.clone(), 1);
    let f = PolyField::new(vec![&x.pow(2) - &y.pow(2), (&x * &y).scale(&r(-2))]).unwrap();
    let v = integrate_potential(&f).unwrap();
    assert_eq!(v.to_string(), "-1/3*x^3 + x*y^2");

    let vars = PhaseVars::default_for(2);
    let h0 = MultiPoly::quadratic_form(vars.all(), &RatMatrix::identity(4));
    let h = &h0 + &v.embed(vars.all(), 2);
    let tr = simulate(&eom.standard_matrix(), Some(&f), &[0.0, 0.0, 0.1, 0.1], 1e-2, 20.0).unwrap();
    assert!(observable_drift(&tr, &h).unwrap() < 1e-8);
}

#[test]
fn dual_stability_threshold_ignores_damping() {
    for g in [r(0), r(1)] {
        for (l, osc) in [(rat(1, 2), true), (r(2), false)] {
            let rep = stability(&dual_eom(&g, &l).standard_matrix()).unwrap();
            assert!(rep.even);
            assert_eq!(rep.all_oscillatory(), osc);
            if !osc {
                assert!(rep.modes.iter().any(|m| m.class == ModeClass::Growing));
            }
        }
    }
}
