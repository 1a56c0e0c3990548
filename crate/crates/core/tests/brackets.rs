//! The Jacobi bracket and the bracket on `T*M×ℝ`, each computed in two or
//! more independent ways.

mod common;

use common::{contact3, contact5, poisson2};
use jacobi_dirac::extbundle::{d_phi_fn, TrivialAlgebroid};
use jacobi_dirac::sampling;
use jacobi_dirac::{BracketMode, ExtForm, ExtVec, JacobiStructure, Poly};

fn structures() -> Vec<(&'static str, JacobiStructure)> {
    vec![
        ("contact3", contact3()),
        ("contact5", contact5()),
        ("poisson2", poisson2()),
    ]
}

#[test]
fn direct_and_bialgebroid_brackets_agree() {
    let mut pairs = 0;
    for (name, j) in structures() {
        let mut r = sampling::rng(11);
        for _ in 0..40 {
            let f = sampling::poly(&mut r, j.chart(), 3, 4);
            let g = sampling::poly(&mut r, j.chart(), 3, 4);
            let a = j.bracket(&f, &g, BracketMode::Direct).unwrap();
            let b = j.bracket(&f, &g, BracketMode::Bialgebroid).unwrap();
            assert_eq!(a, b, "{name}: f = {f}, g = {g}");
            pairs += 1;
        }
    }
    assert!(pairs >= 100);
}

#[test]
fn bracket_of_coordinates_on_contact() {
    let j = contact3();
    let c = j.chart();
    let br = |f: &str, g: &str| {
        j.bracket(
            &common::poly(c, f),
            &common::poly(c, g),
            BracketMode::Direct,
        )
        .unwrap()
        .to_string()
    };
    // Λ = p ∂t∧∂p + ∂q∧∂p, E = ∂t
    assert_eq!(br("1", "t"), "1");
    assert_eq!(br("q", "p"), "1");
    assert_eq!(br("t", "p"), "0");
    assert_eq!(br("t", "t*p"), "t*p");
    assert_eq!(br("t", "q"), "-q");
}

/// `[a,b]_P = L^φ_{P#a} b − L^φ_{P#b} a − d^φ P(a,b)` on the trivial algebroid.
fn p_bracket(j: &JacobiStructure, a: &ExtForm, b: &ExtForm) -> ExtForm {
    let alg = TrivialAlgebroid::trivial(j.chart());
    let phi = ExtForm::unit(j.chart());
    let p = j.as_ext();
    let pa = p.contract(a);
    let pb = p.contract(b);
    let pab = ExtForm::scalar(p.eval(&[a, b]));
    alg.twisted_lie(&phi, &pa, b)
        .sub(&alg.twisted_lie(&phi, &pb, a))
        .sub(&alg.twisted_d(&phi, &pab))
}

#[test]
fn dual_bracket_three_ways() {
    for (name, j) in structures() {
        let alg = j.dual_algebroid().unwrap();
        let mut r = sampling::rng(23);
        for _ in 0..25 {
            let a: ExtForm = sampling::field(&mut r, j.chart(), 1, 3);
            let b: ExtForm = sampling::field(&mut r, j.chart(), 1, 3);
            let formula = j.dual_bracket(&a, &b).unwrap();
            assert_eq!(
                formula,
                alg.bracket(&a, &b),
                "{name}: algebroid, a = {a}, b = {b}"
            );
            assert_eq!(
                formula,
                p_bracket(&j, &a, &b),
                "{name}: P-bracket, a = {a}, b = {b}"
            );
        }
    }
}

#[test]
fn dual_bracket_of_differentials_is_differential_of_bracket() {
    for (name, j) in structures() {
        let mut r = sampling::rng(29);
        for _ in 0..20 {
            let f = sampling::poly(&mut r, j.chart(), 3, 3);
            let g = sampling::poly(&mut r, j.chart(), 3, 3);
            let lhs = j.dual_bracket(&d_phi_fn(&f), &d_phi_fn(&g)).unwrap();
            let fg = j.bracket(&f, &g, BracketMode::Direct).unwrap();
            assert_eq!(lhs, d_phi_fn(&fg), "{name}: f = {f}, g = {g}");
        }
    }
}

#[test]
fn d_star_w_closed_form_on_functions() {
    for (name, j) in structures() {
        let mut r = sampling::rng(31);
        for _ in 0..20 {
            let g = sampling::poly(&mut r, j.chart(), 3, 4);
            let generic = j.d_star_w(&ExtVec::scalar(g.clone())).unwrap();
            assert_eq!(j.d_star_w_fn(&g), generic, "{name}: g = {g}");
        }
    }
}

#[test]
fn bracket_is_bilinear_and_skew() {
    for (name, j) in structures() {
        let mut r = sampling::rng(37);
        for _ in 0..15 {
            let f = sampling::poly(&mut r, j.chart(), 2, 3);
            let g = sampling::poly(&mut r, j.chart(), 2, 3);
            let h = sampling::poly(&mut r, j.chart(), 2, 3);
            let br = |a: &Poly, b: &Poly| j.bracket(a, b, BracketMode::Direct).unwrap();
            assert!((&br(&f, &g) + &br(&g, &f)).is_zero(), "{name}");
            assert_eq!(br(&f, &(&g + &h)), &br(&f, &g) + &br(&f, &h), "{name}");
            let jac = &(&br(&f, &br(&g, &h)) + &br(&g, &br(&h, &f))) + &br(&h, &br(&f, &g));
            assert!(jac.is_zero(), "{name}: Jacobiator {jac}");
        }
    }
}
