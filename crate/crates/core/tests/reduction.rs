//! Quotients, the correspondence between reducible Dirac structures and
//! quotient Jacobi structures, and reduction to submanifolds.

mod common;

use std::sync::Arc;

use common::{contact3, contact5, fixture, mv, poisson2};
use jacobi_dirac::dirac::{self, CharPair, SubbundleSpec};
use jacobi_dirac::extbundle::jacobi_check;
use jacobi_dirac::reduce::{self, SubmanifoldCase, SubmanifoldSpec};
use jacobi_dirac::{BracketMode, Chart, Error, ExtVec, JacobiStructure, MultiVec, Poly};

fn js(lambda: MultiVec, e: MultiVec) -> JacobiStructure {
    JacobiStructure::new(lambda, e).unwrap()
}

fn chart(names: &[&str]) -> Arc<Chart> {
    Chart::new(names).unwrap()
}

struct Fixture {
    name: &'static str,
    j: JacobiStructure,
    d: SubbundleSpec,
    jq: JacobiStructure,
}

fn roundtrip_fixtures() -> Vec<Fixture> {
    let j3 = contact3();
    let c3 = j3.chart().clone();
    let j5 = contact5();
    let c5 = j5.chart().clone();
    let tp = chart(&["t", "p"]);
    let qp = chart(&["q", "p"]);
    let tpp = chart(&["t", "p1", "p2"]);
    let p2 = poisson2();
    let cxy = p2.chart().clone();
    vec![
        Fixture {
            name: "contact3 / ∂q",
            j: j3.clone(),
            d: SubbundleSpec::aligned(&c3, &[1]).unwrap(),
            jq: fixture("contact.jd").quotient.unwrap(),
        },
        Fixture {
            name: "contact3 / ∂q, scaled",
            j: j3.clone(),
            d: SubbundleSpec::aligned(&c3, &[1]).unwrap(),
            jq: fixture("scaled.jd").quotient.unwrap(),
        },
        Fixture {
            name: "contact3 / ∂t",
            j: j3.clone(),
            d: SubbundleSpec::aligned(&c3, &[0]).unwrap(),
            jq: js(mv(&qp, &[0, 1], "1"), MultiVec::zero(&qp, 1)),
        },
        Fixture {
            name: "contact3, D = 0, twice J",
            j: j3.clone(),
            d: SubbundleSpec::aligned(&c3, &[]).unwrap(),
            jq: js(
                j3.lambda().scale(&Poly::int(&c3, 2)),
                j3.e().scale(&Poly::int(&c3, 2)),
            ),
        },
        Fixture {
            name: "contact5 / (∂q1, ∂q2)",
            j: j5,
            d: SubbundleSpec::aligned(&c5, &[1, 3]).unwrap(),
            jq: js(
                mv(&tpp, &[0, 1], "p1").add(&mv(&tpp, &[0, 2], "p2")),
                mv(&tpp, &[0], "1"),
            ),
        },
        Fixture {
            name: "poisson2, D = 0",
            j: p2,
            d: SubbundleSpec::aligned(&cxy, &[]).unwrap(),
            jq: js(mv(&cxy, &[0, 1], "x^2 + 1"), MultiVec::zero(&cxy, 1)),
        },
        Fixture {
            name: "contact3 / ∂q, other quotient",
            j: j3,
            d: SubbundleSpec::aligned(&c3, &[1]).unwrap(),
            jq: js(mv(&tp, &[0, 1], "1"), MultiVec::zero(&tp, 1)),
        },
    ]
}

#[test]
fn quotient_of_built_l_is_the_given_structure() {
    let fx = roundtrip_fixtures();
    assert!(fx.len() >= 5);
    for f in &fx {
        assert!(
            f.jq.check().passed(),
            "{}: quotient structure is not Jacobi",
            f.name
        );
        let pair = reduce::build_l_from_quotient(&f.j, &f.d, &f.jq).unwrap();
        let crit = dirac::dirac_criteria(&f.j, &pair).unwrap();
        assert!(crit.passed(), "{}: {crit}", f.name);
        let r = reduce::quotient_reduce(&f.j, &pair).unwrap();
        assert!(r.passed(), "{}: {}", f.name, r.report);
        assert_eq!(r.reduced.as_ref(), Some(&f.jq), "{}", f.name);
    }
}

#[test]
fn built_l_from_quotient_of_pair_is_the_same_subbundle() {
    for f in &roundtrip_fixtures() {
        let pair = reduce::build_l_from_quotient(&f.j, &f.d, &f.jq).unwrap();
        let c = f.j.chart();
        // shift Ω by a term in D∧A, which does not change L
        let mut shifted = pair.omega.clone();
        for g in f.d.generators() {
            let other = ExtVec::unit(c).add(&MultiVec::coord(c, 0).unwrap().to_ext());
            shifted = shifted.add(&g.wedge(&other).scale(&common::poly(c, "t + 1")));
        }
        let start = CharPair::new(f.d.clone(), shifted).unwrap();
        assert!(start.equivalent(&pair).unwrap(), "{}", f.name);
        let jq = reduce::quotient_reduce(&f.j, &start).unwrap();
        assert!(jq.passed(), "{}: {}", f.name, jq.report);
        let back = reduce::build_l_from_quotient(&f.j, &f.d, jq.reduced.as_ref().unwrap()).unwrap();
        assert!(
            back.equivalent(&start).unwrap(),
            "{}: Ω = {}, Ω' = {}",
            f.name,
            start.omega,
            back.omega
        );
    }
}

#[test]
fn equivalence_of_pairs_detects_a_different_omega() {
    let j = contact3();
    let c = j.chart();
    let d = SubbundleSpec::aligned(c, &[1]).unwrap();
    let a = CharPair::null(d.clone());
    let b = CharPair::new(
        d,
        MultiVec::monomial(c, &[0, 2], common::poly(c, "1"))
            .unwrap()
            .to_ext(),
    )
    .unwrap();
    assert!(!a.equivalent(&b).unwrap());
    let other_d = CharPair::null(SubbundleSpec::aligned(c, &[0]).unwrap());
    assert!(!a.equivalent(&other_d).unwrap());
}

#[test]
fn projection_is_jacobi_map_iff_l_is_null() {
    for f in &roundtrip_fixtures() {
        let jm = reduce::jacobi_map_check(&f.j, &f.d, &f.jq)
            .unwrap()
            .passed();
        let pair = reduce::build_l_from_quotient(&f.j, &f.d, &f.jq).unwrap();
        let null = dirac::mod_d_reduce(&f.d, &pair.omega).unwrap().holds;
        assert_eq!(jm, null, "{}", f.name);
        if jm {
            // the null structure induces the given quotient
            let r = reduce::quotient_reduce(&f.j, &CharPair::null(f.d.clone())).unwrap();
            assert_eq!(r.reduced.as_ref(), Some(&f.jq), "{}", f.name);
        }
    }
    let names: Vec<(&str, bool)> = roundtrip_fixtures()
        .iter()
        .map(|f| {
            (
                f.name,
                reduce::jacobi_map_check(&f.j, &f.d, &f.jq)
                    .unwrap()
                    .passed(),
            )
        })
        .collect();
    assert!(names.contains(&("contact3 / ∂q", true)));
    assert!(names.contains(&("contact3 / ∂q, scaled", false)));
}

#[test]
fn quotient_bracket_is_restricted_bracket() {
    let j = contact3();
    let c = j.chart();
    let r = reduce::quotient_reduce(
        &j,
        &CharPair::null(SubbundleSpec::aligned(c, &[1]).unwrap()),
    )
    .unwrap();
    let red = r.reduced.unwrap();
    let q = red.chart();
    let lift = |s: &str| common::poly(c, s);
    let down = |s: &str| common::poly(q, s);
    for (f, g) in [
        ("1", "t"),
        ("1", "p"),
        ("t", "p"),
        ("t", "t*p"),
        ("p", "p^2"),
    ] {
        let upstairs = j.bracket(&lift(f), &lift(g), BracketMode::Direct).unwrap();
        let reduced = red
            .bracket(&down(f), &down(g), BracketMode::Direct)
            .unwrap();
        assert_eq!(upstairs.to_string(), reduced.to_string(), "{{{f}, {g}}}");
    }
}

#[test]
fn difference_structure_is_jacobi_for_compatible_pairs() {
    // D = 0 and J' = 2J: Ω = J' − J = J
    let j = contact3();
    let c = j.chart();
    let two = Poly::int(c, 2);
    let j2 = js(j.lambda().scale(&two), j.e().scale(&two));
    let pair =
        reduce::build_l_from_quotient(&j, &SubbundleSpec::aligned(c, &[]).unwrap(), &j2).unwrap();
    assert_eq!(pair.omega, j.as_ext());
    assert!(jacobi_check(&pair.omega.pure(), &pair.omega.epart())
        .unwrap()
        .passed());
}

#[test]
fn difference_structure_need_not_be_jacobi() {
    // Λ = z∂y∧∂z and Λ' = y∂x∧∂y are Poisson on ℝ³; Λ' − Λ is not.
    let c = chart(&["x", "y", "z"]);
    let j = js(mv(&c, &[1, 2], "z"), MultiVec::zero(&c, 1));
    let jp = js(mv(&c, &[0, 1], "y"), MultiVec::zero(&c, 1));
    assert!(j.check().passed() && jp.check().passed());
    let pair =
        reduce::build_l_from_quotient(&j, &SubbundleSpec::aligned(&c, &[]).unwrap(), &jp).unwrap();
    assert_eq!(pair.omega.pure(), jp.lambda().sub(j.lambda()));
    assert!(dirac::dirac_criteria(&j, &pair).unwrap().passed());
    let diff = jacobi_check(&pair.omega.pure(), &pair.omega.epart()).unwrap();
    assert!(!diff.passed());
    assert_eq!(diff.lambda_residual.to_string(), "2*z*∂x∧∂y∧∂z");
}

#[test]
fn contact5_reduction_theorem() {
    let f = fixture("contact5.jd");
    let j = f.jacobi.as_ref().unwrap();
    let c = &f.chart;
    let n = f.submanifold.clone().unwrap();
    let r = reduce::jacobi_reduction(j, &n, &SubbundleSpec::aligned(c, &[]).unwrap()).unwrap();
    assert!(!r.passed());
    let bad = r.report.failures().next().unwrap();
    assert_eq!(bad.name, "Λ^#(dq2)|_N ∈ TN + π(D)");
    assert_eq!(bad.residual, "∂p2");

    let d2 = f.distribution("D2").unwrap().spec(c).unwrap();
    let r = reduce::jacobi_reduction(j, &n, &d2).unwrap();
    assert!(r.passed(), "{}", r.report);
    assert_eq!(r.reduced.unwrap(), {
        let tqp = chart(&["t", "q1", "p1"]);
        js(
            mv(&tqp, &[1, 2], "1").add(&mv(&tqp, &[0, 2], "p1")),
            mv(&tqp, &[0], "1"),
        )
    });
}

#[test]
fn whole_space_reduction_matches_quotient() {
    let j = contact3();
    let d = SubbundleSpec::aligned(j.chart(), &[1]).unwrap();
    let a = reduce::jacobi_reduction(&j, &SubmanifoldSpec::whole(), &d).unwrap();
    let b = reduce::quotient_reduce(&j, &CharPair::null(d)).unwrap();
    assert!(a.passed() && b.passed());
    assert_eq!(a.reduced, b.reduced);
}

#[test]
fn symmetry_reduction_goldens() {
    let j = contact3();
    let c = j.chart();
    let r = reduce::symmetry_reduce(
        &j,
        &[("X".into(), mv(c, &[1], "1"))],
        &SubmanifoldSpec::whole(),
    )
    .unwrap();
    assert!(r.passed(), "{}", r.report);
    let tp = chart(&["t", "p"]);
    assert_eq!(
        r.reduced.unwrap(),
        js(mv(&tp, &[0, 1], "p"), mv(&tp, &[0], "1"))
    );

    match reduce::symmetry_reduce(
        &j,
        &[("Y".into(), mv(c, &[2], "1"))],
        &SubmanifoldSpec::whole(),
    ) {
        Err(Error::Refused(m)) => assert_eq!(m, "Y is not a symmetry: L_YΛ = ∂t∧∂p, L_YE = 0"),
        other => panic!("expected refusal, got {other:?}"),
    }

    let j5 = contact5();
    let f5 = fixture("contact5.jd");
    let fields: Vec<(String, MultiVec)> = f5
        .distribution("T")
        .unwrap()
        .generators
        .iter()
        .map(|(n, g)| (n.clone(), g.pure()))
        .collect();
    let r = reduce::symmetry_reduce(&j5, &fields, &SubmanifoldSpec::whole()).unwrap();
    assert!(r.passed(), "{}", r.report);
    assert_eq!(r.reduced_chart().unwrap().names(), ["t", "p1", "p2"]);
}

#[test]
fn rotation_is_a_symmetry_but_not_aligned() {
    let f = fixture("rotation.jd");
    let j = f.jacobi.as_ref().unwrap();
    let fields: Vec<(String, MultiVec)> = f
        .distribution("R")
        .unwrap()
        .generators
        .iter()
        .map(|(n, g)| (n.clone(), g.pure()))
        .collect();
    let r = reduce::symmetry_reduce(j, &fields, &SubmanifoldSpec::whole()).unwrap();
    assert!(!r.passed());
    assert!(r.report.get("L_RΛ").unwrap().passed);
    assert!(!r.report.get("aligned distribution").unwrap().passed);
}

#[test]
fn submanifold_condition_goldens() {
    let p2 = fixture("poisson2.jd");
    let j = p2.jacobi.as_ref().unwrap();
    let n = p2.submanifold.clone().unwrap();
    // N = {y = 0} in the symplectic plane: Λ^#(dx) = ∂y leaves N and Λ^#(dy) = −∂x is tangent
    let first = reduce::submanifold_conditions(j, &n, SubmanifoldCase::FirstKind).unwrap();
    assert!(!first.passed());
    assert_eq!(first.get("Λ^#(dx)|_N ∈ TN").unwrap().residual, "∂y");
    let second = reduce::submanifold_conditions(j, &n, SubmanifoldCase::Coisotropic).unwrap();
    assert!(!second.get("TN ∩ Λ^#(TN^⊥) = {0}").unwrap().passed);

    let j3 = contact3();
    let c3 = j3.chart();
    let whole =
        reduce::submanifold_conditions(&j3, &SubmanifoldSpec::whole(), SubmanifoldCase::FirstKind)
            .unwrap();
    assert!(whole.passed(), "{whole}");
    // N = {p = 0}: Λ^#(dp)|_N = −∂q is tangent to N
    let np = SubmanifoldSpec::new(c3, &[2]).unwrap();
    let second = reduce::submanifold_conditions(&j3, &np, SubmanifoldCase::Coisotropic).unwrap();
    assert!(!second.get("TN ∩ Λ^#(TN^⊥) = {0}").unwrap().passed);
    assert!(second.get("E|_N ∈ Γ(TN)").unwrap().passed);
    let first = reduce::submanifold_conditions(&j3, &np, SubmanifoldCase::FirstKind).unwrap();
    assert_eq!(first.get("Λ^#(dq)|_N ∈ TN").unwrap().residual, "∂p");

    let f5 = fixture("contact5.jd");
    let j5 = f5.jacobi.as_ref().unwrap();
    let n5 = f5.submanifold.clone().unwrap();
    // {q2 = p2 = 0} is a contact submanifold: both conditions fail
    assert!(
        !reduce::submanifold_conditions(j5, &n5, SubmanifoldCase::FirstKind)
            .unwrap()
            .passed()
    );
    let second = reduce::submanifold_conditions(j5, &n5, SubmanifoldCase::Coisotropic).unwrap();
    assert!(second.get("TN ∩ Λ^#(TN^⊥) = {0}").unwrap().passed);
    assert!(!second.passed());
}
