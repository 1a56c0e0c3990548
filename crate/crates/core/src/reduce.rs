//! Reduction: quotient Jacobi structures induced by reducible Dirac
//! subbundles, the inverse construction, reduction to a submanifold, and
//! reduction by an infinitesimal symmetry.
//!
//! Foliations are coordinate foliations (an aligned `D`) and submanifolds are
//! coordinate subspaces `N = {x_i = 0 : i ∈ constraints}`. Reduced structures
//! are read off from brackets of coordinate functions:
//! `E(x_a) = {1, x_a}` and `Λ(dx_a, dx_b) = {x_a, x_b} − x_a{1, x_b} + x_b{1, x_a}`.

use std::sync::Arc;

use crate::dirac::{
    self, dirac_criteria, list_points, render_point, CharPair, Mode, Points, SubbundleSpec,
};
use crate::error::{Error, Result};
use crate::extbundle::JacobiStructure;
use crate::exterior::{ExtVec, Form, MultiVec};
use crate::linalg::{self, Vector};
use crate::poly::{Chart, Poly, Rational};
use crate::report::{Check, CheckReport};

use num_traits::Zero;

/// `N = {x_i = 0 : i ∈ constraints}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SubmanifoldSpec {
    constraints: Vec<usize>,
}

impl SubmanifoldSpec {
    /// `N = M`.
    pub fn whole() -> SubmanifoldSpec {
        SubmanifoldSpec::default()
    }

    pub fn new(chart: &Chart, constraints: &[usize]) -> Result<SubmanifoldSpec> {
        let mut c = constraints.to_vec();
        for &i in &c {
            chart.check_index(i)?;
        }
        c.sort_unstable();
        if c.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::input("submanifold constraint listed twice"));
        }
        if c.len() == chart.dim() {
            return Err(Error::input("submanifold constraints leave no variables"));
        }
        Ok(SubmanifoldSpec { constraints: c })
    }

    pub fn constraints(&self) -> &[usize] {
        &self.constraints
    }

    pub fn is_whole(&self) -> bool {
        self.constraints.is_empty()
    }

    fn check(&self, chart: &Chart) -> Result<()> {
        SubmanifoldSpec::new(chart, &self.constraints).map(|_| ())
    }

    fn is_tangent(&self, i: usize) -> bool {
        !self.constraints.contains(&i)
    }
}

/// Outcome of a reduction: every check performed and, when the construction
/// got that far, the reduced structure.
#[derive(Clone, Debug)]
pub struct ReductionReport {
    pub report: CheckReport,
    /// Present once the reduced structure has been built. It is only to be
    /// trusted when [`ReductionReport::passed`] holds.
    pub reduced: Option<JacobiStructure>,
}

impl ReductionReport {
    fn new(title: &str) -> ReductionReport {
        ReductionReport {
            report: CheckReport::new(title),
            reduced: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.reduced.is_some() && self.report.passed()
    }

    pub fn reduced_chart(&self) -> Option<&Arc<Chart>> {
        self.reduced.as_ref().map(|j| j.chart())
    }

    fn absorb(&mut self, prefix: &str, r: CheckReport) {
        for mut c in r.checks {
            if !prefix.is_empty() {
                c.name = format!("{prefix}: {}", c.name);
            }
            self.report.push(c);
        }
        if self.report.sampling.is_none() {
            self.report.sampling = r.sampling;
        }
    }
}

fn var(chart: &Arc<Chart>, i: usize) -> Poly {
    Poly::var(chart, i).expect("index in range")
}

fn require_aligned_null_type(d: &SubbundleSpec) -> Result<&[usize]> {
    let idx = d
        .aligned_indices()
        .ok_or_else(|| Error::Refused("reduction requires an aligned distribution".into()))?;
    if !d.all_epart_zero() {
        return Err(Error::Refused(
            "distribution generators must have zero ℝ-part".into(),
        ));
    }
    Ok(idx)
}

/// Chart obtained by deleting `drop`, and the source→target index map.
fn sub_chart(chart: &Arc<Chart>, drop: &[usize]) -> Result<(Arc<Chart>, Vec<Option<usize>>)> {
    let target = chart.without(drop)?;
    let mut map = Vec::with_capacity(chart.dim());
    let mut next = 0;
    for i in 0..chart.dim() {
        if drop.contains(&i) {
            map.push(None);
        } else {
            map.push(Some(next));
            next += 1;
        }
    }
    Ok((target, map))
}

type Bracket<'a> = dyn Fn(&Poly, &Poly) -> Result<Poly> + 'a;

/// Build the structure on the quotient of `N` by the `drop` directions from a
/// bracket of functions on `M`. Brackets are restricted to `N` and must not
/// depend on `drop` coordinates.
fn reduce_by_brackets(
    chart: &Arc<Chart>,
    drop: &[usize],
    constraints: &[usize],
    bracket: &Bracket<'_>,
    out: &mut ReductionReport,
) -> Result<()> {
    let mut gone: Vec<usize> = drop.iter().chain(constraints).copied().collect();
    gone.sort_unstable();
    gone.dedup();
    let (target, map) = sub_chart(chart, &gone)?;
    let quot: Vec<usize> = (0..chart.dim()).filter(|i| !gone.contains(i)).collect();
    let one = Poly::one(chart);
    let restrict = |p: Poly| p.substitute_zero(constraints).expect("indices checked");

    let mut e_vals = Vec::new();
    for &a in &quot {
        e_vals.push(restrict(bracket(&one, &var(chart, a))?));
    }
    let mut lam_vals = Vec::new();
    for (ia, &a) in quot.iter().enumerate() {
        for (ib, &b) in quot.iter().enumerate().skip(ia + 1) {
            let (xa, xb) = (var(chart, a), var(chart, b));
            let v = restrict(bracket(&xa, &xb)?) - &xa * &e_vals[ib] + &xb * &e_vals[ia];
            lam_vals.push(((ia, ib), v));
        }
    }

    let mut witness = None;
    let named = e_vals
        .iter()
        .enumerate()
        .map(|(ia, v)| (format!("E_red({})", chart.name(quot[ia])), v))
        .chain(lam_vals.iter().map(|((ia, ib), v)| {
            (
                format!(
                    "Λ_red(d{}, d{})",
                    chart.name(quot[*ia]),
                    chart.name(quot[*ib])
                ),
                v,
            )
        }));
    for (name, v) in named {
        if let Some(&k) = drop.iter().find(|&&k| v.depends_on(k)) {
            witness = Some(format!("{name} = {v} depends on {}", chart.name(k)));
            break;
        }
    }
    out.report.push(Check::new(
        "projectability of reduced brackets",
        witness.is_none(),
        witness.clone().unwrap_or_else(|| "0".into()),
    ));
    if witness.is_some() {
        return Ok(());
    }

    let lambda = MultiVec::from_components(
        &target,
        2,
        lam_vals
            .into_iter()
            .map(|((ia, ib), v)| Ok((vec![ia, ib], v.rechart(&target, &map)?)))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let e = MultiVec::from_components(
        &target,
        1,
        e_vals
            .into_iter()
            .enumerate()
            .map(|(ia, v)| Ok((vec![ia], v.rechart(&target, &map)?)))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let reduced = JacobiStructure::new(lambda, e)?;
    out.absorb("reduced", reduced.check().report());

    // {f,g}_red = {F,G}|_N for lifts of a spanning set of quotient functions
    let lift_map: Vec<usize> = quot.clone();
    let lift = |f: &Poly| -> Result<Poly> {
        let m: Vec<Option<usize>> = lift_map.iter().map(|&i| Some(i)).collect();
        f.rechart(chart, &m)
    };
    let mut tests = vec![Poly::one(&target)];
    for a in 0..target.dim() {
        tests.push(var(&target, a));
        for b in a..target.dim() {
            tests.push(&var(&target, a) * &var(&target, b));
        }
    }
    let mut bad = None;
    'outer: for (i, f) in tests.iter().enumerate() {
        for g in &tests[i + 1..] {
            let down = reduced.bracket_direct(f, g);
            let up = restrict(bracket(&lift(f)?, &lift(g)?)?);
            let up = match up.rechart(&target, &map) {
                Ok(u) => u,
                Err(_) => {
                    bad = Some(format!("{{{f}, {g}}} upstairs = {up} is not projectable"));
                    break 'outer;
                }
            };
            if up != down {
                bad = Some(format!("{{{f}, {g}}}: {}", down - up));
                break 'outer;
            }
        }
    }
    out.report.push(Check::new(
        "{f,g}_red = {F,G}|_N",
        bad.is_none(),
        bad.unwrap_or_else(|| "0".into()),
    ));
    out.reduced = Some(reduced);
    Ok(())
}

/// The Jacobi structure on `M/F` induced by a reducible Dirac subbundle
/// `L = D ⊕ graph(Ω^#|_{D^⊥})` whose `D` is spanned by coordinate fields.
pub fn quotient_reduce(j: &JacobiStructure, pair: &CharPair) -> Result<ReductionReport> {
    j.verify()?;
    let idx = require_aligned_null_type(&pair.d)?.to_vec();
    let mut out = ReductionReport::new("quotient reduction");
    let criteria = dirac_criteria(j, pair)?;
    let ok = criteria.passed();
    out.absorb("Dirac", criteria);
    if !ok {
        return Ok(out);
    }
    let bracket = |f: &Poly, g: &Poly| dirac::l_bracket(j, pair, f, g);
    reduce_by_brackets(j.chart(), &idx, &[], &bracket, &mut out)?;
    Ok(out)
}

fn check_quotient_chart(
    j: &JacobiStructure,
    idx: &[usize],
    jq: &JacobiStructure,
) -> Result<Vec<Option<usize>>> {
    let (target, map) = sub_chart(j.chart(), idx)?;
    if target.names() != jq.chart().names() {
        return Err(Error::input(format!(
            "quotient structure must live on ({}), found ({})",
            target.names().join(", "),
            jq.chart().names().join(", ")
        )));
    }
    Ok(map)
}

/// Lift a function on the quotient chart to `M`.
fn lift_from(
    jq: &JacobiStructure,
    chart: &Arc<Chart>,
    map: &[Option<usize>],
) -> impl Fn(&Poly) -> Poly {
    let mut inverse = vec![None; jq.chart().dim()];
    for (i, m) in map.iter().enumerate() {
        if let Some(k) = m {
            inverse[*k] = Some(i);
        }
    }
    let chart = chart.clone();
    move |f: &Poly| {
        f.rechart(&chart, &inverse)
            .expect("every quotient variable has a lift")
    }
}

/// The Dirac subbundle `L = D ⊕ graph(Ω^#|_{D^⊥})` inducing a given quotient
/// structure. `Ω` is the difference structure
/// `{f,g}₁ = p*{f,g}_q − {p*f, p*g}` read off on quotient coordinates and
/// extended by zero along `D`.
pub fn build_l_from_quotient(
    j: &JacobiStructure,
    d: &SubbundleSpec,
    jq: &JacobiStructure,
) -> Result<CharPair> {
    j.verify()?;
    jq.verify()?;
    let idx = require_aligned_null_type(d)?;
    let chart = j.chart();
    if !crate::poly::same_chart(d.chart(), chart) {
        return Err(Error::ChartMismatch);
    }
    let map = check_quotient_chart(j, idx, jq)?;
    let lift = lift_from(jq, chart, &map);
    let quot: Vec<usize> = (0..chart.dim()).filter(|i| !idx.contains(i)).collect();
    let one_q = Poly::one(jq.chart());
    let diff = |a: Option<usize>, b: usize| -> Poly {
        let f = a.map_or(one_q.clone(), |a| var(jq.chart(), a));
        let g = var(jq.chart(), b);
        lift(&jq.bracket_direct(&f, &g)) - j.bracket_direct(&lift(&f), &lift(&g))
    };
    let e1: Vec<Poly> = (0..quot.len()).map(|b| diff(None, b)).collect();
    let mut lam = Vec::new();
    for a in 0..quot.len() {
        for b in a + 1..quot.len() {
            let (xa, xb) = (var(chart, quot[a]), var(chart, quot[b]));
            let v = diff(Some(a), b) - &xa * &e1[b] + &xb * &e1[a];
            lam.push((vec![quot[a], quot[b]], v));
        }
    }
    let lambda1 = MultiVec::from_components(chart, 2, lam)?;
    let e1 = MultiVec::from_components(chart, 1, quot.iter().zip(e1).map(|(&i, v)| (vec![i], v)))?;
    CharPair::new(d.clone(), ExtVec::from_parts(&lambda1, &e1))
}

/// Whether the projection `M → M/F` is a Jacobi map onto `J_q`:
/// `{p*f, p*g} = p*{f,g}_q` on quotient coordinate functions and `1`.
pub fn jacobi_map_check(
    j: &JacobiStructure,
    d: &SubbundleSpec,
    jq: &JacobiStructure,
) -> Result<CheckReport> {
    j.verify()?;
    jq.verify()?;
    let idx = require_aligned_null_type(d)?;
    let map = check_quotient_chart(j, idx, jq)?;
    let lift = lift_from(jq, j.chart(), &map);
    let mut fs = vec![Poly::one(jq.chart())];
    fs.extend((0..jq.chart().dim()).map(|a| var(jq.chart(), a)));
    let mut r = CheckReport::new("projection is a Jacobi map");
    for (i, f) in fs.iter().enumerate() {
        for g in &fs[i + 1..] {
            let up = j.bracket_direct(&lift(f), &lift(g));
            let down = lift(&jq.bracket_direct(f, g));
            r.push(Check::zero(
                format!("{{p*({f}), p*({g})}} − p*{{{f}, {g}}}"),
                &(up - down),
            ));
        }
    }
    Ok(r)
}

/// Reduction of `J` to `N/F₀`, where `F₀` is the foliation of `N` by the
/// directions of `D` tangent to `N`, using the null Dirac structure `D ⊕ D^⊥`.
pub fn jacobi_reduction(
    j: &JacobiStructure,
    n: &SubmanifoldSpec,
    d: &SubbundleSpec,
) -> Result<ReductionReport> {
    j.verify()?;
    let chart = j.chart();
    n.check(chart)?;
    let idx = require_aligned_null_type(d)?.to_vec();
    let mut out = ReductionReport::new("Jacobi reduction");
    let criteria = dirac_criteria(j, &CharPair::null(d.clone()))?;
    let ok = criteria.passed();
    out.absorb("Dirac", criteria);
    if !ok {
        return Ok(out);
    }

    // Λ^#(π(D)^⊥)|_N ⊆ TN + π(D) and E|_N ∈ TN + π(D)
    let allowed: Vec<usize> = (0..chart.dim())
        .filter(|&i| n.is_tangent(i) || idx.contains(&i))
        .collect();
    let transverse = |x: &MultiVec| -> Result<MultiVec> {
        Ok(x.substitute_zero(n.constraints())?.drop_coords(&allowed))
    };
    let mut eq4 = true;
    for jx in (0..chart.dim()).filter(|i| !idx.contains(i)) {
        let res = transverse(&j.lambda_sharp(&Form::coord(chart, jx)?))?;
        eq4 &= res.is_zero();
        out.report.push(Check::zero(
            format!("Λ^#(d{})|_N ∈ TN + π(D)", chart.name(jx)),
            &res,
        ));
    }
    let res = transverse(j.e())?;
    eq4 &= res.is_zero();
    out.report.push(Check::zero("E|_N ∈ TN + π(D)", &res));
    if !eq4 {
        return Ok(out);
    }

    let d0: Vec<usize> = idx.iter().copied().filter(|&i| n.is_tangent(i)).collect();
    let bracket = |f: &Poly, g: &Poly| Ok(j.bracket_direct(f, g));
    reduce_by_brackets(chart, &d0, n.constraints(), &bracket, &mut out)?;
    Ok(out)
}

/// Which set of conditions [`submanifold_conditions`] checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubmanifoldCase {
    /// `Λ^#(T*M) ⊆ TN` on `N` and `E|_N ∈ Γ(TN)`.
    FirstKind,
    /// `TN ∩ Λ^#(TN^⊥) = {0}`, `E|_N ∈ Γ(TN)` and the ideal condition.
    Coisotropic,
}

fn sample_points_on(n: &SubmanifoldSpec, dim: usize, points: Points) -> Vec<Vec<Rational>> {
    points
        .generate(dim)
        .into_iter()
        .map(|mut p| {
            for &c in n.constraints() {
                p[c] = Rational::zero();
            }
            p
        })
        .collect()
}

fn vector_value(x: &MultiVec, p: &[Rational]) -> Result<Vector> {
    let mut v = vec![Rational::zero(); x.chart().dim()];
    for (idx, c) in x.components() {
        v[idx[0]] = c.eval(p)?;
    }
    Ok(v)
}

/// The two sets of submanifold conditions under which reduction to `N` is
/// available, checked with the default sample points.
pub fn submanifold_conditions(
    j: &JacobiStructure,
    n: &SubmanifoldSpec,
    case: SubmanifoldCase,
) -> Result<CheckReport> {
    submanifold_conditions_at(j, n, case, Points::default())
}

pub fn submanifold_conditions_at(
    j: &JacobiStructure,
    n: &SubmanifoldSpec,
    case: SubmanifoldCase,
    points: Points,
) -> Result<CheckReport> {
    j.verify()?;
    let chart = j.chart();
    n.check(chart)?;
    let cons = n.constraints();
    let tangent: Vec<usize> = (0..chart.dim()).filter(|&i| n.is_tangent(i)).collect();
    let transverse =
        |x: &MultiVec| -> Result<MultiVec> { Ok(x.substitute_zero(cons)?.drop_coords(&tangent)) };
    let e_check = Check::zero("E|_N ∈ Γ(TN)", &transverse(j.e())?);
    match case {
        SubmanifoldCase::FirstKind => {
            let mut r = CheckReport::new("submanifold conditions (first kind)");
            for i in 0..chart.dim() {
                let res = transverse(&j.lambda_sharp(&Form::coord(chart, i)?))?;
                r.push(Check::zero(
                    format!("Λ^#(d{})|_N ∈ TN", chart.name(i)),
                    &res,
                ));
            }
            r.push(e_check);
            Ok(r)
        }
        SubmanifoldCase::Coisotropic => {
            let mut r = CheckReport::new("submanifold conditions (second kind)");
            let pts = sample_points_on(n, chart.dim(), points);
            let sharps: Vec<MultiVec> = cons
                .iter()
                .map(|&c| Ok(j.lambda_sharp(&Form::coord(chart, c)?)))
                .collect::<Result<_>>()?;
            let tn: Vec<Vector> = tangent
                .iter()
                .map(|&i| {
                    let mut v = vec![Rational::zero(); chart.dim()];
                    v[i] = Rational::from_integer(1.into());
                    v
                })
                .collect();
            let mut fails = Vec::new();
            for p in &pts {
                let s: Vec<Vector> = sharps
                    .iter()
                    .map(|x| vector_value(x, p))
                    .collect::<Result<_>>()?;
                let rs = linalg::rank(&s);
                let both: Vec<Vector> = s.into_iter().chain(tn.iter().cloned()).collect();
                if linalg::rank(&both) != rs + tn.len() {
                    fails.push(render_point(chart, p));
                }
            }
            r.push(
                Check::new(
                    "TN ∩ Λ^#(TN^⊥) = {0}",
                    fails.is_empty(),
                    if fails.is_empty() {
                        "0".to_string()
                    } else {
                        format!("nontrivial at {}", list_points(&fails))
                    },
                )
                .with_note(format!("sampled at {} points of N", pts.len())),
            );
            r.push(e_check);
            // every monomial of Λ touches a tangent direction
            let normal = j.lambda().drop_coords(&tangent);
            r.push(Check::zero("Λ ∈ ideal of Γ(TN) (monomials)", &normal));
            // Λ_x ∈ T_xN ∧ T_xM at points of N
            let mut fails = Vec::new();
            for p in &pts {
                let vals = j.lambda().drop_coords(&tangent).substitute_zero(cons)?;
                if vals
                    .components()
                    .iter()
                    .any(|(_, c)| !c.eval(p).map(|v| v.is_zero()).unwrap_or(false))
                {
                    fails.push(render_point(chart, p));
                }
            }
            r.push(
                Check::new(
                    "Λ_x ∈ T_xN ∧ T_xM on N",
                    fails.is_empty(),
                    if fails.is_empty() {
                        "0".to_string()
                    } else {
                        format!("fails at {}", list_points(&fails))
                    },
                )
                .with_note(format!("sampled at {} points of N", pts.len())),
            );
            Ok(r)
        }
    }
}

/// Reduction by the infinitesimal action spanned by `fields`. Each field must
/// preserve `Λ` and `E`; otherwise the reduction is refused with the offending
/// Lie derivative.
pub fn symmetry_reduce(
    j: &JacobiStructure,
    fields: &[(String, MultiVec)],
    n: &SubmanifoldSpec,
) -> Result<ReductionReport> {
    j.verify()?;
    let chart = j.chart();
    let mut invariance = CheckReport::new("invariance");
    for (name, x) in fields {
        x.check_chart(chart)?;
        if x.grade() != 1 {
            return Err(Error::input(format!("{name} is not a vector field")));
        }
        let ll = x.lie(j.lambda());
        let le = x.lie(j.e());
        if !ll.is_zero() || !le.is_zero() {
            return Err(Error::Refused(format!(
                "{name} is not a symmetry: L_{name}Λ = {ll}, L_{name}E = {le}"
            )));
        }
        invariance.push(Check::zero(format!("L_{name}Λ"), &ll));
        invariance.push(Check::zero(format!("L_{name}E"), &le));
    }
    let gens: Vec<(String, ExtVec)> = fields
        .iter()
        .map(|(n, x)| (n.clone(), x.to_ext()))
        .collect();
    let d = match SubbundleSpec::new(chart, gens.clone(), None, Mode::Aligned, Points::default()) {
        Ok(d) => d,
        Err(Error::Input(_)) => {
            let mut out = ReductionReport::new("symmetry reduction");
            out.absorb("", invariance);
            let d = SubbundleSpec::new(chart, gens, None, Mode::Pointwise, Points::default())?;
            let mut c = Check::new(
                "aligned distribution",
                false,
                format!("{} not spanned by coordinate fields", d.names().join(", ")),
            );
            c = c.with_note("reduction needs fundamental fields that are constant multiples of coordinate fields");
            out.report.push(c);
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    let mut out = jacobi_reduction(j, n, &d)?;
    let mut merged = ReductionReport::new("symmetry reduction");
    merged.absorb("", invariance);
    merged.absorb("", std::mem::replace(&mut out.report, CheckReport::new("")));
    merged.reduced = out.reduced;
    Ok(merged)
}
