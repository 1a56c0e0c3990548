//! Calculus on the extended bundles `TM×ℝ` and `T*M×ℝ`.
//!
//! A pair `(Λ, E)` is identified with the extended bivector `Λ + e∧E`, so that
//! `(Λ,E)^#` is the left contraction `i_(α,f)(Λ + e∧E)` and `i_(0,1)` picks
//! out the `e`-coefficient. The twisting cocycles of a Jacobi manifold are
//! `φ = (0,1)` on `TM×ℝ` and `W = (−E,0)` on `T*M×ℝ`.

use std::marker::PhantomData;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::exterior::{Alt, ExtCovector, ExtForm, ExtVec, ExtVector, Field, Form, Kind, MultiVec};
use crate::poly::{rat, Chart, Poly};
use crate::report::{Check, CheckReport};

/// Lie algebroid over the chart whose sections are `Field<S>` of grade 1 and
/// whose forms are `Field<S::Dual>`, given by anchors and brackets of the
/// basis sections.
#[derive(Clone)]
pub struct Algebroid<S: Kind> {
    chart: Arc<Chart>,
    anchors: Vec<MultiVec>,
    /// `brackets[i][j]` for `i < j`, as grade-1 section values.
    brackets: Vec<Vec<Alt>>,
    /// The exterior derivative is plain `δ` over coordinates.
    coordinate_d: bool,
    _kind: PhantomData<S>,
}

/// `(TM×ℝ, [ , ], π)`.
pub type TrivialAlgebroid = Algebroid<ExtVector>;
/// `(T*M×ℝ, [ , ]_(Λ,E), π∘(Λ,E)^#)`.
pub type DualAlgebroid = Algebroid<ExtCovector>;

impl<S: Kind> Algebroid<S> {
    fn generators(&self) -> usize {
        self.chart.dim() + 1
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    /// Anchor of a grade-1 section.
    pub fn anchor(&self, s: &Field<S>) -> MultiVec {
        assert_eq!(s.grade(), 1, "anchor of a non-section");
        let mut out = MultiVec::zero(&self.chart, 1);
        for (m, c) in &s.alt.terms {
            let b = m.trailing_zeros() as usize;
            out = out.add(&self.anchors[b].scale(c));
        }
        out
    }

    /// Anchor of basis section `b`.
    pub fn basis_anchor(&self, b: usize) -> &MultiVec {
        &self.anchors[b]
    }

    /// Bracket of basis sections `i`, `j`.
    fn basis_bracket(&self, i: usize, j: usize) -> Alt {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.brackets[i][j].clone(),
            std::cmp::Ordering::Greater => self.brackets[j][i].neg(),
            std::cmp::Ordering::Equal => Alt::zero(&self.chart, true, 1),
        }
    }

    /// Bracket of sections, expanded from the basis by the Leibniz rule.
    pub fn bracket(&self, a: &Field<S>, b: &Field<S>) -> Field<S> {
        let mut out = Alt::zero(&self.chart, true, 1);
        for (mi, f) in &a.alt.terms {
            let i = mi.trailing_zeros() as usize;
            for (mj, g) in &b.alt.terms {
                let j = mj.trailing_zeros() as usize;
                out = out.add(&self.basis_bracket(i, j).scale(&(f * g)));
                let ag = self.anchors[i].apply(g);
                out.add_to(*mj, &(f * &ag));
                let af = self.anchors[j].apply(f);
                out.sub_from(*mi, &(g * &af));
            }
        }
        Field::wrap(out)
    }

    /// Algebroid exterior derivative.
    pub fn d(&self, eta: &Field<S::Dual>) -> Field<S::Dual> {
        Field::wrap(self.d_alt(&eta.alt))
    }

    fn d_alt(&self, eta: &Alt) -> Alt {
        if self.coordinate_d {
            return eta.d();
        }
        let k = eta.grade;
        let n = self.generators();
        let mut out = Alt::zero(&self.chart, true, k + 1);
        if k + 1 > n {
            return out;
        }
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != k + 1 {
                continue;
            }
            let js = Alt::mask_bits(mask);
            let mut val = Poly::zero(&self.chart);
            for (i, &ji) in js.iter().enumerate() {
                let inner = eta.get(mask ^ (1 << ji));
                if inner.is_zero() {
                    continue;
                }
                let t = self.anchors[ji as usize].apply(&inner);
                if i % 2 == 0 {
                    val += &t;
                } else {
                    val -= &t;
                }
            }
            for i in 0..js.len() {
                for l in i + 1..js.len() {
                    let br = &self.brackets[js[i] as usize][js[l] as usize];
                    if br.is_zero() {
                        continue;
                    }
                    let rest = mask ^ (1 << js[i]) ^ (1 << js[l]);
                    let mut t = Poly::zero(&self.chart);
                    for (cm, cc) in &br.terms {
                        if rest & cm != 0 {
                            continue;
                        }
                        let below = (rest & (cm - 1)).count_ones();
                        let prod = cc * &eta.get(rest | cm);
                        if below.is_multiple_of(2) {
                            t += &prod;
                        } else {
                            t -= &prod;
                        }
                    }
                    if (i + l) % 2 == 0 {
                        val += &t;
                    } else {
                        val -= &t;
                    }
                }
            }
            out.insert(mask, val);
        }
        out
    }

    /// `d^φ η = dη + φ∧η`.
    pub fn twisted_d(&self, phi: &Field<S::Dual>, eta: &Field<S::Dual>) -> Field<S::Dual> {
        self.d(eta).add(&phi.wedge(eta))
    }

    /// Cartan formula `L_X = i_X d + d i_X` on algebroid forms.
    pub fn lie(&self, x: &Field<S>, eta: &Field<S::Dual>) -> Field<S::Dual> {
        let first = Field::wrap(self.d_alt(&eta.alt).contract(&x.alt));
        if eta.grade() == 0 {
            return first;
        }
        first.add(&Field::wrap(self.d_alt(&eta.alt.contract(&x.alt))))
    }

    /// `L^φ_X η = L_X η + ⟨φ,X⟩η`.
    pub fn twisted_lie(
        &self,
        phi: &Field<S::Dual>,
        x: &Field<S>,
        eta: &Field<S::Dual>,
    ) -> Field<S::Dual> {
        self.lie(x, eta).add(&eta.scale(&phi.pair(x)))
    }

    /// `dφ`, which vanishes exactly when `φ` is a 1-cocycle.
    pub fn cocycle_residual(&self, phi: &Field<S::Dual>) -> Field<S::Dual> {
        self.d(phi)
    }

    /// Checks `⟨φ,[X,Y]⟩ = a(X)⟨φ,Y⟩ − a(Y)⟨φ,X⟩` on every pair of basis sections.
    pub fn is_cocycle(&self, phi: &Field<S::Dual>) -> bool {
        phi.grade() == 1 && self.cocycle_residual(phi).is_zero()
    }

    /// Basis section `b` (generator 0 is the `ℝ` factor).
    pub fn basis_section(&self, b: usize) -> Field<S> {
        Field::wrap(Alt::basis(
            &self.chart,
            true,
            1 << b,
            Poly::one(&self.chart),
        ))
    }
}

impl TrivialAlgebroid {
    pub fn trivial(chart: &Arc<Chart>) -> TrivialAlgebroid {
        let n = chart.dim() + 1;
        let mut anchors = vec![MultiVec::zero(chart, 1)];
        for k in 0..chart.dim() {
            anchors.push(MultiVec::coord(chart, k).expect("index in range"));
        }
        Algebroid {
            chart: chart.clone(),
            anchors,
            brackets: vec![vec![Alt::zero(chart, true, 1); n]; n],
            coordinate_d: true,
            _kind: PhantomData,
        }
    }

    /// Same algebroid, but with the generic exterior-derivative formula.
    pub fn trivial_generic(chart: &Arc<Chart>) -> TrivialAlgebroid {
        let mut a = TrivialAlgebroid::trivial(chart);
        a.coordinate_d = false;
        a
    }
}

/// `[(X,f),(Y,g)] = ([X,Y], X·g − Y·f)`.
pub fn ext_bracket(a: &ExtVec, b: &ExtVec) -> Result<ExtVec> {
    a.check_chart(b.chart())?;
    if a.grade() != 1 || b.grade() != 1 {
        return Err(Error::input("ext_bracket takes grade-1 sections"));
    }
    Ok(a.schouten(b))
}

/// Schouten bracket of `TM×ℝ`; `e` is central and killed by the anchor.
pub fn ext_schouten(p: &ExtVec, q: &ExtVec) -> Result<ExtVec> {
    p.checked_schouten(q)
}

/// The twisted Schouten bracket
/// `[P,Q]^φ = [P,Q] + (p−1) P∧i_φQ + (−1)^p (q−1) i_φP∧Q`.
pub fn phi_schouten(phi: &ExtForm, p: &ExtVec, q: &ExtVec) -> Result<ExtVec> {
    p.check_chart(q.chart())?;
    p.check_chart(phi.chart())?;
    require_trivial_cocycle(phi)?;
    Ok(phi_schouten_unchecked(phi, p, q))
}

pub(crate) fn phi_schouten_unchecked(phi: &ExtForm, p: &ExtVec, q: &ExtVec) -> ExtVec {
    let (pg, qg) = (p.grade() as i64, q.grade() as i64);
    let mut out = p.schouten(q);
    if qg >= 1 && pg != 1 {
        let t = p.wedge(&q.contract(phi)).scale_rat(&rat(pg - 1, 1));
        out = out.add(&t);
    }
    if pg >= 1 && qg != 1 {
        let sign = if pg % 2 == 0 { 1 } else { -1 };
        let t = p.contract(phi).wedge(q).scale_rat(&rat(sign * (qg - 1), 1));
        out = out.add(&t);
    }
    out
}

fn require_trivial_cocycle(phi: &ExtForm) -> Result<()> {
    let alg = TrivialAlgebroid::trivial(phi.chart());
    if alg.is_cocycle(phi) {
        Ok(())
    } else {
        Err(Error::NotCocycle(format!(
            "d{phi} = {}",
            alg.cocycle_residual(phi)
        )))
    }
}

/// `d^φ η = dη + φ∧η` on `T*M×ℝ`-forms.
pub fn phi_differential(phi: &ExtForm, eta: &ExtForm) -> Result<ExtForm> {
    eta.check_chart(phi.chart())?;
    require_trivial_cocycle(phi)?;
    Ok(TrivialAlgebroid::trivial(phi.chart()).twisted_d(phi, eta))
}

/// `L^φ_X η = L_X η + ⟨φ,X⟩η`.
pub fn phi_lie(phi: &ExtForm, x: &ExtVec, eta: &ExtForm) -> Result<ExtForm> {
    eta.check_chart(phi.chart())?;
    x.check_chart(phi.chart())?;
    if x.grade() != 1 {
        return Err(Error::input("Lie derivative along a non-section"));
    }
    require_trivial_cocycle(phi)?;
    Ok(TrivialAlgebroid::trivial(phi.chart()).twisted_lie(phi, x, eta))
}

/// `d^(0,1) f = (δf, f)`.
pub fn d_phi_fn(f: &Poly) -> ExtForm {
    ExtForm::pair_of(&Form::differential(f), f)
}

/// The cocycle `φ = (0,1)`.
pub fn phi(chart: &Arc<Chart>) -> ExtForm {
    ExtForm::unit(chart)
}

/// Residuals of the defining identities of a Jacobi structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiCheck {
    /// `[Λ,Λ] + 2E∧Λ`.
    pub lambda_residual: MultiVec,
    /// `[E,Λ]`.
    pub e_residual: MultiVec,
}

impl JacobiCheck {
    pub fn passed(&self) -> bool {
        self.lambda_residual.is_zero() && self.e_residual.is_zero()
    }

    pub fn report(&self) -> CheckReport {
        let mut r = CheckReport::new("Jacobi structure");
        r.push(Check::zero("[Λ,Λ] + 2E∧Λ", &self.lambda_residual));
        r.push(Check::zero("[E,Λ]", &self.e_residual));
        r
    }
}

pub fn jacobi_check(lambda: &MultiVec, e: &MultiVec) -> Result<JacobiCheck> {
    lambda.check_chart(e.chart())?;
    if lambda.grade() != 2 || e.grade() != 1 {
        return Err(Error::input(
            "a Jacobi structure is a bivector and a vector field",
        ));
    }
    let two = rat(2, 1);
    Ok(JacobiCheck {
        lambda_residual: lambda
            .schouten(lambda)
            .add(&e.wedge(lambda).scale_rat(&two)),
        e_residual: e.schouten(lambda),
    })
}

/// Which formula [`JacobiStructure::bracket`] uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BracketMode {
    /// `Λ(δf,δg) + ⟨fδg − gδf, E⟩`.
    Direct,
    /// `⟨d^φ f, d_*^W g⟩`.
    Bialgebroid,
}

/// A pair `(Λ, E)` whose Jacobi identities are checked once, on demand.
#[derive(Clone)]
pub struct JacobiStructure {
    lambda: MultiVec,
    e: MultiVec,
    check: OnceLock<JacobiCheck>,
    dual: OnceLock<DualAlgebroid>,
}

impl PartialEq for JacobiStructure {
    fn eq(&self, other: &Self) -> bool {
        self.lambda == other.lambda && self.e == other.e
    }
}

impl Eq for JacobiStructure {}

impl std::fmt::Debug for JacobiStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "JacobiStructure(Λ = {}, E = {})", self.lambda, self.e)
    }
}

impl JacobiStructure {
    pub fn new(lambda: MultiVec, e: MultiVec) -> Result<JacobiStructure> {
        lambda.check_chart(e.chart())?;
        if lambda.grade() != 2 || e.grade() != 1 {
            return Err(Error::input(
                "a Jacobi structure is a bivector and a vector field",
            ));
        }
        Ok(JacobiStructure {
            lambda,
            e,
            check: OnceLock::new(),
            dual: OnceLock::new(),
        })
    }

    /// Read `(Λ, E)` back from `Λ + e∧E`.
    pub fn from_ext(p: &ExtVec) -> Result<JacobiStructure> {
        if p.grade() != 2 {
            return Err(Error::input("expected an extended bivector"));
        }
        JacobiStructure::new(p.pure(), p.epart())
    }

    pub fn chart(&self) -> &Arc<Chart> {
        self.lambda.chart()
    }

    pub fn lambda(&self) -> &MultiVec {
        &self.lambda
    }

    pub fn e(&self) -> &MultiVec {
        &self.e
    }

    /// `Λ + e∧E`.
    pub fn as_ext(&self) -> ExtVec {
        ExtVec::from_parts(&self.lambda, &self.e)
    }

    /// The cached verdict of [`jacobi_check`].
    pub fn check(&self) -> &JacobiCheck {
        self.check
            .get_or_init(|| jacobi_check(&self.lambda, &self.e).expect("validated at construction"))
    }

    pub fn is_verified(&self) -> bool {
        self.check().passed()
    }

    /// Gate for operations that presuppose the Jacobi identities.
    pub fn verify(&self) -> Result<()> {
        let c = self.check();
        if c.passed() {
            Ok(())
        } else {
            Err(Error::StructureNotVerified(format!(
                "[Λ,Λ] + 2E∧Λ = {}, [E,Λ] = {}",
                c.lambda_residual, c.e_residual
            )))
        }
    }

    /// `Λ^#α = i_α Λ`.
    pub fn lambda_sharp(&self, alpha: &Form) -> MultiVec {
        self.lambda.contract(alpha)
    }

    /// `Λ(α,β) = i_β i_α Λ`.
    pub fn lambda_eval(&self, alpha: &Form, beta: &Form) -> Poly {
        self.lambda.eval(&[alpha, beta])
    }

    /// `(Λ,E)^#(α,f) = (Λ^#α + fE, −⟨α,E⟩)`.
    pub fn sharp(&self, w: &ExtForm) -> ExtVec {
        self.as_ext().contract(w)
    }

    /// The cocycle `W = (−E, 0)`.
    pub fn w(&self) -> ExtVec {
        self.e.neg().to_ext()
    }

    /// The bracket on `T*M×ℝ`, computed term by term from its defining formula.
    pub fn dual_bracket(&self, a: &ExtForm, b: &ExtForm) -> Result<ExtForm> {
        self.verify()?;
        a.check_chart(self.chart())?;
        b.check_chart(self.chart())?;
        if a.grade() != 1 || b.grade() != 1 {
            return Err(Error::input("dual_bracket takes grade-1 sections"));
        }
        Ok(self.dual_bracket_formula(a, b))
    }

    fn dual_bracket_formula(&self, a: &ExtForm, b: &ExtForm) -> ExtForm {
        let (alpha, f) = (a.pure(), a.epart().as_poly());
        let (beta, g) = (b.pure(), b.epart().as_poly());
        let e = &self.e;
        let lab = self.lambda_eval(&alpha, &beta);
        let gamma = Form::lie_derivative(&self.lambda_sharp(&alpha), &beta)
            .sub(&Form::lie_derivative(&self.lambda_sharp(&beta), &alpha))
            .sub(&Form::differential(&lab))
            .add(&Form::lie_derivative(e, &beta).scale(&f))
            .sub(&Form::lie_derivative(e, &alpha).scale(&g))
            .sub(&alpha.wedge(&beta).contract(e));
        let dg = Form::differential(&g);
        let df = Form::differential(&f);
        let h = -&lab + self.lambda_eval(&alpha, &dg) - self.lambda_eval(&beta, &df)
            + dg.scale(&f).sub(&df.scale(&g)).pair(e);
        ExtForm::pair_of(&gamma, &h)
    }

    /// The Lie algebroid `T*M×ℝ`; requires a verified structure.
    pub fn dual_algebroid(&self) -> Result<&DualAlgebroid> {
        self.verify()?;
        Ok(self.dual.get_or_init(|| self.build_dual()))
    }

    fn build_dual(&self) -> DualAlgebroid {
        let chart = self.chart();
        let n = chart.dim() + 1;
        let basis: Vec<ExtForm> = (0..n)
            .map(|b| Field::wrap(Alt::basis(chart, true, 1 << b, Poly::one(chart))))
            .collect();
        let anchors: Vec<MultiVec> = basis.iter().map(|s| self.sharp(s).pure()).collect();
        let mut brackets = vec![vec![Alt::zero(chart, true, 1); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                brackets[i][j] = self.dual_bracket_formula(&basis[i], &basis[j]).alt;
            }
        }
        Algebroid {
            chart: chart.clone(),
            anchors,
            brackets,
            coordinate_d: false,
            _kind: PhantomData,
        }
    }

    /// `d_*^W η = d_* η + W∧η` on `TM×ℝ`-multivectors.
    pub fn d_star_w(&self, eta: &ExtVec) -> Result<ExtVec> {
        let alg = self.dual_algebroid()?;
        eta.check_chart(self.chart())?;
        Ok(alg.twisted_d(&self.w(), eta))
    }

    /// `d_*^W g = (−Λ^#δg − gE, E(g))` in closed form.
    pub fn d_star_w_fn(&self, g: &Poly) -> ExtVec {
        let dg = Form::differential(g);
        let x = self.lambda_sharp(&dg).neg().sub(&self.e.scale(g));
        ExtVec::pair_of(&x, &self.e.apply(g))
    }

    /// The Jacobi bracket of two functions.
    pub fn bracket(&self, f: &Poly, g: &Poly, mode: BracketMode) -> Result<Poly> {
        self.verify()?;
        f.checked_add(g)?;
        if !crate::poly::same_chart(f.chart(), self.chart()) {
            return Err(Error::ChartMismatch);
        }
        Ok(match mode {
            BracketMode::Direct => self.bracket_direct(f, g),
            BracketMode::Bialgebroid => d_phi_fn(f).pair(&self.d_star_w_fn(g)),
        })
    }

    pub(crate) fn bracket_direct(&self, f: &Poly, g: &Poly) -> Poly {
        let df = Form::differential(f);
        let dg = Form::differential(g);
        self.lambda_eval(&df, &dg) + dg.scale(f).sub(&df.scale(g)).pair(&self.e)
    }

    /// Residual of `d_*^W Ω + ½[Ω,Ω]^φ = 0`.
    pub fn maurer_cartan_residual(&self, omega: &ExtVec) -> Result<ExtVec> {
        if omega.grade() != 2 {
            return Err(Error::input("Ω must be an extended bivector"));
        }
        let ph = phi(self.chart());
        let dw = self.d_star_w(omega)?;
        let sq = phi_schouten_unchecked(&ph, omega, omega);
        Ok(dw.add(&sq.scale_rat(&rat(1, 2))))
    }

    pub fn maurer_cartan_check(&self, omega: &ExtVec) -> Result<CheckReport> {
        let res = self.maurer_cartan_residual(omega)?;
        let mut r = CheckReport::new("Maurer-Cartan equation");
        r.push(Check::zero("d_*^W Ω + ½[Ω,Ω]^φ", &res));
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn txp() -> Arc<Chart> {
        Chart::new(&["t", "q", "p"]).unwrap()
    }

    fn poly(c: &Arc<Chart>, s: &str) -> Poly {
        Poly::parse(c, s).unwrap()
    }

    fn mv(c: &Arc<Chart>, idx: &[usize], s: &str) -> MultiVec {
        MultiVec::monomial(c, idx, poly(c, s)).unwrap()
    }

    fn fm(c: &Arc<Chart>, idx: &[usize], s: &str) -> Form {
        Form::monomial(c, idx, poly(c, s)).unwrap()
    }

    fn contact() -> JacobiStructure {
        let c = txp();
        JacobiStructure::new(
            mv(&c, &[1, 2], "1").add(&mv(&c, &[0, 2], "p")),
            mv(&c, &[0], "1"),
        )
        .unwrap()
    }

    fn pair_v(x: &MultiVec, f: &str) -> ExtVec {
        ExtVec::pair_of(x, &poly(x.chart(), f))
    }

    fn pair_f(a: &Form, f: &str) -> ExtForm {
        ExtForm::pair_of(a, &poly(a.chart(), f))
    }

    #[test]
    fn ext_bracket_values() {
        let c = Chart::new(&["x", "y"]).unwrap();
        let dx = MultiVec::coord(&c, 0).unwrap();
        let dy = MultiVec::coord(&c, 1).unwrap();
        let zero = MultiVec::zero(&c, 1);
        let b = ext_bracket(&pair_v(&dx, "0"), &pair_v(&zero, "x")).unwrap();
        assert_eq!(b, ExtVec::unit(&c));
        let y = pair_v(&mv(&c, &[1], "x*y"), "y^2");
        assert!(ext_bracket(&ExtVec::unit(&c), &y).unwrap().is_zero());
        assert!(ext_bracket(&pair_v(&dx, "x"), &pair_v(&dy, "y"))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn ext_schouten_values() {
        let j = contact();
        let c = j.chart().clone();
        let x = mv(&c, &[1], "p").to_ext();
        let y = mv(&c, &[2], "q").to_ext();
        assert_eq!(
            ext_schouten(&x, &y).unwrap(),
            x.pure().schouten(&y.pure()).to_ext()
        );
        assert!(ext_schouten(&ExtVec::unit(&c), &j.as_ext())
            .unwrap()
            .is_zero());
    }

    #[test]
    fn sharp_values() {
        let j = contact();
        let c = j.chart().clone();
        assert_eq!(j.sharp(&ExtForm::unit(&c)), mv(&c, &[0], "1").to_ext());
        let dt = pair_f(&Form::coord(&c, 0).unwrap(), "0");
        assert_eq!(j.sharp(&dt), pair_v(&mv(&c, &[2], "p"), "-1"));
        assert!(j.sharp(&ExtForm::zero(&c, 1)).is_zero());
    }

    #[test]
    fn contact_is_jacobi_and_mutation_is_not() {
        let j = contact();
        assert!(j.is_verified());
        let c = j.chart().clone();
        let bad = JacobiStructure::new(j.lambda().clone(), mv(&c, &[2], "1")).unwrap();
        assert_eq!(bad.check().e_residual, mv(&c, &[0, 2], "1"));
        assert!(matches!(
            bad.dual_bracket(&ExtForm::unit(&c), &ExtForm::unit(&c)),
            Err(Error::StructureNotVerified(_))
        ));
        let poisson = Chart::new(&["x", "y"]).unwrap();
        let pj =
            JacobiStructure::new(mv(&poisson, &[0, 1], "1"), MultiVec::zero(&poisson, 1)).unwrap();
        assert!(pj.is_verified());
    }

    #[test]
    fn dual_bracket_values() {
        let j = contact();
        let c = j.chart().clone();
        let dt = pair_f(&Form::coord(&c, 0).unwrap(), "0");
        let dq = pair_f(&Form::coord(&c, 1).unwrap(), "0");
        let b = j.dual_bracket(&dt, &dq).unwrap();
        assert!(b.epart().is_zero());
        let a = pair_f(&fm(&c, &[2], "t"), "q*p");
        assert!(j.dual_bracket(&a, &a).unwrap().is_zero());
        let u = ExtForm::unit(&c);
        assert!(j.dual_bracket(&u, &u).unwrap().is_zero());
    }

    #[test]
    fn cocycles() {
        let j = contact();
        let c = j.chart().clone();
        assert!(TrivialAlgebroid::trivial(&c).is_cocycle(&phi(&c)));
        assert!(j.dual_algebroid().unwrap().is_cocycle(&j.w()));
        let bad = pair_f(&fm(&c, &[2], "t"), "0");
        assert!(!TrivialAlgebroid::trivial(&c).is_cocycle(&bad));
        assert!(matches!(
            phi_differential(&bad, &ExtForm::unit(&c)),
            Err(Error::NotCocycle(_))
        ));
    }

    #[test]
    fn differentials() {
        let j = contact();
        let c = j.chart().clone();
        let t = poly(&c, "t");
        let ph = phi(&c);
        let dt = phi_differential(&ph, &ExtForm::scalar(t.clone())).unwrap();
        assert_eq!(dt, pair_f(&Form::coord(&c, 0).unwrap(), "t"));
        assert!(phi_differential(&ph, &dt).unwrap().is_zero());
        assert_eq!(
            j.d_star_w_fn(&t),
            pair_v(&mv(&c, &[2], "-p").add(&mv(&c, &[0], "-t")), "1")
        );
        assert_eq!(
            j.d_star_w(&ExtVec::scalar(t.clone())).unwrap(),
            j.d_star_w_fn(&t)
        );
    }

    #[test]
    fn phi_lie_values() {
        let j = contact();
        let c = j.chart().clone();
        let ph = phi(&c);
        let eta = pair_f(&fm(&c, &[0], "q*p"), "t^2");
        let x = mv(&c, &[1], "t + p");
        assert_eq!(
            phi_lie(&ph, &x.to_ext(), &eta).unwrap(),
            TrivialAlgebroid::trivial(&c).lie(&x.to_ext(), &eta)
        );
        assert_eq!(phi_lie(&ph, &ExtVec::unit(&c), &eta).unwrap(), eta);
        let dp = pair_f(&Form::coord(&c, 2).unwrap(), "0");
        assert!(phi_lie(&ph, &MultiVec::coord(&c, 1).unwrap().to_ext(), &dp)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn phi_schouten_values() {
        let j = contact();
        let c = j.chart().clone();
        let ph = phi(&c);
        let x = pair_v(&mv(&c, &[1], "p"), "t");
        let y = pair_v(&mv(&c, &[0], "q^2"), "1");
        assert_eq!(phi_schouten(&ph, &x, &y).unwrap(), x.schouten(&y));
        let p = j.as_ext();
        assert!(phi_schouten(&ph, &p, &p).unwrap().is_zero());
        let dq = MultiVec::coord(&c, 1).unwrap().to_ext();
        assert!(phi_schouten(&ph, &dq, &p).unwrap().is_zero());
    }

    #[test]
    fn jacobi_brackets() {
        let j = contact();
        let c = j.chart().clone();
        let b = |f: &str, g: &str, m| j.bracket(&poly(&c, f), &poly(&c, g), m).unwrap();
        for m in [BracketMode::Direct, BracketMode::Bialgebroid] {
            assert_eq!(b("q", "p", m), Poly::one(&c));
            assert!(b("t", "p", m).is_zero());
            assert_eq!(b("1", "t", m), Poly::one(&c));
        }
    }

    #[test]
    fn maurer_cartan() {
        let j = contact();
        let c = j.chart().clone();
        assert!(j
            .maurer_cartan_check(&ExtVec::zero(&c, 2))
            .unwrap()
            .passed());
        assert!(j.maurer_cartan_check(&j.as_ext()).unwrap().passed());
        let omega = mv(&c, &[0, 1], "1").to_ext();
        let res = j.maurer_cartan_residual(&omega).unwrap();
        let r = j.maurer_cartan_check(&omega).unwrap();
        assert_eq!(r.checks[0].residual, res.to_string());
    }

    #[test]
    fn generic_and_coordinate_derivatives_agree() {
        let c = txp();
        let fast = TrivialAlgebroid::trivial(&c);
        let slow = TrivialAlgebroid::trivial_generic(&c);
        let eta = pair_f(&fm(&c, &[0], "q*p").add(&fm(&c, &[2], "t^2")), "t*q");
        assert_eq!(fast.d(&eta), slow.d(&eta));
        let two = fm(&c, &[0, 1], "p")
            .to_ext()
            .add(&ExtForm::from_parts(&Form::zero(&c, 2), &fm(&c, &[2], "q")));
        assert_eq!(fast.d(&two), slow.d(&two));
    }
}
