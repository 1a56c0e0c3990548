//! The double `(TM×ℝ) ⊕ (T*M×ℝ)` of a Jacobi manifold as a generalized
//! Courant algebroid with `θ = φ + W`.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::extbundle::{phi, DualAlgebroid, JacobiStructure, TrivialAlgebroid};
use crate::exterior::{ExtForm, ExtVec, MultiVec};
use crate::poly::{rat, same_chart, Poly};
use crate::report::{Check, CheckReport, Sampling};
use crate::sampling;

/// A section `X + α` of the double, `X = (X, f)`, `α = (α, g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleSection {
    pub vec: ExtVec,
    pub form: ExtForm,
}

impl DoubleSection {
    pub fn new(vec: ExtVec, form: ExtForm) -> Result<DoubleSection> {
        vec.check_chart(form.chart())?;
        if vec.grade() != 1 || form.grade() != 1 {
            return Err(Error::input("sections of the double have grade 1 parts"));
        }
        Ok(DoubleSection { vec, form })
    }

    pub fn zero(chart: &std::sync::Arc<crate::poly::Chart>) -> DoubleSection {
        DoubleSection {
            vec: ExtVec::zero(chart, 1),
            form: ExtForm::zero(chart, 1),
        }
    }

    pub fn from_vec(vec: ExtVec) -> DoubleSection {
        let form = ExtForm::zero(vec.chart(), 1);
        DoubleSection { vec, form }
    }

    pub fn from_form(form: ExtForm) -> DoubleSection {
        let vec = ExtVec::zero(form.chart(), 1);
        DoubleSection { vec, form }
    }

    pub fn is_zero(&self) -> bool {
        self.vec.is_zero() && self.form.is_zero()
    }

    pub fn add(&self, o: &DoubleSection) -> DoubleSection {
        DoubleSection {
            vec: self.vec.add(&o.vec),
            form: self.form.add(&o.form),
        }
    }

    pub fn sub(&self, o: &DoubleSection) -> DoubleSection {
        DoubleSection {
            vec: self.vec.sub(&o.vec),
            form: self.form.sub(&o.form),
        }
    }

    pub fn scale(&self, f: &Poly) -> DoubleSection {
        DoubleSection {
            vec: self.vec.scale(f),
            form: self.form.scale(f),
        }
    }
}

impl fmt::Display for DoubleSection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})", self.vec, self.form)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// `(e1,e2)± = ½(⟨α1,X2⟩ ± ⟨α2,X1⟩)`.
pub fn pairing(e1: &DoubleSection, e2: &DoubleSection, sign: Sign) -> Result<Poly> {
    e1.vec.check_chart(e2.vec.chart())?;
    Ok(pairing_unchecked(e1, e2, sign))
}

fn pairing_unchecked(e1: &DoubleSection, e2: &DoubleSection, sign: Sign) -> Poly {
    let a = e1.form.pair(&e2.vec);
    let b = e2.form.pair(&e1.vec);
    let s = match sign {
        Sign::Plus => a + b,
        Sign::Minus => a - b,
    };
    s.scale(&rat(1, 2))
}

/// Variants of the bracket; the mutant exists to show the axiom suite has teeth.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BracketVariant {
    Standard,
    /// Omit the `d^φ(e1,e2)₋` term of the `T*M×ℝ` component.
    DropDphiTerm,
}

/// Which of the two `D` operators to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DVariant {
    Plain,
    Theta,
}

/// The double of the generalized Lie bialgebroid of a verified Jacobi structure.
pub struct CourantDouble<'a> {
    j: &'a JacobiStructure,
    triv: TrivialAlgebroid,
    dual: &'a DualAlgebroid,
    phi: ExtForm,
    w: ExtVec,
    variant: BracketVariant,
}

impl<'a> CourantDouble<'a> {
    pub fn new(j: &'a JacobiStructure) -> Result<CourantDouble<'a>> {
        CourantDouble::with_variant(j, BracketVariant::Standard)
    }

    pub fn with_variant(
        j: &'a JacobiStructure,
        variant: BracketVariant,
    ) -> Result<CourantDouble<'a>> {
        let dual = j.dual_algebroid()?;
        Ok(CourantDouble {
            j,
            triv: TrivialAlgebroid::trivial(j.chart()),
            dual,
            phi: phi(j.chart()),
            w: j.w(),
            variant,
        })
    }

    pub fn structure(&self) -> &JacobiStructure {
        self.j
    }

    fn check(&self, e: &DoubleSection) -> Result<()> {
        if !same_chart(e.vec.chart(), self.j.chart()) || !same_chart(e.form.chart(), self.j.chart())
        {
            return Err(Error::ChartMismatch);
        }
        Ok(())
    }

    /// The bracket `⟦e1, e2⟧`.
    pub fn bracket(&self, e1: &DoubleSection, e2: &DoubleSection) -> Result<DoubleSection> {
        self.check(e1)?;
        self.check(e2)?;
        Ok(self.bracket_unchecked(e1, e2))
    }

    pub(crate) fn bracket_unchecked(
        &self,
        e1: &DoubleSection,
        e2: &DoubleSection,
    ) -> DoubleSection {
        let minus = pairing_unchecked(e1, e2, Sign::Minus);
        let vec = e1
            .vec
            .schouten(&e2.vec)
            .add(&self.dual.twisted_lie(&self.w, &e1.form, &e2.vec))
            .sub(&self.dual.twisted_lie(&self.w, &e2.form, &e1.vec))
            .sub(&self.dual.twisted_d(&self.w, &ExtVec::scalar(minus.clone())));
        let mut form = self
            .dual
            .bracket(&e1.form, &e2.form)
            .add(&self.triv.twisted_lie(&self.phi, &e1.vec, &e2.form))
            .sub(&self.triv.twisted_lie(&self.phi, &e2.vec, &e1.form));
        if self.variant == BracketVariant::Standard {
            form = form.add(&self.triv.twisted_d(&self.phi, &ExtForm::scalar(minus)));
        }
        DoubleSection { vec, form }
    }

    /// `ρ(X + α) = π(X) + π((Λ,E)^# α)`.
    pub fn rho(&self, e: &DoubleSection) -> MultiVec {
        e.vec.pure().add(&self.dual.anchor(&e.form))
    }

    /// `⟨θ, e⟩ = ⟨φ, X⟩ + ⟨α, W⟩`.
    pub fn theta_pairing(&self, e: &DoubleSection) -> Poly {
        self.phi.pair(&e.vec) + e.form.pair(&self.w)
    }

    /// `ρ^θ(e) h = ρ(e)h + ⟨θ,e⟩h`.
    pub fn rho_theta(&self, e: &DoubleSection, h: &Poly) -> Result<Poly> {
        self.check(e)?;
        Ok(self.rho_theta_unchecked(e, h))
    }

    fn rho_theta_unchecked(&self, e: &DoubleSection, h: &Poly) -> Poly {
        self.rho(e).apply(h) + self.theta_pairing(e) * h
    }

    /// `D f = d_* f + d f` or `Dᶿ f = d_*^W f + d^φ f`.
    pub fn d_operator(&self, f: &Poly, variant: DVariant) -> DoubleSection {
        let sf = ExtVec::scalar(f.clone());
        let ff = ExtForm::scalar(f.clone());
        match variant {
            DVariant::Plain => DoubleSection {
                vec: self.dual.d(&sf),
                form: self.triv.d(&ff),
            },
            DVariant::Theta => DoubleSection {
                vec: self.dual.twisted_d(&self.w, &sf),
                form: self.triv.twisted_d(&self.phi, &ff),
            },
        }
    }

    /// Run every axiom check on `samples` seeded random triples of sections.
    pub fn axiom_suite(&self, samples: usize, seed: u64) -> CheckReport {
        let names = AXIOMS;
        let results: Vec<Vec<Option<String>>> = (0..samples)
            .into_par_iter()
            .map(|i| self.sample_checks(seed, i as u64))
            .collect();
        let mut report = CheckReport::new("generalized Courant algebroid axioms");
        report.sampling = Some(Sampling { seed, samples });
        for (k, name) in names.iter().enumerate() {
            let first_fail = results
                .iter()
                .enumerate()
                .find_map(|(i, r)| r[k].as_ref().map(|res| (i, res.clone())));
            match first_fail {
                None => report.push(Check::new(*name, true, "0")),
                Some((i, res)) => report.push(
                    Check::new(*name, false, res).with_note(format!("first failure at sample {i}")),
                ),
            }
        }
        report
    }

    /// Residuals of each check on one sample; `None` means exact zero.
    fn sample_checks(&self, seed: u64, index: u64) -> Vec<Option<String>> {
        let chart = self.j.chart();
        let mut rng = sampling::stream(seed, index);
        let section = |rng: &mut sampling::SampleRng| DoubleSection {
            vec: sampling::field(rng, chart, 1, 2),
            form: sampling::field(rng, chart, 1, 2),
        };
        let e1 = section(&mut rng);
        let e2 = section(&mut rng);
        let e3 = section(&mut rng);
        let f = sampling::poly(&mut rng, chart, 2, 3);
        let g = sampling::poly(&mut rng, chart, 2, 3);
        let h = sampling::poly(&mut rng, chart, 2, 3);

        let br = |a: &DoubleSection, b: &DoubleSection| self.bracket_unchecked(a, b);
        let plus = |a: &DoubleSection, b: &DoubleSection| pairing_unchecked(a, b, Sign::Plus);
        let ds = |s: DoubleSection| {
            if s.is_zero() {
                None
            } else {
                Some(s.to_string())
            }
        };
        let dp = |p: Poly| {
            if p.is_zero() {
                None
            } else {
                Some(p.to_string())
            }
        };
        let dv = |v: MultiVec| {
            if v.is_zero() {
                None
            } else {
                Some(v.to_string())
            }
        };
        let half = rat(1, 2);

        let b12 = br(&e1, &e2);
        let b21 = br(&e2, &e1);
        let b23 = br(&e2, &e3);
        let b31 = br(&e3, &e1);

        // skew-symmetry
        let skew = ds(b12.add(&b21));

        // axiom 1: Jacobiator = Dᶿ T
        let jac = br(&b12, &e3).add(&br(&b23, &e1)).add(&br(&b31, &e2));
        let t = (plus(&b12, &e3) + plus(&b23, &e1) + plus(&b31, &e2)).scale(&rat(1, 3));
        let ax1 = ds(jac.sub(&self.d_operator(&t, DVariant::Theta)));

        // axiom 2 as a statement about anchors, and in θ-form as operators on h
        let ax2 = dv(self.rho(&b12).sub(&self.rho(&e1).schouten(&self.rho(&e2))));
        let rt = |e: &DoubleSection, x: &Poly| self.rho_theta_unchecked(e, x);
        let ax2_ops = dp(rt(&b12, &h) - (rt(&e1, &rt(&e2, &h)) - rt(&e2, &rt(&e1, &h))));

        // axiom 3: anchored Leibniz rule
        let lhs = br(&e1, &e2.scale(&f));
        let rhs = b12
            .scale(&f)
            .add(&e2.scale(&self.rho(&e1).apply(&f)))
            .sub(&self.d_operator(&f, DVariant::Plain).scale(&plus(&e1, &e2)));
        let ax3 = ds(lhs.sub(&rhs));

        // axiom 4
        let ax4 = dp(plus(
            &self.d_operator(&f, DVariant::Theta),
            &self.d_operator(&g, DVariant::Theta),
        ));

        // axiom 5
        let e = &e3;
        let lhs5 = self.rho(e).apply(&plus(&e1, &e2)) + self.theta_pairing(e) * plus(&e1, &e2);
        let a = br(e, &e1).add(&self.d_operator(&plus(e, &e1), DVariant::Theta));
        let b = br(e, &e2).add(&self.d_operator(&plus(e, &e2), DVariant::Theta));
        let ax5 = dp(lhs5 - plus(&a, &e2) - plus(&e1, &b));

        // θ is a cocycle for the bracket
        let theta = dp(self.theta_pairing(&b12)
            - (self.rho(&e1).apply(&self.theta_pairing(&e2))
                - self.rho(&e2).apply(&self.theta_pairing(&e1))));

        // defining identities of D and Dᶿ
        let d_plain =
            dp(plus(&self.d_operator(&f, DVariant::Plain), &e1)
                - self.rho(&e1).apply(&f).scale(&half));
        let d_theta = dp(plus(&self.d_operator(&f, DVariant::Theta), &e1)
            - (self.rho(&e1).apply(&f) + self.theta_pairing(&e1) * &f).scale(&half));

        vec![
            skew, ax1, ax2, ax2_ops, ax3, ax4, ax5, theta, d_plain, d_theta,
        ]
    }
}

/// Names of the checks run by [`CourantDouble::axiom_suite`], in report order.
pub const AXIOMS: [&str; 10] = [
    "skew-symmetry",
    "axiom 1 (Jacobiator = DᶿT)",
    "axiom 2 (anchor is a homomorphism)",
    "axiom 2 (ρᶿ as operators)",
    "axiom 3 (anchored Leibniz rule)",
    "axiom 4 ((Dᶿf, Dᶿg) = 0)",
    "axiom 5 (invariance of the pairing)",
    "θ-compatibility",
    "(Df, e) = ½ρ(e)f",
    "(Dᶿf, e) = ½ρᶿ(e)f",
];
