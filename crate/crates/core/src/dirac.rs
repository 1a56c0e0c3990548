//! Subbundles of the double: characteristic pairs, conormal bundles, the
//! Dirac criteria, admissible functions and their bracket.
//!
//! A subbundle `D ⊂ TM×ℝ` is given by generators and is checked in one of two
//! modes. *Aligned* generators are constant multiples of coordinate fields and
//! every check is symbolic. *Pointwise* generators are arbitrary polynomial
//! sections; membership questions are then answered by exact linear algebra
//! at seeded sample points, and verdicts are labelled as sampled.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::courant::{CourantDouble, DoubleSection, Sign};
use crate::error::{Error, Result};
use crate::extbundle::{
    d_phi_fn, ext_bracket, phi, phi_schouten_unchecked, BracketMode, JacobiStructure,
};
use crate::exterior::{Alt, ExtForm, ExtVec, Field};
use crate::linalg::{self, Vector};
use crate::poly::{same_chart, Chart, Poly, Rational};
use crate::report::{Check, CheckReport, Sampling};
use crate::sampling;

use num_traits::Zero;

/// How membership in `D` is decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Aligned,
    Pointwise,
}

/// Where pointwise checks are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Points {
    /// Seeded random nonzero rationals.
    Random { samples: usize, seed: u64 },
    /// Every point of `{1, …, side}^m`.
    Grid { side: u32 },
}

impl Default for Points {
    fn default() -> Self {
        Points::Random {
            samples: 8,
            seed: 0,
        }
    }
}

impl Points {
    pub(crate) fn generate(&self, dim: usize) -> Vec<Vec<Rational>> {
        match *self {
            Points::Random { samples, seed } => {
                let mut rng = sampling::rng(seed);
                (0..samples)
                    .map(|_| sampling::point(&mut rng, dim))
                    .collect()
            }
            Points::Grid { side } => sampling::grid(dim, side),
        }
    }

    fn sampling(&self, count: usize) -> Sampling {
        match *self {
            Points::Random { samples, seed } => Sampling { seed, samples },
            Points::Grid { .. } => Sampling {
                seed: 0,
                samples: count,
            },
        }
    }
}

/// Generators of a subbundle `D ⊂ TM×ℝ` of constant rank.
#[derive(Clone, Debug)]
pub struct SubbundleSpec {
    chart: Arc<Chart>,
    names: Vec<String>,
    generators: Vec<ExtVec>,
    rank: usize,
    mode: Mode,
    points: Points,
    sample_points: Vec<Vec<Rational>>,
    aligned_indices: Vec<usize>,
}

impl PartialEq for SubbundleSpec {
    fn eq(&self, other: &Self) -> bool {
        same_chart(&self.chart, &other.chart)
            && self.mode == other.mode
            && self.rank == other.rank
            && match self.mode {
                Mode::Aligned => self.aligned_indices == other.aligned_indices,
                Mode::Pointwise => self.generators == other.generators,
            }
    }
}

/// At most three points, then a count of the rest.
pub(crate) fn list_points(points: &[String]) -> String {
    let mut s = points
        .iter()
        .take(3)
        .cloned()
        .collect::<Vec<_>>()
        .join("; ");
    if points.len() > 3 {
        s.push_str(&format!(" (and {} more)", points.len() - 3));
    }
    s
}

pub(crate) fn render_point(chart: &Chart, p: &[Rational]) -> String {
    chart
        .names()
        .iter()
        .zip(p)
        .map(|(n, v)| format!("{n}={v}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Value of a grade-1 extended field at a point, indexed by generator.
fn vector_at<K: crate::exterior::Kind>(x: &Field<K>, point: &[Rational]) -> Result<Vector> {
    let n = x.chart().dim() + 1;
    let mut v = vec![Rational::zero(); n];
    for (m, val) in x.eval_at(point)? {
        v[m.trailing_zeros() as usize] = val;
    }
    Ok(v)
}

impl SubbundleSpec {
    /// `D = span{(∂/∂x_i, 0) : i ∈ indices}`.
    pub fn aligned(chart: &Arc<Chart>, indices: &[usize]) -> Result<SubbundleSpec> {
        let mut gens = Vec::new();
        for &i in indices {
            let g = crate::exterior::MultiVec::coord(chart, i)?.to_ext();
            gens.push((format!("∂{}", chart.name(i)), g));
        }
        SubbundleSpec::new(chart, gens, None, Mode::Aligned, Points::default())
    }

    /// Validate generators for the requested mode. In pointwise mode the rank
    /// is checked at every sample point.
    pub fn new(
        chart: &Arc<Chart>,
        generators: Vec<(String, ExtVec)>,
        rank: Option<usize>,
        mode: Mode,
        points: Points,
    ) -> Result<SubbundleSpec> {
        for (name, g) in &generators {
            g.check_chart(chart)?;
            if g.grade() != 1 {
                return Err(Error::input(format!(
                    "generator {name} is not a section of TM×ℝ"
                )));
            }
        }
        let (names, gens): (Vec<String>, Vec<ExtVec>) = generators.into_iter().unzip();
        let mut aligned_indices = Vec::new();
        let rank = match mode {
            Mode::Aligned => {
                for (name, g) in names.iter().zip(&gens) {
                    let comps = g.components();
                    let ok = g.epart().is_zero()
                        && comps.len() == 1
                        && comps[0].1.is_constant()
                        && !comps[0].1.is_zero();
                    if !ok {
                        return Err(Error::input(format!(
                            "aligned generator {name} = {g} is not a constant multiple of a coordinate field"
                        )));
                    }
                    let i = comps[0].0[0];
                    if aligned_indices.contains(&i) {
                        return Err(Error::input(format!(
                            "aligned generators repeat the direction ∂{}",
                            chart.name(i)
                        )));
                    }
                    aligned_indices.push(i);
                }
                aligned_indices.sort_unstable();
                if let Some(r) = rank {
                    if r != gens.len() {
                        return Err(Error::input(format!(
                            "declared rank {r} but {} aligned generators",
                            gens.len()
                        )));
                    }
                }
                gens.len()
            }
            Mode::Pointwise => rank.unwrap_or(gens.len()),
        };
        let sample_points = points.generate(chart.dim());
        let spec = SubbundleSpec {
            chart: chart.clone(),
            names,
            generators: gens,
            rank,
            mode,
            points,
            sample_points,
            aligned_indices,
        };
        if mode == Mode::Pointwise {
            for p in &spec.sample_points {
                let found = linalg::rank(&spec.values_at(p)?);
                if found != rank {
                    return Err(Error::RankViolation {
                        point: render_point(chart, p),
                        expected: rank,
                        found,
                    });
                }
            }
        }
        Ok(spec)
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn generators(&self) -> &[ExtVec] {
        &self.generators
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn points(&self) -> Points {
        self.points
    }

    pub fn sample_points(&self) -> &[Vec<Rational>] {
        &self.sample_points
    }

    /// Coordinate indices spanned by an aligned `D`.
    pub fn aligned_indices(&self) -> Option<&[usize]> {
        match self.mode {
            Mode::Aligned => Some(&self.aligned_indices),
            Mode::Pointwise => None,
        }
    }

    /// Whether every generator is of the form `(X, 0)`.
    pub fn all_epart_zero(&self) -> bool {
        self.generators.iter().all(|g| g.epart().is_zero())
    }

    fn values_at(&self, p: &[Rational]) -> Result<Vec<Vector>> {
        self.generators.iter().map(|g| vector_at(g, p)).collect()
    }

    /// Basis of `D^⊥` at a point.
    pub fn conormal_at(&self, p: &[Rational]) -> Result<Vec<Vector>> {
        Ok(linalg::nullspace(&self.values_at(p)?, self.chart.dim() + 1))
    }

    /// Whether `⟨α, X⟩ = 0` identically for every generator.
    pub fn annihilates(&self, alpha: &ExtForm) -> bool {
        self.generators.iter().all(|g| alpha.pair(g).is_zero())
    }

    /// Use a different set of sample points.
    pub fn with_points(&self, points: Points) -> Result<SubbundleSpec> {
        let gens = self
            .names
            .iter()
            .cloned()
            .zip(self.generators.iter().cloned())
            .collect();
        SubbundleSpec::new(&self.chart, gens, Some(self.rank), self.mode, points)
    }
}

/// Description of `D^⊥ ⊂ T*M×ℝ`.
#[derive(Clone, Debug)]
pub enum Conormal {
    /// `span{(dx_j, 0) : j ∉ D} ∪ {(0,1)}`.
    Aligned { basis: Vec<ExtForm> },
    /// Bases at each sample point.
    Pointwise {
        bases: Vec<(Vec<Rational>, Vec<Vector>)>,
    },
}

pub fn conormal(d: &SubbundleSpec) -> Result<Conormal> {
    match d.mode {
        Mode::Aligned => {
            let mut basis = vec![ExtForm::unit(&d.chart)];
            for j in 0..d.chart.dim() {
                if !d.aligned_indices.contains(&j) {
                    basis.push(crate::exterior::Form::coord(&d.chart, j)?.to_ext());
                }
            }
            Ok(Conormal::Aligned { basis })
        }
        Mode::Pointwise => {
            let mut bases = Vec::new();
            for p in &d.sample_points {
                bases.push((p.clone(), d.conormal_at(p)?));
            }
            Ok(Conormal::Pointwise { bases })
        }
    }
}

/// Outcome of testing `P ≡ 0 (mod D)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModD {
    pub holds: bool,
    /// Aligned mode: `P` with every monomial along a `D` direction removed.
    pub remainder: Option<ExtVec>,
    /// Pointwise mode: sample points at which the test failed.
    pub failing_points: Vec<String>,
    pub sampled: bool,
}

impl ModD {
    /// Exact residual for reports: the remainder, or the raw value when sampled.
    pub fn residual(&self, raw: &ExtVec) -> String {
        match &self.remainder {
            Some(r) => r.to_string(),
            None if self.holds => "0".into(),
            None => raw.to_string(),
        }
    }

    fn check(&self, name: &str, raw: &ExtVec, total: usize) -> Check {
        let mut c = Check::new(name, self.holds, self.residual(raw));
        if self.sampled {
            let note = if self.holds {
                format!("sampled: holds at all {total} points")
            } else {
                format!("sampled: fails at {}", list_points(&self.failing_points))
            };
            c = c.with_note(note);
        }
        c
    }
}

/// `P(α1, …, αk)` for numeric values of `P` and of the `αi`.
fn eval_numeric(values: &BTreeMap<u32, Rational>, alphas: &[&Vector]) -> Rational {
    let mut total = Rational::zero();
    for (m, v) in values {
        let bs = Alt::mask_bits(*m);
        let minor: Vec<Vector> = bs
            .iter()
            .map(|b| alphas.iter().map(|a| a[*b as usize].clone()).collect())
            .collect();
        total += v * linalg::det(minor);
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = Vec::new();
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out.extend(subsets(n - 1, k));
    out
}

/// Decide `P ≡ 0 (mod D)`, i.e. `P ∈ D ∧ (∧^{k−1}(TM×ℝ))`.
pub fn mod_d_reduce(d: &SubbundleSpec, p: &ExtVec) -> Result<ModD> {
    p.check_chart(&d.chart)?;
    match d.mode {
        Mode::Aligned => {
            let r = p.drop_coords(&d.aligned_indices);
            Ok(ModD {
                holds: r.is_zero(),
                remainder: Some(r),
                failing_points: Vec::new(),
                sampled: false,
            })
        }
        Mode::Pointwise => {
            let k = p.grade();
            let mut failing = Vec::new();
            for pt in &d.sample_points {
                let ann = d.conormal_at(pt)?;
                let vals = p.eval_at(pt)?;
                let bad = subsets(ann.len(), k).into_iter().any(|s| {
                    let alphas: Vec<&Vector> = s.iter().map(|&i| &ann[i]).collect();
                    !eval_numeric(&vals, &alphas).is_zero()
                });
                if bad {
                    failing.push(render_point(&d.chart, pt));
                }
            }
            Ok(ModD {
                holds: failing.is_empty(),
                remainder: None,
                failing_points: failing,
                sampled: true,
            })
        }
    }
}

/// Data `(D, Ω)` presenting `L = D ⊕ graph(Ω^#|_{D^⊥})`.
#[derive(Clone, Debug)]
pub struct CharPair {
    pub d: SubbundleSpec,
    pub omega: ExtVec,
}

impl CharPair {
    pub fn new(d: SubbundleSpec, omega: ExtVec) -> Result<CharPair> {
        omega.check_chart(&d.chart)?;
        if omega.grade() != 2 {
            return Err(Error::input("Ω must be an extended bivector"));
        }
        Ok(CharPair { d, omega })
    }

    /// Null pair `(D, 0)`.
    pub fn null(d: SubbundleSpec) -> CharPair {
        let omega = ExtVec::zero(&d.chart, 2);
        CharPair { d, omega }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.d.chart
    }

    /// Equality of the presented subbundles: same `D` and `Ω₁ − Ω₂ ≡ 0 (mod D)`.
    pub fn equivalent(&self, other: &CharPair) -> Result<bool> {
        if self.d != other.d {
            return Ok(false);
        }
        Ok(mod_d_reduce(&self.d, &self.omega.sub(&other.omega))?.holds)
    }

    /// Symbolic generators of `L` (aligned mode only).
    pub fn l_generators(&self) -> Option<Vec<DoubleSection>> {
        let Ok(Conormal::Aligned { basis }) = conormal(&self.d) else {
            return None;
        };
        let mut out: Vec<DoubleSection> = self
            .d
            .generators
            .iter()
            .map(|g| DoubleSection::from_vec(g.clone()))
            .collect();
        for a in basis {
            out.push(DoubleSection {
                vec: self.omega.contract(&a),
                form: a,
            });
        }
        Some(out)
    }

    /// Basis of `L` at a point as `(vector part, form part)` pairs.
    fn l_basis_at(&self, p: &[Rational]) -> Result<Vec<(Vector, Vector)>> {
        let n = self.chart().dim() + 1;
        let mut out = Vec::new();
        for v in linalg::row_basis(&self.d.values_at(p)?) {
            out.push((v, vec![Rational::zero(); n]));
        }
        let om = self.omega.eval_at(p)?;
        for a in self.d.conormal_at(p)? {
            let mut x = vec![Rational::zero(); n];
            for (m, w) in &om {
                let bs = Alt::mask_bits(*m);
                let (i, j) = (bs[0] as usize, bs[1] as usize);
                x[j] += w * &a[i];
                x[i] -= w * &a[j];
            }
            out.push((x, a));
        }
        Ok(out)
    }

    /// Whether `X + α` lies in `L` (aligned mode, exact).
    fn contains_aligned(&self, e: &DoubleSection) -> std::result::Result<(), String> {
        let idx = &self.d.aligned_indices;
        let alpha_on_d: Vec<String> = idx
            .iter()
            .filter(|&&i| !e.form.component(&[i]).is_zero())
            .map(|&i| {
                format!(
                    "⟨α, ∂{}⟩ = {}",
                    self.chart().name(i),
                    e.form.component(&[i])
                )
            })
            .collect();
        if !alpha_on_d.is_empty() {
            return Err(alpha_on_d.join(", "));
        }
        let rest = e.vec.sub(&self.omega.contract(&e.form)).drop_coords(idx);
        if rest.is_zero() {
            Ok(())
        } else {
            Err(format!("X − Ω^#α mod D = {rest}"))
        }
    }
}

/// `L` is maximal isotropic for `( , )₊`.
pub fn isotropy_check(pair: &CharPair) -> Result<CheckReport> {
    let mut r = CheckReport::new("maximal isotropy of L");
    let n = pair.chart().dim() + 1;
    match pair.l_generators() {
        Some(gens) => {
            let mut worst = None;
            for (a, ea) in gens.iter().enumerate() {
                for eb in &gens[a..] {
                    let v = crate::courant::pairing(ea, eb, Sign::Plus)?;
                    if !v.is_zero() && worst.is_none() {
                        worst = Some(v.to_string());
                    }
                }
            }
            r.push(Check::new(
                "(e_a, e_b)₊ on generators of L",
                worst.is_none(),
                worst.unwrap_or_else(|| "0".into()),
            ));
        }
        None => {
            let mut fails = Vec::new();
            for p in &pair.d.sample_points {
                let basis = pair.l_basis_at(p)?;
                let bad = basis.iter().enumerate().any(|(a, x)| {
                    basis[a..]
                        .iter()
                        .any(|y| !(linalg::dot(&x.1, &y.0) + linalg::dot(&y.1, &x.0)).is_zero())
                });
                if bad {
                    fails.push(render_point(pair.chart(), p));
                }
            }
            r.push(
                Check::new(
                    "(e_a, e_b)₊ on a basis of L",
                    fails.is_empty(),
                    if fails.is_empty() {
                        "0".to_string()
                    } else {
                        format!("nonzero at {}", list_points(&fails))
                    },
                )
                .with_note("sampled"),
            );
        }
    }
    let mut rank_fail = None;
    for p in &pair.d.sample_points {
        let rows: Vec<Vector> = pair
            .l_basis_at(p)?
            .into_iter()
            .map(|(x, a)| x.into_iter().chain(a).collect())
            .collect();
        let rk = linalg::rank(&rows);
        if rk != n && rank_fail.is_none() {
            rank_fail = Some(format!("rank {rk} at {}", render_point(pair.chart(), p)));
        }
    }
    r.push(Check::new(
        "rank L = dim M + 1",
        rank_fail.is_none(),
        rank_fail.unwrap_or_else(|| "0".into()),
    ));
    Ok(r)
}

/// Isotropy and maximality of an arbitrary list of generators of the double.
pub fn subbundle_isotropy(gens: &[DoubleSection], points: Points) -> Result<CheckReport> {
    let mut r = CheckReport::new("maximal isotropy");
    let Some(first) = gens.first() else {
        r.push(Check::new("rank", false, "empty generator list"));
        return Ok(r);
    };
    let chart = first.vec.chart().clone();
    let mut worst = None;
    for (a, ea) in gens.iter().enumerate() {
        for eb in &gens[a..] {
            let v = crate::courant::pairing(ea, eb, Sign::Plus)?;
            if !v.is_zero() && worst.is_none() {
                worst = Some(v.to_string());
            }
        }
    }
    r.push(Check::new(
        "(e_a, e_b)₊ on generators",
        worst.is_none(),
        worst.unwrap_or_else(|| "0".into()),
    ));
    let n = chart.dim() + 1;
    let mut rank_fail = None;
    for p in points.generate(chart.dim()) {
        let rows: Vec<Vector> = gens
            .iter()
            .map(|g| {
                Ok(vector_at(&g.vec, &p)?
                    .into_iter()
                    .chain(vector_at(&g.form, &p)?)
                    .collect())
            })
            .collect::<Result<_>>()?;
        let rk = linalg::rank(&rows);
        if rk != n && rank_fail.is_none() {
            rank_fail = Some(format!("rank {rk} at {}", render_point(&chart, &p)));
        }
    }
    r.push(Check::new(
        "rank = dim M + 1",
        rank_fail.is_none(),
        rank_fail.unwrap_or_else(|| "0".into()),
    ));
    Ok(r)
}

/// The three conditions for `L` to be a Dirac structure, with `P = (Λ,E)`:
/// (i) `D` is closed under the bracket, (ii) `[P+Ω, P+Ω]^φ ≡ 0`,
/// (iii) `[X, P+Ω]^φ ≡ 0` for each generator `X`, all modulo `D`.
///
/// Checking (i) and (iii) on generators suffices: for `f ∈ C∞`,
/// `[fX, Q]^φ − f[X,Q]^φ` is a multiple of `X`.
pub fn dirac_criteria(j: &JacobiStructure, pair: &CharPair) -> Result<CheckReport> {
    j.verify()?;
    if !same_chart(j.chart(), pair.chart()) {
        return Err(Error::ChartMismatch);
    }
    let d = &pair.d;
    let ph = phi(j.chart());
    let q = j.as_ext().add(&pair.omega);
    let total = d.sample_points.len();
    let mut r = CheckReport::new("Dirac criteria");
    if d.mode == Mode::Pointwise {
        r.sampling = Some(d.points.sampling(total));
    }
    for a in 0..d.generators.len() {
        for b in a + 1..d.generators.len() {
            let br = ext_bracket(&d.generators[a], &d.generators[b])?;
            let m = mod_d_reduce(d, &br)?;
            let name = format!("(i) [{}, {}] mod D", d.names[a], d.names[b]);
            r.push(m.check(&name, &br, total));
        }
    }
    let qq = phi_schouten_unchecked(&ph, &q, &q);
    r.push(mod_d_reduce(d, &qq)?.check("(ii) [P+Ω, P+Ω]^φ mod D", &qq, total));
    for (name, x) in d.names.iter().zip(&d.generators) {
        let v = phi_schouten_unchecked(&ph, x, &q);
        let m = mod_d_reduce(d, &v)?;
        let mut c = m.check(&format!("(iii) [{name}, P+Ω]^φ mod D"), &v, total);
        if c.note.is_none() {
            c = c.with_note(format!("unreduced value {v}"));
        }
        r.push(c);
    }
    Ok(r)
}

/// Closure of the generators of `L` under the Courant bracket (aligned mode).
pub fn integrability_check(j: &JacobiStructure, pair: &CharPair) -> Result<CheckReport> {
    let dbl = CourantDouble::new(j)?;
    let gens = pair.l_generators().ok_or_else(|| {
        Error::Refused("integrability check needs an aligned distribution".into())
    })?;
    let mut r = CheckReport::new("Courant closure of L");
    let mut worst = None;
    for a in 0..gens.len() {
        for b in a + 1..gens.len() {
            let br = dbl.bracket(&gens[a], &gens[b])?;
            if let Err(why) = pair.contains_aligned(&br) {
                if worst.is_none() {
                    worst = Some(format!("generators {a},{b}: {why}"));
                }
            }
        }
    }
    r.push(Check::new(
        "⟦e_a, e_b⟧ ∈ Γ(L)",
        worst.is_none(),
        worst.unwrap_or_else(|| "0".into()),
    ));
    Ok(r)
}

/// Result of an admissibility test for a function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Admissibility {
    pub admissible: bool,
    /// The canonical witness `Y_f = Ω^#(d^φ f)` when admissible.
    pub witness: Option<ExtVec>,
    /// Generators `X` with `⟨d^φ f, X⟩ ≠ 0`, with the offending value.
    pub violations: Vec<(String, Poly)>,
}

/// `f` is admissible iff `d^φ f = (δf, f) ∈ Γ(D^⊥)`.
pub fn admissible_check(j: &JacobiStructure, pair: &CharPair, f: &Poly) -> Result<Admissibility> {
    j.verify()?;
    if !same_chart(f.chart(), pair.chart()) {
        return Err(Error::ChartMismatch);
    }
    let df = d_phi_fn(f);
    let violations: Vec<(String, Poly)> = pair
        .d
        .names
        .iter()
        .zip(&pair.d.generators)
        .filter_map(|(n, g)| {
            let v = df.pair(g);
            (!v.is_zero()).then(|| (n.clone(), v))
        })
        .collect();
    let admissible = violations.is_empty();
    Ok(Admissibility {
        admissible,
        witness: admissible.then(|| pair.omega.contract(&df)),
        violations,
    })
}

fn require_admissible(j: &JacobiStructure, pair: &CharPair, f: &Poly) -> Result<ExtVec> {
    let a = admissible_check(j, pair, f)?;
    match a.witness {
        Some(w) => Ok(w),
        None => Err(Error::Inadmissible(format!(
            "{f}: {}",
            a.violations
                .iter()
                .map(|(n, v)| format!("⟨d^φf, {n}⟩ = {v}"))
                .collect::<Vec<_>>()
                .join(", ")
        ))),
    }
}

/// `{f,g}_L = ⟨Y_f, d^φ g⟩ + {f,g}_J` with the canonical witness.
pub fn l_bracket(j: &JacobiStructure, pair: &CharPair, f: &Poly, g: &Poly) -> Result<Poly> {
    let y = require_admissible(j, pair, f)?;
    require_admissible(j, pair, g)?;
    l_bracket_with_witness(j, f, g, &y)
}

/// `⟨Y, d^φ g⟩ + {f,g}_J` for a caller-supplied witness `Y` of `f`.
pub fn l_bracket_with_witness(j: &JacobiStructure, f: &Poly, g: &Poly, y: &ExtVec) -> Result<Poly> {
    let jb = j.bracket(f, g, BracketMode::Bialgebroid)?;
    Ok(d_phi_fn(g).pair(y) + jb)
}

/// `{f,g}_L = ρ^θ(e_f) g` with `e_f = Y_f + d^φ f`.
pub fn l_bracket_rho(j: &JacobiStructure, pair: &CharPair, f: &Poly, g: &Poly) -> Result<Poly> {
    let y = require_admissible(j, pair, f)?;
    require_admissible(j, pair, g)?;
    let dbl = CourantDouble::new(j)?;
    dbl.rho_theta(&DoubleSection::new(y, d_phi_fn(f))?, g)
}

/// `L ∩ A = D`, `ϖ_*(L) = D^⊥` and `ϖ(L)^⊥ = L ∩ A*`, at the sample points.
pub fn characteristic_equations_check(pair: &CharPair) -> Result<CheckReport> {
    let n = pair.chart().dim() + 1;
    let mut r = CheckReport::new("characteristic equations");
    r.sampling = Some(pair.d.points.sampling(pair.d.sample_points.len()));
    let mut fails: [Option<String>; 3] = [None, None, None];
    for p in &pair.d.sample_points {
        let basis = pair.l_basis_at(p)?;
        let xs: Vec<Vector> = basis.iter().map(|b| b.0.clone()).collect();
        let als: Vec<Vector> = basis.iter().map(|b| b.1.clone()).collect();
        let d_vals = pair.d.values_at(p)?;
        let d_perp = pair.d.conormal_at(p)?;
        let at = render_point(pair.chart(), p);

        // combinations of the basis with vanishing form part give L ∩ A
        let transpose = |m: &[Vector]| -> Vec<Vector> {
            (0..n)
                .map(|c| m.iter().map(|row| row[c].clone()).collect())
                .collect()
        };
        let combine = |coeffs: &Vector, rows: &[Vector]| -> Vector {
            (0..n)
                .map(|c| coeffs.iter().zip(rows).map(|(k, row)| k * &row[c]).sum())
                .collect()
        };
        let l_cap_a: Vec<Vector> = linalg::nullspace(&transpose(&als), basis.len())
            .iter()
            .map(|k| combine(k, &xs))
            .collect();
        if !linalg::same_span(&l_cap_a, &d_vals) && fails[0].is_none() {
            fails[0] = Some(at.clone());
        }
        if !linalg::same_span(&als, &d_perp) && fails[1].is_none() {
            fails[1] = Some(at.clone());
        }
        let l_cap_astar: Vec<Vector> = linalg::nullspace(&transpose(&xs), basis.len())
            .iter()
            .map(|k| combine(k, &als))
            .collect();
        let ann = linalg::nullspace(&xs, n);
        if !linalg::same_span(&ann, &l_cap_astar) && fails[2].is_none() {
            fails[2] = Some(at);
        }
    }
    for (name, f) in ["L ∩ A = D", "ϖ_*(L) = D^⊥", "ϖ(L)^⊥ = L ∩ A*"]
        .iter()
        .zip(fails)
    {
        r.push(Check::new(
            *name,
            f.is_none(),
            f.map(|p| format!("fails at {p}"))
                .unwrap_or_else(|| "0".into()),
        ));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::MultiVec;

    fn poly(c: &Arc<Chart>, s: &str) -> Poly {
        Poly::parse(c, s).unwrap()
    }

    fn mv(c: &Arc<Chart>, idx: &[usize], s: &str) -> MultiVec {
        MultiVec::monomial(c, idx, poly(c, s)).unwrap()
    }

    fn contact() -> JacobiStructure {
        let c = Chart::new(&["t", "q", "p"]).unwrap();
        JacobiStructure::new(
            mv(&c, &[1, 2], "1").add(&mv(&c, &[0, 2], "p")),
            mv(&c, &[0], "1"),
        )
        .unwrap()
    }

    #[test]
    fn conormal_aligned() {
        let c = Chart::new(&["t", "q", "p"]).unwrap();
        let Conormal::Aligned { basis } =
            conormal(&SubbundleSpec::aligned(&c, &[1]).unwrap()).unwrap()
        else {
            panic!()
        };
        assert_eq!(basis.len(), 3);
        let Conormal::Aligned { basis } =
            conormal(&SubbundleSpec::aligned(&c, &[]).unwrap()).unwrap()
        else {
            panic!()
        };
        assert_eq!(basis.len(), 4);
        let Conormal::Aligned { basis } =
            conormal(&SubbundleSpec::aligned(&c, &[0, 1, 2]).unwrap()).unwrap()
        else {
            panic!()
        };
        assert_eq!(basis, vec![ExtForm::unit(&c)]);
    }

    #[test]
    fn aligned_mod_d() {
        let j = contact();
        let c = j.chart().clone();
        let d = SubbundleSpec::aligned(&c, &[1]).unwrap();
        let m = mod_d_reduce(&d, &j.lambda().to_ext()).unwrap();
        assert_eq!(m.remainder.unwrap(), mv(&c, &[0, 2], "p").to_ext());
        assert!(
            mod_d_reduce(&d, &mv(&c, &[1, 2], "1").to_ext())
                .unwrap()
                .holds
        );
    }

    #[test]
    fn pointwise_mod_d_rotation() {
        let c = Chart::new(&["x", "y", "z"]).unwrap();
        let rot = mv(&c, &[1], "x").add(&mv(&c, &[0], "-y")).to_ext();
        let d = SubbundleSpec::new(
            &c,
            vec![("R".into(), rot.clone())],
            Some(1),
            Mode::Pointwise,
            Points::Random {
                samples: 6,
                seed: 3,
            },
        )
        .unwrap();
        let p = rot.wedge(&MultiVec::coord(&c, 2).unwrap().to_ext());
        let m = mod_d_reduce(&d, &p).unwrap();
        assert!(m.holds && m.sampled);
        let q = MultiVec::coord(&c, 0)
            .unwrap()
            .to_ext()
            .wedge(&MultiVec::coord(&c, 2).unwrap().to_ext());
        assert!(!mod_d_reduce(&d, &q).unwrap().holds);
    }

    #[test]
    fn rank_drop_is_rejected() {
        let c = Chart::new(&["x", "y"]).unwrap();
        let g = mv(&c, &[0], "x - 1").to_ext();
        let err = SubbundleSpec::new(
            &c,
            vec![("X".into(), g)],
            Some(1),
            Mode::Pointwise,
            Points::Grid { side: 2 },
        )
        .unwrap_err();
        assert!(matches!(
            err,
            Error::RankViolation {
                expected: 1,
                found: 0,
                ..
            }
        ));
    }

    #[test]
    fn isotropy() {
        let j = contact();
        let c = j.chart().clone();
        let null = CharPair::null(SubbundleSpec::aligned(&c, &[1]).unwrap());
        assert!(isotropy_check(&null).unwrap().passed());
        let graph = CharPair::new(SubbundleSpec::aligned(&c, &[]).unwrap(), j.as_ext()).unwrap();
        assert!(isotropy_check(&graph).unwrap().passed());
        let bad = DoubleSection::new(
            MultiVec::coord(&c, 0).unwrap().to_ext(),
            crate::exterior::Form::coord(&c, 0).unwrap().to_ext(),
        )
        .unwrap();
        assert!(!subbundle_isotropy(&[bad], Points::default())
            .unwrap()
            .passed());
    }

    #[test]
    fn criteria_goldens() {
        let j = contact();
        let c = j.chart().clone();
        let null_q = CharPair::null(SubbundleSpec::aligned(&c, &[1]).unwrap());
        assert!(dirac_criteria(&j, &null_q).unwrap().passed());
        let graph = CharPair::new(SubbundleSpec::aligned(&c, &[]).unwrap(), j.as_ext()).unwrap();
        assert!(dirac_criteria(&j, &graph).unwrap().passed());
        assert!(integrability_check(&j, &null_q).unwrap().passed());
        assert!(integrability_check(&j, &graph).unwrap().passed());
    }

    #[test]
    fn courant_closure_detects_non_dirac() {
        let j = contact();
        let c = j.chart().clone();
        let omega = mv(&c, &[0, 1], "1").to_ext();
        let pair = CharPair::new(SubbundleSpec::aligned(&c, &[]).unwrap(), omega).unwrap();
        let mc = j.maurer_cartan_check(&pair.omega).unwrap().passed();
        assert_eq!(integrability_check(&j, &pair).unwrap().passed(), mc);
        assert_eq!(dirac_criteria(&j, &pair).unwrap().passed(), mc);
    }

    #[test]
    fn admissibility() {
        let j = contact();
        let c = j.chart().clone();
        let pair = CharPair::null(SubbundleSpec::aligned(&c, &[1]).unwrap());
        assert!(
            admissible_check(&j, &pair, &poly(&c, "t*p"))
                .unwrap()
                .admissible
        );
        let a = admissible_check(&j, &pair, &poly(&c, "q")).unwrap();
        assert!(!a.admissible);
        assert_eq!(a.violations[0].0, "∂q");
        assert!(
            admissible_check(&j, &pair, &Poly::one(&c))
                .unwrap()
                .admissible
        );
        assert!(matches!(
            l_bracket(&j, &pair, &poly(&c, "q"), &poly(&c, "t")),
            Err(Error::Inadmissible(_))
        ));
    }

    #[test]
    fn l_brackets() {
        let j = contact();
        let c = j.chart().clone();
        let pair = CharPair::null(SubbundleSpec::aligned(&c, &[1]).unwrap());
        let (t, p) = (poly(&c, "t"), poly(&c, "p"));
        assert!(l_bracket(&j, &pair, &t, &p).unwrap().is_zero());
        assert_eq!(
            l_bracket(&j, &pair, &Poly::one(&c), &t).unwrap(),
            Poly::one(&c)
        );
        assert_eq!(
            l_bracket_rho(&j, &pair, &t, &p).unwrap(),
            l_bracket(&j, &pair, &t, &p).unwrap()
        );
    }

    #[test]
    fn characteristic_equations() {
        let j = contact();
        let c = j.chart().clone();
        for pair in [
            CharPair::null(SubbundleSpec::aligned(&c, &[1]).unwrap()),
            CharPair::null(SubbundleSpec::aligned(&c, &[]).unwrap()),
            CharPair::null(SubbundleSpec::aligned(&c, &[0, 1, 2]).unwrap()),
            CharPair::new(SubbundleSpec::aligned(&c, &[2]).unwrap(), j.as_ext()).unwrap(),
        ] {
            assert!(characteristic_equations_check(&pair).unwrap().passed());
        }
    }

    #[test]
    fn pair_equivalence() {
        let j = contact();
        let c = j.chart().clone();
        let d = SubbundleSpec::aligned(&c, &[1]).unwrap();
        let a = CharPair::new(d.clone(), mv(&c, &[1, 2], "t").to_ext()).unwrap();
        let b = CharPair::null(d);
        assert!(a.equivalent(&b).unwrap());
        let e = CharPair::null(SubbundleSpec::aligned(&c, &[2]).unwrap());
        assert!(!a.equivalent(&e).unwrap());
    }
}
