//! Multivector fields and differential forms on a chart.
//!
//! All four flavours (plain / extended, contravariant / covariant) share one
//! engine, [`Alt`]: a map from a bitmask of generators to a coefficient
//! polynomial. For extended values generator 0 is the unit section `e` of the
//! `ℝ` factor (or its dual `ε`) and coordinate `k` is generator `k + 1`; for
//! plain values coordinate `k` is generator `k`. A monomial is the wedge of its
//! generators in increasing order, so an extended bivector is stored as
//! `pure + e∧epart`.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{same_chart, Chart, Poly, Rational};

/// Parity of the number of set bits.
fn parity(x: u32) -> bool {
    x.count_ones() % 2 == 1
}

/// Sign of `ξ_I ∧ ξ_J` after sorting into increasing order (`I ∩ J = ∅`).
fn merge_negative(i: u32, j: u32) -> bool {
    let mut neg = false;
    let mut rest = j;
    while rest != 0 {
        let b = rest.trailing_zeros();
        rest &= rest - 1;
        let above = if b >= 31 {
            0
        } else {
            i & !((1u32 << (b + 1)) - 1)
        };
        neg ^= parity(above);
    }
    neg
}

fn bits(mut m: u32) -> impl Iterator<Item = u32> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros();
            m &= m - 1;
            Some(b)
        }
    })
}

/// Graded alternating algebra over polynomial coefficients.
#[derive(Clone, PartialEq, Eq)]
pub(crate) struct Alt {
    pub(crate) chart: Arc<Chart>,
    pub(crate) ext: bool,
    pub(crate) grade: usize,
    pub(crate) terms: BTreeMap<u32, Poly>,
}

impl Alt {
    pub(crate) fn zero(chart: &Arc<Chart>, ext: bool, grade: usize) -> Alt {
        Alt {
            chart: chart.clone(),
            ext,
            grade,
            terms: BTreeMap::new(),
        }
    }

    pub(crate) fn scalar(p: Poly, ext: bool) -> Alt {
        let mut a = Alt::zero(p.chart(), ext, 0);
        a.insert(0, p);
        a
    }

    pub(crate) fn coord_bit(&self, k: usize) -> u32 {
        (k + self.ext as usize) as u32
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn get(&self, mask: u32) -> Poly {
        self.terms
            .get(&mask)
            .cloned()
            .unwrap_or_else(|| Poly::zero(&self.chart))
    }

    pub(crate) fn insert(&mut self, mask: u32, p: Poly) {
        debug_assert_eq!(mask.count_ones() as usize, self.grade);
        if p.is_zero() {
            self.terms.remove(&mask);
        } else {
            self.terms.insert(mask, p);
        }
    }

    pub(crate) fn add_to(&mut self, mask: u32, p: &Poly) {
        if p.is_zero() {
            return;
        }
        let cur = self.terms.remove(&mask);
        let next = match cur {
            Some(c) => &c + p,
            None => p.clone(),
        };
        if !next.is_zero() {
            self.terms.insert(mask, next);
        }
    }

    pub(crate) fn sub_from(&mut self, mask: u32, p: &Poly) {
        self.add_to(mask, &-p);
    }

    fn compatible(&self, other: &Alt) -> bool {
        self.ext == other.ext && same_chart(&self.chart, &other.chart)
    }

    fn assert_compatible(&self, other: &Alt) {
        assert!(self.compatible(other), "operands live on different charts");
    }

    /// Grade for a sum; a zero operand adopts the other operand's grade.
    fn sum_grade(&self, other: &Alt) -> usize {
        if self.grade == other.grade || other.is_zero() {
            self.grade
        } else if self.is_zero() {
            other.grade
        } else {
            panic!(
                "cannot add fields of grades {} and {}",
                self.grade, other.grade
            )
        }
    }

    pub(crate) fn add(&self, other: &Alt) -> Alt {
        self.assert_compatible(other);
        let mut out = self.clone();
        out.grade = self.sum_grade(other);
        for (m, c) in &other.terms {
            out.add_to(*m, c);
        }
        out
    }

    pub(crate) fn sub(&self, other: &Alt) -> Alt {
        self.assert_compatible(other);
        let mut out = self.clone();
        out.grade = self.sum_grade(other);
        for (m, c) in &other.terms {
            out.sub_from(*m, c);
        }
        out
    }

    pub(crate) fn neg(&self) -> Alt {
        self.map(|c| -c)
    }

    pub(crate) fn map(&self, f: impl Fn(&Poly) -> Poly) -> Alt {
        let mut out = Alt::zero(&self.chart, self.ext, self.grade);
        for (m, c) in &self.terms {
            out.insert(*m, f(c));
        }
        out
    }

    pub(crate) fn scale(&self, p: &Poly) -> Alt {
        self.map(|c| c * p)
    }

    pub(crate) fn scale_rat(&self, r: &Rational) -> Alt {
        self.map(|c| c.scale(r))
    }

    pub(crate) fn wedge(&self, other: &Alt) -> Alt {
        self.assert_compatible(other);
        let mut out = Alt::zero(&self.chart, self.ext, self.grade + other.grade);
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                if i & j != 0 {
                    continue;
                }
                let prod = a * b;
                if merge_negative(*i, *j) {
                    out.sub_from(i | j, &prod);
                } else {
                    out.add_to(i | j, &prod);
                }
            }
        }
        out
    }

    /// Left interior product by a grade-1 element of the dual algebra.
    pub(crate) fn contract(&self, beta: &Alt) -> Alt {
        self.assert_compatible(beta);
        assert_eq!(beta.grade, 1, "contraction needs a grade-1 argument");
        assert!(self.grade >= 1, "cannot contract a grade-0 element");
        let mut out = Alt::zero(&self.chart, self.ext, self.grade - 1);
        for (c_mask, bc) in &beta.terms {
            for (i, xi) in &self.terms {
                if i & c_mask == 0 {
                    continue;
                }
                let prod = bc * xi;
                if parity(i & (c_mask - 1)) {
                    out.sub_from(i ^ c_mask, &prod);
                } else {
                    out.add_to(i ^ c_mask, &prod);
                }
            }
        }
        out
    }

    /// Graded right derivative with respect to generator `c`.
    fn right_derivative(&self, c: u32) -> Alt {
        let cm = 1u32 << c;
        let mut out = Alt::zero(&self.chart, self.ext, self.grade.saturating_sub(1));
        for (i, xi) in &self.terms {
            if i & cm == 0 {
                continue;
            }
            let after = i & !((cm << 1).wrapping_sub(1));
            if parity(after) {
                out.sub_from(i ^ cm, xi);
            } else {
                out.add_to(i ^ cm, xi);
            }
        }
        out
    }

    /// Partial derivative of every coefficient in coordinate `k`.
    pub(crate) fn d_coeff(&self, k: usize) -> Alt {
        self.map(|c| c.d(k))
    }

    /// Schouten bracket; `e` is central and has no coordinate derivative.
    pub(crate) fn schouten(&self, other: &Alt) -> Alt {
        self.assert_compatible(other);
        let (p, q) = (self.grade, other.grade);
        let grade = (p + q).saturating_sub(1);
        let mut out = Alt::zero(&self.chart, self.ext, grade);
        if p + q == 0 {
            return out;
        }
        let neg_swap = (p as i64 - 1) * (q as i64 - 1) % 2 != 0;
        for k in 0..self.chart.dim() {
            let c = self.coord_bit(k);
            if p >= 1 {
                let t = self.right_derivative(c).wedge(&other.d_coeff(k));
                out = out.add(&t);
            }
            if q >= 1 {
                let t = other.right_derivative(c).wedge(&self.d_coeff(k));
                out = if neg_swap { out.add(&t) } else { out.sub(&t) };
            }
        }
        out.grade = grade;
        out
    }

    /// Exterior derivative over the coordinate generators (`dε = 0`).
    pub(crate) fn d(&self) -> Alt {
        let mut out = Alt::zero(&self.chart, self.ext, self.grade + 1);
        for k in 0..self.chart.dim() {
            let mut dx = Alt::zero(&self.chart, self.ext, 1);
            dx.insert(1 << self.coord_bit(k), Poly::one(&self.chart));
            out = out.add(&dx.wedge(&self.d_coeff(k)));
        }
        out
    }

    /// Evaluate on grade-1 dual arguments: `P(a1..ak) = i_ak … i_a1 P`.
    pub(crate) fn eval(&self, args: &[&Alt]) -> Poly {
        assert_eq!(args.len(), self.grade, "wrong number of arguments");
        let mut cur = self.clone();
        for a in args {
            cur = cur.contract(a);
        }
        cur.get(0)
    }

    /// Drop every monomial that contains one of the generators in `mask`.
    pub(crate) fn drop_generators(&self, mask: u32) -> Alt {
        let mut out = Alt::zero(&self.chart, self.ext, self.grade);
        for (m, c) in &self.terms {
            if m & mask == 0 {
                out.insert(*m, c.clone());
            }
        }
        out
    }

    pub(crate) fn basis(chart: &Arc<Chart>, ext: bool, mask: u32, coeff: Poly) -> Alt {
        let mut a = Alt::zero(chart, ext, mask.count_ones() as usize);
        a.insert(mask, coeff);
        a
    }

    /// Generator indices of a mask as sorted list.
    pub(crate) fn mask_bits(mask: u32) -> Vec<u32> {
        bits(mask).collect()
    }

    /// Re-express on another chart, moving coordinate generators with `map`.
    pub(crate) fn rechart(&self, target: &Arc<Chart>, map: &[Option<usize>]) -> Result<Alt> {
        let off = self.ext as u32;
        let mut out = Alt::zero(target, self.ext, self.grade);
        for (m, c) in &self.terms {
            let mut nm = 0u32;
            let mut order = Vec::new();
            for b in bits(*m) {
                let nb = if self.ext && b == 0 {
                    0
                } else {
                    match map[(b - off) as usize] {
                        Some(j) => j as u32 + off,
                        None => {
                            return Err(Error::input(format!(
                                "field has a component along '{}' which has no image",
                                self.chart.name((b - off) as usize)
                            )))
                        }
                    }
                };
                order.push(nb);
                nm |= 1 << nb;
            }
            // sign of the permutation sorting the new generator order
            let mut neg = false;
            for x in 0..order.len() {
                for y in x + 1..order.len() {
                    if order[x] > order[y] {
                        neg = !neg;
                    }
                }
            }
            let nc = c.rechart(target, map)?;
            if neg {
                out.sub_from(nm, &nc);
            } else {
                out.add_to(nm, &nc);
            }
        }
        Ok(out)
    }

    fn symbol(&self, b: u32, covariant: bool) -> String {
        if self.ext && b == 0 {
            return if covariant { "ε".into() } else { "e".into() };
        }
        let name = self.chart.name((b - self.ext as u32) as usize);
        if covariant {
            format!("d{name}")
        } else {
            format!("∂{name}")
        }
    }

    pub(crate) fn render(&self, covariant: bool) -> String {
        if self.grade == 0 {
            return self.get(0).to_string();
        }
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut keys: Vec<(bool, Vec<u32>, u32)> = self
            .terms
            .keys()
            .map(|m| (self.ext && m & 1 == 1, Alt::mask_bits(*m), *m))
            .collect();
        keys.sort();
        let mut out = String::new();
        for (k, (_, bs, m)) in keys.iter().enumerate() {
            let basis: Vec<String> = bs.iter().map(|b| self.symbol(*b, covariant)).collect();
            let basis = basis.join("∧");
            let c = &self.terms[m];
            let (neg, body) = render_coeff(c);
            let piece = match body {
                None => basis,
                Some(b) => format!("{b}*{basis}"),
            };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(&piece);
        }
        out
    }
}

/// Split a coefficient into a sign and a printable factor (`None` for 1).
fn render_coeff(c: &Poly) -> (bool, Option<String>) {
    let neg_c = -c;
    if c.num_terms() == 1 {
        let s = c.to_string();
        if let Some(rest) = s.strip_prefix('-') {
            return (
                true,
                if rest == "1" {
                    None
                } else {
                    Some(rest.to_string())
                },
            );
        }
        return (false, if s == "1" { None } else { Some(s) });
    }
    let s = c.to_string();
    if s.starts_with('-') {
        (true, Some(format!("({neg_c})")))
    } else {
        (false, Some(format!("({s})")))
    }
}

impl fmt::Debug for Alt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alt[{}]({})", self.grade, self.render(false))
    }
}

/// Type-level tag for the four field flavours.
pub trait Kind: Copy + Default + fmt::Debug + Send + Sync + 'static {
    const EXTENDED: bool;
    const COVARIANT: bool;
    type Dual: Kind<Dual = Self>;
}

/// Marker for contravariant kinds (multivector fields).
pub trait VectorKind: Kind {}
/// Marker for covariant kinds (forms).
pub trait FormKind: Kind {}

#[derive(Clone, Copy, Default, Debug, PartialEq, Eq)]
pub struct Vector;
#[derive(Clone, Copy, Default, Debug, PartialEq, Eq)]
pub struct Covector;
#[derive(Clone, Copy, Default, Debug, PartialEq, Eq)]
pub struct ExtVector;
#[derive(Clone, Copy, Default, Debug, PartialEq, Eq)]
pub struct ExtCovector;

impl Kind for Vector {
    const EXTENDED: bool = false;
    const COVARIANT: bool = false;
    type Dual = Covector;
}
impl Kind for Covector {
    const EXTENDED: bool = false;
    const COVARIANT: bool = true;
    type Dual = Vector;
}
impl Kind for ExtVector {
    const EXTENDED: bool = true;
    const COVARIANT: bool = false;
    type Dual = ExtCovector;
}
impl Kind for ExtCovector {
    const EXTENDED: bool = true;
    const COVARIANT: bool = true;
    type Dual = ExtVector;
}
impl VectorKind for Vector {}
impl VectorKind for ExtVector {}
impl FormKind for Covector {}
impl FormKind for ExtCovector {}

/// A homogeneous antisymmetric field of a given [`Kind`].
pub struct Field<K: Kind> {
    pub(crate) alt: Alt,
    _kind: PhantomData<K>,
}

/// Multivector field on the chart.
pub type MultiVec = Field<Vector>;
/// Differential form on the chart.
pub type Form = Field<Covector>;
/// Section of `∧ᵏ(TM×ℝ)`.
pub type ExtVec = Field<ExtVector>;
/// Section of `∧ᵏ(T*M×ℝ)`.
pub type ExtForm = Field<ExtCovector>;

impl<K: Kind> Clone for Field<K> {
    fn clone(&self) -> Self {
        Field::wrap(self.alt.clone())
    }
}

impl<K: Kind> PartialEq for Field<K> {
    fn eq(&self, other: &Self) -> bool {
        self.alt.grade == other.alt.grade
            && same_chart(&self.alt.chart, &other.alt.chart)
            && self.alt.terms == other.alt.terms
    }
}

impl<K: Kind> Eq for Field<K> {}

impl<K: Kind> fmt::Display for Field<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.alt.render(K::COVARIANT))
    }
}

impl<K: Kind> fmt::Debug for Field<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.alt.render(K::COVARIANT))
    }
}

impl<K: Kind> Field<K> {
    pub(crate) fn wrap(alt: Alt) -> Self {
        debug_assert_eq!(alt.ext, K::EXTENDED);
        Field {
            alt,
            _kind: PhantomData,
        }
    }

    pub fn zero(chart: &Arc<Chart>, grade: usize) -> Self {
        Field::wrap(Alt::zero(chart, K::EXTENDED, grade))
    }

    /// Grade-0 field holding `p`.
    pub fn scalar(p: Poly) -> Self {
        Field::wrap(Alt::scalar(p, K::EXTENDED))
    }

    /// The coordinate monomial `∂_{i1}∧…` (or `dx_{i1}∧…`) times `coeff`.
    /// Indices may be unsorted; repeated indices give zero.
    pub fn monomial(chart: &Arc<Chart>, coords: &[usize], coeff: Poly) -> Result<Self> {
        let mut out = Field::zero(chart, coords.len());
        let mut acc = Alt::scalar(coeff, K::EXTENDED);
        for &i in coords {
            chart.check_index(i)?;
            let b = Alt::basis(
                chart,
                K::EXTENDED,
                1 << (i + K::EXTENDED as usize),
                Poly::one(chart),
            );
            acc = acc.wedge(&b);
        }
        acc.grade = coords.len();
        out.alt = acc;
        Ok(out)
    }

    /// Sum of coordinate monomials of a fixed grade.
    pub fn from_components(
        chart: &Arc<Chart>,
        grade: usize,
        comps: impl IntoIterator<Item = (Vec<usize>, Poly)>,
    ) -> Result<Self> {
        let mut out = Field::zero(chart, grade);
        for (idx, c) in comps {
            if idx.len() != grade {
                return Err(Error::input(format!(
                    "component of length {} in a grade-{grade} field",
                    idx.len()
                )));
            }
            out = out.add(&Field::monomial(chart, &idx, c)?);
        }
        Ok(out)
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.alt.chart
    }

    pub fn grade(&self) -> usize {
        self.alt.grade
    }

    pub fn is_zero(&self) -> bool {
        self.alt.is_zero()
    }

    /// Coefficient of the coordinate monomial with the given increasing indices.
    pub fn component(&self, coords: &[usize]) -> Poly {
        let mut m = 0u32;
        for &i in coords {
            m |= 1 << (i + K::EXTENDED as usize);
        }
        if m.count_ones() as usize != coords.len() || coords.windows(2).any(|w| w[0] >= w[1]) {
            return Poly::zero(self.chart());
        }
        self.alt.get(m)
    }

    /// Coordinate components `(increasing indices, coefficient)`; for extended
    /// values only the monomials without `e`.
    pub fn components(&self) -> Vec<(Vec<usize>, Poly)> {
        let off = K::EXTENDED as u32;
        self.alt
            .terms
            .iter()
            .filter(|(m, _)| !K::EXTENDED || *m & 1 == 0)
            .map(|(m, c)| {
                (
                    Alt::mask_bits(*m)
                        .into_iter()
                        .map(|b| (b - off) as usize)
                        .collect(),
                    c.clone(),
                )
            })
            .collect()
    }

    /// Coefficient of a grade-0 field.
    pub fn as_poly(&self) -> Poly {
        assert_eq!(self.grade(), 0, "not a grade-0 field");
        self.alt.get(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        Field::wrap(self.alt.add(&other.alt))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Field::wrap(self.alt.sub(&other.alt))
    }

    pub fn neg(&self) -> Self {
        Field::wrap(self.alt.neg())
    }

    /// Multiply by a function.
    pub fn scale(&self, f: &Poly) -> Self {
        Field::wrap(self.alt.scale(f))
    }

    pub fn scale_rat(&self, r: &Rational) -> Self {
        Field::wrap(self.alt.scale_rat(r))
    }

    pub fn wedge(&self, other: &Self) -> Self {
        Field::wrap(self.alt.wedge(&other.alt))
    }

    pub fn checked_wedge(&self, other: &Self) -> Result<Self> {
        self.check_chart(other.chart())?;
        Ok(self.wedge(other))
    }

    pub(crate) fn check_chart(&self, other: &Arc<Chart>) -> Result<()> {
        if same_chart(self.chart(), other) {
            Ok(())
        } else {
            Err(Error::ChartMismatch)
        }
    }

    /// Interior product `i_β` by a grade-1 dual element. Panics on grade 0.
    pub fn contract(&self, beta: &Field<K::Dual>) -> Self {
        Field::wrap(self.alt.contract(&beta.alt))
    }

    pub fn checked_contract(&self, beta: &Field<K::Dual>) -> Result<Self> {
        self.check_chart(beta.chart())?;
        if beta.grade() != 1 {
            return Err(Error::input("contraction argument must have grade 1"));
        }
        if self.grade() == 0 {
            return Err(Error::input("cannot contract a grade-0 field"));
        }
        Ok(self.contract(beta))
    }

    /// Natural pairing of grade-1 elements.
    pub fn pair(&self, other: &Field<K::Dual>) -> Poly {
        assert!(
            self.grade() == 1 && other.grade() == 1,
            "pairing needs grade 1"
        );
        self.alt.contract(&other.alt).get(0)
    }

    /// `P(a1, …, ak) = i_ak … i_a1 P`.
    pub fn eval(&self, args: &[&Field<K::Dual>]) -> Poly {
        let a: Vec<&Alt> = args.iter().map(|x| &x.alt).collect();
        self.alt.eval(&a)
    }

    /// Partial derivative of each coefficient.
    pub fn d_coeff(&self, k: usize) -> Self {
        Field::wrap(self.alt.d_coeff(k))
    }

    pub fn map_coeffs(&self, f: impl Fn(&Poly) -> Poly) -> Self {
        Field::wrap(self.alt.map(f))
    }

    /// Set the listed coordinates to zero in every coefficient.
    pub fn substitute_zero(&self, vars: &[usize]) -> Result<Self> {
        for &v in vars {
            self.chart().check_index(v)?;
        }
        Ok(self.map_coeffs(|c| c.substitute_zero(vars).expect("indices checked")))
    }

    /// Whether any coefficient depends on coordinate `i`.
    pub fn depends_on(&self, i: usize) -> bool {
        self.alt.terms.values().any(|c| c.depends_on(i))
    }

    /// Drop monomials along any of the listed coordinate directions.
    pub fn drop_coords(&self, coords: &[usize]) -> Self {
        let mut mask = 0u32;
        for &i in coords {
            mask |= 1 << self.alt.coord_bit(i);
        }
        Field::wrap(self.alt.drop_generators(mask))
    }

    /// Move to another chart; `map[i]` is the new index of coordinate `i`.
    pub fn rechart(&self, target: &Arc<Chart>, map: &[Option<usize>]) -> Result<Self> {
        Ok(Field::wrap(self.alt.rechart(target, map)?))
    }

    /// Values of every stored coefficient at a point, keyed by generator mask.
    pub(crate) fn eval_at(&self, point: &[Rational]) -> Result<BTreeMap<u32, Rational>> {
        let mut out = BTreeMap::new();
        for (m, c) in &self.alt.terms {
            out.insert(*m, c.eval(point)?);
        }
        Ok(out)
    }
}

impl<K: VectorKind> Field<K> {
    /// Schouten–Nijenhuis bracket `[P, Q]`.
    pub fn schouten(&self, other: &Self) -> Self {
        Field::wrap(self.alt.schouten(&other.alt))
    }

    pub fn checked_schouten(&self, other: &Self) -> Result<Self> {
        self.check_chart(other.chart())?;
        Ok(self.schouten(other))
    }

    /// Lie derivative of a multivector field, `L_X P = [X, P]`.
    pub fn lie(&self, p: &Self) -> Self {
        self.schouten(p)
    }

    /// The anchor action `X(f)` of a grade-1 field on a function.
    pub fn apply(&self, f: &Poly) -> Poly {
        assert_eq!(self.grade(), 1, "only grade-1 fields act on functions");
        let mut out = Poly::zero(self.chart());
        for k in 0..self.chart().dim() {
            let c = self.alt.get(1 << self.alt.coord_bit(k));
            if !c.is_zero() {
                out += &(&c * &f.d(k));
            }
        }
        out
    }
}

impl<K: FormKind> Field<K> {
    /// Exterior derivative over the coordinates.
    pub fn d(&self) -> Self {
        Field::wrap(self.alt.d())
    }

    /// Differential of a function.
    pub fn differential(f: &Poly) -> Self {
        Field::<K>::scalar(f.clone()).d()
    }

    /// Cartan formula `L_X η = i_X dη + d i_X η`.
    pub fn lie_derivative(x: &Field<K::Dual>, eta: &Self) -> Self {
        let first = Field::wrap(eta.alt.d().contract(&x.alt));
        if eta.grade() == 0 {
            return first;
        }
        first.add(&Field::wrap(eta.alt.contract(&x.alt).d()))
    }
}

impl MultiVec {
    /// Vector field from its coordinate components.
    pub fn vector(chart: &Arc<Chart>, comps: Vec<Poly>) -> Result<MultiVec> {
        if comps.len() != chart.dim() {
            return Err(Error::input(
                "vector field needs one component per coordinate",
            ));
        }
        MultiVec::from_components(
            chart,
            1,
            comps.into_iter().enumerate().map(|(i, c)| (vec![i], c)),
        )
    }

    /// `∂/∂x_i`.
    pub fn coord(chart: &Arc<Chart>, i: usize) -> Result<MultiVec> {
        MultiVec::monomial(chart, &[i], Poly::one(chart))
    }

    /// Embed as the pure part of an extended field.
    pub fn to_ext(&self) -> ExtVec {
        if self.grade() == 0 {
            return ExtVec::scalar(self.as_poly());
        }
        ExtVec::from_parts(self, &MultiVec::zero(self.chart(), self.grade() - 1))
    }

    /// `Λ^#α = i_α Λ`.
    pub fn sharp(&self, alpha: &Form) -> MultiVec {
        self.contract(alpha)
    }
}

impl Form {
    pub fn coord(chart: &Arc<Chart>, i: usize) -> Result<Form> {
        Form::monomial(chart, &[i], Poly::one(chart))
    }

    pub fn to_ext(&self) -> ExtForm {
        if self.grade() == 0 {
            return ExtForm::scalar(self.as_poly());
        }
        ExtForm::from_parts(self, &Form::zero(self.chart(), self.grade() - 1))
    }
}

macro_rules! ext_parts {
    ($ext:ty, $base:ty, $basekind:ty) => {
        impl $ext {
            /// Build `pure + e∧epart`.
            pub fn from_parts(pure: &$base, epart: &$base) -> $ext {
                let chart = pure.chart().clone();
                let grade = pure.grade().max(epart.grade() + 1);
                if !pure.is_zero() && pure.grade() != grade {
                    panic!("extended parts have inconsistent grades");
                }
                let mut alt = Alt::zero(&chart, true, grade);
                for (m, c) in &pure.alt.terms {
                    alt.insert(m << 1, c.clone());
                }
                for (m, c) in &epart.alt.terms {
                    alt.insert((m << 1) | 1, c.clone());
                }
                Field::wrap(alt)
            }

            /// Grade-1 pair `(X, f)`.
            pub fn pair_of(x: &$base, f: &Poly) -> $ext {
                <$ext>::from_parts(x, &<$base>::scalar(f.clone()))
            }

            /// The unit section of the `ℝ` factor.
            pub fn unit(chart: &Arc<Chart>) -> $ext {
                Field::wrap(Alt::basis(chart, true, 1, Poly::one(chart)))
            }

            /// The part without `e`.
            pub fn pure(&self) -> $base {
                let mut alt = Alt::zero(self.chart(), false, self.grade());
                for (m, c) in &self.alt.terms {
                    if m & 1 == 0 {
                        alt.insert(m >> 1, c.clone());
                    }
                }
                Field::<$basekind>::wrap(alt)
            }

            /// The coefficient of `e∧`.
            pub fn epart(&self) -> $base {
                let mut alt = Alt::zero(self.chart(), false, self.grade().saturating_sub(1));
                if self.grade() == 0 {
                    return Field::<$basekind>::wrap(alt);
                }
                for (m, c) in &self.alt.terms {
                    if m & 1 == 1 {
                        alt.insert(m >> 1, c.clone());
                    }
                }
                Field::<$basekind>::wrap(alt)
            }
        }
    };
}

ext_parts!(ExtVec, MultiVec, Vector);
ext_parts!(ExtForm, Form, Covector);
