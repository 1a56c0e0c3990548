//! Exact multivariate polynomials over the rationals on a coordinate chart.
//!
//! Every scalar and every coefficient function in the crate is a [`Poly`].
//! Terms are stored in a sorted map keyed by a packed exponent vector, so two
//! polynomials are equal exactly when their term maps are equal.

mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub(crate) use parse::parse_poly_at;
pub use parse::{is_identifier, parse_rational};

/// Exact rational number with arbitrary-precision numerator and denominator.
pub type Rational = num_rational::BigRational;

/// Build a rational from machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Maximum number of chart variables.
pub const MAX_VARS: usize = 8;

const LANE_BITS: u32 = 16;
const LANE_MASK: u128 = 0xffff;

/// Local coordinates: an ordered list of distinct variable names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chart {
    names: Vec<String>,
}

impl Chart {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Arc<Chart>> {
        if names.is_empty() {
            return Err(Error::input("chart must have at least one variable"));
        }
        if names.len() > MAX_VARS {
            return Err(Error::input(format!(
                "chart has {} variables; at most {MAX_VARS} are supported",
                names.len()
            )));
        }
        let mut out: Vec<String> = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref();
            if !is_identifier(n) {
                return Err(Error::input(format!("invalid variable name '{n}'")));
            }
            if out.iter().any(|o| o == n) {
                return Err(Error::input(format!("duplicate variable name '{n}'")));
            }
            out.push(n.to_string());
        }
        Ok(Arc::new(Chart { names: out }))
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i < self.dim() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                dim: self.dim(),
            })
        }
    }

    /// Chart with the listed variable indices removed, keeping order.
    pub fn without(&self, drop: &[usize]) -> Result<Arc<Chart>> {
        let kept: Vec<&String> = self
            .names
            .iter()
            .enumerate()
            .filter(|(i, _)| !drop.contains(i))
            .map(|(_, n)| n)
            .collect();
        Chart::new(&kept)
    }
}

pub(crate) fn same_chart(a: &Arc<Chart>, b: &Arc<Chart>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Packed dense exponent vector, 16 bits per variable.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub(crate) struct Monomial(u128);

impl Monomial {
    pub(crate) const ONE: Monomial = Monomial(0);

    fn var(i: usize) -> Monomial {
        Monomial(1u128 << (LANE_BITS as usize * i))
    }

    pub(crate) fn exp(self, i: usize) -> u32 {
        ((self.0 >> (LANE_BITS as usize * i)) & LANE_MASK) as u32
    }

    fn from_exps(exps: &[u32]) -> Monomial {
        let mut m = 0u128;
        for (i, &e) in exps.iter().enumerate() {
            assert!(
                e as u128 <= LANE_MASK,
                "exponent {e} exceeds supported range"
            );
            m |= (e as u128) << (LANE_BITS as usize * i);
        }
        Monomial(m)
    }

    fn exps(self, dim: usize) -> Vec<u32> {
        (0..dim).map(|i| self.exp(i)).collect()
    }

    fn total_degree(self) -> u32 {
        (0..MAX_VARS).map(|i| self.exp(i)).sum()
    }

    fn mul(self, other: Monomial) -> Monomial {
        for i in 0..MAX_VARS {
            if self.exp(i) + other.exp(i) > LANE_MASK as u32 {
                panic!("exponent overflow in variable {i}");
            }
        }
        Monomial(self.0 + other.0)
    }

    fn lower(self, i: usize) -> Monomial {
        debug_assert!(self.exp(i) > 0);
        Monomial(self.0 - Monomial::var(i).0)
    }
}

/// Multivariate polynomial with rational coefficients over a [`Chart`].
#[derive(Clone)]
pub struct Poly {
    chart: Arc<Chart>,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(chart: &Arc<Chart>) -> Poly {
        Poly {
            chart: chart.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(chart: &Arc<Chart>) -> Poly {
        Poly::constant(chart, Rational::one())
    }

    pub fn constant(chart: &Arc<Chart>, c: Rational) -> Poly {
        let mut p = Poly::zero(chart);
        if !c.is_zero() {
            p.terms.insert(Monomial::ONE, c);
        }
        p
    }

    pub fn int(chart: &Arc<Chart>, c: i64) -> Poly {
        Poly::constant(chart, rat(c, 1))
    }

    /// The coordinate function `x_i`.
    pub fn var(chart: &Arc<Chart>, i: usize) -> Result<Poly> {
        chart.check_index(i)?;
        let mut p = Poly::zero(chart);
        p.terms.insert(Monomial::var(i), Rational::one());
        Ok(p)
    }

    /// Build from `(exponents, coefficient)` pairs; like terms are merged.
    pub fn from_terms<I>(chart: &Arc<Chart>, terms: I) -> Result<Poly>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Poly::zero(chart);
        for (exps, c) in terms {
            if exps.len() != chart.dim() {
                return Err(Error::input(format!(
                    "exponent vector of length {} on chart of dimension {}",
                    exps.len(),
                    chart.dim()
                )));
            }
            p.add_term(Monomial::from_exps(&exps), c);
        }
        Ok(p)
    }

    pub fn parse(chart: &Arc<Chart>, src: &str) -> Result<Poly> {
        parse::parse_poly(chart, src)
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| *m == Monomial::ONE)
    }

    /// Value of the constant term.
    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::ONE)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms as `(exponent vector, coefficient)` in canonical map order.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<u32>, &Rational)> + '_ {
        let dim = self.chart.dim();
        self.terms.iter().map(move |(m, c)| (m.exps(dim), c))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    pub fn depends_on(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.exp(i) > 0)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn assert_chart(&self, other: &Poly) {
        assert!(
            same_chart(&self.chart, &other.chart),
            "polynomial chart mismatch"
        );
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        Ok(self * other)
    }

    fn check_same(&self, other: &Poly) -> Result<()> {
        if same_chart(&self.chart, &other.chart) {
            Ok(())
        } else {
            Err(Error::ChartMismatch)
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.chart);
        }
        Poly {
            chart: self.chart.clone(),
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.chart);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Exact partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> Result<Poly> {
        self.chart.check_index(i)?;
        Ok(self.d(i))
    }

    /// Partial derivative without index validation; `i` must be in range.
    pub(crate) fn d(&self, i: usize) -> Poly {
        let mut out = Poly::zero(&self.chart);
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e > 0 {
                out.add_term(m.lower(i), c * Rational::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    /// Set every listed variable to zero.
    pub fn substitute_zero(&self, vars: &[usize]) -> Result<Poly> {
        for &v in vars {
            self.chart.check_index(v)?;
        }
        Ok(Poly {
            chart: self.chart.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| vars.iter().all(|&v| m.exp(v) == 0))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        })
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.chart.dim() {
            return Err(Error::input(format!(
                "point has {} coordinates, chart has {}",
                point.len(),
                self.chart.dim()
            )));
        }
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, x) in point.iter().enumerate() {
                let e = m.exp(i);
                if e > 0 {
                    v *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += v;
        }
        Ok(total)
    }

    /// Move the polynomial to another chart. `map[i]` is the target index of
    /// source variable `i`; variables mapped to `None` must not occur.
    pub fn rechart(&self, target: &Arc<Chart>, map: &[Option<usize>]) -> Result<Poly> {
        if map.len() != self.chart.dim() {
            return Err(Error::input("variable map length does not match chart"));
        }
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; target.dim()];
            for (i, slot) in map.iter().enumerate() {
                let e = m.exp(i);
                if e == 0 {
                    continue;
                }
                match slot {
                    Some(j) => {
                        target.check_index(*j)?;
                        exps[*j] += e;
                    }
                    None => {
                        return Err(Error::input(format!(
                            "polynomial depends on variable '{}' which has no image",
                            self.chart.name(i)
                        )))
                    }
                }
            }
            out.add_term(Monomial::from_exps(&exps), c.clone());
        }
        Ok(out)
    }

    /// Terms sorted for display: descending total degree, then descending
    /// exponents in variable order.
    fn display_order(&self) -> Vec<(&Monomial, &Rational)> {
        let dim = self.chart.dim();
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            b.total_degree()
                .cmp(&a.total_degree())
                .then_with(|| b.exps(dim).cmp(&a.exps(dim)))
        });
        v
    }
}

impl PartialEq for Poly {
    fn eq(&self, other: &Poly) -> bool {
        same_chart(&self.chart, &other.chart) && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.display_order().into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            for i in 0..self.chart.dim() {
                match m.exp(i) {
                    0 => {}
                    1 => factors.push(self.chart.name(i).to_string()),
                    e => factors.push(format!("{}^{e}", self.chart.name(i))),
                }
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        self.assert_chart(rhs);
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        self.assert_chart(rhs);
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.assert_chart(rhs);
        let mut out = Poly::zero(&self.chart);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(*mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            chart: self.chart.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: &Poly) -> Poly {
                (&self).$f(rhs)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                self.$f(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
