//! The sectioned structure-file format.
//!
//! ```text
//! # contact structure on R^3
//! [chart]
//! vars = t q p
//!
//! [jacobi]
//! lambda (q,p) = 1
//! lambda (t,p) = p
//! e t = 1
//!
//! [distribution Dq]
//! mode = aligned
//! X (q) = 1
//! ```
//!
//! Sections: `[chart]` (must come first), `[jacobi]`, `[distribution NAME]`
//! (repeatable), `[omega]`, `[submanifold]`, `[quotient]`. Comments run from
//! `#` to the end of the line.
//!
//! * `[jacobi]`, `[omega]`: `lambda (x,y) = expr` and `e x = expr` (or `e (x)`).
//!   A pair may be written in either order; writing both orders is an error.
//! * `[distribution NAME]`: `mode = aligned|pointwise`, optional `rank`,
//!   `samples`, `seed` or `grid`; generator components `G (x) = expr` and the
//!   ℝ-part `G epart = expr`.
//! * `[submanifold]`: `zero = x y` declares `N = {x = y = 0}`.
//! * `[quotient]`: `vars = ...` first, then `lambda`/`e` entries over those variables.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::dirac::{Mode, Points, SubbundleSpec};
use crate::error::{Error, Result};
use crate::extbundle::JacobiStructure;
use crate::exterior::{ExtVec, MultiVec};
use crate::poly::{is_identifier, parse_poly_at, Chart, Poly};
use crate::reduce::SubmanifoldSpec;

/// A named `[distribution]` block.
#[derive(Clone, Debug, PartialEq)]
pub struct DistributionBlock {
    pub name: String,
    pub mode: Mode,
    pub rank: Option<usize>,
    pub points: Points,
    pub generators: Vec<(String, ExtVec)>,
}

impl DistributionBlock {
    pub fn spec(&self, chart: &Arc<Chart>) -> Result<SubbundleSpec> {
        SubbundleSpec::new(
            chart,
            self.generators.clone(),
            self.rank,
            self.mode,
            self.points,
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructureFile {
    pub chart: Arc<Chart>,
    pub jacobi: Option<JacobiStructure>,
    pub distributions: Vec<DistributionBlock>,
    pub omega: Option<ExtVec>,
    pub submanifold: Option<SubmanifoldSpec>,
    pub quotient: Option<JacobiStructure>,
}

impl StructureFile {
    pub fn distribution(&self, name: &str) -> Result<&DistributionBlock> {
        self.distributions
            .iter()
            .find(|d| d.name == name)
            .ok_or_else(|| Error::input(format!("no [distribution {name}] block")))
    }

    pub fn require_jacobi(&self) -> Result<&JacobiStructure> {
        self.jacobi
            .as_ref()
            .ok_or_else(|| Error::input("missing [jacobi]"))
    }
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Accumulates `lambda`/`e` entries of a `[jacobi]`, `[omega]` or `[quotient]` block.
struct PairBuilder {
    chart: Arc<Chart>,
    lambda: BTreeMap<(usize, usize), (Poly, bool)>,
    e: BTreeMap<usize, Poly>,
}

impl PairBuilder {
    fn new(chart: &Arc<Chart>) -> PairBuilder {
        PairBuilder {
            chart: chart.clone(),
            lambda: BTreeMap::new(),
            e: BTreeMap::new(),
        }
    }

    fn entry(&mut self, key: &Key, value: &Value) -> Result<()> {
        match key.head.as_str() {
            "lambda" => {
                let idx = key.indices(&self.chart)?;
                let [a, b] = idx[..] else {
                    return Err(perr(
                        key.line,
                        key.rest_col,
                        "lambda takes a pair of variables",
                    ));
                };
                if a == b {
                    return Err(perr(
                        key.line,
                        key.rest_col,
                        "lambda pair repeats a variable",
                    ));
                }
                let norm = (a.min(b), a.max(b));
                if let Some((_, swapped)) = self.lambda.get(&norm) {
                    let (x, y) = (self.chart.name(norm.0), self.chart.name(norm.1));
                    let msg = if *swapped == (a > b) {
                        format!(
                            "duplicate component ({},{})",
                            self.chart.name(a),
                            self.chart.name(b)
                        )
                    } else if a > b {
                        format!("component ({y},{x}) duplicates ({x},{y})")
                    } else {
                        format!("component ({x},{y}) duplicates ({y},{x})")
                    };
                    return Err(perr(key.line, key.col, msg));
                }
                let p = value.poly(&self.chart)?;
                let p = if a > b { -p } else { p };
                self.lambda.insert(norm, (p, a > b));
            }
            "e" => {
                let idx = key.indices(&self.chart)?;
                let [a] = idx[..] else {
                    return Err(perr(key.line, key.rest_col, "e takes a single variable"));
                };
                if self.e.contains_key(&a) {
                    return Err(perr(
                        key.line,
                        key.col,
                        format!("duplicate component e {}", self.chart.name(a)),
                    ));
                }
                self.e.insert(a, value.poly(&self.chart)?);
            }
            other => return Err(perr(key.line, key.col, format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    fn parts(self) -> Result<(MultiVec, MultiVec)> {
        let l = MultiVec::from_components(
            &self.chart,
            2,
            self.lambda
                .into_iter()
                .map(|((a, b), (p, _))| (vec![a, b], p)),
        )?;
        let e = MultiVec::from_components(
            &self.chart,
            1,
            self.e.into_iter().map(|(a, p)| (vec![a], p)),
        )?;
        Ok((l, e))
    }
}

struct DistBuilder {
    name: String,
    chart: Arc<Chart>,
    mode: Option<Mode>,
    rank: Option<usize>,
    samples: Option<usize>,
    seed: Option<u64>,
    grid: Option<u32>,
    order: Vec<String>,
    comps: BTreeMap<String, (BTreeMap<usize, Poly>, Option<Poly>)>,
    line: usize,
}

impl DistBuilder {
    fn entry(&mut self, key: &Key, value: &Value) -> Result<()> {
        let dup = |what: &str| perr(key.line, key.col, format!("duplicate key '{what}'"));
        match (key.head.as_str(), key.rest.is_empty()) {
            ("mode", true) => {
                if self.mode.is_some() {
                    return Err(dup("mode"));
                }
                self.mode = Some(match value.text.as_str() {
                    "aligned" => Mode::Aligned,
                    "pointwise" => Mode::Pointwise,
                    other => {
                        return Err(perr(
                            value.line,
                            value.col,
                            format!("unknown mode '{other}'"),
                        ))
                    }
                });
            }
            ("rank", true) => {
                if self.rank.is_some() {
                    return Err(dup("rank"));
                }
                self.rank = Some(value.number()?);
            }
            ("samples", true) => {
                if self.samples.is_some() {
                    return Err(dup("samples"));
                }
                self.samples = Some(value.number()?);
            }
            ("seed", true) => {
                if self.seed.is_some() {
                    return Err(dup("seed"));
                }
                self.seed = Some(value.number()?);
            }
            ("grid", true) => {
                if self.grid.is_some() {
                    return Err(dup("grid"));
                }
                self.grid = Some(value.number()?);
            }
            (g, false) if is_identifier(g) => {
                if !self.comps.contains_key(g) {
                    self.order.push(g.to_string());
                }
                let chart = self.chart.clone();
                let entry = self.comps.entry(g.to_string()).or_default();
                if key.rest == "epart" {
                    if entry.1.is_some() {
                        return Err(perr(
                            key.line,
                            key.col,
                            format!("duplicate component {g} epart"),
                        ));
                    }
                    entry.1 = Some(value.poly(&chart)?);
                } else {
                    let idx = key.indices(&chart)?;
                    let [a] = idx[..] else {
                        return Err(perr(
                            key.line,
                            key.rest_col,
                            "generator components take a single variable",
                        ));
                    };
                    if entry.0.contains_key(&a) {
                        return Err(perr(
                            key.line,
                            key.col,
                            format!("duplicate component {g} ({})", chart.name(a)),
                        ));
                    }
                    entry.0.insert(a, value.poly(&chart)?);
                }
            }
            (other, _) => return Err(perr(key.line, key.col, format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    fn finish(mut self) -> Result<DistributionBlock> {
        if self.grid.is_some() && (self.samples.is_some() || self.seed.is_some()) {
            return Err(perr(
                self.line,
                1,
                "grid cannot be combined with samples or seed",
            ));
        }
        let points = match self.grid {
            Some(side) => Points::Grid { side },
            None => {
                let Points::Random { samples, seed } = Points::default() else {
                    unreachable!()
                };
                Points::Random {
                    samples: self.samples.unwrap_or(samples),
                    seed: self.seed.unwrap_or(seed),
                }
            }
        };
        let mut generators = Vec::new();
        for g in &self.order {
            let (comps, epart) = self.comps.remove(g).expect("recorded");
            let pure = MultiVec::from_components(
                &self.chart,
                1,
                comps.into_iter().map(|(a, p)| (vec![a], p)),
            )?;
            let epart = MultiVec::scalar(epart.unwrap_or_else(|| Poly::zero(&self.chart)));
            generators.push((g.clone(), ExtVec::from_parts(&pure, &epart)));
        }
        Ok(DistributionBlock {
            name: self.name,
            mode: self.mode.unwrap_or(Mode::Aligned),
            rank: self.rank,
            points,
            generators,
        })
    }
}

/// Left-hand side of an entry: a word followed by an optional argument.
struct Key {
    head: String,
    rest: String,
    line: usize,
    col: usize,
    rest_col: usize,
}

impl Key {
    /// Variables named by `x`, `(x)` or `(x,y)`.
    fn indices(&self, chart: &Chart) -> Result<Vec<usize>> {
        let inner = match self.rest.strip_prefix('(') {
            Some(r) => r
                .strip_suffix(')')
                .ok_or_else(|| perr(self.line, self.rest_col, "unclosed '('"))?,
            None => self.rest.as_str(),
        };
        let mut out = Vec::new();
        let mut offset = self.rest_col + usize::from(self.rest.starts_with('('));
        for part in inner.split(',') {
            let name = part.trim();
            let col = offset + part.len() - part.trim_start().len();
            if name.is_empty() {
                return Err(perr(self.line, col, "missing variable"));
            }
            out.push(
                chart
                    .index_of(name)
                    .ok_or_else(|| perr(self.line, col, format!("undeclared variable '{name}'")))?,
            );
            offset += part.chars().count() + 1;
        }
        Ok(out)
    }
}

struct Value {
    text: String,
    line: usize,
    col: usize,
}

impl Value {
    fn poly(&self, chart: &Arc<Chart>) -> Result<Poly> {
        parse_poly_at(chart, &self.text, self.line, self.col)
    }

    fn number<T: std::str::FromStr>(&self) -> Result<T> {
        self.text.parse().map_err(|_| {
            perr(
                self.line,
                self.col,
                format!("expected a nonnegative integer, found '{}'", self.text),
            )
        })
    }

    fn names(&self, chart: &Chart) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        let mut offset = 0;
        for word in self.text.split_whitespace() {
            let at = offset + self.text[offset..].find(word).expect("word of the text");
            offset = at + word.len();
            let col = self.col + self.text[..at].chars().count();
            out.push(
                chart
                    .index_of(word)
                    .ok_or_else(|| perr(self.line, col, format!("undeclared variable '{word}'")))?,
            );
        }
        Ok(out)
    }
}

enum Section {
    None,
    Chart,
    Jacobi(PairBuilder),
    Omega(PairBuilder),
    Submanifold(Option<SubmanifoldSpec>),
    Quotient(Option<PairBuilder>),
    Distribution(DistBuilder),
}

fn parse_chart_names(value: &Value) -> Result<Arc<Chart>> {
    let names: Vec<&str> = value.text.split_whitespace().collect();
    Chart::new(&names).map_err(|e| match e {
        Error::Input(m) => perr(value.line, value.col, m),
        other => other,
    })
}

struct Builder {
    chart: Option<Arc<Chart>>,
    jacobi: Option<JacobiStructure>,
    distributions: Vec<DistributionBlock>,
    omega: Option<ExtVec>,
    submanifold: Option<SubmanifoldSpec>,
    quotient: Option<JacobiStructure>,
    seen: Vec<String>,
}

impl Builder {
    fn close(&mut self, s: Section, line: usize) -> Result<()> {
        match s {
            Section::None | Section::Chart => {}
            Section::Jacobi(b) => {
                let (l, e) = b.parts()?;
                self.jacobi = Some(JacobiStructure::new(l, e)?);
            }
            Section::Omega(b) => {
                let (l, e) = b.parts()?;
                self.omega = Some(ExtVec::from_parts(&l, &e));
            }
            Section::Submanifold(n) => self.submanifold = Some(n.unwrap_or_default()),
            Section::Quotient(b) => {
                let b = b.ok_or_else(|| perr(line, 1, "[quotient] needs a vars entry"))?;
                let (l, e) = b.parts()?;
                self.quotient = Some(JacobiStructure::new(l, e)?);
            }
            Section::Distribution(b) => self.distributions.push(b.finish()?),
        }
        Ok(())
    }

    fn chart(&self, line: usize) -> Result<&Arc<Chart>> {
        self.chart
            .as_ref()
            .ok_or_else(|| perr(line, 1, "missing [chart]"))
    }
}

/// Parse a structure file.
pub fn parse(text: &str) -> Result<StructureFile> {
    let mut b = Builder {
        chart: None,
        jacobi: None,
        distributions: Vec::new(),
        omega: None,
        submanifold: None,
        quotient: None,
        seen: Vec::new(),
    };
    let mut section = Section::None;
    let mut section_line = 0;
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let content: String = raw.chars().take_while(|&c| c != '#').collect();
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let lead = content.chars().count() - content.trim_start().chars().count();
        let col0 = lead + 1;
        if let Some(inner) = trimmed.strip_prefix('[') {
            let inner = inner
                .strip_suffix(']')
                .ok_or_else(|| perr(line, col0, "section header must end with ']'"))?;
            let words: Vec<&str> = inner.split_whitespace().collect();
            let next = match words.as_slice() {
                ["chart"] => Section::Chart,
                [w, ..] if b.chart.is_none() => {
                    return Err(perr(line, col0, format!("missing [chart] before [{w}]")))
                }
                ["jacobi"] => Section::Jacobi(PairBuilder::new(b.chart(line)?)),
                ["omega"] => Section::Omega(PairBuilder::new(b.chart(line)?)),
                ["submanifold"] => Section::Submanifold(None),
                ["quotient"] => Section::Quotient(None),
                ["distribution", name] if is_identifier(name) => {
                    Section::Distribution(DistBuilder {
                        name: name.to_string(),
                        chart: b.chart(line)?.clone(),
                        mode: None,
                        rank: None,
                        samples: None,
                        seed: None,
                        grid: None,
                        order: Vec::new(),
                        comps: BTreeMap::new(),
                        line,
                    })
                }
                _ => return Err(perr(line, col0, format!("unknown section [{inner}]"))),
            };
            let id = words.join(" ");
            if b.seen.contains(&id) {
                return Err(perr(line, col0, format!("duplicate section [{id}]")));
            }
            b.seen.push(id);
            let prev = std::mem::replace(&mut section, next);
            b.close(prev, section_line)?;
            section_line = line;
            continue;
        }
        let chars: Vec<char> = content.chars().collect();
        let eq = chars
            .iter()
            .position(|&c| c == '=')
            .ok_or_else(|| perr(line, col0, "expected 'key = value'"))?;
        let key_text: String = chars[..eq].iter().collect();
        let value_text: String = chars[eq + 1..].iter().collect();
        let key_trim = key_text.trim();
        let split = key_trim
            .find(|c: char| c.is_whitespace() || c == '(')
            .unwrap_or(key_trim.len());
        let head = key_trim[..split].to_string();
        let rest_raw = &key_trim[split..];
        let rest = rest_raw.trim().to_string();
        let rest_col = col0
            + key_trim[..split].chars().count()
            + (rest_raw.chars().count() - rest_raw.trim_start().chars().count());
        let key = Key {
            head,
            rest,
            line,
            col: col0,
            rest_col,
        };
        let vlead = value_text.chars().count() - value_text.trim_start().chars().count();
        let value = Value {
            text: value_text.trim().to_string(),
            line,
            col: eq + 2 + vlead,
        };
        if key.head.is_empty() {
            return Err(perr(line, col0, "missing key"));
        }
        match &mut section {
            Section::None => return Err(perr(line, col0, "missing [chart]")),
            Section::Chart => {
                if key.head != "vars" || !key.rest.is_empty() {
                    return Err(perr(line, col0, format!("unknown key '{}'", key_trim)));
                }
                if b.chart.is_some() {
                    return Err(perr(line, col0, "duplicate key 'vars'"));
                }
                b.chart = Some(parse_chart_names(&value)?);
            }
            Section::Jacobi(p) | Section::Omega(p) => p.entry(&key, &value)?,
            Section::Quotient(q) => match q {
                None if key.head == "vars" && key.rest.is_empty() => {
                    *q = Some(PairBuilder::new(&parse_chart_names(&value)?));
                }
                None => return Err(perr(line, col0, "[quotient] must start with a vars entry")),
                Some(_) if key.head == "vars" => {
                    return Err(perr(line, col0, "duplicate key 'vars'"))
                }
                Some(p) => p.entry(&key, &value)?,
            },
            Section::Submanifold(n) => {
                if key.head != "zero" || !key.rest.is_empty() {
                    return Err(perr(line, col0, format!("unknown key '{}'", key_trim)));
                }
                if n.is_some() {
                    return Err(perr(line, col0, "duplicate key 'zero'"));
                }
                let chart = b.chart(line)?;
                let idx = value.names(chart)?;
                *n = Some(SubmanifoldSpec::new(chart, &idx).map_err(|e| match e {
                    Error::Input(m) => perr(line, value.col, m),
                    other => other,
                })?);
            }
            Section::Distribution(d) => d.entry(&key, &value)?,
        }
    }
    b.close(section, section_line)?;
    let chart = b
        .chart
        .ok_or_else(|| perr(last_line.max(1), 1, "missing [chart]"))?;
    Ok(StructureFile {
        chart,
        jacobi: b.jacobi,
        distributions: b.distributions,
        omega: b.omega,
        submanifold: b.submanifold,
        quotient: b.quotient,
    })
}

/// `lambda (x,y) = …` and `e x = …` lines for a pair `(Λ, E)`.
pub fn structure_lines(lambda: &MultiVec, e: &MultiVec) -> Vec<String> {
    let chart = lambda.chart();
    let mut out = Vec::new();
    for (idx, c) in lambda.components() {
        out.push(format!(
            "lambda ({},{}) = {c}",
            chart.name(idx[0]),
            chart.name(idx[1])
        ));
    }
    for (idx, c) in e.components() {
        out.push(format!("e {} = {c}", chart.name(idx[0])));
    }
    out
}

impl fmt::Display for StructureFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[chart]")?;
        writeln!(f, "vars = {}", self.chart.names().join(" "))?;
        if let Some(j) = &self.jacobi {
            writeln!(f, "\n[jacobi]")?;
            for l in structure_lines(j.lambda(), j.e()) {
                writeln!(f, "{l}")?;
            }
        }
        for d in &self.distributions {
            writeln!(f, "\n[distribution {}]", d.name)?;
            let mode = match d.mode {
                Mode::Aligned => "aligned",
                Mode::Pointwise => "pointwise",
            };
            writeln!(f, "mode = {mode}")?;
            if let Some(r) = d.rank {
                writeln!(f, "rank = {r}")?;
            }
            match d.points {
                Points::Random { samples, seed } => {
                    writeln!(f, "samples = {samples}\nseed = {seed}")?
                }
                Points::Grid { side } => writeln!(f, "grid = {side}")?,
            }
            for (name, g) in &d.generators {
                let pure = g.pure();
                for (idx, c) in pure.components() {
                    writeln!(f, "{name} ({}) = {c}", self.chart.name(idx[0]))?;
                }
                let ep = g.epart().as_poly();
                if !ep.is_zero() || pure.is_zero() {
                    writeln!(f, "{name} epart = {ep}")?;
                }
            }
        }
        if let Some(o) = &self.omega {
            writeln!(f, "\n[omega]")?;
            for l in structure_lines(&o.pure(), &o.epart()) {
                writeln!(f, "{l}")?;
            }
        }
        if let Some(n) = &self.submanifold {
            writeln!(f, "\n[submanifold]")?;
            let names: Vec<&str> = n
                .constraints()
                .iter()
                .map(|&i| self.chart.name(i))
                .collect();
            writeln!(f, "zero = {}", names.join(" "))?;
        }
        if let Some(q) = &self.quotient {
            writeln!(f, "\n[quotient]")?;
            writeln!(f, "vars = {}", q.chart().names().join(" "))?;
            for l in structure_lines(q.lambda(), q.e()) {
                writeln!(f, "{l}")?;
            }
        }
        Ok(())
    }
}
