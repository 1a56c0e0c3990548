use std::path::Path;

use super::format::{self, structure_lines, StructureFile};
use super::{BracketArg, CaseArg, Command, Entry, Output};
use crate::courant::CourantDouble;
use crate::dirac::{self, CharPair, SubbundleSpec};
use crate::error::{Error, Result};
use crate::extbundle::{BracketMode, JacobiStructure};
use crate::exterior::ExtVec;
use crate::poly::Poly;
use crate::reduce::{self, ReductionReport, SubmanifoldCase, SubmanifoldSpec};

fn load(path: &Path) -> Result<StructureFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
    format::parse(&text)
}

fn entry(out: &mut Output, key: impl Into<String>, value: impl Into<String>) {
    out.results.push(Entry {
        key: key.into(),
        value: value.into(),
    });
}

fn verified(file: &StructureFile) -> Result<&JacobiStructure> {
    let j = file.require_jacobi()?;
    j.verify()?;
    Ok(j)
}

fn distribution(file: &StructureFile, name: Option<&str>) -> Result<SubbundleSpec> {
    match name {
        Some(n) => file.distribution(n)?.spec(&file.chart),
        None => SubbundleSpec::aligned(&file.chart, &[]),
    }
}

fn omega(file: &StructureFile, wanted: bool) -> Result<ExtVec> {
    if !wanted {
        return Ok(ExtVec::zero(&file.chart, 2));
    }
    file.omega
        .clone()
        .ok_or_else(|| Error::input("missing [omega]"))
}

fn submanifold(file: &StructureFile, wanted: bool) -> Result<SubmanifoldSpec> {
    if !wanted {
        return Ok(SubmanifoldSpec::whole());
    }
    file.submanifold
        .clone()
        .ok_or_else(|| Error::input("missing [submanifold]"))
}

fn reduction_results(out: &mut Output, r: ReductionReport) {
    if let Some(j) = &r.reduced {
        entry(
            out,
            "reduced chart",
            format!("({})", j.chart().names().join(", ")),
        );
        for line in structure_lines(j.lambda(), j.e()) {
            let (k, v) = line.split_once(" = ").expect("rendered entry");
            entry(out, k, v);
        }
    }
    out.passed &= r.passed();
    out.reports.push(r.report);
}

pub(super) fn dispatch(cmd: &Command, out: &mut Output) -> Result<()> {
    match cmd {
        Command::CheckJacobi { file } => {
            let f = load(file)?;
            out.reports.push(f.require_jacobi()?.check().report());
        }
        Command::CheckDirac {
            file,
            distribution: name,
            omega: with_omega,
        } => {
            let f = load(file)?;
            let j = verified(&f)?;
            let pair = CharPair::new(distribution(&f, name.as_deref())?, omega(&f, *with_omega)?)?;
            out.reports.push(dirac::isotropy_check(&pair)?);
            out.reports.push(dirac::dirac_criteria(j, &pair)?);
            if pair.d.aligned_indices().is_some() {
                out.reports.push(dirac::integrability_check(j, &pair)?);
            }
            out.reports
                .push(dirac::characteristic_equations_check(&pair)?);
        }
        Command::Bracket {
            file,
            f: fs,
            g: gs,
            mode,
            distribution: name,
            omega: with_omega,
        } => {
            let file = load(file)?;
            let j = verified(&file)?;
            let f = Poly::parse(&file.chart, fs)?;
            let g = Poly::parse(&file.chart, gs)?;
            let v = match mode {
                BracketArg::CrJ => j.bracket(&f, &g, BracketMode::Direct)?,
                BracketArg::J => j.bracket(&f, &g, BracketMode::Bialgebroid)?,
                BracketArg::L => {
                    let pair = CharPair::new(
                        distribution(&file, name.as_deref())?,
                        omega(&file, *with_omega)?,
                    )?;
                    let crit = dirac::dirac_criteria(j, &pair)?;
                    if !crit.passed() {
                        out.reports.push(crit);
                        return Ok(());
                    }
                    dirac::l_bracket(j, &pair, &f, &g)?
                }
            };
            entry(out, format!("{{{f}, {g}}}"), v.to_string());
        }
        Command::CourantAxioms {
            file,
            samples,
            seed,
        } => {
            let f = load(file)?;
            let j = verified(&f)?;
            out.reports
                .push(CourantDouble::new(j)?.axiom_suite(*samples, *seed));
        }
        Command::Reduce {
            file,
            distribution: name,
            omega: with_omega,
            submanifold: on_n,
        } => {
            let f = load(file)?;
            let j = verified(&f)?;
            let d = distribution(&f, name.as_deref())?;
            let r = if *on_n {
                if *with_omega {
                    return Err(Error::input(
                        "--omega cannot be combined with --submanifold",
                    ));
                }
                reduce::jacobi_reduction(j, &submanifold(&f, true)?, &d)?
            } else {
                reduce::quotient_reduce(j, &CharPair::new(d, omega(&f, *with_omega)?)?)?
            };
            reduction_results(out, r);
        }
        Command::BuildL {
            file,
            distribution: name,
        } => {
            let f = load(file)?;
            let j = verified(&f)?;
            let jq = f
                .quotient
                .as_ref()
                .ok_or_else(|| Error::input("missing [quotient]"))?;
            let d = distribution(&f, name.as_deref())?;
            let pair = reduce::build_l_from_quotient(j, &d, jq)?;
            for line in structure_lines(&pair.omega.pure(), &pair.omega.epart()) {
                let (k, v) = line.split_once(" = ").expect("rendered entry");
                entry(out, format!("omega {k}"), v);
            }
            let null = dirac::mod_d_reduce(&d, &pair.omega)?.holds;
            entry(out, "Ω ≡ 0 (mod D)", if null { "yes" } else { "no" });
            let jm = reduce::jacobi_map_check(j, &d, jq)?.passed();
            entry(
                out,
                "projection is a Jacobi map",
                if jm { "yes" } else { "no" },
            );
            out.reports.push(dirac::dirac_criteria(j, &pair)?);
            let back = reduce::quotient_reduce(j, &pair)?;
            let same = back.reduced.as_ref() == Some(jq);
            let mut rt = crate::report::CheckReport::new("roundtrip");
            rt.push(crate::report::Check::new(
                "quotient of L = [quotient] structure",
                back.passed() && same,
                match &back.reduced {
                    Some(r) if !same => format!("{}", r.as_ext().sub(&jq.as_ext())),
                    Some(_) => "0".into(),
                    None => "reduction failed".into(),
                },
            ));
            out.reports.push(rt);
        }
        Command::SymmetryReduce {
            file,
            fields,
            submanifold: on_n,
        } => {
            let f = load(file)?;
            let j = verified(&f)?;
            let block = f.distribution(fields)?;
            let mut xs = Vec::new();
            for (name, g) in &block.generators {
                if !g.epart().is_zero() {
                    return Err(Error::input(format!(
                        "fundamental field {name} has a nonzero epart"
                    )));
                }
                xs.push((name.clone(), g.pure()));
            }
            let r = reduce::symmetry_reduce(j, &xs, &submanifold(&f, *on_n)?)?;
            reduction_results(out, r);
        }
        Command::CheckSubmanifold { file, case } => {
            let f = load(file)?;
            let j = verified(&f)?;
            let n = submanifold(&f, true)?;
            let case = match case {
                CaseArg::First => SubmanifoldCase::FirstKind,
                CaseArg::Second => SubmanifoldCase::Coisotropic,
            };
            out.reports
                .push(reduce::submanifold_conditions(j, &n, case)?);
        }
    }
    Ok(())
}
