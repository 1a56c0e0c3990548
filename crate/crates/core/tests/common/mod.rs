#![allow(dead_code)]

use std::sync::Arc;

use jacobi_dirac::cli::{parse, StructureFile};
use jacobi_dirac::{Chart, JacobiStructure, MultiVec, Poly};

pub fn fixture(name: &str) -> StructureFile {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    parse(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

pub fn poly(c: &Arc<Chart>, s: &str) -> Poly {
    Poly::parse(c, s).unwrap()
}

pub fn mv(c: &Arc<Chart>, idx: &[usize], s: &str) -> MultiVec {
    MultiVec::monomial(c, idx, poly(c, s)).unwrap()
}

pub fn contact3() -> JacobiStructure {
    fixture("contact.jd").jacobi.unwrap()
}

pub fn contact5() -> JacobiStructure {
    fixture("contact5.jd").jacobi.unwrap()
}

pub fn poisson2() -> JacobiStructure {
    fixture("poisson2.jd").jacobi.unwrap()
}
