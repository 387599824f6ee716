//! JSON input files and algebra emission.
//!
//! An input file has `vertices`, `arrows` (`{name, from, to, degree}`),
//! `relations` (lists of `{coeff, path}` with arrow names in traversal
//! order) and optionally `potential` (`{coeff, cycle}`). Emitted algebras
//! add `basis`, `idempotents` and `structure_constants`
//! (`[i, j, [[k, c], ...]]` for the nonzero products).

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{BasisElem, FDAlgebra};
use crate::error::{Error, Result};
use crate::field::Fp;
use crate::quiver::{Arrow, PathPoly, Quiver, QuiverPresentation, QuiverWithPotential};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArrow {
    name: String,
    from: String,
    to: String,
    #[serde(default)]
    degree: i32,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    coeff: i64,
    path: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCycle {
    coeff: i64,
    cycle: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBasis {
    label: String,
    src: String,
    tgt: String,
    degree: i32,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    #[serde(default)]
    field: Option<u32>,
    vertices: Vec<String>,
    #[serde(default)]
    arrows: Vec<RawArrow>,
    #[serde(default)]
    relations: Vec<Vec<RawTerm>>,
    #[serde(default)]
    potential: Option<Vec<RawCycle>>,
    #[serde(default)]
    basis: Option<Vec<RawBasis>>,
    #[serde(default)]
    idempotents: Option<Vec<usize>>,
    #[serde(default)]
    structure_constants: Option<Vec<(usize, usize, Vec<(usize, i64)>)>>,
}

/// A parsed input file.
#[derive(Clone, Debug)]
pub enum Parsed {
    Presentation(QuiverPresentation),
    Potential(QuiverWithPotential),
    Algebra(FDAlgebra),
}

/// Line and column (1-based) of a byte offset.
fn position(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn error_at(src: &str, offset: Option<usize>, msg: String) -> Error {
    let (line, column) = offset.map_or((0, 0), |o| position(src, o));
    Error::Parse { line, column, msg }
}

fn find_quoted(src: &str, s: &str) -> Option<usize> {
    src.find(&format!("\"{s}\""))
}

/// Offset of the `k`-th element of the top-level array under `key`.
fn nth_element(src: &str, key: &str, k: usize) -> Option<usize> {
    let start = find_quoted(src, key)?;
    let open = start + src[start..].find('[')?;
    let bytes = src.as_bytes();
    let (mut depth, mut count, mut in_str, mut escaped) = (0usize, 0usize, false, false);
    for (i, &b) in bytes.iter().enumerate().skip(open) {
        if in_str {
            match b {
                _ if escaped => escaped = false,
                b'\\' => escaped = true,
                b'"' => in_str = false,
                _ => {}
            }
            continue;
        }
        match b {
            b'"' => in_str = true,
            b'[' | b'{' => {
                depth += 1;
                if depth == 2 {
                    if count == k {
                        return Some(i);
                    }
                    count += 1;
                }
            }
            b']' | b'}' => {
                depth -= 1;
                if depth == 0 {
                    return None;
                }
            }
            _ => {}
        }
    }
    None
}

pub fn parse_input(src: &str, field: Fp) -> Result<Parsed> {
    let raw: RawFile = serde_json::from_str(src).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    if let Some(p) = raw.field {
        if p != field.modulus() {
            return Err(error_at(
                src,
                find_quoted(src, "field"),
                format!("file is over F_{p} but the run uses F_{}", field.modulus()),
            ));
        }
    }
    let vertex = |name: &str| -> Result<usize> {
        raw.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| error_at(src, find_quoted(src, name), format!("unknown vertex '{name}'")))
    };
    let mut arrows = Vec::new();
    for a in &raw.arrows {
        arrows.push(Arrow { name: a.name.clone(), src: vertex(&a.from)?, tgt: vertex(&a.to)?, degree: a.degree });
    }
    let quiver = Quiver::new(raw.vertices.clone(), arrows)
        .map_err(|e| error_at(src, find_quoted(src, "arrows"), e.to_string()))?;
    let arrow = |name: &str| -> Result<usize> {
        quiver
            .arrow_index(name)
            .ok_or_else(|| error_at(src, find_quoted(src, name), format!("unknown arrow '{name}'")))
    };
    let coeff = |c: i64| field.from_i64(c);

    if let Some(basis) = &raw.basis {
        let elems = basis
            .iter()
            .map(|b| Ok(BasisElem { label: b.label.clone(), src: vertex(&b.src)?, tgt: vertex(&b.tgt)?, degree: b.degree }))
            .collect::<Result<Vec<_>>>()?;
        let dim = elems.len();
        let mut mult = vec![Vec::new(); dim * dim];
        for (k, (i, j, terms)) in raw.structure_constants.iter().flatten().enumerate() {
            if *i >= dim || *j >= dim || terms.iter().any(|t| t.0 >= dim) {
                return Err(error_at(src, nth_element(src, "structure_constants", k), "basis index out of range".into()));
            }
            let mut v: Vec<(usize, u32)> = terms.iter().map(|&(b, c)| (b, coeff(c))).filter(|t| t.1 != 0).collect();
            v.sort();
            mult[i * dim + j] = v;
        }
        let idem = raw.idempotents.clone().ok_or_else(|| error_at(src, find_quoted(src, "basis"), "missing idempotents".into()))?;
        let alg = FDAlgebra::new(field, raw.vertices.clone(), elems, idem, mult)
            .map_err(|e| error_at(src, find_quoted(src, "structure_constants"), e.to_string()))?;
        return Ok(Parsed::Algebra(alg));
    }

    let mut relations = Vec::new();
    for (k, rel) in raw.relations.iter().enumerate() {
        let poly: PathPoly =
            rel.iter().map(|t| Ok((coeff(t.coeff), t.path.iter().map(|a| arrow(a)).collect::<Result<Vec<_>>>()?))).collect::<Result<_>>()?;
        // Validate one relation at a time so the error points at it.
        QuiverPresentation::new(field, quiver.clone(), vec![poly.clone()])
            .map_err(|e| error_at(src, nth_element(src, "relations", k), e.to_string()))?;
        relations.push(poly);
    }
    if let Some(pot) = &raw.potential {
        if !relations.is_empty() {
            return Err(error_at(src, find_quoted(src, "potential"), "give either relations or a potential".into()));
        }
        let mut w = Vec::new();
        for (k, t) in pot.iter().enumerate() {
            let cycle = t.cycle.iter().map(|a| arrow(a)).collect::<Result<Vec<_>>>()?;
            QuiverWithPotential::new(field, quiver.clone(), vec![(coeff(t.coeff), cycle.clone())])
                .map_err(|e| error_at(src, nth_element(src, "potential", k), e.to_string()))?;
            w.push((coeff(t.coeff), cycle));
        }
        return Ok(Parsed::Potential(QuiverWithPotential::new(field, quiver, w)?));
    }
    Ok(Parsed::Presentation(QuiverPresentation::new(field, quiver, relations)?))
}

pub fn read_input(path: &std::path::Path, field: Fp) -> Result<Parsed> {
    let src = std::fs::read_to_string(path)?;
    parse_input(&src, field)
}

/// The input schema for an algebra: its generators as arrows, plus the
/// basis and structure constants that determine it.
pub fn emit_algebra(alg: &FDAlgebra) -> Value {
    let f = alg.field();
    let names = alg.vertex_names();
    let arrows: Vec<Value> = alg
        .generators()
        .iter()
        .map(|&g| {
            let e = alg.elem(g);
            json!({ "name": e.label, "from": names[e.src], "to": names[e.tgt], "degree": e.degree })
        })
        .collect();
    let basis: Vec<RawBasis> = alg
        .basis()
        .iter()
        .map(|b| RawBasis { label: b.label.clone(), src: names[b.src].clone(), tgt: names[b.tgt].clone(), degree: b.degree })
        .collect();
    let dim = alg.dim();
    let mut sc = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            let v = alg.mul(i, j);
            if !v.is_empty() {
                let terms: Vec<(usize, i64)> = v.iter().map(|&(k, c)| (k, f.to_signed(c))).collect();
                sc.push(json!([i, j, terms]));
            }
        }
    }
    json!({
        "field": f.modulus(),
        "vertices": names,
        "arrows": arrows,
        "relations": [],
        "basis": basis,
        "idempotents": alg.idempotents(),
        "structure_constants": sc,
    })
}
