//! Quivers, paths and relations.
//!
//! Paths are stored in traversal order: `[a, b]` means "first `a`, then
//! `b`", and the product `p * q` of paths traverses `p` then `q`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Fp;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
    pub degree: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
}

/// Linear combination of paths (each a list of arrow indices).
pub type PathPoly = Vec<(u32, Vec<usize>)>;

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Self> {
        let mut seen = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if seen.insert(v.clone(), i).is_some() {
                return Err(Error::Validation(format!("duplicate vertex '{v}'")));
            }
        }
        let mut names = BTreeMap::new();
        for a in &arrows {
            if a.src >= vertices.len() || a.tgt >= vertices.len() {
                return Err(Error::Validation(format!("arrow '{}' has an undeclared endpoint", a.name)));
            }
            if a.degree < 0 {
                return Err(Error::Validation(format!("arrow '{}' has negative degree", a.name)));
            }
            if names.insert(a.name.clone(), ()).is_some() {
                return Err(Error::Validation(format!("duplicate arrow '{}'", a.name)));
            }
        }
        Ok(Quiver { vertices, arrows })
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    /// Source and target of a nonempty path, or `None` if the arrows do not
    /// compose.
    pub fn path_ends(&self, path: &[usize]) -> Option<(usize, usize)> {
        let first = self.arrows.get(*path.first()?)?;
        let mut cur = first.tgt;
        for &a in &path[1..] {
            let arr = self.arrows.get(a)?;
            if arr.src != cur {
                return None;
            }
            cur = arr.tgt;
        }
        Some((first.src, cur))
    }

    pub fn path_degree(&self, path: &[usize]) -> i32 {
        path.iter().map(|&a| self.arrows[a].degree).sum()
    }

    pub fn path_label(&self, path: &[usize]) -> String {
        path.iter().map(|&a| self.arrows[a].name.as_str()).collect::<Vec<_>>().join("*")
    }

    /// True if the underlying graph has an oriented cycle.
    pub fn has_oriented_cycle(&self) -> bool {
        let n = self.num_vertices();
        let mut indeg = vec![0usize; n];
        for a in &self.arrows {
            indeg[a.tgt] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for a in self.arrows.iter().filter(|a| a.src == v) {
                indeg[a.tgt] -= 1;
                if indeg[a.tgt] == 0 {
                    stack.push(a.tgt);
                }
            }
        }
        seen < n
    }
}

/// Quiver with admissible relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverPresentation {
    pub field: Fp,
    pub quiver: Quiver,
    pub relations: Vec<PathPoly>,
}

impl QuiverPresentation {
    pub fn new(field: Fp, quiver: Quiver, relations: Vec<PathPoly>) -> Result<Self> {
        let mut cleaned = Vec::new();
        for rel in relations {
            let rel = normalize_poly(field, rel);
            if rel.is_empty() {
                continue;
            }
            check_relation(&quiver, &rel)?;
            cleaned.push(rel);
        }
        Ok(QuiverPresentation { field, quiver, relations: cleaned })
    }

    pub fn relation_ends(&self, r: usize) -> (usize, usize) {
        self.quiver.path_ends(&self.relations[r][0].1).expect("validated relation")
    }

    pub fn relation_degree(&self, r: usize) -> i32 {
        self.quiver.path_degree(&self.relations[r][0].1)
    }

    pub fn relation_label(&self, r: usize) -> String {
        let f = self.field;
        self.relations[r]
            .iter()
            .map(|(c, p)| format!("{}{}", f.to_signed(*c), self.quiver.path_label(p)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Merge equal paths and drop zero coefficients.
pub fn normalize_poly(field: Fp, poly: PathPoly) -> PathPoly {
    let mut acc: BTreeMap<Vec<usize>, u32> = BTreeMap::new();
    for (c, p) in poly {
        let e = acc.entry(p).or_insert(0);
        *e = field.add(*e, c);
    }
    acc.into_iter().filter(|(_, c)| *c != 0).map(|(p, c)| (c, p)).collect()
}

fn check_relation(q: &Quiver, rel: &PathPoly) -> Result<()> {
    let mut ends = None;
    let mut degree = None;
    for (_, path) in rel {
        if path.len() < 2 {
            return Err(Error::NonAdmissible(format!(
                "relation term '{}' has length {} < 2",
                q.path_label(path),
                path.len()
            )));
        }
        let e = q.path_ends(path).ok_or_else(|| {
            Error::Validation(format!("'{}' is not a path", q.path_label(path)))
        })?;
        let deg = q.path_degree(path);
        if *ends.get_or_insert(e) != e {
            return Err(Error::InhomogeneousRelation(format!(
                "paths in relation are not parallel ('{}')",
                q.path_label(path)
            )));
        }
        if *degree.get_or_insert(deg) != deg {
            return Err(Error::InhomogeneousRelation(format!(
                "paths in relation have different degrees ('{}')",
                q.path_label(path)
            )));
        }
    }
    Ok(())
}

/// Quiver with a potential: a linear combination of oriented cycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverWithPotential {
    pub field: Fp,
    pub quiver: Quiver,
    pub potential: PathPoly,
}

impl QuiverWithPotential {
    /// Cycles are stored in their lexicographically smallest rotation, so
    /// cyclically equivalent potentials compare equal.
    pub fn new(field: Fp, quiver: Quiver, potential: PathPoly) -> Result<Self> {
        let potential = normalize_poly(field, potential.into_iter().map(|(c, p)| (c, canonical_rotation(&p))).collect());
        for (_, cycle) in &potential {
            match quiver.path_ends(cycle) {
                Some((s, t)) if s == t => {}
                _ => {
                    return Err(Error::Validation(format!(
                        "'{}' is not an oriented cycle",
                        quiver.path_label(cycle)
                    )))
                }
            }
        }
        Ok(QuiverWithPotential { field, quiver, potential })
    }

    /// Cyclic derivative: for each occurrence of `a` in a cycle, rotate
    /// the cycle to start at that occurrence and delete it. The result is
    /// a combination of paths from `t(a)` to `s(a)`.
    pub fn cyclic_derivative(&self, a: usize) -> PathPoly {
        let mut out = Vec::new();
        for (c, cycle) in &self.potential {
            for (i, &b) in cycle.iter().enumerate() {
                if b == a {
                    let mut p = cycle[i + 1..].to_vec();
                    p.extend_from_slice(&cycle[..i]);
                    out.push((*c, p));
                }
            }
        }
        normalize_poly(self.field, out)
    }

    /// Presentation of the (non-completed) Jacobian algebra.
    pub fn jacobian_presentation(&self) -> Result<QuiverPresentation> {
        let rels = (0..self.quiver.arrows.len()).map(|a| self.cyclic_derivative(a)).collect();
        QuiverPresentation::new(self.field, self.quiver.clone(), rels)
    }
}

fn canonical_rotation(cycle: &[usize]) -> Vec<usize> {
    (0..cycle.len().max(1))
        .map(|i| cycle[i.min(cycle.len())..].iter().chain(&cycle[..i.min(cycle.len())]).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a3() -> Quiver {
        Quiver::new(
            vec!["1".into(), "2".into(), "3".into()],
            vec![
                Arrow { name: "a".into(), src: 0, tgt: 1, degree: 0 },
                Arrow { name: "b".into(), src: 1, tgt: 2, degree: 0 },
            ],
        )
        .unwrap()
    }

    #[test]
    fn rejects_non_parallel_relation() {
        let f = Fp::new(7).unwrap();
        let q = a3();
        let mut q2 = q.clone();
        q2.arrows.push(Arrow { name: "c".into(), src: 0, tgt: 1, degree: 0 });
        let q2 = Quiver::new(q2.vertices, q2.arrows).unwrap();
        let err = QuiverPresentation::new(f, q.clone(), vec![vec![(1, vec![0])]]);
        assert!(matches!(err, Err(Error::NonAdmissible(_))));
        let ok = QuiverPresentation::new(f, q2, vec![vec![(1, vec![0, 1]), (6, vec![2, 1])]]);
        assert!(ok.is_ok());
        let bad = QuiverPresentation::new(f, q, vec![vec![(1, vec![0, 1]), (1, vec![1, 0])]]);
        assert!(bad.is_err());
    }

    #[test]
    fn cyclic_derivatives_of_three_cycle() {
        let f = Fp::new(7).unwrap();
        let mut q = a3();
        q.arrows.push(Arrow { name: "c".into(), src: 2, tgt: 0, degree: 1 });
        let qp = QuiverWithPotential::new(f, q, vec![(1, vec![0, 1, 2])]).unwrap();
        assert_eq!(qp.cyclic_derivative(0), vec![(1, vec![1, 2])]);
        assert_eq!(qp.cyclic_derivative(1), vec![(1, vec![2, 0])]);
        assert_eq!(qp.cyclic_derivative(2), vec![(1, vec![0, 1])]);
        assert!(qp.quiver.has_oriented_cycle());
        assert!(!a3().has_oriented_cycle());
    }
}
