//! Noncommutative Gröbner bases for admissible ideals in path algebras.
//!
//! Monomials are paths compared by length, then lexicographically on arrow
//! indices. Completion runs Buchberger's algorithm on overlaps of leading
//! words, with a bound on the length of leading words so that
//! non-terminating input fails cleanly.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::Fp;
use crate::quiver::{PathPoly, QuiverPresentation};

#[derive(Clone, Debug, PartialEq, Eq)]
struct Mono(Vec<usize>);

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

type Poly = BTreeMap<Mono, u32>;

#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    field: Fp,
    /// Monic elements; leading word first.
    elems: Vec<Poly>,
    leads: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug)]
pub struct GroebnerBounds {
    pub max_path_length: usize,
    pub max_dimension: usize,
}

impl Default for GroebnerBounds {
    fn default() -> Self {
        GroebnerBounds { max_path_length: 30, max_dimension: 20000 }
    }
}

fn find_sub(hay: &[usize], needle: &[usize]) -> Option<usize> {
    if needle.len() > hay.len() {
        return None;
    }
    (0..=hay.len() - needle.len()).find(|&i| hay[i..i + needle.len()] == *needle)
}

fn lead(p: &Poly) -> Option<(&Mono, u32)> {
    p.iter().next_back().map(|(m, c)| (m, *c))
}

fn add_scaled(f: Fp, acc: &mut Poly, c: u32, left: &[usize], p: &Poly, right: &[usize]) {
    for (m, &x) in p {
        let mut w = Vec::with_capacity(left.len() + m.0.len() + right.len());
        w.extend_from_slice(left);
        w.extend_from_slice(&m.0);
        w.extend_from_slice(right);
        let key = Mono(w);
        let v = f.mul_add(*acc.get(&key).unwrap_or(&0), c, x);
        if v == 0 {
            acc.remove(&key);
        } else {
            acc.insert(key, v);
        }
    }
}

fn make_monic(f: Fp, p: &mut Poly) {
    if let Some((_, c)) = lead(p) {
        let inv = f.inv(c);
        for v in p.values_mut() {
            *v = f.mul(*v, inv);
        }
    }
}

impl GroebnerBasis {
    pub fn compute(pres: &QuiverPresentation, bounds: GroebnerBounds) -> Result<Self> {
        let f = pres.field;
        let mut gb = GroebnerBasis { field: f, elems: Vec::new(), leads: Vec::new() };
        let mut pending: Vec<Poly> = pres.relations.iter().map(to_poly).collect();
        loop {
            for p in pending.drain(..) {
                let r = gb.reduce(&p);
                if !r.is_empty() {
                    gb.push(r);
                }
            }
            gb.interreduce();
            if let Some(l) = gb.leads.iter().map(|l| l.len()).max() {
                if l > bounds.max_path_length {
                    return Err(Error::DimensionBoundExceeded(format!(
                        "Gröbner completion produced a leading path of length {l} > {}",
                        bounds.max_path_length
                    )));
                }
            }
            for i in 0..gb.elems.len() {
                for j in 0..gb.elems.len() {
                    for s in gb.overlaps(i, j) {
                        let r = gb.reduce(&s);
                        if !r.is_empty() {
                            pending.push(r);
                        }
                    }
                }
            }
            if pending.is_empty() {
                return Ok(gb);
            }
        }
    }

    fn push(&mut self, mut p: Poly) {
        make_monic(self.field, &mut p);
        self.leads.push(lead(&p).unwrap().0 .0.clone());
        self.elems.push(p);
    }

    fn interreduce(&mut self) {
        loop {
            let mut changed = false;
            let mut i = 0;
            while i < self.elems.len() {
                let p = self.elems.remove(i);
                self.leads.remove(i);
                let r = self.reduce(&p);
                if r != p {
                    changed = true;
                }
                if r.is_empty() {
                    continue;
                }
                let mut r = r;
                make_monic(self.field, &mut r);
                self.leads.insert(i, lead(&r).unwrap().0 .0.clone());
                self.elems.insert(i, r);
                i += 1;
            }
            if !changed {
                break;
            }
        }
        let mut order: Vec<usize> = (0..self.elems.len()).collect();
        order.sort_by(|&a, &b| Mono(self.leads[a].clone()).cmp(&Mono(self.leads[b].clone())));
        self.elems = order.iter().map(|&i| self.elems[i].clone()).collect();
        self.leads = order.iter().map(|&i| self.leads[i].clone()).collect();
    }

    /// S-polynomials from proper overlaps: a nonempty proper suffix of
    /// lead(i) equal to a prefix of lead(j).
    fn overlaps(&self, i: usize, j: usize) -> Vec<Poly> {
        let f = self.field;
        let (li, lj) = (&self.leads[i], &self.leads[j]);
        let mut out = Vec::new();
        for k in 1..li.len().min(lj.len()) {
            if li[li.len() - k..] == lj[..k] {
                // lead(i) = x y, lead(j) = y z
                let x = &li[..li.len() - k];
                let z = &lj[k..];
                let mut s = Poly::new();
                add_scaled(f, &mut s, 1, &[], &self.elems[i], z);
                add_scaled(f, &mut s, f.neg(1), x, &self.elems[j], &[]);
                out.push(s);
            }
        }
        out
    }

    fn reduce(&self, p: &Poly) -> Poly {
        let f = self.field;
        let mut rest = p.clone();
        let mut done = Poly::new();
        while let Some((m, c)) = rest.pop_last() {
            let hit = self
                .leads
                .iter()
                .enumerate()
                .find_map(|(g, l)| find_sub(&m.0, l).map(|pos| (g, pos)));
            match hit {
                None => {
                    done.insert(m, c);
                }
                Some((g, pos)) => {
                    let l = self.leads[g].len();
                    let left = m.0[..pos].to_vec();
                    let right = m.0[pos + l..].to_vec();
                    rest.insert(m, c);
                    add_scaled(f, &mut rest, f.neg(c), &left, &self.elems[g], &right);
                }
            }
        }
        done
    }

    pub fn leading_words(&self) -> &[Vec<usize>] {
        &self.leads
    }

    /// Is the path free of leading words?
    pub fn is_normal(&self, path: &[usize]) -> bool {
        !self.leads.iter().any(|l| find_sub(path, l).is_some())
    }

    /// Is the path normal given that its prefix without the last arrow is?
    pub fn extends_normally(&self, path: &[usize]) -> bool {
        !self.leads.iter().any(|l| path.ends_with(l))
    }

    /// Normal form of a single path as a combination of normal paths.
    pub fn normal_form(&self, path: &[usize]) -> PathPoly {
        let mut p = Poly::new();
        p.insert(Mono(path.to_vec()), 1);
        self.reduce(&p).into_iter().map(|(m, c)| (c, m.0)).collect()
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }
}

fn to_poly(p: &PathPoly) -> Poly {
    p.iter().map(|(c, path)| (Mono(path.clone()), *c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{Arrow, Quiver};

    #[test]
    fn commutativity_relation_has_single_lead() {
        let f = Fp::new(101).unwrap();
        let q = Quiver::new(
            vec!["1".into(), "2".into(), "3".into(), "4".into()],
            vec![
                Arrow { name: "a".into(), src: 0, tgt: 1, degree: 0 },
                Arrow { name: "b".into(), src: 1, tgt: 3, degree: 0 },
                Arrow { name: "c".into(), src: 0, tgt: 2, degree: 0 },
                Arrow { name: "d".into(), src: 2, tgt: 3, degree: 0 },
            ],
        )
        .unwrap();
        let pres = QuiverPresentation::new(f, q, vec![vec![(1, vec![0, 1]), (100, vec![2, 3])]]).unwrap();
        let gb = GroebnerBasis::compute(&pres, GroebnerBounds::default()).unwrap();
        assert_eq!(gb.leading_words(), &[vec![2, 3]]);
        assert_eq!(gb.normal_form(&[2, 3]), vec![(1, vec![0, 1])]);
    }

    #[test]
    fn overlap_produces_new_element() {
        // one loop x with x^2 = 0 is already complete; two loops with
        // xy = yx and x^2 = y^2 = 0 needs completion
        let f = Fp::new(101).unwrap();
        let q = Quiver::new(
            vec!["1".into()],
            vec![
                Arrow { name: "x".into(), src: 0, tgt: 0, degree: 1 },
                Arrow { name: "y".into(), src: 0, tgt: 0, degree: 1 },
            ],
        )
        .unwrap();
        let pres = QuiverPresentation::new(
            f,
            q,
            vec![
                vec![(1, vec![0, 0])],
                vec![(1, vec![1, 1])],
                vec![(1, vec![0, 1]), (100, vec![1, 0])],
            ],
        )
        .unwrap();
        let gb = GroebnerBasis::compute(&pres, GroebnerBounds::default()).unwrap();
        // exterior-like algebra k[x,y]/(x^2,y^2): basis 1, x, y, xy
        let normal: Vec<_> = [vec![], vec![0], vec![1], vec![0, 1], vec![1, 0], vec![0, 1, 0]]
            .into_iter()
            .filter(|p| gb.is_normal(p))
            .collect();
        assert_eq!(normal.len(), 4);
    }
}
