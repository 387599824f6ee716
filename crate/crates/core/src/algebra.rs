//! Finite-dimensional graded basic algebras given by structure constants.

use std::collections::{BTreeMap, HashMap};
use std::hash::{Hash, Hasher};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Fp;
use crate::groebner::{GroebnerBasis, GroebnerBounds};
use crate::linalg::{sparse_combine, Echelon, Matrix, SparseVec};
use crate::quiver::{PathPoly, QuiverPresentation};

/// Composable triples checked exhaustively up to this count; beyond it a
/// fixed-seed sample of this size is checked.
const ASSOCIATIVITY_FULL_LIMIT: usize = 400_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisElem {
    pub label: String,
    pub src: usize,
    pub tgt: usize,
    pub degree: i32,
}

/// A word in the generators: `gens[0] * gens[1] * ...`, starting at
/// vertex `src`. The empty word is the idempotent at `src`.
#[derive(Clone, Debug)]
pub struct Word {
    pub src: usize,
    pub tgt: usize,
    pub degree: i32,
    /// Word this one extends by a single generator (index into `words`).
    pub parent: Option<usize>,
    /// Position in [`FDAlgebra::generators`] of the last letter.
    pub last: Option<usize>,
}

/// Basic algebra `A` with a basis adapted to a complete set of primitive
/// orthogonal idempotents: every basis element `b` satisfies
/// `b = e_src b e_tgt`, the idempotents are basis elements, and the other
/// basis elements span the radical.
#[derive(Clone, Debug)]
pub struct FDAlgebra {
    field: Fp,
    vertex_names: Vec<String>,
    basis: Vec<BasisElem>,
    idempotents: Vec<usize>,
    mult: Vec<SparseVec>,
    generators: Vec<usize>,
    words: Vec<Word>,
    basis_in_words: Vec<SparseVec>,
}

impl PartialEq for FDAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.basis == other.basis
            && self.idempotents == other.idempotents
            && self.mult == other.mult
    }
}

impl FDAlgebra {
    pub fn new(
        field: Fp,
        vertex_names: Vec<String>,
        basis: Vec<BasisElem>,
        idempotents: Vec<usize>,
        mult: Vec<SparseVec>,
    ) -> Result<Self> {
        let dim = basis.len();
        if mult.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "multiplication table has {} entries, expected {}",
                mult.len(),
                dim * dim
            )));
        }
        if idempotents.len() != vertex_names.len() {
            return Err(Error::Validation("one idempotent per vertex required".into()));
        }
        let mut alg = FDAlgebra {
            field,
            vertex_names,
            basis,
            idempotents,
            mult,
            generators: Vec::new(),
            words: Vec::new(),
            basis_in_words: Vec::new(),
        };
        alg.validate()?;
        alg.compute_generators()?;
        Ok(alg)
    }

    fn validate(&self) -> Result<()> {
        let dim = self.dim();
        let n = self.num_vertices();
        for (v, &e) in self.idempotents.iter().enumerate() {
            let b = self.basis.get(e).ok_or_else(|| Error::BadIndex(format!("idempotent {e}")))?;
            if b.src != v || b.tgt != v || b.degree != 0 {
                return Err(Error::Validation(format!("idempotent for vertex {v} is misplaced")));
            }
        }
        for (i, b) in self.basis.iter().enumerate() {
            if b.src >= n || b.tgt >= n {
                return Err(Error::BadIndex(format!("basis element {} has bad vertex", b.label)));
            }
            if b.degree < 0 {
                return Err(Error::Validation(format!("basis element {} has negative degree", b.label)));
            }
            for v in 0..n {
                let e = self.idempotents[v];
                let left = &self.mult[e * dim + i];
                let right = &self.mult[i * dim + e];
                let want_left: SparseVec = if b.src == v { vec![(i, 1)] } else { vec![] };
                let want_right: SparseVec = if b.tgt == v { vec![(i, 1)] } else { vec![] };
                if *left != want_left || *right != want_right {
                    return Err(Error::Validation(format!(
                        "idempotents do not act correctly on {}",
                        b.label
                    )));
                }
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                let prod = &self.mult[i * dim + j];
                if prod.is_empty() {
                    continue;
                }
                let (bi, bj) = (&self.basis[i], &self.basis[j]);
                for &(k, _) in prod {
                    let bk = &self.basis[k];
                    if bi.tgt != bj.src
                        || bk.src != bi.src
                        || bk.tgt != bj.tgt
                        || bk.degree != bi.degree + bj.degree
                    {
                        return Err(Error::Validation(format!(
                            "product {} * {} is not homogeneous",
                            bi.label, bj.label
                        )));
                    }
                }
            }
        }
        self.check_associativity()
    }

    fn check_associativity(&self) -> Result<()> {
        let dim = self.dim();
        let by_src = self.by_src();
        let count: usize = (0..dim)
            .map(|i| {
                by_src[self.basis[i].tgt].iter().map(|&j| by_src[self.basis[j].tgt].len()).sum::<usize>()
            })
            .sum();
        let check = |i: usize, j: usize, k: usize| -> Result<()> {
            let ij = &self.mult[i * dim + j];
            let jk = &self.mult[j * dim + k];
            let lhs = sparse_combine(self.field, ij.iter().map(|&(x, c)| (c, self.mult[x * dim + k].clone())));
            let rhs = sparse_combine(self.field, jk.iter().map(|&(x, c)| (c, self.mult[i * dim + x].clone())));
            if lhs != rhs {
                return Err(Error::Validation(format!(
                    "multiplication is not associative on ({}, {}, {})",
                    self.basis[i].label, self.basis[j].label, self.basis[k].label
                )));
            }
            Ok(())
        };
        if count <= ASSOCIATIVITY_FULL_LIMIT {
            for i in 0..dim {
                for &j in &by_src[self.basis[i].tgt] {
                    for &k in &by_src[self.basis[j].tgt] {
                        check(i, j, k)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..ASSOCIATIVITY_FULL_LIMIT {
                let i = rng.gen_range(0..dim);
                let js = &by_src[self.basis[i].tgt];
                let j = js[rng.gen_range(0..js.len())];
                let ks = &by_src[self.basis[j].tgt];
                let k = ks[rng.gen_range(0..ks.len())];
                check(i, j, k)?;
            }
        }
        Ok(())
    }

    fn by_src(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_vertices()];
        for (i, b) in self.basis.iter().enumerate() {
            out[b.src].push(i);
        }
        out
    }

    /// Pick generators complementing `rad^2` inside `rad`, then express
    /// every basis element as a combination of words in them.
    fn compute_generators(&mut self) -> Result<()> {
        let f = self.field;
        let dim = self.dim();
        let is_idem: Vec<bool> = {
            let mut v = vec![false; dim];
            for &e in &self.idempotents {
                v[e] = true;
            }
            v
        };
        let mut rad2 = Echelon::new(f, dim);
        for i in (0..dim).filter(|&i| !is_idem[i]) {
            for j in (0..dim).filter(|&j| !is_idem[j]) {
                let p = &self.mult[i * dim + j];
                if !p.is_empty() {
                    rad2.insert(&crate::linalg::to_dense(p, dim));
                }
            }
        }
        let mut gens = Vec::new();
        for i in (0..dim).filter(|&i| !is_idem[i]) {
            let mut e = vec![0; dim];
            e[i] = 1;
            if rad2.insert(&e) {
                gens.push(i);
            }
        }
        self.generators = gens;

        let mut span = Echelon::tracking(f, dim);
        let mut words = Vec::new();
        let mut values: Vec<Vec<u32>> = Vec::new();
        for v in 0..self.num_vertices() {
            let mut e = vec![0; dim];
            e[self.idempotents[v]] = 1;
            span.insert(&e);
            words.push(Word { src: v, tgt: v, degree: 0, parent: None, last: None });
            values.push(e);
        }
        let mut next = 0;
        while next < words.len() {
            for (gi, &g) in self.generators.iter().enumerate() {
                let w = &words[next];
                if self.basis[g].src != w.tgt {
                    continue;
                }
                let val = self.mul_dense(&values[next], &unit(dim, g));
                if val.iter().all(|&x| x == 0) || span.contains(&val) {
                    continue;
                }
                span.insert(&val);
                let w = Word {
                    src: w.src,
                    tgt: self.basis[g].tgt,
                    degree: w.degree + self.basis[g].degree,
                    parent: Some(next),
                    last: Some(gi),
                };
                words.push(w);
                values.push(val);
            }
            next += 1;
        }
        if span.dim() != dim {
            return Err(Error::Validation(
                "basis elements outside the idempotents do not span a nilpotent radical".into(),
            ));
        }
        self.basis_in_words = (0..dim).map(|b| span.express(&unit(dim, b)).unwrap()).collect();
        self.words = words;
        Ok(())
    }

    pub fn from_presentation(pres: &QuiverPresentation, bounds: GroebnerBounds) -> Result<Self> {
        Ok(Self::from_presentation_with_arrows(pres, bounds)?.0)
    }

    /// As [`FDAlgebra::from_presentation`], also returning the basis
    /// index of each arrow.
    pub fn from_presentation_with_arrows(
        pres: &QuiverPresentation,
        bounds: GroebnerBounds,
    ) -> Result<(Self, Vec<usize>)> {
        let f = pres.field;
        let q = &pres.quiver;
        let gb = GroebnerBasis::compute(pres, bounds)?;
        // Normal paths: (source vertex, arrows).
        let mut paths: Vec<(usize, Vec<usize>)> = (0..q.num_vertices()).map(|v| (v, vec![])).collect();
        let mut idx = 0;
        while idx < paths.len() {
            let (s, p) = paths[idx].clone();
            let end = if p.is_empty() { s } else { q.arrows[*p.last().unwrap()].tgt };
            for (a, arr) in q.arrows.iter().enumerate() {
                if arr.src != end {
                    continue;
                }
                let mut np = p.clone();
                np.push(a);
                if !gb.extends_normally(&np) {
                    continue;
                }
                if np.len() > bounds.max_path_length {
                    return Err(Error::DimensionBoundExceeded(format!(
                        "normal path longer than {}",
                        bounds.max_path_length
                    )));
                }
                paths.push((s, np));
                if paths.len() > bounds.max_dimension {
                    return Err(Error::DimensionBoundExceeded(format!(
                        "quotient dimension exceeds {}",
                        bounds.max_dimension
                    )));
                }
            }
            idx += 1;
        }
        let index: HashMap<(usize, Vec<usize>), usize> =
            paths.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        let basis: Vec<BasisElem> = paths
            .iter()
            .map(|(s, p)| BasisElem {
                label: if p.is_empty() { format!("e_{}", q.vertices[*s]) } else { q.path_label(p) },
                src: *s,
                tgt: if p.is_empty() { *s } else { q.arrows[*p.last().unwrap()].tgt },
                degree: q.path_degree(p),
            })
            .collect();
        let dim = basis.len();
        let mut mult = vec![Vec::new(); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                if basis[i].tgt != basis[j].src {
                    continue;
                }
                let (s, pi) = &paths[i];
                let pj = &paths[j].1;
                let mut cat = pi.clone();
                cat.extend_from_slice(pj);
                mult[i * dim + j] = if pi.is_empty() {
                    vec![(j, 1)]
                } else if pj.is_empty() {
                    vec![(i, 1)]
                } else {
                    let mut terms: Vec<(usize, u32)> = gb
                        .normal_form(&cat)
                        .into_iter()
                        .map(|(c, p)| (index[&(*s, p)], c))
                        .collect();
                    terms.sort();
                    terms
                };
            }
        }
        let idempotents = (0..q.num_vertices()).collect();
        let arrows = (0..q.arrows.len()).map(|a| index[&(q.arrows[a].src, vec![a])]).collect();
        Ok((FDAlgebra::new(f, q.vertices.clone(), basis, idempotents, mult)?, arrows))
    }

    pub fn opposite(&self) -> FDAlgebra {
        let dim = self.dim();
        let basis = self
            .basis
            .iter()
            .map(|b| BasisElem { label: b.label.clone(), src: b.tgt, tgt: b.src, degree: b.degree })
            .collect();
        let mut mult = vec![Vec::new(); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                mult[i * dim + j] = self.mult[j * dim + i].clone();
            }
        }
        FDAlgebra::new(self.field, self.vertex_names.clone(), basis, self.idempotents.clone(), mult)
            .expect("opposite of a valid algebra is valid")
    }

    /// `A ⊗ B^op`. Basis element `(x, y)` has index `x * dim B + y`,
    /// vertex `(i, j)` has index `i * n_B + j`.
    pub fn tensor_op(a: &FDAlgebra, b: &FDAlgebra) -> Result<FDAlgebra> {
        if a.field != b.field {
            return Err(Error::FieldMismatch(a.field.modulus(), b.field.modulus()));
        }
        let f = a.field;
        let (da, db) = (a.dim(), b.dim());
        let nb = b.num_vertices();
        let mut vertex_names = Vec::new();
        for va in &a.vertex_names {
            for vb in &b.vertex_names {
                vertex_names.push(format!("{va}|{vb}"));
            }
        }
        let mut basis = Vec::with_capacity(da * db);
        for x in &a.basis {
            for y in &b.basis {
                basis.push(BasisElem {
                    label: format!("{}|{}", x.label, y.label),
                    src: x.src * nb + y.tgt,
                    tgt: x.tgt * nb + y.src,
                    degree: x.degree + y.degree,
                });
            }
        }
        let dim = da * db;
        let mut mult = vec![Vec::new(); dim * dim];
        for x in 0..da {
            for y in 0..db {
                for x2 in 0..da {
                    let xx = &a.mult[x * da + x2];
                    if xx.is_empty() {
                        continue;
                    }
                    for y2 in 0..db {
                        let yy = &b.mult[y2 * db + y];
                        if yy.is_empty() {
                            continue;
                        }
                        let mut prod = Vec::with_capacity(xx.len() * yy.len());
                        for &(u, c) in xx {
                            for &(v, d) in yy {
                                prod.push((u * db + v, f.mul(c, d)));
                            }
                        }
                        mult[(x * db + y) * dim + x2 * db + y2] = prod;
                    }
                }
            }
        }
        let idempotents =
            (0..a.num_vertices()).flat_map(|i| (0..nb).map(move |j| (i, j))).map(|(i, j)| a.idempotents[i] * db + b.idempotents[j]).collect();
        FDAlgebra::new(f, vertex_names, basis, idempotents, mult)
    }

    /// Enveloping algebra `A ⊗ A^op`.
    pub fn enveloping(&self) -> FDAlgebra {
        FDAlgebra::tensor_op(self, self).expect("same field")
    }

    pub fn degree_zero_part(&self) -> FDAlgebra {
        self.degree_part_subalgebra(|d| d == 0)
    }

    fn degree_part_subalgebra(&self, keep: impl Fn(i32) -> bool) -> FDAlgebra {
        let kept: Vec<usize> = (0..self.dim()).filter(|&i| keep(self.basis[i].degree)).collect();
        let mut pos = vec![usize::MAX; self.dim()];
        for (n, &i) in kept.iter().enumerate() {
            pos[i] = n;
        }
        let dim = self.dim();
        let nd = kept.len();
        let mut mult = vec![Vec::new(); nd * nd];
        for (a, &i) in kept.iter().enumerate() {
            for (b, &j) in kept.iter().enumerate() {
                mult[a * nd + b] = self.mult[i * dim + j].iter().map(|&(k, c)| (pos[k], c)).collect();
            }
        }
        let basis = kept.iter().map(|&i| self.basis[i].clone()).collect();
        let idempotents = self.idempotents.iter().map(|&e| pos[e]).collect();
        FDAlgebra::new(self.field, self.vertex_names.clone(), basis, idempotents, mult)
            .expect("degree zero part of a valid algebra is valid")
    }

    #[inline]
    pub fn field(&self) -> Fp {
        self.field
    }
    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    #[inline]
    pub fn num_vertices(&self) -> usize {
        self.vertex_names.len()
    }
    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }
    pub fn basis(&self) -> &[BasisElem] {
        &self.basis
    }
    #[inline]
    pub fn elem(&self, i: usize) -> &BasisElem {
        &self.basis[i]
    }
    pub fn idempotents(&self) -> &[usize] {
        &self.idempotents
    }
    #[inline]
    pub fn idempotent(&self, v: usize) -> usize {
        self.idempotents[v]
    }
    pub fn is_idempotent(&self, i: usize) -> bool {
        self.idempotents[self.basis[i].src] == i
    }
    #[inline]
    pub fn mul(&self, i: usize, j: usize) -> &SparseVec {
        &self.mult[i * self.dim() + j]
    }
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }
    pub fn words(&self) -> &[Word] {
        &self.words
    }
    /// Coefficients of basis element `b` on the words.
    pub fn basis_in_words(&self, b: usize) -> &SparseVec {
        &self.basis_in_words[b]
    }

    /// Generator positions along a word, first letter first.
    pub fn word_letters(&self, w: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = w;
        while let (Some(p), Some(g)) = (self.words[cur].parent, self.words[cur].last) {
            out.push(g);
            cur = p;
        }
        out.reverse();
        out
    }

    pub fn max_degree(&self) -> i32 {
        self.basis.iter().map(|b| b.degree).max().unwrap_or(0)
    }

    pub fn is_concentrated_in_degree_zero(&self) -> bool {
        self.basis.iter().all(|b| b.degree == 0)
    }

    /// Product of two elements given as dense coordinate vectors.
    pub fn mul_dense(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let f = self.field;
        let dim = self.dim();
        let mut out = vec![0; dim];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let ab = f.mul(a, b);
                for &(k, c) in &self.mult[i * dim + j] {
                    out[k] = f.mul_add(out[k], ab, c);
                }
            }
        }
        out
    }

    /// Basis elements in `e_v A` (paths starting at `v`).
    pub fn right_projective_basis(&self, v: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.basis[i].src == v).collect()
    }

    /// Basis elements in `e_v A e_w`.
    pub fn between(&self, v: usize, w: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.basis[i].src == v && self.basis[i].tgt == w).collect()
    }

    /// Dimensions of `e_v A_d e_w` keyed by `(v, w, d)`.
    pub fn dimension_table(&self) -> BTreeMap<(usize, usize, i32), usize> {
        let mut t = BTreeMap::new();
        for b in &self.basis {
            *t.entry((b.src, b.tgt, b.degree)).or_insert(0) += 1;
        }
        t
    }

    /// Total dimension per degree.
    pub fn graded_dims(&self) -> BTreeMap<i32, usize> {
        let mut t = BTreeMap::new();
        for b in &self.basis {
            *t.entry(b.degree).or_insert(0) += 1;
        }
        t
    }

    /// Deterministic content hash of the structure constants.
    pub fn content_hash(&self) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.field.modulus().hash(&mut h);
        for b in &self.basis {
            (b.src, b.tgt, b.degree).hash(&mut h);
        }
        self.idempotents.hash(&mut h);
        self.mult.hash(&mut h);
        h.finish()
    }

    pub fn structure_constants(&self) -> &[SparseVec] {
        &self.mult
    }
}

pub(crate) fn unit(dim: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; dim];
    v[i] = 1;
    v
}

/// A linear map between algebras given on bases, with checks that it is
/// a unital degree-preserving algebra homomorphism.
#[derive(Clone, Debug)]
pub struct AlgebraMorphism<'a> {
    pub source: &'a FDAlgebra,
    pub target: &'a FDAlgebra,
    /// Column `i` is the image of source basis element `i`.
    pub matrix: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorphismCheck {
    pub multiplicative: bool,
    pub unital: bool,
    pub degree_preserving: bool,
    pub bijective: bool,
}

impl AlgebraMorphism<'_> {
    pub fn check(&self) -> MorphismCheck {
        let (s, t) = (self.source, self.target);
        let img = |i: usize| self.matrix.column(i);
        let mut multiplicative = true;
        'outer: for i in 0..s.dim() {
            for j in 0..s.dim() {
                let lhs = {
                    let mut v = vec![0; t.dim()];
                    for &(k, c) in s.mul(i, j) {
                        for (x, y) in v.iter_mut().zip(img(k)) {
                            *x = t.field().mul_add(*x, c, y);
                        }
                    }
                    v
                };
                if lhs != t.mul_dense(&img(i), &img(j)) {
                    multiplicative = false;
                    break 'outer;
                }
            }
        }
        let mut one_s = vec![0; s.dim()];
        for &e in s.idempotents() {
            one_s[e] = 1;
        }
        let mut one_t = vec![0; t.dim()];
        for &e in t.idempotents() {
            one_t[e] = 1;
        }
        let unital = self.matrix.mul_vec(&one_s) == one_t;
        let degree_preserving = (0..s.dim()).all(|i| {
            img(i).iter().enumerate().all(|(k, &c)| c == 0 || t.elem(k).degree == s.elem(i).degree)
        });
        let bijective = s.dim() == t.dim() && self.matrix.is_invertible();
        MorphismCheck { multiplicative, unital, degree_preserving, bijective }
    }
}

/// An algebra built from a presentation, remembering where the arrows
/// went so that paths can be evaluated.
#[derive(Clone, Debug)]
pub struct Presented {
    pub presentation: QuiverPresentation,
    pub algebra: std::sync::Arc<FDAlgebra>,
    pub arrows: Vec<usize>,
}

impl Presented {
    pub fn new(pres: &QuiverPresentation, bounds: GroebnerBounds) -> Result<Self> {
        let (alg, arrows) = FDAlgebra::from_presentation_with_arrows(pres, bounds)?;
        Ok(Presented { presentation: pres.clone(), algebra: std::sync::Arc::new(alg), arrows })
    }

    /// The element of a path starting at `src` (the idempotent if empty).
    pub fn path(&self, src: usize, path: &[usize]) -> SparseVec {
        let alg = &self.algebra;
        let mut x = vec![(alg.idempotent(src), 1)];
        for &a in path {
            x = crate::resolution::mul_sparse(alg, &x, &[(self.arrows[a], 1)]);
        }
        x
    }

    pub fn poly(&self, p: &PathPoly) -> SparseVec {
        let q = &self.presentation.quiver;
        let terms = p.iter().filter_map(|(c, path)| {
            let (s, _) = q.path_ends(path)?;
            Some((*c, self.path(s, path)))
        });
        sparse_combine(self.algebra.field(), terms)
    }
}
