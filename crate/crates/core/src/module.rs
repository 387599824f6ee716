//! Graded right modules over an [`FDAlgebra`].
//!
//! A module is stored block by block: the basis is partitioned into
//! blocks `M_d e_v` sorted by `(degree, vertex)`, and each generator `g`
//! of the algebra acts by a matrix from block `(d, s(g))` to block
//! `(d + deg g, t(g))` (column convention: `m·g = R(g) m`). Actions of
//! other algebra elements are obtained through words in the generators.
//!
//! Shift convention: the degree-`n` part of `M(p)` is `M_{p+n}`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock};

use crate::algebra::FDAlgebra;
use crate::error::{Error, Result};
use crate::field::Fp;
use crate::linalg::{Echelon, Matrix, SparseVec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub degree: i32,
    pub vertex: usize,
    pub offset: usize,
    pub dim: usize,
}

#[derive(Clone)]
pub struct GradedModule {
    alg: Arc<FDAlgebra>,
    blocks: Vec<Block>,
    dim: usize,
    /// `action[g][b]`: matrix from block `b` to its image block under the
    /// `g`-th generator (zero rows if that block is absent). Empty `0x0`
    /// when the block's vertex is not the source of the generator.
    action: Vec<Vec<Matrix>>,
    spin: OnceLock<Arc<Spin>>,
}

impl std::fmt::Debug for GradedModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GradedModule(dim {}, blocks [", self.dim)?;
        for b in &self.blocks {
            write!(f, " ({}, {}): {}", b.degree, b.vertex, b.dim)?;
        }
        write!(f, " ])")
    }
}

/// Record of how a module is spun up from its top: every spun vector is a
/// top vector or the image of an earlier one under a generator; spun
/// vectors form a basis of each block.
#[derive(Debug)]
struct Spin {
    steps: Vec<Step>,
    block_steps: Vec<Vec<usize>>,
    block_inv: Vec<Matrix>,
    relations: Vec<SpinRelation>,
    tops: Vec<usize>,
}

#[derive(Debug)]
struct Step {
    block: usize,
    /// Local coordinates inside the block.
    local: Vec<u32>,
    parent: Option<(usize, usize)>,
}

#[derive(Debug)]
struct SpinRelation {
    step: usize,
    gen: usize,
    /// Target block in the module (if present) and coefficients of the
    /// image over that block's spun vectors.
    target: Option<(usize, Vec<u32>)>,
}

pub(crate) fn same_algebra(a: &Arc<FDAlgebra>, b: &Arc<FDAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl GradedModule {
    /// Build from block shapes `(degree, vertex, dim)` (any order, no
    /// repeats) and a function giving the action matrix of generator `g`
    /// on block `b` (in the sorted order).
    pub fn from_blocks(
        alg: Arc<FDAlgebra>,
        shape: Vec<(i32, usize, usize)>,
        mut act: impl FnMut(usize, &Block, Option<&Block>) -> Matrix,
    ) -> Result<Self> {
        let mut shape: Vec<_> = shape.into_iter().filter(|s| s.2 > 0).collect();
        shape.sort();
        for w in shape.windows(2) {
            if (w[0].0, w[0].1) == (w[1].0, w[1].1) {
                return Err(Error::Validation("repeated block in module shape".into()));
            }
        }
        let mut blocks = Vec::with_capacity(shape.len());
        let mut off = 0;
        for (degree, vertex, dim) in shape {
            blocks.push(Block { degree, vertex, offset: off, dim });
            off += dim;
        }
        let f = alg.field();
        let mut m = GradedModule { alg, blocks, dim: off, action: Vec::new(), spin: OnceLock::new() };
        let gens: Vec<usize> = m.alg.generators().to_vec();
        let mut action = Vec::with_capacity(gens.len());
        for (gi, &g) in gens.iter().enumerate() {
            let el = m.alg.elem(g).clone();
            let mut per = Vec::with_capacity(m.blocks.len());
            for b in 0..m.blocks.len() {
                let blk = &m.blocks[b];
                if blk.vertex != el.src {
                    per.push(Matrix::zeros(f, 0, 0));
                    continue;
                }
                let tgt = m.block_index(blk.degree + el.degree, el.tgt).map(|t| &m.blocks[t]);
                let mat = act(gi, blk, tgt);
                let want = (tgt.map_or(0, |t| t.dim), blk.dim);
                if (mat.rows(), mat.cols()) != want {
                    return Err(Error::DimensionMismatch(format!(
                        "action block has shape {}x{}, expected {}x{}",
                        mat.rows(),
                        mat.cols(),
                        want.0,
                        want.1
                    )));
                }
                per.push(mat);
            }
            action.push(per);
        }
        m.action = action;
        Ok(m)
    }

    /// Build from a full action: per-basis-vector degrees and vertices and
    /// one `dim x dim` matrix per generator. Returns the module and the
    /// permutation `old index -> new index`.
    pub fn from_full(
        alg: Arc<FDAlgebra>,
        degrees: &[i32],
        vertices: &[usize],
        gen_mats: &[Matrix],
    ) -> Result<(Self, Vec<usize>)> {
        let n = degrees.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (degrees[i], vertices[i], i));
        let mut perm = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            perm[old] = new;
        }
        let mut shape: BTreeMap<(i32, usize), usize> = BTreeMap::new();
        for i in 0..n {
            *shape.entry((degrees[i], vertices[i])).or_insert(0) += 1;
        }
        let shape_v: Vec<_> = shape.iter().map(|(&(d, v), &c)| (d, v, c)).collect();
        // Positions of old indices inside their block.
        let mut local = vec![0; n];
        {
            let mut counters: BTreeMap<(i32, usize), usize> = BTreeMap::new();
            for &old in &order {
                let c = counters.entry((degrees[old], vertices[old])).or_insert(0);
                local[old] = *c;
                *c += 1;
            }
        }
        let mut members: BTreeMap<(i32, usize), Vec<usize>> = BTreeMap::new();
        for &old in &order {
            members.entry((degrees[old], vertices[old])).or_default().push(old);
        }
        let f = alg.field();
        let gens: Vec<usize> = alg.generators().to_vec();
        let alg2 = alg.clone();
        // Check homogeneity.
        for (gi, &g) in gens.iter().enumerate() {
            let el = alg2.elem(g);
            let mat = &gen_mats[gi];
            for c in 0..n {
                for r in 0..n {
                    let x = mat.get(r, c);
                    if x != 0
                        && (vertices[c] != el.src
                            || vertices[r] != el.tgt
                            || degrees[r] != degrees[c] + el.degree)
                    {
                        return Err(Error::Validation(format!(
                            "action of generator {} is not homogeneous",
                            el.label
                        )));
                    }
                }
            }
        }
        let m = GradedModule::from_blocks(alg, shape_v, |gi, src, tgt| {
            let Some(tgt) = tgt else {
                return Matrix::zeros(f, 0, src.dim);
            };
            let cols = &members[&(src.degree, src.vertex)];
            let rows = &members[&(tgt.degree, tgt.vertex)];
            let mut out = Matrix::zeros(f, tgt.dim, src.dim);
            for &c in cols {
                for &r in rows {
                    out.set(local[r], local[c], gen_mats[gi].get(r, c));
                }
            }
            out
        })?;
        Ok((m, perm))
    }

    pub fn zero(alg: Arc<FDAlgebra>) -> Self {
        GradedModule::from_blocks(alg, vec![], |_, _, _| unreachable!()).unwrap()
    }

    /// The indecomposable projective `e_v A`, shifted by `p`: its top sits
    /// in degree `-p`.
    pub fn projective(alg: Arc<FDAlgebra>, v: usize, p: i32) -> Result<Self> {
        if v >= alg.num_vertices() {
            return Err(Error::BadIndex(format!("vertex {v}")));
        }
        let f = alg.field();
        let elems = alg.right_projective_basis(v);
        let mut shape: BTreeMap<(i32, usize), Vec<usize>> = BTreeMap::new();
        for &b in &elems {
            let e = alg.elem(b);
            shape.entry((e.degree - p, e.tgt)).or_default().push(b);
        }
        let mut pos = HashMap::new();
        for list in shape.values() {
            for (i, &b) in list.iter().enumerate() {
                pos.insert(b, i);
            }
        }
        let shape_v = shape.iter().map(|(&(d, w), l)| (d, w, l.len())).collect();
        let a2 = alg.clone();
        GradedModule::from_blocks(alg, shape_v, |gi, src, tgt| {
            let g = a2.generators()[gi];
            let Some(tgt) = tgt else {
                return Matrix::zeros(f, 0, src.dim);
            };
            let mut out = Matrix::zeros(f, tgt.dim, src.dim);
            for (c, &b) in shape[&(src.degree, src.vertex)].iter().enumerate() {
                for &(k, x) in a2.mul(b, g) {
                    out.set(pos[&k], c, x);
                }
            }
            out
        })
    }

    /// Simple module at vertex `v` concentrated in degree `d`.
    pub fn simple(alg: Arc<FDAlgebra>, v: usize, d: i32) -> Result<Self> {
        if v >= alg.num_vertices() {
            return Err(Error::BadIndex(format!("vertex {v}")));
        }
        let f = alg.field();
        GradedModule::from_blocks(alg, vec![(d, v, 1)], |_, src, tgt| {
            Matrix::zeros(f, tgt.map_or(0, |t| t.dim), src.dim)
        })
    }

    /// The algebra as a right module over itself.
    pub fn regular(alg: Arc<FDAlgebra>) -> Self {
        let parts: Vec<_> = (0..alg.num_vertices())
            .map(|v| GradedModule::projective(alg.clone(), v, 0).unwrap())
            .collect();
        GradedModule::direct_sum(alg, &parts).0
    }

    pub fn algebra(&self) -> &Arc<FDAlgebra> {
        &self.alg
    }
    #[inline]
    pub fn field(&self) -> Fp {
        self.alg.field()
    }
    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block_index(&self, degree: i32, vertex: usize) -> Option<usize> {
        self.blocks.binary_search_by(|b| (b.degree, b.vertex).cmp(&(degree, vertex))).ok()
    }

    pub fn block_of_index(&self, i: usize) -> usize {
        self.blocks.partition_point(|b| b.offset + b.dim <= i)
    }

    pub fn degree_of(&self, i: usize) -> i32 {
        self.blocks[self.block_of_index(i)].degree
    }

    pub fn vertex_of(&self, i: usize) -> usize {
        self.blocks[self.block_of_index(i)].vertex
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.blocks.first().map(|b| b.degree)
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.blocks.last().map(|b| b.degree)
    }

    /// Total dimension per `(degree, vertex)`.
    pub fn shape(&self) -> BTreeMap<(i32, usize), usize> {
        self.blocks.iter().map(|b| ((b.degree, b.vertex), b.dim)).collect()
    }

    /// Dimension vector (ungraded), indexed by vertex.
    pub fn dim_vector(&self) -> Vec<usize> {
        let mut v = vec![0; self.alg.num_vertices()];
        for b in &self.blocks {
            v[b.vertex] += b.dim;
        }
        v
    }

    /// Action block of the `g`-th generator on block `b`.
    pub fn gen_block(&self, g: usize, b: usize) -> &Matrix {
        &self.action[g][b]
    }

    /// Index of the block that generator `g` maps block `b` into.
    pub fn gen_target(&self, g: usize, b: usize) -> Option<usize> {
        let el = self.alg.elem(self.alg.generators()[g]);
        let blk = &self.blocks[b];
        if blk.vertex != el.src {
            return None;
        }
        self.block_index(blk.degree + el.degree, el.tgt)
    }

    /// `m·g` for the `g`-th generator.
    pub fn act_gen(&self, g: usize, m: &[u32]) -> Vec<u32> {
        let f = self.field();
        let mut out = vec![0; self.dim];
        for (b, blk) in self.blocks.iter().enumerate() {
            let Some(t) = self.gen_target(g, b) else { continue };
            let mat = &self.action[g][b];
            let tb = &self.blocks[t];
            let local = mat.mul_vec(&m[blk.offset..blk.offset + blk.dim]);
            for (i, x) in local.into_iter().enumerate() {
                out[tb.offset + i] = f.add(out[tb.offset + i], x);
            }
        }
        out
    }

    /// Full `dim x dim` matrix of the `g`-th generator.
    pub fn gen_matrix(&self, g: usize) -> Matrix {
        let mut out = Matrix::zeros(self.field(), self.dim, self.dim);
        for (b, blk) in self.blocks.iter().enumerate() {
            let Some(t) = self.gen_target(g, b) else { continue };
            let tb = &self.blocks[t];
            let mat = &self.action[g][b];
            for r in 0..tb.dim {
                for c in 0..blk.dim {
                    out.set(tb.offset + r, blk.offset + c, mat.get(r, c));
                }
            }
        }
        out
    }

    /// Matrix of right multiplication by the homogeneous algebra element
    /// `x` from block `b`, together with the target block. `x` must be
    /// homogeneous of degree `deg` in `e_v A e_w`.
    pub fn elem_block(&self, x: &SparseVec, b: usize) -> Option<(usize, Matrix)> {
        let f = self.field();
        let alg = &self.alg;
        let (&(first, _), _) = x.split_first()?;
        let el = alg.elem(first);
        let blk = &self.blocks[b];
        if blk.vertex != el.src {
            return None;
        }
        let t = self.block_index(blk.degree + el.degree, el.tgt)?;
        let mut coeff: BTreeMap<usize, u32> = BTreeMap::new();
        for &(bi, c) in x {
            for &(w, d) in alg.basis_in_words(bi) {
                let e = coeff.entry(w).or_insert(0);
                *e = f.mul_add(*e, c, d);
            }
        }
        let mut memo: HashMap<usize, Option<(usize, Matrix)>> = HashMap::new();
        let mut out = Matrix::zeros(f, self.blocks[t].dim, blk.dim);
        for (w, c) in coeff {
            if c == 0 || alg.words()[w].src != blk.vertex {
                continue;
            }
            if let Some((tb, m)) = self.word_block(w, b, &mut memo) {
                debug_assert_eq!(tb, t);
                out.add_scaled(c, &m);
            }
        }
        Some((t, out))
    }

    fn word_block(
        &self,
        w: usize,
        b: usize,
        memo: &mut HashMap<usize, Option<(usize, Matrix)>>,
    ) -> Option<(usize, Matrix)> {
        if let Some(r) = memo.get(&w) {
            return r.clone();
        }
        let word = &self.alg.words()[w];
        let res = match (word.parent, word.last) {
            (None, _) | (_, None) => Some((b, Matrix::identity(self.field(), self.blocks[b].dim))),
            (Some(p), Some(g)) => self.word_block(p, b, memo).and_then(|(pb, pm)| {
                let t = self.gen_target(g, pb)?;
                Some((t, self.action[g][pb].mul(&pm)))
            }),
        };
        memo.insert(w, res.clone());
        res
    }

    /// `m·x` for an arbitrary algebra element `x` (dense coordinates).
    pub fn act_elem(&self, m: &[u32], x: &[u32]) -> Vec<u32> {
        let f = self.field();
        let alg = &self.alg;
        let mut out = vec![0; self.dim];
        // Group x by homogeneous pieces (src, tgt, degree).
        let mut pieces: BTreeMap<(usize, usize, i32), SparseVec> = BTreeMap::new();
        for (i, &c) in x.iter().enumerate() {
            if c != 0 {
                let e = alg.elem(i);
                pieces.entry((e.src, e.tgt, e.degree)).or_default().push((i, c));
            }
        }
        for (b, blk) in self.blocks.iter().enumerate() {
            let local = &m[blk.offset..blk.offset + blk.dim];
            if local.iter().all(|&c| c == 0) {
                continue;
            }
            for piece in pieces.values() {
                if let Some((t, mat)) = self.elem_block(piece, b) {
                    let tb = &self.blocks[t];
                    for (i, y) in mat.mul_vec(local).into_iter().enumerate() {
                        out[tb.offset + i] = f.add(out[tb.offset + i], y);
                    }
                }
            }
        }
        out
    }

    /// Check that the generator action satisfies the relations of the
    /// algebra: for every word `w` and generator `g`, acting by `w` then
    /// `g` agrees with acting by the basis expansion of `w·g`.
    pub fn validate(&self) -> Result<()> {
        let f = self.field();
        let alg = &self.alg;
        let dim_a = alg.dim();
        // Values of words as algebra elements.
        let mut values: Vec<Vec<u32>> = Vec::with_capacity(alg.words().len());
        for w in alg.words() {
            let v = match (w.parent, w.last) {
                (Some(p), Some(g)) => {
                    alg.mul_dense(&values[p], &crate::algebra::unit(dim_a, alg.generators()[g]))
                }
                _ => crate::algebra::unit(dim_a, alg.idempotent(w.src)),
            };
            values.push(v);
        }
        for (b, blk) in self.blocks.iter().enumerate() {
            let mut memo = HashMap::new();
            for (wi, w) in alg.words().iter().enumerate() {
                if w.src != blk.vertex {
                    continue;
                }
                let wm = self.word_block(wi, b, &mut memo);
                for (gi, &g) in alg.generators().iter().enumerate() {
                    if alg.elem(g).src != w.tgt {
                        continue;
                    }
                    let lhs = wm.as_ref().and_then(|(wb, m)| {
                        let t = self.gen_target(gi, *wb)?;
                        Some((t, self.action[gi][*wb].mul(m)))
                    });
                    let prod = alg.mul_dense(&values[wi], &crate::algebra::unit(dim_a, g));
                    let sparse: SparseVec = crate::linalg::to_sparse(&prod);
                    let rhs = if sparse.is_empty() { None } else { self.elem_block(&sparse, b) };
                    let lz = lhs.as_ref().map_or(true, |(_, m)| m.is_zero());
                    let rz = rhs.as_ref().map_or(true, |(_, m)| m.is_zero());
                    let ok = match (&lhs, &rhs) {
                        _ if lz && rz => true,
                        (Some((t1, m1)), Some((t2, m2))) => t1 == t2 && m1 == m2,
                        _ => false,
                    };
                    if !ok {
                        return Err(Error::Validation(format!(
                            "module action violates a relation (generator {})",
                            alg.elem(g).label
                        )));
                    }
                }
            }
        }
        let _ = f;
        Ok(())
    }

    /// `M(p)`: degrees drop by `p`.
    pub fn shift(&self, p: i32) -> GradedModule {
        let mut m = self.clone();
        for b in &mut m.blocks {
            b.degree -= p;
        }
        m.spin = OnceLock::new();
        m
    }

    /// Direct sum with the inclusion matrices of the summands.
    pub fn direct_sum(alg: Arc<FDAlgebra>, parts: &[GradedModule]) -> (GradedModule, Vec<Matrix>) {
        let f = alg.field();
        // (degree, vertex) -> list of (part, block)
        let mut shape: BTreeMap<(i32, usize), Vec<(usize, usize)>> = BTreeMap::new();
        for (pi, part) in parts.iter().enumerate() {
            for (bi, b) in part.blocks.iter().enumerate() {
                shape.entry((b.degree, b.vertex)).or_default().push((pi, bi));
            }
        }
        let shape_v: Vec<_> = shape
            .iter()
            .map(|(&(d, v), l)| (d, v, l.iter().map(|&(p, b)| parts[p].blocks[b].dim).sum()))
            .collect();
        let sum = GradedModule::from_blocks(alg, shape_v, |g, src, tgt| {
            let Some(tgt) = tgt else {
                return Matrix::zeros(f, 0, src.dim);
            };
            let mut out = Matrix::zeros(f, tgt.dim, src.dim);
            let srcs = &shape[&(src.degree, src.vertex)];
            let tgts = &shape[&(tgt.degree, tgt.vertex)];
            let mut coff = 0;
            for &(p, b) in srcs {
                let part = &parts[p];
                if let Some(t) = part.gen_target(g, b) {
                    let roff: usize = tgts
                        .iter()
                        .take_while(|&&(p2, _)| p2 != p)
                        .map(|&(p2, b2)| parts[p2].blocks[b2].dim)
                        .sum();
                    let m = &part.action[g][b];
                    debug_assert!(tgts.contains(&(p, t)));
                    for r in 0..m.rows() {
                        for c in 0..m.cols() {
                            out.set(roff + r, coff + c, m.get(r, c));
                        }
                    }
                }
                coff += part.blocks[b].dim;
            }
            out
        })
        .expect("direct sum shapes are consistent");
        let mut incl = Vec::with_capacity(parts.len());
        for (pi, part) in parts.iter().enumerate() {
            let mut m = Matrix::zeros(f, sum.dim, part.dim);
            for (bi, b) in part.blocks.iter().enumerate() {
                let key = (b.degree, b.vertex);
                let sb = &sum.blocks[sum.block_index(key.0, key.1).unwrap()];
                let off: usize = shape[&key]
                    .iter()
                    .take_while(|&&(p, _)| p != pi)
                    .map(|&(p, bb)| parts[p].blocks[bb].dim)
                    .sum();
                for i in 0..b.dim {
                    m.set(sb.offset + off + i, b.offset + i, 1);
                }
                let _ = bi;
            }
            incl.push(m);
        }
        (sum, incl)
    }

    /// Submodule spanned by the given vectors, which must span a
    /// submodule and be homogeneous (each inside one block). Returns the
    /// submodule and the inclusion matrix.
    pub fn submodule(&self, vectors: &[Vec<u32>]) -> Result<(GradedModule, Matrix)> {
        let f = self.field();
        let mut ech: Vec<Echelon> = self.blocks.iter().map(|b| Echelon::new(f, b.dim)).collect();
        for v in vectors {
            for (bi, b) in self.blocks.iter().enumerate() {
                let local = &v[b.offset..b.offset + b.dim];
                if local.iter().any(|&x| x != 0) {
                    ech[bi].insert(local);
                }
            }
        }
        self.submodule_from_echelons(ech)
    }

    /// Submodule generated by the given vectors (closure under the
    /// action).
    pub fn submodule_generated(&self, vectors: &[Vec<u32>]) -> (GradedModule, Matrix) {
        let f = self.field();
        let mut ech: Vec<Echelon> = self.blocks.iter().map(|b| Echelon::new(f, b.dim)).collect();
        let mut queue: Vec<(usize, Vec<u32>)> = Vec::new();
        for v in vectors {
            for (bi, b) in self.blocks.iter().enumerate() {
                let local = v[b.offset..b.offset + b.dim].to_vec();
                if local.iter().any(|&x| x != 0) && ech[bi].insert(&local) {
                    queue.push((bi, local));
                }
            }
        }
        while let Some((bi, local)) = queue.pop() {
            for g in 0..self.action.len() {
                let Some(t) = self.gen_target(g, bi) else { continue };
                let img = self.action[g][bi].mul_vec(&local);
                if img.iter().any(|&x| x != 0) && ech[t].insert(&img) {
                    queue.push((t, img));
                }
            }
        }
        self.submodule_from_echelons(ech).expect("closure is a submodule")
    }

    fn submodule_from_echelons(&self, ech: Vec<Echelon>) -> Result<(GradedModule, Matrix)> {
        let f = self.field();
        let shape: Vec<_> = self
            .blocks
            .iter()
            .zip(&ech)
            .map(|(b, e)| (b.degree, b.vertex, e.dim()))
            .collect();
        let mut failure = None;
        let sub = GradedModule::from_blocks(self.alg.clone(), shape, |g, src, tgt| {
            let sb = self.block_index(src.degree, src.vertex).unwrap();
            let Some(tgt) = tgt else {
                return Matrix::zeros(f, 0, src.dim);
            };
            let tb = self.block_index(tgt.degree, tgt.vertex).unwrap();
            let mut out = Matrix::zeros(f, tgt.dim, src.dim);
            for (c, row) in ech[sb].rows().iter().enumerate() {
                let img = self.action[g][sb].mul_vec(row);
                match ech[tb].coordinates(&img) {
                    Some(coords) => {
                        for (r, x) in coords.into_iter().enumerate() {
                            out.set(r, c, x);
                        }
                    }
                    None => failure = Some(()),
                }
            }
            out
        })?;
        // Images landing in blocks where the submodule is zero.
        for (sb, blk) in self.blocks.iter().enumerate() {
            if ech[sb].dim() == 0 {
                continue;
            }
            for g in 0..self.action.len() {
                if let Some(t) = self.gen_target(g, sb) {
                    if ech[t].dim() == 0 {
                        for row in ech[sb].rows() {
                            if self.action[g][sb].mul_vec(row).iter().any(|&x| x != 0) {
                                failure = Some(());
                            }
                        }
                    }
                }
            }
            let _ = blk;
        }
        if failure.is_some() {
            return Err(Error::Validation("vectors do not span a submodule".into()));
        }
        let mut incl = Matrix::zeros(f, self.dim, sub.dim);
        for (sb, blk) in self.blocks.iter().enumerate() {
            if ech[sb].dim() == 0 {
                continue;
            }
            let nb = &sub.blocks[sub.block_index(blk.degree, blk.vertex).unwrap()];
            for (c, row) in ech[sb].rows().iter().enumerate() {
                for (r, &x) in row.iter().enumerate() {
                    incl.set(blk.offset + r, nb.offset + c, x);
                }
            }
        }
        Ok((sub, incl))
    }

    /// Quotient by the submodule spanned by `vectors`. Returns the
    /// quotient and the projection matrix.
    pub fn quotient(&self, vectors: &[Vec<u32>]) -> Result<(GradedModule, Matrix)> {
        let f = self.field();
        let mut ech: Vec<Echelon> = self.blocks.iter().map(|b| Echelon::new(f, b.dim)).collect();
        for v in vectors {
            for (bi, b) in self.blocks.iter().enumerate() {
                let local = &v[b.offset..b.offset + b.dim];
                if local.iter().any(|&x| x != 0) {
                    ech[bi].insert(local);
                }
            }
        }
        let comp: Vec<Vec<usize>> = ech.iter().map(|e| e.complement_indices()).collect();
        let project = |bi: usize, v: &[u32]| -> Vec<u32> {
            let mut w = v.to_vec();
            ech[bi].reduce(&mut w);
            comp[bi].iter().map(|&i| w[i]).collect()
        };
        let shape: Vec<_> = self
            .blocks
            .iter()
            .zip(&comp)
            .map(|(b, c)| (b.degree, b.vertex, c.len()))
            .collect();
        let q = GradedModule::from_blocks(self.alg.clone(), shape, |g, src, tgt| {
            let sb = self.block_index(src.degree, src.vertex).unwrap();
            let Some(tgt) = tgt else {
                return Matrix::zeros(f, 0, src.dim);
            };
            let tb = self.block_index(tgt.degree, tgt.vertex).unwrap();
            let mut out = Matrix::zeros(f, tgt.dim, src.dim);
            for (c, &i) in comp[sb].iter().enumerate() {
                let mut e = vec![0; self.blocks[sb].dim];
                e[i] = 1;
                let img = self.action[g][sb].mul_vec(&e);
                for (r, x) in project(tb, &img).into_iter().enumerate() {
                    out.set(r, c, x);
                }
            }
            out
        })?;
        let mut proj = Matrix::zeros(f, q.dim, self.dim);
        for (sb, blk) in self.blocks.iter().enumerate() {
            if comp[sb].is_empty() {
                continue;
            }
            let qb = &q.blocks[q.block_index(blk.degree, blk.vertex).unwrap()];
            for c in 0..blk.dim {
                let mut e = vec![0; blk.dim];
                e[c] = 1;
                for (r, x) in project(sb, &e).into_iter().enumerate() {
                    proj.set(qb.offset + r, blk.offset + c, x);
                }
            }
        }
        Ok((q, proj))
    }

    /// Per-block echelon of the radical `M·rad A`.
    fn radical_echelons(&self) -> Vec<Echelon> {
        let f = self.field();
        let mut ech: Vec<Echelon> = self.blocks.iter().map(|b| Echelon::new(f, b.dim)).collect();
        for g in 0..self.action.len() {
            for b in 0..self.blocks.len() {
                let Some(t) = self.gen_target(g, b) else { continue };
                let m = &self.action[g][b];
                for c in 0..m.cols() {
                    let col = m.column(c);
                    if col.iter().any(|&x| x != 0) {
                        ech[t].insert(&col);
                    }
                }
            }
        }
        ech
    }

    /// Basis vectors (standard unit vectors) spanning a complement of the
    /// radical: a minimal generating set.
    pub fn top_indices(&self) -> Vec<usize> {
        let ech = self.radical_echelons();
        let mut out = Vec::new();
        for (b, e) in self.blocks.iter().zip(&ech) {
            out.extend(e.complement_indices().into_iter().map(|i| b.offset + i));
        }
        out
    }

    /// Top `M / M rad A` as `(degree, vertex)` multiplicities.
    pub fn top_shape(&self) -> BTreeMap<(i32, usize), usize> {
        let mut out = BTreeMap::new();
        for i in self.top_indices() {
            *out.entry((self.degree_of(i), self.vertex_of(i))).or_insert(0) += 1;
        }
        out
    }

    pub fn radical_dim(&self) -> usize {
        self.radical_echelons().iter().map(|e| e.dim()).sum()
    }

    /// Socle: vectors killed by every generator.
    pub fn socle_shape(&self) -> BTreeMap<(i32, usize), usize> {
        let f = self.field();
        let mut out = BTreeMap::new();
        for (b, blk) in self.blocks.iter().enumerate() {
            let mut rows: Vec<Vec<u32>> = Vec::new();
            for g in 0..self.action.len() {
                if self.gen_target(g, b).is_some() {
                    let m = &self.action[g][b];
                    for r in 0..m.rows() {
                        rows.push(m.row(r).to_vec());
                    }
                }
            }
            let k = if rows.is_empty() {
                blk.dim
            } else {
                let mut m = Matrix::zeros(f, rows.len(), blk.dim);
                for (i, r) in rows.iter().enumerate() {
                    m.row_mut(i).copy_from_slice(r);
                }
                blk.dim - m.rank()
            };
            if k > 0 {
                out.insert((blk.degree, blk.vertex), k);
            }
        }
        out
    }

    fn spin(&self) -> Arc<Spin> {
        self.spin.get_or_init(|| Arc::new(self.compute_spin())).clone()
    }

    fn compute_spin(&self) -> Spin {
        let f = self.field();
        let nblocks = self.blocks.len();
        let mut ech: Vec<Echelon> = self.blocks.iter().map(|b| Echelon::tracking(f, b.dim)).collect();
        let mut steps: Vec<Step> = Vec::new();
        let mut block_steps: Vec<Vec<usize>> = vec![Vec::new(); nblocks];
        let mut tops = Vec::new();
        for i in self.top_indices() {
            let b = self.block_of_index(i);
            let mut local = vec![0; self.blocks[b].dim];
            local[i - self.blocks[b].offset] = 1;
            ech[b].insert(&local);
            block_steps[b].push(steps.len());
            tops.push(steps.len());
            steps.push(Step { block: b, local, parent: None });
        }
        let mut relations = Vec::new();
        let mut k = 0;
        while k < steps.len() {
            let b = steps[k].block;
            for g in 0..self.action.len() {
                let el = self.alg.elem(self.alg.generators()[g]);
                if el.src != self.blocks[b].vertex {
                    continue;
                }
                let Some(t) = self.gen_target(g, b) else {
                    relations.push(SpinRelation { step: k, gen: g, target: None });
                    continue;
                };
                let img = self.action[g][b].mul_vec(&steps[k].local);
                if let Some(expr) = ech[t].express(&img) {
                    let mut coeffs = vec![0; block_steps[t].len()];
                    for (i, c) in expr {
                        coeffs[i] = c;
                    }
                    relations.push(SpinRelation { step: k, gen: g, target: Some((t, coeffs)) });
                } else {
                    ech[t].insert(&img);
                    block_steps[t].push(steps.len());
                    steps.push(Step { block: t, local: img, parent: Some((k, g)) });
                }
            }
            k += 1;
        }
        let block_inv = (0..nblocks)
            .map(|b| {
                let cols: Vec<Vec<u32>> = block_steps[b].iter().map(|&s| steps[s].local.clone()).collect();
                Matrix::from_columns(f, self.blocks[b].dim, &cols)
                    .inverse()
                    .expect("spinning from the top spans the module")
            })
            .collect();
        Spin { steps, block_steps, block_inv, relations, tops }
    }

    /// Indices (into the basis) of the top vectors used by the spin, in
    /// the order that [`GradedModule::map_from_tops`] expects.
    pub fn generator_indices(&self) -> Vec<usize> {
        let spin = self.spin();
        spin.tops
            .iter()
            .map(|&s| {
                let st = &spin.steps[s];
                let off = self.blocks[st.block].offset;
                off + st.local.iter().position(|&x| x == 1).unwrap()
            })
            .collect()
    }

    /// Symbolic images of the spun vectors under a map `M -> N(p)` whose
    /// values on the top vectors are unknowns. Returns per step the N
    /// block (if any) and a matrix `N-block-dim x unknowns`, plus the
    /// unknown layout per top.
    fn symbolic_images(&self, n: &GradedModule, p: i32) -> (Vec<Option<(usize, Matrix)>>, Vec<(usize, Option<usize>)>, usize) {
        let f = self.field();
        let spin = self.spin();
        let mut layout = Vec::new();
        let mut u = 0;
        for &s in &spin.tops {
            let blk = &self.blocks[spin.steps[s].block];
            let nb = n.block_index(blk.degree + p, blk.vertex);
            layout.push((u, nb));
            u += nb.map_or(0, |b| n.blocks[b].dim);
        }
        let mut imgs: Vec<Option<(usize, Matrix)>> = Vec::with_capacity(spin.steps.len());
        let mut top_iter = 0;
        for st in &spin.steps {
            let img = match st.parent {
                None => {
                    let (off, nb) = layout[top_iter];
                    top_iter += 1;
                    nb.map(|nb| {
                        let d = n.blocks[nb].dim;
                        let mut m = Matrix::zeros(f, d, u);
                        for i in 0..d {
                            m.set(i, off + i, 1);
                        }
                        (nb, m)
                    })
                }
                Some((parent, g)) => imgs[parent].as_ref().and_then(|(pb, pm)| {
                    let t = n.gen_target(g, *pb)?;
                    Some((t, n.action[g][*pb].mul(pm)))
                }),
            };
            imgs.push(img);
        }
        (imgs, layout, u)
    }

    /// Basis of `Hom_gr(M, N(p))`: degree-`p` maps `M_d -> N_{d+p}`,
    /// each given as a `dim N x dim M` matrix.
    pub fn hom_space(&self, n: &GradedModule, p: i32) -> Result<Vec<Matrix>> {
        if !same_algebra(&self.alg, &n.alg) {
            return Err(Error::AlgebraMismatch("hom_space: modules over different algebras".into()));
        }
        let f = self.field();
        let spin = self.spin();
        let (imgs, _layout, u) = self.symbolic_images(n, p);
        if u == 0 {
            return Ok(vec![]);
        }
        let mut eq_rows: Vec<Vec<u32>> = Vec::new();
        for rel in &spin.relations {
            // A side whose block is missing in `N` contributes zero, but the
            // other side must still vanish.
            let mut lhs: Option<Matrix> = None;
            if let Some((nb, tk)) = &imgs[rel.step] {
                if n.gen_target(rel.gen, *nb).is_some() {
                    lhs = Some(n.action[rel.gen][*nb].mul(tk));
                }
            }
            if let Some((mb, coeffs)) = &rel.target {
                for (l, &c) in coeffs.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    if let Some((_, tl)) = &imgs[spin.block_steps[*mb][l]] {
                        lhs.get_or_insert_with(|| Matrix::zeros(f, tl.rows(), tl.cols())).add_scaled(f.neg(c), tl);
                    }
                }
            }
            let Some(lhs) = lhs else { continue };
            for r in 0..lhs.rows() {
                let row = lhs.row(r);
                if row.iter().any(|&x| x != 0) {
                    eq_rows.push(row.to_vec());
                }
            }
        }
        let kernel = if eq_rows.is_empty() {
            (0..u).map(|i| crate::algebra::unit(u, i)).collect()
        } else {
            let mut m = Matrix::zeros(f, eq_rows.len(), u);
            for (i, r) in eq_rows.iter().enumerate() {
                m.row_mut(i).copy_from_slice(r);
            }
            m.kernel_basis()
        };
        Ok(kernel.iter().map(|x| self.assemble_map(n, &imgs, x)).collect())
    }

    fn assemble_map(&self, n: &GradedModule, imgs: &[Option<(usize, Matrix)>], x: &[u32]) -> Matrix {
        let f = self.field();
        let spin = self.spin();
        let mut out = Matrix::zeros(f, n.dim, self.dim);
        for (b, blk) in self.blocks.iter().enumerate() {
            let steps = &spin.block_steps[b];
            let Some(first) = steps.first() else { continue };
            let Some((nb, _)) = &imgs[*first] else { continue };
            let nblk = &n.blocks[*nb];
            let cols: Vec<Vec<u32>> = steps
                .iter()
                .map(|&s| imgs[s].as_ref().map_or(vec![0; nblk.dim], |(_, m)| m.mul_vec(x)))
                .collect();
            let t = Matrix::from_columns(f, nblk.dim, &cols);
            let fb = t.mul(&spin.block_inv[b]);
            for r in 0..nblk.dim {
                for c in 0..blk.dim {
                    out.set(nblk.offset + r, blk.offset + c, fb.get(r, c));
                }
            }
        }
        out
    }

    /// The degree-`p` map `M -> N(p)` sending the `k`-th top vector (see
    /// [`GradedModule::generator_indices`]) to `images[k]` (full vectors in
    /// `N`). Relations are not checked; for projective `M` every choice
    /// gives a homomorphism.
    pub fn map_from_tops(&self, n: &GradedModule, p: i32, images: &[Vec<u32>]) -> Matrix {
        let (imgs, layout, u) = self.symbolic_images(n, p);
        let mut x = vec![0; u];
        for (k, (off, nb)) in layout.iter().enumerate() {
            if let Some(nb) = nb {
                let blk = &n.blocks[*nb];
                x[*off..*off + blk.dim].copy_from_slice(&images[k][blk.offset..blk.offset + blk.dim]);
            }
        }
        self.assemble_map(n, &imgs, &x)
    }

    /// Basis of `Hom_gr(M, N(p))` for every `p` where it can be nonzero.
    pub fn hom_all(&self, n: &GradedModule) -> Result<BTreeMap<i32, Vec<Matrix>>> {
        let mut out = BTreeMap::new();
        let (Some(lo_m), Some(hi_m), Some(lo_n), Some(hi_n)) =
            (self.min_degree(), self.max_degree(), n.min_degree(), n.max_degree())
        else {
            return Ok(out);
        };
        for p in (lo_n - hi_m)..=(hi_n - lo_m) {
            let h = self.hom_space(n, p)?;
            if !h.is_empty() {
                out.insert(p, h);
            }
        }
        Ok(out)
    }

    /// Check that a `dim N x dim M` matrix is a degree-`p` homomorphism.
    pub fn is_homomorphism(&self, n: &GradedModule, p: i32, map: &Matrix) -> bool {
        for i in 0..self.dim {
            for r in 0..n.dim {
                if map.get(r, i) != 0
                    && (n.degree_of(r) != self.degree_of(i) + p || n.vertex_of(r) != self.vertex_of(i))
                {
                    return false;
                }
            }
        }
        (0..self.action.len()).all(|g| map.mul(&self.gen_matrix(g)) == n.gen_matrix(g).mul(map))
    }

    /// Kernel of a degree-`p` map `M -> N(p)` as a submodule of `M`.
    pub fn kernel_of(&self, n: &GradedModule, p: i32, map: &Matrix) -> (GradedModule, Matrix) {
        let mut vecs = Vec::new();
        for blk in &self.blocks {
            let cols: Vec<usize> = (blk.offset..blk.offset + blk.dim).collect();
            let rows: Vec<usize> = match n.block_index(blk.degree + p, blk.vertex) {
                Some(nb) => (n.blocks[nb].offset..n.blocks[nb].offset + n.blocks[nb].dim).collect(),
                None => vec![],
            };
            let sub = map.select(&rows, &cols);
            let ker: Vec<Vec<u32>> = if rows.is_empty() {
                (0..blk.dim).map(|i| crate::algebra::unit(blk.dim, i)).collect()
            } else {
                sub.kernel_basis()
            };
            for k in ker {
                let mut v = vec![0; self.dim];
                v[blk.offset..blk.offset + blk.dim].copy_from_slice(&k);
                vecs.push(v);
            }
        }
        self.submodule(&vecs).expect("kernel of a homomorphism is a submodule")
    }

    /// Image of a degree-`p` map `M -> N(p)` as a submodule of `N`.
    pub fn image_of(n: &GradedModule, map: &Matrix) -> (GradedModule, Matrix) {
        let cols: Vec<Vec<u32>> = (0..map.cols()).map(|c| map.column(c)).collect();
        n.submodule(&cols).expect("image of a homomorphism is a submodule")
    }

    /// The dual `D M = Hom_k(M, k)` as a right module over `op`, which must
    /// be the opposite algebra of this module's algebra.
    pub fn dual(&self, op: Arc<FDAlgebra>) -> Result<GradedModule> {
        if op.generators() != self.alg.generators() || op.dim() != self.alg.dim() {
            return Err(Error::AlgebraMismatch("dual: target is not the opposite algebra".into()));
        }
        self.dual_twisted(op, |g| g)
    }

    /// Dual over an algebra `B` together with an anti-isomorphism
    /// `A -> B` that maps generator positions via `gen_map`: the
    /// `B`-generator `gen_map(g)` acts on `D M` by the transpose of the
    /// action of `g` on `M`.
    pub fn dual_twisted(&self, target: Arc<FDAlgebra>, gen_map: impl Fn(usize) -> usize) -> Result<GradedModule> {
        let f = self.field();
        let ng = self.action.len();
        let mut inverse = vec![usize::MAX; ng];
        for g in 0..ng {
            inverse[gen_map(g)] = g;
        }
        let shape = self.blocks.iter().map(|b| (-b.degree, b.vertex, b.dim)).collect();
        let me = self;
        let d = GradedModule::from_blocks(target.clone(), shape, |bg, src, tgt| {
            let g = inverse[bg];
            // Block src of D M is dual to block (-src.degree, src.vertex)
            // of M, which is the target of g from the block dual to tgt.
            let Some(tgt) = tgt else {
                return Matrix::zeros(f, 0, src.dim);
            };
            let mb = me.block_index(-tgt.degree, tgt.vertex).unwrap();
            match me.gen_target(g, mb) {
                Some(t) if me.blocks[t].degree == -src.degree && me.blocks[t].vertex == src.vertex => {
                    me.action[g][mb].transpose()
                }
                _ => Matrix::zeros(f, tgt.dim, src.dim),
            }
        })?;
        Ok(d)
    }

    /// Dual over an algebra `B` through an anti-isomorphism `A -> B`
    /// given backwards: the `B`-generator at position `h` acts on `D M`
    /// by the transpose of the action of the `A`-element `anti(h)`, and
    /// `vertex_map` sends vertices of `A` to vertices of `B`.
    pub fn dual_anti(
        &self,
        target: Arc<FDAlgebra>,
        anti: impl Fn(usize) -> SparseVec,
        vertex_map: impl Fn(usize) -> usize,
    ) -> Result<GradedModule> {
        let f = self.field();
        let mut back = HashMap::new();
        for v in 0..self.alg.num_vertices() {
            back.insert(vertex_map(v), v);
        }
        let shape = self.blocks.iter().map(|b| (-b.degree, vertex_map(b.vertex), b.dim)).collect();
        let me = self;
        GradedModule::from_blocks(target, shape, |h, src, tgt| {
            let Some(tgt) = tgt else {
                return Matrix::zeros(f, 0, src.dim);
            };
            let ms = me.block_index(-src.degree, back[&src.vertex]).unwrap();
            let mt = me.block_index(-tgt.degree, back[&tgt.vertex]).unwrap();
            match me.elem_block(&anti(h), mt) {
                Some((t, mat)) if t == ms => mat.transpose(),
                _ => Matrix::zeros(f, tgt.dim, src.dim),
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::GroebnerBounds;
    use crate::quiver::{Arrow, Quiver, QuiverPresentation};

    pub(crate) fn a_n(n: usize) -> Arc<FDAlgebra> {
        let f = Fp::new(32003).unwrap();
        let vertices = (1..=n).map(|i| i.to_string()).collect();
        let arrows = (0..n - 1)
            .map(|i| Arrow { name: format!("a{i}"), src: i, tgt: i + 1, degree: 0 })
            .collect();
        let pres = QuiverPresentation::new(f, Quiver::new(vertices, arrows).unwrap(), vec![]).unwrap();
        Arc::new(FDAlgebra::from_presentation(&pres, GroebnerBounds::default()).unwrap())
    }

    #[test]
    fn projectives_over_a2() {
        let a = a_n(2);
        let p1 = GradedModule::projective(a.clone(), 0, 0).unwrap();
        assert_eq!(p1.dim(), 2);
        p1.validate().unwrap();
        let p2 = GradedModule::projective(a.clone(), 1, 0).unwrap();
        assert_eq!(p2.dim(), 1);
        assert_eq!(p1.hom_space(&p1, 0).unwrap().len(), 1);
        assert_eq!(p2.hom_space(&p1, 0).unwrap().len(), 1);
        assert_eq!(p1.hom_space(&p2, 0).unwrap().len(), 0);
        let shifted = p1.shift(3);
        assert_eq!(shifted.min_degree(), Some(-3));
        assert_eq!(shifted.shift(-3).shape(), p1.shape());
    }

    #[test]
    fn homs_are_homomorphisms() {
        let a = a_n(3);
        let reg = GradedModule::regular(a.clone());
        let h = reg.hom_space(&reg, 0).unwrap();
        assert_eq!(h.len(), 6);
        for m in &h {
            assert!(reg.is_homomorphism(&reg, 0, m));
        }
    }

    #[test]
    fn simples_and_duals() {
        let a = a_n(2);
        let s1 = GradedModule::simple(a.clone(), 0, 0).unwrap();
        let s2 = GradedModule::simple(a.clone(), 1, 0).unwrap();
        assert!(s1.hom_space(&s2, 0).unwrap().is_empty());
        let op = Arc::new(a.opposite());
        let p1 = GradedModule::projective(a.clone(), 0, 0).unwrap();
        let d = p1.dual(op.clone()).unwrap();
        assert_eq!(d.dim(), 2);
        d.validate().unwrap();
        let dd = d.dual(a.clone()).unwrap();
        assert_eq!(dd.shape(), p1.shape());
    }

    #[test]
    fn kernel_of_cover_of_simple() {
        let a = a_n(2);
        let p1 = GradedModule::projective(a.clone(), 0, 0).unwrap();
        let s1 = GradedModule::simple(a.clone(), 0, 0).unwrap();
        let map = p1.map_from_tops(&s1, 0, &[vec![1]]);
        assert!(p1.is_homomorphism(&s1, 0, &map));
        let (k, _) = p1.kernel_of(&s1, 0, &map);
        assert_eq!(k.dim(), 1);
        assert_eq!(k.dim_vector(), vec![0, 1]);
    }
}
