//! Free modules, maps between them, and minimal graded projective
//! resolutions.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::FDAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, SparseVec};
use crate::module::GradedModule;

/// `⊕_k e_{v_k} A (-d_k)`: one generator per entry `(v_k, d_k)`, sitting at
/// vertex `v_k` in degree `d_k`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeModule {
    pub gens: Vec<(usize, i32)>,
}

impl FreeModule {
    pub fn new(gens: Vec<(usize, i32)>) -> Self {
        FreeModule { gens }
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// Dimension over the field.
    pub fn dim(&self, alg: &FDAlgebra) -> usize {
        self.gens.iter().map(|&(v, _)| alg.right_projective_basis(v).len()).sum()
    }

    pub fn realize(&self, alg: &Arc<FDAlgebra>) -> Realized {
        let parts: Vec<GradedModule> = self
            .gens
            .iter()
            .map(|&(v, d)| GradedModule::projective(alg.clone(), v, -d).unwrap())
            .collect();
        let (module, incl) = GradedModule::direct_sum(alg.clone(), &parts);
        let mut index = Vec::with_capacity(self.gens.len());
        for (k, &(v, d)) in self.gens.iter().enumerate() {
            let part = &parts[k];
            // Position of basis element b inside the projective part.
            let mut counters: BTreeMap<(i32, usize), usize> = BTreeMap::new();
            let mut map = HashMap::new();
            for b in alg.right_projective_basis(v) {
                let e = alg.elem(b);
                let key = (e.degree + d, e.tgt);
                let c = counters.entry(key).or_insert(0);
                let blk = &part.blocks()[part.block_index(key.0, key.1).unwrap()];
                let local = blk.offset + *c;
                *c += 1;
                let row = (0..module.dim()).find(|&r| incl[k].get(r, local) == 1).unwrap();
                map.insert(b, row);
            }
            index.push(map);
        }
        let top_gen: HashMap<usize, usize> = self
            .gens
            .iter()
            .enumerate()
            .map(|(k, &(v, _))| (index[k][&alg.idempotent(v)], k))
            .collect();
        let top_order = module.generator_indices().iter().map(|i| top_gen[i]).collect();
        Realized { free: self.clone(), module, index, top_order }
    }
}

/// A free module realized as a [`GradedModule`], with the position of
/// each `gen_k · b`.
#[derive(Clone, Debug)]
pub struct Realized {
    pub free: FreeModule,
    pub module: GradedModule,
    pub index: Vec<HashMap<usize, usize>>,
    /// Generator behind each spin top of `module`.
    pub top_order: Vec<usize>,
}

impl Realized {
    /// Vector of the element `Σ_k gen_k · x_k`.
    pub fn vector(&self, elems: &[SparseVec]) -> Vec<u32> {
        let f = self.module.field();
        let mut v = vec![0; self.module.dim()];
        for (k, x) in elems.iter().enumerate() {
            for &(b, c) in x {
                let i = self.index[k][&b];
                v[i] = f.add(v[i], c);
            }
        }
        v
    }

    /// Inverse of [`Realized::vector`].
    pub fn elements(&self, v: &[u32]) -> Vec<SparseVec> {
        self.index
            .iter()
            .map(|map| {
                let mut x: SparseVec = map.iter().filter(|(_, &i)| v[i] != 0).map(|(&b, &i)| (b, v[i])).collect();
                x.sort();
                x
            })
            .collect()
    }

    /// Homomorphism from this free module to `n` (degree 0) sending
    /// `gen_k` to `images[k]`.
    pub fn map_to(&self, n: &GradedModule, images: &[Vec<u32>]) -> Matrix {
        let ordered: Vec<Vec<u32>> = self.top_order.iter().map(|&k| images[k].clone()).collect();
        self.module.map_from_tops(n, 0, &ordered)
    }
}

/// Map of free modules `F -> G`: column `j` lists, for each generator `k`
/// of `G`, the coefficient `x_{kj} ∈ e_{v_k} A e_{w_j}` with
/// `d(gen_j) = Σ_k gen_k x_{kj}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeMap {
    pub source: FreeModule,
    pub target: FreeModule,
    /// `entries[j][k]`
    pub entries: Vec<Vec<SparseVec>>,
}

impl FreeMap {
    pub fn zero(source: FreeModule, target: FreeModule) -> Self {
        let entries = vec![vec![Vec::new(); target.rank()]; source.rank()];
        FreeMap { source, target, entries }
    }

    /// Matrix between the realizations.
    pub fn matrix(&self, src: &Realized, tgt: &Realized) -> Matrix {
        let images: Vec<Vec<u32>> = self.entries.iter().map(|col| tgt.vector(col)).collect();
        src.map_to(&tgt.module, &images)
    }

    /// `self ∘ other` where `other: E -> F`, `self: F -> G`.
    pub fn compose(&self, other: &FreeMap, alg: &FDAlgebra) -> FreeMap {
        let f = alg.field();
        let mut entries = vec![vec![Vec::new(); self.target.rank()]; other.source.rank()];
        for (j, col) in other.entries.iter().enumerate() {
            for (m, y) in col.iter().enumerate() {
                if y.is_empty() {
                    continue;
                }
                for (k, x) in self.entries[m].iter().enumerate() {
                    if x.is_empty() {
                        continue;
                    }
                    let prod = mul_sparse(alg, x, y);
                    let acc = std::mem::take(&mut entries[j][k]);
                    entries[j][k] = crate::linalg::sparse_combine(f, [(1, acc), (1, prod)]);
                }
            }
        }
        FreeMap { source: other.source.clone(), target: self.target.clone(), entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|c| c.iter().all(|x| x.is_empty()))
    }

    /// All entries lie in the radical (no idempotent components).
    pub fn is_radical(&self, alg: &FDAlgebra) -> bool {
        self.entries.iter().all(|c| c.iter().all(|x| x.iter().all(|&(b, _)| !alg.is_idempotent(b))))
    }
}

pub fn mul_sparse(alg: &FDAlgebra, x: &[(usize, u32)], y: &[(usize, u32)]) -> SparseVec {
    let f = alg.field();
    let mut terms = Vec::new();
    for &(a, c) in x {
        for &(b, d) in y {
            let p = alg.mul(a, b);
            if !p.is_empty() {
                terms.push((f.mul(c, d), p.clone()));
            }
        }
    }
    crate::linalg::sparse_combine(f, terms)
}

/// Projective cover `P -> M`: the free module on a minimal generating set
/// and the epimorphism (as a matrix from the realization of `P`).
pub fn projective_cover(m: &GradedModule) -> Result<(FreeModule, Realized, Matrix)> {
    if m.is_zero() {
        return Err(Error::ZeroModule);
    }
    let tops = m.generator_indices();
    let free = FreeModule::new(tops.iter().map(|&i| (m.vertex_of(i), m.degree_of(i))).collect());
    let real = free.realize(m.algebra());
    let images: Vec<Vec<u32>> = tops.iter().map(|&i| crate::algebra::unit(m.dim(), i)).collect();
    let map = real.map_to(m, &images);
    Ok((free, real, map))
}

/// Minimal graded projective resolution `... -> P_1 -> P_0 -> M`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Resolution {
    pub terms: Vec<FreeModule>,
    /// `differentials[i]: P_{i+1} -> P_i`.
    pub differentials: Vec<FreeMap>,
    /// True when the last computed syzygy is zero.
    pub complete: bool,
    #[serde(skip)]
    pub syzygies: Vec<GradedModule>,
    /// Realization of each computed term.
    #[serde(skip)]
    pub realized: Vec<Realized>,
    /// `covers[i]: P_i ->> Ω^i M`.
    #[serde(skip)]
    pub covers: Vec<Matrix>,
    /// `inclusions[i]: Ω^{i+1} M >-> P_i`.
    #[serde(skip)]
    pub inclusions: Vec<Matrix>,
}

impl Resolution {
    /// Resolve `m` up to `P_len` (or until a syzygy vanishes).
    pub fn compute(m: &GradedModule, len: usize) -> Resolution {
        let alg = m.algebra().clone();
        let mut terms = Vec::new();
        let mut differentials = Vec::new();
        let mut syzygies = vec![m.clone()];
        let mut realized = Vec::new();
        let mut covers = Vec::new();
        let mut inclusions = Vec::new();
        if m.is_zero() {
            return Resolution { terms, differentials, complete: true, syzygies, realized, covers, inclusions };
        }
        let (free, mut real, aug) = projective_cover(m).unwrap();
        terms.push(free);
        let (mut kernel, mut incl) = real.module.kernel_of(m, 0, &aug);
        covers.push(aug);
        loop {
            syzygies.push(kernel.clone());
            inclusions.push(incl.clone());
            realized.push(real.clone());
            let complete = kernel.is_zero();
            if complete || terms.len() > len {
                return Resolution { terms, differentials, complete, syzygies, realized, covers, inclusions };
            }
            let tops = kernel.generator_indices();
            let next = FreeModule::new(tops.iter().map(|&i| (kernel.vertex_of(i), kernel.degree_of(i))).collect());
            let images: Vec<Vec<u32>> =
                tops.iter().map(|&i| incl.mul_vec(&crate::algebra::unit(kernel.dim(), i))).collect();
            let entries = images.iter().map(|v| real.elements(v)).collect();
            let d = FreeMap { source: next.clone(), target: terms.last().unwrap().clone(), entries };
            let next_real = next.realize(&alg);
            let cover = next_real.map_to(&kernel, &tops.iter().map(|&i| crate::algebra::unit(kernel.dim(), i)).collect::<Vec<_>>());
            covers.push(cover);
            let dm = d.matrix(&next_real, &real);
            let (k2, i2) = next_real.module.kernel_of(&real.module, 0, &dm);
            terms.push(next);
            differentials.push(d);
            real = next_real;
            kernel = k2;
            incl = i2;
        }
    }

    /// Projective dimension if the resolution reached zero.
    pub fn projective_dimension(&self) -> Option<usize> {
        if self.complete {
            Some(self.terms.len().saturating_sub(1))
        } else {
            None
        }
    }

    /// Graded dimensions of `Ext^j(M, N(q))` for each internal degree `q`.
    /// Requires `P_{j+1}` to be computed unless the resolution is complete.
    pub fn ext(&self, n: &GradedModule, j: usize) -> Result<BTreeMap<i32, usize>> {
        if !self.complete && self.terms.len() < j + 2 {
            return Err(Error::Validation(format!("resolution too short for Ext^{j}")));
        }
        let mut out = BTreeMap::new();
        let Some(term) = self.terms.get(j) else {
            return Ok(out);
        };
        let (Some(lo), Some(hi)) = (n.min_degree(), n.max_degree()) else {
            return Ok(out);
        };
        let dmin = term.gens.iter().map(|g| g.1).min();
        let dmax = term.gens.iter().map(|g| g.1).max();
        let (Some(dmin), Some(dmax)) = (dmin, dmax) else {
            return Ok(out);
        };
        for q in (lo - dmax)..=(hi - dmin) {
            let c = cochain_dim(term, n, q);
            if c == 0 {
                continue;
            }
            let r_out = self.differentials.get(j).map_or(0, |d| hom_differential(d, n, q).rank());
            let r_in = if j == 0 { 0 } else { hom_differential(&self.differentials[j - 1], n, q).rank() };
            let dim = c - r_out - r_in;
            if dim > 0 {
                out.insert(q, dim);
            }
        }
        Ok(out)
    }
}

/// `dim Hom_gr(F, N(q))` for a free module `F`.
pub fn cochain_dim(free: &FreeModule, n: &GradedModule, q: i32) -> usize {
    free.gens
        .iter()
        .map(|&(v, d)| n.block_index(d + q, v).map_or(0, |b| n.blocks()[b].dim))
        .sum()
}

/// Matrix of `Hom(G, N(q)) -> Hom(F, N(q))`, `f ↦ f ∘ d`, for `d: F -> G`,
/// on the block coordinates `⊕_k N_{(d_k + q, v_k)}`.
pub fn hom_differential(d: &FreeMap, n: &GradedModule, q: i32) -> Matrix {
    let f = n.field();
    let offsets = |free: &FreeModule| {
        let mut offs = Vec::new();
        let mut o = 0;
        for &(v, dg) in &free.gens {
            let b = n.block_index(dg + q, v);
            offs.push((o, b));
            o += b.map_or(0, |b| n.blocks()[b].dim);
        }
        (offs, o)
    };
    let (src_off, src_dim) = offsets(&d.target);
    let (tgt_off, tgt_dim) = offsets(&d.source);
    let mut m = Matrix::zeros(f, tgt_dim, src_dim);
    for (j, col) in d.entries.iter().enumerate() {
        let (ro, Some(rb)) = tgt_off[j] else { continue };
        for (k, x) in col.iter().enumerate() {
            let (co, Some(cb)) = src_off[k] else { continue };
            if x.is_empty() {
                continue;
            }
            if let Some((t, block)) = n.elem_block(x, cb) {
                debug_assert_eq!(t, rb);
                for r in 0..block.rows() {
                    for c in 0..block.cols() {
                        let v = block.get(r, c);
                        if v != 0 {
                            m.add_at(ro + r, co + c, v);
                        }
                    }
                }
            }
        }
    }
    m
}

/// `Ω^n M`.
pub fn syzygy(m: &GradedModule, n: usize) -> GradedModule {
    if n == 0 {
        return m.clone();
    }
    let r = Resolution::compute(m, n - 1);
    r.syzygies.get(n).cloned().unwrap_or_else(|| GradedModule::zero(m.algebra().clone()))
}

/// Projective dimension, or `None` if it exceeds `bound`.
pub fn proj_dim(m: &GradedModule, bound: usize) -> Option<usize> {
    Resolution::compute(m, bound).projective_dimension().filter(|&p| p <= bound)
}

/// Injective dimension via the projective dimension of the dual over the
/// opposite algebra.
pub fn inj_dim(m: &GradedModule, op: Arc<FDAlgebra>, bound: usize) -> Result<Option<usize>> {
    Ok(proj_dim(&m.dual(op)?, bound))
}

/// Global dimension (max projective dimension of the simples), or `None`
/// if some simple exceeds `bound`.
pub fn global_dimension(alg: &Arc<FDAlgebra>, bound: usize) -> Option<usize> {
    let mut best = 0;
    for v in 0..alg.num_vertices() {
        let s = GradedModule::simple(alg.clone(), v, 0).unwrap();
        best = best.max(proj_dim(&s, bound)?);
    }
    Some(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::groebner::GroebnerBounds;
    use crate::quiver::{Arrow, Quiver, QuiverPresentation};

    fn linear(n: usize, rad2: bool) -> Arc<FDAlgebra> {
        let f = Fp::new(32003).unwrap();
        let vertices = (1..=n).map(|i| i.to_string()).collect();
        let arrows = (0..n - 1)
            .map(|i| Arrow { name: format!("a{i}"), src: i, tgt: i + 1, degree: 0 })
            .collect();
        let rels = if rad2 { (0..n - 2).map(|i| vec![(1, vec![i, i + 1])]).collect() } else { vec![] };
        let pres = QuiverPresentation::new(f, Quiver::new(vertices, arrows).unwrap(), rels).unwrap();
        Arc::new(FDAlgebra::from_presentation(&pres, GroebnerBounds::default()).unwrap())
    }

    #[test]
    fn resolutions_over_a2() {
        let a = linear(2, false);
        let s1 = GradedModule::simple(a.clone(), 0, 0).unwrap();
        let s2 = GradedModule::simple(a.clone(), 1, 0).unwrap();
        assert!(syzygy(&s2, 1).is_zero());
        let om = syzygy(&s1, 1);
        assert_eq!(om.dim_vector(), vec![0, 1]);
        assert_eq!(proj_dim(&s1, 5), Some(1));
        let r = Resolution::compute(&s1, 3);
        assert_eq!(r.ext(&s2, 1).unwrap(), BTreeMap::from([(0, 1)]));
        assert!(r.ext(&s1, 1).unwrap().is_empty());
        assert_eq!(r.ext(&s1, 0).unwrap(), BTreeMap::from([(0, 1)]));
    }

    #[test]
    fn global_dimension_of_rad_square_zero() {
        assert_eq!(global_dimension(&linear(3, true), 10), Some(2));
        assert_eq!(global_dimension(&linear(4, false), 10), Some(1));
    }

    #[test]
    fn differentials_compose_to_zero() {
        let a = linear(4, true);
        let s = GradedModule::simple(a.clone(), 0, 0).unwrap();
        let r = Resolution::compute(&s, 4);
        assert_eq!(r.projective_dimension(), Some(3));
        for w in r.differentials.windows(2) {
            assert!(w[0].compose(&w[1], &a).is_zero());
        }
        assert!(r.differentials.iter().all(|d| d.is_radical(&a)));
    }
}
