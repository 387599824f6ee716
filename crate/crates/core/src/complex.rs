//! Bounded cochain complexes of graded free modules.
//!
//! `terms[i]` sits in cohomological degree `start + i` and `diffs[i]` maps
//! `terms[i] -> terms[i + 1]`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::FDAlgebra;
use crate::bimodule::Duality;
use crate::error::{Error, Result};
use crate::linalg::{sparse_combine, Echelon, Matrix, SparseVec};
use crate::module::GradedModule;
use crate::resolution::{mul_sparse, FreeMap, FreeModule, Resolution};

#[derive(Clone, Debug)]
pub struct ProjComplex {
    pub alg: Arc<FDAlgebra>,
    pub start: i32,
    pub terms: Vec<FreeModule>,
    pub diffs: Vec<FreeMap>,
}

/// Termwise split `X_{≤0} >-> X ->> X_{>0}` by generation degree.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub le0: ProjComplex,
    pub gt0: ProjComplex,
    /// Per term: the generators of `X` kept in `X_{≤0}`.
    pub le0_gens: Vec<Vec<usize>>,
    pub gt0_gens: Vec<Vec<usize>>,
}

impl ProjComplex {
    pub fn new(alg: Arc<FDAlgebra>, start: i32, terms: Vec<FreeModule>, diffs: Vec<FreeMap>) -> Result<Self> {
        if diffs.len() + 1 != terms.len().max(1) {
            return Err(Error::DimensionMismatch("complex needs one differential between consecutive terms".into()));
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.source != terms[i] || d.target != terms[i + 1] {
                return Err(Error::DimensionMismatch(format!("differential {i} does not match its terms")));
            }
        }
        let c = ProjComplex { alg, start, terms, diffs };
        if !c.is_complex() {
            return Err(Error::Validation("differentials do not square to zero".into()));
        }
        Ok(c)
    }

    pub fn zero(alg: Arc<FDAlgebra>) -> Self {
        ProjComplex { alg, start: 0, terms: vec![], diffs: vec![] }
    }

    /// A single free module in degree `n`.
    pub fn stalk(alg: Arc<FDAlgebra>, free: FreeModule, n: i32) -> Self {
        ProjComplex { alg, start: n, terms: vec![free], diffs: vec![] }
    }

    /// A projective resolution `P_• -> M` as the complex with `P_i` in
    /// degree `-i`.
    pub fn from_resolution(alg: Arc<FDAlgebra>, res: &Resolution) -> Self {
        let n = res.terms.len();
        if n == 0 {
            return ProjComplex::zero(alg);
        }
        let terms = res.terms.iter().rev().cloned().collect();
        let diffs = (0..n - 1).map(|k| res.differentials[n - 2 - k].clone()).collect();
        ProjComplex { alg, start: -(n as i32 - 1), terms, diffs }
    }

    /// Last degree holding a term.
    pub fn end(&self) -> i32 {
        self.start + self.terms.len() as i32 - 1
    }

    pub fn term(&self, n: i32) -> Option<&FreeModule> {
        let i = n - self.start;
        if i < 0 {
            return None;
        }
        self.terms.get(i as usize)
    }

    /// `d^n: X^n -> X^{n+1}`.
    pub fn diff(&self, n: i32) -> Option<&FreeMap> {
        let i = n - self.start;
        if i < 0 {
            return None;
        }
        self.diffs.get(i as usize)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.is_zero())
    }

    pub fn is_complex(&self) -> bool {
        self.diffs.windows(2).all(|w| w[1].compose(&w[0], &self.alg).is_zero())
    }

    /// `X[k]`, whose degree `n` term is `X^{n+k}`; differentials change
    /// sign for odd `k`.
    pub fn shift(&self, k: i32) -> ProjComplex {
        let f = self.alg.field();
        let diffs = if k % 2 == 0 {
            self.diffs.clone()
        } else {
            self.diffs.iter().map(|d| scale_map(f, d, f.neg(1))).collect()
        };
        ProjComplex { alg: self.alg.clone(), start: self.start - k, terms: self.terms.clone(), diffs }
    }

    /// Drop zero terms at both ends.
    pub fn trim(&mut self) {
        while self.terms.last().is_some_and(|t| t.is_zero()) {
            self.terms.pop();
            self.diffs.pop();
        }
        while self.terms.first().is_some_and(|t| t.is_zero()) {
            self.terms.remove(0);
            if !self.diffs.is_empty() {
                self.diffs.remove(0);
            }
            self.start += 1;
        }
        if self.terms.is_empty() {
            self.diffs.clear();
            self.start = 0;
        }
    }

    /// Remove contractible summands `P --u--> P` with `u` invertible, by
    /// Gaussian elimination, until every differential is radical.
    pub fn minimize(&mut self) {
        let alg = self.alg.clone();
        'outer: loop {
            for i in 0..self.diffs.len() {
                let d = &self.diffs[i];
                for (b, col) in d.entries.iter().enumerate() {
                    for (c, x) in col.iter().enumerate() {
                        if let Some(ui) = local_inverse(&alg, x) {
                            self.eliminate(i, b, c, &ui);
                            continue 'outer;
                        }
                    }
                }
            }
            break;
        }
        self.trim();
    }

    /// Eliminate source generator `b` and target generator `c` of
    /// `diffs[i]`, whose entry has inverse `ui`.
    fn eliminate(&mut self, i: usize, b: usize, c: usize, ui: &SparseVec) {
        let alg = self.alg.clone();
        let f = alg.field();
        {
            let d = &mut self.diffs[i];
            let xb: Vec<SparseVec> = d.entries[b].clone();
            for j in 0..d.entries.len() {
                if j == b || d.entries[j][c].is_empty() {
                    continue;
                }
                let t = mul_sparse(&alg, ui, &d.entries[j][c]);
                for (k, xkb) in xb.iter().enumerate() {
                    if k == c || xkb.is_empty() {
                        continue;
                    }
                    let corr = mul_sparse(&alg, xkb, &t);
                    let cur = std::mem::take(&mut d.entries[j][k]);
                    d.entries[j][k] = sparse_combine(f, [(1, cur), (f.neg(1), corr)]);
                }
            }
            d.entries.remove(b);
            for col in d.entries.iter_mut() {
                col.remove(c);
            }
        }
        self.terms[i].gens.remove(b);
        self.terms[i + 1].gens.remove(c);
        if i > 0 {
            for col in self.diffs[i - 1].entries.iter_mut() {
                col.remove(b);
            }
        }
        if i + 1 < self.diffs.len() {
            self.diffs[i + 1].entries.remove(c);
        }
        self.sync();
    }

    fn sync(&mut self) {
        for (i, d) in self.diffs.iter_mut().enumerate() {
            d.source = self.terms[i].clone();
            d.target = self.terms[i + 1].clone();
        }
    }

    /// `H^n(X)` as a graded module.
    pub fn homology(&self, n: i32) -> GradedModule {
        let alg = &self.alg;
        let Some(x) = self.term(n) else {
            return GradedModule::zero(alg.clone());
        };
        if x.is_zero() {
            return GradedModule::zero(alg.clone());
        }
        let real = x.realize(alg);
        let (ker, incl) = match self.diff(n) {
            Some(d) if !d.target.is_zero() => {
                let next = d.target.realize(alg);
                let m = d.matrix(&real, &next);
                real.module.kernel_of(&next.module, 0, &m)
            }
            _ => (real.module.clone(), Matrix::identity(alg.field(), real.module.dim())),
        };
        if ker.is_zero() {
            return ker;
        }
        let Some(dp) = self.diff(n - 1).filter(|d| !d.source.is_zero()) else {
            return ker;
        };
        let prev = dp.source.realize(alg);
        let m = dp.matrix(&prev, &real);
        let mut ech = Echelon::tracking(alg.field(), incl.rows());
        for c in 0..incl.cols() {
            ech.insert(&incl.column(c));
        }
        let image: Vec<Vec<u32>> = (0..m.cols())
            .map(|c| {
                let coords = ech.express(&m.column(c)).expect("image lies in the kernel");
                crate::linalg::to_dense(&coords, ker.dim())
            })
            .collect();
        ker.quotient(&image).expect("image is a submodule").0
    }

    /// Total dimension of each nonzero cohomology.
    pub fn homology_dims(&self) -> BTreeMap<i32, usize> {
        (self.start..=self.end())
            .map(|n| (n, self.homology(n).dim()))
            .filter(|&(_, d)| d > 0)
            .collect()
    }

    /// Split each term by generation degree: generators in degree `≤ 0`
    /// span the subcomplex `X_{≤0}`.
    pub fn truncate(&self) -> Truncation {
        let split = |pred: &dyn Fn(i32) -> bool| -> (ProjComplex, Vec<Vec<usize>>) {
            let keep: Vec<Vec<usize>> = self
                .terms
                .iter()
                .map(|t| (0..t.rank()).filter(|&k| pred(t.gens[k].1)).collect())
                .collect();
            let terms: Vec<FreeModule> = self
                .terms
                .iter()
                .zip(&keep)
                .map(|(t, ks)| FreeModule::new(ks.iter().map(|&k| t.gens[k]).collect()))
                .collect();
            let diffs = self
                .diffs
                .iter()
                .enumerate()
                .map(|(i, d)| FreeMap {
                    source: terms[i].clone(),
                    target: terms[i + 1].clone(),
                    entries: keep[i]
                        .iter()
                        .map(|&j| keep[i + 1].iter().map(|&k| d.entries[j][k].clone()).collect())
                        .collect(),
                })
                .collect();
            (ProjComplex { alg: self.alg.clone(), start: self.start, terms, diffs }, keep)
        };
        let (le0, le0_gens) = split(&|d| d <= 0);
        let (gt0, gt0_gens) = split(&|d| d > 0);
        Truncation { le0, gt0, le0_gens, gt0_gens }
    }

    /// Termwise dual `Hom(X, A)`: degree `n` holds the dual of `X^{-n}`.
    pub fn dual(&self, duality: &Duality) -> ProjComplex {
        let n = self.terms.len();
        let terms = self.terms.iter().rev().map(|t| duality.free_dual(t)).collect();
        let diffs = (0..n.saturating_sub(1)).map(|k| duality.map_dual(&self.diffs[n - 2 - k])).collect();
        ProjComplex { alg: duality.target.clone(), start: -self.end(), terms, diffs }
    }

    /// `X ⊗_Λ B` for a complex `X` of free right `Λ`-modules and a complex
    /// `B` of free `Λ^e`-modules, where `Λ^e = Λ ⊗ Λ^op` with pair indices.
    /// The enveloping generator at vertex `(i, j)` is `Λ e_j ⊗ e_i Λ`.
    pub fn tensor_bimodule(&self, b: &ProjComplex) -> ProjComplex {
        let lam = &self.alg;
        let f = lam.field();
        let (dl, n) = (lam.dim(), lam.num_vertices());
        let start = self.start + b.start;
        let len = (self.terms.len() + b.terms.len()).saturating_sub(1);
        // Generator (p, a, x, q, c): X-degree index p, X-generator a,
        // basis x ∈ e_{v_a} Λ e_{left(c)}, B-degree index q, B-generator c.
        type Key = (usize, usize, usize, usize, usize);
        let mut gens: Vec<Vec<Key>> = vec![Vec::new(); len];
        let mut free: Vec<Vec<(usize, i32)>> = vec![Vec::new(); len];
        for (p, xt) in self.terms.iter().enumerate() {
            for (q, bt) in b.terms.iter().enumerate() {
                for (a, &(va, da)) in xt.gens.iter().enumerate() {
                    for (c, &(vc, dc)) in bt.gens.iter().enumerate() {
                        let (right, left) = (vc / n, vc % n);
                        for x in lam.between(va, left) {
                            gens[p + q].push((p, a, x, q, c));
                            free[p + q].push((right, da + lam.elem(x).degree + dc));
                        }
                    }
                }
            }
        }
        let index: Vec<BTreeMap<Key, usize>> =
            gens.iter().map(|g| g.iter().enumerate().map(|(i, &k)| (k, i)).collect()).collect();
        let terms: Vec<FreeModule> = free.into_iter().map(FreeModule::new).collect();
        let mut diffs: Vec<FreeMap> =
            (0..len.saturating_sub(1)).map(|t| FreeMap::zero(terms[t].clone(), terms[t + 1].clone())).collect();
        for t in 0..len.saturating_sub(1) {
            for (j, &(p, a, x, q, c)) in gens[t].iter().enumerate() {
                let right = b.terms[q].gens[c].0 / n;
                let e_right = vec![(lam.idempotent(right), 1)];
                // d_X ⊗ 1
                if p + 1 < self.terms.len() {
                    for (a2, z) in self.diffs[p].entries[a].iter().enumerate() {
                        if z.is_empty() {
                            continue;
                        }
                        for &(x2, coef) in &mul_sparse(lam, z, &[(x, 1)]) {
                            let k = index[t + 1][&(p + 1, a2, x2, q, c)];
                            add_entry(f, &mut diffs[t].entries[j][k], coef, &e_right);
                        }
                    }
                }
                // (-1)^p 1 ⊗ d_B
                if q + 1 < b.terms.len() {
                    let sign = if (self.start + p as i32) % 2 == 0 { 1 } else { f.neg(1) };
                    for (c2, w) in b.diffs[q].entries[c].iter().enumerate() {
                        for &(pairidx, coef) in w {
                            // Enveloping basis (v, u): the bimodule term u·gen·v.
                            let (v, u) = (pairidx / dl, pairidx % dl);
                            for &(x2, c3) in lam.mul(x, u) {
                                let k = index[t + 1][&(p, a, x2, q + 1, c2)];
                                add_entry(f, &mut diffs[t].entries[j][k], f.mul(sign, f.mul(coef, c3)), &[(v, 1)]);
                            }
                        }
                    }
                }
            }
        }
        let mut out = ProjComplex { alg: lam.clone(), start, terms, diffs };
        out.trim();
        out
    }
}

fn add_entry(f: crate::field::Fp, slot: &mut SparseVec, c: u32, x: &[(usize, u32)]) {
    let cur = std::mem::take(slot);
    *slot = sparse_combine(f, [(1, cur), (c, x.to_vec())]);
}

fn scale_map(f: crate::field::Fp, d: &FreeMap, c: u32) -> FreeMap {
    let mut out = d.clone();
    for col in out.entries.iter_mut() {
        for x in col.iter_mut() {
            for t in x.iter_mut() {
                t.1 = f.mul(t.1, c);
            }
        }
    }
    out
}

/// Inverse of `λ e + r` in a local corner `e A e` (`λ ≠ 0`, `r` radical),
/// or `None` when the idempotent coefficient vanishes.
pub fn local_inverse(alg: &FDAlgebra, x: &SparseVec) -> Option<SparseVec> {
    let f = alg.field();
    let &(e, lam) = x.iter().find(|(b, _)| alg.is_idempotent(*b))?;
    let li = f.inv(lam);
    let s: SparseVec = x.iter().filter(|(b, _)| *b != e).map(|&(b, c)| (b, f.mul(f.neg(li), c))).collect();
    let mut term: SparseVec = vec![(e, 1)];
    let mut acc = term.clone();
    for _ in 0..=alg.dim() {
        term = mul_sparse(alg, &term, &s);
        if term.is_empty() {
            break;
        }
        acc = sparse_combine(f, [(1, acc), (1, term.clone())]);
    }
    Some(acc.into_iter().map(|(b, c)| (b, f.mul(li, c))).collect())
}
