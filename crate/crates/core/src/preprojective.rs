//! Higher preprojective algebras: the double quiver for `d = 2`, quivers
//! with potential for `d = 3`, and the tensor algebra `T_Λ E` with
//! `E = Ext^{d-1}_Λ(DΛ, Λ)` in general.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::{BasisElem, FDAlgebra, Presented};
use crate::bimodule::Duality;
use crate::complex::ProjComplex;
use crate::error::{Error, Result};
use crate::field::Fp;
use crate::groebner::GroebnerBounds;
use crate::linalg::{sparse_combine, Echelon, Matrix, SparseVec};
use crate::module::GradedModule;
use crate::quiver::{Arrow, PathPoly, Quiver, QuiverPresentation, QuiverWithPotential};
use crate::resolution::{global_dimension, FreeMap, FreeModule, Resolution};

pub const DEFAULT_MAX_DEGREE: usize = 64;

/// The preprojective algebra of an acyclic quiver: reversed arrows `ā` in
/// degree 1 and, at each vertex `i`, the relation
/// `Σ_{s(a)=i} a ā - Σ_{t(a)=i} ā a` (paths written in traversal order).
pub fn double_quiver_pi2(q: &Quiver, field: Fp) -> Result<QuiverPresentation> {
    if q.has_oriented_cycle() {
        return Err(Error::CyclicQuiver);
    }
    let m = q.arrows.len();
    let mut arrows: Vec<Arrow> = q.arrows.iter().map(|a| Arrow { degree: 0, ..a.clone() }).collect();
    for a in &q.arrows {
        arrows.push(Arrow { name: format!("{}*", a.name), src: a.tgt, tgt: a.src, degree: 1 });
    }
    let double = Quiver::new(q.vertices.clone(), arrows)?;
    let minus = field.neg(1);
    let rels: Vec<PathPoly> = (0..q.num_vertices())
        .map(|i| {
            let mut r = Vec::new();
            for (a, arr) in q.arrows.iter().enumerate() {
                if arr.src == i {
                    r.push((1, vec![a, m + a]));
                }
                if arr.tgt == i {
                    r.push((minus, vec![m + a, a]));
                }
            }
            r
        })
        .collect();
    QuiverPresentation::new(field, double, rels)
}

/// Terms `(c, u, v)` of `∂_{a,b} W`: the `b`-component of the bimodule
/// derivative of `∂_a W`, i.e. `Σ_{p = u a v₁ b v₂} v₁ ⊗ v₂u +
/// Σ_{p = u₁ b u₂ a v} v u₁ ⊗ u₂` over the cycles `p` of `W`.
pub fn second_derivative(qp: &QuiverWithPotential, a: usize, b: usize) -> Result<Vec<(u32, Vec<usize>, Vec<usize>)>> {
    let na = qp.quiver.arrows.len();
    if a >= na || b >= na {
        return Err(Error::BadIndex(format!("arrow {} or {}", a, b)));
    }
    let mut out = Vec::new();
    for (c, cycle) in &qp.potential {
        let len = cycle.len();
        for i in 0..len {
            if cycle[i] != a {
                continue;
            }
            // Rotate so that the occurrence of a comes first: a w.
            let w: Vec<usize> = (1..len).map(|k| cycle[(i + k) % len]).collect();
            for (k, &x) in w.iter().enumerate() {
                if x == b {
                    out.push((*c, w[..k].to_vec(), w[k + 1..].to_vec()));
                }
            }
        }
    }
    Ok(out)
}

/// The Jacobian algebra `kQ / (∂_a W)`, rejecting non-admissible ideals.
pub fn jacobian(qp: &QuiverWithPotential, bounds: GroebnerBounds) -> Result<Presented> {
    Presented::new(&qp.jacobian_presentation()?, bounds)
}

/// The three-term bimodule complex `P_2 -> P_1 -> P_0` of a Jacobian
/// algebra, with `P_2` indexed by arrows: the generator of `a` is
/// `J e_{t(a)} ⊗ e_{s(a)} J` in degree `deg W - deg a`, and
/// `d_2(a)` has `b`-component `∂_{a,b} W`.
pub fn qp_bimodule_complex(qp: &QuiverWithPotential, jac: &Presented) -> Result<ProjComplex> {
    let lam = &jac.algebra;
    let f = lam.field();
    let q = &qp.quiver;
    let (dl, n) = (lam.dim(), lam.num_vertices());
    let wdeg = qp.potential.first().map_or(0, |(_, p)| q.path_degree(p));
    let pair = |u: &SparseVec, v: &SparseVec| -> SparseVec {
        let mut out = Vec::new();
        for &(x, c) in v {
            for &(y, d) in u {
                out.push((x * dl + y, f.mul(c, d)));
            }
        }
        out.sort();
        out
    };
    let p0 = FreeModule::new((0..n).map(|v| (v * n + v, 0)).collect());
    let p1 = FreeModule::new(q.arrows.iter().map(|a| (a.tgt * n + a.src, a.degree)).collect());
    let p2 = FreeModule::new(q.arrows.iter().map(|a| (a.src * n + a.tgt, wdeg - a.degree)).collect());
    let mut d1 = FreeMap::zero(p1.clone(), p0.clone());
    for (a, arr) in q.arrows.iter().enumerate() {
        let x = vec![(jac.arrows[a], 1)];
        let es = vec![(lam.idempotent(arr.src), 1)];
        let et = vec![(lam.idempotent(arr.tgt), 1)];
        let plus = pair(&x, &et);
        let minus = pair(&es, &x);
        let cur = std::mem::take(&mut d1.entries[a][arr.tgt]);
        d1.entries[a][arr.tgt] = sparse_combine(f, [(1, cur), (1, plus)]);
        let cur = std::mem::take(&mut d1.entries[a][arr.src]);
        d1.entries[a][arr.src] = sparse_combine(f, [(1, cur), (f.neg(1), minus)]);
    }
    let mut d2 = FreeMap::zero(p2.clone(), p1.clone());
    for a in 0..q.arrows.len() {
        for b in 0..q.arrows.len() {
            let mut terms = Vec::new();
            for (c, u, v) in second_derivative(qp, a, b)? {
                let us = jac.path(q.arrows[a].tgt, &u);
                let vs = jac.path(q.arrows[b].tgt, &v);
                terms.push((c, pair(&us, &vs)));
            }
            d2.entries[a][b] = sparse_combine(f, terms);
        }
    }
    ProjComplex::new(Arc::new(lam.enveloping()), -2, vec![p2, p1, p0], vec![d2, d1])
}

/// Keller's quiver with potential for an algebra of global dimension at
/// most 2: one arrow `a_r: t(r) -> s(r)` of degree 1 per relation and
/// `W = Σ a_r r`. The relations must form bases of the `Ext²` spaces
/// between simples.
pub fn keller_qp(p: &Presented) -> Result<QuiverWithPotential> {
    let lam = &p.algebra;
    let pres = &p.presentation;
    match global_dimension(lam, 3) {
        Some(g) if g <= 2 => {}
        Some(g) => return Err(Error::GlobalDimensionTooLarge { found: g, allowed: 2 }),
        None => return Err(Error::InfiniteGlobalDimension(3)),
    }
    let n = lam.num_vertices();
    let mut counts = vec![vec![0usize; n]; n];
    for r in 0..pres.relations.len() {
        let (s, t) = pres.relation_ends(r);
        counts[s][t] += 1;
    }
    for i in 0..n {
        let si = GradedModule::simple(lam.clone(), i, 0)?;
        let res = Resolution::compute(&si, 3);
        for j in 0..n {
            let sj = GradedModule::simple(lam.clone(), j, 0)?;
            let ext: usize = res.ext(&sj, 2)?.values().sum();
            if ext != counts[i][j] {
                return Err(Error::RelationsNotMinimal(format!(
                    "dim Ext^2(S_{}, S_{}) = {} but there are {} relations",
                    lam.vertex_names()[i],
                    lam.vertex_names()[j],
                    ext,
                    counts[i][j]
                )));
            }
        }
    }
    let q = &pres.quiver;
    let mut arrows = q.arrows.clone();
    let mut potential = Vec::new();
    for (r, rel) in pres.relations.iter().enumerate() {
        let (s, t) = pres.relation_ends(r);
        let mut name = format!("r{}", r + 1);
        while arrows.iter().any(|a| a.name == name) {
            name.push('\'');
        }
        let idx = arrows.len();
        arrows.push(Arrow { name, src: t, tgt: s, degree: 1 });
        for (c, path) in rel {
            let mut cycle = vec![idx];
            cycle.extend_from_slice(path);
            potential.push((*c, cycle));
        }
    }
    QuiverWithPotential::new(pres.field, Quiver::new(q.vertices.clone(), arrows)?, potential)
}

/// `E = Ext^{d-1}_Λ(DΛ, Λ)` as a module over `Λ^e`.
#[derive(Clone, Debug)]
pub struct ExtBimodule {
    pub lambda: Arc<FDAlgebra>,
    pub env: Arc<FDAlgebra>,
    pub module: GradedModule,
}

impl ExtBimodule {
    pub fn dim(&self) -> usize {
        self.module.dim()
    }
}

/// `Θ = Hom_{Λ^e}(Q, Λ^e)` for the minimal bimodule resolution `Q` of
/// `Λ`; it computes `RHom_Λ(DΛ, Λ)` as a complex of bimodules.
pub fn inverse_dualizing_complex(lambda: &Arc<FDAlgebra>, bound: usize) -> Result<ProjComplex> {
    let env = Arc::new(lambda.enveloping());
    let all: Vec<usize> = (0..lambda.dim()).collect();
    let regular = crate::bimodule::bimodule_on(lambda, &env, &all, &all)?;
    let res = Resolution::compute(&regular, bound + 1);
    if !res.complete {
        return Err(Error::InfiniteGlobalDimension(bound));
    }
    let q = ProjComplex::from_resolution(env.clone(), &res);
    Ok(q.dual(&Duality::swap(lambda, env)))
}

pub fn ext_bimodule(lambda: &Arc<FDAlgebra>, d: usize) -> Result<ExtBimodule> {
    if d == 0 {
        return Err(Error::Validation("d must be at least 1".into()));
    }
    match global_dimension(lambda, d - 1) {
        Some(_) => {}
        None => return Err(Error::GlobalDimensionTooLarge { found: d, allowed: d - 1 }),
    }
    let theta = inverse_dualizing_complex(lambda, d)?;
    let module = theta.homology(d as i32 - 1);
    // Cross-check against the one-sided computation of Ext^{d-1}(DΛ, Λ).
    let op = Arc::new(lambda.opposite());
    let dl = GradedModule::regular(op).dual(lambda.clone())?;
    let res = Resolution::compute(&dl, d);
    let one_sided: usize = res.ext(&GradedModule::regular(lambda.clone()), d - 1)?.values().sum();
    if one_sided != module.dim() {
        return Err(Error::Validation(format!(
            "Ext bimodule has dimension {} but the one-sided Ext has {}",
            module.dim(),
            one_sided
        )));
    }
    Ok(ExtBimodule { lambda: lambda.clone(), env: theta.alg.clone(), module })
}

/// One graded piece `Π_p`, `p ≥ 2`, as a quotient of `Π_{p-1} ⊗_k E`.
struct Piece {
    /// Compatible pure tensors `(basis of Π_{p-1}, basis of E)`.
    pairs: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    relations: Echelon,
    /// Pair index of each basis element of `Π_p`.
    basis: Vec<usize>,
}

impl Piece {
    fn project(&self, f: Fp, v: &SparseVec) -> SparseVec {
        let mut w = vec![0; self.pairs.len()];
        for &(i, c) in v {
            w[i] = f.add(w[i], c);
        }
        self.relations.reduce(&mut w);
        self.basis.iter().enumerate().filter(|(_, &i)| w[i] != 0).map(|(k, &i)| (k, w[i])).collect()
    }
}

/// `Π_d(Λ) = T_Λ E`, graded by tensor degree, by structure constants.
pub fn tensor_pi_d(lambda: &Arc<FDAlgebra>, d: usize, max_degree: usize) -> Result<FDAlgebra> {
    if !lambda.is_concentrated_in_degree_zero() {
        return Err(Error::Validation("the base algebra must be concentrated in degree 0".into()));
    }
    let e = ext_bimodule(lambda, d)?;
    tensor_algebra(lambda, &e.module, max_degree)
}

/// The tensor algebra of a bimodule `E` (a module over `Λ^e`) over `Λ`,
/// which must be finite-dimensional with top degree below `max_degree`.
pub fn tensor_algebra(lambda: &Arc<FDAlgebra>, e: &GradedModule, max_degree: usize) -> Result<FDAlgebra> {
    let f = lambda.field();
    let (dl, n) = (lambda.dim(), lambda.num_vertices());
    let de = e.dim();
    let env_dim = e.algebra().dim();
    // Sides of the E basis: vertex (i, j) holds e_j E e_i.
    let e_src: Vec<usize> = (0..de).map(|k| e.vertex_of(k) % n).collect();
    let e_tgt: Vec<usize> = (0..de).map(|k| e.vertex_of(k) / n).collect();
    let unit = |len: usize, i: usize| crate::algebra::unit(len, i);
    let env_elem = |terms: Vec<usize>| {
        let mut v = vec![0; env_dim];
        for t in terms {
            v[t] = 1;
        }
        v
    };
    // E·x = E·(x ⊗ 1) and y·E = E·(1 ⊗ y).
    let e_right: Vec<Matrix> = (0..dl)
        .map(|x| {
            let el = env_elem((0..n).map(|j| x * dl + lambda.idempotent(j)).collect());
            let cols: Vec<Vec<u32>> = (0..de).map(|k| e.act_elem(&unit(de, k), &el)).collect();
            Matrix::from_columns(f, de, &cols)
        })
        .collect();
    let e_left: Vec<Matrix> = (0..dl)
        .map(|y| {
            let el = env_elem((0..n).map(|i| lambda.idempotent(i) * dl + y).collect());
            let cols: Vec<Vec<u32>> = (0..de).map(|k| e.act_elem(&unit(de, k), &el)).collect();
            Matrix::from_columns(f, de, &cols)
        })
        .collect();
    let col_sparse = |m: &Matrix, k: usize| -> SparseVec { crate::linalg::to_sparse(&m.column(k)) };

    // Local basis data: (src, tgt) per piece.
    let mut ends: Vec<Vec<(usize, usize)>> = vec![
        (0..dl).map(|x| (lambda.elem(x).src, lambda.elem(x).tgt)).collect(),
        (0..de).map(|k| (e_src[k], e_tgt[k])).collect(),
    ];
    let mut pieces: Vec<Option<Piece>> = vec![None, None];
    // Right and left Λ-actions per piece: act[p][x] = matrix on piece p.
    let mut right: Vec<Vec<Matrix>> = vec![
        (0..dl).map(|x| lambda_mult_matrix(lambda, x, true)).collect(),
        e_right.clone(),
    ];
    let mut left: Vec<Vec<Matrix>> = vec![
        (0..dl).map(|y| lambda_mult_matrix(lambda, y, false)).collect(),
        e_left.clone(),
    ];
    if de == 0 {
        ends.pop();
        pieces.pop();
        right.pop();
        left.pop();
    }
    let gens: Vec<usize> = lambda.generators().to_vec();
    while ends.len() > 1 {
        let p = ends.len();
        let prev = &ends[p - 1];
        if p > max_degree {
            return Err(Error::MaxDegreeReached(max_degree));
        }
        let mut pairs = Vec::new();
        for (m, &(_, t)) in prev.iter().enumerate() {
            for k in 0..de {
                if e_src[k] == t {
                    pairs.push((m, k));
                }
            }
        }
        let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &pk)| (pk, i)).collect();
        let mut relations = Echelon::new(f, pairs.len());
        for m in 0..prev.len() {
            for &g in &gens {
                let mg = col_sparse(&right[p - 1][g], m);
                for k in 0..de {
                    let gk = col_sparse(&e_left[g], k);
                    let mut v = vec![0; pairs.len()];
                    for &(m2, c) in &mg {
                        if let Some(&i) = index.get(&(m2, k)) {
                            v[i] = f.add(v[i], c);
                        }
                    }
                    for &(k2, c) in &gk {
                        if let Some(&i) = index.get(&(m, k2)) {
                            v[i] = f.sub(v[i], c);
                        }
                    }
                    if v.iter().any(|&x| x != 0) {
                        relations.insert(&v);
                    }
                }
            }
        }
        let basis = relations.complement_indices();
        if basis.is_empty() {
            break;
        }
        let piece = Piece { pairs, index, relations, basis };
        let piece_ends: Vec<(usize, usize)> =
            piece.basis.iter().map(|&i| (prev[piece.pairs[i].0].0, e_tgt[piece.pairs[i].1])).collect();
        // Actions on the new piece.
        let dim_p = piece.basis.len();
        let mut r_act = Vec::with_capacity(dl);
        let mut l_act = Vec::with_capacity(dl);
        for x in 0..dl {
            let mut rm = Matrix::zeros(f, dim_p, dim_p);
            let mut lm = Matrix::zeros(f, dim_p, dim_p);
            for (col, &i) in piece.basis.iter().enumerate() {
                let (m, k) = piece.pairs[i];
                let nx = col_sparse(&e_right[x], k);
                let v: SparseVec = nx.iter().filter_map(|&(k2, c)| piece.index.get(&(m, k2)).map(|&j| (j, c))).collect();
                for (r, c) in piece.project(f, &sorted(v)) {
                    rm.set(r, col, c);
                }
                let xm = col_sparse(&left[p - 1][x], m);
                let v: SparseVec = xm.iter().filter_map(|&(m2, c)| piece.index.get(&(m2, k)).map(|&j| (j, c))).collect();
                for (r, c) in piece.project(f, &sorted(v)) {
                    lm.set(r, col, c);
                }
            }
            r_act.push(rm);
            l_act.push(lm);
        }
        ends.push(piece_ends);
        pieces.push(Some(piece));
        right.push(r_act);
        left.push(l_act);
    }
    // Global basis.
    let mut offsets = Vec::new();
    let mut basis = Vec::new();
    for (p, list) in ends.iter().enumerate() {
        offsets.push(basis.len());
        for (k, &(s, t)) in list.iter().enumerate() {
            let label = match p {
                0 => lambda.elem(k).label.clone(),
                _ => format!("t{p}.{k}"),
            };
            basis.push(BasisElem { label, src: s, tgt: t, degree: p as i32 });
        }
    }
    let dim = basis.len();
    let top = ends.len() - 1;
    let piece_of = |g: usize| -> (usize, usize) {
        let p = offsets.iter().rposition(|&o| o <= g).unwrap();
        (p, g - offsets[p])
    };
    let globalize = |p: usize, v: SparseVec| -> SparseVec { v.into_iter().map(|(k, c)| (offsets[p] + k, c)).collect() };
    // (Π_r vector) ⊗ (E basis k) projected into Π_{r+1}.
    let tensor_e = |r: usize, v: &SparseVec, k: usize| -> SparseVec {
        if r + 1 > top {
            return vec![];
        }
        if r == 0 {
            // Λ·E is the left action.
            let mut acc = Vec::new();
            for &(x, c) in v {
                for (k2, c2) in col_sparse(&left[1][x], k) {
                    acc.push((c, vec![(k2, c2)]));
                }
            }
            return sparse_combine(f, acc);
        }
        let piece = pieces[r + 1].as_ref().unwrap();
        let terms: SparseVec = v.iter().filter_map(|&(m, c)| piece.index.get(&(m, k)).map(|&i| (i, c))).collect();
        piece.project(f, &sorted(terms))
    };
    let mut mult: Vec<SparseVec> = vec![Vec::new(); dim * dim];
    // Process by the degree of the right factor so recursive products
    // are available.
    let mut order: Vec<(usize, usize)> = (0..dim).flat_map(|i| (0..dim).map(move |j| (i, j))).collect();
    order.sort_by_key(|&(_, j)| basis[j].degree);
    for (i, j) in order {
        if basis[i].tgt != basis[j].src {
            continue;
        }
        let (p, a) = piece_of(i);
        let (q, b) = piece_of(j);
        if p + q > top {
            continue;
        }
        let local: SparseVec = if q == 0 {
            col_sparse(&right[p][b], a)
        } else if p == 0 {
            col_sparse(&left[q][a], b)
        } else if q == 1 {
            tensor_e(p, &vec![(a, 1)], b)
        } else {
            let piece = pieces[q].as_ref().unwrap();
            let (bprev, k) = piece.pairs[piece.basis[b]];
            let left_part = mult[i * dim + offsets[q - 1] + bprev].clone();
            let lp: SparseVec = left_part.into_iter().map(|(g, c)| (g - offsets[p + q - 1], c)).collect();
            tensor_e(p + q - 1, &lp, k)
        };
        mult[i * dim + j] = sorted(globalize(p + q, local));
    }
    let idempotents = lambda.idempotents().to_vec();
    FDAlgebra::new(f, lambda.vertex_names().to_vec(), basis, idempotents, mult)
}

fn sorted(mut v: SparseVec) -> SparseVec {
    v.sort();
    v
}

/// Matrix of `y ↦ y·x` (`right = true`) or `y ↦ x·y` on `Λ`.
fn lambda_mult_matrix(lambda: &FDAlgebra, x: usize, right: bool) -> Matrix {
    let d = lambda.dim();
    let mut m = Matrix::zeros(lambda.field(), d, d);
    for y in 0..d {
        let prod = if right { lambda.mul(y, x) } else { lambda.mul(x, y) };
        for &(k, c) in prod {
            m.set(k, y, c);
        }
    }
    m
}

/// For a graded algebra `Π`, and each `p ≥ 2`: the dimension of
/// `Π_{p-1} ⊗_{Π_0} Π_1`, the rank of multiplication from it to `Π_p`,
/// and `dim Π_p`. Multiplication is bijective iff all three agree.
pub fn tensor_sequence(pi: &FDAlgebra) -> Vec<(usize, usize, usize, usize)> {
    let f = pi.field();
    let top = pi.max_degree().max(0) as usize;
    let by_degree: Vec<Vec<usize>> =
        (0..=top + 1).map(|p| (0..pi.dim()).filter(|&b| pi.elem(b).degree == p as i32).collect()).collect();
    let zero_gens: Vec<usize> = {
        // Generators of Π_0 as a subalgebra: idempotents plus a complement
        // of rad(Π_0)^2 in rad(Π_0).
        let deg0 = &by_degree[0];
        let pos: HashMap<usize, usize> = deg0.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        let mut sq = Echelon::new(f, deg0.len());
        for &x in deg0 {
            for &y in deg0 {
                if pi.is_idempotent(x) || pi.is_idempotent(y) {
                    continue;
                }
                let v: SparseVec = pi.mul(x, y).iter().map(|&(k, c)| (pos[&k], c)).collect();
                sq.insert(&crate::linalg::to_dense(&v, deg0.len()));
            }
        }
        deg0.iter().copied().filter(|&b| !pi.is_idempotent(b) && sq.insert(&crate::algebra::unit(deg0.len(), pos[&b]))).collect()
    };
    let mut out = Vec::new();
    for p in 2..=top + 1 {
        let (prev, one, cur) = (&by_degree[p - 1], &by_degree[1], &by_degree[p]);
        let mut pairs = Vec::new();
        for &m in prev {
            for &k in one {
                if pi.elem(m).tgt == pi.elem(k).src {
                    pairs.push((m, k));
                }
            }
        }
        if pairs.is_empty() && cur.is_empty() {
            continue;
        }
        let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &pk)| (pk, i)).collect();
        let mut rel = Echelon::new(f, pairs.len());
        for &m in prev {
            for &g in &zero_gens {
                for &k in one {
                    let mut v = vec![0; pairs.len()];
                    for &(m2, c) in pi.mul(m, g) {
                        if let Some(&i) = index.get(&(m2, k)) {
                            v[i] = f.add(v[i], c);
                        }
                    }
                    for &(k2, c) in pi.mul(g, k) {
                        if let Some(&i) = index.get(&(m, k2)) {
                            v[i] = f.sub(v[i], c);
                        }
                    }
                    if v.iter().any(|&x| x != 0) {
                        rel.insert(&v);
                    }
                }
            }
        }
        let tensor_dim = pairs.len() - rel.dim();
        let cpos: HashMap<usize, usize> = cur.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        let cols: Vec<Vec<u32>> = pairs
            .iter()
            .map(|&(m, k)| {
                let mut v = vec![0; cur.len()];
                for &(b, c) in pi.mul(m, k) {
                    v[cpos[&b]] = c;
                }
                v
            })
            .collect();
        let rank = if cur.is_empty() { 0 } else { Matrix::from_columns(f, cur.len(), &cols).rank() };
        out.push((p, tensor_dim, rank, cur.len()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{field, linear};

    fn linear_quiver(n: usize) -> Quiver {
        let vertices = (1..=n).map(|i| i.to_string()).collect();
        let arrows = (0..n - 1).map(|i| Arrow { name: format!("a{}", i + 1), src: i, tgt: i + 1, degree: 0 }).collect();
        Quiver::new(vertices, arrows).unwrap()
    }

    /// Sum of the dimensions of the indecomposable representations of
    /// `A_n`, which are the intervals `[i, j]`.
    fn interval_dim_sum(n: usize) -> usize {
        (1..=n).flat_map(|i| (i..=n).map(move |j| j - i + 1)).sum()
    }

    fn three_cycle() -> QuiverWithPotential {
        let vertices = vec!["1".into(), "2".into(), "3".into()];
        let arrows = vec![
            Arrow { name: "a".into(), src: 0, tgt: 1, degree: 0 },
            Arrow { name: "b".into(), src: 1, tgt: 2, degree: 0 },
            Arrow { name: "c".into(), src: 2, tgt: 0, degree: 1 },
        ];
        QuiverWithPotential::new(field(), Quiver::new(vertices, arrows).unwrap(), vec![(1, vec![0, 1, 2])]).unwrap()
    }

    #[test]
    fn preprojective_of_type_a_has_the_expected_dimension() {
        for n in 1..=4 {
            let pres = double_quiver_pi2(&linear_quiver(n), field()).unwrap();
            let pi = FDAlgebra::from_presentation(&pres, GroebnerBounds::default()).unwrap();
            assert_eq!(pi.dim(), interval_dim_sum(n), "A_{n}");
        }
    }

    #[test]
    fn double_quiver_rejects_cycles() {
        let q = three_cycle().quiver;
        assert!(matches!(double_quiver_pi2(&q, field()), Err(Error::CyclicQuiver)));
    }

    #[test]
    fn jacobian_of_three_cycle() {
        let j = jacobian(&three_cycle(), GroebnerBounds::default()).unwrap();
        assert_eq!(j.algebra.dim(), 6);
        assert_eq!(j.algebra.graded_dims().into_iter().collect::<Vec<_>>(), vec![(0, 5), (1, 1)]);
    }

    #[test]
    fn second_derivatives_are_self_dual() {
        let qp = three_cycle();
        let j = jacobian(&qp, GroebnerBounds::default()).unwrap();
        let c = qp_bimodule_complex(&qp, &j).unwrap();
        assert!(c.is_complex());
        let hom = c.homology_dims();
        assert_eq!(hom.get(&0), Some(&6));
        assert_eq!(hom.get(&-1).copied().unwrap_or(0), 0);
        let dl = j.algebra.dim();
        let d2 = &c.diffs[0];
        let n = qp.quiver.arrows.len();
        for a in 0..n {
            for b in 0..n {
                let mut swapped: SparseVec = d2.entries[a][b].iter().map(|&(x, c)| ((x % dl) * dl + x / dl, c)).collect();
                swapped.sort();
                assert_eq!(swapped, d2.entries[b][a], "arrows {a} {b}");
            }
        }
        // Direct check of a single second derivative: ∂_{a,b}(abc) = 1 ⊗ c.
        assert_eq!(second_derivative(&qp, 0, 1).unwrap(), vec![(1, vec![], vec![2])]);
    }

    #[test]
    fn keller_potential_for_rad_square_zero() {
        let lam = linear(3, true, 0);
        let qp = keller_qp(&lam).unwrap();
        assert_eq!(qp.quiver.arrows.len(), 3);
        let j = jacobian(&qp, GroebnerBounds::default()).unwrap();
        assert_eq!(j.algebra.graded_dims().into_iter().collect::<Vec<_>>(), vec![(0, 5), (1, 1)]);
    }

    #[test]
    fn keller_rejects_bad_input() {
        let lam = linear(4, true, 0);
        assert!(matches!(keller_qp(&lam), Err(Error::GlobalDimensionTooLarge { .. })));
        let base = linear(3, true, 0);
        let mut pres = base.presentation.clone();
        pres.relations.push(vec![(2, vec![0, 1])]);
        let dup = Presented::new(&pres, GroebnerBounds::default()).unwrap();
        assert!(matches!(keller_qp(&dup), Err(Error::RelationsNotMinimal(_))));
    }

    #[test]
    fn ext_bimodule_dimensions() {
        assert_eq!(ext_bimodule(&linear(2, false, 0).algebra, 2).unwrap().dim(), 1);
        assert_eq!(ext_bimodule(&linear(3, true, 0).algebra, 3).unwrap().dim(), 1);
        assert_eq!(ext_bimodule(&linear(2, false, 0).algebra, 3).unwrap().dim(), 0);
        assert!(ext_bimodule(&linear(3, true, 0).algebra, 2).is_err());
    }

    #[test]
    fn tensor_algebra_matches_other_constructions() {
        let pi = tensor_pi_d(&linear(2, false, 0).algebra, 2, DEFAULT_MAX_DEGREE).unwrap();
        assert_eq!(pi.graded_dims().into_iter().collect::<Vec<_>>(), vec![(0, 3), (1, 1)]);
        let pi = tensor_pi_d(&linear(3, false, 0).algebra, 2, DEFAULT_MAX_DEGREE).unwrap();
        assert_eq!(pi.dim(), interval_dim_sum(3));
        assert_eq!(pi.graded_dims().into_iter().collect::<Vec<_>>(), vec![(0, 6), (1, 3), (2, 1)]);
        for (_, t, r, d) in tensor_sequence(&pi) {
            assert!(t == r && r == d);
        }
        let pi = tensor_pi_d(&linear(3, true, 0).algebra, 3, DEFAULT_MAX_DEGREE).unwrap();
        assert_eq!(pi.graded_dims().into_iter().collect::<Vec<_>>(), vec![(0, 5), (1, 1)]);
        let pi = tensor_pi_d(&linear(1, false, 0).algebra, 2, DEFAULT_MAX_DEGREE).unwrap();
        assert_eq!(pi.dim(), 1);
    }

    #[test]
    fn max_degree_is_enforced() {
        let r = tensor_pi_d(&linear(3, false, 0).algebra, 2, 1);
        assert!(matches!(r, Err(Error::MaxDegreeReached(1))));
    }
}
