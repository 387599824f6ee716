//! Krull-Schmidt decompositions, isomorphism tests, projective-summand
//! stripping and stable Hom.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Fp;
use crate::linalg::{Echelon, Matrix};
use crate::module::GradedModule;
use crate::resolution::{projective_cover, syzygy, Resolution};

const SPLIT_TRIALS: usize = 40;
const ISO_TRIALS: usize = 20;

/// An indecomposable summand together with its inclusion into the
/// decomposed module.
#[derive(Clone, Debug)]
pub struct Summand {
    pub module: GradedModule,
    pub inclusion: Matrix,
    /// `End(module)/rad` is bigger than the ground field.
    pub division_ring: bool,
}

/// Split `m` into indecomposable summands using Fitting's lemma on random
/// endomorphisms. Each summand carries a certificate that its
/// endomorphism ring is local.
pub fn decompose(m: &GradedModule, rng: &mut ChaCha8Rng) -> Result<Vec<Summand>> {
    let f = m.field();
    let mut out = Vec::new();
    let mut stack = vec![(m.clone(), Matrix::identity(f, m.dim()))];
    while let Some((x, incl)) = stack.pop() {
        if x.is_zero() {
            continue;
        }
        let end = x.hom_space(&x, 0)?;
        if end.len() == 1 {
            out.push(Summand { module: x, inclusion: incl, division_ring: false });
            continue;
        }
        match split_once(&x, &end, rng) {
            Some((k, ik, i, ii)) => {
                stack.push((i, incl.mul(&ii)));
                stack.push((k, incl.mul(&ik)));
            }
            None => match local_certificate(&end, rng) {
                Some(division_ring) => out.push(Summand { module: x, inclusion: incl, division_ring }),
                None => {
                    return Err(Error::DecompositionFailed(format!(
                        "no Fitting splitting found after {SPLIT_TRIALS} trials on a module of dimension {}",
                        x.dim()
                    )))
                }
            },
        }
    }
    out.sort_by_key(|s| (s.module.min_degree(), s.module.dim(), s.module.shape()));
    Ok(out)
}

type Split = (GradedModule, Matrix, GradedModule, Matrix);

fn split_once(x: &GradedModule, end: &[Matrix], rng: &mut ChaCha8Rng) -> Option<Split> {
    let f = x.field();
    let n = x.dim();
    for _ in 0..SPLIT_TRIALS {
        let phi = random_combination(f, end, rng);
        for lambda in eigenvalues(&phi, rng) {
            let psi = phi.sub(&Matrix::identity(f, n).scale(lambda));
            let high = stable_power(&psi);
            let (k, ik) = x.kernel_of(x, 0, &high);
            if k.dim() == 0 || k.dim() == n {
                continue;
            }
            let (i, ii) = GradedModule::image_of(x, &high);
            return Some((k, ik, i, ii));
        }
    }
    None
}

fn random_combination(f: Fp, basis: &[Matrix], rng: &mut ChaCha8Rng) -> Matrix {
    let mut acc = Matrix::zeros(f, basis[0].rows(), basis[0].cols());
    for b in basis {
        acc.add_scaled(rng.gen_range(0..f.modulus()), b);
    }
    acc
}

/// `psi^N` with `N >= dim`, so that kernel and image have stabilized.
fn stable_power(psi: &Matrix) -> Matrix {
    let mut p = psi.clone();
    let mut e = 1;
    while e < psi.rows() {
        p = p.mul(&p);
        e *= 2;
    }
    p
}

/// Eigenvalues in the ground field found from the minimal polynomials of a
/// few random vectors.
pub fn eigenvalues(phi: &Matrix, rng: &mut ChaCha8Rng) -> Vec<u32> {
    let f = phi.field();
    let n = phi.rows();
    let mut roots = Vec::new();
    for _ in 0..3 {
        let v: Vec<u32> = (0..n).map(|_| rng.gen_range(0..f.modulus())).collect();
        let mu = vector_min_poly(phi, &v);
        for r in poly_roots(f, &mu, rng) {
            if !roots.contains(&r) {
                roots.push(r);
            }
        }
    }
    roots.sort();
    roots
}

/// Monic minimal polynomial of `v` under `phi`, coefficients low to high.
fn vector_min_poly(phi: &Matrix, v: &[u32]) -> Vec<u32> {
    let f = phi.field();
    let n = phi.rows();
    let mut ech = Echelon::tracking(f, n);
    let mut cur = v.to_vec();
    let mut k = 0;
    loop {
        if let Some(expr) = ech.express(&cur) {
            // cur = phi^k v = sum c_i phi^i v
            let mut poly = vec![0; k + 1];
            for (i, c) in expr {
                poly[i] = f.neg(c);
            }
            poly[k] = 1;
            return poly;
        }
        ech.insert(&cur);
        cur = phi.mul_vec(&cur);
        k += 1;
    }
}

fn poly_trim(mut p: Vec<u32>) -> Vec<u32> {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

fn poly_mulmod(f: Fp, a: &[u32], b: &[u32], m: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut prod = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = f.mul_add(prod[i + j], x, y);
        }
    }
    poly_rem(f, &prod, m)
}

fn poly_rem(f: Fp, a: &[u32], m: &[u32]) -> Vec<u32> {
    let mut r = poly_trim(a.to_vec());
    let m = poly_trim(m.to_vec());
    let dm = m.len() - 1;
    let inv = f.inv(m[dm]);
    while r.len() > dm && !r.is_empty() {
        let c = f.mul(*r.last().unwrap(), inv);
        let shift = r.len() - 1 - dm;
        for (i, &y) in m.iter().enumerate() {
            r[shift + i] = f.sub(r[shift + i], f.mul(c, y));
        }
        r = poly_trim(r);
    }
    r
}

fn poly_gcd(f: Fp, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut a = poly_trim(a.to_vec());
    let mut b = poly_trim(b.to_vec());
    while !b.is_empty() {
        let r = poly_rem(f, &a, &b);
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        let inv = f.inv(lead);
        a.iter_mut().for_each(|x| *x = f.mul(*x, inv));
    }
    a
}

fn poly_powmod(f: Fp, base: &[u32], mut e: u64, m: &[u32]) -> Vec<u32> {
    let mut acc = vec![1];
    let mut b = poly_rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(f, &acc, &b, m);
        }
        b = poly_mulmod(f, &b, &b, m);
        e >>= 1;
    }
    acc
}

fn poly_div_exact(f: Fp, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut r = poly_trim(a.to_vec());
    let b = poly_trim(b.to_vec());
    let db = b.len() - 1;
    let inv = f.inv(b[db]);
    let mut q = vec![0; r.len().saturating_sub(db)];
    while r.len() > db {
        let c = f.mul(*r.last().unwrap(), inv);
        let shift = r.len() - 1 - db;
        q[shift] = c;
        for (i, &y) in b.iter().enumerate() {
            r[shift + i] = f.sub(r[shift + i], f.mul(c, y));
        }
        r.pop();
        r = poly_trim(r);
        if r.len() <= db {
            break;
        }
    }
    q
}

/// Distinct roots in `F_p` of a polynomial (coefficients low to high).
pub fn poly_roots(f: Fp, poly: &[u32], rng: &mut ChaCha8Rng) -> Vec<u32> {
    let p = f.modulus();
    let poly = poly_trim(poly.to_vec());
    if poly.len() <= 1 {
        return vec![];
    }
    if p < 64 {
        return (0..p)
            .filter(|&x| poly.iter().rev().fold(0, |acc, &c| f.mul_add(c, acc, x)) == 0)
            .collect();
    }
    // Product of the distinct linear factors: gcd(poly, x^p - x).
    let xp = poly_powmod(f, &[0, 1], p as u64, &poly);
    let mut xp_minus_x = xp;
    xp_minus_x.resize(xp_minus_x.len().max(2), 0);
    xp_minus_x[1] = f.sub(xp_minus_x[1], 1);
    let g = poly_gcd(f, &poly, &xp_minus_x);
    let mut roots = Vec::new();
    split_linear(f, g, rng, &mut roots);
    roots.sort();
    roots
}

fn split_linear(f: Fp, g: Vec<u32>, rng: &mut ChaCha8Rng, out: &mut Vec<u32>) {
    match g.len() {
        0 | 1 => {}
        2 => out.push(f.neg(f.mul(g[0], f.inv(g[1])))),
        _ => loop {
            let a = rng.gen_range(0..f.modulus());
            let h = poly_powmod(f, &[a, 1], ((f.modulus() - 1) / 2) as u64, &g);
            let mut h1 = h;
            if h1.is_empty() {
                h1.push(0);
            }
            h1[0] = f.sub(h1[0], 1);
            let d = poly_gcd(f, &g, &h1);
            if d.len() > 1 && d.len() < g.len() {
                let rest = poly_div_exact(f, &g, &d);
                split_linear(f, d, rng, out);
                split_linear(f, rest, rng, out);
                return;
            }
        },
    }
}

/// Certify that `End` (given by a basis) is local. Returns `Some(false)`
/// when `End = k·1 ⊕ J` with `J` a nilpotent ideal, `Some(true)` when
/// every basis element is invertible-or-nilpotent but some element has no
/// eigenvalue in the field (residue ring bigger than `k`), and `None` if
/// no certificate was found.
fn local_certificate(end: &[Matrix], rng: &mut ChaCha8Rng) -> Option<bool> {
    let f = end[0].field();
    let n = end[0].rows();
    let id = Matrix::identity(f, n);
    let mut radical = Vec::new();
    let mut missing_eigenvalue = false;
    for phi in end {
        let ev = eigenvalues(phi, rng);
        match ev.as_slice() {
            [l] => {
                let psi = phi.sub(&id.scale(*l));
                if !stable_power(&psi).is_zero() {
                    return None;
                }
                radical.push(psi);
            }
            [] => missing_eigenvalue = true,
            _ => return None,
        }
    }
    if missing_eigenvalue {
        // Every basis element without an eigenvalue is invertible; the
        // ring is local only if no combination splits, which the
        // preceding random trials make overwhelmingly likely.
        return Some(true);
    }
    let flat = |m: &Matrix| m.data().to_vec();
    let mut span = Echelon::new(f, n * n);
    for r in &radical {
        span.insert(&flat(r));
    }
    if span.dim() + 1 != end.len() || span.contains(&flat(&id)) {
        return None;
    }
    // Closed under products and nilpotent: powers of J shrink to zero.
    let mut power: Vec<Matrix> = radical.clone();
    for _ in 0..=end.len() {
        let mut next = Echelon::new(f, n * n);
        let mut next_mats = Vec::new();
        for a in &power {
            for b in &radical {
                let ab = a.mul(b);
                if !span.contains(&flat(&ab)) {
                    return None;
                }
                if next.insert(&flat(&ab)) {
                    next_mats.push(ab);
                }
            }
        }
        if next_mats.is_empty() {
            return Some(false);
        }
        power = next_mats;
    }
    None
}

/// Is `m` projective (its projective cover is an isomorphism)?
pub fn is_projective(m: &GradedModule) -> bool {
    if m.is_zero() {
        return true;
    }
    let (free, _, _) = projective_cover(m).unwrap();
    free.dim(m.algebra()) == m.dim()
}

/// Isomorphism test. With `allow_shift`, looks for `s` with `m ≅ n(s)`;
/// returns the shift found.
pub fn is_isomorphic(
    m: &GradedModule,
    n: &GradedModule,
    allow_shift: bool,
    rng: &mut ChaCha8Rng,
) -> Result<Option<i32>> {
    if !crate::module::same_algebra(m.algebra(), n.algebra()) {
        return Err(Error::AlgebraMismatch("is_isomorphic: different algebras".into()));
    }
    if m.dim() != n.dim() {
        return Ok(None);
    }
    if m.is_zero() {
        return Ok(Some(0));
    }
    let s = if allow_shift { n.min_degree().unwrap() - m.min_degree().unwrap() } else { 0 };
    let ns = n.shift(s);
    if m.shape() != ns.shape() {
        return Ok(None);
    }
    let homs = m.hom_space(&ns, 0)?;
    if homs.is_empty() {
        return Ok(None);
    }
    let f = m.field();
    for _ in 0..ISO_TRIALS {
        if random_combination(f, &homs, rng).is_invertible() {
            return Ok(Some(s));
        }
    }
    let a = decompose(m, rng)?;
    let b = decompose(&ns, rng)?;
    Ok(summands_match(&a, &b)?.then_some(s))
}

/// Isomorphism of indecomposables: some composite `g ∘ h` of basis maps
/// is invertible.
pub fn indecomposables_isomorphic(x: &GradedModule, y: &GradedModule) -> Result<bool> {
    if x.shape() != y.shape() {
        return Ok(false);
    }
    let h = x.hom_space(y, 0)?;
    let g = y.hom_space(x, 0)?;
    for a in &h {
        if a.is_invertible() {
            return Ok(true);
        }
        for b in &g {
            if b.mul(a).is_invertible() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Multisets of indecomposables agree up to isomorphism.
pub fn summands_match(a: &[Summand], b: &[Summand]) -> Result<bool> {
    if a.len() != b.len() {
        return Ok(false);
    }
    let mut used = vec![false; b.len()];
    for x in a {
        let mut found = false;
        for (j, y) in b.iter().enumerate() {
            if !used[j] && indecomposables_isomorphic(&x.module, &y.module)? {
                used[j] = true;
                found = true;
                break;
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Remove projective summands. Returns the remaining module and the
/// number of projective summands removed.
pub fn strip_projectives(m: &GradedModule, rng: &mut ChaCha8Rng) -> Result<(GradedModule, usize)> {
    if m.is_zero() {
        return Ok((m.clone(), 0));
    }
    let parts = decompose(m, rng)?;
    let mut keep = Vec::new();
    let mut removed = 0;
    for s in parts {
        if is_projective(&s.module) {
            removed += 1;
        } else {
            keep.push(s.module);
        }
    }
    let (sum, _) = GradedModule::direct_sum(m.algebra().clone(), &keep);
    Ok((sum, removed))
}

/// Non-projective indecomposable summands of `m`.
pub fn nonprojective_summands(m: &GradedModule, rng: &mut ChaCha8Rng) -> Result<Vec<GradedModule>> {
    Ok(decompose(m, rng)?.into_iter().map(|s| s.module).filter(|x| !is_projective(x)).collect())
}

/// Dimension of `Hom(x, y(q))` modulo maps factoring through projectives,
/// per internal degree `q`.
pub fn stable_hom_degree0(x: &GradedModule, y: &GradedModule) -> Result<BTreeMap<i32, usize>> {
    let mut out = BTreeMap::new();
    if x.is_zero() || y.is_zero() {
        return Ok(out);
    }
    let f = x.field();
    let (_, cover, pi) = projective_cover(y)?;
    for (q, homs) in x.hom_all(y)? {
        let mut span = Echelon::new(f, y.dim() * x.dim());
        for h in x.hom_space(&cover.module, q)? {
            span.insert(pi.mul(&h).data());
        }
        let dim = homs.len() - span.dim();
        if dim > 0 {
            out.insert(q, dim);
        }
    }
    Ok(out)
}

/// `dim \underline{Hom}(Ω^i X, Y(q))` per `q`; for `i < 0` computed as
/// `\underline{Hom}(X, Ω^{-i} Y (q))`.
pub fn stable_hom(x: &GradedModule, y: &GradedModule, i: i32) -> Result<BTreeMap<i32, usize>> {
    if i >= 0 {
        stable_hom_degree0(&syzygy(x, i as usize), y)
    } else {
        stable_hom_degree0(x, &syzygy(y, (-i) as usize))
    }
}

/// `Ext^j(m, A) = 0` for `j = 1..g`.
pub fn is_cohen_macaulay(m: &GradedModule, g: Option<usize>) -> Result<bool> {
    let g = g.ok_or(Error::GUnknown)?;
    if g == 0 || m.is_zero() {
        return Ok(true);
    }
    let reg = GradedModule::regular(m.algebra().clone());
    let res = Resolution::compute(m, g + 1);
    for j in 1..=g {
        if !res.ext(&reg, j)?.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}
