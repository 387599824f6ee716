//! Certificates for graded algebras: Gorenstein dimension, the
//! negative-degree Ext vanishing, the bimodule stably (1)-twisted
//! Calabi-Yau property, selfinjectivity, and the reconstruction of `Π`
//! as the tensor algebra of its degree one part over its degree zero part.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::FDAlgebra;
use crate::bimodule::{bimodule_on, BimoduleContext};
use crate::decompose::{is_cohen_macaulay, is_isomorphic, is_projective, strip_projectives};
use crate::derived::{cluster_tilting, gdim_from_table, is_rep_finite, neg_ext_table, DerivedContext};
use crate::error::{Error, Result};
use crate::linalg::Echelon;
use crate::module::GradedModule;
use crate::preprojective::{ext_bimodule, tensor_algebra, tensor_pi_d, tensor_sequence};
use crate::resolution::{proj_dim, syzygy, Resolution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Indeterminate,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Clone, Debug)]
pub struct CertOptions {
    pub d: usize,
    pub resolution_bound: usize,
    pub max_degree: usize,
    pub nilpotence_bound: usize,
    pub jmax_override: Option<usize>,
    pub seed: u64,
    pub timings: bool,
    pub store: Option<Arc<dyn ResolutionStore>>,
}

/// Identifies a resolution: the algebra, which module, its length and the
/// field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResolutionKey {
    pub algebra_hash: u64,
    pub module: String,
    pub length: usize,
    pub field: u32,
}

/// Persistent storage of resolutions. Only terms and differentials are
/// kept, which is all that Ext computations need; results never depend
/// on whether a stored resolution was found.
pub trait ResolutionStore: Send + Sync + std::fmt::Debug {
    fn load(&self, key: &ResolutionKey) -> Option<Resolution>;
    fn save(&self, key: &ResolutionKey, res: &Resolution);
}

impl CertOptions {
    pub fn new(d: usize) -> Self {
        CertOptions {
            d,
            resolution_bound: 12,
            max_degree: crate::preprojective::DEFAULT_MAX_DEGREE,
            nilpotence_bound: crate::derived::DEFAULT_NILPOTENCE_BOUND,
            jmax_override: None,
            seed: 0,
            timings: false,
            store: None,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// Verdicts with their witnesses. Timings are recorded only on request so
/// that reports are reproducible byte for byte.
#[derive(Clone, Debug, Default, Serialize)]
pub struct CertReport {
    pub verdicts: BTreeMap<String, Verdict>,
    pub witnesses: BTreeMap<String, Value>,
    pub params: BTreeMap<String, Value>,
    pub timings: BTreeMap<String, f64>,
}

impl CertReport {
    pub fn with_params(opts: &CertOptions, field: u32) -> Self {
        let mut r = CertReport::default();
        r.params.insert("d".into(), json!(opts.d));
        r.params.insert("field".into(), json!(field));
        r.params.insert("seed".into(), json!(opts.seed));
        r.params.insert("resolution_bound".into(), json!(opts.resolution_bound));
        r.params.insert("max_degree".into(), json!(opts.max_degree));
        r.params.insert("nilpotence_bound".into(), json!(opts.nilpotence_bound));
        r
    }

    pub fn record(&mut self, name: &str, verdict: Verdict, witness: Value) {
        self.verdicts.insert(name.into(), verdict);
        if !witness.is_null() {
            self.witnesses.insert(name.into(), witness);
        }
    }

    /// Fail if any check failed, else indeterminate if any was, else pass.
    pub fn overall(&self) -> Verdict {
        let v = self.verdicts.values();
        if v.clone().any(|&x| x == Verdict::Fail) {
            Verdict::Fail
        } else if v.clone().any(|&x| x == Verdict::Indeterminate) {
            Verdict::Indeterminate
        } else {
            Verdict::Pass
        }
    }

    pub fn merge(&mut self, prefix: &str, other: CertReport) {
        for (k, v) in other.verdicts {
            self.verdicts.insert(format!("{prefix}{k}"), v);
        }
        for (k, v) in other.witnesses {
            self.witnesses.insert(format!("{prefix}{k}"), v);
        }
        for (k, v) in other.timings {
            self.timings.insert(format!("{prefix}{k}"), v);
        }
    }
}

struct Timer<'a> {
    report: &'a mut CertReport,
    enabled: bool,
}

impl Timer<'_> {
    fn time<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if self.enabled {
            self.report.timings.insert(name.into(), start.elapsed().as_secs_f64());
        }
        out
    }
}

fn dual_of_regular(pi: &Arc<FDAlgebra>) -> Result<(GradedModule, GradedModule)> {
    let op = Arc::new(pi.opposite());
    let right = GradedModule::regular(op.clone()).dual(pi.clone())?;
    let left = GradedModule::regular(pi.clone()).dual(op)?;
    Ok((right, left))
}

/// The common value of `pd DΠ` on both sides.
pub fn gorenstein_dimension(pi: &Arc<FDAlgebra>, bound: usize) -> Result<usize> {
    let (right, left) = dual_of_regular(pi)?;
    match (proj_dim(&right, bound), proj_dim(&left, bound)) {
        (Some(a), Some(b)) if a == b => Ok(a),
        _ => Err(Error::NotGorenstein(bound)),
    }
}

/// `DΠ` is projective, so every indecomposable injective is an
/// indecomposable projective (each up to its own shift).
pub fn check_selfinjective(pi: &Arc<FDAlgebra>) -> Result<bool> {
    let (right, _) = dual_of_regular(pi)?;
    Ok(is_projective(&right))
}

#[derive(Clone, Debug, Serialize)]
pub struct Condition3 {
    pub verdict: Verdict,
    pub jmax: usize,
    /// `(j, i) -> dim Ext^j_{gr Π^e}(Π, Π^e(i))` for `1 ≤ j ≤ jmax`.
    pub table: BTreeMap<String, usize>,
    pub witness: Option<(usize, i32, usize)>,
    pub tail_certified: bool,
}

/// Vanishing of `Ext^j(Π, Π^e(i))` for `i < 0`, `j > 0`: computed up to
/// `jmax = max(2g, d+1)`, beyond which `Ω^{jmax} Π` is checked to be
/// Cohen-Macaulay over `Π^e`.
pub fn check_condition3(
    ctx: &BimoduleContext,
    d: usize,
    g: Option<usize>,
    jmax_override: Option<usize>,
    store: Option<&dyn ResolutionStore>,
) -> Result<Condition3> {
    let jmax = jmax_override.unwrap_or(match g {
        Some(g) => (2 * g).max(d + 1),
        None => d + 1,
    });
    let key = ResolutionKey {
        algebra_hash: ctx.algebra.content_hash(),
        module: "bimodule".into(),
        length: jmax + 1,
        field: ctx.algebra.field().modulus(),
    };
    let res = match store.and_then(|s| s.load(&key)) {
        Some(r) if r.complete || r.terms.len() >= jmax + 2 => r,
        _ => {
            let r = Resolution::compute(&ctx.regular, jmax + 1);
            if let Some(s) = store {
                s.save(&key, &r);
            }
            r
        }
    };
    let reg = GradedModule::regular(ctx.env.clone());
    let mut table = BTreeMap::new();
    let mut witness = None;
    for j in 1..=jmax {
        for (i, dim) in res.ext(&reg, j)? {
            table.insert(format!("{j},{i}"), dim);
            if i < 0 && witness.is_none() {
                witness = Some((j, i, dim));
            }
        }
    }
    let tail_certified = if res.complete && res.terms.len() <= jmax + 1 {
        true
    } else if let Some(g) = g {
        let omega = res.syzygies.get(jmax).cloned().unwrap_or_else(|| syzygy(&ctx.regular, jmax));
        is_cohen_macaulay(&omega, Some(2 * g))?
    } else {
        false
    };
    let verdict = if witness.is_some() {
        Verdict::Fail
    } else if tail_certified {
        Verdict::Pass
    } else {
        Verdict::Indeterminate
    };
    Ok(Condition3 { verdict, jmax, table, witness, tail_certified })
}

#[derive(Clone, Debug, Serialize)]
pub struct StablyCy {
    pub verdict: Verdict,
    pub g: usize,
    pub hypothesis: bool,
    pub lhs_dim: usize,
    pub rhs_dim: usize,
    pub lhs_projectives_removed: usize,
    pub rhs_projectives_removed: usize,
}

/// `Hom_{Π^e}(Ω^g Π, Π^e) ≅ Ω^{d+1-g} Π (1)` after removing projective
/// summands. When `2g > d+1` the left side is replaced by its
/// `Ω^{2g-d-1}` and the right side by `Ω^g Π (1)`.
pub fn check_stably_cy(ctx: &BimoduleContext, d: usize, g: usize, rng: &mut ChaCha8Rng) -> Result<StablyCy> {
    if g + 2 > d {
        return Ok(StablyCy {
            verdict: Verdict::Fail,
            g,
            hypothesis: false,
            lhs_dim: 0,
            rhs_dim: 0,
            lhs_projectives_removed: 0,
            rhs_projectives_removed: 0,
        });
    }
    let res = Resolution::compute(&ctx.regular, (d + 1).max(2 * g));
    let omega = |n: usize| res.syzygies.get(n).cloned().unwrap_or_else(|| GradedModule::zero(ctx.env.clone()));
    let dual = ctx.dual(&omega(g))?;
    let (lhs, rhs) = if 2 * g <= d + 1 {
        (dual, omega(d + 1 - g).shift(1))
    } else {
        (syzygy(&dual, 2 * g - d - 1), omega(g).shift(1))
    };
    let (a, ra) = strip_projectives(&lhs, rng)?;
    let (b, rb) = strip_projectives(&rhs, rng)?;
    let iso = is_isomorphic(&a, &b, false, rng)?.is_some();
    Ok(StablyCy {
        verdict: Verdict::from_bool(iso),
        g,
        hypothesis: true,
        lhs_dim: a.dim(),
        rhs_dim: b.dim(),
        lhs_projectives_removed: ra,
        rhs_projectives_removed: rb,
    })
}

/// For Gorenstein dimension at most 1 and `d = 3`:
/// `Hom_{Π^e}(Ω² Π, Π^e) ≅ Ω² Π (1)` on the nose.
pub fn check_omega2(ctx: &BimoduleContext, rng: &mut ChaCha8Rng) -> Result<bool> {
    let omega2 = syzygy(&ctx.regular, 2);
    let dual = ctx.dual(&omega2)?;
    Ok(is_isomorphic(&dual, &omega2.shift(1), false, rng)?.is_some())
}

/// Ranks of multiplication `Π_1 ⊗ Π_p -> Π_{p+1}` against `dim Π_{p+1}`.
pub fn generation_in_degree_one(pi: &FDAlgebra) -> Vec<(usize, usize, usize)> {
    let f = pi.field();
    let top = pi.max_degree().max(0) as usize;
    let by_degree: Vec<Vec<usize>> =
        (0..=top).map(|p| (0..pi.dim()).filter(|&b| pi.elem(b).degree == p as i32).collect()).collect();
    let mut out = Vec::new();
    for p in 1..top {
        let next = &by_degree[p + 1];
        let pos: BTreeMap<usize, usize> = next.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        let mut span = Echelon::new(f, next.len());
        for &x in &by_degree[1] {
            for &y in &by_degree[p] {
                let mut v = vec![0; next.len()];
                for &(k, c) in pi.mul(x, y) {
                    v[pos[&k]] = c;
                }
                span.insert(&v);
            }
        }
        out.push((p, span.dim(), next.len()));
    }
    out
}

/// Runs the three hypotheses and, if they hold, identifies `Π` with the
/// tensor algebra of `E = Ext^{d-1}_Λ(DΛ, Λ)` over `Λ = Π_0`.
pub fn reconstruct(pi: &Arc<FDAlgebra>, opts: &CertOptions) -> Result<CertReport> {
    let mut report = CertReport::with_params(opts, pi.field().modulus());
    let mut rng = opts.rng();
    let d = opts.d;
    let mut timer_report = CertReport::default();
    let mut timer = Timer { report: &mut timer_report, enabled: opts.timings };

    let g = timer.time("gorenstein", || gorenstein_dimension(pi, opts.resolution_bound));
    let g = match g {
        Ok(g) => {
            report.record("gorenstein", Verdict::from_bool(g + 2 <= d), json!({ "g": g, "bound": d as i64 - 2 }));
            Some(g)
        }
        Err(Error::NotGorenstein(b)) => {
            report.record("gorenstein", Verdict::Indeterminate, json!({ "exceeds_bound": b }));
            None
        }
        Err(e) => return Err(e),
    };
    let ctx = BimoduleContext::new(pi.clone())?;
    match g {
        Some(g) if g + 2 <= d => {
            let cy = timer.time("stably_cy", || check_stably_cy(&ctx, d, g, &mut rng))?;
            report.record("stably_cy", cy.verdict, serde_json::to_value(&cy).unwrap());
            if d == 3 && g <= 1 {
                let o2 = timer.time("omega2", || check_omega2(&ctx, &mut rng))?;
                let agree = o2 == (cy.verdict == Verdict::Pass);
                report.record("omega2_agrees", Verdict::from_bool(agree), json!({ "omega2": o2 }));
            }
        }
        Some(g) => report.record("stably_cy", Verdict::Fail, json!({ "hypothesis_fails": true, "g": g })),
        None => report.record("stably_cy", Verdict::Indeterminate, Value::Null),
    }
    let c3 = timer.time("condition3", || check_condition3(&ctx, d, g, opts.jmax_override, opts.store.as_deref()))?;
    report.record("condition3", c3.verdict, serde_json::to_value(&c3).unwrap());
    if report.overall() != Verdict::Pass {
        report.timings = timer_report.timings;
        return Ok(report);
    }

    let embed: Vec<usize> = (0..pi.dim()).filter(|&b| pi.elem(b).degree == 0).collect();
    let lambda = Arc::new(pi.degree_zero_part());
    let gl = crate::resolution::global_dimension(&lambda, d - 1);
    report.record("degree_zero_gldim", Verdict::from_bool(gl.is_some()), json!({ "gldim": gl, "bound": d - 1 }));
    if gl.is_none() {
        report.timings = timer_report.timings;
        return Ok(report);
    }
    let e = timer.time("ext_bimodule", || ext_bimodule(&lambda, d))?;
    let gen = generation_in_degree_one(pi);
    let generated = gen.iter().all(|&(_, r, n)| r == n);
    report.record("generated_in_degrees_0_1", Verdict::from_bool(generated), json!(gen));

    let deg1: Vec<usize> = (0..pi.dim()).filter(|&b| pi.elem(b).degree == 1).collect();
    let pi1 = bimodule_on(pi, &e.env, &embed, &deg1)?;
    let iso = if pi1.dim() != e.dim() {
        false
    } else if pi1.is_zero() {
        true
    } else {
        is_isomorphic(&pi1, &e.module, true, &mut rng)?.is_some()
    };
    report.record("degree_one_is_ext", Verdict::from_bool(iso), json!({ "dim_pi1": pi1.dim(), "dim_e": e.dim() }));

    let t = timer.time("tensor_algebra", || tensor_algebra(&lambda, &e.module, opts.max_degree));
    match t {
        Ok(t) => {
            let same = t.dimension_table() == pi.dimension_table();
            let dims: Vec<(i32, usize, usize)> = {
                let (a, b) = (t.graded_dims(), pi.graded_dims());
                let keys: std::collections::BTreeSet<i32> = a.keys().chain(b.keys()).copied().collect();
                keys.into_iter().map(|p| (p, a.get(&p).copied().unwrap_or(0), b.get(&p).copied().unwrap_or(0))).collect()
            };
            report.record("tensor_dimensions", Verdict::from_bool(same), json!({ "degree_tensor_pi": dims }));
        }
        Err(Error::MaxDegreeReached(m)) => {
            report.record("tensor_dimensions", Verdict::Indeterminate, json!({ "max_degree_reached": m }))
        }
        Err(err) => return Err(err),
    }
    let seq = tensor_sequence(pi);
    let bij = seq.iter().all(|&(_, t, r, n)| t == r && r == n);
    report.record("tensor_multiplication_bijective", Verdict::from_bool(bij), json!(seq));
    report.timings = timer_report.timings;
    Ok(report)
}

/// The full certificate: the reconstruction plus selfinjectivity and the
/// Gorenstein dimension formula in terms of the cluster tilting
/// subcategory of `Π_0`.
pub fn certify(pi: &Arc<FDAlgebra>, opts: &CertOptions) -> Result<CertReport> {
    let mut report = reconstruct(pi, opts)?;
    let selfinj = check_selfinjective(pi)?;
    report.witnesses.insert("selfinjective".into(), json!(selfinj));
    if report.overall() == Verdict::Pass {
        let g = gorenstein_dimension(pi, opts.resolution_bound)?;
        let lambda = Arc::new(pi.degree_zero_part());
        let ctx = DerivedContext::new(lambda, opts.d)?;
        let rec = cluster_tilting(&ctx, opts.nilpotence_bound)?;
        let table = neg_ext_table(&rec);
        let via_u = gdim_from_table(&table, opts.d)?;
        report.record(
            "gdim_formula",
            Verdict::from_bool(via_u == Some(g)),
            json!({ "gorenstein": g, "via_u": via_u, "negative_ext": table.totals }),
        );
    }
    Ok(report)
}

/// `Λ` is `(d-1)`-representation finite iff `Π_d(Λ)` is selfinjective and
/// bimodule stably (1)-twisted `d`-Calabi-Yau.
pub fn selfinjective_correspondence(lambda: &Arc<FDAlgebra>, opts: &CertOptions) -> Result<CertReport> {
    let mut report = CertReport::with_params(opts, lambda.field().modulus());
    let mut rng = opts.rng();
    let ctx = DerivedContext::new(lambda.clone(), opts.d)?;
    let rec = cluster_tilting(&ctx, opts.nilpotence_bound)?;
    let rf = is_rep_finite(&ctx, &rec, &mut rng)?;
    let pi = Arc::new(tensor_pi_d(lambda, opts.d, opts.max_degree)?);
    let selfinj = check_selfinjective(&pi)?;
    let cy = match gorenstein_dimension(&pi, opts.resolution_bound) {
        Ok(g) => {
            let bctx = BimoduleContext::new(pi.clone())?;
            check_stably_cy(&bctx, opts.d, g, &mut rng)?.verdict == Verdict::Pass
        }
        Err(Error::NotGorenstein(_)) => false,
        Err(e) => return Err(e),
    };
    let right = selfinj && cy;
    report.record(
        "correspondence",
        Verdict::from_bool(rf == right),
        json!({ "representation_finite": rf, "selfinjective": selfinj, "stably_cy": cy }),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::GroebnerBounds;
    use crate::preprojective::double_quiver_pi2;
    use crate::testutil::{field, linear};

    fn pi2_a(n: usize) -> Arc<FDAlgebra> {
        let q = linear(n, false, 0).presentation.quiver;
        Arc::new(FDAlgebra::from_presentation(&double_quiver_pi2(&q, field()).unwrap(), GroebnerBounds::default()).unwrap())
    }

    #[test]
    fn gorenstein_dimensions() {
        assert_eq!(gorenstein_dimension(&pi2_a(2), 5).unwrap(), 0);
        assert_eq!(gorenstein_dimension(&linear(3, true, 0).algebra, 5).unwrap(), 2);
        assert!(check_selfinjective(&pi2_a(2)).unwrap());
        assert!(!check_selfinjective(&linear(2, false, 0).algebra).unwrap());
    }

    #[test]
    fn preprojective_of_a2_is_certified() {
        let report = certify(&pi2_a(2), &CertOptions::new(2)).unwrap();
        assert_eq!(report.overall(), Verdict::Pass, "{report:#?}");
    }

    #[test]
    fn graded_arrow_fails_condition3() {
        let lam = linear(2, false, 1).algebra;
        let ctx = BimoduleContext::new(lam.clone()).unwrap();
        let c3 = check_condition3(&ctx, 3, Some(1), None, None).unwrap();
        assert_eq!(c3.verdict, Verdict::Fail);
        assert!(c3.witness.is_some());
        let report = reconstruct(&lam, &CertOptions::new(3)).unwrap();
        assert_eq!(report.verdicts["condition3"], Verdict::Fail);
        assert!(!report.verdicts.contains_key("tensor_dimensions"));
    }

    #[test]
    fn degree_zero_algebra_passes_vacuously() {
        let lam = linear(2, false, 0).algebra;
        let report = certify(&lam, &CertOptions::new(3)).unwrap();
        assert_eq!(report.overall(), Verdict::Pass, "{report:#?}");
    }

    #[test]
    fn wrong_d_fails_the_calabi_yau_check() {
        let ctx = BimoduleContext::new(pi2_a(2)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(check_stably_cy(&ctx, 2, 0, &mut rng).unwrap().verdict, Verdict::Pass);
        assert_eq!(check_stably_cy(&ctx, 5, 0, &mut rng).unwrap().verdict, Verdict::Fail);
    }
}
