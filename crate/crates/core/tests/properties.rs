use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use preproj_core::algebra::{FDAlgebra, Presented};
use preproj_core::certify::{reconstruct, CertOptions};
use preproj_core::field::Fp;
use preproj_core::groebner::GroebnerBounds;
use preproj_core::io::{emit_algebra, parse_input, Parsed};
use preproj_core::linalg::Matrix;
use preproj_core::module::GradedModule;
use preproj_core::preprojective::{tensor_pi_d, tensor_sequence};
use preproj_core::quiver::{Arrow, Quiver, QuiverPresentation, QuiverWithPotential};
use preproj_core::resolution::{global_dimension, Resolution};

const P: u32 = 32003;

fn field() -> Fp {
    Fp::new(P).unwrap()
}

/// Linearly oriented `A_n` with arrows in degree `deg`, optionally modulo
/// the square of the radical.
fn linear(n: usize, rad2: bool, deg: i32) -> Arc<FDAlgebra> {
    let vertices = (1..=n).map(|i| i.to_string()).collect();
    let arrows = (0..n - 1).map(|i| Arrow { name: format!("a{}", i + 1), src: i, tgt: i + 1, degree: deg }).collect();
    let rels = if rad2 { (0..n.saturating_sub(2)).map(|i| vec![(1, vec![i, i + 1])]).collect() } else { vec![] };
    let pres = QuiverPresentation::new(field(), Quiver::new(vertices, arrows).unwrap(), rels).unwrap();
    Presented::new(&pres, GroebnerBounds::default()).unwrap().algebra
}

/// The commutative square `kA_2 ⊗ kA_2`.
fn square() -> Arc<FDAlgebra> {
    let vertices = ["11", "12", "21", "22"].map(String::from).to_vec();
    let arrow = |name: &str, src, tgt| Arrow { name: name.into(), src, tgt, degree: 0 };
    let arrows = vec![arrow("x1", 0, 2), arrow("x2", 1, 3), arrow("y1", 0, 1), arrow("y2", 2, 3)];
    let rel = vec![(1, vec![0, 3]), (field().neg(1), vec![2, 1])];
    let pres = QuiverPresentation::new(field(), Quiver::new(vertices, arrows).unwrap(), vec![rel]).unwrap();
    Presented::new(&pres, GroebnerBounds::default()).unwrap().algebra
}

/// Path algebras of linear quivers, with and without relations and
/// gradings, plus a commutative square and two preprojective algebras.
fn algebras() -> &'static [Arc<FDAlgebra>] {
    static ALGEBRAS: OnceLock<Vec<Arc<FDAlgebra>>> = OnceLock::new();
    ALGEBRAS.get_or_init(|| {
        let mut v = Vec::new();
        for n in 1..=4 {
            for rad2 in [false, true] {
                for deg in [0, 1] {
                    v.push(linear(n, rad2, deg));
                }
            }
        }
        v.push(square());
        v.push(Arc::new(tensor_pi_d(&square(), 3, 64).unwrap()));
        v.push(Arc::new(tensor_pi_d(&linear(3, false, 0), 2, 64).unwrap()));
        v
    })
}

fn algebra() -> impl Strategy<Value = Arc<FDAlgebra>> {
    (0..algebras().len()).prop_map(|i| algebras()[i].clone())
}

/// The submodule of the regular module generated by a few random basis
/// vectors, or the quotient by it.
fn module(alg: &Arc<FDAlgebra>, seeds: &[u64], sub_only: bool) -> GradedModule {
    let reg = GradedModule::regular(alg.clone());
    let vecs: Vec<Vec<u32>> = seeds
        .iter()
        .map(|&s| {
            let i = (s as usize) % reg.dim();
            let mut v = vec![0; reg.dim()];
            v[i] = 1 + (s / 7 % (P as u64 - 1)) as u32;
            v
        })
        .collect();
    let (sub, incl) = reg.submodule_generated(&vecs);
    if sub_only {
        return sub;
    }
    let span: Vec<Vec<u32>> = (0..sub.dim()).map(|c| incl.column(c)).collect();
    reg.quotient(&span).unwrap().0
}

/// `dim Hom_gr(M, N(p))` by solving `X ρ_M(g) = ρ_N(g) X` directly.
fn hom_dim_oracle(m: &GradedModule, n: &GradedModule, p: i32) -> usize {
    let f = m.field();
    let unknowns: Vec<(usize, usize)> = (0..n.dim())
        .flat_map(|r| (0..m.dim()).map(move |c| (r, c)))
        .filter(|&(r, c)| n.vertex_of(r) == m.vertex_of(c) && n.degree_of(r) == m.degree_of(c) + p)
        .collect();
    if unknowns.is_empty() {
        return 0;
    }
    let mut rows = Vec::new();
    for g in 0..m.algebra().generators().len() {
        let (a, b) = (m.gen_matrix(g), n.gen_matrix(g));
        for r in 0..n.dim() {
            for c2 in 0..m.dim() {
                let row: Vec<u32> = unknowns
                    .iter()
                    .map(|&(r1, c1)| {
                        let mut x = 0;
                        if r1 == r {
                            x = f.add(x, a.get(c1, c2));
                        }
                        if c1 == c2 {
                            x = f.sub(x, b.get(r, r1));
                        }
                        x
                    })
                    .collect();
                if row.iter().any(|&x| x != 0) {
                    rows.push(row);
                }
            }
        }
    }
    if rows.is_empty() {
        return unknowns.len();
    }
    let mut mat = Matrix::zeros(f, rows.len(), unknowns.len());
    for (i, r) in rows.iter().enumerate() {
        mat.row_mut(i).copy_from_slice(r);
    }
    unknowns.len() - mat.rank()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn field_operations_are_consistent(a in 0u32..P, b in 0u32..P, c in 0u32..P, v in any::<i64>()) {
        let f = field();
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(f.sub(a, b), b), a);
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        prop_assert_eq!(f.from_i64(f.to_signed(a)), a);
        prop_assert_eq!(f.from_i64(v), (v.rem_euclid(P as i64)) as u32);
    }

    #[test]
    fn rank_and_kernel_agree(
        rows in 1usize..6,
        cols in 1usize..6,
        entries in proptest::collection::vec(-2i64..=2, 36),
        other in proptest::collection::vec(-2i64..=2, 36),
    ) {
        let f = field();
        let grid = |e: &[i64], r: usize, c: usize| -> Vec<Vec<i64>> {
            (0..r).map(|i| e[i * c..(i + 1) * c].to_vec()).collect()
        };
        let a = Matrix::from_rows(f, &grid(&entries, rows, cols));
        let kernel = a.kernel_basis();
        prop_assert_eq!(a.rank() + kernel.len(), cols);
        for v in &kernel {
            prop_assert!(a.mul_vec(v).iter().all(|&x| x == 0));
        }
        prop_assert_eq!(a.rank(), a.transpose().rank());
        let b = Matrix::from_rows(f, &grid(&other, cols, rows));
        let c = Matrix::from_rows(f, &grid(&entries, rows, cols));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn hom_spaces_match_the_linear_system(
        alg in algebra(),
        s1 in proptest::collection::vec(any::<u64>(), 0..3),
        s2 in proptest::collection::vec(any::<u64>(), 0..3),
        shift in -1i32..=1,
        subs in (any::<bool>(), any::<bool>()),
    ) {
        let m = module(&alg, &s1, subs.0);
        let n = module(&alg, &s2, subs.1).shift(shift);
        for p in -2..=2 {
            let basis = m.hom_space(&n, p).unwrap();
            for h in &basis {
                prop_assert!(m.is_homomorphism(&n, p, h));
            }
            prop_assert_eq!(basis.len(), hom_dim_oracle(&m, &n, p));
        }
        // Yoneda: Hom(e_v A, M(p)) = M_p e_v.
        let shape = n.shape();
        for v in 0..alg.num_vertices() {
            let pv = GradedModule::projective(alg.clone(), v, 0).unwrap();
            for p in -2..=2 {
                let expected = shape.get(&(p, v)).copied().unwrap_or(0);
                prop_assert_eq!(pv.hom_space(&n, p).unwrap().len(), expected);
            }
        }
    }

    #[test]
    fn resolutions_are_exact_and_minimal(
        alg in algebra(),
        seeds in proptest::collection::vec(any::<u64>(), 0..3),
        sub_only in any::<bool>(),
    ) {
        let m = module(&alg, &seeds, sub_only);
        prop_assume!(!m.is_zero());
        let res = Resolution::compute(&m, 4);
        let mats: Vec<Matrix> = res
            .differentials
            .iter()
            .enumerate()
            .map(|(i, d)| d.matrix(&res.realized[i + 1], &res.realized[i]))
            .collect();
        prop_assert!(res.differentials.iter().all(|d| d.is_radical(&alg)));
        prop_assert_eq!(res.covers[0].rank(), m.dim());
        for i in 0..mats.len() {
            let incoming = if i == 0 { m.dim() } else { mats[i - 1].rank() };
            prop_assert_eq!(res.realized[i].module.dim() - incoming, mats[i].rank());
            if i > 0 {
                prop_assert!(mats[i - 1].mul(&mats[i]).is_zero());
            }
        }
        // Betti numbers equal dim Ext^j(M, S) summed over simples.
        for v in 0..alg.num_vertices() {
            let s = GradedModule::simple(alg.clone(), v, 0).unwrap();
            for j in 0..res.terms.len().saturating_sub(1) {
                let ext: usize = res.ext(&s, j).unwrap().values().sum();
                let betti = res.terms[j].gens.iter().filter(|g| g.0 == v).count();
                prop_assert_eq!(ext, betti);
            }
        }
    }

    #[test]
    fn emitted_algebras_parse_back(alg in algebra()) {
        let text = serde_json::to_string(&emit_algebra(&alg)).unwrap();
        match parse_input(&text, field()).unwrap() {
            Parsed::Algebra(back) => prop_assert_eq!(&back, alg.as_ref()),
            _ => prop_assert!(false, "not parsed as an algebra"),
        }
    }

    #[test]
    fn potentials_are_stored_up_to_rotation(rot in 0usize..3, c in 1i64..5) {
        let vertices = vec!["1".to_string(), "2".to_string(), "3".to_string()];
        let arrows = vec![
            Arrow { name: "a".into(), src: 0, tgt: 1, degree: 0 },
            Arrow { name: "b".into(), src: 1, tgt: 2, degree: 0 },
            Arrow { name: "c".into(), src: 2, tgt: 0, degree: 1 },
        ];
        let q = Quiver::new(vertices, arrows).unwrap();
        let mut cycle = vec![0, 1, 2];
        cycle.rotate_left(rot);
        let f = field();
        let w = QuiverWithPotential::new(f, q.clone(), vec![(f.from_i64(c), cycle)]).unwrap();
        let base = QuiverWithPotential::new(f, q, vec![(f.from_i64(c), vec![0, 1, 2])]).unwrap();
        prop_assert_eq!(w.potential, base.potential);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn tensor_multiplication_is_bijective_and_seed_independent(
        n in 1usize..=3,
        rad2 in any::<bool>(),
        d in 2usize..=3,
        seed in any::<u64>(),
    ) {
        let lam = linear(n, rad2, 0);
        prop_assume!(global_dimension(&lam, d - 1).is_some());
        let pi = Arc::new(tensor_pi_d(&lam, d, 64).unwrap());
        prop_assert!(tensor_sequence(&pi).iter().all(|&(_, t, r, m)| t == r && r == m));
        let mut a = CertOptions::new(d);
        a.seed = seed;
        let mut b = CertOptions::new(d);
        b.seed = seed.wrapping_add(1);
        let (ra, rb) = (reconstruct(&pi, &a).unwrap(), reconstruct(&pi, &b).unwrap());
        prop_assert_eq!(&ra.verdicts, &rb.verdicts);
        prop_assert_eq!(&ra.witnesses, &rb.witnesses);
    }
}

// A relation whose source lands outside the target module still
// constrains the images on its other side.
#[test]
fn homs_out_of_a_radical_respect_every_relation() {
    for alg in [square(), Arc::new(tensor_pi_d(&square(), 3, 64).unwrap())] {
        for v in 0..alg.num_vertices() {
            let s = GradedModule::simple(alg.clone(), v, 0).unwrap();
            let omega = preproj_core::resolution::syzygy(&s, 1);
            for w in 0..alg.num_vertices() {
                let pw = GradedModule::projective(alg.clone(), w, 0).unwrap();
                for p in -2..=2 {
                    let basis = omega.hom_space(&pw, p).unwrap();
                    assert!(basis.iter().all(|h| omega.is_homomorphism(&pw, p, h)));
                    assert_eq!(basis.len(), hom_dim_oracle(&omega, &pw, p));
                }
            }
        }
    }
}
