use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use torelim_core::elimination::{forms_through_points, hybrid_matrix, macaulay_matrix};
use torelim_core::lattice::{FacetPresentation, LatticeVector};
use torelim_core::polyalg::{det, rank, Field, Matrix, PolyMatrix, PrimeField, Rationals, SparsePoly};
use torelim_core::resrescomplex::{
    determinant_of_complex, determinant_of_complex_shuffled, koszul_strand, residue_of_product, sparse_resultant,
};
use torelim_core::sylvester::{decompose_with, Routing};
use torelim_core::{DivisorClass, Fan, ToricContext};

fn h(r: i64) -> ToricContext {
    ToricContext::new(Fan::hirzebruch(r), &[0, 1]).unwrap()
}

fn cl(v: &[i64]) -> DivisorClass {
    DivisorClass(v.to_vec())
}

fn small_prime() -> PrimeField {
    PrimeField::new(10007).unwrap()
}

fn int_matrix<F: Field>(f: &F, rows: &[Vec<i64>]) -> Matrix<F::Elem> {
    let cols = rows.first().map_or(0, Vec::len);
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect(), cols).unwrap()
}

fn cofactor_det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, &x)| x).collect()).collect();
            let s: i128 = if j % 2 == 0 { 1 } else { -1 };
            s * i128::from(m[0][j]) * cofactor_det(&minor)
        })
        .sum()
}

fn square(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-6i64..=6, n), n))
}

fn rect() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-3i64..=3, c), r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn translation_shifts_lattice_points(a in 0i64..4, b in 0i64..3, t0 in -3i64..4, t1 in -3i64..4) {
        let fan = Fan::hirzebruch(1);
        let pres = FacetPresentation(vec![0, 0, a, b]);
        let t = LatticeVector(vec![t0, t1]);
        let moved = fan.lattice_points(&pres.translate(&fan, &t)).unwrap();
        let mut expect: Vec<Vec<i64>> =
            fan.lattice_points(&pres).unwrap().iter().map(|p| vec![p.0[0] - t0, p.0[1] - t1]).collect();
        let mut got: Vec<Vec<i64>> = moved.iter().map(|p| p.0.clone()).collect();
        expect.sort();
        got.sort();
        prop_assert_eq!(got, expect);
    }

    #[test]
    fn rank_of_transpose(m in rect()) {
        let f = Rationals;
        let a = int_matrix(&f, &m);
        prop_assert_eq!(rank(&f, &a), rank(&f, &a.transpose()));
        let p = small_prime();
        let b = int_matrix(&p, &m);
        prop_assert_eq!(rank(&p, &b), rank(&p, &b.transpose()));
    }

    #[test]
    fn bareiss_matches_cofactor(m in square(5)) {
        let f = Rationals;
        let d = det(&f, &int_matrix(&f, &m)).unwrap();
        prop_assert_eq!(d, f.from_i64(cofactor_det(&m) as i64));
    }

    #[test]
    fn coefficient_vector_round_trip(a in 0i64..5, b in 0i64..3, seed in any::<u64>()) {
        let ctx = h(1);
        let f = Rationals;
        let cls = cl(&[a + b, b]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = SparsePoly::random(&ctx, &f, &cls, &mut rng).unwrap();
        let basis = ctx.monomial_basis(&cls).unwrap();
        let v = p.coefficient_vector(&f, &basis).unwrap();
        prop_assert_eq!(SparsePoly::from_coefficient_vector(&f, cls, &basis, &v).unwrap(), p);
    }

    #[test]
    fn decomposition_reconstructs(r in 1i64..4, a in 1i64..5, b in 1i64..3, nu_x in 0i64..3, seed in any::<u64>(), perm in Just(vec![0usize, 1, 2]).prop_shuffle()) {
        let ctx = h(r);
        let f = small_prime();
        let cls = cl(&[a + r * b, b]);
        let nu = cl(&[nu_x, 0]);
        prop_assume!(ctx.is_nef_class(&cls).unwrap());
        prop_assume!(ctx.decomposition_degree_ok(&nu, std::slice::from_ref(&cls)).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = SparsePoly::random(&ctx, &f, &cls, &mut rng).unwrap();
        let routing = Routing::with_priority(perm).unwrap();
        for mu in ctx.monomial_basis(&nu).unwrap() {
            let d = decompose_with(&ctx, &f, &p, &mu, &routing, 0).unwrap();
            prop_assert_eq!(d.reconstruct(&f), p.clone());
        }
    }

    #[test]
    fn poly_det_matches_permutation_expansion(n in 1usize..4, seed in any::<u64>()) {
        let ctx = h(1);
        let f = small_prime();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let row_cls: Vec<DivisorClass> = (0..n).map(|i| cl(&[2 + i as i64 % 2, 1])).collect();
        let col_cls: Vec<DivisorClass> = (0..n).map(|j| cl(&[j as i64 % 2, 0])).collect();
        let entries: Vec<Vec<SparsePoly<u64>>> = (0..n)
            .map(|i| (0..n).map(|j| SparsePoly::random(&ctx, &f, &(&row_cls[i] - &col_cls[j]), &mut rng).unwrap()).collect())
            .collect();
        let m = PolyMatrix::new(entries.clone(), row_cls, col_cls).unwrap();
        let cls = m.det_class();
        let mut expect = SparsePoly::zero(cls.clone());
        for perm in permutations(n) {
            let mut term = entries[0][perm[0]].clone();
            for (i, &j) in perm.iter().enumerate().skip(1) {
                term = term.mul(&f, &entries[i][j]);
            }
            let term = if inversions(&perm) % 2 == 1 { term.scale(&f, &f.neg(&f.one())) } else { term };
            expect = expect.add(&f, &term).unwrap();
        }
        prop_assert_eq!(m.det(&f), expect);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn koszul_differentials_compose_to_zero(a in 2i64..6, b in 1i64..3, saturated in any::<bool>(), seed in any::<u64>()) {
        let ctx = h(1);
        let f = small_prime();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys: Vec<_> = (0..3).map(|_| SparsePoly::random(&ctx, &f, &cl(&[2, 1]), &mut rng).unwrap()).collect();
        let alpha = cl(&[a, b]);
        let strand = match koszul_strand(&ctx, &f, &sys, &alpha, saturated, &Routing::standard(2)) {
            Ok(s) => s,
            // Saturation needs a Sylvester-admissible ν = δ − α.
            Err(_) => koszul_strand(&ctx, &f, &sys, &alpha, false, &Routing::standard(2)).unwrap(),
        };
        prop_assert!(strand.is_complex(&f));
        prop_assert_eq!(&strand.maps[0].matrix, &macaulay_or_hybrid(&ctx, &f, &sys, &alpha, strand.saturated));
    }

    #[test]
    fn complex_determinant_ignores_pivot_order(seed in any::<u64>()) {
        let ctx = h(1);
        let f = small_prime();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys: Vec<_> = (0..3).map(|_| SparsePoly::random(&ctx, &f, &cl(&[2, 1]), &mut rng).unwrap()).collect();
        let strand = koszul_strand(&ctx, &f, &sys, &cl(&[4, 2]), false, &Routing::standard(2)).unwrap();
        let Ok(base) = determinant_of_complex(&f, &strand) else { return Ok(()) };
        let v = determinant_of_complex_shuffled(&f, &strand, &mut rng).unwrap();
        prop_assert!(v == base || v == f.neg(&base));
    }

    #[test]
    fn residue_is_bilinear(seed in any::<u64>()) {
        let ctx = h(1);
        let f = small_prime();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys: Vec<_> = (0..3).map(|_| SparsePoly::random(&ctx, &f, &cl(&[2, 1]), &mut rng).unwrap()).collect();
        let routing = Routing::standard(2);
        let rp = |p: &SparsePoly<u64>, q: &SparsePoly<u64>| residue_of_product(&ctx, &f, &sys, p, q, &routing).map(|r| r.value);
        let p1 = SparsePoly::random(&ctx, &f, &cl(&[1, 0]), &mut rng).unwrap();
        let p2 = SparsePoly::random(&ctx, &f, &cl(&[1, 0]), &mut rng).unwrap();
        let q = SparsePoly::random(&ctx, &f, &cl(&[2, 1]), &mut rng).unwrap();
        let (s, t) = (f.random(&mut rng), f.random(&mut rng));
        let combo = p1.scale(&f, &s).add(&f, &p2.scale(&f, &t)).unwrap();
        // Vanishing resultant at this specialization: nothing to compare.
        let (Ok(a), Ok(b), Ok(c)) = (rp(&combo, &q), rp(&p1, &q), rp(&p2, &q)) else { return Ok(()) };
        prop_assert_eq!(a, f.add(&f.mul(&s, &b), &f.mul(&t, &c)));
        let one = SparsePoly::monomial(&f, &ctx.graded(vec![0; 4]).unwrap());
        prop_assert_eq!(rp(&p1, &q).unwrap(), rp(&one, &p1.mul(&f, &q)).unwrap());
    }

    #[test]
    fn resultant_separates_fitted_from_random(seed in any::<u64>()) {
        let ctx = h(1);
        let f = Rationals;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let routing = Routing::standard(2);
        let sys: Vec<_> = (0..3).map(|_| SparsePoly::random(&ctx, &f, &cl(&[2, 1]), &mut rng).unwrap()).collect();
        prop_assert!(!f.is_zero(&sparse_resultant(&ctx, &f, &sys, &cl(&[3, 1]), &routing).unwrap()));
        let pts = vec![vec![f.from_i64(2), f.from_i64(-1)]];
        let fitted = forms_through_points(&ctx, &f, &cl(&[2, 1]), &pts, 3, &mut rng).unwrap();
        for alpha in [[3, 1], [2, 1], [4, 2]] {
            prop_assert!(f.is_zero(&sparse_resultant(&ctx, &f, &fitted, &cl(&alpha), &routing).unwrap()));
        }
    }
}

fn macaulay_or_hybrid<F: Field>(
    ctx: &ToricContext,
    f: &F,
    sys: &[SparsePoly<F::Elem>],
    alpha: &DivisorClass,
    saturated: bool,
) -> Matrix<F::Elem> {
    if saturated {
        hybrid_matrix(ctx, f, sys, alpha).unwrap().matrix
    } else {
        macaulay_matrix(ctx, f, sys, alpha).unwrap().matrix
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn inversions(p: &[usize]) -> usize {
    (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count()
}
