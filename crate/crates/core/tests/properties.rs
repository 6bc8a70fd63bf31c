use proptest::prelude::*;
use unigates::compiler::{compile, evaluate, evaluate_items};
use unigates::generators::{self, two_local_clifford_set};
use unigates::lieclosure::closure;
use unigates::linalg::{commutator, expm_antiherm, frob_inner};
use unigates::{CompileConfig, ComplexMatrix, Monomial, C64};

fn monomial(l: u32, n: usize) -> impl Strategy<Value = Monomial> {
    (0..2 * l as i64, prop::collection::vec(0..l as i64, 2 * n)).prop_map(move |(p, e)| Monomial::new(l, n, p, &e).unwrap())
}

fn anti_hermitian(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(-1.0f64..1.0, 2 * dim * dim).prop_map(move |v| {
        let g = ComplexMatrix::from_fn(dim, |r, c| C64::new(v[2 * (r * dim + c)], v[2 * (r * dim + c) + 1]));
        (&g - &g.adjoint()).scale_real(0.5)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn monomial_product_is_associative((a, b, c) in (monomial(3, 2), monomial(3, 2), monomial(3, 2))) {
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn monomial_inverse((a, k) in (monomial(5, 1), 0u64..12)) {
        let id = Monomial::identity(5, 1).unwrap();
        prop_assert_eq!(a.mul(&a.inv()).unwrap(), id.clone());
        // T^l = I for every generator, so a^(2l) is trivial for any monomial.
        prop_assert_eq!(a.pow(10), id);
        prop_assert_eq!(a.pow(k).mul(&a).unwrap(), a.pow(k + 1));
    }

    #[test]
    fn evaluation_is_a_homomorphism((a, b) in (monomial(3, 1), monomial(3, 1))) {
        let gens = generators::torus_t(1, 3).unwrap();
        let lhs = a.mul(&b).unwrap().eval(&gens).unwrap();
        let rhs = &a.eval(&gens).unwrap() * &b.eval(&gens).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn exponential_is_unitary(a in anti_hermitian(4), t in -5.0f64..5.0) {
        let u = expm_antiherm(&a.scale_real(t)).unwrap();
        prop_assert!(u.unitary_deviation() < 1e-12);
    }

    #[test]
    fn evaluate_is_always_unitary(taus in prop::collection::vec((0usize..5, -10.0f64..10.0), 0..40)) {
        let gens = two_local_clifford_set(2).unwrap();
        let items: Vec<(String, f64)> = taus.iter().map(|&(g, t)| (gens.elements[g].id.clone(), t)).collect();
        let u = evaluate_items(&items, &gens).unwrap();
        prop_assert!(u.unitary_deviation() < 1e-9);
    }
}

#[test]
fn closure_is_closed_under_brackets() {
    let gens = generators::torus_split_set(1, 3).unwrap();
    let basis = closure(&gens).unwrap();
    for a in basis.basis() {
        for b in basis.basis() {
            let c = commutator(a, b).unwrap();
            assert!(basis.membership(&c, 1e-8).unwrap().is_member());
        }
        assert!(a.anti_hermitian_deviation() < 1e-12);
        assert!(frob_inner(a, a).unwrap() > 0.999);
    }
}

#[test]
fn recompiling_reproduces_coordinates() {
    let gens = two_local_clifford_set(2).unwrap();
    let basis = closure(&gens).unwrap();
    let a = basis.basis().iter().enumerate().fold(ComplexMatrix::zeros(4), |mut acc, (i, b)| {
        acc.axpy(0.05 * (i as f64 - 7.0), b);
        acc
    });
    let u = expm_antiherm(&a).unwrap();
    let cfg = CompileConfig::default().with_slices(64);
    let first = compile(&u, &gens, &basis, &cfg).unwrap();
    assert!(first.report.phase_invariant_error < 1e-4);
    let realized = evaluate(&first, &gens).unwrap();
    let second = compile(&realized, &gens, &basis, &cfg).unwrap();
    let drift = first.coefficients.iter().zip(&second.coefficients).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    // Coordinates drift by about the synthesis error, so 1e−6 needs a
    // finer slicing.
    assert!(drift <= 10.0 * first.report.phase_invariant_error, "drift {drift:e}");
    let tight = compile(&u, &gens, &basis, &CompileConfig::default().with_slices(1024)).unwrap();
    let again = compile(&evaluate(&tight, &gens).unwrap(), &gens, &basis, &cfg).unwrap();
    let drift = tight.coefficients.iter().zip(&again.coefficients).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(drift < 1e-6, "drift {drift:e}, error {:e}", tight.report.phase_invariant_error);
}

#[test]
fn pipeline_over_every_lie_family() {
    for family in generators::Family::ALL.iter().copied().filter(|f| f.is_lie_family()) {
        let mut p = generators::FamilyParams::new(family, 2, if family.name().starts_with("torus") { 3 } else { 2 });
        p.max_dim = 64;
        let gens = generators::build(&p).unwrap();
        let basis = closure(&gens).unwrap();
        assert!(basis.recipe_fidelity(&gens).unwrap() < 1e-8, "{}", family.name());
        let u = expm_antiherm(&basis.basis()[basis.len() / 2].scale_real(0.3)).unwrap();
        let seq = compile(&u, &gens, &basis, &CompileConfig::default().with_slices(4)).unwrap();
        assert!(evaluate(&seq, &gens).unwrap().unitary_deviation() < 1e-9);
    }
}
