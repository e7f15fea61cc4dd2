//! Property suites for the algebraic kernels: ring axioms, division and
//! evaluation laws, bracket axioms, torus associativity, and frame
//! normalization. Everything asserts exact equality.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use clusterkit::exponent::Exponent;
use clusterkit::laurent::LaurentPolynomial;
use clusterkit::poisson::{bracket, PoissonMatrix};
use clusterkit::quantum::{QuantumSeed, TorusElement, VLaurent};
use clusterkit::seed::ExchangeMatrix;

fn rational() -> impl Strategy<Value = BigRational> {
    (-9i64..=9, 1i64..=4)
        .prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn laurent(n: usize) -> impl Strategy<Value = LaurentPolynomial> {
    prop::collection::vec(
        (prop::collection::vec(-2i64..=2, n), rational()),
        0..=5,
    )
    .prop_map(move |terms| {
        LaurentPolynomial::from_terms(
            n,
            terms.into_iter().map(|(e, c)| (Exponent::new(e), c)),
        )
    })
}

fn nonzero_laurent(n: usize) -> impl Strategy<Value = LaurentPolynomial> {
    laurent(n).prop_filter("nonzero", |f| !f.is_zero())
}

fn skew_lambda(n: usize) -> impl Strategy<Value = PoissonMatrix> {
    prop::collection::vec(-3i64..=3, n * (n - 1) / 2).prop_map(move |upper| {
        let mut entries = vec![vec![0i64; n]; n];
        let mut it = upper.into_iter();
        for i in 0..n {
            for j in i + 1..n {
                let v = it.next().unwrap();
                entries[i][j] = v;
                entries[j][i] = -v;
            }
        }
        PoissonMatrix::new(entries).unwrap()
    })
}

fn vlaurent() -> impl Strategy<Value = VLaurent> {
    prop::collection::vec((-3i64..=3, -4i64..=4), 0..=3).prop_map(|terms| {
        VLaurent::from_terms(terms.into_iter().map(|(e, c)| (e, BigInt::from(c))))
    })
}

fn torus_element(lambda: PoissonMatrix) -> impl Strategy<Value = TorusElement> {
    let n = lambda.n();
    prop::collection::vec(
        (prop::collection::vec(-2i64..=2, n), vlaurent()),
        0..=3,
    )
    .prop_map(move |terms| {
        TorusElement::from_terms(
            lambda.clone(),
            terms.into_iter().map(|(e, c)| (Exponent::new(e), c)),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn laurent_ring_axioms(
        f in laurent(3),
        g in laurent(3),
        h in laurent(3),
    ) {
        prop_assert_eq!(&(&f + &g) + &h, &f + &(&g + &h));
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
    }

    #[test]
    fn division_inverts_multiplication(
        f in laurent(3),
        g in nonzero_laurent(3),
    ) {
        let product = &f * &g;
        prop_assert_eq!(product.exact_div(&g).unwrap(), f);
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(
        f in laurent(2),
        g in laurent(2),
        a in rational(),
        b in rational(),
    ) {
        // Stay off the coordinate axes so all powers are defined.
        prop_assume!(!num_traits::Zero::is_zero(&a) && !num_traits::Zero::is_zero(&b));
        let p = [a, b];
        let lhs = (&f * &g).evaluate(&p).unwrap();
        let rhs = f.evaluate(&p).unwrap() * g.evaluate(&p).unwrap();
        prop_assert_eq!(lhs, rhs);
        let sum_lhs = (&f + &g).evaluate(&p).unwrap();
        let sum_rhs = f.evaluate(&p).unwrap() + g.evaluate(&p).unwrap();
        prop_assert_eq!(sum_lhs, sum_rhs);
    }

    #[test]
    fn render_parse_roundtrip(f in laurent(3)) {
        let text = f.render();
        prop_assert_eq!(LaurentPolynomial::parse(&text, 3).unwrap(), f);
    }

    #[test]
    fn bracket_axioms(
        lambda in skew_lambda(3),
        f in laurent(3),
        g in laurent(3),
        h in laurent(3),
    ) {
        let br = |a: &LaurentPolynomial, b: &LaurentPolynomial| bracket(a, b, &lambda).unwrap();
        // Skew-symmetry.
        prop_assert_eq!(br(&f, &g), br(&g, &f).negated());
        // Jacobi.
        let jacobi = &(&br(&f, &br(&g, &h)) + &br(&h, &br(&f, &g))) + &br(&g, &br(&h, &f));
        prop_assert!(jacobi.is_zero());
        // Leibniz.
        let lhs = br(&f, &(&g * &h));
        let rhs = &(&br(&f, &g) * &h) + &(&g * &br(&f, &h));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn matrix_mutation_is_involutive(
        upper in prop::collection::vec(-3i64..=3, 6),
        frozen in prop::collection::vec(-3i64..=3, 8),
        k in 0usize..4,
    ) {
        let mut entries = vec![vec![0i64; 6]; 4];
        let mut it = upper.into_iter();
        for i in 0..4 {
            for j in i + 1..4 {
                let v = it.next().unwrap();
                entries[i][j] = v;
                entries[j][i] = -v;
            }
        }
        let mut fr = frozen.into_iter();
        for i in 0..4 {
            for j in 4..6 {
                entries[i][j] = fr.next().unwrap();
            }
        }
        let b = ExchangeMatrix::new(entries).unwrap();
        let back = b.mutate(k).mutate(k);
        prop_assert_eq!(back.entries(), b.entries());
        // The original symmetrizer still symmetrizes the mutated block:
        // d_i b'_ij = -d_j b'_ji, re-derived rather than trusted.
        let mutated = b.mutate(k);
        let d = b.symmetrizer();
        for i in 0..4 {
            for j in 0..4 {
                prop_assert_eq!(
                    d[i] * mutated.entry(i, j),
                    -d[j] * mutated.entry(j, i)
                );
            }
        }
    }

    #[test]
    fn torus_multiplication_is_associative(
        (f, g, h) in skew_lambda(3).prop_flat_map(|lambda| {
            (
                torus_element(lambda.clone()),
                torus_element(lambda.clone()),
                torus_element(lambda),
            )
        }),
    ) {
        let lhs = f.mul(&g).mul(&h);
        let rhs = f.mul(&g.mul(&h));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn torus_left_division_inverts(
        (y, q) in skew_lambda(2).prop_flat_map(|lambda| {
            (
                torus_element(lambda.clone()).prop_filter("nonzero", |e| !e.is_zero()),
                torus_element(lambda),
            )
        }),
    ) {
        let r = y.mul(&q);
        prop_assert_eq!(r.left_divide_exact(&y).unwrap(), q);
    }

    #[test]
    fn torus_left_division_is_sound(
        (y, r) in skew_lambda(2).prop_flat_map(|lambda| {
            (
                torus_element(lambda.clone()).prop_filter("nonzero", |e| !e.is_zero()),
                torus_element(lambda),
            )
        }),
    ) {
        // Division either produces an exact quotient or a definite
        // failure; it never fabricates an inexact answer.
        if let Ok(quotient) = r.left_divide_exact(&y) {
            prop_assert_eq!(y.mul(&quotient), r);
        }
    }
}

proptest! {
    // The frame identity multiplies polynomially sized objects; fewer cases.
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn frame_normalization_identity(
        a in prop::collection::vec(0i64..=2, 2),
        b in prop::collection::vec(0i64..=2, 2),
        steps in prop::collection::vec(0usize..2, 0..3),
    ) {
        let matrix = ExchangeMatrix::new(vec![vec![0, 1], vec![-1, 0]]).unwrap();
        let lambda = PoissonMatrix::new(vec![vec![0, -1], vec![1, 0]]).unwrap();
        let mut seed = QuantumSeed::initial(matrix, lambda).unwrap();
        for k in steps {
            seed = seed.mutate(k).unwrap();
        }
        let a = Exponent::new(a);
        let b = Exponent::new(b);
        let lhs = seed
            .frame_monomial(&a)
            .unwrap()
            .mul(&seed.frame_monomial(&b).unwrap());
        let pairing = seed.frame_lambda().pairing(&a, &b);
        let rhs = seed
            .frame_monomial(&(&a + &b))
            .unwrap()
            .scaled(&VLaurent::v_power(pairing));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn quantum_commutator_linearizes_to_bracket(
        lambda in skew_lambda(2),
        fe in prop::collection::vec(-2i64..=2, 2),
        ge in prop::collection::vec(-2i64..=2, 2),
    ) {
        // First-order bracket compatibility on monomials: the v-derivative
        // of FG - GF at v = 1 is twice the classical bracket.
        let f = TorusElement::monomial(lambda.clone(), Exponent::new(fe), VLaurent::one());
        let g = TorusElement::monomial(lambda.clone(), Exponent::new(ge), VLaurent::one());
        let commutator = f.mul(&g).sub(&g.mul(&f));
        let derivative = commutator.v_derivative_at_one();
        let classical = bracket(
            &f.specialize_v_one(),
            &g.specialize_v_one(),
            &lambda,
        )
        .unwrap();
        prop_assert_eq!(derivative, classical.scaled(&BigRational::from_integer(BigInt::from(2))));
    }
}
