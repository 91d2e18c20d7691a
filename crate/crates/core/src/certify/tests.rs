use super::*;
use crate::polyring::{BlockStructure, Variables};
use proptest::prelude::*;

fn zz(vars: &Variables, terms: &[(i64, &[u32])]) -> Polynomial<Integers> {
    Polynomial::from_terms(
        Integers,
        vars.clone(),
        terms.iter().map(|(c, e)| (BigInt::from(*c), e.to_vec())),
    )
    .unwrap()
}

/// Minimise x² + y² on the hyperbola x² − y² = 1.
fn hyperbola() -> IntervalSystem {
    let b = BlockStructure::new(vec![2]).unwrap();
    let v = b.affine_variables().clone();
    let f0 = zz(&v, &[(1, &[2, 0]), (1, &[0, 2])]);
    let f1 = zz(&v, &[(-1, &[2, 0]), (1, &[0, 2]), (1, &[0, 0])]);
    IntervalSystem::lagrangian(&ProblemInstance::new(b, f0, vec![f1]).unwrap()).unwrap()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn solutions() -> Vec<Vec<Complex64>> {
    vec![
        vec![c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
        vec![c(-1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
        vec![c(0.0, 0.0), c(0.0, 1.0), c(1.0, 0.0)],
        vec![c(0.0, 0.0), c(0.0, -1.0), c(1.0, 0.0)],
    ]
}

#[test]
fn desk_examples() {
    let sys = hyperbola();
    let real = krawczyk_test(&sys, &solutions()[0], 1e-3).unwrap();
    assert!(real.certified_unique && real.certified_real);
    assert!(real.objective_enclosure.contains(1.0));
    assert!(reality_test(&real, &sys).unwrap());

    let complex = krawczyk_test(&sys, &solutions()[2], 1e-3).unwrap();
    assert!(complex.certified_unique && !complex.certified_real);
    assert!(!reality_test(&complex, &sys).unwrap());

    let far = krawczyk_test(&sys, &[c(10.0, 0.0), c(10.0, 0.0), c(10.0, 0.0)], 1e-3).unwrap();
    assert!(!far.certified_unique && !far.certified_real);
    assert!(!reality_test(&far, &sys).unwrap());
}

#[test]
fn argument_errors() {
    let sys = hyperbola();
    assert_eq!(
        krawczyk_test(&sys, &[c(1.0, 0.0)], 1e-3),
        Err(CertifyError::DimensionMismatch { expected: 3, got: 1 })
    );
    assert_eq!(
        krawczyk_test(&sys, &solutions()[0], 0.0),
        Err(CertifyError::BadRadius(0.0))
    );
    assert!(certify_batch(&sys, &[vec![c(0.0, 0.0)]], 1e-3, &[]).is_err());
}

#[test]
fn singular_midpoint_is_inconclusive() {
    // the Jacobian vanishes at the origin
    let sys = hyperbola();
    let cert = krawczyk_test(&sys, &[c(0.0, 0.0); 3], 1e-3).unwrap();
    assert!(!cert.certified_unique);
}

#[test]
fn non_real_coefficients() {
    let sys = IntervalSystem::new(
        vec![IntervalPoly::from_complex(vec![(c(1.0, 0.0), vec![1]), (c(0.0, -1.0), vec![0])])],
        IntervalPoly::from_complex(vec![(c(1.0, 0.0), vec![1])]),
    )
    .unwrap();
    let cert = CertificateBox {
        region: ComplexBox::around(&[c(0.0, 1.0)], 1e-3),
        refined: ComplexBox::around(&[c(0.0, 1.0)], 1e-3),
        certified_unique: true,
        certified_real: false,
        approximate_point: vec![c(0.0, 1.0)],
        objective_enclosure: Interval::ENTIRE,
    };
    assert_eq!(reality_test(&cert, &sys), Err(CertifyError::NonRealCoefficients));
    // certification itself still works: the zero of x - i
    let k = krawczyk_test(&sys, &[c(0.0, 1.0)], 1e-3).unwrap();
    assert!(k.certified_unique && !k.certified_real);
}

#[test]
fn batch_counts_and_minimum() {
    let sys = hyperbola();
    let report = certify_batch(&sys, &solutions(), DEFAULT_RADIUS, &RETRY_RADII).unwrap();
    assert_eq!(report.distinct_certified, 4);
    assert_eq!(report.real_certified, 2);
    assert!(report.warnings.is_empty());
    let min = certified_minimum(&report).unwrap();
    assert!(min.min_value.contains(1.0));
    assert_eq!(min.index, 0);

    let mut twice = solutions();
    twice.push(solutions()[1].clone());
    let report = certify_batch(&sys, &twice, DEFAULT_RADIUS, &[]).unwrap();
    assert_eq!(report.distinct_certified, 4);
    assert_eq!(report.outcomes[4].duplicate_of, Some(1));
    assert_eq!(report.warnings.len(), 1);

    let only_complex = certify_batch(&sys, &solutions()[2..], DEFAULT_RADIUS, &[]).unwrap();
    assert_eq!(certified_minimum(&only_complex), Err(CertifyError::NoRealPoint));

    let single = certify_batch(&sys, &solutions()[1..2], DEFAULT_RADIUS, &[]).unwrap();
    assert_eq!(certified_minimum(&single).unwrap().index, 0);
}

#[test]
fn retry_with_larger_radius() {
    // perturbation larger than the first radius but well inside the second
    let sys = hyperbola();
    let p = vec![c(1.0 + 3e-4, 2e-4), c(-1e-4, 0.0), c(-1.0, 1e-4)];
    assert!(!krawczyk_test(&sys, &p, 1e-4).unwrap().certified_unique);
    let report = certify_batch(&sys, &[p], 1e-4, &[1e-2]).unwrap();
    assert_eq!(report.distinct_certified, 1);
    assert_eq!(report.outcomes[0].radius, 1e-2);
    assert!(report.outcomes[0].certificate.certified_real);
}

#[test]
fn refinement_monotone() {
    let sys = hyperbola();
    for s in solutions() {
        let mut r = 1e-2;
        while r > 1e-8 {
            assert!(krawczyk_test(&sys, &s, r).unwrap().certified_unique, "{s:?} at {r}");
            r /= 2.0;
        }
    }
}

fn point_strategy() -> impl Strategy<Value = (Vec<Complex64>, f64)> {
    (
        prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 3),
        prop_oneof![Just(1e-4), Just(1e-3), Just(1e-2), Just(0.1)],
    )
        .prop_map(|(v, r)| (v.into_iter().map(|(a, b)| c(a, b)).collect(), r))
}

proptest! {
    #[test]
    fn soundness_on_random_points((p, r) in point_strategy()) {
        let sys = hyperbola();
        let cert = krawczyk_test(&sys, &p, r).unwrap();
        let residual_excludes_zero = sys
            .evaluate(&cert.region)
            .iter()
            .any(|z| !z.contains_zero());
        if residual_excludes_zero {
            prop_assert!(!cert.certified_unique);
        }
        if cert.certified_unique {
            prop_assert!(solutions().iter().any(|s| cert.refined.contains(s)));
        }
        prop_assert!(!cert.certified_real || cert.certified_unique);
    }

    #[test]
    fn perturbed_solutions_certify_soundly(
        which in 0usize..4,
        noise in prop::collection::vec((-1e-5f64..1e-5, -1e-5f64..1e-5), 3),
    ) {
        let sys = hyperbola();
        let exact = &solutions()[which];
        let p: Vec<Complex64> = exact.iter().zip(&noise).map(|(z, (a, b))| z + c(*a, *b)).collect();
        let cert = krawczyk_test(&sys, &p, DEFAULT_RADIUS).unwrap();
        prop_assert!(cert.certified_unique);
        prop_assert_eq!(cert.certified_real, which < 2);
        prop_assert!(cert.region.contains(exact) && cert.refined.contains(exact));
        for z in sys.evaluate(&cert.region).iter().chain(&sys.evaluate(&cert.refined)) {
            prop_assert!(z.contains_zero());
        }
        let f0 = p[0] * p[0] + p[1] * p[1];
        prop_assert!(cert.objective_enclosure.contains(f0.re));
    }
}
