mod common;

use num_bigint::BigInt;
use proptest::prelude::*;

use sbp_quad::endcorrect::{solve_rule, verify_conditions};
use sbp_quad::exact::int;
use sbp_quad::report::{read_json, write_json};
use sbp_quad::stencil::sum_of_powers;
use sbp_quad::study::{ConvergenceRecord, StudyResult};
use sbp_quad::tensor::{apply_deta, apply_dxi, divergence_integral, GridFunction2D};
use sbp_quad::{build_operator, OperatorFamily, Rational, SbpOperator1D, UniformGrid1D};

fn diagonal_family() -> impl Strategy<Value = OperatorFamily> {
    prop::sample::select(OperatorFamily::DIAGONAL.to_vec())
}

fn op(family: OperatorFamily, n: usize) -> SbpOperator1D {
    build_operator(family, UniformGrid1D::unit(n).unwrap()).unwrap()
}

fn inner(w: &[f64], a: &[f64], b: &[f64]) -> f64 {
    w.iter().zip(a).zip(b).map(|((w, a), b)| w * a * b).sum()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Admissible `(family, n)` with `n` nodes at least twice the closure width.
fn family_and_n(max: usize) -> impl Strategy<Value = (OperatorFamily, usize)> {
    diagonal_family().prop_flat_map(move |f| (Just(f), (2 * f.r() - 1)..=max))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn summation_by_parts((family, n) in family_and_n(60), seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let op = op(family, n);
        let u: Vec<f64> = (0..=n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let z: Vec<f64> = (0..=n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut du = vec![0.0; n + 1];
        let mut dz = vec![0.0; n + 1];
        op.apply_d_into(&u, &mut du).unwrap();
        op.apply_d_into(&z, &mut dz).unwrap();
        let w = op.quadrature_weights();
        let lhs = inner(w, &u, &dz) + inner(w, &du, &z);
        let rhs = u[n] * z[n] - u[0] * z[0];
        prop_assert!((lhs - rhs).abs() <= 1e-13 * norm(&u) * norm(&z) * n as f64);
    }

    #[test]
    fn divergence_identity_for_random_fields((family, n) in family_and_n(40), seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let op = op(family, n);
        let mut field = || {
            let v = (0..(n + 1) * (n + 1)).map(|_| rng.gen_range(-10.0..10.0)).collect();
            GridFunction2D::new(n, v).unwrap()
        };
        let (fhat, ghat) = (field(), field());
        let forms = divergence_integral(&op, &fhat, &ghat).unwrap();
        prop_assert!(forms.discrepancy() < 1e-12 * (fhat.max_abs() + ghat.max_abs()));
    }

    #[test]
    fn kronecker_application_matches_dense(family in diagonal_family(), seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = 8.max(2 * family.r() - 1);
        let op = op(family, n);
        let d = common::dense_d(&op);
        let eye = common::identity(n + 1);
        let values: Vec<f64> = (0..(n + 1) * (n + 1)).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let u = GridFunction2D::new(n, values.clone()).unwrap();
        let xi = common::matvec(&common::kron(&eye, &d), &values);
        let eta = common::matvec(&common::kron(&d, &eye), &values);
        prop_assert!(common::max_abs_diff(&xi, apply_dxi(&op, &u).unwrap().values()) < 1e-13);
        prop_assert!(common::max_abs_diff(&eta, apply_deta(&op, &u).unwrap().values()) < 1e-13);
    }

    #[test]
    fn sum_of_powers_matches_brute_force(r in 1usize..30, j in 1usize..20) {
        let direct: BigInt = (1..=r).map(|m| BigInt::from(m).pow(j as u32 - 1)).sum::<BigInt>() * j;
        prop_assert_eq!(sum_of_powers(r, j).unwrap(), Rational::from_integer(direct));
    }

    #[test]
    fn synthesized_rules_satisfy_their_conditions(r in 1usize..9, extra in 0usize..8) {
        let q = 2 + extra % r;
        let rule = solve_rule(r, q, &[]).unwrap();
        prop_assert!(verify_conditions(rule.sigma(), r, q).unwrap().passed());
        prop_assert_eq!(rule.sigma().len(), r);
    }

    #[test]
    fn synthesized_rules_integrate_polynomials(r in 1usize..7, extra in 0usize..6, grow in 0usize..20) {
        let q = 2 + extra % r;
        let rule = solve_rule(r, q, &[]).unwrap().to_quadrature();
        let grid = UniformGrid1D::unit(2 * r + grow).unwrap();
        for k in 0..=exact_degree(q) {
            let got = rule.integrate(&grid, |x| x.powi(k as i32)).unwrap();
            prop_assert!((got - 1.0 / (k + 1) as f64).abs() < 1e-12, "degree {} gave {}", k, got);
        }
    }

    #[test]
    fn json_report_round_trips(errors in prop::collection::vec(-1e3f64..1e3, 1..6)) {
        let records: Vec<ConvergenceRecord> = errors
            .iter()
            .enumerate()
            .map(|(i, &e)| ConvergenceRecord { n: 16 << i, error: e, rate: (i > 0).then_some(e / 7.0) })
            .collect();
        let result = StudyResult {
            study: "quad1d".into(),
            family: "diag-2-4".into(),
            records: records.clone(),
            identity_residuals: Vec::new(),
        };
        let mut buf = Vec::new();
        write_json(&[result], &mut buf).unwrap();
        let back = read_json(std::str::from_utf8(&buf).unwrap()).unwrap();
        prop_assert_eq!(back.len(), records.len());
        for (row, rec) in back.iter().zip(&records) {
            prop_assert_eq!(row.error, rec.error);
            prop_assert_eq!(row.rate, rec.rate);
        }
    }
}

#[test]
fn inner_product_exactness_on_two_grids() {
    for family in OperatorFamily::DIAGONAL {
        for n in [16, 32] {
            let op = op(family, n);
            let x = op.grid().nodes();
            let w = op.quadrature_weights();
            let two_s = 2 * family.s();
            for j in 1..=two_s {
                let xj: Vec<f64> = x.iter().map(|v| v.powi(j as i32)).collect();
                let mut dxj = vec![0.0; n + 1];
                op.apply_d_into(&xj, &mut dxj).unwrap();
                for i in 0..=two_s - j {
                    let xi: Vec<f64> = x.iter().map(|v| v.powi(i as i32)).collect();
                    let exact = j as f64 / (i + j) as f64;
                    let got = inner(w, &xi, &dxj);
                    assert!(
                        ((got - exact) / exact).abs() < 1e-12,
                        "{family} n={n} i={i} j={j}"
                    );
                }
            }
        }
    }
}

/// Highest monomial degree a `q`-order rule integrates exactly; symmetry
/// gives the extra odd degree when `q` is even.
fn exact_degree(q: usize) -> usize {
    2 * (q / 2) - 1
}

#[test]
fn square_rules_are_sharp() {
    for q in 2..=7 {
        let r = q - 1;
        let rule = solve_rule(r, q, &[]).unwrap().to_quadrature();
        let grid = UniformGrid1D::unit(4 * r).unwrap();
        let exact = |k: usize| 1.0 / (k + 1) as f64;
        let err =
            |k: usize| (rule.integrate(&grid, |x| x.powi(k as i32)).unwrap() - exact(k)).abs();
        let d = exact_degree(q);
        assert!(err(d) < 1e-13, "q = {q}");
        assert!(err(d + 1) > 1e-10, "q = {q}");
    }
}

#[test]
fn pinned_endpoint_weight_is_respected() {
    let rule = solve_rule(4, 4, &[(0, int(0))]).unwrap();
    assert_eq!(rule.sigma()[0], int(0));
    assert!(verify_conditions(rule.sigma(), 4, 4).unwrap().passed());
}
