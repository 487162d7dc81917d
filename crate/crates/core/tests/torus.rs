use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hodgelab::exterior::{Form, ValueKind};
use hodgelab::torus::form::{self, constant_form, l2, monomial_form, omega0, truncate};
use hodgelab::torus::hodge::{self, dbar, dbar_inverse, del, green, harmonic, quasi_isometry_report};
use hodgelab::torus::random::random_form;
use hodgelab::torus::{Mode, TorusGeometry};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn del_of_character_uses_mu_symbol() {
    let m = Mode::new(&[0, 1], &[2, 0]);
    let f = monomial_form(2, ValueKind::Scalar, &[], &[], 0, m, c(1.0, 0.0));
    let expect = monomial_form(2, ValueKind::Scalar, &[0], &[], 0, m, m.mu(0))
        .add(&monomial_form(2, ValueKind::Scalar, &[1], &[], 0, m, m.mu(1)))
        .unwrap();
    assert!(l2(&del(&f).sub(&expect).unwrap()) < 1e-14);
}

#[test]
fn wedge_truncation_records_lost_mass() {
    let g = TorusGeometry::new(1, 2, 2).unwrap();
    let a = monomial_form(1, ValueKind::Scalar, &[], &[], 0, Mode::new(&[2], &[0]), c(1.0, 0.0));
    let (w, r) = form::wedge(&g, &a, &a).unwrap();
    assert!(w.is_empty());
    assert!((r.discarded_mass - 1.0).abs() < 1e-15);
    let (kept, r) = truncate(&a, 2);
    assert_eq!(kept, a);
    assert_eq!(r.discarded_mass, 0.0);
}

#[test]
fn two_tangent_factors_cannot_be_wedged() {
    let g = TorusGeometry::new(2, 2, 2).unwrap();
    let t = constant_form(2, ValueKind::Tangent, &[], &[0], 0, c(1.0, 0.0));
    assert!(form::wedge(&g, &t, &t).is_err());
}

#[test]
fn contraction_into_functions_warns() {
    let g = TorusGeometry::new(2, 2, 2).unwrap();
    let t = constant_form(2, ValueKind::Tangent, &[], &[0], 0, c(1.0, 0.0));
    let f = constant_form(2, ValueKind::Scalar, &[], &[1], 0, c(1.0, 0.0));
    let (out, r) = form::contract(&g, &t, &f).unwrap();
    assert!(out.is_empty());
    assert_eq!(r.warnings.len(), 1);
}

#[test]
fn dual_contraction_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 1..=4 {
        for q in 0..=n.min(2) {
            let a = random_form(&mut rng, n, 1, 0, q, ValueKind::Tangent);
            let back = Form::from_top(&Form::to_top(&a).unwrap()).unwrap();
            assert!(l2(&back.sub(&a).unwrap()) < 1e-14, "n={n} q={q}");
        }
    }
}

#[test]
fn exp_contraction_of_constant_field() {
    let g = TorusGeometry::new(2, 2, 2).unwrap();
    let phi = constant_form(2, ValueKind::Tangent, &[], &[0], 0, c(0.5, 0.0));
    let (e, _) = form::exp_contract(&g, &phi, &omega0(2)).unwrap();
    // e^{i_φ}(dz¹∧dz²) = dz¹∧dz² + ½ dz̄¹∧dz²
    let expect = omega0(2).add(&constant_form(2, ValueKind::Scalar, &[1], &[0], 0, c(0.5, 0.0))).unwrap();
    let diff = e.sub(&expect).unwrap();
    let flipped = e.sub(&omega0(2).sub(&constant_form(2, ValueKind::Scalar, &[1], &[0], 0, c(0.5, 0.0))).unwrap()).unwrap();
    assert!(l2(&diff).min(l2(&flipped)) < 1e-15);
    assert_eq!(e.part(1, 1).len(), 1);
}

#[test]
fn quasi_isometry_on_top_degree_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for q in 0..=2 {
        let g = random_form(&mut rng, 2, 3, 2, q, ValueKind::Scalar);
        let r = quasi_isometry_report(&g).unwrap();
        assert!(r.estimate_slack() >= -1e-10 * r.norm_sq);
        assert!(r.identity_residual < 1e-12);
    }
}

#[test]
fn dbar_inverse_solves_constraint_projected_input() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let raw = random_form(&mut rng, 2, 3, 1, 1, ValueKind::Scalar);
    let g = hodge::project_dbar_del_closed(&raw).unwrap();
    let (s, d) = dbar_inverse(&g).unwrap();
    let scale = l2(&del(&g));
    assert!(d.residual < 1e-12 * scale);
    assert!(d.solution_norm_sq <= d.bound * (1.0 + 1e-12));
    assert!(l2(&harmonic(&s)) == 0.0);
    assert!(d.constraint_norm < 1e-12 * scale);
}

#[test]
fn green_inverts_laplacian_off_harmonics() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let f = random_form(&mut rng, 2, 2, 1, 1, ValueKind::Scalar);
    let back = hodge::laplacian(&green(&f)).add(&harmonic(&f)).unwrap();
    assert!(l2(&back.sub(&f).unwrap()) < 1e-12 * l2(&f));
    assert!(harmonic(&green(&f)).is_empty());
    assert!(dbar(&harmonic(&f)).is_empty());
}

#[test]
fn json_layout_round_trip_and_rejections() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let f = random_form(&mut rng, 2, 1, 0, 1, ValueKind::Tangent);
    let text = form::to_json_string(&f);
    assert_eq!(form::from_json_str(&text).unwrap(), f);
    let v = form::to_json(&f);
    assert_eq!(v["n"], 2);
    assert_eq!(v["bidegree"], serde_json::json!([0, 1]));
    assert!(v["entries"][0]["tangent"].as_u64().unwrap() >= 1);
    let bad = r#"{"n":2,"bidegree":[0,1],"valueKind":"scalar","entries":[{"I":[],"J":[3],"mode":[[0,0],[0,0]],"re":1,"im":0}]}"#;
    assert!(form::from_json_str(bad).is_err());
}
