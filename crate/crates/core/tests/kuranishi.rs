use hodgelab::kuranishi::family::harmonic_closed_form_defect;
use hodgelab::kuranishi::series::bracket_sum;
use hodgelab::kuranishi::*;
use hodgelab::torus::form::{l2, omega0};
use hodgelab::torus::TorusGeometry;

fn geometry() -> TorusGeometry {
    TorusGeometry::new(2, 4, 2).unwrap()
}

#[test]
fn synthetic_series_through_order_four() {
    let g = geometry();
    let s = make_seed(SeedKind::DivergenceFreeSynthetic, &g, 42, 1.0, 1, 1).unwrap();
    let a = iterate_beltrami(&s, &g, 4).unwrap();
    assert_eq!(a.coeffs.len(), 4);
    assert_eq!(&a.coeffs[&MultiIndex(vec![1])], &s.fields[0]);
    let rep = integrability_residual(&a).unwrap();
    assert!(rep.max_judged() <= 1e-9, "{rep:?}");
    let formal = rep.rows.last().unwrap();
    assert!(!formal.judged && formal.residual > 0.0);
    assert!(rep.next_order_closedness <= 1e-9);
    for r in side_conditions_check(&a).unwrap().iter().filter(|r| r.order >= 2) {
        assert!(r.dbar_star <= 1e-9 && r.del_exact_defect <= 1e-9 && r.harmonic <= 1e-10, "{r:?}");
    }
    let b = iterate_bracket(&s, &g, 4).unwrap();
    assert!(two_path_agreement(&a, &b).unwrap().iter().all(|r| r.difference <= 1e-9));
    // the order-2 coefficient is ½∂̄*G[φ₁,φ₁]
    let half_bracket = bracket_sum(&a, &MultiIndex(vec![2])).unwrap();
    let direct = hodgelab::torus::hodge::dbar_star(&hodgelab::torus::hodge::green(&half_bracket));
    assert!(l2(&direct.sub(&a.coeffs[&MultiIndex(vec![2])]).unwrap()) < 1e-12);
}

#[test]
fn two_parameter_series_is_integrable() {
    let g = geometry();
    let s = make_seed(SeedKind::DivergenceFreeSynthetic, &g, 8, 0.5, 2, 1).unwrap();
    let a = iterate_beltrami(&s, &g, 3).unwrap();
    assert_eq!(a.coeffs.len(), 2 + 3 + 4);
    assert!(integrability_residual(&a).unwrap().max_judged() <= 1e-9);
    let fam = canonical_family(&a).unwrap();
    assert!(fam.residuals.iter().all(|r| r.residual <= 1e-9));
    let coh = cohomology_expansion(&fam, &a).unwrap();
    assert!(coh.iter().all(|r| r.residual <= 1e-10));
}

#[test]
fn harmonic_seed_family_is_the_exponential() {
    let g = geometry();
    let s = make_seed(SeedKind::HarmonicConstant, &g, 0, 0.7, 1, 1).unwrap();
    let a = iterate_beltrami(&s, &g, 5).unwrap();
    let fam = canonical_family(&a).unwrap();
    assert!(harmonic_closed_form_defect(&fam, &a).unwrap() <= 1e-12);
    let k = kahler_family(&a, &omega0(2)).unwrap();
    assert!(k.coeffs.iter().filter(|(i, _)| i.degree() > 0).all(|(_, f)| f.is_empty()));
    // radius scan is exactly ‖φ₁⌟Ω₀‖|t|
    let rows = radius_scan(&a, &[0.3], 1.0).unwrap();
    let first = rows[0].partial_sums[0];
    assert!(rows[0].partial_sums.iter().all(|v| (v - first).abs() < 1e-15));
}

#[test]
fn kahler_cascade_from_shear_seed() {
    let g = geometry();
    let s = make_seed(SeedKind::Shear, &g, 5, 0.5, 1, 1).unwrap();
    let a = iterate_bracket(&s, &g, 4).unwrap();
    let k = kahler_family(&a, &omega0(2)).unwrap();
    for r in &k.rows {
        assert!(r.del_exact_defect <= 1e-9 && r.dbar_star_exact_defect <= 1e-9 && r.holomorphicity <= 1e-9);
    }
    assert!(k.growth.iter().all(|g| g.pass));
    assert!(k.rows.iter().any(|r| r.order >= 2 && r.c0 > 1e-6));
}

#[test]
fn calibration_feeds_domination() {
    let g = TorusGeometry::new(2, 5, 2).unwrap();
    let cal = calibrate_constants(&g, 60, 1).unwrap();
    let s = make_seed(SeedKind::DivergenceFreeSynthetic, &g, 3, 1.0 / (4.0 * cal.c1hat), 1, 1).unwrap();
    let a = iterate_beltrami(&s, &g, 5).unwrap();
    let dom = domination_report(&a, cal.c1hat).unwrap();
    assert!((dom[0].norm - dom[0].majorant).abs() <= 1e-12 * dom[0].norm);
    assert!(dom.iter().all(|r| r.pass), "{dom:?}");
    let hold = holdout_check(&cal, &g, 20, 2).unwrap();
    assert_eq!(hold.samples, 20);
}
