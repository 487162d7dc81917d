//! Acceptance criteria 1–11, one verdict line each. Run with
//! `cargo test -p hodgelab --test acceptance -- --nocapture`.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;

use hodgelab::experiment::{run_experiment, ExperimentConfig, ExperimentReport};
use hodgelab::kuranishi::family::harmonic_closed_form_defect;
use hodgelab::kuranishi::*;
use hodgelab::majorant::{majorant_coefficients, radius};
use hodgelab::torus::form::omega0;
use hodgelab::torus::TorusGeometry;

struct Verdict {
    id: usize,
    title: &'static str,
    pass: bool,
    detail: String,
}

fn run(json: &str) -> (ExperimentReport, Duration) {
    let cfg = ExperimentConfig::from_json(json).expect("config");
    let o = run_experiment(&cfg).expect("experiment");
    (o.report, o.elapsed)
}

fn failing(r: &ExperimentReport) -> Vec<String> {
    r.checks.iter().filter(|c| !c.pass).map(|c| c.verdict_line()).collect()
}

fn worst(r: &ExperimentReport) -> String {
    r.checks
        .iter()
        .map(|c| format!("{}={:.1e}", c.name.rsplit('/').next().unwrap_or(&c.name), c.residual))
        .collect::<Vec<_>>()
        .join(" ")
}

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn criterion_1() -> Verdict {
    let (r, t) = run(r#"{"geometry":{"n":2,"K":6,"oversample":2},"experiment":"operator-axioms","instances":100,"rngSeed":1}"#);
    let fails = failing(&r);
    Verdict {
        id: 1,
        title: "operator axioms",
        pass: r.pass && t < Duration::from_secs(10),
        detail: format!("{} in {:.1}s {fails:?}", worst(&r), t.as_secs_f64()),
    }
}

fn criterion_2() -> Verdict {
    let (r, t) = run(r#"{"geometry":{"n":2,"K":6,"oversample":2},"experiment":"quasi-isometry","instances":100,"rngSeed":1}"#);
    let iso = r.data["isometryInstances"].as_u64().unwrap_or(0);
    Verdict {
        id: 2,
        title: "quasi-isometry",
        pass: r.pass && iso > 0,
        detail: format!("{} isometry-cases={iso} in {:.1}s {:?}", worst(&r), t.as_secs_f64(), failing(&r)),
    }
}

fn criterion_3() -> Verdict {
    let (r, t) = run(r#"{"geometry":{"n":2,"K":6,"oversample":2},"experiment":"dbar-inverse","instances":100,"rngSeed":1}"#);
    let used = r.data["instances"].as_u64().unwrap_or(0);
    Verdict {
        id: 3,
        title: "dbar-inverse",
        pass: r.pass && used > 0,
        detail: format!("{} instances={used} in {:.1}s {:?}", worst(&r), t.as_secs_f64(), failing(&r)),
    }
}

fn criterion_4() -> Verdict {
    let mut pass = true;
    let mut total = Duration::ZERO;
    let mut tags = 0;
    let mut fails = Vec::new();
    for n in [2, 3] {
        let (r, t) = run(&format!(
            r#"{{"geometry":{{"n":{n},"K":2,"oversample":2}},"experiment":"verify-identities","instances":50,"rngSeed":1000}}"#
        ));
        pass &= r.pass;
        total += t;
        tags += r.checks.len();
        fails.extend(failing(&r));
    }
    Verdict {
        id: 4,
        title: "identity suite",
        pass: pass && total < Duration::from_secs(60),
        detail: format!("{tags} tag runs x 50 instances in {:.1}s {fails:?}", total.as_secs_f64()),
    }
}

fn criterion_5() -> Verdict {
    let one = ratio(1, 1);
    let s = majorant_coefficients(&one, &one, 50).unwrap();
    let catalan: Vec<BigRational> = (0..50u32)
        .scan(BigInt::from(1), |c, k| {
            let cur = c.clone();
            *c = &*c * BigInt::from(2 * (2 * k + 1)) / BigInt::from(k + 2);
            Some(BigRational::from_integer(cur))
        })
        .collect();
    let is_catalan = s.coeffs() == catalan.as_slice();
    let closed = s.closed_form_mismatch().is_none();
    let formal = s.formal_identity_mismatch().is_none();
    let r_quarter = radius(&one, &one) == Some(ratio(1, 4));
    let c = ratio(3, 7);
    let x1 = (ratio(4, 1) * &c).recip();
    let r_unit = radius(&c, &x1) == Some(one.clone());
    let scaled = majorant_coefficients(&c, &x1, 50).unwrap();
    let scaled_ok = scaled.closed_form_mismatch().is_none() && scaled.formal_identity_mismatch().is_none();
    Verdict {
        id: 5,
        title: "majorant",
        pass: is_catalan && closed && formal && r_quarter && r_unit && scaled_ok,
        detail: format!(
            "catalan={is_catalan} closed-form={closed} cS²=S−x₁τ={formal} radius(1,1)=1/4:{r_quarter} radius(c,1/4c)=1:{r_unit} c=3/7:{scaled_ok}"
        ),
    }
}

struct Synthetic {
    series: BeltramiSeries,
    family: CanonicalFamily,
}

fn criterion_6() -> (Verdict, Synthetic) {
    let t = Instant::now();
    let g = TorusGeometry::new(2, 6, 2).unwrap();
    let seed = make_seed(SeedKind::DivergenceFreeSynthetic, &g, 42, 1.0, 1, 1).unwrap();
    let a = iterate_beltrami(&seed, &g, 6).unwrap();
    let b = iterate_bracket(&seed, &g, 6).unwrap();
    let integ = integrability_residual(&a).unwrap();
    let side = side_conditions_check(&a).unwrap();
    let side_max = side
        .iter()
        .filter(|r| r.order >= 2)
        .map(|r| r.dbar_star.max(r.del_exact_defect).max(r.harmonic))
        .fold(0.0f64, f64::max);
    let agree = two_path_agreement(&a, &b).unwrap().iter().map(|r| r.difference).fold(0.0f64, f64::max);
    let family = canonical_family(&a).unwrap();
    let elapsed = t.elapsed();
    let imax = integ.max_judged().max(integ.next_order_closedness);
    let v = Verdict {
        id: 6,
        title: "kuranishi iteration",
        pass: imax <= 1e-9 && side_max <= 1e-9 && agree <= 1e-9 && elapsed < Duration::from_secs(120),
        detail: format!(
            "integrability={imax:.1e} side(k>=2)={side_max:.1e} two-path={agree:.1e} in {:.1}s",
            elapsed.as_secs_f64()
        ),
    };
    (v, Synthetic { series: a, family })
}

fn criterion_7() -> Verdict {
    let t = Instant::now();
    let g = TorusGeometry::new(2, 8, 2).unwrap();
    let cal = calibrate_constants(&g, 1000, 7).unwrap();
    let target = 1.0 / (4.0 * cal.c1hat);
    let seed = make_seed(SeedKind::DivergenceFreeSynthetic, &g, 42, target, 1, 1).unwrap();
    let a = iterate_beltrami(&seed, &g, 8).unwrap();
    let rows = domination_report(&a, cal.c1hat).unwrap();
    let margin = rows.iter().map(|r| r.norm / r.majorant).fold(0.0f64, f64::max);
    Verdict {
        id: 7,
        title: "domination",
        pass: rows.len() == 8 && rows.iter().all(|r| r.pass),
        detail: format!(
            "C1hat={:.4} max ‖φ_k‖/x_k={margin:.3} over k<=8 in {:.1}s",
            cal.c1hat,
            t.elapsed().as_secs_f64()
        ),
    }
}

fn criterion_8(syn: &Synthetic) -> Verdict {
    let res = syn.family.residuals.iter().map(|r| r.residual).fold(0.0f64, f64::max);
    let g = TorusGeometry::new(2, 6, 2).unwrap();
    let seed = make_seed(SeedKind::HarmonicConstant, &g, 3, 0.8, 2, 1).unwrap();
    let h = iterate_beltrami(&seed, &g, 6).unwrap();
    let closed = harmonic_closed_form_defect(&canonical_family(&h).unwrap(), &h).unwrap();
    Verdict {
        id: 8,
        title: "canonical family",
        pass: res <= 1e-9 && closed <= 1e-12 && syn.family.residuals.len() == 7,
        detail: format!("residual={res:.1e} through order {} harmonic-closed-form={closed:.1e}", syn.family.order),
    }
}

fn criterion_9() -> Verdict {
    let g = TorusGeometry::new(2, 6, 2).unwrap();
    let seed = make_seed(SeedKind::Shear, &g, 5, 0.5, 1, 1).unwrap();
    let a = iterate_bracket(&seed, &g, 6).unwrap();
    let k = kahler_family(&a, &omega0(2)).unwrap();
    let fold = |f: fn(&hodgelab::kuranishi::family::KahlerRow) -> f64| k.rows.iter().map(f).fold(0.0f64, f64::max);
    let del = fold(|r| r.del_exact_defect);
    let dstar = fold(|r| r.dbar_star_exact_defect);
    let holt = fold(|r| r.holomorphicity);
    let growth = k.growth.iter().all(|r| r.pass);
    let nontrivial = k.rows.iter().any(|r| r.c0 > 1e-6);
    Verdict {
        id: 9,
        title: "kahler cascade",
        pass: del <= 1e-9 && dstar <= 1e-9 && holt <= 1e-9 && growth && nontrivial,
        detail: format!("del-exact={del:.1e} dbar-star-exact={dstar:.1e} holt={holt:.1e} growth={growth} nonzero={nontrivial}"),
    }
}

fn criterion_10(syn: &Synthetic) -> Verdict {
    let rows = cohomology_expansion(&syn.family, &syn.series).unwrap();
    let first = rows.iter().filter(|r| r.order == 1).map(|r| r.residual).fold(0.0f64, f64::max);
    let higher = rows.iter().filter(|r| r.order >= 2).map(|r| r.residual).fold(0.0f64, f64::max);
    Verdict {
        id: 10,
        title: "cohomology expansion",
        pass: first <= 1e-10 && higher <= 1e-9,
        detail: format!("order-1={first:.1e} higher={higher:.1e}"),
    }
}

fn criterion_11() -> Verdict {
    let cfg = r#"{"geometry":{"n":2,"K":4,"oversample":2},"experiment":"kuranishi",
        "seed":{"kind":"divergence-free-synthetic","rngSeed":9,"targetC1Norm":"auto"},
        "order":4,"calibrationSamples":40}"#;
    let strip = |r: ExperimentReport| {
        let mut v = serde_json::to_value(&r).unwrap();
        v.as_object_mut().unwrap().remove("timestamp");
        serde_json::to_string(&v).unwrap()
    };
    let a = strip(run(cfg).0);
    let b = strip(run(cfg).0);
    Verdict {
        id: 11,
        title: "determinism",
        pass: a == b,
        detail: format!("report bytes={} identical={}", a.len(), a == b),
    }
}

#[test]
fn acceptance() {
    let mut all = vec![criterion_1(), criterion_2(), criterion_3(), criterion_4(), criterion_5()];
    let (v6, syn) = criterion_6();
    all.push(v6);
    all.push(criterion_7());
    all.push(criterion_8(&syn));
    all.push(criterion_9());
    all.push(criterion_10(&syn));
    all.push(criterion_11());
    for v in &all {
        println!("{} criterion {:>2} {:<22} {}", if v.pass { "PASS" } else { "FAIL" }, v.id, v.title, v.detail);
    }
    let failed: Vec<usize> = all.iter().filter(|v| !v.pass).map(|v| v.id).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
