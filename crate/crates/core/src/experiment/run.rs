//! Dispatch from a validated config to the numerical modules.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::config::{ExperimentConfig, ExperimentKind, SeedSpec};
use super::report::{write_atomic, CheckRecord, CsvTable, ExperimentReport};
use crate::calculus::identities::{verify_many, IdentityTag};
use crate::error::{Error, Result};
use crate::exterior::ValueKind;
use crate::kuranishi::family::harmonic_closed_form_defect;
use crate::kuranishi::{self, BeltramiSeries, CalibrationRecord, Construction};
use crate::majorant::{majorant_coefficients, rational_to_f64};
use crate::torus::axioms::{random_axiom_check, AxiomResiduals};
use crate::torus::form::{l2, omega0, FourierForm};
use crate::torus::hodge::{dbar_inverse, project_dbar_del_closed, project_del_star_exact, quasi_isometry_report};
use crate::torus::norms::c1_norm;
use crate::torus::random::random_form;
use crate::torus::TruncationReceipt;

/// Stream offsets so calibration and hold-out draws never reuse seed draws.
const CALIBRATION_STREAM: u64 = 0xca1b_0000_0000_0001;
const HOLDOUT_STREAM: u64 = 0x401d_0000_0000_0002;

pub struct Outcome {
    pub report: ExperimentReport,
    pub tables: Vec<CsvTable>,
    pub elapsed: Duration,
}

#[derive(Default)]
struct Parts {
    checks: Vec<CheckRecord>,
    receipts: Vec<TruncationReceipt>,
    data: serde_json::Map<String, serde_json::Value>,
    tables: Vec<CsvTable>,
}

impl Parts {
    fn put(&mut self, key: &str, v: impl serde::Serialize) {
        self.data.insert(key.into(), serde_json::to_value(v).expect("serializable"));
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Outcome> {
    cfg.validate()?;
    let start = Instant::now();
    let parts = match cfg.experiment {
        ExperimentKind::OperatorAxioms => operator_axioms(cfg)?,
        ExperimentKind::VerifyIdentities => verify_identities(cfg)?,
        ExperimentKind::QuasiIsometry => quasi_isometry(cfg)?,
        ExperimentKind::DbarInverse => dbar_inverse_experiment(cfg)?,
        ExperimentKind::Kuranishi => kuranishi_experiment(cfg)?,
        ExperimentKind::KahlerFamily => kahler_experiment(cfg)?,
        ExperimentKind::Majorant => majorant_experiment(cfg)?,
        ExperimentKind::Calibrate => calibrate_experiment(cfg)?,
    };
    let report = ExperimentReport::new(cfg.clone(), parts.checks, parts.receipts, serde_json::Value::Object(parts.data));
    Ok(Outcome {
        report,
        tables: parts.tables,
        elapsed: start.elapsed(),
    })
}

/// Creates `dir` and proves it writable before any work is done.
pub fn prepare_output_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Config(format!("cannot create {}: {e}", dir.display())))?;
    let probe = dir.join(format!(".hodgelab-probe-{}", std::process::id()));
    std::fs::write(&probe, b"").map_err(|e| Error::Config(format!("{} is not writable: {e}", dir.display())))?;
    let _ = std::fs::remove_file(&probe);
    Ok(())
}

/// Writes `report.json` and every CSV table into `dir`.
pub fn write_outputs(o: &Outcome, dir: &Path) -> Result<Vec<PathBuf>> {
    prepare_output_dir(dir)?;
    let mut out = Vec::new();
    for t in &o.tables {
        let p = dir.join(&t.file);
        write_atomic(&p, &t.body)?;
        out.push(p);
    }
    let p = dir.join("report.json");
    write_atomic(&p, &(o.report.to_json_pretty() + "\n"))?;
    out.push(p);
    Ok(out)
}

fn unit(f: FourierForm) -> Option<FourierForm> {
    let n = l2(&f);
    (n > 0.0).then(|| f.scale(&Complex64::new(1.0 / n, 0.0)))
}

/// Like [`unit`], but treats projections that cancel to rounding noise
/// relative to their source as zero.
fn unit_relative(f: FourierForm, source: &FourierForm) -> Option<FourierForm> {
    (l2(&f) > 1e-8 * l2(source)).then_some(f).and_then(unit)
}

fn operator_axioms(cfg: &ExperimentConfig) -> Result<Parts> {
    let g = &cfg.geometry;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut worst = AxiomResiduals::default();
    for _ in 0..cfg.instances {
        worst.merge_max(&random_axiom_check(&mut rng, g.n, g.k)?);
    }
    let tol = cfg.tolerance("operatorAxiom");
    let mut p = Parts::default();
    for (name, anchor, v) in [
        ("axiom/dbar-squared", "∂̄∂̄ = 0", worst.dbar_squared),
        ("axiom/del-squared", "∂∂ = 0", worst.del_squared),
        ("axiom/anticommutator", "∂∂̄ + ∂̄∂ = 0", worst.anticommutator),
        ("axiom/dbar-adjoint", "⟨∂̄a,b⟩ = ⟨a,∂̄*b⟩", worst.dbar_adjoint),
        ("axiom/del-adjoint", "⟨∂a,b⟩ = ⟨a,∂*b⟩", worst.del_adjoint),
        ("axiom/hodge", "f = Hf + □̄Gf", worst.hodge),
    ] {
        p.checks.push(CheckRecord::zero(name, anchor, v, tol));
    }
    p.put("instances", cfg.instances);
    p.put("maxRelativeResiduals", worst);
    Ok(p)
}

fn identity_anchor(tag: IdentityTag) -> &'static str {
    match tag {
        IdentityTag::Db2 => "i_φ i_ψ = (−1)^{(q+1)(s+1)} i_ψ i_φ",
        IdentityTag::LieContraction => "[L_φ', i_φ] = i_[φ',φ]",
        IdentityTag::F1 => "[φ,φ']⌟α expressed through ∇' and contractions",
        IdentityTag::F2 => "the ∂̄ analogue of the bracket expansion vanishes",
        IdentityTag::TT => "[φ,ψ]⌟Ω through ∂ and double contractions",
        IdentityTag::TTCY => "[φ,ψ]⌟Ω₀ = −∂(φ⌟ψ⌟Ω₀) for divergence-free fields",
        IdentityTag::F3 => "e^{−i_φ} ∂̄ e^{i_φ} = ∂̄ − L^{0,1}_φ",
        IdentityTag::F4 => "e^{−i_φ} ∇' e^{i_φ} = ∇' − L^{1,0}_φ − i_{½[φ,φ]}",
        IdentityTag::F35 => "conjugated ∂̄ − L_φ for integrable φ",
        IdentityTag::Fk(_) => "power commutator F_k = 0",
        IdentityTag::Rec1 => "conjugated connection on (n,•)-forms",
        IdentityTag::BracketClosed => "∂̄ of the next bracket sum vanishes along an integrable series",
        IdentityTag::Jacobi => "cyclic sum of double brackets vanishes",
    }
}

fn verify_identities(cfg: &ExperimentConfig) -> Result<Parts> {
    let n = cfg.geometry.n;
    let tol = cfg.tolerance("identityMonomials");
    let mut p = Parts::default();
    let mut rows = Vec::new();
    for tag in IdentityTag::all(n) {
        let vs = verify_many(tag, n, cfg.rng_seed, cfg.instances)?;
        let failures = vs.iter().filter(|v| !v.pass).count();
        let monomials: usize = vs.iter().map(|v| v.differing_monomials).sum();
        p.checks.push(CheckRecord::new(
            format!("identity/{}", tag.name()),
            identity_anchor(tag),
            failures as f64,
            0.0,
            monomials as f64,
            tol,
        ));
        rows.push(json!({
            "tag": tag,
            "name": tag.name(),
            "instances": vs.len(),
            "failures": failures,
            "vacuous": tag.vacuous_in(n),
            "firstSeed": vs.first().map(|v| v.seed),
            "lastSeed": vs.last().map(|v| v.seed),
        }));
    }
    p.put("identities", rows);
    Ok(p)
}

fn quasi_isometry(cfg: &ExperimentConfig) -> Result<Parts> {
    let g = &cfg.geometry;
    let n = g.n;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let (mut slack, mut four, mut ratio_dev) = (f64::INFINITY, 0.0f64, 0.0f64);
    let mut iso_count = 0;
    for _ in 0..cfg.instances {
        let band = rng.gen_range(1..=g.k);
        let q = rng.gen_range(0..=n);
        if let Some(f) = unit(random_form(&mut rng, n, band, n, q, ValueKind::Scalar)) {
            slack = slack.min(quasi_isometry_report(&f)?.estimate_slack());
        }
        let (pp, qq) = (rng.gen_range(0..=n), rng.gen_range(0..=n));
        if let Some(f) = unit(random_form(&mut rng, n, band, pp, qq, ValueKind::Scalar)) {
            four = four.max(quasi_isometry_report(&f)?.identity_residual);
        }
        let (pp, qq) = (rng.gen_range(0..n), rng.gen_range(0..=n));
        let raw = random_form(&mut rng, n, band, pp, qq, ValueKind::Scalar);
        let u = project_dbar_del_closed(&raw)?;
        if let Some(f) = unit_relative(project_del_star_exact(&u), &raw) {
            let r = quasi_isometry_report(&f)?;
            ratio_dev = ratio_dev.max((r.isometry_ratio - 1.0).abs());
            iso_count += 1;
        }
    }
    let mut p = Parts::default();
    p.checks.push(CheckRecord::new(
        "quasi-isometry/estimate",
        "‖∂̄*Gg‖² ≤ ⟨g,Gg⟩ for (n,q) forms",
        slack,
        0.0,
        (-slack).max(0.0),
        cfg.tolerance("estimateSlack"),
    ));
    p.checks.push(CheckRecord::zero(
        "quasi-isometry/four-term-identity",
        "‖∂̄*G∂g‖² = ‖g‖² − ‖Hg‖² − ⟨∂*g,G∂*g⟩ − ‖G∂̄∂g‖²",
        four,
        cfg.tolerance("fourTermIdentity"),
    ));
    p.checks.push(CheckRecord::zero(
        "quasi-isometry/isometry",
        "‖∂̄*G∂g‖ = ‖g‖ when ∂̄∂g = 0 and g is ∂*-exact",
        ratio_dev,
        cfg.tolerance("isometryRatio"),
    ));
    p.put("instances", cfg.instances);
    p.put("isometryInstances", iso_count);
    p.put("minEstimateSlack", slack);
    Ok(p)
}

fn dbar_inverse_experiment(cfg: &ExperimentConfig) -> Result<Parts> {
    let g = &cfg.geometry;
    let n = g.n;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let (mut res, mut excess, mut harm, mut dstar) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut used = 0;
    for _ in 0..cfg.instances {
        let band = rng.gen_range(1..=g.k);
        let q = rng.gen_range(0..=n);
        let raw = random_form(&mut rng, n, band, n - 1, q, ValueKind::Scalar);
        let Some(f) = unit_relative(project_dbar_del_closed(&raw)?, &raw) else { continue };
        let (_, d) = dbar_inverse(&f)?;
        res = res.max(d.residual);
        excess = excess.max(d.solution_norm_sq - d.bound);
        harm = harm.max(d.harmonic_norm);
        dstar = dstar.max(d.dbar_star_norm);
        used += 1;
    }
    let tol = cfg.tolerance("dbarInverse");
    let mut p = Parts::default();
    p.checks.push(CheckRecord::zero("dbar-inverse/residual", "∂̄s = ∂g for s = ∂̄*G∂g when ∂̄∂g = 0", res, tol));
    p.checks.push(CheckRecord::new(
        "dbar-inverse/bound",
        "‖s‖² ≤ ⟨∂g,G∂g⟩",
        excess,
        0.0,
        excess.max(0.0),
        tol,
    ));
    p.checks.push(CheckRecord::zero("dbar-inverse/harmonic", "H(s) = 0", harm, tol));
    p.checks.push(CheckRecord::zero("dbar-inverse/dbar-star", "∂̄*s = 0", dstar, tol));
    p.put("instances", used);
    Ok(p)
}

struct PreparedSeries {
    seed: kuranishi::DeformationSeed,
    series: BeltramiSeries,
    calibration: Option<CalibrationRecord>,
}

fn prepare_series(cfg: &ExperimentConfig, spec: &SeedSpec) -> Result<PreparedSeries> {
    let g = &cfg.geometry;
    let calibration = if spec.target_c1_norm.is_auto() {
        Some(kuranishi::calibrate_constants(g, cfg.calibration_samples, spec.rng_seed ^ CALIBRATION_STREAM)?)
    } else {
        None
    };
    let target = match (&spec.target_c1_norm, &calibration) {
        (_, Some(c)) if c.c1hat > 0.0 => {
            if cfg.parameters == 1 {
                1.0 / (4.0 * c.c1hat)
            } else {
                1.0 / (8.0 * cfg.order as f64 * c.c1hat)
            }
        }
        (_, Some(_)) => return Err(Error::Contract("calibrated constant is zero".into())),
        (super::config::NormSpec::Value(v), None) => *v,
        _ => unreachable!("validated config"),
    };
    let seed = kuranishi::make_seed(spec.kind, g, spec.rng_seed, target, cfg.parameters, spec.band)?;
    let construction = if spec.kind.requires_volume_closed() {
        Construction::Contraction
    } else {
        Construction::Bracket
    };
    let series = kuranishi::series::build(&seed, g, cfg.order, construction)?;
    Ok(PreparedSeries {
        seed,
        series,
        calibration,
    })
}

fn order_max<T>(rows: &[T], order: impl Fn(&T) -> usize, value: impl Fn(&T) -> f64, k: usize) -> f64 {
    rows.iter().filter(|r| order(r) == k).map(value).fold(0.0, f64::max)
}

fn kuranishi_experiment(cfg: &ExperimentConfig) -> Result<Parts> {
    let spec = cfg.seed.as_ref().expect("validated config");
    let prep = prepare_series(cfg, spec)?;
    let series = &prep.series;
    let mut p = Parts {
        receipts: series.receipts.clone(),
        ..Parts::default()
    };

    let integ = kuranishi::integrability_residual(series)?;
    let tol = cfg.tolerance("integrability");
    for r in integ.rows.iter().filter(|r| r.judged) {
        p.checks.push(CheckRecord::zero(
            format!("integrability/order-{}", r.order),
            "∂̄φ_I = ½Σ_{J+K=I}[φ_J,φ_K]",
            r.residual,
            tol,
        ));
    }
    p.checks.push(CheckRecord::zero(
        "integrability/next-order-closedness",
        "∂̄ Σ_{|J+K|=N+1}[φ_J,φ_K] = 0",
        integ.next_order_closedness,
        tol,
    ));

    let side = kuranishi::side_conditions_check(series)?;
    let (ts, th) = (cfg.tolerance("sideCondition"), cfg.tolerance("harmonicPart"));
    for k in 1..=series.order {
        if !side.iter().any(|r| r.order == k && r.applicable) {
            continue;
        }
        let m = |f: fn(&kuranishi::series::SideConditionRow) -> f64| order_max(&side, |r| r.order, f, k);
        p.checks.push(CheckRecord::zero(format!("side/dbar-star/order-{k}"), "∂̄*φ_k = 0", m(|r| r.dbar_star), ts));
        // exactness of φ_k⌟Ω₀ is a claim about k ≥ 2 only
        if k == 1 {
            continue;
        }
        if spec.kind.requires_volume_closed() {
            p.checks.push(CheckRecord::zero(
                format!("side/del-exact/order-{k}"),
                "φ_k⌟Ω₀ = ∂∂*G(φ_k⌟Ω₀)",
                m(|r| r.del_exact_defect),
                ts,
            ));
        }
        p.checks.push(CheckRecord::zero(format!("side/harmonic/order-{k}"), "H(φ_k⌟Ω₀) = 0", m(|r| r.harmonic), th));
    }

    if series.construction == Construction::Contraction {
        let other = kuranishi::iterate_bracket(&prep.seed, &cfg.geometry, cfg.order)?;
        let agree = kuranishi::two_path_agreement(series, &other)?;
        for r in &agree {
            p.checks.push(CheckRecord::zero(
                format!("two-path/order-{}", r.order),
                "contraction and bracket constructions agree",
                r.difference,
                cfg.tolerance("twoPath"),
            ));
        }
        p.put("twoPath", agree);
    }

    let fam = kuranishi::canonical_family(series)?;
    for r in &fam.residuals {
        p.checks.push(CheckRecord::zero(
            format!("canonical-family/order-{}", r.order),
            "∂̄Ω₀ + ∂(Φ⌟Ω₀) = 0 order by order",
            r.residual,
            cfg.tolerance("familyResidual"),
        ));
    }
    if series.harmonic_seed {
        p.checks.push(CheckRecord::zero(
            "canonical-family/closed-form",
            "Ω^C_t = Ω₀ + t(φ₁⌟Ω₀) + (t²/2)(φ₁⌟φ₁⌟Ω₀) for constant seeds",
            harmonic_closed_form_defect(&fam, series)?,
            cfg.tolerance("closedForm"),
        ));
    }
    let coh = kuranishi::cohomology_expansion(&fam, series)?;
    for k in 1..=series.order {
        let (name, anchor, tol) = if k == 1 {
            ("cohomology/order-1".to_string(), "H(Ω^C_{e_i}) = H(φ_i⌟Ω₀)", cfg.tolerance("cohomologyOrder1"))
        } else {
            (format!("cohomology/order-{k}"), "H(φ_I⌟Ω₀) = 0 for |I| ≥ 2", cfg.tolerance("cohomologyHigher"))
        };
        p.checks.push(CheckRecord::zero(name, anchor, order_max(&coh, |r| r.order, |r| r.residual, k), tol));
    }

    let os = cfg.geometry.oversample;
    let c1: Vec<f64> = (1..=series.order)
        .map(|k| series.order_terms(k).map(|(_, f)| c1_norm(f, os)).sum())
        .collect();
    let mut bounds: Vec<Option<f64>> = vec![None; series.order];
    if let Some(cal) = &prep.calibration {
        let dom = kuranishi::domination_report(series, cal.c1hat)?;
        for r in &dom {
            p.checks.push(CheckRecord::at_most(
                format!("domination/order-{}", r.order),
                "‖φ_k‖_{C¹} ≤ x_k",
                r.norm,
                r.majorant,
                r.majorant * 1e-12,
            ));
            bounds[r.order - 1] = Some(r.majorant);
        }
        let scan = kuranishi::radius_scan(series, &cfg.t_grid, cal.c1hat)?;
        for r in &scan {
            let over = r
                .partial_sums
                .iter()
                .zip(&r.envelope)
                .map(|(a, b)| a - b)
                .fold(0.0f64, f64::max);
            let drop = r.partial_sums.windows(2).map(|w| w[0] - w[1]).fold(0.0f64, f64::max);
            p.checks.push(CheckRecord::new(
                format!("radius/t={}", r.t),
                "Σ‖φ_k⌟Ω₀‖|t|^k is nondecreasing and stays under ‖Ω₀‖Σx_k|t|^k",
                *r.partial_sums.last().unwrap_or(&0.0),
                *r.envelope.last().unwrap_or(&0.0),
                over + drop,
                r.envelope.last().copied().unwrap_or(0.0) * 1e-12,
            ));
        }
        p.put("domination", dom);
        p.put("radiusScan", scan);
        p.put("calibration", cal);
    }

    let mut csv = String::from("order,residual,norm,majorant_bound\n");
    for (k, r) in integ.rows.iter().filter(|r| r.judged).enumerate() {
        let b = bounds[k].map(|v| format!("{v:e}")).unwrap_or_default();
        csv.push_str(&format!("{},{:e},{:e},{}\n", r.order, r.residual, c1[k], b));
    }
    p.tables.push(CsvTable {
        file: "kuranishi.csv".into(),
        body: csv,
    });

    p.put(
        "seed",
        json!({
            "kind": prep.seed.kind,
            "scale": prep.seed.scale,
            "parameters": prep.seed.parameters(),
            "c1Norms": prep.seed.fields.iter().map(|f| c1_norm(f, os)).collect::<Vec<_>>(),
            "residuals": prep.seed.residuals()?,
        }),
    );
    p.put("construction", series.construction);
    p.put("integrability", &integ);
    p.put("c1NormByOrder", &c1);
    p.put("sideConditions", &side);
    p.put("canonicalFamily", &fam.residuals);
    p.put("cohomology", &coh);
    Ok(p)
}

fn kahler_experiment(cfg: &ExperimentConfig) -> Result<Parts> {
    let spec = cfg.seed.as_ref().expect("validated config");
    let prep = prepare_series(cfg, spec)?;
    let fam = kuranishi::kahler_family(&prep.series, &omega0(cfg.geometry.n))?;
    let mut p = Parts {
        receipts: prep.series.receipts.clone(),
        ..Parts::default()
    };
    let (te, th) = (cfg.tolerance("kahlerExactness"), cfg.tolerance("holomorphicity"));
    let mut csv = String::from("order,del_exact_defect,dbar_star_exact_defect,holomorphicity,growth_lhs,growth_bound\n");
    for gr in &fam.growth {
        let k = gr.order;
        let m = |f: fn(&kuranishi::family::KahlerRow) -> f64| order_max(&fam.rows, |r| r.order, f, k);
        let (de, ds, ho) = (m(|r| r.del_exact_defect), m(|r| r.dbar_star_exact_defect), m(|r| r.holomorphicity));
        p.checks.push(CheckRecord::zero(format!("kahler/del-exact/order-{k}"), "Ω_I is ∂-exact", de, te));
        p.checks.push(CheckRecord::zero(format!("kahler/dbar-star-exact/order-{k}"), "Ω_I is ∂̄*-exact", ds, te));
        p.checks.push(CheckRecord::zero(
            format!("kahler/holomorphicity/order-{k}"),
            "∂̄Ω_I = −∂Σ_{J+L=I}φ_J⌟Ω_L",
            ho,
            th,
        ));
        p.checks.push(CheckRecord::at_most(
            format!("kahler/growth/order-{k}"),
            "Σ_{|I|=i}‖Ω_I‖ ≤ ‖Ω‖ξ(1+ξ)^{i−1}R₁^{−i}",
            gr.lhs,
            gr.bound,
            gr.bound * 1e-12,
        ));
        csv.push_str(&format!("{k},{de:e},{ds:e},{ho:e},{:e},{:e}\n", gr.lhs, gr.bound));
    }
    p.tables.push(CsvTable {
        file: "kahler.csv".into(),
        body: csv,
    });
    p.put("construction", prep.series.construction);
    p.put("xi", fam.xi);
    p.put("radius", fam.radius);
    p.put("rows", &fam.rows);
    p.put("growth", &fam.growth);
    if let Some(c) = &prep.calibration {
        p.put("calibration", c);
    }
    Ok(p)
}

fn majorant_experiment(cfg: &ExperimentConfig) -> Result<Parts> {
    let spec = cfg.majorant.as_ref().expect("validated config");
    let c = spec.c.parse()?;
    let x1 = spec.x1.parse()?;
    let tau = spec.tau.as_ref().map(|t| t.parse()).transpose()?;
    let series = majorant_coefficients(&c, &x1, cfg.order)?;
    let mut p = Parts::default();
    let flag = |m: Option<usize>| m.map_or(0.0, |_| 1.0);
    let cf = series.closed_form_mismatch();
    p.checks.push(CheckRecord::new(
        "majorant/closed-form",
        "x_n = [½(1−½)⋯((n−1)−½)/(2c·n!)](4cx₁)ⁿ exactly",
        cfg.order as f64,
        cf.unwrap_or(cfg.order) as f64,
        flag(cf),
        0.0,
    ));
    let fi = series.formal_identity_mismatch();
    p.checks.push(CheckRecord::new(
        "majorant/formal-identity",
        "cS² = S − x₁τ coefficient by coefficient",
        cfg.order as f64,
        fi.unwrap_or(cfg.order) as f64,
        flag(fi),
        0.0,
    ));
    let tau_f = tau.as_ref().map(rational_to_f64).unwrap_or(0.0);
    let eval = series.radius_eval(tau_f);
    if let (Some(s), Some(last), Some(r)) = (eval.s_tau, eval.partial_sums.last(), series.radius()) {
        if cfg.order >= 200 && tau_f.abs() < rational_to_f64(&r) {
            p.checks.push(CheckRecord::equal(
                "majorant/series-convergence",
                "partial sums converge to S(τ) = (1−√(1−4cx₁τ))/2c",
                *last,
                s,
                cfg.tolerance("seriesConvergence"),
            ));
        }
    }
    if let Some(b) = series.boundary_check(10_000) {
        p.checks.push(CheckRecord::new(
            "majorant/boundary",
            "at τ = radius the terms decrease and the partial sums stay below 1/(2c)",
            b.last_partial_sum,
            b.bound,
            if b.decreasing && b.bounded { 0.0 } else { 1.0 },
            0.0,
        ));
        p.put("boundary", b);
    }
    p.put("c", c.to_string());
    p.put("x1", x1.to_string());
    p.put("coefficients", series.coeffs().iter().map(|v| v.to_string()).collect::<Vec<_>>());
    p.put("radiusEval", eval);
    p.tables.push(CsvTable {
        file: "majorant.csv".into(),
        body: series.to_csv(tau_f),
    });
    Ok(p)
}

fn calibrate_experiment(cfg: &ExperimentConfig) -> Result<Parts> {
    let g = &cfg.geometry;
    let rec = kuranishi::calibrate_constants(g, cfg.calibration_samples, cfg.rng_seed ^ CALIBRATION_STREAM)?;
    let hold = kuranishi::holdout_check(&rec, g, cfg.calibration_samples, cfg.rng_seed ^ HOLDOUT_STREAM)?;
    let mut p = Parts::default();
    p.checks.push(CheckRecord::at_most(
        "calibration/holdout-c1",
        "‖½∂̄*G[η₁,η₂]‖_{C¹} ≤ Ĉ₁‖η₁‖_{C¹}‖η₂‖_{C¹} on fresh samples",
        hold.c1_max,
        rec.c1hat,
        0.0,
    ));
    p.checks.push(CheckRecord::at_most(
        "calibration/holdout-c2",
        "‖η₁⌟η₂⌟s‖ ≤ Ĉ₂‖η₁‖_{C¹}‖η₂‖_{C¹}‖s‖ on fresh samples",
        hold.c2_max,
        rec.c2hat,
        0.0,
    ));
    p.put("calibration", &rec);
    p.put("holdout", &hold);
    Ok(p)
}
