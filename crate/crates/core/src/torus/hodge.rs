//! Adjoints, Green operator and harmonic projection, all diagonal in the
//! Fourier basis.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::form::{inner, l2, norm_sq, FourierForm, TruncationReceipt};
use super::trig::TrigPoly;
use crate::error::Result;
use crate::exterior::{below, Basis};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Differential {
    Dbar,
    Del,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Adjoint {
    DbarStar,
    DelStar,
}

pub fn dbar(f: &FourierForm) -> FourierForm {
    f.d_anti()
}

pub fn del(f: &FourierForm) -> FourierForm {
    f.d_holo()
}

/// `∂̄f` or `∂f`; terms already of top degree are flagged in the receipt.
pub fn differential(f: &FourierForm, which: Differential) -> (FourierForm, TruncationReceipt) {
    let n = f.dim();
    let mut r = TruncationReceipt::exact(0);
    let (out, overflow) = match which {
        Differential::Dbar => (dbar(f), f.terms().any(|(b, _)| b.q() == n)),
        Differential::Del => (del(f), f.terms().any(|(b, _)| b.p() == n)),
    };
    if overflow {
        r.warnings.push("bidegree overflow: top-degree terms map to zero".into());
    }
    (out, r)
}

fn adjoint_impl(f: &FourierForm, anti: bool) -> FourierForm {
    let mut out = FourierForm::zero(f.dim(), f.kind());
    for (b, c) in f.terms() {
        let set = if anti { b.anti } else { b.holo };
        for j in 0..f.dim() {
            if set & (1 << j) == 0 {
                continue;
            }
            let flips = if anti { b.p() as u32 + below(b.anti, j) } else { below(b.holo, j) };
            let sign = if flips % 2 == 1 { -2.0 } else { 2.0 };
            let coeff = c.map_modes(|m, v| {
                let sym = if anti { m.lambda(j) } else { m.mu(j) };
                v * sym.conj() * sign
            });
            let target = if anti {
                Basis { anti: b.anti & !(1 << j), ..*b }
            } else {
                Basis { holo: b.holo & !(1 << j), ..*b }
            };
            out.accumulate(target, &coeff, false);
        }
    }
    out
}

/// Formal L² adjoint of `∂̄`.
pub fn dbar_star(f: &FourierForm) -> FourierForm {
    adjoint_impl(f, true)
}

/// Formal L² adjoint of `∂`.
pub fn del_star(f: &FourierForm) -> FourierForm {
    adjoint_impl(f, false)
}

pub fn adjoint_differential(f: &FourierForm, which: Adjoint) -> FourierForm {
    match which {
        Adjoint::DbarStar => dbar_star(f),
        Adjoint::DelStar => del_star(f),
    }
}

fn map_all(f: &FourierForm, g: impl Fn(&crate::torus::Mode, Complex64) -> Complex64 + Copy) -> FourierForm {
    f.map_coeffs(|_, c: &TrigPoly| c.map_modes(g))
}

/// `□̄ f`, which equals `□_∂ f` on the flat torus.
pub fn laplacian(f: &FourierForm) -> FourierForm {
    map_all(f, |m, v| v * m.laplace())
}

pub fn green(f: &FourierForm) -> FourierForm {
    map_all(f, |m, v| if m.is_zero() { Complex64::new(0.0, 0.0) } else { v / m.laplace() })
}

/// Projection onto harmonic forms: the constant coefficients.
pub fn harmonic(f: &FourierForm) -> FourierForm {
    map_all(f, |m, v| if m.is_zero() { v } else { Complex64::new(0.0, 0.0) })
}

pub fn green_harmonic(f: &FourierForm) -> (FourierForm, FourierForm) {
    (green(f), harmonic(f))
}

/// Orthogonal projection onto `ker ∂̄∂`: `f − ∂*∂G ∂̄*∂̄G f`.
pub fn project_dbar_del_closed(f: &FourierForm) -> Result<FourierForm> {
    let inner_part = dbar_star(&dbar(&green(f)));
    let removed = del_star(&del(&green(&inner_part)));
    f.sub(&removed)
}

/// Orthogonal projection onto `im ∂`: `∂∂*G`.
pub fn project_del_exact(f: &FourierForm) -> FourierForm {
    del(&del_star(&green(f)))
}

/// Orthogonal projection onto `im ∂*`: `∂*∂G`.
pub fn project_del_star_exact(f: &FourierForm) -> FourierForm {
    del_star(&del(&green(f)))
}

/// Orthogonal projection onto `im ∂̄*`: `∂̄*∂̄G`.
pub fn project_dbar_star_exact(f: &FourierForm) -> FourierForm {
    dbar_star(&dbar(&green(f)))
}

/// Diagnostics for `s = ∂̄*G∂g`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DbarInverseDiagnostics {
    /// `‖∂̄s − ∂g‖`
    pub residual: f64,
    /// `‖s‖²`
    pub solution_norm_sq: f64,
    /// `⟨∂g, G∂g⟩`
    pub bound: f64,
    /// `‖H s‖`
    pub harmonic_norm: f64,
    /// `‖∂̄* s‖`
    pub dbar_star_norm: f64,
    /// `‖∂̄∂g‖`; zero means the equation is solvable.
    pub constraint_norm: f64,
}

pub fn dbar_inverse(g: &FourierForm) -> Result<(FourierForm, DbarInverseDiagnostics)> {
    let dg = del(g);
    let gdg = green(&dg);
    let s = dbar_star(&gdg);
    let residual = l2(&dbar(&s).sub(&dg)?);
    let diag = DbarInverseDiagnostics {
        residual,
        solution_norm_sq: norm_sq(&s),
        bound: inner(&dg, &gdg).re,
        harmonic_norm: l2(&harmonic(&s)),
        dbar_star_norm: l2(&dbar_star(&s)),
        constraint_norm: l2(&dbar(&dg)),
    };
    Ok((s, diag))
}

/// Both sides of the quasi-isometry estimate and of the four-term identity.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct QuasiIsometryReport {
    /// `‖∂̄*Gg‖²`
    pub estimate_lhs: f64,
    /// `⟨g, Gg⟩`
    pub estimate_rhs: f64,
    /// `‖∂̄*G∂g‖²`
    pub identity_lhs: f64,
    pub norm_sq: f64,
    pub harmonic_sq: f64,
    /// `⟨∂*g, G∂*g⟩`
    pub del_star_term: f64,
    /// `‖G∂̄∂g‖²`
    pub constraint_term: f64,
    /// `|lhs − rhs| / ‖g‖²`
    pub identity_residual: f64,
    /// `‖∂̄∂g‖`
    pub dbar_del_norm: f64,
    /// Distance of `g` from `im ∂*`.
    pub del_star_exact_defect: f64,
    /// `‖∂̄*G∂g‖ / ‖g‖`
    pub isometry_ratio: f64,
}

impl QuasiIsometryReport {
    pub fn estimate_slack(&self) -> f64 {
        self.estimate_rhs - self.estimate_lhs
    }

    pub fn identity_rhs(&self) -> f64 {
        self.norm_sq - self.harmonic_sq - self.del_star_term - self.constraint_term
    }

    pub fn is_isometry_case(&self, tol: f64) -> bool {
        let scale = self.norm_sq.sqrt().max(f64::MIN_POSITIVE);
        self.dbar_del_norm <= tol * scale && self.del_star_exact_defect <= tol * scale
    }
}

pub fn quasi_isometry_report(g: &FourierForm) -> Result<QuasiIsometryReport> {
    let gg = green(g);
    let estimate_lhs = norm_sq(&dbar_star(&gg));
    let estimate_rhs = inner(g, &gg).re;

    let identity_lhs = norm_sq(&dbar_star(&green(&del(g))));
    let nsq = norm_sq(g);
    let harmonic_sq = norm_sq(&harmonic(g));
    let ds = del_star(g);
    let del_star_term = inner(&ds, &green(&ds)).re;
    let dd = dbar(&del(g));
    let constraint_term = norm_sq(&green(&dd));
    let rhs = nsq - harmonic_sq - del_star_term - constraint_term;
    let identity_residual = if nsq > 0.0 { (identity_lhs - rhs).abs() / nsq } else { (identity_lhs - rhs).abs() };
    let del_star_exact_defect = l2(&g.sub(&project_del_star_exact(g))?);
    Ok(QuasiIsometryReport {
        estimate_lhs,
        estimate_rhs,
        identity_lhs,
        norm_sq: nsq,
        harmonic_sq,
        del_star_term,
        constraint_term,
        identity_residual,
        dbar_del_norm: l2(&dd),
        del_star_exact_defect,
        isometry_ratio: if nsq > 0.0 { (identity_lhs / nsq).sqrt() } else { 0.0 },
    })
}
