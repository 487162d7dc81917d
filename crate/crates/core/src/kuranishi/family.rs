//! Holomorphic `(n,0)` families carried by a Beltrami series.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::series::{BeltramiSeries, MultiIndex};
use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::torus::form::{l2, omega0, FourierForm};
use crate::torus::hodge::{dbar, dbar_star, del, green, harmonic, project_dbar_star_exact, project_del_exact};
use crate::torus::norms::c0_norm;

/// `e^{Φ(t)}⌟Ω₀` expanded in `t`; coefficients mix bidegrees `(n−k,k)`.
#[derive(Clone, Debug)]
pub struct CanonicalFamily {
    pub order: usize,
    /// Includes the zero index, whose coefficient is `Ω₀`.
    pub coeffs: BTreeMap<MultiIndex, FourierForm>,
    pub residuals: Vec<OrderResidual>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OrderResidual {
    pub order: usize,
    pub residual: f64,
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

/// Collects `Σ_k (1/k!) Σ φ_{J₁}⌟⋯⌟φ_{J_k}⌟Ω₀` by total index.
pub fn canonical_family(series: &BeltramiSeries) -> Result<CanonicalFamily> {
    let n = series.dim();
    let m = series.parameters;
    let zero = MultiIndex::zero(m);
    let all = MultiIndex::up_to(m, series.order);
    let mut coeffs: BTreeMap<MultiIndex, FourierForm> = BTreeMap::new();
    coeffs.insert(zero.clone(), omega0(n));
    // level[L] holds the k-fold contraction sum T_k(L)
    let mut level: BTreeMap<MultiIndex, FourierForm> = BTreeMap::from([(zero, omega0(n))]);
    for k in 1..=n {
        let mut next = BTreeMap::new();
        for idx in all.iter().filter(|i| i.degree() >= k) {
            let mut acc = FourierForm::zero(n, crate::exterior::ValueKind::Scalar);
            for (l, t) in &level {
                if let Some(j) = idx.sub(l) {
                    if j.degree() == 0 {
                        continue;
                    }
                    if let Some(phi) = series.get(&j) {
                        acc = acc.add(&Form::contract(phi, t)?)?;
                    }
                }
            }
            if !acc.is_empty() {
                next.insert(idx.clone(), acc);
            }
        }
        let w = Complex64::new(1.0 / factorial(k), 0.0);
        for (idx, t) in &next {
            let e = coeffs.entry(idx.clone()).or_insert_with(|| FourierForm::zero(n, crate::exterior::ValueKind::Scalar));
            *e = e.add(&t.scale(&w))?;
        }
        if next.is_empty() {
            break;
        }
        level = next;
    }
    let omega = omega0(n);
    let mut residuals: Vec<OrderResidual> = (0..=series.order).map(|k| OrderResidual { order: k, residual: 0.0 }).collect();
    residuals[0].residual = l2(&dbar(&omega));
    for (idx, phi) in &series.coeffs {
        let r = l2(&del(&Form::contract(phi, &omega)?));
        let row = &mut residuals[idx.degree()];
        row.residual = row.residual.max(r);
    }
    Ok(CanonicalFamily {
        order: series.order,
        coeffs,
        residuals,
    })
}

/// Largest distance from `Π_i (φ_i^{ν_i}/ν_i!)⌟Ω₀`, the expansion that holds
/// when the seed fields are constant.
pub fn harmonic_closed_form_defect(family: &CanonicalFamily, series: &BeltramiSeries) -> Result<f64> {
    let n = series.dim();
    let seeds: Vec<&FourierForm> = (0..series.parameters)
        .map(|i| series.get(&MultiIndex::unit(series.parameters, i)).expect("seed coefficient"))
        .collect();
    let mut worst = 0.0f64;
    for (idx, got) in &family.coeffs {
        let mut expect = omega0(n);
        for (i, &nu) in idx.0.iter().enumerate() {
            for _ in 0..nu {
                expect = Form::contract(seeds[i], &expect)?;
            }
            expect = expect.scale(&Complex64::new(1.0 / factorial(nu as usize), 0.0));
        }
        worst = worst.max(l2(&got.sub(&expect)?));
    }
    Ok(worst)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct KahlerRow {
    pub index: MultiIndex,
    pub order: usize,
    /// `‖Ω_I − ∂∂*GΩ_I‖`
    pub del_exact_defect: f64,
    /// `‖Ω_I − ∂̄*∂̄GΩ_I‖`
    pub dbar_star_exact_defect: f64,
    /// `‖∂̄Ω_I + ∂Σ_{J+L=I} φ_J⌟Ω_L‖`
    pub holomorphicity: f64,
    pub c0: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GrowthRow {
    pub order: usize,
    /// `Σ_{|I|=i} ‖Ω_I‖_{C⁰}`
    pub lhs: f64,
    /// `‖Ω‖_{C⁰} ξ(1+ξ)^{i−1} R₁^{−i}`
    pub bound: f64,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct KahlerFamily {
    pub order: usize,
    pub coeffs: BTreeMap<MultiIndex, FourierForm>,
    pub rows: Vec<KahlerRow>,
    /// `ξ = max_i Σ_{|I|=i} ‖φ_I‖_{C⁰} R₁^i`
    pub xi: f64,
    pub radius: f64,
    pub growth: Vec<GrowthRow>,
}

/// Solves `∂̄Ω_t = −∂(Φ(t)⌟Ω_t)` order by order with `Ω_I = ∂∂̄*G η_I`,
/// `η_I = Σ_{J+L=I, |J|≥1} φ_J⌟Ω_L`.
pub fn kahler_family(series: &BeltramiSeries, omega: &FourierForm) -> Result<KahlerFamily> {
    let n = series.dim();
    if omega.dim() != n {
        return Err(Error::DimMismatch(omega.dim(), n));
    }
    if omega.bidegrees().iter().any(|&(p, q)| (p, q) != (n, 0)) {
        return Err(Error::Contract("base form must be of bidegree (n,0)".into()));
    }
    let closed = l2(&dbar(omega));
    if closed > 1e-12 {
        return Err(Error::Contract(format!("base form is not ∂̄-closed (residual {closed:.3e})")));
    }
    let m = series.parameters;
    let os = series.geometry.oversample;
    let radius: f64 = 1.0;
    let mut coeffs = BTreeMap::from([(MultiIndex::zero(m), omega.clone())]);
    let mut rows = Vec::new();
    for idx in MultiIndex::up_to(m, series.order) {
        let mut eta = FourierForm::zero(n, crate::exterior::ValueKind::Scalar);
        for (l, om) in &coeffs {
            if let Some(j) = idx.sub(l) {
                if j.degree() == 0 {
                    continue;
                }
                if let Some(phi) = series.get(&j) {
                    eta = eta.add(&Form::contract(phi, om)?)?;
                }
            }
        }
        let om = del(&dbar_star(&green(&eta)));
        rows.push(KahlerRow {
            index: idx.clone(),
            order: idx.degree(),
            del_exact_defect: l2(&om.sub(&project_del_exact(&om))?),
            dbar_star_exact_defect: l2(&om.sub(&project_dbar_star_exact(&om))?),
            holomorphicity: l2(&dbar(&om).add(&del(&eta))?),
            c0: c0_norm(&om, os),
        });
        coeffs.insert(idx, om);
    }
    let mut xi = 0.0f64;
    for k in 1..=series.order {
        let s: f64 = series.order_terms(k).map(|(_, f)| c0_norm(f, os)).sum();
        xi = xi.max(s * radius.powi(k as i32));
    }
    let base = c0_norm(omega, os);
    let growth = (1..=series.order)
        .map(|k| {
            let lhs: f64 = rows.iter().filter(|r| r.order == k).map(|r| r.c0).sum();
            let bound = base * xi * (1.0 + xi).powi(k as i32 - 1) * radius.powi(-(k as i32));
            GrowthRow {
                order: k,
                lhs,
                bound,
                pass: lhs <= bound * (1.0 + 1e-12) + 1e-15,
            }
        })
        .collect();
    Ok(KahlerFamily {
        order: series.order,
        coeffs,
        rows,
        xi,
        radius,
        growth,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CohomologyRow {
    pub index: MultiIndex,
    pub order: usize,
    /// `‖H(c_I)‖` for the family coefficient `c_I`.
    pub harmonic_norm: f64,
    /// Order 0: `‖H(Ω₀) − Ω₀‖`; order 1: `‖H(c_I)_{(n−1,1)} − H(φ_I⌟Ω₀)‖`;
    /// higher orders: `‖H(φ_I⌟Ω₀)‖`.
    pub residual: f64,
}

pub fn cohomology_expansion(family: &CanonicalFamily, series: &BeltramiSeries) -> Result<Vec<CohomologyRow>> {
    let n = series.dim();
    let omega = omega0(n);
    let mut rows = Vec::with_capacity(family.coeffs.len());
    for (idx, c) in &family.coeffs {
        let order = idx.degree();
        let h = harmonic(c);
        let residual = match order {
            0 => l2(&h.sub(&omega)?),
            _ => {
                let phi = series.get(idx).ok_or_else(|| Error::Contract(format!("missing coefficient {idx}")))?;
                let top = harmonic(&Form::contract(phi, &omega)?);
                if order == 1 {
                    l2(&h.part(n - 1, 1).sub(&top)?)
                } else {
                    l2(&top)
                }
            }
        };
        rows.push(CohomologyRow {
            index: idx.clone(),
            order,
            harmonic_norm: l2(&h),
            residual,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kuranishi::seed::{make_seed, SeedKind};
    use crate::kuranishi::series::{iterate_beltrami, iterate_bracket};
    use crate::torus::TorusGeometry;

    #[test]
    fn order_zero_is_omega0() {
        let g = TorusGeometry::new(2, 4, 2).unwrap();
        let s = make_seed(SeedKind::DivergenceFreeSynthetic, &g, 2, 0.1, 1, 1).unwrap();
        let series = iterate_beltrami(&s, &g, 3).unwrap();
        let fam = canonical_family(&series).unwrap();
        assert_eq!(fam.coeffs[&MultiIndex::zero(1)], omega0(2));
        assert!(fam.residuals.iter().all(|r| r.residual < 1e-10));
        let coh = cohomology_expansion(&fam, &series).unwrap();
        assert!(coh.iter().all(|r| r.residual < 1e-10), "{coh:?}");
    }

    #[test]
    fn harmonic_seed_closed_form() {
        let g = TorusGeometry::new(2, 4, 2).unwrap();
        let s = make_seed(SeedKind::HarmonicConstant, &g, 0, 0.3, 2, 1).unwrap();
        let series = iterate_beltrami(&s, &g, 3).unwrap();
        let fam = canonical_family(&series).unwrap();
        assert!(harmonic_closed_form_defect(&fam, &series).unwrap() < 1e-15);
        let k = kahler_family(&series, &omega0(2)).unwrap();
        assert!(k.coeffs.iter().filter(|(i, _)| i.degree() > 0).all(|(_, f)| f.is_empty()));
    }

    #[test]
    fn shear_cascade_is_holomorphic() {
        let g = TorusGeometry::new(2, 4, 2).unwrap();
        let s = make_seed(SeedKind::Shear, &g, 5, 0.2, 1, 1).unwrap();
        let series = iterate_bracket(&s, &g, 3).unwrap();
        let k = kahler_family(&series, &omega0(2)).unwrap();
        assert!(l2(&k.coeffs[&MultiIndex(vec![1])]) > 1e-4);
        for r in &k.rows {
            assert!(r.del_exact_defect < 1e-12 && r.dbar_star_exact_defect < 1e-12 && r.holomorphicity < 1e-12, "{r:?}");
        }
        assert!(k.growth.iter().all(|g| g.pass), "{:?}", k.growth);
    }

    #[test]
    fn non_closed_base_rejected() {
        let g = TorusGeometry::new(2, 4, 2).unwrap();
        let s = make_seed(SeedKind::HarmonicConstant, &g, 0, 0.3, 1, 1).unwrap();
        let series = iterate_beltrami(&s, &g, 1).unwrap();
        let m = crate::torus::Mode::new(&[1, 0], &[0, 0]);
        let bad = crate::torus::form::monomial_form(2, crate::exterior::ValueKind::Scalar, &[0, 1], &[], 0, m, Complex64::new(1.0, 0.0));
        assert!(kahler_family(&series, &bad).is_err());
    }
}
