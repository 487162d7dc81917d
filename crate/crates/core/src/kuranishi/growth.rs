//! Growth of the series against the majorant.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::series::BeltramiSeries;
use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::majorant::{generating_function, majorant_coefficients, rational_to_f64};
use crate::torus::form::{l2, omega0};
use crate::torus::norms::c1_norm;

/// Relative slack allowed when comparing a float norm to an exact majorant.
const SLACK: f64 = 1e-12;

fn majorant_f64(c: f64, x1: f64, order: usize) -> Result<Vec<f64>> {
    let to = |v: f64, what: &str| BigRational::from_float(v).ok_or_else(|| Error::Contract(format!("{what} is not finite")));
    Ok(majorant_coefficients(&to(c, "c")?, &to(x1, "x1")?, order)?
        .coeffs()
        .iter()
        .map(rational_to_f64)
        .collect())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DominationRow {
    pub order: usize,
    /// `Σ_{|I|=k} ‖φ_I‖_{C¹}`
    pub norm: f64,
    pub majorant: f64,
    pub pass: bool,
}

/// Compares `‖φ_k‖_{C¹}` with the majorant built from `c = c1hat` and
/// `x₁ = Σ_i ‖φ_{e_i}‖_{C¹}`.
pub fn domination_report(series: &BeltramiSeries, c1hat: f64) -> Result<Vec<DominationRow>> {
    let os = series.geometry.oversample;
    let norms: Vec<f64> = (1..=series.order)
        .map(|k| series.order_terms(k).map(|(_, f)| c1_norm(f, os)).sum())
        .collect();
    let x = majorant_f64(c1hat, norms[0], series.order)?;
    Ok(norms
        .iter()
        .zip(&x)
        .enumerate()
        .map(|(i, (&norm, &maj))| DominationRow {
            order: i + 1,
            norm,
            majorant: maj,
            pass: norm <= maj * (1.0 + SLACK),
        })
        .collect())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RadiusRow {
    pub t: f64,
    /// `Σ_{k≤j} ‖φ_k⌟Ω₀‖ |t|^k` for `j = 1..N`.
    pub partial_sums: Vec<f64>,
    /// `‖Ω₀‖ Σ_{k≤j} x_k |t|^k`
    pub envelope: Vec<f64>,
    /// `‖Ω₀‖ (S(|t|) − Σ_{k≤N} x_k |t|^k)`, when `|t|` is inside the majorant radius.
    pub tail_bound: Option<f64>,
    pub monotone: bool,
    pub within_envelope: bool,
}

impl RadiusRow {
    pub fn pass(&self) -> bool {
        self.monotone && self.within_envelope
    }
}

pub fn radius_scan(series: &BeltramiSeries, t_grid: &[f64], c1hat: f64) -> Result<Vec<RadiusRow>> {
    let n = series.dim();
    let os = series.geometry.oversample;
    let omega = omega0(n);
    let base = l2(&omega);
    let mut terms = vec![0.0; series.order];
    let mut x1 = 0.0;
    for (idx, phi) in &series.coeffs {
        terms[idx.degree() - 1] += l2(&Form::contract(phi, &omega)?);
        if idx.degree() == 1 {
            x1 += c1_norm(phi, os);
        }
    }
    let x = majorant_f64(c1hat, x1, series.order)?;
    let mut rows = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let t = t.abs();
        if t >= 1.0 {
            return Err(Error::Contract(format!("radius scan needs |t| < 1, got {t}")));
        }
        let mut ps = Vec::with_capacity(series.order);
        let mut env = Vec::with_capacity(series.order);
        let (mut a, mut b, mut p) = (0.0, 0.0, 1.0);
        for k in 0..series.order {
            p *= t;
            a += terms[k] * p;
            b += x[k] * p * base;
            ps.push(a);
            env.push(b);
        }
        let tail_bound = generating_function(c1hat, x1, t).map(|s| (s * base - b).max(0.0));
        rows.push(RadiusRow {
            t,
            monotone: ps.windows(2).all(|w| w[1] >= w[0]),
            within_envelope: ps.iter().zip(&env).all(|(a, b)| *a <= b * (1.0 + SLACK)),
            partial_sums: ps,
            envelope: env,
            tail_bound,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kuranishi::seed::{make_seed, SeedKind};
    use crate::kuranishi::series::iterate_beltrami;
    use crate::torus::TorusGeometry;

    #[test]
    fn harmonic_seed_is_exact() {
        let g = TorusGeometry::new(2, 4, 2).unwrap();
        let s = make_seed(SeedKind::HarmonicConstant, &g, 0, 0.25, 1, 1).unwrap();
        let series = iterate_beltrami(&s, &g, 4).unwrap();
        let dom = domination_report(&series, 1.0).unwrap();
        assert!((dom[0].norm - dom[0].majorant).abs() < 1e-15);
        assert!(dom.iter().all(|r| r.pass));
        let rows = radius_scan(&series, &[0.0, 0.5], 1.0).unwrap();
        assert_eq!(rows[0].partial_sums.last(), Some(&0.0));
        let expect = l2(&Form::contract(&s.fields[0], &omega0(2)).unwrap()) * 0.5;
        assert!((rows[1].partial_sums[3] - expect).abs() < 1e-15);
        assert!(rows.iter().all(|r| r.pass()));
    }

    #[test]
    fn rejects_t_outside_disc() {
        let g = TorusGeometry::new(2, 4, 2).unwrap();
        let s = make_seed(SeedKind::HarmonicConstant, &g, 0, 0.25, 1, 1).unwrap();
        let series = iterate_beltrami(&s, &g, 2).unwrap();
        assert!(radius_scan(&series, &[1.0], 1.0).is_err());
    }
}
