//! Beltrami power series `Φ(t) = Σ_I φ_I t^I`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::seed::DeformationSeed;
use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::torus::form::{bracket, contract, l2, omega0, truncate, FourierForm, TruncationReceipt};
use crate::torus::hodge::{dbar, dbar_star, del, green, harmonic, project_del_exact};
use crate::torus::TorusGeometry;

/// Squared L² mass dropped at one order above which a warning is attached.
pub const TRUNCATION_WARN: f64 = 1e-24;

/// Exponent vector `I = (ν₁,…,ν_m)`, ordered by total degree and then
/// lexicographically with larger leading exponents first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(pub Vec<u16>);

impl MultiIndex {
    pub fn zero(m: usize) -> Self {
        MultiIndex(vec![0; m])
    }

    pub fn unit(m: usize, i: usize) -> Self {
        let mut v = vec![0; m];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&v| v as usize).sum()
    }

    pub fn params(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, o: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&o.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// Every index of total degree `d` in `m` parameters, ascending.
    pub fn of_degree(m: usize, d: usize) -> Vec<MultiIndex> {
        fn rec(m: usize, d: usize, prefix: &mut Vec<u16>, out: &mut Vec<MultiIndex>) {
            if prefix.len() + 1 == m {
                prefix.push(d as u16);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for v in (0..=d).rev() {
                prefix.push(v as u16);
                rec(m, d - v, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if m > 0 {
            rec(m, d, &mut Vec::with_capacity(m), &mut out);
        }
        out
    }

    /// Every index with `1 ≤ |I| ≤ order`, ascending.
    pub fn up_to(m: usize, order: usize) -> Vec<MultiIndex> {
        (1..=order).flat_map(|d| Self::of_degree(m, d)).collect()
    }

    /// Ordered pairs `(J, K)` with `J + K = I` and both nonzero.
    pub fn splits(&self) -> Vec<(MultiIndex, MultiIndex)> {
        let m = self.params();
        (1..self.degree())
            .flat_map(|d| Self::of_degree(m, d))
            .filter_map(|j| self.sub(&j).map(|k| (j, k)))
            .collect()
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| o.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    /// `φ_I⌟Ω₀ = −½ ∂̄*G∂ Σ φ_J⌟φ_K⌟Ω₀`
    Contraction,
    /// `φ_I = ½ ∂̄*G Σ [φ_J, φ_K]`
    Bracket,
}

#[derive(Clone, Debug)]
pub struct BeltramiSeries {
    pub geometry: TorusGeometry,
    pub parameters: usize,
    pub order: usize,
    pub construction: Construction,
    pub coeffs: BTreeMap<MultiIndex, FourierForm>,
    /// Index `k − 1` covers order `k`.
    pub receipts: Vec<TruncationReceipt>,
    /// Whether every seed field has constant coefficients.
    pub harmonic_seed: bool,
}

impl BeltramiSeries {
    pub fn get(&self, i: &MultiIndex) -> Option<&FourierForm> {
        self.coeffs.get(i)
    }

    /// Coefficients of total degree `k`, ascending.
    pub fn order_terms(&self, k: usize) -> impl Iterator<Item = (&MultiIndex, &FourierForm)> {
        self.coeffs.iter().filter(move |(i, _)| i.degree() == k)
    }

    pub fn dim(&self) -> usize {
        self.geometry.n
    }

    /// `Φ(t) = Σ φ_I t^I`, truncated at the stored order.
    pub fn evaluate(&self, t: &[Complex64]) -> Result<FourierForm> {
        if t.len() != self.parameters {
            return Err(Error::DimMismatch(t.len(), self.parameters));
        }
        let mut out = FourierForm::zero(self.dim(), crate::exterior::ValueKind::Tangent);
        for (i, f) in &self.coeffs {
            let w: Complex64 = i.0.iter().zip(t).map(|(&e, &x)| x.powu(e as u32)).product();
            out = out.add(&f.scale(&w))?;
        }
        Ok(out)
    }
}

fn is_constant(f: &FourierForm) -> bool {
    f.terms().all(|(_, c)| c.modes().all(|(m, _)| m.is_zero()))
}

fn half(f: &FourierForm, sign: f64) -> FourierForm {
    f.scale(&Complex64::new(0.5 * sign, 0.0))
}

/// Builds `φ_I` for all `|I| ≤ order` by the `Ω₀`-contraction recursion.
pub fn iterate_beltrami(seed: &DeformationSeed, geometry: &TorusGeometry, order: usize) -> Result<BeltramiSeries> {
    build(seed, geometry, order, Construction::Contraction)
}

/// Builds `φ_I` for all `|I| ≤ order` by the bracket recursion.
pub fn iterate_bracket(seed: &DeformationSeed, geometry: &TorusGeometry, order: usize) -> Result<BeltramiSeries> {
    build(seed, geometry, order, Construction::Bracket)
}

pub fn build(seed: &DeformationSeed, geometry: &TorusGeometry, order: usize, construction: Construction) -> Result<BeltramiSeries> {
    geometry.validate()?;
    seed.validate()?;
    if order == 0 {
        return Err(Error::Contract("truncation order must be at least 1".into()));
    }
    if seed.fields[0].dim() != geometry.n {
        return Err(Error::DimMismatch(seed.fields[0].dim(), geometry.n));
    }
    let m = seed.parameters();
    let omega = omega0(geometry.n);
    let mut coeffs = BTreeMap::new();
    // φ_K⌟Ω₀, cached for the contraction path
    let mut tops: BTreeMap<MultiIndex, FourierForm> = BTreeMap::new();
    let mut receipts = Vec::with_capacity(order);
    let mut first = TruncationReceipt::exact(geometry.k);
    for (i, f) in seed.fields.iter().enumerate() {
        let (kept, r) = truncate(f, geometry.k);
        first.merge(&r);
        let idx = MultiIndex::unit(m, i);
        tops.insert(idx.clone(), Form::contract(&kept, &omega)?);
        coeffs.insert(idx, kept);
    }
    receipts.push(first);

    for k in 2..=order {
        let level = MultiIndex::of_degree(m, k);
        let built: Vec<Result<(FourierForm, TruncationReceipt)>> = level
            .par_iter()
            .map(|idx| {
                let mut rec = TruncationReceipt::exact(geometry.k);
                let mut acc = FourierForm::zero(geometry.n, match construction {
                    Construction::Contraction => crate::exterior::ValueKind::Scalar,
                    Construction::Bracket => crate::exterior::ValueKind::Tangent,
                });
                for (j, l) in idx.splits() {
                    let (piece, r) = match construction {
                        Construction::Contraction => contract(geometry, &coeffs[&j], &tops[&l])?,
                        Construction::Bracket => bracket(geometry, &coeffs[&j], &coeffs[&l])?,
                    };
                    rec.merge(&r);
                    acc = acc.add(&piece)?;
                }
                let phi = match construction {
                    Construction::Contraction => {
                        let psi = half(&dbar_star(&green(&del(&acc))), -1.0);
                        Form::from_top(&psi)?
                    }
                    Construction::Bracket => half(&dbar_star(&green(&acc)), 1.0),
                };
                let (kept, r) = truncate(&phi, geometry.k);
                rec.merge(&r);
                Ok((kept, rec))
            })
            .collect();
        let mut rec = TruncationReceipt::exact(geometry.k);
        for (idx, res) in level.into_iter().zip(built) {
            let (phi, r) = res?;
            rec.merge(&r);
            if construction == Construction::Contraction {
                tops.insert(idx.clone(), Form::contract(&phi, &omega)?);
            }
            coeffs.insert(idx, phi);
        }
        if rec.discarded_mass > TRUNCATION_WARN {
            rec.warnings.push(format!("order {k}: truncation discarded squared mass {:.3e}", rec.discarded_mass));
        }
        receipts.push(rec);
    }
    Ok(BeltramiSeries {
        geometry: *geometry,
        parameters: m,
        order,
        construction,
        coeffs,
        receipts,
        harmonic_seed: seed.fields.iter().all(is_constant),
    })
}

/// `½ Σ_{J+K=I} [φ_J, φ_K]` over the stored coefficients, without truncation.
pub fn bracket_sum(series: &BeltramiSeries, idx: &MultiIndex) -> Result<FourierForm> {
    let mut acc = FourierForm::zero(series.dim(), crate::exterior::ValueKind::Tangent);
    for (j, l) in idx.splits() {
        if let (Some(a), Some(b)) = (series.get(&j), series.get(&l)) {
            acc = acc.add(&Form::bracket(a, b)?)?;
        }
    }
    Ok(half(&acc, 1.0))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct IntegrabilityRow {
    pub order: usize,
    /// Largest `‖∂̄φ_I − ½Σ[φ_J,φ_K]‖` over `|I| = order`.
    pub residual: f64,
    /// `Σ_{|I|=order} ‖φ_I‖_{L²}`
    pub norm: f64,
    /// False for the formal order `N + 1`, which the truncation cannot satisfy.
    pub judged: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct IntegrabilityReport {
    pub rows: Vec<IntegrabilityRow>,
    /// Largest `‖∂̄ Σ_{J+K=I} [φ_J,φ_K]‖` over `|I| = N + 1`.
    pub next_order_closedness: f64,
}

impl IntegrabilityReport {
    pub fn max_judged(&self) -> f64 {
        self.rows.iter().filter(|r| r.judged).map(|r| r.residual).fold(0.0, f64::max)
    }
}

pub fn integrability_residual(series: &BeltramiSeries) -> Result<IntegrabilityReport> {
    let m = series.parameters;
    let mut rows = Vec::with_capacity(series.order + 1);
    let mut closed = 0.0f64;
    for k in 1..=series.order + 1 {
        let level = MultiIndex::of_degree(m, k);
        let per: Vec<Result<(f64, f64, f64)>> = level
            .par_iter()
            .map(|idx| {
                let rhs = bracket_sum(series, idx)?;
                let (lhs, norm) = match series.get(idx) {
                    Some(phi) => (dbar(phi), l2(phi)),
                    None => (FourierForm::zero(series.dim(), rhs.kind()), 0.0),
                };
                let res = l2(&lhs.sub(&rhs)?);
                let clo = if k == series.order + 1 { l2(&dbar(&rhs)) } else { 0.0 };
                Ok((res, norm, clo))
            })
            .collect();
        let mut row = IntegrabilityRow {
            order: k,
            residual: 0.0,
            norm: 0.0,
            judged: k <= series.order,
        };
        for r in per {
            let (res, norm, clo) = r?;
            row.residual = row.residual.max(res);
            row.norm += norm;
            closed = closed.max(clo);
        }
        rows.push(row);
    }
    Ok(IntegrabilityReport {
        rows,
        next_order_closedness: closed,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SideConditionRow {
    pub index: MultiIndex,
    pub order: usize,
    /// `‖∂̄*φ_I‖`
    pub dbar_star: f64,
    /// `‖φ_I⌟Ω₀ − ∂∂*G(φ_I⌟Ω₀)‖`
    pub del_exact_defect: f64,
    /// `‖H(φ_I⌟Ω₀)‖`
    pub harmonic: f64,
    /// Order-one rows apply only to harmonic seeds, and then only through
    /// `dbar_star`; a constant `φ⌟Ω₀` is harmonic rather than `∂`-exact.
    pub applicable: bool,
}

pub fn side_conditions_check(series: &BeltramiSeries) -> Result<Vec<SideConditionRow>> {
    let omega = omega0(series.dim());
    series
        .coeffs
        .par_iter()
        .map(|(idx, phi)| {
            let top = Form::contract(phi, &omega)?;
            let order = idx.degree();
            Ok(SideConditionRow {
                index: idx.clone(),
                order,
                dbar_star: l2(&dbar_star(phi)),
                del_exact_defect: l2(&top.sub(&project_del_exact(&top))?),
                harmonic: l2(&harmonic(&top)),
                applicable: order >= 2 || series.harmonic_seed,
            })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AgreementRow {
    pub order: usize,
    /// Largest `‖φ_I^{contraction} − φ_I^{bracket}‖` over `|I| = order`.
    pub difference: f64,
}

pub fn two_path_agreement(a: &BeltramiSeries, b: &BeltramiSeries) -> Result<Vec<AgreementRow>> {
    if a.parameters != b.parameters || a.dim() != b.dim() {
        return Err(Error::Contract("series built from different seeds".into()));
    }
    let order = a.order.min(b.order);
    let mut rows: Vec<AgreementRow> = (1..=order).map(|k| AgreementRow { order: k, difference: 0.0 }).collect();
    for (idx, fa) in &a.coeffs {
        let k = idx.degree();
        if k > order {
            continue;
        }
        let fb = b.get(idx).ok_or_else(|| Error::Contract(format!("missing coefficient {idx}")))?;
        let d = l2(&fa.sub(fb)?);
        rows[k - 1].difference = rows[k - 1].difference.max(d);
    }
    Ok(rows)
}
