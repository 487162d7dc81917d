//! Seed fields for the Beltrami series.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{basis_of, Basis, Form, ValueKind};
use crate::torus::form::{constant_form, is_tangent_01, l2, FourierForm};
use crate::torus::hodge::{dbar, del};
use crate::torus::norms::c1_norm;
use crate::torus::random::{modes_in_band, random_complex};
use crate::torus::{Mode, TorusGeometry, TrigPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeedKind {
    /// Constant coefficients, hence harmonic; every bracket vanishes.
    HarmonicConstant,
    /// Constant part plus `∂̄f` with `Σ_j ∂_j f^j = 0`.
    DivergenceFreeSynthetic,
    /// `h(z₁,z̄₁) dz̄¹ ⊗ ∂₁`: integrable with all brackets zero, but `φ⌟Ω₀`
    /// is not `∂`-closed. Drives the Kähler cascade.
    Shear,
    Explicit,
}

impl SeedKind {
    /// Whether the seed must satisfy `∂(φ⌟Ω₀) = 0`.
    pub fn requires_volume_closed(self) -> bool {
        !matches!(self, SeedKind::Shear)
    }
}

#[derive(Clone, Debug)]
pub struct DeformationSeed {
    pub kind: SeedKind,
    pub fields: Vec<FourierForm>,
    /// Factor applied to the raw draw to reach the requested norm.
    pub scale: f64,
}

#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SeedResiduals {
    /// `‖∂̄φ‖`
    pub dbar: f64,
    /// `‖∂(φ⌟Ω₀)‖`
    pub volume: f64,
}

pub const DBAR_TOL: f64 = 1e-12;
pub const VOLUME_TOL: f64 = 1e-10;

pub fn seed_residuals(phi: &FourierForm) -> Result<SeedResiduals> {
    Ok(SeedResiduals {
        dbar: l2(&dbar(phi)),
        volume: l2(&del(&Form::to_top(phi)?)),
    })
}

impl DeformationSeed {
    pub fn parameters(&self) -> usize {
        self.fields.len()
    }

    pub fn residuals(&self) -> Result<Vec<SeedResiduals>> {
        self.fields.iter().map(seed_residuals).collect()
    }

    /// Checks the seed invariants, naming the first offending field.
    pub fn validate(&self) -> Result<()> {
        if self.fields.is_empty() {
            return Err(Error::SeedRejected("no seed fields".into()));
        }
        let n = self.fields[0].dim();
        for (i, f) in self.fields.iter().enumerate() {
            if f.dim() != n {
                return Err(Error::DimMismatch(f.dim(), n));
            }
            if !is_tangent_01(f) {
                return Err(Error::SeedRejected(format!("field {} is not a tangent-valued (0,1) form", i + 1)));
            }
            let r = seed_residuals(f)?;
            if r.dbar > DBAR_TOL {
                return Err(Error::SeedRejected(format!("field {}: ‖∂̄φ‖ = {:.3e} exceeds {DBAR_TOL:e}", i + 1, r.dbar)));
            }
            if self.kind.requires_volume_closed() && r.volume > VOLUME_TOL {
                return Err(Error::SeedRejected(format!(
                    "field {}: ‖∂(φ⌟Ω₀)‖ = {:.3e} exceeds {VOLUME_TOL:e}",
                    i + 1,
                    r.volume
                )));
            }
        }
        Ok(())
    }
}

fn rescale(f: &FourierForm, target: f64, oversample: usize) -> Result<(FourierForm, f64)> {
    let c1 = c1_norm(f, oversample);
    if c1 == 0.0 {
        return Err(Error::DegenerateDraw);
    }
    let s = target / c1;
    Ok((f.scale(&Complex64::new(s, 0.0)), s))
}

/// Projects the tangent-valued function `f` onto `Σ_j ∂_j f^j = 0`, mode by mode.
fn project_divergence_free(f: &mut [TrigPoly], n: usize) {
    let modes: Vec<Mode> = {
        let mut all: Vec<Mode> = f.iter().flat_map(|c| c.modes().map(|(m, _)| *m)).collect();
        all.sort();
        all.dedup();
        all
    };
    for m in modes {
        let v: Vec<Complex64> = (0..n).map(|j| m.mu(j)).collect();
        let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum();
        if norm == 0.0 {
            continue;
        }
        let dot: Complex64 = (0..n).map(|j| v[j] * f[j].get(&m)).sum();
        for j in 0..n {
            f[j].add_mode(m, -(dot / norm) * v[j].conj());
        }
    }
}

pub(crate) fn synthetic_field(rng: &mut ChaCha8Rng, n: usize, band: usize) -> Result<FourierForm> {
    let modes: Vec<Mode> = modes_in_band(n, band).into_iter().filter(|m| !m.is_zero()).collect();
    let mut comps: Vec<TrigPoly> = (0..n)
        .map(|_| TrigPoly::from_modes(modes.iter().map(|m| (*m, random_complex(rng)))))
        .collect();
    let before: f64 = comps.iter().map(|c| c.norm_sq()).sum::<f64>().sqrt();
    project_divergence_free(&mut comps, n);
    let after: f64 = comps.iter().map(|c| c.norm_sq()).sum::<f64>().sqrt();
    // exact cancellation leaves rounding noise, so compare against the draw
    if after <= 1e-12 * before {
        return Err(Error::DegenerateDraw);
    }
    let f = FourierForm::from_terms(n, ValueKind::Tangent, comps.into_iter().enumerate().map(|(j, c)| (Basis::new(&[], &[], j), c)));
    let exact = dbar(&f);
    let mut harmonic = FourierForm::zero(n, ValueKind::Tangent);
    for b in basis_of(n, 0, 1, ValueKind::Tangent) {
        harmonic.accumulate(b, &TrigPoly::constant(random_complex(rng) * 0.5), false);
    }
    exact.add(&harmonic)
}

fn shear_field(rng: &mut ChaCha8Rng, n: usize, band: usize) -> Result<FourierForm> {
    let mut h = TrigPoly::default();
    for m in modes_in_band(n, band) {
        if !m.is_zero() && (1..n).all(|j| m.a[j] == 0 && m.b[j] == 0) {
            h.add_mode(m, random_complex(rng));
        }
    }
    // h dz̄¹ ⊗ ∂₁ with h of zero mean is ∂̄ of a function of z₁ alone
    let f = FourierForm::from_terms(n, ValueKind::Tangent, [(Basis::new(&[], &[], 0), h)]);
    let phi = dbar(&f);
    if l2(&phi) == 0.0 {
        return Err(Error::DegenerateDraw);
    }
    Ok(phi)
}

/// Draws `parameters` seed fields and rescales each to C¹ norm `target`.
///
/// `band` bounds the Fourier support of the draw. A draw that projects to
/// zero yields [`Error::DegenerateDraw`]; retry with another `rng_seed`.
pub fn make_seed(
    kind: SeedKind,
    geometry: &TorusGeometry,
    rng_seed: u64,
    target_c1: f64,
    parameters: usize,
    band: usize,
) -> Result<DeformationSeed> {
    geometry.validate()?;
    if !(target_c1.is_finite() && target_c1 > 0.0) {
        return Err(Error::Contract(format!("target C1 norm must be positive, got {target_c1}")));
    }
    if parameters == 0 {
        return Err(Error::Contract("at least one parameter is required".into()));
    }
    if band == 0 || band > geometry.k {
        return Err(Error::Contract(format!("seed band must lie in 1..=K, got {band}")));
    }
    let n = geometry.n;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut fields = Vec::with_capacity(parameters);
    let mut scale = 1.0;
    for i in 0..parameters {
        let raw = match kind {
            SeedKind::HarmonicConstant => {
                let (a, b) = (i % n, (i / n + i) % n);
                let phase = if i == 0 { Complex64::new(1.0, 0.0) } else { Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)) };
                constant_form(n, ValueKind::Tangent, &[], &[a], b, phase)
            }
            SeedKind::DivergenceFreeSynthetic => synthetic_field(&mut rng, n, band)?,
            SeedKind::Shear => shear_field(&mut rng, n, band)?,
            SeedKind::Explicit => return Err(Error::Contract("explicit seeds are built with explicit_seed".into())),
        };
        let (f, s) = rescale(&raw, target_c1, geometry.oversample)?;
        if i == 0 {
            scale = s;
        }
        fields.push(f);
    }
    let seed = DeformationSeed { kind, fields, scale };
    seed.validate()?;
    Ok(seed)
}

/// Wraps user-supplied fields, rejecting any that violate the invariants.
pub fn explicit_seed(fields: Vec<FourierForm>) -> Result<DeformationSeed> {
    let seed = DeformationSeed {
        kind: SeedKind::Explicit,
        fields,
        scale: 1.0,
    };
    seed.validate()?;
    Ok(seed)
}
