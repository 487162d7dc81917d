use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::geometry::{Mode, TorusGeometry};
use super::trig::TrigPoly;
use crate::error::{Error, Result};
use crate::exterior::{Basis, Coefficient, Form, ValueKind, MAX_DIM};

/// A band-limited form on the flat torus with Fourier coefficients.
pub type FourierForm = Form<TrigPoly>;

/// What a product operation dropped when cutting back to the band limit.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TruncationReceipt {
    /// Squared L² norm of the discarded modes.
    pub discarded_mass: f64,
    pub cap_used: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl TruncationReceipt {
    pub fn exact(cap: usize) -> Self {
        TruncationReceipt {
            discarded_mass: 0.0,
            cap_used: cap,
            warnings: Vec::new(),
        }
    }

    pub fn merge(&mut self, other: &TruncationReceipt) {
        self.discarded_mass += other.discarded_mass;
        self.cap_used = self.cap_used.max(other.cap_used);
        self.warnings.extend(other.warnings.iter().cloned());
    }
}

/// Frame weight `|dz^I ∧ dz̄^J ⊗ e|²` under `⟨dz,dz⟩ = 2`, `⟨∂_z,∂_z⟩ = ½`.
pub fn frame_weight(b: &Basis, kind: ValueKind) -> f64 {
    let base = (1u64 << (b.p() + b.q())) as f64;
    match kind {
        ValueKind::Tangent => base * 0.5,
        ValueKind::DualTangent => base * 2.0,
        ValueKind::Scalar | ValueKind::Bundle(_) => base,
    }
}

/// L² inner product, linear in the first slot.
pub fn inner(a: &FourierForm, b: &FourierForm) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for (basis, ca) in a.terms() {
        if let Some(cb) = b.get(basis) {
            s += ca.dot(cb) * frame_weight(basis, a.kind());
        }
    }
    s
}

pub fn norm_sq(f: &FourierForm) -> f64 {
    f.terms()
        .map(|(b, c)| c.norm_sq() * frame_weight(b, f.kind()))
        .fold(0.0, |a, v| a + v)
}

pub fn l2(f: &FourierForm) -> f64 {
    norm_sq(f).sqrt()
}

/// L² distance, the usual residual measure.
pub fn distance(a: &FourierForm, b: &FourierForm) -> Result<f64> {
    Ok(l2(&a.sub(b)?))
}

/// Largest `|m|_∞` over all coefficients.
pub fn band(f: &FourierForm) -> usize {
    f.terms().map(|(_, c)| c.band()).max().unwrap_or(0)
}

pub fn truncate(f: &FourierForm, k: usize) -> (FourierForm, TruncationReceipt) {
    let mut lost = 0.0;
    let mut out = FourierForm::zero(f.dim(), f.kind());
    for (b, c) in f.terms() {
        let (kept, l) = c.truncate(k);
        lost += l * frame_weight(b, f.kind());
        out.accumulate(*b, &kept, false);
    }
    (
        out,
        TruncationReceipt {
            discarded_mass: lost,
            cap_used: k,
            warnings: Vec::new(),
        },
    )
}

/// `c · e_m · dz^I ∧ dz̄^J ⊗ e_slot` with 0-based indices.
pub fn monomial_form(
    n: usize,
    kind: ValueKind,
    holo: &[usize],
    anti: &[usize],
    slot: usize,
    mode: Mode,
    c: Complex64,
) -> FourierForm {
    FourierForm::from_terms(n, kind, [(Basis::new(holo, anti, slot), TrigPoly::monomial(mode, c))])
}

pub fn is_tangent_01(f: &FourierForm) -> bool {
    f.is_empty() || (f.kind() == ValueKind::Tangent && f.terms().all(|(b, _)| b.holo == 0 && b.q() == 1))
}

/// Exterior product followed by truncation to the band limit.
pub fn wedge(g: &TorusGeometry, a: &FourierForm, b: &FourierForm) -> Result<(FourierForm, TruncationReceipt)> {
    Ok(truncate(&a.wedge(b)?, g.k))
}

/// `i_φ ω`, truncated.
pub fn contract(g: &TorusGeometry, phi: &FourierForm, omega: &FourierForm) -> Result<(FourierForm, TruncationReceipt)> {
    let (out, mut r) = truncate(&Form::contract(phi, omega)?, g.k);
    if !omega.is_empty() && omega.terms().all(|(b, _)| b.p() == 0) {
        r.warnings.push("contraction into a form without holomorphic degree".into());
    }
    Ok((out, r))
}

pub fn bracket(g: &TorusGeometry, phi: &FourierForm, psi: &FourierForm) -> Result<(FourierForm, TruncationReceipt)> {
    Ok(truncate(&Form::bracket(phi, psi)?, g.k))
}

/// Which first-order operator a Lie derivative is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LiePart {
    Full,
    Holo,
    Antiholo,
}

pub fn lie_exact(phi: &FourierForm, omega: &FourierForm, part: LiePart) -> Result<FourierForm> {
    match part {
        LiePart::Full => Form::lie_with(phi, omega, |f| Ok(f.d())),
        LiePart::Holo => Form::lie_with(phi, omega, |f| Ok(f.d_holo())),
        LiePart::Antiholo => Form::lie_with(phi, omega, |f| Ok(f.d_anti())),
    }
}

pub fn lie_derivative(
    g: &TorusGeometry,
    phi: &FourierForm,
    omega: &FourierForm,
    part: LiePart,
) -> Result<(FourierForm, TruncationReceipt)> {
    Ok(truncate(&lie_exact(phi, omega, part)?, g.k))
}

/// `e^{i_φ} ω` for a tangent-valued `(0,1)` form `φ`, truncated.
pub fn exp_contract(g: &TorusGeometry, phi: &FourierForm, omega: &FourierForm) -> Result<(FourierForm, TruncationReceipt)> {
    if !is_tangent_01(phi) {
        return Err(Error::Contract("exponential contraction needs a tangent-valued (0,1) form".into()));
    }
    Ok(truncate(&Form::exp_contract(phi, omega, false)?, g.k))
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    #[serde(rename = "I")]
    i: Vec<usize>,
    #[serde(rename = "J")]
    j: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tangent: Option<usize>,
    mode: [Vec<i16>; 2],
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct FormJson {
    n: usize,
    bidegree: Option<[usize; 2]>,
    value_kind: ValueKind,
    entries: Vec<EntryJson>,
}

fn to_json_struct(f: &FourierForm) -> FormJson {
    let n = f.dim();
    let valued = f.kind() != ValueKind::Scalar;
    let mut entries = Vec::new();
    for (b, c) in f.terms() {
        for (m, v) in c.modes() {
            entries.push(EntryJson {
                i: b.holo_indices().iter().map(|x| x + 1).collect(),
                j: b.anti_indices().iter().map(|x| x + 1).collect(),
                tangent: valued.then_some(b.slot as usize + 1),
                mode: [m.a[..n].to_vec(), m.b[..n].to_vec()],
                re: v.re,
                im: v.im,
            });
        }
    }
    FormJson {
        n,
        bidegree: f.bidegree().map(|(p, q)| [p, q]),
        value_kind: f.kind(),
        entries,
    }
}

/// The documented JSON layout; indices are 1-based.
pub fn to_json(f: &FourierForm) -> serde_json::Value {
    serde_json::to_value(to_json_struct(f)).expect("form serializes")
}

pub fn to_json_string(f: &FourierForm) -> String {
    serde_json::to_string_pretty(&to_json_struct(f)).expect("form serializes")
}

pub fn from_json_str(s: &str) -> Result<FourierForm> {
    let v: FormJson = serde_json::from_str(s)?;
    from_json_struct(v)
}

pub fn from_json(v: &serde_json::Value) -> Result<FourierForm> {
    from_json_struct(serde_json::from_value(v.clone())?)
}

fn from_json_struct(v: FormJson) -> Result<FourierForm> {
    let n = v.n;
    if n == 0 || n > MAX_DIM {
        return Err(Error::Parse(format!("dimension {n} out of range")));
    }
    let slots = v.value_kind.slots(n);
    let mut f = FourierForm::zero(n, v.value_kind);
    for (k, e) in v.entries.iter().enumerate() {
        let idx = |list: &[usize]| -> Result<Vec<usize>> {
            let mut out = Vec::with_capacity(list.len());
            for &x in list {
                if x == 0 || x > n {
                    return Err(Error::Parse(format!("entry {k}: index {x} outside 1..={n}")));
                }
                if out.last().is_some_and(|&p| p >= x - 1) {
                    return Err(Error::Parse(format!("entry {k}: index sets must be strictly increasing")));
                }
                out.push(x - 1);
            }
            Ok(out)
        };
        let holo = idx(&e.i)?;
        let anti = idx(&e.j)?;
        if let Some([p, q]) = v.bidegree {
            if holo.len() != p || anti.len() != q {
                return Err(Error::Parse(format!("entry {k}: does not match bidegree ({p},{q})")));
            }
        }
        let slot = match (v.value_kind, e.tangent) {
            (ValueKind::Scalar, None) => 0,
            (ValueKind::Scalar, Some(_)) => {
                return Err(Error::Parse(format!("entry {k}: scalar forms carry no tangent index")))
            }
            (_, Some(t)) if t >= 1 && t <= slots => t - 1,
            _ => return Err(Error::Parse(format!("entry {k}: missing or invalid tangent index"))),
        };
        if e.mode[0].len() != n || e.mode[1].len() != n {
            return Err(Error::Parse(format!("entry {k}: mode vectors must have length {n}")));
        }
        if !e.re.is_finite() || !e.im.is_finite() {
            return Err(Error::Parse(format!("entry {k}: non-finite amplitude")));
        }
        let mode = Mode::new(&e.mode[0], &e.mode[1]);
        f.accumulate(
            Basis::new(&holo, &anti, slot),
            &TrigPoly::monomial(mode, Complex64::new(e.re, e.im)),
            false,
        );
    }
    Ok(f)
}

/// Restricts to the terms of one bidegree.
pub fn homogeneous(f: &FourierForm, p: usize, q: usize) -> FourierForm {
    f.part(p, q)
}

/// Multiplies by a complex scalar.
pub fn scale(f: &FourierForm, s: Complex64) -> FourierForm {
    f.scale(&s)
}

/// Constant-coefficient `c · dz^I ∧ dz̄^J ⊗ e_slot`.
pub fn constant_form(n: usize, kind: ValueKind, holo: &[usize], anti: &[usize], slot: usize, c: Complex64) -> FourierForm {
    monomial_form(n, kind, holo, anti, slot, Mode::ZERO, c)
}

/// `Ω₀ = dz¹ ∧ ⋯ ∧ dzⁿ`.
pub fn omega0(n: usize) -> FourierForm {
    FourierForm::top_holomorphic(n, TrigPoly::one())
}
