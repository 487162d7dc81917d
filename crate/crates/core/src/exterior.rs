//! Bigraded exterior algebra of `(p,q)`-forms with values in a trivial bundle.
//!
//! A [`Form`] is a finite sum of terms `c · dz^I ∧ dz̄^J ⊗ e_slot`, where the
//! holomorphic index set `I` always precedes the antiholomorphic set `J` and
//! both are kept strictly increasing (stored as bitmasks). Signs produced by
//! reordering are absorbed into the coefficients.
//!
//! The algebra is generic over a [`Coefficient`] ring that knows how to take
//! the holomorphic and antiholomorphic partial derivatives of its elements.
//! The torus module instantiates it with trigonometric polynomials, the
//! operator-calculus module with exact Gaussian-rational polynomials.
//!
//! Conventions:
//! * `∂̄(c dz^I∧dz̄^J) = Σ_j ∂c/∂z̄^j dz̄^j ∧ dz^I ∧ dz̄^J`, reordered.
//! * `(η ⊗ ∂_i) ⌟ ω = η ∧ ι_{∂_i} ω` for tangent-valued `(0,s)`-forms.
//! * `[φ,ψ] = Σ_{i,j} (φ^i ∧ ∂_i ψ^j − (−1)^{pq} ψ^i ∧ ∂_i φ^j) ⊗ ∂_j`.
//! * `L_φ = (−1)^k D∘i_φ + i_φ∘D` for a first-order operator `D`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest complex dimension supported by the fixed-size index types.
pub const MAX_DIM: usize = 4;

/// A commutative coefficient ring with holomorphic and antiholomorphic
/// partial derivatives.
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    type Scalar: Clone + fmt::Debug;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, other: &Self);
    fn sub_assign(&mut self, other: &Self);
    fn scale(&self, s: &Self::Scalar) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// `∂/∂z^j`
    fn d_holo(&self, j: usize) -> Self;
    /// `∂/∂z̄^j`
    fn d_anti(&self, j: usize) -> Self;
    /// The scalar `num/den`.
    fn ratio(num: i64, den: i64) -> Self::Scalar;

    fn neg(&self) -> Self {
        self.scale(&Self::ratio(-1, 1))
    }
}

/// What the form takes values in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValueKind {
    Scalar,
    /// `T^{1,0}`, frame `∂/∂z^i`.
    Tangent,
    /// `Λ^{1,0}`, frame `dz^i`.
    DualTangent,
    /// A trivialized rank-`r` bundle with frame `e_α`.
    Bundle(u8),
}

impl ValueKind {
    pub fn slots(self, dim: usize) -> usize {
        match self {
            ValueKind::Scalar => 1,
            ValueKind::Tangent | ValueKind::DualTangent => dim,
            ValueKind::Bundle(r) => r as usize,
        }
    }
}

/// Basis element `dz^I ∧ dz̄^J ⊗ e_slot`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Basis {
    pub holo: u8,
    pub anti: u8,
    pub slot: u8,
}

impl Basis {
    pub fn new(holo: &[usize], anti: &[usize], slot: usize) -> Self {
        Basis {
            holo: mask_of(holo),
            anti: mask_of(anti),
            slot: slot as u8,
        }
    }

    pub fn p(&self) -> usize {
        self.holo.count_ones() as usize
    }

    pub fn q(&self) -> usize {
        self.anti.count_ones() as usize
    }

    pub fn holo_indices(&self) -> Vec<usize> {
        indices_of(self.holo)
    }

    pub fn anti_indices(&self) -> Vec<usize> {
        indices_of(self.anti)
    }
}

pub fn mask_of(indices: &[usize]) -> u8 {
    indices.iter().fold(0u8, |m, &i| m | (1 << i))
}

pub fn indices_of(mask: u8) -> Vec<usize> {
    (0..8).filter(|i| mask & (1 << i) != 0).collect()
}

/// All `k`-element subsets of `{0,…,n−1}` as masks, in increasing order.
pub fn subsets(n: usize, k: usize) -> Vec<u8> {
    (0u16..(1 << n))
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| m as u8)
        .collect()
}

/// Every basis element of bidegree `(p,q)` for the given value kind.
pub fn basis_of(n: usize, p: usize, q: usize, kind: ValueKind) -> Vec<Basis> {
    let mut out = Vec::new();
    for holo in subsets(n, p) {
        for anti in subsets(n, q) {
            for slot in 0..kind.slots(n) {
                out.push(Basis {
                    holo,
                    anti,
                    slot: slot as u8,
                });
            }
        }
    }
    out.sort();
    out
}

/// Number of elements of `mask` strictly below `i`.
#[inline]
pub fn below(mask: u8, i: usize) -> u32 {
    (mask & ((1u16 << i) - 1) as u8).count_ones()
}

/// Sign of the permutation sorting the concatenation `a ++ b`, or `None`
/// when the sets intersect.
#[inline]
pub fn merge_sign(a: u8, b: u8) -> Option<bool> {
    if a & b != 0 {
        return None;
    }
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let y = rest.trailing_zeros();
        inversions += (a >> (y + 1)).count_ones();
        rest &= rest - 1;
    }
    Some(inversions % 2 == 1)
}

/// `(dz^{I1}∧dz̄^{J1}) ∧ (dz^{I2}∧dz̄^{J2})` as `(I, J, negative)`.
#[inline]
pub fn wedge_masks(h1: u8, a1: u8, h2: u8, a2: u8) -> Option<(u8, u8, bool)> {
    let s_h = merge_sign(h1, h2)?;
    let s_a = merge_sign(a1, a2)?;
    let cross = (a1.count_ones() * h2.count_ones()) % 2 == 1;
    Some((h1 | h2, a1 | a2, s_h ^ s_a ^ cross))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Form<C> {
    dim: usize,
    kind: ValueKind,
    terms: BTreeMap<Basis, C>,
}

impl<C: Coefficient> Form<C> {
    pub fn zero(dim: usize, kind: ValueKind) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "dimension {dim} out of range");
        Form {
            dim,
            kind,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(dim: usize, kind: ValueKind, terms: impl IntoIterator<Item = (Basis, C)>) -> Self {
        let mut f = Self::zero(dim, kind);
        for (b, c) in terms {
            f.accumulate(b, &c, false);
        }
        f
    }

    /// The constant top form `dz^1 ∧ ⋯ ∧ dz^n` times `c`.
    pub fn top_holomorphic(dim: usize, c: C) -> Self {
        let all: Vec<usize> = (0..dim).collect();
        Self::from_terms(dim, ValueKind::Scalar, [(Basis::new(&all, &[], 0), c)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> ValueKind {
        self.kind
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Basis, &C)> {
        self.terms.iter()
    }

    pub fn terms_mut(&mut self) -> impl Iterator<Item = (&Basis, &mut C)> {
        self.terms.iter_mut()
    }

    pub fn get(&self, b: &Basis) -> Option<&C> {
        self.terms.get(b)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.is_zero())
    }

    /// Adds (or subtracts) `c` into the coefficient of `b`, dropping zeros.
    pub fn accumulate(&mut self, b: Basis, c: &C, negative: bool) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(b).or_insert_with(C::zero);
        if negative {
            entry.sub_assign(c);
        } else {
            entry.add_assign(c);
        }
        if entry.is_zero() {
            self.terms.remove(&b);
        }
    }

    pub fn retain(&mut self, f: impl FnMut(&Basis, &mut C) -> bool) {
        self.terms.retain(f);
    }

    pub fn bidegrees(&self) -> BTreeSet<(usize, usize)> {
        self.terms.keys().map(|b| (b.p(), b.q())).collect()
    }

    /// The bidegree when the form is homogeneous and nonzero.
    pub fn bidegree(&self) -> Option<(usize, usize)> {
        let d = self.bidegrees();
        if d.len() == 1 {
            d.into_iter().next()
        } else {
            None
        }
    }

    pub fn part(&self, p: usize, q: usize) -> Self {
        self.filter(|b| b.p() == p && b.q() == q)
    }

    pub fn filter(&self, keep: impl Fn(&Basis) -> bool) -> Self {
        Form {
            dim: self.dim,
            kind: self.kind,
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| keep(b))
                .map(|(b, c)| (*b, c.clone()))
                .collect(),
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&Basis, &C) -> C) -> Self {
        let mut out = Self::zero(self.dim, self.kind);
        for (b, c) in &self.terms {
            out.accumulate(*b, &f(b, c), false);
        }
        out
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        if self.kind != other.kind && !self.is_empty() && !other.is_empty() {
            return Err(Error::Contract(format!(
                "cannot add {:?}-valued and {:?}-valued forms",
                self.kind, other.kind
            )));
        }
        Ok(())
    }

    fn combine(&self, other: &Self, negative: bool) -> Result<Self> {
        self.check_same(other)?;
        let kind = if self.is_empty() { other.kind } else { self.kind };
        let mut out = Form {
            dim: self.dim,
            kind,
            terms: self.terms.clone(),
        };
        for (b, c) in &other.terms {
            out.accumulate(*b, c, negative);
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, true)
    }

    pub fn scale(&self, s: &C::Scalar) -> Self {
        self.map_coeffs(|_, c| c.scale(s))
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|_, c| c.neg())
    }

    /// Multiplies every coefficient by the function `f`.
    pub fn mul_coeff(&self, f: &C) -> Self {
        self.map_coeffs(|_, c| c.mul(f))
    }

    /// Reinterprets the value kind, keeping all terms.
    pub fn with_kind(mut self, kind: ValueKind) -> Self {
        self.kind = kind;
        self
    }

    /// The scalar form in value slot `slot`.
    pub fn component(&self, slot: usize) -> Self {
        let mut out = Self::zero(self.dim, ValueKind::Scalar);
        for (b, c) in &self.terms {
            if b.slot as usize == slot {
                out.terms.insert(Basis { slot: 0, ..*b }, c.clone());
            }
        }
        out
    }

    /// Builds a valued form from its scalar components.
    pub fn assemble(dim: usize, kind: ValueKind, components: &[Self]) -> Self {
        let mut out = Self::zero(dim, kind);
        for (slot, comp) in components.iter().enumerate() {
            for (b, c) in &comp.terms {
                out.accumulate(
                    Basis {
                        slot: slot as u8,
                        ..*b
                    },
                    c,
                    false,
                );
            }
        }
        out
    }

    /// Exterior product; at most one factor may carry non-scalar values.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        let (kind, slot_from_left) = match (self.kind, other.kind) {
            (ValueKind::Scalar, k) => (k, false),
            (k, ValueKind::Scalar) => (k, true),
            (a, b) => {
                return Err(Error::Contract(format!(
                    "wedge of two valued forms ({a:?} ∧ {b:?})"
                )))
            }
        };
        let mut out = Self::zero(self.dim, kind);
        for (b1, c1) in &self.terms {
            for (b2, c2) in &other.terms {
                if let Some((holo, anti, negative)) = wedge_masks(b1.holo, b1.anti, b2.holo, b2.anti) {
                    let slot = if slot_from_left { b1.slot } else { b2.slot };
                    out.accumulate(Basis { holo, anti, slot }, &c1.mul(c2), negative);
                }
            }
        }
        Ok(out)
    }

    /// `∂̄` acting componentwise in the trivialized frame.
    pub fn d_anti(&self) -> Self {
        let mut out = Self::zero(self.dim, self.kind);
        for (b, c) in &self.terms {
            for j in 0..self.dim {
                if b.anti & (1 << j) != 0 {
                    continue;
                }
                let dc = c.d_anti(j);
                if dc.is_zero() {
                    continue;
                }
                let negative = (b.p() as u32 + below(b.anti, j)) % 2 == 1;
                out.accumulate(
                    Basis {
                        anti: b.anti | (1 << j),
                        ..*b
                    },
                    &dc,
                    negative,
                );
            }
        }
        out
    }

    /// `∂` acting componentwise in the trivialized frame.
    pub fn d_holo(&self) -> Self {
        let mut out = Self::zero(self.dim, self.kind);
        for (b, c) in &self.terms {
            for j in 0..self.dim {
                if b.holo & (1 << j) != 0 {
                    continue;
                }
                let dc = c.d_holo(j);
                if dc.is_zero() {
                    continue;
                }
                let negative = below(b.holo, j) % 2 == 1;
                out.accumulate(
                    Basis {
                        holo: b.holo | (1 << j),
                        ..*b
                    },
                    &dc,
                    negative,
                );
            }
        }
        out
    }

    pub fn d(&self) -> Self {
        let mut out = self.d_holo();
        for (b, c) in &self.d_anti().terms {
            out.accumulate(*b, c, false);
        }
        out
    }

    /// Coefficientwise `∂/∂z^i`, leaving the frame untouched.
    pub fn partial_holo(&self, i: usize) -> Self {
        self.map_coeffs(|_, c| c.d_holo(i))
    }

    /// Interior product with the coordinate field `∂/∂z^i`.
    pub fn interior(&self, i: usize) -> Self {
        let mut out = Self::zero(self.dim, self.kind);
        for (b, c) in &self.terms {
            if b.holo & (1 << i) == 0 {
                continue;
            }
            let negative = below(b.holo, i) % 2 == 1;
            out.accumulate(
                Basis {
                    holo: b.holo & !(1 << i),
                    ..*b
                },
                c,
                negative,
            );
        }
        out
    }

    /// Splits a tangent-valued form by antiholomorphic degree.
    pub fn anti_degree_parts(&self) -> BTreeMap<usize, Self> {
        let mut parts: BTreeMap<usize, Self> = BTreeMap::new();
        for (b, c) in &self.terms {
            parts
                .entry(b.q())
                .or_insert_with(|| Self::zero(self.dim, self.kind))
                .terms
                .insert(*b, c.clone());
        }
        parts
    }

    fn require_beltrami_like(&self, what: &str) -> Result<()> {
        if self.kind != ValueKind::Tangent && !self.is_empty() {
            return Err(Error::Contract(format!("{what} must be T^(1,0)-valued, got {:?}", self.kind)));
        }
        if self.terms.keys().any(|b| b.holo != 0) {
            return Err(Error::Contract(format!("{what} must be a (0,s)-form")));
        }
        Ok(())
    }

    /// `i_φ ω` for a tangent-valued `(0,s)`-form `φ`.
    pub fn contract(phi: &Self, omega: &Self) -> Result<Self> {
        phi.require_beltrami_like("contracting field")?;
        if phi.dim != omega.dim {
            return Err(Error::DimMismatch(phi.dim, omega.dim));
        }
        let mut out = Self::zero(omega.dim, omega.kind);
        for i in 0..phi.dim {
            let coeff = phi.component(i);
            if coeff.is_empty() {
                continue;
            }
            let inner = omega.interior(i);
            if inner.is_empty() {
                continue;
            }
            let piece = coeff.wedge(&inner)?;
            for (b, c) in &piece.terms {
                out.accumulate(*b, c, false);
            }
        }
        Ok(out)
    }

    /// The bracket of tangent-valued `(0,p)` and `(0,q)` forms.
    pub fn bracket(phi: &Self, psi: &Self) -> Result<Self> {
        phi.require_beltrami_like("left bracket argument")?;
        psi.require_beltrami_like("right bracket argument")?;
        if phi.dim != psi.dim {
            return Err(Error::DimMismatch(phi.dim, psi.dim));
        }
        let n = phi.dim;
        let mut out = Self::zero(n, ValueKind::Tangent);
        for (p, phi_p) in phi.anti_degree_parts() {
            for (q, psi_q) in psi.anti_degree_parts() {
                let swap_negative = (p * q) % 2 == 1;
                let phi_c: Vec<Self> = (0..n).map(|i| phi_p.component(i)).collect();
                let psi_c: Vec<Self> = (0..n).map(|i| psi_q.component(i)).collect();
                for j in 0..n {
                    let mut acc = Self::zero(n, ValueKind::Scalar);
                    for i in 0..n {
                        if !phi_c[i].is_empty() {
                            let t = phi_c[i].wedge(&psi_c[j].partial_holo(i))?;
                            acc = acc.add(&t)?;
                        }
                        if !psi_c[i].is_empty() {
                            let t = psi_c[i].wedge(&phi_c[j].partial_holo(i))?;
                            acc = if swap_negative { acc.add(&t)? } else { acc.sub(&t)? };
                        }
                    }
                    for (b, c) in &acc.terms {
                        out.accumulate(Basis { slot: j as u8, ..*b }, c, false);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `L_φ = (−1)^k D∘i_φ + i_φ∘D`, with `k` the antiholomorphic degree of
    /// `φ` and `D` any first-order operator supplied by the caller.
    pub fn lie_with<F>(phi: &Self, omega: &Self, op: F) -> Result<Self>
    where
        F: Fn(&Self) -> Result<Self>,
    {
        phi.require_beltrami_like("Lie derivative field")?;
        let mut out = Self::zero(omega.dim, omega.kind);
        for (k, phi_k) in phi.anti_degree_parts() {
            let first = op(&Self::contract(&phi_k, omega)?)?;
            let second = Self::contract(&phi_k, &op(omega)?)?;
            let piece = if k % 2 == 1 {
                second.sub(&first)?
            } else {
                second.add(&first)?
            };
            out = out.add(&piece)?;
        }
        Ok(out)
    }

    /// `e^{±i_φ} ω = Σ_k (±1)^k/k! i_φ^k ω`; the sum is finite.
    pub fn exp_contract(phi: &Self, omega: &Self, negative: bool) -> Result<Self> {
        let mut total = omega.clone();
        let mut term = omega.clone();
        let mut k = 1i64;
        loop {
            term = Self::contract(phi, &term)?;
            if term.is_empty() {
                break;
            }
            let s = C::ratio(if negative { -1 } else { 1 }, k);
            term = term.scale(&s);
            total = total.add(&term)?;
            k += 1;
            if k > 4 * MAX_DIM as i64 + 2 {
                return Err(Error::Contract("contraction series failed to terminate".into()));
            }
        }
        Ok(total)
    }

    /// `α ↦ α ⌟ (dz^1∧⋯∧dz^n)` for tangent-valued `(0,q)` forms.
    pub fn to_top(alpha: &Self) -> Result<Self> {
        let omega0 = Self::top_holomorphic(alpha.dim, C::one());
        Self::contract(alpha, &omega0)
    }

    /// Inverse of [`Form::to_top`]: contraction with `∂_1∧⋯∧∂_n`, signed so
    /// that `from_top(to_top(α)) = α`.
    pub fn from_top(psi: &Self) -> Result<Self> {
        let n = psi.dim;
        let full: u8 = ((1u16 << n) - 1) as u8;
        if psi.kind != ValueKind::Scalar && !psi.is_empty() {
            return Err(Error::Contract("dual contraction needs a scalar form".into()));
        }
        let mut out = Self::zero(n, ValueKind::Tangent);
        for (b, c) in &psi.terms {
            if b.p() != n - 1 {
                return Err(Error::Contract(format!(
                    "dual contraction needs an (n-1,q) form, found p = {}",
                    b.p()
                )));
            }
            let i = (full & !b.holo).trailing_zeros() as usize;
            let negative = (i + b.q() * (n - 1)) % 2 == 1;
            out.accumulate(
                Basis {
                    holo: 0,
                    anti: b.anti,
                    slot: i as u8,
                },
                c,
                negative,
            );
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_sign_counts_inversions() {
        // {1} ++ {0} needs one swap
        assert_eq!(merge_sign(0b10, 0b01), Some(true));
        assert_eq!(merge_sign(0b01, 0b10), Some(false));
        assert_eq!(merge_sign(0b01, 0b01), None);
        // {1,2} ++ {0}: two swaps
        assert_eq!(merge_sign(0b110, 0b001), Some(false));
        // {2} ++ {0,1}: two swaps
        assert_eq!(merge_sign(0b100, 0b011), Some(false));
        // {0,2} ++ {1}: one swap
        assert_eq!(merge_sign(0b101, 0b010), Some(true));
    }

    #[test]
    fn wedge_moves_antiholomorphic_past_holomorphic() {
        // dz̄^0 ∧ dz^1 = − dz^1 ∧ dz̄^0
        assert_eq!(wedge_masks(0, 0b1, 0b10, 0), Some((0b10, 0b1, true)));
        // dz^0 ∧ dz̄^1 stays
        assert_eq!(wedge_masks(0b1, 0, 0, 0b10), Some((0b1, 0b10, false)));
    }

    #[test]
    fn below_counts() {
        assert_eq!(below(0b1011, 3), 2);
        assert_eq!(below(0b1011, 0), 0);
        assert_eq!(below(0xff, 7), 7);
    }
}
