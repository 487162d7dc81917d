//! Random polynomial instances: small Gaussian-rational coefficients,
//! numerators and denominators at most 9, monomial degree at most 3.

use num_complex::Complex;
use num_rational::BigRational;
use rand::Rng;

use super::connection::Connection;
use super::poly::{GaussRat, Monomial, PolyCoeff, PolyForm};
use crate::exterior::{basis_of, below, subsets, Basis, Coefficient, Form, ValueKind};

pub const MAX_DEGREE: usize = 3;

pub fn rational<R: Rng>(rng: &mut R) -> BigRational {
    BigRational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=9).into())
}

/// A nonzero Gaussian rational.
pub fn gauss<R: Rng>(rng: &mut R) -> GaussRat {
    loop {
        let c = Complex::new(rational(rng), rational(rng));
        if !num_traits::Zero::is_zero(&c) {
            return c;
        }
    }
}

/// One to three monomials of degree `≤ max_deg` in the allowed variables.
pub fn poly_in<R: Rng>(rng: &mut R, n: usize, max_deg: usize, z_mask: u8, zb_mask: u8) -> PolyCoeff {
    let vars: Vec<(bool, usize)> = (0..n)
        .filter(|j| z_mask & (1 << j) != 0)
        .map(|j| (true, j))
        .chain((0..n).filter(|j| zb_mask & (1 << j) != 0).map(|j| (false, j)))
        .collect();
    let count = rng.gen_range(1..=3);
    let mut p = PolyCoeff::default();
    for _ in 0..count {
        let mut m = Monomial::ONE;
        if !vars.is_empty() {
            let deg = rng.gen_range(0..=max_deg);
            for _ in 0..deg {
                let (holo, j) = vars[rng.gen_range(0..vars.len())];
                if holo {
                    m.z[j] += 1;
                } else {
                    m.zb[j] += 1;
                }
            }
        }
        p.add_term(m, &gauss(rng));
    }
    p
}

pub fn poly<R: Rng>(rng: &mut R, n: usize) -> PolyCoeff {
    let all = ((1u16 << n) - 1) as u8;
    poly_in(rng, n, MAX_DEGREE, all, all)
}

/// Each basis element of bidegree `(p,q)` present with probability ½, at
/// least one present.
pub fn form<R: Rng>(rng: &mut R, n: usize, p: usize, q: usize, kind: ValueKind) -> PolyForm {
    let basis = basis_of(n, p, q, kind);
    let mut f = PolyForm::zero(n, kind);
    while f.is_empty() {
        for b in &basis {
            if rng.gen_bool(0.5) {
                f.accumulate(*b, &poly(rng, n), false);
            }
        }
    }
    f
}

/// A form of random bidegree with `p, q ≤ n`.
pub fn any_form<R: Rng>(rng: &mut R, n: usize, kind: ValueKind) -> PolyForm {
    let p = rng.gen_range(0..=n);
    let q = rng.gen_range(0..=n);
    form(rng, n, p, q, kind)
}

/// A `T^{1,0}`-valued `(0,k)`-form.
pub fn tangent<R: Rng>(rng: &mut R, n: usize, k: usize) -> PolyForm {
    form(rng, n, 0, k, ValueKind::Tangent)
}

/// Scalar or bundle-valued of rank 1 or 2, with a random connection.
pub fn bundle<R: Rng>(rng: &mut R, n: usize) -> (ValueKind, Option<Connection<PolyCoeff>>) {
    if rng.gen_bool(0.25) {
        return (ValueKind::Scalar, None);
    }
    let r = rng.gen_range(1..=2usize);
    let mut a = vec![vec![PolyForm::zero(n, ValueKind::Scalar); r]; r];
    for row in a.iter_mut() {
        for entry in row.iter_mut() {
            if rng.gen_bool(0.6) {
                *entry = form(rng, n, 1, 0, ValueKind::Scalar);
            }
        }
    }
    (ValueKind::Bundle(r as u8), Some(Connection::new(a).expect("(1,0) entries")))
}

/// A ∂̄-closed field with vanishing self-bracket.
///
/// Either constant, or supported on tangent directions `D` with
/// coefficients of `dz̄^a` depending only on `z_k` (`k ∉ D`) and on `z̄_a`.
pub fn integrable_field<R: Rng>(rng: &mut R, n: usize) -> PolyForm {
    if n == 1 || rng.gen_bool(0.2) {
        let mut f = PolyForm::zero(n, ValueKind::Tangent);
        while f.is_empty() {
            for b in basis_of(n, 0, 1, ValueKind::Tangent) {
                if rng.gen_bool(0.5) {
                    f.accumulate(b, &PolyCoeff::constant(gauss(rng)), false);
                }
            }
        }
        return f;
    }
    let full = ((1u16 << n) - 1) as u8;
    let proper: Vec<u8> = (1..n).flat_map(|k| subsets(n, k)).collect();
    let dirs = proper[rng.gen_range(0..proper.len())];
    let mut f = PolyForm::zero(n, ValueKind::Tangent);
    while f.is_empty() {
        for j in (0..n).filter(|j| dirs & (1 << j) != 0) {
            for a in 0..n {
                if rng.gen_bool(0.5) {
                    let c = poly_in(rng, n, MAX_DEGREE, full & !dirs, 1 << a);
                    f.accumulate(Basis::new(&[], &[a], j), &c, false);
                }
            }
        }
    }
    f
}

/// A `(0,1)` field with `Σ_i ∂_i φ^i = 0`, from an antisymmetric potential.
pub fn divergence_free_field<R: Rng>(rng: &mut R, n: usize) -> PolyForm {
    let mut out = PolyForm::zero(n, ValueKind::Tangent);
    while out.is_empty() {
        for i in 0..n {
            for k in (i + 1)..n {
                // potential entry A^{ik} = −A^{ki}, a scalar (0,1)-form
                let a = form(rng, n, 0, 1, ValueKind::Scalar);
                let to_slot = |f: &PolyForm, slot: usize| {
                    Form::from_terms(n, ValueKind::Tangent, f.terms().map(|(b, c)| (Basis { slot: slot as u8, ..*b }, c.clone())))
                };
                // φ^i += ∂_k A^{ik}, φ^k += ∂_i A^{ki} = −∂_i A^{ik}
                out = out.add(&to_slot(&a.partial_holo(k), i)).unwrap();
                out = out.sub(&to_slot(&a.partial_holo(i), k)).unwrap();
            }
        }
        if n == 1 {
            for b in basis_of(n, 0, 1, ValueKind::Tangent) {
                out.accumulate(b, &poly_in(rng, n, MAX_DEGREE, 0, 1), false);
            }
        }
    }
    out
}

/// `∂̄f + c` for a random tangent-valued function `f` and constants `c`.
pub fn dbar_closed_field<R: Rng>(rng: &mut R, n: usize) -> PolyForm {
    loop {
        let mut f = PolyForm::zero(n, ValueKind::Tangent);
        for j in 0..n {
            if rng.gen_bool(0.8) {
                let all = ((1u16 << n) - 1) as u8;
                let mut c = poly_in(rng, n, MAX_DEGREE + 1, all, all);
                c.add_assign(&poly_in(rng, n, MAX_DEGREE + 1, all, all));
                f.accumulate(Basis::new(&[], &[], j), &c, false);
            }
        }
        let mut out = f.d_anti();
        for b in basis_of(n, 0, 1, ValueKind::Tangent) {
            if rng.gen_bool(0.3) {
                out.accumulate(b, &PolyCoeff::constant(gauss(rng)), false);
            }
        }
        if !out.is_empty() {
            return out;
        }
    }
}

/// The ∂̄-homotopy `ι_E / weight` with `E = Σ z̄_a ∂/∂z̄_a`, on forms with no
/// holomorphic degree. For a ∂̄-closed `(0,q)`-form `β` with `q ≥ 1`,
/// `∂̄(Kβ) = β`.
pub fn dbar_homotopy(f: &PolyForm) -> PolyForm {
    let mut out = PolyForm::zero(f.dim(), f.kind());
    for (b, c) in f.terms() {
        assert_eq!(b.holo, 0, "homotopy acts on (0,q)-forms");
        for a in 0..f.dim() {
            if b.anti & (1 << a) == 0 {
                continue;
            }
            let negative = below(b.anti, a) % 2 == 1;
            let shifted = c.map_terms(|m, v| {
                let weight = (m.anti_degree() + b.q()) as i64;
                let mut m2 = *m;
                m2.zb[a] += 1;
                Some((m2, v * PolyCoeff::ratio(1, weight)))
            });
            out.accumulate(Basis { anti: b.anti & !(1 << a), ..*b }, &shifted, negative);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn integrable_fields_are_integrable() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 2..=3 {
            for _ in 0..20 {
                let phi = integrable_field(&mut rng, n);
                assert!(phi.d_anti().is_zero());
                assert!(Form::bracket(&phi, &phi).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn divergence_free_fields() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 2..=3 {
            for _ in 0..10 {
                let phi = divergence_free_field(&mut rng, n);
                let vol = PolyForm::top_holomorphic(n, PolyCoeff::one());
                assert!(Form::contract(&phi, &vol).unwrap().d_holo().is_zero());
            }
        }
    }

    #[test]
    fn homotopy_inverts_dbar_on_closed_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let phi = dbar_closed_field(&mut rng, 3);
            assert!(phi.d_anti().is_zero());
            let k = dbar_homotopy(&phi);
            assert_eq!(k.d_anti(), phi);
        }
    }
}
