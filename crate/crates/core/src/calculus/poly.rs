//! Exact polynomial coefficients in `z, z̄` over the Gaussian rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exterior::{Coefficient, Form, MAX_DIM};

/// A Gaussian rational `a + bi` with `a, b ∈ ℚ`.
pub type GaussRat = Complex<BigRational>;

pub fn gr(re: i64, im: i64) -> GaussRat {
    Complex::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
}

pub fn gr_frac(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> GaussRat {
    Complex::new(
        BigRational::new(re_num.into(), re_den.into()),
        BigRational::new(im_num.into(), im_den.into()),
    )
}

pub fn gr_to_f64(c: &GaussRat) -> num_complex::Complex64 {
    use num_traits::ToPrimitive;
    num_complex::Complex64::new(c.re.to_f64().unwrap_or(f64::NAN), c.im.to_f64().unwrap_or(f64::NAN))
}

/// Exponents of `z^α z̄^β`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub z: [u8; MAX_DIM],
    pub zb: [u8; MAX_DIM],
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        z: [0; MAX_DIM],
        zb: [0; MAX_DIM],
    };

    pub fn new(z: &[u8], zb: &[u8]) -> Self {
        let mut m = Monomial::ONE;
        m.z[..z.len()].copy_from_slice(z);
        m.zb[..zb.len()].copy_from_slice(zb);
        m
    }

    pub fn z(j: usize) -> Self {
        let mut m = Monomial::ONE;
        m.z[j] = 1;
        m
    }

    pub fn zb(j: usize) -> Self {
        let mut m = Monomial::ONE;
        m.zb[j] = 1;
        m
    }

    pub fn degree(&self) -> usize {
        self.z.iter().chain(self.zb.iter()).map(|&e| e as usize).sum()
    }

    /// Total antiholomorphic degree `|β|`.
    pub fn anti_degree(&self) -> usize {
        self.zb.iter().map(|&e| e as usize).sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut m = *self;
        for j in 0..MAX_DIM {
            m.z[j] += o.z[j];
            m.zb[j] += o.zb[j];
        }
        m
    }
}

/// A polynomial `Σ c_{αβ} z^α z̄^β` with exact Gaussian-rational coefficients.
#[derive(Clone, PartialEq, Default)]
pub struct PolyCoeff {
    terms: BTreeMap<Monomial, GaussRat>,
}

impl fmt::Debug for PolyCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({} + {}i)", c.re, c.im)?;
            for j in 0..MAX_DIM {
                if m.z[j] > 0 {
                    write!(f, "·z{}^{}", j + 1, m.z[j])?;
                }
                if m.zb[j] > 0 {
                    write!(f, "·zb{}^{}", j + 1, m.zb[j])?;
                }
            }
        }
        Ok(())
    }
}

impl PolyCoeff {
    pub fn constant(c: GaussRat) -> Self {
        Self::monomial(Monomial::ONE, c)
    }

    pub fn monomial(m: Monomial, c: GaussRat) -> Self {
        let mut p = PolyCoeff::default();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, GaussRat)>) -> Self {
        let mut p = PolyCoeff::default();
        for (m, c) in it {
            p.add_term(m, &c);
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussRat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: &GaussRat) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(GaussRat::zero);
        *e = &*e + c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// True when no `z_j` with `j` in the mask and no `z̄` outside `allowed_anti` appears.
    pub fn uses_only(&self, z_allowed: u8, zb_allowed: u8) -> bool {
        self.terms.keys().all(|m| {
            (0..MAX_DIM).all(|j| (m.z[j] == 0 || z_allowed & (1 << j) != 0) && (m.zb[j] == 0 || zb_allowed & (1 << j) != 0))
        })
    }

    /// Value at `z`, with `z̄` the complex conjugate.
    pub fn eval(&self, z: &[GaussRat]) -> GaussRat {
        let mut s = GaussRat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (j, zj) in z.iter().enumerate() {
                let zbj = zj.conj();
                for _ in 0..m.z[j] {
                    t = &t * zj;
                }
                for _ in 0..m.zb[j] {
                    t = &t * &zbj;
                }
            }
            s = &s + &t;
        }
        s
    }

    pub fn map_terms(&self, f: impl Fn(&Monomial, &GaussRat) -> Option<(Monomial, GaussRat)>) -> Self {
        let mut out = PolyCoeff::default();
        for (m, c) in &self.terms {
            if let Some((m2, c2)) = f(m, c) {
                out.add_term(m2, &c2);
            }
        }
        out
    }
}

fn scale_int(c: &GaussRat, k: u8) -> GaussRat {
    let r = BigRational::from_integer(BigInt::from(k));
    Complex::new(&c.re * &r, &c.im * &r)
}

impl Coefficient for PolyCoeff {
    type Scalar = GaussRat;

    fn zero() -> Self {
        PolyCoeff::default()
    }

    fn one() -> Self {
        PolyCoeff::constant(GaussRat::one())
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_assign(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(*m, c);
        }
    }

    fn sub_assign(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(*m, &-c.clone());
        }
    }

    fn scale(&self, s: &GaussRat) -> Self {
        self.map_terms(|m, c| Some((*m, c * s)))
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = PolyCoeff::default();
        for (m1, a) in &self.terms {
            for (m2, b) in &other.terms {
                out.add_term(m1.mul(m2), &(a * b));
            }
        }
        out
    }

    fn d_holo(&self, j: usize) -> Self {
        self.map_terms(|m, c| {
            (m.z[j] > 0).then(|| {
                let mut m2 = *m;
                m2.z[j] -= 1;
                (m2, scale_int(c, m.z[j]))
            })
        })
    }

    fn d_anti(&self, j: usize) -> Self {
        self.map_terms(|m, c| {
            (m.zb[j] > 0).then(|| {
                let mut m2 = *m;
                m2.zb[j] -= 1;
                (m2, scale_int(c, m.zb[j]))
            })
        })
    }

    fn ratio(num: i64, den: i64) -> GaussRat {
        Complex::new(BigRational::new(num.into(), den.into()), BigRational::zero())
    }
}

/// A form with exact polynomial coefficients on a chart of `ℂⁿ`.
pub type PolyForm = Form<PolyCoeff>;

/// Number of distinct monomial coefficients, the size of an exact difference.
pub fn monomial_count(f: &PolyForm) -> usize {
    f.terms().map(|(_, c)| c.len()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{Basis, ValueKind};

    #[test]
    fn derivatives_of_monomials() {
        // ∂/∂z₁ (z₁² z̄₂) = 2 z₁ z̄₂
        let p = PolyCoeff::monomial(Monomial::new(&[2, 0], &[0, 1]), gr(1, 0));
        assert_eq!(p.d_holo(0), PolyCoeff::monomial(Monomial::new(&[1, 0], &[0, 1]), gr(2, 0)));
        assert!(p.d_holo(1).is_zero());
        assert_eq!(p.d_anti(1), PolyCoeff::monomial(Monomial::new(&[2, 0], &[0, 0]), gr(1, 0)));
    }

    #[test]
    fn dbar_examples() {
        // ∂̄(z₁ dz̄₂) = 0 and ∂̄(z̄₁ dz₂) = dz̄₁ ∧ dz₂
        let a = PolyForm::from_terms(2, ValueKind::Scalar, [(Basis::new(&[], &[1], 0), PolyCoeff::monomial(Monomial::z(0), gr(1, 0)))]);
        assert!(a.d_anti().is_zero());
        let b = PolyForm::from_terms(2, ValueKind::Scalar, [(Basis::new(&[1], &[], 0), PolyCoeff::monomial(Monomial::zb(0), gr(1, 0)))]);
        let dzb1 = PolyForm::from_terms(2, ValueKind::Scalar, [(Basis::new(&[], &[0], 0), PolyCoeff::one())]);
        let dz2 = PolyForm::from_terms(2, ValueKind::Scalar, [(Basis::new(&[1], &[], 0), PolyCoeff::one())]);
        assert_eq!(b.d_anti(), dzb1.wedge(&dz2).unwrap());
    }

    #[test]
    fn evaluation_is_exact() {
        let p = PolyCoeff::from_terms([
            (Monomial::new(&[1], &[1]), gr(1, 0)),
            (Monomial::ONE, gr(1, 0)),
        ]);
        // 1 + |1+2i|² = 6
        assert_eq!(p.eval(&[gr(1, 2)]), gr(6, 0));
    }
}
