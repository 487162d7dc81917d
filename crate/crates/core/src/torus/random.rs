use num_complex::Complex64;
use rand::Rng;

use super::form::FourierForm;
use super::geometry::Mode;
use super::trig::TrigPoly;
use crate::exterior::{basis_of, ValueKind};

/// Every mode with `|m|_∞ ≤ band` in dimension `n`, in canonical order.
pub fn modes_in_band(n: usize, band: usize) -> Vec<Mode> {
    let side = 2 * band + 1;
    let total = side.pow(2 * n as u32);
    let mut out = Vec::with_capacity(total);
    for idx in 0..total {
        let mut rest = idx;
        let mut m = Mode::ZERO;
        for d in 0..2 * n {
            let v = (rest % side) as i16 - band as i16;
            rest /= side;
            if d < n {
                m.a[d] = v;
            } else {
                m.b[d - n] = v;
            }
        }
        out.push(m);
    }
    out.sort();
    out
}

pub fn random_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Uniform amplitudes in the unit square on every mode of the band.
pub fn random_trig<R: Rng>(rng: &mut R, n: usize, band: usize) -> TrigPoly {
    TrigPoly::from_modes(modes_in_band(n, band).into_iter().map(|m| (m, random_complex(rng))))
}

/// A dense random form of bidegree `(p,q)` supported in the band.
pub fn random_form<R: Rng>(rng: &mut R, n: usize, band: usize, p: usize, q: usize, kind: ValueKind) -> FourierForm {
    let mut f = FourierForm::zero(n, kind);
    for b in basis_of(n, p, q, kind) {
        f.accumulate(b, &random_trig(rng, n, band), false);
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn band_enumeration() {
        let ms = modes_in_band(2, 1);
        assert_eq!(ms.len(), 81);
        assert!(ms.iter().all(|m| m.band() <= 1));
        assert!(ms.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn deterministic_draws() {
        let a = random_form(&mut ChaCha8Rng::seed_from_u64(3), 2, 1, 1, 1, ValueKind::Scalar);
        let b = random_form(&mut ChaCha8Rng::seed_from_u64(3), 2, 1, 1, 1, ValueKind::Scalar);
        assert_eq!(a, b);
        assert_eq!(a.len(), 4);
    }
}
