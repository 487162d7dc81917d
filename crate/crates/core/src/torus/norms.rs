//! L², C⁰ and C¹ norms; the sup norms are sampled on a uniform grid
//! evaluated by inverse FFT.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use super::form::{frame_weight, l2, FourierForm};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Norms {
    pub l2: f64,
    pub c0: f64,
    pub c1: f64,
}

struct Grid {
    shape: Vec<usize>,
    ffts: Vec<Arc<dyn Fft<f64>>>,
    len: usize,
}

impl Grid {
    fn new(shape: Vec<usize>) -> Self {
        let mut planner = FftPlanner::new();
        let ffts = shape.iter().map(|&m| planner.plan_fft_inverse(m)).collect();
        let len = shape.iter().product();
        Grid { shape, ffts, len }
    }

    fn strides(&self) -> Vec<usize> {
        let mut s = vec![1usize; self.shape.len()];
        for d in (0..self.shape.len().saturating_sub(1)).rev() {
            s[d] = s[d + 1] * self.shape[d + 1];
        }
        s
    }

    /// In-place unnormalized inverse transform over every axis.
    fn transform(&self, buf: &mut [Complex64]) {
        let strides = self.strides();
        for (d, fft) in self.ffts.iter().enumerate() {
            let m = self.shape[d];
            if m == 1 {
                continue;
            }
            let stride = strides[d];
            if stride == 1 {
                fft.process(buf);
                continue;
            }
            let mut line = vec![Complex64::new(0.0, 0.0); m];
            let block = stride * m;
            for start in (0..self.len).step_by(block) {
                for off in 0..stride {
                    let base = start + off;
                    for (k, v) in line.iter_mut().enumerate() {
                        *v = buf[base + k * stride];
                    }
                    fft.process(&mut line);
                    for (k, v) in line.iter().enumerate() {
                        buf[base + k * stride] = *v;
                    }
                }
            }
        }
    }
}

/// Exact L² norm by Parseval together with grid C⁰ and C¹ norms.
///
/// `c1 = sup|f| + Σ_d sup|∂f/∂u_d|` over the real coordinates
/// `u = (x¹…xⁿ, y¹…yⁿ)`, each sup taken of the pointwise frame norm on a grid
/// with `oversample·(2B_d + 1)` points along axis `d`, where `B_d` is the
/// form's own band along that axis.
pub fn norms(f: &FourierForm, oversample: usize) -> Norms {
    let l2v = l2(f);
    if f.is_empty() {
        return Norms::default();
    }
    let n = f.dim();
    let axes = 2 * n;
    let mut bands = vec![0usize; axes];
    for (_, c) in f.terms() {
        for (d, b) in c.axis_bands(n).into_iter().enumerate() {
            bands[d] = bands[d].max(b);
        }
    }
    let shape: Vec<usize> = bands.iter().map(|b| oversample.max(2) * (2 * b + 1)).collect();
    let grid = Grid::new(shape.clone());
    let strides = grid.strides();
    // acc[0] holds |f|², acc[1 + d] holds |∂_d f|²
    let mut acc = vec![vec![0.0f64; grid.len]; axes + 1];
    let mut buf = vec![Complex64::new(0.0, 0.0); grid.len];
    for (basis, coeff) in f.terms() {
        let w = frame_weight(basis, f.kind());
        for (field, slot) in acc.iter_mut().enumerate() {
            buf.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
            for (m, v) in coeff.modes() {
                let mut idx = 0;
                for d in 0..axes {
                    let k = m.real_axis(n, d) as i64;
                    idx += k.rem_euclid(shape[d] as i64) as usize * strides[d];
                }
                let factor = if field == 0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 2.0 * PI * m.real_axis(n, field - 1) as f64)
                };
                buf[idx] += v * factor;
            }
            grid.transform(&mut buf);
            for (a, v) in slot.iter_mut().zip(buf.iter()) {
                *a += w * v.norm_sqr();
            }
        }
    }
    let sup = |v: &Vec<f64>| v.iter().cloned().fold(0.0f64, f64::max).sqrt();
    let c0 = sup(&acc[0]);
    let c1 = c0 + acc[1..].iter().map(sup).sum::<f64>();
    Norms { l2: l2v, c0, c1 }
}

pub fn c1_norm(f: &FourierForm, oversample: usize) -> f64 {
    norms(f, oversample).c1
}

pub fn c0_norm(f: &FourierForm, oversample: usize) -> f64 {
    norms(f, oversample).c0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::ValueKind;
    use crate::torus::form::monomial_form;
    use crate::torus::geometry::Mode;
    use crate::torus::trig::TrigPoly;
    use crate::torus::FourierForm;

    #[test]
    fn zero_form() {
        let f = FourierForm::zero(2, ValueKind::Scalar);
        assert_eq!(norms(&f, 2), Norms::default());
    }

    #[test]
    fn unit_character() {
        let m = Mode::new(&[1, 0], &[0, 0]);
        let f = monomial_form(2, ValueKind::Scalar, &[], &[], 0, m, Complex64::new(1.0, 0.0));
        let r = norms(&f, 2);
        assert!((r.l2 - 1.0).abs() < 1e-15);
        assert!((r.c0 - 1.0).abs() < 1e-12);
        assert!((r.c1 - (1.0 + 2.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn grid_matches_direct_evaluation() {
        let p = TrigPoly::from_modes([
            (Mode::new(&[1, -1], &[0, 1]), Complex64::new(0.4, 0.1)),
            (Mode::new(&[0, 1], &[-1, 0]), Complex64::new(-0.3, 0.7)),
            (Mode::ZERO, Complex64::new(0.2, 0.0)),
        ]);
        let f = FourierForm::from_terms(2, ValueKind::Scalar, [(crate::exterior::Basis::new(&[], &[], 0), p.clone())]);
        let r = norms(&f, 2);
        // brute-force sup over the same 6⁴ grid
        let mut best: f64 = 0.0;
        for i in 0..6usize.pow(4) {
            let ix = [i / 216, (i / 36) % 6, (i / 6) % 6, i % 6];
            let x = [ix[0] as f64 / 6.0, ix[1] as f64 / 6.0];
            let y = [ix[2] as f64 / 6.0, ix[3] as f64 / 6.0];
            best = best.max(p.eval(&x, &y).norm());
        }
        assert!((r.c0 - best).abs() < 1e-12);
    }
}
