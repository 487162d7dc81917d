use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::exterior::MAX_DIM;

/// The flat torus `ℂⁿ/(ℤⁿ + iℤⁿ)` together with the discretization knobs.
///
/// Modes live in `[−K, K]^{2n}`; sup norms are sampled on a uniform grid
/// refined by `oversample`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusGeometry {
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub oversample: usize,
}

impl TorusGeometry {
    pub fn new(n: usize, k: usize, oversample: usize) -> Result<Self> {
        let g = TorusGeometry { n, k, oversample };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > MAX_DIM {
            return Err(Error::Geometry(format!("n = {} must lie in 1..={MAX_DIM}", self.n)));
        }
        if self.k == 0 {
            return Err(Error::Geometry("band limit K must be at least 1".into()));
        }
        if self.k > i16::MAX as usize / 4 {
            return Err(Error::Geometry(format!("band limit K = {} is too large", self.k)));
        }
        if self.oversample < 2 {
            return Err(Error::Geometry("oversample must be at least 2".into()));
        }
        Ok(())
    }
}

/// Frequency `(a, b)` of the character `exp(2πi(a·x + b·y))`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mode {
    pub a: [i16; MAX_DIM],
    pub b: [i16; MAX_DIM],
}

impl Mode {
    pub const ZERO: Mode = Mode {
        a: [0; MAX_DIM],
        b: [0; MAX_DIM],
    };

    pub fn new(a: &[i16], b: &[i16]) -> Self {
        let mut m = Mode::ZERO;
        m.a[..a.len()].copy_from_slice(a);
        m.b[..b.len()].copy_from_slice(b);
        m
    }

    pub fn is_zero(&self) -> bool {
        *self == Mode::ZERO
    }

    pub fn add(&self, o: &Mode) -> Mode {
        let mut m = *self;
        for j in 0..MAX_DIM {
            m.a[j] += o.a[j];
            m.b[j] += o.b[j];
        }
        m
    }

    pub fn neg(&self) -> Mode {
        let mut m = *self;
        for j in 0..MAX_DIM {
            m.a[j] = -m.a[j];
            m.b[j] = -m.b[j];
        }
        m
    }

    /// `|m|_∞`
    pub fn band(&self) -> usize {
        self.a
            .iter()
            .chain(self.b.iter())
            .map(|v| v.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    /// `|a|² + |b|²`
    pub fn norm_sq(&self) -> f64 {
        self.a
            .iter()
            .chain(self.b.iter())
            .map(|&v| (v as f64) * (v as f64))
            .sum()
    }

    /// Eigenvalue of both Laplacians `□̄ = □_∂` on this character.
    pub fn laplace(&self) -> f64 {
        2.0 * PI * PI * self.norm_sq()
    }

    /// Symbol of `∂/∂z^j`: `πi(a_j − i b_j)`.
    pub fn mu(&self, j: usize) -> Complex64 {
        Complex64::new(PI * self.b[j] as f64, PI * self.a[j] as f64)
    }

    /// Symbol of `∂/∂z̄^j`: `πi(a_j + i b_j)`.
    pub fn lambda(&self, j: usize) -> Complex64 {
        Complex64::new(-PI * self.b[j] as f64, PI * self.a[j] as f64)
    }

    /// Real frequency along axis `d` of `(x¹…xⁿ, y¹…yⁿ)`.
    pub fn real_axis(&self, n: usize, d: usize) -> i16 {
        if d < n {
            self.a[d]
        } else {
            self.b[d - n]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometry_validation() {
        assert!(TorusGeometry::new(2, 6, 2).is_ok());
        assert!(TorusGeometry::new(0, 6, 2).is_err());
        assert!(TorusGeometry::new(2, 0, 2).is_err());
        assert!(TorusGeometry::new(2, 6, 1).is_err());
        assert!(TorusGeometry::new(5, 6, 2).is_err());
    }

    #[test]
    fn symbols_from_real_derivatives() {
        // ∂/∂z = ½(∂_x − i∂_y) and ∂_x ↦ 2πi a, ∂_y ↦ 2πi b
        let m = Mode::new(&[3, -1], &[2, 5]);
        for j in 0..2 {
            let dx = Complex64::new(0.0, 2.0 * PI * m.a[j] as f64);
            let dy = Complex64::new(0.0, 2.0 * PI * m.b[j] as f64);
            let i = Complex64::i();
            assert!((m.mu(j) - 0.5 * (dx - i * dy)).norm() < 1e-12);
            assert!((m.lambda(j) - 0.5 * (dx + i * dy)).norm() < 1e-12);
        }
    }
}
