use std::collections::BTreeMap;

use num_complex::Complex64;

use super::geometry::Mode;
use crate::exterior::{Coefficient, MAX_DIM};

/// Dense accumulators above this many cells fall back to a sorted map.
const DENSE_LIMIT: usize = 1 << 22;

/// A trigonometric polynomial `Σ c_m e_m` with finitely many modes.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrigPoly {
    modes: BTreeMap<Mode, Complex64>,
}

impl TrigPoly {
    pub fn constant(c: Complex64) -> Self {
        Self::monomial(Mode::ZERO, c)
    }

    pub fn monomial(m: Mode, c: Complex64) -> Self {
        let mut p = TrigPoly::default();
        if c != Complex64::new(0.0, 0.0) {
            p.modes.insert(m, c);
        }
        p
    }

    pub fn from_modes(it: impl IntoIterator<Item = (Mode, Complex64)>) -> Self {
        let mut p = TrigPoly::default();
        for (m, c) in it {
            p.add_mode(m, c);
        }
        p
    }

    pub fn modes(&self) -> impl Iterator<Item = (&Mode, &Complex64)> {
        self.modes.iter()
    }

    pub fn get(&self, m: &Mode) -> Complex64 {
        self.modes.get(m).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn add_mode(&mut self, m: Mode, c: Complex64) {
        let e = self.modes.entry(m).or_default();
        *e += c;
        if *e == Complex64::new(0.0, 0.0) {
            self.modes.remove(&m);
        }
    }

    /// Multiplies every mode by a mode-dependent factor.
    pub fn map_modes(&self, f: impl Fn(&Mode, Complex64) -> Complex64) -> Self {
        TrigPoly {
            modes: self
                .modes
                .iter()
                .map(|(m, c)| (*m, f(m, *c)))
                .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
                .collect(),
        }
    }

    pub fn band(&self) -> usize {
        self.modes.keys().map(Mode::band).max().unwrap_or(0)
    }

    /// Per-axis band `max |m_d|` over the real axes `(x¹…xⁿ, y¹…yⁿ)`.
    pub fn axis_bands(&self, n: usize) -> Vec<usize> {
        let mut out = vec![0usize; 2 * n];
        for m in self.modes.keys() {
            for (d, o) in out.iter_mut().enumerate() {
                *o = (*o).max(m.real_axis(n, d).unsigned_abs() as usize);
            }
        }
        out
    }

    /// Splits into the part with `|m|_∞ ≤ k` and the discarded part's `Σ|c|²`.
    pub fn truncate(&self, k: usize) -> (Self, f64) {
        let mut kept = BTreeMap::new();
        let mut lost = 0.0;
        for (m, c) in &self.modes {
            if m.band() <= k {
                kept.insert(*m, *c);
            } else {
                lost += c.norm_sqr();
            }
        }
        (TrigPoly { modes: kept }, lost)
    }

    pub fn conj_reflect(&self) -> Self {
        TrigPoly {
            modes: self.modes.iter().map(|(m, c)| (m.neg(), c.conj())).collect(),
        }
    }

    /// Parseval pairing `Σ_m a_m conj(b_m)`.
    pub fn dot(&self, other: &Self) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for (m, c) in &self.modes {
            if let Some(d) = other.modes.get(m) {
                s += c * d.conj();
            }
        }
        s
    }

    pub fn norm_sq(&self) -> f64 {
        self.modes.values().map(|c| c.norm_sqr()).sum()
    }

    /// Point evaluation at real coordinates `(x, y)`.
    pub fn eval(&self, x: &[f64], y: &[f64]) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for (m, c) in &self.modes {
            let mut phase = 0.0;
            for j in 0..x.len() {
                phase += m.a[j] as f64 * x[j] + m.b[j] as f64 * y[j];
            }
            s += c * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * phase);
        }
        s
    }

    fn mul_dense(&self, other: &Self) -> Option<Self> {
        let axes = 2 * MAX_DIM;
        let coords = |m: &Mode, d: usize| -> i32 {
            if d < MAX_DIM {
                m.a[d] as i32
            } else {
                m.b[d - MAX_DIM] as i32
            }
        };
        let bounds = |p: &Self| {
            let mut lo = [i32::MAX; 2 * MAX_DIM];
            let mut hi = [i32::MIN; 2 * MAX_DIM];
            for m in p.modes.keys() {
                for d in 0..axes {
                    lo[d] = lo[d].min(coords(m, d));
                    hi[d] = hi[d].max(coords(m, d));
                }
            }
            (lo, hi)
        };
        let (lo1, hi1) = bounds(self);
        let (lo2, hi2) = bounds(other);
        let mut stride = [0usize; 2 * MAX_DIM];
        let mut extent = [0usize; 2 * MAX_DIM];
        let mut size = 1usize;
        for d in (0..axes).rev() {
            extent[d] = (hi1[d] + hi2[d] - lo1[d] - lo2[d] + 1) as usize;
            stride[d] = size;
            size = size.checked_mul(extent[d])?;
            if size > DENSE_LIMIT {
                return None;
            }
        }
        let offsets = |p: &Self, lo: &[i32; 2 * MAX_DIM]| -> Vec<(usize, Complex64)> {
            p.modes
                .iter()
                .map(|(m, c)| {
                    let o = (0..axes)
                        .map(|d| (coords(m, d) - lo[d]) as usize * stride[d])
                        .sum();
                    (o, *c)
                })
                .collect()
        };
        let o1 = offsets(self, &lo1);
        let o2 = offsets(other, &lo2);
        let mut acc = vec![Complex64::new(0.0, 0.0); size];
        for &(i, a) in &o1 {
            for &(j, b) in &o2 {
                acc[i + j] += a * b;
            }
        }
        let mut modes = BTreeMap::new();
        for (idx, c) in acc.into_iter().enumerate() {
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let mut m = Mode::ZERO;
            let mut rest = idx;
            for d in 0..axes {
                let v = (rest / stride[d]) as i32 + lo1[d] + lo2[d];
                rest %= stride[d];
                if d < MAX_DIM {
                    m.a[d] = v as i16;
                } else {
                    m.b[d - MAX_DIM] = v as i16;
                }
            }
            modes.insert(m, c);
        }
        Some(TrigPoly { modes })
    }
}

impl Coefficient for TrigPoly {
    type Scalar = Complex64;

    fn zero() -> Self {
        TrigPoly::default()
    }

    fn one() -> Self {
        TrigPoly::constant(Complex64::new(1.0, 0.0))
    }

    fn is_zero(&self) -> bool {
        self.modes.is_empty()
    }

    fn add_assign(&mut self, other: &Self) {
        for (m, c) in &other.modes {
            self.add_mode(*m, *c);
        }
    }

    fn sub_assign(&mut self, other: &Self) {
        for (m, c) in &other.modes {
            self.add_mode(*m, -c);
        }
    }

    fn scale(&self, s: &Complex64) -> Self {
        self.map_modes(|_, c| c * s)
    }

    fn mul(&self, other: &Self) -> Self {
        if self.is_empty() || other.is_empty() {
            return TrigPoly::default();
        }
        if let Some(p) = self.mul_dense(other) {
            return p;
        }
        let mut out = TrigPoly::default();
        for (m1, a) in &self.modes {
            for (m2, b) in &other.modes {
                *out.modes.entry(m1.add(m2)).or_default() += a * b;
            }
        }
        out.modes.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        out
    }

    fn d_holo(&self, j: usize) -> Self {
        self.map_modes(|m, c| c * m.mu(j))
    }

    fn d_anti(&self, j: usize) -> Self {
        self.map_modes(|m, c| c * m.lambda(j))
    }

    fn ratio(num: i64, den: i64) -> Complex64 {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
}
