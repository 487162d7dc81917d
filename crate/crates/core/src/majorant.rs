//! The quadratic majorant recursion `x_k = c Σ_{i=1}^{k−1} x_i x_{k−i}`, its
//! closed form, generating function and radius of convergence.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
pub use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Parses `a/b`, an integer, or a finite decimal such as `-0.125` exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if s.contains('/') {
        let r = BigRational::from_str(s).map_err(|_| bad())?;
        return Ok(r);
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(num, den);
    Ok(if neg { -r } else { r })
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MajorantSeries {
    c: BigRational,
    x1: BigRational,
    /// `coeffs[k-1] = x_k`
    coeffs: Vec<BigRational>,
}

/// Builds `x_1..x_N` by the recursion.
pub fn majorant_coefficients(c: &BigRational, x1: &BigRational, order: usize) -> Result<MajorantSeries> {
    if !c.is_positive() {
        return Err(Error::Contract(format!("c must be positive, got {c}")));
    }
    if order == 0 {
        return Err(Error::Contract("order must be at least 1".into()));
    }
    let mut xs: Vec<BigRational> = vec![x1.clone()];
    for k in 2..=order {
        let mut s = BigRational::zero();
        for i in 1..k {
            s += &xs[i - 1] * &xs[k - i - 1];
        }
        xs.push(c * s);
    }
    Ok(MajorantSeries {
        c: c.clone(),
        x1: x1.clone(),
        coeffs: xs,
    })
}

/// `x_n = ½(1−½)(2−½)⋯(n−1−½) / (2c·n!) · (4cx₁)ⁿ`
pub fn closed_form(c: &BigRational, x1: &BigRational, n: usize) -> BigRational {
    let half = BigRational::new(1.into(), 2.into());
    let mut num = half.clone();
    let mut fact = BigRational::one();
    for j in 1..n {
        num *= BigRational::from_integer(j.into()) - &half;
    }
    for j in 1..=n {
        fact *= BigRational::from_integer(j.into());
    }
    let base = BigRational::from_integer(4.into()) * c * x1;
    num / (BigRational::from_integer(2.into()) * c * fact) * num_traits::pow(base, n)
}

/// `1/(4|c x₁|)`, or `None` (infinite) when `x₁ = 0`.
pub fn radius(c: &BigRational, x1: &BigRational) -> Option<BigRational> {
    let d = (BigRational::from_integer(4.into()) * c * x1).abs();
    (!d.is_zero()).then(|| d.recip())
}

/// `S(τ) = (1 − √(1 − 4cx₁τ)) / 2c`, real for `4cx₁τ ≤ 1`.
pub fn generating_function(c: f64, x1: f64, tau: f64) -> Option<f64> {
    let disc = 1.0 - 4.0 * c * x1 * tau;
    (disc >= 0.0).then(|| (1.0 - disc.sqrt()) / (2.0 * c))
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RadiusEval {
    /// Exact radius as `p/q`; `None` means infinite.
    pub radius: Option<String>,
    pub radius_f64: f64,
    pub s_tau: Option<f64>,
    pub partial_sums: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundaryReport {
    pub terms: usize,
    /// `|x_n| rⁿ` strictly decreasing for `n ≥ 2`.
    pub decreasing: bool,
    pub last_partial_sum: f64,
    /// `S(r) = 1/(2c)`
    pub bound: f64,
    pub bounded: bool,
}

impl MajorantSeries {
    pub fn c(&self) -> &BigRational {
        &self.c
    }

    pub fn x1(&self) -> &BigRational {
        &self.x1
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// `x_k` for `1 ≤ k ≤ N`.
    pub fn coeff(&self, k: usize) -> Option<&BigRational> {
        k.checked_sub(1).and_then(|i| self.coeffs.get(i))
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(rational_to_f64).collect()
    }

    pub fn radius(&self) -> Option<BigRational> {
        radius(&self.c, &self.x1)
    }

    /// First order at which recursion and closed form differ.
    pub fn closed_form_mismatch(&self) -> Option<usize> {
        (1..=self.order()).find(|&n| closed_form(&self.c, &self.x1, n) != self.coeffs[n - 1])
    }

    /// First order `k ≤ N` at which `[τ^k](cS² − S + x₁τ) ≠ 0`.
    pub fn formal_identity_mismatch(&self) -> Option<usize> {
        let x = &self.coeffs;
        (1..=self.order()).find(|&k| {
            let mut sq = BigRational::zero();
            for i in 1..k {
                sq += &x[i - 1] * &x[k - i - 1];
            }
            let lin = if k == 1 { self.x1.clone() } else { BigRational::zero() };
            &self.c * sq - &x[k - 1] + lin != BigRational::zero()
        })
    }

    /// Partial sums `Σ_{k≤n} x_k τ^k`.
    pub fn partial_sums(&self, tau: f64) -> Vec<f64> {
        let mut s = 0.0;
        let mut p = 1.0;
        self.coeffs
            .iter()
            .map(|x| {
                p *= tau;
                s += rational_to_f64(x) * p;
                s
            })
            .collect()
    }

    pub fn radius_eval(&self, tau: f64) -> RadiusEval {
        let r = self.radius();
        RadiusEval {
            radius_f64: r.as_ref().map_or(f64::INFINITY, rational_to_f64),
            radius: r.map(|r| r.to_string()),
            s_tau: generating_function(rational_to_f64(&self.c), rational_to_f64(&self.x1), tau),
            partial_sums: self.partial_sums(tau),
        }
    }

    /// Terms `|x_n| rⁿ` at the boundary, generated in `f64` through the
    /// ratio `(2n−1)/(2n+2)`, up to `terms` terms.
    pub fn boundary_check(&self, terms: usize) -> Option<BoundaryReport> {
        self.radius()?;
        let c = rational_to_f64(&self.c);
        let mut y = 1.0 / (4.0 * c);
        let mut s = 0.0;
        let mut decreasing = true;
        let bound = 1.0 / (2.0 * c);
        let mut bounded = true;
        for n in 1..=terms {
            s += y;
            bounded &= s <= bound * (1.0 + 1e-12);
            let next = y * (2.0 * n as f64 - 1.0) / (2.0 * n as f64 + 2.0);
            if n >= 2 {
                decreasing &= next < y;
            }
            y = next;
        }
        Some(BoundaryReport {
            terms,
            decreasing,
            last_partial_sum: s,
            bound,
            bounded,
        })
    }

    /// Rows `n, x_n, x_n τⁿ, partial sum`.
    pub fn to_csv(&self, tau: f64) -> String {
        let mut out = String::from("n,x_n,x_n_tau_n,partial_sum\n");
        let mut p = 1.0;
        let mut s = 0.0;
        for (i, x) in self.coeffs.iter().enumerate() {
            p *= tau;
            let t = rational_to_f64(x) * p;
            s += t;
            let _ = writeln!(out, "{},{},{:e},{:e}", i + 1, x, t, s);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn catalan() {
        let m = majorant_coefficients(&q("1"), &q("1"), 10).unwrap();
        let want = [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862];
        for (k, w) in want.iter().enumerate() {
            assert_eq!(*m.coeff(k + 1).unwrap(), BigRational::from_integer((*w).into()));
        }
        assert_eq!(closed_form(&q("1"), &q("1"), 2), q("1"));
    }

    #[test]
    fn closed_form_matches_recursion() {
        for (c, x1) in [("1", "1"), ("3/7", "-2/5"), ("5", "1/20")] {
            let m = majorant_coefficients(&q(c), &q(x1), 40).unwrap();
            assert_eq!(m.closed_form_mismatch(), None);
            assert_eq!(m.formal_identity_mismatch(), None);
        }
    }

    #[test]
    fn zero_seed() {
        let m = majorant_coefficients(&q("2"), &q("0"), 8).unwrap();
        assert!(m.coeffs().iter().all(|x| x.is_zero()));
        assert_eq!(m.radius(), None);
    }

    #[test]
    fn radii() {
        assert_eq!(radius(&q("1"), &q("1")), Some(q("1/4")));
        let c = q("37/11");
        assert_eq!(radius(&c, &(c.recip() / BigRational::from_integer(4.into()))), Some(q("1")));
        assert_eq!(radius(&q("1"), &q("-1")), Some(q("1/4")));
    }

    #[test]
    fn homogeneity() {
        let lam = q("3/2");
        let a = majorant_coefficients(&q("2/3"), &q("1/5"), 12).unwrap();
        let b = majorant_coefficients(&(q("2/3") / &lam), &(q("1/5") * &lam), 12).unwrap();
        for k in 1..=12 {
            assert_eq!(b.coeff(k).unwrap(), &(a.coeff(k).unwrap() * &lam));
        }
    }

    #[test]
    fn generating_function_inside_radius() {
        let m = majorant_coefficients(&q("1"), &q("1"), 200).unwrap();
        let e = m.radius_eval(0.2);
        assert!((e.partial_sums.last().unwrap() - e.s_tau.unwrap()).abs() < 1e-8);
        assert_eq!(m.radius_eval(0.0).s_tau, Some(0.0));
    }

    #[test]
    fn boundary_is_monotone_and_bounded() {
        let m = majorant_coefficients(&q("3"), &q("1/12"), 4).unwrap();
        let b = m.boundary_check(10_000).unwrap();
        assert!(b.decreasing && b.bounded);
        assert!(b.last_partial_sum < b.bound);
    }

    #[test]
    fn parsing() {
        assert_eq!(q("-0.125"), q("-1/8"));
        assert_eq!(q("+3"), q("3"));
        assert!(parse_rational("1e3").is_err());
        assert!(parse_rational(".").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn invalid_inputs() {
        assert!(majorant_coefficients(&q("0"), &q("1"), 3).is_err());
        assert!(majorant_coefficients(&q("1"), &q("1"), 0).is_err());
    }
}
