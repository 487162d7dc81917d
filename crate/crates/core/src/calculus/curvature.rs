//! Exact curvature of a Hermitian metric on a trivialized bundle, and the
//! Nakano positivity test at a point.

#![allow(clippy::needless_range_loop)]

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::poly::{gr_to_f64, GaussRat, PolyCoeff};
use crate::error::{Error, Result};
use crate::exterior::{Coefficient, MAX_DIM};

#[derive(Clone, Debug)]
pub struct NakanoReport {
    pub n: usize,
    pub rank: usize,
    /// `R_{ij̄αβ̄}` stored at `((i·n + j)·r + α)·r + β`.
    pub tensor: Vec<GaussRat>,
    /// `Σ R_{ij̄αβ̄} u^{iα} ū^{jβ}` per sample vector (real up to exact zero imaginary part).
    pub sample_values: Vec<GaussRat>,
    /// Every principal minor of the `nr × nr` matrix `R_{(iα),(jβ)}` is `≥ 0`.
    pub semi_positive: bool,
    /// Every leading principal minor is `> 0`.
    pub positive: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NakanoSummary {
    pub n: usize,
    pub rank: usize,
    pub tensor_re: Vec<f64>,
    pub tensor_im: Vec<f64>,
    pub sample_values: Vec<f64>,
    pub semi_positive: bool,
    pub positive: bool,
}

impl NakanoReport {
    pub fn get(&self, i: usize, j: usize, a: usize, b: usize) -> &GaussRat {
        &self.tensor[((i * self.n + j) * self.rank + a) * self.rank + b]
    }

    pub fn summary(&self) -> NakanoSummary {
        let t: Vec<_> = self.tensor.iter().map(gr_to_f64).collect();
        NakanoSummary {
            n: self.n,
            rank: self.rank,
            tensor_re: t.iter().map(|c| c.re).collect(),
            tensor_im: t.iter().map(|c| c.im).collect(),
            sample_values: self.sample_values.iter().map(|v| gr_to_f64(v).re).collect(),
            semi_positive: self.semi_positive,
            positive: self.positive,
        }
    }
}

fn conj_poly(p: &PolyCoeff) -> PolyCoeff {
    p.map_terms(|m, c| {
        let mut m2 = *m;
        std::mem::swap(&mut m2.z, &mut m2.zb);
        Some((m2, c.conj()))
    })
}

/// Exact determinant by Gaussian elimination.
pub fn determinant(mut m: Vec<Vec<GaussRat>>) -> GaussRat {
    let k = m.len();
    let mut det = Complex::new(BigRational::from_integer(1.into()), BigRational::zero());
    for col in 0..k {
        let Some(piv) = (col..k).find(|&r| !m[r][col].is_zero()) else {
            return GaussRat::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det = &det * &p;
        for r in col + 1..k {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &p;
            for c in col..k {
                let v = &f * &m[col][c];
                m[r][c] = &m[r][c] - &v;
            }
        }
    }
    det
}

fn inverse(m: &[Vec<GaussRat>]) -> Option<Vec<Vec<GaussRat>>> {
    let k = m.len();
    let one = Complex::new(BigRational::from_integer(1.into()), BigRational::zero());
    let mut a: Vec<Vec<GaussRat>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..k).map(|j| if i == j { one.clone() } else { GaussRat::zero() }));
            r
        })
        .collect();
    for col in 0..k {
        let piv = (col..k).find(|&r| !a[r][col].is_zero())?;
        a.swap(piv, col);
        let p = a[col][col].clone();
        for c in 0..2 * k {
            a[col][c] = &a[col][c] / &p;
        }
        for r in 0..k {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..2 * k {
                let v = &f * &a[col][c];
                a[r][c] = &a[r][c] - &v;
            }
        }
    }
    Some(a.into_iter().map(|r| r[k..].to_vec()).collect())
}

fn principal_minor(m: &[Vec<GaussRat>], mask: u32) -> GaussRat {
    let idx: Vec<usize> = (0..m.len()).filter(|i| mask & (1 << i) != 0).collect();
    determinant(idx.iter().map(|&i| idx.iter().map(|&j| m[i][j].clone()).collect()).collect())
}

/// `R_{ij̄αβ̄} = −∂_i∂̄_j h_{αβ̄} + h^{γδ̄} ∂_i h_{αδ̄} ∂̄_j h_{γβ̄}` at `point`,
/// with `(h^{γδ̄})` the inverse of `(h_{δγ̄})`.
///
/// `vectors` holds sample `u^{iα}` laid out as `u[i·r + α]`.
pub fn curvature_nakano(h: &[Vec<PolyCoeff>], n: usize, point: &[GaussRat], vectors: &[Vec<GaussRat>]) -> Result<NakanoReport> {
    let r = h.len();
    if r == 0 || h.iter().any(|row| row.len() != r) {
        return Err(Error::Contract("metric must be a non-empty square matrix".into()));
    }
    if !(1..=MAX_DIM).contains(&n) || point.len() != n {
        return Err(Error::DimMismatch(point.len(), n));
    }
    for a in 0..r {
        for b in 0..r {
            if h[a][b] != conj_poly(&h[b][a]) {
                return Err(Error::Contract(format!("metric is not Hermitian at entry ({a},{b})")));
            }
        }
    }
    if let Some(u) = vectors.iter().find(|u| u.len() != n * r) {
        return Err(Error::DimMismatch(u.len(), n * r));
    }
    let at: Vec<Vec<GaussRat>> = h.iter().map(|row| row.iter().map(|p| p.eval(point)).collect()).collect();
    // leading minors of a Hermitian matrix are real
    for k in 1..=r {
        let d = principal_minor(&at, (1 << k) - 1);
        if !d.re.is_positive() {
            return Err(Error::Domain(format!("metric is not positive definite at the point (leading minor {k})")));
        }
    }
    let inv = inverse(&at).ok_or_else(|| Error::Domain("metric is singular at the point".into()))?;

    let dh: Vec<Vec<Vec<GaussRat>>> = (0..n)
        .map(|i| h.iter().map(|row| row.iter().map(|p| p.d_holo(i).eval(point)).collect()).collect())
        .collect();
    let dbh: Vec<Vec<Vec<GaussRat>>> = (0..n)
        .map(|j| h.iter().map(|row| row.iter().map(|p| p.d_anti(j).eval(point)).collect()).collect())
        .collect();

    let mut tensor = Vec::with_capacity(n * n * r * r);
    for i in 0..n {
        for j in 0..n {
            for a in 0..r {
                for b in 0..r {
                    let mut v = -h[a][b].d_anti(j).d_holo(i).eval(point);
                    for g in 0..r {
                        for d in 0..r {
                            let t = &(&inv[d][g] * &dh[i][a][d]) * &dbh[j][g][b];
                            v = &v + &t;
                        }
                    }
                    tensor.push(v);
                }
            }
        }
    }

    let nr = n * r;
    let mat: Vec<Vec<GaussRat>> = (0..nr)
        .map(|x| (0..nr).map(|y| tensor[((x / r * n + y / r) * r + x % r) * r + y % r].clone()).collect())
        .collect();
    let semi_positive = (1u32..1 << nr).all(|mask| !principal_minor(&mat, mask).re.is_negative());
    let positive = (1..=nr).all(|k| principal_minor(&mat, (1 << k) - 1).re.is_positive());
    let sample_values = vectors
        .iter()
        .map(|u| {
            let mut s = GaussRat::zero();
            for x in 0..nr {
                for y in 0..nr {
                    s = &s + &(&(&mat[x][y] * &u[x]) * &u[y].conj());
                }
            }
            s
        })
        .collect();
    Ok(NakanoReport {
        n,
        rank: r,
        tensor,
        sample_values,
        semi_positive,
        positive,
    })
}

#[cfg(test)]
mod tests {
    use super::super::poly::{gr, gr_frac, Monomial};
    use super::*;

    fn one_plus(sign: i64) -> PolyCoeff {
        PolyCoeff::from_terms([
            (Monomial::ONE, gr(1, 0)),
            (Monomial::new(&[1], &[1]), gr(sign, 0)),
        ])
    }

    #[test]
    fn flat_metric_is_flat() {
        let h = vec![
            vec![PolyCoeff::constant(gr(1, 0)), PolyCoeff::zero()],
            vec![PolyCoeff::zero(), PolyCoeff::constant(gr(1, 0))],
        ];
        let u = vec![gr(1, 2), gr(0, 1), gr(-3, 0), gr(1, 1)];
        let rep = curvature_nakano(&h, 2, &[gr(0, 0), gr_frac(1, 2, 1, 3)], &[u]).unwrap();
        assert!(rep.tensor.iter().all(|v| v.is_zero()));
        assert!(rep.semi_positive);
        assert!(!rep.positive);
        assert!(rep.sample_values[0].is_zero());
    }

    #[test]
    fn rank_one_signs_at_origin() {
        let rep = curvature_nakano(&[vec![one_plus(1)]], 1, &[gr(0, 0)], &[vec![gr(1, 0)]]).unwrap();
        assert_eq!(*rep.get(0, 0, 0, 0), gr(-1, 0));
        assert!(!rep.semi_positive);
        let rep = curvature_nakano(&[vec![one_plus(-1)]], 1, &[gr(0, 0)], &[]).unwrap();
        assert_eq!(*rep.get(0, 0, 0, 0), gr(1, 0));
        assert!(rep.semi_positive && rep.positive);
    }

    #[test]
    fn rank_one_away_from_origin() {
        // h = 1 + |z|² gives R = −1/(1+|z|²), so −4/5 at z = 1/2
        let rep = curvature_nakano(&[vec![one_plus(1)]], 1, &[gr_frac(1, 2, 0, 1)], &[]).unwrap();
        assert_eq!(*rep.get(0, 0, 0, 0), gr_frac(-4, 5, 0, 1));
    }

    #[test]
    fn singular_or_indefinite_metric_is_a_domain_error() {
        let r = curvature_nakano(&[vec![one_plus(-1)]], 1, &[gr(1, 0)], &[]);
        assert!(matches!(r, Err(Error::Domain(_))));
        let r = curvature_nakano(&[vec![PolyCoeff::constant(gr(-2, 0))]], 1, &[gr(0, 0)], &[]);
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn non_hermitian_metric_is_rejected() {
        let h = vec![
            vec![PolyCoeff::constant(gr(1, 0)), PolyCoeff::constant(gr(0, 1))],
            vec![PolyCoeff::constant(gr(0, 1)), PolyCoeff::constant(gr(1, 0))],
        ];
        assert!(matches!(curvature_nakano(&h, 1, &[gr(0, 0)], &[]), Err(Error::Contract(_))));
    }

    #[test]
    fn determinant_of_permutation() {
        let m = vec![vec![gr(0, 0), gr(1, 0)], vec![gr(1, 0), gr(0, 0)]];
        assert_eq!(determinant(m), gr(-1, 0));
    }
}
