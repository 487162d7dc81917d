use crate::error::{Error, Result};
use crate::exterior::{Basis, Coefficient, Form, ValueKind};

/// `∇ = d + A` on a trivialized rank-`r` bundle, `A` a matrix of `(1,0)`-forms.
///
/// The `(0,1)` part of `∇` is plain `∂̄`, which is the shape of a Chern
/// connection in a holomorphic frame.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection<C> {
    rank: usize,
    /// `a[α][β]` is the scalar `(1,0)`-form `A^α_β`.
    a: Vec<Vec<Form<C>>>,
}

impl<C: Coefficient> Connection<C> {
    pub fn new(a: Vec<Vec<Form<C>>>) -> Result<Self> {
        let rank = a.len();
        if rank == 0 || a.iter().any(|row| row.len() != rank) {
            return Err(Error::Contract("connection matrix must be square and nonempty".into()));
        }
        for row in &a {
            for entry in row {
                if entry.kind() != ValueKind::Scalar || entry.terms().any(|(b, _)| b.p() != 1 || b.q() != 0) {
                    return Err(Error::Contract("connection entries must be scalar (1,0)-forms".into()));
                }
            }
        }
        Ok(Connection { rank, a })
    }

    /// The trivial connection `∇ = d`.
    pub fn flat(n: usize, rank: usize) -> Self {
        Connection {
            rank,
            a: vec![vec![Form::zero(n, ValueKind::Scalar); rank]; rank],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn entry(&self, alpha: usize, beta: usize) -> &Form<C> {
        &self.a[alpha][beta]
    }

    fn check(&self, s: &Form<C>) -> Result<()> {
        match s.kind() {
            ValueKind::Bundle(r) if r as usize == self.rank => Ok(()),
            ValueKind::Scalar if self.rank == 1 => Ok(()),
            k => Err(Error::Contract(format!(
                "connection of rank {} applied to a {k:?}-valued form",
                self.rank
            ))),
        }
    }

    /// `A ∧ s`, acting on the value index.
    pub fn apply_potential(&self, s: &Form<C>) -> Result<Form<C>> {
        self.check(s)?;
        let mut out = Form::zero(s.dim(), s.kind());
        for alpha in 0..self.rank {
            for beta in 0..self.rank {
                let entry = &self.a[alpha][beta];
                if entry.is_empty() {
                    continue;
                }
                let piece = entry.wedge(&s.component(beta))?;
                for (b, c) in piece.terms() {
                    out.accumulate(Basis { slot: alpha as u8, ..*b }, c, false);
                }
            }
        }
        Ok(out)
    }

    /// `∇' = ∂ + A`.
    pub fn nabla_prime(&self, s: &Form<C>) -> Result<Form<C>> {
        self.apply_potential(s)?.add(&s.d_holo())
    }

    /// `∇ = ∇' + ∂̄`.
    pub fn nabla(&self, s: &Form<C>) -> Result<Form<C>> {
        self.nabla_prime(s)?.add(&s.d_anti())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::poly::{gr, Monomial, PolyCoeff, PolyForm};

    #[test]
    fn nabla_of_section_is_d_plus_a() {
        let n = 2;
        let a01 = PolyForm::from_terms(n, ValueKind::Scalar, [(Basis::new(&[1], &[], 0), PolyCoeff::monomial(Monomial::zb(0), gr(2, 1)))]);
        let zero = PolyForm::zero(n, ValueKind::Scalar);
        let conn = Connection::new(vec![vec![zero.clone(), a01.clone()], vec![zero.clone(), zero]]).unwrap();
        let s = PolyForm::from_terms(
            n,
            ValueKind::Bundle(2),
            [
                (Basis::new(&[], &[], 0), PolyCoeff::monomial(Monomial::z(1), gr(1, 0))),
                (Basis::new(&[], &[], 1), PolyCoeff::monomial(Monomial::new(&[1], &[1]), gr(0, 3))),
            ],
        );
        let got = conn.nabla(&s).unwrap();
        let a_s = PolyForm::assemble(n, ValueKind::Bundle(2), &[a01.wedge(&s.component(1)).unwrap(), PolyForm::zero(n, ValueKind::Scalar)]);
        let expect = s.d_holo().add(&a_s).unwrap().add(&s.d_anti()).unwrap();
        assert_eq!(got, expect);
    }

    #[test]
    fn rejects_non_10_entries() {
        let bad = PolyForm::from_terms(1, ValueKind::Scalar, [(Basis::new(&[], &[0], 0), PolyCoeff::one())]);
        assert!(Connection::new(vec![vec![bad]]).is_err());
    }
}
