//! Operator words over the deformation calculus, applied right to left.

use serde::{Deserialize, Serialize};

use super::connection::Connection;
use crate::error::{Error, Result};
use crate::exterior::{Coefficient, Form, ValueKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Letter {
    Del,
    Dbar,
    Nabla,
    NablaPrime,
    /// `i_{φ_k}`
    Contract(usize),
    /// `L_{φ_k}` built from `∇`
    Lie(usize),
    /// `L^{1,0}_{φ_k}` built from `∇'`
    LieHolo(usize),
    /// `L^{0,1}_{φ_k}` built from `∂̄`
    LieAnti(usize),
    /// `e^{i_{φ_k}}`
    Exp(usize),
    /// `e^{−i_{φ_k}}`
    ExpNeg(usize),
    /// `η_k ∧ ·`
    Wedge(usize),
    /// `i_{[φ_j, φ_k]}`
    ContractBracket(usize, usize),
}

/// The operands a word refers to by index, plus the bundle connection.
pub struct Context<'a, C: Coefficient> {
    pub operands: &'a [Form<C>],
    pub connection: Option<&'a Connection<C>>,
}

impl<'a, C: Coefficient> Context<'a, C> {
    pub fn new(operands: &'a [Form<C>], connection: Option<&'a Connection<C>>) -> Self {
        Context { operands, connection }
    }

    fn operand(&self, k: usize) -> std::result::Result<&Form<C>, String> {
        self.operands
            .get(k)
            .ok_or_else(|| format!("operand {k} does not exist ({} supplied)", self.operands.len()))
    }

    fn nabla_prime(&self, f: &Form<C>) -> Result<Form<C>> {
        match self.connection {
            Some(c) => c.nabla_prime(f),
            None => Ok(f.d_holo()),
        }
    }

    fn nabla(&self, f: &Form<C>) -> Result<Form<C>> {
        match self.connection {
            Some(c) => c.nabla(f),
            None => Ok(f.d()),
        }
    }

    fn letter(&self, l: Letter, f: &Form<C>) -> std::result::Result<Form<C>, String> {
        let e = |r: Error| r.to_string();
        match l {
            Letter::Del => Ok(f.d_holo()),
            Letter::Dbar => Ok(f.d_anti()),
            Letter::Nabla => self.nabla(f).map_err(e),
            Letter::NablaPrime => self.nabla_prime(f).map_err(e),
            Letter::Contract(k) => Form::contract(self.operand(k)?, f).map_err(e),
            Letter::Lie(k) => Form::lie_with(self.operand(k)?, f, |x| self.nabla(x)).map_err(e),
            Letter::LieHolo(k) => Form::lie_with(self.operand(k)?, f, |x| self.nabla_prime(x)).map_err(e),
            Letter::LieAnti(k) => Form::lie_with(self.operand(k)?, f, |x| Ok(x.d_anti())).map_err(e),
            Letter::Exp(k) | Letter::ExpNeg(k) => {
                let phi = self.operand(k)?;
                if phi.terms().any(|(b, _)| b.q() != 1) {
                    return Err("exponential contraction needs a (0,1) field".into());
                }
                Form::exp_contract(phi, f, matches!(l, Letter::ExpNeg(_))).map_err(e)
            }
            Letter::Wedge(k) => {
                let eta = self.operand(k)?;
                if eta.kind() != ValueKind::Scalar {
                    return Err("left wedge factor must be scalar-valued".into());
                }
                eta.wedge(f).map_err(e)
            }
            Letter::ContractBracket(j, k) => {
                let b = Form::bracket(self.operand(j)?, self.operand(k)?).map_err(e)?;
                Form::contract(&b, f).map_err(e)
            }
        }
    }
}

/// Applies `word` to `alpha`; the rightmost letter acts first.
///
/// Errors name the offending letter by its 0-based position in the word.
pub fn apply_operator<C: Coefficient>(word: &[Letter], ctx: &Context<'_, C>, alpha: &Form<C>) -> Result<Form<C>> {
    let mut cur = alpha.clone();
    for (position, l) in word.iter().enumerate().rev() {
        cur = ctx.letter(*l, &cur).map_err(|reason| Error::Word { position, reason })?;
    }
    Ok(cur)
}

/// A linear combination `Σ c_w · w`.
#[derive(Clone, Debug)]
pub struct Expr<C: Coefficient> {
    pub terms: Vec<(C::Scalar, Vec<Letter>)>,
}

impl<C: Coefficient> Expr<C> {
    pub fn new() -> Self {
        Expr { terms: Vec::new() }
    }

    pub fn word(word: &[Letter]) -> Self {
        Expr::new().plus(1, 1, word)
    }

    /// Adds `(num/den) · word`.
    pub fn plus(mut self, num: i64, den: i64, word: &[Letter]) -> Self {
        self.terms.push((C::ratio(num, den), word.to_vec()));
        self
    }

    pub fn eval(&self, ctx: &Context<'_, C>, alpha: &Form<C>) -> Result<Form<C>> {
        let mut out = Form::zero(alpha.dim(), alpha.kind());
        for (c, w) in &self.terms {
            let v = apply_operator(w, ctx, alpha)?.scale(c);
            out = out.add(&v)?;
        }
        Ok(out)
    }
}

impl<C: Coefficient> Default for Expr<C> {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::poly::{gr, Monomial, PolyCoeff, PolyForm};
    use crate::exterior::Basis;

    #[test]
    fn rejects_with_position() {
        let phi = PolyForm::from_terms(2, ValueKind::Scalar, [(Basis::new(&[0], &[], 0), PolyCoeff::one())]);
        let alpha = PolyForm::from_terms(2, ValueKind::Scalar, [(Basis::new(&[0, 1], &[], 0), PolyCoeff::one())]);
        let ops = [phi];
        let ctx = Context::new(&ops, None);
        let err = apply_operator(&[Letter::Dbar, Letter::Contract(0), Letter::Del], &ctx, &alpha).unwrap_err();
        match err {
            Error::Word { position, .. } => assert_eq!(position, 1),
            other => panic!("unexpected {other:?}"),
        }
        let err = apply_operator(&[Letter::Contract(3)], &ctx, &alpha).unwrap_err();
        assert!(matches!(err, Error::Word { position: 0, .. }));
    }

    #[test]
    fn nabla_without_connection_is_d() {
        let f = PolyForm::from_terms(2, ValueKind::Scalar, [(Basis::new(&[], &[], 0), PolyCoeff::monomial(Monomial::new(&[1, 0], &[0, 1]), gr(1, 1)))]);
        let ctx: Context<'_, PolyCoeff> = Context::new(&[], None);
        assert_eq!(apply_operator(&[Letter::Nabla], &ctx, &f).unwrap(), f.d());
    }
}
