//! Exact verification of the deformation-calculus identities.
//!
//! Each identity is evaluated as two independent operator expressions whose
//! exact difference must be the zero form.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::connection::Connection;
use super::poly::{gr, monomial_count, PolyCoeff, PolyForm};
use super::random as gen;
use super::word::{Context, Expr, Letter};
use crate::error::{Error, Result};
use crate::exterior::{Coefficient, Form, ValueKind};

use Letter::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityTag {
    /// `i_φ i_ψ = (−1)^{(q+1)(s+1)} i_ψ i_φ`
    Db2,
    /// `[L_{φ'}, i_φ] = i_{[φ',φ]}`
    LieContraction,
    /// `[φ,φ']⌟α` through `∇'` and contractions
    F1,
    /// the `∂̄` analogue of `F1`, which vanishes
    F2,
    /// Tian–Todorov
    TT,
    /// Tian–Todorov for divergence-free fields and the volume form
    TTCY,
    /// `e^{−i_φ} ∂̄ e^{i_φ} = ∂̄ − L^{0,1}_φ`
    F3,
    /// `e^{−i_φ} ∇' e^{i_φ} = ∇' − L^{1,0}_φ − i_{½[φ,φ]}`
    F4,
    /// conjugation of `∂̄ − L_φ` for integrable `φ`
    F35,
    /// `F_k = 0`
    Fk(u8),
    /// conjugated `∇` on `(n,•)`-forms
    Rec1,
    /// closedness of the next bracket sum along an integrable series
    BracketClosed,
    /// cyclic sum of double brackets
    Jacobi,
}

impl IdentityTag {
    /// Every tag for dimension `n`, with `F_k` for `k = 2..=n+1`.
    pub fn all(n: usize) -> Vec<IdentityTag> {
        let mut v = vec![
            IdentityTag::Db2,
            IdentityTag::LieContraction,
            IdentityTag::F1,
            IdentityTag::F2,
            IdentityTag::TT,
            IdentityTag::TTCY,
            IdentityTag::F3,
            IdentityTag::F4,
            IdentityTag::F35,
        ];
        v.extend((2..=n as u8 + 1).map(IdentityTag::Fk));
        v.extend([IdentityTag::Rec1, IdentityTag::BracketClosed, IdentityTag::Jacobi]);
        v
    }

    /// True when degree bookkeeping forces both sides to vanish for every
    /// input in dimension `n`.
    pub fn vacuous_in(&self, n: usize) -> bool {
        match self {
            IdentityTag::F2 | IdentityTag::BracketClosed | IdentityTag::Jacobi => n < 3,
            IdentityTag::Fk(k) => *k as usize > n,
            _ => false,
        }
    }

    pub fn name(&self) -> String {
        match self {
            IdentityTag::Db2 => "contraction-anticommutation".into(),
            IdentityTag::LieContraction => "lie-contraction-commutator".into(),
            IdentityTag::F1 => "bracket-contraction-expansion".into(),
            IdentityTag::F2 => "dbar-contraction-expansion".into(),
            IdentityTag::TT => "tian-todorov".into(),
            IdentityTag::TTCY => "tian-todorov-volume-form".into(),
            IdentityTag::F3 => "conjugated-dbar".into(),
            IdentityTag::F4 => "conjugated-nabla-prime".into(),
            IdentityTag::F35 => "conjugated-dbar-minus-lie".into(),
            IdentityTag::Fk(k) => format!("power-commutator-F{k}"),
            IdentityTag::Rec1 => "conjugated-connection-top-degree".into(),
            IdentityTag::BracketClosed => "bracket-sum-closedness".into(),
            IdentityTag::Jacobi => "bracket-jacobi".into(),
        }
    }
}

/// Operands for one identity check.
#[derive(Clone, Debug)]
pub struct Instance {
    pub n: usize,
    pub seed: u64,
    pub fields: Vec<PolyForm>,
    pub alpha: PolyForm,
    pub connection: Option<Connection<PolyCoeff>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Verdict {
    pub tag: IdentityTag,
    pub seed: u64,
    pub pass: bool,
    /// Monomials in the exact difference; zero iff the identity holds.
    pub differing_monomials: usize,
    /// Size of the left side, to tell vacuous instances apart.
    pub lhs_monomials: usize,
}

fn anti_degree(f: &PolyForm) -> Result<usize> {
    let ds: Vec<usize> = f.bidegrees().into_iter().map(|(_, q)| q).collect();
    match ds.as_slice() {
        [q] => Ok(*q),
        [] => Ok(0),
        _ => Err(Error::Hypothesis("field must be homogeneous".into())),
    }
}

fn integrability_defect(phi: &PolyForm) -> Result<PolyForm> {
    phi.d_anti().sub(&Form::bracket(phi, phi)?.scale(&PolyCoeff::ratio(1, 2)))
}

fn require(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Hypothesis(what.into()))
    }
}

fn require_01(inst: &Instance, k: usize) -> Result<()> {
    for f in inst.fields.iter().take(k) {
        require(
            f.kind() == ValueKind::Tangent && f.terms().all(|(b, _)| b.p() == 0 && b.q() == 1),
            "fields must be tangent-valued (0,1)-forms",
        )?;
    }
    require(inst.fields.len() >= k, "not enough fields")
}

fn omega0(n: usize) -> PolyForm {
    PolyForm::top_holomorphic(n, PolyCoeff::one())
}

/// A form with holomorphic degree in `p_min..=n` and antiholomorphic degree
/// at most `q_max`.
fn gen_alpha<R: Rng>(rng: &mut R, n: usize, p_min: usize, q_max: usize, kind: ValueKind) -> PolyForm {
    let p = rng.gen_range(p_min.min(n)..=n);
    let q = rng.gen_range(0..=q_max.min(n));
    gen::form(rng, n, p, q, kind)
}

/// Builds a hypothesis-satisfying instance for `tag` from `seed`.
pub fn random_instance(tag: IdentityTag, n: usize, seed: u64) -> Result<Instance> {
    if !(1..=crate::exterior::MAX_DIM).contains(&n) {
        return Err(Error::Contract(format!("dimension {n} unsupported")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0000_0000 ^ ((n as u64) << 40));
    let (kind, connection) = gen::bundle(&mut rng, n);
    let rng = &mut rng;
    let mut inst = Instance {
        n,
        seed,
        fields: Vec::new(),
        alpha: PolyForm::zero(n, kind),
        connection,
    };
    match tag {
        IdentityTag::Db2 | IdentityTag::LieContraction => {
            // degrees chosen so that the composites can be nonzero
            let q = rng.gen_range(0..=1.min(n - 1));
            let s = rng.gen_range(0..=1.min(n - 1 - q));
            inst.fields = vec![gen::tangent(rng, n, q), gen::tangent(rng, n, s)];
            let p_min = if tag == IdentityTag::Db2 { 2.min(n) } else { 1 };
            inst.alpha = gen_alpha(rng, n, p_min, n - q - s, kind);
        }
        IdentityTag::F1 | IdentityTag::F2 => {
            inst.fields = vec![gen::tangent(rng, n, 1), gen::tangent(rng, n, 1)];
            let (p_min, q_max) = if tag == IdentityTag::F1 { (1, n.saturating_sub(2)) } else { (2, n.saturating_sub(3)) };
            inst.alpha = gen_alpha(rng, n, p_min, q_max, kind);
        }
        IdentityTag::F3 | IdentityTag::F4 => {
            inst.fields = vec![gen::tangent(rng, n, 1)];
            inst.alpha = gen_alpha(rng, n, 1, n - 1, kind);
        }
        IdentityTag::Fk(k) => {
            inst.fields = vec![gen::tangent(rng, n, 1)];
            let k = k as usize;
            inst.alpha = gen_alpha(rng, n, (k - 1).min(n), n.saturating_sub(k), kind);
        }
        IdentityTag::F35 => {
            inst.fields = vec![gen::integrable_field(rng, n)];
            inst.alpha = gen_alpha(rng, n, 1, n - 1, kind);
        }
        IdentityTag::Rec1 => {
            let phi = if rng.gen_bool(0.5) {
                gen::integrable_field(rng, n)
            } else {
                gen::tangent(rng, n, 1)
            };
            inst.fields = vec![phi];
            inst.alpha = gen_alpha(rng, n, n, n - 1, kind);
        }
        IdentityTag::TT | IdentityTag::TTCY | IdentityTag::Jacobi | IdentityTag::BracketClosed => {
            inst.connection = None;
            inst.alpha = PolyForm::zero(n, ValueKind::Scalar);
            match tag {
                IdentityTag::TT => {
                    inst.fields = vec![gen::tangent(rng, n, 1), gen::tangent(rng, n, 1)];
                    inst.alpha = gen::form(rng, n, n, 0, ValueKind::Scalar);
                }
                IdentityTag::TTCY => {
                    inst.fields = vec![gen::divergence_free_field(rng, n), gen::divergence_free_field(rng, n)];
                    inst.alpha = omega0(n).scale(&gen::gauss(rng));
                }
                IdentityTag::Jacobi => {
                    inst.fields = (0..3).map(|_| gen::tangent(rng, n, 1)).collect();
                }
                _ => {
                    let phi1 = gen::dbar_closed_field(rng, n);
                    let half = PolyCoeff::ratio(1, 2);
                    let phi2 = gen::dbar_homotopy(&Form::bracket(&phi1, &phi1)?.scale(&half));
                    let s3 = Form::bracket(&phi1, &phi2)?.add(&Form::bracket(&phi2, &phi1)?)?;
                    require(s3.d_anti().is_zero(), "order-3 bracket sum is not closed")?;
                    let phi3 = gen::dbar_homotopy(&s3.scale(&half));
                    inst.fields = vec![phi1, phi2, phi3];
                }
            }
        }
    }
    Ok(inst)
}

fn check_hypotheses(tag: IdentityTag, inst: &Instance) -> Result<()> {
    let n = inst.n;
    match tag {
        IdentityTag::Db2 | IdentityTag::LieContraction => {
            require(inst.fields.len() >= 2, "two fields required")?;
            for f in &inst.fields[..2] {
                require(
                    f.kind() == ValueKind::Tangent && f.terms().all(|(b, _)| b.p() == 0),
                    "fields must be tangent-valued (0,k)-forms",
                )?;
                anti_degree(f)?;
            }
        }
        IdentityTag::F1 | IdentityTag::F2 => require_01(inst, 2)?,
        IdentityTag::F3 | IdentityTag::F4 | IdentityTag::Fk(_) => require_01(inst, 1)?,
        IdentityTag::F35 => {
            require_01(inst, 1)?;
            require(integrability_defect(&inst.fields[0])?.is_zero(), "field is not integrable")?;
        }
        IdentityTag::Rec1 => {
            require_01(inst, 1)?;
            require(inst.alpha.terms().all(|(b, _)| b.p() == n), "form must have holomorphic degree n")?;
        }
        IdentityTag::TT | IdentityTag::TTCY => {
            require_01(inst, 2)?;
            require(
                inst.alpha.kind() == ValueKind::Scalar && inst.alpha.terms().all(|(b, _)| b.p() == n && b.q() == 0),
                "form must be a scalar (n,0)-form",
            )?;
            if tag == IdentityTag::TTCY {
                require(inst.alpha.d().is_zero() && inst.alpha.terms().all(|(_, c)| c.degree() == 0), "volume form must be constant")?;
                for f in &inst.fields[..2] {
                    require(Form::contract(f, &inst.alpha)?.d_holo().is_zero(), "fields must be divergence-free")?;
                }
            }
        }
        IdentityTag::Jacobi => require_01(inst, 3)?,
        IdentityTag::BracketClosed => {
            require_01(inst, 3)?;
            let f = &inst.fields;
            let half = PolyCoeff::ratio(1, 2);
            require(f[0].d_anti().is_zero(), "first coefficient must be closed")?;
            let s2 = Form::bracket(&f[0], &f[0])?;
            require(f[1].d_anti() == s2.scale(&half), "second coefficient violates the integrability recursion")?;
            let s3 = Form::bracket(&f[0], &f[1])?.add(&Form::bracket(&f[1], &f[0])?)?;
            require(f[2].d_anti() == s3.scale(&half), "third coefficient violates the integrability recursion")?;
        }
    }
    Ok(())
}

fn power(k: usize) -> Vec<Letter> {
    vec![Contract(0); k]
}

fn concat(parts: &[&[Letter]]) -> Vec<Letter> {
    parts.iter().flat_map(|p| p.iter().copied()).collect()
}

/// The two sides of an identity as expressions on `alpha`.
fn sides(tag: IdentityTag, inst: &Instance) -> Result<(PolyForm, PolyForm)> {
    let ctx = Context::new(&inst.fields, inst.connection.as_ref());
    let a = &inst.alpha;
    let ev = |e: Expr<PolyCoeff>| e.eval(&ctx, a);
    Ok(match tag {
        IdentityTag::Db2 => {
            let q = anti_degree(&inst.fields[0])?;
            let s = anti_degree(&inst.fields[1])?;
            let sign = if (q + 1) * (s + 1) % 2 == 0 { 1 } else { -1 };
            (
                ev(Expr::word(&[Contract(0), Contract(1)]))?,
                ev(Expr::new().plus(sign, 1, &[Contract(1), Contract(0)]))?,
            )
        }
        IdentityTag::LieContraction => {
            // [L_{φ'}, i_φ] with φ = field 0 of degree k, φ' = field 1 of degree k'
            let k = anti_degree(&inst.fields[0])?;
            let kp = anti_degree(&inst.fields[1])?;
            let sign = if kp * (k + 1) % 2 == 0 { 1 } else { -1 };
            (
                ev(Expr::word(&[Lie(1), Contract(0)]).plus(-sign, 1, &[Contract(0), Lie(1)]))?,
                ev(Expr::word(&[ContractBracket(1, 0)]))?,
            )
        }
        IdentityTag::F1 => (
            ev(Expr::word(&[ContractBracket(0, 1)]))?,
            ev(Expr::new()
                .plus(-1, 1, &[NablaPrime, Contract(1), Contract(0)])
                .plus(-1, 1, &[Contract(0), Contract(1), NablaPrime])
                .plus(1, 1, &[Contract(0), NablaPrime, Contract(1)])
                .plus(1, 1, &[Contract(1), NablaPrime, Contract(0)]))?,
        ),
        IdentityTag::F2 => (
            ev(Expr::new()
                .plus(1, 1, &[Dbar, Contract(1), Contract(0)])
                .plus(1, 1, &[Contract(0), Contract(1), Dbar]))?,
            ev(Expr::new()
                .plus(1, 1, &[Contract(0), Dbar, Contract(1)])
                .plus(1, 1, &[Contract(1), Dbar, Contract(0)]))?,
        ),
        IdentityTag::TT => (
            ev(Expr::word(&[ContractBracket(0, 1)]))?,
            ev(Expr::new()
                .plus(-1, 1, &[Del, Contract(1), Contract(0)])
                .plus(1, 1, &[Contract(0), Del, Contract(1)])
                .plus(1, 1, &[Contract(1), Del, Contract(0)]))?,
        ),
        IdentityTag::TTCY => (
            ev(Expr::word(&[ContractBracket(0, 1)]))?,
            ev(Expr::new().plus(-1, 1, &[Del, Contract(1), Contract(0)]))?,
        ),
        IdentityTag::F3 => (
            ev(Expr::word(&[ExpNeg(0), Dbar, Exp(0)]))?,
            ev(Expr::word(&[Dbar]).plus(-1, 1, &[LieAnti(0)]))?,
        ),
        IdentityTag::F4 => (
            ev(Expr::word(&[ExpNeg(0), NablaPrime, Exp(0)]))?,
            ev(Expr::word(&[NablaPrime])
                .plus(-1, 1, &[LieHolo(0)])
                .plus(-1, 2, &[ContractBracket(0, 0)]))?,
        ),
        IdentityTag::F35 => (
            ev(Expr::word(&[Dbar]).plus(-1, 1, &[LieHolo(0)]))?,
            ev(Expr::word(&[ExpNeg(0), Dbar, Exp(0)]).plus(-1, 1, &[ExpNeg(0), Lie(0), Exp(0)]))?,
        ),
        IdentityTag::Fk(k) => {
            let k = k as usize;
            let kk = k as i64;
            let rest = Expr::new()
                .plus(kk - 1, 1, &concat(&[&power(k), &[NablaPrime]]))
                .plus(1, 1, &concat(&[&[NablaPrime], &power(k)]))
                .plus(kk * (kk - 1) / 2, 1, &concat(&[&power(k - 2), &[ContractBracket(0, 0)]]));
            (
                ev(Expr::new().plus(kk, 1, &concat(&[&power(k - 1), &[NablaPrime], &power(1)])))?,
                ev(rest)?,
            )
        }
        IdentityTag::Rec1 => {
            let phi = &inst.fields[0];
            let defect = integrability_defect(phi)?;
            let lhs = ev(Expr::word(&[ExpNeg(0), Nabla, Exp(0)]))?;
            let mut rhs = ev(Expr::word(&[Dbar]).plus(1, 1, &[NablaPrime, Contract(0)]))?;
            if !defect.is_zero() {
                rhs = rhs.add(&Form::contract(&defect, a)?)?;
            }
            (lhs, rhs)
        }
        IdentityTag::BracketClosed => {
            let f = &inst.fields;
            let outer = Form::bracket(&f[0], &f[2])?.add(&Form::bracket(&f[2], &f[0])?)?;
            (outer.d_anti(), Form::bracket(&f[1], &f[1])?.d_anti().neg())
        }
        IdentityTag::Jacobi => {
            let f = &inst.fields;
            let br = |x: &PolyForm, y: &PolyForm| Form::bracket(x, y);
            let rest = br(&br(&f[1], &f[2])?, &f[0])?.add(&br(&br(&f[2], &f[0])?, &f[1])?)?;
            (br(&br(&f[0], &f[1])?, &f[2])?, rest.neg())
        }
    })
}

/// Checks the hypotheses of `tag` on `inst`, then compares both sides exactly.
pub fn verify_identity(tag: IdentityTag, inst: &Instance) -> Result<Verdict> {
    if let IdentityTag::Fk(k) = tag {
        if k < 2 {
            return Err(Error::Contract("F_k is defined for k ≥ 2".into()));
        }
    }
    check_hypotheses(tag, inst)?;
    let (lhs, rhs) = sides(tag, inst)?;
    let diff = lhs.sub(&rhs)?;
    Ok(Verdict {
        tag,
        seed: inst.seed,
        pass: diff.is_zero(),
        differing_monomials: monomial_count(&diff),
        lhs_monomials: monomial_count(&lhs).max(monomial_count(&rhs)),
    })
}

/// Runs `count` random instances of `tag`, skipping seeds whose generated
/// instance is rejected or where both sides vanish identically (unless the
/// tag is vacuous in dimension `n`).
pub fn verify_many(tag: IdentityTag, n: usize, first_seed: u64, count: usize) -> Result<Vec<Verdict>> {
    let mut out = Vec::with_capacity(count);
    let mut seed = first_seed;
    let mut rejected = 0;
    let vacuous = tag.vacuous_in(n);
    while out.len() < count {
        match random_instance(tag, n, seed).and_then(|inst| verify_identity(tag, &inst)) {
            Ok(v) if vacuous || v.lhs_monomials > 0 => out.push(v),
            Ok(_) if rejected < 10 * count => rejected += 1,
            Ok(_) => return Err(Error::Hypothesis("too many vacuous instances".into())),
            Err(Error::Hypothesis(_)) if rejected < 10 * count => rejected += 1,
            Err(e) => return Err(e),
        }
        seed += 1;
    }
    Ok(out)
}

/// The worked instance `φ = z₁dz̄₁⊗∂₂`, `ψ = z₂dz̄₂⊗∂₁`, `Ω = dz₁∧dz₂`.
pub fn tian_todorov_example() -> Instance {
    use super::poly::Monomial;
    use crate::exterior::Basis;
    let phi = PolyForm::from_terms(2, ValueKind::Tangent, [(Basis::new(&[], &[0], 1), PolyCoeff::monomial(Monomial::z(0), gr(1, 0)))]);
    let psi = PolyForm::from_terms(2, ValueKind::Tangent, [(Basis::new(&[], &[1], 0), PolyCoeff::monomial(Monomial::z(1), gr(1, 0)))]);
    Instance {
        n: 2,
        seed: 0,
        fields: vec![phi, psi],
        alpha: omega0(2),
        connection: None,
    }
}
