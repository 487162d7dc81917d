//! Relative residuals of the basic operator identities on one input.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::form::{inner, l2, FourierForm};
use super::hodge::{dbar, dbar_star, del, del_star, green, harmonic, laplacian};
use super::random::random_form;
use crate::error::Result;
use crate::exterior::ValueKind;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AxiomResiduals {
    /// `‖∂̄∂̄f‖ / (‖f‖ + ‖□̄f‖)`
    pub dbar_squared: f64,
    /// `‖∂∂f‖ / (‖f‖ + ‖□̄f‖)`
    pub del_squared: f64,
    /// `‖∂∂̄f + ∂̄∂f‖ / (‖∂∂̄f‖ + ‖∂̄∂f‖)`
    pub anticommutator: f64,
    /// `|⟨∂̄f,b⟩ − ⟨f,∂̄*b⟩| / (‖∂̄f‖‖b‖ + ‖f‖‖∂̄*b‖)`
    pub dbar_adjoint: f64,
    /// The same for `∂`.
    pub del_adjoint: f64,
    /// `‖f − Hf − □̄Gf‖ / ‖f‖`
    pub hodge: f64,
}

impl AxiomResiduals {
    pub fn max(&self) -> f64 {
        [self.dbar_squared, self.del_squared, self.anticommutator, self.dbar_adjoint, self.del_adjoint, self.hodge]
            .into_iter()
            .fold(0.0, f64::max)
    }

    pub fn merge_max(&mut self, o: &AxiomResiduals) {
        self.dbar_squared = self.dbar_squared.max(o.dbar_squared);
        self.del_squared = self.del_squared.max(o.del_squared);
        self.anticommutator = self.anticommutator.max(o.anticommutator);
        self.dbar_adjoint = self.dbar_adjoint.max(o.dbar_adjoint);
        self.del_adjoint = self.del_adjoint.max(o.del_adjoint);
        self.hodge = self.hodge.max(o.hodge);
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        num
    }
}

/// `b_dbar` and `b_del` are the second arguments of the two adjointness
/// checks and should sit one degree above `f` in the matching slot.
pub fn axiom_residuals(f: &FourierForm, b_dbar: &FourierForm, b_del: &FourierForm) -> Result<AxiomResiduals> {
    let scale = l2(f) + l2(&laplacian(f));
    let db = dbar(f);
    let dl = del(f);
    let ddb = del(&db);
    let dbd = dbar(&dl);
    let adj = |d: &FourierForm, b: &FourierForm, ds: &FourierForm| {
        ratio((inner(d, b) - inner(f, ds)).norm(), l2(d) * l2(b) + l2(f) * l2(ds))
    };
    let hodge_rest = f.sub(&harmonic(f))?.sub(&laplacian(&green(f)))?;
    Ok(AxiomResiduals {
        dbar_squared: ratio(l2(&dbar(&db)), scale),
        del_squared: ratio(l2(&del(&dl)), scale),
        anticommutator: ratio(l2(&ddb.add(&dbd)?), l2(&ddb) + l2(&dbd)),
        dbar_adjoint: adj(&db, b_dbar, &dbar_star(b_dbar)),
        del_adjoint: adj(&dl, b_del, &del_star(b_del)),
        hodge: ratio(l2(&hodge_rest), l2(f)),
    })
}

/// Draws a scalar form of random bidegree and band in `1..=k`, with partners
/// for the adjointness checks, and evaluates every residual.
pub fn random_axiom_check<R: Rng>(rng: &mut R, n: usize, k: usize) -> Result<AxiomResiduals> {
    let p = rng.gen_range(0..=n);
    let q = rng.gen_range(0..=n);
    let band = rng.gen_range(1..=k);
    let f = random_form(rng, n, band, p, q, ValueKind::Scalar);
    let b1 = random_form(rng, n, band, p, (q + 1).min(n), ValueKind::Scalar);
    let b2 = random_form(rng, n, band, (p + 1).min(n), q, ValueKind::Scalar);
    axiom_residuals(&f, &b1, &b2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_inputs_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let r = random_axiom_check(&mut rng, 2, 3).unwrap();
            assert!(r.max() < 1e-12, "{r:?}");
        }
    }

    #[test]
    fn a_broken_adjoint_is_detected() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = random_form(&mut rng, 2, 2, 1, 0, ValueKind::Scalar);
        let b = random_form(&mut rng, 2, 2, 1, 1, ValueKind::Scalar);
        let d = dbar(&f);
        let wrong = dbar_star(&b).scale(&num_complex::Complex64::new(1.01, 0.0));
        let r = ratio((inner(&d, &b) - inner(&f, &wrong)).norm(), l2(&d) * l2(&b) + l2(&f) * l2(&wrong));
        assert!(r > 1e-4);
    }
}
