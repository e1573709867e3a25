//! Sign checks for "connecting map = cup with the extension cocycle".

use super::dual::DualExtension;
use super::split::SplitExtension;
use crate::error::Result;
use crate::groupcoh::{random_combination, Boundaries, Cochain};
use crate::sign::SignSet;

/// The signs `ε` with `lhs − ε·rhs` a coboundary.
pub fn allowed_signs(lhs: &[i64], rhs: &[i64], b: &Boundaries) -> SignSet {
    let moduli = b.moduli();
    SignSet::probe(|eps| {
        let diff: Vec<i64> = lhs
            .iter()
            .zip(rhs)
            .zip(moduli)
            .map(|((&x, &y), &m)| (x - eps * y).rem_euclid(m))
            .collect();
        b.contains(&diff)
    })
}

#[derive(Clone, Debug)]
pub struct SignSample {
    pub allowed: SignSet,
    /// whether `∂f` is a coboundary
    pub connecting_trivial: bool,
    pub input: Cochain,
}

/// `∂^i f` against `χ ∪ f` for `trials` random cocycles `f ∈ Z^i(G, C)`.
pub fn cupprodconn_samples<R: rand::Rng + ?Sized>(
    e: &SplitExtension,
    i: usize,
    trials: usize,
    rng: &mut R,
    max_cells: usize,
) -> Result<Vec<SignSample>> {
    let ses = e.ses(i + 1, max_cells)?;
    let chi = e.cocycle();
    let b = ses.x.boundaries(i as i32 + 1);
    let gens = ses.z.cocycle_gens(i as i32);
    let mut out = Vec::with_capacity(trials);
    for _ in 0..trials {
        let v = random_combination(&gens, ses.z.piece(i as i32), rng);
        let f = Cochain { degree: i, rank: e.c.rank(), values: v };
        let lhs = ses.connecting_cochain(i as i32, &f.values);
        let rhs = chi.cup(&f, &e.c);
        out.push(SignSample {
            allowed: allowed_signs(&lhs, &rhs.values, &b),
            connecting_trivial: b.contains(&lhs),
            input: f,
        });
    }
    Ok(out)
}

/// `χ* ∪ g` against `∂_dual g` for random `g ∈ Z^i(G, A^∨)`; the expected sign is `−1`.
pub fn dual_samples<R: rand::Rng + ?Sized>(
    d: &DualExtension,
    i: usize,
    trials: usize,
    rng: &mut R,
    max_cells: usize,
) -> Result<Vec<SignSample>> {
    let ses = d.ext.ses(i + 1, max_cells)?;
    let b = ses.x.boundaries(i as i32 + 1);
    let gens = ses.z.cocycle_gens(i as i32);
    let mut out = Vec::with_capacity(trials);
    for _ in 0..trials {
        let v = random_combination(&gens, ses.z.piece(i as i32), rng);
        let g = Cochain { degree: i, rank: d.ext.c.rank(), values: v };
        let conn = ses.connecting_cochain(i as i32, &g.values);
        let cupped = d.chi_star.cup(&g, &d.ext.c);
        out.push(SignSample {
            allowed: allowed_signs(&cupped.values, &conn, &b),
            connecting_trivial: b.contains(&conn),
            input: g,
        });
    }
    Ok(out)
}
