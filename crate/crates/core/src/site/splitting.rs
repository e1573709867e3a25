//! The local splitting criterion: for a given `φ_v: C → A`, `ℓ_v(χ) = dφ_v`
//! holds exactly when `s − ι∘φ_v` is `G_v`-equivariant, exactly when
//! `t + φ_v∘π` is.

use serde::Serialize;

use crate::error::Result;
use crate::extensions::SplitExtension;

use super::model::SiteModel;
use super::selmer::{local_conditions, selmer_trivialize, LocalConditions, Trivialization};

#[derive(Clone, Debug, Serialize)]
pub struct SplittingCase {
    pub instance: usize,
    pub local: String,
    /// `solved`, `perturbed` or `obstructed`
    pub kind: &'static str,
    pub phi: Vec<i64>,
    pub conditions: LocalConditions,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SplittingReport {
    pub instances: usize,
    pub trivialized: usize,
    pub obstructed: usize,
    /// tested `(v, φ_v)` pairs
    pub checks: usize,
    /// pairs where all three conditions fail
    pub failures: usize,
    /// pairs where the conditions disagree
    pub inconsistent: Vec<SplittingCase>,
}

impl SplittingReport {
    pub fn passed(&self) -> bool {
        self.inconsistent.is_empty()
    }
}

/// For each `(E, site)`: the solved `φ_v` (all conditions true), a random
/// perturbation `φ_v + ψ`, and random `φ` at obstructed locals.
pub fn splitting_suite<R: rand::Rng + ?Sized>(cases: &[(SplitExtension, SiteModel)], rng: &mut R) -> Result<SplittingReport> {
    let mut rep = SplittingReport { instances: cases.len(), ..Default::default() };
    for (k, (base, site)) in cases.iter().enumerate() {
        let ext = base.twist(&site.twist)?;
        let chi = ext.cocycle();
        let random_phi = |rng: &mut R| -> Vec<i64> { chi.hom.module.invariants().iter().map(|&m| rng.gen_range(0..m)).collect() };
        let record = |rep: &mut SplittingReport, v: usize, kind: &'static str, phi: Vec<i64>| {
            let conditions = local_conditions(&ext, &chi, site, v, &chi.coords.to_hom(&phi));
            rep.checks += 1;
            if !conditions.coboundary && conditions.consistent() {
                rep.failures += 1;
            }
            if !conditions.consistent() {
                rep.inconsistent.push(SplittingCase { instance: k, local: site.locals[v].name.clone(), kind, phi, conditions });
            }
        };
        match selmer_trivialize(base, site)? {
            Trivialization::Trivialized(d) => {
                rep.trivialized += 1;
                for (v, phi) in d.phis.iter().enumerate() {
                    let x = chi.coords.from_hom(phi);
                    record(&mut rep, v, "solved", x.clone());
                    let psi = random_phi(rng);
                    let y = x.iter().zip(&psi).zip(chi.hom.module.invariants()).map(|((a, b), m)| (a + b) % m).collect();
                    record(&mut rep, v, "perturbed", y);
                }
            }
            Trivialization::Obstructed(o) => {
                rep.obstructed += 1;
                for _ in 0..2 {
                    let phi = random_phi(rng);
                    record(&mut rep, o.local, "obstructed", phi);
                }
            }
        }
    }
    Ok(rep)
}
