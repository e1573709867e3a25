//! `g _c∪ (χ ∪ f)` against `(χ* ∪_c g) _c∪ f` in `H^{i+j+1}_c(G, R(1))`.

use serde::Serialize;

use crate::error::Result;
use crate::extensions::{allowed_signs, dual_extension_into};
use crate::groupcoh::standard::cochain_complex;
use crate::groupcoh::{random_combination, Cochain};
use crate::sign::{SignSet, SignTally};

use super::selmer::SelmerData;

#[derive(Clone, Debug, Serialize)]
pub struct AdjunctionSample {
    pub i: usize,
    pub j: usize,
    /// signs `ε` with `lhs − ε·rhs` a coboundary, `rhs` including `(−1)^i`
    pub allowed: SignSet,
    pub lhs_trivial: bool,
    pub f: Vec<i64>,
    pub g: Vec<i64>,
}

impl SelmerData {
    /// Random `f ∈ Z^i(G, C(1))`, `g ∈ Z^j_c(G, A^∨)` with duals into `Z/p^e`
    /// and `χ*(σ) = χ(σ)^*`.
    pub fn adjunction_samples<R: rand::Rng + ?Sized>(
        &self,
        i: usize,
        j: usize,
        trials: usize,
        rng: &mut R,
        max_cells: usize,
    ) -> Result<Vec<AdjunctionSample>> {
        let site = &self.site;
        let n = site.modulus;
        let dual = dual_extension_into(&self.base, n)?;
        let chi_star = &dual.chi_star;
        let (adual, ahm) = self.base.a.dual_into(n);
        let (_, chm) = self.base.c.dual_into(n);
        let p1 = ahm.evaluation();
        let p2 = chi_star.coords.evaluation();
        let p3 = chm.evaluation();
        let cf = cochain_complex(&self.ext.c, i + 1, max_cells)?;
        let cg = site.compact_complex(&adual, j + 1, max_cells)?;
        let target = site.compact_complex(&site.r1(), i + j + 1, max_cells)?;
        let deg = (i + j + 1) as i32;
        let b = target.cc.boundaries(deg);
        let (fg, gg) = (cf.cocycle_gens(i as i32), cg.cc.cocycle_gens(j as i32));
        let sign = if i % 2 == 0 { 1 } else { -1 };
        let mut out = Vec::with_capacity(trials);
        for _ in 0..trials {
            let f = Cochain { degree: i, rank: self.ext.c.rank(), values: random_combination(&fg, cf.piece(i as i32), rng) };
            let g = random_combination(&gg, cg.cc.piece(j as i32), rng);
            let chi_f = Cochain { degree: i + 1, rank: self.ext.a.rank(), values: self.chi_tilde(&f) };
            let lhs = site.cup_lc(&g, j, &adual.module, &chi_f, &self.ext.a, &p1);
            let h = site.cup_c(&chi_star.chi, &g, j, &adual, &p2);
            let rhs = site.cup_lc(&h, j + 1, &chm.module, &f, &self.ext.c, &p3);
            let rhs: Vec<i64> = rhs.iter().zip(b.moduli()).map(|(&x, &m)| (sign * x).rem_euclid(m)).collect();
            out.push(AdjunctionSample {
                i,
                j,
                allowed: allowed_signs(&lhs, &rhs, &b),
                lhs_trivial: b.contains(&lhs),
                f: f.values,
                g,
            });
        }
        Ok(out)
    }
}

/// Sign bookkeeping for one `(i, j)`.
#[derive(Clone, Debug, Serialize)]
pub struct AdjunctionPair {
    pub i: usize,
    pub j: usize,
    /// against `(−1)^i (χ* ∪_c g) _c∪ f`
    pub literal: SignTally,
    /// against `(−1)^j (χ* ∪_c g) _c∪ f`
    pub graded: SignTally,
}

#[derive(Clone, Debug, Serialize)]
pub struct AdjunctionReport {
    pub instances: usize,
    pub pairs: Vec<AdjunctionPair>,
    /// one sign across every `(i, j)` with the `(−1)^i` factor
    pub literal: SignTally,
    /// one sign across every `(i, j)` with the `(−1)^j` factor
    pub graded: SignTally,
    /// samples with `f` a coboundary whose two sides were not both trivial
    pub coboundary_failures: usize,
}

impl AdjunctionReport {
    pub fn pair(&self, i: usize, j: usize) -> Option<&AdjunctionPair> {
        self.pairs.iter().find(|p| p.i == i && p.j == j)
    }
}

/// Runs `trials` cocycle pairs per `(i, j)` on every instance, plus one
/// coboundary `f` per instance and pair.
pub fn verify_pairing_adjunction<R: rand::Rng + ?Sized>(
    instances: &[SelmerData],
    pairs: &[(usize, usize)],
    trials: usize,
    rng: &mut R,
    max_cells: usize,
) -> Result<AdjunctionReport> {
    let mut out: Vec<AdjunctionPair> =
        pairs.iter().map(|&(i, j)| AdjunctionPair { i, j, literal: SignTally::default(), graded: SignTally::default() }).collect();
    let mut coboundary_failures = 0;
    for (k, d) in instances.iter().enumerate() {
        for p in out.iter_mut() {
            for s in d.adjunction_samples(p.i, p.j, trials, rng, max_cells)? {
                p.literal.record(k, s.allowed);
                p.graded.record(k, regrade(s.allowed, p.i + p.j));
            }
            if !d.adjunction_coboundary_check(p.i, p.j, rng, max_cells)? {
                coboundary_failures += 1;
            }
        }
    }
    let mut literal = SignTally::default();
    let mut graded = SignTally::default();
    for p in &out {
        literal.merge(&p.literal);
        graded.merge(&p.graded);
    }
    Ok(AdjunctionReport { instances: instances.len(), pairs: out, literal, graded, coboundary_failures })
}

/// Moves a sign set from the `(−1)^i` to the `(−1)^j` normalization.
fn regrade(s: SignSet, i_plus_j: usize) -> SignSet {
    if i_plus_j % 2 == 0 {
        s
    } else {
        SignSet { plus: s.minus, minus: s.plus }
    }
}

impl SelmerData {
    /// With `f = dh` both sides are coboundaries.
    pub fn adjunction_coboundary_check<R: rand::Rng + ?Sized>(&self, i: usize, j: usize, rng: &mut R, max_cells: usize) -> Result<bool> {
        let site = &self.site;
        let n = site.modulus;
        let dual = dual_extension_into(&self.base, n)?;
        let (adual, ahm) = self.base.a.dual_into(n);
        let (_, chm) = self.base.c.dual_into(n);
        let cf = cochain_complex(&self.ext.c, i + 1, max_cells)?;
        let cg = site.compact_complex(&adual, j + 1, max_cells)?;
        let target = site.compact_complex(&site.r1(), i + j + 1, max_cells)?;
        let b = target.cc.boundaries((i + j + 1) as i32);
        let f = if i == 0 {
            vec![0; cf.piece(0).len()]
        } else {
            let h: Vec<i64> = cf.piece(i as i32 - 1).iter().map(|&m| rng.gen_range(0..m)).collect();
            cf.apply_d(i as i32 - 1, &h)
        };
        let f = Cochain { degree: i, rank: self.ext.c.rank(), values: f };
        let g = random_combination(&cg.cc.cocycle_gens(j as i32), cg.cc.piece(j as i32), rng);
        let chi_f = Cochain { degree: i + 1, rank: self.ext.a.rank(), values: self.chi_tilde(&f) };
        let lhs = site.cup_lc(&g, j, &adual.module, &chi_f, &self.ext.a, &ahm.evaluation());
        let h = site.cup_c(&dual.chi_star.chi, &g, j, &adual, &dual.chi_star.coords.evaluation());
        let rhs = site.cup_lc(&h, j + 1, &chm.module, &f, &self.ext.c, &chm.evaluation());
        Ok(b.contains(&lhs) && b.contains(&rhs))
    }
}
