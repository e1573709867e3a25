//! The augmentation-ideal extension `0 → X → Z/p^e[X]/I² → Z/p^e → 0`,
//! modelled as `Z/p^e ⊕ X` with `σ(a, x) = (a, x + a·μ(σ))`.

use std::sync::Arc;

use super::split::SplitExtension;
use crate::error::{Error, Result};
use crate::groupcoh::{Cochain, FiniteGroup, GModule};
use crate::modlin::subquotient::{common_modulus, span_of};
use crate::modlin::zn::prime_power;
use crate::modlin::{FinAbModule, Mat, ModuleHom};

#[derive(Clone, Debug)]
pub struct AugmentationData {
    pub p: i64,
    pub e: u32,
    pub x: FinAbModule,
    /// `mu[g]` is `μ(g) ∈ X`
    pub mu: Vec<Vec<i64>>,
    pub ext: SplitExtension,
}

impl AugmentationData {
    pub fn modulus(&self) -> i64 {
        self.p.pow(self.e)
    }

    /// `μ` as a 1-cochain with values in `X`.
    pub fn mu_cochain(&self) -> Cochain {
        let n = self.ext.group().order();
        Cochain::from_fn(n, 1, self.x.rank(), |t| self.mu[t[0]].clone())
    }

    /// `Hom(Z/p^e, X) ≅ X`, `φ ↦ φ(1)`.
    pub fn identify(&self, phi: &ModuleHom) -> Vec<i64> {
        phi.apply(&[1])
    }

    /// Whether the extension cocycle equals `μ` under the identification.
    pub fn cocycle_is_mu(&self) -> bool {
        let n = self.ext.group().order();
        (0..n).all(|g| self.x.reduce(&self.identify(&self.ext.cocycle_value(g))) == self.x.reduce(&self.mu[g]))
    }
}

/// The homomorphism `G → X` with the given images of `group.generators()`.
pub fn extend_homomorphism(group: &FiniteGroup, x: &FinAbModule, images: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    if images.len() != group.generators().len() {
        return Err(Error::InvalidInput(format!("{} images for {} generators", images.len(), group.generators().len())));
    }
    let tree = group.spanning_tree();
    let mut mu = vec![x.zero_element(); group.order()];
    for g in group.bfs_order() {
        if let Some((parent, k)) = tree[g] {
            mu[g] = x.add(&mu[parent], &images[k]);
        }
    }
    for a in 0..group.order() {
        for b in 0..group.order() {
            if mu[group.mul(a, b)] != x.add(&mu[a], &mu[b]) {
                return Err(Error::InvalidInput("generator images do not define a homomorphism".into()));
            }
        }
    }
    Ok(mu)
}

/// Whether the values of `μ` generate `X`.
pub fn is_surjective(x: &FinAbModule, mu: &[Vec<i64>]) -> bool {
    if x.is_zero() {
        return true;
    }
    let n = common_modulus(x.invariants());
    let s = span_of(x.invariants(), n, mu);
    s.row_orders().iter().map(|&o| o as u128).product::<u128>() == x.order()
}

pub fn augmentation_extension(group: Arc<FiniteGroup>, x: &FinAbModule, mu: &[Vec<i64>], p: i64, e: u32) -> Result<AugmentationData> {
    let q = p.checked_pow(e).ok_or_else(|| Error::InvalidInput("p^e overflows".into()))?;
    if !matches!(prime_power(q), Some((pp, _)) if pp == p) || e == 0 {
        return Err(Error::InvalidInput(format!("{p}^{e} is not a prime power")));
    }
    if q % x.exponent().max(1) != 0 {
        return Err(Error::InvalidInput(format!("exponent of X = {x} does not divide {q}")));
    }
    if mu.len() != group.order() || mu.iter().any(|v| v.len() != x.rank()) {
        return Err(Error::InvalidInput("μ must give one element of X per group element".into()));
    }
    let mu: Vec<Vec<i64>> = mu.iter().map(|v| x.reduce(v)).collect();
    for a in 0..group.order() {
        for b in 0..group.order() {
            if mu[group.mul(a, b)] != x.add(&mu[a], &mu[b]) {
                return Err(Error::InvalidInput(format!("μ is not a homomorphism at ({a}, {b})")));
            }
        }
    }
    if !is_surjective(x, &mu) {
        return Err(Error::InvalidInput(
            "μ is not surjective; restrict X to the image of μ before building the extension".into(),
        ));
    }
    let zq = FinAbModule::cyclic(q);
    let ds = FinAbModule::direct_sum(&[zq.clone(), x.clone()]);
    let (i_c, i_x, p_c) = (&ds.inclusions[0], &ds.inclusions[1], &ds.projections[0]);
    let action = (0..group.order())
        .map(|g| {
            let col = ModuleHom::new(zq.clone(), x.clone(), Mat::from_cols(x.rank(), &[mu[g].clone()]))
                .expect("exp X divides p^e");
            ModuleHom::identity(&ds.module).add(&i_x.compose(&col).compose(p_c)).matrix
        })
        .collect();
    let b = GModule::new(group.clone(), ds.module.clone(), action)?;
    let a = GModule::trivial(group.clone(), x.clone());
    let c = GModule::trivial(group, zq);
    let ext = SplitExtension::new(a, b, c, i_x.clone(), p_c.clone(), Some(i_c.clone()))?;
    Ok(AugmentationData { p, e, x: x.clone(), mu, ext })
}
