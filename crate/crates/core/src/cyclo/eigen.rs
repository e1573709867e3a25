use std::sync::Arc;

use rand::Rng;
use super::CycloContext;
use crate::error::{Error, Result};
use crate::groupcoh::{FiniteGroup, GModule};
use crate::modlin::zn::{inv_mod, md, pow_mod};
use crate::modlin::{FinAbModule, Mat, ModuleHom};

/// `Δ = (Z/p)^×` as the cyclic group of order `p−1`; element `k` is `g^k`.
pub fn delta_group(ctx: &CycloContext) -> Arc<FiniteGroup> {
    let mut g = FiniteGroup::cyclic(ctx.delta_order());
    g.set_name(format!("Delta_{}", ctx.p));
    Arc::new(g)
}

/// The `Δ`-module on which the primitive root acts by `gen_action`.
pub fn delta_module(ctx: &CycloContext, module: FinAbModule, gen_action: Mat) -> Result<GModule> {
    let g = delta_group(ctx);
    if g.order() == 1 {
        return Ok(GModule::trivial(g, module));
    }
    GModule::from_generators(g, module, &[gen_action])
}

/// `e_j`, `j = 0..p−1`, on one module, with the three identities checked.
#[derive(Clone, Debug)]
pub struct Idempotents {
    pub maps: Vec<ModuleHom>,
    pub complete: bool,
    pub orthogonal: bool,
    pub idempotent: bool,
}

impl Idempotents {
    pub fn verified(&self) -> bool {
        self.complete && self.orthogonal && self.idempotent
    }

    /// Orders of the eigenspaces `e_j M`.
    pub fn eigenspace_orders(&self) -> Vec<u128> {
        self.maps.iter().map(image_order).collect()
    }
}

fn image_order(h: &ModuleHom) -> u128 {
    crate::modlin::image(h).0.order()
}

/// `e_j = (p−1)^{−1} Σ_δ ω^j(δ) [δ^{−1}]` on a `Δ`-module of exponent dividing `p^e`.
pub fn eigenspace_idempotents(ctx: &CycloContext, m: &GModule) -> Result<Idempotents> {
    let n = ctx.delta_order();
    if m.group.order() != n || m.group.table() != delta_group(ctx).table() {
        return Err(Error::InvalidAction(format!("module is not over Δ of order {n}")));
    }
    let exp = m.module.exponent().max(1);
    if ctx.modulus % exp != 0 {
        return Err(Error::InvalidModule(format!("exponent {exp} does not divide {}", ctx.modulus)));
    }
    let inv = inv_mod(n as i64, exp).ok_or_else(|| Error::InvalidModule(format!("|Δ| = {n} is not invertible mod {exp}")))?;
    let zero = ModuleHom::zero(&m.module, &m.module);
    let maps: Vec<ModuleHom> = (0..n)
        .map(|j| {
            let mut acc = zero.clone();
            for k in 0..n {
                let w = pow_mod(ctx.teichmuller(ctx.delta_residue(k)).expect("unit"), j as u64, ctx.modulus);
                acc = acc.add(&m.action_hom(m.group.inv(k)).scale(md(w, exp)));
            }
            acc.scale(inv)
        })
        .collect();
    let id = ModuleHom::identity(&m.module);
    let complete = maps.iter().fold(zero, |a, e| a.add(e)) == id;
    let mut orthogonal = true;
    let mut idempotent = true;
    for (i, a) in maps.iter().enumerate() {
        for (j, b) in maps.iter().enumerate() {
            let ab = a.compose(b);
            if i == j {
                idempotent &= ab == *a;
            } else {
                orthogonal &= ab.is_zero();
            }
        }
    }
    Ok(Idempotents { maps, complete, orthogonal, idempotent })
}

/// A conjugated diagonal action over `Z/p^e`: `g ↦ P·diag(ω(g)^{j_l})·P^{−1}`.
pub fn random_delta_module<R: Rng + ?Sized>(ctx: &CycloContext, rank: usize, rng: &mut R) -> Result<GModule> {
    let q = ctx.modulus;
    let w = ctx.teichmuller(ctx.generator)?;
    let mut d = Mat::zeros(rank, rank);
    for l in 0..rank {
        let j = rng.gen_range(0..ctx.delta_order() as u64);
        d[(l, l)] = pow_mod(w, j, q);
    }
    let (mut p, mut pinv) = (Mat::identity(rank), Mat::identity(rank));
    for _ in 0..2 * rank {
        if rank < 2 {
            break;
        }
        let (a, b) = (rng.gen_range(0..rank), rng.gen_range(0..rank));
        if a == b {
            continue;
        }
        let c = rng.gen_range(1..q);
        let (mut e, mut einv) = (Mat::identity(rank), Mat::identity(rank));
        e[(a, b)] = c;
        einv[(a, b)] = q - c;
        p = e.mul(&p);
        pinv = pinv.mul(&einv);
    }
    let mut gen = p.mul(&d).mul(&pinv);
    let module = FinAbModule::new(vec![q; rank])?;
    gen.reduce_rows(module.invariants());
    delta_module(ctx, module, gen)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplication_on_z5_is_omega_one() {
        let ctx = CycloContext::new(5, 1).unwrap();
        let g = Mat::from_rows(&[vec![ctx.generator]]);
        let m = delta_module(&ctx, FinAbModule::cyclic(5), g).unwrap();
        let e = eigenspace_idempotents(&ctx, &m).unwrap();
        assert!(e.verified());
        assert_eq!(e.eigenspace_orders(), vec![1, 5, 1, 1]);
    }

    #[test]
    fn trivial_action_is_omega_zero() {
        let ctx = CycloContext::new(7, 2).unwrap();
        let m = GModule::trivial(delta_group(&ctx), FinAbModule::new(vec![7, 49]).unwrap());
        let e = eigenspace_idempotents(&ctx, &m).unwrap();
        assert_eq!(e.maps[0], ModuleHom::identity(&m.module));
        assert!(e.maps[1..].iter().all(|h| h.is_zero()));
        let bad = GModule::trivial(delta_group(&ctx), FinAbModule::cyclic(6));
        assert!(eigenspace_idempotents(&ctx, &bad).is_err());
    }
}
