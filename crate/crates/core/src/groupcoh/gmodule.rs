use std::sync::Arc;

use super::group::FiniteGroup;
use crate::error::{Error, Result};
use crate::modlin::hom::{HomModule, TensorModule};
use crate::modlin::subquotient::cokernel_with_lift;
use crate::modlin::zn::{inv_mod, md};
use crate::modlin::{DirectSum, FinAbModule, Mat, ModuleHom};

/// Finite abelian group with a verified left action of a finite group.
#[derive(Clone, Debug)]
pub struct GModule {
    pub group: Arc<FiniteGroup>,
    pub module: FinAbModule,
    action: Vec<Mat>,
}

impl GModule {
    /// `action[g]` is the matrix of `g` acting on `module`.
    pub fn new(group: Arc<FiniteGroup>, module: FinAbModule, mut action: Vec<Mat>) -> Result<Self> {
        if action.len() != group.order() {
            return Err(Error::InvalidAction(format!("{} matrices for a group of order {}", action.len(), group.order())));
        }
        for (g, a) in action.iter_mut().enumerate() {
            ModuleHom::new(module.clone(), module.clone(), a.clone())
                .map_err(|e| Error::InvalidAction(format!("element {g}: {e}")))?;
            a.reduce_rows(module.invariants());
        }
        let gm = GModule { group, module, action };
        gm.validate()?;
        Ok(gm)
    }

    fn validate(&self) -> Result<()> {
        let g = &self.group;
        if self.action[g.identity()] != Mat::identity(self.module.rank()) {
            return Err(Error::InvalidAction("identity does not act trivially".into()));
        }
        for a in 0..g.order() {
            for b in 0..g.order() {
                let lhs = &self.action[g.mul(a, b)];
                let mut rhs = self.action[a].mul(&self.action[b]);
                rhs.reduce_rows(self.module.invariants());
                if *lhs != rhs {
                    return Err(Error::InvalidAction(format!("action({a}*{b}) differs from action({a})*action({b})")));
                }
            }
        }
        Ok(())
    }

    /// Extends generator images multiplicatively and validates the result.
    pub fn from_generators(group: Arc<FiniteGroup>, module: FinAbModule, images: &[Mat]) -> Result<Self> {
        if images.len() != group.generators().len() {
            return Err(Error::InvalidAction(format!(
                "{} generator images for {} generators",
                images.len(),
                group.generators().len()
            )));
        }
        let tree = group.spanning_tree();
        let mut action: Vec<Option<Mat>> = vec![None; group.order()];
        action[group.identity()] = Some(Mat::identity(module.rank()));
        for x in group.bfs_order() {
            if let Some((p, k)) = tree[x] {
                let mut m = action[p].as_ref().expect("parents first").mul(&images[k]);
                m.reduce_rows(module.invariants());
                action[x] = Some(m);
            }
        }
        let action = action.into_iter().map(|m| m.expect("every element reached")).collect();
        Self::new(group, module, action)
    }

    pub fn trivial(group: Arc<FiniteGroup>, module: FinAbModule) -> Self {
        let id = Mat::identity(module.rank());
        GModule { action: vec![id; group.order()], group, module }
    }

    /// Rank-one `Z/n` on which `g` acts by `character[g]`.
    pub fn character(group: Arc<FiniteGroup>, n: i64, character: &[i64]) -> Result<Self> {
        let module = FinAbModule::cyclic(n);
        if module.is_zero() {
            return Ok(Self::trivial(group, module));
        }
        let action = character.iter().map(|&c| Mat::from_rows(&[vec![md(c, n)]])).collect();
        Self::new(group, module, action)
    }

    /// `M(κ)`: the action twisted by a character `κ: G → (Z/n)^×` with `exp(M) | n`.
    pub fn twist(&self, kappa: &[i64]) -> Result<Self> {
        let mut action = Vec::with_capacity(self.group.order());
        for (g, a) in self.action.iter().enumerate() {
            if inv_mod(kappa[g], self.module.exponent().max(2)).is_none() && !self.module.is_zero() {
                return Err(Error::InvalidAction(format!("twist value {} at {g} is not a unit", kappa[g])));
            }
            action.push(a.scale(kappa[g]));
        }
        Self::new(self.group.clone(), self.module.clone(), action)
    }

    pub fn rank(&self) -> usize {
        self.module.rank()
    }

    pub fn action(&self, g: usize) -> &Mat {
        &self.action[g]
    }

    pub fn action_hom(&self, g: usize) -> ModuleHom {
        ModuleHom { source: self.module.clone(), target: self.module.clone(), matrix: self.action[g].clone() }
    }

    pub fn act(&self, g: usize, x: &[i64]) -> Vec<i64> {
        let a = &self.action[g];
        let r = self.rank();
        let mut y = vec![0; r];
        for (i, yi) in y.iter_mut().enumerate() {
            let d = self.module.invariants()[i] as i128;
            let mut acc: i128 = 0;
            for (j, &xj) in x.iter().enumerate() {
                acc += a[(i, j)] as i128 * xj as i128;
            }
            *yi = acc.rem_euclid(d) as i64;
        }
        y
    }

    pub fn is_trivial_action(&self) -> bool {
        let id = Mat::identity(self.rank());
        self.action.iter().all(|a| *a == id)
    }

    /// Restriction along an embedding `sub → G`.
    pub fn restrict(&self, sub: Arc<FiniteGroup>, embedding: &[usize]) -> GModule {
        let action = embedding.iter().map(|&g| self.action[g].clone()).collect();
        GModule { group: sub, module: self.module.clone(), action }
    }

    /// Whether `h: self → other` commutes with the actions.
    pub fn is_equivariant(&self, other: &GModule, h: &ModuleHom) -> bool {
        (0..self.group.order()).all(|g| {
            other.action_hom(g).compose(h) == h.compose(&self.action_hom(g))
        })
    }

    /// `Hom(A, B)` with `(gφ)(a) = g φ(g^{-1} a)`.
    pub fn hom(a: &GModule, b: &GModule) -> (GModule, HomModule) {
        let hm = HomModule::new(&a.module, &b.module);
        let r = hm.module.rank();
        let action = (0..a.group.order())
            .map(|g| {
                let gi = a.group.inv(g);
                let cols: Vec<Vec<i64>> = (0..r)
                    .map(|k| {
                        let phi = hm.to_hom(&hm.module.basis(k));
                        hm.from_hom(&b.action_hom(g).compose(&phi).compose(&a.action_hom(gi)))
                    })
                    .collect();
                Mat::from_cols(r, &cols)
            })
            .collect();
        let gm = GModule::new(a.group.clone(), hm.module.clone(), action).expect("conjugation action");
        (gm, hm)
    }

    /// Dual into `Z/n` with `(gφ)(x) = φ(g^{-1} x)`.
    pub fn dual_into(&self, n: i64) -> (GModule, HomModule) {
        GModule::hom(self, &GModule::trivial(self.group.clone(), FinAbModule::cyclic(n)))
    }

    /// Diagonal action on `A ⊗ B`.
    pub fn tensor(a: &GModule, b: &GModule) -> (GModule, TensorModule) {
        let tm = TensorModule::new(&a.module, &b.module);
        let action = (0..a.group.order())
            .map(|g| tm.tensor_maps(&tm, &a.action_hom(g), &b.action_hom(g)).matrix)
            .collect();
        let gm = GModule::new(a.group.clone(), tm.module.clone(), action).expect("diagonal action");
        (gm, tm)
    }

    pub fn direct_sum(parts: &[&GModule]) -> (GModule, DirectSum) {
        let group = parts[0].group.clone();
        let ds = FinAbModule::direct_sum(&parts.iter().map(|p| p.module.clone()).collect::<Vec<_>>());
        let action = (0..group.order())
            .map(|g| {
                let mut acc = ModuleHom::zero(&ds.module, &ds.module);
                for (k, p) in parts.iter().enumerate() {
                    acc = acc.add(&ds.inclusions[k].compose(&p.action_hom(g)).compose(&ds.projections[k]));
                }
                acc.matrix
            })
            .collect();
        let gm = GModule::new(group, ds.module.clone(), action).expect("direct sum action");
        (gm, ds)
    }

    /// Cokernel of an equivariant map with the induced action.
    pub fn cokernel(a: &GModule, b: &GModule, h: &ModuleHom) -> Result<(GModule, ModuleHom, Mat)> {
        if !a.is_equivariant(b, h) {
            return Err(Error::NotEquivariant("cokernel of a non-equivariant map".into()));
        }
        let (q, proj, lift) = cokernel_with_lift(h);
        let action = (0..a.group.order())
            .map(|g| {
                let cols: Vec<Vec<i64>> = (0..q.rank())
                    .map(|k| proj.apply(&b.act(g, &lift.col(k))))
                    .collect();
                Mat::from_cols(q.rank(), &cols)
            })
            .collect();
        let gm = GModule::new(a.group.clone(), q, action)?;
        Ok((gm, proj, lift))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_action_and_hom() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let m = GModule::from_generators(g.clone(), FinAbModule::cyclic(5), &[Mat::from_rows(&[vec![4]])]).unwrap();
        assert_eq!(m.act(1, &[2]), vec![3]);
        let (h, _) = GModule::hom(&m, &m);
        assert!(h.is_trivial_action());
        let (d, _) = m.dual_into(5);
        assert_eq!(d.act(1, &[1]), vec![4]);
    }

    #[test]
    fn bad_generator_image_rejected() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        // an element of order 2 cannot act by multiplication by 2 on Z/5
        assert!(GModule::from_generators(g, FinAbModule::cyclic(5), &[Mat::from_rows(&[vec![2]])]).is_err());
    }
}
