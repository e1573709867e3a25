//! Degreewise split short exact sequences of complexes and their connecting maps.

use super::complex::{check_exact, induced, ChainMap, Cohomology, Complex};
use super::sparse::SparseMat;
use crate::error::{Error, Result};
use crate::modlin::{Mat, ModuleHom};

/// `0 → X → Y → Z → 0` with degreewise linear splittings: `p ∘ lift = id`
/// and `i ∘ retract + lift ∘ p = id`.
#[derive(Clone, Debug)]
pub struct ShortExact {
    pub x: Complex,
    pub y: Complex,
    pub z: Complex,
    pub i: ChainMap,
    pub p: ChainMap,
    pub lift: Vec<SparseMat>,
    pub retract: Vec<SparseMat>,
}

impl ShortExact {
    /// Verifies the chain-map property and the splitting identities.
    pub fn verify(&self) -> Result<()> {
        self.i.check(&self.x, &self.y)?;
        self.p.check(&self.y, &self.z)?;
        for k in 0..self.x.len() {
            let d = self.x.lo + k as i32;
            let (i, p) = (self.i.at(d).unwrap(), self.p.at(d).unwrap());
            let (l, r) = (&self.lift[k], &self.retract[k]);
            let bad = |what: &str| Err(Error::InvalidInput(format!("short exact sequence `{}`: {what} fails in degree {d}", self.y.label)));
            if !p.compose(i, self.z.piece(d)).is_zero() {
                return bad("p∘i = 0");
            }
            if p.compose(l, self.z.piece(d)) != SparseMat::identity(self.z.dim(d)) {
                return bad("p∘lift = id");
            }
            if r.compose(i, self.x.piece(d)) != SparseMat::identity(self.x.dim(d)) {
                return bad("retract∘i = id");
            }
            let sum = i.compose(r, self.y.piece(d)).add(&l.compose(p, self.y.piece(d)), self.y.piece(d));
            if sum != SparseMat::identity(self.y.dim(d)) {
                return bad("i∘retract + lift∘p = id");
            }
        }
        Ok(())
    }

    /// Cochain-level connecting map: `z ↦ retract(d_Y(lift z))`.
    pub fn connecting_cochain(&self, deg: i32, z: &[i64]) -> Vec<i64> {
        let k = (deg - self.x.lo) as usize;
        let ly = self.lift[k].apply(z, self.y.piece(deg));
        let dly = self.y.apply_d(deg, &ly);
        let xi = self.retract[k + 1].apply(&dly, self.x.piece(deg + 1));
        debug_assert_eq!(self.i.apply(deg + 1, &xi, &self.y), dly, "d(lift z) must come from X");
        xi
    }

    /// `κ^deg: H^deg(Z) → H^{deg+1}(X)`.
    pub fn connecting(&self, deg: i32, hz: &Cohomology, hx1: &Cohomology) -> ModuleHom {
        let (src, tgt) = (hz.module(), hx1.module());
        let cols: Vec<Vec<i64>> = (0..src.rank())
            .map(|c| {
                let xi = self.connecting_cochain(deg, &hz.generator(c));
                hx1.class_of(&xi).expect("connecting cochain is a cocycle")
            })
            .collect();
        ModuleHom::new(src, tgt.clone(), Mat::from_cols(tgt.rank(), &cols)).expect("connecting map is well defined")
    }

    /// The long exact sequence `H^a(X) → H^a(Y) → H^a(Z) → H^{a+1}(X) → …`
    /// through `H^b(Z)`, checked for exactness.
    pub fn long_exact(&self, a: i32, b: i32) -> Result<Vec<ModuleHom>> {
        let mut maps = Vec::new();
        let mut hx = self.x.cohomology(a)?;
        for d in a..=b {
            let hy = self.y.cohomology(d)?;
            let hz = self.z.cohomology(d)?;
            maps.push(induced(self.i.at(d).unwrap(), &hx, &hy, self.y.piece(d)));
            maps.push(induced(self.p.at(d).unwrap(), &hy, &hz, self.z.piece(d)));
            if d < b || self.x.hi() > d + 1 {
                let hx1 = self.x.cohomology(d + 1)?;
                maps.push(self.connecting(d, &hz, &hx1));
                hx = hx1;
            }
        }
        check_exact(&maps).map_err(|e| Error::InvalidInput(format!("long exact sequence of `{}` not exact: {e}", self.y.label)))?;
        Ok(maps)
    }
}
