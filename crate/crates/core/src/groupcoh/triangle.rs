//! The cone comparison for triangles `M → N ⊕ N' → O`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::complex::{cone, induced, ChainMap, Complex};
use super::gmodule::GModule;
use super::standard::{cochain_complex, pointwise_map};
use super::sparse::SparseMat;
use crate::error::{Error, Result};
use crate::modlin::howell::Span;
use crate::modlin::subquotient::{common_modulus, embed};
use crate::modlin::zn::lcm;
use crate::modlin::{cokernel, kernel, ModuleHom};

/// `M --(ι, ι')--> N ⊕ N' --(π + π')--> O`.
#[derive(Clone, Debug)]
pub struct Triangle {
    pub m: Complex,
    pub n: Complex,
    pub n2: Complex,
    pub o: Complex,
    pub iota: ChainMap,
    pub iota2: ChainMap,
    pub pi: ChainMap,
    pub pi2: ChainMap,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct QuasiIsoReport {
    /// `(degree, invariants of H(Cone ι), invariants of H(Cone π'), iso?)`
    pub degrees: Vec<(i32, Vec<i64>, Vec<i64>, bool)>,
    pub quasi_isomorphism: bool,
}

fn factor(mut n: i64, acc: &mut BTreeMap<i64, u64>) {
    let mut p = 2;
    while p * p <= n {
        while n % p == 0 {
            *acc.entry(p).or_insert(0) += 1;
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        *acc.entry(n).or_insert(0) += 1;
    }
}

/// Prime factorization of `∏ orders`.
fn order_of(orders: &[i64]) -> BTreeMap<i64, u64> {
    let mut acc = BTreeMap::new();
    for &o in orders {
        factor(o, &mut acc);
    }
    acc
}

/// Order of the image of a degreewise map, as a factorization.
fn image_order(f: &SparseMat, src: &[i64], tgt: &[i64]) -> BTreeMap<i64, u64> {
    let n = lcm(common_modulus(src), common_modulus(tgt)).max(1);
    let mut s = Span::new(n, tgt.len());
    for j in 0..f.ncols() {
        s.push(embed(&f.dense_col(j, tgt), tgt, n));
    }
    s.finalize();
    order_of(&s.row_orders())
}

fn stack(top: &SparseMat, bottom: &SparseMat, top_mod: &[i64], bottom_mod: &[i64]) -> SparseMat {
    let rows = [top.nrows(), bottom.nrows()];
    let cols = [top.ncols()];
    let moduli: Vec<i64> = top_mod.iter().chain(bottom_mod).copied().collect();
    SparseMat::block(&rows, &cols, &[(0, 0, top, 1), (1, 0, bottom, 1)], &moduli)
}

impl Triangle {
    /// Cochains of the pushout square of `ι: A ↪ B` and `ι′: A → A′`:
    /// `O = (B ⊕ A′)/{(ιa, ι′a)}` with `π`, `π′` the two induced maps.
    pub fn pushout(a: &GModule, b: &GModule, iota: &ModuleHom, a2: &GModule, iota2: &ModuleHom, top: usize, max_cells: usize) -> Result<Triangle> {
        if !a.is_equivariant(b, iota) || !a.is_equivariant(a2, iota2) {
            return Err(Error::NotEquivariant("pushout legs must be equivariant".into()));
        }
        let (sum, ds) = GModule::direct_sum(&[b, a2]);
        let diag = ds.inclusions[0].compose(iota).add(&ds.inclusions[1].compose(iota2));
        let (o, proj, _) = GModule::cokernel(a, &sum, &diag)?;
        let pi = proj.compose(&ds.inclusions[0]);
        let pi2 = proj.compose(&ds.inclusions[1]);
        let n = a.group.order();
        let cx = |m: &GModule| cochain_complex(m, top, max_cells);
        Ok(Triangle {
            m: cx(a)?,
            n: cx(b)?,
            n2: cx(a2)?,
            o: cx(&o)?,
            iota: pointwise_map(iota, n, top),
            iota2: pointwise_map(iota2, n, top),
            pi: pointwise_map(&pi, n, top),
            pi2: pointwise_map(&pi2, n, top),
        })
    }

    /// The same data with `π′` doubled.
    pub fn with_doubled_pi2(&self) -> Triangle {
        let maps = self.pi2.maps.iter().enumerate().map(|(k, m)| m.scale(2, self.o.piece(self.o.lo + k as i32))).collect();
        Triangle { pi2: ChainMap { lo: self.pi2.lo, maps }, ..self.clone() }
    }

    /// Composite vanishes and `0 → M → N ⊕ N' → O → 0` is exact in every degree.
    pub fn check_hypothesis(&self) -> Result<()> {
        self.iota.check(&self.m, &self.n)?;
        self.iota2.check(&self.m, &self.n2)?;
        self.pi.check(&self.n, &self.o)?;
        self.pi2.check(&self.n2, &self.o)?;
        for k in 0..self.m.len() {
            let d = self.m.lo + k as i32;
            let fail = |what: &str| Err(Error::InvalidInput(format!("not an exact triangle in degree {d}: {what}")));
            let (i, i2, p, p2) = (self.iota.at(d).unwrap(), self.iota2.at(d).unwrap(), self.pi.at(d).unwrap(), self.pi2.at(d).unwrap());
            let o = self.o.piece(d);
            let comp = p.compose(i, o).add(&p2.compose(i2, o), o);
            if !comp.is_zero() {
                return fail("(π + π')∘(ι, ι') ≠ 0");
            }
            let nn: Vec<i64> = self.n.piece(d).iter().chain(self.n2.piece(d)).copied().collect();
            let first = stack(i, i2, self.n.piece(d), self.n2.piece(d));
            let rows = [o.len()];
            let cols = [p.ncols(), p2.ncols()];
            let second = SparseMat::block(&rows, &cols, &[(0, 0, p, 1), (0, 1, p2, 1)], o);
            let im1 = image_order(&first, self.m.piece(d), &nn);
            let im2 = image_order(&second, &nn, o);
            if im1 != order_of(self.m.piece(d)) {
                return fail("(ι, ι') is not injective");
            }
            if im2 != order_of(o) {
                return fail("π + π' is not surjective");
            }
            // |ker(π+π')| = |N ⊕ N'| / |O| must equal |im (ι, ι')| = |M|
            let mut lhs = order_of(&nn);
            for (q, e) in order_of(o) {
                *lhs.get_mut(&q).expect("O is a quotient of N ⊕ N'") -= e;
            }
            lhs.retain(|_, e| *e > 0);
            if lhs != im1 {
                return fail("middle term not exact");
            }
        }
        Ok(())
    }

    /// Builds `(−π, ι'): Cone(ι) → Cone(π')` and tests it on every computable `H^i`.
    pub fn quasi_iso_check(&self) -> Result<QuasiIsoReport> {
        self.check_hypothesis()?;
        let c1 = cone(&self.iota, &self.m, &self.n, "Cone(ι)")?;
        let c2 = cone(&self.pi2, &self.n2, &self.o, "Cone(π')")?;
        let lo = self.m.lo;
        let maps: Vec<SparseMat> = (0..self.m.len())
            .map(|k| {
                let d = lo + k as i32;
                let rows = [self.n2.dim(d), self.o.dim(d - 1)];
                let cols = [self.m.dim(d), self.n.dim(d - 1)];
                let neg_pi = match self.pi.at(d - 1) {
                    Some(p) => p.clone(),
                    None => SparseMat::zeros(0, 0),
                };
                SparseMat::block(&rows, &cols, &[(0, 0, self.iota2.at(d).unwrap(), 1), (1, 1, &neg_pi, -1)], c2.piece(d))
            })
            .collect();
        let phi = ChainMap { lo, maps };
        compare_cohomology(&phi, &c1, &c2)
    }
}

/// Checks that `phi: c1 → c2` is a chain map and reports, for every degree
/// where both sides are computable, whether it induces an isomorphism.
pub fn compare_cohomology(phi: &ChainMap, c1: &Complex, c2: &Complex) -> Result<QuasiIsoReport> {
    phi.check(c1, c2)?;
    let mut degrees = Vec::new();
    let mut all = true;
    for d in c1.lo.max(c2.lo)..c1.hi().min(c2.hi()) {
        let (h1, h2) = (c1.cohomology(d)?, c2.cohomology(d)?);
        let f = induced(phi.at(d).expect("degree in range"), &h1, &h2, c2.piece(d));
        let iso = kernel(&f).0.is_zero() && cokernel(&f).0.is_zero();
        all &= iso;
        degrees.push((d, h1.module().invariants().to_vec(), h2.module().invariants().to_vec(), iso));
    }
    Ok(QuasiIsoReport { degrees, quasi_isomorphism: all })
}
