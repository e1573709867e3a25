//! Sites: a finite group with a family of local subgroups `j_v: G_v → G` and a
//! twisting character; local and compactly supported cochain complexes.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groupcoh::cochain::{cochain_moduli, num_tuples, restrict_cochain};
use crate::groupcoh::standard::{cochain_complex, restriction_map};
use crate::groupcoh::{cone, induced, ChainMap, Cochain, Cohomology, Complex, FiniteGroup, GModule, SparseMat};
use crate::modlin::zn::{gcd, md, mulmod};
use crate::modlin::{FinAbModule, ModuleHom};

#[derive(Clone, Debug)]
pub struct Local {
    pub name: String,
    pub group: Arc<FiniteGroup>,
    /// `embedding[h] = j_v(h)`
    pub embedding: Vec<usize>,
}

impl Local {
    pub fn new(name: impl Into<String>, group: Arc<FiniteGroup>, embedding: Vec<usize>, ambient: &FiniteGroup) -> Result<Self> {
        let name = name.into();
        if !group.is_homomorphism(ambient, &embedding) {
            return Err(Error::InvalidSite(format!("local `{name}`: j_v is not a homomorphism into {}", ambient.name())));
        }
        let mut seen = vec![false; ambient.order()];
        for &x in &embedding {
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidSite(format!("local `{name}`: j_v is not injective (element {x} hit twice)")));
            }
        }
        Ok(Local { name, group, embedding })
    }

    /// The subgroup generated by `gens` with its inclusion.
    pub fn subgroup(name: impl Into<String>, ambient: &FiniteGroup, gens: &[usize]) -> Self {
        let name = name.into();
        let (h, emb) = ambient.subgroup(name.clone(), gens);
        Local { name, group: Arc::new(h), embedding: emb }
    }

    /// `τ ↦ σ j_v(τ) σ^{-1}`.
    pub fn conjugate(&self, ambient: &FiniteGroup, sigma: usize) -> Self {
        let embedding = self.embedding.iter().map(|&x| ambient.conj(sigma, x)).collect();
        Local { name: self.name.clone(), group: self.group.clone(), embedding }
    }
}

#[derive(Clone, Debug)]
pub struct SiteModel {
    pub group: Arc<FiniteGroup>,
    pub locals: Vec<Local>,
    /// `p^e`
    pub modulus: i64,
    /// `κ(g)`, defining `R(1) = Z/p^e(κ)`
    pub twist: Vec<i64>,
}

/// `C_c(G, M) = Cone(ℓ_S: C(G, M) → C_l(G, M))[−1]` with its constituents.
#[derive(Clone, Debug)]
pub struct CompactComplex {
    pub module: GModule,
    pub global: Complex,
    pub local: Complex,
    pub ell: ChainMap,
    pub cc: Complex,
}

impl SiteModel {
    pub fn new(group: Arc<FiniteGroup>, locals: Vec<Local>, modulus: i64, twist: Vec<i64>) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidSite(format!("modulus {modulus} must be at least 2")));
        }
        let n = group.order();
        if twist.len() != n {
            return Err(Error::InvalidSite(format!("twist has {} values for a group of order {n}", twist.len())));
        }
        let twist: Vec<i64> = twist.iter().map(|&k| md(k, modulus)).collect();
        if let Some(g) = (0..n).find(|&g| gcd(twist[g], modulus) != 1) {
            return Err(Error::InvalidSite(format!("twist value {} at element {g} is not a unit mod {modulus}", twist[g])));
        }
        for a in 0..n {
            for b in 0..n {
                if twist[group.mul(a, b)] != mulmod(twist[a], twist[b], modulus) {
                    return Err(Error::InvalidSite(format!("twist is not multiplicative at ({a}, {b})")));
                }
            }
        }
        for l in &locals {
            Local::new(l.name.clone(), l.group.clone(), l.embedding.clone(), &group)?;
        }
        Ok(SiteModel { group, locals, modulus, twist })
    }

    pub fn untwisted(group: Arc<FiniteGroup>, locals: Vec<Local>, modulus: i64) -> Result<Self> {
        let n = group.order();
        Self::new(group, locals, modulus, vec![1; n])
    }

    /// The same site with every `j_v` conjugated by `σ`.
    pub fn conjugate(&self, sigma: usize) -> SiteModel {
        let locals = self.locals.iter().map(|l| l.conjugate(&self.group, sigma)).collect();
        SiteModel { locals, ..self.clone() }
    }

    /// `R(1)`.
    pub fn r1(&self) -> GModule {
        GModule::character(self.group.clone(), self.modulus, &self.twist).expect("validated character")
    }

    /// `M(1) = M ⊗ R(1)`, realised by twisting the action.
    pub fn twist_module(&self, m: &GModule) -> Result<GModule> {
        if self.modulus % m.module.exponent().max(1) != 0 {
            return Err(Error::InvalidSite(format!("exponent of {} does not divide {}", m.module, self.modulus)));
        }
        m.twist(&self.twist)
    }

    pub fn local_modules(&self, m: &GModule) -> Vec<GModule> {
        self.locals.iter().map(|l| m.restrict(l.group.clone(), &l.embedding)).collect()
    }

    /// `ℓ_v(f) = f ∘ j_v` for every `v`.
    pub fn localize(&self, f: &Cochain) -> Vec<Cochain> {
        let n = self.group.order();
        self.locals.iter().map(|l| restrict_cochain(l.group.order(), &l.embedding, n, f)).collect()
    }

    /// Coordinates of `C^i_l` per local, in order.
    pub fn local_dims(&self, i: usize, rank: usize) -> Vec<usize> {
        self.locals.iter().map(|l| num_tuples(l.group.order(), i) * rank).collect()
    }

    /// `C_l(G, M) = ⊕_v C(G_v, M)` in degrees `0..=top`.
    pub fn local_complex(&self, m: &GModule, top: usize, max_cells: usize) -> Result<Complex> {
        let label = format!("C_l({})", m.module);
        if self.locals.is_empty() {
            let diffs = (0..top).map(|_| SparseMat::zeros(0, 0)).collect();
            return Complex::new(0, vec![vec![]; top + 1], diffs, label);
        }
        let parts = self
            .local_modules(m)
            .iter()
            .map(|lm| cochain_complex(lm, top, max_cells))
            .collect::<Result<Vec<_>>>()?;
        let refs: Vec<&Complex> = parts.iter().collect();
        Complex::direct_sum(&refs, label)
    }

    /// `ℓ_S: C(G, M) → C_l(G, M)`.
    pub fn localization(&self, m: &FinAbModule, top: usize) -> ChainMap {
        let n = self.group.order();
        let rank = m.rank();
        let maps = (0..=top)
            .map(|i| {
                let parts: Vec<ChainMap> = self
                    .locals
                    .iter()
                    .map(|l| restriction_map(&self.group, &l.group, &l.embedding, rank, i))
                    .collect();
                let rows = self.local_dims(i, rank);
                let cols = [num_tuples(n, i) * rank];
                let blocks: Vec<(usize, usize, &SparseMat, i64)> =
                    parts.iter().enumerate().map(|(k, p)| (k, 0, &p.maps[i], 1)).collect();
                let moduli: Vec<i64> = self.locals.iter().flat_map(|l| cochain_moduli(l.group.order(), i, m)).collect();
                SparseMat::block(&rows, &cols, &blocks, &moduli)
            })
            .collect();
        ChainMap { lo: 0, maps }
    }

    /// Block-diagonal `⊕_v h_v` acting pointwise on `C_l`, degrees `0..=top`.
    pub fn local_pointwise(&self, homs: &[ModuleHom], top: usize) -> ChainMap {
        assert_eq!(homs.len(), self.locals.len());
        let maps = (0..=top)
            .map(|i| {
                let parts: Vec<SparseMat> = self
                    .locals
                    .iter()
                    .zip(homs)
                    .map(|(l, h)| SparseMat::pointwise(h, num_tuples(l.group.order(), i)))
                    .collect();
                let rows: Vec<usize> = parts.iter().map(|p| p.nrows()).collect();
                let cols: Vec<usize> = parts.iter().map(|p| p.ncols()).collect();
                let blocks: Vec<(usize, usize, &SparseMat, i64)> = parts.iter().enumerate().map(|(k, p)| (k, k, p, 1)).collect();
                let moduli: Vec<i64> = self
                    .locals
                    .iter()
                    .zip(homs)
                    .flat_map(|(l, h)| {
                        let inv = h.target.invariants().to_vec();
                        (0..num_tuples(l.group.order(), i)).flat_map(move |_| inv.clone())
                    })
                    .collect();
                SparseMat::block(&rows, &cols, &blocks, &moduli)
            })
            .collect();
        ChainMap { lo: 0, maps }
    }

    /// `C_c(G, M)` in degrees `0..=top`: pieces `C^i ⊕ C_l^{i−1}`,
    /// `d(x, y) = (dx, −ℓ_S x − dy)`.
    pub fn compact_complex(&self, m: &GModule, top: usize, max_cells: usize) -> Result<CompactComplex> {
        let global = cochain_complex(m, top, max_cells)?;
        let local = self.local_complex(m, top, max_cells)?;
        let ell = self.localization(&m.module, top);
        let cc = cone(&ell, &global, &local, format!("C_c({})", m.module))?;
        Ok(CompactComplex { module: m.clone(), global, local, ell, cc })
    }
}

/// The pieces of the long exact sequence `H^i_c → H^i → H^i_l → H^{i+1}_c`.
#[derive(Clone, Debug)]
pub struct CompactLes {
    pub hc: Vec<Cohomology>,
    pub h: Vec<Cohomology>,
    pub hl: Vec<Cohomology>,
    /// `0 → H^0_c → H^0 → H^0_l → H^1_c → …`, starting with the zero map into `H^0_c`
    pub maps: Vec<ModuleHom>,
}

impl CompactComplex {
    pub fn top(&self) -> usize {
        self.cc.hi() as usize
    }

    /// `x ∈ C^i_c` as `(global, local)` coordinates.
    pub fn split(&self, i: usize, x: &[i64]) -> (Vec<i64>, Vec<i64>) {
        let k = self.global.dim(i as i32);
        (x[..k].to_vec(), x[k..].to_vec())
    }

    pub fn join(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        x.iter().chain(y).copied().collect()
    }

    /// Invariant factors of `H^i_c`.
    pub fn invariants(&self, i: usize) -> Result<Vec<i64>> {
        Ok(self.cc.cohomology(i as i32)?.module().invariants().to_vec())
    }

    /// `… → H^i_c → H^i → H^i_l → H^{i+1}_c → …` for `i < top`, checked exact.
    pub fn long_exact(&self) -> Result<CompactLes> {
        let top = self.top();
        let mut hc = Vec::new();
        let mut h = Vec::new();
        let mut hl = Vec::new();
        for i in 0..top {
            hc.push(self.cc.cohomology(i as i32)?);
            h.push(self.global.cohomology(i as i32)?);
            hl.push(self.local.cohomology(i as i32)?);
        }
        let mut maps = vec![ModuleHom::zero(&FinAbModule::zero(), &hc[0].module())];
        for i in 0..top {
            let d = i as i32;
            let (ng, nl) = (self.global.dim(d), self.local.dim(d - 1));
            let proj = SparseMat::block(
                &[ng],
                &[ng, nl],
                &[(0, 0, &SparseMat::identity(ng), 1)],
                self.global.piece(d),
            );
            maps.push(induced(&proj, &hc[i], &h[i], self.global.piece(d)));
            maps.push(induced(self.ell.at(d).expect("in range"), &h[i], &hl[i], self.local.piece(d)));
            if i + 1 < top {
                let (ng1, nl1) = (self.global.dim(d + 1), self.local.dim(d));
                let inc = SparseMat::block(&[ng1, nl1], &[nl1], &[(1, 0, &SparseMat::identity(nl1), 1)], self.cc.piece(d + 1));
                maps.push(induced(&inc, &hl[i], &hc[i + 1], self.cc.piece(d + 1)));
            }
        }
        crate::groupcoh::check_exact(&maps).map_err(|e| Error::InvalidInput(format!("compact long exact sequence: {e}")))?;
        Ok(CompactLes { hc, h, hl, maps })
    }
}
