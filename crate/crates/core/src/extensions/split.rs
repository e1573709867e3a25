//! Short exact sequences `0 → A → B → C → 0` of G-modules with an additive
//! splitting, their extension cocycles and connecting maps.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groupcoh::standard::{cochain_complex, pointwise_map};
use crate::groupcoh::{cup, Cochain, Cohomology, FiniteGroup, GModule, ShortExact};
use crate::modlin::{kernel, cokernel, solve, FinAbModule, HomModule, Mat, ModuleHom};

#[derive(Clone, Debug)]
pub struct SplitExtension {
    pub a: GModule,
    pub b: GModule,
    pub c: GModule,
    pub iota: ModuleHom,
    pub pi: ModuleHom,
    /// additive section of `π`, not necessarily equivariant
    pub s: ModuleHom,
    /// the retraction with `ι∘t + s∘π = id`
    pub t: ModuleHom,
}

/// `χ(σ)(c) = σ s(σ^{-1} c) − s(c)`, valued in `Hom(C, A)` with the conjugation action.
#[derive(Clone, Debug)]
pub struct ExtensionCocycle {
    pub hom: GModule,
    pub coords: HomModule,
    pub chi: Cochain,
}

impl ExtensionCocycle {
    pub fn value(&self, sigma: usize) -> ModuleHom {
        self.coords.to_hom(self.chi.value(sigma))
    }

    /// `χ ∪ f` for `f` with values in `C`, via evaluation `Hom(C, A) × C → A`.
    pub fn cup(&self, f: &Cochain, c: &GModule) -> Cochain {
        cup(&self.hom.group, &self.chi, f, c, &self.coords.evaluation())
    }
}

/// A connecting map `H^i(C) → H^{i+1}(A)` with the groups it runs between.
#[derive(Clone, Debug)]
pub struct Connecting {
    pub degree: usize,
    pub source: Cohomology,
    pub target: Cohomology,
    pub map: ModuleHom,
}

fn same_group(x: &FiniteGroup, y: &FiniteGroup) -> bool {
    x.order() == y.order() && x.table() == y.table()
}

/// An additive section of a surjection `π: B → C` whose kernel is `ι(A)`.
pub fn additive_section(iota: &ModuleHom, pi: &ModuleHom) -> Result<ModuleHom> {
    let c = &pi.target;
    let mut cols = Vec::with_capacity(c.rank());
    for k in 0..c.rank() {
        let d = c.invariants()[k];
        let b0 = solve(pi, &c.basis(k)).ok_or_else(|| Error::InvalidExtension("π is not surjective".into()))?;
        // correct b0 by ι(a) so that d·(b0 + ι a) = 0
        let scaled = iota.scale(d);
        let target = pi.source.neg(&pi.source.scale(d, &b0));
        let a = solve(&scaled, &target).ok_or_else(|| {
            Error::InvalidExtension(format!("no additive section: generator {k} of C does not lift to an element of order {d}"))
        })?;
        cols.push(pi.source.add(&b0, &iota.apply(&a)));
    }
    ModuleHom::new(c.clone(), pi.source.clone(), Mat::from_cols(pi.source.rank(), &cols))
}

impl SplitExtension {
    /// Validates exactness and equivariance of `ι`, `π`; finds a section when `s` is `None`.
    pub fn new(a: GModule, b: GModule, c: GModule, iota: ModuleHom, pi: ModuleHom, s: Option<ModuleHom>) -> Result<Self> {
        if !same_group(&a.group, &b.group) || !same_group(&b.group, &c.group) {
            return Err(Error::InvalidExtension("A, B, C live over different groups".into()));
        }
        if iota.source != a.module || iota.target != b.module || pi.source != b.module || pi.target != c.module {
            return Err(Error::InvalidExtension("ι or π has the wrong signature".into()));
        }
        if !a.is_equivariant(&b, &iota) {
            return Err(Error::NotEquivariant("ι: A → B".into()));
        }
        if !b.is_equivariant(&c, &pi) {
            return Err(Error::NotEquivariant("π: B → C".into()));
        }
        if !kernel(&iota).0.is_zero() {
            return Err(Error::InvalidExtension("ι is not injective".into()));
        }
        if !cokernel(&pi).0.is_zero() {
            return Err(Error::InvalidExtension("π is not surjective".into()));
        }
        if !pi.compose(&iota).is_zero() || a.module.order() * c.module.order() != b.module.order() {
            return Err(Error::InvalidExtension("im ι ≠ ker π".into()));
        }
        let s = match s {
            Some(s) => s,
            None => additive_section(&iota, &pi)?,
        };
        let t = Self::retraction(&iota, &pi, &s)?;
        Ok(SplitExtension { a, b, c, iota, pi, s, t })
    }

    fn retraction(iota: &ModuleHom, pi: &ModuleHom, s: &ModuleHom) -> Result<ModuleHom> {
        if s.source != pi.target || s.target != pi.source {
            return Err(Error::InvalidExtension("s has the wrong signature".into()));
        }
        if pi.compose(s) != ModuleHom::identity(&pi.target) {
            return Err(Error::InvalidExtension("π∘s ≠ id".into()));
        }
        let bm = &pi.source;
        let cols = (0..bm.rank())
            .map(|j| {
                let e = bm.basis(j);
                let r = bm.add(&e, &bm.neg(&s.apply(&pi.apply(&e))));
                solve(iota, &r).ok_or_else(|| Error::InvalidExtension("b − sπ(b) is not in ι(A)".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        ModuleHom::new(bm.clone(), iota.source.clone(), Mat::from_cols(iota.source.rank(), &cols))
    }

    /// The same sequence with another section.
    pub fn with_section(&self, s: ModuleHom) -> Result<Self> {
        let t = Self::retraction(&self.iota, &self.pi, &s)?;
        Ok(SplitExtension { s, t, ..self.clone() })
    }

    /// `s + ι∘φ` for a random `φ ∈ Hom(C, A)`.
    pub fn random_section<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> ModuleHom {
        let hm = HomModule::new(&self.c.module, &self.a.module);
        let phi = hm.to_hom(&hm.module.random(rng));
        self.s.add(&self.iota.compose(&phi))
    }

    /// `0 → A(κ) → B(κ) → C(κ) → 0` with the same maps.
    pub fn twist(&self, kappa: &[i64]) -> Result<Self> {
        Ok(SplitExtension { a: self.a.twist(kappa)?, b: self.b.twist(kappa)?, c: self.c.twist(kappa)?, ..self.clone() })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.b.group
    }

    /// Whether the section is equivariant (the extension is split by `s`).
    pub fn section_is_equivariant(&self) -> bool {
        self.c.is_equivariant(&self.b, &self.s)
    }

    /// `χ(σ) = t ∘ (σ_B s σ_C^{-1} − s)`.
    pub fn cocycle_value(&self, sigma: usize) -> ModuleHom {
        let g = self.group();
        let conj = self.b.action_hom(sigma).compose(&self.s).compose(&self.c.action_hom(g.inv(sigma)));
        self.t.compose(&conj.add(&self.s.neg()))
    }

    pub fn cocycle(&self) -> ExtensionCocycle {
        let (hom, coords) = GModule::hom(&self.c, &self.a);
        let n = self.group().order();
        let chi = Cochain::from_fn(n, 1, coords.module.rank(), |t| coords.from_hom(&self.cocycle_value(t[0])));
        ExtensionCocycle { hom, coords, chi }
    }

    /// The sequence of cochain complexes in degrees `0..=top`, split by `s` and `t`.
    pub fn ses(&self, top: usize, max_cells: usize) -> Result<ShortExact> {
        let n = self.group().order();
        let x = cochain_complex(&self.a, top, max_cells)?;
        let y = cochain_complex(&self.b, top, max_cells)?;
        let z = cochain_complex(&self.c, top, max_cells)?;
        let i = pointwise_map(&self.iota, n, top);
        let p = pointwise_map(&self.pi, n, top);
        let lift = pointwise_map(&self.s, n, top).maps;
        let retract = pointwise_map(&self.t, n, top).maps;
        let ses = ShortExact { x, y, z, i, p, lift, retract };
        ses.verify()?;
        Ok(ses)
    }

    /// `∂^i: H^i(G, C) → H^{i+1}(G, A)`, the class of `t(d(s∘f))`.
    pub fn connecting_map(&self, i: usize, max_cells: usize) -> Result<Connecting> {
        let ses = self.ses(i + 2, max_cells)?;
        let source = ses.z.cohomology(i as i32)?;
        let target = ses.x.cohomology(i as i32 + 1)?;
        let map = ses.connecting(i as i32, &source, &target);
        Ok(Connecting { degree: i, source, target, map })
    }

    /// The long exact sequence through `H^top(C) → H^{top+1}(A)`, checked for exactness.
    pub fn long_exact(&self, top: usize, max_cells: usize) -> Result<Vec<ModuleHom>> {
        self.ses(top + 2, max_cells)?.long_exact(0, top as i32)
    }

    /// The extension `A ⊕ C` with `σ(a, c) = (σa + ψ(σ)(σc), σc)` for a
    /// 1-cocycle `ψ` in `Hom(C, A)`; its cocycle for `s(c) = (0, c)` is `ψ`.
    pub fn from_cocycle(a: &GModule, c: &GModule, psi: &Cochain) -> Result<Self> {
        let hm = HomModule::new(&c.module, &a.module);
        let ds = FinAbModule::direct_sum(&[a.module.clone(), c.module.clone()]);
        let g = a.group.clone();
        let (i0, i1, p0, p1) = (&ds.inclusions[0], &ds.inclusions[1], &ds.projections[0], &ds.projections[1]);
        let action = (0..g.order())
            .map(|sg| {
                let sc = c.action_hom(sg);
                let top = a.action_hom(sg).compose(p0).add(&hm.to_hom(psi.value(sg)).compose(&sc).compose(p1));
                i0.compose(&top).add(&i1.compose(&sc).compose(p1)).matrix
            })
            .collect();
        let b = GModule::new(g, ds.module.clone(), action)
            .map_err(|e| Error::InvalidExtension(format!("ψ is not a cocycle: {e}")))?;
        SplitExtension::new(a.clone(), b, c.clone(), i0.clone(), p1.clone(), Some(i1.clone()))
    }

    /// An extension of `C` by `A` with a random cocycle class.
    pub fn random<R: rand::Rng + ?Sized>(a: &GModule, c: &GModule, rng: &mut R, max_cells: usize) -> Result<Self> {
        let (hom, _) = GModule::hom(c, a);
        let cx = cochain_complex(&hom, 2, max_cells)?;
        let v = cx.random_cocycle(1, rng);
        let psi = Cochain { degree: 1, rank: hom.rank(), values: v };
        Self::from_cocycle(a, c, &psi)
    }

    /// Pushout along an equivariant `h: A → M`: `B' = (M ⊕ B) / {(h a, −ι a)}`.
    pub fn pushout(&self, m: &GModule, h: &ModuleHom) -> Result<SplitExtension> {
        if h.source != self.a.module || h.target != m.module {
            return Err(Error::InvalidExtension("pushout map has the wrong signature".into()));
        }
        if !self.a.is_equivariant(m, h) {
            return Err(Error::NotEquivariant("pushout map h: A → M".into()));
        }
        let (mb, ds) = GModule::direct_sum(&[m, &self.b]);
        let rel = ds.inclusions[0].compose(h).add(&ds.inclusions[1].compose(&self.iota).neg());
        let (bp, proj, lift) = GModule::cokernel(&self.a, &mb, &rel)?;
        let iota2 = proj.compose(&ds.inclusions[0]);
        let cols: Vec<Vec<i64>> = (0..bp.rank()).map(|k| self.pi.apply(&ds.projections[1].apply(&lift.col(k)))).collect();
        let pi2 = ModuleHom::new(bp.module.clone(), self.c.module.clone(), Mat::from_cols(self.c.rank(), &cols))?;
        let s2 = proj.compose(&ds.inclusions[1]).compose(&self.s);
        SplitExtension::new(m.clone(), bp, self.c.clone(), iota2, pi2, Some(s2))
    }
}
