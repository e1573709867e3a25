//! Local trivializations of an extension cocycle, the Selmer complex
//! `C_f(B) = Cone(t_S: C(G, B) → C_l(G, A))[−1]` and the three short exact
//! sequences with their connecting maps `κ`, `κ_c`, `κ_f`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extensions::{allowed_signs, ExtensionCocycle, SplitExtension};
use crate::groupcoh::cochain::num_tuples;
use crate::groupcoh::standard::{cochain_complex, pointwise_map};
use crate::groupcoh::{
    compare_cohomology, cone, conjugate_cochain, random_combination, ChainMap, Cochain, Complex, GModule, QuasiIsoReport,
    ShortExact, SparseMat,
};
use crate::modlin::{HomModule, ModuleHom};
use crate::sign::SignSet;

use super::model::{CompactComplex, SiteModel};

/// The conditions of the local splitting criterion for one `v` and one `φ_v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LocalConditions {
    /// `ℓ_v(χ) = dφ_v`
    pub coboundary: bool,
    /// `s − ι∘φ_v` is `G_v`-equivariant
    pub section: bool,
    /// `t + φ_v∘π` is `G_v`-equivariant
    pub retraction: bool,
}

impl LocalConditions {
    pub fn consistent(&self) -> bool {
        self.coboundary == self.section && self.section == self.retraction
    }

    pub fn all(&self) -> bool {
        self.coboundary && self.section && self.retraction
    }
}

/// `ℓ_v(χ)` is not a coboundary; its class in `H^1(G_v, Hom(C, A))`.
#[derive(Clone, Debug, Serialize)]
pub struct Obstruction {
    pub local: usize,
    pub name: String,
    pub h1: Vec<i64>,
    pub class: Vec<i64>,
}

#[derive(Clone, Debug)]
pub enum Trivialization {
    Trivialized(Box<SelmerData>),
    Obstructed(Obstruction),
}

#[derive(Clone, Debug)]
pub struct SelmerData {
    pub site: SiteModel,
    /// the extension as given
    pub base: SplitExtension,
    /// the extension twisted by the site character
    pub ext: SplitExtension,
    pub chi: ExtensionCocycle,
    /// `φ_v: C → A`, one per local
    pub phis: Vec<ModuleHom>,
}

fn local_hom_module(chi: &ExtensionCocycle, site: &SiteModel, v: usize) -> GModule {
    let l = &site.locals[v];
    chi.hom.restrict(l.group.clone(), &l.embedding)
}

/// Evaluates the three conditions for `φ` at the local `v`.
pub fn local_conditions(ext: &SplitExtension, chi: &ExtensionCocycle, site: &SiteModel, v: usize, phi: &ModuleHom) -> LocalConditions {
    let l = &site.locals[v];
    let lchi = &site.localize(&chi.chi)[v];
    let hv = local_hom_module(chi, site, v);
    let dphi = crate::groupcoh::differential(&hv, &Cochain::constant(&chi.coords.from_hom(phi)));
    let res = |m: &GModule| m.restrict(l.group.clone(), &l.embedding);
    let (av, bv, cv) = (res(&ext.a), res(&ext.b), res(&ext.c));
    LocalConditions {
        coboundary: dphi.values == lchi.values,
        section: cv.is_equivariant(&bv, &ext.s.add(&ext.iota.compose(phi).neg())),
        retraction: bv.is_equivariant(&av, &ext.t.add(&phi.compose(&ext.pi))),
    }
}

fn check_fits(site: &SiteModel, base: &SplitExtension) -> Result<()> {
    if base.group().table() != site.group.table() {
        return Err(Error::InvalidSite("extension and site live over different groups".into()));
    }
    if site.modulus % base.b.module.exponent().max(1) != 0 {
        return Err(Error::InvalidSite(format!("exponent of B = {} does not divide {}", base.b.module, site.modulus)));
    }
    Ok(())
}

/// Solves `ℓ_v(χ) = dφ_v` for every `v`; reports the first obstruction otherwise.
pub fn selmer_trivialize(base: &SplitExtension, site: &SiteModel) -> Result<Trivialization> {
    check_fits(site, base)?;
    let ext = base.twist(&site.twist)?;
    let chi = ext.cocycle();
    let lchi = site.localize(&chi.chi);
    let mut phis = Vec::with_capacity(site.locals.len());
    for (v, l) in site.locals.iter().enumerate() {
        let hv = local_hom_module(&chi, site, v);
        let cx = cochain_complex(&hv, 2, usize::MAX)?;
        let d0 = cx.diff(0).expect("degree 0 differential");
        match d0.solve(&lchi[v].values, cx.piece(0), cx.piece(1)) {
            Some(x) => {
                let phi = chi.coords.to_hom(&x);
                let conds = local_conditions(&ext, &chi, site, v, &phi);
                if !conds.all() {
                    return Err(Error::InvalidInput(format!("local splitting conditions disagree at `{}`: {conds:?}", l.name)));
                }
                phis.push(phi);
            }
            None => {
                let h1 = cx.cohomology(1)?;
                let class = h1.class_of(&lchi[v].values).expect("restriction of a cocycle is a cocycle");
                return Ok(Trivialization::Obstructed(Obstruction {
                    local: v,
                    name: l.name.clone(),
                    h1: h1.module().invariants().to_vec(),
                    class,
                }));
            }
        }
    }
    Ok(Trivialization::Trivialized(Box::new(SelmerData { site: site.clone(), base: base.clone(), ext, chi, phis })))
}

/// `0 → C(A) → C(B) → C(C) → 0`, its compact version and
/// `0 → C_c(A) → C_f(B) → C(C) → 0`, all in degrees `0..=top`.
#[derive(Clone, Debug)]
pub struct SelmerComplexes {
    pub top: usize,
    pub plain: ShortExact,
    pub compact: ShortExact,
    pub selmer: ShortExact,
    pub ca: CompactComplex,
    pub cb: CompactComplex,
    pub cc: CompactComplex,
    /// `t_S: C(B) → C_l(A)`
    pub t_s: ChainMap,
}

impl SelmerComplexes {
    pub fn flavor(&self, f: Flavor) -> &ShortExact {
        match f {
            Flavor::Plain => &self.plain,
            Flavor::Compact => &self.compact,
            Flavor::Selmer => &self.selmer,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flavor {
    Plain,
    Compact,
    Selmer,
}

impl Flavor {
    pub const ALL: [Flavor; 3] = [Flavor::Plain, Flavor::Compact, Flavor::Selmer];

    pub fn name(&self) -> &'static str {
        match self {
            Flavor::Plain => "plain",
            Flavor::Compact => "c",
            Flavor::Selmer => "f",
        }
    }
}

fn diag(a: &SparseMat, b: &SparseMat, moduli: &[i64]) -> SparseMat {
    SparseMat::block(&[a.nrows(), b.nrows()], &[a.ncols(), b.ncols()], &[(0, 0, a, 1), (1, 1, b, 1)], moduli)
}

fn at_or_empty(m: &ChainMap, i: i32) -> SparseMat {
    m.at(i).cloned().unwrap_or_else(|| SparseMat::zeros(0, 0))
}

/// One sample of a "connecting map = cup" comparison.
#[derive(Clone, Debug)]
pub struct CupSample {
    pub flavor: Flavor,
    pub degree: usize,
    pub allowed: SignSet,
    pub connecting_trivial: bool,
    pub input: Vec<i64>,
}

impl SelmerData {
    /// Validates `ℓ_v(χ) = dφ_v` for the supplied `φ_v`.
    pub fn new(site: SiteModel, base: SplitExtension, phis: Vec<ModuleHom>) -> Result<Self> {
        check_fits(&site, &base)?;
        if phis.len() != site.locals.len() {
            return Err(Error::InvalidSite(format!("{} trivializations for {} locals", phis.len(), site.locals.len())));
        }
        let ext = base.twist(&site.twist)?;
        let chi = ext.cocycle();
        for (v, phi) in phis.iter().enumerate() {
            if phi.source != ext.c.module || phi.target != ext.a.module {
                return Err(Error::InvalidSite("φ_v must map C to A".into()));
            }
            let c = local_conditions(&ext, &chi, &site, v, phi);
            if !c.all() {
                return Err(Error::InvalidSite(format!("φ_v does not trivialize χ at `{}`: {c:?}", site.locals[v].name)));
            }
        }
        Ok(SelmerData { site, base, ext, chi, phis })
    }

    /// `t_v = t + φ_v∘π`.
    pub fn t_v(&self, v: usize) -> ModuleHom {
        self.ext.t.add(&self.phis[v].compose(&self.ext.pi))
    }

    /// `s_v = s − ι∘φ_v`.
    pub fn s_v(&self, v: usize) -> ModuleHom {
        self.ext.s.add(&self.ext.iota.compose(&self.phis[v]).neg())
    }

    /// `χ′ = (χ, −φ_S) ∈ C^1_c(G, Hom(C, A))`.
    pub fn chi_prime(&self) -> Vec<i64> {
        let hm = &self.chi.coords;
        let mut out = self.chi.chi.values.clone();
        for phi in &self.phis {
            out.extend(hm.module.neg(&hm.from_hom(phi)));
        }
        out
    }

    pub fn evaluation(&self) -> crate::modlin::Pairing {
        self.chi.coords.evaluation()
    }

    fn hom_module(&self) -> &HomModule {
        &self.chi.coords
    }

    /// All three sequences in degrees `0..=top`, verified.
    pub fn complexes(&self, top: usize, max_cells: usize) -> Result<SelmerComplexes> {
        let (site, e) = (&self.site, &self.ext);
        let n = site.group.order();
        let nloc = site.locals.len();
        let plain = e.ses(top, max_cells)?;
        let ca = site.compact_complex(&e.a, top, max_cells)?;
        let cb = site.compact_complex(&e.b, top, max_cells)?;
        let cc = site.compact_complex(&e.c, top, max_cells)?;

        let glob = |h: &ModuleHom| pointwise_map(h, n, top);
        let loc = |h: &ModuleHom| site.local_pointwise(&vec![h.clone(); nloc], top);
        let compact_map = |h: &ModuleHom, tgt: &Complex| -> Vec<SparseMat> {
            let (g, l) = (glob(h), loc(h));
            (0..=top as i32).map(|i| diag(g.at(i).unwrap(), &at_or_empty(&l, i - 1), tgt.piece(i))).collect()
        };
        let compact = ShortExact {
            x: ca.cc.clone(),
            y: cb.cc.clone(),
            z: cc.cc.clone(),
            i: ChainMap { lo: 0, maps: compact_map(&e.iota, &cb.cc) },
            p: ChainMap { lo: 0, maps: compact_map(&e.pi, &cc.cc) },
            lift: compact_map(&e.s, &cb.cc),
            retract: compact_map(&e.t, &ca.cc),
        };
        compact.verify()?;

        let tv: Vec<ModuleHom> = (0..nloc).map(|v| self.t_v(v)).collect();
        let t_s = site.local_pointwise(&tv, top).compose(&cb.ell, &ca.local);
        let cf = cone(&t_s, &cb.global, &ca.local, format!("C_f({})", e.b.module))?;
        let (gi, gp, gs, gt) = (glob(&e.iota), glob(&e.pi), glob(&e.s), glob(&e.t));
        let mut i_maps = Vec::new();
        let mut p_maps = Vec::new();
        let mut lifts = Vec::new();
        let mut retracts = Vec::new();
        for i in 0..=top as i32 {
            let la = ca.local.dim(i - 1);
            let id = SparseMat::identity(la);
            let (db, dc) = (cb.global.dim(i), cc.global.dim(i));
            i_maps.push(diag(gi.at(i).unwrap(), &id, cf.piece(i)));
            p_maps.push(SparseMat::block(&[dc], &[db, la], &[(0, 0, gp.at(i).unwrap(), 1)], cc.global.piece(i)));
            lifts.push(SparseMat::block(&[db, la], &[dc], &[(0, 0, gs.at(i).unwrap(), 1)], cf.piece(i)));
            retracts.push(diag(gt.at(i).unwrap(), &id, ca.cc.piece(i)));
        }
        let selmer = ShortExact {
            x: ca.cc.clone(),
            y: cf,
            z: cc.global.clone(),
            i: ChainMap { lo: 0, maps: i_maps },
            p: ChainMap { lo: 0, maps: p_maps },
            lift: lifts,
            retract: retracts,
        };
        selmer.verify()?;
        Ok(SelmerComplexes { top, plain, compact, selmer, ca, cb, cc, t_s })
    }

    /// `χ ∪ f` for `f ∈ C^i(G, C(1))`.
    pub fn chi_tilde(&self, f: &Cochain) -> Vec<i64> {
        self.chi.cup(f, &self.ext.c).values
    }

    /// `χ ∪_c (f_1, f_2) = (χ ∪ f_1, −ℓ_S(χ) ∪ f_2)`.
    pub fn chi_tilde_c(&self, f: &[i64], i: usize) -> Vec<i64> {
        self.site.cup_c(&self.chi.chi, f, i, &self.ext.c, &self.evaluation())
    }

    /// `χ′ _c∪ f = (χ ∪ f, −φ_S ∪ ℓ_S(f))`.
    pub fn chi_tilde_f(&self, f: &Cochain) -> Vec<i64> {
        self.site.cup_lc(&self.chi_prime(), 1, &self.hom_module().module, f, &self.ext.c, &self.evaluation())
    }

    /// `κ^i(f)` against `χ̃^i(f)` in one flavor for random cocycles `f`.
    pub fn equalcup_samples<R: rand::Rng + ?Sized>(
        &self,
        cx: &SelmerComplexes,
        flavor: Flavor,
        i: usize,
        trials: usize,
        rng: &mut R,
    ) -> Vec<CupSample> {
        let ses = cx.flavor(flavor);
        let d = i as i32;
        let b = ses.x.boundaries(d + 1);
        let gens = ses.z.cocycle_gens(d);
        let rank = self.ext.c.rank();
        (0..trials)
            .map(|_| {
                let f = random_combination(&gens, ses.z.piece(d), rng);
                let lhs = ses.connecting_cochain(d, &f);
                let rhs = match flavor {
                    Flavor::Plain => self.chi_tilde(&Cochain { degree: i, rank, values: f.clone() }),
                    Flavor::Compact => self.chi_tilde_c(&f, i),
                    Flavor::Selmer => self.chi_tilde_f(&Cochain { degree: i, rank, values: f.clone() }),
                };
                CupSample {
                    flavor,
                    degree: i,
                    allowed: allowed_signs(&lhs, &rhs, &b),
                    connecting_trivial: b.contains(&lhs),
                    input: f,
                }
            })
            .collect()
    }

    /// Compares `C_f(B)` with `Cone(C_l(C)[−1] → C_c(B))` through
    /// `(b, a) ↦ (π ℓ_S b, b, ι a)`, on every degree below `top`.
    pub fn cone_rewriting(&self, cx: &SelmerComplexes) -> Result<QuasiIsoReport> {
        let (site, e) = (&self.site, &self.ext);
        let top = cx.top;
        let nloc = site.locals.len();
        let lc = site.local_complex(&e.c, top, usize::MAX)?;
        let lb = &cx.cb.local;
        let gb = &cx.cb.global;
        let sv: Vec<ModuleHom> = (0..nloc).map(|v| self.s_v(v)).collect();
        let s_loc = site.local_pointwise(&sv, top);
        let pi_loc = site.local_pointwise(&vec![e.pi.clone(); nloc], top);
        let iota_loc = site.local_pointwise(&vec![e.iota.clone(); nloc], top);
        let ell_b = &cx.cb.ell;
        // E^i = C_l^i(C) ⊕ C^i(B) ⊕ C_l^{i−1}(B)
        let dims = |i: i32| [lc.dim(i), gb.dim(i), lb.dim(i - 1)];
        let pieces: Vec<Vec<i64>> = (0..=top as i32)
            .map(|i| lc.piece(i).iter().chain(gb.piece(i)).chain(lb.piece(i - 1)).copied().collect())
            .collect();
        let mut diffs = Vec::new();
        for i in 0..top as i32 {
            let dl = lc.diff(i).unwrap();
            let dg = gb.diff(i).unwrap();
            let dlb = lb.diff_or_zero(i - 1);
            let blocks = [
                (0, 0, dl, 1),
                (1, 1, dg, 1),
                (2, 0, s_loc.at(i).unwrap(), 1),
                (2, 1, ell_b.at(i).unwrap(), -1),
                (2, 2, &dlb, -1),
            ];
            diffs.push(SparseMat::block(&dims(i + 1), &dims(i), &blocks, &pieces[i as usize + 1]));
        }
        let target = Complex::new(0, pieces, diffs, "Cone(C_l(C)[−1] → C_c(B))")?;
        let cf = &cx.selmer.y;
        let maps = (0..=top as i32)
            .map(|i| {
                let pl = pi_loc.at(i).unwrap().compose(ell_b.at(i).unwrap(), lc.piece(i));
                let id = SparseMat::identity(gb.dim(i));
                let il = at_or_empty(&iota_loc, i - 1);
                let cols = [gb.dim(i), cx.ca.local.dim(i - 1)];
                SparseMat::block(&dims(i), &cols, &[(0, 0, &pl, 1), (1, 0, &id, 1), (2, 1, &il, 1)], target.piece(i))
            })
            .collect();
        compare_cohomology(&ChainMap { lo: 0, maps }, cf, &target)
    }

    /// The data for the site conjugated by `σ`: `j′_v = σ j_v σ^{-1}` and
    /// `φ′_v = σ φ_v σ^{-1} − χ(σ)`.
    pub fn conjugated(&self, sigma: usize) -> Result<SelmerData> {
        let g = &self.site.group;
        let si = g.inv(sigma);
        let chi_s = self.chi.value(sigma);
        let phis = self
            .phis
            .iter()
            .map(|phi| self.ext.a.action_hom(sigma).compose(phi).compose(&self.ext.c.action_hom(si)).add(&chi_s.neg()))
            .collect();
        SelmerData::new(self.site.conjugate(sigma), self.base.clone(), phis)
    }

    /// Checks `t′_v∘ℓ′_v∘σ* = σ∘t_v∘ℓ_v` on random cochains of `C^i(G, B)`,
    /// `i ≤ max_degree`.
    pub fn verify_selcho<R: rand::Rng + ?Sized>(&self, sigma: usize, max_degree: usize, trials: usize, rng: &mut R) -> Result<SelchoReport> {
        let conj = self.conjugated(sigma)?;
        let naive_phis = self.phis.clone();
        let n = self.site.group.order();
        let (b, a) = (&self.ext.b, &self.ext.a);
        let mut commutes = true;
        let mut naive_commutes = true;
        let mut checked = 0;
        for i in 0..=max_degree {
            for _ in 0..trials {
                let f = Cochain { degree: i, rank: b.rank(), values: random_cochain(n, i, &b.module, rng) };
                let sf = conjugate_cochain(b, sigma, &f);
                let l_new = conj.site.localize(&sf);
                let l_old = self.site.localize(&f);
                for v in 0..self.site.locals.len() {
                    let order = self.site.locals[v].group.order();
                    let rhs = l_old[v].map(&self.t_v(v), order).map(&a.action_hom(sigma), order);
                    let lhs = l_new[v].map(&conj.t_v(v), order);
                    let naive_t = self.ext.t.add(&naive_phis[v].compose(&self.ext.pi));
                    let naive = l_new[v].map(&naive_t, order);
                    commutes &= lhs == rhs;
                    naive_commutes &= naive == rhs;
                }
                checked += 1;
            }
        }
        Ok(SelchoReport {
            sigma,
            max_degree,
            cochains_checked: checked,
            square_commutes: commutes,
            phi_changed: conj.phis != self.phis,
            unchanged_phi_commutes: naive_commutes,
        })
    }
}

fn random_cochain<R: rand::Rng + ?Sized>(order: usize, degree: usize, m: &crate::modlin::FinAbModule, rng: &mut R) -> Vec<i64> {
    (0..num_tuples(order, degree)).flat_map(|_| m.random(rng)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SelchoReport {
    pub sigma: usize,
    pub max_degree: usize,
    pub cochains_checked: usize,
    pub square_commutes: bool,
    /// whether `φ′_v ≠ φ_v`
    pub phi_changed: bool,
    /// whether the square would also commute with `φ′_v = φ_v`
    pub unchanged_phi_commutes: bool,
}
