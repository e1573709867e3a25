//! The reciprocity skeleton: for `μ: G ↠ X` and a quotient `q: X ↠ Y` whose
//! cocycle `χ = q∘μ` vanishes on every local,
//!
//! * (u1) `χ̃_f² ∘ μ̃¹ = ε·(μ̃_c² ∘ χ̃_f¹)` on `H^1(G, R(1))`, classes in `H^3_c(X ⊗ Y(1))`;
//! * (u2) with `X = Y`, `μ = χ`, the class of `χ ∪ χ ∪ u` is antisymmetric;
//! * (u3) the kernel of `ℓ_S ∘ Ψ` on `H^1(G, R(1))`, `Ψ = μ̃¹`.
//!
//! The local trivializations of `χ` are all zero: `ℓ_v(χ) = 0` and the actions on
//! `X`, `Y` are trivial, so `φ_v = 0` satisfies `dφ_v = ℓ_v(χ)`.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extensions::{allowed_signs, augmentation_extension, extend_homomorphism};
use crate::groupcoh::standard::cochain_complex;
use crate::groupcoh::{cup, Cochain, FiniteGroup, GModule};
use crate::modlin::subquotient::kernel;
use crate::modlin::zn::prime_power;
use crate::modlin::{swap_map, FinAbModule, Mat, ModuleHom, Pairing, TensorModule};
use crate::pools::random_character;
use crate::sign::SignSet;

use super::model::{Local, SiteModel};
use super::selmer::SelmerData;

#[derive(Clone, Debug)]
pub struct ReciprocityInstance {
    pub site: SiteModel,
    pub x: FinAbModule,
    /// `μ(g) ∈ X` for every `g`
    pub mu: Vec<Vec<i64>>,
    /// `q: X → Y`
    pub q: ModuleHom,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum Conditional {
    Skipped { reason: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct ReciprocityReport {
    pub group: String,
    pub modulus: i64,
    pub x: Vec<i64>,
    pub y: Vec<i64>,
    pub locals: usize,
    /// invariants of `H^1(G, R(1))`
    pub h1: Vec<i64>,
    /// (u1): signs allowed by every generator of `H^1`
    pub outer_square: SignSet,
    /// (u2): `c + sw_*(c)` is a coboundary for every generator
    pub antisymmetric: bool,
    /// (u2): some `χ ∪ χ ∪ u` class was nonzero
    pub antisymmetry_nontrivial: bool,
    /// (u3): invariants of `ker(ℓ_S ∘ Ψ)`
    pub rho_kernel: Vec<i64>,
    pub theta2: Conditional,
    pub triangle: Conditional,
}

impl ReciprocityInstance {
    pub fn y(&self) -> &FinAbModule {
        &self.q.target
    }

    fn chi(&self) -> Vec<Vec<i64>> {
        self.mu.iter().map(|m| self.q.apply(m)).collect()
    }

    /// Surjectivity of `μ` and `q`, and `ℓ_v(χ) = 0` for every `v`.
    pub fn validate(&self) -> Result<()> {
        let g = &self.site.group;
        let n = self.site.modulus;
        if !matches!(prime_power(n), Some((p, _)) if p > 1) {
            return Err(Error::InvalidInput(format!("modulus {n} is not a prime power")));
        }
        if self.q.source != self.x {
            return Err(Error::InvalidInput("q must be defined on X".into()));
        }
        if n % self.x.exponent().max(1) != 0 {
            return Err(Error::InvalidInput(format!("exponent of X = {} does not divide {n}", self.x)));
        }
        // builds and checks μ: homomorphism, surjective
        let (p, e) = prime_power(n).expect("checked");
        augmentation_extension(g.clone(), &self.x, &self.mu, p, e)?;
        if !crate::modlin::cokernel(&self.q).0.is_zero() {
            return Err(Error::InvalidInput("q: X → Y is not surjective".into()));
        }
        let chi = self.chi();
        let y = self.y();
        for l in &self.site.locals {
            if let Some(&h) = l.embedding.iter().find(|&&h| !y.reduce(&chi[h]).iter().all(|&c| c == 0)) {
                return Err(Error::InvalidInput(format!("χ does not vanish on local `{}` (at element {h})", l.name)));
            }
        }
        Ok(())
    }
}

fn one_cochain(order: usize, vals: &[Vec<i64>], rank: usize) -> Cochain {
    Cochain::from_fn(order, 1, rank, |t| vals[t[0]].clone())
}

/// `sw` applied to every value of a cochain (or compact cochain) with values in `M ⊗ N`.
fn swap_values(v: &[i64], sw: &ModuleHom) -> Vec<i64> {
    let r = sw.source.rank();
    if r == 0 {
        return vec![];
    }
    v.chunks(r).flat_map(|c| sw.apply(c)).collect()
}

/// Runs (u1)–(u3); the conditional checks need duality data and are skipped.
pub fn reciprocity_suite(inst: &ReciprocityInstance, max_cells: usize) -> Result<ReciprocityReport> {
    inst.validate()?;
    let site = &inst.site;
    let g = &site.group;
    let (n, order) = (site.modulus, g.order());
    let (x, y) = (&inst.x, inst.y().clone());
    let (p, e) = prime_power(n).expect("validated");
    let twisted = |m: &FinAbModule| site.twist_module(&GModule::trivial(g.clone(), m.clone()));
    let r1 = site.r1();
    let (x1, y1) = (twisted(x)?, twisted(&y)?);
    let xy = TensorModule::new(x, &y);
    let xy1 = twisted(&xy.module)?;

    let mu = one_cochain(order, &inst.mu, x.rank());
    let chi_vals = inst.chi();
    let chi = one_cochain(order, &chi_vals, y.rank());

    // Θ via the Selmer data of the Y-quotient extension, φ_v = 0
    let aug_y = augmentation_extension(g.clone(), &y, &chi_vals, p, e)?;
    let zero_phis = site.locals.iter().map(|_| ModuleHom::zero(&FinAbModule::cyclic(n), &y)).collect();
    let ydata = SelmerData::new(site.clone(), aug_y.ext, zero_phis)?;

    let cr = cochain_complex(&r1, 2, max_cells)?;
    let h1 = cr.cohomology(1)?;
    let target = site.compact_complex(&xy1, 3, max_cells)?;
    let b3 = target.cc.boundaries(3);
    let chi_compact: Vec<i64> = chi.values.iter().copied().chain(std::iter::repeat(0).take(site.local_dims(0, y.rank()).iter().sum())).collect();

    let mut outer = SignSet::ALL;
    for k in 0..h1.module().rank() {
        let u = Cochain { degree: 1, rank: 1, values: h1.generator(k) };
        // upper: χ̃_f²(μ ∪ u) = (χ ∪ (μ ∪ u), 0)
        let w = cup(g, &mu, &u, &r1, &Pairing::scalar_right(x, n));
        let upper = site.cup_lc(&chi_compact, 1, &y, &w, &x1, &xy.pairing().flipped());
        // lower: μ ∪_c χ̃_f¹(u)
        let theta = ydata.chi_tilde_f(&u);
        let lower = site.cup_c(&mu, &theta, 2, &y1, &xy.pairing());
        outer = outer.intersect(allowed_signs(&upper, &lower, &b3));
    }

    // (u2) in Y ⊗ Y
    let yy = TensorModule::new(&y, &y);
    let yy1 = twisted(&yy.module)?;
    let sw = swap_map(&yy, &yy);
    let tyy = site.compact_complex(&yy1, 3, max_cells)?;
    let byy = tyy.cc.boundaries(3);
    let mut antisymmetric = true;
    let mut antisymmetry_nontrivial = false;
    for k in 0..h1.module().rank() {
        let u = Cochain { degree: 1, rank: 1, values: h1.generator(k) };
        let w = cup(g, &chi, &u, &r1, &Pairing::scalar_right(&y, n));
        let c = site.cup_lc(&chi_compact, 1, &y, &w, &y1, &yy.pairing().flipped());
        let s = swap_values(&c, &sw);
        let sum: Vec<i64> = c.iter().zip(&s).zip(byy.moduli()).map(|((a, b), m)| (a + b) % m).collect();
        antisymmetric &= byy.contains(&sum);
        antisymmetry_nontrivial |= !byy.contains(&c);
    }

    // (u3) ℓ_S ∘ Ψ : H^1(R(1)) → H^2_l(X(1))
    let lx = site.local_complex(&x1, 3, max_cells)?;
    let h2l = lx.cohomology(2)?;
    let cols: Vec<Vec<i64>> = (0..h1.module().rank())
        .map(|k| {
            let u = Cochain { degree: 1, rank: 1, values: h1.generator(k) };
            let w = cup(g, &mu, &u, &r1, &Pairing::scalar_right(x, n));
            let lw = SiteModel::pack_local(&site.localize(&w));
            h2l.class_of(&lw).expect("localization of a cocycle is a cocycle")
        })
        .collect();
    let rho = ModuleHom::new(h1.module(), h2l.module(), Mat::from_cols(h2l.module().rank(), &cols))?;
    let rho_kernel = kernel(&rho).0.invariants().to_vec();

    let skipped = || Conditional::Skipped { reason: "no duality data supplied".into() };
    Ok(ReciprocityReport {
        group: g.name().to_string(),
        modulus: n,
        x: x.invariants().to_vec(),
        y: y.invariants().to_vec(),
        locals: site.locals.len(),
        h1: h1.module().invariants().to_vec(),
        outer_square: outer,
        antisymmetric,
        antisymmetry_nontrivial,
        rho_kernel,
        theta2: skipped(),
        triangle: skipped(),
    })
}

/// `G = (Z/p)^3`, `μ` the projection onto the first two factors, `Y = X` or
/// the second factor, no locals. The triple product `χ ∪ μ ∪ u` needs three
/// independent directions, so this is the smallest nondegenerate case of (u1)
/// with trivial actions and odd `p`; (u2) is nondegenerate only for `Y = X`.
pub fn elementary_reciprocity(p: i64, y_is_x: bool) -> Result<ReciprocityInstance> {
    let c = FiniteGroup::cyclic(p as usize);
    let mut g = FiniteGroup::direct_product(&FiniteGroup::direct_product(&c, &c), &c);
    g.set_name(format!("Z{p}^3"));
    let g = Arc::new(g);
    let x = FinAbModule::new(vec![p, p])?;
    let mu = extend_homomorphism(&g, &x, &[vec![1, 0], vec![0, 1], vec![0, 0]])?;
    let q = if y_is_x {
        ModuleHom::identity(&x)
    } else {
        ModuleHom::new(x.clone(), FinAbModule::cyclic(p), Mat::from_rows(&[vec![0, 1]]))?
    };
    let site = SiteModel::untwisted(g, vec![], p)?;
    Ok(ReciprocityInstance { site, x, mu, q })
}

/// A random admissible triple over `Z/p`, `Z/p²` or `Z/p × Z/p`, modulus `p^e`.
pub fn random_reciprocity<R: Rng + ?Sized>(p: i64, e: u32, rng: &mut R) -> Result<ReciprocityInstance> {
    let n = p.pow(e);
    let pu = p as usize;
    let (g, x, gen_images): (FiniteGroup, FinAbModule, Vec<Vec<i64>>) = match rng.gen_range(0..3) {
        0 | 1 => {
            let m = if rng.gen_bool(0.5) { p } else { p * p };
            let d = *[p, crate::modlin::zn::gcd(m, n)].choose(rng).expect("nonempty");
            (FiniteGroup::cyclic(m as usize), FinAbModule::cyclic(d), vec![vec![1]])
        }
        _ => {
            let c = FiniteGroup::cyclic(pu);
            let mut g = FiniteGroup::direct_product(&c, &c);
            g.set_name(format!("Z{p}xZ{p}"));
            if rng.gen_bool(0.5) {
                (g, FinAbModule::new(vec![p, p])?, vec![vec![1, 0], vec![0, 1]])
            } else {
                let f = loop {
                    let f = [rng.gen_range(0..p), rng.gen_range(0..p)];
                    if f != [0, 0] {
                        break f;
                    }
                };
                (g, FinAbModule::cyclic(p), vec![vec![f[0]], vec![f[1]]])
            }
        }
    };
    let g = Arc::new(g);
    let mu = extend_homomorphism(&g, &x, &gen_images)?;
    // Y = 0, Y = X or a cyclic quotient of exponent p
    let q = match rng.gen_range(0..4) {
        0 => ModuleHom::zero(&x, &FinAbModule::zero()),
        1 => ModuleHom::identity(&x),
        _ => {
            let y = FinAbModule::cyclic(p);
            let row: Vec<i64> = loop {
                let row: Vec<i64> = x.invariants().iter().map(|_| rng.gen_range(0..p)).collect();
                if row.iter().any(|&v| v != 0) {
                    break row;
                }
            };
            ModuleHom::new(x.clone(), y, Mat::from_rows(&[row]))?
        }
    };
    let chi: Vec<Vec<i64>> = mu.iter().map(|m| q.apply(m)).collect();
    let in_kernel: Vec<usize> = (0..g.order()).filter(|&h| chi[h].iter().all(|&c| c == 0)).collect();
    let k = rng.gen_range(0..=2);
    let locals = (0..k).map(|i| Local::subgroup(format!("v{}", i + 1), &g, &[*in_kernel.choose(rng).expect("identity")])).collect();
    let twist = if rng.gen_bool(0.5) {
        vec![1; g.order()]
    } else {
        let c = random_character(&g, n, rng);
        (0..g.order()).map(|h| c.action(h)[(0, 0)]).collect()
    };
    let site = SiteModel::new(g, locals, n, twist)?;
    Ok(ReciprocityInstance { site, x, mu, q })
}
