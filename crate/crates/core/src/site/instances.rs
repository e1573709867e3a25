//! Standard and random sites and Selmer instances for sweeps.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use super::model::{Local, SiteModel};
use super::selmer::{selmer_trivialize, SelmerData, Trivialization};
use crate::error::Result;
use crate::extensions::{augmentation_extension, extend_homomorphism, SplitExtension};
use crate::groupcoh::{FiniteGroup, DEFAULT_MAX_CELLS};
use crate::modlin::FinAbModule;
use crate::pools::{random_character, random_module};

/// `G = Z/3` with two locals, both `G` via the identity, modulus 3, trivial twist.
pub fn two_point_z3() -> SiteModel {
    let g = Arc::new(FiniteGroup::cyclic(3));
    let id: Vec<usize> = (0..3).collect();
    let locals = (1..=2).map(|k| Local { name: format!("v{k}"), group: g.clone(), embedding: id.clone() }).collect();
    SiteModel::untwisted(g, locals, 3).expect("valid site")
}

/// `G = Z/3`, modulus 3, with `k` trivial locals.
pub fn trivial_locals_z3(k: usize) -> SiteModel {
    let g = Arc::new(FiniteGroup::cyclic(3));
    let locals = (1..=k).map(|i| Local::subgroup(format!("v{i}"), &g, &[])).collect();
    SiteModel::untwisted(g, locals, 3).expect("valid site")
}

/// Up to `max_locals` cyclic locals `⟨g⟩`, each conjugated by a random
/// element, and a random twisting character mod `n`.
pub fn random_site<R: Rng + ?Sized>(group: &Arc<FiniteGroup>, n: i64, max_locals: usize, rng: &mut R) -> SiteModel {
    let k = rng.gen_range(0..=max_locals);
    let locals = (0..k)
        .map(|i| {
            let x = rng.gen_range(0..group.order());
            let l = Local::subgroup(format!("v{}", i + 1), group, &[x]);
            l.conjugate(group, rng.gen_range(0..group.order()))
        })
        .collect();
    let twist = if rng.gen_bool(0.5) {
        vec![1; group.order()]
    } else {
        let chi = random_character(group, n, rng);
        (0..group.order()).map(|g| chi.action(g)[(0, 0)]).collect()
    };
    SiteModel::new(group.clone(), locals, n, twist).expect("random site is valid")
}

/// Outcome of one attempt at a random Selmer instance.
pub enum Attempt {
    Ok(Box<SelmerData>),
    /// the extension, the site and the obstructed local
    Obstructed(Box<SplitExtension>, Box<SiteModel>, usize),
}

/// A random extension of random modules of exponent dividing `n` over a random site.
pub fn random_selmer_attempt<R: Rng + ?Sized>(group: &Arc<FiniteGroup>, n: i64, max_locals: usize, rng: &mut R) -> Result<Attempt> {
    let site = random_site(group, n, max_locals, rng);
    let a = random_module(group, n, rng);
    let c = random_module(group, n, rng);
    let e = SplitExtension::random(&a, &c, rng, DEFAULT_MAX_CELLS)?;
    let e = if rng.gen_bool(0.3) {
        let s = e.random_section(rng);
        e.with_section(s)?
    } else {
        e
    };
    Ok(match selmer_trivialize(&e, &site)? {
        Trivialization::Trivialized(d) => Attempt::Ok(d),
        Trivialization::Obstructed(o) => Attempt::Obstructed(Box::new(e), Box::new(site), o.local),
    })
}

/// Retries until the extension trivializes locally.
pub fn random_selmer<R: Rng + ?Sized>(groups: &[Arc<FiniteGroup>], moduli: &[i64], max_locals: usize, rng: &mut R) -> Result<SelmerData> {
    loop {
        let g = groups.choose(rng).expect("nonempty group pool");
        let n = *moduli.choose(rng).expect("nonempty modulus pool");
        if let Attempt::Ok(d) = random_selmer_attempt(g, n, max_locals, rng)? {
            return Ok(*d);
        }
    }
}

/// `S_3` with two locals `⟨(12)⟩`, one of them conjugated, modulus `n`.
pub fn z2_in_s3(n: i64) -> SiteModel {
    let g = Arc::new(FiniteGroup::symmetric3());
    let t = (0..g.order()).find(|&x| g.element_order(x) == 2).expect("S3 has an involution");
    let r = (0..g.order()).find(|&x| g.element_order(x) == 3).expect("S3 has a 3-cycle");
    let v1 = Local::subgroup("v1", &g, &[t]);
    let v2 = v1.conjugate(&g, r);
    SiteModel::untwisted(g, vec![v1, Local { name: "v2".into(), ..v2 }], n).expect("valid site")
}

/// Random extensions over a fixed site, retried until locally trivial.
pub fn random_selmer_on<R: Rng + ?Sized>(site: &SiteModel, rng: &mut R) -> Result<SelmerData> {
    loop {
        let a = random_module(&site.group, site.modulus, rng);
        let c = random_module(&site.group, site.modulus, rng);
        let e = SplitExtension::random(&a, &c, rng, DEFAULT_MAX_CELLS)?;
        if let Trivialization::Trivialized(d) = selmer_trivialize(&e, site)? {
            return Ok(*d);
        }
    }
}

/// The augmentation extension of `(Z/p)^r` for `μ = id`, over the site with
/// no locals (`trivial_local = false`) or one trivial local.
pub fn elementary_augmentation(p: i64, r: usize, trivial_local: bool) -> Result<SelmerData> {
    let c = FiniteGroup::cyclic(p as usize);
    let mut g = c.clone();
    for _ in 1..r {
        g = FiniteGroup::direct_product(&g, &c);
    }
    let g = Arc::new(g);
    let x = FinAbModule::new(vec![p; r])?;
    let basis: Vec<Vec<i64>> = (0..r).map(|k| (0..r).map(|l| i64::from(k == l)).collect()).collect();
    let mu = extend_homomorphism(&g, &x, &basis)?;
    let aug = augmentation_extension(g.clone(), &x, &mu, p, 1)?;
    let locals = if trivial_local { vec![Local::subgroup("v", &g, &[])] } else { vec![] };
    let site = SiteModel::untwisted(g, locals, p)?;
    match selmer_trivialize(&aug.ext, &site)? {
        Trivialization::Trivialized(d) => Ok(*d),
        Trivialization::Obstructed(_) => unreachable!("trivial locals never obstruct"),
    }
}
