//! The comparison maps `H^i_c(R(1)) ⊗ T → H^i_c(T(1))` and
//! `H^2(R(1)) ⊗ T → H^2(T(1))` for a module `T` with trivial action.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groupcoh::{Complex, GModule};
use crate::modlin::subquotient::{cokernel, kernel};
use crate::modlin::{FinAbModule, TensorModule};

use super::model::SiteModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TwistStatus {
    Iso,
    NotIso,
    /// source and target are both zero
    Degenerate,
}

#[derive(Clone, Debug, Serialize)]
pub struct TwistMap {
    /// `H3c`, `H2c` or `H2`
    pub name: &'static str,
    pub source: Vec<i64>,
    pub target: Vec<i64>,
    pub status: TwistStatus,
}

#[derive(Clone, Debug, Serialize)]
pub struct TwistReport {
    pub t: Vec<i64>,
    pub maps: Vec<TwistMap>,
}

/// `x ↦ x·t` from cochains with values in `Z/n` to cochains with values in `T`.
fn times(x: &[i64], t: &[i64], tm: &FinAbModule) -> Vec<i64> {
    let r = t.len();
    let mut y = vec![0; x.len() * r];
    for (p, &xp) in x.iter().enumerate() {
        for (k, (&tk, &m)) in t.iter().zip(tm.invariants()).enumerate() {
            y[p * r + k] = ((xp as i128 * tk as i128).rem_euclid(m as i128)) as i64;
        }
    }
    y
}

fn compare(name: &'static str, src: &Complex, tgt: &Complex, deg: i32, tm: &FinAbModule) -> Result<TwistMap> {
    let (h, ht) = (src.cohomology(deg)?, tgt.cohomology(deg)?);
    let hm = h.module();
    let tens = TensorModule::new(&hm, tm);
    let htm = ht.module();
    let f = tens.linearize(&htm, |a, b| {
        let y = times(&h.generator(a), &tm.basis(b), tm);
        ht.class_of(&y).expect("product of a cocycle with a constant is a cocycle")
    });
    let status = if tens.module.is_zero() && htm.is_zero() {
        TwistStatus::Degenerate
    } else if kernel(&f).0.is_zero() && cokernel(&f).0.is_zero() {
        TwistStatus::Iso
    } else {
        TwistStatus::NotIso
    };
    Ok(TwistMap { name, source: tens.module.invariants().to_vec(), target: htm.invariants().to_vec(), status })
}

/// Builds the three comparison maps and reports whether each is an isomorphism.
pub fn twist_identification(site: &SiteModel, t: &FinAbModule, max_cells: usize) -> Result<TwistReport> {
    if site.modulus % t.exponent().max(1) != 0 {
        return Err(Error::InvalidSite(format!("exponent of T = {t} does not divide {}", site.modulus)));
    }
    let r1 = site.r1();
    let t1 = site.twist_module(&GModule::trivial(site.group.clone(), t.clone()))?;
    let (cr, ct) = (site.compact_complex(&r1, 4, max_cells)?, site.compact_complex(&t1, 4, max_cells)?);
    let maps = vec![
        compare("H3c", &cr.cc, &ct.cc, 3, t)?,
        compare("H2c", &cr.cc, &ct.cc, 2, t)?,
        compare("H2", &cr.global, &ct.global, 2, t)?,
    ];
    Ok(TwistReport { t: t.invariants().to_vec(), maps })
}
