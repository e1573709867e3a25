//! The dual extension `0 → C^∨ → B^∨ → A^∨ → 0`.

use super::split::{ExtensionCocycle, SplitExtension};
use crate::error::{Error, Result};
use crate::groupcoh::{Cochain, GModule};
use crate::modlin::hom::transpose_hom_into;
use crate::modlin::ModuleHom;

/// Duals are taken into `Z/modulus` with `modulus = exp(B)`. The dual sequence
/// is split by `t*` with retraction `s*`.
#[derive(Clone, Debug)]
pub struct DualExtension {
    pub modulus: i64,
    pub ext: SplitExtension,
    /// `χ*(σ) = χ(σ)^*`, valued in `Hom(A^∨, C^∨)`
    pub chi_star: ExtensionCocycle,
}

pub fn dual_extension(e: &SplitExtension) -> Result<DualExtension> {
    dual_extension_into(e, e.b.module.exponent().max(1))
}

/// Duals into `Z/n` for a multiple `n` of `exp(B)`.
pub fn dual_extension_into(e: &SplitExtension, n: i64) -> Result<DualExtension> {
    if n % e.b.module.exponent().max(1) != 0 {
        return Err(Error::InvalidInput(format!("exp(B) does not divide {n}")));
    }
    let (ad, _) = e.a.dual_into(n);
    let (bd, _) = e.b.dual_into(n);
    let (cd, _) = e.c.dual_into(n);
    let iota = transpose_hom_into(&e.pi, n).2;
    let pi = transpose_hom_into(&e.iota, n).2;
    let s = transpose_hom_into(&e.t, n).2;
    let ext = SplitExtension::new(cd.clone(), bd, ad.clone(), iota, pi, Some(s))?;
    if ext.t != transpose_hom_into(&e.s, n).2 {
        return Err(Error::InvalidExtension("retraction of the dual sequence is not s*".into()));
    }
    let (hom, coords) = GModule::hom(&ad, &cd);
    let order = e.group().order();
    let chi = Cochain::from_fn(order, 1, coords.module.rank(), |t| {
        coords.from_hom(&transpose_hom_into(&e.cocycle_value(t[0]), n).2)
    });
    Ok(DualExtension { modulus: n, ext, chi_star: ExtensionCocycle { hom, coords, chi } })
}

impl DualExtension {
    /// Checks `ι*(χ*(σ)(φ)) = −σ t*(σ^{-1} φ) + t*(φ)` for every `σ` and basis `φ`.
    pub fn displayed_formula_holds(&self) -> bool {
        let g = self.ext.group();
        let (a_dual, b_dual) = (&self.ext.c, &self.ext.b);
        let t_star = &self.ext.s;
        (0..g.order()).all(|sigma| {
            let chi: ModuleHom = self.chi_star.value(sigma);
            (0..a_dual.rank()).all(|k| {
                let phi = a_dual.module.basis(k);
                let lhs = self.ext.iota.apply(&chi.apply(&phi));
                let moved = b_dual.act(sigma, &t_star.apply(&a_dual.act(g.inv(sigma), &phi)));
                let rhs = b_dual.module.add(&b_dual.module.neg(&moved), &t_star.apply(&phi));
                lhs == rhs
            })
        })
    }
}
