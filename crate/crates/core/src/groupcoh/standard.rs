//! The inhomogeneous cochain complex of a G-module and the chain maps between
//! such complexes that come from module maps and subgroup restriction.

use super::cochain::{cochain_moduli, differential_matrix, guard, num_tuples, tuple_index, tuple_of};
use super::complex::{ChainMap, Cohomology, Complex};
use super::gmodule::GModule;
use super::group::FiniteGroup;
use super::sparse::SparseMat;
use crate::error::{Error, Result};
use crate::modlin::ModuleHom;

/// Default bound on the number of coordinates in a single cochain group.
pub const DEFAULT_MAX_CELLS: usize = 600_000;

/// `C(G, M)` in degrees `0..=top`.
pub fn cochain_complex(gm: &GModule, top: usize, max_cells: usize) -> Result<Complex> {
    let n = gm.group.order();
    guard(n, top, gm.rank(), max_cells)?;
    let pieces = (0..=top).map(|i| cochain_moduli(n, i, &gm.module)).collect();
    let diffs = (0..top).map(|i| differential_matrix(gm, i)).collect();
    Complex::new(0, pieces, diffs, format!("C({}, {})", gm.group.name(), gm.module))
}

/// `H^i(G, M)` together with the complex it was computed from.
pub fn group_cohomology(gm: &GModule, i: usize, max_cells: usize) -> Result<(Complex, Cohomology)> {
    let c = cochain_complex(gm, i + 1, max_cells)?;
    let h = c.cohomology(i as i32)?;
    Ok((c, h))
}

/// `f ↦ h ∘ f` in degrees `0..=top`; a chain map when `h` is equivariant.
pub fn pointwise_map(h: &ModuleHom, order: usize, top: usize) -> ChainMap {
    ChainMap { lo: 0, maps: (0..=top).map(|i| SparseMat::pointwise(h, num_tuples(order, i))).collect() }
}

pub fn equivariant_map(a: &GModule, b: &GModule, h: &ModuleHom, top: usize) -> Result<ChainMap> {
    if !a.is_equivariant(b, h) {
        return Err(Error::NotEquivariant(format!("{} → {}", a.module, b.module)));
    }
    Ok(pointwise_map(h, a.group.order(), top))
}

/// `f ↦ f ∘ j` for `j: H → G`, degrees `0..=top`, values in a rank-`r` module.
pub fn restriction_map(g: &FiniteGroup, h: &FiniteGroup, embedding: &[usize], rank: usize, top: usize) -> ChainMap {
    let (n, m) = (g.order(), h.order());
    let maps = (0..=top)
        .map(|i| {
            let mut cols: Vec<Vec<(u32, i64)>> = vec![Vec::new(); num_tuples(n, i) * rank];
            for idx in 0..num_tuples(m, i) {
                let t = tuple_of(m, i, idx);
                let u: Vec<usize> = t.iter().map(|&x| embedding[x]).collect();
                let src = tuple_index(n, &u);
                for c in 0..rank {
                    cols[src * rank + c].push(((idx * rank + c) as u32, 1));
                }
            }
            SparseMat::from_raw(num_tuples(m, i) * rank, cols)
        })
        .collect();
    ChainMap { lo: 0, maps }
}
