//! Inhomogeneous (non-normalized) cochains `G^i → M`.

use serde::{Deserialize, Serialize};

use super::gmodule::GModule;
use super::group::FiniteGroup;
use super::sparse::SparseMat;
use crate::error::{Error, Result};
use crate::modlin::zn::md;
use crate::modlin::{FinAbModule, ModuleHom, Pairing};

/// Values are stored tuple by tuple (first entry most significant), each a
/// module element in natural coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cochain {
    pub degree: usize,
    pub rank: usize,
    pub values: Vec<i64>,
}

pub fn num_tuples(order: usize, degree: usize) -> usize {
    order.pow(degree as u32)
}

pub fn tuple_index(order: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &g| acc * order + g)
}

pub fn tuple_of(order: usize, degree: usize, mut idx: usize) -> Vec<usize> {
    let mut t = vec![0; degree];
    for k in (0..degree).rev() {
        t[k] = idx % order;
        idx /= order;
    }
    t
}

/// Moduli of the natural coordinates of `C^i(G, M)`.
pub fn cochain_moduli(order: usize, degree: usize, m: &FinAbModule) -> Vec<i64> {
    let mut out = Vec::with_capacity(num_tuples(order, degree) * m.rank());
    for _ in 0..num_tuples(order, degree) {
        out.extend_from_slice(m.invariants());
    }
    out
}

/// Rejects tables with more than `max_cells` coordinates.
pub fn guard(order: usize, degree: usize, rank: usize, max_cells: usize) -> Result<()> {
    let cells = (order as u128).pow(degree as u32) * rank as u128;
    if cells > max_cells as u128 {
        return Err(Error::SizeLimit(format!(
            "C^{degree} with |G| = {order} and rank {rank} needs {cells} cells (bound {max_cells})"
        )));
    }
    Ok(())
}

impl Cochain {
    pub fn zero(order: usize, degree: usize, rank: usize) -> Self {
        Cochain { degree, rank, values: vec![0; num_tuples(order, degree) * rank] }
    }

    pub fn from_fn(order: usize, degree: usize, rank: usize, mut f: impl FnMut(&[usize]) -> Vec<i64>) -> Self {
        let mut values = Vec::with_capacity(num_tuples(order, degree) * rank);
        for idx in 0..num_tuples(order, degree) {
            let v = f(&tuple_of(order, degree, idx));
            assert_eq!(v.len(), rank);
            values.extend(v);
        }
        Cochain { degree, rank, values }
    }

    /// Degree-zero cochain with value `m`.
    pub fn constant(m: &[i64]) -> Self {
        Cochain { degree: 0, rank: m.len(), values: m.to_vec() }
    }

    pub fn value(&self, idx: usize) -> &[i64] {
        &self.values[idx * self.rank..(idx + 1) * self.rank]
    }

    pub fn at(&self, order: usize, tuple: &[usize]) -> &[i64] {
        debug_assert_eq!(tuple.len(), self.degree);
        self.value(tuple_index(order, tuple))
    }

    pub fn num_values(&self) -> usize {
        if self.rank == 0 {
            0
        } else {
            self.values.len() / self.rank
        }
    }

    fn zip(&self, other: &Cochain, m: &FinAbModule, f: impl Fn(i64, i64) -> i64) -> Cochain {
        assert_eq!((self.degree, self.rank), (other.degree, other.rank));
        let inv = m.invariants();
        let r = self.rank;
        let values = self.values.iter().zip(&other.values).enumerate().map(|(k, (&a, &b))| md(f(a, b), inv[k % r])).collect();
        Cochain { degree: self.degree, rank: r, values }
    }

    pub fn add(&self, other: &Cochain, m: &FinAbModule) -> Cochain {
        self.zip(other, m, |a, b| a + b)
    }

    pub fn sub(&self, other: &Cochain, m: &FinAbModule) -> Cochain {
        self.zip(other, m, |a, b| a - b)
    }

    pub fn scale(&self, k: i64, m: &FinAbModule) -> Cochain {
        let inv = m.invariants();
        let r = self.rank;
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &a)| (a as i128 * k as i128).rem_euclid(inv[i % r] as i128) as i64)
            .collect();
        Cochain { degree: self.degree, rank: r, values }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&x| x == 0)
    }

    /// `h ∘ f`, value by value (`order` is `|G|`, needed when the source is zero).
    pub fn map(&self, h: &ModuleHom, order: usize) -> Cochain {
        let r = h.target.rank();
        let count = num_tuples(order, self.degree);
        let mut values = Vec::with_capacity(count * r);
        for idx in 0..count {
            if self.rank == 0 {
                values.extend(std::iter::repeat(0).take(r));
            } else {
                values.extend(h.apply(self.value(idx)));
            }
        }
        Cochain { degree: self.degree, rank: r, values }
    }
}

/// The coboundary, evaluated straight from its defining formula.
pub fn differential(gm: &GModule, f: &Cochain) -> Cochain {
    let g = &gm.group;
    let n = g.order();
    let i = f.degree;
    let m = &gm.module;
    Cochain::from_fn(n, i + 1, f.rank, |t| {
        let mut acc = gm.act(t[0], f.at(n, &t[1..]));
        for j in 1..=i {
            let mut u: Vec<usize> = Vec::with_capacity(i);
            u.extend_from_slice(&t[..j - 1]);
            u.push(g.mul(t[j - 1], t[j]));
            u.extend_from_slice(&t[j + 1..]);
            let v = f.at(n, &u);
            acc = if j % 2 == 0 { m.add(&acc, v) } else { m.add(&acc, &m.neg(v)) };
        }
        let last = f.at(n, &t[..i]);
        if (i + 1) % 2 == 0 {
            m.add(&acc, last)
        } else {
            m.add(&acc, &m.neg(last))
        }
    })
}

/// `d^i: C^i(G, M) → C^{i+1}(G, M)` as a sparse matrix on natural coordinates.
pub fn differential_matrix(gm: &GModule, i: usize) -> SparseMat {
    let g = &gm.group;
    let n = g.order();
    let r = gm.rank();
    let src = num_tuples(n, i);
    let tgt_moduli = cochain_moduli(n, i + 1, &gm.module);
    let mut cols = Vec::with_capacity(src * r);
    let sign = |k: usize| if k % 2 == 0 { 1 } else { -1 };
    for idx in 0..src {
        let t = tuple_of(n, i, idx);
        for c in 0..r {
            let mut e: Vec<(u32, i64)> = Vec::new();
            // g_1 · f(g_2, …)
            for h in 0..n {
                let mut u = Vec::with_capacity(i + 1);
                u.push(h);
                u.extend_from_slice(&t);
                let base = tuple_index(n, &u) * r;
                let a = gm.action(h);
                for row in 0..r {
                    if a[(row, c)] != 0 {
                        e.push(((base + row) as u32, a[(row, c)]));
                    }
                }
            }
            for j in 1..=i {
                for h in 0..n {
                    let mut u = Vec::with_capacity(i + 1);
                    u.extend_from_slice(&t[..j - 1]);
                    u.push(h);
                    u.push(g.mul(g.inv(h), t[j - 1]));
                    u.extend_from_slice(&t[j..]);
                    e.push(((tuple_index(n, &u) * r + c) as u32, sign(j)));
                }
            }
            for h in 0..n {
                let mut u = t.clone();
                u.push(h);
                e.push(((tuple_index(n, &u) * r + c) as u32, sign(i + 1)));
            }
            cols.push(e);
        }
    }
    SparseMat::from_columns(tgt_moduli.len(), cols, &tgt_moduli)
}

/// `(f ∪ g)(σ, τ) = P(f(σ), (σ_1⋯σ_i)·g(τ))`.
pub fn cup(group: &FiniteGroup, f: &Cochain, g: &Cochain, gn: &GModule, pairing: &Pairing) -> Cochain {
    let n = group.order();
    let (i, j) = (f.degree, g.degree);
    let rl = pairing.target.rank();
    let mut values = Vec::with_capacity(num_tuples(n, i + j) * rl);
    for sidx in 0..num_tuples(n, i) {
        let s = tuple_of(n, i, sidx);
        let prod = s.iter().fold(group.identity(), |a, &b| group.mul(a, b));
        let x = if f.rank == 0 { vec![] } else { f.value(sidx).to_vec() };
        for tidx in 0..num_tuples(n, j) {
            let y = if g.rank == 0 { vec![] } else { gn.act(prod, g.value(tidx)) };
            values.extend(pairing.apply(&x, &y));
        }
    }
    Cochain { degree: i + j, rank: rl, values }
}

/// Checks `P(gx, gy) = g P(x, y)` on basis pairs for every `g`.
pub fn pairing_is_equivariant(gm: &GModule, gn: &GModule, gl: &GModule, pairing: &Pairing) -> bool {
    let group = &gm.group;
    (0..group.order()).all(|g| {
        (0..gm.rank()).all(|a| {
            (0..gn.rank()).all(|b| {
                let (x, y) = (gm.module.basis(a), gn.module.basis(b));
                pairing.apply(&gm.act(g, &x), &gn.act(g, &y)) == gl.act(g, &pairing.apply(&x, &y))
            })
        })
    })
}

/// `(σ* f)(τ_1, …, τ_i) = σ · f(σ^{-1} τ_1 σ, …, σ^{-1} τ_i σ)`.
pub fn conjugate_cochain(gm: &GModule, sigma: usize, f: &Cochain) -> Cochain {
    let g = &gm.group;
    let n = g.order();
    let si = g.inv(sigma);
    Cochain::from_fn(n, f.degree, f.rank, |t| {
        let u: Vec<usize> = t.iter().map(|&x| g.conj(si, x)).collect();
        gm.act(sigma, f.at(n, &u))
    })
}

/// `f ∘ j` for a homomorphism `j: H → G` (indexed by elements of `H`).
pub fn restrict_cochain(sub_order: usize, embedding: &[usize], g_order: usize, f: &Cochain) -> Cochain {
    Cochain::from_fn(sub_order, f.degree, f.rank, |t| {
        let u: Vec<usize> = t.iter().map(|&x| embedding[x]).collect();
        f.at(g_order, &u).to_vec()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modlin::Mat;
    use std::sync::Arc;

    fn sign_module() -> GModule {
        let g = Arc::new(FiniteGroup::symmetric3());
        // transpositions act by -1 on Z/4: sign character
        let images: Vec<Mat> = g
            .generators()
            .iter()
            .map(|&s| Mat::from_rows(&[vec![if g.element_order(s) == 2 { 3 } else { 1 }]]))
            .collect();
        GModule::from_generators(g, FinAbModule::cyclic(4), &images).unwrap()
    }

    #[test]
    fn degree_zero_differential() {
        let gm = sign_module();
        let m = Cochain::constant(&[1]);
        let d = differential(&gm, &m);
        for s in 0..6 {
            let expect = md(gm.act(s, &[1])[0] - 1, 4);
            assert_eq!(d.at(6, &[s]), &[expect]);
        }
    }

    #[test]
    fn sparse_matches_formula() {
        let gm = sign_module();
        for i in 0..3 {
            let mut seed = 7u64;
            let f = Cochain::from_fn(6, i, 1, |_| {
                seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                vec![((seed >> 33) % 4) as i64]
            });
            let d1 = differential(&gm, &f);
            let d2 = differential_matrix(&gm, i).apply(&f.values, &cochain_moduli(6, i + 1, &gm.module));
            assert_eq!(d1.values, d2);
            assert!(differential(&gm, &d1).is_zero());
        }
    }
}
