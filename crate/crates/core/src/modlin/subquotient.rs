//! Subquotients `Z / B` of a diagonal module `⊕ Z/m_j`, presented in
//! invariant-factor form with explicit coordinate maps.

use super::howell::Span;
use super::mat::Mat;
use super::module::{FinAbModule, ModuleHom};
use super::snf::{normalize_diagonal, snf_mod};
use super::zn::{lcm, md, mulmod};

/// `y_j = (N/m_j)·x_j`: natural coordinates into `(Z/N)^k`.
pub fn embed(x: &[i64], moduli: &[i64], n: i64) -> Vec<i64> {
    x.iter().zip(moduli).map(|(&a, &m)| mulmod(md(a, m), n / m, n)).collect()
}

pub fn unembed(y: &[i64], moduli: &[i64], n: i64) -> Vec<i64> {
    y.iter()
        .zip(moduli)
        .map(|(&a, &m)| {
            let k = n / m;
            debug_assert_eq!(md(a, n) % k, 0, "vector is not in the embedded lattice");
            md(a, n) / k
        })
        .collect()
}

pub fn common_modulus(moduli: &[i64]) -> i64 {
    moduli.iter().fold(1, |a, &m| lcm(a, m))
}

/// Span of natural-coordinate vectors, embedded and finalized.
pub fn span_of(moduli: &[i64], n: i64, gens: &[Vec<i64>]) -> Span {
    let mut s = Span::new(n, moduli.len());
    for g in gens {
        s.push(embed(g, moduli, n));
    }
    s.finalize();
    s
}

/// Natural-coordinate generators of `{x : Σ x_k·cols_k = 0}` in `⊕ Z/src_mod_k`,
/// where `cols_k` are images in `⊕ Z/tgt_mod_i`.
pub fn kernel_gens(src_moduli: &[i64], tgt_moduli: &[i64], cols: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = lcm(common_modulus(src_moduli), common_modulus(tgt_moduli));
    let mut s = Span::with_tracking(n, tgt_moduli.len(), cols.len());
    for c in cols {
        s.push(embed(c, tgt_moduli, n));
    }
    s.finalize();
    let mut out: Vec<Vec<i64>> = s
        .relations()
        .iter()
        .map(|r| r.iter().zip(src_moduli).map(|(&c, &m)| md(c, m)).collect::<Vec<i64>>())
        .filter(|v: &Vec<i64>| v.iter().any(|&x| x != 0))
        .collect();
    out.sort();
    out.dedup();
    out
}

#[derive(Clone, Debug)]
pub struct Subquotient {
    pub module: FinAbModule,
    n: i64,
    moduli: Vec<i64>,
    z: Span,
    b: Span,
    /// column transform from z-row coordinates to Smith coordinates
    v: Mat,
    delta: Vec<i64>,
    /// canonical ← Smith diagonal
    to: Mat,
    /// embedded representatives of the canonical generators
    gens: Vec<Vec<i64>>,
}

impl Subquotient {
    /// `B` must lie inside `Z`; both are given by natural-coordinate generators.
    pub fn new(moduli: &[i64], z_gens: &[Vec<i64>], b_gens: &[Vec<i64>]) -> Self {
        let n = common_modulus(moduli).max(1);
        let z = span_of(moduli, n, z_gens);
        Self::from_span(moduli, n, z, b_gens)
    }

    /// `z` is a finalized span of embedded vectors with modulus `n`.
    pub fn from_span(moduli: &[i64], n: i64, z: Span, b_gens: &[Vec<i64>]) -> Self {
        assert!(z.is_finalized());
        let b = span_of(moduli, n, b_gens);
        let basis: Vec<Vec<i64>> = z.basis().into_iter().map(|(_, v)| v.to_vec()).collect();
        let s = basis.len();
        let mut rels = Span::new(n, s);
        for (r, row) in basis.iter().enumerate() {
            let pivot = z.basis()[r].0;
            let k = n / row[pivot];
            let w: Vec<i64> = row.iter().map(|&x| mulmod(x, k, n)).collect();
            let (res, coeffs) = z.reduce(&w);
            debug_assert!(res.iter().all(|&x| x == 0));
            let mut rel: Vec<i64> = coeffs.iter().map(|&c| md(-c, n)).collect();
            rel[r] = md(rel[r] + k, n);
            rels.push(rel);
        }
        for (_, bv) in b.basis() {
            let (res, coeffs) = z.reduce(bv);
            assert!(res.iter().all(|&x| x == 0), "boundary generator outside the cycle span");
            rels.push(coeffs);
        }
        rels.finalize();
        let rel_rows: Vec<Vec<i64>> = rels.basis().into_iter().map(|(_, v)| v.to_vec()).collect();
        let smith = snf_mod(&rel_rows, s, n);
        let (invariants, to, from) = normalize_diagonal(&smith.diag);
        let module = FinAbModule::new(invariants.clone()).expect("normalized invariants");
        let mut gens = Vec::with_capacity(invariants.len());
        for c in 0..invariants.len() {
            // smith coordinates of the generator, then z-row coordinates
            let w: Vec<i64> = (0..s).map(|i| from[(i, c)]).collect();
            let mut zc = vec![0i64; s];
            for (i, &wi) in w.iter().enumerate() {
                if wi == 0 {
                    continue;
                }
                for (j, zj) in zc.iter_mut().enumerate() {
                    *zj = md(*zj + mulmod(wi, smith.v_inv[(i, j)], n), n);
                }
            }
            let mut vec = vec![0i64; moduli.len()];
            for (r, &q) in zc.iter().enumerate() {
                if q != 0 {
                    for (x, &y) in vec.iter_mut().zip(&basis[r]) {
                        *x = md(*x + mulmod(q, y, n), n);
                    }
                }
            }
            gens.push(vec);
        }
        Subquotient { module, n, moduli: moduli.to_vec(), z, b, v: smith.v, delta: smith.diag, to, gens }
    }

    pub fn modulus(&self) -> i64 {
        self.n
    }

    pub fn ambient_moduli(&self) -> &[i64] {
        &self.moduli
    }

    pub fn contains_z(&self, x: &[i64]) -> bool {
        self.z.contains(&embed(x, &self.moduli, self.n))
    }

    pub fn contains_b(&self, x: &[i64]) -> bool {
        self.b.contains(&embed(x, &self.moduli, self.n))
    }

    /// Canonical coordinates of the class of `x ∈ Z`; `None` if `x ∉ Z`.
    pub fn class_of(&self, x: &[i64]) -> Option<Vec<i64>> {
        let (res, q) = self.z.reduce(&embed(x, &self.moduli, self.n));
        if res.iter().any(|&r| r != 0) {
            return None;
        }
        let s = q.len();
        let mut w = vec![0i64; s];
        for (i, &qi) in q.iter().enumerate() {
            if qi == 0 {
                continue;
            }
            for (j, wj) in w.iter_mut().enumerate() {
                *wj = md(*wj + mulmod(qi, self.v[(i, j)], self.n), self.n);
            }
        }
        for (wj, &d) in w.iter_mut().zip(&self.delta) {
            *wj = md(*wj, d);
        }
        Some(self.module.reduce(&self.to.mul_vec(&w)))
    }

    /// A natural-coordinate representative of the class with canonical coordinates `c`.
    pub fn representative(&self, c: &[i64]) -> Vec<i64> {
        let mut y = vec![0i64; self.moduli.len()];
        for (k, &ck) in c.iter().enumerate() {
            if ck != 0 {
                for (a, &b) in y.iter_mut().zip(&self.gens[k]) {
                    *a = md(*a + mulmod(ck, b, self.n), self.n);
                }
            }
        }
        unembed(&y, &self.moduli, self.n)
    }

    pub fn generator(&self, k: usize) -> Vec<i64> {
        unembed(&self.gens[k], &self.moduli, self.n)
    }
}

/// Some `x` with `h(x) = y`, if one exists.
pub fn solve(h: &ModuleHom, y: &[i64]) -> Option<Vec<i64>> {
    let (src, tgt) = (h.source.invariants(), h.target.invariants());
    let n = lcm(common_modulus(src), common_modulus(tgt));
    let mut s = Span::with_tracking(n, tgt.len(), src.len());
    for j in 0..src.len() {
        s.push(embed(&h.apply(&h.source.basis(j)), tgt, n));
    }
    s.finalize();
    let c = s.preimage(&embed(y, tgt, n))?;
    Some(h.source.reduce(&c))
}

/// Kernel of `h` with its inclusion.
pub fn kernel(h: &ModuleHom) -> (FinAbModule, ModuleHom) {
    let src = h.source.invariants();
    let cols: Vec<Vec<i64>> = (0..h.source.rank()).map(|j| h.apply(&h.source.basis(j))).collect();
    let gens = kernel_gens(src, h.target.invariants(), &cols);
    let sq = Subquotient::new(src, &gens, &[]);
    let cols: Vec<Vec<i64>> = (0..sq.module.rank()).map(|k| sq.generator(k)).collect();
    let inc = ModuleHom::new(sq.module.clone(), h.source.clone(), Mat::from_cols(h.source.rank(), &cols))
        .expect("kernel inclusion is well defined");
    (sq.module, inc)
}

/// Image of `h` with the corestriction `source → im` and the inclusion `im → target`.
pub fn image(h: &ModuleHom) -> (FinAbModule, ModuleHom, ModuleHom) {
    let tgt = h.target.invariants();
    let cols: Vec<Vec<i64>> = (0..h.source.rank()).map(|j| h.apply(&h.source.basis(j))).collect();
    let sq = Subquotient::new(tgt, &cols, &[]);
    let onto: Vec<Vec<i64>> = cols.iter().map(|c| sq.class_of(c).expect("image column")).collect();
    let gens: Vec<Vec<i64>> = (0..sq.module.rank()).map(|k| sq.generator(k)).collect();
    let co = ModuleHom::new(h.source.clone(), sq.module.clone(), Mat::from_cols(sq.module.rank(), &onto))
        .expect("corestriction is well defined");
    let inc = ModuleHom::new(sq.module.clone(), h.target.clone(), Mat::from_cols(h.target.rank(), &gens))
        .expect("image inclusion is well defined");
    (sq.module, co, inc)
}

/// Cokernel of `h` with the projection and a (non-canonical) set-theoretic lift.
pub fn cokernel(h: &ModuleHom) -> (FinAbModule, ModuleHom) {
    let (m, p, _) = cokernel_with_lift(h);
    (m, p)
}

/// Like [`cokernel`] but also returns an additive-on-generators lift matrix
/// sending canonical cokernel generators to target representatives.
pub fn cokernel_with_lift(h: &ModuleHom) -> (FinAbModule, ModuleHom, Mat) {
    let tgt = h.target.invariants();
    let all: Vec<Vec<i64>> = (0..h.target.rank()).map(|i| h.target.basis(i)).collect();
    let cols: Vec<Vec<i64>> = (0..h.source.rank()).map(|j| h.apply(&h.source.basis(j))).collect();
    let sq = Subquotient::new(tgt, &all, &cols);
    let proj: Vec<Vec<i64>> = all.iter().map(|e| sq.class_of(e).expect("every vector is a cycle")).collect();
    let p = ModuleHom::new(h.target.clone(), sq.module.clone(), Mat::from_cols(sq.module.rank(), &proj))
        .expect("cokernel projection is well defined");
    let lifts: Vec<Vec<i64>> = (0..sq.module.rank()).map(|k| sq.generator(k)).collect();
    (sq.module.clone(), p, Mat::from_cols(h.target.rank(), &lifts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn hom(src: &[i64], tgt: &[i64], rows: &[Vec<i64>]) -> ModuleHom {
        ModuleHom::new(FinAbModule::new(src.to_vec()).unwrap(), FinAbModule::new(tgt.to_vec()).unwrap(), Mat::from_rows(rows))
            .unwrap()
    }

    #[test]
    fn times_two_on_z4() {
        let h = hom(&[4], &[4], &[vec![2]]);
        let (k, inc) = kernel(&h);
        assert_eq!(k.invariants(), &[2]);
        assert_eq!(inc.apply(&[1]), vec![2]);
        let (c, _) = cokernel(&h);
        assert_eq!(c.invariants(), &[2]);
    }

    #[test]
    fn surjection_has_zero_cokernel() {
        let h = hom(&[4], &[2], &[vec![1]]);
        assert!(cokernel(&h).0.is_zero());
        assert_eq!(kernel(&h).0.invariants(), &[2]);
    }

    #[test]
    fn zero_map_kernel_is_everything() {
        let m = FinAbModule::new(vec![3, 9]).unwrap();
        let (k, _) = kernel(&ModuleHom::zero(&m, &FinAbModule::cyclic(5)));
        assert_eq!(k, m);
    }

    #[test]
    fn subquotient_against_enumeration() {
        // Z = all of Z/4 + Z/8, B = span((2, 4))
        let sq = Subquotient::new(&[4, 8], &[vec![1, 0], vec![0, 1]], &[vec![2, 4]]);
        assert_eq!(sq.module.order(), 16);
        let mut classes = HashSet::new();
        for a in 0..4 {
            for b in 0..8 {
                let c = sq.class_of(&[a, b]).unwrap();
                let r = sq.representative(&c);
                let diff = [md(a - r[0], 4), md(b - r[1], 8)];
                assert!(sq.contains_b(&diff));
                classes.insert(c);
            }
        }
        assert_eq!(classes.len(), 16);
    }
}
