//! `∪_c` and `_c∪`: cup products between global cochains and compactly
//! supported ones, in flat coordinates `C^j ⊕ C_l^{j−1}`.

use crate::error::{Error, Result};
use crate::groupcoh::cochain::num_tuples;
use crate::groupcoh::{cup, Cochain, GModule};
use crate::modlin::{FinAbModule, Pairing};

use super::model::{CompactComplex, SiteModel};

impl SiteModel {
    /// The per-`v` cochains of degree `deg` packed in `y`.
    pub fn unpack_local(&self, deg: usize, rank: usize, y: &[i64]) -> Vec<Cochain> {
        let mut off = 0;
        let parts = self
            .locals
            .iter()
            .map(|l| {
                let k = num_tuples(l.group.order(), deg) * rank;
                let c = Cochain { degree: deg, rank, values: y[off..off + k].to_vec() };
                off += k;
                c
            })
            .collect();
        assert_eq!(off, y.len(), "local vector has the wrong length");
        parts
    }

    pub fn pack_local(parts: &[Cochain]) -> Vec<i64> {
        parts.iter().flat_map(|c| c.values.iter().copied()).collect()
    }

    /// Splits `b ∈ C^j_c(M)` into `(b_1, (b_{2,v})_v)`; the local list is empty for `j = 0`.
    pub fn unpack_compact(&self, j: usize, rank: usize, b: &[i64]) -> (Cochain, Vec<Cochain>) {
        let k = num_tuples(self.group.order(), j) * rank;
        let b1 = Cochain { degree: j, rank, values: b[..k].to_vec() };
        let b2 = if j == 0 {
            assert_eq!(b.len(), k);
            vec![]
        } else {
            self.unpack_local(j - 1, rank, &b[k..])
        };
        (b1, b2)
    }

    fn zero_local(&self, deg: Option<usize>, rank: usize) -> Vec<i64> {
        match deg {
            None => vec![],
            Some(d) => vec![0; self.local_dims(d, rank).iter().sum()],
        }
    }

    /// `a ∪_c (b_1, b_2) = (a ∪ b_1, (−1)^i ℓ_S(a) ∪ b_2)` for `a ∈ C^i(M)`,
    /// `b ∈ C^j_c(N)`; `gn` is `N`.
    pub fn cup_c(&self, a: &Cochain, b: &[i64], j: usize, gn: &GModule, pairing: &Pairing) -> Vec<i64> {
        let i = a.degree;
        let rl = pairing.target.rank();
        let (b1, b2) = self.unpack_compact(j, gn.rank(), b);
        let mut out = cup(&self.group, a, &b1, gn, pairing).values;
        if j == 0 {
            out.extend(self.zero_local((i + j).checked_sub(1), rl));
            return out;
        }
        let la = self.localize(a);
        let sign = if i % 2 == 0 { 1 } else { -1 };
        for ((l, av), bv) in self.locals.iter().zip(&la).zip(&b2) {
            let gnv = gn.restrict(l.group.clone(), &l.embedding);
            let c = cup(&l.group, av, bv, &gnv, pairing).scale(sign, &pairing.target);
            out.extend(c.values);
        }
        out
    }

    /// `(b_1, b_2) _c∪ a = (b_1 ∪ a, b_2 ∪ ℓ_S(a))` for `b ∈ C^j_c(M)`,
    /// `a ∈ C^i(N)`; `gm` is `M` and `gn` is `N`.
    pub fn cup_lc(&self, b: &[i64], j: usize, gm: &FinAbModule, a: &Cochain, gn: &GModule, pairing: &Pairing) -> Vec<i64> {
        let i = a.degree;
        let rl = pairing.target.rank();
        let (b1, b2) = self.unpack_compact(j, gm.rank(), b);
        let mut out = cup(&self.group, &b1, a, gn, pairing).values;
        if j == 0 {
            out.extend(self.zero_local((i + j).checked_sub(1), rl));
            return out;
        }
        let la = self.localize(a);
        for ((l, av), bv) in self.locals.iter().zip(&la).zip(&b2) {
            let gnv = gn.restrict(l.group.clone(), &l.embedding);
            out.extend(cup(&l.group, bv, av, &gnv, pairing).values);
        }
        out
    }
}

fn random_vector<R: rand::Rng + ?Sized>(moduli: &[i64], rng: &mut R) -> Vec<i64> {
    moduli.iter().map(|&m| rng.gen_range(0..m)).collect()
}

fn sub(x: &[i64], y: &[i64], moduli: &[i64]) -> Vec<i64> {
    x.iter().zip(y).zip(moduli).map(|((&a, &b), &m)| (a - b).rem_euclid(m)).collect()
}

fn add_signed(x: &[i64], y: &[i64], sign: i64, moduli: &[i64]) -> Vec<i64> {
    x.iter().zip(y).zip(moduli).map(|((&a, &b), &m)| (a + sign * b).rem_euclid(m)).collect()
}

/// The three complexes a Leibniz check runs in, over degrees `0..=top`.
pub struct LeibnizSetup<'a> {
    pub site: &'a SiteModel,
    pub gm: &'a GModule,
    pub gn: &'a GModule,
    pub pairing: &'a Pairing,
    /// `C_c` of the first factor for `_c∪`, of the second for `∪_c`
    pub compact_factor: &'a CompactComplex,
    pub global_factor: &'a crate::groupcoh::Complex,
    pub target: &'a CompactComplex,
}

impl LeibnizSetup<'_> {
    /// `d(a ∪_c b) = da ∪_c b + (−1)^i a ∪_c db` on random `a ∈ C^i(M)`, `b ∈ C^j_c(N)`.
    pub fn check_cup_c<R: rand::Rng + ?Sized>(&self, i: usize, j: usize, rng: &mut R) -> Result<()> {
        let (gx, cx, tgt) = (self.global_factor, &self.compact_factor.cc, &self.target.cc);
        let (di, dj, dk) = (i as i32, j as i32, (i + j) as i32);
        let a = Cochain { degree: i, rank: self.gm.rank(), values: random_vector(gx.piece(di), rng) };
        let b = random_vector(cx.piece(dj), rng);
        let lhs = tgt.apply_d(dk, &self.site.cup_c(&a, &b, j, self.gn, self.pairing));
        let da = Cochain { degree: i + 1, rank: a.rank, values: gx.apply_d(di, &a.values) };
        let t1 = self.site.cup_c(&da, &b, j, self.gn, self.pairing);
        let t2 = self.site.cup_c(&a, &cx.apply_d(dj, &b), j + 1, self.gn, self.pairing);
        let rhs = add_signed(&t1, &t2, if i % 2 == 0 { 1 } else { -1 }, tgt.piece(dk + 1));
        if sub(&lhs, &rhs, tgt.piece(dk + 1)).iter().any(|&v| v != 0) {
            return Err(Error::InvalidInput(format!("Leibniz rule fails for ∪_c in degrees ({i}, {j})")));
        }
        Ok(())
    }

    /// `d(b _c∪ a) = db _c∪ a + (−1)^j b _c∪ da` on random `b ∈ C^j_c(M)`, `a ∈ C^i(N)`.
    pub fn check_cup_lc<R: rand::Rng + ?Sized>(&self, j: usize, i: usize, rng: &mut R) -> Result<()> {
        let (gx, cx, tgt) = (self.global_factor, &self.compact_factor.cc, &self.target.cc);
        let (di, dj, dk) = (i as i32, j as i32, (i + j) as i32);
        let a = Cochain { degree: i, rank: self.gn.rank(), values: random_vector(gx.piece(di), rng) };
        let b = random_vector(cx.piece(dj), rng);
        let m = &self.gm.module;
        let lhs = tgt.apply_d(dk, &self.site.cup_lc(&b, j, m, &a, self.gn, self.pairing));
        let t1 = self.site.cup_lc(&cx.apply_d(dj, &b), j + 1, m, &a, self.gn, self.pairing);
        let da = Cochain { degree: i + 1, rank: a.rank, values: gx.apply_d(di, &a.values) };
        let t2 = self.site.cup_lc(&b, j, m, &da, self.gn, self.pairing);
        let rhs = add_signed(&t1, &t2, if j % 2 == 0 { 1 } else { -1 }, tgt.piece(dk + 1));
        if sub(&lhs, &rhs, tgt.piece(dk + 1)).iter().any(|&v| v != 0) {
            return Err(Error::InvalidInput(format!("Leibniz rule fails for _c∪ in degrees ({j}, {i})")));
        }
        Ok(())
    }
}
