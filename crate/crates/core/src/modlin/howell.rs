//! Row spans over `Z/N` kept in Howell form, with optional tracking of the
//! generator combinations that produced each row.

use super::zn::{ext_gcd, md, mulmod, unit_normalizer};

#[derive(Clone, Debug)]
struct Row {
    pivot: usize,
    v: Vec<i64>,
    c: Vec<i64>,
}

/// Submodule of `(Z/N)^dim` spanned by inserted vectors.
///
/// After [`Span::finalize`] the rows form a Howell basis, so greedy reduction
/// decides membership. When tracking is enabled every row carries its
/// expression in the inserted generators, and every combination found to
/// vanish is kept as a relation; after finalizing those relations generate the
/// full kernel of `combo ↦ Σ combo_k · gen_k`.
#[derive(Clone, Debug)]
pub struct Span {
    n: i64,
    dim: usize,
    track: usize,
    rows: Vec<Row>,
    by_col: Vec<Option<usize>>,
    relations: Vec<Vec<i64>>,
    inserted: usize,
    finalized: bool,
}

fn axpy(dst: &mut [i64], k: i64, src: &[i64], n: i64, from: usize) {
    if k == 0 {
        return;
    }
    for i in from..dst.len() {
        if src[i] != 0 {
            dst[i] = md(dst[i] + mulmod(k, src[i], n), n);
        }
    }
}

impl Span {
    pub fn new(n: i64, dim: usize) -> Self {
        Self::with_tracking(n, dim, 0)
    }

    /// `track` is the number of generators whose combinations are recorded.
    pub fn with_tracking(n: i64, dim: usize, track: usize) -> Self {
        assert!(n >= 1);
        Span {
            n,
            dim,
            track,
            rows: Vec::new(),
            by_col: vec![None; dim],
            relations: Vec::new(),
            inserted: 0,
            finalized: true,
        }
    }

    pub fn modulus(&self) -> i64 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Inserts generator number `inserted` (tracked as the unit combination).
    pub fn push(&mut self, v: Vec<i64>) {
        let mut c = vec![0; self.track];
        if self.track > 0 {
            assert!(self.inserted < self.track, "more generators than tracked slots");
            c[self.inserted] = 1;
        }
        self.inserted += 1;
        self.insert_with(v, c);
    }

    /// Returns whether any row was added or changed.
    fn insert_with(&mut self, mut v: Vec<i64>, mut c: Vec<i64>) -> bool {
        assert_eq!(v.len(), self.dim);
        let (n, dim, track) = (self.n, self.dim, self.track);
        for x in v.iter_mut() {
            *x = md(*x, n);
        }
        self.finalized = false;
        let mut modified = false;
        let mut col = 0;
        while col < self.dim {
            let b = v[col];
            if b == 0 {
                col += 1;
                continue;
            }
            match self.by_col[col] {
                None => {
                    let (u, _) = unit_normalizer(b, n);
                    for x in v[col..].iter_mut() {
                        *x = mulmod(*x, u, n);
                    }
                    for x in c.iter_mut() {
                        *x = mulmod(*x, u, n);
                    }
                    self.by_col[col] = Some(self.rows.len());
                    self.rows.push(Row { pivot: col, v, c });
                    return true;
                }
                Some(ri) => {
                    let row = &mut self.rows[ri];
                    let a = row.v[col];
                    if b % a == 0 {
                        let q = n - b / a;
                        axpy(&mut v, q, &row.v, n, col);
                        axpy(&mut c, q, &row.c, n, 0);
                    } else {
                        let (g, x, y) = ext_gcd(a, b);
                        let (ag, bg) = (a / g, b / g);
                        let mut nv = vec![0; dim];
                        let mut nc = vec![0; track];
                        for i in col..dim {
                            let (p, q) = (row.v[i], v[i]);
                            nv[i] = md(x * p + y * q, n);
                            v[i] = md(bg * p - ag * q, n);
                        }
                        for i in 0..track {
                            let (p, q) = (row.c[i], c[i]);
                            nc[i] = md(mulmod(x, p, n) + mulmod(y, q, n), n);
                            c[i] = md(mulmod(bg, p, n) - mulmod(ag, q, n), n);
                        }
                        debug_assert_eq!(nv[col], g);
                        row.v = nv;
                        row.c = nc;
                        modified = true;
                    }
                    col += 1;
                }
            }
        }
        if self.track > 0 && c.iter().any(|&x| x != 0) {
            self.relations.push(c);
        }
        modified
    }

    /// Closes the span under annihilator multiples so the rows form a Howell basis.
    pub fn finalize(&mut self) {
        if self.finalized {
            return;
        }
        loop {
            let mut changed = false;
            let pivots: Vec<usize> = self.rows.iter().map(|r| r.pivot).collect();
            for pivot in pivots {
                let ri = self.by_col[pivot].expect("pivot rows are never removed");
                let row = &self.rows[ri];
                if row.v[pivot] == 1 {
                    continue;
                }
                let k = self.n / row.v[pivot];
                let v: Vec<i64> = row.v.iter().map(|&x| mulmod(x, k, self.n)).collect();
                let c: Vec<i64> = row.c.iter().map(|&x| mulmod(x, k, self.n)).collect();
                if self.insert_with(v, c) {
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        self.finalized = true;
    }

    pub fn is_finalized(&self) -> bool {
        self.finalized
    }

    /// Rows sorted by pivot column: `(pivot column, row vector)`.
    pub fn basis(&self) -> Vec<(usize, &[i64])> {
        let mut out: Vec<(usize, &[i64])> = self.rows.iter().map(|r| (r.pivot, r.v.as_slice())).collect();
        out.sort_by_key(|x| x.0);
        out
    }

    /// Tracked combination of each basis row, in [`Span::basis`] order.
    pub fn basis_combos(&self) -> Vec<&[i64]> {
        let mut idx: Vec<usize> = (0..self.rows.len()).collect();
        idx.sort_by_key(|&i| self.rows[i].pivot);
        idx.into_iter().map(|i| self.rows[i].c.as_slice()).collect()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Cyclic orders `N / a_r` of the basis rows; their product is the span's order.
    pub fn row_orders(&self) -> Vec<i64> {
        assert!(self.finalized, "finalize the span first");
        let mut out: Vec<(usize, i64)> = self.rows.iter().map(|r| (r.pivot, self.n / r.v[r.pivot])).collect();
        out.sort_by_key(|x| x.0);
        out.into_iter().map(|x| x.1).collect()
    }

    /// Relations among the tracked generators.
    pub fn relations(&self) -> &[Vec<i64>] {
        assert!(self.finalized, "finalize the span first");
        &self.relations
    }

    /// Greedy reduction. Returns the residual and the coefficient of every
    /// basis row (in [`Span::basis`] order) that was subtracted.
    pub fn reduce(&self, v: &[i64]) -> (Vec<i64>, Vec<i64>) {
        assert!(self.finalized, "finalize the span first");
        let n = self.n;
        let mut r: Vec<i64> = v.iter().map(|&x| md(x, n)).collect();
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.rows[i].pivot);
        let mut coeffs = vec![0; self.rows.len()];
        for (k, &ri) in order.iter().enumerate() {
            let row = &self.rows[ri];
            let b = r[row.pivot];
            if b == 0 {
                continue;
            }
            let a = row.v[row.pivot];
            if b % a == 0 {
                let q = b / a;
                coeffs[k] = q;
                axpy(&mut r, n - q, &row.v, n, row.pivot);
            }
        }
        (r, coeffs)
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.reduce(v).0.iter().all(|&x| x == 0)
    }

    /// Generator combination mapping onto `v`, if `v` lies in the span.
    pub fn preimage(&self, v: &[i64]) -> Option<Vec<i64>> {
        let (r, coeffs) = self.reduce(v);
        if r.iter().any(|&x| x != 0) {
            return None;
        }
        let combos = self.basis_combos();
        let mut out = vec![0; self.track];
        for (q, c) in coeffs.iter().zip(combos) {
            axpy(&mut out, *q, c, self.n, 0);
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn brute_span(n: i64, gens: &[Vec<i64>]) -> HashSet<Vec<i64>> {
        let dim = gens[0].len();
        let mut set: HashSet<Vec<i64>> = HashSet::new();
        set.insert(vec![0; dim]);
        loop {
            let mut next = set.clone();
            for x in &set {
                for g in gens {
                    next.insert(x.iter().zip(g).map(|(a, b)| md(a + b, n)).collect());
                }
            }
            if next.len() == set.len() {
                return set;
            }
            set = next;
        }
    }

    fn check(n: i64, gens: Vec<Vec<i64>>) {
        let dim = gens[0].len();
        let mut s = Span::with_tracking(n, dim, gens.len());
        for g in &gens {
            s.push(g.clone());
        }
        s.finalize();
        let full = brute_span(n, &gens);
        assert_eq!(s.row_orders().iter().product::<i64>() as usize, full.len());
        let mut all = vec![vec![]];
        for _ in 0..dim {
            all = all.into_iter().flat_map(|p| (0..n).map(move |x| { let mut q = p.clone(); q.push(x); q })).collect();
        }
        for v in all {
            assert_eq!(s.contains(&v), full.contains(&v), "{v:?}");
            if let Some(c) = s.preimage(&v) {
                let mut w = vec![0; dim];
                for (k, g) in gens.iter().enumerate() {
                    axpy(&mut w, c[k], g, n, 0);
                }
                assert_eq!(w, v);
            }
        }
        // relations are kernel elements and generate all of it
        let k = gens.len();
        let mut kernel = 0usize;
        let mut combos = vec![vec![]];
        for _ in 0..k {
            combos = combos.into_iter().flat_map(|p| (0..n).map(move |x| { let mut q = p.clone(); q.push(x); q })).collect();
        }
        for c in &combos {
            let mut w = vec![0; dim];
            for (j, g) in gens.iter().enumerate() {
                axpy(&mut w, c[j], g, n, 0);
            }
            if w.iter().all(|&x| x == 0) {
                kernel += 1;
            }
        }
        for r in s.relations() {
            let mut w = vec![0; dim];
            for (j, g) in gens.iter().enumerate() {
                axpy(&mut w, r[j], g, n, 0);
            }
            assert!(w.iter().all(|&x| x == 0));
        }
        let rel_span = if s.relations().is_empty() { 1 } else { brute_span(n, s.relations()).len() };
        assert_eq!(rel_span, kernel);
    }

    #[test]
    fn howell_examples() {
        check(12, vec![vec![4, 6], vec![0, 3]]);
        check(8, vec![vec![2, 4, 0], vec![4, 0, 2], vec![0, 0, 4]]);
        check(6, vec![vec![2, 3], vec![3, 2]]);
        check(4, vec![vec![2, 1], vec![2, 3]]);
        check(9, vec![vec![3, 0], vec![0, 0]]);
    }

    #[test]
    fn annihilator_closure() {
        // over Z/4 the row (2,1) has 2*(2,1) = (0,2) which must be a member
        let mut s = Span::new(4, 2);
        s.push(vec![2, 1]);
        s.finalize();
        assert!(s.contains(&[0, 2]));
        assert!(!s.contains(&[0, 1]));
    }
}
