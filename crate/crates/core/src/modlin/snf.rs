//! Smith normal forms: over the integers (with both transforms and their
//! inverses) and over residue rings `Z/N` (column transforms only).

use super::mat::Mat;
use super::zn::{ext_gcd, md, mulmod, unit_normalizer};

/// `u * m * v = d` with `d` diagonal, `d_1 | d_2 | ...`, entries non-negative.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: Mat,
    pub d: Mat,
    pub v: Mat,
    pub u_inv: Mat,
    pub v_inv: Mat,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)]).collect()
    }
}

type Big = Vec<Vec<i128>>;

fn ident(n: usize) -> Big {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

fn to_mat(b: &Big, rows: usize, cols: usize) -> Mat {
    let mut m = Mat::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = i64::try_from(b[i][j]).expect("integer SNF entry overflowed i64");
        }
    }
    m
}

struct IntSnf {
    a: Big,
    u: Big,
    ui: Big,
    v: Big,
    vi: Big,
    r: usize,
    c: usize,
}

impl IntSnf {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
        for row in self.ui.iter_mut() {
            row.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        for row in self.v.iter_mut() {
            row.swap(i, j);
        }
        self.vi.swap(i, j);
    }

    /// Unimodular combination of rows `t`, `i` clearing `a[i][col]` into `a[t][col]`.
    fn row_gcd(&mut self, t: usize, i: usize, col: usize) {
        let (a, b) = (self.a[t][col], self.a[i][col]);
        let (g, x, y) = if b % a == 0 { (a, 1, 0) } else { ext_gcd_128(a, b) };
        let (ag, bg) = (a / g, b / g);
        for m in [&mut self.a, &mut self.u] {
            for k in 0..m[t].len() {
                let (p, q) = (m[t][k], m[i][k]);
                m[t][k] = x * p + y * q;
                m[i][k] = bg * p - ag * q;
            }
        }
        for row in self.ui.iter_mut() {
            let (p, q) = (row[t], row[i]);
            row[t] = ag * p + bg * q;
            row[i] = y * p - x * q;
        }
    }

    fn col_gcd(&mut self, t: usize, j: usize, row: usize) {
        let (a, b) = (self.a[row][t], self.a[row][j]);
        let (g, x, y) = if b % a == 0 { (a, 1, 0) } else { ext_gcd_128(a, b) };
        let (ag, bg) = (a / g, b / g);
        for m in [&mut self.a, &mut self.v] {
            for r in m.iter_mut() {
                let (p, q) = (r[t], r[j]);
                r[t] = x * p + y * q;
                r[j] = bg * p - ag * q;
            }
        }
        for k in 0..self.c {
            let (p, q) = (self.vi[t][k], self.vi[j][k]);
            self.vi[t][k] = ag * p + bg * q;
            self.vi[j][k] = y * p - x * q;
        }
    }

    fn add_row(&mut self, dst: usize, src: usize) {
        for m in [&mut self.a, &mut self.u] {
            for k in 0..m[dst].len() {
                let s = m[src][k];
                m[dst][k] += s;
            }
        }
        for row in self.ui.iter_mut() {
            let d = row[dst];
            row[src] -= d;
        }
    }

    fn negate_row(&mut self, t: usize) {
        for m in [&mut self.a, &mut self.u] {
            for x in m[t].iter_mut() {
                *x = -*x;
            }
        }
        for row in self.ui.iter_mut() {
            row[t] = -row[t];
        }
    }

    fn run(&mut self) {
        let n = self.r.min(self.c);
        for t in 0..n {
            let mut best: Option<(usize, usize)> = None;
            for i in t..self.r {
                for j in t..self.c {
                    let x = self.a[i][j];
                    if x != 0 && best.map_or(true, |(bi, bj)| x.abs() < self.a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            self.swap_rows(t, bi);
            self.swap_cols(t, bj);
            loop {
                for i in t + 1..self.r {
                    if self.a[i][t] != 0 {
                        self.row_gcd(t, i, t);
                    }
                }
                let mut dirty = false;
                for j in t + 1..self.c {
                    if self.a[t][j] != 0 {
                        self.col_gcd(t, j, t);
                        dirty = true;
                    }
                }
                if dirty && (t + 1..self.r).any(|i| self.a[i][t] != 0) {
                    continue;
                }
                let p = self.a[t][t];
                let bad = (t + 1..self.r).find(|&i| (t + 1..self.c).any(|j| self.a[i][j] % p != 0));
                match bad {
                    Some(i) => self.add_row(t, i),
                    None => break,
                }
            }
            if self.a[t][t] < 0 {
                self.negate_row(t);
            }
        }
    }
}

fn ext_gcd_128(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Smith normal form of an integer matrix.
pub fn smith_normal_form(m: &Mat) -> Snf {
    let (r, c) = (m.rows(), m.cols());
    let a: Big = (0..r).map(|i| m.row(i).iter().map(|&x| x as i128).collect()).collect();
    let mut s = IntSnf { a, u: ident(r), ui: ident(r), v: ident(c), vi: ident(c), r, c };
    s.run();
    Snf {
        u: to_mat(&s.u, r, r),
        d: to_mat(&s.a, r, c),
        v: to_mat(&s.v, c, c),
        u_inv: to_mat(&s.ui, r, r),
        v_inv: to_mat(&s.vi, c, c),
    }
}

/// Canonical form of `⊕ Z/m_i`: invariant factors (all `>= 2`, dividing chain)
/// together with the coordinate change `to` (canonical ← diagonal) and its
/// inverse `from` (diagonal ← canonical).
pub fn normalize_diagonal(moduli: &[i64]) -> (Vec<i64>, Mat, Mat) {
    let k = moduli.len();
    let mut diag = Mat::zeros(k, k);
    for (i, &m) in moduli.iter().enumerate() {
        assert!(m >= 1, "cyclic factor orders must be positive");
        diag[(i, i)] = m;
    }
    let snf = smith_normal_form(&diag);
    let keep: Vec<usize> = (0..k).filter(|&i| snf.d[(i, i)] != 1).collect();
    let invariants: Vec<i64> = keep.iter().map(|&i| snf.d[(i, i)]).collect();
    let mut to = Mat::zeros(keep.len(), k);
    for (r, &i) in keep.iter().enumerate() {
        for j in 0..k {
            to[(r, j)] = md(snf.u[(i, j)], invariants[r]);
        }
    }
    let mut from = Mat::zeros(k, keep.len());
    for (c, &i) in keep.iter().enumerate() {
        for j in 0..k {
            from[(j, c)] = md(snf.u_inv[(j, i)], moduli[j]);
        }
    }
    (invariants, to, from)
}

/// Smith form over `Z/n` of the relation rows spanning a submodule of `(Z/n)^k`.
///
/// The quotient `(Z/n)^k / rowspan` is `⊕ Z/diag[i]` through the coordinate map
/// `x ↦ x · v`; `e_i · v_inv` is a preimage of the `i`-th generator.
#[derive(Clone, Debug)]
pub struct ModSnf {
    pub diag: Vec<i64>,
    pub v: Mat,
    pub v_inv: Mat,
}

pub fn snf_mod(rows: &[Vec<i64>], k: usize, n: i64) -> ModSnf {
    let mut a: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|&x| md(x, n)).collect()).collect();
    let r = a.len();
    let mut v = Mat::identity(k);
    let mut vi = Mat::identity(k);
    let mut diag = vec![n; k];
    let mut t = 0;
    while t < k.min(r) {
        // pivot with the smallest gcd against n
        let mut best: Option<(usize, usize, i64)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 {
                    let g = super::zn::gcd(x, n);
                    if best.map_or(true, |b| g < b.2) {
                        best = Some((i, j, g));
                    }
                }
            }
        }
        let Some((bi, bj, _)) = best else { break };
        a.swap(t, bi);
        if bj != t {
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            for i in 0..k {
                let (x, y) = (v[(i, t)], v[(i, bj)]);
                v[(i, t)] = y;
                v[(i, bj)] = x;
                let (x, y) = (vi[(t, i)], vi[(bj, i)]);
                vi[(t, i)] = y;
                vi[(bj, i)] = x;
            }
        }
        loop {
            let (u, _) = unit_normalizer(a[t][t], n);
            for x in a[t].iter_mut() {
                *x = mulmod(*x, u, n);
            }
            for i in t + 1..r {
                if a[i][t] == 0 {
                    continue;
                }
                let (p, q) = (a[t][t], a[i][t]);
                let (g, x, y) = if q % p == 0 { (p, 1, 0) } else { ext_gcd(p, q) };
                let (pg, qg) = (p / g, q / g);
                for c in 0..k {
                    let (s, w) = (a[t][c], a[i][c]);
                    a[t][c] = md(x * s + y * w, n);
                    a[i][c] = md(qg * s - pg * w, n);
                }
            }
            let mut dirty = false;
            for j in t + 1..k {
                if a[t][j] == 0 {
                    continue;
                }
                dirty = true;
                let (p, q) = (a[t][t], a[t][j]);
                let (g, x, y) = if q % p == 0 { (p, 1, 0) } else { ext_gcd(p, q) };
                let (pg, qg) = (p / g, q / g);
                for row in a.iter_mut() {
                    let (s, w) = (row[t], row[j]);
                    row[t] = md(x * s + y * w, n);
                    row[j] = md(qg * s - pg * w, n);
                }
                for i in 0..k {
                    let (s, w) = (v[(i, t)], v[(i, j)]);
                    v[(i, t)] = md(x * s + y * w, n);
                    v[(i, j)] = md(qg * s - pg * w, n);
                    let (s, w) = (vi[(t, i)], vi[(j, i)]);
                    vi[(t, i)] = md(pg * s + qg * w, n);
                    vi[(j, i)] = md(y * s - x * w, n);
                }
            }
            if !dirty || (t + 1..r).all(|i| a[i][t] == 0) {
                break;
            }
        }
        let (_, g) = unit_normalizer(a[t][t], n);
        diag[t] = g;
        t += 1;
    }
    ModSnf { diag, v, v_inv: vi }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &Mat) -> Snf {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert_eq!(s.u.mul(&s.u_inv), Mat::identity(m.rows()));
        assert_eq!(s.v.mul(&s.v_inv), Mat::identity(m.cols()));
        let d = s.diagonal();
        for w in d.windows(2) {
            if w[0] != 0 {
                assert_eq!(w[1] % w[0], 0, "divisibility chain broken: {d:?}");
            } else {
                assert_eq!(w[1], 0);
            }
        }
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if i != j {
                    assert_eq!(s.d[(i, j)], 0);
                }
            }
        }
        s
    }

    #[test]
    fn identity_case() {
        let s = check(&Mat::identity(2));
        assert_eq!(s.diagonal(), vec![1, 1]);
        assert_eq!(s.u, Mat::identity(2));
        assert_eq!(s.v, Mat::identity(2));
    }

    #[test]
    fn two_by_two_example() {
        let s = check(&Mat::from_rows(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(s.diagonal(), vec![2, 4]);
    }

    #[test]
    fn zero_matrix() {
        let s = check(&Mat::zeros(2, 3));
        assert_eq!(s.diagonal(), vec![0, 0]);
        assert_eq!(s.u, Mat::identity(2));
        assert_eq!(s.v, Mat::identity(3));
    }

    #[test]
    fn rectangular_and_chain_repair() {
        check(&Mat::from_rows(&[vec![2, 0], vec![0, 3]]));
        check(&Mat::from_rows(&[vec![4, 6, 10], vec![6, 9, 15]]));
        check(&Mat::from_rows(&[vec![0, 0, 5], vec![7, 0, 0], vec![0, 12, 0]]));
    }

    #[test]
    fn normalize_crt() {
        let (inv, to, from) = normalize_diagonal(&[2, 3]);
        assert_eq!(inv, vec![6]);
        // round trip on all elements
        for a in 0..2 {
            for b in 0..3 {
                let y = md(to.mul_vec(&[a, b])[0], 6);
                let back = from.mul_vec(&[y]);
                assert_eq!((md(back[0], 2), md(back[1], 3)), (a, b));
            }
        }
        let (inv, _, _) = normalize_diagonal(&[9, 3, 1]);
        assert_eq!(inv, vec![3, 9]);
    }

    #[test]
    fn mod_snf_quotient_orders() {
        // (Z/12)^2 modulo the rows (4,6), (0,3)
        let s = snf_mod(&[vec![4, 6], vec![0, 3]], 2, 12);
        let order: i64 = s.diag.iter().product();
        // brute-force quotient order
        let mut span = std::collections::HashSet::new();
        for a in 0..12 {
            for b in 0..12 {
                span.insert((md(4 * a, 12), md(6 * a + 3 * b, 12)));
            }
        }
        assert_eq!(order as usize, 144 / span.len());
        assert_eq!(s.v.mul(&s.v_inv).to_rows().iter().flatten().map(|&x| md(x, 12)).collect::<Vec<_>>(), vec![1, 0, 0, 1]);
    }
}
