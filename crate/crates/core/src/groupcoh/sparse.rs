//! Column-sparse integer matrices acting on natural coordinates.

use std::collections::BTreeMap;

use crate::modlin::howell::Span;
use crate::modlin::subquotient::{common_modulus, embed};
use crate::modlin::zn::{lcm, md};
use crate::modlin::ModuleHom;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMat {
    nrows: usize,
    cols: Vec<Vec<(u32, i64)>>,
}

fn merge(entries: Vec<(u32, i64)>, moduli: &[i64]) -> Vec<(u32, i64)> {
    let mut acc: BTreeMap<u32, i64> = BTreeMap::new();
    for (r, v) in entries {
        let e = acc.entry(r).or_insert(0);
        *e = md(*e + v, moduli[r as usize]);
    }
    acc.into_iter().filter(|&(_, v)| v != 0).collect()
}

impl SparseMat {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMat { nrows, cols: vec![Vec::new(); ncols] }
    }

    pub fn identity(n: usize) -> Self {
        SparseMat { nrows: n, cols: (0..n).map(|j| vec![(j as u32, 1)]).collect() }
    }

    /// Builds from raw column entries, merging repeats modulo the row moduli.
    pub fn from_columns(nrows: usize, cols: Vec<Vec<(u32, i64)>>, row_moduli: &[i64]) -> Self {
        assert_eq!(row_moduli.len(), nrows);
        SparseMat { nrows, cols: cols.into_iter().map(|c| merge(c, row_moduli)).collect() }
    }

    /// Columns whose entries are already reduced and free of repeats.
    pub fn from_raw(nrows: usize, cols: Vec<Vec<(u32, i64)>>) -> Self {
        SparseMat { nrows, cols }
    }

    /// `copies` diagonal copies of a module map.
    pub fn pointwise(h: &ModuleHom, copies: usize) -> Self {
        let (r, s) = (h.target.rank(), h.source.rank());
        let mut cols = Vec::with_capacity(copies * s);
        for c in 0..copies {
            for j in 0..s {
                cols.push(
                    (0..r)
                        .filter(|&i| h.matrix[(i, j)] != 0)
                        .map(|i| ((c * r + i) as u32, h.matrix[(i, j)]))
                        .collect(),
                );
            }
        }
        SparseMat { nrows: copies * r, cols }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn col(&self, j: usize) -> &[(u32, i64)] {
        &self.cols[j]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    pub fn dense_col(&self, j: usize, row_moduli: &[i64]) -> Vec<i64> {
        let mut v = vec![0; self.nrows];
        for &(r, x) in &self.cols[j] {
            v[r as usize] = md(v[r as usize] + x, row_moduli[r as usize]);
        }
        v
    }

    pub fn apply(&self, x: &[i64], row_moduli: &[i64]) -> Vec<i64> {
        assert_eq!(x.len(), self.cols.len(), "vector length does not match the column count");
        let mut acc = vec![0i128; self.nrows];
        for (j, &xj) in x.iter().enumerate() {
            if xj == 0 {
                continue;
            }
            for &(r, v) in &self.cols[j] {
                acc[r as usize] += v as i128 * xj as i128;
            }
        }
        acc.iter().zip(row_moduli).map(|(&a, &m)| a.rem_euclid(m as i128) as i64).collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SparseMat, row_moduli: &[i64]) -> SparseMat {
        assert_eq!(other.nrows, self.ncols());
        let cols = other
            .cols
            .iter()
            .map(|c| {
                let mut e = Vec::new();
                for &(k, a) in c {
                    for &(r, b) in &self.cols[k as usize] {
                        e.push((r, ((a as i128 * b as i128) % row_moduli[r as usize] as i128) as i64));
                    }
                }
                merge(e, row_moduli)
            })
            .collect();
        SparseMat { nrows: self.nrows, cols }
    }

    pub fn scale(&self, k: i64, row_moduli: &[i64]) -> SparseMat {
        let cols = self
            .cols
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&(r, v)| (r, md((v as i128 * k as i128 % row_moduli[r as usize] as i128) as i64, row_moduli[r as usize])))
                    .filter(|&(_, v)| v != 0)
                    .collect()
            })
            .collect();
        SparseMat { nrows: self.nrows, cols }
    }

    pub fn add(&self, other: &SparseMat, row_moduli: &[i64]) -> SparseMat {
        assert_eq!((self.nrows, self.ncols()), (other.nrows, other.ncols()));
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| merge(a.iter().chain(b).copied().collect(), row_moduli))
            .collect();
        SparseMat { nrows: self.nrows, cols }
    }

    /// Some `x` with `self·x = y`, reduced modulo the column moduli.
    pub fn solve(&self, y: &[i64], col_moduli: &[i64], row_moduli: &[i64]) -> Option<Vec<i64>> {
        let n = lcm(common_modulus(col_moduli), common_modulus(row_moduli)).max(1);
        let mut s = Span::with_tracking(n, self.nrows, self.ncols());
        for j in 0..self.ncols() {
            s.push(embed(&self.dense_col(j, row_moduli), row_moduli, n));
        }
        s.finalize();
        let x = s.preimage(&embed(y, row_moduli, n))?;
        Some(x.iter().zip(col_moduli).map(|(&v, &m)| md(v, m)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    /// Block matrix; `blocks` lists `(block row, block column, matrix, sign)`.
    pub fn block(row_sizes: &[usize], col_sizes: &[usize], blocks: &[(usize, usize, &SparseMat, i64)], row_moduli: &[i64]) -> SparseMat {
        let roff: Vec<usize> = row_sizes.iter().scan(0, |s, &x| { let o = *s; *s += x; Some(o) }).collect();
        let coff: Vec<usize> = col_sizes.iter().scan(0, |s, &x| { let o = *s; *s += x; Some(o) }).collect();
        let nrows: usize = row_sizes.iter().sum();
        let ncols: usize = col_sizes.iter().sum();
        let mut cols: Vec<Vec<(u32, i64)>> = vec![Vec::new(); ncols];
        for &(bi, bj, m, sign) in blocks {
            assert_eq!((m.nrows(), m.ncols()), (row_sizes[bi], col_sizes[bj]), "block ({bi},{bj}) has the wrong shape");
            for (j, c) in m.cols.iter().enumerate() {
                for &(r, v) in c {
                    cols[coff[bj] + j].push((r + roff[bi] as u32, v * sign));
                }
            }
        }
        SparseMat::from_columns(nrows, cols, row_moduli)
    }
}
