use serde::{Deserialize, Serialize};

use super::mat::Mat;
use super::snf::normalize_diagonal;
use super::zn::{lcm, md};
use crate::error::{Error, Result};

/// Default cap on enumeration-based checks.
pub const ENUMERATION_LIMIT: u128 = 10_000;

/// Finite abelian group `⊕ Z/d_i` with `d_1 | d_2 | …`, every `d_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinAbModule {
    invariants: Vec<i64>,
}

impl FinAbModule {
    pub fn new(invariants: Vec<i64>) -> Result<Self> {
        if let Some(d) = invariants.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidModule(format!("invariant factor {d} is below 2")));
        }
        for w in invariants.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::InvalidModule(format!("{} does not divide {}", w[0], w[1])));
            }
        }
        Ok(FinAbModule { invariants })
    }

    pub fn zero() -> Self {
        FinAbModule { invariants: vec![] }
    }

    pub fn cyclic(n: i64) -> Self {
        assert!(n >= 1);
        if n == 1 {
            Self::zero()
        } else {
            FinAbModule { invariants: vec![n] }
        }
    }

    /// Canonical form of `⊕ Z/m_i` with coordinate changes `to` (canonical ←
    /// diagonal) and `from` (diagonal ← canonical).
    pub fn from_orders(orders: &[i64]) -> (Self, Mat, Mat) {
        let (inv, to, from) = normalize_diagonal(orders);
        (FinAbModule { invariants: inv }, to, from)
    }

    pub fn invariants(&self) -> &[i64] {
        &self.invariants
    }

    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    pub fn exponent(&self) -> i64 {
        self.invariants.iter().fold(1, |a, &d| lcm(a, d))
    }

    pub fn order(&self) -> u128 {
        self.invariants.iter().map(|&d| d as u128).product()
    }

    pub fn is_zero(&self) -> bool {
        self.invariants.is_empty()
    }

    pub fn reduce(&self, x: &[i64]) -> Vec<i64> {
        assert_eq!(x.len(), self.rank(), "element has the wrong rank");
        x.iter().zip(&self.invariants).map(|(&a, &d)| md(a, d)).collect()
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        x.iter().zip(y).zip(&self.invariants).map(|((&a, &b), &d)| md(a + b, d)).collect()
    }

    pub fn neg(&self, x: &[i64]) -> Vec<i64> {
        x.iter().zip(&self.invariants).map(|(&a, &d)| md(-a, d)).collect()
    }

    pub fn scale(&self, k: i64, x: &[i64]) -> Vec<i64> {
        x.iter().zip(&self.invariants).map(|(&a, &d)| md((k as i128 * a as i128).rem_euclid(d as i128) as i64, d)).collect()
    }

    pub fn zero_element(&self) -> Vec<i64> {
        vec![0; self.rank()]
    }

    pub fn basis(&self, j: usize) -> Vec<i64> {
        let mut e = self.zero_element();
        e[j] = 1;
        e
    }

    pub fn random<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Vec<i64> {
        self.invariants.iter().map(|&d| rng.gen_range(0..d)).collect()
    }

    /// All elements in lexicographic order; refuses modules above `limit`.
    pub fn elements(&self, limit: u128) -> Result<Vec<Vec<i64>>> {
        if self.order() > limit {
            return Err(Error::SizeLimit(format!("module of order {} exceeds enumeration limit {limit}", self.order())));
        }
        let mut out = vec![vec![]];
        for &d in &self.invariants {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (0..d).map(move |x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        Ok(out)
    }

    /// Direct sum with its canonical coordinates, inclusions and projections.
    pub fn direct_sum(parts: &[FinAbModule]) -> DirectSum {
        let orders: Vec<i64> = parts.iter().flat_map(|m| m.invariants.iter().copied()).collect();
        let (module, to, from) = Self::from_orders(&orders);
        let mut offsets = vec![0];
        for m in parts {
            offsets.push(offsets.last().unwrap() + m.rank());
        }
        let mut inclusions = Vec::new();
        let mut projections = Vec::new();
        for (k, m) in parts.iter().enumerate() {
            let mut inc = Mat::zeros(module.rank(), m.rank());
            for j in 0..m.rank() {
                for i in 0..module.rank() {
                    inc[(i, j)] = to[(i, offsets[k] + j)];
                }
            }
            let mut proj = Mat::zeros(m.rank(), module.rank());
            for i in 0..m.rank() {
                for j in 0..module.rank() {
                    proj[(i, j)] = from[(offsets[k] + i, j)];
                }
            }
            inclusions.push(ModuleHom::new(m.clone(), module.clone(), inc).expect("direct sum inclusion"));
            projections.push(ModuleHom::new(module.clone(), m.clone(), proj).expect("direct sum projection"));
        }
        DirectSum { module, parts: parts.to_vec(), inclusions, projections }
    }
}

impl std::fmt::Display for FinAbModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.invariants.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.invariants.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Clone, Debug)]
pub struct DirectSum {
    pub module: FinAbModule,
    pub parts: Vec<FinAbModule>,
    pub inclusions: Vec<ModuleHom>,
    pub projections: Vec<ModuleHom>,
}

impl DirectSum {
    /// Canonical coordinates of the tuple `(x_0, x_1, …)`.
    pub fn join(&self, xs: &[&[i64]]) -> Vec<i64> {
        let mut acc = self.module.zero_element();
        for (inc, x) in self.inclusions.iter().zip(xs) {
            acc = self.module.add(&acc, &inc.apply(x));
        }
        acc
    }

    pub fn split(&self, x: &[i64]) -> Vec<Vec<i64>> {
        self.projections.iter().map(|p| p.apply(x)).collect()
    }
}

/// Additive map given by an integer matrix (target rank × source rank).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModuleHom {
    pub source: FinAbModule,
    pub target: FinAbModule,
    pub matrix: Mat,
}

impl ModuleHom {
    pub fn new(source: FinAbModule, target: FinAbModule, mut matrix: Mat) -> Result<Self> {
        if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
            return Err(Error::IllDefinedHom(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.rank(),
                source.rank()
            )));
        }
        matrix.reduce_rows(target.invariants());
        for i in 0..matrix.rows() {
            for j in 0..matrix.cols() {
                let (dj, di) = (source.invariants[j], target.invariants[i]);
                if (matrix[(i, j)] as i128 * dj as i128) % di as i128 != 0 {
                    return Err(Error::IllDefinedHom(format!(
                        "entry ({i},{j}) = {} times {dj} is nonzero mod {di}",
                        matrix[(i, j)]
                    )));
                }
            }
        }
        Ok(ModuleHom { source, target, matrix })
    }

    pub fn identity(m: &FinAbModule) -> Self {
        ModuleHom { source: m.clone(), target: m.clone(), matrix: Mat::identity(m.rank()) }
    }

    pub fn zero(source: &FinAbModule, target: &FinAbModule) -> Self {
        ModuleHom { source: source.clone(), target: target.clone(), matrix: Mat::zeros(target.rank(), source.rank()) }
    }

    /// Multiplication by `k` on `m`.
    pub fn scalar(m: &FinAbModule, k: i64) -> Self {
        ModuleHom::new(m.clone(), m.clone(), Mat::identity(m.rank()).scale(k)).expect("scalar maps are well defined")
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        let mut y = vec![0; self.target.rank()];
        for (i, yi) in y.iter_mut().enumerate() {
            let d = self.target.invariants[i] as i128;
            let mut acc: i128 = 0;
            for (j, &xj) in x.iter().enumerate() {
                acc += self.matrix[(i, j)] as i128 * xj as i128;
            }
            *yi = acc.rem_euclid(d) as i64;
        }
        y
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ModuleHom) -> ModuleHom {
        assert_eq!(other.target, self.source, "composition of incompatible maps");
        let mut m = self.matrix.mul(&other.matrix);
        m.reduce_rows(self.target.invariants());
        ModuleHom { source: other.source.clone(), target: self.target.clone(), matrix: m }
    }

    pub fn add(&self, other: &ModuleHom) -> ModuleHom {
        assert_eq!((&self.source, &self.target), (&other.source, &other.target));
        let mut m = self.matrix.add(&other.matrix);
        m.reduce_rows(self.target.invariants());
        ModuleHom { source: self.source.clone(), target: self.target.clone(), matrix: m }
    }

    pub fn scale(&self, k: i64) -> ModuleHom {
        let mut m = self.matrix.scale(k);
        m.reduce_rows(self.target.invariants());
        ModuleHom { source: self.source.clone(), target: self.target.clone(), matrix: m }
    }

    pub fn neg(&self) -> ModuleHom {
        self.scale(-1)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_chain() {
        assert!(FinAbModule::new(vec![4, 6]).is_err());
        assert!(FinAbModule::new(vec![1]).is_err());
        assert_eq!(FinAbModule::new(vec![2, 4]).unwrap().order(), 8);
    }

    #[test]
    fn ill_defined_map_rejected() {
        let z2 = FinAbModule::cyclic(2);
        let z3 = FinAbModule::cyclic(3);
        assert!(ModuleHom::new(z2.clone(), z3, Mat::from_rows(&[vec![1]])).is_err());
        let z4 = FinAbModule::cyclic(4);
        assert!(ModuleHom::new(z2.clone(), z4.clone(), Mat::from_rows(&[vec![2]])).is_ok());
        assert!(ModuleHom::new(z2, z4, Mat::from_rows(&[vec![1]])).is_err());
    }

    #[test]
    fn direct_sum_round_trip() {
        let a = FinAbModule::cyclic(2);
        let b = FinAbModule::new(vec![3, 6]).unwrap();
        let s = FinAbModule::direct_sum(&[a.clone(), b.clone()]);
        assert_eq!(s.module.invariants(), &[6, 6]);
        for x in a.elements(100).unwrap() {
            for y in b.elements(100).unwrap() {
                let z = s.join(&[&x, &y]);
                assert_eq!(s.split(&z), vec![x.clone(), y.clone()]);
            }
        }
    }
}
