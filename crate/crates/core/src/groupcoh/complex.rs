//! Bounded cochain complexes of finite modules, cohomology, shifts, cones and
//! long exact sequences.

use super::sparse::SparseMat;
use crate::error::{Error, Result};
use crate::modlin::howell::Span;
use crate::modlin::subquotient::{common_modulus, embed, image as hom_image, kernel as hom_kernel, Subquotient};
use crate::modlin::zn::{lcm, md};
use crate::modlin::{FinAbModule, Mat, ModuleHom};

#[derive(Clone, Debug)]
pub struct Complex {
    pub lo: i32,
    pieces: Vec<Vec<i64>>,
    diffs: Vec<SparseMat>,
    pub label: String,
}

impl Complex {
    /// `pieces[k]` lists the coordinate moduli in degree `lo + k`; `diffs[k]`
    /// maps degree `lo + k` to `lo + k + 1`.
    pub fn new(lo: i32, pieces: Vec<Vec<i64>>, diffs: Vec<SparseMat>, label: impl Into<String>) -> Result<Self> {
        if pieces.is_empty() || diffs.len() + 1 != pieces.len() {
            return Err(Error::InvalidInput(format!("{} pieces but {} differentials", pieces.len(), diffs.len())));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.ncols() != pieces[k].len() || d.nrows() != pieces[k + 1].len() {
                return Err(Error::InvalidInput(format!("differential in degree {} has the wrong shape", lo + k as i32)));
            }
        }
        let c = Complex { lo, pieces, diffs, label: label.into() };
        c.check_d2()?;
        Ok(c)
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.pieces.len() as i32 - 1
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn modulus(&self) -> i64 {
        self.pieces.iter().fold(1, |a, p| lcm(a, common_modulus(p)))
    }

    /// Coordinate moduli in degree `i` (empty outside the represented range).
    pub fn piece(&self, i: i32) -> &[i64] {
        if i < self.lo || i > self.hi() {
            &[]
        } else {
            &self.pieces[(i - self.lo) as usize]
        }
    }

    pub fn dim(&self, i: i32) -> usize {
        self.piece(i).len()
    }

    pub fn diff(&self, i: i32) -> Option<&SparseMat> {
        if i < self.lo || i >= self.hi() {
            None
        } else {
            Some(&self.diffs[(i - self.lo) as usize])
        }
    }

    /// Differential out of degree `i`; the zero map just below the range.
    pub fn diff_or_zero(&self, i: i32) -> SparseMat {
        match self.diff(i) {
            Some(d) => d.clone(),
            None => SparseMat::zeros(self.dim(i + 1), self.dim(i)),
        }
    }

    pub fn apply_d(&self, i: i32, x: &[i64]) -> Vec<i64> {
        self.diff(i).expect("differential out of range").apply(x, self.piece(i + 1))
    }

    pub fn check_d2(&self) -> Result<()> {
        for k in 1..self.diffs.len() {
            let dd = self.diffs[k].compose(&self.diffs[k - 1], &self.pieces[k + 1]);
            if !dd.is_zero() {
                return Err(Error::InvalidInput(format!(
                    "d∘d ≠ 0 from degree {} in complex `{}`",
                    self.lo + k as i32 - 1,
                    self.label
                )));
            }
        }
        Ok(())
    }

    pub fn is_cocycle(&self, i: i32, x: &[i64]) -> bool {
        match self.diff(i) {
            Some(d) => d.apply(x, self.piece(i + 1)).iter().all(|&v| v == 0),
            None => i > self.hi(),
        }
    }

    /// Natural-coordinate generators of the cocycles in degree `i < hi`.
    pub fn cocycle_gens(&self, i: i32) -> Vec<Vec<i64>> {
        let src = self.piece(i);
        let d = self.diff(i).expect("cocycles need the outgoing differential");
        let tgt = self.piece(i + 1);
        let n = lcm(common_modulus(src), common_modulus(tgt));
        let mut s = Span::with_tracking(n, tgt.len(), src.len());
        for j in 0..src.len() {
            s.push(embed(&d.dense_col(j, tgt), tgt, n));
        }
        s.finalize();
        let mut out: Vec<Vec<i64>> = s
            .relations()
            .iter()
            .map(|r| r.iter().zip(src).map(|(&c, &m)| md(c, m)).collect::<Vec<i64>>())
            .filter(|v| v.iter().any(|&x| x != 0))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// A random combination of the cocycle generators in degree `i`.
    pub fn random_cocycle<R: rand::Rng + ?Sized>(&self, i: i32, rng: &mut R) -> Vec<i64> {
        random_combination(&self.cocycle_gens(i), self.piece(i), rng)
    }

    fn boundary_gens(&self, i: i32) -> Vec<Vec<i64>> {
        match self.diff(i - 1) {
            Some(d) => (0..d.ncols()).map(|j| d.dense_col(j, self.piece(i))).filter(|v| v.iter().any(|&x| x != 0)).collect(),
            None => vec![],
        }
    }

    /// `H^i` for `lo <= i < hi` (zero below the range).
    pub fn cohomology(&self, i: i32) -> Result<Cohomology> {
        if i < self.lo {
            return Ok(Cohomology::zero(i, self.piece(i).to_vec()));
        }
        if i >= self.hi() {
            return Err(Error::SizeLimit(format!(
                "H^{i} of `{}` needs degree {} but the complex stops at {}",
                self.label,
                i + 1,
                self.hi()
            )));
        }
        let z = self.cocycle_gens(i);
        let b = self.boundary_gens(i);
        let sq = Subquotient::new(self.piece(i), &z, &b);
        Ok(Cohomology { degree: i, sq: Some(sq), moduli: self.piece(i).to_vec() })
    }

    /// Coboundaries in degree `i <= hi`, for membership tests only.
    pub fn boundaries(&self, i: i32) -> Boundaries {
        let moduli = self.piece(i).to_vec();
        let n = common_modulus(&moduli).max(1);
        let mut span = Span::new(n, moduli.len());
        if let Some(d) = self.diff(i - 1) {
            for j in 0..d.ncols() {
                span.push(embed(&d.dense_col(j, &moduli), &moduli, n));
            }
        }
        span.finalize();
        Boundaries { moduli, n, span }
    }

    /// `X[j]^i = X^{i+j}` with the differential multiplied by `(-1)^j`.
    pub fn shift(&self, j: i32) -> Complex {
        let sign = if j.rem_euclid(2) == 0 { 1 } else { -1 };
        let diffs = self
            .diffs
            .iter()
            .enumerate()
            .map(|(k, d)| d.scale(sign, &self.pieces[k + 1]))
            .collect();
        Complex { lo: self.lo - j, pieces: self.pieces.clone(), diffs, label: format!("{}[{j}]", self.label) }
    }

    /// Degreewise direct sum; all parts must share the same degree range.
    pub fn direct_sum(parts: &[&Complex], label: impl Into<String>) -> Result<Complex> {
        let lo = parts[0].lo;
        let len = parts[0].len();
        if parts.iter().any(|p| p.lo != lo || p.len() != len) {
            return Err(Error::InvalidInput("direct sum of complexes with different ranges".into()));
        }
        let pieces: Vec<Vec<i64>> = (0..len).map(|k| parts.iter().flat_map(|p| p.pieces[k].iter().copied()).collect()).collect();
        let diffs = (0..len - 1)
            .map(|k| {
                let rows: Vec<usize> = parts.iter().map(|p| p.pieces[k + 1].len()).collect();
                let cols: Vec<usize> = parts.iter().map(|p| p.pieces[k].len()).collect();
                let blocks: Vec<(usize, usize, &SparseMat, i64)> =
                    parts.iter().enumerate().map(|(b, p)| (b, b, &p.diffs[k], 1)).collect();
                SparseMat::block(&rows, &cols, &blocks, &pieces[k + 1])
            })
            .collect();
        Complex::new(lo, pieces, diffs, label)
    }

    /// Truncation to degrees `lo..=top`.
    pub fn truncate(&self, top: i32) -> Complex {
        let keep = ((top - self.lo + 1).max(1) as usize).min(self.len());
        Complex {
            lo: self.lo,
            pieces: self.pieces[..keep].to_vec(),
            diffs: self.diffs[..keep - 1].to_vec(),
            label: self.label.clone(),
        }
    }
}

/// Degreewise maps `X^i → Y^i` for `i` in `lo..lo + maps.len()`.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub lo: i32,
    pub maps: Vec<SparseMat>,
}

impl ChainMap {
    pub fn at(&self, i: i32) -> Option<&SparseMat> {
        if i < self.lo || i >= self.lo + self.maps.len() as i32 {
            None
        } else {
            Some(&self.maps[(i - self.lo) as usize])
        }
    }

    pub fn apply(&self, i: i32, x: &[i64], target: &Complex) -> Vec<i64> {
        self.at(i).expect("chain map degree out of range").apply(x, target.piece(i))
    }

    /// Checks shapes and `d_Y f = f d_X` in every degree where both sides exist.
    pub fn check(&self, x: &Complex, y: &Complex) -> Result<()> {
        for (k, f) in self.maps.iter().enumerate() {
            let i = self.lo + k as i32;
            if f.ncols() != x.dim(i) || f.nrows() != y.dim(i) {
                return Err(Error::NotChainMap { degree: i });
            }
        }
        for (k, f) in self.maps.iter().enumerate() {
            let i = self.lo + k as i32;
            let (Some(dx), Some(dy), Some(f1)) = (x.diff(i), y.diff(i), self.at(i + 1)) else { continue };
            let lhs = dy.compose(f, y.piece(i + 1));
            let rhs = f1.compose(dx, y.piece(i + 1));
            if lhs != rhs {
                return Err(Error::NotChainMap { degree: i });
            }
        }
        Ok(())
    }

    pub fn compose(&self, other: &ChainMap, target: &Complex) -> ChainMap {
        assert_eq!(self.lo, other.lo);
        let maps = self.maps.iter().zip(&other.maps).enumerate().map(|(k, (a, b))| a.compose(b, target.piece(self.lo + k as i32))).collect();
        ChainMap { lo: self.lo, maps }
    }

    pub fn scale(&self, k: i64, target: &Complex) -> ChainMap {
        let maps = self.maps.iter().enumerate().map(|(d, m)| m.scale(k, target.piece(self.lo + d as i32))).collect();
        ChainMap { lo: self.lo, maps }
    }

    pub fn shift(&self, j: i32) -> ChainMap {
        ChainMap { lo: self.lo - j, maps: self.maps.clone() }
    }
}

/// `Cone(f)^i = X^i ⊕ Y^{i-1}` with `d(x, y) = (dx, -f(x) - dy)`.
pub fn cone(f: &ChainMap, x: &Complex, y: &Complex, label: impl Into<String>) -> Result<Complex> {
    if x.lo != y.lo || x.len() != y.len() || f.lo != x.lo || f.maps.len() != x.len() {
        return Err(Error::InvalidInput("cone needs complexes and a map over one degree range".into()));
    }
    f.check(x, y)?;
    let lo = x.lo;
    let pieces: Vec<Vec<i64>> = (0..x.len())
        .map(|k| {
            let i = lo + k as i32;
            x.piece(i).iter().chain(y.piece(i - 1)).copied().collect()
        })
        .collect();
    let mut diffs = Vec::new();
    for k in 0..x.len() - 1 {
        let i = lo + k as i32;
        let rows = [x.dim(i + 1), y.dim(i)];
        let cols = [x.dim(i), y.dim(i - 1)];
        let dy = y.diff_or_zero(i - 1);
        let fi = f.at(i).expect("degree in range");
        let blocks = [(0, 0, x.diff(i).expect("in range"), 1), (1, 0, fi, -1), (1, 1, &dy, -1)];
        diffs.push(SparseMat::block(&rows, &cols, &blocks, &pieces[k + 1]));
    }
    Complex::new(lo, pieces, diffs, label)
}

/// `H^i` presented in invariant-factor form.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub degree: i32,
    sq: Option<Subquotient>,
    moduli: Vec<i64>,
}

impl Cohomology {
    fn zero(degree: i32, moduli: Vec<i64>) -> Self {
        Cohomology { degree, sq: None, moduli }
    }

    pub fn module(&self) -> FinAbModule {
        self.sq.as_ref().map_or_else(FinAbModule::zero, |s| s.module.clone())
    }

    /// Canonical coordinates of the class of a cocycle; `None` for non-cocycles.
    pub fn class_of(&self, x: &[i64]) -> Option<Vec<i64>> {
        match &self.sq {
            Some(s) => s.class_of(x),
            None => Some(vec![]),
        }
    }

    pub fn representative(&self, c: &[i64]) -> Vec<i64> {
        match &self.sq {
            Some(s) => s.representative(c),
            None => vec![0; self.moduli.len()],
        }
    }

    pub fn generator(&self, k: usize) -> Vec<i64> {
        self.sq.as_ref().expect("nonzero cohomology").generator(k)
    }

    pub fn is_coboundary(&self, x: &[i64]) -> bool {
        match &self.sq {
            Some(s) => s.contains_b(x),
            None => x.iter().all(|&v| v == 0),
        }
    }

    /// Representative cocycles of the canonical generators.
    pub fn generators(&self) -> Vec<Vec<i64>> {
        (0..self.module().rank()).map(|k| self.generator(k)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct Boundaries {
    moduli: Vec<i64>,
    n: i64,
    span: Span,
}

impl Boundaries {
    pub fn contains(&self, x: &[i64]) -> bool {
        self.span.contains(&embed(x, &self.moduli, self.n))
    }

    pub fn moduli(&self) -> &[i64] {
        &self.moduli
    }
}

pub fn random_combination<R: rand::Rng + ?Sized>(gens: &[Vec<i64>], moduli: &[i64], rng: &mut R) -> Vec<i64> {
    let n = common_modulus(moduli).max(1);
    let mut x = vec![0i64; moduli.len()];
    for g in gens {
        let c = rng.gen_range(0..n) as i128;
        for ((xk, &gk), &m) in x.iter_mut().zip(g).zip(moduli) {
            *xk = ((*xk as i128 + c * gk as i128) % m as i128) as i64;
        }
    }
    x
}

/// Map on cohomology induced by a degreewise map `f` into coordinates with `tgt_moduli`.
pub fn induced(f: &SparseMat, src: &Cohomology, tgt: &Cohomology, tgt_moduli: &[i64]) -> ModuleHom {
    let (ms, mt) = (src.module(), tgt.module());
    let cols: Vec<Vec<i64>> = (0..ms.rank())
        .map(|k| {
            let y = f.apply(&src.generator(k), tgt_moduli);
            tgt.class_of(&y).expect("induced map must send cocycles to cocycles")
        })
        .collect();
    ModuleHom::new(ms, mt.clone(), Mat::from_cols(mt.rank(), &cols)).expect("induced map is well defined")
}

/// Checks exactness at every interior term of `maps[0], maps[1], …`.
pub fn check_exact(maps: &[ModuleHom]) -> std::result::Result<(), String> {
    for (k, w) in maps.windows(2).enumerate() {
        let (f, g) = (&w[0], &w[1]);
        if f.target != g.source {
            return Err(format!("maps {k} and {} do not compose", k + 1));
        }
        if !g.compose(f).is_zero() {
            return Err(format!("composite of maps {k} and {} is nonzero", k + 1));
        }
        let im = hom_image(f).0.order();
        let ker = hom_kernel(g).0.order();
        if im != ker {
            return Err(format!("at term {}: |im| = {im} but |ker| = {ker}", k + 1));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `Z/4 --2--> Z/4 --2--> Z/4`
    fn tiny() -> Complex {
        let m = vec![4];
        let d = SparseMat::from_columns(1, vec![vec![(0, 2)]], &m);
        Complex::new(0, vec![m.clone(), m.clone(), m.clone()], vec![d.clone(), d], "tiny").unwrap()
    }

    #[test]
    fn tiny_cohomology() {
        let c = tiny();
        assert_eq!(c.cohomology(0).unwrap().module().invariants(), &[2]);
        assert_eq!(c.cohomology(1).unwrap().module().invariants(), &[] as &[i64]);
        assert!(c.cohomology(2).is_err());
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let c = tiny();
        let id = ChainMap { lo: 0, maps: (0..3).map(|_| SparseMat::identity(1)).collect() };
        let k = cone(&id, &c, &c, "cone").unwrap();
        for i in 0..2 {
            assert!(k.cohomology(i).unwrap().module().is_zero());
        }
    }

    #[test]
    fn non_chain_map_rejected() {
        let c = tiny();
        let bad = ChainMap {
            lo: 0,
            maps: vec![SparseMat::identity(1), SparseMat::zeros(1, 1), SparseMat::identity(1)],
        };
        assert!(matches!(cone(&bad, &c, &c, "x"), Err(Error::NotChainMap { degree: 0 })));
    }
}
