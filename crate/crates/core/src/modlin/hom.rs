//! Hom modules, Pontryagin duals, tensor products and bilinear pairings.

use serde::{Deserialize, Serialize};

use super::mat::Mat;
use super::module::{FinAbModule, ModuleHom};
use super::zn::{gcd, lcm, md, mulmod};

/// `Hom(M, N) ≅ ⊕_{i,j} Z/gcd(a_j, b_i)` with coordinates converting to and from matrices.
#[derive(Clone, Debug)]
pub struct HomModule {
    pub source: FinAbModule,
    pub target: FinAbModule,
    pub module: FinAbModule,
    orders: Vec<i64>,
    to: Mat,
    from: Mat,
}

impl HomModule {
    pub fn new(source: &FinAbModule, target: &FinAbModule) -> Self {
        let (a, b) = (source.invariants(), target.invariants());
        let mut orders = Vec::with_capacity(a.len() * b.len());
        for &bi in b {
            for &aj in a {
                orders.push(gcd(aj, bi));
            }
        }
        let (module, to, from) = FinAbModule::from_orders(&orders);
        HomModule { source: source.clone(), target: target.clone(), module, orders, to, from }
    }

    /// The homomorphism with canonical coordinates `x`.
    pub fn to_hom(&self, x: &[i64]) -> ModuleHom {
        let (a, b) = (self.source.invariants(), self.target.invariants());
        let c = self.from.mul_vec(x);
        let mut m = Mat::zeros(b.len(), a.len());
        for i in 0..b.len() {
            for j in 0..a.len() {
                let k = i * a.len() + j;
                let g = self.orders[k];
                m[(i, j)] = mulmod(md(c[k], g), b[i] / g, b[i]);
            }
        }
        ModuleHom::new(self.source.clone(), self.target.clone(), m).expect("hom generators are well defined")
    }

    pub fn from_hom(&self, h: &ModuleHom) -> Vec<i64> {
        assert_eq!((&h.source, &h.target), (&self.source, &self.target), "hom has the wrong signature");
        let (a, b) = (self.source.invariants(), self.target.invariants());
        let mut c = vec![0; self.orders.len()];
        for i in 0..b.len() {
            for j in 0..a.len() {
                let k = i * a.len() + j;
                let step = b[i] / self.orders[k];
                let e = md(h.matrix[(i, j)], b[i]);
                debug_assert_eq!(e % step, 0);
                c[k] = e / step;
            }
        }
        self.module.reduce(&self.to.mul_vec(&c))
    }

    /// Evaluation pairing `Hom(M, N) × M → N`.
    pub fn evaluation(&self) -> Pairing {
        let (r, s) = (self.module.rank(), self.source.rank());
        let mut t = vec![vec![vec![0i64; s]; r]; self.target.rank()];
        for k in 0..r {
            let h = self.to_hom(&self.module.basis(k));
            for j in 0..s {
                let v = h.apply(&self.source.basis(j));
                for (l, &x) in v.iter().enumerate() {
                    t[l][k][j] = x;
                }
            }
        }
        Pairing::new(self.module.clone(), self.source.clone(), self.target.clone(), t)
    }
}

pub fn hom_module(m: &FinAbModule, n: &FinAbModule) -> FinAbModule {
    HomModule::new(m, n).module
}

/// `Hom(M, Z/n)`; the Pontryagin dual whenever `exp(M) | n`.
pub fn dual_into(m: &FinAbModule, n: i64) -> HomModule {
    HomModule::new(m, &FinAbModule::cyclic(n))
}

pub fn dual(m: &FinAbModule) -> HomModule {
    dual_into(m, m.exponent().max(1))
}

/// `ρ ↦ ρ*` between duals into `Z/n`.
pub fn transpose_hom_into(h: &ModuleHom, n: i64) -> (HomModule, HomModule, ModuleHom) {
    let dt = dual_into(&h.target, n);
    let ds = dual_into(&h.source, n);
    let cols: Vec<Vec<i64>> = (0..dt.module.rank())
        .map(|k| ds.from_hom(&dt.to_hom(&dt.module.basis(k)).compose(h)))
        .collect();
    let t = ModuleHom::new(dt.module.clone(), ds.module.clone(), Mat::from_cols(ds.module.rank(), &cols))
        .expect("transpose is well defined");
    (dt, ds, t)
}

/// Transpose with both duals taken into `Z/lcm(exp source, exp target)`.
pub fn transpose_hom(h: &ModuleHom) -> ModuleHom {
    let n = lcm(h.source.exponent(), h.target.exponent()).max(1);
    transpose_hom_into(h, n).2
}

/// Evaluation `M → (M^∨)^∨` with both duals into `Z/n`.
pub fn double_dual_map(m: &FinAbModule, n: i64) -> (HomModule, HomModule, ModuleHom) {
    let d = dual_into(m, n);
    let dd = dual_into(&d.module, n);
    let cols: Vec<Vec<i64>> = (0..m.rank())
        .map(|j| {
            let e = m.basis(j);
            let row: Vec<i64> = (0..d.module.rank()).map(|k| d.to_hom(&d.module.basis(k)).apply(&e)[0]).collect();
            let f = ModuleHom::new(d.module.clone(), FinAbModule::cyclic(n), Mat::from_rows(&[row]))
                .expect("evaluation functional");
            dd.from_hom(&f)
        })
        .collect();
    let ev = ModuleHom::new(m.clone(), dd.module.clone(), Mat::from_cols(dd.module.rank(), &cols)).expect("evaluation map");
    (d, dd, ev)
}

/// `M ⊗ N ≅ ⊕_{i,j} Z/gcd(a_i, b_j)`.
#[derive(Clone, Debug)]
pub struct TensorModule {
    pub left: FinAbModule,
    pub right: FinAbModule,
    pub module: FinAbModule,
    orders: Vec<i64>,
    to: Mat,
    from: Mat,
}

impl TensorModule {
    pub fn new(left: &FinAbModule, right: &FinAbModule) -> Self {
        let mut orders = Vec::new();
        for &a in left.invariants() {
            for &b in right.invariants() {
                orders.push(gcd(a, b));
            }
        }
        let (module, to, from) = FinAbModule::from_orders(&orders);
        TensorModule { left: left.clone(), right: right.clone(), module, orders, to, from }
    }

    /// `x ⊗ y` in canonical coordinates.
    pub fn pure(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        let s = self.right.rank();
        let mut c = vec![0; self.orders.len()];
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                let k = i * s + j;
                c[k] = mulmod(xi, yj, self.orders[k]);
            }
        }
        self.module.reduce(&self.to.mul_vec(&c))
    }

    /// The universal pairing `M × N → M ⊗ N`.
    pub fn pairing(&self) -> Pairing {
        let (r, s) = (self.left.rank(), self.right.rank());
        let mut t = vec![vec![vec![0i64; s]; r]; self.module.rank()];
        for i in 0..r {
            for j in 0..s {
                let v = self.pure(&self.left.basis(i), &self.right.basis(j));
                for (k, &x) in v.iter().enumerate() {
                    t[k][i][j] = x;
                }
            }
        }
        Pairing::new(self.left.clone(), self.right.clone(), self.module.clone(), t)
    }

    /// `h ⊗ k`, where `other` is the tensor module of the targets.
    pub fn tensor_maps(&self, other: &TensorModule, h: &ModuleHom, k: &ModuleHom) -> ModuleHom {
        self.linearize(&other.module, |i, j| other.pure(&h.apply(&self.left.basis(i)), &k.apply(&self.right.basis(j))))
    }

    /// The map `M ⊗ N → target` of the bilinear map with `e_i ⊗ e_j ↦ b(i, j)`.
    pub fn linearize(&self, target: &FinAbModule, b: impl Fn(usize, usize) -> Vec<i64>) -> ModuleHom {
        let (r, s) = (self.left.rank(), self.right.rank());
        let mut cols = vec![vec![0; target.rank()]; self.module.rank()];
        for i in 0..r {
            for j in 0..s {
                let img = b(i, j);
                // canonical generator g_l = Σ from[(ij), l] e_i⊗e_j
                for (l, col) in cols.iter_mut().enumerate() {
                    let c = self.from[(i * s + j, l)];
                    if c != 0 {
                        *col = target.add(col, &target.scale(c, &img));
                    }
                }
            }
        }
        ModuleHom::new(self.module.clone(), target.clone(), Mat::from_cols(target.rank(), &cols)).expect("bilinear map is well defined")
    }
}

pub fn tensor(m: &FinAbModule, n: &FinAbModule) -> FinAbModule {
    TensorModule::new(m, n).module
}

/// `sw: M ⊗ N → N ⊗ M`.
pub fn swap_map(mn: &TensorModule, nm: &TensorModule) -> ModuleHom {
    assert_eq!((&mn.left, &mn.right), (&nm.right, &nm.left));
    let (r, s) = (mn.left.rank(), mn.right.rank());
    let cols: Vec<Vec<i64>> = (0..mn.module.rank())
        .map(|l| {
            let mut acc = nm.module.zero_element();
            for i in 0..r {
                for j in 0..s {
                    let c = mn.from[(i * s + j, l)];
                    if c != 0 {
                        let img = nm.pure(&mn.right.basis(j), &mn.left.basis(i));
                        acc = nm.module.add(&acc, &nm.module.scale(c, &img));
                    }
                }
            }
            acc
        })
        .collect();
    ModuleHom::new(mn.module.clone(), nm.module.clone(), Mat::from_cols(nm.module.rank(), &cols)).expect("swap map")
}

/// Biadditive map `M × N → L`; `table[k][i][j]` is coordinate `k` of `P(e_i, f_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pairing {
    pub left: FinAbModule,
    pub right: FinAbModule,
    pub target: FinAbModule,
    pub table: Vec<Vec<Vec<i64>>>,
}

impl Pairing {
    pub fn new(left: FinAbModule, right: FinAbModule, target: FinAbModule, mut table: Vec<Vec<Vec<i64>>>) -> Self {
        assert_eq!(table.len(), target.rank());
        for (k, slab) in table.iter_mut().enumerate() {
            let d = target.invariants()[k];
            assert_eq!(slab.len(), left.rank());
            for (i, row) in slab.iter_mut().enumerate() {
                assert_eq!(row.len(), right.rank());
                for (j, x) in row.iter_mut().enumerate() {
                    *x = md(*x, d);
                    let (a, b) = (left.invariants()[i], right.invariants()[j]);
                    assert!(
                        mulmod(*x, a, d) == 0 && mulmod(*x, b, d) == 0,
                        "pairing entry ({k},{i},{j}) is not well defined"
                    );
                }
            }
        }
        Pairing { left, right, target, table }
    }

    pub fn apply(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.target.rank()];
        for (k, slab) in self.table.iter().enumerate() {
            let d = self.target.invariants()[k] as i128;
            let mut acc: i128 = 0;
            for (i, &xi) in x.iter().enumerate() {
                if xi == 0 {
                    continue;
                }
                let mut inner: i128 = 0;
                for (j, &yj) in y.iter().enumerate() {
                    inner += slab[i][j] as i128 * yj as i128;
                }
                acc = (acc + (inner % d) * xi as i128) % d;
            }
            out[k] = acc.rem_euclid(d) as i64;
        }
        out
    }

    /// `N × M → L`, `(y, x) ↦ P(x, y)`.
    pub fn flipped(&self) -> Pairing {
        let t = self
            .table
            .iter()
            .map(|slab| (0..self.right.rank()).map(|j| (0..self.left.rank()).map(|i| slab[i][j]).collect()).collect())
            .collect();
        Pairing::new(self.right.clone(), self.left.clone(), self.target.clone(), t)
    }

    /// `h ∘ P`.
    pub fn then(&self, h: &ModuleHom) -> Pairing {
        assert_eq!(h.source, self.target);
        let (r, s) = (self.left.rank(), self.right.rank());
        let mut t = vec![vec![vec![0i64; s]; r]; h.target.rank()];
        for i in 0..r {
            for j in 0..s {
                let v = h.apply(&self.apply(&self.left.basis(i), &self.right.basis(j)));
                for (k, &x) in v.iter().enumerate() {
                    t[k][i][j] = x;
                }
            }
        }
        Pairing::new(self.left.clone(), self.right.clone(), h.target.clone(), t)
    }

    /// `(x, y) ↦ P(a(x), b(y))`.
    pub fn precompose(&self, a: &ModuleHom, b: &ModuleHom) -> Pairing {
        assert_eq!((&a.target, &b.target), (&self.left, &self.right));
        let (r, s) = (a.source.rank(), b.source.rank());
        let mut t = vec![vec![vec![0i64; s]; r]; self.target.rank()];
        for i in 0..r {
            let x = a.apply(&a.source.basis(i));
            for j in 0..s {
                let v = self.apply(&x, &b.apply(&b.source.basis(j)));
                for (k, &y) in v.iter().enumerate() {
                    t[k][i][j] = y;
                }
            }
        }
        Pairing::new(a.source.clone(), b.source.clone(), self.target.clone(), t)
    }

    /// Scalar multiplication `Z/n × M → M` (requires `exp(M) | n`).
    pub fn scalar(n: i64, m: &FinAbModule) -> Pairing {
        let r = m.rank();
        let t = (0..r).map(|k| vec![(0..r).map(|j| i64::from(j == k)).collect()]).collect();
        Pairing::new(FinAbModule::cyclic(n), m.clone(), m.clone(), t)
    }

    /// `M × Z/n → M`.
    pub fn scalar_right(m: &FinAbModule, n: i64) -> Pairing {
        Pairing::scalar(n, m).flipped()
    }
}
