use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite group given by its full Cayley table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    generators: Vec<usize>,
}

impl FiniteGroup {
    /// Validates closure, identity, inverses and associativity of `table`.
    pub fn from_table(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty Cayley table".into()));
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!("row {a} has length {}, expected {n}", row.len())));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidGroup(format!("row {a} contains out-of-range entry {x}")));
            }
        }
        let flat: Vec<usize> = table.iter().flatten().copied().collect();
        let mul = |a: usize, b: usize| flat[a * n + b];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                        return Err(Error::InvalidGroup(format!("associativity fails for the triple ({a}, {b}, {c})")));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| mul(e, a) == a && mul(a, e) == a))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| mul(a, b) == identity && mul(b, a) == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {a} has no inverse")))?;
        }
        let mut g = FiniteGroup { name: name.into(), order: n, table: flat, identity, inverse, generators: vec![] };
        g.generators = g.greedy_generators();
        Ok(g)
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut reached = self.closure(&gens);
        for a in 0..self.order {
            if !reached[a] {
                gens.push(a);
                reached = self.closure(&gens);
            }
        }
        gens
    }

    fn closure(&self, gens: &[usize]) -> Vec<bool> {
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let mut g = Self::from_table(format!("Z/{n}"), table).expect("cyclic table is a group");
        g.generators = if n > 1 { vec![1] } else { vec![] };
        g
    }

    /// `(a, b) ↦ a * |B| + b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (p, q) = (a.order, b.order);
        let table = (0..p * q)
            .map(|x| (0..p * q).map(|y| a.mul(x / q, y / q) * q + b.mul(x % q, y % q)).collect())
            .collect();
        let mut g = Self::from_table(format!("{}x{}", a.name, b.name), table).expect("product of groups");
        g.generators = a.generators.iter().map(|&s| s * q + b.identity).chain(b.generators.iter().map(|&t| a.identity * q + t)).collect();
        g
    }

    /// Permutation group generated by `gens` (images of `0..n`), elements in
    /// BFS order from the identity. Composition is `(στ)(x) = σ(τ(x))`.
    pub fn from_permutations(name: impl Into<String>, gens: &[Vec<usize>]) -> Result<Self> {
        let deg = gens.first().map_or(0, |g| g.len());
        for g in gens {
            let mut seen = vec![false; deg];
            if g.len() != deg || g.iter().any(|&x| x >= deg || std::mem::replace(&mut seen[x], true)) {
                return Err(Error::InvalidGroup(format!("{g:?} is not a permutation of 0..{deg}")));
            }
        }
        let id: Vec<usize> = (0..deg).collect();
        let mut elems = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y: Vec<usize> = (0..deg).map(|i| x[g[i]]).collect();
                if !elems.contains(&y) {
                    elems.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        let index = |p: &Vec<usize>| elems.iter().position(|q| q == p).expect("closed under products");
        let table = elems
            .iter()
            .map(|a| elems.iter().map(|b| index(&(0..deg).map(|i| a[b[i]]).collect())).collect())
            .collect();
        let mut g = Self::from_table(name, table)?;
        g.generators = gens.iter().map(|p| index(p)).filter(|&i| i != g.identity).collect();
        Ok(g)
    }

    pub fn symmetric3() -> Self {
        Self::from_permutations("S3", &[vec![1, 2, 0], vec![1, 0, 2]]).expect("S3")
    }

    pub fn dihedral4() -> Self {
        Self::from_permutations("D4", &[vec![1, 2, 3, 0], vec![3, 2, 1, 0]]).expect("D4")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `a b a^{-1}`.
    pub fn conj(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.inv(a))
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_central(&self, a: usize) -> bool {
        (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a))
    }

    /// Every element as a word in the generators: `(parent, generator)` such
    /// that `element = parent * generator`; the identity has no parent.
    pub fn spanning_tree(&self) -> Vec<Option<(usize, usize)>> {
        let mut tree = vec![None; self.order];
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for (k, &s) in self.generators.iter().enumerate() {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    tree[y] = Some((x, k));
                    queue.push_back(y);
                }
            }
        }
        tree
    }

    /// BFS order from the identity, so parents precede children.
    pub fn bfs_order(&self) -> Vec<usize> {
        let tree = self.spanning_tree();
        let mut order = vec![self.identity];
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            for (y, t) in tree.iter().enumerate() {
                if matches!(t, Some((p, _)) if *p == x) {
                    order.push(y);
                }
            }
            i += 1;
        }
        order
    }

    /// Subgroup generated by `gens`, with its embedding into `self`.
    pub fn subgroup(&self, name: impl Into<String>, gens: &[usize]) -> (FiniteGroup, Vec<usize>) {
        let seen = self.closure(gens);
        let mut elems = vec![self.identity];
        elems.extend((0..self.order).filter(|&a| seen[a] && a != self.identity));
        let pos = |a: usize| elems.iter().position(|&b| b == a).expect("closed subgroup");
        let table = elems.iter().map(|&a| elems.iter().map(|&b| pos(self.mul(a, b))).collect()).collect();
        let mut sub = Self::from_table(name, table).expect("subgroup table");
        let gens_local: Vec<usize> = gens.iter().map(|&g| pos(g)).filter(|&g| g != sub.identity).collect();
        sub.generators = gens_local;
        (sub, elems)
    }

    /// Checks that `map` (indexed by elements of `self`) is a homomorphism into `target`.
    pub fn is_homomorphism(&self, target: &FiniteGroup, map: &[usize]) -> bool {
        map.len() == self.order
            && map.iter().all(|&x| x < target.order)
            && (0..self.order).all(|a| (0..self.order).all(|b| map[self.mul(a, b)] == target.mul(map[a], map[b])))
    }
}
