//! Teichmüller lifts, Δ-eigenspace idempotents, Bernoulli numbers mod p,
//! η_i exponent vectors and the pairing-table validator.

mod bernoulli;
mod eigen;
mod table;

pub use bernoulli::{bernoulli_mod, bernoulli_mod_power_sums, irregular_indices};
pub use eigen::{delta_group, delta_module, eigenspace_idempotents, random_delta_module, Idempotents};
pub use table::{
    synthetic_table_csv, validate_pairing_table, IndexBookkeeping, PairingRow, PairingTable, RowVerdict, TableReport,
    VanishingTally,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::modlin::zn::{is_prime, md, pow_mod};

/// `p`, the precision `p^e` and the table of `ω: (Z/p)^× → (Z/p^e)^×`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycloContext {
    pub p: i64,
    pub e: u32,
    /// `p^e`
    pub modulus: i64,
    /// `omega[a]` for `1 ≤ a < p`; `omega[0]` is unused and 0
    omega: Vec<i64>,
    /// a primitive root mod `p`; `Δ` element `k` is `g^k`
    pub generator: i64,
}

pub(crate) fn check_odd_prime(p: i64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not an odd prime")));
    }
    Ok(())
}

fn primitive_root(p: i64) -> i64 {
    let m = p - 1;
    let mut factors = Vec::new();
    let mut r = m;
    let mut q = 2;
    while q * q <= r {
        if r % q == 0 {
            factors.push(q);
            while r % q == 0 {
                r /= q;
            }
        }
        q += 1;
    }
    if r > 1 {
        factors.push(r);
    }
    (2..p).find(|&g| factors.iter().all(|&q| pow_mod(g, (m / q) as u64, p) != 1)).unwrap_or(1)
}

impl CycloContext {
    pub fn new(p: i64, e: u32) -> Result<Self> {
        check_odd_prime(p)?;
        if e == 0 {
            return Err(Error::InvalidInput("precision exponent must be at least 1".into()));
        }
        let modulus = p
            .checked_pow(e)
            .filter(|&m| m <= 1 << 31)
            .ok_or_else(|| Error::InvalidInput(format!("{p}^{e} is too large")))?;
        let lift = p.pow(e - 1);
        let mut omega = vec![0; p as usize];
        for a in 1..p {
            // a^{p^{e−1}} kills the 1 + pZ part and fixes the roots of unity
            let w = pow_mod(a, lift as u64, modulus);
            if md(w, p) != a || pow_mod(w, (p - 1) as u64, modulus) != 1 {
                return Err(Error::InvalidInput(format!("Teichmüller lift of {a} failed its order check")));
            }
            omega[a as usize] = w;
        }
        Ok(CycloContext { p, e, modulus, omega, generator: primitive_root(p) })
    }

    pub fn delta_order(&self) -> usize {
        (self.p - 1) as usize
    }

    /// `ω(a) mod p^e`.
    pub fn teichmuller(&self, a: i64) -> Result<i64> {
        let r = md(a, self.p);
        if r == 0 {
            return Err(Error::InvalidInput(format!("{a} is divisible by {}", self.p)));
        }
        Ok(self.omega[r as usize])
    }

    /// `ω^j(a) mod p^e` for any integer `j`.
    pub fn omega_pow(&self, a: i64, j: i64) -> Result<i64> {
        let w = self.teichmuller(a)?;
        Ok(pow_mod(w, md(j, self.p - 1) as u64, self.modulus))
    }

    /// The residue `g^k mod p` of `Δ` element `k`.
    pub fn delta_residue(&self, k: usize) -> i64 {
        pow_mod(self.generator, k as u64, self.p)
    }
}

/// `δ ↦ ω^{i−1}(δ) mod p^r` for `δ = 1, …, p−1`, in that order.
pub fn eta_exponents(ctx: &CycloContext, i: i64, r: u32) -> Result<Vec<i64>> {
    if i.rem_euclid(2) == 0 {
        return Err(Error::InvalidInput(format!("η_i needs odd i, got {i}")));
    }
    if r == 0 || r > ctx.e {
        return Err(Error::InvalidInput(format!("precision {r} outside 1..={}", ctx.e)));
    }
    let m = ctx.p.pow(r);
    (1..ctx.p).map(|d| Ok(md(ctx.omega_pow(d, i - 1)?, m))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn teichmuller_small() {
        let c = CycloContext::new(5, 2).unwrap();
        assert_eq!(c.teichmuller(1).unwrap(), 1);
        assert_eq!(c.teichmuller(2).unwrap(), 7);
        assert_eq!(md(c.teichmuller(2).unwrap() * c.teichmuller(3).unwrap(), 25), c.teichmuller(6).unwrap());
        assert!(c.teichmuller(10).is_err());
        assert!(CycloContext::new(9, 1).is_err());
        assert_eq!(primitive_root(7), 3);
    }

    #[test]
    fn eta_small() {
        let c = CycloContext::new(5, 1).unwrap();
        assert_eq!(eta_exponents(&c, 3, 1).unwrap(), vec![1, 4, 4, 1]);
        assert_eq!(eta_exponents(&c, 1, 1).unwrap(), vec![1; 4]);
        assert!(eta_exponents(&c, 2, 1).is_err());
        assert!(eta_exponents(&c, 3, 2).is_err());
    }
}
