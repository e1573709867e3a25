use super::check_odd_prime;
use crate::error::{Error, Result};
use crate::modlin::zn::{inv_mod, md, mulmod, pow_mod};

fn check_index(p: i64, k: i64) -> Result<()> {
    check_odd_prime(p)?;
    if k < 0 || k % 2 != 0 || k > p - 3 {
        return Err(Error::InvalidInput(format!("need even 0 ≤ k ≤ {}, got {k}", p - 3)));
    }
    Ok(())
}

/// `B_0, …, B_k mod p` from `Σ_{j≤m} C(m+1, j) B_j = 0`, with `B_1 = −1/2`; needs `k + 1 < p`.
fn bernoulli_table(p: i64, k: usize) -> Vec<i64> {
    let mut b = vec![0i64; k + 1];
    b[0] = 1;
    // row m+1 of Pascal's triangle mod p
    let mut binom = vec![1i64, 1];
    for m in 1..=k {
        let mut next = vec![1i64; m + 2];
        for j in 1..=m {
            next[j] = md(binom[j - 1] + binom[j], p);
        }
        binom = next;
        let s = (0..m).fold(0, |acc, j| md(acc + mulmod(binom[j], b[j], p), p));
        let inv = inv_mod((m + 1) as i64, p).expect("m + 1 < p");
        b[m] = md(-mulmod(s, inv, p), p);
    }
    b
}

/// `B_k mod p` by the recurrence.
pub fn bernoulli_mod(p: i64, k: i64) -> Result<i64> {
    check_index(p, k)?;
    Ok(bernoulli_table(p, k as usize)[k as usize])
}

/// `B_k mod p` from `Σ_{a<p} a^k ≡ p·B_k mod p²`, valid for even `2 ≤ k ≤ p−3`.
pub fn bernoulli_mod_power_sums(p: i64, k: i64) -> Result<i64> {
    check_index(p, k)?;
    if k == 0 {
        return Ok(1);
    }
    let p2 = p * p;
    let s = (1..p).fold(0, |acc, a| md(acc + pow_mod(a, k as u64, p2), p2));
    debug_assert_eq!(s % p, 0);
    Ok(s / p)
}

/// Even `2 ≤ k ≤ p−3` with `p | B_k`.
pub fn irregular_indices(p: i64) -> Result<Vec<i64>> {
    check_odd_prime(p)?;
    if p < 5 {
        return Ok(vec![]);
    }
    let b = bernoulli_table(p, (p - 3) as usize);
    Ok((2..=p - 3).step_by(2).filter(|&k| b[k as usize] == 0).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(bernoulli_mod(5, 0).unwrap(), 1);
        assert_eq!(bernoulli_mod(5, 2).unwrap(), 1);
        // B_4 = −1/30 ≡ −1/2 ≡ 3 mod 7
        assert_eq!(bernoulli_mod(7, 4).unwrap(), 3);
        assert!(bernoulli_mod(7, 3).is_err());
        assert!(bernoulli_mod(7, 6).is_err());
    }
}
