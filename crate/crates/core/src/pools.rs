//! Named groups and random G-modules for randomized sweeps.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::extensions::SplitExtension;
use crate::groupcoh::{FiniteGroup, GModule, DEFAULT_MAX_CELLS};
use crate::modlin::zn::gcd;
use crate::modlin::{FinAbModule, Mat};

pub const DEFAULT_GROUPS: [&str; 8] = ["Z/2", "Z/3", "Z/4", "Z2xZ2", "Z/9", "S3", "D4", "Z3xZ3"];
pub const DEFAULT_MODULI: [i64; 6] = [2, 3, 4, 8, 9, 27];

/// `Z/n`, `Z2xZ2`, `Z3xZ3`, `S3`, `D4` or `trivial`.
pub fn named_group(name: &str) -> Result<FiniteGroup> {
    let g = match name {
        "trivial" => FiniteGroup::trivial(),
        "S3" => FiniteGroup::symmetric3(),
        "D4" => FiniteGroup::dihedral4(),
        "Z2xZ2" | "Z3xZ3" => {
            let n = if name == "Z2xZ2" { 2 } else { 3 };
            let c = FiniteGroup::cyclic(n);
            let mut g = FiniteGroup::direct_product(&c, &c);
            g.set_name(name);
            g
        }
        _ => {
            let n: usize = name
                .strip_prefix("Z/")
                .and_then(|s| s.parse().ok())
                .filter(|&n| n >= 1)
                .ok_or_else(|| Error::InvalidGroup(format!("unknown group `{name}`")))?;
            FiniteGroup::cyclic(n)
        }
    };
    Ok(g)
}

/// A random character `G → (Z/n)^×`; falls back to the trivial one.
pub fn random_character<R: Rng + ?Sized>(group: &Arc<FiniteGroup>, n: i64, rng: &mut R) -> GModule {
    let units: Vec<i64> = (1..n.max(2)).filter(|&u| gcd(u, n) == 1).collect();
    for _ in 0..20 {
        let images: Vec<Mat> = group
            .generators()
            .iter()
            .map(|_| Mat::from_rows(&[vec![*units.choose(rng).expect("1 is a unit")]]))
            .collect();
        if let Ok(m) = GModule::from_generators(group.clone(), FinAbModule::cyclic(n), &images) {
            return m;
        }
    }
    GModule::trivial(group.clone(), FinAbModule::cyclic(n))
}

fn divisors(n: i64) -> Vec<i64> {
    (2..=n).filter(|d| n % d == 0).collect()
}

/// A random module of exponent dividing `n`: a character, or a nonsplit-ish
/// rank-two extension of two characters.
pub fn random_module<R: Rng + ?Sized>(group: &Arc<FiniteGroup>, n: i64, rng: &mut R) -> GModule {
    let d = *divisors(n).choose(rng).unwrap_or(&n);
    match rng.gen_range(0..3) {
        0 => random_character(group, n, rng),
        1 => random_character(group, d, rng),
        _ => {
            let a = random_character(group, d, rng);
            let c = random_character(group, n, rng);
            match SplitExtension::random(&a, &c, rng, DEFAULT_MAX_CELLS) {
                Ok(e) => e.b,
                Err(_) => c,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn named_groups_have_expected_orders() {
        let orders: Vec<usize> = DEFAULT_GROUPS.iter().map(|n| named_group(n).unwrap().order()).collect();
        assert_eq!(orders, vec![2, 3, 4, 4, 9, 6, 8, 9]);
        assert!(named_group("Q8").is_err());
    }

    #[test]
    fn random_modules_are_valid() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for name in DEFAULT_GROUPS {
            let g = Arc::new(named_group(name).unwrap());
            for &n in &DEFAULT_MODULI {
                let m = random_module(&g, n, &mut rng);
                assert_eq!(n % m.module.exponent(), 0);
            }
        }
    }
}
