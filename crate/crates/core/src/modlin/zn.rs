//! Integer and residue-ring helpers shared by the linear algebra layers.

/// Non-negative gcd.
pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn lcm(a: i64, b: i64) -> i64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
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

#[inline]
pub fn md(a: i64, n: i64) -> i64 {
    a.rem_euclid(n)
}

#[inline]
pub fn mulmod(a: i64, b: i64, n: i64) -> i64 {
    ((a as i128 * b as i128).rem_euclid(n as i128)) as i64
}

pub fn inv_mod(a: i64, n: i64) -> Option<i64> {
    if n == 1 {
        return Some(0);
    }
    let (g, x, _) = ext_gcd(md(a, n), n);
    (g == 1).then(|| md(x, n))
}

pub fn pow_mod(mut base: i64, mut exp: u64, n: i64) -> i64 {
    if n == 1 {
        return 0;
    }
    let mut acc = 1i64;
    base = md(base, n);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, n);
        }
        base = mulmod(base, base, n);
        exp >>= 1;
    }
    acc
}

/// Finds a unit `u` mod `n` with `u * a ≡ gcd(a, n) (mod n)`.
///
/// Returns `(u, g)`; for `a ≡ 0` the pair is `(1, n)`.
pub fn unit_normalizer(a: i64, n: i64) -> (i64, i64) {
    let a = md(a, n);
    if a == 0 {
        return (1, n);
    }
    let g = gcd(a, n);
    let nn = n / g;
    if nn == 1 {
        return (1, g);
    }
    let u0 = inv_mod(a / g, nn).expect("a/g is a unit mod n/g");
    let mut u = u0;
    while gcd(u, n) != 1 {
        u += nn;
    }
    (md(u, n), g)
}

pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `Some((p, e))` when `n = p^e` with `e >= 1`.
pub fn prime_power(n: i64) -> Option<(i64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while n % p != 0 {
        p += 1;
    }
    let mut m = n;
    let mut e = 0;
    while m % p == 0 {
        m /= p;
        e += 1;
    }
    (m == 1).then_some((p, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ext_gcd_identity() {
        for a in -30..30 {
            for b in -30..30 {
                let (g, x, y) = ext_gcd(a, b);
                assert_eq!(a * x + b * y, g);
                assert_eq!(g, gcd(a, b));
            }
        }
    }

    #[test]
    fn normalizer_is_unit() {
        for n in 1..60 {
            for a in 0..n {
                let (u, g) = unit_normalizer(a, n);
                assert_eq!(gcd(u, n), 1);
                if a == 0 {
                    assert_eq!(g, n);
                } else {
                    assert_eq!(md(u * a, n), g % n);
                    assert_eq!(g, gcd(a, n));
                }
            }
        }
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(2), Some((2, 1)));
    }
}
