//! Elementary integer helpers.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

pub fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn is_prime(n: u64) -> bool {
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

/// Prime factorisation as `(prime, exponent)` pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    out.sort_unstable();
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .map(|(p, e)| (p - 1) * p.pow(e - 1))
        .product()
}

pub fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `p`-adic valuation of a nonzero integer.
pub fn vp(mut n: u64, p: u64) -> u32 {
    assert!(n != 0, "valuation of zero");
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// The `p`-part of `n`.
pub fn p_part(n: u64, p: u64) -> u64 {
    p.pow(vp(n, p))
}

pub fn mod_pow(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut acc = 1u128;
    let mut b = (base % modulus) as u128;
    let m = modulus as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    base = acc as u64;
    base
}

/// Multiplicative order of `a` modulo `n` (`gcd(a, n) = 1`).
pub fn mult_order(a: u64, n: u64) -> u64 {
    if n == 1 {
        return 1;
    }
    assert_eq!(gcd(a, n), 1, "element is not a unit");
    let mut k = 1;
    let mut x = a % n;
    while x != 1 {
        x = x * (a % n) % n;
        k += 1;
    }
    k
}

/// Modular inverse of `a` modulo `n`.
pub fn mod_inv(a: u64, n: u64) -> Option<u64> {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (n as i128, (a % n) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(n as i128) as u64)
}

/// Order of `ζ_m^k` as an element of the group of `m`-th roots of unity.
pub fn root_order(k: u64, m: u64) -> u64 {
    m / gcd(k % m, m)
}

/// True iff `n` is a power of `p` (including `p^0 = 1`).
pub fn is_power_of(mut n: u64, p: u64) -> bool {
    if n == 0 {
        return false;
    }
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_and_phi() {
        assert_eq!(mult_order(3, 8), 2);
        assert_eq!(mult_order(3, 40), 4);
        assert_eq!(euler_phi(120), 32);
        assert_eq!(euler_phi(1320), 320);
        assert_eq!(vp(120, 3), 1);
        assert_eq!(root_order(3, 24), 8);
        assert!(is_power_of(1, 3) && is_power_of(9, 3) && !is_power_of(6, 3));
        assert_eq!(mod_inv(7, 9), Some(4));
    }
}
