//! Small integer helpers shared across modules.

use num_integer::Integer;
use num_rational::Ratio;

/// Exact rational number used for jumps and conductors.
pub type Rational = Ratio<i64>;

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a.lcm(&b)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Decomposes `q = p^s` with `p` prime; `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if p * p > q {
        return Some((q, 1));
    }
    let mut rest = q;
    let mut s = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        s += 1;
    }
    (rest == 1).then_some((p, s))
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> alloc::vec::Vec<u64> {
    let mut out = alloc::vec::Vec::new();
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            out.push(k);
            while n.is_multiple_of(k) {
                n /= k;
            }
        }
        k += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Extended Euclid: returns `(g, x, y)` with `a·x + b·y = g = gcd(a, b)`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Largest power of `p` dividing `n` (for `n ≥ 1`).
pub fn p_part(mut n: u64, p: u64) -> u64 {
    let mut out = 1;
    if p < 2 || n == 0 {
        return out;
    }
    while n.is_multiple_of(p) {
        n /= p;
        out *= p;
    }
    out
}

/// Smallest prime `q` with `q ≡ 1 (mod m)`.
pub fn smallest_prime_congruent_one(m: u64) -> u64 {
    let m = m.max(1);
    let mut q = m + 1;
    while !is_prime(q) {
        q += m;
    }
    q
}

/// Renders `n/d` as `"n"` when `d = 1` and `"n/d"` otherwise.
pub fn fmt_rational(r: &Rational) -> alloc::string::String {
    if *r.denom() == 1 {
        alloc::format!("{}", r.numer())
    } else {
        alloc::format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(31), Some((31, 1)));
        assert_eq!(prime_power(81), Some((3, 4)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn ext_gcd_identity() {
        for a in -20i64..20 {
            for b in -20i64..20 {
                let (g, x, y) = ext_gcd(a, b);
                assert_eq!(a * x + b * y, g);
                assert_eq!(g as u64, gcd(a.unsigned_abs(), b.unsigned_abs()));
            }
        }
    }

    #[test]
    fn p_parts() {
        assert_eq!(p_part(4, 2), 4);
        assert_eq!(p_part(6, 2), 2);
        assert_eq!(p_part(5, 2), 1);
    }

    #[test]
    fn congruent_primes() {
        assert_eq!(smallest_prime_congruent_one(10), 11);
        assert_eq!(smallest_prime_congruent_one(21), 43);
        assert_eq!(smallest_prime_congruent_one(1), 2);
    }
}
