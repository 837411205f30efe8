//! Finite fields `𝔽_q`, `q = p^s < 2^31`, presented as `𝔽_p[y]/(m(y))`.
//!
//! Elements are packed into a `u32` holding the base-`p` digits of the
//! coefficient vector, so they are `Copy` and totally ordered. All arithmetic
//! goes through the [`Fq`] context that owns the modulus.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::{is_prime, prime_factors, prime_power};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FqElem(pub u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldError {
    NotPrimePower(u64),
    TooLarge(u64),
    NoRootOfUnity { order: u64, q: u64 },
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrimePower(q) => write!(f, "{q} is not a prime power"),
            FieldError::TooLarge(q) => write!(f, "field size {q} exceeds 2^31"),
            FieldError::NoRootOfUnity { order, q } => {
                write!(f, "𝔽_{q} has no primitive {order}-th root of unity")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fq {
    p: u32,
    degree: u32,
    q: u32,
    /// Monic irreducible modulus, little-endian, length `degree + 1`.
    modulus: Vec<u32>,
}

impl Fq {
    pub fn new(q: u64) -> Result<Self, FieldError> {
        let (p, s) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        if q >= 1 << 31 {
            return Err(FieldError::TooLarge(q));
        }
        let p = p as u32;
        let modulus = if s == 1 {
            vec![0, 1]
        } else {
            first_irreducible(p, s)
        };
        Ok(Fq {
            p,
            degree: s,
            q: q as u32,
            modulus,
        })
    }

    pub fn characteristic(&self) -> u64 {
        self.p as u64
    }

    pub fn order(&self) -> u64 {
        self.q as u64
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.p as i64) as u32)
    }

    /// Decodes an arbitrary `u64` into a field element (reduces mod `q`).
    pub fn from_index(&self, n: u64) -> FqElem {
        FqElem((n % self.q as u64) as u32)
    }

    fn digits(&self, a: FqElem) -> Vec<u32> {
        let mut out = vec![0; self.degree as usize];
        let mut v = a.0;
        for d in out.iter_mut() {
            *d = v % self.p;
            v /= self.p;
        }
        out
    }

    fn pack(&self, digits: &[u32]) -> FqElem {
        let mut v = 0u32;
        for &d in digits.iter().rev() {
            v = v * self.p + d;
        }
        FqElem(v)
    }

    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        if self.degree == 1 {
            return FqElem(((a.0 as u64 + b.0 as u64) % self.p as u64) as u32);
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.pack(&sum)
    }

    pub fn neg(&self, a: FqElem) -> FqElem {
        if self.degree == 1 {
            return FqElem((self.p - a.0) % self.p);
        }
        let d: Vec<u32> = self.digits(a).iter().map(|x| (self.p - x) % self.p).collect();
        self.pack(&d)
    }

    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        let p = self.p as u64;
        if self.degree == 1 {
            return FqElem(((a.0 as u64 * b.0 as u64) % p) as u32);
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let s = self.degree as usize;
        let mut prod = vec![0u64; 2 * s - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for k in (s..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (i, &m) in self.modulus[..s].iter().enumerate() {
                let idx = k - s + i;
                prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
            }
        }
        let digits: Vec<u32> = prod[..s].iter().map(|&x| x as u32).collect();
        self.pack(&digits)
    }

    pub fn pow(&self, mut a: FqElem, mut n: u64) -> FqElem {
        let mut acc = FqElem::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            n >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FqElem) -> Option<FqElem> {
        if a.is_zero() {
            None
        } else {
            Some(self.pow(a, self.q as u64 - 2))
        }
    }

    /// A generator of the cyclic group `𝔽_q^×` (smallest in packed order).
    pub fn multiplicative_generator(&self) -> FqElem {
        let n = self.q as u64 - 1;
        let primes = prime_factors(n);
        (1..self.q)
            .map(FqElem)
            .find(|&g| primes.iter().all(|&l| self.pow(g, n / l) != FqElem::ONE))
            .expect("finite field has a generator")
    }

    /// A primitive `n`-th root of unity, which exists iff `n | q − 1`.
    pub fn primitive_root_of_unity(&self, n: u64) -> Result<FqElem, FieldError> {
        let order = self.q as u64 - 1;
        if n == 0 || !order.is_multiple_of(n) {
            return Err(FieldError::NoRootOfUnity {
                order: n,
                q: self.q as u64,
            });
        }
        Ok(self.pow(self.multiplicative_generator(), order / n))
    }
}

fn poly_rem(mut a: Vec<u32>, b: &[u32], p: u32) -> Vec<u32> {
    let p64 = p as u64;
    let db = b.len() - 1;
    let lead_inv = mod_inv(b[db] as u64, p64);
    while a.len() > db {
        let c = *a.last().unwrap() as u64 * lead_inv % p64;
        let shift = a.len() - 1 - db;
        for (i, &bi) in b.iter().enumerate() {
            let idx = shift + i;
            a[idx] = ((a[idx] as u64 + (p64 - c) * bi as u64 % p64) % p64) as u32;
        }
        a.pop();
        while a.len() > 1 && *a.last().unwrap() == 0 && a.len() > db {
            a.pop();
        }
    }
    a
}

fn mod_inv(a: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let (mut base, mut e) = (a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

fn monic_of_index(idx: u64, deg: u32, p: u32) -> Vec<u32> {
    let mut out = vec![0u32; deg as usize + 1];
    let mut v = idx;
    for c in out.iter_mut().take(deg as usize) {
        *c = (v % p as u64) as u32;
        v /= p as u64;
    }
    out[deg as usize] = 1;
    out
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = (f.len() - 1) as u32;
    for k in 1..=deg / 2 {
        let count = (p as u64).pow(k);
        for idx in 0..count {
            let g = monic_of_index(idx, k, p);
            if poly_rem(f.to_vec(), &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn first_irreducible(p: u32, s: u32) -> Vec<u32> {
    debug_assert!(is_prime(p as u64));
    let count = (p as u64).pow(s);
    (0..count)
        .map(|idx| monic_of_index(idx, s, p))
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}
