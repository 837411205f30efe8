//! Integer polynomials in `𝐋` and the classes `c·(𝐋−1)^t·𝐋^{g−t}`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

/// An element of `ℤ[𝐋]`, coefficients indexed by degree, no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LPolynomial {
    coeffs: Vec<i128>,
}

impl LPolynomial {
    pub fn zero() -> Self {
        LPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i128) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c·𝐋^k`.
    pub fn monomial(c: i128, k: u64) -> Self {
        let mut coeffs = vec![0; k as usize + 1];
        coeffs[k as usize] = c;
        Self::from_coeffs(coeffs)
    }

    /// `(𝐋−1)^t`.
    pub fn l_minus_one_pow(t: u64) -> Self {
        let base = Self::from_coeffs(vec![-1, 1]);
        (0..t).fold(Self::one(), |acc, _| &acc * &base)
    }

    pub fn from_coeffs(mut coeffs: Vec<i128>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        LPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> i128 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn scale(&self, c: i128) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|&a| a.checked_mul(c).expect("coefficient overflow")).collect())
    }

    /// Multiplication by `𝐋^k`.
    pub fn shift(&self, k: u64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![0; k as usize];
        coeffs.extend_from_slice(&self.coeffs);
        LPolynomial { coeffs }
    }

    /// Value at an integer point.
    pub fn eval(&self, l: i128) -> i128 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * l + c)
    }

    /// Writes `self = c·(𝐋−1)^a·𝐋^b` when possible.
    pub fn factor_class(&self) -> Option<(i128, u64, u64)> {
        let low = self.coeffs.iter().position(|&c| c != 0)?;
        let mut rest: Vec<i128> = self.coeffs[low..].to_vec();
        let mut a = 0u64;
        while rest.len() > 1 {
            // Synthetic division by 𝐋 − 1.
            let mut quotient = vec![0i128; rest.len() - 1];
            let mut carry = 0i128;
            for k in (1..rest.len()).rev() {
                carry += rest[k];
                quotient[k - 1] = carry;
            }
            if carry + rest[0] != 0 {
                return None;
            }
            rest = quotient;
            a += 1;
        }
        Some((rest[0], a, low as u64))
    }
}

impl Add for &LPolynomial {
    type Output = LPolynomial;
    fn add(self, rhs: &LPolynomial) -> LPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        LPolynomial::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &LPolynomial {
    type Output = LPolynomial;
    fn sub(self, rhs: &LPolynomial) -> LPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        LPolynomial::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &LPolynomial {
    type Output = LPolynomial;
    fn neg(self) -> LPolynomial {
        self.scale(-1)
    }
}

impl Mul for &LPolynomial {
    type Output = LPolynomial;
    fn mul(self, rhs: &LPolynomial) -> LPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return LPolynomial::zero();
        }
        let mut out = vec![0i128; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                let t = a.checked_mul(b).expect("coefficient overflow");
                out[i + j] = out[i + j].checked_add(t).expect("coefficient overflow");
            }
        }
        LPolynomial::from_coeffs(out)
    }
}

pub(crate) fn superscript(n: u64) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    alloc::format!("{n}")
        .chars()
        .map(|c| DIGITS[c.to_digit(10).unwrap() as usize])
        .collect()
}

pub(crate) fn power(base: &str, k: u64) -> String {
    match k {
        0 => String::new(),
        1 => String::from(base),
        _ => alloc::format!("{base}{}", superscript(k)),
    }
}

impl fmt::Display for LPolynomial {
    /// Factored as `c(𝐋−1)^a𝐋^b` when possible, expanded otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if let Some((c, a, b)) = self.factor_class() {
            let body = alloc::format!("{}{}", power("(𝐋−1)", a), power("𝐋", b));
            return match (c, body.is_empty()) {
                (_, true) => write!(f, "{c}"),
                (1, false) => write!(f, "{body}"),
                (-1, false) => write!(f, "−{body}"),
                _ => write!(f, "{c}{body}"),
            };
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = self.coeffs[k];
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "−" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "−")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.unsigned_abs();
            let mon = power("𝐋", k as u64);
            match (a, mon.is_empty()) {
                (_, true) => write!(f, "{a}")?,
                (1, false) => write!(f, "{mon}")?,
                _ => write!(f, "{a}{mon}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// `comp_count·(𝐋−1)^t·𝐋^{g−t}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct KVarClass {
    comp_count: u64,
    t: u64,
    g: u64,
}

impl KVarClass {
    /// `None` unless `comp_count ≥ 1` and `t ≤ g`.
    pub fn new(comp_count: u64, t: u64, g: u64) -> Option<Self> {
        (comp_count >= 1 && t <= g).then_some(KVarClass { comp_count, t, g })
    }

    pub fn comp_count(&self) -> u64 {
        self.comp_count
    }

    pub fn torus_rank(&self) -> u64 {
        self.t
    }

    pub fn dimension(&self) -> u64 {
        self.g
    }

    pub fn to_poly(&self) -> LPolynomial {
        LPolynomial::l_minus_one_pow(self.t)
            .shift(self.g - self.t)
            .scale(self.comp_count as i128)
    }
}

impl fmt::Display for KVarClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use proptest::prelude::*;

    #[test]
    fn class_expansion() {
        let c = KVarClass::new(3, 2, 3).unwrap();
        // 3(𝐋²−2𝐋+1)𝐋
        assert_eq!(c.to_poly().coeffs(), &[0, 3, -6, 3]);
        assert_eq!(c.to_poly().degree(), Some(3));
        assert_eq!(c.to_string(), "3(𝐋−1)²𝐋");
        assert!(KVarClass::new(1, 2, 1).is_none());
        assert!(KVarClass::new(0, 0, 1).is_none());
    }

    #[test]
    fn rendering() {
        assert_eq!(LPolynomial::zero().to_string(), "0");
        assert_eq!(LPolynomial::one().to_string(), "1");
        assert_eq!(LPolynomial::l_minus_one_pow(1).to_string(), "(𝐋−1)");
        assert_eq!(LPolynomial::l_minus_one_pow(1).shift(3).to_string(), "(𝐋−1)𝐋³");
        assert_eq!(LPolynomial::from_coeffs(vec![1, 0, 1]).to_string(), "𝐋² + 1");
        assert_eq!(LPolynomial::from_coeffs(vec![-2, 0, 0, 3]).to_string(), "3𝐋³ − 2");
        assert_eq!(LPolynomial::monomial(-1, 12).to_string(), "−𝐋¹²");
    }

    proptest! {
        #[test]
        fn factoring_inverts_the_class(c in 1u64..50, t in 0u64..6, extra in 0u64..6) {
            let k = KVarClass::new(c, t, t + extra).unwrap();
            prop_assert_eq!(k.to_poly().factor_class(), Some((c as i128, t, extra)));
            prop_assert_eq!(k.to_poly().eval(1), if t == 0 { c as i128 } else { 0 });
        }

        #[test]
        fn ring_laws(a in proptest::collection::vec(-9i128..9, 0..5),
                     b in proptest::collection::vec(-9i128..9, 0..5),
                     x in -4i128..5) {
            let (pa, pb) = (LPolynomial::from_coeffs(a), LPolynomial::from_coeffs(b));
            prop_assert_eq!((&pa * &pb).eval(x), pa.eval(x) * pb.eval(x));
            prop_assert_eq!((&pa + &pb).eval(x), pa.eval(x) + pb.eval(x));
            prop_assert_eq!((&pa - &pb).eval(x), pa.eval(x) - pb.eval(x));
        }
    }
}
