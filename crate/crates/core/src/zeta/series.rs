//! Power series in `x` over `ℤ[𝐋]` given by a finite prefix plus tails
//! `c·x^α / (1 − 𝐋^A x^B)^k`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use super::lpoly::{power, superscript, LPolynomial};
use crate::arith::{fmt_rational, Rational};

/// `coeff·x^alpha / (1 − 𝐋^a x^b)^power`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailTerm {
    pub coeff: LPolynomial,
    pub alpha: u64,
    pub a: u64,
    pub b: u64,
    pub power: u32,
}

impl TailTerm {
    /// Coefficient of `x^n` in this term alone.
    pub fn coefficient(&self, n: u64) -> LPolynomial {
        if self.power == 0 {
            return if n == self.alpha { self.coeff.clone() } else { LPolynomial::zero() };
        }
        if n < self.alpha || !(n - self.alpha).is_multiple_of(self.b) {
            return LPolynomial::zero();
        }
        let m = (n - self.alpha) / self.b;
        let c = binomial(m + self.power as u64 - 1, self.power as u64 - 1);
        self.coeff.shift(self.a * m).scale(c)
    }
}

/// `prefix + Σ tails`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RationalSeries {
    /// `(exponent, coefficient)`, exponents strictly increasing.
    pub prefix: Vec<(u64, LPolynomial)>,
    pub tails: Vec<TailTerm>,
}

impl RationalSeries {
    pub fn coefficient(&self, n: u64) -> LPolynomial {
        let mut acc = self
            .prefix
            .iter()
            .find(|(k, _)| *k == n)
            .map(|(_, c)| c.clone())
            .unwrap_or_default();
        for t in &self.tails {
            acc = &acc + &t.coefficient(n);
        }
        acc
    }

    /// Coefficients of `x^0, …, x^n`.
    pub fn expand(&self, n: u64) -> Vec<LPolynomial> {
        (0..=n).map(|k| self.coefficient(k)).collect()
    }

    pub fn is_polynomial(&self) -> bool {
        self.tails.is_empty()
    }

    /// Merges tails with equal `(α, A, B, power)` and drops zero terms.
    pub fn normalized(&self) -> RationalSeries {
        let mut tails: Vec<TailTerm> = Vec::new();
        for t in &self.tails {
            match tails
                .iter_mut()
                .find(|u| (u.alpha, u.a, u.b, u.power) == (t.alpha, t.a, t.b, t.power))
            {
                Some(u) => u.coeff = &u.coeff + &t.coeff,
                None => tails.push(t.clone()),
            }
        }
        tails.retain(|t| !t.coeff.is_zero());
        tails.sort_by_key(|t| (t.alpha, t.power, t.a, t.b));
        RationalSeries {
            prefix: self.prefix.iter().filter(|(_, c)| !c.is_zero()).cloned().collect(),
            tails,
        }
    }
}

fn x_power(k: u64) -> String {
    power("x", k)
}

fn coeff_times(c: &LPolynomial, mon: &str) -> String {
    let body = alloc::format!("{c}");
    if mon.is_empty() {
        return body;
    }
    if c == &LPolynomial::one() {
        return String::from(mon);
    }
    if c.factor_class().is_some() {
        alloc::format!("{body}{mon}")
    } else {
        alloc::format!("({body}){mon}")
    }
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .prefix
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| coeff_times(c, &x_power(*k)))
            .collect();
        for t in &self.tails {
            let num = coeff_times(&t.coeff, &x_power(t.alpha));
            let num = if num.is_empty() { String::from("1") } else { num };
            let y = alloc::format!("{}{}", power("𝐋", t.a), x_power(t.b));
            let den = if t.power == 1 {
                alloc::format!("(1 − {y})")
            } else {
                alloc::format!("(1 − {y}){}", superscript(t.power as u64))
            };
            parts.push(alloc::format!("{num}/{den}"));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// `Σ_j c_j·y^j/(1−y)^{j+1}`, stored as `(c_j, j)` with `c_j ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSumForm {
    pub terms: Vec<(Rational, u32)>,
}

impl PowerSumForm {
    /// Coefficients of `y^0, …, y^n`.
    pub fn expand(&self, n: u64) -> Vec<Rational> {
        (0..=n)
            .map(|m| {
                self.terms
                    .iter()
                    .filter(|(_, j)| m >= *j as u64)
                    .map(|(c, j)| {
                        // y^j/(1−y)^{j+1} = Σ_m C(m, j) y^m
                        *c * Rational::from_integer(binomial(m, *j as u64) as i64)
                    })
                    .fold(Rational::zero(), |a, b| a + b)
            })
            .collect()
    }
}

impl fmt::Display for PowerSumForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, j)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let num = match (c.is_one(), *j) {
                (true, 0) => String::from("1"),
                (true, 1) => String::from("y"),
                (true, _) => alloc::format!("y^{j}"),
                (false, 0) => fmt_rational(c),
                (false, 1) => alloc::format!("{}y", fmt_rational(c)),
                (false, _) => alloc::format!("{}y^{j}", fmt_rational(c)),
            };
            match j + 1 {
                1 => write!(f, "{num}/(1−y)")?,
                2 => write!(f, "{num}/(1−y)²")?,
                k => write!(f, "{num}/(1−y)^{k}")?,
            }
        }
        Ok(())
    }
}

/// Closed form of `Σ_{λ≥0} (a + bλ)^t y^λ`.
///
/// `(y d/dy)^k` applied to `1/(1−y)` gives `Σ_j S(k,j)·j!·y^j/(1−y)^{j+1}`
/// with `S` the Stirling numbers of the second kind. The binomial expansion
/// of `(a + bλ)^t` then combines these.
pub fn geometric_power_sum(a: Rational, b: Rational, t: u32) -> PowerSumForm {
    let stirling = stirling_second_kind(t as usize);
    let mut c = vec![Rational::zero(); t as usize + 1];
    for k in 0..=t as usize {
        let weight = Rational::from_integer(binomial(t as u64, k as u64) as i64)
            * pow(a, t as usize - k)
            * pow(b, k);
        if weight.is_zero() {
            continue;
        }
        let mut fact = 1i64;
        for j in 0..=k {
            if j > 0 {
                fact *= j as i64;
            }
            c[j] += weight * Rational::from_integer(stirling[k][j] * fact);
        }
    }
    PowerSumForm {
        terms: c
            .into_iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(j, v)| (v, j as u32))
            .collect(),
    }
}

fn pow(x: Rational, k: usize) -> Rational {
    (0..k).fold(Rational::one(), |acc, _| acc * x)
}

fn stirling_second_kind(n: usize) -> Vec<Vec<i64>> {
    let mut s = vec![vec![0i64; n + 1]; n + 1];
    s[0][0] = 1;
    for k in 1..=n {
        for j in 1..=k {
            s[k][j] = j as i64 * s[k - 1][j] + s[k - 1][j - 1];
        }
    }
    s
}

pub(crate) fn binomial(n: u64, k: u64) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}
