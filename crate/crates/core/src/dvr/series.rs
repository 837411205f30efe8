use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::DvrError;
use crate::fq::{Fq, FqElem};

/// Element of `𝔽_q[[t^{1/N}]]` known up to a precision.
///
/// Exponents are stored as integer numerators over the grain `N`. `prec`
/// is the numerator of the first unknown exponent; `None` marks an exact
/// (polynomial) element. Only nonzero coefficients below `prec` are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    den: u64,
    terms: BTreeMap<u64, FqElem>,
    prec: Option<u64>,
}

fn min_opt(a: Option<u64>, b: Option<u64>) -> Option<u64> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

fn add_opt(a: Option<u64>, b: Option<u64>) -> Option<u64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    }
}

impl TruncSeries {
    /// Exact zero.
    pub fn zero(den: u64) -> Self {
        TruncSeries {
            den,
            terms: BTreeMap::new(),
            prec: None,
        }
    }

    /// Zero known only below exponent `prec/den`.
    pub fn zero_to(den: u64, prec: u64) -> Self {
        TruncSeries {
            den,
            terms: BTreeMap::new(),
            prec: Some(prec),
        }
    }

    pub fn one(den: u64) -> Self {
        Self::monomial(den, FqElem::ONE, 0)
    }

    /// Exact `c·t^{n/den}`.
    pub fn monomial(den: u64, c: FqElem, n: u64) -> Self {
        let mut s = Self::zero(den);
        if !c.is_zero() {
            s.terms.insert(n, c);
        }
        s
    }

    /// Builds from `(numerator, coefficient)` pairs; zero coefficients and
    /// exponents at or beyond `prec` are dropped, repeated exponents are summed.
    pub fn from_terms(
        field: &Fq,
        den: u64,
        terms: impl IntoIterator<Item = (u64, FqElem)>,
        prec: Option<u64>,
    ) -> Self {
        let mut s = Self {
            den,
            terms: BTreeMap::new(),
            prec,
        };
        for (n, c) in terms {
            if prec.is_some_and(|p| n >= p) {
                continue;
            }
            s.add_term(field, n, c);
        }
        s
    }

    fn add_term(&mut self, field: &Fq, n: u64, c: FqElem) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(n).or_insert(FqElem::ZERO);
        *entry = field.add(*entry, c);
        if entry.is_zero() {
            self.terms.remove(&n);
        }
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// Numerator of the precision, `None` when exact.
    pub fn precision(&self) -> Option<u64> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// Numerator of the valuation; `None` when the element is zero to known
    /// precision (or exactly zero).
    pub fn valuation(&self) -> Option<u64> {
        self.terms.keys().next().copied()
    }

    /// Lower bound on the true valuation: the valuation when known, the
    /// precision for an unknown zero, `None` (= ∞) for an exact zero.
    pub fn valuation_bound(&self) -> Option<u64> {
        self.valuation().or(self.prec)
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.prec.is_none()
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, n: u64) -> FqElem {
        self.terms.get(&n).copied().unwrap_or(FqElem::ZERO)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, FqElem)> + '_ {
        self.terms.iter().map(|(&n, &c)| (n, c))
    }

    /// Drops everything at or beyond `prec` and lowers the precision to it.
    pub fn truncate(&self, prec: u64) -> Self {
        let new_prec = min_opt(self.prec, Some(prec));
        Self {
            den: self.den,
            terms: self
                .terms
                .range(..new_prec.unwrap())
                .map(|(&n, &c)| (n, c))
                .collect(),
            prec: new_prec,
        }
    }

    fn check_den(&self, other: &Self) -> Result<(), DvrError> {
        if self.den != other.den {
            Err(DvrError::DenominatorMismatch {
                left: self.den,
                right: other.den,
            })
        } else {
            Ok(())
        }
    }

    pub fn add(&self, field: &Fq, other: &Self) -> Result<Self, DvrError> {
        self.check_den(other)?;
        let prec = min_opt(self.prec, other.prec);
        let terms = self.terms().chain(other.terms());
        Ok(Self::from_terms(field, self.den, terms, prec))
    }

    pub fn neg(&self, field: &Fq) -> Self {
        Self {
            den: self.den,
            terms: self.terms.iter().map(|(&n, &c)| (n, field.neg(c))).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, field: &Fq, other: &Self) -> Result<Self, DvrError> {
        self.add(field, &other.neg(field))
    }

    /// Product with `prec(ab) = min(prec(a) + val(b), prec(b) + val(a))`,
    /// reading an unknown zero's valuation as its precision.
    pub fn mul(&self, field: &Fq, other: &Self) -> Result<Self, DvrError> {
        self.check_den(other)?;
        let prec = min_opt(
            add_opt(self.prec, other.valuation_bound()),
            add_opt(other.prec, self.valuation_bound()),
        );
        let mut out = Self {
            den: self.den,
            terms: BTreeMap::new(),
            prec,
        };
        for (n, a) in self.terms() {
            for (m, b) in other.terms() {
                if prec.is_some_and(|p| n + m >= p) {
                    break;
                }
                out.add_term(field, n + m, field.mul(a, b));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, field: &Fq, c: FqElem) -> Self {
        if c.is_zero() {
            return match self.prec {
                None => Self::zero(self.den),
                Some(_) => Self::zero_to(self.den, self.valuation_bound().unwrap()),
            };
        }
        Self {
            den: self.den,
            terms: self.terms.iter().map(|(&n, &x)| (n, field.mul(x, c))).collect(),
            prec: self.prec,
        }
    }

    /// Multiplication by `t^{n/den}`.
    pub fn shift_up(&self, n: u64) -> Self {
        Self {
            den: self.den,
            terms: self.terms.iter().map(|(&k, &c)| (k + n, c)).collect(),
            prec: self.prec.map(|p| p + n),
        }
    }

    /// Division by `t^{n/den}`; requires `valuation_bound() ≥ n`.
    pub fn shift_down(&self, n: u64) -> Result<Self, DvrError> {
        if self.valuation_bound().is_some_and(|v| v < n) {
            return Err(DvrError::NotDivisible);
        }
        Ok(Self {
            den: self.den,
            terms: self.terms.iter().map(|(&k, &c)| (k - n, c)).collect(),
            prec: self.prec.map(|p| p - n),
        })
    }

    /// Inverse of a unit (valuation 0), truncated at `cap` unless the unit is
    /// an exact constant.
    pub fn unit_inverse(&self, field: &Fq, cap: u64) -> Result<Self, DvrError> {
        let c0 = field.inv(self.coeff(0)).ok_or(DvrError::NotAUnit)?;
        if self.is_exact() && self.terms.len() == 1 {
            return Ok(Self::monomial(self.den, c0, 0));
        }
        let prec = self.prec.map_or(cap, |p| p.min(cap));
        let mut inv: Vec<FqElem> = Vec::with_capacity(prec as usize);
        for n in 0..prec {
            if n == 0 {
                inv.push(c0);
                continue;
            }
            let mut acc = FqElem::ZERO;
            for (k, a) in self.terms.range(1..=n) {
                acc = field.add(acc, field.mul(*a, inv[(n - k) as usize]));
            }
            inv.push(field.neg(field.mul(c0, acc)));
        }
        Ok(Self::from_terms(
            field,
            self.den,
            inv.into_iter().enumerate().map(|(n, c)| (n as u64, c)),
            Some(prec),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f31() -> Fq {
        Fq::new(31).unwrap()
    }

    fn series(field: &Fq, den: u64, terms: &[(u64, i64)], prec: Option<u64>) -> TruncSeries {
        TruncSeries::from_terms(
            field,
            den,
            terms.iter().map(|&(n, c)| (n, field.from_int(c))),
            prec,
        )
    }

    #[test]
    fn difference_of_squares() {
        let f = f31();
        // (1 + t^{1/2})(1 − t^{1/2}) with precision 3 = 6/2
        let a = series(&f, 2, &[(0, 1), (1, 1)], Some(6));
        let b = series(&f, 2, &[(0, 1), (1, -1)], Some(6));
        let c = a.mul(&f, &b).unwrap();
        assert_eq!(c, series(&f, 2, &[(0, 1), (2, -1)], Some(6)));
    }

    #[test]
    fn product_with_exact_zero_is_exact_zero() {
        let f = f31();
        let a = series(&f, 2, &[(0, 3), (1, 1)], Some(6));
        let z = TruncSeries::zero(2);
        assert!(a.mul(&f, &z).unwrap().is_exact_zero());
    }

    #[test]
    fn precision_propagation() {
        let f = f31();
        // t^{1/4} known to precision 1 = 4/4, squared: precision 5/4
        let a = series(&f, 4, &[(1, 1)], Some(4));
        let c = a.mul(&f, &a).unwrap();
        assert_eq!(c.precision(), Some(5));
        assert_eq!(c.valuation(), Some(2));
    }

    #[test]
    fn mismatched_denominators() {
        let f = f31();
        let a = TruncSeries::one(2);
        let b = TruncSeries::one(3);
        assert!(matches!(
            a.mul(&f, &b),
            Err(DvrError::DenominatorMismatch { .. })
        ));
    }

    #[test]
    fn unit_inverse_round_trip() {
        let f = f31();
        let u = series(&f, 1, &[(0, 2), (1, 5), (3, 7)], None);
        let inv = u.unit_inverse(&f, 10).unwrap();
        let prod = u.mul(&f, &inv).unwrap();
        assert_eq!(prod, series(&f, 1, &[(0, 1)], Some(10)));
    }

    #[test]
    fn shifts() {
        let f = f31();
        let a = series(&f, 3, &[(2, 1), (4, 2)], Some(9));
        let b = a.shift_down(2).unwrap();
        assert_eq!(b, series(&f, 3, &[(0, 1), (2, 2)], Some(7)));
        assert_eq!(b.shift_up(2), a);
        assert!(a.shift_down(3).is_err());
    }
}
