use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};

use super::JumpError;
use crate::arith::{fmt_rational, Rational};

/// Finite multiset of rationals in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct JumpMultiset {
    entries: Vec<(Rational, u64)>,
}

impl JumpMultiset {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Merges repeated values and drops zero multiplicities; values must lie
    /// in `[0, 1)`.
    pub fn new(items: impl IntoIterator<Item = (Rational, u64)>) -> Result<Self, JumpError> {
        let mut map: BTreeMap<Rational, u64> = BTreeMap::new();
        for (v, m) in items {
            if v < Rational::zero() || v >= Rational::one() {
                return Err(JumpError::InvalidDescriptor(alloc::format!(
                    "jump {} is outside [0, 1)",
                    fmt_rational(&v)
                )));
            }
            if m > 0 {
                *map.entry(v).or_insert(0) += m;
            }
        }
        Ok(JumpMultiset {
            entries: map.into_iter().collect(),
        })
    }

    /// `{0:m}`.
    pub fn zeros(m: u64) -> Self {
        Self::new([(Rational::zero(), m)]).unwrap()
    }

    pub fn entries(&self) -> &[(Rational, u64)] {
        &self.entries
    }

    pub fn dimension(&self) -> u64 {
        self.entries.iter().map(|e| e.1).sum()
    }

    pub fn multiplicity(&self, v: &Rational) -> u64 {
        self.entries
            .iter()
            .find(|(x, _)| x == v)
            .map_or(0, |e| e.1)
    }

    /// All values repeated by multiplicity, ascending.
    pub fn expanded(&self) -> Vec<Rational> {
        self.entries
            .iter()
            .flat_map(|(v, m)| core::iter::repeat_n(*v, *m as usize))
            .collect()
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::new(self.entries.iter().chain(&other.entries).copied()).unwrap()
    }

    /// `self ∖ other`, failing unless `other ⊆ self`.
    pub fn difference(&self, other: &Self) -> Result<Self, JumpError> {
        let mut map: BTreeMap<Rational, u64> = self.entries.iter().copied().collect();
        for (v, m) in &other.entries {
            match map.get_mut(v) {
                Some(have) if *have >= *m => *have -= m,
                _ => {
                    return Err(JumpError::Inconsistency(alloc::format!(
                        "{} is not contained in {}",
                        other,
                        self
                    )))
                }
            }
        }
        Ok(Self::new(map).unwrap())
    }

    /// `{d0·j mod 1}`.
    pub fn scaled(&self, d0: u64) -> Self {
        let k = Rational::from_integer(d0 as i64);
        Self::new(self.entries.iter().map(|(v, m)| ((v * k).fract(), *m))).unwrap()
    }

    /// Multiplicity-weighted sum.
    pub fn weighted_sum(&self) -> Rational {
        self.entries
            .iter()
            .map(|(v, m)| v * Rational::from_integer(*m as i64))
            .sum()
    }

    /// `ceil(1 / min gap)` between distinct values, `0` with fewer than two.
    pub fn threshold(&self) -> u64 {
        let gap = self
            .entries
            .windows(2)
            .map(|w| w[1].0 - w[0].0)
            .min();
        match gap {
            None => 0,
            Some(g) => g.recip().ceil().to_integer() as u64,
        }
    }

    /// Least common multiple of the denominators.
    pub fn denominator_lcm(&self) -> u64 {
        self.entries
            .iter()
            .fold(1i64, |acc, (v, _)| acc.lcm(v.denom())) as u64
    }
}

impl fmt::Display for JumpMultiset {
    /// `value:multiplicity` pairs, comma separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "∅");
        }
        for (i, (v, m)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", fmt_rational(v), m)?;
        }
        Ok(())
    }
}

/// Finite multiset of residues mod `d`, represented in `{0, …, d−1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DJumpMultiset {
    modulus: u64,
    entries: Vec<(u64, u64)>,
}

impl DJumpMultiset {
    pub fn new(modulus: u64, items: impl IntoIterator<Item = (u64, u64)>) -> Result<Self, JumpError> {
        if modulus == 0 {
            return Err(JumpError::InvalidDescriptor("modulus must be positive".into()));
        }
        let mut map: BTreeMap<u64, u64> = BTreeMap::new();
        for (r, m) in items {
            if r >= modulus {
                return Err(JumpError::Inconsistency(alloc::format!(
                    "residue {r} is not below the modulus {modulus}"
                )));
            }
            if m > 0 {
                *map.entry(r).or_insert(0) += m;
            }
        }
        Ok(DJumpMultiset {
            modulus,
            entries: map.into_iter().collect(),
        })
    }

    /// Reduces arbitrary integers mod `d`.
    pub fn from_integers(modulus: u64, items: impl IntoIterator<Item = (u64, u64)>) -> Self {
        Self::new(modulus, items.into_iter().map(|(r, m)| (r % modulus, m))).unwrap()
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn entries(&self) -> &[(u64, u64)] {
        &self.entries
    }

    pub fn dimension(&self) -> u64 {
        self.entries.iter().map(|e| e.1).sum()
    }

    /// Sum of residues with multiplicity.
    pub fn total(&self) -> u64 {
        self.entries.iter().map(|(r, m)| r * m).sum()
    }

    pub fn expanded(&self) -> Vec<u64> {
        self.entries
            .iter()
            .flat_map(|(r, m)| core::iter::repeat_n(*r, *m as usize))
            .collect()
    }

    fn check_modulus(&self, other: &Self) -> Result<(), JumpError> {
        if self.modulus != other.modulus {
            return Err(JumpError::Inconsistency(alloc::format!(
                "moduli {} and {} differ",
                self.modulus,
                other.modulus
            )));
        }
        Ok(())
    }

    pub fn union(&self, other: &Self) -> Result<Self, JumpError> {
        self.check_modulus(other)?;
        Self::new(self.modulus, self.entries.iter().chain(&other.entries).copied())
    }

    pub fn difference(&self, other: &Self) -> Result<Self, JumpError> {
        self.check_modulus(other)?;
        let mut map: BTreeMap<u64, u64> = self.entries.iter().copied().collect();
        for (r, m) in &other.entries {
            match map.get_mut(r) {
                Some(have) if *have >= *m => *have -= m,
                _ => {
                    return Err(JumpError::Inconsistency(alloc::format!(
                        "{} is not contained in {}",
                        other,
                        self
                    )))
                }
            }
        }
        Self::new(self.modulus, map)
    }
}

impl fmt::Display for DJumpMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(r, m)| alloc::format!("{r}:{m}"))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// Dimensions `(f⁺, f⁰, f⁻)` of the filtration just below, at, and just
/// above one jump.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ProfileDims {
    pub plus: u64,
    pub zero: u64,
    pub minus: u64,
}

impl ProfileDims {
    /// `f⁺ − f⁻`.
    pub fn multiplicity(&self) -> u64 {
        self.plus - self.minus
    }

    /// `f⁺ − f⁰`.
    pub fn left_excess(&self) -> u64 {
        self.plus - self.zero
    }
}

/// Filtration dimensions at each distinct jump, ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiltrationProfile {
    entries: Vec<(Rational, ProfileDims)>,
}

impl FiltrationProfile {
    /// Checks `f⁺ ≥ f⁰ ≥ f⁻`, ascending jumps, `f⁻_i = f⁺_{i+1}`, and
    /// `f⁺ = f⁰` at the jump `0` (otherwise the read-off would produce `−1`).
    pub fn new(entries: Vec<(Rational, ProfileDims)>) -> Result<Self, JumpError> {
        let bad = |m: &str| Err(JumpError::InvalidDescriptor(alloc::format!("filtration profile: {m}")));
        for (j, dims) in &entries {
            if !(dims.plus >= dims.zero && dims.zero >= dims.minus) {
                return bad("dimensions must satisfy f⁺ ≥ f⁰ ≥ f⁻");
            }
            if dims.plus == dims.minus {
                return bad("every listed jump needs positive multiplicity");
            }
            if *j < Rational::zero() || *j >= Rational::one() {
                return bad("jumps must lie in [0, 1)");
            }
            if j.is_zero() && dims.plus != dims.zero {
                return bad("f⁺ must equal f⁰ at the jump 0");
            }
        }
        for w in entries.windows(2) {
            if w[0].0 >= w[1].0 {
                return bad("jumps must be strictly increasing");
            }
            if w[0].1.minus != w[1].1.plus {
                return bad("dimensions must chain from one jump to the next");
            }
        }
        if entries.last().is_some_and(|e| e.1.minus != 0) {
            return bad("the filtration must end at dimension 0");
        }
        Ok(FiltrationProfile { entries })
    }

    /// Profile of `jumps` with the given left excess `f⁺ − f⁰` per distinct
    /// jump (zero when absent).
    pub fn from_jumps(jumps: &JumpMultiset, left_excess: &[(Rational, u64)]) -> Result<Self, JumpError> {
        let mut above: u64 = jumps.dimension();
        let mut entries = Vec::with_capacity(jumps.entries().len());
        for (j, m) in jumps.entries() {
            let s = left_excess
                .iter()
                .find(|(x, _)| x == j)
                .map_or(0, |e| e.1);
            if s > *m {
                return Err(JumpError::InvalidDescriptor(
                    "left excess exceeds the multiplicity".into(),
                ));
            }
            let plus = above;
            let minus = above - m;
            entries.push((
                *j,
                ProfileDims {
                    plus,
                    zero: plus - s,
                    minus,
                },
            ));
            above = minus;
        }
        Self::new(entries)
    }

    /// The profile with `f⁰ = f⁺` at every jump.
    pub fn left_continuous(jumps: &JumpMultiset) -> Self {
        Self::from_jumps(jumps, &[]).expect("left-continuous profile is valid")
    }

    pub fn entries(&self) -> &[(Rational, ProfileDims)] {
        &self.entries
    }

    pub fn jumps(&self) -> JumpMultiset {
        JumpMultiset::new(self.entries.iter().map(|(j, d)| (*j, d.multiplicity()))).unwrap()
    }

    /// `(jump, f⁺ − f⁰)` for jumps with nonzero left excess.
    pub fn left_excess(&self) -> Vec<(Rational, u64)> {
        self.entries
            .iter()
            .filter(|(_, d)| d.left_excess() > 0)
            .map(|(j, d)| (*j, d.left_excess()))
            .collect()
    }

    /// The d-jumps read off from the profile; valid once `d` exceeds the
    /// threshold of the jump multiset.
    pub fn read_off(&self, d: u64) -> DJumpMultiset {
        let dd = Rational::from_integer(d as i64);
        let mut out: Vec<(u64, u64)> = Vec::new();
        for (j, dims) in &self.entries {
            let x = j * dd;
            let fl = x.floor().to_integer() as u64;
            if x.is_integer() {
                if dims.left_excess() > 0 {
                    out.push((fl - 1, dims.left_excess()));
                }
                out.push((fl, dims.zero - dims.minus));
            } else {
                out.push((fl, dims.multiplicity()));
            }
        }
        DJumpMultiset::new(d, out).expect("read-off residues lie below d")
    }

    /// `Σ m_i⌊d·j_i⌋ − Σ_{d·j_i ∈ ℤ} (f⁺_i − f⁰_i)`.
    pub fn ord_closed_form(&self, d: u64) -> u64 {
        let dd = Rational::from_integer(d as i64);
        let mut total: u64 = 0;
        let mut correction: u64 = 0;
        for (j, dims) in &self.entries {
            let x = j * dd;
            total += dims.multiplicity() * x.floor().to_integer() as u64;
            if x.is_integer() {
                correction += dims.left_excess();
            }
        }
        total - correction
    }

    pub fn union(&self, other: &Self) -> Self {
        let jumps = self.jumps().union(&other.jumps());
        let mut excess: BTreeMap<Rational, u64> = BTreeMap::new();
        for (j, s) in self.left_excess().into_iter().chain(other.left_excess()) {
            *excess.entry(j).or_insert(0) += s;
        }
        Self::from_jumps(&jumps, &excess.into_iter().collect::<Vec<_>>()).unwrap()
    }

    pub fn difference(&self, other: &Self) -> Result<Self, JumpError> {
        let jumps = self.jumps().difference(&other.jumps())?;
        let mut excess: BTreeMap<Rational, u64> = self.left_excess().into_iter().collect();
        for (j, s) in other.left_excess() {
            match excess.get_mut(&j) {
                Some(have) if *have >= s => *have -= s,
                _ => {
                    return Err(JumpError::Inconsistency(
                        "filtration profiles are not compatible with the quotient".into(),
                    ))
                }
            }
        }
        Self::from_jumps(&jumps, &excess.into_iter().collect::<Vec<_>>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn display_and_union() {
        let a = JumpMultiset::new([(r(0, 1), 3), (r(1, 2), 3)]).unwrap();
        assert_eq!(a.to_string(), "0:3, 1/2:3");
        let b = a.union(&JumpMultiset::new([(r(1, 2), 1)]).unwrap());
        assert_eq!(b.multiplicity(&r(1, 2)), 4);
        assert!(JumpMultiset::new([(r(1, 1), 1)]).is_err());
    }

    #[test]
    fn difference_requires_containment() {
        let a = JumpMultiset::new([(r(0, 1), 1), (r(1, 4), 1), (r(1, 2), 1), (r(3, 4), 1)]).unwrap();
        let b = JumpMultiset::new([(r(0, 1), 1), (r(1, 2), 1)]).unwrap();
        assert_eq!(a.difference(&b).unwrap().to_string(), "1/4:1, 3/4:1");
        assert!(b.difference(&a).is_err());
    }

    #[test]
    fn threshold_and_denominators() {
        let a = JumpMultiset::new([(r(0, 1), 1), (r(1, 3), 1), (r(1, 2), 1)]).unwrap();
        assert_eq!(a.threshold(), 6);
        assert_eq!(a.denominator_lcm(), 6);
        assert_eq!(JumpMultiset::zeros(4).threshold(), 0);
    }

    #[test]
    fn read_off_splits_integral_points() {
        let jumps = JumpMultiset::new([(r(0, 1), 1), (r(1, 2), 3)]).unwrap();
        let prof = FiltrationProfile::from_jumps(&jumps, &[(r(1, 2), 1)]).unwrap();
        // d = 4: 4·1/2 = 2 is integral, split into (1; 1) and (2; 2).
        assert_eq!(prof.read_off(4).to_string(), "0:1, 1:1, 2:2");
        assert_eq!(prof.ord_closed_form(4), prof.read_off(4).total());
        // d = 5: 5/2 not integral.
        assert_eq!(prof.read_off(5).to_string(), "0:1, 2:3");
    }

    #[test]
    fn profile_validation() {
        let bad = FiltrationProfile::new(alloc::vec![(
            r(0, 1),
            ProfileDims { plus: 2, zero: 1, minus: 0 }
        )]);
        assert!(bad.is_err());
    }
}
