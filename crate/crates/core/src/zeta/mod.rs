//! Motivic zeta series `Σ_{p∤d} [𝒢(d)^{qc}_k]·𝐋^{ord(d)}·x^d` in the
//! subring of `K₀(Var_k)` generated by `𝐋` and the integers.

mod lpoly;
mod series;

#[cfg(test)]
mod tests;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use lpoly::{KVarClass, LPolynomial};
pub use series::{geometric_power_sum, PowerSumForm, RationalSeries, TailTerm};

use crate::arith::{gcd, is_prime, lcm, Rational};
use crate::glattice::{coinvariant_torsion, invariant_rank, FiniteGroup, GLattice, LatticeError};
use crate::jumps::{self, GroupDescriptor, JumpError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZetaError {
    Jump(JumpError),
    Lattice(LatticeError),
    InvalidInput(String),
    Unsupported(String),
}

impl fmt::Display for ZetaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZetaError::Jump(e) => write!(f, "{e}"),
            ZetaError::Lattice(e) => write!(f, "{e}"),
            ZetaError::InvalidInput(m) => write!(f, "invalid zeta input: {m}"),
            ZetaError::Unsupported(m) => write!(f, "unsupported: {m}"),
        }
    }
}

impl From<JumpError> for ZetaError {
    fn from(e: JumpError) -> Self {
        ZetaError::Jump(e)
    }
}

impl From<LatticeError> for ZetaError {
    fn from(e: LatticeError) -> Self {
        ZetaError::Lattice(e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ZetaVariant {
    /// Tori and other unirational groups: the class data is `#(Φ)_tors`.
    Torus,
    /// Abelian varieties with potentially totally multiplicative reduction:
    /// the class data is the seed `#Φ(d′)` of the power law.
    Abelian,
}

/// Class data attached to `d′ = gcd(d, δ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ComponentData {
    pub torus_rank: u64,
    pub comp_count: u64,
}

/// A group together with the component data that fixes its zeta series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaInput {
    group: GroupDescriptor,
    p: u64,
    delta: u64,
    variant: ZetaVariant,
    components: BTreeMap<u64, ComponentData>,
}

/// Divisors of `n` that are prime to `p`.
pub fn tame_divisors(n: u64, p: u64) -> Vec<u64> {
    (1..=n).filter(|k| n.is_multiple_of(*k) && k % p != 0).collect()
}

impl ZetaInput {
    /// `components` must have one entry per divisor of `δ` prime to `p`.
    pub fn new(
        group: GroupDescriptor,
        p: u64,
        delta: u64,
        variant: ZetaVariant,
        components: BTreeMap<u64, ComponentData>,
    ) -> Result<Self, ZetaError> {
        if !is_prime(p) {
            return Err(ZetaError::InvalidInput(alloc::format!("p = {p} is not prime")));
        }
        if delta == 0 || delta.is_multiple_of(p) {
            return Err(ZetaError::InvalidInput(alloc::format!(
                "δ = {delta} must be positive and prime to p = {p}"
            )));
        }
        group.validate()?;
        let is_abelian = matches!(group, GroupDescriptor::AbelianTotallyMultiplicative { .. });
        if is_abelian != (variant == ZetaVariant::Abelian) {
            return Err(ZetaError::InvalidInput(
                "the abelian variant goes with an abelian descriptor and only with it".into(),
            ));
        }
        let g = group.dimension();
        let wanted = tame_divisors(delta, p);
        let keys: Vec<u64> = components.keys().copied().collect();
        if keys != wanted {
            return Err(ZetaError::InvalidInput(alloc::format!(
                "component data given at {keys:?}, expected exactly {wanted:?}"
            )));
        }
        for (k, c) in &components {
            if c.torus_rank > g || c.comp_count == 0 {
                return Err(ZetaError::InvalidInput(alloc::format!(
                    "component data at {k}: torus rank {} (dimension {g}), count {}",
                    c.torus_rank,
                    c.comp_count
                )));
            }
        }
        Ok(ZetaInput { group, p, delta, variant, components })
    }

    /// Torus data read off a character lattice `X` of the cyclic group
    /// `Gal(L/K) = ℤ/δ`: over `K(d)` the Galois group shrinks to the
    /// subgroup `H` of order `δ/d′`, `t_d = rk X^H` and `#(Φ)_tors` is the
    /// torsion of the coinvariants `(X^∨)_H`.
    pub fn from_character_lattice(group: GroupDescriptor, p: u64, x: &GLattice) -> Result<Self, ZetaError> {
        let delta = x.group_order() as u64;
        let gal = FiniteGroup::cyclic(delta as usize);
        let dual = x.dual(&gal);
        let mut components = BTreeMap::new();
        for d in tame_divisors(delta, p) {
            let h = gal.generated_by(&[(d % delta) as usize]);
            let torus_rank = invariant_rank(&gal, &h, x)? as u64;
            let comp_count = coinvariant_torsion(&gal, &h, &dual)?
                .iter()
                .map(|&f| f as u64)
                .product();
            components.insert(d, ComponentData { torus_rank, comp_count });
        }
        if x.rank() as u64 != group.dimension() {
            return Err(ZetaError::InvalidInput(alloc::format!(
                "lattice rank {} differs from the group dimension {}",
                x.rank(),
                group.dimension()
            )));
        }
        ZetaInput::new(group, p, delta, ZetaVariant::Torus, components)
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    pub fn variant(&self) -> ZetaVariant {
        self.variant
    }

    pub fn components(&self) -> &BTreeMap<u64, ComponentData> {
        &self.components
    }

    fn data_at(&self, d: u64) -> ComponentData {
        self.components[&gcd(d, self.delta)]
    }

    /// `t_d`.
    pub fn torus_rank(&self, d: u64) -> u64 {
        self.data_at(d).torus_rank
    }

    /// `#(Φ)_tors` for tori, `#Φ = (d/d′)^{t}·#Φ(d′)` for abelian varieties.
    pub fn comp_count(&self, d: u64) -> u64 {
        let data = self.data_at(d);
        match self.variant {
            ZetaVariant::Torus => data.comp_count,
            ZetaVariant::Abelian => {
                let ratio = d / gcd(d, self.delta);
                ratio.pow(data.torus_rank as u32) * data.comp_count
            }
        }
    }

    /// `[𝒢(d)^{qc}_k]`.
    pub fn class_at(&self, d: u64) -> KVarClass {
        KVarClass::new(self.comp_count(d), self.torus_rank(d), self.group.dimension())
            .expect("validated component data")
    }

    /// `e′ = lcm(p, e(G), δ)`.
    pub fn period(&self) -> Result<u64, ZetaError> {
        let e = jumps::jump_denominator(&self.group, self.p)?;
        Ok(lcm(self.p, lcm(e, self.delta)))
    }

    fn check_d(&self, d: u64) -> Result<(), ZetaError> {
        if d == 0 || d.is_multiple_of(self.p) {
            return Err(ZetaError::InvalidInput(alloc::format!("d = {d} is not prime to p")));
        }
        Ok(())
    }

    /// `[𝒢(d)^{qc}_k]·𝐋^{ord(d)}`.
    pub fn coefficient(&self, d: u64) -> Result<LPolynomial, ZetaError> {
        self.check_d(d)?;
        let ord = jumps::ord(&self.group, d, self.p)?;
        Ok(self.class_at(d).to_poly().shift(ord))
    }
}

/// The coefficients at `x^1, …, x^{n_terms}`; exponents divisible by `p`
/// are omitted.
pub fn zeta_truncated(z: &ZetaInput, n_terms: u64) -> Result<RationalSeries, ZetaError> {
    let mut prefix = Vec::new();
    for d in 1..=n_terms {
        if d % z.p != 0 {
            prefix.push((d, z.coefficient(d)?));
        }
    }
    Ok(RationalSeries { prefix, tails: Vec::new() })
}

/// The prefix `d ≤ N(G)` plus one family of tails per residue class `α`
/// mod `e′` with `N < α ≤ N + e′`, `p ∤ α`.
pub fn zeta_closed_form(z: &ZetaInput) -> Result<RationalSeries, ZetaError> {
    let n = jumps::threshold(&z.group, z.p)?;
    let period = z.period()?;
    let c = jumps::c_tame(&z.group, z.p)?;
    let a = c * Rational::from_integer(period as i64);
    if !a.is_integer() {
        return Err(ZetaError::Unsupported(alloc::format!(
            "e′·c_tame = {a} is not an integer"
        )));
    }
    let a = a.to_integer() as u64;
    let mut out = zeta_truncated(z, n)?;
    for alpha in n + 1..=n + period {
        if alpha % z.p == 0 {
            continue;
        }
        let head = z.coefficient(alpha)?;
        match z.variant {
            ZetaVariant::Torus => out.tails.push(TailTerm { coeff: head, alpha, a, b: period, power: 1 }),
            ZetaVariant::Abelian => {
                let alpha_red = gcd(alpha, z.delta);
                let t = z.torus_rank(alpha);
                // head carries #Φ(α) = (α/α′)^t #Φ(α′); the power sum
                // supplies the factor (α/α′)^t itself.
                let base = z.class_at(alpha_red).to_poly().shift(jumps::ord(&z.group, alpha, z.p)?);
                debug_assert_eq!(
                    base.scale((alpha / alpha_red).pow(t as u32) as i128),
                    head
                );
                let form = geometric_power_sum(
                    Rational::from_integer((alpha / alpha_red) as i64),
                    Rational::from_integer((period / alpha_red) as i64),
                    t as u32,
                );
                for (cj, j) in form.terms {
                    if !cj.is_integer() {
                        return Err(ZetaError::Unsupported("non-integral power-sum coefficient".into()));
                    }
                    out.tails.push(TailTerm {
                        coeff: base.shift(a * j as u64).scale(cj.to_integer() as i128),
                        alpha: alpha + period * j as u64,
                        a,
                        b: period,
                        power: j + 1,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Outcome of comparing a closed form with the truncated series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RationalityCheck {
    pub terms: u64,
    /// The first exponent where the two disagree.
    pub first_mismatch: Option<u64>,
}

impl RationalityCheck {
    pub fn agrees(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// First exponent in `0..=n_terms` where the two series differ.
pub fn first_disagreement(a: &RationalSeries, b: &RationalSeries, n_terms: u64) -> Option<u64> {
    (0..=n_terms).find(|&k| a.coefficient(k) != b.coefficient(k))
}

/// Re-expands the closed form and compares it with the truncation.
pub fn verify_rationality(z: &ZetaInput, n_terms: u64) -> Result<RationalityCheck, ZetaError> {
    let closed = zeta_closed_form(z)?;
    let truncated = zeta_truncated(z, n_terms)?;
    Ok(RationalityCheck {
        terms: n_terms,
        first_mismatch: first_disagreement(&closed, &truncated, n_terms),
    })
}

/// Whether every tail has `A/B = c_tame`.
pub fn tails_match_c_tame(series: &RationalSeries, c_tame: Rational) -> bool {
    series.tails.iter().all(|t| {
        t.b > 0 && Rational::new(t.a as i64, t.b as i64) == c_tame
    })
}
