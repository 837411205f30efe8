//! Jump and d-jump multisets of the constructive group families, the order
//! function, the tame base change conductor, and their recurrences.
//!
//! Every operation takes the residue characteristic `p`; `d` must be prime to
//! it. The built-in families use left-continuous filtration profiles
//! (`f⁰ = f⁺`), so for them `⌊d·j⌋` is the d-jump attached to a jump `j`.

mod multiset;

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

pub use multiset::{DJumpMultiset, FiltrationProfile, JumpMultiset, ProfileDims};

use crate::arith::{gcd, is_prime, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JumpError {
    InvalidDescriptor(String),
    /// A multiset difference or profile combination that cannot exist.
    Inconsistency(String),
    /// `d ≤ N(g)` and no closed formula applies.
    BelowThreshold { d: u64, threshold: u64 },
    /// The sub-object of an exact sequence is not declared invertible.
    IllegalQuotient(String),
    Unsupported(String),
}

impl fmt::Display for JumpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JumpError::InvalidDescriptor(m) => write!(f, "invalid descriptor: {m}"),
            JumpError::Inconsistency(m) => write!(f, "inconsistent descriptor: {m}"),
            JumpError::BelowThreshold { d, threshold } => write!(
                f,
                "d = {d} does not exceed the read-off threshold N = {threshold} and no closed formula applies"
            ),
            JumpError::IllegalQuotient(m) => write!(f, "illegal quotient: {m}"),
            JumpError::Unsupported(m) => write!(f, "unsupported: {m}"),
        }
    }
}

/// What an explicitly described group is.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExplicitKind {
    /// A torus whose Néron special fibre has a maximal torus of the given
    /// dimension.
    Torus { max_torus_dim: u64 },
    Other,
}

/// A group given by its jumps and filtration profile.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExplicitGroup {
    pub profile: FiltrationProfile,
    pub kind: ExplicitKind,
    /// Declared a direct summand of an induced torus.
    pub invertible: bool,
}

/// A group built from the constructive families.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupDescriptor {
    /// `Res_{L/K} G_m` for `L/K` with ramification index `e` and inertia
    /// degree `f`.
    InducedTorus { e: u64, f: u64 },
    /// `total / sub`; `sub` must be declared invertible.
    ExactSeqQuotient {
        sub: Box<GroupDescriptor>,
        total: Box<GroupDescriptor>,
    },
    DirectSum(Vec<GroupDescriptor>),
    /// `inner ×_K K(d0)`.
    BaseChange { inner: Box<GroupDescriptor>, d0: u64 },
    /// The wound unipotent group `ν₁(r)` in characteristic `p`.
    Nu1 { r: u32, p: u64 },
    /// An abelian variety with potentially totally multiplicative reduction,
    /// through its uniformizing torus.
    AbelianTotallyMultiplicative { torus: Box<GroupDescriptor> },
    Explicit(ExplicitGroup),
}

impl GroupDescriptor {
    pub fn induced(e: u64, f: u64) -> Self {
        GroupDescriptor::InducedTorus { e, f }
    }

    pub fn quotient(sub: GroupDescriptor, total: GroupDescriptor) -> Self {
        GroupDescriptor::ExactSeqQuotient {
            sub: Box::new(sub),
            total: Box::new(total),
        }
    }

    pub fn base_change(inner: GroupDescriptor, d0: u64) -> Self {
        GroupDescriptor::BaseChange {
            inner: Box::new(inner),
            d0,
        }
    }

    pub fn abelian(torus: GroupDescriptor) -> Self {
        GroupDescriptor::AbelianTotallyMultiplicative {
            torus: Box::new(torus),
        }
    }

    /// `G_m^n`.
    pub fn split_torus(n: u64) -> Self {
        GroupDescriptor::InducedTorus { e: 1, f: n }
    }

    /// The zero group.
    pub fn zero() -> Self {
        GroupDescriptor::DirectSum(Vec::new())
    }

    /// Structural checks that do not depend on `p`.
    pub fn validate(&self) -> Result<(), JumpError> {
        use GroupDescriptor::*;
        match self {
            InducedTorus { e, f } => {
                if *e == 0 || *f == 0 {
                    return Err(JumpError::InvalidDescriptor("e and f must be positive".into()));
                }
            }
            ExactSeqQuotient { sub, total } => {
                sub.validate()?;
                total.validate()?;
                if !sub.is_invertible() {
                    return Err(JumpError::IllegalQuotient(
                        "the subgroup must be an induced or invertible torus".into(),
                    ));
                }
                if sub.dimension() > total.dimension() {
                    return Err(JumpError::Inconsistency(
                        "subgroup dimension exceeds the total dimension".into(),
                    ));
                }
            }
            DirectSum(parts) => {
                for g in parts {
                    g.validate()?;
                }
            }
            BaseChange { inner, d0 } => {
                if *d0 == 0 {
                    return Err(JumpError::InvalidDescriptor("d0 must be positive".into()));
                }
                inner.validate()?;
            }
            Nu1 { r, p } => {
                if *r == 0 || !is_prime(*p) {
                    return Err(JumpError::InvalidDescriptor(
                        "ν₁ needs r ≥ 1 and a prime p".into(),
                    ));
                }
            }
            AbelianTotallyMultiplicative { torus } => {
                torus.validate()?;
                if !torus.is_torus() {
                    return Err(JumpError::InvalidDescriptor(
                        "the uniformizing group must be a torus".into(),
                    ));
                }
            }
            Explicit(_) => {}
        }
        Ok(())
    }

    pub fn dimension(&self) -> u64 {
        use GroupDescriptor::*;
        match self {
            InducedTorus { e, f } => e * f,
            ExactSeqQuotient { sub, total } => total.dimension().saturating_sub(sub.dimension()),
            DirectSum(parts) => parts.iter().map(Self::dimension).sum(),
            BaseChange { inner, .. } => inner.dimension(),
            Nu1 { r, p } => p.pow(*r) - 1,
            AbelianTotallyMultiplicative { torus } => torus.dimension(),
            Explicit(x) => x.profile.jumps().dimension(),
        }
    }

    pub fn is_torus(&self) -> bool {
        use GroupDescriptor::*;
        match self {
            InducedTorus { .. } => true,
            ExactSeqQuotient { sub, total } => sub.is_torus() && total.is_torus(),
            DirectSum(parts) => parts.iter().all(Self::is_torus),
            BaseChange { inner, .. } => inner.is_torus(),
            Nu1 { .. } | AbelianTotallyMultiplicative { .. } => false,
            Explicit(x) => matches!(x.kind, ExplicitKind::Torus { .. }),
        }
    }

    /// Induced tori, their sums and base changes, and explicit groups
    /// declared invertible.
    pub fn is_invertible(&self) -> bool {
        use GroupDescriptor::*;
        match self {
            InducedTorus { .. } => true,
            DirectSum(parts) => parts.iter().all(Self::is_invertible),
            BaseChange { inner, .. } => inner.is_invertible(),
            Explicit(x) => x.invertible && matches!(x.kind, ExplicitKind::Torus { .. }),
            _ => false,
        }
    }
}

fn check_p(p: u64) -> Result<(), JumpError> {
    if !is_prime(p) {
        return Err(JumpError::InvalidDescriptor(alloc::format!("{p} is not prime")));
    }
    Ok(())
}

fn check_d(d: u64, p: u64) -> Result<(), JumpError> {
    check_p(p)?;
    if d == 0 || d.is_multiple_of(p) {
        return Err(JumpError::InvalidDescriptor(alloc::format!(
            "d = {d} must be positive and prime to p = {p}"
        )));
    }
    Ok(())
}

/// The multiset of jumps.
pub fn jumps_of(g: &GroupDescriptor, p: u64) -> Result<JumpMultiset, JumpError> {
    check_p(p)?;
    g.validate()?;
    jumps_rec(g, p)
}

fn jumps_rec(g: &GroupDescriptor, p: u64) -> Result<JumpMultiset, JumpError> {
    use GroupDescriptor::*;
    match g {
        InducedTorus { e, f } => JumpMultiset::new(
            (0..*e).map(|nu| (Rational::new(nu as i64, *e as i64), *f)),
        ),
        ExactSeqQuotient { sub, total } => jumps_rec(total, p)?.difference(&jumps_rec(sub, p)?),
        DirectSum(parts) => parts
            .iter()
            .try_fold(JumpMultiset::empty(), |acc, h| Ok(acc.union(&jumps_rec(h, p)?))),
        BaseChange { inner, d0 } => Ok(jumps_rec(inner, p)?.scaled(*d0)),
        Nu1 { r, p: q } => {
            check_nu1(*q, p)?;
            let m = q.pow(*r - 1);
            JumpMultiset::new(
                core::iter::once((Rational::zero(), m - 1))
                    .chain((1..*q).map(|i| (Rational::new(i as i64, *q as i64), m))),
            )
        }
        AbelianTotallyMultiplicative { torus } => jumps_rec(torus, p),
        Explicit(x) => Ok(x.profile.jumps()),
    }
}

fn check_nu1(q: u64, p: u64) -> Result<(), JumpError> {
    if q != p {
        return Err(JumpError::Inconsistency(alloc::format!(
            "ν₁ is defined in characteristic {q}, not {p}"
        )));
    }
    Ok(())
}

/// Filtration profile of a descriptor. Built-in families are
/// left-continuous; explicit groups carry their own.
pub fn profile_of(g: &GroupDescriptor, p: u64) -> Result<FiltrationProfile, JumpError> {
    check_p(p)?;
    g.validate()?;
    profile_rec(g, p)
}

fn profile_rec(g: &GroupDescriptor, p: u64) -> Result<FiltrationProfile, JumpError> {
    use GroupDescriptor::*;
    match g {
        InducedTorus { .. } | Nu1 { .. } => Ok(FiltrationProfile::left_continuous(&jumps_rec(g, p)?)),
        ExactSeqQuotient { sub, total } => profile_rec(total, p)?.difference(&profile_rec(sub, p)?),
        DirectSum(parts) => {
            let mut acc = FiltrationProfile::left_continuous(&JumpMultiset::empty());
            for h in parts {
                acc = acc.union(&profile_rec(h, p)?);
            }
            Ok(acc)
        }
        BaseChange { inner, .. } => {
            let inner_profile = profile_rec(inner, p)?;
            if inner_profile.left_excess().is_empty() {
                Ok(FiltrationProfile::left_continuous(&jumps_rec(g, p)?))
            } else {
                Err(JumpError::Unsupported(
                    "base change of a group whose filtration is not left-continuous".into(),
                ))
            }
        }
        AbelianTotallyMultiplicative { torus } => profile_rec(torus, p),
        Explicit(x) => Ok(x.profile.clone()),
    }
}

/// `N(g) = ceil(1 / min gap between distinct jumps)`, `0` when there are
/// fewer than two distinct jumps.
pub fn threshold(g: &GroupDescriptor, p: u64) -> Result<u64, JumpError> {
    Ok(jumps_of(g, p)?.threshold())
}

/// `e(g)`: least common multiple of the jump denominators.
pub fn jump_denominator(g: &GroupDescriptor, p: u64) -> Result<u64, JumpError> {
    Ok(jumps_of(g, p)?.denominator_lcm())
}

/// The multiset of d-jumps.
pub fn d_jumps_of(g: &GroupDescriptor, d: u64, p: u64) -> Result<DJumpMultiset, JumpError> {
    check_d(d, p)?;
    g.validate()?;
    d_jumps_rec(g, d, p)
}

fn floor_family(e: u64, mult: u64, d: u64, range: core::ops::Range<u64>) -> impl Iterator<Item = (u64, u64)> {
    range.map(move |nu| (d * nu / e, mult))
}

fn d_jumps_rec(g: &GroupDescriptor, d: u64, p: u64) -> Result<DJumpMultiset, JumpError> {
    use GroupDescriptor::*;
    if d == 1 {
        return DJumpMultiset::new(1, [(0, g.dimension())]);
    }
    match g {
        InducedTorus { e, f } => {
            // Tame: oracle-checked for every d. Wild: the valuation-basis
            // argument needs d ≡ 1 mod e or gcd(d, e) = 1; otherwise the
            // read-off applies above the threshold e.
            let closed = e % p != 0 || d % e == 1 || gcd(d, *e) == 1 || d > *e;
            if !closed {
                return Err(JumpError::BelowThreshold { d, threshold: *e });
            }
            DJumpMultiset::new(d, floor_family(*e, *f, d, 0..*e))
        }
        ExactSeqQuotient { sub, total } => {
            d_jumps_rec(total, d, p)?.difference(&d_jumps_rec(sub, d, p)?)
        }
        DirectSum(parts) => parts.iter().try_fold(
            DJumpMultiset::new(d, core::iter::empty())?,
            |acc, h| acc.union(&d_jumps_rec(h, d, p)?),
        ),
        BaseChange { inner, d0 } => {
            if d0 % p == 0 {
                return Err(JumpError::InvalidDescriptor(alloc::format!(
                    "base change degree {d0} must be prime to p = {p}"
                )));
            }
            let big = d_jumps_rec(inner, d0 * d, p)?;
            Ok(DJumpMultiset::from_integers(d, big.entries().iter().copied()))
        }
        Nu1 { r, p: q } => {
            check_nu1(*q, p)?;
            let m = q.pow(*r - 1);
            DJumpMultiset::new(
                d,
                core::iter::once((0, m - 1)).chain(floor_family(*q, m, d, 1..*q)),
            )
        }
        AbelianTotallyMultiplicative { torus } => d_jumps_rec(torus, d, p),
        Explicit(x) => {
            let n = x.profile.jumps().threshold();
            if d <= n {
                return Err(JumpError::BelowThreshold { d, threshold: n });
            }
            Ok(x.profile.read_off(d))
        }
    }
}

/// `ord(g, d)`: the sum of the d-jumps.
pub fn ord(g: &GroupDescriptor, d: u64, p: u64) -> Result<u64, JumpError> {
    Ok(d_jumps_of(g, d, p)?.total())
}

/// `c_tame(g)`: the multiplicity-weighted sum of the jumps.
pub fn c_tame(g: &GroupDescriptor, p: u64) -> Result<Rational, JumpError> {
    Ok(jumps_of(g, p)?.weighted_sum())
}

/// `ord(d + q·e(g)) = ord(d) + q·e(g)·c_tame(g)` for `d > N(g)`.
pub fn check_ord_recurrence(g: &GroupDescriptor, d: u64, q: u64, p: u64) -> Result<bool, JumpError> {
    let jumps = jumps_of(g, p)?;
    let n = jumps.threshold();
    if d <= n {
        return Err(JumpError::BelowThreshold { d, threshold: n });
    }
    let e = jumps.denominator_lcm();
    let lhs = ord(g, d + q * e, p)?;
    let rhs = Rational::from_integer(ord(g, d, p)? as i64)
        + Rational::from_integer((q * e) as i64) * jumps.weighted_sum();
    Ok(Rational::from_integer(lhs as i64) == rhs)
}

/// Multiplicity of the jump `0`, checked against the maximal-torus
/// dimension recorded by each torus family.
pub fn multiplicity_of_zero(g: &GroupDescriptor, p: u64) -> Result<u64, JumpError> {
    if !g.is_torus() {
        return Err(JumpError::Unsupported(
            "the multiplicity of 0 is only tracked for tori".into(),
        ));
    }
    let m = jumps_of(g, p)?.multiplicity(&Rational::zero());
    let bookkeeping = max_torus_dim(g)?;
    if m != bookkeeping {
        return Err(JumpError::Inconsistency(alloc::format!(
            "multiplicity of 0 is {m} but the maximal torus has dimension {bookkeeping}"
        )));
    }
    Ok(m)
}

fn max_torus_dim(g: &GroupDescriptor) -> Result<u64, JumpError> {
    use GroupDescriptor::*;
    match g {
        // Res_{(O_L ⊗ k)/k} G_m has maximal torus of dimension f.
        InducedTorus { f, .. } => Ok(*f),
        ExactSeqQuotient { sub, total } => max_torus_dim(total)?
            .checked_sub(max_torus_dim(sub)?)
            .ok_or_else(|| JumpError::Inconsistency("negative torus dimension".into())),
        DirectSum(parts) => parts.iter().map(max_torus_dim).sum(),
        BaseChange { .. } => Err(JumpError::Unsupported(
            "maximal torus of a base change is not tracked".into(),
        )),
        Explicit(ExplicitGroup {
            kind: ExplicitKind::Torus { max_torus_dim },
            ..
        }) => Ok(*max_torus_dim),
        _ => Err(JumpError::Unsupported("not a torus".into())),
    }
}

/// `c_tame(total) = c_tame(sub) + c_tame(quotient)`. Without an explicit
/// quotient the exact-sequence quotient of `total` by `sub` is used, which
/// needs `sub` invertible; with one, the three are compared as given and a
/// failure of additivity is reported as `false`.
pub fn check_ctame_additivity(
    sub: &GroupDescriptor,
    total: &GroupDescriptor,
    quotient: Option<&GroupDescriptor>,
    p: u64,
) -> Result<bool, JumpError> {
    let q = match quotient {
        Some(q) => c_tame(q, p)?,
        None => c_tame(&GroupDescriptor::quotient(sub.clone(), total.clone()), p)?,
    };
    Ok(c_tame(total, p)? == c_tame(sub, p)? + q)
}

/// One term of a jump-limit sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitStep {
    pub d: u64,
    /// Sorted d-jumps divided by `d`.
    pub ratios: Vec<Rational>,
}

/// `j_{i,ℓ}/d_ℓ` for each `d_ℓ` of the sequence.
pub fn jump_limit_sequence(g: &GroupDescriptor, ds: &[u64], p: u64) -> Result<Vec<LimitStep>, JumpError> {
    ds.iter()
        .map(|&d| {
            let dj = d_jumps_of(g, d, p)?;
            Ok(LimitStep {
                d,
                ratios: dj
                    .expanded()
                    .into_iter()
                    .map(|x| Rational::new(x as i64, d as i64))
                    .collect(),
            })
        })
        .collect()
}

/// Grid sequence `d_1, d_1·m, d_1·m², …` of the given length with `d_1` the
/// least integer above `N(g)` that is `≡ 1 mod p` and `m` the least integer
/// `≥ 2` prime to `p`.
pub fn default_grid(g: &GroupDescriptor, p: u64, len: usize) -> Result<Vec<u64>, JumpError> {
    let n = threshold(g, p)?;
    let mut d1 = n + 1;
    while d1 % p != 1 % p {
        d1 += 1;
    }
    let m = (2..).find(|m| m % p != 0).unwrap();
    Ok((0..len as u32).map(|i| d1 * m.pow(i)).collect())
}
