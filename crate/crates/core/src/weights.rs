//! `ℤ/dℤ` weights of a `μ_d`-action on a regular system of parameters,
//! scale transforms across infinitesimal torsors and graded substitutions.
//!
//! Substitutions record only monomial supports. Coefficients never affect
//! weights, so they are not stored.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::p_part;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightError {
    LengthMismatch { expected: usize, found: usize },
    /// The image of target parameter `target` mixes weights.
    Equivariance { target: usize, weights: Vec<u64> },
    InvalidInput(String),
}

impl fmt::Display for WeightError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightError::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
            WeightError::Equivariance { target, weights } => write!(
                f,
                "substitution is not equivariant: image of parameter {target} has weights {weights:?}"
            ),
            WeightError::InvalidInput(m) => write!(f, "invalid input: {m}"),
        }
    }
}

/// Weights `j_1, …, j_n` mod `d`, kept in parameter order.
///
/// Equality ignores the order.
#[derive(Clone, Debug)]
pub struct WeightMultiset {
    modulus: u64,
    weights: Vec<u64>,
}

impl WeightMultiset {
    pub fn new(modulus: u64, weights: impl IntoIterator<Item = u64>) -> Result<Self, WeightError> {
        if modulus == 0 {
            return Err(WeightError::InvalidInput("modulus must be positive".into()));
        }
        Ok(WeightMultiset {
            modulus,
            weights: weights.into_iter().map(|w| w % modulus).collect(),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Weights in parameter order.
    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn dimension(&self) -> usize {
        self.weights.len()
    }

    /// `(residue, multiplicity)` pairs in increasing residue order.
    pub fn entries(&self) -> Vec<(u64, u64)> {
        let mut m = BTreeMap::new();
        for &w in &self.weights {
            *m.entry(w).or_insert(0u64) += 1;
        }
        m.into_iter().collect()
    }

    pub fn multiplicity(&self, residue: u64) -> u64 {
        let r = residue % self.modulus;
        self.weights.iter().filter(|&&w| w == r).count() as u64
    }
}

impl PartialEq for WeightMultiset {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.entries() == other.entries()
    }
}

impl Eq for WeightMultiset {}

impl fmt::Display for WeightMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries = self.entries();
        if entries.is_empty() {
            return write!(f, "∅");
        }
        for (i, (w, m)) in entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{w}:{m}")?;
        }
        Ok(())
    }
}

/// Exponents `(e_1, …, e_n)` with `p^{e_1+…+e_n}` the order of the torsor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scale {
    exponents: Vec<u32>,
}

impl Scale {
    pub fn new(exponents: Vec<u32>) -> Self {
        Scale { exponents }
    }

    /// Checks the exponent sum against a declared torsor order.
    pub fn with_torsor_order(exponents: Vec<u32>, p: u64, order: u64) -> Result<Self, WeightError> {
        let s = Scale::new(exponents);
        match s.thickness(p) {
            Some(t) if t == order => Ok(s),
            _ => Err(WeightError::InvalidInput(alloc::format!(
                "exponent sum {} does not match torsor order {order} for p = {p}",
                s.total()
            ))),
        }
    }

    pub fn zero(n: usize) -> Self {
        Scale { exponents: alloc::vec![0; n] }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn total(&self) -> u32 {
        self.exponents.iter().sum()
    }

    /// `p^{Σ e_i}`, or `None` on overflow.
    pub fn thickness(&self, p: u64) -> Option<u64> {
        p.checked_pow(self.total())
    }
}

/// `{p^{e_i} j_i mod d}`.
pub fn apply_scale(w: &WeightMultiset, s: &Scale, p: u64) -> Result<WeightMultiset, WeightError> {
    if w.dimension() != s.exponents.len() {
        return Err(WeightError::LengthMismatch {
            expected: w.dimension(),
            found: s.exponents.len(),
        });
    }
    let d = w.modulus;
    let weights = w
        .weights
        .iter()
        .zip(&s.exponents)
        .map(|(&j, &e)| (j as u128 * pow_mod(p, e as u64, d) as u128 % d as u128) as u64)
        .collect();
    Ok(WeightMultiset { modulus: d, weights })
}

fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut acc = 1u128 % m128;
    let mut base = b as u128 % m128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m128;
        }
        base = base * base % m128;
        e >>= 1;
    }
    acc as u64
}

/// `s_i ↦ Σ λ_ξ t^ξ`, stored as the supports `{ξ}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSubstitution {
    source: WeightMultiset,
    images: Vec<BTreeSet<Vec<u64>>>,
}

impl GradedSubstitution {
    pub fn new(source: WeightMultiset, images: Vec<Vec<Vec<u64>>>) -> Result<Self, WeightError> {
        let m = source.dimension();
        let mut sets = Vec::with_capacity(images.len());
        for (i, image) in images.into_iter().enumerate() {
            if image.is_empty() {
                return Err(WeightError::InvalidInput(alloc::format!(
                    "image of parameter {i} is empty"
                )));
            }
            let mut set = BTreeSet::new();
            for xi in image {
                if xi.len() != m {
                    return Err(WeightError::LengthMismatch { expected: m, found: xi.len() });
                }
                set.insert(xi);
            }
            sets.push(set);
        }
        Ok(GradedSubstitution { source, images: sets })
    }

    /// `s_i ↦ t_i`.
    pub fn identity(source: WeightMultiset) -> Self {
        let m = source.dimension();
        let images = (0..m)
            .map(|i| {
                let mut xi = alloc::vec![0; m];
                xi[i] = 1;
                BTreeSet::from([xi])
            })
            .collect();
        GradedSubstitution { source, images }
    }

    pub fn source(&self) -> &WeightMultiset {
        &self.source
    }

    pub fn images(&self) -> &[BTreeSet<Vec<u64>>] {
        &self.images
    }

    fn weight_of(&self, xi: &[u64]) -> u64 {
        let d = self.source.modulus as u128;
        let s: u128 = xi
            .iter()
            .zip(&self.source.weights)
            .map(|(&a, &j)| a as u128 % d * j as u128 % d)
            .sum();
        (s % d) as u64
    }

    /// `self ∘ inner`: substitute the images of `inner` into `self`.
    ///
    /// The source weights of `self` must be the weights `inner` induces.
    pub fn compose(&self, inner: &GradedSubstitution) -> Result<GradedSubstitution, WeightError> {
        let mid = induced_weights(inner)?;
        if mid.weights != self.source.weights || mid.modulus != self.source.modulus {
            return Err(WeightError::InvalidInput(alloc::format!(
                "source weights {:?} differ from the induced weights {:?}",
                self.source.weights,
                mid.weights
            )));
        }
        let m = inner.source.dimension();
        let mut images = Vec::with_capacity(self.images.len());
        for image in &self.images {
            let mut support = BTreeSet::new();
            for xi in image {
                let mut partial: BTreeSet<Vec<u64>> = BTreeSet::from([alloc::vec![0; m]]);
                for (k, &power) in xi.iter().enumerate() {
                    for _ in 0..power {
                        partial = minkowski(&partial, &inner.images[k]);
                    }
                }
                support.extend(partial);
            }
            images.push(support);
        }
        Ok(GradedSubstitution { source: inner.source.clone(), images })
    }
}

fn minkowski(a: &BTreeSet<Vec<u64>>, b: &BTreeSet<Vec<u64>>) -> BTreeSet<Vec<u64>> {
    let mut out = BTreeSet::new();
    for x in a {
        for y in b {
            out.insert(x.iter().zip(y).map(|(u, v)| u + v).collect());
        }
    }
    out
}

/// Weight of each target parameter, in target order.
pub fn induced_weights(g: &GradedSubstitution) -> Result<WeightMultiset, WeightError> {
    let mut weights = Vec::with_capacity(g.images.len());
    for (target, image) in g.images.iter().enumerate() {
        let seen: BTreeSet<u64> = image.iter().map(|xi| g.weight_of(xi)).collect();
        if seen.len() != 1 {
            return Err(WeightError::Equivariance {
                target,
                weights: seen.into_iter().collect(),
            });
        }
        weights.push(*seen.iter().next().unwrap());
    }
    Ok(WeightMultiset {
        modulus: g.source.modulus,
        weights,
    })
}

/// Thickness of the kernel of the norm map for an extension of degree
/// `deg`: the largest power of `p` dividing `deg`.
pub fn thickness_norm_example(deg: u64, p: u64) -> u64 {
    p_part(deg, p)
}

/// `p^{Σ e_i} ≤ bound`.
pub fn degree_bound_check(scale: &Scale, p: u64, bound: u64) -> bool {
    scale.thickness(p).is_some_and(|t| t <= bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;
    use proptest::prelude::*;

    fn w(d: u64, ws: &[u64]) -> WeightMultiset {
        WeightMultiset::new(d, ws.iter().copied()).unwrap()
    }

    #[test]
    fn scale_examples() {
        assert_eq!(apply_scale(&w(5, &[1, 2]), &Scale::zero(2), 2).unwrap(), w(5, &[1, 2]));
        let out = apply_scale(&w(5, &[1, 2]), &Scale::new(vec![1, 0]), 2).unwrap();
        assert_eq!(out.to_string(), "2:2");
        assert!(matches!(
            apply_scale(&w(5, &[1]), &Scale::zero(2), 2),
            Err(WeightError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn doubling_of_the_quadratic_weight() {
        // a_1, a_3 carry weights (d−1)/4 and 3(d−1)/4; b_1 ↦ a_1².
        for d in [5u64, 9, 13, 17, 21, 101] {
            let k = (d - 1) / 4;
            let g = GradedSubstitution::new(w(d, &[k, 3 * k]), vec![vec![vec![2, 0]]]).unwrap();
            assert_eq!(induced_weights(&g).unwrap(), w(d, &[(d - 1) / 2]));
            // The same result through the scale calculus.
            let scaled = apply_scale(&w(d, &[k]), &Scale::new(vec![1]), 2).unwrap();
            assert_eq!(scaled, w(d, &[(d - 1) / 2]));
        }
        let g = GradedSubstitution::new(w(5, &[1, 3]), vec![vec![vec![2, 0]]]).unwrap();
        assert_eq!(induced_weights(&g).unwrap().to_string(), "2:1");
    }

    #[test]
    fn induced_examples() {
        let src = w(5, &[1, 3, 4]);
        assert_eq!(induced_weights(&GradedSubstitution::identity(src.clone())).unwrap(), src);
        let g = GradedSubstitution::new(w(5, &[1, 3]), vec![vec![vec![1, 1]]]).unwrap();
        assert_eq!(induced_weights(&g).unwrap().to_string(), "4:1");
        // t_1 + t_2 mixes weights 1 and 3.
        let bad = GradedSubstitution::new(w(5, &[1, 3]), vec![vec![vec![1, 0], vec![0, 1]]]).unwrap();
        assert_eq!(
            induced_weights(&bad),
            Err(WeightError::Equivariance { target: 0, weights: vec![1, 3] })
        );
        // t_1 + t_1^6 is homogeneous mod 5.
        let ok = GradedSubstitution::new(w(5, &[1, 3]), vec![vec![vec![1, 0], vec![6, 0]]]).unwrap();
        assert_eq!(induced_weights(&ok).unwrap(), w(5, &[1]));
    }

    #[test]
    fn thickness_examples() {
        assert_eq!(thickness_norm_example(4, 2), 4);
        assert_eq!(thickness_norm_example(6, 2), 2);
        assert_eq!(thickness_norm_example(5, 2), 1);
        assert!(degree_bound_check(&Scale::new(vec![1, 0]), 2, 4));
        assert!(degree_bound_check(&Scale::zero(3), 7, 1));
        assert!(!degree_bound_check(&Scale::new(vec![2, 1]), 3, 26));
        assert!(degree_bound_check(&Scale::new(vec![2, 1]), 3, 27));
        assert!(!degree_bound_check(&Scale::new(vec![70]), 2, u64::MAX));
        assert!(Scale::with_torsor_order(vec![2, 1], 3, 27).is_ok());
        assert!(Scale::with_torsor_order(vec![2, 1], 3, 9).is_err());
    }

    fn arb_weights() -> impl Strategy<Value = WeightMultiset> {
        (2u64..40).prop_flat_map(|d| {
            proptest::collection::vec(0..d, 0..6).prop_map(move |ws| w(d, &ws))
        })
    }

    /// A homogeneous substitution: every monomial of image `i` is a
    /// monomial of the chosen weight plus multiples of `d` in one slot.
    fn arb_substitution(src: WeightMultiset, targets: usize) -> impl Strategy<Value = GradedSubstitution> {
        let m = src.dimension();
        let d = src.modulus();
        proptest::collection::vec(
            (
                proptest::collection::vec(0u64..3, m),
                proptest::collection::vec((0..m.max(1), 1u64..3), 0..3),
            ),
            targets,
        )
        .prop_map(move |specs| {
            let images = specs
                .into_iter()
                .map(|(base, shifts)| {
                    let mut image = vec![base.clone()];
                    for (slot, k) in shifts {
                        if m == 0 {
                            continue;
                        }
                        let mut xi = base.clone();
                        // t^{d·k} has weight 0 mod d.
                        xi[slot] += d * k;
                        image.push(xi);
                    }
                    image
                })
                .collect();
            GradedSubstitution::new(src.clone(), images).unwrap()
        })
    }

    proptest! {
        #[test]
        fn zero_scale_is_identity(ws in arb_weights(), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
            let out = apply_scale(&ws, &Scale::zero(ws.dimension()), p).unwrap();
            prop_assert_eq!(out.weights(), ws.weights());
        }

        #[test]
        fn scaling_preserves_vanishing(
            ws in arb_weights(),
            p in prop::sample::select(vec![2u64, 3, 5, 7]),
            seed in proptest::collection::vec(0u32..5, 6),
        ) {
            prop_assume!(ws.modulus() % p != 0);
            let s = Scale::new(seed[..ws.dimension()].to_vec());
            let out = apply_scale(&ws, &s, p).unwrap();
            for (a, b) in ws.weights().iter().zip(out.weights()) {
                prop_assert_eq!(*a == 0, *b == 0);
            }
            prop_assert_eq!(out.multiplicity(0), ws.multiplicity(0));
        }

        #[test]
        fn composition_is_functorial(
            (inner, outer) in (2u64..30, 1usize..4, 1usize..4, 1usize..4).prop_flat_map(|(d, a, b, c)| {
                proptest::collection::vec(0..d, a).prop_flat_map(move |ws| {
                    arb_substitution(w(d, &ws), b).prop_flat_map(move |inner| {
                        let mid = induced_weights(&inner).unwrap();
                        (Just(inner), arb_substitution(mid, c))
                    })
                })
            })
        ) {
            let composite = induced_weights(&outer.compose(&inner).unwrap()).unwrap();
            let twice = induced_weights(&outer).unwrap();
            prop_assert_eq!(composite.weights(), twice.weights());
        }
    }
}
