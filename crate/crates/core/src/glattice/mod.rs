//! Finite groups acting on integer lattices: Tate cohomology in degrees −1
//! and 0, flasque lattices and flasque resolutions.
//!
//! Matrices act on column vectors. A map of lattices `A → B` is a
//! `rank(B) × rank(A)` matrix.

mod group;
mod lattice;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

pub use group::{FiniteGroup, Subgroup, ORDER_CAP, SUBGROUP_CAP};
pub use lattice::{GLattice, Provenance};

use crate::intmat::{self, IMat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeError {
    InvalidGroup(String),
    InvalidLattice(String),
    Unsupported(String),
    /// A constructed resolution failed its own post-conditions.
    Internal(String),
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::InvalidGroup(m) => write!(f, "invalid group: {m}"),
            LatticeError::InvalidLattice(m) => write!(f, "invalid lattice: {m}"),
            LatticeError::Unsupported(m) => write!(f, "unsupported input: {m}"),
            LatticeError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

/// Degree of a Tate cohomology group handled here.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TateDegree {
    Minus1,
    Zero,
}

impl TateDegree {
    pub fn as_int(self) -> i32 {
        match self {
            TateDegree::Minus1 => -1,
            TateDegree::Zero => 0,
        }
    }

    pub fn from_int(d: i32) -> Option<Self> {
        match d {
            -1 => Some(TateDegree::Minus1),
            0 => Some(TateDegree::Zero),
            _ => None,
        }
    }
}

/// A finite abelian group `⊕ ℤ/n_i` with `1 < n_1 | n_2 | …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TateH {
    pub degree: TateDegree,
    pub invariant_factors: Vec<i128>,
}

impl TateH {
    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn order(&self) -> i128 {
        self.invariant_factors.iter().product()
    }
}

fn check_compatible(group: &FiniteGroup, a: &GLattice) -> Result<(), LatticeError> {
    if a.group_order() != group.order() {
        return Err(LatticeError::InvalidLattice(alloc::format!(
            "lattice is defined for a group of order {}, not {}",
            a.group_order(),
            group.order()
        )));
    }
    Ok(())
}

/// Torsion of `span(basis) / span(gens)` where `span(gens) ⊆ span(basis)`.
fn relative_quotient(basis: &IMat, gens: &IMat) -> Result<Vec<i128>, LatticeError> {
    let coords = intmat::solve_matrix(basis, gens)
        .ok_or_else(|| LatticeError::Internal("generators leave the ambient lattice".into()))?;
    let s = intmat::smith(&coords);
    if s.rank != basis.cols() {
        return Err(LatticeError::Internal("Tate cohomology group is infinite".into()));
    }
    Ok(s.torsion())
}

/// `Ĥ⁰(H, A) = A^H / N_H·A` or `Ĥ⁻¹(H, A) = ker N_H / I_H·A`.
pub fn tate_cohomology(
    group: &FiniteGroup,
    h: &Subgroup,
    a: &GLattice,
    degree: TateDegree,
) -> Result<TateH, LatticeError> {
    check_compatible(group, a)?;
    let norm = a.norm(h);
    let invariant_factors = match degree {
        TateDegree::Zero => relative_quotient(&a.invariants(h), &norm)?,
        TateDegree::Minus1 => {
            relative_quotient(&intmat::kernel(&norm), &a.augmentation_image(h))?
        }
    };
    Ok(TateH {
        degree,
        invariant_factors,
    })
}

/// True when `Ĥ⁻¹(H, A) = 0` for every subgroup `H`.
pub fn is_flasque(group: &FiniteGroup, a: &GLattice) -> Result<bool, LatticeError> {
    check_compatible(group, a)?;
    for h in group.subgroups()? {
        if h.order() == 1 {
            continue;
        }
        if !tate_cohomology(group, &h, a, TateDegree::Minus1)?.is_trivial() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rank of `A^H`.
pub fn invariant_rank(group: &FiniteGroup, h: &Subgroup, a: &GLattice) -> Result<usize, LatticeError> {
    check_compatible(group, a)?;
    Ok(a.rank() - intmat::rank(&a.fixed_equations(h)))
}

/// Torsion invariant factors of the coinvariants `A / I_H·A`.
pub fn coinvariant_torsion(
    group: &FiniteGroup,
    h: &Subgroup,
    a: &GLattice,
) -> Result<Vec<i128>, LatticeError> {
    check_compatible(group, a)?;
    Ok(intmat::cokernel_torsion(&a.augmentation_image(h)))
}

/// Rank of the coinvariants `A / I_H·A`.
pub fn coinvariant_rank(group: &FiniteGroup, h: &Subgroup, a: &GLattice) -> Result<usize, LatticeError> {
    check_compatible(group, a)?;
    Ok(a.rank() - intmat::rank(&a.augmentation_image(h)))
}

/// `0 → M → P → F → 0` with `P` a permutation lattice and `F` flasque.
#[derive(Clone, Debug)]
pub struct FlasqueResolution {
    /// `M → P`, a `rank(P) × rank(M)` matrix.
    pub inclusion: IMat,
    /// `P → F`, a `rank(F) × rank(P)` matrix.
    pub projection: IMat,
    /// `P = ⊕ ℤ[G/H_i]`.
    pub summands: Vec<Subgroup>,
    pub p: GLattice,
    pub f: GLattice,
}

impl FlasqueResolution {
    /// Re-checks exactness, equivariance and flasqueness of `F`.
    pub fn verify(&self, group: &FiniteGroup, m: &GLattice) -> Result<(), LatticeError> {
        let fail = |msg: &str| Err(LatticeError::Internal(String::from(msg)));
        if self.p.rank() != m.rank() + self.f.rank() {
            return fail("ranks do not add up");
        }
        if self.inclusion.rows() != self.p.rank() || self.inclusion.cols() != m.rank() {
            return fail("inclusion has the wrong shape");
        }
        if self.projection.rows() != self.f.rank() || self.projection.cols() != self.p.rank() {
            return fail("projection has the wrong shape");
        }
        if !intmat::is_primitive(&self.inclusion) {
            return fail("inclusion is not primitive");
        }
        if !intmat::is_surjective(&self.projection) {
            return fail("projection is not surjective");
        }
        if !self.projection.mul(&self.inclusion).is_zero() {
            return fail("composite is not zero");
        }
        for g in 0..group.order() {
            if self.p.action(g).mul(&self.inclusion) != self.inclusion.mul(m.action(g)) {
                return fail("inclusion is not equivariant");
            }
            if self.f.action(g).mul(&self.projection) != self.projection.mul(self.p.action(g)) {
                return fail("projection is not equivariant");
            }
        }
        if !self.p.is_declared_permutation() {
            return fail("middle term is not a permutation lattice");
        }
        if !is_flasque(group, &self.f)? {
            return fail("cokernel is not flasque");
        }
        Ok(())
    }
}

/// Builds a flasque resolution through the dual: a permutation lattice `P`
/// surjects onto `M^∨` via orbits of dual standard basis vectors, enlarged by
/// invariant vectors until `P^H → (M^∨)^H` is onto for every subgroup `H`;
/// dualizing `0 → K → P → M^∨ → 0` gives `0 → M → P → K^∨ → 0`.
pub fn flasque_resolve(group: &FiniteGroup, m: &GLattice) -> Result<FlasqueResolution, LatticeError> {
    check_compatible(group, m)?;
    let subgroups = group.subgroups()?;
    let dual = m.dual(group);
    let n = m.rank();

    // (representative vector, its stabilizer); a basis vector already in
    // the span of earlier orbits adds nothing.
    let mut gens: Vec<(Vec<i128>, Subgroup)> = Vec::new();
    for i in 0..n {
        let mut v = vec![0i128; n];
        v[i] = 1;
        if !gens.is_empty() && intmat::solve(&surjection_matrix(group, &dual, &gens), &v).is_some() {
            continue;
        }
        let stab = stabilizer(group, &dual, &v);
        gens.push((v, stab));
    }

    for h in &subgroups {
        let fixed = dual.invariants(h);
        if fixed.cols() == 0 {
            continue;
        }
        let mut extra = 0;
        loop {
            let pi = surjection_matrix(group, &dual, &gens);
            let perm = GLattice::permutation_sum(group, &gens.iter().map(|(_, s)| s.clone()).collect::<Vec<_>>());
            let image = pi.mul(&perm.invariants(h));
            let coords = intmat::solve_matrix(&fixed, &image)
                .ok_or_else(|| LatticeError::Internal("invariants map outside (M^∨)^H".into()))?;
            if intmat::is_surjective(&coords) {
                break;
            }
            if extra == fixed.cols() {
                return Err(LatticeError::Internal(
                    "could not make the invariant map surjective".into(),
                ));
            }
            let w = fixed.column(extra);
            extra += 1;
            let stab = stabilizer(group, &dual, &w);
            gens.push((w, stab));
        }
    }

    let summands: Vec<Subgroup> = gens.iter().map(|(_, s)| s.clone()).collect();
    let p = GLattice::permutation_sum(group, &summands);
    let pi = surjection_matrix(group, &dual, &gens);
    if !intmat::is_surjective(&pi) {
        return Err(LatticeError::Internal("orbit map does not surject onto the dual".into()));
    }
    let k_basis = intmat::kernel(&pi);
    let k = p.sublattice(&k_basis)?;
    let f = k.dual(group);
    let res = FlasqueResolution {
        inclusion: pi.transpose(),
        projection: k_basis.transpose(),
        summands,
        p,
        f,
    };
    res.verify(group, m)?;
    Ok(res)
}

fn stabilizer(group: &FiniteGroup, a: &GLattice, v: &[i128]) -> Subgroup {
    let elems: Vec<usize> = (0..group.order())
        .filter(|&g| a.action(g).mul_vec(v) == v)
        .collect();
    group.subgroup(&elems).expect("stabilizers are subgroups")
}

/// `⊕ ℤ[G/S_i] → A`, coset `gS_i ↦ g·v_i`, with cosets ordered as in
/// [`GLattice::permutation`].
fn surjection_matrix(group: &FiniteGroup, a: &GLattice, gens: &[(Vec<i128>, Subgroup)]) -> IMat {
    let mut cols: Vec<Vec<i128>> = Vec::new();
    for (v, s) in gens {
        for coset in group.left_cosets(s) {
            cols.push(a.action(coset[0]).mul_vec(v));
        }
    }
    let mut out = IMat::zeros(a.rank(), cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (i, &x) in c.iter().enumerate() {
            out[(i, j)] = x;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c2() -> FiniteGroup {
        FiniteGroup::cyclic(2)
    }

    fn sign(g: &FiniteGroup) -> GLattice {
        GLattice::character(g, |x| if x == 0 { 1 } else { -1 }).unwrap()
    }

    #[test]
    fn cyclic_two_on_trivial_lattice() {
        let g = c2();
        let z = GLattice::trivial(&g, 1);
        let h0 = tate_cohomology(&g, &g.whole(), &z, TateDegree::Zero).unwrap();
        assert_eq!(h0.invariant_factors, vec![2]);
        let hm1 = tate_cohomology(&g, &g.whole(), &z, TateDegree::Minus1).unwrap();
        assert!(hm1.is_trivial());
    }

    #[test]
    fn regular_representation_is_acyclic() {
        let g = c2();
        let r = GLattice::regular(&g);
        for deg in [TateDegree::Minus1, TateDegree::Zero] {
            assert!(tate_cohomology(&g, &g.whole(), &r, deg).unwrap().is_trivial());
        }
    }

    #[test]
    fn augmentation_ideal_of_prime_cyclic_is_not_flasque() {
        for p in [2usize, 3, 5, 7] {
            let g = FiniteGroup::cyclic(p);
            let j = GLattice::augmentation_ideal(&g, &g.trivial_subgroup());
            assert_eq!(j.rank(), p - 1);
            let h = tate_cohomology(&g, &g.whole(), &j, TateDegree::Minus1).unwrap();
            assert_eq!(h.invariant_factors, vec![p as i128]);
            assert!(!is_flasque(&g, &j).unwrap());
        }
    }

    #[test]
    fn rank_zero_is_flasque() {
        let g = FiniteGroup::symmetric(3);
        assert!(is_flasque(&g, &GLattice::trivial(&g, 0)).unwrap());
    }

    #[test]
    fn invariant_ranks() {
        let g = FiniteGroup::cyclic(4);
        assert_eq!(invariant_rank(&g, &g.whole(), &GLattice::regular(&g)).unwrap(), 1);
        assert_eq!(invariant_rank(&g, &g.whole(), &GLattice::trivial(&g, 3)).unwrap(), 3);
        let g = c2();
        assert_eq!(invariant_rank(&g, &g.whole(), &sign(&g)).unwrap(), 0);
    }

    #[test]
    fn trivial_and_regular_resolve_to_themselves() {
        let g = FiniteGroup::cyclic(3);
        let r = flasque_resolve(&g, &GLattice::trivial(&g, 1)).unwrap();
        assert_eq!((r.p.rank(), r.f.rank()), (1, 0));
        let r = flasque_resolve(&g, &GLattice::regular(&g)).unwrap();
        assert_eq!((r.p.rank(), r.f.rank()), (3, 0));
    }

    #[test]
    fn sign_lattice_resolution() {
        let g = c2();
        let r = flasque_resolve(&g, &sign(&g)).unwrap();
        assert_eq!(r.p.rank(), 2);
        assert_eq!(r.f.rank(), 1);
        r.verify(&g, &sign(&g)).unwrap();
    }

    #[test]
    fn resolutions_over_small_groups() {
        let groups = [
            FiniteGroup::cyclic(4),
            FiniteGroup::cyclic(2).direct_product(&FiniteGroup::cyclic(2)),
            FiniteGroup::symmetric(3),
            FiniteGroup::dihedral(4),
        ];
        for g in &groups {
            for h in g.subgroups().unwrap() {
                for m in [GLattice::norm_quotient(g, &h), GLattice::augmentation_ideal(g, &h)] {
                    let r = flasque_resolve(g, &m).unwrap();
                    r.verify(g, &m).unwrap();
                }
            }
        }
    }

    /// `Ĥ⁰(H, ℤ[G/K]) ≅ ⊕_{x ∈ H\\G/K} ℤ/|H ∩ xKx⁻¹|` by Mackey and Shapiro.
    fn mackey_h0(g: &FiniteGroup, h: &Subgroup, k: &Subgroup) -> Vec<i128> {
        let mut seen = vec![false; g.order()];
        let mut orders = Vec::new();
        for x in 0..g.order() {
            if seen[x] {
                continue;
            }
            for &a in h.elements() {
                for &b in k.elements() {
                    seen[g.mul(g.mul(a, x), b)] = true;
                }
            }
            let conj: Vec<usize> = k
                .elements()
                .iter()
                .map(|&y| g.mul(g.mul(x, y), g.inv(x)))
                .filter(|&y| h.contains(y))
                .collect();
            orders.push(conj.len() as i128);
        }
        intmat::smith(&IMat::diagonal(&orders)).torsion()
    }

    #[test]
    fn permutation_lattices_on_all_subgroups() {
        let groups = [FiniteGroup::dihedral(4), FiniteGroup::symmetric(3), FiniteGroup::cyclic(6)];
        for g in &groups {
            let subs = g.subgroups().unwrap();
            for k in &subs {
                let perm = GLattice::permutation(g, k);
                for h in &subs {
                    let m1 = tate_cohomology(g, h, &perm, TateDegree::Minus1).unwrap();
                    assert!(m1.is_trivial());
                    let z = tate_cohomology(g, h, &perm, TateDegree::Zero).unwrap();
                    assert_eq!(z.invariant_factors, mackey_h0(g, h, k));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn invariant_rank_is_antitone(n in 2usize..9, k in 0usize..8) {
            let g = FiniteGroup::cyclic(n);
            let subs = g.subgroups().unwrap();
            let a = GLattice::permutation(&g, &subs[k % subs.len()]);
            for h1 in &subs {
                for h2 in &subs {
                    if h1.is_subset_of(h2) {
                        prop_assert!(invariant_rank(&g, h2, &a).unwrap() <= invariant_rank(&g, h1, &a).unwrap());
                    }
                }
            }
        }
    }
}
