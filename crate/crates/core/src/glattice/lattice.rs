use alloc::vec;
use alloc::vec::Vec;

use super::group::{FiniteGroup, Subgroup};
use super::LatticeError;
use crate::intmat::{self, IMat};

/// How a lattice was built. Carried along so that callers can rely on
/// permutation structure without testing for it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// `⊕ ℤ[G/H_i]` in the listed order.
    Permutation(Vec<Subgroup>),
    /// Declared a direct summand of a permutation lattice.
    Invertible,
    General,
}

/// `ℤ^rank` with a left action of a finite group: `action[g]` acts on column
/// vectors and `action[g·h] = action[g]·action[h]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GLattice {
    rank: usize,
    action: Vec<IMat>,
    provenance: Provenance,
}

impl GLattice {
    /// Extends matrices on generators to the whole group and checks that the
    /// result is a homomorphism into `GL_rank(ℤ)`.
    pub fn from_generators(
        group: &FiniteGroup,
        rank: usize,
        images: &[(usize, IMat)],
    ) -> Result<Self, LatticeError> {
        for (g, m) in images {
            if *g >= group.order() {
                return Err(LatticeError::InvalidLattice(alloc::format!("no element {g}")));
            }
            if m.rows() != rank || m.cols() != rank {
                return Err(LatticeError::InvalidLattice(alloc::format!(
                    "matrix for element {g} is not {rank}×{rank}"
                )));
            }
        }
        let n = group.order();
        let mut action: Vec<Option<IMat>> = vec![None; n];
        action[0] = Some(IMat::identity(rank));
        let mut queue = vec![0usize];
        while let Some(a) = queue.pop() {
            for (s, ms) in images {
                let b = group.mul(a, *s);
                let mb = action[a].as_ref().unwrap().mul(ms);
                match &action[b] {
                    Some(existing) if *existing != mb => {
                        return Err(LatticeError::InvalidLattice(alloc::format!(
                            "generator images do not define a homomorphism (element {b})"
                        )))
                    }
                    Some(_) => {}
                    None => {
                        action[b] = Some(mb);
                        queue.push(b);
                    }
                }
            }
        }
        if action.iter().any(Option::is_none) {
            return Err(LatticeError::InvalidLattice(
                "generator images do not reach every group element".into(),
            ));
        }
        let action: Vec<IMat> = action.into_iter().map(Option::unwrap).collect();
        Self::from_action(group, action, Provenance::General)
    }

    /// Wraps a full action table after checking it.
    pub fn from_action(
        group: &FiniteGroup,
        action: Vec<IMat>,
        provenance: Provenance,
    ) -> Result<Self, LatticeError> {
        let n = group.order();
        if action.len() != n {
            return Err(LatticeError::InvalidLattice("one matrix per element required".into()));
        }
        let rank = action[0].rows();
        if action[0] != IMat::identity(rank) {
            return Err(LatticeError::InvalidLattice("identity must act trivially".into()));
        }
        for m in &action {
            if m.rows() != rank || m.cols() != rank {
                return Err(LatticeError::InvalidLattice("inconsistent matrix sizes".into()));
            }
            if intmat::det(m).abs() != 1 {
                return Err(LatticeError::InvalidLattice("action matrix is not unimodular".into()));
            }
        }
        // Exhaustive on small groups, generators otherwise.
        let checks: Vec<usize> = if n <= super::SUBGROUP_CAP {
            (0..n).collect()
        } else {
            group.generators()
        };
        for a in 0..n {
            for &b in &checks {
                if action[group.mul(a, b)] != action[a].mul(&action[b]) {
                    return Err(LatticeError::InvalidLattice(alloc::format!(
                        "action is not a homomorphism at ({a}, {b})"
                    )));
                }
            }
        }
        Ok(GLattice {
            rank,
            action,
            provenance,
        })
    }

    /// Rank-`n` lattice with trivial action.
    pub fn trivial(group: &FiniteGroup, n: usize) -> Self {
        GLattice {
            rank: n,
            action: vec![IMat::identity(n); group.order()],
            provenance: Provenance::Permutation(vec![group.whole(); n]),
        }
    }

    /// `ℤ[G/H]` on the left cosets of `h`.
    pub fn permutation(group: &FiniteGroup, h: &Subgroup) -> Self {
        let cosets = group.left_cosets(h);
        let k = cosets.len();
        let mut which = vec![0usize; group.order()];
        for (i, c) in cosets.iter().enumerate() {
            for &x in c {
                which[x] = i;
            }
        }
        let action = (0..group.order())
            .map(|g| {
                let mut m = IMat::zeros(k, k);
                for (i, c) in cosets.iter().enumerate() {
                    m[(which[group.mul(g, c[0])], i)] = 1;
                }
                m
            })
            .collect();
        GLattice {
            rank: k,
            action,
            provenance: Provenance::Permutation(vec![h.clone()]),
        }
    }

    /// `⊕ ℤ[G/H_i]`.
    pub fn permutation_sum(group: &FiniteGroup, hs: &[Subgroup]) -> Self {
        let mut out = GLattice {
            rank: 0,
            action: vec![IMat::zeros(0, 0); group.order()],
            provenance: Provenance::Permutation(Vec::new()),
        };
        for h in hs {
            out = out.direct_sum(&Self::permutation(group, h));
        }
        out
    }

    /// The regular representation `ℤ[G]`.
    pub fn regular(group: &FiniteGroup) -> Self {
        Self::permutation(group, &group.trivial_subgroup())
    }

    /// Kernel of the augmentation `ℤ[G/H] → ℤ`.
    pub fn augmentation_ideal(group: &FiniteGroup, h: &Subgroup) -> Self {
        let perm = Self::permutation(group, h);
        let aug = IMat::from_rows(&[vec![1i128; perm.rank]]);
        let basis = intmat::kernel(&aug);
        let mut out = perm
            .sublattice(&basis)
            .expect("augmentation kernel is invariant and saturated");
        out.provenance = Provenance::General;
        out
    }

    /// `ℤ[G/H] / ℤ·(sum of cosets)`; the character lattice of the norm-one
    /// torus when `G/H` is the Galois set of the extension.
    pub fn norm_quotient(group: &FiniteGroup, h: &Subgroup) -> Self {
        let perm = Self::permutation(group, h);
        let norm = IMat::from_flat(perm.rank, 1, vec![1; perm.rank]);
        let mut out = perm
            .quotient(&norm)
            .expect("norm line is invariant and saturated");
        out.provenance = Provenance::General;
        out
    }

    /// Rank-one lattice on which `g` acts by `chi(g) ∈ {±1}`.
    pub fn character(group: &FiniteGroup, chi: impl Fn(usize) -> i128) -> Result<Self, LatticeError> {
        let action = (0..group.order()).map(|g| IMat::scalar(1, chi(g))).collect();
        Self::from_action(group, action, Provenance::General)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn group_order(&self) -> usize {
        self.action.len()
    }

    pub fn action(&self, g: usize) -> &IMat {
        &self.action[g]
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn is_declared_permutation(&self) -> bool {
        matches!(self.provenance, Provenance::Permutation(_))
    }

    pub fn is_declared_invertible(&self) -> bool {
        !matches!(self.provenance, Provenance::General)
    }

    /// Marks the lattice invertible; the caller vouches for it.
    pub fn declare_invertible(mut self) -> Self {
        if matches!(self.provenance, Provenance::General) {
            self.provenance = Provenance::Invertible;
        }
        self
    }

    /// `Hom(A, ℤ)` with `g` acting by `action(g⁻¹)ᵀ`.
    pub fn dual(&self, group: &FiniteGroup) -> Self {
        let action = (0..group.order())
            .map(|g| self.action[group.inv(g)].transpose())
            .collect();
        let provenance = match &self.provenance {
            Provenance::Permutation(_) => self.provenance.clone(),
            Provenance::Invertible => Provenance::Invertible,
            Provenance::General => Provenance::General,
        };
        GLattice {
            rank: self.rank,
            action,
            provenance,
        }
    }

    pub fn direct_sum(&self, other: &GLattice) -> Self {
        assert_eq!(self.group_order(), other.group_order());
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| a.block_diag(b))
            .collect();
        let provenance = match (&self.provenance, &other.provenance) {
            (Provenance::Permutation(a), Provenance::Permutation(b)) => {
                Provenance::Permutation(a.iter().chain(b).cloned().collect())
            }
            (Provenance::General, _) | (_, Provenance::General) => Provenance::General,
            _ => Provenance::Invertible,
        };
        GLattice {
            rank: self.rank + other.rank,
            action,
            provenance,
        }
    }

    /// True when the columns of `basis` span a `G`-stable submodule.
    pub fn is_invariant_subspace(&self, basis: &IMat) -> bool {
        self.action
            .iter()
            .all(|m| intmat::solve_matrix(basis, &m.mul(basis)).is_some())
    }

    /// The sublattice spanned by the columns of `basis`, which must be
    /// saturated and stable; coordinates are with respect to that basis.
    pub fn sublattice(&self, basis: &IMat) -> Result<Self, LatticeError> {
        self.check_saturated(basis)?;
        let mut action = Vec::with_capacity(self.action.len());
        for m in &self.action {
            let x = intmat::solve_matrix(basis, &m.mul(basis)).ok_or_else(|| {
                LatticeError::InvalidLattice("sublattice is not stable".into())
            })?;
            action.push(x);
        }
        Ok(GLattice {
            rank: basis.cols(),
            action,
            provenance: Provenance::General,
        })
    }

    /// `A / span(basis)` for a saturated stable sublattice. Coordinates on the
    /// quotient are the last `rank − k` rows of a unimodular `P` with
    /// `P·basis = [I; 0]`.
    pub fn quotient(&self, basis: &IMat) -> Result<Self, LatticeError> {
        self.check_saturated(basis)?;
        if !self.is_invariant_subspace(basis) {
            return Err(LatticeError::InvalidLattice("sublattice is not stable".into()));
        }
        let (p, p_inv) = complement_coordinates(basis);
        let k = basis.cols();
        let n = self.rank;
        let action = self
            .action
            .iter()
            .map(|m| {
                let conj = p.mul(m).mul(&p_inv);
                let mut q = IMat::zeros(n - k, n - k);
                for i in k..n {
                    for j in k..n {
                        q[(i - k, j - k)] = conj[(i, j)];
                    }
                }
                q
            })
            .collect();
        Ok(GLattice {
            rank: n - k,
            action,
            provenance: Provenance::General,
        })
    }

    fn check_saturated(&self, basis: &IMat) -> Result<(), LatticeError> {
        if basis.rows() != self.rank {
            return Err(LatticeError::InvalidLattice("basis has the wrong length".into()));
        }
        if !intmat::is_primitive(basis) {
            return Err(LatticeError::InvalidLattice(
                "sublattice basis is not saturated".into(),
            ));
        }
        Ok(())
    }

    /// `Σ_{h ∈ H} action(h)`.
    pub fn norm(&self, h: &Subgroup) -> IMat {
        h.elements()
            .iter()
            .fold(IMat::zeros(self.rank, self.rank), |acc, &g| acc.add(&self.action[g]))
    }

    /// `[action(h) − 1]_{h ∈ H}` stacked vertically; its kernel is `A^H`.
    pub fn fixed_equations(&self, h: &Subgroup) -> IMat {
        let id = IMat::identity(self.rank);
        let blocks: Vec<IMat> = h.elements().iter().map(|&g| self.action[g].sub(&id)).collect();
        IMat::vcat(self.rank, &blocks)
    }

    /// `[action(h) − 1]_{h ∈ H}` side by side; its image is `I_H·A`.
    pub fn augmentation_image(&self, h: &Subgroup) -> IMat {
        let id = IMat::identity(self.rank);
        let blocks: Vec<IMat> = h.elements().iter().map(|&g| self.action[g].sub(&id)).collect();
        IMat::hcat(self.rank, &blocks)
    }

    /// Basis of `A^H` as columns.
    pub fn invariants(&self, h: &Subgroup) -> IMat {
        intmat::kernel(&self.fixed_equations(h))
    }
}

/// Unimodular `P` with `P·basis = [I; 0]`, and its inverse.
pub(crate) fn complement_coordinates(basis: &IMat) -> (IMat, IMat) {
    let s = intmat::smith(basis);
    // P·B·Q = [I; 0] ⇒ (Q ⊕ 1)·P·B = [I; 0] since Q is k×k.
    let k = basis.cols();
    let n = basis.rows();
    let lift = s.q.block_diag(&IMat::identity(n - k));
    let p = lift.mul(&s.p);
    let p_inv = intmat::inverse(&p).expect("transform is unimodular");
    (p, p_inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_is_a_homomorphism() {
        let g = FiniteGroup::symmetric(3);
        let r = GLattice::regular(&g);
        assert_eq!(r.rank(), 6);
        let again = GLattice::from_action(&g, r.action.clone(), Provenance::General);
        assert!(again.is_ok());
    }

    #[test]
    fn generator_extension_detects_bad_relations() {
        let g = FiniteGroup::cyclic(3);
        // 2×2 swap has order 2, not compatible with a generator of order 3.
        let swap = IMat::from_rows(&[[0i128, 1], [1, 0]]);
        assert!(GLattice::from_generators(&g, 2, &[(1, swap)]).is_err());
        let rot = IMat::from_rows(&[[0i128, -1], [1, -1]]);
        let l = GLattice::from_generators(&g, 2, &[(1, rot)]).unwrap();
        assert_eq!(l.rank(), 2);
    }

    #[test]
    fn norm_quotient_and_augmentation_ideal_have_rank_n_minus_one() {
        let g = FiniteGroup::cyclic(5);
        let t = g.trivial_subgroup();
        assert_eq!(GLattice::norm_quotient(&g, &t).rank(), 4);
        assert_eq!(GLattice::augmentation_ideal(&g, &t).rank(), 4);
    }

    #[test]
    fn dual_of_dual() {
        let g = FiniteGroup::dihedral(4);
        let a = GLattice::augmentation_ideal(&g, &g.trivial_subgroup());
        assert_eq!(a.dual(&g).dual(&g).action, a.action);
    }
}
