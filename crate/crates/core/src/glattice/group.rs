use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use super::LatticeError;

/// Largest order for which subgroups are enumerated.
pub const SUBGROUP_CAP: usize = 64;

/// Largest order accepted at construction.
pub const ORDER_CAP: usize = 4096;

/// Finite group on indices `0..order`, `0` the identity, given by its
/// multiplication table (`mul[a][b] = a·b`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    /// Element indices of the declared generators, if any.
    generators: Vec<usize>,
}

/// A subgroup as a sorted list of element indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&g| other.contains(g))
    }
}

impl FiniteGroup {
    /// Validates a multiplication table: closure, identity at 0,
    /// associativity, inverses.
    pub fn from_mul_table(mul: Vec<Vec<usize>>) -> Result<Self, LatticeError> {
        let n = mul.len();
        if n == 0 {
            return Err(LatticeError::InvalidGroup("empty group".into()));
        }
        if n > ORDER_CAP {
            return Err(LatticeError::Unsupported(alloc::format!(
                "group order {n} exceeds {ORDER_CAP}"
            )));
        }
        for row in &mul {
            if row.len() != n || row.iter().any(|&x| x >= n) {
                return Err(LatticeError::InvalidGroup("table is not closed".into()));
            }
        }
        for a in 0..n {
            if mul[0][a] != a || mul[a][0] != a {
                return Err(LatticeError::InvalidGroup("0 is not the identity".into()));
            }
        }
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| mul[a][b] == 0) {
                Some(b) if mul[b][a] == 0 => inv[a] = b,
                _ => {
                    return Err(LatticeError::InvalidGroup(alloc::format!(
                        "element {a} has no inverse"
                    )))
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = mul[a][b];
                for c in 0..n {
                    if mul[ab][c] != mul[a][mul[b][c]] {
                        return Err(LatticeError::InvalidGroup(alloc::format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            mul,
            inv,
            generators: Vec::new(),
        })
    }

    /// Group generated by permutations of `0..degree`, elements listed in
    /// breadth-first order from the identity. Product `(a·b)(i) = a(b(i))`.
    pub fn from_permutations(generators: &[Vec<usize>]) -> Result<Self, LatticeError> {
        let degree = generators.first().map_or(0, |g| g.len());
        for g in generators {
            let mut seen = vec![false; degree];
            if g.len() != degree || g.iter().any(|&x| x >= degree || core::mem::replace(&mut seen[x], true)) {
                return Err(LatticeError::InvalidGroup("generator is not a permutation".into()));
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut elements = vec![id.clone()];
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        index.insert(id, 0);
        let mut frontier = 0;
        while frontier < elements.len() {
            let a = elements[frontier].clone();
            frontier += 1;
            for s in generators {
                let prod: Vec<usize> = s.iter().map(|&i| a[i]).collect();
                if !index.contains_key(&prod) {
                    if elements.len() >= ORDER_CAP {
                        return Err(LatticeError::Unsupported(alloc::format!(
                            "group order exceeds {ORDER_CAP}"
                        )));
                    }
                    index.insert(prod.clone(), elements.len());
                    elements.push(prod);
                }
            }
        }
        let n = elements.len();
        let mut mul = vec![vec![0; n]; n];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                let prod: Vec<usize> = b.iter().map(|&k| a[k]).collect();
                mul[i][j] = index[&prod];
            }
        }
        let mut g = Self::from_mul_table(mul)?;
        g.generators = generators
            .iter()
            .map(|s| index[s])
            .collect();
        Ok(g)
    }

    /// `ℤ/n`, element `k` standing for `k`; generator `1`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let mut g = Self::from_mul_table(mul).expect("cyclic group table");
        g.generators = if n > 1 { vec![1] } else { Vec::new() };
        g
    }

    /// Dihedral group of order `2n` acting on an `n`-gon (`n ≥ 3`).
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 3);
        let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        Self::from_permutations(&[rot, refl]).expect("dihedral group")
    }

    /// Symmetric group on `n` letters (`n ≥ 2`).
    pub fn symmetric(n: usize) -> Self {
        assert!(n >= 2);
        let swap: Vec<usize> = (0..n).map(|i| if i < 2 { 1 - i } else { i }).collect();
        let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        Self::from_permutations(&[swap, cycle]).expect("symmetric group")
    }

    /// `G × H` with `(g, h) ↦ g·|H| + h`.
    pub fn direct_product(&self, other: &FiniteGroup) -> Self {
        let (n, m) = (self.order(), other.order());
        let mut mul = vec![vec![0; n * m]; n * m];
        for a in 0..n * m {
            for b in 0..n * m {
                let (ga, ha) = (a / m, a % m);
                let (gb, hb) = (b / m, b % m);
                mul[a][b] = self.mul(ga, gb) * m + other.mul(ha, hb);
            }
        }
        let mut g = Self::from_mul_table(mul).expect("direct product table");
        g.generators = self
            .generators()
            .iter()
            .map(|&s| s * m)
            .chain(other.generators().iter().copied())
            .collect();
        g
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn mul_table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    /// Declared generators, or every non-identity element when none were
    /// declared.
    pub fn generators(&self) -> Vec<usize> {
        if self.generators.is_empty() {
            (1..self.order()).collect()
        } else {
            self.generators.clone()
        }
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            elements: (0..self.order()).collect(),
        }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { elements: vec![0] }
    }

    /// Subgroup generated by the given elements.
    pub fn generated_by(&self, gens: &[usize]) -> Subgroup {
        let mut set: BTreeSet<usize> = BTreeSet::new();
        set.insert(0);
        let mut queue = vec![0usize];
        while let Some(a) = queue.pop() {
            for &s in gens {
                let b = self.mul(a, s);
                if set.insert(b) {
                    queue.push(b);
                }
            }
        }
        Subgroup {
            elements: set.into_iter().collect(),
        }
    }

    /// Checks that a list of elements is a subgroup and wraps it.
    pub fn subgroup(&self, elements: &[usize]) -> Result<Subgroup, LatticeError> {
        let set: BTreeSet<usize> = elements.iter().copied().collect();
        if set.iter().any(|&g| g >= self.order()) || !set.contains(&0) {
            return Err(LatticeError::InvalidGroup("not a subgroup".into()));
        }
        for &a in &set {
            for &b in &set {
                if !set.contains(&self.mul(a, b)) {
                    return Err(LatticeError::InvalidGroup("not a subgroup".into()));
                }
            }
        }
        Ok(Subgroup {
            elements: set.into_iter().collect(),
        })
    }

    /// Every subgroup, sorted by order then elements. Built by joining
    /// cyclic subgroups until nothing new appears.
    pub fn subgroups(&self) -> Result<Vec<Subgroup>, LatticeError> {
        let n = self.order();
        if n > SUBGROUP_CAP {
            return Err(LatticeError::Unsupported(alloc::format!(
                "subgroup enumeration is limited to order {SUBGROUP_CAP}, got {n}"
            )));
        }
        let to_mask = |s: &Subgroup| s.elements.iter().fold(0u64, |m, &g| m | (1 << g));
        let cyclic: Vec<u64> = {
            let set: BTreeSet<u64> = (0..n).map(|g| to_mask(&self.generated_by(&[g]))).collect();
            set.into_iter().collect()
        };
        let mut found: BTreeSet<u64> = cyclic.iter().copied().collect();
        let mut queue: Vec<u64> = cyclic.clone();
        while let Some(s) = queue.pop() {
            for &c in &cyclic {
                if c & !s == 0 {
                    continue;
                }
                let joined = self.join_masks(s, c);
                if found.insert(joined) {
                    queue.push(joined);
                }
            }
        }
        let mut out: Vec<Subgroup> = found
            .into_iter()
            .map(|m| Subgroup {
                elements: (0..n).filter(|&g| m >> g & 1 == 1).collect(),
            })
            .collect();
        out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements.cmp(&b.elements)));
        Ok(out)
    }

    fn join_masks(&self, a: u64, b: u64) -> u64 {
        let gens: Vec<usize> = (0..self.order()).filter(|&g| (a | b) >> g & 1 == 1).collect();
        self.generated_by(&gens)
            .elements
            .iter()
            .fold(0u64, |m, &g| m | (1 << g))
    }

    /// Left cosets `gH`, each as a sorted element list, ordered by their
    /// smallest element.
    pub fn left_cosets(&self, h: &Subgroup) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order()];
        let mut out = Vec::new();
        for g in 0..self.order() {
            if seen[g] {
                continue;
            }
            let mut coset: Vec<usize> = h.elements.iter().map(|&x| self.mul(g, x)).collect();
            coset.sort_unstable();
            for &x in &coset {
                seen[x] = true;
            }
            out.push(coset);
        }
        out
    }
}
