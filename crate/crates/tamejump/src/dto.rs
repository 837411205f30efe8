//! JSON forms of descriptors, lattices and zeta inputs.
//!
//! Rationals travel as strings such as `"1/3"` so that nothing is rounded.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use tamejump_core::glattice::{FiniteGroup, GLattice, Provenance};
use tamejump_core::intmat::IMat;
use tamejump_core::jumps::{ExplicitGroup, ExplicitKind, FiltrationProfile, GroupDescriptor, ProfileDims};
use tamejump_core::zeta::{ComponentData, ZetaInput, ZetaVariant};
use tamejump_core::Rational;

use crate::error::CliError;

pub fn parse_rational(s: &str) -> Result<Rational, CliError> {
    s.trim()
        .parse::<Rational>()
        .map_err(|_| CliError::Descriptor(format!("not a rational number: {s:?}")))
}

pub fn format_rational(r: &Rational) -> String {
    tamejump_core::arith::fmt_rational(r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupJson {
    InducedTorus {
        e: u64,
        f: u64,
    },
    SplitTorus {
        n: u64,
    },
    ExactSeqQuotient {
        sub: Box<GroupJson>,
        total: Box<GroupJson>,
    },
    DirectSum {
        summands: Vec<GroupJson>,
    },
    BaseChange {
        inner: Box<GroupJson>,
        d0: u64,
    },
    Nu1 {
        r: u32,
        p: u64,
    },
    AbelianTotallyMultiplicative {
        torus: Box<GroupJson>,
    },
    Explicit {
        profile: Vec<ProfileEntryJson>,
        #[serde(default)]
        max_torus_dim: Option<u64>,
        #[serde(default)]
        invertible: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileEntryJson {
    pub jump: String,
    pub plus: u64,
    pub zero: u64,
    pub minus: u64,
}

impl GroupJson {
    pub fn to_descriptor(&self) -> Result<GroupDescriptor, CliError> {
        use GroupJson::*;
        let g = match self {
            InducedTorus { e, f } => GroupDescriptor::induced(*e, *f),
            SplitTorus { n } => GroupDescriptor::split_torus(*n),
            ExactSeqQuotient { sub, total } => GroupDescriptor::quotient(sub.to_descriptor()?, total.to_descriptor()?),
            DirectSum { summands } => {
                GroupDescriptor::DirectSum(summands.iter().map(|s| s.to_descriptor()).collect::<Result<_, _>>()?)
            }
            BaseChange { inner, d0 } => GroupDescriptor::base_change(inner.to_descriptor()?, *d0),
            Nu1 { r, p } => GroupDescriptor::Nu1 { r: *r, p: *p },
            AbelianTotallyMultiplicative { torus } => GroupDescriptor::abelian(torus.to_descriptor()?),
            Explicit { profile, max_torus_dim, invertible } => {
                let entries = profile
                    .iter()
                    .map(|e| {
                        Ok((
                            parse_rational(&e.jump)?,
                            ProfileDims { plus: e.plus, zero: e.zero, minus: e.minus },
                        ))
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                GroupDescriptor::Explicit(ExplicitGroup {
                    profile: FiltrationProfile::new(entries)?,
                    kind: match max_torus_dim {
                        Some(m) => ExplicitKind::Torus { max_torus_dim: *m },
                        None => ExplicitKind::Other,
                    },
                    invertible: *invertible,
                })
            }
        };
        g.validate()?;
        Ok(g)
    }

    pub fn from_descriptor(g: &GroupDescriptor) -> Self {
        use GroupDescriptor as D;
        match g {
            D::InducedTorus { e: 1, f } => GroupJson::SplitTorus { n: *f },
            D::InducedTorus { e, f } => GroupJson::InducedTorus { e: *e, f: *f },
            D::ExactSeqQuotient { sub, total } => GroupJson::ExactSeqQuotient {
                sub: Box::new(Self::from_descriptor(sub)),
                total: Box::new(Self::from_descriptor(total)),
            },
            D::DirectSum(items) => GroupJson::DirectSum { summands: items.iter().map(Self::from_descriptor).collect() },
            D::BaseChange { inner, d0 } => GroupJson::BaseChange { inner: Box::new(Self::from_descriptor(inner)), d0: *d0 },
            D::Nu1 { r, p } => GroupJson::Nu1 { r: *r, p: *p },
            D::AbelianTotallyMultiplicative { torus } => {
                GroupJson::AbelianTotallyMultiplicative { torus: Box::new(Self::from_descriptor(torus)) }
            }
            D::Explicit(ex) => GroupJson::Explicit {
                profile: ex
                    .profile
                    .entries()
                    .iter()
                    .map(|(j, d)| ProfileEntryJson { jump: format_rational(j), plus: d.plus, zero: d.zero, minus: d.minus })
                    .collect(),
                max_torus_dim: match ex.kind {
                    ExplicitKind::Torus { max_torus_dim } => Some(max_torus_dim),
                    ExplicitKind::Other => None,
                },
                invertible: ex.invertible,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FiniteGroupJson {
    Cyclic { n: usize },
    Dihedral { n: usize },
    Symmetric { n: usize },
    /// Permutations of `0..k` in image notation; the group they generate.
    Permutations { generators: Vec<Vec<usize>> },
    MulTable { table: Vec<Vec<usize>> },
    Product { factors: Vec<FiniteGroupJson> },
}

impl FiniteGroupJson {
    pub fn build(&self) -> Result<FiniteGroup, CliError> {
        Ok(match self {
            FiniteGroupJson::Cyclic { n } if *n >= 1 => FiniteGroup::cyclic(*n),
            FiniteGroupJson::Dihedral { n } if *n >= 1 => FiniteGroup::dihedral(*n),
            FiniteGroupJson::Symmetric { n } if *n >= 1 => FiniteGroup::symmetric(*n),
            FiniteGroupJson::Permutations { generators } => FiniteGroup::from_permutations(generators)?,
            FiniteGroupJson::MulTable { table } => FiniteGroup::from_mul_table(table.clone())?,
            FiniteGroupJson::Product { factors } => {
                let mut it = factors.iter();
                let first = it
                    .next()
                    .ok_or_else(|| CliError::Descriptor("empty product of groups".into()))?
                    .build()?;
                it.try_fold(first, |acc, f| Ok::<_, CliError>(acc.direct_product(&f.build()?)))?
            }
            _ => return Err(CliError::Descriptor("group parameter must be positive".into())),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LatticeJson {
    Trivial { rank: usize },
    Regular,
    /// `ℤ[G/H]` for `H` given by its elements.
    Permutation { subgroup: Vec<usize> },
    AugmentationIdeal { subgroup: Vec<usize> },
    NormQuotient { subgroup: Vec<usize> },
    /// Rank-one lattice; `signs[g] = ±1`.
    Character { signs: Vec<i64> },
    /// Images of the listed elements; the rest is generated.
    Generators { rank: usize, generators: Vec<GeneratorJson> },
    /// One matrix per group element, in element order.
    Action { matrices: Vec<Vec<Vec<i64>>> },
    DirectSum { summands: Vec<LatticeJson> },
    Dual { inner: Box<LatticeJson> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorJson {
    pub element: usize,
    pub matrix: Vec<Vec<i64>>,
}

fn imat(rows: &[Vec<i64>]) -> Result<IMat, CliError> {
    if rows.iter().any(|r| r.len() != rows.first().map_or(0, Vec::len)) {
        return Err(CliError::Descriptor("ragged matrix".into()));
    }
    let wide: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    Ok(IMat::from_rows(&wide))
}

impl LatticeJson {
    pub fn build(&self, group: &FiniteGroup) -> Result<GLattice, CliError> {
        let sub = |elems: &[usize]| group.subgroup(elems).map_err(CliError::from);
        Ok(match self {
            LatticeJson::Trivial { rank } => GLattice::trivial(group, *rank),
            LatticeJson::Regular => GLattice::regular(group),
            LatticeJson::Permutation { subgroup } => GLattice::permutation(group, &sub(subgroup)?),
            LatticeJson::AugmentationIdeal { subgroup } => GLattice::augmentation_ideal(group, &sub(subgroup)?),
            LatticeJson::NormQuotient { subgroup } => GLattice::norm_quotient(group, &sub(subgroup)?),
            LatticeJson::Character { signs } => {
                if signs.len() != group.order() {
                    return Err(CliError::Descriptor("one sign per group element is required".into()));
                }
                GLattice::character(group, |g| signs[g] as i128)?
            }
            LatticeJson::Generators { rank, generators } => {
                let gens = generators
                    .iter()
                    .map(|g| Ok((g.element, imat(&g.matrix)?)))
                    .collect::<Result<Vec<_>, CliError>>()?;
                GLattice::from_generators(group, *rank, &gens)?
            }
            LatticeJson::Action { matrices } => {
                let mats = matrices.iter().map(|m| imat(m)).collect::<Result<Vec<_>, _>>()?;
                GLattice::from_action(group, mats, Provenance::General)?
            }
            LatticeJson::DirectSum { summands } => {
                let mut it = summands.iter();
                let first = it
                    .next()
                    .ok_or_else(|| CliError::Descriptor("empty direct sum".into()))?
                    .build(group)?;
                it.try_fold(first, |acc, s| Ok::<_, CliError>(acc.direct_sum(&s.build(group)?)))?
            }
            LatticeJson::Dual { inner } => inner.build(group)?.dual(group),
        })
    }
}

/// A group with a lattice on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GLatticeJson {
    pub group: FiniteGroupJson,
    pub lattice: LatticeJson,
}

impl GLatticeJson {
    pub fn build(&self) -> Result<(FiniteGroup, GLattice), CliError> {
        let g = self.group.build()?;
        let l = self.lattice.build(&g)?;
        Ok((g, l))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantJson {
    Torus,
    Abelian,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentJson {
    /// `d′ = gcd(d, δ)`.
    pub d: u64,
    pub torus_rank: u64,
    pub comp_count: u64,
}

/// Either explicit component data or a character lattice of `ℤ/δ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZetaInputJson {
    pub group: GroupJson,
    pub p: u64,
    #[serde(default)]
    pub delta: Option<u64>,
    #[serde(default = "default_variant")]
    pub variant: VariantJson,
    #[serde(default)]
    pub components: Option<Vec<ComponentJson>>,
    /// Character lattice of the cyclic group of order `δ`.
    #[serde(default)]
    pub character_lattice: Option<LatticeJson>,
}

fn default_variant() -> VariantJson {
    VariantJson::Torus
}

impl ZetaInputJson {
    pub fn build(&self) -> Result<ZetaInput, CliError> {
        let group = self.group.to_descriptor()?;
        match (&self.components, &self.character_lattice) {
            (Some(_), Some(_)) | (None, None) => Err(CliError::Descriptor(
                "give exactly one of `components` and `character_lattice`".into(),
            )),
            (None, Some(lat)) => {
                if self.variant != VariantJson::Torus {
                    return Err(CliError::Descriptor("a character lattice fixes torus data only".into()));
                }
                let delta = self
                    .delta
                    .ok_or_else(|| CliError::Descriptor("`delta` is required with a character lattice".into()))?;
                let gal = FiniteGroup::cyclic(delta as usize);
                let x = lat.build(&gal)?;
                Ok(ZetaInput::from_character_lattice(group, self.p, &x)?)
            }
            (Some(comps), None) => {
                let mut map = BTreeMap::new();
                for c in comps {
                    let data = ComponentData { torus_rank: c.torus_rank, comp_count: c.comp_count };
                    if map.insert(c.d, data).is_some() {
                        return Err(CliError::Descriptor(format!("component data for d′ = {} given twice", c.d)));
                    }
                }
                let variant = match self.variant {
                    VariantJson::Torus => ZetaVariant::Torus,
                    VariantJson::Abelian => ZetaVariant::Abelian,
                };
                Ok(ZetaInput::new(group, self.p, self.delta.unwrap_or(1), variant, map.into_iter().collect())?)
            }
        }
    }

    /// The explicit-component form of a built input.
    pub fn from_input(z: &ZetaInput) -> Self {
        ZetaInputJson {
            group: GroupJson::from_descriptor(z.group()),
            p: z.p(),
            delta: Some(z.delta()),
            variant: match z.variant() {
                ZetaVariant::Torus => VariantJson::Torus,
                ZetaVariant::Abelian => VariantJson::Abelian,
            },
            components: Some(
                z.components()
                    .iter()
                    .map(|(d, c)| ComponentJson { d: *d, torus_rank: c.torus_rank, comp_count: c.comp_count })
                    .collect(),
            ),
            character_lattice: None,
        }
    }
}

/// Reads a JSON file, naming the file in the error.
pub fn read_json<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Descriptor(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptor_round_trip() {
        let text = r#"{"kind":"exact_seq_quotient","sub":{"kind":"split_torus","n":1},
                       "total":{"kind":"induced_torus","e":2,"f":1}}"#;
        let j: GroupJson = serde_json::from_str(text).unwrap();
        let g = j.to_descriptor().unwrap();
        assert_eq!(GroupJson::from_descriptor(&g), j);
        let back: GroupJson = serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap();
        assert_eq!(back.to_descriptor().unwrap(), g);
    }

    #[test]
    fn explicit_profile_json() {
        let text = r#"{"kind":"explicit","profile":[
            {"jump":"0","plus":3,"zero":3,"minus":2},
            {"jump":"1/3","plus":2,"zero":1,"minus":0}]}"#;
        let j: GroupJson = serde_json::from_str(text).unwrap();
        let g = j.to_descriptor().unwrap();
        assert_eq!(g.dimension(), 3);
        assert_eq!(GroupJson::from_descriptor(&g), j);
    }

    #[test]
    fn rejects_unknown_kinds_and_fields() {
        assert!(serde_json::from_str::<GroupJson>(r#"{"kind":"torus"}"#).is_err());
        assert!(serde_json::from_str::<GroupJson>(r#"{"kind":"induced_torus","e":2,"f":1,"x":0}"#).is_err());
        let bad: GroupJson = serde_json::from_str(r#"{"kind":"induced_torus","e":0,"f":1}"#).unwrap();
        assert!(bad.to_descriptor().is_err());
    }

    #[test]
    fn lattice_json() {
        let text = r#"{"group":{"kind":"cyclic","n":4},"lattice":{"kind":"norm_quotient","subgroup":[0]}}"#;
        let j: GLatticeJson = serde_json::from_str(text).unwrap();
        let (g, l) = j.build().unwrap();
        assert_eq!((g.order(), l.rank()), (4, 3));
        let sum = r#"{"group":{"kind":"product","factors":[{"kind":"cyclic","n":2},{"kind":"cyclic","n":2}]},
                     "lattice":{"kind":"direct_sum","summands":[{"kind":"regular"},{"kind":"trivial","rank":2}]}}"#;
        let (_, l) = serde_json::from_str::<GLatticeJson>(sum).unwrap().build().unwrap();
        assert_eq!(l.rank(), 6);
    }

    #[test]
    fn zeta_input_json() {
        let text = r#"{"group":{"kind":"induced_torus","e":2,"f":1},"p":3,"delta":2,
                       "character_lattice":{"kind":"regular"}}"#;
        let z = serde_json::from_str::<ZetaInputJson>(text).unwrap().build().unwrap();
        let explicit = ZetaInputJson::from_input(&z);
        assert_eq!(explicit.build().unwrap(), z);
        let both = r#"{"group":{"kind":"split_torus","n":1},"p":3,"components":[],"character_lattice":{"kind":"regular"}}"#;
        assert!(serde_json::from_str::<ZetaInputJson>(both).unwrap().build().is_err());
    }
}
