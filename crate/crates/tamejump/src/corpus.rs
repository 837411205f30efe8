//! Named example inputs used by the acceptance suite and `--corpus`.

use std::collections::BTreeMap;

use tamejump_core::glattice::{FiniteGroup, GLattice, Subgroup};
use tamejump_core::jumps::{ExplicitGroup, ExplicitKind, FiltrationProfile, GroupDescriptor, JumpMultiset};
use tamejump_core::zeta::{ComponentData, ZetaInput, ZetaVariant};
use tamejump_core::Rational;

type G = GroupDescriptor;

#[derive(Clone, Debug)]
pub struct CorpusGroup {
    pub name: &'static str,
    pub group: GroupDescriptor,
    pub p: u64,
}

/// `(Res_{L/K} G_m)/(Res_{F/K} G_m)`, `[L:F] = [F:K] = 2`, totally ramified.
pub fn t1() -> GroupDescriptor {
    G::quotient(G::induced(2, 1), G::induced(4, 1))
}

/// `(Res_{F/K} G_m)/G_m`, `F/K` totally ramified quadratic.
pub fn t2() -> GroupDescriptor {
    G::quotient(G::split_torus(1), G::induced(2, 1))
}

/// A group with jumps `{0:1, 1/3:2}` whose filtration drops by one
/// dimension at `1/3` from the left.
pub fn explicit_example() -> GroupDescriptor {
    let third = Rational::new(1, 3);
    let jumps = JumpMultiset::new([(Rational::from_integer(0), 1), (third, 2)]).expect("valid jumps");
    let profile = FiltrationProfile::from_jumps(&jumps, &[(third, 1)]).expect("valid profile");
    G::Explicit(ExplicitGroup { profile, kind: ExplicitKind::Other, invertible: false })
}

pub fn groups() -> Vec<CorpusGroup> {
    let entry = |name, group, p| CorpusGroup { name, group, p };
    vec![
        entry("split_gm", G::split_torus(1), 2),
        entry("induced_2_3", G::induced(2, 3), 3),
        entry("induced_3_2", G::induced(3, 2), 5),
        entry("induced_6_1", G::induced(6, 1), 5),
        entry("t1", t1(), 2),
        entry("t2", t2(), 2),
        entry("norm_one_cubic", G::quotient(G::split_torus(1), G::induced(3, 1)), 2),
        entry("nu1_2_3", G::Nu1 { r: 2, p: 3 }, 3),
        entry("nu1_1_5", G::Nu1 { r: 1, p: 5 }, 5),
        entry("base_change_4_1_by_2", G::base_change(G::induced(4, 1), 2), 3),
        entry("sum_induced_nu1", G::DirectSum(vec![G::induced(3, 1), G::Nu1 { r: 1, p: 2 }]), 2),
        entry("explicit_third", explicit_example(), 5),
        entry("tate_curve", G::abelian(G::split_torus(1)), 5),
        entry("zero", G::zero(), 3),
    ]
}

pub fn group(name: &str) -> Option<CorpusGroup> {
    groups().into_iter().find(|g| g.name == name)
}

#[derive(Clone, Debug)]
pub struct CorpusZeta {
    pub name: &'static str,
    pub input: ZetaInput,
}

fn components(entries: &[(u64, u64, u64)]) -> BTreeMap<u64, ComponentData> {
    entries
        .iter()
        .map(|&(d, t, c)| (d, ComponentData { torus_rank: t, comp_count: c }))
        .collect()
}

/// `f` copies of the regular lattice of `ℤ/e`.
fn induced_input(e: u64, f: u64, p: u64) -> ZetaInput {
    let gal = FiniteGroup::cyclic(e as usize);
    let reg = GLattice::regular(&gal);
    let x = (1..f).fold(reg.clone(), |acc, _| acc.direct_sum(&reg));
    ZetaInput::from_character_lattice(G::induced(e, f), p, &x).expect("induced torus zeta input")
}

pub fn zeta_inputs() -> Vec<CorpusZeta> {
    let quad = FiniteGroup::cyclic(2);
    let sign = GLattice::augmentation_ideal(&quad, &quad.trivial_subgroup());
    let cubic = FiniteGroup::cyclic(3);
    let aug3 = GLattice::augmentation_ideal(&cubic, &cubic.trivial_subgroup());
    let build = |r: Result<ZetaInput, _>| r.expect("corpus zeta input");
    vec![
        CorpusZeta {
            name: "split_gm",
            input: build(ZetaInput::new(G::split_torus(1), 2, 1, ZetaVariant::Torus, components(&[(1, 1, 1)]))),
        },
        CorpusZeta { name: "induced_2_1", input: induced_input(2, 1, 3) },
        CorpusZeta { name: "induced_2_3", input: induced_input(2, 3, 5) },
        CorpusZeta { name: "induced_3_1", input: induced_input(3, 1, 2) },
        CorpusZeta { name: "induced_6_1", input: induced_input(6, 1, 5) },
        CorpusZeta {
            name: "quadratic_quotient",
            input: build(ZetaInput::from_character_lattice(t2(), 3, &sign)),
        },
        CorpusZeta {
            name: "norm_one_cubic",
            input: build(ZetaInput::from_character_lattice(
                G::quotient(G::split_torus(1), G::induced(3, 1)),
                2,
                &aug3,
            )),
        },
        CorpusZeta {
            name: "nu1_2_2",
            input: build(ZetaInput::new(G::Nu1 { r: 2, p: 2 }, 2, 1, ZetaVariant::Torus, components(&[(1, 0, 1)]))),
        },
        CorpusZeta {
            name: "tate_curve",
            input: build(ZetaInput::new(
                G::abelian(G::split_torus(1)),
                5,
                1,
                ZetaVariant::Abelian,
                components(&[(1, 1, 3)]),
            )),
        },
        CorpusZeta {
            name: "twisted_tate_curve",
            input: build(ZetaInput::new(
                G::abelian(t2()),
                3,
                2,
                ZetaVariant::Abelian,
                components(&[(1, 0, 4), (2, 1, 6)]),
            )),
        },
        CorpusZeta {
            name: "zero",
            input: build(ZetaInput::new(G::zero(), 3, 1, ZetaVariant::Torus, components(&[(1, 0, 1)]))),
        },
    ]
}

pub fn zeta_input(name: &str) -> Option<ZetaInput> {
    zeta_inputs().into_iter().find(|z| z.name == name).map(|z| z.input)
}

#[derive(Clone, Debug)]
pub struct CorpusFiniteGroup {
    pub name: &'static str,
    pub group: FiniteGroup,
}

pub fn finite_groups() -> Vec<CorpusFiniteGroup> {
    let alt4 = FiniteGroup::from_permutations(&[vec![1, 2, 0, 3], vec![1, 0, 3, 2]]).expect("A4");
    let quaternion = FiniteGroup::from_permutations(&[
        vec![1, 2, 3, 0, 5, 6, 7, 4],
        vec![4, 7, 6, 5, 2, 1, 0, 3],
    ])
    .expect("Q8");
    let c2 = FiniteGroup::cyclic(2);
    vec![
        CorpusFiniteGroup { name: "C2", group: c2.clone() },
        CorpusFiniteGroup { name: "C3", group: FiniteGroup::cyclic(3) },
        CorpusFiniteGroup { name: "C4", group: FiniteGroup::cyclic(4) },
        CorpusFiniteGroup { name: "V4", group: c2.direct_product(&c2) },
        CorpusFiniteGroup { name: "C6", group: FiniteGroup::cyclic(6) },
        CorpusFiniteGroup { name: "S3", group: FiniteGroup::symmetric(3) },
        CorpusFiniteGroup { name: "D4", group: FiniteGroup::dihedral(4) },
        CorpusFiniteGroup { name: "Q8", group: quaternion },
        CorpusFiniteGroup { name: "C2^3", group: c2.direct_product(&c2).direct_product(&c2) },
        CorpusFiniteGroup { name: "A4", group: alt4 },
        CorpusFiniteGroup { name: "D6", group: FiniteGroup::dihedral(6) },
    ]
}

/// Lattices built on `g`: `(name, lattice, is a permutation lattice)`.
pub fn lattices(g: &FiniteGroup) -> Vec<(String, GLattice, bool)> {
    let subgroups: Vec<Subgroup> = g.subgroups().expect("corpus groups are small");
    let mut out = vec![
        ("trivial".to_string(), GLattice::trivial(g, 1), true),
        ("regular".to_string(), GLattice::regular(g), true),
    ];
    for (i, h) in subgroups.iter().enumerate() {
        if h.order() == g.order() {
            continue;
        }
        out.push((format!("Z[G/H{i}]"), GLattice::permutation(g, h), true));
        out.push((format!("I[G/H{i}]"), GLattice::augmentation_ideal(g, h), false));
        out.push((format!("J[G/H{i}]"), GLattice::norm_quotient(g, h), false));
    }
    let trivial = g.trivial_subgroup();
    let j = GLattice::norm_quotient(g, &trivial);
    out.push(("J[G]^dual".to_string(), j.dual(g), false));
    out.push(("Z+I[G]".to_string(), GLattice::trivial(g, 1).direct_sum(&GLattice::augmentation_ideal(g, &trivial)), false));
    out
}
