use super::*;
use crate::glattice::{FiniteGroup, GLattice};
use alloc::string::ToString;
use alloc::vec;
use proptest::prelude::*;

type G = GroupDescriptor;

fn data(entries: &[(u64, u64, u64)]) -> BTreeMap<u64, ComponentData> {
    entries
        .iter()
        .map(|&(k, t, c)| (k, ComponentData { torus_rank: t, comp_count: c }))
        .collect()
}

fn split_gm() -> ZetaInput {
    ZetaInput::new(G::split_torus(1), 2, 1, ZetaVariant::Torus, data(&[(1, 1, 1)])).unwrap()
}

fn induced(e: u64, p: u64) -> ZetaInput {
    let gal = FiniteGroup::cyclic(e as usize);
    ZetaInput::from_character_lattice(G::induced(e, 1), p, &GLattice::regular(&gal)).unwrap()
}

/// `Res_{L/K} G_m / G_m` for `L/K` quadratic, `p = 3`.
fn quadratic_quotient() -> ZetaInput {
    let gal = FiniteGroup::cyclic(2);
    let x = GLattice::augmentation_ideal(&gal, &gal.trivial_subgroup());
    ZetaInput::from_character_lattice(G::quotient(G::split_torus(1), G::induced(2, 1)), 3, &x).unwrap()
}

fn nu1() -> ZetaInput {
    ZetaInput::new(G::Nu1 { r: 2, p: 2 }, 2, 1, ZetaVariant::Torus, data(&[(1, 0, 1)])).unwrap()
}

/// A Tate curve with `v(q) = 3`.
fn tate_curve() -> ZetaInput {
    ZetaInput::new(G::abelian(G::split_torus(1)), 5, 1, ZetaVariant::Abelian, data(&[(1, 1, 3)])).unwrap()
}

/// Its quadratic twist: additive over odd `d`, split over even `d`.
fn twisted_tate_curve() -> ZetaInput {
    let torus = G::quotient(G::split_torus(1), G::induced(2, 1));
    ZetaInput::new(G::abelian(torus), 3, 2, ZetaVariant::Abelian, data(&[(1, 0, 4), (2, 1, 6)])).unwrap()
}

fn zero_group() -> ZetaInput {
    ZetaInput::new(G::zero(), 3, 1, ZetaVariant::Torus, data(&[(1, 0, 1)])).unwrap()
}

fn corpus() -> Vec<ZetaInput> {
    vec![
        split_gm(),
        induced(2, 3),
        induced(3, 2),
        induced(4, 3),
        quadratic_quotient(),
        nu1(),
        tate_curve(),
        twisted_tate_curve(),
        zero_group(),
    ]
}

fn lm1() -> LPolynomial {
    LPolynomial::l_minus_one_pow(1)
}

#[test]
fn split_torus_coefficients() {
    let s = zeta_truncated(&split_gm(), 10).unwrap();
    for d in 0..=10 {
        let want = if d % 2 == 1 { lm1() } else { LPolynomial::zero() };
        assert_eq!(s.coefficient(d), want, "d={d}");
    }
    assert!(s.to_string().starts_with("(𝐋−1)x + (𝐋−1)x³ + "));
}

#[test]
fn quadratic_induced_torus_coefficients() {
    let z = induced(2, 3);
    assert_eq!(z.torus_rank(5), 1);
    assert_eq!(z.torus_rank(4), 2);
    assert_eq!(z.comp_count(5), 1);
    assert_eq!(z.coefficient(5).unwrap(), lm1().shift(3));
    assert!(z.coefficient(3).is_err());
    assert!(zeta_truncated(&z, 12).unwrap().coefficient(9).is_zero());
}

#[test]
fn quadratic_induced_closed_form() {
    let z = induced(2, 3);
    let closed = zeta_closed_form(&z).unwrap();
    assert!(!closed.tails.is_empty());
    for t in &closed.tails {
        assert_eq!((t.a, t.b, t.power), (3, 6, 1));
    }
    assert!(verify_rationality(&z, 60).unwrap().agrees());
}

#[test]
fn zero_dimensional_group() {
    let z = zero_group();
    let closed = zeta_closed_form(&z).unwrap();
    assert!(closed.prefix.is_empty());
    assert_eq!(closed.tails.len(), 2);
    for t in &closed.tails {
        assert_eq!((t.a, t.b), (0, 3));
        assert_eq!(t.coeff, LPolynomial::one());
    }
    let s = zeta_truncated(&z, 20).unwrap();
    for d in 1..=20 {
        assert_eq!(s.coefficient(d).is_zero(), d % 3 == 0);
    }
}

#[test]
fn character_lattice_data() {
    let z = quadratic_quotient();
    assert_eq!(z.components(), &data(&[(1, 0, 2), (2, 1, 1)]));
    assert_eq!(z.coefficient(1).unwrap(), LPolynomial::constant(2).shift(1 + z_ord(&z, 1)));
    let z3 = induced(3, 2);
    assert_eq!(z3.components(), &data(&[(1, 1, 1), (3, 3, 1)]));
}

fn z_ord(z: &ZetaInput, d: u64) -> u64 {
    jumps::ord(z.group(), d, z.p()).unwrap()
}

#[test]
fn abelian_component_law() {
    let z = tate_curve();
    for d in [1u64, 2, 3, 4, 6, 7] {
        assert_eq!(z.comp_count(d), 3 * d);
    }
    let w = twisted_tate_curve();
    assert_eq!(w.comp_count(5), 4);
    assert_eq!(w.comp_count(4), 12);
    assert_eq!(w.torus_rank(5), 0);
    let closed = zeta_closed_form(&z).unwrap();
    assert!(closed.tails.iter().any(|t| t.power == 2));
}

#[test]
fn every_corpus_entry_is_rational() {
    for z in corpus() {
        let check = verify_rationality(&z, 60).unwrap();
        assert!(check.agrees(), "{:?} mismatch at {:?}", z.group(), check.first_mismatch);
        let c = jumps::c_tame(z.group(), z.p()).unwrap();
        assert!(tails_match_c_tame(&zeta_closed_form(&z).unwrap(), c));
    }
}

#[test]
fn corrupted_tail_is_caught() {
    let z = induced(2, 3);
    let mut closed = zeta_closed_form(&z).unwrap();
    let truncated = zeta_truncated(&z, 60).unwrap();
    let first = closed.tails[0].alpha;
    closed.tails[0].a += 1;
    // The head term is unchanged; the next one in the class moves.
    assert_eq!(first_disagreement(&closed, &truncated, 60), Some(first + 6));
    assert_eq!(first_disagreement(&closed, &truncated, 0), None);
    assert!(verify_rationality(&z, 0).unwrap().agrees());
}

#[test]
fn invalid_inputs() {
    assert!(ZetaInput::new(G::split_torus(1), 4, 1, ZetaVariant::Torus, data(&[(1, 1, 1)])).is_err());
    assert!(ZetaInput::new(G::split_torus(1), 3, 3, ZetaVariant::Torus, data(&[(1, 1, 1)])).is_err());
    assert!(ZetaInput::new(G::split_torus(1), 3, 2, ZetaVariant::Torus, data(&[(1, 1, 1)])).is_err());
    assert!(ZetaInput::new(G::split_torus(1), 3, 1, ZetaVariant::Torus, data(&[(1, 2, 1)])).is_err());
    assert!(ZetaInput::new(G::split_torus(1), 3, 1, ZetaVariant::Abelian, data(&[(1, 1, 1)])).is_err());
}

#[test]
fn class_and_exponent_recurrences() {
    for z in corpus() {
        let n = jumps::threshold(z.group(), z.p()).unwrap();
        let period = z.period().unwrap();
        let step = (jumps::c_tame(z.group(), z.p()).unwrap() * Rational::from_integer(period as i64))
            .to_integer() as u64;
        for d in (n + 1)..(n + 30) {
            if d % z.p() != 0 {
                if z.variant() == ZetaVariant::Torus {
                    for q in 1..3 {
                        assert_eq!(z.class_at(d), z.class_at(d + q * z.delta()));
                    }
                }
                assert_eq!(z_ord(&z, d + period), z_ord(&z, d) + step);
            }
        }
    }
}

proptest! {
    #[test]
    fn induced_tori_are_rational(e in 1u64..7, p in prop::sample::select(vec![5u64, 7, 11])) {
        prop_assume!(e % p != 0);
        let z = induced(e, p);
        prop_assert!(verify_rationality(&z, 40).unwrap().agrees());
    }

    #[test]
    fn abelian_seeds_are_rational(t in 0u64..3, seed in 1u64..6, p in prop::sample::select(vec![2u64, 3, 5])) {
        let g = G::abelian(G::split_torus(2));
        let z = ZetaInput::new(g, p, 1, ZetaVariant::Abelian, data(&[(1, t, seed)])).unwrap();
        prop_assert!(verify_rationality(&z, 40).unwrap().agrees());
    }
}
