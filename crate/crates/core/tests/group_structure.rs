use std::collections::HashSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sz_ovoid::action::{closure, generator_perm, point_orbit, to_perm, GeneratorSet, PermElement};
use sz_ovoid::designs::SuzukiSetting;
use sz_ovoid::gf2m::{FieldElement, FieldParams};
use sz_ovoid::suzuki::{Generator, Ovoid, OvoidPoint};

fn e(b: u64) -> FieldElement {
    FieldElement::from_bits(b)
}

#[test]
fn m_semiregular_off_infinity_and_omega() {
    let ov = Ovoid::build(FieldParams::new(3).unwrap()).unwrap();
    let f = ov.field().clone();
    for k in f.nonzero().filter(|&k| k != FieldElement::ONE) {
        let p = generator_perm(&ov, &Generator::M(k)).unwrap();
        for i in 0..ov.len() as u32 {
            let fixed = p.apply(i) == i;
            assert_eq!(fixed, i == 0 || i as usize == ov.omega(), "m({k}) on {i}");
        }
    }
}

#[test]
fn q_regular_on_affine_points() {
    let ov = Ovoid::build(FieldParams::new(3).unwrap()).unwrap();
    let f = ov.field().clone();
    for x in f.elements() {
        for y in f.elements() {
            if x.is_zero() && y.is_zero() {
                continue;
            }
            let p = generator_perm(&ov, &Generator::S(x, y)).unwrap();
            assert_eq!(p.fixed_points(), 1, "s({x},{y})");
            assert_eq!(p.apply(0), 0);
        }
    }
    let omega_orbit: HashSet<usize> = f
        .elements()
        .flat_map(|x| f.elements().map(move |y| (x, y)))
        .map(|(x, y)| ov.index(ov.act_fast(OvoidPoint::Affine(e(0), e(0)), &Generator::S(x, y)).unwrap()))
        .collect();
    assert_eq!(omega_orbit.len(), 64);
    assert!(!omega_orbit.contains(&0));
}

#[test]
fn closure_is_closed_under_products_and_inverses() {
    let s = SuzukiSetting::new(8, None).unwrap();
    let group = closure(s.gens(), 1 << 16).unwrap();
    let set: HashSet<&PermElement> = group.iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..2000 {
        let a = &group[rng.gen_range(0..group.len())];
        let b = &group[rng.gen_range(0..group.len())];
        assert!(set.contains(&a.then(b)));
        assert!(set.contains(&a.inverse()));
    }
}

#[test]
fn generator_consistency_sampled_q32() {
    let ov = Ovoid::build(FieldParams::new(5).unwrap()).unwrap();
    let f = ov.field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 0..10_000 {
        let g = match n % 3 {
            0 => Generator::S(e(rng.gen_range(0..32)), e(rng.gen_range(0..32))),
            1 => Generator::M(e(rng.gen_range(1..32))),
            _ => Generator::Tau,
        };
        let i = rng.gen_range(0..ov.len());
        let fast = ov.index(ov.act_fast(ov.point(i), &g).unwrap());
        assert_eq!(fast, ov.act_matrix(i, &g.matrix(&f).unwrap()).unwrap(), "{g} on {i}");
    }
}

#[test]
fn transitivity_q32() {
    let s = SuzukiSetting::new(32, None).unwrap();
    assert_eq!(point_orbit(0, s.gens()).len(), 1025);
    let h = GeneratorSet::h(s.ovoid()).unwrap();
    assert_eq!(point_orbit(0, &h), vec![0]);
    assert_eq!(point_orbit(s.ovoid().omega(), &h).len(), 1024);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn perm_of_product_is_product_of_perms(
        a in (0u64..32, 0u64..32, 1u64..32, any::<bool>()),
        b in (0u64..32, 0u64..32, 1u64..32, any::<bool>()),
    ) {
        let ov = Ovoid::build(FieldParams::new(5).unwrap()).unwrap();
        let f = ov.field().clone();
        let word = |(x, y, k, t): (u64, u64, u64, bool)| {
            let mut m = Generator::S(e(x), e(y)).matrix(&f).unwrap().mul(&Generator::M(e(k)).matrix(&f).unwrap(), &f);
            if t {
                m = m.mul(&Generator::Tau.matrix(&f).unwrap(), &f);
            }
            m
        };
        let (g, h) = (word(a), word(b));
        let lhs = to_perm(&ov, &g.mul(&h, &f)).unwrap();
        let rhs = to_perm(&ov, &g).unwrap().then(&to_perm(&ov, &h).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}
