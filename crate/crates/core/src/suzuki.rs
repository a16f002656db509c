//! Generators of Sz(q), the Suzuki–Tits ovoid, and the subgroups Q, Q0, M,
//! H and K.
//!
//! Ovoid indexing: index 0 is the point at infinity `[1,0,0,0]`; affine point
//! `p(a, b)` sits at `1 + a·q + b`, reading field elements as integers.

use std::collections::HashMap;
use std::fmt;

use crate::action::{point_orbit, GeneratorSet};
use crate::error::{Error, Result};
use crate::gf2m::{FieldElement, FieldParams};
use crate::pg3::{act, Mat4, ProjPoint};

/// `x^(1+theta)`.
fn pow_one_plus_theta(f: &FieldParams, x: FieldElement) -> FieldElement {
    f.mul(x, f.theta(x))
}

/// The lower unitriangular generator `s(x, y)` of Q.
///
/// Entry (4,1) is `x^(2+theta) + x·y + y^theta`: the last row of `s(x,y)` is
/// the image of `[0,0,0,1]`, which must be the ovoid point
/// `p(x, x^(1+theta) + y)`.
pub fn gen_s(f: &FieldParams, x: FieldElement, y: FieldElement) -> Mat4 {
    let x1t = pow_one_plus_theta(f, x);
    let x2t = f.mul(x, x1t);
    let terms = [
        (x, 2, 1),
        (y, 3, 1),
        (f.theta(x), 3, 2),
        (f.add(f.add(x2t, f.mul(x, y)), f.theta(y)), 4, 1),
        (f.add(x1t, y), 4, 2),
        (x, 4, 3),
    ];
    terms.iter().fold(Mat4::identity(), |acc, &(c, i, j)| {
        acc.add(&Mat4::unit(i, j).scale(c, f), f)
    })
}

/// The diagonal generator `m(k) = diag(k^(1+2^n), k^(2^n), k^(-2^n), k^(-1-2^n))`.
pub fn gen_m(f: &FieldParams, kappa: FieldElement) -> Result<Mat4> {
    let h = f.half_r_exp() as i64;
    let diag = [
        f.pow(kappa, 1 + h)?,
        f.pow(kappa, h)?,
        f.pow(kappa, -h)?,
        f.pow(kappa, -1 - h)?,
    ];
    Ok(diag.iter().enumerate().fold(Mat4::zero(), |acc, (i, &d)| {
        acc.add(&Mat4::unit(i + 1, i + 1).scale(d, f), f)
    }))
}

/// The involution `tau = e14 + e23 + e32 + e41`.
pub fn gen_tau() -> Mat4 {
    let mut t = [[FieldElement::ZERO; 4]; 4];
    for i in 0..4 {
        t[i][3 - i] = FieldElement::ONE;
    }
    Mat4::from_rows(t)
}

/// `p(a, b) = [a^(2+theta) + a·b + b^theta, b, a, 1]`.
pub fn point_p(f: &FieldParams, alpha: FieldElement, beta: FieldElement) -> ProjPoint {
    let a2t = f.mul(f.square(alpha), f.theta(alpha));
    let first = f.add(f.add(a2t, f.mul(alpha, beta)), f.theta(beta));
    ProjPoint::new(f, [first, beta, alpha, FieldElement::ONE]).expect("last coordinate is 1")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OvoidPoint {
    Infinity,
    Affine(FieldElement, FieldElement),
}

/// A generator of Sz(q) described by its kind and parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    S(FieldElement, FieldElement),
    M(FieldElement),
    Tau,
}

impl Generator {
    pub fn matrix(&self, f: &FieldParams) -> Result<Mat4> {
        match *self {
            Generator::S(x, y) => Ok(gen_s(f, x, y)),
            Generator::M(k) => gen_m(f, k),
            Generator::Tau => Ok(gen_tau()),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::S(x, y) => write!(f, "s({x},{y})"),
            Generator::M(k) => write!(f, "m({k})"),
            Generator::Tau => write!(f, "tau"),
        }
    }
}

/// The q²+1 points of the Suzuki–Tits ovoid.
#[derive(Clone, Debug)]
pub struct Ovoid {
    field: FieldParams,
    points: Vec<OvoidPoint>,
    proj: Vec<ProjPoint>,
    index_of: HashMap<ProjPoint, u32>,
}

impl Ovoid {
    pub fn build(field: FieldParams) -> Result<Self> {
        let q = field.q() as usize;
        let v = q * q + 1;
        let mut points = Vec::with_capacity(v);
        let mut proj = Vec::with_capacity(v);
        points.push(OvoidPoint::Infinity);
        proj.push(ProjPoint::from_bits(&field, [1, 0, 0, 0])?);
        for a in field.elements() {
            for b in field.elements() {
                points.push(OvoidPoint::Affine(a, b));
                proj.push(point_p(&field, a, b));
            }
        }
        let mut index_of = HashMap::with_capacity(v);
        for (i, p) in proj.iter().enumerate() {
            if index_of.insert(*p, i as u32).is_some() {
                return Err(Error::Verification(format!("duplicate ovoid point {p:?}")));
            }
        }
        Ok(Ovoid {
            field,
            points,
            proj,
            index_of,
        })
    }

    pub fn field(&self) -> &FieldParams {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.q()
    }

    /// Number of points, q²+1.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[OvoidPoint] {
        &self.points
    }

    pub fn proj(&self) -> &[ProjPoint] {
        &self.proj
    }

    pub fn point(&self, i: usize) -> OvoidPoint {
        self.points[i]
    }

    pub fn index_of(&self, p: &ProjPoint) -> Option<usize> {
        self.index_of.get(p).map(|&i| i as usize)
    }

    pub fn index(&self, p: OvoidPoint) -> usize {
        match p {
            OvoidPoint::Infinity => 0,
            OvoidPoint::Affine(a, b) => 1 + (a.bits() * self.q() + b.bits()) as usize,
        }
    }

    pub fn omega(&self) -> usize {
        self.index(OvoidPoint::Affine(FieldElement::ZERO, FieldElement::ZERO))
    }

    /// Image of point `i` under a matrix, via projective action and lookup.
    pub fn act_matrix(&self, i: usize, g: &Mat4) -> Result<usize> {
        let image = act(&self.field, &self.proj[i], g)?;
        self.index_of(&image).ok_or(Error::NotInOvoid)
    }

    /// Symbolic action for `s` and `m`; `tau` goes through the matrix.
    pub fn act_fast(&self, p: OvoidPoint, g: &Generator) -> Result<OvoidPoint> {
        let f = &self.field;
        Ok(match (*g, p) {
            (Generator::S(..) | Generator::M(_), OvoidPoint::Infinity) => OvoidPoint::Infinity,
            (Generator::S(x, y), OvoidPoint::Affine(a, b)) => {
                let b2 = [b, y, f.mul(a, f.theta(x)), pow_one_plus_theta(f, x)]
                    .into_iter()
                    .fold(FieldElement::ZERO, |s, t| f.add(s, t));
                OvoidPoint::Affine(f.add(a, x), b2)
            }
            (Generator::M(k), OvoidPoint::Affine(a, b)) => {
                if k.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                OvoidPoint::Affine(f.mul(a, k), f.mul(b, pow_one_plus_theta(f, k)))
            }
            (Generator::Tau, p) => self.point(self.act_matrix(self.index(p), &gen_tau())?),
        })
    }

    /// The sets Δ1 = {∞}, Δ2 = {p(0,b)}, Δ3 = {p(a,b) : a ≠ 0}, as sorted
    /// index lists.
    pub fn deltas(&self) -> [Vec<u32>; 3] {
        let f = &self.field;
        let d2 = f
            .elements()
            .map(|b| self.index(OvoidPoint::Affine(FieldElement::ZERO, b)) as u32)
            .collect();
        let d3 = f
            .nonzero()
            .flat_map(|a| f.elements().map(move |b| (a, b)))
            .map(|(a, b)| self.index(OvoidPoint::Affine(a, b)) as u32)
            .collect();
        [vec![0], d2, d3]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubgroupId {
    Q,
    Q0,
    M,
    H,
    K,
}

impl SubgroupId {
    pub fn expected_order(self, q: u64) -> u64 {
        match self {
            SubgroupId::Q => q * q,
            SubgroupId::Q0 => q,
            SubgroupId::M => q - 1,
            SubgroupId::H => q * q * (q - 1),
            SubgroupId::K => q * (q - 1),
        }
    }
}

/// Lists every element of a subgroup as a matrix. H and K are enumerated as
/// the products `s·m`.
pub fn enumerate_subgroup(f: &FieldParams, id: SubgroupId) -> Vec<Mat4> {
    let ms: Vec<Mat4> = f.nonzero().map(|k| gen_m(f, k).expect("nonzero")).collect();
    let q_all = || {
        f.elements()
            .flat_map(move |x| f.elements().map(move |y| gen_s(f, x, y)))
    };
    let q0 = || f.elements().map(|y| gen_s(f, FieldElement::ZERO, y));
    let times_m = |s: Mat4| ms.iter().map(move |m| s.mul(m, f)).collect::<Vec<_>>();
    match id {
        SubgroupId::Q => q_all().collect(),
        SubgroupId::Q0 => q0().collect(),
        SubgroupId::M => ms.clone(),
        SubgroupId::H => q_all().flat_map(times_m).collect(),
        SubgroupId::K => q0().flat_map(times_m).collect(),
    }
}

/// Orbits of K on the ovoid, checked against Δ1, Δ2, Δ3.
pub fn k_orbits(ovoid: &Ovoid) -> Result<[Vec<u32>; 3]> {
    let gens = GeneratorSet::k(ovoid)?;
    let mut seen = vec![false; ovoid.len()];
    let mut orbits = Vec::new();
    for start in 0..ovoid.len() {
        if seen[start] {
            continue;
        }
        let orbit = point_orbit(start, &gens);
        for &i in &orbit {
            seen[i as usize] = true;
        }
        orbits.push(orbit);
    }
    if orbits.len() != 3 {
        return Err(Error::Verification(format!(
            "K has {} orbits on the ovoid, expected 3",
            orbits.len()
        )));
    }
    let expected = ovoid.deltas();
    let mut out: [Vec<u32>; 3] = Default::default();
    for (i, (orbit, want)) in orbits.into_iter().zip(expected).enumerate() {
        let mut want = want;
        want.sort_unstable();
        if orbit != want {
            return Err(Error::Verification(format!(
                "K-orbit {} has size {}, expected Δ{} of size {}",
                i + 1,
                orbit.len(),
                i + 1,
                want.len()
            )));
        }
        out[i] = orbit;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn gf8() -> FieldParams {
        FieldParams::new(3).unwrap()
    }

    fn e(b: u64) -> FieldElement {
        FieldElement::from_bits(b)
    }

    #[test]
    fn gen_s_entries() {
        let f = gf8();
        assert_eq!(gen_s(&f, e(0), e(0)), Mat4::identity());
        let (x, y) = (e(0b011), e(0b110));
        let s = gen_s(&f, x, y);
        assert_eq!(s.get(2, 1), x);
        assert_eq!(s.get(3, 1), y);
        assert_eq!(s.get(3, 2), f.theta(x));
        assert_eq!(s.get(4, 3), x);
        let x1t = f.mul(x, f.theta(x));
        assert_eq!(s.get(4, 2), f.add(x1t, y));
        let x2t = f.mul(x, x1t);
        assert_eq!(s.get(4, 1), f.add(f.add(x2t, f.mul(x, y)), f.theta(y)));
        for i in 1..=4 {
            assert_eq!(s.get(i, i), FieldElement::ONE);
            for j in i + 1..=4 {
                assert!(s.get(i, j).is_zero());
            }
        }
    }

    #[test]
    fn q_multiplication_law_gf8() {
        let f = gf8();
        for x in f.elements() {
            for y in f.elements() {
                let a = gen_s(&f, x, y);
                for z in f.elements() {
                    for t in f.elements() {
                        let rhs = gen_s(&f, f.add(x, z), f.add(f.add(y, t), f.mul(f.theta(x), z)));
                        assert_eq!(a.mul(&gen_s(&f, z, t), &f), rhs);
                    }
                }
            }
        }
    }

    /// With `x^(1+theta)` in entry (4,1) the multiplication law of Q fails
    /// and `s(1,0)` no longer maps the ovoid to itself.
    #[test]
    fn entry_41_needs_two_plus_theta() {
        let f = gf8();
        let literal = |x: FieldElement, y: FieldElement| {
            let x1t = f.mul(x, f.theta(x));
            let mut rows = *gen_s(&f, x, y).rows();
            rows[3][0] = f.add(f.add(x1t, f.mul(x, y)), f.theta(y));
            Mat4::from_rows(rows)
        };
        let law_holds = f.elements().all(|x| {
            f.elements().all(|z| {
                let lhs = literal(x, e(0)).mul(&literal(z, e(0)), &f);
                lhs == literal(f.add(x, z), f.mul(f.theta(x), z))
            })
        });
        assert!(!law_holds);
        let ov = Ovoid::build(f.clone()).unwrap();
        assert_eq!(ov.act_matrix(ov.omega(), &literal(e(0b010), e(0))), Err(Error::NotInOvoid));
    }

    #[test]
    fn q0_involutions_and_centre() {
        let f = gf8();
        for y in f.elements() {
            let s0 = gen_s(&f, e(0), y);
            assert_eq!(s0.mul(&s0, &f), Mat4::identity());
            for x in f.elements() {
                for z in f.elements() {
                    let s = gen_s(&f, x, z);
                    assert_eq!(s0.mul(&s, &f), s.mul(&s0, &f));
                    // involutions of Q lie in Q0
                    if x != e(0) {
                        assert_ne!(s.mul(&s, &f), Mat4::identity());
                    }
                }
            }
        }
    }

    #[test]
    fn commutators_generate_q0() {
        let f = gf8();
        let q0: HashSet<Mat4> = enumerate_subgroup(&f, SubgroupId::Q0).into_iter().collect();
        let q = enumerate_subgroup(&f, SubgroupId::Q);
        let mut comms = HashSet::new();
        for a in &q {
            let ai = a.inverse(&f).unwrap();
            for b in &q {
                let bi = b.inverse(&f).unwrap();
                let c = ai.mul(&bi, &f).mul(a, &f).mul(b, &f);
                assert!(q0.contains(&c));
                comms.insert(c);
            }
        }
        // close under products
        let mut span = comms.clone();
        loop {
            let next: HashSet<Mat4> = span
                .iter()
                .flat_map(|a| comms.iter().map(move |b| (a, b)))
                .map(|(a, b)| a.mul(b, &f))
                .chain(span.iter().copied())
                .collect();
            if next.len() == span.len() {
                break;
            }
            span = next;
        }
        assert_eq!(span, q0);
    }

    #[test]
    fn gen_m_examples() {
        let f = gf8();
        assert_eq!(gen_m(&f, FieldElement::ONE).unwrap(), Mat4::identity());
        assert_eq!(gen_m(&f, e(0)), Err(Error::DivisionByZero));
        for k in f.nonzero() {
            for mu in f.nonzero() {
                let lhs = gen_m(&f, k).unwrap().mul(&gen_m(&f, mu).unwrap(), &f);
                assert_eq!(lhs, gen_m(&f, f.mul(k, mu)).unwrap());
            }
        }
    }

    #[test]
    fn m_conjugation_law_gf8() {
        let f = gf8();
        for k in f.nonzero() {
            let m = gen_m(&f, k).unwrap();
            let mi = m.inverse(&f).unwrap();
            let k1t = f.mul(k, f.theta(k));
            for x in f.elements() {
                for y in f.elements() {
                    let lhs = mi.mul(&gen_s(&f, x, y), &f).mul(&m, &f);
                    assert_eq!(lhs, gen_s(&f, f.mul(x, k), f.mul(y, k1t)));
                }
            }
        }
    }

    #[test]
    fn point_p_examples() {
        let f = gf8();
        assert_eq!(point_p(&f, e(0), e(0)), ProjPoint::from_bits(&f, [0, 0, 0, 1]).unwrap());
        assert_eq!(point_p(&f, e(1), e(0)), ProjPoint::from_bits(&f, [1, 0, 1, 1]).unwrap());
        for b in f.elements() {
            let want = ProjPoint::new(&f, [f.theta(b), b, e(0), FieldElement::ONE]).unwrap();
            assert_eq!(point_p(&f, e(0), b), want);
        }
    }

    #[test]
    fn tau_swaps_infinity_and_omega() {
        let f = gf8();
        let ov = Ovoid::build(f).unwrap();
        assert_eq!(ov.act_matrix(ov.omega(), &gen_tau()).unwrap(), 0);
        assert_eq!(ov.act_matrix(0, &gen_tau()).unwrap(), ov.omega());
    }

    #[test]
    fn build_ovoid_sizes() {
        let ov = Ovoid::build(gf8()).unwrap();
        assert_eq!(ov.len(), 65);
        assert_eq!(ov.index_of(&point_p(ov.field(), e(0), e(0))), Some(1));
        assert_eq!(ov.omega(), 1);
        for (i, &p) in ov.points().iter().enumerate() {
            assert_eq!(ov.index(p), i);
            assert_eq!(ov.index_of(&ov.proj()[i]), Some(i));
        }
        let ov32 = Ovoid::build(FieldParams::new(5).unwrap()).unwrap();
        assert_eq!(ov32.len(), 1025);
    }

    #[test]
    fn act_fast_examples() {
        let f = gf8();
        let ov = Ovoid::build(f.clone()).unwrap();
        let origin = OvoidPoint::Affine(e(0), e(0));
        for b in f.elements() {
            assert_eq!(ov.act_fast(origin, &Generator::S(e(0), b)).unwrap(), OvoidPoint::Affine(e(0), b));
        }
        for a in f.nonzero() {
            for b in f.elements() {
                let p = ov.act_fast(OvoidPoint::Affine(e(1), e(0)), &Generator::M(a)).unwrap();
                let p = ov.act_fast(p, &Generator::S(e(0), b)).unwrap();
                assert_eq!(p, OvoidPoint::Affine(a, b));
            }
        }
        for x in f.elements() {
            for y in f.elements() {
                assert_eq!(ov.act_fast(OvoidPoint::Infinity, &Generator::S(x, y)).unwrap(), OvoidPoint::Infinity);
            }
        }
    }

    #[test]
    fn act_fast_matches_matrix_gf8_exhaustive() {
        let f = gf8();
        let ov = Ovoid::build(f.clone()).unwrap();
        let mut gens = vec![Generator::Tau];
        gens.extend(f.nonzero().map(Generator::M));
        for x in f.elements() {
            gens.extend(f.elements().map(|y| Generator::S(x, y)));
        }
        for g in &gens {
            let m = g.matrix(&f).unwrap();
            for (i, &p) in ov.points().iter().enumerate() {
                let fast = ov.index(ov.act_fast(p, g).unwrap());
                assert_eq!(fast, ov.act_matrix(i, &m).unwrap(), "{g} on {p:?}");
            }
        }
    }

    #[test]
    fn subgroup_orders() {
        let f = gf8();
        for (id, n) in [
            (SubgroupId::Q, 64),
            (SubgroupId::Q0, 8),
            (SubgroupId::M, 7),
            (SubgroupId::H, 448),
            (SubgroupId::K, 56),
        ] {
            let els = enumerate_subgroup(&f, id);
            let distinct: HashSet<_> = els.iter().collect();
            assert_eq!(els.len(), n);
            assert_eq!(distinct.len(), n);
            assert_eq!(id.expected_order(8), n as u64);
        }
    }

    #[test]
    fn k_is_closed() {
        let f = gf8();
        let k: HashSet<Mat4> = enumerate_subgroup(&f, SubgroupId::K).into_iter().collect();
        for a in &k {
            for b in &k {
                assert!(k.contains(&a.mul(b, &f)));
            }
        }
    }

    #[test]
    fn k_orbits_gf8_and_gf32() {
        let ov = Ovoid::build(gf8()).unwrap();
        let orbits = k_orbits(&ov).unwrap();
        assert_eq!(orbits.each_ref().map(|o| o.len()), [1, 8, 56]);
        for b in ov.field().elements() {
            let i = ov.index_of(&point_p(ov.field(), e(0), b)).unwrap() as u32;
            assert!(orbits[1].contains(&i));
        }
        let ov32 = Ovoid::build(FieldParams::new(5).unwrap()).unwrap();
        let orbits = k_orbits(&ov32).unwrap();
        assert_eq!(orbits.each_ref().map(|o| o.len()), [1, 32, 992]);
    }
}
