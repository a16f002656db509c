//! Permutation images of group elements on ovoid indices, and the orbit
//! machinery built on them.

use std::collections::VecDeque;

use indexmap::IndexSet;

use crate::error::{Error, Result};
use crate::gf2m::FieldElement;
use crate::pg3::Mat4;
use crate::suzuki::{Generator, Ovoid};

/// A permutation of `0..v`; `images[i]` is the image of point `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PermElement {
    images: Vec<u32>,
}

impl PermElement {
    pub fn identity(v: usize) -> Self {
        PermElement {
            images: (0..v as u32).collect(),
        }
    }

    /// Checks bijectivity.
    pub fn from_images(images: Vec<u32>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let slot = seen.get_mut(i as usize)?;
            if *slot {
                return None;
            }
            *slot = true;
        }
        Some(PermElement { images })
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, i: u32) -> u32 {
        self.images[i as usize]
    }

    /// `self` followed by `other`, matching the right action:
    /// `perm(g·h) = perm(g).then(perm(h))`.
    pub fn then(&self, other: &PermElement) -> PermElement {
        PermElement {
            images: self.images.iter().map(|&i| other.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> PermElement {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        PermElement { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|&(i, &j)| i as u32 == j).count()
    }
}

/// The permutation induced by a matrix on the ovoid.
pub fn to_perm(ovoid: &Ovoid, g: &Mat4) -> Result<PermElement> {
    let images = (0..ovoid.len())
        .map(|i| ovoid.act_matrix(i, g).map(|j| j as u32))
        .collect::<Result<Vec<_>>>()?;
    PermElement::from_images(images).ok_or(Error::NotInOvoid)
}

/// The permutation of a generator, using the symbolic action where one exists.
pub fn generator_perm(ovoid: &Ovoid, g: &Generator) -> Result<PermElement> {
    match g {
        Generator::Tau => to_perm(ovoid, &g.matrix(ovoid.field())?),
        _ => {
            let images = ovoid
                .points()
                .iter()
                .map(|&p| ovoid.act_fast(p, g).map(|img| ovoid.index(img) as u32))
                .collect::<Result<Vec<_>>>()?;
            PermElement::from_images(images).ok_or(Error::NotInOvoid)
        }
    }
}

#[derive(Clone, Debug)]
pub struct GeneratorSet {
    perms: Vec<PermElement>,
    labels: Vec<Generator>,
    degree: usize,
}

impl GeneratorSet {
    pub fn from_generators(ovoid: &Ovoid, labels: Vec<Generator>) -> Result<Self> {
        let perms = labels
            .iter()
            .map(|g| generator_perm(ovoid, g))
            .collect::<Result<Vec<_>>>()?;
        Ok(GeneratorSet {
            perms,
            labels,
            degree: ovoid.len(),
        })
    }

    /// A set holding only the identity.
    pub fn identity(v: usize) -> Self {
        GeneratorSet {
            perms: vec![PermElement::identity(v)],
            labels: vec![Generator::S(FieldElement::ZERO, FieldElement::ZERO)],
            degree: v,
        }
    }

    /// Generators of Sz(q): `s(b,0)` and `s(0,b)` for every basis element
    /// `b` of GF(q) over GF(2), `m(zeta)` for the least primitive `zeta`,
    /// and `tau`.
    pub fn suzuki(ovoid: &Ovoid) -> Result<Self> {
        let mut labels = q_basis(ovoid);
        labels.push(Generator::M(ovoid.field().primitive_element()));
        labels.push(Generator::Tau);
        Self::from_generators(ovoid, labels)
    }

    /// Every `s(x,y)`, plus `m(zeta)` and `tau`.
    pub fn suzuki_full(ovoid: &Ovoid) -> Result<Self> {
        let f = ovoid.field();
        let mut labels: Vec<Generator> = f
            .elements()
            .flat_map(|x| f.elements().map(move |y| Generator::S(x, y)))
            .collect();
        labels.push(Generator::M(f.primitive_element()));
        labels.push(Generator::Tau);
        Self::from_generators(ovoid, labels)
    }

    /// Generators of H = QM, the stabilizer of infinity.
    pub fn h(ovoid: &Ovoid) -> Result<Self> {
        let mut labels = q_basis(ovoid);
        labels.push(Generator::M(ovoid.field().primitive_element()));
        Self::from_generators(ovoid, labels)
    }

    /// Generators of K = Q0·M.
    pub fn k(ovoid: &Ovoid) -> Result<Self> {
        let f = ovoid.field();
        let mut labels: Vec<Generator> = f.basis().map(|b| Generator::S(FieldElement::ZERO, b)).collect();
        labels.push(Generator::M(f.primitive_element()));
        Self::from_generators(ovoid, labels)
    }

    pub fn perms(&self) -> &[PermElement] {
        &self.perms
    }

    pub fn labels(&self) -> &[Generator] {
        &self.labels
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }
}

fn q_basis(ovoid: &Ovoid) -> Vec<Generator> {
    let f = ovoid.field();
    f.basis()
        .map(|b| Generator::S(b, FieldElement::ZERO))
        .chain(f.basis().map(|b| Generator::S(FieldElement::ZERO, b)))
        .collect()
}

/// Orbit of a point, as an ascending index list.
pub fn point_orbit(start: usize, gens: &GeneratorSet) -> Vec<u32> {
    let mut seen = vec![false; gens.degree()];
    let mut queue = VecDeque::from([start as u32]);
    seen[start] = true;
    while let Some(p) = queue.pop_front() {
        for g in gens.perms() {
            let img = g.apply(p);
            if !seen[img as usize] {
                seen[img as usize] = true;
                queue.push_back(img);
            }
        }
    }
    (0..gens.degree() as u32).filter(|&i| seen[i as usize]).collect()
}

/// Image of a sorted set under `g`, sorted, using `scratch` as a bitmap of
/// at least `degree` bits.
fn set_image(set: &[u32], g: &PermElement, scratch: &mut [u64]) -> Box<[u32]> {
    for &i in set {
        let j = g.apply(i);
        scratch[(j / 64) as usize] |= 1 << (j % 64);
    }
    let mut out = Vec::with_capacity(set.len());
    for (w, word) in scratch.iter_mut().enumerate() {
        let mut bits = *word;
        while bits != 0 {
            out.push(w as u32 * 64 + bits.trailing_zeros());
            bits &= bits - 1;
        }
        *word = 0;
    }
    out.into_boxed_slice()
}

/// Orbit of a point set under the induced action on subsets. Members are
/// ascending index lists, in discovery order.
pub fn set_orbit(base: &[u32], gens: &GeneratorSet) -> Vec<Vec<u32>> {
    let mut start = base.to_vec();
    start.sort_unstable();
    start.dedup();
    let mut scratch = vec![0u64; gens.degree().div_ceil(64)];
    let mut found: IndexSet<Box<[u32]>> = IndexSet::new();
    found.insert(start.into_boxed_slice());
    let mut next = 0;
    while next < found.len() {
        for g in gens.perms() {
            let img = set_image(&found[next], g, &mut scratch);
            found.insert(img);
        }
        next += 1;
    }
    found.into_iter().map(Vec::from).collect()
}

/// Size of the orbit of an ordered pair of distinct points.
pub fn ordered_pair_orbit(pair: (usize, usize), gens: &GeneratorSet) -> Result<u64> {
    let (a, b) = pair;
    if a == b {
        return Err(Error::EqualIndices);
    }
    let v = gens.degree();
    let key = |x: u32, y: u32| x as usize * v + y as usize;
    let mut seen = vec![0u64; (v * v).div_ceil(64)];
    let mut mark = |k: usize| {
        let (w, bit) = (k / 64, 1u64 << (k % 64));
        let fresh = seen[w] & bit == 0;
        seen[w] |= bit;
        fresh
    };
    mark(key(a as u32, b as u32));
    let mut queue = vec![(a as u32, b as u32)];
    let mut count = 1u64;
    while let Some((x, y)) = queue.pop() {
        for g in gens.perms() {
            let (gx, gy) = (g.apply(x), g.apply(y));
            if mark(key(gx, gy)) {
                count += 1;
                queue.push((gx, gy));
            }
        }
    }
    Ok(count)
}

/// Size of the orbit of a flag `(point, block)` with `point ∈ block`.
pub fn flag_orbit(point: u32, block: &[u32], gens: &GeneratorSet) -> u64 {
    let mut start = block.to_vec();
    start.sort_unstable();
    let mut scratch = vec![0u64; gens.degree().div_ceil(64)];
    let mut blocks: IndexSet<Box<[u32]>> = IndexSet::new();
    let (start_id, _) = blocks.insert_full(start.into_boxed_slice());
    let mut flags: IndexSet<(u32, u32)> = IndexSet::new();
    flags.insert((point, start_id as u32));
    let mut next = 0;
    while next < flags.len() {
        let (p, bid) = flags[next];
        for g in gens.perms() {
            let img = set_image(&blocks[bid as usize], g, &mut scratch);
            let (img_id, _) = blocks.insert_full(img);
            flags.insert((g.apply(p), img_id as u32));
        }
        next += 1;
    }
    flags.len() as u64
}

/// Orbit–stabilizer: `|G_x| = |G| / |x^G|`.
pub fn stabilizer_order(orbit_size: u64, group_order: u64) -> Result<u64> {
    if orbit_size == 0 || !group_order.is_multiple_of(orbit_size) {
        return Err(Error::NotDivisible {
            orbit: orbit_size,
            group: group_order,
        });
    }
    Ok(group_order / orbit_size)
}

/// Every element of the group generated by `gens`, by breadth-first
/// product closure. Fails once more than `budget` elements are found.
pub fn closure(gens: &GeneratorSet, budget: usize) -> Result<Vec<PermElement>> {
    let mut found: IndexSet<PermElement> = IndexSet::new();
    found.insert(PermElement::identity(gens.degree()));
    let mut next = 0;
    while next < found.len() {
        for g in gens.perms() {
            let h = found[next].then(g);
            found.insert(h);
            if found.len() > budget {
                return Err(Error::BudgetExceeded(budget));
            }
        }
        next += 1;
    }
    Ok(found.into_iter().collect())
}

/// Elements mapping `set` onto itself.
pub fn setwise_stabilizer<'a>(set: &[u32], elements: &'a [PermElement]) -> Vec<&'a PermElement> {
    let Some(degree) = elements.first().map(PermElement::degree) else {
        return Vec::new();
    };
    let mut member = vec![false; degree];
    for &i in set {
        member[i as usize] = true;
    }
    elements
        .iter()
        .filter(|g| set.iter().all(|&i| member[g.apply(i) as usize]))
        .collect()
}
