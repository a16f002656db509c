//! Arithmetic in GF(q), q = 2^m with m = 2n+1 odd.
//!
//! Elements are polynomial-basis bit vectors packed into a `u64`: bit `i` is
//! the coefficient of `x^i`. The field also carries the Tits automorphism
//! `theta: a -> a^(2^(n+1))`, whose square is the Frobenius map `a -> a^2`.

use std::fmt;

use crate::error::{Error, Result};

/// Default moduli, indexed by degree: the numerically least primitive
/// polynomial of each odd degree 3..=13, so `x` generates the unit group.
const DEFAULT_POLYS: [(u32, u64); 6] = [
    (3, 0b1011),            // x^3 + x + 1
    (5, 0b100101),          // x^5 + x^2 + 1
    (7, 0b1000_0011),       // x^7 + x + 1
    (9, 0b10_0001_0001),    // x^9 + x^4 + 1
    (11, 0b1000_0000_0101), // x^11 + x^2 + 1
    (13, 0x201B),           // x^13 + x^4 + x^3 + x + 1
];

pub fn default_poly(m: u32) -> Option<u64> {
    DEFAULT_POLYS.iter().find(|(d, _)| *d == m).map(|&(_, p)| p)
}

/// An element of GF(2^m), stored as its polynomial-basis representative.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement(u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Wraps a raw bit vector. The caller is responsible for `bits < q`;
    /// [`FieldParams::element`] checks it.
    pub const fn from_bits(bits: u64) -> Self {
        FieldElement(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#b}", self.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The field GF(q) with q = 2^(2n+1), together with the exponents used by
/// the Suzuki construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldParams {
    m: u32,
    n: u32,
    q: u64,
    r_exp: u64,
    half_r_exp: u64,
    poly: u64,
}

impl FieldParams {
    /// GF(2^m) with the default modulus.
    pub fn new(m: u32) -> Result<Self> {
        let poly = default_poly(m).ok_or(if m % 2 == 1 && m >= 3 {
            Error::NoDefaultPolynomial(m)
        } else {
            Error::InvalidDegree(m)
        })?;
        Self::with_poly(m, poly)
    }

    /// GF(2^m) reduced modulo `poly`, which must be irreducible of degree `m`.
    pub fn with_poly(m: u32, poly: u64) -> Result<Self> {
        if m.is_multiple_of(2) || !(3..=63).contains(&m) {
            return Err(Error::InvalidDegree(m));
        }
        let found = poly_degree(poly);
        if found != Some(m) {
            return Err(Error::WrongDegree {
                poly,
                expected: m,
                found: found.unwrap_or(0),
            });
        }
        if !is_irreducible(poly) {
            return Err(Error::ReduciblePolynomial(poly));
        }
        let n = (m - 1) / 2;
        Ok(FieldParams {
            m,
            n,
            q: 1 << m,
            r_exp: 1 << (n + 1),
            half_r_exp: 1 << n,
            poly,
        })
    }

    /// GF(q) for `q = 2^(2n+1) >= 8`, optionally overriding the modulus.
    pub fn for_order(q: u64, poly: Option<u64>) -> Result<Self> {
        let m = order_to_degree(q)?;
        match poly {
            Some(p) => Self::with_poly(m, p),
            None => Self::new(m),
        }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Exponent of theta, `2^(n+1)`.
    pub fn r_exp(&self) -> u64 {
        self.r_exp
    }

    /// `2^n`, the exponent appearing in the diagonal generators.
    pub fn half_r_exp(&self) -> u64 {
        self.half_r_exp
    }

    pub fn poly(&self) -> u64 {
        self.poly
    }

    pub fn element(&self, bits: u64) -> Option<FieldElement> {
        (bits < self.q).then_some(FieldElement(bits))
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(a.0 ^ b.0)
    }

    /// Shift-and-add multiplication with conditional reduction.
    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(mulmod(a.0, b.0, self.poly, self.m))
    }

    #[inline]
    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    /// Square-and-multiply; negative exponents go through [`Self::inv`].
    pub fn pow(&self, a: FieldElement, e: i64) -> Result<FieldElement> {
        if e < 0 {
            let inv = self.inv(a)?;
            return Ok(self.pow_u(inv, e.unsigned_abs()));
        }
        Ok(self.pow_u(a, e as u64))
    }

    pub fn pow_u(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse as `a^(q-2)`.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow_u(a, self.q - 2))
    }

    /// The Tits automorphism `a -> a^(2^(n+1))`, as n+1 squarings.
    pub fn theta(&self, a: FieldElement) -> FieldElement {
        (0..=self.n).fold(a, |acc, _| self.square(acc))
    }

    /// All q elements in ascending bit order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (0..self.q).map(FieldElement)
    }

    pub fn enumerate_field(&self) -> Vec<FieldElement> {
        self.elements().collect()
    }

    pub fn nonzero(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (1..self.q).map(FieldElement)
    }

    /// The polynomial basis `1, x, ..., x^(m-1)`.
    pub fn basis(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.m).map(|i| FieldElement(1 << i))
    }

    pub fn order(&self, a: FieldElement) -> Option<u64> {
        if a.is_zero() {
            return None;
        }
        let group = self.q - 1;
        let mut ord = group;
        for p in prime_factors(group) {
            while ord.is_multiple_of(p) && self.pow_u(a, ord / p) == FieldElement::ONE {
                ord /= p;
            }
        }
        Some(ord)
    }

    /// Least element (by bit value) generating the multiplicative group.
    pub fn primitive_element(&self) -> FieldElement {
        self.nonzero()
            .find(|&a| self.order(a) == Some(self.q - 1))
            .expect("the multiplicative group of a finite field is cyclic")
    }
}

/// `q -> m` for `q = 2^m`, m odd and at least 3.
pub fn order_to_degree(q: u64) -> Result<u32> {
    if q < 8 || !q.is_power_of_two() || q.trailing_zeros().is_multiple_of(2) {
        return Err(Error::InvalidOrder(q));
    }
    Ok(q.trailing_zeros())
}

#[inline]
fn mulmod(mut a: u64, mut b: u64, poly: u64, m: u32) -> u64 {
    let top = 1u64 << m;
    let mut acc = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & top != 0 {
            a ^= poly;
        }
    }
    acc
}

fn poly_degree(p: u64) -> Option<u32> {
    (p != 0).then(|| 63 - p.leading_zeros())
}

fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let db = poly_degree(b).unwrap();
        while let Some(da) = poly_degree(a).filter(|&da| da >= db) {
            a ^= b << (da - db);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

/// `x^(2^k) mod poly`.
fn x_pow_2k(poly: u64, m: u32, k: u32) -> u64 {
    (0..k).fold(0b10, |t, _| mulmod(t, t, poly, m))
}

/// Rabin's test: `x^(2^m) = x` and `gcd(x^(2^(m/p)) - x, poly) = 1` for every
/// prime p dividing m.
pub fn is_irreducible(poly: u64) -> bool {
    let Some(m) = poly_degree(poly) else {
        return false;
    };
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    // no roots in GF(2)
    if poly & 1 == 0 || poly.count_ones().is_multiple_of(2) {
        return false;
    }
    if x_pow_2k(poly, m, m) != 0b10 {
        return false;
    }
    prime_factors(m as u64).into_iter().all(|p| {
        let t = x_pow_2k(poly, m, m / p as u32) ^ 0b10;
        poly_gcd(poly, t) == 1
    })
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
