//! 4×4 matrices over GF(q) and points of PG(3,q).
//!
//! Points are row vectors and matrices act on the right, `[w]^g = [w·g]`.
//! A point is stored in canonical form: the first nonzero coordinate is 1.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf2m::{FieldElement, FieldParams};

type Row = [FieldElement; 4];

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Mat4 {
    entries: [Row; 4],
}

impl Mat4 {
    pub const fn from_rows(entries: [Row; 4]) -> Self {
        Mat4 { entries }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// The identity `e`.
    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.entries[i][i] = FieldElement::ONE;
        }
        m
    }

    /// `e_ij`: a single 1 at row `i`, column `j` (1-based).
    pub fn unit(i: usize, j: usize) -> Self {
        assert!((1..=4).contains(&i) && (1..=4).contains(&j), "e_{i}{j} out of range");
        let mut m = Self::zero();
        m.entries[i - 1][j - 1] = FieldElement::ONE;
        m
    }

    /// Entry at 1-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.entries[i - 1][j - 1]
    }

    pub fn rows(&self) -> &[Row; 4] {
        &self.entries
    }

    pub fn add(&self, other: &Mat4, f: &FieldParams) -> Mat4 {
        let mut out = *self;
        for (row, orow) in out.entries.iter_mut().zip(&other.entries) {
            for (a, &b) in row.iter_mut().zip(orow) {
                *a = f.add(*a, b);
            }
        }
        out
    }

    pub fn scale(&self, c: FieldElement, f: &FieldParams) -> Mat4 {
        let mut out = *self;
        for a in out.entries.iter_mut().flatten() {
            *a = f.mul(*a, c);
        }
        out
    }

    pub fn mul(&self, other: &Mat4, f: &FieldParams) -> Mat4 {
        let mut out = Self::zero();
        for i in 0..4 {
            out.entries[i] = row_times(&self.entries[i], other, f);
        }
        out
    }

    /// Gauss–Jordan inverse; `None` when singular.
    pub fn inverse(&self, f: &FieldParams) -> Option<Mat4> {
        let mut a = self.entries;
        let mut b = Self::identity().entries;
        for col in 0..4 {
            let pivot = (col..4).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, pivot);
            b.swap(col, pivot);
            let s = f.inv(a[col][col]).ok()?;
            for j in 0..4 {
                a[col][j] = f.mul(a[col][j], s);
                b[col][j] = f.mul(b[col][j], s);
            }
            for r in 0..4 {
                let c = a[r][col];
                if r != col && !c.is_zero() {
                    for j in 0..4 {
                        a[r][j] = f.add(a[r][j], f.mul(c, a[col][j]));
                        b[r][j] = f.add(b[r][j], f.mul(c, b[col][j]));
                    }
                }
            }
        }
        Some(Mat4 { entries: b })
    }

    pub fn is_invertible(&self, f: &FieldParams) -> bool {
        rank(f, &self.entries) == 4
    }
}

impl fmt::Debug for Mat4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            writeln!(f, "{:?}", row.map(|e| e.bits()))?;
        }
        Ok(())
    }
}

#[inline]
pub fn mat_mul(f: &FieldParams, a: &Mat4, b: &Mat4) -> Mat4 {
    a.mul(b, f)
}

#[inline]
fn row_times(w: &Row, g: &Mat4, f: &FieldParams) -> Row {
    let mut out = [FieldElement::ZERO; 4];
    for (k, &wk) in w.iter().enumerate() {
        if wk.is_zero() {
            continue;
        }
        for (o, &gkj) in out.iter_mut().zip(&g.entries[k]) {
            *o = f.add(*o, f.mul(wk, gkj));
        }
    }
    out
}

/// A point of PG(3,q) in canonical form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: Row,
}

impl ProjPoint {
    /// Normalizes `coords` so that its first nonzero coordinate is 1.
    pub fn new(f: &FieldParams, coords: Row) -> Result<Self> {
        let lead = coords.iter().copied().find(|c| !c.is_zero()).ok_or(Error::ZeroVector)?;
        if lead == FieldElement::ONE {
            return Ok(ProjPoint { coords });
        }
        let s = f.inv(lead)?;
        Ok(ProjPoint {
            coords: coords.map(|c| f.mul(c, s)),
        })
    }

    pub fn from_bits(f: &FieldParams, bits: [u64; 4]) -> Result<Self> {
        Self::new(f, bits.map(FieldElement::from_bits))
    }

    pub fn coords(&self) -> &Row {
        &self.coords
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords.map(|e| e.bits()))
    }
}

/// `[w]^g = [w·g]`.
pub fn act(f: &FieldParams, p: &ProjPoint, g: &Mat4) -> Result<ProjPoint> {
    ProjPoint::new(f, row_times(&p.coords, g, f))
}

/// Row rank by Gaussian elimination.
pub fn rank(f: &FieldParams, rows: &[Row]) -> usize {
    let mut m: Vec<Row> = rows.to_vec();
    let mut r = 0;
    for col in 0..4 {
        let Some(pivot) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, pivot);
        let s = f.inv(m[r][col]).expect("pivot is nonzero");
        for i in r + 1..m.len() {
            let c = f.mul(m[i][col], s);
            if c.is_zero() {
                continue;
            }
            for j in col..4 {
                m[i][j] = f.add(m[i][j], f.mul(c, m[r][j]));
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Whether three distinct points lie on a common line.
pub fn collinear(f: &FieldParams, p1: &ProjPoint, p2: &ProjPoint, p3: &ProjPoint) -> Result<bool> {
    if p1 == p2 || p1 == p3 || p2 == p3 {
        return Err(Error::PointsNotDistinct);
    }
    Ok(rank(f, &[p1.coords, p2.coords, p3.coords]) <= 2)
}
