//! Free abelian subgroups of `Q^n` in canonical Hermite form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::QMatrix;
use super::normal_form::{hnf_int, integer_left_kernel, pivot_col, smith_invariants, IntRow};
use super::rational::{denominator_lcm, Rational};
use super::ExactError;

/// A lattice `L = (1/denom) * rowspan_Z(rows)` in `Q^dim`.
///
/// `rows` is the Hermite normal form of the integral lattice `denom * L` and
/// `denom` is the least positive integer making `denom * L` integral, so two
/// lattices are equal exactly when their fields are.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ZLattice {
    dim: usize,
    denom: BigInt,
    rows: Vec<IntRow>,
}

fn scale_to_ints(v: &[Rational], d: &BigInt) -> IntRow {
    v.iter().map(|x| (x * Rational::from_integer(d.clone())).to_integer()).collect()
}

impl ZLattice {
    pub fn zero(dim: usize) -> Self {
        ZLattice { dim, denom: BigInt::one(), rows: Vec::new() }
    }

    /// The standard lattice `Z^dim`.
    pub fn standard(dim: usize) -> Self {
        let rows = (0..dim)
            .map(|i| (0..dim).map(|j| BigInt::from(u8::from(i == j))).collect())
            .collect();
        ZLattice { dim, denom: BigInt::one(), rows }
    }

    pub fn from_generators(dim: usize, gens: &[Vec<Rational>]) -> Result<Self, ExactError> {
        if let Some(g) = gens.iter().find(|g| g.len() != dim) {
            return Err(ExactError::DimensionMismatch { expected: dim, found: g.len() });
        }
        let d = denominator_lcm(gens.iter().flatten());
        let ints: Vec<IntRow> = gens.iter().map(|g| scale_to_ints(g, &d)).collect();
        Ok(Self::from_scaled_ints(dim, d, ints))
    }

    pub fn from_matrix(m: &QMatrix) -> Self {
        Self::from_generators(m.cols(), &m.row_vecs()).expect("rows have matrix width")
    }

    /// Lattice spanned by `(1/denom) * rows`.
    pub fn from_scaled_ints(dim: usize, denom: BigInt, rows: Vec<IntRow>) -> Self {
        let h = hnf_int(&rows, dim);
        Self::normalize(dim, denom, h)
    }

    fn normalize(dim: usize, denom: BigInt, mut rows: Vec<IntRow>) -> Self {
        let content = rows.iter().flatten().fold(BigInt::zero(), |g, x| g.gcd(x));
        let g = if content.is_zero() { denom.clone() } else { content.gcd(&denom) };
        if !g.is_one() {
            for x in rows.iter_mut().flatten() {
                *x /= &g;
            }
        }
        let denom = if rows.is_empty() { BigInt::one() } else { denom / g };
        ZLattice { dim, denom, rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denom
    }

    pub fn int_rows(&self) -> &[IntRow] {
        &self.rows
    }

    /// Canonical basis rows as rational vectors.
    pub fn basis_rows(&self) -> Vec<Vec<Rational>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|x| Rational::new(x.clone(), self.denom.clone())).collect())
            .collect()
    }

    pub fn basis(&self) -> QMatrix {
        QMatrix::from_rows(&self.basis_rows())
            .unwrap_or_else(|_| QMatrix::zeros(0, self.dim))
            .with_cols(self.dim)
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        let rows: Vec<IntRow> =
            self.rows.iter().map(|r| r.iter().map(|x| x * c.numer()).collect()).collect();
        Self::from_scaled_ints(self.dim, &self.denom * c.denom(), rows)
    }

    fn check_dim(&self, n: usize) -> Result<(), ExactError> {
        if self.dim == n {
            Ok(())
        } else {
            Err(ExactError::DimensionMismatch { expected: self.dim, found: n })
        }
    }

    /// Rational coordinates of `v` in the canonical basis, if `v` lies in the
    /// rational span.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(v.len(), self.dim);
        let mut rem: Vec<Rational> = v.to_vec();
        let mut coeffs = Vec::with_capacity(self.rows.len());
        let d = Rational::from_integer(self.denom.clone());
        for row in &self.rows {
            let p = pivot_col(row).expect("hnf rows are nonzero");
            let c = &rem[p] * &d / Rational::from_integer(row[p].clone());
            if !c.is_zero() {
                for (r, x) in rem.iter_mut().zip(row) {
                    if !x.is_zero() {
                        *r -= &c * Rational::new(x.clone(), self.denom.clone());
                    }
                }
            }
            coeffs.push(c);
        }
        rem.iter().all(Zero::is_zero).then_some(coeffs)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.coordinates(v).is_some_and(|c| c.iter().all(|x| x.denom().is_one()))
    }

    pub fn contains_lattice(&self, other: &ZLattice) -> bool {
        other.basis_rows().iter().all(|r| self.contains(r))
    }

    /// Adds one generator; returns whether the lattice changed.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.dim);
        if self.contains(v) {
            return false;
        }
        let vd = denominator_lcm(v.iter());
        let d = self.denom.lcm(&vd);
        let factor = &d / &self.denom;
        let mut rows: Vec<IntRow> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x * &factor).collect())
            .collect();
        rows.push(scale_to_ints(v, &d));
        let h = hnf_int(&rows, self.dim);
        *self = Self::normalize(self.dim, d, h);
        true
    }

    /// Common denominator and integer rows for a pair of lattices.
    fn common(&self, other: &ZLattice) -> (BigInt, Vec<IntRow>, Vec<IntRow>) {
        let d = self.denom.lcm(&other.denom);
        let lift = |l: &ZLattice| -> Vec<IntRow> {
            let f = &d / &l.denom;
            l.rows.iter().map(|r| r.iter().map(|x| x * &f).collect()).collect()
        };
        (d.clone(), lift(self), lift(other))
    }

    pub fn sum(&self, other: &ZLattice) -> Result<ZLattice, ExactError> {
        self.check_dim(other.dim)?;
        let (d, mut a, b) = self.common(other);
        a.extend(b);
        Ok(Self::from_scaled_ints(self.dim, d, a))
    }

    pub fn intersect(&self, other: &ZLattice) -> Result<ZLattice, ExactError> {
        self.check_dim(other.dim)?;
        let (d, a, b) = self.common(other);
        let mut stacked = a.clone();
        stacked.extend(b);
        let kernel = integer_left_kernel(&stacked, self.dim);
        let na = a.len();
        let gens: Vec<IntRow> = kernel
            .iter()
            .map(|k| {
                let mut v = vec![BigInt::zero(); self.dim];
                for (c, row) in k[..na].iter().zip(&a) {
                    if c.is_zero() {
                        continue;
                    }
                    for (x, y) in v.iter_mut().zip(row) {
                        *x += c * y;
                    }
                }
                v
            })
            .collect();
        Ok(Self::from_scaled_ints(self.dim, d, gens))
    }

    /// Integer matrix of `sub`'s basis expressed in `self`'s basis.
    fn relative_matrix(&self, sub: &ZLattice) -> Result<Vec<IntRow>, ExactError> {
        self.check_dim(sub.dim)?;
        if sub.rank() != self.rank() {
            return Err(ExactError::InfiniteQuotient { rank: self.rank(), sub_rank: sub.rank() });
        }
        sub.basis_rows()
            .iter()
            .map(|r| {
                let c = self.coordinates(r).ok_or(ExactError::InfiniteQuotient {
                    rank: self.rank(),
                    sub_rank: sub.rank(),
                })?;
                if c.iter().all(|x| x.denom().is_one()) {
                    Ok(c.iter().map(|x| x.to_integer()).collect())
                } else {
                    Err(ExactError::NotContained)
                }
            })
            .collect()
    }

    /// Elementary divisors of `self / sub` (all of them, including ones).
    pub fn quotient_invariants(&self, sub: &ZLattice) -> Result<Vec<BigInt>, ExactError> {
        let m = self.relative_matrix(sub)?;
        Ok(smith_invariants(&m, self.rank()))
    }

    /// Least `m > 0` with `m * self ⊆ sub`.
    pub fn quotient_exponent(&self, sub: &ZLattice) -> Result<BigInt, ExactError> {
        let inv = self.quotient_invariants(sub)?;
        Ok(inv.last().cloned().unwrap_or_else(BigInt::one))
    }

    pub fn index_in(&self, sup: &ZLattice) -> Result<BigInt, ExactError> {
        Ok(sup.quotient_invariants(self)?.iter().product())
    }

    /// `{u in span(self) | u^T G a ∈ Z for all a in self}`.
    pub fn dual(&self, gram: &QMatrix) -> Result<ZLattice, ExactError> {
        if gram.rows() != self.dim || gram.cols() != self.dim {
            return Err(ExactError::DimensionMismatch { expected: self.dim, found: gram.rows() });
        }
        if !gram.is_symmetric() {
            return Err(ExactError::NotSymmetric);
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let b = self.basis();
        let m = b.gram_under(gram);
        let inv = m.inverse().ok_or(ExactError::DegenerateForm)?;
        Ok(ZLattice::from_matrix(&(&inv * &b)))
    }

    /// Image under `v -> g v` (column convention).
    pub fn transform(&self, g: &QMatrix) -> ZLattice {
        let gt = g.transpose();
        let imgs: Vec<Vec<Rational>> =
            self.basis_rows().iter().map(|r| gt.left_apply(r)).collect();
        ZLattice::from_generators(g.rows(), &imgs).expect("image has matrix height")
    }

    pub fn is_preserved_by(&self, g: &QMatrix) -> bool {
        let gt = g.transpose();
        self.basis_rows().iter().all(|r| self.contains(&gt.left_apply(r)))
    }

    /// Gram matrix of the canonical basis under `gram`.
    pub fn gram(&self, gram: &QMatrix) -> QMatrix {
        self.basis().gram_under(gram)
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.rows.iter().flatten().map(Signed::abs).max().unwrap_or_default()
    }
}

impl QMatrix {
    fn with_cols(self, cols: usize) -> QMatrix {
        if self.rows() == 0 {
            QMatrix::zeros(0, cols)
        } else {
            self
        }
    }
}

#[derive(Serialize, Deserialize)]
struct LatticeJson {
    dim: usize,
    basis: QMatrix,
}

impl Serialize for ZLattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        LatticeJson { dim: self.dim, basis: self.basis() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ZLattice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = LatticeJson::deserialize(d)?;
        if raw.basis.rows() > 0 && raw.basis.cols() != raw.dim {
            return Err(D::Error::custom("basis width differs from dim"));
        }
        ZLattice::from_generators(raw.dim, &raw.basis.row_vecs()).map_err(D::Error::custom)
    }
}

/// Canonical echelon basis of the integral row span of `m`.
pub fn hnf(m: &QMatrix) -> QMatrix {
    ZLattice::from_matrix(m).basis()
}

pub fn lattice_sum(a: &ZLattice, b: &ZLattice) -> Result<ZLattice, ExactError> {
    a.sum(b)
}

pub fn lattice_intersect(a: &ZLattice, b: &ZLattice) -> Result<ZLattice, ExactError> {
    a.intersect(b)
}

pub fn quotient_exponent(a: &ZLattice, b: &ZLattice) -> Result<BigInt, ExactError> {
    a.quotient_exponent(b)
}

pub fn dual_lattice(a: &ZLattice, g: &QMatrix) -> Result<ZLattice, ExactError> {
    a.dual(g)
}

pub fn membership(v: &[Rational], a: &ZLattice) -> bool {
    v.len() == a.dim() && a.contains(v)
}
