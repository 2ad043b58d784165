//! Truncated lattice vertex operator algebras over `Q`.
//!
//! `V_L = S(ĥ⁻) ⊗ Q[L]` is represented degree by degree up to a cutoff `N`.
//! Products `a_k b`, the invariant form, and the Virasoro operators are all
//! computed exactly.

pub mod fock;
pub mod lattice;
pub mod literal;
mod vertex;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact::rational::factorial;
use crate::exact::{QMatrix, Rational};

pub use fock::{FockMonomial, GradedVector, Mode};
pub use lattice::{Cocycle, EvenLattice, LatticeJson, LatticeVector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VoaError {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("degree {degree} exceeds the cutoff {cutoff}")]
    CutoffExceeded { degree: i64, cutoff: u32 },
    #[error("vector is not homogeneous of degree {0}")]
    NotHomogeneous(u32),
    #[error("monomial has tail of length {found}, lattice rank is {expected}")]
    RankMismatch { expected: usize, found: usize },
    #[error("cannot parse element literal: {0}")]
    Parse(String),
}

/// What to do with products whose degree exceeds the cutoff.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Truncation {
    #[default]
    Error,
    Drop,
}

type ProductKey = (FockMonomial, FockMonomial);

type EMinusKey = (Vec<i64>, u32);
type Coefficients = BTreeMap<i64, Rational>;

#[derive(Default)]
pub(crate) struct Caches {
    pub(crate) products: RwLock<HashMap<ProductKey, Arc<Vec<GradedVector>>>>,
    pub(crate) e_minus: RwLock<HashMap<EMinusKey, Arc<vertex::Polynomial>>>,
}

/// `V_L` truncated to degrees `0..=N`, with cached graded bases.
///
/// The memo tables are pure caches; results never depend on evaluation order.
pub struct TruncatedVOA {
    lattice: EvenLattice,
    cocycle: Cocycle,
    cutoff: u32,
    bases: Vec<Vec<FockMonomial>>,
    index: HashMap<FockMonomial, usize>,
    grams: Vec<OnceLock<QMatrix>>,
    omega: OnceLock<GradedVector>,
    pub(crate) caches: Caches,
}

impl std::fmt::Debug for TruncatedVOA {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TruncatedVOA")
            .field("lattice", &self.lattice)
            .field("cutoff", &self.cutoff)
            .finish_non_exhaustive()
    }
}

/// All multisets of modes with `Σ n = total`, in `rank` colours.
fn coloured_partitions(total: u32, rank: usize) -> Vec<Vec<Mode>> {
    fn rec(remaining: u32, min: Mode, rank: usize, cur: &mut Vec<Mode>, out: &mut Vec<Vec<Mode>>) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        for n in min.n..=remaining {
            let start = if n == min.n { min.i } else { 0 };
            for i in start..rank {
                let m = Mode { n, i };
                cur.push(m);
                rec(remaining - n, m, rank, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(total, Mode { n: 1, i: 0 }, rank, &mut Vec::new(), &mut out);
    out
}

impl TruncatedVOA {
    pub fn new(lattice: EvenLattice, cutoff: u32) -> Self {
        let cocycle = Cocycle::standard(&lattice);
        let rank = lattice.rank();
        let mut bases: Vec<Vec<FockMonomial>> = vec![Vec::new(); cutoff as usize + 1];
        for alpha in lattice.vectors_up_to(cutoff) {
            let w = (lattice.norm(&alpha) / 2) as u32;
            for d in w..=cutoff {
                for modes in coloured_partitions(d - w, rank) {
                    bases[d as usize].push(FockMonomial::new(modes, alpha.clone()));
                }
            }
        }
        for b in bases.iter_mut() {
            b.sort();
        }
        assert_eq!(bases[0], vec![FockMonomial::vacuum(rank)], "V_0 must be spanned by the vacuum");
        let index = bases
            .iter()
            .flat_map(|b| b.iter().enumerate().map(|(i, m)| (m.clone(), i)))
            .collect();
        TruncatedVOA {
            lattice,
            cocycle,
            cutoff,
            bases,
            index,
            grams: (0..=cutoff).map(|_| OnceLock::new()).collect(),
            omega: OnceLock::new(),
            caches: Caches::default(),
        }
    }

    pub fn lattice(&self) -> &EvenLattice {
        &self.lattice
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn vacuum(&self) -> GradedVector {
        GradedVector::vacuum(self.rank())
    }

    pub fn graded_basis(&self, d: u32) -> Result<&[FockMonomial], VoaError> {
        self.bases
            .get(d as usize)
            .map(Vec::as_slice)
            .ok_or(VoaError::CutoffExceeded { degree: i64::from(d), cutoff: self.cutoff })
    }

    pub fn dim(&self, d: u32) -> usize {
        self.bases.get(d as usize).map_or(0, Vec::len)
    }

    pub fn degree_of(&self, m: &FockMonomial) -> u32 {
        m.degree(&self.lattice)
    }

    /// Position of a monomial within its graded basis.
    pub fn basis_index(&self, m: &FockMonomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinates of a vector homogeneous of degree `d` in `graded_basis(d)`.
    pub fn coords(&self, v: &GradedVector, d: u32) -> Result<Vec<Rational>, VoaError> {
        if d > self.cutoff {
            return Err(VoaError::CutoffExceeded { degree: i64::from(d), cutoff: self.cutoff });
        }
        let mut out = vec![Rational::zero(); self.dim(d)];
        for (m, c) in v.terms() {
            if self.degree_of(m) != d {
                return Err(VoaError::NotHomogeneous(d));
            }
            let i = self.basis_index(m).ok_or(VoaError::NotHomogeneous(d))?;
            out[i] = c.clone();
        }
        Ok(out)
    }

    pub fn from_coords(&self, d: u32, coords: &[Rational]) -> GradedVector {
        let basis = &self.bases[d as usize];
        assert_eq!(coords.len(), basis.len());
        GradedVector::from_terms(basis.iter().cloned().zip(coords.iter().cloned()))
    }

    fn check_rank(&self, v: &GradedVector) -> Result<(), VoaError> {
        match v.terms().find(|(m, _)| m.tail().len() != self.rank()) {
            Some((m, _)) => Err(VoaError::RankMismatch { expected: self.rank(), found: m.tail().len() }),
            None => Ok(()),
        }
    }

    /// `a_k b`, bilinear in `a` and `b`.
    pub fn vertex_product(
        &self,
        a: &GradedVector,
        k: i64,
        b: &GradedVector,
        truncation: Truncation,
    ) -> Result<GradedVector, VoaError> {
        self.check_rank(a)?;
        self.check_rank(b)?;
        let mut out = GradedVector::zero();
        for (ma, ca) in a.terms() {
            let da = i64::from(self.degree_of(ma));
            for (mb, cb) in b.terms() {
                let t = da + i64::from(self.degree_of(mb)) - k - 1;
                if t < 0 {
                    continue;
                }
                if t > i64::from(self.cutoff) {
                    match truncation {
                        Truncation::Error => {
                            return Err(VoaError::CutoffExceeded { degree: t, cutoff: self.cutoff })
                        }
                        Truncation::Drop => continue,
                    }
                }
                let p = self.monomial_products(ma, mb);
                out.add_scaled(&p[t as usize], &(ca * cb));
            }
        }
        Ok(out)
    }

    /// `a_k b` for every `k` landing in degrees `0..=N`, indexed by result
    /// degree; components above the cutoff are never formed.
    pub fn products_by_degree(&self, a: &GradedVector, b: &GradedVector) -> Result<Vec<GradedVector>, VoaError> {
        self.check_rank(a)?;
        self.check_rank(b)?;
        let mut out = vec![GradedVector::zero(); self.cutoff as usize + 1];
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                let c = ca * cb;
                for (t, p) in self.monomial_products(ma, mb).iter().enumerate() {
                    if !p.is_zero() {
                        out[t].add_scaled(p, &c);
                    }
                }
            }
        }
        Ok(out)
    }

    fn monomial_pairing(&self, p: &FockMonomial, q: &FockMonomial) -> Rational {
        if p.tail().iter().zip(q.tail()).any(|(a, b)| a + b != 0)
            || self.degree_of(p) != self.degree_of(q)
        {
            return Rational::zero();
        }
        let mut st = GradedVector::monomial(q.clone());
        for mode in p.modes() {
            st = self.annihilate(&st, mode.i, mode.n);
            if st.is_zero() {
                return Rational::zero();
            }
        }
        let constant = st.coefficient(&FockMonomial::exp(q.tail().to_vec()));
        // ⟨h(-n)u, v⟩ = -⟨u, h(n)v⟩ and ⟨e^α, e^{-α}⟩ = (-1)^{⟨α,α⟩/2} ε(α,-α)
        let alpha = p.tail();
        let neg: Vec<i64> = alpha.iter().map(|x| -x).collect();
        let mut sign = self.cocycle.sign(alpha, &neg);
        if (self.lattice.norm(alpha) / 2) % 2 == 1 {
            sign = -sign;
        }
        if p.modes().len() % 2 == 1 {
            sign = -sign;
        }
        constant * Rational::from_integer(BigInt::from(sign))
    }

    /// The invariant bilinear form normalized by `⟨vac, vac⟩ = 1`.
    pub fn bilinear_form(&self, u: &GradedVector, v: &GradedVector) -> Rational {
        let mut s = Rational::zero();
        for (mu, cu) in u.terms() {
            for (mv, cv) in v.terms() {
                let p = self.monomial_pairing(mu, mv);
                if !p.is_zero() {
                    s += cu * cv * p;
                }
            }
        }
        s
    }

    /// Gram matrix of `graded_basis(d)`.
    pub fn gram(&self, d: u32) -> &QMatrix {
        self.grams[d as usize].get_or_init(|| {
            let basis = &self.bases[d as usize];
            let n = basis.len();
            let mut g = QMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..=i {
                    let x = self.monomial_pairing(&basis[i], &basis[j]);
                    g[(i, j)] = x.clone();
                    g[(j, i)] = x;
                }
            }
            g
        })
    }

    /// `ω = ½ Σ_{ij} (G^{-1})_{ij} γ_i(-1) γ_j(-1) vac`.
    pub fn virasoro_element(&self) -> &GradedVector {
        self.omega.get_or_init(|| {
            let inv = self.lattice.gram_matrix().inverse().expect("positive definite");
            let rank = self.rank();
            let half = Rational::new(1.into(), 2.into());
            let mut w = GradedVector::zero();
            for i in 0..rank {
                for j in 0..rank {
                    let m = FockMonomial::new(vec![Mode { n: 1, i }, Mode { n: 1, i: j }], vec![0; rank]);
                    w.add_term(m, &inv[(i, j)] * &half);
                }
            }
            w
        })
    }

    /// `L(n) v = ω_{n+1} v`.
    pub fn l_apply(&self, n: i64, v: &GradedVector) -> Result<GradedVector, VoaError> {
        let omega = self.virasoro_element().clone();
        self.vertex_product(&omega, n + 1, v, Truncation::Error)
    }

    /// `L(n)^p v / p!`.
    pub fn l_divided_power(&self, n: i64, p: u32, v: &GradedVector) -> Result<GradedVector, VoaError> {
        let mut cur = v.clone();
        for _ in 0..p {
            cur = self.l_apply(n, &cur)?;
        }
        Ok(cur.scale(&Rational::new(BigInt::one(), factorial(p))))
    }

    /// `v_{-n-1} vac`, which equals `L(-1)^n v / n!`.
    pub fn divided_translate(&self, v: &GradedVector, n: u32) -> Result<GradedVector, VoaError> {
        self.vertex_product(v, -i64::from(n) - 1, &self.vacuum(), Truncation::Error)
    }

    pub fn is_quasi_primary(&self, v: &GradedVector) -> Result<bool, VoaError> {
        Ok(self.l_apply(1, v)?.is_zero())
    }

    /// Both sides of `⟨Y(a,z)u, v⟩ = ⟨u, Y(e^{zL(1)}(-z^{-2})^{L(0)}a, z^{-1})v⟩`
    /// as maps from powers of `z` to coefficients.
    pub fn invariance_sides(
        &self,
        a: &GradedVector,
        u: &GradedVector,
        v: &GradedVector,
    ) -> Result<(Coefficients, Coefficients), VoaError> {
        let lat = &self.lattice;
        let mut lhs: BTreeMap<i64, Rational> = BTreeMap::new();
        let mut rhs: BTreeMap<i64, Rational> = BTreeMap::new();
        for (wa, ca) in a.components(lat) {
            let wa = i64::from(wa);
            // (L(1)^j / j!) a for j = 0..=wa
            let mut lowered = Vec::new();
            for j in 0..=wa {
                lowered.push(self.l_divided_power(1, j as u32, &ca)?);
            }
            let sign = if wa % 2 == 0 { Rational::one() } else { -Rational::one() };
            for (du, cu) in u.components(lat) {
                let du = i64::from(du);
                for (dv, cv) in v.components(lat) {
                    let dv = i64::from(dv);
                    let n = wa + du - dv - 1;
                    let left = self.bilinear_form(&self.vertex_product(&ca, n, &cu, Truncation::Error)?, &cv);
                    *lhs.entry(-n - 1).or_default() += left;
                    for (j, b) in lowered.iter().enumerate() {
                        let j = j as i64;
                        if b.is_zero() {
                            continue;
                        }
                        let m = wa - j + dv - du - 1;
                        let right = self.bilinear_form(&cu, &self.vertex_product(b, m, &cv, Truncation::Error)?);
                        *rhs.entry(-2 * wa + j + m + 1).or_default() += &sign * right;
                    }
                }
            }
        }
        lhs.retain(|_, x| !x.is_zero());
        rhs.retain(|_, x| !x.is_zero());
        Ok((lhs, rhs))
    }

    pub fn invariance_identity_check(
        &self,
        a: &GradedVector,
        u: &GradedVector,
        v: &GradedVector,
    ) -> Result<bool, VoaError> {
        let (l, r) = self.invariance_sides(a, u, v)?;
        Ok(l == r)
    }

    /// Checks `vac_k a = δ_{k,-1} a` and the three-case formula for `a_k vac`
    /// for every `k` whose result lies in degrees `0..=N`. Returns the failing
    /// `(identity, k)` pairs.
    /// Checks the invariance identity on every triple of basis monomials
    /// with total degree at most `max_total`; returns the number of triples
    /// and the failing ones.
    pub fn invariance_exhaustive(&self, max_total: u32) -> Result<(usize, Vec<[FockMonomial; 3]>), VoaError> {
        use rayon::prelude::*;
        let n = self.cutoff;
        let mut triples = Vec::new();
        for da in 0..=n.min(max_total) {
            for du in 0..=n.min(max_total - da) {
                for dv in 0..=n.min(max_total - da - du) {
                    for a in &self.bases[da as usize] {
                        for u in &self.bases[du as usize] {
                            for v in &self.bases[dv as usize] {
                                triples.push([a, u, v]);
                            }
                        }
                    }
                }
            }
        }
        let failures: Vec<Option<[FockMonomial; 3]>> = triples
            .par_iter()
            .map(|t| {
                let [a, u, v] = t.map(|m| GradedVector::monomial(m.clone()));
                let ok = self.invariance_identity_check(&a, &u, &v)?;
                Ok((!ok).then(|| t.map(FockMonomial::clone)))
            })
            .collect::<Result<_, VoaError>>()?;
        Ok((triples.len(), failures.into_iter().flatten().collect()))
    }

    pub fn vacuum_identity_failures(&self, a: &GradedVector) -> Result<Vec<(&'static str, i64)>, VoaError> {
        let vac = self.vacuum();
        let n = i64::from(self.cutoff);
        let mut failures = Vec::new();
        for (d, comp) in a.components(&self.lattice) {
            let d = i64::from(d);
            for k in (d - 1 - n)..=(d + 1) {
                let got = self.vertex_product(&vac, k, &comp, Truncation::Error)?;
                let expected = if k == -1 { comp.clone() } else { GradedVector::zero() };
                if got != expected {
                    failures.push(("vac_k a", k));
                }
            }
            for k in (d - 1 - n)..=(d + 1) {
                let got = self.vertex_product(&comp, k, &vac, Truncation::Error)?;
                let expected = match k {
                    k if k >= 0 => GradedVector::zero(),
                    -1 => comp.clone(),
                    _ => self.l_divided_power(-1, (-k - 1) as u32, &comp)?,
                };
                if got != expected {
                    failures.push(("a_k vac", k));
                }
            }
        }
        Ok(failures)
    }
}

#[cfg(test)]
mod tests;
