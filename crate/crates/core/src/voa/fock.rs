//! Fock monomials `γ_{i_1}(-n_1) ⋯ γ_{i_k}(-n_k) ⊗ e^α` and their rational
//! linear combinations.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;

use crate::exact::Rational;

use super::lattice::{EvenLattice, LatticeVector};

/// A creation mode `γ_i(-n)` with `n ≥ 1`; `i` is a zero-based basis index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mode {
    pub n: u32,
    pub i: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockMonomial {
    tail: LatticeVector,
    modes: Vec<Mode>,
}

impl FockMonomial {
    pub fn new(mut modes: Vec<Mode>, tail: LatticeVector) -> Self {
        assert!(modes.iter().all(|m| m.n >= 1), "creation modes have n ≥ 1");
        modes.sort_unstable();
        FockMonomial { tail, modes }
    }

    pub fn vacuum(rank: usize) -> Self {
        FockMonomial { tail: vec![0; rank], modes: Vec::new() }
    }

    /// `e^α` with no oscillators.
    pub fn exp(tail: LatticeVector) -> Self {
        FockMonomial { tail, modes: Vec::new() }
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn tail(&self) -> &[i64] {
        &self.tail
    }

    pub fn is_vacuum(&self) -> bool {
        self.modes.is_empty() && self.tail.iter().all(|x| *x == 0)
    }

    pub fn oscillator_degree(&self) -> u32 {
        self.modes.iter().map(|m| m.n).sum()
    }

    pub fn degree(&self, lattice: &EvenLattice) -> u32 {
        let norm = lattice.norm(&self.tail);
        debug_assert!(norm >= 0 && norm % 2 == 0);
        self.oscillator_degree() + (norm / 2) as u32
    }

    pub fn count(&self, mode: Mode) -> usize {
        self.modes.iter().filter(|m| **m == mode).count()
    }

    pub(crate) fn with_mode(&self, mode: Mode) -> Self {
        let pos = self.modes.partition_point(|m| *m < mode);
        let mut modes = self.modes.clone();
        modes.insert(pos, mode);
        FockMonomial { tail: self.tail.clone(), modes }
    }

    pub(crate) fn without_mode(&self, mode: Mode) -> Option<Self> {
        let pos = self.modes.iter().position(|m| *m == mode)?;
        let mut modes = self.modes.clone();
        modes.remove(pos);
        Some(FockMonomial { tail: self.tail.clone(), modes })
    }

    pub(crate) fn with_modes(&self, extra: &[Mode]) -> Self {
        if extra.is_empty() {
            return self.clone();
        }
        let mut modes = self.modes.clone();
        modes.extend_from_slice(extra);
        modes.sort_unstable();
        FockMonomial { tail: self.tail.clone(), modes }
    }

    pub(crate) fn with_tail(&self, tail: LatticeVector) -> Self {
        FockMonomial { tail, modes: self.modes.clone() }
    }
}

/// Finite rational combination of Fock monomials; zero coefficients are never
/// stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GradedVector {
    terms: BTreeMap<FockMonomial, Rational>,
}

impl GradedVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: FockMonomial) -> Self {
        Self::term(m, Rational::from_integer(1.into()))
    }

    pub fn term(m: FockMonomial, c: Rational) -> Self {
        let mut v = Self::zero();
        v.add_term(m, c);
        v
    }

    pub fn vacuum(rank: usize) -> Self {
        Self::monomial(FockMonomial::vacuum(rank))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (FockMonomial, Rational)>) -> Self {
        let mut v = Self::zero();
        for (m, c) in terms {
            v.add_term(m, c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FockMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &FockMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: FockMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &GradedVector, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> GradedVector {
        if c.is_zero() {
            return Self::zero();
        }
        GradedVector { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    /// Splits into homogeneous components keyed by degree.
    pub fn components(&self, lattice: &EvenLattice) -> BTreeMap<u32, GradedVector> {
        let mut out: BTreeMap<u32, GradedVector> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree(lattice)).or_default().terms.insert(m.clone(), c.clone());
        }
        out
    }

    /// The common degree of all terms, if homogeneous and nonzero.
    pub fn homogeneous_degree(&self, lattice: &EvenLattice) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.degree(lattice));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn max_degree(&self, lattice: &EvenLattice) -> Option<u32> {
        self.terms.keys().map(|m| m.degree(lattice)).max()
    }
}

impl Add for &GradedVector {
    type Output = GradedVector;
    fn add(self, rhs: &GradedVector) -> GradedVector {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &GradedVector {
    type Output = GradedVector;
    fn sub(self, rhs: &GradedVector) -> GradedVector {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &GradedVector {
    type Output = GradedVector;
    fn neg(self) -> GradedVector {
        GradedVector { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}
