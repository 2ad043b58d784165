//! Elementary abelian 2-groups acting on lattices: eigenlattices, total
//! eigenlattices and invariant intersections.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::normal_form::{integer_left_kernel, IntRow};
use crate::exact::rational::{denominator_lcm, Rational};
use crate::exact::{ExactError, QMatrix, ZLattice};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatGroupError {
    #[error("generator {0} is not a square integer matrix of the action dimension")]
    BadGenerator(usize),
    #[error("generator {0} does not square to the identity")]
    NotInvolution(usize),
    #[error("generators {0} and {1} do not commute")]
    NotCommuting(usize, usize),
    #[error("character has {found} signs but the action has rank {expected}")]
    CharacterRank { expected: usize, found: usize },
    #[error("action does not preserve the lattice (generator {0})")]
    NotPreserved(usize),
    #[error("matrix {0} is singular")]
    Singular(usize),
    #[error("generated group exceeds {0} elements")]
    GroupTooLarge(usize),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Commuting integral involutions generating `E ≅ 2^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedAction {
    dim: usize,
    generators: Vec<QMatrix>,
}

/// A linear character of `E`, given by its sign on each generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Character {
    pub signs: Vec<i8>,
}

impl Character {
    pub fn new(signs: Vec<i8>) -> Self {
        assert!(signs.iter().all(|s| *s == 1 || *s == -1), "character signs must be ±1");
        Character { signs }
    }

    pub fn trivial(r: usize) -> Self {
        Character { signs: vec![1; r] }
    }

    pub fn is_trivial(&self) -> bool {
        self.signs.iter().all(|s| *s == 1)
    }

    /// Value on the group element indexed by a generator subset mask.
    pub fn value(&self, mask: usize) -> i8 {
        self.signs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, s)| *s)
            .product()
    }

    /// All `2^r` characters, in sign-vector order starting from the trivial one.
    pub fn all(r: usize) -> Vec<Character> {
        (0..1usize << r)
            .map(|m| Character { signs: (0..r).map(|i| if m >> i & 1 == 1 { -1 } else { 1 }).collect() })
            .collect()
    }
}

fn is_integer_matrix(m: &QMatrix) -> bool {
    m.entries().iter().all(|x| x.denom().is_one())
}

impl SignedAction {
    pub fn new(dim: usize, generators: Vec<QMatrix>) -> Result<Self, LatGroupError> {
        let id = QMatrix::identity(dim);
        for (i, g) in generators.iter().enumerate() {
            if g.rows() != dim || g.cols() != dim || !is_integer_matrix(g) {
                return Err(LatGroupError::BadGenerator(i));
            }
            if g * g != id {
                return Err(LatGroupError::NotInvolution(i));
            }
        }
        for i in 0..generators.len() {
            for j in 0..i {
                let (a, b) = (&generators[i], &generators[j]);
                if a * b != b * a {
                    return Err(LatGroupError::NotCommuting(j, i));
                }
            }
        }
        Ok(SignedAction { dim, generators })
    }

    pub fn from_i64(dim: usize, gens: &[Vec<i64>]) -> Result<Self, LatGroupError> {
        let mats = gens
            .iter()
            .enumerate()
            .map(|(i, g)| {
                if g.len() != dim * dim {
                    return Err(LatGroupError::BadGenerator(i));
                }
                let rows: Vec<&[i64]> = g.chunks(dim.max(1)).collect();
                Ok(if dim == 0 { QMatrix::zeros(0, 0) } else { QMatrix::from_i64(&rows) })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(dim, mats)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[QMatrix] {
        &self.generators
    }

    /// The group element for a generator subset mask.
    pub fn element(&self, mask: usize) -> QMatrix {
        self.generators
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .fold(QMatrix::identity(self.dim), |acc, (_, g)| &acc * g)
    }

    /// All `2^r` subset products, indexed by mask.
    pub fn elements(&self) -> Vec<QMatrix> {
        (0..1usize << self.rank()).map(|m| self.element(m)).collect()
    }

    /// Number of distinct matrices among the subset products.
    pub fn group_order(&self) -> usize {
        self.elements().into_iter().collect::<HashSet<_>>().len()
    }

    fn check_character(&self, chi: &Character) -> Result<(), LatGroupError> {
        if chi.signs.len() != self.rank() {
            return Err(LatGroupError::CharacterRank { expected: self.rank(), found: chi.signs.len() });
        }
        Ok(())
    }

    fn check_preserves(&self, l: &ZLattice) -> Result<(), LatGroupError> {
        if l.dim() != self.dim {
            return Err(ExactError::DimensionMismatch { expected: self.dim, found: l.dim() }.into());
        }
        match self.generators.iter().position(|g| !l.is_preserved_by(g)) {
            Some(i) => Err(LatGroupError::NotPreserved(i)),
            None => Ok(()),
        }
    }
}

/// `L_λ = {x ∈ L | g x = λ(g) x for every generator g}`.
pub fn eigenlattice(l: &ZLattice, action: &SignedAction, chi: &Character) -> Result<ZLattice, LatGroupError> {
    action.check_preserves(l)?;
    action.check_character(chi)?;
    Ok(eigenlattice_unchecked(l, action, chi))
}

fn eigenlattice_unchecked(l: &ZLattice, action: &SignedAction, chi: &Character) -> ZLattice {
    let pairs: Vec<(QMatrix, i8)> =
        action.generators.iter().cloned().zip(chi.signs.iter().copied()).collect();
    common_eigenlattice(l, &pairs)
}

/// `{x ∈ L | g x = s x for every (g, s)}`, computed as an integer kernel.
pub fn common_eigenlattice(l: &ZLattice, conditions: &[(QMatrix, i8)]) -> ZLattice {
    let n = l.dim();
    if l.is_zero() || conditions.is_empty() {
        return l.clone();
    }
    let basis = l.basis();
    // columns: for each condition, B (g^T - s I)
    let blocks: Vec<QMatrix> = conditions
        .iter()
        .map(|(g, s)| {
            let shifted = &g.transpose() - &QMatrix::identity(n).scale(&Rational::from_integer(BigInt::from(*s)));
            &basis * &shifted
        })
        .collect();
    let width = n * blocks.len();
    let rows: Vec<Vec<Rational>> = (0..basis.rows())
        .map(|i| blocks.iter().flat_map(|b| b.row(i).to_vec()).collect())
        .collect();
    let d = denominator_lcm(rows.iter().flatten());
    let dr = Rational::from_integer(d);
    let ints: Vec<IntRow> =
        rows.iter().map(|r| r.iter().map(|x| (x * &dr).to_integer()).collect()).collect();
    let kernel = integer_left_kernel(&ints, width);
    let gens: Vec<Vec<Rational>> = kernel
        .iter()
        .map(|c| {
            let coeffs: Vec<Rational> = c.iter().map(|x| Rational::from_integer(x.clone())).collect();
            basis.left_apply(&coeffs)
        })
        .collect();
    ZLattice::from_generators(n, &gens).expect("eigenvectors live in the ambient space")
}

/// Vectors of `L` fixed by every matrix in `gs`.
pub fn fixed_lattice(l: &ZLattice, gs: &[QMatrix]) -> ZLattice {
    let pairs: Vec<(QMatrix, i8)> = gs.iter().cloned().map(|g| (g, 1)).collect();
    common_eigenlattice(l, &pairs)
}

/// The direct sum of all `2^r` eigenlattices.
pub fn total_eigenlattice(l: &ZLattice, action: &SignedAction) -> Result<ZLattice, LatGroupError> {
    action.check_preserves(l)?;
    let parts: Vec<ZLattice> =
        Character::all(action.rank()).iter().map(|c| eigenlattice_unchecked(l, action, c)).collect();
    for i in 0..parts.len() {
        for j in 0..i {
            let meet = parts[i].intersect(&parts[j])?;
            assert!(meet.is_zero(), "distinct eigenlattices must intersect trivially");
        }
    }
    let mut tel = ZLattice::zero(l.dim());
    for p in &parts {
        tel = tel.sum(p)?;
    }
    Ok(tel)
}

/// Per-character ranks, the total eigenlattice and the exponent of `L / Tel(L)`.
#[derive(Clone, Debug)]
pub struct TelReport {
    pub eigen_ranks: Vec<(Character, usize)>,
    pub tel: ZLattice,
    pub exponent: BigInt,
    pub bound: BigInt,
    pub within_bound: bool,
}

/// Checks that `2^r` annihilates `L / Tel(L)` and returns the exact exponent.
pub fn tel_exponent_check(l: &ZLattice, action: &SignedAction) -> Result<(bool, BigInt), LatGroupError> {
    let rep = tel_report(l, action)?;
    Ok((rep.within_bound, rep.exponent))
}

pub fn tel_report(l: &ZLattice, action: &SignedAction) -> Result<TelReport, LatGroupError> {
    let tel = total_eigenlattice(l, action)?;
    let eigen_ranks = Character::all(action.rank())
        .into_iter()
        .map(|c| {
            let r = eigenlattice_unchecked(l, action, &c).rank();
            (c, r)
        })
        .collect();
    let exponent = l.quotient_exponent(&tel)?;
    let bound = BigInt::one() << action.rank();
    let within_bound = (&bound % &exponent).is_zero();
    assert!(within_bound, "2^r must annihilate L/Tel(L)");
    Ok(TelReport { eigen_ranks, tel, exponent, bound, within_bound })
}

/// `2^{-r} Σ_g λ(g) g v`.
pub fn idempotent_project(v: &[Rational], action: &SignedAction, chi: &Character) -> Vec<Rational> {
    assert_eq!(v.len(), action.dim);
    assert_eq!(chi.signs.len(), action.rank());
    let mut out = vec![Rational::zero(); v.len()];
    for mask in 0..1usize << action.rank() {
        let gv = action.element(mask).apply(v);
        let s = chi.value(mask);
        for (o, x) in out.iter_mut().zip(gv) {
            if s > 0 {
                *o += x;
            } else {
                *o -= x;
            }
        }
    }
    let scale = Rational::new(BigInt::one(), BigInt::one() << action.rank());
    out.into_iter().map(|x| x * &scale).collect()
}

/// Closes a set of invertible matrices under multiplication.
pub fn generated_group(gs: &[QMatrix], bound: usize) -> Result<Vec<QMatrix>, LatGroupError> {
    let Some(first) = gs.first() else { return Ok(Vec::new()) };
    let n = first.rows();
    for (i, g) in gs.iter().enumerate() {
        if !g.is_square() || g.rows() != n {
            return Err(LatGroupError::BadGenerator(i));
        }
        if g.inverse().is_none() {
            return Err(LatGroupError::Singular(i));
        }
    }
    let mut seen: HashSet<QMatrix> = HashSet::new();
    let mut order = vec![QMatrix::identity(n)];
    seen.insert(QMatrix::identity(n));
    let mut frontier = order.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for h in &frontier {
            for g in gs {
                let p = g * h;
                if seen.insert(p.clone()) {
                    if seen.len() > bound {
                        return Err(LatGroupError::GroupTooLarge(bound));
                    }
                    order.push(p.clone());
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    Ok(order)
}

pub const DEFAULT_GROUP_BOUND: usize = 4096;

/// `⋂_{g ∈ G} g L` over the group generated by `gs`, with the exponent of `L`
/// over it.
pub fn invariant_intersection(l: &ZLattice, gs: &[QMatrix]) -> Result<(ZLattice, BigInt), LatGroupError> {
    let group = generated_group(gs, DEFAULT_GROUP_BOUND)?;
    let mut meet = l.clone();
    for g in &group {
        meet = meet.intersect(&l.transform(g))?;
    }
    for g in gs {
        assert_eq!(meet.transform(g), meet, "intersection over a group must be invariant");
    }
    let exponent = l.quotient_exponent(&meet)?;
    Ok((meet, exponent))
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ActionJson {
    pub dim: usize,
    pub generators: Vec<Vec<i64>>,
}

impl TryFrom<ActionJson> for SignedAction {
    type Error = LatGroupError;
    fn try_from(j: ActionJson) -> Result<Self, LatGroupError> {
        SignedAction::from_i64(j.dim, &j.generators)
    }
}

impl From<&SignedAction> for ActionJson {
    fn from(a: &SignedAction) -> Self {
        ActionJson {
            dim: a.dim,
            generators: a
                .generators
                .iter()
                .map(|g| g.entries().iter().map(|x| i64::try_from(x.to_integer()).expect("small entries")).collect())
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    fn swap() -> SignedAction {
        SignedAction::from_i64(2, &[vec![0, 1, 1, 0]]).unwrap()
    }

    fn lat(rows: &[&[i64]]) -> ZLattice {
        ZLattice::from_matrix(&QMatrix::from_i64(rows))
    }

    #[test]
    fn validation() {
        assert!(matches!(SignedAction::from_i64(2, &[vec![1, 1, 0, 1]]), Err(LatGroupError::NotInvolution(0))));
        assert!(matches!(
            SignedAction::from_i64(2, &[vec![0, 1, 1, 0], vec![1, 0, 0, -1]]),
            Err(LatGroupError::NotCommuting(0, 1))
        ));
        assert_eq!(swap().group_order(), 2);
    }

    #[test]
    fn swap_eigenlattices() {
        let z2 = ZLattice::standard(2);
        let plus = eigenlattice(&z2, &swap(), &Character::new(vec![1])).unwrap();
        let minus = eigenlattice(&z2, &swap(), &Character::new(vec![-1])).unwrap();
        assert_eq!(plus, lat(&[&[1, 1]]));
        assert_eq!(minus, lat(&[&[1, -1]]));
        let tel = total_eigenlattice(&z2, &swap()).unwrap();
        assert_eq!(tel, lat(&[&[1, 1], &[1, -1]]));
        assert_eq!(tel_exponent_check(&z2, &swap()).unwrap(), (true, BigInt::from(2)));
    }

    #[test]
    fn trivial_and_diagonal_actions() {
        let z2 = ZLattice::standard(2);
        let triv = SignedAction::from_i64(2, &[vec![1, 0, 0, 1]]).unwrap();
        assert_eq!(eigenlattice(&z2, &triv, &Character::trivial(1)).unwrap(), z2);
        assert_eq!(total_eigenlattice(&z2, &triv).unwrap(), z2);
        assert_eq!(tel_exponent_check(&z2, &triv).unwrap(), (true, BigInt::one()));
        let diag = SignedAction::from_i64(2, &[vec![1, 0, 0, -1], vec![-1, 0, 0, 1]]).unwrap();
        assert_eq!(total_eigenlattice(&z2, &diag).unwrap(), z2);
        assert_eq!(tel_exponent_check(&z2, &diag).unwrap(), (true, BigInt::one()));
    }

    #[test]
    fn not_preserved() {
        let l = lat(&[&[2, 0], &[0, 1]]);
        assert!(matches!(eigenlattice(&l, &swap(), &Character::trivial(1)), Err(LatGroupError::NotPreserved(0))));
    }

    #[test]
    fn projections() {
        let v = vec![int(1), int(0)];
        assert_eq!(idempotent_project(&v, &swap(), &Character::new(vec![1])), vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(idempotent_project(&v, &swap(), &Character::new(vec![-1])), vec![rat(1, 2), rat(-1, 2)]);
        let e = vec![int(3), int(3)];
        assert_eq!(idempotent_project(&e, &swap(), &Character::new(vec![1])), e);
    }

    #[test]
    fn invariant_intersections() {
        let z2 = ZLattice::standard(2);
        let (m, e) = invariant_intersection(&z2, &[QMatrix::from_i64(&[&[0, 1], &[1, 0]])]).unwrap();
        assert_eq!((m, e), (z2.clone(), BigInt::one()));
        let g = QMatrix::new(2, 2, vec![int(0), rat(1, 2), int(2), int(0)]).unwrap();
        let (m, e) = invariant_intersection(&z2, &[g]).unwrap();
        assert_eq!(m, lat(&[&[1, 0], &[0, 2]]));
        assert_eq!(e, BigInt::from(2));
        let z1 = ZLattice::standard(1);
        assert_eq!(invariant_intersection(&z1, &[QMatrix::from_i64(&[&[-1]])]).unwrap(), (z1, BigInt::one()));
        assert!(matches!(
            invariant_intersection(&z2, &[QMatrix::from_i64(&[&[1, 1], &[1, 1]])]),
            Err(LatGroupError::Singular(0))
        ));
        assert!(matches!(
            invariant_intersection(&z2, &[QMatrix::from_i64(&[&[1, 1], &[0, 1]])]),
            Err(LatGroupError::GroupTooLarge(_))
        ));
    }
}
