use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use super::{FormError, TruncatedForm};
use crate::exact::{QMatrix, Rational, ZLattice};
use crate::latgroup::{self, Character, SignedAction, TelReport};
use crate::voa::{EvenLattice, FockMonomial, GradedVector, LatticeVector, Mode, TruncatedVOA, VoaError};

/// Lift of a lattice isometry `σ` to `V_L`:
/// `h(-n) ↦ (σh)(-n)` and `e^α ↦ χ(α) η(α) e^{σα}`.
///
/// `η` is the quadratic sign correcting the cocycle, so that
/// `η(α+β) = η(α) η(β) ε(σα,σβ) ε(α,β)`; `χ` is an optional sign character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VOAAutomorphism {
    sigma: Vec<Vec<i64>>,
    /// `c_ij ∈ {0,1}` with `ε(σγ_i,σγ_j) ε(γ_i,γ_j) = (-1)^{c_ij}`.
    correction: Vec<Vec<u8>>,
    character: Vec<i8>,
}

impl VOAAutomorphism {
    /// `sigma[i][j]` is the `γ_i` coordinate of `σγ_j`.
    pub fn lift(lattice: &EvenLattice, sigma: Vec<Vec<i64>>) -> Result<Self, VoaError> {
        let r = lattice.rank();
        Self::lift_with_character(lattice, sigma, vec![1; r])
    }

    pub fn lift_with_character(lattice: &EvenLattice, sigma: Vec<Vec<i64>>, character: Vec<i8>) -> Result<Self, VoaError> {
        let r = lattice.rank();
        if sigma.len() != r || sigma.iter().any(|row| row.len() != r) {
            return Err(VoaError::RankMismatch { expected: r, found: sigma.len() });
        }
        if character.len() != r || character.iter().any(|&c| c != 1 && c != -1) {
            return Err(VoaError::InvalidLattice("character must be a list of ±1 of length rank".into()));
        }
        let image = |j: usize| -> LatticeVector { (0..r).map(|i| sigma[i][j]).collect() };
        for i in 0..r {
            for j in 0..r {
                if lattice.pair(&image(i), &image(j)) != lattice.gram()[i][j] {
                    return Err(VoaError::InvalidLattice("map does not preserve the Gram matrix".into()));
                }
            }
        }
        let cocycle = crate::voa::Cocycle::standard(lattice);
        let unit = |i: usize| -> LatticeVector { (0..r).map(|k| i64::from(k == i)).collect() };
        let correction = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let s = cocycle.sign(&image(i), &image(j)) * cocycle.sign(&unit(i), &unit(j));
                        u8::from(s < 0)
                    })
                    .collect()
            })
            .collect();
        Ok(VOAAutomorphism { sigma, correction, character })
    }

    /// The lift of `-1`.
    pub fn minus_one(lattice: &EvenLattice) -> Self {
        let r = lattice.rank();
        let sigma = (0..r).map(|i| (0..r).map(|j| if i == j { -1 } else { 0 }).collect()).collect();
        Self::lift(lattice, sigma).expect("-1 is an isometry")
    }

    pub fn rank(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma(&self) -> &[Vec<i64>] {
        &self.sigma
    }

    fn apply_lattice(&self, a: &[i64]) -> LatticeVector {
        (0..self.rank()).map(|i| (0..self.rank()).map(|j| self.sigma[i][j] * a[j]).sum()).collect()
    }

    fn sign(&self, a: &[i64]) -> i64 {
        let r = self.rank();
        let mut e = 0i64;
        for i in 0..r {
            e += i64::from(self.correction[i][i]) * (a[i] * (a[i] - 1) / 2);
            for j in (i + 1)..r {
                e += i64::from(self.correction[i][j]) * a[i] * a[j];
            }
            if self.character[i] < 0 {
                e += a[i];
            }
        }
        if e.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }

    pub fn apply_monomial(&self, m: &FockMonomial) -> GradedVector {
        let tail = m.tail();
        let mut out = GradedVector::term(
            FockMonomial::exp(self.apply_lattice(tail)),
            Rational::from_integer(self.sign(tail).into()),
        );
        for mode in m.modes() {
            let mut next = GradedVector::zero();
            for (mono, c) in out.terms() {
                for i in 0..self.rank() {
                    let s = self.sigma[i][mode.i];
                    if s != 0 {
                        next.add_term(mono.with_mode(Mode { n: mode.n, i }), c * Rational::from_integer(s.into()));
                    }
                }
            }
            out = next;
        }
        out
    }

    pub fn apply(&self, v: &GradedVector) -> GradedVector {
        let mut out = GradedVector::zero();
        for (m, c) in v.terms() {
            out.add_scaled(&self.apply_monomial(m), c);
        }
        out
    }

    /// Matrix on `graded_basis(d)` acting on column coordinate vectors.
    pub fn degree_matrix(&self, host: &TruncatedVOA, d: u32) -> Result<QMatrix, VoaError> {
        let basis = host.graded_basis(d)?;
        let n = basis.len();
        let mut g = QMatrix::zeros(n, n);
        for (col, m) in basis.iter().enumerate() {
            let image = host.coords(&self.apply_monomial(m), d)?;
            for (row, x) in image.into_iter().enumerate() {
                g[(row, col)] = x;
            }
        }
        Ok(g)
    }
}

fn degree_matrices(host: &TruncatedVOA, auts: &[VOAAutomorphism], d: u32) -> Result<Vec<QMatrix>, FormError> {
    Ok(auts.iter().map(|a| a.degree_matrix(host, d)).collect::<Result<_, _>>()?)
}

fn ensure_invariant(form: &TruncatedForm, mats: &[QMatrix], d: u32) -> Result<(), FormError> {
    match mats.iter().position(|g| !form.piece(d).is_preserved_by(g)) {
        Some(index) => Err(FormError::NotInvariant { index, degree: d }),
        None => Ok(()),
    }
}

/// Degreewise fixed points `J_s ∩ ker(g - 1)` over all given automorphisms.
pub fn fixed_subform(form: &TruncatedForm, auts: &[VOAAutomorphism]) -> Result<TruncatedForm, FormError> {
    let host = form.host();
    let pieces = (0..=form.cutoff())
        .into_par_iter()
        .map(|d| {
            let mats = degree_matrices(host, auts, d)?;
            ensure_invariant(form, &mats, d)?;
            Ok(latgroup::fixed_lattice(form.piece(d), &mats))
        })
        .collect::<Result<Vec<_>, FormError>>()?;
    Ok(TruncatedForm::from_pieces(host.clone(), pieces, form.generators().to_vec(), form.gen_degree()))
}

fn degree_action(form: &TruncatedForm, auts: &[VOAAutomorphism], d: u32) -> Result<SignedAction, FormError> {
    let mats = degree_matrices(form.host(), auts, d)?;
    Ok(SignedAction::new(form.host().dim(d), mats)?)
}

/// `J_λ` in every degree, for commuting involutive automorphisms.
pub fn char_eigenform(form: &TruncatedForm, auts: &[VOAAutomorphism], chi: &Character) -> Result<Vec<ZLattice>, FormError> {
    (0..=form.cutoff())
        .into_par_iter()
        .map(|d| Ok(latgroup::eigenlattice(form.piece(d), &degree_action(form, auts, d)?, chi)?))
        .collect()
}

/// Per-degree total eigenlattice reports.
pub fn form_tel(form: &TruncatedForm, auts: &[VOAAutomorphism]) -> Result<Vec<TelReport>, FormError> {
    (0..=form.cutoff())
        .into_par_iter()
        .map(|d| Ok(latgroup::tel_report(form.piece(d), &degree_action(form, auts, d)?)?))
        .collect()
}

/// Summary of [`form_tel`] for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TelDegree {
    pub degree: u32,
    pub rank: usize,
    pub eigen_ranks: Vec<(Vec<i8>, usize)>,
    pub exponent: String,
    pub bound: String,
    pub within_bound: bool,
}

pub fn tel_summary(form: &TruncatedForm, auts: &[VOAAutomorphism]) -> Result<Vec<TelDegree>, FormError> {
    Ok(form_tel(form, auts)?
        .into_iter()
        .enumerate()
        .map(|(d, t)| TelDegree {
            degree: d as u32,
            rank: form.piece(d as u32).rank(),
            eigen_ranks: t.eigen_ranks.iter().map(|(c, r)| (c.signs.clone(), *r)).collect(),
            exponent: t.exponent.to_string(),
            bound: t.bound.to_string(),
            within_bound: t.within_bound,
        })
        .collect())
}

/// `⋂_{g∈G} gJ` over the group generated by `auts`, with per-degree
/// exponents of `J` over the intersection.
pub fn invariant_form_intersect(
    form: &TruncatedForm,
    auts: &[VOAAutomorphism],
) -> Result<(TruncatedForm, Vec<BigInt>), FormError> {
    invariant_form_intersect_matrices(form, |d| degree_matrices(form.host(), auts, d))
}

/// As [`invariant_form_intersect`], for arbitrary per-degree matrix groups.
pub fn invariant_form_intersect_matrices(
    form: &TruncatedForm,
    mats: impl Fn(u32) -> Result<Vec<QMatrix>, FormError> + Sync,
) -> Result<(TruncatedForm, Vec<BigInt>), FormError> {
    let parts = (0..=form.cutoff())
        .into_par_iter()
        .map(|d| {
            let gs = mats(d)?;
            if gs.is_empty() {
                return Ok((form.piece(d).clone(), BigInt::one()));
            }
            Ok(latgroup::invariant_intersection(form.piece(d), &gs)?)
        })
        .collect::<Result<Vec<_>, FormError>>()?;
    let (pieces, exps): (Vec<_>, Vec<_>) = parts.into_iter().unzip();
    let out = TruncatedForm::from_pieces(form.host().clone(), pieces, form.generators().to_vec(), form.gen_degree());
    Ok((out, exps))
}
