//! Integral forms in truncated VOAs: generation by saturation, lattice
//! integrality, duals, rescaling constructions and group-invariant subforms.
//!
//! Every conclusion drawn here is scoped to degrees `0..=N` of the host.

mod integrality;
pub mod manifest;
mod symmetry;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{ExactError, Rational, ZLattice};
use crate::latgroup::LatGroupError;
use crate::voa::{GradedVector, TruncatedVOA, VoaError};

pub use integrality::*;
pub use symmetry::*;

pub const DEFAULT_ITERATION_BOUND: usize = 50;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("saturation did not stabilize within {bound} passes")]
    NonConvergence { bound: usize, trace: SaturationTrace },
    #[error("generator {0} has a component above the cutoff")]
    GeneratorAboveCutoff(usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("K = mJ + Z·vac is not closed: {0}")]
    NotClosed(ClosureWitness),
    #[error("result is not lattice integral at degree {}", .0.degree)]
    NotIntegral(LiWitness),
    #[error("J_0 is (r)Z·vac with non-integral r = {0}; r² vac = vac_(-1)(r vac) cannot lie in J")]
    VacuumNotIntegral(String),
    #[error("J_0 is zero")]
    ZeroVacuumPiece,
    #[error("rank mismatch at degree {degree}: {left} vs {right}")]
    RankMismatch { degree: u32, left: usize, right: usize },
    #[error("automorphism {index} does not preserve J at degree {degree}")]
    NotInvariant { index: usize, degree: u32 },
    #[error("forms live in different host VOAs")]
    HostMismatch,
    #[error(transparent)]
    Voa(#[from] VoaError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Group(#[from] LatGroupError),
}

/// Per-pass growth record of a saturation run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SaturationTrace {
    pub passes: Vec<PassRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PassRecord {
    pub pass: usize,
    pub new_vectors: usize,
    pub ranks: Vec<usize>,
    /// Least common denominator of each degree's lattice, in monomial coordinates.
    pub denominators: Vec<String>,
}

impl SaturationTrace {
    /// Per-degree denominator sequences across passes.
    pub fn denominator_sequences(&self) -> BTreeMap<u32, Vec<String>> {
        let mut out: BTreeMap<u32, Vec<String>> = BTreeMap::new();
        for p in &self.passes {
            for (s, d) in p.denominators.iter().enumerate() {
                out.entry(s as u32).or_default().push(d.clone());
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SaturationConfig {
    pub iteration_bound: usize,
}

impl Default for SaturationConfig {
    fn default() -> Self {
        SaturationConfig { iteration_bound: DEFAULT_ITERATION_BOUND }
    }
}

/// A degreewise family `J = ⊕_s J_s` with `J_s` a lattice in the coordinates
/// of `graded_basis(s)`.
#[derive(Clone, Debug)]
pub struct TruncatedForm {
    host: Arc<TruncatedVOA>,
    pieces: Vec<ZLattice>,
    generators: Vec<GradedVector>,
    gen_degree: u32,
}

impl TruncatedForm {
    /// Wraps explicit per-degree lattices (for fixtures and derived forms).
    pub fn from_pieces(
        host: Arc<TruncatedVOA>,
        pieces: Vec<ZLattice>,
        generators: Vec<GradedVector>,
        gen_degree: u32,
    ) -> Self {
        assert_eq!(pieces.len(), host.cutoff() as usize + 1);
        for (s, p) in pieces.iter().enumerate() {
            assert_eq!(p.dim(), host.dim(s as u32), "piece {s} has the wrong ambient dimension");
        }
        TruncatedForm { host, pieces, generators, gen_degree }
    }

    pub fn host(&self) -> &Arc<TruncatedVOA> {
        &self.host
    }

    pub fn cutoff(&self) -> u32 {
        self.host.cutoff()
    }

    pub fn piece(&self, s: u32) -> &ZLattice {
        &self.pieces[s as usize]
    }

    pub fn pieces(&self) -> &[ZLattice] {
        &self.pieces
    }

    pub fn generators(&self) -> &[GradedVector] {
        &self.generators
    }

    /// Largest degree among the recorded generators.
    pub fn gen_degree(&self) -> u32 {
        self.gen_degree
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.pieces.iter().map(ZLattice::rank).collect()
    }

    /// Basis of `J_s` as vectors of the VOA.
    pub fn basis_vectors(&self, s: u32) -> Vec<GradedVector> {
        self.piece(s).basis_rows().iter().map(|r| self.host.from_coords(s, r)).collect()
    }

    pub fn contains(&self, v: &GradedVector) -> Result<bool, FormError> {
        for (d, comp) in v.components(self.host.lattice()) {
            if d > self.cutoff() {
                return Err(VoaError::CutoffExceeded { degree: i64::from(d), cutoff: self.cutoff() }.into());
            }
            if !self.piece(d).contains(&self.host.coords(&comp, d)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `c·J`, degreewise.
    pub fn scaled(&self, c: &Rational) -> TruncatedForm {
        let pieces = self.pieces.iter().map(|p| p.scaled(c)).collect();
        TruncatedForm { pieces, ..self.clone() }
    }

    /// Replaces one degree's lattice.
    pub fn with_piece(&self, s: u32, lattice: ZLattice) -> TruncatedForm {
        let mut out = self.clone();
        assert_eq!(lattice.dim(), self.host.dim(s));
        out.pieces[s as usize] = lattice;
        out
    }

    pub fn denominators(&self) -> Vec<BigInt> {
        self.pieces.iter().map(|p| p.denominator().clone()).collect()
    }

    /// Whether `J_s ⊆ other_s` for every degree.
    pub fn is_contained_in(&self, other: &TruncatedForm) -> bool {
        self.pieces.iter().zip(&other.pieces).all(|(a, b)| b.contains_lattice(a))
    }
}

fn homogeneous_parts(host: &TruncatedVOA, gens: &[GradedVector]) -> Result<Vec<(u32, GradedVector)>, FormError> {
    let mut out = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        for (d, comp) in g.components(host.lattice()) {
            if d > host.cutoff() {
                return Err(FormError::GeneratorAboveCutoff(i));
            }
            out.push((d, comp));
        }
    }
    Ok(out)
}

/// Least degreewise family of lattices containing `gens` and the vacuum and
/// closed under every product `a_k b` of degree `≤ N`.
///
/// Runs semi-naively: each pass multiplies the lattice bases at the start of
/// the pass against the vectors added in the previous pass, in both orders.
pub fn generate_form(
    host: &Arc<TruncatedVOA>,
    gens: &[GradedVector],
    config: SaturationConfig,
) -> Result<(TruncatedForm, SaturationTrace), FormError> {
    let n = host.cutoff();
    let mut pieces: Vec<ZLattice> = (0..=n).map(|s| ZLattice::zero(host.dim(s))).collect();
    let mut frontier: Vec<(u32, GradedVector)> = Vec::new();
    let mut seeds = vec![(0, host.vacuum())];
    seeds.extend(homogeneous_parts(host, gens)?);
    for (d, v) in seeds {
        if pieces[d as usize].insert(&host.coords(&v, d)?) {
            frontier.push((d, v));
        }
    }
    let gen_degree = frontier.iter().map(|(d, _)| *d).max().unwrap_or(0);
    let mut trace = SaturationTrace::default();
    let record = |pass: usize, new_vectors: usize, pieces: &[ZLattice]| PassRecord {
        pass,
        new_vectors,
        ranks: pieces.iter().map(ZLattice::rank).collect(),
        denominators: pieces.iter().map(|p| p.denominator().to_string()).collect(),
    };
    trace.passes.push(record(0, frontier.len(), &pieces));
    let mut pass = 0;
    while !frontier.is_empty() {
        pass += 1;
        if pass > config.iteration_bound {
            return Err(FormError::NonConvergence { bound: config.iteration_bound, trace });
        }
        let basis: Vec<(u32, GradedVector)> = (0..=n)
            .flat_map(|s| {
                pieces[s as usize]
                    .basis_rows()
                    .into_iter()
                    .map(move |r| (s, r))
            })
            .map(|(s, r)| (s, host.from_coords(s, &r)))
            .collect();
        let mut tasks: Vec<(&GradedVector, &GradedVector)> = Vec::new();
        for (_, x) in &basis {
            for (_, y) in &frontier {
                tasks.push((x, y));
                tasks.push((y, x));
            }
        }
        let products: Vec<Vec<(u32, GradedVector)>> = tasks
            .par_iter()
            .map(|(a, b)| products_within_cutoff(host, a, b))
            .collect::<Result<_, _>>()?;
        let mut next = Vec::new();
        for (d, v) in products.into_iter().flatten() {
            if pieces[d as usize].insert(&host.coords(&v, d)?) {
                next.push((d, v));
            }
        }
        trace.passes.push(record(pass, next.len(), &pieces));
        frontier = next;
    }
    let form = TruncatedForm { host: host.clone(), pieces, generators: gens.to_vec(), gen_degree };
    Ok((form, trace))
}

/// All nonzero `a_k b` landing in degrees `0..=N`.
fn products_within_cutoff(
    host: &TruncatedVOA,
    a: &GradedVector,
    b: &GradedVector,
) -> Result<Vec<(u32, GradedVector)>, VoaError> {
    Ok(host
        .products_by_degree(a, b)?
        .into_iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(d, p)| (d as u32, p))
        .collect())
}

/// Least common multiple of all per-degree denominators.
pub fn denominator_lcm_of(form: &TruncatedForm) -> BigInt {
    form.denominators().iter().fold(BigInt::one(), |acc, d| acc.lcm(d))
}
