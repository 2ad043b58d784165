use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{generate_form, FormError, SaturationConfig, TruncatedForm};
use crate::exact::rational::is_integral;
use crate::exact::{format_rational, QMatrix, Rational, ZLattice};
use crate::voa::{GradedVector, Truncation, TruncatedVOA};

pub const DEFAULT_CLOSURE_SAMPLES: usize = 200;

pub(crate) fn scope_label(cutoff: u32) -> String {
    format!("degrees<={cutoff}")
}

/// Matrix entries as `"p/q"` strings, row by row.
pub fn gram_table(m: &QMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| format_rational(&m[(i, j)])).collect()).collect()
}

/// Gram matrix of the canonical basis of `J_s`.
pub fn form_gram(form: &TruncatedForm, s: u32) -> QMatrix {
    form.piece(s).gram(form.host().gram(s))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiWitness {
    pub degree: u32,
    pub i: usize,
    pub j: usize,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeGram {
    pub degree: u32,
    pub rank: usize,
    pub gram: Vec<Vec<String>>,
    pub integral: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiCertificate {
    pub scope: String,
    pub passed: bool,
    pub degrees: Vec<DegreeGram>,
    pub witness: Option<LiWitness>,
}

fn first_non_integral(g: &QMatrix) -> Option<(usize, usize)> {
    (0..g.rows()).flat_map(|i| (i..g.cols()).map(move |j| (i, j))).find(|&(i, j)| !is_integral(&g[(i, j)]))
}

/// Whether every per-degree Gram matrix of `J` is integral.
pub fn check_li(form: &TruncatedForm) -> LiCertificate {
    let grams: Vec<QMatrix> = (0..=form.cutoff()).into_par_iter().map(|s| form_gram(form, s)).collect();
    let mut witness = None;
    let mut degrees = Vec::new();
    for (s, g) in grams.iter().enumerate() {
        let bad = first_non_integral(g);
        if let (None, Some((i, j))) = (&witness, bad) {
            witness = Some(LiWitness { degree: s as u32, i, j, value: format_rational(&g[(i, j)]) });
        }
        degrees.push(DegreeGram { degree: s as u32, rank: g.rows(), gram: gram_table(g), integral: bad.is_none() });
    }
    LiCertificate { scope: scope_label(form.cutoff()), passed: witness.is_none(), degrees, witness }
}

/// Least `m > 0` with `q | m²`.
fn square_root_cover(q: &BigInt) -> BigInt {
    let mut q = q.abs();
    let mut m = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= q {
        let mut e = 0u32;
        while (&q % &p).is_zero() {
            q /= &p;
            e += 1;
        }
        m *= p.pow(e.div_ceil(2));
        p += 1;
    }
    m * q
}

/// Least `m > 0` making every Gram entry of `m·J` integral in degrees `≤ N`.
pub fn minimal_li_scale(form: &TruncatedForm) -> BigInt {
    (0..=form.cutoff())
        .into_par_iter()
        .map(|s| {
            let g = form_gram(form, s);
            g.entries().iter().fold(BigInt::one(), |acc, x| acc.lcm(&square_root_cover(x.denom())))
        })
        .reduce(BigInt::one, |a, b| a.lcm(&b))
}

/// Degreewise duals of a form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualForm {
    pub pieces: Vec<ZLattice>,
    /// Degrees where `J_s` is not of full rank, so the dual lives in its span.
    pub partial: Vec<u32>,
}

impl DualForm {
    pub fn piece(&self, s: u32) -> &ZLattice {
        &self.pieces[s as usize]
    }

    /// Whether `J_s ⊆ J°_s` for every degree.
    pub fn contains_form(&self, form: &TruncatedForm) -> bool {
        self.pieces.iter().zip(form.pieces()).all(|(d, p)| d.contains_lattice(p))
    }
}

pub fn dual_form(form: &TruncatedForm) -> Result<DualForm, FormError> {
    let host = form.host();
    let pieces = (0..=form.cutoff())
        .into_par_iter()
        .map(|s| {
            let p = form.piece(s);
            if p.is_zero() {
                Ok(p.clone())
            } else {
                p.dual(host.gram(s))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let partial = (0..=form.cutoff()).filter(|&s| form.piece(s).rank() < host.dim(s)).collect();
    Ok(DualForm { pieces, partial })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityWitness {
    pub degree: u32,
    pub index: usize,
    pub image: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    pub scope: String,
    pub n: u32,
    pub holds: bool,
    pub witness: Option<StabilityWitness>,
}

/// Whether `L(1)^n/n!` maps each `J°_s` into `J°_{s-n}`.
pub fn dual_stability_check(form: &TruncatedForm, n: u32) -> Result<StabilityReport, FormError> {
    let dual = dual_form(form)?;
    dual_stability_against(form.host(), &dual.pieces, n)
}

/// [`dual_stability_check`] against explicitly supplied dual lattices.
pub fn dual_stability_against(host: &TruncatedVOA, dual: &[ZLattice], n: u32) -> Result<StabilityReport, FormError> {
    let cutoff = host.cutoff();
    let mut witness = None;
    'outer: for s in n..=cutoff {
        for (index, row) in dual[s as usize].basis_rows().iter().enumerate() {
            let u = host.from_coords(s, row);
            let image = host.l_divided_power(1, n, &u)?;
            if !dual[(s - n) as usize].contains(&host.coords(&image, s - n)?) {
                witness = Some(StabilityWitness { degree: s, index, image: crate::voa::literal::format_element(&image) });
                break 'outer;
            }
        }
    }
    Ok(StabilityReport { scope: scope_label(cutoff), n, holds: witness.is_none(), witness })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureWitness {
    pub left_degree: u32,
    pub left_index: usize,
    pub k: i64,
    pub right_degree: u32,
    pub right_index: usize,
    pub result_degree: u32,
}

impl fmt::Display for ClosureWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "basis {} of degree {} times basis {} of degree {} under the {}-th product leaves J in degree {}",
            self.left_index, self.left_degree, self.right_index, self.right_degree, self.k, self.result_degree
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub scope: String,
    pub seed: u64,
    pub checked: usize,
    pub closed: bool,
    pub witness: Option<ClosureWitness>,
}

fn product_stays_in(
    form: &TruncatedForm,
    (p, i): (u32, usize),
    k: i64,
    (q, j): (u32, usize),
) -> Result<Option<ClosureWitness>, FormError> {
    let host = form.host();
    let a = host.from_coords(p, &form.piece(p).basis_rows()[i]);
    let b = host.from_coords(q, &form.piece(q).basis_rows()[j]);
    let d = (i64::from(p + q) - k - 1) as u32;
    let c = host.vertex_product(&a, k, &b, Truncation::Error)?;
    let ok = c.is_zero() || form.piece(d).contains(&host.coords(&c, d)?);
    Ok((!ok).then_some(ClosureWitness { left_degree: p, left_index: i, k, right_degree: q, right_index: j, result_degree: d }))
}

/// Checks `a_k b ∈ J` for `samples` random basis pairs and admissible `k`.
pub fn closure_sample(form: &TruncatedForm, samples: usize, seed: u64) -> Result<ClosureReport, FormError> {
    let n = form.cutoff();
    let occupied: Vec<u32> = (0..=n).filter(|&s| !form.piece(s).is_zero()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut triples = Vec::with_capacity(samples);
    for _ in 0..samples {
        let p = occupied[rng.gen_range(0..occupied.len())];
        let q = occupied[rng.gen_range(0..occupied.len())];
        let i = rng.gen_range(0..form.piece(p).rank());
        let j = rng.gen_range(0..form.piece(q).rank());
        let top = i64::from(p + q) - 1;
        let k = rng.gen_range((top - i64::from(n))..=top);
        triples.push(((p, i), k, (q, j)));
    }
    let results: Vec<Option<ClosureWitness>> =
        triples.par_iter().map(|&(a, k, b)| product_stays_in(form, a, k, b)).collect::<Result<_, _>>()?;
    let witness = results.into_iter().flatten().next();
    Ok(ClosureReport { scope: scope_label(n), seed, checked: samples, closed: witness.is_none(), witness })
}

/// Checks `a_k b ∈ J` for every pair of basis vectors and every admissible `k`.
pub fn closure_exhaustive(form: &TruncatedForm) -> Result<Option<ClosureWitness>, FormError> {
    let n = form.cutoff();
    let mut triples = Vec::new();
    for p in 0..=n {
        for q in 0..=n {
            let top = i64::from(p + q) - 1;
            for i in 0..form.piece(p).rank() {
                for j in 0..form.piece(q).rank() {
                    for k in (top - i64::from(n))..=top {
                        triples.push(((p, i), k, (q, j)));
                    }
                }
            }
        }
    }
    let results: Vec<Option<ClosureWitness>> =
        triples.par_iter().map(|&(a, k, b)| product_stays_in(form, a, k, b)).collect::<Result<_, _>>()?;
    Ok(results.into_iter().flatten().next())
}

#[derive(Clone, Debug)]
pub struct Lemma1Result {
    pub form: TruncatedForm,
    pub closure: ClosureReport,
    pub li: LiCertificate,
}

/// `K = mJ + Z·vac`, checked for closure by sampling and for integrality.
pub fn lemma1_construct(form: &TruncatedForm, m: &BigInt, seed: u64) -> Result<Lemma1Result, FormError> {
    if !m.is_positive() {
        return Err(FormError::Precondition(format!("m = {m} is not positive")));
    }
    let host = form.host();
    if host.dim(0) != 1 || host.bilinear_form(&host.vacuum(), &host.vacuum()) != Rational::one() {
        return Err(FormError::Precondition("V_0 must be Q·vac with <vac,vac> = 1".into()));
    }
    let scaled = form.scaled(&Rational::from_integer(m.clone()));
    let pre = check_li(&scaled);
    if let Some(w) = pre.witness {
        return Err(FormError::Precondition(format!(
            "{m}J is not lattice integral: degree {} entry ({}, {}) is {}",
            w.degree, w.i, w.j, w.value
        )));
    }
    let vac = ZLattice::standard(1);
    let k = scaled.with_piece(0, scaled.piece(0).sum(&vac)?);
    let closure = closure_sample(&k, DEFAULT_CLOSURE_SAMPLES, seed)?;
    if let Some(w) = closure.witness.clone() {
        return Err(FormError::NotClosed(w));
    }
    let li = check_li(&k);
    if let Some(w) = li.witness.clone() {
        return Err(FormError::NotIntegral(w));
    }
    Ok(Lemma1Result { form: k, closure, li })
}

#[derive(Clone, Debug)]
pub struct RescaleResult {
    pub m1: BigInt,
    pub m2: BigInt,
    pub form: TruncatedForm,
    pub li: LiCertificate,
}

impl RescaleResult {
    pub fn m(&self) -> BigInt {
        &self.m1 * &self.m2
    }
}

/// Exponents `m₁`, `m₂` of `ΣJ_s` and `ΣJ°_s` over `Σ(J_s ∩ J°_s)` for
/// `1 ≤ s ≤ t`, and the form generated by `Z·vac` and `m₁m₂·J_s`.
pub fn dongl1_rescale(form: &TruncatedForm, t: u32, config: SaturationConfig) -> Result<RescaleResult, FormError> {
    let t = t.min(form.cutoff());
    let dual = dual_form(form)?;
    let mut m1 = BigInt::one();
    let mut m2 = BigInt::one();
    for s in 1..=t {
        let j = form.piece(s);
        let d = dual.piece(s);
        let meet = j.intersect(d)?;
        m1 = m1.lcm(&j.quotient_exponent(&meet)?);
        m2 = m2.lcm(&d.quotient_exponent(&meet)?);
    }
    let m = Rational::from_integer(&m1 * &m2);
    let host = form.host();
    let gens: Vec<GradedVector> = (1..=t)
        .flat_map(|s| form.piece(s).basis_rows().into_iter().map(move |r| (s, r)))
        .map(|(s, r)| host.from_coords(s, &r).scale(&m))
        .collect();
    let (jm, _) = generate_form(host, &gens, config)?;
    let li = check_li(&jm);
    if let Some(w) = li.witness.clone() {
        return Err(FormError::NotIntegral(w));
    }
    Ok(RescaleResult { m1, m2, form: jm, li })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasiPrimaryCertificate {
    pub scope: String,
    pub quasi_primary: Vec<bool>,
    pub all_quasi_primary: bool,
    pub li: LiCertificate,
    pub passed: bool,
}

/// Checks `L(1)g = 0` for each generator, then generates and checks integrality.
pub fn quasiprimary_li_check(
    host: &Arc<TruncatedVOA>,
    gens: &[GradedVector],
    config: SaturationConfig,
) -> Result<(QuasiPrimaryCertificate, TruncatedForm), FormError> {
    let quasi_primary = gens.iter().map(|g| host.is_quasi_primary(g)).collect::<Result<Vec<_>, _>>()?;
    let all_quasi_primary = quasi_primary.iter().all(|&b| b);
    let (form, _) = generate_form(host, gens, config)?;
    let li = check_li(&form);
    let passed = all_quasi_primary && li.passed;
    let cert = QuasiPrimaryCertificate { scope: scope_label(host.cutoff()), quasi_primary, all_quasi_primary, li, passed };
    Ok((cert, form))
}

/// The `n > 0` with `J_0 = nZ·vac`.
pub fn vac_intersection(form: &TruncatedForm) -> Result<BigInt, FormError> {
    let rows = form.piece(0).basis_rows();
    let r = match rows.as_slice() {
        [] => return Err(FormError::ZeroVacuumPiece),
        [row] => row[0].abs(),
        _ => unreachable!("V_0 is one-dimensional"),
    };
    if r.is_integer() {
        Ok(r.to_integer())
    } else {
        Err(FormError::VacuumNotIntegral(format_rational(&r)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NliTransfer {
    pub scope: String,
    /// Least `m` with `mJ ⊆ K`.
    pub j_into_k: String,
    /// Least `m` with `mK ⊆ J`.
    pub k_into_j: String,
}

fn least_multiplier(a: &ZLattice, b: &ZLattice) -> Result<BigInt, FormError> {
    Ok(a.sum(b)?.quotient_exponent(b)?)
}

pub fn nli_transfer_report(j: &TruncatedForm, k: &TruncatedForm) -> Result<(BigInt, BigInt), FormError> {
    if !Arc::ptr_eq(j.host(), k.host()) && j.host().lattice() != k.host().lattice() {
        return Err(FormError::HostMismatch);
    }
    let n = j.cutoff().min(k.cutoff());
    let mut jk = BigInt::one();
    let mut kj = BigInt::one();
    for s in 0..=n {
        let (a, b) = (j.piece(s), k.piece(s));
        if a.rank() != b.rank() {
            return Err(FormError::RankMismatch { degree: s, left: a.rank(), right: b.rank() });
        }
        jk = jk.lcm(&least_multiplier(a, b)?);
        kj = kj.lcm(&least_multiplier(b, a)?);
    }
    Ok((jk, kj))
}

impl NliTransfer {
    pub fn new(j: &TruncatedForm, k: &TruncatedForm) -> Result<Self, FormError> {
        let (a, b) = nli_transfer_report(j, k)?;
        Ok(NliTransfer { scope: scope_label(j.cutoff().min(k.cutoff())), j_into_k: a.to_string(), k_into_j: b.to_string() })
    }
}
