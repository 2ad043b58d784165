//! Vertex operators of the lattice VOA acting on Fock monomials.
//!
//! For `v = γ_{i_1}(-n_1) ⋯ γ_{i_k}(-n_k) e^α` the field is the normal ordered
//! product `:∂^{(n_1-1)}γ_{i_1}(z) ⋯ ∂^{(n_k-1)}γ_{i_k}(z) Y(e^α, z):` with
//! `Y(e^α,z) = E^-(-α,z) E^+(-α,z) e_α z^{α(0)}`. Every term of `Y(v,z)w` has
//! its power of `z` fixed by its degree, so `v_k w` is the part of the
//! expansion of degree `deg v + deg w - k - 1`; no powers of `z` are tracked.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::exact::rational::binomial;
use crate::exact::Rational;

use super::fock::{FockMonomial, GradedVector, Mode};
use super::TruncatedVOA;

/// Degree-`e` part of `exp(Σ_n α(-n) z^n / n)` as (modes, coefficient) pairs.
pub(crate) type Polynomial = Vec<(Vec<Mode>, Rational)>;

fn r(x: BigInt) -> Rational {
    Rational::from_integer(x)
}

impl TruncatedVOA {
    /// `γ_i(m)` for `m ≥ 1`: `m Σ_j ⟨γ_i,γ_j⟩ ∂/∂x_{j,m}`.
    pub(crate) fn annihilate(&self, v: &GradedVector, i: usize, m: u32) -> GradedVector {
        let mut out = GradedVector::zero();
        let gram = self.lattice.gram();
        for (mono, c) in v.terms() {
            for j in 0..self.rank() {
                let g = gram[i][j];
                if g == 0 {
                    continue;
                }
                let mode = Mode { n: m, i: j };
                let count = mono.count(mode);
                if count == 0 {
                    continue;
                }
                let factor = r(BigInt::from(i64::from(m) * g * count as i64));
                out.add_term(mono.without_mode(mode).expect("counted"), c * factor);
            }
        }
        out
    }

    /// `γ_i(0)` acts on `e^β` by `⟨γ_i, β⟩`.
    fn zero_mode(&self, v: &GradedVector, i: usize) -> GradedVector {
        GradedVector::from_terms(v.terms().map(|(m, c)| {
            let s = self.lattice.pair_basis(i, m.tail());
            (m.clone(), c * r(BigInt::from(s)))
        }))
    }

    /// `α(m) = Σ_i α_i γ_i(m)` for `m ≥ 1`.
    fn annihilate_vector(&self, v: &GradedVector, alpha: &[i64], m: u32) -> GradedVector {
        let mut out = GradedVector::zero();
        for (i, a) in alpha.iter().enumerate() {
            if *a != 0 {
                out.add_scaled(&self.annihilate(v, i, m), &r(BigInt::from(*a)));
            }
        }
        out
    }

    /// `E^+(-α, z) v` summed over all degrees.
    fn e_plus(&self, v: &GradedVector, alpha: &[i64]) -> GradedVector {
        if alpha.iter().all(|x| *x == 0) || v.is_zero() {
            return v.clone();
        }
        let max_e = v.terms().map(|(m, _)| m.oscillator_degree()).max().unwrap_or(0);
        // F_e = (1/e) Σ_{n=1}^{e} (-α(n)) F_{e-n}
        let mut parts: Vec<GradedVector> = vec![v.clone()];
        for e in 1..=max_e {
            let mut acc = GradedVector::zero();
            for n in 1..=e {
                let prev = &parts[(e - n) as usize];
                if prev.is_zero() {
                    continue;
                }
                acc.add_scaled(&self.annihilate_vector(prev, alpha, n), &r(BigInt::from(-1)));
            }
            parts.push(acc.scale(&Rational::new(1.into(), BigInt::from(e))));
        }
        let mut out = GradedVector::zero();
        for p in &parts {
            out.add_scaled(p, &r(1.into()));
        }
        out
    }

    /// Degree-`e` part of `E^-(-α, z)`, memoized per `(α, e)`.
    pub(crate) fn e_minus(&self, alpha: &[i64], e: u32) -> Arc<Polynomial> {
        if alpha.iter().all(|x| *x == 0) {
            return Arc::new(if e == 0 { vec![(Vec::new(), r(1.into()))] } else { Vec::new() });
        }
        let key = (alpha.to_vec(), e);
        if let Some(p) = self.caches.e_minus.read().expect("cache lock").get(&key) {
            return p.clone();
        }
        let poly = if e == 0 {
            vec![(Vec::new(), r(1.into()))]
        } else {
            // E_e = (1/e) Σ_{n=1}^{e} α(-n) E_{e-n}
            let mut acc = GradedVector::zero();
            let rank = self.rank();
            for n in 1..=e {
                let prev = self.e_minus(alpha, e - n);
                for (modes, c) in prev.iter() {
                    let base = FockMonomial::new(modes.clone(), vec![0; rank]);
                    for (i, a) in alpha.iter().enumerate() {
                        if *a != 0 {
                            acc.add_term(base.with_mode(Mode { n, i }), c * r(BigInt::from(*a)));
                        }
                    }
                }
            }
            let inv = Rational::new(1.into(), BigInt::from(e));
            acc.terms().map(|(m, c)| (m.modes().to_vec(), c * &inv)).collect()
        };
        let poly = Arc::new(poly);
        self.caches.e_minus.write().expect("cache lock").insert(key, poly.clone());
        poly
    }

    /// `v_k w` for every `k` whose result degree is at most the cutoff,
    /// indexed by result degree and memoized per pair.
    pub(crate) fn monomial_products(&self, v: &FockMonomial, w: &FockMonomial) -> Arc<Vec<GradedVector>> {
        let key = (v.clone(), w.clone());
        if let Some(p) = self.caches.products.read().expect("cache lock").get(&key) {
            return p.clone();
        }
        let out = Arc::new(self.compute_products(v, w));
        self.caches.products.write().expect("cache lock").insert(key, out.clone());
        out
    }

    fn compute_products(&self, v: &FockMonomial, w: &FockMonomial) -> Vec<GradedVector> {
        let top = self.cutoff;
        let alpha = v.tail();
        let beta = w.tail();
        let fields = v.modes();
        let k = fields.len();
        let sign = r(BigInt::from(self.cocycle.sign(alpha, beta)));
        let shifted_tail: Vec<i64> = alpha.iter().zip(beta).map(|(a, b)| a + b).collect();
        let mut out = vec![GradedVector::zero(); top as usize + 1];
        let start = GradedVector::monomial(w.clone());
        for subset in 0..1usize << k {
            let creation: Vec<Mode> =
                (0..k).filter(|j| subset >> j & 1 == 1).map(|j| fields[j]).collect();
            let min_gap: u32 = creation.iter().map(|m| m.n).sum();
            let mut st = start.clone();
            for j in (0..k).filter(|j| subset >> j & 1 == 0) {
                st = self.annihilation_field(&st, fields[j]);
                if st.is_zero() {
                    break;
                }
            }
            if st.is_zero() {
                continue;
            }
            st = self.e_plus(&st, alpha);
            for (mono, c) in st.terms() {
                let shifted = mono.with_tail(shifted_tail.clone());
                let d = shifted.degree(&self.lattice);
                let coef = c * &sign;
                for target in (d + min_gap)..=top {
                    self.distribute(&shifted, coef.clone(), &creation, target - d, alpha, &mut out[target as usize]);
                }
            }
        }
        out
    }

    /// Annihilation half of `∂^{(n-1)}γ_i(z)`: `Σ_{m≥0} binom(-m-1, n-1) γ_i(m)`.
    fn annihilation_field(&self, st: &GradedVector, field: Mode) -> GradedVector {
        let n = field.n;
        let mut out = self.zero_mode(st, field.i).scale(&r(binomial(-1, n - 1)));
        let max_m = st.terms().map(|(m, _)| m.oscillator_degree()).max().unwrap_or(0);
        for m in 1..=max_m {
            let a = self.annihilate(st, field.i, m);
            if !a.is_zero() {
                out.add_scaled(&a, &r(binomial(-(i64::from(m)) - 1, n - 1)));
            }
        }
        out
    }

    /// Spreads the remaining degree `gap` over the creation halves of the
    /// fields in `creation` and over `E^-(-α,z)`.
    fn distribute(
        &self,
        mono: &FockMonomial,
        coef: Rational,
        creation: &[Mode],
        gap: u32,
        alpha: &[i64],
        out: &mut GradedVector,
    ) {
        match creation.split_first() {
            None => {
                for (modes, c) in self.e_minus(alpha, gap).iter() {
                    out.add_term(mono.with_modes(modes), &coef * c);
                }
            }
            Some((field, rest)) => {
                let reserve: u32 = rest.iter().map(|m| m.n).sum();
                // creation part: Σ_{m≥n} binom(m-1, n-1) γ_i(-m)
                for m in field.n..=gap.saturating_sub(reserve) {
                    let b = binomial(i64::from(m) - 1, field.n - 1);
                    if b.is_zero() {
                        continue;
                    }
                    let next = mono.with_mode(Mode { n: m, i: field.i });
                    self.distribute(&next, &coef * r(b), rest, gap - m, alpha, out);
                }
            }
        }
    }
}
