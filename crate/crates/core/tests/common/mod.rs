//! Brute-force lattice oracles that share no code with the library's
//! normal forms: membership and index come from gcds of minors.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use voaforms::exact::{int, Rational, ZLattice};

pub type Gens = Vec<Vec<i64>>;

fn det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        _ => (0..m.len())
            .map(|j| {
                let minor: Vec<Vec<i64>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| *x).collect()).collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == k).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect()
}

/// gcd of all `k × k` minors.
fn minor_gcd(rows: &[Vec<i64>], dim: usize, k: usize) -> i64 {
    let mut g = 0i64;
    for rs in subsets(rows.len(), k) {
        for cs in subsets(dim, k) {
            let m: Vec<Vec<i64>> = rs.iter().map(|&r| cs.iter().map(|&c| rows[r][c]).collect()).collect();
            g = g.gcd(&det(&m));
        }
    }
    g
}

pub fn rank(rows: &[Vec<i64>], dim: usize) -> usize {
    (1..=dim.min(rows.len())).rev().find(|&k| minor_gcd(rows, dim, k) != 0).unwrap_or(0)
}

/// `[sat : L]` where `sat` is the saturation of `L` in `Z^dim`.
pub fn covolume(rows: &[Vec<i64>], dim: usize) -> i64 {
    let r = rank(rows, dim);
    if r == 0 {
        1
    } else {
        minor_gcd(rows, dim, r).abs()
    }
}

pub fn member(rows: &[Vec<i64>], dim: usize, x: &[i64]) -> bool {
    let mut with = rows.to_vec();
    with.push(x.to_vec());
    rank(&with, dim) == rank(rows, dim) && covolume(&with, dim) == covolume(rows, dim)
}

/// Least `e ≥ 1` with `e·A ⊆ B`, scanning up to the index.
pub fn exponent(a: &[Vec<i64>], b: &[Vec<i64>], dim: usize) -> i64 {
    let bound = covolume(b, dim) / covolume(a, dim);
    (1..=bound)
        .find(|e| a.iter().all(|v| member(b, dim, &v.iter().map(|x| x * e).collect::<Vec<_>>())))
        .expect("exponent divides the index")
}

pub fn to_lattice(rows: &[Vec<i64>], dim: usize) -> ZLattice {
    let gens: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
    ZLattice::from_generators(dim, &gens).unwrap()
}

pub fn contains(l: &ZLattice, x: &[i64]) -> bool {
    l.contains(&x.iter().map(|&v| int(v)).collect::<Vec<_>>())
}

pub fn box_points(dim: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out.into_iter().flat_map(|p| (-r..=r).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    out
}

pub fn random_gens(rng: &mut ChaCha8Rng, dim: usize, count: usize, bound: i64) -> Gens {
    (0..count).map(|_| (0..dim).map(|_| rng.gen_range(-bound..=bound)).collect()).collect()
}

/// Random integer combinations of `gens` with coefficients in `-c..=c`.
pub fn random_sub(rng: &mut ChaCha8Rng, gens: &[Vec<i64>], count: usize, c: i64) -> Gens {
    let dim = gens.first().map_or(0, Vec::len);
    (0..count)
        .map(|_| {
            let coeffs: Vec<i64> = gens.iter().map(|_| rng.gen_range(-c..=c)).collect();
            (0..dim).map(|j| gens.iter().zip(&coeffs).map(|(g, k)| g[j] * k).sum()).collect()
        })
        .collect()
}

pub fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

pub fn is_zero_row(r: &[i64]) -> bool {
    r.iter().all(|x| x.is_zero())
}

pub fn abs(x: &BigInt) -> BigInt {
    x.abs()
}
