//! Hermite and Smith normal forms of integer matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub type IntRow = Vec<BigInt>;

fn sub_multiple(target: &mut [BigInt], src: &[BigInt], q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for (t, s) in target.iter_mut().zip(src) {
        if !s.is_zero() {
            *t -= q * s;
        }
    }
}

/// Row-style Hermite normal form of the row lattice spanned by `rows`.
///
/// Output rows are in echelon order with strictly increasing pivot columns,
/// positive pivots, and entries above each pivot reduced into `[0, pivot)`.
/// Zero rows are dropped. The result depends only on the lattice spanned.
pub fn hnf_int(rows: &[IntRow], ncols: usize) -> Vec<IntRow> {
    let mut m: Vec<IntRow> =
        rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        loop {
            // smallest nonzero |entry| in column c among rows r..
            let best = (r..m.len())
                .filter(|&i| !m[i][c].is_zero())
                .min_by(|&a, &b| m[a][c].abs().cmp(&m[b][c].abs()));
            let Some(p) = best else { break };
            m.swap(r, p);
            let mut done = true;
            let (head, tail) = m.split_at_mut(r + 1);
            let pivot = &head[r];
            for row in tail.iter_mut() {
                if row[c].is_zero() {
                    continue;
                }
                let q = row[c].div_floor(&pivot[c]);
                sub_multiple(row, pivot, &q);
                if !row[c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[r][c].is_zero() {
            continue;
        }
        if m[r][c].is_negative() {
            for x in m[r].iter_mut() {
                *x = -&*x;
            }
        }
        let (head, tail) = m.split_at_mut(r);
        let pivot = &tail[0];
        for row in head.iter_mut() {
            let q = row[c].div_floor(&pivot[c]);
            sub_multiple(row, pivot, &q);
        }
        r += 1;
    }
    m.truncate(r);
    m.retain(|row| row.iter().any(|x| !x.is_zero()));
    m
}

/// Pivot column of an echelon row.
pub fn pivot_col(row: &[BigInt]) -> Option<usize> {
    row.iter().position(|x| !x.is_zero())
}

/// Integer kernel of the row map `x -> x * rows`, as a HNF basis.
pub fn integer_left_kernel(rows: &[IntRow], ncols: usize) -> Vec<IntRow> {
    let n = rows.len();
    let aug: Vec<IntRow> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = r.clone();
            v.extend((0..n).map(|j| BigInt::from(u8::from(i == j))));
            v
        })
        .collect();
    let h = hnf_int(&aug, ncols + n);
    let kernel: Vec<IntRow> = h
        .into_iter()
        .filter(|r| r[..ncols].iter().all(Zero::is_zero))
        .map(|r| r[ncols..].to_vec())
        .collect();
    hnf_int(&kernel, n)
}

/// Smith normal form invariants `d_1 | d_2 | ... | d_k` (nonzero ones only).
pub fn smith_invariants(rows: &[IntRow], ncols: usize) -> Vec<BigInt> {
    let mut m: Vec<IntRow> = rows.to_vec();
    let nrows = m.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // find smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !m[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..nrows {
            if m[i][t].is_zero() {
                continue;
            }
            let q = m[i][t].div_floor(&m[t][t]);
            let pivot = m[t].clone();
            sub_multiple(&mut m[i], &pivot, &q);
            if !m[i][t].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..ncols {
            if m[t][j].is_zero() {
                continue;
            }
            let q = m[t][j].div_floor(&m[t][t]);
            for row in m.iter_mut() {
                let v = &row[t] * &q;
                row[j] -= v;
            }
            if !m[t][j].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // enforce divisibility of the rest by the pivot
        let p = m[t][t].clone();
        let bad = (t + 1..nrows)
            .flat_map(|i| (t + 1..ncols).map(move |j| (i, j)))
            .find(|&(i, j)| !m[i][j].is_multiple_of(&p));
        if let Some((i, _)) = bad {
            let src = m[i].clone();
            for (a, b) in m[t].iter_mut().zip(&src) {
                *a += b;
            }
            continue;
        }
        diag.push(p.abs());
        t += 1;
    }
    diag
}
