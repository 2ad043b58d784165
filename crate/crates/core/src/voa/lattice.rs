//! Positive definite even lattices and their 2-cocycles.

use serde::{Deserialize, Serialize};

use crate::exact::{int, QMatrix};

use super::VoaError;

/// Lattice vector in coordinates of the chosen basis `γ_1, …, γ_d`.
pub type LatticeVector = Vec<i64>;

/// `L = ⊕ Z γ_i` with an even, positive definite Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenLattice {
    gram: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct LatticeJson {
    pub rank: usize,
    pub gram: Vec<Vec<i64>>,
}

impl EvenLattice {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self, VoaError> {
        let d = gram.len();
        if gram.iter().any(|r| r.len() != d) {
            return Err(VoaError::InvalidLattice("gram is not square".into()));
        }
        for i in 0..d {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(VoaError::InvalidLattice("gram not symmetric".into()));
                }
            }
            if gram[i][i] % 2 != 0 {
                return Err(VoaError::InvalidLattice("lattice not even".into()));
            }
        }
        // Sylvester: all leading principal minors positive.
        for k in 1..=d {
            let rows: Vec<Vec<_>> = (0..k).map(|i| (0..k).map(|j| int(gram[i][j])).collect()).collect();
            let m = QMatrix::from_rows(&rows).expect("square");
            if !leading_minor_positive(&m) {
                return Err(VoaError::InvalidLattice("gram not positive definite".into()));
            }
        }
        Ok(EvenLattice { gram })
    }

    pub fn a1() -> Self {
        Self::new(vec![vec![2]]).expect("A1 is even")
    }

    pub fn a2() -> Self {
        Self::new(vec![vec![2, 1], vec![1, 2]]).expect("A2 is even")
    }

    pub fn from_json(j: &LatticeJson) -> Result<Self, VoaError> {
        if j.gram.len() != j.rank {
            return Err(VoaError::InvalidLattice(format!("rank {} but gram has {} rows", j.rank, j.gram.len())));
        }
        Self::new(j.gram.clone())
    }

    pub fn to_json(&self) -> LatticeJson {
        LatticeJson { rank: self.rank(), gram: self.gram.clone() }
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn gram_matrix(&self) -> QMatrix {
        let rows: Vec<Vec<_>> = self.gram.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        QMatrix::from_rows(&rows).expect("square gram")
    }

    pub fn pair(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for (i, ai) in a.iter().enumerate() {
            if *ai == 0 {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                s += ai * self.gram[i][j] * bj;
            }
        }
        s
    }

    /// `⟨γ_i, α⟩`.
    pub fn pair_basis(&self, i: usize, a: &[i64]) -> i64 {
        self.gram[i].iter().zip(a).map(|(g, x)| g * x).sum()
    }

    pub fn norm(&self, a: &[i64]) -> i64 {
        self.pair(a, a)
    }

    /// All `α` with `⟨α,α⟩/2 ≤ max_weight`, sorted.
    pub fn vectors_up_to(&self, max_weight: u32) -> Vec<LatticeVector> {
        let d = self.rank();
        let inv = self.gram_matrix().inverse().expect("positive definite");
        // |α_i|^2 ≤ ⟨α,α⟩ (G^{-1})_ii
        let bounds: Vec<i64> = (0..d)
            .map(|i| {
                let lim = &inv[(i, i)] * int(2 * i64::from(max_weight));
                let mut b = 0i64;
                while int((b + 1) * (b + 1)) <= lim {
                    b += 1;
                }
                b
            })
            .collect();
        let mut out = Vec::new();
        let mut cur = vec![0i64; d];
        fn rec(lat: &EvenLattice, bounds: &[i64], i: usize, cur: &mut Vec<i64>, cap: i64, out: &mut Vec<LatticeVector>) {
            if i == bounds.len() {
                if lat.norm(cur) <= cap {
                    out.push(cur.clone());
                }
                return;
            }
            for x in -bounds[i]..=bounds[i] {
                cur[i] = x;
                rec(lat, bounds, i + 1, cur, cap, out);
            }
            cur[i] = 0;
        }
        rec(self, &bounds, 0, &mut cur, 2 * i64::from(max_weight), &mut out);
        out.sort();
        out
    }
}

fn leading_minor_positive(m: &QMatrix) -> bool {
    // determinant via elimination
    let n = m.rows();
    let mut a = m.clone();
    let mut det = int(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| a[(i, c)] != int(0)) else { return false };
        if p != c {
            a.swap_rows(p, c);
            det = -det;
        }
        let piv = a[(c, c)].clone();
        det *= &piv;
        for i in c + 1..n {
            let f = &a[(i, c)] / &piv;
            for j in c..n {
                let x = &a[(c, j)] * &f;
                a[(i, j)] -= x;
            }
        }
    }
    det > int(0)
}

/// Bimultiplicative sign function `ε` with `ε(α,β)ε(β,α) = (-1)^{⟨α,β⟩}`.
///
/// On basis pairs `ε(γ_i, γ_j) = 1` for `i ≤ j` and `(-1)^{⟨γ_i,γ_j⟩}` for `i > j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    negative: Vec<Vec<bool>>,
}

impl Cocycle {
    pub fn standard(lattice: &EvenLattice) -> Self {
        let d = lattice.rank();
        let negative = (0..d)
            .map(|i| (0..d).map(|j| i > j && lattice.gram()[i][j].rem_euclid(2) == 1).collect())
            .collect();
        Cocycle { negative }
    }

    /// Sign table on basis pairs.
    pub fn basis_sign(&self, i: usize, j: usize) -> i64 {
        if self.negative[i][j] { -1 } else { 1 }
    }

    pub fn sign(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut parity = 0i64;
        for (i, row) in self.negative.iter().enumerate() {
            for (j, neg) in row.iter().enumerate() {
                if *neg {
                    parity += a[i] * b[j];
                }
            }
        }
        if parity.rem_euclid(2) == 0 { 1 } else { -1 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(EvenLattice::new(vec![vec![1]]).is_err());
        assert!(EvenLattice::new(vec![vec![2, 3], vec![3, 2]]).is_err());
        assert!(EvenLattice::new(vec![vec![2, 1], vec![0, 2]]).is_err());
        assert!(EvenLattice::new(vec![vec![-2]]).is_err());
        assert_eq!(EvenLattice::a2().rank(), 2);
    }

    #[test]
    fn short_vectors() {
        let a1 = EvenLattice::a1();
        assert_eq!(a1.vectors_up_to(1), vec![vec![-1], vec![0], vec![1]]);
        assert_eq!(a1.vectors_up_to(4).len(), 5);
        let a2 = EvenLattice::a2();
        assert_eq!(a2.vectors_up_to(1).len(), 7);
        assert_eq!(a2.vectors_up_to(3).len(), 13);
    }

    #[test]
    fn cocycle_commutator() {
        let l = EvenLattice::new(vec![vec![2, 1, 0], vec![1, 4, -1], vec![0, -1, 2]]).unwrap();
        let eps = Cocycle::standard(&l);
        let vs = [vec![1, 0, 0], vec![0, 1, 1], vec![2, -1, 3], vec![-1, -1, 1]];
        for a in &vs {
            for b in &vs {
                let expected = if l.pair(a, b).rem_euclid(2) == 0 { 1 } else { -1 };
                assert_eq!(eps.sign(a, b) * eps.sign(b, a), expected);
                let ab: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                for c in &vs {
                    assert_eq!(eps.sign(&ab, c), eps.sign(a, c) * eps.sign(b, c));
                }
            }
        }
    }
}
