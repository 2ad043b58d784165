//! Finite-dimensional commutative algebras with a bilinear form, and the
//! dihedral 2A algebra spanned by three conformal vectors.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{format_rational, int, parse_rational, rat, ExactError, QMatrix, Rational};
use crate::forms::gram_table;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("structure constants have the wrong shape")]
    Shape,
    #[error("product is not commutative at basis pair ({0}, {1})")]
    NotCommutative(usize, usize),
    #[error("form is not symmetric")]
    NotSymmetric,
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// `x_i · x_j = Σ_k c[i][j][k] x_k`, with a symmetric form on the basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAlgebra {
    labels: Vec<String>,
    constants: Vec<Vec<Vec<Rational>>>,
    gram: QMatrix,
}

impl FiniteAlgebra {
    pub fn new(labels: Vec<String>, constants: Vec<Vec<Vec<Rational>>>, gram: QMatrix) -> Result<Self, AlgebraError> {
        let n = labels.len();
        let shaped = constants.len() == n
            && constants.iter().all(|row| row.len() == n && row.iter().all(|c| c.len() == n))
            && gram.rows() == n
            && gram.cols() == n;
        if !shaped {
            return Err(AlgebraError::Shape);
        }
        for i in 0..n {
            for j in 0..i {
                if constants[i][j] != constants[j][i] {
                    return Err(AlgebraError::NotCommutative(i, j));
                }
            }
        }
        if !gram.is_symmetric() {
            return Err(AlgebraError::NotSymmetric);
        }
        Ok(FiniteAlgebra { labels, constants, gram })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn gram(&self) -> &QMatrix {
        &self.gram
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Rational> {
        (0..self.dim()).map(|k| int(i64::from(k == i))).collect()
    }

    pub fn product(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let n = self.dim();
        let mut out = vec![int(0); n];
        for i in 0..n {
            for j in 0..n {
                let c = &x[i] * &y[j];
                if c == int(0) {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o += &c * &self.constants[i][j][k];
                }
            }
        }
        out
    }

    /// Matrix of left multiplication by `x`; column `j` holds `x · x_j`.
    pub fn ad_matrix(&self, x: &[Rational]) -> QMatrix {
        let n = self.dim();
        let mut m = QMatrix::zeros(n, n);
        for j in 0..n {
            for (i, v) in self.product(x, &self.basis_vector(j)).into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    /// Gram matrix of `κ(x, y) = Tr(ad(x) ad(y))`.
    pub fn killing_form(&self) -> QMatrix {
        let n = self.dim();
        let ads: Vec<QMatrix> = (0..n).map(|i| self.ad_matrix(&self.basis_vector(i))).collect();
        let mut g = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] = (&ads[i] * &ads[j]).trace();
            }
        }
        g
    }

    pub fn form_value(g: &QMatrix, x: &[Rational], y: &[Rational]) -> Rational {
        let gy = g.apply(y);
        x.iter().zip(&gy).map(|(a, b)| a * b).sum()
    }

    /// Whether `G(x·y, z) = G(x, y·z)` on every basis triple.
    pub fn is_associative_form(&self, g: &QMatrix) -> AssociativityCheck {
        let n = self.dim();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (bx, by, bz) = (self.basis_vector(x), self.basis_vector(y), self.basis_vector(z));
                    let left = Self::form_value(g, &self.product(&bx, &by), &bz);
                    let right = Self::form_value(g, &bx, &self.product(&by, &bz));
                    if left != right {
                        let witness = AssociativityWitness {
                            triple: [self.labels[x].clone(), self.labels[y].clone(), self.labels[z].clone()],
                            left: format_rational(&left),
                            right: format_rational(&right),
                        };
                        return AssociativityCheck { associative: false, witness: Some(witness) };
                    }
                }
            }
        }
        AssociativityCheck { associative: true, witness: None }
    }

    pub fn to_json(&self) -> AlgebraJson {
        let s = |v: &[Rational]| v.iter().map(format_rational).collect::<Vec<_>>();
        AlgebraJson {
            dim: self.dim(),
            labels: self.labels.clone(),
            constants: self.constants.iter().map(|row| row.iter().map(|c| s(c)).collect()).collect(),
            gram: gram_table(&self.gram),
        }
    }

    pub fn from_json(j: &AlgebraJson) -> Result<Self, AlgebraError> {
        let p = |v: &[String]| v.iter().map(|x| parse_rational(x)).collect::<Result<Vec<_>, _>>();
        let constants = j
            .constants
            .iter()
            .map(|row| row.iter().map(|c| p(c)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let gram = QMatrix::from_rows(&j.gram.iter().map(|r| p(r)).collect::<Result<Vec<_>, _>>()?)?;
        if j.dim != j.labels.len() {
            return Err(AlgebraError::Shape);
        }
        Self::new(j.labels.clone(), constants, gram)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub dim: usize,
    pub labels: Vec<String>,
    pub constants: Vec<Vec<Vec<String>>>,
    pub gram: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssociativityWitness {
    pub triple: [String; 3],
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssociativityCheck {
    pub associative: bool,
    pub witness: Option<AssociativityWitness>,
}

/// The `r` with `g1 = r·g2`, if any. A zero `g2` only matches a zero `g1`.
pub fn proportionality_check(g1: &QMatrix, g2: &QMatrix) -> Option<Rational> {
    if g1.rows() != g2.rows() || g1.cols() != g2.cols() {
        return None;
    }
    let pivot = g2.entries().iter().position(|x| *x != int(0));
    let r = match pivot {
        Some(p) => &g1.entries()[p] / &g2.entries()[p],
        None => return g1.is_zero().then(|| int(0)),
    };
    (g1 == &g2.scale(&r)).then_some(r)
}

/// `p·p = p`, `p·q = (p+q−r)/8` for distinct `p, q` with `r` the third,
/// `(p,p) = 1`, `(p,q) = 1/8`.
pub fn dihedral_2a() -> FiniteAlgebra {
    let eighth = rat(1, 8);
    let mut constants = vec![vec![vec![int(0); 3]; 3]; 3];
    for p in 0..3 {
        for q in 0..3 {
            if p == q {
                constants[p][q][p] = int(1);
            } else {
                let r = 3 - p - q;
                constants[p][q][p] = eighth.clone();
                constants[p][q][q] = eighth.clone();
                constants[p][q][r] = -eighth.clone();
            }
        }
    }
    let mut gram = QMatrix::zeros(3, 3);
    for i in 0..3 {
        for j in 0..3 {
            gram[(i, j)] = if i == j { int(1) } else { eighth.clone() };
        }
    }
    let labels = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
    FiniteAlgebra::new(labels, constants, gram).expect("2A constants are commutative")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dihedral2aReport {
    pub ad_a: Vec<Vec<String>>,
    pub ad_b: Vec<Vec<String>>,
    pub ad_c: Vec<Vec<String>>,
    pub a_squared: Vec<Vec<String>>,
    pub ab: Vec<Vec<String>>,
    pub ac: Vec<Vec<String>>,
    pub killing_gram: Vec<Vec<String>>,
    pub nu_gram: Vec<Vec<String>>,
    /// `Tr(AB) = κ(a·a, b)`.
    pub trace_ab: String,
    /// `Tr(A·ad(a·b)) = κ(a, a·b)`.
    pub trace_a_ad_ab: String,
    pub nu_associative: AssociativityCheck,
    pub killing_associative: AssociativityCheck,
    pub proportional: Option<String>,
}

impl Dihedral2aReport {
    pub fn compute() -> Self {
        let alg = dihedral_2a();
        let [a, b, c] = [0, 1, 2].map(|i| alg.ad_matrix(&alg.basis_vector(i)));
        let ab_vec = alg.product(&alg.basis_vector(0), &alg.basis_vector(1));
        let kappa = alg.killing_form();
        Dihedral2aReport {
            ad_a: gram_table(&a),
            ad_b: gram_table(&b),
            ad_c: gram_table(&c),
            a_squared: gram_table(&(&a * &a)),
            ab: gram_table(&(&a * &b)),
            ac: gram_table(&(&a * &c)),
            killing_gram: gram_table(&kappa),
            nu_gram: gram_table(alg.gram()),
            trace_ab: format_rational(&(&a * &b).trace()),
            trace_a_ad_ab: format_rational(&(&a * &alg.ad_matrix(&ab_vec)).trace()),
            nu_associative: alg.is_associative_form(alg.gram()),
            killing_associative: alg.is_associative_form(&kappa),
            proportional: proportionality_check(&kappa, alg.gram()).map(|r| format_rational(&r)),
        }
    }
}

fn write_matrix(f: &mut String, name: &str, m: &[Vec<String>]) {
    let width = m.iter().flatten().map(String::len).max().unwrap_or(1);
    let _ = writeln!(f, "{name}:");
    for row in m {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:>width$}")).collect();
        let _ = writeln!(f, "  [ {} ]", cells.join("  "));
    }
}

impl fmt::Display for Dihedral2aReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        for (name, m) in [
            ("ad(a) = A", &self.ad_a),
            ("ad(b) = B", &self.ad_b),
            ("ad(c) = C", &self.ad_c),
            ("A^2", &self.a_squared),
            ("AB", &self.ab),
            ("AC", &self.ac),
            ("Killing form Tr(ad(x)ad(y))", &self.killing_gram),
            ("natural form", &self.nu_gram),
        ] {
            write_matrix(&mut s, name, m);
        }
        let verdict = |c: &AssociativityCheck| match &c.witness {
            None => "associative".to_string(),
            Some(w) => format!(
                "not associative: ({x}*{y}, {z}) = {} but ({x}, {y}*{z}) = {}",
                w.left,
                w.right,
                x = w.triple[0],
                y = w.triple[1],
                z = w.triple[2]
            ),
        };
        let _ = writeln!(s, "Tr(AB) = {}", self.trace_ab);
        let _ = writeln!(s, "Tr(A ad(a*b)) = {}", self.trace_a_ad_ab);
        let _ = writeln!(s, "natural form: {}", verdict(&self.nu_associative));
        let _ = writeln!(s, "Killing form: {}", verdict(&self.killing_associative));
        let _ = match &self.proportional {
            Some(r) => writeln!(s, "Killing form = {r} * natural form"),
            None => writeln!(s, "Killing form and natural form are not proportional"),
        };
        f.write_str(&s)
    }
}
