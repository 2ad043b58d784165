use super::*;
use crate::exact::{int, rat};
use num_traits::Signed;

fn a1(n: u32) -> TruncatedVOA {
    TruncatedVOA::new(EvenLattice::a1(), n)
}

fn h(n: u32, i: usize, tail: Vec<i64>) -> GradedVector {
    GradedVector::monomial(FockMonomial::new(vec![Mode { n, i }], tail))
}

fn e(tail: Vec<i64>) -> GradedVector {
    GradedVector::monomial(FockMonomial::exp(tail))
}

/// dim V_d from theta(q) * prod (1-q^n)^{-rank}, with theta counted by a
/// plain box search that does not use `vectors_up_to`.
fn dimension_oracle(gram: &[Vec<i64>], max_d: usize) -> Vec<usize> {
    let rank = gram.len();
    let mut theta = vec![0usize; max_d + 1];
    let bound = 2 * max_d as i64 + 2;
    let mut cur = vec![-bound; rank];
    loop {
        let mut norm = 0;
        for i in 0..rank {
            for j in 0..rank {
                norm += cur[i] * gram[i][j] * cur[j];
            }
        }
        if norm % 2 == 0 && (norm / 2) as usize <= max_d {
            theta[(norm / 2) as usize] += 1;
        }
        let mut k = 0;
        loop {
            if k == rank {
                // done
                let mut series = vec![0usize; max_d + 1];
                series[0] = 1;
                for _ in 0..rank {
                    for n in 1..=max_d {
                        for d in n..=max_d {
                            series[d] += series[d - n];
                        }
                    }
                }
                return (0..=max_d)
                    .map(|d| (0..=d).map(|w| theta[w] * series[d - w]).sum())
                    .collect();
            }
            cur[k] += 1;
            if cur[k] <= bound {
                break;
            }
            cur[k] = -bound;
            k += 1;
        }
    }
}

#[test]
fn graded_dimensions_match_generating_function() {
    let v = a1(6);
    let oracle = dimension_oracle(v.lattice().gram(), 6);
    let got: Vec<usize> = (0..=6).map(|d| v.dim(d)).collect();
    assert_eq!(got, oracle);
    assert_eq!(got, vec![1, 3, 4, 7, 13, 19, 29]);
    let v2 = TruncatedVOA::new(EvenLattice::a2(), 4);
    let got2: Vec<usize> = (0..=4).map(|d| v2.dim(d)).collect();
    assert_eq!(got2, dimension_oracle(v2.lattice().gram(), 4));
}

#[test]
fn graded_basis_small_cases() {
    let v = a1(3);
    assert_eq!(v.graded_basis(0).unwrap(), &[FockMonomial::vacuum(1)]);
    let b1 = v.graded_basis(1).unwrap();
    assert_eq!(b1.len(), 3);
    assert!(b1.contains(&FockMonomial::exp(vec![1])));
    assert!(b1.contains(&FockMonomial::exp(vec![-1])));
    assert!(v.graded_basis(4).is_err());
    let b2 = v.graded_basis(2).unwrap();
    assert!(b2.contains(&FockMonomial::new(vec![Mode { n: 1, i: 0 }], vec![1])));
    assert!(b2.contains(&FockMonomial::new(vec![Mode { n: 2, i: 0 }], vec![0])));
}

#[test]
fn exponential_products() {
    let v = a1(3);
    let eps = v.cocycle().sign(&[1], &[-1]);
    let p1 = v.vertex_product(&e(vec![1]), 1, &e(vec![-1]), Truncation::Error).unwrap();
    assert_eq!(p1, v.vacuum().scale(&int(eps)));
    let p0 = v.vertex_product(&e(vec![1]), 0, &e(vec![-1]), Truncation::Error).unwrap();
    assert_eq!(p0, h(1, 0, vec![0]).scale(&int(eps)));
    // e^γ_{-1} e^{-γ} = ½(γ(-1)² + γ(-2)) ε
    let pm1 = v.vertex_product(&e(vec![1]), -1, &e(vec![-1]), Truncation::Error).unwrap();
    let sq = GradedVector::monomial(FockMonomial::new(vec![Mode { n: 1, i: 0 }; 2], vec![0]));
    let expected = (&sq + &h(2, 0, vec![0])).scale(&rat(eps, 2));
    assert_eq!(pm1, expected);
}

#[test]
fn heisenberg_action() {
    let v = a1(3);
    let hv = h(1, 0, vec![0]);
    // γ(-1)_0 e^γ = ⟨γ,γ⟩ e^γ
    assert_eq!(v.vertex_product(&hv, 0, &e(vec![1]), Truncation::Error).unwrap(), e(vec![1]).scale(&int(2)));
    // γ(-1)_{-1} e^γ = γ(-1) e^γ
    assert_eq!(v.vertex_product(&hv, -1, &e(vec![1]), Truncation::Error).unwrap(), h(1, 0, vec![1]));
    // γ(-1)_1 γ(-1) vac = 2 vac
    assert_eq!(v.vertex_product(&hv, 1, &hv, Truncation::Error).unwrap(), v.vacuum().scale(&int(2)));
}

#[test]
fn cutoff_handling() {
    let v = a1(2);
    let x = e(vec![1]);
    assert!(matches!(
        v.vertex_product(&x, -3, &x, Truncation::Error),
        Err(VoaError::CutoffExceeded { degree: 4, cutoff: 2 })
    ));
    assert!(v.vertex_product(&x, -3, &x, Truncation::Drop).unwrap().is_zero());
}

#[test]
fn vacuum_products() {
    let v = a1(4);
    let x = h(1, 0, vec![1]);
    assert_eq!(v.vertex_product(&v.vacuum(), -1, &x, Truncation::Error).unwrap(), x);
    assert!(v.vertex_product(&v.vacuum(), 0, &x, Truncation::Error).unwrap().is_zero());
    assert!(v.vertex_product(&v.vacuum(), -2, &x, Truncation::Error).unwrap().is_zero());
    assert_eq!(v.vertex_product(&x, -1, &v.vacuum(), Truncation::Error).unwrap(), x);
    assert!(v.vertex_product(&x, 0, &v.vacuum(), Truncation::Error).unwrap().is_zero());
}

#[test]
fn form_values() {
    let v = a1(3);
    assert_eq!(v.bilinear_form(&v.vacuum(), &v.vacuum()), int(1));
    let hv = h(1, 0, vec![0]);
    // invariance forces ⟨γ(-1),γ(-1)⟩ = -⟨γ,γ⟩
    assert_eq!(v.bilinear_form(&hv, &hv), int(-2));
    assert_eq!(v.bilinear_form(&e(vec![1]), &e(vec![1])), int(0));
    assert_eq!(v.bilinear_form(&e(vec![1]), &e(vec![-1])).abs(), int(1));
    assert!(v.bilinear_form(&hv, &h(2, 0, vec![0])).is_zero());
}

#[test]
fn gram_is_symmetric_and_nondegenerate() {
    let v = TruncatedVOA::new(EvenLattice::a2(), 3);
    for d in 0..=3 {
        let g = v.gram(d);
        assert!(g.is_symmetric());
        assert!(g.inverse().is_some(), "degree {d}");
    }
}

#[test]
fn virasoro() {
    let v = a1(4);
    let sq = GradedVector::monomial(FockMonomial::new(vec![Mode { n: 1, i: 0 }; 2], vec![0]));
    assert_eq!(v.virasoro_element(), &sq.scale(&rat(1, 4)));
    for d in 0..=4 {
        for m in v.graded_basis(d).unwrap() {
            let x = GradedVector::monomial(m.clone());
            assert_eq!(v.l_apply(0, &x).unwrap(), x.scale(&int(i64::from(d))));
        }
    }
    let w = v.virasoro_element().clone();
    assert_eq!(v.bilinear_form(&w, &w), rat(1, 2));
    let v2 = TruncatedVOA::new(EvenLattice::a2(), 2);
    let w2 = v2.virasoro_element().clone();
    assert_eq!(v2.bilinear_form(&w2, &w2), int(1));
    assert!(v.l_apply(-1, &v.vacuum()).unwrap().is_zero());
}

#[test]
fn quasi_primary_and_translation() {
    let v = a1(4);
    assert!(v.is_quasi_primary(&v.vacuum()).unwrap());
    assert!(v.is_quasi_primary(&e(vec![1])).unwrap());
    assert!(v.is_quasi_primary(&e(vec![-1])).unwrap());
    let h2 = h(2, 0, vec![0]);
    assert!(!v.is_quasi_primary(&h2).unwrap());
    assert_eq!(v.l_apply(1, &h2).unwrap(), h(1, 0, vec![0]).scale(&int(2)));
    let h1 = h(1, 0, vec![0]);
    assert_eq!(v.divided_translate(&h1, 0).unwrap(), h1);
    assert_eq!(v.divided_translate(&h1, 1).unwrap(), h2);
    assert!(v.divided_translate(&v.vacuum(), 2).unwrap().is_zero());
    for n in 0..=3 {
        let x = e(vec![1]);
        assert_eq!(v.divided_translate(&x, n).unwrap(), v.l_divided_power(-1, n, &x).unwrap());
    }
}

#[test]
fn invariance_low_degree() {
    let v = a1(4);
    let x = e(vec![1]);
    let y = e(vec![-1]);
    assert!(v.invariance_identity_check(&v.vacuum(), &x, &y).unwrap());
    assert!(v.invariance_identity_check(&x, &y, &v.vacuum()).unwrap());
    assert!(v.invariance_identity_check(&x, &h(1, 0, vec![-1]), &h(1, 0, vec![0])).unwrap());
    assert!(v.invariance_identity_check(&h(2, 0, vec![0]), &h(1, 0, vec![0]), &v.vacuum()).unwrap());
}

#[test]
fn grading_of_products() {
    let v = a1(4);
    for p in 0..=2 {
        for q in 0..=2 {
            for a in v.graded_basis(p).unwrap() {
                for b in v.graded_basis(q).unwrap() {
                    for k in -1..=(p + q) as i64 {
                        let x = v
                            .vertex_product(&GradedVector::monomial(a.clone()), k, &GradedVector::monomial(b.clone()), Truncation::Error)
                            .unwrap();
                        let t = i64::from(p + q) - k - 1;
                        if let Some(d) = x.homogeneous_degree(v.lattice()) {
                            assert_eq!(i64::from(d), t);
                        } else {
                            assert!(x.is_zero());
                        }
                    }
                }
            }
        }
    }
}
