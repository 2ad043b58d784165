//! Exact lattice arithmetic: canonical bases, sums, intersections, quotients
//! and duals.

use voaforms::exact::{int, rat, QMatrix, ZLattice};

fn main() {
    let a = ZLattice::from_generators(2, &[vec![int(2), int(0)], vec![int(0), int(3)]]).unwrap();
    let b = ZLattice::from_generators(2, &[vec![int(1), int(1)]]).unwrap().sum(&ZLattice::from_generators(2, &[vec![int(0), int(2)]]).unwrap()).unwrap();
    println!("A basis {}", a.basis());
    println!("B basis {}", b.basis());
    println!("A + B   {}", a.sum(&b).unwrap().basis());
    let meet = a.intersect(&b).unwrap();
    println!("A ∩ B   {}", meet.basis());
    println!("A/(A∩B) invariants {:?}, exponent {}", a.quotient_invariants(&meet).unwrap(), a.quotient_exponent(&meet).unwrap());

    let half = ZLattice::from_generators(2, &[vec![rat(1, 2), int(0)], vec![int(0), int(1)]]).unwrap();
    println!("rational lattice {} (common denominator {})", half.basis(), half.denominator());

    let gram = QMatrix::from_i64(&[&[2, 1], &[1, 2]]);
    let z2 = ZLattice::standard(2);
    let dual = z2.dual(&gram).unwrap();
    println!("dual of Z^2 under [[2,1],[1,2]]: {}", dual.basis());
    println!("index of Z^2 in its dual: {}", z2.index_in(&dual).unwrap());
}
