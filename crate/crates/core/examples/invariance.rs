//! Exhaustive checks of the invariance identity and the vacuum product
//! identities on small truncations.

use voaforms::voa::{EvenLattice, GradedVector, TruncatedVOA};

fn main() {
    let v = TruncatedVOA::new(EvenLattice::a1(), 5);
    let (checked, failures) = v.invariance_exhaustive(5).unwrap();
    println!("invariance: {checked} triples, {} failures", failures.len());

    let v = TruncatedVOA::new(EvenLattice::a2(), 3);
    let mut bad = 0;
    let mut total = 0;
    for d in 0..=3 {
        for m in v.graded_basis(d).unwrap() {
            total += 1;
            bad += v.vacuum_identity_failures(&GradedVector::monomial(m.clone())).unwrap().len();
        }
    }
    println!("vacuum identities on A2 up to degree 3: {total} basis elements, {bad} failures");
}
