//! Lattice-level eigenlattices and Tel, then the same constructions on an
//! integral form under lifted lattice automorphisms.

use std::sync::Arc;

use voaforms::exact::ZLattice;
use voaforms::forms::{char_eigenform, fixed_subform, generate_form, tel_summary, SaturationConfig, VOAAutomorphism};
use voaforms::latgroup::{tel_report, Character, SignedAction};
use voaforms::voa::literal::parse_element;
use voaforms::voa::{EvenLattice, TruncatedVOA};

fn main() {
    let swap = SignedAction::from_i64(2, &[vec![0, 1, 1, 0]]).unwrap();
    let rep = tel_report(&ZLattice::standard(2), &swap).unwrap();
    println!("swap on Z^2: Tel {} index {}", rep.tel.basis(), rep.tel.index_in(&ZLattice::standard(2)).unwrap());

    let host = Arc::new(TruncatedVOA::new(EvenLattice::a1(), 3));
    let gens = vec![parse_element("e(1)", 1).unwrap(), parse_element("e(-1)", 1).unwrap()];
    let (j, _) = generate_form(&host, &gens, SaturationConfig::default()).unwrap();
    let theta = VOAAutomorphism::minus_one(host.lattice());
    let fixed = fixed_subform(&j, std::slice::from_ref(&theta)).unwrap();
    println!("fixed ranks {:?}", fixed.ranks());
    for v in fixed.basis_vectors(1) {
        println!("  fixed in degree 1: {}", voaforms::voa::literal::format_element(&v));
    }
    let minus = char_eigenform(&j, std::slice::from_ref(&theta), &Character::new(vec![-1])).unwrap();
    println!("-1 eigenlattice ranks {:?}", minus.iter().map(ZLattice::rank).collect::<Vec<_>>());
    for t in tel_summary(&j, &[theta]).unwrap() {
        println!("degree {}: J/Tel(J) exponent {} (bound {})", t.degree, t.exponent, t.bound);
    }
}
