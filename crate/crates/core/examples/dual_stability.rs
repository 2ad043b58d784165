//! Degreewise duals of an integral form and their stability under the
//! divided powers of L(1).

use std::sync::Arc;

use voaforms::forms::{dual_form, dual_stability_against, dual_stability_check, generate_form, SaturationConfig};
use voaforms::exact::ZLattice;
use voaforms::voa::literal::parse_element;
use voaforms::voa::{EvenLattice, TruncatedVOA};

fn main() {
    let host = Arc::new(TruncatedVOA::new(EvenLattice::a1(), 4));
    let gens = vec![parse_element("e(1)", 1).unwrap(), parse_element("e(-1)", 1).unwrap()];
    let (j, _) = generate_form(&host, &gens, SaturationConfig::default()).unwrap();
    let dual = dual_form(&j).unwrap();
    for s in 0..=4 {
        let exp = dual.piece(s).quotient_exponent(j.piece(s)).unwrap();
        println!("degree {s}: J ⊆ J° {}, exponent of J°/J {exp}", dual.piece(s).contains_lattice(j.piece(s)));
    }
    for n in 1..=4 {
        println!("L(1)^{n}/{n}! J° ⊆ J°: {}", dual_stability_check(&j, n).unwrap().holds);
    }

    // Dropping one generator of J°_2 breaks stability for n = 1.
    let mut pieces = dual.pieces.clone();
    let rows = pieces[2].basis_rows();
    pieces[2] = ZLattice::from_generators(pieces[2].dim(), &rows[1..]).unwrap();
    let report = dual_stability_against(&host, &pieces, 1).unwrap();
    println!("corrupted dual: holds {}, witness {:?}", report.holds, report.witness);
}
