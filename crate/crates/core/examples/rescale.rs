//! Rescale a non-integral form into a lattice-integral one, and build
//! mJ + Z·vac from an integral form.

use std::sync::Arc;

use num_bigint::BigInt;
use voaforms::exact::rat;
use voaforms::forms::{check_li, dongl1_rescale, generate_form, lemma1_construct, minimal_li_scale, SaturationConfig};
use voaforms::voa::literal::parse_element;
use voaforms::voa::{EvenLattice, TruncatedVOA};

fn main() {
    let host = Arc::new(TruncatedVOA::new(EvenLattice::a1(), 4));
    let gens = vec![parse_element("e(1)", 1).unwrap(), parse_element("e(-1)", 1).unwrap()];
    let (j, _) = generate_form(&host, &gens, SaturationConfig::default()).unwrap();

    let fixture = j.with_piece(1, j.piece(1).scaled(&rat(1, 2)));
    let cert = check_li(&fixture);
    println!("scaled fixture LI {}, witness {:?}, minimal scale {}", cert.passed, cert.witness, minimal_li_scale(&fixture));

    let r = dongl1_rescale(&fixture, 1, SaturationConfig::default()).unwrap();
    println!("m1 = {}, m2 = {}, J(m) ranks {:?}, LI {}", r.m1, r.m2, r.form.ranks(), r.li.passed);

    let m = r.m();
    let k = lemma1_construct(&j, &m, 1).unwrap();
    println!("{m}J + Z vac: {} sampled products closed, LI {}", k.closure.checked, k.li.passed);
    match lemma1_construct(&fixture, &BigInt::from(4), 1) {
        Ok(_) => println!("fixture accepted"),
        Err(e) => println!("fixture rejected: {e}"),
    }
}
