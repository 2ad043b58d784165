//! Compare two forms in the same VOA and intersect a form over the group
//! generated by an automorphism.

use std::sync::Arc;

use voaforms::exact::ZLattice;
use voaforms::forms::{generate_form, invariant_form_intersect, nli_transfer_report, SaturationConfig, VOAAutomorphism};
use voaforms::voa::literal::parse_element;
use voaforms::voa::{EvenLattice, TruncatedVOA};

fn main() {
    let host = Arc::new(TruncatedVOA::new(EvenLattice::a1(), 3));
    let p = |s: &str| parse_element(s, 1).unwrap();
    let (j, _) = generate_form(&host, &[p("e(1)"), p("e(-1)")], SaturationConfig::default()).unwrap();
    let (k, _) = generate_form(&host, &[p("e(1) + e(-1)"), p("e(1) - e(-1)")], SaturationConfig::default()).unwrap();
    let (a, b) = nli_transfer_report(&j, &k).unwrap();
    println!("mJ ⊆ K for m = {a}; mK ⊆ J for m = {b}");

    let e = host.coords(&p("e(1)"), 1).unwrap();
    let f = host.coords(&p("2 * e(-1) + e(1)"), 1).unwrap();
    let h = host.coords(&p("h(1,-1) * e(0)"), 1).unwrap();
    let tweaked = j.with_piece(1, ZLattice::from_generators(3, &[e, f, h]).unwrap());
    let theta = VOAAutomorphism::minus_one(host.lattice());
    let (inv, exps) = invariant_form_intersect(&tweaked, &[theta]).unwrap();
    println!("invariant part of degree 1: {}", inv.piece(1).basis());
    println!("exponents of J over the intersection: {:?}", exps.iter().map(|x| x.to_string()).collect::<Vec<_>>());
}
