//! Generate (V_{A1})_Z from e^{±γ}, certify lattice integrality and print the
//! denominator growth seen during saturation.

use std::sync::Arc;

use voaforms::forms::manifest::FormManifest;
use voaforms::forms::{check_li, generate_form, minimal_li_scale, SaturationConfig};
use voaforms::voa::literal::parse_element;
use voaforms::voa::{EvenLattice, TruncatedVOA};

fn main() {
    let n = 5;
    let host = Arc::new(TruncatedVOA::new(EvenLattice::a1(), n));
    let gens = vec![parse_element("e(1)", 1).unwrap(), parse_element("e(-1)", 1).unwrap()];
    let (form, trace) = generate_form(&host, &gens, SaturationConfig::default()).unwrap();
    println!("ranks {:?} after {} passes", form.ranks(), trace.passes.len());
    for (d, seq) in trace.denominator_sequences() {
        println!("  degree {d}: denominators per pass {}", seq.join(" "));
    }
    let cert = check_li(&form);
    println!("LI {} ({}), minimal scale {}", cert.passed, cert.scope, minimal_li_scale(&form));
    let manifest = FormManifest::from_form(&form);
    println!("degree 1 Gram {:?}", manifest.degrees["1"].gram);
}
