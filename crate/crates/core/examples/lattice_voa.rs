//! A truncated lattice VOA: graded dimensions, vertex products, the invariant
//! form and the Virasoro element.

use voaforms::voa::literal::{format_element, parse_element};
use voaforms::voa::{EvenLattice, Truncation, TruncatedVOA};

fn main() {
    let v = TruncatedVOA::new(EvenLattice::a1(), 5);
    let dims: Vec<usize> = (0..=5).map(|d| v.dim(d)).collect();
    println!("A1 graded dimensions up to degree 5: {dims:?}");

    let e = parse_element("e(1)", 1).unwrap();
    let f = parse_element("e(-1)", 1).unwrap();
    for k in [1, 0, -1, -2] {
        let p = v.vertex_product(&e, k, &f, Truncation::Error).unwrap();
        println!("e(1)_{k} e(-1) = {}", format_element(&p));
    }

    let h = parse_element("h(1,-1) * e(0)", 1).unwrap();
    println!("<h(-1), h(-1)> = {}", v.bilinear_form(&h, &h));
    println!("<e(1), e(-1)> = {}", v.bilinear_form(&e, &f));
    println!("Gram of degree 2:\n{}", v.gram(2));

    let omega = v.virasoro_element();
    println!("omega = {}", format_element(omega));
    println!("L(0) e(1) = {}", format_element(&v.l_apply(0, &e).unwrap()));
    let h2 = parse_element("h(1,-2) * e(0)", 1).unwrap();
    println!("L(1) h(-2) = {}", format_element(&v.l_apply(1, &h2).unwrap()));
    println!("h(-1) quasi-primary: {}, h(-2) quasi-primary: {}", v.is_quasi_primary(&h).unwrap(), v.is_quasi_primary(&h2).unwrap());
}
