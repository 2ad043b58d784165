//! The dihedral 2A algebra: adjoint matrices, trace form and associativity.

use voaforms::dihedral::{dihedral_2a, Dihedral2aReport};

fn main() {
    let alg = dihedral_2a();
    println!("{}", serde_json::to_string(&alg.to_json()).unwrap());
    print!("{}", Dihedral2aReport::compute());
}
