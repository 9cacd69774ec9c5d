//! The universal Lie superalgebra W(P): symmetrization, the box product,
//! the bracket, and the sampled operad axiom harness on Hom.

use rand::rngs::StdRng;
use rand::SeedableRng;
use vertex_operads::hom::{HomOperad, SuperSpace};
use vertex_operads::operad::{
    axiom_harness, box_prod, lie_bracket, symmetrize, Operad, Sampler,
};
use vertex_operads::parity::Parity;

fn main() {
    let op = HomOperad::new(SuperSpace {
        parities: vec![Parity::Even, Parity::Odd],
    });
    let mut rng = StdRng::seed_from_u64(12);

    // symmetrize a random bilinear map and box it with itself
    let raw = op.random_elem(2, &mut rng);
    let w = symmetrize(&op, &raw, 4).unwrap();
    println!("symmetrized a random arity-2 element; degree {}", w.degree);
    let sq = box_prod(&op, &w, &w);
    println!("(f□f) has arity {} and degree {}", op.arity(&sq.elem), sq.degree);
    let br = lie_bracket(&op, &w, &w);
    println!("[f,f] vanishes for even f: {}", op.is_zero(&br.elem));

    for check in axiom_harness(&op, 50, &mut rng) {
        println!(
            "axiom {}: {} ({} samples)",
            check.name,
            if check.passed { "pass" } else { "FAIL" },
            check.samples
        );
    }
}
