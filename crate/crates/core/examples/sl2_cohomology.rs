//! The Lie superalgebra machinery: sl₂ as a square-zero element of W₁ and
//! its low-degree cohomology by exact linear algebra.

use vertex_operads::hom::{cohomology_dims, lie_cohomology_report, BracketCorrespondence};
use vertex_operads::operad::{box_prod, Operad};
use vertex_operads::parity::Parity;
use vertex_operads::scalar::Scalar;

fn main() {
    let s = Scalar::from_int;
    let bracket = |i: usize, j: usize| {
        let mut v = vec![s(0), s(0), s(0)];
        match (i, j) {
            (0, 2) => v[1] = s(1),
            (2, 0) => v[1] = s(-1),
            (1, 0) => v[0] = s(2),
            (0, 1) => v[0] = s(-2),
            (1, 2) => v[2] = s(-2),
            (2, 1) => v[2] = s(2),
            _ => {}
        }
        v
    };
    let corr = BracketCorrespondence::new(vec![Parity::Even; 3]);
    let x = corr.from_bracket(&bracket).expect("sl2 bracket is skew");
    let square = box_prod(&corr.op, &x, &x);
    println!("sl2: X□X = 0 holds: {}", corr.op.is_zero(&square.elem));
    let reports = lie_cohomology_report(&corr, &x, 2).unwrap();
    for r in &reports {
        println!(
            "W_{}: dim {}, ker d = {}, im d = {}",
            r.degree, r.w_dim, r.kernel_dim, r.image_dim
        );
    }
    for (k, dim) in cohomology_dims(&reports, 2) {
        println!("H^{}(sl2; sl2) has dimension {}", k, dim);
    }
}
