//! The finite classical operad: the sl₂ Lie–Poisson structure as a
//! square-zero element, with independent Poisson axiom oracles.

use std::collections::BTreeMap;
use vertex_operads::module::{DElem, DiffPolyAlg};
use vertex_operads::operad::{box_prod, Operad};
use vertex_operads::pfn::{pfn_check, poisson_jacobi_defect, poisson_leibniz_defect, PfnOperad, PoissonStructure};
use vertex_operads::scalar::Scalar;

fn main() {
    let alg = DiffPolyAlg::new(vec!["e".into(), "h".into(), "f".into()], 0, 3);
    let s = Scalar::from_int;
    let (e, h, f) = (alg.jet(0, 0), alg.jet(1, 0), alg.jet(2, 0));
    let mut table = BTreeMap::new();
    table.insert((0, 2), h.clone());
    table.insert((2, 0), h.neg());
    table.insert((1, 0), e.scale(&s(2)));
    table.insert((0, 1), e.scale(&s(-2)));
    table.insert((1, 2), f.scale(&s(-2)));
    table.insert((2, 1), f.scale(&s(2)));
    let ps = PoissonStructure { alg: alg.clone(), table };
    let probes = vec![DElem::one(), e.clone(), h.clone(), f.clone()];
    let op = PfnOperad::new(alg, true, probes.clone(), 3);
    let x = pfn_check(&ps, &op).expect("Lie–Poisson bracket is skew");
    println!("sl2 Lie–Poisson: X□X = 0: {}", op.is_zero(&box_prod(&op, &x, &x).elem));
    let mut jac = true;
    let mut leib = true;
    for a in &probes {
        for b in &probes {
            for c in &probes {
                jac &= poisson_jacobi_defect(&ps, a, b, c).is_zero();
                leib &= poisson_leibniz_defect(&ps, a, b, c).is_zero();
            }
        }
    }
    println!("Jacobi oracle: {}", jac);
    println!("Leibniz oracle: {}", leib);
}
