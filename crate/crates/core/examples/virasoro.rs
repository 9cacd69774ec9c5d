//! The Lie conformal algebra machinery: the Virasoro λ-bracket with central
//! charge as an odd square-zero element of W₁(Chom).

use std::collections::BTreeMap;
use vertex_operads::chom::{LcaCorrespondence, BR_LAMBDA};
use vertex_operads::lambda::{LPoly, Mono};
use vertex_operads::module::{GenKind, Generator, PdModule};
use vertex_operads::operad::{box_prod, Operad};
use vertex_operads::parity::Parity;
use vertex_operads::scalar::Scalar;

fn main() {
    let module = PdModule::new(vec![
        Generator { name: "T".into(), parity: Parity::Even, kind: GenKind::Free },
        Generator { name: "K".into(), parity: Parity::Even, kind: GenKind::Torsion },
    ]);
    let corr = LcaCorrespondence::new(module);
    // [T_λ T] = ∂T + 2λT + (c/12) λ³ K at c = 1/2
    let mut v = LPoly::zero();
    v.add_term_in(&corr.module, Mono::one(), corr.module.basis(0, 1));
    v.add_term_in(
        &corr.module,
        Mono::var(BR_LAMBDA),
        corr.module.basis(0, 0).scale(&Scalar::from_int(2)),
    );
    v.add_term_in(
        &corr.module,
        Mono::power(BR_LAMBDA, 3),
        corr.module.basis(1, 0).scale(&Scalar::ratio(1, 24)),
    );
    let mut table = BTreeMap::new();
    table.insert((0, 0), v);
    let x = corr.from_lambda_bracket(&table).expect("Virasoro is skew");
    println!("Virasoro (c = 1/2): skew-symmetry holds");
    let sq = box_prod(&corr.op, &x, &x);
    println!("X□X = 0: {}", corr.op.is_zero(&sq.elem));
    println!("brute-force Jacobi oracle: {}", corr.jacobi_holds(&table));
    // round-trip the correspondence
    let back = corr.to_lambda_bracket(&x);
    println!("λ-bracket table round-trips: {}", back == table);
}
