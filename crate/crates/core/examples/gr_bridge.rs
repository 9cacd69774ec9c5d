//! The arity-2 bridge between the graded chiral operad and the classical
//! operad: certify a filtration, extract the induced classical pair, and
//! round-trip the preimage construction.

use std::collections::BTreeMap;
use vertex_operads::lambda::{LPoly, Mono};
use vertex_operads::module::{GenKind, Generator, PdModule};
use vertex_operads::parity::Parity;
use vertex_operads::pch::{IntegralBracket, IB_LAMBDA};
use vertex_operads::scalar::Scalar;
use vertex_operads::va::{filtration_degree, gr_to_pcl, pcl2_to_pch, Weights};

fn main() {
    let module = PdModule::new(vec![
        Generator { name: "u".into(), parity: Parity::Even, kind: GenKind::Free },
        Generator { name: "K".into(), parity: Parity::Even, kind: GenKind::Torsion },
    ]);
    let mut table = BTreeMap::new();
    let mut p = LPoly::zero();
    p.add_term_in(
        &module,
        Mono::power(IB_LAMBDA, 2),
        module.basis(1, 0).scale(&Scalar::ratio(1, 2)),
    );
    table.insert((0, 0), p);
    let ib = IntegralBracket::new(module.clone(), table);

    let w = Weights(vec![1, 1]);
    println!("filtration certificate: {:?}", filtration_degree(&ib, &w).is_ok());

    let pair = gr_to_pcl(&ib);
    println!("gr bracket entries: {}", pair.bracket.len());
    println!("gr product part is zero: {}", pair.product.is_empty());

    let rebuilt = pcl2_to_pch(&module, &pair);
    let back = gr_to_pcl(&rebuilt);
    println!(
        "round-trip pcl2_to_pch ∘ gr_to_pcl = id: {}",
        back.bracket == pair.bracket && back.product == pair.product
    );
}
