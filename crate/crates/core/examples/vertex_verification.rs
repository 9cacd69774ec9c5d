//! The chiral slice: the free boson vertex algebra as an integral λ-bracket,
//! its box square on the cyclic rational function, the integral Jacobi
//! expansion, and the companion identity relating the two routes.

use std::collections::BTreeMap;
use vertex_operads::lambda::{LPoly, Mono, SPoly, Var};
use vertex_operads::module::{GenKind, Generator, PdModule};
use vertex_operads::parity::Parity;
use vertex_operads::pch::{
    box_square_defects, jacobi_defects, jacobi_integral, jacobi_integral_tilde, skew_check,
    IntegralBracket, IB_LAMBDA,
};
use vertex_operads::scalar::Scalar;
use vertex_operads::va::VAStructure;

fn main() {
    let module = PdModule::new(vec![
        Generator { name: "u".into(), parity: Parity::Even, kind: GenKind::Free },
        Generator { name: "K".into(), parity: Parity::Even, kind: GenKind::Torsion },
    ]);
    // I(u, u)(λ) = λ²/2 · K, so [u_λ u] = λK and :uu: is truncated away
    let mut table = BTreeMap::new();
    let mut p = LPoly::zero();
    p.add_term_in(
        &module,
        Mono::power(IB_LAMBDA, 2),
        module.basis(1, 0).scale(&Scalar::ratio(1, 2)),
    );
    table.insert((0, 0), p);
    let ib = IntegralBracket::new(module.clone(), table);
    println!("skew check: {:?}", skew_check(&ib, 2).is_ok());
    println!("box-square defects: {}", box_square_defects(&ib, 1).len());
    println!("integral-Jacobi defects: {}", jacobi_defects(&ib, 1).len());

    // the companion identity J̃_{λ,ν}(u,v,w) = ±J_{λ,−ν−∂}(u,w,v)
    let (lam, nu) = (Var::Sig(1), Var::Sig(2));
    let u = module.basis(0, 0);
    let k = module.basis(1, 0);
    let lhs = jacobi_integral_tilde(&ib, &u, &u, &k, lam, nu);
    let raw = jacobi_integral(&ib, &u, &k, &u, lam, Var::Sig(6));
    let target = SPoly::svar(nu).sneg().ssub(&SPoly::svar(Var::Del));
    let rhs = raw.substitute(&module, Var::Sig(6), &target);
    println!("companion identity holds on (u, u, K): {}", lhs == rhs);

    let va = VAStructure { ib, unit: None };
    for line in va.verify(1) {
        println!("[{}] {}", if line.passed { "PASS" } else { "FAIL" }, line.name);
    }
}
