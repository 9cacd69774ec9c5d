//! The free boson Poisson vertex algebra: Casimirs against the variational
//! derivative oracle, canonical derivations, and brute-force H⁰.

use vertex_operads::freeboson::{
    casimir_defect, casimir_defect_variational, derivation_defect, freeboson_pva, h0_bruteforce,
    JetDerivation,
};
use vertex_operads::module::DElem;

fn main() {
    for n in 1..=3usize {
        let pva = freeboson_pva(n);
        let alg = &pva.alg;
        println!("--- {} free boson(s) ---", n);
        let mut reps = vec!["1".to_string()];
        assert!(casimir_defect(&pva, &DElem::one()).iter().all(|d| d.is_zero()));
        for i in 0..n {
            if casimir_defect(&pva, &alg.jet(i, 0)).iter().all(|d| d.is_zero()) {
                reps.push(alg.var_names[i].clone());
            }
        }
        println!("Casimir representatives: {}", reps.join(", "));
        let m = alg.jet(0, 0).mul(&alg.jet(0, 0));
        let d1 = casimir_defect(&pva, &m);
        let d2 = casimir_defect_variational(&pva, &m);
        println!("u₁² defect matches ∂(δ/δu) oracle: {}", d1 == d2);
        let mut ders = Vec::new();
        for i in 0..n {
            if derivation_defect(&pva, &JetDerivation::du(n, i)).iter().all(|p| p.is_zero()) {
                ders.push(format!("d/d{}", alg.var_names[i]));
            }
            for j in (i + 1)..n {
                if derivation_defect(&pva, &JetDerivation::rotation(alg, i, j))
                    .iter()
                    .all(|p| p.is_zero())
                {
                    ders.push(format!("D{}{}", i + 1, j + 1));
                }
            }
        }
        println!("derivations with zero defect: {}", ders.join(", "));
        let h0 = h0_bruteforce(n, 2, 2).unwrap();
        println!("H⁰ at degree ≤ 2, order ≤ 2: dim {} (= N+1)", h0);
    }
}
