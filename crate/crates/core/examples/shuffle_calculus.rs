//! Symmetric group calculus: block composition, ∘ᵢ products, shuffles and
//! Koszul–Quillen signs.

use vertex_operads::parity::Parity;
use vertex_operads::perm::{shuffles2, shuffles3, Perm};

fn main() {
    // the cyclic permutation (1,…,m+1) as a ∘₁ product
    for m in 1..=4 {
        let t = Perm::transposition(2, 1, 2);
        let cyc = t.circ(1, &Perm::identity(m));
        println!("(1,2) ∘₁ 1_{} = {}", m, cyc);
    }

    // shuffle counts
    for (m, n) in [(2, 1), (2, 2), (3, 2)] {
        let set = shuffles2(m, n);
        println!("|S_{{{},{}}}| = {}", m, n, set.cardinality());
    }
    println!("|S_{{1,1,1}}| = {}", shuffles3(1, 1, 1).iter().len());

    // Koszul–Quillen signs on a tuple with two odd entries
    let parities = [Parity::Odd, Parity::Even, Parity::Odd];
    for sigma in Perm::all(3) {
        let eps = sigma.epsilon_sign(&parities);
        println!("ε(σ = {}) = {:+}", sigma, eps);
    }

    // block composition: σ(τ₁, τ₂) with σ = (1 2)
    let sigma = Perm::transposition(2, 1, 2);
    let tau1 = Perm::cycle(3, &[1, 2, 3]);
    let tau2 = Perm::identity(2);
    let composed = sigma.block_compose(&[&tau1, &tau2]);
    println!("(1 2)(cycle₃, id₂) = {}", composed);
}
