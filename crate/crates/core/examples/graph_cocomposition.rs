//! The cooperad of directed graphs: cocomposition along a block structure
//! and the externally connected sets that drive the classical composition.

use vertex_operads::graph::{cocompose, externally_connected, DiGraph};

fn main() {
    let gamma = DiGraph::new(
        9,
        vec![(1, 2), (1, 3), (1, 4), (3, 6), (3, 9), (5, 4), (9, 8)],
    );
    println!("Γ = {}", gamma);
    let co = cocompose(&gamma, &[3, 3, 1, 2]);
    println!("Δ₀ = {}", co.delta0);
    for (i, b) in co.blocks.iter().enumerate() {
        println!("Δ_{} = {}", i + 1, b);
    }
    for k in 1..=9 {
        let ext = externally_connected(&gamma, &co, k);
        let x: Vec<String> = ext.iter().map(|j| format!("x{}", j)).collect();
        println!("X({}) = {}", k, if x.is_empty() { "0".into() } else { x.join("+") });
    }
    println!("Δ₀ acyclic: {}", co.delta0.is_acyclic());
    println!(
        "edge bijection: |E(Γ)| = {} = {} + Σ|E(Δᵢ)|",
        gamma.num_edges(),
        co.delta0.num_edges()
    );
}
