//! Exact-arithmetic operadic calculus for vertex algebra and Poisson vertex
//! algebra cohomology.
//!
//! Everything is computed over arbitrary-precision rationals:
//!
//! * symmetric group calculus — block composition, ∘ᵢ products, shuffle
//!   enumeration and Koszul–Quillen signs ([`perm`]);
//! * the cooperad of directed n-graphs: cocomposition, externally connected
//!   sets, the symmetric action ([`graph`]);
//! * a generic superoperad contract with the universal Lie superalgebra
//!   W(P), box product, bracket and a sampled axiom harness ([`operad`]);
//! * concrete operads: multilinear maps ([`hom`]), λ-bracket maps
//!   ([`chom`]), graph-indexed classical maps ([`pcl`]) with their finite
//!   analog ([`pfn`]), and the arity ≤ 3 slice of the chiral operad
//!   ([`pch`], [`va`]);
//! * structure verification as X□X = 0 cross-checked against brute-force
//!   axiom oracles ([`pva`], [`pfn`], [`va`]), low-degree cohomology, and
//!   the free boson application ([`freeboson`]);
//! * a line-oriented structure-file format, report types and the driver
//!   behind the `vop` binary ([`structure`], [`report`], [`driver`]).

pub mod scalar;
pub mod parity;
pub mod module;
pub mod lambda;
pub mod perm;
pub mod graph;
pub mod linalg;
pub mod operad;
pub mod hom;
pub mod chom;
pub mod pcl;
pub mod pva;
pub mod pfn;
pub mod freeboson;
pub mod pch;
pub mod va;
pub mod structure;
pub mod report;
pub mod driver;

pub use parity::Parity;
pub use scalar::Scalar;
