//! The abstract superoperad contract, the universal Lie superalgebra W(P)
//! with its box product and bracket, and a sampled axiom test harness.
//!
//! A concrete operad supplies composition, the symmetric group action, the
//! unit, and a linear structure on elements. Equality of elements is always
//! extensional: `is_zero` evaluates on the operad's canonical probe set, so
//! two elements are equal when their difference vanishes on every probe.

use crate::parity::Parity;
use crate::perm::{shuffles2, Perm};
use crate::scalar::Scalar;
use rand::rngs::StdRng;

/// Contract every concrete operad implements.
pub trait Operad {
    type Elem: Clone;

    fn arity(&self, f: &Self::Elem) -> usize;
    fn parity(&self, f: &Self::Elem) -> Parity;
    fn zero_elem(&self, arity: usize, parity: Parity) -> Self::Elem;
    /// Extensional zero test on the operad's probe set.
    fn is_zero(&self, f: &Self::Elem) -> bool;
    fn add(&self, f: &Self::Elem, g: &Self::Elem) -> Self::Elem;
    fn scale(&self, f: &Self::Elem, s: &Scalar) -> Self::Elem;
    fn unit(&self) -> Self::Elem;
    /// Composition f(g_1 ⊗ … ⊗ g_n).
    fn compose(&self, f: &Self::Elem, gs: &[Self::Elem]) -> Self::Elem;
    /// Right symmetric group action f^σ.
    fn sym_act(&self, f: &Self::Elem, sigma: &Perm) -> Self::Elem;
}

/// Operads that can produce random elements for the axiom harness.
pub trait Sampler: Operad {
    /// A random homogeneous element, valid for this operad.
    fn random_elem(&self, arity: usize, rng: &mut StdRng) -> Self::Elem;
    /// Largest arity the harness should exercise.
    fn max_test_arity(&self) -> usize;
}

pub fn sub<P: Operad>(op: &P, f: &P::Elem, g: &P::Elem) -> P::Elem {
    op.add(f, &op.scale(g, &Scalar::from_int(-1)))
}

pub fn elems_equal<P: Operad>(op: &P, f: &P::Elem, g: &P::Elem) -> bool {
    op.arity(f) == op.arity(g) && op.is_zero(&sub(op, f, g))
}

/// The ∘ᵢ product f ∘ᵢ g = f(1,…,g,…,1) with g inserted in position i (1-based).
pub fn circ<P: Operad>(op: &P, f: &P::Elem, i: usize, g: &P::Elem) -> P::Elem {
    let n = op.arity(f);
    assert!(i >= 1 && i <= n, "circ index out of range");
    let gs: Vec<P::Elem> = (1..=n)
        .map(|j| if j == i { g.clone() } else { op.unit() })
        .collect();
    op.compose(f, &gs)
}

/// Reconstruction of the full composition from ∘ᵢ products,
/// f(g_1,…,g_n) = (…((f∘₁g_1)∘_{m_1+1}g_2)…)∘_{m_1+…+m_{n−1}+1}g_n.
pub fn compose_via_circ<P: Operad>(op: &P, f: &P::Elem, gs: &[P::Elem]) -> P::Elem {
    let mut acc = f.clone();
    let mut offset = 0usize;
    for g in gs {
        acc = circ(op, &acc, offset + 1, g);
        offset += op.arity(g);
    }
    acc
}

/// Is f fixed by the whole symmetric group? Checked on adjacent
/// transpositions, which generate S_n.
pub fn is_invariant<P: Operad>(op: &P, f: &P::Elem) -> bool {
    let n = op.arity(f);
    for s in 1..n {
        let t = Perm::transposition(n, s, s + 1);
        if !elems_equal(op, &op.sym_act(f, &t), f) {
            return false;
        }
    }
    true
}

/// An element of W_n(P) = P(n+1)^{S_{n+1}}: an invariant element of arity
/// n+1, carrying its degree n ≥ −1.
#[derive(Clone, Debug)]
pub struct WElem<E> {
    pub elem: E,
    pub degree: i64,
}

impl<E: Clone> WElem<E> {
    /// Wrap an element after verifying its invariance certificate.
    pub fn new<P: Operad<Elem = E>>(op: &P, elem: E) -> Result<WElem<E>, String> {
        if !is_invariant(op, &elem) {
            return Err("element is not symmetric-group invariant".into());
        }
        let degree = op.arity(&elem) as i64 - 1;
        Ok(WElem { elem, degree })
    }

    pub fn new_unchecked<P: Operad<Elem = E>>(op: &P, elem: E) -> WElem<E> {
        let degree = op.arity(&elem) as i64 - 1;
        WElem { elem, degree }
    }
}

/// Projection onto invariants: (1/(n)!)·Σ_{σ∈S_n} f^σ. Exact in char 0.
pub fn symmetrize<P: Operad>(op: &P, f: &P::Elem, arity_cap: usize) -> Result<WElem<P::Elem>, String> {
    let n = op.arity(f);
    if n > arity_cap {
        return Err(format!("arity {} exceeds symmetrization cap {}", n, arity_cap));
    }
    let mut acc = op.zero_elem(n, op.parity(f));
    for s in Perm::all(n) {
        acc = op.add(&acc, &op.sym_act(f, &s));
    }
    let avg = op.scale(&acc, &Scalar::factorial(n).recip());
    Ok(WElem::new_unchecked(op, avg))
}

/// The box product f□g = Σ_{σ ∈ S_{m+1,n}} (f∘₁g)^{σ⁻¹} for f ∈ W_n, g ∈ W_m.
/// Vanishes when f ∈ W_{−1}.
pub fn box_prod<P: Operad>(op: &P, f: &WElem<P::Elem>, g: &WElem<P::Elem>) -> WElem<P::Elem> {
    let n = f.degree;
    let m = g.degree;
    let out_arity = (n + m + 1).max(0) as usize;
    let parity = op.parity(&f.elem) + op.parity(&g.elem);
    let shuffles = shuffles2(m + 1, n);
    if shuffles.is_empty_set() {
        return WElem { elem: op.zero_elem(out_arity, parity), degree: n + m };
    }
    let base = circ(op, &f.elem, 1, &g.elem);
    let mut acc = op.zero_elem(out_arity, parity);
    for s in shuffles.iter() {
        acc = op.add(&acc, &op.sym_act(&base, &s.inverse()));
    }
    WElem { elem: acc, degree: n + m }
}

/// The Lie superalgebra bracket [f,g] = f□g − (−1)^{p(f)p(g)} g□f on W(P).
pub fn lie_bracket<P: Operad>(op: &P, f: &WElem<P::Elem>, g: &WElem<P::Elem>) -> WElem<P::Elem> {
    let fg = box_prod(op, f, g);
    let gf = box_prod(op, g, f);
    let sign = op.parity(&f.elem).koszul_sign(op.parity(&g.elem));
    WElem {
        elem: op.add(&fg.elem, &op.scale(&gf.elem, &Scalar::from_int(-sign))),
        degree: f.degree + g.degree,
    }
}

/// The bracket of the non-symmetric theory,
/// [f,g] = Σ_i f∘ᵢg − (−1)^{p(f)p(g)} Σ_i g∘ᵢf. No invariance required.
pub fn nonsym_bracket<P: Operad>(op: &P, f: &P::Elem, g: &P::Elem) -> P::Elem {
    let n = op.arity(f);
    let m = op.arity(g);
    let parity = op.parity(f) + op.parity(g);
    let mut acc = op.zero_elem(n + m - 1, parity);
    for i in 1..=n {
        acc = op.add(&acc, &circ(op, f, i, g));
    }
    let sign = op.parity(f).koszul_sign(op.parity(g));
    for i in 1..=m {
        acc = op.add(&acc, &op.scale(&circ(op, g, i, f), &Scalar::from_int(-sign)));
    }
    acc
}

/// The differential d_X = ad X attached to an odd X ∈ W_1 with [X,X] = 0.
pub struct Differential<E> {
    pub x: WElem<E>,
}

impl<E: Clone> Differential<E> {
    /// Rejects X unless [X,X] evaluates to zero on the operad's probes.
    pub fn new<P: Operad<Elem = E>>(op: &P, x: WElem<E>) -> Result<Differential<E>, String> {
        if op.parity(&x.elem) != Parity::Odd {
            return Err("differential requires an odd element".into());
        }
        let xx = lie_bracket(op, &x, &x);
        if !op.is_zero(&xx.elem) {
            return Err("[X,X] does not vanish on the probe set".into());
        }
        Ok(Differential { x })
    }

    pub fn apply<P: Operad<Elem = E>>(&self, op: &P, y: &WElem<E>) -> WElem<E> {
        lie_bracket(op, &self.x, y)
    }
}

/// One line of the axiom harness report.
#[derive(Clone, Debug)]
pub struct AxiomCheck {
    pub name: String,
    pub passed: bool,
    pub samples: usize,
    pub witness: Option<String>,
}

/// Run the operad axioms (associativity, unit, equivariance) on sampled
/// elements. Reports one entry per axiom; a failing entry carries a witness.
pub fn axiom_harness<P: Sampler>(op: &P, budget: usize, rng: &mut StdRng) -> Vec<AxiomCheck> {
    use rand::Rng;
    let amax = op.max_test_arity();
    let mut assoc = AxiomCheck { name: "associativity".into(), passed: true, samples: 0, witness: None };
    let mut unit = AxiomCheck { name: "unit".into(), passed: true, samples: 0, witness: None };
    let mut equiv = AxiomCheck { name: "equivariance".into(), passed: true, samples: 0, witness: None };

    for _ in 0..budget {
        let n = rng.gen_range(1..=amax.min(2));
        let f = op.random_elem(n, rng);

        // unit laws f(1⊗…⊗1) = 1(f) = f
        unit.samples += 1;
        let units: Vec<P::Elem> = (0..n).map(|_| op.unit()).collect();
        let lhs = op.compose(&f, &units);
        let one_f = op.compose(&op.unit(), &[f.clone()]);
        if !elems_equal(op, &lhs, &f) || !elems_equal(op, &one_f, &f) {
            unit.passed = false;
            unit.witness.get_or_insert_with(|| format!("unit law failed at arity {}", n));
        }

        // associativity f((g⊗…)(h⊗…)) = (f(g⊗…))(h⊗…)
        assoc.samples += 1;
        let mut g_budget = 3usize;
        let gs: Vec<P::Elem> = (0..n)
            .map(|_| {
                let a = rng.gen_range(1..=amax.min(2)).min(g_budget.max(1));
                g_budget = g_budget.saturating_sub(a);
                op.random_elem(a, rng)
            })
            .collect();
        let total: usize = gs.iter().map(|g| op.arity(g)).sum();
        let mut h_budget = 4usize;
        let hs: Vec<P::Elem> = (0..total)
            .map(|_| {
                let a = rng.gen_range(1..=amax.min(2)).min(h_budget.max(1));
                h_budget = h_budget.saturating_sub(a);
                op.random_elem(a, rng)
            })
            .collect();
        let rhs = op.compose(&op.compose(&f, &gs), &hs);
        // left side: Koszul sign from moving each g_j past the h-blocks of
        // the earlier g_i
        let mut sign = 1i64;
        let mut inner = Vec::with_capacity(n);
        let mut off = 0usize;
        let mut earlier_odd = 0usize;
        for g in &gs {
            let m = op.arity(g);
            let block = &hs[off..off + m];
            if op.parity(g).is_odd() && earlier_odd % 2 == 1 {
                sign = -sign;
            }
            earlier_odd += block.iter().filter(|h| op.parity(h).is_odd()).count();
            inner.push(op.compose(g, block));
            off += m;
        }
        let lhs = op.scale(&op.compose(&f, &inner), &Scalar::from_int(sign));
        if !elems_equal(op, &lhs, &rhs) {
            assoc.passed = false;
            assoc.witness.get_or_insert_with(|| {
                format!("associativity failed: outer arity {}, inner arities {:?}",
                    n, gs.iter().map(|g| op.arity(g)).collect::<Vec<_>>())
            });
        }

        // equivariance f^σ(g_1^{τ_1}⊗…⊗g_n^{τ_n}) = (f(σ(g⊗…)))^{σ(τ_1,…,τ_n)}
        equiv.samples += 1;
        let sigma = random_perm(n, rng);
        let taus: Vec<Perm> = gs.iter().map(|g| random_perm(op.arity(g), rng)).collect();
        let gs_tau: Vec<P::Elem> = gs.iter().zip(&taus).map(|(g, t)| op.sym_act(g, t)).collect();
        let lhs = op.compose(&op.sym_act(&f, &sigma), &gs_tau);
        let g_parities: Vec<Parity> = gs.iter().map(|g| op.parity(g)).collect();
        let eps = sigma.epsilon_sign(&g_parities);
        let permuted: Vec<P::Elem> = sigma.act_on_tuple(&gs);
        let tau_refs: Vec<&Perm> = taus.iter().collect();
        let big = sigma.block_compose(&tau_refs);
        let rhs = op.scale(
            &op.sym_act(&op.compose(&f, &permuted), &big),
            &Scalar::from_int(eps),
        );
        if !elems_equal(op, &lhs, &rhs) {
            equiv.passed = false;
            equiv.witness.get_or_insert_with(|| {
                format!("equivariance failed: arity {}, sigma {}", n, sigma)
            });
        }
    }
    vec![assoc, unit, equiv]
}

pub fn random_perm(n: usize, rng: &mut StdRng) -> Perm {
    use rand::seq::SliceRandom;
    let mut image: Vec<usize> = (1..=n).collect();
    image.shuffle(rng);
    Perm::from_image(image)
}

#[cfg(test)]
mod tests {
    use super::*;

    // A tiny concrete operad for exercising the generic layer: the
    // associative operad on scalar sequences, P(n) = F with composition
    // by multiplication. Everything is even; symmetric action trivial.
    #[derive(Clone, Debug)]
    struct ScalarOperad;

    #[derive(Clone, Debug, PartialEq)]
    struct SElem {
        arity: usize,
        value: Scalar,
    }

    impl Operad for ScalarOperad {
        type Elem = SElem;
        fn arity(&self, f: &SElem) -> usize {
            f.arity
        }
        fn parity(&self, _f: &SElem) -> Parity {
            Parity::Even
        }
        fn zero_elem(&self, arity: usize, _parity: Parity) -> SElem {
            SElem { arity, value: Scalar::zero() }
        }
        fn is_zero(&self, f: &SElem) -> bool {
            f.value.is_zero()
        }
        fn add(&self, f: &SElem, g: &SElem) -> SElem {
            assert_eq!(f.arity, g.arity);
            SElem { arity: f.arity, value: &f.value + &g.value }
        }
        fn scale(&self, f: &SElem, s: &Scalar) -> SElem {
            SElem { arity: f.arity, value: &f.value * s }
        }
        fn unit(&self) -> SElem {
            SElem { arity: 1, value: Scalar::one() }
        }
        fn compose(&self, f: &SElem, gs: &[SElem]) -> SElem {
            assert_eq!(gs.len(), f.arity);
            let mut v = f.value.clone();
            let mut arity = 0;
            for g in gs {
                v = &v * &g.value;
                arity += g.arity;
            }
            SElem { arity, value: v }
        }
        fn sym_act(&self, f: &SElem, sigma: &Perm) -> SElem {
            assert_eq!(sigma.len(), f.arity);
            f.clone()
        }
    }

    impl Sampler for ScalarOperad {
        fn random_elem(&self, arity: usize, rng: &mut StdRng) -> SElem {
            use rand::Rng;
            SElem { arity, value: Scalar::from_int(rng.gen_range(-3..=3)) }
        }
        fn max_test_arity(&self) -> usize {
            3
        }
    }

    // the same scalar operad with a corrupted symmetric action: the sign
    // flips on non-identity permutations, breaking equivariance
    #[derive(Clone, Debug)]
    struct CorruptedOperad;

    impl Operad for CorruptedOperad {
        type Elem = SElem;
        fn arity(&self, f: &SElem) -> usize {
            f.arity
        }
        fn parity(&self, _f: &SElem) -> Parity {
            Parity::Even
        }
        fn zero_elem(&self, arity: usize, _parity: Parity) -> SElem {
            SElem { arity, value: Scalar::zero() }
        }
        fn is_zero(&self, f: &SElem) -> bool {
            f.value.is_zero()
        }
        fn add(&self, f: &SElem, g: &SElem) -> SElem {
            ScalarOperad.add(f, g)
        }
        fn scale(&self, f: &SElem, s: &Scalar) -> SElem {
            ScalarOperad.scale(f, s)
        }
        fn unit(&self) -> SElem {
            ScalarOperad.unit()
        }
        fn compose(&self, f: &SElem, gs: &[SElem]) -> SElem {
            ScalarOperad.compose(f, gs)
        }
        fn sym_act(&self, f: &SElem, sigma: &Perm) -> SElem {
            if sigma.is_identity() {
                f.clone()
            } else {
                self.scale(f, &Scalar::from_int(-1))
            }
        }
    }

    impl Sampler for CorruptedOperad {
        fn random_elem(&self, arity: usize, rng: &mut StdRng) -> SElem {
            ScalarOperad.random_elem(arity, rng)
        }
        fn max_test_arity(&self) -> usize {
            3
        }
    }

    #[test]
    fn harness_detects_planted_sign_fault() {
        use rand::SeedableRng;
        let mut rng = StdRng::seed_from_u64(13);
        let report = axiom_harness(&CorruptedOperad, 40, &mut rng);
        let equiv = report.iter().find(|c| c.name == "equivariance").unwrap();
        assert!(!equiv.passed);
        assert!(equiv.witness.is_some());
    }

    #[test]
    fn harness_passes_on_scalar_operad() {
        use rand::SeedableRng;
        let mut rng = StdRng::seed_from_u64(7);
        let report = axiom_harness(&ScalarOperad, 40, &mut rng);
        for check in report {
            assert!(check.passed, "{} failed: {:?}", check.name, check.witness);
        }
    }

    #[test]
    fn circ_against_direct_composition() {
        let op = ScalarOperad;
        let f = SElem { arity: 2, value: Scalar::from_int(3) };
        let g = SElem { arity: 2, value: Scalar::from_int(5) };
        let h = SElem { arity: 1, value: Scalar::from_int(7) };
        let via = compose_via_circ(&op, &f, &[g.clone(), h.clone()]);
        let direct = op.compose(&f, &[g, h]);
        assert!(elems_equal(&op, &via, &direct));
    }

    #[test]
    fn box_of_degree_minus_one_vanishes() {
        let op = ScalarOperad;
        let f = WElem::new(&op, SElem { arity: 0, value: Scalar::from_int(2) }).unwrap();
        let g = WElem::new(&op, SElem { arity: 2, value: Scalar::from_int(3) }).unwrap();
        let fg = box_prod(&op, &f, &g);
        assert!(op.is_zero(&fg.elem));
        // while g□f is the single-shuffle composition
        let gf = box_prod(&op, &g, &f);
        assert!(!op.is_zero(&gf.elem));
        assert_eq!(gf.degree, 0);
    }

    #[test]
    fn symmetrize_is_idempotent_projection() {
        let op = ScalarOperad;
        let f = SElem { arity: 3, value: Scalar::from_int(4) };
        let w = symmetrize(&op, &f, 4).unwrap();
        assert!(elems_equal(&op, &w.elem, &f));
        let w2 = symmetrize(&op, &w.elem, 4).unwrap();
        assert!(elems_equal(&op, &w2.elem, &w.elem));
        assert!(symmetrize(&op, &SElem { arity: 5, value: Scalar::one() }, 4).is_err());
    }
}
