//! F[∂]-modules with parity and differential polynomial superalgebras.
//!
//! A `PdModule` is a finitely generated F[∂]-module given by an ordered list
//! of named generators. A `free` generator g contributes the basis family
//! g, ∂g, ∂²g, …; a `torsion` generator satisfies ∂g = 0 and contributes a
//! single basis vector. Elements are finite rational combinations of ∂ⁿg.
//!
//! A `DiffPolyAlg` is the differential polynomial superalgebra
//! F[u_i^{(n)} | i = 1..N, n ≥ 0] on even variables, with ∂u_i^{(n)} = u_i^{(n+1)}
//! extended as an even derivation. The jet-order and degree bounds stored on
//! the algebra are used only by truncated enumeration, never by arithmetic.

use crate::parity::Parity;
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::fmt;

/// Whether ∂ acts freely on a generator or kills it.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GenKind {
    Free,
    Torsion,
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub name: String,
    pub parity: Parity,
    pub kind: GenKind,
}

/// A finitely generated F[∂]-module with parity.
#[derive(Clone, Debug)]
pub struct PdModule {
    gens: Vec<Generator>,
}

/// Basis vector ∂^dpow g of a `PdModule` (dpow = 0 for torsion g).
pub type MBasis = (usize, u32);

/// An element of a `PdModule`: finite combination of basis vectors.
#[derive(Clone, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub struct MElem {
    pub terms: BTreeMap<MBasis, Scalar>,
}

impl PdModule {
    pub fn new(gens: Vec<Generator>) -> Self {
        let mut seen = std::collections::HashSet::new();
        for g in &gens {
            assert!(seen.insert(g.name.clone()), "duplicate generator {}", g.name);
        }
        PdModule { gens }
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn gen_info(&self, i: usize) -> &Generator {
        &self.gens[i]
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    /// The basis vector ∂^d g_i as an element.
    pub fn basis(&self, i: usize, d: u32) -> MElem {
        if self.gens[i].kind == GenKind::Torsion && d > 0 {
            return MElem::zero();
        }
        let mut terms = BTreeMap::new();
        terms.insert((i, d), Scalar::one());
        MElem { terms }
    }

    pub fn gen_elem(&self, name: &str) -> MElem {
        self.basis(self.gen_index(name).expect("unknown generator"), 0)
    }

    pub fn basis_parity(&self, b: MBasis) -> Parity {
        self.gens[b.0].parity
    }

    /// Apply ∂; zero on torsion generators.
    pub fn partial(&self, e: &MElem) -> MElem {
        let mut out = MElem::zero();
        for (&(g, d), c) in &e.terms {
            if self.gens[g].kind == GenKind::Free {
                out.add_term((g, d + 1), c.clone());
            }
        }
        out
    }

    /// Parity of a homogeneous element; `None` for zero or mixed parity.
    pub fn parity_of(&self, e: &MElem) -> Option<Parity> {
        let mut p = None;
        for (&b, _) in &e.terms {
            let q = self.basis_parity(b);
            match p {
                None => p = Some(q),
                Some(r) if r != q => return None,
                _ => {}
            }
        }
        p
    }

    /// All basis vectors with ∂-power at most `dmax`.
    pub fn basis_upto(&self, dmax: u32) -> Vec<MBasis> {
        let mut out = Vec::new();
        for (i, g) in self.gens.iter().enumerate() {
            let top = if g.kind == GenKind::Torsion { 0 } else { dmax };
            for d in 0..=top {
                out.push((i, d));
            }
        }
        out
    }
}

impl MElem {
    pub fn zero() -> Self {
        MElem { terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, b: MBasis, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(b).or_insert_with(Scalar::zero);
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&b);
        }
    }

    pub fn add(&self, o: &MElem) -> MElem {
        let mut r = self.clone();
        for (&b, c) in &o.terms {
            r.add_term(b, c.clone());
        }
        r
    }

    pub fn neg(&self) -> MElem {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn sub(&self, o: &MElem) -> MElem {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &Scalar) -> MElem {
        if s.is_zero() {
            return MElem::zero();
        }
        MElem {
            terms: self.terms.iter().map(|(&b, c)| (b, c * s)).collect(),
        }
    }
}

/// Jet variable u_i^{(n)}.
pub type JetVar = (usize, u32);

/// A monomial in jet variables: sorted (variable, exponent) pairs, exponents ≥ 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash, Default)]
pub struct JetMono(pub Vec<(JetVar, u32)>);

impl JetMono {
    pub fn one() -> Self {
        JetMono(Vec::new())
    }

    pub fn var(v: JetVar) -> Self {
        JetMono(vec![(v, 1)])
    }

    pub fn mul(&self, o: &JetMono) -> JetMono {
        let mut m: BTreeMap<JetVar, u32> = self.0.iter().cloned().collect();
        for &(v, e) in &o.0 {
            *m.entry(v).or_insert(0) += e;
        }
        JetMono(m.into_iter().collect())
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }
}

/// The differential polynomial superalgebra F[u_i^{(n)}] on even variables.
#[derive(Clone, Debug)]
pub struct DiffPolyAlg {
    pub num_vars: usize,
    pub var_names: Vec<String>,
    /// Jet-order bound, used only by truncated enumeration.
    pub jet_bound: u32,
    /// Degree bound, used only by truncated enumeration.
    pub deg_bound: u32,
}

/// An element of a `DiffPolyAlg`: a sparse polynomial in the jet variables.
#[derive(Clone, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub struct DElem {
    pub terms: BTreeMap<JetMono, Scalar>,
}

impl DiffPolyAlg {
    pub fn new(var_names: Vec<String>, jet_bound: u32, deg_bound: u32) -> Self {
        DiffPolyAlg {
            num_vars: var_names.len(),
            var_names,
            jet_bound,
            deg_bound,
        }
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.var_names.iter().position(|v| v == name)
    }

    /// The variable u_i^{(n)} as an element.
    pub fn jet(&self, i: usize, n: u32) -> DElem {
        assert!(i < self.num_vars);
        DElem::monomial(JetMono::var((i, n)), Scalar::one())
    }

    /// ∂ as an even derivation with ∂u_i^{(n)} = u_i^{(n+1)}.
    pub fn partial(&self, e: &DElem) -> DElem {
        let mut out = DElem::zero();
        for (m, c) in &e.terms {
            for (pos, &((v, n), exp)) in m.0.iter().enumerate() {
                // d/d(u_v^{(n)}) then multiply by u_v^{(n+1)}
                let mut factors = m.0.clone();
                if exp == 1 {
                    factors.remove(pos);
                } else {
                    factors[pos].1 = exp - 1;
                }
                let rest = JetMono(factors).mul(&JetMono::var((v, n + 1)));
                out.add_term(rest, c * &Scalar::from_int(exp as i64));
            }
        }
        out
    }

    /// Partial derivative ∂/∂u_i^{(n)}.
    pub fn jet_derivative(&self, e: &DElem, v: JetVar) -> DElem {
        let mut out = DElem::zero();
        for (m, c) in &e.terms {
            for (pos, &(w, exp)) in m.0.iter().enumerate() {
                if w != v {
                    continue;
                }
                let mut factors = m.0.clone();
                if exp == 1 {
                    factors.remove(pos);
                } else {
                    factors[pos].1 = exp - 1;
                }
                out.add_term(JetMono(factors), c * &Scalar::from_int(exp as i64));
            }
        }
        out
    }

    /// Variational derivative δ/δu_i = Σ_n (−∂)^n ∘ ∂/∂u_i^{(n)}.
    pub fn variational_derivative(&self, e: &DElem, i: usize) -> DElem {
        let max_n = e
            .terms
            .keys()
            .flat_map(|m| m.0.iter().map(|&((_, n), _)| n))
            .max()
            .unwrap_or(0);
        let mut out = DElem::zero();
        for n in 0..=max_n {
            let mut t = self.jet_derivative(e, (i, n));
            for _ in 0..n {
                t = self.partial(&t).neg();
            }
            out = out.add(&t);
        }
        out
    }

    /// All monomials of total degree ≤ `deg` in jet variables of order ≤ `ord`.
    pub fn monomials_upto(&self, deg: u32, ord: u32) -> Vec<JetMono> {
        let vars: Vec<JetVar> = (0..self.num_vars)
            .flat_map(|i| (0..=ord).map(move |n| (i, n)))
            .collect();
        let mut out = vec![JetMono::one()];
        let mut layer = vec![JetMono::one()];
        for _ in 0..deg {
            let mut next = Vec::new();
            for m in &layer {
                let start = m.0.last().map(|&(v, _)| v);
                for &v in &vars {
                    if let Some(s) = start {
                        if v < s {
                            continue;
                        }
                    }
                    next.push(m.mul(&JetMono::var(v)));
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out.sort();
        out.dedup();
        out
    }
}

impl DElem {
    pub fn zero() -> Self {
        DElem { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        DElem::monomial(JetMono::one(), Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        DElem::monomial(JetMono::one(), c)
    }

    pub fn monomial(m: JetMono, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        DElem { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: JetMono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(Scalar::zero);
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, o: &DElem) -> DElem {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> DElem {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn sub(&self, o: &DElem) -> DElem {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &Scalar) -> DElem {
        if s.is_zero() {
            return DElem::zero();
        }
        DElem {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, o: &DElem) -> DElem {
        let mut r = DElem::zero();
        for (m, c) in &self.terms {
            for (n, d) in &o.terms {
                r.add_term(m.mul(n), c * d);
            }
        }
        r
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }
}

impl fmt::Display for MElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(g, d), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}*d^{}(g{})", c, d, g)?;
        }
        Ok(())
    }
}

/// A common interface over the coefficient spaces used by λ-polynomials.
pub trait VSpace: Clone + fmt::Debug {
    type Elem: Clone + PartialEq + Ord + fmt::Debug;
    fn zero_elem(&self) -> Self::Elem;
    fn is_zero_elem(&self, e: &Self::Elem) -> bool;
    fn add_elems(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale_elem(&self, a: &Self::Elem, s: &Scalar) -> Self::Elem;
    fn apply_partial(&self, a: &Self::Elem) -> Self::Elem;
    fn elem_parity(&self, a: &Self::Elem) -> Option<Parity>;
}

/// A table defining a valid random arity-2 classical element over a
/// `PdModule`: a sesquilinear edgeless part and a one-edge part closed under
/// the component derivation rule value(∂a⊗b) + value(a⊗∂b) = ∂ value(a⊗b).
/// The one-edge values on (∂^a g, h) are free and drawn deterministically
/// from the seed; the remaining values are forced by the derivation rule.
#[derive(Clone, Debug)]
pub struct RandPcl2 {
    /// (i, j) ↦ λ-polynomial in Var::Lam(0) (canonical rep of the •• value).
    pub edgeless: BTreeMap<(usize, usize), crate::lambda::LPoly<MElem>>,
    pub seed: u64,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

impl RandPcl2 {
    /// The free value on (∂^a g_i, g_j): a deterministic sparse element.
    fn free_value(&self, m: &PdModule, i: usize, a: u32, j: usize) -> MElem {
        let basis = m.basis_upto(1);
        let h = splitmix(
            self.seed ^ (i as u64) ^ ((a as u64) << 8) ^ ((j as u64) << 24),
        );
        let mut e = MElem::zero();
        let pick = (h as usize >> 3) % basis.len();
        let c = (h % 5) as i64 - 2;
        e.add_term(basis[pick], Scalar::from_int(c));
        e
    }

    /// Value on ∂^a g_i ⊗ ∂^b g_j for the canonical edge 1→2 (λ-free).
    pub fn edge_value(&self, m: &PdModule, i: usize, a: u32, j: usize, b: u32) -> MElem {
        if b == 0 {
            if m.gen_info(i).kind == GenKind::Torsion && a > 0 {
                return MElem::zero();
            }
            return self.free_value(m, i, a, j);
        }
        if m.gen_info(j).kind == GenKind::Torsion {
            return MElem::zero();
        }
        // value(x, ∂y) = ∂ value(x, y) − value(∂x, y)
        let prev = self.edge_value(m, i, a, j, b - 1);
        let up = self.edge_value(m, i, a + 1, j, b - 1);
        m.partial(&prev).sub(&up)
    }
}

impl PdModule {
    /// A valid random arity-2 classical table.
    pub fn random_pcl2(&self, rng: &mut rand::rngs::StdRng) -> RandPcl2 {
        use crate::lambda::{LPoly, Mono, Var};
        use rand::Rng;
        let mut edgeless = BTreeMap::new();
        for i in 0..self.num_gens() {
            for j in 0..self.num_gens() {
                let mut v = LPoly::zero();
                let basis = self.basis_upto(1);
                for _ in 0..2 {
                    let k = rng.gen_range(0..=2u32);
                    let b = basis[rng.gen_range(0..basis.len())];
                    if self.gen_info(b.0).parity != Parity::Even {
                        continue;
                    }
                    let mut e = MElem::zero();
                    e.add_term(b, Scalar::from_int(rng.gen_range(-2..=2)));
                    v.add_term_in(self, Mono::power(Var::Lam(0), k), e);
                }
                edgeless.insert((i, j), v);
            }
        }
        RandPcl2 { edgeless, seed: rng.gen() }
    }
}

impl VSpace for PdModule {
    type Elem = MElem;
    fn zero_elem(&self) -> MElem {
        MElem::zero()
    }
    fn is_zero_elem(&self, e: &MElem) -> bool {
        e.is_zero()
    }
    fn add_elems(&self, a: &MElem, b: &MElem) -> MElem {
        a.add(b)
    }
    fn scale_elem(&self, a: &MElem, s: &Scalar) -> MElem {
        a.scale(s)
    }
    fn apply_partial(&self, a: &MElem) -> MElem {
        self.partial(a)
    }
    fn elem_parity(&self, a: &MElem) -> Option<Parity> {
        self.parity_of(a)
    }
}

impl VSpace for DiffPolyAlg {
    type Elem = DElem;
    fn zero_elem(&self) -> DElem {
        DElem::zero()
    }
    fn is_zero_elem(&self, e: &DElem) -> bool {
        e.is_zero()
    }
    fn add_elems(&self, a: &DElem, b: &DElem) -> DElem {
        a.add(b)
    }
    fn scale_elem(&self, a: &DElem, s: &Scalar) -> DElem {
        a.scale(s)
    }
    fn apply_partial(&self, a: &DElem) -> DElem {
        self.partial(a)
    }
    fn elem_parity(&self, a: &DElem) -> Option<Parity> {
        if a.is_zero() {
            None
        } else {
            Some(Parity::Even)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_gen_module() -> PdModule {
        PdModule::new(vec![
            Generator { name: "a".into(), parity: Parity::Even, kind: GenKind::Free },
            Generator { name: "K".into(), parity: Parity::Even, kind: GenKind::Torsion },
        ])
    }

    #[test]
    fn partial_kills_torsion() {
        let m = two_gen_module();
        let k = m.gen_elem("K");
        assert!(m.partial(&k).is_zero());
        let a = m.gen_elem("a");
        assert_eq!(m.partial(&a), m.basis(0, 1));
    }

    #[test]
    fn partial_is_leibniz_on_diff_poly() {
        let alg = DiffPolyAlg::new(vec!["u1".into(), "u2".into()], 3, 3);
        let u1 = alg.jet(0, 0);
        let u2 = alg.jet(1, 0);
        let prod = u1.mul(&u2);
        let lhs = alg.partial(&prod);
        let rhs = alg.partial(&u1).mul(&u2).add(&u1.mul(&alg.partial(&u2)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn partial_on_scalar_constant_is_zero() {
        let alg = DiffPolyAlg::new(vec!["u".into()], 2, 2);
        let c = DElem::constant(Scalar::ratio(3, 7));
        assert!(alg.partial(&c).is_zero());
    }

    #[test]
    fn variational_derivative_basic() {
        let alg = DiffPolyAlg::new(vec!["u".into()], 2, 2);
        // δ/δu (u u') = u' − ∂(u) = 0, a total derivative
        let e = alg.jet(0, 0).mul(&alg.jet(0, 1));
        assert!(alg.variational_derivative(&e, 0).is_zero());
        // δ/δu (u²) = 2u
        let u2 = alg.jet(0, 0).mul(&alg.jet(0, 0));
        assert_eq!(alg.variational_derivative(&u2, 0), alg.jet(0, 0).scale(&Scalar::from_int(2)));
    }

    #[test]
    fn monomial_enumeration_counts() {
        let alg = DiffPolyAlg::new(vec!["u".into()], 2, 2);
        // variables u, u', u''; monomials of degree ≤ 2: 1 + 3 + 6 = 10
        assert_eq!(alg.monomials_upto(2, 2).len(), 10);
    }
}
