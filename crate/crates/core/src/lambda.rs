//! Polynomials in λ-variables with module or algebra coefficients, the
//! canonical normal form modulo ⟨∂ + λ_0 + … + λ_k⟩, affine substitution
//! with ∂-slots, and exact definite integration.
//!
//! Variables are even and commute. A distinguished variable `Var::Del`
//! stands for ∂ inside substitution targets and integration bounds; it is
//! always resolved eagerly onto the coefficients (expanded binomially), so
//! polynomials returned from public operations never contain it.

use crate::module::VSpace;
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::fmt;

/// A polynomial variable.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Var {
    /// λ_i.
    Lam(u16),
    /// Integration / auxiliary λ-type variable (σ, τ, μ, …).
    Sig(u16),
    /// Slot variable x_j used by the classical composition formula.
    Aux(u16),
    /// The formal ∂ marker; resolved onto coefficients, never exposed.
    Del,
}

/// A monomial: sorted list of (variable, exponent) with exponents ≥ 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Mono(pub Vec<(Var, u32)>);

impl Mono {
    pub fn one() -> Self {
        Mono(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Mono(vec![(v, 1)])
    }

    pub fn power(v: Var, e: u32) -> Self {
        if e == 0 {
            Mono::one()
        } else {
            Mono(vec![(v, e)])
        }
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let mut m: BTreeMap<Var, u32> = self.0.iter().cloned().collect();
        for &(v, e) in &o.0 {
            *m.entry(v).or_insert(0) += e;
        }
        Mono(m.into_iter().collect())
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0.iter().find(|&&(w, _)| w == v).map(|&(_, e)| e).unwrap_or(0)
    }

    pub fn without(&self, v: Var) -> Mono {
        Mono(self.0.iter().cloned().filter(|&(w, _)| w != v).collect())
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }
}

/// A polynomial in `Var`s with coefficients in a space `E`.
#[derive(Clone, PartialEq, Eq, Debug, PartialOrd, Ord)]
pub struct LPoly<E: Clone + PartialEq + Ord> {
    pub terms: BTreeMap<Mono, E>,
}

/// Scalar-coefficient polynomials (substitution targets, integration bounds).
pub type SPoly = LPoly<Scalar>;

impl<E: Clone + PartialEq + Ord + fmt::Debug> LPoly<E> {
    pub fn zero() -> Self {
        LPoly { terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant<S: VSpace<Elem = E>>(space: &S, e: E) -> Self {
        let mut p = LPoly::zero();
        p.add_term_in(space, Mono::one(), e);
        p
    }

    pub fn monomial<S: VSpace<Elem = E>>(space: &S, m: Mono, e: E) -> Self {
        let mut p = LPoly::zero();
        p.add_term_in(space, m, e);
        p
    }

    pub fn add_term_in<S: VSpace<Elem = E>>(&mut self, space: &S, m: Mono, e: E) {
        if space.is_zero_elem(&e) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(cur) => {
                let s = space.add_elems(cur, &e);
                if space.is_zero_elem(&s) {
                    self.terms.remove(&m);
                } else {
                    *cur = s;
                }
            }
            None => {
                self.terms.insert(m, e);
            }
        }
    }

    pub fn add<S: VSpace<Elem = E>>(&self, space: &S, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, e) in &o.terms {
            r.add_term_in(space, m.clone(), e.clone());
        }
        r
    }

    pub fn neg<S: VSpace<Elem = E>>(&self, space: &S) -> Self {
        self.scale(space, &Scalar::from_int(-1))
    }

    pub fn sub<S: VSpace<Elem = E>>(&self, space: &S, o: &Self) -> Self {
        self.add(space, &o.neg(space))
    }

    pub fn scale<S: VSpace<Elem = E>>(&self, space: &S, s: &Scalar) -> Self {
        if s.is_zero() {
            return LPoly::zero();
        }
        LPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, e)| (m.clone(), space.scale_elem(e, s)))
                .collect(),
        }
    }

    /// Multiply by a scalar-coefficient polynomial.
    pub fn mul_spoly<S: VSpace<Elem = E>>(&self, space: &S, q: &SPoly) -> Self {
        let mut r = LPoly::zero();
        for (m, e) in &self.terms {
            for (n, c) in &q.terms {
                r.add_term_in(space, m.mul(n), space.scale_elem(e, c));
            }
        }
        r
    }

    /// Apply ∂ to every coefficient.
    pub fn map_partial<S: VSpace<Elem = E>>(&self, space: &S) -> Self {
        let mut r = LPoly::zero();
        for (m, e) in &self.terms {
            r.add_term_in(space, m.clone(), space.apply_partial(e));
        }
        r
    }

    /// Resolve every `Del` power by applying ∂ that many times to the coefficient.
    pub fn resolve_del<S: VSpace<Elem = E>>(&self, space: &S) -> Self {
        let mut r = LPoly::zero();
        for (m, e) in &self.terms {
            let j = m.exponent(Var::Del);
            let mut c = e.clone();
            for _ in 0..j {
                c = space.apply_partial(&c);
            }
            r.add_term_in(space, m.without(Var::Del), c);
        }
        r
    }

    /// Substitute `v` by a scalar-polynomial target (which may contain `Del`),
    /// expanding powers binomially and resolving `Del` onto coefficients.
    pub fn substitute<S: VSpace<Elem = E>>(&self, space: &S, v: Var, target: &SPoly) -> Self {
        let max_pow = self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0);
        // powers of the target, computed once
        let mut powers: Vec<SPoly> = Vec::with_capacity(max_pow as usize + 1);
        powers.push(SPoly::sconst(Scalar::one()));
        for k in 1..=max_pow {
            powers.push(powers[(k - 1) as usize].smul(target));
        }
        let mut r = LPoly::zero();
        for (m, e) in &self.terms {
            let a = m.exponent(v);
            let rest = m.without(v);
            for (n, c) in &powers[a as usize].terms {
                let j = n.exponent(Var::Del);
                let mut coeff = space.scale_elem(e, c);
                for _ in 0..j {
                    coeff = space.apply_partial(&coeff);
                }
                r.add_term_in(space, rest.mul(&n.without(Var::Del)), coeff);
            }
        }
        r
    }

    /// Derivative with respect to a variable.
    pub fn derivative<S: VSpace<Elem = E>>(&self, space: &S, v: Var) -> Self {
        let mut r = LPoly::zero();
        for (m, e) in &self.terms {
            let a = m.exponent(v);
            if a == 0 {
                continue;
            }
            let rest = m.without(v).mul(&Mono::power(v, a - 1));
            r.add_term_in(space, rest, space.scale_elem(e, &Scalar::from_int(a as i64)));
        }
        r
    }

    /// Exact definite integral ∫ over `v` from `lower` to `upper`.
    /// Bounds are scalar polynomials in the remaining variables, possibly
    /// containing `Del`, which is resolved onto the coefficients.
    pub fn formal_integral<S: VSpace<Elem = E>>(
        &self,
        space: &S,
        v: Var,
        lower: &SPoly,
        upper: &SPoly,
    ) -> Self {
        // antiderivative in v
        let mut anti = LPoly::zero();
        for (m, e) in &self.terms {
            let a = m.exponent(v);
            let rest = m.without(v).mul(&Mono::power(v, a + 1));
            anti.add_term_in(space, rest, space.scale_elem(e, &Scalar::ratio(1, a as i64 + 1)));
        }
        let at_upper = anti.substitute(space, v, upper);
        let at_lower = anti.substitute(space, v, lower);
        at_upper.sub(space, &at_lower)
    }

    /// Substitute every `Lam(j)` simultaneously by `assignments[j]` (scalar
    /// polynomials, possibly containing `Del`, resolved onto coefficients).
    /// Non-λ variables pass through unchanged.
    pub fn eval_lam_assignments<S: VSpace<Elem = E>>(
        &self,
        space: &S,
        assignments: &[SPoly],
    ) -> Self {
        let mut r = LPoly::zero();
        for (m, e) in &self.terms {
            // start from the non-λ part of the monomial
            let mut acc = LPoly::zero();
            let rest = Mono(
                m.0.iter()
                    .cloned()
                    .filter(|&(v, _)| !matches!(v, Var::Lam(_)))
                    .collect(),
            );
            acc.add_term_in(space, rest, e.clone());
            for &(v, pow) in &m.0 {
                if let Var::Lam(j) = v {
                    let a = assignments
                        .get(j as usize)
                        .unwrap_or_else(|| panic!("no assignment for λ_{}", j));
                    for _ in 0..pow {
                        acc = acc.mul_spoly(space, a);
                    }
                }
            }
            r = r.add(space, &acc.resolve_del(space));
        }
        r
    }

    /// Coefficient of v^k (a polynomial in the remaining variables).
    pub fn coeff_of<S: VSpace<Elem = E>>(&self, space: &S, v: Var, k: u32) -> Self {
        let mut r = LPoly::zero();
        for (m, e) in &self.terms {
            if m.exponent(v) == k {
                r.add_term_in(space, m.without(v), e.clone());
            }
        }
        r
    }

    /// Highest power of `v` appearing.
    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    /// All variables appearing.
    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .terms
            .keys()
            .flat_map(|m| m.0.iter().map(|&(v, _)| v))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }
}

impl SPoly {
    pub fn sconst(c: Scalar) -> SPoly {
        if c.is_zero() {
            return LPoly::zero();
        }
        let mut terms = BTreeMap::new();
        terms.insert(Mono::one(), c);
        LPoly { terms }
    }

    pub fn svar(v: Var) -> SPoly {
        let mut terms = BTreeMap::new();
        terms.insert(Mono::var(v), Scalar::one());
        LPoly { terms }
    }

    pub fn sadd(&self, o: &SPoly) -> SPoly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.sadd_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sneg(&self) -> SPoly {
        LPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn ssub(&self, o: &SPoly) -> SPoly {
        self.sadd(&o.sneg())
    }

    pub fn sadd_term(&mut self, m: Mono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(Scalar::zero);
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn smul(&self, o: &SPoly) -> SPoly {
        let mut r = SPoly::zero();
        for (m, c) in &self.terms {
            for (n, d) in &o.terms {
                r.sadd_term(m.mul(n), c * d);
            }
        }
        r
    }

    /// −λ_0 − … − λ_{k−1} − ∂, the normal-form target for λ_k.
    pub fn neg_lambda_sum_del(k: u16) -> SPoly {
        let mut p = SPoly::sconst(Scalar::zero());
        for i in 0..k {
            p.sadd_term(Mono::var(Var::Lam(i)), Scalar::from_int(-1));
        }
        p.sadd_term(Mono::var(Var::Del), Scalar::from_int(-1));
        p
    }
}

/// Canonical representative of V[λ_0..λ_k]/⟨∂+λ_0+…+λ_k⟩: substitute
/// λ_k ↦ −λ_0−…−λ_{k−1}−∂ with ∂ expanded onto the coefficients. The result
/// is a polynomial in λ_0..λ_{k−1} only; for k = 0 this realizes
/// V[λ_0]/⟨∂+λ_0⟩ ≅ V.
pub fn normal_form<S: VSpace>(space: &S, p: &LPoly<S::Elem>, k: u16) -> LPoly<S::Elem> {
    p.substitute(space, Var::Lam(k), &SPoly::neg_lambda_sum_del(k))
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Lam(i) => write!(f, "L{}", i),
            Var::Sig(i) => write!(f, "s{}", i),
            Var::Aux(i) => write!(f, "x{}", i),
            Var::Del => write!(f, "D"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::{GenKind, Generator, PdModule};
    use crate::parity::Parity;

    fn space() -> PdModule {
        PdModule::new(vec![
            Generator { name: "v".into(), parity: Parity::Even, kind: GenKind::Free },
            Generator { name: "w".into(), parity: Parity::Odd, kind: GenKind::Free },
        ])
    }

    fn lam(i: u16) -> Mono {
        Mono::var(Var::Lam(i))
    }

    #[test]
    fn normal_form_k0_realizes_minus_del() {
        // v·λ_0 ↦ (−∂)v  in V[λ_0]/⟨∂+λ_0⟩ ≅ V
        let sp = space();
        let v = sp.gen_elem("v");
        let p = LPoly::monomial(&sp, lam(0), v.clone());
        let nf = normal_form(&sp, &p, 0);
        let expected = LPoly::constant(&sp, sp.partial(&v).neg());
        assert_eq!(nf, expected);
    }

    #[test]
    fn normal_form_keeps_lower_vars() {
        // constant v at k=1 stays v, a polynomial in λ_0 alone
        let sp = space();
        let v = sp.gen_elem("v");
        let p = LPoly::constant(&sp, v.clone());
        let nf = normal_form(&sp, &p, 1);
        assert_eq!(nf, p);
        assert!(nf.degree_in(Var::Lam(1)) == 0);
    }

    #[test]
    fn normal_form_kills_ideal_generator() {
        // (∂ + λ_0 + λ_1)·w ↦ 0
        let sp = space();
        let w = sp.gen_elem("w");
        let mut p = LPoly::zero();
        p.add_term_in(&sp, Mono::one(), sp.partial(&w));
        p.add_term_in(&sp, lam(0), w.clone());
        p.add_term_in(&sp, lam(1), w.clone());
        assert!(normal_form(&sp, &p, 1).is_zero());
    }

    #[test]
    fn normal_form_idempotent_and_ideal_invariant() {
        // randomized-ish small check: nf(p + (∂+Σλ)q) = nf(p), nf(nf(p)) = nf(p)
        let sp = space();
        let v = sp.gen_elem("v");
        let w = sp.gen_elem("w");
        for k in 1u16..=3 {
            let mut p = LPoly::zero();
            p.add_term_in(&sp, lam(0).mul(&lam(k)), v.clone());
            p.add_term_in(&sp, Mono::power(Var::Lam(k), 2), w.clone());
            p.add_term_in(&sp, Mono::one(), sp.partial(&v));
            let mut q = LPoly::zero();
            q.add_term_in(&sp, lam(1.min(k)), w.clone());
            q.add_term_in(&sp, Mono::one(), v.clone());
            // (∂ + λ_0 + … + λ_k)·q
            let mut ideal = q.map_partial(&sp);
            for i in 0..=k {
                ideal = ideal.add(&sp, &q.mul_spoly(&sp, &SPoly::svar(Var::Lam(i))));
            }
            let nf1 = normal_form(&sp, &p, k);
            let nf2 = normal_form(&sp, &p.add(&sp, &ideal), k);
            assert_eq!(nf1, nf2);
            assert_eq!(normal_form(&sp, &nf1, k), nf1);
        }
    }

    #[test]
    fn substitute_binomial_expansion() {
        // (λ+x)² with x ↦ μ+∂ acting on coefficient v:
        // λ²v + 2λ(μ+∂)v + (μ+∂)²v, with μ spelled Sig(0)
        let sp = space();
        let v = sp.gen_elem("v");
        let lam0 = Var::Lam(0);
        let x = Var::Aux(0);
        let mu = Var::Sig(0);
        let mut p = LPoly::zero();
        p.add_term_in(&sp, Mono::power(lam0, 2), v.clone());
        p.add_term_in(&sp, Mono::var(lam0).mul(&Mono::var(x)), v.scale(&Scalar::from_int(2)));
        p.add_term_in(&sp, Mono::power(x, 2), v.clone());
        let target = SPoly::svar(mu).sadd(&SPoly::svar(Var::Del));
        let out = p.substitute(&sp, x, &target);

        let dv = sp.partial(&v);
        let ddv = sp.partial(&dv);
        let mut expected = LPoly::zero();
        expected.add_term_in(&sp, Mono::power(lam0, 2), v.clone());
        expected.add_term_in(&sp, Mono::var(lam0).mul(&Mono::var(mu)), v.scale(&Scalar::from_int(2)));
        expected.add_term_in(&sp, Mono::var(lam0), dv.scale(&Scalar::from_int(2)));
        expected.add_term_in(&sp, Mono::power(mu, 2), v.clone());
        expected.add_term_in(&sp, Mono::var(mu), dv.scale(&Scalar::from_int(2)));
        expected.add_term_in(&sp, Mono::one(), ddv);
        assert_eq!(out, expected);
    }

    #[test]
    fn substitute_identity_target() {
        let sp = space();
        let v = sp.gen_elem("v");
        let p = LPoly::monomial(&sp, Mono::power(Var::Lam(0), 3), v);
        assert_eq!(p.substitute(&sp, Var::Lam(0), &SPoly::svar(Var::Lam(0))), p);
    }

    #[test]
    fn integral_of_sigma() {
        // ∫_0^λ σ dσ = λ²/2
        let sp = space();
        let v = sp.gen_elem("v");
        let p = LPoly::monomial(&sp, Mono::var(Var::Sig(0)), v.clone());
        let out = p.formal_integral(
            &sp,
            Var::Sig(0),
            &SPoly::sconst(Scalar::zero()),
            &SPoly::svar(Var::Lam(0)),
        );
        let expected = LPoly::monomial(&sp, Mono::power(Var::Lam(0), 2), v.scale(&Scalar::ratio(1, 2)));
        assert_eq!(out, expected);
    }

    #[test]
    fn integral_constant_with_shifted_bounds() {
        // ∫_{λ_1}^{λ_0+λ_1−σ_0} c dσ_1 = c(λ_0 − σ_0)
        let sp = space();
        let c = sp.gen_elem("v");
        let p = LPoly::constant(&sp, c.clone());
        let lower = SPoly::svar(Var::Lam(1));
        let upper = SPoly::svar(Var::Lam(0))
            .sadd(&SPoly::svar(Var::Lam(1)))
            .ssub(&SPoly::svar(Var::Sig(0)));
        let out = p.formal_integral(&sp, Var::Sig(1), &lower, &upper);
        let mut expected = LPoly::zero();
        expected.add_term_in(&sp, Mono::var(Var::Lam(0)), c.clone());
        expected.add_term_in(&sp, Mono::var(Var::Sig(0)), c.neg());
        assert_eq!(out, expected);
    }

    #[test]
    fn integral_empty_interval_is_zero() {
        let sp = space();
        let v = sp.gen_elem("v");
        let p = LPoly::monomial(&sp, Mono::power(Var::Sig(0), 4), v);
        let zero = SPoly::sconst(Scalar::zero());
        assert!(p.formal_integral(&sp, Var::Sig(0), &zero, &zero).is_zero());
    }

    #[test]
    fn integral_additive_in_concatenated_intervals() {
        // ∫_a^b + ∫_b^c = ∫_a^c on a couple of shapes
        let sp = space();
        let v = sp.gen_elem("v");
        let w = sp.gen_elem("w");
        let s = Var::Sig(0);
        let mut p = LPoly::zero();
        p.add_term_in(&sp, Mono::power(s, 2), v);
        p.add_term_in(&sp, Mono::var(s).mul(&Mono::var(Var::Lam(0))), w);
        let a = SPoly::sconst(Scalar::from_int(-1));
        let b = SPoly::svar(Var::Lam(1));
        let c = SPoly::svar(Var::Lam(0)).sadd(&SPoly::sconst(Scalar::from_int(2)));
        let i1 = p.formal_integral(&sp, s, &a, &b);
        let i2 = p.formal_integral(&sp, s, &b, &c);
        let i3 = p.formal_integral(&sp, s, &a, &c);
        assert_eq!(i1.add(&sp, &i2), i3);
    }

    #[test]
    fn pairing_reproduces_mutual_del_shift() {
        // P(λ+y) ⊗ Q(μ+x) with x ↦ ∂ on P's side and y ↦ ∂ on Q's side,
        // P = p₁λ, Q = q₁μ: Σ_{m,n} ((μ+∂)^n p_m) ⊗ ((λ+∂)^m q_n).
        // Realized here one factor at a time via substitute.
        let sp = space();
        let p1 = sp.gen_elem("v");
        let q1 = sp.gen_elem("w");
        let (lam, mu) = (Var::Lam(0), Var::Lam(1));
        let (x, y) = (Var::Aux(0), Var::Aux(1));
        // factor 1: p₁·(λ+y); factor 2: q₁·(μ+x)
        let f1 = {
            let mut p = LPoly::zero();
            p.add_term_in(&sp, Mono::var(lam), p1.clone());
            p.add_term_in(&sp, Mono::var(y), p1.clone());
            p
        };
        let f2 = {
            let mut p = LPoly::zero();
            p.add_term_in(&sp, Mono::var(mu), q1.clone());
            p.add_term_in(&sp, Mono::var(x), q1.clone());
            p
        };
        // x-power n in factor 2 becomes (∂)^n on factor 1's coefficient, i.e.
        // substitute x ↦ μ+∂ pairing-wise: here we check the m=n=1 shape:
        // result₁ = (μ+∂)p₁ coefficient of λ⁰... the full pairing is exercised
        // in the classical operad; here we check the single-sided expansions.
        let f1_shift = f1.substitute(&sp, y, &SPoly::svar(mu).sadd(&SPoly::svar(Var::Del)));
        let f2_shift = f2.substitute(&sp, x, &SPoly::svar(lam).sadd(&SPoly::svar(Var::Del)));
        let mut e1 = LPoly::zero();
        e1.add_term_in(&sp, Mono::var(lam), p1.clone());
        e1.add_term_in(&sp, Mono::var(mu), p1.clone());
        e1.add_term_in(&sp, Mono::one(), sp.partial(&p1));
        assert_eq!(f1_shift, e1);
        let mut e2 = LPoly::zero();
        e2.add_term_in(&sp, Mono::var(mu), q1.clone());
        e2.add_term_in(&sp, Mono::var(lam), q1.clone());
        e2.add_term_in(&sp, Mono::one(), sp.partial(&q1));
        assert_eq!(f2_shift, e2);
    }
}
