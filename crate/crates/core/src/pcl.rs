//! The classical operad P^cl: graph-indexed λ-maps subject to the cycle and
//! sesquilinearity relations, with composition through the graph cooperad.
//!
//! Elements are evaluators, not materialized bases: the linear relations
//! among acyclic graphs make a canonical independent basis subtle, so
//! correctness is enforced by validation plus extensional probing. The
//! probe set pairs every canonical acyclic graph up to the edge cap with
//! every tuple of probe arguments.

use crate::graph::{acyclic_canonical_graphs_upto, cocompose, x_sum, DiGraph};
use crate::lambda::{normal_form, LPoly, Mono, SPoly, Var};
use crate::module::{MElem, PdModule, RandPcl2, VSpace};
use crate::operad::{Operad, Sampler};
use crate::parity::Parity;
use crate::perm::Perm;
use crate::scalar::Scalar;
use rand::rngs::StdRng;
use rand::Rng;
use std::cell::RefCell;
use std::collections::BTreeMap;
use std::rc::Rc;

/// Evaluator signature: (graph, argument tuple) → canonical quotient rep.
pub type PclEval<E> = Rc<dyn Fn(&DiGraph, &[E]) -> LPoly<E>>;

/// An element of P^cl(n): arity, parity, evaluator, optional edge-degree.
#[derive(Clone)]
pub struct PclElem<E: Clone + PartialEq + Ord + std::fmt::Debug> {
    pub arity: usize,
    pub parity: Parity,
    pub eval: PclEval<E>,
    /// Some(r) when the element is supported on graphs with exactly r edges.
    pub degree: Option<i64>,
}

impl<E: Clone + PartialEq + Ord + std::fmt::Debug> std::fmt::Debug for PclElem<E> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PclElem(arity {}, {}, degree {:?})", self.arity, self.parity, self.degree)
    }
}

/// The operad P^cl over a coefficient space. `flip` reverses argument
/// parities (the Π in P^cl(ΠV)) without touching the space itself.
#[derive(Clone)]
pub struct PclOperad<S: VSpace> {
    pub space: S,
    pub flip: bool,
    /// Probe arguments used for extensional equality.
    pub probe_elems: Vec<S::Elem>,
    /// Edge cap for probe graphs.
    pub edge_cap: usize,
}

impl<S: VSpace> PclOperad<S> {
    pub fn new(space: S, flip: bool, probe_elems: Vec<S::Elem>, edge_cap: usize) -> Self {
        PclOperad { space, flip, probe_elems, edge_cap }
    }

    pub fn arg_parity(&self, e: &S::Elem) -> Parity {
        let p = self.space.elem_parity(e).unwrap_or(Parity::Even);
        if self.flip {
            p.flip()
        } else {
            p
        }
    }

    pub fn probe_tuples(&self, n: usize) -> Vec<Vec<S::Elem>> {
        if n >= 4 {
            // at composite arities, probe the all-default tuple plus every
            // single-slot substitution; multilinearity and the per-slot shape
            // of the relations make one varying slot at a time sufficient to
            // expose sign and shift defects
            let base = vec![self.probe_elems[0].clone(); n];
            let mut out = vec![base.clone()];
            for slot in 0..n {
                for e in self.probe_elems.iter().skip(1) {
                    let mut t = base.clone();
                    t[slot] = e.clone();
                    out.push(t);
                }
            }
            return out;
        }
        let mut out: Vec<Vec<S::Elem>> = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|t| {
                    self.probe_elems.iter().map(move |e| {
                        let mut t2 = t.clone();
                        t2.push(e.clone());
                        t2
                    })
                })
                .collect();
        }
        out
    }

    pub fn probe_graphs(&self, n: usize) -> Vec<DiGraph> {
        // larger arities only appear inside harness composites; cap the
        // probe family there to keep extensional equality affordable
        let (cap, limit) = match n {
            0..=3 => (self.edge_cap, usize::MAX),
            4 => (self.edge_cap.min(2), 10),
            _ => (self.edge_cap.min(1), 6),
        };
        let all = acyclic_canonical_graphs_upto(n, cap);
        if all.len() <= limit {
            return all;
        }
        let step = all.len() / limit;
        all.into_iter().step_by(step.max(1)).take(limit).collect()
    }

    pub fn eval(&self, f: &PclElem<S::Elem>, gamma: &DiGraph, args: &[S::Elem]) -> LPoly<S::Elem> {
        assert_eq!(args.len(), f.arity, "arity mismatch");
        assert_eq!(gamma.num_vertices(), f.arity, "graph size mismatch");
        (f.eval)(gamma, args)
    }

    fn canonicalize(&self, p: LPoly<S::Elem>, arity: usize) -> LPoly<S::Elem> {
        if arity == 0 {
            p
        } else {
            normal_form(&self.space, &p, (arity - 1) as u16)
        }
    }
}

impl<S: VSpace + 'static> Operad for PclOperad<S> {
    type Elem = PclElem<S::Elem>;

    fn arity(&self, f: &Self::Elem) -> usize {
        f.arity
    }

    fn parity(&self, f: &Self::Elem) -> Parity {
        f.parity
    }

    fn zero_elem(&self, arity: usize, parity: Parity) -> Self::Elem {
        PclElem { arity, parity, eval: Rc::new(|_, _| LPoly::zero()), degree: None }
    }

    fn is_zero(&self, f: &Self::Elem) -> bool {
        let graphs = self.probe_graphs(f.arity);
        let tuples = self.probe_tuples(f.arity);
        graphs
            .iter()
            .all(|g| tuples.iter().all(|t| (f.eval)(g, t).is_zero()))
    }

    fn add(&self, f: &Self::Elem, g: &Self::Elem) -> Self::Elem {
        assert_eq!(f.arity, g.arity, "arity mismatch");
        let (fe, ge) = (f.eval.clone(), g.eval.clone());
        let space = self.space.clone();
        let degree = match (f.degree, g.degree) {
            (Some(a), Some(b)) if a == b => Some(a),
            _ => None,
        };
        PclElem {
            arity: f.arity,
            parity: f.parity,
            eval: Rc::new(move |gamma, args| fe(gamma, args).add(&space, &ge(gamma, args))),
            degree,
        }
    }

    fn scale(&self, f: &Self::Elem, s: &Scalar) -> Self::Elem {
        let fe = f.eval.clone();
        let space = self.space.clone();
        let s = s.clone();
        PclElem {
            arity: f.arity,
            parity: f.parity,
            eval: Rc::new(move |gamma, args| fe(gamma, args).scale(&space, &s)),
            degree: f.degree,
        }
    }

    fn unit(&self) -> Self::Elem {
        let space = self.space.clone();
        PclElem {
            arity: 1,
            parity: Parity::Even,
            eval: Rc::new(move |_, args| LPoly::constant(&space, args[0].clone())),
            degree: Some(0),
        }
    }

    fn compose(&self, f: &Self::Elem, gs: &[Self::Elem]) -> Self::Elem {
        let n = f.arity;
        assert_eq!(gs.len(), n, "arity mismatch");
        let sizes: Vec<usize> = gs.iter().map(|g| g.arity).collect();
        let total: usize = sizes.iter().sum();
        let parity = gs.iter().fold(f.parity, |p, g| p + g.parity);
        let degree = f
            .degree
            .and_then(|d| gs.iter().try_fold(d, |acc, g| g.degree.map(|e| acc + e)));
        let op = self.clone();
        let f = f.clone();
        let gs: Vec<PclElem<S::Elem>> = gs.to_vec();
        let cache: RefCell<BTreeMap<(DiGraph, Vec<S::Elem>), LPoly<S::Elem>>> =
            RefCell::new(BTreeMap::new());
        PclElem {
            arity: total,
            parity,
            eval: Rc::new(move |gamma, args| {
                let key = (gamma.clone(), args.to_vec());
                if let Some(v) = cache.borrow().get(&key) {
                    return v.clone();
                }
                let v = op.compose_eval(&f, &gs, gamma, args);
                cache.borrow_mut().insert(key, v.clone());
                v
            }),
            degree,
        }
    }

    fn sym_act(&self, f: &Self::Elem, sigma: &Perm) -> Self::Elem {
        let n = f.arity;
        assert_eq!(sigma.len(), n, "arity mismatch");
        let op = self.clone();
        let f = f.clone();
        let sigma = sigma.clone();
        let cache: RefCell<BTreeMap<(DiGraph, Vec<S::Elem>), LPoly<S::Elem>>> =
            RefCell::new(BTreeMap::new());
        PclElem {
            arity: n,
            parity: f.parity,
            eval: Rc::new(move |gamma, args| {
                let key = (gamma.clone(), args.to_vec());
                if let Some(v) = cache.borrow().get(&key) {
                    return v.clone();
                }
                let inv = sigma.inverse();
                let pars: Vec<Parity> = args.iter().map(|a| op.arg_parity(a)).collect();
                let eps = sigma.epsilon_sign(&pars);
                let permuted: Vec<S::Elem> =
                    (1..=n).map(|s| args[inv.apply(s) - 1].clone()).collect();
                let relabeled = gamma.relabel(&sigma);
                let v = (f.eval)(&relabeled, &permuted);
                // f's slot-j λ is the global λ_{σ⁻¹(j+1)−1}
                let assigns: Vec<SPoly> = (0..n.saturating_sub(1))
                    .map(|j| SPoly::svar(Var::Lam((inv.apply(j + 1) - 1) as u16)))
                    .collect();
                let moved = v.eval_lam_assignments(&op.space, &assigns);
                let out = op.canonicalize(moved, n).scale(&op.space, &Scalar::from_int(eps));
                cache.borrow_mut().insert(key, out.clone());
                out
            }),
            degree: f.degree,
        }
    }
}

impl<S: VSpace + 'static> PclOperad<S> {
    fn compose_eval(
        &self,
        f: &PclElem<S::Elem>,
        gs: &[PclElem<S::Elem>],
        gamma: &DiGraph,
        args: &[S::Elem],
    ) -> LPoly<S::Elem> {
        let space = &self.space;
        let n = gs.len();
        let sizes: Vec<usize> = gs.iter().map(|g| g.arity).collect();
        let total: usize = sizes.iter().sum();
        let co = cocompose(gamma, &sizes);
        if !co.delta0.is_acyclic() {
            return LPoly::zero();
        }
        let offsets = co.offsets.clone();
        let block_sum = |i: usize| -> SPoly {
            let mut s = SPoly::zero();
            for k in offsets[i]..offsets[i + 1] {
                s.sadd_term(Mono::var(Var::Lam(k as u16)), Scalar::one());
            }
            s
        };
        // Koszul sign of (g_1 ⊗ … ⊗ g_n) against the argument blocks
        let mut sign = 1i64;
        {
            let mut earlier_odd = false;
            for (i, g) in gs.iter().enumerate() {
                if g.parity.is_odd() && earlier_odd {
                    sign = -sign;
                }
                let mut block_odd = false;
                for a in &args[offsets[i]..offsets[i + 1]] {
                    block_odd ^= self.arg_parity(a).is_odd();
                }
                earlier_odd ^= block_odd;
            }
        }
        // per-factor values at λ-arguments shifted by the externally
        // connected sums X(k); factor slot j is the global λ_{offsets[i]+j}
        let mut inner: Vec<LPoly<S::Elem>> = Vec::with_capacity(n);
        for i in 0..n {
            let block_args = &args[offsets[i]..offsets[i + 1]];
            let v = (gs[i].eval)(&co.blocks[i], block_args);
            let assigns: Vec<SPoly> = (0..sizes[i].saturating_sub(1))
                .map(|j| {
                    let k = offsets[i] + j;
                    SPoly::svar(Var::Lam(k as u16)).sadd(&x_sum(gamma, &co, k + 1))
                })
                .collect();
            inner.push(v.eval_lam_assignments(space, &assigns));
        }
        // expand the tensor product into joint terms, then resolve every
        // x_j ↦ Λ_j + ∂ with the ∂ applied to factor j's coefficient
        let mut terms: Vec<(Mono, Vec<S::Elem>, Scalar)> =
            vec![(Mono::one(), Vec::new(), Scalar::from_int(sign))];
        for v in &inner {
            let mut next = Vec::new();
            for (mono, coeffs, weight) in &terms {
                for (m, e) in &v.terms {
                    let mut c2 = coeffs.clone();
                    c2.push(e.clone());
                    next.push((mono.mul(m), c2, weight.clone()));
                }
            }
            terms = next;
        }
        let f_assigns: Vec<SPoly> = (0..n.saturating_sub(1)).map(block_sum).collect();
        let mut acc = LPoly::zero();
        for (mono, coeffs, weight) in terms {
            let mut lam_part = Mono::one();
            let mut x_pows: Vec<(usize, u32)> = Vec::new();
            for &(v, e) in &mono.0 {
                match v {
                    Var::Aux(j) => x_pows.push((j as usize, e)),
                    _ => lam_part = lam_part.mul(&Mono::power(v, e)),
                }
            }
            // x_j^a ↦ Σ_t C(a,t)·Λ_j^{a−t}·∂^t(coeff_j), leafward over blocks
            let mut expansions: Vec<(Vec<(usize, u32)>, SPoly)> =
                vec![(Vec::new(), SPoly::sconst(weight))];
            for &(j, a) in &x_pows {
                let lam_j = block_sum(j);
                let mut next = Vec::new();
                for (dels, w) in &expansions {
                    for t in 0..=a {
                        let mut w2 =
                            w.smul(&SPoly::sconst(Scalar::binomial(a as usize, t as usize)));
                        for _ in 0..(a - t) {
                            w2 = w2.smul(&lam_j);
                        }
                        let mut d2 = dels.clone();
                        if t > 0 {
                            d2.push((j, t));
                        }
                        next.push((d2, w2));
                    }
                }
                expansions = next;
            }
            for (dels, w) in expansions {
                let mut cs = coeffs.clone();
                for &(j, t) in &dels {
                    for _ in 0..t {
                        cs[j] = space.apply_partial(&cs[j]);
                    }
                }
                let fv = (f.eval)(&co.delta0, &cs);
                let shifted = fv.eval_lam_assignments(space, &f_assigns);
                let contrib = shifted
                    .mul_spoly(space, &w)
                    .mul_spoly(space, &spoly_of_mono(&lam_part));
                acc = acc.add(space, &contrib);
            }
        }
        self.canonicalize(acc, total)
    }
}

fn spoly_of_mono(m: &Mono) -> SPoly {
    let mut p = SPoly::zero();
    p.sadd_term(m.clone(), Scalar::one());
    p
}

impl PclOperad<PdModule> {
    /// Wrap a valid random table as an evaluator element.
    pub fn elem_from_rand_table(&self, t: RandPcl2) -> PclElem<MElem> {
        let space = self.space.clone();
        PclElem {
            arity: 2,
            parity: Parity::Even,
            eval: Rc::new(move |gamma, args| {
                if !gamma.is_acyclic() {
                    return LPoly::zero();
                }
                let (canon, sign) = gamma.canonical_form();
                let mut out = LPoly::zero();
                for (&(gi, da), ca) in &args[0].terms {
                    for (&(gj, db), cb) in &args[1].terms {
                        let c = &(ca * cb) * &Scalar::from_int(sign);
                        if canon.num_edges() == 0 {
                            // sesquilinear in each slot: (−λ0)^da (−λ1)^db
                            let Some(base) = t.edgeless.get(&(gi, gj)) else { continue };
                            let mut w = SPoly::sconst(c);
                            for _ in 0..da {
                                w = w.smul(&SPoly::svar(Var::Lam(0)).sneg());
                            }
                            for _ in 0..db {
                                w = w.smul(&SPoly::svar(Var::Lam(1)).sneg());
                            }
                            out = out.add(&space, &base.mul_spoly(&space, &w));
                        } else {
                            let v = t.edge_value(&space, gi, da, gj, db);
                            out.add_term_in(&space, Mono::one(), v.scale(&c));
                        }
                    }
                }
                normal_form(&space, &out, 1)
            }),
            degree: None,
        }
    }
}

impl Sampler for PclOperad<PdModule> {
    fn random_elem(&self, arity: usize, rng: &mut StdRng) -> PclElem<MElem> {
        match arity {
            0 => {
                let mut e = MElem::zero();
                for (g, d) in self.space.basis_upto(1) {
                    e.add_term((g, d), Scalar::from_int(rng.gen_range(-2..=2)));
                }
                let space = self.space.clone();
                PclElem {
                    arity: 0,
                    parity: Parity::Even,
                    eval: Rc::new(move |_, _| LPoly::constant(&space, e.clone())),
                    degree: Some(0),
                }
            }
            1 => {
                // c₀·id + c₁·∂ is F[∂]-linear, hence a valid arity-1 element
                let c0 = Scalar::from_int(rng.gen_range(-2..=2));
                let c1 = Scalar::from_int(rng.gen_range(-2..=2));
                let space = self.space.clone();
                PclElem {
                    arity: 1,
                    parity: Parity::Even,
                    eval: Rc::new(move |_, args| {
                        let a = space.scale_elem(&args[0], &c0);
                        let b = space.scale_elem(&space.apply_partial(&args[0]), &c1);
                        LPoly::constant(&space, space.add_elems(&a, &b))
                    }),
                    degree: Some(0),
                }
            }
            2 => self.elem_from_rand_table(self.space.random_pcl2(rng)),
            _ => {
                let a = self.random_elem(2, rng);
                let b = self.random_elem(arity - 1, rng);
                let composed = crate::operad::circ(self, &a, rng.gen_range(1..=2), &b);
                let sigma = crate::operad::random_perm(arity, rng);
                self.sym_act(&composed, &sigma)
            }
        }
    }

    fn max_test_arity(&self) -> usize {
        2
    }
}

/// One finding of `pcl_validate`.
#[derive(Clone, Debug)]
pub struct PclViolation {
    pub relation: String,
    pub graph: String,
    pub detail: String,
}

/// Check the defining relations of P^cl on the probe set: vanishing on
/// non-acyclic graphs, the one-edge-added cycle relation
/// Σ_{e∈C} f^{Γ∖e} = 0, λ-dependence only through component sums, and the
/// component ∂-rule. Returns all violations found.
pub fn pcl_validate<S: VSpace + 'static>(
    op: &PclOperad<S>,
    f: &PclElem<S::Elem>,
) -> Vec<PclViolation> {
    let mut out = Vec::new();
    let n = f.arity;
    let space = &op.space;
    let tuples = op.probe_tuples(n);
    // cycle relation 1 on a family of non-acyclic graphs: every canonical
    // graph plus one reversed duplicate edge
    for g in op.probe_graphs(n) {
        if g.num_edges() == 0 {
            continue;
        }
        let (a, b) = g.edges()[0];
        let mut edges = g.edges().to_vec();
        edges.push((b, a));
        let bad = DiGraph::new(n, edges);
        for t in &tuples {
            if !(f.eval)(&bad, t).is_zero() {
                out.push(PclViolation {
                    relation: "cycle-1".into(),
                    graph: bad.to_text(),
                    detail: "nonzero value on a graph with a cycle".into(),
                });
                break;
            }
        }
    }
    // cycle relation 2: for every canonical graph and every extra edge that
    // creates an oriented cycle C, Σ_{e∈C} f^{Γ∖e} must vanish
    for g in op.probe_graphs(n) {
        for a in 1..=n {
            for b in 1..=n {
                if a == b {
                    continue;
                }
                let mut edges = g.edges().to_vec();
                edges.push((a, b));
                let bigger = DiGraph::new(n, edges);
                let cycles = bigger.oriented_cycles();
                for cyc in cycles {
                    for t in &tuples {
                        let mut sum = LPoly::zero();
                        for &e in &cyc {
                            let sub = bigger.without_edge(e);
                            sum = sum.add(space, &(f.eval)(&sub, t));
                        }
                        if !sum.is_zero() {
                            out.push(PclViolation {
                                relation: "cycle-2".into(),
                                graph: bigger.to_text(),
                                detail: format!(
                                    "edge-deletion sum over an oriented cycle of length {} is nonzero",
                                    cyc.len()
                                ),
                            });
                            break;
                        }
                    }
                }
            }
        }
    }
    // sesquilinearity 1: (∂_{λ_i} − ∂_{λ_j}) f^Γ = 0 for i, j in one component
    for g in op.probe_graphs(n) {
        let comps = components(&g);
        for t in &tuples {
            let v = (f.eval)(&g, t);
            for comp in &comps {
                for w in 1..comp.len() {
                    let (i, j) = (comp[0] - 1, comp[w] - 1);
                    let di = lam_derivative_class(space, &v, i, n);
                    let dj = lam_derivative_class(space, &v, j, n);
                    if di.sub(space, &dj).is_zero() {
                        continue;
                    }
                    out.push(PclViolation {
                        relation: "sesquilinearity-1".into(),
                        graph: g.to_text(),
                        detail: format!("λ-dependence differs between slots {} and {}", i + 1, j + 1),
                    });
                }
            }
        }
    }
    // sesquilinearity 2: f^Γ(∂_{Γ_α} v) = −λ_{Γ_α} f^Γ(v)
    for g in op.probe_graphs(n) {
        let comps = components(&g);
        for t in &tuples {
            let base = (f.eval)(&g, t);
            for comp in &comps {
                let mut lhs = LPoly::zero();
                for &vtx in comp {
                    let mut t2 = t.clone();
                    t2[vtx - 1] = space.apply_partial(&t2[vtx - 1]);
                    lhs = lhs.add(space, &(f.eval)(&g, &t2));
                }
                let mut lam = SPoly::zero();
                for &vtx in comp {
                    lam.sadd_term(Mono::var(Var::Lam((vtx - 1) as u16)), Scalar::from_int(-1));
                }
                let rhs = normal_form(space, &base.mul_spoly(space, &lam), (n - 1) as u16);
                if !lhs.sub(space, &rhs).is_zero() {
                    out.push(PclViolation {
                        relation: "sesquilinearity-2".into(),
                        graph: g.to_text(),
                        detail: format!("component {:?} fails the ∂-rule", comp),
                    });
                }
            }
        }
    }
    out
}

/// Derivative by λ_i of a quotient class given by its canonical rep; the
/// operators ∂_{λ_i} − ∂_{λ_j} descend to the quotient, and the canonical
/// lift has no λ_{n−1}, so ∂_{λ_{n−1}} of the lift is zero.
fn lam_derivative_class<S: VSpace>(
    space: &S,
    v: &LPoly<S::Elem>,
    i: usize,
    n: usize,
) -> LPoly<S::Elem> {
    if i + 1 == n {
        LPoly::zero()
    } else {
        v.derivative(space, Var::Lam(i as u16))
    }
}

/// Connected components of the underlying undirected graph, as sorted
/// vertex lists.
pub fn components(g: &DiGraph) -> Vec<Vec<usize>> {
    let n = g.num_vertices();
    let mut comp = vec![0usize; n + 1];
    let mut next = 0;
    for start in 1..=n {
        if comp[start] != 0 {
            continue;
        }
        next += 1;
        let mut stack = vec![start];
        comp[start] = next;
        while let Some(v) = stack.pop() {
            for &(a, b) in g.edges() {
                let w = if a == v { b } else if b == v { a } else { continue };
                if comp[w] == 0 {
                    comp[w] = next;
                    stack.push(w);
                }
            }
        }
    }
    (1..=next)
        .map(|c| (1..=n).filter(|&v| comp[v] == c).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::{GenKind, Generator};
    use crate::operad::{axiom_harness, elems_equal};
    use rand::SeedableRng;

    fn rank1_op() -> PclOperad<PdModule> {
        let m = PdModule::new(vec![Generator {
            name: "a".into(),
            parity: Parity::Even,
            kind: GenKind::Free,
        }]);
        let probe = vec![m.basis(0, 0), m.basis(0, 1)];
        PclOperad::new(m, false, probe, 3)
    }

    #[test]
    fn unit_evaluates_to_argument() {
        let op = rank1_op();
        let u = op.unit();
        let g = DiGraph::edgeless(1);
        let v = op.eval(&u, &g, &[op.space.basis(0, 1)]);
        assert_eq!(v, LPoly::constant(&op.space, op.space.basis(0, 1)));
    }

    #[test]
    fn random_tables_are_valid_elements() {
        let op = rank1_op();
        let mut rng = StdRng::seed_from_u64(19);
        for _ in 0..5 {
            let f = op.random_elem(2, &mut rng);
            let violations = pcl_validate(&op, &f);
            assert!(violations.is_empty(), "{:?}", violations);
        }
    }

    #[test]
    fn planted_faults_are_detected() {
        let op = rank1_op();
        let m = op.space.clone();
        // f^{1→2} = f^{2→1} = a-output with the same sign violates the
        // two-cycle relation
        let space = m.clone();
        let bad = PclElem {
            arity: 2,
            parity: Parity::Even,
            eval: Rc::new(move |gamma: &DiGraph, args: &[MElem]| {
                if gamma.num_edges() == 1 {
                    // same value regardless of orientation
                    let mut out = LPoly::zero();
                    let w = &args[0].terms.values().next().cloned().unwrap_or_else(Scalar::zero)
                        * &args[1].terms.values().next().cloned().unwrap_or_else(Scalar::zero);
                    out.add_term_in(&space, Mono::one(), space.basis(0, 0).scale(&w));
                    out
                } else {
                    LPoly::zero()
                }
            }),
            degree: Some(1),
        };
        let violations = pcl_validate(&op, &bad);
        assert!(violations.iter().any(|v| v.relation == "cycle-2"));
    }

    #[test]
    fn zero_element_is_valid() {
        let op = rank1_op();
        let z = op.zero_elem(2, Parity::Even);
        assert!(pcl_validate(&op, &z).is_empty());
        assert!(op.is_zero(&z));
    }

    #[test]
    fn pcl_axiom_harness_rank1() {
        let op = rank1_op();
        let mut rng = StdRng::seed_from_u64(4);
        for check in axiom_harness(&op, 10, &mut rng) {
            assert!(check.passed, "{}: {:?}", check.name, check.witness);
        }
    }

    #[test]
    fn composition_all_singletons_matches_plain_action() {
        // with all inner arities 1 the collapsed graph is Γ itself
        let op = rank1_op();
        let mut rng = StdRng::seed_from_u64(8);
        let f = op.random_elem(2, &mut rng);
        let id = op.unit();
        let c = op.compose(&f, &[id.clone(), id]);
        assert!(elems_equal(&op, &c, &f));
    }

    #[test]
    fn grading_adds_under_composition() {
        let op = rank1_op();
        let mut rng = StdRng::seed_from_u64(21);
        let f = op.random_elem(2, &mut rng);
        // compose with units keeps the degree when defined
        let c = op.compose(&f, &[op.unit(), op.unit()]);
        assert_eq!(c.degree, f.degree.map(|d| d));
    }
}
