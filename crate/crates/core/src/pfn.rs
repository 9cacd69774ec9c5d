//! The finite analog of the classical operad: graph-indexed multilinear
//! maps with values in the space itself (no λ, no ∂), cycle relations only,
//! and the correspondence with Poisson superalgebra structures.

use crate::graph::{cocompose, DiGraph};
use crate::module::{DElem, DiffPolyAlg, VSpace};
use crate::operad::{is_invariant, Operad, Sampler, WElem};
use crate::parity::Parity;
use crate::pcl::PclOperad;
use crate::perm::Perm;
use crate::scalar::Scalar;
use rand::rngs::StdRng;
use rand::Rng;
use std::collections::BTreeMap;
use std::rc::Rc;

pub type PfnEval<E> = Rc<dyn Fn(&DiGraph, &[E]) -> E>;

/// An element of P^fn(n).
#[derive(Clone)]
pub struct PfnElem<E> {
    pub arity: usize,
    pub parity: Parity,
    pub eval: PfnEval<E>,
}

/// The operad P^fn over a coefficient space, with `flip` as in P^cl.
#[derive(Clone)]
pub struct PfnOperad<S: VSpace> {
    pub space: S,
    pub flip: bool,
    pub probe_elems: Vec<S::Elem>,
    pub edge_cap: usize,
}

impl<S: VSpace> PfnOperad<S> {
    pub fn new(space: S, flip: bool, probe_elems: Vec<S::Elem>, edge_cap: usize) -> Self {
        PfnOperad { space, flip, probe_elems, edge_cap }
    }

    fn arg_parity(&self, e: &S::Elem) -> Parity {
        let p = self.space.elem_parity(e).unwrap_or(Parity::Even);
        if self.flip {
            p.flip()
        } else {
            p
        }
    }

    pub fn probe_tuples(&self, n: usize) -> Vec<Vec<S::Elem>> {
        // share the slimming policy with P^cl
        let pcl = PclOperad::new(self.space.clone(), self.flip, self.probe_elems.clone(), self.edge_cap);
        pcl.probe_tuples(n)
    }

    pub fn probe_graphs(&self, n: usize) -> Vec<DiGraph> {
        let pcl = PclOperad::new(self.space.clone(), self.flip, self.probe_elems.clone(), self.edge_cap);
        pcl.probe_graphs(n)
    }
}

impl<S: VSpace + 'static> Operad for PfnOperad<S> {
    type Elem = PfnElem<S::Elem>;

    fn arity(&self, f: &Self::Elem) -> usize {
        f.arity
    }

    fn parity(&self, f: &Self::Elem) -> Parity {
        f.parity
    }

    fn zero_elem(&self, arity: usize, parity: Parity) -> Self::Elem {
        let space = self.space.clone();
        PfnElem { arity, parity, eval: Rc::new(move |_, _| space.zero_elem()) }
    }

    fn is_zero(&self, f: &Self::Elem) -> bool {
        let graphs = self.probe_graphs(f.arity);
        let tuples = self.probe_tuples(f.arity);
        graphs
            .iter()
            .all(|g| tuples.iter().all(|t| self.space.is_zero_elem(&(f.eval)(g, t))))
    }

    fn add(&self, f: &Self::Elem, g: &Self::Elem) -> Self::Elem {
        assert_eq!(f.arity, g.arity, "arity mismatch");
        let (fe, ge) = (f.eval.clone(), g.eval.clone());
        let space = self.space.clone();
        PfnElem {
            arity: f.arity,
            parity: f.parity,
            eval: Rc::new(move |gamma, args| space.add_elems(&fe(gamma, args), &ge(gamma, args))),
        }
    }

    fn scale(&self, f: &Self::Elem, s: &Scalar) -> Self::Elem {
        let fe = f.eval.clone();
        let space = self.space.clone();
        let s = s.clone();
        PfnElem {
            arity: f.arity,
            parity: f.parity,
            eval: Rc::new(move |gamma, args| space.scale_elem(&fe(gamma, args), &s)),
        }
    }

    fn unit(&self) -> Self::Elem {
        PfnElem {
            arity: 1,
            parity: Parity::Even,
            eval: Rc::new(move |_, args| args[0].clone()),
        }
    }

    fn compose(&self, f: &Self::Elem, gs: &[Self::Elem]) -> Self::Elem {
        let n = f.arity;
        assert_eq!(gs.len(), n, "arity mismatch");
        let sizes: Vec<usize> = gs.iter().map(|g| g.arity).collect();
        let total: usize = sizes.iter().sum();
        let parity = gs.iter().fold(f.parity, |p, g| p + g.parity);
        let op = self.clone();
        let f = f.clone();
        let gs: Vec<PfnElem<S::Elem>> = gs.to_vec();
        PfnElem {
            arity: total,
            parity,
            eval: Rc::new(move |gamma, args| {
                let co = cocompose(gamma, &sizes);
                let mut sign = 1i64;
                let mut earlier_odd = false;
                let mut inner = Vec::with_capacity(gs.len());
                for (i, g) in gs.iter().enumerate() {
                    if g.parity.is_odd() && earlier_odd {
                        sign = -sign;
                    }
                    let block = &args[co.offsets[i]..co.offsets[i + 1]];
                    let mut block_odd = false;
                    for a in block {
                        block_odd ^= op.arg_parity(a).is_odd();
                    }
                    earlier_odd ^= block_odd;
                    inner.push((g.eval)(&co.blocks[i], block));
                }
                op.space
                    .scale_elem(&(f.eval)(&co.delta0, &inner), &Scalar::from_int(sign))
            }),
        }
    }

    fn sym_act(&self, f: &Self::Elem, sigma: &Perm) -> Self::Elem {
        let n = f.arity;
        assert_eq!(sigma.len(), n, "arity mismatch");
        let op = self.clone();
        let f = f.clone();
        let sigma = sigma.clone();
        PfnElem {
            arity: n,
            parity: f.parity,
            eval: Rc::new(move |gamma, args| {
                let inv = sigma.inverse();
                let pars: Vec<Parity> = args.iter().map(|a| op.arg_parity(a)).collect();
                let eps = sigma.epsilon_sign(&pars);
                let permuted: Vec<S::Elem> =
                    (1..=n).map(|s| args[inv.apply(s) - 1].clone()).collect();
                let v = (f.eval)(&gamma.relabel(&sigma), &permuted);
                op.space.scale_elem(&v, &Scalar::from_int(eps))
            }),
        }
    }
}

impl Sampler for PfnOperad<crate::module::PdModule> {
    fn random_elem(&self, arity: usize, rng: &mut StdRng) -> Self::Elem {
        use crate::module::{MElem, PdModule};
        fn seeded_value(m: &PdModule, seed: u64, key: u64) -> MElem {
            let basis = m.basis_upto(1);
            let mut z = seed ^ key;
            z = z.wrapping_add(0x9e3779b97f4a7c15);
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            z ^= z >> 31;
            let mut e = MElem::zero();
            e.add_term(
                basis[(z as usize >> 4) % basis.len()],
                Scalar::from_int((z % 5) as i64 - 2),
            );
            e
        }
        match arity {
            0 | 1 => {
                let c = Scalar::from_int(rng.gen_range(-2..=2));
                let space = self.space.clone();
                if arity == 0 {
                    let e = space.basis(0, rng.gen_range(0..=1));
                    PfnElem {
                        arity: 0,
                        parity: Parity::Even,
                        eval: Rc::new(move |_, _| e.scale(&c)),
                    }
                } else {
                    PfnElem {
                        arity: 1,
                        parity: Parity::Even,
                        eval: Rc::new(move |_, args| args[0].scale(&c)),
                    }
                }
            }
            2 => {
                // independent tables on the edgeless and one-edge graphs;
                // P^fn imposes cycle relations only
                let seed: u64 = rng.gen();
                let space = self.space.clone();
                PfnElem {
                    arity: 2,
                    parity: Parity::Even,
                    eval: Rc::new(move |gamma, args| {
                        if !gamma.is_acyclic() {
                            return MElem::zero();
                        }
                        let (canon, sign) = gamma.canonical_form();
                        let tag = canon.num_edges() as u64;
                        let mut out = MElem::zero();
                        for (&(i, a), ca) in &args[0].terms {
                            for (&(j, b), cb) in &args[1].terms {
                                let key = tag
                                    ^ ((i as u64) << 2)
                                    ^ ((a as u64) << 10)
                                    ^ ((j as u64) << 26)
                                    ^ ((b as u64) << 34);
                                let v = seeded_value(&space, seed, key);
                                out = out.add(&v.scale(&(&(ca * cb) * &Scalar::from_int(sign))));
                            }
                        }
                        out
                    }),
                }
            }
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

/// A Poisson superalgebra presented on a polynomial algebra: the bracket is
/// given on the variables and extended as a biderivation. ∂ plays no role.
#[derive(Clone, Debug)]
pub struct PoissonStructure {
    pub alg: DiffPolyAlg,
    /// (i, j) ↦ {x_i, x_j}.
    pub table: BTreeMap<(usize, usize), DElem>,
}

impl PoissonStructure {
    pub fn bracket(&self, a: &DElem, b: &DElem) -> DElem {
        // biderivation: {a, b} = Σ ∂a/∂x_i ∂b/∂x_j {x_i, x_j}
        let alg = &self.alg;
        let mut out = DElem::zero();
        for (&(i, j), v) in &self.table {
            let da = alg.jet_derivative(a, (i, 0));
            if da.is_zero() {
                continue;
            }
            let db = alg.jet_derivative(b, (j, 0));
            if db.is_zero() {
                continue;
            }
            out = out.add(&da.mul(&db).mul(v));
        }
        out
    }

    pub fn product(&self, a: &DElem, b: &DElem) -> DElem {
        a.mul(b)
    }
}

/// Build the arity-2 element of a Poisson structure:
/// X^{• •}(a⊗b) = (−1)^{p(a)} {a,b}, X^{•→•}(a⊗b) = (−1)^{p(a)} ab.
pub fn pfn_from_poisson(ps: &PoissonStructure, _op: &PfnOperad<DiffPolyAlg>) -> PfnElem<DElem> {
    let ps = ps.clone();
    PfnElem {
        arity: 2,
        parity: Parity::Odd,
        eval: Rc::new(move |gamma, args| {
            if !gamma.is_acyclic() {
                return DElem::zero();
            }
            let (canon, sign) = gamma.canonical_form();
            let v = if canon.num_edges() == 0 {
                ps.bracket(&args[0], &args[1])
            } else {
                ps.product(&args[0], &args[1])
            };
            v.scale(&Scalar::from_int(sign))
        }),
    }
}

/// X with invariance verified; fails on a non-skew bracket.
pub fn pfn_check(
    ps: &PoissonStructure,
    op: &PfnOperad<DiffPolyAlg>,
) -> Result<WElem<PfnElem<DElem>>, String> {
    let x = pfn_from_poisson(ps, op);
    if !is_invariant(op, &x) {
        return Err("bracket is not skew-symmetric or product not commutative".into());
    }
    WElem::new(op, x)
}

/// Independent Poisson axiom defects.
pub fn poisson_jacobi_defect(ps: &PoissonStructure, a: &DElem, b: &DElem, c: &DElem) -> DElem {
    let t1 = ps.bracket(a, &ps.bracket(b, c));
    let t2 = ps.bracket(b, &ps.bracket(a, c));
    let t3 = ps.bracket(&ps.bracket(a, b), c);
    t1.sub(&t2).sub(&t3)
}

pub fn poisson_leibniz_defect(ps: &PoissonStructure, a: &DElem, b: &DElem, c: &DElem) -> DElem {
    ps.bracket(a, &b.mul(c))
        .sub(&ps.bracket(a, b).mul(c))
        .sub(&ps.bracket(a, c).mul(b))
}
