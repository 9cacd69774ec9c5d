//! The Hom operad on a finite-dimensional vector superspace, the
//! correspondence between odd square-zero elements of W_1(ΠV) and Lie
//! superalgebra brackets, and low-degree Lie superalgebra cohomology.
//!
//! Elements are dense tables of outputs on all basis n-tuples, so the probe
//! set for extensional equality is exact.

use crate::linalg::Matrix;
use crate::operad::{box_prod, is_invariant, lie_bracket, Operad, Sampler, WElem};
use crate::parity::Parity;
use crate::perm::Perm;
use crate::scalar::Scalar;
use rand::rngs::StdRng;
use rand::Rng;

/// A finite-dimensional vector superspace given by basis parities.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperSpace {
    pub parities: Vec<Parity>,
}

impl SuperSpace {
    pub fn even(dim: usize) -> SuperSpace {
        SuperSpace { parities: vec![Parity::Even; dim] }
    }

    pub fn dim(&self) -> usize {
        self.parities.len()
    }

    /// The same space with every parity reversed.
    pub fn reversed(&self) -> SuperSpace {
        SuperSpace { parities: self.parities.iter().map(|p| p.flip()).collect() }
    }

    fn tuple_count(&self, n: usize) -> usize {
        self.dim().pow(n as u32)
    }

    /// Decode a tuple index into basis indices (mixed radix, first index slowest).
    fn decode(&self, n: usize, mut t: usize) -> Vec<usize> {
        let d = self.dim();
        let mut out = vec![0; n];
        for i in (0..n).rev() {
            out[i] = t % d;
            t /= d;
        }
        out
    }

    fn encode(&self, tuple: &[usize]) -> usize {
        let d = self.dim();
        tuple.iter().fold(0, |acc, &i| acc * d + i)
    }

    fn tuple_parity(&self, tuple: &[usize]) -> Parity {
        tuple
            .iter()
            .fold(Parity::Even, |acc, &i| acc + self.parities[i])
    }
}

/// An element of Hom(V^{⊗n}, V): arity, parity, and the dense output table
/// indexed by basis n-tuples.
#[derive(Clone, Debug, PartialEq)]
pub struct HomElem {
    pub arity: usize,
    pub parity: Parity,
    /// table[tuple_index][out_basis_index]
    pub table: Vec<Vec<Scalar>>,
}

/// The operad Hom(V) of multilinear maps on a superspace.
#[derive(Clone, Debug)]
pub struct HomOperad {
    pub space: SuperSpace,
}

impl HomOperad {
    pub fn new(space: SuperSpace) -> Self {
        HomOperad { space }
    }

    pub fn elem_from_fn(
        &self,
        arity: usize,
        parity: Parity,
        mut f: impl FnMut(&[usize]) -> Vec<Scalar>,
    ) -> HomElem {
        let count = self.space.tuple_count(arity);
        let table = (0..count)
            .map(|t| {
                let v = f(&self.space.decode(arity, t));
                assert_eq!(v.len(), self.space.dim());
                v
            })
            .collect();
        HomElem { arity, parity, table }
    }

    /// Evaluate on a tuple of coordinate vectors (multilinear expansion).
    pub fn eval(&self, f: &HomElem, args: &[Vec<Scalar>]) -> Vec<Scalar> {
        assert_eq!(args.len(), f.arity, "dimension mismatch");
        let d = self.space.dim();
        let mut out = vec![Scalar::zero(); d];
        for (t, row) in f.table.iter().enumerate() {
            let tuple = self.space.decode(f.arity, t);
            let mut c = Scalar::one();
            for (slot, &b) in tuple.iter().enumerate() {
                c = &c * &args[slot][b];
                if c.is_zero() {
                    break;
                }
            }
            if c.is_zero() {
                continue;
            }
            for k in 0..d {
                let t = &row[k] * &c;
                out[k] = &out[k] + &t;
            }
        }
        out
    }
}

impl Operad for HomOperad {
    type Elem = HomElem;

    fn arity(&self, f: &HomElem) -> usize {
        f.arity
    }

    fn parity(&self, f: &HomElem) -> Parity {
        f.parity
    }

    fn zero_elem(&self, arity: usize, parity: Parity) -> HomElem {
        HomElem {
            arity,
            parity,
            table: vec![vec![Scalar::zero(); self.space.dim()]; self.space.tuple_count(arity)],
        }
    }

    fn is_zero(&self, f: &HomElem) -> bool {
        f.table.iter().all(|row| row.iter().all(|c| c.is_zero()))
    }

    fn add(&self, f: &HomElem, g: &HomElem) -> HomElem {
        assert_eq!(f.arity, g.arity, "arity mismatch");
        HomElem {
            arity: f.arity,
            parity: f.parity,
            table: f
                .table
                .iter()
                .zip(&g.table)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        }
    }

    fn scale(&self, f: &HomElem, s: &Scalar) -> HomElem {
        HomElem {
            arity: f.arity,
            parity: f.parity,
            table: f
                .table
                .iter()
                .map(|row| row.iter().map(|c| c * s).collect())
                .collect(),
        }
    }

    fn unit(&self) -> HomElem {
        let d = self.space.dim();
        self.elem_from_fn(1, Parity::Even, |t| {
            let mut v = vec![Scalar::zero(); d];
            v[t[0]] = Scalar::one();
            v
        })
    }

    fn compose(&self, f: &HomElem, gs: &[HomElem]) -> HomElem {
        let n = f.arity;
        assert_eq!(gs.len(), n, "arity mismatch");
        let arities: Vec<usize> = gs.iter().map(|g| g.arity).collect();
        let total: usize = arities.iter().sum();
        let parity = gs.iter().fold(f.parity, |p, g| p + g.parity);
        self.elem_from_fn(total, parity, |tuple| {
            // Koszul sign of (g_1 ⊗ … ⊗ g_n)(v-blocks)
            let mut sign = 1i64;
            let mut earlier_odd = false;
            let mut off = 0usize;
            let mut inner: Vec<Vec<Scalar>> = Vec::with_capacity(n);
            for (i, g) in gs.iter().enumerate() {
                let block = &tuple[off..off + arities[i]];
                if g.parity.is_odd() && earlier_odd {
                    sign = -sign;
                }
                // track parity of arguments to the left of slot i+1
                let block_par = self.space.tuple_parity(block);
                earlier_odd ^= block_par.is_odd();
                inner.push(g.table[self.space.encode(block)].clone());
                off += arities[i];
            }
            let mut out = self.eval(f, &inner);
            if sign < 0 {
                for c in &mut out {
                    *c = -&*c;
                }
            }
            out
        })
    }

    fn sym_act(&self, f: &HomElem, sigma: &Perm) -> HomElem {
        let n = f.arity;
        assert_eq!(sigma.len(), n, "arity mismatch");
        let inv = sigma.inverse();
        self.elem_from_fn(n, f.parity, |tuple| {
            let pars: Vec<Parity> = tuple.iter().map(|&b| self.space.parities[b]).collect();
            let eps = sigma.epsilon_sign(&pars);
            let permuted: Vec<usize> = (1..=n).map(|s| tuple[inv.apply(s) - 1]).collect();
            let mut out = f.table[self.space.encode(&permuted)].clone();
            if eps < 0 {
                for c in &mut out {
                    *c = -&*c;
                }
            }
            out
        })
    }

}

impl Sampler for HomOperad {
    fn random_elem(&self, arity: usize, rng: &mut StdRng) -> HomElem {
        let parity = if rng.gen_bool(0.5) { Parity::Even } else { Parity::Odd };
        let d = self.space.dim();
        self.elem_from_fn(arity, parity, |tuple| {
            let in_par = self.space.tuple_parity(tuple);
            (0..d)
                .map(|k| {
                    if self.space.parities[k] == in_par + parity {
                        Scalar::from_int(rng.gen_range(-3..=3))
                    } else {
                        Scalar::zero()
                    }
                })
                .collect()
        })
    }

    fn max_test_arity(&self) -> usize {
        3
    }
}

/// Tracking where the Koszul sign lives: the correspondence between brackets
/// on V and odd elements of W_1(ΠV). The bracket table gives [e_i, e_j] in
/// coordinates; the conversion [a,b] = (−1)^{p(a)} X(a⊗b) and the parity
/// reversal Π both happen here and nowhere else.
pub struct BracketCorrespondence {
    /// parities of V itself (not ΠV)
    pub v_parities: Vec<Parity>,
    /// the operad Hom(ΠV)
    pub op: HomOperad,
}

impl BracketCorrespondence {
    pub fn new(v_parities: Vec<Parity>) -> Self {
        let space = SuperSpace { parities: v_parities.iter().map(|p| p.flip()).collect() };
        BracketCorrespondence { v_parities, op: HomOperad::new(space) }
    }

    /// X(a⊗b) = (−1)^{p(a)} [a,b] on basis pairs. The result is odd in Hom(ΠV).
    /// Fails (with the witness pair) when the bracket is not skew-supersymmetric,
    /// which is exactly failure of invariance.
    pub fn from_bracket(&self, bracket: &dyn Fn(usize, usize) -> Vec<Scalar>) -> Result<WElem<HomElem>, String> {
        let x = self.op.elem_from_fn(2, Parity::Odd, |t| {
            let mut out = bracket(t[0], t[1]);
            if self.v_parities[t[0]].is_odd() {
                for c in &mut out {
                    *c = -&*c;
                }
            }
            out
        });
        if !is_invariant(&self.op, &x) {
            for i in 0..self.op.space.dim() {
                for j in 0..self.op.space.dim() {
                    let bij = bracket(i, j);
                    let bji = bracket(j, i);
                    let sign = self.v_parities[i].koszul_sign(self.v_parities[j]);
                    let skew: Vec<Scalar> = bji.iter().map(|c| &Scalar::from_int(-sign) * c).collect();
                    if bij != skew {
                        return Err(format!(
                            "bracket is not skew-supersymmetric on basis pair ({}, {})",
                            i, j
                        ));
                    }
                }
            }
            return Err("bracket corresponds to a non-invariant element".into());
        }
        WElem::new(&self.op, x)
    }

    /// Recover the bracket table from X: [e_i, e_j] = (−1)^{p(e_i)} X(e_i⊗e_j).
    pub fn to_bracket(&self, x: &WElem<HomElem>) -> Vec<Vec<Vec<Scalar>>> {
        let d = self.op.space.dim();
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let mut v = x.elem.table[self.op.space.encode(&[i, j])].clone();
                        if self.v_parities[i].is_odd() {
                            for c in &mut v {
                                *c = -&*c;
                            }
                        }
                        v
                    })
                    .collect()
            })
            .collect()
    }
}

/// Brute-force super-Jacobi oracle on a bracket table, independent of the
/// operad path: checks skew-supersymmetry and
/// [a,[b,c]] = [[a,b],c] + (−1)^{p(a)p(b)} [b,[a,c]] on all basis triples.
pub fn jacobi_holds(v_parities: &[Parity], bracket: &dyn Fn(usize, usize) -> Vec<Scalar>) -> bool {
    let d = v_parities.len();
    let br_vec = |a: &[Scalar], j: usize| -> Vec<Scalar> {
        // [Σ a_i e_i, e_j]
        let mut out = vec![Scalar::zero(); d];
        for i in 0..d {
            if a[i].is_zero() {
                continue;
            }
            let b = bracket(i, j);
            for k in 0..d {
                let t = &b[k] * &a[i];
                out[k] = &out[k] + &t;
            }
        }
        out
    };
    let br_right = |i: usize, b: &[Scalar]| -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); d];
        for j in 0..d {
            if b[j].is_zero() {
                continue;
            }
            let v = bracket(i, j);
            for k in 0..d {
                let t = &v[k] * &b[j];
                out[k] = &out[k] + &t;
            }
        }
        out
    };
    // skew-supersymmetry
    for i in 0..d {
        for j in 0..d {
            let bij = bracket(i, j);
            let bji = bracket(j, i);
            let sign = v_parities[i].koszul_sign(v_parities[j]);
            for k in 0..d {
                if bij[k] != &Scalar::from_int(-sign) * &bji[k] {
                    return false;
                }
            }
        }
    }
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                let lhs = br_right(a, &bracket(b, c));
                let t1 = br_vec(&bracket(a, b), c);
                let mut t2 = br_right(b, &bracket(a, c));
                let sgn = v_parities[a].koszul_sign(v_parities[b]);
                if sgn < 0 {
                    for x in &mut t2 {
                        *x = -&*x;
                    }
                }
                for k in 0..d {
                    if lhs[k] != &t1[k] + &t2[k] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Kernel/image dimensions of ad X on W_k for degrees −1..=max_degree, by
/// exact linear algebra over the rationals. Requires X□X = 0.
pub fn lie_cohomology_report(
    corr: &BracketCorrespondence,
    x: &WElem<HomElem>,
    max_degree: i64,
) -> Result<Vec<DegreeReport>, String> {
    let op = &corr.op;
    let xx = box_prod(op, x, x);
    if !op.is_zero(&xx.elem) {
        return Err("structure is not a Lie superalgebra: X□X ≠ 0".into());
    }
    let d = op.space.dim();
    let mut out = Vec::new();
    for k in -1..=max_degree {
        let arity = (k + 1) as usize;
        // coordinates of P(arity): (tuple, out) pairs
        let count = op.space.tuple_count(arity) * d;
        let coords = |f: &HomElem| -> Vec<Scalar> {
            f.table.iter().flat_map(|row| row.iter().cloned()).collect()
        };
        let from_coords = |v: &[Scalar]| -> HomElem {
            let table = v.chunks(d).map(|c| c.to_vec()).collect();
            HomElem { arity, parity: Parity::Even, table }
        };
        // invariance equations: f^t − f = 0 for adjacent transpositions
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for s in 1..arity {
            let t = Perm::transposition(arity, s, s + 1);
            for basis_idx in 0..count {
                let mut e = vec![Scalar::zero(); count];
                e[basis_idx] = Scalar::one();
                let f = from_coords(&e);
                let diff = op.add(&op.sym_act(&f, &t), &op.scale(&f, &Scalar::from_int(-1)));
                rows.push(coords(&diff));
            }
        }
        // rows are images of basis vectors; we need the nullspace of the map
        // f ↦ (f^t − f), whose matrix has columns indexed by basis vectors
        let w_basis: Vec<Vec<Scalar>> = if arity <= 1 {
            (0..count)
                .map(|i| {
                    let mut e = vec![Scalar::zero(); count];
                    e[i] = Scalar::one();
                    e
                })
                .collect()
        } else {
            let per = count;
            let blocks = rows.len() / per;
            let mut m = Matrix::zero(blocks * per, count);
            for col in 0..count {
                for b in 0..blocks {
                    for r in 0..per {
                        // rows[b*per + col] is the image of basis vector `col`
                        m.data[b * per + r][col] = rows[b * per + col][r].clone();
                    }
                }
            }
            m.nullspace_basis()
        };
        let w_dim = w_basis.len();
        // matrix of d_X = [X, ·] on the invariant basis
        let target_count = op.space.tuple_count(arity + 1) * d;
        let mut dmat = Matrix::zero(target_count, w_dim);
        for (c, wb) in w_basis.iter().enumerate() {
            let f = WElem::new_unchecked(op, from_coords(wb));
            let img = lie_bracket(op, x, &f);
            for (r, val) in coords(&img.elem).into_iter().enumerate() {
                dmat.data[r][c] = val;
            }
        }
        let rank = dmat.rank();
        out.push(DegreeReport {
            degree: k,
            w_dim,
            kernel_dim: w_dim - rank,
            image_dim: rank,
        });
    }
    Ok(out)
}

/// Kernel/image dimensions of the differential on one degree of W.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeReport {
    pub degree: i64,
    pub w_dim: usize,
    pub kernel_dim: usize,
    pub image_dim: usize,
}

/// H^k dimensions assembled from consecutive degree reports: cochains of
/// cohomological degree k live in W_{k−1}.
pub fn cohomology_dims(reports: &[DegreeReport], k_max: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for k in 0..=k_max {
        let deg = k as i64 - 1;
        let ker = reports.iter().find(|r| r.degree == deg).map(|r| r.kernel_dim);
        let im_prev = reports
            .iter()
            .find(|r| r.degree == deg - 1)
            .map(|r| r.image_dim)
            .unwrap_or(0);
        if let Some(ker) = ker {
            out.push((k, ker - im_prev));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::elems_equal;
    use rand::SeedableRng;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn sl2_bracket(i: usize, j: usize) -> Vec<Scalar> {
        // basis e, h, f: [e,f] = h, [h,e] = 2e, [h,f] = −2f
        let mut v = vec![s(0), s(0), s(0)];
        match (i, j) {
            (0, 2) => v[1] = s(1),
            (2, 0) => v[1] = s(-1),
            (1, 0) => v[0] = s(2),
            (0, 1) => v[0] = s(-2),
            (1, 2) => v[2] = s(-2),
            (2, 1) => v[2] = s(2),
            _ => {}
        }
        v
    }

    #[test]
    fn unit_laws_and_equivariance_sampled() {
        use crate::operad::axiom_harness;
        let op = HomOperad::new(SuperSpace {
            parities: vec![Parity::Even, Parity::Odd],
        });
        let mut rng = StdRng::seed_from_u64(11);
        for check in axiom_harness(&op, 25, &mut rng) {
            assert!(check.passed, "{}: {:?}", check.name, check.witness);
        }
    }

    #[test]
    fn composition_hand_instance() {
        // dim 2, even; f(e_i⊗e_j) = δ_{ij} e_0; g = swap-ish endomorphism
        let op = HomOperad::new(SuperSpace::even(2));
        let f = op.elem_from_fn(2, Parity::Even, |t| {
            if t[0] == t[1] {
                vec![s(1), s(0)]
            } else {
                vec![s(0), s(0)]
            }
        });
        let g = op.elem_from_fn(1, Parity::Even, |t| {
            if t[0] == 0 {
                vec![s(0), s(1)]
            } else {
                vec![s(1), s(0)]
            }
        });
        let c = op.compose(&f, &[g.clone(), op.unit()]);
        // c(e_i⊗e_j) = f(g(e_i)⊗e_j) = δ_{swap(i) j} e_0
        for i in 0..2 {
            for j in 0..2 {
                let out = &c.table[op.space.encode(&[i, j])];
                let expect = if 1 - i == j { s(1) } else { s(0) };
                assert_eq!(out[0], expect);
                assert!(out[1].is_zero());
            }
        }
    }

    #[test]
    fn abelian_bracket_gives_square_zero() {
        let corr = BracketCorrespondence::new(vec![Parity::Even]);
        let x = corr.from_bracket(&|_, _| vec![s(0)]).unwrap();
        assert!(corr.op.is_zero(&box_prod(&corr.op, &x, &x).elem));
    }

    #[test]
    fn sl2_is_lie_and_nonskew_is_rejected() {
        let corr = BracketCorrespondence::new(vec![Parity::Even; 3]);
        let x = corr.from_bracket(&sl2_bracket).unwrap();
        assert!(corr.op.is_zero(&box_prod(&corr.op, &x, &x).elem));
        assert!(jacobi_holds(&corr.v_parities, &sl2_bracket));
        // [a,a] = a on a 1-dim even space is not skew
        let bad = BracketCorrespondence::new(vec![Parity::Even]);
        assert!(bad.from_bracket(&|_, _| vec![s(1)]).is_err());
    }

    #[test]
    fn box_square_matches_jacobi_oracle_exhaustive_small() {
        // randomized bracket tables at dim 2, X□X = 0 ⇔ brute-force Jacobi
        let mut rng = StdRng::seed_from_u64(23);
        for trial in 0..60 {
            let parities = if trial % 2 == 0 {
                vec![Parity::Even, Parity::Even]
            } else {
                vec![Parity::Even, Parity::Odd]
            };
            let d = parities.len();
            // a random parity-preserving skew table
            let mut raw = vec![vec![vec![s(0); d]; d]; d];
            for i in 0..d {
                for j in i..d {
                    for k in 0..d {
                        if parities[k] != parities[i] + parities[j] {
                            continue;
                        }
                        if i == j && parities[i].koszul_sign(parities[j]) > 0 {
                            continue; // [a,a] = 0 forced for "even-type" pairs
                        }
                        let c = s(rng.gen_range(-2..=2));
                        raw[i][j][k] = c.clone();
                        let sign = parities[i].koszul_sign(parities[j]);
                        raw[j][i][k] = &Scalar::from_int(-sign) * &c;
                        if i == j {
                            raw[i][j][k] = &raw[i][j][k] + &c;
                        }
                    }
                }
            }
            let bracket = |i: usize, j: usize| raw[i][j].clone();
            let corr = BracketCorrespondence::new(parities.clone());
            let x = corr.from_bracket(&bracket).unwrap();
            let square_zero = corr.op.is_zero(&box_prod(&corr.op, &x, &x).elem);
            assert_eq!(square_zero, jacobi_holds(&parities, &bracket), "trial {}", trial);
        }
    }

    #[test]
    fn roundtrip_bracket_table() {
        let corr = BracketCorrespondence::new(vec![Parity::Even; 3]);
        let x = corr.from_bracket(&sl2_bracket).unwrap();
        let table = corr.to_bracket(&x);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(table[i][j], sl2_bracket(i, j));
            }
        }
    }

    #[test]
    fn d_squared_zero_in_hom_dim2() {
        let corr = BracketCorrespondence::new(vec![Parity::Even, Parity::Even]);
        // abelian 2-dim: X = 0, trivially d² = 0; use a nonzero solvable one:
        // [e0, e1] = e1
        let bracket = |i: usize, j: usize| {
            let mut v = vec![s(0), s(0)];
            if (i, j) == (0, 1) {
                v[1] = s(1);
            }
            if (i, j) == (1, 0) {
                v[1] = s(-1);
            }
            v
        };
        let x = corr.from_bracket(&bracket).unwrap();
        let op = &corr.op;
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..10 {
            let y = op.random_elem(2, &mut rng);
            let w = crate::operad::symmetrize(op, &y, 4).unwrap();
            let dy = lie_bracket(op, &x, &w);
            let ddy = lie_bracket(op, &x, &dy);
            assert!(op.is_zero(&ddy.elem));
        }
    }

    #[test]
    fn cohomology_abelian_and_sl2() {
        // 1-dim abelian: H⁰ dim 1 (the center is everything)
        let corr = BracketCorrespondence::new(vec![Parity::Even]);
        let x = corr.from_bracket(&|_, _| vec![s(0)]).unwrap();
        let reports = lie_cohomology_report(&corr, &x, 1).unwrap();
        let h = cohomology_dims(&reports, 1);
        assert_eq!(h[0], (0, 1));

        // sl2 adjoint: H⁰ = H¹ = 0
        let corr = BracketCorrespondence::new(vec![Parity::Even; 3]);
        let x = corr.from_bracket(&sl2_bracket).unwrap();
        let reports = lie_cohomology_report(&corr, &x, 2).unwrap();
        let h = cohomology_dims(&reports, 2);
        assert_eq!(h[0], (0, 0));
        assert_eq!(h[1], (1, 0));

        // 2-dim abelian: H¹ = dim gl₂ = 4 (every endomorphism is outer)
        let corr = BracketCorrespondence::new(vec![Parity::Even; 2]);
        let x = corr.from_bracket(&|_, _| vec![s(0), s(0)]).unwrap();
        let reports = lie_cohomology_report(&corr, &x, 1).unwrap();
        let h = cohomology_dims(&reports, 1);
        assert_eq!(h[1], (1, 4));
    }

    #[test]
    fn box_associator_right_supersymmetric_and_jacobi() {
        use crate::operad::{elems_equal, symmetrize};
        let op = HomOperad::new(SuperSpace {
            parities: vec![Parity::Even, Parity::Odd],
        });
        let mut rng = StdRng::seed_from_u64(29);
        for _ in 0..6 {
            let f = symmetrize(&op, &op.random_elem(2, &mut rng), 4).unwrap();
            let g = symmetrize(&op, &op.random_elem(1, &mut rng), 4).unwrap();
            let h = symmetrize(&op, &op.random_elem(2, &mut rng), 4).unwrap();
            // (f□g)□h − f□(g□h) = ±((f□h)□g − f□(h□g))
            let lhs = op.add(
                &box_prod(&op, &box_prod(&op, &f, &g), &h).elem,
                &op.scale(&box_prod(&op, &f, &box_prod(&op, &g, &h)).elem, &Scalar::from_int(-1)),
            );
            let sgn = op.parity(&g.elem).koszul_sign(op.parity(&h.elem));
            let rhs = op.scale(
                &op.add(
                    &box_prod(&op, &box_prod(&op, &f, &h), &g).elem,
                    &op.scale(&box_prod(&op, &f, &box_prod(&op, &h, &g)).elem, &Scalar::from_int(-1)),
                ),
                &Scalar::from_int(sgn),
            );
            assert!(elems_equal(&op, &lhs, &rhs));
            // Jacobi for the W-bracket
            let j1 = lie_bracket(&op, &f, &lie_bracket(&op, &g, &h));
            let j2 = lie_bracket(&op, &lie_bracket(&op, &f, &g), &h);
            let sfg = op.parity(&f.elem).koszul_sign(op.parity(&g.elem));
            let j3 = op.scale(
                &lie_bracket(&op, &g, &lie_bracket(&op, &f, &h)).elem,
                &Scalar::from_int(sfg),
            );
            let total = op.add(&j1.elem, &op.scale(&op.add(&j2.elem, &j3), &Scalar::from_int(-1)));
            assert!(op.is_zero(&total));
            // skew-symmetry of the bracket
            let b1 = lie_bracket(&op, &f, &g);
            let b2 = op.scale(&lie_bracket(&op, &g, &f).elem, &Scalar::from_int(-sfg));
            assert!(elems_equal(&op, &b1.elem, &b2));
        }
    }

    #[test]
    fn gerstenhaber_bracket_jacobi_sampled() {
        use crate::operad::nonsym_bracket;
        let op = HomOperad::new(SuperSpace {
            parities: vec![Parity::Even, Parity::Odd],
        });
        let mut rng = StdRng::seed_from_u64(61);
        for _ in 0..6 {
            let f = op.random_elem(1, &mut rng);
            let g = op.random_elem(2, &mut rng);
            let h = op.random_elem(1, &mut rng);
            // super-Jacobi: [f,[g,h]] = [[f,g],h] + (−1)^{p(f)p(g)}[g,[f,h]]
            let lhs = nonsym_bracket(&op, &f, &nonsym_bracket(&op, &g, &h));
            let t1 = nonsym_bracket(&op, &nonsym_bracket(&op, &f, &g), &h);
            let sgn = op.parity(&f).koszul_sign(op.parity(&g));
            let t2 = op.scale(
                &nonsym_bracket(&op, &g, &nonsym_bracket(&op, &f, &h)),
                &Scalar::from_int(sgn),
            );
            assert!(elems_equal(&op, &lhs, &op.add(&t1, &t2)));
        }
        // arity 1, arity 1: the bracket is the supercommutator
        let f = op.random_elem(1, &mut rng);
        let g = op.random_elem(1, &mut rng);
        let fg = op.compose(&f, &[g.clone()]);
        let gf = op.compose(&g, &[f.clone()]);
        let sgn = op.parity(&f).koszul_sign(op.parity(&g));
        let comm = op.add(&fg, &op.scale(&gf, &Scalar::from_int(-sgn)));
        assert!(elems_equal(&op, &nonsym_bracket(&op, &f, &g), &comm));
    }

    #[test]
    fn circ_associativity_cases_in_hom() {
        // the three-case ∘ᵢ associativity with Koszul signs, sampled
        use crate::operad::circ;
        let op = HomOperad::new(SuperSpace {
            parities: vec![Parity::Even, Parity::Odd],
        });
        let mut rng = StdRng::seed_from_u64(97);
        for _ in 0..8 {
            let f = op.random_elem(2, &mut rng);
            let g = op.random_elem(2, &mut rng);
            let h = op.random_elem(2, &mut rng);
            let sgn = op.parity(&g).koszul_sign(op.parity(&h));
            let m = op.arity(&g);
            // j < i: (f∘ᵢg)∘ⱼh = ±(f∘ⱼh)∘_{ℓ+i−1}g with ℓ = arity(h)
            let i = 2;
            let j = 1;
            let l = op.arity(&h);
            let lhs = circ(&op, &circ(&op, &f, i, &g), j, &h);
            let rhs = op.scale(
                &circ(&op, &circ(&op, &f, j, &h), l + i - 1, &g),
                &Scalar::from_int(sgn),
            );
            assert!(elems_equal(&op, &lhs, &rhs));
            // i ≤ j < i+m: (f∘ᵢg)∘ⱼh = f∘ᵢ(g∘_{j−i+1}h)
            let i = 1;
            for j in i..(i + m) {
                let lhs = circ(&op, &circ(&op, &f, i, &g), j, &h);
                let rhs = circ(&op, &f, i, &circ(&op, &g, j - i + 1, &h));
                assert!(elems_equal(&op, &lhs, &rhs));
            }
        }
    }
}
