//! The free boson application: the PVA of N free bosons with
//! {u_i λ u_j} = λ δ_ij, Casimir and derivation defects with an independent
//! variational-derivative oracle, and the brute-force H⁰ computation on
//! truncated jet spaces.

use crate::lambda::{LPoly, Mono, Var};
use crate::linalg::Matrix;
use crate::module::{DElem, DiffPolyAlg, JetMono};
use crate::pva::{PvaStructure, VertexOps, PVA_LAMBDA};
use crate::scalar::Scalar;
use std::collections::BTreeMap;

/// The Poisson vertex algebra of N free bosons.
pub fn freeboson_pva(n: usize) -> PvaStructure {
    let alg = DiffPolyAlg::new((1..=n).map(|i| format!("u{}", i)).collect(), 2, 2);
    let mut table = BTreeMap::new();
    for i in 0..n {
        let mut v = LPoly::zero();
        v.add_term_in(&alg, Mono::var(PVA_LAMBDA), DElem::one());
        table.insert((i, i), v);
    }
    PvaStructure::new(alg, table)
}

/// The defect {m_λ u_j}|_{λ=0} for every generator; all-zero iff ∫m is a
/// Casimir.
pub fn casimir_defect(pva: &PvaStructure, m: &DElem) -> Vec<DElem> {
    let alg = &pva.alg;
    (0..alg.num_vars)
        .map(|j| {
            let b = pva.bracket(m, &alg.jet(j, 0), Var::Sig(5));
            b.terms.get(&Mono::one()).cloned().unwrap_or_else(DElem::zero)
        })
        .collect()
}

/// The independent oracle for the free boson bracket: ∂(δm/δu_j).
pub fn casimir_defect_variational(pva: &PvaStructure, m: &DElem) -> Vec<DElem> {
    let alg = &pva.alg;
    (0..alg.num_vars)
        .map(|j| alg.partial(&alg.variational_derivative(m, j)))
        .collect()
}

/// A derivation of the jet algebra commuting with ∂, given by its values on
/// the generators: D(u_i^{(n)}) = ∂ⁿ(images[i]).
#[derive(Clone, Debug)]
pub struct JetDerivation {
    pub images: Vec<DElem>,
}

impl JetDerivation {
    /// ∂/∂u_i extended as such a derivation.
    pub fn du(n: usize, i: usize) -> JetDerivation {
        let mut images = vec![DElem::zero(); n];
        images[i] = DElem::one();
        JetDerivation { images }
    }

    /// The rotation D_ij = Σ_n (u_i^{(n)} ∂/∂u_j^{(n)} − u_j^{(n)} ∂/∂u_i^{(n)}).
    pub fn rotation(alg: &DiffPolyAlg, i: usize, j: usize) -> JetDerivation {
        let mut images = vec![DElem::zero(); alg.num_vars];
        images[j] = alg.jet(i, 0);
        images[i] = alg.jet(j, 0).neg();
        JetDerivation { images }
    }

    pub fn apply(&self, alg: &DiffPolyAlg, e: &DElem) -> DElem {
        let mut out = DElem::zero();
        for (m, c) in &e.terms {
            for (pos, &((v, n), exp)) in m.0.iter().enumerate() {
                let mut rest = m.0.clone();
                if exp == 1 {
                    rest.remove(pos);
                } else {
                    rest[pos].1 = exp - 1;
                }
                let mut img = self.images[v].clone();
                for _ in 0..n {
                    img = alg.partial(&img);
                }
                let t = DElem::monomial(JetMono(rest), c * &Scalar::from_int(exp as i64));
                out = out.add(&t.mul(&img));
            }
        }
        out
    }
}

/// The PVA-derivation defect D{a_λ b} − {D(a)_λ b} − {a_λ D(b)} on all
/// generator pairs. All-zero iff D is a derivation of the λ-bracket; being
/// a product derivation is automatic for a `JetDerivation`.
pub fn derivation_defect(pva: &PvaStructure, d: &JetDerivation) -> Vec<LPoly<DElem>> {
    let alg = &pva.alg;
    let lam = Var::Sig(5);
    let mut out = Vec::new();
    for i in 0..alg.num_vars {
        for j in 0..alg.num_vars {
            let a = alg.jet(i, 0);
            let b = alg.jet(j, 0);
            let base = pva.bracket(&a, &b, lam);
            let mut lhs = LPoly::zero();
            for (mo, c) in &base.terms {
                lhs.add_term_in(alg, mo.clone(), d.apply(alg, c));
            }
            let t1 = pva.bracket(&d.apply(alg, &a), &b, lam);
            let t2 = pva.bracket(&a, &d.apply(alg, &b), lam);
            out.push(lhs.sub(alg, &t1).sub(alg, &t2));
        }
    }
    out
}

/// Brute-force H⁰ on the truncated space: polynomials of degree ≤ `deg` in
/// jet variables of order ≤ `ord`, solving {m_λ u_j}|_{λ=0} = 0 modulo the
/// ∂-images of the lower-order truncation. Guarded to desk scale.
pub fn h0_bruteforce(n: usize, deg: u32, ord: u32) -> Result<usize, String> {
    if n > 4 || deg > 3 || ord > 3 {
        return Err("free boson H⁰ bounds exceed the desk-scale budget".into());
    }
    pva_casimir_h0(&freeboson_pva(n), deg, ord)
}

/// The same computation for an arbitrary PVA presented on a differential
/// polynomial algebra.
pub fn pva_casimir_h0(pva: &PvaStructure, deg: u32, ord: u32) -> Result<usize, String> {
    let n = pva.alg.num_vars;
    let alg = &pva.alg;
    let monos = alg.monomials_upto(deg, ord);
    let index: BTreeMap<JetMono, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let dim = monos.len();
    // defect coordinates: for each generator j, each output monomial
    let out_monos = alg.monomials_upto(deg + 1, 2 * ord + 1);
    let out_index: BTreeMap<JetMono, usize> =
        out_monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let rows = n * out_monos.len();
    let mut mat = Matrix::zero(rows, dim);
    for (col, m) in monos.iter().enumerate() {
        let defects = casimir_defect(&pva, &DElem::monomial(m.clone(), Scalar::one()));
        for (j, d) in defects.iter().enumerate() {
            for (mo, c) in &d.terms {
                let r = j * out_monos.len()
                    + out_index.get(mo).copied().ok_or("defect leaves the truncation")?;
                mat.data[r][col] = c.clone();
            }
        }
    }
    let kernel = mat.nullspace_basis();
    // subtract the ∂-images of the lower-order truncation, which all lie in
    // the kernel; express them in kernel coordinates by rank comparison
    let lower = alg.monomials_upto(deg, ord.saturating_sub(1));
    let mut dcols: Vec<Vec<Scalar>> = Vec::new();
    for m in &lower {
        let img = alg.partial(&DElem::monomial(m.clone(), Scalar::one()));
        let mut v = vec![Scalar::zero(); dim];
        let mut ok = true;
        for (mo, c) in &img.terms {
            match index.get(mo) {
                Some(&i) => v[i] = c.clone(),
                None => ok = false,
            }
        }
        if ok && !img.is_zero() {
            dcols.push(v);
        }
    }
    // rank of [kernel | dcols] minus rank of dcols gives dim(kernel/∂-part)
    let kdim = kernel.len();
    let mut all = Matrix::zero(dim, kdim + dcols.len());
    for (c, v) in kernel.iter().chain(dcols.iter()).enumerate() {
        for (r, s) in v.iter().enumerate() {
            all.data[r][c] = s.clone();
        }
    }
    let mut dmat = Matrix::zero(dim, dcols.len());
    for (c, v) in dcols.iter().enumerate() {
        for (r, s) in v.iter().enumerate() {
            dmat.data[r][c] = s.clone();
        }
    }
    Ok(all.rank() - dmat.rank())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_and_constants_are_casimirs() {
        let pva = freeboson_pva(2);
        let alg = &pva.alg;
        assert!(casimir_defect(&pva, &DElem::one()).iter().all(|d| d.is_zero()));
        for i in 0..2 {
            assert!(casimir_defect(&pva, &alg.jet(i, 0)).iter().all(|d| d.is_zero()));
        }
    }

    #[test]
    fn u_squared_defect_matches_oracle() {
        let pva = freeboson_pva(2);
        let alg = &pva.alg;
        let m = alg.jet(0, 0).mul(&alg.jet(0, 0));
        let defect = casimir_defect(&pva, &m);
        // {u₁²_λ u₁}|₀ = 2∂u₁
        assert_eq!(defect[0], alg.jet(0, 1).scale(&Scalar::from_int(2)));
        assert!(defect[1].is_zero());
        assert_eq!(defect, casimir_defect_variational(&pva, &m));
    }

    #[test]
    fn variational_oracle_agrees_on_samples() {
        let pva = freeboson_pva(2);
        let alg = &pva.alg;
        let samples = [
            alg.jet(0, 0).mul(&alg.jet(1, 0)),
            alg.jet(0, 1).mul(&alg.jet(0, 1)),
            alg.jet(0, 0).mul(&alg.jet(0, 1)).add(&alg.jet(1, 0)),
            alg.jet(1, 2),
        ];
        for m in &samples {
            assert_eq!(casimir_defect(&pva, m), casimir_defect_variational(&pva, m));
        }
    }

    #[test]
    fn rotations_and_translations_are_derivations() {
        let pva = freeboson_pva(3);
        let alg = &pva.alg;
        for i in 0..3 {
            let d = JetDerivation::du(3, i);
            assert!(derivation_defect(&pva, &d).iter().all(|p| p.is_zero()));
        }
        for i in 0..3 {
            for j in (i + 1)..3 {
                let d = JetDerivation::rotation(alg, i, j);
                assert!(derivation_defect(&pva, &d).iter().all(|p| p.is_zero()));
            }
        }
        // a non-derivation for contrast: D(u₁) = u₁²
        let bad = JetDerivation { images: vec![alg.jet(0, 0).mul(&alg.jet(0, 0)), DElem::zero(), DElem::zero()] };
        assert!(derivation_defect(&pva, &bad).iter().any(|p| !p.is_zero()));
    }

    #[test]
    fn h0_counts_match_formula() {
        // dim H⁰(𝓑) = C(N+1, 1) = N+1 over a differential field with ∂F = 0
        for n in 1..=3usize {
            assert_eq!(h0_bruteforce(n, 2, 2).unwrap(), n + 1, "N = {}", n);
        }
        assert!(h0_bruteforce(5, 2, 2).is_err());
    }
}
