//! Property tests for the algebraic substrate: the quotient normal form,
//! the ∂-derivation law, and exact definite integration.

use proptest::prelude::*;
use vertex_operads::lambda::{normal_form, LPoly, Mono, SPoly, Var};
use vertex_operads::module::{DiffPolyAlg, GenKind, Generator, MElem, PdModule};
use vertex_operads::parity::Parity;
use vertex_operads::scalar::Scalar;

fn space() -> PdModule {
    PdModule::new(vec![
        Generator { name: "v".into(), parity: Parity::Even, kind: GenKind::Free },
        Generator { name: "w".into(), parity: Parity::Odd, kind: GenKind::Free },
        Generator { name: "K".into(), parity: Parity::Even, kind: GenKind::Torsion },
    ])
}

/// A random module element with small coefficients and ∂-powers ≤ 2.
fn melem_strategy() -> impl Strategy<Value = MElem> {
    proptest::collection::vec((0usize..3, 0u32..3, -3i64..=3), 0..4).prop_map(|terms| {
        let sp = space();
        let mut e = MElem::zero();
        for (g, d, c) in terms {
            let d = if g == 2 { 0 } else { d };
            e = e.add(&sp.basis(g, d).scale(&Scalar::from_int(c)));
        }
        e
    })
}

/// A random λ-polynomial in Lam(0..=k) of degree ≤ 4.
fn lpoly_strategy(k: u16) -> impl Strategy<Value = LPoly<MElem>> {
    proptest::collection::vec(
        (proptest::collection::vec(0u32..3, (k as usize) + 1), melem_strategy()),
        0..5,
    )
    .prop_map(move |terms| {
        let sp = space();
        let mut p = LPoly::zero();
        for (exps, e) in terms {
            let mut m = Mono::one();
            for (i, &x) in exps.iter().enumerate() {
                m = m.mul(&Mono::power(Var::Lam(i as u16), x));
            }
            p.add_term_in(&sp, m, e);
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_form_is_idempotent(k in 0u16..=3, p in lpoly_strategy(3)) {
        let sp = space();
        let nf = normal_form(&sp, &p, k);
        prop_assert_eq!(normal_form(&sp, &nf, k), nf);
    }

    #[test]
    fn normal_form_kills_the_ideal(k in 0u16..=3, p in lpoly_strategy(3), q in lpoly_strategy(3)) {
        let sp = space();
        // p + (∂ + λ_0 + … + λ_k)·q has the same normal form as p
        let mut ideal = q.map_partial(&sp);
        for i in 0..=k {
            ideal = ideal.add(&sp, &q.mul_spoly(&sp, &SPoly::svar(Var::Lam(i))));
        }
        prop_assert_eq!(
            normal_form(&sp, &p.add(&sp, &ideal), k),
            normal_form(&sp, &p, k)
        );
    }

    #[test]
    fn partial_is_a_derivation(
        a in proptest::collection::vec((0usize..2, 0u32..3, -3i64..=3), 0..4),
        b in proptest::collection::vec((0usize..2, 0u32..3, -3i64..=3), 0..4),
    ) {
        let alg = DiffPolyAlg::new(vec!["x".into(), "y".into()], 3, 3);
        let build = |terms: &[(usize, u32, i64)]| {
            let mut e = vertex_operads::module::DElem::one();
            for &(v, n, c) in terms {
                e = e.mul(&alg.jet(v, n).scale(&Scalar::from_int(c)));
            }
            e
        };
        let (x, y) = (build(&a), build(&b));
        let lhs = alg.partial(&x.mul(&y));
        let rhs = alg.partial(&x).mul(&y).add(&x.mul(&alg.partial(&y)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn integral_concatenates(
        p in lpoly_strategy(1),
        a in -3i64..=3,
        c in -3i64..=3,
    ) {
        // ∫_a^b + ∫_b^c = ∫_a^c with a σ-variable integrand rebuilt from the
        // λ-polynomial by renaming Lam(1) to Sig(0)
        let sp = space();
        let mut integrand = LPoly::zero();
        for (m, e) in &p.terms {
            let k = m.exponent(Var::Lam(1));
            let rest = m.without(Var::Lam(1)).mul(&Mono::power(Var::Sig(0), k));
            integrand.add_term_in(&sp, rest, e.clone());
        }
        let lo = SPoly::sconst(Scalar::from_int(a));
        let mid = SPoly::svar(Var::Lam(0));
        let hi = SPoly::sconst(Scalar::from_int(c));
        let i1 = integrand.formal_integral(&sp, Var::Sig(0), &lo, &mid);
        let i2 = integrand.formal_integral(&sp, Var::Sig(0), &mid, &hi);
        let i3 = integrand.formal_integral(&sp, Var::Sig(0), &lo, &hi);
        prop_assert_eq!(i1.add(&sp, &i2), i3);
    }

    #[test]
    fn integral_is_linear(p in lpoly_strategy(0), q in lpoly_strategy(0), c in -3i64..=3) {
        let sp = space();
        let to_sig = |p: &LPoly<MElem>| {
            let mut out = LPoly::zero();
            for (m, e) in &p.terms {
                let k = m.exponent(Var::Lam(0));
                out.add_term_in(&sp, Mono::power(Var::Sig(0), k), e.clone());
            }
            out
        };
        let (ps, qs) = (to_sig(&p), to_sig(&q));
        let lo = SPoly::sconst(Scalar::zero());
        let hi = SPoly::svar(Var::Lam(0));
        let lhs = ps
            .add(&sp, &qs.scale(&sp, &Scalar::from_int(c)))
            .formal_integral(&sp, Var::Sig(0), &lo, &hi);
        let rhs = ps.formal_integral(&sp, Var::Sig(0), &lo, &hi).add(
            &sp,
            &qs.formal_integral(&sp, Var::Sig(0), &lo, &hi)
                .scale(&sp, &Scalar::from_int(c)),
        );
        prop_assert_eq!(lhs, rhs);
    }
}
