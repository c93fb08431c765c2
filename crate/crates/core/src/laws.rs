//! Algebraic laws checked on random inputs.

use crate::catalog::{make_algebra, Element};
use crate::homology::{ChainElement, Complex, Part};
use crate::realize::{
    contact_bracket, contact_field, hamiltonian_field, poisson_bracket, ContactConvention,
};
use crate::relexpr::{br, gen, lin, RelationExpr};
use crate::{rat, Polynomial, Rational, VarContext, VectorField, Zp};
use proptest::prelude::*;

fn poly_in(ctx: VarContext, maxexp: i32, maxterms: usize) -> impl Strategy<Value = Polynomial> {
    let nv = ctx.nvars();
    prop::collection::vec(
        (prop::collection::vec(0..=maxexp, nv), -5i64..=5, 1i64..=3),
        0..=maxterms,
    )
    .prop_map(move |terms| {
        Polynomial::from_terms(
            ctx,
            terms
                .into_iter()
                .map(|(e, n, d)| (ctx.monomial(&e), rat(n, d))),
        )
    })
}

fn field_in(ctx: VarContext) -> impl Strategy<Value = VectorField> {
    prop::collection::vec(poly_in(ctx, 2, 3), ctx.nvars()).prop_map(move |cs| {
        cs.into_iter()
            .enumerate()
            .fold(VectorField::zero(ctx), |acc, (i, c)| {
                acc.checked_add(&VectorField::component(i, c)).unwrap()
            })
    })
}

fn x3() -> VarContext {
    VarContext::x(3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(f in poly_in(x3(), 3, 4), g in poly_in(x3(), 3, 4), h in poly_in(x3(), 3, 4)) {
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert!((&f - &f).is_zero());
        prop_assert_eq!(&f * &Polynomial::one(x3()), f.clone());
    }

    #[test]
    fn leibniz(f in poly_in(x3(), 3, 4), g in poly_in(x3(), 3, 4), i in 0usize..3) {
        let lhs = (&f * &g).differentiate(i).unwrap();
        let rhs = &(&f.differentiate(i).unwrap() * &g) + &(&f * &g.differentiate(i).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn euler_scales_components(f in poly_in(VarContext::pq(2), 3, 5)) {
        let e = f.euler_operator().unwrap();
        for (d, c) in f.homogeneous_components() {
            let ed = e.homogeneous_components().remove(&d).unwrap_or_else(|| Polynomial::zero(VarContext::pq(2)));
            prop_assert_eq!(ed, c.scale(&rat(d as i64, 1)));
        }
    }

    #[test]
    fn text_round_trip(f in poly_in(VarContext::tpq(2), 3, 5)) {
        prop_assert_eq!(Polynomial::parse(&f.to_string(), VarContext::tpq(2)).unwrap(), f);
    }

    #[test]
    fn field_round_trip(v in field_in(x3())) {
        prop_assert_eq!(VectorField::parse(&v.to_string(), x3()).unwrap(), v);
    }

    #[test]
    fn jacobi(a in field_in(x3()), b in field_in(x3()), c in field_in(x3())) {
        let t1 = a.lie_bracket(&b.lie_bracket(&c).unwrap()).unwrap();
        let t2 = b.lie_bracket(&c.lie_bracket(&a).unwrap()).unwrap();
        let t3 = c.lie_bracket(&a.lie_bracket(&b).unwrap()).unwrap();
        prop_assert!(t1.checked_add(&t2).unwrap().checked_add(&t3).unwrap().is_zero());
    }

    #[test]
    fn divergence_of_bracket(a in field_in(x3()), b in field_in(x3())) {
        let lhs = a.lie_bracket(&b).unwrap().divergence().unwrap();
        let rhs = a.apply(&b.divergence().unwrap()).unwrap().checked_sub(&b.apply(&a.divergence().unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn hamiltonian_homomorphism(f in poly_in(VarContext::pq(2), 3, 3), g in poly_in(VarContext::pq(2), 3, 3)) {
        let lhs = hamiltonian_field(&f).unwrap().lie_bracket(&hamiltonian_field(&g).unwrap()).unwrap();
        prop_assert_eq!(lhs, hamiltonian_field(&poisson_bracket(&f, &g).unwrap()).unwrap());
    }

    #[test]
    fn contact_homomorphism(f in poly_in(VarContext::tpq(1), 2, 3), g in poly_in(VarContext::tpq(1), 2, 3)) {
        let lhs = contact_field(&f).unwrap().lie_bracket(&contact_field(&g).unwrap()).unwrap();
        let b = contact_bracket(&f, &g, ContactConvention::FieldHomomorphic).unwrap();
        prop_assert_eq!(lhs, contact_field(&b).unwrap());
    }

    #[test]
    fn reduction_mod_p_is_a_ring_map(f in poly_in(x3(), 3, 4), g in poly_in(x3(), 3, 4)) {
        let red = |p: &Polynomial| p.map_scalar(|c: &Rational| {
            let n = Zp::new((c.numer() % 2_147_483_647i64).try_into().unwrap());
            let d = Zp::new((c.denom() % 2_147_483_647i64).try_into().unwrap());
            n * d.inverse().unwrap()
        });
        prop_assert_eq!(red(&(&f * &g)), &red(&f) * &red(&g));
        prop_assert_eq!(red(&(&f + &g)), &red(&f) + &red(&g));
    }

    #[test]
    fn bracket_degrees_add(i in 0usize..18, j in 0usize..30) {
        let spec = make_algebra("vect:3".parse().unwrap()).unwrap();
        let g1 = spec.graded_component_basis(1).unwrap();
        let g2 = spec.graded_component_basis(2).unwrap();
        let b = spec.bracket(&g1.elements[i % g1.dim()], &g2.elements[j % g2.dim()]).unwrap();
        prop_assert!(b.is_zero() || spec.degree(&b).unwrap() == 3);
        if !b.is_zero() {
            let w = spec.weight(&g1.elements[i % g1.dim()]).unwrap().add(&spec.weight(&g2.elements[j % g2.dim()]).unwrap());
            prop_assert_eq!(spec.weight(&b).unwrap(), w);
        }
    }

    #[test]
    fn d1_after_d2_vanishes(coeffs in prop::collection::vec(-3i64..=3, 1..6), picks in prop::collection::vec(0usize..1000, 3..18)) {
        let spec = make_algebra("h:4".parse().unwrap()).unwrap();
        let cx = Complex::new(&spec, Part::GPlus, 4).unwrap();
        let basis = cx.wedge_basis(3, 4);
        let mut c = ChainElement::zero(3);
        for (k, p) in coeffs.iter().zip(picks) {
            c.add_scaled(&ChainElement::wedge(&basis[p % basis.len()], rat(1, 1)), &rat(*k, 1));
        }
        prop_assert!(cx.d1(&cx.d2(&c).unwrap()).unwrap().is_empty());
    }

    #[test]
    fn expressions_are_linear(a in -4i64..=4, b in -4i64..=4) {
        let spec = make_algebra("k:5".parse().unwrap()).unwrap();
        let u = br(gen("X1+"), gen("Y"));
        let v = br(gen("X0+"), gen("X2+"));
        let e: RelationExpr = lin(vec![(rat(a, 1), u.clone()), (rat(b, 1), v.clone())]);
        let lhs: Element = e.eval(&spec).unwrap();
        let rhs = u.eval(&spec).unwrap().scale(&rat(a, 1)).add(&v.eval(&spec).unwrap().scale(&rat(b, 1))).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
