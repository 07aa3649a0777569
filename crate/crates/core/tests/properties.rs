use num_traits::{One, Zero};
use proptest::prelude::*;
use serde_json::Value;

use symplaw_core::det_laws::{eval_det_law, eval_pf_law, pfaffian_coeffs_from_lambdas, sl2_identity_residuals};
use symplaw_core::gma::GmaSpec;
use symplaw_core::group::{GroupAlgebraElement, Word};
use symplaw_core::invariants::{eval_invariant, InvariantFunction, TraceLetter, TraceWord};
use symplaw_core::json::{matrix_from_value, matrix_to_value};
use symplaw_core::pseudochar::{random_word, Pseudocharacter};
use symplaw_core::symplectic::{pfaffian, pfaffian_char_at};
use symplaw_core::{
    InvolutiveRepresentation, Matrix, MultiPoly, Rational, RepKind, Ring, Sampler, SymplecticContext,
};

const VARS: [&str; 3] = ["x", "y", "z"];

fn poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(((0u32..3, 0u32..3, 0u32..3), -5i64..=5, 1i64..=3), 0..5).prop_map(|terms| {
        let vars: Vec<String> = VARS.iter().map(|s| s.to_string()).collect();
        MultiPoly::from_terms(
            &vars,
            terms.into_iter().map(|((a, b, c), n, d)| (vec![a, b, c], Rational::new(n.into(), d.into()))),
        )
        .unwrap()
    })
}

fn rep(d: usize, kind: RepKind, seed: u64, gens: u64) -> InvolutiveRepresentation {
    let ctx = SymplecticContext::new(d).unwrap();
    let mats = (0..gens)
        .map(|k| match kind {
            RepKind::Sp => ctx.sample_symplectic(seed.wrapping_add(k), 2),
            RepKind::GSp => ctx.sample_similitude(seed.wrapping_add(k), 2).0,
        })
        .collect();
    InvolutiveRepresentation::from_generators(d, kind, mats).unwrap()
}

fn element(s: &mut Sampler, gens: usize, terms: usize) -> GroupAlgebraElement<MultiPoly> {
    GroupAlgebraElement::from_terms((0..terms).map(|_| (random_word(s, gens, 2), MultiPoly::from(s.nonzero_rational(3)))))
}

fn dims() -> impl Strategy<Value = usize> {
    1usize..=3
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn multipoly_ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(a.plus(&b), b.plus(&a));
        prop_assert_eq!(a.times(&b), b.times(&a));
        prop_assert_eq!(a.plus(&b).plus(&c), a.plus(&b.plus(&c)));
        prop_assert_eq!(a.times(&b).times(&c), a.times(&b.times(&c)));
        prop_assert_eq!(a.times(&b.plus(&c)), a.times(&b).plus(&a.times(&c)));
        prop_assert_eq!(a.plus(&MultiPoly::zero()), a.clone());
        prop_assert_eq!(a.times(&MultiPoly::one()), a.clone());
        prop_assert!(a.plus(&a.negated()).is_zero());
        prop_assert_eq!(a.minus(&b), a.plus(&b.negated()));
    }

    #[test]
    fn multipoly_display_round_trips(a in poly()) {
        let back: MultiPoly = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn symplectic_transpose_is_involutive(d in dims(), seed in any::<u64>()) {
        let ctx = SymplecticContext::new(d).unwrap();
        let mut s = Sampler::new(seed);
        let m = s.matrix(2 * d, 2 * d, 5);
        let mj = ctx.symplectic_transpose(&m).unwrap();
        prop_assert_eq!(ctx.symplectic_transpose(&mj).unwrap(), m);
    }

    #[test]
    fn symplectic_transpose_reverses_products(d in dims(), seed in any::<u64>()) {
        let ctx = SymplecticContext::new(d).unwrap();
        let mut s = Sampler::new(seed);
        let m = s.matrix(2 * d, 2 * d, 5);
        let n = s.matrix(2 * d, 2 * d, 5);
        let lhs = ctx.symplectic_transpose(&m.mul(&n).unwrap()).unwrap();
        let rhs = ctx.symplectic_transpose(&n).unwrap().mul(&ctx.symplectic_transpose(&m).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn det_is_multiplicative(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let a = s.matrix(4, 4, 6);
        let b = s.matrix(4, 4, 6);
        prop_assert_eq!(a.mul(&b).unwrap().det().unwrap(), a.det().unwrap() * b.det().unwrap());
        prop_assert_eq!(a.det_bareiss(), a.det_laplace());
    }

    #[test]
    fn char_poly_evaluates_to_det(seed in any::<u64>(), n in 1usize..=5, r in -6i64..=6) {
        let mut s = Sampler::new(seed);
        let m = s.matrix(n, n, 5);
        let r = Rational::from_integer(r.into());
        let value = m.char_poly().unwrap().eval(&[("t", r.clone())]).as_constant().unwrap();
        prop_assert_eq!(value, Matrix::scalar(n, r).sub(&m).unwrap().det().unwrap());
    }

    #[test]
    fn pfaffian_squares_to_det(seed in any::<u64>(), half in 1usize..=4) {
        let a = Sampler::new(seed).alternating(2 * half, 6);
        let pf = pfaffian(&a).unwrap();
        prop_assert_eq!(&pf * &pf, a.det().unwrap());
    }

    #[test]
    fn pfaffian_congruence(seed in any::<u64>(), half in 1usize..=3) {
        let mut s = Sampler::new(seed);
        let a = s.alternating(2 * half, 5);
        let g = s.matrix(2 * half, 2 * half, 4);
        let gag = g.mul(&a).unwrap().mul(&g.transpose()).unwrap();
        prop_assert_eq!(pfaffian(&gag).unwrap(), g.det().unwrap() * pfaffian(&a).unwrap());
    }

    #[test]
    fn pfaffian_rejects_non_alternating(seed in any::<u64>()) {
        let mut a = Sampler::new(seed).alternating(4, 5);
        a.set(1, 0, a.get(1, 0) + Rational::one());
        prop_assert!(pfaffian(&a).is_err());
    }

    #[test]
    fn pfaffian_cayley_hamilton(d in dims(), seed in any::<u64>()) {
        let ctx = SymplecticContext::new(d).unwrap();
        let m = ctx.random_j_symmetric(&mut Sampler::new(seed), 5).lift::<MultiPoly>();
        let coeffs = ctx.pfaffian_char_coeffs(&m).unwrap();
        prop_assert!(pfaffian_char_at(&coeffs, &m).unwrap().is_zero());
    }

    #[test]
    fn pfaffian_coefficients_convolve_to_lambdas(d in dims(), seed in any::<u64>()) {
        let ctx = SymplecticContext::new(d).unwrap();
        let m = ctx.random_j_symmetric(&mut Sampler::new(seed), 5);
        let t = ctx.pfaffian_char_coeffs(&m.lift::<MultiPoly>()).unwrap();
        let lambdas = m.lambdas().unwrap();
        for i in 0..=2 * d {
            let conv = (0..=i)
                .filter(|&j| j <= d && i - j <= d)
                .fold(MultiPoly::zero(), |acc, j| acc.plus(&t[j].times(&t[i - j])));
            prop_assert_eq!(conv, MultiPoly::from(lambdas[i].clone()));
        }
        let rec = pfaffian_coeffs_from_lambdas(&lambdas).unwrap();
        prop_assert_eq!(MultiPoly::from(rec[d].clone()), t[d].clone());
        prop_assert_eq!(rec[d].clone(), ctx.reduced_pfaffian(&m).unwrap());
    }

    #[test]
    fn transfer_identity(d in 1usize..=2, seed in any::<u64>()) {
        let ctx = SymplecticContext::new(d).unwrap();
        let mut s = Sampler::new(seed);
        let x = s.matrix(2 * d, 2 * d, 4);
        let m = ctx.random_j_symmetric(&mut s, 4);
        let xmxj = x.mul(&m).unwrap().mul(&ctx.symplectic_transpose(&x).unwrap()).unwrap();
        prop_assert_eq!(
            ctx.reduced_pfaffian(&xmxj).unwrap(),
            x.det().unwrap() * ctx.reduced_pfaffian(&m).unwrap()
        );
    }

    #[test]
    fn sl2_identities(seed in any::<u64>()) {
        let ctx = SymplecticContext::new(1).unwrap();
        let g = ctx.sample_symplectic(seed, 4);
        let (a, b) = sl2_identity_residuals(&g).unwrap();
        prop_assert!(a.is_zero() && b.is_zero());
    }

    #[test]
    fn sampled_symplectic_and_similitudes(d in dims(), seed in any::<u64>()) {
        let ctx = SymplecticContext::new(d).unwrap();
        prop_assert!(ctx.similitude(&ctx.sample_symplectic(seed, 3)).unwrap().is_one());
        let (g, mu) = ctx.sample_similitude(seed, 3);
        prop_assert_eq!(ctx.similitude(&g).unwrap(), mu);
    }

    #[test]
    fn trace_word_canonical_form_is_sound(
        letters in prop::collection::vec((1usize..=3, any::<bool>()), 1..=5),
        rot in 0usize..5,
        seed in any::<u64>(),
    ) {
        let ctx = SymplecticContext::new(2).unwrap();
        let mut s = Sampler::new(seed);
        let mats: Vec<Matrix<Rational>> = (0..3).map(|_| s.matrix(4, 4, 3)).collect();
        let letters: Vec<TraceLetter> = letters.into_iter().map(|(var, starred)| TraceLetter { var, starred }).collect();
        let raw = letters.iter().fold(Matrix::identity(4), |acc: Matrix<Rational>, l| {
            let m = if l.starred { ctx.symplectic_transpose(&mats[l.var - 1]).unwrap() } else { mats[l.var - 1].clone() };
            acc.mul(&m).unwrap()
        });
        let mut rotated = letters.clone();
        rotated.rotate_left(rot % letters.len());
        let canonical = TraceWord::new(letters).unwrap();
        prop_assert_eq!(&TraceWord::new(rotated).unwrap(), &canonical);
        prop_assert_eq!(canonical.evaluate(&ctx, &mats).unwrap().lambdas().unwrap(), raw.lambdas().unwrap());
        let reparsed: TraceWord = canonical.to_string().parse().unwrap();
        prop_assert_eq!(reparsed, canonical);
    }

    #[test]
    fn invariants_under_symplectic_conjugation(seed in any::<u64>(), index in 1usize..=4) {
        let ctx = SymplecticContext::new(2).unwrap();
        let mut s = Sampler::new(seed);
        let mats: Vec<Matrix<Rational>> = (0..2).map(|_| s.matrix(4, 4, 3)).collect();
        let g = ctx.sample_symplectic(seed, 2);
        let g_inv = g.inverse().unwrap();
        let conj: Vec<Matrix<Rational>> = mats.iter().map(|m| g.mul(m).unwrap().mul(&g_inv).unwrap()).collect();
        let f = InvariantFunction::sigma(index, "X1 X2^j X1").unwrap();
        prop_assert_eq!(eval_invariant(&f, &mats).unwrap(), eval_invariant(&f, &conj).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn det_law_is_multiplicative(d in 1usize..=2, seed in any::<u64>()) {
        let rep = rep(d, RepKind::GSp, seed, 2);
        let mut s = Sampler::new(seed);
        let x = element(&mut s, 2, 2);
        let y = element(&mut s, 2, 2);
        let dx = eval_det_law(&rep, &x).unwrap();
        let dy = eval_det_law(&rep, &y).unwrap();
        prop_assert_eq!(eval_det_law(&rep, &x.mul(&y)).unwrap(), dx.times(&dy));
    }

    #[test]
    fn det_law_is_star_invariant_for_sp(d in 1usize..=2, seed in any::<u64>()) {
        let rep = rep(d, RepKind::Sp, seed, 2);
        let x = element(&mut Sampler::new(seed), 2, 3);
        prop_assert_eq!(eval_det_law(&rep, &rep.star(&x).unwrap()).unwrap(), eval_det_law(&rep, &x).unwrap());
    }

    #[test]
    fn pf_law_on_commuting_pairs(d in 1usize..=2, seed in any::<u64>()) {
        let rep = rep(d, RepKind::Sp, seed, 2);
        let mut s = Sampler::new(seed);
        let z = element(&mut s, 2, 2);
        let x = z.add(&rep.star(&z).unwrap());
        let y = GroupAlgebraElement::scalar(MultiPoly::from(s.rational(3)))
            .add(&x.scale(&MultiPoly::from(s.rational(3))))
            .add(&x.mul(&x).scale(&MultiPoly::from(s.rational(3))));
        prop_assert_eq!(rep.star(&y).unwrap(), y.clone());
        let pxy = eval_pf_law(&rep, &x.mul(&y)).unwrap();
        let px = eval_pf_law(&rep, &x).unwrap();
        prop_assert_eq!(pxy, px.times(&eval_pf_law(&rep, &y).unwrap()));
        prop_assert_eq!(px.times(&px), eval_det_law(&rep, &x).unwrap());
    }

    #[test]
    fn similitude_character_is_conjugation_invariant(d in 1usize..=2, seed in any::<u64>()) {
        let base = rep(d, RepKind::GSp, seed, 2);
        let ctx = SymplecticContext::new(d).unwrap();
        let conj = base.conjugated(&ctx.sample_similitude(seed ^ 0x55, 2).0).unwrap();
        let a = Pseudocharacter::new(base);
        let b = Pseudocharacter::new(conj);
        let mut s = Sampler::new(seed);
        for _ in 0..5 {
            let w = random_word(&mut s, 2, 3);
            prop_assert_eq!(a.similitude_character(&w).unwrap(), b.similitude_character(&w).unwrap());
        }
    }

    #[test]
    fn pseudocharacter_is_conjugation_invariant(d in 1usize..=2, seed in any::<u64>()) {
        let base = rep(d, RepKind::Sp, seed, 2);
        let ctx = SymplecticContext::new(d).unwrap();
        let conj = base.conjugated(&ctx.sample_symplectic(seed ^ 0xaa, 2)).unwrap();
        let a = Pseudocharacter::new(base);
        let b = Pseudocharacter::new(conj);
        let mut s = Sampler::new(seed);
        for word in ["X1", "X1 X2", "X1 X2^j", "X1 X1 X2"] {
            let f = InvariantFunction::sigma(1 + s.index(2 * d), word).unwrap();
            let gammas = vec![random_word(&mut s, 2, 3), random_word(&mut s, 2, 3)];
            prop_assert_eq!(a.theta_eval(&f, &gammas).unwrap(), b.theta_eval(&f, &gammas).unwrap());
        }
    }

    #[test]
    fn pseudocharacter_separates_distinct_traces(seed in any::<u64>()) {
        let ctx = SymplecticContext::new(1).unwrap();
        let g = ctx.sample_symplectic(seed, 2);
        let h = Matrix::from_rows(vec![
            vec![Rational::from_integer(2.into()), Rational::zero()],
            vec![Rational::zero(), Rational::new(1.into(), 2.into())],
        ])
        .unwrap();
        let f = InvariantFunction::sigma(1, "X1").unwrap();
        let gammas = vec![Word::generator(0)];
        let a = Pseudocharacter::new(InvolutiveRepresentation::from_generators(1, RepKind::Sp, vec![g.clone()]).unwrap());
        let b = Pseudocharacter::new(InvolutiveRepresentation::from_generators(1, RepKind::Sp, vec![h.clone()]).unwrap());
        prop_assert_eq!(
            a.theta_eval(&f, &gammas).unwrap() == b.theta_eval(&f, &gammas).unwrap(),
            g.trace().unwrap() == h.trace().unwrap()
        );
    }

    #[test]
    fn gma_involution_properties(seed in any::<u64>()) {
        let spec = GmaSpec::standard_example();
        let mut s = Sampler::new(seed);
        let x = spec.random_element(&mut s, 4);
        let y = spec.random_element(&mut s, 4);
        let xs = spec.delta_involution(&x).unwrap();
        prop_assert_eq!(spec.delta_involution(&xs).unwrap(), x.clone());
        let xy = x.mul(&y).unwrap();
        let ys = spec.delta_involution(&y).unwrap();
        prop_assert_eq!(spec.delta_involution(&xy).unwrap(), ys.mul(&xs).unwrap());
        prop_assert_eq!(spec.trace(&xy).unwrap(), spec.trace(&y.mul(&x).unwrap()).unwrap());
        prop_assert_eq!(spec.det(&xy).unwrap(), spec.det(&x).unwrap().times(&spec.det(&y).unwrap()));
    }

    #[test]
    fn gma_symmetric_elements_satisfy_cayley_hamilton(seed in any::<u64>()) {
        let spec = GmaSpec::standard_example();
        let r = spec.random_symmetric(&mut Sampler::new(seed), 4);
        prop_assert_eq!(spec.delta_involution(&r).unwrap(), r.clone());
        prop_assert!(spec.chi(&r).unwrap().is_zero());
        let (_, det, pf) = spec.trace_det_pf(&r).unwrap();
        prop_assert_eq!(pf.times(&pf), det);
    }

    #[test]
    fn json_round_trips(seed in any::<u64>(), p in poly()) {
        let mut s = Sampler::new(seed);
        let m = s.matrix(3, 4, 7);
        prop_assert_eq!(matrix_from_value(&matrix_to_value(&m)).unwrap(), m);
        let v: Value = serde_json::to_value(&p).unwrap();
        prop_assert_eq!(serde_json::from_value::<MultiPoly>(v).unwrap(), p);
        let x = element(&mut s, 3, 3);
        prop_assert_eq!(GroupAlgebraElement::from_json(&x.to_json()).unwrap(), x.clone());
        let r = rep(1 + s.index(2), RepKind::GSp, seed, 2);
        let back = InvolutiveRepresentation::from_json(&r.to_json()).unwrap();
        prop_assert_eq!(back.generators(), r.generators());
        prop_assert_eq!(back.lambdas(), r.lambdas());
        let w = random_word(&mut s, 3, 4);
        prop_assert_eq!(w.to_string().parse::<Word>().unwrap(), w);
        for f in [
            InvariantFunction::sigma(2, "X1 X2^j X3").unwrap(),
            InvariantFunction::Similitude { var: 2, power: -1 },
            InvariantFunction::Entry { var: 1, row: 0, col: 1 },
        ] {
            prop_assert_eq!(InvariantFunction::from_json(&f.to_json()).unwrap(), f);
        }
    }
}

#[test]
fn gma_j_delta_is_alternating_with_unit_pfaffian() {
    for spec in [GmaSpec::standard_example(), GmaSpec::counterexample()] {
        let j = spec.j_delta();
        assert_eq!(j.transpose(), j.negated());
        let pf = pfaffian(j).unwrap();
        assert!((&pf * &pf).is_one());
        assert_eq!(&pf, spec.pfaffian_of_j_delta());
        let back = GmaSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back.to_json(), spec.to_json());
    }
}
