use num_traits::{One, Zero};
use serde_json::{json, Value};

use symplaw_core::det_laws::{
    chi_alpha, closed_form_check_d4, closed_form_d4, eval_det_law, eval_pf_law, pfaffian_coeffs_from_lambdas,
    power_traces, sl2_identity_residuals,
};
use symplaw_core::invariants::{enumerate_trace_words, multilinear_invariant_dim, trace_word_span_dim_seeded};
use symplaw_core::json::{matrix_to_value, poly_matrix_to_value, rational_to_value};
use symplaw_core::pseudochar::random_word;
use symplaw_core::ring::binomial;
use symplaw_core::symplectic::{pfaffian, pfaffian_char_at};
use symplaw_core::{
    GmaSpec, GroupAlgebraElement, InvolutiveRepresentation, Matrix, MultiPoly, Pseudocharacter, Rational, RepKind,
    Ring, Sampler, SymplecticContext,
};

use crate::report::{suite_report, Check};
use crate::{check_dim, read_json, CliError, CliResult, SuiteName, SuiteOpts};

pub fn run_suite(name: SuiteName, opts: &SuiteOpts) -> CliResult<Value> {
    match name {
        SuiteName::Pfaffian => pfaffian_suite(opts),
        SuiteName::DetLaw => det_law_suite(opts),
        SuiteName::Invariants => invariants_suite(opts),
        SuiteName::Gma => gma_suite(opts),
        SuiteName::Pseudochar => pseudochar_suite(opts),
        SuiteName::All => {
            if opts.input.is_some() {
                return Err(CliError::Input("--input is per suite and cannot be used with `all`".into()));
            }
            let reports = vec![
                pfaffian_suite(opts)?,
                det_law_suite(opts)?,
                invariants_suite(opts)?,
                gma_suite(opts)?,
                pseudochar_suite(opts)?,
            ];
            let passed = reports.iter().all(|r| r["passed"] == json!(true));
            Ok(json!({ "suite": "all", "passed": passed, "suites": reports }))
        }
    }
}

fn header(opts: &SuiteOpts) -> Value {
    json!({ "d": opts.d, "trials": opts.trials, "seed": opts.seed })
}

fn pfaffian_suite(opts: &SuiteOpts) -> CliResult<Value> {
    check_dim(opts.d)?;
    let d = opts.d;
    let n = 2 * d;
    let ctx = SymplecticContext::new(d)?;
    let mut s = Sampler::new(opts.seed);
    let t = opts.trials;
    let checks = vec![
        Check::run("pfaffian_squared_is_det", t, |_| {
            let a = s.alternating(n, 6);
            let pf = pfaffian(&a)?;
            Ok((&pf * &pf != a.det()?).then(|| json!({ "matrix": matrix_to_value(&a) })))
        }),
        Check::run("pfaffian_congruence", t, |_| {
            let a = s.alternating(n, 4);
            let g = s.matrix(n, n, 3);
            let gag = g.mul(&a)?.mul(&g.transpose())?;
            Ok((pfaffian(&gag)? != g.det()? * pfaffian(&a)?)
                .then(|| json!({ "a": matrix_to_value(&a), "g": matrix_to_value(&g) })))
        }),
        Check::run("pfaffian_cayley_hamilton", t, |_| {
            let m = ctx.random_j_symmetric(&mut s, 4);
            let lifted = m.lift::<MultiPoly>();
            let coeffs = ctx.pfaffian_char_coeffs(&lifted)?;
            Ok((!pfaffian_char_at(&coeffs, &lifted)?.is_zero()).then(|| json!({ "m": matrix_to_value(&m) })))
        }),
        Check::run("recursion_matches_pfaffian", t, |_| {
            let m = ctx.random_j_symmetric(&mut s, 4);
            let from_pf = ctx.pfaffian_char_coeffs(&m.lift::<MultiPoly>())?;
            let from_rec: Vec<MultiPoly> =
                pfaffian_coeffs_from_lambdas(&m.lambdas()?)?.into_iter().map(MultiPoly::from).collect();
            Ok((from_pf != from_rec).then(|| json!({ "m": matrix_to_value(&m) })))
        }),
        Check::run("transfer_identity", t, |_| {
            let x = s.matrix(n, n, 3);
            let m = ctx.random_j_symmetric(&mut s, 3);
            let xmxj = x.mul(&m)?.mul(&ctx.symplectic_transpose(&x)?)?;
            Ok((ctx.reduced_pfaffian(&xmxj)? != x.det()? * ctx.reduced_pfaffian(&m)?)
                .then(|| json!({ "x": matrix_to_value(&x), "m": matrix_to_value(&m) })))
        }),
        Check::run("commuting_multiplicativity", t, |_| {
            let m = ctx.random_j_symmetric(&mut s, 3);
            let nn = Matrix::scalar(n, s.rational(3)).add(&m.scale(&s.rational(3)))?;
            let lhs = ctx.reduced_pfaffian(&m.mul(&nn)?)?;
            Ok((lhs != ctx.reduced_pfaffian(&m)? * ctx.reduced_pfaffian(&nn)?)
                .then(|| json!({ "m": matrix_to_value(&m), "n": matrix_to_value(&nn) })))
        }),
        Check::single("binomial_at_identity", || {
            let coeffs = pfaffian_coeffs_from_lambdas(&Matrix::<Rational>::identity(n).lambdas()?)?;
            let bad = (0..=d).find(|&i| coeffs[i] != binomial(d as u64, i as u64));
            Ok(bad.map(|i| json!({ "index": i, "value": rational_to_value(&coeffs[i]) })))
        }),
        Check::run("sl2_identities", t, |k| {
            let g = SymplecticContext::new(1)?.sample_symplectic(opts.seed.wrapping_add(k), 4);
            let (a, b) = sl2_identity_residuals(&g)?;
            Ok((!a.is_zero() || !b.is_zero()).then(|| json!({ "g": matrix_to_value(&g) })))
        }),
    ];
    Ok(suite_report("pfaffian", &checks, header(opts)))
}

fn load_rep(opts: &SuiteOpts, default_kind: RepKind) -> CliResult<InvolutiveRepresentation> {
    let rep = match &opts.input {
        Some(path) => InvolutiveRepresentation::from_json(&read_json(path)?)?,
        None => {
            check_dim(opts.d)?;
            let ctx = SymplecticContext::new(opts.d)?;
            let gens = (0..2)
                .map(|k| match default_kind {
                    RepKind::Sp => ctx.sample_symplectic(opts.seed.wrapping_add(k), 2),
                    RepKind::GSp => ctx.sample_similitude(opts.seed.wrapping_add(k), 2).0,
                })
                .collect();
            InvolutiveRepresentation::from_generators(opts.d, default_kind, gens)?
        }
    };
    check_dim(rep.d())?;
    Ok(rep)
}

fn element(s: &mut Sampler, gens: usize, max_terms: usize) -> GroupAlgebraElement<MultiPoly> {
    let terms = s.range(1, max_terms);
    GroupAlgebraElement::from_terms(
        (0..terms).map(|_| (random_word(s, gens, 2), MultiPoly::from(s.nonzero_rational(3)))),
    )
}

fn rep_header(rep: &InvolutiveRepresentation, opts: &SuiteOpts) -> Value {
    json!({
        "d": rep.d(),
        "kind": rep.to_json()["kind"],
        "generators": rep.num_generators(),
        "trials": opts.trials,
        "seed": opts.seed,
    })
}

fn det_law_suite(opts: &SuiteOpts) -> CliResult<Value> {
    let rep = load_rep(opts, RepKind::Sp)?;
    let gens = rep.num_generators().max(1);
    let d = rep.d();
    let mut s = Sampler::new(opts.seed);
    let t = opts.trials;
    let mut checks = vec![
        Check::run("star_is_involutive", t, |_| {
            let x = element(&mut s, gens, 3);
            Ok((rep.star(&rep.star(&x)?)? != x).then(|| x.to_json()))
        }),
        Check::run("det_is_multiplicative", t, |_| {
            let x = element(&mut s, gens, 2);
            let y = element(&mut s, gens, 2);
            let lhs = eval_det_law(&rep, &x.mul(&y))?;
            Ok((lhs != eval_det_law(&rep, &x)? * eval_det_law(&rep, &y)?)
                .then(|| json!({ "x": x.to_json(), "y": y.to_json() })))
        }),
        Check::run("pf_squared_is_det", t, |_| {
            let z = element(&mut s, gens, 2);
            let x = z.add(&rep.star(&z)?);
            let p = eval_pf_law(&rep, &x)?;
            Ok((&p * &p != eval_det_law(&rep, &x)?).then(|| x.to_json()))
        }),
        Check::run("pf_commuting_multiplicativity", t, |_| {
            let z = element(&mut s, gens, 2);
            let x = z.add(&rep.star(&z)?);
            let y = GroupAlgebraElement::scalar(MultiPoly::from(s.rational(3))).add(&x.scale(&MultiPoly::from(s.rational(3))));
            let lhs = eval_pf_law(&rep, &x.mul(&y))?;
            Ok((lhs != eval_pf_law(&rep, &x)? * eval_pf_law(&rep, &y)?)
                .then(|| json!({ "x": x.to_json(), "y": y.to_json() })))
        }),
        Check::run("representation_cayley_hamilton", t, |_| {
            let z = element(&mut s, gens, 2);
            let w = element(&mut s, gens, 2);
            let elems = [z.add(&rep.star(&z)?), w.add(&rep.star(&w)?)];
            let alpha = [1, d as u32 - 1];
            Ok((!chi_alpha(&rep, &elems, &alpha)?.is_zero())
                .then(|| json!({ "elements": [elems[0].to_json(), elems[1].to_json()], "alpha": alpha })))
        }),
    ];
    if rep.kind() == RepKind::Sp {
        checks.push(Check::run("det_is_star_invariant", t, |_| {
            let x = element(&mut s, gens, 3);
            Ok((eval_det_law(&rep, &rep.star(&x)?)? != eval_det_law(&rep, &x)?).then(|| x.to_json()))
        }));
    }
    let id = Matrix::<Rational>::identity(8);
    let (lv, tr) = (id.lambdas()?, power_traces(&id, 4)?);
    let (printed_l, printed_s) = closed_form_check_d4(&lv, &tr)?;
    let (derived_l, derived_s) = closed_form_d4(&lv, &tr)?;
    checks.push(Check::single("closed_form_d4_at_identity", || {
        Ok((!derived_l.is_one() || !derived_s.is_one()).then(|| {
            json!({ "lambda_form": rational_to_value(&derived_l), "trace_form": rational_to_value(&derived_s) })
        }))
    }));
    let mut extra = rep_header(&rep, opts);
    extra["printed_closed_forms_d4"] = json!({
        "at": "identity_8",
        "expected": "1",
        "lambda_form": rational_to_value(&printed_l),
        "trace_form": rational_to_value(&printed_s),
        "matches": printed_l.is_one() && printed_s.is_one(),
    });
    Ok(suite_report("det-law", &checks, extra))
}

fn invariants_suite(opts: &SuiteOpts) -> CliResult<Value> {
    check_dim(opts.d)?;
    let (d, m) = (opts.d, opts.m);
    if m == 0 {
        return Err(CliError::Input("--m must be at least 1".into()));
    }
    let oracle = multilinear_invariant_dim(d, m)?;
    let span = trace_word_span_dim_seeded(d, m, opts.seed)?;
    let ctx = SymplecticContext::new(d)?;
    let n = 2 * d;
    let words = enumerate_trace_words(m, 3);
    let mut s = Sampler::new(opts.seed);
    let mats: Vec<Matrix<Rational>> = (0..m).map(|_| s.matrix(n, n, 3)).collect();
    let base = words.iter().map(|w| w.evaluate(&ctx, &mats)?.lambdas()).collect::<symplaw_core::Result<Vec<_>>>()?;
    let conjugation = |g: &Matrix<Rational>| -> symplaw_core::Result<Option<Value>> {
        let g_inv = g.inverse()?;
        let conj = mats.iter().map(|x| g.mul(x)?.mul(&g_inv)).collect::<symplaw_core::Result<Vec<_>>>()?;
        for (w, expected) in words.iter().zip(&base) {
            if w.evaluate(&ctx, &conj)?.lambdas()? != *expected {
                return Ok(Some(json!({ "word": w.to_string(), "g": matrix_to_value(g) })));
            }
        }
        Ok(None)
    };
    let checks = vec![
        Check::single("trace_words_span_invariants", || {
            Ok((oracle != span).then(|| json!({ "oracle_dim": oracle, "span_dim": span })))
        }),
        Check::run("sp_conjugation_invariance", opts.trials, |k| {
            conjugation(&ctx.sample_symplectic(opts.seed.wrapping_add(k), 2))
        }),
        Check::run("gsp_conjugation_invariance", opts.trials, |k| {
            conjugation(&ctx.sample_similitude(opts.seed.wrapping_add(k), 2).0)
        }),
    ];
    let extra = json!({
        "d": d, "m": m, "trials": opts.trials, "seed": opts.seed,
        "oracle_dim": oracle, "span_dim": span, "match": oracle == span,
        "generators_checked": words.len(),
    });
    Ok(suite_report("invariants", &checks, extra))
}

fn gma_suite(opts: &SuiteOpts) -> CliResult<Value> {
    let spec = match &opts.input {
        Some(path) => GmaSpec::from_json(&read_json(path)?)?,
        None => GmaSpec::standard_example(),
    };
    if spec.gma_type().total() > crate::max_dim()? {
        return Err(CliError::Input(format!(
            "GMA of size {} exceeds SYMPLAW_MAX_DIM",
            spec.gma_type().total()
        )));
    }
    let validation = spec.validate_standard_gma();
    let sch = spec.check_sch_condition();
    let mut s = Sampler::new(opts.seed);
    let t = opts.trials;
    let mut checks = vec![
        Check::single("standard_gma", || {
            Ok((!validation.is_valid()).then(|| json!({ "violations": validation.violations })))
        }),
        Check::run("involution_is_involutive", t, |_| {
            let x = spec.random_element(&mut s, 4);
            let back = spec.delta_involution(&spec.delta_involution(&x)?)?;
            Ok((back != x).then(|| poly_matrix_to_value(&x)))
        }),
        Check::run("involution_reverses_products", t, |_| {
            let x = spec.random_element(&mut s, 4);
            let y = spec.random_element(&mut s, 4);
            let lhs = spec.delta_involution(&x.mul(&y)?)?;
            let rhs = spec.delta_involution(&y)?.mul(&spec.delta_involution(&x)?)?;
            Ok((lhs != rhs).then(|| json!({ "x": poly_matrix_to_value(&x), "y": poly_matrix_to_value(&y) })))
        }),
        Check::run("trace_is_symmetric", t, |_| {
            let x = spec.random_element(&mut s, 4);
            let y = spec.random_element(&mut s, 4);
            Ok((spec.trace(&x.mul(&y)?)? != spec.trace(&y.mul(&x)?)?)
                .then(|| json!({ "x": poly_matrix_to_value(&x), "y": poly_matrix_to_value(&y) })))
        }),
        Check::run("pf_squared_is_det", t, |_| {
            let r = spec.random_symmetric(&mut s, 4);
            let (_, det, pf) = spec.trace_det_pf(&r)?;
            Ok((pf.times(&pf) != det).then(|| poly_matrix_to_value(&r)))
        }),
    ];
    let mut extra = json!({
        "trials": opts.trials,
        "seed": opts.seed,
        "spec": spec.to_json(),
        "sch_condition": sch.holds,
    });
    if let Some(w) = &sch.witness {
        extra["sch_witness"] = json!({
            "block": [w.block.0, w.block.1],
            "element": w.element.to_string(),
            "image": poly_matrix_to_value(&w.image),
        });
    }
    if sch.holds {
        checks.push(Check::run("symplectic_cayley_hamilton", t, |_| {
            let r = spec.random_symmetric(&mut s, 4);
            Ok((!spec.chi(&r)?.is_zero()).then(|| poly_matrix_to_value(&r)))
        }));
    } else {
        let mut found = None;
        for _ in 0..t {
            let r = spec.random_symmetric(&mut s, 4);
            let chi = spec.chi(&r)?;
            if !chi.is_zero() {
                found = Some((r, chi));
                break;
            }
        }
        let generic = spec.generic_element("z");
        let in_kernel = match &found {
            Some((_, chi)) => spec.det_one_plus(chi, &generic)?.is_one(),
            None => false,
        };
        if let Some((r, chi)) = &found {
            extra["chi_witness"] = json!({
                "element": poly_matrix_to_value(r),
                "chi": poly_matrix_to_value(chi),
                "in_det_kernel": in_kernel,
            });
        }
        checks.push(Check::single("chi_witness_in_det_kernel", || {
            Ok((!in_kernel).then(|| json!({ "found_nonzero_chi": found.is_some() })))
        }));
    }
    Ok(suite_report("gma", &checks, extra))
}

fn pseudochar_suite(opts: &SuiteOpts) -> CliResult<Value> {
    let rep = load_rep(opts, RepKind::GSp)?;
    let gens = rep.num_generators().max(1);
    let pc = Pseudocharacter::new(rep.clone());
    let axioms = pc.verify_axioms(opts.trials as usize, opts.seed)?;
    let cmp = pc.comparison_to_det_law();
    let mut s = Sampler::new(opts.seed);
    let comparisons = opts.trials.min(10);
    let checks = vec![
        Check::single("axioms", || Ok((!axioms.passed()).then(|| axioms.to_json()["failures"].clone()))),
        Check::single("comparison_unit", || {
            let one = GroupAlgebraElement::<MultiPoly>::one();
            Ok((!cmp.pf(&one)?.is_one() || !cmp.det(&one)?.is_one()).then(|| json!("P(1) or D(1) differs from 1")))
        }),
        Check::run("comparison_det", comparisons, |_| {
            let x = element(&mut s, gens, 2);
            Ok((cmp.det(&x)? != eval_det_law(&rep, &x)?).then(|| x.to_json()))
        }),
        Check::run("comparison_pf", comparisons, |_| {
            let z = element(&mut s, gens, 1);
            let x = z.add(&rep.star(&z)?);
            Ok((cmp.pf(&x)? != eval_pf_law(&rep, &x)?).then(|| x.to_json()))
        }),
    ];
    let mut extra = rep_header(&rep, opts);
    extra["axioms"] = axioms.to_json();
    Ok(suite_report("pseudochar", &checks, extra))
}
