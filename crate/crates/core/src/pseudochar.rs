//! Lafforgue pseudocharacters attached to symplectic representations, checked
//! against their defining axioms and compared with determinant laws.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::det_laws::{newton_lambdas_from_traces, pfaffian_coeffs_from_lambdas, InvolutiveRepresentation, RepKind};
use crate::error::{Error, Result};
use crate::group::{GroupAlgebraElement, Letter, Word};
use crate::invariants::{eval_invariant, InvariantFunction, TraceLetter, TraceWord};
use crate::poly::MultiPoly;
use crate::random::Sampler;
use crate::ring::{ratio, Rational, Ring};

type Key = (InvariantFunction, Vec<Word>);

/// `Θ_ρ`: `(Θ_ρ)_m(f)(γ_1, ..., γ_m) = f(ρ(γ_1), ..., ρ(γ_m))`.
pub struct Pseudocharacter {
    rep: InvolutiveRepresentation,
    cache: Mutex<HashMap<Key, Rational>>,
    overrides: BTreeMap<Key, Rational>,
}

impl Pseudocharacter {
    pub fn new(rep: InvolutiveRepresentation) -> Self {
        Pseudocharacter { rep, cache: Mutex::new(HashMap::new()), overrides: BTreeMap::new() }
    }

    /// Replaces one table value; used to build inconsistent fixtures.
    pub fn with_override(mut self, f: InvariantFunction, gammas: Vec<Word>, value: Rational) -> Self {
        self.overrides.insert((f, gammas), value);
        self
    }

    pub fn rep(&self) -> &InvolutiveRepresentation {
        &self.rep
    }

    pub fn kind(&self) -> RepKind {
        self.rep.kind()
    }

    pub fn theta_eval(&self, f: &InvariantFunction, gammas: &[Word]) -> Result<Rational> {
        if f.arity() > gammas.len() {
            return Err(Error::Arity { needed: f.arity(), got: gammas.len() });
        }
        if let InvariantFunction::Similitude { .. } = f {
            if self.kind() == RepKind::Sp {
                return Err(Error::UnsupportedKind("similitude generators need a GSp pseudocharacter".into()));
            }
        }
        let key = (f.clone(), gammas.to_vec());
        if let Some(v) = self.overrides.get(&key) {
            return Ok(v.clone());
        }
        if let Some(v) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(v.clone());
        }
        let mats = gammas.iter().map(|g| self.rep.image(g)).collect::<Result<Vec<_>>>()?;
        let v = eval_invariant(f, &mats)?;
        self.cache.lock().expect("cache lock").insert(key, v.clone());
        Ok(v)
    }

    /// Evaluates a product of generators, `Θ` being a ring homomorphism.
    pub fn theta_product(&self, fs: &[InvariantFunction], gammas: &[Word]) -> Result<Rational> {
        fs.iter().try_fold(Rational::from_int(1), |acc, f| Ok(acc * self.theta_eval(f, gammas)?))
    }

    /// `λ_Θ(γ) = Θ_1(λ)(γ)`.
    pub fn similitude_character(&self, gamma: &Word) -> Result<Rational> {
        if self.kind() == RepKind::Sp {
            return Err(Error::UnsupportedKind("the similitude character needs a GSp pseudocharacter".into()));
        }
        self.theta_eval(&InvariantFunction::Similitude { var: 1, power: 1 }, std::slice::from_ref(gamma))
    }

    /// Randomized check of `Θ_n(f^ζ)(γ) = Θ_m(f)(γ∘ζ)` and
    /// `Θ_{m+1}(f̂)(γ_1, ..., γ_{m+1}) = Θ_m(f)(γ_1, ..., γ_m γ_{m+1})`, plus one product
    /// check for every overridden table entry.
    pub fn verify_axioms(&self, trials: usize, seed: u64) -> Result<AxiomReport> {
        let mut sampler = Sampler::new(seed);
        let mut report = AxiomReport::default();
        let gens = self.rep.num_generators();
        for _ in 0..trials {
            let m = sampler.range(1, 3);
            let f = self.random_function(&mut sampler, m);
            let n = sampler.range(1, 3);
            let zeta: Vec<usize> = (0..m).map(|_| sampler.range(1, n)).collect();
            let gammas: Vec<Word> = (0..n).map(|_| random_word(&mut sampler, gens, 3)).collect();
            let lhs = self.theta_eval(&relabel(&f, &zeta), &gammas)?;
            let pulled: Vec<Word> = zeta.iter().map(|&z| gammas[z - 1].clone()).collect();
            let rhs = self.theta_eval(&f, &pulled)?;
            report.record(1, lhs == rhs, &f, &gammas, &zeta);

            let gammas: Vec<Word> = (0..=m).map(|_| random_word(&mut sampler, gens, 3)).collect();
            self.check_product(&mut report, &f, m, &gammas)?;
        }
        for (f, gammas) in self.overrides.keys() {
            let m = gammas.len();
            if m == 0 || f.arity() > m {
                continue;
            }
            let last = gammas[m - 1].letters();
            let (a, b) = match last.split_first() {
                Some((first, rest)) => (Word::from_letters([*first]), Word::from_letters(rest.iter().copied())),
                None => (Word::identity(), Word::identity()),
            };
            let mut split = gammas[..m - 1].to_vec();
            split.push(a);
            split.push(b);
            self.check_product(&mut report, f, m, &split)?;
        }
        Ok(report)
    }

    fn check_product(&self, report: &mut AxiomReport, f: &InvariantFunction, m: usize, gammas: &[Word]) -> Result<()> {
        let lhs = self.theta_product(&hat(f, m), gammas)?;
        let mut merged = gammas[..m - 1].to_vec();
        merged.push(gammas[m - 1].mul(&gammas[m]));
        let rhs = self.theta_eval(f, &merged)?;
        report.record(2, lhs == rhs, f, gammas, &[]);
        Ok(())
    }

    fn random_function(&self, sampler: &mut Sampler, m: usize) -> InvariantFunction {
        if self.kind() == RepKind::GSp && sampler.index(4) == 0 {
            let power = if sampler.coin() { 1 } else { -1 };
            return InvariantFunction::Similitude { var: sampler.range(1, m), power };
        }
        let len = sampler.range(1, 4);
        let letters = (0..len)
            .map(|_| TraceLetter { var: sampler.range(1, m), starred: sampler.coin() })
            .collect();
        let index = sampler.range(1, 2 * self.rep.d());
        InvariantFunction::Sigma { index, word: TraceWord::new(letters).expect("nonempty") }
    }

    /// The pair `(D, P)` obtained from `Θ` alone.
    pub fn comparison_to_det_law(&self) -> Comparison<'_> {
        Comparison { pc: self }
    }
}

/// A word of length at most `max_len` in `gens` generators.
pub fn random_word(sampler: &mut Sampler, gens: usize, max_len: usize) -> Word {
    if gens == 0 {
        return Word::identity();
    }
    let len = sampler.range(0, max_len);
    Word::from_letters((0..len).map(|_| Letter { gen: sampler.index(gens), inverse: sampler.coin() }))
}

/// `f^ζ(g_1, ..., g_n) = f(g_{ζ(1)}, ..., g_{ζ(m)})`, with `zeta[i-1] = ζ(i)`.
pub fn relabel(f: &InvariantFunction, zeta: &[usize]) -> InvariantFunction {
    match f {
        InvariantFunction::Sigma { index, word } => {
            let letters = word
                .letters()
                .iter()
                .map(|l| TraceLetter { var: zeta[l.var - 1], starred: l.starred })
                .collect();
            InvariantFunction::Sigma { index: *index, word: TraceWord::new(letters).expect("nonempty") }
        }
        InvariantFunction::Similitude { var, power } => InvariantFunction::Similitude { var: zeta[var - 1], power: *power },
        InvariantFunction::Entry { var, row, col } => InvariantFunction::Entry { var: zeta[var - 1], row: *row, col: *col },
    }
}

/// `f̂(g_1, ..., g_{m+1}) = f(g_1, ..., g_m g_{m+1})` as a product of generators.
pub fn hat(f: &InvariantFunction, m: usize) -> Vec<InvariantFunction> {
    match f {
        InvariantFunction::Sigma { index, word } => {
            let mut letters = Vec::new();
            for l in word.letters() {
                if l.var != m {
                    letters.push(*l);
                } else if l.starred {
                    letters.push(TraceLetter { var: m + 1, starred: true });
                    letters.push(TraceLetter { var: m, starred: true });
                } else {
                    letters.push(TraceLetter { var: m, starred: false });
                    letters.push(TraceLetter { var: m + 1, starred: false });
                }
            }
            vec![InvariantFunction::Sigma { index: *index, word: TraceWord::new(letters).expect("nonempty") }]
        }
        InvariantFunction::Similitude { var, power } if *var == m => vec![
            InvariantFunction::Similitude { var: m, power: *power },
            InvariantFunction::Similitude { var: m + 1, power: *power },
        ],
        other => vec![other.clone()],
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxiomFailure {
    pub axiom: u8,
    pub function: String,
    pub gammas: Vec<String>,
    pub zeta: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AxiomReport {
    pub checked: [usize; 2],
    pub failures: Vec<AxiomFailure>,
}

impl AxiomReport {
    fn record(&mut self, axiom: u8, ok: bool, f: &InvariantFunction, gammas: &[Word], zeta: &[usize]) {
        self.checked[axiom as usize - 1] += 1;
        if !ok {
            self.failures.push(AxiomFailure {
                axiom,
                function: f.to_string(),
                gammas: gammas.iter().map(Word::to_string).collect(),
                zeta: zeta.to_vec(),
            });
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failures_of(&self, axiom: u8) -> usize {
        self.failures.iter().filter(|f| f.axiom == axiom).count()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "passed": self.passed(),
            "axiom1_checked": self.checked[0],
            "axiom2_checked": self.checked[1],
            "failures": self.failures.iter().map(|f| json!({
                "axiom": f.axiom,
                "function": f.function,
                "gammas": f.gammas,
                "zeta": f.zeta,
            })).collect::<Vec<_>>(),
        })
    }
}

/// `(D, P)` reconstructed from a pseudocharacter.
pub struct Comparison<'a> {
    pc: &'a Pseudocharacter,
}

impl Comparison<'_> {
    /// `Σ_{i_1..i_k} c_{i_1}⋯c_{i_k} Θ(σ_1(Z_1⋯Z_k))(γ_{i_1}, ..., γ_{i_k})` for `k = 1..=n`,
    /// where each summand `c_i Z_i` is `c·X` or `c·X^j`.
    fn power_traces(&self, summands: &[(MultiPoly, Word, bool)], n: usize) -> Result<Vec<MultiPoly>> {
        let mut out = Vec::with_capacity(n);
        for k in 1..=n {
            let mut total = MultiPoly::zero();
            let count = summands.len().pow(k as u32);
            for mut code in 0..count {
                let mut coef = MultiPoly::one();
                let mut letters = Vec::with_capacity(k);
                let mut gammas = Vec::with_capacity(k);
                for pos in 0..k {
                    let (c, w, starred) = &summands[code % summands.len()];
                    code /= summands.len();
                    coef = coef.times(c);
                    letters.push(TraceLetter { var: pos + 1, starred: *starred });
                    gammas.push(w.clone());
                }
                let f = InvariantFunction::Sigma { index: 1, word: TraceWord::new(letters).expect("nonempty") };
                total = total.plus(&coef.scale(&self.pc.theta_eval(&f, &gammas)?));
            }
            out.push(total);
        }
        Ok(out)
    }

    /// `D(Σ c_i γ_i) = Θ(det(Σ c_i 𝕏^(i)))`, through Newton's identities.
    pub fn det(&self, x: &GroupAlgebraElement<MultiPoly>) -> Result<MultiPoly> {
        let n = 2 * self.pc.rep.d();
        let summands: Vec<_> = x.terms().map(|(w, c)| (c.clone(), w.clone(), false)).collect();
        if summands.is_empty() {
            return Ok(MultiPoly::zero());
        }
        let traces = self.power_traces(&summands, n)?;
        Ok(newton_lambdas_from_traces(&traces, n)?.swap_remove(n))
    }

    /// `P(Σ c_i(γ_i + λ(γ_i)γ_i⁻¹)) = Θ(Pf((Σ c_i(𝕏^(i) + 𝕏^(i)j))J))` for symmetric `x`.
    pub fn pf(&self, x: &GroupAlgebraElement<MultiPoly>) -> Result<MultiPoly> {
        let rep = &self.pc.rep;
        if rep.star(x)? != *x {
            return Err(Error::Symmetry);
        }
        let d = rep.d();
        let mut summands = Vec::new();
        for (w, c) in x.terms() {
            if w.is_identity() {
                let half = c.scale(&ratio(1, 2));
                summands.push((half.clone(), w.clone(), false));
                summands.push((half, w.clone(), true));
            } else if *w < w.inverse() {
                summands.push((c.clone(), w.clone(), false));
                summands.push((c.clone(), w.clone(), true));
            }
        }
        if summands.is_empty() {
            return Ok(MultiPoly::zero());
        }
        let traces = self.power_traces(&summands, 2 * d)?;
        let lambdas = newton_lambdas_from_traces(&traces, 2 * d)?;
        Ok(pfaffian_coeffs_from_lambdas(&lambdas)?.swap_remove(d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::det_laws::{eval_det_law, eval_pf_law};
    use crate::matrix::int_matrix;
    use crate::ring::{binomial, rat};
    use crate::symplectic::SymplecticContext;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn theta_examples() {
        for d in 1..=2 {
            let pc = Pseudocharacter::new(InvolutiveRepresentation::trivial(d, RepKind::Sp, 2).unwrap());
            for i in 1..=2 * d {
                let f = InvariantFunction::sigma(i, "X1 X2^j X1").unwrap();
                assert_eq!(pc.theta_eval(&f, &[w("g1"), w("g2^-1")]).unwrap(), binomial(2 * d as u64, i as u64));
            }
        }
        let gsp = InvolutiveRepresentation::from_generators(1, RepKind::GSp, vec![int_matrix(&[&[2, 0], &[0, 2]])]).unwrap();
        let pc = Pseudocharacter::new(gsp);
        let inv = InvariantFunction::Similitude { var: 1, power: -1 };
        assert_eq!(pc.theta_eval(&inv, &[w("g1")]).unwrap(), ratio(1, 4));
        let ctx = SymplecticContext::new(2).unwrap();
        let rep = InvolutiveRepresentation::from_generators(2, RepKind::Sp, vec![ctx.sample_symplectic(3, 2)]).unwrap();
        let pc = Pseudocharacter::new(rep);
        let f = InvariantFunction::sigma(1, "X1 X2").unwrap();
        assert_eq!(pc.theta_eval(&f, &[w("g1"), w("g1^-1")]).unwrap(), rat(4));
        assert_eq!(pc.theta_eval(&f, &[w("g1")]), Err(Error::Arity { needed: 2, got: 1 }));
        assert!(matches!(pc.theta_eval(&inv, &[w("g1")]), Err(Error::UnsupportedKind(_))));
    }

    #[test]
    fn hat_and_relabel() {
        let f = InvariantFunction::sigma(1, "X1 X2^j").unwrap();
        assert_eq!(hat(&f, 2), vec![InvariantFunction::sigma(1, "X1 X3^j X2^j").unwrap()]);
        assert_eq!(relabel(&f, &[2, 2]), InvariantFunction::sigma(1, "X2 X2^j").unwrap());
        let l = InvariantFunction::Similitude { var: 1, power: -1 };
        assert_eq!(hat(&l, 1).len(), 2);
        assert_eq!(hat(&l, 2), vec![l.clone()]);
    }

    #[test]
    fn axioms_hold_for_representations() {
        let ctx = SymplecticContext::new(1).unwrap();
        let rep = InvolutiveRepresentation::from_generators(
            1,
            RepKind::GSp,
            vec![ctx.sample_similitude(1, 2).0, ctx.sample_symplectic(2, 2)],
        )
        .unwrap();
        let report = Pseudocharacter::new(rep).verify_axioms(30, 5).unwrap();
        assert!(report.passed(), "{:?}", report.failures);
        assert_eq!(report.checked, [30, 30]);
    }

    #[test]
    fn corrupted_entry_is_detected() {
        let ctx = SymplecticContext::new(1).unwrap();
        let rep = InvolutiveRepresentation::from_generators(1, RepKind::Sp, vec![ctx.sample_symplectic(1, 2)]).unwrap();
        let f = InvariantFunction::sigma(1, "X1").unwrap();
        let gammas = vec![w("g1^2")];
        let truth = Pseudocharacter::new(rep.clone()).theta_eval(&f, &gammas).unwrap();
        let pc = Pseudocharacter::new(rep).with_override(f, gammas, truth + rat(1));
        let report = pc.verify_axioms(5, 1).unwrap();
        assert!(report.failures_of(2) >= 1);
    }

    #[test]
    fn similitude_character_examples() {
        let rep = InvolutiveRepresentation::from_generators(
            1,
            RepKind::GSp,
            vec![int_matrix(&[&[2, 0], &[0, 2]]), int_matrix(&[&[2, 0], &[0, 3]])],
        )
        .unwrap();
        let pc = Pseudocharacter::new(rep);
        assert_eq!(pc.similitude_character(&w("g1")).unwrap(), rat(4));
        assert_eq!(pc.similitude_character(&w("g2")).unwrap(), rat(6));
        assert_eq!(pc.similitude_character(&w("g1 g2^-1")).unwrap(), ratio(2, 3));
        let sp = Pseudocharacter::new(InvolutiveRepresentation::trivial(1, RepKind::Sp, 1).unwrap());
        assert!(matches!(sp.similitude_character(&w("g1")), Err(Error::UnsupportedKind(_))));
    }

    #[test]
    fn comparison_examples() {
        let rep = InvolutiveRepresentation::from_generators(1, RepKind::Sp, vec![int_matrix(&[&[1, 1], &[0, 1]])]).unwrap();
        let pc = Pseudocharacter::new(rep.clone());
        let cmp = pc.comparison_to_det_law();
        let c = GroupAlgebraElement::scalar(p("c"));
        assert_eq!(cmp.det(&c).unwrap(), p("c^2"));
        assert_eq!(cmp.pf(&c).unwrap(), p("c"));
        let sym = GroupAlgebraElement::from_terms([(w("g1"), p("c")), (w("g1^-1"), p("c"))]);
        assert_eq!(cmp.pf(&sym).unwrap(), p("2*c"));
        assert_eq!(cmp.det(&sym).unwrap(), eval_det_law(&rep, &sym).unwrap());
        assert_eq!(cmp.pf(&sym).unwrap(), eval_pf_law(&rep, &sym).unwrap());
        let asym = GroupAlgebraElement::monomial(w("g1"), p("c"));
        assert_eq!(cmp.pf(&asym), Err(Error::Symmetry));
        let one = GroupAlgebraElement::<MultiPoly>::one();
        assert_eq!(cmp.pf(&one).unwrap(), MultiPoly::one());
    }
}
