//! Coefficient calculus of determinant and Pfaffian laws, and the pair
//! `(det ∘ ρ, Pf ∘ (ρ·J))` attached to a representation of a free group.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::{GroupAlgebraElement, Word};
use crate::json::{matrix_from_value, matrix_to_value, rational_from_value, rational_to_value};
use crate::matrix::Matrix;
use crate::poly::MultiPoly;
use crate::ring::{binomial, ratio, PolyRing, Rational, Ring};
use crate::symplectic::{pfaffian_char_at, pfaffian_char_coeffs_wrt, SymplecticContext};

/// `iΛ_i = Σ_{k=1}^{i} (−1)^{k−1} Λ_{i−k} s_k`, returning `[Λ_0, ..., Λ_n]`.
pub fn newton_lambdas_from_traces<R: Ring>(traces: &[R], n: usize) -> Result<Vec<R>> {
    if n < 1 {
        return Err(Error::Argument("degree must be at least 1".into()));
    }
    if traces.len() < n {
        return Err(Error::Argument(format!("need {n} power traces, got {}", traces.len())));
    }
    let mut lambdas = vec![R::one()];
    for i in 1..=n {
        let mut acc = R::zero();
        for k in 1..=i {
            let term = lambdas[i - k].times(&traces[k - 1]);
            acc = if k % 2 == 1 { acc.plus(&term) } else { acc.minus(&term) };
        }
        lambdas.push(acc.scale(&ratio(1, i as i64)));
    }
    Ok(lambdas)
}

/// Solves `Λ_i = Σ_j 𝒯_j 𝒯_{i−j}` with `𝒯_0 = 1` and `𝒯_i = 0` for `i > d`, where
/// `Λ = [Λ_0, ..., Λ_{2d}]`. Rows `d < i ≤ 2d` are checked for consistency.
pub fn pfaffian_coeffs_from_lambdas<R: Ring>(lv: &[R]) -> Result<Vec<R>> {
    if lv.len() < 3 || lv.len().is_multiple_of(2) {
        return Err(Error::Argument(format!("expected [Λ_0..Λ_2d] with d ≥ 1, got {} entries", lv.len())));
    }
    if !lv[0].is_one() {
        return Err(Error::Argument("Λ_0 must be 1".into()));
    }
    let d = (lv.len() - 1) / 2;
    let half = ratio(1, 2);
    let mut t = vec![R::one()];
    for i in 1..=d {
        let mut rest = lv[i].clone();
        for j in 1..i {
            rest = rest.minus(&t[j].times(&t[i - j]));
        }
        t.push(rest.scale(&half));
    }
    for i in d + 1..=2 * d {
        let conv = (i - d..=d).fold(R::zero(), |acc, j| acc.plus(&t[j].times(&t[i - j])));
        if conv != lv[i] {
            return Err(Error::NotSymmetricSpectrum(i));
        }
    }
    Ok(t)
}

/// Power traces `[tr M, tr M², ..., tr M^n]`.
pub fn power_traces<R: Ring>(m: &Matrix<R>, n: usize) -> Result<Vec<R>> {
    let mut out = Vec::with_capacity(n);
    let mut p = m.clone();
    for k in 0..n {
        if k > 0 {
            p = p.mul(m)?;
        }
        out.push(p.trace()?);
    }
    Ok(out)
}

fn check_d4<R: Ring>(lv: &[R], traces: &[R]) -> Result<()> {
    if lv.len() != 9 {
        return Err(Error::Dimension(format!("expected 9 lambda coefficients for 2d = 8, got {}", lv.len())));
    }
    if traces.len() < 4 {
        return Err(Error::Dimension(format!("expected 4 power traces, got {}", traces.len())));
    }
    Ok(())
}

fn combine<R: Ring>(terms: &[(i64, i64, R)]) -> R {
    terms
        .iter()
        .fold(R::zero(), |acc, (n, d, m)| acc.plus(&m.scale(&ratio(*n, *d))))
}

/// The published closed forms for `𝒯_4` when `2d = 8`, as `(from Λ, from traces)`:
/// `½Λ₄ − ¼Λ₁Λ₃ + 1/16 Λ₁²Λ₂ + ⅛Λ₂² − 3/128 Λ₁⁴` and
/// `7/384 s₁⁴ − 3/32 s₁²s₂ + 1/12 s₁s₃ + 3/32 s₂² − ⅛ s₄`.
///
/// These two agree with each other but not with the recursion; at `M = Id₈`
/// both give 37. See [`closed_form_d4`] for the forms that match.
pub fn closed_form_check_d4<R: Ring>(lv: &[R], traces: &[R]) -> Result<(R, R)> {
    check_d4(lv, traces)?;
    let (l1, l2, l3, l4) = (&lv[1], &lv[2], &lv[3], &lv[4]);
    let (s1, s2, s3, s4) = (&traces[0], &traces[1], &traces[2], &traces[3]);
    let from_lambdas = combine(&[
        (1, 2, l4.clone()),
        (-1, 4, l1.times(l3)),
        (1, 16, l1.times(l1).times(l2)),
        (1, 8, l2.times(l2)),
        (-3, 128, l1.pow(4)),
    ]);
    let from_traces = combine(&[
        (7, 384, s1.pow(4)),
        (-3, 32, s1.times(s1).times(s2)),
        (1, 12, s1.times(s3)),
        (3, 32, s2.times(s2)),
        (-1, 8, s4.clone()),
    ]);
    Ok((from_lambdas, from_traces))
}

/// `𝒯_4` for `2d = 8` in closed form, solved from the recursion and from Newton's identities:
/// `½Λ₄ − ¼Λ₁Λ₃ + 3/16 Λ₁²Λ₂ − ⅛Λ₂² − 5/128 Λ₁⁴` and
/// `1/384 s₁⁴ − 1/32 s₁²s₂ + 1/12 s₁s₃ + 1/32 s₂² − ⅛ s₄`.
pub fn closed_form_d4<R: Ring>(lv: &[R], traces: &[R]) -> Result<(R, R)> {
    check_d4(lv, traces)?;
    let (l1, l2, l3, l4) = (&lv[1], &lv[2], &lv[3], &lv[4]);
    let (s1, s2, s3, s4) = (&traces[0], &traces[1], &traces[2], &traces[3]);
    let from_lambdas = combine(&[
        (1, 2, l4.clone()),
        (-1, 4, l1.times(l3)),
        (3, 16, l1.times(l1).times(l2)),
        (-1, 8, l2.times(l2)),
        (-5, 128, l1.pow(4)),
    ]);
    let from_traces = combine(&[
        (1, 384, s1.pow(4)),
        (-1, 32, s1.times(s1).times(s2)),
        (1, 12, s1.times(s3)),
        (1, 32, s2.times(s2)),
        (-1, 8, s4.clone()),
    ]);
    Ok((from_lambdas, from_traces))
}

/// `𝒯_i(Id) = C(d, i)`.
pub fn binomial_pfaffian_coeffs(d: usize) -> Vec<Rational> {
    (0..=d as u64).map(|i| binomial(d as u64, i)).collect()
}

/// Residuals of the two trace identities for `γ ∈ SL₂`, with `t = tr`:
/// `t(γ)² + 2t(γ)t(γ⁻¹) + t(γ⁻¹)² − 2t(γ²) − 2t(γ⁻²) − 8` and `4t(γ)² − 4t(γ²) − 8`.
pub fn sl2_identity_residuals(g: &Matrix<Rational>) -> Result<(Rational, Rational)> {
    if g.rows() != 2 || g.cols() != 2 {
        return Err(Error::Dimension("expected a 2x2 matrix".into()));
    }
    if !g.det()?.is_one() {
        return Err(Error::Argument("matrix is not in SL2".into()));
    }
    let inv = g.inverse()?;
    let t = g.trace()?;
    let ti = inv.trace()?;
    let t2 = g.mul(g)?.trace()?;
    let ti2 = inv.mul(&inv)?.trace()?;
    let eight = Rational::from_int(8);
    let first = &t * &t + Rational::from_int(2) * &t * &ti + &ti * &ti
        - Rational::from_int(2) * &t2
        - Rational::from_int(2) * &ti2
        - &eight;
    let second = Rational::from_int(4) * &t * &t - Rational::from_int(4) * &t2 - eight;
    Ok((first, second))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RepKind {
    Sp,
    GSp,
}

/// Images of free generators in `GSp_2d(ℚ)`, with `γ* = λ(γ)γ⁻¹` on the group algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct InvolutiveRepresentation {
    ctx: SymplecticContext,
    kind: RepKind,
    generators: Vec<Matrix<Rational>>,
    inverses: Vec<Matrix<Rational>>,
    lambdas: Vec<Rational>,
}

impl InvolutiveRepresentation {
    pub fn new(d: usize, kind: RepKind, generators: Vec<Matrix<Rational>>, lambdas: Vec<Rational>) -> Result<Self> {
        let ctx = SymplecticContext::new(d)?;
        if generators.len() != lambdas.len() {
            return Err(Error::Argument(format!(
                "{} generators but {} similitude values",
                generators.len(),
                lambdas.len()
            )));
        }
        let mut inverses = Vec::with_capacity(generators.len());
        for (i, (g, l)) in generators.iter().zip(&lambdas).enumerate() {
            if l.is_zero() {
                return Err(Error::Singular(format!("similitude of g{} is zero", i + 1)));
            }
            if kind == RepKind::Sp && !l.is_one() {
                return Err(Error::NotSimilitude(format!("g{} has similitude {l} in an Sp representation", i + 1)));
            }
            let gj = ctx.symplectic_transpose(g)?;
            if gj.mul(g)? != Matrix::scalar(ctx.dim(), l.clone()) {
                return Err(Error::NotSimilitude(format!("g{} does not satisfy M^j M = {l}·Id", i + 1)));
            }
            inverses.push(gj.scale(&l.recip()));
        }
        Ok(InvolutiveRepresentation { ctx, kind, generators, inverses, lambdas })
    }

    /// Generators with similitudes read off from the matrices.
    pub fn from_generators(d: usize, kind: RepKind, generators: Vec<Matrix<Rational>>) -> Result<Self> {
        let ctx = SymplecticContext::new(d)?;
        let lambdas = generators.iter().map(|g| ctx.similitude(g)).collect::<Result<Vec<_>>>()?;
        Self::new(d, kind, generators, lambdas)
    }

    /// `k` generators all mapped to the identity.
    pub fn trivial(d: usize, kind: RepKind, k: usize) -> Result<Self> {
        Self::new(d, kind, vec![Matrix::identity(2 * d); k], vec![Rational::one(); k])
    }

    pub fn ctx(&self) -> &SymplecticContext {
        &self.ctx
    }

    pub fn d(&self) -> usize {
        self.ctx.d()
    }

    pub fn kind(&self) -> RepKind {
        self.kind
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Matrix<Rational>] {
        &self.generators
    }

    pub fn lambdas(&self) -> &[Rational] {
        &self.lambdas
    }

    fn check_word(&self, w: &Word) -> Result<()> {
        if w.generator_bound() > self.generators.len() {
            return Err(Error::Generator(format!(
                "word {w} uses g{} but the representation has {} generators",
                w.generator_bound(),
                self.generators.len()
            )));
        }
        Ok(())
    }

    pub fn image(&self, w: &Word) -> Result<Matrix<Rational>> {
        self.check_word(w)?;
        let mut acc = Matrix::identity(self.ctx.dim());
        for l in w.letters() {
            let m = if l.inverse { &self.inverses[l.gen] } else { &self.generators[l.gen] };
            acc = acc.mul(m)?;
        }
        Ok(acc)
    }

    /// `λ(w)`, multiplicative along the word.
    pub fn lambda(&self, w: &Word) -> Result<Rational> {
        self.check_word(w)?;
        Ok(w.letters().iter().fold(Rational::one(), |acc, l| {
            if l.inverse {
                acc / &self.lambdas[l.gen]
            } else {
                acc * &self.lambdas[l.gen]
            }
        }))
    }

    /// `ρ(x)`, extended linearly over the coefficient ring.
    pub fn image_of<R: Ring>(&self, x: &GroupAlgebraElement<R>) -> Result<Matrix<R>> {
        let n = self.ctx.dim();
        let mut acc = Matrix::zeros(n, n);
        for (w, c) in x.terms() {
            acc = acc.add(&self.image(w)?.lift::<R>().scale(c))?;
        }
        Ok(acc)
    }

    /// Linear extension of `w ↦ λ(w)·w⁻¹`.
    pub fn star<R: Ring>(&self, x: &GroupAlgebraElement<R>) -> Result<GroupAlgebraElement<R>> {
        let mut terms = Vec::new();
        for (w, c) in x.terms() {
            terms.push((w.inverse(), c.scale(&self.lambda(w)?)));
        }
        Ok(GroupAlgebraElement::from_terms(terms))
    }

    /// Every generator image replaced by `g·M·g⁻¹`.
    pub fn conjugated(&self, g: &Matrix<Rational>) -> Result<Self> {
        let g_inv = g.inverse()?;
        let gens = self
            .generators
            .iter()
            .map(|m| g.mul(m)?.mul(&g_inv))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.d(), self.kind, gens, self.lambdas.clone())
    }

    /// `{"d": n, "kind": "Sp"|"GSp", "generators": [...], "lambdas": [...]}`; `lambdas` may be
    /// omitted, in which case they are read off from the generators.
    pub fn from_json(v: &Value) -> Result<Self> {
        let d = v
            .get("d")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("representation needs a positive integer \"d\"".into()))? as usize;
        let kind: RepKind = serde_json::from_value(v.get("kind").cloned().unwrap_or(json!("Sp")))
            .map_err(|e| Error::Parse(format!("kind: {e}")))?;
        let generators = v
            .get("generators")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("representation needs a \"generators\" array".into()))?
            .iter()
            .map(matrix_from_value)
            .collect::<Result<Vec<_>>>()?;
        match v.get("lambdas") {
            Some(ls) => {
                let lambdas = ls
                    .as_array()
                    .ok_or_else(|| Error::Parse("\"lambdas\" must be an array".into()))?
                    .iter()
                    .map(rational_from_value)
                    .collect::<Result<Vec<_>>>()?;
                Self::new(d, kind, generators, lambdas)
            }
            None => Self::from_generators(d, kind, generators),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "d": self.d(),
            "kind": self.kind,
            "generators": self.generators.iter().map(matrix_to_value).collect::<Vec<_>>(),
            "lambdas": self.lambdas.iter().map(rational_to_value).collect::<Vec<_>>(),
        })
    }
}

/// `D(x) = det ρ(x)`.
pub fn eval_det_law(rep: &InvolutiveRepresentation, x: &GroupAlgebraElement<MultiPoly>) -> Result<MultiPoly> {
    rep.image_of(x)?.det()
}

/// `P(x) = Pf(ρ(x)J)/Pf(J)` for `x* = x`.
pub fn eval_pf_law(rep: &InvolutiveRepresentation, x: &GroupAlgebraElement<MultiPoly>) -> Result<MultiPoly> {
    if rep.star(x)? != *x {
        return Err(Error::Symmetry);
    }
    rep.ctx().reduced_pfaffian(&rep.image_of(x)?)
}

pub fn polarization_var(i: usize) -> String {
    format!("t{}", i + 1)
}

/// Coefficient of `t^α` in `χ^P(s, s)` for `s = Σ t_i M_i`, where `χ^P` is the Pfaffian
/// characteristic polynomial relative to the alternating form `form` with Pfaffian `pf_form`.
pub fn chi_alpha_matrices<R: PolyRing>(
    mats: &[Matrix<R>],
    form: &Matrix<R>,
    pf_form: &Rational,
    alpha: &[u32],
) -> Result<Matrix<R>> {
    if mats.is_empty() || mats.len() != alpha.len() {
        return Err(Error::Argument(format!("{} elements but exponent vector of length {}", mats.len(), alpha.len())));
    }
    let n = form.rows();
    if alpha.iter().sum::<u32>() as usize * 2 != n {
        return Err(Error::Argument(format!("exponents must sum to {}", n / 2)));
    }
    let names: Vec<String> = (0..mats.len()).map(polarization_var).collect();
    for m in mats {
        if m.entries().iter().any(|e| names.iter().any(|t| e.mentions(t))) {
            return Err(Error::Variable("matrix entries already use the polarization variables".into()));
        }
    }
    let mut s = Matrix::zeros(n, n);
    for (m, t) in mats.iter().zip(&names) {
        s = s.add(&m.scale(&R::variable(t)))?;
    }
    let coeffs = pfaffian_char_coeffs_wrt(&s, form, pf_form)
        .map_err(|e| match e {
            Error::Structure(_) => Error::Argument("elements are not symmetric".into()),
            other => other,
        })?;
    let chi = pfaffian_char_at(&coeffs, &s)?;
    Ok(chi.map(|e| {
        names
            .iter()
            .zip(alpha)
            .fold(e.clone(), |acc, (t, &a)| acc.coeff_of_power(t, a))
    }))
}

/// `χ^P_α(r_1, ..., r_n)` through the representation: zero whenever the Pfaffian
/// Cayley–Hamilton theorem applies.
pub fn chi_alpha(
    rep: &InvolutiveRepresentation,
    elems: &[GroupAlgebraElement<MultiPoly>],
    alpha: &[u32],
) -> Result<Matrix<MultiPoly>> {
    let mut mats = Vec::with_capacity(elems.len());
    for r in elems {
        if rep.star(r)? != *r {
            return Err(Error::Argument(format!("element {r} is not symmetric")));
        }
        mats.push(rep.image_of(r)?);
    }
    let ctx = rep.ctx();
    chi_alpha_matrices(&mats, &ctx.j().lift(), ctx.pfaffian_of_j(), alpha)
}
