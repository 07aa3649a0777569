//! Symplectic generalized matrix algebras realized as block matrices over
//! polynomial rings modulo monomial ideals.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::det_laws::{chi_alpha_matrices, pfaffian_coeffs_from_lambdas, polarization_var};
use crate::error::{Error, Result};
use crate::json::poly_from_value;
use crate::matrix::Matrix;
use crate::poly::{Exponents, MultiPoly};
use crate::random::Sampler;
use crate::ring::{ratio, PolyRing, Rational, Ring};
use crate::symplectic::{pfaffian, pfaffian_char_at, pfaffian_char_coeffs_wrt, CHAR_VAR};

/// An ideal generated by monomials, each given as `(variable, exponent)` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MonomialIdeal {
    generators: Vec<BTreeMap<String, u32>>,
}

impl MonomialIdeal {
    pub fn new(generators: Vec<BTreeMap<String, u32>>) -> Result<Self> {
        for g in &generators {
            if g.values().all(|&e| e == 0) {
                return Err(Error::Argument("the unit monomial cannot be nilpotent".into()));
            }
        }
        Ok(MonomialIdeal { generators })
    }

    pub fn generators(&self) -> &[BTreeMap<String, u32>] {
        &self.generators
    }

    fn contains_monomial(&self, vars: &[String], exp: &Exponents) -> bool {
        self.generators.iter().any(|g| {
            g.iter().all(|(name, &k)| {
                k == 0
                    || vars
                        .binary_search(name)
                        .map(|i| exp[i] >= k)
                        .unwrap_or(false)
            })
        })
    }

    pub fn reduce(&self, p: MultiPoly) -> MultiPoly {
        if self.generators.is_empty() || !p.terms().any(|(e, _)| self.contains_monomial(p.vars(), e)) {
            return p;
        }
        let vars = p.vars().to_vec();
        let kept: Vec<(Exponents, Rational)> = p
            .terms()
            .filter(|(e, _)| !self.contains_monomial(&vars, e))
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        MultiPoly::from_terms(&vars, kept).expect("variables unchanged")
    }
}

/// An element of `ℚ[vars]/I` for a monomial ideal `I`, kept reduced.
#[derive(Clone, Debug)]
pub struct QuotientPoly {
    poly: MultiPoly,
    ideal: Option<Arc<MonomialIdeal>>,
}

impl QuotientPoly {
    pub fn new(poly: MultiPoly, ideal: &Arc<MonomialIdeal>) -> Self {
        QuotientPoly { poly: ideal.reduce(poly), ideal: Some(ideal.clone()) }
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    fn with(&self, other: &Self, poly: MultiPoly) -> Self {
        let ideal = self.ideal.clone().or_else(|| other.ideal.clone());
        let poly = match &ideal {
            Some(i) => i.reduce(poly),
            None => poly,
        };
        QuotientPoly { poly, ideal }
    }
}

impl PartialEq for QuotientPoly {
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly
    }
}

impl fmt::Display for QuotientPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

impl std::ops::Add for QuotientPoly {
    type Output = QuotientPoly;
    fn add(self, rhs: QuotientPoly) -> QuotientPoly {
        self.plus(&rhs)
    }
}

impl std::ops::Mul for QuotientPoly {
    type Output = QuotientPoly;
    fn mul(self, rhs: QuotientPoly) -> QuotientPoly {
        self.times(&rhs)
    }
}

impl Zero for QuotientPoly {
    fn zero() -> Self {
        QuotientPoly { poly: MultiPoly::zero(), ideal: None }
    }
    fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
}

impl One for QuotientPoly {
    fn one() -> Self {
        QuotientPoly { poly: MultiPoly::one(), ideal: None }
    }
}

impl Ring for QuotientPoly {
    fn plus(&self, other: &Self) -> Self {
        self.with(other, self.poly.plus(&other.poly))
    }
    fn minus(&self, other: &Self) -> Self {
        self.with(other, self.poly.minus(&other.poly))
    }
    fn times(&self, other: &Self) -> Self {
        self.with(other, self.poly.times(&other.poly))
    }
    fn negated(&self) -> Self {
        QuotientPoly { poly: self.poly.negated(), ideal: self.ideal.clone() }
    }
    fn from_rational(q: &Rational) -> Self {
        QuotientPoly { poly: MultiPoly::constant(q.clone()), ideal: None }
    }
    fn scale(&self, q: &Rational) -> Self {
        QuotientPoly { poly: self.poly.scale(q), ideal: self.ideal.clone() }
    }
}

impl PolyRing for QuotientPoly {
    fn variable(name: &str) -> Self {
        QuotientPoly { poly: MultiPoly::var(name), ideal: None }
    }
    fn mentions(&self, name: &str) -> bool {
        self.poly.mentions(name)
    }
    fn coeff_of_power(&self, var: &str, k: u32) -> Self {
        QuotientPoly { poly: self.poly.coeff_of_power(var, k), ideal: self.ideal.clone() }
    }
    fn degree_in(&self, var: &str) -> u32 {
        self.poly.degree_in(var)
    }
}

/// The combinatorial type `(I0, I1, I2, σ, (d_i))`; block indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GmaType {
    pub i0: Vec<usize>,
    pub i1: Vec<usize>,
    pub i2: Vec<usize>,
    /// `sigma[i-1] = σ(i)`.
    pub sigma: Vec<usize>,
    pub dims: Vec<usize>,
}

impl GmaType {
    pub fn validate(&self) -> Result<()> {
        let r = self.dims.len();
        let bad = |msg: String| Err(Error::Type(msg));
        if r == 0 {
            return bad("at least one block is needed".into());
        }
        if self.sigma.len() != r {
            return bad(format!("sigma has {} entries for {r} blocks", self.sigma.len()));
        }
        if self.sigma.iter().any(|&s| s == 0 || s > r) {
            return bad("sigma must map {1..r} to itself".into());
        }
        for i in 1..=r {
            if self.sigma_of(self.sigma_of(i)) != i {
                return bad(format!("sigma is not an involution at {i}"));
            }
        }
        let mut owner = vec![None; r];
        for (set, name) in [(&self.i0, 0u8), (&self.i1, 1), (&self.i2, 2)] {
            for &i in set {
                if i == 0 || i > r {
                    return bad(format!("block index {i} out of range"));
                }
                if owner[i - 1].replace(name).is_some() {
                    return bad(format!("block {i} listed twice"));
                }
            }
        }
        if let Some(i) = owner.iter().position(Option::is_none) {
            return bad(format!("block {} is in none of I0, I1, I2", i + 1));
        }
        for &i in &self.i0 {
            if self.sigma_of(i) != i {
                return bad(format!("sigma must fix {i} in I0"));
            }
            if self.dims[i - 1] % 2 == 1 {
                return bad(format!("block {i} in I0 has odd size"));
            }
        }
        for &i in &self.i1 {
            if owner[self.sigma_of(i) - 1] != Some(2) {
                return bad(format!("sigma({i}) is not in I2"));
            }
        }
        for i in 1..=r {
            if self.dims[i - 1] == 0 {
                return bad(format!("block {i} is empty"));
            }
            if self.dims[self.sigma_of(i) - 1] != self.dims[i - 1] {
                return bad(format!("d_{i} differs from d_sigma({i})"));
            }
        }
        Ok(())
    }

    pub fn sigma_of(&self, i: usize) -> usize {
        self.sigma[i - 1]
    }

    pub fn blocks(&self) -> usize {
        self.dims.len()
    }

    pub fn total(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn offset(&self, i: usize) -> usize {
        self.dims[..i - 1].iter().sum()
    }

    /// 1-based block containing the 0-based row or column index `k`.
    pub fn block_of(&self, k: usize) -> usize {
        let mut acc = 0;
        for (i, d) in self.dims.iter().enumerate() {
            acc += d;
            if k < acc {
                return i + 1;
            }
        }
        panic!("index {k} outside the block structure")
    }
}

/// `J_δ`: block `(i, σ(i))` is `J` for `i ∈ I0`, `−Id` for `i ∈ I1`, `Id` for `i ∈ I2`.
pub fn build_j_delta(t: &GmaType) -> Result<Matrix<Rational>> {
    t.validate()?;
    let n = t.total();
    let mut j = Matrix::zeros(n, n);
    for i in 1..=t.blocks() {
        let (r0, c0, di) = (t.offset(i), t.offset(t.sigma_of(i)), t.dims[i - 1]);
        if t.i0.contains(&i) {
            let h = di / 2;
            for k in 0..h {
                j.set(r0 + k, c0 + h + k, Rational::one());
                j.set(r0 + h + k, c0 + k, -Rational::one());
            }
        } else {
            let v = if t.i1.contains(&i) { -Rational::one() } else { Rational::one() };
            for k in 0..di {
                j.set(r0 + k, c0 + k, v.clone());
            }
        }
    }
    Ok(j)
}

type Monomial = Vec<(String, u32)>;

/// A type together with block spans `𝒜_{i,j}` inside `ℚ[base_vars]/(nil_monomials)` and
/// signs `ε_{i,j}` with `τ_{i,j} = ε_{i,j}·id`.
#[derive(Clone, Debug)]
pub struct GmaSpec {
    ty: GmaType,
    base_vars: Vec<String>,
    ideal: Arc<MonomialIdeal>,
    nil_monomials: Vec<Exponents>,
    blocks: BTreeMap<(usize, usize), Vec<MultiPoly>>,
    tau_signs: BTreeMap<(usize, usize), i8>,
    j_delta: Matrix<Rational>,
    pf_j_delta: Rational,
}

/// Outcome of [`GmaSpec::validate_standard_gma`].
#[derive(Clone, Debug, PartialEq)]
pub struct GmaValidation {
    pub violations: Vec<String>,
}

impl GmaValidation {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Outcome of [`GmaSpec::check_sch_condition`]; the witness is the first embedded
/// `x ∈ 𝒜_{i,σ(i)}` with `x* ≠ −x`.
#[derive(Clone, Debug, PartialEq)]
pub struct SchReport {
    pub holds: bool,
    pub witness: Option<SchWitness>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SchWitness {
    pub block: (usize, usize),
    pub element: MultiPoly,
    pub image: Matrix<QuotientPoly>,
}

fn key(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Parse(format!("block key `{s}` must look like \"i,j\""));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn usize_list(v: &Value, field: &str) -> Result<Vec<usize>> {
    match v.get(field) {
        None => Ok(Vec::new()),
        Some(x) => serde_json::from_value(x.clone()).map_err(|e| Error::Parse(format!("{field}: {e}"))),
    }
}

impl GmaSpec {
    pub fn new(
        ty: GmaType,
        base_vars: Vec<String>,
        nil_monomials: Vec<Exponents>,
        blocks: BTreeMap<(usize, usize), Vec<MultiPoly>>,
        tau_signs: BTreeMap<(usize, usize), i8>,
    ) -> Result<Self> {
        let j_delta = build_j_delta(&ty)?;
        let pf_j_delta = pfaffian(&j_delta)?;
        let r = ty.blocks();
        let mut gens = Vec::new();
        for m in &nil_monomials {
            if m.len() != base_vars.len() {
                return Err(Error::Dimension(format!(
                    "nil monomial {m:?} has {} exponents for {} base variables",
                    m.len(),
                    base_vars.len()
                )));
            }
            gens.push(base_vars.iter().cloned().zip(m.iter().copied()).collect());
        }
        let ideal = Arc::new(MonomialIdeal::new(gens)?);
        for (&(i, j), span) in &blocks {
            if i == 0 || j == 0 || i > r || j > r {
                return Err(Error::Argument(format!("block ({i},{j}) out of range")));
            }
            for p in span {
                if let Some(v) = p.vars().iter().find(|v| !base_vars.contains(v) && p.mentions(v)) {
                    return Err(Error::Variable(format!("{v} is not a base variable")));
                }
            }
        }
        for (&(i, j), &e) in &tau_signs {
            if i == 0 || j == 0 || i > r || j > r {
                return Err(Error::Argument(format!("sign ({i},{j}) out of range")));
            }
            if e != 1 && e != -1 {
                return Err(Error::Argument(format!("sign ({i},{j}) must be +1 or -1")));
            }
        }
        let blocks = blocks
            .into_iter()
            .map(|(k, span)| (k, span.into_iter().map(|p| ideal.reduce(p)).filter(|p| !p.is_zero()).collect()))
            .collect();
        Ok(GmaSpec { ty, base_vars, ideal, nil_monomials, blocks, tau_signs, j_delta, pf_j_delta })
    }

    /// The JSON form `{"I0", "I1", "I2", "sigma", "dims", "base_vars", "nil_monomials",
    /// "blocks": {"i,j": [poly, ...]}, "tau_signs": {"i,j": ±1}}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        if !v.is_object() {
            return Err(Error::Parse("GMA spec must be an object".into()));
        }
        let ty = GmaType {
            i0: usize_list(v, "I0")?,
            i1: usize_list(v, "I1")?,
            i2: usize_list(v, "I2")?,
            sigma: usize_list(v, "sigma")?,
            dims: usize_list(v, "dims")?,
        };
        let base_vars: Vec<String> = match v.get("base_vars") {
            None => Vec::new(),
            Some(x) => serde_json::from_value(x.clone()).map_err(|e| Error::Parse(format!("base_vars: {e}")))?,
        };
        let nil: Vec<Exponents> = match v.get("nil_monomials") {
            None => Vec::new(),
            Some(x) => serde_json::from_value(x.clone()).map_err(|e| Error::Parse(format!("nil_monomials: {e}")))?,
        };
        let mut blocks = BTreeMap::new();
        if let Some(b) = v.get("blocks") {
            let b = b.as_object().ok_or_else(|| Error::Parse("blocks must be an object".into()))?;
            for (k, span) in b {
                let span = span
                    .as_array()
                    .ok_or_else(|| Error::Parse(format!("block {k} must list polynomials")))?
                    .iter()
                    .map(poly_from_value)
                    .collect::<Result<Vec<_>>>()?;
                blocks.insert(key(k)?, span);
            }
        }
        let mut signs = BTreeMap::new();
        if let Some(s) = v.get("tau_signs") {
            let s = s.as_object().ok_or_else(|| Error::Parse("tau_signs must be an object".into()))?;
            for (k, e) in s {
                let e = e
                    .as_i64()
                    .filter(|e| e.abs() == 1)
                    .ok_or_else(|| Error::Parse(format!("sign {k} must be 1 or -1")))?;
                signs.insert(key(k)?, e as i8);
            }
        }
        GmaSpec::new(ty, base_vars, nil, blocks, signs)
    }

    pub fn to_json(&self) -> Value {
        let blocks: Map<String, Value> = self
            .blocks
            .iter()
            .map(|((i, j), span)| (format!("{i},{j}"), json!(span.iter().map(|p| p.to_string()).collect::<Vec<_>>())))
            .collect();
        let signs: Map<String, Value> = self
            .tau_signs
            .iter()
            .map(|((i, j), e)| (format!("{i},{j}"), json!(e)))
            .collect();
        json!({
            "I0": self.ty.i0, "I1": self.ty.i1, "I2": self.ty.i2,
            "sigma": self.ty.sigma, "dims": self.ty.dims,
            "base_vars": self.base_vars, "nil_monomials": self.nil_monomials,
            "blocks": blocks, "tau_signs": signs,
        })
    }

    /// Type `I1 = {1}, I2 = {2}` with `𝒜_{1,2} = ℚu`, `𝒜_{2,1} = ℚv` in `ℚ[u,v]/(uv)` and
    /// `ε_{1,2} = ε_{2,1} = −1`: Cayley–Hamilton but not symplectic Cayley–Hamilton.
    pub fn counterexample() -> Self {
        let v = json!({
            "I0": [], "I1": [1], "I2": [2], "sigma": [2, 1], "dims": [1, 1],
            "base_vars": ["u", "v"], "nil_monomials": [[1, 1]],
            "blocks": {"1,2": ["u"], "2,1": ["v"]},
            "tau_signs": {"1,2": -1, "2,1": -1},
        });
        GmaSpec::from_json(&v).expect("well-formed fixture")
    }

    /// Type `I0 = {1}` (size 2), `I1 = {2}`, `I2 = {3}` (size 1 each), every block `ℚ`, all `ε = +1`.
    pub fn standard_example() -> Self {
        let mut blocks = Map::new();
        for i in 1..=3 {
            for j in 1..=3 {
                blocks.insert(format!("{i},{j}"), json!(["1"]));
            }
        }
        let v = json!({"I0": [1], "I1": [2], "I2": [3], "sigma": [1, 3, 2], "dims": [2, 1, 1], "blocks": blocks});
        GmaSpec::from_json(&v).expect("well-formed fixture")
    }

    pub fn gma_type(&self) -> &GmaType {
        &self.ty
    }

    pub fn j_delta(&self) -> &Matrix<Rational> {
        &self.j_delta
    }

    pub fn pfaffian_of_j_delta(&self) -> &Rational {
        &self.pf_j_delta
    }

    pub fn base_vars(&self) -> &[String] {
        &self.base_vars
    }

    pub fn ideal(&self) -> &Arc<MonomialIdeal> {
        &self.ideal
    }

    /// Half the total size.
    pub fn d(&self) -> usize {
        self.ty.total() / 2
    }

    /// The spanning set of `𝒜_{i,j}`; diagonal blocks default to `ℚ·1`, others to zero.
    pub fn span(&self, i: usize, j: usize) -> Vec<MultiPoly> {
        match self.blocks.get(&(i, j)) {
            Some(s) => s.clone(),
            None if i == j => vec![MultiPoly::one()],
            None => Vec::new(),
        }
    }

    pub fn sign(&self, i: usize, j: usize) -> i8 {
        self.tau_signs.get(&(i, j)).copied().unwrap_or(1)
    }

    pub fn lift(&self, p: MultiPoly) -> QuotientPoly {
        QuotientPoly::new(p, &self.ideal)
    }

    /// Whether `p` lies in the `ℚ`-span of `𝒜_{i,j}`, treating non-base variables as scalars.
    pub fn in_span(&self, p: &MultiPoly, i: usize, j: usize) -> bool {
        let p = self.ideal.reduce(p.clone());
        if p.is_zero() {
            return true;
        }
        let basis = self.span(i, j);
        let base_part = |q: &MultiPoly| -> BTreeMap<Monomial, BTreeMap<Monomial, Rational>> {
            let mut out: BTreeMap<_, BTreeMap<_, Rational>> = BTreeMap::new();
            for (e, c) in q.terms() {
                let (mut inner, mut outer) = (Vec::new(), Vec::new());
                for (v, &k) in q.vars().iter().zip(e) {
                    if k > 0 {
                        if self.base_vars.contains(v) {
                            inner.push((v.clone(), k));
                        } else {
                            outer.push((v.clone(), k));
                        }
                    }
                }
                out.entry(outer).or_default().insert(inner, c.clone());
            }
            out
        };
        let basis_coords: Vec<BTreeMap<Vec<(String, u32)>, Rational>> = basis
            .iter()
            .map(|b| base_part(b).remove(&Vec::new()).unwrap_or_default())
            .collect();
        base_part(&p).values().all(|target| {
            let mut monos: Vec<&Vec<(String, u32)>> = target.keys().collect();
            for b in &basis_coords {
                monos.extend(b.keys());
            }
            monos.sort();
            monos.dedup();
            let row = |c: &BTreeMap<Vec<(String, u32)>, Rational>| {
                monos.iter().map(|m| c.get(*m).cloned().unwrap_or_else(Rational::zero)).collect::<Vec<_>>()
            };
            let rows: Vec<Vec<Rational>> = basis_coords.iter().map(row).collect();
            let rank_without = if rows.is_empty() { 0 } else { Matrix::from_rows(rows.clone()).expect("rect").rank() };
            let mut with = rows;
            with.push(row(target));
            Matrix::from_rows(with).expect("rect").rank() == rank_without
        })
    }

    fn check_shape<R: Ring>(&self, m: &Matrix<R>) -> Result<()> {
        let n = self.ty.total();
        if m.rows() != n || m.cols() != n {
            return Err(Error::Dimension(format!("expected {n}x{n} block matrix, got {}x{}", m.rows(), m.cols())));
        }
        Ok(())
    }

    /// Errors with the first entry outside its block span.
    pub fn check_membership(&self, m: &Matrix<QuotientPoly>) -> Result<()> {
        self.check_shape(m)?;
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                if !self.in_span(m.get(r, c).poly(), self.ty.block_of(r), self.ty.block_of(c)) {
                    return Err(Error::Membership { row: r, col: c });
                }
            }
        }
        Ok(())
    }

    /// `M* = J_δ τ(M)ᵀ J_δ⁻¹`.
    pub fn delta_involution(&self, m: &Matrix<QuotientPoly>) -> Result<Matrix<QuotientPoly>> {
        self.check_membership(m)?;
        Ok(self.involution_unchecked(m))
    }

    fn involution_unchecked(&self, m: &Matrix<QuotientPoly>) -> Matrix<QuotientPoly> {
        let tau = Matrix::from_fn(m.rows(), m.cols(), |r, c| {
            let e = m.get(r, c);
            if self.sign(self.ty.block_of(r), self.ty.block_of(c)) < 0 {
                e.negated()
            } else {
                e.clone()
            }
        });
        let j: Matrix<QuotientPoly> = self.j_delta.lift();
        let j_inv = j.negated();
        j.mul(&tau.transpose()).and_then(|x| x.mul(&j_inv)).expect("square")
    }

    pub fn validate_standard_gma(&self) -> GmaValidation {
        let mut violations = Vec::new();
        let r = self.ty.blocks();
        for i in 1..=r {
            let span = self.span(i, i);
            let is_scalars = span.iter().all(|p| p.as_constant().is_some()) && span.iter().any(|p| !p.is_zero());
            if !is_scalars {
                violations.push(format!("A_{i},{i} is not Q*1"));
            }
        }
        for i in 1..=r {
            for j in 1..=r {
                let (si, sj) = (self.ty.sigma_of(i), self.ty.sigma_of(j));
                let same = self.span(i, j).iter().all(|p| self.in_span(p, sj, si))
                    && self.span(sj, si).iter().all(|p| self.in_span(p, i, j));
                if !same {
                    violations.push(format!("A_{i},{j} differs from A_{sj},{si}"));
                }
                if self.sign(sj, si) * self.sign(i, j) != 1 {
                    violations.push(format!("eps_{sj},{si} * eps_{i},{j} != 1"));
                }
            }
            if self.sign(i, i) != 1 {
                violations.push(format!("eps_{i},{i} must be 1"));
            }
        }
        for i in 1..=r {
            for j in 1..=r {
                for k in 1..=r {
                    let mut nonzero = false;
                    let mut closed = true;
                    for a in self.span(i, j) {
                        for b in self.span(j, k) {
                            let prod = self.ideal.reduce(a.times(&b));
                            if !prod.is_zero() {
                                nonzero = true;
                                if !self.in_span(&prod, i, k) {
                                    closed = false;
                                }
                            }
                        }
                    }
                    if !closed {
                        violations.push(format!("A_{i},{j} * A_{j},{k} is not contained in A_{i},{k}"));
                    }
                    if nonzero && self.sign(j, k) * self.sign(i, j) != self.sign(i, k) {
                        violations.push(format!("eps_{j},{k} * eps_{i},{j} != eps_{i},{k}"));
                    }
                }
            }
        }
        GmaValidation { violations }
    }

    /// `T_E(M)`, the sum of the traces of the diagonal blocks.
    pub fn trace(&self, m: &Matrix<QuotientPoly>) -> Result<QuotientPoly> {
        self.check_shape(m)?;
        m.trace()
    }

    pub fn det(&self, m: &Matrix<QuotientPoly>) -> Result<QuotientPoly> {
        self.check_shape(m)?;
        m.det()
    }

    /// Pfaffian characteristic coefficients `[𝒯_0, ..., 𝒯_d]` of a symmetric element: from
    /// `Pf((t − M)J_δ)/Pf(J_δ)` when `M·J_δ` is alternating, otherwise from the recursion on
    /// the characteristic polynomial (the two agree whenever both apply).
    pub fn pfaffian_coeffs(&self, m: &Matrix<QuotientPoly>) -> Result<Vec<QuotientPoly>> {
        if self.delta_involution(m)? != *m {
            return Err(Error::Structure("element is not fixed by the involution".into()));
        }
        let j: Matrix<QuotientPoly> = self.j_delta.lift();
        let mj = m.mul(&j)?;
        if mj.transpose() == mj.negated() && !m.entries().iter().any(|e| e.mentions(CHAR_VAR)) {
            return pfaffian_char_coeffs_wrt(m, &j, &self.pf_j_delta);
        }
        pfaffian_coeffs_from_lambdas(&m.lambdas()?)
    }

    /// `(T_E(M), D_E(M), P_E(M))` for a symmetric element.
    pub fn trace_det_pf(&self, m: &Matrix<QuotientPoly>) -> Result<(QuotientPoly, QuotientPoly, QuotientPoly)> {
        let coeffs = self.pfaffian_coeffs(m)?;
        let p = coeffs.last().cloned().expect("nonempty");
        Ok((self.trace(m)?, self.det(m)?, p))
    }

    /// `χ^P_α(r_1, ..., r_n)` for symmetric elements, computed in the block-matrix model.
    pub fn chi_alpha(&self, elems: &[Matrix<QuotientPoly>], alpha: &[u32]) -> Result<Matrix<QuotientPoly>> {
        for r in elems {
            if self.delta_involution(r)? != *r {
                return Err(Error::Argument("elements are not symmetric".into()));
            }
        }
        let j: Matrix<QuotientPoly> = self.j_delta.lift();
        let alternating = elems.iter().all(|r| {
            let rj = r.mul(&j).expect("square");
            rj.transpose() == rj.negated()
        });
        if alternating {
            return chi_alpha_matrices(elems, &j, &self.pf_j_delta, alpha);
        }
        if elems.is_empty() || elems.len() != alpha.len() || alpha.iter().sum::<u32>() as usize != self.d() {
            return Err(Error::Argument(format!("exponents must sum to {}", self.d())));
        }
        let names: Vec<String> = (0..elems.len()).map(polarization_var).collect();
        let n = self.ty.total();
        let mut s = Matrix::zeros(n, n);
        for (r, t) in elems.iter().zip(&names) {
            s = s.add(&r.scale(&QuotientPoly::variable(t)))?;
        }
        let coeffs = pfaffian_coeffs_from_lambdas(&s.lambdas()?)?;
        let chi = pfaffian_char_at(&coeffs, &s)?;
        Ok(chi.map(|e| names.iter().zip(alpha).fold(e.clone(), |acc, (t, &a)| acc.coeff_of_power(t, a))))
    }

    /// `χ^P(r, r)`.
    pub fn chi(&self, r: &Matrix<QuotientPoly>) -> Result<Matrix<QuotientPoly>> {
        self.chi_alpha(std::slice::from_ref(r), &[self.d() as u32])
    }

    /// A random element with rational coordinates in each block span.
    pub fn random_element(&self, sampler: &mut Sampler, magnitude: i64) -> Matrix<QuotientPoly> {
        let n = self.ty.total();
        Matrix::from_fn(n, n, |r, c| {
            let span = self.span(self.ty.block_of(r), self.ty.block_of(c));
            let p = span
                .iter()
                .fold(MultiPoly::zero(), |acc, b| acc.plus(&b.scale(&sampler.rational(magnitude))));
            self.lift(p)
        })
    }

    /// `(M + M*)/2` for a random `M`.
    pub fn random_symmetric(&self, sampler: &mut Sampler, magnitude: i64) -> Matrix<QuotientPoly> {
        let m = self.random_element(sampler, magnitude);
        let sym = m.add(&self.involution_unchecked(&m)).expect("square");
        sym.scale_rational(&ratio(1, 2))
    }

    /// The element whose coordinate along each spanning vector of each entry is a fresh
    /// indeterminate `{prefix}{k}`.
    pub fn generic_element(&self, prefix: &str) -> Matrix<QuotientPoly> {
        let n = self.ty.total();
        let mut k = 0;
        Matrix::from_fn(n, n, |r, c| {
            let span = self.span(self.ty.block_of(r), self.ty.block_of(c));
            let p = span.iter().fold(MultiPoly::zero(), |acc, b| {
                k += 1;
                acc.plus(&b.times(&MultiPoly::var(&format!("{prefix}{k}"))))
            });
            self.lift(p)
        })
    }

    /// Checks `x* = −x` for each spanning `x ∈ 𝒜_{i,σ(i)}`, `i ∈ I1 ⊔ I2`, embedded at the
    /// top-left entry of its block.
    pub fn check_sch_condition(&self) -> SchReport {
        let n = self.ty.total();
        let mut idx: Vec<usize> = self.ty.i1.iter().chain(&self.ty.i2).copied().collect();
        idx.sort_unstable();
        for i in idx {
            let j = self.ty.sigma_of(i);
            for x in self.span(i, j) {
                let mut e = Matrix::zeros(n, n);
                e.set(self.ty.offset(i), self.ty.offset(j), self.lift(x.clone()));
                let image = self.involution_unchecked(&e);
                if image != e.negated() {
                    return SchReport { holds: false, witness: Some(SchWitness { block: (i, j), element: x, image }) };
                }
            }
        }
        SchReport { holds: true, witness: None }
    }

    /// `D(Id + w·s)`.
    pub fn det_one_plus(&self, w: &Matrix<QuotientPoly>, s: &Matrix<QuotientPoly>) -> Result<QuotientPoly> {
        let n = self.ty.total();
        Matrix::identity(n).add(&w.mul(s)?)?.det()
    }
}
