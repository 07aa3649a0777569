//! Trace-word invariants of matrix tuples under symplectic conjugation, and an
//! independent linear-algebra count of multilinear invariants.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::random::Sampler;
use crate::ring::Rational;
use crate::symplectic::SymplecticContext;

/// `𝕏^(var)` or its j-transpose.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TraceLetter {
    /// 1-based variable index.
    pub var: usize,
    pub starred: bool,
}

/// A cyclic word in the variables and their j-transposes, stored as the least
/// representative under rotation and under `W ↦ W^j`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TraceWord(Vec<TraceLetter>);

impl TraceWord {
    pub fn new(letters: Vec<TraceLetter>) -> Result<TraceWord> {
        if letters.is_empty() {
            return Err(Error::Argument("trace words are nonempty".into()));
        }
        if letters.iter().any(|l| l.var == 0) {
            return Err(Error::Argument("variables are numbered from 1".into()));
        }
        Ok(TraceWord(canonical(&letters)))
    }

    pub fn letters(&self) -> &[TraceLetter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false: trace words are nonempty.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest variable index used.
    pub fn arity(&self) -> usize {
        self.0.iter().map(|l| l.var).max().unwrap_or(0)
    }

    /// The product of the substituted matrices, left to right.
    pub fn evaluate(&self, ctx: &SymplecticContext, mats: &[Matrix<Rational>]) -> Result<Matrix<Rational>> {
        evaluate_letters(&self.0, ctx, mats)
    }
}

fn evaluate_letters(letters: &[TraceLetter], ctx: &SymplecticContext, mats: &[Matrix<Rational>]) -> Result<Matrix<Rational>> {
    let mut acc: Option<Matrix<Rational>> = None;
    for l in letters {
        let m = mats.get(l.var - 1).ok_or(Error::Arity { needed: l.var, got: mats.len() })?;
        let m = if l.starred { ctx.symplectic_transpose(m)? } else { m.clone() };
        acc = Some(match acc {
            Some(a) => a.mul(&m)?,
            None => m,
        });
    }
    acc.ok_or_else(|| Error::Argument("empty word".into()))
}

fn transpose_word(w: &[TraceLetter]) -> Vec<TraceLetter> {
    w.iter().rev().map(|l| TraceLetter { var: l.var, starred: !l.starred }).collect()
}

fn canonical(w: &[TraceLetter]) -> Vec<TraceLetter> {
    let mut best: Option<Vec<TraceLetter>> = None;
    for base in [w.to_vec(), transpose_word(w)] {
        for r in 0..base.len() {
            let mut rot = base[r..].to_vec();
            rot.extend_from_slice(&base[..r]);
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap_or_default()
}

impl fmt::Display for TraceWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|l| if l.starred { format!("X{}^j", l.var) } else { format!("X{}", l.var) })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for TraceWord {
    type Err = Error;

    /// Space-separated letters `Xi` or `Xi^j`; a bare `X` means `X1`.
    fn from_str(s: &str) -> Result<TraceWord> {
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            let bad = || Error::Parse(format!("invalid trace-word letter `{tok}`"));
            let (base, starred) = match tok.strip_suffix("^j") {
                Some(b) => (b, true),
                None => (tok, false),
            };
            let idx = base.strip_prefix('X').ok_or_else(bad)?;
            let var = if idx.is_empty() { 1 } else { idx.parse::<usize>().map_err(|_| bad())? };
            if var == 0 {
                return Err(bad());
            }
            letters.push(TraceLetter { var, starred });
        }
        TraceWord::new(letters).map_err(|e| Error::Parse(format!("`{s}`: {e}")))
    }
}

/// Canonical words of length `1..=max_len` in `m` variables, ordered by length then lexicographically.
pub fn enumerate_trace_words(m: usize, max_len: usize) -> Vec<TraceWord> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        let mut seen = BTreeSet::new();
        let alphabet = 2 * m;
        let total = alphabet.checked_pow(len as u32).expect("word count overflow");
        for mut code in 0..total {
            let mut letters = Vec::with_capacity(len);
            for _ in 0..len {
                let a = code % alphabet;
                code /= alphabet;
                letters.push(TraceLetter { var: a / 2 + 1, starred: a % 2 == 1 });
            }
            seen.insert(canonical(&letters));
        }
        out.extend(seen.into_iter().map(TraceWord));
    }
    out
}

/// A conjugation-invariant function of a matrix tuple, or a coordinate probe.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum InvariantFunction {
    /// `σ_index(word)`, the coefficient `Λ_index` of the characteristic polynomial of the word.
    Sigma { index: usize, word: TraceWord },
    /// `λ(𝕏^(var))^power`.
    Similitude { var: usize, power: i32 },
    /// The `(row, col)` entry of `𝕏^(var)`, 0-based; not an invariant.
    Entry { var: usize, row: usize, col: usize },
}

impl InvariantFunction {
    pub fn sigma(index: usize, word: &str) -> Result<Self> {
        Ok(InvariantFunction::Sigma { index, word: word.parse()? })
    }

    /// Number of matrix arguments the function reads.
    pub fn arity(&self) -> usize {
        match self {
            InvariantFunction::Sigma { word, .. } => word.arity(),
            InvariantFunction::Similitude { var, .. } | InvariantFunction::Entry { var, .. } => *var,
        }
    }

    /// `{"sigma": i, "word": "X1 X2^j"}`, `{"similitude_power": -1, "var": 1}` or
    /// `{"entry": [r, c], "var": 1}`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let var = || -> Result<usize> {
            v.get("var")
                .and_then(Value::as_u64)
                .filter(|&x| x >= 1)
                .map(|x| x as usize)
                .ok_or_else(|| Error::Parse("\"var\" must be a positive integer".into()))
        };
        if let Some(i) = v.get("sigma") {
            let index = i.as_u64().ok_or_else(|| Error::Parse("\"sigma\" must be a positive integer".into()))? as usize;
            let word = v
                .get("word")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse("\"word\" must be a string".into()))?;
            return Ok(InvariantFunction::Sigma { index, word: word.parse()? });
        }
        if let Some(p) = v.get("similitude_power") {
            let power = p
                .as_i64()
                .and_then(|x| i32::try_from(x).ok())
                .ok_or_else(|| Error::Parse("\"similitude_power\" must be an integer".into()))?;
            return Ok(InvariantFunction::Similitude { var: var()?, power });
        }
        if let Some(e) = v.get("entry") {
            let rc: Vec<usize> = serde_json::from_value(e.clone()).map_err(|e| Error::Parse(format!("entry: {e}")))?;
            if rc.len() != 2 {
                return Err(Error::Parse("\"entry\" must be [row, col]".into()));
            }
            return Ok(InvariantFunction::Entry { var: var()?, row: rc[0], col: rc[1] });
        }
        Err(Error::Parse("unknown invariant function".into()))
    }

    pub fn to_json(&self) -> Value {
        match self {
            InvariantFunction::Sigma { index, word } => json!({"sigma": index, "word": word.to_string()}),
            InvariantFunction::Similitude { var, power } => json!({"similitude_power": power, "var": var}),
            InvariantFunction::Entry { var, row, col } => json!({"entry": [row, col], "var": var}),
        }
    }
}

impl fmt::Display for InvariantFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantFunction::Sigma { index, word } => write!(f, "sigma_{index}({word})"),
            InvariantFunction::Similitude { var, power } => write!(f, "lambda(X{var})^{power}"),
            InvariantFunction::Entry { var, row, col } => write!(f, "X{var}[{row},{col}]"),
        }
    }
}

fn context_for(mats: &[Matrix<Rational>]) -> Result<SymplecticContext> {
    let first = mats.first().ok_or(Error::Arity { needed: 1, got: 0 })?;
    let n = first.rows();
    if n % 2 == 1 || n == 0 || mats.iter().any(|m| m.rows() != n || m.cols() != n) {
        return Err(Error::Dimension("expected matrices of one even square size".into()));
    }
    SymplecticContext::new(n / 2)
}

/// Evaluates `f` on a tuple of `2d×2d` rational matrices.
pub fn eval_invariant(f: &InvariantFunction, mats: &[Matrix<Rational>]) -> Result<Rational> {
    if f.arity() > mats.len() {
        return Err(Error::Arity { needed: f.arity(), got: mats.len() });
    }
    let ctx = context_for(mats)?;
    match f {
        InvariantFunction::Sigma { index, word } => {
            if *index < 1 || *index > ctx.dim() {
                return Err(Error::Argument(format!("sigma index must lie in 1..={}", ctx.dim())));
            }
            Ok(word.evaluate(&ctx, mats)?.lambdas()?.swap_remove(*index))
        }
        InvariantFunction::Similitude { var, power } => {
            let l = ctx.similitude(&mats[var - 1])?;
            Ok(l.pow(*power))
        }
        InvariantFunction::Entry { var, row, col } => {
            if *row >= ctx.dim() || *col >= ctx.dim() {
                return Err(Error::Argument("entry index out of range".into()));
            }
            Ok(mats[var - 1].get(*row, *col).clone())
        }
    }
}

/// Whether `f(g·M_i·g⁻¹) = f(M_i)`.
pub fn check_invariance(f: &InvariantFunction, mats: &[Matrix<Rational>], g: &Matrix<Rational>) -> Result<bool> {
    let g_inv = g.inverse()?;
    let conj = mats
        .iter()
        .map(|m| g.mul(m)?.mul(&g_inv))
        .collect::<Result<Vec<_>>>()?;
    Ok(eval_invariant(f, &conj)? == eval_invariant(f, mats)?)
}

pub const MAX_UNKNOWNS: usize = 100_000;

fn unknowns(d: usize, m: usize) -> Result<usize> {
    let n = 2 * d;
    if d == 0 || m == 0 {
        return Err(Error::Argument("d and m must be positive".into()));
    }
    match (n * n).checked_pow(m as u32) {
        Some(u) if u <= MAX_UNKNOWNS => Ok(u),
        _ => Err(Error::Capacity(format!("(2d)^(2m) exceeds {MAX_UNKNOWNS} unknowns for d={d}, m={m}"))),
    }
}

/// Incremental row echelon form over ℚ with sparse rows.
#[derive(Default)]
pub(crate) struct Echelon {
    pivots: BTreeMap<usize, BTreeMap<usize, Rational>>,
}

impl Echelon {
    pub(crate) fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds a row; returns whether the rank grew.
    pub(crate) fn insert(&mut self, mut row: BTreeMap<usize, Rational>) -> bool {
        row.retain(|_, v| !v.is_zero());
        loop {
            let Some((&lead, coef)) = row.iter().next() else { return false };
            match self.pivots.get(&lead) {
                Some(p) => {
                    let c = coef.clone();
                    for (k, v) in p {
                        let e = row.entry(*k).or_insert_with(Rational::zero);
                        *e -= &c * v;
                        if e.is_zero() {
                            row.remove(k);
                        }
                    }
                }
                None => {
                    let inv = coef.recip();
                    for v in row.values_mut() {
                        *v *= &inv;
                    }
                    self.pivots.insert(lead, row);
                    return true;
                }
            }
        }
    }
}

/// Dimension of the multilinear maps `(M_2d)^m → ℚ` killed by every derivation
/// `(X_k) ↦ Σ_k f(…, [H, X_k], …)` with `H ∈ sp_2d`.
pub fn multilinear_invariant_dim(d: usize, m: usize) -> Result<usize> {
    let total = unknowns(d, m)?;
    let n = 2 * d;
    let ctx = SymplecticContext::new(d)?;
    let basis = ctx.lie_algebra_basis();
    let sq = n * n;
    let mut ech = Echelon::default();
    for h in &basis {
        let nz: Vec<(usize, usize, Rational)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !h.get(i, j).is_zero())
            .map(|(i, j)| (i, j, h.get(i, j).clone()))
            .collect();
        for tuple in 0..total {
            let mut row: BTreeMap<usize, Rational> = BTreeMap::new();
            let mut stride = 1;
            for _ in 0..m {
                let slot = (tuple / stride) % sq;
                let (p, q) = (slot / n, slot % n);
                let base = tuple - slot * stride;
                // [H, E_pq] = Σ_i H_ip E_iq − Σ_j H_qj E_pj
                for (i, j, v) in &nz {
                    if *j == p {
                        *row.entry(base + (i * n + q) * stride).or_insert_with(Rational::zero) += v;
                    }
                    if *i == q {
                        *row.entry(base + (p * n + j) * stride).or_insert_with(Rational::zero) -= v;
                    }
                }
                stride *= sq;
            }
            ech.insert(row);
        }
    }
    Ok(total - ech.rank())
}

fn set_partitions(m: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<Vec<usize>>> = vec![vec![]];
    for x in 1..=m {
        let mut next = Vec::new();
        for p in &out {
            for b in 0..p.len() {
                let mut q = p.clone();
                q[b].push(x);
                next.push(q);
            }
            let mut q = p.clone();
            q.push(vec![x]);
            next.push(q);
        }
        out = next;
    }
    out
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Canonical words using each index of `block` exactly once.
fn block_words(block: &[usize]) -> Vec<TraceWord> {
    let mut seen = BTreeSet::new();
    for perm in permutations(block) {
        for stars in 0..(1usize << perm.len()) {
            let letters: Vec<TraceLetter> = perm
                .iter()
                .enumerate()
                .map(|(k, &v)| TraceLetter { var: v, starred: stars >> k & 1 == 1 })
                .collect();
            seen.insert(canonical(&letters));
        }
    }
    seen.into_iter().map(TraceWord).collect()
}

/// Multilinear products `Π tr(W_b)` over set partitions of `{1..m}`, each index used once.
pub fn multilinear_trace_products(m: usize) -> Vec<Vec<TraceWord>> {
    let mut out = Vec::new();
    for partition in set_partitions(m) {
        let mut products: Vec<Vec<TraceWord>> = vec![vec![]];
        for block in &partition {
            let words = block_words(block);
            products = products
                .iter()
                .flat_map(|p| {
                    words.iter().map(move |w| {
                        let mut q = p.clone();
                        q.push(w.clone());
                        q
                    })
                })
                .collect();
        }
        out.extend(products);
    }
    out
}

/// Rank of the trace-product family on seeded random tuples, sampling until the rank has
/// not moved for three consecutive rounds.
pub fn trace_word_span_dim(d: usize, m: usize) -> Result<usize> {
    trace_word_span_dim_seeded(d, m, 0x5eed)
}

pub fn trace_word_span_dim_seeded(d: usize, m: usize, seed: u64) -> Result<usize> {
    unknowns(d, m)?;
    let ctx = SymplecticContext::new(d)?;
    let family = multilinear_trace_products(m);
    let mut sampler = Sampler::new(seed);
    let mut ech = Echelon::default();
    let mut stable_rounds = 0;
    while stable_rounds < 3 && ech.rank() < family.len() {
        let mats: Vec<_> = (0..m).map(|_| sampler.matrix(2 * d, 2 * d, 5)).collect();
        let mut row = BTreeMap::new();
        for (k, prod) in family.iter().enumerate() {
            let mut v = Rational::one();
            for w in prod {
                v *= w.evaluate(&ctx, &mats)?.trace()?;
            }
            row.insert(k, v);
        }
        if ech.insert(row) {
            stable_rounds = 0;
        } else {
            stable_rounds += 1;
        }
    }
    Ok(ech.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::int_matrix;
    use crate::ring::{binomial, rat};

    fn words(v: &[TraceWord]) -> Vec<String> {
        v.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(words(&enumerate_trace_words(1, 1)), ["X1"]);
        assert_eq!(words(&enumerate_trace_words(1, 2)), ["X1", "X1 X1", "X1 X1^j"]);
        assert_eq!(words(&enumerate_trace_words(2, 1)), ["X1", "X2"]);
    }

    #[test]
    fn canonical_form_is_orbit_minimum() {
        let a: TraceWord = "X2^j X1".parse().unwrap();
        let b: TraceWord = "X2 X1^j".parse().unwrap();
        let c: TraceWord = "X1 X2^j".parse().unwrap();
        assert_eq!(a, c);
        assert_eq!(b, "X1^j X2".parse().unwrap());
        assert_eq!("X^j X^j".parse::<TraceWord>().unwrap(), "X X".parse().unwrap());
        assert!("Y1".parse::<TraceWord>().is_err());
        assert!("".parse::<TraceWord>().is_err());
    }

    #[test]
    fn canonical_preserves_values() {
        let ctx = SymplecticContext::new(2).unwrap();
        let mut s = Sampler::new(3);
        let mats: Vec<_> = (0..3).map(|_| s.matrix(4, 4, 4)).collect();
        for _ in 0..30 {
            let len = s.range(1, 5);
            let raw: Vec<TraceLetter> = (0..len).map(|_| TraceLetter { var: s.range(1, 3), starred: s.coin() }).collect();
            let direct = evaluate_letters(&raw, &ctx, &mats).unwrap().lambdas().unwrap();
            let canon = TraceWord::new(raw).unwrap().evaluate(&ctx, &mats).unwrap().lambdas().unwrap();
            assert_eq!(direct, canon);
        }
    }

    #[test]
    fn evaluation_examples() {
        let x = int_matrix(&[&[1, 2], &[3, 4]]);
        let f = InvariantFunction::sigma(1, "X").unwrap();
        assert_eq!(eval_invariant(&f, std::slice::from_ref(&x)).unwrap(), rat(5));
        let f = InvariantFunction::sigma(1, "X X^j").unwrap();
        assert_eq!(eval_invariant(&f, std::slice::from_ref(&x)).unwrap(), rat(-4));
        let id = Matrix::<Rational>::identity(4);
        for i in 1..=4 {
            let f = InvariantFunction::sigma(i, "X1 X2^j X1").unwrap();
            assert_eq!(eval_invariant(&f, &[id.clone(), id.clone()]).unwrap(), binomial(4, i as u64));
        }
        let f = InvariantFunction::sigma(1, "X1 X2").unwrap();
        assert_eq!(eval_invariant(&f, std::slice::from_ref(&x)), Err(Error::Arity { needed: 2, got: 1 }));
        let f = InvariantFunction::sigma(3, "X1").unwrap();
        assert!(matches!(eval_invariant(&f, std::slice::from_ref(&x)), Err(Error::Argument(_))));
        let lam = InvariantFunction::Similitude { var: 1, power: -1 };
        assert_eq!(eval_invariant(&lam, &[int_matrix(&[&[2, 0], &[0, 2]])]).unwrap(), crate::ring::ratio(1, 4));
        let nonsim = int_matrix(&[&[1, 1, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        assert!(matches!(eval_invariant(&lam, &[nonsim]), Err(Error::NotSimilitude(_))));
    }

    #[test]
    fn invariance_examples() {
        let ctx = SymplecticContext::new(2).unwrap();
        let mut s = Sampler::new(8);
        let mats: Vec<_> = (0..2).map(|_| s.matrix(4, 4, 4)).collect();
        let g = ctx.sample_symplectic(1, 3);
        let f = InvariantFunction::sigma(1, "X1 X2").unwrap();
        assert!(check_invariance(&f, &mats, &Matrix::identity(4)).unwrap());
        assert!(check_invariance(&f, &mats, &g).unwrap());
        let c1 = SymplecticContext::new(1).unwrap();
        let entry = InvariantFunction::Entry { var: 1, row: 0, col: 0 };
        let x = int_matrix(&[&[0, 1], &[0, 0]]);
        let g = int_matrix(&[&[1, 0], &[1, 1]]);
        assert_eq!(c1.similitude(&g).unwrap(), rat(1));
        assert!(!check_invariance(&entry, &[x], &g).unwrap());
    }

    #[test]
    fn json_round_trip() {
        for f in [
            InvariantFunction::sigma(2, "X1 X2^j").unwrap(),
            InvariantFunction::Similitude { var: 2, power: -1 },
            InvariantFunction::Entry { var: 1, row: 0, col: 1 },
        ] {
            assert_eq!(InvariantFunction::from_json(&f.to_json()).unwrap(), f);
        }
        assert!(InvariantFunction::from_json(&json!({"sigma": 1})).is_err());
    }

    #[test]
    fn oracle_small_cases() {
        assert_eq!(multilinear_invariant_dim(1, 1).unwrap(), 1);
        assert_eq!(multilinear_invariant_dim(1, 2).unwrap(), 2);
        assert_eq!(multilinear_invariant_dim(2, 1).unwrap(), 1);
        assert!(matches!(multilinear_invariant_dim(2, 5), Err(Error::Capacity(_))));
    }

    #[test]
    fn span_small_cases() {
        assert_eq!(trace_word_span_dim(1, 1).unwrap(), 1);
        assert_eq!(trace_word_span_dim(1, 2).unwrap(), 2);
        assert_eq!(multilinear_trace_products(2).len(), 3);
    }

    #[test]
    fn set_partition_counts() {
        let bell: Vec<usize> = (0..=5).map(|m| set_partitions(m).len()).collect();
        assert_eq!(bell, [1, 1, 2, 5, 15, 52]);
    }
}
