//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Variables are named; each polynomial carries the sorted list of names its
//! exponent vectors refer to. Arithmetic between polynomials over different
//! variable lists works over the union of the lists. Equality is value
//! equality: unused variables in the list are ignored.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ring::{format_rational, PolyRing, Rational, Ring};

pub type Exponents = Vec<u32>;

#[derive(Clone, Debug)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Exponents, Rational>,
}

impl MultiPoly {
    pub fn constant(q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(Vec::new(), q);
        }
        MultiPoly { vars: Vec::new(), terms }
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![1], Rational::one());
        MultiPoly { vars: vec![name.to_string()], terms }
    }

    /// Builds a polynomial from exponent vectors aligned with `vars` (any order, no duplicates).
    pub fn from_terms(vars: &[String], terms: impl IntoIterator<Item = (Exponents, Rational)>) -> Result<Self> {
        let mut order: Vec<usize> = (0..vars.len()).collect();
        order.sort_by(|&a, &b| vars[a].cmp(&vars[b]));
        for w in order.windows(2) {
            if vars[w[0]] == vars[w[1]] {
                return Err(Error::Variable(format!("{} (listed twice)", vars[w[0]])));
            }
        }
        let sorted: Vec<String> = order.iter().map(|&i| vars[i].clone()).collect();
        let mut out = MultiPoly { vars: sorted, terms: BTreeMap::new() };
        for (exp, coef) in terms {
            if exp.len() != vars.len() {
                return Err(Error::Dimension(format!(
                    "exponent vector of length {} for {} variables",
                    exp.len(),
                    vars.len()
                )));
            }
            let key: Exponents = order.iter().map(|&i| exp[i]).collect();
            out.add_term(key, coef);
        }
        Ok(out)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Terms in ascending lexicographic order of exponent vectors.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, exp: Exponents, coef: Rational) {
        if coef.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(coef);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coef;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Re-expresses the polynomial over a sorted superset of its variables.
    fn over(&self, vars: &[String]) -> MultiPoly {
        if self.vars == vars {
            return self.clone();
        }
        let pos: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.binary_search(v).expect("superset of variables"))
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut exp = vec![0; vars.len()];
                for (k, &p) in pos.iter().enumerate() {
                    exp[p] = e[k];
                }
                (exp, c.clone())
            })
            .collect();
        MultiPoly { vars: vars.to_vec(), terms }
    }

    fn union_vars(a: &[String], b: &[String]) -> Vec<String> {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i] < b[j]) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j] < a[i] {
                out.push(b[j].clone());
                j += 1;
            } else {
                out.push(a[i].clone());
                i += 1;
                j += 1;
            }
        }
        out
    }

    fn aligned(&self, other: &MultiPoly) -> (MultiPoly, MultiPoly) {
        if self.vars == other.vars {
            return (self.clone(), other.clone());
        }
        let vars = Self::union_vars(&self.vars, &other.vars);
        (self.over(&vars), other.over(&vars))
    }

    /// Drops variables that no term uses.
    pub fn trimmed(&self) -> MultiPoly {
        let used: Vec<usize> = (0..self.vars.len())
            .filter(|&k| self.terms.keys().any(|e| e[k] > 0))
            .collect();
        if used.len() == self.vars.len() {
            return self.clone();
        }
        let vars = used.iter().map(|&k| self.vars[k].clone()).collect();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (used.iter().map(|&k| e[k]).collect(), c.clone()))
            .collect();
        MultiPoly { vars, terms }
    }

    /// Exact coefficient of a monomial given as `(variable, exponent)` pairs.
    /// Every named variable must belong to the polynomial's variable list.
    pub fn coefficient(&self, monomial: &[(&str, u32)]) -> Result<Rational> {
        let mut exp = vec![0u32; self.vars.len()];
        for (name, e) in monomial {
            let k = self
                .vars
                .binary_search_by(|v| v.as_str().cmp(name))
                .map_err(|_| Error::Variable(name.to_string()))?;
            exp[k] += e;
        }
        Ok(self.terms.get(&exp).cloned().unwrap_or_else(Rational::zero))
    }

    /// Coefficient of an exponent vector aligned with [`MultiPoly::vars`].
    pub fn coefficient_of_exponents(&self, exp: &[u32]) -> Result<Rational> {
        if exp.len() != self.vars.len() {
            return Err(Error::Dimension(format!(
                "exponent vector of length {} for {} variables",
                exp.len(),
                self.vars.len()
            )));
        }
        Ok(self.terms.get(exp).cloned().unwrap_or_else(Rational::zero))
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Substitutes `value` for the variable `name`.
    pub fn substitute(&self, name: &str, value: &MultiPoly) -> MultiPoly {
        let Ok(k) = self.vars.binary_search_by(|v| v.as_str().cmp(name)) else {
            return self.clone();
        };
        let deg = self.degree_in(name);
        let mut acc = MultiPoly::zero();
        let mut power = MultiPoly::one();
        for e in 0..=deg {
            let mut coeff = MultiPoly { vars: self.vars.clone(), terms: BTreeMap::new() };
            for (exp, c) in &self.terms {
                if exp[k] == e {
                    let mut exp = exp.clone();
                    exp[k] = 0;
                    coeff.add_term(exp, c.clone());
                }
            }
            acc = acc.plus(&coeff.times(&power));
            if e < deg {
                power = power.times(value);
            }
        }
        acc
    }

    pub fn eval(&self, assignment: &[(&str, Rational)]) -> MultiPoly {
        assignment.iter().fold(self.clone(), |p, (name, q)| {
            p.substitute(name, &MultiPoly::constant(q.clone()))
        })
    }

    /// Coefficients of `var^0, var^1, ...` as polynomials in the other variables.
    pub fn coefficients_in(&self, var: &str) -> Vec<MultiPoly> {
        (0..=self.degree_in(var)).map(|k| self.coeff_of_power(var, k)).collect()
    }

    fn map_coeffs(&self, f: impl Fn(&Rational) -> Rational) -> MultiPoly {
        let mut out = MultiPoly { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            return self.terms == other.terms;
        }
        let (a, b) = self.aligned(other);
        a.terms == b.terms
    }
}

impl Eq for MultiPoly {}

impl Zero for MultiPoly {
    fn zero() -> Self {
        MultiPoly { vars: Vec::new(), terms: BTreeMap::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for MultiPoly {
    fn one() -> Self {
        MultiPoly::constant(Rational::one())
    }
}

impl Ring for MultiPoly {
    fn plus(&self, other: &Self) -> Self {
        let (mut a, b) = self.aligned(other);
        for (e, c) in b.terms {
            a.add_term(e, c);
        }
        a
    }
    fn minus(&self, other: &Self) -> Self {
        let (mut a, b) = self.aligned(other);
        for (e, c) in b.terms {
            a.add_term(e, -c);
        }
        a
    }
    fn times(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return MultiPoly::zero();
        }
        if let Some(c) = other.as_constant() {
            return self.map_coeffs(|x| x * &c);
        }
        if let Some(c) = self.as_constant() {
            return other.map_coeffs(|x| x * &c);
        }
        let (a, b) = self.aligned(other);
        let mut out = MultiPoly { vars: a.vars.clone(), terms: BTreeMap::new() };
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let exp = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(exp, ca * cb);
            }
        }
        out
    }
    fn negated(&self) -> Self {
        self.map_coeffs(|c| -c)
    }
    fn from_rational(q: &Rational) -> Self {
        MultiPoly::constant(q.clone())
    }
    fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return MultiPoly::zero();
        }
        self.map_coeffs(|c| c * q)
    }
}

impl PolyRing for MultiPoly {
    fn variable(name: &str) -> Self {
        MultiPoly::var(name)
    }

    fn mentions(&self, name: &str) -> bool {
        match self.vars.binary_search_by(|v| v.as_str().cmp(name)) {
            Ok(k) => self.terms.keys().any(|e| e[k] > 0),
            Err(_) => false,
        }
    }

    fn coeff_of_power(&self, var: &str, k: u32) -> Self {
        let Ok(idx) = self.vars.binary_search_by(|v| v.as_str().cmp(var)) else {
            return if k == 0 { self.clone() } else { MultiPoly::zero() };
        };
        let mut vars = self.vars.clone();
        vars.remove(idx);
        let mut out = MultiPoly { vars, terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            if e[idx] == k {
                let mut exp = e.clone();
                exp.remove(idx);
                out.add_term(exp, c.clone());
            }
        }
        out
    }

    fn degree_in(&self, var: &str) -> u32 {
        match self.vars.binary_search_by(|v| v.as_str().cmp(var)) {
            Ok(k) => self.terms.keys().map(|e| e[k]).max().unwrap_or(0),
            Err(_) => 0,
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $ring:ident) => {
        impl std::ops::$tr<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                Ring::$ring(self, rhs)
            }
        }
        impl std::ops::$tr for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                Ring::$ring(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, plus);
forward_binop!(Sub, sub, minus);
forward_binop!(Mul, mul, times);

impl std::ops::Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.negated()
    }
}

impl From<Rational> for MultiPoly {
    fn from(q: Rational) -> Self {
        MultiPoly::constant(q)
    }
}

impl From<i64> for MultiPoly {
    fn from(n: i64) -> Self {
        MultiPoly::constant(Rational::from_integer(BigInt::from(n)))
    }
}

impl fmt::Display for MultiPoly {
    /// Terms in descending lexicographic order, e.g. `3*t1^2 + t1*t2 - 1/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (exp, coef)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = exp
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(k, &e)| {
                    if e == 1 {
                        self.vars[k].clone()
                    } else {
                        format!("{}^{}", self.vars[k], e)
                    }
                })
                .collect();
            let neg = coef.is_negative();
            let abs = coef.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if mono.is_empty() {
                write!(f, "{}", format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&abs), mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl FromStr for MultiPoly {
    type Err = Error;

    /// Parses expressions built from integers, identifiers, `+ - * ^`,
    /// parentheses, and division by nonzero constants.
    fn from_str(s: &str) -> Result<Self> {
        let tokens = tokenize(s)?;
        let mut parser = Parser { tokens: &tokens, pos: 0 };
        let p = parser.expr()?;
        if parser.pos != tokens.len() {
            return Err(Error::Parse(format!("trailing input in `{s}`")));
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let lit: String = chars[start..i].iter().collect();
            out.push(Token::Num(lit.parse().expect("digits")));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}` in `{s}`")));
        }
    }
    if out.is_empty() {
        return Err(Error::Parse("empty polynomial expression".into()));
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat_op(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat_op('+') {
                acc = acc.plus(&self.term()?);
            } else if self.eat_op('-') {
                acc = acc.minus(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat_op('*') {
                acc = acc.times(&self.unary()?);
            } else if self.eat_op('/') {
                let divisor = self.unary()?;
                let q = divisor
                    .as_constant()
                    .filter(|q| !q.is_zero())
                    .ok_or_else(|| Error::Parse("division by a non-constant or zero".into()))?;
                acc = acc.scale(&q.recip());
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        if self.eat_op('-') {
            return Ok(self.unary()?.negated());
        }
        if self.eat_op('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.eat_op('^') {
            match self.peek() {
                Some(Token::Num(n)) => {
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| Error::Parse(format!("exponent {n} too large")))?;
                    self.pos += 1;
                    Ok(base.pow(e))
                }
                _ => Err(Error::Parse("exponent must be a nonnegative integer".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        match self.peek().cloned() {
            Some(Token::Num(n)) => {
                self.pos += 1;
                Ok(MultiPoly::constant(Rational::from_integer(n)))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                Ok(MultiPoly::var(&name))
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat_op(')') {
                    return Err(Error::Parse("missing `)`".into()));
                }
                Ok(inner)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Vec<u32>,
    coef: crate::json::RationalRepr,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    vars: Vec<String>,
    terms: Vec<TermRepr>,
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let t = self.trimmed();
        PolyRepr {
            vars: t.vars.clone(),
            terms: t
                .terms
                .iter()
                .rev()
                .map(|(e, c)| TermRepr { exp: e.clone(), coef: crate::json::RationalRepr(c.clone()) })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PolyRepr::deserialize(d)?;
        MultiPoly::from_terms(&repr.vars, repr.terms.into_iter().map(|t| (t.exp, t.coef.0)))
            .map_err(serde::de::Error::custom)
    }
}
