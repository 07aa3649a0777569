//! Reduced words in a free group and finite linear combinations of them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json::poly_from_value;
use crate::poly::MultiPoly;
use crate::ring::{Rational, Ring};

/// Generator `g_{gen+1}` or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn inverted(self) -> Letter {
        Letter { gen: self.gen, inverse: !self.inverse }
    }
}

/// A freely reduced word; the empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    /// `g_{gen+1}` (generators are 0-based internally, 1-based in text).
    pub fn generator(gen: usize) -> Word {
        Word(vec![Letter { gen, inverse: false }])
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverted()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverted()).collect())
    }

    pub fn mul(&self, other: &Word) -> Word {
        Word::from_letters(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        (0..e.unsigned_abs()).fold(Word::identity(), |acc, _| acc.mul(&base))
    }

    /// Number of generators needed to interpret the word.
    pub fn generator_bound(&self) -> usize {
        self.0.iter().map(|l| l.gen + 1).max().unwrap_or(0)
    }
}

impl fmt::Display for Word {
    /// Runs of one letter are collapsed into powers: `g1^2 g2^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut run = 1;
            while i + run < self.0.len() && self.0[i + run] == l {
                run += 1;
            }
            let exp = if l.inverse { -(run as i64) } else { run as i64 };
            parts.push(if exp == 1 { format!("g{}", l.gen + 1) } else { format!("g{}^{}", l.gen + 1, exp) });
            i += run;
        }
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Space-separated factors `gK` or `gK^E` with `E` a nonzero integer; `1` is the identity.
    fn from_str(s: &str) -> Result<Word> {
        let bad = |tok: &str| Error::Parse(format!("invalid word factor `{tok}` in `{s}`"));
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (base, exp) = match tok.split_once('^') {
                Some((b, e)) => (b, e.parse::<i64>().map_err(|_| bad(tok))?),
                None => (tok, 1),
            };
            let idx: usize = base
                .strip_prefix('g')
                .and_then(|n| n.parse().ok())
                .filter(|&n| n >= 1)
                .ok_or_else(|| bad(tok))?;
            if exp == 0 {
                return Err(bad(tok));
            }
            let letter = Letter { gen: idx - 1, inverse: exp < 0 };
            letters.extend(std::iter::repeat_n(letter, exp.unsigned_abs() as usize));
        }
        Ok(Word::from_letters(letters))
    }
}

/// Finite `R`-linear combination of group elements; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupAlgebraElement<R: Ring> {
    terms: BTreeMap<Word, R>,
}

impl<R: Ring> GroupAlgebraElement<R> {
    pub fn zero() -> Self {
        GroupAlgebraElement { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::scalar(R::one())
    }

    pub fn scalar(c: R) -> Self {
        Self::monomial(Word::identity(), c)
    }

    pub fn monomial(w: Word, c: R) -> Self {
        Self::from_terms([(w, c)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, R)>) -> Self {
        let mut out = Self::zero();
        for (w, c) in terms {
            out.add_term(w, c);
        }
        out
    }

    fn add_term(&mut self, w: Word, c: R) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&w) {
            Some(old) => {
                let sum = old.plus(&c);
                if !sum.is_zero() {
                    self.terms.insert(w, sum);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &R)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> R {
        self.terms.get(w).cloned().unwrap_or_else(R::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&R::one().negated()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                out.add_term(wa.mul(wb), ca.times(cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, x)| (w.clone(), x.times(c))))
    }

    pub fn generator_bound(&self) -> usize {
        self.terms.keys().map(Word::generator_bound).max().unwrap_or(0)
    }

    pub fn map_coeffs<S: Ring>(&self, f: impl Fn(&R) -> S) -> GroupAlgebraElement<S> {
        GroupAlgebraElement::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), f(c))))
    }
}

impl GroupAlgebraElement<Rational> {
    pub fn lift(&self) -> GroupAlgebraElement<MultiPoly> {
        self.map_coeffs(MultiPoly::from_rational)
    }
}

impl GroupAlgebraElement<MultiPoly> {
    /// `{"terms": [{"word": "g1 g2^-1", "coef": "p/q"}]}`; coefficients may be
    /// polynomial expressions or objects.
    pub fn from_json(v: &Value) -> Result<Self> {
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("element needs a \"terms\" array".into()))?;
        let mut out = Self::zero();
        for t in terms {
            let word: Word = t
                .get("word")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse("term needs a \"word\" string".into()))?
                .parse()?;
            let coef = poly_from_value(t.get("coef").ok_or_else(|| Error::Parse("term needs a \"coef\"".into()))?)?;
            out.add_term(word, coef);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(w, c)| json!({"word": w.to_string(), "coef": c.to_string()}))
            .collect();
        json!({ "terms": terms })
    }
}

impl<R: Ring> fmt::Display for GroupAlgebraElement<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, c)| format!("({c})*[{w}]")).collect();
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rat;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn words_reduce_and_render() {
        assert_eq!(w("g1 g1^-1"), Word::identity());
        assert_eq!(w("g1 g2 g2^-1 g1").to_string(), "g1^2");
        assert_eq!(w("g1^2 g2^-1").letters().len(), 3);
        assert_eq!(w("1").to_string(), "1");
        assert_eq!(w("g1 g2^-1").inverse(), w("g2 g1^-1"));
        assert_eq!(w("g3^-2").pow(-1), w("g3^2"));
        assert!("g0".parse::<Word>().is_err());
        assert!("g1^0".parse::<Word>().is_err());
        assert!("h1".parse::<Word>().is_err());
    }

    #[test]
    fn render_parse_round_trip() {
        for s in ["g1^2 g2^-1", "g2 g1 g2^-3", "1", "g4^-1 g1"] {
            assert_eq!(w(s).to_string(), s);
        }
    }

    #[test]
    fn algebra_products_cancel() {
        let x = GroupAlgebraElement::from_terms([(w("g1"), rat(1)), (w("g1^-1"), rat(1))]);
        let y = GroupAlgebraElement::from_terms([(w("g1"), rat(1)), (w("g1^-1"), rat(-1))]);
        let p = x.mul(&y);
        assert_eq!(p.coefficient(&w("g1^2")), rat(1));
        assert_eq!(p.coefficient(&w("g1^-2")), rat(-1));
        assert_eq!(p.coefficient(&Word::identity()), rat(0));
        assert!(x.sub(&x).is_zero());
    }

    #[test]
    fn json_round_trip() {
        let v = json!({"terms": [{"word": "g1 g2^-1", "coef": "3/2"}, {"word": "1", "coef": "c"}]});
        let x = GroupAlgebraElement::from_json(&v).unwrap();
        assert_eq!(GroupAlgebraElement::from_json(&x.to_json()).unwrap(), x);
        assert!(GroupAlgebraElement::from_json(&json!({"terms": [{"word": "q"}]})).is_err());
    }
}
