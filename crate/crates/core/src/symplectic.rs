//! The standard symplectic form, the j-involution, Pfaffians and
//! symplectic sampling.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poly::MultiPoly;
use crate::random::Sampler;
use crate::ring::{PolyRing, Rational, Ring};

/// Indeterminate used for characteristic polynomials.
pub const CHAR_VAR: &str = "t";

/// Half-dimension `d` together with `J = [[0, Id_d], [−Id_d, 0]]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ContextRepr", into = "ContextRepr")]
pub struct SymplecticContext {
    d: usize,
    j: Matrix<Rational>,
    pfaffian_of_j: Rational,
}

#[derive(Serialize, Deserialize)]
struct ContextRepr {
    d: usize,
}

impl TryFrom<ContextRepr> for SymplecticContext {
    type Error = Error;
    fn try_from(r: ContextRepr) -> Result<Self> {
        SymplecticContext::new(r.d)
    }
}

impl From<SymplecticContext> for ContextRepr {
    fn from(c: SymplecticContext) -> Self {
        ContextRepr { d: c.d }
    }
}

impl SymplecticContext {
    pub fn new(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Argument("half-dimension d must be positive".into()));
        }
        let n = 2 * d;
        let j = Matrix::from_fn(n, n, |r, c| {
            if c == r + d {
                Rational::one()
            } else if r == c + d {
                -Rational::one()
            } else {
                Rational::zero()
            }
        });
        let pfaffian_of_j = if (d * (d - 1) / 2).is_multiple_of(2) { Rational::one() } else { -Rational::one() };
        Ok(SymplecticContext { d, j, pfaffian_of_j })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        2 * self.d
    }

    pub fn j(&self) -> &Matrix<Rational> {
        &self.j
    }

    pub fn pfaffian_of_j(&self) -> &Rational {
        &self.pfaffian_of_j
    }

    fn check_dim<R: Ring>(&self, m: &Matrix<R>) -> Result<()> {
        if m.rows() != self.dim() || m.cols() != self.dim() {
            return Err(Error::Dimension(format!(
                "expected {n}x{n}, got {}x{}",
                m.rows(),
                m.cols(),
                n = self.dim()
            )));
        }
        Ok(())
    }

    /// `M^j = J Mᵀ J⁻¹`. In block form `[[A, B], [C, D]]^j = [[Dᵀ, −Bᵀ], [−Cᵀ, Aᵀ]]`.
    pub fn symplectic_transpose<R: Ring>(&self, m: &Matrix<R>) -> Result<Matrix<R>> {
        self.check_dim(m)?;
        let d = self.d;
        Ok(Matrix::from_fn(2 * d, 2 * d, |r, c| {
            let (br, bc) = (r / d, c / d);
            let (i, k) = (r % d, c % d);
            match (br, bc) {
                (0, 0) => m.get(d + k, d + i).clone(),
                (0, 1) => m.get(k, d + i).negated(),
                (1, 0) => m.get(d + k, i).negated(),
                _ => m.get(k, i).clone(),
            }
        }))
    }

    pub fn is_j_symmetric<R: Ring>(&self, m: &Matrix<R>) -> Result<bool> {
        Ok(self.symplectic_transpose(m)? == *m)
    }

    /// `Pf(M·J) / Pf(J)` for `M^j = M`; equals 1 at the identity and squares to `det M`.
    pub fn reduced_pfaffian<R: Ring>(&self, m: &Matrix<R>) -> Result<R> {
        self.check_dim(m)?;
        if !self.is_j_symmetric(m)? {
            return Err(Error::Structure("matrix is not j-symmetric".into()));
        }
        let mj = m.mul(&self.j.lift())?;
        Ok(pfaffian_unchecked(&mj).scale(&self.pfaffian_of_j))
    }

    /// `[𝒯_0, ..., 𝒯_d]` with `Pf((t − M)J)/Pf(J) = Σ (−1)^i 𝒯_i t^{d−i}`.
    pub fn pfaffian_char_coeffs<R: PolyRing>(&self, m: &Matrix<R>) -> Result<Vec<R>> {
        self.check_dim(m)?;
        pfaffian_char_coeffs_wrt(m, &self.j.lift(), &self.pfaffian_of_j)
    }

    /// The Pfaffian characteristic polynomial in `t` of a j-symmetric rational matrix.
    pub fn pfaffian_char_poly(&self, m: &Matrix<Rational>) -> Result<MultiPoly> {
        self.check_dim(m)?;
        if !self.is_j_symmetric(m)? {
            return Err(Error::Structure("matrix is not j-symmetric".into()));
        }
        let shifted = Matrix::scalar(self.dim(), MultiPoly::var(CHAR_VAR)).sub(&m.lift())?;
        self.reduced_pfaffian(&shifted)
    }

    /// `λ` with `M^j M = λ·Id`.
    pub fn similitude(&self, m: &Matrix<Rational>) -> Result<Rational> {
        let p = self.symplectic_transpose(m)?.mul(m)?;
        let lambda = p.get(0, 0).clone();
        if p != Matrix::scalar(self.dim(), lambda.clone()) {
            return Err(Error::NotSimilitude("M^j M is not a scalar matrix".into()));
        }
        if lambda.is_zero() {
            return Err(Error::Singular("similitude factor is zero".into()));
        }
        Ok(lambda)
    }

    /// Basis of `sp_2d = {H : HᵀJ + JH = 0}`: blocks `[[A, B], [C, −Aᵀ]]` with `B, C` symmetric.
    pub fn lie_algebra_basis(&self) -> Vec<Matrix<Rational>> {
        let d = self.d;
        let n = 2 * d;
        let mut basis = Vec::with_capacity(d * (2 * d + 1));
        let unit = |entries: &[(usize, usize, i64)]| {
            let mut h = Matrix::zeros(n, n);
            for &(r, c, v) in entries {
                h.set(r, c, crate::ring::rat(v));
            }
            h
        };
        for i in 0..d {
            for k in 0..d {
                basis.push(unit(&[(i, k, 1), (d + k, d + i, -1)]));
            }
        }
        for i in 0..d {
            for k in i..d {
                if i == k {
                    basis.push(unit(&[(i, d + i, 1)]));
                    basis.push(unit(&[(d + i, i, 1)]));
                } else {
                    basis.push(unit(&[(i, d + k, 1), (k, d + i, 1)]));
                    basis.push(unit(&[(d + i, k, 1), (d + k, i, 1)]));
                }
            }
        }
        basis
    }

    pub fn random_lie_element(&self, sampler: &mut Sampler, magnitude: i64) -> Matrix<Rational> {
        self.lie_algebra_basis().iter().fold(Matrix::zeros(self.dim(), self.dim()), |acc, b| {
            acc.add(&b.scale(&sampler.rational(magnitude))).expect("same shape")
        })
    }

    /// Cayley transform `(Id − H)⁻¹(Id + H)`.
    pub fn cayley(&self, h: &Matrix<Rational>) -> Result<Matrix<Rational>> {
        self.check_dim(h)?;
        let id = Matrix::identity(self.dim());
        id.sub(h)?.inverse()?.mul(&id.add(h)?)
    }

    /// A seeded element of `Sp_2d(ℚ)`, the Cayley transform of a random Lie-algebra element.
    pub fn sample_symplectic(&self, seed: u64, magnitude: i64) -> Matrix<Rational> {
        let mut sampler = Sampler::new(seed);
        loop {
            let h = self.random_lie_element(&mut sampler, magnitude.max(1));
            if let Ok(s) = self.cayley(&h) {
                return s;
            }
        }
    }

    /// A seeded element of `GSp_2d(ℚ)` with its similitude factor.
    pub fn sample_similitude(&self, seed: u64, magnitude: i64) -> (Matrix<Rational>, Rational) {
        let mut sampler = Sampler::new(seed);
        let a = self.sample_symplectic(sampler.next_seed(), magnitude);
        let b = self.sample_symplectic(sampler.next_seed(), magnitude);
        let mu = sampler.nonzero_rational(magnitude.max(2));
        let d = self.d;
        let scaling = Matrix::from_fn(2 * d, 2 * d, |r, c| match (r == c, r < d) {
            (true, true) => mu.clone(),
            (true, false) => Rational::one(),
            _ => Rational::zero(),
        });
        let g = a.mul(&scaling).and_then(|x| x.mul(&b)).expect("square");
        (g, mu)
    }

    /// Random `M` with `M^j = M`, built as `A·J⁻¹` for alternating `A`.
    pub fn random_j_symmetric(&self, sampler: &mut Sampler, magnitude: i64) -> Matrix<Rational> {
        let a = sampler.alternating(self.dim(), magnitude);
        a.mul(&self.j).expect("square").negated()
    }
}

/// Pfaffian of an alternating matrix over any commutative ring.
pub fn pfaffian<R: Ring>(a: &Matrix<R>) -> Result<R> {
    if !a.is_square() || a.rows() % 2 == 1 {
        return Err(Error::Structure(format!(
            "Pfaffian needs an even square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if a.transpose() != a.negated() {
        return Err(Error::Structure("matrix is not alternating".into()));
    }
    Ok(pfaffian_unchecked(a))
}

/// First-row expansion `Pf(A) = Σ_j (−1)^{j+1} a_{0j} Pf(A_{\hat0\hat j})`,
/// memoized on the remaining index set.
pub(crate) fn pfaffian_unchecked<R: Ring>(a: &Matrix<R>) -> R {
    fn go<R: Ring>(a: &Matrix<R>, mask: u64, memo: &mut HashMap<u64, R>) -> R {
        if mask == 0 {
            return R::one();
        }
        if let Some(v) = memo.get(&mask) {
            return v.clone();
        }
        let first = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << first);
        let mut acc = R::zero();
        let mut sign_positive = true;
        let mut bits = rest;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let entry = a.get(first, j);
            if !entry.is_zero() {
                let sub = go(a, rest & !(1 << j), memo);
                if !sub.is_zero() {
                    let term = entry.times(&sub);
                    acc = if sign_positive { acc.plus(&term) } else { acc.minus(&term) };
                }
            }
            sign_positive = !sign_positive;
        }
        memo.insert(mask, acc.clone());
        acc
    }
    let n = a.rows();
    assert!(n <= 64, "Pfaffian limited to 64x64");
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    go(a, full, &mut HashMap::new())
}

/// Pfaffian characteristic coefficients relative to an arbitrary invertible alternating
/// form `F` (with Pfaffian `pf_form = ±1`): `Pf((t − M)F)/pf_form = Σ (−1)^i 𝒯_i t^{d−i}`.
pub fn pfaffian_char_coeffs_wrt<R: PolyRing>(
    m: &Matrix<R>,
    form: &Matrix<R>,
    pf_form: &Rational,
) -> Result<Vec<R>> {
    let n = m.rows();
    if !m.is_square() || n % 2 == 1 || form.rows() != n || !form.is_square() {
        return Err(Error::Dimension("need matching even square matrices".into()));
    }
    if m.entries().iter().any(|x| x.mentions(CHAR_VAR)) {
        return Err(Error::Variable(format!("{CHAR_VAR} already occurs in the matrix entries")));
    }
    let shifted = Matrix::scalar(n, R::variable(CHAR_VAR)).sub(m)?.mul(form)?;
    let pf = pfaffian(&shifted).map_err(|_| Error::Structure("matrix is not symmetric for the involution".into()))?;
    let pf = pf.scale(&pf_form.recip());
    let d = n / 2;
    Ok((0..=d)
        .map(|i| {
            let c = pf.coeff_of_power(CHAR_VAR, (d - i) as u32);
            if i % 2 == 1 {
                c.negated()
            } else {
                c
            }
        })
        .collect())
}

/// `Σ (−1)^i 𝒯_i M^{d−i}`, the Pfaffian characteristic polynomial evaluated at `M`.
pub fn pfaffian_char_at<R: Ring>(coeffs: &[R], m: &Matrix<R>) -> Result<Matrix<R>> {
    let n = m.rows();
    let mut acc = Matrix::zeros(n, n);
    for (i, c) in coeffs.iter().enumerate() {
        let c = if i % 2 == 1 { c.negated() } else { c.clone() };
        acc = acc.mul(m)?.add(&Matrix::scalar(n, c))?;
    }
    Ok(acc)
}
