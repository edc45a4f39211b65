//! Homogeneous polynomials in 3 or 4 projective variables, degree 0 through 4.
//!
//! These carry the scalars, lines/planes, conics/quadrics, and identity
//! residuals of the whole crate in one sparse representation.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{normalize_primitive, Comparator, Scalar};

pub const MAX_DEGREE: u32 = 4;

const VAR_NAMES: [&str; 4] = ["x", "y", "z", "w"];

/// Exponent vector over at most 4 variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Monomial {
    exps: [u8; 4],
}

impl Monomial {
    pub fn new(exps: [u8; 4]) -> Self {
        Monomial { exps }
    }

    pub fn one() -> Self {
        Monomial { exps: [0; 4] }
    }

    pub fn var(i: usize) -> Self {
        let mut exps = [0u8; 4];
        exps[i] = 1;
        Monomial { exps }
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn exps(&self) -> &[u8; 4] {
        &self.exps
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = [0u8; 4];
        for (e, (a, b)) in exps.iter_mut().zip(self.exps.iter().zip(&other.exps)) {
            *e = a + b;
        }
        Monomial { exps }
    }
}

/// A sparse homogeneous polynomial: every stored monomial has total degree
/// exactly `degree`, zero coefficients are never stored.
///
/// The zero polynomial is degree-compatible with anything.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousPoly {
    vars: usize,
    degree: u32,
    terms: BTreeMap<Monomial, Scalar>,
}

impl HomogeneousPoly {
    pub fn zero(vars: usize) -> Self {
        HomogeneousPoly { vars, degree: 0, terms: BTreeMap::new() }
    }

    /// A degree-0 polynomial wrapping a scalar.
    pub fn constant(vars: usize, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        HomogeneousPoly { vars, degree: 0, terms }
    }

    /// A degree-1 polynomial from a coefficient vector (a line or plane).
    pub fn linear(coeffs: &[Scalar]) -> Self {
        let vars = coeffs.len();
        assert!(vars == 3 || vars == 4);
        let mut terms = BTreeMap::new();
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                terms.insert(Monomial::var(i), c.clone());
            }
        }
        HomogeneousPoly { vars, degree: 1, terms }
    }

    pub fn from_terms<I>(vars: usize, degree: u32, it: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, Scalar)>,
    {
        let mut terms = BTreeMap::new();
        for (m, c) in it {
            if c.is_zero() {
                continue;
            }
            if m.degree() != degree {
                return Err(Error::DegreeMismatch(m.degree(), degree));
            }
            if m.exps().iter().skip(vars).any(|&e| e != 0) {
                return Err(Error::VariableCountMismatch(vars, 4));
            }
            let entry = terms.entry(m).or_insert_with(Scalar::zero);
            *entry = &*entry + &c;
        }
        terms.retain(|_, c: &mut Scalar| !c.is_zero());
        Ok(HomogeneousPoly { vars, degree, terms })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Coefficient of the product of variables `i` and `j` (the mixed or
    /// square monomial of a degree-2 polynomial).
    pub fn coeff2(&self, i: usize, j: usize) -> Scalar {
        self.coeff(&Monomial::var(i).mul(&Monomial::var(j)))
    }

    pub fn add(&self, other: &HomogeneousPoly) -> Result<HomogeneousPoly> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.vars != other.vars {
            return Err(Error::VariableCountMismatch(self.vars, other.vars));
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(*m).or_insert_with(Scalar::zero);
            *entry = &*entry + c;
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(HomogeneousPoly { vars: self.vars, degree: self.degree, terms })
    }

    pub fn sub(&self, other: &HomogeneousPoly) -> Result<HomogeneousPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> HomogeneousPoly {
        let terms = self.terms.iter().map(|(m, c)| (*m, -c)).collect();
        HomogeneousPoly { vars: self.vars, degree: self.degree, terms }
    }

    pub fn scale(&self, s: &Scalar) -> HomogeneousPoly {
        if s.is_zero() {
            return HomogeneousPoly::zero(self.vars);
        }
        let terms = self.terms.iter().map(|(m, c)| (*m, c * s)).collect();
        HomogeneousPoly { vars: self.vars, degree: self.degree, terms }
    }

    pub fn mul(&self, other: &HomogeneousPoly) -> Result<HomogeneousPoly> {
        if self.is_zero() || other.is_zero() {
            return Ok(HomogeneousPoly::zero(self.vars.max(other.vars)));
        }
        if self.vars != other.vars {
            return Err(Error::VariableCountMismatch(self.vars, other.vars));
        }
        let degree = self.degree + other.degree;
        if degree > MAX_DEGREE {
            return Err(Error::DegreeOverflow(degree));
        }
        let mut terms: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let entry = terms.entry(m).or_insert_with(Scalar::zero);
                *entry = &*entry + &(ca * cb);
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(HomogeneousPoly { vars: self.vars, degree, terms })
    }

    pub fn square(&self) -> Result<HomogeneousPoly> {
        self.mul(self)
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        let mut exact_seen = false;
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                for _ in 0..e {
                    term = &term * &point[i];
                }
            }
            acc = if exact_seen || !acc.is_zero() { &acc + &term } else { term };
            exact_seen = true;
        }
        acc
    }

    /// Coefficient vector of a degree-1 polynomial.
    pub fn linear_coeffs(&self) -> Vec<Scalar> {
        assert!(self.degree == 1 || self.is_zero());
        (0..self.vars).map(|i| self.coeff(&Monomial::var(i))).collect()
    }

    /// All coefficients in a fixed monomial order, for linear algebra over
    /// the coefficient space.
    pub fn coeff_vector(&self, degree: u32) -> Vec<Scalar> {
        monomials(self.vars, degree).into_iter().map(|m| self.coeff(&m)).collect()
    }

    /// Scales so coefficients form a primitive integer vector (exact mode)
    /// or have unit maximum magnitude (float mode), with the first nonzero
    /// coefficient in the canonical monomial order positive.
    pub fn normalize(&self) -> HomogeneousPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mons = monomials(self.vars, self.degree);
        let coeffs: Vec<Scalar> = mons.iter().map(|m| self.coeff(m)).collect();
        let normed = normalize_primitive(&coeffs);
        let terms = mons.into_iter().zip(normed).filter(|(_, c)| !c.is_zero()).collect();
        HomogeneousPoly { vars: self.vars, degree: self.degree, terms }
    }

    /// Projective equality: proportional by a nonzero factor.
    pub fn proj_eq(&self, other: &HomogeneousPoly, cmp: &Comparator) -> bool {
        if self.vars != other.vars {
            return false;
        }
        let deg = if self.is_zero() { other.degree } else { self.degree };
        let a = self.coeff_vector(deg);
        let b = other.coeff_vector(deg);
        cmp.proj_eq_vec(&a, &b)
    }

    pub fn is_zero_within(&self, cmp: &Comparator) -> bool {
        let scale = self.terms.values().map(|c| c.to_f64().abs()).fold(0.0f64, f64::max);
        self.terms.values().all(|c| cmp.scalar_is_zero_scaled(c, scale))
    }
}

/// All monomials of the given degree over `vars` variables, in the fixed
/// deterministic order used by `coeff_vector`: descending lexicographic in
/// the exponents, so degree 1 lists x, y, z(, w).
pub fn monomials(vars: usize, degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = [0u8; 4];
    fill(&mut out, &mut exps, 0, vars, degree);
    out.reverse();
    out
}

fn fill(out: &mut Vec<Monomial>, exps: &mut [u8; 4], i: usize, vars: usize, rem: u32) {
    if i == vars {
        if rem == 0 {
            out.push(Monomial::new(*exps));
        }
        return;
    }
    if i == vars - 1 {
        exps[i] = rem as u8;
        out.push(Monomial::new(*exps));
        exps[i] = 0;
        return;
    }
    for e in 0..=rem {
        exps[i] = e as u8;
        fill(out, exps, i + 1, vars, rem - e);
    }
    exps[i] = 0;
}

impl fmt::Display for HomogeneousPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, &e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*{}", VAR_NAMES[i])?,
                    _ => write!(f, "*{}^{}", VAR_NAMES[i], e)?,
                }
            }
        }
        Ok(())
    }
}

/// Convenience constructor for tests and builders: a degree-1 polynomial in
/// 3 variables from integer coefficients.
pub fn line_i64(a: i64, b: i64, c: i64) -> HomogeneousPoly {
    HomogeneousPoly::linear(&[Scalar::int(a), Scalar::int(b), Scalar::int(c)])
}

/// Degree-1 polynomial in 4 variables from integer coefficients.
pub fn plane_i64(a: i64, b: i64, c: i64, d: i64) -> HomogeneousPoly {
    HomogeneousPoly::linear(&[Scalar::int(a), Scalar::int(b), Scalar::int(c), Scalar::int(d)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> HomogeneousPoly {
        line_i64(1, 0, 0)
    }
    fn y() -> HomogeneousPoly {
        line_i64(0, 1, 0)
    }
    fn z() -> HomogeneousPoly {
        line_i64(0, 0, 1)
    }

    #[test]
    fn add_identity_and_inverse() {
        let x2 = x().square().unwrap();
        assert_eq!(x2.add(&HomogeneousPoly::zero(3)).unwrap(), x2);
        let y2 = y().square().unwrap();
        let circle = x2.add(&y2).unwrap().sub(&z().square().unwrap()).unwrap();
        let sum = circle.add(&y2).unwrap();
        // (x^2+y^2-z^2) + y^2 = x^2 + 2y^2 - z^2
        assert!(sum.coeff2(1, 1).eq_strict(&Scalar::int(2)));
        let zero = circle.sub(&circle).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn mul_difference_of_squares() {
        let f = x().add(&y()).unwrap();
        let g = x().sub(&y()).unwrap();
        let prod = f.mul(&g).unwrap();
        let expect = x().square().unwrap().sub(&y().square().unwrap()).unwrap();
        assert_eq!(prod, expect);
    }

    #[test]
    fn square_expansion_matches_term_by_term_oracle() {
        // (x + 2y - z)^2 expanded independently, coefficient by coefficient.
        let l = line_i64(1, 2, -1);
        let sq = l.square().unwrap();
        let oracle: Vec<(usize, usize, i64)> = vec![
            (0, 0, 1),
            (1, 1, 4),
            (2, 2, 1),
            (0, 1, 4),
            (0, 2, -2),
            (1, 2, -4),
        ];
        for (i, j, c) in oracle {
            assert!(sq.coeff2(i, j).eq_strict(&Scalar::int(c)), "({i},{j})");
        }
    }

    #[test]
    fn degree_overflow_rejected() {
        let x2 = x().square().unwrap();
        let x4 = x2.square().unwrap();
        assert_eq!(x4.degree(), 4);
        assert!(matches!(x4.mul(&x()), Err(Error::DegreeOverflow(5))));
    }

    #[test]
    fn degree_mismatch_rejected() {
        assert!(matches!(x().add(&x().square().unwrap()), Err(Error::DegreeMismatch(_, _))));
    }

    #[test]
    fn monomial_count() {
        assert_eq!(monomials(3, 2).len(), 6);
        assert_eq!(monomials(4, 2).len(), 10);
        assert_eq!(monomials(3, 4).len(), 15);
    }
}
