//! Real-root machinery for the low-degree univariate polynomials that arise
//! from pencil determinants (degree at most 4).
//!
//! Exact mode finds every rational root exactly and isolates irrational real
//! roots in rational intervals by sign-variation bisection; no Sturm chains.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::scalar::Scalar;

/// Dense univariate polynomial over the rationals, ascending coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct RatPoly(pub Vec<BigRational>);

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        RatPoly(coeffs)
    }

    pub fn from_scalars(coeffs: &[Scalar]) -> Option<Self> {
        let mut v = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            v.push(c.as_exact()?.clone());
        }
        Some(RatPoly::new(v))
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = &acc * t + c;
        }
        acc
    }

    pub fn derivative(&self) -> RatPoly {
        if self.0.len() <= 1 {
            return RatPoly::new(vec![BigRational::zero()]);
        }
        RatPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Synthetic division by (t - r); remainder must be zero.
    pub fn deflate(&self, r: &BigRational) -> RatPoly {
        let n = self.0.len();
        let mut out = vec![BigRational::zero(); n - 1];
        let mut carry = self.0[n - 1].clone();
        for i in (0..n - 1).rev() {
            out[i] = carry.clone();
            carry = &self.0[i] + &(&carry * r);
        }
        debug_assert!(carry.is_zero(), "deflation by a non-root");
        RatPoly::new(out)
    }

    /// Primitive integer coefficients with the same roots.
    fn to_int(&self) -> Vec<BigInt> {
        let mut lcm = BigInt::one();
        for c in &self.0 {
            lcm = num::integer::lcm(lcm, c.denom().clone());
        }
        let ints: Vec<BigInt> = self.0.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
        let mut gcd = BigInt::zero();
        for i in &ints {
            gcd = num::integer::gcd(gcd, i.clone());
        }
        if gcd.is_zero() {
            return ints;
        }
        ints.iter().map(|i| i / &gcd).collect()
    }

    /// Polynomial gcd over the rationals, monic result.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lead = a.0.last().unwrap().clone();
        RatPoly::new(a.0.iter().map(|c| c / &lead).collect())
    }

    fn rem(&self, div: &RatPoly) -> RatPoly {
        let d = div.degree();
        if d == 0 {
            // Division by a nonzero constant leaves no remainder.
            return RatPoly::new(vec![BigRational::zero()]);
        }
        let mut r = self.0.clone();
        let lead = div.0.last().unwrap();
        while r.len() > d && r.len() > 1 {
            let k = r.len() - 1;
            let factor = &r[k] / lead;
            if !factor.is_zero() {
                for i in 0..=d {
                    let idx = k - d + i;
                    let delta = &factor * &div.0[i];
                    r[idx] = &r[idx] - &delta;
                }
            }
            r.pop();
            while r.len() > 1 && r.last().unwrap().is_zero() {
                r.pop();
            }
            if r.iter().all(|c| c.is_zero()) {
                break;
            }
        }
        RatPoly::new(r)
    }

    /// Square-free part: self / gcd(self, self').
    pub fn squarefree(&self) -> RatPoly {
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.clone();
        }
        self.divide_exact(&g)
    }

    fn divide_exact(&self, div: &RatPoly) -> RatPoly {
        let mut r = self.0.clone();
        let d = div.degree();
        let lead = div.0.last().unwrap();
        let mut q = vec![BigRational::zero(); self.0.len() - d];
        while r.len() > d {
            let k = r.len() - 1;
            let factor = &r[k] / lead;
            q[k - d] = factor.clone();
            for i in 0..=d {
                let idx = k - d + i;
                let delta = &factor * &div.0[i];
                r[idx] = &r[idx] - &delta;
            }
            r.pop();
        }
        RatPoly::new(q)
    }
}

/// A real root: exact rational, or an open isolating interval with rational
/// endpoints containing exactly one irrational root.
#[derive(Clone, Debug)]
pub enum RealRoot {
    Rational(BigRational),
    Isolated { lo: BigRational, hi: BigRational },
}

/// All real roots of `p`, rationals exact, irrationals isolated.
pub fn real_roots(p: &RatPoly) -> Vec<RealRoot> {
    if p.is_zero() || p.degree() == 0 {
        return Vec::new();
    }
    let mut work = p.squarefree();
    let mut roots = Vec::new();
    // Root at zero first; the square-free part has it at most once.
    if work.0.len() > 1 && work.0[0].is_zero() {
        roots.push(RealRoot::Rational(BigRational::zero()));
        work = RatPoly::new(work.0[1..].to_vec());
    }
    // Rational roots by divisor search on the primitive integer form.
    for r in rational_roots(&work) {
        roots.push(RealRoot::Rational(r.clone()));
        work = work.deflate(&r);
    }
    if work.degree() >= 1 {
        for (lo, hi) in isolate_irrational(&work) {
            roots.push(RealRoot::Isolated { lo, hi });
        }
    }
    roots.sort_by(|a, b| root_key(a).partial_cmp(&root_key(b)).unwrap());
    roots
}

fn root_key(r: &RealRoot) -> f64 {
    match r {
        RealRoot::Rational(q) => crate::scalar::Scalar::Exact(q.clone()).to_f64(),
        RealRoot::Isolated { lo, hi } => {
            let l = crate::scalar::Scalar::Exact(lo.clone()).to_f64();
            let h = crate::scalar::Scalar::Exact(hi.clone()).to_f64();
            (l + h) / 2.0
        }
    }
}

/// Rational roots of a squarefree polynomial.
fn rational_roots(p: &RatPoly) -> Vec<BigRational> {
    let deg = p.degree();
    if deg == 0 {
        return Vec::new();
    }
    if deg == 1 {
        // a0 + a1 t = 0
        return vec![-&p.0[0] / &p.0[1]];
    }
    if deg == 2 {
        // Quadratic formula with exact square detection.
        let (a, b, c) = (&p.0[2], &p.0[1], &p.0[0]);
        let disc = b * b - BigRational::from_integer(BigInt::from(4)) * a * c;
        if disc.is_negative() {
            return Vec::new();
        }
        if let Some(s) = exact_sqrt(&disc) {
            let two_a = BigRational::from_integer(BigInt::from(2)) * a;
            return vec![(-b + &s) / &two_a, (-b - &s) / &two_a]
                .into_iter()
                .collect();
        }
        return Vec::new();
    }
    // Degree 3 or 4: candidate p/q from divisors of the constant and leading
    // integer coefficients, then verification and deflation.
    let ints = p.to_int();
    let a0 = ints[0].clone();
    let an = ints.last().unwrap().clone();
    if a0.is_zero() {
        // A zero constant term only reaches here if the earlier peel missed it.
        let mut found = vec![BigRational::zero()];
        found.extend(rational_roots(&p.deflate(&BigRational::zero())));
        return found;
    }
    let num_divs = divisors(&a0.abs());
    let den_divs = divisors(&an.abs());
    let mut found = Vec::new();
    let mut work = p.clone();
    'outer: for nd in &num_divs {
        for dd in &den_divs {
            for sign in [1i64, -1] {
                let cand = BigRational::new(nd * BigInt::from(sign), dd.clone());
                if work.degree() < 1 {
                    break 'outer;
                }
                if work.eval(&cand).is_zero() {
                    found.push(cand.clone());
                    work = work.deflate(&cand);
                    // Squarefree: no repeated roots, but re-test lower degrees.
                    if work.degree() <= 2 {
                        found.extend(rational_roots(&work));
                        return found;
                    }
                }
            }
        }
    }
    found
}

fn exact_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let sn = r.numer().sqrt();
    let sd = r.denom().sqrt();
    if &sn * &sn == *r.numer() && &sd * &sd == *r.denom() {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

/// Divisors of a positive integer by trial division. Inputs here come from
/// small random corpora; a hard cap keeps the worst case bounded.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut divs = vec![BigInt::one()];
    if n.is_zero() {
        return divs;
    }
    let mut m = n.clone();
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut d = BigInt::from(2);
    let cap = BigInt::from(1_000_000u64);
    while &d * &d <= m && d <= cap {
        let mut k = 0;
        while (&m % &d).is_zero() {
            m = &m / &d;
            k += 1;
        }
        if k > 0 {
            primes.push((d.clone(), k));
        }
        d += 1;
    }
    if m > BigInt::one() {
        primes.push((m, 1));
    }
    for (pr, k) in primes {
        let base: Vec<BigInt> = divs.clone();
        let mut power = BigInt::one();
        for _ in 0..k {
            power = &power * &pr;
            for b in &base {
                divs.push(b * &power);
            }
        }
    }
    divs.sort();
    divs.dedup();
    divs
}

/// Descartes/Vincent bisection isolation of the real roots of a squarefree
/// polynomial with no rational roots remaining.
fn isolate_irrational(p: &RatPoly) -> Vec<(BigRational, BigRational)> {
    let ints = p.to_int();
    let n = ints.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    // Cauchy bound.
    let lead = ints[n].clone().abs();
    let maxc = ints[..n].iter().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero);
    let bound = BigRational::one() + BigRational::new(maxc, lead);
    let mut out = Vec::new();
    let mut stack = vec![(-bound.clone(), bound.clone())];
    let mut guard = 0;
    while let Some((a, b)) = stack.pop() {
        guard += 1;
        if guard > 10_000 {
            break;
        }
        let v = sign_variations_in(p, &a, &b);
        match v {
            0 => {}
            1 => out.push((a, b)),
            _ => {
                let mid = (&a + &b) / BigRational::from_integer(BigInt::from(2));
                if p.eval(&mid).is_zero() {
                    // Rational root the divisor search missed; record as a
                    // degenerate interval.
                    out.push((mid.clone(), mid.clone()));
                }
                stack.push((a, mid.clone()));
                stack.push((mid, b));
            }
        }
    }
    out.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    out
}

/// Number of sign variations of the coefficients of the Möbius-transformed
/// polynomial, bounding the root count in the open interval (a, b).
fn sign_variations_in(p: &RatPoly, a: &BigRational, b: &BigRational) -> usize {
    // q(u) = (1+u)^n p((a + b u)/(1 + u))
    let n = p.degree();
    // Compute coefficients of q by evaluating p's homogenized form:
    // q(u) = sum_i c_i (a + b u)^i (1 + u)^(n-i)
    let mut q = vec![BigRational::zero(); n + 1];
    for (i, c) in p.0.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let poly_ab = binomial_expand(a, b, i);
        let poly_one = binomial_expand(&BigRational::one(), &BigRational::one(), n - i);
        for (da, ca) in poly_ab.iter().enumerate() {
            for (db, cb) in poly_one.iter().enumerate() {
                q[da + db] = &q[da + db] + &(c * ca * cb);
            }
        }
    }
    let signs: Vec<i8> = q
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| if c.is_negative() { -1 } else { 1 })
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Coefficients of (a + b u)^k in u.
fn binomial_expand(a: &BigRational, b: &BigRational, k: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::one()];
    for _ in 0..k {
        let mut next = vec![BigRational::zero(); out.len() + 1];
        for (i, c) in out.iter().enumerate() {
            next[i] = &next[i] + &(c * a);
            next[i + 1] = &next[i + 1] + &(c * b);
        }
        out = next;
    }
    out
}

/// Float-mode real roots for degree at most 4: recursive critical-point
/// bisection, adequate for corpus-scale coefficients.
pub fn real_roots_f64(coeffs: &[f64]) -> Vec<f64> {
    let mut c: Vec<f64> = coeffs.to_vec();
    while c.len() > 1 && c.last().unwrap().abs() < 1e-300 {
        c.pop();
    }
    let n = c.len() - 1;
    match n {
        0 => Vec::new(),
        1 => vec![-c[0] / c[1]],
        _ => {
            let deriv: Vec<f64> = c.iter().enumerate().skip(1).map(|(i, v)| v * i as f64).collect();
            let mut crit = real_roots_f64(&deriv);
            crit.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let lead = c[n].abs();
            let bound = 1.0 + c[..n].iter().map(|v| v.abs()).fold(0.0f64, f64::max) / lead;
            let mut pts = vec![-bound];
            pts.extend(crit);
            pts.push(bound);
            let eval = |t: f64| c.iter().rev().fold(0.0, |acc, v| acc * t + v);
            let mut roots = Vec::new();
            for w in pts.windows(2) {
                let (mut a, mut b) = (w[0], w[1]);
                let (fa, fb) = (eval(a), eval(b));
                if fa == 0.0 {
                    roots.push(a);
                    continue;
                }
                if fa * fb > 0.0 {
                    continue;
                }
                for _ in 0..200 {
                    let m = 0.5 * (a + b);
                    let fm = eval(m);
                    if fm == 0.0 {
                        a = m;
                        b = m;
                        break;
                    }
                    if fa * fm < 0.0 {
                        b = m;
                    } else {
                        a = m;
                    }
                }
                roots.push(0.5 * (a + b));
            }
            let last = eval(pts[pts.len() - 1]);
            if last == 0.0 {
                roots.push(pts[pts.len() - 1]);
            }
            roots.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
            roots
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp(coeffs: &[i64]) -> RatPoly {
        RatPoly::new(coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect())
    }

    #[test]
    fn rational_cubic_roots() {
        // (t-1)(t+2)(2t-3) = 2t^3 + t^2 - 7t + ... expand: (t-1)(t+2) = t^2+t-2; *(2t-3): 2t^3+2t^2-4t -3t^2-3t+6 = 2t^3 - t^2 -7t + 6
        let p = rp(&[6, -7, -1, 2]);
        let roots = real_roots(&p);
        assert_eq!(roots.len(), 3);
        let vals: Vec<f64> = roots.iter().map(super::root_key).collect();
        assert!((vals[0] + 2.0).abs() < 1e-12);
        assert!((vals[1] - 1.0).abs() < 1e-12);
        assert!((vals[2] - 1.5).abs() < 1e-12);
        assert!(roots.iter().all(|r| matches!(r, RealRoot::Rational(_))));
    }

    #[test]
    fn irrational_roots_isolated() {
        // t^2 - 2: irrational pair
        let p = rp(&[-2, 0, 1]);
        let roots = real_roots(&p);
        assert_eq!(roots.len(), 2);
        for r in roots {
            match r {
                RealRoot::Isolated { lo, hi } => {
                    let l = RatPoly::new(vec![lo.clone()]).0[0].clone();
                    let _ = l;
                    let fl = p.eval(&lo);
                    let fh = p.eval(&hi);
                    assert!(fl.is_negative() != fh.is_negative());
                }
                RealRoot::Rational(_) => panic!("sqrt(2) is not rational"),
            }
        }
    }

    #[test]
    fn mixed_quartic() {
        // (t-1)(t^2-3)(t+4)
        // t^2-3 -> irr; multiply out: (t-1)(t+4) = t^2+3t-4; *(t^2-3) = t^4+3t^3-4t^2 -3t^2-9t+12 = t^4+3t^3-7t^2-9t+12
        let p = rp(&[12, -9, -7, 3, 1]);
        let roots = real_roots(&p);
        assert_eq!(roots.len(), 4);
        let rational: Vec<f64> = roots
            .iter()
            .filter(|r| matches!(r, RealRoot::Rational(_)))
            .map(super::root_key)
            .collect();
        assert_eq!(rational.len(), 2);
        assert!(rational.contains(&1.0) && rational.contains(&-4.0));
    }

    #[test]
    fn f64_roots() {
        let roots = real_roots_f64(&[-2.0, 0.0, 1.0]);
        assert_eq!(roots.len(), 2);
        assert!((roots[0] + 2f64.sqrt()).abs() < 1e-9);
        assert!((roots[1] - 2f64.sqrt()).abs() < 1e-9);
    }
}
