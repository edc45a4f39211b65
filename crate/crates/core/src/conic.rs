//! Complete conics and quadrics, polarities, pencils, and the contact
//! predicates: double contact in the plane, ring contact in space.

use num::rational::BigRational;
use num::Zero;

use crate::error::{Error, Result};
use crate::matrix::{extract_double_line, sym_to_poly, Sign, SymMatrix};
use crate::poly::HomogeneousPoly;
use crate::projective::{ProjHyperplane, ProjPoint};
use crate::roots::{real_roots, real_roots_f64, RatPoly, RealRoot};
use crate::scalar::{Comparator, Mode, Scalar};

/// A conic (order 3) or quadric (order 4) carried as the pair of a primal
/// point-wise matrix and a dual line/plane-wise matrix with
/// `primal * dual = lambda * I`.
#[derive(Clone, Debug)]
pub struct CompleteConic {
    pub primal: SymMatrix,
    pub dual: SymMatrix,
}

/// Same structure, order 4.
pub type CompleteQuadric = CompleteConic;

impl CompleteConic {
    /// Builds the pair from a primal matrix alone: the dual is the adjugate.
    /// Rank-1 primals have vanishing adjugate and need a supplied dual.
    pub fn from_primal(primal: &SymMatrix) -> Result<Self> {
        if primal.is_zero() {
            return Err(Error::InvalidParameter("zero primal".into()));
        }
        let dual = primal.adjugate();
        if dual.is_zero() {
            return Err(Error::NeedsDualPartner);
        }
        Ok(CompleteConic { primal: primal.clone(), dual })
    }

    /// Builds from both partners, checking the pairing invariant.
    pub fn from_pair(primal: SymMatrix, dual: SymMatrix, cmp: &Comparator) -> Result<Self> {
        if primal.is_zero() && dual.is_zero() {
            return Err(Error::InvalidParameter("both partners zero".into()));
        }
        if primal.product_scalar_of_identity(&dual, cmp).is_none() {
            return Err(Error::InvalidParameter("primal*dual is not a scalar multiple of the identity".into()));
        }
        Ok(CompleteConic { primal, dual })
    }

    pub fn order(&self) -> usize {
        self.primal.order()
    }

    pub fn proj_eq(&self, other: &CompleteConic, cmp: &Comparator) -> bool {
        self.primal.proj_eq(&other.primal, cmp)
    }

    pub fn scale(&self, s: &Scalar) -> CompleteConic {
        // Dual scales by s^(n-1) to keep adjugate pairing; projective anyway,
        // so plain rescaling of the primal with dual fixed is also sound.
        CompleteConic { primal: self.primal.scale(s), dual: self.dual.clone() }
    }
}

/// Polar line (plane) of a point with respect to a conic (quadric).
pub fn polar(c: &CompleteConic, p: &ProjPoint, cmp: &Comparator) -> Result<ProjHyperplane> {
    let v = c.primal.apply(&p.0);
    if v.iter().all(|s| cmp.scalar_is_zero(s)) {
        return Err(Error::DegenerateSetMember);
    }
    Ok(ProjHyperplane(v))
}

/// Polar point of a line (plane) with respect to the dual partner.
pub fn polar_of_hyperplane(c: &CompleteConic, h: &ProjHyperplane, cmp: &Comparator) -> Result<ProjPoint> {
    let v = c.dual.apply(&h.0);
    if v.iter().all(|s| cmp.scalar_is_zero(s)) {
        return Err(Error::DegenerateSetMember);
    }
    Ok(ProjPoint(v))
}

/// Pencil parameter of a degenerate member: the member is
/// `alpha * A + beta * B`.
#[derive(Clone, Debug)]
pub enum PencilParam {
    /// Finite rational parameter t: member A + t B.
    Rational(Scalar),
    /// Irrational parameter isolated in a rational interval.
    Isolated { lo: Scalar, hi: Scalar },
    /// The member B itself (the point at infinity of the pencil).
    AtInfinity,
    /// Numeric parameter in float mode.
    Approx(f64),
}

/// A degenerate member of a pencil of conics or quadrics.
#[derive(Clone, Debug)]
pub struct PencilDegeneracy {
    pub param: PencilParam,
    /// The member matrix, when exactly representable.
    pub member: Option<SymMatrix>,
    pub rank: Option<usize>,
}

/// All degenerate members of the pencil spanned by the primal matrices of A
/// and B: roots of det(A + tB), plus B itself when det(B) = 0.
pub fn pencil_degenerates(a: &CompleteConic, b: &CompleteConic, cmp: &Comparator) -> Result<Vec<PencilDegeneracy>> {
    if a.proj_eq(b, cmp) {
        return Err(Error::ProjectivelyEqual);
    }
    let coeffs = det_pencil_coeffs(&a.primal, &b.primal);
    let mut out = Vec::new();
    match coeffs[0].mode() {
        Mode::Exact => {
            let rp = RatPoly::from_scalars(&coeffs).expect("exact coefficients");
            if rp.is_zero() {
                // Every member is degenerate; report the endpoints.
                for (param, m) in [
                    (PencilParam::Rational(Scalar::zero()), a.primal.clone()),
                    (PencilParam::AtInfinity, b.primal.clone()),
                ] {
                    let rank = m.rank(cmp);
                    out.push(PencilDegeneracy { param, member: Some(m), rank: Some(rank) });
                }
                return Ok(out);
            }
            for root in real_roots(&rp) {
                match root {
                    RealRoot::Rational(t) => {
                        let ts = Scalar::Exact(t);
                        let m = a.primal.add(&b.primal.scale(&ts));
                        let rank = m.rank(cmp);
                        out.push(PencilDegeneracy { param: PencilParam::Rational(ts), member: Some(m), rank: Some(rank) });
                    }
                    RealRoot::Isolated { lo, hi } => {
                        out.push(PencilDegeneracy {
                            param: PencilParam::Isolated { lo: Scalar::Exact(lo), hi: Scalar::Exact(hi) },
                            member: None,
                            rank: None,
                        });
                    }
                }
            }
        }
        Mode::Float => {
            let cf: Vec<f64> = coeffs.iter().map(|s| s.to_f64()).collect();
            for t in real_roots_f64(&cf) {
                let ts = Scalar::Float(t);
                let m = a.primal.add(&b.primal.scale(&ts));
                let rank = m.rank(cmp);
                out.push(PencilDegeneracy { param: PencilParam::Approx(t), member: Some(m), rank: Some(rank) });
            }
        }
    }
    if cmp.scalar_is_zero(&b.primal.det()) {
        let rank = b.primal.rank(cmp);
        out.push(PencilDegeneracy { param: PencilParam::AtInfinity, member: Some(b.primal.clone()), rank: Some(rank) });
    }
    Ok(out)
}

/// Coefficients of det(A + tB) as a polynomial in t, degree = order.
fn det_pencil_coeffs(a: &SymMatrix, b: &SymMatrix) -> Vec<Scalar> {
    let n = a.order();
    // Interpolate through n+1 sample points; exact arithmetic makes this safe.
    let pts: Vec<i64> = (0..=n as i64).collect();
    let vals: Vec<Scalar> = pts
        .iter()
        .map(|&t| {
            let ts = match a.at(0, 0).mode() {
                Mode::Float => Scalar::Float(t as f64),
                Mode::Exact => Scalar::int(t),
            };
            a.add(&b.scale(&ts)).det()
        })
        .collect();
    // Newton / Lagrange interpolation on integer nodes.
    let mut coeffs = vec![Scalar::zero(); n + 1];
    // Solve the Vandermonde system directly: small n.
    let rows: Vec<Vec<Scalar>> = pts
        .iter()
        .map(|&t| {
            let ts = match vals[0].mode() {
                Mode::Float => Scalar::Float(t as f64),
                Mode::Exact => Scalar::int(t),
            };
            let mut row = Vec::with_capacity(n + 1);
            let mut p = match vals[0].mode() {
                Mode::Float => Scalar::Float(1.0),
                Mode::Exact => Scalar::one(),
            };
            for _ in 0..=n {
                row.push(p.clone());
                p = &p * &ts;
            }
            row
        })
        .collect();
    if let Ok(Some(sol)) = crate::matrix::solve_linear(&rows, &vals) {
        coeffs = sol;
    }
    coeffs
}

/// Outcome of a double- or ring-contact test.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Contact {
    /// A rank-1 member alpha·A + beta·B = ±(chord)² exists; `chord` is the
    /// normalized chord of contact (a ring plane for quadrics).
    Found {
        chord: HomogeneousPoly,
        alpha: Scalar,
        beta: Scalar,
        sign: Sign,
        /// Positive factor with alpha·A + beta·B = sign·scale·chord².
        scale: Scalar,
    },
    None,
}

impl Contact {
    pub fn found(&self) -> bool {
        matches!(self, Contact::Found { .. })
    }

    /// The parameter t with rank(A + tB) = 1, when alpha is nonzero.
    pub fn t(&self) -> Option<Scalar> {
        match self {
            Contact::Found { alpha, beta, .. } if !alpha.is_zero() => Some(beta / alpha),
            _ => None,
        }
    }
}

/// Double contact of two conics: the pencil contains a double line.
///
/// The short-circuit path handles A - B already of rank 1, which is the
/// normalized form the lattice engine produces.
pub fn double_contact(a: &CompleteConic, b: &CompleteConic, cmp: &Comparator) -> Result<Contact> {
    if a.proj_eq(b, cmp) {
        return Err(Error::ProjectivelyEqual);
    }
    let diff = a.primal.sub(&b.primal);
    if !diff.is_zero() && diff.rank(cmp) == 1 {
        let f = sym_to_poly(&diff);
        let (chord, sign, scale) = extract_double_line(&f, cmp)?;
        let mode = a.primal.mode();
        return Ok(Contact::Found {
            chord,
            alpha: Scalar::of_mode(mode, 1),
            beta: Scalar::of_mode(mode, -1),
            sign,
            scale,
        });
    }
    rank_one_member(&a.primal, &b.primal, cmp)
}

/// Result of a ring-contact test between quadrics.
#[derive(Clone, Debug)]
pub struct RingContact {
    pub contact: Contact,
    pub ring_plane: Option<ProjHyperplane>,
    pub ring_point: Option<ProjPoint>,
    /// Set when the ring point is incident to the ring plane: the contact
    /// conic degenerates to a line pair.
    pub x_contact: bool,
}

/// Ring contact of two quadrics, with the ring point computed as the polar
/// of the ring plane.
pub fn ring_contact(a: &CompleteQuadric, b: &CompleteQuadric, cmp: &Comparator) -> Result<RingContact> {
    let contact = double_contact(a, b, cmp)?;
    match &contact {
        Contact::Found { chord, .. } => {
            let plane = ProjHyperplane::new(chord.linear_coeffs())?;
            let point = polar_of_hyperplane(a, &plane, cmp).ok();
            let x_contact = match &point {
                Some(p) => p.on(&plane, cmp),
                None => false,
            };
            Ok(RingContact { contact: contact.clone(), ring_plane: Some(plane), ring_point: point, x_contact })
        }
        Contact::None => Ok(RingContact { contact, ring_plane: None, ring_point: None, x_contact: false }),
    }
}

/// Finds a rank-1 member of the pencil span{A, B} exactly.
///
/// The locus rank(A + tB) <= 1 is cut out by all 2x2 minors, quadratics in
/// t; their gcd is computed over the rationals so the decision stays exact.
fn rank_one_member(a: &SymMatrix, b: &SymMatrix, cmp: &Comparator) -> Result<Contact> {
    // B itself may be the rank-1 member.
    if b.rank(cmp) == 1 {
        let f = sym_to_poly(b);
        let (chord, sign, scale) = extract_double_line(&f, cmp)?;
        let mode = b.mode();
        return Ok(Contact::Found { chord, alpha: Scalar::zero(), beta: Scalar::of_mode(mode, 1), sign, scale });
    }
    let n = a.order();
    match a.at(0, 0).mode() {
        Mode::Float => {
            // Float mode: roots of det, then rank test at each root.
            let coeffs: Vec<f64> = det_pencil_coeffs(a, b).iter().map(|s| s.to_f64()).collect();
            for t in real_roots_f64(&coeffs) {
                let m = a.add(&b.scale(&Scalar::Float(t)));
                if m.rank(cmp) == 1 {
                    let (chord, sign, scale) = extract_double_line(&sym_to_poly(&m), cmp)?;
                    return Ok(Contact::Found { chord, alpha: Scalar::Float(1.0), beta: Scalar::Float(t), sign, scale });
                }
            }
            Ok(Contact::None)
        }
        Mode::Exact => {
            // Collect the 2x2 minors of A + tB as quadratics in t.
            let mut gcd: Option<RatPoly> = None;
            for i0 in 0..n {
                for i1 in (i0 + 1)..n {
                    for j0 in 0..n {
                        for j1 in (j0 + 1)..n {
                            let minor = minor2_poly(a, b, i0, i1, j0, j1);
                            if minor.is_zero() {
                                continue;
                            }
                            gcd = Some(match gcd {
                                None => normalize_ratpoly(minor),
                                Some(g) => g.gcd(&minor),
                            });
                            if let Some(g) = &gcd {
                                if g.degree() == 0 {
                                    return Ok(Contact::None);
                                }
                            }
                        }
                    }
                }
            }
            let Some(g) = gcd else {
                // Every minor vanished identically: the whole pencil is rank <= 1.
                return Err(Error::ProjectivelyEqual);
            };
            let mut irrational_possible = false;
            for root in real_roots(&g) {
                match root {
                    RealRoot::Rational(t) => {
                        let ts = Scalar::Exact(t);
                        let m = a.add(&b.scale(&ts));
                        if m.is_zero() {
                            continue;
                        }
                        if m.rank(cmp) == 1 {
                            let (chord, sign, scale) = extract_double_line(&sym_to_poly(&m), cmp)?;
                            return Ok(Contact::Found { chord, alpha: Scalar::one(), beta: ts, sign, scale });
                        }
                    }
                    RealRoot::Isolated { .. } => irrational_possible = true,
                }
            }
            if irrational_possible {
                return Err(Error::IrrationalContact);
            }
            Ok(Contact::None)
        }
    }
}

fn normalize_ratpoly(p: RatPoly) -> RatPoly {
    if p.is_zero() {
        return p;
    }
    let lead = p.0.last().unwrap().clone();
    RatPoly::new(p.0.iter().map(|c| c / &lead).collect())
}

/// The (i0 i1 | j0 j1) minor of A + tB as a quadratic in t over the rationals.
fn minor2_poly(a: &SymMatrix, b: &SymMatrix, i0: usize, i1: usize, j0: usize, j1: usize) -> RatPoly {
    let e = |m: &SymMatrix, i: usize, j: usize| m.at(i, j).as_exact().expect("exact mode").clone();
    let (a00, a01, a10, a11) = (e(a, i0, j0), e(a, i0, j1), e(a, i1, j0), e(a, i1, j1));
    let (b00, b01, b10, b11) = (e(b, i0, j0), e(b, i0, j1), e(b, i1, j0), e(b, i1, j1));
    // det((a + t b)) for a 2x2 block.
    let c0 = &a00 * &a11 - &a01 * &a10;
    let c1 = &a00 * &b11 + &b00 * &a11 - &a01 * &b10 - &b01 * &a10;
    let c2 = &b00 * &b11 - &b01 * &b10;
    RatPoly::new(vec![c0, c1, c2])
}

/// Splits a rank-2 quadratic form into its two linear factors when they are
/// rational; the carrier of the pair is the kernel point.
pub fn split_line_pair(m: &SymMatrix, cmp: &Comparator) -> Result<(HomogeneousPoly, HomogeneousPoly)> {
    if m.rank(cmp) != 2 {
        return Err(Error::InvalidParameter(format!("rank {} form is not a line pair", m.rank(cmp))));
    }
    let f = sym_to_poly(m);
    let n = m.order();
    // Find a variable with nonzero square coefficient; substitute to create
    // one if necessary (x_i -> x_i + x_j shear).
    for i in 0..n {
        if !m.at(i, i).is_zero() {
            return split_with_square(&f, m, i, cmp);
        }
    }
    // No square term: pick i, j with a mixed term and shear x_j += x_i.
    for i in 0..n {
        for j in (i + 1)..n {
            if !m.at(i, j).is_zero() {
                let sheared = shear(m, j, i);
                let (u, v) = split_line_pair(&sheared, cmp)?;
                // Undo the shear on the factors: coefficients transform by
                // the transpose substitution.
                return Ok((unshear_line(&u, j, i), unshear_line(&v, j, i)));
            }
        }
    }
    Err(Error::InvalidParameter("zero form".into()))
}

/// Congruence by the shear x_target += x_source.
fn shear(m: &SymMatrix, target: usize, source: usize) -> SymMatrix {
    let n = m.order();
    let one = Scalar::of_mode(m.mode(), 1);
    let mut cols: Vec<Vec<Scalar>> = Vec::with_capacity(n);
    for c in 0..n {
        let mut col = vec![Scalar::zero(); n];
        col[c] = one.clone();
        if c == target {
            col[source] = one.clone();
        }
        cols.push(col);
    }
    m.congruence(&cols)
}

fn unshear_line(l: &HomogeneousPoly, target: usize, source: usize) -> HomogeneousPoly {
    // Factors were found in the sheared coordinates y with x = T y,
    // x_source = y_source + y_target; composing with T^{-1} turns the
    // coefficient vector u' into u with u_target = u'_target - u'_source.
    let mut coeffs = l.linear_coeffs();
    let s = coeffs[source].clone();
    coeffs[target] = &coeffs[target] - &s;
    HomogeneousPoly::linear(&coeffs)
}

fn split_with_square(f: &HomogeneousPoly, m: &SymMatrix, i: usize, cmp: &Comparator) -> Result<(HomogeneousPoly, HomogeneousPoly)> {
    let n = m.order();
    // f = a x_i^2 + 2 x_i b(rest) + c(rest): factors from the quadratic formula;
    // the discriminant b^2 - a c is a perfect square of a linear form.
    let a = m.at(i, i).clone();
    let bvec: Vec<Scalar> = (0..n).map(|j| if j == i { Scalar::zero() } else { m.at(i, j).clone() }).collect();
    let b = HomogeneousPoly::linear(&bvec);
    // c = f - a x_i^2 - 2 x_i b
    let xi = unit_line(n, i);
    let two = Scalar::of_mode(a.mode(), 2);
    let c = f
        .sub(&xi.square()?.scale(&a))?
        .sub(&xi.mul(&b)?.scale(&two))?;
    let disc = b.square()?.sub(&c.scale(&a))?;
    if disc.is_zero() {
        // Double line a(x_i + b/a)^2; rank 2 excludes this.
        return Err(Error::InvalidParameter("double line".into()));
    }
    let (root, sign, scale) = extract_double_line(&disc, cmp)?;
    if sign == Sign::Minus {
        return Err(Error::IrrationalData("line pair has complex factors".into()));
    }
    let s = scale.sqrt().ok_or_else(|| Error::IrrationalData("irrational line-pair split".into()))?;
    // factors: a x_i + b ± s·root (up to overall scale a)
    let u = xi.scale(&a).add(&b)?.add(&root.scale(&s))?;
    let v = xi.scale(&a).add(&b)?.sub(&root.scale(&s))?;
    Ok((u.normalize(), v.normalize()))
}

fn unit_line(n: usize, i: usize) -> HomogeneousPoly {
    let mut c = vec![Scalar::zero(); n];
    c[i] = Scalar::one();
    HomogeneousPoly::linear(&c)
}

/// Exposes the rational-root structure of the characteristic pencil for
/// callers needing the full degenerate set.
pub fn pencil_det_poly(a: &SymMatrix, b: &SymMatrix) -> Vec<Scalar> {
    det_pencil_coeffs(a, b)
}

pub fn bigrational_zero() -> BigRational {
    BigRational::zero()
}
