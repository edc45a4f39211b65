//! The inverse problem: given seven conics (or quadrics) of a cube
//! configuration, recover bordered-matrix parameters, compute the eighth
//! vertex, decide uniqueness, and in the coincident-face-point regime
//! construct the second completion from the shared-contact parameter space.

use std::collections::BTreeMap;

use crate::conic::{double_contact, polar_of_hyperplane, CompleteConic, Contact};
use crate::engine::{build_lattice, IndexSet, PenroseLattice, PenroseParams};
use crate::error::{Error, Result};
use crate::matrix::{extract_double_line, nullspace, poly_to_sym, solve_linear, sym_to_poly, Sign, SymMatrix};
use crate::poly::HomogeneousPoly;
use crate::projective::{concurrent, dot, Line3D, ProjHyperplane, ProjPoint};
use crate::scalar::{Comparator, Scalar};

/// The seven given vertices, keyed by their subset labels; the open vertex
/// is the full set.
#[derive(Clone, Debug)]
pub struct SevenConfig {
    pub vars: usize,
    pub vertices: BTreeMap<IndexSet, CompleteConic>,
}

/// The nine edges present in a seven-vertex configuration.
pub fn seven_edges() -> Vec<(IndexSet, IndexSet)> {
    let mut out = Vec::new();
    let full = IndexSet::from_indices(&[1, 2, 3]);
    for om in IndexSet::all_subsets(3) {
        for k in 1..=3 {
            if om.contains(k) {
                continue;
            }
            let upper = om.insert(k);
            if upper == full {
                continue;
            }
            out.push((om, upper));
        }
    }
    out
}

impl SevenConfig {
    pub fn new(vars: usize, vertices: BTreeMap<IndexSet, CompleteConic>) -> Result<Self> {
        let full = IndexSet::from_indices(&[1, 2, 3]);
        for om in IndexSet::all_subsets(3) {
            if om == full {
                continue;
            }
            if !vertices.contains_key(&om) {
                return Err(Error::MissingVertex(om.label()));
            }
        }
        Ok(SevenConfig { vars, vertices })
    }

    pub fn vertex(&self, om: IndexSet) -> &CompleteConic {
        &self.vertices[&om]
    }

    /// Checks the nine edge contacts and the three complete faces' chord
    /// concurrency.
    pub fn validate(&self, cmp: &Comparator) -> Result<()> {
        let mut chords: BTreeMap<(IndexSet, IndexSet), HomogeneousPoly> = BTreeMap::new();
        for (lo, hi) in seven_edges() {
            let c = double_contact(self.vertex(lo), self.vertex(hi), cmp)?;
            match c {
                Contact::Found { chord, .. } => {
                    chords.insert((lo, hi), chord);
                }
                Contact::None => {
                    return Err(Error::InvalidParameter(format!(
                        "vertices {} and {} are not in contact",
                        lo.label(),
                        hi.label()
                    )))
                }
            }
        }
        // Complete faces: base empty, free {j, k}.
        for j in 1..=3usize {
            for k in (j + 1)..=3 {
                let e = IndexSet::EMPTY;
                let ej = IndexSet::from_indices(&[j]);
                let ek = IndexSet::from_indices(&[k]);
                let ejk = IndexSet::from_indices(&[j, k]);
                let lines: Vec<ProjHyperplane> = [
                    &chords[&(e, ej)],
                    &chords[&(e, ek)],
                    &chords[&(ej, ejk)],
                    &chords[&(ek, ejk)],
                ]
                .iter()
                .map(|c| ProjHyperplane::new(c.linear_coeffs()))
                .collect::<Result<_>>()?;
                if !concurrent(&lines, cmp)? {
                    return Err(Error::InconsistentFace(format!("face with free indices {{{j},{k}}}")));
                }
            }
        }
        Ok(())
    }
}

/// Parameters recovered from a seven-vertex configuration. The diagonal
/// entries are normalized to ±1: −1 is the standard preset, +1 occurs when
/// the first-layer difference has positive sign.
#[derive(Clone, Debug)]
pub struct RecoveredParams {
    pub params: PenroseParams,
    /// Scale applied to each first-layer input during normalization.
    pub scales: BTreeMap<IndexSet, Scalar>,
    /// Scale factor lambda with lambda * lattice vertex = input, for the
    /// three second-layer vertices.
    pub second_layer_scales: BTreeMap<IndexSet, Scalar>,
}

/// Rescales T so that rank(primal(S0) − t·primal(T)) = 1 and returns the
/// scaled copy, the chord, and t.
pub fn normalize_edge_scale(
    s0: &CompleteConic,
    t: &CompleteConic,
    cmp: &Comparator,
) -> Result<(CompleteConic, HomogeneousPoly, Scalar)> {
    let contact = double_contact(s0, t, cmp)?;
    match contact {
        Contact::Found { chord, alpha, beta, .. } => {
            if alpha.is_zero() {
                // T itself is the double line; no finite scaling makes
                // S0 - tT rank 1.
                return Err(Error::NoContact);
            }
            let tscale = -&(&beta / &alpha);
            Ok((t.scale(&tscale), chord, tscale))
        }
        Contact::None => Err(Error::NoContact),
    }
}

/// Recovers bordered-matrix parameters (lines, d = ±1, off-diagonal scalars)
/// from a validated seven-vertex configuration.
pub fn recover_params(seven: &SevenConfig, cmp: &Comparator) -> Result<RecoveredParams> {
    let s0 = seven.vertex(IndexSet::EMPTY);
    let s0_poly = sym_to_poly(&s0.primal);
    let mut lines = Vec::with_capacity(3);
    let mut d = Vec::with_capacity(3);
    let mut scales = BTreeMap::new();
    for i in 1..=3usize {
        let om = IndexSet::from_indices(&[i]);
        let (_scaled, _chord, t) = normalize_edge_scale(s0, seven.vertex(om), cmp)?;
        // S0 - t T_i = sign * scale * line².
        let diff = s0.primal.sub(&seven.vertex(om).primal.scale(&t));
        let (line, sign, scale) = extract_double_line(&sym_to_poly(&diff), cmp)?;
        let sqrt_scale = scale
            .sqrt()
            .ok_or_else(|| Error::IrrationalData(format!("edge scale for vertex {} is not a perfect square", om.label())))?;
        let weighted = line.scale(&sqrt_scale);
        // S0 - t T = sign * weighted², so the vertex slot d S0 - p² matches
        // with d = -1 for sign Minus (T = S0 + p²) and d = +1 for sign Plus.
        let di = match sign {
            Sign::Minus => Scalar::int(-1),
            Sign::Plus => Scalar::int(1),
        };
        lines.push(weighted);
        d.push(di);
        scales.insert(om, t);
    }
    // Face parameters: for the vertex opposite T^i (the second layer with
    // index set missing i), match against the face pencil span.
    let mut a_map: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
    let mut second_layer_scales = BTreeMap::new();
    for i in 1..=3usize {
        let rest: Vec<usize> = (1..=3).filter(|&j| j != i).collect();
        let (j, k) = (rest[0], rest[1]);
        let om = IndexSet::from_indices(&[j, k]);
        let s_input = sym_to_poly(&seven.vertex(om).primal);
        let (lambda, a) = recover_face_parameter(
            &s0_poly,
            &lines[j - 1],
            &lines[k - 1],
            &d[j - 1],
            &d[k - 1],
            &s_input,
            cmp,
        )?;
        a_map.insert((j, k), a);
        second_layer_scales.insert(om, lambda);
    }
    let params = PenroseParams::new(seven.vars, 3, s0_poly, lines, d, a_map)?;
    Ok(RecoveredParams { params, scales, second_layer_scales })
}

/// Solves lambda·S = (d_j d_k − a²)·S0 − d_k·q² + 2a·q·r − d_j·r² for
/// (lambda, a): S is projected onto the span of {S0, q², qr, r²}, a is read
/// from the qr-coefficient ratio, and the S0-coefficient must then satisfy
/// the quadratic consistency check.
fn recover_face_parameter(
    s0: &HomogeneousPoly,
    q: &HomogeneousPoly,
    r: &HomogeneousPoly,
    dj: &Scalar,
    dk: &Scalar,
    s: &HomogeneousPoly,
    cmp: &Comparator,
) -> Result<(Scalar, Scalar)> {
    let gens = [s0.clone(), q.square()?, q.mul(r)?, r.square()?];
    let coeffs = span_coordinates(&gens, s)?;
    let (alpha, beta, gamma, delta) = (&coeffs[0], &coeffs[1], &coeffs[2], &coeffs[3]);
    // beta = -lambda d_k, delta = -lambda d_j, gamma = 2 lambda a,
    // alpha = lambda (d_j d_k - a²).
    if beta.is_zero() && delta.is_zero() {
        return Err(Error::InconsistentFace("no square components in the face vertex".into()));
    }
    let lambda = -&(beta / dk);
    let lambda2 = -&(delta / dj);
    let scale = [alpha, beta, gamma, delta].iter().map(|s| s.to_f64().abs()).fold(0.0f64, f64::max);
    if !cmp.scalar_is_zero_scaled(&(&lambda - &lambda2), scale) {
        return Err(Error::InconsistentFace("inconsistent square coefficients".into()));
    }
    if lambda.is_zero() {
        return Err(Error::InconsistentFace("vanishing face scale".into()));
    }
    let a = (gamma / &lambda).div_int(2);
    let expect_alpha = &lambda * &(&(dj * dk) - &(&a * &a));
    if !cmp.scalar_is_zero_scaled(&(alpha - &expect_alpha), scale) {
        return Err(Error::InconsistentFace("quadratic consistency check failed (wrong contact branch)".into()));
    }
    Ok((lambda, a))
}

/// Coordinates of `s` in the linear span of `gens` over the conic
/// coefficient space; errors if the generators are dependent or `s` is off
/// the span.
fn span_coordinates(gens: &[HomogeneousPoly], s: &HomogeneousPoly) -> Result<Vec<Scalar>> {
    let deg = 2;
    let rows_t: Vec<Vec<Scalar>> = gens.iter().map(|g| g.coeff_vector(deg)).collect();
    let target = s.coeff_vector(deg);
    let ncoef = target.len();
    // Columns are generators.
    let a: Vec<Vec<Scalar>> = (0..ncoef).map(|i| rows_t.iter().map(|g| g[i].clone()).collect()).collect();
    let rank = crate::matrix::mat_rank(&rows_t, &Comparator::default());
    if rank < gens.len() {
        return Err(Error::DegenerateBasis);
    }
    match solve_linear(&a, &target)? {
        Some(x) => Ok(x),
        None => Err(Error::InconsistentFace("vertex lies outside the face pencil span".into())),
    }
}

/// How the second completion was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMode {
    Exact,
    Approximate,
}

/// A second completion with its verification residual.
#[derive(Clone, Debug)]
pub struct SecondCompletion {
    pub primal: SymMatrix,
    pub mode: SolveMode,
    /// Largest rank-1 residual of the three contact checks (0 when exact).
    pub residual: f64,
    /// True when this member also matches the determinant completion.
    pub matches_determinant: bool,
}

/// Result of completing a seven-vertex configuration.
#[derive(Clone, Debug)]
pub struct CompletionResult {
    pub primal: SymMatrix,
    pub dual: Option<SymMatrix>,
    pub unique: bool,
    pub second: Option<SecondCompletion>,
    pub recovered: RecoveredParams,
    pub lattice: PenroseLattice,
    pub notes: Vec<String>,
}

/// Completes the cube: recovers parameters, evaluates the eighth vertex from
/// the full bordered determinant, and (when all face points coincide) also
/// runs the shared-contact second completion. The determinant completion is
/// the one stable under perturbations of the coincidence.
pub fn complete(seven: &SevenConfig, cmp: &Comparator) -> Result<CompletionResult> {
    seven.validate(cmp)?;
    let recovered = recover_params(seven, cmp)?;
    let lattice = build_lattice(&recovered.params, cmp)?;
    // The rebuilt lattice must reproduce the inputs projectively.
    for (om, input) in &seven.vertices {
        let rebuilt = &lattice.vertices[om].poly;
        if !rebuilt.proj_eq(&sym_to_poly(&input.primal), cmp) {
            return Err(Error::InconsistentFace(format!("rebuilt vertex {} differs from the input", om.label())));
        }
    }
    let full = IndexSet::from_indices(&[1, 2, 3]);
    let t0 = lattice.vertices[&full].poly.clone();
    let mut notes = Vec::new();
    if t0.is_zero() {
        notes.push("determinant completion vanishes identically".into());
    }
    let primal = if t0.is_zero() { SymMatrix::zero(seven.vars) } else { poly_to_sym(&t0)? };
    let dual = if primal.is_zero() {
        None
    } else {
        let adj = primal.adjugate();
        if adj.is_zero() {
            None
        } else {
            Some(adj)
        }
    };
    let coincident = lattice.all_face_points_equal(cmp)?;
    let second = if coincident {
        notes.push(
            "all face points coincide: two completions exist; the determinant one is stable under perturbations of the coincidence, the other exists only because of it"
                .into(),
        );
        match second_completion(seven, &recovered, &primal, cmp) {
            Ok(sc) => Some(sc),
            Err(e) => {
                notes.push(format!("second completion unavailable: {e}"));
                None
            }
        }
    } else {
        None
    };
    Ok(CompletionResult { primal, dual, unique: !coincident, second, recovered, lattice, notes })
}

/// The shared-contact family in the coincident regime: all relevant members
/// lie in the span of {anchor, P², PQ, Q²} for two independent chords P, Q
/// through the common point (ring planes through the common axis, in space).
#[derive(Clone, Debug)]
pub struct SharedContactFamily {
    pub generators: [HomogeneousPoly; 4],
}

impl SharedContactFamily {
    /// Builds the family from an anchor member and two independent lines.
    pub fn new(anchor: HomogeneousPoly, p: HomogeneousPoly, q: HomogeneousPoly) -> Result<Self> {
        let p2 = p.square()?;
        let pq = p.mul(&q)?;
        let q2 = q.square()?;
        Ok(SharedContactFamily { generators: [anchor, p2, pq, q2] })
    }

    pub fn member(&self, coords: &[Scalar; 4]) -> Result<HomogeneousPoly> {
        let mut acc = HomogeneousPoly::zero(self.generators[0].vars());
        for (c, g) in coords.iter().zip(&self.generators) {
            acc = acc.add(&g.scale(c))?;
        }
        Ok(acc)
    }

    pub fn coordinates(&self, s: &HomogeneousPoly) -> Result<[Scalar; 4]> {
        let v = span_coordinates(&self.generators, s)?;
        Ok([v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()])
    }

    /// The double-line locus inside the plane x0 = 0: 4·x1·x3 − x2² = 0.
    fn disc(y: &[Scalar; 4]) -> Scalar {
        &(&y[1] * &y[3]).mul_int(4) - &(&y[2] * &y[2])
    }

    /// The quadratic form of the cone over the double-line locus with vertex
    /// at the member s: x lies on it iff the parameter line through s and x
    /// meets the locus.
    pub fn cone_matrix(&self, s: &[Scalar; 4]) -> SymMatrix {
        let eval = |x: &[Scalar; 4]| {
            let y = [
                Scalar::zero(),
                &(&s[0] * &x[1]) - &(&x[0] * &s[1]),
                &(&s[0] * &x[2]) - &(&x[0] * &s[2]),
                &(&s[0] * &x[3]) - &(&x[0] * &s[3]),
            ];
            Self::disc(&y)
        };
        quad_from_values(eval)
    }
}

/// Builds a symmetric 4x4 matrix from a quadratic-form evaluator by
/// polarization on the standard basis.
fn quad_from_values(eval: impl Fn(&[Scalar; 4]) -> Scalar) -> SymMatrix {
    let basis = |i: usize| {
        let mut v = [Scalar::zero(), Scalar::zero(), Scalar::zero(), Scalar::zero()];
        v[i] = Scalar::one();
        v
    };
    // Exact unit probes are mode-neutral through the zero-identity rule only
    // when multiplied; the disc products keep the member mode.
    let mut diag = Vec::with_capacity(4);
    for i in 0..4 {
        diag.push(eval(&basis(i)));
    }
    SymMatrix::from_fn(4, |i, j| {
        if i == j {
            diag[i].clone()
        } else {
            let mut v = basis(i);
            v[j] = Scalar::one();
            let q = eval(&v);
            // q(e_i + e_j) = q_ii + q_jj + 2 q_ij
            (&(&q - &diag[i]) - &diag[j]).div_int(2)
        }
    })
}

/// Constructs the second completion in the coincident-face-point regime:
/// forms the cones over the double-line locus through each second-layer
/// vertex, splits off the shared plane, intersects the residual plane pair,
/// and returns the member that is not the determinant completion.
pub fn second_completion(
    seven: &SevenConfig,
    recovered: &RecoveredParams,
    determinant: &SymMatrix,
    cmp: &Comparator,
) -> Result<SecondCompletion> {
    let lines = &recovered.params.lines;
    // Two independent chords through the common point.
    let basis_rows: Vec<Vec<Scalar>> = lines.iter().map(|l| l.linear_coeffs()).collect();
    if crate::matrix::mat_rank(&basis_rows, cmp) != 2 {
        return Err(Error::PrereqNotMet("chords do not span a pencil through one point".into()));
    }
    let (p, q) = independent_pair(lines, cmp).ok_or(Error::DegenerateBasis)?;
    let family = SharedContactFamily::new(recovered.params.s0.clone(), p, q)?;
    // Parameter coordinates of the three second-layer vertices.
    let mut svecs = Vec::new();
    for i in 1..=3usize {
        let rest: Vec<usize> = (1..=3).filter(|&j| j != i).collect();
        let om = IndexSet::from_indices(&[rest[0], rest[1]]);
        let poly = sym_to_poly(&seven.vertex(om).primal);
        let coords = family.coordinates(&poly)?;
        if coords[0].is_zero() {
            return Err(Error::NoSecondCompletion(
                "a second-layer vertex lies in the double-line plane of the family".into(),
            ));
        }
        svecs.push(coords);
    }
    let cones: Vec<SymMatrix> = svecs.iter().map(|s| family.cone_matrix(s)).collect();
    // Residual planes: (s_j0)²·C_i − (s_i0)²·C_j contains the plane x0 = 0;
    // the quadratic form divides by x0 leaving a linear form.
    let plane_12 = residual_plane(&cones[0], &cones[1], &svecs[0][0], &svecs[1][0])?;
    let plane_13 = residual_plane(&cones[0], &cones[2], &svecs[0][0], &svecs[2][0])?;
    // The line of intersection of the two residual planes, then its two
    // meets with the first cone.
    let ns = nullspace(&[plane_12.clone(), plane_13.clone()]);
    if ns.len() != 2 {
        return Err(Error::NoSecondCompletion("residual planes coincide".into()));
    }
    let (u, w) = (&ns[0], &ns[1]);
    // kappa(s,t) = C1(s·u + t·w): binary quadratic.
    let c1 = &cones[0];
    let quu = c1.quad_form(u);
    let qww = c1.quad_form(w);
    let quw = {
        let mw = c1.apply(w);
        u.iter().zip(&mw).fold(Scalar::zero(), |acc, (a, b)| &acc + &(a * b))
    };
    let candidates = binary_quadratic_roots(&quu, &quw, &qww)?;
    let mut fallback: Option<SecondCompletion> = None;
    for (mode, s, t) in candidates {
        let coords: Vec<Scalar> = (0..4).map(|i| &(&s * &u[i]) + &(&t * &w[i])).collect();
        let coords4 = [coords[0].clone(), coords[1].clone(), coords[2].clone(), coords[3].clone()];
        // Members in the double-line plane are not completions.
        if cmp.scalar_is_zero(&coords4[0]) {
            continue;
        }
        let member = family.member(&coords4)?;
        let m = match mode {
            SolveMode::Exact => poly_to_sym(&member)?,
            SolveMode::Approximate => to_float_sym(&poly_to_sym(&member)?),
        };
        let matches_det = !determinant.is_zero() && m.order() == determinant.order() && {
            let d = match mode {
                SolveMode::Exact => determinant.clone(),
                SolveMode::Approximate => to_float_sym(determinant),
            };
            m.proj_eq(&d, cmp)
        };
        let residual = contact_residual(seven, &m);
        let sc = SecondCompletion { primal: m, mode, residual, matches_determinant: matches_det };
        if !matches_det {
            return Ok(sc);
        }
        fallback = Some(sc);
    }
    fallback.ok_or_else(|| Error::NoSecondCompletion("both intersection members degenerate".into()))
}

/// Picks two projectively independent lines from the chord list.
fn independent_pair(lines: &[HomogeneousPoly], cmp: &Comparator) -> Option<(HomogeneousPoly, HomogeneousPoly)> {
    for i in 0..lines.len() {
        for j in (i + 1)..lines.len() {
            if !lines[i].proj_eq(&lines[j], cmp) {
                return Some((lines[i].clone(), lines[j].clone()));
            }
        }
    }
    None
}

/// The residual plane of (b0²·C_a − a0²·C_b) / x0.
fn residual_plane(ca: &SymMatrix, cb: &SymMatrix, a0: &Scalar, b0: &Scalar) -> Result<Vec<Scalar>> {
    let m = ca.scale(&(b0 * b0)).sub(&cb.scale(&(a0 * a0)));
    // The lower-right 3x3 block must vanish; the form is x0·L(x).
    for i in 1..4 {
        for j in i..4 {
            if !m.at(i, j).is_zero() {
                return Err(Error::NoSecondCompletion("cone difference does not split off the family plane".into()));
            }
        }
    }
    Ok(vec![
        m.at(0, 0).clone(),
        m.at(0, 1).mul_int(2),
        m.at(0, 2).mul_int(2),
        m.at(0, 3).mul_int(2),
    ])
}

/// Roots (s : t) of a binary quadratic, exact when the discriminant is a
/// rational square, else approximate.
fn binary_quadratic_roots(quu: &Scalar, quw: &Scalar, qww: &Scalar) -> Result<Vec<(SolveMode, Scalar, Scalar)>> {
    if quu.is_zero() && qww.is_zero() && quw.is_zero() {
        return Err(Error::NoSecondCompletion("degenerate intersection line".into()));
    }
    if quu.is_zero() {
        // t (2 quw s + qww t) = 0: roots t = 0 and s = -qww/(2 quw).
        let mode = if quw.is_zero() { qww.mode() } else { quw.mode() };
        let mut out = vec![(SolveMode::Exact, Scalar::of_mode(mode, 1), Scalar::zero())];
        if !quw.is_zero() {
            out.push((SolveMode::Exact, -&(qww / &quw.mul_int(2)), Scalar::of_mode(mode, 1)));
        }
        return Ok(out);
    }
    // quu s² + 2 quw s t + qww t² = 0: s/t = (-quw ± sqrt(quw² - quu qww)) / quu.
    let disc = &(quw * quw) - &(quu * qww);
    if disc.is_negative() {
        return Err(Error::NoSecondCompletion("intersection points are complex".into()));
    }
    match disc.sqrt() {
        Some(root) => Ok(vec![
            (SolveMode::Exact, &(&(-quw) + &root) / quu, Scalar::one()),
            (SolveMode::Exact, &(&(-quw) - &root) / quu, Scalar::one()),
        ]),
        None => {
            let (a, b) = (quu.to_f64(), quw.to_f64());
            let d = (b * b - a * qww.to_f64()).sqrt();
            Ok(vec![
                (SolveMode::Approximate, Scalar::Float((-b + d) / a), Scalar::Float(1.0)),
                (SolveMode::Approximate, Scalar::Float((-b - d) / a), Scalar::Float(1.0)),
            ])
        }
    }
}

/// Largest rank-1 residual of the contact conditions between a candidate
/// completion and the three second-layer vertices, measured in floats.
fn contact_residual(seven: &SevenConfig, m: &SymMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 1..=3usize {
        let rest: Vec<usize> = (1..=3).filter(|&j| j != i).collect();
        let om = IndexSet::from_indices(&[rest[0], rest[1]]);
        let s = &seven.vertex(om).primal;
        let m_f = to_f64_matrix(m);
        let s_f = to_f64_matrix(s);
        let mut best = f64::INFINITY;
        let coeffs = crate::conic::pencil_det_poly(&to_float_sym(m), &to_float_sym(s));
        let cf: Vec<f64> = coeffs.iter().map(|c| c.to_f64()).collect();
        for t in crate::roots::real_roots_f64(&cf) {
            let n = m_f.len();
            let mut combo = vec![vec![0.0; n]; n];
            for r in 0..n {
                for c in 0..n {
                    combo[r][c] = m_f[r][c] + t * s_f[r][c];
                }
            }
            best = best.min(rank1_residual_f64(&combo));
        }
        worst = if best.is_finite() { worst.max(best) } else { f64::INFINITY };
    }
    worst
}

fn to_f64_matrix(m: &SymMatrix) -> Vec<Vec<f64>> {
    let n = m.order();
    (0..n).map(|i| (0..n).map(|j| m.at(i, j).to_f64()).collect()).collect()
}

fn to_float_sym(m: &SymMatrix) -> SymMatrix {
    SymMatrix::from_fn(m.order(), |i, j| Scalar::Float(m.at(i, j).to_f64()))
}

/// How far a matrix is from rank 1: the largest 2x2 minor magnitude relative
/// to the largest entry squared.
fn rank1_residual_f64(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let scale = m.iter().flatten().map(|v| v.abs()).fold(0.0f64, f64::max).max(1e-300);
    let mut worst: f64 = 0.0;
    for i0 in 0..n {
        for i1 in (i0 + 1)..n {
            for j0 in 0..n {
                for j1 in (j0 + 1)..n {
                    let minor = m[i0][j0] * m[i1][j1] - m[i0][j1] * m[i1][j0];
                    worst = worst.max(minor.abs() / (scale * scale));
                }
            }
        }
    }
    worst
}

/// Refinement label for a completed quadric, decided by the incidence
/// structure of the face axes and spears at the open vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompletionCase {
    /// Axes independent, spears independent: a regular quadric.
    Regular,
    /// Axes coplanar, spears independent: double plane with conic dual.
    DoublePlaneConic,
    /// Axes independent, spears concurrent: cone with double-point dual.
    ConeDoublePoint,
    /// Axes coplanar and spears concurrent: incident double plane and point.
    IncidentPair,
    /// Rank signature outside the regular refinement (irregular inputs, for
    /// example a plane-pair completion).
    Other,
}

/// Data computed by the basis-route completion of a quadric configuration.
#[derive(Clone, Debug)]
pub struct QuadricBasisCompletion {
    pub primal: SymMatrix,
    pub concurrency_point: ProjPoint,
    pub polar_plane: ProjHyperplane,
    pub axes: Vec<Line3D>,
    pub spears: Vec<Line3D>,
    pub case: CompletionCase,
}

/// Completes a quadric seven-configuration through the concurrency-basis
/// construction: meet the face axes in O, join the face spears in o, use
/// the basis (O, X1, X2, X3) with X_n on o, normalize the second layer to
/// the polarizing form, and assemble the eighth matrix from the shared
/// restriction entries.
pub fn complete_quadric_via_basis(seven: &SevenConfig, cmp: &Comparator) -> Result<QuadricBasisCompletion> {
    if seven.vars != 4 {
        return Err(Error::InvalidParameter("basis completion needs quadrics".into()));
    }
    seven.validate(cmp)?;
    // Ring planes and points for the six edges between the first and second
    // layers (the edges bounding the open faces).
    let mut ring_planes: BTreeMap<(usize, usize), ProjHyperplane> = BTreeMap::new();
    let mut ring_points: BTreeMap<(usize, usize), ProjPoint> = BTreeMap::new();
    for n in 1..=3usize {
        for i in 1..=3usize {
            if i == n {
                continue;
            }
            // Edge between T^n = S_{n} and S_i = S of the complement of {i}.
            let lo = IndexSet::from_indices(&[n]);
            let rest: Vec<usize> = (1..=3).filter(|&j| j != i).collect();
            let hi = IndexSet::from_indices(&[rest[0], rest[1]]);
            if !hi.contains(n) {
                continue;
            }
            let contact = double_contact(seven.vertex(lo), seven.vertex(hi), cmp)?;
            let Contact::Found { chord, .. } = contact else {
                return Err(Error::NoContact);
            };
            let plane = ProjHyperplane::new(chord.linear_coeffs())?;
            let point = polar_of_hyperplane(seven.vertex(lo), &plane, cmp)?;
            ring_planes.insert((n, i), plane);
            ring_points.insert((n, i), point);
        }
    }
    // Face axes of the open faces: axis_n = p^n_i ∧ p^n_j; spears dually.
    let mut axes = Vec::new();
    let mut spears = Vec::new();
    for n in 1..=3usize {
        let rest: Vec<usize> = (1..=3).filter(|&j| j != n).collect();
        let (i, j) = (rest[0], rest[1]);
        let axis = Line3D::meet(&ring_planes[&(n, i)], &ring_planes[&(n, j)], cmp).map_err(|_| Error::AxesIdentical)?;
        let spear = Line3D::join(&ring_points[&(n, i)], &ring_points[&(n, j)], cmp)?;
        axes.push(axis);
        spears.push(spear);
    }
    if axes[0].proj_eq(&axes[1], cmp) && axes[1].proj_eq(&axes[2], cmp) {
        return Err(Error::AxesIdentical);
    }
    let o_point = common_point_of_lines(&axes, cmp)?;
    let o_plane = common_plane_of_lines(&spears, cmp)?;
    let pairing = dot(&o_point.0, &o_plane.0);
    if cmp.scalar_is_zero_scaled(&pairing, vec_scale(&o_point.0) * vec_scale(&o_plane.0)) {
        return Err(Error::IncidentPolarPair);
    }
    // Basis (O, X1, X2, X3) with X_n = axis_n ∧ o.
    let mut basis: Vec<Vec<Scalar>> = vec![o_point.0.clone()];
    for axis in &axes {
        let x = axis.meet_plane(&o_plane, cmp).ok_or(Error::AxesIdentical)?;
        basis.push(x.0);
    }
    // Transform the second layer into this basis and normalize the corner.
    let mut transformed = Vec::new();
    for i in 1..=3usize {
        let rest: Vec<usize> = (1..=3).filter(|&j| j != i).collect();
        let om = IndexSet::from_indices(&[rest[0], rest[1]]);
        let m = seven.vertex(om).primal.restrict(&basis);
        let pivot = m.at(0, 0).clone();
        if pivot.is_zero() {
            return Err(Error::IncidentPolarPair);
        }
        let scale = m.rows().iter().flatten().map(|s| s.to_f64().abs()).fold(0.0f64, f64::max);
        for j in 1..4 {
            if !cmp.scalar_is_zero_scaled(m.at(0, j), scale) {
                return Err(Error::InvalidParameter(format!(
                    "second-layer vertex {} does not polarize the concurrency pair",
                    om.label()
                )));
            }
        }
        transformed.push(m.scale(&pivot.recip()));
    }
    let (a, b, c) = (&transformed[0], &transformed[1], &transformed[2]);
    // Restriction agreements: c11 = b11, a22 = c22, a33 = b33.
    for (x, y, what) in [
        (c.at(1, 1), b.at(1, 1), "x1"),
        (a.at(2, 2), c.at(2, 2), "x2"),
        (a.at(3, 3), b.at(3, 3), "x3"),
    ] {
        let scale = x.to_f64().abs().max(y.to_f64().abs());
        if !cmp.scalar_is_zero_scaled(&(x - y), scale) {
            return Err(Error::InvalidParameter(format!("restriction entries disagree on {what}")));
        }
    }
    let mut d = SymMatrix::zero(4);
    d.set(0, 0, Scalar::one());
    d.set(1, 1, c.at(1, 1).clone());
    d.set(2, 2, a.at(2, 2).clone());
    d.set(3, 3, b.at(3, 3).clone());
    d.set(1, 2, c.at(1, 2).clone());
    d.set(1, 3, b.at(1, 3).clone());
    d.set(2, 3, a.at(2, 3).clone());
    // Transform back: D = B^T M_std B, so M_std = (B^{-1})^T D (B^{-1}) with
    // columns of B the basis vectors.
    let binv_rows = invert_square(&basis)?;
    // restrict needs columns: columns of B^{-1} are (binv_rows^T) columns.
    let binv_cols: Vec<Vec<Scalar>> = (0..4).map(|j| (0..4).map(|i| binv_rows[i][j].clone()).collect()).collect();
    let m_std = d.restrict(&binv_cols);
    // Case analysis: axes coplanar <=> O and the X_n are coplanar; spears
    // concurrent <=> the first two spears meet on the third.
    let axes_coplanar = {
        let mut rows = vec![o_point.0.clone()];
        rows.extend(basis[1..].iter().cloned());
        crate::matrix::mat_rank(&rows, cmp) <= 3
    };
    let spears_concurrent = match line_meet(&spears[0], &spears[1], cmp) {
        Some(p) => spears[2].contains_point(&p, cmp),
        None => true,
    };
    let case = match (axes_coplanar, spears_concurrent) {
        (false, false) => CompletionCase::Regular,
        (true, false) => CompletionCase::DoublePlaneConic,
        (false, true) => CompletionCase::ConeDoublePoint,
        (true, true) => CompletionCase::IncidentPair,
    };
    Ok(QuadricBasisCompletion {
        primal: m_std,
        concurrency_point: o_point,
        polar_plane: o_plane,
        axes,
        spears,
        case,
    })
}

fn vec_scale(v: &[Scalar]) -> f64 {
    v.iter().map(|s| s.to_f64().abs()).fold(0.0f64, f64::max)
}

fn invert_square(basis_cols: &[Vec<Scalar>]) -> Result<Vec<Vec<Scalar>>> {
    let n = basis_cols.len();
    let rows: Vec<Vec<Scalar>> = (0..n).map(|i| (0..n).map(|j| basis_cols[j][i].clone()).collect()).collect();
    let mut inv_cols = Vec::with_capacity(n);
    for k in 0..n {
        let mut e = vec![Scalar::zero(); n];
        e[k] = Scalar::one();
        let x = solve_linear(&rows, &e)?.ok_or_else(|| Error::InvalidParameter("basis is singular".into()))?;
        inv_cols.push(x);
    }
    Ok((0..n).map(|i| (0..n).map(|j| inv_cols[j][i].clone()).collect()).collect())
}

/// Rows annihilating exactly the points of the line (the dual antisymmetric
/// matrix).
fn line_condition_rows(line: &Line3D) -> Vec<Vec<Scalar>> {
    let p = line.coords();
    let z = Scalar::zero;
    vec![
        vec![z(), p[3].clone(), p[4].clone(), p[5].clone()],
        vec![-&p[3], z(), p[2].clone(), -&p[1]],
        vec![-&p[4], -&p[2], z(), p[0].clone()],
        vec![-&p[5], p[1].clone(), -&p[0], z()],
    ]
}

fn common_point_of_lines(lines: &[Line3D], cmp: &Comparator) -> Result<ProjPoint> {
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for line in lines.iter().take(2) {
        rows.extend(line_condition_rows(line));
    }
    let ns = nullspace(&rows);
    if ns.len() != 1 {
        return Err(Error::AxesIdentical);
    }
    let o = ProjPoint::new(ns[0].clone())?;
    for line in lines {
        if !line.contains_point(&o, cmp) {
            return Err(Error::InvalidParameter("face axes are not concurrent".into()));
        }
    }
    Ok(o)
}

fn line_meet(a: &Line3D, b: &Line3D, cmp: &Comparator) -> Option<ProjPoint> {
    let mut rows = line_condition_rows(a);
    rows.extend(line_condition_rows(b));
    let ns = nullspace(&rows);
    if ns.len() == 1 {
        ProjPoint::new(ns[0].clone()).ok().filter(|p| a.contains_point(p, cmp) && b.contains_point(p, cmp))
    } else {
        None
    }
}

fn common_plane_of_lines(lines: &[Line3D], cmp: &Comparator) -> Result<ProjHyperplane> {
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for line in lines.iter().take(2) {
        // Plane h contains the line iff the primal antisymmetric matrix
        // annihilates h.
        let p = line.coords();
        let z = Scalar::zero;
        rows.extend(vec![
            vec![z(), p[0].clone(), p[1].clone(), p[2].clone()],
            vec![-&p[0], z(), p[5].clone(), -&p[4]],
            vec![-&p[1], -&p[5], z(), p[3].clone()],
            vec![-&p[2], p[4].clone(), -&p[3], z()],
        ]);
    }
    let ns = nullspace(&rows);
    if ns.len() != 1 {
        return Err(Error::AxesIdentical);
    }
    let o = ProjHyperplane::new(ns[0].clone())?;
    for line in lines {
        if !line.in_plane(&o, cmp) {
            return Err(Error::InvalidParameter("face spears are not coplanar".into()));
        }
    }
    Ok(o)
}

/// Verifies the predicted rank signature of a basis completion and returns
/// its refinement label.
pub fn refine_classify(primal: &SymMatrix, case: CompletionCase, cmp: &Comparator) -> CompletionCase {
    let rank = primal.rank(cmp);
    let expected = match case {
        CompletionCase::Regular => 4,
        CompletionCase::DoublePlaneConic => 1,
        CompletionCase::ConeDoublePoint => 3,
        CompletionCase::IncidentPair => 1,
        CompletionCase::Other => rank,
    };
    if rank != expected {
        CompletionCase::Other
    } else {
        case
    }
}

/// A SevenConfig assembled from a constructor-built lattice with the eighth
/// vertex stripped. Rank-1 vertices get a zero dual placeholder; callers
/// needing honest complete conics there must supply partners.
pub fn seven_from_lattice(lattice: &PenroseLattice) -> Result<SevenConfig> {
    let full_mask = (1u8 << lattice.params.n) - 1;
    let full = IndexSet(full_mask);
    if lattice.params.n != 3 {
        return Err(Error::InvalidParameter("seven-vertex stripping needs n = 3".into()));
    }
    let mut vertices = BTreeMap::new();
    for om in IndexSet::all_subsets(3) {
        if om == full {
            continue;
        }
        let v = &lattice.vertices[&om];
        if v.poly.is_zero() {
            return Err(Error::InvalidParameter(format!("vertex {} vanishes", om.label())));
        }
        let primal = poly_to_sym(&v.poly)?;
        let cc = match CompleteConic::from_primal(&primal) {
            Ok(c) => c,
            Err(Error::NeedsDualPartner) => CompleteConic { primal, dual: SymMatrix::zero(lattice.params.vars) },
            Err(e) => return Err(e),
        };
        vertices.insert(om, cc);
    }
    SevenConfig::new(lattice.params.vars, vertices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::poly::line_i64;

    fn cmp() -> Comparator {
        Comparator::default()
    }

    #[test]
    fn normalize_edge_scale_undoes_known_scaling() {
        // S0 = circle, T = 2·(circle + y²): t = 1/2, chord y.
        let circle = line_i64(1, 0, 0)
            .square()
            .unwrap()
            .add(&line_i64(0, 1, 0).square().unwrap())
            .unwrap()
            .sub(&line_i64(0, 0, 1).square().unwrap())
            .unwrap();
        let s0 = CompleteConic::from_primal(&poly_to_sym(&circle).unwrap()).unwrap();
        let tpoly = circle.add(&line_i64(0, 1, 0).square().unwrap()).unwrap().scale(&Scalar::int(2));
        let t = CompleteConic::from_primal(&poly_to_sym(&tpoly).unwrap()).unwrap();
        let (scaled, chord, tval) = normalize_edge_scale(&s0, &t, &cmp()).unwrap();
        assert!(tval.eq_strict(&Scalar::ratio(1, 2)));
        assert_eq!(chord, line_i64(0, 1, 0));
        let diff = s0.primal.sub(&scaled.primal);
        assert_eq!(diff.rank(&cmp()), 1);
        assert!(matches!(normalize_edge_scale(&s0, &s0, &cmp()), Err(Error::ProjectivelyEqual)));
    }

    #[test]
    fn round_trip_constructor_to_completion() {
        let mut rng = corpus::rng(42);
        for _ in 0..5 {
            let params = corpus::random_cube_params(&mut rng, 3);
            let lat = match build_lattice(&params, &cmp()) {
                Ok(l) => l,
                Err(_) => continue,
            };
            let full = IndexSet::from_indices(&[1, 2, 3]);
            if lat.vertices[&full].poly.is_zero() {
                continue;
            }
            let seven = match seven_from_lattice(&lat) {
                Ok(s) => s,
                Err(_) => continue,
            };
            let result = complete(&seven, &cmp()).unwrap();
            assert!(result.primal.proj_eq(&poly_to_sym(&lat.vertices[&full].poly).unwrap(), &cmp()));
            assert!(result.unique);
        }
    }

    #[test]
    fn zero_a_face_recovers_zero() {
        let circle = line_i64(1, 0, 0)
            .square()
            .unwrap()
            .add(&line_i64(0, 1, 0).square().unwrap())
            .unwrap()
            .sub(&line_i64(0, 0, 1).square().unwrap())
            .unwrap();
        let params = PenroseParams::standard_cube(
            circle,
            line_i64(1, 0, 0),
            line_i64(0, 1, 0),
            line_i64(1, 1, 1),
            Scalar::zero(),
            Scalar::ratio(1, 3),
            Scalar::int(-1),
        )
        .unwrap();
        let lat = build_lattice(&params, &cmp()).unwrap();
        let seven = seven_from_lattice(&lat).unwrap();
        let rec = recover_params(&seven, &cmp()).unwrap();
        assert!(rec.params.a[&(2, 3)].is_zero());
    }

    #[test]
    fn two_completions_on_concurrent_chords() {
        // p = x, q = y, r = x + y all pass through [0:0:1].
        let circle = line_i64(1, 0, 0)
            .square()
            .unwrap()
            .add(&line_i64(0, 1, 0).square().unwrap())
            .unwrap()
            .sub(&line_i64(0, 0, 1).square().unwrap())
            .unwrap();
        let params = PenroseParams::standard_cube(
            circle,
            line_i64(1, 0, 0),
            line_i64(0, 1, 0),
            line_i64(1, 1, 0),
            Scalar::ratio(1, 2),
            Scalar::ratio(-1, 3),
            Scalar::ratio(1, 4),
        )
        .unwrap();
        let lat = build_lattice(&params, &cmp()).unwrap();
        let seven = seven_from_lattice(&lat).unwrap();
        let result = complete(&seven, &cmp()).unwrap();
        assert!(!result.unique, "coincident face points force two completions");
        let second = result.second.expect("second completion");
        assert!(!second.matches_determinant);
        assert_eq!(second.mode, SolveMode::Exact);
        // Both completions are in double contact with the second layer.
        for i in 1..=3usize {
            let rest: Vec<usize> = (1..=3).filter(|&j| j != i).collect();
            let om = IndexSet::from_indices(&[rest[0], rest[1]]);
            let sv = seven.vertex(om);
            let second_cc = CompleteConic::from_primal(&second.primal).unwrap();
            let contact = double_contact(&second_cc, sv, &cmp()).unwrap();
            assert!(contact.found(), "second completion must touch {}", om.label());
        }
    }

    #[test]
    fn wrong_branch_face_member_is_rejected() {
        // With q = y and r = z the pencil of T^2 and T^3 has a second
        // rank-2 member -(x² + z²); the branch of double-contact conics
        // built on it has chords x and z, so W = T² + x² touches both
        // neighbors but its face chords are not concurrent.
        let circle = line_i64(1, 0, 0)
            .square()
            .unwrap()
            .add(&line_i64(0, 1, 0).square().unwrap())
            .unwrap()
            .sub(&line_i64(0, 0, 1).square().unwrap())
            .unwrap();
        let params = PenroseParams::standard_cube(
            circle.clone(),
            line_i64(1, 2, 0),
            line_i64(0, 1, 0),
            line_i64(0, 0, 1),
            Scalar::ratio(1, 2),
            Scalar::ratio(-1, 3),
            Scalar::int(2),
        )
        .unwrap();
        let lat = build_lattice(&params, &cmp()).unwrap();
        let mut seven = seven_from_lattice(&lat).unwrap();
        let t2 = circle.add(&line_i64(0, 1, 0).square().unwrap()).unwrap();
        let w = t2.add(&line_i64(1, 0, 0).square().unwrap()).unwrap();
        let w_cc = CompleteConic::from_primal(&poly_to_sym(&w).unwrap()).unwrap();
        // W is in double contact with both neighbors.
        let t2_cc = seven.vertex(IndexSet::from_indices(&[2])).clone();
        let t3_cc = seven.vertex(IndexSet::from_indices(&[3])).clone();
        assert!(double_contact(&w_cc, &t2_cc, &cmp()).unwrap().found());
        assert!(double_contact(&w_cc, &t3_cc, &cmp()).unwrap().found());
        seven.vertices.insert(IndexSet::from_indices(&[2, 3]), w_cc);
        match seven.validate(&cmp()).and_then(|_| recover_params(&seven, &cmp()).map(|_| ())) {
            Err(Error::InconsistentFace(_)) => {}
            other => panic!("expected InconsistentFace, got {other:?}"),
        }
    }

    #[test]
    fn generic_input_has_no_second_completion_prereq() {
        let mut rng = corpus::rng(7);
        let params = corpus::random_cube_params(&mut rng, 3);
        let lat = build_lattice(&params, &cmp()).unwrap();
        let seven = seven_from_lattice(&lat).unwrap();
        let recovered = recover_params(&seven, &cmp()).unwrap();
        let det = poly_to_sym(&lat.vertices[&IndexSet::from_indices(&[1, 2, 3])].poly).unwrap();
        match second_completion(&seven, &recovered, &det, &cmp()) {
            Err(Error::PrereqNotMet(_)) => {}
            other => panic!("expected PrereqNotMet, got {other:?}"),
        }
    }
}
