//! Builders and verifiers for the classical-theorem specializations: dual
//! Salmon, Brianchon, Pappus, Braikenridge–Maclaurin, Desargues, and Monge.
//!
//! Every builder produces lattice parameters plus the witness objects of the
//! classical statement, and every predicate is double-checked by an
//! independent construction straight from the raw points and lines.

use std::collections::BTreeMap;

use crate::conic::split_line_pair;
use crate::engine::{build_lattice, IndexSet, PenroseLattice, PenroseParams};
use crate::error::{Error, Result};
use crate::matrix::{extract_double_line, poly_to_sym};
use crate::poly::HomogeneousPoly;
use crate::projective::{collinear, concurrent, join2, meet2, ProjHyperplane, ProjPoint};
use crate::scalar::{Comparator, Scalar};

/// A named specialization with its lattice parameters, witness objects and
/// predicate.
#[derive(Clone, Debug)]
pub struct ScenarioInstance {
    pub name: String,
    pub params: PenroseParams,
    /// Witness lines whose concurrency (or points whose collinearity) the
    /// classical statement asserts.
    pub witness_lines: Vec<ProjHyperplane>,
    pub witness_points: Vec<ProjPoint>,
    pub predicate: String,
}

/// Verdict of a scenario: the lattice-side predicate and the independent
/// classical-construction oracle must agree.
#[derive(Clone, Debug)]
pub struct ScenarioVerdict {
    pub lattice_ok: bool,
    pub classical_ok: bool,
    pub details: Vec<String>,
}

impl ScenarioVerdict {
    pub fn passed(&self) -> bool {
        self.lattice_ok && self.classical_ok
    }
}

fn sqrt_exact(s: &Scalar) -> Result<Scalar> {
    s.sqrt().ok_or_else(|| Error::IrrationalData(format!("{s} is not a perfect square")))
}

/// Dual Salmon: S0 regular, f_{ij} = 0 throughout via a_{ij} = σ_ij·t_i·t_j
/// with d_i = t_i², and σ_23 = σ_12·σ_13 so that the third-layer scalar
/// vanishes; the three double-line carriers then concur.
pub fn build_dual_salmon(
    s0: HomogeneousPoly,
    lines: [HomogeneousPoly; 3],
    d: [Scalar; 3],
    sigma: [i64; 3],
) -> Result<ScenarioInstance> {
    let t: Vec<Scalar> = d.iter().map(sqrt_exact).collect::<Result<_>>()?;
    let (s12, s13, s23) = (sigma[0], sigma[1], sigma[2]);
    let mut a = BTreeMap::new();
    a.insert((1, 2), (&t[0] * &t[1]).scale_by(s12));
    a.insert((1, 3), (&t[0] * &t[2]).scale_by(s13));
    a.insert((2, 3), (&t[1] * &t[2]).scale_by(s23));
    let params = PenroseParams::new(3, 3, s0, lines.to_vec(), d.to_vec(), a)?;
    // Carriers w_ij = t_j p_i − σ_ij t_i p_j.
    let mut witness_lines = Vec::new();
    for (i, j, s) in [(1usize, 2usize, s12), (1, 3, s13), (2, 3, s23)] {
        let w = params.lines[i - 1]
            .scale(&t[j - 1])
            .sub(&params.lines[j - 1].scale(&t[i - 1].scale_by(s)))?;
        witness_lines.push(ProjHyperplane::new(w.linear_coeffs())?);
    }
    Ok(ScenarioInstance {
        name: "dual-salmon".into(),
        params,
        witness_lines,
        witness_points: Vec::new(),
        predicate: "the three double-line carriers are concurrent".into(),
    })
}

trait ScaleBy {
    fn scale_by(&self, s: i64) -> Scalar;
}

impl ScaleBy for Scalar {
    fn scale_by(&self, s: i64) -> Scalar {
        self.mul_int(s)
    }
}

/// Brianchon: tangent line pairs from three exterior points of a regular
/// conic; consistent sign choice makes the three hexagon diagonals concur.
pub fn build_brianchon(s0: HomogeneousPoly, points: [ProjPoint; 3], sigma: [i64; 3]) -> Result<ScenarioInstance> {
    let m = poly_to_sym(&s0)?;
    let mut lines = Vec::new();
    let mut d = Vec::new();
    let adj = m.adjugate();
    for p in &points {
        let polar_coeffs = m.apply(&p.0);
        let value = m.quad_form(&p.0);
        if value.is_zero() {
            return Err(Error::DegeneratePosition);
        }
        // Real tangents need the tangent-pair form d·S0 − p² to be a real
        // line pair; the split below certifies it.
        lines.push(HomogeneousPoly::linear(&polar_coeffs));
        d.push(value);
    }
    // A join of two base points tangent to the conic collapses the hexagon.
    for i in 0..3 {
        for j in (i + 1)..3 {
            let cross = [
                &(&points[i].0[1] * &points[j].0[2]) - &(&points[i].0[2] * &points[j].0[1]),
                &(&points[i].0[2] * &points[j].0[0]) - &(&points[i].0[0] * &points[j].0[2]),
                &(&points[i].0[0] * &points[j].0[1]) - &(&points[i].0[1] * &points[j].0[0]),
            ];
            if adj.quad_form(&cross).is_zero() {
                return Err(Error::DegeneratePosition);
            }
        }
    }
    // f_{ij} = 0 branch: a_ij = σ_ij sqrt(d_i d_j), which must be rational.
    let mut a = BTreeMap::new();
    let mut roots = Vec::new();
    for (key, s) in [((1usize, 2usize), sigma[0]), ((1, 3), sigma[1]), ((2, 3), sigma[2])] {
        let prod = &d[key.0 - 1] * &d[key.1 - 1];
        let root = sqrt_exact(&prod)?;
        roots.push(root.clone());
        a.insert(key, root.scale_by(s));
    }
    let params = PenroseParams::new(3, 3, s0, lines.clone(), d.clone(), a)?;
    // Carriers: w_ij = sqrt(d_j/d_i)-weighted differences; use
    // t_i = sqrt(d_i) when rational, else fall back to d_j p_i − a_ij p_j.
    let mut witness_lines = Vec::new();
    for (idx, (i, j, s)) in [(0usize, (1usize, 2usize, sigma[0])), (1, (1, 3, sigma[1])), (2, (2, 3, sigma[2]))] {
        // d_j · p_i − σ sqrt(d_i d_j) · p_j is proportional to the carrier.
        let w = lines[i - 1]
            .scale(&d[j - 1])
            .sub(&lines[j - 1].scale(&roots[idx].scale_by(s)))?;
        witness_lines.push(ProjHyperplane::new(w.linear_coeffs())?);
        let _ = s;
    }
    Ok(ScenarioInstance {
        name: "brianchon".into(),
        params,
        witness_lines,
        witness_points: points.to_vec(),
        predicate: "the three hexagon diagonals are concurrent".into(),
    })
}

/// Pappus: six points, three on each of two lines, realized as the cube with
/// the line pair at the base, the chords joining partner points with d_i = 0,
/// and the cross-join branch for the off-diagonal scalars. The eighth vertex
/// degenerates onto the axis of the configuration, squared.
///
/// The map from the six raw points to lattice parameters is one concrete
/// choice among several consistent ones.
pub fn build_pappus(
    l1: &ProjHyperplane,
    l2: &ProjHyperplane,
    on_l1: [ProjPoint; 3],
    on_l2: [ProjPoint; 3],
    cmp: &Comparator,
) -> Result<ScenarioInstance> {
    // Validation: incidences and general position.
    for p in &on_l1 {
        if !p.on(l1, cmp) {
            return Err(Error::DegeneratePosition);
        }
    }
    for p in &on_l2 {
        if !p.on(l2, cmp) {
            return Err(Error::DegeneratePosition);
        }
    }
    let carrier = meet2(l1, l2, cmp)?;
    for p in on_l1.iter().chain(on_l2.iter()) {
        if p.proj_eq(&carrier, cmp) {
            return Err(Error::DegeneratePosition);
        }
    }
    for i in 0..3 {
        for j in (i + 1)..3 {
            if on_l1[i].proj_eq(&on_l1[j], cmp) || on_l2[i].proj_eq(&on_l2[j], cmp) {
                return Err(Error::DegeneratePosition);
            }
        }
    }
    let s0 = line_poly(l1).mul(&line_poly(l2))?;
    let mut lines = Vec::new();
    for i in 0..3 {
        let chord = join2(&on_l1[i], &on_l2[i], cmp)?;
        lines.push(line_poly(&chord));
    }
    // Cross-join branch: S_{ij} ∝ a_ij·S0 − 2·p_i·p_j must be the pair
    // (A_i ∨ B_j)(A_j ∨ B_i); solve for the pencil coordinates.
    let mut a = BTreeMap::new();
    for (i, j) in [(1usize, 2usize), (1, 3), (2, 3)] {
        let cross = line_poly(&join2(&on_l1[i - 1], &on_l2[j - 1], cmp)?)
            .mul(&line_poly(&join2(&on_l1[j - 1], &on_l2[i - 1], cmp)?))?;
        let coords = pencil_coordinates(&s0, &lines[i - 1].mul(&lines[j - 1])?, &cross)?;
        let (lam, mu) = (&coords.0, &coords.1);
        if mu.is_zero() {
            return Err(Error::DegeneratePosition);
        }
        // a_ij S0 - 2 p_i p_j ∝ lam S0 + mu p_i p_j: a_ij = -2 lam / mu.
        let aij = -&(&(&Scalar::int(2) * lam) / mu);
        a.insert((i, j), aij);
    }
    let params = PenroseParams::new(3, 3, s0, lines, vec![Scalar::zero(); 3], a)?;
    // Classical witnesses: the three cross-meets.
    let mut witness_points = Vec::new();
    for (i, j) in [(1usize, 2usize), (1, 3), (2, 3)] {
        let m = meet2(
            &join2(&on_l1[i - 1], &on_l2[j - 1], cmp)?,
            &join2(&on_l1[j - 1], &on_l2[i - 1], cmp)?,
            cmp,
        )?;
        witness_points.push(m);
    }
    Ok(ScenarioInstance {
        name: "pappus".into(),
        params,
        witness_lines: Vec::new(),
        witness_points,
        predicate: "the eighth vertex is the doubled axis through the three cross-meets".into(),
    })
}

fn line_poly(h: &ProjHyperplane) -> HomogeneousPoly {
    HomogeneousPoly::linear(&h.0)
}

/// Coordinates (lam, mu) of target in the pencil lam·f + mu·g.
fn pencil_coordinates(f: &HomogeneousPoly, g: &HomogeneousPoly, target: &HomogeneousPoly) -> Result<(Scalar, Scalar)> {
    let rows = [f.coeff_vector(2), g.coeff_vector(2)];
    let t = target.coeff_vector(2);
    let ncoef = t.len();
    let a: Vec<Vec<Scalar>> = (0..ncoef).map(|i| vec![rows[0][i].clone(), rows[1][i].clone()]).collect();
    match crate::matrix::solve_linear(&a, &t)? {
        Some(x) => Ok((x[0].clone(), x[1].clone())),
        None => Err(Error::InconsistentFace("conic is not in the pencil".into())),
    }
}

/// Braikenridge–Maclaurin (converse of Pascal): base double line with
/// f_{ij} = 0; the six vertices of the hexagon then lie on the eighth conic.
pub fn build_braikenridge_maclaurin(
    axis: HomogeneousPoly,
    lines: [HomogeneousPoly; 3],
    t: [Scalar; 3],
    sigma: [i64; 3],
) -> Result<ScenarioInstance> {
    let s0 = axis.square()?;
    let d: Vec<Scalar> = t.iter().map(|ti| ti * ti).collect();
    let mut a = BTreeMap::new();
    a.insert((1, 2), (&t[0] * &t[1]).scale_by(sigma[0]));
    a.insert((1, 3), (&t[0] * &t[2]).scale_by(sigma[1]));
    a.insert((2, 3), (&t[1] * &t[2]).scale_by(sigma[2]));
    let params = PenroseParams::new(3, 3, s0, lines.to_vec(), d, a)?;
    Ok(ScenarioInstance {
        name: "braikenridge-maclaurin".into(),
        params,
        witness_lines: Vec::new(),
        witness_points: Vec::new(),
        predicate: "the six hexagon vertices lie on the eighth conic".into(),
    })
}

/// Desargues: Braikenridge–Maclaurin data with the consistent sign choice
/// (vanishing third-layer scalar); the first layer splits into two
/// perspective triangles whose vertex joins concur.
pub fn build_desargues(
    axis: HomogeneousPoly,
    lines: [HomogeneousPoly; 3],
    t: [Scalar; 3],
    sigma: [i64; 3],
) -> Result<ScenarioInstance> {
    if sigma[0] * sigma[1] * sigma[2] != 1 {
        return Err(Error::InvalidParameter("perspective branch needs sign product +1".into()));
    }
    let mut inst = build_braikenridge_maclaurin(axis, lines, t, sigma)?;
    inst.name = "desargues".into();
    inst.predicate = "the joins of corresponding triangle vertices are concurrent".into();
    Ok(inst)
}

/// Monge: three circles, verified through the line-wise lattice built on the
/// dual of the circular point pair; the pairwise homothety centers are the
/// second-layer double points.
pub fn build_monge(centers: [(Scalar, Scalar); 3], radii: [Scalar; 3], sigma: [i64; 3]) -> Result<ScenarioInstance> {
    for i in 0..3 {
        for j in (i + 1)..3 {
            if centers[i].0.eq_strict(&centers[j].0) && centers[i].1.eq_strict(&centers[j].1) {
                return Err(Error::ConcentricCircles);
            }
        }
    }
    // Line-wise model: the base dual conic u0² + u1² (the circular point
    // pair), border entries the circle centers as dual linear forms, and
    // d_i = r_i².
    let s0 = HomogeneousPoly::linear(&[Scalar::one(), Scalar::zero(), Scalar::zero()])
        .square()?
        .add(&HomogeneousPoly::linear(&[Scalar::zero(), Scalar::one(), Scalar::zero()]).square()?)?;
    let mut lines = Vec::new();
    for (x, y) in &centers {
        lines.push(HomogeneousPoly::linear(&[x.clone(), y.clone(), Scalar::one()]));
    }
    let d: Vec<Scalar> = radii.iter().map(|r| r * r).collect();
    let mut a = BTreeMap::new();
    a.insert((1, 2), (&radii[0] * &radii[1]).scale_by(sigma[0]));
    a.insert((1, 3), (&radii[0] * &radii[2]).scale_by(sigma[1]));
    a.insert((2, 3), (&radii[1] * &radii[2]).scale_by(sigma[2]));
    let params = PenroseParams::new(3, 3, s0, lines.clone(), d, a)?;
    // Witnesses: homothety centers r_j c_i − σ r_i c_j, read back as points.
    let mut witness_points = Vec::new();
    for (i, j, s) in [(1usize, 2usize, sigma[0]), (1, 3, sigma[1]), (2, 3, sigma[2])] {
        let w = lines[i - 1]
            .scale(&radii[j - 1])
            .sub(&lines[j - 1].scale(&radii[i - 1].scale_by(s)))?;
        witness_points.push(ProjPoint::new(w.linear_coeffs())?);
    }
    Ok(ScenarioInstance {
        name: "monge".into(),
        params,
        witness_lines: Vec::new(),
        witness_points,
        predicate: "the three homothety centers are collinear".into(),
    })
}

/// Verifies a scenario instance: builds and checks the lattice, evaluates
/// the lattice-side predicate, and runs the independent classical oracle.
pub fn verify_scenario(inst: &ScenarioInstance, cmp: &Comparator) -> Result<ScenarioVerdict> {
    let lattice = build_lattice(&inst.params, cmp)?;
    lattice.verify_faces(cmp)?;
    let mut details = Vec::new();
    let (lattice_ok, classical_ok) = match inst.name.as_str() {
        "dual-salmon" => verify_salmon_like(inst, &lattice, cmp, &mut details)?,
        "brianchon" => verify_brianchon(inst, &lattice, cmp, &mut details)?,
        "pappus" => verify_pappus(inst, &lattice, cmp, &mut details)?,
        "braikenridge-maclaurin" => verify_bm(inst, &lattice, cmp, &mut details)?,
        "desargues" => verify_desargues(inst, &lattice, cmp, &mut details)?,
        "monge" => verify_monge(inst, &lattice, cmp, &mut details)?,
        other => return Err(Error::InvalidParameter(format!("unknown scenario {other}"))),
    };
    Ok(ScenarioVerdict { lattice_ok, classical_ok, details })
}

/// Lattice side shared by the Salmon family: every second-layer vertex is a
/// double line, the extracted carriers concur, and f_{123} = 0.
fn salmon_lattice_predicate(lattice: &PenroseLattice, cmp: &Comparator, details: &mut Vec<String>) -> Result<bool> {
    let mut carriers = Vec::new();
    for (i, j) in [(1usize, 2usize), (1, 3), (2, 3)] {
        let om = IndexSet::from_indices(&[i, j]);
        let v = &lattice.vertices[&om];
        match &v.double_line {
            Some((line, _)) => carriers.push(ProjHyperplane::new(line.linear_coeffs())?),
            None => {
                details.push(format!("vertex {} is not a double line", om.label()));
                return Ok(false);
            }
        }
    }
    let f123 = &lattice.f[&IndexSet::from_indices(&[1, 2, 3])];
    if !cmp.scalar_is_zero(f123) {
        details.push("third-layer scalar does not vanish".into());
        return Ok(false);
    }
    concurrent(&carriers, cmp)
}

fn verify_salmon_like(
    inst: &ScenarioInstance,
    lattice: &PenroseLattice,
    cmp: &Comparator,
    details: &mut Vec<String>,
) -> Result<(bool, bool)> {
    let lattice_ok = salmon_lattice_predicate(lattice, cmp, details)?;
    // Classical oracle: the witness carriers, computed directly from the
    // input data, concur.
    let classical_ok = concurrent(&inst.witness_lines, cmp)?;
    Ok((lattice_ok, classical_ok))
}

fn verify_brianchon(
    inst: &ScenarioInstance,
    lattice: &PenroseLattice,
    cmp: &Comparator,
    details: &mut Vec<String>,
) -> Result<(bool, bool)> {
    let lattice_ok = salmon_lattice_predicate(lattice, cmp, details)?;
    // Classical oracle: split each first-layer tangent pair into the two
    // tangent lines, build the hexagon diagonals as joins of opposite
    // vertices, and test their concurrency. The pairing of tangents is
    // selected by matching against the lattice carriers.
    let mut tangent_pairs = Vec::new();
    for i in 1..=3usize {
        let om = IndexSet::from_indices(&[i]);
        let m = poly_to_sym(&lattice.vertices[&om].poly)?;
        let (u, v) = split_line_pair(&m, cmp)?;
        tangent_pairs.push((ProjHyperplane::new(u.linear_coeffs())?, ProjHyperplane::new(v.linear_coeffs())?));
    }
    let mut diagonals = Vec::new();
    for (&(i, j), w) in [(1usize, 2usize), (1, 3), (2, 3)].iter().zip(&inst.witness_lines) {
        let (ui, vi) = &tangent_pairs[i - 1];
        let (uj, vj) = &tangent_pairs[j - 1];
        // Two candidate diagonals, one per pairing; pick the one matching
        // the carrier line w.
        let d1 = join2(&meet2(ui, uj, cmp)?, &meet2(vi, vj, cmp)?, cmp)?;
        let d2 = join2(&meet2(ui, vj, cmp)?, &meet2(vi, uj, cmp)?, cmp)?;
        let chosen = if d1.proj_eq(w, cmp) {
            d1
        } else if d2.proj_eq(w, cmp) {
            d2
        } else {
            details.push(format!("no hexagon diagonal matches the carrier of pair ({i},{j})"));
            return Ok((lattice_ok, false));
        };
        diagonals.push(chosen);
    }
    let classical_ok = concurrent(&diagonals, cmp)?;
    Ok((lattice_ok, classical_ok))
}

fn verify_pappus(
    inst: &ScenarioInstance,
    lattice: &PenroseLattice,
    cmp: &Comparator,
    details: &mut Vec<String>,
) -> Result<(bool, bool)> {
    // Lattice predicate: the eighth vertex is rank 1 and its carrier passes
    // through the three cross-meets.
    let full = IndexSet::from_indices(&[1, 2, 3]);
    let v = &lattice.vertices[&full];
    let lattice_ok = match &v.double_line {
        Some((line, _)) => {
            let axis = ProjHyperplane::new(line.linear_coeffs())?;
            inst.witness_points.iter().all(|p| p.on(&axis, cmp))
        }
        None => {
            details.push("eighth vertex is not a double line".into());
            false
        }
    };
    // Classical oracle: the cross-meets are collinear, computed from raw
    // joins and meets only.
    let classical_ok = collinear(&inst.witness_points, cmp)?;
    Ok((lattice_ok, classical_ok))
}

fn verify_bm(
    _inst: &ScenarioInstance,
    lattice: &PenroseLattice,
    cmp: &Comparator,
    details: &mut Vec<String>,
) -> Result<(bool, bool)> {
    // The six hexagon vertices: for each pair (i,j) the second-layer double
    // line meets the first-layer pairs in the same two points.
    let verts = match hexagon_vertices(lattice, cmp) {
        Ok(v) => v,
        Err(e) => {
            details.push(format!("hexagon degenerates: {e}"));
            return Ok((false, false));
        }
    };
    let full = IndexSet::from_indices(&[1, 2, 3]);
    let eighth = &lattice.vertices[&full].poly;
    if eighth.is_zero() {
        details.push("eighth vertex vanishes".into());
        return Ok((false, false));
    }
    let lattice_ok = verts.iter().all(|p| cmp.scalar_is_zero_scaled(&eighth.eval(&p.0), eval_scale(eighth, p)));
    // Classical oracle: Pascal-line direction. The three cross-meets of the
    // hexagon side pairs are collinear on the axis (the base double line).
    let axis_poly = &lattice.params.s0;
    let (axis_line, _, _) = extract_double_line(axis_poly, cmp)?;
    let axis = ProjHyperplane::new(axis_line.linear_coeffs())?;
    let mut classical_ok = true;
    for i in 1..=3usize {
        let om = IndexSet::from_indices(&[i]);
        let m = poly_to_sym(&lattice.vertices[&om].poly)?;
        let (u, v) = split_line_pair(&m, cmp)?;
        let meet = meet2(
            &ProjHyperplane::new(u.linear_coeffs())?,
            &ProjHyperplane::new(v.linear_coeffs())?,
            cmp,
        )?;
        if !meet.on(&axis, cmp) {
            classical_ok = false;
            details.push(format!("side pair {i} does not meet on the axis"));
        }
    }
    Ok((lattice_ok, classical_ok))
}

/// The six vertices of the hexagon: intersections of the second-layer
/// carriers with the adjacent first-layer line pairs.
fn hexagon_vertices(lattice: &PenroseLattice, cmp: &Comparator) -> Result<Vec<ProjPoint>> {
    let mut out = Vec::new();
    for (i, j) in [(1usize, 2usize), (1, 3), (2, 3)] {
        let om = IndexSet::from_indices(&[i, j]);
        let (carrier, _) = lattice.vertices[&om]
            .double_line
            .clone()
            .ok_or_else(|| Error::InvalidParameter(format!("vertex {} is not a double line", om.label())))?;
        let w = ProjHyperplane::new(carrier.linear_coeffs())?;
        // Points: w ∩ S_{i} (equal to w ∩ S_{j} by the vanishing scalar).
        let m = poly_to_sym(&lattice.vertices[&IndexSet::from_indices(&[i])].poly)?;
        let (u, v) = split_line_pair(&m, cmp)?;
        out.push(meet2(&w, &ProjHyperplane::new(u.linear_coeffs())?, cmp)?);
        out.push(meet2(&w, &ProjHyperplane::new(v.linear_coeffs())?, cmp)?);
    }
    Ok(out)
}

fn eval_scale(f: &HomogeneousPoly, p: &ProjPoint) -> f64 {
    let fs = f.terms().map(|(_, c)| c.to_f64().abs()).fold(0.0f64, f64::max);
    let ps = p.0.iter().map(|c| c.to_f64().abs()).fold(0.0f64, f64::max);
    fs * ps * ps
}

fn verify_desargues(
    inst: &ScenarioInstance,
    lattice: &PenroseLattice,
    cmp: &Comparator,
    details: &mut Vec<String>,
) -> Result<(bool, bool)> {
    let lattice_ok = salmon_lattice_predicate(lattice, cmp, details)?;
    // Classical oracle: split the first layer into the two triangles, join
    // corresponding vertices, and test concurrency at the perspective
    // center; the side pairs already meet on the axis by construction.
    let mut tri1 = Vec::new();
    let mut tri2 = Vec::new();
    let (axis_line, _, _) = extract_double_line(&lattice.params.s0, cmp)?;
    let axis = ProjHyperplane::new(axis_line.linear_coeffs())?;
    for i in 1..=3usize {
        let om = IndexSet::from_indices(&[i]);
        let m = poly_to_sym(&lattice.vertices[&om].poly)?;
        let (u, v) = split_line_pair(&m, cmp)?;
        // Deterministic assignment: u is normalized first; both lines meet
        // on the axis.
        let ul = ProjHyperplane::new(u.linear_coeffs())?;
        let vl = ProjHyperplane::new(v.linear_coeffs())?;
        if !meet2(&ul, &vl, cmp)?.on(&axis, cmp) {
            details.push(format!("sides of pair {i} do not meet on the axis"));
            return Ok((lattice_ok, false));
        }
        tri1.push(ul);
        tri2.push(vl);
    }
    // Corresponding vertices: sides (i, j) of each triangle. The assignment
    // of u/v per index may swap a triangle side; try both consistent
    // matchings and accept one concurrent set that matches the carriers.
    let carriers: Vec<ProjHyperplane> = [(1usize, 2usize), (1, 3), (2, 3)]
        .iter()
        .map(|&(i, j)| {
            let om = IndexSet::from_indices(&[i, j]);
            let (line, _) = lattice.vertices[&om].double_line.clone().expect("double line");
            ProjHyperplane::new(line.linear_coeffs())
        })
        .collect::<Result<_>>()?;
    for flips in 0..8u8 {
        let pick = |i: usize| -> (&ProjHyperplane, &ProjHyperplane) {
            if flips & (1 << (i - 1)) == 0 {
                (&tri1[i - 1], &tri2[i - 1])
            } else {
                (&tri2[i - 1], &tri1[i - 1])
            }
        };
        let mut joins = Vec::new();
        let mut matched = true;
        for (idx, (i, j)) in [(1usize, 2usize), (1, 3), (2, 3)].iter().enumerate() {
            let (ui, vi) = pick(*i);
            let (uj, vj) = pick(*j);
            let join = join2(&meet2(ui, uj, cmp)?, &meet2(vi, vj, cmp)?, cmp)?;
            if !join.proj_eq(&carriers[idx], cmp) {
                matched = false;
                break;
            }
            joins.push(join);
        }
        if matched {
            let classical_ok = concurrent(&joins, cmp)?;
            return Ok((lattice_ok, classical_ok));
        }
    }
    details.push(format!("no triangle labeling matches the carriers ({})", inst.name));
    Ok((lattice_ok, false))
}

fn verify_monge(
    inst: &ScenarioInstance,
    lattice: &PenroseLattice,
    cmp: &Comparator,
    details: &mut Vec<String>,
) -> Result<(bool, bool)> {
    // Lattice side: second-layer vertices are double duals (rank 1) whose
    // carriers, read as points, are the homothety centers; they must be
    // collinear, equivalently the dual carriers concurrent.
    let mut centers = Vec::new();
    for (i, j) in [(1usize, 2usize), (1, 3), (2, 3)] {
        let om = IndexSet::from_indices(&[i, j]);
        match &lattice.vertices[&om].double_line {
            Some((line, _)) => centers.push(ProjPoint::new(line.linear_coeffs())?),
            None => {
                details.push(format!("dual vertex {} is not a double point", om.label()));
                return Ok((false, false));
            }
        }
    }
    let lattice_ok = collinear(&centers, cmp)?;
    // Classical oracle: homothety centers from the raw centers and radii.
    let classical_ok = collinear(&inst.witness_points, cmp)?;
    // The two routes must name the same points.
    let mut agree = true;
    for (a, b) in centers.iter().zip(&inst.witness_points) {
        if !a.proj_eq(b, cmp) {
            agree = false;
        }
    }
    if !agree {
        details.push("lattice centers disagree with the homothety oracle".into());
    }
    Ok((lattice_ok && agree, classical_ok))
}

/// Specialization labels of the lattice classifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecializationLabel {
    DualSalmon,
    Brianchon,
    Pappus,
    BraikenridgeMaclaurin,
    Desargues,
    Monge,
    Generic,
}

impl SpecializationLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            SpecializationLabel::DualSalmon => "dual-salmon",
            SpecializationLabel::Brianchon => "brianchon",
            SpecializationLabel::Pappus => "pappus",
            SpecializationLabel::BraikenridgeMaclaurin => "braikenridge-maclaurin",
            SpecializationLabel::Desargues => "desargues",
            SpecializationLabel::Monge => "monge",
            SpecializationLabel::Generic => "generic",
        }
    }
}

/// Matches the rank/type signature of the eight vertices and the vanishing
/// pattern of the scalar subdeterminants against the specialization table,
/// returning the most specific label.
pub fn classify(lattice: &PenroseLattice, cmp: &Comparator) -> SpecializationLabel {
    if lattice.n() != 3 {
        return SpecializationLabel::Generic;
    }
    let s0_rank = lattice.vertices[&IndexSet::EMPTY].rank;
    let first_ranks: Vec<usize> = (1..=3).map(|i| lattice.vertices[&IndexSet::from_indices(&[i])].rank).collect();
    let second_ranks: Vec<usize> =
        [(1usize, 2usize), (1, 3), (2, 3)].iter().map(|&(i, j)| lattice.vertices[&IndexSet::from_indices(&[i, j])].rank).collect();
    let full = IndexSet::from_indices(&[1, 2, 3]);
    let f12 = cmp.scalar_is_zero(&lattice.f[&IndexSet::from_indices(&[1, 2])]);
    let f13 = cmp.scalar_is_zero(&lattice.f[&IndexSet::from_indices(&[1, 3])]);
    let f23 = cmp.scalar_is_zero(&lattice.f[&IndexSet::from_indices(&[2, 3])]);
    let f123 = cmp.scalar_is_zero(&lattice.f[&full]);
    let d_zero = lattice.params.d.iter().all(|d| cmp.scalar_is_zero(d));
    let all_fij = f12 && f13 && f23;
    // Pappus: base line pair, d_i = 0 (chord doubles on the base), rank-2
    // second layer, rank-1 eighth vertex.
    if s0_rank == 2 && d_zero && second_ranks.iter().all(|&r| r == 2) && lattice.vertices[&full].rank <= 1 {
        return SpecializationLabel::Pappus;
    }
    // Monge signature: base is the dual circular pair u0² + u1² and the
    // second layer consists of double duals with f_{ij} = 0.
    if s0_rank == 2 && all_fij && second_ranks.iter().all(|&r| r == 1) && is_circular_pair(&lattice.params.s0) {
        return SpecializationLabel::Monge;
    }
    if s0_rank == 1 && all_fij {
        return if f123 { SpecializationLabel::Desargues } else { SpecializationLabel::BraikenridgeMaclaurin };
    }
    if s0_rank == 3 && all_fij && f123 {
        return if first_ranks.iter().all(|&r| r == 2) {
            SpecializationLabel::Brianchon
        } else {
            SpecializationLabel::DualSalmon
        };
    }
    SpecializationLabel::Generic
}

fn is_circular_pair(s0: &HomogeneousPoly) -> bool {
    let v = s0.coeff_vector(2);
    // u0² + u1², no other terms, up to scale.
    let expect = HomogeneousPoly::linear(&[Scalar::one(), Scalar::zero(), Scalar::zero()])
        .square()
        .unwrap()
        .add(&HomogeneousPoly::linear(&[Scalar::zero(), Scalar::one(), Scalar::zero()]).square().unwrap())
        .unwrap();
    Comparator::default().proj_eq_vec(&v, &expect.coeff_vector(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::line_i64;

    fn cmp() -> Comparator {
        Comparator::default()
    }

    fn circle() -> HomogeneousPoly {
        line_i64(1, 0, 0)
            .square()
            .unwrap()
            .add(&line_i64(0, 1, 0).square().unwrap())
            .unwrap()
            .sub(&line_i64(0, 0, 1).square().unwrap())
            .unwrap()
    }

    #[test]
    fn dual_salmon_positive_and_negative() {
        let inst = build_dual_salmon(
            circle(),
            [line_i64(1, 0, 0), line_i64(0, 1, 0), line_i64(1, 1, 1)],
            [Scalar::int(1), Scalar::int(4), Scalar::int(9)],
            [1, 1, 1],
        )
        .unwrap();
        let verdict = verify_scenario(&inst, &cmp()).unwrap();
        assert!(verdict.passed(), "{:?}", verdict.details);
        // Flipped sign: f_123 != 0, predicate fails.
        let bad = build_dual_salmon(
            circle(),
            [line_i64(1, 0, 0), line_i64(0, 1, 0), line_i64(1, 1, 1)],
            [Scalar::int(1), Scalar::int(4), Scalar::int(9)],
            [1, 1, -1],
        )
        .unwrap();
        let verdict = verify_scenario(&bad, &cmp()).unwrap();
        assert!(!verdict.lattice_ok);
    }

    #[test]
    fn brianchon_instance() {
        // Points with x² + y² = 2z²: quadratic form value 1 at z = 1.
        let pts = [
            ProjPoint::new(vec![Scalar::int(1), Scalar::int(1), Scalar::int(1)]).unwrap(),
            ProjPoint::new(vec![Scalar::int(-1), Scalar::int(7), Scalar::int(5)]).unwrap(),
            ProjPoint::new(vec![Scalar::int(-17), Scalar::int(-7), Scalar::int(13)]).unwrap(),
        ];
        let inst = build_brianchon(circle(), pts, [1, 1, 1]).unwrap();
        let verdict = verify_scenario(&inst, &cmp()).unwrap();
        assert!(verdict.passed(), "{:?}", verdict.details);
    }

    #[test]
    fn pappus_instance() {
        let l1 = ProjHyperplane::new(vec![Scalar::zero(), Scalar::one(), Scalar::zero()]).unwrap(); // y = 0
        let l2 = ProjHyperplane::new(vec![Scalar::zero(), Scalar::one(), Scalar::int(-1)]).unwrap(); // y = z
        let a = |t: i64| ProjPoint::new(vec![Scalar::int(t), Scalar::zero(), Scalar::one()]).unwrap();
        let b = |t: i64| ProjPoint::new(vec![Scalar::int(t), Scalar::one(), Scalar::one()]).unwrap();
        let inst = build_pappus(&l1, &l2, [a(0), a(2), a(5)], [b(1), b(3), b(-2)], &cmp()).unwrap();
        let verdict = verify_scenario(&inst, &cmp()).unwrap();
        assert!(verdict.passed(), "{:?}", verdict.details);
        // Degenerate input: repeated point.
        assert!(matches!(
            build_pappus(&l1, &l2, [a(0), a(0), a(5)], [b(1), b(3), b(-2)], &cmp()),
            Err(Error::DegeneratePosition)
        ));
    }

    #[test]
    fn monge_instance() {
        let inst = build_monge(
            [
                (Scalar::int(0), Scalar::int(0)),
                (Scalar::int(4), Scalar::int(0)),
                (Scalar::int(1), Scalar::int(3)),
            ],
            [Scalar::int(1), Scalar::int(2), Scalar::int(1)],
            [1, 1, 1],
        )
        .unwrap();
        let verdict = verify_scenario(&inst, &cmp()).unwrap();
        assert!(verdict.passed(), "{:?}", verdict.details);
        assert!(matches!(
            build_monge(
                [
                    (Scalar::int(0), Scalar::int(0)),
                    (Scalar::int(0), Scalar::int(0)),
                    (Scalar::int(1), Scalar::int(3)),
                ],
                [Scalar::int(1), Scalar::int(2), Scalar::int(1)],
                [1, 1, 1],
            ),
            Err(Error::ConcentricCircles)
        ));
    }

    #[test]
    fn classify_round_trips_randomized_builders() {
        let mut rng = crate::corpus::rng(17);
        let mut counts = std::collections::BTreeMap::new();
        for trial in 0..200 {
            if counts.values().filter(|&&c| c >= 20).count() == 5 {
                break;
            }
            let which = trial % 5;
            let (inst, want) = match which {
                0 => {
                    let t: Vec<Scalar> = (0..3).map(|_| crate::corpus::nonzero_rational(&mut rng)).collect();
                    let inst = build_dual_salmon(
                        crate::corpus::random_regular_conic(&mut rng, 3),
                        [
                            crate::corpus::random_line(&mut rng, 3),
                            crate::corpus::random_line(&mut rng, 3),
                            crate::corpus::random_line(&mut rng, 3),
                        ],
                        [&t[0] * &t[0], &t[1] * &t[1], &t[2] * &t[2]],
                        [1, 1, 1],
                    );
                    (inst, SpecializationLabel::DualSalmon)
                }
                1 => {
                    // Rational points of x² + y² = 2z².
                    let pt = |t: &Scalar| {
                        let one = Scalar::one();
                        let t2 = t * t;
                        ProjPoint::new(vec![
                            &(&one - &t.mul_int(2)) - &t2,
                            &(&one + &t.mul_int(2)) - &t2,
                            &one + &t2,
                        ])
                        .unwrap()
                    };
                    let mut ts: Vec<Scalar> = Vec::new();
                    while ts.len() < 3 {
                        let t = crate::corpus::small_rational(&mut rng);
                        if !ts.iter().any(|u| u.eq_strict(&t)) {
                            ts.push(t);
                        }
                    }
                    let inst = build_brianchon(circle(), [pt(&ts[0]), pt(&ts[1]), pt(&ts[2])], [1, 1, 1]);
                    (inst, SpecializationLabel::Brianchon)
                }
                2 => {
                    let l1 = ProjHyperplane::new(vec![Scalar::zero(), Scalar::one(), Scalar::zero()]).unwrap();
                    let l2 = ProjHyperplane::new(vec![Scalar::zero(), Scalar::one(), Scalar::int(-1)]).unwrap();
                    let mut xs: Vec<Scalar> = Vec::new();
                    while xs.len() < 6 {
                        let t = crate::corpus::small_rational(&mut rng);
                        if !xs.iter().any(|u| u.eq_strict(&t)) {
                            xs.push(t);
                        }
                    }
                    let a = |t: &Scalar| ProjPoint::new(vec![t.clone(), Scalar::zero(), Scalar::one()]).unwrap();
                    let b = |t: &Scalar| ProjPoint::new(vec![t.clone(), Scalar::one(), Scalar::one()]).unwrap();
                    let inst = build_pappus(
                        &l1,
                        &l2,
                        [a(&xs[0]), a(&xs[1]), a(&xs[2])],
                        [b(&xs[3]), b(&xs[4]), b(&xs[5])],
                        &cmp(),
                    );
                    (inst, SpecializationLabel::Pappus)
                }
                3 => {
                    let inst = build_desargues(
                        crate::corpus::random_line(&mut rng, 3),
                        [
                            crate::corpus::random_line(&mut rng, 3),
                            crate::corpus::random_line(&mut rng, 3),
                            crate::corpus::random_line(&mut rng, 3),
                        ],
                        [
                            crate::corpus::nonzero_rational(&mut rng),
                            crate::corpus::nonzero_rational(&mut rng),
                            crate::corpus::nonzero_rational(&mut rng),
                        ],
                        [1, 1, 1],
                    );
                    (inst, SpecializationLabel::Desargues)
                }
                _ => {
                    let inst = build_monge(
                        [
                            (crate::corpus::small_rational(&mut rng), crate::corpus::small_rational(&mut rng)),
                            (crate::corpus::small_rational(&mut rng), crate::corpus::small_rational(&mut rng)),
                            (crate::corpus::small_rational(&mut rng), crate::corpus::small_rational(&mut rng)),
                        ],
                        [
                            crate::corpus::nonzero_rational(&mut rng).abs(),
                            crate::corpus::nonzero_rational(&mut rng).abs(),
                            crate::corpus::nonzero_rational(&mut rng).abs(),
                        ],
                        [1, 1, 1],
                    );
                    (inst, SpecializationLabel::Monge)
                }
            };
            let Ok(inst) = inst else { continue };
            let Ok(lat) = build_lattice(&inst.params, &cmp()) else { continue };
            assert_eq!(classify(&lat, &cmp()), want, "builder {}", inst.name);
            *counts.entry(want.as_str()).or_insert(0usize) += 1;
        }
        for (label, count) in counts {
            assert!(count >= 20, "{label} reached only {count} classified instances");
        }
    }

    #[test]
    fn classify_matches_builders() {
        let inst = build_dual_salmon(
            circle(),
            [line_i64(1, 0, 0), line_i64(0, 1, 0), line_i64(1, 1, 1)],
            [Scalar::int(1), Scalar::int(4), Scalar::int(9)],
            [1, 1, 1],
        )
        .unwrap();
        let lat = build_lattice(&inst.params, &cmp()).unwrap();
        assert_eq!(classify(&lat, &cmp()), SpecializationLabel::DualSalmon);

        let generic = crate::corpus::random_cube_params(&mut crate::corpus::rng(3), 3);
        let lat = build_lattice(&generic, &cmp()).unwrap();
        assert_eq!(classify(&lat, &cmp()), SpecializationLabel::Generic);
    }
}
