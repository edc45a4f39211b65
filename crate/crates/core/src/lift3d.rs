//! Extrusion of plane configurations to space, slicing of space
//! configurations back to the plane, and the face-axis/face-spear structure
//! of quadric cubes.

use std::collections::BTreeMap;

use crate::completion::{normalize_edge_scale, seven_edges, SevenConfig};
use crate::conic::{double_contact, CompleteConic, CompleteQuadric, Contact};
use crate::engine::IndexSet;
use crate::error::{Error, Result};
use crate::matrix::{nullspace, SymMatrix};
use crate::projective::{dot, Line3D, ProjHyperplane, ProjPoint};
use crate::scalar::{Comparator, Scalar};

/// Frame data for extrusion: an ordered basis of the base plane, an apex
/// point off the plane, and the polar plane of the apex in dual coordinates
/// of the basis (O, P1, P2, P3).
#[derive(Clone, Debug)]
pub struct ExtrusionFrame {
    /// Basis points of the base plane, as 4-vectors.
    pub plane_basis: [Vec<Scalar>; 3],
    /// Apex point not on the plane.
    pub apex: Vec<Scalar>,
    /// Dual coordinates `[u0:u1:u2:u3]` of the polar plane of the apex.
    pub u: [Scalar; 4],
}

impl ExtrusionFrame {
    /// The standard frame: base plane x0 = 0 spanned by e1, e2, e3 with apex
    /// e0 and a chosen u.
    pub fn standard(u: [Scalar; 4]) -> Self {
        let e = |i: usize| {
            let mut v = vec![Scalar::zero(); 4];
            v[i] = Scalar::one();
            v
        };
        ExtrusionFrame { plane_basis: [e(1), e(2), e(3)], apex: e(0), u }
    }

    /// Columns (O, P1, P2, P3) as a change-of-basis matrix.
    fn basis_cols(&self) -> Vec<Vec<Scalar>> {
        let mut cols = vec![self.apex.clone()];
        cols.extend(self.plane_basis.iter().cloned());
        cols
    }

    /// The base plane as a hyperplane of space (dual vector).
    pub fn base_plane(&self) -> Result<ProjHyperplane> {
        // Null space of the three basis-point rows.
        let rows: Vec<Vec<Scalar>> = self.plane_basis.to_vec();
        let ns = nullspace(&rows);
        if ns.len() != 1 {
            return Err(Error::InvalidParameter("plane basis is degenerate".into()));
        }
        ProjHyperplane::new(ns[0].clone())
    }

    pub fn validate(&self) -> Result<()> {
        let mut rows = vec![self.apex.clone()];
        rows.extend(self.plane_basis.iter().cloned());
        if crate::matrix::mat_rank(&rows, &Comparator::default()) != 4 {
            return Err(Error::InvalidParameter("apex lies on the base plane".into()));
        }
        Ok(())
    }
}

/// Extrudes a conic to a quadric through it with the frame apex polar to the
/// frame plane: in frame coordinates the 4x4 matrix borders the conic with
/// the u-row.
pub fn extrude_conic(a: &SymMatrix, frame: &ExtrusionFrame) -> Result<SymMatrix> {
    if a.order() != 3 {
        return Err(Error::SizeMismatch);
    }
    if a.is_zero() {
        return Err(Error::InvalidParameter("zero conic".into()));
    }
    frame.validate()?;
    let mut m = SymMatrix::zero(4);
    for i in 0..4 {
        m.set(0, i, frame.u[i].clone());
    }
    for i in 0..3 {
        for j in i..3 {
            m.set(i + 1, j + 1, a.at(i, j).clone());
        }
    }
    // Transform from frame coordinates to standard coordinates:
    // M_frame = B^T M_std B, so M_std = (B^{-1})^T M_frame B^{-1}.
    let cols = frame.basis_cols();
    let inv_rows = invert_cols(&cols)?;
    let inv_cols: Vec<Vec<Scalar>> = (0..4).map(|j| (0..4).map(|i| inv_rows[i][j].clone()).collect()).collect();
    Ok(m.restrict(&inv_cols))
}

fn invert_cols(cols: &[Vec<Scalar>]) -> Result<Vec<Vec<Scalar>>> {
    let n = cols.len();
    let rows: Vec<Vec<Scalar>> = (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect();
    let mut inv_cols = Vec::with_capacity(n);
    for k in 0..n {
        let mut e = vec![Scalar::zero(); n];
        e[k] = Scalar::one();
        let x = crate::matrix::solve_linear(&rows, &e)?
            .ok_or_else(|| Error::InvalidParameter("frame basis is singular".into()))?;
        inv_cols.push(x);
    }
    Ok((0..n).map(|i| (0..n).map(|j| inv_cols[j][i].clone()).collect()).collect())
}

/// Embeds a plane point (3 coordinates in the frame plane basis) into space.
pub fn embed_point(frame: &ExtrusionFrame, p: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); 4];
    for (k, basis) in frame.plane_basis.iter().enumerate() {
        for i in 0..4 {
            out[i] = &out[i] + &(&p[k] * &basis[i]);
        }
    }
    out
}

/// Extrudes a whole seven-vertex conic configuration: rescales the members
/// so every edge difference has rank 1 (anchored at the base vertex, with
/// redundant edges checked for consistency), then extrudes each conic with
/// the shared frame. The ring planes all pass through the apex.
pub fn extrude_seven(seven: &SevenConfig, frame: &ExtrusionFrame, cmp: &Comparator) -> Result<SevenConfig> {
    if seven.vars != 3 {
        return Err(Error::InvalidParameter("extrusion starts from conics".into()));
    }
    frame.validate()?;
    // Breadth-first scaling from the base vertex.
    let mut scaled: BTreeMap<IndexSet, SymMatrix> = BTreeMap::new();
    scaled.insert(IndexSet::EMPTY, seven.vertex(IndexSet::EMPTY).primal.clone());
    let edges = seven_edges();
    let mut progress = true;
    while progress {
        progress = false;
        for (lo, hi) in &edges {
            let (have, want, known_first) = if scaled.contains_key(lo) && !scaled.contains_key(hi) {
                (*lo, *hi, true)
            } else if scaled.contains_key(hi) && !scaled.contains_key(lo) {
                (*hi, *lo, false)
            } else {
                continue;
            };
            let a = CompleteConic { primal: scaled[&have].clone(), dual: SymMatrix::zero(3) };
            let b = seven.vertex(want);
            let (scaled_b, _, _) = normalize_edge_scale(&a, b, cmp)?;
            scaled.insert(want, scaled_b.primal);
            let _ = known_first;
            progress = true;
        }
    }
    // Consistency: every edge difference must now have rank 1. The redundant
    // edges realize the face condition; failure means the input was not a
    // valid seven-vertex configuration.
    for (lo, hi) in &edges {
        let diff = scaled[lo].sub(&scaled[hi]);
        if diff.is_zero() || diff.rank(cmp) != 1 {
            return Err(Error::ScalingInconsistent);
        }
    }
    let mut vertices = BTreeMap::new();
    for (om, m) in &scaled {
        let primal = extrude_conic(m, frame)?;
        let cc = match CompleteConic::from_primal(&primal) {
            Ok(c) => c,
            Err(Error::NeedsDualPartner) => CompleteConic { primal, dual: SymMatrix::zero(4) },
            Err(e) => return Err(e),
        };
        vertices.insert(*om, cc);
    }
    SevenConfig::new(4, vertices)
}

/// Outcome of slicing one quadric with a plane.
#[derive(Clone, Debug)]
pub struct SliceResult {
    pub conic: CompleteConic,
    /// Set when the plane is tangent: the sliced conic is degenerate.
    pub tangent: bool,
}

/// Restriction of a quadric to a plane through a 4x3 basis of the plane:
/// primal B^T Q B; the dual partner comes from the adjugate when the result
/// is regular.
pub fn slice_quadric(q: &CompleteQuadric, basis: &[Vec<Scalar>; 3], cmp: &Comparator) -> Result<SliceResult> {
    let primal = q.primal.restrict(basis);
    if primal.is_zero() {
        return Err(Error::TangentPlane);
    }
    let tangent = cmp.scalar_is_zero(&primal.det());
    let conic = match CompleteConic::from_primal(&primal) {
        Ok(c) => c,
        Err(Error::NeedsDualPartner) => CompleteConic { primal, dual: SymMatrix::zero(3) },
        Err(e) => return Err(e),
    };
    Ok(SliceResult { conic, tangent })
}

/// A deterministic basis of a plane from its dual vector: the two
/// smallest-index unit completions of the plane's null space, exact.
pub fn plane_basis(plane: &ProjHyperplane) -> Result<[Vec<Scalar>; 3]> {
    let ns = nullspace(std::slice::from_ref(&plane.0));
    if ns.len() != 3 {
        return Err(Error::InvalidParameter("not a plane".into()));
    }
    Ok([ns[0].clone(), ns[1].clone(), ns[2].clone()])
}

/// Slices all eight vertices of a completed configuration and re-checks the
/// twelve double contacts and six face points of the resulting plane cube.
pub fn slice_cube(
    eight: &BTreeMap<IndexSet, CompleteQuadric>,
    basis: &[Vec<Scalar>; 3],
    cmp: &Comparator,
) -> Result<BTreeMap<IndexSet, CompleteConic>> {
    for om in IndexSet::all_subsets(3) {
        if !eight.contains_key(&om) {
            return Err(Error::MissingVertex(om.label()));
        }
    }
    let mut out = BTreeMap::new();
    for (om, q) in eight {
        let sliced = slice_quadric(q, basis, cmp)?;
        out.insert(*om, sliced.conic);
    }
    // Verify the twelve double contacts.
    for om in IndexSet::all_subsets(3) {
        for k in 1..=3 {
            if om.contains(k) {
                continue;
            }
            let hi = om.insert(k);
            let c = double_contact(&out[&om], &out[&hi], cmp)?;
            if !c.found() {
                return Err(Error::InvalidParameter(format!(
                    "sliced edge {} - {} lost its contact",
                    om.label(),
                    hi.label()
                )));
            }
        }
    }
    // Verify the six face points.
    for j in 1..=3usize {
        for k in (j + 1)..=3 {
            for base in IndexSet::all_subsets(3) {
                if base.contains(j) || base.contains(k) {
                    continue;
                }
                let chords: Vec<ProjHyperplane> = [
                    (base, base.insert(j)),
                    (base, base.insert(k)),
                    (base.insert(j), base.insert(j).insert(k)),
                    (base.insert(k), base.insert(k).insert(j)),
                ]
                .iter()
                .map(|(lo, hi)| {
                    let c = double_contact(&out[lo], &out[hi], cmp)?;
                    match c {
                        Contact::Found { chord, .. } => ProjHyperplane::new(chord.linear_coeffs()),
                        Contact::None => Err(Error::NoContact),
                    }
                })
                .collect::<Result<_>>()?;
                if !crate::projective::concurrent(&chords, cmp)? {
                    return Err(Error::InvalidParameter(format!(
                        "sliced face ({}, {j}, {k}) lost its concurrency",
                        base.label()
                    )));
                }
            }
        }
    }
    Ok(out)
}

/// Structure of the twelve ring planes and points, the six face axes and
/// spears, and the concurrency pair of a quadric configuration.
#[derive(Clone, Debug)]
pub struct FaceStructure {
    pub ring_planes: BTreeMap<(IndexSet, usize), ProjHyperplane>,
    pub ring_points: BTreeMap<(IndexSet, usize), ProjPoint>,
    pub axes: BTreeMap<String, Line3D>,
    pub spears: BTreeMap<String, Line3D>,
    /// Common point of all ring planes and axes, in the concurrent branch.
    pub concurrency_point: Option<ProjPoint>,
    /// Polar plane of the concurrency point.
    pub polar_plane: Option<ProjHyperplane>,
    /// Set when all axes coincide: the single-axis branch.
    pub single_axis: Option<Line3D>,
}

/// Computes ring planes and points for every available edge, face axes and
/// spears for every face with two computed ring planes, and decides the
/// concurrency dichotomy: either all axes pass through one point, or all
/// ring planes share a single axis.
pub fn face_structure(config: &BTreeMap<IndexSet, CompleteQuadric>, cmp: &Comparator) -> Result<FaceStructure> {
    let mut ring_planes = BTreeMap::new();
    let mut ring_points = BTreeMap::new();
    for om in IndexSet::all_subsets(3) {
        for k in 1..=3 {
            if om.contains(k) {
                continue;
            }
            let hi = om.insert(k);
            let (Some(a), Some(b)) = (config.get(&om), config.get(&hi)) else { continue };
            let contact = double_contact(a, b, cmp)?;
            if let Contact::Found { chord, .. } = contact {
                let plane = ProjHyperplane::new(chord.linear_coeffs())?;
                let point = crate::conic::polar_of_hyperplane(a, &plane, cmp)
                    .or_else(|_| crate::conic::polar_of_hyperplane(b, &plane, cmp))?;
                ring_planes.insert((om, k), plane);
                ring_points.insert((om, k), point);
            }
        }
    }
    let mut axes: BTreeMap<String, Line3D> = BTreeMap::new();
    let mut spears: BTreeMap<String, Line3D> = BTreeMap::new();
    for j in 1..=3usize {
        for k in (j + 1)..=3 {
            for base in IndexSet::all_subsets(3) {
                if base.contains(j) || base.contains(k) {
                    continue;
                }
                let e1 = (base, j);
                let e2 = (base, k);
                let (Some(p1), Some(p2)) = (ring_planes.get(&e1), ring_planes.get(&e2)) else { continue };
                let key = format!("{}|{j}{k}", base.label());
                if p1.proj_eq(p2, cmp) {
                    continue;
                }
                axes.insert(key.clone(), Line3D::meet(p1, p2, cmp)?);
                let (q1, q2) = (&ring_points[&e1], &ring_points[&e2]);
                if !q1.proj_eq(q2, cmp) {
                    spears.insert(key, Line3D::join(q1, q2, cmp)?);
                }
            }
        }
    }
    let axis_list: Vec<&Line3D> = axes.values().collect();
    let mut single_axis = None;
    let mut concurrency_point = None;
    let mut polar_plane = None;
    if !axis_list.is_empty() {
        let all_same = axis_list.windows(2).all(|w| w[0].proj_eq(w[1], cmp));
        if all_same {
            single_axis = Some(axis_list[0].clone());
        } else {
            // Meet of two distinct axes, checked against the rest and every
            // ring plane.
            let mut point: Option<ProjPoint> = None;
            'search: for i in 0..axis_list.len() {
                for j in (i + 1)..axis_list.len() {
                    if !axis_list[i].proj_eq(axis_list[j], cmp) {
                        let mut rows = line_rows(axis_list[i]);
                        rows.extend(line_rows(axis_list[j]));
                        let ns = nullspace(&rows);
                        if ns.len() == 1 {
                            point = Some(ProjPoint::new(ns[0].clone())?);
                            break 'search;
                        }
                    }
                }
            }
            if let Some(o) = point {
                for axis in &axis_list {
                    if !axis.contains_point(&o, cmp) {
                        return Err(Error::InvalidParameter("face axes are not concurrent".into()));
                    }
                }
                for plane in ring_planes.values() {
                    if !o.on(plane, cmp) {
                        return Err(Error::InvalidParameter("a ring plane misses the concurrency point".into()));
                    }
                }
                // Polar plane with respect to any regular member.
                for q in config.values() {
                    if !cmp.scalar_is_zero(&q.primal.det()) {
                        let h = crate::conic::polar(q, &o, cmp)?;
                        polar_plane = Some(h);
                        break;
                    }
                }
                concurrency_point = Some(o);
            }
        }
    }
    Ok(FaceStructure {
        ring_planes,
        ring_points,
        axes,
        spears,
        concurrency_point,
        polar_plane,
        single_axis,
    })
}

fn line_rows(line: &Line3D) -> Vec<Vec<Scalar>> {
    let p = line.coords();
    let z = Scalar::zero;
    vec![
        vec![z(), p[3].clone(), p[4].clone(), p[5].clone()],
        vec![-&p[3], z(), p[2].clone(), -&p[1]],
        vec![-&p[4], -&p[2], z(), p[0].clone()],
        vec![-&p[5], p[1].clone(), -&p[0], z()],
    ]
}

/// Polar-pair check: O and o are polar with respect to every member.
pub fn polar_pair_holds(
    config: &BTreeMap<IndexSet, CompleteQuadric>,
    o_point: &ProjPoint,
    o_plane: &ProjHyperplane,
    cmp: &Comparator,
) -> bool {
    for q in config.values() {
        let img = q.primal.apply(&o_point.0);
        if img.iter().all(|s| cmp.scalar_is_zero(s)) {
            continue;
        }
        if !cmp.proj_eq_vec(&img, &o_plane.0) {
            return false;
        }
    }
    true
}

/// Evaluates a quadric at a point.
pub fn quadric_value(q: &SymMatrix, p: &[Scalar]) -> Scalar {
    q.quad_form(p)
}

/// Incidence pairing of a point and hyperplane.
pub fn incidence(p: &ProjPoint, h: &ProjHyperplane) -> Scalar {
    dot(&p.0, &h.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::completion::seven_from_lattice;
    use crate::corpus;
    use crate::engine::build_lattice;
    use crate::matrix::poly_to_sym;
    use crate::poly::line_i64;

    fn cmp() -> Comparator {
        Comparator::default()
    }

    fn circle_m() -> SymMatrix {
        SymMatrix::diag(&[Scalar::int(1), Scalar::int(1), Scalar::int(-1)])
    }

    #[test]
    fn extrude_block_diagonal_round_trip() {
        let frame = ExtrusionFrame::standard([Scalar::one(), Scalar::zero(), Scalar::zero(), Scalar::zero()]);
        let q = extrude_conic(&circle_m(), &frame).unwrap();
        // Block diagonal: slicing back with the base plane returns the conic.
        let basis = [frame.plane_basis[0].clone(), frame.plane_basis[1].clone(), frame.plane_basis[2].clone()];
        let quad = CompleteConic { primal: q.clone(), dual: SymMatrix::zero(4) };
        let sliced = slice_quadric(&quad, &basis, &cmp()).unwrap();
        assert!(sliced.conic.primal.proj_eq(&circle_m(), &cmp()));
        assert!(!sliced.tangent);
    }

    #[test]
    fn apex_on_quadric_when_u0_vanishes() {
        let frame = ExtrusionFrame::standard([Scalar::zero(), Scalar::zero(), Scalar::zero(), Scalar::one()]);
        let q = extrude_conic(&circle_m(), &frame).unwrap();
        let apex = &frame.apex;
        assert!(quadric_value(&q, apex).is_zero());
    }

    #[test]
    fn apex_polar_to_u_plane() {
        let mut rng = corpus::rng(5);
        let u = [
            corpus::small_rational(&mut rng),
            corpus::small_rational(&mut rng),
            corpus::small_rational(&mut rng),
            Scalar::int(2),
        ];
        let frame = ExtrusionFrame::standard(u.clone());
        let q = extrude_conic(&circle_m(), &frame).unwrap();
        let img = q.apply(&frame.apex);
        // polar(apex) = the u-plane in frame-dual coordinates; with the
        // standard frame the coordinates agree directly.
        assert!(cmp().proj_eq_vec(&img, &u));
    }

    #[test]
    fn extrude_seven_and_face_structure() {
        let circle = line_i64(1, 0, 0)
            .square()
            .unwrap()
            .add(&line_i64(0, 1, 0).square().unwrap())
            .unwrap()
            .sub(&line_i64(0, 0, 1).square().unwrap())
            .unwrap();
        let params = crate::engine::PenroseParams::standard_cube(
            circle,
            line_i64(1, 0, 0),
            line_i64(0, 1, 0),
            line_i64(1, 1, 1),
            Scalar::ratio(1, 2),
            Scalar::ratio(-1, 3),
            Scalar::int(2),
        )
        .unwrap();
        let lat = build_lattice(&params, &cmp()).unwrap();
        let seven2d = seven_from_lattice(&lat).unwrap();
        let frame = ExtrusionFrame::standard([
            Scalar::one(),
            Scalar::ratio(1, 2),
            Scalar::int(-1),
            Scalar::int(1),
        ]);
        let seven3d = extrude_seven(&seven2d, &frame, &cmp()).unwrap();
        // All nine ring contacts hold and ring planes pass through the apex.
        let apex = ProjPoint::new(frame.apex.clone()).unwrap();
        for (lo, hi) in seven_edges() {
            let rc = crate::conic::ring_contact(seven3d.vertex(lo), seven3d.vertex(hi), &cmp()).unwrap();
            assert!(rc.contact.found());
            assert!(apex.on(&rc.ring_plane.unwrap(), &cmp()));
        }
        let fs = face_structure(&seven3d.vertices, &cmp()).unwrap();
        let o = fs.concurrency_point.expect("concurrent branch");
        assert!(o.proj_eq(&apex, &cmp()));
        assert!(polar_pair_holds(&seven3d.vertices, &o, &fs.polar_plane.unwrap(), &cmp()));
        // Ring/chord coherence: with the standard frame, the meet of each
        // ring plane with the base plane x0 = 0 is the 2D chord.
        for ((om, k), plane) in &fs.ring_planes {
            let chord2d = match crate::conic::double_contact(
                seven2d.vertex(*om),
                seven2d.vertex(om.insert(*k)),
                &cmp(),
            )
            .unwrap()
            {
                crate::conic::Contact::Found { chord, .. } => chord,
                crate::conic::Contact::None => panic!("edge without contact"),
            };
            assert!(cmp().scalar_is_zero(&plane.0[0]), "ring plane passes through the apex");
            let trace = crate::poly::HomogeneousPoly::linear(&plane.0[1..]);
            assert!(trace.proj_eq(&chord2d, &cmp()), "ring plane trace differs from the chord at {om}/{k}");
        }
    }

    #[test]
    fn cone_slices_by_vertex_incidence() {
        // Cone x² + y² − z² with vertex on the w-axis: an off-vertex plane
        // cuts a regular conic, a plane through the vertex cuts a line pair.
        let cone = SymMatrix::diag(&[Scalar::int(1), Scalar::int(1), Scalar::int(-1), Scalar::int(0)]);
        let q = CompleteConic { primal: cone, dual: SymMatrix::zero(4) };
        let off = ProjHyperplane::new(vec![Scalar::zero(), Scalar::zero(), Scalar::int(1), Scalar::int(-1)]).unwrap();
        let sliced = slice_quadric(&q, &plane_basis(&off).unwrap(), &cmp()).unwrap();
        assert!(!sliced.tangent);
        assert_eq!(sliced.conic.primal.rank(&cmp()), 3);
        let through = ProjHyperplane::new(vec![Scalar::zero(), Scalar::zero(), Scalar::int(1), Scalar::zero()]).unwrap();
        let sliced = slice_quadric(&q, &plane_basis(&through).unwrap(), &cmp()).unwrap();
        assert!(sliced.tangent);
        assert_eq!(sliced.conic.primal.rank(&cmp()), 2);
    }

    #[test]
    fn generic_plane_slices_to_another_valid_cube() {
        let circle = line_i64(1, 0, 0)
            .square()
            .unwrap()
            .add(&line_i64(0, 1, 0).square().unwrap())
            .unwrap()
            .sub(&line_i64(0, 0, 1).square().unwrap())
            .unwrap();
        let params = crate::engine::PenroseParams::standard_cube(
            circle,
            line_i64(1, 0, 0),
            line_i64(0, 1, 0),
            line_i64(1, 1, 1),
            Scalar::ratio(1, 2),
            Scalar::ratio(-1, 3),
            Scalar::int(2),
        )
        .unwrap();
        let lat = build_lattice(&params, &cmp()).unwrap();
        let seven2d = seven_from_lattice(&lat).unwrap();
        let frame = ExtrusionFrame::standard([Scalar::one(), Scalar::ratio(1, 2), Scalar::int(-1), Scalar::int(1)]);
        let seven3d = extrude_seven(&seven2d, &frame, &cmp()).unwrap();
        let completion = crate::completion::complete(&seven3d, &cmp()).unwrap();
        let mut eight = seven3d.vertices.clone();
        eight.insert(
            IndexSet::from_indices(&[1, 2, 3]),
            CompleteConic { primal: completion.primal.clone(), dual: completion.primal.adjugate() },
        );
        // A second plane, not the base: the slice is a different valid cube
        // (slice_cube re-checks all contacts and face concurrency).
        let plane = ProjHyperplane::new(vec![Scalar::int(1), Scalar::int(2), Scalar::int(0), Scalar::int(1)]).unwrap();
        let basis = plane_basis(&plane).unwrap();
        let sliced = slice_cube(&eight, &basis, &cmp()).unwrap();
        assert_eq!(sliced.len(), 8);
        // And it differs from the base-plane cube.
        let base = |om: &IndexSet| poly_to_sym(&lat.vertices[om].poly).unwrap();
        let mut all_equal = true;
        for (om, conic) in &sliced {
            if !conic.primal.proj_eq(&base(om), &cmp()) {
                all_equal = false;
            }
        }
        assert!(!all_equal);
    }

    #[test]
    fn apex_on_quadrics_defers_the_basis_route() {
        // u0 = 0 makes the apex incident to every extruded quadric, so the
        // concurrency pair becomes incident and the basis construction
        // rightly refuses; the determinant completion still works.
        let circle = line_i64(1, 0, 0)
            .square()
            .unwrap()
            .add(&line_i64(0, 1, 0).square().unwrap())
            .unwrap()
            .sub(&line_i64(0, 0, 1).square().unwrap())
            .unwrap();
        let params = crate::engine::PenroseParams::standard_cube(
            circle,
            line_i64(1, 0, 0),
            line_i64(0, 1, 0),
            line_i64(1, 1, 1),
            Scalar::ratio(1, 2),
            Scalar::ratio(-1, 3),
            Scalar::int(2),
        )
        .unwrap();
        let lat = build_lattice(&params, &cmp()).unwrap();
        let seven2d = seven_from_lattice(&lat).unwrap();
        let frame = ExtrusionFrame::standard([Scalar::zero(), Scalar::int(1), Scalar::ratio(1, 2), Scalar::int(-1)]);
        let seven3d = extrude_seven(&seven2d, &frame, &cmp()).unwrap();
        match crate::completion::complete_quadric_via_basis(&seven3d, &cmp()) {
            Err(Error::IncidentPolarPair) => {}
            other => panic!("expected IncidentPolarPair, got {other:?}"),
        }
        let det = crate::completion::complete(&seven3d, &cmp()).unwrap();
        assert!(!det.primal.is_zero());
    }

    #[test]
    fn singular_completion_is_a_cone_with_concurrent_spears() {
        // Choose the polar-plane coordinate u0 so the completed quadric
        // becomes singular: the face spears then pass through a point and
        // the basis route labels the cone case.
        let circle = line_i64(1, 0, 0)
            .square()
            .unwrap()
            .add(&line_i64(0, 1, 0).square().unwrap())
            .unwrap()
            .sub(&line_i64(0, 0, 1).square().unwrap())
            .unwrap();
        let params = crate::engine::PenroseParams::standard_cube(
            circle,
            line_i64(1, 0, 0),
            line_i64(0, 1, 0),
            line_i64(1, 1, 1),
            Scalar::ratio(1, 2),
            Scalar::ratio(-1, 3),
            Scalar::int(2),
        )
        .unwrap();
        let lat = build_lattice(&params, &cmp()).unwrap();
        let seven2d = seven_from_lattice(&lat).unwrap();
        let u_rest = [Scalar::int(1), Scalar::ratio(1, 2), Scalar::int(-1)];
        // First pass with u0 = 1 recovers the scaled plane matrix of the
        // eighth vertex from the completion.
        let frame1 = ExtrusionFrame::standard([Scalar::one(), u_rest[0].clone(), u_rest[1].clone(), u_rest[2].clone()]);
        let seven3d = extrude_seven(&seven2d, &frame1, &cmp()).unwrap();
        let det1 = crate::completion::complete(&seven3d, &cmp()).unwrap();
        // Normalize so the border row matches (u0, u1, u2, u3).
        let m = &det1.primal;
        let pivot = m.at(0, 1).clone();
        let scale = &u_rest[0] / &pivot;
        let m = m.scale(&scale);
        let inner = SymMatrix::from_fn(3, |i, j| m.at(i + 1, j + 1).clone());
        // Singularity condition: u0 = (u^T adj(inner) u) / det(inner).
        let adj = inner.adjugate();
        let quad = adj.quad_form(&u_rest);
        let u0 = &quad / &inner.det();
        let frame2 = ExtrusionFrame::standard([u0, u_rest[0].clone(), u_rest[1].clone(), u_rest[2].clone()]);
        let seven3d = extrude_seven(&seven2d, &frame2, &cmp()).unwrap();
        let det2 = crate::completion::complete(&seven3d, &cmp()).unwrap();
        assert_eq!(det2.primal.rank(&cmp()), 3, "the completion is a cone");
        let basis = crate::completion::complete_quadric_via_basis(&seven3d, &cmp()).unwrap();
        assert!(basis.primal.proj_eq(&det2.primal, &cmp()));
        assert_eq!(basis.case, crate::completion::CompletionCase::ConeDoublePoint);
        assert_eq!(
            crate::completion::refine_classify(&basis.primal, basis.case, &cmp()),
            crate::completion::CompletionCase::ConeDoublePoint
        );
    }

    #[test]
    fn broken_face_condition_detected() {
        // Perturb one second-layer vertex: scaling becomes inconsistent.
        let circle = line_i64(1, 0, 0)
            .square()
            .unwrap()
            .add(&line_i64(0, 1, 0).square().unwrap())
            .unwrap()
            .sub(&line_i64(0, 0, 1).square().unwrap())
            .unwrap();
        let params = crate::engine::PenroseParams::standard_cube(
            circle.clone(),
            line_i64(1, 0, 0),
            line_i64(0, 1, 0),
            line_i64(1, 1, 1),
            Scalar::ratio(1, 2),
            Scalar::ratio(-1, 3),
            Scalar::int(2),
        )
        .unwrap();
        let lat = build_lattice(&params, &cmp()).unwrap();
        let mut seven = seven_from_lattice(&lat).unwrap();
        // Replace S_{23} by a different member of its double-contact family
        // with T^2: still touches its neighbors along an edge path, but the
        // face condition breaks.
        let om = IndexSet::from_indices(&[2, 3]);
        let t2 = seven.vertex(IndexSet::from_indices(&[2])).clone();
        let p = line_i64(3, 1, -2);
        let fake = t2.primal.add(&poly_to_sym(&p.square().unwrap()).unwrap());
        seven.vertices.insert(om, CompleteConic::from_primal(&fake).unwrap());
        let frame = ExtrusionFrame::standard([Scalar::one(), Scalar::zero(), Scalar::zero(), Scalar::zero()]);
        match extrude_seven(&seven, &frame, &cmp()) {
            Err(Error::ScalingInconsistent) | Err(Error::NoContact) | Err(Error::NotRankOne(_)) => {}
            other => panic!("expected a scaling failure, got {other:?}"),
        }
    }
}
