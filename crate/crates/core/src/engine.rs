//! The bordered-matrix subdeterminant machine: builds the full 2^n lattice of
//! conics or quadrics (n = 3 cube, n = 4 hypercube), its chords, scalar
//! subdeterminants, face conics and face diagonals, and verifies every
//! identity at construction time.

use std::collections::BTreeMap;
use std::fmt;

use crate::conic::CompleteConic;
use crate::error::{Error, Result};
use crate::matrix::{det_poly, extract_double_line, poly_to_sym, PolyMatrix, Sign};
use crate::poly::HomogeneousPoly;
use crate::projective::{concurrent, meet2, ProjHyperplane, ProjPoint};
use crate::scalar::{Comparator, Scalar};

/// A subset of {1..n} as a bitmask. Bit k-1 carries index k.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexSet(pub u8);

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    pub fn from_indices(indices: &[usize]) -> IndexSet {
        let mut m = 0u8;
        for &i in indices {
            assert!((1..=4).contains(&i));
            m |= 1 << (i - 1);
        }
        IndexSet(m)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0 & (1 << (i - 1)) != 0
    }

    pub fn insert(&self, i: usize) -> IndexSet {
        IndexSet(self.0 | (1 << (i - 1)))
    }

    pub fn remove(&self, i: usize) -> IndexSet {
        IndexSet(self.0 & !(1 << (i - 1)))
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn indices(&self) -> Vec<usize> {
        (1..=4).filter(|&i| self.contains(i)).collect()
    }

    /// All subsets of {1..n} in mask order (deterministic).
    pub fn all_subsets(n: usize) -> Vec<IndexSet> {
        (0u8..(1 << n)).map(IndexSet).collect()
    }

    /// Subset label in the document convention: "S_{12}".
    pub fn label(&self) -> String {
        let digits: String = self.indices().iter().map(|i| i.to_string()).collect();
        format!("S_{{{digits}}}")
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.indices().iter().map(|i| i.to_string()).collect::<String>())
    }
}

/// Parameters of the bordered matrix: the corner conic, the border lines,
/// and the scalar block. The d = -1 normalization of the cube formulas is a
/// constructor preset; the general engine keeps d free.
#[derive(Clone, Debug)]
pub struct PenroseParams {
    /// 3 for conics, 4 for quadrics.
    pub vars: usize,
    /// Lattice order: 3 (cube) or 4 (hypercube).
    pub n: usize,
    pub s0: HomogeneousPoly,
    /// Weighted lines p_1..p_n; scale matters.
    pub lines: Vec<HomogeneousPoly>,
    pub d: Vec<Scalar>,
    /// Off-diagonal scalars keyed by (j, k) with j < k.
    pub a: BTreeMap<(usize, usize), Scalar>,
}

impl PenroseParams {
    pub fn new(
        vars: usize,
        n: usize,
        s0: HomogeneousPoly,
        lines: Vec<HomogeneousPoly>,
        d: Vec<Scalar>,
        a: BTreeMap<(usize, usize), Scalar>,
    ) -> Result<Self> {
        if !(vars == 3 || vars == 4) || !(n == 3 || n == 4 || n == 1 || n == 2) {
            return Err(Error::InvalidParameter("vars must be 3 or 4, n between 1 and 4".into()));
        }
        if lines.len() != n || d.len() != n {
            return Err(Error::SizeMismatch);
        }
        for l in &lines {
            if l.is_zero() {
                return Err(Error::InvalidParameter("border lines must be nonzero".into()));
            }
            if !l.is_zero() && (l.vars() != vars || l.degree() != 1) {
                return Err(Error::InvalidParameter("border entries must be degree-1 in the ambient variables".into()));
            }
        }
        if !s0.is_zero() && (s0.vars() != vars || s0.degree() != 2) {
            return Err(Error::InvalidParameter("corner entry must be degree-2".into()));
        }
        for j in 1..=n {
            for k in (j + 1)..=n {
                if !a.contains_key(&(j, k)) {
                    return Err(Error::InvalidParameter(format!("missing off-diagonal a_{{{j}{k}}}")));
                }
            }
        }
        Ok(PenroseParams { vars, n, s0, lines, d, a })
    }

    /// The cube preset with d_i = -1 and (a, b, c) = (a_23, a_13, a_12).
    pub fn standard_cube(
        s0: HomogeneousPoly,
        p: HomogeneousPoly,
        q: HomogeneousPoly,
        r: HomogeneousPoly,
        a: Scalar,
        b: Scalar,
        c: Scalar,
    ) -> Result<Self> {
        let vars = s0.vars().max(p.vars());
        let mut map = BTreeMap::new();
        map.insert((2, 3), a);
        map.insert((1, 3), b);
        map.insert((1, 2), c);
        PenroseParams::new(vars, 3, s0, vec![p, q, r], vec![Scalar::int(-1); 3], map)
    }

    fn a_at(&self, j: usize, k: usize) -> Scalar {
        if j == k {
            return self.d[j - 1].clone();
        }
        let key = (j.min(k), j.max(k));
        self.a[&key].clone()
    }

    /// Bordered-matrix entry as a homogeneous polynomial.
    pub fn entry(&self, i: usize, j: usize) -> HomogeneousPoly {
        match (i, j) {
            (0, 0) => self.s0.clone(),
            (0, j) => self.lines[j - 1].clone(),
            (i, 0) => self.lines[i - 1].clone(),
            (i, j) => HomogeneousPoly::constant(self.vars, self.a_at(i, j)),
        }
    }

    /// The (n+1) x (n+1) symmetric matrix of polynomials.
    pub fn bordered_matrix(&self) -> PolyMatrix {
        PolyMatrix::from_fn(self.n + 1, |i, j| self.entry(i, j))
    }

    /// Determinant of the submatrix selected by ascending row and column
    /// index sets over {0..n}.
    pub fn subdet(&self, rows: &[usize], cols: &[usize]) -> Result<HomogeneousPoly> {
        if rows.len() != cols.len() {
            return Err(Error::SizeMismatch);
        }
        let sel: Vec<Vec<HomogeneousPoly>> =
            rows.iter().map(|&i| cols.iter().map(|&j| self.entry(i, j)).collect()).collect();
        det_poly(&sel)
    }

    /// Vertex polynomial S_Omega: the principal subdeterminant on
    /// Omega ∪ {0}.
    pub fn vertex(&self, om: IndexSet) -> HomogeneousPoly {
        let mut rows = vec![0usize];
        rows.extend(om.indices());
        self.subdet(&rows, &rows).expect("square selection")
    }

    /// Chord of contact between S_Omega and S_{Omega ∪ {k}}:
    /// rows Omega ∪ {k}, columns Omega ∪ {0}.
    pub fn chord(&self, om: IndexSet, k: usize) -> Result<HomogeneousPoly> {
        if om.contains(k) {
            return Err(Error::IndexInSet(k));
        }
        let mut rows = om.indices();
        rows.push(k);
        rows.sort_unstable();
        let mut cols = vec![0usize];
        cols.extend(om.indices());
        self.subdet(&rows, &cols)
    }

    /// Scalar principal subdeterminant f_Omega, with f_empty = 1.
    pub fn f_scalar(&self, om: IndexSet) -> Scalar {
        if om.is_empty() {
            let mode = self
                .s0
                .terms()
                .next()
                .map(|(_, c)| c.mode())
                .unwrap_or(crate::scalar::Mode::Exact);
            return Scalar::of_mode(mode, 1);
        }
        let idx = om.indices();
        let poly = self.subdet(&idx, &idx).expect("square selection");
        constant_of(&poly)
    }

    /// Face conic H_{Omega,j,k}: rows Omega ∪ {0, j}, columns Omega ∪ {0, k}.
    pub fn face_conic(&self, om: IndexSet, j: usize, k: usize) -> Result<HomogeneousPoly> {
        if om.contains(j) {
            return Err(Error::IndexInSet(j));
        }
        if om.contains(k) || j == k {
            return Err(Error::IndexInSet(k));
        }
        let mut rows = vec![0usize, j];
        rows.extend(om.indices());
        rows.sort_unstable();
        let mut cols = vec![0usize, k];
        cols.extend(om.indices());
        cols.sort_unstable();
        self.subdet(&rows, &cols)
    }

    /// Scalar g_{Omega,j,k}: rows Omega ∪ {j}, columns Omega ∪ {k}.
    pub fn g_scalar(&self, om: IndexSet, j: usize, k: usize) -> Result<Scalar> {
        if om.contains(j) {
            return Err(Error::IndexInSet(j));
        }
        if om.contains(k) || j == k {
            return Err(Error::IndexInSet(k));
        }
        let mut rows = om.indices();
        rows.push(j);
        rows.sort_unstable();
        let mut cols = om.indices();
        cols.push(k);
        cols.sort_unstable();
        Ok(constant_of(&self.subdet(&rows, &cols)?))
    }

    /// Face diagonal q_k (n = 3 only): rows {m, j} (the complement of k),
    /// columns {0, k}; joins the face points of the two faces opposite in k.
    pub fn face_diagonal(&self, k: usize) -> Result<HomogeneousPoly> {
        if self.n != 3 {
            return Err(Error::InvalidParameter("face diagonals need n = 3".into()));
        }
        let rows: Vec<usize> = (1..=3).filter(|&i| i != k).collect();
        let cols = vec![0usize, k];
        self.subdet(&rows, &cols)
    }
}

fn constant_of(p: &HomogeneousPoly) -> Scalar {
    if p.is_zero() {
        Scalar::zero()
    } else {
        debug_assert_eq!(p.degree(), 0);
        p.terms().next().map(|(_, c)| c.clone()).unwrap_or_else(Scalar::zero)
    }
}

/// A lattice vertex: its polynomial, rank data, and the degenerate-reading
/// annotations of the vanishing-parameter analysis.
#[derive(Clone, Debug)]
pub struct VertexData {
    pub poly: HomogeneousPoly,
    pub rank: usize,
    /// For rank-1 vertices: the extracted double line and its sign.
    pub double_line: Option<(HomogeneousPoly, Sign)>,
    /// Rank-1 vertex with f_Omega = 0: readable as a point pair as much as a
    /// double line.
    pub point_pair_candidate: bool,
}

/// Report for one face of the lattice. Plane lattices carry the common
/// point of the four chords; space lattices carry the common axis of the
/// four ring planes.
#[derive(Clone, Debug)]
pub struct FaceReport {
    pub base: IndexSet,
    pub free: (usize, usize),
    pub chords: Vec<HomogeneousPoly>,
    pub point: Option<ProjPoint>,
    pub axis: Option<crate::projective::Line3D>,
    pub concurrent: bool,
    pub zero_chords: usize,
    pub notes: Vec<String>,
}

/// The full subset lattice with chords, scalars, face conics and diagonals.
#[derive(Clone, Debug)]
pub struct PenroseLattice {
    pub params: PenroseParams,
    pub vertices: BTreeMap<IndexSet, VertexData>,
    pub chords: BTreeMap<(IndexSet, usize), HomogeneousPoly>,
    pub f: BTreeMap<IndexSet, Scalar>,
    /// n = 3 only: face conics H_{Omega,j,k} keyed by (base, j, k).
    pub face_conics: BTreeMap<(IndexSet, usize, usize), HomogeneousPoly>,
    /// n = 3 only: face diagonals q_k.
    pub diagonals: BTreeMap<usize, HomogeneousPoly>,
}

/// Builds every vertex, chord and scalar and verifies the edge identity
/// f_{Omega∪{k}}·S_Omega − f_Omega·S_{Omega∪{k}} = p_{Omega,k}² on every
/// edge, exactly. Violations abort construction.
pub fn build_lattice(params: &PenroseParams, cmp: &Comparator) -> Result<PenroseLattice> {
    let n = params.n;
    let mut vertices = BTreeMap::new();
    let mut chords = BTreeMap::new();
    let mut f = BTreeMap::new();
    for om in IndexSet::all_subsets(n) {
        let poly = params.vertex(om);
        let fs = params.f_scalar(om);
        let (rank, double_line) = if poly.is_zero() {
            (0, None)
        } else {
            let m = poly_to_sym(&poly)?;
            let r = m.rank(cmp);
            let dl = if r == 1 {
                extract_double_line(&poly, cmp).ok().map(|(l, s, _)| (l, s))
            } else {
                None
            };
            (r, dl)
        };
        let point_pair_candidate = rank == 1 && cmp.scalar_is_zero(&fs);
        vertices.insert(om, VertexData { poly, rank, double_line, point_pair_candidate });
        f.insert(om, fs);
    }
    for om in IndexSet::all_subsets(n) {
        for k in 1..=n {
            if om.contains(k) {
                continue;
            }
            let chord = params.chord(om, k)?;
            // Edge identity, checked as an exact polynomial identity.
            let omk = om.insert(k);
            let lhs = vertices[&om]
                .poly
                .scale(&f[&omk])
                .sub(&vertices[&omk].poly.scale(&f[&om]))?;
            let rhs = chord.square()?;
            let residual = lhs.sub(&rhs)?;
            if !residual.is_zero_within(cmp) {
                return Err(Error::EdgeIdentityViolated(format!("{om}"), k));
            }
            chords.insert((om, k), chord);
        }
    }
    let mut face_conics = BTreeMap::new();
    let mut diagonals = BTreeMap::new();
    if n == 3 {
        for om in IndexSet::all_subsets(n) {
            for j in 1..=n {
                for k in 1..=n {
                    if j == k || om.contains(j) || om.contains(k) {
                        continue;
                    }
                    face_conics.insert((om, j, k), params.face_conic(om, j, k)?);
                }
            }
        }
        for k in 1..=3 {
            diagonals.insert(k, params.face_diagonal(k)?);
        }
    }
    Ok(PenroseLattice { params: params.clone(), vertices, chords, f, face_conics, diagonals })
}

impl PenroseLattice {
    pub fn n(&self) -> usize {
        self.params.n
    }

    /// All faces as (base, j, k) with j < k, j,k not in base.
    pub fn faces(&self) -> Vec<(IndexSet, usize, usize)> {
        let n = self.params.n;
        let mut out = Vec::new();
        for om in IndexSet::all_subsets(n) {
            for j in 1..=n {
                for k in (j + 1)..=n {
                    if !om.contains(j) && !om.contains(k) {
                        out.push((om, j, k));
                    }
                }
            }
        }
        out
    }

    /// The four chords of a face and their common point.
    ///
    /// Proportional chord pairs (the a_{jk} = 0 collapse) still define the
    /// face point through the remaining distinct pair; a vanished chord is an
    /// error.
    pub fn face_point(&self, base: IndexSet, j: usize, k: usize, cmp: &Comparator) -> Result<FaceReport> {
        let chords: Vec<HomogeneousPoly> = vec![
            self.chords[&(base, j)].clone(),
            self.chords[&(base, k)].clone(),
            self.chords[&(base.insert(j), k)].clone(),
            self.chords[&(base.insert(k), j)].clone(),
        ];
        let zero_chords = chords.iter().filter(|c| c.is_zero_within(cmp)).count();
        if zero_chords > 0 {
            return Err(Error::ZeroChord);
        }
        let lines: Vec<ProjHyperplane> = chords
            .iter()
            .map(|c| ProjHyperplane::new(c.linear_coeffs()))
            .collect::<Result<_>>()?;
        let conc = concurrent(&lines, cmp)?;
        let mut notes = Vec::new();
        // Find two non-proportional chords for the common element: a point
        // in the plane case, an axis in the space case.
        let mut point = None;
        let mut axis = None;
        'outer: for i in 0..lines.len() {
            for l in (i + 1)..lines.len() {
                if !lines[i].proj_eq(&lines[l], cmp) {
                    if self.params.vars == 3 {
                        point = Some(meet2(&lines[i], &lines[l], cmp)?);
                    } else {
                        axis = Some(crate::projective::Line3D::meet(&lines[i], &lines[l], cmp)?);
                    }
                    break 'outer;
                }
            }
        }
        if point.is_none() && axis.is_none() {
            notes.push("all four chords proportional".into());
        }
        if !conc {
            notes.push("chords not concurrent".into());
        }
        Ok(FaceReport {
            base,
            free: (j, k),
            chords,
            point: if conc { point } else { None },
            axis: if conc { axis } else { None },
            concurrent: conc,
            zero_chords,
            notes,
        })
    }

    /// Verifies concurrency on every face; zero chords are flagged, not
    /// failed.
    pub fn verify_faces(&self, cmp: &Comparator) -> Result<Vec<FaceReport>> {
        let mut out = Vec::new();
        for (base, j, k) in self.faces() {
            match self.face_point(base, j, k, cmp) {
                Ok(report) => {
                    if !report.concurrent {
                        return Err(Error::InvalidParameter(format!(
                            "face ({base}, {j}, {k}) fails the chord concurrency test"
                        )));
                    }
                    out.push(report);
                }
                Err(Error::ZeroChord) => out.push(FaceReport {
                    base,
                    free: (j, k),
                    chords: Vec::new(),
                    point: None,
                    axis: None,
                    concurrent: true,
                    zero_chords: 1,
                    notes: vec!["degenerate face: vanished chord".into()],
                }),
                Err(e) => return Err(e),
            }
        }
        Ok(out)
    }

    /// The face-conic identity: S_{Ω∪{k}}·S_{Ω∪{j}} − S_Ω·S_{Ω∪{j,k}} = H²,
    /// an exact degree-4 identity on every face.
    pub fn verify_face_conics(&self, cmp: &Comparator) -> Result<()> {
        for (base, j, k) in self.faces() {
            let h = &self.face_conics[&(base, j, k)];
            let lhs = self.vertices[&base.insert(k)]
                .poly
                .mul(&self.vertices[&base.insert(j)].poly)?
                .sub(&self.vertices[&base].poly.mul(&self.vertices[&base.insert(j).insert(k)].poly)?)?;
            let residual = lhs.sub(&h.square()?)?;
            if !residual.is_zero_within(cmp) {
                return Err(Error::InvalidParameter(format!("face-conic identity fails on ({base}, {j}, {k})")));
            }
        }
        Ok(())
    }

    /// The face-diagonal identity p_{{j},m}·p_{{k},m} − p_m·p_{{j,k},m} =
    /// q_j'·q_k'-style products, plus incidence of each diagonal with the
    /// face points of the opposite faces.
    pub fn verify_face_diagonals(&self, cmp: &Comparator) -> Result<()> {
        if self.n() != 3 {
            return Ok(());
        }
        let p = &self.params;
        for m in 1..=3usize {
            let rest: Vec<usize> = (1..=3).filter(|&i| i != m).collect();
            let (j, k) = (rest[0], rest[1]);
            // p_{{j},m} p_{{k},m} − p_m p_{{j,k},m} = |mj;0k| |mk;0j|
            let lhs = self.chords[&(IndexSet::from_indices(&[j]), m)]
                .mul(&self.chords[&(IndexSet::from_indices(&[k]), m)])?
                .sub(&self.chords[&(IndexSet::EMPTY, m)].mul(&self.chords[&(IndexSet::from_indices(&[j, k]), m)])?)?;
            let qk = p.subdet(&sorted2(m, j), &[0, k])?;
            let qj = p.subdet(&sorted2(m, k), &[0, j])?;
            let residual = lhs.sub(&qk.mul(&qj)?)?;
            if !residual.is_zero_within(cmp) {
                return Err(Error::InvalidParameter(format!("face-diagonal identity fails at m = {m}")));
            }
        }
        // Incidence: q_k passes through the face points of the two faces
        // with free indices {j, m} (k everywhere in the base, and nowhere).
        for k in 1..=3usize {
            let qk = &self.diagonals[&k];
            if qk.is_zero_within(cmp) {
                continue;
            }
            let line = ProjHyperplane::new(qk.linear_coeffs())?;
            let rest: Vec<usize> = (1..=3).filter(|&i| i != k).collect();
            for base in [IndexSet::EMPTY, IndexSet::from_indices(&[k])] {
                if let Ok(report) = self.face_point(base, rest[0], rest[1], cmp) {
                    if let Some(pt) = &report.point {
                        if !pt.on(&line, cmp) {
                            return Err(Error::InvalidParameter(format!(
                                "diagonal q_{k} misses the face point of base {base}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The mixed relations tying face conics, diagonals and chords together:
    /// g_{{j},ℓ,m}·H_{∅,ℓ,m} − g_{∅,ℓ,m}·H_{{j},ℓ,m} = q_ℓ·q_m and
    /// g_{{j},ℓ,m}·H_{∅,j,m} − a_{jm}·H_{{j},m,ℓ} = p_{{j},m}·q_m,
    /// exactly, for every index choice.
    pub fn verify_diag_relations(&self, cmp: &Comparator) -> Result<()> {
        if self.n() != 3 {
            return Ok(());
        }
        let p = &self.params;
        for perm in permutations3() {
            let (j, l, m) = perm;
            let om_j = IndexSet::from_indices(&[j]);
            let g_j = p.g_scalar(om_j, l, m)?;
            let g_e = p.g_scalar(IndexSet::EMPTY, l, m)?;
            let h_e_lm = p.face_conic(IndexSet::EMPTY, l, m)?;
            let h_j_lm = p.face_conic(om_j, l, m)?;
            let ql = p.face_diagonal(l)?;
            let qm = p.face_diagonal(m)?;
            let lhs1 = h_e_lm.scale(&g_j).sub(&h_j_lm.scale(&g_e))?;
            let res1 = lhs1.sub(&ql.mul(&qm)?)?;
            if !res1.is_zero_within(cmp) {
                return Err(Error::InvalidParameter(format!("diagonal relation 1 fails at ({j},{l},{m})")));
            }
            let h_e_jm = p.face_conic(IndexSet::EMPTY, j, m)?;
            let h_j_ml = p.face_conic(om_j, m, l)?;
            let ajm = p.a_at(j, m);
            let pjm = self.chords[&(om_j, m)].clone();
            let lhs2 = h_e_jm.scale(&g_j).sub(&h_j_ml.scale(&ajm))?;
            let res2 = lhs2.sub(&pjm.mul(&qm)?)?;
            if !res2.is_zero_within(cmp) {
                return Err(Error::InvalidParameter(format!("diagonal relation 2 fails at ({j},{l},{m})")));
            }
        }
        Ok(())
    }

    /// Complete conic at a vertex, when the primal determines one.
    pub fn complete_vertex(&self, om: IndexSet) -> Result<CompleteConic> {
        let v = &self.vertices[&om];
        if v.poly.is_zero() {
            return Err(Error::InvalidParameter(format!("vertex {om} vanishes")));
        }
        CompleteConic::from_primal(&poly_to_sym(&v.poly)?)
    }

    /// True when every face element exists and all are projectively equal:
    /// coincident face points in the plane, a single common face axis in
    /// space (the two-completion regime).
    pub fn all_face_points_equal(&self, cmp: &Comparator) -> Result<bool> {
        let mut points: Vec<ProjPoint> = Vec::new();
        let mut axes: Vec<crate::projective::Line3D> = Vec::new();
        for (base, j, k) in self.faces() {
            match self.face_point(base, j, k, cmp) {
                Ok(report) => match (report.point, report.axis) {
                    (Some(pt), _) => points.push(pt),
                    (None, Some(ax)) => axes.push(ax),
                    _ => return Ok(false),
                },
                Err(Error::ZeroChord) => return Ok(false),
                Err(e) => return Err(e),
            }
        }
        if !points.is_empty() && !axes.is_empty() {
            return Ok(false);
        }
        Ok(points.windows(2).all(|w| w[0].proj_eq(&w[1], cmp))
            && axes.windows(2).all(|w| w[0].proj_eq(&w[1], cmp)))
    }
}

fn sorted2(a: usize, b: usize) -> Vec<usize> {
    let mut v = vec![a, b];
    v.sort_unstable();
    v
}

fn permutations3() -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for j in 1..=3 {
        for l in 1..=3 {
            for m in 1..=3 {
                if j != l && l != m && j != m {
                    out.push((j, l, m));
                }
            }
        }
    }
    out
}

/// One structural consequence of a vanishing parameter, with its verification
/// status.
#[derive(Clone, Debug)]
pub struct DegeneracyFinding {
    pub trigger: String,
    pub consequence: String,
    pub verified: bool,
}

/// Emits and verifies the predicted consequences of vanishing parameters:
/// d_j = 0 collapses the first-layer vertex onto its chord squared,
/// f_{jk} = 0 turns the second layer into a double line meeting its
/// neighbors in the same point pair, and a_{jk} = 0 fuses the face chords
/// into proportional pairs.
pub fn classify_degeneracies(lattice: &PenroseLattice, cmp: &Comparator) -> Vec<DegeneracyFinding> {
    let mut out = Vec::new();
    let p = &lattice.params;
    let n = p.n;
    // A rank-1 base makes every first-layer vertex a line pair whose lines
    // cross somewhere on the base line; reported, not canonicalized further.
    if lattice.vertices[&IndexSet::EMPTY].rank == 1 {
        let ok = (1..=n).all(|j| {
            let v = &lattice.vertices[&IndexSet::from_indices(&[j])];
            v.poly.is_zero() || v.rank <= 2
        });
        out.push(DegeneracyFinding {
            trigger: "rank(S_{}) = 1".into(),
            consequence: "every first-layer vertex is a line pair crossing on the base line".into(),
            verified: ok,
        });
    }
    for j in 1..=n {
        if cmp.scalar_is_zero(&p.d[j - 1]) {
            let om = IndexSet::from_indices(&[j]);
            let expected = p.lines[j - 1].square().expect("degree 2").neg();
            let ok = lattice.vertices[&om]
                .poly
                .sub(&expected)
                .map(|r| r.is_zero_within(cmp))
                .unwrap_or(false);
            out.push(DegeneracyFinding {
                trigger: format!("d_{j} = 0"),
                consequence: format!("S_{{{j}}} = -p_{j}^2 and the adjacent chords collapse onto p_{j}"),
                verified: ok && adjacent_chords_proportional(lattice, j, cmp),
            });
        }
    }
    for j in 1..=n {
        for k in (j + 1)..=n {
            let om = IndexSet::from_indices(&[j, k]);
            let fjk = &lattice.f[&om];
            if cmp.scalar_is_zero(fjk) && !cmp.scalar_is_zero(&p.d[j - 1]) && !cmp.scalar_is_zero(&p.d[k - 1]) {
                let v = &lattice.vertices[&om];
                let rank_ok = v.rank == 1;
                let pair_ok = rank_ok && same_point_pair(lattice, j, k, cmp);
                out.push(DegeneracyFinding {
                    trigger: format!("f_{{{j}{k}}} = 0"),
                    consequence: format!(
                        "S_{{{j}{k}}} is a double line meeting S_{{{j}}} and S_{{{k}}} in the same point pair"
                    ),
                    verified: pair_ok,
                });
            }
            if cmp.scalar_is_zero(&p.a_at(j, k)) {
                let c1 = &lattice.chords[&(IndexSet::EMPTY, j)];
                let c2 = &lattice.chords[&(IndexSet::from_indices(&[k]), j)];
                let c3 = &lattice.chords[&(IndexSet::EMPTY, k)];
                let c4 = &lattice.chords[&(IndexSet::from_indices(&[j]), k)];
                let ok = c1.proj_eq(c2, cmp) && c3.proj_eq(c4, cmp);
                out.push(DegeneracyFinding {
                    trigger: format!("a_{{{j}{k}}} = 0"),
                    consequence: "the four chords of the face collapse to two proportional pairs".into(),
                    verified: ok,
                });
            }
        }
    }
    out
}

fn adjacent_chords_proportional(lattice: &PenroseLattice, j: usize, cmp: &Comparator) -> bool {
    let pj = &lattice.params.lines[j - 1];
    let base = &lattice.chords[&(IndexSet::EMPTY, j)];
    if !base.proj_eq(pj, cmp) {
        return false;
    }
    for k in 1..=lattice.params.n {
        if k == j {
            continue;
        }
        let c = &lattice.chords[&(IndexSet::from_indices(&[j]), k)];
        if !c.is_zero_within(cmp) && !c.proj_eq(pj, cmp) {
            return false;
        }
    }
    true
}

/// Exact check that the carrier of the double line S_{jk} meets S_{j} and
/// S_{k} in the same pair of points: the restrictions of both conics to the
/// carrier are proportional binary forms.
fn same_point_pair(lattice: &PenroseLattice, j: usize, k: usize, cmp: &Comparator) -> bool {
    let om = IndexSet::from_indices(&[j, k]);
    let Some((carrier, _)) = &lattice.vertices[&om].double_line else {
        return false;
    };
    let sj = &lattice.vertices[&IndexSet::from_indices(&[j])].poly;
    let sk = &lattice.vertices[&IndexSet::from_indices(&[k])].poly;
    restrictions_proportional(carrier, sj, sk, cmp)
}

/// Restricts two conics to a line and compares the binary quadratics up to
/// scale: true when the line meets both in the same point pair.
pub fn restrictions_proportional(
    line: &HomogeneousPoly,
    f: &HomogeneousPoly,
    g: &HomogeneousPoly,
    cmp: &Comparator,
) -> bool {
    let Some((u, v)) = line_basis(line) else { return false };
    let bf = restrict_binary(f, &u, &v);
    let bg = restrict_binary(g, &u, &v);
    cmp.proj_eq_vec(&bf, &bg)
}

/// Two independent points spanning the zero set of a degree-1 polynomial.
fn line_basis(line: &HomogeneousPoly) -> Option<(Vec<Scalar>, Vec<Scalar>)> {
    let coeffs = line.linear_coeffs();
    let ns = crate::matrix::nullspace(&[coeffs]);
    if ns.len() < 2 {
        return None;
    }
    Some((ns[0].clone(), ns[1].clone()))
}

/// Coefficients (f(u), polar term, f(v)) of the restriction of a conic to
/// the span of u and v.
fn restrict_binary(f: &HomogeneousPoly, u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
    let m = poly_to_sym(f).expect("degree 2");
    let fu = m.quad_form(u);
    let fv = m.quad_form(v);
    let mixed = {
        let mv = m.apply(v);
        u.iter().zip(&mv).fold(Scalar::zero(), |acc, (a, b)| &acc + &(a * b))
    };
    vec![fu, mixed, fv]
}
