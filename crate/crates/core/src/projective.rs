//! Projective points, lines and planes, and the meet/join algebra, including
//! Plücker lines in 3-space.

use crate::error::{Error, Result};
use crate::matrix::mat_rank;
use crate::scalar::{normalize_primitive, Comparator, Scalar};

/// A point of the projective plane (3 coordinates) or space (4 coordinates),
/// homogeneous: equality is up to nonzero scale.
#[derive(Clone, Debug)]
pub struct ProjPoint(pub Vec<Scalar>);

/// A line of the projective plane or a plane of projective space, in dual
/// coordinates.
#[derive(Clone, Debug)]
pub struct ProjHyperplane(pub Vec<Scalar>);

impl ProjPoint {
    pub fn new(coords: Vec<Scalar>) -> Result<Self> {
        if coords.iter().all(|c| c.is_zero()) {
            return Err(Error::InvalidParameter("zero vector is not a point".into()));
        }
        Ok(ProjPoint(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn proj_eq(&self, other: &ProjPoint, cmp: &Comparator) -> bool {
        cmp.proj_eq_vec(&self.0, &other.0)
    }

    pub fn normalize(&self) -> ProjPoint {
        ProjPoint(normalize_primitive(&self.0))
    }

    /// Incidence with a hyperplane: the dual pairing vanishes.
    pub fn on(&self, h: &ProjHyperplane, cmp: &Comparator) -> bool {
        cmp.scalar_is_zero_scaled(&dot(&self.0, &h.0), scale_of(&self.0) * scale_of(&h.0))
    }
}

impl ProjHyperplane {
    pub fn new(coords: Vec<Scalar>) -> Result<Self> {
        if coords.iter().all(|c| c.is_zero()) {
            return Err(Error::InvalidParameter("zero vector is not a hyperplane".into()));
        }
        Ok(ProjHyperplane(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn proj_eq(&self, other: &ProjHyperplane, cmp: &Comparator) -> bool {
        cmp.proj_eq_vec(&self.0, &other.0)
    }

    pub fn normalize(&self) -> ProjHyperplane {
        ProjHyperplane(normalize_primitive(&self.0))
    }
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).fold(Scalar::zero(), |acc, (x, y)| &acc + &(x * y))
}

fn scale_of(v: &[Scalar]) -> f64 {
    v.iter().map(|s| s.to_f64().abs()).fold(0.0f64, f64::max)
}

fn cross(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    vec![
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

/// Common point of two distinct lines of the plane.
pub fn meet2(a: &ProjHyperplane, b: &ProjHyperplane, cmp: &Comparator) -> Result<ProjPoint> {
    let v = cross(&a.0, &b.0);
    if v.iter().all(|c| cmp.scalar_is_zero(c)) {
        return Err(Error::CoincidentLines);
    }
    Ok(ProjPoint(v))
}

/// Line joining two distinct points of the plane.
pub fn join2(p: &ProjPoint, q: &ProjPoint, cmp: &Comparator) -> Result<ProjHyperplane> {
    let v = cross(&p.0, &q.0);
    if v.iter().all(|c| cmp.scalar_is_zero(c)) {
        return Err(Error::CoincidentArguments);
    }
    Ok(ProjHyperplane(v))
}

/// True when all lines pass through a common point (the stacked coefficient
/// matrix has rank at most 2); dually for planes sharing a line.
pub fn concurrent(lines: &[ProjHyperplane], cmp: &Comparator) -> Result<bool> {
    if lines.len() < 2 {
        return Err(Error::EmptyInput);
    }
    let rows: Vec<Vec<Scalar>> = lines.iter().map(|l| l.0.clone()).collect();
    Ok(mat_rank(&rows, cmp) <= 2)
}

/// True when all points lie on a common line.
pub fn collinear(points: &[ProjPoint], cmp: &Comparator) -> Result<bool> {
    if points.len() < 2 {
        return Err(Error::EmptyInput);
    }
    let rows: Vec<Vec<Scalar>> = points.iter().map(|p| p.0.clone()).collect();
    Ok(mat_rank(&rows, cmp) <= 2)
}

/// A line of projective 3-space in primal Plücker coordinates
/// (p01, p02, p03, p23, p31, p12), satisfying the Plücker relation
/// p01·p23 + p02·p31 + p03·p12 = 0.
#[derive(Clone, Debug)]
pub struct Line3D {
    pl: [Scalar; 6],
}

impl Line3D {
    /// Join of two distinct points.
    pub fn join(p: &ProjPoint, q: &ProjPoint, cmp: &Comparator) -> Result<Line3D> {
        assert_eq!(p.dim(), 4);
        let m = |i: usize, j: usize| &(&p.0[i] * &q.0[j]) - &(&p.0[j] * &q.0[i]);
        let pl = [m(0, 1), m(0, 2), m(0, 3), m(2, 3), m(3, 1), m(1, 2)];
        if pl.iter().all(|c| cmp.scalar_is_zero(c)) {
            return Err(Error::CoincidentArguments);
        }
        Ok(Line3D { pl })
    }

    /// Meet of two distinct planes: dual Plücker coordinates mapped to primal
    /// by the index-complement rule.
    pub fn meet(a: &ProjHyperplane, b: &ProjHyperplane, cmp: &Comparator) -> Result<Line3D> {
        assert_eq!(a.dim(), 4);
        let m = |i: usize, j: usize| &(&a.0[i] * &b.0[j]) - &(&a.0[j] * &b.0[i]);
        // q01..q12 dual, primal p_ij = q_kl with {i,j,k,l} = {0,1,2,3}.
        let pl = [m(2, 3), m(3, 1), m(1, 2), m(0, 1), m(0, 2), m(0, 3)];
        if pl.iter().all(|c| cmp.scalar_is_zero(c)) {
            return Err(Error::CoincidentArguments);
        }
        Ok(Line3D { pl })
    }

    pub fn coords(&self) -> &[Scalar; 6] {
        &self.pl
    }

    pub fn plucker_residual(&self) -> Scalar {
        let p = &self.pl;
        &(&(&p[0] * &p[3]) + &(&p[1] * &p[4])) + &(&p[2] * &p[5])
    }

    /// Antisymmetric primal matrix P with P[i][j] = p_ij.
    fn primal_matrix(&self) -> [[Scalar; 4]; 4] {
        let z = Scalar::zero;
        let p = &self.pl;
        [
            [z(), p[0].clone(), p[1].clone(), p[2].clone()],
            [-&p[0], z(), p[5].clone(), -&p[4]],
            [-&p[1], -&p[5], z(), p[3].clone()],
            [-&p[2], p[4].clone(), -&p[3], z()],
        ]
    }

    /// Antisymmetric dual matrix Q with Q[i][j] = q_ij (complement coords).
    fn dual_matrix(&self) -> [[Scalar; 4]; 4] {
        let z = Scalar::zero;
        let p = &self.pl;
        // q01 = p23, q02 = p31, q03 = p12, q23 = p01, q31 = p02, q12 = p03
        [
            [z(), p[3].clone(), p[4].clone(), p[5].clone()],
            [-&p[3], z(), p[2].clone(), -&p[1]],
            [-&p[4], -&p[2], z(), p[0].clone()],
            [-&p[5], p[1].clone(), -&p[0], z()],
        ]
    }

    /// Meet with a plane: a point, unless the line lies in the plane.
    pub fn meet_plane(&self, h: &ProjHyperplane, cmp: &Comparator) -> Option<ProjPoint> {
        let m = self.primal_matrix();
        let v: Vec<Scalar> = (0..4).map(|i| dot(&m[i], &h.0)).collect();
        if v.iter().all(|c| cmp.scalar_is_zero_scaled(c, scale_of(&h.0) * self.scale())) {
            None
        } else {
            Some(ProjPoint(v))
        }
    }

    /// Join with a point: a plane, unless the point lies on the line.
    pub fn join_point(&self, p: &ProjPoint, cmp: &Comparator) -> Option<ProjHyperplane> {
        let m = self.dual_matrix();
        let v: Vec<Scalar> = (0..4).map(|i| dot(&m[i], &p.0)).collect();
        if v.iter().all(|c| cmp.scalar_is_zero_scaled(c, scale_of(&p.0) * self.scale())) {
            None
        } else {
            Some(ProjHyperplane(v))
        }
    }

    pub fn contains_point(&self, p: &ProjPoint, cmp: &Comparator) -> bool {
        self.join_point(p, cmp).is_none()
    }

    pub fn in_plane(&self, h: &ProjHyperplane, cmp: &Comparator) -> bool {
        self.meet_plane(h, cmp).is_none()
    }

    pub fn proj_eq(&self, other: &Line3D, cmp: &Comparator) -> bool {
        cmp.proj_eq_vec(&self.pl, &other.pl)
    }

    fn scale(&self) -> f64 {
        scale_of(&self.pl)
    }
}

/// True when the planes share a common line (stacked dual coordinates have
/// rank at most 2).
pub fn coaxial(planes: &[ProjHyperplane], cmp: &Comparator) -> Result<bool> {
    if planes.len() < 2 {
        return Err(Error::EmptyInput);
    }
    let rows: Vec<Vec<Scalar>> = planes.iter().map(|l| l.0.clone()).collect();
    Ok(mat_rank(&rows, cmp) <= 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: i64) -> Scalar {
        Scalar::int(v)
    }
    fn cmp() -> Comparator {
        Comparator::default()
    }

    #[test]
    fn meets_of_coordinate_lines() {
        let x = ProjHyperplane::new(vec![s(1), s(0), s(0)]).unwrap();
        let y = ProjHyperplane::new(vec![s(0), s(1), s(0)]).unwrap();
        let p = meet2(&x, &y, &cmp()).unwrap();
        assert!(p.proj_eq(&ProjPoint::new(vec![s(0), s(0), s(1)]).unwrap(), &cmp()));

        let xy = ProjHyperplane::new(vec![s(1), s(1), s(0)]).unwrap();
        let q = meet2(&x, &xy, &cmp()).unwrap();
        assert!(q.proj_eq(&p, &cmp()));

        // (x+z) ∧ (y+z) -> [1:1:-1], the 2x3 null-space solution.
        let a = ProjHyperplane::new(vec![s(1), s(0), s(1)]).unwrap();
        let b = ProjHyperplane::new(vec![s(0), s(1), s(1)]).unwrap();
        let r = meet2(&a, &b, &cmp()).unwrap();
        assert!(r.proj_eq(&ProjPoint::new(vec![s(1), s(1), s(-1)]).unwrap(), &cmp()));
        assert!(r.on(&a, &cmp()) && r.on(&b, &cmp()));
    }

    #[test]
    fn join_of_points_and_degenerate_input() {
        let p = ProjPoint::new(vec![s(1), s(0), s(0)]).unwrap();
        let q = ProjPoint::new(vec![s(0), s(1), s(0)]).unwrap();
        let l = join2(&p, &q, &cmp()).unwrap();
        assert!(l.proj_eq(&ProjHyperplane::new(vec![s(0), s(0), s(1)]).unwrap(), &cmp()));
        assert!(matches!(join2(&p, &p, &cmp()), Err(Error::CoincidentArguments)));
    }

    #[test]
    fn concurrency_checks() {
        let x = ProjHyperplane::new(vec![s(1), s(0), s(0)]).unwrap();
        let y = ProjHyperplane::new(vec![s(0), s(1), s(0)]).unwrap();
        let z = ProjHyperplane::new(vec![s(0), s(0), s(1)]).unwrap();
        let xy = ProjHyperplane::new(vec![s(1), s(1), s(0)]).unwrap();
        assert!(concurrent(&[x.clone(), y.clone(), xy], &cmp()).unwrap());
        assert!(!concurrent(&[x.clone(), y.clone(), z], &cmp()).unwrap());
        // {x, y, cx+y, x+cy} concurrent for any c.
        let c = Scalar::ratio(7, 3);
        let l1 = ProjHyperplane::new(vec![c.clone(), s(1), s(0)]).unwrap();
        let l2 = ProjHyperplane::new(vec![s(1), c, s(0)]).unwrap();
        assert!(concurrent(&[x, y, l1, l2], &cmp()).unwrap());
    }

    #[test]
    fn plucker_meet_of_coordinate_planes() {
        // plane w ∧ plane z is the x-y axis line; exterior-product oracle:
        // join of points e0, e1 gives p01 = 1, rest 0.
        let w = ProjHyperplane::new(vec![s(0), s(0), s(0), s(1)]).unwrap();
        let z = ProjHyperplane::new(vec![s(0), s(0), s(1), s(0)]).unwrap();
        let line = Line3D::meet(&w, &z, &cmp()).unwrap();
        let e0 = ProjPoint::new(vec![s(1), s(0), s(0), s(0)]).unwrap();
        let e1 = ProjPoint::new(vec![s(0), s(1), s(0), s(0)]).unwrap();
        let joined = Line3D::join(&e0, &e1, &cmp()).unwrap();
        assert!(line.proj_eq(&joined, &cmp()));
        assert!(line.plucker_residual().is_zero());
        assert!(line.contains_point(&e0, &cmp()));
        assert!(line.in_plane(&w, &cmp()));
    }

    #[test]
    fn plucker_incidences() {
        let p = ProjPoint::new(vec![s(1), s(2), s(-1), s(3)]).unwrap();
        let q = ProjPoint::new(vec![s(0), s(1), s(4), s(-2)]).unwrap();
        let line = Line3D::join(&p, &q, &cmp()).unwrap();
        assert!(line.plucker_residual().is_zero());
        assert!(line.contains_point(&p, &cmp()));
        assert!(line.contains_point(&q, &cmp()));
        let r = ProjPoint::new(vec![s(1), s(0), s(0), s(0)]).unwrap();
        assert!(!line.contains_point(&r, &cmp()));
        let plane = line.join_point(&r, &cmp()).unwrap();
        assert!(line.in_plane(&plane, &cmp()));
        assert!(p.on(&plane, &cmp()) && q.on(&plane, &cmp()) && r.on(&plane, &cmp()));
    }
}
