//! Small dense symmetric matrices over the scalar field, and matrices with
//! polynomial entries for the bordered-determinant machinery.

use crate::error::{Error, Result};
use crate::poly::{HomogeneousPoly, Monomial};
use crate::scalar::{normalize_primitive, Comparator, Mode, Scalar};

/// Symmetric matrix of order 3 or 4 (up to 5 appears only with polynomial
/// entries). Only the upper triangle is stored.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    n: usize,
    upper: Vec<Scalar>,
}

fn upper_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    // Row-major upper triangle offset.
    i * n - i * (i + 1) / 2 + j
}

impl SymMatrix {
    pub fn zero(n: usize) -> Self {
        SymMatrix { n, upper: vec![Scalar::zero(); n * (n + 1) / 2] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SymMatrix::zero(n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn diag(entries: &[Scalar]) -> Self {
        let mut m = SymMatrix::zero(entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut m = SymMatrix::zero(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds from full rows, which must be symmetric as given.
    pub fn from_rows(rows: &[Vec<Scalar>]) -> Result<Self> {
        let n = rows.len();
        for r in rows {
            if r.len() != n {
                return Err(Error::SizeMismatch);
            }
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, entry) in row.iter().enumerate().skip(i + 1) {
                if !entry.eq_strict(&rows[j][i]) {
                    return Err(Error::InvalidParameter("matrix is not symmetric".into()));
                }
            }
        }
        Ok(SymMatrix::from_fn(n, |i, j| rows[i][j].clone()))
    }

    /// Rank-1 matrix v v^T.
    pub fn outer(v: &[Scalar]) -> Self {
        SymMatrix::from_fn(v.len(), |i, j| &v[i] * &v[j])
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.upper[upper_index(self.n, i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.upper[upper_index(self.n, i, j)] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.upper.iter().all(|s| s.is_zero())
    }

    pub fn mode(&self) -> Mode {
        self.upper
            .iter()
            .find(|s| !matches!(s, Scalar::Exact(r) if num::Zero::is_zero(r)))
            .map(|s| s.mode())
            .unwrap_or(Mode::Exact)
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, other.n);
        SymMatrix { n: self.n, upper: self.upper.iter().zip(&other.upper).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, other.n);
        SymMatrix { n: self.n, upper: self.upper.iter().zip(&other.upper).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> SymMatrix {
        SymMatrix { n: self.n, upper: self.upper.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, s: &Scalar) -> SymMatrix {
        SymMatrix { n: self.n, upper: self.upper.iter().map(|a| a * s).collect() }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                v.iter()
                    .enumerate()
                    .fold(Scalar::zero(), |acc, (j, vj)| &acc + &(self.at(i, j) * vj))
            })
            .collect()
    }

    /// Quadratic form value v^T M v.
    pub fn quad_form(&self, v: &[Scalar]) -> Scalar {
        let mv = self.apply(v);
        v.iter().zip(&mv).fold(Scalar::zero(), |acc, (a, b)| &acc + &(a * b))
    }

    pub fn det(&self) -> Scalar {
        det_dense(&self.to_dense())
    }

    /// Matrix of cofactors; for a symmetric input this equals the adjugate
    /// and satisfies `A * adjugate(A) = det(A) * I`.
    pub fn adjugate(&self) -> SymMatrix {
        let dense = self.to_dense();
        SymMatrix::from_fn(self.n, |i, j| {
            // Cofactor C_ji for the adjugate, but symmetry makes C_ij = C_ji.
            let minor = minor_dense(&dense, j, i);
            let d = det_dense(&minor);
            if (i + j) % 2 == 0 {
                d
            } else {
                d.mul_int(-1)
            }
        })
    }

    /// Rank by fraction-free elimination in exact mode; in float mode pivots
    /// are accepted above `tol * (largest absolute entry of the reduced matrix)`.
    pub fn rank(&self, cmp: &Comparator) -> usize {
        mat_rank(&self.rows(), cmp)
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.at(i, j).clone()).collect()).collect()
    }

    fn to_dense(&self) -> Vec<Vec<Scalar>> {
        self.rows()
    }

    /// Returns lambda when `self * other == lambda * I`, which is the
    /// complete-conic pairing invariant.
    pub fn product_scalar_of_identity(&self, other: &SymMatrix, cmp: &Comparator) -> Option<Scalar> {
        assert_eq!(self.n, other.n);
        let mut lambda: Option<Scalar> = None;
        let scale = self
            .upper
            .iter()
            .chain(other.upper.iter())
            .map(|s| s.to_f64().abs())
            .fold(0.0f64, f64::max);
        for i in 0..self.n {
            for j in 0..self.n {
                let mut acc = Scalar::zero();
                for k in 0..self.n {
                    acc = &acc + &(self.at(i, k) * other.at(k, j));
                }
                if i == j {
                    match &lambda {
                        None => lambda = Some(acc),
                        Some(l) => {
                            if !cmp.scalar_is_zero_scaled(&(&acc - l), scale * scale) {
                                return None;
                            }
                        }
                    }
                } else if !cmp.scalar_is_zero_scaled(&acc, scale * scale) {
                    return None;
                }
            }
        }
        lambda
    }

    /// Restriction B^T M B for a (possibly rectangular) basis matrix given
    /// as columns; used to slice quadrics with plane bases.
    pub fn restrict(&self, basis_cols: &[Vec<Scalar>]) -> SymMatrix {
        let k = basis_cols.len();
        SymMatrix::from_fn(k, |i, j| {
            let mbj = self.apply(&basis_cols[j]);
            basis_cols[i].iter().zip(&mbj).fold(Scalar::zero(), |acc, (a, b)| &acc + &(a * b))
        })
    }

    /// Congruence transform T^T M T for a square matrix T given as columns.
    pub fn congruence(&self, cols: &[Vec<Scalar>]) -> SymMatrix {
        self.restrict(cols)
    }

    pub fn proj_eq(&self, other: &SymMatrix, cmp: &Comparator) -> bool {
        if self.n != other.n {
            return false;
        }
        cmp.proj_eq_vec(&self.upper, &other.upper)
    }

    pub fn normalize(&self) -> SymMatrix {
        SymMatrix { n: self.n, upper: normalize_primitive(&self.upper) }
    }
}

/// Determinant of a dense square matrix by cofactor expansion along row 0;
/// orders stay at 5 or below so asymptotics are irrelevant.
fn det_dense(m: &[Vec<Scalar>]) -> Scalar {
    let n = m.len();
    match n {
        0 => Scalar::one(),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        _ => {
            let mut acc = Scalar::zero();
            for (j, entry) in m[0].iter().enumerate() {
                if entry.is_zero() {
                    continue;
                }
                let minor = minor_dense(m, 0, j);
                let term = entry * &det_dense(&minor);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

fn minor_dense(m: &[Vec<Scalar>], row: usize, col: usize) -> Vec<Vec<Scalar>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| r.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, v)| v.clone()).collect())
        .collect()
}

/// Rank of a rectangular matrix by Gaussian elimination.
///
/// Exact rows eliminate exactly; float rows use the scale-aware pivot
/// threshold from the comparator.
#[allow(clippy::needless_range_loop)]
pub fn mat_rank(rows: &[Vec<Scalar>], cmp: &Comparator) -> usize {
    let mut m: Vec<Vec<Scalar>> = rows.to_vec();
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..ncols {
        // Scale for float pivot acceptance: largest entry in the remaining block.
        let scale = m[row..]
            .iter()
            .flat_map(|r| r.iter())
            .map(|s| s.to_f64().abs())
            .fold(0.0f64, f64::max);
        let pivot = (row..nrows).find(|&r| !cmp.scalar_is_zero_scaled(&m[r][col], scale));
        let Some(p) = pivot else { continue };
        m.swap(row, p);
        let pv = m[row][col].clone();
        for r in (row + 1)..nrows {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &pv;
            for c in col..ncols {
                let val = &m[r][c] - &(&factor * &m[row][c]);
                m[r][c] = val;
            }
        }
        rank += 1;
        row += 1;
        if row == nrows {
            break;
        }
    }
    rank
}

/// Solves `A x = b` exactly; `Ok(None)` means inconsistent, over-determined
/// systems are checked for consistency.
#[allow(clippy::needless_range_loop)]
pub fn solve_linear(a: &[Vec<Scalar>], b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    let nrows = a.len();
    if nrows == 0 || nrows != b.len() {
        return Err(Error::SizeMismatch);
    }
    let ncols = a[0].len();
    let mut m: Vec<Vec<Scalar>> = a
        .iter()
        .zip(b)
        .map(|(r, rhs)| {
            let mut row = r.clone();
            row.push(rhs.clone());
            row
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..nrows).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let pv = m[row][col].clone();
        for r in 0..nrows {
            if r == row || m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &pv;
            for c in col..=ncols {
                let val = &m[r][c] - &(&factor * &m[row][c]);
                m[r][c] = val;
            }
        }
        pivots.push((row, col));
        row += 1;
        if row == nrows {
            break;
        }
    }
    // Inconsistency: zero row with nonzero rhs.
    for r in row..nrows {
        if m[r][..ncols].iter().all(|s| s.is_zero()) && !m[r][ncols].is_zero() {
            return Ok(None);
        }
    }
    let mut x = vec![Scalar::zero(); ncols];
    for (r, c) in pivots {
        x[c] = &m[r][ncols] / &m[r][c];
    }
    Ok(Some(x))
}

/// A basis of the null space of the row matrix, exact arithmetic.
#[allow(clippy::needless_range_loop)]
pub fn nullspace(rows: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let nrows = rows.len();
    if nrows == 0 {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let mut m: Vec<Vec<Scalar>> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..nrows).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let pv = m[row][col].clone();
        for r in 0..nrows {
            if r == row || m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &pv;
            for c in 0..ncols {
                let val = &m[r][c] - &(&factor * &m[row][c]);
                m[r][c] = val;
            }
        }
        pivots.push(col);
        row += 1;
        if row == nrows {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mode = rows
        .iter()
        .flatten()
        .find(|s| !matches!(s, Scalar::Exact(r) if num::Zero::is_zero(r)))
        .map(Scalar::mode)
        .unwrap_or(crate::scalar::Mode::Exact);
    let mut basis = Vec::new();
    for &f in &free {
        let mut v = vec![Scalar::zero(); ncols];
        v[f] = Scalar::of_mode(mode, 1);
        for (r, &pc) in pivots.iter().enumerate() {
            // m[r][pc] * v[pc] + m[r][f] = 0
            v[pc] = &(-&m[r][f]) / &m[r][pc];
        }
        basis.push(v);
    }
    basis
}

/// Conversion between degree-2 polynomials and symmetric matrices with
/// x^T A x = f: off-diagonal entries are half the mixed coefficients.
pub fn poly_to_sym(f: &HomogeneousPoly) -> Result<SymMatrix> {
    if !f.is_zero() && f.degree() != 2 {
        return Err(Error::DegreeMismatch(f.degree(), 2));
    }
    let n = f.vars();
    Ok(SymMatrix::from_fn(n, |i, j| {
        let c = f.coeff2(i, j);
        if i == j {
            c
        } else {
            c.div_int(2)
        }
    }))
}

pub fn sym_to_poly(a: &SymMatrix) -> HomogeneousPoly {
    let n = a.order();
    let mut terms: Vec<(Monomial, Scalar)> = Vec::new();
    for i in 0..n {
        for j in i..n {
            let m = Monomial::var(i).mul(&Monomial::var(j));
            let c = if i == j { a.at(i, j).clone() } else { a.at(i, j).mul_int(2) };
            terms.push((m, c));
        }
    }
    HomogeneousPoly::from_terms(n, 2, terms).expect("degree-2 terms")
}

/// The sign of the double line hidden in a rank-1 quadratic form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Inverts a squared line: for `f = ±(scale)·ℓ²` with rank-1 matrix, returns
/// the normalized line, the sign, and the positive scale such that
/// `f = sign · scale · ℓ²` exactly.
pub fn extract_double_line(f: &HomogeneousPoly, cmp: &Comparator) -> Result<(HomogeneousPoly, Sign, Scalar)> {
    let a = poly_to_sym(f)?;
    let r = a.rank(cmp);
    if r != 1 {
        return Err(Error::NotRankOne(r));
    }
    let n = a.order();
    // A rank-1 symmetric matrix c·vv^T has some nonzero diagonal entry c·v_i².
    let i = (0..n)
        .max_by(|&p, &q| {
            a.at(p, p)
                .to_f64()
                .abs()
                .partial_cmp(&a.at(q, q).to_f64().abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .expect("nonempty");
    if cmp.scalar_is_zero(a.at(i, i)) {
        return Err(Error::NotRankOne(r));
    }
    let sign = if a.at(i, i).is_negative() { Sign::Minus } else { Sign::Plus };
    let row: Vec<Scalar> = (0..n).map(|j| a.at(i, j).clone()).collect();
    let line = HomogeneousPoly::linear(&normalize_primitive(&row));
    // Recover the positive scale: f = sign * scale * line^2.
    let line_sq = line.square().expect("degree 2");
    let (mref, cref) = line_sq.terms().next().expect("nonzero line");
    let mut scale = &f.coeff(mref) / cref;
    if sign == Sign::Minus {
        scale = -scale;
    }
    // Exactness check in exact mode: residual must vanish identically.
    let model = match sign {
        Sign::Plus => line_sq.scale(&scale),
        Sign::Minus => line_sq.scale(&scale).neg(),
    };
    let residual = f.sub(&model)?;
    if !residual.is_zero_within(cmp) {
        return Err(Error::NotRankOne(r));
    }
    Ok((line, sign, scale))
}

/// Matrix of homogeneous-polynomial entries, order at most 5: entry (0,0)
/// has degree 2, the rest of row/column 0 degree 1, all others degree 0.
#[derive(Clone, Debug)]
pub struct PolyMatrix {
    n: usize,
    entries: Vec<HomogeneousPoly>,
}

impl PolyMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> HomogeneousPoly) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        PolyMatrix { n, entries }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> &HomogeneousPoly {
        &self.entries[i * self.n + j]
    }

    /// Determinant of the submatrix selected by `rows` x `cols`, both in
    /// ascending order. Expansion runs along the first selected row, which
    /// holds the polynomial entries whenever row 0 is selected.
    pub fn subdet(&self, rows: &[usize], cols: &[usize]) -> Result<HomogeneousPoly> {
        if rows.len() != cols.len() {
            return Err(Error::SizeMismatch);
        }
        let sel: Vec<Vec<HomogeneousPoly>> =
            rows.iter().map(|&i| cols.iter().map(|&j| self.at(i, j).clone()).collect()).collect();
        det_poly(&sel)
    }

    pub fn det(&self) -> Result<HomogeneousPoly> {
        let all: Vec<usize> = (0..self.n).collect();
        self.subdet(&all, &all)
    }
}

/// Determinant of a dense matrix of homogeneous polynomials by cofactor
/// expansion along row 0.
pub fn det_poly(m: &[Vec<HomogeneousPoly>]) -> Result<HomogeneousPoly> {
    let n = m.len();
    match n {
        0 => Ok(HomogeneousPoly::constant(3, Scalar::one())),
        1 => Ok(m[0][0].clone()),
        _ => {
            let mut acc: Option<HomogeneousPoly> = None;
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<HomogeneousPoly>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect())
                    .collect();
                let mut term = m[0][j].mul(&det_poly(&minor)?)?;
                if j % 2 == 1 {
                    term = term.neg();
                }
                acc = Some(match acc {
                    None => term,
                    Some(a) => a.add(&term)?,
                });
            }
            Ok(acc.unwrap_or_else(|| HomogeneousPoly::zero(m[0][0].vars())))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::line_i64;

    fn cmp() -> Comparator {
        Comparator::default()
    }

    #[test]
    fn det_and_adjugate_small() {
        let d = SymMatrix::diag(&[Scalar::int(1), Scalar::int(1), Scalar::int(-1)]);
        assert!(d.det().eq_strict(&Scalar::int(-1)));
        let adj = d.adjugate();
        // adjugate(diag(1,1,-1)) = diag(-1,-1,1): verified by the 2x2 cofactor
        // oracle, e.g. cofactor at (0,0) is det(diag(1,-1)) = -1.
        assert!(adj.at(0, 0).eq_strict(&Scalar::int(-1)));
        assert!(adj.at(1, 1).eq_strict(&Scalar::int(-1)));
        assert!(adj.at(2, 2).eq_strict(&Scalar::int(1)));
        assert!(SymMatrix::identity(3).adjugate().proj_eq(&SymMatrix::identity(3), &cmp()));
    }

    #[test]
    fn adjugate_of_rank_one_vanishes() {
        let v = [Scalar::int(1), Scalar::int(2), Scalar::int(-1)];
        let m = SymMatrix::outer(&v);
        assert!(m.adjugate().is_zero());
        assert_eq!(m.rank(&cmp()), 1);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(SymMatrix::diag(&[Scalar::int(1), Scalar::int(1), Scalar::int(-1)]).rank(&cmp()), 3);
        assert_eq!(SymMatrix::zero(3).rank(&cmp()), 0);
    }

    #[test]
    fn poly_sym_round_trip() {
        let f = line_i64(1, 0, 0)
            .square()
            .unwrap()
            .add(&line_i64(1, 2, 0).mul(&line_i64(1, 0, -1)).unwrap())
            .unwrap();
        let m = poly_to_sym(&f).unwrap();
        assert_eq!(sym_to_poly(&m), f);
        // x^2+y^2-z^2 <-> diag(1,1,-1)
        let circle = line_i64(1, 0, 0).square().unwrap().add(&line_i64(0, 1, 0).square().unwrap()).unwrap().sub(&line_i64(0, 0, 1).square().unwrap()).unwrap();
        let mc = poly_to_sym(&circle).unwrap();
        assert!(mc.proj_eq(&SymMatrix::diag(&[Scalar::int(1), Scalar::int(1), Scalar::int(-1)]), &cmp()));
        // 2xy maps to off-diagonal ones.
        let f2 = line_i64(1, 0, 0).mul(&line_i64(0, 2, 0)).unwrap();
        let m2 = poly_to_sym(&f2).unwrap();
        assert!(m2.at(0, 1).eq_strict(&Scalar::int(1)));
        assert!(m2.at(0, 0).is_zero());
    }

    #[test]
    fn extract_double_line_cases() {
        let x = line_i64(1, 0, 0);
        let (l, s, scale) = extract_double_line(&x.square().unwrap(), &cmp()).unwrap();
        assert_eq!(l, x);
        assert_eq!(s, Sign::Plus);
        assert!(scale.eq_strict(&Scalar::one()));

        let m = line_i64(1, 2, -1);
        let (l, s, _) = extract_double_line(&m.square().unwrap().neg(), &cmp()).unwrap();
        assert_eq!(l, m);
        assert_eq!(s, Sign::Minus);

        let rank2 = line_i64(1, 0, 0).square().unwrap().add(&line_i64(0, 1, 0).square().unwrap()).unwrap();
        assert!(matches!(extract_double_line(&rank2, &cmp()), Err(Error::NotRankOne(2))));
    }

    #[test]
    fn solve_and_nullspace() {
        let a = vec![
            vec![Scalar::int(1), Scalar::int(1)],
            vec![Scalar::int(1), Scalar::int(-1)],
            vec![Scalar::int(2), Scalar::int(0)],
        ];
        let b = vec![Scalar::int(3), Scalar::int(1), Scalar::int(4)];
        let x = solve_linear(&a, &b).unwrap().unwrap();
        assert!(x[0].eq_strict(&Scalar::int(2)));
        assert!(x[1].eq_strict(&Scalar::int(1)));
        let b_bad = vec![Scalar::int(3), Scalar::int(1), Scalar::int(5)];
        assert!(solve_linear(&a, &b_bad).unwrap().is_none());

        let rows = vec![vec![Scalar::int(1), Scalar::int(2), Scalar::int(3)]];
        let ns = nullspace(&rows);
        assert_eq!(ns.len(), 2);
        for v in ns {
            let dot = v.iter().zip(&rows[0]).fold(Scalar::zero(), |acc, (a, b)| &acc + &(a * b));
            assert!(dot.is_zero());
        }
    }
}
