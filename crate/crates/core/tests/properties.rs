//! Property tests against independent oracles: brute-force Leibniz
//! determinants, minor-enumeration rank, and the algebraic invariants of the
//! polynomial and projective layers.

use penrose_core::corpus;
use penrose_core::engine::{IndexSet, PenroseParams};
use penrose_core::matrix::{det_poly, extract_double_line, mat_rank, poly_to_sym, sym_to_poly, Sign, SymMatrix};
use penrose_core::poly::HomogeneousPoly;
use penrose_core::projective::{join2, meet2, Line3D, ProjHyperplane, ProjPoint};
use penrose_core::scalar::{Comparator, Scalar};
use proptest::prelude::*;

fn cmp() -> Comparator {
    Comparator::default()
}

/// Brute-force Leibniz determinant: sum over permutations with sign.
fn leibniz_det(m: &[Vec<Scalar>]) -> Scalar {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut acc = Scalar::zero();
    permute(&mut perm, 0, &mut |p, sign| {
        let mut term = if sign { Scalar::int(-1) } else { Scalar::one() };
        for (i, &j) in p.iter().enumerate() {
            term = &term * &m[i][j];
        }
        acc = &acc + &term;
    });
    acc
}

fn permute(perm: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize], bool)) {
    let n = perm.len();
    if k == n {
        // Parity by inversion count.
        let mut inv = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                if perm[i] > perm[j] {
                    inv += 1;
                }
            }
        }
        f(perm, inv % 2 == 1);
        return;
    }
    for i in k..n {
        perm.swap(k, i);
        permute(perm, k + 1, f);
        perm.swap(k, i);
    }
}

/// Brute-force Leibniz determinant over polynomial entries.
fn leibniz_det_poly(m: &[Vec<HomogeneousPoly>]) -> HomogeneousPoly {
    let n = m.len();
    let vars = m
        .iter()
        .flatten()
        .find(|p| !p.is_zero())
        .map(|p| p.vars())
        .unwrap_or(3);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut acc = HomogeneousPoly::zero(vars);
    permute(&mut perm, 0, &mut |p, sign| {
        let mut term = HomogeneousPoly::constant(vars, if sign { Scalar::int(-1) } else { Scalar::one() });
        for (i, &j) in p.iter().enumerate() {
            term = term.mul(&m[i][j]).expect("degree bounded");
        }
        acc = acc.add(&term).expect("degree-homogeneous sum");
    });
    acc
}

/// Rank by enumerating all square minors.
fn minor_rank(m: &[Vec<Scalar>]) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    for k in (1..=rows.min(cols)).rev() {
        for rsel in subsets(rows, k) {
            for csel in subsets(cols, k) {
                let sub: Vec<Vec<Scalar>> =
                    rsel.iter().map(|&i| csel.iter().map(|&j| m[i][j].clone()).collect()).collect();
                if !leibniz_det(&sub).is_zero() {
                    return k;
                }
            }
        }
    }
    0
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[test]
fn poly_det_matches_leibniz_oracle() {
    let mut rng = corpus::rng(101);
    for _ in 0..40 {
        let params = corpus::random_general_params(&mut rng, 3, 3);
        let b = params.bordered_matrix();
        for (rows, cols) in [
            (vec![0usize, 1], vec![0usize, 2]),
            (vec![0, 1, 2], vec![0, 1, 3]),
            (vec![1, 2, 3], vec![0, 1, 2]),
            (vec![0, 1, 2, 3], vec![0, 1, 2, 3]),
        ] {
            let sel: Vec<Vec<HomogeneousPoly>> =
                rows.iter().map(|&i| cols.iter().map(|&j| b.at(i, j).clone()).collect()).collect();
            let got = det_poly(&sel).unwrap();
            let want = leibniz_det_poly(&sel);
            assert_eq!(got, want);
        }
    }
}

#[test]
fn rank_matches_minor_enumeration_oracle() {
    let mut rng = corpus::rng(202);
    for _ in 0..60 {
        // Mix of generic and engineered low-rank symmetric matrices.
        let m = match rand::Rng::gen_range(&mut rng, 0..3) {
            0 => SymMatrix::from_fn(3, |_, _| corpus::small_rational(&mut rng)),
            1 => {
                let v: Vec<Scalar> = (0..3).map(|_| corpus::small_rational(&mut rng)).collect();
                SymMatrix::outer(&v)
            }
            _ => {
                let u: Vec<Scalar> = (0..3).map(|_| corpus::small_rational(&mut rng)).collect();
                let w: Vec<Scalar> = (0..3).map(|_| corpus::small_rational(&mut rng)).collect();
                SymMatrix::outer(&u).add(&SymMatrix::outer(&w))
            }
        };
        let sym = SymMatrix::from_fn(3, |i, j| m.at(i, j).clone());
        assert_eq!(sym.rank(&cmp()), minor_rank(&sym.rows()));
    }
}

#[test]
fn adjugate_identity_on_random_matrices() {
    let mut rng = corpus::rng(303);
    for _ in 0..100 {
        for n in [3usize, 4] {
            let m = SymMatrix::from_fn(n, |_, _| corpus::small_rational(&mut rng));
            let adj = m.adjugate();
            let lambda = m.product_scalar_of_identity(&adj, &cmp()).expect("A·adj(A) = det(A)·I");
            assert!(lambda.eq_strict(&m.det()));
        }
    }
}

#[test]
fn extract_double_line_round_trip() {
    let mut rng = corpus::rng(404);
    for _ in 0..100 {
        let l = corpus::random_line(&mut rng, 3).normalize();
        let scale = corpus::nonzero_rational(&mut rng);
        let f = l.square().unwrap().scale(&(&scale * &scale));
        let (got, sign, s) = extract_double_line(&f, &cmp()).unwrap();
        assert_eq!(got, l);
        assert_eq!(sign, Sign::Plus);
        assert!(s.eq_strict(&(&scale * &scale)));
        let (got2, sign2, _) = extract_double_line(&f.neg(), &cmp()).unwrap();
        assert_eq!(got2, l);
        assert_eq!(sign2, Sign::Minus);
    }
}

#[test]
fn meet_is_incident_to_both_lines() {
    let mut rng = corpus::rng(505);
    let mut done = 0;
    while done < 200 {
        let a = ProjHyperplane::new((0..3).map(|_| corpus::small_rational(&mut rng)).collect());
        let b = ProjHyperplane::new((0..3).map(|_| corpus::small_rational(&mut rng)).collect());
        let (Ok(a), Ok(b)) = (a, b) else { continue };
        match meet2(&a, &b, &cmp()) {
            Ok(p) => {
                assert!(p.on(&a, &cmp()) && p.on(&b, &cmp()));
                done += 1;
            }
            Err(_) => continue,
        }
    }
}

#[test]
fn plucker_relation_exact_on_random_joins_and_meets() {
    let mut rng = corpus::rng(606);
    let mut done = 0;
    while done < 100 {
        let p = ProjPoint::new((0..4).map(|_| corpus::small_rational(&mut rng)).collect());
        let q = ProjPoint::new((0..4).map(|_| corpus::small_rational(&mut rng)).collect());
        let (Ok(p), Ok(q)) = (p, q) else { continue };
        if let Ok(line) = Line3D::join(&p, &q, &cmp()) {
            assert!(line.plucker_residual().is_zero());
            done += 1;
        }
        let u = ProjHyperplane::new((0..4).map(|_| corpus::small_rational(&mut rng)).collect());
        let v = ProjHyperplane::new((0..4).map(|_| corpus::small_rational(&mut rng)).collect());
        if let (Ok(u), Ok(v)) = (u, v) {
            if let Ok(line) = Line3D::meet(&u, &v, &cmp()) {
                assert!(line.plucker_residual().is_zero());
            }
        }
    }
}

#[test]
fn regular_pencil_has_at_most_three_degenerate_members() {
    let mut rng = corpus::rng(707);
    let mut done = 0;
    while done < 40 {
        let a = corpus::random_regular_conic(&mut rng, 3);
        let b = corpus::random_conic(&mut rng, 3);
        let ca = penrose_core::CompleteConic::from_primal(&poly_to_sym(&a).unwrap()).unwrap();
        let mb = poly_to_sym(&b).unwrap();
        let cb = penrose_core::CompleteConic { primal: mb, dual: SymMatrix::zero(3) };
        match penrose_core::pencil_degenerates(&ca, &cb, &cmp()) {
            Ok(degs) => {
                assert!(degs.len() <= 3, "a regular pencil admits at most 3 degenerate members");
                for d in degs {
                    if let Some(m) = d.member {
                        assert!(cmp().scalar_is_zero(&m.det()));
                    }
                }
                done += 1;
            }
            Err(_) => continue,
        }
    }
}

#[test]
fn edge_identity_holds_on_quadric_lattices_too() {
    let mut rng = corpus::rng(808);
    for _ in 0..25 {
        let params = corpus::random_cube_params(&mut rng, 4);
        // Construction verifies all edge identities exactly.
        penrose_core::build_lattice(&params, &cmp()).unwrap();
    }
}

#[test]
fn desnanot_jacobi_on_bordered_matrix() {
    let mut rng = corpus::rng(909);
    let mut checked = 0;
    'outer: for _ in 0..10 {
        for n in [3usize, 4] {
            let params = corpus::random_general_params(&mut rng, 3, n);
            // Random (I_r, I_c, j, k) choices with the identity checked by
            // direct polynomial expansion.
            for _ in 0..5 {
                use rand::seq::SliceRandom;
                use rand::Rng;
                let all: Vec<usize> = (0..=n).collect();
                let size = rng.gen_range(0..=(n - 1));
                let mut pool = all.clone();
                pool.shuffle(&mut rng);
                let ir: Vec<usize> = {
                    let mut v = pool[..size].to_vec();
                    v.sort_unstable();
                    v
                };
                pool.shuffle(&mut rng);
                let ic: Vec<usize> = {
                    let mut v = pool[..size].to_vec();
                    v.sort_unstable();
                    v
                };
                let rest: Vec<usize> = all.iter().copied().filter(|x| !ir.contains(x) && !ic.contains(x)).collect();
                if rest.len() < 2 {
                    continue;
                }
                let (j, k) = (rest[0], rest[1]);
                let sub = |mut r: Vec<usize>, mut c: Vec<usize>| {
                    r.sort_unstable();
                    c.sort_unstable();
                    params.subdet(&r, &c).unwrap()
                };
                let with = |base: &[usize], extra: &[usize]| {
                    let mut v = base.to_vec();
                    v.extend_from_slice(extra);
                    v
                };
                let lhs = sub(with(&ir, &[k]), with(&ic, &[k]))
                    .mul(&sub(with(&ir, &[j]), with(&ic, &[j])))
                    .unwrap()
                    .sub(&sub(ir.clone(), ic.clone()).mul(&sub(with(&ir, &[j, k]), with(&ic, &[j, k]))).unwrap())
                    .unwrap();
                let rhs = sub(with(&ir, &[j]), with(&ic, &[k]))
                    .mul(&sub(with(&ir, &[k]), with(&ic, &[j])))
                    .unwrap();
                let residual = lhs.sub(&rhs).unwrap();
                assert!(residual.is_zero(), "identity fails for I_r={ir:?} I_c={ic:?} j={j} k={k}");
                checked += 1;
                if checked >= 50 {
                    break 'outer;
                }
            }
        }
    }
    assert!(checked >= 50);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn poly_mul_distributes_over_add(seed in any::<u64>()) {
        let mut rng = corpus::rng(seed);
        let f = corpus::random_conic(&mut rng, 3);
        let g = corpus::random_conic(&mut rng, 3);
        let h = corpus::random_conic(&mut rng, 3);
        let lhs = f.mul(&g.add(&h).unwrap()).unwrap();
        let rhs = f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn poly_sym_round_trip_identity(seed in any::<u64>()) {
        let mut rng = corpus::rng(seed);
        let f = corpus::random_conic(&mut rng, 4);
        let m = poly_to_sym(&f).unwrap();
        prop_assert_eq!(sym_to_poly(&m), f);
    }

    #[test]
    fn double_contact_member_is_rank_one(seed in any::<u64>()) {
        let mut rng = corpus::rng(seed);
        let a = corpus::random_regular_conic(&mut rng, 3);
        let chord = corpus::random_line(&mut rng, 3);
        let scale = corpus::nonzero_rational(&mut rng);
        let ma = poly_to_sym(&a).unwrap();
        let mb = ma.add(&poly_to_sym(&chord.square().unwrap()).unwrap().scale(&scale));
        let ca = penrose_core::CompleteConic::from_primal(&ma).unwrap();
        if let Ok(cb) = penrose_core::CompleteConic::from_primal(&mb) {
            let contact = penrose_core::double_contact(&ca, &cb, &cmp()).unwrap();
            match contact {
                penrose_core::Contact::Found { chord: got, alpha, beta, .. } => {
                    let member = ma.scale(&alpha).add(&mb.scale(&beta));
                    prop_assert_eq!(member.rank(&cmp()), 1);
                    prop_assert!(got.proj_eq(&chord, &cmp()));
                }
                penrose_core::Contact::None => prop_assert!(false, "contact must exist"),
            }
        }
    }

    #[test]
    fn chords_of_standard_cube_match_agreed_forms(seed in any::<u64>()) {
        let mut rng = corpus::rng(seed);
        let params = corpus::random_cube_params(&mut rng, 3);
        // chord({1}, 2) = a_12 p1 - d_1 p2 with d = -1.
        let c = params.chord(IndexSet::from_indices(&[1]), 2).unwrap();
        let expect = params.lines[0]
            .scale(&params.a[&(1, 2)])
            .add(&params.lines[1])
            .unwrap();
        prop_assert_eq!(c, expect);
    }
}

#[test]
fn lattice_chords_are_projective_only() {
    // The engine leaves chord signs to the subdeterminant convention; both
    // sign choices square to the same edge identity.
    let mut rng = corpus::rng(111);
    let params = corpus::random_cube_params(&mut rng, 3);
    let lat = penrose_core::build_lattice(&params, &cmp()).unwrap();
    for ((om, k), chord) in &lat.chords {
        let direct = lat.params.chord(*om, *k).unwrap();
        assert!(chord.proj_eq(&direct, &cmp()));
    }
}

#[test]
fn no_ring_contact_triangles_on_random_corpus() {
    // Triples in one contact pencil share the plane; a searcher over random
    // mutually-contacting triples with a regular member never finds distinct
    // planes.
    let mut rng = corpus::rng(222);
    let mut confirmed = 0;
    while confirmed < 30 {
        let a = corpus::random_regular_conic(&mut rng, 4);
        let plane = corpus::random_line(&mut rng, 4);
        let (s, t) = (corpus::nonzero_rational(&mut rng), corpus::nonzero_rational(&mut rng));
        let ma = poly_to_sym(&a).unwrap();
        let mb = ma.add(&poly_to_sym(&plane.square().unwrap()).unwrap().scale(&s));
        let mc = ma.add(&poly_to_sym(&plane.square().unwrap()).unwrap().scale(&t));
        let ca = penrose_core::CompleteConic::from_primal(&ma).unwrap();
        let (Ok(cb), Ok(cc)) = (penrose_core::CompleteConic::from_primal(&mb), penrose_core::CompleteConic::from_primal(&mc)) else {
            continue;
        };
        // All three pairwise contacts exist...
        let r_ab = penrose_core::ring_contact(&ca, &cb, &cmp()).unwrap();
        let r_ac = penrose_core::ring_contact(&ca, &cc, &cmp()).unwrap();
        let r_bc = match penrose_core::ring_contact(&cb, &cc, &cmp()) {
            Ok(r) => r,
            Err(_) => continue,
        };
        if !(r_ab.contact.found() && r_ac.contact.found() && r_bc.contact.found()) {
            continue;
        }
        // ...and share one ring plane.
        let p1 = r_ab.ring_plane.unwrap();
        let p2 = r_ac.ring_plane.unwrap();
        let p3 = r_bc.ring_plane.unwrap();
        assert!(p1.proj_eq(&p2, &cmp()) && p2.proj_eq(&p3, &cmp()));
        confirmed += 1;
    }

    // Direct search: perturbed third members that still touch both others
    // without sharing the plane do not exist among random draws.
    let mut found_counterexample = false;
    for _ in 0..200 {
        let a = corpus::random_regular_conic(&mut rng, 4);
        let p = corpus::random_line(&mut rng, 4);
        let q = corpus::random_line(&mut rng, 4);
        if p.proj_eq(&q, &cmp()) {
            continue;
        }
        let ma = poly_to_sym(&a).unwrap();
        let mb = ma.add(&poly_to_sym(&p.square().unwrap()).unwrap());
        let mc = ma.add(&poly_to_sym(&q.square().unwrap()).unwrap());
        let (Ok(cb), Ok(cc)) = (penrose_core::CompleteConic::from_primal(&mb), penrose_core::CompleteConic::from_primal(&mc)) else {
            continue;
        };
        // b and c touch a along different planes; were they also in mutual
        // ring contact, the triangle lemma would be violated.
        if let Ok(r) = penrose_core::ring_contact(&cb, &cc, &cmp()) {
            if r.contact.found() {
                found_counterexample = true;
            }
        }
    }
    assert!(!found_counterexample, "mutually ring-contacting triples must share a plane");
}

#[test]
fn polarity_restriction_on_double_contact_pairs() {
    // For A, B in double contact with chord l, the polar images of points on
    // l agree exactly.
    let mut rng = corpus::rng(333);
    let mut done = 0;
    while done < 20 {
        let a = corpus::random_regular_conic(&mut rng, 3);
        let chord = corpus::random_line(&mut rng, 3);
        let ma = poly_to_sym(&a).unwrap();
        let mb = ma.add(&poly_to_sym(&chord.square().unwrap()).unwrap().scale(&corpus::nonzero_rational(&mut rng)));
        let ca = penrose_core::CompleteConic::from_primal(&ma).unwrap();
        let Ok(cb) = penrose_core::CompleteConic::from_primal(&mb) else { continue };
        let basis = penrose_core::matrix::nullspace(&[chord.linear_coeffs()]);
        for _ in 0..20 {
            let (s, t) = (corpus::small_rational(&mut rng), corpus::nonzero_rational(&mut rng));
            let coords: Vec<Scalar> = (0..3).map(|i| &(&s * &basis[0][i]) + &(&t * &basis[1][i])).collect();
            if coords.iter().all(Scalar::is_zero) {
                continue;
            }
            let p = ProjPoint::new(coords).unwrap();
            let la = penrose_core::polar(&ca, &p, &cmp()).unwrap();
            let lb = penrose_core::polar(&cb, &p, &cmp()).unwrap();
            assert!(la.proj_eq(&lb, &cmp()));
        }
        done += 1;
    }
}

#[test]
fn join_meet_duality_on_cube_faces() {
    // Face points exist and are incident to all four chords.
    let mut rng = corpus::rng(444);
    let params = corpus::random_cube_params(&mut rng, 3);
    let lat = penrose_core::build_lattice(&params, &cmp()).unwrap();
    for (base, j, k) in lat.faces() {
        let report = lat.face_point(base, j, k, &cmp()).unwrap();
        let pt = report.point.expect("concurrent face");
        for chord in &report.chords {
            let line = ProjHyperplane::new(chord.linear_coeffs()).unwrap();
            assert!(pt.on(&line, &cmp()));
        }
    }
}

#[test]
fn standard_cube_rejects_mismatched_params() {
    let mut rng = corpus::rng(555);
    let s0 = corpus::random_regular_conic(&mut rng, 3);
    let p = corpus::random_line(&mut rng, 3);
    // Quadric-space line with conic-space base must be rejected.
    let bad = corpus::random_line(&mut rng, 4);
    assert!(PenroseParams::standard_cube(s0, p, bad, corpus::random_line(&mut rng, 3), Scalar::zero(), Scalar::zero(), Scalar::zero()).is_err());
}
