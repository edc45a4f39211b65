//! The acceptance suite as a library: every check runs a seeded corpus at
//! the stated size and zero tolerance (exact arithmetic) unless noted, and
//! reports one pass/fail record. The integration test target and the CLI
//! `selftest` command both run these.

use std::collections::BTreeMap;

use crate::completion::{complete, complete_quadric_via_basis, seven_from_lattice, CompletionCase, SolveMode};
use crate::conic::{double_contact, CompleteConic, Contact};
use crate::corpus;
use crate::engine::{build_lattice, classify_degeneracies, IndexSet, PenroseParams};
use crate::error::Result;
use crate::lift3d::{extrude_seven, face_structure, slice_cube, ExtrusionFrame};
use crate::matrix::poly_to_sym;
use crate::poly::{line_i64, HomogeneousPoly};
use crate::projective::ProjPoint;
use crate::scalar::{Comparator, Scalar};
use crate::scenarios;

/// One acceptance record.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub anchor: String,
    pub passed: bool,
    pub details: String,
}

impl CheckResult {
    fn ok(name: &str, anchor: &str, details: String) -> Self {
        CheckResult { name: name.into(), anchor: anchor.into(), passed: true, details }
    }

    fn fail(name: &str, anchor: &str, details: String) -> Self {
        CheckResult { name: name.into(), anchor: anchor.into(), passed: false, details }
    }
}

fn cmp() -> Comparator {
    Comparator::default()
}

fn run(name: &str, anchor: &str, body: impl FnOnce() -> Result<String>) -> CheckResult {
    match body() {
        Ok(details) => CheckResult::ok(name, anchor, details),
        Err(e) => CheckResult::fail(name, anchor, format!("{e}")),
    }
}

fn err(msg: String) -> crate::error::Error {
    crate::error::Error::InvalidParameter(msg)
}

/// Criterion 1: 200 seeded random rational parameter sets (n = 3 conics);
/// every edge identity holds exactly. Edge identities are re-verified by
/// construction inside `build_lattice`, so a successful build is the check.
pub fn check_edge_identities(seed: u64) -> CheckResult {
    run("edge-identity suite", "double-contact edge identity", || {
        let mut rng = corpus::rng(seed);
        for i in 0..200 {
            let params = corpus::random_cube_params(&mut rng, 3);
            build_lattice(&params, &cmp()).map_err(|e| err(format!("sample {i}: {e}")))?;
        }
        Ok("200 lattices, 12 exact edge identities each".into())
    })
}

/// Criterion 2: under d = -1 the engine vertices match the expanded cube
/// formulas up to sign; the base-weight of the eighth vertex is
/// ±(1 − a² − b² − 2abc − c²). 100 samples.
pub fn check_formula_concordance(seed: u64) -> CheckResult {
    run("cube-formula concordance", "eighth-conic formula", || {
        let mut rng = corpus::rng(seed);
        for i in 0..100 {
            let params = corpus::random_cube_params(&mut rng, 3);
            let a = params.a[&(2, 3)].clone();
            let b = params.a[&(1, 3)].clone();
            let c = params.a[&(1, 2)].clone();
            let p = &params.lines[0];
            let q = &params.lines[1];
            let r = &params.lines[2];
            // First layer: S_{i} = -(S0 + p_i²).
            for (k, line) in [(1usize, p), (2, q), (3, r)] {
                let got = params.vertex(IndexSet::from_indices(&[k]));
                let expect = params.s0.add(&line.square()?)?.neg();
                if got != expect {
                    return Err(err(format!("sample {i}: first-layer vertex {k} mismatch")));
                }
            }
            // Second layer: S_{jk} = (1-a²)S0 + q² + 2a·qr + r² pattern.
            let s23 = params.vertex(IndexSet::from_indices(&[2, 3]));
            let expect = expand_second_layer(&params.s0, q, r, &a)?;
            if s23 != expect {
                return Err(err(format!("sample {i}: second-layer vertex {{2,3}} mismatch")));
            }
            // Eighth vertex: the full determinant equals minus the formula.
            let s123 = params.vertex(IndexSet::from_indices(&[1, 2, 3]));
            let t0 = expand_eighth(&params.s0, p, q, r, &a, &b, &c)?;
            if s123 != t0.neg() {
                return Err(err(format!("sample {i}: eighth-vertex mismatch")));
            }
            // Base weight: coefficient structure via the scalar block det.
            let f123 = params.f_scalar(IndexSet::from_indices(&[1, 2, 3]));
            let one = Scalar::one();
            let w = &(&(&one - &(&a * &a)) - &(&b * &b)) - &(&(&Scalar::int(2) * &(&(&a * &b) * &c)) + &(&c * &c));
            if !(&f123 + &w).is_zero() {
                return Err(err(format!("sample {i}: base-weight mismatch")));
            }
        }
        Ok("100 samples, all formulas match up to the documented sign".into())
    })
}

fn expand_second_layer(
    s0: &HomogeneousPoly,
    q: &HomogeneousPoly,
    r: &HomogeneousPoly,
    a: &Scalar,
) -> Result<HomogeneousPoly> {
    let one = Scalar::one();
    s0.scale(&(&one - &(a * a)))
        .add(&q.square()?)?
        .add(&q.mul(r)?.scale(&(&Scalar::int(2) * a)))?
        .add(&r.square()?)
}

fn expand_eighth(
    s0: &HomogeneousPoly,
    p: &HomogeneousPoly,
    q: &HomogeneousPoly,
    r: &HomogeneousPoly,
    a: &Scalar,
    b: &Scalar,
    c: &Scalar,
) -> Result<HomogeneousPoly> {
    let one = Scalar::one();
    let two = Scalar::int(2);
    let w0 = &(&(&one - &(a * a)) - &(b * b)) - &(&(&two * &(&(a * b) * c)) + &(c * c));
    s0.scale(&w0)
        .add(&p.square()?.scale(&(&one - &(a * a))))?
        .add(&q.square()?.scale(&(&one - &(b * b))))?
        .add(&r.square()?.scale(&(&one - &(c * c))))?
        .add(&q.mul(r)?.scale(&(&two * &(a + &(b * c)))))?
        .add(&p.mul(r)?.scale(&(&two * &(b + &(a * c)))))?
        .add(&p.mul(q)?.scale(&(&two * &(c + &(a * b)))))
}

/// Criterion 3: the exact rank-2 concurrency test passes on all six faces
/// of every corpus lattice.
pub fn check_face_concurrency(seed: u64) -> CheckResult {
    run("face-point concurrency", "face chord concurrency", || {
        let mut rng = corpus::rng(seed);
        for i in 0..200 {
            let params = corpus::random_cube_params(&mut rng, 3);
            let lat = build_lattice(&params, &cmp()).map_err(|e| err(format!("sample {i}: {e}")))?;
            lat.verify_faces(&cmp()).map_err(|e| err(format!("sample {i}: {e}")))?;
        }
        Ok("200 lattices, 6 faces each, exact rank test".into())
    })
}

/// Criterion 4: face-conic, face-diagonal and mixed relation identities hold
/// with exactly zero residual on the full corpus, all index permutations.
pub fn check_face_identities(seed: u64) -> CheckResult {
    run("face-conic and diagonal identities", "face-conic / face-diagonal identities", || {
        let mut rng = corpus::rng(seed);
        for i in 0..200 {
            let params = corpus::random_cube_params(&mut rng, 3);
            let lat = build_lattice(&params, &cmp()).map_err(|e| err(format!("sample {i}: {e}")))?;
            lat.verify_face_conics(&cmp()).map_err(|e| err(format!("sample {i}: {e}")))?;
            lat.verify_face_diagonals(&cmp()).map_err(|e| err(format!("sample {i}: {e}")))?;
            lat.verify_diag_relations(&cmp()).map_err(|e| err(format!("sample {i}: {e}")))?;
        }
        Ok("200 lattices, all identities, zero residual".into())
    })
}

/// Criterion 5: strip the eighth vertex from constructor cubes, complete,
/// and recover a projectively equal conic; 200 conic and 100 quadric
/// samples.
pub fn check_completion_round_trip(seed: u64) -> CheckResult {
    run("completion round trip", "seven-to-eight completion", || {
        let mut rng = corpus::rng(seed);
        let mut done3 = 0usize;
        let mut done4 = 0usize;
        while done3 < 200 {
            let params = corpus::random_cube_params(&mut rng, 3);
            if round_trip_once(&params).map_err(|e| err(format!("conic sample {done3}: {e}")))? {
                done3 += 1;
            }
        }
        while done4 < 100 {
            let params = corpus::random_cube_params(&mut rng, 4);
            if round_trip_once(&params).map_err(|e| err(format!("quadric sample {done4}: {e}")))? {
                done4 += 1;
            }
        }
        Ok("200 conic and 100 quadric round trips, projective equality exact".into())
    })
}

/// Runs one strip-and-complete round trip; returns false when the sample is
/// out of the generic regime (degenerate vertex or coincident face points).
fn round_trip_once(params: &PenroseParams) -> Result<bool> {
    let lat = match build_lattice(params, &cmp()) {
        Ok(l) => l,
        Err(_) => return Ok(false),
    };
    let full_mask = IndexSet::from_indices(&[1, 2, 3]);
    if lat.vertices[&full_mask].poly.is_zero() {
        return Ok(false);
    }
    let seven = match seven_from_lattice(&lat) {
        Ok(s) => s,
        Err(_) => return Ok(false),
    };
    let result = match complete(&seven, &cmp()) {
        Ok(r) => r,
        // Out-of-regime draws: adjacent vertices proportional, or a contact
        // parameter outside the rationals.
        Err(crate::error::Error::IrrationalContact) | Err(crate::error::Error::ProjectivelyEqual) => {
            return Ok(false)
        }
        Err(e) => return Err(e),
    };
    let expected = poly_to_sym(&lat.vertices[&full_mask].poly)?;
    if !result.primal.proj_eq(&expected, &cmp()) {
        return Err(err("completion differs from the stripped vertex".into()));
    }
    // Contact-chord agreement: the pencil of the completion with each
    // second-layer vertex contains a rank-1 member.
    for i in 1..=3usize {
        let rest: Vec<usize> = (1..=3).filter(|&j| j != i).collect();
        let om = IndexSet::from_indices(&[rest[0], rest[1]]);
        let cc = CompleteConic { primal: result.primal.clone(), dual: result.primal.adjugate() };
        let c = match double_contact(&cc, seven.vertex(om), &cmp()) {
            Ok(c) => c,
            // The completion may coincide with a neighbor on degenerate
            // draws; the equality check above already passed.
            Err(crate::error::Error::ProjectivelyEqual) => return Ok(false),
            Err(e) => return Err(e),
        };
        let Contact::Found { chord, .. } = c else {
            return Err(err(format!("completion misses contact with {}", om.label())));
        };
        // The chord matches the lattice chord for that edge projectively.
        let latchord = &lat.chords[&(om, i)];
        if !latchord.proj_eq(&chord, &cmp()) {
            return Err(err(format!("completion chord at {} differs from the lattice chord", om.label())));
        }
    }
    Ok(true)
}

/// Criterion 6: 50 random order-4 lattices with all 32 edge identities
/// exact (verified during construction).
pub fn check_hypercube(seed: u64) -> CheckResult {
    run("hypercube lattice", "order-4 subset lattice", || {
        let mut rng = corpus::rng(seed);
        for i in 0..50 {
            let vars = if i % 2 == 0 { 3 } else { 4 };
            let params = corpus::random_general_params(&mut rng, vars, 4);
            let lat = build_lattice(&params, &cmp()).map_err(|e| err(format!("sample {i}: {e}")))?;
            if lat.vertices.len() != 16 || lat.chords.len() != 32 {
                return Err(err(format!("sample {i}: wrong lattice shape")));
            }
        }
        Ok("50 hypercubes (conic and quadric spaces), 32 exact edge identities each".into())
    })
}

/// Criterion 7: extrude 100 cubes, complete in space, slice with the base
/// plane, and recover the plane cube vertex by vertex; the face axes pass
/// through the frame apex with exact incidence.
pub fn check_extrude_slice_round_trip(seed: u64) -> CheckResult {
    run("extrude/slice round trip", "extrusion and slicing", || {
        let mut rng = corpus::rng(seed);
        let mut done = 0usize;
        while done < 100 {
            let params = corpus::random_cube_params(&mut rng, 3);
            match extrude_slice_once(&mut rng, &params) {
                Ok(true) => done += 1,
                Ok(false) => {}
                Err(e) => return Err(err(format!("sample {done}: {e}"))),
            }
        }
        Ok("100 extrude-complete-slice round trips, exact".into())
    })
}

fn extrude_slice_once(rng: &mut rand_chacha::ChaCha8Rng, params: &PenroseParams) -> Result<bool> {
    let lat = match build_lattice(params, &cmp()) {
        Ok(l) => l,
        Err(_) => return Ok(false),
    };
    let full = IndexSet::from_indices(&[1, 2, 3]);
    if lat.vertices[&full].poly.is_zero() {
        return Ok(false);
    }
    let seven2d = match seven_from_lattice(&lat) {
        Ok(s) => s,
        Err(_) => return Ok(false),
    };
    let u = [
        Scalar::one(),
        corpus::small_rational(rng),
        corpus::small_rational(rng),
        corpus::small_rational(rng),
    ];
    let frame = ExtrusionFrame::standard(u);
    let seven3d = match extrude_seven(&seven2d, &frame, &cmp()) {
        Ok(s) => s,
        Err(_) => return Ok(false),
    };
    let result = match complete(&seven3d, &cmp()) {
        Ok(r) => r,
        Err(crate::error::Error::IrrationalContact) | Err(crate::error::Error::ProjectivelyEqual) => {
            return Ok(false)
        }
        Err(e) => return Err(e),
    };
    let mut eight = seven3d.vertices.clone();
    eight.insert(
        full,
        CompleteConic { primal: result.primal.clone(), dual: result.primal.adjugate() },
    );
    // Slice back with the base plane.
    let basis = [
        frame.plane_basis[0].clone(),
        frame.plane_basis[1].clone(),
        frame.plane_basis[2].clone(),
    ];
    let sliced = slice_cube(&eight, &basis, &cmp())?;
    for (om, conic) in &sliced {
        let expected = poly_to_sym(&lat.vertices[om].poly)?;
        if !conic.primal.proj_eq(&expected, &cmp()) {
            return Err(err(format!("sliced vertex {} differs from the plane cube", om.label())));
        }
    }
    // Face axes concurrent at the apex, exact Plücker incidence.
    let fs = face_structure(&eight, &cmp())?;
    let apex = ProjPoint::new(frame.apex.clone())?;
    let o = fs.concurrency_point.ok_or_else(|| err("no concurrency point".into()))?;
    if !o.proj_eq(&apex, &cmp()) {
        return Err(err("face axes do not meet at the frame apex".into()));
    }
    for axis in fs.axes.values() {
        if !axis.contains_point(&apex, &cmp()) {
            return Err(err("an axis misses the apex".into()));
        }
    }
    // Dual half: the spears lie in the polar plane of the apex.
    if let Some(plane) = &fs.polar_plane {
        for spear in fs.spears.values() {
            if !spear.in_plane(plane, &cmp()) {
                return Err(err("a spear leaves the polar plane".into()));
            }
        }
    }
    Ok(true)
}

/// Criterion 8: the basis-route completion agrees projectively with the
/// determinant completion on 50 generic extruded instances.
pub fn check_basis_completion_agreement(seed: u64) -> CheckResult {
    run("completion cross-validation", "basis completion vs determinant", || {
        let mut rng = corpus::rng(seed);
        let mut done = 0usize;
        while done < 50 {
            let params = corpus::random_cube_params(&mut rng, 3);
            let lat = match build_lattice(&params, &cmp()) {
                Ok(l) => l,
                Err(_) => continue,
            };
            let full = IndexSet::from_indices(&[1, 2, 3]);
            if lat.vertices[&full].poly.is_zero() {
                continue;
            }
            let Ok(seven2d) = seven_from_lattice(&lat) else { continue };
            let u = [
                Scalar::one(),
                corpus::small_rational(&mut rng),
                corpus::small_rational(&mut rng),
                corpus::small_rational(&mut rng),
            ];
            let frame = ExtrusionFrame::standard(u);
            let Ok(seven3d) = extrude_seven(&seven2d, &frame, &cmp()) else { continue };
            let det = match complete(&seven3d, &cmp()) {
                Ok(r) => r,
                Err(_) => continue,
            };
            let basis = match complete_quadric_via_basis(&seven3d, &cmp()) {
                Ok(b) => b,
                Err(crate::error::Error::AxesIdentical) | Err(crate::error::Error::IncidentPolarPair) => continue,
                Err(e) => return Err(err(format!("sample {done}: {e}"))),
            };
            if !basis.primal.proj_eq(&det.primal, &cmp()) {
                return Err(err(format!("sample {done}: basis and determinant completions differ")));
            }
            if crate::completion::refine_classify(&basis.primal, basis.case, &cmp()) != CompletionCase::Regular {
                // Generic extrusions complete to regular quadrics; anything
                // else indicates a degenerate draw, which is fine to skip,
                // but a mismatch against the computed rank is not.
                let rank = basis.primal.rank(&cmp());
                if rank == 4 {
                    return Err(err(format!("sample {done}: case label disagrees with rank")));
                }
                continue;
            }
            done += 1;
        }
        Ok("50 extruded instances, both routes agree projectively".into())
    })
}

/// Criterion 9: each classical scenario passes both its lattice-side
/// predicate and the independent classical oracle, with a failing negative
/// control.
pub fn check_scenarios(_seed: u64) -> CheckResult {
    run("classical scenario suite", "specialization table", || {
        let circle = line_i64(1, 0, 0)
            .square()?
            .add(&line_i64(0, 1, 0).square()?)?
            .sub(&line_i64(0, 0, 1).square()?)?;
        // Dual Salmon.
        let inst = scenarios::build_dual_salmon(
            circle.clone(),
            [line_i64(1, 0, 0), line_i64(0, 1, 0), line_i64(1, 1, 1)],
            [Scalar::int(1), Scalar::int(4), Scalar::int(9)],
            [1, 1, 1],
        )?;
        let verdict = scenarios::verify_scenario(&inst, &cmp())?;
        if !verdict.passed() {
            return Err(err(format!("dual salmon failed: {:?}", verdict.details)));
        }
        let neg = scenarios::build_dual_salmon(
            circle.clone(),
            [line_i64(1, 0, 0), line_i64(0, 1, 0), line_i64(1, 1, 1)],
            [Scalar::int(1), Scalar::int(4), Scalar::int(9)],
            [1, 1, -1],
        )?;
        if scenarios::verify_scenario(&neg, &cmp())?.lattice_ok {
            return Err(err("dual salmon negative control passed".into()));
        }
        // Brianchon.
        let pts = [
            ProjPoint::new(vec![Scalar::int(1), Scalar::int(1), Scalar::int(1)])?,
            ProjPoint::new(vec![Scalar::int(-1), Scalar::int(7), Scalar::int(5)])?,
            ProjPoint::new(vec![Scalar::int(-17), Scalar::int(-7), Scalar::int(13)])?,
        ];
        let inst = scenarios::build_brianchon(circle.clone(), pts.clone(), [1, 1, 1])?;
        let verdict = scenarios::verify_scenario(&inst, &cmp())?;
        if !verdict.passed() {
            return Err(err(format!("brianchon failed: {:?}", verdict.details)));
        }
        let neg = scenarios::build_brianchon(circle.clone(), pts, [1, 1, -1])?;
        if scenarios::verify_scenario(&neg, &cmp())?.lattice_ok {
            return Err(err("brianchon negative control passed".into()));
        }
        // Pappus plus a perturbed negative control.
        let l1 = crate::projective::ProjHyperplane::new(vec![Scalar::zero(), Scalar::one(), Scalar::zero()])?;
        let l2 = crate::projective::ProjHyperplane::new(vec![Scalar::zero(), Scalar::one(), Scalar::int(-1)])?;
        let a = |t: i64| ProjPoint::new(vec![Scalar::int(t), Scalar::zero(), Scalar::one()]).unwrap();
        let b = |t: i64| ProjPoint::new(vec![Scalar::int(t), Scalar::one(), Scalar::one()]).unwrap();
        let inst = scenarios::build_pappus(&l1, &l2, [a(0), a(2), a(5)], [b(1), b(3), b(-2)], &cmp())?;
        let verdict = scenarios::verify_scenario(&inst, &cmp())?;
        if !verdict.passed() {
            return Err(err(format!("pappus failed: {:?}", verdict.details)));
        }
        let off = ProjPoint::new(vec![Scalar::int(5), Scalar::ratio(1, 7), Scalar::one()])?;
        if scenarios::build_pappus(&l1, &l2, [a(0), a(2), off], [b(1), b(3), b(-2)], &cmp()).is_ok() {
            return Err(err("pappus accepted a point off its line".into()));
        }
        // Braikenridge–Maclaurin with negative control on the scalar block.
        let bm = scenarios::build_braikenridge_maclaurin(
            line_i64(0, 0, 1),
            [line_i64(1, 0, 0), line_i64(0, 1, 0), line_i64(1, 1, 0)],
            [Scalar::int(1), Scalar::int(2), Scalar::int(1)],
            [1, 1, -1],
        )?;
        let verdict = scenarios::verify_scenario(&bm, &cmp())?;
        if !verdict.passed() {
            return Err(err(format!("braikenridge-maclaurin failed: {:?}", verdict.details)));
        }
        let mut broken = bm.clone();
        broken.params.a.insert((1, 2), Scalar::int(3));
        let verdict = scenarios::verify_scenario(&broken, &cmp())?;
        if verdict.lattice_ok {
            return Err(err("braikenridge-maclaurin negative control passed".into()));
        }
        // Desargues.
        let des = scenarios::build_desargues(
            line_i64(0, 0, 1),
            [line_i64(1, 0, 0), line_i64(0, 1, 0), line_i64(1, 1, 0)],
            [Scalar::int(1), Scalar::int(2), Scalar::int(1)],
            [1, 1, 1],
        )?;
        let verdict = scenarios::verify_scenario(&des, &cmp())?;
        if !verdict.passed() {
            return Err(err(format!("desargues failed: {:?}", verdict.details)));
        }
        // Monge with an equal-radius pair (center at infinity) and negative
        // control through a perturbed radius set with a broken sign pattern.
        let monge = scenarios::build_monge(
            [
                (Scalar::int(0), Scalar::int(0)),
                (Scalar::int(4), Scalar::int(0)),
                (Scalar::int(1), Scalar::int(3)),
            ],
            [Scalar::int(1), Scalar::int(2), Scalar::int(1)],
            [1, 1, 1],
        )?;
        let verdict = scenarios::verify_scenario(&monge, &cmp())?;
        if !verdict.passed() {
            return Err(err(format!("monge failed: {:?}", verdict.details)));
        }
        let monge_eq = scenarios::build_monge(
            [
                (Scalar::int(0), Scalar::int(0)),
                (Scalar::int(4), Scalar::int(0)),
                (Scalar::int(1), Scalar::int(3)),
            ],
            [Scalar::int(2), Scalar::int(2), Scalar::int(1)],
            [1, 1, 1],
        )?;
        let verdict = scenarios::verify_scenario(&monge_eq, &cmp())?;
        if !verdict.passed() {
            return Err(err(format!("monge equal-radius failed: {:?}", verdict.details)));
        }
        let monge_neg = scenarios::build_monge(
            [
                (Scalar::int(0), Scalar::int(0)),
                (Scalar::int(4), Scalar::int(0)),
                (Scalar::int(1), Scalar::int(3)),
            ],
            [Scalar::int(1), Scalar::int(2), Scalar::int(1)],
            [1, 1, -1],
        )?;
        if scenarios::verify_scenario(&monge_neg, &cmp())?.lattice_ok {
            return Err(err("monge negative control passed".into()));
        }
        // classify ∘ build = identity.
        for (inst, want) in [
            (&inst_clone_for_classify()?, scenarios::SpecializationLabel::DualSalmon),
            (&bm, scenarios::SpecializationLabel::BraikenridgeMaclaurin),
            (&des, scenarios::SpecializationLabel::Desargues),
            (&monge, scenarios::SpecializationLabel::Monge),
        ] {
            let lat = build_lattice(&inst.params, &cmp())?;
            if scenarios::classify(&lat, &cmp()) != want {
                return Err(err(format!("classification of {} missed", inst.name)));
            }
        }
        Ok("all scenarios pass with oracles; negative controls fail".into())
    })
}

fn inst_clone_for_classify() -> Result<scenarios::ScenarioInstance> {
    let circle = line_i64(1, 0, 0)
        .square()?
        .add(&line_i64(0, 1, 0).square()?)?
        .sub(&line_i64(0, 0, 1).square()?)?;
    scenarios::build_dual_salmon(
        circle,
        [line_i64(1, 0, 0), line_i64(0, 1, 0), line_i64(1, 1, 1)],
        [Scalar::int(1), Scalar::int(4), Scalar::int(9)],
        [1, 1, 1],
    )
}

/// Criterion 10: the concurrent-chords instance returns two completions; the
/// determinant one verifies exactly, the second one exactly when rational.
pub fn check_two_completions(_seed: u64) -> CheckResult {
    run("two-completion construction", "coincident face points", || {
        let circle = line_i64(1, 0, 0)
            .square()?
            .add(&line_i64(0, 1, 0).square()?)?
            .sub(&line_i64(0, 0, 1).square()?)?;
        let params = PenroseParams::standard_cube(
            circle,
            line_i64(1, 0, 0),
            line_i64(0, 1, 0),
            line_i64(1, 1, 0),
            Scalar::ratio(1, 2),
            Scalar::ratio(-1, 3),
            Scalar::ratio(1, 4),
        )?;
        let lat = build_lattice(&params, &cmp())?;
        let seven = seven_from_lattice(&lat)?;
        let result = complete(&seven, &cmp())?;
        if result.unique {
            return Err(err("uniqueness flag set on a coincident instance".into()));
        }
        let second = result.second.ok_or_else(|| err("no second completion".into()))?;
        if second.matches_determinant {
            return Err(err("second completion equals the determinant one".into()));
        }
        // Determinant completion: exact double contacts.
        let det_cc = CompleteConic { primal: result.primal.clone(), dual: result.primal.adjugate() };
        for i in 1..=3usize {
            let rest: Vec<usize> = (1..=3).filter(|&j| j != i).collect();
            let om = IndexSet::from_indices(&[rest[0], rest[1]]);
            let c = double_contact(&det_cc, seven.vertex(om), &cmp())?;
            if !c.found() {
                return Err(err("determinant completion misses a contact".into()));
            }
        }
        // Second completion: exact when rational; residual bounded always.
        match second.mode {
            SolveMode::Exact => {
                let cc = CompleteConic { primal: second.primal.clone(), dual: second.primal.adjugate() };
                for i in 1..=3usize {
                    let rest: Vec<usize> = (1..=3).filter(|&j| j != i).collect();
                    let om = IndexSet::from_indices(&[rest[0], rest[1]]);
                    let c = double_contact(&cc, seven.vertex(om), &cmp())?;
                    if !c.found() {
                        return Err(err("second completion misses a contact".into()));
                    }
                }
            }
            SolveMode::Approximate => {
                if second.residual >= 1e-9 {
                    return Err(err(format!("second completion residual {} too large", second.residual)));
                }
            }
        }
        // A generic instance keeps the uniqueness flag.
        let mut rng = corpus::rng(99);
        let generic = corpus::random_cube_params(&mut rng, 3);
        let lat = build_lattice(&generic, &cmp())?;
        let seven = seven_from_lattice(&lat)?;
        let result = complete(&seven, &cmp())?;
        if !result.unique {
            return Err(err("generic instance flagged non-unique".into()));
        }
        Ok("two completions returned and verified; uniqueness flag sound".into())
    })
}

/// Criterion 11: the vanishing-parameter classifiers verify their predicted
/// consequences on 20 targeted instances per trigger.
pub fn check_degeneracy_classifiers(seed: u64) -> CheckResult {
    run("degeneracy classifiers", "vanishing parameters", || {
        let mut rng = corpus::rng(seed);
        let mut hits_d = 0usize;
        let mut hits_f = 0usize;
        let mut hits_a = 0usize;
        for _ in 0..400 {
            if hits_d >= 20 && hits_f >= 20 && hits_a >= 20 {
                break;
            }
            let s0 = corpus::random_regular_conic(&mut rng, 3);
            let lines = [
                corpus::random_line(&mut rng, 3),
                corpus::random_line(&mut rng, 3),
                corpus::random_line(&mut rng, 3),
            ];
            // d_1 = 0 instance.
            if hits_d < 20 {
                let mut a = BTreeMap::new();
                a.insert((1, 2), corpus::small_rational(&mut rng));
                a.insert((1, 3), corpus::small_rational(&mut rng));
                a.insert((2, 3), corpus::small_rational(&mut rng));
                let params = PenroseParams::new(
                    3,
                    3,
                    s0.clone(),
                    lines.to_vec(),
                    vec![Scalar::zero(), Scalar::int(-1), Scalar::int(-1)],
                    a,
                )?;
                let lat = build_lattice(&params, &cmp())?;
                let findings = classify_degeneracies(&lat, &cmp());
                if !findings.iter().any(|f| f.trigger == "d_1 = 0" && f.verified) {
                    return Err(err("d = 0 finding not verified".into()));
                }
                hits_d += 1;
            }
            // f_{23} = 0 via a_23 = ±sqrt(d2 d3) with square product.
            if hits_f < 20 {
                let t2 = corpus::nonzero_rational(&mut rng);
                let t3 = corpus::nonzero_rational(&mut rng);
                let mut a = BTreeMap::new();
                a.insert((1, 2), corpus::small_rational(&mut rng));
                a.insert((1, 3), corpus::small_rational(&mut rng));
                a.insert((2, 3), &t2 * &t3);
                let params = PenroseParams::new(
                    3,
                    3,
                    s0.clone(),
                    lines.to_vec(),
                    vec![Scalar::int(-1), &t2 * &t2, &t3 * &t3],
                    a,
                )?;
                let lat = build_lattice(&params, &cmp())?;
                let findings = classify_degeneracies(&lat, &cmp());
                if !findings.iter().any(|f| f.trigger == "f_{23} = 0" && f.verified) {
                    return Err(err("f = 0 finding not verified".into()));
                }
                hits_f += 1;
            }
            // a_{12} = 0: chord collapse.
            if hits_a < 20 {
                let mut a = BTreeMap::new();
                a.insert((1, 2), Scalar::zero());
                a.insert((1, 3), corpus::small_rational(&mut rng));
                a.insert((2, 3), corpus::small_rational(&mut rng));
                let params =
                    PenroseParams::new(3, 3, s0.clone(), lines.to_vec(), vec![Scalar::int(-1); 3], a)?;
                let lat = build_lattice(&params, &cmp())?;
                let findings = classify_degeneracies(&lat, &cmp());
                if !findings.iter().any(|f| f.trigger == "a_{12} = 0" && f.verified) {
                    return Err(err("a = 0 finding not verified".into()));
                }
                hits_a += 1;
            }
        }
        Ok("20 verified instances per vanishing trigger".into())
    })
}

/// The dual reading of the lattice: neighbors of regular vertices are in
/// double contact on the line-wise side as well (adjugate route).
pub fn check_dual_contacts(seed: u64) -> CheckResult {
    run("dual-side contacts", "self-dual double contact", || {
        let mut rng = corpus::rng(seed);
        let mut done = 0usize;
        while done < 25 {
            let params = corpus::random_cube_params(&mut rng, 3);
            let Ok(lat) = build_lattice(&params, &cmp()) else { continue };
            let mut all_regular = true;
            for v in lat.vertices.values() {
                if v.rank != 3 {
                    all_regular = false;
                }
            }
            if !all_regular {
                continue;
            }
            for om in IndexSet::all_subsets(3) {
                for k in 1..=3 {
                    if om.contains(k) {
                        continue;
                    }
                    let hi = om.insert(k);
                    let a = poly_to_sym(&lat.vertices[&om].poly)?.adjugate();
                    let b = poly_to_sym(&lat.vertices[&hi].poly)?.adjugate();
                    let ca = CompleteConic { primal: a.clone(), dual: poly_to_sym(&lat.vertices[&om].poly)? };
                    let cb = CompleteConic { primal: b, dual: poly_to_sym(&lat.vertices[&hi].poly)? };
                    let c = double_contact(&ca, &cb, &cmp())
                        .map_err(|e| err(format!("dual contact at {}/{k}: {e}", om.label())))?;
                    if !c.found() {
                        return Err(err(format!("dual pencil at {}/{k} has no rank-1 member", om.label())));
                    }
                }
            }
            done += 1;
        }
        Ok("25 fully regular lattices, dual contacts on every edge".into())
    })
}

/// Polarity restriction: two conics in double contact act identically on
/// points of the chord.
pub fn check_polarity_restriction(seed: u64) -> CheckResult {
    run("polarity restriction on chords", "shared polarity on the chord", || {
        let mut rng = corpus::rng(seed);
        let mut done = 0usize;
        while done < 20 {
            let s0 = corpus::random_regular_conic(&mut rng, 3);
            let chord = corpus::random_line(&mut rng, 3);
            let scale = corpus::nonzero_rational(&mut rng);
            let a = poly_to_sym(&s0)?;
            let b = a.add(&poly_to_sym(&chord.square()?)?.scale(&scale));
            let ca = CompleteConic::from_primal(&a)?;
            let Ok(cb) = CompleteConic::from_primal(&b) else { continue };
            // 20 random points on the chord.
            let basis = crate::matrix::nullspace(&[chord.linear_coeffs()]);
            for _ in 0..20 {
                let (s, t) = (corpus::small_rational(&mut rng), corpus::nonzero_rational(&mut rng));
                let pt: Vec<Scalar> = (0..3).map(|i| &(&s * &basis[0][i]) + &(&t * &basis[1][i])).collect();
                if pt.iter().all(|c| c.is_zero()) {
                    continue;
                }
                let p = ProjPoint::new(pt)?;
                let la = crate::conic::polar(&ca, &p, &cmp())?;
                let lb = crate::conic::polar(&cb, &p, &cmp())?;
                if !la.proj_eq(&lb, &cmp()) {
                    return Err(err("polar images differ on the chord".into()));
                }
            }
            done += 1;
        }
        Ok("20 double-contact pairs, 20 chord points each, equal polars".into())
    })
}

/// Runs the full suite with one seed; the CLI prints these records.
pub fn run_all(seed: u64) -> Vec<CheckResult> {
    vec![
        check_edge_identities(seed),
        check_formula_concordance(seed.wrapping_add(1)),
        check_face_concurrency(seed.wrapping_add(2)),
        check_face_identities(seed.wrapping_add(3)),
        check_completion_round_trip(seed.wrapping_add(4)),
        check_hypercube(seed.wrapping_add(5)),
        check_extrude_slice_round_trip(seed.wrapping_add(6)),
        check_basis_completion_agreement(seed.wrapping_add(7)),
        check_scenarios(seed.wrapping_add(8)),
        check_two_completions(seed.wrapping_add(9)),
        check_degeneracy_classifiers(seed.wrapping_add(10)),
        check_dual_contacts(seed.wrapping_add(11)),
        check_polarity_restriction(seed.wrapping_add(12)),
    ]
}
