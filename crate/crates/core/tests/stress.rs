//! Larger randomized sweeps, ignored by default; run with
//! `cargo test --test stress -- --ignored`.

use penrose_core::completion::{complete, seven_from_lattice};
use penrose_core::corpus;
use penrose_core::engine::{build_lattice, IndexSet};
use penrose_core::matrix::poly_to_sym;
use penrose_core::scalar::Comparator;

fn cmp() -> Comparator {
    Comparator::default()
}

#[test]
#[ignore]
fn big_lattice_sweep() {
    let mut rng = corpus::rng(0xDEC0DE);
    for i in 0..2000 {
        let vars = if i % 3 == 0 { 4 } else { 3 };
        let n = if i % 5 == 0 { 4 } else { 3 };
        let params = corpus::random_general_params(&mut rng, vars, n);
        let lat = build_lattice(&params, &cmp()).unwrap_or_else(|e| panic!("sample {i}: {e}"));
        if n == 3 {
            lat.verify_face_conics(&cmp()).unwrap_or_else(|e| panic!("sample {i}: {e}"));
            lat.verify_face_diagonals(&cmp()).unwrap_or_else(|e| panic!("sample {i}: {e}"));
            lat.verify_diag_relations(&cmp()).unwrap_or_else(|e| panic!("sample {i}: {e}"));
            lat.verify_faces(&cmp()).unwrap_or_else(|e| panic!("sample {i}: {e}"));
        }
    }
}

#[test]
#[ignore]
fn big_completion_sweep() {
    let mut rng = corpus::rng(0xC0FFEE);
    let mut done = 0usize;
    let mut skipped = 0usize;
    while done < 500 {
        let vars = if done % 3 == 0 { 4 } else { 3 };
        let params = corpus::random_cube_params(&mut rng, vars);
        let Ok(lat) = build_lattice(&params, &cmp()) else {
            skipped += 1;
            continue;
        };
        let full = IndexSet::from_indices(&[1, 2, 3]);
        if lat.vertices[&full].poly.is_zero() {
            skipped += 1;
            continue;
        }
        let Ok(seven) = seven_from_lattice(&lat) else {
            skipped += 1;
            continue;
        };
        match complete(&seven, &cmp()) {
            Ok(result) => {
                let expected = poly_to_sym(&lat.vertices[&full].poly).unwrap();
                assert!(result.primal.proj_eq(&expected, &cmp()), "sample {done}");
                done += 1;
            }
            Err(penrose_core::Error::IrrationalContact) | Err(penrose_core::Error::ProjectivelyEqual) => {
                skipped += 1;
            }
            Err(e) => panic!("sample {done}: {e}"),
        }
    }
    println!("500 completions verified, {skipped} out-of-regime draws skipped");
}
