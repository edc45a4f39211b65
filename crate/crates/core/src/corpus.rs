//! Seeded random corpora of small-integer rational data, shared by the
//! property tests and the acceptance suite.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::engine::PenroseParams;
use crate::poly::HomogeneousPoly;
use crate::scalar::Scalar;
use std::collections::BTreeMap;

/// The concrete corpus generator type, for callers outside the crate.
pub type CorpusRng = ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A rational with numerator in [-9, 9] and denominator in [1, 9].
pub fn small_rational(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=9))
}

pub fn nonzero_rational(rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let s = small_rational(rng);
        if !s.is_zero() {
            return s;
        }
    }
}

/// A nonzero degree-1 polynomial in `vars` variables.
pub fn random_line(rng: &mut ChaCha8Rng, vars: usize) -> HomogeneousPoly {
    loop {
        let coeffs: Vec<Scalar> = (0..vars).map(|_| small_rational(rng)).collect();
        if coeffs.iter().any(|c| !c.is_zero()) {
            return HomogeneousPoly::linear(&coeffs);
        }
    }
}

/// A random conic or quadric polynomial; regular with overwhelming
/// probability but not forced to be.
pub fn random_conic(rng: &mut ChaCha8Rng, vars: usize) -> HomogeneousPoly {
    loop {
        let mons = crate::poly::monomials(vars, 2);
        let terms: Vec<_> = mons.into_iter().map(|m| (m, small_rational(rng))).collect();
        let f = HomogeneousPoly::from_terms(vars, 2, terms).expect("degree 2");
        if !f.is_zero() {
            return f;
        }
    }
}

/// A regular conic/quadric polynomial (nonzero determinant).
pub fn random_regular_conic(rng: &mut ChaCha8Rng, vars: usize) -> HomogeneousPoly {
    loop {
        let f = random_conic(rng, vars);
        let m = crate::matrix::poly_to_sym(&f).expect("degree 2");
        if !m.det().is_zero() {
            return f;
        }
    }
}

/// Random lattice parameters under the d = -1 cube preset.
pub fn random_cube_params(rng: &mut ChaCha8Rng, vars: usize) -> PenroseParams {
    PenroseParams::standard_cube(
        random_regular_conic(rng, vars),
        random_line(rng, vars),
        random_line(rng, vars),
        random_line(rng, vars),
        small_rational(rng),
        small_rational(rng),
        small_rational(rng),
    )
    .expect("valid parameters")
}

/// Random lattice parameters with free d and a scalars.
pub fn random_general_params(rng: &mut ChaCha8Rng, vars: usize, n: usize) -> PenroseParams {
    let mut a = BTreeMap::new();
    for j in 1..=n {
        for k in (j + 1)..=n {
            a.insert((j, k), small_rational(rng));
        }
    }
    PenroseParams::new(
        vars,
        n,
        random_regular_conic(rng, vars),
        (0..n).map(|_| random_line(rng, vars)).collect(),
        (0..n).map(|_| nonzero_rational(rng)).collect(),
        a,
    )
    .expect("valid parameters")
}
