#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use realconic::bundle::{
    apply, build_minimal_surface, BaseCurve, CircleData, ConicBundleSpec, GData, Sign,
    SurfaceState, Topology, Transformation,
};
use realconic::cohom::GroupInvariants;
use realconic::exactpoly::{Polynomial, RationalFunction};

pub fn random_circle(rng: &mut StdRng, max_zeros: u32) -> CircleData {
    let zeros = 2 * rng.gen_range(0..=max_zeros / 2);
    if zeros == 0 {
        CircleData::signed(if rng.gen_bool(0.5) {
            Sign::Positive
        } else {
            Sign::Negative
        })
    } else {
        CircleData::zeros(zeros)
    }
}

pub fn random_base(
    rng: &mut StdRng,
    genus: std::ops::RangeInclusive<u32>,
) -> (BaseCurve, Vec<CircleData>) {
    let genus = rng.gen_range(genus);
    let circles = rng.gen_range(0..=(genus + 1).min(4));
    let data = (0..circles).map(|_| random_circle(rng, 6)).collect();
    (BaseCurve::abstract_curve(genus, circles).unwrap(), data)
}

pub fn minimal_state(base: BaseCurve, circles: Vec<CircleData>) -> SurfaceState {
    build_minimal_surface(&ConicBundleSpec {
        base,
        g: GData::Abstract(circles),
        transformations: vec![],
    })
    .unwrap()
}

/// Up to `max` elementary transformations, each real one aimed at a random component.
pub fn random_elms(rng: &mut StdRng, mut state: SurfaceState, max: usize) -> SurfaceState {
    for _ in 0..rng.gen_range(0..=max) {
        let t = if state.components.is_empty() || rng.gen_bool(0.2) {
            Transformation::elm_conj_pair()
        } else {
            Transformation::elm_real(rng.gen_range(0..state.components.len()))
        };
        state = apply(&state, &t).unwrap();
    }
    state
}

pub fn random_blowups(rng: &mut StdRng, mut state: SurfaceState, max: usize) -> SurfaceState {
    for _ in 0..rng.gen_range(0..=max) {
        let t = if state.components.is_empty() || rng.gen_bool(0.25) {
            Transformation::blowup_conj_pair()
        } else {
            Transformation::blowup_real(rng.gen_range(0..state.components.len()))
        };
        state = apply(&state, &t).unwrap();
    }
    state
}

/// Counts read straight off the component list.
pub struct Counts {
    pub tori: usize,
    pub kleins: usize,
    pub dominating_kleins: usize,
}

pub fn counts(state: &SurfaceState) -> Counts {
    let klein = |t: Topology| t.crosscaps() == 2;
    Counts {
        tori: state
            .components
            .iter()
            .filter(|c| c.topology == Topology::Torus)
            .count(),
        kleins: state
            .components
            .iter()
            .filter(|c| klein(c.topology))
            .count(),
        dominating_kleins: state
            .components
            .iter()
            .filter(|c| klein(c.topology) && c.dominates_circle)
            .count(),
    }
}

/// `ℤ^t ⊕ (ℤ/2)^max(e−1, 0)`
pub fn closed_form(t: usize, e: usize) -> GroupInvariants {
    GroupInvariants {
        free_rank: t,
        torsion_factors: vec![2; e.saturating_sub(1)],
    }
}

pub fn poly(c: &[i64]) -> Polynomial {
    Polynomial::from_ints(c)
}

/// A random pole-free `g` with simple real zeros, integer coefficients, degree ≤ 10.
///
/// Numerator: distinct rational roots `p/q` times positive-definite quadratics;
/// denominator: positive-definite quadratics, of degree equal to the numerator's
/// or one more (a simple zero at infinity).
pub fn random_admissible_g(rng: &mut StdRng) -> RationalFunction {
    loop {
        let den_deg = 2 * rng.gen_range(0..=5usize);
        let num_deg = if den_deg > 0 && rng.gen_bool(0.3) {
            den_deg - 1
        } else {
            den_deg
        };
        if num_deg == 0 && den_deg == 0 && rng.gen_bool(0.7) {
            continue;
        }
        let quads = rng.gen_range(0..=num_deg / 2);
        let linears = num_deg - 2 * quads;

        let mut roots: Vec<(i64, i64)> = Vec::new();
        while roots.len() < linears {
            let q = rng.gen_range(1..=3i64);
            let p = rng.gen_range(-7..=7i64);
            // p/q distinct from the others
            if roots.iter().all(|&(p2, q2)| p * q2 != p2 * q) {
                roots.push((p, q));
            }
        }
        let mut num = poly(&[*[-3i64, -1, 1, 2].choose(rng).unwrap()]);
        for (p, q) in roots {
            num = &num * &poly(&[-p, q]);
        }
        for _ in 0..quads {
            num = &num * &positive_quadratic(rng);
        }
        let mut den = poly(&[1]);
        for _ in 0..den_deg / 2 {
            den = &den * &positive_quadratic(rng);
        }
        return RationalFunction::new(num, den).unwrap();
    }
}

/// `a z² + b z + c` with `a > 0` and `b² < 4ac`.
pub fn positive_quadratic(rng: &mut StdRng) -> Polynomial {
    loop {
        let a = rng.gen_range(1..=3i64);
        let b = rng.gen_range(-5..=5i64);
        let c = rng.gen_range(1..=9i64);
        if b * b < 4 * a * c {
            return poly(&[c, b, a]);
        }
    }
}

/// Random polynomial of degree 1..=max_degree with coefficients in `[-bound, bound]`.
pub fn random_polynomial(rng: &mut StdRng, max_degree: usize, bound: i64) -> Polynomial {
    let deg = rng.gen_range(1..=max_degree);
    let mut c: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-bound..=bound)).collect();
    while c[deg] == 0 {
        c[deg] = rng.gen_range(-bound..=bound);
    }
    poly(&c)
}

/// Minimal state, then elementary transformations, then blow-ups.
pub fn random_state(
    rng: &mut StdRng,
    genus: std::ops::RangeInclusive<u32>,
    elms: usize,
    blowups: usize,
) -> SurfaceState {
    let (base, circles) = random_base(rng, genus);
    let s = random_elms(rng, minimal_state(base, circles), elms);
    random_blowups(rng, s, blowups)
}
