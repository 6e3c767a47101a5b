//! The vertex combinatorics that pick a canonical center for a singular
//! plane-curve point.
//!
//! For a curve `f` of order `nu >= 2` at the origin, one variable `z` is put
//! in transversal position (the degree-`nu` part becomes `z^nu`).  Each
//! remaining term `x^a z^b` with `b < nu` projects to the rational number
//! `a / (nu - b)`; the smallest projection `v` is a *vertex*.  A vertex is an
//! artifact of the coordinates exactly when it is an integer and the terms on
//! it form `(z - c x^v)^nu`; substituting `z -> z + c x^v` then removes it
//! and strictly raises the next vertex.  The first vertex that survives is
//! `delta`, and the pair `(nu, nu * delta)` is the local invariant that
//! strictly drops under the blow-ups built downstream.
//!
//! The coordinate moves are recorded in a [`Frame`] so they can be replayed,
//! and the invariant is converted into integer weights through
//! [`center_for`]: `w_z / w_x = delta` in lowest terms scaled so that the
//! weighted order of `f` is exactly `ell = nu * w_z`.

use crate::field::{frobenius_root, Scalar};
use crate::poly::{pareto_minimal, radical, MPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

/// Why no center can be produced for an input.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CharPolyError {
    #[error("the zero polynomial has no singular points")]
    ZeroInput,
    #[error("curve must be in exactly two variables, found {0}")]
    WrongArity(usize),
    #[error("the reduced curve has order {radical_order} at the origin; need at least 2")]
    NotSingular { radical_order: u64 },
    #[error("the curve is a unit times a pure power of a coordinate")]
    PurePower,
}

/// One recorded substitution `z -> z + lambda * x^exponent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveStep {
    pub lambda: Scalar,
    pub exponent: u64,
}

/// The coordinate moves from the input frame to the prepared frame: a scalar
/// unit and a sequence of vertex-dissolving substitutions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    /// Index of the transversal variable `z` in the ring.
    pub z: usize,
    /// Index of the remaining variable `x`.
    pub x: usize,
    /// Unit the input is divided by, so the `z^nu` coefficient becomes 1.
    pub scale: Scalar,
    pub steps: Vec<SolveStep>,
}

impl Frame {
    /// Replay the frame on a polynomial in the same ring.
    pub fn apply(&self, f: &MPoly) -> MPoly {
        let field = f.field().clone();
        let vars: Vec<&str> = f.vars().iter().map(|s| s.as_str()).collect();
        let mut out = f.mul_scalar(&self.scale.inv().expect("frame scale is a unit"));
        for step in &self.steps {
            let mut shift = MPoly::variable(field.clone(), &vars, self.z);
            let mut exps = vec![0u32; vars.len()];
            exps[self.x] = step.exponent.try_into().expect("exponent fits in u32");
            shift = shift.add(&MPoly::from_terms(
                field.clone(),
                &vars,
                [(exps, step.lambda.clone())],
            ));
            out = out.substitute(self.z, &shift);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.steps.is_empty() && self.scale.is_one()
    }
}

/// The canonical weighted center at a singular point, keyed by variable
/// name so chart conventions cannot scramble the weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Center {
    pub z_name: String,
    pub x_name: String,
    pub w_z: u64,
    pub w_x: u64,
    /// `nu * w_z = nu_w(f)`: the weighted order the center realizes.
    pub ell: u64,
    /// `(nu, nu * delta)`, compared lexicographically across blow-ups.
    pub invariant: (BigRational, BigRational),
}

impl Center {
    pub fn delta(&self) -> BigRational {
        BigRational::new(BigInt::from(self.w_z), BigInt::from(self.w_x))
    }

    /// Weights in the order of the given ring variables.
    pub fn weights_for(&self, vars: &[String]) -> Vec<u64> {
        vars.iter()
            .map(|v| {
                if *v == self.z_name {
                    self.w_z
                } else if *v == self.x_name {
                    self.w_x
                } else {
                    panic!("variable {v:?} is not part of the center")
                }
            })
            .collect()
    }
}

/// The stabilized vertex data of a singular point.
#[derive(Debug, Clone)]
pub struct CharPolyhedron {
    /// Order of the curve at the origin.
    pub nu: u64,
    /// The surviving minimal vertex; `1` when the initial form already has
    /// two distinct roots and the origin itself is the finest center.
    pub delta: BigRational,
    /// Coordinate moves that produced the prepared polynomial.
    pub frame: Frame,
    /// The input with the frame applied: `z^nu` is monic and no vertex is
    /// removable.
    pub prepared: MPoly,
    /// Terms of degree `nu` of the prepared polynomial.
    pub f_nu: MPoly,
    /// Terms on the `delta` face: the weighted initial form at the center.
    pub f_delta: MPoly,
    pub center: Center,
}

/// Stabilize the polyhedron of a singular curve and read off its canonical
/// center.
pub fn characteristic_polyhedron(f: &MPoly) -> Result<CharPolyhedron, CharPolyError> {
    if f.is_zero() {
        return Err(CharPolyError::ZeroInput);
    }
    if f.vars().len() != 2 {
        return Err(CharPolyError::WrongArity(f.vars().len()));
    }
    // the vertex process terminates only when the reduced curve is singular:
    // a multiple smooth branch would dissolve vertices forever
    let radical_order = radical(f).order().expect("radical of a nonzero polynomial");
    if radical_order < 2 {
        return Err(CharPolyError::NotSingular { radical_order });
    }
    let nu = f.order().expect("nonzero");

    let (frame, delta_one) = match normalize_roles(f, nu) {
        Roles::Transversal { z, x, scale, step } => {
            let mut frame = Frame { z, x, scale, steps: Vec::new() };
            frame.steps.extend(step);
            (frame, false)
        }
        Roles::DeltaOne { z, x, scale } => (Frame { z, x, scale, steps: Vec::new() }, true),
    };
    let work = frame.apply(f);

    let (frame, work, delta) = if delta_one {
        (frame, work, BigRational::one())
    } else {
        solve_vertices(frame, work, nu)?
    };

    let center = center_for(nu, &delta, &work.vars()[frame.z], &work.vars()[frame.x]);
    let weights = center.weights_for(work.vars());
    let f_delta = work.weighted_initial(&weights);
    debug_assert_eq!(work.weighted_order(&weights), Some(center.ell));
    Ok(CharPolyhedron {
        nu,
        delta,
        f_nu: work.initial_form(),
        f_delta,
        prepared: work,
        frame,
        center,
    })
}

enum Roles {
    Transversal { z: usize, x: usize, scale: Scalar, step: Option<SolveStep> },
    DeltaOne { z: usize, x: usize, scale: Scalar },
}

/// Decide which variable is transversal.  If the initial form is a unit
/// times a pure `nu`-th power of a linear form, normalize it to `z^nu`;
/// otherwise the vertex is `delta = 1` and only a scale is extracted.
fn normalize_roles(f: &MPoly, nu: u64) -> Roles {
    let pure_coeff = |z: usize| -> Scalar {
        let mut exps = vec![0u32; 2];
        exps[z] = nu.try_into().expect("order fits in u32");
        f.coeff(&exps)
    };
    // prefer the last ring variable as z, matching the (x, y) habit
    let candidates = [(1usize, 0usize), (0usize, 1usize)];
    for &(z, x) in &candidates {
        let c = pure_coeff(z);
        if c.is_zero() {
            continue;
        }
        let scaled = f.mul_scalar(&c.inv().expect("nonzero"));
        if let Some(lambda) = dissolve_lambda(&scaled, z, x, nu, 1) {
            let step = if lambda.is_zero() {
                None
            } else {
                Some(SolveStep { lambda, exponent: 1 })
            };
            return Roles::Transversal { z, x, scale: c, step };
        }
        // a pure power has a nonzero pure coefficient in this role, so
        // failing here means the initial form is not a pure power at all
        return Roles::DeltaOne { z, x, scale: c };
    }
    // neither pure coefficient is nonzero: certainly not a pure power
    Roles::DeltaOne { z: 1, x: 0, scale: f.field().one() }
}

/// Dissolve integer vertices until one resists; returns the final frame,
/// the prepared polynomial, and `delta`.
fn solve_vertices(
    mut frame: Frame,
    mut work: MPoly,
    nu: u64,
) -> Result<(Frame, MPoly, BigRational), CharPolyError> {
    let var_names = work.vars().to_vec();
    let vars: Vec<&str> = var_names.iter().map(|s| s.as_str()).collect();
    let field = work.field().clone();
    for _ in 0..10_000 {
        let vertex = match minimal_vertex(&work, frame.z, nu) {
            // no terms below z^nu: the curve is a unit times z^nu, which the
            // radical guard is supposed to have excluded
            None => return Err(CharPolyError::PurePower),
            Some(v) => v,
        };
        debug_assert!(vertex > BigRational::one(), "vertices after normalization exceed 1");
        if !vertex.denom().is_one() {
            return Ok((frame, work, vertex));
        }
        let v = vertex.numer().to_u64().expect("vertex fits in u64");
        let lambda = match dissolve_lambda(&work, frame.z, frame.x, nu, v) {
            None => return Ok((frame, work, vertex)),
            Some(lambda) => lambda,
        };
        debug_assert!(!lambda.is_zero(), "a minimal vertex carries terms");
        let mut exps = vec![0u32; 2];
        exps[frame.x] = v.try_into().expect("exponent fits in u32");
        let shift = MPoly::variable(field.clone(), &vars, frame.z)
            .add(&MPoly::from_terms(field.clone(), &vars, [(exps, lambda.clone())]));
        work = work.substitute(frame.z, &shift);
        frame.steps.push(SolveStep { lambda, exponent: v });
    }
    panic!("vertex dissolution failed to stabilize (the radical guard should prevent this)");
}

/// Smallest projection `a / (nu - b)` over terms with `b < nu`.
fn minimal_vertex(f: &MPoly, z: usize, nu: u64) -> Option<BigRational> {
    f.terms()
        .filter(|(exps, _)| (exps[z] as u64) < nu)
        .map(|(exps, _)| {
            let x = if z == 0 { 1 } else { 0 };
            BigRational::new(BigInt::from(exps[x]), BigInt::from(nu - exps[z] as u64))
        })
        .min()
}

/// If the terms on vertex `v` form `(z - lambda x^v)^nu`, return `lambda`
/// (zero when the face is `z^nu` alone, which only happens for `v = 1`).
///
/// The candidate is read off one binomial coefficient: writing
/// `nu = m * p^e` with `p` prime to `m`, the coefficient of
/// `x^(v p^e) z^(nu - p^e)` in the expansion is `m * (-lambda)^(p^e)` by
/// Lucas, and `p^e`-th roots are unique over a perfect field.  The full
/// expansion is then compared exactly, so a false candidate cannot slip
/// through.
fn dissolve_lambda(f: &MPoly, z: usize, x: usize, nu: u64, v: u64) -> Option<Scalar> {
    let field = f.field().clone();
    let p = field.characteristic();
    let (m, e, pe) = match p {
        0 => (nu, 0u64, 1u64),
        p => {
            let mut m = nu;
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            (m, e, nu / m)
        }
    };
    let m_inv = field.integer(m as i64).inv().expect("m is prime to the characteristic");
    let mut probe = vec![0u32; 2];
    probe[x] = (v * pe).try_into().expect("exponent fits in u32");
    probe[z] = (nu - pe).try_into().expect("exponent fits in u32");
    let neg_lambda = frobenius_root(&f.coeff(&probe).mul(&m_inv), e).expect("perfect field");
    let lambda = neg_lambda.neg();

    // exact certificate: the v-face of f must equal (z - lambda x^v)^nu
    let mut weights = vec![0u64; 2];
    weights[x] = 1;
    weights[z] = v;
    let face = f.weighted_initial(&weights);
    let vars: Vec<&str> = f.vars().iter().map(|s| s.as_str()).collect();
    let mut exps = vec![0u32; 2];
    exps[x] = v.try_into().expect("exponent fits in u32");
    let binomial = MPoly::variable(field.clone(), &vars, z)
        .sub(&MPoly::from_terms(field.clone(), &vars, [(exps, lambda.clone())]));
    if binomial.pow(nu.try_into().expect("order fits in u32")) == face {
        Some(lambda)
    } else {
        None
    }
}

/// Convert the invariant `(nu, nu * delta)` into coprime integer weights:
/// the smallest `ell` divisible by `nu` with `ell / (nu * delta)` integral,
/// giving `w_z = ell / nu` and `w_x = ell / (nu * delta)`.
pub fn center_for(nu: u64, delta: &BigRational, z_name: &str, x_name: &str) -> Center {
    assert!(delta.is_positive(), "delta is positive");
    let a1 = BigRational::from_integer(BigInt::from(nu));
    let a2 = &a1 * delta;
    let num = a2.numer().to_u64().expect("invariant numerator fits in u64");
    let ell = lcm(nu, num);
    let w_z = ell / nu;
    let w_x = (BigRational::from_integer(BigInt::from(ell)) / &a2)
        .to_integer()
        .to_u64()
        .expect("weight is a positive integer");
    debug_assert_eq!(gcd(w_z, w_x), 1, "minimal ell gives coprime weights");
    Center {
        z_name: z_name.to_string(),
        x_name: x_name.to_string(),
        w_z,
        w_x,
        ell,
        invariant: (a1, a2),
    }
}

/// Is the weighted order of `f` at least `ord(f) * w_z`?  The canonical
/// center achieves equality and no steeper slope is admissible.
pub fn is_admissible(f: &MPoly, w_z: u64, w_x: u64, z: usize, x: usize) -> bool {
    let nu = match f.order() {
        None => return false,
        Some(nu) => nu,
    };
    let mut weights = vec![0u64; f.vars().len()];
    weights[z] = w_z;
    weights[x] = w_x;
    f.weighted_order(&weights).expect("nonzero") >= nu * w_z
}

/// Divisibility-minimal monomials `x^a z^b` with `w . (a, b) >= r`: the
/// corners of the weighted staircase.
pub fn valuation_ideal_generators(w: (u64, u64), r: u64) -> Vec<(u64, u64)> {
    assert!(w.0 > 0 && w.1 > 0, "weights are positive");
    let ceil_div = |num: u64, den: u64| num.div_ceil(den);
    let mut corners = Vec::new();
    for a in 0..=ceil_div(r, w.0) {
        let need = r.saturating_sub(a * w.0);
        let b = ceil_div(need, w.1);
        corners.push((a, b));
    }
    pareto_minimal(&corners)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDescriptor;
    use crate::poly::parse_poly;

    fn parse(spec: &str, s: &str) -> MPoly {
        let k = FieldDescriptor::parse_spec(spec).unwrap();
        parse_poly(s, &k, &["x", "y"]).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn cusp_over_the_rationals() {
        let f = parse("Q", "y^2 - x^3");
        let cp = characteristic_polyhedron(&f).unwrap();
        assert_eq!(cp.nu, 2);
        assert_eq!(cp.delta, rat(3, 2));
        assert!(cp.frame.is_identity());
        assert_eq!(cp.center.w_z, 3);
        assert_eq!(cp.center.w_x, 2);
        assert_eq!(cp.center.ell, 6);
        assert_eq!(cp.center.z_name, "y");
        assert_eq!(cp.f_delta, f);
        assert_eq!(cp.center.invariant, (rat(2, 1), rat(3, 1)));
        // the canonical slope is maximal among admissible ones
        assert!(is_admissible(&f, 3, 2, 1, 0));
        assert!(!is_admissible(&f, 2, 1, 1, 0));
        assert!(!is_admissible(&f, 5, 3, 1, 0));
    }

    #[test]
    fn dissolves_a_cube_vertex_in_char_three() {
        // f = -(y - x^3)^9 - x^18 + (y - x^3)^3 + x^11 over F_3, written out
        // with the freshman's-dream collapses (y - x^3)^3 = y^3 - x^9 and
        // (y - x^3)^9 = y^9 - x^27
        let f = parse("F3", "-y^9 + x^27 - x^18 + y^3 - x^9 + x^11");
        let cp = characteristic_polyhedron(&f).unwrap();
        assert_eq!(cp.nu, 3);
        // one dissolving substitution y -> y + x^3, then x^11 resists
        assert_eq!(cp.frame.steps.len(), 1);
        let k = f.field();
        assert_eq!(cp.frame.steps[0], SolveStep { lambda: k.one(), exponent: 3 });
        assert_eq!(cp.prepared, parse("F3", "-y^9 - x^18 + y^3 + x^11"));
        assert_eq!(cp.delta, rat(11, 3));
        assert_eq!(cp.center.ell, 33);
        assert_eq!(cp.center.w_z, 11);
        assert_eq!(cp.center.w_x, 3);
        assert_eq!(cp.f_delta, parse("F3", "y^3 + x^11"));
        // frame replay reproduces the prepared polynomial
        assert_eq!(cp.frame.apply(&f), cp.prepared);
    }

    #[test]
    fn dissolves_a_square_vertex_in_char_two() {
        // f = (y + x^3)^2 + x^7 = y^2 + x^6 + x^7 over F_2
        let f = parse("F2", "y^2 + x^6 + x^7");
        let cp = characteristic_polyhedron(&f).unwrap();
        assert_eq!(cp.nu, 2);
        assert_eq!(cp.frame.steps, vec![SolveStep { lambda: f.field().one(), exponent: 3 }]);
        assert_eq!(cp.prepared, parse("F2", "y^2 + x^7"));
        assert_eq!(cp.delta, rat(7, 2));
        assert_eq!(cp.center.w_z, 7);
        assert_eq!(cp.center.w_x, 2);
        assert_eq!(cp.center.ell, 14);
    }

    #[test]
    fn split_initial_form_gives_delta_one() {
        let f = parse("Q", "y^2 - x^2 + x^5");
        let cp = characteristic_polyhedron(&f).unwrap();
        assert_eq!(cp.delta, rat(1, 1));
        assert_eq!(cp.center.w_z, 1);
        assert_eq!(cp.center.w_x, 1);
        assert_eq!(cp.center.ell, 2);
        assert_eq!(cp.f_delta, parse("Q", "y^2 - x^2"));
        assert_eq!(cp.f_nu, cp.f_delta);
        assert!(cp.frame.steps.is_empty());
    }

    #[test]
    fn char_two_cross_term_is_never_a_pure_square() {
        // (y + cx)^2 has no xy term in characteristic 2
        let f = parse("F2", "y^2 + x*y + x^3");
        let cp = characteristic_polyhedron(&f).unwrap();
        assert_eq!(cp.delta, rat(1, 1));
        assert_eq!(cp.f_delta, parse("F2", "y^2 + x*y"));
    }

    #[test]
    fn linear_normalization_step() {
        // (y + 2x)^3 + x^5: the initial form is a cube of y + 2x
        let f = parse("Q", "(y + 2x)^3 + x^5");
        let cp = characteristic_polyhedron(&f).unwrap();
        assert_eq!(
            cp.frame.steps,
            vec![SolveStep { lambda: f.field().integer(-2), exponent: 1 }]
        );
        assert_eq!(cp.prepared, parse("Q", "y^3 + x^5"));
        assert_eq!(cp.delta, rat(5, 3));
        // and a leading unit is divided out
        let g = parse("Q", "5*y^3 + 7*x^5");
        let cg = characteristic_polyhedron(&g).unwrap();
        assert_eq!(cg.frame.scale, g.field().integer(5));
        assert_eq!(cg.prepared, parse("Q", "y^3 + 7/5*x^5"));
        assert_eq!(cg.delta, rat(5, 3));
    }

    #[test]
    fn transversal_role_can_fall_on_the_first_variable() {
        // order-7 curve already transversal in x
        let k = FieldDescriptor::rationals();
        let f = parse_poly("x^7 + z^6*x^2", &k, &["x", "z"]).unwrap();
        let cp = characteristic_polyhedron(&f).unwrap();
        assert_eq!(cp.center.z_name, "x");
        assert_eq!(cp.center.x_name, "z");
        assert_eq!(cp.delta, rat(6, 5));
        assert_eq!(cp.center.invariant, (rat(7, 1), rat(42, 5)));
        assert_eq!(cp.center.w_z, 6);
        assert_eq!(cp.center.w_x, 5);
        assert_eq!(cp.center.ell, 42);
        assert_eq!(cp.center.weights_for(f.vars()), vec![6, 5]);
    }

    #[test]
    fn rejects_smooth_and_degenerate_inputs() {
        let smooth = parse("Q", "y - x^5");
        assert!(matches!(
            characteristic_polyhedron(&smooth),
            Err(CharPolyError::NotSingular { radical_order: 1 })
        ));
        // a multiple smooth branch is excluded by the radical guard, which
        // is exactly what makes the dissolution loop finite
        let double = parse("Q", "(y - x^2)^2");
        assert!(matches!(
            characteristic_polyhedron(&double),
            Err(CharPolyError::NotSingular { radical_order: 1 })
        ));
        let unit = parse("Q", "1 + x");
        assert!(matches!(
            characteristic_polyhedron(&unit),
            Err(CharPolyError::NotSingular { radical_order: 0 })
        ));
        let zero = MPoly::zero(FieldDescriptor::rationals(), &["x", "y"]);
        assert!(matches!(characteristic_polyhedron(&zero), Err(CharPolyError::ZeroInput)));
        let k = FieldDescriptor::rationals();
        let surface = parse_poly("x^2 + y*w", &k, &["x", "y", "w"]).unwrap();
        assert!(matches!(
            characteristic_polyhedron(&surface),
            Err(CharPolyError::WrongArity(3))
        ));
    }

    #[test]
    fn staircase_corner_generators() {
        assert_eq!(
            valuation_ideal_generators((3, 2), 6),
            vec![(0, 3), (1, 2), (2, 0)]
        );
        assert_eq!(
            valuation_ideal_generators((1, 1), 2),
            vec![(0, 2), (1, 1), (2, 0)]
        );
        assert_eq!(
            valuation_ideal_generators((3, 4), 16),
            vec![(0, 4), (2, 3), (3, 2), (4, 1), (6, 0)]
        );
    }

    #[test]
    fn weighted_order_of_prepared_curve_is_ell() {
        for (spec, s) in [("Q", "y^2 - x^3"), ("F2", "y^2 + x^6 + x^7"), ("F3", "y^3 + x^11")] {
            let f = parse(spec, s);
            let cp = characteristic_polyhedron(&f).unwrap();
            let w = cp.center.weights_for(cp.prepared.vars());
            assert_eq!(cp.prepared.weighted_order(&w), Some(cp.center.ell), "{spec} {s}");
        }
    }
}
