//! Univariate factorization over the exact coefficient fields.
//!
//! Over a finite field the factorization is complete: squarefree splitting
//! (with p-th-root descent for inseparable parts), distinct-degree splitting,
//! then randomized equal-degree splitting.  The randomness is seeded, and the
//! result is sorted canonically, so identical inputs give identical outputs
//! for any seed.
//!
//! Over the rationals we split off the squarefree structure and all rational
//! roots; what remains is rootless and is only certified irreducible when its
//! degree makes that automatic (2 or 3).  Rational root search factors the
//! extreme coefficients by trial division and panics loudly if they are out
//! of reach (prime factors above 10^12), rather than returning a wrong
//! answer.

use super::{frobenius_root, FieldDescriptor, Scalar, ScalarKey, UnivariatePoly};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

const TRIAL_BOUND: u64 = 1_000_000;
const DIVISOR_CAP: usize = 100_000;

/// One factor of a factorization: a monic polynomial with its multiplicity.
///
/// `irreducible` is a certificate, not a guess: over a finite field it is
/// always true; over the rationals it is true for linear factors and for
/// rootless factors of degree 2 or 3, and false for higher-degree remainders
/// that were not split further.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorPart {
    pub poly: UnivariatePoly,
    pub multiplicity: u32,
    pub irreducible: bool,
}

/// `unit * prod(parts[i].poly ^ parts[i].multiplicity)` equals the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Scalar,
    pub parts: Vec<FactorPart>,
}

impl Factorization {
    /// Multiply the factorization back out (used to verify completeness).
    pub fn product(&self) -> UnivariatePoly {
        let mut acc = UnivariatePoly::constant(self.unit.clone());
        for part in &self.parts {
            acc = acc.mul(&part.poly.pow(part.multiplicity));
        }
        acc
    }

    /// Roots in the coefficient field with multiplicities, read off the
    /// linear factors, sorted canonically.
    pub fn roots(&self) -> Vec<(Scalar, u32)> {
        let mut out: Vec<(Scalar, u32)> = self
            .parts
            .iter()
            .filter(|p| p.poly.degree() == Some(1))
            .map(|p| (p.poly.coeff(0).neg(), p.multiplicity))
            .collect();
        out.sort_by_key(|a| a.0.canonical_key());
        out
    }

    /// Factors of degree at least 2 (no roots in the coefficient field).
    pub fn nonlinear_parts(&self) -> Vec<&FactorPart> {
        self.parts
            .iter()
            .filter(|p| p.poly.degree().is_some_and(|d| d >= 2))
            .collect()
    }
}

/// Factor a nonzero univariate polynomial.  The seed drives the randomized
/// equal-degree stage over finite fields; the output does not depend on it.
pub fn factor_univariate(f: &UnivariatePoly, seed: u64) -> Factorization {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    let unit = f.leading_coeff().unwrap().clone();
    let monic = f.monic();
    let mut parts = Vec::new();
    if monic.degree() != Some(0) {
        match f.field() {
            FieldDescriptor::Rationals => rational_parts(&monic, &mut parts),
            FieldDescriptor::Finite(_) => finite_parts(&monic, seed, &mut parts),
        }
    }
    parts.sort_by_key(part_key);
    Factorization { unit, parts }
}

fn part_key(p: &FactorPart) -> (usize, Vec<ScalarKey>, u32) {
    let coeffs = p.poly.coeffs().iter().map(Scalar::canonical_key).collect();
    (p.poly.degree().unwrap_or(0), coeffs, p.multiplicity)
}

// ---- squarefree decomposition (any characteristic) ----

/// Split monic nonconstant `f` into pairwise-coprime monic squarefree parts
/// with multiplicities.  In characteristic p the inseparable residue is a
/// p-th power and is handled by Frobenius-root descent on the coefficients.
pub(crate) fn squarefree_decomposition(f: &UnivariatePoly) -> Vec<(UnivariatePoly, u32)> {
    let mut out = Vec::new();
    let mut c = f.gcd(&f.derivative());
    let mut w = f.div_exact(&c);
    let mut i = 1u32;
    while w.degree() != Some(0) {
        let y = w.gcd(&c);
        let z = w.div_exact(&y);
        if z.degree() != Some(0) {
            out.push((z, i));
        }
        c = c.div_exact(&y);
        w = y;
        i += 1;
    }
    if c.degree() != Some(0) {
        // every factor left in c has multiplicity divisible by p
        let p = f.field().characteristic() as u32;
        assert!(p > 0, "nontrivial perfect-power residue in characteristic zero");
        for (g, m) in squarefree_decomposition(&poly_pth_root(&c)) {
            out.push((g, m * p));
        }
    }
    out
}

/// The p-th root of a polynomial that is a p-th power: keep the coefficients
/// at exponents divisible by p and take their Frobenius roots.
fn poly_pth_root(f: &UnivariatePoly) -> UnivariatePoly {
    let field = f.field().clone();
    let p = field.characteristic() as usize;
    let deg = f.degree().expect("nonzero polynomial");
    assert_eq!(deg % p, 0, "degree of a p-th power is divisible by p");
    let coeffs = (0..=deg / p)
        .map(|j| frobenius_root(&f.coeff(j * p), 1).expect("finite field"))
        .collect();
    for i in (0..=deg).filter(|i| i % p != 0) {
        assert!(f.coeff(i).is_zero(), "p-th power has no stray terms");
    }
    UnivariatePoly::new(field, coeffs)
}

// ---- finite fields: distinct-degree + equal-degree splitting ----

fn finite_parts(monic: &UnivariatePoly, seed: u64, parts: &mut Vec<FactorPart>) {
    let field = monic.field().clone();
    let k = field.finite().expect("finite field path").clone();
    let p = k.characteristic();
    let mut q = BigUint::one();
    for _ in 0..k.degree() {
        q *= p;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (sqf, mult) in squarefree_decomposition(monic) {
        for (prod, d) in distinct_degree(&sqf, &q) {
            let mut irreducibles = Vec::new();
            equal_degree_split(&prod, d, &q, p, k.degree(), &mut rng, &mut irreducibles);
            for g in irreducibles {
                parts.push(FactorPart { poly: g, multiplicity: mult, irreducible: true });
            }
        }
    }
}

/// Split monic squarefree `g` into products of irreducibles of equal degree.
fn distinct_degree(g: &UnivariatePoly, q: &BigUint) -> Vec<(UnivariatePoly, usize)> {
    let mut g = g.clone();
    let x = UnivariatePoly::x(g.field().clone());
    let mut h = x.rem(&g); // x^(q^0) mod g
    let mut out = Vec::new();
    let mut d = 0usize;
    while g.degree().is_some_and(|deg| deg >= 2 * (d + 1)) {
        d += 1;
        h = h.powmod(q, &g);
        let gd = g.gcd(&h.sub(&x));
        if gd.degree() != Some(0) {
            out.push((gd.clone(), d));
            g = g.div_exact(&gd);
            h = h.rem(&g);
        }
    }
    if let Some(deg) = g.degree().filter(|&deg| deg > 0) {
        out.push((g, deg));
    }
    out
}

/// Split a monic squarefree product of irreducibles of degree `d` into the
/// irreducibles themselves (Cantor-Zassenhaus; trace splitting in char 2).
fn equal_degree_split(
    g: &UnivariatePoly,
    d: usize,
    q: &BigUint,
    p: u64,
    field_degree: usize,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<UnivariatePoly>,
) {
    if g.degree() == Some(d) {
        out.push(g.clone());
        return;
    }
    let field = g.field().clone();
    let one = UnivariatePoly::one(field.clone());
    loop {
        let a = random_poly(&field, g.degree().unwrap(), rng);
        if a.degree().is_none_or(|deg| deg == 0) {
            continue;
        }
        let common = g.gcd(&a);
        let splitter = if common.degree() != Some(0) {
            common
        } else if p == 2 {
            // trace map down to F_2: a + a^2 + a^4 + ... over F_{q^d}
            let reps = field_degree * d;
            let mut power = a.rem(g);
            let mut trace = power.clone();
            for _ in 1..reps {
                power = power.mul(&power).rem(g);
                trace = trace.add(&power);
            }
            g.gcd(&trace)
        } else {
            // a^((q^d - 1)/2) is +-1 modulo every irreducible factor
            let mut qd = BigUint::one();
            for _ in 0..d {
                qd *= q;
            }
            let e = (qd - 1u32) / 2u32;
            let b = a.powmod(&e, g);
            g.gcd(&b.sub(&one))
        };
        let ds = splitter.degree();
        if ds != Some(0) && ds != g.degree() {
            let rest = g.div_exact(&splitter);
            equal_degree_split(&splitter, d, q, p, field_degree, rng, out);
            equal_degree_split(&rest, d, q, p, field_degree, rng, out);
            return;
        }
    }
}

fn random_poly(field: &FieldDescriptor, deg_below: usize, rng: &mut ChaCha8Rng) -> UnivariatePoly {
    let k = field.finite().expect("finite field path");
    let p = k.characteristic();
    let r = k.degree();
    let coeffs = (0..deg_below)
        .map(|_| {
            let digits: Vec<u64> = (0..r).map(|_| rng.gen_range(0..p)).collect();
            Scalar::Fin { field: Arc::clone(k), coeffs: digits }
        })
        .collect();
    UnivariatePoly::new(field.clone(), coeffs)
}

// ---- rationals: squarefree split + rational roots ----

fn rational_parts(monic: &UnivariatePoly, parts: &mut Vec<FactorPart>) {
    let field = monic.field().clone();
    for (sqf, mult) in squarefree_decomposition(monic) {
        let (roots, residual) = split_rational_roots(&sqf);
        for root in roots {
            let linear = UnivariatePoly::new(field.clone(), vec![root.neg(), field.one()]);
            parts.push(FactorPart { poly: linear, multiplicity: mult, irreducible: true });
        }
        if let Some(res) = residual {
            let deg = res.degree().expect("residual is nonconstant");
            assert!(deg >= 2, "a monic linear factor always has a rational root");
            // degree 2 or 3 without rational roots cannot factor further
            parts.push(FactorPart { poly: res, multiplicity: mult, irreducible: deg <= 3 });
        }
    }
}

/// All rational roots of a monic squarefree rational polynomial, plus the
/// rootless cofactor if it is nonconstant.
fn split_rational_roots(g: &UnivariatePoly) -> (Vec<Scalar>, Option<UnivariatePoly>) {
    let field = g.field().clone();
    let mut g = g.clone();
    let mut roots = Vec::new();
    if g.coeff(0).is_zero() {
        // squarefree, so x divides exactly once
        roots.push(field.zero());
        g = g.div_exact(&UnivariatePoly::x(field.clone()));
    }
    if g.degree() == Some(0) {
        return (roots, None);
    }
    // clear denominators to a primitive integer polynomial; the rational
    // roots p/q in lowest terms then satisfy p | c_0 and q | c_n
    let ints = integer_form(&g);
    let c0 = ints.first().expect("nonzero").clone();
    let cn = ints.last().expect("nonzero").clone();
    let mut candidates: Vec<BigRational> = Vec::new();
    for dp in positive_divisors(&c0) {
        for dq in positive_divisors(&cn) {
            candidates.push(BigRational::new(dp.clone(), dq.clone()));
            candidates.push(BigRational::new(-dp.clone(), dq));
        }
    }
    for cand in candidates {
        if g.degree() == Some(0) {
            break;
        }
        let cand = Scalar::Rat(cand);
        if g.evaluate(&cand).is_zero() {
            let linear = UnivariatePoly::new(field.clone(), vec![cand.neg(), field.one()]);
            g = g.div_exact(&linear);
            roots.push(cand);
        }
    }
    let residual = if g.degree() == Some(0) { None } else { Some(g) };
    (roots, residual)
}

/// Scale a rational polynomial to integer coefficients and divide out the
/// content; roots are unchanged.
fn integer_form(g: &UnivariatePoly) -> Vec<BigInt> {
    let rat = |s: &Scalar| match s {
        Scalar::Rat(r) => r.clone(),
        _ => unreachable!("rational path"),
    };
    let mut lcm = BigInt::one();
    for c in g.coeffs() {
        lcm = lcm.lcm(rat(c).denom());
    }
    let mut ints: Vec<BigInt> = g
        .coeffs()
        .iter()
        .map(|c| (rat(c) * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let mut content = BigInt::zero();
    for c in &ints {
        content = content.gcd(c);
    }
    for c in ints.iter_mut() {
        *c /= &content;
    }
    ints
}

/// Positive divisors of a nonzero integer, via trial-division factoring.
/// Panics if a prime factor is out of reach of the trial bound: a wrong
/// divisor list would silently drop rational roots.
fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut m = n.magnitude().clone();
    assert!(!m.is_zero(), "divisors of zero requested");
    let mut prime_powers: Vec<(u64, u32)> = Vec::new();
    let mut d = 2u64;
    while d <= TRIAL_BOUND && BigUint::from(d) * BigUint::from(d) <= m {
        let mut e = 0u32;
        while (&m % d).is_zero() {
            m /= d;
            e += 1;
        }
        if e > 0 {
            prime_powers.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        // no factor up to the bound, so m is prime if it is below bound^2
        let small = m.to_u64().filter(|&v| v <= TRIAL_BOUND * TRIAL_BOUND);
        match small {
            Some(v) => prime_powers.push((v, 1)),
            None => panic!(
                "rational root search: coefficient has a prime factor above {}^2",
                TRIAL_BOUND
            ),
        }
    }
    let mut divisors = vec![BigInt::one()];
    for (p, e) in prime_powers {
        let base: Vec<BigInt> = divisors.clone();
        let mut power = BigInt::one();
        for _ in 0..e {
            power *= p;
            for b in &base {
                divisors.push(b * &power);
            }
        }
        assert!(divisors.len() <= DIVISOR_CAP, "rational root search: too many divisors");
    }
    divisors
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(spec: &str, coeffs: &[i64]) -> UnivariatePoly {
        let k = FieldDescriptor::parse_spec(spec).unwrap();
        UnivariatePoly::from_ints(&k, coeffs)
    }

    fn check_product(f: &UnivariatePoly, fac: &Factorization) {
        assert_eq!(&fac.product(), f, "factorization multiplies back to the input");
    }

    #[test]
    fn f5_quadratic_times_square() {
        // (x+2)^2 (x^2+2) = x^4 + 4x^3 + x^2 + 3x + 3 over F_5,
        // and x^2+2 is irreducible since -2 = 3 is not a square mod 5
        let f = poly("F5", &[3, 3, 1, 4, 1]);
        let fac = factor_univariate(&f, 0);
        check_product(&f, &fac);
        let k = f.field();
        assert_eq!(fac.parts.len(), 2);
        assert_eq!(fac.parts[0].poly, UnivariatePoly::from_ints(k, &[2, 1]));
        assert_eq!(fac.parts[0].multiplicity, 2);
        assert_eq!(fac.parts[1].poly, UnivariatePoly::from_ints(k, &[2, 0, 1]));
        assert_eq!(fac.parts[1].multiplicity, 1);
        assert!(fac.parts.iter().all(|p| p.irreducible));
    }

    #[test]
    fn f2_square_of_irreducible() {
        // x^4 + x^2 + 1 = (x^2 + x + 1)^2 over F_2
        let f = poly("F2", &[1, 0, 1, 0, 1]);
        let fac = factor_univariate(&f, 7);
        check_product(&f, &fac);
        assert_eq!(fac.parts.len(), 1);
        assert_eq!(fac.parts[0].poly, UnivariatePoly::from_ints(f.field(), &[1, 1, 1]));
        assert_eq!(fac.parts[0].multiplicity, 2);
    }

    #[test]
    fn f9_splits_x2_plus_1() {
        // over F_9 = F_3[t]/(t^2+1) the roots of x^2+1 are t and -t = 2t
        let k = FieldDescriptor::parse_spec("F9:t^2+1").unwrap();
        let f = UnivariatePoly::from_ints(&k, &[1, 0, 1]);
        let fac = factor_univariate(&f, 0);
        check_product(&f, &fac);
        let t = k.generator().unwrap();
        let roots = fac.roots();
        assert_eq!(roots.len(), 2);
        let values: Vec<Scalar> = roots.iter().map(|(r, _)| r.clone()).collect();
        assert!(values.contains(&t));
        assert!(values.contains(&t.neg()));
    }

    #[test]
    fn f3_field_polynomial_splits_into_all_small_irreducibles() {
        // x^9 - x over F_3 is the product of every monic irreducible of
        // degree dividing 2: three linear, three quadratic
        let f = poly("F3", &[0, 2, 0, 0, 0, 0, 0, 0, 0, 1]);
        let fac = factor_univariate(&f, 3);
        check_product(&f, &fac);
        assert_eq!(fac.parts.len(), 6);
        let degrees: Vec<usize> = fac.parts.iter().map(|p| p.poly.degree().unwrap()).collect();
        assert_eq!(degrees, vec![1, 1, 1, 2, 2, 2]);
        assert!(fac.parts.iter().all(|p| p.multiplicity == 1 && p.irreducible));
        for p in &fac.parts {
            assert!(p.poly.is_irreducible().unwrap(), "{}", p.poly);
        }
    }

    #[test]
    fn f2_two_cubics_need_equal_degree_splitting() {
        // (x^3+x+1)(x^3+x^2+1) = x^6+x^5+x^4+x^3+x^2+x+1 over F_2
        let f = poly("F2", &[1, 1, 1, 1, 1, 1, 1]);
        let fac = factor_univariate(&f, 11);
        check_product(&f, &fac);
        let k = f.field();
        assert_eq!(fac.parts.len(), 2);
        let polys: Vec<&UnivariatePoly> = fac.parts.iter().map(|p| &p.poly).collect();
        assert!(polys.contains(&&UnivariatePoly::from_ints(k, &[1, 1, 0, 1])));
        assert!(polys.contains(&&UnivariatePoly::from_ints(k, &[1, 0, 1, 1])));
    }

    #[test]
    fn f4_equal_degree_splitting_in_char_two_extension() {
        // x^2 + x + 1 = (x + t)(x + t + 1) over F_4 = F_2[t]/(t^2+t+1)
        let k = FieldDescriptor::parse_spec("F4:t^2+t+1").unwrap();
        let f = UnivariatePoly::from_ints(&k, &[1, 1, 1]);
        let fac = factor_univariate(&f, 0);
        check_product(&f, &fac);
        assert_eq!(fac.roots().len(), 2);
    }

    #[test]
    fn f3_cube_uses_frobenius_descent() {
        // (x^3 + 2x)^3 = x^9 + 2x^3 over F_3 (freshman's dream), and
        // x^3 + 2x = x(x+1)(x+2)
        let f = poly("F3", &[0, 0, 0, 2, 0, 0, 0, 0, 0, 1]);
        let fac = factor_univariate(&f, 0);
        check_product(&f, &fac);
        assert_eq!(fac.parts.len(), 3);
        assert!(fac.parts.iter().all(|p| p.multiplicity == 3));
        let roots = fac.roots();
        let k = f.field();
        let values: Vec<Scalar> = roots.iter().map(|(r, _)| r.clone()).collect();
        assert_eq!(values, vec![k.integer(0), k.integer(1), k.integer(2)]);
    }

    #[test]
    fn rational_roots_with_unit_and_zero_root() {
        // 2x^3 - 2x = 2 x (x-1)(x+1)
        let f = poly("Q", &[0, -2, 0, 2]);
        let fac = factor_univariate(&f, 0);
        check_product(&f, &fac);
        let q = FieldDescriptor::rationals();
        assert_eq!(fac.unit, q.integer(2));
        let roots = fac.roots();
        let values: Vec<Scalar> = roots.iter().map(|(r, _)| r.clone()).collect();
        assert_eq!(values, vec![q.integer(-1), q.integer(0), q.integer(1)]);
    }

    #[test]
    fn rational_mixed_multiplicities() {
        // (x-2)^3 (x+1) = x^4 - 5x^3 + 6x^2 + 4x - 8
        let f = poly("Q", &[-8, 4, 6, -5, 1]);
        let fac = factor_univariate(&f, 0);
        check_product(&f, &fac);
        let mut roots = fac.roots();
        roots.sort_by_key(|(_, m)| *m);
        let q = FieldDescriptor::rationals();
        assert_eq!(roots, vec![(q.integer(-1), 1), (q.integer(2), 3)]);
    }

    #[test]
    fn rational_quadratic_residual_is_certified() {
        // (x^2+1)^2 (x - 1/2): the quadratic has no rational roots and is
        // certified irreducible by degree
        let q = FieldDescriptor::rationals();
        let half = Scalar::Rat(BigRational::new(BigInt::from(1), BigInt::from(2)));
        let linear = UnivariatePoly::new(q.clone(), vec![half.neg(), q.one()]);
        let quad = UnivariatePoly::from_ints(&q, &[1, 0, 1]);
        let f = quad.pow(2).mul(&linear);
        let fac = factor_univariate(&f, 0);
        check_product(&f, &fac);
        assert_eq!(fac.parts.len(), 2);
        let quad_part = fac.parts.iter().find(|p| p.poly == quad).unwrap();
        assert_eq!(quad_part.multiplicity, 2);
        assert!(quad_part.irreducible);
        assert_eq!(fac.roots(), vec![(half, 1)]);
    }

    #[test]
    fn rational_quartic_residual_is_not_certified() {
        // x^4 + x + 1 has no rational roots; we leave it unsplit and make no
        // irreducibility claim either way
        let f = poly("Q", &[1, 1, 0, 0, 1]);
        let fac = factor_univariate(&f, 0);
        check_product(&f, &fac);
        assert_eq!(fac.parts.len(), 1);
        assert!(!fac.parts[0].irreducible);
        assert_eq!(fac.parts[0].poly.degree(), Some(4));
    }

    #[test]
    fn seed_does_not_change_the_result() {
        let f = poly("F5", &[3, 1, 4, 1, 0, 2, 1]);
        let base = factor_univariate(&f, 0);
        check_product(&f, &base);
        for seed in [1, 42, 0xDEAD_BEEF] {
            assert_eq!(factor_univariate(&f, seed), base);
        }
    }

    #[test]
    fn divisor_enumeration() {
        let divs = positive_divisors(&BigInt::from(-12));
        let mut vals: Vec<i64> = divs.iter().map(|d| d.to_i64().unwrap()).collect();
        vals.sort();
        assert_eq!(vals, vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(positive_divisors(&BigInt::one()).len(), 1);
    }
}
