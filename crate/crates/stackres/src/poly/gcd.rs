//! Radicals of curve polynomials over perfect fields.
//!
//! The radical keeps each irreducible factor exactly once.  Over the
//! rationals it is `f / gcd(f, f_x, f_y)`.  In characteristic p that quotient
//! misses factors whose multiplicity p divides, so those are peeled off as a
//! p-th power and handled by recursion — the coefficient fields here are
//! perfect, so p-th roots of scalars always exist.
//!
//! The bivariate gcds run as primitive polynomial remainder sequences over
//! `k[x][y]`: pseudo-division keeps everything in polynomial arithmetic, and
//! contents are plain univariate gcds.

use super::MPoly;
use crate::field::{
    frobenius_root, squarefree_decomposition, FieldDescriptor, FiniteField, Scalar, UnivariatePoly,
};

/// The radical (squarefree part) of a nonzero polynomial in at most two
/// occurring variables, normalized to leading coefficient 1 in graded lex.
pub fn radical(f: &MPoly) -> MPoly {
    assert!(!f.is_zero(), "radical of the zero polynomial");
    let occurring = f.occurring_vars();
    let vars: Vec<&str> = f.vars().iter().map(|s| s.as_str()).collect();
    match occurring.len() {
        0 => MPoly::constant(f.field().clone(), &vars, f.field().one()),
        1 => {
            let uni = f.to_univariate(occurring[0]).expect("single occurring variable");
            let mut acc = UnivariatePoly::one(f.field().clone());
            for (part, _) in squarefree_decomposition(&uni.monic()) {
                acc = acc.mul(&part);
            }
            MPoly::from_univariate(&acc, &vars, occurring[0])
        }
        2 => radical_bivariate(f, occurring[0], occurring[1]),
        n => panic!("radical supports curves in at most two variables, found {n}"),
    }
}

fn radical_bivariate(f: &MPoly, vi: usize, vj: usize) -> MPoly {
    let p = f.field().characteristic();
    let fx = f.derivative(vi);
    let fy = f.derivative(vj);
    if fx.is_zero() && fy.is_zero() {
        // f is a p-th power outright
        assert!(p > 0, "a nonconstant polynomial over Q has a partial derivative");
        return radical(&mpoly_pth_root(f));
    }
    let c = curve_gcd(&curve_gcd(f, &fx, vi, vj), &fy, vi, vj);
    // w collects every factor whose multiplicity p does not divide, once
    let w = f.div_exact(&c);
    // peel w-factors off f until only the p-th-power part is left
    let mut b = f.clone();
    loop {
        let d = curve_gcd(&b, &w, vi, vj);
        if d.is_constant() {
            break;
        }
        b = b.div_exact(&d);
    }
    if b.is_constant() {
        return normalize(&w);
    }
    assert!(p > 0, "characteristic zero leaves no p-th-power residue");
    normalize(&w.mul(&radical(&mpoly_pth_root(&b))))
}

/// Coefficient-wise p-th root of a polynomial that is a p-th power.
fn mpoly_pth_root(f: &MPoly) -> MPoly {
    let p = f.field().characteristic() as u32;
    let vars: Vec<&str> = f.vars().iter().map(|s| s.as_str()).collect();
    let terms = f.terms().map(|(exps, c)| {
        let reduced: Vec<u32> = exps
            .iter()
            .map(|&a| {
                assert_eq!(a % p, 0, "p-th power has exponents divisible by p");
                a / p
            })
            .collect();
        (reduced, frobenius_root(c, 1).expect("perfect field"))
    });
    MPoly::from_terms(f.field().clone(), &vars, terms)
}

fn normalize(f: &MPoly) -> MPoly {
    let (_, lead) = f.leading_term().expect("nonzero");
    f.mul_scalar(&lead.inv().expect("leading coefficient inverts"))
}

/// Gcd of two curve polynomials, with `gcd(f, 0) = f`; the result is
/// normalized to leading coefficient 1.
fn curve_gcd(f: &MPoly, g: &MPoly, vi: usize, vj: usize) -> MPoly {
    if f.is_zero() {
        return normalize(g);
    }
    if g.is_zero() {
        return normalize(f);
    }
    let one = MPoly::constant(f.field().clone(), &f.vars().iter().map(|s| s.as_str()).collect::<Vec<_>>(), f.field().one());
    if f.is_constant() || g.is_constant() {
        return one;
    }
    let a = BiPoly::from_mpoly(f, vi, vj);
    let b = BiPoly::from_mpoly(g, vi, vj);
    let content = a.content().gcd(&b.content());
    if content.degree() == Some(0) && certified_coprime(&a, &b) {
        return one;
    }
    let gcd_pp = primitive_prs(a.primitive_part(), b.primitive_part());
    let result = gcd_pp.scale(&content).to_mpoly(f, vi, vj);
    normalize(&result)
}

/// Try to prove `gcd(a, b)` is a unit without running the remainder
/// sequence.  Any common divisor d satisfies, for a point c where neither
/// leading coefficient vanishes, deg d(c, ·) = deg_y d, and d(c, ·) divides
/// the univariate gcd of a(c, ·) and b(c, ·) — so a constant gcd there
/// forces deg_y d = 0, i.e. d divides both contents.  The caller has already
/// checked the contents are coprime, so a single good evaluation certifies
/// the result.  Failure to find one just means the slow path runs.
fn certified_coprime(a: &BiPoly, b: &BiPoly) -> bool {
    let field = a.lead().field().clone();
    match field.finite() {
        None => {
            let candidates =
                (0..8).map(|k| field.integer(if k % 2 == 0 { k / 2 } else { -(k / 2) - 1 }));
            coprime_at_some_point(a, b, candidates)
        }
        Some(k) => {
            if coprime_at_some_point(a, b, k.elements().take(32)) {
                return true;
            }
            // a small field may have no usable point at all; retry over an
            // extension large enough that one almost surely exists
            if k.degree() > 1 || k.size() >= 16 {
                return false;
            }
            let p = k.characteristic();
            let r = (1..).find(|&r| (k.size() as u64).pow(r) >= 16).expect("sizes grow");
            let Ok(ext) = FiniteField::canonical(p, r as usize) else {
                return false;
            };
            let ext = FieldDescriptor::Finite(ext);
            let lift = |row: &UnivariatePoly| -> UnivariatePoly {
                let coeffs = row
                    .coeffs()
                    .iter()
                    .map(|c| match c {
                        Scalar::Fin { coeffs, .. } => ext.integer(coeffs[0] as i64),
                        Scalar::Rat(_) => unreachable!("finite base field"),
                    })
                    .collect();
                UnivariatePoly::new(ext.clone(), coeffs)
            };
            let la = BiPoly::trim(a.coeffs.iter().map(&lift).collect());
            let lb = BiPoly::trim(b.coeffs.iter().map(&lift).collect());
            let points = ext.finite().expect("finite extension").elements().take(32);
            coprime_at_some_point(&la, &lb, points)
        }
    }
}

/// The evaluation core of [`certified_coprime`]: one good point suffices.
fn coprime_at_some_point(a: &BiPoly, b: &BiPoly, points: impl Iterator<Item = Scalar>) -> bool {
    for c in points {
        if a.lead().evaluate(&c).is_zero() || b.lead().evaluate(&c).is_zero() {
            continue;
        }
        if a.evaluate_inner(&c).gcd(&b.evaluate_inner(&c)).degree() == Some(0) {
            return true;
        }
    }
    false
}

/// Primitive-PRS gcd of two primitive polynomials in `k[x][y]`.
fn primitive_prs(mut a: BiPoly, mut b: BiPoly) -> BiPoly {
    if a.deg() < b.deg() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        let r = pseudo_rem(&a, &b);
        a = std::mem::replace(&mut b, r.primitive_part());
    }
    a
}

/// Pseudo-remainder: repeatedly cancel the lead of `a` after scaling by the
/// lead of `b`, staying inside `k[x][y]`.
fn pseudo_rem(a: &BiPoly, b: &BiPoly) -> BiPoly {
    let db = b.deg();
    let lcb = b.lead().clone();
    let mut r = a.clone();
    while !r.is_zero() && r.deg() >= db {
        let shift = r.deg() - db;
        let lcr = r.lead().clone();
        r = r.scale(&lcb).sub(&b.shift_scale(shift, &lcr));
    }
    r
}

/// A bivariate polynomial as a dense vector over `k[x]`: `coeffs[k]` is the
/// coefficient of `y^k`.  Trailing zeros are trimmed.
#[derive(Debug, Clone)]
struct BiPoly {
    coeffs: Vec<UnivariatePoly>,
}

impl BiPoly {
    fn trim(mut coeffs: Vec<UnivariatePoly>) -> BiPoly {
        while coeffs.last().is_some_and(UnivariatePoly::is_zero) {
            coeffs.pop();
        }
        BiPoly { coeffs }
    }

    fn from_mpoly(f: &MPoly, vi: usize, vj: usize) -> BiPoly {
        let field = f.field().clone();
        let dy = f.degree_in(vj).unwrap_or(0) as usize;
        let dx = f.degree_in(vi).unwrap_or(0) as usize;
        let mut rows = vec![vec![field.zero(); dx + 1]; dy + 1];
        for (exps, c) in f.terms() {
            rows[exps[vj] as usize][exps[vi] as usize] = c.clone();
        }
        BiPoly::trim(
            rows.into_iter().map(|row| UnivariatePoly::new(field.clone(), row)).collect(),
        )
    }

    fn to_mpoly(&self, template: &MPoly, vi: usize, vj: usize) -> MPoly {
        let vars: Vec<&str> = template.vars().iter().map(|s| s.as_str()).collect();
        let terms = self.coeffs.iter().enumerate().flat_map(|(j, row)| {
            let vars_len = vars.len();
            row.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(
                move |(i, c)| {
                    let mut exps = vec![0u32; vars_len];
                    exps[vi] = i as u32;
                    exps[vj] = j as u32;
                    (exps, c.clone())
                },
            )
        });
        MPoly::from_terms(template.field().clone(), &vars, terms)
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn lead(&self) -> &UnivariatePoly {
        self.coeffs.last().expect("nonzero")
    }

    fn sub(&self, other: &BiPoly) -> BiPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i);
                let b = other.coeffs.get(i);
                match (a, b) {
                    (Some(a), Some(b)) => a.sub(b),
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.neg(),
                    (None, None) => unreachable!(),
                }
            })
            .collect();
        BiPoly::trim(coeffs)
    }

    fn scale(&self, c: &UnivariatePoly) -> BiPoly {
        BiPoly::trim(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    /// `c * y^shift * self`.
    fn shift_scale(&self, shift: usize, c: &UnivariatePoly) -> BiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let field = self.coeffs[0].field().clone();
        let mut coeffs = vec![UnivariatePoly::zero(field); shift];
        coeffs.extend(self.coeffs.iter().map(|a| a.mul(c)));
        BiPoly::trim(coeffs)
    }

    /// Set the inner variable to `c`, leaving a univariate polynomial in the
    /// outer one.
    fn evaluate_inner(&self, c: &Scalar) -> UnivariatePoly {
        let field = c.field();
        UnivariatePoly::new(field, self.coeffs.iter().map(|a| a.evaluate(c)).collect())
    }

    /// Monic gcd of the y-coefficients.
    fn content(&self) -> UnivariatePoly {
        let mut acc = self.coeffs.first().cloned().expect("nonzero").monic();
        for c in &self.coeffs[1..] {
            acc = acc.gcd(c);
        }
        acc
    }

    fn primitive_part(&self) -> BiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let content = self.content();
        BiPoly::trim(self.coeffs.iter().map(|c| c.div_exact(&content)).collect())
    }
}
