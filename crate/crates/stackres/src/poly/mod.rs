//! Sparse multivariate polynomials with exact coefficients.
//!
//! A polynomial carries its coefficient field and its variable names; terms
//! live in a `BTreeMap` from exponent vectors to nonzero scalars, so equality
//! and iteration order are canonical.  Rings are small by design: the curves
//! use two variables and the blow-up transforms at most four.

mod gcd;
mod newton;
mod parse;

pub use gcd::radical;
pub use newton::{pareto_minimal, NewtonPolygon};
pub use parse::{parse_poly, ParseError};

use crate::field::{Embedding, FieldDescriptor, Scalar, UnivariatePoly};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly {
    field: FieldDescriptor,
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, Scalar>,
}

impl MPoly {
    pub fn zero(field: FieldDescriptor, vars: &[&str]) -> MPoly {
        MPoly {
            field,
            vars: vars.iter().map(|v| v.to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: FieldDescriptor, vars: &[&str], c: Scalar) -> MPoly {
        let mut out = MPoly::zero(field, vars);
        let exps = vec![0; out.vars.len()];
        out.insert_term(exps, c);
        out
    }

    pub fn variable(field: FieldDescriptor, vars: &[&str], index: usize) -> MPoly {
        let mut out = MPoly::zero(field.clone(), vars);
        let mut exps = vec![0; out.vars.len()];
        exps[index] = 1;
        out.insert_term(exps, field.one());
        out
    }

    /// Build from explicit terms; zero coefficients are dropped, duplicate
    /// exponent vectors are summed.
    pub fn from_terms(
        field: FieldDescriptor,
        vars: &[&str],
        terms: impl IntoIterator<Item = (Vec<u32>, Scalar)>,
    ) -> MPoly {
        let mut out = MPoly::zero(field, vars);
        for (exps, c) in terms {
            out.insert_term(exps, c);
        }
        out
    }

    fn insert_term(&mut self, exps: Vec<u32>, c: Scalar) {
        assert_eq!(exps.len(), self.vars.len(), "exponent arity mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    e.insert(sum);
                }
            }
        }
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&a| a == 0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> Scalar {
        self.terms.get(exps).cloned().unwrap_or_else(|| self.field.zero())
    }

    fn assert_same_ring(&self, other: &MPoly) {
        assert_eq!(self.field, other.field, "polynomials over different fields");
        assert_eq!(self.vars, other.vars, "polynomials in different rings");
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        self.assert_same_ring(other);
        let mut out = self.clone();
        for (exps, c) in other.terms() {
            out.insert_term(exps.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            field: self.field.clone(),
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        self.assert_same_ring(other);
        let mut out = MPoly::zero(self.field.clone(), &self.var_refs());
        for (ea, ca) in self.terms() {
            for (eb, cb) in other.terms() {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(&a, &b)| a + b).collect();
                out.insert_term(exps, ca.mul(cb));
            }
        }
        out
    }

    pub fn mul_scalar(&self, c: &Scalar) -> MPoly {
        if c.is_zero() {
            return MPoly { field: self.field.clone(), vars: self.vars.clone(), terms: BTreeMap::new() };
        }
        MPoly {
            field: self.field.clone(),
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a.mul(c))).collect(),
        }
    }

    /// Multiply by the monomial `c * x^exps`.
    pub fn mul_monomial(&self, exps: &[u32], c: &Scalar) -> MPoly {
        assert_eq!(exps.len(), self.vars.len());
        let mut out = MPoly::zero(self.field.clone(), &self.var_refs());
        for (ea, ca) in self.terms() {
            let e: Vec<u32> = ea.iter().zip(exps).map(|(&a, &b)| a + b).collect();
            out.insert_term(e, ca.mul(c));
        }
        out
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::constant(self.field.clone(), &self.var_refs(), self.field.one());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    fn var_refs(&self) -> Vec<&str> {
        self.vars.iter().map(|s| s.as_str()).collect()
    }

    /// Replace variable `index` by a polynomial in the same ring.
    pub fn substitute(&self, index: usize, replacement: &MPoly) -> MPoly {
        self.assert_same_ring(replacement);
        let max_e = self.terms.keys().map(|e| e[index]).max().unwrap_or(0);
        let mut powers = Vec::with_capacity(max_e as usize + 1);
        powers.push(MPoly::constant(self.field.clone(), &self.var_refs(), self.field.one()));
        for i in 1..=max_e as usize {
            powers.push(powers[i - 1].mul(replacement));
        }
        let mut out = MPoly::zero(self.field.clone(), &self.var_refs());
        for (exps, c) in self.terms() {
            let mut rest = exps.clone();
            let e = std::mem::replace(&mut rest[index], 0);
            out = out.add(&powers[e as usize].mul_monomial(&rest, c));
        }
        out
    }

    /// `x_index -> x_index + c`.
    pub fn translate(&self, index: usize, c: &Scalar) -> MPoly {
        if c.is_zero() {
            return self.clone();
        }
        let shifted = MPoly::variable(self.field.clone(), &self.var_refs(), index)
            .add(&MPoly::constant(self.field.clone(), &self.var_refs(), c.clone()));
        self.substitute(index, &shifted)
    }

    /// Set variable `index` to a scalar value.
    pub fn set_var(&self, index: usize, c: &Scalar) -> MPoly {
        let constant = MPoly::constant(self.field.clone(), &self.var_refs(), c.clone());
        self.substitute(index, &constant)
    }

    /// Evaluate at a full point.
    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.vars.len());
        let mut acc = self.field.zero();
        for (exps, c) in self.terms() {
            let mut term = c.clone();
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&point[i].pow(e as u64));
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    pub fn derivative(&self, index: usize) -> MPoly {
        let mut out = MPoly::zero(self.field.clone(), &self.var_refs());
        for (exps, c) in self.terms() {
            if exps[index] == 0 {
                continue;
            }
            let mut e = exps.clone();
            let a = e[index];
            e[index] -= 1;
            out.insert_term(e, c.mul(&self.field.integer(a as i64)));
        }
        out
    }

    /// Total degree of the lowest-degree terms: the multiplicity at the
    /// origin.  `None` for the zero polynomial.
    pub fn order(&self) -> Option<u64> {
        self.terms.keys().map(|e| e.iter().map(|&a| a as u64).sum()).min()
    }

    /// Minimum of `sum w_i * a_i` over the support.  `None` for zero.
    pub fn weighted_order(&self, w: &[u64]) -> Option<u64> {
        assert_eq!(w.len(), self.vars.len());
        self.terms
            .keys()
            .map(|e| e.iter().zip(w).map(|(&a, &wi)| a as u64 * wi).sum())
            .min()
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|e| e.iter().map(|&a| a as u64).sum()).max()
    }

    pub fn degree_in(&self, index: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[index]).max()
    }

    /// Terms of minimal total degree.
    pub fn initial_form(&self) -> MPoly {
        match self.order() {
            None => self.clone(),
            Some(ord) => self.filter_terms(|e| e.iter().map(|&a| a as u64).sum::<u64>() == ord),
        }
    }

    /// Terms of minimal `w`-weighted degree.
    pub fn weighted_initial(&self, w: &[u64]) -> MPoly {
        match self.weighted_order(w) {
            None => self.clone(),
            Some(ord) => self.filter_terms(|e| {
                e.iter().zip(w).map(|(&a, &wi)| a as u64 * wi).sum::<u64>() == ord
            }),
        }
    }

    pub fn filter_terms(&self, mut keep: impl FnMut(&[u32]) -> bool) -> MPoly {
        MPoly {
            field: self.field.clone(),
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Indices of variables that actually occur.
    pub fn occurring_vars(&self) -> Vec<usize> {
        (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|e| e[i] > 0))
            .collect()
    }

    /// Strip the largest monomial factor: returns the quotient and the
    /// per-variable exponents removed.
    pub fn divide_out_variables(&self) -> (MPoly, Vec<u32>) {
        if self.is_zero() {
            return (self.clone(), vec![0; self.vars.len()]);
        }
        let mut mins = vec![u32::MAX; self.vars.len()];
        for exps in self.terms.keys() {
            for (m, &a) in mins.iter_mut().zip(exps) {
                *m = (*m).min(a);
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().zip(&mins).map(|(&a, &m)| a - m).collect(), c.clone()))
            .collect();
        (
            MPoly { field: self.field.clone(), vars: self.vars.clone(), terms },
            mins,
        )
    }

    /// Graded-lex leading term (highest total degree, ties by exponent
    /// vector, first variable most significant).
    fn leading_term(&self) -> Option<(Vec<u32>, Scalar)> {
        self.terms
            .iter()
            .max_by_key(|(e, _)| (e.iter().map(|&a| a as u64).sum::<u64>(), e.to_vec()))
            .map(|(e, c)| (e.clone(), c.clone()))
    }

    /// Exact division; panics if the division leaves a remainder (callers
    /// only divide by known factors).
    pub fn div_exact(&self, divisor: &MPoly) -> MPoly {
        self.assert_same_ring(divisor);
        let (dexp, dcoeff) = divisor.leading_term().expect("division by zero polynomial");
        let dinv = dcoeff.inv().expect("nonzero leading coefficient");
        let mut rem = self.clone();
        let mut quot = MPoly::zero(self.field.clone(), &self.var_refs());
        while let Some((rexp, rcoeff)) = rem.leading_term() {
            let exps: Vec<u32> = rexp
                .iter()
                .zip(&dexp)
                .map(|(&a, &b)| a.checked_sub(b).expect("exact division: leading term not divisible"))
                .collect();
            let c = rcoeff.mul(&dinv);
            let mut move_term = MPoly::zero(self.field.clone(), &self.var_refs());
            move_term.insert_term(exps, c);
            quot = quot.add(&move_term);
            rem = rem.sub(&move_term.mul(divisor));
        }
        quot
    }

    /// View as univariate in variable `index`; all other variables must be
    /// absent.
    pub fn to_univariate(&self, index: usize) -> Option<UnivariatePoly> {
        for exps in self.terms.keys() {
            if exps.iter().enumerate().any(|(i, &a)| i != index && a > 0) {
                return None;
            }
        }
        let deg = self.degree_in(index).unwrap_or(0) as usize;
        let mut coeffs = vec![self.field.zero(); deg + 1];
        for (exps, c) in self.terms() {
            coeffs[exps[index] as usize] = c.clone();
        }
        Some(UnivariatePoly::new(self.field.clone(), coeffs))
    }

    /// Embed a univariate polynomial as a polynomial in variable `index`.
    pub fn from_univariate(f: &UnivariatePoly, vars: &[&str], index: usize) -> MPoly {
        let mut out = MPoly::zero(f.field().clone(), vars);
        for (i, c) in f.coeffs().iter().enumerate() {
            let mut exps = vec![0; vars.len()];
            exps[index] = i as u32;
            out.insert_term(exps, c.clone());
        }
        out
    }

    /// Apply a base-field embedding to every coefficient.
    pub fn map_field(&self, embedding: &Embedding) -> MPoly {
        MPoly {
            field: embedding.to_field().clone(),
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), embedding.map(c))).collect(),
        }
    }

    /// The same terms read in a different ring (used when a chart renames
    /// coordinates); arity must match.
    pub fn with_vars(&self, vars: &[&str]) -> MPoly {
        assert_eq!(vars.len(), self.vars.len(), "variable arity mismatch");
        MPoly {
            field: self.field.clone(),
            vars: vars.iter().map(|v| v.to_string()).collect(),
            terms: self.terms.clone(),
        }
    }

    /// Reorder the variables: entry `i` of `perm` is the old index that
    /// moves to position `i`.
    pub fn permute_vars(&self, perm: &[usize]) -> MPoly {
        assert_eq!(perm.len(), self.vars.len(), "permutation arity mismatch");
        let vars: Vec<String> = perm.iter().map(|&i| self.vars[i].clone()).collect();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (perm.iter().map(|&i| e[i]).collect(), c.clone()))
            .collect();
        MPoly { field: self.field.clone(), vars, terms }
    }

    /// Drop variables that do not occur, keeping the listed indices in order.
    pub fn restrict_vars(&self, keep: &[usize]) -> MPoly {
        for (i, _) in self.vars.iter().enumerate() {
            assert!(
                keep.contains(&i) || self.terms.keys().all(|e| e[i] == 0),
                "cannot drop an occurring variable"
            );
        }
        let vars: Vec<String> = keep.iter().map(|&i| self.vars[i].clone()).collect();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (keep.iter().map(|&i| e[i]).collect(), c.clone()))
            .collect();
        MPoly { field: self.field.clone(), vars, terms }
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut order: Vec<&Vec<u32>> = self.terms.keys().collect();
        order.sort_by_key(|e| {
            let deg: u64 = e.iter().map(|&a| a as u64).sum();
            (std::cmp::Reverse(deg), std::cmp::Reverse(e.to_vec()))
        });
        let mut out = String::new();
        for exps in order {
            let c = &self.terms[exps];
            let negative = match c {
                Scalar::Rat(r) => {
                    use num_traits::Signed;
                    r.is_negative()
                }
                _ => false,
            };
            if !out.is_empty() {
                out.push_str(if negative { " - " } else { " + " });
            } else if negative {
                out.push('-');
            }
            let mag = if negative { c.neg() } else { c.clone() };
            let monomial: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .map(|(i, &a)| {
                    if a == 1 {
                        self.vars[i].clone()
                    } else {
                        format!("{}^{}", self.vars[i], a)
                    }
                })
                .collect();
            if monomial.is_empty() {
                out.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    if mag.display_is_composite() {
                        out.push_str(&format!("({mag})*"));
                    } else {
                        out.push_str(&format!("{mag}*"));
                    }
                }
                out.push_str(&monomial.join("*"));
            }
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring_q() -> (FieldDescriptor, [&'static str; 2]) {
        (FieldDescriptor::rationals(), ["x", "y"])
    }

    fn parse_q(s: &str) -> MPoly {
        let (k, vars) = ring_q();
        parse_poly(s, &k, &vars).unwrap()
    }

    #[test]
    fn arithmetic_and_display() {
        let f = parse_q("y^2 - x^3");
        let g = parse_q("x*y + 1");
        assert_eq!(f.add(&g).to_string(), "-x^3 + x*y + y^2 + 1");
        assert_eq!(f.mul(&g).to_string(), "-x^4*y + x*y^3 - x^3 + y^2");
        assert_eq!(f.sub(&f), MPoly::zero(f.field().clone(), &["x", "y"]));
        assert_eq!(f.pow(2).to_string(), "x^6 - 2*x^3*y^2 + y^4");
    }

    #[test]
    fn orders_and_initial_forms() {
        let f = parse_q("y^3 + x^2*y^2 + x^5");
        assert_eq!(f.order(), Some(3));
        assert_eq!(f.initial_form(), parse_q("y^3"));
        // weight (1, 1) is the total degree; weight (3, 5) grades the cusp
        let g = parse_q("y^5 - x^3 + x*y^4");
        assert_eq!(g.weighted_order(&[5, 3]), Some(15));
        assert_eq!(g.weighted_initial(&[5, 3]), parse_q("y^5 - x^3"));
        assert_eq!(MPoly::zero(f.field().clone(), &["x", "y"]).order(), None);
    }

    #[test]
    fn substitution_is_a_ring_map() {
        let f = parse_q("y^2 - x^3");
        let g = parse_q("y + x^2");
        let h = parse_q("x*y");
        // (f*g) after substitution equals (f after) * (g after)
        let sub = |p: &MPoly| p.substitute(1, &h);
        assert_eq!(sub(&f.mul(&g)), sub(&f).mul(&sub(&g)));
        assert_eq!(sub(&f.add(&g)), sub(&f).add(&sub(&g)));
    }

    #[test]
    fn translate_shifts_the_origin() {
        let (k, _) = ring_q();
        let f = parse_q("y^2 - x^2*(x + 1)"); // node at origin, smooth at x = -1? keep simple
        let g = f.translate(0, &k.integer(-1));
        // g(x, y) = f(x - 1, y); the point (1, 0) of f becomes (... ) sanity:
        // f(1, 0) must equal g(2, 0)
        let at = |p: &MPoly, a: i64, b: i64| p.eval(&[k.integer(a), k.integer(b)]);
        assert_eq!(at(&f, 1, 0), at(&g, 2, 0));
        assert_eq!(at(&f, -1, 0), at(&g, 0, 0));
    }

    #[test]
    fn exact_division_round_trips() {
        let f = parse_q("y^2 - x^3 + x*y");
        let g = parse_q("x^2*y + y + 3");
        assert_eq!(f.mul(&g).div_exact(&g), f);
        assert_eq!(f.mul(&g).div_exact(&f), g);
    }

    #[test]
    fn divide_out_variables_strips_monomial_content() {
        let f = parse_q("x^2*y^3 + x^4*y^2");
        let (core, mins) = f.divide_out_variables();
        assert_eq!(mins, vec![2, 2]);
        assert_eq!(core, parse_q("y + x^2"));
    }

    #[test]
    fn univariate_round_trip() {
        let f = parse_q("y^3 + 2*y - 5");
        let uni = f.to_univariate(1).unwrap();
        assert_eq!(uni.to_string(), "x^3 + 2*x - 5");
        assert_eq!(MPoly::from_univariate(&uni, &["x", "y"], 1), f);
        assert!(parse_q("x*y").to_univariate(1).is_none());
    }

    #[test]
    fn eval_and_derivative() {
        let (k, _) = ring_q();
        let f = parse_q("y^2 - x^3");
        assert!(f.eval(&[k.integer(1), k.integer(1)]).is_zero());
        assert_eq!(f.eval(&[k.integer(2), k.integer(0)]), k.integer(-8));
        assert_eq!(f.derivative(0), parse_q("-3*x^2"));
        assert_eq!(f.derivative(1), parse_q("2*y"));
    }

    #[test]
    fn finite_field_coefficients() {
        let k = FieldDescriptor::parse_spec("F5").unwrap();
        let f = parse_poly("2*x^2 + 3*x^2 + y", &k, &["x", "y"]).unwrap();
        // 2 + 3 = 0 mod 5: the x^2 term vanishes
        assert_eq!(f.to_string(), "y");
        let g = parse_poly("x^5 - x", &k, &["x", "y"]).unwrap();
        for a in 0..5 {
            assert!(g.eval(&[k.integer(a), k.zero()]).is_zero());
        }
    }

    #[test]
    fn restrict_and_rename() {
        let k = FieldDescriptor::rationals();
        let f = parse_poly("x1^2 + s^3", &k, &["x1", "x2", "s"]).unwrap();
        let g = f.restrict_vars(&[0, 2]);
        assert_eq!(g.vars(), &["x1".to_string(), "s".to_string()]);
        assert_eq!(g.to_string(), "s^3 + x1^2");
        let h = g.with_vars(&["x", "y"]);
        assert_eq!(h.to_string(), "y^3 + x^2");
    }
}
