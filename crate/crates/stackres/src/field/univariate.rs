//! Dense univariate polynomials over a coefficient field.
//!
//! These carry the field explicitly so the zero polynomial still knows where
//! it lives.  Coefficients are little-endian with trailing zeros trimmed.

use super::{FieldDescriptor, FieldError, Scalar};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnivariatePoly {
    field: FieldDescriptor,
    coeffs: Vec<Scalar>,
}

impl UnivariatePoly {
    pub fn new(field: FieldDescriptor, mut coeffs: Vec<Scalar>) -> UnivariatePoly {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        UnivariatePoly { field, coeffs }
    }

    pub fn zero(field: FieldDescriptor) -> UnivariatePoly {
        UnivariatePoly { field, coeffs: Vec::new() }
    }

    pub fn one(field: FieldDescriptor) -> UnivariatePoly {
        let one = field.one();
        UnivariatePoly { field, coeffs: vec![one] }
    }

    /// `x` itself.
    pub fn x(field: FieldDescriptor) -> UnivariatePoly {
        let (zero, one) = (field.zero(), field.one());
        UnivariatePoly { field, coeffs: vec![zero, one] }
    }

    pub fn constant(c: Scalar) -> UnivariatePoly {
        UnivariatePoly::new(c.field(), vec![c])
    }

    /// From small integer coefficients `c_0, c_1, ...`.
    pub fn from_ints(field: &FieldDescriptor, coeffs: &[i64]) -> UnivariatePoly {
        UnivariatePoly::new(field.clone(), coeffs.iter().map(|&c| field.integer(c)).collect())
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero polynomial answers `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_some_and(Scalar::is_one)
    }

    pub fn add(&self, other: &UnivariatePoly) -> UnivariatePoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect();
        UnivariatePoly::new(self.field.clone(), coeffs)
    }

    pub fn sub(&self, other: &UnivariatePoly) -> UnivariatePoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> UnivariatePoly {
        UnivariatePoly {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(Scalar::neg).collect(),
        }
    }

    pub fn mul(&self, other: &UnivariatePoly) -> UnivariatePoly {
        if self.is_zero() || other.is_zero() {
            return UnivariatePoly::zero(self.field.clone());
        }
        let mut coeffs = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        UnivariatePoly::new(self.field.clone(), coeffs)
    }

    pub fn mul_scalar(&self, c: &Scalar) -> UnivariatePoly {
        UnivariatePoly::new(
            self.field.clone(),
            self.coeffs.iter().map(|a| a.mul(c)).collect(),
        )
    }

    /// Monic multiple of self (zero stays zero).
    pub fn monic(&self) -> UnivariatePoly {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lead) => self.mul_scalar(&lead.inv().expect("leading coefficient is nonzero")),
        }
    }

    /// Division with remainder; divisor must be nonzero.
    pub fn divrem(&self, divisor: &UnivariatePoly) -> (UnivariatePoly, UnivariatePoly) {
        let dlead = divisor.leading_coeff().expect("division by zero polynomial");
        let dinv = dlead.inv().expect("field element");
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UnivariatePoly::zero(self.field.clone()), self.clone());
        }
        let mut quot = vec![self.field.zero(); rem.len() - dd];
        while rem.len() > dd {
            let lead = rem.last().unwrap().clone();
            if lead.is_zero() {
                rem.pop();
                continue;
            }
            let shift = rem.len() - 1 - dd;
            let q = lead.mul(&dinv);
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[shift + j] = rem[shift + j].sub(&q.mul(b));
            }
            quot[shift] = q;
            rem.pop();
        }
        (
            UnivariatePoly::new(self.field.clone(), quot),
            UnivariatePoly::new(self.field.clone(), rem),
        )
    }

    pub fn rem(&self, divisor: &UnivariatePoly) -> UnivariatePoly {
        self.divrem(divisor).1
    }

    /// Exact division; panics if not exact (internal contract).
    pub fn div_exact(&self, divisor: &UnivariatePoly) -> UnivariatePoly {
        let (q, r) = self.divrem(divisor);
        assert!(r.is_zero(), "exact division left a remainder");
        q
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &UnivariatePoly) -> UnivariatePoly {
        let mut a = self.primitive_rescale();
        let mut b = other.primitive_rescale();
        while !b.is_zero() {
            let r = a.rem(&b).primitive_rescale();
            a = std::mem::replace(&mut b, r);
        }
        a.monic()
    }

    /// Over the rationals, scale by a unit so the coefficients become coprime
    /// integers — the remainders in a gcd chain otherwise accumulate huge
    /// numerators and denominators.  Over a finite field this is a no-op.
    fn primitive_rescale(&self) -> UnivariatePoly {
        if self.field.characteristic() != 0 || self.is_zero() {
            return self.clone();
        }
        let mut denom_lcm = BigInt::one();
        let mut numer_gcd = BigInt::zero();
        for c in &self.coeffs {
            let Scalar::Rat(r) = c else { unreachable!("characteristic zero") };
            denom_lcm = denom_lcm.lcm(r.denom());
            numer_gcd = numer_gcd.gcd(r.numer());
        }
        let scale = Scalar::Rat(BigRational::new(denom_lcm, numer_gcd));
        self.mul_scalar(&scale)
    }

    pub fn derivative(&self) -> UnivariatePoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&self.field.integer(i as i64)))
            .collect();
        UnivariatePoly::new(self.field.clone(), coeffs)
    }

    pub fn evaluate(&self, x: &Scalar) -> Scalar {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// `self^e mod m` with an arbitrary-precision exponent.
    pub fn powmod(&self, e: &BigUint, m: &UnivariatePoly) -> UnivariatePoly {
        let mut acc = UnivariatePoly::one(self.field.clone());
        let mut base = self.rem(m);
        let mut e = e.clone();
        while !e.is_zero() {
            if (&e % 2u32).is_one() {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1u32;
        }
        acc
    }

    pub fn pow(&self, e: u32) -> UnivariatePoly {
        let mut acc = UnivariatePoly::one(self.field.clone());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitute `x -> x + c`.
    pub fn shift(&self, c: &Scalar) -> UnivariatePoly {
        let mut acc = UnivariatePoly::zero(self.field.clone());
        let shift = UnivariatePoly::new(self.field.clone(), vec![c.clone(), self.field.one()]);
        for coeff in self.coeffs.iter().rev() {
            acc = acc.mul(&shift).add(&UnivariatePoly::constant(coeff.clone()));
        }
        acc
    }

    /// Multiplicity of `c` as a root.
    pub fn root_multiplicity(&self, c: &Scalar) -> u32 {
        assert!(!self.is_zero());
        let mut f = self.clone();
        let linear = UnivariatePoly::new(self.field.clone(), vec![c.neg(), self.field.one()]);
        let mut m = 0;
        loop {
            let (q, r) = f.divrem(&linear);
            if !r.is_zero() {
                return m;
            }
            m += 1;
            f = q;
        }
    }

    /// Rabin's irreducibility test over a finite field (errors over `Q`).
    pub fn is_irreducible(&self) -> Result<bool, FieldError> {
        let finite = self
            .field
            .finite()
            .ok_or(FieldError::ExtensionOfRationals)?;
        let n = match self.degree() {
            None | Some(0) => return Ok(false),
            Some(1) => return Ok(true),
            Some(n) => n,
        };
        let q = BigUint::from(finite.characteristic()).pow(finite.degree() as u32);
        let f = self.monic();
        let x = UnivariatePoly::x(self.field.clone());
        let xq_tower = |steps: usize| {
            let mut h = x.clone();
            for _ in 0..steps {
                h = h.powmod(&q, &f);
            }
            h
        };
        if !xq_tower(n).sub(&x).is_zero() {
            return Ok(false);
        }
        let mut m = n;
        let mut primes = Vec::new();
        let mut d = 2;
        while d * d <= m {
            if m % d == 0 {
                primes.push(d);
                while m % d == 0 {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            primes.push(m);
        }
        for l in primes {
            let h = xq_tower(n / l).sub(&x);
            if f.gcd(&h).degree() != Some(0) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Render with the given variable name, highest power first.
    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg_lead = match c {
                Scalar::Rat(r) => {
                    use num_traits::Signed;
                    r.is_negative()
                }
                _ => false,
            };
            if !out.is_empty() {
                out.push_str(if neg_lead { " - " } else { " + " });
            } else if neg_lead {
                out.push('-');
            }
            let mag = if neg_lead { c.neg() } else { c.clone() };
            let coeff_str = if mag.display_is_composite() {
                format!("({mag})")
            } else {
                mag.to_string()
            };
            match i {
                0 => out.push_str(&coeff_str),
                _ => {
                    if mag.is_one() {
                        out.push_str(var);
                    } else {
                        out.push_str(&coeff_str);
                        out.push('*');
                        out.push_str(var);
                    }
                    if i > 1 {
                        out.push_str(&format!("^{i}"));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for UnivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}
