//! Exact coefficient fields: the rationals and finite fields `F_{p^r}`.
//!
//! Every scalar in the crate is either an arbitrary-precision rational or an
//! element of a concrete finite field `F_p[t]/(m(t))` with `m` monic
//! irreducible over the prime field.  There is no floating point anywhere:
//! equality of scalars is decidable and total.
//!
//! * [`FieldDescriptor`] names a field and can be round-tripped through the
//!   spec-string syntax `Q`, `F2`, `F9:t^2+1`.
//! * [`Scalar`] is a field element tagged with its field.
//! * [`UnivariatePoly`] is a dense univariate polynomial used for restriction
//!   curves, moduli and factorization.

mod extend;
mod factor;
mod univariate;

pub use extend::{extend_field, Embedding};
pub use factor::{factor_univariate, FactorPart, Factorization};
pub(crate) use factor::squarefree_decomposition;
pub use univariate::UnivariatePoly;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

/// Errors produced by field construction and scalar arithmetic.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic must be a prime below 2^31, got {0}")]
    BadCharacteristic(u64),
    #[error("modulus must be a monic polynomial of degree {expected}, got degree {got}")]
    BadModulusDegree { expected: usize, got: usize },
    #[error("modulus is reducible over the prime field")]
    ReducibleModulus,
    #[error("Frobenius roots are only defined in positive characteristic")]
    FrobeniusInCharacteristicZero,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("polynomial must be nonzero")]
    ZeroPolynomial,
    #[error("polynomial of degree {0} is not irreducible over the base field")]
    ReducibleExtension(usize),
    #[error("field extension requires positive characteristic")]
    ExtensionOfRationals,
    #[error("cannot parse field spec {0:?}")]
    BadFieldSpec(String),
    #[error("extension degree must be at least 2")]
    TrivialExtension,
}

/// A concrete finite field `F_{p^r} = F_p[t]/(modulus)`.
///
/// The modulus is stored little-endian over `F_p`, has length `r + 1` and is
/// monic.  For the prime field itself (`r = 1`) the modulus is `t`, so `t`
/// reduces to zero and elements are plain residues.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct FiniteField {
    p: u64,
    r: usize,
    modulus: Vec<u64>,
}

impl FiniteField {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Arc<FiniteField>, FieldError> {
        check_prime(p)?;
        Ok(Arc::new(FiniteField { p, r: 1, modulus: vec![0, 1] }))
    }

    /// `F_p[t]/(modulus)` with `modulus` monic irreducible of degree `r >= 2`,
    /// given little-endian over `F_p`.
    pub fn extension(p: u64, modulus: Vec<u64>) -> Result<Arc<FiniteField>, FieldError> {
        check_prime(p)?;
        let modulus: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        let r = modulus.len().saturating_sub(1);
        if r < 2 || modulus.last() != Some(&1) {
            return Err(FieldError::BadModulusDegree { expected: 2, got: r });
        }
        if !fp_is_irreducible(&modulus, p) {
            return Err(FieldError::ReducibleModulus);
        }
        Ok(Arc::new(FiniteField { p, r, modulus }))
    }

    /// `F_{p^r}` with the canonical modulus: the first monic irreducible of
    /// degree `r` in lexicographic order of the coefficient vector
    /// `(c_0, ..., c_{r-1})`.
    pub fn canonical(p: u64, r: usize) -> Result<Arc<FiniteField>, FieldError> {
        check_prime(p)?;
        if r == 1 {
            return FiniteField::prime(p);
        }
        let modulus = smallest_irreducible(p, r);
        Ok(Arc::new(FiniteField { p, r, modulus }))
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.r
    }

    /// Number of elements `p^r`.
    pub fn size(&self) -> u128 {
        (self.p as u128).pow(self.r as u32)
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    fn zero_coeffs(&self) -> Vec<u64> {
        vec![0; self.r]
    }

    fn reduce(&self, poly: &[u64]) -> Vec<u64> {
        let mut out = fp_rem(poly, &self.modulus, self.p);
        out.resize(self.r, 0);
        out
    }

    /// Iterate all `p^r` elements in lexicographic coefficient order.
    pub fn elements(self: &Arc<Self>) -> impl Iterator<Item = Scalar> {
        let field = Arc::clone(self);
        let total = self.size();
        (0..total).map(move |mut ix| {
            let mut coeffs = field.zero_coeffs();
            for slot in coeffs.iter_mut().rev() {
                *slot = (ix % field.p as u128) as u64;
                ix /= field.p as u128;
            }
            Scalar::Fin { field: Arc::clone(&field), coeffs }
        })
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.r == 1 {
            write!(f, "F{}", self.p)
        } else {
            write!(f, "F{}:{}", self.size(), fp_poly_string(&self.modulus))
        }
    }
}

/// Names a coefficient field: the rationals or a finite field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldDescriptor {
    Rationals,
    Finite(Arc<FiniteField>),
}

impl FieldDescriptor {
    pub fn rationals() -> Self {
        FieldDescriptor::Rationals
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldDescriptor::Rationals => 0,
            FieldDescriptor::Finite(k) => k.p,
        }
    }

    pub fn finite(&self) -> Option<&Arc<FiniteField>> {
        match self {
            FieldDescriptor::Rationals => None,
            FieldDescriptor::Finite(k) => Some(k),
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldDescriptor::Rationals => Scalar::Rat(BigRational::zero()),
            FieldDescriptor::Finite(k) => Scalar::Fin { field: Arc::clone(k), coeffs: k.zero_coeffs() },
        }
    }

    pub fn one(&self) -> Scalar {
        self.integer(1)
    }

    /// The image of an integer in this field.
    pub fn integer(&self, n: i64) -> Scalar {
        match self {
            FieldDescriptor::Rationals => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            FieldDescriptor::Finite(k) => {
                let mut coeffs = k.zero_coeffs();
                coeffs[0] = n.rem_euclid(k.p as i64) as u64;
                Scalar::Fin { field: Arc::clone(k), coeffs }
            }
        }
    }

    /// The generator `t` of a proper extension field (zero on prime fields).
    pub fn generator(&self) -> Option<Scalar> {
        match self {
            FieldDescriptor::Finite(k) if k.r >= 2 => {
                let mut coeffs = k.zero_coeffs();
                coeffs[1] = 1;
                Some(Scalar::Fin { field: Arc::clone(k), coeffs })
            }
            _ => None,
        }
    }

    /// Roots of unity of order dividing `n` that live in this field,
    /// in canonical order.  Used for stabilizer-orbit bookkeeping.
    pub fn roots_of_unity(&self, n: u64) -> Vec<Scalar> {
        match self {
            FieldDescriptor::Rationals => {
                if n.is_multiple_of(2) {
                    vec![self.one(), self.integer(-1)]
                } else {
                    vec![self.one()]
                }
            }
            FieldDescriptor::Finite(k) => {
                // The multiplicative group is cyclic of order p^r - 1, so the
                // n-th roots of unity form the unique subgroup of order
                // gcd(n, p^r - 1); at desk scale a scan is fine.
                let mut out: Vec<Scalar> = k
                    .elements()
                    .filter(|a| !a.is_zero() && a.pow(n).is_one())
                    .collect();
                out.sort();
                out
            }
        }
    }

    /// Parse a spec string: `Q`, `F2`, `F9:t^2+1`, `F25`.
    pub fn parse_spec(spec: &str) -> Result<FieldDescriptor, FieldError> {
        let spec = spec.trim();
        if spec == "Q" {
            return Ok(FieldDescriptor::Rationals);
        }
        let rest = spec
            .strip_prefix('F')
            .ok_or_else(|| FieldError::BadFieldSpec(spec.to_string()))?;
        let (q_str, mod_str) = match rest.split_once(':') {
            Some((q, m)) => (q, Some(m)),
            None => (rest, None),
        };
        let q: u64 = q_str
            .parse()
            .map_err(|_| FieldError::BadFieldSpec(spec.to_string()))?;
        let (p, r) = prime_power_split(q).ok_or(FieldError::BadCharacteristic(q))?;
        let field = match mod_str {
            None => FiniteField::canonical(p, r)?,
            Some(m) => {
                let coeffs = parse_t_poly(m, p).ok_or_else(|| FieldError::BadFieldSpec(spec.to_string()))?;
                if coeffs.len() != r + 1 {
                    return Err(FieldError::BadModulusDegree { expected: r, got: coeffs.len().saturating_sub(1) });
                }
                FiniteField::extension(p, coeffs)?
            }
        };
        Ok(FieldDescriptor::Finite(field))
    }

    /// Render the spec string accepted by [`FieldDescriptor::parse_spec`].
    pub fn spec_string(&self) -> String {
        match self {
            FieldDescriptor::Rationals => "Q".to_string(),
            FieldDescriptor::Finite(k) => k.to_string(),
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec_string())
    }
}

/// A field element tagged with its field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Fin { field: Arc<FiniteField>, coeffs: Vec<u64> },
}

impl Scalar {
    pub fn field(&self) -> FieldDescriptor {
        match self {
            Scalar::Rat(_) => FieldDescriptor::Rationals,
            Scalar::Fin { field, .. } => FieldDescriptor::Finite(Arc::clone(field)),
        }
    }

    pub fn from_rational(r: BigRational) -> Scalar {
        Scalar::Rat(r)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fin { coeffs, .. } => coeffs.iter().all(|&c| c == 0),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Fin { coeffs, .. } => coeffs[0] == 1 && coeffs[1..].iter().all(|&c| c == 0),
        }
    }

    fn same_field(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Rat(_), Scalar::Rat(_)) => true,
            (Scalar::Fin { field: a, .. }, Scalar::Fin { field: b, .. }) => a == b,
            _ => false,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        assert!(self.same_field(other), "scalar arithmetic across different fields");
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Fin { field, coeffs: a }, Scalar::Fin { coeffs: b, .. }) => {
                let p = field.p;
                let coeffs = a.iter().zip(b).map(|(&x, &y)| (x + y) % p).collect();
                Scalar::Fin { field: Arc::clone(field), coeffs }
            }
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Fin { field, coeffs } => {
                let p = field.p;
                let coeffs = coeffs.iter().map(|&x| (p - x) % p).collect();
                Scalar::Fin { field: Arc::clone(field), coeffs }
            }
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        assert!(self.same_field(other), "scalar arithmetic across different fields");
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Fin { field, coeffs: a }, Scalar::Fin { coeffs: b, .. }) => {
                let prod = fp_mul(a, b, field.p);
                Scalar::Fin { field: Arc::clone(field), coeffs: field.reduce(&prod) }
            }
            _ => unreachable!(),
        }
    }

    pub fn inv(&self) -> Result<Scalar, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        match self {
            Scalar::Rat(a) => Ok(Scalar::Rat(a.recip())),
            Scalar::Fin { field, coeffs } => {
                let inv = fp_invmod(coeffs, &field.modulus, field.p).ok_or(FieldError::DivisionByZero)?;
                Ok(Scalar::Fin { field: Arc::clone(field), coeffs: field.reduce(&inv) })
            }
        }
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar, FieldError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// `self^p` where `p` is the characteristic (identity over `Q`).
    pub fn frobenius(&self) -> Scalar {
        match self {
            Scalar::Rat(_) => self.clone(),
            Scalar::Fin { field, .. } => self.pow(field.p),
        }
    }

    /// The canonical form used for deterministic choices ("smallest root"):
    /// rationals by value, finite-field elements by the coefficient vector
    /// `(c_0, ..., c_{r-1})` ordered lexicographically.
    pub fn canonical_key(&self) -> ScalarKey {
        match self {
            Scalar::Rat(r) => ScalarKey::Rat(r.clone()),
            Scalar::Fin { coeffs, .. } => ScalarKey::Fin(coeffs.clone()),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Scalar) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Scalar) -> Ordering {
        self.canonical_key().cmp(&other.canonical_key())
    }
}

/// Orderable stand-in for a scalar value inside one fixed field.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ScalarKey {
    Rat(BigRational),
    Fin(Vec<u64>),
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fin { field, coeffs } => {
                if field.r == 1 {
                    write!(f, "{}", coeffs[0])
                } else {
                    f.write_str(&fp_poly_string(coeffs))
                }
            }
        }
    }
}

impl Scalar {
    /// True when the printed form needs parentheses as a coefficient.
    pub fn display_is_composite(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_negative() || !r.is_integer(),
            Scalar::Fin { coeffs, .. } => coeffs.iter().filter(|&&c| c != 0).count() > 1,
        }
    }
}

/// The unique `b` with `b^(p^e) = a` over a finite field; over the rationals
/// only `e = 0` is defined.  The Frobenius is an automorphism of a perfect
/// field, so the root always exists and is unique.
pub fn frobenius_root(a: &Scalar, e: u64) -> Result<Scalar, FieldError> {
    match a {
        Scalar::Rat(_) => {
            if e == 0 {
                Ok(a.clone())
            } else {
                Err(FieldError::FrobeniusInCharacteristicZero)
            }
        }
        Scalar::Fin { field, .. } => {
            // Frobenius has order r, so the inverse of x -> x^(p^e) is
            // x -> x^(p^m) with m = (r - e mod r) mod r.
            let r = field.r as u64;
            let m = (r - e % r) % r;
            let mut out = a.clone();
            for _ in 0..m {
                out = out.pow(field.p);
            }
            Ok(out)
        }
    }
}

fn check_prime(p: u64) -> Result<(), FieldError> {
    if !(2..(1 << 31)).contains(&p) || !is_prime(p) {
        return Err(FieldError::BadCharacteristic(p));
    }
    Ok(())
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Split `q = p^r` with `p` prime; `None` if `q` is not a prime power.
pub fn prime_power_split(q: u64) -> Option<(u64, usize)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            let mut rest = q;
            let mut r = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                r += 1;
            }
            return if rest == 1 { Some((p, r)) } else { None };
        }
        p += 1;
    }
    Some((q, 1))
}

// ---- dense polynomial helpers over F_p (little-endian Vec<u64>) ----

pub(crate) fn fp_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn fp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    fp_trim(&mut out);
    out
}

/// Remainder of `a` modulo monic `m` over `F_p`.
pub(crate) fn fp_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut a: Vec<u64> = a.iter().map(|&c| c % p).collect();
    fp_trim(&mut a);
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = *a.last().unwrap();
        let shift = a.len() - 1 - dm;
        if lead != 0 {
            for (j, &mc) in m.iter().enumerate() {
                a[shift + j] = (a[shift + j] + p - (lead * mc) % p) % p;
            }
        }
        a.pop();
        fp_trim(&mut a);
    }
    a
}

/// Extended Euclid over `F_p[t]`: inverse of `a` modulo `m`, if coprime.
fn fp_invmod(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
    let inv_scalar = |x: u64| -> u64 { mod_pow(x, p - 2, p) };
    let mut r0: Vec<u64> = m.to_vec();
    let mut r1: Vec<u64> = fp_rem(a, m, p);
    let mut s0: Vec<u64> = vec![];
    let mut s1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        let (q, rem) = fp_divrem(&r0, &r1, p, inv_scalar(*r1.last().unwrap()));
        let qs1 = fp_mul(&q, &s1, p);
        let s2 = fp_sub(&s0, &qs1, p);
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, s2);
    }
    // r0 = gcd; invertible iff gcd is a nonzero constant
    if r0.len() != 1 {
        return None;
    }
    let c_inv = inv_scalar(r0[0]);
    Some(s0.iter().map(|&c| (c * c_inv) % p).collect())
}

fn fp_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    fp_trim(&mut out);
    out
}

/// Division with remainder by a polynomial with invertible leading
/// coefficient; `lead_inv` is the inverse of `b`'s leading coefficient.
fn fp_divrem(a: &[u64], b: &[u64], p: u64, lead_inv: u64) -> (Vec<u64>, Vec<u64>) {
    let mut rem: Vec<u64> = a.to_vec();
    fp_trim(&mut rem);
    let db = b.len() - 1;
    if rem.len() <= db {
        return (vec![], rem);
    }
    let mut quot = vec![0u64; rem.len() - db];
    while rem.len() > db {
        let lead = *rem.last().unwrap();
        let shift = rem.len() - 1 - db;
        let q = (lead * lead_inv) % p;
        quot[shift] = q;
        if q != 0 {
            for (j, &bc) in b.iter().enumerate() {
                rem[shift + j] = (rem[shift + j] + p - (q * bc) % p) % p;
            }
        }
        rem.pop();
        fp_trim(&mut rem);
    }
    fp_trim(&mut quot);
    (quot, rem)
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    fp_trim(&mut r0);
    fp_trim(&mut r1);
    while !r1.is_empty() {
        let inv = mod_pow(*r1.last().unwrap(), p - 2, p);
        let (_, rem) = fp_divrem(&r0, &r1, p, inv);
        r0 = std::mem::replace(&mut r1, rem);
    }
    if let Some(&lead) = r0.last() {
        let inv = mod_pow(lead, p - 2, p);
        for c in r0.iter_mut() {
            *c = (*c * inv) % p;
        }
    }
    r0
}

pub(crate) fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Rabin irreducibility over `F_p` for a monic polynomial of degree `n`:
/// `t^(p^n) = t (mod f)` and `gcd(t^(p^(n/l)) - t, f) = 1` for prime `l | n`.
fn fp_is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let xq_tower = |steps: usize| -> Vec<u64> {
        // t^(p^steps) mod f by iterated p-th powers
        let mut h = vec![0, 1];
        for _ in 0..steps {
            h = fp_powmod(&h, p, f, p);
        }
        h
    };
    let x = vec![0u64, 1];
    // t^(p^n) == t mod f
    let top = xq_tower(n);
    if fp_sub(&top, &x, p) != Vec::<u64>::new() {
        return false;
    }
    let mut m = n;
    let mut primes = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            primes.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    for l in primes {
        let h = xq_tower(n / l);
        let diff = fp_sub(&h, &x, p);
        if fp_gcd(f, &diff, p).len() != 1 {
            return false;
        }
    }
    true
}

fn fp_powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = fp_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_rem(&fp_mul(&acc, &b, p), m, p);
        }
        b = fp_rem(&fp_mul(&b, &b, p), m, p);
        e >>= 1;
    }
    acc
}

/// First monic irreducible of degree `r` over `F_p` in lexicographic order of
/// `(c_0, ..., c_{r-1})`.
pub(crate) fn smallest_irreducible(p: u64, r: usize) -> Vec<u64> {
    let total = (p as u128).pow(r as u32);
    for mut ix in 0..total {
        let mut coeffs = vec![0u64; r + 1];
        coeffs[r] = 1;
        // enumerate (c_{r-1}, ..., c_0) as the fastest-varying digit being
        // c_{r-1} so that the (c_0, ..., c_{r-1}) tuples come out in
        // lexicographic order
        for slot in (0..r).rev() {
            coeffs[slot] = (ix % p as u128) as u64;
            ix /= p as u128;
        }
        if fp_is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducibles of every degree exist over a finite field")
}

fn fp_poly_string(coeffs: &[u64]) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let part = match (i, c) {
            (0, c) => format!("{c}"),
            (1, 1) => "t".to_string(),
            (1, c) => format!("{c}*t"),
            (i, 1) => format!("t^{i}"),
            (i, c) => format!("{c}*t^{i}"),
        };
        parts.push(part);
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

/// Parse integer-coefficient polynomials in `t`, e.g. `t^2+2*t+1`.
pub(crate) fn parse_t_poly(s: &str, p: u64) -> Option<Vec<u64>> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let mut coeffs: Vec<u64> = Vec::new();
    let mut add_term = |coeff: i64, deg: usize| {
        if coeffs.len() <= deg {
            coeffs.resize(deg + 1, 0);
        }
        let c = coeff.rem_euclid(p as i64) as u64;
        coeffs[deg] = (coeffs[deg] + c) % p;
    };
    let bytes = s.as_bytes();
    let mut i = 0;
    let mut sign = 1i64;
    while i < bytes.len() {
        match bytes[i] {
            b'+' => {
                sign = 1;
                i += 1;
            }
            b'-' => {
                sign = -1;
                i += 1;
            }
            _ => {}
        }
        // coefficient digits
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let coeff: i64 = if start == i { 1 } else { s[start..i].parse().ok()? };
        let mut deg = 0usize;
        if i < bytes.len() && bytes[i] == b'*' {
            i += 1;
        }
        if i < bytes.len() && bytes[i] == b't' {
            i += 1;
            deg = 1;
            if i < bytes.len() && bytes[i] == b'^' {
                i += 1;
                let dstart = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if dstart == i {
                    return None;
                }
                deg = s[dstart..i].parse().ok()?;
            }
        } else if start == i {
            // neither digits nor t: bad token
            return None;
        }
        add_term(sign * coeff, deg);
        sign = 1;
        if i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
            return None;
        }
    }
    fp_trim(&mut coeffs);
    Some(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> FieldDescriptor {
        FieldDescriptor::parse_spec("F9:t^2+1").unwrap()
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in ["Q", "F2", "F3", "F5", "F9:t^2+1", "F4:t^2+t+1"] {
            let k = FieldDescriptor::parse_spec(s).unwrap();
            assert_eq!(k.spec_string(), s, "round trip of {s}");
        }
        // bare prime power picks the canonical modulus
        let k = FieldDescriptor::parse_spec("F9").unwrap();
        assert_eq!(k.spec_string(), "F9:t^2+1");
        let k4 = FieldDescriptor::parse_spec("F4").unwrap();
        assert_eq!(k4.spec_string(), "F4:t^2+t+1");
        assert!(FieldDescriptor::parse_spec("F6").is_err());
        assert!(FieldDescriptor::parse_spec("G5").is_err());
    }

    #[test]
    fn rational_arithmetic() {
        let q = FieldDescriptor::Rationals;
        let a = q.integer(3);
        let b = q.integer(-4);
        assert_eq!(a.add(&b), q.integer(-1));
        assert_eq!(a.mul(&b), q.integer(-12));
        assert_eq!(b.div(&a).unwrap().to_string(), "-4/3");
        assert!(q.integer(0).inv().is_err());
    }

    #[test]
    fn f9_table_checks() {
        // hand-checked against F_3[t]/(t^2+1): t*t = -1 = 2, (1+t)(1-t) = 2
        let k = f9();
        let t = k.generator().unwrap();
        assert_eq!(t.mul(&t), k.integer(2));
        let a = k.one().add(&t);
        let b = k.one().sub(&t);
        assert_eq!(a.mul(&b), k.integer(2));
        assert!(a.mul(&a.inv().unwrap()).is_one());
    }

    #[test]
    fn every_nonzero_element_inverts() {
        for spec in ["F2", "F3", "F5", "F4:t^2+t+1", "F9:t^2+1", "F8:t^3+t+1"] {
            let k = FieldDescriptor::parse_spec(spec).unwrap();
            let kk = k.finite().unwrap();
            for a in kk.elements() {
                if a.is_zero() {
                    assert!(a.inv().is_err());
                } else {
                    assert!(a.mul(&a.inv().unwrap()).is_one(), "{a} in {spec}");
                }
            }
        }
    }

    #[test]
    fn frobenius_root_matches_exhaustive_search() {
        // oracle: scan all q elements for the (unique) b with b^(p^e) = a
        for spec in ["F2", "F3", "F5", "F4:t^2+t+1", "F9:t^2+1", "F8:t^3+t+1", "F25", "F27", "F81"] {
            let k = FieldDescriptor::parse_spec(spec).unwrap();
            let kk = k.finite().unwrap();
            let p = kk.characteristic();
            for e in 0..=3u64 {
                for a in kk.elements() {
                    let b = frobenius_root(&a, e).unwrap();
                    let mut pow = b.clone();
                    for _ in 0..e {
                        pow = pow.pow(p);
                    }
                    assert_eq!(pow, a, "frobenius_root({a}, {e}) over {spec}");
                    let hits = kk
                        .elements()
                        .filter(|c| {
                            let mut x = c.clone();
                            for _ in 0..e {
                                x = x.pow(p);
                            }
                            x == a
                        })
                        .count();
                    assert_eq!(hits, 1, "uniqueness over {spec}");
                }
            }
        }
    }

    #[test]
    fn frobenius_root_examples() {
        let k3 = FieldDescriptor::parse_spec("F3").unwrap();
        assert_eq!(frobenius_root(&k3.integer(2), 1).unwrap(), k3.integer(2));
        let k9 = f9();
        let t = k9.generator().unwrap();
        let b = frobenius_root(&t, 1).unwrap();
        // b = t^3 = -t
        assert_eq!(b, t.neg());
        assert_eq!(b.pow(3), t);
        let q = FieldDescriptor::Rationals;
        assert_eq!(frobenius_root(&q.integer(7), 0).unwrap(), q.integer(7));
        assert_eq!(
            frobenius_root(&q.integer(7), 1),
            Err(FieldError::FrobeniusInCharacteristicZero)
        );
    }

    #[test]
    fn canonical_modulus_is_lex_smallest() {
        // every strictly smaller coefficient vector must be reducible
        let k = FiniteField::canonical(3, 2).unwrap();
        assert_eq!(k.modulus(), &[1, 0, 1]);
        let k = FiniteField::canonical(2, 2).unwrap();
        assert_eq!(k.modulus(), &[1, 1, 1]);
        // (1,0,1) precedes (1,1,0), and t^3+t^2+1 has no roots over F_2
        let k = FiniteField::canonical(2, 3).unwrap();
        assert_eq!(k.modulus(), &[1, 0, 1, 1]); // t^3+t^2+1
    }

    #[test]
    fn reducible_modulus_rejected() {
        // t^2 - 1 = (t-1)(t+1) over F_5
        assert_eq!(
            FiniteField::extension(5, vec![4, 0, 1]).unwrap_err(),
            FieldError::ReducibleModulus
        );
        assert!(FiniteField::extension(4, vec![1, 1, 1]).is_err());
    }

    #[test]
    fn roots_of_unity_enumeration() {
        let q = FieldDescriptor::Rationals;
        assert_eq!(q.roots_of_unity(2).len(), 2);
        assert_eq!(q.roots_of_unity(3).len(), 1);
        let k5 = FieldDescriptor::parse_spec("F5").unwrap();
        // gcd(4, 4) = 4 fourth roots of unity in F_5
        assert_eq!(k5.roots_of_unity(4).len(), 4);
        assert_eq!(k5.roots_of_unity(3).len(), 1);
        let k9 = f9();
        assert_eq!(k9.roots_of_unity(4).len(), 4);
        assert_eq!(k9.roots_of_unity(8).len(), 8);
    }

    #[test]
    fn scalar_ordering_is_lex_on_coefficients() {
        let k9 = f9();
        let t = k9.generator().unwrap();
        let one_plus_t = k9.one().add(&t);
        let one_plus_2t = k9.one().add(&t.mul(&k9.integer(2)));
        assert!(one_plus_t < one_plus_2t);
        assert!(t < k9.integer(2), "t = (0,1) sorts before 2 = (2,0) by (c0, c1) lex");
    }
}
