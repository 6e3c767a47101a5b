//! Splitting-field extensions for finite base fields.
//!
//! Given a monic irreducible polynomial of degree `d >= 2` over `F_{p^r}`,
//! [`extend_field`] produces the canonical model of `F_{p^(rd)}`, an
//! embedding of the base field into it, and a designated root of the
//! polynomial.  Both the embedding and the root are pinned to the
//! lexicographically smallest choice, so repeated runs agree.

use super::{factor_univariate, FieldDescriptor, FieldError, FiniteField, Scalar, UnivariatePoly};

/// A field homomorphism `F_{p^r} -> F_{p^(rd)}`, represented by the image of
/// the generator `t` of the base field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    from: FieldDescriptor,
    to: FieldDescriptor,
    generator_image: Scalar,
}

impl Embedding {
    pub fn from_field(&self) -> &FieldDescriptor {
        &self.from
    }

    pub fn to_field(&self) -> &FieldDescriptor {
        &self.to
    }

    pub fn generator_image(&self) -> &Scalar {
        &self.generator_image
    }

    /// Map a base-field element into the extension by evaluating its
    /// coefficient polynomial at the generator image.
    pub fn map(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Fin { field, coeffs } => {
                assert_eq!(
                    FieldDescriptor::Finite(field.clone()),
                    self.from,
                    "embedding applied to an element of a different field"
                );
                let mut acc = self.to.zero();
                for &c in coeffs.iter().rev() {
                    acc = acc.mul(&self.generator_image).add(&self.to.integer(c as i64));
                }
                acc
            }
            Scalar::Rat(_) => panic!("embedding applied to a rational"),
        }
    }

    /// Map a polynomial coefficient-wise.
    pub fn map_poly(&self, f: &UnivariatePoly) -> UnivariatePoly {
        UnivariatePoly::new(self.to.clone(), f.coeffs().iter().map(|c| self.map(c)).collect())
    }
}

/// Adjoin a root of a monic irreducible polynomial of degree `d >= 2` over a
/// finite field `F_{p^r}`.  Returns the canonical model of `F_{p^(rd)}`, the
/// embedding of the base field, and the designated (lex-smallest) root.
pub fn extend_field(
    minimal: &UnivariatePoly,
) -> Result<(FieldDescriptor, Embedding, Scalar), FieldError> {
    let base = minimal.field().clone();
    let bk = base.finite().ok_or(FieldError::ExtensionOfRationals)?.clone();
    let d = match minimal.degree() {
        None => return Err(FieldError::ZeroPolynomial),
        Some(0) => return Err(FieldError::ZeroPolynomial),
        Some(1) => return Err(FieldError::TrivialExtension),
        Some(d) => d,
    };
    let minimal = minimal.monic();
    if !minimal.is_irreducible()? {
        return Err(FieldError::ReducibleExtension(d));
    }
    let p = bk.characteristic();
    let new_field = FieldDescriptor::Finite(FiniteField::canonical(p, bk.degree() * d)?);

    // embed the base field: the generator goes to the lex-smallest root of
    // the base modulus inside the new field
    let modulus_in_new = UnivariatePoly::new(
        new_field.clone(),
        bk.modulus().iter().map(|&c| new_field.integer(c as i64)).collect(),
    );
    let modulus_roots = factor_univariate(&modulus_in_new, 0).roots();
    assert_eq!(
        modulus_roots.len(),
        bk.degree(),
        "the base modulus splits in the extension"
    );
    let embedding = Embedding {
        from: base,
        to: new_field.clone(),
        generator_image: modulus_roots[0].0.clone(),
    };

    // the designated root: lex-smallest root of the mapped polynomial
    let mapped = embedding.map_poly(&minimal);
    let roots = factor_univariate(&mapped, 0).roots();
    assert_eq!(roots.len(), d, "an irreducible of degree d splits into d roots");
    Ok((new_field, embedding, roots[0].0.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f3_adjoin_root_of_x2_plus_1() {
        let k3 = FieldDescriptor::parse_spec("F3").unwrap();
        let f = UnivariatePoly::from_ints(&k3, &[1, 0, 1]);
        let (k9, emb, root) = extend_field(&f).unwrap();
        assert_eq!(k9.spec_string(), "F9:t^2+1");
        // F_3 embeds by constants
        assert_eq!(emb.map(&k3.integer(2)), k9.integer(2));
        // the lex-smaller of the two roots +-t is t itself
        assert_eq!(root, k9.generator().unwrap());
        assert!(root.mul(&root).add(&k9.one()).is_zero());
    }

    #[test]
    fn f3_adjoin_root_of_x2_plus_x_plus_2() {
        // the new field is still the canonical F_9, where the roots of
        // x^2 + x + 2 are 1 + t and 1 + 2t; the designated one is 1 + t
        let k3 = FieldDescriptor::parse_spec("F3").unwrap();
        let f = UnivariatePoly::from_ints(&k3, &[2, 1, 1]);
        let (k9, emb, root) = extend_field(&f).unwrap();
        assert_eq!(k9.spec_string(), "F9:t^2+1");
        let t = k9.generator().unwrap();
        assert_eq!(root, k9.one().add(&t));
        let image = emb.map_poly(&f);
        assert!(image.evaluate(&root).is_zero());
    }

    #[test]
    fn f2_adjoin_root_of_x2_plus_x_plus_1() {
        let k2 = FieldDescriptor::parse_spec("F2").unwrap();
        let f = UnivariatePoly::from_ints(&k2, &[1, 1, 1]);
        let (k4, _, root) = extend_field(&f).unwrap();
        assert_eq!(k4.spec_string(), "F4:t^2+t+1");
        assert_eq!(root, k4.generator().unwrap());
    }

    #[test]
    fn tower_from_f4_preserves_arithmetic() {
        // x^2 + x + t is irreducible over F_4 (the trace of t is 1), so the
        // extension is F_16; the embedding must be a ring homomorphism
        let k4 = FieldDescriptor::parse_spec("F4:t^2+t+1").unwrap();
        let t = k4.generator().unwrap();
        let f = UnivariatePoly::new(k4.clone(), vec![t.clone(), k4.one(), k4.one()]);
        let (k16, emb, root) = extend_field(&f).unwrap();
        assert_eq!(k16.finite().unwrap().degree(), 4);
        let u = emb.generator_image();
        assert!(u.mul(u).add(u).add(&k16.one()).is_zero(), "image satisfies t^2+t+1");
        let elems: Vec<Scalar> = k4.finite().unwrap().elements().collect();
        for a in &elems {
            for b in &elems {
                assert_eq!(emb.map(&a.add(b)), emb.map(a).add(&emb.map(b)));
                assert_eq!(emb.map(&a.mul(b)), emb.map(a).mul(&emb.map(b)));
            }
        }
        assert!(root.mul(&root).add(&root).add(&emb.map(&t)).is_zero());
        // determinism
        let again = extend_field(&f).unwrap();
        assert_eq!(again.1, emb);
        assert_eq!(again.2, root);
    }

    #[test]
    fn rejects_bad_inputs() {
        let k3 = FieldDescriptor::parse_spec("F3").unwrap();
        // x^2 + 2 = (x+1)(x+2) over F_3
        let red = UnivariatePoly::from_ints(&k3, &[2, 0, 1]);
        assert_eq!(extend_field(&red).unwrap_err(), FieldError::ReducibleExtension(2));
        let lin = UnivariatePoly::from_ints(&k3, &[1, 1]);
        assert_eq!(extend_field(&lin).unwrap_err(), FieldError::TrivialExtension);
        let q = FieldDescriptor::rationals();
        let f = UnivariatePoly::from_ints(&q, &[1, 0, 1]);
        assert_eq!(extend_field(&f).unwrap_err(), FieldError::ExtensionOfRationals);
    }
}
