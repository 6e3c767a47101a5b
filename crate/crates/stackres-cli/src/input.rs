//! Turning command-line text into exact polynomials.

use stackres::field::FieldDescriptor;
use stackres::poly::{parse_poly, MPoly};

/// Parse a field spec and polynomial text into an exact polynomial.
///
/// Variables are either given explicitly (`--vars`) or inferred from the
/// identifiers appearing in the text, taken in sorted order.  The coefficient
/// generator `t` of an extension field is never a variable.
pub fn parse_input(
    field_spec: &str,
    poly_text: &str,
    vars: Option<&[String]>,
) -> Result<MPoly, String> {
    let field = FieldDescriptor::parse_spec(field_spec).map_err(|e| e.to_string())?;
    let names: Vec<String> = match vars {
        Some(list) => list.to_vec(),
        None => infer_vars(poly_text, &field)?,
    };
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let f = parse_poly(poly_text, &field, &refs).map_err(|e| e.to_string())?;
    if f.order().is_none() {
        return Err("the polynomial is zero; there is no curve to work with".into());
    }
    Ok(f)
}

/// Identifiers appearing in the text, sorted; exactly two are required.
fn infer_vars(text: &str, field: &FieldDescriptor) -> Result<Vec<String>, String> {
    let mut names: Vec<String> = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        if !c.is_ascii_alphabetic() {
            continue;
        }
        let mut name = String::from(c);
        while let Some(&d) = chars.peek() {
            if d.is_ascii_alphanumeric() {
                name.push(d);
                chars.next();
            } else {
                break;
            }
        }
        if name == "t" && field.generator().is_some() {
            continue; // coefficient generator, not a variable
        }
        if !names.contains(&name) {
            names.push(name);
        }
    }
    names.sort();
    match names.len() {
        2 => Ok(names),
        n => Err(format!(
            "expected a polynomial in exactly two variables, found {n} ({}); \
             pass --vars to name them explicitly",
            names.join(", ")
        )),
    }
}
