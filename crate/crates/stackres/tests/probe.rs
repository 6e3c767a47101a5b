//! Throwaway timing probe (delete before release).

use rand::Rng as _;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stackres::charpoly::characteristic_polyhedron;
use stackres::field::{FieldDescriptor, Scalar};
use stackres::poly::{parse_poly, radical, MPoly};
use std::time::Instant;

fn parse_in(spec: &str, vars: &[&str], s: &str) -> MPoly {
    let k = FieldDescriptor::parse_spec(spec).unwrap();
    parse_poly(s, &k, vars).unwrap()
}

fn random_nonzero(field: &FieldDescriptor, rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let c = field.integer(rng.gen_range(-6..=6));
        if !c.is_zero() {
            return c;
        }
    }
}

fn random_automorphism(f: &MPoly, rng: &mut ChaCha8Rng) -> (MPoly, MPoly) {
    let field = f.field().clone();
    let vars: Vec<&str> = f.vars().iter().map(|s| s.as_str()).collect();
    let term = |a: u32, b: u32, c: Scalar| -> MPoly {
        MPoly::from_terms(field.clone(), &vars, [(vec![a, b], c)])
    };
    let quad = |rng: &mut ChaCha8Rng| -> MPoly {
        let mut acc = MPoly::zero(field.clone(), &vars);
        for (a, b) in [(2, 0), (1, 1), (0, 2)] {
            acc = acc.add(&term(a, b, field.integer(rng.gen_range(-2..=2))));
        }
        acc
    };
    let gx = term(1, 0, random_nonzero(&field, rng)).add(&quad(rng));
    let gy = term(0, 1, random_nonzero(&field, rng))
        .add(&term(1, 0, field.integer(rng.gen_range(-2..=2))))
        .add(&quad(rng));
    (gx, gy)
}

fn compose(f: &MPoly, gx: &MPoly, gy: &MPoly) -> MPoly {
    let field = f.field().clone();
    let vars: Vec<&str> = f.vars().iter().map(|s| s.as_str()).collect();
    let max_a = f.terms().map(|(e, _)| e[0]).max().unwrap_or(0) as usize;
    let max_b = f.terms().map(|(e, _)| e[1]).max().unwrap_or(0) as usize;
    let powers = |g: &MPoly, n: usize| -> Vec<MPoly> {
        let mut out = vec![MPoly::constant(field.clone(), &vars, field.one())];
        for i in 0..n {
            out.push(out[i].mul(g));
        }
        out
    };
    let xs = powers(gx, max_a);
    let ys = powers(gy, max_b);
    let mut acc = MPoly::zero(field.clone(), &vars);
    for (exps, c) in f.terms() {
        acc = acc.add(&xs[exps[0] as usize].mul(&ys[exps[1] as usize]).mul_scalar(c));
    }
    acc
}

#[test]
fn probe_timing() {
    let cases = [
        ("F3", ["x", "y"], "-y^9 + y^3 - x^6 + x^11"),
        ("F2", ["x", "z"], "z^7 - x^6*z^2 + x^15"),
        ("F3", ["x", "z"], "z^7 - x^6*z^2 + x^15"),
        ("F5", ["x", "z"], "z^7 - x^6*z^2 + x^15"),
        ("Q", ["x", "z"], "z^7 - x^6*z^2 + x^15"),
        ("F2", ["x1", "x2"], "x1^2 - x2^3"),
        ("F3", ["x1", "x2"], "x1^3 - x2^4"),
        ("F3", ["x1", "x2"], "x2^7 + x1^4*x2^4 + x1^7*x2^2 + x1^9*x2 + x1^11 + x1^6*x2^3"),
        (
            "F3",
            ["x1", "x2"],
            "x2^7 + x1^4*x2^4 + x1^8*x2 + x1^7*x2^2 + x1^9*x2 + x1^11 + x1^6*x2^3",
        ),
        ("Q", ["x", "y"], "y^2 - x^3"),
        ("Q", ["x", "y"], "(y^2 - x^3)^2 - x^7"),
        ("F3", ["x", "y"], "(y^2 - x^3)^2 - x^7"),
        ("F2", ["x", "y"], "(y^2 - x^3)^2 - x^7"),
        ("F5", ["x", "y"], "y^5 - x^7"),
        ("Q", ["x", "y"], "y^3 - x^3"),
        ("Q", ["x", "y"], "x^2*y^3"),
        ("F2", ["x", "y"], "y^2 + x^2*y + x^5"),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    for (spec, vars, text) in cases {
        let f = parse_in(spec, &vars, text);
        let t0 = Instant::now();
        for _ in 0..5 {
            let (gx, gy) = random_automorphism(&f, &mut rng);
            let g = compose(&f, &gx, &gy);
            let _ = characteristic_polyhedron(&g).unwrap();
        }
        println!("{spec:3} {text:60} 5 iters in {:>9.1?}", t0.elapsed());
    }
}
