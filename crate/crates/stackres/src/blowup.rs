//! Stack-theoretic weighted and multi-weighted blow-ups of the plane at a
//! weighted origin.
//!
//! A coprime weight pair `w = (w1, w2)` subdivides the first quadrant: the
//! weighted blow-up is the fan `[e1, w, e2]` on three variables
//! `(x1', x2', s)` with `x1 = x1' s^w1`, `x2 = x2' s^w2`, and the
//! multi-weighted refinement inserts the extra ray `u = (1, kappa)`,
//! `kappa = ceil(w2 / w1)`, on four variables with
//! `x1 = x1' s^w1 u` and `x2 = x2' s^w2 u^kappa`.  Adjacent rays span the
//! charts; the determinant of a chart's rays is the order of the cyclic
//! stabilizer acting on its slice.  The refinement is chosen so that in
//! characteristic `p | w1` every determinant is prime to `p`, which keeps
//! each chart an honest quotient by a group étale over the base
//! (Deligne–Mumford), where orders of points still mean something.
//!
//! The proper transform divides the pulled-back curve by the largest
//! monomial in the exceptional variables; the quotients are exactly the
//! weighted orders of `f` under `w` and `u`.

use crate::charpoly::valuation_ideal_generators;
use crate::field::Scalar;
use crate::poly::{MPoly, NewtonPolygon};

/// A complete fan on the first quadrant: primitive rays in strictly
/// increasing slope order, starting at `e1 = (1,0)` and ending at
/// `e2 = (0,1)`.  Adjacent pairs of rays span the maximal cones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan2D {
    rays: Vec<(u64, u64)>,
}

impl Fan2D {
    pub fn new(rays: Vec<(u64, u64)>) -> Fan2D {
        assert!(rays.len() >= 2, "a fan needs at least the two axis rays");
        assert_eq!(rays[0], (1, 0), "fans start at the first axis");
        assert_eq!(*rays.last().unwrap(), (0, 1), "fans end at the second axis");
        for &(a, b) in &rays {
            assert_eq!(gcd(a, b), 1, "ray ({a},{b}) is not primitive");
        }
        for pair in rays.windows(2) {
            assert!(
                ray_det(pair[0], pair[1]) > 0,
                "rays {:?} and {:?} are not in increasing slope order",
                pair[0],
                pair[1]
            );
        }
        Fan2D { rays }
    }

    /// `[e1, w, e2]`: the fan of the weighted blow-up.
    pub fn weighted(w: (u64, u64)) -> Fan2D {
        Fan2D::new(vec![(1, 0), w, (0, 1)])
    }

    /// `[e1, w, u, e2]` with `u = (1, ceil(w2 / w1))`.  Requires `w1 >= 2`,
    /// otherwise `u` would coincide with `w` itself.
    pub fn multiweighted(w: (u64, u64)) -> Fan2D {
        assert!(w.0 >= 2, "the refinement by (1, kappa) needs w1 >= 2");
        let kappa = w.1.div_ceil(w.0);
        Fan2D::new(vec![(1, 0), w, (1, kappa), (0, 1)])
    }

    pub fn rays(&self) -> &[(u64, u64)] {
        &self.rays
    }

    pub fn cones(&self) -> impl Iterator<Item = ((u64, u64), (u64, u64))> + '_ {
        self.rays.windows(2).map(|p| (p[0], p[1]))
    }

    /// Stabilizer orders of the charts: one determinant per cone.
    pub fn determinants(&self) -> Vec<u64> {
        self.cones().map(|(a, b)| ray_det(a, b) as u64).collect()
    }
}

/// `det [a; b]` — positive exactly when `b` has larger slope than `a`.
pub fn ray_det(a: (u64, u64), b: (u64, u64)) -> i64 {
    a.0 as i64 * b.1 as i64 - a.1 as i64 * b.0 as i64
}

/// One chart of the blown-up stack: the affine slice where all variables
/// off the cone are set to one, together with the residual cyclic action.
#[derive(Debug, Clone)]
pub struct Chart {
    /// The variables inverted (set to 1) in this chart; the paper-style
    /// chart name is "`inverted` != 0".
    pub inverted: Vec<String>,
    /// The two cone variables, in the order of the ambient ring.
    pub slice_vars: [String; 2],
    /// Proper transform restricted to the slice: a polynomial in
    /// `slice_vars`.
    pub slice: MPoly,
    /// Order of the cyclic stabilizer μ_n; equals the cone determinant.
    pub stabilizer: u64,
    /// Exponents of the μ_n action on the two slice variables: a generator
    /// ζ sends `v_i` to `ζ^action[i] v_i`.
    pub action: [u64; 2],
    /// Whether μ_n is étale over the base field (n prime to the
    /// characteristic); only étale charts see orders faithfully.
    pub is_etale: bool,
    /// Exceptional divisor variables whose generic locus this chart is
    /// responsible for scanning (each divisor has exactly one owner).
    pub owns: Vec<String>,
}

impl Chart {
    /// Restriction of the slice to the exceptional divisor `var = 0`.
    pub fn divisor_restriction(&self, var: &str) -> MPoly {
        let idx = self
            .slice
            .var_index(var)
            .unwrap_or_else(|| panic!("chart slice has no variable {var:?}"));
        self.slice.set_var(idx, &self.slice.field().zero())
    }

    /// Value of the slice at the origin of the chart.
    pub fn origin_value(&self) -> Scalar {
        let zero = self.slice.field().zero();
        self.slice.eval(&[zero.clone(), zero])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlowupKind {
    Weighted,
    /// `kappa = ceil(w2/w1)` after any swap; `swapped` records that the two
    /// input variables were exchanged to put the wild weight first.
    MultiWeighted { kappa: u64, swapped: bool },
}

/// A computed blow-up of a two-variable polynomial at a weighted origin.
#[derive(Debug, Clone)]
pub struct Blowup {
    pub kind: BlowupKind,
    /// Input variable names in slot order (after any swap): slot 1 carries
    /// weight `weights.0` and maps to the first primed variable.
    pub slot_vars: (String, String),
    /// Coprime weights in slot order.
    pub weights: (u64, u64),
    pub fan: Fan2D,
    /// Ambient ring of the transform: primed slot variables, then the
    /// exceptional variables `s` (and `u`).
    pub vars: Vec<String>,
    /// The pullback of `f` before dividing out exceptional monomials.
    pub total: MPoly,
    /// `total / (s^alpha u^beta)`: the proper transform.
    pub proper: MPoly,
    /// Weighted order of `f` under `w` — the exceptional multiplicity
    /// along `s = 0`.
    pub alpha: u64,
    /// Weighted order of `f` under `u = (1, kappa)`, for the multi-weighted
    /// kind.
    pub beta: Option<u64>,
    /// True when every chart stabilizer is étale.
    pub is_dm: bool,
    /// Charts in fan order.
    pub charts: Vec<Chart>,
}

impl Blowup {
    pub fn chart_inverting(&self, vars: &[&str]) -> Option<&Chart> {
        self.charts.iter().find(|c| {
            c.inverted.len() == vars.len() && vars.iter().all(|v| c.inverted.iter().any(|i| i == v))
        })
    }

    pub fn owner_of(&self, divisor: &str) -> &Chart {
        self.charts
            .iter()
            .find(|c| c.owns.iter().any(|d| d == divisor))
            .unwrap_or_else(|| panic!("no chart owns divisor {divisor:?}"))
    }

    /// Setting every exceptional variable to one must recover the input in
    /// the primed variables: the blow-up is an isomorphism off the center.
    pub fn recomposition_holds(&self, f: &MPoly) -> bool {
        let one = self.total.field().one();
        let mut glued = self.total.clone();
        for name in ["s", "u"] {
            if let Some(idx) = glued.var_index(name) {
                glued = glued.set_var(idx, &one);
            }
        }
        let keep: Vec<usize> = (0..2).collect();
        let glued = glued.restrict_vars(&keep);
        let primed: Vec<&str> = self.vars[..2].iter().map(|s| s.as_str()).collect();
        let renamed_slots = if matches!(self.kind, BlowupKind::MultiWeighted { swapped: true, .. })
        {
            f.permute_vars(&[1, 0])
        } else {
            f.clone()
        };
        glued == renamed_slots.with_vars(&primed)
    }
}

/// The weighted blow-up `[e1, w, e2]` of a two-variable polynomial.  The
/// chart stabilizers have orders `(w2, w1)` in fan order; the blow-up is
/// Deligne–Mumford exactly when both are prime to the characteristic.
pub fn weighted_blowup(f: &MPoly, w: (u64, u64)) -> Blowup {
    check_input(f, w);
    let p = f.field().characteristic();
    let fan = Fan2D::weighted(w);
    let (vars, total) = pull_back(f, (0, 1), w, None);
    let alpha = exceptional_multiple(&total, 2);
    let proper = divide_exceptional(&total, &[(2, alpha)]);

    let dets = fan.determinants();
    let etale: Vec<bool> = dets.iter().map(|&n| p == 0 || n % p != 0).collect();
    // both charts see the divisor s = 0; the first étale one owns its
    // generic locus, the other only contributes its slice origin
    let owner = etale
        .iter()
        .position(|&e| e)
        .expect("coprime weights cannot both share a factor with p");
    let names: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let charts = vec![
        make_chart(
            &proper,
            &names,
            [0, 2],
            vec![1],
            dets[0],
            [w.0 % dets[0].max(1), dets[0] - 1],
            etale[0],
            if owner == 0 { vec!["s".into()] } else { vec![] },
        ),
        make_chart(
            &proper,
            &names,
            [1, 2],
            vec![0],
            dets[1],
            [w.1 % dets[1].max(1), dets[1] - 1],
            etale[1],
            if owner == 1 { vec!["s".into()] } else { vec![] },
        ),
    ];
    Blowup {
        kind: BlowupKind::Weighted,
        slot_vars: (f.vars()[0].clone(), f.vars()[1].clone()),
        weights: w,
        fan,
        vars,
        total,
        proper,
        alpha,
        beta: None,
        is_dm: etale.iter().all(|&e| e),
        charts,
    }
}

/// The multi-weighted blow-up `[e1, w, u, e2]`.  When the characteristic
/// divides one of the weights, the variables are swapped so the wild weight
/// sits first, and the construction guarantees every chart is étale.
pub fn multiweighted_blowup(f: &MPoly, w: (u64, u64)) -> Blowup {
    check_input(f, w);
    let p = f.field().characteristic();
    let swapped = p > 0 && w.1.is_multiple_of(p);
    let (slots, w) = if swapped { ((1usize, 0usize), (w.1, w.0)) } else { ((0, 1), w) };
    assert!(w.0 >= 2, "the refinement by (1, kappa) needs the first weight >= 2");
    let kappa = w.1.div_ceil(w.0);
    let fan = Fan2D::multiweighted(w);
    debug_assert_eq!(
        dual_fan(&subdivision_ideal_vertices(w)),
        fan,
        "the fan must be dual to the level-w2(w1+1) valuation ideal"
    );

    let (vars, total) = pull_back(f, slots, w, Some(kappa));
    let alpha = exceptional_multiple(&total, 2);
    let beta = exceptional_multiple(&total, 3);
    let proper = divide_exceptional(&total, &[(2, alpha), (3, beta)]);

    let dets = fan.determinants();
    let etale: Vec<bool> = dets.iter().map(|&n| p == 0 || n % p != 0).collect();
    if p > 0 && w.0 % p == 0 {
        assert!(
            etale.iter().all(|&e| e),
            "refined determinants {dets:?} must all be prime to p = {p}"
        );
    }
    let names: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let charts = vec![
        // <e1, w>: slice (x1', s); mu_{w2} from the torus relations fixes
        // x2' = u = 1 and acts by (zeta^{w1}, zeta^{-1})
        make_chart(
            &proper,
            &names,
            [0, 2],
            vec![1, 3],
            dets[0],
            [w.0 % dets[0], dets[0] - 1],
            etale[0],
            vec!["s".into()],
        ),
        // <w, u>: slice (s, u); mu_{kappa*w1 - w2} acts by
        // (xi^{-1}, xi^{w1}); this chart adds only the crossing s = u = 0
        make_chart(
            &proper,
            &names,
            [2, 3],
            vec![0, 1],
            dets[1],
            [dets[1] - 1, w.0 % dets[1].max(1)],
            etale[1],
            vec![],
        ),
        // <u, e2>: slice (x2', u); determinant 1, trivial action
        make_chart(&proper, &names, [1, 3], vec![0, 2], dets[2], [0, 0], etale[2], vec![
            "u".into(),
        ]),
    ];
    Blowup {
        kind: BlowupKind::MultiWeighted { kappa, swapped },
        slot_vars: (f.vars()[slots.0].clone(), f.vars()[slots.1].clone()),
        weights: w,
        fan,
        vars,
        total,
        proper,
        alpha,
        beta: Some(beta),
        is_dm: etale.iter().all(|&e| e),
        charts,
    }
}

fn check_input(f: &MPoly, w: (u64, u64)) {
    assert_eq!(f.vars().len(), 2, "blow-ups act on two-variable curves");
    assert!(!f.is_zero(), "cannot blow up the zero polynomial");
    assert!(w.0 > 0 && w.1 > 0, "weights are positive");
    assert_eq!(gcd(w.0, w.1), 1, "weights {w:?} must be coprime");
    for v in f.vars() {
        assert!(
            v != "s" && v != "u" && !v.ends_with('\''),
            "input variable {v:?} collides with blow-up chart names"
        );
    }
}

/// Monomial substitution `x_i -> x_i' s^{w_i} u^{u_i}` into the chart ring
/// `[x1', x2', s, (u)]`, with slots choosing which input variable is first.
fn pull_back(
    f: &MPoly,
    slots: (usize, usize),
    w: (u64, u64),
    kappa: Option<u64>,
) -> (Vec<String>, MPoly) {
    let mut vars = vec![
        format!("{}'", f.vars()[slots.0]),
        format!("{}'", f.vars()[slots.1]),
        "s".to_string(),
    ];
    if kappa.is_some() {
        vars.push("u".to_string());
    }
    let names: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let exp = |n: u64| -> u32 { n.try_into().expect("exponent fits in u32") };
    let terms = f.terms().map(|(exps, c)| {
        let (a, b) = (exps[slots.0] as u64, exps[slots.1] as u64);
        let mut e = vec![exp(a), exp(b), exp(w.0 * a + w.1 * b)];
        if let Some(kappa) = kappa {
            e.push(exp(a + kappa * b));
        }
        (e, c.clone())
    });
    let total = MPoly::from_terms(f.field().clone(), &names, terms.collect::<Vec<_>>());
    (vars, total)
}

fn exceptional_multiple(total: &MPoly, index: usize) -> u64 {
    total
        .terms()
        .map(|(exps, _)| exps[index] as u64)
        .min()
        .expect("nonzero polynomial")
}

fn divide_exceptional(total: &MPoly, cuts: &[(usize, u64)]) -> MPoly {
    let vars: Vec<&str> = total.vars().iter().map(|s| s.as_str()).collect();
    let terms = total.terms().map(|(exps, c)| {
        let mut e = exps.clone();
        for &(idx, amount) in cuts {
            e[idx] -= u32::try_from(amount).expect("exponent fits in u32");
        }
        (e, c.clone())
    });
    MPoly::from_terms(total.field().clone(), &vars, terms.collect::<Vec<_>>())
}

#[allow(clippy::too_many_arguments)]
fn make_chart(
    proper: &MPoly,
    names: &[&str],
    keep: [usize; 2],
    invert: Vec<usize>,
    stabilizer: u64,
    action: [u64; 2],
    is_etale: bool,
    owns: Vec<String>,
) -> Chart {
    let one = proper.field().one();
    let mut slice = proper.clone();
    for &idx in &invert {
        slice = slice.set_var(idx, &one);
    }
    let slice = slice.restrict_vars(&keep);
    Chart {
        inverted: invert.iter().map(|&i| names[i].to_string()).collect(),
        slice_vars: [names[keep[0]].to_string(), names[keep[1]].to_string()],
        slice,
        stabilizer,
        action: [action[0] % stabilizer.max(1), action[1] % stabilizer.max(1)],
        is_etale,
        owns,
    }
}

/// Vertices of the Newton polygon of the valuation ideal at level
/// `w2 (w1 + 1)`: always the three monomials
/// `x1^{w2+kappa}, x1^{w2} x2, x2^{w1+1}`.  Its normal fan is exactly the
/// multi-weighted fan, which is what makes the refinement canonical.
pub fn subdivision_ideal_vertices(w: (u64, u64)) -> Vec<(u64, u64)> {
    let corners = valuation_ideal_generators(w, w.1 * (w.0 + 1));
    NewtonPolygon::from_points(&corners).expect("the level is positive").vertices().to_vec()
}

/// The normal fan of a staircase polygon: both axes plus the primitive
/// inward normal of every bounded edge.
pub fn dual_fan(vertices: &[(u64, u64)]) -> Fan2D {
    let hull = NewtonPolygon::from_points(vertices).expect("a polygon needs vertices");
    let mut rays = vec![(1, 0)];
    rays.extend(hull.edge_normals());
    rays.push((0, 1));
    Fan2D::new(rays)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
