//! The resolution driver.
//!
//! Starting from a curve singular at the origin, each round computes the
//! characteristic polyhedron, blows up the canonical weighted center, and
//! examines every point of the exceptional locus: the owner chart of each
//! divisor scans its restriction for multiple roots, the remaining charts
//! contribute their slice origins.  Points that are still singular become
//! child nodes in fresh local coordinates and the process repeats.  The
//! driver verifies at every step that the pair `(order, order * delta)`
//! drops strictly in lexicographic order, and refuses to recurse past the
//! step limit (by default the order of the original curve), so a run that
//! terminates is itself a certificate of the expected descent.
//!
//! Points with multiplicity one on a divisor restriction are transversal
//! crossings of the strict transform with the exceptional locus and cannot
//! be singular on the curve, so only multiple roots are examined.  Over a
//! finite field a multiple root living in an extension is chased by
//! extending scalars; over the rationals such a point is recorded as an
//! honest unresolved leaf rather than silently skipped.

use crate::blowup::{multiweighted_blowup, weighted_blowup, Blowup, BlowupKind, Chart};
use crate::charpoly::{characteristic_polyhedron, CharPolyError, CharPolyhedron};
use crate::field::{
    extend_field, factor_univariate, FieldError, Scalar, UnivariatePoly,
};
use crate::poly::{radical, MPoly};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Local coordinates used for every node below the root.  Part of the tree
/// schema: consumers re-parsing a node's polynomial use the tree's own
/// variables at the root and these names everywhere else.
pub const CHILD_VARS: [&str; 2] = ["x1", "x2"];

pub const TREE_SCHEMA: &str = "stackres-tree/1";

#[derive(Debug, Error)]
pub enum ResolveError {
    #[error(transparent)]
    Analysis(#[from] CharPolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("variable {0:?} is reserved for blow-up charts")]
    ReservedVariable(String),
    #[error(
        "chart {chart} carries a wild stabilizer and meets the curve at its \
         origin; orders are not visible there (use the multi-weighted mode)"
    )]
    ArtinChartObstruction { chart: String },
    #[error("invariant failed to drop: parent {parent}, child {child}")]
    InvariantDidNotDrop { parent: String, child: String },
    #[error("resolution exceeded the step limit of {limit}")]
    StepLimitExceeded { limit: u64 },
    #[error("weights {weights:?} admit no multi-weighted refinement (first weight is 1)")]
    RefinementUnavailable { weights: (u64, u64) },
}

/// Which blow-up to perform at each singular point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Weighted for tame weights, multi-weighted as soon as the
    /// characteristic divides a weight.
    #[default]
    Auto,
    /// Always the plain weighted blow-up; wild charts that meet the curve
    /// at their origin abort with [`ResolveError::ArtinChartObstruction`].
    Weighted,
    /// Always the multi-weighted refinement.
    MultiWeighted,
}

#[derive(Debug, Clone)]
pub struct ResolveOptions {
    pub mode: Mode,
    /// Maximum number of blow-ups along any path; defaults to the order of
    /// the input curve, which the descent argument says is never reached.
    pub step_limit: Option<u64>,
    /// Seed for the randomized stage of univariate factoring; the output
    /// tree does not depend on it.
    pub seed: u64,
}

impl Default for ResolveOptions {
    fn default() -> ResolveOptions {
        ResolveOptions { mode: Mode::Auto, step_limit: None, seed: 0 }
    }
}

/// The full resolution record: a tree of blow-ups rooted at the input.
#[derive(Debug, Serialize, Deserialize)]
pub struct ResolutionTree {
    pub schema: String,
    pub field: String,
    pub vars: Vec<String>,
    pub input: String,
    pub initial_order: u64,
    pub root: ResolutionNode,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ResolutionNode {
    pub field: String,
    pub poly: String,
    /// Order at the origin; absent on points that were never coordinatized
    /// (non-rational leaves).
    pub order: Option<u64>,
    pub radical_order: Option<u64>,
    pub status: NodeStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analysis: Option<Analysis>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<Edge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NodeStatus {
    /// The underlying reduced curve is smooth here (order of the radical is
    /// at most one); nothing left to do.
    SmoothReduced,
    /// Analyzed and blown up; see `analysis` and `children`.
    BlownUp,
    /// A multiple root of the divisor restriction over the rationals that
    /// generates a proper extension; resolving it needs number-field
    /// arithmetic, so it is reported instead of chased.
    NonRationalPoint { factor: String, multiplicity: u32 },
    /// Every projected vertex dissolved: the curve is a formal power of a
    /// smooth branch.  Unreachable for reduced singular input; kept so a
    /// logic error cannot masquerade as progress.
    PurePower,
}

/// Everything the driver computed at one singular point.
#[derive(Debug, Serialize, Deserialize)]
pub struct Analysis {
    /// `(order, order * delta)` as exact rational strings.
    pub invariant: [String; 2],
    pub delta: String,
    #[serde(skip)]
    pub invariant_value: Option<(BigRational, BigRational)>,
    pub center: CenterReport,
    /// Coordinate preparation applied before blowing up, in order.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub preparation: Vec<String>,
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<u64>,
    pub swapped: bool,
    pub fan: Vec<[u64; 2]>,
    pub stabilizers: Vec<u64>,
    pub alpha: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<u64>,
    pub is_dm: bool,
    pub scans: Vec<ScanReport>,
    pub origins: Vec<OriginReport>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CenterReport {
    pub z: String,
    pub x: String,
    pub w_z: u64,
    pub w_x: u64,
    pub ell: u64,
}

/// One exceptional divisor scanned in its owner chart.
#[derive(Debug, Serialize, Deserialize)]
pub struct ScanReport {
    pub divisor: String,
    pub chart: String,
    pub stabilizer: u64,
    pub restriction: String,
    pub points: Vec<PointReport>,
}

/// One stabilizer orbit of points on a divisor (or one conjugacy class over
/// an extension).
#[derive(Debug, Serialize, Deserialize)]
pub struct PointReport {
    pub point: String,
    pub multiplicity: u32,
    pub orbit_size: u64,
    pub extension_degree: u64,
    pub verdict: String,
}

/// A chart that owns no divisor, examined at its slice origin.
#[derive(Debug, Serialize, Deserialize)]
pub struct OriginReport {
    pub chart: String,
    pub on_curve: bool,
    pub verdict: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Edge {
    /// `"s"`, `"u"`, or `"origin"` for a non-owner chart origin.
    pub via: String,
    pub chart: String,
    pub point: String,
    pub orbit_size: u64,
    pub extension_degree: u64,
    pub node: ResolutionNode,
}

impl ResolutionTree {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("tree serializes");
        out.push('\n');
        out
    }

    /// Number of blow-ups along the longest root-to-leaf path.
    pub fn max_depth(&self) -> u64 {
        fn depth(node: &ResolutionNode) -> u64 {
            match node.status {
                NodeStatus::BlownUp => {
                    1 + node.children.iter().map(|e| depth(&e.node)).max().unwrap_or(0)
                }
                _ => 0,
            }
        }
        depth(&self.root)
    }

    pub fn node_count(&self) -> u64 {
        fn count(node: &ResolutionNode) -> u64 {
            1 + node.children.iter().map(|e| count(&e.node)).sum::<u64>()
        }
        count(&self.root)
    }

    /// True when every leaf is a smooth reduced point.
    pub fn is_resolved(&self) -> bool {
        fn ok(node: &ResolutionNode) -> bool {
            if node.children.is_empty() {
                matches!(node.status, NodeStatus::SmoothReduced | NodeStatus::BlownUp)
            } else {
                node.children.iter().all(|e| ok(&e.node))
            }
        }
        ok(&self.root)
    }

    /// Leaves that could not be handled, with their statuses.
    pub fn unresolved_leaves(&self) -> Vec<&NodeStatus> {
        fn walk<'a>(node: &'a ResolutionNode, out: &mut Vec<&'a NodeStatus>) {
            if !matches!(node.status, NodeStatus::SmoothReduced | NodeStatus::BlownUp) {
                out.push(&node.status);
            }
            for e in &node.children {
                walk(&e.node, out);
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut out);
        out
    }
}

/// Resolve the curve `f`, singular at the origin, by iterated stack-theoretic
/// blow-ups at canonical weighted centers.
pub fn resolve(f: &MPoly, opts: &ResolveOptions) -> Result<ResolutionTree, ResolveError> {
    if f.is_zero() {
        return Err(CharPolyError::ZeroInput.into());
    }
    if f.vars().len() != 2 {
        return Err(CharPolyError::WrongArity(f.vars().len()).into());
    }
    for v in f.vars() {
        if v == "s" || v == "u" || v.ends_with('\'') {
            return Err(ResolveError::ReservedVariable(v.clone()));
        }
    }
    let initial_order = f.order().expect("nonzero polynomial");
    let limit = opts.step_limit.unwrap_or(initial_order.max(1));
    let root = build_node(f, 0, limit, opts, None)?;
    Ok(ResolutionTree {
        schema: TREE_SCHEMA.to_string(),
        field: f.field().spec_string(),
        vars: f.vars().to_vec(),
        input: f.to_string(),
        initial_order,
        root,
    })
}

fn build_node(
    f: &MPoly,
    depth: u64,
    limit: u64,
    opts: &ResolveOptions,
    parent_inv: Option<&(BigRational, BigRational)>,
) -> Result<ResolutionNode, ResolveError> {
    let order = f.order().expect("tree nodes carry nonzero polynomials");
    let radical_order = radical(f).order().expect("radical of a nonzero polynomial");
    let mut node = ResolutionNode {
        field: f.field().spec_string(),
        poly: f.to_string(),
        order: Some(order),
        radical_order: Some(radical_order),
        status: NodeStatus::SmoothReduced,
        analysis: None,
        children: Vec::new(),
    };
    if radical_order <= 1 {
        return Ok(node);
    }

    let cp = match characteristic_polyhedron(f) {
        Ok(cp) => cp,
        Err(CharPolyError::PurePower) => {
            node.status = NodeStatus::PurePower;
            return Ok(node);
        }
        Err(e) => return Err(e.into()),
    };
    // the order itself is guaranteed to drop at every point of the
    // exceptional locus, which is stronger than a lexicographic drop
    if let Some(parent) = parent_inv {
        let child = &cp.center.invariant;
        if child.0 >= parent.0 {
            return Err(ResolveError::InvariantDidNotDrop {
                parent: format!("({}, {})", parent.0, parent.1),
                child: format!("({}, {})", child.0, child.1),
            });
        }
    }
    if depth >= limit {
        return Err(ResolveError::StepLimitExceeded { limit });
    }

    let weights = cp.center.weights_for(f.vars());
    let w = (weights[0], weights[1]);
    let p = f.field().characteristic();
    let wild = p > 0 && (w.0.is_multiple_of(p) || w.1.is_multiple_of(p));
    let use_multi = match opts.mode {
        Mode::Auto => wild,
        Mode::Weighted => false,
        Mode::MultiWeighted => true,
    };
    if use_multi {
        let first_slot = if p > 0 && w.1.is_multiple_of(p) { w.1 } else { w.0 };
        if first_slot < 2 {
            return Err(ResolveError::RefinementUnavailable { weights: w });
        }
    }
    let blowup =
        if use_multi { multiweighted_blowup(&cp.prepared, w) } else { weighted_blowup(&cp.prepared, w) };
    assert_eq!(
        blowup.alpha, cp.center.ell,
        "the exceptional multiplicity must be the center level"
    );

    let mut analysis = describe(&cp, &blowup);
    let inv = cp.center.invariant.clone();

    // each exceptional divisor is scanned once, in the chart that sees its
    // whole generic locus
    let divisors: &[&str] = if use_multi { &["s", "u"] } else { &["s"] };
    for &div in divisors {
        let chart = blowup.owner_of(div);
        debug_assert!(chart.is_etale, "divisor owners are étale by construction");
        let scan = scan_divisor(f, chart, div, depth, limit, opts, &inv, &mut node.children)?;
        analysis.scans.push(scan);
    }
    for chart in blowup.charts.iter().filter(|c| c.owns.is_empty()) {
        let report = examine_origin(chart, depth, limit, opts, &inv, &mut node.children)?;
        analysis.origins.push(report);
    }

    node.status = NodeStatus::BlownUp;
    node.analysis = Some(analysis);
    Ok(node)
}

/// Scan one exceptional divisor in its owner chart.
///
/// The stabilizer μ_n rescales the scan coordinate `t` through a character
/// of order `m`, and the restriction is semi-invariant, so its exponents
/// are all congruent mod `m` and it descends to a polynomial in the coarse
/// coordinate `v = t^m`.  Points of the quotient divisor are enumerated
/// downstairs — which also folds together conjugate geometric points of one
/// orbit that no rational root of unity could identify — and each multiple
/// point is lifted back to a canonical geometric representative, preferring
/// lifts rational over the current field.
#[allow(clippy::too_many_arguments)]
fn scan_divisor(
    f: &MPoly,
    chart: &Chart,
    div: &str,
    depth: u64,
    limit: u64,
    opts: &ResolveOptions,
    inv: &(BigRational, BigRational),
    children: &mut Vec<Edge>,
) -> Result<ScanReport, ResolveError> {
    let div_idx = chart.slice.var_index(div).expect("divisor variable lives in the slice");
    let scan_idx = 1 - div_idx;
    let scan_var = &chart.slice_vars[scan_idx];
    let restriction = chart.divisor_restriction(div);
    let rest_uni = restriction
        .to_univariate(scan_idx)
        .expect("a divisor restriction is univariate in the scan variable");
    let n = chart.stabilizer;
    let a = chart.action[scan_idx];
    let m = n / gcd_u64(n, a);

    let (shift, folded) = fold_semi_invariant(&rest_uni, m);

    let mut report = ScanReport {
        divisor: div.to_string(),
        chart: chart_label(chart),
        stabilizer: n,
        restriction: rest_uni.display_with(scan_var),
        points: Vec::new(),
    };

    // t = 0 is the one fixed point of the rescaling
    if shift > 0 {
        let mut point = PointReport {
            point: "0".to_string(),
            multiplicity: shift,
            orbit_size: 1,
            extension_degree: 1,
            verdict: "smooth".to_string(),
        };
        if shift >= 2 {
            let child_poly = rename_child(&chart.slice);
            let child = build_node(&child_poly, depth + 1, limit, opts, Some(inv))?;
            point.verdict = verdict_of(&child);
            children.push(Edge {
                via: div.to_string(),
                chart: report.chart.clone(),
                point: "0".to_string(),
                orbit_size: 1,
                extension_degree: 1,
                node: child,
            });
        }
        report.points.push(point);
    }

    if folded.degree() == Some(0) {
        return Ok(report); // the divisor meets the curve nowhere else
    }

    for part in &factor_univariate(&folded, opts.seed).parts {
        let rep = match part.poly.degree() {
            // rational coarse value: lift through t^m = v0
            Some(1) => {
                let v0 = part.poly.coeff(0).neg();
                debug_assert!(!v0.is_zero(), "coarse roots away from the origin");
                lift_representative(&monomial_minus(f, m, &v0), opts.seed)
            }
            // the coarse point itself needs an extension: compose first
            _ => lift_representative(&spread_exponents(&part.poly, m), opts.seed),
        };
        let mut point = PointReport {
            point: rep.display(scan_var),
            multiplicity: part.multiplicity,
            orbit_size: m,
            extension_degree: rep.degree(),
            verdict: "smooth".to_string(),
        };
        if part.multiplicity >= 2 {
            let child = match (&rep, f.field().characteristic()) {
                (Lift::Rational(root), _) => {
                    let moved = chart.slice.translate(scan_idx, root);
                    let child = build_node(&rename_child(&moved), depth + 1, limit, opts, Some(inv))?;
                    point.verdict = verdict_of(&child);
                    child
                }
                (Lift::Extension(minimal), 0) => {
                    point.verdict = "deferred".to_string();
                    ResolutionNode {
                        field: f.field().spec_string(),
                        poly: chart.slice.to_string(),
                        order: None,
                        radical_order: None,
                        status: NodeStatus::NonRationalPoint {
                            factor: minimal.display_with(scan_var),
                            multiplicity: part.multiplicity,
                        },
                        analysis: None,
                        children: Vec::new(),
                    }
                }
                (Lift::Extension(minimal), _) => {
                    let (_, embedding, root) = extend_field(minimal)?;
                    let moved = chart.slice.map_field(&embedding).translate(scan_idx, &root);
                    let child = build_node(&rename_child(&moved), depth + 1, limit, opts, Some(inv))?;
                    point.verdict = verdict_of(&child);
                    child
                }
            };
            children.push(Edge {
                via: div.to_string(),
                chart: report.chart.clone(),
                point: point.point.clone(),
                orbit_size: m,
                extension_degree: point.extension_degree,
                node: child,
            });
        }
        report.points.push(point);
    }
    Ok(report)
}

/// One geometric point chosen out of a coarse point's fiber.
enum Lift {
    Rational(Scalar),
    /// Minimal polynomial of the chosen representative.
    Extension(UnivariatePoly),
}

impl Lift {
    fn display(&self, var: &str) -> String {
        match self {
            Lift::Rational(c) => c.to_string(),
            Lift::Extension(minimal) => minimal.display_with(var),
        }
    }

    fn degree(&self) -> u64 {
        match self {
            Lift::Rational(_) => 1,
            Lift::Extension(minimal) => minimal.degree().expect("nonconstant minimal") as u64,
        }
    }
}

/// The canonical root of `lift`: rational if possible, otherwise the
/// smallest irreducible factor by coefficient key.
fn lift_representative(lift: &UnivariatePoly, seed: u64) -> Lift {
    let parts = factor_univariate(lift, seed).parts;
    let roots: Vec<Scalar> = parts
        .iter()
        .filter(|p| p.poly.degree() == Some(1))
        .map(|p| p.poly.coeff(0).neg())
        .collect();
    if let Some(best) = roots.into_iter().min() {
        return Lift::Rational(best);
    }
    let minimal = parts
        .into_iter()
        .map(|p| p.poly)
        .min_by_key(|q| q.coeffs().iter().map(Scalar::canonical_key).collect::<Vec<_>>())
        .expect("a nonconstant polynomial has factors");
    Lift::Extension(minimal)
}

/// `t^m - v0` over the field of `f`.
fn monomial_minus(f: &MPoly, m: u64, v0: &Scalar) -> UnivariatePoly {
    let field = f.field().clone();
    let mut coeffs = vec![field.zero(); m as usize + 1];
    coeffs[0] = v0.neg();
    coeffs[m as usize] = field.one();
    UnivariatePoly::new(field, coeffs)
}

/// `psi(t^m)`.
fn spread_exponents(psi: &UnivariatePoly, m: u64) -> UnivariatePoly {
    let field = psi.field().clone();
    let deg = psi.degree().expect("nonconstant coarse factor");
    let mut coeffs = vec![field.zero(); deg * m as usize + 1];
    for (k, c) in psi.coeffs().iter().enumerate() {
        coeffs[k * m as usize] = c.clone();
    }
    UnivariatePoly::new(field, coeffs)
}

/// Split `r = t^shift * folded(t^m)`; semi-invariance under the stabilizer
/// guarantees all exponents of `r` agree mod `m`.
fn fold_semi_invariant(r: &UnivariatePoly, m: u64) -> (u32, UnivariatePoly) {
    let m = m as usize;
    let shift = r
        .coeffs()
        .iter()
        .position(|c| !c.is_zero())
        .expect("a divisor restriction is nonzero");
    let mut folded = Vec::new();
    for (i, c) in r.coeffs().iter().enumerate().skip(shift) {
        assert!(
            c.is_zero() || (i - shift).is_multiple_of(m),
            "restriction is not semi-invariant: exponents {i} and {shift} differ mod {m}"
        );
        if (i - shift).is_multiple_of(m) {
            folded.push(c.clone());
        }
    }
    (shift as u32, UnivariatePoly::new(r.field().clone(), folded))
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

/// Check the slice origin of a chart that owns no divisor: the one point of
/// the exceptional locus its neighbours cannot see.
fn examine_origin(
    chart: &Chart,
    depth: u64,
    limit: u64,
    opts: &ResolveOptions,
    inv: &(BigRational, BigRational),
    children: &mut Vec<Edge>,
) -> Result<OriginReport, ResolveError> {
    let label = chart_label(chart);
    if !chart.origin_value().is_zero() {
        return Ok(OriginReport { chart: label, on_curve: false, verdict: "off-curve".to_string() });
    }
    if !chart.is_etale {
        return Err(ResolveError::ArtinChartObstruction { chart: label });
    }
    let child_poly = rename_child(&chart.slice);
    let child = build_node(&child_poly, depth + 1, limit, opts, Some(inv))?;
    let verdict = verdict_of(&child);
    children.push(Edge {
        via: "origin".to_string(),
        chart: label.clone(),
        point: "(0, 0)".to_string(),
        orbit_size: 1,
        extension_degree: 1,
        node: child,
    });
    Ok(OriginReport { chart: label, on_curve: true, verdict })
}

fn verdict_of(node: &ResolutionNode) -> String {
    match node.status {
        NodeStatus::SmoothReduced => "smooth".to_string(),
        _ => "singular".to_string(),
    }
}

/// Child nodes live in fresh local coordinates so chart names never stack.
fn rename_child(slice: &MPoly) -> MPoly {
    slice.with_vars(&CHILD_VARS)
}

fn chart_label(chart: &Chart) -> String {
    format!("{} != 0", chart.inverted.join(" "))
}

fn describe(cp: &CharPolyhedron, blowup: &Blowup) -> Analysis {
    let frame = &cp.frame;
    let vars = cp.prepared.vars();
    let mut preparation = Vec::new();
    if !frame.scale.is_one() {
        preparation.push(format!("divide by {}", frame.scale));
    }
    for step in &frame.steps {
        let (z, x) = (&vars[frame.z], &vars[frame.x]);
        preparation.push(format!("{z} -> {z} + ({})*{x}^{}", step.lambda, step.exponent));
    }
    let (mode, kappa, swapped) = match blowup.kind {
        BlowupKind::Weighted => ("weighted", None, false),
        BlowupKind::MultiWeighted { kappa, swapped } => ("multi-weighted", Some(kappa), swapped),
    };
    Analysis {
        invariant: [cp.center.invariant.0.to_string(), cp.center.invariant.1.to_string()],
        delta: cp.delta.to_string(),
        invariant_value: Some(cp.center.invariant.clone()),
        center: CenterReport {
            z: cp.center.z_name.clone(),
            x: cp.center.x_name.clone(),
            w_z: cp.center.w_z,
            w_x: cp.center.w_x,
            ell: cp.center.ell,
        },
        preparation,
        mode: mode.to_string(),
        kappa,
        swapped,
        fan: blowup.fan.rays().iter().map(|&(a, b)| [a, b]).collect(),
        stabilizers: blowup.fan.determinants(),
        alpha: blowup.alpha,
        beta: blowup.beta,
        is_dm: blowup.is_dm,
        scans: Vec::new(),
        origins: Vec::new(),
    }
}
