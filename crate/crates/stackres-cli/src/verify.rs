//! Re-checking a stored resolution tree.
//!
//! The JSON carries everything the driver claimed: per-node polynomials,
//! orders, invariants, and the tree structure.  Verification re-parses each
//! node, recomputes the cheap quantities, and re-asserts the structural
//! claims — strict order drop on every edge, lexicographic invariant drop,
//! depth bounded by the initial order — without trusting the stored values.

use num_rational::BigRational;
use stackres::charpoly::characteristic_polyhedron;
use stackres::field::FieldDescriptor;
use stackres::poly::{parse_poly, radical, MPoly};
use stackres::resolve::{NodeStatus, ResolutionNode, ResolutionTree, CHILD_VARS, TREE_SCHEMA};
use std::str::FromStr;

pub struct Report {
    pub lines: Vec<String>,
    pub failures: u64,
}

impl Report {
    fn ok(&mut self, what: &str) {
        self.lines.push(format!("ok   {what}"));
    }

    fn fail(&mut self, what: &str, detail: &str) {
        self.failures += 1;
        self.lines.push(format!("FAIL {what}: {detail}"));
    }

    fn check(&mut self, what: &str, pass: bool, detail: &str) {
        if pass {
            self.ok(what);
        } else {
            self.fail(what, detail);
        }
    }
}

pub fn verify_tree(tree: &ResolutionTree) -> Report {
    let mut report = Report { lines: Vec::new(), failures: 0 };
    report.check(
        "schema",
        tree.schema == TREE_SCHEMA,
        &format!("expected {TREE_SCHEMA}, found {}", tree.schema),
    );
    report.check(
        "depth bound",
        tree.max_depth() <= tree.initial_order,
        &format!("depth {} exceeds initial order {}", tree.max_depth(), tree.initial_order),
    );
    walk(tree, "n0", &tree.root, None, &mut report);
    report
}

/// Parse one node's polynomial in its documented coordinates.
fn node_poly(tree: &ResolutionTree, id: &str, node: &ResolutionNode) -> Result<MPoly, String> {
    let field = FieldDescriptor::parse_spec(&node.field).map_err(|e| e.to_string())?;
    let vars: Vec<&str> = if id == "n0" {
        tree.vars.iter().map(|s| s.as_str()).collect()
    } else {
        CHILD_VARS.to_vec()
    };
    parse_poly(&node.poly, &field, &vars).map_err(|e| e.to_string())
}

fn invariant_of(node: &ResolutionNode) -> Option<(BigRational, BigRational)> {
    let a = node.analysis.as_ref()?;
    let first = BigRational::from_str(&a.invariant[0]).ok()?;
    let second = BigRational::from_str(&a.invariant[1]).ok()?;
    Some((first, second))
}

fn walk(
    tree: &ResolutionTree,
    id: &str,
    node: &ResolutionNode,
    parent: Option<&ResolutionNode>,
    report: &mut Report,
) {
    // non-rational leaves carry a factor instead of coordinates; their claim
    // is the multiplicity bound checked at the edge below
    if let NodeStatus::NonRationalPoint { multiplicity, .. } = &node.status {
        let parent_order = parent.and_then(|p| p.order).unwrap_or(0);
        report.check(
            &format!("{id} leaf multiplicity bound"),
            u64::from(*multiplicity) < parent_order,
            &format!("multiplicity {multiplicity} not below parent order {parent_order}"),
        );
        return;
    }

    let f = match node_poly(tree, id, node) {
        Ok(f) => f,
        Err(e) => {
            report.fail(&format!("{id} parses"), &e);
            return;
        }
    };
    if f.is_zero() {
        report.fail(&format!("{id} parses"), "stored polynomial is zero");
        return;
    }
    report.check(
        &format!("{id} order"),
        f.order() == node.order,
        &format!("recomputed {:?}, stored {:?}", f.order(), node.order),
    );
    report.check(
        &format!("{id} radical order"),
        radical(&f).order() == node.radical_order,
        &format!("recomputed {:?}, stored {:?}", radical(&f).order(), node.radical_order),
    );
    if id == "n0" {
        report.check(
            "input round-trips",
            tree.input == node.poly && Some(tree.initial_order) == node.order,
            "root does not match the recorded input",
        );
    }

    if let Some(analysis) = &node.analysis {
        match characteristic_polyhedron(&f) {
            Ok(cp) => {
                let stored = [
                    analysis.invariant[0].clone(),
                    analysis.invariant[1].clone(),
                ];
                let fresh = [
                    cp.center.invariant.0.to_string(),
                    cp.center.invariant.1.to_string(),
                ];
                report.check(
                    &format!("{id} invariant"),
                    stored == fresh,
                    &format!("recomputed ({}, {}), stored ({}, {})", fresh[0], fresh[1], stored[0], stored[1]),
                );
                report.check(
                    &format!("{id} delta"),
                    analysis.delta == cp.delta.to_string(),
                    &format!("recomputed {}, stored {}", cp.delta, analysis.delta),
                );
                let weights = (cp.center.w_z, cp.center.w_x, cp.center.ell);
                let stored_w = (analysis.center.w_z, analysis.center.w_x, analysis.center.ell);
                report.check(
                    &format!("{id} center"),
                    weights == stored_w,
                    &format!("recomputed {weights:?}, stored {stored_w:?}"),
                );
            }
            Err(e) => report.fail(&format!("{id} analysis recomputes"), &e.to_string()),
        }
    }

    for (i, edge) in node.children.iter().enumerate() {
        let child_id = format!("{id}-{i}");
        if let (Some(po), Some(co)) = (node.order, edge.node.order) {
            report.check(
                &format!("{child_id} order drop"),
                co < po,
                &format!("child order {co} not below parent order {po}"),
            );
        }
        if let (Some(pi), Some(ci)) = (invariant_of(node), invariant_of(&edge.node)) {
            let lex = ci.0 < pi.0 || (ci.0 == pi.0 && ci.1 < pi.1);
            report.check(
                &format!("{child_id} invariant drop"),
                lex,
                &format!("({}, {}) does not drop below ({}, {})", ci.0, ci.1, pi.0, pi.1),
            );
        }
        walk(tree, &child_id, &edge.node, Some(node), report);
    }
}
