//! Deterministic figure emission.
//!
//! Per analyzed node: a Newton polygon SVG showing the prepared support, the
//! polygon boundary, and the supporting lines of the chosen center (the
//! weight line with its axis intercepts, plus the auxiliary line of the
//! subdivision ray when the blow-up was multi-weighted).  Per blow-up: a fan
//! diagram, drawn before and after subdivision in the multi-weighted case.
//!
//! All geometry is computed with exact rationals and printed at a fixed
//! scale; nothing in the output depends on time or environment, so the bytes
//! are a pure function of the tree.  TikZ companions carry the coordinates
//! as literal fractions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use stackres::charpoly::{characteristic_polyhedron, CharPolyhedron};
use stackres::field::FieldDescriptor;
use stackres::poly::{parse_poly, NewtonPolygon};
use stackres::resolve::{Analysis, ResolutionNode, ResolutionTree, CHILD_VARS};
use std::fs;
use std::io::{self, Error, ErrorKind};
use std::path::Path;

/// Pixels per lattice unit.
const UNIT: i64 = 32;
const MARGIN: i64 = 46;
/// Drawn length of a fan ray, in lattice units.
const RAY_LEN: i64 = 5;

/// Write every figure for the tree into `dir`, plus a `manifest.json`
/// listing the files written (empty for a tree with no blow-ups).  Returns
/// the manifest.
pub fn emit_figures(tree: &ResolutionTree, dir: &Path, tikz: bool) -> io::Result<Vec<String>> {
    fs::create_dir_all(dir)?;
    let mut manifest = Vec::new();
    let mut stack = vec![("n0".to_string(), &tree.root)];
    while let Some((id, node)) = stack.pop() {
        if let Some(analysis) = &node.analysis {
            let cp = recompute(tree, &id, node)?;
            let newton = newton_svg(&id, &cp, analysis);
            write_figure(dir, &format!("{id}-newton.svg"), &newton, &mut manifest)?;
            let fan = fan_svg(&id, analysis);
            write_figure(dir, &format!("{id}-fan.svg"), &fan, &mut manifest)?;
            if tikz {
                let t = newton_tikz(&cp, analysis);
                write_figure(dir, &format!("{id}-newton.tex"), &t, &mut manifest)?;
                let t = fan_tikz(analysis);
                write_figure(dir, &format!("{id}-fan.tex"), &t, &mut manifest)?;
            }
        }
        // push in reverse so children emit in tree order
        for (i, edge) in node.children.iter().enumerate().rev() {
            stack.push((format!("{id}-{i}"), &edge.node));
        }
    }
    let json = serde_json::to_string_pretty(&manifest).expect("a string list serializes");
    fs::write(dir.join("manifest.json"), json + "\n")?;
    Ok(manifest)
}

fn write_figure(
    dir: &Path,
    name: &str,
    body: &str,
    manifest: &mut Vec<String>,
) -> io::Result<()> {
    fs::write(dir.join(name), body)?;
    manifest.push(name.to_string());
    Ok(())
}

/// Re-derive the characteristic polyhedron of a node from its stored text.
fn recompute(
    tree: &ResolutionTree,
    id: &str,
    node: &ResolutionNode,
) -> io::Result<CharPolyhedron> {
    let bad = |msg: String| Error::new(ErrorKind::InvalidData, msg);
    let field = FieldDescriptor::parse_spec(&node.field)
        .map_err(|e| bad(format!("node {id}: {e}")))?;
    let vars: Vec<&str> = if id == "n0" {
        tree.vars.iter().map(|s| s.as_str()).collect()
    } else {
        CHILD_VARS.to_vec()
    };
    let poly = parse_poly(&node.poly, &field, &vars)
        .map_err(|e| bad(format!("node {id}: {e}")))?;
    characteristic_polyhedron(&poly).map_err(|e| bad(format!("node {id}: {e}")))
}

// ---- exact coordinates ----

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn ratu(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact decimal rendering of a rational, truncated toward zero at four
/// fractional digits.  Deterministic; exact whenever the denominator divides
/// a power of ten times the scale.
fn fixed(r: &BigRational) -> String {
    let sign = if r.is_negative() { "-" } else { "" };
    let a = r.abs();
    let int = a.trunc().to_integer();
    let mut frac = &a - &a.trunc();
    let mut digits = String::new();
    for _ in 0..4 {
        if frac.is_zero() {
            break;
        }
        frac *= rat(10);
        digits.push_str(&frac.trunc().to_integer().to_string());
        frac -= frac.trunc();
    }
    while digits.ends_with('0') {
        digits.pop();
    }
    if digits.is_empty() {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{digits}")
    }
}

fn ceil_u64(r: &BigRational) -> u64 {
    r.ceil().to_integer().to_u64().expect("figure extents are small nonnegative numbers")
}

/// A lattice viewport: maps exact lattice coordinates to SVG pixels.
struct View {
    extent_x: u64,
    extent_y: u64,
    label_room: i64,
}

impl View {
    fn width(&self) -> i64 {
        2 * MARGIN + self.extent_x as i64 * UNIT + self.label_room
    }

    fn height(&self) -> i64 {
        2 * MARGIN + self.extent_y as i64 * UNIT
    }

    fn x(&self, a: &BigRational) -> String {
        fixed(&(rat(MARGIN) + a * rat(UNIT)))
    }

    fn y(&self, b: &BigRational) -> String {
        fixed(&(rat(self.height() - MARGIN) - b * rat(UNIT)))
    }

    fn xu(&self, a: u64) -> String {
        self.x(&ratu(a))
    }

    fn yu(&self, b: u64) -> String {
        self.y(&ratu(b))
    }
}

fn svg_open(out: &mut String, w: i64, h: i64, title: &str) {
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
    ));
    out.push_str(&format!("  <title>{title}</title>\n"));
    out.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"#ffffff\"/>\n"
    ));
}

fn line(out: &mut String, x1: &str, y1: &str, x2: &str, y2: &str, style: &str) {
    out.push_str(&format!(
        "  <line x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\" {style}/>\n"
    ));
}

fn text(out: &mut String, x: &str, y: &str, anchor: &str, s: &str) {
    out.push_str(&format!(
        "  <text x=\"{x}\" y=\"{y}\" font-family=\"monospace\" font-size=\"13\" \
         text-anchor=\"{anchor}\">{s}</text>\n"
    ));
}

fn grid(out: &mut String, view: &View) {
    let thin = "stroke=\"#dddddd\" stroke-width=\"1\"";
    let axis = "stroke=\"#555555\" stroke-width=\"1.5\"";
    for i in 0..=view.extent_x {
        let style = if i == 0 { axis } else { thin };
        line(out, &view.xu(i), &view.yu(0), &view.xu(i), &view.yu(view.extent_y), style);
    }
    for j in 0..=view.extent_y {
        let style = if j == 0 { axis } else { thin };
        line(out, &view.xu(0), &view.yu(j), &view.xu(view.extent_x), &view.yu(j), style);
    }
}

// ---- Newton polygon figure ----

fn newton_svg(id: &str, cp: &CharPolyhedron, analysis: &Analysis) -> String {
    let support = support_points(cp);
    let polygon = NewtonPolygon::from_points(&support).expect("prepared polynomial is nonzero");
    let a1 = ratu(cp.nu);
    let a2 = a1.clone() * cp.delta.clone();
    let view = viewport(&support, &a1, &a2, analysis);

    let mut out = String::new();
    svg_open(
        &mut out,
        view.width(),
        view.height(),
        &format!("{id}: Newton polygon, invariant ({}, {})", analysis.invariant[0], analysis.invariant[1]),
    );
    grid(&mut out, &view);

    // weight supporting line with its intercepts (0, nu) and (nu*delta, 0)
    let dashed = "stroke=\"#c23b22\" stroke-width=\"1.5\" stroke-dasharray=\"7 4\"";
    line(&mut out, &view.x(&rat(0)), &view.y(&a1), &view.x(&a2), &view.y(&rat(0)), dashed);
    text(
        &mut out,
        &fixed(&(rat(MARGIN) + rat(8))),
        &offset_y(&view, &a1, -8),
        "start",
        &format!("nu = {}", analysis.invariant[0]),
    );
    text(
        &mut out,
        &offset_x(&a2, 8),
        &offset_y(&view, &rat(0), -8),
        "start",
        &format!("nu*delta = {}", analysis.invariant[1]),
    );

    // the subdivision ray's own supporting line, when there is one
    if let (Some(kappa), Some(beta)) = (analysis.kappa, analysis.beta) {
        let b = ratu(beta);
        let b_over_k = b.clone() / ratu(kappa);
        let dotted = "stroke=\"#7a4fb2\" stroke-width=\"1.5\" stroke-dasharray=\"2 4\"";
        line(&mut out, &view.x(&b), &view.y(&rat(0)), &view.x(&rat(0)), &view.y(&b_over_k), dotted);
        text(
            &mut out,
            &offset_x(&b, 8),
            &offset_y(&view, &rat(0), 16),
            "start",
            &format!("nu_u = {beta}"),
        );
    }

    // polygon boundary: vertical ray, the bounded edges, horizontal ray
    let verts = polygon.vertices();
    let first = verts[0];
    let last = verts[verts.len() - 1];
    let mut path = format!("M {} {}", view.xu(first.0), view.yu(view.extent_y));
    for &(a, b) in verts {
        path.push_str(&format!(" L {} {}", view.xu(a), view.yu(b)));
    }
    path.push_str(&format!(" L {} {}", view.xu(view.extent_x), view.yu(last.1)));
    out.push_str(&format!(
        "  <path d=\"{path}\" fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"2\"/>\n"
    ));

    for &(a, b) in &support {
        out.push_str(&format!(
            "  <circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"#333333\"/>\n",
            view.xu(a),
            view.yu(b)
        ));
    }
    for &(a, b) in verts {
        out.push_str(&format!(
            "  <circle cx=\"{}\" cy=\"{}\" r=\"4.5\" fill=\"#1f6fb2\"/>\n",
            view.xu(a),
            view.yu(b)
        ));
    }

    out.push_str("</svg>\n");
    out
}

fn offset_x(a: &BigRational, dx: i64) -> String {
    fixed(&(rat(MARGIN) + a * rat(UNIT) + rat(dx)))
}

fn offset_y(view: &View, b: &BigRational, dy: i64) -> String {
    fixed(&(rat(view.height() - MARGIN) - b * rat(UNIT) + rat(dy)))
}

/// Support of the prepared polynomial in (x-exponent, z-exponent) order.
fn support_points(cp: &CharPolyhedron) -> Vec<(u64, u64)> {
    cp.prepared
        .terms()
        .map(|(exps, _)| (exps[cp.frame.x] as u64, exps[cp.frame.z] as u64))
        .collect()
}

fn viewport(
    support: &[(u64, u64)],
    a1: &BigRational,
    a2: &BigRational,
    analysis: &Analysis,
) -> View {
    let mut ex = support.iter().map(|p| p.0).max().unwrap_or(0).max(ceil_u64(a2));
    let mut ey = support.iter().map(|p| p.1).max().unwrap_or(0).max(ceil_u64(a1));
    if let (Some(kappa), Some(beta)) = (analysis.kappa, analysis.beta) {
        ex = ex.max(beta);
        ey = ey.max(ceil_u64(&(ratu(beta) / ratu(kappa))));
    }
    View { extent_x: ex + 1, extent_y: ey + 1, label_room: 150 }
}

// ---- fan figure ----

/// Panel title, rays, and ray labels for one fan drawing.
type FanPanel = (&'static str, Vec<[u64; 2]>, Vec<&'static str>);

/// Rays and labels for each panel: the plain weighted fan, and for a
/// multi-weighted blow-up also the subdivided fan.
fn fan_panels(analysis: &Analysis) -> Vec<FanPanel> {
    let f = &analysis.fan;
    if f.len() == 4 {
        vec![
            ("before subdivision", vec![f[0], f[1], f[3]], vec!["e1", "w", "e2"]),
            ("after subdivision", f.clone(), vec!["e1", "w", "u", "e2"]),
        ]
    } else {
        vec![("fan", f.clone(), vec!["e1", "w", "e2"])]
    }
}

fn fan_svg(id: &str, analysis: &Analysis) -> String {
    let panels = fan_panels(analysis);
    let panel_w = 2 * MARGIN + (RAY_LEN + 1) * UNIT;
    let w = panel_w * panels.len() as i64;
    let h = 2 * MARGIN + (RAY_LEN + 1) * UNIT + 24;
    let mut out = String::new();
    svg_open(&mut out, w, h, &format!("{id}: blow-up fan"));
    for (i, (name, rays, labels)) in panels.iter().enumerate() {
        let ox = rat(i as i64 * panel_w + MARGIN);
        let oy = rat(h - MARGIN);
        text(&mut out, &fixed(&ox), &fixed(&(rat(24))), "start", name);
        // axes of the panel's quadrant
        let axis = "stroke=\"#bbbbbb\" stroke-width=\"1\"";
        let ax_end = fixed(&(ox.clone() + rat((RAY_LEN + 1) * UNIT)));
        let ay_end = fixed(&(oy.clone() - rat((RAY_LEN + 1) * UNIT)));
        line(&mut out, &fixed(&ox), &fixed(&oy), &ax_end, &fixed(&oy), axis);
        line(&mut out, &fixed(&ox), &fixed(&oy), &fixed(&ox), &ay_end, axis);
        for (j, ray) in rays.iter().enumerate() {
            let (ex, ey) = ray_end(*ray);
            let sx = fixed(&(ox.clone() + ex.clone() * rat(UNIT)));
            let sy = fixed(&(oy.clone() - ey.clone() * rat(UNIT)));
            line(
                &mut out,
                &fixed(&ox),
                &fixed(&oy),
                &sx,
                &sy,
                "stroke=\"#1f6fb2\" stroke-width=\"2\"",
            );
            out.push_str(&format!("  <circle cx=\"{sx}\" cy=\"{sy}\" r=\"3.5\" fill=\"#1f6fb2\"/>\n"));
            let lx = fixed(&(ox.clone() + ex.clone() * rat(UNIT) + label_shift(*ray).0));
            let ly = fixed(&(oy.clone() - ey * rat(UNIT) + label_shift(*ray).1));
            text(&mut out, &lx, &ly, "start", &format!("{} = ({}, {})", labels[j], ray[0], ray[1]));
        }
        // adjacent-ray determinants, placed along the angle bisector
        for pair in rays.windows(2) {
            let d = pair[0][0] as i64 * pair[1][1] as i64 - pair[0][1] as i64 * pair[1][0] as i64;
            let (x1, y1) = ray_end(pair[0]);
            let (x2, y2) = ray_end(pair[1]);
            let mx = (x1 + x2) * rat(UNIT) / rat(4);
            let my = (y1 + y2) * rat(UNIT) / rat(4);
            text(
                &mut out,
                &fixed(&(ox.clone() + mx)),
                &fixed(&(oy.clone() - my)),
                "middle",
                &format!("det {d}"),
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Endpoint of a ray scaled so its longer component spans `RAY_LEN` units.
fn ray_end(ray: [u64; 2]) -> (BigRational, BigRational) {
    let max = ray[0].max(ray[1]).max(1);
    (ratu(ray[0] * RAY_LEN as u64) / ratu(max), ratu(ray[1] * RAY_LEN as u64) / ratu(max))
}

fn label_shift(ray: [u64; 2]) -> (BigRational, BigRational) {
    if ray[1] >= ray[0] {
        (rat(8), rat(-6)) // steep ray: label up-right
    } else {
        (rat(8), rat(14)) // shallow ray: label below
    }
}

// ---- TikZ companions ----

fn newton_tikz(cp: &CharPolyhedron, analysis: &Analysis) -> String {
    let support = support_points(cp);
    let polygon = NewtonPolygon::from_points(&support).expect("prepared polynomial is nonzero");
    let a1 = ratu(cp.nu);
    let a2 = a1.clone() * cp.delta.clone();
    let view = viewport(&support, &a1, &a2, analysis);
    let mut out = String::new();
    out.push_str("\\begin{tikzpicture}[scale=0.7]\n");
    out.push_str(&format!(
        "  \\draw[step=1,gray!40,very thin] (0,0) grid ({},{});\n",
        view.extent_x, view.extent_y
    ));
    out.push_str(&format!(
        "  \\draw[->] (0,0) -- ({},0);\n  \\draw[->] (0,0) -- (0,{});\n",
        view.extent_x, view.extent_y
    ));
    let verts = polygon.vertices();
    let mut path = format!("({},{})", verts[0].0, view.extent_y);
    for &(a, b) in verts {
        path.push_str(&format!(" -- ({a},{b})"));
    }
    path.push_str(&format!(" -- ({},{})", view.extent_x, verts[verts.len() - 1].1));
    out.push_str(&format!("  \\draw[thick,blue] {path};\n"));
    for &(a, b) in &support {
        out.push_str(&format!("  \\fill ({a},{b}) circle (2pt);\n"));
    }
    out.push_str(&format!(
        "  \\draw[red,dashed] (0,{{{a1}}}) node[left] {{$\\nu = {}$}} -- ({{{a2}}},0) \
         node[below right] {{$\\nu\\delta = {}$}};\n",
        analysis.invariant[0], analysis.invariant[1]
    ));
    if let (Some(kappa), Some(beta)) = (analysis.kappa, analysis.beta) {
        out.push_str(&format!(
            "  \\draw[violet,dotted] ({beta},0) node[below] {{$\\nu_u = {beta}$}} -- (0,{{{beta}/{kappa}}});\n"
        ));
    }
    out.push_str("\\end{tikzpicture}\n");
    out
}

fn fan_tikz(analysis: &Analysis) -> String {
    let mut out = String::new();
    for (name, rays, labels) in fan_panels(analysis) {
        out.push_str(&format!("% {name}\n\\begin{{tikzpicture}}[scale=0.7]\n"));
        for (j, ray) in rays.iter().enumerate() {
            let max = ray[0].max(ray[1]).max(1);
            out.push_str(&format!(
                "  \\draw[->,thick] (0,0) -- ({{{}*{RAY_LEN}/{max}}},{{{}*{RAY_LEN}/{max}}}) \
                 node[right] {{${} = ({}, {})$}};\n",
                ray[0], ray[1], labels[j], ray[0], ray[1]
            ));
        }
        out.push_str("\\end{tikzpicture}\n");
    }
    out
}
