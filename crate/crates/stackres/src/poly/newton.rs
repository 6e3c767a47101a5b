//! The Newton polygon of a plane support set: the unbounded convex region
//! `conv(S + R^2_{>=0})`, kept as its finite vertex list.

use std::collections::BTreeSet;

/// Points of `S` not dominated componentwise by another point of `S`.
pub fn pareto_minimal(points: &[(u64, u64)]) -> Vec<(u64, u64)> {
    let set: BTreeSet<(u64, u64)> = points.iter().copied().collect();
    set.iter()
        .copied()
        .filter(|&(a, b)| !set.iter().any(|&(c, d)| (c, d) != (a, b) && c <= a && d <= b))
        .collect()
}

/// Vertices of the Newton polygon, sorted by increasing first coordinate
/// (so the second coordinate strictly decreases).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    vertices: Vec<(u64, u64)>,
}

impl NewtonPolygon {
    /// `None` when the support is empty.
    pub fn from_points(points: &[(u64, u64)]) -> Option<NewtonPolygon> {
        if points.is_empty() {
            return None;
        }
        // Pareto-minimal points have pairwise distinct first coordinates and
        // arrive sorted with the second coordinate strictly decreasing
        let staircase = pareto_minimal(points);
        let mut hull: Vec<(u64, u64)> = Vec::new();
        for p in staircase {
            while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p);
        }
        Some(NewtonPolygon { vertices: hull })
    }

    pub fn vertices(&self) -> &[(u64, u64)] {
        &self.vertices
    }

    /// Bounded edges as consecutive vertex pairs.
    pub fn edges(&self) -> Vec<((u64, u64), (u64, u64))> {
        self.vertices.windows(2).map(|w| (w[0], w[1])).collect()
    }

    /// Primitive inward normals of the bounded edges, in edge order.  Each
    /// normal is the weight vector that is constant on its edge.
    pub fn edge_normals(&self) -> Vec<(u64, u64)> {
        self.edges()
            .iter()
            .map(|&((a1, a2), (b1, b2))| {
                let dx = b1 - a1;
                let dy = a2 - b2;
                let g = gcd(dy, dx);
                (dy / g, dx / g)
            })
            .collect()
    }

    /// Minimum of `w . v` over the polygon (attained at a vertex).
    pub fn support_value(&self, w: (u64, u64)) -> u64 {
        self.vertices
            .iter()
            .map(|&(a, b)| a * w.0 + b * w.1)
            .min()
            .expect("polygon has at least one vertex")
    }

    /// Vertices where `w` attains its minimum: one vertex for a generic
    /// weight, two when `w` is normal to an edge.
    pub fn face(&self, w: (u64, u64)) -> Vec<(u64, u64)> {
        let min = self.support_value(w);
        self.vertices
            .iter()
            .copied()
            .filter(|&(a, b)| a * w.0 + b * w.1 == min)
            .collect()
    }
}

/// Cross product of AB x BC; positive means a convex (left) turn on the way
/// from the upper-left vertex down to the lower-right one.
fn cross(a: (u64, u64), b: (u64, u64), c: (u64, u64)) -> i128 {
    let (abx, aby) = (b.0 as i128 - a.0 as i128, b.1 as i128 - a.1 as i128);
    let (bcx, bcy) = (c.0 as i128 - b.0 as i128, c.1 as i128 - b.1 as i128);
    abx * bcy - aby * bcx
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pareto_keeps_the_staircase() {
        let pts = [(0, 2), (1, 2), (3, 0), (2, 1), (5, 5)];
        assert_eq!(pareto_minimal(&pts), vec![(0, 2), (2, 1), (3, 0)]);
    }

    #[test]
    fn cusp_polygon() {
        let np = NewtonPolygon::from_points(&[(0, 2), (3, 0)]).unwrap();
        assert_eq!(np.vertices(), &[(0, 2), (3, 0)]);
        assert_eq!(np.edge_normals(), vec![(2, 3)]);
        assert_eq!(np.support_value((2, 3)), 6);
        assert_eq!(np.face((2, 3)), vec![(0, 2), (3, 0)]);
        assert_eq!(np.face((1, 1)), vec![(0, 2)]);
    }

    #[test]
    fn collinear_and_dominated_points_are_not_vertices() {
        // (1,1) lies on the segment from (0,2) to (2,0); (4,4) is dominated
        let np = NewtonPolygon::from_points(&[(0, 2), (1, 1), (2, 0), (4, 4)]).unwrap();
        assert_eq!(np.vertices(), &[(0, 2), (2, 0)]);
    }

    #[test]
    fn weighted_staircase_hull() {
        // minimal monomials with 3a + 4b >= 16; only three survive the hull
        let staircase = [(0, 4), (2, 3), (3, 2), (4, 1), (6, 0)];
        let np = NewtonPolygon::from_points(&staircase).unwrap();
        assert_eq!(np.vertices(), &[(0, 4), (4, 1), (6, 0)]);
        assert_eq!(np.edge_normals(), vec![(3, 4), (1, 2)]);
    }

    #[test]
    fn single_point_polygon() {
        let np = NewtonPolygon::from_points(&[(2, 3)]).unwrap();
        assert_eq!(np.vertices(), &[(2, 3)]);
        assert!(np.edges().is_empty());
        assert_eq!(NewtonPolygon::from_points(&[]), None);
    }
}
