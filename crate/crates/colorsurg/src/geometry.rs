//! Triangular-lattice coordinates for hexagonal (6.6.6) color codes.
//!
//! Faces are lattice points (a, b); qubits are the elementary triangles between
//! them. A point's color is (a - b) mod 3 (0 red, 1 green, 2 blue). The lines
//! a - b = c and a + 2b = c carry color c mod 3; `val` = 2a + b indexes the
//! vertical lines.

use serde::{Deserialize, Serialize};

pub type Point = (i64, i64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Green,
    Blue,
}

impl Color {
    pub fn from_index(i: i64) -> Self {
        match i.rem_euclid(3) {
            0 => Color::Red,
            1 => Color::Green,
            _ => Color::Blue,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Color::Red => "red",
            Color::Green => "green",
            Color::Blue => "blue",
        }
    }
}

pub fn color(p: Point) -> Color {
    Color::from_index(p.0 - p.1)
}

pub fn val(p: Point) -> i64 {
    2 * p.0 + p.1
}

pub fn diag(p: Point) -> i64 {
    p.0 - p.1
}

pub fn anti(p: Point) -> i64 {
    p.0 + 2 * p.1
}

/// Move along a vertical line: keeps `val` and color, adds 3s to a - b.
pub fn shift(p: Point, s: i64) -> Point {
    (p.0 + s, p.1 - 2 * s)
}

/// Reflection exchanging a - b and a + 2b; keeps colors.
pub fn mirror(p: Point) -> Point {
    (p.0 + p.1, -p.1)
}

/// An elementary triangle, corners sorted.
pub type Tri = [Point; 3];

pub fn tri(mut t: [Point; 3]) -> Tri {
    t.sort();
    t
}

/// All triangles with base corner in the box whose corners satisfy `pred`.
pub fn triangles_in(amin: i64, amax: i64, bmin: i64, bmax: i64, pred: impl Fn(&Tri) -> bool) -> Vec<Tri> {
    let mut out = Vec::new();
    for a in amin..=amax {
        for b in bmin..=bmax {
            for t in [
                tri([(a, b), (a + 1, b), (a, b + 1)]),
                tri([(a + 1, b), (a, b + 1), (a + 1, b + 1)]),
            ] {
                if pred(&t) {
                    out.push(t);
                }
            }
        }
    }
    out.sort();
    out
}

/// Box of base corners covering the region val in [v0, v1], a - b in [t0, t1].
pub fn bounding_box(v0: i64, v1: i64, t0: i64, t1: i64) -> (i64, i64, i64, i64) {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for v in [v0, v1] {
        for t in [t0, t1] {
            a.push((v + t).div_euclid(3));
            b.push((v - 2 * t).div_euclid(3));
        }
    }
    (
        *a.iter().min().unwrap() - 2,
        *a.iter().max().unwrap() + 2,
        *b.iter().min().unwrap() - 2,
        *b.iter().max().unwrap() + 2,
    )
}

/// Corner of the given color.
pub fn corner(t: &Tri, c: Color) -> Point {
    *t.iter().find(|&&p| color(p) == c).expect("triangle has one corner of each color")
}

/// Triangle sharing the green-blue side, i.e. the partner across the red edge.
pub fn red_partner(t: &Tri) -> Tri {
    let r = corner(t, Color::Red);
    let g = corner(t, Color::Green);
    let b = corner(t, Color::Blue);
    tri([g, b, (g.0 + b.0 - r.0, g.1 + b.1 - r.1)])
}

/// Integer label of a triangle: sum of its corners (three times its centroid).
pub fn tri_coord(t: &Tri) -> [i64; 2] {
    [t[0].0 + t[1].0 + t[2].0, t[0].1 + t[1].1 + t[2].1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transforms_preserve_color() {
        for a in -4..4 {
            for b in -4..4 {
                let p = (a, b);
                assert_eq!(color(shift(p, 2)), color(p));
                assert_eq!(val(shift(p, 2)), val(p));
                assert_eq!(color(mirror(p)), color(p));
                assert_eq!(diag(mirror(p)), anti(p));
            }
        }
    }

    #[test]
    fn red_partner_is_involution() {
        let t = tri([(0, 0), (1, 0), (0, 1)]);
        let u = red_partner(&t);
        assert_ne!(t, u);
        assert_eq!(red_partner(&u), t);
    }
}
