//! Color-code lattices: triangular patches, the thin color code, validation and
//! brute-force distances.

use crate::error::{Error, Result};
use crate::geometry::{self, color, tri_coord, Color, Point, Tri};
use crate::gf2::{Basis, BitVec};
use crate::pauli::{Pauli, PauliOperator};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StabilizerType {
    X,
    Z,
    Both,
}

impl StabilizerType {
    pub fn has_x(self) -> bool {
        matches!(self, StabilizerType::X | StabilizerType::Both)
    }

    pub fn has_z(self) -> bool {
        matches!(self, StabilizerType::Z | StabilizerType::Both)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryLabel {
    Red,
    Green,
    Blue,
    PauliX,
    PauliZ,
}

impl BoundaryLabel {
    pub fn from_color(c: Color) -> Self {
        match c {
            Color::Red => BoundaryLabel::Red,
            Color::Green => BoundaryLabel::Green,
            Color::Blue => BoundaryLabel::Blue,
        }
    }

    pub fn color(self) -> Option<Color> {
        match self {
            BoundaryLabel::Red => Some(Color::Red),
            BoundaryLabel::Green => Some(Color::Green),
            BoundaryLabel::Blue => Some(Color::Blue),
            _ => None,
        }
    }
}

/// A qubit; `coord` is the sum of its triangle's corners.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: usize,
    pub coord: [i64; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub color: Color,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub id: usize,
    pub color: Color,
    pub center: [i64; 2],
    pub vertices: Vec<usize>,
    pub stabilizer: StabilizerType,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Boundary {
    pub label: BoundaryLabel,
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorLattice {
    pub name: String,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub faces: Vec<Face>,
    pub boundaries: Vec<Boundary>,
}

/// Boundary line: label plus membership test for lattice points on it.
pub(crate) type BoundaryLine<'a> = (BoundaryLabel, &'a dyn Fn(Point) -> bool);

impl ColorLattice {
    /// Assemble a lattice from triangles. `face_rule` gets a point and the number of
    /// its triangles present and decides whether (and how) it is a stabilizer face.
    pub(crate) fn assemble(
        name: &str,
        tris: &[Tri],
        face_rule: impl Fn(Point, usize) -> Option<StabilizerType>,
        lines: &[BoundaryLine<'_>],
    ) -> Self {
        let mut tris = tris.to_vec();
        tris.sort();
        tris.dedup();
        let vertices = tris
            .iter()
            .enumerate()
            .map(|(id, t)| Vertex { id, coord: tri_coord(t) })
            .collect();
        let mut sides: BTreeMap<(Point, Point), Vec<usize>> = BTreeMap::new();
        let mut pts: BTreeMap<Point, Vec<usize>> = BTreeMap::new();
        for (i, t) in tris.iter().enumerate() {
            for (x, y) in [(0, 1), (0, 2), (1, 2)] {
                sides.entry((t[x], t[y])).or_default().push(i);
            }
            for &p in t {
                pts.entry(p).or_default().push(i);
            }
        }
        let mut edges = Vec::new();
        for ((p, q), ts) in &sides {
            if let [u, v] = ts[..] {
                let third = *tris[u].iter().find(|&&c| c != *p && c != *q).unwrap();
                edges.push(Edge { u, v, color: color(third) });
            }
        }
        let mut faces = Vec::new();
        for (p, qs) in &pts {
            if let Some(st) = face_rule(*p, qs.len()) {
                faces.push(Face {
                    id: faces.len(),
                    color: color(*p),
                    center: [p.0, p.1],
                    vertices: qs.clone(),
                    stabilizer: st,
                });
            }
        }
        let boundaries = lines
            .iter()
            .map(|(label, on)| Boundary {
                label: *label,
                vertices: (0..tris.len()).filter(|&i| tris[i].iter().any(|&c| on(c))).collect(),
            })
            .collect();
        ColorLattice {
            name: name.to_string(),
            vertices,
            edges,
            faces,
            boundaries,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.vertices.len()
    }

    pub fn x_checks(&self) -> Vec<BitVec> {
        let n = self.num_qubits();
        self.faces
            .iter()
            .filter(|f| f.stabilizer.has_x())
            .map(|f| BitVec::from_indices(n, f.vertices.iter().copied()))
            .collect()
    }

    pub fn z_checks(&self) -> Vec<BitVec> {
        let n = self.num_qubits();
        self.faces
            .iter()
            .filter(|f| f.stabilizer.has_z())
            .map(|f| BitVec::from_indices(n, f.vertices.iter().copied()))
            .collect()
    }

    /// All stabilizer generators: X-type faces first, then Z-type.
    pub fn stabilizers(&self) -> Vec<PauliOperator> {
        let n = self.num_qubits();
        let mut out = Vec::new();
        for f in self.faces.iter().filter(|f| f.stabilizer.has_x()) {
            out.push(PauliOperator::uniform(n, &f.vertices, Pauli::X));
        }
        for f in self.faces.iter().filter(|f| f.stabilizer.has_z()) {
            out.push(PauliOperator::uniform(n, &f.vertices, Pauli::Z));
        }
        out
    }

    pub fn num_logical(&self) -> usize {
        let n = self.num_qubits();
        n - crate::gf2::rank(&self.x_checks()) - crate::gf2::rank(&self.z_checks())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let l: ColorLattice = serde_json::from_str(s)?;
        l.check_indices()?;
        Ok(l)
    }

    fn check_indices(&self) -> Result<()> {
        let n = self.num_qubits();
        for (i, v) in self.vertices.iter().enumerate() {
            if v.id != i {
                return Err(Error::Validation(format!("vertex {i} has id {}", v.id)));
            }
        }
        let bad = self.edges.iter().any(|e| e.u >= n || e.v >= n)
            || self.faces.iter().any(|f| f.vertices.iter().any(|&q| q >= n))
            || self.boundaries.iter().any(|b| b.vertices.iter().any(|&q| q >= n));
        if bad {
            return Err(Error::Validation("vertex index out of range".into()));
        }
        Ok(())
    }
}

/// Result of [`verify_lattice`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeReport {
    pub violations: Vec<String>,
    /// Faces carrying a single stabilizer type, listed as intentional.
    pub single_type_faces: Vec<usize>,
}

impl LatticeReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check coloring, boundary and stabilizer invariants of a lattice.
pub fn verify_lattice(l: &ColorLattice) -> LatticeReport {
    let mut rep = LatticeReport::default();
    if let Err(e) = l.check_indices() {
        rep.violations.push(e.to_string());
        return rep;
    }
    let n = l.num_qubits();
    let mut faces_of: Vec<Vec<usize>> = vec![Vec::new(); n];
    for f in &l.faces {
        for &q in &f.vertices {
            faces_of[q].push(f.id);
        }
    }
    for e in &l.edges {
        let shared: Vec<usize> = faces_of[e.u].iter().filter(|f| faces_of[e.v].contains(f)).copied().collect();
        for &f in &shared {
            if l.faces[f].color == e.color {
                rep.violations.push(format!(
                    "edge ({},{}) of color {} lies on face {} of the same color",
                    e.u,
                    e.v,
                    e.color.name(),
                    f
                ));
            }
        }
        for (i, &f) in shared.iter().enumerate() {
            for &g in &shared[i + 1..] {
                if l.faces[f].color == l.faces[g].color {
                    rep.violations.push(format!(
                        "adjacent faces {f} and {g} share color {}",
                        l.faces[f].color.name()
                    ));
                }
            }
        }
    }
    for b in &l.boundaries {
        if let Some(c) = b.label.color() {
            for &q in &b.vertices {
                for &f in &faces_of[q] {
                    if l.faces[f].color == c {
                        rep.violations.push(format!("{} boundary vertex {q} supports face {f} of its color", c.name()));
                    }
                }
            }
        }
    }
    for f in &l.faces {
        if f.vertices.len() == 6 && f.stabilizer != StabilizerType::Both {
            rep.violations.push(format!("bulk face {} carries a single stabilizer type", f.id));
        }
        if f.stabilizer != StabilizerType::Both {
            rep.single_type_faces.push(f.id);
        }
    }
    let xs: Vec<&Face> = l.faces.iter().filter(|f| f.stabilizer.has_x()).collect();
    let zs: Vec<&Face> = l.faces.iter().filter(|f| f.stabilizer.has_z()).collect();
    for x in &xs {
        for z in &zs {
            let overlap = x.vertices.iter().filter(|q| z.vertices.contains(q)).count();
            if overlap % 2 == 1 {
                rep.violations.push(format!("X on face {} anticommutes with Z on face {}", x.id, z.id));
            }
        }
    }
    rep
}

/// A code patch with its logical operators; `logical_x[i]` and `logical_z[i]`
/// anticommute, all other pairs commute.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CodePatch {
    pub lattice: ColorLattice,
    pub logical_x: Vec<PauliOperator>,
    pub logical_z: Vec<PauliOperator>,
    pub k: usize,
}

impl CodePatch {
    pub fn num_qubits(&self) -> usize {
        self.lattice.num_qubits()
    }

    /// Returns a list of violated logical-operator invariants.
    pub fn check_logicals(&self) -> Vec<String> {
        let mut out = Vec::new();
        let stabs = self.lattice.stabilizers();
        let all: Vec<(&str, usize, &PauliOperator)> = self
            .logical_x
            .iter()
            .enumerate()
            .map(|(i, p)| ("X", i, p))
            .chain(self.logical_z.iter().enumerate().map(|(i, p)| ("Z", i, p)))
            .collect();
        for (t, i, p) in &all {
            if stabs.iter().any(|s| !s.commutes_unchecked(p)) {
                out.push(format!("logical {t}{i} anticommutes with a stabilizer"));
            }
            for (u, j, q) in &all {
                let expect = t != u && i == j;
                if p.commutes_unchecked(q) == expect {
                    out.push(format!("logicals {t}{i} and {u}{j} have wrong commutation"));
                }
            }
        }
        if self.logical_x.len() != self.k || self.logical_z.len() != self.k {
            out.push("logical count differs from k".into());
        }
        if self.lattice.num_logical() != self.k {
            out.push("k differs from qubits minus independent stabilizers".into());
        }
        out
    }
}

/// Distance-d triangular 6.6.6 color code with one boundary of each color.
pub fn build_triangular_code(d: usize) -> Result<CodePatch> {
    if d < 3 || d.is_multiple_of(2) {
        return Err(Error::Validation(format!("distance must be odd and at least 3, got {d}")));
    }
    let tris = triangular_patch(d);
    let k1 = patch_k1(d);
    let red = |p: Point| geometry::val(p) == 0;
    let green = |p: Point| geometry::diag(p) == k1;
    let blue = |p: Point| geometry::anti(p) == -1;
    let lattice = ColorLattice::assemble(
        &format!("triangular-d{d}"),
        &tris,
        |_, w| (w >= 4).then_some(StabilizerType::Both),
        &[
            (BoundaryLabel::Red, &red),
            (BoundaryLabel::Green, &green),
            (BoundaryLabel::Blue, &blue),
        ],
    );
    let n = lattice.num_qubits();
    let all: Vec<usize> = (0..n).collect();
    Ok(CodePatch {
        logical_x: vec![PauliOperator::uniform(n, &all, Pauli::X)],
        logical_z: vec![PauliOperator::uniform(n, &all, Pauli::Z)],
        k: 1,
        lattice,
    })
}

pub(crate) fn patch_k1(d: usize) -> i64 {
    -(3 * (d as i64 - 1) / 2 + 2)
}

/// Triangles of the canonical distance-d patch: a - b >= k1, val <= 0, a + 2b >= -1.
pub(crate) fn triangular_patch(d: usize) -> Vec<Tri> {
    let k1 = patch_k1(d);
    let inside = |p: Point| geometry::diag(p) >= k1 && geometry::val(p) <= 0 && geometry::anti(p) >= -1;
    let r = 3 * d as i64 + 6;
    geometry::triangles_in(-r, r, -r, r, |t| t.iter().all(|&p| inside(p)))
}

fn thin_lattice(width: i64, height: i64) -> ColorLattice {
    let in_v = |p: Point| (0..=width).contains(&geometry::val(p));
    let in_b = |p: Point| (0..=height).contains(&p.1);
    let r = (width + height) + 4;
    let tris = geometry::triangles_in(-r, r, -r, r, |t| t.iter().all(|&p| in_v(p) && in_b(p)));
    let set: BTreeSet<Tri> = tris.iter().copied().collect();
    let cut = |p: Point, test: &dyn Fn(Point) -> bool| -> bool {
        let nb = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];
        (0..6).any(|i| {
            let q1 = (p.0 + nb[i].0, p.1 + nb[i].1);
            let q2 = (p.0 + nb[(i + 1) % 6].0, p.1 + nb[(i + 1) % 6].1);
            let t = geometry::tri([p, q1, q2]);
            !set.contains(&t) && !t.iter().all(|&c| test(c))
        })
    };
    let xside_lo = |p: Point| geometry::val(p) == 0;
    let xside_hi = |p: Point| geometry::val(p) == width;
    let zside_lo = |p: Point| p.1 == 0;
    let zside_hi = |p: Point| p.1 == height;
    ColorLattice::assemble(
        &format!("thin-w{width}-h{height}"),
        &tris,
        |p, w| {
            if w < 2 {
                return None;
            }
            let cv = cut(p, &in_v);
            let cb = cut(p, &in_b);
            match (cv, cb) {
                (false, false) => Some(StabilizerType::Both),
                (true, false) => Some(StabilizerType::X),
                (false, true) => Some(StabilizerType::Z),
                (true, true) => None,
            }
        },
        &[
            (BoundaryLabel::PauliX, &xside_lo),
            (BoundaryLabel::PauliX, &xside_hi),
            (BoundaryLabel::PauliZ, &zside_lo),
            (BoundaryLabel::PauliZ, &zside_hi),
        ],
    )
}

/// Thin color code with Pauli-X boundaries on the two short sides and Pauli-Z
/// boundaries on the long sides; encodes two qubits with X-distance `d_x` and
/// Z-distance `d_z`.
pub fn build_thin_code(d_x: usize, d_z: usize) -> Result<CodePatch> {
    if d_x < 3 || d_z < 3 || d_x.is_multiple_of(2) || d_z.is_multiple_of(2) {
        return Err(Error::Validation(format!(
            "thin-code distances must be odd and at least 3, got ({d_x}, {d_z})"
        )));
    }
    // Width sets the X-distance; the height equals the Z-distance.
    for width in (2 * d_x as i64 - 2)..=(2 * d_x as i64 + 2) {
        let mut lattice = thin_lattice(width, d_z as i64);
        if lattice.num_logical() != 2 {
            continue;
        }
        let (dx, _) = css_distance(&lattice, Pauli::X, d_x)?;
        if dx != Some(d_x) {
            continue;
        }
        lattice.name = format!("thin-{d_x}-{d_z}");
        let (lx, lz) = css_logicals(&lattice);
        return Ok(CodePatch {
            lattice,
            logical_x: lx,
            logical_z: lz,
            k: 2,
        });
    }
    Err(Error::Validation(format!("no thin layout realizes d_x = {d_x}")))
}

/// Symplectic basis of CSS logicals: returns (X-type, Z-type) with X_i Z_j anticommuting iff i == j.
pub fn css_logicals(l: &ColorLattice) -> (Vec<PauliOperator>, Vec<PauliOperator>) {
    let n = l.num_qubits();
    let xs = logical_reps(n, &l.z_checks(), &l.x_checks());
    let mut zs = logical_reps(n, &l.x_checks(), &l.z_checks());
    let mut out_x = Vec::new();
    let mut out_z = Vec::new();
    let mut xs = xs;
    while let Some(x) = xs.pop() {
        let Some(j) = zs.iter().position(|z| x.and_popcount(z) % 2 == 1) else { continue };
        let z = zs.swap_remove(j);
        for x2 in xs.iter_mut() {
            if x2.and_popcount(&z) % 2 == 1 {
                x2.xor_assign(&x);
            }
        }
        for z2 in zs.iter_mut() {
            if z2.and_popcount(&x) % 2 == 1 {
                z2.xor_assign(&z);
            }
        }
        out_x.push(x);
        out_z.push(z);
    }
    out_x.reverse();
    out_z.reverse();
    let mk = |v: &BitVec, p: Pauli| PauliOperator::uniform(n, &v.ones().collect::<Vec<_>>(), p);
    (
        out_x.iter().map(|v| mk(v, Pauli::X)).collect(),
        out_z.iter().map(|v| mk(v, Pauli::Z)).collect(),
    )
}

/// Basis of ker(other) modulo span(same).
fn logical_reps(n: usize, other: &[BitVec], same: &[BitVec]) -> Vec<BitVec> {
    let kernel = crate::gf2::left_nullspace(&transpose(other, n), other.len());
    let mut b = Basis::new(n, same.len() + kernel.len());
    for s in same {
        let _ = b.insert(s);
    }
    kernel.into_iter().filter(|v| b.insert(v).is_ok()).collect()
}

fn transpose(rows: &[BitVec], width: usize) -> Vec<BitVec> {
    (0..width)
        .map(|c| BitVec::from_indices(rows.len(), (0..rows.len()).filter(|&r| rows[r].get(c))))
        .collect()
}

/// Minimum weight of a nontrivial logical of the given Pauli type, searched
/// exhaustively up to `max_weight`. Returns the weight and one support.
pub fn css_distance(l: &ColorLattice, kind: Pauli, max_weight: usize) -> Result<(Option<usize>, Vec<usize>)> {
    let (other, same) = match kind {
        Pauli::X => (l.z_checks(), l.x_checks()),
        Pauli::Z => (l.x_checks(), l.z_checks()),
        _ => return Err(Error::Validation("distance type must be X or Z".into())),
    };
    Ok(brute_force_min_logical(l.num_qubits(), &other, &same, max_weight))
}

/// Smallest-weight vector v with v . h = 0 for all `checks` and v outside span(`stabs`).
pub fn brute_force_min_logical(
    n: usize,
    checks: &[BitVec],
    stabs: &[BitVec],
    max_weight: usize,
) -> (Option<usize>, Vec<usize>) {
    let cols: Vec<BitVec> = transpose(checks, n);
    let mut basis = Basis::new(n, stabs.len());
    for s in stabs {
        let _ = basis.insert(s);
    }
    for w in 1..=max_weight.min(n) {
        let mut chosen = Vec::with_capacity(w);
        let acc = BitVec::zeros(checks.len());
        if let Some(s) = search(n, &cols, &basis, w, 0, &acc, &mut chosen) {
            return (Some(w), s);
        }
    }
    (None, Vec::new())
}

fn search(
    n: usize,
    cols: &[BitVec],
    basis: &Basis,
    left: usize,
    start: usize,
    acc: &BitVec,
    chosen: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    if left == 0 {
        if acc.is_zero() && !basis.contains(&BitVec::from_indices(n, chosen.iter().copied())) {
            return Some(chosen.clone());
        }
        return None;
    }
    for q in start..=(n - left) {
        let mut next = acc.clone();
        next.xor_assign(&cols[q]);
        chosen.push(q);
        if let Some(s) = search(n, cols, basis, left - 1, q + 1, &next, chosen) {
            return Some(s);
        }
        chosen.pop();
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn steane_counts() {
        let p = build_triangular_code(3).unwrap();
        assert_eq!(p.num_qubits(), 7);
        assert_eq!(p.lattice.stabilizers().len(), 6);
        assert_eq!(p.k, 1);
        assert!(p.check_logicals().is_empty());
        assert!(verify_lattice(&p.lattice).is_valid());
    }

    #[test]
    fn even_distance_rejected() {
        assert!(build_triangular_code(4).is_err());
        assert!(build_triangular_code(1).is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = build_triangular_code(5).unwrap();
        let s = p.lattice.to_json().unwrap();
        assert_eq!(ColorLattice::from_json(&s).unwrap(), p.lattice);
    }
}
