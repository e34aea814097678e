//! Abelian anyon model of the color code and its gapped boundaries,
//! transparent, semi-transparent and opaque domain walls.
//!
//! An anyon is a 2x2 binary matrix `M = sum c p^T` with color vectors
//! r = (1,0), g = (0,1), b = (1,1) and Pauli vectors x = (1,0), z = (0,1),
//! y = (1,1). Bit `2i + j` of the label holds `M[i][j]`. Fusion is addition,
//! the mutual braiding phase is `tr(J M J N^T)` with `J` the swap matrix and
//! the topological spin is `det M`. Bosons are the nine rank-one matrices,
//! fermions the six invertible ones.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

const COLORS: [(char, [u8; 2]); 3] = [('r', [1, 0]), ('g', [0, 1]), ('b', [1, 1])];
const PAULIS: [(char, [u8; 2]); 3] = [('x', [1, 0]), ('y', [1, 1]), ('z', [0, 1])];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Anyon(u8);

impl Anyon {
    pub const VACUUM: Anyon = Anyon(0);

    pub fn from_bits(bits: u8) -> Result<Self> {
        if bits < 16 {
            Ok(Anyon(bits))
        } else {
            Err(Error::Validation(format!("anyon label {bits} out of range")))
        }
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    fn m(self, i: usize, j: usize) -> u8 {
        (self.0 >> (2 * i + j)) & 1
    }

    fn from_matrix(m: [[u8; 2]; 2]) -> Self {
        Anyon((m[0][0] & 1) | (m[0][1] & 1) << 1 | (m[1][0] & 1) << 2 | (m[1][1] & 1) << 3)
    }

    fn matrix(self) -> [[u8; 2]; 2] {
        [[self.m(0, 0), self.m(0, 1)], [self.m(1, 0), self.m(1, 1)]]
    }

    /// The boson with color `c` in {r,g,b} and Pauli label `p` in {x,y,z}.
    pub fn boson(c: char, p: char) -> Result<Self> {
        let cv = COLORS.iter().find(|x| x.0 == c).map(|x| x.1);
        let pv = PAULIS.iter().find(|x| x.0 == p).map(|x| x.1);
        match (cv, pv) {
            (Some(cv), Some(pv)) => Ok(Self::from_matrix([[cv[0] & pv[0], cv[0] & pv[1]], [cv[1] & pv[0], cv[1] & pv[1]]])),
            _ => Err(Error::Validation(format!("no boson {c}{p}"))),
        }
    }

    /// All nine bosons in grid order (row x, y, z; column r, g, b).
    pub fn bosons() -> Vec<Anyon> {
        PAULIS
            .iter()
            .flat_map(|p| COLORS.iter().map(move |c| Anyon::boson(c.0, p.0).expect("grid label")))
            .collect()
    }

    pub fn all() -> impl Iterator<Item = Anyon> {
        (0..16).map(Anyon)
    }

    pub fn is_vacuum(self) -> bool {
        self.0 == 0
    }

    /// Topological spin: -1 for fermions.
    pub fn spin(self) -> i8 {
        let m = self.matrix();
        if (m[0][0] & m[1][1]) ^ (m[0][1] & m[1][0]) == 1 {
            -1
        } else {
            1
        }
    }

    pub fn is_boson(self) -> bool {
        !self.is_vacuum() && self.spin() == 1
    }

    pub fn is_fermion(self) -> bool {
        self.spin() == -1
    }

    /// Grid position (row = Pauli index, column = color index) of a boson.
    pub fn grid(self) -> Option<(usize, usize)> {
        (0..3)
            .flat_map(|r| (0..3).map(move |c| (r, c)))
            .find(|&(r, c)| Anyon::boson(COLORS[c].0, PAULIS[r].0).ok() == Some(self))
    }

    pub fn name(self) -> String {
        if self.is_vacuum() {
            return "1".into();
        }
        if let Some((r, c)) = self.grid() {
            return format!("{}{}", COLORS[c].0, PAULIS[r].0);
        }
        let bs = Anyon::bosons();
        let mut names: Vec<String> = Vec::new();
        for (i, &a) in bs.iter().enumerate() {
            for &b in &bs[i + 1..] {
                if fuse(a, b) == self {
                    names.push(format!("{}*{}", a.name(), b.name()));
                }
            }
        }
        names.sort();
        names.into_iter().next().unwrap_or_else(|| format!("#{}", self.0))
    }

    pub fn parse(s: &str) -> Result<Self> {
        if s == "1" {
            return Ok(Anyon::VACUUM);
        }
        if let Some((a, b)) = s.split_once('*') {
            return Ok(fuse(Anyon::parse(a)?, Anyon::parse(b)?));
        }
        let cs: Vec<char> = s.chars().collect();
        match cs[..] {
            [c, p] => Anyon::boson(c, p),
            _ => Err(Error::Parse(format!("bad anyon label {s:?}"))),
        }
    }
}

impl fmt::Display for Anyon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl Serialize for Anyon {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

impl<'de> Deserialize<'de> for Anyon {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Anyon::parse(&s).map_err(serde::de::Error::custom)
    }
}

pub fn fuse(a: Anyon, b: Anyon) -> Anyon {
    Anyon(a.0 ^ b.0)
}

/// Mutual braiding phase.
pub fn braid_phase(a: Anyon, b: Anyon) -> i8 {
    let (m, n) = (a.matrix(), b.matrix());
    let t = (m[1][1] & n[0][0]) ^ (m[1][0] & n[0][1]) ^ (m[0][1] & n[1][0]) ^ (m[0][0] & n[1][1]);
    if t == 1 {
        -1
    } else {
        1
    }
}

/// Gapped boundary given by its three condensed bosons.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundarySpec {
    pub condensed: Vec<Anyon>,
}

impl BoundarySpec {
    pub fn condenses(&self, a: Anyon) -> bool {
        a.is_vacuum() || self.condensed.contains(&a)
    }

    /// "row x" style description of the shared grid line.
    pub fn line(&self) -> String {
        let g: Vec<(usize, usize)> = self.condensed.iter().filter_map(|a| a.grid()).collect();
        if g.len() == 3 && g.iter().all(|p| p.0 == g[0].0) {
            format!("row {}", PAULIS[g[0].0].0)
        } else if g.len() == 3 && g.iter().all(|p| p.1 == g[0].1) {
            format!("column {}", COLORS[g[0].1].0)
        } else {
            "irregular".into()
        }
    }
}

/// Rules for a condensed set: bosons only, closed under fusion, mutually
/// trivial braiding, and maximal (three bosons). Returns the violations.
pub fn validate_boundary(b: &BoundarySpec) -> Vec<String> {
    let mut out = Vec::new();
    let set: BTreeSet<Anyon> = b.condensed.iter().copied().collect();
    if set.len() != b.condensed.len() {
        out.push("repeated anyon".into());
    }
    for &a in &set {
        if !a.is_boson() {
            out.push(format!("{a} is not a boson"));
        }
        for &c in &set {
            if braid_phase(a, c) != 1 {
                out.push(format!("{a} and {c} braid nontrivially"));
            }
            let f = fuse(a, c);
            if !f.is_vacuum() && !set.contains(&f) {
                out.push(format!("{a} x {c} = {f} not condensed"));
            }
        }
    }
    if set.len() != 3 {
        out.push(format!("{} condensed bosons, a gapped boundary needs 3", set.len()));
    }
    out
}

/// Every maximal condensable boson set (searched over all subsets of the nine bosons).
pub fn enumerate_boundaries() -> Vec<BoundarySpec> {
    let bs = Anyon::bosons();
    (0u32..1 << 9)
        .filter(|m| m.count_ones() == 3)
        .map(|m| BoundarySpec {
            condensed: (0..9).filter(|i| m >> i & 1 == 1).map(|i| bs[i]).collect(),
        })
        .filter(|b| validate_boundary(b).is_empty())
        .collect()
}

/// A map of the 16 anyons, stored as the image of each label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AnyonMap {
    pub image: Vec<Anyon>,
}

impl AnyonMap {
    pub fn apply(&self, a: Anyon) -> Anyon {
        self.image[a.0 as usize]
    }
}

/// Fusion, spin and braiding preservation of a map on all anyons.
pub fn validate_automorphism(m: &AnyonMap) -> Vec<String> {
    let mut out = Vec::new();
    if m.image.iter().collect::<BTreeSet<_>>().len() != 16 {
        out.push("map is not a bijection".into());
    }
    for a in Anyon::all() {
        if m.apply(a).spin() != a.spin() {
            out.push(format!("spin of {a} changes"));
        }
        for b in Anyon::all() {
            if m.apply(fuse(a, b)) != fuse(m.apply(a), m.apply(b)) {
                out.push(format!("fusion of {a} and {b} not preserved"));
            }
            if braid_phase(m.apply(a), m.apply(b)) != braid_phase(a, b) {
                out.push(format!("braiding of {a} and {b} not preserved"));
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WallKind {
    Transparent,
    SemiTransparent,
    Opaque,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WallAction {
    Condense,
    Confine,
    Transmit(Anyon),
}

/// Domain wall description. Transparent walls carry `automorphism` (row and
/// column permutations as index lists plus a transpose flag); semi-transparent
/// walls carry the condensed bosons and the A/B pairing choice; opaque walls
/// carry two boundaries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallSpec {
    pub kind: WallKind,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rows: Option<[usize; 3]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub columns: Option<[usize; 3]>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub transpose: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub condensed_left: Option<Anyon>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub condensed_right: Option<Anyon>,
    /// false: left column partners of C map to right column partners; true: to row partners.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub crossed: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub boundaries: Option<[BoundarySpec; 2]>,
}

impl WallSpec {
    fn empty(kind: WallKind) -> Self {
        WallSpec {
            kind,
            rows: None,
            columns: None,
            transpose: None,
            condensed_left: None,
            condensed_right: None,
            crossed: None,
            boundaries: None,
        }
    }

    pub fn transparent(rows: [usize; 3], columns: [usize; 3], transpose: bool) -> Self {
        WallSpec {
            rows: Some(rows),
            columns: Some(columns),
            transpose: Some(transpose),
            ..Self::empty(WallKind::Transparent)
        }
    }

    pub fn semi_transparent(c_left: Anyon, c_right: Anyon, crossed: bool) -> Self {
        WallSpec {
            condensed_left: Some(c_left),
            condensed_right: Some(c_right),
            crossed: Some(crossed),
            ..Self::empty(WallKind::SemiTransparent)
        }
    }

    pub fn opaque(left: BoundarySpec, right: BoundarySpec) -> Self {
        WallSpec {
            boundaries: Some([left, right]),
            ..Self::empty(WallKind::Opaque)
        }
    }

    /// Grid automorphism of a transparent wall, extended linearly to all anyons.
    pub fn automorphism(&self) -> Option<AnyonMap> {
        let (rows, cols, tr) = (self.rows?, self.columns?, self.transpose?);
        let img = |a: Anyon| -> Anyon {
            let (r, c) = a.grid().expect("boson");
            let (r, c) = if tr { (c, r) } else { (r, c) };
            let (r, c) = (rows[r], cols[c]);
            Anyon::boson(COLORS[c].0, PAULIS[r].0).expect("grid label")
        };
        let basis = [
            Anyon::boson('r', 'x').ok()?,
            Anyon::boson('g', 'x').ok()?,
            Anyon::boson('r', 'z').ok()?,
            Anyon::boson('g', 'z').ok()?,
        ];
        let mut image = vec![Anyon::VACUUM; 16];
        for a in Anyon::all() {
            let mut v = Anyon::VACUUM;
            let mut rest = a;
            for mask in 1u32..16 {
                let s = (0..4).filter(|i| mask >> i & 1 == 1).fold(Anyon::VACUUM, |acc, i| fuse(acc, basis[i]));
                if s == a {
                    v = (0..4).filter(|i| mask >> i & 1 == 1).fold(Anyon::VACUUM, |acc, i| fuse(acc, img(basis[i])));
                    rest = Anyon::VACUUM;
                    break;
                }
            }
            if !rest.is_vacuum() {
                return None;
            }
            image[a.0 as usize] = v;
        }
        Some(AnyonMap { image })
    }
}

/// Column partners (same color) and row partners (same Pauli) of a boson.
fn partners(c: Anyon) -> (Vec<Anyon>, Vec<Anyon>) {
    let (r0, c0) = c.grid().expect("boson");
    let col = Anyon::bosons().into_iter().filter(|a| a.grid().is_some_and(|(r, cc)| cc == c0 && r != r0)).collect();
    let row = Anyon::bosons().into_iter().filter(|a| a.grid().is_some_and(|(r, cc)| r == r0 && cc != c0)).collect();
    (col, row)
}

/// Least label in the class of `a` modulo fusion with `c`.
fn canonical(a: Anyon, c: Anyon) -> Anyon {
    let b = fuse(a, c);
    if b.name() < a.name() {
        b
    } else {
        a
    }
}

/// What happens to anyon `a` arriving at the wall from `side`.
pub fn wall_action(w: &WallSpec, a: Anyon, side: Side) -> Result<WallAction> {
    if a.is_vacuum() {
        return Err(Error::Validation("wall_action needs a nontrivial anyon".into()));
    }
    match w.kind {
        WallKind::Transparent => {
            let m = w.automorphism().ok_or_else(|| Error::Validation("incomplete transparent wall".into()))?;
            Ok(WallAction::Transmit(match side {
                Side::Left => m.apply(a),
                Side::Right => Anyon::all().find(|&b| m.apply(b) == a).expect("bijection"),
            }))
        }
        WallKind::Opaque => {
            let [l, r] = w.boundaries.as_ref().ok_or_else(|| Error::Validation("incomplete opaque wall".into()))?;
            let b = if side == Side::Left { l } else { r };
            Ok(if b.condenses(a) { WallAction::Condense } else { WallAction::Confine })
        }
        WallKind::SemiTransparent => {
            let (cl, cr, crossed) = match (w.condensed_left, w.condensed_right, w.crossed) {
                (Some(a), Some(b), Some(x)) => (a, b, x),
                _ => return Err(Error::Validation("incomplete semi-transparent wall".into())),
            };
            let (c_here, c_there) = if side == Side::Left { (cl, cr) } else { (cr, cl) };
            if a == c_here {
                return Ok(WallAction::Condense);
            }
            if braid_phase(a, c_here) == -1 {
                return Ok(WallAction::Confine);
            }
            let (cl_col, cl_row) = partners(cl);
            let (cr_col, cr_row) = partners(cr);
            let (a_l, b_l) = (cl_col[0], cl_row[0]);
            let (a_r, b_r) = if crossed { (cr_row[0], cr_col[0]) } else { (cr_col[0], cr_row[0]) };
            let (x_here, y_here, x_there, y_there) =
                if side == Side::Left { (a_l, b_l, a_r, b_r) } else { (a_r, b_r, a_l, b_l) };
            let classes = [
                (c_here, Anyon::VACUUM),
                (x_here, x_there),
                (y_here, y_there),
                (fuse(x_here, y_here), fuse(x_there, y_there)),
            ];
            for (from, to) in classes.iter().skip(1) {
                if a == *from || a == fuse(*from, c_here) {
                    return Ok(WallAction::Transmit(canonical(*to, c_there)));
                }
            }
            Err(Error::Runtime(format!("{a} is neither confined nor transmitted")))
        }
    }
}

/// The 72 transparent walls: row and column permutations with optional transpose.
pub fn enumerate_transparent_walls() -> Vec<WallSpec> {
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut out = Vec::new();
    for tr in [false, true] {
        for r in perms {
            for c in perms {
                out.push(WallSpec::transparent(r, c, tr));
            }
        }
    }
    out
}

/// The 162 semi-transparent walls: condensed boson per side and the A/B pairing.
pub fn enumerate_semitransparent_walls() -> Vec<WallSpec> {
    let bs = Anyon::bosons();
    let mut out = Vec::new();
    for &l in &bs {
        for &r in &bs {
            for crossed in [false, true] {
                out.push(WallSpec::semi_transparent(l, r, crossed));
            }
        }
    }
    out
}

/// The 36 opaque walls: an ordered pair of gapped boundaries around vacuum.
pub fn enumerate_opaque_walls() -> Vec<WallSpec> {
    let bs = enumerate_boundaries();
    let mut out = Vec::new();
    for l in &bs {
        for r in &bs {
            out.push(WallSpec::opaque(l.clone(), r.clone()));
        }
    }
    out
}

/// Transmission table of a wall seen from the left, for the canonical form.
fn action_table(w: &WallSpec) -> Vec<(WallAction, WallAction)> {
    Anyon::all()
        .skip(1)
        .map(|a| {
            (
                wall_action(w, a, Side::Left).unwrap_or(WallAction::Confine),
                wall_action(w, a, Side::Right).unwrap_or(WallAction::Confine),
            )
        })
        .collect()
}

/// Violations of the wall rules for its kind.
pub fn validate_wall(w: &WallSpec) -> Vec<String> {
    let mut out = Vec::new();
    match w.kind {
        WallKind::Transparent => match w.automorphism() {
            Some(m) => out.extend(validate_automorphism(&m)),
            None => out.push("transparent wall without a grid automorphism".into()),
        },
        WallKind::Opaque => match &w.boundaries {
            Some([l, r]) => {
                out.extend(validate_boundary(l));
                out.extend(validate_boundary(r));
            }
            None => out.push("opaque wall without boundaries".into()),
        },
        WallKind::SemiTransparent => {
            for (side, c) in [(Side::Left, w.condensed_left), (Side::Right, w.condensed_right)] {
                let Some(c) = c else {
                    out.push("missing condensed anyon".into());
                    continue;
                };
                if !c.is_boson() {
                    out.push(format!("{c} is not a boson"));
                    continue;
                }
                let confined = Anyon::bosons()
                    .into_iter()
                    .filter(|&a| wall_action(w, a, side).ok() == Some(WallAction::Confine))
                    .count();
                if confined != 4 {
                    out.push(format!("{confined} bosons confined on the {side:?} side"));
                }
                let c_there = if side == Side::Left { w.condensed_right } else { w.condensed_left };
                let transmitted: Vec<(Anyon, Anyon)> = Anyon::all()
                    .skip(1)
                    .filter_map(|a| match wall_action(w, a, side) {
                        Ok(WallAction::Transmit(b)) => Some((a, b)),
                        _ => None,
                    })
                    .collect();
                for &(a, b) in &transmitted {
                    if braid_phase(a, c) != 1 {
                        out.push(format!("{a} is transmitted but braids with {c}"));
                    }
                    if a.spin() != b.spin() {
                        out.push(format!("{a} changes spin on transmission"));
                    }
                    if let Some(ct) = c_there {
                        if braid_phase(b, ct) != 1 {
                            out.push(format!("image {b} braids with the far condensate"));
                        }
                    }
                    if wall_action(w, fuse(a, c), side).ok() != Some(WallAction::Transmit(b)) {
                        out.push(format!("{a} and {a}x{c} transmit differently"));
                    }
                    for &(a2, b2) in &transmitted {
                        if braid_phase(a, a2) != braid_phase(b, b2) {
                            out.push(format!("braiding of {a}, {a2} not preserved"));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Number of distinct walls in a list, compared by their full action tables.
pub fn distinct_walls(ws: &[WallSpec]) -> usize {
    ws.iter().map(action_table).collect::<BTreeSet<_>>().len()
}

impl PartialOrd for WallAction {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for WallAction {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        let key = |a: &WallAction| match a {
            WallAction::Condense => (0, 0),
            WallAction::Confine => (1, 0),
            WallAction::Transmit(x) => (2, x.0),
        };
        key(self).cmp(&key(o))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(s: &str) -> Anyon {
        Anyon::parse(s).unwrap()
    }

    #[test]
    fn grid_rules() {
        assert_eq!(fuse(b("rx"), b("gx")), b("bx"));
        assert!(fuse(b("rx"), b("rx")).is_vacuum());
        assert!(fuse(b("rx"), b("gz")).is_fermion());
        assert_eq!(braid_phase(b("rx"), b("gx")), 1);
        assert_eq!(braid_phase(b("rx"), b("gz")), -1);
        assert_eq!(Anyon::all().filter(|a| a.is_fermion()).count(), 6);
    }

    #[test]
    fn counts() {
        assert_eq!(enumerate_boundaries().len(), 6);
        assert_eq!(distinct_walls(&enumerate_transparent_walls()), 72);
        assert_eq!(distinct_walls(&enumerate_semitransparent_walls()), 162);
        assert_eq!(enumerate_opaque_walls().len(), 36);
    }

    #[test]
    fn semitransparent_example() {
        let w = WallSpec::semi_transparent(b("rz"), b("gx"), true);
        assert!(validate_wall(&w).is_empty());
        assert_eq!(wall_action(&w, b("rz"), Side::Left).unwrap(), WallAction::Condense);
        assert_eq!(wall_action(&w, b("gx"), Side::Right).unwrap(), WallAction::Condense);
        for d in ["gx", "gy", "bx", "by"] {
            assert_eq!(wall_action(&w, b(d), Side::Left).unwrap(), WallAction::Confine);
        }
        let WallAction::Transmit(a) = wall_action(&w, b("rx"), Side::Left).unwrap() else { panic!() };
        assert!(a == b("rx") || a == b("bx"));
        let WallAction::Transmit(bb) = wall_action(&w, b("gz"), Side::Left).unwrap() else { panic!() };
        assert!(bb == b("gy") || bb == b("gz"));
        assert_eq!(wall_action(&w, b("ry"), Side::Left).unwrap(), WallAction::Transmit(a));
    }

    #[test]
    fn rejects_mixed_boundary() {
        let bad = BoundarySpec { condensed: vec![b("rx"), b("gz"), b("by")] };
        assert!(!validate_boundary(&bad).is_empty());
        for w in enumerate_transparent_walls().iter().chain(&enumerate_semitransparent_walls()).chain(&enumerate_opaque_walls()) {
            assert!(validate_wall(w).is_empty());
        }
    }
}
