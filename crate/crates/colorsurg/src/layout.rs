//! Composite surgery layouts: data patches along one side of an ancilla strip
//! of red Bell pairs, with the merged stabilizer group and outcome recipes.

use crate::error::{Error, Result};
use crate::geometry::{self, anti, color, diag, mirror, red_partner, shift, tri_coord, val, Color, Point, Tri};
use crate::gf2::Basis;
use crate::lattice::{self, CodePatch, ColorLattice, StabilizerType};
use crate::pauli::{Pauli, PauliOperator};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Odd-data wall face of a pair: point, data qubits, ancilla qubits, letters.
type CornerFace = (Point, Vec<usize>, Vec<usize>, [Pauli; 4]);

/// Boundary case of a data patch given its letters in L_A and L_B.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryCase {
    /// Both letters nontrivial and different.
    A,
    /// Both letters nontrivial and equal.
    B,
    /// Only the L_A letter is nontrivial.
    CA,
    /// Only the L_B letter is nontrivial.
    CB,
    Trivial,
}

impl BoundaryCase {
    pub fn classify(pa: Pauli, pb: Pauli) -> Self {
        match (pa, pb) {
            (Pauli::I, Pauli::I) => BoundaryCase::Trivial,
            (Pauli::I, _) => BoundaryCase::CB,
            (_, Pauli::I) => BoundaryCase::CA,
            (a, b) if a == b => BoundaryCase::B,
            _ => BoundaryCase::A,
        }
    }

    /// Case letter: a, b, c or trivial.
    pub fn letter(self) -> &'static str {
        match self {
            BoundaryCase::A => "a",
            BoundaryCase::B => "b",
            BoundaryCase::CA | BoundaryCase::CB => "c",
            BoundaryCase::Trivial => "trivial",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Which {
    A,
    B,
}

/// Geometry knobs of the layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutParams {
    /// Spacing (in lattice lines of one color) between consecutive patches.
    pub gap: i64,
    /// Spacing between the two patches of an anticommuting pair.
    pub pairgap: i64,
    /// Ancilla overhang past the outermost patches.
    pub pad: i64,
    /// Depth of the ancilla teeth below the data boundary.
    pub tooth: i64,
}

impl LayoutParams {
    pub fn for_distance(d: usize) -> Self {
        LayoutParams {
            gap: 2,
            pairgap: if d % 4 == 1 { 3 } else { 2 },
            pad: 1,
            tooth: default_tooth(d),
        }
    }
}

/// Tooth depth which, with the default pair gap, gives fault distance d.
pub fn default_tooth(d: usize) -> i64 {
    7 + 3 * ((d as i64 - 1) / 4)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QubitRole {
    Data { patch: usize },
    Ancilla,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutQubit {
    pub coord: [i64; 2],
    pub role: QubitRole,
}

/// Placement of one data patch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slot {
    pub patch: usize,
    pub shift: i64,
    pub mirrored: bool,
    pub case: BoundaryCase,
}

/// A stretch of the ancilla's outer boundary between data patches.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AncillaSegment {
    pub color: Color,
    /// Patches on either side (None at the ends of the strip).
    pub between: [Option<usize>; 2],
}

/// How to read off one logical outcome: product of the listed merged
/// generators (merge phase) and split generators (split phase) times `sign`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recipe {
    pub which: Which,
    pub target: PauliOperator,
    pub q_generators: Vec<usize>,
    pub s_generators: Vec<usize>,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurgeryLayout {
    pub d: usize,
    pub params: LayoutParams,
    pub la: PauliOperator,
    pub lb: PauliOperator,
    pub cases: Vec<BoundaryCase>,
    pub slots: Vec<Slot>,
    pub qubits: Vec<LayoutQubit>,
    pub patch_qubits: Vec<Vec<usize>>,
    pub bell_edges: Vec<[usize; 2]>,
    /// Split group: data stabilizers, then X X and Z Z for each Bell edge in order.
    pub split_generators: Vec<PauliOperator>,
    pub num_data_stabilizers: usize,
    pub merged_generators: Vec<PauliOperator>,
    pub merged_labels: Vec<String>,
    pub skipped_points: Vec<[i64; 2]>,
    pub segments: Vec<AncillaSegment>,
    pub recipes: Vec<Recipe>,
    pub ancilla: ColorLattice,
    pub ancilla_qubits: Vec<usize>,
}

fn third(a: Pauli, b: Pauli) -> Pauli {
    [Pauli::X, Pauli::Y, Pauli::Z]
        .into_iter()
        .find(|&p| p != a && p != b)
        .expect("two letters leave a third")
}

fn first_other(a: Pauli) -> Pauli {
    [Pauli::X, Pauli::Y, Pauli::Z].into_iter().find(|&p| p != a).unwrap()
}

/// Data-side letter map from the canonical template basis to the patch's basis.
fn basis_map(case: BoundaryCase, pa: Pauli, pb: Pauli) -> [Pauli; 4] {
    let (x, z) = match case {
        BoundaryCase::A => (pa, pb),
        BoundaryCase::CB => (first_other(pb), pb),
        BoundaryCase::CA => (pa, first_other(pa)),
        BoundaryCase::B => (first_other(pa), pa),
        BoundaryCase::Trivial => (Pauli::X, Pauli::Z),
    };
    // indexed by Pauli as I, X, Y, Z
    [Pauli::I, x, third(x, z), z]
}

fn idx(p: Pauli) -> usize {
    match p {
        Pauli::I => 0,
        Pauli::X => 1,
        Pauli::Y => 2,
        Pauli::Z => 3,
    }
}

/// Wall-face templates: (data letter, ancilla letter) pairs per wall role.
fn template(case: BoundaryCase, role: &str) -> Vec<(Pauli, Pauli)> {
    use Pauli::*;
    match (case, role) {
        (BoundaryCase::CB, "r" | "rc") => vec![(Z, Z), (I, X)],
        (BoundaryCase::CB, "g") => vec![(X, X), (Z, I)],
        (BoundaryCase::CA, "r" | "rc") => vec![(X, X), (I, Z)],
        (BoundaryCase::CA, "g") => vec![(Z, Z), (X, I)],
        (BoundaryCase::B, "r" | "rc") => vec![(Z, Z), (I, Y)],
        (BoundaryCase::B, "g") => vec![(X, Y), (Z, I)],
        _ => vec![],
    }
}

fn tri_map(t: &Tri, sh: i64, mir: bool) -> Tri {
    let f = |p: Point| shift(if mir { mirror(p) } else { p }, sh);
    geometry::tri([f(t[0]), f(t[1]), f(t[2])])
}

fn point_from_ts(t: i64, s: i64) -> Option<Point> {
    if (s - t).rem_euclid(3) != 0 {
        return None;
    }
    let b = (s - t) / 3;
    Some((t + b, b))
}

struct Geometry {
    slots: Vec<(i64, bool)>,
    data: Vec<Vec<Tri>>,
    anc: Vec<Tri>,
    skip: BTreeSet<Point>,
    notches: usize,
}

/// Place patches and carve the ancilla. `kinds` holds `true` for a pair.
fn place(d: usize, kinds: &[bool], n_trivial: usize, prm: &LayoutParams) -> Result<Geometry> {
    let base = lattice::triangular_patch(d);
    let pts_of = |tris: &[Tri]| -> BTreeSet<Point> { tris.iter().flat_map(|t| t.iter().copied()).collect() };
    let mut slots = Vec::new();
    let mut data: Vec<Vec<Tri>> = Vec::new();
    let mut notch_pts: Vec<(i64, i64)> = Vec::new();
    let mut skip = BTreeSet::new();
    let mut cur: Option<i64> = None;
    let mut prev: BTreeSet<Point> = BTreeSet::new();
    for &pair in kinds {
        let mirs: &[bool] = if pair { &[false, true] } else { &[false] };
        for &mir in mirs {
            let pts0 = pts_of(&base.iter().map(|t| tri_map(t, 0, mir)).collect::<Vec<_>>());
            let lo0 = pts0.iter().map(|&p| diag(p)).min().unwrap();
            let sh = match cur {
                None => 0,
                Some(c) => {
                    let need = c + 3 * if pair && mir { prm.pairgap } else { prm.gap };
                    (need - lo0).div_euclid(3) + i64::from((need - lo0).rem_euclid(3) != 0)
                }
            };
            let tris: Vec<Tri> = base.iter().map(|t| tri_map(t, sh, mir)).collect();
            let pts = pts_of(&tris);
            if pair && mir {
                let c1 = prev.iter().map(|&p| anti(p)).min().unwrap();
                let c2 = pts.iter().map(|&p| diag(p)).min().unwrap();
                notch_pts.push((c1, c2));
                let v = point_from_ts(c2, c1).ok_or_else(|| Error::Runtime("notch vertex off lattice".into()))?;
                skip.insert(v);
            }
            cur = Some(pts.iter().map(|&p| diag(p)).max().unwrap());
            prev = pts;
            slots.push((sh, mir));
            data.push(tris);
        }
    }
    let all: BTreeSet<Point> = data.iter().flat_map(|t| pts_of(t)).collect();
    let alo = all.iter().map(|&p| diag(p)).min().unwrap();
    let ahi = all.iter().map(|&p| diag(p)).max().unwrap();
    let mut hi_a = ahi + 3 * prm.pad;
    hi_a += (1 - hi_a).rem_euclid(3);
    let mut hi_2 = -(alo - 3 * prm.pad);
    hi_2 += (1 - hi_2).rem_euclid(3);
    let r = prm.tooth;
    let mut teeth = Vec::new();
    let mut c = 3 * alo.div_euclid(3);
    while c < ahi + 4 {
        teeth.push(c);
        c += 3;
    }
    for w in teeth.windows(2) {
        if let Some(p) = point_from_ts(w[0] + r, -w[1] + r) {
            skip.insert(p);
        }
    }
    let data_set: BTreeSet<Tri> = data.iter().flatten().copied().collect();
    let in_anc = |t: &Tri| -> bool {
        if t.iter().map(|&p| val(p)).min().unwrap() < -1 {
            return false;
        }
        if !t.iter().all(|&p| diag(p) <= hi_a && anti(p) <= hi_2) {
            return false;
        }
        for &(c1, c2) in &notch_pts {
            if !(t.iter().all(|&p| anti(p) >= c1) || t.iter().all(|&p| diag(p) >= c2)) {
                return false;
            }
        }
        teeth.iter().any(|&c| t.iter().all(|&p| diag(p) <= c + r && anti(p) <= -c + r)) && !data_set.contains(t)
    };
    let (amin, amax, bmin, bmax) = geometry::bounding_box(-1, hi_a + hi_2, -1 - hi_2, hi_a);
    let anc = geometry::triangles_in(amin, amax, bmin, bmax, in_anc);
    let anc_set: BTreeSet<Tri> = anc.iter().copied().collect();
    if let Some(t) = anc.iter().find(|t| !anc_set.contains(&red_partner(t))) {
        return Err(Error::Runtime(format!("ancilla triangle {t:?} has no red partner")));
    }
    // Trivial patches sit beyond the strip, untouched by the ancilla.
    let mut cur = hi_a;
    for _ in 0..n_trivial {
        let lo0 = base.iter().flat_map(|t| t.iter()).map(|&p| diag(p)).min().unwrap();
        let need = cur + 3 * prm.gap + 3;
        let sh = (need - lo0).div_euclid(3) + 1;
        let tris: Vec<Tri> = base.iter().map(|t| tri_map(t, sh, false)).collect();
        cur = tris.iter().flat_map(|t| t.iter()).map(|&p| diag(p)).max().unwrap();
        slots.push((sh, false));
        data.push(tris);
    }
    Ok(Geometry {
        slots,
        data,
        anc,
        skip,
        notches: notch_pts.len(),
    })
}

/// Lift a logical word on N patches to the layout; Y on a patch is i X Z.
pub fn lift_word(word: &PauliOperator, patch_qubits: &[Vec<usize>], n: usize) -> PauliOperator {
    let mut out = PauliOperator::identity(n);
    for (j, qs) in patch_qubits.iter().enumerate() {
        let p = match word.get(j) {
            Pauli::I => continue,
            Pauli::X => PauliOperator::uniform(n, qs, Pauli::X),
            Pauli::Z => PauliOperator::uniform(n, qs, Pauli::Z),
            Pauli::Y => PauliOperator::uniform(n, qs, Pauli::X)
                .mul_unchecked(&PauliOperator::uniform(n, qs, Pauli::Z))
                .negated(),
        };
        out = out.mul_unchecked(&p);
    }
    if word.is_negative() {
        out = out.negated();
    }
    out
}

impl SurgeryLayout {
    /// Build the layout measuring `la` and `lb` (words on N patches) with distance-d patches.
    pub fn new(d: usize, la: &PauliOperator, lb: &PauliOperator) -> Result<Self> {
        Self::with_params(d, la, lb, LayoutParams::for_distance(d))
    }

    pub fn with_params(d: usize, la: &PauliOperator, lb: &PauliOperator, params: LayoutParams) -> Result<Self> {
        if d < 3 || d.is_multiple_of(2) {
            return Err(Error::Validation(format!("distance must be odd and at least 3, got {d}")));
        }
        let nlog = la.num_qubits();
        if lb.num_qubits() != nlog {
            return Err(Error::Validation("L_A and L_B act on different patch counts".into()));
        }
        if !la.commutes_unchecked(lb) {
            return Err(Error::Validation("L_A and L_B anticommute".into()));
        }
        if la.is_identity() && lb.is_identity() {
            return Err(Error::Validation("both target operators are the identity".into()));
        }
        let la = {
            let mut p = la.clone();
            p.set_sign(false);
            p
        };
        let lb = {
            let mut p = lb.clone();
            p.set_sign(false);
            p
        };
        let cases: Vec<BoundaryCase> = (0..nlog).map(|j| BoundaryCase::classify(la.get(j), lb.get(j))).collect();
        let a_idx: Vec<usize> = (0..nlog).filter(|&j| cases[j] == BoundaryCase::A).collect();
        let singles: Vec<usize> = (0..nlog)
            .filter(|&j| matches!(cases[j], BoundaryCase::B | BoundaryCase::CA | BoundaryCase::CB))
            .collect();
        let trivial: Vec<usize> = (0..nlog).filter(|&j| cases[j] == BoundaryCase::Trivial).collect();
        let mut order = Vec::new();
        let mut kinds = Vec::new();
        for p in a_idx.chunks(2) {
            order.extend_from_slice(p);
            kinds.push(true);
        }
        for &j in &singles {
            order.push(j);
            kinds.push(false);
        }
        let n_active = order.len();
        let pair_of: Vec<usize> = (0..n_active).map(|s| s / 2).collect();
        order.extend_from_slice(&trivial);
        let geo = place(d, &kinds, trivial.len(), &params)?;

        // Qubits: data slot by slot, then ancilla.
        let mut qubits = Vec::new();
        let mut patch_qubits = vec![Vec::new(); nlog];
        let mut tri_index: BTreeMap<Tri, usize> = BTreeMap::new();
        let mut owner: BTreeMap<Tri, usize> = BTreeMap::new();
        for (s, tris) in geo.data.iter().enumerate() {
            let mut tris = tris.clone();
            tris.sort();
            for t in tris {
                let q = qubits.len();
                tri_index.insert(t, q);
                owner.insert(t, s);
                patch_qubits[order[s]].push(q);
                qubits.push(LayoutQubit {
                    coord: tri_coord(&t),
                    role: QubitRole::Data { patch: order[s] },
                });
            }
        }
        let n_data = qubits.len();
        for t in &geo.anc {
            tri_index.insert(*t, qubits.len());
            qubits.push(LayoutQubit {
                coord: tri_coord(t),
                role: QubitRole::Ancilla,
            });
        }
        let n = qubits.len();
        let is_data = |q: usize| q < n_data;
        let mut faces: BTreeMap<Point, Vec<usize>> = BTreeMap::new();
        for (t, &q) in &tri_index {
            for &p in t {
                faces.entry(p).or_default().push(q);
            }
        }
        for f in faces.values_mut() {
            f.sort();
        }
        let mut bell_edges = Vec::new();
        let mut seen = BTreeSet::new();
        for t in &geo.anc {
            if seen.contains(t) {
                continue;
            }
            let u = red_partner(t);
            seen.insert(*t);
            seen.insert(u);
            bell_edges.push([tri_index[t], tri_index[&u]]);
        }

        // Split group.
        let mut split_generators = Vec::new();
        for s in 0..geo.data.len() {
            for f in faces.values() {
                let fr: Vec<usize> = f.iter().copied().filter(|q| owner_slot(&qubits, *q, &order) == Some(s)).collect();
                if fr.len() >= 4 {
                    split_generators.push(PauliOperator::uniform(n, &fr, Pauli::X));
                    split_generators.push(PauliOperator::uniform(n, &fr, Pauli::Z));
                }
            }
        }
        let num_data_stabilizers = split_generators.len();
        for e in &bell_edges {
            split_generators.push(PauliOperator::uniform(n, e, Pauli::X));
            split_generators.push(PauliOperator::uniform(n, e, Pauli::Z));
        }

        // Wall points: faces with qubits from one patch and from the ancilla.
        let mut walls: BTreeMap<Point, (usize, Vec<usize>, Vec<usize>)> = BTreeMap::new();
        for (p, f) in &faces {
            let a: Vec<usize> = f.iter().copied().filter(|&q| !is_data(q)).collect();
            for s in 0..n_active {
                let dd: Vec<usize> = f
                    .iter()
                    .copied()
                    .filter(|&q| owner_slot(&qubits, q, &order) == Some(s))
                    .collect();
                if !dd.is_empty() && !a.is_empty() {
                    walls.insert(*p, (s, dd, a.clone()));
                }
            }
        }
        let mut merged_generators = Vec::new();
        let mut merged_labels = Vec::new();
        for (p, f) in &faces {
            if geo.skip.contains(p) || walls.contains_key(p) || f.len() % 2 == 1 {
                continue;
            }
            let red_anc = f.len() == 2 && color(*p) == Color::Red && !f.iter().any(|&q| is_data(q));
            if f.len() >= 4 || red_anc {
                for (pl, tag) in [(Pauli::X, "X"), (Pauli::Z, "Z")] {
                    merged_generators.push(PauliOperator::uniform(n, f, pl));
                    merged_labels.push(format!("face({},{}){tag}", p.0, p.1));
                }
            }
        }
        let mut corners: BTreeMap<usize, Vec<CornerFace>> = BTreeMap::new();
        for (p, (s, dd, a)) in &walls {
            let j = order[*s];
            let case = cases[j];
            let map = basis_map(case, la.get(j), lb.get(j));
            let parts: Vec<(Pauli, Pauli)> = if case == BoundaryCase::A {
                if (dd.len() + a.len()) % 2 == 1 {
                    continue;
                }
                if dd.len() % 2 == 1 {
                    corners.entry(pair_of[*s]).or_default().push((*p, dd.clone(), a.clone(), map));
                    continue;
                }
                vec![(Pauli::X, Pauli::X), (Pauli::Z, Pauli::Z)]
            } else {
                let role = format!(
                    "{}{}",
                    if color(*p) == Color::Red { "r" } else { "g" },
                    if dd.len() == 1 { "c" } else { "" }
                );
                template(case, &role)
            };
            for (dt, at) in parts {
                let mut op = PauliOperator::identity(n);
                let dl = map[idx(dt)];
                for &q in dd {
                    op.set(q, dl);
                }
                for &q in a {
                    op.set(q, at);
                }
                merged_generators.push(op);
                merged_labels.push(format!(
                    "wall({},{}){}{}",
                    p.0,
                    p.1,
                    dl.to_char(),
                    at.to_char()
                ));
            }
        }
        // Odd corner faces of a case-(a) pair are only measured jointly.
        for (pair, fs) in &corners {
            if fs.len() != 2 {
                return Err(Error::Runtime(format!("pair {pair} has {} odd corner faces", fs.len())));
            }
            for pl in [Pauli::X, Pauli::Z] {
                let mut op = PauliOperator::identity(n);
                for (_, dd, a, map) in fs {
                    for &q in dd {
                        op.set(q, map[idx(pl)]);
                    }
                    for &q in a {
                        op.set(q, pl);
                    }
                }
                merged_generators.push(op);
                merged_labels.push(format!(
                    "corner({},{})+({},{}){}",
                    fs[0].0 .0,
                    fs[0].0 .1,
                    fs[1].0 .0,
                    fs[1].0 .1,
                    pl.to_char()
                ));
            }
        }

        let mut segments = Vec::new();
        let mut prev: Option<usize> = None;
        let mut s = 0;
        for &pair in &kinds {
            if pair {
                segments.push(AncillaSegment { color: Color::Green, between: [prev, Some(order[s])] });
                segments.push(AncillaSegment { color: Color::Blue, between: [Some(order[s]), Some(order[s + 1])] });
                prev = Some(order[s + 1]);
                s += 2;
            } else {
                segments.push(AncillaSegment { color: Color::Green, between: [prev, Some(order[s])] });
                prev = Some(order[s]);
                s += 1;
            }
        }
        segments.push(AncillaSegment { color: Color::Green, between: [prev, None] });

        let slots = geo
            .slots
            .iter()
            .enumerate()
            .map(|(s, &(shift, mirrored))| Slot {
                patch: order[s],
                shift,
                mirrored,
                case: cases[order[s]],
            })
            .collect();
        let anc_fragment = ColorLattice::assemble(
            "ancilla",
            &geo.anc,
            |p, w| (w >= 4 && !geo.skip.contains(&p)).then_some(StabilizerType::Both),
            &[],
        );
        let ancilla_qubits: Vec<usize> = (n_data..n).collect();
        let mut layout = SurgeryLayout {
            d,
            params,
            la: la.clone(),
            lb: lb.clone(),
            cases,
            slots,
            qubits,
            patch_qubits,
            bell_edges,
            split_generators,
            num_data_stabilizers,
            merged_generators,
            merged_labels,
            skipped_points: geo.skip.iter().map(|p| [p.0, p.1]).collect(),
            segments,
            recipes: Vec::new(),
            ancilla: anc_fragment,
            ancilla_qubits,
        };
        debug_assert_eq!(geo.notches, layout.blue_segments());
        layout.recipes = layout.compute_recipes()?;
        Ok(layout)
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn num_patches(&self) -> usize {
        self.la.num_qubits()
    }

    pub fn blue_segments(&self) -> usize {
        self.segments.iter().filter(|s| s.color == Color::Blue).count()
    }

    /// Index of the split generator X X (kind = X) or Z Z on Bell edge `e`.
    pub fn bell_generator(&self, e: usize, kind: Pauli) -> usize {
        self.num_data_stabilizers + 2 * e + usize::from(kind == Pauli::Z)
    }

    pub fn lift(&self, word: &PauliOperator) -> PauliOperator {
        lift_word(word, &self.patch_qubits, self.num_qubits())
    }

    pub fn target(&self, which: Which) -> &PauliOperator {
        match which {
            Which::A => &self.la,
            Which::B => &self.lb,
        }
    }

    pub fn recipe(&self, which: Which) -> Option<&Recipe> {
        self.recipes.iter().find(|r| r.which == which)
    }

    fn compute_recipes(&self) -> Result<Vec<Recipe>> {
        let nm = self.merged_generators.len();
        let total = nm + self.split_generators.len();
        let mut basis = Basis::new(2 * self.num_qubits(), total);
        for g in self.merged_generators.iter().chain(&self.split_generators) {
            let _ = basis.insert(&g.symplectic());
        }
        let mut out = Vec::new();
        for which in [Which::A, Which::B] {
            let target = self.target(which).clone();
            if target.is_identity() {
                continue;
            }
            let l = self.lift(&target);
            let combo = basis
                .express(&l.symplectic())
                .ok_or_else(|| Error::Runtime(format!("target {} not generated by the merged and split groups", target.to_sparse())))?;
            let q_generators: Vec<usize> = combo.ones().filter(|&i| i < nm).collect();
            let s_generators: Vec<usize> = combo.ones().filter(|&i| i >= nm).map(|i| i - nm).collect();
            let qp = product(&self.merged_generators, &q_generators, self.num_qubits());
            let sp = product(&self.split_generators, &s_generators, self.num_qubits());
            if !qp.commutes_unchecked(&sp) {
                return Err(Error::Runtime("outcome recipe factors anticommute".into()));
            }
            let r = qp.mul_unchecked(&sp);
            out.push(Recipe {
                which,
                target,
                q_generators,
                s_generators,
                sign: if r.is_negative() != l.is_negative() { -1 } else { 1 },
            });
        }
        Ok(out)
    }

    /// Q operator of a recipe (product of its merged generators).
    pub fn q_operator(&self, which: Which) -> Option<PauliOperator> {
        self.recipe(which).map(|r| product(&self.merged_generators, &r.q_generators, self.num_qubits()))
    }

    /// S operator of a recipe (product of its split generators).
    pub fn s_operator(&self, which: Which) -> Option<PauliOperator> {
        self.recipe(which).map(|r| product(&self.split_generators, &r.s_generators, self.num_qubits()))
    }

    /// Bell edges entering the S recipe, as (edge, X or Z) pairs.
    pub fn s_bell_bits(&self, which: Which) -> Vec<(usize, Pauli)> {
        self.recipe(which)
            .map(|r| {
                r.s_generators
                    .iter()
                    .filter(|&&g| g >= self.num_data_stabilizers)
                    .map(|&g| {
                        let k = g - self.num_data_stabilizers;
                        (k / 2, if k.is_multiple_of(2) { Pauli::X } else { Pauli::Z })
                    })
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Structural checks: abelian merged group, recipe consistency, Bell edges disjoint.
    pub fn check(&self) -> Vec<String> {
        let mut out = Vec::new();
        let g = &self.merged_generators;
        for i in 0..g.len() {
            for j in (i + 1)..g.len() {
                if !g[i].commutes_unchecked(&g[j]) {
                    out.push(format!("merged generators {} and {} anticommute", self.merged_labels[i], self.merged_labels[j]));
                }
            }
        }
        for which in [Which::A, Which::B] {
            let l = self.lift(self.target(which));
            if let Some(x) = g.iter().position(|m| !m.commutes_unchecked(&l)) {
                out.push(format!("{} anticommutes with lifted L_{which:?}", self.merged_labels[x]));
            }
        }
        let mut used = BTreeSet::new();
        for e in &self.bell_edges {
            for &q in e {
                if !used.insert(q) {
                    out.push(format!("qubit {q} lies on two Bell edges"));
                }
            }
        }
        for which in [Which::A, Which::B] {
            if let (Some(q), Some(s)) = (self.q_operator(which), self.s_operator(which)) {
                if let Some(x) = g.iter().position(|m| !m.commutes_unchecked(&q)) {
                    out.push(format!("Q_{which:?} anticommutes with {}", self.merged_labels[x]));
                }
                if self.split_generators.iter().any(|m| !m.commutes_unchecked(&q)) {
                    out.push(format!("Q_{which:?} anticommutes with the split group"));
                }
                let data: Vec<usize> = (0..self.num_qubits())
                    .filter(|&k| matches!(self.qubits[k].role, QubitRole::Data { .. }))
                    .collect();
                let prod = q.mul_unchecked(&s);
                let l = self.lift(self.target(which));
                if prod.restrict(&data).symplectic() != l.restrict(&data).symplectic() {
                    out.push(format!("Q_{which:?} S_{which:?} differs from the target on the data"));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let l: SurgeryLayout = serde_json::from_str(s)?;
        let n = l.num_qubits();
        let bad = l.merged_generators.iter().chain(&l.split_generators).any(|g| g.num_qubits() != n)
            || l.bell_edges.iter().flatten().any(|&q| q >= n)
            || l.merged_labels.len() != l.merged_generators.len();
        if bad {
            return Err(Error::Validation("inconsistent surgery layout".into()));
        }
        Ok(l)
    }
}

fn owner_slot(qubits: &[LayoutQubit], q: usize, order: &[usize]) -> Option<usize> {
    match qubits[q].role {
        QubitRole::Data { patch } => order.iter().position(|&j| j == patch),
        QubitRole::Ancilla => None,
    }
}

pub(crate) fn product(gens: &[PauliOperator], which: &[usize], n: usize) -> PauliOperator {
    which
        .iter()
        .fold(PauliOperator::identity(n), |acc, &i| acc.mul_unchecked(&gens[i]))
}

/// Build a layout from triangular code patches of a common distance.
pub fn build_surgery_layout(patches: &[CodePatch], la: &PauliOperator, lb: &PauliOperator) -> Result<SurgeryLayout> {
    let first = patches.first().ok_or_else(|| Error::Validation("no patches".into()))?;
    let n0 = first.num_qubits();
    let d = (1..=99usize)
        .step_by(2)
        .find(|&d| (3 * d * d + 1) / 4 == n0 && d >= 3)
        .ok_or_else(|| Error::Validation("patches must be triangular color codes".into()))?;
    if patches.iter().any(|p| p.num_qubits() != n0 || p.k != 1) {
        return Err(Error::Validation("patches must share one distance".into()));
    }
    if la.num_qubits() != patches.len() || lb.num_qubits() != patches.len() {
        return Err(Error::Validation("target words must have one letter per patch".into()));
    }
    SurgeryLayout::new(d, la, lb)
}

