//! Bell-measurement errors during the split, their syndrome graph and a
//! matching decoder.

use crate::error::{Error, Result};
use crate::gf2::Basis;
use crate::layout::{SurgeryLayout, Which};
use crate::matching::min_weight_perfect_matching;
use crate::pauli::Pauli;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

/// One Bell-measurement outcome: the X X or Z Z reading on a red edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BellBit {
    pub edge: usize,
    pub kind: Pauli,
}

/// Flipped Bell outcomes, as indices into [`SyndromeGraph::bits`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorConfiguration {
    pub flipped: Vec<usize>,
}

/// Nodes are the merged checks that the split re-measures as products of red
/// edges, plus one boundary node (index `num_checks`). Each Bell outcome is a
/// graph edge between the (at most two) checks it enters.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SyndromeGraph {
    pub num_checks: usize,
    /// Merged-generator index of each check.
    pub checks: Vec<usize>,
    pub bits: Vec<BellBit>,
    pub ends: Vec<[usize; 2]>,
    /// For A and B: whether each bit enters the S recipe.
    pub logical: Vec<(Which, Vec<bool>)>,
    adj: Vec<Vec<(usize, usize)>>,
    dist: Vec<Vec<u32>>,
    parent: Vec<Vec<Option<(usize, usize)>>>,
}

impl SyndromeGraph {
    pub fn new(layout: &SurgeryLayout) -> Result<Self> {
        let s = &layout.split_generators;
        let n2 = 2 * layout.num_qubits();
        let mut basis = Basis::new(n2, s.len());
        for g in s {
            let _ = basis.insert(&g.symplectic());
        }
        let nb = layout.bell_edges.len();
        let bits: Vec<BellBit> = (0..nb)
            .flat_map(|e| [BellBit { edge: e, kind: Pauli::X }, BellBit { edge: e, kind: Pauli::Z }])
            .collect();
        let bit_of = |gen: usize| gen.checked_sub(layout.num_data_stabilizers);
        let mut checks = Vec::new();
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); bits.len()];
        for (i, g) in layout.merged_generators.iter().enumerate() {
            if let Some(c) = basis.express(&g.symplectic()) {
                let bs: Vec<usize> = c.ones().filter_map(bit_of).collect();
                if !bs.is_empty() {
                    for b in bs {
                        members[b].push(checks.len());
                    }
                    checks.push(i);
                }
            }
        }
        let m = checks.len();
        let mut ends = Vec::with_capacity(bits.len());
        for (b, mem) in members.iter().enumerate() {
            ends.push(match mem[..] {
                [] => [m, m],
                [x] => [x, m],
                [x, y] => [x, y],
                _ => {
                    return Err(Error::Runtime(format!(
                        "Bell outcome {b} enters {} checks; not matchable",
                        mem.len()
                    )))
                }
            });
        }
        let mut logical = Vec::new();
        for which in [Which::A, Which::B] {
            if layout.recipe(which).is_some() {
                let mut mask = vec![false; bits.len()];
                for (e, k) in layout.s_bell_bits(which) {
                    mask[2 * e + usize::from(k == Pauli::Z)] = true;
                }
                logical.push((which, mask));
            }
        }
        let mut adj = vec![Vec::new(); m + 1];
        for (b, &[u, v]) in ends.iter().enumerate() {
            adj[u].push((v, b));
            if u != v {
                adj[v].push((u, b));
            }
        }
        let mut g = SyndromeGraph {
            num_checks: m,
            checks,
            bits,
            ends,
            logical,
            adj,
            dist: Vec::new(),
            parent: Vec::new(),
        };
        g.all_pairs();
        Ok(g)
    }

    pub fn boundary(&self) -> usize {
        self.num_checks
    }

    fn all_pairs(&mut self) {
        let nn = self.num_checks + 1;
        self.dist = vec![vec![u32::MAX; nn]; nn];
        self.parent = vec![vec![None; nn]; nn];
        for s in 0..nn {
            let mut q = VecDeque::from([s]);
            self.dist[s][s] = 0;
            while let Some(v) = q.pop_front() {
                for &(w, b) in &self.adj[v] {
                    if self.dist[s][w] == u32::MAX {
                        self.dist[s][w] = self.dist[s][v] + 1;
                        self.parent[s][w] = Some((v, b));
                        q.push_back(w);
                    }
                }
            }
        }
    }

    /// Independently flip each Bell outcome with probability p.
    pub fn sample_errors<R: Rng + ?Sized>(&self, p: f64, rng: &mut R) -> Result<ErrorConfiguration> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Validation(format!("probability {p} outside [0, 1]")));
        }
        Ok(ErrorConfiguration {
            flipped: (0..self.bits.len()).filter(|_| rng.gen_bool(p)).collect(),
        })
    }

    /// Violated checks (sorted); the boundary absorbs parity silently.
    pub fn syndrome_of(&self, e: &ErrorConfiguration) -> Vec<usize> {
        let mut par = vec![false; self.num_checks + 1];
        for &b in &e.flipped {
            let [u, v] = self.ends[b];
            if u != v {
                par[u] ^= true;
                par[v] ^= true;
            }
        }
        (0..self.num_checks).filter(|&i| par[i]).collect()
    }

    fn path(&self, s: usize, t: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut v = t;
        while v != s {
            let (u, b) = self.parent[s][v].expect("reachable");
            out.push(b);
            v = u;
        }
        out
    }

    /// Minimum-weight correction: pair defects with each other or the boundary.
    pub fn decode(&self, syndrome: &[usize]) -> Result<ErrorConfiguration> {
        let k = syndrome.len();
        let bnd = self.boundary();
        let mut edges = Vec::new();
        for i in 0..k {
            for j in (i + 1)..k {
                let d = self.dist[syndrome[i]][syndrome[j]];
                if d != u32::MAX {
                    edges.push((i, j, d as i64));
                }
                edges.push((k + i, k + j, 0));
            }
            let d = self.dist[syndrome[i]][bnd];
            if d != u32::MAX {
                edges.push((i, k + i, d as i64));
            }
        }
        let mate = min_weight_perfect_matching(2 * k, &edges)
            .ok_or_else(|| Error::Runtime("syndrome cannot be matched".into()))?;
        let mut flip = vec![false; self.bits.len()];
        for i in 0..k {
            let j = mate[i];
            let path = if j < k {
                if i > j {
                    continue;
                }
                self.path(syndrome[i], syndrome[j])
            } else {
                self.path(syndrome[i], bnd)
            };
            for b in path {
                flip[b] ^= true;
            }
        }
        Ok(ErrorConfiguration {
            flipped: (0..flip.len()).filter(|&b| flip[b]).collect(),
        })
    }

    /// True if error plus correction flips the parity of the S recipe for `which`.
    pub fn is_logical_failure(&self, e: &ErrorConfiguration, c: &ErrorConfiguration, which: Which) -> bool {
        let Some((_, mask)) = self.logical.iter().find(|(w, _)| *w == which) else {
            return false;
        };
        let par = e.flipped.iter().chain(&c.flipped).filter(|&&b| mask[b]).count();
        par % 2 == 1
    }

    pub fn any_failure(&self, e: &ErrorConfiguration, c: &ErrorConfiguration) -> bool {
        self.logical.iter().any(|(w, _)| self.is_logical_failure(e, c, *w))
    }

    /// Fewest Bell errors that are undetected and flip the recipe parity.
    pub fn min_cut_distance(&self, which: Which) -> Option<usize> {
        let (_, mask) = self.logical.iter().find(|(w, _)| *w == which)?;
        let nn = self.num_checks + 1;
        let mut best: Option<usize> = None;
        for src in 0..nn {
            let mut dist = vec![[usize::MAX; 2]; nn];
            dist[src][0] = 0;
            let mut q = VecDeque::from([(src, 0usize)]);
            while let Some((v, p)) = q.pop_front() {
                for &(w, b) in &self.adj[v] {
                    let np = p ^ usize::from(mask[b]);
                    if dist[w][np] == usize::MAX {
                        dist[w][np] = dist[v][p] + 1;
                        q.push_back((w, np));
                    }
                }
            }
            let d = dist[src][1];
            if d != usize::MAX && best.is_none_or(|b| d < b) {
                best = Some(d);
            }
        }
        best
    }

    /// Smallest min-cut over the recipes present.
    pub fn fault_distance(&self) -> Option<usize> {
        self.logical.iter().filter_map(|(w, _)| self.min_cut_distance(*w)).min()
    }
}

/// Failure statistics with a Wilson 95% interval.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailureEstimate {
    pub d: usize,
    pub p: f64,
    pub trials: u64,
    pub failures: u64,
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

pub fn wilson_interval(failures: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let n = trials as f64;
    let ph = failures as f64 / n;
    let den = 1.0 + z * z / n;
    let center = (ph + z * z / (2.0 * n)) / den;
    let half = z * (ph * (1.0 - ph) / n + z * z / (4.0 * n * n)).sqrt() / den;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Per-trial seeds derive from (seed, trial index), so results do not depend
/// on how trials are spread over threads.
pub fn monte_carlo_failure(g: &SyndromeGraph, d: usize, p: f64, trials: u64, seed: u64) -> Result<FailureEstimate> {
    if trials == 0 {
        return Err(Error::Validation("trials must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Validation(format!("probability {p} outside [0, 1]")));
    }
    const CHUNK: u64 = 1024;
    let chunks = trials.div_ceil(CHUNK);
    let failures: Result<u64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let mut f = 0;
            for _ in (c * CHUNK)..((c + 1) * CHUNK).min(trials) {
                let e = g.sample_errors(p, &mut rng)?;
                let corr = g.decode(&g.syndrome_of(&e))?;
                if g.any_failure(&e, &corr) {
                    f += 1;
                }
            }
            Ok(f)
        })
        .sum();
    let failures = failures?;
    let (lo, hi) = wilson_interval(failures, trials);
    Ok(FailureEstimate {
        d,
        p,
        trials,
        failures,
        rate: failures as f64 / trials as f64,
        ci_low: lo,
        ci_high: hi,
    })
}

/// Decode every error of weight at most `w`; returns (errors tried, failures).
pub fn exhaustive_sweep(g: &SyndromeGraph, w: usize) -> Result<(u64, u64)> {
    let nb = g.bits.len();
    let mut tried = 0;
    let mut failed = 0;
    let mut run = |flipped: Vec<usize>| -> Result<()> {
        let e = ErrorConfiguration { flipped };
        let c = g.decode(&g.syndrome_of(&e))?;
        tried += 1;
        if g.any_failure(&e, &c) {
            failed += 1;
        }
        Ok(())
    };
    if w >= 1 {
        for i in 0..nb {
            run(vec![i])?;
        }
    }
    if w >= 2 {
        for i in 0..nb {
            for j in (i + 1)..nb {
                run(vec![i, j])?;
            }
        }
    }
    if w > 2 {
        return Err(Error::Validation("exhaustive sweep supports weight up to 2".into()));
    }
    Ok((tried, failed))
}
