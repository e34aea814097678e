//! Merge/split execution on a surgery layout, outcome inference, a reference
//! oracle on abstract logical qubits and the algebraic leakage check.

use crate::error::{Error, Result};
use crate::gf2::{left_nullspace, Basis, BitVec};
use crate::layout::{product, QubitRole, SurgeryLayout, Which};
use crate::pauli::{Pauli, PauliOperator};
use crate::tableau::StabilizerTableau;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Merge,
    Split,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordEntry {
    pub id: usize,
    pub operator: PauliOperator,
    pub outcome: i8,
    pub deterministic: bool,
}

/// Outcomes of one measurement phase, in generator order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub phase: Phase,
    pub entries: Vec<RecordEntry>,
}

impl MeasurementRecord {
    fn product(&self, ids: &[usize]) -> Result<i8> {
        ids.iter().try_fold(1i8, |acc, &i| {
            self.entries
                .get(i)
                .filter(|e| e.id == i)
                .map(|e| acc * e.outcome)
                .ok_or_else(|| Error::Runtime(format!("{:?} record lacks generator {i}", self.phase)))
        })
    }
}

/// Inferred logical outcomes; `outcome = q * s` for each target present.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SurgeryResult {
    pub outcome_a: Option<i8>,
    pub outcome_b: Option<i8>,
    pub q_a: Option<i8>,
    pub q_b: Option<i8>,
    pub s_a: Option<i8>,
    pub s_b: Option<i8>,
    pub leakage: Option<LeakageReport>,
}

impl SurgeryResult {
    pub fn outcome(&self, which: Which) -> Option<i8> {
        match which {
            Which::A => self.outcome_a,
            Which::B => self.outcome_b,
        }
    }
}

/// Data patches in |0...0> logical states with +1 stabilizers, ancilla in |0>.
pub fn prepare_data(layout: &SurgeryLayout) -> Result<StabilizerTableau> {
    let mut t = StabilizerTableau::new(layout.num_qubits());
    for g in &layout.split_generators[..layout.num_data_stabilizers] {
        t.force(g, false)?;
    }
    Ok(t)
}

/// Put every red Bell edge into the +1 eigenstate of X X and Z Z.
pub fn prepare_ancilla(layout: &SurgeryLayout, mut t: StabilizerTableau) -> Result<StabilizerTableau> {
    if t.num_qubits() != layout.num_qubits() {
        return Err(Error::Validation("tableau and layout sizes differ".into()));
    }
    let mut used = vec![false; layout.num_qubits()];
    for e in &layout.bell_edges {
        for &q in e {
            if std::mem::replace(&mut used[q], true) {
                return Err(Error::Validation(format!("qubit {q} lies on two Bell edges")));
            }
        }
    }
    for g in &layout.split_generators[layout.num_data_stabilizers..] {
        t.force(g, false)?;
    }
    Ok(t)
}

fn measure_all<R: Rng + ?Sized>(
    t: &mut StabilizerTableau,
    gens: &[PauliOperator],
    phase: Phase,
    rng: &mut R,
) -> Result<MeasurementRecord> {
    let mut entries = Vec::with_capacity(gens.len());
    for (id, g) in gens.iter().enumerate() {
        let m = t.measure(g, rng)?;
        entries.push(RecordEntry {
            id,
            operator: g.clone(),
            outcome: m.outcome,
            deterministic: m.deterministic,
        });
    }
    Ok(MeasurementRecord { phase, entries })
}

/// Measure every generator of the merged group.
pub fn merge<R: Rng + ?Sized>(t: &mut StabilizerTableau, layout: &SurgeryLayout, rng: &mut R) -> Result<MeasurementRecord> {
    if t.num_qubits() != layout.num_qubits() {
        return Err(Error::Validation("tableau and layout sizes differ".into()));
    }
    measure_all(t, &layout.merged_generators, Phase::Merge, rng)
}

/// Re-measure the split group (data stabilizers, then Bell X X and Z Z per edge).
pub fn split<R: Rng + ?Sized>(
    t: &mut StabilizerTableau,
    layout: &SurgeryLayout,
    merged: &MeasurementRecord,
    rng: &mut R,
) -> Result<MeasurementRecord> {
    if merged.phase != Phase::Merge || merged.entries.len() != layout.merged_generators.len() {
        return Err(Error::Runtime("split requires a completed merge".into()));
    }
    if t.num_qubits() != layout.num_qubits() {
        return Err(Error::Validation("tableau and layout sizes differ".into()));
    }
    measure_all(t, &layout.split_generators, Phase::Split, rng)
}

/// Combine the merge and split records into the two logical outcomes.
pub fn infer_outcomes(merge_rec: &MeasurementRecord, split_rec: &MeasurementRecord, layout: &SurgeryLayout) -> Result<SurgeryResult> {
    if merge_rec.phase != Phase::Merge || split_rec.phase != Phase::Split {
        return Err(Error::Runtime("records out of order".into()));
    }
    let mut res = SurgeryResult::default();
    for r in &layout.recipes {
        let q = r.sign * merge_rec.product(&r.q_generators)?;
        let s = split_rec.product(&r.s_generators)?;
        match r.which {
            Which::A => (res.q_a, res.s_a, res.outcome_a) = (Some(q), Some(s), Some(q * s)),
            Which::B => (res.q_b, res.s_b, res.outcome_b) = (Some(q), Some(s), Some(q * s)),
        }
    }
    Ok(res)
}

/// Phase records of one protocol execution plus checks made along the way.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SurgeryTrace {
    pub records: Vec<MeasurementRecord>,
    pub result: SurgeryResult,
    /// Every recipe Q operator had a fixed value right after the merge.
    pub q_deterministic: bool,
}

impl SurgeryTrace {
    pub fn merge_windows(&self) -> usize {
        self.records.iter().filter(|r| r.phase == Phase::Merge).count()
    }
}

/// One merge window followed by one split, on a state prepared by the caller.
pub fn run_surgery<R: Rng + ?Sized>(t: &mut StabilizerTableau, layout: &SurgeryLayout, rng: &mut R) -> Result<SurgeryTrace> {
    let m = merge(t, layout, rng)?;
    let mut q_deterministic = true;
    for w in [Which::A, Which::B] {
        if let Some(q) = layout.q_operator(w) {
            q_deterministic &= t.expectation(&q)?.is_some();
        }
    }
    let s = split(t, layout, &m, rng)?;
    let result = infer_outcomes(&m, &s, layout)?;
    Ok(SurgeryTrace {
        records: vec![m, s],
        result,
        q_deterministic,
    })
}

/// Logical input state: |0...0> followed by measurement of these words, with
/// outcomes drawn from the trial's random source.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LogicalPrep {
    pub words: Vec<PauliOperator>,
}

impl LogicalPrep {
    pub fn random<R: Rng + ?Sized>(n: usize, count: usize, rng: &mut R) -> Self {
        let words = (0..count).map(|_| random_word(n, rng)).collect();
        LogicalPrep { words }
    }
}

/// Uniform non-identity word on n patches.
pub fn random_word<R: Rng + ?Sized>(n: usize, rng: &mut R) -> PauliOperator {
    loop {
        let mut p = PauliOperator::identity(n);
        for q in 0..n {
            p.set(q, Pauli::from_bits(rng.gen(), rng.gen()));
        }
        if !p.is_identity() {
            return p;
        }
    }
}

/// Random pair of commuting words with L_B outside {I, L_A}.
pub fn random_commuting_pair<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (PauliOperator, PauliOperator) {
    loop {
        let a = random_word(n, rng);
        let b = random_word(n, rng);
        if a.commutes_unchecked(&b) && a.symplectic() != b.symplectic() {
            return (a, b);
        }
    }
}

/// Outcome of comparing the lattice protocol against the abstract reference.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub trials: usize,
    pub agreements: usize,
    /// Logical words whose final expectations were compared per trial.
    pub compared_words: usize,
    pub mismatches: Vec<String>,
}

impl OracleReport {
    pub fn agrees(&self) -> bool {
        self.trials > 0 && self.agreements == self.trials
    }
}

/// Every word on n patches commuting with the targets, each paired with a
/// dressed lattice operator whose value the protocol preserves.
pub struct DressedLogicals {
    pub pairs: Vec<(PauliOperator, PauliOperator)>,
}

impl DressedLogicals {
    pub fn new(layout: &SurgeryLayout) -> Result<Self> {
        let n = layout.num_patches();
        if n > 6 {
            return Err(Error::Validation(format!("reference comparison enumerates 4^N words; N={n} is too large")));
        }
        let nm = layout.merged_generators.len();
        let ns = layout.split_generators.len();
        let comm = |p: &PauliOperator| {
            BitVec::from_indices(nm, (0..nm).filter(|&i| !layout.merged_generators[i].commutes_unchecked(p)))
        };
        let mut basis = Basis::new(nm, ns);
        for g in &layout.split_generators {
            let _ = basis.insert(&comm(g));
        }
        let mut pairs = Vec::new();
        for code in 0..(1usize << (2 * n)) {
            let mut k = PauliOperator::identity(n);
            for q in 0..n {
                k.set(q, Pauli::from_bits(code >> (2 * q) & 1 == 1, code >> (2 * q + 1) & 1 == 1));
            }
            if !k.commutes_unchecked(&layout.la) || !k.commutes_unchecked(&layout.lb) {
                continue;
            }
            let lk = layout.lift(&k);
            let combo = basis
                .express(&comm(&lk))
                .ok_or_else(|| Error::Runtime(format!("{} cannot be dressed to commute with the merged group", k.to_sparse())))?;
            let s: Vec<usize> = combo.ones().collect();
            let dressed = lk.mul_unchecked(&product(&layout.split_generators, &s, layout.num_qubits()));
            pairs.push((k, dressed));
        }
        Ok(DressedLogicals { pairs })
    }
}

/// Run one seeded trial on both the lattice and the reference; returns the
/// lattice result and any disagreements.
pub fn reference_trial(
    layout: &SurgeryLayout,
    dressed: &DressedLogicals,
    prep: &LogicalPrep,
    seed: u64,
) -> Result<(SurgeryTrace, Vec<String>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = layout.num_patches();
    let mut reference = StabilizerTableau::new(n);
    let mut lattice = prepare_ancilla(layout, prepare_data(layout)?)?;
    let mut diffs = Vec::new();
    for w in &prep.words {
        let r = reference.measure(w, &mut rng)?;
        let l = lattice.measure_with(&layout.lift(w), || r.outcome < 0)?;
        if r != l {
            diffs.push(format!("seed {seed}: preparing {} gave {:?} vs reference {:?}", w.to_sparse(), l, r));
        }
    }
    let trace = run_surgery(&mut lattice, layout, &mut rng)?;
    if !trace.q_deterministic {
        diffs.push(format!("seed {seed}: Q not deterministic after merge"));
    }
    for which in [Which::A, Which::B] {
        let target = layout.target(which);
        let Some(v) = trace.result.outcome(which) else {
            if !target.is_identity() {
                diffs.push(format!("seed {seed}: no outcome for {which:?}"));
            }
            continue;
        };
        let r = reference.measure_with(target, || v < 0)?;
        if r.outcome != v {
            diffs.push(format!("seed {seed}: {which:?} lattice {v} vs reference {}", r.outcome));
        }
    }
    for (k, dk) in &dressed.pairs {
        let r = reference.expectation(k)?;
        let l = lattice.expectation(dk)?;
        if r != l {
            diffs.push(format!("seed {seed}: <{}> lattice {:?} vs reference {:?}", k.to_dense(), l, r));
        }
    }
    Ok((trace, diffs))
}

/// Compare the lattice protocol with direct measurement of L_A then L_B on an
/// N-qubit reference, one trial per seed.
pub fn verify_against_reference(layout: &SurgeryLayout, prep: &LogicalPrep, seeds: &[u64]) -> Result<OracleReport> {
    let dressed = DressedLogicals::new(layout)?;
    let mut report = OracleReport {
        compared_words: dressed.pairs.len(),
        ..Default::default()
    };
    for &seed in seeds {
        let (_, diffs) = reference_trial(layout, &dressed, prep, seed)?;
        report.trials += 1;
        if diffs.is_empty() {
            report.agreements += 1;
        } else if report.mismatches.len() < 20 {
            report.mismatches.extend(diffs);
        }
    }
    Ok(report)
}

/// Evidence that a data logical is not measured: an ancilla completion U of it
/// inside the merged group anticommutes with a Bell generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeakageWitness {
    pub logical: String,
    /// Whether some merged-group element agrees with the logical on the data.
    pub completed: bool,
    /// Bell edge and kind (X X or Z Z) anticommuting with the completion.
    pub anticommuting_bell: Option<(usize, Pauli)>,
    pub completion_in_split_group: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeakageReport {
    /// Basis of the logical words fixed by the protocol, as sparse strings.
    pub measured: Vec<String>,
    pub measured_rank: usize,
    pub target_rank: usize,
    pub equals_target_span: bool,
    pub witnesses: Vec<LeakageWitness>,
}

impl LeakageReport {
    pub fn no_leakage(&self) -> bool {
        self.equals_target_span && self.witnesses.iter().all(|w| !w.completed || (w.anticommuting_bell.is_some() && !w.completion_in_split_group))
    }
}

fn logical_basis(layout: &SurgeryLayout) -> Vec<PauliOperator> {
    let n = layout.num_patches();
    (0..n)
        .flat_map(|j| [PauliOperator::single(n, j, Pauli::X), PauliOperator::single(n, j, Pauli::Z)])
        .collect()
}

/// Logical words revealed by merge then split: those whose lift lies in the
/// split group extended by merged elements commuting with it.
pub fn verify_no_leakage(layout: &SurgeryLayout) -> Result<LeakageReport> {
    let n = layout.num_qubits();
    let nl = layout.num_patches();
    let nm = layout.merged_generators.len();
    let ns = layout.split_generators.len();
    let comm: Vec<BitVec> = layout
        .merged_generators
        .iter()
        .map(|m| BitVec::from_indices(ns, (0..ns).filter(|&j| !m.commutes_unchecked(&layout.split_generators[j]))))
        .collect();
    let survivors = left_nullspace(&comm, ns);
    let mut rows: Vec<BitVec> = layout.split_generators.iter().map(|g| g.symplectic()).collect();
    for c in &survivors {
        let ids: Vec<usize> = c.ones().collect();
        rows.push(product(&layout.merged_generators, &ids, n).symplectic());
    }
    let base = rows.len();
    let singles = logical_basis(layout);
    rows.extend(singles.iter().map(|w| layout.lift(w).symplectic()));
    let mut found: Vec<PauliOperator> = Vec::new();
    let mut fb = Basis::new(2 * nl, 0);
    for c in left_nullspace(&rows, 2 * n) {
        let ids: Vec<usize> = c.ones().filter(|&i| i >= base).map(|i| i - base).collect();
        let mut w = product(&singles, &ids, nl);
        w.set_sign(false);
        if !w.is_identity() && fb.insert(&w.symplectic()).is_ok() {
            found.push(w);
        }
    }
    let targets: Vec<&PauliOperator> = [&layout.la, &layout.lb].into_iter().filter(|t| !t.is_identity()).collect();
    let mut tb = Basis::new(2 * nl, 0);
    for t in &targets {
        let _ = tb.insert(&t.symplectic());
    }
    let target_rank = tb.rank();
    let measured_rank = found.len();
    let equals_target_span = measured_rank == target_rank && found.iter().all(|w| tb.contains(&w.symplectic()));

    let data: Vec<usize> = (0..n).filter(|&q| matches!(layout.qubits[q].role, QubitRole::Data { .. })).collect();
    let mut on_data = Basis::new(4 * data.len(), nm);
    for m in &layout.merged_generators {
        let _ = on_data.insert(&m.restrict(&data).symplectic());
    }
    let mut split_basis = Basis::new(2 * n, 0);
    for g in &layout.split_generators {
        let _ = split_basis.insert(&g.symplectic());
    }
    let mut witnesses = Vec::new();
    for w in singles.iter().filter(|w| !tb.contains(&w.symplectic())) {
        let lw = layout.lift(w);
        let mut wit = LeakageWitness {
            logical: w.to_sparse(),
            completed: false,
            anticommuting_bell: None,
            completion_in_split_group: false,
        };
        if let Some(c) = on_data.express(&lw.restrict(&data).symplectic()) {
            let ids: Vec<usize> = c.ones().collect();
            let u = lw.mul_unchecked(&product(&layout.merged_generators, &ids, n));
            wit.completed = true;
            wit.completion_in_split_group = split_basis.contains(&u.symplectic());
            wit.anticommuting_bell = (0..layout.bell_edges.len())
                .flat_map(|e| [(e, Pauli::X), (e, Pauli::Z)])
                .find(|&(e, k)| !layout.split_generators[layout.bell_generator(e, k)].commutes_unchecked(&u));
        }
        witnesses.push(wit);
    }
    Ok(LeakageReport {
        measured: found.iter().map(|w| w.to_sparse()).collect(),
        measured_rank,
        target_rank,
        equals_target_span,
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn four_patch() -> SurgeryLayout {
        let la = PauliOperator::from_sparse("X1 X3 Z4", 4).unwrap();
        let lb = PauliOperator::from_sparse("Z1 Z2 Z3 Z4", 4).unwrap();
        SurgeryLayout::new(3, &la, &lb).unwrap()
    }

    #[test]
    fn split_before_merge_fails() {
        let l = four_patch();
        let mut t = prepare_ancilla(&l, prepare_data(&l).unwrap()).unwrap();
        let fake = MeasurementRecord {
            phase: Phase::Split,
            entries: vec![],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(split(&mut t, &l, &fake, &mut rng).is_err());
    }

    #[test]
    fn four_patch_oracle_and_leakage() {
        let l = four_patch();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let prep = LogicalPrep::random(4, 6, &mut rng);
        let rep = verify_against_reference(&l, &prep, &(0..20).collect::<Vec<_>>()).unwrap();
        assert!(rep.agrees(), "{:?}", rep.mismatches);
        let lk = verify_no_leakage(&l).unwrap();
        assert!(lk.no_leakage(), "{lk:?}");
    }
}
