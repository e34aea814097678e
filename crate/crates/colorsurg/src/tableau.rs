//! Stabilizer/destabilizer tableau with Pauli measurements.

use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::pauli::{product_phase, PauliOperator};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Result of a Pauli measurement: eigenvalue and whether it was fixed beforehand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Measurement {
    pub outcome: i8,
    pub deterministic: bool,
}

/// Rows `0..n` are destabilizers, rows `n..2n` stabilizers.
#[derive(Clone, Debug)]
pub struct StabilizerTableau {
    n: usize,
    w: usize,
    xs: Vec<u64>,
    zs: Vec<u64>,
    neg: Vec<bool>,
}

impl StabilizerTableau {
    /// The all-|0> state.
    pub fn new(n: usize) -> Self {
        let w = n.div_ceil(64).max(1);
        let mut t = StabilizerTableau {
            n,
            w,
            xs: vec![0; 2 * n * w],
            zs: vec![0; 2 * n * w],
            neg: vec![false; 2 * n],
        };
        for q in 0..n {
            t.xs[q * w + (q >> 6)] |= 1u64 << (q & 63);
            t.zs[(n + q) * w + (q >> 6)] |= 1u64 << (q & 63);
        }
        t
    }

    /// The unique state stabilized by `gens` (independent, commuting, n of them).
    pub fn from_stabilizers(n: usize, gens: &[PauliOperator]) -> Result<Self> {
        if gens.len() != n {
            return Err(Error::Validation(format!("need {n} generators, got {}", gens.len())));
        }
        let mut t = Self::new(n);
        for g in gens {
            t.force(g, g.is_negative())?;
        }
        Ok(t)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    fn row_x(&self, r: usize) -> &[u64] {
        &self.xs[r * self.w..(r + 1) * self.w]
    }

    fn row_z(&self, r: usize) -> &[u64] {
        &self.zs[r * self.w..(r + 1) * self.w]
    }

    fn row_op(&self, r: usize) -> PauliOperator {
        let mut x = BitVec::zeros(self.n);
        let mut z = BitVec::zeros(self.n);
        for q in 0..self.n {
            if (self.row_x(r)[q >> 6] >> (q & 63)) & 1 == 1 {
                x.flip(q);
            }
            if (self.row_z(r)[q >> 6] >> (q & 63)) & 1 == 1 {
                z.flip(q);
            }
        }
        PauliOperator::from_bits(x, z, self.neg[r])
    }

    pub fn stabilizer(&self, i: usize) -> PauliOperator {
        self.row_op(self.n + i)
    }

    pub fn destabilizer(&self, i: usize) -> PauliOperator {
        self.row_op(i)
    }

    fn padded(&self, p: &PauliOperator) -> (Vec<u64>, Vec<u64>) {
        let mut x = p.x_bits().words().to_vec();
        let mut z = p.z_bits().words().to_vec();
        x.resize(self.w, 0);
        z.resize(self.w, 0);
        (x, z)
    }

    fn anti(&self, r: usize, px: &[u64], pz: &[u64]) -> bool {
        let rx = self.row_x(r);
        let rz = self.row_z(r);
        let mut c = 0u32;
        for k in 0..self.w {
            c ^= (rx[k] & pz[k]).count_ones() ^ (rz[k] & px[k]).count_ones();
        }
        c & 1 == 1
    }

    /// row_h <- row_h · row_i
    fn rowmul(&mut self, h: usize, i: usize) {
        let w = self.w;
        let e = product_phase(self.row_x(h), self.row_z(h), self.row_x(i), self.row_z(i))
            + 2 * (self.neg[h] as u32 + self.neg[i] as u32);
        self.neg[h] = e % 4 >= 2;
        for k in 0..w {
            self.xs[h * w + k] ^= self.xs[i * w + k];
            self.zs[h * w + k] ^= self.zs[i * w + k];
        }
    }

    fn check(&self, p: &PauliOperator) -> Result<()> {
        if p.num_qubits() != self.n {
            return Err(Error::Validation(format!(
                "operator on {} qubits, tableau has {}",
                p.num_qubits(),
                self.n
            )));
        }
        Ok(())
    }

    /// Value of `p` if fixed by the state (+1/-1), otherwise `None`. Does not modify the state.
    pub fn expectation(&self, p: &PauliOperator) -> Result<Option<i8>> {
        self.check(p)?;
        let (px, pz) = self.padded(p);
        let n = self.n;
        if (n..2 * n).any(|r| self.anti(r, &px, &pz)) {
            return Ok(None);
        }
        let mut ax = vec![0u64; self.w];
        let mut az = vec![0u64; self.w];
        let mut aneg = false;
        for i in 0..n {
            if self.anti(i, &px, &pz) {
                let r = n + i;
                let e = product_phase(&ax, &az, self.row_x(r), self.row_z(r)) + 2 * (aneg as u32 + self.neg[r] as u32);
                aneg = e % 4 >= 2;
                for k in 0..self.w {
                    ax[k] ^= self.row_x(r)[k];
                    az[k] ^= self.row_z(r)[k];
                }
            }
        }
        Ok(Some(if aneg != p.is_negative() { -1 } else { 1 }))
    }

    /// Measure `p`; a random outcome takes its bit from `coin` (true means -1).
    pub fn measure_with(&mut self, p: &PauliOperator, coin: impl FnOnce() -> bool) -> Result<Measurement> {
        self.check(p)?;
        let (px, pz) = self.padded(p);
        let n = self.n;
        let Some(pr) = (n..2 * n).find(|&r| self.anti(r, &px, &pz)) else {
            let v = self.expectation(p)?.expect("commuting operator is determined");
            return Ok(Measurement {
                outcome: v,
                deterministic: true,
            });
        };
        for r in 0..2 * n {
            if r != pr && self.anti(r, &px, &pz) {
                self.rowmul(r, pr);
            }
        }
        let w = self.w;
        let d = pr - n;
        for k in 0..w {
            self.xs[d * w + k] = self.xs[pr * w + k];
            self.zs[d * w + k] = self.zs[pr * w + k];
            self.xs[pr * w + k] = px[k];
            self.zs[pr * w + k] = pz[k];
        }
        self.neg[d] = self.neg[pr];
        let flip = coin();
        self.neg[pr] = p.is_negative() ^ flip;
        Ok(Measurement {
            outcome: if flip { -1 } else { 1 },
            deterministic: false,
        })
    }

    pub fn measure<R: Rng + ?Sized>(&mut self, p: &PauliOperator, rng: &mut R) -> Result<Measurement> {
        self.measure_with(p, || rng.gen::<bool>())
    }

    /// Project onto the `neg`-signed eigenspace of `p` (sign of `p` is ignored).
    /// Fails if the state has `p` fixed to the other value.
    pub fn force(&mut self, p: &PauliOperator, neg: bool) -> Result<Measurement> {
        let mut q = p.clone();
        q.set_sign(false);
        let m = self.measure_with(&q, || neg)?;
        if m.deterministic && (m.outcome < 0) != neg {
            return Err(Error::Runtime(format!("cannot force {} to {}", q.to_sparse(), if neg { -1 } else { 1 })));
        }
        Ok(m)
    }

    /// Apply a Pauli to the state (flips signs of anticommuting stabilizers).
    pub fn apply_pauli(&mut self, p: &PauliOperator) -> Result<()> {
        self.check(p)?;
        let (px, pz) = self.padded(p);
        for r in self.n..2 * self.n {
            if self.anti(r, &px, &pz) {
                self.neg[r] = !self.neg[r];
            }
        }
        Ok(())
    }

    /// Check commutation, pairing and rank invariants; returns a list of violations.
    pub fn check_invariants(&self) -> Vec<String> {
        let n = self.n;
        let mut out = Vec::new();
        for i in 0..2 * n {
            let (ix, iz) = (self.row_x(i).to_vec(), self.row_z(i).to_vec());
            for j in (i + 1)..2 * n {
                let a = self.anti(j, &ix, &iz);
                let expect = i < n && j == i + n;
                if a != expect {
                    out.push(format!("rows {i},{j}: anticommute={a}, expected {expect}"));
                }
            }
        }
        let rows: Vec<BitVec> = (0..2 * n).map(|r| self.row_op(r).symplectic()).collect();
        let r = crate::gf2::rank(&rows);
        if r != 2 * n {
            out.push(format!("rank {r} != {}", 2 * n));
        }
        out
    }
}

/// Free-function form of [`StabilizerTableau::measure`].
pub fn measure<R: Rng + ?Sized>(t: &mut StabilizerTableau, p: &PauliOperator, rng: &mut R) -> Result<Measurement> {
    t.measure(p, rng)
}

/// Free-function form of [`StabilizerTableau::expectation`].
pub fn expectation_deterministic(t: &StabilizerTableau, p: &PauliOperator) -> Result<Option<i8>> {
    t.expectation(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn op(s: &str) -> PauliOperator {
        PauliOperator::from_dense(s).unwrap()
    }

    #[test]
    fn z_on_zero_is_plus_one() {
        let mut t = StabilizerTableau::new(1);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = t.measure(&op("Z"), &mut rng).unwrap();
        assert_eq!(m, Measurement { outcome: 1, deterministic: true });
        assert_eq!(t.expectation(&op("-Z")).unwrap(), Some(-1));
    }

    #[test]
    fn x_on_zero_is_random_then_repeatable() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut seen = [false; 2];
        for _ in 0..32 {
            let mut t = StabilizerTableau::new(1);
            let m1 = t.measure(&op("X"), &mut rng).unwrap();
            assert!(!m1.deterministic);
            let m2 = t.measure(&op("X"), &mut rng).unwrap();
            assert!(m2.deterministic);
            assert_eq!(m1.outcome, m2.outcome);
            assert_eq!(t.expectation(&op("X")).unwrap(), Some(m1.outcome));
            assert!(t.check_invariants().is_empty());
            seen[(m1.outcome > 0) as usize] = true;
        }
        assert!(seen[0] && seen[1]);
    }

    #[test]
    fn bell_state_correlations() {
        let t = StabilizerTableau::from_stabilizers(2, &[op("XX"), op("ZZ")]).unwrap();
        assert_eq!(t.expectation(&op("YY")).unwrap(), Some(-1));
        assert_eq!(t.expectation(&op("XI")).unwrap(), None);
        assert!(t.check_invariants().is_empty());
    }

    #[test]
    fn invariants_hold_under_random_measurements() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut t = StabilizerTableau::new(6);
        let letters = ['I', 'X', 'Y', 'Z'];
        for _ in 0..60 {
            let s: String = (0..6).map(|_| letters[rng.gen_range(0..4)]).collect();
            let p = op(&s);
            let m = t.measure(&p, &mut rng).unwrap();
            let again = t.measure(&p, &mut rng).unwrap();
            assert!(again.deterministic);
            assert_eq!(m.outcome, again.outcome);
            assert!(t.check_invariants().is_empty());
        }
    }
}
