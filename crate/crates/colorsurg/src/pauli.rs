//! Hermitian Pauli operators in binary symplectic form with a ±1 sign.
//!
//! A qubit with bits (x, z) carries X, Z or Y = iXZ (Hermitian). Products of
//! anticommuting operators are anti-Hermitian; for those the factor i is dropped
//! and the remaining sign kept, so X·Z = -iY is returned as -Y.

use crate::error::{Error, Result};
use crate::gf2::BitVec;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'I' | '_' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn commutes(self, o: Pauli) -> bool {
        self == Pauli::I || o == Pauli::I || self == o
    }
}

/// Exponent of i (mod 4) picked up when multiplying two Hermitian Pauli
/// strings given word-wise as (x1, z1) · (x2, z2).
pub(crate) fn product_phase(x1: &[u64], z1: &[u64], x2: &[u64], z2: &[u64]) -> u32 {
    let mut plus = 0u32;
    let mut minus = 0u32;
    for k in 0..x1.len() {
        let (a, b, c, d) = (x1[k], z1[k], x2[k], z2[k]);
        let (px, py, pz) = (a & !b, a & b, !a & b);
        let (qx, qy, qz) = (c & !d, c & d, !c & d);
        plus += (px & qy).count_ones() + (py & qz).count_ones() + (pz & qx).count_ones();
        minus += (px & qz).count_ones() + (py & qx).count_ones() + (pz & qy).count_ones();
    }
    (plus + 3 * minus) % 4
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    x: BitVec,
    z: BitVec,
    neg: bool,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        PauliOperator {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
            neg: false,
        }
    }

    pub fn from_bits(x: BitVec, z: BitVec, neg: bool) -> Self {
        assert_eq!(x.len(), z.len());
        PauliOperator { x, z, neg }
    }

    /// Same Pauli `p` on every qubit of `support`.
    pub fn uniform(n: usize, support: &[usize], p: Pauli) -> Self {
        let mut op = Self::identity(n);
        for &q in support {
            op.set(q, p);
        }
        op
    }

    pub fn single(n: usize, q: usize, p: Pauli) -> Self {
        Self::uniform(n, &[q], p)
    }

    /// Dense form such as `+XIZY`, `-XX` or `ZZ` (sign optional).
    pub fn from_dense(s: &str) -> Result<Self> {
        let s = s.trim();
        let (neg, body) = match s.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let ps: Vec<Pauli> = body
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| Pauli::from_char(c).ok_or_else(|| Error::Parse(format!("bad Pauli letter '{c}' in '{s}'"))))
            .collect::<Result<_>>()?;
        let mut op = Self::identity(ps.len());
        for (q, p) in ps.into_iter().enumerate() {
            op.set(q, p);
        }
        op.neg = neg;
        Ok(op)
    }

    /// Sparse 1-based form such as `X1 X3 Z4` on `n` qubits.
    pub fn from_sparse(s: &str, n: usize) -> Result<Self> {
        let mut op = Self::identity(n);
        let mut body = s.trim();
        if let Some(b) = body.strip_prefix('-') {
            op.neg = true;
            body = b;
        }
        for tok in body.split(|c: char| c.is_whitespace() || c == ',' || c == '*').filter(|t| !t.is_empty()) {
            let mut ch = tok.chars();
            let p = ch
                .next()
                .and_then(Pauli::from_char)
                .ok_or_else(|| Error::Parse(format!("bad token '{tok}'")))?;
            let idx: usize = ch
                .as_str()
                .parse()
                .map_err(|_| Error::Parse(format!("bad qubit index in '{tok}'")))?;
            if idx == 0 || idx > n {
                return Err(Error::Validation(format!("qubit index {idx} outside 1..={n}")));
            }
            let cur = op.get(idx - 1);
            if cur != Pauli::I && cur != p {
                return Err(Error::Validation(format!("qubit {idx} given twice in '{s}'")));
            }
            op.set(idx - 1, p);
        }
        Ok(op)
    }

    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn x_bits(&self) -> &BitVec {
        &self.x
    }

    pub fn z_bits(&self) -> &BitVec {
        &self.z
    }

    pub fn is_negative(&self) -> bool {
        self.neg
    }

    /// +1 or -1.
    pub fn sign(&self) -> i8 {
        if self.neg {
            -1
        } else {
            1
        }
    }

    pub fn set_sign(&mut self, neg: bool) {
        self.neg = neg;
    }

    pub fn negated(mut self) -> Self {
        self.neg = !self.neg;
        self
    }

    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x.get(q), self.z.get(q))
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        let (x, z) = p.bits();
        self.x.set(q, x);
        self.z.set(q, z);
    }

    pub fn weight(&self) -> usize {
        self.x
            .words()
            .iter()
            .zip(self.z.words())
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.num_qubits()).filter(|&q| self.get(q) != Pauli::I).collect()
    }

    /// Concatenated symplectic vector (x || z), sign dropped.
    pub fn symplectic(&self) -> BitVec {
        self.x.concat(&self.z)
    }

    pub fn from_symplectic(v: &BitVec) -> Self {
        let n = v.len() / 2;
        let mut op = Self::identity(n);
        for i in v.ones() {
            if i < n {
                op.x.flip(i);
            } else {
                op.z.flip(i - n);
            }
        }
        op
    }

    fn check_len(&self, o: &Self) -> Result<()> {
        if self.num_qubits() != o.num_qubits() {
            return Err(Error::Validation(format!(
                "length mismatch: {} vs {} qubits",
                self.num_qubits(),
                o.num_qubits()
            )));
        }
        Ok(())
    }

    /// Symplectic product is zero.
    pub fn commutes(&self, o: &Self) -> Result<bool> {
        self.check_len(o)?;
        Ok(self.commutes_unchecked(o))
    }

    pub(crate) fn commutes_unchecked(&self, o: &Self) -> bool {
        (self.x.and_popcount(&o.z) + self.z.and_popcount(&o.x)).is_multiple_of(2)
    }

    /// Product `self · o` with sign tracking (see module docs for the i convention).
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check_len(o)?;
        Ok(self.mul_unchecked(o))
    }

    pub(crate) fn mul_unchecked(&self, o: &Self) -> Self {
        let e = product_phase(self.x.words(), self.z.words(), o.x.words(), o.z.words())
            + 2 * (self.neg as u32 + o.neg as u32);
        let mut x = self.x.clone();
        x.xor_assign(&o.x);
        let mut z = self.z.clone();
        z.xor_assign(&o.z);
        PauliOperator { x, z, neg: e % 4 >= 2 }
    }

    /// Restriction to a subset of qubits, relabelled in the given order.
    pub fn restrict(&self, qubits: &[usize]) -> Self {
        let mut op = Self::identity(qubits.len());
        for (i, &q) in qubits.iter().enumerate() {
            op.set(i, self.get(q));
        }
        op.neg = self.neg;
        op
    }

    pub fn to_dense(&self) -> String {
        let mut s = String::with_capacity(self.num_qubits() + 1);
        s.push(if self.neg { '-' } else { '+' });
        for q in 0..self.num_qubits() {
            s.push(self.get(q).to_char());
        }
        s
    }

    /// 1-based sparse form, e.g. `X1 X3 Z4`; identity prints as `I`.
    pub fn to_sparse(&self) -> String {
        let body: Vec<String> = self
            .support()
            .into_iter()
            .map(|q| format!("{}{}", self.get(q).to_char(), q + 1))
            .collect();
        let body = if body.is_empty() { "I".to_string() } else { body.join(" ") };
        if self.neg {
            format!("-{body}")
        } else {
            body
        }
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_dense())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_dense())
    }
}

impl Serialize for PauliOperator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_dense())
    }
}

impl<'de> Deserialize<'de> for PauliOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        PauliOperator::from_dense(&s).map_err(serde::de::Error::custom)
    }
}

/// Free-function form of [`PauliOperator::mul`].
pub fn pauli_mul(p: &PauliOperator, q: &PauliOperator) -> Result<PauliOperator> {
    p.mul(q)
}

/// Free-function form of [`PauliOperator::commutes`].
pub fn commutes(p: &PauliOperator, q: &PauliOperator) -> Result<bool> {
    p.commutes(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_table(a: Pauli, b: Pauli) -> (Pauli, i32) {
        // exponent of i in a·b
        use Pauli::*;
        match (a, b) {
            (I, p) | (p, I) => (p, 0),
            (p, q) if p == q => (I, 0),
            (X, Y) => (Z, 1),
            (Y, Z) => (X, 1),
            (Z, X) => (Y, 1),
            (Y, X) => (Z, 3),
            (Z, Y) => (X, 3),
            (X, Z) => (Y, 3),
            _ => unreachable!(),
        }
    }

    #[test]
    fn single_qubit_products_match_table() {
        let all = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
        for a in all {
            for b in all {
                let pa = PauliOperator::single(1, 0, a);
                let pb = PauliOperator::single(1, 0, b);
                let r = pa.mul(&pb).unwrap();
                let (p, e) = single_table(a, b);
                assert_eq!(r.get(0), p);
                assert_eq!(r.is_negative(), e >= 2, "{a:?}{b:?}");
            }
        }
    }

    #[test]
    fn x_times_z_is_minus_y() {
        let x = PauliOperator::from_dense("X").unwrap();
        let z = PauliOperator::from_dense("Z").unwrap();
        assert_eq!(x.mul(&z).unwrap().to_dense(), "-Y");
        assert_eq!(z.mul(&x).unwrap().to_dense(), "+Y");
    }

    #[test]
    fn parse_round_trip() {
        let p = PauliOperator::from_sparse("X1 X3 Z4", 4).unwrap();
        assert_eq!(p.to_dense(), "+XIXZ");
        assert_eq!(p.to_sparse(), "X1 X3 Z4");
        let q = PauliOperator::from_dense(&p.to_dense()).unwrap();
        assert_eq!(p, q);
        assert!(PauliOperator::from_sparse("X5", 4).is_err());
        assert!(PauliOperator::from_dense("XQ").is_err());
    }

    #[test]
    fn length_mismatch_is_error() {
        let a = PauliOperator::identity(2);
        let b = PauliOperator::identity(3);
        assert!(a.mul(&b).is_err());
        assert!(a.commutes(&b).is_err());
    }
}
