//! Generator sets of abelian Pauli groups with sign-aware membership.

use crate::error::{Error, Result};
use crate::pauli::PauliOperator;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    MemberWithSign,
    MemberUpToSign,
    NotMember,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct GeneratorSet {
    pub generators: Vec<PauliOperator>,
}

impl GeneratorSet {
    pub fn new(generators: Vec<PauliOperator>) -> Self {
        GeneratorSet { generators }
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.generators;
        (0..g.len()).all(|i| ((i + 1)..g.len()).all(|j| g[i].commutes_unchecked(&g[j])))
    }

    fn echelon(&self) -> Result<(HashMap<usize, usize>, Vec<PauliOperator>)> {
        let mut piv = HashMap::new();
        let mut rows: Vec<PauliOperator> = Vec::new();
        for g in &self.generators {
            let mut r = g.clone();
            let mut v = r.symplectic();
            while let Some(h) = v.leading() {
                match piv.get(&h) {
                    Some(&k) => {
                        r = r.mul(&rows[k])?;
                        v = r.symplectic();
                    }
                    None => break,
                }
            }
            if let Some(h) = v.leading() {
                piv.insert(h, rows.len());
                rows.push(r);
            }
        }
        Ok((piv, rows))
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self.echelon()?.1.len())
    }

    /// Membership of `p` in the group generated, distinguishing the sign.
    pub fn in_group(&self, p: &PauliOperator) -> Result<Membership> {
        if !self.is_abelian() {
            return Err(Error::Validation("generator set is not abelian".into()));
        }
        if let Some(g) = self.generators.first() {
            if g.num_qubits() != p.num_qubits() {
                return Err(Error::Validation("length mismatch".into()));
            }
        }
        let (piv, rows) = self.echelon()?;
        let mut r = p.clone();
        let mut v = r.symplectic();
        while let Some(h) = v.leading() {
            match piv.get(&h) {
                Some(&k) => {
                    r = r.mul(&rows[k])?;
                    v = r.symplectic();
                }
                None => return Ok(Membership::NotMember),
            }
        }
        Ok(if r.is_negative() {
            Membership::MemberUpToSign
        } else {
            Membership::MemberWithSign
        })
    }
}

/// Free-function form of [`GeneratorSet::in_group`].
pub fn in_group(g: &GeneratorSet, p: &PauliOperator) -> Result<Membership> {
    g.in_group(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(s: &str) -> PauliOperator {
        PauliOperator::from_dense(s).unwrap()
    }

    #[test]
    fn identity_is_member() {
        let g = GeneratorSet::new(vec![op("XX"), op("ZZ")]);
        assert_eq!(g.in_group(&op("II")).unwrap(), Membership::MemberWithSign);
        assert_eq!(g.in_group(&op("-YY")).unwrap(), Membership::MemberWithSign);
        assert_eq!(g.in_group(&op("YY")).unwrap(), Membership::MemberUpToSign);
        assert_eq!(g.in_group(&op("XI")).unwrap(), Membership::NotMember);
    }

    #[test]
    fn non_abelian_rejected() {
        let g = GeneratorSet::new(vec![op("X"), op("Z")]);
        assert!(g.in_group(&op("I")).is_err());
    }
}
