//! Nested coset coding: a message `S ∈ F_{q^m}^l` is transmitted as a
//! uniformly random member of the coset `ψ(S) = S·M + C2` of `C2` in
//! `C1`, where the rows of `M` complete a `C2` basis to a `C1` basis.
//!
//! `ψ` is fixed as this linear section. Randomized encoding draws the
//! `C2` component from a seeded counter-based generator; the security
//! oracles never sample, they enumerate the whole coset instead.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::codes::{LinearCode, NestedCodes};
use crate::fields::{ExtElem, FieldParams};
use crate::linalg::{self, MatrixFqm};
use crate::rparams;
use crate::{Error, Result};

/// A nested pair together with the message-embedding basis defining `ψ`.
#[derive(Debug, Clone)]
pub struct NestedPair {
    codes: NestedCodes,
    msg_rows: MatrixFqm,
}

impl NestedPair {
    /// Wraps a validated pair. When `msg_rows` is omitted it defaults to
    /// the RREF-pivot completion of the `C2` basis inside `C1`.
    pub fn new(codes: NestedCodes, msg_rows: Option<MatrixFqm>) -> Result<Self> {
        let l = codes.quotient_dim();
        let msg_rows = match msg_rows {
            Some(m) => m,
            None => rparams::complement_code(&codes).generator().clone(),
        };
        if msg_rows.rows() != l || msg_rows.cols() != codes.length() {
            return Err(Error::input(format!(
                "msg_rows must be {l} x {}",
                codes.length()
            )));
        }
        for r in 0..l {
            if !codes.c1().contains(msg_rows.row(r)) {
                return Err(Error::input("msg_rows must lie inside C1"));
            }
        }
        let stacked = codes.c2().generator().stack(&msg_rows);
        if stacked.rank() != codes.c1().dim() {
            return Err(Error::input(
                "msg_rows must complete a C2 basis to a C1 basis",
            ));
        }
        Ok(NestedPair { codes, msg_rows })
    }

    pub fn codes(&self) -> &NestedCodes {
        &self.codes
    }

    pub fn field(&self) -> &Arc<FieldParams> {
        self.codes.field()
    }

    pub fn length(&self) -> usize {
        self.codes.length()
    }

    /// Message length `l = dim(C1/C2)`.
    pub fn message_len(&self) -> usize {
        self.codes.quotient_dim()
    }

    pub fn msg_rows(&self) -> &MatrixFqm {
        &self.msg_rows
    }

    fn check_message(&self, s: &[ExtElem]) -> Result<()> {
        if s.len() != self.message_len() {
            return Err(Error::input(format!(
                "message must have length {}",
                self.message_len()
            )));
        }
        Ok(())
    }

    /// The deterministic coset representative `S·M`.
    pub fn coset_representative(&self, s: &[ExtElem]) -> Result<Vec<ExtElem>> {
        self.check_message(s)?;
        Ok(self.msg_rows.mul_row(s))
    }

    /// Encodes with an explicit `C2`-coordinate vector `r`; exhausting
    /// `r` over `F_{q^m}^{dim C2}` walks the whole coset `ψ(S)`.
    pub fn encode_with_r(&self, s: &[ExtElem], r: &[ExtElem]) -> Result<Vec<ExtElem>> {
        self.check_message(s)?;
        if r.len() != self.codes.c2().dim() {
            return Err(Error::input(format!(
                "randomness must have length {}",
                self.codes.c2().dim()
            )));
        }
        let x = self.coset_representative(s)?;
        let rc = self.codes.c2().generator().mul_row(r);
        Ok(linalg::vec_add(self.field(), &x, &rc))
    }

    /// Encodes `S` with the `C2` component drawn uniformly from a
    /// generator seeded by `seed`.
    pub fn encode(&self, s: &[ExtElem], seed: u64) -> Result<Vec<ExtElem>> {
        self.check_message(s)?;
        let field = self.field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r: Vec<ExtElem> = (0..self.codes.c2().dim())
            .map(|_| {
                let coeffs: Vec<u64> =
                    (0..field.m()).map(|_| rng.random_range(0..field.p())).collect();
                field.elem(&coeffs).expect("residues in range")
            })
            .collect();
        self.encode_with_r(s, &r)
    }

    /// All members of `ψ(S)`, each exactly once.
    pub fn coset(&self, s: &[ExtElem]) -> Result<impl Iterator<Item = Vec<ExtElem>> + '_> {
        let rep = self.coset_representative(s)?;
        let field = self.field().clone();
        Ok(self.codes.c2().codewords().map(move |c| linalg::vec_add(&field, &rep, &c)))
    }

    /// Recovers the unique `S` with `X ∈ ψ(S)`; errors when `X ∉ C1`.
    pub fn decode_clean(&self, x: &[ExtElem]) -> Result<Vec<ExtElem>> {
        if x.len() != self.length() {
            return Err(Error::input("wrong codeword length"));
        }
        let basis = self.msg_rows.stack(self.codes.c2().generator());
        let w = linalg::solve_left(&basis, x).ok_or(Error::NotInCode)?;
        Ok(w[..self.message_len()].to_vec())
    }

    /// The extended codes of the strong-security theorem:
    /// `C1' = {[S, X] : X ∈ ψ(S)}` and `C2' = {[0, c2] : c2 ∈ C2}`,
    /// both of length `l + n`.
    pub fn extended_codes(&self) -> (LinearCode, LinearCode) {
        let field = self.field().clone();
        let l = self.message_len();
        let n = self.length();
        let mut rows = Vec::new();
        for i in 0..l {
            let mut row = vec![field.zero(); l + n];
            row[i] = field.one();
            for (j, e) in self.msg_rows.row(i).iter().enumerate() {
                row[l + j] = e.clone();
            }
            rows.push(row);
        }
        let mut c2_rows = Vec::new();
        for r in 0..self.codes.c2().dim() {
            let mut row = vec![field.zero(); l + n];
            for (j, e) in self.codes.c2().generator().row(r).iter().enumerate() {
                row[l + j] = e.clone();
            }
            rows.push(row.clone());
            c2_rows.push(row);
        }
        let c1_ext = LinearCode::from_rows(field.clone(), l + n, &rows).unwrap();
        let c2_ext = if c2_rows.is_empty() {
            LinearCode::zero(field, l + n)
        } else {
            LinearCode::from_rows(field, l + n, &c2_rows).unwrap()
        };
        (c1_ext, c2_ext)
    }

    /// The punctured/shortened pair `(D_{1,i}, D_{2,i})` of the extended
    /// code obtained by dropping message coordinate `i` (0-based,
    /// `i < l`); returned as a validated nested pair.
    pub fn strong_pair(&self, i: usize) -> Result<NestedCodes> {
        let l = self.message_len();
        if i >= l {
            return Err(Error::input(format!("message index {i} out of range 0..{l}")));
        }
        let (c1_ext, _) = self.extended_codes();
        let keep: Vec<usize> = (0..l + self.length()).filter(|&j| j != i).collect();
        let d1 = c1_ext.puncture(&keep)?;
        let d2 = c1_ext.shorten(&keep)?;
        debug_assert_eq!(d1.dim(), self.codes.c1().dim());
        debug_assert_eq!(d2.dim(), d1.dim() - 1);
        NestedCodes::new(d1, d2)
    }
}

/// The strong-security construction: `C1'` is the systematic form of the
/// `[l+n, n]` Gabidulin code (so `m >= l + n` is required), split into a
/// nested pair transmitting `n` packets with `l` message and `n - l`
/// random coordinates.
pub fn systematic_mrd_construction(
    field: Arc<FieldParams>,
    l: usize,
    n: usize,
) -> Result<NestedPair> {
    if l == 0 || l > n {
        return Err(Error::input("need 1 <= l <= n"));
    }
    if field.m() < l + n {
        return Err(Error::input(format!(
            "systematic MRD construction needs m >= l + n = {}, got m = {}",
            l + n,
            field.m()
        )));
    }
    let c1_ext = LinearCode::gabidulin(field.clone(), l + n, n, None)?;
    let gen = c1_ext.generator();
    // canonical RREF of a Moore matrix on independent points is systematic
    for i in 0..n {
        for j in 0..n {
            let expected = if i == j { field.one() } else { field.zero() };
            if gen.get(i, j) != &expected {
                return Err(Error::input("extended code is not systematic"));
            }
        }
    }
    let keep: Vec<usize> = (l..l + n).collect();
    let c1 = c1_ext.puncture(&keep)?;
    let c2 = c1_ext.shorten(&keep)?;
    let msg_rows: Vec<Vec<ExtElem>> = (0..l)
        .map(|i| keep.iter().map(|&j| gen.get(i, j).clone()).collect())
        .collect();
    let msg = MatrixFqm::from_rows(field, &msg_rows);
    NestedPair::new(NestedCodes::new(c1, c2)?, Some(msg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FieldParams;

    fn f8() -> Arc<FieldParams> {
        FieldParams::new(2, 3, vec![1, 1, 0, 1]).unwrap()
    }

    fn f4() -> Arc<FieldParams> {
        FieldParams::new(2, 2, vec![1, 1, 1]).unwrap()
    }

    fn ozarow() -> NestedPair {
        let f = f4();
        let c1 = LinearCode::full(f.clone(), 2);
        let c2 = LinearCode::from_rows(f.clone(), 2, &[vec![f.one(), f.gen()]]).unwrap();
        NestedPair::new(NestedCodes::new(c1, c2).unwrap(), None).unwrap()
    }

    #[test]
    fn encode_without_randomness_is_deterministic() {
        let f = f8();
        let c1 = LinearCode::gabidulin(f.clone(), 3, 1, None).unwrap();
        let pair =
            NestedPair::new(NestedCodes::new(c1, LinearCode::zero(f.clone(), 3)).unwrap(), None)
                .unwrap();
        let s = vec![f.gen()];
        let x0 = pair.encode(&s, 0).unwrap();
        let x1 = pair.encode(&s, 12345).unwrap();
        assert_eq!(x0, x1);
        assert_eq!(x0, pair.coset_representative(&s).unwrap());
    }

    #[test]
    fn zero_message_lands_in_c2() {
        let pair = ozarow();
        let f = pair.field().clone();
        for seed in 0..8 {
            let x = pair.encode(&[f.zero()], seed).unwrap();
            assert!(pair.codes().c2().contains(&x));
        }
    }

    #[test]
    fn coset_enumeration_is_uniform_and_disjoint() {
        let pair = ozarow();
        let f = pair.field().clone();
        let mut seen = std::collections::HashSet::new();
        for s in f.vectors(1) {
            let mut count = 0;
            for x in pair.coset(&s).unwrap() {
                assert!(seen.insert(x.iter().map(|e| e.coeffs().to_vec()).collect::<Vec<_>>()));
                count += 1;
            }
            // each coset has |C2| = 4 members, hit exactly once
            assert_eq!(count, 4);
        }
        // the cosets tile C1 = F_4^2
        assert_eq!(seen.len(), 16);
    }

    #[test]
    fn seeded_encoding_covers_the_coset() {
        let pair = ozarow();
        let f = pair.field().clone();
        let s = vec![f.one()];
        let mut seen = std::collections::HashSet::new();
        for seed in 0..64 {
            seen.insert(format!("{:?}", pair.encode(&s, seed).unwrap()));
        }
        assert_eq!(seen.len(), 4);
    }

    #[test]
    fn decode_clean_roundtrip_all_messages_and_randomness() {
        let pair = ozarow();
        let f = pair.field().clone();
        for s in f.vectors(pair.message_len()) {
            for r in f.vectors(pair.codes().c2().dim()) {
                let x = pair.encode_with_r(&s, &r).unwrap();
                assert_eq!(pair.decode_clean(&x).unwrap(), s);
            }
        }
        // X in C2 decodes to zero
        let c2_word = pair.codes().c2().generator().row(0).to_vec();
        assert_eq!(pair.decode_clean(&c2_word).unwrap(), vec![f.zero()]);
        // X outside C1 errors (impossible for the full-space C1; use a
        // Gabidulin pair instead)
        let f8 = f8();
        let c1 = LinearCode::gabidulin(f8.clone(), 3, 2, None).unwrap();
        let c2 = LinearCode::gabidulin(f8.clone(), 3, 1, None).unwrap();
        let gpair = NestedPair::new(NestedCodes::new(c1, c2).unwrap(), None).unwrap();
        let outside = vec![f8.one(), f8.zero(), f8.zero()];
        assert!(!gpair.codes().c1().contains(&outside));
        assert!(matches!(gpair.decode_clean(&outside), Err(Error::NotInCode)));
    }

    #[test]
    fn encodings_of_same_message_differ_by_c2() {
        let pair = ozarow();
        let f = pair.field().clone();
        let s = vec![f.gen()];
        let s2 = vec![f.one()];
        for seed in 0..6u64 {
            for seed2 in 0..6u64 {
                let a = pair.encode(&s, seed).unwrap();
                let b = pair.encode(&s, seed2).unwrap();
                assert!(pair.codes().c2().contains(&linalg::vec_sub(&f, &a, &b)));
                // different messages never share a coset
                let c = pair.encode(&s2, seed2).unwrap();
                assert!(!pair.codes().c2().contains(&linalg::vec_sub(&f, &a, &c)));
            }
        }
    }

    #[test]
    fn extended_code_shape() {
        let pair = ozarow();
        let (c1e, c2e) = pair.extended_codes();
        assert_eq!(c1e.dim(), pair.codes().c1().dim());
        assert_eq!(c2e.dim(), pair.codes().c2().dim());
        assert!(c2e.is_subcode_of(&c1e));
        // projection onto the last n coordinates recovers C1
        let keep: Vec<usize> =
            (pair.message_len()..pair.message_len() + pair.length()).collect();
        assert_eq!(&c1e.puncture(&keep).unwrap(), pair.codes().c1());
        // every codeword of C1' is [S, X] with X ∈ ψ(S)
        for w in c1e.codewords() {
            let (s, x) = w.split_at(pair.message_len());
            assert_eq!(pair.decode_clean(x).unwrap(), s.to_vec());
        }
    }

    #[test]
    fn strong_pair_dimensions() {
        let pair = ozarow();
        for i in 0..pair.message_len() {
            let d = pair.strong_pair(i).unwrap();
            assert_eq!(d.c1().dim(), pair.codes().c1().dim());
            assert_eq!(d.c2().dim(), pair.codes().c1().dim() - 1);
            assert_eq!(d.length(), pair.message_len() + pair.length() - 1);
        }
        assert!(pair.strong_pair(pair.message_len()).is_err());
    }

    #[test]
    fn strong_pair_l1_projects_to_c1() {
        // l = 1: D_{1,1} is C1 itself
        let pair = ozarow();
        let d = pair.strong_pair(0).unwrap();
        assert_eq!(d.c1(), pair.codes().c1());
    }

    #[test]
    fn systematic_construction_fixture() {
        let f = f8();
        let pair = systematic_mrd_construction(f.clone(), 1, 2).unwrap();
        assert_eq!(pair.message_len(), 1);
        assert_eq!(pair.length(), 2);
        assert_eq!(pair.codes().c1().dim(), 2);
        assert_eq!(pair.codes().c2().dim(), 1);
        // C1' of the derived pair is the systematic [3,2] Gabidulin code
        let (c1e, _) = pair.extended_codes();
        let gab = LinearCode::gabidulin(f.clone(), 3, 2, None).unwrap();
        assert_eq!(c1e, gab);
        // round trip
        for s in f.vectors(1) {
            for r in f.vectors(1) {
                let x = pair.encode_with_r(&s, &r).unwrap();
                assert_eq!(pair.decode_clean(&x).unwrap(), s);
            }
        }
        // guards
        assert!(systematic_mrd_construction(f.clone(), 1, 3).is_err()); // m < l+n
        assert!(systematic_mrd_construction(f.clone(), 0, 2).is_err());
    }
}
