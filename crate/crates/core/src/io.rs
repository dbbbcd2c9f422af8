//! JSON file formats: field specs, code and pair specs, network specs,
//! and message distributions. Extension-field elements appear as
//! coefficient arrays (constant term first); base-field matrices as
//! integer row arrays.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::codes::{LinearCode, NestedCodes};
use crate::coset::NestedPair;
use crate::fields::{ExtElem, FieldParams};
use crate::linalg::{MatrixFq, MatrixFqm};
use crate::netcode::NetworkInstance;
use crate::security::MessageDist;
use crate::{Error, Result};

/// `{"p": 2, "m": 3, "modulus": [1, 1, 0, 1]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub m: usize,
    pub modulus: Vec<u64>,
}

impl FieldSpec {
    pub fn to_field(&self) -> Result<Arc<FieldParams>> {
        FieldParams::new(self.p, self.m, self.modulus.clone())
    }

    pub fn from_field(field: &FieldParams) -> FieldSpec {
        FieldSpec { p: field.p(), m: field.m(), modulus: field.modulus().to_vec() }
    }
}

/// A single code: `{"field": {...}, "n": 3, "gen": [[[...], ...], ...]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodeSpec {
    pub field: FieldSpec,
    pub n: usize,
    pub gen: Vec<Vec<Vec<u64>>>,
}

impl CodeSpec {
    pub fn to_code(&self) -> Result<LinearCode> {
        let field = self.field.to_field()?;
        let rows = parse_rows(&field, &self.gen)?;
        LinearCode::from_rows(field, self.n, &rows)
    }

    pub fn from_code(code: &LinearCode) -> CodeSpec {
        CodeSpec {
            field: FieldSpec::from_field(code.field()),
            n: code.length(),
            gen: matrix_to_lists(code.generator()),
        }
    }
}

/// A nested pair with its message embedding. `c2` may be empty (the zero
/// code); omitted `msg_rows` means the canonical RREF completion.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairSpec {
    pub field: FieldSpec,
    pub n: usize,
    pub c1: Vec<Vec<Vec<u64>>>,
    pub c2: Vec<Vec<Vec<u64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub msg_rows: Option<Vec<Vec<Vec<u64>>>>,
}

impl PairSpec {
    pub fn to_pair(&self) -> Result<NestedPair> {
        let field = self.field.to_field()?;
        let c1 = LinearCode::from_rows(field.clone(), self.n, &parse_rows(&field, &self.c1)?)?;
        let c2 = LinearCode::from_rows(field.clone(), self.n, &parse_rows(&field, &self.c2)?)?;
        let codes = NestedCodes::new(c1, c2)?;
        let msg_rows = match &self.msg_rows {
            Some(rows) => {
                let rows = parse_rows(&field, rows)?;
                Some(MatrixFqm::from_rows(field, &rows))
            }
            None => None,
        };
        NestedPair::new(codes, msg_rows)
    }

    pub fn from_pair(pair: &NestedPair) -> PairSpec {
        PairSpec {
            field: FieldSpec::from_field(pair.field()),
            n: pair.length(),
            c1: matrix_to_lists(pair.codes().c1().generator()),
            c2: matrix_to_lists(pair.codes().c2().generator()),
            msg_rows: Some(matrix_to_lists(pair.msg_rows())),
        }
    }
}

/// A network: transfer matrix rows over `F_q`, optional link GCV list.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetSpec {
    pub n: usize,
    pub a: Vec<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gcv_list: Option<Vec<Vec<u64>>>,
}

impl NetSpec {
    pub fn to_network(&self, p: u64) -> Result<NetworkInstance> {
        if self.a.iter().any(|r| r.len() != self.n) {
            return Err(Error::input("transfer matrix rows must have length n"));
        }
        let a = if self.a.is_empty() {
            MatrixFq::zeros(p, 0, self.n)
        } else {
            MatrixFq::from_rows(p, &self.a)
        };
        NetworkInstance::new(a, self.gcv_list.clone())
    }

    pub fn from_network(net: &NetworkInstance) -> NetSpec {
        NetSpec {
            n: net.n(),
            a: net.transfer().to_rows(),
            gcv_list: net.gcv_list().map(<[Vec<u64>]>::to_vec),
        }
    }
}

/// A message distribution: explicit rational weights, with the leftover
/// mass optionally spread uniformly over the unlisted messages.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistSpec {
    pub entries: Vec<DistEntry>,
    #[serde(default)]
    pub remainder_uniform: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistEntry {
    pub s: Vec<Vec<u64>>,
    pub num: u64,
    pub den: u64,
}

impl DistSpec {
    pub fn to_dist(&self, pair: &NestedPair) -> Result<MessageDist> {
        let field = pair.field().clone();
        let mut entries: Vec<(Vec<ExtElem>, u64, u64)> = Vec::new();
        for e in &self.entries {
            if e.den == 0 {
                return Err(Error::input("zero denominator in distribution"));
            }
            entries.push((parse_vector(&field, &e.s)?, e.num, e.den));
        }
        if self.remainder_uniform {
            // leftover mass (den - num)/den split over the unlisted messages
            let mut num = 0u128;
            let mut den = 1u128;
            for (_, n, d) in &entries {
                num = num * *d as u128 + *n as u128 * den;
                den *= *d as u128;
                let g = gcd(num.max(1), den);
                num /= g;
                den /= g;
            }
            if num > den {
                return Err(Error::input("distribution weights exceed 1"));
            }
            let listed: std::collections::HashSet<Vec<u64>> = entries
                .iter()
                .map(|(s, _, _)| s.iter().flat_map(|e| e.coeffs().to_vec()).collect())
                .collect();
            let mut unlisted = Vec::new();
            for s in field.vectors(pair.message_len()) {
                let key: Vec<u64> = s.iter().flat_map(|e| e.coeffs().to_vec()).collect();
                if !listed.contains(&key) {
                    unlisted.push(s);
                }
            }
            if !unlisted.is_empty() {
                let share_num = den - num;
                let share_den = den * unlisted.len() as u128;
                let g = gcd(share_num.max(1), share_den);
                let (sn, sd) = (share_num / g, share_den / g);
                let (sn, sd) = (
                    u64::try_from(sn).map_err(|_| Error::input("weight overflow"))?,
                    u64::try_from(sd).map_err(|_| Error::input("weight overflow"))?,
                );
                for s in unlisted {
                    entries.push((s, sn, sd));
                }
            }
        }
        Ok(MessageDist::Weighted(entries))
    }
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Parses a vector of coefficient arrays into field elements.
pub fn parse_vector(field: &Arc<FieldParams>, lists: &[Vec<u64>]) -> Result<Vec<ExtElem>> {
    lists.iter().map(|c| field.elem(c)).collect()
}

fn parse_rows(field: &Arc<FieldParams>, lists: &[Vec<Vec<u64>>]) -> Result<Vec<Vec<ExtElem>>> {
    lists.iter().map(|r| parse_vector(field, r)).collect()
}

pub fn vector_to_lists(v: &[ExtElem]) -> Vec<Vec<u64>> {
    v.iter().map(|e| e.coeffs().to_vec()).collect()
}

pub fn matrix_to_lists(m: &MatrixFqm) -> Vec<Vec<Vec<u64>>> {
    (0..m.rows()).map(|r| vector_to_lists(m.row(r))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_spec_roundtrip() {
        let spec: FieldSpec = serde_json::from_str(r#"{"p":2,"m":3,"modulus":[1,1,0,1]}"#).unwrap();
        let field = spec.to_field().unwrap();
        assert_eq!(field.order(), 8);
        let back = FieldSpec::from_field(&field);
        assert_eq!(serde_json::to_string(&back).unwrap(), r#"{"p":2,"m":3,"modulus":[1,1,0,1]}"#);
        // invalid modulus rejected
        let bad: FieldSpec = serde_json::from_str(r#"{"p":2,"m":2,"modulus":[1,0,1]}"#).unwrap();
        assert!(bad.to_field().is_err());
    }

    #[test]
    fn pair_spec_roundtrip_with_zero_c2() {
        let text = r#"{
            "field": {"p": 2, "m": 3, "modulus": [1, 1, 0, 1]},
            "n": 3,
            "c1": [[[1,0,0],[0,1,0],[0,0,1]]],
            "c2": []
        }"#;
        let spec: PairSpec = serde_json::from_str(text).unwrap();
        let pair = spec.to_pair().unwrap();
        assert_eq!(pair.codes().c1().dim(), 1);
        assert_eq!(pair.codes().c2().dim(), 0);
        assert_eq!(pair.message_len(), 1);
        let back = PairSpec::from_pair(&pair);
        let pair2 = back.to_pair().unwrap();
        assert_eq!(pair.codes(), pair2.codes());
        assert_eq!(pair.msg_rows(), pair2.msg_rows());
    }

    #[test]
    fn code_spec_roundtrip() {
        let f = FieldParams::new(2, 2, vec![1, 1, 1]).unwrap();
        let c = LinearCode::from_rows(f.clone(), 2, &[vec![f.one(), f.gen()]]).unwrap();
        let spec = CodeSpec::from_code(&c);
        assert_eq!(spec.to_code().unwrap(), c);
    }

    #[test]
    fn net_spec_roundtrip() {
        let text = r#"{"n":3,"a":[[1,0,0],[0,1,0],[0,0,1]],"gcv_list":[[1,0,0],[0,1,0],[0,0,1]]}"#;
        let spec: NetSpec = serde_json::from_str(text).unwrap();
        let net = spec.to_network(2).unwrap();
        assert_eq!(net.rho(), 0);
        let back = NetSpec::from_network(&net);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn dist_spec_remainder_uniform() {
        let f = FieldParams::new(2, 2, vec![1, 1, 1]).unwrap();
        let c1 = LinearCode::full(f.clone(), 2);
        let c2 = LinearCode::from_rows(f.clone(), 2, &[vec![f.one(), f.gen()]]).unwrap();
        let pair = NestedPair::new(NestedCodes::new(c1, c2).unwrap(), None).unwrap();
        let spec = DistSpec {
            entries: vec![DistEntry { s: vec![vec![0, 0]], num: 1, den: 2 }],
            remainder_uniform: true,
        };
        let dist = spec.to_dist(&pair).unwrap();
        match dist {
            MessageDist::Weighted(entries) => {
                assert_eq!(entries.len(), 4);
                // the three unlisted messages share the other half: 1/6 each
                let non_zero: Vec<_> =
                    entries.iter().filter(|(s, _, _)| !s[0].is_zero()).collect();
                assert_eq!(non_zero.len(), 3);
                for (_, n, d) in non_zero {
                    assert_eq!((*n, *d), (1, 6));
                }
            }
            MessageDist::Uniform => panic!("expected weighted"),
        }
    }
}
