//! Built-in desk-scale reference instances used by the CLI and the
//! acceptance suite.
//!
//! - `f4-ozarow`: length-2 coset coding over `F_4` with `C1` the full
//!   space, the smallest wiretap fixture.
//! - `example1`: both dual codes MRD over `F_8` (length 3), the setting
//!   with the closed-form equivocation profile.
//! - `example2`: the systematic-MRD strong-security construction with
//!   `l = 1, n = 2, m = 3`.
//! - `example3`: `[3,1]` Gabidulin over the zero code, the
//!   error-correction fixture (capability 3), with a routing network.

use crate::codes::{LinearCode, NestedCodes};
use crate::coset::{systematic_mrd_construction, NestedPair};
use crate::fields::FieldParams;
use crate::io::{NetSpec, PairSpec};
use crate::{Error, Result};

pub const FIXTURE_NAMES: [&str; 4] = ["f4-ozarow", "example1", "example2", "example3"];

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub pair: NestedPair,
    pub net_spec: Option<NetSpec>,
    pub note: &'static str,
}

impl Fixture {
    pub fn pair_spec(&self) -> PairSpec {
        PairSpec::from_pair(&self.pair)
    }
}

pub fn fixture(name: &str) -> Result<Fixture> {
    match name {
        "f4-ozarow" => {
            let f = FieldParams::new(2, 2, vec![1, 1, 1])?;
            let c1 = LinearCode::full(f.clone(), 2);
            let c2 = LinearCode::from_rows(f.clone(), 2, &[vec![f.one(), f.gen()]])?;
            let pair = NestedPair::new(NestedCodes::new(c1, c2)?, None)?;
            Ok(Fixture {
                name: "f4-ozarow",
                pair,
                net_spec: None,
                note: "coset coding over F_4^2 with C1 the full space",
            })
        }
        "example1" => {
            let f = FieldParams::new(2, 3, vec![1, 1, 0, 1])?;
            let c1 = LinearCode::gabidulin(f.clone(), 3, 1, None)?.dual();
            let c2 = LinearCode::gabidulin(f.clone(), 3, 2, None)?.dual();
            let pair = NestedPair::new(NestedCodes::new(c1, c2)?, None)?;
            Ok(Fixture {
                name: "example1",
                pair,
                net_spec: None,
                note: "both dual codes are MRD; closed-form equivocation",
            })
        }
        "example2" => {
            let f = FieldParams::new(2, 3, vec![1, 1, 0, 1])?;
            let pair = systematic_mrd_construction(f, 1, 2)?;
            Ok(Fixture {
                name: "example2",
                pair,
                net_spec: None,
                note: "systematic-MRD strong security, l = 1, n = 2",
            })
        }
        "example3" => {
            let f = FieldParams::new(2, 3, vec![1, 1, 0, 1])?;
            let c1 = LinearCode::gabidulin(f.clone(), 3, 1, None)?;
            let c2 = LinearCode::zero(f.clone(), 3);
            let pair = NestedPair::new(NestedCodes::new(c1, c2)?, None)?;
            let net_spec = NetSpec {
                n: 3,
                a: vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
                gcv_list: Some(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]),
            };
            Ok(Fixture {
                name: "example3",
                pair,
                net_spec: Some(net_spec),
                note: "[3,1] Gabidulin over {0}: capability 3, routing network",
            })
        }
        other => Err(Error::input(format!(
            "unknown fixture {other:?}; known: {}",
            FIXTURE_NAMES.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rparams;
    use crate::DEFAULT_BUDGET_OPS;

    #[test]
    fn all_fixtures_build_and_roundtrip() {
        for name in FIXTURE_NAMES {
            let fix = fixture(name).unwrap();
            let spec = fix.pair_spec();
            let rebuilt = spec.to_pair().unwrap();
            assert_eq!(rebuilt.codes(), fix.pair.codes(), "{name}");
            assert_eq!(rebuilt.msg_rows(), fix.pair.msg_rows(), "{name}");
            if let Some(net) = &fix.net_spec {
                net.to_network(fix.pair.field().p()).unwrap();
            }
        }
        assert!(fixture("nope").is_err());
    }

    #[test]
    fn example1_duals_are_mrd() {
        let fix = fixture("example1").unwrap();
        let dual = fix.pair.codes().dual_pair();
        assert!(dual.c1().is_mrd(DEFAULT_BUDGET_OPS).unwrap()); // C2⊥
        assert!(dual.c2().is_mrd(DEFAULT_BUDGET_OPS).unwrap()); // C1⊥
        assert_eq!(fix.pair.message_len(), 1);
        assert_eq!(fix.pair.codes().c1().dim(), 2);
        assert_eq!(fix.pair.codes().c2().dim(), 1);
    }

    #[test]
    fn example3_capability() {
        let fix = fixture("example3").unwrap();
        assert_eq!(
            rparams::rgrw_first_direct(fix.pair.codes(), DEFAULT_BUDGET_OPS).unwrap(),
            3
        );
    }
}
