//! Relative dimension/intersection profile (RDIP) and relative
//! generalized rank weight (RGRW) of a nested code pair, by exhaustive
//! scan over the Frobenius-invariant subspace family.
//!
//! The RGRW is normally derived from the RDIP profile (one scan serves
//! every index); the direct subspace scan and the codeword scan for the
//! first weight are kept as independent oracles and must agree.

use crate::codes::{LinearCode, NestedCodes, Rational};
use crate::linalg::{self, enumerate_gamma, gaussian_binomial, MatrixFqm};
use crate::{Error, Result};

/// `K_{R,0..n}` with the shape constraints of the monotonicity theorem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RdipProfile {
    values: Vec<usize>,
}

impl RdipProfile {
    fn new(values: Vec<usize>, quotient_dim: usize) -> Result<Self> {
        let ok = values.first() == Some(&0)
            && values.last() == Some(&quotient_dim)
            && values.windows(2).all(|w| w[1] >= w[0] && w[1] - w[0] <= 1);
        if !ok {
            return Err(Error::input(format!(
                "RDIP profile violates monotonicity/unit-step shape: {values:?}"
            )));
        }
        Ok(RdipProfile { values })
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// `K_{R,i}`.
    pub fn get(&self, i: usize) -> usize {
        self.values[i]
    }
}

/// `M_{R,0..l}`, strictly increasing from zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgrwProfile {
    values: Vec<usize>,
}

impl RgrwProfile {
    fn new(values: Vec<usize>) -> Result<Self> {
        let ok = values.first() == Some(&0) && values.windows(2).all(|w| w[1] > w[0]);
        if !ok {
            return Err(Error::input(format!(
                "RGRW profile is not strictly increasing from zero: {values:?}"
            )));
        }
        Ok(RgrwProfile { values })
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// `M_{R,i}`.
    pub fn get(&self, i: usize) -> usize {
        self.values[i]
    }
}

fn dim_intersection(code: &LinearCode, v: &MatrixFqm) -> usize {
    code.dim() + v.rows() - code.generator().stack(v).rank()
}

fn scan_cost(q: u64, n: usize, dims: impl Iterator<Item = usize>) -> u128 {
    dims.map(|i| gaussian_binomial(q, n, i).unwrap_or(u128::MAX / 4).saturating_mul(2))
        .fold(0u128, u128::saturating_add)
}

fn check_budget(needed: u128, budget_ops: u64) -> Result<()> {
    if needed > budget_ops as u128 {
        return Err(Error::Budget { needed, budget: budget_ops });
    }
    Ok(())
}

/// `K_{R,i}(C1, C2)`: the greatest `dim(C1 ∩ V) - dim(C2 ∩ V)` over
/// `V ∈ Γ_i`.
pub fn rdip(pair: &NestedCodes, i: usize, budget_ops: u64) -> Result<usize> {
    let n = pair.length();
    if i > n {
        return Err(Error::input(format!("rdip index {i} out of range 0..={n}")));
    }
    let field = pair.field().clone();
    check_budget(scan_cost(field.q(), n, std::iter::once(i)), budget_ops)?;
    let mut best = 0usize;
    for v in enumerate_gamma(field.q(), n, i) {
        let lifted = v.lift(field.clone());
        let d1 = dim_intersection(pair.c1(), &lifted);
        let d2 = dim_intersection(pair.c2(), &lifted);
        best = best.max(d1 - d2);
    }
    Ok(best)
}

/// The full profile `K_{R,0..n}`, validated against the monotonicity
/// theorem before returning.
pub fn rdip_profile(pair: &NestedCodes, budget_ops: u64) -> Result<RdipProfile> {
    let n = pair.length();
    let field = pair.field();
    check_budget(scan_cost(field.q(), n, 0..=n), budget_ops)?;
    let mut values = Vec::with_capacity(n + 1);
    for i in 0..=n {
        values.push(rdip(pair, i, budget_ops)?);
    }
    RdipProfile::new(values, pair.quotient_dim())
}

/// `M_{R,i}(C1, C2)` computed from the RDIP profile as the least `j`
/// with `K_{R,j} = i`.
pub fn rgrw(pair: &NestedCodes, i: usize, budget_ops: u64) -> Result<usize> {
    if i > pair.quotient_dim() {
        return Err(Error::input(format!(
            "rgrw index {i} exceeds dim(C1/C2) = {}",
            pair.quotient_dim()
        )));
    }
    let profile = rdip_profile(pair, budget_ops)?;
    Ok(rgrw_from_profile(&profile, i))
}

fn rgrw_from_profile(profile: &RdipProfile, i: usize) -> usize {
    profile
        .values()
        .iter()
        .position(|&k| k == i)
        .expect("profile reaches every value up to dim(C1/C2)")
}

/// `M_{R,0..l}` from a single RDIP scan.
pub fn rgrw_profile(pair: &NestedCodes, budget_ops: u64) -> Result<RgrwProfile> {
    let profile = rdip_profile(pair, budget_ops)?;
    let values = (0..=pair.quotient_dim())
        .map(|i| rgrw_from_profile(&profile, i))
        .collect();
    RgrwProfile::new(values)
}

/// Direct subspace-scan oracle for the RGRW: the least `dim V` over all
/// of `Γ` with intersection difference `>= i` (or `== i` when `exact`).
/// Kept independent of the profile route for cross-checks.
pub fn rgrw_scan(pair: &NestedCodes, i: usize, exact: bool, budget_ops: u64) -> Result<usize> {
    if i > pair.quotient_dim() {
        return Err(Error::input("rgrw index out of range"));
    }
    if i == 0 {
        return Ok(0);
    }
    let n = pair.length();
    let field = pair.field().clone();
    check_budget(scan_cost(field.q(), n, 0..=n), budget_ops)?;
    for dim in 0..=n {
        for v in enumerate_gamma(field.q(), n, dim) {
            let lifted = v.lift(field.clone());
            let d1 = dim_intersection(pair.c1(), &lifted);
            let d2 = dim_intersection(pair.c2(), &lifted);
            let diff = d1 - d2;
            if (exact && diff == i) || (!exact && diff >= i) {
                return Ok(dim);
            }
        }
    }
    Err(Error::input(format!("no subspace attains intersection difference {i}")))
}

/// `M_{R,1}` by its minimum-rank form: the least `rank_fq` over the
/// codewords of `C1` outside `C2`.
pub fn rgrw_first_direct(pair: &NestedCodes, budget_ops: u64) -> Result<usize> {
    let count = pair.c1().codeword_count().unwrap_or(u128::MAX);
    check_budget(count, budget_ops)?;
    let field = pair.field();
    let mut best = usize::MAX;
    for w in pair.c1().codewords() {
        if pair.c2().contains(&w) {
            continue;
        }
        best = best.min(linalg::rank_fq(field, &w));
    }
    Ok(best)
}

/// The Singleton-type bound `min{1, m/(n - dim C2)}·(n - dim C1) + i`
/// as an exact rational; comparisons are made against this value, never
/// a floored version of it.
pub fn singleton_bound(pair: &NestedCodes, i: usize) -> Rational {
    let n = pair.length();
    let m = pair.field().m();
    let k1 = pair.c1().dim();
    let k2 = pair.c2().dim();
    let den = n - k2;
    if m >= den {
        Rational::new((n - k1 + i) as u128, 1)
    } else {
        Rational::new((m * (n - k1) + i * den) as u128, den as u128)
    }
}

/// Whether `M_{R,i}` attains the Singleton-type bound for every
/// `1 <= i <= dim(C1/C2)`.
pub fn singleton_equality_all(pair: &NestedCodes, budget_ops: u64) -> Result<bool> {
    let profile = rgrw_profile(pair, budget_ops)?;
    Ok((1..=pair.quotient_dim())
        .all(|i| singleton_bound(pair, i).eq_int(profile.get(i) as u128)))
}

/// The direct-sum complement `S` of `C2` inside `C1` (so `C1 = C2 ⊕ S`),
/// materialized by RREF-pivot completion of a `C2` basis.
pub fn complement_code(pair: &NestedCodes) -> LinearCode {
    let field = pair.field().clone();
    let n = pair.length();
    let mut rows = pair.c2().generator().to_rows();
    let base = rows.len();
    let mut chosen = Vec::new();
    for cand in pair.c1().generator().to_rows() {
        rows.push(cand.clone());
        let rank = MatrixFqm::from_rows(field.clone(), &rows).rank();
        if rank == rows.len() {
            chosen.push(cand);
        } else {
            rows.pop();
        }
    }
    debug_assert_eq!(base + chosen.len(), pair.c1().dim());
    LinearCode::from_rows(field, n, &chosen).expect("complement rows are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FieldParams;
    use crate::DEFAULT_BUDGET_OPS;
    use std::sync::Arc;

    const B: u64 = DEFAULT_BUDGET_OPS;

    fn f8() -> Arc<FieldParams> {
        FieldParams::new(2, 3, vec![1, 1, 0, 1]).unwrap()
    }

    fn f4() -> Arc<FieldParams> {
        FieldParams::new(2, 2, vec![1, 1, 1]).unwrap()
    }

    /// The f4 wiretap fixture: C1 = F_4^2, C2 = span{[1, α]}.
    fn ozarow_pair() -> NestedCodes {
        let f = f4();
        let c1 = LinearCode::full(f.clone(), 2);
        let c2 =
            LinearCode::from_rows(f.clone(), 2, &[vec![f.one(), f.gen()]]).unwrap();
        NestedCodes::new(c1, c2).unwrap()
    }

    fn gab_pair() -> NestedCodes {
        let f = f8();
        let c1 = LinearCode::gabidulin(f.clone(), 3, 2, None).unwrap();
        let c2 = LinearCode::gabidulin(f.clone(), 3, 1, None).unwrap();
        NestedCodes::new(c1, c2).unwrap()
    }

    #[test]
    fn rdip_endpoints() {
        for pair in [ozarow_pair(), gab_pair()] {
            assert_eq!(rdip(&pair, 0, B).unwrap(), 0);
            assert_eq!(rdip(&pair, pair.length(), B).unwrap(), pair.quotient_dim());
        }
    }

    #[test]
    fn ozarow_dual_pair_profile() {
        // (C2⊥, C1⊥) = (span{[α,1]}, {0}): K = [0, 0, 1], M_{R,1} = 2
        let dual = ozarow_pair().dual_pair();
        assert_eq!(rdip(&dual, 1, B).unwrap(), 0);
        let profile = rdip_profile(&dual, B).unwrap();
        assert_eq!(profile.values(), &[0, 0, 1]);
        assert_eq!(rgrw(&dual, 1, B).unwrap(), 2);
        assert_eq!(rgrw_profile(&dual, B).unwrap().values(), &[0, 2]);
    }

    #[test]
    fn ozarow_primal_profile() {
        let pair = ozarow_pair();
        let profile = rdip_profile(&pair, B).unwrap();
        assert_eq!(profile.values(), &[0, 1, 1]);
        assert_eq!(rgrw(&pair, 1, B).unwrap(), 1);
    }

    #[test]
    fn gabidulin_pair_rgrw() {
        // C2 = {0}, C1 = [3,2] Gabidulin: M_{R,1} = 2, M_{R,2} = 3
        let f = f8();
        let c1 = LinearCode::gabidulin(f.clone(), 3, 2, None).unwrap();
        let pair = NestedCodes::new(c1, LinearCode::zero(f.clone(), 3)).unwrap();
        assert_eq!(rgrw(&pair, 0, B).unwrap(), 0);
        assert_eq!(rgrw(&pair, 1, B).unwrap(), 2);
        assert_eq!(rgrw(&pair, 2, B).unwrap(), 3);
        // nested Gabidulin pair: minimum rank over C1\C2
        assert_eq!(rgrw_first_direct(&gab_pair(), B).unwrap(), 2);
        // pair whose C1 has an F_q vector outside C2
        let c1 = LinearCode::full(f.clone(), 3);
        let c2 = LinearCode::gabidulin(f.clone(), 3, 1, None).unwrap();
        let pair = NestedCodes::new(c1, c2).unwrap();
        assert_eq!(rgrw_first_direct(&pair, B).unwrap(), 1);
    }

    #[test]
    fn rgrw_routes_agree_on_fixtures() {
        for pair in [ozarow_pair(), gab_pair(), ozarow_pair().dual_pair()] {
            for i in 0..=pair.quotient_dim() {
                let from_profile = rgrw(&pair, i, B).unwrap();
                assert_eq!(rgrw_scan(&pair, i, false, B).unwrap(), from_profile);
                assert_eq!(rgrw_scan(&pair, i, true, B).unwrap(), from_profile);
            }
            assert_eq!(rgrw_first_direct(&pair, B).unwrap(), rgrw(&pair, 1, B).unwrap());
        }
    }

    #[test]
    fn first_rgrw_of_code_is_min_rank_distance() {
        let f = f8();
        for k in 1..=2usize {
            let c = LinearCode::gabidulin(f.clone(), 3, k, None).unwrap();
            let d = c.min_rank_distance(B).unwrap();
            let pair = NestedCodes::new(c, LinearCode::zero(f.clone(), 3)).unwrap();
            assert_eq!(rgrw_first_direct(&pair, B).unwrap(), d);
        }
    }

    #[test]
    fn singleton_bound_examples() {
        // m >= n, C2 = {0}: bound is (n - k1) + i
        let f = f8();
        let c1 = LinearCode::gabidulin(f.clone(), 3, 2, None).unwrap();
        let pair = NestedCodes::new(c1, LinearCode::zero(f.clone(), 3)).unwrap();
        assert!(singleton_bound(&pair, 1).eq_int(2));
        assert!(singleton_bound(&pair, 2).eq_int(3));
        assert!(singleton_equality_all(&pair, B).unwrap());
        // q=2, m=3, n=3, dim C2 = 1, dim C1 = 2, i = 1 -> 2
        assert!(singleton_bound(&gab_pair(), 1).eq_int(2));
        // full space C1, i = l, m >= n: bound = l
        let full = LinearCode::full(f.clone(), 3);
        let pair =
            NestedCodes::new(full, LinearCode::gabidulin(f.clone(), 3, 1, None).unwrap())
                .unwrap();
        let l = pair.quotient_dim();
        assert!(singleton_bound(&pair, l).eq_int(l as u128));
    }

    #[test]
    fn fractional_bound_stays_exact() {
        // m < n - dim C2 gives a non-integer scaling
        let f = f4();
        let c1 = LinearCode::from_rows(
            f.clone(),
            3,
            &[vec![f.one(), f.zero(), f.zero()]],
        )
        .unwrap();
        let pair = NestedCodes::new(c1, LinearCode::zero(f.clone(), 3)).unwrap();
        let b = singleton_bound(&pair, 1);
        // min{1, 2/3}·2 + 1 = 7/3
        assert_eq!((b.num(), b.den()), (7, 3));
        assert!(!b.is_integer());
    }

    #[test]
    fn profile_shape_small_universe() {
        // Thm-1 shape over every nested pair in F_8^2 with dim C1 <= 2
        let f = f8();
        let n = 2;
        let mut codes: Vec<LinearCode> = vec![LinearCode::zero(f.clone(), n)];
        let mut seen = std::collections::HashSet::new();
        for v in f.vectors(n) {
            if v.iter().all(|e| e.is_zero()) {
                continue;
            }
            let c = LinearCode::from_rows(f.clone(), n, &[v]).unwrap();
            if seen.insert(format!("{:?}", c.generator())) {
                codes.push(c);
            }
        }
        codes.push(LinearCode::full(f.clone(), n));
        let mut pairs = 0;
        for c1 in &codes {
            for c2 in &codes {
                let Ok(pair) = NestedCodes::new(c1.clone(), c2.clone()) else {
                    continue;
                };
                pairs += 1;
                let profile = rdip_profile(&pair, B).unwrap(); // validates shape
                let rprofile = rgrw_profile(&pair, B).unwrap(); // strictly increasing
                for i in 1..=pair.quotient_dim() {
                    assert!(singleton_bound(&pair, i).ge_int(rprofile.get(i) as u128));
                }
                assert_eq!(profile.get(n), pair.quotient_dim());
            }
        }
        assert!(pairs > 0);
    }

    #[test]
    fn complement_code_properties() {
        let pair = gab_pair();
        let s = complement_code(&pair);
        assert_eq!(s.dim(), pair.quotient_dim());
        // C1 = C2 ⊕ S
        let mut rows = pair.c2().generator().to_rows();
        rows.extend(s.generator().to_rows());
        let c1 = LinearCode::from_rows(pair.field().clone(), pair.length(), &rows).unwrap();
        assert_eq!(&c1, pair.c1());
    }

    #[test]
    fn budget_guard_fires() {
        let pair = gab_pair();
        assert!(matches!(rdip(&pair, 2, 3), Err(Error::Budget { .. })));
        assert!(matches!(rgrw_first_direct(&pair, 3), Err(Error::Budget { .. })));
    }
}
