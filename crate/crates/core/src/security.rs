//! Universal security evaluation of a nested coset coding scheme.
//!
//! The universal equivocation `Θ_μ = l - K_{R,μ}(C2⊥, C1⊥)` is computed
//! from the dual-pair RDIP; an exhaustive entropy oracle recomputes it by
//! enumerating every `(S, R)` pair against every observation subspace,
//! and the two routes must agree exactly. Equivocation is measured in
//! `log_{q^m}` units throughout.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::coset::NestedPair;
use crate::fields::ExtElem;
use crate::linalg::{self, enumerate_gamma, gaussian_binomial, MatrixFq, Subspace};
use crate::rparams;
use crate::{Error, Result};

/// Entropy/mutual-information floats below this are treated as exact
/// zero/integers; the uniform-case values are provably integral.
pub const ENTROPY_TOL: f64 = 1e-9;

fn flat_key(v: &[ExtElem]) -> Vec<u64> {
    v.iter().flat_map(|e| e.coeffs().iter().copied()).collect()
}

/// `Θ_μ` from the dual-pair RDIP.
pub fn universal_equivocation(pair: &NestedPair, mu: usize, budget_ops: u64) -> Result<usize> {
    let dual = pair.codes().dual_pair();
    Ok(pair.message_len() - rparams::rdip(&dual, mu, budget_ops)?)
}

/// Worst-case leakage `K_{R,μ}(C2⊥, C1⊥)`: the largest mutual
/// information obtainable from `μ` universally chosen observations.
pub fn max_leakage(pair: &NestedPair, mu: usize, budget_ops: u64) -> Result<usize> {
    let dual = pair.codes().dual_pair();
    rparams::rdip(&dual, mu, budget_ops)
}

/// `M_{R,j}(C2⊥, C1⊥)`: the least number of observed links revealing
/// mutual information `j`.
pub fn leakage_threshold(pair: &NestedPair, j: usize, budget_ops: u64) -> Result<usize> {
    let dual = pair.codes().dual_pair();
    rparams::rgrw(&dual, j, budget_ops)
}

/// Exact `H(S | B Xᵀ)` in `log_{q^m}` units for an arbitrary base-field
/// observation matrix, by enumerating all `(S, R)` pairs with `S`
/// uniform.
pub fn entropy_given_matrix(pair: &NestedPair, b: &MatrixFq, budget_ops: u64) -> Result<f64> {
    if b.cols() != pair.length() {
        return Err(Error::input("observation matrix has wrong width"));
    }
    let field = pair.field().clone();
    let enumeration = field
        .order()
        .checked_pow(pair.codes().c1().dim() as u32)
        .unwrap_or(u128::MAX);
    if enumeration > budget_ops as u128 {
        return Err(Error::Budget { needed: enumeration, budget: budget_ops });
    }
    // joint counts: observation -> message -> count
    let mut joint: BTreeMap<Vec<u64>, BTreeMap<Vec<u64>, u64>> = BTreeMap::new();
    let mut total = 0u64;
    for s in field.vectors(pair.message_len()) {
        for r in field.vectors(pair.codes().c2().dim()) {
            let x = pair.encode_with_r(&s, &r).expect("valid dims");
            let obs = linalg::apply_fq_rows(&field, b, &x);
            *joint
                .entry(flat_key(&obs))
                .or_default()
                .entry(flat_key(&s))
                .or_insert(0) += 1;
            total += 1;
        }
    }
    let log_base = (field.order() as f64).ln();
    let mut h = 0.0;
    for by_s in joint.values() {
        let obs_count: u64 = by_s.values().sum();
        let p_obs = obs_count as f64 / total as f64;
        let mut h_cond = 0.0;
        for &c in by_s.values() {
            let p = c as f64 / obs_count as f64;
            h_cond -= p * p.ln();
        }
        h += p_obs * h_cond / log_base;
    }
    // uniform-message entropies are integers; snap float noise
    if (h - h.round()).abs() < ENTROPY_TOL {
        h = h.round();
    }
    Ok(h)
}

/// Oracle entropy for an observation subspace (its RREF basis as `B`).
pub fn entropy_given_subspace(pair: &NestedPair, v: &Subspace, budget_ops: u64) -> Result<f64> {
    entropy_given_matrix(pair, v.basis(), budget_ops)
}

/// The closed-form entropy `l - dim(C2⊥ ∩ V) + dim(C1⊥ ∩ V)` for an
/// observation subspace (uniform messages).
pub fn entropy_formula(pair: &NestedPair, v: &Subspace) -> usize {
    let field = pair.field().clone();
    let lifted = v.lift(field);
    let dual = pair.codes().dual_pair();
    let d2 = dual.c1().dim() + lifted.rows() - dual.c1().generator().stack(&lifted).rank();
    let d1 = dual.c2().dim() + lifted.rows() - dual.c2().generator().stack(&lifted).rank();
    pair.message_len() + d1 - d2
}

/// `Θ_μ` by exhaustive minimization of the oracle entropy over every
/// observation subspace of dimension at most `μ`.
pub fn equivocation_oracle(pair: &NestedPair, mu: usize, budget_ops: u64) -> Result<f64> {
    let n = pair.length();
    if mu > n {
        return Err(Error::input(format!("mu = {mu} out of range 0..={n}")));
    }
    let q = pair.field().q();
    let subspaces: u128 = (0..=mu)
        .map(|i| gaussian_binomial(q, n, i).unwrap_or(u128::MAX / 4))
        .sum();
    let per_subspace = pair
        .field()
        .order()
        .checked_pow(pair.codes().c1().dim() as u32)
        .unwrap_or(u128::MAX);
    let needed = subspaces.saturating_mul(per_subspace);
    if needed > budget_ops as u128 {
        return Err(Error::Budget { needed, budget: budget_ops });
    }
    let mut best = pair.message_len() as f64;
    for i in 0..=mu {
        for v in enumerate_gamma(q, n, i) {
            let h = entropy_given_subspace(pair, &v, budget_ops)?;
            if h < best {
                best = h;
            }
        }
    }
    Ok(best)
}

/// The strong-security order Ω with a cap flag: the reported value never
/// exceeds `n`, and `capped` records that the theorem formula exceeded
/// the cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StrongSecurityOrder {
    pub omega: usize,
    pub capped: bool,
}

/// `Ω = min_i M_{R,1}(D_{2,i}⊥, D_{1,i}⊥) - 1` over the message
/// coordinates, from the punctured/shortened extended codes.
pub fn strong_security_order(pair: &NestedPair, budget_ops: u64) -> Result<StrongSecurityOrder> {
    let l = pair.message_len();
    if l == 0 {
        return Err(Error::input("strong security needs l >= 1"));
    }
    let mut min_first = usize::MAX;
    for i in 0..l {
        let strong = pair.strong_pair(i)?;
        let dual = strong.dual_pair();
        let m1 = rparams::rgrw(&dual, 1, budget_ops)?;
        min_first = min_first.min(m1);
    }
    let raw = min_first - 1;
    let n = pair.length();
    Ok(StrongSecurityOrder { omega: raw.min(n), capped: raw > n })
}

/// A message distribution: uniform, or explicit rational weights per
/// message (unlisted messages have probability zero).
#[derive(Debug, Clone)]
pub enum MessageDist {
    Uniform,
    Weighted(Vec<(Vec<ExtElem>, u64, u64)>),
}

impl MessageDist {
    fn validate(&self, pair: &NestedPair) -> Result<()> {
        match self {
            MessageDist::Uniform => Ok(()),
            MessageDist::Weighted(entries) => {
                let mut num = 0u128;
                let mut den = 1u128;
                let mut seen = std::collections::HashSet::new();
                for (s, n, d) in entries {
                    if s.len() != pair.message_len() {
                        return Err(Error::input("distribution message has wrong length"));
                    }
                    if *d == 0 {
                        return Err(Error::input("zero denominator in distribution"));
                    }
                    if !seen.insert(flat_key(s)) {
                        return Err(Error::input("duplicate message in distribution"));
                    }
                    // num/den += n/d exactly
                    num = num * *d as u128 + *n as u128 * den;
                    den *= *d as u128;
                    let g = gcd(num.max(1), den);
                    num /= g;
                    den /= g;
                }
                if num != den {
                    return Err(Error::input("distribution weights must sum to 1"));
                }
                Ok(())
            }
        }
    }

    fn weights(&self, pair: &NestedPair) -> Vec<(Vec<ExtElem>, f64)> {
        match self {
            MessageDist::Uniform => {
                let field = pair.field();
                let count = field.order().pow(pair.message_len() as u32) as f64;
                field
                    .vectors(pair.message_len())
                    .map(|s| (s, 1.0 / count))
                    .collect()
            }
            MessageDist::Weighted(entries) => entries
                .iter()
                .filter(|(_, n, _)| *n > 0)
                .map(|(s, n, d)| (s.clone(), *n as f64 / *d as f64))
                .collect(),
        }
    }
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Exact `I(S_Z ; B Xᵀ)` in `log_{q^m}` units from the full joint
/// distribution, `S` drawn from `dist` and the coset component uniform.
/// `z` holds 0-based message coordinates.
pub fn empirical_mi(
    pair: &NestedPair,
    z: &[usize],
    b: &MatrixFq,
    dist: &MessageDist,
    budget_ops: u64,
) -> Result<f64> {
    if b.cols() != pair.length() {
        return Err(Error::input("observation matrix has wrong width"));
    }
    let l = pair.message_len();
    if z.iter().any(|&i| i >= l) {
        return Err(Error::input("message index out of range"));
    }
    let mut z: Vec<usize> = z.to_vec();
    z.sort_unstable();
    z.dedup();
    if z.is_empty() {
        return Ok(0.0);
    }
    dist.validate(pair)?;
    let field = pair.field().clone();
    let enumeration = field
        .order()
        .checked_pow(pair.codes().c1().dim() as u32)
        .unwrap_or(u128::MAX);
    if enumeration > budget_ops as u128 {
        return Err(Error::Budget { needed: enumeration, budget: budget_ops });
    }
    let r_count = field.order().pow(pair.codes().c2().dim() as u32) as f64;
    let mut joint: BTreeMap<(Vec<u64>, Vec<u64>), f64> = BTreeMap::new();
    let mut marg_z: BTreeMap<Vec<u64>, f64> = BTreeMap::new();
    let mut marg_o: BTreeMap<Vec<u64>, f64> = BTreeMap::new();
    for (s, w) in dist.weights(pair) {
        let sz: Vec<ExtElem> = z.iter().map(|&i| s[i].clone()).collect();
        let sz_key = flat_key(&sz);
        for r in field.vectors(pair.codes().c2().dim()) {
            let x = pair.encode_with_r(&s, &r).expect("valid dims");
            let obs_key = flat_key(&linalg::apply_fq_rows(&field, b, &x));
            let p = w / r_count;
            *joint.entry((sz_key.clone(), obs_key.clone())).or_insert(0.0) += p;
            *marg_z.entry(sz_key.clone()).or_insert(0.0) += p;
            *marg_o.entry(obs_key).or_insert(0.0) += p;
        }
    }
    let log_base = (field.order() as f64).ln();
    let mut mi = 0.0;
    for ((sz_key, obs_key), &p) in &joint {
        if p <= 0.0 {
            continue;
        }
        let pz = marg_z[sz_key];
        let po = marg_o[obs_key];
        mi += p * (p / (pz * po)).ln() / log_base;
    }
    Ok(mi)
}

/// The assembled security report of a pair.
#[derive(Debug, Clone, Serialize)]
pub struct SecurityReport {
    /// `Θ_μ` for `μ = 0..=mu_max`, in `log_{q^m}` symbols.
    pub theta: Vec<usize>,
    /// `K_{R,μ}(C2⊥, C1⊥)` for the same range.
    pub max_leakage: Vec<usize>,
    /// `M_{R,j}(C2⊥, C1⊥)` for `j = 1..=l`.
    pub leakage_thresholds: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<usize>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub omega_capped: bool,
}

pub fn security_report(
    pair: &NestedPair,
    mu_max: usize,
    with_omega: bool,
    budget_ops: u64,
) -> Result<SecurityReport> {
    let l = pair.message_len();
    let mu_max = mu_max.min(pair.length());
    let dual = pair.codes().dual_pair();
    let profile = rparams::rdip_profile(&dual, budget_ops)?;
    let thresholds = rparams::rgrw_profile(&dual, budget_ops)?;
    let theta: Vec<usize> = (0..=mu_max).map(|mu| l - profile.get(mu)).collect();
    let max_leakage: Vec<usize> = (0..=mu_max).map(|mu| profile.get(mu)).collect();
    // Θ_μ + K_{R,μ} = l by construction; the shape checks live in the
    // profile types
    debug_assert!(theta.windows(2).all(|w| w[1] <= w[0]));
    let omega = if with_omega {
        Some(strong_security_order(pair, budget_ops)?)
    } else {
        None
    };
    Ok(SecurityReport {
        theta,
        max_leakage,
        leakage_thresholds: thresholds.values()[1..].to_vec(),
        omega: omega.map(|o| o.omega),
        omega_capped: omega.is_some_and(|o| o.capped),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{LinearCode, NestedCodes};
    use crate::coset::systematic_mrd_construction;
    use crate::fields::FieldParams;
    use crate::DEFAULT_BUDGET_OPS;
    use std::sync::Arc;

    const B: u64 = DEFAULT_BUDGET_OPS;

    fn f4() -> Arc<FieldParams> {
        FieldParams::new(2, 2, vec![1, 1, 1]).unwrap()
    }

    fn f8() -> Arc<FieldParams> {
        FieldParams::new(2, 3, vec![1, 1, 0, 1]).unwrap()
    }

    fn ozarow() -> NestedPair {
        let f = f4();
        let c1 = LinearCode::full(f.clone(), 2);
        let c2 = LinearCode::from_rows(f.clone(), 2, &[vec![f.one(), f.gen()]]).unwrap();
        NestedPair::new(NestedCodes::new(c1, c2).unwrap(), None).unwrap()
    }

    #[test]
    fn theta_on_ozarow_fixture() {
        let pair = ozarow();
        let theta: Vec<usize> = (0..=2)
            .map(|mu| universal_equivocation(&pair, mu, B).unwrap())
            .collect();
        assert_eq!(theta, vec![1, 1, 0]);
        assert_eq!(universal_equivocation(&pair, 0, B).unwrap(), pair.message_len());
    }

    #[test]
    fn oracle_agrees_with_formula_on_ozarow() {
        let pair = ozarow();
        assert_eq!(equivocation_oracle(&pair, 0, B).unwrap(), 1.0);
        assert_eq!(equivocation_oracle(&pair, 1, B).unwrap(), 1.0);
        for mu in 0..=2 {
            let formula = universal_equivocation(&pair, mu, B).unwrap() as f64;
            let oracle = equivocation_oracle(&pair, mu, B).unwrap();
            assert!((oracle - formula).abs() < ENTROPY_TOL);
        }
    }

    #[test]
    fn per_subspace_entropy_matches_closed_form() {
        let pair = ozarow();
        for dim in 0..=2 {
            for v in enumerate_gamma(2, 2, dim) {
                let oracle = entropy_given_subspace(&pair, &v, B).unwrap();
                let formula = entropy_formula(&pair, &v) as f64;
                assert!((oracle - formula).abs() < ENTROPY_TOL);
            }
        }
    }

    #[test]
    fn raw_matrix_minimization_matches_subspace_reduction() {
        // micro-check of the row-space reduction at n = 2: minimizing over
        // every raw B matrix gives the same value as minimizing over Γ
        let pair = ozarow();
        for mu in 0..=2usize {
            let mut best = pair.message_len() as f64;
            for b in linalg::all_matrices(2, mu, 2) {
                best = best.min(entropy_given_matrix(&pair, &b, B).unwrap());
            }
            let reduced = equivocation_oracle(&pair, mu, B).unwrap();
            assert!((best - reduced).abs() < ENTROPY_TOL);
        }
    }

    #[test]
    fn leakage_on_ozarow() {
        let pair = ozarow();
        assert_eq!(max_leakage(&pair, 1, B).unwrap(), 0);
        assert_eq!(max_leakage(&pair, 2, B).unwrap(), 1);
        assert_eq!(max_leakage(&pair, pair.length(), B).unwrap(), pair.message_len());
        assert_eq!(leakage_threshold(&pair, 1, B).unwrap(), 2);
        // below the threshold nothing leaks
        let t = leakage_threshold(&pair, 1, B).unwrap();
        assert_eq!(max_leakage(&pair, t - 1, B).unwrap(), 0);
        assert!(max_leakage(&pair, t, B).unwrap() >= 1);
    }

    #[test]
    fn strong_security_order_on_systematic_construction() {
        let pair = systematic_mrd_construction(f8(), 1, 2).unwrap();
        let order = strong_security_order(&pair, B).unwrap();
        assert_eq!(order.omega, 1); // n - 1
        assert!(!order.capped);
        // Θ_{Ω-l+1} = l must hold
        let theta = universal_equivocation(&pair, order.omega - 1 + 1, B).unwrap();
        assert_eq!(theta, pair.message_len());
        // the dual strong pair's first weight equals n
        let strong = pair.strong_pair(0).unwrap().dual_pair();
        assert_eq!(rparams::rgrw(&strong, 1, B).unwrap(), 2);
        assert_eq!(rparams::rgrw_first_direct(&strong, B).unwrap(), 2);
    }

    #[test]
    fn mrd_dual_pair_thresholds() {
        // both duals MRD: K_{R,μ}(C2⊥,C1⊥) = max{0, μ - dim C2}, so the
        // j-th threshold is dim C2 + j
        let f = f8();
        let c1 = LinearCode::gabidulin(f.clone(), 3, 1, None).unwrap().dual();
        let c2 = LinearCode::gabidulin(f.clone(), 3, 2, None).unwrap().dual();
        let pair = NestedPair::new(NestedCodes::new(c1, c2).unwrap(), None).unwrap();
        let dim_c2 = pair.codes().c2().dim();
        let l = pair.message_len();
        for j in 1..=l {
            assert_eq!(leakage_threshold(&pair, j, B).unwrap(), dim_c2 + j);
        }
        for mu in 0..=pair.codes().c1().dim() {
            assert_eq!(
                universal_equivocation(&pair, mu, B).unwrap(),
                l - mu.saturating_sub(dim_c2)
            );
        }
        // thresholds strictly increase with j (trivially here since l = 1)
        let profile = crate::rparams::rgrw_profile(&pair.codes().dual_pair(), B).unwrap();
        assert!(profile.values().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn omega_matches_first_threshold_when_l_is_one() {
        // l = 1 collapses the strong pair onto (C2⊥, C1⊥)
        for pair in [ozarow(), systematic_mrd_construction(f8(), 1, 2).unwrap()] {
            let omega = strong_security_order(&pair, B).unwrap().omega;
            let threshold = leakage_threshold(&pair, 1, B).unwrap();
            assert_eq!(omega, threshold - 1);
        }
    }

    #[test]
    fn empirical_mi_full_observation_reveals_everything() {
        let pair = ozarow();
        let b = MatrixFq::identity(2, 2);
        let z = vec![0usize];
        let mi = empirical_mi(&pair, &z, &b, &MessageDist::Uniform, B).unwrap();
        assert!((mi - pair.message_len() as f64).abs() < ENTROPY_TOL);
    }

    #[test]
    fn empirical_mi_zero_below_threshold_uniform_and_nonuniform() {
        let pair = ozarow();
        let f = pair.field().clone();
        // P(S = 0) = 1/2, the three nonzero messages get 1/6 each
        let mut entries = Vec::new();
        for s in f.vectors(1) {
            let w = if s[0].is_zero() { (1u64, 2u64) } else { (1, 6) };
            entries.push((s, w.0, w.1));
        }
        let nonuniform = MessageDist::Weighted(entries);
        let threshold = leakage_threshold(&pair, 1, B).unwrap();
        for dim in 0..threshold {
            for v in enumerate_gamma(2, 2, dim) {
                for dist in [&MessageDist::Uniform, &nonuniform] {
                    let mi = empirical_mi(&pair, &[0], v.basis(), dist, B).unwrap();
                    assert!(mi.abs() < ENTROPY_TOL, "leak at dim {dim}: {mi}");
                }
            }
        }
    }

    #[test]
    fn mi_bounded_by_intersection_difference() {
        // I(S; BXᵀ) <= dim(C2⊥ ∩ V) - dim(C1⊥ ∩ V), equality when uniform
        let pair = ozarow();
        let f = pair.field().clone();
        let mut entries = Vec::new();
        for s in f.vectors(1) {
            let w = if s[0].is_zero() { (1u64, 2u64) } else { (1, 6) };
            entries.push((s, w.0, w.1));
        }
        let nonuniform = MessageDist::Weighted(entries);
        let z: Vec<usize> = (0..pair.message_len()).collect();
        for dim in 0..=2 {
            for v in enumerate_gamma(2, 2, dim) {
                let bound =
                    (pair.message_len() - entropy_formula(&pair, &v)) as f64;
                let uni = empirical_mi(&pair, &z, v.basis(), &MessageDist::Uniform, B).unwrap();
                assert!((uni - bound).abs() < ENTROPY_TOL);
                let non = empirical_mi(&pair, &z, v.basis(), &nonuniform, B).unwrap();
                assert!(non <= bound + ENTROPY_TOL);
            }
        }
    }

    #[test]
    fn distribution_validation() {
        let pair = ozarow();
        let f = pair.field().clone();
        let bad = MessageDist::Weighted(vec![(vec![f.zero()], 1, 2)]);
        let b = MatrixFq::identity(2, 2);
        assert!(empirical_mi(&pair, &[0], &b, &bad, B).is_err());
        // empty Z has zero mutual information by convention
        assert_eq!(
            empirical_mi(&pair, &[], &b, &MessageDist::Uniform, B).unwrap(),
            0.0
        );
    }

    #[test]
    fn report_identities() {
        let pair = ozarow();
        let report = security_report(&pair, pair.length(), false, B).unwrap();
        assert_eq!(report.theta, vec![1, 1, 0]);
        assert_eq!(report.max_leakage, vec![0, 0, 1]);
        assert_eq!(report.leakage_thresholds, vec![2]);
        for mu in 0..report.theta.len() {
            assert_eq!(report.theta[mu] + report.max_leakage[mu], pair.message_len());
        }
    }
}
