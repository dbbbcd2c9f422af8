//! Transfer-matrix-level linear network coding with wiretapping, packet
//! errors, and rank deficiency: `Yᵀ = AXᵀ + DZᵀ` with `A ∈ F_q^{N×n}`,
//! `ρ = n - rank A`.
//!
//! Decoding is minimum-discrepancy over cosets, exhaustively; ties are
//! reported as ambiguous rather than broken silently, because unique
//! decodability is an if-and-only-if statement that the sweeps test in
//! both directions.

use itertools::Itertools;
use serde::Serialize;

use crate::coset::NestedPair;
use crate::fields::{ExtElem, FieldParams};
use crate::linalg::{self, all_matrices, MatrixFq, Subspace};
use crate::rparams;
use crate::security;
use crate::{Error, Result};

/// A network seen from one sink: its transfer matrix, plus the optional
/// list of per-link global coding vectors for equivocation over concrete
/// wiretap sets.
#[derive(Debug, Clone)]
pub struct NetworkInstance {
    a: MatrixFq,
    gcv_list: Option<Vec<Vec<u64>>>,
}

impl NetworkInstance {
    pub fn new(a: MatrixFq, gcv_list: Option<Vec<Vec<u64>>>) -> Result<Self> {
        if let Some(list) = &gcv_list {
            if list.iter().any(|g| g.len() != a.cols()) {
                return Err(Error::input("GCV length must equal n"));
            }
            if list
                .iter()
                .any(|g| g.iter().any(|&c| c >= a.p()))
            {
                return Err(Error::input("GCV entry out of range"));
            }
            for r in 0..a.rows() {
                if !list.iter().any(|g| g.as_slice() == a.row(r)) {
                    return Err(Error::input(
                        "every transfer-matrix row must appear among the listed GCVs",
                    ));
                }
            }
        }
        Ok(NetworkInstance { a, gcv_list })
    }

    /// Source outgoing links.
    pub fn n(&self) -> usize {
        self.a.cols()
    }

    /// Sink incoming links.
    pub fn incoming(&self) -> usize {
        self.a.rows()
    }

    pub fn transfer(&self) -> &MatrixFq {
        &self.a
    }

    pub fn gcv_list(&self) -> Option<&[Vec<u64>]> {
        self.gcv_list.as_deref()
    }

    /// Rank deficiency `ρ = n - rank A`.
    pub fn rho(&self) -> usize {
        self.n() - self.a.rank()
    }
}

/// `t` injected error packets and their transfer matrix.
#[derive(Debug, Clone)]
pub struct ErrorEvent {
    d: MatrixFq,
    z: Vec<ExtElem>,
}

impl ErrorEvent {
    pub fn new(d: MatrixFq, z: Vec<ExtElem>) -> Result<Self> {
        if d.cols() != z.len() {
            return Err(Error::input("error transfer matrix and packets disagree on t"));
        }
        Ok(ErrorEvent { d, z })
    }

    pub fn t(&self) -> usize {
        self.z.len()
    }
}

/// `Y = X·Aᵀ + Z·Dᵀ`.
pub fn transmit(
    field: &FieldParams,
    a: &MatrixFq,
    x: &[ExtElem],
    err: Option<&ErrorEvent>,
) -> Vec<ExtElem> {
    let mut y = linalg::apply_fq_rows(field, a, x);
    if let Some(e) = err {
        if e.t() > 0 {
            assert_eq!(e.d.rows(), a.rows(), "error matrix height mismatch");
            let noise = linalg::apply_fq_rows(field, &e.d, &e.z);
            y = linalg::vec_add(field, &y, &noise);
        }
    }
    y
}

/// A wiretapper's view `W = X·Bᵀ`.
pub fn observe(field: &FieldParams, b: &MatrixFq, x: &[ExtElem]) -> Vec<ExtElem> {
    linalg::apply_fq_rows(field, b, x)
}

/// Observation through a concrete set of links of the GCV list.
pub fn observe_links(
    field: &FieldParams,
    net: &NetworkInstance,
    links: &[usize],
    x: &[ExtElem],
) -> Result<Vec<ExtElem>> {
    let list = net
        .gcv_list()
        .ok_or_else(|| Error::input("network has no GCV list"))?;
    let mut rows = Vec::with_capacity(links.len());
    for &e in links {
        let gcv = list
            .get(e)
            .ok_or_else(|| Error::input(format!("unknown link index {e}")))?;
        rows.push(gcv.clone());
    }
    let b = if rows.is_empty() {
        MatrixFq::zeros(field.p(), 0, net.n())
    } else {
        MatrixFq::from_rows(field.p(), &rows)
    };
    Ok(observe(field, &b, x))
}

/// Budget guard for coset scans: a single-coset scan costs `q^{m·dim C2}`
/// rank computations, an all-coset scan `q^{m·dim C1}`.
fn check_coset_budget(pair: &NestedPair, all_cosets: bool, budget_ops: u64) -> Result<()> {
    let dim = if all_cosets {
        pair.codes().c1().dim()
    } else {
        pair.codes().c2().dim()
    };
    let needed = pair
        .field()
        .order()
        .checked_pow(dim as u32)
        .unwrap_or(u128::MAX);
    if needed > budget_ops as u128 {
        return Err(Error::Budget { needed, budget: budget_ops });
    }
    Ok(())
}

/// Discrepancy `Δ_A(ψ(S), Y)`: the least number of injected packets that
/// turns some member of the coset into `Y`, equal to the least rank
/// distance from the coset's image.
pub fn discrepancy(
    pair: &NestedPair,
    s: &[ExtElem],
    a: &MatrixFq,
    y: &[ExtElem],
    budget_ops: u64,
) -> Result<usize> {
    if y.len() != a.rows() {
        return Err(Error::input("received vector length must equal N"));
    }
    check_coset_budget(pair, false, budget_ops)?;
    let field = pair.field().clone();
    let mut best = usize::MAX;
    for x in pair.coset(s)? {
        let image = linalg::apply_fq_rows(&field, a, &x);
        best = best.min(linalg::rank_fq(&field, &linalg::vec_sub(&field, y, &image)));
    }
    Ok(best)
}

/// `δ_A(ψ(S), ψ(S'))` for distinct cosets, via the coset-difference form.
pub fn delta_distance(
    pair: &NestedPair,
    s: &[ExtElem],
    s_other: &[ExtElem],
    a: &MatrixFq,
    budget_ops: u64,
) -> Result<usize> {
    if s == s_other {
        return Err(Error::input("Δ-distance needs distinct cosets"));
    }
    check_coset_budget(pair, false, budget_ops)?;
    let field = pair.field().clone();
    let diff = linalg::vec_sub(field.as_ref(), s_other, s);
    let rep = pair.coset_representative(&diff)?;
    let mut best = usize::MAX;
    for c in pair.codes().c2().codewords() {
        let w = linalg::vec_add(&field, &rep, &c);
        let image = linalg::apply_fq_rows(&field, a, &w);
        best = best.min(linalg::rank_fq(&field, &image));
    }
    Ok(best)
}

/// Minimum Δ-distance `δ_A(C1/C2)` over all distinct coset pairs,
/// minimized through differences `w ∈ C1 \ C2`.
pub fn delta_min(pair: &NestedPair, a: &MatrixFq, budget_ops: u64) -> Result<usize> {
    check_coset_budget(pair, true, budget_ops)?;
    let field = pair.field().clone();
    let mut best = usize::MAX;
    for w in pair.codes().c1().codewords() {
        if pair.codes().c2().contains(&w) {
            continue;
        }
        let image = linalg::apply_fq_rows(&field, a, &w);
        best = best.min(linalg::rank_fq(&field, &image));
    }
    Ok(best)
}

/// Splits a vector of rank `d` into `u = w + w'` with `rank(w) = i` and
/// `rank(w') = d - i`, through the rank decomposition `u = β·B`.
fn rank_split(field: &FieldParams, u: &[ExtElem], i: usize) -> Vec<ExtElem> {
    let expansion = linalg::expand_matrix(field, u);
    let (basis, d) = expansion.transpose().rref();
    debug_assert!(i <= d);
    // β_j = contract(basis row j); coordinates read off at pivot columns
    let mut pivots = Vec::with_capacity(d);
    for r in 0..d {
        pivots.push((0..field.m()).find(|&c| basis.get(r, c) != 0).unwrap());
    }
    let betas: Vec<ExtElem> = (0..d)
        .map(|r| field.contract(basis.row(r)).expect("basis row fits"))
        .collect();
    let mut w = vec![field.zero(); u.len()];
    for (t, ut) in u.iter().enumerate() {
        let col = field.expand(ut);
        for j in 0..i {
            let c = col[pivots[j]];
            if c != 0 {
                w[t] = field.add(&w[t], &field.scale(c, &betas[j]));
            }
        }
    }
    w
}

/// A received word witnessing that the discrepancy is normal: `Y` with
/// `Δ_A(ψ(S), Y) = i` and `Δ_A(ψ(S'), Y) = δ_A - i`.
pub fn normality_witness(
    pair: &NestedPair,
    s: &[ExtElem],
    s_other: &[ExtElem],
    a: &MatrixFq,
    i: usize,
    budget_ops: u64,
) -> Result<Vec<ExtElem>> {
    if s == s_other {
        return Err(Error::input("witness needs distinct cosets"));
    }
    check_coset_budget(pair, false, budget_ops)?;
    let field = pair.field().clone();
    // minimizing difference w ∈ (S'-S)·M + C2
    let diff = linalg::vec_sub(&field, s_other, s);
    let rep = pair.coset_representative(&diff)?;
    let mut best: Option<(usize, Vec<ExtElem>)> = None;
    for c in pair.codes().c2().codewords() {
        let w = linalg::vec_add(&field, &rep, &c);
        let image = linalg::apply_fq_rows(&field, a, &w);
        let rank = linalg::rank_fq(&field, &image);
        if best.as_ref().is_none_or(|(b, _)| rank < *b) {
            best = Some((rank, image));
        }
    }
    let (delta, u) = best.expect("coset is nonempty");
    if i > delta {
        return Err(Error::input(format!("split index {i} exceeds δ_A = {delta}")));
    }
    let x_bar = pair.coset_representative(s)?;
    let w = rank_split(&field, &u, i);
    let y = linalg::vec_add(&field, &linalg::apply_fq_rows(&field, a, &x_bar), &w);
    // validate through two discrepancy calls
    let di = discrepancy(pair, s, a, &y, budget_ops)?;
    let dj = discrepancy(pair, s_other, a, &y, budget_ops)?;
    if di != i || dj != delta - i {
        return Err(Error::input(format!(
            "witness validation failed: Δ = ({di}, {dj}), wanted ({i}, {})",
            delta - i
        )));
    }
    Ok(y)
}

/// Outcome of minimum-discrepancy decoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeOutcome {
    Decoded(Vec<ExtElem>),
    /// The minimizing discrepancy is attained by several cosets; all tied
    /// messages are listed.
    Ambiguous(Vec<Vec<ExtElem>>),
}

/// Minimum-discrepancy decoding of `Y`: the unique coset minimizing
/// `Δ_A`, or the tied set.
pub fn md_decode(
    pair: &NestedPair,
    a: &MatrixFq,
    y: &[ExtElem],
    budget_ops: u64,
) -> Result<DecodeOutcome> {
    if y.len() != a.rows() {
        return Err(Error::input("received vector length must equal N"));
    }
    check_coset_budget(pair, true, budget_ops)?;
    let field = pair.field().clone();
    let mut best = usize::MAX;
    let mut tied: Vec<Vec<ExtElem>> = Vec::new();
    for s in field.vectors(pair.message_len()) {
        let d = discrepancy(pair, &s, a, y, budget_ops)?;
        if d < best {
            best = d;
            tied.clear();
            tied.push(s);
        } else if d == best {
            tied.push(s);
        }
    }
    if tied.len() == 1 {
        Ok(DecodeOutcome::Decoded(tied.pop().unwrap()))
    } else {
        Ok(DecodeOutcome::Ambiguous(tied))
    }
}

/// `M_{R,1}(C1, C2)`, the universal correction capability measure.
pub fn correction_capability(pair: &NestedPair, budget_ops: u64) -> Result<usize> {
    rparams::rgrw_first_direct(pair.codes(), budget_ops)
}

/// Whether the scheme corrects `t` errors and `ρ` erasures over every
/// transfer matrix: `M_{R,1}(C1, C2) > 2t + ρ`.
pub fn is_universally_correcting(
    pair: &NestedPair,
    t: usize,
    rho: usize,
    budget_ops: u64,
) -> Result<bool> {
    Ok(correction_capability(pair, budget_ops)? > 2 * t + rho)
}

/// Per-network equivocation `θ_μ`: the worst entropy over concrete
/// `μ`-subsets of the listed links, through the closed-form entropy of
/// each observation space. Satisfies `θ_μ >= Θ_μ`.
pub fn network_equivocation(
    pair: &NestedPair,
    net: &NetworkInstance,
    mu: usize,
) -> Result<usize> {
    let list = net
        .gcv_list()
        .ok_or_else(|| Error::input("network has no GCV list"))?;
    if mu > list.len() {
        return Err(Error::input(format!(
            "mu = {mu} exceeds the number of listed links {}",
            list.len()
        )));
    }
    let p = pair.field().p();
    let mut best = pair.message_len();
    for subset in (0..list.len()).combinations(mu) {
        let rows: Vec<Vec<u64>> = subset.iter().map(|&e| list[e].clone()).collect();
        let v = Subspace::from_fq_rows(p, net.n(), &rows);
        best = best.min(security::entropy_formula(pair, &v));
    }
    Ok(best)
}

/// Tally of one exhaustive adversarial sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub trials: u64,
    pub successes: u64,
    pub ambiguous: u64,
    pub failures: u64,
    pub capability: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_witness: Option<SweepWitness>,
}

/// The first decoding failure or ambiguity found by a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepWitness {
    pub a: Vec<Vec<u64>>,
    pub d: Vec<Vec<u64>>,
    pub z: Vec<Vec<u64>>,
    pub s: Vec<Vec<u64>>,
    pub outcome: String,
}

/// Exhaustive decode sweep: every transfer matrix `A ∈ F_q^{N×n}` with
/// `rank A >= n - ρ`, every codeword of every coset, and every error
/// event with exactly `t` columns. `stop_on_witness` ends the sweep at
/// the first non-success.
pub fn exhaustive_decode_sweep(
    pair: &NestedPair,
    incoming: usize,
    t: usize,
    rho: usize,
    budget_ops: u64,
    stop_on_witness: bool,
) -> Result<SweepSummary> {
    let field = pair.field().clone();
    let n = pair.length();
    let p = field.p();
    let a_count: u128 = all_matrices(p, incoming, n)
        .filter(|a| a.rank() + rho >= n)
        .count() as u128;
    let x_count = field.order().checked_pow(pair.codes().c1().dim() as u32);
    let d_count = (p as u128).checked_pow((incoming * t) as u32);
    let z_count = field.order().checked_pow(t as u32);
    let decode_cost = x_count;
    let needed = [Some(a_count), x_count, d_count, z_count, decode_cost]
        .into_iter()
        .try_fold(1u128, |acc, v| v.and_then(|v| acc.checked_mul(v)))
        .unwrap_or(u128::MAX);
    if needed > budget_ops as u128 {
        return Err(Error::Budget { needed, budget: budget_ops });
    }
    let capability = correction_capability(pair, budget_ops)?;
    let mut summary = SweepSummary {
        trials: 0,
        successes: 0,
        ambiguous: 0,
        failures: 0,
        capability,
        first_witness: None,
    };
    for a in all_matrices(p, incoming, n) {
        if a.rank() + rho < n {
            continue;
        }
        for s in field.vectors(pair.message_len()) {
            for x in pair.coset(&s)? {
                for d in all_matrices(p, incoming, t) {
                    for z in field.vectors(t) {
                        let err = ErrorEvent::new(d.clone(), z.clone())?;
                        let y = transmit(&field, &a, &x, Some(&err));
                        let outcome = md_decode(pair, &a, &y, budget_ops)?;
                        summary.trials += 1;
                        let label = match &outcome {
                            DecodeOutcome::Decoded(got) if got == &s => {
                                summary.successes += 1;
                                None
                            }
                            DecodeOutcome::Decoded(_) => {
                                summary.failures += 1;
                                Some("wrong_message")
                            }
                            DecodeOutcome::Ambiguous(_) => {
                                summary.ambiguous += 1;
                                Some("ambiguous")
                            }
                        };
                        if let Some(outcome) = label {
                            if summary.first_witness.is_none() {
                                summary.first_witness = Some(SweepWitness {
                                    a: a.to_rows(),
                                    d: d.to_rows(),
                                    z: z.iter().map(|e| e.coeffs().to_vec()).collect(),
                                    s: s.iter().map(|e| e.coeffs().to_vec()).collect(),
                                    outcome: outcome.to_string(),
                                });
                            }
                            if stop_on_witness {
                                return Ok(summary);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(summary)
}
