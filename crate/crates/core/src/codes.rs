//! Linear codes over `F_{q^m}`: canonical generators, duals, Gabidulin
//! (MRD) construction, puncturing/shortening, subfield subcodes, and
//! exhaustive minimum rank distance.
//!
//! Codes are stored by the canonical RREF generator, so two equal codes
//! have identical representations and `==` is code equality.

use std::sync::Arc;

use crate::fields::{ExtElem, FieldParams};
use crate::linalg::{self, MatrixFq, MatrixFqm};
use crate::{Error, Result};

/// An `[n, k]` linear code over `F_{q^m}`, `k` possibly zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    field: Arc<FieldParams>,
    n: usize,
    gen: MatrixFqm,
}

impl LinearCode {
    /// Builds the code spanned by `rows`; the generator is canonicalized
    /// and dependent rows are dropped.
    pub fn from_rows(field: Arc<FieldParams>, n: usize, rows: &[Vec<ExtElem>]) -> Result<Self> {
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::input("generator row length does not match n"));
        }
        let gen = if rows.is_empty() {
            MatrixFqm::zeros(field.clone(), 0, n)
        } else {
            MatrixFqm::from_rows(field.clone(), rows).row_space_basis()
        };
        Ok(LinearCode { field, n, gen })
    }

    pub fn zero(field: Arc<FieldParams>, n: usize) -> Self {
        let gen = MatrixFqm::zeros(field.clone(), 0, n);
        LinearCode { field, n, gen }
    }

    pub fn full(field: Arc<FieldParams>, n: usize) -> Self {
        let gen = MatrixFqm::identity(field.clone(), n);
        LinearCode { field, n, gen }
    }

    pub fn field(&self) -> &Arc<FieldParams> {
        &self.field
    }

    pub fn length(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.gen.rows()
    }

    pub fn generator(&self) -> &MatrixFqm {
        &self.gen
    }

    pub fn contains(&self, x: &[ExtElem]) -> bool {
        if x.len() != self.n {
            return false;
        }
        if self.dim() == 0 {
            return linalg::vec_is_zero(x);
        }
        linalg::solve_left(&self.gen, x).is_some()
    }

    pub fn is_subcode_of(&self, other: &LinearCode) -> bool {
        self.n == other.n
            && self.dim() <= other.dim()
            && self.gen.to_rows().iter().all(|r| other.contains(r))
    }

    /// The dual code: `G·Hᵀ = 0`, `dim + dim⊥ = n`.
    pub fn dual(&self) -> LinearCode {
        let h = self.gen.kernel();
        LinearCode { field: self.field.clone(), n: self.n, gen: h }
    }

    /// Gabidulin code with generator rows `[g_j^{q^{i-1}}]`. `g` defaults
    /// to the polynomial-basis prefix `[1, α, ..., α^{n-1}]`. Requires
    /// `m >= n`, `k <= n`, and `g` of full rank over `F_q`.
    pub fn gabidulin(
        field: Arc<FieldParams>,
        n: usize,
        k: usize,
        g: Option<&[ExtElem]>,
    ) -> Result<LinearCode> {
        if field.m() < n {
            return Err(Error::input(format!(
                "gabidulin needs m >= n, got m = {}, n = {}",
                field.m(),
                n
            )));
        }
        if k > n {
            return Err(Error::input("gabidulin needs k <= n"));
        }
        let g: Vec<ExtElem> = match g {
            Some(v) => {
                if v.len() != n {
                    return Err(Error::input("g must have length n"));
                }
                v.to_vec()
            }
            None => {
                let alpha = field.gen();
                (0..n).map(|j| field.pow(&alpha, j as u128)).collect()
            }
        };
        if linalg::rank_fq(&field, &g) != n {
            return Err(Error::input("components of g must be F_q-independent"));
        }
        let rows: Vec<Vec<ExtElem>> = (0..k)
            .map(|i| g.iter().map(|gj| field.frobenius(gj, i)).collect())
            .collect();
        LinearCode::from_rows(field, n, &rows)
    }

    /// All `q^{mk}` codewords, message-vector odometer order.
    pub fn codewords(&self) -> impl Iterator<Item = Vec<ExtElem>> + '_ {
        self.field
            .vectors(self.dim())
            .map(move |u| self.gen.mul_row(&u))
    }

    /// Number of codewords as u128, `None` on overflow.
    pub fn codeword_count(&self) -> Option<u128> {
        (self.field.order()).checked_pow(self.dim() as u32)
    }

    /// Exhaustive minimum rank distance over all nonzero codewords.
    pub fn min_rank_distance(&self, budget_ops: u64) -> Result<usize> {
        if self.dim() == 0 {
            return Err(Error::input("minimum distance of the zero code is undefined"));
        }
        let count = self.codeword_count().unwrap_or(u128::MAX);
        if count > budget_ops as u128 {
            return Err(Error::Budget { needed: count, budget: budget_ops });
        }
        let mut best = usize::MAX;
        for w in self.codewords() {
            if linalg::vec_is_zero(&w) {
                continue;
            }
            best = best.min(linalg::rank_fq(&self.field, &w));
        }
        Ok(best)
    }

    /// Singleton-type bound on the minimum rank distance, as an exact
    /// rational `min{1, m/n}·(n - k) + 1`.
    pub fn singleton_rank_bound(&self) -> Rational {
        let m = self.field.m();
        let n = self.n;
        let k = self.dim();
        if m >= n {
            Rational::new(((n - k) + 1) as u128, 1)
        } else {
            Rational::new((m * (n - k) + n) as u128, n as u128)
        }
    }

    /// Whether the code attains the Singleton-type bound exactly.
    pub fn is_mrd(&self, budget_ops: u64) -> Result<bool> {
        let d = self.min_rank_distance(budget_ops)?;
        Ok(self.singleton_rank_bound().eq_int(d as u128))
    }

    /// Projection of every codeword onto the coordinates in `keep`
    /// (0-based, strictly increasing).
    pub fn puncture(&self, keep: &[usize]) -> Result<LinearCode> {
        check_index_set(keep, self.n)?;
        let rows: Vec<Vec<ExtElem>> = self
            .gen
            .to_rows()
            .iter()
            .map(|r| keep.iter().map(|&j| r[j].clone()).collect())
            .collect();
        LinearCode::from_rows(self.field.clone(), keep.len(), &rows)
    }

    /// Projection onto `keep` of the subcode vanishing outside `keep`.
    pub fn shorten(&self, keep: &[usize]) -> Result<LinearCode> {
        check_index_set(keep, self.n)?;
        let outside: Vec<usize> = (0..self.n).filter(|j| !keep.contains(j)).collect();
        if outside.is_empty() {
            return self.puncture(keep);
        }
        // messages u with (u·G) zero outside `keep`: kernel of G restricted
        // to the outside columns
        let mut restricted = MatrixFqm::zeros(self.field.clone(), outside.len(), self.dim());
        for (c, &j) in outside.iter().enumerate() {
            for r in 0..self.dim() {
                restricted.set(c, r, self.gen.get(r, j).clone());
            }
        }
        let messages = restricted.kernel();
        let rows: Vec<Vec<ExtElem>> = (0..messages.rows())
            .map(|i| {
                let cw = self.gen.mul_row(messages.row(i));
                keep.iter().map(|&j| cw[j].clone()).collect()
            })
            .collect();
        LinearCode::from_rows(self.field.clone(), keep.len(), &rows)
    }

    /// `F_q`-basis of `C ∩ F_q^n` as canonical RREF rows over `F_q`.
    pub fn subfield_subcode(&self) -> MatrixFq {
        let span = linalg::fq_rational_basis(&self.gen);
        span.basis().clone()
    }
}

fn check_index_set(keep: &[usize], n: usize) -> Result<()> {
    if keep.is_empty() {
        return Err(Error::input("index set must be nonempty"));
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&j| j >= n) {
        return Err(Error::input("index set must be strictly increasing and within 0..n"));
    }
    Ok(())
}

/// Exact nonnegative rational for Singleton-type bound comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rational {
    num: u128,
    den: u128,
}

impl Rational {
    pub fn new(num: u128, den: u128) -> Self {
        assert!(den != 0);
        let g = gcd(num.max(1), den);
        Rational { num: num / g, den: den / g }
    }

    pub fn num(&self) -> u128 {
        self.num
    }

    pub fn den(&self) -> u128 {
        self.den
    }

    pub fn eq_int(&self, v: u128) -> bool {
        self.den == 1 && self.num == v
    }

    pub fn ge_int(&self, v: u128) -> bool {
        self.num >= v * self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A strictly nested pair `C2 ⊊ C1`, validated at construction. Every
/// relative-parameter computation takes one of these.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestedCodes {
    c1: LinearCode,
    c2: LinearCode,
}

impl NestedCodes {
    pub fn new(c1: LinearCode, c2: LinearCode) -> Result<Self> {
        if c1.length() != c2.length() || c1.field() != c2.field() {
            return Err(Error::NotNested);
        }
        if c2.dim() >= c1.dim() || !c2.is_subcode_of(&c1) {
            return Err(Error::NotNested);
        }
        Ok(NestedCodes { c1, c2 })
    }

    pub fn c1(&self) -> &LinearCode {
        &self.c1
    }

    pub fn c2(&self) -> &LinearCode {
        &self.c2
    }

    pub fn field(&self) -> &Arc<FieldParams> {
        self.c1.field()
    }

    pub fn length(&self) -> usize {
        self.c1.length()
    }

    /// `dim(C1/C2)`.
    pub fn quotient_dim(&self) -> usize {
        self.c1.dim() - self.c2.dim()
    }

    /// The dual pair `(C2⊥, C1⊥)`, nested since `C1⊥ ⊊ C2⊥`.
    pub fn dual_pair(&self) -> NestedCodes {
        NestedCodes { c1: self.c2.dual(), c2: self.c1.dual() }
    }
}
