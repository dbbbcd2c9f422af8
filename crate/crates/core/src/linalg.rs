//! Exact matrix algebra over `F_q` and `F_{q^m}`, plus the subspace
//! machinery the parameter scans need: rank over `F_q` of extension
//! vectors, Galois closure, and enumeration of the Frobenius-invariant
//! family `Γ(F_{q^m}^n)` by dimension.
//!
//! `F_q`-rational subspaces are represented canonically by their reduced
//! row-echelon basis over `F_q`, so equal row spaces compare equal.

use std::fmt;
use std::sync::Arc;

use crate::fields::{ExtElem, FieldParams};

/// Dense matrix over the base field `F_p`, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixFq {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for MatrixFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatrixFq {}x{} mod {}", self.rows, self.cols, self.p)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime and small; Fermat
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

impl MatrixFq {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        MatrixFq { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(p: u64, rows: &[Vec<u64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let data = rows.iter().flatten().map(|&x| x % p).collect();
        MatrixFq { p, rows: rows.len(), cols, data }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn stack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "column mismatch");
        assert_eq!(self.p, other.p);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        MatrixFq { p: self.p, rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.p, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let v = (out.get(r, c) + a * other.get(k, c)) % self.p;
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    /// In-place Gauss-Jordan; returns the rank. The result is the unique
    /// reduced row-echelon form of the row space (zero rows at the bottom).
    pub fn rref_in_place(&mut self) -> usize {
        let p = self.p;
        let mut pivot_row = 0;
        for col in 0..self.cols {
            let Some(sel) =
                (pivot_row..self.rows).find(|&r| self.get(r, col) != 0)
            else {
                continue;
            };
            self.swap_rows(sel, pivot_row);
            let inv = inv_mod(self.get(pivot_row, col), p);
            for c in col..self.cols {
                let v = self.get(pivot_row, c) * inv % p;
                self.set(pivot_row, c, v);
            }
            for r in 0..self.rows {
                if r != pivot_row && self.get(r, col) != 0 {
                    let factor = self.get(r, col);
                    for c in col..self.cols {
                        let v =
                            (self.get(r, c) + (p - factor) * self.get(pivot_row, c)) % p;
                        self.set(r, c, v);
                    }
                }
            }
            pivot_row += 1;
            if pivot_row == self.rows {
                break;
            }
        }
        pivot_row
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            let (x, y) = (self.get(a, c), self.get(b, c));
            self.set(a, c, y);
            self.set(b, c, x);
        }
    }

    pub fn rref(&self) -> (Self, usize) {
        let mut m = self.clone();
        let rank = m.rref_in_place();
        (m, rank)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Basis of the right kernel `{v : M vᵀ = 0}` as canonical RREF rows.
    pub fn kernel(&self) -> MatrixFq {
        let (r, rank) = self.rref();
        let mut pivots = Vec::with_capacity(rank);
        for row in 0..rank {
            let col = (0..r.cols).find(|&c| r.get(row, c) != 0).unwrap();
            pivots.push(col);
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = (self.p - r.get(row, free)) % self.p;
            }
            basis.push(v);
        }
        let mut k = MatrixFq::from_rows(self.p, &basis);
        if basis.is_empty() {
            k = MatrixFq::zeros(self.p, 0, self.cols);
        }
        k.rref_in_place();
        k
    }

    /// Drops zero rows; assumes the matrix is already in RREF.
    fn trim_zero_rows(mut self, rank: usize) -> Self {
        self.data.truncate(rank * self.cols);
        self.rows = rank;
        self
    }
}

/// Dense matrix over `F_{q^m}`, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct MatrixFqm {
    field: Arc<FieldParams>,
    rows: usize,
    cols: usize,
    data: Vec<ExtElem>,
}

impl fmt::Debug for MatrixFqm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatrixFqm {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl MatrixFqm {
    pub fn zeros(field: Arc<FieldParams>, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        MatrixFqm { field, rows, cols, data }
    }

    pub fn identity(field: Arc<FieldParams>, n: usize) -> Self {
        let mut m = Self::zeros(field.clone(), n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: Arc<FieldParams>, rows: &[Vec<ExtElem>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let data = rows.iter().flatten().cloned().collect();
        MatrixFqm { field, rows: rows.len(), cols, data }
    }

    /// Embeds a base-field matrix entrywise.
    pub fn lift(field: Arc<FieldParams>, m: &MatrixFq) -> Self {
        let rows: Vec<Vec<ExtElem>> = (0..m.rows())
            .map(|r| m.row(r).iter().map(|&c| field.from_base(c)).collect())
            .collect();
        if rows.is_empty() {
            return Self::zeros(field, 0, m.cols());
        }
        Self::from_rows(field, &rows)
    }

    pub fn field(&self) -> &Arc<FieldParams> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &ExtElem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: ExtElem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[ExtElem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<ExtElem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn stack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        MatrixFqm {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn rref_in_place(&mut self) -> usize {
        let field = self.field.clone();
        let mut pivot_row = 0;
        for col in 0..self.cols {
            let Some(sel) =
                (pivot_row..self.rows).find(|&r| !self.get(r, col).is_zero())
            else {
                continue;
            };
            self.swap_rows(sel, pivot_row);
            let inv = field.inv(self.get(pivot_row, col)).expect("pivot nonzero");
            for c in col..self.cols {
                let v = field.mul(self.get(pivot_row, c), &inv);
                self.set(pivot_row, c, v);
            }
            for r in 0..self.rows {
                if r != pivot_row && !self.get(r, col).is_zero() {
                    let factor = self.get(r, col).clone();
                    for c in col..self.cols {
                        let v = field.sub(
                            self.get(r, c),
                            &field.mul(&factor, self.get(pivot_row, c)),
                        );
                        self.set(r, c, v);
                    }
                }
            }
            pivot_row += 1;
            if pivot_row == self.rows {
                break;
            }
        }
        pivot_row
    }

    pub fn rref(&self) -> (Self, usize) {
        let mut m = self.clone();
        let rank = m.rref_in_place();
        (m, rank)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// RREF with zero rows removed: the canonical basis of the row space.
    pub fn row_space_basis(&self) -> Self {
        let (mut m, rank) = self.rref();
        m.data.truncate(rank * m.cols);
        m.rows = rank;
        m
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Basis of the right kernel `{v : M vᵀ = 0}` in canonical RREF form.
    pub fn kernel(&self) -> MatrixFqm {
        let field = self.field.clone();
        let (r, rank) = self.rref();
        let mut pivots = Vec::with_capacity(rank);
        for row in 0..rank {
            let col = (0..r.cols).find(|&c| !r.get(row, c).is_zero()).unwrap();
            pivots.push(col);
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![field.zero(); self.cols];
            v[free] = field.one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(r.get(row, free));
            }
            basis.push(v);
        }
        if basis.is_empty() {
            return MatrixFqm::zeros(field, 0, self.cols);
        }
        let mut k = MatrixFqm::from_rows(field, &basis);
        k.rref_in_place();
        k
    }

    /// `x · Mᵀ` for a row vector `x` of length `cols` over `F_q` entries
    /// lifted from `b`: returns the length-`rows` product when `self` is
    /// used as the coefficient matrix.
    pub fn mul_row(&self, x: &[ExtElem]) -> Vec<ExtElem> {
        assert_eq!(x.len(), self.rows, "dimension mismatch");
        let field = &self.field;
        let mut out = vec![field.zero(); self.cols];
        for (r, coeff) in x.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            for (c, slot) in out.iter_mut().enumerate() {
                let term = field.mul(coeff, self.get(r, c));
                *slot = field.add(slot, &term);
            }
        }
        out
    }
}

/// Solves `w · M = x` for a row vector `w`; `None` when `x` is outside the
/// row space. Free variables are set to zero, so the solution is unique
/// exactly when `M` has full row rank.
pub fn solve_left(m: &MatrixFqm, x: &[ExtElem]) -> Option<Vec<ExtElem>> {
    assert_eq!(x.len(), m.cols(), "dimension mismatch");
    let field = m.field().clone();
    // augmented system Mᵀ wᵀ = xᵀ
    let mut aug = MatrixFqm::zeros(field.clone(), m.cols(), m.rows() + 1);
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            aug.set(c, r, m.get(r, c).clone());
        }
    }
    for (c, xc) in x.iter().enumerate() {
        aug.set(c, m.rows(), xc.clone());
    }
    aug.rref_in_place();
    let mut w = vec![field.zero(); m.rows()];
    for r in 0..aug.rows() {
        let Some(pivot) = (0..aug.cols()).find(|&c| !aug.get(r, c).is_zero()) else {
            continue;
        };
        if pivot == m.rows() {
            return None; // inconsistent
        }
        w[pivot] = aug.get(r, m.rows()).clone();
    }
    Some(w)
}

// ---------------------------------------------------------------------------
// vectors over F_{q^m}

pub fn vec_add(field: &FieldParams, x: &[ExtElem], y: &[ExtElem]) -> Vec<ExtElem> {
    assert_eq!(x.len(), y.len(), "length mismatch");
    x.iter().zip(y).map(|(a, b)| field.add(a, b)).collect()
}

pub fn vec_sub(field: &FieldParams, x: &[ExtElem], y: &[ExtElem]) -> Vec<ExtElem> {
    assert_eq!(x.len(), y.len(), "length mismatch");
    x.iter().zip(y).map(|(a, b)| field.sub(a, b)).collect()
}

pub fn vec_is_zero(x: &[ExtElem]) -> bool {
    x.iter().all(ExtElem::is_zero)
}

/// The `m × n` expansion of a vector: column `j` is `φ_m(x_j)`.
pub fn expand_matrix(field: &FieldParams, x: &[ExtElem]) -> MatrixFq {
    let mut m = MatrixFq::zeros(field.p(), field.m(), x.len());
    for (j, e) in x.iter().enumerate() {
        for (t, &c) in field.expand(e).iter().enumerate() {
            m.set(t, j, c);
        }
    }
    m
}

/// Rank over `F_q` of the expansion of `x`.
pub fn rank_fq(field: &FieldParams, x: &[ExtElem]) -> usize {
    expand_matrix(field, x).rank()
}

/// Rank distance `d_R(x, y) = rank_fq(y - x)`.
pub fn rank_distance(field: &FieldParams, x: &[ExtElem], y: &[ExtElem]) -> usize {
    rank_fq(field, &vec_sub(field, y, x))
}

/// `x · Bᵀ` for a base-field matrix `B`: the observation of `x` through
/// `B`'s rows, one extension symbol per row.
pub fn apply_fq_rows(field: &FieldParams, b: &MatrixFq, x: &[ExtElem]) -> Vec<ExtElem> {
    assert_eq!(b.cols(), x.len(), "dimension mismatch");
    (0..b.rows())
        .map(|i| {
            let mut acc = field.zero();
            for (j, e) in x.iter().enumerate() {
                let c = b.get(i, j);
                if c != 0 {
                    acc = field.add(&acc, &field.scale(c, e));
                }
            }
            acc
        })
        .collect()
}

/// Dimension over `F_{q^m}` of the intersection of two row spaces with the
/// same ambient length, via `dim U + dim V - dim(U + V)`.
pub fn intersect_dim(u: &MatrixFqm, v: &MatrixFqm) -> usize {
    assert_eq!(u.cols(), v.cols(), "ambient mismatch");
    let ru = u.rank();
    let rv = v.rank();
    let rsum = u.stack(v).rank();
    ru + rv - rsum
}

// ---------------------------------------------------------------------------
// F_q-rational subspaces

/// An `F_q`-rational subspace of `F_{q^m}^n` (member of `Γ(F_{q^m}^n)`),
/// stored as its canonical RREF basis over `F_q`. The represented object
/// is the `F_{q^m}`-span of the basis rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: MatrixFq,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace dim {} of n={}: {:?}", self.dim(), self.ambient, self.basis)
    }
}

impl Subspace {
    pub fn from_fq_rows(p: u64, ambient: usize, rows: &[Vec<u64>]) -> Self {
        if rows.is_empty() {
            return Subspace { ambient, basis: MatrixFq::zeros(p, 0, ambient) };
        }
        let mut m = MatrixFq::from_rows(p, rows);
        let rank = m.rref_in_place();
        Subspace { ambient, basis: m.trim_zero_rows(rank) }
    }

    fn from_rref(ambient: usize, basis: MatrixFq) -> Self {
        Subspace { ambient, basis }
    }

    pub fn zero(p: u64, ambient: usize) -> Self {
        Subspace { ambient, basis: MatrixFq::zeros(p, 0, ambient) }
    }

    pub fn full(p: u64, ambient: usize) -> Self {
        Subspace { ambient, basis: MatrixFq::identity(p, ambient) }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &MatrixFq {
        &self.basis
    }

    /// The basis lifted to `F_{q^m}` rows.
    pub fn lift(&self, field: Arc<FieldParams>) -> MatrixFqm {
        MatrixFqm::lift(field, &self.basis)
    }
}

/// Galois closure `V* = Σ_i V^{q^i}`: the smallest Frobenius-invariant
/// subspace containing the span of `rows`, returned through its `F_q`
/// basis.
pub fn galois_closure(field: &Arc<FieldParams>, rows: &[Vec<ExtElem>]) -> Subspace {
    let n = rows.first().map_or(0, Vec::len);
    let mut all = Vec::new();
    for row in rows {
        for i in 0..field.m() {
            all.push(row.iter().map(|e| field.frobenius(e, i)).collect::<Vec<_>>());
        }
    }
    if all.is_empty() {
        return Subspace::zero(field.p(), n);
    }
    let span = MatrixFqm::from_rows(field.clone(), &all).row_space_basis();
    let sub = fq_rational_basis(&span);
    debug_assert_eq!(sub.dim(), span.rows(), "closure must be F_q-rational");
    sub
}

/// The `F_q`-rational vectors inside a row space, as a canonical Subspace.
/// For Frobenius-invariant spans this is a full `F_q`-basis of the span.
pub fn fq_rational_basis(span: &MatrixFqm) -> Subspace {
    let field = span.field().clone();
    let n = span.cols();
    let h = span.kernel();
    // v in span  ⟺  v·hᵀ = 0 for every kernel row h; expand over F_p
    let mut constraints = MatrixFq::zeros(field.p(), h.rows() * field.m(), n);
    for r in 0..h.rows() {
        for j in 0..n {
            let col = field.expand(h.get(r, j));
            for (t, &c) in col.iter().enumerate() {
                constraints.set(r * field.m() + t, j, c);
            }
        }
    }
    let kernel = constraints.kernel();
    Subspace::from_fq_rows(field.p(), n, &kernel.to_rows())
}

/// Whether the span of `rows` equals its own Frobenius image.
pub fn is_galois_invariant(field: &Arc<FieldParams>, rows: &[Vec<ExtElem>]) -> bool {
    if rows.is_empty() {
        return true;
    }
    let span = MatrixFqm::from_rows(field.clone(), rows).row_space_basis();
    let image_rows: Vec<Vec<ExtElem>> = rows
        .iter()
        .map(|r| r.iter().map(|e| field.frobenius(e, 1)).collect())
        .collect();
    let image = MatrixFqm::from_rows(field.clone(), &image_rows).row_space_basis();
    span == image
}

// ---------------------------------------------------------------------------
// enumeration of Γ_i and friends

/// Gaussian binomial `[n choose i]_q`; `None` on u128 overflow.
pub fn gaussian_binomial(q: u64, n: usize, i: usize) -> Option<u128> {
    if i > n {
        return Some(0);
    }
    let mut num = 1u128;
    let mut den = 1u128;
    let q = q as u128;
    for j in 0..i {
        let qn = q.checked_pow((n - j) as u32)?;
        let qi = q.checked_pow((j + 1) as u32)?;
        num = num.checked_mul(qn - 1)?;
        den = den.checked_mul(qi - 1)?;
    }
    Some(num / den)
}

/// Iterator over all `i`-dimensional members of `Γ(F_{q^m}^n)` as
/// canonical RREF matrices over `F_q`, ordered by lexicographic pivot
/// set, then lexicographic free entries. Supports range slicing so scans
/// can be partitioned deterministically.
pub struct GammaIter {
    p: u64,
    n: usize,
    dim: usize,
    pivots: Vec<usize>,
    free_values: Vec<u64>,
    started: bool,
    finished: bool,
}

impl GammaIter {
    pub fn new(p: u64, n: usize, dim: usize) -> Self {
        let finished = dim > n;
        GammaIter {
            p,
            n,
            dim,
            pivots: (0..dim).collect(),
            free_values: Vec::new(),
            started: false,
            finished,
        }
    }

    /// Starts at global index `start` in enumeration order.
    pub fn new_at(p: u64, n: usize, dim: usize, start: u128) -> Self {
        let mut it = Self::new(p, n, dim);
        if it.finished {
            return it;
        }
        let mut remaining = start;
        loop {
            let free = free_positions(&it.pivots, it.n).len() as u32;
            let block = (p as u128).pow(free);
            if remaining < block {
                it.free_values = vec![0; free as usize];
                let mut idx = remaining;
                for v in it.free_values.iter_mut() {
                    *v = (idx % p as u128) as u64;
                    idx /= p as u128;
                }
                return it;
            }
            remaining -= block;
            if !next_combination(&mut it.pivots, it.n) {
                it.finished = true;
                return it;
            }
        }
    }

    fn current(&self) -> Subspace {
        let free = free_positions(&self.pivots, self.n);
        let mut m = MatrixFq::zeros(self.p, self.dim, self.n);
        for (r, &c) in self.pivots.iter().enumerate() {
            m.set(r, c, 1);
        }
        for (&(r, c), &v) in free.iter().zip(&self.free_values) {
            m.set(r, c, v);
        }
        Subspace::from_rref(self.n, m)
    }
}

fn free_positions(pivots: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (r, &pc) in pivots.iter().enumerate() {
        for c in pc + 1..n {
            if !pivots.contains(&c) {
                out.push((r, c));
            }
        }
    }
    out
}

fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let k = comb.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if comb[i] < n - k + i {
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

impl Iterator for GammaIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if self.finished {
            return None;
        }
        if !self.started {
            self.started = true;
            if self.free_values.is_empty() {
                self.free_values = vec![0; free_positions(&self.pivots, self.n).len()];
            }
            return Some(self.current());
        }
        // advance free-entry odometer (first position fastest)
        let mut i = 0;
        loop {
            if i == self.free_values.len() {
                // block exhausted: next pivot set
                if !next_combination(&mut self.pivots, self.n) {
                    self.finished = true;
                    return None;
                }
                self.free_values = vec![0; free_positions(&self.pivots, self.n).len()];
                return Some(self.current());
            }
            self.free_values[i] += 1;
            if self.free_values[i] < self.p {
                break;
            }
            self.free_values[i] = 0;
            i += 1;
        }
        Some(self.current())
    }
}

/// All members of `Γ(F_{q^m}^n)` of dimension exactly `dim`.
pub fn enumerate_gamma(p: u64, n: usize, dim: usize) -> GammaIter {
    GammaIter::new(p, n, dim)
}

/// Disjoint, union-complete, order-preserving partitions of `Γ_dim` for
/// parallel scans.
pub fn gamma_partitions(
    p: u64,
    n: usize,
    dim: usize,
    parts: usize,
) -> Vec<impl Iterator<Item = Subspace>> {
    let total = gaussian_binomial(p, n, dim).expect("count overflow");
    let parts = parts.max(1) as u128;
    let chunk = total.div_ceil(parts);
    let mut out = Vec::new();
    let mut start = 0u128;
    while start < total {
        let len = chunk.min(total - start);
        out.push(GammaIter::new_at(p, n, dim, start).take(len as usize));
        start += len;
    }
    out
}

/// Odometer over all matrices in `F_p^{rows×cols}`, row-major entries,
/// first entry fastest.
pub fn all_matrices(p: u64, rows: usize, cols: usize) -> impl Iterator<Item = MatrixFq> {
    let len = rows * cols;
    let mut state = vec![0u64; len];
    let mut done = false;
    let mut started = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        if started {
            let mut i = 0;
            loop {
                if i == len {
                    done = true;
                    return None;
                }
                state[i] += 1;
                if state[i] < p {
                    break;
                }
                state[i] = 0;
                i += 1;
            }
        }
        started = true;
        let mut m = MatrixFq::zeros(p, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, state[r * cols + c]);
            }
        }
        Some(m)
    })
}
