//! Exact support weights, minimum distance, and generalized Hamming weights
//! by exhaustive canonical-subspace enumeration.
//!
//! Every r-dimensional subspace of F_q^k has exactly one basis in reduced
//! row-echelon form, so enumerating RREF profiles (a pivot-column choice plus
//! free entries) visits each subspace once; the total is the Gaussian
//! binomial [k choose r]_q. The searches below walk that space with
//! incremental row updates: bumping one free entry adds a single generator
//! row to one basis vector, and after q bumps the row is restored because the
//! characteristic divides q.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::bounds::{ghw_formula, FormulaResult, FormulaStatus};
use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::linalg::{rref, Matrix};
use crate::poly::combinations;

/// Number of r-dimensional subspaces of F_q^k; `None` on u128 overflow.
pub fn gaussian_binomial(k: usize, r: usize, q: u64) -> Option<u128> {
    if r > k {
        return Some(0);
    }
    let q = q as u128;
    let mut acc: u128 = 1;
    for i in 0..r {
        let num = q.checked_pow((k - i) as u32)?.checked_sub(1)?;
        let den = q.checked_pow((i + 1) as u32)? - 1;
        acc = acc.checked_mul(num)? / den;
    }
    Some(acc)
}

/// Search limits shared by the exhaustive operations.
#[derive(Debug, Clone, Copy)]
pub struct SearchOpts {
    /// Upper bound on the number of enumerated candidates.
    pub budget: u128,
    /// Worker threads; results are identical for any value.
    pub threads: usize,
}

pub const DEFAULT_SEARCH_BUDGET: u128 = 100_000_000;

impl Default for SearchOpts {
    fn default() -> Self {
        SearchOpts {
            budget: DEFAULT_SEARCH_BUDGET,
            threads: 1,
        }
    }
}

// --- fast row arithmetic on integer reps -------------------------------------

/// Elementwise field addition on rep vectors, specialized per field class.
enum AddKernel {
    /// Prime fields: add with a conditional subtract.
    Prime(u32),
    /// Characteristic-2 extensions: reps add as XOR.
    Xor,
    /// Odd-characteristic extensions: per-element field calls.
    Generic(std::sync::Arc<FieldSpec>),
}

impl AddKernel {
    fn for_field(fs: &std::sync::Arc<FieldSpec>) -> AddKernel {
        if fs.extension_degree() == 1 {
            AddKernel::Prime(fs.characteristic())
        } else if fs.characteristic() == 2 {
            AddKernel::Xor
        } else {
            AddKernel::Generic(fs.clone())
        }
    }

    #[inline]
    fn add_row(&self, dst: &mut [u16], src: &[u16]) {
        match self {
            AddKernel::Prime(p) => {
                let p = *p;
                for (d, &s) in dst.iter_mut().zip(src) {
                    let t = *d as u32 + s as u32;
                    *d = if t >= p { (t - p) as u16 } else { t as u16 };
                }
            }
            AddKernel::Xor => {
                for (d, &s) in dst.iter_mut().zip(src) {
                    *d ^= s;
                }
            }
            AddKernel::Generic(fs) => {
                for (d, &s) in dst.iter_mut().zip(src) {
                    *d = fs.add(FieldElement(*d as u32), FieldElement(s as u32)).rep() as u16;
                }
            }
        }
    }
}

/// Generator rows as u16 reps plus every scalar multiple of every row.
struct ScaledRows {
    q: usize,
    /// scaled[j * q + v] = v * row_j
    scaled: Vec<Vec<u16>>,
}

impl ScaledRows {
    fn new(code: &LinearCode) -> ScaledRows {
        let fs = code.field();
        let q = fs.q() as usize;
        let k = code.dimension();
        let mut scaled = Vec::with_capacity(k * q);
        for j in 0..k {
            let row = code.generator().row(j);
            for v in 0..q {
                let vv = FieldElement(v as u32);
                scaled.push(
                    row.iter()
                        .map(|&e| fs.mul(e, vv).rep() as u16)
                        .collect::<Vec<u16>>(),
                );
            }
        }
        ScaledRows { q, scaled }
    }

    #[inline]
    fn row(&self, j: usize, v: usize) -> &[u16] {
        &self.scaled[j * self.q + v]
    }

    #[inline]
    fn unit_row(&self, j: usize) -> &[u16] {
        self.row(j, 1)
    }
}

/// Free coordinates of the RREF profile for a pivot-column set: position
/// (i, j) is row i, column j with j > pivots[i] and j not a pivot.
fn free_positions(pivots: &[usize], k: usize) -> Vec<(usize, usize)> {
    let mut free = Vec::new();
    for (i, &p) in pivots.iter().enumerate() {
        for j in p + 1..k {
            if !pivots.contains(&j) {
                free.push((i, j));
            }
        }
    }
    free
}

/// Counts nonzero columns across `rows`, giving up (returns `None`) as soon
/// as the count reaches `cap` since such a subspace cannot improve the min.
#[inline]
fn support_capped(rows: &[Vec<u16>], n: usize, cap: u64) -> Option<u64> {
    let mut cnt = 0u64;
    if rows.len() == 1 {
        // Chunked so the nonzero test vectorizes.
        for chunk in rows[0].chunks(64) {
            cnt += chunk.iter().filter(|&&x| x != 0).count() as u64;
            if cnt >= cap {
                return None;
            }
        }
        return Some(cnt);
    }
    for c in 0..n {
        if rows.iter().any(|r| r[c] != 0) {
            cnt += 1;
            if cnt >= cap {
                return None;
            }
        }
    }
    Some(cnt)
}

/// One work item: a pivot set, with the first free entry optionally pinned.
struct Task {
    pivots: Vec<usize>,
    first_val: Option<usize>,
}

fn build_tasks(k: usize, r: usize, q: usize) -> Vec<Task> {
    let mut tasks = Vec::new();
    for pivots in combinations(k, r) {
        let free = free_positions(&pivots, k);
        if free.is_empty() {
            tasks.push(Task {
                pivots,
                first_val: None,
            });
        } else {
            for v in 0..q {
                tasks.push(Task {
                    pivots: pivots.clone(),
                    first_val: Some(v),
                });
            }
        }
    }
    tasks
}

/// Depth-first walk over the remaining free entries with in-place row
/// updates; calls `leaf` on every completed assignment.
fn dfs_free(
    rows_cur: &mut [Vec<u16>],
    free: &[(usize, usize)],
    idx: usize,
    q: usize,
    kernel: &AddKernel,
    scaled: &ScaledRows,
    leaf: &mut impl FnMut(&[Vec<u16>]),
) {
    if idx == free.len() {
        leaf(rows_cur);
        return;
    }
    let (i, j) = free[idx];
    for v in 0..q {
        if v > 0 {
            kernel.add_row(&mut rows_cur[i], scaled.unit_row(j));
        }
        dfs_free(rows_cur, free, idx + 1, q, kernel, scaled, leaf);
    }
    // q additions in total restore the row (char p divides q).
    kernel.add_row(&mut rows_cur[i], scaled.unit_row(j));
}

fn run_tasks_min_support(code: &LinearCode, r: usize, threads: usize) -> u64 {
    let k = code.dimension();
    let n = code.length();
    let q = code.field().q() as usize;
    let scaled = ScaledRows::new(code);
    let kernel = AddKernel::for_field(code.field());
    let tasks = build_tasks(k, r, q);
    let global_min = AtomicU64::new(n as u64 + 1);
    let next_task = AtomicUsize::new(0);

    let worker = |global_min: &AtomicU64, next_task: &AtomicUsize| {
        loop {
            let t = next_task.fetch_add(1, Ordering::Relaxed);
            if t >= tasks.len() {
                break;
            }
            let task = &tasks[t];
            let free = free_positions(&task.pivots, k);
            let mut rows_cur: Vec<Vec<u16>> = task
                .pivots
                .iter()
                .map(|&p| scaled.unit_row(p).to_vec())
                .collect();
            let start_idx = if let Some(v) = task.first_val {
                let (i, j) = free[0];
                if v > 0 {
                    let src = scaled.row(j, v).to_vec();
                    kernel.add_row(&mut rows_cur[i], &src);
                }
                1
            } else {
                0
            };
            let mut local_min = global_min.load(Ordering::Relaxed);
            let mut leaf = |rows: &[Vec<u16>]| {
                if let Some(w) = support_capped(rows, n, local_min) {
                    if w < local_min {
                        local_min = w;
                        global_min.fetch_min(w, Ordering::Relaxed);
                    }
                }
            };
            dfs_free(
                &mut rows_cur,
                &free,
                start_idx,
                q,
                &kernel,
                &scaled,
                &mut leaf,
            );
            // Refresh the pruning threshold between tasks.
            let _ = global_min.fetch_min(local_min, Ordering::Relaxed);
        }
    };

    let threads = threads.max(1).min(tasks.len().max(1));
    if threads == 1 {
        worker(&global_min, &next_task);
    } else {
        std::thread::scope(|scope| {
            for _ in 0..threads {
                scope.spawn(|| worker(&global_min, &next_task));
            }
        });
    }
    global_min.load(Ordering::Relaxed)
}

/// Number of coordinates where some basis vector is nonzero. The basis must
/// be linearly independent; since the support of a space equals the support
/// of any spanning set, this is the support of the spanned subcode.
pub fn support_weight(basis: &[Vec<FieldElement>], fs: &FieldSpec) -> Result<u64> {
    if basis.is_empty() {
        return Err(Error::BadParameters("empty basis".into()));
    }
    let n = basis[0].len();
    if basis.iter().any(|b| b.len() != n) {
        return Err(Error::DimensionMismatch(
            "basis vectors of unequal length".into(),
        ));
    }
    let m = Matrix::from_rows(basis.to_vec())?;
    let (_, rank, _) = rref(&m, fs)?;
    if rank != basis.len() {
        return Err(Error::LinearlyDependent);
    }
    Ok((0..n)
        .filter(|&c| basis.iter().any(|b| !b[c].is_zero()))
        .count() as u64)
}

/// The r-th generalized Hamming weight by exhaustive search over all
/// canonical r-dimensional subspaces of the code.
pub fn ghw_bruteforce(code: &LinearCode, r: usize, opts: &SearchOpts) -> Result<u64> {
    let k = code.dimension();
    if r < 1 || r > k {
        return Err(Error::BadParameters(format!(
            "subcode dimension r={r} outside 1..={k}"
        )));
    }
    let required = gaussian_binomial(k, r, code.field().q() as u64).unwrap_or(u128::MAX);
    if required > opts.budget {
        return Err(Error::BudgetExceeded {
            required,
            budget: opts.budget,
        });
    }
    Ok(run_tasks_min_support(code, r, opts.threads))
}

/// Minimum Hamming weight over all q^k - 1 nonzero codewords, scanned as a
/// full coefficient-space walk. Independent of the subspace-profile path; the
/// two must agree at r = 1.
pub fn min_distance(code: &LinearCode, opts: &SearchOpts) -> Result<u64> {
    let k = code.dimension();
    if k < 1 {
        return Err(Error::BadParameters("code has dimension 0".into()));
    }
    let q = code.field().q() as usize;
    let required = (q as u128)
        .checked_pow(k as u32)
        .unwrap_or(u128::MAX);
    if required > opts.budget {
        return Err(Error::BudgetExceeded {
            required,
            budget: opts.budget,
        });
    }
    let n = code.length();
    let scaled = ScaledRows::new(code);
    let kernel = AddKernel::for_field(code.field());
    let global_min = AtomicU64::new(n as u64 + 1);
    // Positions 0..k are all free on a single accumulator row.
    let free: Vec<(usize, usize)> = (0..k).map(|j| (0, j)).collect();
    let tasks: Vec<usize> = (0..q).collect();
    let next_task = AtomicUsize::new(0);
    let worker = |global_min: &AtomicU64, next_task: &AtomicUsize| loop {
        let t = next_task.fetch_add(1, Ordering::Relaxed);
        if t >= tasks.len() {
            break;
        }
        let v0 = tasks[t];
        let mut rows_cur = vec![scaled.row(0, v0).to_vec()];
        let mut local_min = global_min.load(Ordering::Relaxed);
        let mut leaf = |rows: &[Vec<u16>]| {
            if let Some(w) = support_capped(rows, n, local_min) {
                // Weight 0 is the zero codeword; skip it.
                if w > 0 && w < local_min {
                    local_min = w;
                    global_min.fetch_min(w, Ordering::Relaxed);
                }
            }
        };
        dfs_free(
            &mut rows_cur,
            &free,
            1,
            q,
            &kernel,
            &scaled,
            &mut leaf,
        );
        let _ = global_min.fetch_min(local_min, Ordering::Relaxed);
    };
    let threads = opts.threads.max(1).min(tasks.len());
    if threads == 1 {
        worker(&global_min, &next_task);
    } else {
        std::thread::scope(|scope| {
            for _ in 0..threads {
                scope.spawn(|| worker(&global_min, &next_task));
            }
        });
    }
    Ok(global_min.load(Ordering::Relaxed))
}

/// Iterator over all canonical (RREF) bases of r-dimensional subspaces of
/// F_q^k, one matrix per subspace.
pub struct SubspaceIterator {
    k: usize,
    r: usize,
    q: usize,
    pivot_sets: Vec<Vec<usize>>,
    psi: usize,
    free: Vec<(usize, usize)>,
    digits: Vec<usize>,
    fresh: bool,
}

impl SubspaceIterator {
    pub fn new(k: usize, r: usize, q: u32) -> Result<SubspaceIterator> {
        if r < 1 || r > k {
            return Err(Error::BadParameters(format!(
                "subspace dimension r={r} outside 1..={k}"
            )));
        }
        let pivot_sets = combinations(k, r);
        let free = free_positions(&pivot_sets[0], k);
        let digits = vec![0usize; free.len()];
        Ok(SubspaceIterator {
            k,
            r,
            q: q as usize,
            pivot_sets,
            psi: 0,
            free,
            digits,
            fresh: true,
        })
    }

    fn current_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.r, self.k);
        for (i, &p) in self.pivot_sets[self.psi].iter().enumerate() {
            m.set(i, p, FieldElement::ONE);
        }
        for (idx, &(i, j)) in self.free.iter().enumerate() {
            m.set(i, j, FieldElement(self.digits[idx] as u32));
        }
        m
    }

    fn advance(&mut self) -> bool {
        // Odometer over free digits, then the next pivot set.
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.psi += 1;
                if self.psi >= self.pivot_sets.len() {
                    return false;
                }
                self.free = free_positions(&self.pivot_sets[self.psi], self.k);
                self.digits = vec![0usize; self.free.len()];
                return true;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < self.q {
                return true;
            }
            self.digits[i] = 0;
        }
    }
}

impl Iterator for SubspaceIterator {
    type Item = Matrix;

    fn next(&mut self) -> Option<Matrix> {
        if self.fresh {
            self.fresh = false;
            return Some(self.current_matrix());
        }
        if self.advance() {
            Some(self.current_matrix())
        } else {
            None
        }
    }
}

/// Counts subspace profiles by actually stepping the odometers, as an
/// independent check of the closed-form Gaussian binomial.
pub fn count_subspaces_by_enumeration(k: usize, r: usize, q: u32, threads: usize) -> u128 {
    if r < 1 || r > k {
        return if r == 0 { 1 } else { 0 };
    }
    let q = q as usize;
    let pivot_sets = combinations(k, r);
    let next_task = AtomicUsize::new(0);
    let total = AtomicU64::new(0);
    let worker = |next_task: &AtomicUsize, total: &AtomicU64| loop {
        let t = next_task.fetch_add(1, Ordering::Relaxed);
        if t >= pivot_sets.len() {
            break;
        }
        let free = free_positions(&pivot_sets[t], k);
        let mut digits = vec![0usize; free.len()];
        let mut count = 0u64;
        'odometer: loop {
            count += 1;
            let mut i = digits.len();
            loop {
                if i == 0 {
                    break 'odometer;
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < q {
                    break;
                }
                digits[i] = 0;
            }
        }
        total.fetch_add(count, Ordering::Relaxed);
    };
    let threads = threads.max(1).min(pivot_sets.len());
    if threads == 1 {
        worker(&next_task, &total);
    } else {
        std::thread::scope(|scope| {
            for _ in 0..threads {
                scope.spawn(|| worker(&next_task, &total));
            }
        });
    }
    total.load(Ordering::Relaxed) as u128
}

/// How the hierarchy values were produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Brute,
    Formula,
    Both,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Method> {
        match s {
            "brute" => Ok(Method::Brute),
            "formula" => Ok(Method::Formula),
            "both" => Ok(Method::Both),
            other => Err(Error::BadParameters(format!("unknown method {other}"))),
        }
    }
}

/// Where a hierarchy computation stopped early.
#[derive(Debug, Clone, Serialize)]
pub struct Truncation {
    pub at_r: usize,
    pub required: u128,
    pub budget: u128,
}

/// The computed weight hierarchy of one code.
#[derive(Debug, Clone, Serialize)]
pub struct WeightReport {
    pub family: crate::codes::CodeFamily,
    pub q: u32,
    pub s: usize,
    pub d: usize,
    pub hierarchy: BTreeMap<usize, u64>,
    pub method: Method,
    pub elapsed_ms: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula: Option<BTreeMap<usize, FormulaResult>>,
    /// r values where an exact formula disagreed with brute force.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub mismatches: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncated: Option<Truncation>,
}

/// d_r for r = 1..=r_max. Budget overruns truncate the report, keeping the
/// completed prefix. With `Method::Both` every exact formula value is
/// cross-checked against the brute-force oracle.
pub fn weight_hierarchy(
    code: &LinearCode,
    r_max: usize,
    method: Method,
    opts: &SearchOpts,
) -> Result<WeightReport> {
    let k = code.dimension();
    if r_max > k {
        return Err(Error::BadParameters(format!(
            "r_max={r_max} exceeds the code dimension {k}"
        )));
    }
    let meta = code.meta().clone();
    let start = Instant::now();
    let mut hierarchy = BTreeMap::new();
    let mut formula_map = BTreeMap::new();
    let mut mismatches = Vec::new();
    let mut truncated = None;
    for r in 1..=r_max {
        let formula = if method != Method::Brute {
            let res = ghw_formula(meta.family, meta.q, meta.s, meta.d, r)?;
            formula_map.insert(r, res.clone());
            Some(res)
        } else {
            None
        };
        if method == Method::Formula {
            if let Some(res) = &formula {
                if res.status == FormulaStatus::Exact {
                    hierarchy.insert(r, res.value.expect("exact result has a value"));
                }
            }
            continue;
        }
        match ghw_bruteforce(code, r, opts) {
            Ok(w) => {
                if let Some(res) = &formula {
                    if res.status == FormulaStatus::Exact && res.value != Some(w) {
                        mismatches.push(r);
                    }
                }
                hierarchy.insert(r, w);
            }
            Err(Error::BudgetExceeded { required, budget }) => {
                truncated = Some(Truncation {
                    at_r: r,
                    required,
                    budget,
                });
                break;
            }
            Err(e) => return Err(e),
        }
    }
    // Strict monotonicity is a theorem for linear codes; a violation means a
    // broken search.
    let values: Vec<u64> = hierarchy.values().copied().collect();
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InternalInconsistency(format!(
            "non-monotone hierarchy {values:?} for {} q={} s={} d={}",
            meta.family, meta.q, meta.s, meta.d
        )));
    }
    Ok(WeightReport {
        family: meta.family,
        q: meta.q,
        s: meta.s,
        d: meta.d,
        hierarchy,
        method,
        elapsed_ms: start.elapsed().as_millis(),
        formula: if method == Method::Brute {
            None
        } else {
            Some(formula_map)
        },
        mismatches,
        truncated,
    })
}
