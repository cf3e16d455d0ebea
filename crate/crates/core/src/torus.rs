//! Deterministic enumeration of tori over F_q and exact zero counting.
//!
//! The affine torus is the set of points with all coordinates nonzero; the
//! projective torus is normalized as the affine torus of one fewer variable
//! with a leading 1. Point order is defined through powers of the canonical
//! generator, counting exponent tuples lexicographically, so it is stable
//! across field representations.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{check_same_field, FieldElement, FieldSpec};
use crate::poly::Polynomial;

/// Hard wall for torus sizes; (q-1)^s grows fast.
pub const DEFAULT_ENUM_CAP: u128 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TorusKind {
    Affine,
    Projective,
}

/// An ordered, duplicate-free list of torus points.
#[derive(Debug, Clone)]
pub struct PointSet {
    kind: TorusKind,
    field: Arc<FieldSpec>,
    s: usize,
    /// Flattened points, stride `s`.
    data: Vec<FieldElement>,
}

impl PointSet {
    #[inline]
    pub fn kind(&self) -> TorusKind {
        self.kind
    }

    #[inline]
    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    #[inline]
    pub fn num_vars(&self) -> usize {
        self.s
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len().checked_div(self.s).unwrap_or(0)
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.s..(i + 1) * self.s]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[FieldElement]> {
        self.data.chunks_exact(self.s)
    }
}

fn checked_torus_size(q: u32, s: usize, cap: u128) -> Result<u128> {
    let base = (q - 1) as u128;
    let mut size: u128 = 1;
    for _ in 0..s {
        size = size.checked_mul(base).ok_or(Error::SizeCap {
            required: u128::MAX,
            cap,
        })?;
        if size > cap {
            return Err(Error::SizeCap {
                required: size,
                cap,
            });
        }
    }
    Ok(size)
}

/// The points (theta^{e_1}, ..., theta^{e_s}) ordered by the exponent tuple
/// counting lexicographically from (0,...,0) to (q-2,...,q-2).
pub fn enumerate_affine_torus_with_cap(
    fs: &Arc<FieldSpec>,
    s: usize,
    cap: u128,
) -> Result<PointSet> {
    if s < 1 {
        return Err(Error::BadParameters("affine torus needs s >= 1".into()));
    }
    let q = fs.q();
    let size = checked_torus_size(q, s, cap)? as usize;
    let units = (q - 1) as usize;
    // powers[i] = theta^i
    let mut powers = Vec::with_capacity(units);
    let mut cur = FieldElement::ONE;
    for _ in 0..units {
        powers.push(cur);
        cur = fs.mul(cur, fs.primitive_element());
    }
    let mut data = Vec::with_capacity(size * s);
    let mut exps = vec![0usize; s];
    loop {
        data.extend(exps.iter().map(|&e| powers[e]));
        // Odometer with the last coordinate fastest.
        let mut i = s;
        loop {
            if i == 0 {
                return Ok(PointSet {
                    kind: TorusKind::Affine,
                    field: fs.clone(),
                    s,
                    data,
                });
            }
            i -= 1;
            exps[i] += 1;
            if exps[i] < units {
                break;
            }
            exps[i] = 0;
        }
    }
}

pub fn enumerate_affine_torus(fs: &Arc<FieldSpec>, s: usize) -> Result<PointSet> {
    enumerate_affine_torus_with_cap(fs, s, DEFAULT_ENUM_CAP)
}

/// The points (1, R) for R ranging over the affine torus in s-1 variables.
pub fn enumerate_projective_torus_with_cap(
    fs: &Arc<FieldSpec>,
    s: usize,
    cap: u128,
) -> Result<PointSet> {
    if s < 2 {
        return Err(Error::BadParameters("projective torus needs s >= 2".into()));
    }
    let inner = enumerate_affine_torus_with_cap(fs, s - 1, cap)?;
    let mut data = Vec::with_capacity(inner.len() * s);
    for p in inner.iter() {
        data.push(FieldElement::ONE);
        data.extend_from_slice(p);
    }
    Ok(PointSet {
        kind: TorusKind::Projective,
        field: fs.clone(),
        s,
        data,
    })
}

pub fn enumerate_projective_torus(fs: &Arc<FieldSpec>, s: usize) -> Result<PointSet> {
    enumerate_projective_torus_with_cap(fs, s, DEFAULT_ENUM_CAP)
}

fn check_poly_points(f: &Polynomial, pts: &PointSet) -> Result<()> {
    check_same_field(f.field(), pts.field(), "evaluation")?;
    if f.num_vars() != pts.num_vars() {
        return Err(Error::DimensionMismatch(format!(
            "polynomial in {} variables on points with {} coordinates",
            f.num_vars(),
            pts.num_vars()
        )));
    }
    Ok(())
}

/// The evaluation vector (f(P_1), ..., f(P_m)) in point order.
pub fn evaluate(f: &Polynomial, pts: &PointSet) -> Result<Vec<FieldElement>> {
    check_poly_points(f, pts)?;
    pts.iter().map(|p| f.eval(p)).collect()
}

/// Number of points where every polynomial vanishes. The empty family
/// vanishes everywhere. Points are scanned outermost with a short-circuit on
/// the first nonvanishing polynomial.
pub fn count_common_zeros(polys: &[Polynomial], pts: &PointSet) -> Result<u64> {
    count_common_zeros_threaded(polys, pts, 1)
}

/// Same reduction split over `threads` point ranges; the sum is identical to
/// the sequential count for any partition.
pub fn count_common_zeros_threaded(
    polys: &[Polynomial],
    pts: &PointSet,
    threads: usize,
) -> Result<u64> {
    for f in polys {
        check_poly_points(f, pts)?;
    }
    let n = pts.len();
    let threads = threads.max(1).min(n.max(1));
    let count_range = |lo: usize, hi: usize| -> Result<u64> {
        let mut count = 0u64;
        for i in lo..hi {
            let p = pts.point(i);
            let mut all_zero = true;
            for f in polys {
                if !f.eval(p)?.is_zero() {
                    all_zero = false;
                    break;
                }
            }
            if all_zero {
                count += 1;
            }
        }
        Ok(count)
    };
    if threads == 1 {
        return count_range(0, n);
    }
    let chunk = n.div_ceil(threads);
    let partials = std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for t in 0..threads {
            let lo = t * chunk;
            let hi = ((t + 1) * chunk).min(n);
            let count_range = &count_range;
            handles.push(scope.spawn(move || count_range(lo, hi)));
        }
        handles
            .into_iter()
            .map(|h| h.join().expect("zero-count worker panicked"))
            .collect::<Result<Vec<u64>>>()
    })?;
    Ok(partials.iter().sum())
}
