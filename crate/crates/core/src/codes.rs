//! Linear-code core: generator matrices for the hypersimplex evaluation
//! codes, the square-free degree-at-most-d code, and the two dual-side
//! constructions carved out of the exponent grid by the hat involution.
//!
//! Every code is stored with its generator in reduced row-echelon form, so
//! equality of codes is exact matrix equality. Row order before reduction is
//! the grlex-descending monomial order.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use crate::linalg::Matrix;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::linalg;
use crate::poly::{binomial, hypersimplex_monomials, squarefree_monomials_upto, ExponentVector};
use crate::torus::{
    enumerate_affine_torus_with_cap, enumerate_projective_torus_with_cap, PointSet,
    DEFAULT_ENUM_CAP,
};

/// Reduced row-echelon form over F_q; see [`linalg::rref`].
pub fn rref(m: &Matrix, fs: &FieldSpec) -> Result<(Matrix, usize, Vec<usize>)> {
    linalg::rref(m, fs)
}

/// Canonical basis of the right kernel; see [`linalg::nullspace`].
pub fn nullspace(m: &Matrix, fs: &FieldSpec) -> Result<Matrix> {
    linalg::nullspace(m, fs)
}

/// Which construction produced a code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CodeFamily {
    Affine,
    Projective,
    SquarefreeLeq,
    DeltaPrime,
    ProjDual,
}

impl fmt::Display for CodeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            CodeFamily::Affine => "affine",
            CodeFamily::Projective => "projective",
            CodeFamily::SquarefreeLeq => "sfleq",
            CodeFamily::DeltaPrime => "delta-prime",
            CodeFamily::ProjDual => "proj-dual",
        };
        write!(f, "{name}")
    }
}

impl FromStr for CodeFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<CodeFamily> {
        match s {
            "affine" => Ok(CodeFamily::Affine),
            "projective" => Ok(CodeFamily::Projective),
            "sfleq" => Ok(CodeFamily::SquarefreeLeq),
            "delta-prime" => Ok(CodeFamily::DeltaPrime),
            "proj-dual" => Ok(CodeFamily::ProjDual),
            other => Err(Error::BadParameters(format!("unknown family {other}"))),
        }
    }
}

/// Construction provenance for a built code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodeMeta {
    pub family: CodeFamily,
    pub q: u32,
    pub s: usize,
    pub d: usize,
}

/// A linear code over F_q held as an RREF generator matrix of full rank k.
#[derive(Debug, Clone)]
pub struct LinearCode {
    field: Arc<FieldSpec>,
    n: usize,
    k: usize,
    generator: Matrix,
    meta: CodeMeta,
}

impl LinearCode {
    /// Stacks evaluation rows, canonicalizes via RREF, and drops zero rows.
    fn from_evaluation_rows(
        field: Arc<FieldSpec>,
        meta: CodeMeta,
        rows: Vec<Vec<FieldElement>>,
        n: usize,
    ) -> Result<LinearCode> {
        let raw = if rows.is_empty() {
            Matrix::zeros(0, n)
        } else {
            Matrix::from_rows(rows)?
        };
        let (mut reduced, rank, _) = linalg::rref(&raw, &field)?;
        reduced.truncate_rows(rank);
        Ok(LinearCode {
            field,
            n,
            k: rank,
            generator: reduced,
            meta,
        })
    }

    #[inline]
    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    #[inline]
    pub fn length(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dimension(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    #[inline]
    pub fn meta(&self) -> &CodeMeta {
        &self.meta
    }

    /// CSV export: one basis codeword per line, integer reps, no header.
    pub fn generator_csv(&self) -> String {
        let mut out = String::new();
        for row in self.generator.row_iter() {
            let line: Vec<String> = row.iter().map(|e| e.rep().to_string()).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

fn eval_monomial(fs: &FieldSpec, ev: &ExponentVector, point: &[FieldElement]) -> FieldElement {
    let mut acc = FieldElement::ONE;
    for (i, &e) in ev.exps().iter().enumerate() {
        if e == 0 {
            continue;
        }
        acc = fs.mul(acc, fs.pow(point[i], e as u64));
        if acc.is_zero() {
            break;
        }
    }
    acc
}

fn evaluation_rows(
    fs: &FieldSpec,
    monomials: &[ExponentVector],
    pts: &PointSet,
) -> Vec<Vec<FieldElement>> {
    monomials
        .iter()
        .map(|ev| pts.iter().map(|p| eval_monomial(fs, ev, p)).collect())
        .collect()
}

fn check_sd(s: usize, d: usize) -> Result<()> {
    if s < 2 {
        return Err(Error::BadParameters(format!("need s >= 2, got {s}")));
    }
    if d < 1 || d > s {
        return Err(Error::BadDegree {
            d,
            msg: format!("need 1 <= d <= s = {s}"),
        });
    }
    Ok(())
}

/// The degree-d hypersimplex code on the affine torus: evaluates the 0/1
/// monomials with exactly d ones; n = (q-1)^s.
pub fn build_affine_toric(fs: &Arc<FieldSpec>, s: usize, d: usize) -> Result<LinearCode> {
    build_affine_toric_with_cap(fs, s, d, DEFAULT_ENUM_CAP)
}

pub fn build_affine_toric_with_cap(
    fs: &Arc<FieldSpec>,
    s: usize,
    d: usize,
    cap: u128,
) -> Result<LinearCode> {
    check_sd(s, d)?;
    let pts = enumerate_affine_torus_with_cap(fs, s, cap)?;
    let monomials = hypersimplex_monomials(s, d)?;
    let rows = evaluation_rows(fs, &monomials, &pts);
    LinearCode::from_evaluation_rows(
        fs.clone(),
        CodeMeta {
            family: CodeFamily::Affine,
            q: fs.q(),
            s,
            d,
        },
        rows,
        pts.len(),
    )
}

/// The same monomial basis evaluated on the projective torus; n = (q-1)^{s-1}.
pub fn build_projective_toric(fs: &Arc<FieldSpec>, s: usize, d: usize) -> Result<LinearCode> {
    build_projective_toric_with_cap(fs, s, d, DEFAULT_ENUM_CAP)
}

pub fn build_projective_toric_with_cap(
    fs: &Arc<FieldSpec>,
    s: usize,
    d: usize,
    cap: u128,
) -> Result<LinearCode> {
    check_sd(s, d)?;
    let pts = enumerate_projective_torus_with_cap(fs, s, cap)?;
    let monomials = hypersimplex_monomials(s, d)?;
    let rows = evaluation_rows(fs, &monomials, &pts);
    LinearCode::from_evaluation_rows(
        fs.clone(),
        CodeMeta {
            family: CodeFamily::Projective,
            q: fs.q(),
            s,
            d,
        },
        rows,
        pts.len(),
    )
}

/// All square-free monomials of degree at most d on the affine torus.
pub fn build_squarefree_leq(fs: &Arc<FieldSpec>, s: usize, d: usize) -> Result<LinearCode> {
    build_squarefree_leq_with_cap(fs, s, d, DEFAULT_ENUM_CAP)
}

pub fn build_squarefree_leq_with_cap(
    fs: &Arc<FieldSpec>,
    s: usize,
    d: usize,
    cap: u128,
) -> Result<LinearCode> {
    check_sd(s, d)?;
    let pts = enumerate_affine_torus_with_cap(fs, s, cap)?;
    let monomials = squarefree_monomials_upto(s, d)?;
    let rows = evaluation_rows(fs, &monomials, &pts);
    LinearCode::from_evaluation_rows(
        fs.clone(),
        CodeMeta {
            family: CodeFamily::SquarefreeLeq,
            q: fs.q(),
            s,
            d,
        },
        rows,
        pts.len(),
    )
}

/// A set of exponent vectors inside the grid {0, ..., q-2}^s, kept in
/// grlex-descending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialSet {
    pub s: usize,
    pub members: Vec<ExponentVector>,
}

impl MonomialSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, ev: &ExponentVector) -> bool {
        self.members.binary_search_by(|m| ev.cmp(m)).is_ok()
    }
}

fn sort_desc(mut evs: Vec<ExponentVector>) -> Vec<ExponentVector> {
    evs.sort_by(|a, b| b.cmp(a));
    evs.dedup();
    evs
}

/// The hat involution on one grid vector: 0 stays 0, otherwise b -> q-1-b.
pub fn hat_exponent(b: &ExponentVector, q: u32) -> Result<ExponentVector> {
    let top = (q - 1) as u16;
    let mut out = Vec::with_capacity(b.num_vars());
    for &e in b.exps() {
        if e >= top {
            return Err(Error::OutOfGrid(format!(
                "entry {e} outside {{0,...,{}}}",
                top - 1
            )));
        }
        out.push(if e == 0 { 0 } else { top - e });
    }
    Ok(ExponentVector::new(out))
}

/// Every grid vector of {0,...,q-2}^s in grlex-descending order.
fn full_grid(q: u32, s: usize, cap: u128) -> Result<Vec<ExponentVector>> {
    let size = {
        let mut acc: u128 = 1;
        for _ in 0..s {
            acc = acc.saturating_mul((q - 1) as u128);
        }
        acc
    };
    if size > cap {
        return Err(Error::SizeCap {
            required: size,
            cap,
        });
    }
    let top = (q - 1) as u16;
    let mut out = Vec::with_capacity(size as usize);
    let mut cur = vec![0u16; s];
    loop {
        out.push(ExponentVector::new(cur.clone()));
        let mut i = s;
        loop {
            if i == 0 {
                return Ok(sort_desc(out));
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < top {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// The complement of the hat image of the degree-d 0/1 vectors inside the
/// whole exponent grid. Its monomials span the dual of the affine code.
pub fn hat_complement(fs: &Arc<FieldSpec>, s: usize, d: usize) -> Result<MonomialSet> {
    check_sd(s, d)?;
    let q = fs.q();
    if q == 2 {
        return Err(Error::DegenerateField);
    }
    let delta = hypersimplex_monomials(s, d)?;
    let image: Vec<ExponentVector> = delta
        .iter()
        .map(|b| hat_exponent(b, q))
        .collect::<Result<_>>()?;
    let image = sort_desc(image);
    if image.len() != delta.len() {
        return Err(Error::Inconsistent(
            "hat image collapsed two basis exponents".into(),
        ));
    }
    let grid = full_grid(q, s, DEFAULT_ENUM_CAP)?;
    let members: Vec<ExponentVector> = grid
        .into_iter()
        .filter(|ev| image.binary_search_by(|m| ev.cmp(m)).is_err())
        .collect();
    Ok(MonomialSet { s, members })
}

/// Evaluates the hat-complement monomials on the affine torus; by the grid
/// orthogonality this is the Euclidean dual of the affine code.
pub fn build_delta_prime_code(fs: &Arc<FieldSpec>, s: usize, d: usize) -> Result<LinearCode> {
    build_delta_prime_code_with_cap(fs, s, d, DEFAULT_ENUM_CAP)
}

pub fn build_delta_prime_code_with_cap(
    fs: &Arc<FieldSpec>,
    s: usize,
    d: usize,
    cap: u128,
) -> Result<LinearCode> {
    let complement = hat_complement(fs, s, d)?;
    let pts = enumerate_affine_torus_with_cap(fs, s, cap)?;
    let rows = evaluation_rows(fs, &complement.members, &pts);
    LinearCode::from_evaluation_rows(
        fs.clone(),
        CodeMeta {
            family: CodeFamily::DeltaPrime,
            q: fs.q(),
            s,
            d,
        },
        rows,
        pts.len(),
    )
}

/// Intermediate sets of the projective dual construction, exposed so the
/// verification sweeps can cross-check the cardinalities.
#[derive(Debug, Clone)]
pub struct ProjectiveDualSets {
    /// Tails of the degree-d 0/1 vectors (first coordinate dropped).
    pub dropped: MonomialSet,
    /// Hat image of `dropped` in the (s-1)-dimensional grid.
    pub image: MonomialSet,
    /// Grid complement of `image`; its monomials span the dual.
    pub complement: MonomialSet,
}

/// Builds the sets behind the projective dual code.
pub fn projective_dual_sets(fs: &Arc<FieldSpec>, s: usize, d: usize) -> Result<ProjectiveDualSets> {
    check_sd(s, d)?;
    let q = fs.q();
    if q == 2 {
        return Err(Error::DegenerateField);
    }
    let delta = hypersimplex_monomials(s, d)?;
    let dropped: Vec<ExponentVector> = delta
        .iter()
        .map(|ev| ExponentVector::new(ev.exps()[1..].to_vec()))
        .collect();
    let dropped = sort_desc(dropped);
    if dropped.len() as u128 != binomial(s, d) {
        return Err(Error::Inconsistent(
            "dropping the first coordinate collapsed two exponents".into(),
        ));
    }
    let image: Vec<ExponentVector> = dropped
        .iter()
        .map(|b| hat_exponent(b, q))
        .collect::<Result<_>>()?;
    let image = sort_desc(image);
    if image.len() < dropped.len() {
        return Err(Error::Inconsistent(format!(
            "hat image has {} members, expected {}",
            image.len(),
            dropped.len()
        )));
    }
    let grid = full_grid(q, s - 1, DEFAULT_ENUM_CAP)?;
    let complement: Vec<ExponentVector> = grid
        .into_iter()
        .filter(|ev| image.binary_search_by(|m| ev.cmp(m)).is_err())
        .collect();
    Ok(ProjectiveDualSets {
        dropped: MonomialSet {
            s: s - 1,
            members: dropped,
        },
        image: MonomialSet {
            s: s - 1,
            members: image,
        },
        complement: MonomialSet {
            s: s - 1,
            members: complement,
        },
    })
}

/// The dual of the projective code, evaluated directly on the affine torus in
/// s-1 variables (the projective torus with its leading 1 dropped).
pub fn build_projective_dual_code(fs: &Arc<FieldSpec>, s: usize, d: usize) -> Result<LinearCode> {
    build_projective_dual_code_with_cap(fs, s, d, DEFAULT_ENUM_CAP)
}

pub fn build_projective_dual_code_with_cap(
    fs: &Arc<FieldSpec>,
    s: usize,
    d: usize,
    cap: u128,
) -> Result<LinearCode> {
    let sets = projective_dual_sets(fs, s, d)?;
    let pts = enumerate_affine_torus_with_cap(fs, s - 1, cap)?;
    let rows = evaluation_rows(fs, &sets.complement.members, &pts);
    LinearCode::from_evaluation_rows(
        fs.clone(),
        CodeMeta {
            family: CodeFamily::ProjDual,
            q: fs.q(),
            s,
            d,
        },
        rows,
        pts.len(),
    )
}

/// Dispatches on the family tag.
pub fn build_code(
    family: CodeFamily,
    fs: &Arc<FieldSpec>,
    s: usize,
    d: usize,
    cap: u128,
) -> Result<LinearCode> {
    match family {
        CodeFamily::Affine => build_affine_toric_with_cap(fs, s, d, cap),
        CodeFamily::Projective => build_projective_toric_with_cap(fs, s, d, cap),
        CodeFamily::SquarefreeLeq => build_squarefree_leq_with_cap(fs, s, d, cap),
        CodeFamily::DeltaPrime => build_delta_prime_code_with_cap(fs, s, d, cap),
        CodeFamily::ProjDual => build_projective_dual_code_with_cap(fs, s, d, cap),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    #[test]
    fn affine_code_dimensions() {
        let f3 = make_field(3).unwrap();
        let c = build_affine_toric(&f3, 4, 2).unwrap();
        assert_eq!((c.length(), c.dimension()), (16, 6));
        let c = build_affine_toric(&f3, 3, 3).unwrap();
        assert_eq!((c.length(), c.dimension()), (8, 1));
        let f2 = make_field(2).unwrap();
        let c = build_affine_toric(&f2, 3, 2).unwrap();
        assert_eq!((c.length(), c.dimension()), (1, 1));
    }

    #[test]
    fn projective_code_dimensions() {
        let f3 = make_field(3).unwrap();
        let c = build_projective_toric(&f3, 4, 2).unwrap();
        assert_eq!((c.length(), c.dimension()), (8, 6));
        let c = build_projective_toric(&f3, 2, 1).unwrap();
        assert_eq!((c.length(), c.dimension()), (2, 2));
        let f2 = make_field(2).unwrap();
        let c = build_projective_toric(&f2, 4, 2).unwrap();
        assert_eq!((c.length(), c.dimension()), (1, 1));
    }

    #[test]
    fn squarefree_leq_dimensions() {
        let f3 = make_field(3).unwrap();
        let c = build_squarefree_leq(&f3, 4, 1).unwrap();
        assert_eq!((c.length(), c.dimension()), (16, 5));
        // The degree-s code fills the whole ambient space here.
        let c = build_squarefree_leq(&f3, 3, 3).unwrap();
        assert_eq!((c.length(), c.dimension()), (8, 8));
        let f2 = make_field(2).unwrap();
        let c = build_squarefree_leq(&f2, 3, 2).unwrap();
        assert_eq!((c.length(), c.dimension()), (1, 1));
    }

    #[test]
    fn hat_examples() {
        // q = 5: (3,0,2) -> (1,0,2)
        let b = ExponentVector::new(vec![3, 0, 2]);
        assert_eq!(
            hat_exponent(&b, 5).unwrap(),
            ExponentVector::new(vec![1, 0, 2])
        );
        // entries must stay below q-1
        assert!(hat_exponent(&ExponentVector::new(vec![4]), 5).is_err());
    }

    #[test]
    fn hat_complement_examples() {
        let f3 = make_field(3).unwrap();
        let ms = hat_complement(&f3, 2, 1).unwrap();
        assert_eq!(
            ms.members,
            vec![
                ExponentVector::new(vec![1, 1]),
                ExponentVector::new(vec![0, 0])
            ]
        );
        let ms = hat_complement(&f3, 4, 2).unwrap();
        assert_eq!(ms.len(), 10);
        let f2 = make_field(2).unwrap();
        assert_eq!(hat_complement(&f2, 2, 1), Err(Error::DegenerateField));
    }

    #[test]
    fn delta_prime_dimensions() {
        let f3 = make_field(3).unwrap();
        let c = build_delta_prime_code(&f3, 2, 1).unwrap();
        assert_eq!((c.length(), c.dimension()), (4, 2));
        let c = build_delta_prime_code(&f3, 4, 2).unwrap();
        assert_eq!((c.length(), c.dimension()), (16, 10));
        let f4 = make_field(4).unwrap();
        let c = build_delta_prime_code(&f4, 2, 1).unwrap();
        assert_eq!((c.length(), c.dimension()), (9, 7));
    }

    #[test]
    fn projective_dual_dimensions() {
        let f3 = make_field(3).unwrap();
        let c = build_projective_dual_code(&f3, 3, 1).unwrap();
        assert_eq!((c.length(), c.dimension()), (4, 1));
        // s = 2, d = 1 over F_3 leaves no monomials at all.
        let c = build_projective_dual_code(&f3, 2, 1).unwrap();
        assert_eq!((c.length(), c.dimension()), (2, 0));
        let f4 = make_field(4).unwrap();
        let c = build_projective_dual_code(&f4, 3, 2).unwrap();
        assert_eq!((c.length(), c.dimension()), (9, 6));
    }

    #[test]
    fn csv_export_shape() {
        let f3 = make_field(3).unwrap();
        let c = build_affine_toric(&f3, 2, 1).unwrap();
        let csv = c.generator_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), c.dimension());
        assert_eq!(lines[0].split(',').count(), c.length());
    }
}
