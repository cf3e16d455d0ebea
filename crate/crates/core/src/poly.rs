//! Sparse multivariate polynomials over F_q under graded lexicographic order.
//!
//! The monomial order is grlex with t_1 the most significant variable:
//! compare total degree first, then the exponent vectors lexicographically
//! from the left. Monomial bases, leading-monomial reduction, the exponent
//! complement transform on homogeneous square-free polynomials, and the
//! explicit extremal families used to certify weight values all live here.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{check_same_field, FieldElement, FieldSpec};
use crate::linalg::{rref, Matrix};

/// Exponent vector (a_1, ..., a_s) of a monomial in s variables.
///
/// The total degree is computed once at construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector {
    exps: Vec<u16>,
    degree: u32,
}

impl ExponentVector {
    pub fn new(exps: Vec<u16>) -> ExponentVector {
        let degree = exps.iter().map(|&e| e as u32).sum();
        ExponentVector { exps, degree }
    }

    /// The all-zero vector (the constant monomial).
    pub fn constant(s: usize) -> ExponentVector {
        ExponentVector::new(vec![0; s])
    }

    /// Unit vector for variable `i` (0-based).
    pub fn unit(s: usize, i: usize) -> ExponentVector {
        let mut exps = vec![0u16; s];
        exps[i] = 1;
        ExponentVector::new(exps)
    }

    #[inline]
    pub fn num_vars(&self) -> usize {
        self.exps.len()
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    #[inline]
    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u16 {
        self.exps[i]
    }

    pub fn is_squarefree(&self) -> bool {
        self.exps.iter().all(|&e| e <= 1)
    }

    /// Componentwise sum (monomial product).
    pub fn checked_add(&self, other: &ExponentVector) -> Result<ExponentVector> {
        if self.num_vars() != other.num_vars() {
            return Err(Error::DimensionMismatch(format!(
                "exponent vectors of lengths {} and {}",
                self.num_vars(),
                other.num_vars()
            )));
        }
        Ok(ExponentVector::new(
            self.exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }

    /// Componentwise complement a -> 1 - a; requires a 0/1 vector.
    pub fn complement(&self) -> Result<ExponentVector> {
        if !self.is_squarefree() {
            return Err(Error::NotHomogeneousSquareFree);
        }
        Ok(ExponentVector::new(
            self.exps.iter().map(|&e| 1 - e).collect(),
        ))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExponentVector {
    /// Graded lexicographic order with earlier positions more significant.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "t{}", i + 1)?;
            } else {
                write!(f, "t{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

/// Grlex comparison with an explicit dimension check.
pub fn grlex_compare(a: &ExponentVector, b: &ExponentVector) -> Result<Ordering> {
    if a.num_vars() != b.num_vars() {
        return Err(Error::DimensionMismatch(format!(
            "grlex_compare on lengths {} and {}",
            a.num_vars(),
            b.num_vars()
        )));
    }
    Ok(a.cmp(b))
}

/// A sparse polynomial over F_q; stored coefficients are never zero.
#[derive(Debug, Clone)]
pub struct Polynomial {
    s: usize,
    field: Arc<FieldSpec>,
    terms: BTreeMap<ExponentVector, FieldElement>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.s == other.s && self.field.q() == other.field.q() && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(field: Arc<FieldSpec>, s: usize) -> Polynomial {
        Polynomial {
            s,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: Arc<FieldSpec>, s: usize, c: FieldElement) -> Polynomial {
        let mut p = Polynomial::zero(field, s);
        if !c.is_zero() {
            p.terms.insert(ExponentVector::constant(s), c);
        }
        p
    }

    pub fn one(field: Arc<FieldSpec>, s: usize) -> Polynomial {
        Polynomial::constant(field, s, FieldElement::ONE)
    }

    pub fn monomial(field: Arc<FieldSpec>, ev: ExponentVector, c: FieldElement) -> Polynomial {
        let s = ev.num_vars();
        let mut p = Polynomial::zero(field, s);
        if !c.is_zero() {
            p.terms.insert(ev, c);
        }
        p
    }

    /// The variable t_i (0-based index).
    pub fn variable(field: Arc<FieldSpec>, s: usize, i: usize) -> Polynomial {
        Polynomial::monomial(field, ExponentVector::unit(s, i), FieldElement::ONE)
    }

    /// Accumulates terms, summing duplicates and dropping zeros.
    pub fn from_terms(
        field: Arc<FieldSpec>,
        s: usize,
        terms: impl IntoIterator<Item = (ExponentVector, FieldElement)>,
    ) -> Result<Polynomial> {
        let mut p = Polynomial::zero(field, s);
        for (ev, c) in terms {
            p.add_term(ev, c)?;
        }
        Ok(p)
    }

    fn add_term(&mut self, ev: ExponentVector, c: FieldElement) -> Result<()> {
        if ev.num_vars() != self.s {
            return Err(Error::DimensionMismatch(format!(
                "term in {} variables added to polynomial in {}",
                ev.num_vars(),
                self.s
            )));
        }
        if c.rep() >= self.field.q() {
            return Err(Error::FieldMismatch(format!(
                "coefficient rep {} out of range for F_{}",
                c.rep(),
                self.field.q()
            )));
        }
        if c.is_zero() {
            return Ok(());
        }
        let fs = self.field.clone();
        match self.terms.entry(ev) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = fs.add(*e.get(), c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn num_vars(&self) -> usize {
        self.s
    }

    #[inline]
    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in grlex-ascending order.
    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, FieldElement)> {
        self.terms.iter().map(|(ev, &c)| (ev, c))
    }

    /// Terms in grlex-descending order (leading term first).
    pub fn terms_desc(&self) -> impl Iterator<Item = (&ExponentVector, FieldElement)> {
        self.terms.iter().rev().map(|(ev, &c)| (ev, c))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|ev| ev.degree())
    }

    /// Grlex-maximal exponent vector with its coefficient.
    pub fn leading_monomial(&self) -> Result<(&ExponentVector, FieldElement)> {
        self.terms
            .iter()
            .next_back()
            .map(|(ev, &c)| (ev, c))
            .ok_or(Error::ZeroPolynomial)
    }

    /// True iff every exponent in every term is 0 or 1; zero is square-free.
    pub fn is_square_free(&self) -> bool {
        self.terms.keys().all(|ev| ev.is_squarefree())
    }

    /// True iff all terms share one total degree; zero counts as homogeneous.
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|ev| ev.degree());
        match degs.next() {
            None => true,
            Some(d0) => degs.all(|d| d == d0),
        }
    }

    pub fn coefficient(&self, ev: &ExponentVector) -> FieldElement {
        self.terms.get(ev).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (ev, c) in other.terms() {
            out.add_term(ev.clone(), c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (ev, c) in other.terms() {
            let neg = self.field.neg(c);
            out.add_term(ev.clone(), neg)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: FieldElement) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.field.clone(), self.s);
        }
        let mut out = Polynomial::zero(self.field.clone(), self.s);
        for (ev, v) in self.terms() {
            out.terms.insert(ev.clone(), self.field.mul(v, c));
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        let mut out = Polynomial::zero(self.field.clone(), self.s);
        for (ea, ca) in self.terms() {
            for (eb, cb) in other.terms() {
                let ev = ea.checked_add(eb)?;
                let c = self.field.mul(ca, cb);
                out.add_term(ev, c)?;
            }
        }
        Ok(out)
    }

    fn check_compatible(&self, other: &Polynomial) -> Result<()> {
        check_same_field(&self.field, &other.field, "polynomial arithmetic")?;
        if self.s != other.s {
            return Err(Error::DimensionMismatch(format!(
                "polynomials in {} and {} variables",
                self.s, other.s
            )));
        }
        Ok(())
    }

    /// Evaluates at a point with coordinates in the same field.
    pub fn eval(&self, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.s {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} for polynomial in {} variables",
                point.len(),
                self.s
            )));
        }
        let fs = &self.field;
        let mut acc = FieldElement::ZERO;
        for (ev, c) in self.terms() {
            let mut term = c;
            for (i, &e) in ev.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let factor = if e == 1 {
                    point[i]
                } else {
                    fs.pow(point[i], e as u64)
                };
                term = fs.mul(term, factor);
                if term.is_zero() {
                    break;
                }
            }
            acc = fs.add(acc, term);
        }
        Ok(acc)
    }

    /// Exponent-complement transform on homogeneous square-free polynomials:
    /// each term t^a becomes t^(1-a) with the same coefficient. The result is
    /// homogeneous square-free of degree s - d, and the map is an involution.
    pub fn star_transform(&self) -> Result<Polynomial> {
        if !self.is_square_free() || !self.is_homogeneous() {
            return Err(Error::NotHomogeneousSquareFree);
        }
        let mut out = Polynomial::zero(self.field.clone(), self.s);
        for (ev, c) in self.terms() {
            out.terms.insert(ev.complement()?, c);
        }
        Ok(out)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (ev, c) in self.terms_desc() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if ev.degree() == 0 {
                write!(f, "{}", c.rep())?;
            } else if c == FieldElement::ONE {
                write!(f, "{ev}")?;
            } else {
                write!(f, "{}*{ev}", c.rep())?;
            }
        }
        Ok(())
    }
}

/// All index subsets of {0, .., s-1} of size d, in lexicographic order of the
/// index tuples (which is grlex-descending order of the 0/1 vectors).
pub(crate) fn combinations(s: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..d).collect();
    if d == 0 {
        return vec![Vec::new()];
    }
    if d > s {
        return out;
    }
    loop {
        out.push(cur.clone());
        // Advance to the next combination.
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + s - d {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..d {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Binomial coefficient as u128, used for basis sizes and budgets.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// The 0/1 exponent vectors of length s with exactly d ones, grlex-descending.
pub fn hypersimplex_monomials(s: usize, d: usize) -> Result<Vec<ExponentVector>> {
    if d < 1 || d > s {
        return Err(Error::BadDegree {
            d,
            msg: format!("need 1 <= d <= s = {s}"),
        });
    }
    Ok(combinations(s, d)
        .into_iter()
        .map(|supp| {
            let mut exps = vec![0u16; s];
            for i in supp {
                exps[i] = 1;
            }
            ExponentVector::new(exps)
        })
        .collect())
}

/// The 0/1 exponent vectors with at most d ones, grlex-descending (so the
/// constant monomial comes last).
pub fn squarefree_monomials_upto(s: usize, d: usize) -> Result<Vec<ExponentVector>> {
    if d > s {
        return Err(Error::BadDegree {
            d,
            msg: format!("need 0 <= d <= s = {s}"),
        });
    }
    let mut out = Vec::new();
    for deg in (1..=d).rev() {
        out.extend(hypersimplex_monomials(s, deg)?);
    }
    out.push(ExponentVector::constant(s));
    Ok(out)
}

/// The grlex-descending union of the monomial supports of `polys`.
fn support_union(polys: &[Polynomial]) -> Vec<ExponentVector> {
    let mut all: Vec<ExponentVector> = polys
        .iter()
        .flat_map(|p| p.terms().map(|(ev, _)| ev.clone()))
        .collect();
    all.sort_by(|a, b| b.cmp(a));
    all.dedup();
    all
}

/// Coefficient matrix of `polys` with columns `cols` (grlex-descending).
fn coefficient_matrix(polys: &[Polynomial], cols: &[ExponentVector]) -> Matrix {
    let mut m = Matrix::zeros(polys.len(), cols.len());
    for (i, p) in polys.iter().enumerate() {
        for (j, ev) in cols.iter().enumerate() {
            m.set(i, j, p.coefficient(ev));
        }
    }
    m
}

/// Replaces a linearly independent family with one spanning the same space
/// whose leading monomials are pairwise distinct. Implemented as Gaussian
/// elimination on the coefficient matrix with columns in grlex-descending
/// order; the reduced rows come back in grlex-descending leading-monomial
/// order, and LM(g_i) never exceeds LM(f_i) once the inputs are sorted the
/// same way. The common zero set is preserved.
pub fn distinct_lm_reduce(polys: &[Polynomial]) -> Result<Vec<Polynomial>> {
    if polys.is_empty() {
        return Ok(Vec::new());
    }
    if polys.iter().any(|p| p.is_zero()) {
        return Err(Error::ZeroInput);
    }
    let field = polys[0].field().clone();
    let s = polys[0].num_vars();
    for p in polys {
        check_same_field(&field, p.field(), "distinct_lm_reduce")?;
        if p.num_vars() != s {
            return Err(Error::DimensionMismatch(
                "mixed variable counts in distinct_lm_reduce".into(),
            ));
        }
    }
    let cols = support_union(polys);
    let m = coefficient_matrix(polys, &cols);
    let (red, rank, _) = rref(&m, &field)?;
    if rank < polys.len() {
        return Err(Error::LinearlyDependent);
    }
    let mut out = Vec::with_capacity(rank);
    for i in 0..rank {
        let p = Polynomial::from_terms(
            field.clone(),
            s,
            cols.iter()
                .enumerate()
                .filter(|(j, _)| !red.get(i, *j).is_zero())
                .map(|(j, ev)| (ev.clone(), red.get(i, j))),
        )?;
        out.push(p);
    }
    Ok(out)
}

/// Tags for the explicit polynomial families that certify weight values.
/// Each family is valid on the stated parameter region only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyTag {
    /// Homogeneous degree-d family for the region 2d + r - 2 < s.
    Thm41,
    /// Homogeneous degree-d family for the region s < 2d - r + 2.
    Thm44,
    /// Degree-at-most-d family for the region d + r - 2 < s.
    Thm410,
    /// Pair (r = 2) at the boundary s = 2d.
    Prop46,
    /// Triple (r = 3) at the boundary s = 2d + 1.
    Prop47,
    /// Triple (r = 3) at the boundary s = 2d.
    Prop48,
    /// Triple (r = 3) at the boundary s = 2d - 1.
    Prop49,
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self {
            FamilyTag::Thm41 => "thm41",
            FamilyTag::Thm44 => "thm44",
            FamilyTag::Thm410 => "thm410",
            FamilyTag::Prop46 => "prop46",
            FamilyTag::Prop47 => "prop47",
            FamilyTag::Prop48 => "prop48",
            FamilyTag::Prop49 => "prop49",
        };
        write!(f, "{tag}")
    }
}

impl FromStr for FamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<FamilyTag> {
        match s {
            "thm41" => Ok(FamilyTag::Thm41),
            "thm44" => Ok(FamilyTag::Thm44),
            "thm410" => Ok(FamilyTag::Thm410),
            "prop46" => Ok(FamilyTag::Prop46),
            "prop47" => Ok(FamilyTag::Prop47),
            "prop48" => Ok(FamilyTag::Prop48),
            "prop49" => Ok(FamilyTag::Prop49),
            other => Err(Error::BadParameters(format!("unknown family tag {other}"))),
        }
    }
}

/// t_i - t_j with 1-based variable indices.
fn binomial_diff(fs: &Arc<FieldSpec>, s: usize, i: usize, j: usize) -> Polynomial {
    let ti = Polynomial::variable(fs.clone(), s, i - 1);
    let tj = Polynomial::variable(fs.clone(), s, j - 1);
    ti.sub(&tj).expect("same ring")
}

/// t_i - 1 with a 1-based variable index.
fn shifted_var(fs: &Arc<FieldSpec>, s: usize, i: usize) -> Polynomial {
    let ti = Polynomial::variable(fs.clone(), s, i - 1);
    let one = Polynomial::one(fs.clone(), s);
    ti.sub(&one).expect("same ring")
}

fn product(fs: &Arc<FieldSpec>, s: usize, factors: Vec<Polynomial>) -> Polynomial {
    let mut acc = Polynomial::one(fs.clone(), s);
    for f in factors {
        acc = acc.mul(&f).expect("same ring");
    }
    acc
}

/// Product of the monomial t_j over the given 1-based indices.
fn monomial_over(fs: &Arc<FieldSpec>, s: usize, indices: impl Iterator<Item = usize>) -> Polynomial {
    let mut exps = vec![0u16; s];
    for i in indices {
        exps[i - 1] = 1;
    }
    Polynomial::monomial(fs.clone(), ExponentVector::new(exps), FieldElement::ONE)
}

fn region_err(ineq: &str, q: u32, s: usize, d: usize, r: usize) -> Error {
    Error::RegionViolation(format!("{ineq} (q={q}, s={s}, d={d}, r={r})"))
}

/// Builds the explicit r-polynomial family for the given tag. The output is
/// square-free, linearly independent, homogeneous of degree d except for
/// `Thm410` (degree at most d), and r = 0 yields an empty family.
pub fn extremal_family(
    kind: FamilyTag,
    fs: &Arc<FieldSpec>,
    s: usize,
    d: usize,
    r: usize,
) -> Result<Vec<Polynomial>> {
    if s < 2 || d < 1 || d > s {
        return Err(Error::BadParameters(format!(
            "extremal_family needs s >= 2 and 1 <= d <= s, got s={s}, d={d}"
        )));
    }
    if r == 0 {
        return Ok(Vec::new());
    }
    let q = fs.q();
    let fam: Vec<Polynomial> = match kind {
        FamilyTag::Thm41 => {
            if r as u128 > binomial(s, d) {
                return Err(Error::BadParameters(format!(
                    "r={r} exceeds the basis size C({s},{d})"
                )));
            }
            if 2 * d + r >= s + 2 {
                return Err(region_err("2d+r-2 < s", q, s, d, r));
            }
            let prefix: Vec<Polynomial> = (1..d)
                .map(|j| binomial_diff(fs, s, 2 * j - 1, 2 * j))
                .collect();
            (1..=r)
                .map(|i| {
                    let mut fac = prefix.clone();
                    fac.push(binomial_diff(fs, s, 2 * d + i - 2, 2 * d + i - 1));
                    product(fs, s, fac)
                })
                .collect()
        }
        FamilyTag::Thm44 => {
            if r as u128 > binomial(s, d) {
                return Err(Error::BadParameters(format!(
                    "r={r} exceeds the basis size C({s},{d})"
                )));
            }
            if s + r >= 2 * d + 2 {
                return Err(region_err("s < 2d-r+2", q, s, d, r));
            }
            let v = s - d;
            if v == 0 {
                // d = s forces r = 1; the lone basis monomial is the family.
                return Ok(vec![monomial_over(fs, s, 1..=s)]);
            }
            let prefix: Vec<Polynomial> = (1..v)
                .map(|j| binomial_diff(fs, s, 2 * j - 1, 2 * j))
                .collect();
            (1..=r)
                .map(|i| {
                    let (a, b) = (2 * v + i - 2, 2 * v + i - 1);
                    let mut fac = prefix.clone();
                    fac.push(binomial_diff(fs, s, a, b));
                    fac.push(monomial_over(
                        fs,
                        s,
                        (2 * v - 1..=s).filter(|&j| j != a && j != b),
                    ));
                    product(fs, s, fac)
                })
                .collect()
        }
        FamilyTag::Thm410 => {
            let dim: u128 = (0..=d).map(|i| binomial(s, i)).sum();
            if r as u128 > dim {
                return Err(Error::BadParameters(format!(
                    "r={r} exceeds the basis size of degree-<= {d} monomials"
                )));
            }
            if d + r >= s + 2 {
                return Err(region_err("d+r-2 < s", q, s, d, r));
            }
            let prefix: Vec<Polynomial> = (1..d).map(|j| shifted_var(fs, s, j)).collect();
            (1..=r)
                .map(|i| {
                    let mut fac = prefix.clone();
                    fac.push(shifted_var(fs, s, d + i - 1));
                    product(fs, s, fac)
                })
                .collect()
        }
        FamilyTag::Prop46 => {
            if s != 2 * d {
                return Err(region_err("s = 2d", q, s, d, r));
            }
            if r != 2 {
                return Err(region_err("r = 2", q, s, d, r));
            }
            let prefix: Vec<Polynomial> = (1..d)
                .map(|j| binomial_diff(fs, s, 2 * j - 1, 2 * j))
                .collect();
            let mut f1 = prefix.clone();
            f1.push(binomial_diff(fs, s, 2 * d - 1, 2 * d));
            let mut f2 = prefix;
            f2.push(monomial_over(fs, s, std::iter::once(2 * d)));
            vec![product(fs, s, f1), product(fs, s, f2)]
        }
        FamilyTag::Prop47 => {
            if s != 2 * d + 1 {
                return Err(region_err("s = 2d+1", q, s, d, r));
            }
            if r != 3 {
                return Err(region_err("r = 3", q, s, d, r));
            }
            if binomial(s, d) < 3 {
                return Err(Error::BadParameters(format!(
                    "basis size C({s},{d}) must be at least 3"
                )));
            }
            let prefix: Vec<Polynomial> = (1..d)
                .map(|j| binomial_diff(fs, s, 2 * j - 1, 2 * j))
                .collect();
            (1..=3)
                .map(|i| {
                    let mut fac = prefix.clone();
                    fac.push(monomial_over(fs, s, std::iter::once(2 * d - 2 + i)));
                    product(fs, s, fac)
                })
                .collect()
        }
        FamilyTag::Prop48 => {
            if s != 2 * d {
                return Err(region_err("s = 2d", q, s, d, r));
            }
            if r != 3 {
                return Err(region_err("r = 3", q, s, d, r));
            }
            if binomial(s, d) < 3 || d < 2 {
                return Err(Error::BadParameters(format!(
                    "basis size C({s},{d}) must be at least 3"
                )));
            }
            let prefix: Vec<Polynomial> = (1..d.saturating_sub(1))
                .map(|j| binomial_diff(fs, s, 2 * j - 1, 2 * j))
                .collect();
            let tail = |pairs: Vec<Polynomial>| {
                let mut fac = prefix.clone();
                fac.extend(pairs);
                product(fs, s, fac)
            };
            vec![
                tail(vec![
                    binomial_diff(fs, s, 2 * d - 3, 2 * d - 2),
                    binomial_diff(fs, s, 2 * d - 1, 2 * d),
                ]),
                tail(vec![
                    binomial_diff(fs, s, 2 * d - 3, 2 * d - 1),
                    binomial_diff(fs, s, 2 * d - 2, 2 * d),
                ]),
                tail(vec![
                    binomial_diff(fs, s, 2 * d - 3, 2 * d - 2),
                    monomial_over(fs, s, std::iter::once(2 * d)),
                ]),
            ]
        }
        FamilyTag::Prop49 => {
            if s != 2 * d - 1 {
                return Err(region_err("s = 2d-1", q, s, d, r));
            }
            if r != 3 {
                return Err(region_err("r = 3", q, s, d, r));
            }
            if binomial(s, d) < 3 || d < 2 {
                return Err(Error::BadParameters(format!(
                    "basis size C({s},{d}) must be at least 3"
                )));
            }
            let prefix: Vec<Polynomial> = (1..d.saturating_sub(1))
                .map(|j| binomial_diff(fs, s, 2 * j - 1, 2 * j))
                .collect();
            let with_pair = |a: usize, b: usize| {
                let mut fac = prefix.clone();
                fac.push(monomial_over(fs, s, [a, b].into_iter()));
                product(fs, s, fac)
            };
            vec![
                with_pair(2 * d - 3, 2 * d - 2),
                with_pair(2 * d - 3, 2 * d - 1),
                with_pair(2 * d - 2, 2 * d - 1),
            ]
        }
    };
    validate_family(kind, &fam, s, d, r)?;
    Ok(fam)
}

fn validate_family(
    kind: FamilyTag,
    fam: &[Polynomial],
    s: usize,
    d: usize,
    r: usize,
) -> Result<()> {
    if fam.len() != r {
        return Err(Error::InternalInconsistency(format!(
            "family {kind} built {} polynomials, expected {r}",
            fam.len()
        )));
    }
    for p in fam {
        if p.is_zero() || !p.is_square_free() {
            return Err(Error::InternalInconsistency(format!(
                "family {kind} produced a zero or non-square-free member"
            )));
        }
        match kind {
            FamilyTag::Thm410 => {
                if p.degree().unwrap_or(0) as usize > d {
                    return Err(Error::InternalInconsistency(format!(
                        "family {kind} member exceeds degree {d}"
                    )));
                }
            }
            _ => {
                if !p.is_homogeneous() || p.degree() != Some(d as u32) {
                    return Err(Error::InternalInconsistency(format!(
                        "family {kind} member is not homogeneous of degree {d}"
                    )));
                }
            }
        }
    }
    // Construction-time rank check instead of trusting the pattern.
    let cols = support_union(fam);
    let m = coefficient_matrix(fam, &cols);
    let field = fam[0].field().clone();
    let (_, rank, _) = rref(&m, &field)?;
    if rank != r {
        return Err(Error::InternalInconsistency(format!(
            "family {kind} (s={s}, d={d}, r={r}) is not linearly independent"
        )));
    }
    Ok(())
}

// --- JSON interchange -------------------------------------------------------

/// One serialized term: exponent vector plus integer coefficient rep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub exps: Vec<u16>,
    pub coeff: u32,
}

/// Serialized polynomial with terms in grlex-descending order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub s: usize,
    pub terms: Vec<TermJson>,
}

impl From<&Polynomial> for PolynomialJson {
    fn from(p: &Polynomial) -> PolynomialJson {
        PolynomialJson {
            s: p.num_vars(),
            terms: p
                .terms_desc()
                .map(|(ev, c)| TermJson {
                    exps: ev.exps().to_vec(),
                    coeff: c.rep(),
                })
                .collect(),
        }
    }
}

impl PolynomialJson {
    /// Rebuilds the polynomial over the given field.
    pub fn into_polynomial(self, fs: &Arc<FieldSpec>) -> Result<Polynomial> {
        Polynomial::from_terms(
            fs.clone(),
            self.s,
            self.terms
                .into_iter()
                .map(|t| {
                    let c = fs.element(t.coeff)?;
                    Ok((ExponentVector::new(t.exps), c))
                })
                .collect::<Result<Vec<_>>>()?,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    fn ev(exps: &[u16]) -> ExponentVector {
        ExponentVector::new(exps.to_vec())
    }

    #[test]
    fn grlex_examples() {
        assert_eq!(
            grlex_compare(&ev(&[1, 0]), &ev(&[0, 1])).unwrap(),
            Ordering::Greater
        );
        assert_eq!(
            grlex_compare(&ev(&[1, 1, 0]), &ev(&[1, 0, 0])).unwrap(),
            Ordering::Greater
        );
        assert_eq!(
            grlex_compare(&ev(&[1, 0, 1]), &ev(&[0, 1, 1])).unwrap(),
            Ordering::Greater
        );
        assert!(grlex_compare(&ev(&[1, 0]), &ev(&[1, 0, 0])).is_err());
    }

    #[test]
    fn leading_monomials() {
        let f3 = make_field(3).unwrap();
        let t12 = Polynomial::monomial(f3.clone(), ev(&[1, 1, 0, 0]), FieldElement::ONE);
        let t34 = Polynomial::monomial(f3.clone(), ev(&[0, 0, 1, 1]), FieldElement::ONE);
        let f = t12.add(&t34).unwrap();
        let (lm, lc) = f.leading_monomial().unwrap();
        assert_eq!(lm, &ev(&[1, 1, 0, 0]));
        assert_eq!(lc, FieldElement::ONE);

        let g = Polynomial::from_terms(
            f3.clone(),
            3,
            [
                (ev(&[0, 1, 0]), FieldElement(2)),
                (ev(&[0, 0, 1]), FieldElement::ONE),
            ],
        )
        .unwrap();
        let (lm, lc) = g.leading_monomial().unwrap();
        assert_eq!(lm, &ev(&[0, 1, 0]));
        assert_eq!(lc, FieldElement(2));

        let h = shifted_var(&f3, 3, 1);
        let (lm, lc) = h.leading_monomial().unwrap();
        assert_eq!(lm, &ev(&[1, 0, 0]));
        assert_eq!(lc, FieldElement::ONE);

        assert!(Polynomial::zero(f3, 2).leading_monomial().is_err());
    }

    #[test]
    fn square_free_detection() {
        let f3 = make_field(3).unwrap();
        let yes = Polynomial::from_terms(
            f3.clone(),
            3,
            [
                (ev(&[1, 1, 0]), FieldElement::ONE),
                (ev(&[0, 0, 1]), FieldElement::ONE),
            ],
        )
        .unwrap();
        assert!(yes.is_square_free());
        let no = Polynomial::from_terms(
            f3.clone(),
            2,
            [
                (ev(&[2, 0]), FieldElement::ONE),
                (ev(&[0, 1]), FieldElement::ONE),
            ],
        )
        .unwrap();
        assert!(!no.is_square_free());
        assert!(Polynomial::zero(f3, 2).is_square_free());
    }

    #[test]
    fn hypersimplex_basis() {
        assert_eq!(hypersimplex_monomials(4, 2).unwrap().len(), 6);
        assert_eq!(
            hypersimplex_monomials(3, 3).unwrap(),
            vec![ev(&[1, 1, 1])]
        );
        let vs = hypersimplex_monomials(5, 1).unwrap();
        assert_eq!(vs.len(), 5);
        assert_eq!(vs[0], ev(&[1, 0, 0, 0, 0]));
        assert_eq!(vs[4], ev(&[0, 0, 0, 0, 1]));
        // grlex-descending throughout
        for w in vs.windows(2) {
            assert!(w[0] > w[1]);
        }
        assert!(hypersimplex_monomials(4, 0).is_err());
        assert!(hypersimplex_monomials(4, 5).is_err());
    }

    #[test]
    fn squarefree_upto_basis() {
        let vs = squarefree_monomials_upto(4, 1).unwrap();
        assert_eq!(vs.len(), 5);
        assert_eq!(vs.last().unwrap(), &ExponentVector::constant(4));
        assert_eq!(squarefree_monomials_upto(2, 2).unwrap().len(), 4);
        assert_eq!(
            squarefree_monomials_upto(3, 0).unwrap(),
            vec![ev(&[0, 0, 0])]
        );
        for w in squarefree_monomials_upto(4, 3).unwrap().windows(2) {
            assert!(w[0] > w[1]);
        }
    }

    #[test]
    fn counts_match_binomials() {
        for s in 1..=8 {
            for d in 1..=s {
                assert_eq!(
                    hypersimplex_monomials(s, d).unwrap().len() as u128,
                    binomial(s, d)
                );
                let want: u128 = (0..=d).map(|i| binomial(s, i)).sum();
                assert_eq!(squarefree_monomials_upto(s, d).unwrap().len() as u128, want);
            }
        }
    }

    #[test]
    fn lm_reduce_examples() {
        let f3 = make_field(3).unwrap();
        let t12 = Polynomial::monomial(f3.clone(), ev(&[1, 1, 0, 0]), FieldElement::ONE);
        let t34 = Polynomial::monomial(f3.clone(), ev(&[0, 0, 1, 1]), FieldElement::ONE);
        let sum = t12.add(&t34).unwrap();
        let out = distinct_lm_reduce(&[t12.clone(), sum]).unwrap();
        let lms: Vec<_> = out
            .iter()
            .map(|p| p.leading_monomial().unwrap().0.clone())
            .collect();
        assert_eq!(lms, vec![ev(&[1, 1, 0, 0]), ev(&[0, 0, 1, 1])]);

        let t1 = Polynomial::variable(f3.clone(), 2, 0);
        let t2 = Polynomial::variable(f3.clone(), 2, 1);
        let out = distinct_lm_reduce(&[t1.clone(), t2.clone()]).unwrap();
        assert_eq!(out, vec![t1.clone(), t2.clone()]);

        let a = t1.add(&t2).unwrap();
        let b = t1.add(&t2.scale(FieldElement(2))).unwrap();
        let out = distinct_lm_reduce(&[a, b]).unwrap();
        let lms: Vec<_> = out
            .iter()
            .map(|p| p.leading_monomial().unwrap().0.clone())
            .collect();
        assert_eq!(lms, vec![ev(&[1, 0]), ev(&[0, 1])]);
    }

    #[test]
    fn lm_reduce_rejects_bad_input() {
        let f3 = make_field(3).unwrap();
        let t1 = Polynomial::variable(f3.clone(), 2, 0);
        assert_eq!(
            distinct_lm_reduce(&[t1.clone(), t1.clone()]),
            Err(Error::LinearlyDependent)
        );
        assert_eq!(
            distinct_lm_reduce(&[t1, Polynomial::zero(f3, 2)]),
            Err(Error::ZeroInput)
        );
    }

    #[test]
    fn star_examples() {
        let f3 = make_field(3).unwrap();
        let t1t2 = Polynomial::monomial(f3.clone(), ev(&[1, 1, 0]), FieldElement::ONE);
        let t3 = Polynomial::variable(f3.clone(), 3, 2);
        assert_eq!(t1t2.star_transform().unwrap(), t3);

        let t1t3 = Polynomial::monomial(f3.clone(), ev(&[1, 0, 1]), FieldElement::ONE);
        let f = t1t2.add(&t1t3).unwrap();
        let t2 = Polynomial::variable(f3.clone(), 3, 1);
        assert_eq!(f.star_transform().unwrap(), t3.add(&t2).unwrap());

        let full = Polynomial::monomial(f3.clone(), ev(&[1, 1, 1]), FieldElement::ONE);
        assert_eq!(
            full.star_transform().unwrap(),
            Polynomial::one(f3.clone(), 3)
        );

        // degree s - d and involution
        assert_eq!(f.star_transform().unwrap().degree(), Some(1));
        assert_eq!(f.star_transform().unwrap().star_transform().unwrap(), f);

        // inhomogeneous input is rejected
        let bad = t1t2.add(&Polynomial::one(f3, 3)).unwrap();
        assert!(bad.star_transform().is_err());
    }

    #[test]
    fn family_thm41_small() {
        let f3 = make_field(3).unwrap();
        let fam = extremal_family(FamilyTag::Thm41, &f3, 3, 1, 2).unwrap();
        assert_eq!(fam[0], binomial_diff(&f3, 3, 1, 2));
        assert_eq!(fam[1], binomial_diff(&f3, 3, 2, 3));
    }

    #[test]
    fn family_thm410_small() {
        let f3 = make_field(3).unwrap();
        let fam = extremal_family(FamilyTag::Thm410, &f3, 3, 1, 2).unwrap();
        assert_eq!(fam[0], shifted_var(&f3, 3, 1));
        assert_eq!(fam[1], shifted_var(&f3, 3, 2));
    }

    #[test]
    fn family_prop46_small() {
        let f3 = make_field(3).unwrap();
        let fam = extremal_family(FamilyTag::Prop46, &f3, 4, 2, 2).unwrap();
        let want0 = binomial_diff(&f3, 4, 1, 2)
            .mul(&binomial_diff(&f3, 4, 3, 4))
            .unwrap();
        let want1 = binomial_diff(&f3, 4, 1, 2)
            .mul(&Polynomial::variable(f3.clone(), 4, 3))
            .unwrap();
        assert_eq!(fam, vec![want0, want1]);
    }

    #[test]
    fn family_regions_are_enforced() {
        let f3 = make_field(3).unwrap();
        assert!(matches!(
            extremal_family(FamilyTag::Thm41, &f3, 3, 1, 3),
            Err(Error::RegionViolation(_))
        ));
        assert!(matches!(
            extremal_family(FamilyTag::Prop46, &f3, 5, 2, 2),
            Err(Error::RegionViolation(_))
        ));
        assert!(matches!(
            extremal_family(FamilyTag::Thm44, &f3, 5, 2, 1),
            Err(Error::RegionViolation(_))
        ));
        // r = 0 is a harmless identity
        assert!(extremal_family(FamilyTag::Thm41, &f3, 4, 1, 0)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn families_are_squarefree_independent() {
        let f4 = make_field(4).unwrap();
        let cases = [
            (FamilyTag::Thm41, 5, 1, 3),
            (FamilyTag::Thm41, 6, 2, 2),
            (FamilyTag::Thm44, 5, 4, 3),
            (FamilyTag::Thm44, 4, 3, 2),
            (FamilyTag::Thm44, 3, 3, 1),
            (FamilyTag::Thm410, 5, 2, 3),
            (FamilyTag::Prop46, 6, 3, 2),
            (FamilyTag::Prop47, 5, 2, 3),
            (FamilyTag::Prop48, 4, 2, 3),
            (FamilyTag::Prop49, 3, 2, 3),
        ];
        for (kind, s, d, r) in cases {
            let fam = extremal_family(kind, &f4, s, d, r).unwrap();
            assert_eq!(fam.len(), r, "{kind} s={s} d={d}");
            for p in &fam {
                assert!(p.is_square_free());
            }
        }
    }

    #[test]
    fn poly_json_round_trip() {
        let f5 = make_field(5).unwrap();
        let p = Polynomial::from_terms(
            f5.clone(),
            3,
            [
                (ev(&[1, 1, 0]), FieldElement(2)),
                (ev(&[0, 0, 1]), FieldElement(4)),
            ],
        )
        .unwrap();
        let js = PolynomialJson::from(&p);
        assert_eq!(js.terms[0].exps, vec![1, 1, 0]);
        let back = js.into_polynomial(&f5).unwrap();
        assert_eq!(back, p);
    }
}
