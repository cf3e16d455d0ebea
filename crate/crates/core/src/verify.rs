//! Verification sweeps: formula-vs-oracle comparisons, randomized bound
//! checks, exhaustive shadow checks, and dual-code identities.
//!
//! Each runner produces a [`SuiteReport`] whose JSON rendering is
//! byte-deterministic for a fixed configuration: iteration orders are fixed,
//! maps are ordered, and the randomized sweeps run from a caller-supplied
//! seed.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{
    affine_hilbert_fn, footprint_zero_bound, ghw_formula, shadow_lower_bound, shadow_size,
    zero_count_bound, BoundVariant, FormulaStatus,
};
use crate::codes::{
    build_affine_toric, build_code, build_delta_prime_code, build_projective_dual_code,
    build_projective_toric, nullspace, CodeFamily,
};
use crate::error::{Error, Result};
use crate::gf::{make_field, FieldElement, FieldSpec};
use crate::linalg::{rref, Matrix};
use crate::poly::{
    combinations, hypersimplex_monomials, squarefree_monomials_upto, ExponentVector, Polynomial,
};
use crate::torus::{count_common_zeros, enumerate_affine_torus, enumerate_projective_torus};
use crate::weights::{gaussian_binomial, ghw_bruteforce, SearchOpts};

/// One verified statement.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteCheck {
    pub id: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
}

impl SuiteCheck {
    fn new(id: String, expected: String, got: String) -> SuiteCheck {
        let pass = expected == got;
        SuiteCheck {
            id,
            expected,
            got,
            pass,
        }
    }

    fn judged(id: String, expected: String, got: String, pass: bool) -> SuiteCheck {
        SuiteCheck {
            id,
            expected,
            got,
            pass,
        }
    }
}

/// Outcome of one verification sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub suite: String,
    pub q_max: u32,
    pub s_max: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    pub checks: Vec<SuiteCheck>,
    pub passed: usize,
    pub failed: usize,
}

impl SuiteReport {
    fn new(suite: &str, q_max: u32, s_max: usize, checks: Vec<SuiteCheck>) -> SuiteReport {
        let passed = checks.iter().filter(|c| c.pass).count();
        let failed = checks.len() - passed;
        SuiteReport {
            schema_version: 1,
            suite: suite.into(),
            q_max,
            s_max,
            seed: None,
            samples: None,
            checks,
            passed,
            failed,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Prime powers in [2, q_max].
pub fn prime_powers_upto(q_max: u32) -> Vec<u32> {
    (2..=q_max)
        .filter(|&q| crate::gf::prime_power_split(q as u64).is_ok())
        .collect()
}

/// Wherever the oracle has an exact formula within the subspace budget, the
/// brute-force search must reproduce it.
pub fn run_formula_suite(
    q_max: u32,
    s_max: usize,
    budget: u128,
    threads: usize,
) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let opts = SearchOpts { budget, threads };
    for q in prime_powers_upto(q_max) {
        let fs = make_field(q as u64)?;
        for s in 2..=s_max {
            for family in [
                CodeFamily::Affine,
                CodeFamily::Projective,
                CodeFamily::SquarefreeLeq,
            ] {
                for d in 1..=s {
                    let k = crate::bounds::dimension_formula(family, q, s, d)? as usize;
                    let mut code = None;
                    for r in 1..=k.min(3) {
                        let formula = ghw_formula(family, q, s, d, r)?;
                        if formula.status != FormulaStatus::Exact {
                            continue;
                        }
                        let needed = gaussian_binomial(k, r, q as u64).unwrap_or(u128::MAX);
                        if needed > budget {
                            continue;
                        }
                        if code.is_none() {
                            code = Some(build_code(family, &fs, s, d, u128::MAX)?);
                        }
                        let brute = ghw_bruteforce(code.as_ref().unwrap(), r, &opts)?;
                        checks.push(SuiteCheck::new(
                            format!("formulas {family} q={q} s={s} d={d} r={r} [{}]", formula.source),
                            format!("{}", formula.value.expect("exact has value")),
                            format!("{brute}"),
                        ));
                    }
                }
            }
        }
    }
    Ok(SuiteReport::new("formulas", q_max, s_max, checks))
}

/// Draws a linearly independent family of `r` random polynomials supported on
/// `basis`, each member nonzero.
pub fn random_family(
    fs: &Arc<FieldSpec>,
    basis: &[ExponentVector],
    r: usize,
    rng: &mut impl Rng,
) -> Result<Vec<Polynomial>> {
    let s = basis.first().map_or(0, |ev| ev.num_vars());
    let q = fs.q();
    for _ in 0..1000 {
        let mut coeff_rows = Vec::with_capacity(r);
        for _ in 0..r {
            loop {
                let row: Vec<FieldElement> = (0..basis.len())
                    .map(|_| FieldElement(rng.gen_range(0..q)))
                    .collect();
                if row.iter().any(|c| !c.is_zero()) {
                    coeff_rows.push(row);
                    break;
                }
            }
        }
        let m = Matrix::from_rows(coeff_rows.clone())?;
        let (_, rank, _) = rref(&m, fs)?;
        if rank < r {
            continue;
        }
        return coeff_rows
            .into_iter()
            .map(|row| {
                Polynomial::from_terms(
                    fs.clone(),
                    s,
                    basis
                        .iter()
                        .cloned()
                        .zip(row)
                        .filter(|(_, c)| !c.is_zero()),
                )
            })
            .collect();
    }
    Err(Error::InternalInconsistency(
        "failed to sample an independent family".into(),
    ))
}

/// Randomized sweep: sampled square-free families never beat the zero-count
/// bounds, and homogeneous families satisfy the affine/projective count
/// identity.
pub fn run_bounds_suite(
    q_max: u32,
    s_max: usize,
    samples: usize,
    seed: u64,
) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    for q in prime_powers_upto(q_max) {
        let fs = make_field(q as u64)?;
        for s in 2..=s_max {
            let torus = enumerate_affine_torus(&fs, s)?;
            let proj = enumerate_projective_torus(&fs, s)?;
            for d in 1..s {
                for variant in [BoundVariant::Homogeneous, BoundVariant::AtMost] {
                    let basis = match variant {
                        BoundVariant::Homogeneous => hypersimplex_monomials(s, d)?,
                        BoundVariant::AtMost => squarefree_monomials_upto(s, d)?,
                    };
                    for r in 1..=3.min(basis.len()) {
                        let bound = match zero_count_bound(q, s, d, r, variant) {
                            Ok(b) => Some(b),
                            Err(Error::RegionViolation(_)) => None,
                            Err(e) => return Err(e),
                        };
                        if bound.is_none() && variant == BoundVariant::AtMost {
                            continue;
                        }
                        let mut worst_excess: i128 = i128::MIN;
                        let mut identity_failures = 0usize;
                        for _ in 0..samples {
                            let fam = random_family(&fs, &basis, r, &mut rng)?;
                            let count = count_common_zeros(&fam, &torus)?;
                            if let Some(b) = &bound {
                                worst_excess = worst_excess.max(count as i128 - b.value as i128);
                            }
                            if variant == BoundVariant::Homogeneous {
                                let pcount = count_common_zeros(&fam, &proj)?;
                                if (q as u64 - 1) * pcount != count {
                                    identity_failures += 1;
                                }
                            }
                        }
                        if let Some(b) = &bound {
                            checks.push(SuiteCheck::judged(
                                format!(
                                    "bounds {variant:?} q={q} s={s} d={d} r={r} [{}]",
                                    b.sources.join(", ")
                                ),
                                "no sample above the bound".into(),
                                if worst_excess <= 0 {
                                    "no sample above the bound".into()
                                } else {
                                    format!("a sample exceeded the bound by {worst_excess}")
                                },
                                worst_excess <= 0,
                            ));
                        }
                        if variant == BoundVariant::Homogeneous {
                            checks.push(SuiteCheck::judged(
                                format!("torus-count identity q={q} s={s} d={d} r={r}"),
                                "(q-1)|V_proj| = |V_affine| on every sample".into(),
                                if identity_failures == 0 {
                                    "(q-1)|V_proj| = |V_affine| on every sample".into()
                                } else {
                                    format!("{identity_failures} samples violated the identity")
                                },
                                identity_failures == 0,
                            ));
                        }
                    }
                }
            }
        }
    }
    let mut report = SuiteReport::new("bounds", q_max, s_max, checks);
    report.seed = Some(seed);
    report.samples = Some(samples);
    Ok(report)
}

/// Exhaustive shadow lower bounds and the footprint identity.
pub fn run_shadows_suite(q_max: u32, s_max: usize) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for q in prime_powers_upto(q_max) {
        if q == 2 {
            continue; // 0/1 vectors with a 1 are already outside the grid
        }
        for s in 2..=s_max {
            let u = s * (q as usize - 2);
            let frobenius_walls: Vec<ExponentVector> = (0..s)
                .map(|i| {
                    let mut exps = vec![0u16; s];
                    exps[i] = (q - 1) as u16;
                    ExponentVector::new(exps)
                })
                .collect();
            for d in 1..=s {
                for variant in [BoundVariant::Homogeneous, BoundVariant::AtMost] {
                    let pool = match variant {
                        BoundVariant::Homogeneous => hypersimplex_monomials(s, d)?,
                        BoundVariant::AtMost => squarefree_monomials_upto(s, d)?,
                    };
                    for r in 1..=3.min(pool.len()) {
                        if d + r >= s + 2 {
                            continue;
                        }
                        let bound = shadow_lower_bound(q, s, d, r, variant)?;
                        let mut min_shadow = u64::MAX;
                        let mut identity_ok = true;
                        for subset in combinations(pool.len(), r) {
                            let members: Vec<ExponentVector> =
                                subset.iter().map(|&i| pool[i].clone()).collect();
                            let size = shadow_size(&members, q, s)?;
                            min_shadow = min_shadow.min(size);
                            let mut gens = members.clone();
                            gens.extend(frobenius_walls.iter().cloned());
                            let hf = affine_hilbert_fn(&gens, s, u)?;
                            if footprint_zero_bound(&members, q, s)? != hf {
                                identity_ok = false;
                            }
                        }
                        checks.push(SuiteCheck::judged(
                            format!("shadow bound {variant:?} q={q} s={s} d={d} r={r}"),
                            format!("min |shadow| >= {bound}"),
                            format!("min |shadow| = {min_shadow}"),
                            min_shadow >= bound,
                        ));
                        checks.push(SuiteCheck::judged(
                            format!("footprint identity {variant:?} q={q} s={s} d={d} r={r}"),
                            "footprint = hilbert count for every subset".into(),
                            if identity_ok {
                                "footprint = hilbert count for every subset".into()
                            } else {
                                "identity violated".into()
                            },
                            identity_ok,
                        ));
                    }
                }
            }
        }
    }
    Ok(SuiteReport::new("shadows", q_max, s_max, checks))
}

fn matrices_equal(a: &Matrix, b: &Matrix) -> bool {
    a == b
}

/// Dual-code identities: the grid-complement code equals the nullspace dual,
/// cross products vanish, and the dimension formulas hold; likewise for the
/// projective side.
pub fn run_duals_suite(q_max: u32, s_max: usize) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for q in prime_powers_upto(q_max) {
        if q == 2 {
            continue;
        }
        let fs = make_field(q as u64)?;
        for s in 2..=s_max {
            let torus = enumerate_affine_torus(&fs, s)?;
            for d in 1..=s {
                let cd = build_affine_toric(&fs, s, d)?;
                let dual = build_delta_prime_code(&fs, s, d)?;
                let expected_k = crate::bounds::dimension_formula(CodeFamily::DeltaPrime, q, s, d)?;
                checks.push(SuiteCheck::new(
                    format!("dual dim q={q} s={s} d={d} [Lemma 5.1]"),
                    format!("{expected_k}"),
                    format!("{}", dual.dimension()),
                ));
                let ns = nullspace(cd.generator(), &fs)?;
                checks.push(SuiteCheck::judged(
                    format!("dual matrix q={q} s={s} d={d} [Thm 5.3]"),
                    "RREF(dual) = RREF(nullspace)".into(),
                    if matrices_equal(dual.generator(), &ns) {
                        "RREF(dual) = RREF(nullspace)".into()
                    } else {
                        "matrices differ".into()
                    },
                    matrices_equal(dual.generator(), &ns),
                ));
                // Pairwise orthogonality of the two monomial evaluation sets.
                let delta = hypersimplex_monomials(s, d)?;
                let complement = crate::codes::hat_complement(&fs, s, d)?;
                let mut orthogonal = true;
                let eval = |ev: &ExponentVector| -> Vec<FieldElement> {
                    torus
                        .iter()
                        .map(|p| {
                            let mut acc = FieldElement::ONE;
                            for (i, &e) in ev.exps().iter().enumerate() {
                                if e > 0 {
                                    acc = fs.mul(acc, fs.pow(p[i], e as u64));
                                }
                            }
                            acc
                        })
                        .collect()
                };
                let delta_rows: Vec<Vec<FieldElement>> = delta.iter().map(&eval).collect();
                let comp_rows: Vec<Vec<FieldElement>> =
                    complement.members.iter().map(&eval).collect();
                for a in &delta_rows {
                    for b in &comp_rows {
                        let mut dot = FieldElement::ZERO;
                        for (x, y) in a.iter().zip(b) {
                            dot = fs.add(dot, fs.mul(*x, *y));
                        }
                        if !dot.is_zero() {
                            orthogonal = false;
                        }
                    }
                }
                checks.push(SuiteCheck::judged(
                    format!("orthogonality q={q} s={s} d={d} [Lemma 5.2]"),
                    "all cross products zero".into(),
                    if orthogonal {
                        "all cross products zero".into()
                    } else {
                        "nonzero cross product".into()
                    },
                    orthogonal,
                ));
                // Projective side.
                let cp = build_projective_toric(&fs, s, d)?;
                let pdual = build_projective_dual_code(&fs, s, d)?;
                let pns = nullspace(cp.generator(), &fs)?;
                checks.push(SuiteCheck::judged(
                    format!("projective dual matrix q={q} s={s} d={d} [Thm 5.5]"),
                    "RREF(dual) = RREF(nullspace)".into(),
                    if matrices_equal(pdual.generator(), &pns) {
                        "RREF(dual) = RREF(nullspace)".into()
                    } else {
                        "matrices differ".into()
                    },
                    matrices_equal(pdual.generator(), &pns),
                ));
                let p_expected = crate::bounds::dimension_formula(CodeFamily::ProjDual, q, s, d)?;
                checks.push(SuiteCheck::new(
                    format!("projective dual dim q={q} s={s} d={d}"),
                    format!("{p_expected}"),
                    format!("{}", pdual.dimension()),
                ));
            }
        }
    }
    Ok(SuiteReport::new("duals", q_max, s_max, checks))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_listing() {
        assert_eq!(prime_powers_upto(9), vec![2, 3, 4, 5, 7, 8, 9]);
    }

    #[test]
    fn formula_suite_small_is_green() {
        let rep = run_formula_suite(3, 3, 1_000_000, 1).unwrap();
        assert!(rep.all_passed(), "{:#?}", rep.checks.iter().filter(|c| !c.pass).collect::<Vec<_>>());
        assert!(rep.checks.len() >= 10);
    }

    #[test]
    fn duals_suite_small_is_green() {
        let rep = run_duals_suite(3, 3).unwrap();
        assert!(rep.all_passed());
    }

    #[test]
    fn shadows_suite_small_is_green() {
        let rep = run_shadows_suite(3, 3).unwrap();
        assert!(rep.all_passed());
    }

    #[test]
    fn bounds_suite_tiny_is_green() {
        let rep = run_bounds_suite(3, 3, 25, 0).unwrap();
        assert!(rep.all_passed());
    }

    #[test]
    fn suite_json_is_deterministic() {
        let a = run_formula_suite(3, 3, 100_000, 1).unwrap().to_json();
        let b = run_formula_suite(3, 3, 100_000, 2).unwrap().to_json();
        assert_eq!(a, b);
    }
}
