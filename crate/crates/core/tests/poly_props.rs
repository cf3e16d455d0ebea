//! Properties of the polynomial layer: leading-monomial reduction preserves
//! span and zero sets, the exponent-complement transform mirrors points
//! through coordinatewise inversion, and the extremal families achieve the
//! closed-form weight values on their regions.

use std::cmp::Ordering;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hyperweight::bounds::{ghw_formula, FormulaStatus};
use hyperweight::codes::{rref, CodeFamily, Matrix};
use hyperweight::gf::{make_field, FieldElement};
use hyperweight::poly::{
    binomial, distinct_lm_reduce, extremal_family, grlex_compare, hypersimplex_monomials,
    squarefree_monomials_upto, ExponentVector, FamilyTag, Polynomial, PolynomialJson,
};
use hyperweight::torus::{count_common_zeros, enumerate_affine_torus, enumerate_projective_torus};
use hyperweight::verify::random_family;

fn support_union(polys: &[Polynomial]) -> Vec<ExponentVector> {
    let mut all: Vec<ExponentVector> = polys
        .iter()
        .flat_map(|p| p.terms().map(|(ev, _)| ev.clone()))
        .collect();
    all.sort_by(|a, b| b.cmp(a));
    all.dedup();
    all
}

fn coeff_matrix(polys: &[Polynomial], cols: &[ExponentVector]) -> Matrix {
    let mut m = Matrix::zeros(polys.len(), cols.len());
    for (i, p) in polys.iter().enumerate() {
        for (j, ev) in cols.iter().enumerate() {
            m.set(i, j, p.coefficient(ev));
        }
    }
    m
}

#[test]
fn lm_reduce_shared_lm_pair_over_f3() {
    // [t1*t2, t1*t2 + t3*t4]: the reduced pair splits the leading monomials
    // and keeps the common zero set, point by point over (F_3*)^4.
    let fs = make_field(3).unwrap();
    let t12 = Polynomial::monomial(
        fs.clone(),
        ExponentVector::new(vec![1, 1, 0, 0]),
        FieldElement::ONE,
    );
    let t34 = Polynomial::monomial(
        fs.clone(),
        ExponentVector::new(vec![0, 0, 1, 1]),
        FieldElement::ONE,
    );
    let family = vec![t12.clone(), t12.add(&t34).unwrap()];
    let reduced = distinct_lm_reduce(&family).unwrap();
    let lms: Vec<_> = reduced
        .iter()
        .map(|p| p.leading_monomial().unwrap().0.clone())
        .collect();
    assert_eq!(
        lms,
        vec![
            ExponentVector::new(vec![1, 1, 0, 0]),
            ExponentVector::new(vec![0, 0, 1, 1])
        ]
    );
    let torus = enumerate_affine_torus(&fs, 4).unwrap();
    for p in torus.iter() {
        let za = family.iter().all(|f| f.eval(p).unwrap().is_zero());
        let zb = reduced.iter().all(|f| f.eval(p).unwrap().is_zero());
        assert_eq!(za, zb);
    }

    // [t1 + t2, t1 + 2*t2] over F_3: row reduction splits the leading
    // monomials; zero sets agree over the 4 torus points.
    let t1 = Polynomial::variable(fs.clone(), 2, 0);
    let t2 = Polynomial::variable(fs.clone(), 2, 1);
    let family = vec![
        t1.add(&t2).unwrap(),
        t1.add(&t2.scale(FieldElement(2))).unwrap(),
    ];
    let reduced = distinct_lm_reduce(&family).unwrap();
    let lms: Vec<_> = reduced
        .iter()
        .map(|p| p.leading_monomial().unwrap().0.clone())
        .collect();
    assert_eq!(
        lms,
        vec![ExponentVector::new(vec![1, 0]), ExponentVector::new(vec![0, 1])]
    );
    let torus = enumerate_affine_torus(&fs, 2).unwrap();
    for p in torus.iter() {
        let za = family.iter().all(|f| f.eval(p).unwrap().is_zero());
        let zb = reduced.iter().all(|f| f.eval(p).unwrap().is_zero());
        assert_eq!(za, zb);
    }
}

#[test]
fn lm_reduce_preserves_span_and_zero_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for q in [2u64, 3, 4] {
        let fs = make_field(q).unwrap();
        for s in 2..=4usize {
            let torus = enumerate_affine_torus(&fs, s).unwrap();
            for _ in 0..40 {
                let d = 1 + (s - 1).min(2);
                let basis = squarefree_monomials_upto(s, d).unwrap();
                let r = 2 + (s % 2);
                if r > basis.len() {
                    continue;
                }
                let family = random_family(&fs, &basis, r, &mut rng).unwrap();
                let reduced = distinct_lm_reduce(&family).unwrap();
                assert_eq!(reduced.len(), family.len());

                // pairwise distinct leading monomials
                let lms: Vec<ExponentVector> = reduced
                    .iter()
                    .map(|p| p.leading_monomial().unwrap().0.clone())
                    .collect();
                for i in 0..lms.len() {
                    for j in i + 1..lms.len() {
                        assert_ne!(lms[i], lms[j]);
                    }
                }

                // same row space
                let cols = support_union(&[family.clone(), reduced.clone()].concat());
                let (ra, _, _) = rref(&coeff_matrix(&family, &cols), &fs).unwrap();
                let (rb, _, _) = rref(&coeff_matrix(&reduced, &cols), &fs).unwrap();
                assert_eq!(ra, rb);

                // identical common zero set, point by point
                for p in torus.iter() {
                    let za = family.iter().all(|f| f.eval(p).unwrap().is_zero());
                    let zb = reduced.iter().all(|f| f.eval(p).unwrap().is_zero());
                    assert_eq!(za, zb);
                }

                // leading monomials never grow against the sorted inputs
                let mut sorted_inputs = family.clone();
                sorted_inputs.sort_by(|a, b| {
                    b.leading_monomial()
                        .unwrap()
                        .0
                        .cmp(a.leading_monomial().unwrap().0)
                });
                for (g, f) in reduced.iter().zip(&sorted_inputs) {
                    let lg = g.leading_monomial().unwrap().0.clone();
                    let lf = f.leading_monomial().unwrap().0.clone();
                    assert_ne!(grlex_compare(&lg, &lf).unwrap(), Ordering::Greater);
                }
            }
        }
    }
}

#[test]
fn star_transform_mirrors_points_through_inversion() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for q in [2u64, 3, 4] {
        let fs = make_field(q).unwrap();
        for s in 2..=4usize {
            let torus = enumerate_affine_torus(&fs, s).unwrap();
            for d in 1..=s {
                let basis = hypersimplex_monomials(s, d).unwrap();
                for _ in 0..25 {
                    let f = random_family(&fs, &basis, 1, &mut rng).unwrap().remove(0);
                    let star = f.star_transform().unwrap();
                    assert_eq!(star.degree(), Some((s - d) as u32));
                    assert_eq!(star.star_transform().unwrap(), f);
                    for p in torus.iter() {
                        let inv: Vec<FieldElement> =
                            p.iter().map(|&a| fs.inv(a).unwrap()).collect();
                        assert_eq!(
                            f.eval(p).unwrap().is_zero(),
                            star.eval(&inv).unwrap().is_zero()
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn extremal_families_achieve_exact_formula_values() {
    for q in [3u64, 4] {
        let fs = make_field(q).unwrap();
        for s in 2..=5usize {
            let affine = enumerate_affine_torus(&fs, s).unwrap();
            let projective = enumerate_projective_torus(&fs, s).unwrap();
            let torus_size = affine.len() as u64;
            for d in 1..=s {
                for r in 1..=3usize {
                    if r as u128 > binomial(s, d) {
                        continue;
                    }
                    // Region of the small-degree family.
                    if 2 * d + r < s + 2 {
                        let fam = extremal_family(FamilyTag::Thm41, &fs, s, d, r).unwrap();
                        let zeros = count_common_zeros(&fam, &affine).unwrap();
                        let want = ghw_formula(CodeFamily::Affine, q as u32, s, d, r).unwrap();
                        assert_eq!(want.status, FormulaStatus::Exact);
                        assert_eq!(torus_size - zeros, want.value.unwrap());
                        // Projective counterpart through the count identity.
                        let pzeros = count_common_zeros(&fam, &projective).unwrap();
                        assert_eq!((q - 1) * pzeros, zeros);
                        let pwant =
                            ghw_formula(CodeFamily::Projective, q as u32, s, d, r).unwrap();
                        assert_eq!(
                            projective.len() as u64 - pzeros,
                            pwant.value.unwrap()
                        );
                    }
                    // Region of the large-degree family.
                    if s + r < 2 * d + 2 {
                        let fam = extremal_family(FamilyTag::Thm44, &fs, s, d, r).unwrap();
                        let zeros = count_common_zeros(&fam, &affine).unwrap();
                        let want = ghw_formula(CodeFamily::Affine, q as u32, s, d, r).unwrap();
                        assert_eq!(want.status, FormulaStatus::Exact);
                        assert_eq!(torus_size - zeros, want.value.unwrap());
                    }
                    // Degree-at-most-d family.
                    let dim: u128 = (0..=d).map(|i| binomial(s, i)).sum();
                    if d + r < s + 2 && (r as u128) <= dim {
                        let fam = extremal_family(FamilyTag::Thm410, &fs, s, d, r).unwrap();
                        let zeros = count_common_zeros(&fam, &affine).unwrap();
                        let want =
                            ghw_formula(CodeFamily::SquarefreeLeq, q as u32, s, d, r).unwrap();
                        assert_eq!(want.status, FormulaStatus::Exact);
                        assert_eq!(torus_size - zeros, want.value.unwrap());
                    }
                }
            }
        }
    }
}

fn arb_exps(s: usize, max: u16) -> impl Strategy<Value = ExponentVector> {
    prop::collection::vec(0..=max, s).prop_map(ExponentVector::new)
}

proptest! {
    #[test]
    fn grlex_is_a_total_order(a in arb_exps(4, 3), b in arb_exps(4, 3), c in arb_exps(4, 3)) {
        let ab = grlex_compare(&a, &b).unwrap();
        let ba = grlex_compare(&b, &a).unwrap();
        prop_assert_eq!(ab, ba.reverse());
        prop_assert_eq!(ab == Ordering::Equal, a == b);
        // transitivity of <=
        let ac = grlex_compare(&a, &c).unwrap();
        let bc = grlex_compare(&b, &c).unwrap();
        if ab != Ordering::Greater && bc != Ordering::Greater {
            prop_assert_ne!(ac, Ordering::Greater);
        }
        // degree dominates
        if a.degree() > b.degree() {
            prop_assert_eq!(ab, Ordering::Greater);
        }
    }

    #[test]
    fn polynomial_json_round_trips(
        terms in prop::collection::vec((prop::collection::vec(0u16..=1, 3), 1u32..5), 1..6)
    ) {
        let fs = make_field(5).unwrap();
        let p = Polynomial::from_terms(
            fs.clone(),
            3,
            terms
                .into_iter()
                .map(|(exps, c)| (ExponentVector::new(exps), FieldElement(c))),
        )
        .unwrap();
        let js = serde_json::to_string(&PolynomialJson::from(&p)).unwrap();
        let back: PolynomialJson = serde_json::from_str(&js).unwrap();
        prop_assert_eq!(back.into_polynomial(&fs).unwrap(), p);
    }
}
