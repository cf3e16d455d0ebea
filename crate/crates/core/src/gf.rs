//! Exact arithmetic in F_q for prime powers q.
//!
//! A [`FieldSpec`] fixes one canonical construction of F_q: for q = p^e with
//! e > 1 the elements are residues modulo the *lowest* monic irreducible
//! polynomial of degree e over F_p (in the integer ordering of coefficient
//! strings), so two processes building the same field agree bit-exactly.
//! Elements are encoded as integers in `[0, q)`: the residue itself when
//! e = 1, the base-p digit string of the polynomial-basis coefficients when
//! e > 1.
//!
//! Multiplication goes through log/antilog tables for q ≤ 4096 and falls
//! back to schoolbook polynomial arithmetic above that.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field cardinality accepted by [`make_field`].
pub const DEFAULT_FIELD_CAP: u64 = 1 << 16;

/// Largest q for which log/antilog tables are precomputed.
const TABLE_CAP: u64 = 1 << 12;

/// An element of F_q in its canonical integer encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn rep(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// A fixed construction of the finite field F_q, q = p^e.
#[derive(Debug, Clone)]
pub struct FieldSpec {
    q: u32,
    p: u32,
    e: u32,
    /// Coefficients of the monic degree-e modulus over F_p, index i holding
    /// the coefficient of x^i; empty when e = 1.
    modulus: Vec<u32>,
    theta: FieldElement,
    /// antilog[i] = theta^i for 0 <= i < q-1; empty above `TABLE_CAP`.
    antilog: Vec<u32>,
    /// log[rep] with log[0] unused; empty above `TABLE_CAP`.
    log: Vec<u32>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        // Construction is deterministic per q.
        self.q == other.q
    }
}

impl Eq for FieldSpec {}

/// Splits q into (p, e) with q = p^e, or fails if q is not a prime power.
pub fn prime_power_split(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let mut p = q;
    let mut f = 2u64;
    while f * f <= q {
        if q.is_multiple_of(f) {
            p = f;
            break;
        }
        f += 1;
    }
    let mut rest = q;
    let mut e = 0u32;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    if rest != 1 {
        return Err(Error::NotPrimePower(q));
    }
    Ok((p, e))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2u64;
    while f * f <= n {
        if n.is_multiple_of(f) {
            out.push(f);
            while n.is_multiple_of(f) {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// --- dense polynomial helpers over F_p (coefficient index = power of x) ---

fn poly_trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    // m is monic.
    let mut r: Vec<u32> = a.to_vec();
    poly_trim(&mut r);
    while r.len() >= m.len() {
        let lead = *r.last().unwrap();
        let shift = r.len() - m.len();
        for (i, &c) in m.iter().enumerate() {
            let sub = (lead as u64 * c as u64) % p as u64;
            let cur = r[shift + i] as u64;
            r[shift + i] = ((cur + p as u64 - sub) % p as u64) as u32;
        }
        poly_trim(&mut r);
    }
    r
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-p
/// digits of `code`.
fn monic_from_code(code: u64, deg: u32, p: u32) -> Vec<u32> {
    let mut coeffs = vec![0u32; deg as usize + 1];
    let mut c = code;
    for item in coeffs.iter_mut().take(deg as usize) {
        *item = (c % p as u64) as u32;
        c /= p as u64;
    }
    coeffs[deg as usize] = 1;
    coeffs
}

/// Trial division by every monic polynomial of degree 1..=e/2.
fn is_irreducible(m: &[u32], p: u32) -> bool {
    let e = (m.len() - 1) as u32;
    for deg in 1..=(e / 2) {
        let count = (p as u64).pow(deg);
        for code in 0..count {
            let div = monic_from_code(code, deg, p);
            if poly_rem(m, &div, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// Builds F_q with the default cardinality cap.
    pub fn new(q: u64) -> Result<FieldSpec> {
        FieldSpec::with_cap(q, DEFAULT_FIELD_CAP)
    }

    /// Builds F_q, rejecting q above `cap`.
    pub fn with_cap(q: u64, cap: u64) -> Result<FieldSpec> {
        let (p, e) = prime_power_split(q)?;
        if q > cap {
            return Err(Error::CapExceeded { q, cap });
        }
        let modulus = if e == 1 {
            Vec::new()
        } else {
            let count = (p as u128).pow(e) as u64;
            
            (0..count)
                .map(|code| monic_from_code(code, e, p as u32))
                .find(|m| is_irreducible(m, p as u32))
                .expect("a monic irreducible of every degree exists over F_p")
        };
        let mut fs = FieldSpec {
            q: q as u32,
            p: p as u32,
            e,
            modulus,
            theta: FieldElement(1),
            antilog: Vec::new(),
            log: Vec::new(),
        };
        fs.theta = fs.find_primitive_element();
        if q <= TABLE_CAP {
            fs.build_tables();
        }
        Ok(fs)
    }

    fn find_primitive_element(&self) -> FieldElement {
        let ord = (self.q - 1) as u64;
        let factors = prime_factors(ord);
        for rep in 1..self.q {
            let a = FieldElement(rep);
            let primitive = factors
                .iter()
                .all(|&f| self.pow_raw(a, ord / f) != FieldElement::ONE);
            if primitive {
                return a;
            }
        }
        unreachable!("F_q* is cyclic, so a generator exists");
    }

    fn build_tables(&mut self) {
        let n = (self.q - 1) as usize;
        let mut antilog = Vec::with_capacity(n);
        let mut log = vec![u32::MAX; self.q as usize];
        let mut cur = FieldElement::ONE;
        for i in 0..n {
            antilog.push(cur.0);
            log[cur.0 as usize] = i as u32;
            cur = self.mul_raw(cur, self.theta);
        }
        self.antilog = antilog;
        self.log = log;
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn extension_degree(&self) -> u32 {
        self.e
    }

    /// Coefficients of the modulus polynomial (empty for prime fields).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The designated generator of F_q*: the smallest-rep element of
    /// multiplicative order q - 1.
    #[inline]
    pub fn primitive_element(&self) -> FieldElement {
        self.theta
    }

    /// Checks a rep and wraps it.
    pub fn element(&self, rep: u32) -> Result<FieldElement> {
        if rep < self.q {
            Ok(FieldElement(rep))
        } else {
            Err(Error::FieldMismatch(format!(
                "rep {rep} out of range for F_{}",
                self.q
            )))
        }
    }

    /// All field elements in rep order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    /// All nonzero field elements in rep order.
    pub fn units(&self) -> impl Iterator<Item = FieldElement> {
        (1..self.q).map(FieldElement)
    }

    fn digits(&self, a: u32) -> Vec<u32> {
        let mut out = vec![0u32; self.e as usize];
        let mut v = a;
        for d in out.iter_mut() {
            *d = v % self.p;
            v /= self.p;
        }
        out
    }

    fn undigits(&self, ds: &[u32]) -> u32 {
        let mut out = 0u64;
        for &d in ds.iter().rev() {
            out = out * self.p as u64 + d as u64;
        }
        out as u32
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(a.0 < self.q && b.0 < self.q);
        if self.e == 1 {
            FieldElement((a.0 + b.0) % self.p)
        } else if self.p == 2 {
            FieldElement(a.0 ^ b.0)
        } else {
            let da = self.digits(a.0);
            let db = self.digits(b.0);
            let ds: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
            FieldElement(self.undigits(&ds))
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.e == 1 {
            FieldElement((self.p - a.0) % self.p)
        } else if self.p == 2 {
            a
        } else {
            let ds: Vec<u32> = self
                .digits(a.0)
                .iter()
                .map(|&x| (self.p - x) % self.p)
                .collect();
            FieldElement(self.undigits(&ds))
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    fn mul_raw(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        if self.e == 1 {
            return FieldElement(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32);
        }
        let da = self.digits(a.0);
        let db = self.digits(b.0);
        let mut conv = vec![0u32; 2 * self.e as usize - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                conv[i + j] = ((conv[i + j] as u64 + x as u64 * y as u64) % self.p as u64) as u32;
            }
        }
        let rem = poly_rem(&conv, &self.modulus, self.p);
        let mut ds = vec![0u32; self.e as usize];
        ds[..rem.len()].copy_from_slice(&rem);
        FieldElement(self.undigits(&ds))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if !self.antilog.is_empty() {
            if a.is_zero() || b.is_zero() {
                return FieldElement::ZERO;
            }
            let n = (self.q - 1) as u64;
            let la = self.log[a.0 as usize] as u64;
            let lb = self.log[b.0 as usize] as u64;
            return FieldElement(self.antilog[((la + lb) % n) as usize]);
        }
        self.mul_raw(a, b)
    }

    fn pow_raw(&self, a: FieldElement, mut n: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            n >>= 1;
        }
        acc
    }

    /// a^n with the convention 0^0 = 1.
    pub fn pow(&self, a: FieldElement, n: u64) -> FieldElement {
        if n == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        if !self.antilog.is_empty() {
            let m = (self.q - 1) as u128;
            let la = self.log[a.0 as usize] as u128;
            return FieldElement(self.antilog[((la * n as u128) % m) as usize]);
        }
        self.pow_raw(a, n)
    }

    /// Multiplicative inverse; fails on zero.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        if !self.antilog.is_empty() {
            let n = (self.q - 1) as usize;
            let la = self.log[a.0 as usize] as usize;
            return Ok(FieldElement(self.antilog[(n - la) % n]));
        }
        Ok(self.pow_raw(a, self.q as u64 - 2))
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: FieldElement) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let mut cur = a;
        let mut n = 1u64;
        while cur != FieldElement::ONE {
            cur = self.mul(cur, a);
            n += 1;
        }
        Ok(n)
    }
}

/// Builds the canonical F_q behind a shared handle.
pub fn make_field(q: u64) -> Result<Arc<FieldSpec>> {
    Ok(Arc::new(FieldSpec::new(q)?))
}

/// Checks that two handles talk about the same field.
pub fn check_same_field(a: &FieldSpec, b: &FieldSpec, what: &str) -> Result<()> {
    if a.q() == b.q() {
        Ok(())
    } else {
        Err(Error::FieldMismatch(format!(
            "{what}: F_{} vs F_{}",
            a.q(),
            b.q()
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_splits() {
        assert_eq!(prime_power_split(2).unwrap(), (2, 1));
        assert_eq!(prime_power_split(4).unwrap(), (2, 2));
        assert_eq!(prime_power_split(27).unwrap(), (3, 3));
        assert_eq!(prime_power_split(49).unwrap(), (7, 2));
        assert_eq!(prime_power_split(1), Err(Error::NotPrimePower(1)));
        assert_eq!(prime_power_split(6), Err(Error::NotPrimePower(6)));
        assert_eq!(prime_power_split(12), Err(Error::NotPrimePower(12)));
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            FieldSpec::with_cap(256, 128),
            Err(Error::CapExceeded { q: 256, cap: 128 })
        ));
        // 2^17 is a prime power above the default cap.
        assert!(matches!(
            FieldSpec::new(1 << 17),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn f3_theta() {
        let fs = make_field(3).unwrap();
        assert_eq!(fs.primitive_element().rep(), 2);
    }

    #[test]
    fn f5_theta_has_order_four() {
        let fs = make_field(5).unwrap();
        let theta = fs.primitive_element();
        assert_eq!(theta.rep(), 2);
        // Direct powering.
        assert_eq!(fs.order(theta).unwrap(), 4);
    }

    #[test]
    fn f4_modulus_and_theta() {
        let fs = make_field(4).unwrap();
        // x^2 + x + 1 is the unique monic irreducible quadratic over F_2.
        assert_eq!(fs.modulus(), &[1, 1, 1]);
        let x = fs.primitive_element();
        assert_eq!(x.rep(), 2);
        assert_ne!(x, FieldElement::ONE);
        assert_eq!(fs.pow(x, 3), FieldElement::ONE);
    }

    #[test]
    fn f2_theta_is_one() {
        let fs = make_field(2).unwrap();
        assert_eq!(fs.primitive_element().rep(), 1);
    }

    #[test]
    fn f7_theta() {
        let fs = make_field(7).unwrap();
        // 2 has order 3 in F_7*, 3 has order 6.
        assert_eq!(fs.order(FieldElement(2)).unwrap(), 3);
        assert_eq!(fs.order(FieldElement(3)).unwrap(), 6);
        assert_eq!(fs.primitive_element().rep(), 3);
    }

    #[test]
    fn inverses() {
        let f5 = make_field(5).unwrap();
        assert_eq!(f5.inv(FieldElement(2)).unwrap(), FieldElement(3));
        assert_eq!(f5.inv(FieldElement(1)).unwrap(), FieldElement(1));
        assert_eq!(f5.inv(FieldElement(0)), Err(Error::ZeroInverse));
        let f4 = make_field(4).unwrap();
        // x * (x+1) = x^2 + x = 1 under x^2 + x + 1.
        assert_eq!(f4.inv(FieldElement(2)).unwrap(), FieldElement(3));
    }

    fn small_fields() -> Vec<Arc<FieldSpec>> {
        [2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32, 49, 64]
            .iter()
            .map(|&q| make_field(q).unwrap())
            .collect()
    }

    #[test]
    fn field_axioms_exhaustive() {
        for fs in small_fields() {
            for a in fs.elements() {
                for b in fs.elements() {
                    assert_eq!(fs.add(a, b), fs.add(b, a));
                    assert_eq!(fs.mul(a, b), fs.mul(b, a));
                    assert_eq!(fs.add(a, fs.neg(a)), FieldElement::ZERO);
                    for c in fs.elements() {
                        assert_eq!(fs.add(fs.add(a, b), c), fs.add(a, fs.add(b, c)));
                        assert_eq!(fs.mul(fs.mul(a, b), c), fs.mul(a, fs.mul(b, c)));
                        assert_eq!(
                            fs.mul(a, fs.add(b, c)),
                            fs.add(fs.mul(a, b), fs.mul(a, c))
                        );
                    }
                }
                if !a.is_zero() {
                    assert_eq!(fs.mul(a, fs.inv(a).unwrap()), FieldElement::ONE);
                }
            }
        }
    }

    #[test]
    fn theta_order_is_exactly_q_minus_one() {
        for fs in small_fields() {
            let theta = fs.primitive_element();
            assert_eq!(fs.pow(theta, fs.q() as u64 - 1), FieldElement::ONE);
            for k in 1..fs.q() as u64 - 1 {
                assert_ne!(fs.pow(theta, k), FieldElement::ONE, "q={}", fs.q());
            }
        }
    }

    #[test]
    fn frobenius_is_additive() {
        for fs in small_fields() {
            let p = fs.characteristic() as u64;
            for a in fs.elements() {
                for b in fs.elements() {
                    assert_eq!(
                        fs.pow(fs.add(a, b), p),
                        fs.add(fs.pow(a, p), fs.pow(b, p))
                    );
                }
            }
        }
    }

    #[test]
    fn encoding_round_trip() {
        for fs in small_fields() {
            for a in fs.elements() {
                assert_eq!(fs.element(a.rep()).unwrap(), a);
            }
            assert!(fs.element(fs.q()).is_err());
        }
    }

    #[test]
    fn table_and_schoolbook_agree() {
        // F_64 has tables; recompute products raw and compare.
        let fs = make_field(64).unwrap();
        for a in fs.elements() {
            for b in fs.elements() {
                assert_eq!(fs.mul(a, b), fs.mul_raw(a, b));
            }
        }
    }
}
