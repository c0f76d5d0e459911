//! Exact scalars: elements of the cyclotomic field Q(zeta_m).
//!
//! An element is stored as the canonical residue of a rational polynomial
//! modulo the m-th cyclotomic polynomial, so equality is coefficient
//! equality. Mixing orders promotes both operands into Q(zeta_lcm).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::Error;

/// Precomputed data for one field Q(zeta_m): the cyclotomic polynomial and
/// reduction rows for powers zeta^k with k >= phi(m).
struct FieldData {
    phi: usize,
    /// reduction[j] = coefficients of x^(phi+j) mod Phi_m, length phi.
    reduction: Vec<Vec<BigRational>>,
}

impl FieldData {
    fn build(order: u64) -> FieldData {
        assert!(order >= 1, "cyclotomic order must be >= 1");
        let poly = cyclotomic_polynomial(order);
        let phi = poly.len() - 1;
        // Powers needed: products of reduced residues reach 2*phi - 2, and
        // embeddings reach order - 1.
        let max_pow = (2 * phi).saturating_sub(2).max(order as usize - 1);
        let mut reduction: Vec<Vec<BigRational>> = Vec::new();
        if max_pow >= phi {
            // x^phi = -(c_0 + c_1 x + ... + c_{phi-1} x^{phi-1})
            let base: Vec<BigRational> = poly[..phi]
                .iter()
                .map(|c| BigRational::from_integer(-c.clone()))
                .collect();
            reduction.push(base);
            for _ in phi..max_pow {
                let prev = reduction.last().unwrap();
                let carry = prev[phi - 1].clone();
                let mut next = vec![BigRational::zero(); phi];
                for i in 1..phi {
                    next[i] = prev[i - 1].clone();
                }
                let row0 = &reduction[0];
                for i in 0..phi {
                    next[i] += &carry * &row0[i];
                }
                reduction.push(next);
            }
        }
        FieldData { phi, reduction }
    }
}

fn field(order: u64) -> Arc<FieldData> {
    static REGISTRY: OnceLock<Mutex<BTreeMap<u64, Arc<FieldData>>>> = OnceLock::new();
    let reg = REGISTRY.get_or_init(|| Mutex::new(BTreeMap::new()));
    let mut guard = reg.lock().unwrap();
    guard
        .entry(order)
        .or_insert_with(|| Arc::new(FieldData::build(order)))
        .clone()
}

/// Euler totient.
pub fn euler_phi(m: u64) -> usize {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

/// The m-th cyclotomic polynomial, ascending integer coefficients, monic.
pub fn cyclotomic_polynomial(m: u64) -> Vec<BigInt> {
    // x^m - 1 divided by Phi_d for every proper divisor d of m.
    let mut poly = vec![BigInt::zero(); m as usize + 1];
    poly[0] = -BigInt::one();
    poly[m as usize] = BigInt::one();
    for d in 1..m {
        if m % d == 0 {
            let divisor = cyclotomic_polynomial(d);
            poly = poly_div_exact_int(&poly, &divisor);
        }
    }
    poly
}

/// Exact division of integer polynomials with monic divisor.
fn poly_div_exact_int(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().map(|c| c.is_one()).unwrap_or(false));
    let mut rem: Vec<BigInt> = num.to_vec();
    let dn = den.len() - 1;
    let qn = rem.len() - 1 - dn;
    let mut quot = vec![BigInt::zero(); qn + 1];
    for k in (0..=qn).rev() {
        let c = rem[k + dn].clone();
        if !c.is_zero() {
            for (i, d) in den.iter().enumerate() {
                rem[k + i] -= &c * d;
            }
        }
        quot[k] = c;
    }
    assert!(
        rem.iter().all(|c| c.is_zero()),
        "inexact polynomial division"
    );
    quot
}

/// An exact element of Q(zeta_m), stored as the canonical residue modulo
/// the m-th cyclotomic polynomial (degree < phi(m)).
#[derive(Clone)]
pub struct Cyclotomic {
    order: u64,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn zero(order: u64) -> Self {
        let phi = field(order).phi;
        Cyclotomic {
            order,
            coeffs: vec![BigRational::zero(); phi],
        }
    }

    pub fn one(order: u64) -> Self {
        let mut c = Cyclotomic::zero(order);
        c.coeffs[0] = BigRational::one();
        c
    }

    pub fn from_rational(r: BigRational, order: u64) -> Self {
        let mut c = Cyclotomic::zero(order);
        c.coeffs[0] = r;
        c
    }

    pub fn from_integer(n: i64, order: u64) -> Self {
        Cyclotomic::from_rational(BigRational::from_integer(BigInt::from(n)), order)
    }

    pub fn from_ratio(num: i64, den: i64, order: u64) -> Self {
        assert!(den != 0, "zero denominator");
        Cyclotomic::from_rational(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            order,
        )
    }

    /// zeta_order^power.
    pub fn root_of_unity(order: u64, power: i64) -> Self {
        let data = field(order);
        let p = power.rem_euclid(order as i64) as usize;
        let mut raw = vec![BigRational::zero(); p + 1];
        raw[p] = BigRational::one();
        Cyclotomic {
            order,
            coeffs: reduce(raw, &data),
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// Some(r) iff the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Embed into Q(zeta_to); `self.order` must divide `to`.
    pub fn promote(&self, to: u64) -> Result<Cyclotomic, Error> {
        if to == self.order {
            return Ok(self.clone());
        }
        if to % self.order != 0 {
            return Err(Error::BadEmbedding {
                from: self.order,
                to,
            });
        }
        let data = field(to);
        let step = (to / self.order) as usize;
        let mut raw = vec![BigRational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                raw[i * step] = c.clone();
            }
        }
        Ok(Cyclotomic {
            order: to,
            coeffs: reduce(raw, &data),
        })
    }

    /// Promote both operands into Q(zeta_lcm).
    pub fn unify(a: &Cyclotomic, b: &Cyclotomic) -> (Cyclotomic, Cyclotomic) {
        if a.order == b.order {
            (a.clone(), b.clone())
        } else {
            let l = num::integer::lcm(a.order, b.order);
            (a.promote(l).unwrap(), b.promote(l).unwrap())
        }
    }

    pub fn add_ref(&self, other: &Cyclotomic) -> Cyclotomic {
        if self.order == other.order {
            let coeffs = self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect();
            Cyclotomic {
                order: self.order,
                coeffs,
            }
        } else {
            let (a, b) = Cyclotomic::unify(self, other);
            a.add_ref(&b)
        }
    }

    pub fn sub_ref(&self, other: &Cyclotomic) -> Cyclotomic {
        if self.order == other.order {
            let coeffs = self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect();
            Cyclotomic {
                order: self.order,
                coeffs,
            }
        } else {
            let (a, b) = Cyclotomic::unify(self, other);
            a.sub_ref(&b)
        }
    }

    pub fn neg_ref(&self) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul_ref(&self, other: &Cyclotomic) -> Cyclotomic {
        if self.order != other.order {
            let (a, b) = Cyclotomic::unify(self, other);
            return a.mul_ref(&b);
        }
        if self.is_zero() || other.is_zero() {
            return Cyclotomic::zero(self.order);
        }
        let phi = self.coeffs.len();
        if phi == 1 {
            return Cyclotomic {
                order: self.order,
                coeffs: vec![&self.coeffs[0] * &other.coeffs[0]],
            };
        }
        let mut raw = vec![BigRational::zero(); 2 * phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        let data = field(self.order);
        Cyclotomic {
            order: self.order,
            coeffs: reduce(raw, &data),
        }
    }

    /// self += f * x, all three of one order (hot path for elimination).
    pub fn add_mul_assign(&mut self, f: &Cyclotomic, x: &Cyclotomic) {
        if f.is_zero() || x.is_zero() {
            return;
        }
        if self.order == f.order && f.order == x.order {
            let phi = self.coeffs.len();
            if phi == 1 {
                self.coeffs[0] += &f.coeffs[0] * &x.coeffs[0];
                return;
            }
            let p = f.mul_ref(x);
            for (a, b) in self.coeffs.iter_mut().zip(&p.coeffs) {
                *a += b;
            }
        } else {
            *self = self.add_ref(&f.mul_ref(x));
        }
    }

    /// self -= f * x.
    pub fn sub_mul_assign(&mut self, f: &Cyclotomic, x: &Cyclotomic) {
        if f.is_zero() || x.is_zero() {
            return;
        }
        if self.order == f.order && f.order == x.order {
            let phi = self.coeffs.len();
            if phi == 1 {
                self.coeffs[0] -= &f.coeffs[0] * &x.coeffs[0];
                return;
            }
            let p = f.mul_ref(x);
            for (a, b) in self.coeffs.iter_mut().zip(&p.coeffs) {
                *a -= b;
            }
        } else {
            *self = self.sub_ref(&f.mul_ref(x));
        }
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self) -> Result<Cyclotomic, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.coeffs.len() == 1 {
            return Ok(Cyclotomic {
                order: self.order,
                coeffs: vec![self.coeffs[0].recip()],
            });
        }
        if let Some(r) = self.as_rational() {
            return Ok(Cyclotomic::from_rational(r.recip(), self.order));
        }
        // Extended Euclid against the cyclotomic polynomial: Phi is
        // irreducible, so gcd(f, Phi) is a nonzero constant.
        let modulus: Vec<BigRational> = cyclotomic_polynomial(self.order)
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        let (g, s) = poly_half_ext_gcd(&self.coeffs, &modulus);
        debug_assert_eq!(poly_degree(&g), Some(0));
        let scale = g[0].recip();
        let data = field(self.order);
        let scaled: Vec<BigRational> = s.iter().map(|c| c * &scale).collect();
        Ok(Cyclotomic {
            order: self.order,
            coeffs: reduce(scaled, &data),
        })
    }

    pub fn div_ref(&self, other: &Cyclotomic) -> Result<Cyclotomic, Error> {
        Ok(self.mul_ref(&other.inv()?))
    }

    /// Least common multiple of the denominators of the coefficients.
    pub fn denominator_lcm(&self) -> BigInt {
        let mut acc = BigInt::one();
        for c in &self.coeffs {
            acc = num::integer::lcm(acc, c.denom().clone());
        }
        acc
    }

    pub fn scale_int(&self, k: &BigInt) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c * BigRational::from_integer(k.clone()))
                .collect(),
        }
    }
}

/// Fold a raw coefficient vector of any length into the canonical residue.
fn reduce(mut raw: Vec<BigRational>, data: &FieldData) -> Vec<BigRational> {
    let phi = data.phi;
    for k in (phi..raw.len()).rev() {
        if raw[k].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut raw[k], BigRational::zero());
        let row = &data.reduction[k - phi];
        for i in 0..phi {
            if !row[i].is_zero() {
                raw[i] += &c * &row[i];
            }
        }
    }
    raw.truncate(phi);
    raw.resize(phi, BigRational::zero());
    raw
}

fn poly_degree(p: &[BigRational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

/// Half-extended gcd: returns (g, s) with s*a = g mod b, g = gcd(a, b).
fn poly_half_ext_gcd(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r0: Vec<BigRational> = b.to_vec();
    let mut r1: Vec<BigRational> = a.to_vec();
    let mut s0: Vec<BigRational> = vec![BigRational::zero()];
    let mut s1: Vec<BigRational> = vec![BigRational::one()];
    while poly_degree(&r1).is_some() {
        let (q, r) = poly_div_rem(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    (r0, s0)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let (da, db) = (poly_degree(a), poly_degree(b));
    if da.is_none() || db.is_none() {
        return vec![BigRational::zero()];
    }
    let mut out = vec![BigRational::zero(); da.unwrap() + db.unwrap() + 1];
    for i in 0..=da.unwrap() {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..=db.unwrap() {
            if !b[j].is_zero() {
                out[i + j] += &a[i] * &b[j];
            }
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
        let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
        out[i] = x - y;
    }
    out
}

fn poly_div_rem(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let dd = poly_degree(den).expect("division by zero polynomial");
    let lead = den[dd].clone();
    let mut rem: Vec<BigRational> = num.to_vec();
    let dn = match poly_degree(&rem) {
        Some(d) if d >= dd => d,
        _ => return (vec![BigRational::zero()], rem),
    };
    let mut quot = vec![BigRational::zero(); dn - dd + 1];
    for k in (0..=dn - dd).rev() {
        let c = &rem[k + dd] / &lead;
        if !c.is_zero() {
            for i in 0..=dd {
                let t = &c * &den[i];
                rem[k + i] -= t;
            }
        }
        quot[k] = c;
    }
    (quot, rem)
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            self.coeffs == other.coeffs
        } else {
            let (a, b) = Cyclotomic::unify(self, other);
            a.coeffs == b.coeffs
        }
    }
}

impl Eq for Cyclotomic {}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign_negative = c.is_negative();
            let abs = c.abs();
            if first {
                if sign_negative {
                    write!(f, "-")?;
                }
                first = false;
            } else if sign_negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let show_coeff = i == 0 || !abs.is_one();
            if show_coeff {
                write!(f, "{}", abs)?;
            }
            if i > 0 {
                if show_coeff {
                    write!(f, "*")?;
                }
                if i == 1 {
                    write!(f, "z")?;
                } else {
                    write!(f, "z^{}", i)?;
                }
            }
        }
        Ok(())
    }
}

impl PartialOrd for Cyclotomic {
    /// Lexicographic order on canonical coefficients after unification;
    /// used only for deterministic sorting, not a field order.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let (a, b) = Cyclotomic::unify(self, other);
        Some(a.coeffs.cmp(&b.coeffs))
    }
}

impl std::ops::Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.add_ref(rhs)
    }
}

impl std::ops::Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.sub_ref(rhs)
    }
}

impl std::ops::Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.mul_ref(rhs)
    }
}

impl std::ops::Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zeta(order: u64) -> Cyclotomic {
        Cyclotomic::root_of_unity(order, 1)
    }

    #[test]
    fn phi_and_polynomials() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(4), 2);
        assert_eq!(euler_phi(12), 4);
        // Phi_4 = x^2 + 1
        let p4 = cyclotomic_polynomial(4);
        assert_eq!(p4, vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)]);
        // Phi_6 = x^2 - x + 1
        let p6 = cyclotomic_polynomial(6);
        assert_eq!(p6, vec![BigInt::from(1), BigInt::from(-1), BigInt::from(1)]);
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = zeta(4);
        assert_eq!(i.mul_ref(&i), Cyclotomic::from_integer(-1, 4));
    }

    #[test]
    fn rational_inverse() {
        let two = Cyclotomic::from_integer(2, 1);
        assert_eq!(two.inv().unwrap(), Cyclotomic::from_ratio(1, 2, 1));
    }

    #[test]
    fn zeta3_plus_zeta3_squared() {
        // Oracle: 1 + z + z^2 = Phi_3(z) = 0, so z + z^2 = -1.
        let z = zeta(3);
        let z2 = Cyclotomic::root_of_unity(3, 2);
        assert_eq!(z.add_ref(&z2), Cyclotomic::from_integer(-1, 3));
    }

    #[test]
    fn inverse_of_zeta_is_power() {
        let z = zeta(5);
        let inv = z.inv().unwrap();
        assert_eq!(inv, Cyclotomic::root_of_unity(5, 4));
        assert!(z.mul_ref(&inv).is_one());
    }

    #[test]
    fn division_by_zero_rejected() {
        assert!(matches!(
            Cyclotomic::zero(4).inv(),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn embedding_is_multiplicative() {
        let z3 = zeta(3);
        let z3_in_12 = z3.promote(12).unwrap();
        assert_eq!(z3_in_12, Cyclotomic::root_of_unity(12, 4));
        let prod = z3.mul_ref(&z3);
        assert_eq!(prod.promote(12).unwrap(), z3_in_12.mul_ref(&z3_in_12));
        assert!(zeta(4).promote(6).is_err());
    }

    #[test]
    fn mixed_order_arithmetic_promotes() {
        let i = zeta(4);
        let z3 = zeta(3);
        let s = i.add_ref(&z3);
        assert_eq!(s.order(), 12);
        assert_eq!(s.sub_ref(&z3.promote(12).unwrap()), i.promote(12).unwrap());
    }

    #[test]
    fn field_axioms_on_random_triples() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..60 {
            let order = *[1u64, 3, 4, 6, 5].iter().nth(rng.gen_range(0..5)).unwrap();
            let rand_el = |rng: &mut rand_chacha::ChaCha8Rng| {
                let mut acc = Cyclotomic::zero(order);
                for p in 0..euler_phi(order) {
                    let n = rng.gen_range(-3i64..=3);
                    if n != 0 {
                        let t = Cyclotomic::from_integer(n, order)
                            .mul_ref(&Cyclotomic::root_of_unity(order, p as i64));
                        acc = acc.add_ref(&t);
                    }
                }
                acc
            };
            let a = rand_el(&mut rng);
            let b = rand_el(&mut rng);
            let c = rand_el(&mut rng);
            assert_eq!(a.mul_ref(&b.mul_ref(&c)), a.mul_ref(&b).mul_ref(&c));
            assert_eq!(
                a.mul_ref(&b.add_ref(&c)),
                a.mul_ref(&b).add_ref(&a.mul_ref(&c))
            );
            if !a.is_zero() {
                assert!(a.mul_ref(&a.inv().unwrap()).is_one());
            }
        }
    }
}
