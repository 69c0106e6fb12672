//! Small finite fields `F_q`, `q = p^r`, with elements encoded as integer
//! indices `0..q` (base-`p` digits of the coefficient vector, lowest degree
//! first).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A field element: its index in `0..q`.
pub type Elem = u32;

/// Default upper bound on `q` accepted by [`make_field`].
pub const DEFAULT_FIELD_CAP: u64 = 1 << 20;

/// Orders up to this size get log/antilog multiplication tables.
const TABLE_LIMIT: u32 = 4096;
/// Orders up to this size additionally get a full addition table.
const ADD_TABLE_LIMIT: u32 = 1024;

#[derive(Debug, Clone)]
struct Tables {
    /// `exp[k] = g^k` for `k < 2(q-1)`.
    exp: Vec<Elem>,
    /// `log[x]` for `x != 0`; `log[0]` is unused.
    log: Vec<u32>,
    add: Option<Vec<Elem>>,
    neg: Vec<Elem>,
}

/// The finite field `F_q` with a fixed (deterministic) defining polynomial.
#[derive(Debug, Clone)]
pub struct Field {
    characteristic: u32,
    degree: u32,
    order: u32,
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

/// Serialized form of a field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub characteristic: u32,
    pub degree: u32,
    pub modulus: Vec<u32>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.characteristic == other.characteristic
            && self.degree == other.degree
            && self.modulus == other.modulus
    }
}

impl Eq for Field {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Builds `F_{p^r}` with the default size cap.
pub fn make_field(characteristic: u32, degree: u32) -> Result<Field> {
    make_field_capped(characteristic, degree, DEFAULT_FIELD_CAP)
}

pub fn make_field_capped(characteristic: u32, degree: u32, cap: u64) -> Result<Field> {
    if !is_prime(characteristic as u64) {
        return Err(Error::NotPrime(characteristic as u64));
    }
    if degree == 0 {
        return Err(Error::InvalidField("degree must be positive".into()));
    }
    let order = (characteristic as u64)
        .checked_pow(degree)
        .filter(|&q| q <= cap)
        .ok_or(Error::FieldTooLarge {
            characteristic,
            degree,
            cap,
        })?;
    let modulus = smallest_irreducible(characteristic, degree);
    let mut field = Field {
        characteristic,
        degree,
        order: order as u32,
        modulus,
        tables: None,
    };
    if field.order <= TABLE_LIMIT {
        field.tables = Some(field.build_tables());
    }
    Ok(field)
}

impl Field {
    /// Builds the field of order `q`, which must be a prime power.
    pub fn with_order(q: u64) -> Result<Field> {
        let (p, r) = prime_power(q).ok_or_else(|| {
            Error::InvalidField(format!("{q} is not a prime power"))
        })?;
        make_field(p as u32, r)
    }

    pub fn characteristic(&self) -> u32 {
        self.characteristic
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Monic defining polynomial, lowest degree first (length `degree + 1`).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            characteristic: self.characteristic,
            degree: self.degree,
            modulus: self.modulus.clone(),
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.order
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn one(&self) -> Elem {
        1
    }

    pub fn contains(&self, x: Elem) -> bool {
        x < self.order
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.characteristic as i64) as Elem
    }

    fn digits(&self, mut x: Elem) -> Vec<u32> {
        let p = self.characteristic;
        let mut out = Vec::with_capacity(self.degree as usize);
        for _ in 0..self.degree {
            out.push(x % p);
            x /= p;
        }
        out
    }

    fn from_digits(&self, digits: &[u32]) -> Elem {
        let p = self.characteristic;
        digits.iter().rev().fold(0, |acc, &d| acc * p + d)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.degree == 1 {
            let s = a + b;
            return if s >= self.order { s - self.order } else { s };
        }
        if self.characteristic == 2 {
            return a ^ b;
        }
        if let Some(Tables { add: Some(t), .. }) = &self.tables {
            return t[(a * self.order + b) as usize];
        }
        self.add_slow(a, b)
    }

    fn add_slow(&self, a: Elem, b: Elem) -> Elem {
        let p = self.characteristic;
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.degree {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if a == 0 {
            return 0;
        }
        if self.degree == 1 {
            return self.order - a;
        }
        if self.characteristic == 2 {
            return a;
        }
        if let Some(t) = &self.tables {
            return t.neg[a as usize];
        }
        self.neg_slow(a)
    }

    fn neg_slow(&self, a: Elem) -> Elem {
        let p = self.characteristic;
        let d: Vec<u32> = self.digits(a).into_iter().map(|c| (p - c) % p).collect();
        self.from_digits(&d)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.degree == 1 {
            return ((a as u64 * b as u64) % self.order as u64) as Elem;
        }
        match &self.tables {
            Some(t) => t.exp[(t.log[a as usize] + t.log[b as usize]) as usize],
            None => self.mul_slow(a, b),
        }
    }

    /// Polynomial multiplication modulo the defining polynomial.
    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        let p = self.characteristic as u64;
        let r = self.degree as usize;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u64; 2 * r - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // reduce: x^r = -(m_0 + ... + m_{r-1} x^{r-1})
        for k in (r..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (i, &m) in self.modulus[..r].iter().enumerate() {
                let idx = k - r + i;
                prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
            }
        }
        let d: Vec<u32> = prod[..r].iter().map(|&c| c as u32).collect();
        self.from_digits(&d)
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            return None;
        }
        if let Some(t) = &self.tables {
            let l = t.log[a as usize];
            let q1 = self.order - 1;
            return Some(t.exp[((q1 - l) % q1) as usize]);
        }
        Some(self.pow(a, self.order as u64 - 2))
    }

    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.characteristic as u64)
    }

    fn build_tables(&self) -> Tables {
        let q = self.order;
        let q1 = q - 1;
        let neg = (0..q).map(|a| self.neg_slow(a)).collect();
        let add = if self.degree > 1 && self.characteristic != 2 && q <= ADD_TABLE_LIMIT {
            let mut t = Vec::with_capacity((q * q) as usize);
            for a in 0..q {
                for b in 0..q {
                    t.push(self.add_slow(a, b));
                }
            }
            Some(t)
        } else {
            None
        };
        let slow_mul = |a: Elem, b: Elem| {
            if a == 0 || b == 0 {
                0
            } else if self.degree == 1 {
                ((a as u64 * b as u64) % q as u64) as Elem
            } else {
                self.mul_slow(a, b)
            }
        };
        let mut exp = vec![0; 2 * q1 as usize];
        let mut log = vec![0; q as usize];
        if q == 2 {
            exp = vec![1, 1];
            return Tables {
                exp,
                log,
                add,
                neg,
            };
        }
        for g in 2..q {
            let mut x = 1;
            let mut k = 0u32;
            let ok;
            loop {
                exp[k as usize] = x;
                log[x as usize] = k;
                x = slow_mul(x, g);
                k += 1;
                if x == 1 {
                    ok = k == q1;
                    break;
                }
            }
            if ok {
                break;
            }
        }
        for k in q1..2 * q1 {
            exp[k as usize] = exp[(k - q1) as usize];
        }
        Tables {
            exp,
            log,
            add,
            neg,
        }
    }

    /// The image of `sub` inside `self` under the deterministic embedding
    /// (generator of `sub` goes to the smallest-index root of its defining
    /// polynomial in `self`). Indexed by elements of `sub`.
    pub fn embedding_from(&self, sub: &Field) -> Result<Vec<Elem>> {
        if sub.characteristic != self.characteristic || self.degree % sub.degree != 0 {
            return Err(Error::InvalidField(format!(
                "F_{} does not embed in F_{}",
                sub.order, self.order
            )));
        }
        let root = self
            .elements()
            .find(|&x| {
                let mut acc = 0;
                for &c in sub.modulus.iter().rev() {
                    acc = self.add(self.mul(acc, x), self.from_int(c as i64));
                }
                acc == 0
            })
            .ok_or_else(|| Error::InvalidField("no root of subfield modulus".into()))?;
        let image = sub
            .elements()
            .map(|y| {
                let digits = sub.digits(y);
                let mut acc = 0;
                for &c in digits.iter().rev() {
                    acc = self.add(self.mul(acc, root), self.from_int(c as i64));
                }
                acc
            })
            .collect();
        Ok(image)
    }
}

/// `q = p^r` decomposition.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut r = 0;
    let mut m = q;
    while m % p == 0 {
        m /= p;
        r += 1;
    }
    (m == 1).then_some((p, r))
}

/// Remainder of `a` modulo the monic polynomial `b` over `F_p`.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if c != 0 {
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = ((r[shift + i] as u64 + (p - c) as u64 * bi as u64) % p as u64) as u32;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub(crate) fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    for k in 1..=deg / 2 {
        let count = (p as u64).pow(k as u32);
        for idx in 0..count {
            let mut d = Vec::with_capacity(k + 1);
            let mut m = idx;
            for _ in 0..k {
                d.push((m % p as u64) as u32);
                m /= p as u64;
            }
            d.push(1);
            if poly_rem(poly, &d, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of the given degree, with the
/// coefficient tuple `(c_0, c_1, ..., c_{r-1})` compared left to right.
fn smallest_irreducible(p: u32, r: u32) -> Vec<u32> {
    let r = r as usize;
    let count = (p as u64).pow(r as u32);
    for idx in 0..count {
        let mut coeffs = vec![0u32; r + 1];
        let mut m = idx;
        for k in (0..r).rev() {
            coeffs[k] = (m % p as u64) as u32;
            m /= p as u64;
        }
        coeffs[r] = 1;
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms(f: &Field) {
        let q = f.order();
        for a in 0..q {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            for b in 0..q {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in 0..q {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(
                        f.mul(a, f.add(b, c)),
                        f.add(f.mul(a, b), f.mul(a, c))
                    );
                }
            }
        }
    }

    #[test]
    fn field_axioms_up_to_64() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32, 49, 64] {
            let f = Field::with_order(q).unwrap();
            assert_eq!(f.order() as u64, q);
            check_axioms(&f);
        }
    }

    #[test]
    fn f2_and_f4() {
        let f2 = make_field(2, 1).unwrap();
        assert_eq!(f2.elements().collect::<Vec<_>>(), vec![0, 1]);
        let f4 = make_field(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        assert_eq!(f4.elements().count(), 4);
        for x in 1..4 {
            assert_eq!(f4.mul(f4.mul(x, x), x), 1);
        }
    }

    #[test]
    fn frobenius_is_bijection_and_fixes_q_power() {
        for q in [4u64, 8, 9, 25, 27] {
            let f = Field::with_order(q).unwrap();
            let mut seen: Vec<Elem> = f.elements().map(|x| f.frobenius(x)).collect();
            seen.sort();
            seen.dedup();
            assert_eq!(seen.len() as u64, q);
            for x in f.elements() {
                assert_eq!(f.pow(x, q), x);
            }
        }
    }

    #[test]
    fn embedding_is_homomorphism() {
        for (small, big) in [(3u64, 9u64), (2, 4), (2, 8), (4, 16), (5, 25)] {
            let k = Field::with_order(small).unwrap();
            let l = Field::with_order(big).unwrap();
            let emb = l.embedding_from(&k).unwrap();
            for a in k.elements() {
                for b in k.elements() {
                    assert_eq!(emb[k.add(a, b) as usize], l.add(emb[a as usize], emb[b as usize]));
                    assert_eq!(emb[k.mul(a, b) as usize], l.mul(emb[a as usize], emb[b as usize]));
                }
            }
            if k.degree() == 1 {
                for a in k.elements() {
                    assert_eq!(emb[a as usize], a);
                }
            }
        }
        let f4 = Field::with_order(4).unwrap();
        let f8 = Field::with_order(8).unwrap();
        assert!(f8.embedding_from(&f4).is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(make_field(4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(make_field(2, 21), Err(Error::FieldTooLarge { .. })));
        assert!(make_field(2, 20).is_ok());
    }

    #[test]
    fn untabled_arithmetic_matches_tables() {
        let tabled = make_field(3, 5).unwrap();
        let mut plain = tabled.clone();
        plain.tables = None;
        for a in (0..243).step_by(7) {
            for b in 0..243 {
                assert_eq!(tabled.mul(a, b), plain.mul(a, b));
                assert_eq!(tabled.add(a, b), plain.add(a, b));
            }
        }
    }

    #[test]
    fn moduli_are_irreducible_and_deterministic() {
        for (p, r) in [(2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2)] {
            let f = make_field(p, r).unwrap();
            assert!(is_irreducible(f.modulus(), p));
            assert_eq!(f.modulus(), make_field(p, r).unwrap().modulus());
        }
        assert_eq!(make_field(3, 2).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn prime_power_decomposition() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(11), Some((11, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }
}
