//! Exact integer arithmetic: p-adic valuations, factorization, isocracy and
//! finite/cofinite sets of primes.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, Result};

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
pub fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, n);
        }
        base = mul_mod(base, base, n);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `n`, if `gcd(a, n) = 1`.
pub fn inv_mod(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (i128::from(a % n), i128::from(n));
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(i128::from(n)) as u64)
}

/// Residue of a signed integer modulo `n`.
#[inline]
pub fn residue(x: i64, n: u64) -> u64 {
    i128::from(x).rem_euclid(i128::from(n)) as u64
}

/// `p^e`, or `None` on overflow.
pub fn checked_pow(p: u64, e: u32) -> Option<u64> {
    p.checked_pow(e)
}

fn ensure_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// The `p`-adic valuation of a nonzero integer; the sign is ignored.
pub fn nu_p(x: &BigInt, p: u64) -> Result<u32> {
    ensure_prime(p)?;
    if x.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let p = BigUint::from(p);
    let mut m = x.magnitude().clone();
    let mut k = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return Ok(k);
        }
        m = q;
        k += 1;
    }
}

/// Valuation of a nonzero machine integer at a prime, without checks.
pub(crate) fn val(x: i64, p: u64) -> u32 {
    debug_assert!(x != 0);
    let mut m = x.unsigned_abs();
    let mut k = 0;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    k
}

/// The part of `x` coprime to `p` (signed), i.e. `x / p^{ν_p(x)}`.
pub(crate) fn p_free_part(x: i64, p: u64) -> i64 {
    let mut m = x;
    let p = p as i64;
    while m % p == 0 {
        m /= p;
    }
    m
}

/// Prime factorization of a nonzero integer, as a map prime → exponent.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Factorization(BTreeMap<u64, u32>);

impl Factorization {
    pub fn of_u64(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroArgument);
        }
        let mut map = BTreeMap::new();
        factor_u64_into(n, &mut map);
        Ok(Self(map))
    }

    pub fn of_i64(n: i64) -> Result<Self> {
        Self::of_u64(n.unsigned_abs())
    }

    pub fn of(n: &BigInt) -> Result<Self> {
        if n.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let mut map = BTreeMap::new();
        let mut m = n.magnitude().clone();
        // Strip small primes so the remainder usually fits a machine word.
        let mut p = 2u64;
        while p < 1 << 12 {
            let bp = BigUint::from(p);
            while (&m % &bp).is_zero() {
                m /= &bp;
                *map.entry(p).or_insert(0) += 1;
            }
            p += if p == 2 { 1 } else { 2 };
        }
        let mut stack = alloc::vec![m];
        while let Some(m) = stack.pop() {
            if m.is_one() {
                continue;
            }
            if let Some(small) = m.to_u64() {
                factor_u64_into(small, &mut map);
            } else if big_probable_prime(&m) {
                return Err(Error::FactorOutOfRange);
            } else {
                let d = big_rho(&m);
                stack.push(&m / &d);
                stack.push(d);
            }
        }
        Ok(Self(map))
    }

    pub fn exponent(&self, p: u64) -> u32 {
        self.0.get(&p).copied().unwrap_or(0)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.0.iter().map(|(&p, &e)| (p, e))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut map = self.0.clone();
        for (&p, &e) in &other.0 {
            *map.entry(p).or_insert(0) += e;
        }
        Self(map)
    }
}

fn factor_u64_into(mut n: u64, map: &mut BTreeMap<u64, u32>) {
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        while n.is_multiple_of(p) {
            n /= p;
            *map.entry(p).or_insert(0) += 1;
        }
    }
    let mut stack = alloc::vec![n];
    while let Some(n) = stack.pop() {
        if n == 1 {
            continue;
        }
        if is_prime(n) {
            *map.entry(n).or_insert(0) += 1;
            continue;
        }
        let d = rho_u64(n);
        stack.push(n / d);
        stack.push(d);
    }
}

/// Pollard–Brent; `n` must be composite and free of factors below 41.
fn rho_u64(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn big_probable_prime(n: &BigUint) -> bool {
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn big_rho(n: &BigUint) -> BigUint {
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut d = BigUint::one();
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            d = diff.gcd(n);
        }
        if &d != n {
            return d;
        }
        c += 1u32;
    }
}

/// Whether the set is given by its members or by its non-members.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum PrimeSetKind {
    Finite,
    Cofinite,
}

/// A finite or cofinite set of primes.
///
/// `exceptions` lists the members of a finite set, or the non-members of a
/// cofinite one, strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PrimeSet {
    kind: PrimeSetKind,
    exceptions: Vec<u64>,
}

impl PrimeSet {
    pub fn all() -> Self {
        Self { kind: PrimeSetKind::Cofinite, exceptions: Vec::new() }
    }

    pub fn empty() -> Self {
        Self { kind: PrimeSetKind::Finite, exceptions: Vec::new() }
    }

    pub fn finite(primes: impl IntoIterator<Item = u64>) -> Result<Self> {
        Ok(Self { kind: PrimeSetKind::Finite, exceptions: normalize(primes)? })
    }

    pub fn cofinite(excluded: impl IntoIterator<Item = u64>) -> Result<Self> {
        Ok(Self { kind: PrimeSetKind::Cofinite, exceptions: normalize(excluded)? })
    }

    pub fn kind(&self) -> PrimeSetKind {
        self.kind
    }

    pub fn exceptions(&self) -> &[u64] {
        &self.exceptions
    }

    /// Membership for a prime `p`. Non-primes are never members.
    pub fn contains(&self, p: u64) -> bool {
        if !is_prime(p) {
            return false;
        }
        let listed = self.exceptions.binary_search(&p).is_ok();
        match self.kind {
            PrimeSetKind::Finite => listed,
            PrimeSetKind::Cofinite => !listed,
        }
    }

    pub fn is_all(&self) -> bool {
        self.kind == PrimeSetKind::Cofinite && self.exceptions.is_empty()
    }

    pub fn complement(&self) -> Self {
        let kind = match self.kind {
            PrimeSetKind::Finite => PrimeSetKind::Cofinite,
            PrimeSetKind::Cofinite => PrimeSetKind::Finite,
        };
        Self { kind, exceptions: self.exceptions.clone() }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        use PrimeSetKind::*;
        let (a, b) = (&self.exceptions, &other.exceptions);
        match (self.kind, other.kind) {
            (Finite, Finite) => Self { kind: Finite, exceptions: merge(a, b, |x, y| x && y) },
            (Cofinite, Cofinite) => Self { kind: Cofinite, exceptions: merge(a, b, |x, y| x || y) },
            (Finite, Cofinite) => Self { kind: Finite, exceptions: merge(a, b, |x, y| x && !y) },
            (Cofinite, Finite) => Self { kind: Finite, exceptions: merge(a, b, |x, y| !x && y) },
        }
    }
}

impl core::fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let list = |f: &mut core::fmt::Formatter<'_>| -> core::fmt::Result {
            f.write_str("{")?;
            for (i, p) in self.exceptions.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str("}")
        };
        match self.kind {
            PrimeSetKind::Finite => list(f),
            PrimeSetKind::Cofinite if self.exceptions.is_empty() => f.write_str("all primes"),
            PrimeSetKind::Cofinite => {
                f.write_str("all primes except ")?;
                list(f)
            }
        }
    }
}

fn normalize(primes: impl IntoIterator<Item = u64>) -> Result<Vec<u64>> {
    let mut v: Vec<u64> = primes.into_iter().collect();
    if let Some(&bad) = v.iter().find(|&&p| !is_prime(p)) {
        return Err(Error::NotPrime(bad));
    }
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

fn merge(a: &[u64], b: &[u64], keep: impl Fn(bool, bool) -> bool) -> Vec<u64> {
    let mut all: Vec<u64> = a.iter().chain(b).copied().collect();
    all.sort_unstable();
    all.dedup();
    all.into_iter()
        .filter(|p| keep(a.binary_search(p).is_ok(), b.binary_search(p).is_ok()))
        .collect()
}

/// `n` and `m` are isocratic when every prime dividing both divides them to
/// the same power.
pub fn is_isocratic(n: &BigInt, m: &BigInt) -> Result<bool> {
    let (fn_, fm) = (Factorization::of(n)?, Factorization::of(m)?);
    Ok(isocratic_factored(&fn_, &fm))
}

pub(crate) fn isocratic_factored(n: &Factorization, m: &Factorization) -> bool {
    n.iter().all(|(p, e)| {
        let f = m.exponent(p);
        f == 0 || f == e
    })
}

/// The cofinite set `{p : ν_p(n) = ν_p(m)}`.
pub fn isocracy_locus(n: &BigInt, m: &BigInt) -> Result<PrimeSet> {
    let (fn_, fm) = (Factorization::of(n)?, Factorization::of(m)?);
    Ok(locus_factored(&fn_, &fm))
}

pub(crate) fn locus_factored(n: &Factorization, m: &Factorization) -> PrimeSet {
    let bad = n
        .primes()
        .chain(m.primes())
        .filter(|&p| n.exponent(p) != m.exponent(p));
    PrimeSet::cofinite(bad).expect("factorization yields primes")
}

/// Primes dividing both with unequal valuations; empty iff isocratic.
pub(crate) fn non_isocratic_primes(n: &Factorization, m: &Factorization) -> Vec<u64> {
    n.iter()
        .filter(|&(p, e)| {
            let f = m.exponent(p);
            f != 0 && f != e
        })
        .map(|(p, _)| p)
        .collect()
}

/// Multiplicative order of `a` modulo `n`, if `a` is a unit.
pub fn multiplicative_order(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(1);
    }
    inv_mod(a, n)?;
    let nf = Factorization::of_u64(n).expect("n is nonzero");
    // φ(n), factored.
    let mut phi = Factorization::default();
    for (p, e) in nf.iter() {
        if e > 1 {
            phi = phi.mul(&Factorization(BTreeMap::from([(p, e - 1)])));
        }
        phi = phi.mul(&Factorization::of_u64(p - 1).expect("p ≥ 2"));
    }
    let mut order: u64 = phi.iter().map(|(p, e)| p.pow(e)).product();
    for (p, _) in phi.iter() {
        while order.is_multiple_of(p) && pow_mod(a, order / p, n) == 1 {
            order /= p;
        }
    }
    Some(order)
}

/// `1 + u + … + u^{r−1} mod n`, by doubling.
pub fn geometric_sum(u: u64, r: u64, n: u64) -> u64 {
    let (mut sum, mut power) = (0u64, 1 % n);
    for bit in (0..64 - r.leading_zeros()).rev() {
        sum = (sum + mul_mod(power, sum, n)) % n;
        power = mul_mod(power, power, n);
        if (r >> bit) & 1 == 1 {
            sum = (sum + power) % n;
            power = mul_mod(power, u, n);
        }
    }
    sum
}
