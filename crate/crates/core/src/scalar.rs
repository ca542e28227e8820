//! Scalar rings and fields.
//!
//! Prime fields carry their modulus at runtime, so the arithmetic traits here
//! pass an explicit context (`Ctx`) wherever a constant has to be created from
//! nothing. Rationals, big integers, `f64` and `Complex64` use `()`.

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng as RandRng;

/// Commutative ring with identity.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    type Ctx: Clone + PartialEq + fmt::Debug + Send + Sync + 'static;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_i64(ctx: &Self::Ctx, v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one(&self.ctx())
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ctx());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// Ring in which exact quotients can be computed when they exist.
pub trait ExactDiv: Ring {
    /// `Some(q)` with `q * rhs == self`, or `None` if no such `q` exists.
    fn div_exact(&self, rhs: &Self) -> Option<Self>;
}

/// Field: every nonzero element has an inverse.
pub trait Field: ExactDiv {
    fn inv(&self) -> Option<Self>;

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul(&r))
    }
}

/// Field elements that can be sampled at random and have a partial square root.
pub trait SampleField: Field {
    fn random<G: RandRng + ?Sized>(ctx: &Self::Ctx, rng: &mut G) -> Self;
    fn sqrt(&self) -> Option<Self>;
}

/// Exact fields with a total order, used as keys for curve points.
pub trait ExactField: SampleField + Eq + Ord + Hash {}

// ---------------------------------------------------------------------------
// Prime fields

/// Residue class modulo an odd prime `p < 2^62`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    pub fn new(v: i64, p: u64) -> Self {
        let r = (v as i128).rem_euclid(p as i128) as u64;
        Fp { value: r, modulus: p }
    }

    pub fn from_u64(v: u64, p: u64) -> Self {
        Fp { value: v % p, modulus: p }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn pow_u64(&self, mut e: u64) -> Self {
        let mut base = *self;
        let mut acc = Fp::from_u64(1, self.modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Euler's criterion; zero counts as a square.
    pub fn is_square(&self) -> bool {
        self.value == 0 || self.pow_u64((self.modulus - 1) / 2).value == 1
    }

    /// Tonelli-Shanks.
    fn tonelli(&self) -> Option<Fp> {
        let p = self.modulus;
        if self.value == 0 {
            return Some(*self);
        }
        if !self.is_square() {
            return None;
        }
        if p % 4 == 3 {
            return Some(self.pow_u64((p + 1) / 4));
        }
        let mut q = p - 1;
        let mut s = 0u32;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        let mut z = Fp::from_u64(2, p);
        while z.is_square() {
            z = Fp::from_u64(z.value + 1, p);
        }
        let mut m = s;
        let mut c = z.pow_u64(q);
        let mut t = self.pow_u64(q);
        let mut r = self.pow_u64((q + 1) / 2);
        while t.value != 1 {
            let mut i = 0u32;
            let mut t2 = t;
            while t2.value != 1 {
                t2 = t2.mul(&t2);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = b.mul(&b);
            }
            m = i;
            c = b.mul(&b);
            t = t.mul(&c);
            r = r.mul(&b);
        }
        Some(r)
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Ring for Fp {
    type Ctx = u64;

    fn ctx(&self) -> u64 {
        self.modulus
    }
    fn zero(p: &u64) -> Self {
        Fp { value: 0, modulus: *p }
    }
    fn one(p: &u64) -> Self {
        Fp { value: 1, modulus: *p }
    }
    fn from_i64(p: &u64, v: i64) -> Self {
        Fp::new(v, *p)
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn add(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let s = self.value + rhs.value;
        let value = if s >= self.modulus { s - self.modulus } else { s };
        Fp { value, modulus: self.modulus }
    }
    fn sub(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let value = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.value + self.modulus - rhs.value
        };
        Fp { value, modulus: self.modulus }
    }
    fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let value = if self.modulus < (1 << 32) {
            (self.value * rhs.value) % self.modulus
        } else {
            ((self.value as u128 * rhs.value as u128) % self.modulus as u128) as u64
        };
        Fp { value, modulus: self.modulus }
    }
    fn neg(&self) -> Self {
        let value = if self.value == 0 { 0 } else { self.modulus - self.value };
        Fp { value, modulus: self.modulus }
    }
}

impl ExactDiv for Fp {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        self.div(rhs)
    }
}

impl Field for Fp {
    fn inv(&self) -> Option<Self> {
        if self.value == 0 {
            return None;
        }
        let g = (self.value as i128).extended_gcd(&(self.modulus as i128));
        debug_assert_eq!(g.gcd, 1);
        Some(Fp { value: g.x.rem_euclid(self.modulus as i128) as u64, modulus: self.modulus })
    }
}

impl SampleField for Fp {
    fn random<G: RandRng + ?Sized>(p: &u64, rng: &mut G) -> Self {
        Fp { value: rng.gen_range(0..*p), modulus: *p }
    }
    fn sqrt(&self) -> Option<Self> {
        self.tonelli()
    }
}

impl ExactField for Fp {}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// ---------------------------------------------------------------------------
// Rationals and integers

impl Ring for BigRational {
    type Ctx = ();

    fn ctx(&self) {}
    fn zero(_: &()) -> Self {
        Zero::zero()
    }
    fn one(_: &()) -> Self {
        One::one()
    }
    fn from_i64(_: &(), v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl ExactDiv for BigRational {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        Field::div(self, rhs)
    }
}

impl Field for BigRational {
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl SampleField for BigRational {
    fn random<G: RandRng + ?Sized>(_: &(), rng: &mut G) -> Self {
        let num: i64 = rng.gen_range(-20..=20);
        let den: i64 = rng.gen_range(1..=4);
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &(&n * &n) == self.numer() && &(&d * &d) == self.denom() {
            Some(BigRational::new(n, d))
        } else {
            None
        }
    }
}

impl ExactField for BigRational {}

impl Ring for BigInt {
    type Ctx = ();

    fn ctx(&self) {}
    fn zero(_: &()) -> Self {
        Zero::zero()
    }
    fn one(_: &()) -> Self {
        One::one()
    }
    fn from_i64(_: &(), v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl ExactDiv for BigInt {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if Zero::is_zero(rhs) {
            return None;
        }
        let (q, r) = self.div_rem(rhs);
        Zero::is_zero(&r).then_some(q)
    }
}

// ---------------------------------------------------------------------------
// Floating point

impl Ring for f64 {
    type Ctx = ();

    fn ctx(&self) {}
    fn zero(_: &()) -> Self {
        0.0
    }
    fn one(_: &()) -> Self {
        1.0
    }
    fn from_i64(_: &(), v: i64) -> Self {
        v as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl ExactDiv for f64 {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        Field::div(self, rhs)
    }
}

impl Field for f64 {
    fn inv(&self) -> Option<Self> {
        (*self != 0.0).then(|| 1.0 / self)
    }
}

impl SampleField for f64 {
    fn random<G: RandRng + ?Sized>(_: &(), rng: &mut G) -> Self {
        rng.gen_range(-1.0..1.0)
    }
    fn sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| f64::sqrt(*self))
    }
}

impl Ring for Complex64 {
    type Ctx = ();

    fn ctx(&self) {}
    fn zero(_: &()) -> Self {
        <Complex64 as Zero>::zero()
    }
    fn one(_: &()) -> Self {
        <Complex64 as One>::one()
    }
    fn from_i64(_: &(), v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl ExactDiv for Complex64 {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        Field::div(self, rhs)
    }
}

impl Field for Complex64 {
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.inv())
    }
}

impl SampleField for Complex64 {
    fn random<G: RandRng + ?Sized>(_: &(), rng: &mut G) -> Self {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    }
    fn sqrt(&self) -> Option<Self> {
        Some(Complex64::sqrt(*self))
    }
}
