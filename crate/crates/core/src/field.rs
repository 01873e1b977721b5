//! Exact scalar fields: the rationals (arbitrary precision) and prime fields.

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Arbitrary-precision rationals, always kept in lowest terms.
pub type Rational = BigRational;

/// An exact field. Elements are always stored in canonical form, so `==` is
/// equality in the field.
pub trait Field:
    Clone
    + PartialEq
    + Eq
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn from_i64(n: i64) -> Self;
    /// 0 for the rationals.
    fn characteristic() -> u64;
    /// A uniformly-ish random element with integer representative of absolute value at most `bound`.
    fn random<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Self;
    /// Integer value when the element is an integer (rationals) or its least residue (prime fields).
    fn to_i64(&self) -> Option<i64>;
    /// Parses `n` or `p/q`.
    fn parse(s: &str) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Distinct roots in the field of `Σ coeffs[i] tⁱ`. Prime fields search
    /// exhaustively up to [`MAX_EXHAUSTIVE_ROOT_SEARCH`]; beyond that only
    /// small residues are tried.
    fn roots(coeffs: &[Self]) -> Vec<Self> {
        let limit = Self::characteristic().min(MAX_EXHAUSTIVE_ROOT_SEARCH);
        (0..limit as i64).map(Self::from_i64).filter(|t| eval_poly(coeffs, t).is_zero()).collect()
    }
}

/// Prime fields at most this large get an exhaustive root search.
pub const MAX_EXHAUSTIVE_ROOT_SEARCH: u64 = 1 << 20;

/// Horner evaluation, coefficients lowest degree first.
pub fn eval_poly<K: Field>(coeffs: &[K], t: &K) -> K {
    coeffs.iter().rev().fold(K::zero(), |acc, c| acc * t.clone() + c.clone())
}

/// Divisors of `n > 0`, or `None` when trial division would be too slow.
fn divisors(n: &BigInt) -> Option<Vec<u64>> {
    let n = n.to_u64().filter(|&n| n <= 1_000_000_000_000)?;
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    Some(out)
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn characteristic() -> u64 {
        0
    }
    fn random<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Self {
        Self::from_i64(rng.gen_range(-bound..=bound))
    }
    fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.to_integer().to_i64()
        } else {
            None
        }
    }
    fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().ok()?;
                let q: BigInt = q.trim().parse().ok()?;
                if q.is_zero() {
                    None
                } else {
                    Some(BigRational::new(p, q))
                }
            }
            None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
        }
    }
    /// Rational root theorem on the integer-scaled polynomial.
    fn roots(coeffs: &[Self]) -> Vec<Self> {
        let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
        let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let Some(top) = ints.iter().rposition(|c| !c.is_zero()) else {
            return Vec::new();
        };
        let low = ints.iter().position(|c| !c.is_zero()).expect("nonzero");
        let mut out = Vec::new();
        if low > 0 {
            out.push(<Self as Field>::zero());
        }
        if top == low {
            return out;
        }
        let abs = |x: &BigInt| if x.sign() == num_bigint::Sign::Minus { -x } else { x.clone() };
        let (Some(ps), Some(qs)) = (divisors(&abs(&ints[low])), divisors(&abs(&ints[top]))) else {
            return out;
        };
        for p in &ps {
            for q in &qs {
                for sign in [1i64, -1] {
                    let t = BigRational::new(BigInt::from(*p) * sign, BigInt::from(*q));
                    if !out.contains(&t) && Zero::is_zero(&eval_poly(coeffs, &t)) {
                        out.push(t);
                    }
                }
            }
        }
        out
    }
}

/// The prime field with `P` elements, stored as least residues.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp<const P: u64>(u64);

impl<const P: u64> Fp<P> {
    pub fn new(n: i64) -> Self {
        Fp(n.rem_euclid(P as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp(1 % P);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl<const P: u64> Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 + rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 + P as u128 - rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 * rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp((P - self.0) % P)
    }
}

impl<const P: u64> Field for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1 % P)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            // Fermat
            Some(self.pow(P - 2))
        }
    }
    fn from_i64(n: i64) -> Self {
        Fp::new(n)
    }
    fn characteristic() -> u64 {
        P
    }
    fn random<R: Rng + ?Sized>(rng: &mut R, _bound: i64) -> Self {
        Fp(rng.gen_range(0..P))
    }
    fn to_i64(&self) -> Option<i64> {
        i64::try_from(self.0).ok()
    }
    fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((p, q)) => {
                let p: i64 = p.trim().parse().ok()?;
                let q: i64 = q.trim().parse().ok()?;
                Some(Fp::new(p) * Fp::new(q).inv()?)
            }
            None => {
                let n: BigInt = s.parse().ok()?;
                let r = (n % BigInt::from(P)).to_i64()?;
                Some(Fp::new(r))
            }
        }
    }
}

/// Which exact field a model is defined over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FieldSpec {
    Rationals,
    PrimeField { characteristic: u64 },
}

impl FieldSpec {
    /// Default characteristic for the prime-field fast path.
    pub const DEFAULT_PRIME: u64 = 101;

    pub fn prime(p: u64) -> Option<Self> {
        is_prime(p).then_some(FieldSpec::PrimeField { characteristic: p })
    }

    pub fn characteristic(&self) -> Option<u64> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::PrimeField { characteristic } => Some(*characteristic),
        }
    }

    /// Whether the concrete scalar type `K` realizes this field.
    pub fn matches<K: Field>(&self) -> bool {
        match self {
            FieldSpec::Rationals => K::characteristic() == 0,
            FieldSpec::PrimeField { characteristic } => K::characteristic() == *characteristic,
        }
    }

    pub fn of<K: Field>() -> Self {
        match K::characteristic() {
            0 => FieldSpec::Rationals,
            p => FieldSpec::PrimeField { characteristic: p },
        }
    }
}

impl Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField { characteristic } => write!(f, "F{characteristic}"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i.saturating_mul(i) <= n {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    type F101 = Fp<101>;

    #[test]
    fn prime_field_inverses() {
        for n in 1..101 {
            let x = F101::new(n);
            assert_eq!(x * x.inv().unwrap(), F101::one());
        }
        assert!(F101::zero().inv().is_none());
        assert_eq!(F101::new(-1), F101::new(100));
    }

    #[test]
    fn rationals_parse_and_reduce() {
        let q = Rational::parse("6/4").unwrap();
        assert_eq!(q, Rational::new(3.into(), 2.into()));
        assert_eq!(q.to_string(), "3/2");
        assert_eq!(Field::to_i64(&Rational::parse("-7").unwrap()), Some(-7));
        assert!(Rational::parse("1/0").is_none());
    }

    #[test]
    fn field_spec_primality() {
        assert!(FieldSpec::prime(101).is_some());
        assert!(FieldSpec::prime(100).is_none());
        assert!(FieldSpec::of::<F101>().matches::<F101>());
        assert!(FieldSpec::Rationals.matches::<Rational>());
        assert!(!FieldSpec::Rationals.matches::<F101>());
    }

    #[test]
    fn polynomial_roots() {
        let q = |n: i64, d: i64| Rational::new(n.into(), d.into());
        // (2t - 1)(t + 3) t = 2t^3 + 5t^2 - 3t
        let mut r = Rational::roots(&[q(0, 1), q(-3, 1), q(5, 1), q(2, 1)]);
        r.sort();
        assert_eq!(r, vec![q(-3, 1), q(0, 1), q(1, 2)]);
        assert!(Rational::roots(&[q(1, 1), q(0, 1), q(1, 1)]).is_empty());
        let f = |n| F101::new(n);
        // t^2 + 1 splits mod 101 since 10^2 = -1
        let mut r = F101::roots(&[f(1), f(0), f(1)]);
        r.sort_by_key(|x| x.to_i64());
        assert_eq!(r, vec![f(10), f(91)]);
        assert!(Fp::<7>::roots(&[Fp::<7>::new(1), Fp::<7>::new(0), Fp::<7>::new(1)]).is_empty());
    }
}
