//! Exact scalars: rationals, Gaussian rationals and rational quaternions.
//!
//! Everything downstream is generic over [`Field`], which is implemented for
//! [`Q`], [`Qi`] and [`Quat`]. `Quat` is a skew field; routines that need
//! commutativity (determinants, characteristic polynomials) are only
//! instantiated with `Q` and `Qi`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A rational number.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Q(pub BigRational);

/// A Gaussian rational `re + im·i`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Qi {
    pub re: Q,
    pub im: Q,
}

/// A rational quaternion `a + b·i + c·j + d·k`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Quat {
    pub a: Q,
    pub b: Q,
    pub c: Q,
    pub d: Q,
}

/// Exact division ring used by the matrix layer.
pub trait Field:
    Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Number of rational coordinates of one element.
    const COORDS: usize;
    const RING: Ring;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
    /// Involutive anti-automorphism (identity on `Q`).
    fn conj(&self) -> Self;
    fn from_q(q: &Q) -> Self;
    /// Rational coordinates, `COORDS` of them.
    fn coords(&self) -> Vec<Q>;
    fn from_coords(c: &[Q]) -> Self;
    fn parse_str(s: &str) -> Result<Self>;

    fn from_i64(n: i64) -> Self {
        Self::from_q(&Q::from(n))
    }
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }
}

// ---------------------------------------------------------------- Q

impl Q {
    pub fn new(num: i64, den: i64) -> Self {
        Q(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }
    pub fn zero() -> Self {
        Q(BigRational::zero())
    }
    pub fn one() -> Self {
        Q(BigRational::one())
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }
    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }
    pub fn abs(&self) -> Q {
        Q(self.0.abs())
    }
    pub fn recip(&self) -> Option<Q> {
        if self.is_zero() {
            None
        } else {
            Some(Q(self.0.recip()))
        }
    }
    /// Integer value when the rational is integral and fits.
    pub fn to_i64(&self) -> Option<i64> {
        use num_traits::ToPrimitive;
        if self.0.is_integer() {
            self.0.to_integer().to_i64()
        } else {
            None
        }
    }
    pub fn floor(&self) -> Q {
        Q(self.0.floor())
    }
}

impl From<i64> for Q {
    fn from(n: i64) -> Self {
        Q(BigRational::from_integer(BigInt::from(n)))
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Q {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid rational `{s}`"));
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q(BigRational::new(n, d)))
        } else {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Q(BigRational::from_integer(n)))
        }
    }
}

impl<'a> Add<&'a Q> for &'a Q {
    type Output = Q;
    fn add(self, o: &Q) -> Q {
        Q(&self.0 + &o.0)
    }
}
impl<'a> Sub<&'a Q> for &'a Q {
    type Output = Q;
    fn sub(self, o: &Q) -> Q {
        Q(&self.0 - &o.0)
    }
}
impl<'a> Mul<&'a Q> for &'a Q {
    type Output = Q;
    fn mul(self, o: &Q) -> Q {
        Q(&self.0 * &o.0)
    }
}
impl Neg for &Q {
    type Output = Q;
    fn neg(self) -> Q {
        Q(-&self.0)
    }
}

impl Field for Q {
    const COORDS: usize = 1;
    const RING: Ring = Ring::Rational;
    fn zero() -> Self {
        Q::zero()
    }
    fn one() -> Self {
        Q::one()
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        self.recip()
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn from_q(q: &Q) -> Self {
        q.clone()
    }
    fn coords(&self) -> Vec<Q> {
        vec![self.clone()]
    }
    fn from_coords(c: &[Q]) -> Self {
        c[0].clone()
    }
    fn parse_str(s: &str) -> Result<Self> {
        s.parse()
    }
}

// ---------------------------------------------------------------- Qi

impl Qi {
    pub fn new(re: Q, im: Q) -> Self {
        Qi { re, im }
    }
    pub fn i() -> Self {
        Qi::new(Q::zero(), Q::one())
    }
    pub fn real(re: Q) -> Self {
        Qi::new(re, Q::zero())
    }
    /// `|z|^2`.
    pub fn norm(&self) -> Q {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }
}

fn fmt_parts(f: &mut fmt::Formatter<'_>, parts: &[(&Q, &str)]) -> fmt::Result {
    let mut wrote = false;
    for (c, unit) in parts {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        if wrote {
            f.write_str(if neg { "-" } else { "+" })?;
        } else if neg {
            f.write_str("-")?;
        }
        let a = c.abs();
        if unit.is_empty() || !a.0.is_one() {
            write!(f, "{a}")?;
        }
        f.write_str(unit)?;
        wrote = true;
    }
    if !wrote {
        f.write_str("0")?;
    }
    Ok(())
}

/// Splits `1/2-3i+4k` into signed terms with their unit suffix.
fn parse_terms(s: &str, units: &[char]) -> Result<Vec<(Q, Option<char>)>> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty scalar".into()));
    }
    let mut terms = Vec::new();
    let mut start = 0;
    let bytes: Vec<char> = s.chars().collect();
    for k in 1..=bytes.len() {
        if k == bytes.len() || ((bytes[k] == '+' || bytes[k] == '-') && bytes[k - 1] != '/') {
            let t: String = bytes[start..k].iter().collect();
            terms.push(t);
            start = k;
        }
    }
    let mut out = Vec::new();
    for t in terms {
        let (body, unit) = match t.chars().last() {
            Some(c) if units.contains(&c) => (&t[..t.len() - 1], Some(c)),
            _ => (&t[..], None),
        };
        let body = body.trim_start_matches('+');
        let q = match body {
            "" => Q::one(),
            "-" => Q::from(-1),
            b => b.parse()?,
        };
        out.push((q, unit));
    }
    Ok(out)
}

impl fmt::Display for Qi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_parts(f, &[(&self.re, ""), (&self.im, "i")])
    }
}
impl fmt::Debug for Qi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Field for Qi {
    const COORDS: usize = 2;
    const RING: Ring = Ring::Gaussian;
    fn zero() -> Self {
        Qi::default_zero()
    }
    fn one() -> Self {
        Qi::real(Q::one())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        Qi::new(&self.re + &o.re, &self.im + &o.im)
    }
    fn sub(&self, o: &Self) -> Self {
        Qi::new(&self.re - &o.re, &self.im - &o.im)
    }
    fn mul(&self, o: &Self) -> Self {
        Qi::new(
            &(&self.re * &o.re) - &(&self.im * &o.im),
            &(&self.re * &o.im) + &(&self.im * &o.re),
        )
    }
    fn neg(&self) -> Self {
        Qi::new(-&self.re, -&self.im)
    }
    fn inv(&self) -> Option<Self> {
        let n = self.norm().recip()?;
        Some(Qi::new(&self.re * &n, -&(&self.im * &n)))
    }
    fn conj(&self) -> Self {
        Qi::new(self.re.clone(), -&self.im)
    }
    fn from_q(q: &Q) -> Self {
        Qi::real(q.clone())
    }
    fn coords(&self) -> Vec<Q> {
        vec![self.re.clone(), self.im.clone()]
    }
    fn from_coords(c: &[Q]) -> Self {
        Qi::new(c[0].clone(), c[1].clone())
    }
    fn parse_str(s: &str) -> Result<Self> {
        let mut z = Qi::default_zero();
        for (q, u) in parse_terms(s, &['i'])? {
            match u {
                None => z.re = &z.re + &q,
                Some(_) => z.im = &z.im + &q,
            }
        }
        Ok(z)
    }
}

impl Qi {
    fn default_zero() -> Self {
        Qi::new(Q::zero(), Q::zero())
    }
}

// ---------------------------------------------------------------- Quat

impl Quat {
    pub fn new(a: Q, b: Q, c: Q, d: Q) -> Self {
        Quat { a, b, c, d }
    }
    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Quat::new(a.into(), b.into(), c.into(), d.into())
    }
    pub fn norm(&self) -> Q {
        let s = [&self.a, &self.b, &self.c, &self.d];
        s.iter().fold(Q::zero(), |acc, x| &acc + &(*x * *x))
    }
    /// Complex 2×2 realization `[[a+bi, c+di], [-c+di, a-bi]]`.
    pub fn to_complex_block(&self) -> [[Qi; 2]; 2] {
        [
            [
                Qi::new(self.a.clone(), self.b.clone()),
                Qi::new(self.c.clone(), self.d.clone()),
            ],
            [
                Qi::new(-&self.c, self.d.clone()),
                Qi::new(self.a.clone(), -&self.b),
            ],
        ]
    }
}

impl fmt::Display for Quat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_parts(
            f,
            &[(&self.a, ""), (&self.b, "i"), (&self.c, "j"), (&self.d, "k")],
        )
    }
}
impl fmt::Debug for Quat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Field for Quat {
    const COORDS: usize = 4;
    const RING: Ring = Ring::Quaternion;
    fn zero() -> Self {
        Quat::from_ints(0, 0, 0, 0)
    }
    fn one() -> Self {
        Quat::from_ints(1, 0, 0, 0)
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        Quat::new(&self.a + &o.a, &self.b + &o.b, &self.c + &o.c, &self.d + &o.d)
    }
    fn sub(&self, o: &Self) -> Self {
        Quat::new(&self.a - &o.a, &self.b - &o.b, &self.c - &o.c, &self.d - &o.d)
    }
    fn mul(&self, o: &Self) -> Self {
        let (a1, b1, c1, d1) = (&self.a, &self.b, &self.c, &self.d);
        let (a2, b2, c2, d2) = (&o.a, &o.b, &o.c, &o.d);
        let m = |x: &Q, y: &Q| x * y;
        Quat::new(
            &(&(&m(a1, a2) - &m(b1, b2)) - &m(c1, c2)) - &m(d1, d2),
            &(&(&m(a1, b2) + &m(b1, a2)) + &m(c1, d2)) - &m(d1, c2),
            &(&(&m(a1, c2) - &m(b1, d2)) + &m(c1, a2)) + &m(d1, b2),
            &(&(&m(a1, d2) + &m(b1, c2)) - &m(c1, b2)) + &m(d1, a2),
        )
    }
    fn neg(&self) -> Self {
        Quat::new(-&self.a, -&self.b, -&self.c, -&self.d)
    }
    fn inv(&self) -> Option<Self> {
        let n = self.norm().recip()?;
        let c = self.conj();
        Some(Quat::new(&c.a * &n, &c.b * &n, &c.c * &n, &c.d * &n))
    }
    fn conj(&self) -> Self {
        Quat::new(self.a.clone(), -&self.b, -&self.c, -&self.d)
    }
    fn from_q(q: &Q) -> Self {
        Quat::new(q.clone(), Q::zero(), Q::zero(), Q::zero())
    }
    fn coords(&self) -> Vec<Q> {
        vec![self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone()]
    }
    fn from_coords(c: &[Q]) -> Self {
        Quat::new(c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone())
    }
    fn parse_str(s: &str) -> Result<Self> {
        let mut z = Quat::zero();
        for (q, u) in parse_terms(s, &['i', 'j', 'k'])? {
            match u {
                None => z.a = &z.a + &q,
                Some('i') => z.b = &z.b + &q,
                Some('j') => z.c = &z.c + &q,
                Some(_) => z.d = &z.d + &q,
            }
        }
        Ok(z)
    }
}

// ---------------------------------------------------------------- Scalar

/// Which exact division ring a system is defined over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ring {
    Rational,
    Gaussian,
    Quaternion,
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ring::Rational => "Q",
            Ring::Gaussian => "Qi",
            Ring::Quaternion => "H",
        })
    }
}

impl FromStr for Ring {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Q" | "rational" => Ok(Ring::Rational),
            "Qi" | "gaussian" | "C" => Ok(Ring::Gaussian),
            "H" | "quaternion" => Ok(Ring::Quaternion),
            _ => Err(Error::Parse(format!("unknown ring `{s}`"))),
        }
    }
}

/// A tagged exact scalar. Arithmetic promotes to the larger ring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(Q),
    Gaussian(Qi),
    Quaternion(Quat),
}

impl From<Q> for Scalar {
    fn from(q: Q) -> Self {
        Scalar::Rational(q)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::Rational(Q::from(n))
    }
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::Rational(Q::zero())
    }

    pub fn one() -> Scalar {
        Scalar::Rational(Q::one())
    }

    pub fn to_q(&self) -> Option<Q> {
        match self.lift(Ring::Rational).ok()? {
            Scalar::Rational(q) => Some(q),
            _ => None,
        }
    }

    pub fn to_qi(&self) -> Option<Qi> {
        match self.lift(Ring::Gaussian).ok()? {
            Scalar::Gaussian(z) => Some(z),
            _ => None,
        }
    }

    pub fn ring(&self) -> Ring {
        match self {
            Scalar::Rational(_) => Ring::Rational,
            Scalar::Gaussian(_) => Ring::Gaussian,
            Scalar::Quaternion(_) => Ring::Quaternion,
        }
    }

    pub fn to_quat(&self) -> Quat {
        match self {
            Scalar::Rational(q) => Quat::from_q(q),
            Scalar::Gaussian(z) => Quat::new(z.re.clone(), z.im.clone(), Q::zero(), Q::zero()),
            Scalar::Quaternion(h) => h.clone(),
        }
    }

    /// Re-tag in `ring`; fails when information would be lost.
    pub fn lift(&self, ring: Ring) -> Result<Scalar> {
        let h = self.to_quat();
        let fits = match ring {
            Ring::Rational => h.b.is_zero() && h.c.is_zero() && h.d.is_zero(),
            Ring::Gaussian => h.c.is_zero() && h.d.is_zero(),
            Ring::Quaternion => true,
        };
        if !fits {
            return Err(Error::RingMismatch(format!("{self} does not lie in {ring}")));
        }
        Ok(match ring {
            Ring::Rational => Scalar::Rational(h.a),
            Ring::Gaussian => Scalar::Gaussian(Qi::new(h.a, h.b)),
            Ring::Quaternion => Scalar::Quaternion(h),
        })
    }

    fn combine(&self, o: &Scalar, f: impl Fn(&Quat, &Quat) -> Quat) -> Scalar {
        let ring = self.ring().max(o.ring());
        let r = f(&self.to_quat(), &o.to_quat());
        Scalar::Quaternion(r)
            .lift(ring)
            .expect("closed under ring operations")
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        self.combine(o, |a, b| a.add(b))
    }
    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.combine(o, |a, b| a.sub(b))
    }
    pub fn mul(&self, o: &Scalar) -> Scalar {
        self.combine(o, |a, b| a.mul(b))
    }
    pub fn neg(&self) -> Scalar {
        self.combine(&Scalar::Rational(Q::zero()), |a, _| a.neg())
    }
    pub fn conj(&self) -> Scalar {
        self.combine(&Scalar::Rational(Q::zero()), |a, _| a.conj())
    }
    pub fn inv(&self) -> Option<Scalar> {
        let i = self.to_quat().inv()?;
        Some(Scalar::Quaternion(i).lift(self.ring()).expect("inverse stays in ring"))
    }
    pub fn is_zero(&self) -> bool {
        self.to_quat().is_zero()
    }

    pub fn parse(s: &str, ring: Ring) -> Result<Scalar> {
        Scalar::Quaternion(Quat::parse_str(s)?).lift(ring)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{q}"),
            Scalar::Gaussian(z) => write!(f, "{z}"),
            Scalar::Quaternion(h) => write!(f, "{h}"),
        }
    }
}
impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.ring(), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn quat() -> impl Strategy<Value = Quat> {
        (-5i64..5, -5i64..5, -5i64..5, -5i64..5, 1i64..4)
            .prop_map(|(a, b, c, d, den)| {
                Quat::new(Q::new(a, den), Q::new(b, 1), Q::new(c, den), Q::new(d, 1))
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn quaternion_associative(x in quat(), y in quat(), z in quat()) {
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        }

        #[test]
        fn quaternion_conj_antiautomorphism(x in quat(), y in quat()) {
            prop_assert_eq!(x.mul(&y).conj(), y.conj().mul(&x.conj()));
            prop_assert_eq!(x.conj().conj(), x);
        }

        #[test]
        fn display_parse_roundtrip(x in quat()) {
            prop_assert_eq!(Quat::parse_str(&x.to_string()).unwrap(), x);
        }
    }

    #[test]
    fn quaternion_units() {
        let i = Quat::from_ints(0, 1, 0, 0);
        let j = Quat::from_ints(0, 0, 1, 0);
        let k = Quat::from_ints(0, 0, 0, 1);
        assert_eq!(i.mul(&j), k);
        assert_eq!(j.mul(&i), k.neg());
        assert_eq!(i.mul(&i), Quat::from_ints(-1, 0, 0, 0));
    }

    #[test]
    fn embeddings_compatible() {
        let a = Scalar::Rational(Q::new(1, 2));
        let b = Scalar::Gaussian(Qi::new(Q::from(1), Q::from(3)));
        let s = a.mul(&b);
        assert_eq!(s.ring(), Ring::Gaussian);
        assert_eq!(s.to_string(), "1/2+3/2i");
        assert_eq!(a.lift(Ring::Quaternion).unwrap().lift(Ring::Rational).unwrap(), a);
        assert!(b.lift(Ring::Rational).is_err());
    }

    #[test]
    fn gaussian_parse() {
        assert_eq!(Qi::parse_str("-i").unwrap(), Qi::i().neg());
        assert_eq!(Qi::parse_str("1/2-3/4i").unwrap().to_string(), "1/2-3/4i");
        assert_eq!(Qi::parse_str("0").unwrap(), Qi::zero());
    }
}
