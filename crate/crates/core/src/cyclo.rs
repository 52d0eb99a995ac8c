//! Exact arithmetic in the cyclotomic field Q(zeta), zeta a primitive 8th root of unity.
//!
//! Elements are stored as q0 + q1 zeta + q2 zeta^2 + q3 zeta^3 with a common
//! denominator. Small values use machine integers and fall back to big
//! integers on overflow; the representation is always canonical so derived
//! equality is mathematical equality.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNum(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small([i64; 4], i64),
    Big(Box<([BigInt; 4], BigInt)>),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn from_i128(mut num: [i128; 4], mut den: i128) -> CycNum {
    debug_assert!(den != 0);
    if num.iter().all(|&x| x == 0) {
        return CycNum::zero();
    }
    if den < 0 {
        if den == i128::MIN || num.contains(&i128::MIN) {
            return big_from_i128(num, den);
        }
        den = -den;
        for x in &mut num {
            *x = -*x;
        }
    }
    let mut g = den.unsigned_abs();
    for x in &num {
        g = gcd_u128(g, x.unsigned_abs());
    }
    if g > 1 {
        let g = g as i128;
        den /= g;
        for x in &mut num {
            *x /= g;
        }
    }
    let small = (|| {
        Some((
            [
                i64::try_from(num[0]).ok()?,
                i64::try_from(num[1]).ok()?,
                i64::try_from(num[2]).ok()?,
                i64::try_from(num[3]).ok()?,
            ],
            i64::try_from(den).ok()?,
        ))
    })();
    match small {
        Some((n, d)) => CycNum(Repr::Small(n, d)),
        None => big_from_i128(num, den),
    }
}

fn big_from_i128(num: [i128; 4], den: i128) -> CycNum {
    from_big(num.map(BigInt::from), BigInt::from(den))
}

fn from_big(mut num: [BigInt; 4], mut den: BigInt) -> CycNum {
    debug_assert!(!den.is_zero());
    if num.iter().all(|x| x.is_zero()) {
        return CycNum::zero();
    }
    if den.is_negative() {
        den = -den;
        for x in &mut num {
            *x = -std::mem::take(x);
        }
    }
    let mut g = den.clone();
    for x in &num {
        g = g.gcd(x);
    }
    if !g.is_one() {
        den /= &g;
        for x in &mut num {
            *x /= &g;
        }
    }
    let small = (|| {
        Some((
            [num[0].to_i64()?, num[1].to_i64()?, num[2].to_i64()?, num[3].to_i64()?],
            den.to_i64()?,
        ))
    })();
    match small {
        Some((n, d)) => CycNum(Repr::Small(n, d)),
        None => CycNum(Repr::Big(Box::new((num, den)))),
    }
}

impl CycNum {
    pub fn zero() -> Self {
        CycNum(Repr::Small([0; 4], 1))
    }

    pub fn one() -> Self {
        CycNum(Repr::Small([1, 0, 0, 0], 1))
    }

    pub fn from_int(n: i64) -> Self {
        CycNum(Repr::Small([n, 0, 0, 0], 1))
    }

    /// The rational number p/q.
    pub fn frac(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(from_i128([p as i128, 0, 0, 0], q as i128))
    }

    pub fn from_rational(r: &BigRational) -> Self {
        from_big(
            [r.numer().clone(), BigInt::zero(), BigInt::zero(), BigInt::zero()],
            r.denom().clone(),
        )
    }

    /// zeta^k for any integer k.
    pub fn zeta_pow(k: i64) -> Self {
        let k = k.rem_euclid(8) as usize;
        let mut num = [0i64; 4];
        if k < 4 {
            num[k] = 1;
        } else {
            num[k - 4] = -1;
        }
        CycNum(Repr::Small(num, 1))
    }

    pub fn zeta() -> Self {
        Self::zeta_pow(1)
    }

    /// The imaginary unit, zeta^2.
    pub fn i() -> Self {
        Self::zeta_pow(2)
    }

    /// i^k.
    pub fn i_pow(k: i64) -> Self {
        Self::zeta_pow(2 * k.rem_euclid(4))
    }

    pub fn from_rationals(q: [BigRational; 4]) -> Self {
        let mut den = BigInt::one();
        for x in &q {
            den = den.lcm(x.denom());
        }
        let num = q.map(|x| x.numer() * (&den / x.denom()));
        from_big(num, den)
    }

    /// Rational coordinates in the basis 1, zeta, zeta^2, zeta^3.
    pub fn coeffs(&self) -> [BigRational; 4] {
        let (num, den) = self.big_parts();
        num.map(|n| BigRational::new(n, den.clone()))
    }

    fn big_parts(&self) -> ([BigInt; 4], BigInt) {
        match &self.0 {
            Repr::Small(n, d) => (n.map(BigInt::from), BigInt::from(*d)),
            Repr::Big(b) => (b.0.clone(), b.1.clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.0, Repr::Small(n, _) if *n == [0; 4])
    }

    pub fn is_one(&self) -> bool {
        matches!(&self.0, Repr::Small([1, 0, 0, 0], 1))
    }

    pub fn is_rational(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => n[1] == 0 && n[2] == 0 && n[3] == 0,
            Repr::Big(b) => b.0[1..].iter().all(|x| x.is_zero()),
        }
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            let (num, den) = self.big_parts();
            Some(BigRational::new(num[0].clone(), den))
        } else {
            None
        }
    }

    /// Integer value when the number is a rational integer fitting in i64.
    pub fn to_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small([a, 0, 0, 0], 1) => Some(*a),
            _ => None,
        }
    }

    /// The Galois automorphism zeta -> zeta^k, k odd.
    pub fn galois(&self, k: i64) -> Self {
        assert!(k.rem_euclid(2) == 1, "Galois exponent must be odd");
        let k = k.rem_euclid(8) as usize;
        let target = |j: usize| {
            let e = (j * k) % 8;
            if e < 4 {
                (e, false)
            } else {
                (e - 4, true)
            }
        };
        match &self.0 {
            Repr::Small(n, d) if !n.contains(&i64::MIN) => {
                let mut out = [0i64; 4];
                for (j, &c) in n.iter().enumerate() {
                    let (e, neg) = target(j);
                    out[e] = if neg { -c } else { c };
                }
                CycNum(Repr::Small(out, *d))
            }
            _ => {
                let (n, d) = self.big_parts();
                let mut out: [BigInt; 4] = Default::default();
                for (j, c) in n.into_iter().enumerate() {
                    let (e, neg) = target(j);
                    out[e] = if neg { -c } else { c };
                }
                from_big(out, d)
            }
        }
    }

    /// Complex conjugate (zeta -> zeta^7).
    pub fn conj(&self) -> Self {
        self.galois(7)
    }

    /// Field norm down to Q.
    pub fn norm(&self) -> BigRational {
        let n = self * &self.galois(3) * self.galois(5) * self.galois(7);
        n.to_rational().expect("field norm is rational")
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Repr::Small([a, 0, 0, 0], d) = &self.0 {
            return Ok(from_i128([*d as i128, 0, 0, 0], *a as i128));
        }
        let others = self.galois(3) * self.galois(5) * self.galois(7);
        let n = (self * &others).to_rational().expect("field norm is rational");
        Ok(others * CycNum::from_rational(&n.recip()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = CycNum::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Numeric value in C, for display only.
    pub fn embed_complex(&self) -> (f64, f64) {
        let q = self.coeffs();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let basis = [(1.0, 0.0), (s, s), (0.0, 1.0), (-s, s)];
        let mut re = 0.0;
        let mut im = 0.0;
        for (c, (br, bi)) in q.iter().zip(basis) {
            let v = c.to_f64().unwrap_or(f64::NAN);
            re += v * br;
            im += v * bi;
        }
        (re, im)
    }

    /// The four coordinates as "p/q" strings.
    pub fn to_strings(&self) -> [String; 4] {
        self.coeffs().map(|c| format!("{}/{}", c.numer(), c.denom()))
    }

    pub fn from_strings(parts: &[String]) -> Result<Self> {
        if parts.len() != 4 {
            return Err(Error::Parse(format!(
                "expected 4 rational coordinates, got {}",
                parts.len()
            )));
        }
        let mut q: [BigRational; 4] = Default::default();
        for (slot, s) in q.iter_mut().zip(parts) {
            *slot = parse_rational(s)?;
        }
        Ok(CycNum::from_rationals(q))
    }

    fn add_impl(&self, rhs: &Self, negate: bool) -> Self {
        if let (Repr::Small(a, da), Repr::Small(b, db)) = (&self.0, &rhs.0) {
            let sign: i128 = if negate { -1 } else { 1 };
            if da == db {
                let mut acc = [0i128; 4];
                for k in 0..4 {
                    acc[k] = a[k] as i128 + sign * b[k] as i128;
                }
                return from_i128(acc, *da as i128);
            }
            let r = (|| {
                let mut acc = [0i128; 4];
                for k in 0..4 {
                    let x = (a[k] as i128).checked_mul(*db as i128)?;
                    let y = (b[k] as i128).checked_mul(*da as i128)?;
                    acc[k] = x.checked_add(sign * y)?;
                }
                Some(from_i128(acc, (*da as i128).checked_mul(*db as i128)?))
            })();
            if let Some(r) = r {
                return r;
            }
        }
        let (a, da) = self.big_parts();
        let (b, db) = rhs.big_parts();
        let mut num: [BigInt; 4] = Default::default();
        for k in 0..4 {
            let y = &b[k] * &da;
            num[k] = &a[k] * &db + if negate { -y } else { y };
        }
        from_big(num, da * db)
    }

    fn mul_impl(&self, rhs: &Self) -> Self {
        if let (Repr::Small(a, da), Repr::Small(b, db)) = (&self.0, &rhs.0) {
            let r = (|| {
                let mut acc = [0i128; 4];
                for i in 0..4 {
                    if a[i] == 0 {
                        continue;
                    }
                    for j in 0..4 {
                        if b[j] == 0 {
                            continue;
                        }
                        let p = a[i] as i128 * b[j] as i128;
                        let k = i + j;
                        if k < 4 {
                            acc[k] = acc[k].checked_add(p)?;
                        } else {
                            acc[k - 4] = acc[k - 4].checked_sub(p)?;
                        }
                    }
                }
                Some(from_i128(acc, *da as i128 * *db as i128))
            })();
            if let Some(r) = r {
                return r;
            }
        }
        let (a, da) = self.big_parts();
        let (b, db) = rhs.big_parts();
        let mut num: [BigInt; 4] = Default::default();
        for i in 0..4 {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..4 {
                let p = &a[i] * &b[j];
                let k = i + j;
                if k < 4 {
                    num[k] += p;
                } else {
                    num[k - 4] -= p;
                }
            }
        }
        from_big(num, da * db)
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational '{s}'"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl Default for CycNum {
    fn default() -> Self {
        CycNum::zero()
    }
}

impl From<i64> for CycNum {
    fn from(n: i64) -> Self {
        CycNum::from_int(n)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&CycNum> for &CycNum {
            type Output = CycNum;
            fn $method(self, rhs: &CycNum) -> CycNum {
                $body(self, rhs)
            }
        }
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: CycNum) -> CycNum {
                $body(&self, &rhs)
            }
        }
        impl $tr<&CycNum> for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: &CycNum) -> CycNum {
                $body(&self, rhs)
            }
        }
        impl $tr<CycNum> for &CycNum {
            type Output = CycNum;
            fn $method(self, rhs: CycNum) -> CycNum {
                $body(self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a: &CycNum, b: &CycNum| a.add_impl(b, false));
binop!(Sub, sub, |a: &CycNum, b: &CycNum| a.add_impl(b, true));
binop!(Mul, mul, |a: &CycNum, b: &CycNum| a.mul_impl(b));
binop!(Div, div, |a: &CycNum, b: &CycNum| a
    .checked_div(b)
    .expect("division by zero in CycNum"));

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        match &self.0 {
            Repr::Small(n, d) if !n.contains(&i64::MIN) => CycNum(Repr::Small(n.map(|x| -x), *d)),
            _ => {
                let (n, d) = self.big_parts();
                from_big(n.map(|x| -x), d)
            }
        }
    }
}

impl AddAssign<&CycNum> for CycNum {
    fn add_assign(&mut self, rhs: &CycNum) {
        *self = self.add_impl(rhs, false);
    }
}

impl AddAssign for CycNum {
    fn add_assign(&mut self, rhs: CycNum) {
        *self = self.add_impl(&rhs, false);
    }
}

impl SubAssign<&CycNum> for CycNum {
    fn sub_assign(&mut self, rhs: &CycNum) {
        *self = self.add_impl(rhs, true);
    }
}

impl MulAssign<&CycNum> for CycNum {
    fn mul_assign(&mut self, rhs: &CycNum) {
        *self = self.mul_impl(rhs);
    }
}

impl Sum for CycNum {
    fn sum<I: Iterator<Item = CycNum>>(iter: I) -> Self {
        iter.fold(CycNum::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a CycNum> for CycNum {
    fn sum<I: Iterator<Item = &'a CycNum>>(iter: I) -> Self {
        iter.fold(CycNum::zero(), |a, b| a + b)
    }
}

impl Product for CycNum {
    fn product<I: Iterator<Item = CycNum>>(iter: I) -> Self {
        iter.fold(CycNum::one(), |a, b| a * b)
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mag = if a.is_integer() {
                a.numer().to_string()
            } else {
                format!("{}/{}", a.numer(), a.denom())
            };
            match k {
                0 => f.write_str(&mag)?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if k == 1 {
                        f.write_str("zeta")?;
                    } else {
                        write!(f, "zeta^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for CycNum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Wire {
            Coords(Vec<String>),
            Expr(String),
        }
        let parsed = match Wire::deserialize(d)? {
            Wire::Coords(v) => CycNum::from_strings(&v),
            Wire::Expr(s) => s.parse(),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Expression parser: integers, zeta, i, + - * / ^ and parentheses.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Num(text.parse().expect("digits")));
        } else if c.is_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_alphanumeric() {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{c}' in '{s}'")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<CycNum> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc += self.term()?;
            } else if self.eat('-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<CycNum> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc * self.unary()?;
            } else if self.eat('/') {
                let d = self.unary()?;
                acc = acc.checked_div(&d)?;
            } else if matches!(self.peek(), Some(Tok::Ident(_)) | Some(Tok::Sym('('))) {
                acc = acc * self.power()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<CycNum> {
        if self.eat('-') {
            Ok(-self.unary()?)
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<CycNum> {
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            match self.toks.get(self.pos).cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e = n
                        .to_i64()
                        .ok_or_else(|| Error::Parse("exponent too large".into()))?;
                    base.pow(if neg { -e } else { e })
                }
                _ => Err(Error::Parse("expected integer exponent".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<CycNum> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(from_big([n, BigInt::zero(), BigInt::zero(), BigInt::zero()], BigInt::one()))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "zeta" | "z" | "ζ" => Ok(CycNum::zeta()),
                    "i" => Ok(CycNum::i()),
                    _ => Err(Error::Parse(format!("unknown symbol '{name}'"))),
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(v)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

impl FromStr for CycNum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let toks = tokenize(s)?;
        if toks.is_empty() {
            return Err(Error::Parse("empty expression".into()));
        }
        let mut p = Parser { toks, pos: 0 };
        let v = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(Error::Parse(format!("trailing input in '{s}'")));
        }
        Ok(v)
    }
}

/// Choice of the primitive 8th root beta = zeta^k, k odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct BetaChoice(u8);

impl BetaChoice {
    pub const ALL: [BetaChoice; 4] = [BetaChoice(1), BetaChoice(3), BetaChoice(5), BetaChoice(7)];

    pub fn new(exponent: u8) -> Result<Self> {
        match exponent {
            1 | 3 | 5 | 7 => Ok(BetaChoice(exponent)),
            _ => Err(Error::Config(format!(
                "beta exponent must be one of 1, 3, 5, 7 (got {exponent})"
            ))),
        }
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn beta(self) -> CycNum {
        CycNum::zeta_pow(self.0 as i64)
    }
}

impl Default for BetaChoice {
    fn default() -> Self {
        BetaChoice(1)
    }
}

impl TryFrom<u8> for BetaChoice {
    type Error = Error;
    fn try_from(v: u8) -> Result<Self> {
        BetaChoice::new(v)
    }
}

impl From<BetaChoice> for u8 {
    fn from(b: BetaChoice) -> u8 {
        b.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> CycNum {
        s.parse().unwrap()
    }

    #[test]
    fn zeta_to_the_fourth_is_minus_one() {
        assert_eq!(CycNum::zeta().pow(4).unwrap(), CycNum::from_int(-1));
        assert_eq!(CycNum::zeta().pow(8).unwrap(), CycNum::one());
    }

    #[test]
    fn inverse_of_one_plus_zeta() {
        let x = c("1 + zeta");
        let y = x.inv().unwrap();
        assert_eq!(&x * &y, CycNum::one());
        // independent check: (1+z)^{-1} = (1 - z + z^2 - z^3)/2 because (1+z)(1-z+z^2-z^3) = 1 - z^4 = 2
        assert_eq!(y, c("(1 - zeta + zeta^2 - zeta^3)/2"));
    }

    #[test]
    fn zero_has_no_inverse() {
        assert_eq!(CycNum::zero().inv(), Err(Error::DivisionByZero));
        assert!("1/0".parse::<CycNum>().is_err());
    }

    #[test]
    fn string_roundtrip() {
        let x = c("3/4 - 2*zeta^3 + i");
        let s = x.to_strings();
        assert_eq!(s[0], "3/4");
        assert_eq!(s[2], "1/1");
        assert_eq!(CycNum::from_strings(&s).unwrap(), x);
        let json = serde_json::to_string(&x).unwrap();
        let back: CycNum = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
        let from_expr: CycNum = serde_json::from_str("\"3/4 - 2 zeta^3 + i\"").unwrap();
        assert_eq!(from_expr, x);
    }

    #[test]
    fn display_parses_back() {
        for s in ["0", "-1", "1/2", "zeta^3", "-zeta + 2/3*zeta^2", "7 - 5*zeta^3"] {
            let x = c(s);
            assert_eq!(c(&x.to_string()), x, "{s}");
        }
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        let big = CycNum::from_int(i64::MAX);
        let sq = &big * &big;
        let back = sq.checked_div(&big).unwrap();
        assert_eq!(back, big);
        let tiny = CycNum::frac(1, i64::MAX).unwrap();
        assert!((&tiny * &tiny * &sq).is_one());
    }

    #[test]
    fn galois_is_multiplicative_and_norm_rational() {
        let x = c("2 - zeta + 3*zeta^3");
        let y = c("1/2 + zeta^2");
        for k in [1, 3, 5, 7] {
            assert_eq!((&x * &y).galois(k), x.galois(k) * y.galois(k));
        }
        assert!(!x.norm().is_zero());
    }

    #[test]
    fn embedding_of_zeta() {
        let (re, im) = CycNum::zeta().embed_complex();
        assert!((re - im).abs() < 1e-12 && (re * re + im * im - 1.0).abs() < 1e-12);
    }

    #[test]
    fn beta_choice_validation() {
        assert!(BetaChoice::new(2).is_err());
        assert_eq!(BetaChoice::new(3).unwrap().beta(), CycNum::zeta_pow(3));
        assert_eq!(BetaChoice::default().exponent(), 1);
    }
}
