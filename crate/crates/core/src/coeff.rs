//! Exact coefficients: Laurent polynomials in `s, a, aL, g` over the rationals and
//! fractions whose denominators are products of braces `{k} = s^k - s^-k`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU32, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Q = BigRational;

/// Exponent vector over `(s, a, aL, g)`.
pub type Exp = [i32; 4];

pub const VAR_NAMES: [&str; 4] = ["s", "a", "aL", "g"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    S = 0,
    A = 1,
    AL = 2,
    G = 3,
}

impl Var {
    pub fn parse(name: &str) -> Option<Var> {
        match name {
            "s" => Some(Var::S),
            "a" => Some(Var::A),
            "aL" | "a_L" => Some(Var::AL),
            "g" => Some(Var::G),
            _ => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoeffError {
    #[error("brace {{{k}}} exceeds the configured bound {max}")]
    BraceBound { k: u32, max: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not invertible in the coefficient ring: {0}")]
    NotInvertible(String),
    #[error("singular substitution: {0}")]
    SingularSubstitution(String),
    #[error("unsupported substitution: {0}")]
    UnsupportedSubstitution(String),
    #[error("negative argument {0}")]
    Negative(i64),
    #[error("parse error: {0}")]
    Parse(String),
}

static MAX_BRACE: Lazy<AtomicU32> = Lazy::new(|| {
    let v = std::env::var("SKEIN_MAX_BRACE")
        .ok()
        .and_then(|s| s.trim().parse::<u32>().ok())
        .unwrap_or(256);
    AtomicU32::new(v)
});

/// Largest `k` allowed in a brace denominator.
pub fn max_brace() -> u32 {
    MAX_BRACE.load(Ordering::Relaxed)
}

pub fn set_max_brace(k: u32) {
    MAX_BRACE.store(k, Ordering::Relaxed);
}

fn check_brace(k: u32) -> Result<(), CoeffError> {
    let max = max_brace();
    if k > max {
        Err(CoeffError::BraceBound { k, max })
    } else {
        Ok(())
    }
}

pub fn rat(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn fmt_rat(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<Q, CoeffError> {
    let s = s.trim();
    let bad = || CoeffError::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(CoeffError::DivisionByZero);
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

// ---------------------------------------------------------------------------
// LaurentPoly

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<Exp, Q>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial([0; 4], c)
    }

    pub fn monomial(e: Exp, c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    /// `v^k` for a single variable.
    pub fn var_pow(v: Var, k: i32) -> Self {
        let mut e = [0; 4];
        e[v as usize] = k;
        Self::monomial(e, Q::one())
    }

    pub fn s_pow(k: i32) -> Self {
        Self::var_pow(Var::S, k)
    }

    pub fn from_terms<I: IntoIterator<Item = (Exp, Q)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn terms(&self) -> &BTreeMap<Exp, Q> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&[0; 4]).is_some_and(|c| c.is_one())
    }

    pub fn add_term(&mut self, e: Exp, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coeff(&self, e: &Exp) -> Q {
        self.terms.get(e).cloned().unwrap_or_else(Q::zero)
    }

    /// The single term if this is a monomial.
    pub fn as_monomial(&self) -> Option<(Exp, &Q)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (*e, c))
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.is_zero() {
            return Some(Q::zero());
        }
        match self.as_monomial() {
            Some((e, c)) if e == [0; 4] => Some(c.clone()),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    pub fn shift(&self, d: &Exp) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (add_exp(e, d), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Degree range of variable `v`, `None` for the zero polynomial.
    pub fn degree_range(&self, v: Var) -> Option<(i32, i32)> {
        let i = v as usize;
        let lo = self.terms.keys().map(|e| e[i]).min()?;
        let hi = self.terms.keys().map(|e| e[i]).max()?;
        Some((lo, hi))
    }

    /// Groups terms by the exponents of `(a, aL, g)`, yielding univariate polynomials in `s`.
    fn split_s(&self) -> BTreeMap<[i32; 3], BTreeMap<i32, Q>> {
        let mut out: BTreeMap<[i32; 3], BTreeMap<i32, Q>> = BTreeMap::new();
        for (e, c) in &self.terms {
            out.entry([e[1], e[2], e[3]])
                .or_default()
                .insert(e[0], c.clone());
        }
        out
    }

    /// Exact division by a univariate polynomial in `s` (given by its coefficient
    /// list from degree 0 upward). Returns `None` if the division leaves a remainder.
    pub fn div_exact_s(&self, divisor: &[Q]) -> Option<Self> {
        let dl = divisor.iter().rposition(|c| !c.is_zero())?;
        let d0 = divisor.iter().position(|c| !c.is_zero())?;
        let div = &divisor[d0..=dl];
        let lead = div.last().unwrap();
        let dn = div.len() - 1;
        let mut out = Self::zero();
        for (rest, uni) in self.split_s() {
            let lo = *uni.keys().next().unwrap();
            let hi = *uni.keys().next_back().unwrap();
            let len = (hi - lo + 1) as usize;
            if len < dn + 1 {
                return None;
            }
            let mut r: Vec<Q> = vec![Q::zero(); len];
            for (k, c) in uni {
                r[(k - lo) as usize] = c;
            }
            let qlen = len - dn;
            let mut quot = vec![Q::zero(); qlen];
            for i in (0..qlen).rev() {
                let top = &r[i + dn];
                if top.is_zero() {
                    continue;
                }
                let f = top / lead;
                for (j, dc) in div.iter().enumerate() {
                    if !dc.is_zero() {
                        let t = &f * dc;
                        r[i + j] -= t;
                    }
                }
                quot[i] = f;
            }
            if r.iter().any(|c| !c.is_zero()) {
                return None;
            }
            for (i, c) in quot.into_iter().enumerate() {
                let sdeg = lo + i as i32 - d0 as i32;
                out.add_term([sdeg, rest[0], rest[1], rest[2]], c);
            }
        }
        Some(out)
    }

    /// Substitutes variables by Laurent polynomials. Negative powers require a monomial binding.
    pub fn substitute(&self, bindings: &[(Var, LaurentPoly)]) -> Result<Self, CoeffError> {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let mut keep = *e;
            let mut factor = Self::constant(c.clone());
            for (v, p) in bindings {
                let i = *v as usize;
                let k = e[i];
                keep[i] = 0;
                if k == 0 {
                    continue;
                }
                let pk = if k > 0 {
                    p.pow(k as u32)
                } else {
                    let inv = p.monomial_inverse().ok_or_else(|| {
                        CoeffError::UnsupportedSubstitution(format!(
                            "negative power of {} bound to a non-monomial",
                            VAR_NAMES[i]
                        ))
                    })?;
                    inv.pow((-k) as u32)
                };
                factor = &factor * &pk;
            }
            out += &factor.shift(&keep);
        }
        Ok(out)
    }

    fn monomial_inverse(&self) -> Option<Self> {
        let (e, c) = self.as_monomial()?;
        Some(Self::monomial(neg_exp(&e), Q::one() / c))
    }

    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            if !mag.is_one() || *e == [0; 4] {
                factors.push(fmt_rat(&mag));
            }
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(VAR_NAMES[i].to_string()),
                    _ => factors.push(format!("{}^{}", VAR_NAMES[i], k)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

pub fn add_exp(a: &Exp, b: &Exp) -> Exp {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

pub fn neg_exp(a: &Exp) -> Exp {
    [-a[0], -a[1], -a[2], -a[3]]
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(add_exp(e1, e2), c1 * c2);
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// ScalarQ

/// `s^{2k} - 1` (or its quotient by `s^{2d} - 1`) as a coefficient list in `s`.
fn brace_core(k: u32, d: u32) -> Vec<Q> {
    // (s^{2k}-1)/(s^{2d}-1) = sum_{j<k/d} s^{2dj}; d = 0 means the full s^{2k}-1.
    let k = k as usize;
    if d == 0 {
        let mut v = vec![Q::zero(); 2 * k + 1];
        v[0] = -Q::one();
        v[2 * k] = Q::one();
        v
    } else {
        let d = d as usize;
        let mut v = vec![Q::zero(); 2 * k - 2 * d + 1];
        for j in 0..k / d {
            v[2 * d * j] = Q::one();
        }
        v
    }
}

fn brace_poly(k: u32) -> LaurentPoly {
    let k = k as i32;
    &LaurentPoly::s_pow(k) - &LaurentPoly::s_pow(-k)
}

fn brace_product(den: &BTreeMap<u32, u32>) -> LaurentPoly {
    let mut acc = LaurentPoly::one();
    for (&k, &e) in den {
        acc = &acc * &brace_poly(k).pow(e);
    }
    acc
}

/// An element of `Q(s, a, aL, g)` of the form `num / prod {k}^{e_k}`.
#[derive(Clone, Debug, Default)]
pub struct ScalarQ {
    num: LaurentPoly,
    den: BTreeMap<u32, u32>,
}

impl ScalarQ {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Self {
            num: p,
            den: BTreeMap::new(),
        }
    }

    pub fn from_rat(c: Q) -> Self {
        Self::from_poly(LaurentPoly::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(int(n))
    }

    pub fn monomial(e: Exp, c: Q) -> Self {
        Self::from_poly(LaurentPoly::monomial(e, c))
    }

    /// `s^k`, i.e. `q^{k/2}`.
    pub fn s_pow(k: i32) -> Self {
        Self::from_poly(LaurentPoly::s_pow(k))
    }

    /// `q^k = s^{2k}`.
    pub fn q_pow(k: i32) -> Self {
        Self::s_pow(2 * k)
    }

    pub fn var_pow(v: Var, k: i32) -> Self {
        Self::from_poly(LaurentPoly::var_pow(v, k))
    }

    /// Builds `num / prod {k}^{e_k}` and reduces it.
    pub fn with_braces(num: LaurentPoly, braces: &[(u32, u32)]) -> Result<Self, CoeffError> {
        let mut den = BTreeMap::new();
        for &(k, e) in braces {
            if k == 0 && e > 0 {
                return Err(CoeffError::DivisionByZero);
            }
            if e > 0 {
                check_brace(k)?;
                *den.entry(k).or_insert(0) += e;
            }
        }
        let mut x = Self { num, den };
        x.reduce();
        Ok(x)
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    /// Denominator braces as `(k, e)` pairs.
    pub fn braces(&self) -> Vec<(u32, u32)> {
        self.den.iter().map(|(k, e)| (*k, *e)).collect()
    }

    pub fn den_poly(&self) -> LaurentPoly {
        brace_product(&self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_empty() && self.num.is_one()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_poly(&self) -> Option<&LaurentPoly> {
        if self.den.is_empty() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn as_rat(&self) -> Option<Q> {
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// Cancels denominator braces against the numerator where the division is exact,
    /// lowering `{k}` to `{d}` for `d | k` when only `{k}/{d}` divides.
    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        loop {
            let mut changed = false;
            let keys: Vec<u32> = self.den.keys().rev().copied().collect();
            for k in keys {
                let mut options = vec![0u32];
                options.extend((1..k).filter(|d| k % d == 0));
                for d in options {
                    if let Some(q) = self.num.div_exact_s(&brace_core(k, d)) {
                        // {k} = s^{-k}(s^{2k}-1), {k}/{d} = s^{-(k-d)} * core.
                        self.num = q.shift(&[k as i32 - d as i32, 0, 0, 0]);
                        let e = self.den.get_mut(&k).unwrap();
                        *e -= 1;
                        if *e == 0 {
                            self.den.remove(&k);
                        }
                        if d > 0 {
                            *self.den.entry(d).or_insert(0) += 1;
                        }
                        changed = true;
                        break;
                    }
                }
                if changed {
                    break;
                }
            }
            if !changed {
                break;
            }
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut x = Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        };
        if x.num.is_zero() {
            x.den.clear();
        }
        x
    }

    /// Multiplies by the monomial `v^k`.
    pub fn mul_var(&self, v: Var, k: i32) -> Self {
        let mut e = [0; 4];
        e[v as usize] = k;
        Self {
            num: self.num.shift(&e),
            den: self.den.clone(),
        }
    }

    pub fn mul_s(&self, k: i32) -> Self {
        self.mul_var(Var::S, k)
    }

    /// Divides by `{k}`; `{-k} = -{k}`.
    pub fn div_brace(&self, k: i32) -> Result<Self, CoeffError> {
        if k == 0 {
            return Err(CoeffError::DivisionByZero);
        }
        let ka = k.unsigned_abs();
        check_brace(ka)?;
        let mut den = self.den.clone();
        *den.entry(ka).or_insert(0) += 1;
        let mut x = Self {
            num: if k < 0 { -&self.num } else { self.num.clone() },
            den,
        };
        x.reduce();
        Ok(x)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Integer power; negative exponents need an invertible element.
    pub fn powi(&self, n: i32) -> Result<Self, CoeffError> {
        if n >= 0 {
            Ok(self.pow(n as u32))
        } else {
            Ok(self.inv()?.pow(n.unsigned_abs()))
        }
    }

    /// Inverse, available when the numerator is a monomial times a product of
    /// cyclotomic polynomials in `s` (so that it divides some product of braces).
    pub fn inv(&self) -> Result<Self, CoeffError> {
        if self.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        let mut rest = self.num.clone();
        let mut cofactor = LaurentPoly::one();
        let mut found: BTreeMap<u32, u32> = BTreeMap::new();
        let max = max_brace();
        'outer: while rest.as_monomial().is_none() {
            let (lo, hi) = rest.degree_range(Var::S).unwrap();
            let span = (hi - lo) as usize;
            for n in 1..=(2 * max as usize) {
                let phi = cyclotomic(n);
                if phi.len() - 1 > span {
                    continue;
                }
                if let Some(q) = rest.div_exact_s(&phi) {
                    rest = q;
                    // Phi_n(s) divides s^{2k} - 1 for k = n/gcd(n, 2).
                    let k = if n % 2 == 0 { n / 2 } else { n } as u32;
                    let full = brace_core(k, 0);
                    let co = LaurentPoly::from_terms(
                        poly_div_exact(&full, &phi)
                            .into_iter()
                            .enumerate()
                            .map(|(i, c)| ([i as i32 - k as i32, 0, 0, 0], c)),
                    );
                    cofactor = &cofactor * &co;
                    *found.entry(k).or_insert(0) += 1;
                    continue 'outer;
                }
            }
            return Err(CoeffError::NotInvertible(self.to_string()));
        }
        for &k in found.keys() {
            check_brace(k)?;
        }
        let inv_mono = rest.monomial_inverse().unwrap();
        let num = &(&inv_mono * &cofactor) * &brace_product(&self.den);
        let mut x = Self { num, den: found };
        x.reduce();
        Ok(x)
    }

    pub fn div(&self, other: &Self) -> Result<Self, CoeffError> {
        Ok(self * &other.inv()?)
    }

    pub fn substitute(&self, bindings: &[(Var, LaurentPoly)]) -> Result<Self, CoeffError> {
        let num = self.num.substitute(bindings)?;
        let s_bind = bindings.iter().find(|(v, _)| *v == Var::S).map(|(_, p)| p);
        let den = match s_bind {
            None => self.den.clone(),
            Some(p) => {
                if self.den.is_empty() {
                    BTreeMap::new()
                } else {
                    let (e, c) = p.as_monomial().ok_or_else(|| {
                        CoeffError::UnsupportedSubstitution("s bound to a non-monomial".into())
                    })?;
                    let j = e[0];
                    if e[1..] != [0, 0, 0] || !c.is_one() {
                        if e == [0; 4] && (c.is_one() || *c == -Q::one()) {
                            return Err(CoeffError::SingularSubstitution(
                                "a brace vanishes at s = ±1".into(),
                            ));
                        }
                        return Err(CoeffError::UnsupportedSubstitution(
                            "s must be bound to a pure power of s".into(),
                        ));
                    }
                    if j == 0 {
                        return Err(CoeffError::SingularSubstitution(
                            "a brace vanishes at s = 1".into(),
                        ));
                    }
                    let mut den = BTreeMap::new();
                    let mut sign_flip = false;
                    for (&k, &ex) in &self.den {
                        let nk = k * j.unsigned_abs();
                        check_brace(nk)?;
                        *den.entry(nk).or_insert(0) += ex;
                        if j < 0 && ex % 2 == 1 {
                            sign_flip = !sign_flip;
                        }
                    }
                    if sign_flip {
                        let mut x = Self { num: -&num, den };
                        x.reduce();
                        return Ok(x);
                    }
                    den
                }
            }
        };
        let mut x = Self { num, den };
        x.reduce();
        Ok(x)
    }

    pub fn to_text(&self) -> String {
        if self.den.is_empty() {
            return self.num.to_text();
        }
        let den: Vec<String> = self
            .den
            .iter()
            .map(|(k, e)| {
                if *e == 1 {
                    format!("{{{k}}}")
                } else {
                    format!("{{{k}}}^{e}")
                }
            })
            .collect();
        format!("({}) / ({})", self.num.to_text(), den.join(" * "))
    }

    /// Total `s`-degree range of the numerator minus denominator degrees (used for sorting/diagnostics).
    pub fn num_terms(&self) -> usize {
        self.num.len()
    }
}

impl fmt::Display for ScalarQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl PartialEq for ScalarQ {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        let l = lcm_den(&self.den, &other.den);
        scaled_num(self, &l) == scaled_num(other, &l)
    }
}

impl Eq for ScalarQ {}

fn lcm_den(a: &BTreeMap<u32, u32>, b: &BTreeMap<u32, u32>) -> BTreeMap<u32, u32> {
    let mut out = a.clone();
    for (&k, &e) in b {
        let x = out.entry(k).or_insert(0);
        *x = (*x).max(e);
    }
    out
}

fn scaled_num(x: &ScalarQ, l: &BTreeMap<u32, u32>) -> LaurentPoly {
    let mut extra = BTreeMap::new();
    for (&k, &e) in l {
        let have = x.den.get(&k).copied().unwrap_or(0);
        if e > have {
            extra.insert(k, e - have);
        }
    }
    if extra.is_empty() {
        x.num.clone()
    } else {
        &x.num * &brace_product(&extra)
    }
}

impl Add for &ScalarQ {
    type Output = ScalarQ;
    fn add(self, rhs: &ScalarQ) -> ScalarQ {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        if self.den == rhs.den {
            let mut x = ScalarQ {
                num: &self.num + &rhs.num,
                den: self.den.clone(),
            };
            if !x.den.is_empty() {
                x.reduce();
            }
            return x;
        }
        let l = lcm_den(&self.den, &rhs.den);
        let mut x = ScalarQ {
            num: &scaled_num(self, &l) + &scaled_num(rhs, &l),
            den: l,
        };
        x.reduce();
        x
    }
}

impl Sub for &ScalarQ {
    type Output = ScalarQ;
    fn sub(self, rhs: &ScalarQ) -> ScalarQ {
        self + &(-rhs)
    }
}

impl Neg for &ScalarQ {
    type Output = ScalarQ;
    fn neg(self) -> ScalarQ {
        ScalarQ {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for ScalarQ {
    type Output = ScalarQ;
    fn neg(self) -> ScalarQ {
        -&self
    }
}

impl Mul for &ScalarQ {
    type Output = ScalarQ;
    fn mul(self, rhs: &ScalarQ) -> ScalarQ {
        if self.is_zero() || rhs.is_zero() {
            return ScalarQ::zero();
        }
        let num = &self.num * &rhs.num;
        if rhs.den.is_empty() && self.den.is_empty() {
            return ScalarQ::from_poly(num);
        }
        let mut den = self.den.clone();
        for (&k, &e) in &rhs.den {
            *den.entry(k).or_insert(0) += e;
        }
        let mut x = ScalarQ { num, den };
        x.reduce();
        x
    }
}

impl AddAssign<&ScalarQ> for ScalarQ {
    fn add_assign(&mut self, rhs: &ScalarQ) {
        *self = &*self + rhs;
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                &self + &rhs
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                &self - &rhs
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                &self * &rhs
            }
        }
    };
}
owned_ops!(ScalarQ);
owned_ops!(LaurentPoly);

fn poly_div_exact(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = &b[db];
    let n = a.len() - db;
    let mut q = vec![Q::zero(); n];
    for i in (0..n).rev() {
        let f = &r[i + db] / lead;
        if f.is_zero() {
            continue;
        }
        for (j, c) in b.iter().enumerate() {
            r[i + j] -= &f * c;
        }
        q[i] = f;
    }
    debug_assert!(r.iter().all(|c| c.is_zero()));
    q
}

static CYCLOTOMIC: Lazy<std::sync::Mutex<Vec<Vec<Q>>>> =
    Lazy::new(|| std::sync::Mutex::new(vec![vec![]]));

/// Coefficients of the cyclotomic polynomial `Phi_n`.
fn cyclotomic(n: usize) -> Vec<Q> {
    {
        let cache = CYCLOTOMIC.lock().unwrap();
        if n < cache.len() {
            return cache[n].clone();
        }
    }
    let mut xn = vec![Q::zero(); n + 1];
    xn[0] = -Q::one();
    xn[n] = Q::one();
    let mut p = xn;
    for d in 1..n {
        if n % d == 0 {
            p = poly_div_exact(&p, &cyclotomic(d));
        }
    }
    let mut cache = CYCLOTOMIC.lock().unwrap();
    while cache.len() <= n {
        cache.push(vec![]);
    }
    cache[n] = p.clone();
    p
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Serialize, Deserialize)]
struct TermJson {
    exp: [i32; 4],
    coef: String,
}

#[derive(Serialize, Deserialize)]
struct DenJson {
    mono: [i32; 4],
    braces: Vec<[u32; 2]>,
    int: String,
}

#[derive(Serialize, Deserialize)]
struct ScalarJson {
    num: Vec<TermJson>,
    den: DenJson,
}

impl Serialize for ScalarQ {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let j = ScalarJson {
            num: self
                .num
                .terms
                .iter()
                .map(|(e, c)| TermJson {
                    exp: *e,
                    coef: fmt_rat(c),
                })
                .collect(),
            den: DenJson {
                mono: [0; 4],
                braces: self.den.iter().map(|(k, e)| [*k, *e]).collect(),
                int: "1".into(),
            },
        };
        j.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for ScalarQ {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = ScalarJson::deserialize(de)?;
        let mut num = LaurentPoly::zero();
        for t in j.num {
            num.add_term(t.exp, parse_rat(&t.coef).map_err(D::Error::custom)?);
        }
        let int = parse_rat(&j.den.int).map_err(D::Error::custom)?;
        if int.is_zero() {
            return Err(D::Error::custom("zero integer in denominator"));
        }
        let num = num.shift(&neg_exp(&j.den.mono)).scale(&(Q::one() / int));
        let braces: Vec<(u32, u32)> = j.den.braces.iter().map(|b| (b[0], b[1])).collect();
        ScalarQ::with_braces(num, &braces).map_err(D::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// q-numbers

/// `{k} = s^k - s^{-k}`.
pub fn qbrace(k: i32) -> ScalarQ {
    ScalarQ::from_poly(&LaurentPoly::s_pow(k) - &LaurentPoly::s_pow(-k))
}

/// Quantum integer `[n] = s^{n-1} + s^{n-3} + ... + s^{-(n-1)}`.
pub fn qint(n: i64) -> Result<ScalarQ, CoeffError> {
    if n < 0 {
        return Err(CoeffError::Negative(n));
    }
    let n = n as i32;
    Ok(ScalarQ::from_poly(LaurentPoly::from_terms(
        (0..n).map(|j| ([n - 1 - 2 * j, 0, 0, 0], Q::one())),
    )))
}

/// Quantum factorial `[n]! = [1][2]...[n]`.
pub fn qfact(n: i64) -> Result<ScalarQ, CoeffError> {
    let mut acc = ScalarQ::one();
    for m in 1..=n.max(0) {
        acc = &acc * &qint(m)?;
    }
    if n < 0 {
        return Err(CoeffError::Negative(n));
    }
    Ok(acc)
}

/// Coefficients `x^0..=x^order` of `prod_{j<|d|} (1 + x s^{|d|-1-2j})^{sign d}`.
pub fn qbinom_series(d: i64, order: usize) -> Vec<LaurentPoly> {
    let m = d.unsigned_abs() as i32;
    let mut series = vec![LaurentPoly::zero(); order + 1];
    series[0] = LaurentPoly::one();
    for j in 0..m {
        let w = LaurentPoly::s_pow(m - 1 - 2 * j);
        if d > 0 {
            for k in (1..=order).rev() {
                let t = &series[k - 1] * &w;
                series[k] += &t;
            }
        } else {
            // multiply by 1/(1 + x w) = sum (-x w)^n: c_k <- c_k - w c_{k-1}, ascending
            for k in 1..=order {
                let t = &series[k - 1] * &w;
                series[k] = &series[k] - &t;
            }
        }
    }
    series
}

/// q-binomial coefficient extended to negative `d` by the reciprocal generating function.
pub fn qbinom(d: i64, k: u32) -> ScalarQ {
    let k = k as usize;
    if d >= 0 && k as i64 > d {
        return ScalarQ::zero();
    }
    ScalarQ::from_poly(qbinom_series(d, k).pop().unwrap())
}

/// `1 - q^n = -s^n {n}`.
pub fn one_minus_q_pow(n: i32) -> ScalarQ {
    (&qbrace(n)).mul_s(n).neg()
}

/// `1 / prod_{k=1}^n (1 - q^k)`.
pub fn inv_q_pochhammer(n: u32) -> Result<ScalarQ, CoeffError> {
    let mut x = ScalarQ::one();
    for k in 1..=n as i32 {
        x = x.div_brace(k)?.mul_s(-k).neg();
    }
    Ok(x)
}

pub fn to_i64(q: &Q) -> Option<i64> {
    if q.is_integer() {
        q.numer().to_i64()
    } else {
        None
    }
}
