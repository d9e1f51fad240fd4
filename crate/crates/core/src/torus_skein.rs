//! The torus skein algebra in PBW normal form, Baxter operators as truncated series,
//! adjoint actions and the pentagon identity.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use once_cell::sync::Lazy;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeff::{qbinom, qbrace, rat, CoeffError, LaurentPoly, ScalarQ, Var};
use crate::quantum_cluster::{QLattice, QTElement, QuantumTorus};

pub type Vec2 = [i64; 2];
pub type Word = Vec<Vec2>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SkeinError {
    #[error("zero vector")]
    ZeroVector,
    #[error("vector {0:?} is not primitive")]
    NotPrimitive(Vec2),
    #[error("det(x|y) = {0}, expected 1")]
    BadDeterminant(i64),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

pub fn det(a: Vec2, b: Vec2) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

fn half(v: Vec2) -> u8 {
    if v[1] > 0 || (v[1] == 0 && v[0] > 0) {
        0
    } else {
        1
    }
}

/// Strict slope order: angle in `[0, 2pi)`, then length.
pub fn slope_less(a: Vec2, b: Vec2) -> Result<bool, SkeinError> {
    if a == [0, 0] || b == [0, 0] {
        return Err(SkeinError::ZeroVector);
    }
    Ok(slope_lt(a, b))
}

fn slope_lt(a: Vec2, b: Vec2) -> bool {
    let (ha, hb) = (half(a), half(b));
    if ha != hb {
        return ha < hb;
    }
    let c = det(a, b);
    if c != 0 {
        return c > 0;
    }
    a[0] * a[0] + a[1] * a[1] < b[0] * b[0] + b[1] * b[1]
}

pub fn is_primitive(v: Vec2) -> bool {
    num_integer::gcd(v[0], v[1]) == 1
}

fn is_sorted(w: &[Vec2]) -> bool {
    w.windows(2).all(|p| !slope_lt(p[1], p[0]))
}

/// A combination of slope-sorted words in the generators `P_v`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SkeinElement {
    terms: BTreeMap<Word, ScalarQ>,
}

impl SkeinElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(ScalarQ::one())
    }

    pub fn scalar(c: ScalarQ) -> Self {
        let mut e = Self::zero();
        e.add_term(Vec::new(), c);
        e
    }

    /// `P_v`.
    pub fn generator(v: Vec2) -> Result<Self, SkeinError> {
        if v == [0, 0] {
            return Err(SkeinError::ZeroVector);
        }
        let mut e = Self::zero();
        e.add_term(vec![v], ScalarQ::one());
        Ok(e)
    }

    /// Normal-orders `c P_{w1} ... P_{wk}`.
    pub fn word(w: &[Vec2], c: ScalarQ) -> Result<Self, SkeinError> {
        normal_order(w, c)
    }

    fn add_term(&mut self, w: Word, c: ScalarQ) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(x) => {
                *x = &*x + &c;
                if x.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<Word, ScalarQ> {
        &self.terms
    }

    pub fn coeff(&self, w: &[Vec2]) -> ScalarQ {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }

    pub fn scale(&self, c: &ScalarQ) -> Self {
        let mut out = Self::zero();
        for (w, x) in &self.terms {
            out.add_term(w.clone(), x * c);
        }
        out
    }

    /// Concatenate and normal-order.
    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                let c = c1 * c2;
                if c.is_zero() {
                    continue;
                }
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                for (u, x) in &normal_order_cached(&w).terms {
                    out.add_term(u.clone(), x * &c);
                }
            }
        }
        out
    }

    /// Every word has the same `Z^2`-degree, returned if so.
    pub fn degree(&self) -> Option<Vec2> {
        let mut d = None;
        for w in self.terms.keys() {
            let s = word_degree(w);
            match d {
                None => d = Some(s),
                Some(x) if x != s => return None,
                _ => {}
            }
        }
        d
    }

    pub fn is_normal(&self) -> bool {
        self.terms.keys().all(|w| is_sorted(w))
    }

    pub fn map_coeffs(
        &self,
        f: impl Fn(&ScalarQ) -> Result<ScalarQ, CoeffError>,
    ) -> Result<Self, CoeffError> {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c)?);
        }
        Ok(out)
    }
}

pub fn word_degree(w: &[Vec2]) -> Vec2 {
    w.iter().fold([0, 0], |a, v| [a[0] + v[0], a[1] + v[1]])
}

impl fmt::Display for SkeinElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let ws: Vec<String> = w.iter().map(|v| format!("P({},{})", v[0], v[1])).collect();
                if ws.is_empty() {
                    format!("[{c}]")
                } else {
                    format!("[{c}] {}", ws.join(" "))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct WordTermJson {
    word: Word,
    coeff: ScalarQ,
}

impl Serialize for SkeinElement {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let v: Vec<WordTermJson> = self
            .terms
            .iter()
            .map(|(w, c)| WordTermJson {
                word: w.clone(),
                coeff: c.clone(),
            })
            .collect();
        v.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for SkeinElement {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let v = Vec::<WordTermJson>::deserialize(de)?;
        let mut out = SkeinElement::zero();
        for t in v {
            if t.word.iter().any(|x| *x == [0, 0]) {
                return Err(serde::de::Error::custom("zero vector in word"));
            }
            for (u, x) in &normal_order_cached(&t.word).terms {
                out.add_term(u.clone(), x * &t.coeff);
            }
        }
        Ok(out)
    }
}

static NORMAL_CACHE: Lazy<Mutex<HashMap<Word, SkeinElement>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn first_inversion(w: &[Vec2]) -> Option<usize> {
    (0..w.len().saturating_sub(1)).find(|&i| slope_lt(w[i + 1], w[i]))
}

/// Rewrites `P_b P_a` (with `a` before `b` in slope order) at position `i`.
fn rewrite_at(w: &[Vec2], i: usize) -> (Word, Option<(Word, i64)>) {
    let (b, a) = (w[i], w[i + 1]);
    let mut swapped = w.to_vec();
    swapped[i] = a;
    swapped[i + 1] = b;
    let d = det(b, a);
    let bracket = if d != 0 {
        let mut m = w[..i].to_vec();
        m.push([a[0] + b[0], a[1] + b[1]]);
        m.extend_from_slice(&w[i + 2..]);
        Some((m, d))
    } else {
        None
    };
    (swapped, bracket)
}

fn normal_order_cached(w: &[Vec2]) -> SkeinElement {
    if is_sorted(w) {
        let mut e = SkeinElement::zero();
        e.add_term(w.to_vec(), ScalarQ::one());
        return e;
    }
    if let Some(e) = NORMAL_CACHE.lock().unwrap().get(w) {
        return e.clone();
    }
    let i = first_inversion(w).expect("unsorted word has an inversion");
    let (swapped, bracket) = rewrite_at(w, i);
    let mut out = normal_order_cached(&swapped);
    if let Some((m, d)) = bracket {
        out = out.add(&normal_order_cached(&m).scale(&qbrace(d as i32)));
    }
    NORMAL_CACHE.lock().unwrap().insert(w.to_vec(), out.clone());
    out
}

/// PBW normal form of `c P_{w1} ... P_{wk}`, rewriting the leftmost inversion first.
pub fn normal_order(w: &[Vec2], c: ScalarQ) -> Result<SkeinElement, SkeinError> {
    if w.iter().any(|v| *v == [0, 0]) {
        return Err(SkeinError::ZeroVector);
    }
    Ok(normal_order_cached(w).scale(&c))
}

/// Normal form computed by rewriting a randomly chosen inversion at every step, without caching.
pub fn normal_order_random<R: Rng>(w: &[Vec2], rng: &mut R) -> Result<SkeinElement, SkeinError> {
    if w.iter().any(|v| *v == [0, 0]) {
        return Err(SkeinError::ZeroVector);
    }
    let mut pending: Vec<(Word, ScalarQ)> = vec![(w.to_vec(), ScalarQ::one())];
    let mut out = SkeinElement::zero();
    while let Some((w, c)) = pending.pop() {
        let inv: Vec<usize> = (0..w.len().saturating_sub(1))
            .filter(|&i| slope_lt(w[i + 1], w[i]))
            .collect();
        if inv.is_empty() {
            out.add_term(w, c);
            continue;
        }
        let i = inv[rng.gen_range(0..inv.len())];
        let (swapped, bracket) = rewrite_at(&w, i);
        if let Some((m, d)) = bracket {
            pending.push((m, &c * &qbrace(d as i32)));
        }
        pending.push((swapped, c));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Bi-graded series

/// A series in two commuting formal variables `v`, `w` truncated at total order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSeries {
    pub coeffs: BTreeMap<(u32, u32), SkeinElement>,
    pub order: u32,
}

/// Which formal variable carries a Baxter operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesVar {
    V,
    W,
    VW,
}

impl BiSeries {
    pub fn one(order: u32) -> Self {
        Self::constant(SkeinElement::one(), order)
    }

    pub fn constant(e: SkeinElement, order: u32) -> Self {
        let mut coeffs = BTreeMap::new();
        if !e.is_zero() {
            coeffs.insert((0, 0), e);
        }
        Self { coeffs, order }
    }

    pub fn coeff(&self, i: u32, j: u32) -> SkeinElement {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, e) in &o.coeffs {
            let x = out.coeff(k.0, k.1).add(e);
            if x.is_zero() {
                out.coeffs.remove(k);
            } else {
                out.coeffs.insert(*k, x);
            }
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let neg = BiSeries {
            coeffs: o
                .coeffs
                .iter()
                .map(|(k, e)| (*k, e.scale(&ScalarQ::from_int(-1))))
                .collect(),
            order: o.order,
        };
        self.add(&neg)
    }

    /// Truncated product; coefficients are computed independently in parallel.
    pub fn mul(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        let keys: Vec<(u32, u32)> = (0..=order)
            .flat_map(|t| (0..=t).map(move |i| (i, t - i)))
            .collect();
        let results: Vec<((u32, u32), SkeinElement)> = keys
            .par_iter()
            .map(|&(i, j)| {
                let mut acc = SkeinElement::zero();
                for (&(i1, j1), a) in &self.coeffs {
                    if i1 > i || j1 > j {
                        continue;
                    }
                    if let Some(b) = o.coeffs.get(&(i - i1, j - j1)) {
                        acc = acc.add(&a.mul(b));
                    }
                }
                ((i, j), acc)
            })
            .collect();
        Self {
            coeffs: results.into_iter().filter(|(_, e)| !e.is_zero()).collect(),
            order,
        }
    }

    pub fn product(factors: &[BiSeries]) -> Self {
        let order = factors.iter().map(|f| f.order).min().unwrap_or(0);
        factors
            .iter()
            .fold(BiSeries::one(order), |acc, f| acc.mul(f))
    }

    /// `Q_x(t)^{+-1} = exp(+-sum_n -(-t)^n P_{nx} / (n {n}))` in the chosen variable.
    pub fn baxter(x: Vec2, var: SeriesVar, inverse: bool, order: u32) -> Result<Self, SkeinError> {
        if x == [0, 0] {
            return Err(SkeinError::ZeroVector);
        }
        let step = match var {
            SeriesVar::VW => 2,
            _ => 1,
        };
        let n_max = (order / step) as usize;
        let coeffs = baxter_coefficients(x, inverse, n_max)?;
        let mut out = BiSeries {
            coeffs: BTreeMap::new(),
            order,
        };
        for (n, e) in coeffs.into_iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            let n = n as u32;
            let key = match var {
                SeriesVar::V => (n, 0),
                SeriesVar::W => (0, n),
                SeriesVar::VW => (n, n),
            };
            out.coeffs.insert(key, e);
        }
        Ok(out)
    }

    /// Pairs `(i, j)` in increasing total degree, then increasing `i`.
    pub fn keys_in_order(order: u32) -> Vec<(u32, u32)> {
        (0..=order)
            .flat_map(|t| (0..=t).map(move |i| (i, t - i)))
            .collect()
    }

    pub fn first_difference(&self, o: &Self) -> Option<(u32, u32)> {
        let order = self.order.min(o.order);
        Self::keys_in_order(order)
            .into_iter()
            .find(|&(i, j)| self.coeff(i, j) != o.coeff(i, j))
    }
}

/// Coefficients of `t^n` in `Q_x(t)^{+-1}`, `n <= n_max`.
pub fn baxter_coefficients(
    x: Vec2,
    inverse: bool,
    n_max: usize,
) -> Result<Vec<SkeinElement>, SkeinError> {
    // theta_n = -(-1)^n P_{nx}/(n {n})
    let mut theta = vec![SkeinElement::zero(); n_max + 1];
    for (n, slot) in theta.iter_mut().enumerate().skip(1) {
        let sign = if n % 2 == 1 { 1 } else { -1 };
        let sign = if inverse { -sign } else { sign };
        let c = ScalarQ::from_rat(rat(sign, n as i64)).div_brace(n as i32)?;
        *slot = SkeinElement::generator([x[0] * n as i64, x[1] * n as i64])?.scale(&c);
    }
    // k e_k = sum_j j theta_j e_{k-j}; all terms commute
    let mut e = vec![SkeinElement::zero(); n_max + 1];
    e[0] = SkeinElement::one();
    for k in 1..=n_max {
        let mut acc = SkeinElement::zero();
        for j in 1..=k {
            if theta[j].is_zero() || e[k - j].is_zero() {
                continue;
            }
            acc = acc.add(&theta[j].mul(&e[k - j]).scale(&ScalarQ::from_int(j as i64)));
        }
        e[k] = acc.scale(&ScalarQ::from_rat(rat(1, k as i64)));
    }
    Ok(e)
}

/// `Q_x(v)^{s1} Q_y(w)^{s2}`.
pub fn baxter_biseries(
    x: Vec2,
    y: Vec2,
    signs: (i32, i32),
    order: u32,
) -> Result<BiSeries, SkeinError> {
    for v in [x, y] {
        if !is_primitive(v) {
            return Err(SkeinError::NotPrimitive(v));
        }
    }
    let a = BiSeries::baxter(x, SeriesVar::V, signs.0 < 0, order)?;
    let b = BiSeries::baxter(y, SeriesVar::W, signs.1 < 0, order)?;
    Ok(a.mul(&b))
}

// ---------------------------------------------------------------------------
// Adjoint action

/// `Ad_{Q_x(t)} P_y = sum_n qbinom(d, n) t^n P_{y + n x}` with `d = det(x|y)`.
pub fn ad_closed(x: Vec2, y: Vec2, order: u32) -> Result<Vec<(u32, ScalarQ)>, SkeinError> {
    if !is_primitive(x) {
        return Err(SkeinError::NotPrimitive(x));
    }
    let d = det(x, y);
    Ok((0..=order).map(|n| (n, qbinom(d, n))).collect())
}

/// `exp(ad Theta_x(t)) P_y` from the bracket `[P_a, P_b] = {det(a|b)} P_{a+b}` alone.
pub fn ad_series_oracle(x: Vec2, y: Vec2, order: u32) -> Result<Vec<(u32, ScalarQ)>, SkeinError> {
    if !is_primitive(x) {
        return Err(SkeinError::NotPrimitive(x));
    }
    let n_max = order as usize;
    let d = det(x, y);
    // state: coefficient of t^n P_{y + n x}
    let mut term = vec![ScalarQ::zero(); n_max + 1];
    term[0] = ScalarQ::one();
    let mut total = term.clone();
    for k in 1..=n_max {
        let mut next = vec![ScalarQ::zero(); n_max + 1];
        for (m, c) in term.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for n in 1..=(n_max - m) {
                // theta_n = -(-1)^n P_{nx}/(n {n}); [P_{nx}, P_{y+mx}] = {n d} P_{y+(m+n)x}
                let sign = if n % 2 == 1 { 1 } else { -1 };
                let br = qbrace((n as i64 * d) as i32);
                if br.is_zero() {
                    continue;
                }
                let th = ScalarQ::from_rat(rat(sign, n as i64)).div_brace(n as i32)?;
                next[m + n] = &next[m + n] + &(&(c * &th) * &br);
            }
        }
        let inv_k = ScalarQ::from_rat(rat(1, k as i64));
        term = next.into_iter().map(|c| c * inv_k.clone()).collect();
        for (t, c) in total.iter_mut().zip(&term) {
            *t = &*t + c;
        }
    }
    Ok(total
        .into_iter()
        .enumerate()
        .map(|(n, c)| (n as u32, c))
        .collect())
}

/// Applies `Ad_{Q_x(t)}` via the closed form, letter by letter, with `t` in the given variable.
pub fn ad_apply_closed(
    x: Vec2,
    var: SeriesVar,
    e: &SkeinElement,
    order: u32,
) -> Result<BiSeries, SkeinError> {
    let mut out = BiSeries {
        coeffs: BTreeMap::new(),
        order,
    };
    for (w, c) in e.terms() {
        let mut acc = BiSeries::constant(SkeinElement::scalar(c.clone()), order);
        for &y in w {
            let mut letter = BiSeries {
                coeffs: BTreeMap::new(),
                order,
            };
            for (n, b) in ad_closed(x, y, order)? {
                let key = match var {
                    SeriesVar::V => (n, 0),
                    SeriesVar::W => (0, n),
                    SeriesVar::VW => (n, n),
                };
                if key.0 + key.1 > order || b.is_zero() {
                    continue;
                }
                let v = [y[0] + n as i64 * x[0], y[1] + n as i64 * x[1]];
                if v == [0, 0] {
                    continue;
                }
                letter
                    .coeffs
                    .insert(key, SkeinElement::generator(v)?.scale(&b));
            }
            acc = acc.mul(&letter);
        }
        out = out.add(&acc);
    }
    Ok(out)
}

/// `A e A^{-1}` for a product of Baxter operators given as `(x, var)` pairs.
pub fn conjugate(ops: &[(Vec2, SeriesVar)], e: &BiSeries) -> Result<BiSeries, SkeinError> {
    let order = e.order;
    let mut left = Vec::new();
    let mut right = Vec::new();
    for &(x, var) in ops {
        left.push(BiSeries::baxter(x, var, false, order)?);
    }
    for &(x, var) in ops.iter().rev() {
        right.push(BiSeries::baxter(x, var, true, order)?);
    }
    let mut all = left;
    all.push(e.clone());
    all.extend(right);
    Ok(BiSeries::product(&all))
}

// ---------------------------------------------------------------------------
// Pentagon

/// Orientation of the pentagon identity being tested.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PentagonForm {
    /// `Q_x(v) Q_y(w) = Q_y(w) Q_{x+y}(vw) Q_x(v)`.
    Standard,
    /// `Q_y(w) Q_x(v) = Q_x(v) Q_{x+y}(vw) Q_y(w)`.
    Reversed,
    /// `Q_y(w) Q_x(v) = Q_y(w) Q_{x+y}(vw) Q_x(v)`.
    SwappedRhs,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PentagonReport {
    pub pass: bool,
    pub order: u32,
    pub checked: usize,
    #[serde(rename = "firstFail")]
    pub first_fail: Option<[u32; 2]>,
}

pub fn pentagon_sides(
    x: Vec2,
    y: Vec2,
    order: u32,
    form: PentagonForm,
) -> Result<(BiSeries, BiSeries), SkeinError> {
    let d = det(x, y);
    if d != 1 {
        return Err(SkeinError::BadDeterminant(d));
    }
    let xy = [x[0] + y[0], x[1] + y[1]];
    let qx = BiSeries::baxter(x, SeriesVar::V, false, order)?;
    let qy = BiSeries::baxter(y, SeriesVar::W, false, order)?;
    let qxy = BiSeries::baxter(xy, SeriesVar::VW, false, order)?;
    Ok(match form {
        PentagonForm::Standard => (qx.mul(&qy), BiSeries::product(&[qy, qxy, qx])),
        PentagonForm::Reversed => (qy.mul(&qx), BiSeries::product(&[qx, qxy, qy])),
        PentagonForm::SwappedRhs => (qy.mul(&qx), BiSeries::product(&[qy, qxy, qx])),
    })
}

pub fn pentagon_check_form(
    x: Vec2,
    y: Vec2,
    order: u32,
    form: PentagonForm,
) -> Result<PentagonReport, SkeinError> {
    let (l, r) = pentagon_sides(x, y, order, form)?;
    let keys = BiSeries::keys_in_order(order);
    let first = l.first_difference(&r);
    let checked = match first {
        None => keys.len(),
        Some(k) => keys.iter().position(|&z| z == k).unwrap() + 1,
    };
    Ok(PentagonReport {
        pass: first.is_none(),
        order,
        checked,
        first_fail: first.map(|(i, j)| [i, j]),
    })
}

pub fn pentagon_check(x: Vec2, y: Vec2, order: u32) -> Result<PentagonReport, SkeinError> {
    pentagon_check_form(x, y, order, PentagonForm::Standard)
}

// ---------------------------------------------------------------------------
// Linking skein

/// The quantum torus over `Z^2` with `(u, v) = det(u|v)`.
pub fn linking_torus() -> QuantumTorus {
    let lat = QLattice::new(
        vec![vec![0, 1], vec![-1, 0]],
        Some(vec!["x".into(), "y".into()]),
    )
    .expect("skew");
    QuantumTorus::new(lat)
}

/// Sends `P_{v1} ... P_{vk}` to `X_{v1} ... X_{vk}` and sets `a = s`.
pub fn reduce_to_linking(e: &SkeinElement) -> Result<QTElement, SkeinError> {
    let t = linking_torus();
    let s = LaurentPoly::s_pow(1);
    let mut out = QTElement::zero();
    for (w, c) in e.terms() {
        let c = c.substitute(&[(Var::A, s.clone())])?;
        let mut acc = QTElement::scalar(2, c);
        for v in w {
            acc = t.mul(&acc, &QTElement::x(vec![v[0], v[1]]));
        }
        out = out.add(&acc);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: Vec2) -> SkeinElement {
        SkeinElement::generator(v).unwrap()
    }

    #[test]
    fn slope_examples() {
        assert!(slope_less([1, 0], [0, 1]).unwrap());
        assert!(slope_less([1, 1], [2, 2]).unwrap());
        assert!(!slope_less([0, -1], [1, 0]).unwrap());
        assert!(slope_less([0, 0], [1, 0]).is_err());
    }

    #[test]
    fn normal_order_examples() {
        let e = normal_order(&[[0, 1], [1, 0]], ScalarQ::one()).unwrap();
        let expected = normal_order(&[[1, 0], [0, 1]], ScalarQ::one())
            .unwrap()
            .sub(&p([1, 1]).scale(&qbrace(1)));
        assert_eq!(e, expected);
        let e = normal_order(&[[1, 1], [1, 0]], ScalarQ::one()).unwrap();
        let expected = normal_order(&[[1, 0], [1, 1]], ScalarQ::one())
            .unwrap()
            .sub(&p([2, 1]).scale(&qbrace(1)));
        assert_eq!(e, expected);
        let e = p([0, 1]).mul(&p([0, 2]));
        assert_eq!(e.len(), 1);
        assert!(e.terms().contains_key(&vec![[0, 1], [0, 2]]));
        // opposite vectors commute
        let e = p([1, 0]).mul(&p([-1, 0]));
        assert_eq!(e, p([-1, 0]).mul(&p([1, 0])));
    }

    #[test]
    fn baxter_examples() {
        let b = BiSeries::baxter([1, 0], SeriesVar::V, false, 2).unwrap();
        assert_eq!(b.coeff(0, 0), SkeinElement::one());
        assert_eq!(
            b.coeff(1, 0),
            p([1, 0]).scale(&ScalarQ::one().div_brace(1).unwrap())
        );
        let c2 = p([1, 0])
            .mul(&p([1, 0]))
            .scale(
                &ScalarQ::from_rat(rat(1, 2))
                    .div_brace(1)
                    .unwrap()
                    .div_brace(1)
                    .unwrap(),
            )
            .sub(&p([2, 0]).scale(&ScalarQ::from_rat(rat(1, 2)).div_brace(2).unwrap()));
        assert_eq!(b.coeff(2, 0), c2);
        let inv = BiSeries::baxter([1, 0], SeriesVar::V, true, 4).unwrap();
        let b4 = BiSeries::baxter([1, 0], SeriesVar::V, false, 4).unwrap();
        assert_eq!(b4.mul(&inv), BiSeries::one(4));
    }

    #[test]
    fn ad_examples() {
        let a = ad_closed([1, 0], [0, 1], 3).unwrap();
        assert_eq!(a[1].1, ScalarQ::one());
        assert!(a[2].1.is_zero());
        let a = ad_closed([0, 1], [1, 0], 3).unwrap();
        assert_eq!(a[3].1, ScalarQ::from_int(-1));
        assert_eq!(
            ad_series_oracle([1, 0], [0, 1], 5).unwrap(),
            ad_closed([1, 0], [0, 1], 5).unwrap()
        );
        assert_eq!(
            ad_series_oracle([0, 1], [1, 0], 5).unwrap(),
            ad_closed([0, 1], [1, 0], 5).unwrap()
        );
        assert_eq!(
            ad_series_oracle([1, 0], [0, 3], 4).unwrap(),
            ad_closed([1, 0], [0, 3], 4).unwrap()
        );
    }

    #[test]
    fn pentagon_orientations() {
        assert!(pentagon_check([1, 0], [0, 1], 3).unwrap().pass);
        let r = pentagon_check_form([1, 0], [0, 1], 2, PentagonForm::SwappedRhs).unwrap();
        assert_eq!(r.first_fail, Some([1, 1]));
        let r = pentagon_check_form([1, 0], [0, 1], 2, PentagonForm::Reversed).unwrap();
        assert_eq!(r.first_fail, Some([1, 1]));
        assert!(pentagon_check([1, 1], [0, 1], 3).unwrap().pass);
        assert!(pentagon_check([1, 0], [0, 2], 2).is_err());
    }

    #[test]
    fn linking_examples() {
        assert_eq!(
            reduce_to_linking(&p([1, 0])).unwrap(),
            QTElement::x(vec![1, 0])
        );
        let e = p([1, 0]).mul(&p([0, 1]));
        assert_eq!(
            reduce_to_linking(&e).unwrap(),
            QTElement::monomial(vec![1, 1], ScalarQ::s_pow(1))
        );
        let t = linking_torus();
        let q = BiSeries::baxter([0, 1], SeriesVar::V, false, 5).unwrap();
        let phi = t.dilog(&[0, 1], 5).unwrap();
        for n in 0..=5 {
            let r = reduce_to_linking(&q.coeff(n, 0)).unwrap();
            assert_eq!(
                r,
                QTElement::monomial(vec![0, n as i64], phi.coeff(&[0, n as i64]))
            );
        }
    }
}
