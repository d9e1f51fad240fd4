//! The skein module of the solid torus in the basis `W_lambda`, acted on by the
//! generators `P_{(m,n)}` of the torus skein algebra.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeff::{int, qbrace, CoeffError, LaurentPoly, ScalarQ, Var};
use crate::partitions::{strip_additions, Partition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnnulusError {
    #[error("P_(0,0) is not a generator")]
    ZeroGenerator,
    #[error("negative n = {0} is not supported on this module")]
    NegativeDirection(i64),
    #[error("Baxter series needs n >= 1 to truncate, got n = {0}")]
    NonTruncating(i64),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// A finite combination of basis vectors `W_lambda`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModuleVector {
    coeffs: BTreeMap<Partition, ScalarQ>,
}

impl ModuleVector {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The vacuum `W_()`.
    pub fn vacuum() -> Self {
        Self::basis(Partition::empty())
    }

    pub fn basis(p: Partition) -> Self {
        let mut v = Self::zero();
        v.add_term(p, ScalarQ::one());
        v
    }

    pub fn add_term(&mut self, p: Partition, c: ScalarQ) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&p) {
            Some(x) => {
                *x = &*x + &c;
                if x.is_zero() {
                    self.coeffs.remove(&p);
                }
            }
            None => {
                self.coeffs.insert(p, c);
            }
        }
    }

    pub fn coeff(&self, p: &Partition) -> ScalarQ {
        self.coeffs.get(p).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &ScalarQ)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &ScalarQ) -> Self {
        let mut out = Self::zero();
        for (p, x) in &self.coeffs {
            out.add_term(p.clone(), x * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, x) in &other.coeffs {
            out.add_term(p.clone(), x.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, x) in &other.coeffs {
            out.add_term(p.clone(), -x);
        }
        out
    }

    /// Drops partitions with more than `max_boxes` boxes.
    pub fn truncate(&self, max_boxes: u32) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(p, _)| p.size() <= max_boxes)
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn map_coeffs(
        &self,
        f: impl Fn(&Partition, &ScalarQ) -> Result<ScalarQ, CoeffError>,
    ) -> Result<Self, CoeffError> {
        let mut out = Self::zero();
        for (p, c) in &self.coeffs {
            out.add_term(p.clone(), f(p, c)?);
        }
        Ok(out)
    }

    pub fn substitute(&self, bindings: &[(Var, LaurentPoly)]) -> Result<Self, CoeffError> {
        self.map_coeffs(|_, c| c.substitute(bindings))
    }

    /// First differing coefficient, in partition order.
    pub fn first_difference(&self, other: &Self) -> Option<(Partition, ScalarQ, ScalarQ)> {
        let keys: std::collections::BTreeSet<&Partition> =
            self.coeffs.keys().chain(other.coeffs.keys()).collect();
        for p in keys {
            let a = self.coeff(p);
            let b = other.coeff(p);
            if a != b {
                return Some((p.clone(), a, b));
            }
        }
        None
    }
}

impl fmt::Display for ModuleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(p, c)| format!("[{}] W{}", c, p))
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    partition: Partition,
    coeff: ScalarQ,
}

impl Serialize for ModuleVector {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let v: Vec<TermJson> = self
            .coeffs
            .iter()
            .map(|(p, c)| TermJson {
                partition: p.clone(),
                coeff: c.clone(),
            })
            .collect();
        v.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for ModuleVector {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let v = Vec::<TermJson>::deserialize(de)?;
        let mut out = ModuleVector::zero();
        for t in v {
            out.add_term(t.partition, t.coeff);
        }
        Ok(out)
    }
}

/// `sum_x q^{m c(x)}` over a list of contents.
fn content_sum(m: i64, contents: &[i64]) -> ScalarQ {
    ScalarQ::from_poly(LaurentPoly::from_terms(
        contents
            .iter()
            .map(|c| ([(2 * m * c) as i32, 0, 0, 0], int(1))),
    ))
}

fn a_pow(m: i64) -> ScalarQ {
    ScalarQ::var_pow(Var::A, m as i32)
}

/// Eigenvalue of `P_{(m,0)}` on `W_lambda`.
pub fn eigenvalue(m: i64, lambda: &Partition) -> Result<ScalarQ, CoeffError> {
    let first = (&a_pow(m) - &a_pow(-m)).div_brace(m as i32)?;
    let second = &(&a_pow(m) * &qbrace(m as i32)) * &content_sum(m, &lambda.contents());
    Ok(&first + &second)
}

fn act_basis(
    m: i64,
    n: i64,
    lambda: &Partition,
    out: &mut ModuleVector,
    c: &ScalarQ,
) -> Result<(), AnnulusError> {
    if n == 0 {
        out.add_term(lambda.clone(), c * &eigenvalue(m, lambda)?);
        return Ok(());
    }
    let pref = if m == 0 {
        None
    } else {
        Some((&a_pow(m) * &qbrace(m as i32)).div_brace((m * n) as i32)?)
    };
    for st in strip_additions(lambda, n as u32) {
        let sign = if st.height % 2 == 0 { 1 } else { -1 };
        let w = match &pref {
            None => ScalarQ::from_int(sign),
            Some(p) => (p * &content_sum(m, &st.contents)).scale(&int(sign)),
        };
        out.add_term(st.result, c * &w);
    }
    Ok(())
}

/// Applies `P_{(m,n)}` with `n >= 0`.
pub fn act_generator(m: i64, n: i64, v: &ModuleVector) -> Result<ModuleVector, AnnulusError> {
    if m == 0 && n == 0 {
        return Err(AnnulusError::ZeroGenerator);
    }
    if n < 0 {
        return Err(AnnulusError::NegativeDirection(n));
    }
    let mut out = ModuleVector::zero();
    for (lambda, c) in v.iter() {
        act_basis(m, n, lambda, &mut out, c)?;
    }
    Ok(out)
}

/// Like [`act_generator`] but discards results above `max_boxes` early.
pub fn act_generator_truncated(
    m: i64,
    n: i64,
    v: &ModuleVector,
    max_boxes: u32,
) -> Result<ModuleVector, AnnulusError> {
    let src: ModuleVector = v.truncate(max_boxes.saturating_sub(n.max(0) as u32));
    Ok(act_generator(m, n, &src)?.truncate(max_boxes))
}

/// Multiplies each `W_lambda` coefficient by `q^{p kappa/2}`.
pub fn apply_kappa(p: i64, v: &ModuleVector) -> ModuleVector {
    let mut out = ModuleVector::zero();
    for (lambda, c) in v.iter() {
        out.add_term(lambda.clone(), c.mul_s((p * lambda.kappa()) as i32));
    }
    out
}

/// `(a - a^{-1}) / {1}`.
pub fn unknot_value() -> ScalarQ {
    (&a_pow(1) - &a_pow(-1)).div_brace(1).expect("brace 1")
}

/// Applies `exp(+-sum_k (-1)^{k+1} t^k/(k{k}) P_{(km,kn)})` up to `max_boxes` boxes.
pub fn apply_baxter_module(
    x: (i64, i64),
    t: &ScalarQ,
    invert: bool,
    max_boxes: u32,
    v: &ModuleVector,
) -> Result<ModuleVector, AnnulusError> {
    let (m, n) = x;
    if n < 1 {
        return Err(AnnulusError::NonTruncating(n));
    }
    let mut terms: Vec<(i64, ScalarQ)> = Vec::new();
    let mut tk = ScalarQ::one();
    for k in 1..=(max_boxes as i64 / n) {
        tk = &tk * t;
        let sign = if (k % 2 == 1) != invert { 1 } else { -1 };
        let c = tk.div_brace(k as i32)?.scale(&crate::coeff::rat(sign, k));
        if !c.is_zero() {
            terms.push((k, c));
        }
    }
    let theta = |w: &ModuleVector| -> Result<ModuleVector, AnnulusError> {
        let mut acc = ModuleVector::zero();
        for (k, c) in &terms {
            let img = act_generator_truncated(k * m, k * n, w, max_boxes)?;
            acc = acc.add(&img.scale(c));
        }
        Ok(acc)
    };
    let mut total = v.truncate(max_boxes);
    let mut cur = total.clone();
    let mut j = 1i64;
    loop {
        cur = theta(&cur)?.scale(&ScalarQ::from_rat(crate::coeff::rat(1, j)));
        if cur.is_zero() {
            break;
        }
        total = total.add(&cur);
        j += 1;
    }
    Ok(total)
}
