//! Integer partitions, border strips, and a Jacobi–Trudi symmetric-function oracle.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Mutex;

use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

use crate::annulus::ModuleVector;
use std::ops::Neg;

use crate::coeff::{int, ScalarQ, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl TryFrom<Vec<u32>> for Partition {
    type Error = String;
    fn try_from(v: Vec<u32>) -> Result<Self, String> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.0
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Partition {
    /// Accepts a weakly decreasing sequence; trailing zeros are dropped.
    pub fn new(mut parts: Vec<u32>) -> Result<Self, String> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(format!("not a partition: {parts:?}"));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// Panics on invalid input; for literals in code and tests.
    pub fn from_slice(parts: &[u32]) -> Self {
        Partition::new(parts.to_vec()).expect("valid partition")
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let n = self.part(0);
        Partition(
            (1..=n)
                .map(|j| self.0.iter().filter(|&&p| p >= j).count() as u32)
                .collect(),
        )
    }

    /// Boxes as (row, column), zero-based.
    pub fn boxes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (0..p as usize).map(move |j| (i, j)))
    }

    /// `kappa = sum_i lambda_i (lambda_i - 2i + 1)` with one-based rows.
    pub fn kappa(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &p)| p as i64 * (p as i64 - 2 * (i as i64 + 1) + 1))
            .sum()
    }

    pub fn contents(&self) -> Vec<i64> {
        self.boxes().map(|(i, j)| j as i64 - i as i64).collect()
    }

    pub fn hooks(&self) -> Vec<u32> {
        let conj = self.conjugate();
        self.boxes()
            .map(|(i, j)| (self.part(i) - j as u32) + (conj.part(j) - i as u32) - 1)
            .collect()
    }
}

/// All partitions of `n`, in increasing lexicographic order.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    fn rec(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=n.min(max)).rev() {
            cur.push(p);
            rec(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// All partitions of size at most `n`, in the canonical order.
pub fn partitions_up_to(n: u32) -> Vec<Partition> {
    (0..=n).flat_map(partitions_of).collect()
}

/// Partitions of `n` with at most `len` parts.
pub fn partitions_with_len(n: u32, len: usize) -> Vec<Partition> {
    partitions_of(n)
        .into_iter()
        .filter(|p| p.len() <= len)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BorderStripAddition {
    pub result: Partition,
    /// Number of rows of the strip plus one.
    pub height: u32,
    /// Contents of the added boxes, increasing.
    pub contents: Vec<i64>,
}

/// All ways to add a border strip of `n` boxes to `lambda`.
pub fn strip_additions(lambda: &Partition, n: u32) -> Vec<BorderStripAddition> {
    assert!(n >= 1, "strip size must be positive");
    let l = lambda.len() + n as usize;
    let beta: Vec<i64> = (0..l)
        .map(|i| lambda.part(i) as i64 - (i as i64 + 1) + l as i64)
        .collect();
    let occupied: BTreeSet<i64> = beta.iter().copied().collect();
    let mut out = Vec::new();
    for &b in &beta {
        let target = b + n as i64;
        if occupied.contains(&target) {
            continue;
        }
        let between = occupied.range(b + 1..target).count() as u32;
        let mut nb: Vec<i64> = beta
            .iter()
            .map(|&x| if x == b { target } else { x })
            .collect();
        nb.sort_unstable_by(|x, y| y.cmp(x));
        let parts: Vec<u32> = nb
            .iter()
            .enumerate()
            .map(|(i, &x)| (x + (i as i64 + 1) - l as i64) as u32)
            .collect();
        out.push(BorderStripAddition {
            result: Partition::new(parts).expect("bead move yields a partition"),
            height: between + 2,
            contents: (b - l as i64 + 1..=target - l as i64).collect(),
        });
    }
    out.sort_by(|x, y| x.result.cmp(&y.result));
    out
}

/// Hook lengths, contents, and kappa.
pub fn hooks_contents_kappa(lambda: &Partition) -> (Vec<u32>, Vec<i64>, i64) {
    let mut h = lambda.hooks();
    h.sort_unstable_by(|a, b| b.cmp(a));
    let mut c = lambda.contents();
    c.sort_unstable();
    (h, c, lambda.kappa())
}

// ---------------------------------------------------------------------------
// Complete homogeneous oracle: polynomials in algebraically independent h_1, h_2, ...

/// A monomial `h_{mu_1} h_{mu_2} ...` keyed by the weakly decreasing index list.
type HMono = Vec<u32>;

#[derive(Clone, Debug, Default, PartialEq)]
struct HPoly(BTreeMap<HMono, Q>);

impl HPoly {
    fn h(k: i64) -> HPoly {
        let mut m = BTreeMap::new();
        match k.cmp(&0) {
            Ordering::Less => {}
            Ordering::Equal => {
                m.insert(vec![], Q::one());
            }
            Ordering::Greater => {
                m.insert(vec![k as u32], Q::one());
            }
        }
        HPoly(m)
    }

    fn add_scaled(&mut self, other: &HPoly, c: &Q) {
        for (k, v) in &other.0 {
            let e = self.0.entry(k.clone()).or_insert_with(Q::zero);
            *e += v * c;
            if e.is_zero() {
                self.0.remove(k);
            }
        }
    }

    fn mul(&self, other: &HPoly) -> HPoly {
        let mut out: BTreeMap<HMono, Q> = BTreeMap::new();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &other.0 {
                let mut m: Vec<u32> = m1.iter().chain(m2.iter()).copied().collect();
                m.sort_unstable_by(|a, b| b.cmp(a));
                let e = out.entry(m).or_insert_with(Q::zero);
                *e += c1 * c2;
            }
        }
        out.retain(|_, c| !c.is_zero());
        HPoly(out)
    }
}

static SCHUR_H: Lazy<Mutex<HashMap<Partition, HPoly>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// Jacobi–Trudi: `s_lambda = det(h_{lambda_i - i + j})`, by Laplace expansion along rows.
fn schur_in_h(lambda: &Partition) -> HPoly {
    if let Some(v) = SCHUR_H.lock().unwrap().get(lambda) {
        return v.clone();
    }
    let l = lambda.len();
    // memo over the set of columns still available, rows consumed in order
    let mut memo: HashMap<u32, HPoly> = HashMap::new();
    fn rec(
        row: usize,
        cols: u32,
        lambda: &Partition,
        l: usize,
        memo: &mut HashMap<u32, HPoly>,
    ) -> HPoly {
        if row == l {
            return HPoly::h(0);
        }
        if let Some(v) = memo.get(&cols) {
            return v.clone();
        }
        let mut acc = HPoly::default();
        let mut sign_pos = 0;
        for j in 0..l {
            if cols & (1 << j) == 0 {
                continue;
            }
            let idx = lambda.part(row) as i64 - row as i64 + j as i64;
            if idx >= 0 {
                let minor = rec(row + 1, cols & !(1 << j), lambda, l, memo);
                let term = HPoly::h(idx).mul(&minor);
                let sign = if sign_pos % 2 == 0 { int(1) } else { int(-1) };
                acc.add_scaled(&term, &sign);
            }
            sign_pos += 1;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    let out = rec(0, (1u32 << l) - 1, lambda, l, &mut memo);
    SCHUR_H.lock().unwrap().insert(lambda.clone(), out.clone());
    out
}

/// Newton: `p_n = n h_n - sum_{k<n} p_k h_{n-k}`.
fn power_in_h(n: u32) -> HPoly {
    let mut ps: Vec<HPoly> = vec![HPoly::default()];
    for m in 1..=n {
        let mut p = HPoly::default();
        p.add_scaled(&HPoly::h(m as i64), &int(m as i64));
        for k in 1..m {
            let t = ps[k as usize].mul(&HPoly::h((m - k) as i64));
            p.add_scaled(&t, &int(-1));
        }
        ps.push(p);
    }
    ps.pop().unwrap()
}

/// Expands an h-polynomial in Schur functions, peeling off the lexicographically
/// smallest h-monomial (Jacobi–Trudi is unitriangular for dominance).
fn h_to_schur(mut f: HPoly) -> BTreeMap<Partition, Q> {
    let mut out = BTreeMap::new();
    while let Some((mono, c)) =
        f.0.iter()
            .min_by(|a, b| {
                a.0.iter()
                    .sum::<u32>()
                    .cmp(&b.0.iter().sum::<u32>())
                    .then(a.0.cmp(b.0))
            })
            .map(|(m, c)| (m.clone(), c.clone()))
    {
        let lam = Partition(mono);
        let s = schur_in_h(&lam);
        f.add_scaled(&s, &-c.clone());
        out.insert(lam, c);
    }
    out
}

/// `p_n s_lambda` in the Schur basis, computed without border strips.
pub fn power_times_schur(n: u32, lambda: &Partition) -> ModuleVector {
    assert!(n >= 1);
    let f = power_in_h(n).mul(&schur_in_h(lambda));
    let mut v = ModuleVector::zero();
    for (mu, c) in h_to_schur(f) {
        v.add_term(mu, ScalarQ::from_rat(c));
    }
    v
}

/// Schur expansion of a product of power sums `p_{n_1} p_{n_2} ... s_lambda`.
pub fn powers_times_schur(ns: &[u32], lambda: &Partition) -> ModuleVector {
    let mut f = schur_in_h(lambda);
    for &n in ns {
        f = power_in_h(n).mul(&f);
    }
    let mut v = ModuleVector::zero();
    for (mu, c) in h_to_schur(f) {
        v.add_term(mu, ScalarQ::from_rat(c));
    }
    v
}

fn eval_h_poly(f: &HPoly, hval: impl Fn(u32) -> ScalarQ) -> ScalarQ {
    let mut cache: HashMap<u32, ScalarQ> = HashMap::new();
    let mut acc = ScalarQ::zero();
    for (mono, c) in &f.0 {
        let mut t = ScalarQ::from_rat(c.clone());
        for &k in mono {
            let hk = cache.entry(k).or_insert_with(|| hval(k)).clone();
            t = &t * &hk;
        }
        acc = &acc + &t;
    }
    acc
}

/// `h_k(q^rho) = s^{-k + k(k+1)/2} / prod_{j<=k} {j}`.
fn h_at_rho(k: u32) -> ScalarQ {
    let mut x = ScalarQ::s_pow(-(k as i32) + (k * (k + 1) / 2) as i32);
    for j in 1..=k as i32 {
        x = x.div_brace(j).expect("brace within bound");
    }
    x
}

/// `h_k(q^{-rho}) = s^k / prod_{j<=k} (1 - q^j)` with `1 - q^j = -s^j {j}`.
fn h_at_minus_rho(k: u32) -> ScalarQ {
    let mut x = ScalarQ::s_pow(k as i32);
    for j in 1..=k as i32 {
        x = x.div_brace(j).expect("brace within bound").mul_s(-j).neg();
    }
    x
}

/// `s_lambda(q^rho)` with `q^rho = (q^{-1/2}, q^{-3/2}, ...)`.
pub fn principal_specialization(lambda: &Partition) -> ScalarQ {
    eval_h_poly(&schur_in_h(lambda), h_at_rho)
}

/// `s_lambda(q^{-rho})`.
pub fn principal_specialization_inverse(lambda: &Partition) -> ScalarQ {
    eval_h_poly(&schur_in_h(lambda), h_at_minus_rho)
}

/// Checks `s_lambda(q^{-rho}) = (-1)^{|lambda|} q^{-kappa/2} s_lambda(q^rho)`.
pub fn zhou_sign_check(lambda: &Partition) -> bool {
    let left = principal_specialization_inverse(lambda);
    let mut right = principal_specialization(lambda).mul_s(-(lambda.kappa() as i32));
    if lambda.size() % 2 == 1 {
        right = right.neg();
    }
    left == right
}
