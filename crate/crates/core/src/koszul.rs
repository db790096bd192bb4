//! The map φ as pairs `(f_i, g_i)`, its bilinear forms `L_i = g_i·x_i − f_i·y_i`,
//! and degree-ν strands of the Koszul complex `K.(P_0..P_n; A[X])`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{multivariate_gcd, parse_poly, MPoly, Monomial, PolyError, Rat, RingSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KoszulError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("expected {expected} pairs, got {got}")]
    PairCount { expected: usize, got: usize },
    #[error("pair {pair}: `{poly}` must be a polynomial in the t-variables")]
    NotInT { pair: usize, poly: String },
    #[error("pair {pair}: `{poly}` is not homogeneous")]
    NotHomogeneous { pair: usize, poly: String },
    #[error("pair {pair}: f and g have different degrees ({df} vs {dg})")]
    DegreeMismatch { pair: usize, df: u32, dg: u32 },
    #[error("pair {pair}: f and g are both zero")]
    BothZero { pair: usize },
    #[error("pair {pair}: f and g share the common factor {factor}")]
    CommonFactor { pair: usize, factor: String },
    #[error("form {index} is not homogeneous in the t-variables")]
    FormNotHomogeneous { index: usize },
    #[error("strand degree {nu} must exceed eta = {eta}")]
    DegreeTooLow { nu: u32, eta: u32 },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Strict,
    Permissive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Pair {
    pub f: MPoly,
    pub g: MPoly,
    pub degree: u32,
}

/// The map `P^n ⇢ (P^1)^{n+1}` given by `n+1` pairs of forms of equal degree.
#[derive(Clone, Debug)]
pub struct MapSpec {
    ring: Arc<RingSpec>,
    pairs: Vec<Pair>,
    mode: Mode,
    warnings: Vec<String>,
}

impl MapSpec {
    /// Validates the pairs. A shared factor in some pair is an error in strict
    /// mode and a recorded warning in permissive mode.
    pub fn new(ring: &Arc<RingSpec>, pairs: Vec<(MPoly, MPoly)>, mode: Mode) -> Result<Self, KoszulError> {
        if pairs.len() != ring.pair_count() {
            return Err(KoszulError::PairCount { expected: ring.pair_count(), got: pairs.len() });
        }
        let mut out = Vec::with_capacity(pairs.len());
        let mut warnings = Vec::new();
        for (i, (f, g)) in pairs.into_iter().enumerate() {
            if !f.same_ring(&g) || !f.ring().as_ref().eq(ring) {
                return Err(PolyError::RingMismatch.into());
            }
            for p in [&f, &g] {
                if p.involves_pairs() {
                    return Err(KoszulError::NotInT { pair: i, poly: p.to_string() });
                }
            }
            let deg_of = |p: &MPoly| -> Result<Option<u32>, KoszulError> {
                if p.is_zero() {
                    return Ok(None);
                }
                p.t_degree()
                    .map(Some)
                    .ok_or_else(|| KoszulError::NotHomogeneous { pair: i, poly: p.to_string() })
            };
            let degree = match (deg_of(&f)?, deg_of(&g)?) {
                (None, None) => return Err(KoszulError::BothZero { pair: i }),
                (Some(a), Some(b)) if a != b => {
                    return Err(KoszulError::DegreeMismatch { pair: i, df: a, dg: b })
                }
                (Some(a), _) | (None, Some(a)) => a,
            };
            let common = multivariate_gcd(&f, &g)?;
            if !common.is_constant() {
                match mode {
                    Mode::Strict => {
                        return Err(KoszulError::CommonFactor { pair: i, factor: common.to_string() })
                    }
                    Mode::Permissive => {
                        warnings.push(format!("pair {i}: f and g share the common factor {common}"))
                    }
                }
            }
            out.push(Pair { f, g, degree });
        }
        Ok(Self { ring: ring.clone(), pairs: out, mode, warnings })
    }

    /// Parses `(f, g)` strings over the ring.
    pub fn parse(ring: &Arc<RingSpec>, pairs: &[(&str, &str)], mode: Mode) -> Result<Self, KoszulError> {
        let parsed = pairs
            .iter()
            .map(|(f, g)| Ok((parse_poly(f, ring)?, parse_poly(g, ring)?)))
            .collect::<Result<Vec<_>, PolyError>>()?;
        Self::new(ring, parsed, mode)
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn n(&self) -> usize {
        self.ring.n()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.pairs.iter().map(|p| p.degree).collect()
    }

    pub fn eta(&self) -> u32 {
        eta(&self.degrees())
    }

    /// `e_i = ∏_{j≠i} d_j`, the expected multidegree of the resultant.
    pub fn resultant_multidegree(&self) -> Vec<u32> {
        resultant_multidegree(&self.degrees())
    }

    /// Generators `f_i, g_i` of the ideal `I^(i)` (zero members dropped).
    pub fn pair_ideal(&self, i: usize) -> Vec<MPoly> {
        let p = &self.pairs[i];
        [&p.f, &p.g].into_iter().filter(|q| !q.is_zero()).cloned().collect()
    }

    /// Evaluates pair `i` at a rational point of the t-variables.
    pub fn pair_at(&self, i: usize, t: &[Rat]) -> (Rat, Rat) {
        let p = &self.pairs[i];
        (eval_t(&p.f, t), eval_t(&p.g, t))
    }

    /// Pairs `i` with `f_i(t) = g_i(t) = 0`.
    pub fn vanishing_pairs(&self, t: &[Rat]) -> Vec<usize> {
        (0..self.pairs.len())
            .filter(|&i| {
                let (a, b) = self.pair_at(i, t);
                num_traits::Zero::is_zero(&a) && num_traits::Zero::is_zero(&b)
            })
            .collect()
    }
}

pub(crate) fn eval_t(p: &MPoly, t: &[Rat]) -> Rat {
    let mut point: Vec<Rat> = t.to_vec();
    point.resize(p.ring().nvars(), Rat::from_integer(0.into()));
    p.eval_all(&point)
}

/// `η = Σ (d_i − 1)` (may be negative for constant pairs, clamped to 0 only
/// when used as a strand degree).
pub fn eta(degrees: &[u32]) -> u32 {
    let s: i64 = degrees.iter().map(|&d| d as i64 - 1).sum();
    s.max(0) as u32
}

pub fn resultant_multidegree(degrees: &[u32]) -> Vec<u32> {
    (0..degrees.len())
        .map(|i| degrees.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, d)| d).product())
        .collect()
}

/// Forms `P_0..P_n`, each homogeneous in the t-variables of degree `d_i` with
/// coefficients in the pair variables.
#[derive(Clone, Debug)]
pub struct LinFormSet {
    ring: Arc<RingSpec>,
    forms: Vec<MPoly>,
    degrees: Vec<u32>,
}

impl LinFormSet {
    /// Arbitrary forms (the generalized path); degrees are read off the forms.
    pub fn from_forms(forms: Vec<MPoly>) -> Result<Self, KoszulError> {
        let ring = forms.first().map(|f| f.ring().clone()).ok_or(PolyError::ZeroInput)?;
        let mut degrees = Vec::with_capacity(forms.len());
        for (i, f) in forms.iter().enumerate() {
            let t_vars: Vec<usize> = (0..ring.t_count()).collect();
            match f.block_degree(&t_vars) {
                Some(d) if !f.is_zero() => degrees.push(d),
                _ => return Err(KoszulError::FormNotHomogeneous { index: i }),
            }
        }
        Ok(Self { ring, forms, degrees })
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn forms(&self) -> &[MPoly] {
        &self.forms
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn eta(&self) -> u32 {
        eta(&self.degrees)
    }
}

/// `L_i = g_i·x_i − f_i·y_i`.
pub fn linear_forms(spec: &MapSpec) -> LinFormSet {
    let ring = spec.ring();
    let forms = spec
        .pairs()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            &p.g * &MPoly::var(ring, ring.x_index(i)) - &p.f * &MPoly::var(ring, ring.y_index(i))
        })
        .collect();
    LinFormSet { ring: ring.clone(), forms, degrees: spec.degrees() }
}

/// Dense matrix over `k[X]`, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    data: Vec<MPoly>,
}

impl PolyMatrix {
    pub fn zeros(ring: &Arc<RingSpec>, rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![MPoly::zero(ring); rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &MPoly {
        &self.data[r * self.cols + c]
    }

    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut MPoly {
        &mut self.data[r * self.cols + c]
    }

    /// Evaluates every entry at a full rational point of the ring.
    pub fn eval(&self, point: &[Rat]) -> Vec<Vec<Rat>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).eval_all(point)).collect())
            .collect()
    }

    /// First nonzero entry of `self · other`, if any.
    fn first_nonzero_product(&self, other: &PolyMatrix) -> Option<(usize, usize)> {
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc: Option<MPoly> = None;
                for k in 0..self.cols {
                    let a = self.get(r, k);
                    let b = other.get(k, c);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    let prod = a * b;
                    acc = Some(match acc {
                        None => prod,
                        Some(s) => s + prod,
                    });
                }
                if acc.is_some_and(|s| !s.is_zero()) {
                    return Some((r, c));
                }
            }
        }
        None
    }
}

/// Basis element `e_S ⊗ m` of a strand term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisElem {
    pub subset: Vec<usize>,
    /// Exponents of the t-variables.
    pub mono: Vec<u32>,
}

impl fmt::Display for BasisElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{:?}*t{:?}", self.subset, self.mono)
    }
}

/// Degree-ν strand: bases of `K_0..K_{n+1}` and differentials
/// `matrix(k): K_k → K_{k−1}` of size `|K_{k−1}| × |K_k|`.
#[derive(Clone, Debug)]
pub struct Strand {
    ring: Arc<RingSpec>,
    nu: u32,
    degrees: Vec<u32>,
    bases: Vec<Vec<BasisElem>>,
    matrices: Vec<PolyMatrix>,
}

impl Strand {
    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// Number of terms `K_0..K_{n+1}`.
    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn basis(&self, k: usize) -> &[BasisElem] {
        &self.bases[k]
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.bases
            .iter()
            .enumerate()
            .map(|(k, b)| if k % 2 == 0 { b.len() as i64 } else { -(b.len() as i64) })
            .sum()
    }

    /// Differential `K_k → K_{k−1}` for `1 ≤ k ≤ n+1`.
    pub fn matrix(&self, k: usize) -> &PolyMatrix {
        &self.matrices[k - 1]
    }

    #[cfg(test)]
    pub(crate) fn matrix_mut(&mut self, k: usize) -> &mut PolyMatrix {
        &mut self.matrices[k - 1]
    }
}

/// Monomials of degree `d` in `nvars` variables, ascending graded-lex.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(nvars: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == nvars {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in 0..=d {
            prefix.push(e);
            rec(nvars, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push(vec![]);
        }
        return out;
    }
    rec(nvars, d, &mut Vec::new(), &mut out);
    out
}

/// `k`-subsets of `0..n`, lexicographic.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Splits a form into its t-monomials with coefficients in the pair variables.
fn split_t(form: &MPoly) -> Vec<(Vec<u32>, MPoly)> {
    let ring = form.ring();
    let t = ring.t_count();
    let mut parts: HashMap<Vec<u32>, MPoly> = HashMap::new();
    for (m, c) in form.terms() {
        let tm = m.exps()[..t].to_vec();
        let mut rest = m.exps().to_vec();
        rest[..t].iter_mut().for_each(|e| *e = 0);
        parts
            .entry(tm)
            .or_insert_with(|| MPoly::zero(ring))
            .add_term(Monomial::from_exps(rest), c.clone());
    }
    let mut v: Vec<_> = parts.into_iter().collect();
    v.sort_by(|a, b| a.0.cmp(&b.0));
    v
}

/// Strand at degree ν; requires `ν > η`.
pub fn koszul_strand(forms: &LinFormSet, nu: u32) -> Result<Strand, KoszulError> {
    let eta = forms.eta();
    let minimal = forms.degrees().iter().any(|&d| d > 0);
    if minimal && nu <= eta {
        return Err(KoszulError::DegreeTooLow { nu, eta });
    }
    Ok(koszul_strand_unchecked(forms, nu))
}

/// Strand at any degree, for experiments below the acyclicity threshold.
pub fn koszul_strand_unchecked(forms: &LinFormSet, nu: u32) -> Strand {
    let ring = forms.ring().clone();
    let count = forms.forms().len();
    let t = ring.t_count();
    let degrees = forms.degrees().to_vec();

    let mut bases: Vec<Vec<BasisElem>> = Vec::with_capacity(count + 1);
    for k in 0..=count {
        let mut level = Vec::new();
        for s in subsets(count, k) {
            let used: u32 = s.iter().map(|&i| degrees[i]).sum();
            if used > nu {
                continue;
            }
            for mono in monomials_of_degree(t, nu - used) {
                level.push(BasisElem { subset: s.clone(), mono });
            }
        }
        bases.push(level);
    }

    let split: Vec<Vec<(Vec<u32>, MPoly)>> = forms.forms().iter().map(split_t).collect();
    let mut matrices = Vec::with_capacity(count);
    for k in 1..=count {
        let index: HashMap<&BasisElem, usize> = bases[k - 1].iter().enumerate().map(|(i, b)| (b, i)).collect();
        let mut m = PolyMatrix::zeros(&ring, bases[k - 1].len(), bases[k].len());
        for (col, src) in bases[k].iter().enumerate() {
            for (pos, &i) in src.subset.iter().enumerate() {
                let mut target = src.subset.clone();
                target.remove(pos);
                for (tm, coef) in &split[i] {
                    let mono: Vec<u32> = src.mono.iter().zip(tm).map(|(a, b)| a + b).collect();
                    let key = BasisElem { subset: target.clone(), mono };
                    let row = index[&key];
                    let entry = m.get_mut(row, col);
                    *entry = if pos % 2 == 0 { &*entry + coef } else { &*entry - coef };
                }
            }
        }
        matrices.push(m);
    }
    Strand { ring, nu, degrees, bases, matrices }
}

/// Outcome of [`strand_sanity`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SanityReport {
    pub euler: i64,
    /// First nonzero entry `(k, row, col)` of `matrix(k) · matrix(k+1)`.
    pub offending: Option<(usize, usize, usize)>,
}

impl SanityReport {
    pub fn passed(&self) -> bool {
        self.euler == 0 && self.offending.is_none()
    }
}

/// Checks `∂∘∂ = 0` exactly and that the Euler characteristic vanishes.
pub fn strand_sanity(s: &Strand) -> SanityReport {
    let mut offending = None;
    for k in 1..s.matrices.len() {
        if let Some((r, c)) = s.matrix(k).first_nonzero_product(s.matrix(k + 1)) {
            offending = Some((k, r, c));
            break;
        }
    }
    SanityReport { euler: s.euler_characteristic(), offending }
}
