//! Determinant of a generically exact strand: the Macaulay resultant
//! `Res(L_0..L_n)`, by recursive minors (Cayley) or by evaluation and
//! interpolation.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::koszul::{koszul_strand, linear_forms, KoszulError, LinFormSet, MapSpec, Strand};
use crate::poly::{MPoly, Monomial, Rat, RingSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DetError {
    #[error(transparent)]
    Koszul(#[from] KoszulError),
    #[error("strand is not generically exact: {0}")]
    NotExact(String),
    #[error("interpolation grid kept hitting singular minors after {0} attempts")]
    SingularGrid(usize),
    #[error("interpolated polynomial disagrees with a direct evaluation; degree bounds {0:?} are wrong")]
    InconsistentInterpolation(Vec<u32>),
    #[error("backends disagree: cayley gave {cayley}, interpolation gave {interpolate}")]
    BackendDisagreement { cayley: String, interpolate: String },
    #[error("bounds have {got} entries, expected {expected}")]
    BoundsLength { expected: usize, got: usize },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Cayley,
    Interpolate,
    Both,
}

#[derive(Clone, Debug)]
pub struct DetOptions {
    pub seed: u64,
    pub max_retries: usize,
}

impl Default for DetOptions {
    fn default() -> Self {
        Self { seed: 0x6b72_6573, max_retries: 5 }
    }
}

/// A resultant normalized to primitive integer coefficients with positive
/// leading coefficient; `multidegree[i]` is its degree in pair `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultantPoly {
    pub poly: MPoly,
    pub multidegree: Vec<u32>,
}

impl ResultantPoly {
    pub fn new(poly: MPoly) -> Self {
        let poly = poly.normalized();
        let multidegree = (0..poly.ring().pair_count())
            .map(|i| if poly.is_zero() { 0 } else { poly.pair_degree(i).unwrap_or(0) })
            .collect();
        Self { poly, multidegree }
    }

    pub fn zero(ring: &Arc<RingSpec>) -> Self {
        Self { poly: MPoly::zero(ring), multidegree: vec![0; ring.pair_count()] }
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Multihomogeneous in every pair (and free of t) when nonzero.
    pub fn is_multihomogeneous(&self) -> bool {
        self.poly.is_zero()
            || (!self.poly.involves_t()
                && (0..self.poly.ring().pair_count()).all(|i| self.poly.pair_degree(i).is_some()))
    }
}

/// Rows and columns of the square block chosen at homological level `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelChoice {
    pub level: usize,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DetCertificate {
    pub method: Method,
    pub levels: Vec<LevelChoice>,
    /// Pilot point (full ring coordinates) used to choose the blocks.
    pub pilot: Vec<Rat>,
    /// Per-pair grid abscissae for `x_i` (interpolation only).
    pub grid: Vec<Vec<Rat>>,
    /// Extra point at which the interpolant was checked.
    pub check_point: Vec<Rat>,
    pub retries: usize,
}

fn random_pilot(ring: &RingSpec, rng: &mut ChaCha8Rng) -> Vec<Rat> {
    let mut p = vec![Rat::zero(); ring.nvars()];
    for i in 0..ring.pair_count() {
        p[ring.x_index(i)] = Rat::from_integer(BigInt::from(rng.gen_range(-1000i64..=1000)));
        p[ring.y_index(i)] = Rat::one();
    }
    p
}

/// Greedy rows (in basis order) of `a` restricted to `cols` with full column
/// rank; `None` when the rank is short.
fn independent_rows(a: &[Vec<Rat>], need: usize) -> Option<Vec<usize>> {
    if need == 0 {
        return Some(vec![]);
    }
    let mut echelon: Vec<(usize, Vec<Rat>)> = Vec::new();
    let mut chosen = Vec::new();
    for (r, row) in a.iter().enumerate() {
        let mut v = row.clone();
        for (pivot, e) in &echelon {
            if !v[*pivot].is_zero() {
                let f = &v[*pivot] / &e[*pivot];
                for (x, y) in v.iter_mut().zip(e) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        if let Some(pivot) = v.iter().position(|x| !x.is_zero()) {
            echelon.push((pivot, v));
            chosen.push(r);
            if chosen.len() == need {
                return Some(chosen);
            }
        }
    }
    None
}

/// Chooses nested square blocks at the pilot point, top level first.
fn select_blocks(s: &Strand, pilot: &[Rat]) -> Result<Vec<LevelChoice>, String> {
    let top = s.len() - 1;
    let mut taken: Vec<usize> = Vec::new();
    let mut levels = Vec::new();
    for k in (1..=top).rev() {
        let cols: Vec<usize> = (0..s.basis(k).len()).filter(|c| !taken.contains(c)).collect();
        let m = s.matrix(k);
        if k == 1 && cols.len() != m.rows() {
            return Err(format!(
                "level 1 has {} free columns for {} rows",
                cols.len(),
                m.rows()
            ));
        }
        let a: Vec<Vec<Rat>> = (0..m.rows())
            .map(|r| cols.iter().map(|&c| m.get(r, c).eval_all(pilot)).collect())
            .collect();
        let rows = independent_rows(&a, cols.len())
            .ok_or_else(|| format!("differential at level {k} has rank below {}", cols.len()))?;
        taken = rows.clone();
        levels.push(LevelChoice { level: k, rows, cols });
    }
    Ok(levels)
}

fn select_with_retries(s: &Strand, rng: &mut ChaCha8Rng) -> Result<(Vec<LevelChoice>, Vec<Rat>), DetError> {
    if s.euler_characteristic() != 0 {
        return Err(DetError::NotExact(format!("Euler characteristic {}", s.euler_characteristic())));
    }
    let mut last = String::new();
    for _ in 0..3 {
        let pilot = random_pilot(s.ring(), rng);
        match select_blocks(s, &pilot) {
            Ok(levels) => return Ok((levels, pilot)),
            Err(e) => last = e,
        }
    }
    Err(DetError::NotExact(last))
}

/// Fraction-free (Bareiss) determinant over `k[X]`.
pub fn poly_det(mut a: Vec<Vec<MPoly>>, ring: &Arc<RingSpec>) -> MPoly {
    let n = a.len();
    if n == 0 {
        return MPoly::one(ring);
    }
    let mut prev = MPoly::one(ring);
    let mut negate = false;
    for k in 0..n {
        let pivot = (k..n)
            .filter(|&r| !a[r][k].is_zero())
            .min_by_key(|&r| a[r][k].len());
        let Some(p) = pivot else {
            return MPoly::zero(ring);
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        if k + 1 == n {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = if prev.is_constant() {
                    num.scale(&prev.as_constant().unwrap().recip())
                } else {
                    num.div_exact(&prev).expect("Bareiss division is exact")
                };
            }
            a[i][k] = MPoly::zero(ring);
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Determinant over ℚ by Gaussian elimination.
pub fn rat_det(mut a: Vec<Vec<Rat>>) -> Rat {
    let n = a.len();
    let mut det = Rat::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return Rat::zero();
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        let pivot = a[k][k].clone();
        det *= &pivot;
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for j in k + 1..n {
                if !a[k][j].is_zero() {
                    let t = &f * &a[k][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    det
}

fn block(s: &Strand, c: &LevelChoice) -> Vec<Vec<MPoly>> {
    let m = s.matrix(c.level);
    c.rows.iter().map(|&r| c.cols.iter().map(|&col| m.get(r, col).clone()).collect()).collect()
}

fn block_at(s: &Strand, c: &LevelChoice, point: &[Rat]) -> Vec<Vec<Rat>> {
    let m = s.matrix(c.level);
    c.rows
        .iter()
        .map(|&r| c.cols.iter().map(|&col| m.get(r, col).eval_all(point)).collect())
        .collect()
}

/// Scalar determinant of the complex at `point`; `None` if a denominator
/// block is singular there.
fn complex_det_at(s: &Strand, levels: &[LevelChoice], point: &[Rat]) -> Option<Rat> {
    let mut num = Rat::one();
    let mut den = Rat::one();
    for c in levels {
        let d = rat_det(block_at(s, c, point));
        if c.level % 2 == 1 {
            num *= d;
        } else {
            if d.is_zero() {
                return None;
            }
            den *= d;
        }
    }
    Some(num / den)
}

/// Determinant of the strand by symbolic minors of nested blocks.
pub fn det_cayley(s: &Strand, opts: &DetOptions) -> Result<(ResultantPoly, DetCertificate), DetError> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (levels, pilot) = select_with_retries(s, &mut rng)?;
    let ring = s.ring();
    let mut num = MPoly::one(ring);
    let mut den = MPoly::one(ring);
    for c in &levels {
        let d = poly_det(block(s, c), ring);
        if c.level % 2 == 1 {
            num = &num * &d;
        } else {
            den = &den * &d;
        }
    }
    let det = num
        .div_exact(&den)
        .ok_or_else(|| DetError::NotExact("alternating product of minors is not a polynomial".into()))?;
    let cert = DetCertificate {
        method: Method::Cayley,
        levels,
        pilot,
        grid: vec![],
        check_point: vec![],
        retries: 0,
    };
    Ok((ResultantPoly::new(det), cert))
}

/// Values at the nodes → coefficients in the monomial basis.
fn interpolate_1d(xs: &[Rat], ys: &[Rat]) -> Vec<Rat> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    // Horner expansion of the Newton form
    let mut coeffs = vec![Rat::zero(); n];
    for i in (0..n).rev() {
        // coeffs = coeffs * (x - xs[i]) + dd[i]
        let mut next = vec![Rat::zero(); n];
        for k in 0..n {
            if coeffs[k].is_zero() {
                continue;
            }
            if k + 1 < n {
                next[k + 1] += &coeffs[k];
            }
            next[k] -= &coeffs[k] * &xs[i];
        }
        next[0] += &dd[i];
        coeffs = next;
    }
    coeffs
}

/// Applies `interpolate_1d` along every axis of a tensor stored row-major.
fn interpolate_tensor(values: Vec<Rat>, axes: &[Vec<Rat>]) -> Vec<Rat> {
    let shape: Vec<usize> = axes.iter().map(Vec::len).collect();
    let mut data = values;
    for (axis, xs) in axes.iter().enumerate() {
        let stride: usize = shape[axis + 1..].iter().product();
        let len = shape[axis];
        let outer: usize = shape[..axis].iter().product();
        for o in 0..outer {
            for inner in 0..stride {
                let base = o * len * stride + inner;
                let ys: Vec<Rat> = (0..len).map(|j| data[base + j * stride].clone()).collect();
                for (j, c) in interpolate_1d(xs, &ys).into_iter().enumerate() {
                    data[base + j * stride] = c;
                }
            }
        }
    }
    data
}

fn grid_point(ring: &RingSpec, axes: &[Vec<Rat>], mut idx: usize) -> Vec<Rat> {
    let mut p = vec![Rat::zero(); ring.nvars()];
    for i in (0..axes.len()).rev() {
        let len = axes[i].len();
        p[ring.x_index(i)] = axes[i][idx % len].clone();
        p[ring.y_index(i)] = Rat::one();
        idx /= len;
    }
    p
}

/// Determinant of the strand by evaluation on a tensor grid in the `x_i`
/// (with `y_i = 1`) and interpolation with `deg_{x_i} ≤ bounds[i]`, then
/// rehomogenized to degree `bounds[i]` in each pair.
pub fn det_interpolate(
    s: &Strand,
    bounds: &[u32],
    opts: &DetOptions,
) -> Result<(ResultantPoly, DetCertificate), DetError> {
    let ring = s.ring().clone();
    if bounds.len() != ring.pair_count() {
        return Err(DetError::BoundsLength { expected: ring.pair_count(), got: bounds.len() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (levels, pilot) = select_with_retries(s, &mut rng)?;

    let mut offsets = vec![0i64; bounds.len()];
    for attempt in 0..=opts.max_retries {
        let axes: Vec<Vec<Rat>> = bounds
            .iter()
            .zip(&offsets)
            .map(|(&e, &o)| (0..=e as i64).map(|j| Rat::from_integer(BigInt::from(o + j))).collect())
            .collect();
        let total: usize = axes.iter().map(Vec::len).product();
        let values: Vec<Option<Rat>> = (0..total)
            .into_par_iter()
            .map(|idx| complex_det_at(s, &levels, &grid_point(&ring, &axes, idx)))
            .collect();
        if values.iter().any(Option::is_none) {
            for o in offsets.iter_mut() {
                *o = rng.gen_range(1..=1000);
            }
            continue;
        }
        let coeffs = interpolate_tensor(values.into_iter().map(Option::unwrap).collect(), &axes);

        let mut poly = MPoly::zero(&ring);
        let shape: Vec<usize> = axes.iter().map(Vec::len).collect();
        for (idx, c) in coeffs.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut exps = vec![0u32; ring.nvars()];
            let mut rest = idx;
            for i in (0..shape.len()).rev() {
                let a = (rest % shape[i]) as u32;
                rest /= shape[i];
                exps[ring.x_index(i)] = a;
                exps[ring.y_index(i)] = bounds[i] - a;
            }
            poly.add_term(Monomial::from_exps(exps), c);
        }

        // independent check away from the grid
        let mut check = None;
        for _ in 0..5 {
            let p = random_pilot(&ring, &mut rng);
            if let Some(v) = complex_det_at(s, &levels, &p) {
                check = Some((p, v));
                break;
            }
        }
        let Some((check_point, value)) = check else {
            return Err(DetError::SingularGrid(attempt + 1));
        };
        if poly.eval_all(&check_point) != value {
            return Err(DetError::InconsistentInterpolation(bounds.to_vec()));
        }
        let cert = DetCertificate {
            method: Method::Interpolate,
            levels,
            pilot,
            grid: axes,
            check_point,
            retries: attempt,
        };
        return Ok((ResultantPoly::new(poly), cert));
    }
    Err(DetError::SingularGrid(opts.max_retries + 1))
}

/// Result of [`macaulay_resultant`]: `res` is zero with a diagnostic when the
/// strand is not generically exact.
#[derive(Clone, Debug)]
pub struct ResultantOutcome {
    pub res: ResultantPoly,
    pub nu: u32,
    pub certificates: Vec<DetCertificate>,
    pub diagnostic: Option<String>,
}

/// Resultant of generic forms through the Koszul strand at `nu` (default
/// `η + 1`), computed by the Cayley backend.
pub fn forms_resultant(forms: &LinFormSet, nu: Option<u32>, opts: &DetOptions) -> Result<ResultantOutcome, DetError> {
    let nu = nu.unwrap_or(forms.eta() + 1);
    let strand = koszul_strand(forms, nu)?;
    match det_cayley(&strand, opts) {
        Ok((res, cert)) => Ok(ResultantOutcome { res, nu, certificates: vec![cert], diagnostic: None }),
        Err(DetError::NotExact(why)) => Ok(ResultantOutcome {
            res: ResultantPoly::zero(forms.ring()),
            nu,
            certificates: vec![],
            diagnostic: Some(format!("strand is not generically exact ({why}); the resultant vanishes")),
        }),
        Err(e) => Err(e),
    }
}

/// `Res(L_0..L_n)` for the map's bilinear forms.
pub fn macaulay_resultant(
    spec: &MapSpec,
    nu: Option<u32>,
    method: Method,
    opts: &DetOptions,
) -> Result<ResultantOutcome, DetError> {
    let forms = linear_forms(spec);
    let nu = nu.unwrap_or(spec.eta() + 1);
    let strand = koszul_strand(&forms, nu)?;
    let bounds = spec.resultant_multidegree();
    let run = |m: Method| match m {
        Method::Interpolate => det_interpolate(&strand, &bounds, opts),
        _ => det_cayley(&strand, opts),
    };
    let result = match method {
        Method::Both => run(Method::Cayley).and_then(|(a, ca)| {
            let (b, cb) = run(Method::Interpolate)?;
            if !a.poly.eq_up_to_unit(&b.poly) {
                return Err(DetError::BackendDisagreement {
                    cayley: a.poly.to_string(),
                    interpolate: b.poly.to_string(),
                });
            }
            Ok((a, vec![ca, cb]))
        }),
        m => run(m).map(|(r, c)| (r, vec![c])),
    };
    match result {
        Ok((res, certificates)) => Ok(ResultantOutcome { res, nu, certificates, diagnostic: None }),
        Err(DetError::NotExact(why)) => Ok(ResultantOutcome {
            res: ResultantPoly::zero(spec.ring()),
            nu,
            certificates: vec![],
            diagnostic: Some(format!("strand is not generically exact ({why}); the resultant vanishes")),
        }),
        Err(e) => Err(e),
    }
}
