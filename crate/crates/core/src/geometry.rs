//! Acyclicity and codimension conditions, base locus analysis, and extraction
//! of the implicit equation `H` and `deg(φ)` from the resultant.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::detcx::{forms_resultant, macaulay_resultant, DetError, DetOptions, Method, ResultantPoly};
use crate::groebner::{
    buchberger, ideal_power, projective_codimension, rational_zero_locus, GroebnerError, ProjPoint, TermOrder,
};
use crate::koszul::{linear_forms, subsets, KoszulError, LinFormSet, MapSpec, Mode};
use crate::poly::{multivariate_gcd, squarefree_decompose, trial_divide, MPoly, PolyError, Rat, RingSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Koszul(#[from] KoszulError),
    #[error(transparent)]
    Det(#[from] DetError),
    #[error("minor-ideal view and intersection view disagree for |alpha| = {size}")]
    ViewMismatch { size: usize },
    #[error("pair {0} vanishes at the point")]
    PairVanishes(usize),
    #[error("not a base component: {0}")]
    NotBaseComponent(String),
    #[error("restricted map is not generically finite onto its image")]
    NotGenericallyFinite,
    #[error("subspace has {got} coordinates, expected {expected}")]
    SubspaceShape { expected: usize, got: usize },
    #[error("expected {expected} generators for alpha, got {got}")]
    AlphaGenerators { expected: usize, got: usize },
    #[error("L_{j} still lies in the {bound}-th power of the ideal; giving up")]
    MuBoundExceeded { j: usize, bound: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AvramovRow {
    pub r: usize,
    pub codim: usize,
    pub needed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubsetCodim {
    pub alpha: Vec<usize>,
    pub codim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeometricCondition {
    pub size: usize,
    pub ok: bool,
    /// Subsets `α` of this size with `codim(I^α) < |α|`.
    pub witnesses: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionReport {
    pub avramov_ok: bool,
    pub avramov: Vec<AvramovRow>,
    pub geometric_ok: bool,
    pub geometric: Vec<GeometricCondition>,
    pub subset_codims: Vec<SubsetCodim>,
    pub strict_ok: bool,
    /// Proper subsets with `codim(I^α) ≤ |α|`.
    pub strict_witnesses: Vec<Vec<usize>>,
    /// `codim(I^α) ≥ |α|` for all α, required whenever the map is acyclic.
    pub weak_codim_ok: bool,
    /// Rational points of `X` when it is nonempty and zero-dimensional.
    #[serde(serialize_with = "ser_points")]
    pub x_points: Vec<ProjPoint>,
    pub diagnostics: Vec<String>,
}

impl ConditionReport {
    pub fn acyclic(&self) -> bool {
        self.avramov_ok && self.geometric_ok
    }
}

fn ser_points<S: serde::Serializer>(pts: &[ProjPoint], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(pts.iter().map(|p| p.to_string()))
}

fn nonempty_subsets(count: usize) -> Vec<Vec<usize>> {
    (1..=count).flat_map(|k| subsets(count, k)).collect()
}

/// Generators of `I^α = Σ_{i∈α} I^(i)`.
pub fn alpha_ideal(spec: &MapSpec, alpha: &[usize]) -> Vec<MPoly> {
    alpha.iter().flat_map(|&i| spec.pair_ideal(i)).collect()
}

/// Generators of `Σ_{|S|=r} Π_{i∈S} I^(i)`.
pub fn minor_ideal(spec: &MapSpec, r: usize) -> Vec<MPoly> {
    let count = spec.pairs().len();
    let ring = spec.ring();
    let mut gens = Vec::new();
    for s in subsets(count, r) {
        let mut prods = vec![MPoly::one(ring)];
        for &i in &s {
            let ideal = spec.pair_ideal(i);
            prods = prods.iter().flat_map(|p| ideal.iter().map(move |g| p * g)).collect();
        }
        gens.extend(prods);
    }
    gens
}

fn subset_codims(spec: &MapSpec) -> Result<Vec<SubsetCodim>, GeometryError> {
    nonempty_subsets(spec.pairs().len())
        .into_iter()
        .map(|alpha| {
            let codim = projective_codimension(&alpha_ideal(spec, &alpha))?;
            Ok(SubsetCodim { alpha, codim })
        })
        .collect()
}

fn fmt_subset(alpha: &[usize]) -> String {
    let parts: Vec<String> = alpha.iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Evaluates both equivalent forms of the acyclicity condition and the strict
/// codimension hypothesis.
pub fn check_acyclicity(spec: &MapSpec) -> Result<ConditionReport, GeometryError> {
    let count = spec.pairs().len();
    let n = spec.n();
    let mut avramov = Vec::new();
    for r in 1..=count {
        let codim = projective_codimension(&minor_ideal(spec, r))?;
        avramov.push(AvramovRow { r, codim, needed: n + 2 - r });
    }
    let avramov_ok = avramov.iter().all(|row| row.codim >= row.needed);

    let codims = subset_codims(spec)?;
    let mut geometric = Vec::new();
    for size in 1..=count {
        let witnesses: Vec<Vec<usize>> = codims
            .iter()
            .filter(|c| c.alpha.len() == size && c.codim < size)
            .map(|c| c.alpha.clone())
            .collect();
        geometric.push(GeometricCondition { size, ok: witnesses.is_empty(), witnesses });
    }
    let geometric_ok = geometric.iter().all(|g| g.ok);
    for row in &avramov {
        let size = n + 2 - row.r;
        let geo = geometric.iter().find(|g| g.size == size).map(|g| g.ok).unwrap_or(true);
        if (row.codim >= row.needed) != geo {
            return Err(GeometryError::ViewMismatch { size });
        }
    }

    let strict = check_strict_codim_from(&codims, count);
    let weak_codim_ok = !avramov_ok || codims.iter().all(|c| c.codim >= c.alpha.len());

    let mut diagnostics = Vec::new();
    let mut x_points = Vec::new();
    let full = codims.iter().find(|c| c.alpha.len() == count).unwrap();
    if full.codim <= n {
        if full.codim == n {
            let locus = rational_zero_locus(&alpha_ideal(spec, &full.alpha))?;
            let shown: Vec<String> = locus.points.iter().map(|p| p.to_string()).collect();
            let mut msg = format!("X nonempty: {}", shown.join(", "));
            if locus.unresolved > 0 {
                msg.push_str(&format!(" (+{} irrational points)", locus.unresolved));
            }
            diagnostics.push(msg);
            x_points = locus.points;
        } else {
            diagnostics.push(format!("X nonempty: dimension {}", n - full.codim));
        }
    }
    for g in &geometric {
        for w in &g.witnesses {
            if w.len() < count {
                let c = codims.iter().find(|c| &c.alpha == w).unwrap();
                diagnostics.push(format!(
                    "codim of I^{} is {} < {}",
                    fmt_subset(w),
                    c.codim,
                    w.len()
                ));
            }
        }
    }
    for w in spec.warnings() {
        diagnostics.push(w.clone());
    }
    Ok(ConditionReport {
        avramov_ok,
        avramov,
        geometric_ok,
        geometric,
        subset_codims: codims,
        strict_ok: strict.0,
        strict_witnesses: strict.1,
        weak_codim_ok,
        x_points,
        diagnostics,
    })
}

fn check_strict_codim_from(codims: &[SubsetCodim], count: usize) -> (bool, Vec<Vec<usize>>) {
    // the full set has codimension at most n+1 = |α| and is excluded
    let witnesses: Vec<Vec<usize>> = codims
        .iter()
        .filter(|c| c.alpha.len() < count && c.codim <= c.alpha.len())
        .map(|c| c.alpha.clone())
        .collect();
    (witnesses.is_empty(), witnesses)
}

/// `codim(I^α) > |α|` for every nonempty proper subset `α`; returns the
/// verdict and the failing subsets.
pub fn check_strict_codim(spec: &MapSpec) -> Result<(bool, Vec<Vec<usize>>), GeometryError> {
    let codims = subset_codims(spec)?;
    Ok(check_strict_codim_from(&codims, spec.pairs().len()))
}

/// Linear subspace of `P^n` given by `t_j = Σ_k images[j][k]·s_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subspace {
    #[serde(skip)]
    images: Vec<Vec<Rat>>,
    /// Coordinates set to zero, for coordinate subspaces.
    pub zero_coords: Option<Vec<usize>>,
}

impl Subspace {
    pub fn from_matrix(images: Vec<Vec<Rat>>) -> Self {
        Self { images, zero_coords: None }
    }

    /// `V(t_j : j ∈ zero)`, parametrized by the remaining coordinates.
    pub fn coordinate(t_count: usize, zero: &[usize]) -> Self {
        let free: Vec<usize> = (0..t_count).filter(|j| !zero.contains(j)).collect();
        let images = (0..t_count)
            .map(|j| free.iter().map(|&f| if f == j { Rat::one() } else { Rat::zero() }).collect())
            .collect();
        Self { images, zero_coords: Some(zero.to_vec()) }
    }

    pub fn point(p: &ProjPoint) -> Self {
        Self { images: p.coords().iter().map(|c| vec![c.clone()]).collect(), zero_coords: None }
    }

    /// Projective dimension.
    pub fn dim(&self) -> usize {
        self.images.first().map(|r| r.len()).unwrap_or(1) - 1
    }

    pub fn describe(&self, ring: &RingSpec) -> String {
        match &self.zero_coords {
            Some(z) => {
                let names: Vec<&str> = z.iter().map(|&j| ring.var_name(j)).collect();
                format!("V({})", names.join(","))
            }
            None => format!("linear subspace of dimension {}", self.dim()),
        }
    }

    fn restrict(&self, p: &MPoly, target: &Arc<RingSpec>) -> MPoly {
        let params = self.dim() + 1;
        let lin: Vec<MPoly> = self
            .images
            .iter()
            .map(|row| {
                let mut f = MPoly::zero(target);
                for (k, c) in row.iter().enumerate().take(params) {
                    f = f + MPoly::var(target, k).scale(c);
                }
                f
            })
            .collect();
        let mut out = MPoly::zero(target);
        for (m, c) in p.terms() {
            let mut term = MPoly::constant(target, c.clone());
            for (j, l) in lin.iter().enumerate() {
                let e = m.exp(j);
                if e > 0 {
                    term = &term * &l.pow(e);
                }
            }
            out = out + term;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BaseComponent {
    pub alpha: Vec<usize>,
    #[serde(serialize_with = "ser_points")]
    pub points: Vec<ProjPoint>,
    pub dimension: usize,
    pub subspace: Option<Subspace>,
    /// Non-rational points detected but not returned.
    pub unresolved: usize,
}

/// Base locus components, one per subset `α` whose ideal is projectively
/// zero-dimensional (rational points only, restricted to points where exactly
/// the pairs in `α` vanish), plus positive-dimensional loci by dimension, with
/// coordinate subspaces detected where possible.
pub fn base_points(spec: &MapSpec) -> Result<Vec<BaseComponent>, GeometryError> {
    let n = spec.n();
    let t = spec.ring().t_count();
    let mut out = Vec::new();
    for SubsetCodim { alpha, codim } in subset_codims(spec)? {
        if codim > n {
            continue;
        }
        if codim == n {
            let locus = rational_zero_locus(&alpha_ideal(spec, &alpha))?;
            let points: Vec<ProjPoint> = locus
                .points
                .into_iter()
                .filter(|p| spec.vanishing_pairs(p.coords()) == alpha)
                .collect();
            if !points.is_empty() || locus.unresolved > 0 {
                out.push(BaseComponent { alpha, points, dimension: 0, subspace: None, unresolved: locus.unresolved });
            }
            continue;
        }
        let dimension = n - codim;
        let mut found = false;
        for zero in subsets(t, codim) {
            let sub = Subspace::coordinate(t, &zero);
            if subspace_alpha(spec, &sub)? == alpha {
                found = true;
                out.push(BaseComponent {
                    alpha: alpha.clone(),
                    points: vec![],
                    dimension,
                    subspace: Some(sub),
                    unresolved: 0,
                });
            }
        }
        if !found {
            out.push(BaseComponent { alpha, points: vec![], dimension, subspace: None, unresolved: 0 });
        }
    }
    Ok(out)
}

/// Pairs vanishing identically on the subspace.
fn subspace_alpha(spec: &MapSpec, sub: &Subspace) -> Result<Vec<usize>, GeometryError> {
    let ring = sub_ring(sub.dim() + 1, &[])?;
    Ok((0..spec.pairs().len())
        .filter(|&i| {
            let p = &spec.pairs()[i];
            sub.restrict(&p.f, &ring).is_zero() && sub.restrict(&p.g, &ring).is_zero()
        })
        .collect())
}

fn sub_ring(params: usize, pairs: &[(String, String)]) -> Result<Arc<RingSpec>, PolyError> {
    let t: Vec<String> = (0..params).map(|k| format!("s{k}")).collect();
    let mut pairs = pairs.to_vec();
    // a bare ring for restriction needs matching pair count
    while pairs.len() < params {
        let k = pairs.len();
        pairs.push((format!("p{k}"), format!("q{k}")));
    }
    RingSpec::new(t, pairs)
}

/// `|{i : f_i(p) = g_i(p) = 0}|`.
pub fn fibre_dimension(p: &ProjPoint, spec: &MapSpec) -> usize {
    spec.vanishing_pairs(p.coords()).len()
}

/// `g_i(p)·x_i − f_i(p)·y_i`, normalized.
pub fn point_factor(p: &ProjPoint, i: usize, spec: &MapSpec) -> Result<MPoly, GeometryError> {
    let (f, g) = spec.pair_at(i, p.coords());
    if f.is_zero() && g.is_zero() {
        return Err(GeometryError::PairVanishes(i));
    }
    let ring = spec.ring();
    let l = MPoly::var(ring, ring.x_index(i)).scale(&g) - MPoly::var(ring, ring.y_index(i)).scale(&f);
    Ok(l.normalized())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum FactorSource {
    #[serde(rename = "points", serialize_with = "ser_points")]
    Points(Vec<ProjPoint>),
    #[serde(rename = "component")]
    Component(String),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactorAttribution {
    pub alpha: Vec<usize>,
    pub source: FactorSource,
    #[serde(serialize_with = "ser_poly")]
    pub factor: MPoly,
    pub exponent: u32,
}

fn ser_poly<S: serde::Serializer>(p: &MPoly, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ImplicitReport {
    pub res: ResultantPoly,
    pub h: Option<MPoly>,
    pub deg_phi: Option<u32>,
    pub attributions: Vec<FactorAttribution>,
    /// Squarefree decomposition of the residual when it is not a pure power.
    pub residual_parts: Vec<(MPoly, u32)>,
    pub degree_identity_ok: bool,
    pub conditions: Option<ConditionReport>,
    pub diagnostics: Vec<String>,
    pub timings_ms: BTreeMap<String, u128>,
}

impl ImplicitReport {
    /// `H^{deg φ} · Π factor^exponent`.
    pub fn reconstruct(&self) -> Option<MPoly> {
        let h = self.h.as_ref()?;
        let mut acc = h.pow(self.deg_phi?);
        for a in &self.attributions {
            acc = &acc * &a.factor.pow(a.exponent);
        }
        Some(acc)
    }
}

#[derive(Clone, Debug, Default)]
pub struct PipelineOptions {
    pub nu: Option<u32>,
    pub method: Method,
    pub det: DetOptions,
}

/// Factors attributed to base components, before trial division.
fn candidate_factors(
    spec: &MapSpec,
    comps: &[BaseComponent],
    opts: &PipelineOptions,
    diagnostics: &mut Vec<String>,
) -> Result<Vec<(Vec<usize>, FactorSource, MPoly)>, GeometryError> {
    let n = spec.n();
    let count = spec.pairs().len();
    let mut out: Vec<(Vec<usize>, FactorSource, MPoly)> = Vec::new();
    let mut push = |alpha: &[usize], src: FactorSource, f: MPoly| {
        if let Some(existing) = out.iter_mut().find(|(_, _, g)| g.eq_up_to_unit(&f)) {
            if let (FactorSource::Points(a), FactorSource::Points(b)) = (&mut existing.1, src) {
                a.extend(b);
            }
            return;
        }
        out.push((alpha.to_vec(), src, f));
    };
    for c in comps {
        if c.dimension + c.alpha.len() != n {
            if c.dimension > 0 && c.subspace.is_none() && c.dimension + c.alpha.len() >= n {
                diagnostics.push(format!(
                    "base component of dimension {} for alpha {} is not a coordinate subspace; its factor is not attributed",
                    c.dimension,
                    fmt_subset(&c.alpha)
                ));
            }
            continue;
        }
        if c.dimension == 0 {
            let i = (0..count).find(|i| !c.alpha.contains(i)).unwrap();
            for p in &c.points {
                push(&c.alpha, FactorSource::Points(vec![p.clone()]), point_factor(p, i, spec)?);
            }
            if c.unresolved > 0 {
                diagnostics.push(format!(
                    "{} irrational base points for alpha {} are not attributed",
                    c.unresolved,
                    fmt_subset(&c.alpha)
                ));
            }
        } else if let Some(sub) = &c.subspace {
            match implicitize_restricted(spec, sub, &c.alpha, opts) {
                Ok(f) if !f.is_constant() => {
                    push(&c.alpha, FactorSource::Component(sub.describe(spec.ring())), f)
                }
                Ok(_) => {}
                Err(e) => diagnostics.push(format!("{}: {e}", sub.describe(spec.ring()))),
            }
        } else {
            diagnostics.push(format!(
                "base component of dimension {} for alpha {} is not a coordinate subspace; its factor is not attributed",
                c.dimension,
                fmt_subset(&c.alpha)
            ));
        }
    }
    Ok(out)
}

/// Divides the attributed factors out of `res` and reads `H` and `deg φ` from
/// the squarefree decomposition of what remains.
pub fn extract_implicit(
    spec: &MapSpec,
    res: &ResultantPoly,
    comps: &[BaseComponent],
    opts: &PipelineOptions,
) -> Result<ImplicitReport, GeometryError> {
    if res.is_zero() {
        return Err(PolyError::ZeroInput.into());
    }
    let mut diagnostics = Vec::new();
    let mut quotient = res.poly.clone();
    let mut attributions = Vec::new();
    for (alpha, source, factor) in candidate_factors(spec, comps, opts, &mut diagnostics)? {
        let (e, q) = trial_divide(&quotient, &factor);
        if e == 0 {
            diagnostics.push(format!("attributed factor {factor} does not divide the resultant"));
            continue;
        }
        quotient = q;
        attributions.push(FactorAttribution { alpha, source, factor, exponent: e });
    }

    let (mut h, mut deg_phi, mut residual_parts) = (None, None, Vec::new());
    if quotient.is_constant() {
        diagnostics.push("no residual factor: the map is not generically finite".into());
    } else {
        let dec = squarefree_decompose(&quotient)?;
        if dec.parts.len() == 1 {
            h = Some(dec.parts[0].0.normalized());
            deg_phi = Some(dec.parts[0].1);
        } else {
            diagnostics.push("residual is not a power of a squarefree polynomial".into());
            residual_parts = dec.parts;
        }
    }

    let expected = spec.resultant_multidegree();
    let degree_identity_ok = h.as_ref().is_some_and(|h: &MPoly| {
        (0..expected.len()).all(|i| {
            let mut total = h.pair_degree(i).unwrap_or(0) * deg_phi.unwrap();
            for a in &attributions {
                total += a.factor.pair_degree(i).unwrap_or(0) * a.exponent;
            }
            total == expected[i]
        })
    });
    if h.is_some() && !degree_identity_ok {
        diagnostics.push("degree identity fails".into());
    }
    Ok(ImplicitReport {
        res: res.clone(),
        h,
        deg_phi,
        attributions,
        residual_parts,
        degree_identity_ok,
        conditions: None,
        diagnostics,
        timings_ms: BTreeMap::new(),
    })
}

/// Exponents μ_j and the certificate `Res(G_0..G_n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MuBound {
    /// `(j, μ_j)` for every pair index.
    pub mu: Vec<(usize, u32)>,
    pub certificate: ResultantPoly,
}

impl MuBound {
    /// `Π_{j∈α} μ_j`.
    pub fn product(&self, alpha: &[usize]) -> u32 {
        self.mu.iter().filter(|(j, _)| alpha.contains(j)).map(|(_, m)| m).product()
    }
}

const MU_SEARCH_LIMIT: u32 = 10;

/// For `G = (G_0..G_k, L_i : i ∉ α)`, the largest `e` with `L_j ∈ G^e` for each
/// `j ∈ α` (pairs outside α report 1), and `Res(G)` through the generalized
/// Koszul path.
pub fn mu_lower_bound(
    alpha_gens: &[MPoly],
    alpha: &[usize],
    spec: &MapSpec,
    opts: &DetOptions,
) -> Result<MuBound, GeometryError> {
    if alpha_gens.len() != alpha.len() {
        return Err(GeometryError::AlphaGenerators { expected: alpha.len(), got: alpha_gens.len() });
    }
    let l = linear_forms(spec);
    let count = spec.pairs().len();
    let mut g: Vec<MPoly> = alpha_gens.to_vec();
    g.extend((0..count).filter(|i| !alpha.contains(i)).map(|i| l.forms()[i].clone()));
    let order = TermOrder::degrevlex(spec.ring());

    let mut mu = Vec::new();
    let mut powers = Vec::new();
    for j in 0..count {
        if !alpha.contains(&j) {
            mu.push((j, 1));
            continue;
        }
        let mut e = 0;
        loop {
            if e == MU_SEARCH_LIMIT {
                return Err(GeometryError::MuBoundExceeded { j, bound: MU_SEARCH_LIMIT });
            }
            if powers.len() <= e as usize {
                powers.push(buchberger(&ideal_power(&g, e + 1)?, &order)?);
            }
            if !powers[e as usize].contains(&l.forms()[j]) {
                break;
            }
            e += 1;
        }
        mu.push((j, e));
    }
    let outcome = forms_resultant(&LinFormSet::from_forms(g)?, None, opts)?;
    Ok(MuBound { mu, certificate: outcome.res })
}

/// Implicit equation of the map restricted to a linear subspace of `X_α`,
/// in the pair variables outside α.
pub fn implicitize_restricted(
    spec: &MapSpec,
    sub: &Subspace,
    alpha: &[usize],
    opts: &PipelineOptions,
) -> Result<MPoly, GeometryError> {
    let ring = spec.ring();
    if sub.images.len() != ring.t_count() {
        return Err(GeometryError::SubspaceShape { expected: ring.t_count(), got: sub.images.len() });
    }
    let m = sub.dim();
    let count = spec.pairs().len();
    let outside: Vec<usize> = (0..count).filter(|i| !alpha.contains(i)).collect();
    let bare = sub_ring(m + 1, &[])?;

    for &i in alpha {
        let p = &spec.pairs()[i];
        if !sub.restrict(&p.f, &bare).is_zero() || !sub.restrict(&p.g, &bare).is_zero() {
            return Err(GeometryError::NotBaseComponent(format!(
                "pair {i} does not vanish on {}",
                sub.describe(ring)
            )));
        }
    }

    let mut product = MPoly::one(ring);
    let mut moving: Vec<(usize, MPoly, MPoly)> = Vec::new();
    for &i in &outside {
        let p = &spec.pairs()[i];
        let f = sub.restrict(&p.f, &bare);
        let g = sub.restrict(&p.g, &bare);
        if f.is_zero() && g.is_zero() {
            return Err(GeometryError::NotBaseComponent(format!(
                "pair {i} also vanishes on {}",
                sub.describe(ring)
            )));
        }
        let c = multivariate_gcd(&f, &g)?;
        let f = f.div_exact(&c).expect("gcd divides");
        let g = g.div_exact(&c).expect("gcd divides");
        if f.is_constant() && g.is_constant() {
            let (fc, gc) = (f.as_constant().unwrap(), g.as_constant().unwrap());
            let l = MPoly::var(ring, ring.x_index(i)).scale(&gc) - MPoly::var(ring, ring.y_index(i)).scale(&fc);
            product = &product * &l;
        } else {
            moving.push((i, f, g));
        }
    }

    if moving.len() == m + 1 {
        // as many moving pairs as parameters: the image is a hypersurface
        let sub_pairs: Vec<(String, String)> = moving.iter().map(|(i, _, _)| ring.pairs()[*i].clone()).collect();
        let sring = sub_ring(m + 1, &sub_pairs)?;
        let pairs: Vec<(MPoly, MPoly)> = moving
            .iter()
            .map(|(_, f, g)| {
                let map: Vec<Option<usize>> = (0..bare.nvars()).map(|v| if v <= m { Some(v) } else { None }).collect();
                Ok((f.rename_into(&sring, &map)?, g.rename_into(&sring, &map)?))
            })
            .collect::<Result<_, PolyError>>()?;
        let restricted = MapSpec::new(&sring, pairs, Mode::Permissive)?;
        let report = implicitize(&restricted, opts)?;
        let h = report.h.ok_or_else(|| {
            GeometryError::NotBaseComponent(format!(
                "restricted map on {} has no irreducible implicit equation",
                sub.describe(ring)
            ))
        })?;
        let back: Vec<Option<usize>> = (0..sring.nvars()).map(|v| sring.var_name(v)).map(|name| ring.var_index(name)).collect();
        product = &product * &h.rename_into(ring, &back)?;
    } else if moving.len() == m {
        if !generically_finite(&moving, m, opts.det.seed) {
            return Err(GeometryError::NotGenericallyFinite);
        }
    } else {
        return Err(GeometryError::NotGenericallyFinite);
    }
    Ok(product.normalized())
}

/// Jacobian rank of `s ↦ (f_j/g_j)` in the chart `s_m = 1` equals `m`.
fn generically_finite(moving: &[(usize, MPoly, MPoly)], m: usize, seed: u64) -> bool {
    if m == 0 {
        return true;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6a61_636f);
    for _ in 0..3 {
        let nvars = moving[0].1.ring().nvars();
        let mut point = vec![Rat::zero(); nvars];
        for v in point.iter_mut().take(m) {
            *v = Rat::from_integer(rng.gen_range(-500i64..=500).into());
        }
        point[m] = Rat::one();
        let mut jac: Vec<Vec<Rat>> = Vec::new();
        let mut ok = true;
        for (_, f, g) in moving {
            let gv = g.eval_all(&point);
            let fv = f.eval_all(&point);
            let (num, den_pair) = if gv.is_zero() { (g, f) } else { (f, g) };
            let dv = if gv.is_zero() { fv.clone() } else { gv.clone() };
            if dv.is_zero() {
                ok = false;
                break;
            }
            let nv = num.eval_all(&point);
            let row = (0..m)
                .map(|k| {
                    let dn = num.derivative(k).eval_all(&point);
                    let dd = den_pair.derivative(k).eval_all(&point);
                    (dn * &dv - &nv * dd) / (&dv * &dv)
                })
                .collect();
            jac.push(row);
        }
        if ok {
            return crate::detcx::rat_det(jac) != Rat::zero();
        }
    }
    false
}

/// Full pipeline: conditions, resultant, base locus, extraction.
pub fn implicitize(spec: &MapSpec, opts: &PipelineOptions) -> Result<ImplicitReport, GeometryError> {
    let mut timings = BTreeMap::new();
    let start = Instant::now();
    let conditions = check_acyclicity(spec)?;
    timings.insert("conditions".to_string(), start.elapsed().as_millis());

    let start = Instant::now();
    let outcome = macaulay_resultant(spec, opts.nu, opts.method, &opts.det)?;
    timings.insert("resultant".to_string(), start.elapsed().as_millis());

    let mut diagnostics = conditions.diagnostics.clone();
    if let Some(d) = &outcome.diagnostic {
        diagnostics.push(d.clone());
    }
    if !conditions.acyclic() || outcome.res.is_zero() {
        return Ok(ImplicitReport {
            res: outcome.res,
            h: None,
            deg_phi: None,
            attributions: vec![],
            residual_parts: vec![],
            degree_identity_ok: false,
            conditions: Some(conditions),
            diagnostics,
            timings_ms: timings,
        });
    }

    let start = Instant::now();
    let comps = base_points(spec)?;
    timings.insert("base_locus".to_string(), start.elapsed().as_millis());

    let start = Instant::now();
    let mut report = extract_implicit(spec, &outcome.res, &comps, opts)?;
    timings.insert("extraction".to_string(), start.elapsed().as_millis());
    diagnostics.append(&mut report.diagnostics);
    report.diagnostics = diagnostics;
    report.conditions = Some(conditions);
    report.timings_ms = timings;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn ring() -> Arc<RingSpec> {
        RingSpec::with_default_pairs(&["u", "v", "w"]).unwrap()
    }

    fn spec(pairs: &[(&str, &str)], mode: Mode) -> MapSpec {
        MapSpec::parse(&ring(), pairs, mode).unwrap()
    }

    fn ex1() -> MapSpec {
        spec(&[("u", "v"), ("u^2", "v^2"), ("v^2", "w^2")], Mode::Strict)
    }

    fn ex2() -> MapSpec {
        spec(&[("u*w", "v^2"), ("u^2", "v^2"), ("v^2", "w^2")], Mode::Strict)
    }

    fn ex3() -> MapSpec {
        spec(&[("u*v", "u*w"), ("u^2+v^2", "v^2"), ("v^2", "w^2")], Mode::Permissive)
    }

    fn p(s: &str) -> MPoly {
        parse_poly(s, &ring()).unwrap()
    }

    fn pt(c: &[i64]) -> ProjPoint {
        ProjPoint::from_ints(c).unwrap()
    }

    #[test]
    fn conditions_on_examples() {
        let c = check_acyclicity(&ex2()).unwrap();
        assert!(c.acyclic());
        assert!(c.weak_codim_ok);
        assert_eq!(c.avramov[0].codim, 3);
        assert_eq!(c.avramov[2].codim, 2);

        let c = check_acyclicity(&ex1()).unwrap();
        assert!(c.acyclic());
        assert!(!c.strict_ok);
        assert_eq!(c.strict_witnesses, vec![vec![0, 1]]);

        let diag = spec(&[("u", "v"), ("u", "v"), ("u", "v")], Mode::Strict);
        let c = check_acyclicity(&diag).unwrap();
        assert!(!c.acyclic());
        assert_eq!(c.x_points, vec![pt(&[0, 0, 1])]);
        assert!(c.diagnostics.iter().any(|d| d == "X nonempty: (0:0:1)"));
    }

    #[test]
    fn base_points_of_examples() {
        let comps = base_points(&ex1()).unwrap();
        let mut found: Vec<(Vec<usize>, Vec<ProjPoint>)> =
            comps.into_iter().filter(|c| !c.points.is_empty()).map(|c| (c.alpha, c.points)).collect();
        found.sort();
        // (1:0:0) kills only the last pair: a one-dimensional fibre, no factor
        assert_eq!(found, vec![(vec![0, 1], vec![pt(&[0, 0, 1])]), (vec![2], vec![pt(&[1, 0, 0])])]);

        let comps = base_points(&ex2()).unwrap();
        let mut found: Vec<(Vec<usize>, Vec<ProjPoint>)> =
            comps.into_iter().filter(|c| !c.points.is_empty()).map(|c| (c.alpha, c.points)).collect();
        found.sort();
        assert_eq!(found, vec![(vec![0, 1], vec![pt(&[0, 0, 1])]), (vec![0, 2], vec![pt(&[1, 0, 0])])]);
    }

    #[test]
    fn fibre_dimensions_and_point_factors() {
        assert_eq!(fibre_dimension(&pt(&[0, 0, 1]), &ex2()), 2);
        assert_eq!(fibre_dimension(&pt(&[3, 5, 7]), &ex2()), 0);
        assert_eq!(fibre_dimension(&pt(&[0, 3, 7]), &ex3()), 1);
        assert_eq!(point_factor(&pt(&[0, 0, 1]), 2, &ex1()).unwrap(), p("x2"));
        assert_eq!(point_factor(&pt(&[1, 0, 0]), 1, &ex2()).unwrap(), p("y1"));
        assert!(matches!(point_factor(&pt(&[0, 0, 1]), 0, &ex1()), Err(GeometryError::PairVanishes(0))));
    }

    #[test]
    fn example_one_extraction() {
        let r = implicitize(&ex1(), &PipelineOptions::default()).unwrap();
        assert_eq!(r.h.as_ref().unwrap(), &p("x0^2*y1 - x1*y0^2").normalized());
        assert_eq!(r.deg_phi, Some(2));
        assert_eq!(r.attributions.len(), 1);
        assert_eq!(r.attributions[0].factor, p("x2"));
        assert_eq!(r.attributions[0].exponent, 2);
        assert!(r.degree_identity_ok);
        assert!(r.reconstruct().unwrap().eq_up_to_unit(&r.res.poly));
    }

    #[test]
    fn example_three_restricted() {
        let s = ex3();
        let sub = Subspace::coordinate(3, &[0]);
        let f = implicitize_restricted(&s, &sub, &[0], &PipelineOptions::default()).unwrap();
        assert_eq!(f, p("x1 - y1"));
        let bad = Subspace::coordinate(3, &[1]);
        assert!(matches!(
            implicitize_restricted(&s, &bad, &[0], &PipelineOptions::default()),
            Err(GeometryError::NotBaseComponent(_))
        ));
        // a single base point reproduces its point factor
        let q = pt(&[0, 0, 1]);
        let f = implicitize_restricted(&ex2(), &Subspace::point(&q), &[0, 1], &PipelineOptions::default()).unwrap();
        assert_eq!(f, point_factor(&q, 2, &ex2()).unwrap());
    }

    #[test]
    fn example_three_full_pipeline() {
        let r = implicitize(&ex3(), &PipelineOptions::default()).unwrap();
        let want = p("y1^2*x2^2*(x1 - y1)^2*(x2*y0^2 - x0^2*y2)^2");
        assert!(r.res.poly.eq_up_to_unit(&want), "{}", r.res.poly);
        assert_eq!(r.h.as_ref().unwrap(), &p("x2*y0^2 - x0^2*y2").normalized());
        assert_eq!(r.deg_phi, Some(2));
        assert!(r.degree_identity_ok);
    }

    #[test]
    fn mu_for_example_two() {
        let s = ex2();
        let mu = mu_lower_bound(&[p("u"), p("v")], &[0, 1], &s, &DetOptions::default()).unwrap();
        assert_eq!(mu.mu, vec![(0, 1), (1, 2), (2, 1)]);
        assert!(mu.certificate.poly.eq_up_to_unit(&p("x2")));
        assert_eq!(mu.product(&[0, 1]), 2);
    }
}
