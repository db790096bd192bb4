//! Buchberger's algorithm over ℚ, ideal codimension, ideal powers and rational
//! points of zero-dimensional projective loci.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{upoly, MPoly, Monomial, Rat, RingSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroebnerError {
    #[error("generator `{0}` lies outside the t-variable subring")]
    OutsideSubring(String),
    #[error("generator `{0}` is not homogeneous in the t-variables")]
    NotHomogeneous(String),
    #[error("empty generator list")]
    Empty,
    #[error("ideal power exponent must be positive")]
    ZeroExponent,
    #[error("zero locus is not zero-dimensional (projective codimension {codim}, need {needed})")]
    NotZeroDimensional { codim: usize, needed: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrderKind {
    DegRevLex,
    Lex,
}

/// Monomial order: a kind plus a permutation of the ring's variables
/// (`var_order[0]` is the most significant variable).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermOrder {
    pub kind: OrderKind,
    pub var_order: Vec<usize>,
}

impl TermOrder {
    pub fn degrevlex(ring: &RingSpec) -> Self {
        Self { kind: OrderKind::DegRevLex, var_order: (0..ring.nvars()).collect() }
    }

    pub fn lex(ring: &RingSpec) -> Self {
        Self { kind: OrderKind::Lex, var_order: (0..ring.nvars()).collect() }
    }

    fn permute(&self, m: &Monomial) -> Monomial {
        Monomial::from_exps(self.var_order.iter().map(|&v| m.exp(v)).collect())
    }

    fn unpermute(&self, m: &Monomial) -> Monomial {
        let mut exps = vec![0; m.nvars()];
        for (pos, &v) in self.var_order.iter().enumerate() {
            exps[v] = m.exp(pos);
        }
        Monomial::from_exps(exps)
    }

    /// Compares monomials already in permuted coordinates.
    fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.kind {
            OrderKind::DegRevLex => a.cmp_degrevlex(b),
            OrderKind::Lex => a.cmp_lex(b),
        }
    }
}

/// Integer-coefficient polynomial with terms sorted in descending order,
/// monomials stored in permuted coordinates.
#[derive(Clone, Debug)]
struct GPoly {
    terms: Vec<(Monomial, BigInt)>,
}

impl GPoly {
    fn from_mpoly(p: &MPoly, order: &TermOrder) -> Self {
        let den = p.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let mut terms: Vec<(Monomial, BigInt)> = p
            .terms()
            .map(|(m, c)| (order.permute(m), (c * Rat::from_integer(den.clone())).to_integer()))
            .collect();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut g = GPoly { terms };
        g.make_primitive();
        g
    }

    fn to_mpoly(&self, ring: &Arc<RingSpec>, order: &TermOrder, monic: bool) -> MPoly {
        let scale = if monic {
            Rat::from_integer(self.terms[0].1.clone())
        } else {
            Rat::one()
        };
        MPoly::from_terms(
            ring,
            self.terms
                .iter()
                .map(|(m, c)| (order.unpermute(m), Rat::from_integer(c.clone()) / &scale)),
        )
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn lc(&self) -> &BigInt {
        &self.terms[0].1
    }

    /// Divides by the integer content; returns the content removed (signed so
    /// the leading coefficient becomes positive).
    fn make_primitive(&mut self) -> BigInt {
        if self.terms.is_empty() {
            return BigInt::one();
        }
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        if self.terms[0].1.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for (_, c) in self.terms.iter_mut() {
                *c /= &g;
            }
        }
        g
    }

    /// `a*self - b*t*other`, merging sorted term lists.
    fn combine(&self, a: &BigInt, b: &BigInt, t: &Monomial, other: &GPoly, order: &TermOrder) -> GPoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut i = 0;
        let mut j = 0;
        let shifted: Vec<(Monomial, BigInt)> = other.terms.iter().map(|(m, c)| (m.mul(t), c * b)).collect();
        while i < self.terms.len() || j < shifted.len() {
            let ord = if i == self.terms.len() {
                Ordering::Less
            } else if j == shifted.len() {
                Ordering::Greater
            } else {
                order.cmp(&self.terms[i].0, &shifted[j].0)
            };
            match ord {
                Ordering::Greater => {
                    out.push((self.terms[i].0.clone(), &self.terms[i].1 * a));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((shifted[j].0.clone(), -&shifted[j].1));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].1 * a - &shifted[j].1;
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        GPoly { terms: out }
    }
}

/// Reduces `f` fully modulo `basis`. Returns the remainder and the rational
/// factor `λ` with `remainder ≡ λ·f` modulo the ideal.
fn reduce_full(f: &GPoly, basis: &[GPoly], order: &TermOrder, top_only: bool) -> (GPoly, Rat) {
    let mut cur = f.clone();
    let mut rem: Vec<(Monomial, BigInt)> = Vec::new();
    let mut lambda = Rat::one();
    while !cur.is_zero() {
        let (m, c) = cur.terms[0].clone();
        match basis.iter().find(|g| g.lm().divides(&m)) {
            Some(g) => {
                let t = g.lm().quotient_of(&m);
                let d = c.gcd(g.lc());
                let a = g.lc() / &d;
                let b = &c / &d;
                cur = cur.combine(&a, &b, &t, g, order);
                debug_assert!(cur.is_zero() || cur.terms[0].0 != m);
                if !a.is_one() {
                    for (_, rc) in rem.iter_mut() {
                        *rc *= &a;
                    }
                    lambda *= Rat::from_integer(a);
                }
                // keep coefficients small
                let mut content = BigInt::zero();
                for (_, x) in rem.iter().chain(cur.terms.iter()) {
                    content = content.gcd(x);
                    if content.is_one() {
                        break;
                    }
                }
                if !content.is_zero() && !content.is_one() {
                    for (_, x) in rem.iter_mut().chain(cur.terms.iter_mut()) {
                        *x /= &content;
                    }
                    lambda /= Rat::from_integer(content);
                }
            }
            None => {
                if top_only {
                    rem.append(&mut cur.terms);
                    break;
                }
                rem.push(cur.terms.remove(0));
            }
        }
    }
    (GPoly { terms: rem }, lambda)
}

/// Reduced Gröbner basis together with the order and source generators.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: Arc<RingSpec>,
    order: TermOrder,
    internal: Vec<GPoly>,
    generators: Vec<MPoly>,
    source: Vec<MPoly>,
}

impl GroebnerBasis {
    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    /// Monic generators, sorted by ascending leading monomial.
    pub fn generators(&self) -> &[MPoly] {
        &self.generators
    }

    pub fn source(&self) -> &[MPoly] {
        &self.source
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.internal.iter().any(|g| g.lm().is_one())
    }

    /// Leading monomials in the ring's own coordinates.
    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.internal.iter().map(|g| self.order.unpermute(g.lm())).collect()
    }

    /// Leading monomial of generator `i` under the basis order.
    pub fn leading_monomial(&self, i: usize) -> Monomial {
        self.order.unpermute(self.internal[i].lm())
    }

    /// S-polynomial of generators `i`, `j` reduced modulo the basis.
    pub fn s_poly_remainder(&self, i: usize, j: usize) -> MPoly {
        let s = s_poly(&self.internal[i], &self.internal[j], &self.order);
        let (r, _) = reduce_full(&s, &self.internal, &self.order, false);
        if r.is_zero() {
            MPoly::zero(&self.ring)
        } else {
            r.to_mpoly(&self.ring, &self.order, false)
        }
    }

    pub fn contains(&self, f: &MPoly) -> bool {
        normal_form(f, self).is_zero()
    }
}

fn s_poly(f: &GPoly, g: &GPoly, order: &TermOrder) -> GPoly {
    let l = f.lm().lcm(g.lm());
    let tf = f.lm().quotient_of(&l);
    let tg = g.lm().quotient_of(&l);
    let d = f.lc().gcd(g.lc());
    let a = g.lc() / &d;
    let b = f.lc() / &d;
    // a*tf*f - b*tg*g
    let ftf = GPoly { terms: f.terms.iter().map(|(m, c)| (m.mul(&tf), c.clone())).collect() };
    ftf.combine(&a, &b, &tg, g, order)
}

/// Buchberger's algorithm with the normal selection strategy and
/// Buchberger's two criteria. Output is the reduced basis.
pub fn buchberger(gens: &[MPoly], order: &TermOrder) -> Result<GroebnerBasis, GroebnerError> {
    let Some(first) = gens.first() else {
        return Err(GroebnerError::Empty);
    };
    let ring = first.ring().clone();
    let mut basis: Vec<GPoly> = Vec::new();
    for g in gens {
        if !g.is_zero() {
            basis.push(GPoly::from_mpoly(g, order));
        }
    }
    if basis.is_empty() {
        return Ok(GroebnerBasis {
            ring,
            order: order.clone(),
            internal: vec![],
            generators: vec![],
            source: gens.to_vec(),
        });
    }
    // start from an inter-reduced generating set
    basis = interreduce(basis, order);

    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pending.insert((i, j));
        }
    }
    let mut active: Vec<bool> = vec![true; basis.len()];

    while let Some(&(i, j)) = pending.iter().min_by(|&&(a, b), &&(c, d)| {
        let l1 = basis[a].lm().lcm(basis[b].lm());
        let l2 = basis[c].lm().lcm(basis[d].lm());
        l1.degree()
            .cmp(&l2.degree())
            .then_with(|| order.cmp(&l1, &l2))
            .then_with(|| (b, a).cmp(&(d, c)))
    }) {
        pending.remove(&(i, j));
        if !active[i] || !active[j] {
            continue;
        }
        let lcm = basis[i].lm().lcm(basis[j].lm());
        // product criterion
        if basis[i].lm().gcd(basis[j].lm()).is_one() {
            continue;
        }
        // chain criterion
        let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && active[k]
                && basis[k].lm().divides(&lcm)
                && !pending.contains(&key(i, k))
                && !pending.contains(&key(j, k))
        });
        if chain {
            continue;
        }
        let s = s_poly(&basis[i], &basis[j], order);
        let live: Vec<GPoly> = basis
            .iter()
            .zip(&active)
            .filter(|(_, a)| **a)
            .map(|(g, _)| g.clone())
            .collect();
        let (mut r, _) = reduce_full(&s, &live, order, true);
        if r.is_zero() {
            continue;
        }
        r.make_primitive();
        let new_idx = basis.len();
        let new_lm = r.lm().clone();
        basis.push(r);
        active.push(true);
        if new_lm.is_one() {
            // unit ideal
            basis = vec![basis.pop().unwrap()];
            active = vec![true];
            pending.clear();
            break;
        }
        for k in 0..new_idx {
            if active[k] {
                pending.insert((k, new_idx));
            }
        }
    }

    let live: Vec<GPoly> = basis.into_iter().zip(active).filter(|(_, a)| *a).map(|(g, _)| g).collect();
    let reduced = interreduce(live, order);
    let mut internal = reduced;
    internal.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    let generators = internal.iter().map(|g| g.to_mpoly(&ring, order, true)).collect();
    Ok(GroebnerBasis { ring, order: order.clone(), internal, generators, source: gens.to_vec() })
}

/// Removes generators with divisible leading terms and fully reduces the rest.
fn interreduce(mut polys: Vec<GPoly>, order: &TermOrder) -> Vec<GPoly> {
    loop {
        polys.retain(|p| !p.is_zero());
        polys.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
        let mut changed = false;
        let mut out: Vec<GPoly> = Vec::new();
        for i in 0..polys.len() {
            let others: Vec<GPoly> = polys
                .iter()
                .enumerate()
                .filter(|(j, p)| *j != i && !p.is_zero())
                .map(|(_, p)| p.clone())
                .collect();
            let (mut r, _) = reduce_full(&polys[i], &others, order, false);
            if r.is_zero() {
                changed = true;
                polys[i] = r;
                continue;
            }
            r.make_primitive();
            if r.lm() != polys[i].lm() || r.terms.len() != polys[i].terms.len() || r.terms != polys[i].terms {
                changed = true;
            }
            polys[i] = r.clone();
            out.push(r);
        }
        if !changed {
            return out;
        }
        polys = out;
    }
}

/// Remainder of full multivariate division by the basis; zero iff `f` lies in
/// the ideal.
pub fn normal_form(f: &MPoly, gb: &GroebnerBasis) -> MPoly {
    if f.is_zero() {
        return f.clone();
    }
    let g = GPoly::from_mpoly(f, &gb.order);
    let (r, lambda) = reduce_full(&g, &gb.internal, &gb.order, false);
    if r.is_zero() {
        return MPoly::zero(f.ring());
    }
    // g = s*f for the rational scale s chosen by the integer conversion
    let lead = gb.order.unpermute(g.lm());
    let s = Rat::from_integer(g.lc().clone()) / f.coeff(&lead);
    r.to_mpoly(f.ring(), &gb.order, false).scale(&(lambda * s).recip())
}

fn check_t_homogeneous(gens: &[MPoly]) -> Result<(), GroebnerError> {
    for g in gens {
        if g.involves_pairs() {
            return Err(GroebnerError::OutsideSubring(g.to_string()));
        }
        if g.t_degree().is_none() {
            return Err(GroebnerError::NotHomogeneous(g.to_string()));
        }
    }
    Ok(())
}

/// Codimension in `A = k[t_0..t_n]` of the homogeneous ideal generated by
/// `gens`: `(n+1) - dim`, with `dim` the largest set of t-variables
/// independent modulo the initial ideal. An ideal with empty projective
/// locus (irrelevant or unit) reports `n+1`.
pub fn projective_codimension(gens: &[MPoly]) -> Result<usize, GroebnerError> {
    let Some(first) = gens.first() else {
        return Err(GroebnerError::Empty);
    };
    check_t_homogeneous(gens)?;
    let ring = first.ring().clone();
    let gb = buchberger(gens, &TermOrder::degrevlex(&ring))?;
    Ok(codim_from_basis(&gb, ring.t_count()))
}

pub(crate) fn codim_from_basis(gb: &GroebnerBasis, t_count: usize) -> usize {
    if gb.is_unit_ideal() {
        return t_count;
    }
    let lms = gb.leading_monomials();
    let supports: Vec<u32> = lms
        .iter()
        .map(|m| (0..t_count).filter(|&v| m.exp(v) > 0).fold(0u32, |acc, v| acc | (1 << v)))
        .collect();
    let mut best = 0;
    for subset in 0u32..(1 << t_count) {
        let size = subset.count_ones() as usize;
        if size <= best {
            continue;
        }
        if supports.iter().all(|s| s & !subset != 0) {
            best = size;
        }
    }
    t_count - best
}

/// All `e`-fold products of generators (one per multiset of indices).
pub fn ideal_power(gens: &[MPoly], e: u32) -> Result<Vec<MPoly>, GroebnerError> {
    if e == 0 {
        return Err(GroebnerError::ZeroExponent);
    }
    if gens.is_empty() {
        return Err(GroebnerError::Empty);
    }
    let mut layer: Vec<(usize, MPoly)> = gens.iter().cloned().enumerate().collect();
    for _ in 1..e {
        let mut next = Vec::new();
        for (last, p) in &layer {
            for (k, g) in gens.iter().enumerate().skip(*last) {
                next.push((k, p * g));
            }
        }
        layer = next;
    }
    Ok(layer.into_iter().map(|(_, p)| p).collect())
}

/// Point of projective space normalized so the last nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: Vec<Rat>,
}

impl ProjPoint {
    pub fn new(coords: Vec<Rat>) -> Option<Self> {
        let last = coords.iter().rev().find(|c| !c.is_zero())?.clone();
        Some(Self { coords: coords.into_iter().map(|c| c / &last).collect() })
    }

    pub fn from_ints(coords: &[i64]) -> Option<Self> {
        Self::new(coords.iter().map(|&c| Rat::from_integer(BigInt::from(c))).collect())
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    /// Primitive integer representative with first nonzero coordinate positive.
    pub fn integer_coords(&self) -> Vec<BigInt> {
        let den = self.coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut ints: Vec<BigInt> =
            self.coords.iter().map(|c| (c * Rat::from_integer(den.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let first_neg = ints.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative());
        for c in ints.iter_mut() {
            *c /= &g;
            if first_neg {
                *c = -&*c;
            }
        }
        ints
    }

    /// Assignment of the t-variables of `ring` to this point.
    pub fn assignment(&self, ring: &RingSpec) -> crate::poly::Assignment {
        let mut a = crate::poly::Assignment::new();
        for (v, c) in self.coords.iter().enumerate().take(ring.t_count()) {
            a.set_rat(v, c.clone());
        }
        a
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.integer_coords().iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(":"))
    }
}

/// Rational points of a projective zero locus, plus the number of points
/// with non-rational coordinates that were detected but not returned.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroLocus {
    pub points: Vec<ProjPoint>,
    pub unresolved: usize,
}

/// Rational points of the projective zero locus of a homogeneous ideal of
/// projective dimension at most 0, via lex bases in each affine chart.
pub fn rational_zero_locus(gens: &[MPoly]) -> Result<ZeroLocus, GroebnerError> {
    let Some(first) = gens.first() else {
        return Err(GroebnerError::Empty);
    };
    let ring = first.ring().clone();
    let codim = projective_codimension(gens)?;
    let n = ring.n();
    if codim < n {
        return Err(GroebnerError::NotZeroDimensional { codim, needed: n });
    }
    let mut points = Vec::new();
    let mut unresolved = 0;
    if codim == n + 1 {
        return Ok(ZeroLocus { points, unresolved });
    }
    // chart j: t_j = 1, t_k = 0 for k > j, so the last nonzero coordinate is t_j
    for j in (0..=n).rev() {
        let mut chart: Vec<MPoly> = gens.to_vec();
        for k in j + 1..=n {
            chart.push(MPoly::var(&ring, k));
        }
        chart.push(&MPoly::var(&ring, j) - &MPoly::one(&ring));
        let gb = buchberger(&chart, &TermOrder::lex(&ring))?;
        if gb.is_unit_ideal() {
            continue;
        }
        let mut partial: Vec<Vec<Option<Rat>>> = vec![vec![None; ring.nvars()]];
        for var in (0..=n).rev() {
            let mut next = Vec::new();
            for sol in partial {
                let mut uni: Option<Vec<Rat>> = None;
                let mut consistent = true;
                for g in gb.generators() {
                    let uses_earlier = (0..var).any(|v| g.uses_var(v));
                    if uses_earlier {
                        continue;
                    }
                    let spec = substitute_known(g, &sol);
                    let coeffs = univariate_coeffs(&spec, var);
                    if coeffs.is_empty() {
                        continue;
                    }
                    if coeffs.len() == 1 {
                        consistent = false;
                        break;
                    }
                    uni = Some(match uni {
                        None => coeffs,
                        Some(u) => upoly::gcd(&u, &coeffs),
                    });
                }
                if !consistent {
                    continue;
                }
                let Some(u) = uni else {
                    // unreachable for zero-dimensional charts
                    continue;
                };
                if u.len() <= 1 {
                    continue;
                }
                let (roots, irr) = upoly::rational_roots(&u);
                unresolved += irr;
                for r in roots {
                    let mut s = sol.clone();
                    s[var] = Some(r);
                    next.push(s);
                }
            }
            partial = next;
        }
        for sol in partial {
            let coords: Vec<Rat> = (0..=n).map(|v| sol[v].clone().unwrap_or_else(Rat::zero)).collect();
            if let Some(p) = ProjPoint::new(coords) {
                points.push(p);
            }
        }
    }
    points.sort();
    points.dedup();
    Ok(ZeroLocus { points, unresolved })
}

fn substitute_known(g: &MPoly, sol: &[Option<Rat>]) -> MPoly {
    let mut a = crate::poly::Assignment::new();
    for (v, val) in sol.iter().enumerate() {
        if let Some(r) = val {
            a.set_rat(v, r.clone());
        }
    }
    g.evaluate(&a)
}

/// Coefficient list of a polynomial in the single variable `var`; empty for
/// the zero polynomial.
fn univariate_coeffs(p: &MPoly, var: usize) -> Vec<Rat> {
    if p.is_zero() {
        return vec![];
    }
    let mut out = vec![Rat::zero(); p.degree_in(var) as usize + 1];
    for (m, c) in p.terms() {
        debug_assert_eq!(m.degree(), m.exp(var));
        out[m.exp(var) as usize] += c;
    }
    upoly::trim(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn ring() -> Arc<RingSpec> {
        RingSpec::with_default_pairs(&["u", "v", "w"]).unwrap()
    }

    fn ps(list: &[&str]) -> Vec<MPoly> {
        list.iter().map(|s| parse_poly(s, &ring()).unwrap()).collect()
    }

    fn gb(list: &[&str]) -> GroebnerBasis {
        let r = ring();
        buchberger(&ps(list), &TermOrder::degrevlex(&r)).unwrap()
    }

    #[test]
    fn monomial_ideals_are_their_own_basis() {
        assert_eq!(gb(&["u", "v"]).generators(), ps(&["v", "u"]).as_slice());
        let b = gb(&["u*w", "v^2", "w^2"]);
        assert_eq!(b.generators().len(), 3);
        for g in ps(&["u*w", "v^2", "w^2"]) {
            assert!(b.generators().contains(&g));
        }
    }

    #[test]
    fn redundant_generators_are_reduced_away() {
        let b = gb(&["u", "v", "u^2", "v^2", "w^2"]);
        let mut got: Vec<String> = b.generators().iter().map(|g| g.to_string()).collect();
        got.sort();
        assert_eq!(got, vec!["u", "v", "w^2"]);
    }

    #[test]
    fn s_polynomials_reduce_to_zero() {
        let b = gb(&["u^2 - v*w", "u*v - w^2", "v^3 - u*w^2 + w^3"]);
        for i in 0..b.generators().len() {
            for j in 0..i {
                assert!(b.s_poly_remainder(i, j).is_zero());
            }
        }
    }

    #[test]
    fn normal_form_examples() {
        let b = gb(&["u", "v"]);
        assert!(normal_form(&ps(&["u^2"])[0], &b).is_zero());
        assert_eq!(normal_form(&ps(&["w"])[0], &b), ps(&["w"])[0]);
        let b = gb(&["u"]);
        assert_eq!(normal_form(&ps(&["u*v + w^2"])[0], &b), ps(&["w^2"])[0]);
        let b = gb(&["2*u - 3*v"]);
        // u ≡ 3/2 v
        assert_eq!(normal_form(&ps(&["-4*u^2 + w"])[0], &b), ps(&["-9*v^2 + w"])[0]);
    }

    #[test]
    fn codimension_examples() {
        assert_eq!(projective_codimension(&ps(&["u", "v"])).unwrap(), 2);
        assert_eq!(projective_codimension(&ps(&["u", "v", "u^2", "v^2", "w^2"])).unwrap(), 3);
        assert_eq!(projective_codimension(&ps(&["u*v"])).unwrap(), 1);
        assert!(matches!(
            projective_codimension(&ps(&["u + v^2"])),
            Err(GroebnerError::NotHomogeneous(_))
        ));
        assert!(matches!(
            projective_codimension(&ps(&["u*x0"])),
            Err(GroebnerError::OutsideSubring(_))
        ));
    }

    #[test]
    fn ideal_power_examples() {
        let sq = ideal_power(&ps(&["u", "v"]), 2).unwrap();
        assert_eq!(sq, ps(&["u^2", "u*v", "v^2"]));
        assert_eq!(ideal_power(&ps(&["u", "v"]), 1).unwrap(), ps(&["u", "v"]));
        assert!(matches!(ideal_power(&ps(&["u"]), 0), Err(GroebnerError::ZeroExponent)));
    }

    #[test]
    fn membership_in_power_of_mixed_ideal() {
        let r = ring();
        let g = ps(&["u", "v", "y2*v^2 - x2*w^2"]);
        let sq = buchberger(&ideal_power(&g, 2).unwrap(), &TermOrder::degrevlex(&r)).unwrap();
        let cube = buchberger(&ideal_power(&g, 3).unwrap(), &TermOrder::degrevlex(&r)).unwrap();
        let l1 = ps(&["x1*v^2 - y1*u^2"])[0].clone();
        assert!(sq.contains(&l1));
        assert!(!cube.contains(&l1));
    }

    #[test]
    fn zero_locus_examples() {
        let z = rational_zero_locus(&ps(&["u", "v"])).unwrap();
        assert_eq!(z.points, vec![ProjPoint::from_ints(&[0, 0, 1]).unwrap()]);
        let z = rational_zero_locus(&ps(&["u*w", "v^2", "w^2"])).unwrap();
        assert_eq!(z.points, vec![ProjPoint::from_ints(&[1, 0, 0]).unwrap()]);
        let z = rational_zero_locus(&ps(&["u - w", "v^2 - 2*w^2"])).unwrap();
        assert!(z.points.is_empty());
        assert_eq!(z.unresolved, 2);
        assert!(matches!(
            rational_zero_locus(&ps(&["u"])),
            Err(GroebnerError::NotZeroDimensional { .. })
        ));
    }

    #[test]
    fn proj_point_display() {
        let p = ProjPoint::from_ints(&[2, 4, 6]).unwrap();
        assert_eq!(p.to_string(), "(1:2:3)");
        assert_eq!(p, ProjPoint::from_ints(&[1, 2, 3]).unwrap());
        assert_eq!(ProjPoint::from_ints(&[-1, -1, 1]).unwrap().to_string(), "(1:1:-1)");
        assert!(ProjPoint::from_ints(&[0, 0, 0]).is_none());
    }
}
