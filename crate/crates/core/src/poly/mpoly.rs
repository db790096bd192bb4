use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{Monomial, PolyError, RingSpec};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Exact multivariate polynomial over ℚ in the variables of a [`RingSpec`].
///
/// Terms are kept in a map ordered graded-lexicographically; zero
/// coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    ring: Arc<RingSpec>,
    terms: BTreeMap<Monomial, Rat>,
}

/// Component degrees of a polynomial: `None` marks a non-homogeneous block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiDeg {
    pub t_deg: Option<u32>,
    pub pair_degs: Vec<Option<u32>>,
}

impl MultiDeg {
    pub fn is_homogeneous(&self) -> bool {
        self.t_deg.is_some() && self.pair_degs.iter().all(Option::is_some)
    }
}

#[derive(Clone, Debug)]
pub enum Value {
    Rat(Rat),
    Poly(MPoly),
}

/// Partial substitution `var -> value` used by [`MPoly::evaluate`].
#[derive(Clone, Debug, Default)]
pub struct Assignment {
    values: BTreeMap<usize, Value>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rat(mut self, var: usize, value: Rat) -> Self {
        self.values.insert(var, Value::Rat(value));
        self
    }

    pub fn poly(mut self, var: usize, value: MPoly) -> Self {
        self.values.insert(var, Value::Poly(value));
        self
    }

    pub fn set_rat(&mut self, var: usize, value: Rat) {
        self.values.insert(var, Value::Rat(value));
    }

    pub fn set_poly(&mut self, var: usize, value: MPoly) {
        self.values.insert(var, Value::Poly(value));
    }

    pub fn get(&self, var: usize) -> Option<&Value> {
        self.values.get(&var)
    }

    fn all_rational(&self) -> bool {
        self.values.values().all(|v| matches!(v, Value::Rat(_)))
    }
}

impl MPoly {
    pub fn zero(ring: &Arc<RingSpec>) -> Self {
        Self { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ring: &Arc<RingSpec>) -> Self {
        Self::constant(ring, Rat::one())
    }

    pub fn constant(ring: &Arc<RingSpec>, c: Rat) -> Self {
        let mut p = Self::zero(ring);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(ring.nvars()), c);
        }
        p
    }

    pub fn from_int(ring: &Arc<RingSpec>, c: i64) -> Self {
        Self::constant(ring, rat(c))
    }

    pub fn var(ring: &Arc<RingSpec>, var: usize) -> Self {
        Self::term(ring, Monomial::var(ring.nvars(), var, 1), Rat::one())
    }

    pub fn term(ring: &Arc<RingSpec>, m: Monomial, c: Rat) -> Self {
        debug_assert_eq!(m.nvars(), ring.nvars());
        let mut p = Self::zero(ring);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(ring: &Arc<RingSpec>, terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn same_ring(&self, other: &MPoly) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring
    }

    fn check_ring(&self, other: &MPoly) -> Result<(), PolyError> {
        if self.same_ring(other) {
            Ok(())
        } else {
            Err(PolyError::RingMismatch)
        }
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn as_constant(&self) -> Option<Rat> {
        if self.is_zero() {
            Some(Rat::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    /// Graded-lex leading term.
    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.last_key_value()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(var)).max().unwrap_or(0)
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exp(var) > 0)
    }

    pub fn vars_used(&self) -> Vec<usize> {
        (0..self.ring.nvars()).filter(|&v| self.uses_var(v)).collect()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn sub_term(&mut self, m: Monomial, c: &Rat) {
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(-c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() -= c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(&self.ring);
        }
        MPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(&self.ring);
        }
        MPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn checked_add(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        self.check_ring(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        self.check_ring(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        self.check_ring(other)?;
        Ok(self * other)
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut result = MPoly::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derivative(&self, var: usize) -> MPoly {
        let mut out = MPoly::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.exp(var);
            if e > 0 {
                out.terms.insert(m.with_exp(var, e - 1), c * Rat::from_integer(BigInt::from(e)));
            }
        }
        out
    }

    /// Substitutes the assigned variables and re-canonicalizes.
    pub fn evaluate(&self, assignment: &Assignment) -> MPoly {
        if assignment.all_rational() {
            return self.evaluate_rational(assignment);
        }
        let mut powers: BTreeMap<(usize, u32), MPoly> = BTreeMap::new();
        let mut out = MPoly::zero(&self.ring);
        for (m, c) in &self.terms {
            let mut residual = m.exps().to_vec();
            let mut acc = MPoly::constant(&self.ring, c.clone());
            for (var, e) in m.exps().iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                let Some(value) = assignment.get(var) else { continue };
                residual[var] = 0;
                let factor = powers.entry((var, *e)).or_insert_with(|| match value {
                    Value::Rat(r) => MPoly::constant(&self.ring, num_traits::pow(r.clone(), *e as usize)),
                    Value::Poly(p) => p.pow(*e),
                });
                acc = &acc * &*factor;
            }
            let mono = Monomial::from_exps(residual);
            for (k, a) in acc.terms {
                out.add_term(k.mul(&mono), a);
            }
        }
        out
    }

    fn evaluate_rational(&self, assignment: &Assignment) -> MPoly {
        let mut out = MPoly::zero(&self.ring);
        for (m, c) in &self.terms {
            let mut residual = m.exps().to_vec();
            let mut coeff = c.clone();
            for (var, e) in m.exps().iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                if let Some(Value::Rat(r)) = assignment.get(var) {
                    residual[var] = 0;
                    coeff *= num_traits::pow(r.clone(), *e as usize);
                }
            }
            out.add_term(Monomial::from_exps(residual), coeff);
        }
        out
    }

    /// Evaluates at a full rational point of all variables.
    pub fn eval_all(&self, point: &[Rat]) -> Rat {
        debug_assert_eq!(point.len(), self.ring.nvars());
        let mut total = Rat::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (var, e) in m.exps().iter().enumerate() {
                if *e > 0 {
                    v *= num_traits::pow(point[var].clone(), *e as usize);
                }
            }
            total += v;
        }
        total
    }

    /// Multivariate division with graded-lex leading terms: `self = q*d + r`.
    pub fn div_rem(&self, d: &MPoly) -> (MPoly, MPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let (lm, lc) = d.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut p = self.clone();
        let mut q = MPoly::zero(&self.ring);
        let mut r = MPoly::zero(&self.ring);
        while let Some((m, c)) = p.terms.pop_last() {
            if lm.divides(&m) {
                let qm = lm.quotient_of(&m);
                let qc = &c / &lc;
                for (dm, dc) in d.terms.iter().rev().skip(1) {
                    p.sub_term(dm.mul(&qm), &(dc * &qc));
                }
                q.add_term(qm, qc);
            } else {
                r.terms.insert(m, c);
            }
        }
        (q, r)
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(MPoly::zero(&self.ring));
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (lm, lc) = d.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut p = self.clone();
        let mut q = MPoly::zero(&self.ring);
        while let Some((m, c)) = p.terms.pop_last() {
            if !lm.divides(&m) {
                return None;
            }
            let qm = lm.quotient_of(&m);
            let qc = &c / &lc;
            for (dm, dc) in d.terms.iter().rev().skip(1) {
                p.sub_term(dm.mul(&qm), &(dc * &qc));
            }
            q.terms.insert(qm, qc);
        }
        Some(q)
    }

    /// Positive rational `c` with `self / c` having coprime integer coefficients.
    pub fn content(&self) -> Rat {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            Rat::one()
        } else {
            Rat::new(num, den)
        }
    }

    /// Canonical representative up to a rational unit: primitive integer
    /// coefficients with positive graded-lex leading coefficient.
    pub fn normalized(&self) -> MPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.leading().unwrap().1.is_negative() {
            c = -c;
        }
        self.scale(&c.recip())
    }

    /// Rational `c` with `self = c * other`, when one exists.
    pub fn unit_ratio(&self, other: &MPoly) -> Option<Rat> {
        if self.len() != other.len() || !self.same_ring(other) {
            return None;
        }
        if self.is_zero() {
            return Some(Rat::one());
        }
        let mut ratio: Option<Rat> = None;
        for ((m1, c1), (m2, c2)) in self.terms.iter().zip(&other.terms) {
            if m1 != m2 {
                return None;
            }
            let r = c1 / c2;
            match &ratio {
                None => ratio = Some(r),
                Some(x) if *x != r => return None,
                _ => {}
            }
        }
        ratio
    }

    pub fn eq_up_to_unit(&self, other: &MPoly) -> bool {
        self.unit_ratio(other).is_some()
    }

    /// Coefficients as a univariate polynomial in `var`, lowest degree first.
    pub fn to_univariate(&self, var: usize) -> Vec<MPoly> {
        let deg = self.degree_in(var) as usize;
        let mut coeffs = vec![MPoly::zero(&self.ring); deg + 1];
        for (m, c) in &self.terms {
            let e = m.exp(var) as usize;
            coeffs[e].terms.insert(m.with_exp(var, 0), c.clone());
        }
        coeffs
    }

    pub fn from_univariate(ring: &Arc<RingSpec>, var: usize, coeffs: &[MPoly]) -> MPoly {
        let mut out = MPoly::zero(ring);
        for (e, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                out.terms.insert(m.with_exp(var, m.exp(var) + e as u32), a.clone());
            }
        }
        out
    }

    /// Degree in the block of variables `vars` when homogeneous there.
    pub fn block_degree(&self, vars: &[usize]) -> Option<u32> {
        let mut degs = self.terms.keys().map(|m| m.degree_in(vars.iter().copied()));
        match degs.next() {
            None => Some(0),
            Some(d) => degs.all(|e| e == d).then_some(d),
        }
    }

    pub fn max_block_degree(&self, vars: &[usize]) -> u32 {
        self.terms.keys().map(|m| m.degree_in(vars.iter().copied())).max().unwrap_or(0)
    }

    pub fn t_degree(&self) -> Option<u32> {
        let vars: Vec<usize> = (0..self.ring.t_count()).collect();
        self.block_degree(&vars)
    }

    pub fn pair_degree(&self, pair: usize) -> Option<u32> {
        self.block_degree(&[self.ring.x_index(pair), self.ring.y_index(pair)])
    }

    pub fn multidegree(&self) -> MultiDeg {
        MultiDeg {
            t_deg: self.t_degree(),
            pair_degs: (0..self.ring.pair_count()).map(|i| self.pair_degree(i)).collect(),
        }
    }

    pub fn involves_t(&self) -> bool {
        (0..self.ring.t_count()).any(|v| self.uses_var(v))
    }

    pub fn involves_pairs(&self) -> bool {
        (self.ring.t_count()..self.ring.nvars()).any(|v| self.uses_var(v))
    }

    /// Re-expresses the polynomial in `target`, sending variable `v` to
    /// `var_map[v]`. Fails if a used variable has no image.
    pub fn rename_into(&self, target: &Arc<RingSpec>, var_map: &[Option<usize>]) -> Result<MPoly, PolyError> {
        let mut out = MPoly::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; target.nvars()];
            for (v, e) in m.exps().iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                match var_map.get(v).copied().flatten() {
                    Some(w) => exps[w] += e,
                    None => {
                        return Err(PolyError::UnknownVariable(self.ring.var_name(v).to_string()));
                    }
                }
            }
            out.add_term(Monomial::from_exps(exps), c.clone());
        }
        Ok(out)
    }
}

impl Add for &MPoly {
    type Output = MPoly;

    fn add(self, rhs: &MPoly) -> MPoly {
        assert!(self.same_ring(rhs), "ring mismatch");
        let (big, small) = if self.len() >= rhs.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;

    fn sub(self, rhs: &MPoly) -> MPoly {
        assert!(self.same_ring(rhs), "ring mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.sub_term(m.clone(), c);
        }
        out
    }
}

impl Mul for &MPoly {
    type Output = MPoly;

    fn mul(self, rhs: &MPoly) -> MPoly {
        assert!(self.same_ring(rhs), "ring mismatch");
        if self.is_zero() || rhs.is_zero() {
            return MPoly::zero(&self.ring);
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        let mut out = MPoly::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;

    fn neg(self) -> MPoly {
        MPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for MPoly {
            type Output = MPoly;
            fn $method(self, rhs: MPoly) -> MPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&MPoly> for MPoly {
            type Output = MPoly;
            fn $method(self, rhs: &MPoly) -> MPoly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MPoly {
    type Output = MPoly;

    fn neg(self) -> MPoly {
        -&self
    }
}

fn fmt_monomial(f: &mut fmt::Formatter<'_>, ring: &RingSpec, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (v, e) in m.exps().iter().enumerate() {
        if *e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        f.write_str(ring.var_name(v))?;
        if *e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                fmt_monomial(f, &self.ring, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({self})")
    }
}
