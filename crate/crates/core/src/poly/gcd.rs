use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{MPoly, Monomial, PolyError, Rat};

/// Greatest common divisor, normalized primitive with positive leading
/// coefficient.
pub fn multivariate_gcd(a: &MPoly, b: &MPoly) -> Result<MPoly, PolyError> {
    if !a.same_ring(b) {
        return Err(PolyError::RingMismatch);
    }
    if a.is_zero() && b.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    Ok(gcd(a, b))
}

pub(crate) fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.normalized();
    }
    if b.is_zero() {
        return a.normalized();
    }
    let one = MPoly::one(a.ring());
    if a.is_constant() || b.is_constant() {
        return one;
    }
    if a.len() == 1 || b.len() == 1 {
        return monomial_gcd(a, b);
    }
    let nvars = a.ring().nvars();
    // a variable present in only one argument can be eliminated through the content
    for v in 0..nvars {
        match (a.uses_var(v), b.uses_var(v)) {
            (true, false) => return gcd(&content_in(a, v), b),
            (false, true) => return gcd(a, &content_in(b, v)),
            _ => {}
        }
    }
    let Some(v) = (0..nvars)
        .filter(|&v| a.uses_var(v))
        .min_by_key(|&v| a.degree_in(v).max(b.degree_in(v)))
    else {
        return one;
    };

    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let g_content = gcd(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");

    let (mut f, mut g) = (pa.to_univariate(v), pb.to_univariate(v));
    if f.len() < g.len() {
        std::mem::swap(&mut f, &mut g);
    }
    let g_prim = loop {
        let r = pseudo_remainder(&f, &g);
        if r.iter().all(MPoly::is_zero) {
            break MPoly::from_univariate(a.ring(), v, &g);
        }
        if r.len() == 1 {
            break one.clone();
        }
        let rp = primitive_in(&MPoly::from_univariate(a.ring(), v, &r), v);
        f = g;
        g = rp.to_univariate(v);
    };
    let g_prim = primitive_in(&g_prim, v);
    (&g_content * &g_prim).normalized()
}

fn monomial_gcd(a: &MPoly, b: &MPoly) -> MPoly {
    let mut acc: Option<Monomial> = None;
    for (m, _) in a.terms().chain(b.terms()) {
        acc = Some(match acc {
            None => m.clone(),
            Some(g) => g.gcd(m),
        });
    }
    MPoly::term(a.ring(), acc.unwrap(), Rat::one())
}

/// Pseudo-remainder of univariate coefficient vectors (lowest degree first),
/// trimmed of leading zeros. Requires `f.len() >= g.len()`.
fn pseudo_remainder(f: &[MPoly], g: &[MPoly]) -> Vec<MPoly> {
    let k = g.len() - 1;
    let lc = &g[k];
    let mut r: Vec<MPoly> = f.to_vec();
    trim(&mut r);
    while r.len() > k && !r.is_empty() {
        let deg = r.len() - 1;
        let lr = r[deg].clone();
        let shift = deg - k;
        for c in r.iter_mut() {
            *c = &*c * lc;
        }
        for (j, gj) in g.iter().enumerate() {
            if !gj.is_zero() {
                r[j + shift] = &r[j + shift] - &(&lr * gj);
            }
        }
        debug_assert!(r[deg].is_zero());
        trim(&mut r);
    }
    if r.is_empty() {
        r.push(MPoly::zero(lc.ring()));
    }
    r
}

fn trim(v: &mut Vec<MPoly>) {
    while v.last().is_some_and(MPoly::is_zero) {
        v.pop();
    }
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `var`.
pub fn content_in(p: &MPoly, var: usize) -> MPoly {
    let coeffs = p.to_univariate(var);
    let mut nonzero: Vec<&MPoly> = coeffs.iter().filter(|c| !c.is_zero()).collect();
    if nonzero.is_empty() {
        return MPoly::zero(p.ring());
    }
    nonzero.sort_by_key(|c| c.len());
    let mut acc = nonzero[0].normalized();
    for c in &nonzero[1..] {
        if acc.is_constant() {
            break;
        }
        acc = gcd(&acc, c);
    }
    if acc.is_constant() {
        MPoly::one(p.ring())
    } else {
        acc
    }
}

/// `p` divided by its content in `var`, normalized.
pub fn primitive_in(p: &MPoly, var: usize) -> MPoly {
    if p.is_zero() {
        return p.clone();
    }
    let c = content_in(p, var);
    p.div_exact(&c).expect("content divides").normalized()
}

/// Squarefree decomposition: `input = unit * Π part^multiplicity`.
#[derive(Clone, Debug)]
pub struct SquarefreeDecomp {
    pub unit: Rat,
    /// Pairwise coprime squarefree parts, sorted by multiplicity.
    pub parts: Vec<(MPoly, u32)>,
}

impl SquarefreeDecomp {
    pub fn reconstruct(&self, ring: &std::sync::Arc<super::RingSpec>) -> MPoly {
        let mut acc = MPoly::constant(ring, self.unit.clone());
        for (p, m) in &self.parts {
            acc = &acc * &p.pow(*m);
        }
        acc
    }
}

/// Yun decomposition iterated over the variables in declared order.
pub fn squarefree_decompose(p: &MPoly) -> Result<SquarefreeDecomp, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    let mut by_mult: BTreeMap<u32, MPoly> = BTreeMap::new();
    sqf_rec(p, &mut by_mult);
    let parts: Vec<(MPoly, u32)> = by_mult
        .into_iter()
        .map(|(m, f)| (f.normalized(), m))
        .filter(|(f, _)| !f.is_constant())
        .collect();
    let mut prod = MPoly::one(p.ring());
    for (f, m) in &parts {
        prod = &prod * &f.pow(*m);
    }
    let unit = p.unit_ratio(&prod).expect("squarefree parts reconstruct the input");
    Ok(SquarefreeDecomp { unit, parts })
}

fn sqf_rec(p: &MPoly, out: &mut BTreeMap<u32, MPoly>) {
    if p.is_constant() {
        return;
    }
    let v = (0..p.ring().nvars()).find(|&v| p.uses_var(v)).unwrap();
    let c = content_in(p, v);
    let pp = p.div_exact(&c).expect("content divides");
    yun(&pp, v, out);
    sqf_rec(&c, out);
}

fn merge(out: &mut BTreeMap<u32, MPoly>, f: MPoly, m: u32) {
    if f.is_constant() {
        return;
    }
    out.entry(m)
        .and_modify(|acc| *acc = &*acc * &f)
        .or_insert(f);
}

fn yun(f: &MPoly, v: usize, out: &mut BTreeMap<u32, MPoly>) {
    let fp = f.derivative(v);
    let a0 = gcd(f, &fp);
    let mut b = f.div_exact(&a0).expect("gcd divides");
    let c = fp.div_exact(&a0).expect("gcd divides");
    let mut d = &c - &b.derivative(v);
    let mut i = 1;
    while !b.is_constant() {
        let a = gcd(&b, &d);
        b = b.div_exact(&a).expect("gcd divides");
        let c = d.div_exact(&a).expect("gcd divides");
        d = &c - &b.derivative(v);
        merge(out, a, i);
        i += 1;
    }
}

/// `q` with `q^k = p` up to a rational unit.
pub fn kth_root(p: &MPoly, k: u32) -> Result<MPoly, PolyError> {
    if k == 0 {
        return Err(PolyError::NotAPower { k });
    }
    if p.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    if k == 1 {
        return Ok(p.normalized());
    }
    let dec = squarefree_decompose(p)?;
    if dec.parts.iter().any(|(_, m)| m % k != 0) {
        return Err(PolyError::NotAPower { k });
    }
    let mut q = MPoly::one(p.ring());
    for (f, m) in &dec.parts {
        q = &q * &f.pow(m / k);
    }
    if !q.pow(k).eq_up_to_unit(p) {
        return Err(PolyError::NotAPower { k });
    }
    Ok(q.normalized())
}

/// Largest `e` with `f^e | p`, together with `p / f^e`.
pub fn trial_divide(p: &MPoly, f: &MPoly) -> (u32, MPoly) {
    let mut e = 0;
    let mut cur = p.clone();
    if f.is_constant() || p.is_zero() {
        return (0, cur);
    }
    while let Some(q) = cur.div_exact(f) {
        cur = q;
        e += 1;
    }
    (e, cur)
}

#[allow(dead_code)]
fn is_unit(p: &MPoly) -> bool {
    p.as_constant().is_some_and(|c| !c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, RingSpec};
    use std::sync::Arc;

    fn ring() -> Arc<RingSpec> {
        RingSpec::with_default_pairs(&["u", "v", "w"]).unwrap()
    }

    fn xy_ring() -> Arc<RingSpec> {
        RingSpec::with_default_pairs(&["x", "y"]).unwrap()
    }

    fn p(s: &str) -> MPoly {
        parse_poly(s, &ring()).unwrap()
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(multivariate_gcd(&p("u^2*v"), &p("u*v^2")).unwrap(), p("u*v"));
        assert_eq!(multivariate_gcd(&p("u"), &p("v")).unwrap(), p("1"));
        let h = p("x0^2*y1 - x1*y0^2");
        let g = multivariate_gcd(&(&h * &p("x2")), &(&h * &p("y2"))).unwrap();
        assert_eq!(g, h.normalized());
        assert!(matches!(multivariate_gcd(&p("0"), &p("0")), Err(PolyError::ZeroInput)));
    }

    #[test]
    fn gcd_with_nontrivial_common_factor() {
        let a = p("(u + v*w - 3)*(u^2 - w)*(v + 1)");
        let b = p("(u + v*w - 3)*(u - w^2)*(v + 1)^2");
        let g = multivariate_gcd(&a, &b).unwrap();
        assert!(g.eq_up_to_unit(&p("(u + v*w - 3)*(v + 1)")));
    }

    #[test]
    fn squarefree_examples() {
        let r = xy_ring();
        let f = parse_poly("(x-y)^2*(x+y)", &r).unwrap();
        let d = squarefree_decompose(&f).unwrap();
        assert_eq!(d.parts.len(), 2);
        assert_eq!(d.parts[0], (parse_poly("x+y", &r).unwrap(), 1));
        assert_eq!(d.parts[1], (parse_poly("x-y", &r).unwrap(), 2));

        let g = parse_poly("x+y", &r).unwrap();
        let d = squarefree_decompose(&g).unwrap();
        assert_eq!(d.parts, vec![(g.clone(), 1)]);

        let h = p("x0^2*y1 - x1*y0^2");
        let f = &p("x2^2") * &h.pow(2);
        let d = squarefree_decompose(&f).unwrap();
        assert_eq!(d.parts.len(), 1);
        assert_eq!(d.parts[0].1, 2);
        assert!(d.parts[0].0.eq_up_to_unit(&(&p("x2") * &h)));
        assert!(d.reconstruct(&ring()) == f);
    }

    #[test]
    fn kth_root_examples() {
        let h = p("x0^2*y1 - x1*y0^2");
        assert_eq!(kth_root(&h.pow(2), 2).unwrap(), h.normalized());
        let f = p("3*u*v + w^2");
        assert_eq!(kth_root(&f, 1).unwrap(), f.normalized());
        assert!(matches!(kth_root(&h, 3), Err(PolyError::NotAPower { k: 3 })));
    }

    #[test]
    fn trial_division_counts_exponent() {
        let f = &p("x2^2") * &p("x0 - y0");
        let (e, q) = trial_divide(&f, &p("x2"));
        assert_eq!(e, 2);
        assert_eq!(q, p("x0 - y0"));
    }
}
