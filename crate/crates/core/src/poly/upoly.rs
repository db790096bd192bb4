//! Dense univariate helpers over ℚ (coefficients lowest degree first).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rat;

pub fn trim(p: &mut Vec<Rat>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

pub fn eval(p: &[Rat], x: &Rat) -> Rat {
    p.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
}

pub fn derivative(p: &[Rat]) -> Vec<Rat> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Rat::from_integer(BigInt::from(i)))
        .collect()
}

/// Remainder of `a` modulo nonzero `b`.
pub fn rem(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db {
        let dr = r.len() - 1;
        let q = &r[dr] / lb;
        for (j, bj) in b.iter().enumerate() {
            r[dr - db + j] -= &q * bj;
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn monic(mut p: Vec<Rat>) -> Vec<Rat> {
    if let Some(l) = p.last().cloned() {
        for c in p.iter_mut() {
            *c /= &l;
        }
    }
    p
}

pub fn gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = monic(r);
    }
    monic(x)
}

pub fn div_exact(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    if r.len() <= db {
        return vec![];
    }
    let mut q = vec![Rat::zero(); r.len() - db];
    while r.len() > db {
        let dr = r.len() - 1;
        let c = &r[dr] / &b[db];
        for (j, bj) in b.iter().enumerate() {
            r[dr - db + j] -= &c * bj;
        }
        q[dr - db] = c;
        r.pop();
    }
    q
}

/// Squarefree part, monic.
pub fn squarefree_part(p: &[Rat]) -> Vec<Rat> {
    let g = gcd(p, &derivative(p));
    if g.len() <= 1 {
        monic(p.to_vec())
    } else {
        monic(div_exact(p, &g))
    }
}

fn sign_changes(seq: &[Vec<Rat>], x: &Rat) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for p in seq {
        let v = eval(p, x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

fn sturm_sequence(p: &[Rat]) -> Vec<Vec<Rat>> {
    let mut seq = vec![p.to_vec(), derivative(p)];
    loop {
        let n = seq.len();
        if seq[n - 1].is_empty() {
            seq.pop();
            break;
        }
        let r: Vec<Rat> = rem(&seq[n - 2], &seq[n - 1]).into_iter().map(|c| -c).collect();
        if r.is_empty() {
            break;
        }
        seq.push(r);
    }
    seq
}

/// Rational roots of `p` (distinct, ascending), and the number of distinct
/// non-rational complex roots.
///
/// Real roots are isolated with a Sturm sequence and bisected until the
/// interval is narrower than `1/|a_n|`; a rational root `r` of a primitive
/// integer polynomial has `a_n*r` integral, so at most one candidate remains.
pub fn rational_roots(p: &[Rat]) -> (Vec<Rat>, usize) {
    let mut p = p.to_vec();
    trim(&mut p);
    if p.len() <= 1 {
        return (vec![], 0);
    }
    let sf = squarefree_part(&p);
    let degree = sf.len() - 1;
    // integer primitive form to get the leading coefficient bound
    let den_lcm = sf.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = sf.iter().map(|c| (c * Rat::from_integer(den_lcm.clone())).to_integer()).collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let lead = (ints.last().unwrap() / &content).abs();
    let lead_rat = Rat::from_integer(lead.clone());

    let bound = Rat::one()
        + sf[..degree].iter().map(|c| c.abs()).fold(Rat::zero(), |a, b| if b > a { b } else { a });
    let seq = sturm_sequence(&sf);
    let mut roots = Vec::new();
    let width_target = Rat::new(BigInt::one(), lead.clone());
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((lo, hi)) = stack.pop() {
        let count = sign_changes(&seq, &lo) - sign_changes(&seq, &hi);
        if count == 0 {
            continue;
        }
        if count == 1 && &hi - &lo < width_target {
            let a = (&lo * &lead_rat).floor().to_integer();
            let b = (&hi * &lead_rat).ceil().to_integer();
            let mut k = a;
            while k <= b {
                let cand = Rat::new(k.clone(), lead.clone());
                if cand > lo && cand <= hi && eval(&sf, &cand).is_zero() {
                    roots.push(cand);
                }
                k += 1;
            }
            continue;
        }
        let mid = (&lo + &hi) / Rat::from_integer(BigInt::from(2));
        if eval(&sf, &mid).is_zero() {
            roots.push(mid.clone());
        }
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    roots.sort();
    roots.dedup();
    let irrational = degree - roots.len();
    (roots, irrational)
}
