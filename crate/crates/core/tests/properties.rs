use std::sync::Arc;

use kresolve_core::detcx::{det_cayley, det_interpolate, DetOptions};
use kresolve_core::galedual::{column_transform, gale_linear_forms, gale_map, GaleMatrix};
use kresolve_core::groebner::{buchberger, projective_codimension, rational_zero_locus, ProjPoint, TermOrder};
use kresolve_core::koszul::{koszul_strand, linear_forms, MapSpec, Mode};
use kresolve_core::poly::{kth_root, multivariate_gcd, squarefree_decompose, MPoly, Monomial, Rat, RingSpec};
use num_traits::Zero;
use proptest::prelude::*;

fn ring3() -> Arc<RingSpec> {
    RingSpec::with_default_pairs(&["u", "v", "w"]).unwrap()
}

fn ring2() -> Arc<RingSpec> {
    RingSpec::with_default_pairs(&["u", "v"]).unwrap()
}

fn build(ring: &Arc<RingSpec>, terms: &[(Vec<u32>, i64)]) -> MPoly {
    let mut p = MPoly::zero(ring);
    for (e, c) in terms {
        let mut exps = e.clone();
        exps.resize(ring.nvars(), 0);
        p.add_term(Monomial::from_exps(exps), Rat::from_integer((*c).into()));
    }
    p
}

type Terms = Vec<(Vec<u32>, i64)>;

fn any_poly(nt: usize, max_terms: usize) -> impl Strategy<Value = Terms> {
    prop::collection::vec((prop::collection::vec(0u32..3, nt), -4i64..=4), 1..=max_terms)
}

/// Homogeneous polynomial of degree `d` in `nt` variables.
fn homogeneous(nt: usize, d: u32, max_terms: usize) -> impl Strategy<Value = Terms> {
    prop::collection::vec((prop::collection::vec(0u32..=d, nt - 1), -4i64..=4), 1..=max_terms).prop_map(
        move |raw| {
            raw.into_iter()
                .filter_map(|(mut e, c)| {
                    let s: u32 = e.iter().sum();
                    (s <= d).then(|| {
                        e.push(d - s);
                        (e, c)
                    })
                })
                .collect()
        },
    )
}

fn nonzero(p: MPoly) -> Option<MPoly> {
    (!p.is_zero()).then_some(p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ring_axioms(a in any_poly(3, 4), b in any_poly(3, 4), c in any_poly(3, 4)) {
        let r = ring3();
        let (a, b, c) = (build(&r, &a), build(&r, &b), build(&r, &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        if !b.is_zero() {
            prop_assert_eq!((&a * &b).div_exact(&b), Some(a.clone()));
        }
    }

    #[test]
    fn gcd_is_multiplicative(a in any_poly(3, 3), b in any_poly(3, 3), c in any_poly(3, 3)) {
        let r = ring3();
        let (Some(a), Some(b), Some(c)) = (nonzero(build(&r, &a)), nonzero(build(&r, &b)), nonzero(build(&r, &c))) else {
            return Ok(());
        };
        let g = multivariate_gcd(&a, &b).unwrap();
        let gc = multivariate_gcd(&(&a * &c), &(&b * &c)).unwrap();
        prop_assert!(gc.eq_up_to_unit(&(&g * &c)), "gcd(ac, bc) = {} vs c*gcd(a,b) = {}", gc, &g * &c);
        prop_assert!(a.div_exact(&g).is_some() && b.div_exact(&g).is_some());
    }

    #[test]
    fn squarefree_reconstructs(a in any_poly(3, 3), b in any_poly(3, 2), k in 1u32..=3) {
        let r = ring3();
        let (Some(a), Some(b)) = (nonzero(build(&r, &a)), nonzero(build(&r, &b))) else { return Ok(()) };
        let p = &a * &b.pow(k);
        let dec = squarefree_decompose(&p).unwrap();
        prop_assert_eq!(dec.reconstruct(&r), p.clone());
        for (i, (f, _)) in dec.parts.iter().enumerate() {
            for (g, _) in &dec.parts[i + 1..] {
                prop_assert!(multivariate_gcd(f, g).unwrap().is_constant());
            }
        }
    }

    #[test]
    fn kth_root_inverts_power(a in any_poly(3, 3), k in 1u32..=4) {
        let r = ring3();
        let Some(a) = nonzero(build(&r, &a)) else { return Ok(()) };
        let root = kth_root(&a.pow(k), k).unwrap();
        prop_assert!(root.eq_up_to_unit(&a));
    }

    #[test]
    fn degrees_add_under_products(a in homogeneous(3, 2, 4), b in homogeneous(3, 3, 4)) {
        let r = ring3();
        let (Some(a), Some(b)) = (nonzero(build(&r, &a)), nonzero(build(&r, &b))) else { return Ok(()) };
        let t = [0, 1, 2];
        prop_assert_eq!((&a * &b).block_degree(&t), Some(5));
        let x0 = MPoly::var(&r, r.x_index(0));
        let y1 = MPoly::var(&r, r.y_index(1));
        let prod = &(&a * &x0) * &(&b * &y1.pow(2));
        let md = prod.multidegree();
        prop_assert_eq!(md.t_deg, Some(5));
        prop_assert_eq!(md.pair_degs, vec![Some(1), Some(2), Some(0)]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn buchberger_output_is_groebner(
        g1 in homogeneous(3, 1, 3), g2 in homogeneous(3, 2, 4), g3 in homogeneous(3, 2, 4),
    ) {
        let r = ring3();
        let gens: Vec<MPoly> = [g1, g2, g3].iter().filter_map(|g| nonzero(build(&r, g))).collect();
        prop_assume!(!gens.is_empty());
        for order in [TermOrder::degrevlex(&r), TermOrder::lex(&r)] {
            let gb = buchberger(&gens, &order).unwrap();
            let k = gb.generators().len();
            for i in 0..k {
                for j in i + 1..k {
                    prop_assert!(gb.s_poly_remainder(i, j).is_zero());
                }
            }
            for g in &gens {
                prop_assert!(gb.contains(g));
            }
        }
    }

    #[test]
    fn monomial_codimension_is_minimal_cover(
        mons in prop::collection::vec(prop::collection::vec(0u32..3, 3), 1..5),
    ) {
        let r = ring3();
        let gens: Vec<MPoly> = mons.iter().map(|e| build(&r, &[(e.clone(), 1)])).collect();
        // codim of a monomial ideal = least number of variables meeting
        // every generator's support (constants give the unit ideal)
        let oracle = if mons.iter().any(|e| e.iter().all(|&x| x == 0)) {
            3
        } else {
            (0u32..8)
                .filter(|mask| mons.iter().all(|e| (0..3).any(|v| mask & (1 << v) != 0 && e[v] > 0)))
                .map(u32::count_ones)
                .min()
                .unwrap() as usize
        };
        prop_assert_eq!(projective_codimension(&gens).unwrap(), oracle);
    }

    #[test]
    fn zero_locus_points_vanish(
        p in prop::collection::vec(-4i64..=4, 3),
        a in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 2),
        extra in homogeneous(3, 1, 3),
    ) {
        let r = ring3();
        let Some(point) = ProjPoint::from_ints(&p) else { return Ok(()) };
        // l(x) = det(a, p, x) vanishes at p
        let through_p = |a: &[i64]| {
            let c = [a[1] * p[2] - a[2] * p[1], a[2] * p[0] - a[0] * p[2], a[0] * p[1] - a[1] * p[0]];
            build(&r, &[(vec![1, 0, 0], c[0]), (vec![0, 1, 0], c[1]), (vec![0, 0, 1], c[2])])
        };
        let l1 = through_p(&a[0]);
        let l2 = through_p(&a[1]);
        prop_assume!(!l1.is_zero() && !l2.is_zero());
        let gens = vec![l1.clone(), &l2 * &build(&r, &extra)];
        prop_assume!(!gens[1].is_zero());
        let Ok(locus) = rational_zero_locus(&gens) else { return Ok(()) };
        for q in &locus.points {
            let asg = q.assignment(&r);
            for g in &gens {
                prop_assert!(g.evaluate(&asg).is_zero());
            }
        }
        if projective_codimension(&gens).unwrap() == 2 {
            prop_assert!(locus.points.contains(&point));
        }
    }
}

fn binom(n: i64, k: i64) -> usize {
    if k < 0 || n < k {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) as usize / (i + 1) as usize)
}

fn random_map(ring: &Arc<RingSpec>, pairs: &[(Terms, Terms)]) -> Option<MapSpec> {
    let built: Vec<(MPoly, MPoly)> = pairs.iter().map(|(f, g)| (build(ring, f), build(ring, g))).collect();
    MapSpec::new(ring, built, Mode::Permissive).ok()
}

fn pair_strategy(nt: usize, d: u32) -> impl Strategy<Value = (Terms, Terms)> {
    (homogeneous(nt, d, 3), homogeneous(nt, d, 3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn strand_ranks_match_binomial_count(d0 in 1u32..=3, d1 in 1u32..=3, d2 in 1u32..=2, extra in 1u32..=3) {
        let r = ring3();
        let degrees = [d0, d1, d2];
        let pairs: Vec<(MPoly, MPoly)> = degrees
            .iter()
            .map(|&d| (build(&r, &[(vec![d, 0, 0], 1)]), build(&r, &[(vec![0, d, 0], 1), (vec![0, 0, d], 1)])))
            .collect();
        let spec = MapSpec::new(&r, pairs, Mode::Permissive).unwrap();
        let nu = spec.eta() + extra;
        let s = koszul_strand(&linear_forms(&spec), nu).unwrap();
        let ranks = s.ranks();
        for (k, &rank) in ranks.iter().enumerate() {
            let mut expect = 0;
            for mask in 0u32..8 {
                if mask.count_ones() as usize == k {
                    let used: u32 = (0..3).filter(|i| mask & (1 << i) != 0).map(|i| degrees[i]).sum();
                    expect += binom(nu as i64 - used as i64 + 2, 2);
                }
            }
            prop_assert_eq!(rank, expect, "k = {}", k);
        }
        prop_assert_eq!(s.euler_characteristic(), 0);
    }

    #[test]
    fn backends_agree_and_vanish_on_image(
        p0 in pair_strategy(2, 1), p1 in pair_strategy(2, 2),
        t in prop::collection::vec(-9i64..=9, 2),
    ) {
        let r = ring2();
        let Some(spec) = random_map(&r, &[p0, p1]) else { return Ok(()) };
        let strand = koszul_strand(&linear_forms(&spec), spec.eta() + 1).unwrap();
        let opts = DetOptions::default();
        // a degenerate map has a non-exact strand and Res = 0
        let Ok((a, _)) = det_cayley(&strand, &opts) else {
            let zero = det_interpolate(&strand, &spec.resultant_multidegree(), &opts);
            prop_assert!(zero.map_or(true, |(b, _)| b.is_zero()));
            return Ok(());
        };
        match det_interpolate(&strand, &spec.resultant_multidegree(), &opts) {
            Ok((b, _)) => prop_assert!(a.poly.eq_up_to_unit(&b.poly) || (a.is_zero() && b.is_zero())),
            Err(_) => prop_assert!(a.is_zero()),
        }
        let tv: Vec<Rat> = t.iter().map(|&x| Rat::from_integer(x.into())).collect();
        let mut point = vec![Rat::zero(); r.nvars()];
        point[..2].clone_from_slice(&tv);
        for i in 0..2 {
            let (f, g) = spec.pair_at(i, &tv);
            point[r.x_index(i)] = f;
            point[r.y_index(i)] = g;
        }
        prop_assert!(a.poly.eval_all(&point).is_zero());
    }
}

fn unimodular() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec((0usize..3, 0usize..3, -2i64..=2), 1..5).prop_map(|ops| {
        let mut m = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        for (i, j, c) in ops {
            if i != j {
                // column_i += c * column_j
                for row in &mut m {
                    row[i] += c * row[j];
                }
            } else {
                m.swap(0, i);
            }
        }
        m
    })
}

const B: &str = "1 0 0\n-2 1 0\n1 -2 1\n0 1 -2\n0 0 1\n";
const C: &str = "1 -7 -6\n-1 4 3\n1 0 4\n0 1 -1\n-1 2 0\n";

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn column_transforms_keep_invariants(m in unimodular(), which in 0usize..2) {
        let base: GaleMatrix = [B, C][which].parse().unwrap();
        let t = column_transform(&base, &m).unwrap();
        for col in 0..t.cols() {
            prop_assert_eq!(t.entries().iter().map(|r| r[col]).sum::<i64>(), 0);
        }
        prop_assert_eq!(t.rows(), base.rows());
    }

    #[test]
    fn pair_product_is_product_of_forms(m in unimodular()) {
        let r = ring3();
        let b: GaleMatrix = B.parse().unwrap();
        let t = column_transform(&b, &m).unwrap();
        let forms = gale_linear_forms(&t, &r).unwrap();
        let spec = gale_map(&t, &r, Mode::Permissive).unwrap();
        for (i, pair) in spec.pairs().iter().enumerate() {
            let want = forms
                .iter()
                .enumerate()
                .fold(MPoly::one(&r), |acc, (j, l)| &acc * &l.pow(t.entries()[j][i].unsigned_abs() as u32));
            prop_assert_eq!(&pair.f * &pair.g, want);
        }
    }
}
