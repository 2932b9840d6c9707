use proptest::prelude::*;

use sumprod_core::ring::{RingElem, RingSpec};

const RINGS: &[&str] = &[
    "zpr:3,2",
    "zpr:3,3",
    "zpr:5,2",
    "zpr:7,2",
    "polyq:3,2,0,1",
    "polyq:5,2,0,1",
    "polyq:3,3,0,1",
    "polyq:3,2,1,0,1",
];

fn ring(text: &str) -> RingSpec {
    text.parse().unwrap()
}

fn ring_and_elems(k: usize) -> impl Strategy<Value = (RingSpec, Vec<RingElem>)> {
    prop::sample::select(RINGS).prop_flat_map(move |text| {
        let r = ring(text);
        let order = r.order();
        prop::collection::vec(0..order, k).prop_map(move |codes| {
            let elems = codes.iter().map(|&c| r.elem(c).unwrap()).collect();
            (r.clone(), elems)
        })
    })
}

/// Schoolbook product in `F_p[x]/(x^r)` on coefficient vectors.
fn truncated_product(a: &[u64], b: &[u64], p: u64, r: usize) -> Vec<u64> {
    let mut out = vec![0; r];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            if i + j < r {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
    }
    out
}

fn padded(mut v: Vec<u64>, len: usize) -> Vec<u64> {
    v.resize(len, 0);
    v
}

/// Largest k with p^k | x, capped at r.
fn integer_valuation(x: u64, p: u64, r: u32) -> u32 {
    if x == 0 {
        return r;
    }
    let (mut x, mut k) = (x, 0);
    while x % p == 0 {
        x /= p;
        k += 1;
    }
    k
}

proptest! {
    #[test]
    fn valuation_of_product((r, xs) in ring_and_elems(2)) {
        let (x, y) = (xs[0], xs[1]);
        let expected = (r.valuation(x) + r.valuation(y)).min(r.r());
        prop_assert_eq!(r.valuation(r.mul(x, y).unwrap()), expected);
    }

    #[test]
    fn valuation_of_sum((r, xs) in ring_and_elems(2)) {
        let (x, y) = (xs[0], xs[1]);
        let (vx, vy) = (r.valuation(x), r.valuation(y));
        let vs = r.valuation(r.add(x, y).unwrap());
        prop_assert!(vs >= vx.min(vy));
        if vx != vy {
            prop_assert_eq!(vs, vx.min(vy));
        }
    }

    #[test]
    fn inverse_is_involutive((r, xs) in ring_and_elems(1)) {
        let x = xs[0];
        if r.is_unit(x) {
            let inv = r.invert(x).unwrap();
            prop_assert_eq!(r.mul(x, inv).unwrap(), r.one());
            prop_assert_eq!(r.invert(inv).unwrap(), x);
        } else {
            prop_assert!(r.invert(x).is_err());
            prop_assert!(r.valuation(x) >= 1);
        }
    }

    #[test]
    fn unit_times_uniformizer_power((r, xs) in ring_and_elems(1)) {
        let x = xs[0];
        let v = r.valuation(x);
        let zv = r.pow(r.uniformizer(), v as u64).unwrap();
        let found = r
            .enumerate_units(1 << 20)
            .unwrap()
            .into_iter()
            .any(|u| r.mul(u, zv).unwrap() == x);
        prop_assert!(found, "{} has no unit cofactor", r.display(x));
    }

    #[test]
    fn ring_axioms((r, xs) in ring_and_elems(3)) {
        let (x, y, z) = (xs[0], xs[1], xs[2]);
        let lhs = r.mul(x, r.add(y, z).unwrap()).unwrap();
        let rhs = r.add(r.mul(x, y).unwrap(), r.mul(x, z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(r.mul(x, y).unwrap(), r.mul(y, x).unwrap());
        prop_assert_eq!(r.sub(r.add(x, y).unwrap(), y).unwrap(), x);
        prop_assert_eq!(r.add(x, r.neg(x).unwrap()).unwrap(), r.zero());
    }

    #[test]
    fn integer_product_matches_machine_arithmetic(p in prop::sample::select(vec![3u64, 5, 7, 11, 13]), r in 1u32..4, a: u64, b: u64) {
        let ring = ring(&format!("zpr:{p},{r}"));
        let order = ring.order();
        let (a, b) = (a % order, b % order);
        let prod = ring.mul(ring.elem(a).unwrap(), ring.elem(b).unwrap()).unwrap();
        prop_assert_eq!(prod.code(), a * b % order);
        prop_assert_eq!(ring.valuation(prod), integer_valuation(a * b % order, p, r));
    }

    #[test]
    fn truncated_polynomial_product(p in prop::sample::select(vec![3u64, 5, 7]), r in 1usize..4, a: u64, b: u64) {
        let ring = ring(&format!("polyq:{p},{r},0,1"));
        let order = ring.order();
        let (x, y) = (ring.elem(a % order).unwrap(), ring.elem(b % order).unwrap());
        let expected = truncated_product(&ring.coefficients(x), &ring.coefficients(y), p, r);
        let got = padded(ring.coefficients(ring.mul(x, y).unwrap()), r);
        prop_assert_eq!(got, expected);
    }
}

#[test]
fn ideal_sizes_and_unit_counts() {
    for text in ["zpr:3,2", "zpr:3,3", "polyq:3,2,0,1", "polyq:5,2,0,1", "polyq:3,2,1,0,1"] {
        let r = ring(text);
        let (q, rr) = (r.q(), r.r());
        let all = r.enumerate_elements(1 << 20).unwrap();
        assert_eq!(all.len() as u64, q.pow(rr), "{text}");
        assert_eq!(r.unit_count(), q.pow(rr) - q.pow(rr - 1), "{text}");
        assert_eq!(r.enumerate_units(1 << 20).unwrap().len() as u64, r.unit_count());
        for k in 0..=rr {
            let ideal = all.iter().filter(|&&x| r.valuation(x) >= k).count() as u64;
            assert_eq!(ideal, q.pow(rr - k), "{text}, k = {k}");
        }
    }
}

#[test]
fn inverse_matches_exhaustive_search() {
    for text in ["zpr:3,3", "polyq:3,2,1,0,1", "zpr:5,2"] {
        let r = ring(text);
        let all = r.enumerate_elements(1 << 20).unwrap();
        for &u in &r.enumerate_units(1 << 20).unwrap() {
            let found: Vec<_> = all.iter().filter(|&&y| r.mul(u, y).unwrap() == r.one()).collect();
            assert_eq!(found.len(), 1);
            assert_eq!(*found[0], r.invert(u).unwrap());
        }
    }
}
