//! Brute-force oracles and random generators shared by the integration tests.
//!
//! The oracles only ever test divisibility against raw generator lists, so
//! they share no code path with the minimalizing operations in the library.

#![allow(dead_code)]

use nblow_core::{Monomial, MonomialIdeal, OrbitIdealData};
use rand::rngs::StdRng;
use rand::Rng;

/// Every monomial in `vars` variables of total degree at most `max_deg`.
pub fn monomials_up_to(vars: usize, max_deg: u32) -> Vec<Monomial> {
    fn go(vars: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if cur.len() == vars {
            out.push(Monomial::new(cur.clone()).unwrap());
            return;
        }
        for e in 0..=left {
            cur.push(e);
            go(vars, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(vars, max_deg, &mut Vec::new(), &mut out);
    out
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Membership in the ideal generated by an arbitrary (non-minimal) list.
pub fn in_span(gens: &[Vec<u32>], m: &[u32]) -> bool {
    gens.iter().any(|g| divides(g, m))
}

pub fn in_sum(i: &[Vec<u32>], j: &[Vec<u32>], m: &[u32]) -> bool {
    in_span(i, m) || in_span(j, m)
}

pub fn in_intersection(i: &[Vec<u32>], j: &[Vec<u32>], m: &[u32]) -> bool {
    in_span(i, m) && in_span(j, m)
}

/// `m ∈ I·J` iff `m = g·q` with `g` a generator of `I` and `q ∈ J`.
pub fn in_product(i: &[Vec<u32>], j: &[Vec<u32>], m: &[u32]) -> bool {
    i.iter().any(|g| {
        divides(g, m) && {
            let q: Vec<u32> = m.iter().zip(g).map(|(a, b)| a - b).collect();
            in_span(j, &q)
        }
    })
}

/// `m ∈ (I : J)` iff `m·g ∈ I` for every generator `g` of `J`.
pub fn in_colon(i: &[Vec<u32>], j: &[Vec<u32>], m: &[u32]) -> bool {
    j.iter().all(|g| {
        let p: Vec<u32> = m.iter().zip(g).map(|(a, b)| a + b).collect();
        in_span(i, &p)
    })
}

/// Membership in a product of several raw generator lists.
pub fn in_product_many(factors: &[Vec<Vec<u32>>], m: &[u32]) -> bool {
    match factors {
        [] => true,
        [only] => in_span(only, m),
        [first, rest @ ..] => first.iter().any(|g| {
            divides(g, m) && {
                let q: Vec<u32> = m.iter().zip(g).map(|(a, b)| a - b).collect();
                in_product_many(rest, &q)
            }
        }),
    }
}

pub fn raw(ideal: &MonomialIdeal) -> Vec<Vec<u32>> {
    ideal.gens().iter().map(|g| g.exponents().to_vec()).collect()
}

pub fn random_monomial(rng: &mut StdRng, vars: usize, max_deg: u32) -> Vec<u32> {
    let deg = rng.gen_range(1..=max_deg);
    let mut e = vec![0u32; vars];
    for _ in 0..deg {
        e[rng.gen_range(0..vars)] += 1;
    }
    e
}

/// A raw list of one to four generators of degree at most `max_deg`.
pub fn random_gens(rng: &mut StdRng, vars: usize, max_deg: u32) -> Vec<Vec<u32>> {
    let k = rng.gen_range(1..=4);
    let mut gens: Vec<Vec<u32>> = (0..k).map(|_| random_monomial(rng, vars, max_deg)).collect();
    if rng.gen_bool(0.5) {
        for i in 0..vars {
            let mut p = vec![0u32; vars];
            p[i] = rng.gen_range(1..=max_deg);
            gens.push(p);
        }
    }
    gens
}

pub fn ideal_of(vars: usize, gens: &[Vec<u32>]) -> MonomialIdeal {
    MonomialIdeal::minimalize(vars, gens.iter().map(|g| Monomial::new(g.clone()).unwrap())).unwrap()
}

/// An Artinian ideal in two variables with small generators.
pub fn random_artinian(rng: &mut StdRng) -> MonomialIdeal {
    let mut gens = vec![vec![rng.gen_range(1..=3), 0], vec![0, rng.gen_range(1..=3)]];
    for _ in 0..rng.gen_range(0..=2) {
        gens.push(random_monomial(rng, 2, 3));
    }
    ideal_of(2, &gens)
}

/// A naive seed with at most three occupied slots spread over at most two orbits.
pub fn random_seed(rng: &mut StdRng) -> OrbitIdealData {
    loop {
        let occupied = rng.gen_range(1..=3);
        let orbits = rng.gen_range(1..=2u32);
        let slots: Vec<_> =
            (0..occupied).map(|_| (rng.gen_range(0..orbits), rng.gen_range(0..3i64), random_artinian(rng))).collect();
        let seed = OrbitIdealData::from_slots(2, slots).unwrap();
        if !seed.is_unit() {
            return seed;
        }
    }
}
