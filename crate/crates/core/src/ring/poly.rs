//! Dense polynomials over the prime field Z/p.
//!
//! Coefficients are stored low-to-high and kept trimmed (no trailing zeros),
//! so the zero polynomial is the empty vector.

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(out)
}

/// Quotient and remainder of `a` by the monic polynomial `m`.
pub(crate) fn divrem_monic(a: &[u64], m: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    debug_assert_eq!(m.last(), Some(&1));
    let dm = m.len() - 1;
    let mut rem = trim(a.to_vec());
    if rem.len() < m.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![0u64; rem.len() - dm];
    for k in (dm..rem.len()).rev() {
        let coef = rem[k];
        if coef == 0 {
            continue;
        }
        quot[k - dm] = coef;
        for (j, &mj) in m.iter().enumerate() {
            let idx = k - dm + j;
            rem[idx] = (rem[idx] + p - mul_mod(coef, mj, p)) % p;
        }
    }
    rem.truncate(dm);
    (trim(quot), trim(rem))
}

/// Trial division by every monic polynomial of degree `1..=deg(f)/2`.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len().saturating_sub(1);
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = (p as u128).pow(d as u32);
        for idx in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut rest = idx;
            for _ in 0..d {
                cand.push((rest % p as u128) as u64);
                rest /= p as u128;
            }
            cand.push(1);
            if divrem_monic(f, &cand, p).1.is_empty() {
                return false;
            }
        }
    }
    true
}

pub(crate) fn pow(base: &[u64], exp: u32, p: u64) -> Vec<u64> {
    let mut acc = vec![1 % p];
    for _ in 0..exp {
        acc = mul(&acc, base, p);
    }
    trim(acc)
}
