//! Exact characteristic polynomials of integer matrices.
//!
//! The polynomial det(tI - A) is computed modulo a battery of 31-bit primes
//! (Hessenberg reduction followed by the leading-minor recurrence, O(n^3) per
//! prime) and recovered over the integers by the Chinese remainder theorem.
//! The prime battery is sized from an a-priori coefficient bound, so the
//! result is exact, not heuristic.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Coefficients c_0..c_n of det(tI - A) = sum c_k t^k, with c_n = 1.
pub fn char_poly(dense: &[Vec<i64>], spectral_bound: f64) -> Vec<BigInt> {
    let n = dense.len();
    if n == 0 {
        return vec![BigInt::one()];
    }
    // |c_k| <= C(n, k) * bound^(n-k): coefficients of (t + bound)^n dominate.
    let b = BigInt::from(spectral_bound.ceil().max(1.0) as u64);
    let mut bound = BigInt::zero();
    let mut term = BigInt::one();
    for k in 0..=n {
        if term > bound {
            bound = term.clone();
        }
        if k < n {
            // next binomial * power step: C(n,k+1) b^(k+1) = prev * (n-k)/(k+1) * b
            term = term * (n - k) * &b / (k + 1);
        }
    }
    let mut primes = Vec::new();
    let mut product = BigInt::one();
    let target = BigInt::from(2) * &bound + BigInt::one();
    let mut candidate: u64 = (1 << 31) - 1;
    while product < target {
        while !is_prime(candidate) {
            candidate -= 2;
        }
        primes.push(candidate);
        product *= BigInt::from(candidate);
        candidate -= 2;
    }

    // Residues per prime.
    let residues: Vec<Vec<u64>> = primes.iter().map(|&p| char_poly_mod(dense, p)).collect();

    // Incremental CRT with symmetric lift.
    let mut coeffs = vec![BigInt::zero(); n + 1];
    let mut modulus = BigInt::one();
    for (pi, &p) in primes.iter().enumerate() {
        let pb = BigInt::from(p);
        if pi == 0 {
            for k in 0..=n {
                coeffs[k] = BigInt::from(residues[0][k]);
            }
            modulus = pb;
            continue;
        }
        // x = c + modulus * t with t = (r - c) * modulus^{-1} mod p
        let minv = mod_inverse(&modulus, &pb);
        for k in 0..=n {
            let c_mod_p = ((&coeffs[k]) % &pb + &pb) % &pb;
            let diff = (BigInt::from(residues[pi][k]) + &pb - c_mod_p) % &pb;
            let t = (diff * &minv) % &pb;
            coeffs[k] += &modulus * t;
        }
        modulus *= &pb;
    }
    let half = &modulus / BigInt::from(2);
    for c in coeffs.iter_mut() {
        let mut v = c.clone() % &modulus;
        if v.is_negative() {
            v += &modulus;
        }
        if v > half {
            v -= &modulus;
        }
        *c = v;
    }
    debug_assert!(coeffs[n].is_one());
    coeffs
}

/// det(tI - A) mod p, coefficients c_0..c_n.
fn char_poly_mod(dense: &[Vec<i64>], p: u64) -> Vec<u64> {
    let n = dense.len();
    let mut a: Vec<Vec<u64>> = dense
        .iter()
        .map(|row| {
            row.iter()
                .map(|&v| (v.rem_euclid(p as i64)) as u64)
                .collect()
        })
        .collect();

    // Similarity reduction to upper Hessenberg form.
    for k in 0..n.saturating_sub(2) {
        let pivot = (k + 1..n).find(|&i| a[i][k] != 0);
        let Some(pivot) = pivot else { continue };
        if pivot != k + 1 {
            a.swap(pivot, k + 1);
            for row in a.iter_mut() {
                row.swap(pivot, k + 1);
            }
        }
        let inv = mod_pow(a[k + 1][k], p - 2, p);
        for i in k + 2..n {
            if a[i][k] == 0 {
                continue;
            }
            let f = mulmod(a[i][k], inv, p);
            for j in 0..n {
                let sub = mulmod(f, a[k + 1][j], p);
                a[i][j] = (a[i][j] + p - sub) % p;
            }
            // Inverse column operation keeps the similarity class.
            for row in a.iter_mut() {
                let add = mulmod(f, row[i], p);
                row[k + 1] = (row[k + 1] + add) % p;
            }
        }
    }

    // Leading-minor recurrence for Hessenberg matrices.
    // p_k(t) = (t - h[k-1][k-1]) p_{k-1}(t)
    //          - sum_i h[i][k-1] (prod_{j=i+1}^{k-1} h[j][j-1]) p_i(t).
    let mut polys: Vec<Vec<u64>> = Vec::with_capacity(n + 1);
    polys.push(vec![1]);
    for k in 1..=n {
        let mut pk = vec![0u64; k + 1];
        let prev = &polys[k - 1];
        // (t - h) * p_{k-1}
        let h = a[k - 1][k - 1];
        for (idx, &c) in prev.iter().enumerate() {
            pk[idx + 1] = (pk[idx + 1] + c) % p;
            let sub = mulmod(h, c, p);
            pk[idx] = (pk[idx] + p - sub) % p;
        }
        let mut subdiag = 1u64;
        for i in (0..k - 1).rev() {
            subdiag = mulmod(subdiag, a[i + 1][i], p);
            if subdiag == 0 {
                break;
            }
            let w = mulmod(a[i][k - 1], subdiag, p);
            if w == 0 {
                continue;
            }
            for (idx, &c) in polys[i].iter().enumerate() {
                let sub = mulmod(w, c, p);
                pk[idx] = (pk[idx] + p - sub) % p;
            }
        }
        polys.push(pk);
    }
    polys.pop().unwrap()
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    // p < 2^31, so the product fits in u64.
    (a * b) % p
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> BigInt {
    // p prime: a^(p-2) mod p.
    let a = ((a % p) + p) % p;
    a.modpow(&(p - BigInt::from(2)), p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}
