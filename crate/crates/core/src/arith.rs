//! Modular integer utilities: primality at desk scale, primitive roots,
//! discrete logarithms, Legendre symbols and 2-adic valuations.

/// Trial-division primality test, sufficient for desk-scale moduli.
pub fn is_prime(n: u64) -> bool {
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

pub fn is_odd_prime(n: u64) -> bool {
    n > 2 && is_prime(n)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// 2-adic valuation of `n` (n > 0).
pub fn v2(n: u64) -> u32 {
    debug_assert!(n > 0);
    n.trailing_zeros()
}

pub fn mod_pow(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

pub fn mod_inv(a: u64, modulus: u64) -> Option<u64> {
    let (mut r0, mut r1) = (modulus as i128, (a % modulus) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(modulus as i128) as u64)
}

/// Legendre symbol (a/p) for odd prime p.
pub fn legendre(a: i64, p: u64) -> i32 {
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    if mod_pow(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Smallest positive primitive root mod the odd prime `p`.
pub fn primitive_root(p: u64) -> u64 {
    // factor p-1, then test generators against each prime factor
    let mut factors = Vec::new();
    let mut m = p - 1;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            factors.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    'cand: for g in 2..p {
        for &q in &factors {
            if mod_pow(g, (p - 1) / q, p) == 1 {
                continue 'cand;
            }
        }
        return g;
    }
    unreachable!("no primitive root found for prime {p}")
}

/// Discrete logarithms base `g`: returns `dlog` with `dlog[r-1] = nu_g(r)` for r = 1..p-1.
pub fn dlog_table(p: u64, g: u64) -> Vec<u32> {
    let mut table = vec![0u32; (p - 1) as usize];
    let mut x = 1u64;
    for j in 0..(p - 1) {
        table[(x - 1) as usize] = j as u32;
        x = x * g % p;
    }
    table
}
