//! Exact evaluation of the counting functions, bounds and thresholds used
//! throughout the crate. Everything is big-integer or big-rational; there is
//! no floating-point path.

mod hypotheses;
pub mod lemmas;
pub mod registry;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{param, Result};

pub use hypotheses::{hypotheses, theorem_cross_threshold, ParamSet, Theorem};

pub type ExactInt = BigInt;
pub type ExactRat = BigRational;

/// `C(a, b)`, with `C(a, b) = 0` whenever `b < 0`, `b > a` or `a < 0`.
pub fn binomial(a: i64, b: i64) -> ExactInt {
    if a < 0 || b < 0 || b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b) as u64;
    let a = a as u64;
    let mut acc = BigUint::one();
    for i in 1..=b {
        acc *= a - b + i;
        acc /= i;
    }
    BigInt::from(acc)
}

fn int(v: i64) -> ExactInt {
    BigInt::from(v)
}

/// Size of the generalized Hilton–Milner family with parameters `(d, k, c)`:
/// `C(n-d, k-d) - C(n-k, k-d) + C(n-c, 2k-c-d) + d(c-k)`.
pub fn h1(d: i64, k: i64, c: i64, n: i64) -> Result<ExactInt> {
    if d < 1 || k <= d {
        return param(format!("h1 needs k > d >= 1 (d = {d}, k = {k})"));
    }
    if n < 2 * k {
        return param(format!("h1 needs n >= 2k (n = {n}, k = {k})"));
    }
    let legal = (k + 1..=2 * k - d).contains(&c) || c == n;
    if !legal {
        return param(format!(
            "c = {c} not in {{{}..{}}} ∪ {{{n}}}",
            k + 1,
            2 * k - d
        ));
    }
    Ok(binomial(n - d, k - d) - binomial(n - k, k - d)
        + binomial(n - c, 2 * k - c - d)
        + int(d * (c - k)))
}

/// `(d+2) C(n-d-1, k-d-1) - (d+1) C(n-d-2, k-d-2)` with `z = d + 2`.
pub fn h2(z: i64, k: i64, n: i64) -> Result<ExactInt> {
    if z < 3 {
        return param(format!("h2 needs z >= 3 (z = {z})"));
    }
    if k < z - 1 {
        return param(format!("h2 needs k >= z - 1 (z = {z}, k = {k})"));
    }
    let d = z - 2;
    Ok(int(z) * binomial(n - d - 1, k - d - 1) - int(d + 1) * binomial(n - d - 2, k - d - 2))
}

pub fn g1(k: i64, l: i64, n: i64, t: i64) -> ExactInt {
    (binomial(n - t, k - t) - binomial(n - l - 1, k - t)) * (binomial(n - t, l - t) + int(t))
}

pub fn g2(k: i64, l: i64, n: i64, t: i64) -> ExactInt {
    binomial(n - t - 1, k - t - 1)
        * (int(t + 1) * binomial(n - t - 1, l - t) + binomial(n - t - 1, l - t - 1))
}

pub fn g3(k: i64, l: i64, n: i64, t: i64) -> ExactInt {
    (int(l - t) * binomial(n - t - 1, k - t - 1) + binomial(n - t - 2, k - t - 2))
        * (binomial(n - t, l - t) + int(t * (k - t)) * binomial(n - t - 2, l - t - 1))
}

pub fn g4(k: i64, l: i64, n: i64, t: i64) -> ExactInt {
    int((k - t + 1) * (k - t + 1))
        * binomial(t + 2, 2)
        * binomial(n - t, k - t)
        * binomial(n - t - 2, l - t - 2)
}

pub fn g5(k: i64, l: i64, n: i64, t: i64) -> ExactInt {
    int((t + 1) * (t + 1) * (k - t + 1) * (l - t + 1))
        * binomial(n - t - 1, k - t - 1)
        * binomial(n - t - 1, l - t - 1)
}

pub fn g6(k: i64, l: i64, n: i64, t: i64) -> ExactInt {
    (int(l - t + 1) * binomial(n - t - 1, k - t - 1)
        - binomial(l - t + 1, 2) * binomial(n - t - 2, k - t - 2))
        * binomial(n - t, l - t)
}

/// Selects `g_i`, `i` in `1..=6`.
pub fn g(i: u8, k: i64, l: i64, n: i64, t: i64) -> Result<ExactInt> {
    let f = match i {
        1 => g1,
        2 => g2,
        3 => g3,
        4 => g4,
        5 => g5,
        6 => g6,
        _ => return param(format!("g index {i} not in 1..=6")),
    };
    Ok(f(k, l, n, t))
}

/// `g_i` divided by `C(n-t-1, k-t-1) C(n-t-1, l-t-1)`.
pub fn g_tilde(i: u8, k: i64, l: i64, n: i64, t: i64) -> Result<ExactRat> {
    let num = g(i, k, l, n, t)?;
    let den = binomial(n - t - 1, k - t - 1) * binomial(n - t - 1, l - t - 1);
    if den.is_zero() {
        return param(format!(
            "normalizer C({}, {}) C({}, {}) vanishes",
            n - t - 1,
            k - t - 1,
            n - t - 1,
            l - t - 1
        ));
    }
    Ok(BigRational::new(num, den))
}

/// `(m-t) C(n-t-1, k-t-1) + (l+1-m)^2 C(n-t-2, k-t-2)`.
pub fn f_prime(n: i64, k: i64, l: i64, m: i64, t: i64) -> ExactInt {
    int(m - t) * binomial(n - t - 1, k - t - 1)
        + int((l + 1 - m) * (l + 1 - m)) * binomial(n - t - 2, k - t - 2)
}

/// `k^(m-t-2) (k-t+1)^2 C(m, t) C(n-m, l-m)`.
///
/// The power of `k` is negative for `m < t + 2`, so the value is rational.
pub fn f2(m: i64, k: i64, l: i64, n: i64, t: i64) -> ExactRat {
    let e = m - t - 2;
    let kk = int(k);
    let pow = if e >= 0 {
        BigRational::from_integer(num_traits::pow(kk, e as usize))
    } else if k == 0 {
        return BigRational::zero();
    } else {
        BigRational::new(BigInt::one(), num_traits::pow(kk, (-e) as usize))
    };
    let rest = int((k - t + 1) * (k - t + 1)) * binomial(m, t) * binomial(n - m, l - m);
    pow * BigRational::from_integer(rest)
}

/// `C(l-w, t-w) C(n-s-t+w, k-s-t+w)`.
pub fn g_w(w: i64, n: i64, k: i64, l: i64, s: i64, t: i64) -> ExactInt {
    binomial(l - w, t - w) * binomial(n - s - t + w, k - s - t + w)
}

/// Upper bound on `|F|` for a maximal cross t-intersecting pair `(F, G)` of
/// k- and l-uniform families with t-covering numbers `m_f` and `m_g`.
pub fn bound_family_size(m_f: i64, m_g: i64, n: i64, k: i64, l: i64, t: i64) -> Result<ExactInt> {
    if t < 1 || m_f < t || m_g < t {
        return param(format!(
            "covering numbers must be >= t (m_f = {m_f}, m_g = {m_g}, t = {t})"
        ));
    }
    let base = binomial(m_f, t);
    Ok(if m_g == t {
        base * binomial(n - t, k - t)
    } else if m_g == t + 1 {
        int(l - t + 1) * base * binomial(n - t - 1, k - t - 1)
    } else {
        num_traits::pow(int(l), (m_g - t - 2) as usize)
            * int((l - t + 1) * (l - t + 1))
            * base
            * binomial(n - m_g, k - m_g)
    })
}

/// Renders a rational as `p` or `p/q`.
pub fn format_rat(r: &ExactRat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pascal_row(a: usize) -> Vec<BigInt> {
        let mut row = vec![BigInt::one()];
        for _ in 0..a {
            let mut next = vec![BigInt::one(); row.len() + 1];
            for j in 1..row.len() {
                next[j] = &row[j - 1] + &row[j];
            }
            row = next;
        }
        row
    }

    #[test]
    fn binomial_basics() {
        assert_eq!(binomial(5, 2), int(10));
        assert_eq!(binomial(4, -1), int(0));
        assert_eq!(binomial(0, 0), int(1));
        assert_eq!(binomial(-3, 0), int(0));
        assert_eq!(binomial(3, 4), int(0));
    }

    #[test]
    fn binomial_matches_pascal_triangle() {
        for a in 0..=60i64 {
            let row = pascal_row(a as usize);
            for b in 0..=a {
                assert_eq!(binomial(a, b), row[b as usize], "C({a},{b})");
            }
        }
        for a in 1..=60i64 {
            for b in 0..=a {
                assert_eq!(binomial(a, b), binomial(a - 1, b) + binomial(a - 1, b - 1));
            }
        }
    }

    #[test]
    fn binomial_large_arguments() {
        // C(10000, 3) = 10000*9999*9998/6
        assert_eq!(binomial(10_000, 3), int(166_616_670_000));
        assert!(binomial(10_000, 5000).bits() > 9000);
    }

    #[test]
    fn h1_examples() {
        assert_eq!(h1(1, 2, 3, 6).unwrap(), int(3));
        assert_eq!(h1(1, 3, 4, 6).unwrap(), int(10));
        // hand count: C(5,2) - C(3,2) + C(2,1) + 1
        assert_eq!(h1(1, 3, 4, 6).unwrap(), int(10 - 3 + 2 + 1));
        assert!(h1(1, 3, 7, 20).is_err());
        assert!(h1(1, 3, 5, 20).is_ok());
        assert!(h1(1, 3, 20, 20).is_ok());
    }

    #[test]
    fn h1_at_full_universe_equals_h2_when_d_is_k_minus_2() {
        for k in 3..=8 {
            for n in 2 * k..=2 * k + 10 {
                assert_eq!(h1(k - 2, k, n, n).unwrap(), h2(k, k, n).unwrap());
            }
        }
    }

    #[test]
    fn h1_decreasing_in_c() {
        for t in 1..=3 {
            for k in t + 2..=8 {
                let n = 200;
                let vals: Vec<_> = (k + 1..=2 * k - t).map(|c| h1(t, k, c, n).unwrap()).collect();
                assert!(vals.windows(2).all(|w| w[0] > w[1]), "t={t} k={k}");
            }
        }
    }

    #[test]
    fn h2_examples_and_case_split() {
        assert_eq!(h2(3, 2, 5).unwrap(), int(3));
        // |A ∩ Z| = 3 or 2: 1 + 3·C(3,1)
        assert_eq!(h2(3, 3, 6).unwrap(), int(10));
        for z in 3..=6 {
            for k in z - 1..=8 {
                for n in 2 * k..=14 {
                    let split = binomial(z, z) * binomial(n - z, k - z)
                        + binomial(z, z - 1) * binomial(n - z, k - z + 1);
                    assert_eq!(h2(z, k, n).unwrap(), split, "z={z} k={k} n={n}");
                }
            }
        }
        assert!(h2(2, 3, 8).is_err());
        assert!(h2(5, 3, 8).is_err());
    }

    #[test]
    fn g_examples() {
        assert_eq!(g1(2, 2, 5, 1), int(10));
        assert!(g(7, 2, 2, 5, 1).is_err());
        for t in 1..=3 {
            for l in t + 1..=6 {
                for k in l..=7 {
                    for n in k + l..=k + l + 8 {
                        let lhs = g5(k, l, n, t);
                        let rhs = int((t + 1) * (t + 1) * (k - t + 1) * (l - t + 1))
                            * binomial(n - t - 1, k - t - 1)
                            * binomial(n - t - 1, l - t - 1);
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn g_tilde_closed_forms() {
        for t in 1..=3 {
            for k2 in t + 1..=7 {
                for k1 in k2..=8 {
                    for n in k1 + k2 + 1..=k1 + k2 + 12 {
                        let g2t = g_tilde(2, k1, k2, n, t).unwrap();
                        let expect = BigRational::new(int((t + 1) * (n - k2)), int(k2 - t))
                            + BigRational::one();
                        assert_eq!(g2t, expect);
                        let g5t = g_tilde(5, k1, k2, n, t).unwrap();
                        assert_eq!(
                            g5t,
                            BigRational::from_integer(int(
                                (t + 1) * (t + 1) * (k1 - t + 1) * (k2 - t + 1)
                            ))
                        );
                        for i in 1..=6 {
                            let back = g_tilde(i, k1, k2, n, t).unwrap()
                                * BigRational::from_integer(
                                    binomial(n - t - 1, k1 - t - 1)
                                        * binomial(n - t - 1, k2 - t - 1),
                                );
                            assert_eq!(back, BigRational::from_integer(g(i, k1, k2, n, t).unwrap()));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn g_tilde_six_closed_form() {
        // (k2-t+1) * ((n-t)/(k2-t) - (k1-t)/2 + (n-k1)/(2(n-t-1)))
        for t in 1..=3 {
            for k2 in t + 1..=6 {
                for k1 in k2..=7 {
                    for n in k1 + k2 + 2..=k1 + k2 + 10 {
                        let r = |a: i64, b: i64| BigRational::new(int(a), int(b));
                        let expect = r(k2 - t + 1, 1)
                            * (r(n - t, k2 - t) - r(k1 - t, 2) + r(n - k1, 2 * (n - t - 1)));
                        assert_eq!(g_tilde(6, k1, k2, n, t).unwrap(), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn g_tilde_zero_divisor() {
        // k = t makes C(n-t-1, -1) = 0
        assert!(g_tilde(1, 2, 2, 10, 2).is_err());
    }

    #[test]
    fn bound_dispatch() {
        let (n, k, l, t) = (30, 4, 3, 1);
        assert_eq!(
            bound_family_size(2, 1, n, k, l, t).unwrap(),
            binomial(2, 1) * binomial(29, 3)
        );
        // m_g = t + 1, re-derived: (l-t+1) * C(m_f,t) * C(n-t-1,k-t-1)
        assert_eq!(
            bound_family_size(3, 2, n, k, l, t).unwrap(),
            int(3) * int(3) * binomial(28, 2)
        );
        assert_eq!(bound_family_size(3, 2, n, k, l, t).unwrap(), int(3 * 3 * 378));
        // m_g = t + 3: l^1 (l-t+1)^2 C(m_f,t) C(n-m_g, k-m_g)
        assert_eq!(
            bound_family_size(2, 4, n, k, l, t).unwrap(),
            int(3 * 9 * 2) * binomial(26, 0)
        );
        assert!(bound_family_size(0, 1, n, k, l, t).is_err());
    }

    #[test]
    fn f2_is_rational_below_t_plus_two() {
        let v = f2(1, 3, 4, 30, 1);
        // 3^-2 * 9 * C(1,1) * C(29,3)
        assert_eq!(v, BigRational::from_integer(binomial(29, 3)));
        let v = f2(2, 4, 4, 30, 1);
        assert_eq!(v, BigRational::new(int(16) * int(2) * binomial(28, 2), int(4)));
    }
}
