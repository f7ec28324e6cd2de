//! Special functions: trigamma, generalized Laguerre and associated Legendre
//! polynomials by their three-term recurrences.

/// Trigamma function `psi_1(x) = sum_{k >= 0} 1 / (x + k)^2` for `x > 0`.
pub fn trigamma(x: f64) -> f64 {
    assert!(x > 0.0, "trigamma is only needed for positive arguments");
    let mut x = x;
    let mut acc = 0.0;
    while x < 12.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let x2 = 1.0 / (x * x);
    // Asymptotic series 1/x + 1/(2x^2) + sum B_{2k} / x^{2k+1}.
    let series = 1.0 / x
        + 0.5 * x2
        + (1.0 / x)
            * x2
            * (1.0 / 6.0 + x2 * (-1.0 / 30.0 + x2 * (1.0 / 42.0 + x2 * (-1.0 / 30.0 + x2 * (5.0 / 66.0)))));
    acc + series
}

pub fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Generalized Laguerre polynomial `L_k^alpha(x)` and its derivative.
pub fn laguerre(k: u32, alpha: f64, x: f64) -> (f64, f64) {
    // d/dx L_k^a = -L_{k-1}^{a+1}
    let value = laguerre_value(k, alpha, x);
    let derivative = if k == 0 {
        0.0
    } else {
        -laguerre_value(k - 1, alpha + 1.0, x)
    };
    (value, derivative)
}

fn laguerre_value(k: u32, alpha: f64, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + alpha - x) * cur - (jf + alpha) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Associated Legendre function `P_l^m(x)` with the Condon-Shortley phase,
/// for `|m| <= l`; negative orders through the reflection formula.
pub fn assoc_legendre(l: u32, m: i32, x: f64) -> f64 {
    let am = m.unsigned_abs();
    if am > l {
        return 0.0;
    }
    let p = assoc_legendre_nonneg(l, am, x);
    if m >= 0 {
        p
    } else {
        let sign = if am.is_multiple_of(2) { 1.0 } else { -1.0 };
        sign * factorial(l - am) / factorial(l + am) * p
    }
}

fn assoc_legendre_nonneg(l: u32, m: u32, x: f64) -> f64 {
    let somx2 = ((1.0 - x) * (1.0 + x)).max(0.0).sqrt();
    let mut pmm = 1.0;
    let mut fact = 1.0;
    for _ in 0..m {
        pmm *= -fact * somx2;
        fact += 2.0;
    }
    if l == m {
        return pmm;
    }
    let mut pmmp1 = x * (2.0 * m as f64 + 1.0) * pmm;
    if l == m + 1 {
        return pmmp1;
    }
    let mut pll = 0.0;
    for ll in (m + 2)..=l {
        let llf = ll as f64;
        let mf = m as f64;
        pll = (x * (2.0 * llf - 1.0) * pmmp1 - (llf + mf - 1.0) * pmm) / (llf - mf);
        pmm = pmmp1;
        pmmp1 = pll;
    }
    pll
}

/// `d/dtheta P_l^m(cos theta)`.
pub fn assoc_legendre_dtheta(l: u32, m: i32, theta: f64) -> f64 {
    let x = theta.cos();
    let lf = l as f64;
    let mf = m as f64;
    0.5 * (assoc_legendre(l, m + 1, x) - (lf + mf) * (lf - mf + 1.0) * assoc_legendre(l, m - 1, x))
}
