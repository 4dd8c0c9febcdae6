//! Small dense real polynomials (ascending coefficients) and the handful of
//! root-finding and interpolation routines the samplers rely on.

/// `Σ c[k] x^k` by Horner's rule.
pub fn eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ck| acc * x + ck)
}

pub fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(k, &ck)| k as f64 * ck).collect()
}

/// Drops trailing coefficients whose magnitude is at most `tol`.
pub fn trim(c: &[f64], tol: f64) -> Vec<f64> {
    let mut v = c.to_vec();
    while v.last().is_some_and(|x| x.abs() <= tol) {
        v.pop();
    }
    v
}

/// Bisection for a sign change of `f` on `[lo, hi]`; stops at width `tol` or
/// after `max_iter` halvings.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64, max_iter: usize) -> f64 {
    let mut flo = f(lo);
    for _ in 0..max_iter {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Cauchy bound: every real root lies in `[−R, R]`.
pub fn cauchy_bound(c: &[f64]) -> f64 {
    let c = trim(c, 0.0);
    let lead = match c.last() {
        Some(&l) => l,
        None => return 0.0,
    };
    1.0 + c[..c.len() - 1].iter().map(|x| (x / lead).abs()).fold(0.0, f64::max)
}

/// Real roots of `c` inside `[lo, hi]`, ascending, found by recursive
/// isolation: consecutive critical points bracket at most one root.
pub fn real_roots(c: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let c = trim(c, 0.0);
    if c.len() <= 1 {
        return Vec::new();
    }
    if c.len() == 2 {
        let r = -c[0] / c[1];
        return if r >= lo && r <= hi { vec![r] } else { Vec::new() };
    }
    let mut knots = vec![lo];
    knots.extend(real_roots(&derivative(&c), lo, hi).into_iter().filter(|&x| x > lo && x < hi));
    knots.push(hi);
    let mut roots = Vec::new();
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (eval(&c, a), eval(&c, b));
        if fa == 0.0 {
            if roots.last() != Some(&a) {
                roots.push(a);
            }
        } else if fa * fb < 0.0 {
            let tol = 1e-15 * a.abs().max(b.abs()).max(1.0);
            roots.push(bisect(|x| eval(&c, x), a, b, tol, 200));
        }
    }
    if eval(&c, hi) == 0.0 && roots.last() != Some(&hi) {
        roots.push(hi);
    }
    roots
}

/// Whether `c(x) ≥ −tol` for every `x ≥ lower` (or every real `x` when `lower`
/// is `None`).
pub fn is_nonnegative(c: &[f64], lower: Option<f64>, tol: f64) -> bool {
    let c = trim(c, 0.0);
    let deg = match c.len() {
        0 => return true,
        len => len - 1,
    };
    let lead = c[deg];
    // behaviour at +∞ and, on ℝ, at −∞
    if lead < 0.0 && deg > 0 {
        return false;
    }
    if lower.is_none() && deg % 2 == 1 {
        return false;
    }
    let bound = cauchy_bound(&derivative(&c)).max(cauchy_bound(&c)) + 1.0;
    let lo = lower.unwrap_or(-bound);
    let hi = bound.max(lo + 1.0);
    let mut probes = real_roots(&derivative(&c), lo, hi);
    probes.push(lo);
    probes.push(hi);
    probes.into_iter().all(|x| eval(&c, x) >= -tol)
}

/// Monomial coefficients (in `t`) of the degree-`deg` polynomial interpolating
/// `f` at `deg + 1` Chebyshev points of the first kind on `[center − scale, center + scale]`.
pub fn chebyshev_fit<F: FnMut(f64) -> f64>(mut f: F, center: f64, scale: f64, deg: usize) -> Vec<f64> {
    let m = deg + 1;
    let nodes: Vec<f64> = (0..m)
        .map(|j| (std::f64::consts::PI * (j as f64 + 0.5) / m as f64).cos())
        .collect();
    let values: Vec<f64> = nodes.iter().map(|&u| f(center + scale * u)).collect();
    // Chebyshev coefficients from the discrete orthogonality of T_k at these nodes.
    let mut cheb = vec![0.0; m];
    for (k, ck) in cheb.iter_mut().enumerate() {
        let s: f64 = nodes
            .iter()
            .zip(&values)
            .map(|(&u, &v)| v * (k as f64 * u.acos()).cos())
            .sum();
        *ck = 2.0 * s / m as f64;
    }
    cheb[0] *= 0.5;
    // Σ cheb[k] T_k(u) in monomials of u
    let mut mono_u = vec![0.0; m];
    let mut t_prev = vec![1.0];
    let mut t_curr = vec![0.0, 1.0];
    for (k, &ck) in cheb.iter().enumerate() {
        let tk: &[f64] = match k {
            0 => &t_prev,
            1 => &t_curr,
            _ => {
                let mut next = vec![0.0; k + 1];
                for (i, &x) in t_curr.iter().enumerate() {
                    next[i + 1] += 2.0 * x;
                }
                for (i, &x) in t_prev.iter().enumerate() {
                    next[i] -= x;
                }
                t_prev = std::mem::replace(&mut t_curr, next);
                &t_curr
            }
        };
        for (i, &x) in tk.iter().enumerate() {
            mono_u[i] += ck * x;
        }
    }
    shift_scale(&mono_u, center, scale)
}

/// Given `p(u)`, returns the coefficients of `q(t) = p((t − center)/scale)`.
pub fn shift_scale(p: &[f64], center: f64, scale: f64) -> Vec<f64> {
    let m = p.len();
    let mut out = vec![0.0; m];
    // (t − center)^i / scale^i expanded binomially
    for (i, &pi) in p.iter().enumerate() {
        if pi == 0.0 {
            continue;
        }
        let f = pi / scale.powi(i as i32);
        let mut binom = 1.0;
        for (j, o) in out.iter_mut().enumerate().take(i + 1) {
            *o += f * binom * (-center).powi((i - j) as i32);
            binom = binom * (i - j) as f64 / (j + 1) as f64;
        }
    }
    out
}
