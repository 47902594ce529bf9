/// Legendre polynomial `P_n(t)` by the three-term recurrence.
pub fn legendre_p(n: usize, t: f64) -> f64 {
    legendre_p_and_derivative(n, t).0
}

/// `(P_n(t), P_n'(t))`.
pub fn legendre_p_and_derivative(n: usize, t: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut p_prev = 1.0;
    let mut p = t;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * t * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = next;
    }
    let nf = n as f64;
    let dp = if (1.0 - t * t).abs() < 1e-300 {
        // P_n'(±1) = (±1)^{n-1} n(n+1)/2
        let sign = if t < 0.0 && n % 2 == 0 { -1.0 } else { 1.0 };
        sign * nf * (nf + 1.0) / 2.0
    } else {
        nf * (t * p - p_prev) / (t * t - 1.0)
    };
    (p, dp)
}
