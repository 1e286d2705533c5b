//! Bessel functions of the first kind for integer order.
//!
//! Values are produced for a whole order range at once with Miller's
//! backward recurrence, normalized by `J0 + 2 Σ J2k = 1`. That is stable for
//! every order and argument used by the harmonic analysis (arguments up to a
//! few tens of radians).

/// `J_0(x) ..= J_{n_max}(x)`.
pub fn bessel_j_sequence(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; n_max + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let ax = x.abs();
    let top = n_max.max(ax.ceil() as usize);
    // Start well above both the order and the argument; the recurrence then
    // loses nothing to truncation at f64 precision.
    let mut start = top + 32 + (40.0 * top as f64).sqrt() as usize;
    if start % 2 == 1 {
        start += 1;
    }

    let mut j_next = 0.0_f64;
    let mut j_cur = 1e-300_f64;
    let mut even_sum = 0.0_f64;
    let mut vals = vec![0.0; n_max + 1];
    for k in (1..=start).rev() {
        // J_{k-1} = (2k/x) J_k - J_{k+1}
        let j_prev = 2.0 * k as f64 / ax * j_cur - j_next;
        j_next = j_cur;
        j_cur = j_prev;
        if j_cur.abs() > 1e250 {
            j_cur *= 1e-250;
            j_next *= 1e-250;
            even_sum *= 1e-250;
            for v in vals.iter_mut() {
                *v *= 1e-250;
            }
        }
        let order = k - 1;
        if order <= n_max {
            vals[order] = j_cur;
        }
        if order > 0 && order % 2 == 0 {
            even_sum += j_cur;
        }
    }
    let norm = j_cur + 2.0 * even_sum;
    for (o, v) in out.iter_mut().zip(vals) {
        *o = v / norm;
    }
    if x < 0.0 {
        for (n, v) in out.iter_mut().enumerate() {
            if n % 2 == 1 {
                *v = -*v;
            }
        }
    }
    out
}

/// `J_n(x)` for integer `n` (negative orders use `J_{-n} = (-1)^n J_n`).
pub fn bessel_j(n: i32, x: f64) -> f64 {
    let m = n.unsigned_abs() as usize;
    let v = bessel_j_sequence(m, x)[m];
    if n < 0 && m % 2 == 1 {
        -v
    } else {
        v
    }
}
