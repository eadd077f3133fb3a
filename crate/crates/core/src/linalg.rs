//! Tiny dense solvers used by set-membership tests: least squares through the
//! normal equations and Lawson-Hanson nonnegative least squares. Problem
//! sizes here are a handful of columns over a few dozen rows, so no attempt
//! is made at large-scale robustness.

/// Solve the SPD-ish system arising from `min ||A t - b||` via normal
/// equations with partial pivoting. `cols` are the columns of `A`. Returns
/// `None` when the system is numerically singular.
pub(crate) fn solve_least_squares(cols: &[Vec<f64>], rhs: &[f64]) -> Option<Vec<f64>> {
    let k = cols.len();
    if k == 0 {
        return Some(vec![]);
    }
    let mut gram = vec![vec![0.0; k + 1]; k];
    for i in 0..k {
        for j in 0..k {
            gram[i][j] = dot(&cols[i], &cols[j]);
        }
        gram[i][k] = dot(&cols[i], rhs);
    }
    let scale: f64 = (0..k)
        .map(|i| gram[i][i].abs())
        .fold(0.0, f64::max)
        .max(1.0);

    // Gaussian elimination with partial pivoting on the augmented system.
    let mut perm: Vec<usize> = (0..k).collect();
    for col in 0..k {
        let (pivot_row, pivot) =
            (col..k)
                .map(|r| (r, gram[r][col].abs()))
                .fold(
                    (col, 0.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
        if pivot <= 1e-13 * scale {
            return None;
        }
        gram.swap(col, pivot_row);
        perm.swap(col, pivot_row);
        let pivot_vals = gram[col].clone();
        for row in gram.iter_mut().take(k).skip(col + 1) {
            let factor = row[col] / pivot_vals[col];
            for (x, pv) in row[col..=k].iter_mut().zip(&pivot_vals[col..=k]) {
                *x -= factor * pv;
            }
        }
    }
    let mut t = vec![0.0; k];
    for col in (0..k).rev() {
        let mut v = gram[col][k];
        for c in (col + 1)..k {
            v -= gram[col][c] * t[c];
        }
        t[col] = v / gram[col][col];
    }
    Some(t)
}

/// Euclidean residual of the unconstrained least-squares fit, i.e. the
/// distance from `rhs` to the span of `cols`. Robust to dependent columns.
pub(crate) fn span_residual(cols: &[Vec<f64>], rhs: &[f64]) -> f64 {
    // Modified Gram-Schmidt, dropping numerically dependent columns.
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for col in cols {
        let mut v = col.clone();
        for e in &basis {
            let c = dot(&v, e);
            for (vi, ei) in v.iter_mut().zip(e) {
                *vi -= c * ei;
            }
        }
        let n = norm(&v);
        if n > 1e-12 * norm(col).max(1.0) {
            for vi in v.iter_mut() {
                *vi /= n;
            }
            basis.push(v);
        }
    }
    let mut r = rhs.to_vec();
    for e in &basis {
        let c = dot(&r, e);
        for (ri, ei) in r.iter_mut().zip(e) {
            *ri -= c * ei;
        }
    }
    norm(&r)
}

/// Lawson-Hanson nonnegative least squares: minimize `||A t - b||` over
/// `t >= 0`. Returns the coefficient vector; the caller derives the residual.
pub(crate) fn nnls(cols: &[Vec<f64>], rhs: &[f64]) -> Vec<f64> {
    let k = cols.len();
    let mut passive = vec![false; k];
    let mut t = vec![0.0; k];
    if k == 0 {
        return t;
    }
    let max_outer = 3 * k + 10;

    for _ in 0..max_outer {
        let residual = residual_vec(cols, &t, rhs);
        // Gradient of 1/2 ||A t - b||^2 restricted to the active set.
        let mut best = None;
        for j in 0..k {
            if passive[j] {
                continue;
            }
            let w = dot(&cols[j], &residual);
            if w > 1e-12 * (norm(&cols[j]) * norm(rhs)).max(1.0) {
                match best {
                    Some((_, bw)) if bw >= w => {}
                    _ => best = Some((j, w)),
                }
            }
        }
        let Some((enter, _)) = best else {
            break;
        };
        passive[enter] = true;

        // Inner loop: solve on the passive set, clip negative coefficients.
        loop {
            let idx: Vec<usize> = (0..k).filter(|&j| passive[j]).collect();
            let sub: Vec<Vec<f64>> = idx.iter().map(|&j| cols[j].clone()).collect();
            let Some(z) = solve_least_squares(&sub, rhs) else {
                // Dependent column entered; drop it and give up on it.
                passive[enter] = false;
                break;
            };
            if z.iter().all(|&v| v > 0.0) {
                for (pos, &j) in idx.iter().enumerate() {
                    t[j] = z[pos];
                }
                break;
            }
            // Step from t toward z, stopping where a coefficient hits zero.
            let mut alpha = f64::INFINITY;
            for (pos, &j) in idx.iter().enumerate() {
                if z[pos] <= 0.0 {
                    let a = t[j] / (t[j] - z[pos]);
                    if a < alpha {
                        alpha = a;
                    }
                }
            }
            if !alpha.is_finite() {
                break;
            }
            for (pos, &j) in idx.iter().enumerate() {
                t[j] += alpha * (z[pos] - t[j]);
                if t[j] <= 1e-14 {
                    t[j] = 0.0;
                    passive[j] = false;
                }
            }
        }
    }
    t
}

pub(crate) fn residual_vec(cols: &[Vec<f64>], t: &[f64], rhs: &[f64]) -> Vec<f64> {
    let mut r = rhs.to_vec();
    for (col, &c) in cols.iter().zip(t) {
        for (ri, ai) in r.iter_mut().zip(col) {
            *ri -= c * ai;
        }
    }
    r
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
