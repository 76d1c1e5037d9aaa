use rug::Float;

/// Result of a Householder least-squares solve.
#[derive(Clone, Debug)]
pub struct LeastSquares {
    pub x: Vec<Float>,
    /// Euclidean norm of `A x - b`.
    pub residual_norm: Float,
    /// Per-unknown standard error, `sigma * sqrt(diag((R^T R)^-1))`.
    pub std_err: Vec<Float>,
    /// Ratio of largest to smallest |R_ii|, a cheap conditioning indicator.
    pub cond_estimate: f64,
}

/// Solves `min |A x - b|` for a tall matrix given by rows.
///
/// Returns `None` when a column is numerically dependent on the others.
pub fn least_squares(rows: &[Vec<Float>], b: &[Float]) -> Option<LeastSquares> {
    let m = rows.len();
    let n = rows.first()?.len();
    if m < n {
        return None;
    }
    let prec = b[0].prec();
    // Column-major working copy.
    let mut a: Vec<Vec<Float>> = (0..n)
        .map(|j| rows.iter().map(|r| Float::with_val(prec, &r[j])).collect())
        .collect();
    let mut rhs: Vec<Float> = b.iter().map(|x| Float::with_val(prec, x)).collect();

    for k in 0..n {
        let mut norm = Float::with_val(prec, 0);
        for i in k..m {
            norm += Float::with_val(prec, a[k][i].square_ref());
        }
        let norm = norm.sqrt();
        if norm.is_zero() {
            return None;
        }
        let alpha = if a[k][k].is_sign_negative() { norm } else { -norm };
        // Householder vector v = x - alpha e_k.
        let mut v: Vec<Float> = a[k][k..].to_vec();
        v[0] -= &alpha;
        let mut vv = Float::with_val(prec, 0);
        for x in &v {
            vv += Float::with_val(prec, x.square_ref());
        }
        if vv.is_zero() {
            continue;
        }
        let apply = |col: &mut [Float]| {
            let mut dot = Float::with_val(prec, 0);
            for (x, y) in v.iter().zip(col.iter()) {
                dot += Float::with_val(prec, x * y);
            }
            let f = Float::with_val(prec, &dot * 2u32) / &vv;
            for (x, y) in v.iter().zip(col.iter_mut()) {
                *y -= Float::with_val(prec, x * &f);
            }
        };
        for col in a.iter_mut().skip(k) {
            apply(&mut col[k..]);
        }
        apply(&mut rhs[k..]);
    }

    let diag: Vec<f64> = (0..n).map(|k| a[k][k].to_f64().abs()).collect();
    let dmax = diag.iter().cloned().fold(0.0, f64::max);
    let dmin = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    if dmin == 0.0 || dmin < dmax * f64::from(2u32).powi(-(prec as i32) / 2) {
        return None;
    }

    let mut x = vec![Float::with_val(prec, 0); n];
    for k in (0..n).rev() {
        let mut s = rhs[k].clone();
        for j in k + 1..n {
            s -= Float::with_val(prec, &a[j][k] * &x[j]);
        }
        x[k] = s / &a[k][k];
    }
    let mut res = Float::with_val(prec, 0);
    for r in &rhs[n..] {
        res += Float::with_val(prec, r.square_ref());
    }
    let residual_norm = res.sqrt();

    // diag((R^T R)^-1) = row norms squared of R^-1.
    let dof = (m - n).max(1) as u32;
    let sigma = Float::with_val(prec, &residual_norm / Float::with_val(prec, dof).sqrt());
    let mut rinv = vec![vec![Float::with_val(prec, 0); n]; n];
    for c in 0..n {
        for k in (0..=c).rev() {
            let mut s = Float::with_val(prec, if k == c { 1 } else { 0 });
            for j in k + 1..=c {
                s -= Float::with_val(prec, &a[j][k] * &rinv[j][c]);
            }
            rinv[k][c] = s / &a[k][k];
        }
    }
    let std_err = (0..n)
        .map(|k| {
            let mut s = Float::with_val(prec, 0);
            for c in k..n {
                s += Float::with_val(prec, rinv[k][c].square_ref());
            }
            s.sqrt() * &sigma
        })
        .collect();
    Some(LeastSquares { x, residual_norm, std_err, cond_estimate: dmax / dmin })
}
