//! Deterministic derivative-free optimizers: golden-section line search and
//! a downhill simplex. No randomness anywhere, so repeated runs are
//! bit-identical.

/// Golden-section search for the maximum of `f` on `[a, b]`.
///
/// Returns `(x_max, f_max, iterations, converged)` where `converged` means
/// the bracket closed below `width_tol`.
pub fn golden_section_max(
    f: impl Fn(f64) -> f64,
    mut a: f64,
    mut b: f64,
    width_tol: f64,
    max_iters: usize,
) -> (f64, f64, usize, bool) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;

    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iters = 0;

    while iters < max_iters && (b - a) > width_tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
        iters += 1;
    }

    let converged = (b - a) <= width_tol;
    if f1 >= f2 {
        (x1, f1, iters, converged)
    } else {
        (x2, f2, iters, converged)
    }
}

/// Nelder-Mead downhill simplex minimizing `f` from `start`, with one
/// initial step per coordinate. Standard reflection/expansion/contraction
/// coefficients; ties break on insertion order so the path is deterministic.
///
/// Terminates when both the value spread and the simplex diameter fall below
/// `tol`, or after `max_iters` iterations. Returns `(x_best, f_best)`.
pub fn nelder_mead_min(
    f: impl Fn(&[f64]) -> f64,
    start: &[f64],
    steps: &[f64],
    tol: f64,
    max_iters: usize,
) -> (Vec<f64>, f64) {
    assert_eq!(start.len(), steps.len());
    let n = start.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((start.to_vec(), f(start)));
    for i in 0..n {
        let mut x = start.to_vec();
        x[i] += steps[i];
        let fx = f(&x);
        simplex.push((x, fx));
    }

    for _ in 0..max_iters {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("objective is finite"));

        let spread = simplex[n].1 - simplex[0].1;
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(simplex[0].0.iter())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if spread.abs() <= tol && diameter <= tol {
            break;
        }

        // Centroid of all but the worst vertex.
        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x.iter()) {
                *c += xi / n as f64;
            }
        }

        let worst = simplex[n].clone();
        let point = |coef: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(worst.0.iter())
                .map(|(c, w)| c + coef * (c - w))
                .collect()
        };

        let reflected = point(1.0);
        let fr = f(&reflected);
        if fr < simplex[0].1 {
            let expanded = point(2.0);
            let fe = f(&expanded);
            simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
        } else {
            let contracted = if fr < worst.1 { point(0.5) } else { point(-0.5) };
            let fc = f(&contracted);
            if fc < worst.1.min(fr) {
                simplex[n] = (contracted, fc);
            } else {
                // Shrink toward the best vertex.
                let best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> = vertex
                        .0
                        .iter()
                        .zip(best.iter())
                        .map(|(xi, bi)| bi + 0.5 * (xi - bi))
                        .collect();
                    let fx = f(&x);
                    *vertex = (x, fx);
                }
            }
        }
    }

    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("objective is finite"));
    simplex[0].clone()
}
