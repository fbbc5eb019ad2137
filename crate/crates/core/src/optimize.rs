//! Deterministic derivative-free optimization over measurement angles:
//! a coarse grid scan followed by Nelder-Mead refinement from the best cell.

/// Grid resolution for the (theta, phi) scan.
#[derive(Clone, Copy, Debug)]
pub(crate) struct GridSpec {
    pub n_theta: usize,
    pub n_phi: usize,
}

impl GridSpec {
    /// The production grid: 64 x 128 cells over [0, pi] x [0, 2 pi).
    pub const DEFAULT: GridSpec = GridSpec {
        n_theta: 64,
        n_phi: 128,
    };
}

/// Raw outcome of a minimization over Bloch angles.
#[derive(Clone, Copy, Debug)]
pub(crate) struct RawOptimum {
    pub grid_value: f64,
    pub value: f64,
    pub theta: f64,
    pub phi: f64,
    pub converged: bool,
}

pub(crate) const ANGLE_TOL: f64 = 1e-6;
pub(crate) const MAX_ITER: usize = 500;

/// Minimize `f(theta, phi)` with the default grid and simplex refinement.
/// The refined value never exceeds the grid value: the starting simplex
/// contains the best grid point and Nelder-Mead never discards its best
/// vertex.
pub(crate) fn minimize_over_angles(f: &dyn Fn(f64, f64) -> f64, grid: GridSpec) -> RawOptimum {
    let theta_step = std::f64::consts::PI / grid.n_theta as f64;
    let phi_step = 2.0 * std::f64::consts::PI / grid.n_phi as f64;

    let mut best = f64::INFINITY;
    let mut best_theta = 0.0;
    let mut best_phi = 0.0;
    for i in 0..grid.n_theta {
        let theta = (i as f64 + 0.5) * theta_step;
        for j in 0..grid.n_phi {
            let phi = j as f64 * phi_step;
            let v = f(theta, phi);
            if v < best {
                best = v;
                best_theta = theta;
                best_phi = phi;
            }
        }
    }

    let (point, value, converged) = nelder_mead(
        &|x: &[f64]| f(x[0], x[1]),
        &[best_theta, best_phi],
        &[theta_step * 0.5, phi_step * 0.5],
        ANGLE_TOL,
        MAX_ITER,
    );
    RawOptimum {
        grid_value: best,
        value: value.min(best),
        theta: point[0],
        phi: point[1],
        converged,
    }
}

/// Plain Nelder-Mead in n dimensions. Returns the best vertex, its value,
/// and whether the simplex collapsed below `tol` before `max_iter`.
pub(crate) fn nelder_mead(
    f: &dyn Fn(&[f64]) -> f64,
    start: &[f64],
    step: &[f64],
    tol: f64,
    max_iter: usize,
) -> (Vec<f64>, f64, bool) {
    let n = start.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((start.to_vec(), f(start)));
    for k in 0..n {
        let mut v = start.to_vec();
        v[k] += step[k];
        let fv = f(&v);
        simplex.push((v, fv));
    }

    let mut converged = false;
    for _ in 0..max_iter {
        // Stable sort keeps insertion order among equal values.
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));

        let diameter = simplex[1..]
            .iter()
            .map(|(v, _)| {
                v.iter()
                    .zip(simplex[0].0.iter())
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max);
        if diameter < tol {
            converged = true;
            break;
        }

        let worst = simplex[n].clone();
        let second_worst = simplex[n - 1].1;
        let best = simplex[0].1;
        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|(v, _)| v[k]).sum::<f64>() / n as f64)
            .collect();

        let at = |coef: f64| -> Vec<f64> {
            (0..n)
                .map(|k| centroid[k] + coef * (centroid[k] - worst.0[k]))
                .collect()
        };

        let reflected = at(1.0);
        let fr = f(&reflected);
        if fr < best {
            let expanded = at(2.0);
            let fe = f(&expanded);
            if fe < fr {
                simplex[n] = (expanded, fe);
            } else {
                simplex[n] = (reflected, fr);
            }
        } else if fr < second_worst {
            simplex[n] = (reflected, fr);
        } else {
            let contracted = if fr < worst.1 { at(0.5) } else { at(-0.5) };
            let fc = f(&contracted);
            if fc < worst.1.min(fr) {
                simplex[n] = (contracted, fc);
            } else {
                // Shrink toward the best vertex.
                for k in 1..=n {
                    let shrunk: Vec<f64> = simplex[k]
                        .0
                        .iter()
                        .zip(simplex[0].0.iter())
                        .map(|(v, b)| b + 0.5 * (v - b))
                        .collect();
                    let fs = f(&shrunk);
                    simplex[k] = (shrunk, fs);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (best_point, best_value) = simplex.swap_remove(0);
    (best_point, best_value, converged)
}
