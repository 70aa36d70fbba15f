//! Small derivative-free optimizers used by the extremal-state searches:
//! Nelder-Mead with adaptive shrinking, golden-section line search, and a
//! predicate bisection for monotone constraint solving.

/// Options for [`nelder_mead`].
#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    pub max_iters: usize,
    pub f_tol: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            max_iters: 4000,
            f_tol: 1e-12,
        }
    }
}

/// Minimize `f` starting from `x0` with an initial simplex of edge `step`.
/// Returns the best vertex and its value.
pub fn nelder_mead(
    mut f: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    step: f64,
    opts: NelderMeadOptions,
) -> (Vec<f64>, f64) {
    let n = x0.len();
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += step;
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| f(p)).collect();

    for _ in 0..opts.max_iters {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let best = order[0];
        let worst = order[n];
        let second_worst = order[n - 1];

        if (values[worst] - values[best]).abs() <= opts.f_tol {
            break;
        }

        let mut centroid = vec![0.0; n];
        for &idx in order.iter().take(n) {
            for d in 0..n {
                centroid[d] += simplex[idx][d];
            }
        }
        for c in centroid.iter_mut() {
            *c /= n as f64;
        }

        let reflect: Vec<f64> = (0..n)
            .map(|d| centroid[d] + alpha * (centroid[d] - simplex[worst][d]))
            .collect();
        let f_reflect = f(&reflect);

        if f_reflect < values[best] {
            let expand: Vec<f64> = (0..n)
                .map(|d| centroid[d] + gamma * (reflect[d] - centroid[d]))
                .collect();
            let f_expand = f(&expand);
            if f_expand < f_reflect {
                simplex[worst] = expand;
                values[worst] = f_expand;
            } else {
                simplex[worst] = reflect;
                values[worst] = f_reflect;
            }
            continue;
        }
        if f_reflect < values[second_worst] {
            simplex[worst] = reflect;
            values[worst] = f_reflect;
            continue;
        }

        let contract: Vec<f64> = (0..n)
            .map(|d| centroid[d] + rho * (simplex[worst][d] - centroid[d]))
            .collect();
        let f_contract = f(&contract);
        if f_contract < values[worst] {
            simplex[worst] = contract;
            values[worst] = f_contract;
            continue;
        }

        let anchor = simplex[best].clone();
        for idx in 0..=n {
            if idx == best {
                continue;
            }
            for d in 0..n {
                simplex[idx][d] = anchor[d] + sigma * (simplex[idx][d] - anchor[d]);
            }
            values[idx] = f(&simplex[idx]);
        }
    }

    let best = (0..=n)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .expect("nonempty simplex");
    (simplex[best].clone(), values[best])
}

/// Golden-section minimization of a unimodal function on [a, b].
pub fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, x_tol: f64) -> (f64, f64) {
    let inv_phi = 0.5 * (5.0f64.sqrt() - 1.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > x_tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Bisection on a predicate that is true at `lo` and false at `hi`;
/// returns the crossing point after `iters` halvings.
pub fn bisect_predicate(pred: impl Fn(f64) -> bool, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    for _ in 0..iters {
        let mid = 0.5 * (lo + hi);
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
