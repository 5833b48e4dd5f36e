//! Test-only SDP solver for the acceptance run: maximizes `Tr(C X)` over
//! density matrices with one extra linear constraint, both on the full space
//! and on the block-reduced problem.

use nalgebra::DMatrix;

use wbrauer::sdp::ReducedSdp;

/// Minimizes a convex function on `[lo, hi]` by golden-section search.
pub fn golden_min<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - g * (hi - lo);
    let mut b = lo + g * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..200 {
        if fa < fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - g * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + g * (hi - lo);
            fb = f(b);
        }
    }
    f((lo + hi) / 2.0).min(fa).min(fb)
}

fn lambda_max(m: &DMatrix<f64>) -> f64 {
    let s = (m + m.transpose()) * 0.5;
    s.symmetric_eigenvalues().max()
}

/// `max Tr(C X)` over `X ⪰ 0`, `Tr X = 1`, `Tr(A X) <= b` on the full
/// space, through `min_{t >= 0} lambda_max(C - t A) + t b`.
pub fn solve_dense(c: &DMatrix<f64>, a: &DMatrix<f64>, b: f64) -> f64 {
    let dim = c.nrows() as f64;
    let base = c.trace() / dim;
    let slack = b - a.trace() / dim;
    assert!(slack > 0.0, "toy instance must be strictly feasible at I/D");
    let g = |t: f64| lambda_max(&(c - a * t)) + t * b;
    let hi = ((g(0.0) - base) / slack).max(0.0) + 1e-9;
    golden_min(g, 0.0, hi)
}

/// The same problem in reduced form: constraint 0 is `Tr X <= 1`,
/// constraint 1 `-Tr X <= -1`, constraint 2 `Tr(A X) <= b`. With
/// `Z_lambda = m_lambda X_lambda` the inner maximum is the largest block
/// eigenvalue.
pub fn solve_reduced(r: &ReducedSdp) -> f64 {
    let norm = &r.constraints[0].f;
    let a = &r.constraints[2].f;
    let b = r.constraints[2].b;
    let w: Vec<f64> = norm.tables.iter().map(|t| t[(0, 0)]).collect();
    let sym = |f: &DMatrix<f64>| (f + f.transpose()) * 0.5;
    let gc: Vec<DMatrix<f64>> = r.objective.tables.iter().zip(&w).map(|(f, w)| sym(f) / *w).collect();
    let ga: Vec<DMatrix<f64>> = a.tables.iter().zip(&w).map(|(f, w)| sym(f) / *w).collect();
    let total: f64 = w.iter().zip(&r.blocks).map(|(w, blk)| w * blk.size as f64).sum();
    // X0 = I / Tr I
    let base: f64 = gc.iter().zip(&w).map(|(g, w)| g.trace() * w).sum::<f64>() / total;
    let slack = b - ga.iter().zip(&w).map(|(g, w)| g.trace() * w).sum::<f64>() / total;
    assert!(slack > 0.0);
    let g =
        |t: f64| gc.iter().zip(&ga).map(|(c, a)| lambda_max(&(c - a * t))).fold(f64::NEG_INFINITY, f64::max) + t * b;
    let hi = ((g(0.0) - base) / slack).max(0.0) + 1e-9;
    golden_min(g, 0.0, hi)
}
