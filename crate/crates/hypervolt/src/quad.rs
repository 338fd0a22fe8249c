//! Quadrature building blocks: adaptive Gauss-Kronrod for smooth (possibly
//! oscillatory) integrands, graded meshes, and product-integration rules
//! that integrate a power weight u^(mu-1) times a piecewise-linear
//! interpolant exactly.

use num_complex::Complex64;

/// Kronrod-15 abscissae on [0, 1] side of the symmetric pair.
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.000000000000000,
];

/// Kronrod-15 weights.
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];

/// Embedded Gauss-7 weights (even Kronrod indices).
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// One GK15 panel: returns (integral, error_estimate).
fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut kron = Complex64::new(0.0, 0.0);
    let mut gauss = Complex64::new(0.0, 0.0);
    for (j, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
        let (fa, fb) = if x == 0.0 {
            let v = f(mid);
            (v, Complex64::new(0.0, 0.0))
        } else {
            (f(mid - half * x), f(mid + half * x))
        };
        let pair = fa + fb;
        kron += wk * pair;
        // Gauss-7 points sit at the odd Kronrod indices plus the center
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    kron *= half;
    gauss *= half;
    ((kron), (kron - gauss).norm())
}

/// Adaptive GK15 over [a, b] with recursive bisection. The tolerance is
/// relative to the accumulated magnitude plus `abs_floor`.
pub struct AdaptiveQuad {
    pub rel_tol: f64,
    pub abs_floor: f64,
    pub max_depth: u32,
}

impl Default for AdaptiveQuad {
    fn default() -> Self {
        AdaptiveQuad {
            rel_tol: 1e-12,
            abs_floor: 1e-300,
            max_depth: 40,
        }
    }
}

impl AdaptiveQuad {
    /// Integrate over [a, b], splitting first at the supplied breakpoints.
    /// Returns (value, error_estimate).
    pub fn integrate_complex<F: Fn(f64) -> Complex64>(
        &self,
        f: &F,
        a: f64,
        b: f64,
        breakpoints: &[f64],
    ) -> (Complex64, f64) {
        let mut edges: Vec<f64> = vec![a];
        for &x in breakpoints {
            if x > a && x < b {
                edges.push(x);
            }
        }
        edges.push(b);
        edges.sort_by(|x, y| x.partial_cmp(y).unwrap());

        let mut total = Complex64::new(0.0, 0.0);
        let mut err = 0.0;
        for w in edges.windows(2) {
            let (v, e) = self.recurse(f, w[0], w[1], self.max_depth);
            total += v;
            err += e;
        }
        (total, err)
    }

    pub fn integrate<F: Fn(f64) -> f64>(
        &self,
        f: &F,
        a: f64,
        b: f64,
        breakpoints: &[f64],
    ) -> (f64, f64) {
        let g = |x: f64| Complex64::new(f(x), 0.0);
        let (v, e) = self.integrate_complex(&g, a, b, breakpoints);
        (v.re, e)
    }

    fn recurse<F: Fn(f64) -> Complex64>(
        &self,
        f: &F,
        a: f64,
        b: f64,
        depth: u32,
    ) -> (Complex64, f64) {
        let (v, e) = gk15(f, a, b);
        let tol = self.rel_tol * v.norm() + self.abs_floor;
        if e <= tol || depth == 0 || (b - a) < 1e-15 * (a.abs() + b.abs() + 1e-30) {
            return (v, e);
        }
        let mid = 0.5 * (a + b);
        let (v1, e1) = self.recurse(f, a, mid, depth - 1);
        let (v2, e2) = self.recurse(f, mid, b, depth - 1);
        (v1 + v2, e1 + e2)
    }
}

/// Mesh on [0, t] graded toward 0: u_i = t (i/n)^q.
pub fn graded_mesh(t: f64, n: usize, q: f64) -> Vec<f64> {
    (0..=n).map(|i| t * (i as f64 / n as f64).powf(q)).collect()
}

/// Mesh on [0, t] graded toward both endpoints with exponent q.
pub fn graded_mesh_two_sided(t: f64, n_half: usize, q: f64) -> Vec<f64> {
    let half = 0.5 * t;
    let mut mesh = Vec::with_capacity(2 * n_half + 1);
    for i in 0..=n_half {
        mesh.push(half * (i as f64 / n_half as f64).powf(q));
    }
    for i in (0..n_half).rev() {
        mesh.push(t - half * (i as f64 / n_half as f64).powf(q));
    }
    mesh
}

/// Integral over [mesh[0], mesh[n]] of u^(mu-1) times the piecewise-linear
/// interpolant of `f` on the mesh, with exact power moments per cell.
///
/// Requires mu > 0 when mesh starts at 0 (the zeroth moment must exist);
/// for mu <= 0 use [`product_integral_vanishing`] with an integrand that
/// vanishes at u = 0.
pub fn product_integral_linear(mesh: &[f64], fvals: &[f64], mu: f64) -> f64 {
    debug_assert_eq!(mesh.len(), fvals.len());
    let mut total = 0.0;
    let mut comp = 0.0;
    for i in 0..mesh.len() - 1 {
        let (a, b) = (mesh[i], mesh[i + 1]);
        let h = b - a;
        if h <= 0.0 {
            continue;
        }
        let m0 = (b.powf(mu) - a.powf(mu)) / mu;
        let m1 = (b.powf(mu + 1.0) - a.powf(mu + 1.0)) / (mu + 1.0);
        let term = fvals[i] * (b * m0 - m1) / h + fvals[i + 1] * (m1 - a * m0) / h;
        let y = term - comp;
        let t = total + y;
        comp = (t - total) - y;
        total = t;
    }
    total
}

/// As [`product_integral_linear`] but for mu in (-1, 0] with
/// f(mesh[0]) = 0 enforced: the first cell integrates u^(mu-1) * f1 * u/u1
/// exactly, so the divergent zeroth moment never appears.
pub fn product_integral_vanishing(mesh: &[f64], fvals: &[f64], mu: f64) -> f64 {
    debug_assert!(mesh[0] == 0.0);
    debug_assert!(fvals[0] == 0.0);
    debug_assert!(mesh.len() >= 2);
    let u1 = mesh[1];
    let first = fvals[1] * u1.powf(mu) / (mu + 1.0);
    first + product_integral_linear(&mesh[1..], &fvals[1..], mu)
}
