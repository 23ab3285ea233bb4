//! Quadrature rules used throughout the crate.
//!
//! Three tools cover every integral we need:
//!
//! * [`GaussLegendre`], a fixed rule applied on composite panels;
//! * [`integrate_cosine`], the substitution `x = m + r cos(theta)` on a
//!   bounded interval followed by composite Gauss-Legendre in `theta`, which
//!   turns square-root endpoint behaviour (every equilibrium density here)
//!   into a smooth integrand;
//! * [`adaptive`], globally adaptive Gauss-Kronrod (7/15) for integrands
//!   with integrable endpoint singularities such as `log|x - t|`.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_traits::Float;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds an `order`-point rule by Newton iteration on `P_order`.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = alloc::vec![0.0; order];
        let mut weights = alloc::vec![0.0; order];
        let n = order as f64;
        for i in 0..order.div_ceil(2) {
            // Tricomi's initial guess, then Newton.
            let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(order, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(order, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[order - 1 - i] = x;
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        if order % 2 == 1 {
            nodes[order / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Single-panel rule on `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    /// Composite rule with `panels` equal panels on `[a, b]`.
    pub fn integrate_composite<F: FnMut(f64) -> f64>(
        &self,
        a: f64,
        b: f64,
        panels: usize,
        mut f: F,
    ) -> f64 {
        let panels = panels.max(1);
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|p| {
                let lo = a + h * p as f64;
                self.integrate(lo, lo + h, &mut f)
            })
            .sum()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Panel layout for [`integrate_cosine`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosineQuadrature {
    pub panels: usize,
    pub order: usize,
}

impl Default for CosineQuadrature {
    fn default() -> Self {
        Self {
            panels: 128,
            order: 12,
        }
    }
}

/// A precomputed cosine-substitution rule on a fixed interval: after the
/// substitution the nodes are `x_j = m + r cos(theta_j)` with weights that
/// already include the Jacobian `r sin(theta_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CosineRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl CosineRule {
    pub fn new(lo: f64, hi: f64, layout: CosineQuadrature) -> Self {
        let gl = GaussLegendre::new(layout.order);
        let mid = 0.5 * (lo + hi);
        let rad = 0.5 * (hi - lo);
        let panels = layout.panels.max(1);
        let h = PI / panels as f64;
        let mut nodes = Vec::with_capacity(panels * gl.order());
        let mut weights = Vec::with_capacity(panels * gl.order());
        for p in 0..panels {
            let a = h * p as f64;
            for (&t, &w) in gl.nodes().iter().zip(gl.weights()) {
                let theta = a + 0.5 * h * (t + 1.0);
                nodes.push(mid + rad * theta.cos());
                weights.push(0.5 * h * w * rad * theta.sin());
            }
        }
        Self { nodes, weights }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// `int_lo^hi f(x) dx` through the cosine substitution.
pub fn integrate_cosine<F: FnMut(f64) -> f64>(
    lo: f64,
    hi: f64,
    layout: CosineQuadrature,
    f: F,
) -> f64 {
    CosineRule::new(lo, hi, layout).integrate(f)
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

// Gauss weights for the 7-point rule living on XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One Gauss-Kronrod 7/15 panel: `(kronrod estimate, |kronrod - gauss|)`.
pub fn gauss_kronrod_15<F: FnMut(f64) -> f64>(a: f64, b: f64, f: &mut F) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let sum = f(mid - dx) + f(mid + dx);
        kronrod += WGK[j] * sum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Tolerances for [`adaptive`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveTolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_panels: usize,
}

impl Default for AdaptiveTolerance {
    fn default() -> Self {
        Self {
            abs: 1e-13,
            rel: 1e-12,
            max_panels: 4000,
        }
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

/// Globally adaptive Gauss-Kronrod on `[a, b]`: the panel with the largest
/// error estimate is bisected until the summed estimate meets the tolerance.
///
/// Integrable endpoint singularities are fine since the 15 nodes are all
/// interior; put any interior singularity on a breakpoint by splitting the
/// interval before calling.
pub fn adaptive<F: FnMut(f64) -> f64>(
    a: f64,
    b: f64,
    tol: AdaptiveTolerance,
    mut f: F,
) -> Integral {
    if a == b {
        return Integral {
            value: 0.0,
            error: 0.0,
            converged: true,
        };
    }
    let (v, e) = gauss_kronrod_15(a, b, &mut f);
    let mut panels: Vec<(f64, f64, f64, f64)> = alloc::vec![(a, b, v, e)];
    let mut total = v;
    let mut error = e;
    while error > tol.abs.max(tol.rel * total.abs()) {
        if panels.len() >= tol.max_panels {
            return Integral {
                value: total,
                error,
                converged: false,
            };
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, pv, pe) = panels.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if !(lo < mid && mid < hi) {
            // Panel too narrow to split further in double precision.
            panels.push((lo, hi, pv, 0.0));
            error -= pe;
            continue;
        }
        let (lv, le) = gauss_kronrod_15(lo, mid, &mut f);
        let (rv, re) = gauss_kronrod_15(mid, hi, &mut f);
        total += lv + rv - pv;
        error += le + re - pe;
        panels.push((lo, mid, lv, le));
        panels.push((mid, hi, rv, re));
    }
    // Re-sum to shed the drift accumulated by the incremental updates.
    let value = panels.iter().map(|p| p.2).sum();
    let error = panels.iter().map(|p| p.3).sum();
    Integral {
        value,
        error,
        converged: true,
    }
}
