//! Recursion-coefficient parametrizations of measures and the maps between
//! them: Jacobi coefficients, z-chains for measures on `[0, inf)`,
//! Verblunsky sequences for measures on `[-2, 2]`, canonical moments.

use alloc::vec::Vec;
use num_traits::Float;

use crate::error::invalid;
use crate::linalg;
use crate::measures::{DiscreteMeasure, ReferenceLaw};
use crate::{Error, Result};

/// Verblunsky coefficients closer to `+-1` than this are rejected by
/// [`geronimus_inverse`].
pub const VERBLUNSKY_MARGIN: f64 = 1e-14;

/// Diagonal `b_1..b_n` and off-diagonal `a_1..a_{n-1}` of a Jacobi matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiCoefficients {
    b: Vec<f64>,
    a: Vec<f64>,
}

impl JacobiCoefficients {
    /// Requires `a.len() + 1 == b.len()`, finite entries and `a_k > 0`.
    pub fn new(b: Vec<f64>, a: Vec<f64>) -> Result<Self> {
        let j = Self::with_degenerate(b, a)?;
        if let Some(k) = j.a.iter().position(|&x| x <= 0.0) {
            return Err(invalid!("a_{} = {} must be positive", k + 1, j.a[k]));
        }
        Ok(j)
    }

    /// Like [`new`](Self::new) but accepts vanishing off-diagonal entries;
    /// see [`is_degenerate`](Self::is_degenerate).
    pub fn with_degenerate(b: Vec<f64>, a: Vec<f64>) -> Result<Self> {
        if b.is_empty() {
            return Err(invalid!("Jacobi matrix must have size at least 1"));
        }
        if a.len() + 1 != b.len() {
            return Err(invalid!(
                "expected {} off-diagonal entries for size {}, got {}",
                b.len() - 1,
                b.len(),
                a.len()
            ));
        }
        if b.iter().chain(&a).any(|x| !x.is_finite()) {
            return Err(invalid!("Jacobi coefficients must be finite"));
        }
        if let Some(k) = a.iter().position(|&x| x < 0.0) {
            return Err(invalid!("a_{} = {} is negative", k + 1, a[k]));
        }
        Ok(Self { b, a })
    }

    /// `b = 0`, `a = 1` of size `n`.
    pub fn free(n: usize) -> Result<Self> {
        Self::new(alloc::vec![0.0; n], alloc::vec![1.0; n.saturating_sub(1)])
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn size(&self) -> usize {
        self.b.len()
    }

    /// Some `a_k` vanishes: the matrix splits and no longer determines a
    /// measure with `size` support points.
    pub fn is_degenerate(&self) -> bool {
        self.a.contains(&0.0)
    }

    /// Leading `n x n` block.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.size() {
            return Err(invalid!("cannot truncate size {} to {n}", self.size()));
        }
        Ok(Self {
            b: self.b[..n].to_vec(),
            a: self.a[..n - 1].to_vec(),
        })
    }

    /// `det(shift I + sign T)`.
    pub fn shifted_determinant(&self, shift: f64, sign: f64) -> f64 {
        linalg::shifted_determinant(&self.b, &self.a, shift, sign)
    }
}

/// `z_1..z_{2n-1}` with `b_k = z_{2k-2} + z_{2k-1}`, `a_k^2 = z_{2k-1} z_{2k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZChain {
    z: Vec<f64>,
}

impl ZChain {
    pub fn new(z: Vec<f64>) -> Result<Self> {
        if z.len() % 2 != 1 {
            return Err(invalid!("a z-chain has odd length 2n - 1, got {}", z.len()));
        }
        if let Some(k) = z.iter().position(|x| !(*x >= 0.0 && x.is_finite())) {
            return Err(invalid!("z_{} = {} must be finite and >= 0", k + 1, z[k]));
        }
        for k in (1..z.len()).step_by(2) {
            if z[k] > 0.0 && z[k - 1] <= 0.0 {
                return Err(invalid!("z_{} > 0 requires z_{} > 0", k + 1, k));
            }
        }
        Ok(Self { z })
    }

    /// `z_1..z_{2n-1}` (so `values()[0]` is `z_1`).
    pub fn values(&self) -> &[f64] {
        &self.z
    }

    /// `z_k` for `k >= 1`; `z_0 = 0`.
    pub fn get(&self, k: usize) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.z[k - 1]
        }
    }

    /// Size `n` of the associated Jacobi matrix.
    pub fn size(&self) -> usize {
        self.z.len().div_ceil(2)
    }
}

/// `alpha_0..alpha_{L-1}`, with `alpha_{-1} = -1` implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct VerblunskySeq {
    alpha: Vec<f64>,
}

impl VerblunskySeq {
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(invalid!("empty Verblunsky sequence"));
        }
        if let Some(k) = alpha.iter().position(|x| !(x.abs() <= 1.0)) {
            return Err(invalid!("alpha_{k} = {} outside [-1, 1]", alpha[k]));
        }
        Ok(Self { alpha })
    }

    pub fn values(&self) -> &[f64] {
        &self.alpha
    }

    /// `alpha_k` for `k >= -1`.
    pub fn get(&self, k: isize) -> f64 {
        if k < 0 {
            -1.0
        } else {
            self.alpha[k as usize]
        }
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }
}

/// `p_1, p_2, ...` with `p_{k+1} = (alpha_k + 1) / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalMoments {
    p: Vec<f64>,
}

impl CanonicalMoments {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(invalid!("empty canonical moment sequence"));
        }
        if let Some(k) = p.iter().position(|x| !(0.0..=1.0).contains(x)) {
            return Err(invalid!("p_{} = {} outside [0, 1]", k + 1, p[k]));
        }
        Ok(Self { p })
    }

    pub fn values(&self) -> &[f64] {
        &self.p
    }
}

/// First `depth` recursion coefficients of `mu` (normalized to mass 1),
/// by Lanczos with full reorthogonalization.
pub fn coeffs_from_measure(mu: &DiscreteMeasure, depth: usize) -> Result<JacobiCoefficients> {
    if depth == 0 {
        return Err(invalid!("depth must be at least 1"));
    }
    let x = mu.nodes();
    let n = x.len();
    let total = mu.total_mass();
    let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(depth);
    basis.push(mu.weights().iter().map(|w| (w / total).sqrt()).collect());
    let mut b = Vec::with_capacity(depth);
    let mut a = Vec::with_capacity(depth - 1);
    for k in 0..depth {
        let q = &basis[k];
        let mut v: Vec<f64> = q.iter().zip(x).map(|(qi, xi)| qi * xi).collect();
        b.push(dot(q, &v));
        if k + 1 == depth {
            break;
        }
        for _ in 0..2 {
            for prev in &basis {
                let c = dot(prev, &v);
                v.iter_mut().zip(prev).for_each(|(vi, pi)| *vi -= c * pi);
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm <= 1e-12 * scale {
            return Err(Error::RankDeficient {
                step: k + 1,
                distinct: n,
                depth,
            });
        }
        a.push(norm);
        v.iter_mut().for_each(|vi| *vi /= norm);
        basis.push(v);
    }
    JacobiCoefficients::new(b, a)
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Spectral measure of `(T, e_1)`: eigenvalues and squared first
/// eigenvector components (Golub-Welsch).
pub fn spectral_from_coeffs(j: &JacobiCoefficients) -> Result<DiscreteMeasure> {
    let (nodes, weights) = linalg::eigen_first_components(j.b(), j.a())?;
    // Clustered eigenvalues can coincide in floating point; merge them.
    let mut merged_nodes: Vec<f64> = Vec::with_capacity(nodes.len());
    let mut merged_weights: Vec<f64> = Vec::with_capacity(nodes.len());
    for (x, w) in nodes.into_iter().zip(weights) {
        match merged_nodes.last() {
            Some(&last) if x <= last => *merged_weights.last_mut().unwrap() += w,
            _ => {
                merged_nodes.push(x);
                merged_weights.push(w);
            }
        }
    }
    let keep: Vec<bool> = merged_weights.iter().map(|&w| w > 0.0).collect();
    let nodes = merged_nodes
        .into_iter()
        .zip(&keep)
        .filter_map(|(x, &k)| k.then_some(x))
        .collect();
    let weights = merged_weights.into_iter().filter(|&w| w > 0.0).collect();
    DiscreteMeasure::new(nodes, weights)
}

/// z-chain of a measure on `[0, inf)`.
pub fn z_decompose(j: &JacobiCoefficients) -> Result<ZChain> {
    let n = j.size();
    let mut z = Vec::with_capacity(2 * n - 1);
    let mut even = 0.0;
    for k in 0..n {
        let odd = j.b[k] - even;
        if odd < 0.0 {
            return Err(Error::NotHalfLine {
                index: 2 * k + 1,
                value: odd,
            });
        }
        z.push(odd);
        if k + 1 < n {
            let ak = j.a[k];
            if odd <= 0.0 && ak > 0.0 {
                return Err(Error::NotHalfLine {
                    index: 2 * k + 1,
                    value: odd,
                });
            }
            even = if ak == 0.0 { 0.0 } else { ak * ak / odd };
            z.push(even);
        }
    }
    ZChain::new(z)
}

/// Jacobi coefficients of a z-chain; vanishing entries give a degenerate result.
pub fn z_compose(z: &ZChain) -> JacobiCoefficients {
    let n = z.size();
    let b = (1..=n)
        .map(|k| z.get(2 * k - 2) + z.get(2 * k - 1))
        .collect();
    let a = (1..n)
        .map(|k| (z.get(2 * k - 1) * z.get(2 * k)).sqrt())
        .collect();
    JacobiCoefficients { b, a }
}

/// Jacobi coefficients on `[-2, 2]` from Verblunsky coefficients. `L`
/// coefficients give a matrix of size `ceil(L / 2)`.
pub fn geronimus_forward(v: &VerblunskySeq) -> Result<JacobiCoefficients> {
    if let Some(k) = v.values().iter().position(|x| x.abs() >= 1.0) {
        return Err(Error::Degenerate {
            index: k,
            value: v.values()[k],
        });
    }
    let n = v.len().div_ceil(2);
    let al = |k: isize| v.get(k);
    let mut b = Vec::with_capacity(n);
    let mut a = Vec::with_capacity(n - 1);
    for k in 0..n as isize {
        let (prev, cur) = (al(2 * k - 1), al(2 * k));
        let lower = if k == 0 {
            0.0
        } else {
            (1.0 + prev) * al(2 * k - 2)
        };
        b.push((1.0 - prev) * cur - lower);
        if (k as usize) + 1 < n {
            a.push(((1.0 - prev) * (1.0 - cur * cur) * (1.0 + al(2 * k + 1))).sqrt());
        }
    }
    JacobiCoefficients::new(b, a)
}

/// Inverts [`geronimus_forward`]: an `n x n` matrix yields `alpha_0..alpha_{2n-2}`.
pub fn geronimus_inverse(j: &JacobiCoefficients) -> Result<VerblunskySeq> {
    let n = j.size();
    let mut alpha: Vec<f64> = Vec::with_capacity(2 * n - 1);
    let check = |index: usize, value: f64| {
        if value.abs() >= 1.0 - VERBLUNSKY_MARGIN || value.is_nan() {
            Err(Error::OutOfClass { index, value })
        } else {
            Ok(value)
        }
    };
    for k in 0..n {
        let prev = if k == 0 { -1.0 } else { alpha[2 * k - 1] };
        let lower = if k == 0 {
            0.0
        } else {
            (1.0 + prev) * alpha[2 * k - 2]
        };
        let cur = check(2 * k, (j.b[k] + lower) / (1.0 - prev))?;
        alpha.push(cur);
        if k + 1 < n {
            let ak = j.a[k];
            let next = ak * ak / ((1.0 - prev) * (1.0 - cur * cur)) - 1.0;
            alpha.push(check(2 * k + 1, next)?);
        }
    }
    Ok(VerblunskySeq { alpha })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PushforwardDirection {
    /// `[-2, 2] -> [0, 1]` by `x -> 1/2 - x/4`.
    To01,
    From01,
}

pub fn szego_pushforward(
    j: &JacobiCoefficients,
    direction: PushforwardDirection,
) -> JacobiCoefficients {
    match direction {
        PushforwardDirection::To01 => JacobiCoefficients {
            b: j.b.iter().map(|b| (2.0 - b) / 4.0).collect(),
            a: j.a.iter().map(|a| a / 4.0).collect(),
        },
        PushforwardDirection::From01 => JacobiCoefficients {
            b: j.b.iter().map(|b| 2.0 - 4.0 * b).collect(),
            a: j.a.iter().map(|a| 4.0 * a).collect(),
        },
    }
}

pub fn canonical_from_verblunsky(v: &VerblunskySeq) -> CanonicalMoments {
    CanonicalMoments {
        p: v.values().iter().map(|a| (a + 1.0) / 2.0).collect(),
    }
}

pub fn verblunsky_from_canonical(p: &CanonicalMoments) -> VerblunskySeq {
    VerblunskySeq {
        alpha: p.values().iter().map(|p| 2.0 * p - 1.0).collect(),
    }
}

/// Verblunsky coefficients of the Kesten-McKay law (before the pushforward to `[0, 1]`):
/// `alpha_even = (k2 - k1) / K`, `alpha_odd = -(k1 + k2) / K`, `K = 2 + k1 + k2`.
pub fn kesten_mckay_verblunsky(kappa1: f64, kappa2: f64, len: usize) -> Result<VerblunskySeq> {
    if len == 0 {
        return Err(invalid!("length must be positive"));
    }
    let (even, odd) = kmk_alphas(kappa1, kappa2);
    VerblunskySeq::new(
        (0..len)
            .map(|k| if k % 2 == 0 { even } else { odd })
            .collect(),
    )
}

pub(crate) fn kmk_alphas(kappa1: f64, kappa2: f64) -> (f64, f64) {
    let s = 2.0 + kappa1 + kappa2;
    ((kappa2 - kappa1) / s, -(kappa1 + kappa2) / s)
}

/// Closed-form recursion coefficients of a classical law, size `depth`.
/// Kesten-McKay coefficients live on `[0, 1]`.
pub fn reference_coefficients(law: &ReferenceLaw, depth: usize) -> Result<JacobiCoefficients> {
    if depth == 0 {
        return Err(invalid!("depth must be at least 1"));
    }
    let fill = |first_b: f64, b: f64, first_a: f64, a: f64| {
        let bs = (0..depth)
            .map(|k| if k == 0 { first_b } else { b })
            .collect();
        let as_ = (0..depth - 1)
            .map(|k| if k == 0 { first_a } else { a })
            .collect();
        JacobiCoefficients::new(bs, as_)
    };
    match law {
        ReferenceLaw::SemiCircle => fill(0.0, 0.0, 1.0, 1.0),
        ReferenceLaw::MarchenkoPastur { tau } => {
            let s = tau.sqrt();
            fill(1.0, 1.0 + tau, s, s)
        }
        ReferenceLaw::KestenMcKay { kappa1, kappa2 } => kmk_coefficients(*kappa1, *kappa2, depth),
        ReferenceLaw::Arcsine01 => kmk_coefficients(0.0, 0.0, depth),
        ReferenceLaw::GeneralV(_) => Err(Error::Unsupported(
            "no closed-form coefficients for a general potential".into(),
        )),
    }
}

fn kmk_coefficients(kappa1: f64, kappa2: f64, depth: usize) -> Result<JacobiCoefficients> {
    let s = 2.0 + kappa1 + kappa2;
    let (even, odd) = kmk_alphas(kappa1, kappa2);
    let b1 = (1.0 + kappa1) / s;
    let b = 0.5 * (1.0 + (kappa1 * kappa1 - kappa2 * kappa2) / (s * s));
    let a1 = (2.0 * (1.0 - even * even) * (1.0 + odd)).sqrt() / 4.0;
    let a = ((1.0 - odd * odd) * (1.0 - even * even)).sqrt() / 4.0;
    let bs = (0..depth).map(|k| if k == 0 { b1 } else { b }).collect();
    let as_ = (0..depth - 1)
        .map(|k| if k == 0 { a1 } else { a })
        .collect();
    JacobiCoefficients::new(bs, as_)
}

/// `n`-point Gauss rule of a classical law.
pub fn gauss_rule(law: &ReferenceLaw, n: usize) -> Result<DiscreteMeasure> {
    spectral_from_coeffs(&reference_coefficients(law, n)?)
}
