//! Seedable samplers for the tridiagonal beta ensembles.
//!
//! Shape ladders (with `b' = beta / 2`, size `n`):
//!
//! | model | variable | law |
//! |---|---|---|
//! | Hermite | `b_k`, `k = 1..n` | `Normal(0, 1 / (b' n))` |
//! | Hermite | `a_k^2`, `k = 1..n-1` | `Gamma(b' (n - k), scale 1 / (b' n))` |
//! | Laguerre | `z_{2k-1}`, `k = 1..n` | `Gamma(b' (n - k) + b' n (1/tau - 1) + 1, scale tau / (b' n))` |
//! | Laguerre | `z_{2k}`, `k = 1..n-1` | `Gamma(b' (n - k), scale tau / (b' n))` |
//! | Jacobi | `alpha_k`, `k` even | `(1-x)^{s-1} (1+x)^{t-1}`, `s = (2n-k-2) beta/4 + A + 1`, `t = (2n-k-2) beta/4 + B + 1` |
//! | Jacobi | `alpha_k`, `k` odd | same form, `s = (2n-k-3) beta/4 + A + B + 2`, `t = (2n-k-1) beta/4` |
//!
//! where `A = k1 b' n` and `B = k2 b' n`, `k = 0..2n-2`. The Jacobi
//! coefficients are mapped to `[-2, 2]` by the Geronimus relations and then to
//! `[0, 1]` by `x -> 1/2 - x/4`. Each coefficient index draws from its own
//! ChaCha stream, so growing `n` keeps the noise of the shared indices.

use alloc::vec::Vec;
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, Gamma, Normal, StandardNormal};

use crate::error::invalid;
use crate::jacobi::{
    geronimus_forward, spectral_from_coeffs, szego_pushforward, z_compose, JacobiCoefficients,
    PushforwardDirection, VerblunskySeq, ZChain,
};
use crate::linalg;
use crate::measures::DiscreteMeasure;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnsembleKind {
    Hermite,
    Laguerre {
        tau: f64,
    },
    JacobiKn {
        kappa1: f64,
        kappa2: f64,
    },
    /// Only reachable through [`sample_general_v_mcmc`].
    GeneralV,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub n: usize,
    pub beta: f64,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, n: usize, beta: f64, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(invalid!("matrix size must be at least 1"));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(invalid!("beta must be positive, got {beta}"));
        }
        match kind {
            EnsembleKind::Laguerre { tau } if !(tau > 0.0 && tau <= 1.0) => {
                return Err(invalid!("tau must lie in (0, 1], got {tau}"));
            }
            EnsembleKind::JacobiKn { kappa1, kappa2 } if !(kappa1 >= 0.0 && kappa2 >= 0.0) => {
                return Err(invalid!("kappa parameters must be >= 0"));
            }
            _ => {}
        }
        Ok(Self {
            kind,
            n,
            beta,
            seed,
        })
    }

    pub fn beta_prime(&self) -> f64 {
        0.5 * self.beta
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..*self }
    }

    pub fn with_n(&self, n: usize) -> Result<Self> {
        Self::new(self.kind, n, self.beta, self.seed)
    }
}

/// Coefficients behind a sampled spectral measure.
#[derive(Debug, Clone, PartialEq)]
pub enum SampledCoefficients {
    Jacobi(JacobiCoefficients),
    Laguerre(ZChain, JacobiCoefficients),
    /// Verblunsky coefficients and the resulting matrix on `[0, 1]`.
    Verblunsky(VerblunskySeq, JacobiCoefficients),
}

impl SampledCoefficients {
    pub fn matrix(&self) -> &JacobiCoefficients {
        match self {
            Self::Jacobi(j) | Self::Laguerre(_, j) | Self::Verblunsky(_, j) => j,
        }
    }
}

/// Eigenvalues (ascending) and spectral weights of one draw.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSpectralData {
    pub eigenvalues: Vec<f64>,
    pub weights: Vec<f64>,
    pub coefficients: SampledCoefficients,
}

impl SampledSpectralData {
    fn from_coefficients(coefficients: SampledCoefficients) -> Result<Self> {
        let mu = spectral_from_coeffs(coefficients.matrix())?;
        Ok(Self {
            eigenvalues: mu.nodes().to_vec(),
            weights: mu.weights().to_vec(),
            coefficients,
        })
    }

    pub fn largest(&self) -> f64 {
        *self
            .eigenvalues
            .last()
            .expect("sampled data is never empty")
    }

    pub fn smallest(&self) -> f64 {
        self.eigenvalues[0]
    }
}

#[derive(Clone, Copy)]
#[repr(u64)]
enum Family {
    Diagonal = 1,
    OffDiagonal = 2,
    ZOdd = 3,
    ZEven = 4,
    Verblunsky = 5,
    Dirichlet = 6,
    Chain = 7,
}

fn stream(seed: u64, family: Family, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((family as u64) << 40) | index as u64);
    rng
}

/// Independent seed for replicate `index` of a run seeded with `seed` (SplitMix64).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn gamma(shape: f64, scale: f64, rng: &mut ChaCha8Rng) -> Result<f64> {
    let g = Gamma::new(shape, scale).map_err(|e| invalid!("gamma({shape}, {scale}): {e}"))?;
    Ok(g.sample(rng))
}

fn expect(spec: &EnsembleSpec, want: &str, ok: bool) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(invalid!("{want} sampler called with {:?}", spec.kind))
    }
}

/// Hermite coefficients without the eigen-decomposition.
pub fn sample_hermite_coefficients(spec: &EnsembleSpec) -> Result<JacobiCoefficients> {
    expect(spec, "Hermite", spec.kind == EnsembleKind::Hermite)?;
    let (n, bp) = (spec.n, spec.beta_prime());
    let scale = 1.0 / (bp * n as f64);
    let normal = Normal::new(0.0, scale.sqrt()).map_err(|e| invalid!("{e}"))?;
    let b = (0..n)
        .map(|k| normal.sample(&mut stream(spec.seed, Family::Diagonal, k)))
        .collect();
    let a = (1..n)
        .map(|k| {
            let shape = bp * (n - k) as f64;
            Ok(gamma(shape, scale, &mut stream(spec.seed, Family::OffDiagonal, k))?.sqrt())
        })
        .collect::<Result<Vec<f64>>>()?;
    JacobiCoefficients::new(b, a)
}

pub fn sample_hermite(spec: &EnsembleSpec) -> Result<SampledSpectralData> {
    let j = sample_hermite_coefficients(spec)?;
    SampledSpectralData::from_coefficients(SampledCoefficients::Jacobi(j))
}

/// Laguerre z-chain without the eigen-decomposition.
pub fn sample_laguerre_chain(spec: &EnsembleSpec) -> Result<ZChain> {
    let EnsembleKind::Laguerre { tau } = spec.kind else {
        return Err(invalid!("Laguerre sampler called with {:?}", spec.kind));
    };
    let (n, bp) = (spec.n, spec.beta_prime());
    let nf = n as f64;
    let scale = tau / (bp * nf);
    let mut z = Vec::with_capacity(2 * n - 1);
    for k in 1..=n {
        let shape = bp * (n - k) as f64 + bp * nf * (1.0 / tau - 1.0) + 1.0;
        z.push(gamma(
            shape,
            scale,
            &mut stream(spec.seed, Family::ZOdd, k),
        )?);
        if k < n {
            let shape = bp * (n - k) as f64;
            z.push(gamma(
                shape,
                scale,
                &mut stream(spec.seed, Family::ZEven, k),
            )?);
        }
    }
    ZChain::new(z)
}

pub fn sample_laguerre(spec: &EnsembleSpec) -> Result<SampledSpectralData> {
    let z = sample_laguerre_chain(spec)?;
    let j = z_compose(&z);
    SampledSpectralData::from_coefficients(SampledCoefficients::Laguerre(z, j))
}

/// Shapes `(s, t)` of the law `(1-x)^{s-1} (1+x)^{t-1}` of `alpha_k`.
pub fn killip_nenciu_shapes(spec: &EnsembleSpec, k: usize) -> Result<(f64, f64)> {
    let EnsembleKind::JacobiKn { kappa1, kappa2 } = spec.kind else {
        return Err(invalid!("Jacobi sampler called with {:?}", spec.kind));
    };
    let n = spec.n;
    if k > 2 * n - 2 {
        return Err(invalid!("alpha_{k} is not sampled for n = {n}"));
    }
    let (bp, q) = (spec.beta_prime(), spec.beta / 4.0);
    let a = kappa1 * bp * n as f64;
    let b = kappa2 * bp * n as f64;
    let m = (2 * n - k) as f64;
    Ok(if k.is_multiple_of(2) {
        ((m - 2.0) * q + a + 1.0, (m - 2.0) * q + b + 1.0)
    } else {
        ((m - 3.0) * q + a + b + 2.0, (m - 1.0) * q)
    })
}

/// `alpha_0..alpha_{2n-2}` of the Jacobi model.
pub fn sample_jacobi_verblunsky(spec: &EnsembleSpec) -> Result<VerblunskySeq> {
    let n = spec.n;
    let limit = 1.0 - f64::EPSILON;
    let alpha = (0..=2 * n - 2)
        .map(|k| {
            let (s, t) = killip_nenciu_shapes(spec, k)?;
            let beta = Beta::new(t, s).map_err(|e| invalid!("beta({t}, {s}): {e}"))?;
            let y: f64 = beta.sample(&mut stream(spec.seed, Family::Verblunsky, k));
            // Beta draws can round to 0 or 1 when a shape is small.
            Ok((2.0 * y - 1.0).clamp(-limit, limit))
        })
        .collect::<Result<Vec<f64>>>()?;
    VerblunskySeq::new(alpha)
}

pub fn sample_jacobi_kn(spec: &EnsembleSpec) -> Result<SampledSpectralData> {
    let v = sample_jacobi_verblunsky(spec)?;
    let j = szego_pushforward(&geronimus_forward(&v)?, PushforwardDirection::To01);
    SampledSpectralData::from_coefficients(SampledCoefficients::Verblunsky(v, j))
}

/// Dispatches on the ensemble kind.
pub fn sample(spec: &EnsembleSpec) -> Result<SampledSpectralData> {
    match spec.kind {
        EnsembleKind::Hermite => sample_hermite(spec),
        EnsembleKind::Laguerre { .. } => sample_laguerre(spec),
        EnsembleKind::JacobiKn { .. } => sample_jacobi_kn(spec),
        EnsembleKind::GeneralV => Err(Error::Unsupported(
            "general potentials are sampled with sample_general_v_mcmc".into(),
        )),
    }
}

/// Matrix of one draw without diagonalizing it.
pub fn sample_matrix(spec: &EnsembleSpec) -> Result<JacobiCoefficients> {
    match spec.kind {
        EnsembleKind::Hermite => sample_hermite_coefficients(spec),
        EnsembleKind::Laguerre { .. } => Ok(z_compose(&sample_laguerre_chain(spec)?)),
        EnsembleKind::JacobiKn { .. } => Ok(szego_pushforward(
            &geronimus_forward(&sample_jacobi_verblunsky(spec)?)?,
            PushforwardDirection::To01,
        )),
        EnsembleKind::GeneralV => Err(Error::Unsupported(
            "no direct sampler for a general potential".into(),
        )),
    }
}

/// Normalized `Gamma(b', 1 / (b' n))` weights, i.e. a `Dir_n(b')` draw.
pub fn sample_dirichlet_weights(n: usize, beta_prime: f64, seed: u64) -> Result<Vec<f64>> {
    if n == 0 || !(beta_prime > 0.0) {
        return Err(invalid!("need n >= 1 and beta' > 0"));
    }
    if n == 1 {
        return Ok(alloc::vec![1.0]);
    }
    let scale = 1.0 / (beta_prime * n as f64);
    let g = (0..n)
        .map(|i| gamma(beta_prime, scale, &mut stream(seed, Family::Dirichlet, i)))
        .collect::<Result<Vec<f64>>>()?;
    let total: f64 = g.iter().sum();
    Ok(g.into_iter().map(|x| x / total).collect())
}

/// Uniform (`weighted = false`) or spectral-weight empirical measure of a draw.
pub fn empirical_measure(data: &SampledSpectralData, weighted: bool) -> Result<DiscreteMeasure> {
    let n = data.eigenvalues.len();
    let weights = if weighted {
        data.weights.clone()
    } else {
        alloc::vec![1.0 / n as f64; n]
    };
    DiscreteMeasure::new(data.eigenvalues.clone(), weights)
}

/// Random-walk Metropolis settings.
#[derive(Debug, Clone, PartialEq)]
pub struct McmcConfig {
    pub steps: usize,
    /// Proposal standard deviation per coordinate; `None` picks `1.2 / (n sqrt(b'))`.
    pub step_size: Option<f64>,
    /// Fraction of the steps discarded before recording.
    pub burn_in: f64,
    pub thinning: usize,
    /// Starting matrix; by default one whose spectrum sits well inside the domain.
    pub initial: Option<JacobiCoefficients>,
}

impl Default for McmcConfig {
    fn default() -> Self {
        Self {
            steps: 100_000,
            step_size: None,
            burn_in: 0.2,
            thinning: 10,
            initial: None,
        }
    }
}

/// One recorded chain state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McmcDraw {
    pub b1: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McmcOutput {
    /// Final state of the chain.
    pub data: SampledSpectralData,
    pub trace: Vec<McmcDraw>,
    pub acceptance_rate: f64,
    pub proposals: usize,
    /// Proposals rejected because the spectrum left the domain of `V`.
    pub domain_rejections: usize,
    pub step_size: f64,
}

/// Default proposal scale for size `n`.
pub fn default_step_size(n: usize, beta_prime: f64) -> f64 {
    1.2 / (n as f64 * beta_prime.sqrt())
}

/// Random-walk Metropolis over `(b_1..b_n, log a_1..log a_{n-1})` targeting
/// `exp(-n b' tr V(T)) prod a_k^{2 b' (n - k) - 1}` (times the `log a` Jacobian).
pub fn sample_general_v_mcmc(
    spec: &EnsembleSpec,
    potential: &dyn Fn(f64) -> f64,
    domain: (f64, f64),
    config: &McmcConfig,
) -> Result<McmcOutput> {
    let (n, bp) = (spec.n, spec.beta_prime());
    let nf = n as f64;
    if !(config.burn_in >= 0.0 && config.burn_in < 1.0) || config.thinning == 0 {
        return Err(invalid!(
            "burn-in must lie in [0, 1) and thinning be positive"
        ));
    }
    let step = config.step_size.unwrap_or_else(|| default_step_size(n, bp));
    if !(step > 0.0) {
        return Err(invalid!("step size must be positive"));
    }
    let start = match &config.initial {
        Some(j) if j.size() == n => j.clone(),
        Some(j) => {
            return Err(invalid!(
                "initial matrix has size {}, expected {n}",
                j.size()
            ))
        }
        None => default_start(n, domain)?,
    };
    let mut b = start.b().to_vec();
    let mut u: Vec<f64> = start.a().iter().map(|a| a.ln()).collect();
    let log_target = |b: &[f64], u: &[f64]| -> Option<f64> {
        let a: Vec<f64> = u.iter().map(|v| v.exp()).collect();
        let l = linalg::eigenvalues(b, &a).ok()?;
        if l[0] < domain.0 || l[l.len() - 1] > domain.1 {
            return None;
        }
        let mut tr = 0.0;
        for &x in &l {
            let v = potential(x);
            if !v.is_finite() {
                return None;
            }
            tr += v;
        }
        let jac: f64 = u
            .iter()
            .enumerate()
            .map(|(k, v)| 2.0 * bp * (n - k - 1) as f64 * v)
            .sum();
        Some(-nf * bp * tr + jac)
    };
    let mut current = log_target(&b, &u).ok_or_else(|| {
        Error::Precondition("initial state lies outside the potential domain".into())
    })?;

    let mut rng = stream(spec.seed, Family::Chain, 0);
    let burn = (config.burn_in * config.steps as f64) as usize;
    let mut trace = Vec::with_capacity((config.steps - burn) / config.thinning + 1);
    let (mut accepted, mut domain_rejections) = (0usize, 0usize);
    let mut pb = b.clone();
    let mut pu = u.clone();
    for step_index in 0..config.steps {
        for (p, c) in pb.iter_mut().zip(&b) {
            let z: f64 = rng.sample(StandardNormal);
            *p = c + step * z;
        }
        for (p, c) in pu.iter_mut().zip(&u) {
            let z: f64 = rng.sample(StandardNormal);
            *p = c + step * z;
        }
        let uniform: f64 = rng.random();
        match log_target(&pb, &pu) {
            Some(proposed) => {
                if uniform.ln() < proposed - current {
                    core::mem::swap(&mut b, &mut pb);
                    core::mem::swap(&mut u, &mut pu);
                    current = proposed;
                    accepted += 1;
                }
            }
            None => domain_rejections += 1,
        }
        if step_index >= burn && (step_index - burn).is_multiple_of(config.thinning) {
            let a: Vec<f64> = u.iter().map(|v| v.exp()).collect();
            let l = linalg::eigenvalues(&b, &a)?;
            trace.push(McmcDraw {
                b1: b[0],
                lambda_min: l[0],
                lambda_max: l[n - 1],
            });
        }
    }
    let a: Vec<f64> = u.iter().map(|v| v.exp()).collect();
    let data = SampledSpectralData::from_coefficients(SampledCoefficients::Jacobi(
        JacobiCoefficients::new(b, a)?,
    ))?;
    Ok(McmcOutput {
        data,
        trace,
        acceptance_rate: accepted as f64 / config.steps.max(1) as f64,
        proposals: config.steps,
        domain_rejections,
        step_size: step,
    })
}

fn default_start(n: usize, domain: (f64, f64)) -> Result<JacobiCoefficients> {
    let (lo, hi) = domain;
    let (centre, a) = match (lo.is_finite(), hi.is_finite()) {
        (true, true) => (0.5 * (lo + hi), (hi - lo) / 8.0),
        (true, false) => (lo + 2.0, 0.5),
        (false, true) => (hi - 2.0, 0.5),
        (false, false) => (0.0, 1.0),
    };
    JacobiCoefficients::new(alloc::vec![centre; n], alloc::vec![a; n - 1])
}
