//! Equilibrium laws, the outlier-decorated measures they are compared
//! against, discrete measures, and the reverse Kullback-Leibler divergence.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use num_traits::Float;

use crate::error::invalid;
use crate::quadrature::{CosineQuadrature, CosineRule, GaussLegendre};
use crate::{Error, Result};

/// A pure real function, shareable across threads.
pub type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Largest number of outliers kept on either side of the support.
pub const ATOM_CAP: usize = 64;

/// Total-mass tolerance for [`MeasureS1`].
pub const MASS_TOLERANCE: f64 = 1e-9;

/// A user supplied potential with a one-cut equilibrium measure.
#[derive(Clone)]
pub struct GeneralPotential {
    /// Support `[alpha-, alpha+]` of the equilibrium measure.
    pub support: (f64, f64),
    /// Domain `[b-, b+]` of the potential (may be infinite).
    pub domain: (f64, f64),
    pub density: Option<Evaluator>,
    pub potential: Option<Evaluator>,
    /// `S` in `density = S(x) sqrt((alpha+ - x)(x - alpha-)) / (2 pi)`.
    pub s_factor: Option<Evaluator>,
}

impl fmt::Debug for GeneralPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneralPotential")
            .field("support", &self.support)
            .field("domain", &self.domain)
            .field("density", &self.density.is_some())
            .field("potential", &self.potential.is_some())
            .field("s_factor", &self.s_factor.is_some())
            .finish()
    }
}

/// Equilibrium measure of a log-gas, together with its potential.
#[derive(Debug, Clone)]
pub enum ReferenceLaw {
    /// Semicircle on `[-2, 2]`, potential `x^2 / 2`.
    SemiCircle,
    /// Marchenko-Pastur with ratio `tau` in `(0, 1]`.
    MarchenkoPastur {
        tau: f64,
    },
    /// Kesten-McKay on `[0, 1]`, potential `-k1 log x - k2 log(1 - x)`.
    KestenMcKay {
        kappa1: f64,
        kappa2: f64,
    },
    /// Arcsine law on `[0, 1]` (the Kesten-McKay law at `k1 = k2 = 0`).
    Arcsine01,
    GeneralV(GeneralPotential),
}

impl ReferenceLaw {
    pub fn marchenko_pastur(tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau <= 1.0) {
            return Err(invalid!(
                "Marchenko-Pastur ratio must lie in (0, 1], got {tau}"
            ));
        }
        Ok(Self::MarchenkoPastur { tau })
    }

    pub fn kesten_mckay(kappa1: f64, kappa2: f64) -> Result<Self> {
        if !(kappa1 >= 0.0 && kappa2 >= 0.0 && kappa1.is_finite() && kappa2.is_finite()) {
            return Err(invalid!(
                "Kesten-McKay parameters must be finite and >= 0, got ({kappa1}, {kappa2})"
            ));
        }
        Ok(Self::KestenMcKay { kappa1, kappa2 })
    }

    pub fn is_classical(&self) -> bool {
        !matches!(self, Self::GeneralV(_))
    }

    /// Support endpoints `(alpha-, alpha+)`.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Self::SemiCircle => (-2.0, 2.0),
            Self::MarchenkoPastur { tau } => {
                let s = tau.sqrt();
                ((1.0 - s).powi(2), (1.0 + s).powi(2))
            }
            Self::KestenMcKay { kappa1, kappa2 } => kmk_edges(*kappa1, *kappa2),
            Self::Arcsine01 => (0.0, 1.0),
            Self::GeneralV(g) => g.support,
        }
    }

    /// Domain `(b-, b+)` of the potential.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            Self::SemiCircle => (f64::NEG_INFINITY, f64::INFINITY),
            Self::MarchenkoPastur { .. } => (0.0, f64::INFINITY),
            Self::KestenMcKay { .. } | Self::Arcsine01 => (0.0, 1.0),
            Self::GeneralV(g) => g.domain,
        }
    }

    /// Whether `(lower, upper)` support edges are hard (coincide with the domain boundary).
    pub fn hard_edges(&self) -> (bool, bool) {
        let (lo, hi) = self.support();
        let (blo, bhi) = self.domain();
        (lo <= blo, hi >= bhi)
    }

    /// Equilibrium density; zero outside the open support.
    pub fn density(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.support();
        if let Self::GeneralV(g) = self {
            let f = g
                .density
                .as_ref()
                .ok_or_else(|| Error::Unsupported("potential has no density evaluator".into()))?;
            return Ok(if x > lo && x < hi { f(x).max(0.0) } else { 0.0 });
        }
        if !(x > lo && x < hi) {
            return Ok(0.0);
        }
        Ok(match self {
            Self::SemiCircle => (4.0 - x * x).sqrt() / (2.0 * PI),
            Self::MarchenkoPastur { tau } => ((hi - x) * (x - lo)).sqrt() / (2.0 * PI * tau * x),
            Self::KestenMcKay { kappa1, kappa2 } => {
                (2.0 + kappa1 + kappa2) * ((hi - x) * (x - lo)).sqrt() / (2.0 * PI * x * (1.0 - x))
            }
            Self::Arcsine01 => 1.0 / (PI * (x * (1.0 - x)).sqrt()),
            Self::GeneralV(_) => unreachable!(),
        })
    }

    /// The potential `V`; `+inf` outside the domain.
    pub fn potential(&self, x: f64) -> Result<f64> {
        let (blo, bhi) = self.domain();
        if x < blo || x > bhi || x.is_nan() {
            return Ok(f64::INFINITY);
        }
        Ok(match self {
            Self::SemiCircle => 0.5 * x * x,
            Self::MarchenkoPastur { tau } => {
                let c = 1.0 / tau - 1.0;
                if c == 0.0 {
                    x / tau
                } else if x <= 0.0 {
                    f64::INFINITY
                } else {
                    x / tau - c * x.ln()
                }
            }
            Self::KestenMcKay { kappa1, kappa2 } => {
                xlogy_neg(*kappa1, x) + xlogy_neg(*kappa2, 1.0 - x)
            }
            Self::Arcsine01 => 0.0,
            Self::GeneralV(g) => {
                let v = g
                    .potential
                    .as_ref()
                    .ok_or_else(|| Error::Unsupported("no potential evaluator attached".into()))?;
                v(x)
            }
        })
    }

    /// `S(x)` with `density = S(x) sqrt((alpha+ - x)(x - alpha-)) / (2 pi)`,
    /// continued analytically outside the support.
    pub fn s_factor(&self, x: f64) -> Result<f64> {
        Ok(match self {
            Self::SemiCircle => 1.0,
            Self::MarchenkoPastur { tau } => 1.0 / (tau * x),
            Self::KestenMcKay { kappa1, kappa2 } => (2.0 + kappa1 + kappa2) / (x * (1.0 - x)),
            Self::Arcsine01 => 2.0 / (x * (1.0 - x)),
            Self::GeneralV(g) => {
                let s = g
                    .s_factor
                    .as_ref()
                    .ok_or_else(|| Error::Unsupported("no S-factor evaluator attached".into()))?;
                s(x)
            }
        })
    }

    /// Cumulative distribution function of the equilibrium law.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.support();
        if x <= lo {
            return Ok(0.0);
        }
        if x >= hi {
            return Ok(1.0);
        }
        let mid = 0.5 * (lo + hi);
        let rad = 0.5 * (hi - lo);
        let theta_x = ((x - mid) / rad).clamp(-1.0, 1.0).acos();
        // mass of [lo, x] is the theta range [theta_x, pi]
        let gl = GaussLegendre::new(12);
        let mut err = None;
        let v = gl.integrate_composite(theta_x, PI, 24, |t| {
            let d = self.density(mid + rad * t.cos()).unwrap_or_else(|e| {
                err = Some(e);
                0.0
            });
            d * rad * t.sin()
        });
        match err {
            Some(e) => Err(e),
            None => Ok(v.clamp(0.0, 1.0)),
        }
    }
}

fn xlogy_neg(k: f64, y: f64) -> f64 {
    if k == 0.0 {
        0.0
    } else if y <= 0.0 {
        f64::INFINITY
    } else {
        -k * y.ln()
    }
}

/// Kesten-McKay support edges `u-` and `u+`.
fn kmk_edges(k1: f64, k2: f64) -> (f64, f64) {
    let s = 2.0 + k1 + k2;
    let root = 4.0 * ((1.0 + k1) * (1.0 + k2) * (1.0 + k1 + k2)).sqrt();
    let base = k1 * k1 - k2 * k2;
    let lo = 0.5 + (base - root) / (2.0 * s * s);
    let hi = 0.5 + (base + root) / (2.0 * s * s);
    // Clean the hard edges: the closed form hits 0 or 1 only up to rounding.
    let lo = if k1 == 0.0 { 0.0 } else { lo };
    let hi = if k2 == 0.0 { 1.0 } else { hi };
    (lo, hi)
}

/// Density of a law at `x`; free function form of [`ReferenceLaw::density`].
pub fn density(law: &ReferenceLaw, x: f64) -> Result<f64> {
    law.density(x)
}

/// Support endpoints `(alpha-, alpha+)` of a law.
pub fn support_endpoints(law: &ReferenceLaw) -> (f64, f64) {
    law.support()
}

/// Finitely supported measure.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    /// Nodes must be finite and strictly increasing, weights positive.
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.len() != weights.len() {
            return Err(invalid!(
                "{} nodes but {} weights",
                nodes.len(),
                weights.len()
            ));
        }
        if nodes.is_empty() {
            return Err(invalid!("discrete measure needs at least one node"));
        }
        if nodes.iter().any(|x| !x.is_finite()) {
            return Err(invalid!("nodes must be finite"));
        }
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid!("nodes must be strictly increasing"));
        }
        if weights.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(invalid!("weights must be positive and finite"));
        }
        Ok(Self { nodes, weights })
    }

    /// Sorts `(node, weight)` pairs; coincident nodes are rejected.
    pub fn from_pairs(mut pairs: Vec<(f64, f64)>) -> Result<Self> {
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (nodes, weights) = pairs.into_iter().unzip();
        Self::new(nodes, weights)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Moments `sum_k w_k x_k^j` for `j = 0..=max_order`.
pub fn quad_moments(mu: &DiscreteMeasure, max_order: usize) -> Vec<f64> {
    let mut moments = alloc::vec![0.0; max_order + 1];
    for (&x, &w) in mu.nodes.iter().zip(&mu.weights) {
        let mut p = w;
        for m in moments.iter_mut() {
            *m += p;
            p *= x;
        }
    }
    moments
}

/// Shape of the absolutely continuous part of a [`MeasureS1`], as a
/// probability density.
#[derive(Clone)]
pub enum AcShape {
    /// No absolutely continuous part.
    None,
    Equilibrium(ReferenceLaw),
    /// Spectral density of the free Jacobi matrix with `b_1 = c`,
    /// `(1/pi) (sqrt(4 - x^2)/2) / ((c - x/2)^2 + (4 - x^2)/4)`, normalized.
    RankOne {
        c: f64,
    },
    /// Bernstein-Szego density on `[-2, 2]` of the measure whose only
    /// nonzero Verblunsky coefficient is `alpha_0 = r`.
    BernsteinSzego {
        r: f64,
    },
    /// Pushforward of a shape on `[-2, 2]` under `x -> 1/2 - x/4`.
    OnUnitInterval(Box<AcShape>),
    /// Equilibrium density times a polynomial (ascending coefficients), normalized.
    PolyModulated {
        law: ReferenceLaw,
        coeffs: Vec<f64>,
        norm: f64,
    },
    /// Equilibrium density with `[lo, hi]` cut out, normalized.
    Gapped {
        law: ReferenceLaw,
        lo: f64,
        hi: f64,
        norm: f64,
    },
    Custom {
        label: String,
        density: Evaluator,
    },
}

impl fmt::Debug for AcShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::None => f.write_str("None"),
            Self::Equilibrium(l) => f.debug_tuple("Equilibrium").field(l).finish(),
            Self::RankOne { c } => f.debug_struct("RankOne").field("c", c).finish(),
            Self::BernsteinSzego { r } => f.debug_struct("BernsteinSzego").field("r", r).finish(),
            Self::OnUnitInterval(s) => f.debug_tuple("OnUnitInterval").field(s).finish(),
            Self::PolyModulated { law, coeffs, .. } => f
                .debug_struct("PolyModulated")
                .field("law", law)
                .field("coeffs", coeffs)
                .finish(),
            Self::Gapped { law, lo, hi, .. } => f
                .debug_struct("Gapped")
                .field("law", law)
                .field("lo", lo)
                .field("hi", hi)
                .finish(),
            Self::Custom { label, .. } => f.debug_struct("Custom").field("label", label).finish(),
        }
    }
}

impl AcShape {
    pub fn poly_modulated(law: ReferenceLaw, coeffs: Vec<f64>) -> Result<Self> {
        let (lo, hi) = law.support();
        let rule = CosineRule::new(lo, hi, CosineQuadrature::default());
        let poly = |x: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
        if rule.nodes.iter().any(|&x| poly(x) < 0.0) {
            return Err(invalid!(
                "modulating polynomial must be nonnegative on the support"
            ));
        }
        let mut norm = 0.0;
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            norm += w * poly(x) * law.density(x)?;
        }
        if !(norm > 0.0) {
            return Err(invalid!("modulated density has zero mass"));
        }
        Ok(Self::PolyModulated { law, coeffs, norm })
    }

    pub fn gapped(law: ReferenceLaw, lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) {
            return Err(invalid!("gap [{lo}, {hi}] is empty"));
        }
        let removed = law.cdf(hi)? - law.cdf(lo)?;
        let norm = 1.0 - removed;
        if !(norm > 0.0) {
            return Err(invalid!("gap removes the whole support"));
        }
        Ok(Self::Gapped { law, lo, hi, norm })
    }

    /// Probability density of the shape at `x`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(match self {
            Self::None => 0.0,
            Self::Equilibrium(law) => law.density(x)?,
            Self::RankOne { c } => {
                if !(x > -2.0 && x < 2.0) {
                    return Ok(0.0);
                }
                let mass = if c.abs() > 1.0 { 1.0 / (c * c) } else { 1.0 };
                (4.0 - x * x).sqrt() / (2.0 * PI * (1.0 + c * c - c * x)) / mass
            }
            Self::BernsteinSzego { r } => {
                if !(x > -2.0 && x < 2.0) {
                    return Ok(0.0);
                }
                (1.0 - r * r) / ((1.0 + r * r - r * x) * PI * (4.0 - x * x).sqrt())
            }
            Self::OnUnitInterval(inner) => 4.0 * inner.eval(2.0 - 4.0 * x)?,
            Self::PolyModulated { law, coeffs, norm } => {
                let p = coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
                p.max(0.0) * law.density(x)? / norm
            }
            Self::Gapped { law, lo, hi, norm } => {
                if x >= *lo && x <= *hi {
                    0.0
                } else {
                    law.density(x)? / norm
                }
            }
            Self::Custom { density, .. } => density(x).max(0.0),
        })
    }
}

/// A point mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub position: f64,
    pub weight: f64,
}

impl Atom {
    pub fn new(position: f64, weight: f64) -> Self {
        Self { position, weight }
    }
}

/// A probability measure of the form
/// `ac part on I + sum gamma_i^+ delta(lambda_i^+) + sum gamma_i^- delta(lambda_i^-)`
/// with the outliers ordered towards the edges of `I`.
#[derive(Debug, Clone)]
pub struct MeasureS1 {
    shape: AcShape,
    ac_mass: f64,
    atoms_plus: Vec<Atom>,
    atoms_minus: Vec<Atom>,
    interior_singular_mass: f64,
}

impl MeasureS1 {
    pub fn new(
        shape: AcShape,
        ac_mass: f64,
        atoms_plus: Vec<Atom>,
        atoms_minus: Vec<Atom>,
        interior_singular_mass: f64,
    ) -> Result<Self> {
        if !(0.0..=1.0 + MASS_TOLERANCE).contains(&ac_mass) {
            return Err(invalid!("a.c. mass {ac_mass} outside [0, 1]"));
        }
        if matches!(shape, AcShape::None) && ac_mass > 0.0 {
            return Err(invalid!("positive a.c. mass without a density"));
        }
        if !(interior_singular_mass >= 0.0) {
            return Err(invalid!("interior singular mass must be >= 0"));
        }
        if atoms_plus.len() > ATOM_CAP || atoms_minus.len() > ATOM_CAP {
            return Err(invalid!(
                "at most {ATOM_CAP} outliers per side; truncate longer sequences"
            ));
        }
        for a in atoms_plus.iter().chain(&atoms_minus) {
            if !(a.weight > 0.0 && a.position.is_finite()) {
                return Err(invalid!("atom at {} has non-positive weight", a.position));
            }
        }
        if atoms_plus
            .windows(2)
            .any(|w| w[0].position <= w[1].position)
        {
            return Err(invalid!("upper outliers must be strictly decreasing"));
        }
        if atoms_minus
            .windows(2)
            .any(|w| w[0].position >= w[1].position)
        {
            return Err(invalid!("lower outliers must be strictly increasing"));
        }
        let total = ac_mass
            + interior_singular_mass
            + atoms_plus.iter().map(|a| a.weight).sum::<f64>()
            + atoms_minus.iter().map(|a| a.weight).sum::<f64>();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(invalid!("total mass {total} differs from 1"));
        }
        Ok(Self {
            shape,
            ac_mass,
            atoms_plus,
            atoms_minus,
            interior_singular_mass,
        })
    }

    pub fn equilibrium(law: ReferenceLaw) -> Self {
        Self {
            shape: AcShape::Equilibrium(law),
            ac_mass: 1.0,
            atoms_plus: Vec::new(),
            atoms_minus: Vec::new(),
            interior_singular_mass: 0.0,
        }
    }

    /// Spectral measure of the free Jacobi matrix with `b_1 = c`. For
    /// `|c| > 1` it carries an outlier at `c + 1/c` of mass `1 - 1/c^2`.
    pub fn rank_one(c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(invalid!("rank-one parameter must be finite"));
        }
        let shape = AcShape::RankOne { c };
        if c.abs() <= 1.0 {
            return Self::new(shape, 1.0, Vec::new(), Vec::new(), 0.0);
        }
        let atom = Atom::new(c + 1.0 / c, 1.0 - 1.0 / (c * c));
        let (plus, minus) = if c > 0.0 {
            (alloc::vec![atom], Vec::new())
        } else {
            (Vec::new(), alloc::vec![atom])
        };
        Self::new(shape, 1.0 / (c * c), plus, minus, 0.0)
    }

    /// Bernstein-Szego measure on `[-2, 2]` (`alpha_0 = r`, all others 0).
    pub fn bernstein_szego(r: f64) -> Result<Self> {
        if !(r.abs() < 1.0) {
            return Err(invalid!("Bernstein-Szego parameter must satisfy |r| < 1"));
        }
        Self::new(
            AcShape::BernsteinSzego { r },
            1.0,
            Vec::new(),
            Vec::new(),
            0.0,
        )
    }

    /// Bernstein-Szego measure pushed to `[0, 1]` by `x -> 1/2 - x/4`.
    pub fn bernstein_szego_unit(r: f64) -> Result<Self> {
        if !(r.abs() < 1.0) {
            return Err(invalid!("Bernstein-Szego parameter must satisfy |r| < 1"));
        }
        let shape = AcShape::OnUnitInterval(Box::new(AcShape::BernsteinSzego { r }));
        Self::new(shape, 1.0, Vec::new(), Vec::new(), 0.0)
    }

    /// `(1 - tau) delta_0 + tau MP_tau`.
    pub fn mp_with_atom_at_zero(tau: f64) -> Result<Self> {
        let law = ReferenceLaw::marchenko_pastur(tau)?;
        if tau == 1.0 {
            return Ok(Self::equilibrium(law));
        }
        Self::new(
            AcShape::Equilibrium(law),
            tau,
            Vec::new(),
            alloc::vec![Atom::new(0.0, 1.0 - tau)],
            0.0,
        )
    }

    pub fn shape(&self) -> &AcShape {
        &self.shape
    }

    pub fn ac_mass(&self) -> f64 {
        self.ac_mass
    }

    pub fn atoms_plus(&self) -> &[Atom] {
        &self.atoms_plus
    }

    pub fn atoms_minus(&self) -> &[Atom] {
        &self.atoms_minus
    }

    pub fn interior_singular_mass(&self) -> f64 {
        self.interior_singular_mass
    }

    pub fn has_interior_singular_part(&self) -> bool {
        self.interior_singular_mass > 0.0
    }

    pub fn has_density(&self) -> bool {
        !matches!(self.shape, AcShape::None)
    }

    /// Density of the absolutely continuous part (integrates to `ac_mass`).
    pub fn ac_density(&self, x: f64) -> Result<f64> {
        Ok(self.ac_mass * self.shape.eval(x)?)
    }

    /// Replaces the outliers, keeping the a.c. part; the masses must still add to 1.
    pub fn with_atoms(&self, atoms_plus: Vec<Atom>, atoms_minus: Vec<Atom>) -> Result<Self> {
        Self::new(
            self.shape.clone(),
            self.ac_mass,
            atoms_plus,
            atoms_minus,
            self.interior_singular_mass,
        )
    }

    /// Checks membership in the outlier class of `law`: upper atoms above
    /// `alpha+`, lower atoms below `alpha-`, all of them inside the potential domain.
    pub fn membership(&self, law: &ReferenceLaw) -> Membership {
        let (lo, hi) = law.support();
        let (blo, bhi) = law.domain();
        let ordered = self.atoms_plus.iter().all(|a| a.position > hi)
            && self.atoms_minus.iter().all(|a| a.position < lo);
        let in_domain = self
            .atoms_plus
            .iter()
            .chain(&self.atoms_minus)
            .all(|a| a.position >= blo && a.position <= bhi);
        Membership {
            ordered,
            in_domain,
            total_mass: self.ac_mass
                + self.interior_singular_mass
                + self.atoms_plus.iter().map(|a| a.weight).sum::<f64>()
                + self.atoms_minus.iter().map(|a| a.weight).sum::<f64>(),
        }
    }

    /// Discretizes the measure: the a.c. part by the cosine rule on
    /// `interval`, atoms as themselves.
    pub fn discretize(
        &self,
        interval: (f64, f64),
        layout: CosineQuadrature,
    ) -> Result<DiscreteMeasure> {
        if self.has_interior_singular_part() {
            return Err(Error::Unsupported(
                "cannot discretize an interior singular part of unknown location".into(),
            ));
        }
        let mut pairs = Vec::new();
        if self.ac_mass > 0.0 {
            let rule = CosineRule::new(interval.0, interval.1, layout);
            for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
                let m = w * self.ac_density(x)?;
                if m > 0.0 {
                    pairs.push((x, m));
                }
            }
        }
        for a in self.atoms_plus.iter().chain(&self.atoms_minus) {
            pairs.push((a.position, a.weight));
        }
        DiscreteMeasure::from_pairs(pairs)
    }
}

/// Outcome of [`MeasureS1::membership`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Membership {
    pub ordered: bool,
    pub in_domain: bool,
    pub total_mass: f64,
}

impl Membership {
    pub fn holds(&self) -> bool {
        self.ordered && self.in_domain && (self.total_mass - 1.0).abs() <= MASS_TOLERANCE
    }
}

/// Knobs for [`kl_reverse`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KlConfig {
    pub layout: CosineQuadrature,
    /// Finite values above this are reported as `+inf`.
    pub cap: f64,
}

impl Default for KlConfig {
    fn default() -> Self {
        Self {
            layout: CosineQuadrature::default(),
            cap: 1e6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KlStatus {
    Finite,
    /// The density of `mu` vanishes where the equilibrium density does not.
    Vanishing,
    /// The quadrature exceeded the configured cap.
    CapTriggered,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KlEstimate {
    pub value: f64,
    pub status: KlStatus,
}

/// Reverse Kullback-Leibler divergence `K(mu_V | mu)`: the equilibrium law
/// is the integrating measure, so only the a.c. part of `mu` on the
/// support enters and outliers are irrelevant.
pub fn kl_reverse(law: &ReferenceLaw, mu: &MeasureS1, config: &KlConfig) -> Result<KlEstimate> {
    if !mu.has_density() {
        return Err(invalid!("measure carries no density evaluator"));
    }
    let (lo, hi) = law.support();
    let rule = CosineRule::new(lo, hi, config.layout);
    let mut sum = 0.0;
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let fv = law.density(x)?;
        if fv <= 0.0 {
            continue;
        }
        let f = mu.ac_density(x)?;
        if !(f > 0.0) {
            return Ok(KlEstimate {
                value: f64::INFINITY,
                status: KlStatus::Vanishing,
            });
        }
        sum += w * fv * (fv / f).ln();
    }
    if !sum.is_finite() || sum > config.cap {
        return Ok(KlEstimate {
            value: f64::INFINITY,
            status: KlStatus::CapTriggered,
        });
    }
    Ok(KlEstimate {
        value: sum,
        status: KlStatus::Finite,
    })
}
