//! Closed-form population dynamics per network class, the general diffusion
//! ODE, and its first integral.
//!
//! Every closed form here shares the shape `xdot = alpha * C * x(1-x)(a*x+b)`;
//! classes and update rules only change the prefactor `C` and the affine
//! coefficients. The general ODE `dx/dt = beta * e^(-eps*t) * x(1-x)(x+gamma)`
//! abstracts all of them with a decaying selection clock and is the form the
//! estimation pipeline fits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{self, DynamicsCoefficients, PayoffMatrix, SelectionIntensity};
use crate::sim::UpdateRule;
use crate::trajectory::{Trajectory, TrajectoryMeta};

/// Network families with a closed-form diffusion law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NetworkClass {
    /// Fully-mixed population.
    Complete,
    /// Every node has the same degree `k >= 3`. Degree 2 zeroes the `(k-2)`
    /// prefactor (a cycle graph, where the pair approximation is poorest)
    /// and is rejected.
    Uniform { k: usize },
    /// Degree distribution known only through its first two moments,
    /// requiring `k2_mean > 2 * k_mean`.
    NonUniform { k_mean: f64, k2_mean: f64 },
    /// Erdős–Rényi limit: Poisson degrees, `k2 = kbar * (kbar + 1)`.
    Er { k_mean: f64 },
    /// Barabási–Albert limit: power-law degrees with second moment
    /// `kbar^2 * ln(n) / 4`.
    Ba { k_mean: f64, n: usize },
}

impl NetworkClass {
    pub fn validate(&self) -> Result<()> {
        match *self {
            NetworkClass::Complete => Ok(()),
            NetworkClass::Uniform { k } => {
                if k < 3 {
                    Err(Error::arg(format!(
                        "uniform-degree dynamics need k >= 3, got {k}"
                    )))
                } else {
                    Ok(())
                }
            }
            NetworkClass::NonUniform { k_mean, k2_mean } => {
                if !(k_mean > 0.0) {
                    Err(Error::arg(format!("mean degree {k_mean} must be positive")))
                } else if !(k2_mean > 2.0 * k_mean) {
                    Err(Error::arg(format!(
                        "second moment {k2_mean} must exceed twice the mean degree {k_mean}"
                    )))
                } else {
                    Ok(())
                }
            }
            NetworkClass::Er { k_mean } => {
                if k_mean > 1.0 {
                    Ok(())
                } else {
                    Err(Error::arg(format!("ER dynamics need mean degree > 1, got {k_mean}")))
                }
            }
            NetworkClass::Ba { k_mean, n } => {
                let k2 = ba_second_moment(k_mean, n);
                if k2 > 2.0 * k_mean {
                    Ok(())
                } else {
                    Err(Error::arg(format!(
                        "BA second moment {k2} (kbar={k_mean}, n={n}) must exceed 2*kbar"
                    )))
                }
            }
        }
    }

    /// First two degree moments for the moment-based classes.
    fn moments(&self) -> Option<(f64, f64)> {
        match *self {
            NetworkClass::Complete => None,
            NetworkClass::Uniform { k } => Some((k as f64, (k as f64) * (k as f64))),
            NetworkClass::NonUniform { k_mean, k2_mean } => Some((k_mean, k2_mean)),
            NetworkClass::Er { k_mean } => Some((k_mean, k_mean * (k_mean + 1.0))),
            NetworkClass::Ba { k_mean, n } => Some((k_mean, ba_second_moment(k_mean, n))),
        }
    }
}

/// Second degree moment of a BA network: `kbar^2 * ln(n) / 4`.
fn ba_second_moment(k_mean: f64, n: usize) -> f64 {
    k_mean * k_mean * (n as f64).ln() / 4.0
}

/// Equilibrium local states `(x*_f|n, x*_f|f)` around which the fast local
/// dynamics settle for a given global share `x_f`.
///
/// Not defined for the complete class, where local and global states coincide.
pub fn local_equilibrium(class: &NetworkClass, x_f: f64) -> Result<(f64, f64)> {
    class.validate()?;
    if !(0.0..=1.0).contains(&x_f) {
        return Err(Error::arg(format!("x_f={x_f} must lie in [0, 1]")));
    }
    match class {
        NetworkClass::Complete => Err(Error::Unsupported(
            "local states equal the global state on complete networks".into(),
        )),
        NetworkClass::Uniform { k } => {
            let k = *k as f64;
            Ok(((k - 2.0) * x_f / (k - 1.0), ((k - 2.0) * x_f + 1.0) / (k - 1.0)))
        }
        _ => {
            let (k1, k2) = class.moments().expect("moment classes");
            let denom = k2 - k1;
            Ok((
                (k2 - 2.0 * k1) * x_f / denom,
                ((k2 - 2.0 * k1) * x_f + k1) / denom,
            ))
        }
    }
}

/// Affine-factor coefficients and birth-death prefactor for a network class.
pub fn coefficients(class: &NetworkClass, payoff: &PayoffMatrix) -> Result<DynamicsCoefficients> {
    class.validate()?;
    let (u_ff, u_fn, u_nn) = (payoff.u_ff(), payoff.u_fn(), payoff.u_nn());
    let curvature = u_ff - 2.0 * u_fn + u_nn;
    Ok(match class {
        NetworkClass::Complete => game::coefficients_complete(payoff),
        NetworkClass::Uniform { k } => {
            let k = *k as f64;
            DynamicsCoefficients {
                a: (k - 2.0) * curvature,
                b: u_ff + (k - 2.0) * u_fn - (k - 1.0) * u_nn,
                prefactor: (k - 2.0) / (k - 1.0),
            }
        }
        _ => {
            let (k1, k2) = class.moments().expect("moment classes");
            DynamicsCoefficients {
                a: (k2 - 2.0 * k1) * curvature,
                b: k1 * u_ff + (k2 - 2.0 * k1) * u_fn - (k2 - k1) * u_nn,
                prefactor: (k1 - 1.0) * (k2 - 2.0 * k1) / ((k2 - k1) * (k2 - k1)),
            }
        }
    })
}

/// Update-rule prefactor `C(rule, k)` for uniform-degree networks.
///
/// All three tend to 1 as `k` grows, which is what makes the rules
/// asymptotically equivalent.
pub fn rule_coefficient(rule: UpdateRule, k: usize) -> Result<f64> {
    if k < 3 {
        return Err(Error::arg(format!("rule coefficients need k >= 3, got {k}")));
    }
    let k = k as f64;
    Ok(match rule {
        UpdateRule::BirthDeath => (k - 2.0) / (k - 1.0),
        UpdateRule::DeathBirth => (k - 2.0) * (k + 1.0) / (k * (k - 1.0)),
        UpdateRule::Imitation => k * (k - 2.0) * (k + 3.0) / ((k - 1.0) * (k + 1.0) * (k + 1.0)),
    })
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "selection intensity {alpha} must lie in (0, 1]"
        )))
    }
}

/// Per-slot change of the global forwarder share under the closed-form law
/// of `class` and `rule`.
///
/// Death-birth and imitation forms exist for uniform-degree networks only.
pub fn population_step(
    class: &NetworkClass,
    rule: UpdateRule,
    x_f: f64,
    payoff: &PayoffMatrix,
    alpha_t: f64,
) -> Result<f64> {
    class.validate()?;
    check_alpha(alpha_t)?;
    if !(0.0..=1.0).contains(&x_f) {
        return Err(Error::arg(format!("x_f={x_f} must lie in [0, 1]")));
    }
    if rule != UpdateRule::BirthDeath && !matches!(class, NetworkClass::Uniform { .. }) {
        return Err(Error::Unsupported(format!(
            "{rule:?} closed form is derived for uniform-degree networks only"
        )));
    }
    let c = coefficients(class, payoff)?;
    let prefactor = match class {
        NetworkClass::Uniform { k } => rule_coefficient(rule, *k)?,
        _ => c.prefactor,
    };
    Ok(alpha_t * prefactor * x_f * (1.0 - x_f) * (c.a * x_f + c.b))
}

/// Per-slot change over an Erdős–Rényi network, in its direct Poisson form.
///
/// Algebraically identical to [`population_step`] on
/// [`NetworkClass::Er`]; kept as an independently coded route.
pub fn er_step(k_mean: f64, x_f: f64, payoff: &PayoffMatrix, alpha_t: f64) -> Result<f64> {
    if !(k_mean > 1.0) {
        return Err(Error::arg(format!("ER dynamics need mean degree > 1, got {k_mean}")));
    }
    check_alpha(alpha_t)?;
    let (u_ff, u_fn, u_nn) = (payoff.u_ff(), payoff.u_fn(), payoff.u_nn());
    let ratio = (k_mean - 1.0) / k_mean;
    let bracket = (k_mean - 1.0) * (u_ff - 2.0 * u_fn + u_nn) * x_f
        + u_ff
        + (k_mean - 1.0) * u_fn
        - k_mean * u_nn;
    Ok(alpha_t * ratio * ratio * x_f * (1.0 - x_f) * bracket)
}

/// Per-slot change over a Barabási–Albert network: the moment form with
/// `k2 = kbar^2 * ln(n) / 4`.
pub fn ba_step(
    k_mean: f64,
    n: usize,
    x_f: f64,
    payoff: &PayoffMatrix,
    alpha_t: f64,
) -> Result<f64> {
    let class = NetworkClass::Ba { k_mean, n };
    population_step(&class, UpdateRule::BirthDeath, x_f, payoff, alpha_t)
}

/// Iterates the discrete closed-form update `x(t+1) = x(t) + xdot(t)` for
/// `slots` slots, recording both the share and its per-slot change.
pub fn iterate_discrete(
    class: &NetworkClass,
    rule: UpdateRule,
    payoff: &PayoffMatrix,
    alpha: &SelectionIntensity,
    x0: f64,
    slots: usize,
) -> Result<Trajectory> {
    if !(0.0..=1.0).contains(&x0) {
        return Err(Error::arg(format!("x0={x0} must lie in [0, 1]")));
    }
    let mut x = x0;
    let mut xs = Vec::with_capacity(slots + 1);
    let mut xdots = Vec::with_capacity(slots + 1);
    for t in 0..=slots {
        let xdot = population_step(class, rule, x, payoff, alpha.at(t as f64))?;
        xs.push(x);
        xdots.push(xdot);
        x = (x + xdot).clamp(0.0, 1.0);
    }
    Ok(Trajectory {
        x_f: xs,
        xdot: Some(xdots),
        edge_states: None,
        stderr: None,
        meta: TrajectoryMeta {
            rule: Some(format!("{rule:?}")),
            network: Some(format!("{class:?}")),
            payoff: Some((payoff.u_ff(), payoff.u_fn(), payoff.u_nn())),
            alpha: Some(format!("{alpha:?}")),
            seed: None,
        },
    })
}

/// Factored parameters of the general diffusion ODE
/// `dx/dt = beta * e^(-eps*t) * x(1-x)(x+gamma)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralOdeParams {
    pub beta: f64,
    pub gamma: f64,
    pub eps: f64,
    pub x0: f64,
}

/// Affine parameterization `dx/dt = e^(-eps*t) * x(1-x) * (beta*x + delta)`.
///
/// Equivalent to [`GeneralOdeParams`] with `delta = beta * gamma`, but
/// remains well-defined when the quadratic coefficient vanishes (`gamma`
/// would diverge).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineOdeParams {
    pub beta: f64,
    pub delta: f64,
    pub eps: f64,
    pub x0: f64,
}

impl From<GeneralOdeParams> for AffineOdeParams {
    fn from(p: GeneralOdeParams) -> Self {
        Self {
            beta: p.beta,
            delta: p.beta * p.gamma,
            eps: p.eps,
            x0: p.x0,
        }
    }
}

impl AffineOdeParams {
    /// `gamma = delta / beta`, reported only when the quadratic coefficient
    /// is meaningfully nonzero.
    pub fn gamma(&self) -> Option<f64> {
        (self.beta.abs() >= 1e-6).then(|| self.delta / self.beta)
    }

    fn validate(&self) -> Result<()> {
        if !(self.eps >= 0.0) {
            return Err(Error::arg(format!("eps={} must be >= 0", self.eps)));
        }
        if !(self.x0 > 0.0 && self.x0 < 1.0) {
            return Err(Error::arg(format!("x0={} must lie in (0, 1)", self.x0)));
        }
        Ok(())
    }

    fn rate(&self, t: f64, x: f64) -> f64 {
        (-self.eps * t).exp() * x * (1.0 - x) * (self.beta * x + self.delta)
    }
}

/// Integrates the general diffusion ODE with fixed-step 4th-order
/// Runge-Kutta, sampling `x` and `dx/dt` once per slot.
///
/// When a step pushes `x` outside `[0, 1]` by more than 1e-9 the whole
/// integration restarts with the step halved, up to 10 times.
pub fn integrate_general(
    params: &AffineOdeParams,
    horizon_slots: usize,
    dt: f64,
) -> Result<Trajectory> {
    params.validate()?;
    if !(dt > 0.0 && dt <= 1.0) {
        return Err(Error::arg(format!("dt={dt} must lie in (0, 1]")));
    }
    let mut substeps = (1.0 / dt).ceil() as usize;
    'halving: for _ in 0..=10 {
        let h = 1.0 / substeps as f64;
        let mut x = params.x0;
        let mut xs = Vec::with_capacity(horizon_slots + 1);
        let mut xdots = Vec::with_capacity(horizon_slots + 1);
        xs.push(x);
        xdots.push(params.rate(0.0, x));
        for slot in 0..horizon_slots {
            for sub in 0..substeps {
                let t = slot as f64 + sub as f64 * h;
                let k1 = params.rate(t, x);
                let k2 = params.rate(t + 0.5 * h, x + 0.5 * h * k1);
                let k3 = params.rate(t + 0.5 * h, x + 0.5 * h * k2);
                let k4 = params.rate(t + h, x + h * k3);
                x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                if !(-1e-9..=1.0 + 1e-9).contains(&x) {
                    substeps *= 2;
                    continue 'halving;
                }
                x = x.clamp(0.0, 1.0);
            }
            let t_next = (slot + 1) as f64;
            xs.push(x);
            xdots.push(params.rate(t_next, x));
        }
        return Ok(Trajectory {
            x_f: xs,
            xdot: Some(xdots),
            edge_states: None,
            stderr: None,
            meta: TrajectoryMeta::default(),
        });
    }
    Err(Error::arg(format!(
        "integration left [0, 1] even at dt={}; parameters {params:?} are too stiff",
        1.0 / substeps as f64
    )))
}

/// Left-hand side of the separated first integral of the general ODE:
///
/// `F(x) = [(gamma+1) ln x - gamma ln(1-x) - ln|x+gamma|] / (gamma (gamma+1))`
///
/// Along any trajectory, `F(x(t)) = -(beta/eps) e^(-eps t) + c`. The
/// absolute value admits both signs of `x + gamma`; a trajectory never
/// crosses `-gamma` (it is a rest point), so the log branch is constant
/// per trajectory and only shifts `c`.
pub fn implicit_lhs(x: f64, gamma: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::domain(format!("x={x} must lie in (0, 1)")));
    }
    if gamma == 0.0 || gamma == -1.0 {
        return Err(Error::domain(format!(
            "gamma={gamma} makes the partial fractions degenerate"
        )));
    }
    if x + gamma == 0.0 {
        return Err(Error::domain(format!(
            "x={x} sits on the rest point -gamma={}",
            -gamma
        )));
    }
    Ok(((gamma + 1.0) * x.ln() - gamma * (1.0 - x).ln() - (x + gamma).abs().ln())
        / (gamma * (gamma + 1.0)))
}
