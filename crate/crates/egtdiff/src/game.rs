//! Two-strategy payoff model, fitness, and fully-mixed replicator dynamics.
//!
//! Users play a symmetric 2x2 game: forwarding against forwarding pays
//! `u_ff`, forwarding against ignoring pays `u_fn` to both, ignoring against
//! ignoring pays `u_nn`. Fitness blends a baseline with game payoff through a
//! selection intensity `alpha`; the population share of forwarders then
//! evolves by replicator dynamics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Symmetric payoffs of the forward/ignore game.
///
/// The default constructor enforces the normalization `0 < u < 1` for every
/// entry. Payoff matrices recovered from data fits may leave that interval
/// and are built with [`PayoffMatrix::unconstrained`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PayoffMatrix {
    u_ff: f64,
    u_fn: f64,
    u_nn: f64,
}

impl PayoffMatrix {
    /// Builds a payoff matrix with all entries in the open interval (0, 1).
    pub fn new(u_ff: f64, u_fn: f64, u_nn: f64) -> Result<Self> {
        for (name, u) in [("u_ff", u_ff), ("u_fn", u_fn), ("u_nn", u_nn)] {
            if !(u > 0.0 && u < 1.0) {
                return Err(Error::arg(format!(
                    "payoff {name}={u} must lie strictly inside (0, 1)"
                )));
            }
        }
        Ok(Self { u_ff, u_fn, u_nn })
    }

    /// Builds a payoff matrix without the (0, 1) normalization check.
    ///
    /// Used for matrices recovered by the estimation pipeline, where `u_fn`
    /// is pinned to 1 and the other entries land wherever the fit puts them.
    pub fn unconstrained(u_ff: f64, u_fn: f64, u_nn: f64) -> Self {
        Self { u_ff, u_fn, u_nn }
    }

    /// The four payoff presets used by the synthetic experiments.
    ///
    /// 1: `u_ff > u_fn > u_nn` (0.8, 0.6, 0.4) — forwarding dominates.
    /// 2: `u_fn > u_ff > u_nn` (0.6, 0.8, 0.4) — mixed, majority forwards.
    /// 3: `u_fn > u_nn > u_ff` (0.4, 0.8, 0.6) — mixed, minority forwards.
    /// 4: `u_nn > u_fn > u_ff` (0.4, 0.6, 0.8) — ignoring dominates.
    pub fn preset_case(case: u8) -> Result<Self> {
        match case {
            1 => Self::new(0.8, 0.6, 0.4),
            2 => Self::new(0.6, 0.8, 0.4),
            3 => Self::new(0.4, 0.8, 0.6),
            4 => Self::new(0.4, 0.6, 0.8),
            other => Err(Error::arg(format!("payoff case {other} not in 1..=4"))),
        }
    }

    pub fn u_ff(&self) -> f64 {
        self.u_ff
    }

    pub fn u_fn(&self) -> f64 {
        self.u_fn
    }

    pub fn u_nn(&self) -> f64 {
        self.u_nn
    }

    /// True when all entries coincide, which freezes the dynamics.
    pub fn is_neutral(&self) -> bool {
        self.u_ff == self.u_fn && self.u_fn == self.u_nn
    }

    /// Whether every entry satisfies the (0, 1) normalization.
    pub fn is_normalized(&self) -> bool {
        [self.u_ff, self.u_fn, self.u_nn]
            .iter()
            .all(|u| *u > 0.0 && *u < 1.0)
    }
}

/// Selection intensity: the weight of game payoff in fitness.
///
/// Either a constant in (0, 1] or an exponentially decaying schedule
/// `alpha(t) = scale * exp(-rate * t)` whose value stays in (0, 1] for all
/// `t >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SelectionIntensity {
    Constant(f64),
    Decaying { scale: f64, rate: f64 },
}

impl SelectionIntensity {
    pub fn constant(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self::Constant(alpha))
    }

    pub fn decaying(scale: f64, rate: f64) -> Result<Self> {
        if !(scale > 0.0 && scale <= 1.0) {
            return Err(Error::arg(format!(
                "decay scale {scale} must lie in (0, 1] so alpha(t) stays in (0, 1]"
            )));
        }
        if !(rate >= 0.0) {
            return Err(Error::arg(format!("decay rate {rate} must be >= 0")));
        }
        Ok(Self::Decaying { scale, rate })
    }

    /// Evaluates the schedule at time `t >= 0`.
    pub fn at(&self, t: f64) -> f64 {
        match *self {
            Self::Constant(a) => a,
            Self::Decaying { scale, rate } => scale * (-rate * t).exp(),
        }
    }
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

/// Global, edge, and conditional (local) strategy shares of a population.
///
/// `x_f` is the forwarder share; `x_ff`, `x_fn`, `x_nn` are edge shares by
/// endpoint strategies; `x_f_given_f` / `x_f_given_n` are the shares of
/// forwarding neighbors around a forwarder / an ignorer. The fields satisfy
/// `x_f_given_f * x_f = x_ff` and `(1 - x_f_given_f) * x_f =
/// x_f_given_n * (1 - x_f)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationState {
    pub x_f: f64,
    pub x_ff: f64,
    pub x_fn: f64,
    pub x_nn: f64,
    pub x_f_given_f: f64,
    pub x_f_given_n: f64,
}

impl PopulationState {
    /// State of a well-mixed population: edges pair independently, so the
    /// local shares equal the global one.
    pub fn well_mixed(x_f: f64) -> Result<Self> {
        check_fraction("x_f", x_f)?;
        let x_n = 1.0 - x_f;
        Ok(Self {
            x_f,
            x_ff: x_f * x_f,
            x_fn: 2.0 * x_f * x_n,
            x_nn: x_n * x_n,
            x_f_given_f: x_f,
            x_f_given_n: x_f,
        })
    }

    /// Builds a state from global and edge shares, deriving the conditionals.
    pub fn from_edge_states(x_f: f64, x_ff: f64, x_fn: f64, x_nn: f64) -> Result<Self> {
        check_fraction("x_f", x_f)?;
        for (name, v) in [("x_ff", x_ff), ("x_fn", x_fn), ("x_nn", x_nn)] {
            check_fraction(name, v)?;
        }
        let sum = x_ff + x_fn + x_nn;
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::arg(format!(
                "edge shares must sum to 1, got {sum}"
            )));
        }
        let x_f_given_f = if x_f > 0.0 { x_ff / x_f } else { 0.0 };
        let x_f_given_n = if x_f < 1.0 {
            (1.0 - x_f_given_f) * x_f / (1.0 - x_f)
        } else {
            0.0
        };
        Ok(Self {
            x_f,
            x_ff,
            x_fn,
            x_nn,
            x_f_given_f,
            x_f_given_n,
        })
    }
}

fn check_fraction(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::arg(format!("{name}={v} must lie in [0, 1]")))
    }
}

/// Coefficients of the affine factor in `xdot = alpha * prefactor *
/// x(1-x)(a*x + b)`, the shared shape of all closed-form dynamics here.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynamicsCoefficients {
    pub a: f64,
    pub b: f64,
    pub prefactor: f64,
}

impl DynamicsCoefficients {
    /// Interior rest point `-b/a` of the affine factor, when it lies in (0, 1).
    pub fn interior_root(&self) -> Option<f64> {
        if self.a == 0.0 {
            return None;
        }
        let root = -self.b / self.a;
        (root > 0.0 && root < 1.0).then_some(root)
    }
}

/// Fitness as the convex blend `(1 - alpha) * baseline + alpha * payoff_share`.
pub fn fitness(baseline: f64, payoff_share: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok((1.0 - alpha) * baseline + alpha * payoff_share)
}

/// Mean fitness of forwarders, of ignorers, and of the whole population,
/// for a well-mixed population in state `x_f` with baseline fitness 1.
pub fn mean_fitness_by_strategy(
    state: &PopulationState,
    payoff: &PayoffMatrix,
    alpha: f64,
) -> Result<(f64, f64, f64)> {
    check_alpha(alpha)?;
    let x_f = state.x_f;
    let psi_f = 1.0 - alpha + alpha * (x_f * payoff.u_ff + (1.0 - x_f) * payoff.u_fn);
    let psi_n = 1.0 - alpha + alpha * (x_f * payoff.u_fn + (1.0 - x_f) * payoff.u_nn);
    let psi = x_f * psi_f + (1.0 - x_f) * psi_n;
    Ok((psi_f, psi_n, psi))
}

/// Affine-factor coefficients of the fully-mixed replicator dynamics:
/// `a = u_ff - 2 u_fn + u_nn`, `b = u_fn - u_nn`, prefactor 1.
pub fn coefficients_complete(payoff: &PayoffMatrix) -> DynamicsCoefficients {
    DynamicsCoefficients {
        a: payoff.u_ff - 2.0 * payoff.u_fn + payoff.u_nn,
        b: payoff.u_fn - payoff.u_nn,
        prefactor: 1.0,
    }
}

/// One discrete replicator step of the fully-mixed population.
///
/// Returns `(xdot, next)` where `xdot = alpha * x(1-x)(a*x + b)` and
/// `next = clamp(x + xdot, 0, 1)`. A neutral game short-circuits to zero.
pub fn replicator_step_complete(
    x_f: f64,
    payoff: &PayoffMatrix,
    alpha_t: f64,
) -> Result<(f64, f64)> {
    check_fraction("x_f", x_f)?;
    check_alpha(alpha_t)?;
    let c = coefficients_complete(payoff);
    if c.a == 0.0 && c.b == 0.0 {
        return Ok((0.0, x_f));
    }
    let xdot = alpha_t * x_f * (1.0 - x_f) * (c.a * x_f + c.b);
    let next = (x_f + xdot).clamp(0.0, 1.0);
    Ok((xdot, next))
}
