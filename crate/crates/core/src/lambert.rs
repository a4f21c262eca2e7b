//! Positive roots of `u·e^u = β` and `u·(e^u − 1) = β`.

use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-12;
pub const MIN_TOL: f64 = 1e-15;
pub const MAX_ITERATIONS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LambertKind {
    /// `u·e^u = β`
    Classical,
    /// `u·(e^u − 1) = β`
    Modified,
}

impl LambertKind {
    pub fn name(self) -> &'static str {
        match self {
            LambertKind::Classical => "classical",
            LambertKind::Modified => "modified",
        }
    }

    /// Left-hand side of the equation.
    pub fn lhs(self, u: f64) -> f64 {
        match self {
            LambertKind::Classical => u * u.exp(),
            LambertKind::Modified => u * u.exp_m1(),
        }
    }

    fn derivative(self, u: f64) -> f64 {
        match self {
            LambertKind::Classical => (1.0 + u) * u.exp(),
            LambertKind::Modified => u.exp_m1() + u * u.exp(),
        }
    }
}

impl std::str::FromStr for LambertKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(LambertKind::Classical),
            "modified" => Ok(LambertKind::Modified),
            other => Err(Error::domain(format!("unknown lambert kind '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LambertSolution {
    pub u: f64,
    pub beta: f64,
    pub kind: LambertKind,
    /// `lhs(u) − β`
    pub residual: f64,
    pub iterations: usize,
}

fn initial_bracket(beta: f64, kind: LambertKind) -> (f64, f64) {
    let hi = 1.0 + beta.ln_1p();
    let lo = match kind {
        LambertKind::Classical => beta / (1.0 + beta * std::f64::consts::E),
        // u(e^u − 1) ≥ u², so √β is only a lower end when β ≤ 1
        LambertKind::Modified => beta.sqrt().min(beta) * 0.5,
    };
    (lo, hi)
}

/// Solves for the unique positive root with `|lhs(u) − β| ≤ tol·max(1, β)`.
///
/// For large β a one-ulp change of `u` can move the residual by more than
/// `tol·β`; the root is then returned once it is pinned to adjacent doubles.
///
/// Safeguarded Newton: a Newton step is taken when it stays strictly inside
/// the current sign-change bracket, bisection otherwise.
pub fn solve_lambert(beta: f64, kind: LambertKind, tol: f64) -> Result<LambertSolution> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::domain(format!("beta must be positive and finite, got {beta}")));
    }
    if !(tol >= MIN_TOL) || !tol.is_finite() {
        return Err(Error::domain(format!("tol must be at least {MIN_TOL}, got {tol}")));
    }
    let f = |u: f64| kind.lhs(u) - beta;
    let (mut lo, mut hi) = initial_bracket(beta, kind);
    while f(lo) > 0.0 {
        lo *= 0.5;
    }
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    let scale = beta.max(1.0);
    let mut u = if beta > std::f64::consts::E {
        let l = beta.ln();
        l - l.ln()
    } else {
        match kind {
            LambertKind::Classical => beta / (1.0 + beta),
            LambertKind::Modified => beta.sqrt() / (1.0 + beta.sqrt() / 4.0),
        }
    };
    if !(u > lo && u < hi) {
        u = 0.5 * (lo + hi);
    }
    for iterations in 1..=MAX_ITERATIONS {
        let r = f(u);
        if r.abs() <= tol * scale {
            return Ok(LambertSolution {
                u,
                beta,
                kind,
                residual: r,
                iterations,
            });
        }
        if r < 0.0 {
            lo = u;
        } else {
            hi = u;
        }
        let newton = u - r / kind.derivative(u);
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if next == u || hi - lo <= f64::EPSILON * hi {
            // bracket exhausted at double resolution: the root is within an
            // ulp, which is all a double can express
            let r = f(next);
            let one_ulp = kind.derivative(next) * next * f64::EPSILON;
            if r.abs() <= (tol * scale).max(one_ulp) {
                return Ok(LambertSolution {
                    u: next,
                    beta,
                    kind,
                    residual: r,
                    iterations,
                });
            }
            break;
        }
        u = next;
    }
    Err(Error::Convergence {
        what: "lambert root",
        iterations: MAX_ITERATIONS,
    })
}

/// Leading terms `ln β − ln ln β` of the large-β expansion, shared by both kinds.
pub fn lambert_expansion(beta: f64, kind: LambertKind) -> Result<f64> {
    let _ = kind;
    let e2 = std::f64::consts::E * std::f64::consts::E;
    if !(beta > e2) || !beta.is_finite() {
        return Err(Error::domain(format!("expansion needs beta > e^2, got {beta}")));
    }
    let l = beta.ln();
    Ok(l - l.ln())
}

fn check_u(u: f64) -> Result<()> {
    if !(u > 0.0) || !u.is_finite() {
        return Err(Error::domain(format!("u must be positive and finite, got {u}")));
    }
    Ok(())
}

/// `h(u) = u − 1 + 1/u − 1/(u·e^u)`.
pub fn h_of_u(u: f64) -> Result<f64> {
    check_u(u)?;
    Ok(u - 1.0 + 1.0 / u - (-u).exp() / u)
}

/// `h̃(u) = u − 1 + 1/u + ln((e^u − 1)/u)`, in the form printed alongside the
/// modified equation. See [`restricted_exponent`] for the exponent that the
/// saddle point of `exp{x(e^u − u − 1)}` actually produces.
pub fn h_tilde_of_u(u: f64) -> Result<f64> {
    check_u(u)?;
    Ok(u - 1.0 + 1.0 / u + (u.exp_m1() / u).ln())
}

fn ln_expm1(u: f64) -> f64 {
    if u > 1.0 {
        u + (-(-u).exp()).ln_1p()
    } else {
        u.exp_m1().ln()
    }
}

/// `ln(e^u − 1) − 1 + 1/u − 1/(e^u − 1)`.
///
/// With `u(e^u − 1) = k/x` this is `(1/k)·ln B̃_k(x) − ln x` to leading order.
pub fn restricted_exponent(u: f64) -> Result<f64> {
    check_u(u)?;
    Ok(ln_expm1(u) - 1.0 + 1.0 / u - 1.0 / u.exp_m1())
}
