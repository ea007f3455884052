//! Deterministic local minimizers: Nelder-Mead and BFGS with a
//! central-difference gradient.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimizerKind {
    #[serde(alias = "nm")]
    NelderMead,
    Bfgs,
}

impl std::str::FromStr for OptimizerKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nelder_mead" | "nm" => Ok(Self::NelderMead),
            "bfgs" => Ok(Self::Bfgs),
            other => Err(Error::InvalidArgument(format!("unknown optimizer {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerSettings {
    pub kind: OptimizerKind,
    /// Stop once the central-difference gradient has 2-norm at most this.
    pub gradient_tolerance: f64,
    pub max_iterations: usize,
    pub fd_step: f64,
    /// Nelder-Mead initial simplex offset per coordinate.
    pub simplex_offset: f64,
    /// Armijo sufficient-decrease constant.
    pub armijo: f64,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self {
            kind: OptimizerKind::Bfgs,
            gradient_tolerance: 1e-6,
            max_iterations: 1000,
            fd_step: 1e-4,
            simplex_offset: 0.05,
            armijo: 1e-4,
        }
    }
}

impl OptimizerSettings {
    pub fn with_kind(kind: OptimizerKind) -> Self {
        Self {
            kind,
            max_iterations: match kind {
                OptimizerKind::Bfgs => 1000,
                OptimizerKind::NelderMead => 20000,
            },
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
    pub evaluations: usize,
    /// False when the iteration cap or a failed line search ended the run.
    pub converged: bool,
}

struct Counted<'a> {
    f: &'a mut dyn FnMut(&[f64]) -> Result<f64>,
    evaluations: usize,
    iteration: usize,
}

impl Counted<'_> {
    fn eval(&mut self, x: &[f64]) -> Result<f64> {
        self.evaluations += 1;
        let v = (self.f)(x)?;
        if !v.is_finite() {
            return Err(Error::NonFiniteObjective {
                iteration: self.iteration,
            });
        }
        Ok(v)
    }

    fn gradient(&mut self, x: &[f64], h: f64) -> Result<Vec<f64>> {
        let mut probe = x.to_vec();
        let mut g = vec![0.0; x.len()];
        for i in 0..x.len() {
            probe[i] = x[i] + h;
            let up = self.eval(&probe)?;
            probe[i] = x[i] - h;
            let down = self.eval(&probe)?;
            probe[i] = x[i];
            g[i] = (up - down) / (2.0 * h);
        }
        Ok(g)
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Central-difference gradient of `f` at `x`.
pub fn finite_difference_gradient(
    f: &mut dyn FnMut(&[f64]) -> Result<f64>,
    x: &[f64],
    step: f64,
) -> Result<Vec<f64>> {
    Counted {
        f,
        evaluations: 0,
        iteration: 0,
    }
    .gradient(x, step)
}

/// Minimizes `f` from `x0`.
pub fn minimize(
    f: &mut dyn FnMut(&[f64]) -> Result<f64>,
    x0: &[f64],
    settings: &OptimizerSettings,
) -> Result<OptimizeOutcome> {
    if let Some(v) = x0.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite initial parameter {v}")));
    }
    let mut counted = Counted {
        f,
        evaluations: 0,
        iteration: 0,
    };
    if x0.is_empty() {
        let value = counted.eval(x0)?;
        return Ok(OptimizeOutcome {
            x: Vec::new(),
            value,
            gradient_norm: 0.0,
            iterations: 0,
            evaluations: 1,
            converged: true,
        });
    }
    match settings.kind {
        OptimizerKind::Bfgs => bfgs(&mut counted, x0, settings),
        OptimizerKind::NelderMead => nelder_mead(&mut counted, x0, settings),
    }
}

fn bfgs(f: &mut Counted, x0: &[f64], s: &OptimizerSettings) -> Result<OptimizeOutcome> {
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut fx = f.eval(&x)?;
    let mut g = f.gradient(&x, s.fd_step)?;
    // inverse Hessian approximation, row-major
    let mut h = identity(n);
    let mut converged = false;
    let mut iterations = 0;
    while iterations < s.max_iterations {
        if norm(&g) <= s.gradient_tolerance {
            converged = true;
            break;
        }
        iterations += 1;
        f.iteration = iterations;
        let mut d: Vec<f64> = (0..n).map(|i| -dot(&h[i * n..(i + 1) * n], &g)).collect();
        let mut slope = dot(&g, &d);
        if slope >= 0.0 {
            h = identity(n);
            d = g.iter().map(|v| -v).collect();
            slope = -dot(&g, &g);
        }
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + alpha * di).collect();
            let ft = f.eval(&trial)?;
            if ft <= fx + s.armijo * alpha * slope {
                accepted = Some((trial, ft));
                break;
            }
            alpha *= 0.5;
        }
        let Some((x_new, f_new)) = accepted else {
            // no descent at numerical resolution
            break;
        };
        let g_new = f.gradient(&x_new, s.fd_step)?;
        let step: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&step, &y);
        if sy > 1e-16 {
            if iterations == 1 {
                // scale the initial guess to the observed curvature
                let scale = sy / dot(&y, &y);
                h.iter_mut().for_each(|v| *v *= scale);
            }
            let hy: Vec<f64> = (0..n).map(|i| dot(&h[i * n..(i + 1) * n], &y)).collect();
            let yhy = dot(&y, &hy);
            let rho = 1.0 / sy;
            for i in 0..n {
                for j in 0..n {
                    h[i * n + j] += rho * rho * (sy + yhy) * step[i] * step[j]
                        - rho * (hy[i] * step[j] + step[i] * hy[j]);
                }
            }
        }
        x = x_new;
        fx = f_new;
        g = g_new;
    }
    if !converged && norm(&g) <= s.gradient_tolerance {
        converged = true;
    }
    Ok(OptimizeOutcome {
        gradient_norm: norm(&g),
        x,
        value: fx,
        iterations,
        evaluations: f.evaluations,
        converged,
    })
}

fn identity(n: usize) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        m[i * n + i] = 1.0;
    }
    m
}

/// Reflection 1, expansion 2, contraction 0.5, shrink 0.5. When the simplex
/// collapses the gradient is checked; if it is still too large the simplex
/// is rebuilt around the best vertex.
fn nelder_mead(f: &mut Counted, x0: &[f64], s: &OptimizerSettings) -> Result<OptimizeOutcome> {
    const ALPHA: f64 = 1.0;
    const GAMMA: f64 = 2.0;
    const RHO: f64 = 0.5;
    const SIGMA: f64 = 0.5;
    let n = x0.len();

    let build = |f: &mut Counted, center: &[f64], offset: f64| -> Result<Vec<(Vec<f64>, f64)>> {
        let mut simplex = vec![(center.to_vec(), f.eval(center)?)];
        for i in 0..n {
            let mut v = center.to_vec();
            v[i] += offset;
            let fv = f.eval(&v)?;
            simplex.push((v, fv));
        }
        Ok(simplex)
    };

    let mut simplex = build(f, x0, s.simplex_offset)?;
    let mut iterations = 0;
    let mut gradient_norm = f64::INFINITY;
    let mut converged = false;
    while iterations < s.max_iterations {
        // stable sort keeps ties in insertion order
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[n].1;
        let diameter = simplex[1..]
            .iter()
            .map(|(v, _)| v.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if worst - best <= 1e-13 * (1.0 + best.abs()) || diameter <= 1e-9 {
            let g = f.gradient(&simplex[0].0, s.fd_step)?;
            gradient_norm = norm(&g);
            if gradient_norm <= s.gradient_tolerance {
                converged = true;
                break;
            }
            let center = simplex[0].0.clone();
            let offset = (10.0 * diameter).max(10.0 * gradient_norm).clamp(1e-6, s.simplex_offset);
            simplex = build(f, &center, offset)?;
            continue;
        }
        iterations += 1;
        f.iteration = iterations;

        let mut centroid = vec![0.0; n];
        for (v, _) in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }
        let toward = |coef: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n].0)
                .map(|(c, w)| c + coef * (c - w))
                .collect()
        };
        let xr = toward(ALPHA);
        let fr = f.eval(&xr)?;
        if fr < simplex[0].1 {
            let xe = toward(GAMMA);
            let fe = f.eval(&xe)?;
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < simplex[n].1 {
                let xc = toward(RHO * ALPHA);
                let fc = f.eval(&xc)?;
                (xc, fc)
            } else {
                let xc = toward(-RHO);
                let fc = f.eval(&xc)?;
                (xc, fc)
            };
            if fc < simplex[n].1.min(fr) {
                simplex[n] = (xc, fc);
            } else {
                let x_best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let v: Vec<f64> = x_best
                        .iter()
                        .zip(&vertex.0)
                        .map(|(b, x)| b + SIGMA * (x - b))
                        .collect();
                    let fv = f.eval(&v)?;
                    *vertex = (v, fv);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    if !converged {
        gradient_norm = norm(&f.gradient(&x, s.fd_step)?);
        converged = gradient_norm <= s.gradient_tolerance;
    }
    Ok(OptimizeOutcome {
        x,
        value,
        gradient_norm,
        iterations,
        evaluations: f.evaluations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadratic(x: &[f64]) -> Result<f64> {
        Ok((x[0] - 0.3).powi(2))
    }

    #[test]
    fn both_optimizers_solve_quadratic() {
        for kind in [OptimizerKind::Bfgs, OptimizerKind::NelderMead] {
            let out = minimize(&mut quadratic, &[0.0], &OptimizerSettings::with_kind(kind)).unwrap();
            assert!((out.x[0] - 0.3).abs() < 1e-6, "{kind:?}: {:?}", out.x);
            assert!(out.converged);
        }
    }

    #[test]
    fn rosenbrock_bfgs() {
        let mut f = |x: &[f64]| Ok((1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2));
        let out = minimize(&mut f, &[-1.2, 1.0], &OptimizerSettings::default()).unwrap();
        assert!((out.x[0] - 1.0).abs() < 1e-4 && (out.x[1] - 1.0).abs() < 1e-4, "{:?}", out.x);
    }

    #[test]
    fn nelder_mead_multidimensional() {
        let mut f = |x: &[f64]| {
            Ok(x.iter().enumerate().map(|(i, v)| (i as f64 + 1.0) * (v - 0.1 * i as f64).powi(2)).sum())
        };
        let out = minimize(&mut f, &[0.0; 4], &OptimizerSettings::with_kind(OptimizerKind::NelderMead)).unwrap();
        assert!(out.converged);
        for (i, v) in out.x.iter().enumerate() {
            assert!((v - 0.1 * i as f64).abs() < 1e-5);
        }
    }

    #[test]
    fn non_finite_objective_rejected() {
        let mut f = |_: &[f64]| Ok(f64::NAN);
        assert!(matches!(
            minimize(&mut f, &[0.0], &OptimizerSettings::default()),
            Err(Error::NonFiniteObjective { .. })
        ));
    }

    #[test]
    fn deterministic() {
        let mut f = |x: &[f64]| Ok((x[0] - 1.0).powi(4) + (x[0] * x[1] - 0.5).powi(2));
        let s = OptimizerSettings::default();
        let a = minimize(&mut f, &[0.1, 0.2], &s).unwrap();
        let b = minimize(&mut f, &[0.1, 0.2], &s).unwrap();
        assert_eq!(a, b);
    }
}
