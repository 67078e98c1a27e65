//! Transmission refinement by operator splitting.
//!
//! Per color channel the coarse map is refined by minimizing
//!
//!   lambda1/2 ||Ibar - Jbar t||^2 + lambda2/2 ||t - tbar||^2
//!   + lambda3 ||W o (grad t - grad I)||_1 + lambda4 ||grad Jbar||_1
//!   + lambda5 ||grad t||_1
//!
//! over both the transmission t and the airlight-relative scene Jbar, where
//! Ibar = A - I. Splitting variables X = grad t - grad I, Y = grad Jbar and
//! Z = grad t turn the L1 terms into componentwise soft-thresholding steps,
//! while the two quadratic subproblems diagonalize over the periodic grid
//! and are solved exactly in the frequency domain. Scaled dual ascent closes
//! each sweep.
//!
//! The refined Jbar tends to lose fine texture, so only the transmission
//! estimate leaves this module; the output image is reconstructed from the
//! scattering model afterwards.

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grad::{gradient, GradientPair};
use crate::spectral::{gradient_transfer_spectrum, laplacian_spectrum, Complex64, Spectral};

/// Magnitude floor applied to Jbar before the Ibar / Jbar division in the
/// transmission solve; the sign of Jbar is preserved.
pub const J_EPS: f64 = 1e-2;

/// Parameters of the refinement stage.
#[derive(Debug, Clone, PartialEq)]
pub struct RefineParams {
    /// Scattering-model data term weight.
    pub lambda1: f64,
    /// Fidelity to the coarse transmission map.
    pub lambda2: f64,
    /// Edge-aware gradient matching term.
    pub lambda3: f64,
    /// Total variation of the scene estimate.
    pub lambda4: f64,
    /// Total variation of the transmission map.
    pub lambda5: f64,
    /// Penalty weights of the three splitting constraints.
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    /// Edge-weight falloff; larger values treat smaller gradients as edges.
    pub gamma: f64,
    /// Dual ascent steplength, at most (1 + sqrt 5) / 2.
    pub upsilon: f64,
    /// Transmission floor used in divisions and the final clamp.
    pub t_eps: f64,
    /// Iteration cap.
    pub max_iters: usize,
    /// Relative-change stopping threshold on t.
    pub rel_tol: f64,
}

impl Default for RefineParams {
    fn default() -> Self {
        RefineParams {
            lambda1: 1e-2,
            lambda2: 5e-1,
            lambda3: 5.0,
            lambda4: 1.0,
            lambda5: 1.0,
            beta1: 1.0,
            beta2: 1.0,
            beta3: 1.0,
            gamma: 2e2,
            upsilon: (1.0 + 5f64.sqrt()) / 2.0,
            t_eps: 1e-1,
            max_iters: 30,
            rel_tol: 1e-3,
        }
    }
}

impl RefineParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("lambda1", self.lambda1),
            ("lambda2", self.lambda2),
            ("lambda3", self.lambda3),
            ("lambda4", self.lambda4),
            ("lambda5", self.lambda5),
            ("beta1", self.beta1),
            ("beta2", self.beta2),
            ("beta3", self.beta3),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid("refine parameter", format!("{name} = {v} must be > 0")));
            }
        }
        if !(self.gamma >= 0.0) {
            return Err(Error::invalid("gamma", format!("{} must be >= 0", self.gamma)));
        }
        let upsilon_max = (1.0 + 5f64.sqrt()) / 2.0;
        if !(self.upsilon > 0.0 && self.upsilon <= upsilon_max) {
            return Err(Error::invalid(
                "upsilon",
                format!("{} must lie in (0, {upsilon_max}]", self.upsilon),
            ));
        }
        if !(self.t_eps > 0.0 && self.t_eps < 1.0) {
            return Err(Error::invalid("t_eps", format!("{} must lie in (0, 1)", self.t_eps)));
        }
        if self.max_iters == 0 {
            return Err(Error::invalid("max_iters", "must be >= 1"));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::invalid("rel_tol", format!("{} must be > 0", self.rel_tol)));
        }
        Ok(())
    }
}

/// State of one per-channel solve.
#[derive(Debug, Clone)]
pub struct AdmmState {
    pub t: ScalarField,
    pub j_bar: ScalarField,
    pub x: GradientPair,
    pub y: GradientPair,
    pub z: GradientPair,
    pub xi: GradientPair,
    pub eta: GradientPair,
    pub zeta: GradientPair,
    pub iteration: usize,
}

impl AdmmState {
    /// Fresh state: t starts at the coarse map, Jbar at its stabilized
    /// initialization, everything else at zero.
    pub fn init(hazy_c: &ScalarField, a_c: f64, t_bar_c: &ScalarField, t_eps: f64) -> AdmmState {
        let (h, w) = (hazy_c.height(), hazy_c.width());
        AdmmState {
            t: t_bar_c.clone(),
            j_bar: init_jbar(hazy_c, a_c, t_bar_c, t_eps),
            x: GradientPair::zeros(h, w),
            y: GradientPair::zeros(h, w),
            z: GradientPair::zeros(h, w),
            xi: GradientPair::zeros(h, w),
            eta: GradientPair::zeros(h, w),
            zeta: GradientPair::zeros(h, w),
            iteration: 0,
        }
    }
}

/// Per-iteration diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationStats {
    pub iteration: usize,
    pub objective: f64,
    pub res_x: f64,
    pub res_y: f64,
    pub res_z: f64,
    pub dt_rel: f64,
}

/// Result of one per-channel refinement.
#[derive(Debug, Clone)]
pub struct Refined {
    /// Refined transmission, clamped to `[t_eps, 1]`.
    pub transmission: ScalarField,
    pub trace: Vec<IterationStats>,
}

/// Edge weight per gradient component: W_d = exp(-gamma * (d I)^2).
/// Near 1 in homogeneous regions, near 0 across edges.
pub fn edge_weight(i_c: &ScalarField, gamma: f64) -> GradientPair {
    gradient(i_c).map(|d| (-gamma * d * d).exp())
}

/// Stabilized scene initialization: (a_c - I_c) / max(tbar, t_eps).
pub fn init_jbar(hazy_c: &ScalarField, a_c: f64, t_bar: &ScalarField, t_eps: f64) -> ScalarField {
    hazy_c.zip_map(t_bar, |i, t| (a_c - i) / t.max(t_eps))
}

/// Scalar soft-threshold: sign(a) * max(|a| - b, 0).
#[inline]
pub fn soft_threshold(a: f64, b: f64) -> f64 {
    if a > b {
        a - b
    } else if a < -b {
        a + b
    } else {
        0.0
    }
}

/// Componentwise soft-threshold with a spatially varying threshold.
pub fn shrink(a: &GradientPair, threshold: &GradientPair) -> GradientPair {
    a.zip_map(threshold, soft_threshold)
}

/// Componentwise soft-threshold with one scalar threshold.
pub fn shrink_uniform(a: &GradientPair, threshold: f64) -> GradientPair {
    a.map(|v| soft_threshold(v, threshold))
}

/// X sweep: shrink(grad t - grad I + xi / beta1, lambda3 W / beta1).
pub fn update_x(state: &AdmmState, i_c: &ScalarField, params: &RefineParams) -> GradientPair {
    let grad_i = gradient(i_c);
    let weight = edge_weight(i_c, params.gamma);
    let grad_t = gradient(&state.t);
    let arg = GradientPair {
        dx: combine3(&grad_t.dx, &grad_i.dx, &state.xi.dx, params.beta1),
        dy: combine3(&grad_t.dy, &grad_i.dy, &state.xi.dy, params.beta1),
    };
    let threshold = weight.map(|w| params.lambda3 * w / params.beta1);
    shrink(&arg, &threshold)
}

fn combine3(grad_t: &ScalarField, grad_i: &ScalarField, dual: &ScalarField, beta: f64) -> ScalarField {
    let mut out = grad_t.zip_map(grad_i, |t, i| t - i);
    for (o, d) in out.data_mut().iter_mut().zip(dual.data()) {
        *o += d / beta;
    }
    out
}

/// Y sweep: shrink(grad Jbar + eta / beta2, lambda4 / beta2).
pub fn update_y(state: &AdmmState, params: &RefineParams) -> GradientPair {
    let arg = gradient(&state.j_bar).zip_map(&state.eta, |g, e| g + e / params.beta2);
    shrink_uniform(&arg, params.lambda4 / params.beta2)
}

/// Z sweep: shrink(grad t + zeta / beta3, lambda5 / beta3).
pub fn update_z(state: &AdmmState, params: &RefineParams) -> GradientPair {
    let arg = gradient(&state.t).zip_map(&state.zeta, |g, z| g + z / params.beta3);
    shrink_uniform(&arg, params.lambda5 / params.beta3)
}

/// Jbar sweep: exact frequency-domain solve of
/// (lambda1 + beta2 grad^T grad) Jbar = lambda1 (Ibar / t)
///                                      + beta2 grad^T (Y - eta / beta2),
/// the normal equations of the quadratic Jbar subproblem with the data term
/// divided through by t (t floored at t_eps).
pub fn update_jbar(state: &AdmmState, i_bar_c: &ScalarField, params: &RefineParams) -> ScalarField {
    let (h, w) = (i_bar_c.height(), i_bar_c.width());
    let sp = Spectral::new(h, w);
    let (tx, ty) = gradient_transfer_spectrum(h, w);
    let lap = laplacian_spectrum(h, w);

    let q = i_bar_c.zip_map(&state.t, |ib, t| ib / t.max(params.t_eps));
    let vx = state.y.dx.zip_map(&state.eta.dx, |y, e| y - e / params.beta2);
    let vy = state.y.dy.zip_map(&state.eta.dy, |y, e| y - e / params.beta2);

    let fq = sp.forward(&q);
    let fvx = sp.forward(&vx);
    let fvy = sp.forward(&vy);

    let spectrum: Vec<Complex64> = (0..h * w)
        .map(|k| {
            let num = params.lambda1 * fq[k]
                + params.beta2 * (tx[k].conj() * fvx[k] + ty[k].conj() * fvy[k]);
            num / (params.lambda1 + params.beta2 * lap[k])
        })
        .collect();
    sp.inverse(&spectrum)
}

/// t sweep: exact frequency-domain solve of
/// (lambda1 + lambda2 + (beta1 + beta3) grad^T grad) t =
///   lambda1 (Ibar / Jbar) + lambda2 tbar + (beta1 + beta3) grad^T psi,
/// where psi = (beta1 Xhat + beta3 Zhat) / (beta1 + beta3),
/// Xhat = X + grad I - xi / beta1 and Zhat = Z - zeta / beta3. The Jbar
/// divisor is magnitude-floored at [`J_EPS`] with its sign preserved. The
/// result is returned unclamped; the final clamp to `[t_eps, 1]` happens
/// when the solve's transmission is read out.
pub fn update_t(
    state: &AdmmState,
    i_bar_c: &ScalarField,
    t_bar_c: &ScalarField,
    params: &RefineParams,
) -> ScalarField {
    let (h, w) = (i_bar_c.height(), i_bar_c.width());
    let sp = Spectral::new(h, w);
    let (tx, ty) = gradient_transfer_spectrum(h, w);
    let lap = laplacian_spectrum(h, w);

    let r = i_bar_c.zip_map(&state.j_bar, |ib, j| ib / signed_floor(j, J_EPS));
    // grad I = -grad Ibar since Ibar = A - I with constant A.
    let grad_i = gradient(i_bar_c).map(|v| -v);
    let beta_sum = params.beta1 + params.beta3;
    let psi_x = psi_component(
        &state.x.dx, &grad_i.dx, &state.xi.dx, &state.z.dx, &state.zeta.dx, params,
    );
    let psi_y = psi_component(
        &state.x.dy, &grad_i.dy, &state.xi.dy, &state.z.dy, &state.zeta.dy, params,
    );

    let fr = sp.forward(&r);
    let ftb = sp.forward(t_bar_c);
    let fpx = sp.forward(&psi_x);
    let fpy = sp.forward(&psi_y);

    let spectrum: Vec<Complex64> = (0..h * w)
        .map(|k| {
            let num = params.lambda1 * fr[k]
                + params.lambda2 * ftb[k]
                + beta_sum * (tx[k].conj() * fpx[k] + ty[k].conj() * fpy[k]);
            num / (params.lambda1 + params.lambda2 + beta_sum * lap[k])
        })
        .collect();
    sp.inverse(&spectrum)
}

fn psi_component(
    x: &ScalarField,
    grad_i: &ScalarField,
    xi: &ScalarField,
    z: &ScalarField,
    zeta: &ScalarField,
    params: &RefineParams,
) -> ScalarField {
    let beta_sum = params.beta1 + params.beta3;
    let mut out = ScalarField::zeros(x.height(), x.width());
    for k in 0..out.len() {
        let x_hat = x.data()[k] + grad_i.data()[k] - xi.data()[k] / params.beta1;
        let z_hat = z.data()[k] - zeta.data()[k] / params.beta3;
        out.data_mut()[k] = (params.beta1 * x_hat + params.beta3 * z_hat) / beta_sum;
    }
    out
}

#[inline]
fn signed_floor(v: f64, eps: f64) -> f64 {
    if v >= 0.0 {
        v.max(eps)
    } else {
        v.min(-eps)
    }
}

/// Dual ascent on the three constraint residuals:
/// xi   <- xi   - upsilon beta1 (X - (grad t - grad I)),
/// eta  <- eta  - upsilon beta2 (Y - grad Jbar),
/// zeta <- zeta - upsilon beta3 (Z - grad t).
pub fn update_multipliers(
    state: &AdmmState,
    i_c: &ScalarField,
    params: &RefineParams,
) -> (GradientPair, GradientPair, GradientPair) {
    let (rx, ry, rz) = constraint_residuals(state, &gradient(i_c));
    let xi = state.xi.zip_map(&rx, |m, r| m - params.upsilon * params.beta1 * r);
    let eta = state.eta.zip_map(&ry, |m, r| m - params.upsilon * params.beta2 * r);
    let zeta = state.zeta.zip_map(&rz, |m, r| m - params.upsilon * params.beta3 * r);
    (xi, eta, zeta)
}

fn constraint_residuals(
    state: &AdmmState,
    grad_i: &GradientPair,
) -> (GradientPair, GradientPair, GradientPair) {
    let grad_t = gradient(&state.t);
    let grad_j = gradient(&state.j_bar);
    let rx = GradientPair {
        dx: state
            .x
            .dx
            .zip_map(&grad_t.dx.zip_map(&grad_i.dx, |t, i| t - i), |x, g| x - g),
        dy: state
            .x
            .dy
            .zip_map(&grad_t.dy.zip_map(&grad_i.dy, |t, i| t - i), |x, g| x - g),
    };
    let ry = state.y.zip_map(&grad_j, |y, g| y - g);
    let rz = state.z.zip_map(&grad_t, |z, g| z - g);
    (rx, ry, rz)
}

/// Value of the variational objective at the state's (t, Jbar). Diagnostic
/// only; the solver never differentiates this.
pub fn objective(
    state: &AdmmState,
    i_bar_c: &ScalarField,
    t_bar_c: &ScalarField,
    i_c: &ScalarField,
    params: &RefineParams,
) -> f64 {
    let data: f64 = i_bar_c
        .data()
        .iter()
        .zip(state.j_bar.data())
        .zip(state.t.data())
        .map(|((ib, j), t)| {
            let r = ib - j * t;
            r * r
        })
        .sum();
    let anchor: f64 = state
        .t
        .data()
        .iter()
        .zip(t_bar_c.data())
        .map(|(t, tb)| (t - tb) * (t - tb))
        .sum();

    let weight = edge_weight(i_c, params.gamma);
    let grad_i = gradient(i_c);
    let grad_t = gradient(&state.t);
    let grad_j = gradient(&state.j_bar);
    let edge_term = weighted_l1(&grad_t, &grad_i, &weight);
    let tv_j: f64 = grad_j.dx.data().iter().map(|v| v.abs()).sum::<f64>()
        + grad_j.dy.data().iter().map(|v| v.abs()).sum::<f64>();
    let tv_t: f64 = grad_t.dx.data().iter().map(|v| v.abs()).sum::<f64>()
        + grad_t.dy.data().iter().map(|v| v.abs()).sum::<f64>();

    0.5 * params.lambda1 * data
        + 0.5 * params.lambda2 * anchor
        + params.lambda3 * edge_term
        + params.lambda4 * tv_j
        + params.lambda5 * tv_t
}

fn weighted_l1(grad_t: &GradientPair, grad_i: &GradientPair, weight: &GradientPair) -> f64 {
    let mut sum = 0.0;
    for ((t, i), w) in grad_t
        .dx
        .data()
        .iter()
        .zip(grad_i.dx.data())
        .zip(weight.dx.data())
    {
        sum += w * (t - i).abs();
    }
    for ((t, i), w) in grad_t
        .dy
        .data()
        .iter()
        .zip(grad_i.dy.data())
        .zip(weight.dy.data())
    {
        sum += w * (t - i).abs();
    }
    sum
}

/// Refine one channel's coarse transmission map.
///
/// One sweep updates X, Y, Z from the current (t, Jbar), solves the two
/// quadratic subproblems (Jbar first, then t against the fresh Jbar), and
/// ascends the multipliers. The loop stops when the relative change of t
/// drops below `rel_tol` or after `max_iters` sweeps. Any non-finite
/// intermediate aborts with the offending subproblem named.
pub fn refine(
    t_bar_c: &ScalarField,
    hazy_c: &ScalarField,
    a_c: f64,
    params: &RefineParams,
) -> Result<Refined> {
    params.validate()?;
    if !t_bar_c.same_dims(hazy_c) {
        return Err(Error::DimensionMismatch {
            expected_h: hazy_c.height(),
            expected_w: hazy_c.width(),
            found_h: t_bar_c.height(),
            found_w: t_bar_c.width(),
        });
    }
    if !(a_c > 0.0 && a_c <= 1.0) {
        return Err(Error::invalid("airlight channel", format!("{a_c} not in (0, 1]")));
    }

    let i_bar = hazy_c.map(|v| a_c - v);
    let grad_i = gradient(hazy_c);
    let mut state = AdmmState::init(hazy_c, a_c, t_bar_c, params.t_eps);
    let mut trace = Vec::new();

    loop {
        state.iteration += 1;
        let iter = state.iteration;

        state.x = update_x(&state, hazy_c, params);
        ensure_finite(state.x.is_finite(), "splitting update X", iter)?;
        state.y = update_y(&state, params);
        ensure_finite(state.y.is_finite(), "splitting update Y", iter)?;
        state.z = update_z(&state, params);
        ensure_finite(state.z.is_finite(), "splitting update Z", iter)?;

        state.j_bar = update_jbar(&state, &i_bar, params);
        ensure_finite(state.j_bar.is_finite(), "scene update", iter)?;

        let t_new = update_t(&state, &i_bar, t_bar_c, params);
        ensure_finite(t_new.is_finite(), "transmission update", iter)?;
        let dt_rel = relative_change(&t_new, &state.t);
        state.t = t_new;

        let (rx, ry, rz) = constraint_residuals(&state, &grad_i);
        state.xi = state.xi.zip_map(&rx, |m, r| m - params.upsilon * params.beta1 * r);
        state.eta = state.eta.zip_map(&ry, |m, r| m - params.upsilon * params.beta2 * r);
        state.zeta = state.zeta.zip_map(&rz, |m, r| m - params.upsilon * params.beta3 * r);
        ensure_finite(
            state.xi.is_finite() && state.eta.is_finite() && state.zeta.is_finite(),
            "multiplier update",
            iter,
        )?;

        trace.push(IterationStats {
            iteration: iter,
            objective: objective(&state, &i_bar, t_bar_c, hazy_c, params),
            res_x: rx.norm_l2(),
            res_y: ry.norm_l2(),
            res_z: rz.norm_l2(),
            dt_rel,
        });

        if dt_rel < params.rel_tol || iter >= params.max_iters {
            break;
        }
    }

    Ok(Refined {
        transmission: state.t.clamp(params.t_eps, 1.0),
        trace,
    })
}

fn relative_change(new: &ScalarField, old: &ScalarField) -> f64 {
    let diff: f64 = new
        .data()
        .iter()
        .zip(old.data())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    diff / old.norm_l2().max(1e-30)
}

fn ensure_finite(ok: bool, stage: &'static str, iteration: usize) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::NonFinite { stage, iteration })
    }
}
