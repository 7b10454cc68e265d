//! Elliptic Selberg densities of any order, torus quadrature, higher-order
//! integrals, the normalized expectation functional, and residue extraction.
//!
//! The order-`m` density on `n` variables is
//!
//! `D(z) = ((p;p)(q;q)Gamma(t)/2)^n / n!
//!         prod_{i<j} Gamma(t z_i^{±1} z_j^{±1}) / Gamma(z_i^{±1} z_j^{±1})
//!         prod_i prod_{r<2m+6} Gamma(u_r z_i^{±1}) / Gamma(z_i^{±2})`,
//!
//! integrated over the unit torus with measure `dz_i / (2 pi i z_i)`, under
//! the balancing condition `t^{2n-2} prod u_r = (pq)^{m+1}`. All denominator
//! Gamma factors are evaluated through the reflection `Gamma(x)^{-1} =
//! Gamma(pq/x)`, which keeps the integrand pole-free on the torus whenever
//! `|t| < 1` and every `|u_r| < 1`: the only candidate poles on `|z| = 1`
//! become removable zeros of the reflected form.

use crate::hp::{Mode, NumError, PrecisionContext, Result, C};
use crate::partitions::PartitionPair;
use crate::residue::{isolation_distance, polytorus, residue_centers};
use crate::symbols::cpow;
use crate::theta::{fast, gamma_pq, qpoch, EllipticParams};
use num_complex::Complex64;
use rug::ops::CompleteRound;
use rug::Assign;

/// Default starting node count per torus dimension.
pub const NODES_START: usize = 128;
/// Default node ceiling for one-dimensional quadrature.
pub const NODES_MAX_1D: usize = 4096;
/// Default node ceiling per dimension for two-dimensional quadrature.
pub const NODES_MAX_2D: usize = 1024;
/// Convergence target for `FastDouble` quadrature.
const FAST_TOL: f64 = 1e-10;

/// A Selberg-type integral specification: dimension, the `2m+6` parameters,
/// and the elliptic bases. The order `m` is derived from the parameter count.
#[derive(Debug, Clone)]
pub struct SelbergSpec {
    pub n: usize,
    pub us: Vec<C>,
    pub params: EllipticParams,
}

impl SelbergSpec {
    /// Validates the parameter count, the unit-torus contour condition
    /// (`|u_r| < 1` for all `r`), and the balancing condition
    /// `t^{2n-2} prod u_r = (pq)^{m+1}`.
    pub fn new(n: usize, us: Vec<C>, params: EllipticParams, ctx: &PrecisionContext) -> Result<Self> {
        if n == 0 {
            return Err(NumError::InvalidParameter("dimension must be positive".into()));
        }
        if us.len() < 6 || us.len() % 2 != 0 {
            return Err(NumError::InvalidParameter(format!(
                "parameter count must be 2m+6, got {}",
                us.len()
            )));
        }
        for u in &us {
            if ctx.abs(u) >= 1.0 {
                return Err(NumError::Infeasible(format!(
                    "parameter off the unit disk breaks the torus contour: |u| = {}",
                    ctx.abs(u)
                )));
            }
        }
        let spec = SelbergSpec { n, us, params };
        let lhs = spec.balance_value(ctx);
        let m = spec.order();
        let pq = (&spec.params.p * &spec.params.q).complete(ctx.prec2());
        let rhs = cpow(&pq, m as i64 + 1, ctx);
        if ctx.rel_err(&lhs, &rhs) > ctx.rel_tol.sqrt() {
            return Err(NumError::InvalidParameter(format!(
                "balancing condition violated: rel err {}",
                ctx.rel_err(&lhs, &rhs)
            )));
        }
        Ok(spec)
    }

    /// The order `m`, with `2m+6` parameters.
    pub fn order(&self) -> usize {
        (self.us.len() - 6) / 2
    }

    /// `t^{2n-2} prod_r u_r`.
    pub fn balance_value(&self, ctx: &PrecisionContext) -> C {
        let mut acc = cpow(&self.params.t, 2 * self.n as i64 - 2, ctx);
        for u in &self.us {
            acc *= u;
        }
        acc
    }
}

/// `Gamma(x) Gamma(pq/y)`: one retained numerator factor and one reflected
/// denominator factor.
fn gamma_over(x: &C, y: &C, p: &C, q: &C, pq: &C, ctx: &PrecisionContext) -> Result<C> {
    let num = gamma_pq(x, p, q, ctx)?;
    let den = gamma_pq(&(pq / y).complete(ctx.prec2()), p, q, ctx)?;
    Ok(num * den)
}

/// The single-variable factor `prod_r Gamma(u_r z^{±1}) / Gamma(z^{±2})`,
/// with the denominator reflected to `Gamma(pq/z^2) Gamma(pq z^2)`.
fn single_factor(z: &C, us: &[C], p: &C, q: &C, ctx: &PrecisionContext) -> Result<C> {
    let pq = (p * q).complete(ctx.prec2());
    let zinv = z.clone().recip();
    let mut acc = ctx.one();
    for u in us {
        acc *= gamma_pq(&(u * z).complete(ctx.prec2()), p, q, ctx)?;
        acc *= gamma_pq(&(u * &zinv).complete(ctx.prec2()), p, q, ctx)?;
    }
    let z2 = (z * z).complete(ctx.prec2());
    acc *= gamma_pq(&(&pq / &z2).complete(ctx.prec2()), p, q, ctx)?;
    acc *= gamma_pq(&(&pq * &z2).complete(ctx.prec2()), p, q, ctx)?;
    Ok(acc)
}

/// The interaction factor `Gamma(t z w^{±1} ...) / Gamma(z w^{±1} ...)` over
/// the four sign choices, denominators reflected.
fn pair_factor(z: &C, w: &C, t: &C, p: &C, q: &C, ctx: &PrecisionContext) -> Result<C> {
    let pq = (p * q).complete(ctx.prec2());
    let winv = w.clone().recip();
    let zinv = z.clone().recip();
    let mut acc = ctx.one();
    for arg in [
        (z * w).complete(ctx.prec2()),
        (z * &winv).complete(ctx.prec2()),
        (&zinv * w).complete(ctx.prec2()),
        (&zinv * &winv).complete(ctx.prec2()),
    ] {
        acc *= gamma_over(&(t * &arg).complete(ctx.prec2()), &arg, p, q, &pq, ctx)?;
    }
    Ok(acc)
}

/// The constant prefactor `((p;p)(q;q)Gamma(t)/2)^n / n!`.
fn prefactor(n: usize, t: &C, p: &C, q: &C, ctx: &PrecisionContext) -> Result<C> {
    let base = (qpoch(p, p, ctx)? * qpoch(q, q, ctx)?) * gamma_pq(t, p, q, ctx)? / ctx.f(2.0);
    let mut acc = cpow(&base, n as i64, ctx);
    for k in 2..=n {
        acc /= ctx.f(k as f64);
    }
    Ok(acc)
}

/// The full integrand value at `zs`, including the constant prefactor. The
/// measure `dz/(2 pi i z)` is handled by the quadrature's angular
/// parametrization and is NOT included here.
pub fn density(spec: &SelbergSpec, zs: &[C], ctx: &PrecisionContext) -> Result<C> {
    if zs.len() != spec.n {
        return Err(NumError::InvalidParameter(format!(
            "expected {} variables, got {}",
            spec.n,
            zs.len()
        )));
    }
    let (t, p, q) = (&spec.params.t, &spec.params.p, &spec.params.q);
    let mut acc = prefactor(spec.n, t, p, q, ctx)?;
    for z in zs {
        acc *= single_factor(z, &spec.us, p, q, ctx)?;
    }
    for i in 0..zs.len() {
        for j in (i + 1)..zs.len() {
            acc *= pair_factor(&zs[i], &zs[j], t, p, q, ctx)?;
        }
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// FastDouble kernels.
// ---------------------------------------------------------------------------

fn c64(x: &C) -> Complex64 {
    Complex64::new(x.real().to_f64(), x.imag().to_f64())
}

fn single_factor64(z: Complex64, us: &[Complex64], p: Complex64, q: Complex64) -> Complex64 {
    let pq = p * q;
    let zinv = 1.0 / z;
    let mut acc = Complex64::new(1.0, 0.0);
    for &u in us {
        acc *= fast::gamma64(u * z, p, q) * fast::gamma64(u * zinv, p, q);
    }
    let z2 = z * z;
    acc * fast::gamma64(pq / z2, p, q) * fast::gamma64(pq * z2, p, q)
}

fn pair_factor64(z: Complex64, w: Complex64, t: Complex64, p: Complex64, q: Complex64) -> Complex64 {
    let pq = p * q;
    let mut acc = Complex64::new(1.0, 0.0);
    for arg in [z * w, z / w, w / z, 1.0 / (z * w)] {
        acc *= fast::gamma64(t * arg, p, q) * fast::gamma64(pq / arg, p, q);
    }
    acc
}

// ---------------------------------------------------------------------------
// Torus quadrature.
// ---------------------------------------------------------------------------

/// Quadrature nodes `exp(2 pi i (k + 1/2) / nodes)`: the half-step offset
/// keeps `±1` (where reflected factors would pile up zeros of the raw
/// density's denominators) off the grid for even node counts.
fn torus_nodes(nodes: usize, ctx: &PrecisionContext) -> Vec<C> {
    let tau: rug::Float = rug::Float::with_val(ctx.prec(), rug::float::Constant::Pi) * 2.0f64;
    (0..nodes)
        .map(|k| {
            let ang = tau.clone() * ctx.f(k as f64 + 0.5) / ctx.f(nodes as f64);
            let mut z = ctx.zero();
            z.mut_real().assign(ang.clone().cos());
            z.mut_imag().assign(ang.sin());
            z
        })
        .collect()
}

fn torus_nodes64(nodes: usize) -> Vec<Complex64> {
    let tau = 2.0 * std::f64::consts::PI;
    (0..nodes)
        .map(|k| Complex64::from_polar(1.0, tau * (k as f64 + 0.5) / nodes as f64))
        .collect()
}

/// Convergence test for node doubling: relative agreement, with the mean
/// integrand magnitude as the absolute scale so that integrals that are
/// legitimately (near) zero terminate instead of chasing rounding noise.
fn converged(prev: &C, value: &C, mean_abs: f64, ctx: &PrecisionContext) -> bool {
    let diff = ctx.abs(&(prev - value).complete(ctx.prec2())).to_f64();
    let (va, pa) = (ctx.abs(value).to_f64(), ctx.abs(prev).to_f64());
    diff <= ctx.rel_tol * va || (va <= ctx.rel_tol * mean_abs && pa <= ctx.rel_tol * mean_abs)
}

/// Tensor-product trapezoid rule for an `n`-variate function on the unit
/// torus with measure `prod dz_i/(2 pi i z_i)`, doubling nodes from
/// `nodes_start` until successive values agree to `rel_tol` (geometric
/// convergence for integrands analytic in an annulus around the torus).
pub fn integrate_torus(
    f: &dyn Fn(&[C]) -> Result<C>,
    n: usize,
    nodes_start: usize,
    nodes_max: usize,
    ctx: &PrecisionContext,
) -> Result<C> {
    if !(1..=2).contains(&n) {
        return Err(NumError::InvalidParameter(format!(
            "torus quadrature supports 1 or 2 variables, got {n}"
        )));
    }
    let mut prev: Option<C> = None;
    let mut nodes = nodes_start.max(2);
    loop {
        let zs = torus_nodes(nodes, ctx);
        let mut total = ctx.zero();
        let mut total_abs = ctx.f(0.0);
        match n {
            1 => {
                for z in &zs {
                    let v = f(std::slice::from_ref(z))?;
                    total_abs += ctx.abs(&v);
                    total += v;
                }
            }
            _ => {
                for z in &zs {
                    for w in &zs {
                        let v = f(&[z.clone(), w.clone()])?;
                        total_abs += ctx.abs(&v);
                        total += v;
                    }
                }
            }
        }
        let scale = ctx.f((nodes as f64).powi(n as i32));
        let value = total / &scale;
        let mean_abs = (total_abs / &scale).to_f64();
        if let Some(p) = prev {
            if converged(&p, &value, mean_abs, ctx) {
                return Ok(value);
            }
        }
        if nodes >= nodes_max {
            return Err(NumError::NoConvergence(format!(
                "torus quadrature not converged at {nodes} nodes/dim"
            )));
        }
        prev = Some(value);
        nodes *= 2;
    }
}

/// `FastDouble` counterpart of `integrate_torus` (convergence target 1e-10).
pub fn integrate_torus_fast(
    f: &dyn Fn(&[Complex64]) -> Complex64,
    n: usize,
    nodes_start: usize,
    nodes_max: usize,
) -> Result<Complex64> {
    if !(1..=2).contains(&n) {
        return Err(NumError::InvalidParameter(format!(
            "torus quadrature supports 1 or 2 variables, got {n}"
        )));
    }
    let mut prev: Option<Complex64> = None;
    let mut nodes = nodes_start.max(2);
    loop {
        let zs = torus_nodes64(nodes);
        let mut total = Complex64::new(0.0, 0.0);
        let mut total_abs = 0.0f64;
        match n {
            1 => {
                for &z in &zs {
                    let v = f(&[z]);
                    total_abs += v.norm();
                    total += v;
                }
            }
            _ => {
                for &z in &zs {
                    for &w in &zs {
                        let v = f(&[z, w]);
                        total_abs += v.norm();
                        total += v;
                    }
                }
            }
        }
        let total_abs64 = total_abs / (nodes as f64).powi(n as i32);
        let value = total / (nodes as f64).powi(n as i32);
        if let Some(p) = prev {
            if (p - value).norm() <= FAST_TOL * value.norm().max(total_abs64) {
                return Ok(value);
            }
        }
        if nodes >= nodes_max {
            return Err(NumError::NoConvergence(format!(
                "torus quadrature not converged at {nodes} nodes/dim"
            )));
        }
        prev = Some(value);
        nodes *= 2;
    }
}

/// Density quadrature with precomputed per-node factor tables (the density
/// factors as `prod_i S(z_i) prod_{i<j} P(z_i, z_j)`, so the tensor grid
/// needs only one single-variable table and one pair table per refinement).
fn selberg_quadrature(
    spec: &SelbergSpec,
    nodes_start: usize,
    nodes_max: usize,
    ctx: &PrecisionContext,
) -> Result<C> {
    let (t, p, q) = (&spec.params.t, &spec.params.p, &spec.params.q);
    let pref = prefactor(spec.n, t, p, q, ctx)?;
    let mut prev: Option<C> = None;
    let mut nodes = nodes_start.max(2);
    loop {
        let zs = torus_nodes(nodes, ctx);
        let singles: Vec<C> = zs
            .iter()
            .map(|z| single_factor(z, &spec.us, p, q, ctx))
            .collect::<Result<_>>()?;
        let mut total = ctx.zero();
        match spec.n {
            1 => {
                for s in &singles {
                    total += s;
                }
            }
            2 => {
                for (k, z) in zs.iter().enumerate() {
                    for (l, w) in zs.iter().enumerate() {
                        let term = (&singles[k] * &singles[l]).complete(ctx.prec2())
                            * pair_factor(z, w, t, p, q, ctx)?;
                        total += term;
                    }
                }
            }
            _ => {
                return Err(NumError::InvalidParameter(format!(
                    "quadrature supports n <= 2, got {}",
                    spec.n
                )))
            }
        }
        let value = (&pref * &total).complete(ctx.prec2())
            / ctx.f((nodes as f64).powi(spec.n as i32));
        if let Some(pv) = prev {
            if ctx.rel_err(&pv, &value) < ctx.rel_tol {
                return Ok(value);
            }
        }
        if nodes >= nodes_max {
            return Err(NumError::NoConvergence(format!(
                "Selberg quadrature not converged at {nodes} nodes/dim"
            )));
        }
        prev = Some(value);
        nodes *= 2;
    }
}

fn selberg_quadrature_fast(
    spec: &SelbergSpec,
    nodes_start: usize,
    nodes_max: usize,
    ctx: &PrecisionContext,
) -> Result<Complex64> {
    let (t, p, q) = (c64(&spec.params.t), c64(&spec.params.p), c64(&spec.params.q));
    let us: Vec<Complex64> = spec.us.iter().map(c64).collect();
    let pref_hp = prefactor(spec.n, &spec.params.t, &spec.params.p, &spec.params.q, ctx)?;
    let pref = c64(&pref_hp);
    let mut prev: Option<Complex64> = None;
    let mut nodes = nodes_start.max(2);
    loop {
        let zs = torus_nodes64(nodes);
        let singles: Vec<Complex64> = zs.iter().map(|&z| single_factor64(z, &us, p, q)).collect();
        let mut total = Complex64::new(0.0, 0.0);
        match spec.n {
            1 => {
                for s in &singles {
                    total += s;
                }
            }
            2 => {
                for (k, &z) in zs.iter().enumerate() {
                    for (l, &w) in zs.iter().enumerate() {
                        total += singles[k] * singles[l] * pair_factor64(z, w, t, p, q);
                    }
                }
            }
            _ => {
                return Err(NumError::InvalidParameter(format!(
                    "quadrature supports n <= 2, got {}",
                    spec.n
                )))
            }
        }
        let value = pref * total / (nodes as f64).powi(spec.n as i32);
        if let Some(pv) = prev {
            if (pv - value).norm() <= FAST_TOL * value.norm().max(1e-30) {
                return Ok(value);
            }
        }
        if nodes >= nodes_max {
            return Err(NumError::NoConvergence(format!(
                "Selberg quadrature not converged at {nodes} nodes/dim"
            )));
        }
        prev = Some(value);
        nodes *= 2;
    }
}

/// The higher-order elliptic Selberg integral `II^(m)_n` by torus quadrature.
pub fn selberg_integral(
    spec: &SelbergSpec,
    nodes_start: usize,
    nodes_max: usize,
    mode: Mode,
    ctx: &PrecisionContext,
) -> Result<C> {
    match mode {
        Mode::HighPrecision => selberg_quadrature(spec, nodes_start, nodes_max, ctx),
        Mode::FastDouble => {
            let v = selberg_quadrature_fast(spec, nodes_start, nodes_max, ctx)?;
            Ok(ctx.c(v.re, v.im))
        }
    }
}

/// The order-zero evaluation
/// `II^(0)_n = prod_{0 <= i < n} Gamma(t^{i+1}) prod_{r<s} Gamma(t^i u_r u_s)`.
pub fn selberg_closed_form(spec: &SelbergSpec, ctx: &PrecisionContext) -> Result<C> {
    if spec.order() != 0 {
        return Err(NumError::InvalidParameter(
            "closed form applies to order 0 only".into(),
        ));
    }
    let (t, p, q) = (&spec.params.t, &spec.params.p, &spec.params.q);
    let mut acc = ctx.one();
    for i in 0..spec.n as i64 {
        acc *= gamma_pq(&cpow(t, i + 1, ctx), p, q, ctx)?;
        let ti = cpow(t, i, ctx);
        for r in 0..spec.us.len() {
            for s in (r + 1)..spec.us.len() {
                let arg = (&ti * &(&spec.us[r] * &spec.us[s]).complete(ctx.prec2()))
                    .complete(ctx.prec2());
                acc *= gamma_pq(&arg, p, q, ctx)?;
            }
        }
    }
    Ok(acc)
}

/// The higher-order elliptic beta integral `I^(m) = Gamma(t)^{-1} II^(m)_1`.
/// At `n = 1` the density has no interaction factors, so `t` enters only
/// through the prefactor `Gamma(t)`, which is divided back out here: the
/// result is independent of the `t` stored in `us_params`.
pub fn beta_integral(
    us: &[C],
    params: &EllipticParams,
    nodes_start: usize,
    nodes_max: usize,
    mode: Mode,
    ctx: &PrecisionContext,
) -> Result<C> {
    let spec = SelbergSpec::new(1, us.to_vec(), params.clone(), ctx)?;
    let ii = selberg_integral(&spec, nodes_start, nodes_max, mode, ctx)?;
    let g = gamma_pq(&params.t, &params.p, &params.q, ctx)?;
    Ok(ii / g)
}

/// The normalized expectation `<f> = int f D / int D` (shares the density
/// tables between numerator and denominator; the constant prefactor
/// cancels). `HighPrecision` only: the integrands fed here are
/// interpolation-function sums that have no double-precision path.
pub fn expectation(
    f: &dyn Fn(&[C]) -> Result<C>,
    spec: &SelbergSpec,
    nodes_start: usize,
    nodes_max: usize,
    ctx: &PrecisionContext,
) -> Result<C> {
    let (t, p, q) = (&spec.params.t, &spec.params.p, &spec.params.q);
    let mut prev: Option<C> = None;
    let mut nodes = nodes_start.max(2);
    loop {
        let zs = torus_nodes(nodes, ctx);
        let singles: Vec<C> = zs
            .iter()
            .map(|z| single_factor(z, &spec.us, p, q, ctx))
            .collect::<Result<_>>()?;
        let mut num = ctx.zero();
        let mut den = ctx.zero();
        match spec.n {
            1 => {
                for (k, z) in zs.iter().enumerate() {
                    let fv = f(std::slice::from_ref(z))?;
                    num += (&fv * &singles[k]).complete(ctx.prec2());
                    den += &singles[k];
                }
            }
            2 => {
                for (k, z) in zs.iter().enumerate() {
                    for (l, w) in zs.iter().enumerate() {
                        let d = (&singles[k] * &singles[l]).complete(ctx.prec2())
                            * pair_factor(z, w, t, p, q, ctx)?;
                        let fv = f(&[z.clone(), w.clone()])?;
                        num += (&fv * &d).complete(ctx.prec2());
                        den += d;
                    }
                }
            }
            _ => {
                return Err(NumError::InvalidParameter(format!(
                    "expectation supports n <= 2, got {}",
                    spec.n
                )))
            }
        }
        if ctx.abs(&den) < ctx.f(ctx.abs_floor) {
            return Err(NumError::Degenerate("normalization integral vanished".into()));
        }
        let value = num / den;
        if let Some(pv) = prev {
            if ctx.rel_err(&pv, &value) < ctx.rel_tol {
                return Ok(value);
            }
        }
        if nodes >= nodes_max {
            return Err(NumError::NoConvergence(format!(
                "expectation quadrature not converged at {nodes} nodes/dim"
            )));
        }
        prev = Some(value);
        nodes *= 2;
    }
}

/// Residue of the density at `z_i = (p,q)^{lam_i} t^{n-i} u_{r0}`, divided
/// by the residue at `lam = 0`, via nested small-circle quadrature. Equals
/// `Delta_lam(t^{2n-2} u_{r0}^2 | t^n, t^{n-1} u_{r0} u_r ...)` for generic
/// parameters.
pub fn residue_ratio(
    spec: &SelbergSpec,
    lam: &PartitionPair,
    u0_index: usize,
    nodes: usize,
    ctx: &PrecisionContext,
) -> Result<C> {
    if u0_index >= spec.us.len() {
        return Err(NumError::InvalidParameter("parameter index out of range".into()));
    }
    if lam.len() > spec.n {
        return Err(NumError::InvalidParameter(format!(
            "residue point needs n >= len(lam): {} > {}",
            lam.len(),
            spec.n
        )));
    }
    let (t, p, q) = (&spec.params.t, &spec.params.p, &spec.params.q);
    let u0 = &spec.us[u0_index];
    let empty = PartitionPair::empty();
    let centers_lam = residue_centers(lam, u0, t, p, q, spec.n, ctx);
    let centers_0 = residue_centers(&empty, u0, t, p, q, spec.n, ctx);
    let d = isolation_distance(&centers_lam, &spec.us, t, p, q, ctx)
        .min(isolation_distance(&centers_0, &spec.us, t, p, q, ctx));
    if !(d > 1e-6) {
        return Err(NumError::Degenerate(format!(
            "residue point too close to another density pole (distance {d:.3e})"
        )));
    }
    let rho = ctx.c(1e-3 * d, 0.0);
    let r_lam = polytorus(&centers_lam, &rho, nodes, &spec.us, t, p, q, ctx)?;
    let r_0 = polytorus(&centers_0, &rho, nodes, &spec.us, t, p, q, ctx)?;
    if ctx.abs(&r_0) < ctx.f(ctx.abs_floor) {
        return Err(NumError::Degenerate("base residue vanished".into()));
    }
    Ok(r_lam / r_0)
}
