//! Shared helpers for the identity checks: parameter draws, bracket
//! variants, and contour integrals whose parameters fall outside the
//! validated Selberg-spec domain.

use crate::binomial::{binom, BinomialSpec};
use crate::hp::{NumError, PrecisionContext, Result, C};
use crate::partitions::{rect, PartitionPair, Rect};
use crate::selberg::{integrate_torus, integrate_torus_fast};
use crate::symbols::{cpow, delta0};
use crate::theta::{fast, gamma_pq, gamma_plus, qpoch, EllipticParams};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Product at working precision.
pub fn m(a: &C, b: &C, ctx: &PrecisionContext) -> C {
    use rug::Complete;
    (a * b).complete(ctx.prec2())
}

/// Quotient at working precision.
pub fn d(a: &C, b: &C, ctx: &PrecisionContext) -> C {
    use rug::Complete;
    (a / b).complete(ctx.prec2())
}

pub fn prodc(xs: &[C], ctx: &PrecisionContext) -> C {
    xs.iter().fold(ctx.one(), |acc, x| m(&acc, x, ctx))
}

/// `x (1 + eps)`; identity when `eps == 0`.
pub fn perturb_c(x: &C, eps: f64, ctx: &PrecisionContext) -> C {
    m(x, &ctx.c(1.0 + eps, 0.0), ctx)
}

/// Uniform modulus in `[lo, hi]`, uniform phase.
pub fn draw_c(rng: &mut ChaCha8Rng, ctx: &PrecisionContext, lo: f64, hi: f64) -> C {
    ctx.polar(rng.gen_range(lo..hi), rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Elliptic parameter bundle with explicit square roots; moduli kept small
/// enough that series truncation stays cheap at the working precision.
pub fn draw_params(rng: &mut ChaCha8Rng, ctx: &PrecisionContext) -> EllipticParams {
    draw_params_in(rng, ctx, 0.12, 0.3, 0.28, 0.45)
}

pub fn draw_params_in(
    rng: &mut ChaCha8Rng,
    ctx: &PrecisionContext,
    pq_lo: f64,
    pq_hi: f64,
    t_lo: f64,
    t_hi: f64,
) -> EllipticParams {
    let half = |rng: &mut ChaCha8Rng, lo: f64, hi: f64, ctx: &PrecisionContext| {
        let r: f64 = rng.gen_range(lo..hi);
        ctx.polar(r.sqrt(), rng.gen_range(0.0..std::f64::consts::PI))
    };
    let ph = half(rng, pq_lo, pq_hi, ctx);
    let qh = half(rng, pq_lo, pq_hi, ctx);
    let th = half(rng, t_lo, t_hi, ctx);
    EllipticParams::from_halves(ph, qh, th, ctx).expect("draw ranges keep moduli below one")
}

/// All partition pairs inside the `rows`-row rectangle with box `(l, m)`.
pub fn pairs_bounded(l: u32, mm: u32, rows: usize) -> Vec<PartitionPair> {
    rect(Rect { l, m: mm }, rows).sub_pairs()
}

/// A random element of a nonempty slice.
pub fn pick<'a, T>(rng: &mut ChaCha8Rng, xs: &'a [T]) -> &'a T {
    &xs[rng.gen_range(0..xs.len())]
}

/// `Gamma^+(x/v) / Gamma^+(x v)`.
pub fn gplus_ratio(
    x: &C,
    v: &C,
    pr: &EllipticParams,
    ctx: &PrecisionContext,
) -> Result<C> {
    let num = gamma_plus(&d(x, v, ctx), &pr.p, &pr.q, &pr.t, ctx)?;
    let den = gamma_plus(&m(x, v, ctx), &pr.p, &pr.q, &pr.t, ctx)?;
    Ok(d(&num, &den, ctx))
}

/// Elliptic binomial coefficient with a single parenthesized extra.
///
/// `<lam/kap>_{[A,B](e)}` is the connection coefficient between n-variable
/// interpolation families with parameters `(a, b)` and `(a/B, b)`, where
/// `A = t^{n-1} a/b` and `e = t^{n-1} a^2/B`. Writing `T = t^n`, it reduces
/// to a two-extra coefficient:
///
/// `<lam/kap>_{[A,B](e)} =
///   Delta0_lam(A | pq A/T) / Delta0_kap(A/B | pq A/(T B))
///   * <lam/kap>_{[A,B](T, e)}`.
///
/// The value is independent of the split of `e B = t^{n-1} a^2` into `T`
/// and the remaining data, so any generic `T` serves; callers pass the `T`
/// natural to their context. (The unit tests check the `T`-independence and
/// the reduction of the two-argument skew interpolation function at a
/// discrete argument, which pin this normalization.)
pub fn one_extra_binom(
    lam: &PartitionPair,
    kap: &PartitionPair,
    big_a: &C,
    big_b: &C,
    e: &C,
    big_t: &C,
    pr: &EllipticParams,
    ctx: &PrecisionContext,
) -> Result<C> {
    let pq = m(&pr.p, &pr.q, ctx);
    let pq_a_t = d(&m(&pq, big_a, ctx), big_t, ctx);
    let num = delta0(lam, big_a, &[pq_a_t.clone()], &pr.t, &pr.p, &pr.q, ctx)?;
    let den = delta0(
        kap,
        &d(big_a, big_b, ctx),
        &[d(&pq_a_t, big_b, ctx)],
        &pr.t,
        &pr.p,
        &pr.q,
        ctx,
    )?;
    let val = binom(
        &BinomialSpec {
            top: lam.clone(),
            bottom: kap.clone(),
            bracket: (big_a.clone(), big_b.clone()),
            extras: vec![big_t.clone(), e.clone()],
            params: pr.clone(),
        },
        ctx,
    )?;
    Ok(m(&d(&num, &den, ctx), &val, ctx))
}

fn check_moduli(us: &[C], ctx: &PrecisionContext) -> Result<()> {
    for u in us {
        let r = ctx.abs(u).to_f64();
        if r > 1.0 + 1e-12 {
            return Err(NumError::Infeasible(format!(
                "parameter modulus {r} exceeds the unit circle"
            )));
        }
    }
    Ok(())
}

/// Selberg-type contour integral with the density assembled directly from
/// elliptic Gamma factors (reflected denominators), bypassing the validated
/// spec type. This admits parameters *on* the unit circle (such as -1, -p,
/// -q), whose contour poles cancel against the `1/Gamma(z^{+-2})` factors;
/// the quadrature nodes sit at half-integer angles and never meet them. An
/// optional weight multiplies the density.
pub fn raw_integral_hp(
    n: usize,
    us: &[C],
    pr: &EllipticParams,
    weight: Option<&dyn Fn(&[C]) -> Result<C>>,
    nodes_start: usize,
    nodes_max: usize,
    ctx: &PrecisionContext,
) -> Result<C> {
    check_moduli(us, ctx)?;
    let (t, p, q) = (&pr.t, &pr.p, &pr.q);
    let pq = m(p, q, ctx);
    let pref = {
        let pp = qpoch(p, p, ctx)?;
        let qq = qpoch(q, q, ctx)?;
        let gt = gamma_pq(t, p, q, ctx)?;
        let base = d(&m(&m(&pp, &qq, ctx), &gt, ctx), &ctx.c(2.0, 0.0), ctx);
        let mut acc = ctx.one();
        for _ in 0..n {
            acc = m(&acc, &base, ctx);
        }
        let mut fact = 1.0;
        for k in 2..=n {
            fact *= k as f64;
        }
        d(&acc, &ctx.c(fact, 0.0), ctx)
    };
    let us_own: Vec<C> = us.to_vec();
    let pr_own = pr.clone();
    let dens = move |zs: &[C]| -> Result<C> {
        let (t, p, q) = (&pr_own.t, &pr_own.p, &pr_own.q);
        let mut acc = ctx.one();
        for z in zs {
            let zi = z.clone().recip();
            let z2 = m(z, z, ctx);
            for u in &us_own {
                acc = m(&acc, &gamma_pq(&m(u, z, ctx), p, q, ctx)?, ctx);
                acc = m(&acc, &gamma_pq(&m(u, &zi, ctx), p, q, ctx)?, ctx);
            }
            acc = m(&acc, &gamma_pq(&d(&pq, &z2, ctx), p, q, ctx)?, ctx);
            acc = m(&acc, &gamma_pq(&m(&pq, &z2, ctx), p, q, ctx)?, ctx);
        }
        for i in 0..zs.len() {
            for j in (i + 1)..zs.len() {
                let cross = [
                    m(&zs[i], &zs[j], ctx),
                    d(&zs[i], &zs[j], ctx),
                    d(&zs[j], &zs[i], ctx),
                    d(&ctx.one(), &m(&zs[i], &zs[j], ctx), ctx),
                ];
                for x in &cross {
                    acc = m(&acc, &gamma_pq(&m(t, x, ctx), p, q, ctx)?, ctx);
                    acc = m(&acc, &gamma_pq(&d(&pq, x, ctx), p, q, ctx)?, ctx);
                }
            }
        }
        Ok(acc)
    };
    let full = |zs: &[C]| -> Result<C> {
        let base = dens(zs)?;
        match weight {
            Some(f) => Ok(m(&base, &f(zs)?, ctx)),
            None => Ok(base),
        }
    };
    let raw = integrate_torus(&full, n, nodes_start, nodes_max, ctx)?;
    Ok(m(&pref, &raw, ctx))
}

/// Double-precision variant of [`raw_integral_hp`].
pub fn raw_integral_fast(
    n: usize,
    us: &[C],
    pr: &EllipticParams,
    weight: Option<&dyn Fn(&[Complex64]) -> Complex64>,
    nodes_start: usize,
    nodes_max: usize,
    ctx: &PrecisionContext,
) -> Result<Complex64> {
    check_moduli(us, ctx)?;
    let to64 = |x: &C| Complex64::new(x.real().to_f64(), x.imag().to_f64());
    let (t, p, q) = (to64(&pr.t), to64(&pr.p), to64(&pr.q));
    let pq = p * q;
    let us64: Vec<Complex64> = us.iter().map(|u| to64(u)).collect();
    let pref = {
        let base = fast::qpoch64(p, p) * fast::qpoch64(q, q) * fast::gamma64(t, p, q) / 2.0;
        let mut acc = Complex64::new(1.0, 0.0);
        for _ in 0..n {
            acc *= base;
        }
        let mut fact = 1.0;
        for k in 2..=n {
            fact *= k as f64;
        }
        acc / fact
    };
    let dens = move |zs: &[Complex64]| -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for z in zs {
            let zi = 1.0 / z;
            let z2 = z * z;
            for u in &us64 {
                acc *= fast::gamma64(u * z, p, q) * fast::gamma64(u * zi, p, q);
            }
            acc *= fast::gamma64(pq / z2, p, q) * fast::gamma64(pq * z2, p, q);
        }
        for i in 0..zs.len() {
            for j in (i + 1)..zs.len() {
                let cross = [
                    zs[i] * zs[j],
                    zs[i] / zs[j],
                    zs[j] / zs[i],
                    1.0 / (zs[i] * zs[j]),
                ];
                for x in cross {
                    acc *= fast::gamma64(t * x, p, q) * fast::gamma64(pq / x, p, q);
                }
            }
        }
        acc
    };
    let full = move |zs: &[Complex64]| -> Complex64 {
        let base = dens(zs);
        match weight {
            Some(f) => base * f(zs),
            None => base,
        }
    };
    let raw = integrate_torus_fast(&full, n, nodes_start, nodes_max)?;
    Ok(pref * raw)
}

/// `t^k` as a complex value.
pub fn tpow(pr: &EllipticParams, k: i64, ctx: &PrecisionContext) -> C {
    cpow(&pr.t, k, ctx)
}
