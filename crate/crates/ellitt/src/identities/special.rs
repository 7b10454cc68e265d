//! Functional equations and special values of the theta and elliptic Gamma
//! functions.

use super::util::{d, draw_c, m, perturb_c};
use super::{IdentityCase, RunOptions, Status, TrialOutcome};
use crate::hp::{PrecisionContext, Result, C};
use crate::theta::{gamma_pq, gamma_plus, qpoch, theta};
use rand_chacha::ChaCha8Rng;

fn rel(ctx: &PrecisionContext, a: &C, b: &C) -> f64 {
    ctx.rel_err(a, b)
}

/// One draw of the full functional-equation suite; returns the worst
/// relative error across all checks.
fn gamma_reflection(
    rng: &mut ChaCha8Rng,
    opts: &RunOptions,
    ctx: &PrecisionContext,
) -> Result<TrialOutcome> {
    let p = draw_c(rng, ctx, 0.1, 0.6);
    let q = draw_c(rng, ctx, 0.1, 0.6);
    let t = draw_c(rng, ctx, 0.2, 0.55);
    let z = draw_c(rng, ctx, 0.5, 1.8);
    let pq = m(&p, &q, ctx);
    let q2 = m(&q, &q, ctx);
    let p2 = m(&p, &p, ctx);
    let gz = gamma_pq(&z, &p, &q, ctx)?;
    let mut worst = 0.0f64;
    let mut track = |e: f64| {
        if e > worst {
            worst = e;
        }
    };

    // Shift in q (the negative control perturbs the shift multiplier).
    let q_shift = perturb_c(&q, opts.perturb, ctx);
    let lhs = gamma_pq(&m(&q_shift, &z, ctx), &p, &q, ctx)?;
    let rhs = m(&theta(&z, &p, ctx)?, &gz, ctx);
    track(rel(ctx, &lhs, &rhs));

    // Shift in p.
    let lhs = gamma_pq(&m(&p, &z, ctx), &p, &q, ctx)?;
    let rhs = m(&theta(&z, &q, ctx)?, &gz, ctx);
    track(rel(ctx, &lhs, &rhs));

    // Reflection through pq.
    let lhs = m(&gamma_pq(&d(&pq, &z, ctx), &p, &q, ctx)?, &gz, ctx);
    track(rel(ctx, &lhs, &ctx.one()));

    // Quadratic splitting of the q direction.
    let rhs = m(
        &gamma_pq(&z, &p, &q2, ctx)?,
        &gamma_pq(&m(&q, &z, ctx), &p, &q2, ctx)?,
        ctx,
    );
    track(rel(ctx, &gz, &rhs));

    // Quadratic splitting of the argument.
    let lhs = gamma_pq(&m(&z, &z, ctx), &p2, &q2, ctx)?;
    let rhs = m(
        &gz,
        &gamma_pq(&m(&z, &ctx.c(-1.0, 0.0), ctx), &p, &q, ctx)?,
        ctx,
    );
    track(rel(ctx, &lhs, &rhs));

    // Residue value in finite form: Gamma(q) (q;q) = (p;p).
    let lhs = m(&gamma_pq(&q, &p, &q, ctx)?, &qpoch(&q, &q, ctx)?, ctx);
    track(rel(ctx, &lhs, &qpoch(&p, &p, ctx)?));

    // Theta inversion and quasi-periodicity.
    let tz = theta(&z, &p, ctx)?;
    let reflect = d(&m(&tz, &ctx.c(-1.0, 0.0), ctx), &z, ctx);
    track(rel(ctx, &theta(&z.clone().recip(), &p, ctx)?, &reflect));
    track(rel(ctx, &theta(&m(&p, &z, ctx), &p, ctx)?, &reflect));

    // Unit value at the square roots of pq.
    let w = pq.clone().sqrt();
    let lhs = m(
        &gamma_pq(&w, &p, &q, ctx)?,
        &gamma_pq(&m(&w, &ctx.c(-1.0, 0.0), ctx), &p, &q, ctx)?,
        ctx,
    );
    track(rel(ctx, &lhs, &ctx.one()));

    // Cascading Gamma: shift by t and reflection through pqt.
    let gpz = gamma_plus(&z, &p, &q, &t, ctx)?;
    let lhs = gamma_plus(&m(&t, &z, ctx), &p, &q, &t, ctx)?;
    let rhs = m(&gz, &gpz, ctx);
    track(rel(ctx, &lhs, &rhs));
    let lhs = gamma_plus(&d(&m(&pq, &t, ctx), &z, ctx), &p, &q, &t, ctx)?;
    track(rel(ctx, &lhs, &gpz));

    Ok(TrialOutcome::deviation(
        worst,
        ctx,
        format!(
            "p={:.4e} q={:.4e} t={:.4e} z={:.4e}",
            ctx.abs(&p).to_f64(),
            ctx.abs(&q).to_f64(),
            ctx.abs(&t).to_f64(),
            ctx.abs(&z).to_f64()
        ),
    ))
}

pub fn register(cases: &mut Vec<IdentityCase>) {
    cases.push(IdentityCase {
        id: "gamma_reflection",
        status: Status::Proved,
        description: "theta/elliptic-Gamma functional equations: p- and q-shifts, pq-reflection, \
                      quadratic base and argument splittings, residue value, unit values, and the \
                      cascading-Gamma shift and reflection",
        tolerance: 1e-25,
        trials: 100,
        control: true,
        run: gamma_reflection,
    });
}
