//! Terminating-series identities for elliptic binomial coefficients and
//! skew interpolation functions: delta/inversion structure, composition,
//! hidden-argument symmetry, connection coefficients, duality, rectangle
//! shifts, the partition-swap transformation, the dual Karlsson-Minton
//! proportionality, and the support (vanishing) theorems.

use super::util::{d, draw_c, draw_params, gplus_ratio, m, pairs_bounded, perturb_c, pick, prodc, tpow};
use super::{IdentityCase, RunOptions, Status, TrialOutcome};
use crate::binomial::{binom, BinomialSpec};
use crate::hp::{PrecisionContext, Result, C};
use crate::interp::{lifted, skew_hat, skew_interp};
use crate::partitions::{add_rect, complement, concat_rect, rect, PartitionPair, Rect};
use crate::symbols::{delta0, delta_full};
use crate::theta::EllipticParams;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn bn(
    top: &PartitionPair,
    bottom: &PartitionPair,
    big_a: &C,
    big_b: &C,
    extras: Vec<C>,
    pr: &EllipticParams,
    ctx: &PrecisionContext,
) -> Result<C> {
    binom(
        &BinomialSpec {
            top: top.clone(),
            bottom: bottom.clone(),
            bracket: (big_a.clone(), big_b.clone()),
            extras,
            params: pr.clone(),
        },
        ctx,
    )
}

fn kron(a: &PartitionPair, b: &PartitionPair, ctx: &PrecisionContext) -> C {
    if a == b {
        ctx.one()
    } else {
        ctx.zero()
    }
}

fn small_pairs(max_weight: u32) -> Vec<PartitionPair> {
    pairs_bounded(2, 2, 2)
        .into_iter()
        .filter(|x| x.weight() <= max_weight)
        .collect()
}

// ---------------------------------------------------------------------------
// Delta function and inversion.

fn skew_delta(
    rng: &mut ChaCha8Rng,
    opts: &RunOptions,
    ctx: &PrecisionContext,
) -> Result<TrialOutcome> {
    let pr = draw_params(rng, ctx);
    let a = draw_c(rng, ctx, 0.9, 1.7);
    let b = draw_c(rng, ctx, 0.6, 1.3);
    // With no arguments -- or with an exactly inverse pair of arguments,
    // which deletes -- the skew interpolation function is a delta function.
    // The control perturbs the inverse pair.
    let vs: Vec<C> = if opts.perturb != 0.0 || rng.gen_bool(0.5) {
        let v = draw_c(rng, ctx, 0.6, 1.2);
        let vinv = perturb_c(&v, opts.perturb, ctx).recip();
        vec![v, vinv]
    } else {
        vec![]
    };
    let pool = small_pairs(4);
    let lam = pick(rng, &pool).clone();
    let mut worst = 0.0f64;
    for kap in lam.sub_pairs() {
        let val = skew_interp(&lam, &kap, &vs, &a, &b, &pr, ctx)?;
        let dev = ctx
            .abs(&(val - kron(&lam, &kap, ctx)))
            .to_f64();
        worst = worst.max(dev);
    }
    Ok(TrialOutcome::deviation(
        worst,
        ctx,
        format!("lam={} args={}", lam.to_text(), vs.len()),
    ))
}

fn binom_inversion(
    rng: &mut ChaCha8Rng,
    opts: &RunOptions,
    ctx: &PrecisionContext,
) -> Result<TrialOutcome> {
    let pr = draw_params(rng, ctx);
    let pq = m(&pr.p, &pr.q, ctx);
    let a = draw_c(rng, ctx, 0.9, 1.7);
    let b = draw_c(rng, ctx, 0.6, 1.3);
    let ab = m(&a, &b, ctx);
    let a1 = d(&a, &b, ctx);
    let b1 = d(&ab, &pq, ctx);
    let a2 = d(&pq, &m(&b, &b, ctx), ctx);
    let b2 = perturb_c(&d(&pq, &ab, ctx), opts.perturb, ctx);
    let pool = small_pairs(3);
    let lam = pick(rng, &pool).clone();
    let mut worst = 0.0f64;
    for kap in lam.sub_pairs() {
        let mut acc = ctx.zero();
        for mu in lam.sub_pairs() {
            if !kap.contained_in(&mu) {
                continue;
            }
            let outer = bn(&lam, &mu, &a1, &b1, vec![], &pr, ctx)?;
            let inner = bn(&mu, &kap, &a2, &b2, vec![], &pr, ctx)?;
            acc += m(&outer, &inner, ctx);
        }
        let dev = ctx.abs(&(acc - kron(&lam, &kap, ctx))).to_f64();
        worst = worst.max(dev);
    }
    Ok(TrialOutcome::deviation(worst, ctx, format!("lam={}", lam.to_text())))
}

// ---------------------------------------------------------------------------
// Four-argument expansions.

fn bailey_comp(
    rng: &mut ChaCha8Rng,
    opts: &RunOptions,
    ctx: &PrecisionContext,
) -> Result<TrialOutcome> {
    let pr = draw_params(rng, ctx);
    let a = draw_c(rng, ctx, 0.9, 1.7);
    let b = draw_c(rng, ctx, 0.6, 1.3);
    let vs: Vec<C> = (0..4).map(|_| draw_c(rng, ctx, 0.5, 1.4)).collect();
    let pool = small_pairs(3);
    let lam = pick(rng, &pool).clone();
    let subs = lam.sub_pairs();
    let kap = pick(rng, &subs).clone();
    let lhs = skew_interp(&lam, &kap, &vs, &a, &b, &pr, ctx)?;
    // Right side: nested two-extra coefficients; the control perturbs the
    // lowered parameter of the inner coefficient.
    let v01 = m(&vs[0], &vs[1], ctx);
    let v23 = m(&vs[2], &vs[3], ctx);
    let b_in = perturb_c(&b, opts.perturb, ctx);
    let mut rhs = ctx.zero();
    for mu in lam.sub_pairs() {
        if !kap.contained_in(&mu) {
            continue;
        }
        let outer = bn(
            &lam,
            &mu,
            &d(&a, &b_in, ctx),
            &v01,
            vec![d(&a, &vs[0], ctx), d(&a, &vs[1], ctx)],
            &pr,
            ctx,
        )?;
        let inner = bn(
            &mu,
            &kap,
            &d(&a, &m(&v01, &b_in, ctx), ctx),
            &v23,
            vec![
                d(&a, &m(&v01, &vs[2], ctx), ctx),
                d(&a, &m(&v01, &vs[3], ctx), ctx),
            ],
            &pr,
            ctx,
        )?;
        rhs += m(&outer, &inner, ctx);
    }
    Ok(TrialOutcome::pair(lhs, rhs, format!("lam={} kap={}", lam.to_text(), kap.to_text())))
}

fn compose(
    rng: &mut ChaCha8Rng,
    opts: &RunOptions,
    ctx: &PrecisionContext,
) -> Result<TrialOutcome> {
    let pr = draw_params(rng, ctx);
    let a = draw_c(rng, ctx, 0.9, 1.7);
    let b = draw_c(rng, ctx, 0.6, 1.3);
    let vs: Vec<C> = (0..4).map(|_| draw_c(rng, ctx, 0.5, 1.4)).collect();
    let pool = small_pairs(3);
    let lam = pick(rng, &pool).clone();
    let subs = lam.sub_pairs();
    let kap = pick(rng, &subs).clone();
    let lhs = skew_interp(&lam, &kap, &vs, &a, &b, &pr, ctx)?;
    let a_low = perturb_c(&d(&a, &m(&vs[0], &vs[1], ctx), ctx), opts.perturb, ctx);
    let mut rhs = ctx.zero();
    for mu in lam.sub_pairs() {
        if !kap.contained_in(&mu) {
            continue;
        }
        let first = skew_interp(&lam, &mu, &vs[0..2], &a, &b, &pr, ctx)?;
        let second = skew_interp(&mu, &kap, &vs[2..4], &a_low, &b, &pr, ctx)?;
        rhs += m(&first, &second, ctx);
    }
    Ok(TrialOutcome::pair(lhs, rhs, format!("lam={} kap={}", lam.to_text(), kap.to_text())))
}

fn symm_hidden(
    rng: &mut ChaCha8Rng,
    opts: &RunOptions,
    ctx: &PrecisionContext,
) -> Result<TrialOutcome> {
    let pr = draw_params(rng, ctx);
    let a = draw_c(rng, ctx, 0.9, 1.7);
    let b = draw_c(rng, ctx, 0.6, 1.3);
    let v0 = draw_c(rng, ctx, 0.5, 1.4);
    let v1 = draw_c(rng, ctx, 0.5, 1.4);
    let pool = small_pairs(3);
    let lam = pick(rng, &pool).clone();
    let lhs = lifted(&lam, &[v0.clone(), v1.clone()], &a, &b, &pr, ctx)?;
    // Swap the second argument with the hidden value a/(v0 v1); the control
    // misplaces the hidden value.
    let hidden = perturb_c(&d(&a, &m(&v0, &v1, ctx), ctx), opts.perturb, ctx);
    let rhs = lifted(&lam, &[v0, hidden], &a, &b, &pr, ctx)?;
    Ok(TrialOutcome::pair(lhs, rhs, format!("lam={}", lam.to_text())))
}

fn conn_coeff(
    rng: &mut ChaCha8Rng,
    opts: &RunOptions,
    ctx: &PrecisionContext,
) -> Result<TrialOutcome> {
    let pr = draw_params(rng, ctx);
    let a = draw_c(rng, ctx, 0.9, 1.7);
    let ap = draw_c(rng, ctx, 0.9, 1.7);
    let b = draw_c(rng, ctx, 0.6, 1.3);
    let vs: Vec<C> = (0..4).map(|_| draw_c(rng, ctx, 0.5, 1.4)).collect();
    let pool = small_pairs(3);
    let lam = pick(rng, &pool).clone();
    let lhs = lifted(&lam, &vs, &a, &b, &pr, ctx)?;
    let big_v = prodc(&vs, ctx);
    let ap_used = perturb_c(&ap, opts.perturb, ctx);
    let link = [d(&a, &big_v, ctx), d(&big_v, &ap_used, ctx)];
    let mut rhs = ctx.zero();
    for kap in lam.sub_pairs() {
        let coeff = skew_interp(&lam, &kap, &link, &a, &b, &pr, ctx)?;
        let tail = lifted(&kap, &vs, &ap, &b, &pr, ctx)?;
        rhs += m(&coeff, &tail, ctx);
    }
    Ok(TrialOutcome::pair(lhs, rhs, format!("lam={}", lam.to_text())))
}

fn duality(
    rng: &mut ChaCha8Rng,
    opts: &RunOptions,
    ctx: &PrecisionContext,
) -> Result<TrialOutcome> {
    let pr = draw_params(rng, ctx);
    let a = draw_c(rng, ctx, 0.9, 1.7);
    let b = draw_c(rng, ctx, 0.6, 1.3);
    let vs: Vec<C> = (0..2).map(|_| draw_c(rng, ctx, 0.5, 1.4)).collect();
    let singles: Vec<PartitionPair> = pairs_bounded(0, 3, 3)
        .into_iter()
        .filter(|x| x.weight() <= 4)
        .collect();
    let lam = pick(rng, &singles).clone();
    let subs = lam.sub_pairs();
    let kap = pick(rng, &subs).clone();
    let lhs = skew_interp(&lam, &kap, &vs, &a, &b, &pr, ctx)?;
    // Transpose the single partitions and pass to the reciprocal bases; the
    // finite sums never expand infinite products in the inverted bases.
    let dual_pr = EllipticParams {
        p: pr.p.clone(),
        q: pr.t.clone().recip(),
        t: pr.q.clone().recip(),
        p_half: None,
        q_half: None,
        t_half: None,
    };
    let dual_b = perturb_c(
        &d(&b, &m(&pr.q, &pr.t, ctx), ctx),
        opts.perturb,
        ctx,
    );
    let transpose = |x: &PartitionPair| {
        PartitionPair::new(crate::partitions::Partition::empty(), x.q_part.conjugate())
    };
    let rhs = skew_interp(&transpose(&lam), &transpose(&kap), &vs, &a, &dual_b, &dual_pr, ctx)?;
    Ok(TrialOutcome::pair(lhs, rhs, format!("lam={} kap={}", lam.to_text(), kap.to_text())))
}

// ---------------------------------------------------------------------------
// Rectangle shifts of the rescaled skew functions.

fn shift_add(
    rng: &mut ChaCha8Rng,
    opts: &RunOptions,
    ctx: &PrecisionContext,
) -> Result<TrialOutcome> {
    let pr = draw_params(rng, ctx);
    let (t, p, q) = (&pr.t, &pr.p, &pr.q);
    let pq = m(p, q, ctx);
    let a = draw_c(rng, ctx, 0.9, 1.7);
    let b = draw_c(rng, ctx, 0.6, 1.3);
    let vs: Vec<C> = (0..2).map(|_| draw_c(rng, ctx, 0.5, 1.4)).collect();
    let big_v = prodc(&vs, ctx);
    let n = 2usize;
    let r = Rect { l: 1, m: 1 };
    let qq = pq.clone(); // p^1 q^1
    let pool: Vec<PartitionPair> = small_pairs(3).into_iter().filter(|x| x.len() <= n).collect();
    let lam = pick(rng, &pool).clone();
    let subs: Vec<PartitionPair> = lam.sub_pairs();
    let kap = pick(rng, &subs).clone();
    let lhs = skew_hat(
        &add_rect(r, n, &lam),
        &add_rect(r, n, &kap),
        &vs,
        &a,
        &b,
        &pr,
        ctx,
    )?;
    let tn1 = tpow(&pr, n as i64 - 1, ctx);
    let p2q2 = m(&pq, &pq, ctx);
    let mut head_args: Vec<C> = vs.iter().map(|v| d(&pq, &m(&b, v, ctx), ctx)).collect();
    head_args.push(d(&m(&qq, &a, ctx), &m(&tn1, &b, ctx), ctx));
    head_args.push(d(
        &m(&m(&p2q2, &tn1, ctx), &big_v, ctx),
        &m(&qq, &m(&a, &b, ctx), ctx),
        ctx,
    ));
    let head = delta0(
        &rect(r, n),
        &d(&pq, &m(&b, &b, ctx), ctx),
        &head_args,
        t,
        p,
        q,
        ctx,
    )?;
    let q2a = m(&m(&qq, &qq, ctx), &a, ctx);
    let shared = [
        m(&m(&pq, &tn1, ctx), &qq, ctx),
        d(&q2a, &m(&tn1, &b, ctx), ctx),
        d(&m(&a, &b, ctx), &pq, ctx),
        d(&m(&p2q2, &qq, ctx), &m(&b, &b, ctx), ctx),
    ];
    let num = delta0(&lam, &d(&q2a, &b, ctx), &shared, t, p, q, ctx)?;
    let den_args = [
        shared[0].clone(),
        d(&shared[1], &big_v, ctx),
        d(&shared[2], &big_v, ctx),
        shared[3].clone(),
    ];
    let den = delta0(&kap, &d(&q2a, &m(&big_v, &b, ctx), ctx), &den_args, t, p, q, ctx)?;
    let tail = skew_hat(
        &lam,
        &kap,
        &vs,
        &perturb_c(&m(&qq, &a, ctx), opts.perturb, ctx),
        &d(&b, &qq, ctx),
        &pr,
        ctx,
    )?;
    let rhs = m(&m(&head, &d(&num, &den, ctx), ctx), &tail, ctx);
    Ok(TrialOutcome::pair(lhs, rhs, format!("lam={} kap={}", lam.to_text(), kap.to_text())))
}

fn shift_concat(
    rng: &mut ChaCha8Rng,
    opts: &RunOptions,
    ctx: &PrecisionContext,
) -> Result<TrialOutcome> {
    let pr = draw_params(rng, ctx);
    let (t, p, q) = (&pr.t, &pr.p, &pr.q);
    let pq = m(p, q, ctx);
    let a = draw_c(rng, ctx, 0.9, 1.7);
    let b = draw_c(rng, ctx, 0.6, 1.3);
    let vs: Vec<C> = (0..2).map(|_| draw_c(rng, ctx, 0.5, 1.4)).collect();
    let big_v = prodc(&vs, ctx);
    let n = 1usize;
    let r = Rect { l: 1, m: 1 };
    let qq = pq.clone();
    // First parts bounded by the box.
    let pool: Vec<PartitionPair> = pairs_bounded(1, 1, 2);
    let lam = pick(rng, &pool).clone();
    let subs: Vec<PartitionPair> = lam.sub_pairs();
    let kap = pick(rng, &subs).clone();
    let lhs = skew_hat(
        &concat_rect(r, n, &lam),
        &concat_rect(r, n, &kap),
        &vs,
        &a,
        &b,
        &pr,
        ctx,
    )?;
    let tn1 = tpow(&pr, n as i64 - 1, ctx);
    let tn = tpow(&pr, n as i64, ctx);
    let t2n = m(&tn, &tn, ctx);
    let p2q2 = m(&pq, &pq, ctx);
    let mut head_args: Vec<C> = vs.iter().map(|v| d(&pq, &m(&b, v, ctx), ctx)).collect();
    head_args.push(d(&m(&qq, &a, ctx), &m(&tn1, &b, ctx), ctx));
    head_args.push(d(
        &m(&m(&p2q2, &tn1, ctx), &big_v, ctx),
        &m(&qq, &m(&a, &b, ctx), ctx),
        ctx,
    ));
    let head = delta0(
        &rect(r, n),
        &d(&pq, &m(&b, &b, ctx), ctx),
        &head_args,
        t,
        p,
        q,
        ctx,
    )?;
    let shared = [
        d(&pq, &m(&qq, &m(&tn, t, ctx), ctx), ctx),
        d(&m(&qq, &a, ctx), &m(&d(&t2n, t, ctx), &b, ctx), ctx),
        d(&m(&a, &b, ctx), &pq, ctx),
        d(&p2q2, &m(&tn, &m(&b, &b, ctx), ctx), ctx),
    ];
    let num = delta0(&lam, &d(&a, &m(&t2n, &b, ctx), ctx), &shared, t, p, q, ctx)?;
    let den_args = [
        shared[0].clone(),
        d(&shared[1], &big_v, ctx),
        d(&shared[2], &big_v, ctx),
        shared[3].clone(),
    ];
    let den = delta0(
        &kap,
        &d(&a, &m(&t2n, &m(&big_v, &b, ctx), ctx), ctx),
        &den_args,
        t,
        p,
        q,
        ctx,
    )?;
    let tail = skew_hat(
        &lam,
        &kap,
        &vs,
        &perturb_c(&d(&a, &tn, ctx), opts.perturb, ctx),
        &m(&tn, &b, ctx),
        &pr,
        ctx,
    )?;
    let rhs = m(&m(&head, &d(&num, &den, ctx), ctx), &tail, ctx);
    Ok(TrialOutcome::pair(lhs, rhs, format!("lam={} kap={}", lam.to_text(), kap.to_text())))
}

fn shift_complement(
    rng: &mut ChaCha8Rng,
    opts: &RunOptions,
    ctx: &PrecisionContext,
) -> Result<TrialOutcome> {
    let pr = draw_params(rng, ctx);
    let (t, p, q) = (&pr.t, &pr.p, &pr.q);
    let pq = m(p, q, ctx);
    let a = draw_c(rng, ctx, 0.9, 1.7);
    let b = draw_c(rng, ctx, 0.6, 1.3);
    let vs: Vec<C> = (0..2).map(|_| draw_c(rng, ctx, 0.5, 1.4)).collect();
    let big_v = prodc(&vs, ctx);
    let n = 2usize;
    let r = Rect { l: 2, m: 1 };
    let qq = m(&m(p, p, ctx), q, ctx); // p^2 q^1
    let pool: Vec<PartitionPair> = rect(r, n).sub_pairs();
    let lam = pick(rng, &pool).clone();
    let subs: Vec<PartitionPair> = lam.sub_pairs();
    let kap = pick(rng, &subs).clone();
    let lhs = skew_hat(
        &complement(r, n, &kap),
        &complement(r, n, &lam),
        &vs,
        &a,
        &b,
        &pr,
        ctx,
    )?;
    let tn1 = tpow(&pr, n as i64 - 1, ctx);
    let tn = tpow(&pr, n as i64, ctx);
    let t2n2 = m(&tn1, &tn1, ctx);
    let p2q2 = m(&pq, &pq, ctx);
    let mut head_args: Vec<C> = vs.iter().map(|v| d(&pq, &m(&b, v, ctx), ctx)).collect();
    head_args.push(d(&m(&qq, &a, ctx), &m(&tn1, &b, ctx), ctx));
    head_args.push(d(
        &m(&m(&p2q2, &tn1, ctx), &big_v, ctx),
        &m(&qq, &m(&a, &b, ctx), ctx),
        ctx,
    ));
    let head = delta0(
        &rect(r, n),
        &d(&pq, &m(&b, &b, ctx), ctx),
        &head_args,
        t,
        p,
        q,
        ctx,
    )?;
    let q2a = m(&m(&qq, &qq, ctx), &a, ctx);
    let base_args = [
        tn.clone(),
        qq.clone().recip(),
        d(&m(&tn1, &m(&b, &b, ctx), ctx), &m(&pq, &qq, ctx), ctx),
        d(&m(&pq, &big_v, ctx), &m(&a, &b, ctx), ctx),
    ];
    let num = delta_full(
        &lam,
        &d(&m(&t2n2, &m(&b, &big_v, ctx), ctx), &q2a, ctx),
        &base_args,
        t,
        p,
        q,
        ctx,
    )?;
    let den_args = [
        base_args[0].clone(),
        base_args[1].clone(),
        base_args[2].clone(),
        d(&pq, &m(&a, &b, ctx), ctx),
    ];
    let den = delta_full(
        &kap,
        &d(&m(&t2n2, &b, ctx), &q2a, ctx),
        &den_args,
        t,
        p,
        q,
        ctx,
    )?;
    let tail = skew_hat(
        &lam,
        &kap,
        &vs,
        &perturb_c(
            &d(&m(&m(&pq, &big_v, ctx), &tn1, ctx), &m(&qq, &a, ctx), ctx),
            opts.perturb,
            ctx,
        ),
        &d(&m(&pq, &qq, ctx), &m(&tn1, &b, ctx), ctx),
        &pr,
        ctx,
    )?;
    let rhs = m(&m(&head, &d(&num, &den, ctx), ctx), &tail, ctx);
    Ok(TrialOutcome::pair(lhs, rhs, format!("lam={} kap={}", lam.to_text(), kap.to_text())))
}

// ---------------------------------------------------------------------------
// The partition-swap transformation (concatenation against arguments with
// pair products in powers of t) and its dual.

fn partition_swap(
    rng: &mut ChaCha8Rng,
    opts: &RunOptions,
    ctx: &PrecisionContext,
) -> Result<TrialOutcome> {
    let pr = draw_params(rng, ctx);
    let (t, p, q) = (&pr.t, &pr.p, &pr.q);
    let pq = m(p, q, ctx);
    let a = draw_c(rng, ctx, 0.9, 1.7);
    let b = draw_c(rng, ctx, 0.6, 1.3);
    let mut worst = 0.0f64;

    // Direct form: one argument pair multiplying to t^{n_0}, box (1,1),
    // n = 1, n' = 2.
    {
        let r = Rect { l: 1, m: 1 };
        let qq = pq.clone();
        let (nn, n0, npr) = (1i64, 1i64, 2i64);
        let v0 = draw_c(rng, ctx, 0.5, 1.4);
        let v1 = perturb_c(&d(&tpow(&pr, n0, ctx), &v0, ctx), opts.perturb, ctx);
        let pool: Vec<PartitionPair> = pairs_bounded(1, 1, 3);
        let lam = pick(rng, &pool).clone();
        let kap = pick(rng, &pool).clone();
        let lhs = skew_hat(
            &concat_rect(r, npr as usize, &lam),
            &concat_rect(r, nn as usize, &kap),
            &[v0.clone(), v1.clone()],
            &a,
            &b,
            &pr,
            ctx,
        )?;
        let tnpr = tpow(&pr, npr, ctx);
        let pref_num = delta0(
            &rect(r, n0 as usize),
            &d(&a, &m(&b, &tpow(&pr, npr - n0, ctx), ctx), ctx),
            &[d(&m(&a, &v0, ctx), &tnpr, ctx), d(&m(&a, &v1, ctx), &tnpr, ctx)],
            t,
            p,
            q,
            ctx,
        )?;
        let pref_den = delta0(
            &rect(r, (npr - nn) as usize),
            &d(&a, &m(&b, &tpow(&pr, nn, ctx), ctx), ctx),
            &[
                d(&m(&a, &b, ctx), &pq, ctx),
                d(&m(&pq, &a, ctx), &m(&tpow(&pr, npr + nn, ctx), &b, ctx), ctx),
            ],
            t,
            p,
            q,
            ctx,
        )?;
        let shared = [
            qq.clone().recip(),
            d(&m(&qq, &a, ctx), &m(&tpow(&pr, npr - 1, ctx), &b, ctx), ctx),
            d(&m(&a, &b, ctx), &m(&pq, &tnpr, ctx), ctx),
        ];
        let num = delta_full(
            &kap,
            &d(&a, &m(&tpow(&pr, npr + nn, ctx), &b, ctx), ctx),
            &[
                shared[0].clone(),
                shared[1].clone(),
                shared[2].clone(),
                d(&m(&pq, &tpow(&pr, npr - nn, ctx), ctx), &m(&a, &b, ctx), ctx),
            ],
            t,
            p,
            q,
            ctx,
        )?;
        let den = delta_full(
            &lam,
            &d(&a, &m(&m(&tnpr, &tnpr, ctx), &b, ctx), ctx),
            &[
                shared[0].clone(),
                shared[1].clone(),
                shared[2].clone(),
                d(&pq, &m(&a, &b, ctx), ctx),
            ],
            t,
            p,
            q,
            ctx,
        )?;
        let tail = skew_hat(
            &kap,
            &lam,
            &[v0, v1],
            &d(&pq, &m(&tpow(&pr, nn, ctx), &b, ctx), ctx),
            &d(&m(&pq, &tnpr, ctx), &a, ctx),
            &pr,
            ctx,
        )?;
        let rhs = m(
            &m(&d(&pref_num, &pref_den, ctx), &d(&num, &den, ctx), ctx),
            &tail,
            ctx,
        );
        worst = worst.max(ctx.rel_err(&lhs, &rhs));
    }

    // Dual form: pair product 1/(pq), box growing from (0,0) to (1,1),
    // n = 1 (single-row pairs).
    {
        let r = Rect { l: 1, m: 1 };
        let n = 1usize;
        let v0 = draw_c(rng, ctx, 0.5, 1.4);
        let v1 = perturb_c(&d(&ctx.one(), &m(&pq, &v0, ctx), ctx), opts.perturb, ctx);
        let qpr = pq.clone(); // Q' = p q, Q = 1
        let pool: Vec<PartitionPair> = small_pairs(3)
            .into_iter()
            .filter(|x| x.len() <= n)
            .collect();
        let lam = pick(rng, &pool).clone();
        let kap = pick(rng, &pool).clone();
        let lhs = skew_hat(
            &add_rect(r, n, &lam),
            &kap,
            &[v0.clone(), v1.clone()],
            &a,
            &b,
            &pr,
            ctx,
        )?;
        let pref_num = delta0(
            &rect(r, n),
            &d(&m(&qpr, &a, ctx), &m(&pq, &b, ctx), ctx),
            &[
                d(&m(&qpr, &a, ctx), &m(&pq, &v0, ctx), ctx),
                d(&m(&qpr, &a, ctx), &m(&pq, &v1, ctx), ctx),
            ],
            t,
            p,
            q,
            ctx,
        )?;
        let pref_den = delta0(
            &rect(r, n),
            &d(&a, &b, ctx),
            &[
                d(&m(&a, &b, ctx), &pq, ctx),
                m(&m(&pq, &qpr, ctx), &d(&a, &b, ctx), ctx),
            ],
            t,
            p,
            q,
            ctx,
        )?;
        let tn = tpow(&pr, n as i64, ctx);
        let shared = [
            tn.clone(),
            d(&m(&m(&a, t, ctx), &qpr, ctx), &m(&tn, &b, ctx), ctx),
            d(&m(&m(&a, &b, ctx), &qpr, ctx), &pq, ctx),
        ];
        let num = delta_full(
            &kap,
            &m(&d(&a, &b, ctx), &qpr, ctx),
            &[
                shared[0].clone(),
                shared[1].clone(),
                shared[2].clone(),
                d(&pq, &m(&qpr, &m(&a, &b, ctx), ctx), ctx),
            ],
            t,
            p,
            q,
            ctx,
        )?;
        let den = delta_full(
            &lam,
            &m(&d(&a, &b, ctx), &m(&qpr, &qpr, ctx), ctx),
            &[
                shared[0].clone(),
                shared[1].clone(),
                shared[2].clone(),
                d(&pq, &m(&a, &b, ctx), ctx),
            ],
            t,
            p,
            q,
            ctx,
        )?;
        let tail = skew_hat(
            &kap,
            &lam,
            &[v0, v1],
            &d(&pq, &b, ctx),
            &d(&pq, &m(&qpr, &a, ctx), ctx),
            &pr,
            ctx,
        )?;
        let rhs = m(
            &m(&d(&pref_num, &pref_den, ctx), &d(&num, &den, ctx), ctx),
            &tail,
            ctx,
        );
        worst = worst.max(ctx.rel_err(&lhs, &rhs));
    }

    Ok(TrialOutcome::deviation(worst, ctx, "swap direct+dual".to_string()))
}

fn dual_km(
    rng: &mut ChaCha8Rng,
    opts: &RunOptions,
    ctx: &PrecisionContext,
) -> Result<TrialOutcome> {
    let pr = draw_params(rng, ctx);
    let pq = m(&pr.p, &pr.q, ctx);
    let a = draw_c(rng, ctx, 0.9, 1.7);
    let b = draw_c(rng, ctx, 0.6, 1.3);
    let r = Rect { l: 1, m: 1 };
    let qq = pq.clone();
    let (nn, npr) = (1i64, 2i64); // one argument pair with product t
    let top_lo = rect(r, nn as usize);
    let top_hi = rect(r, npr as usize);
    // Hypergeometric-side parameters of the cross ratio.
    let tmn = tpow(&pr, -(nn + npr), ctx);
    let xs = [
        b.clone(),
        d(&m(&qq, &m(&pq, &pr.t, ctx), ctx), &b, ctx),
        m(&m(&tmn, &a, ctx), &pr.t, ctx),
        d(&pq, &m(&qq, &m(&tmn, &a, ctx), ctx), ctx),
    ];
    let a_low = d(&m(&tpow(&pr, nn + npr - 1, ctx), &b, ctx), &qq, ctx);
    let b_low = d(&m(&qq, &a, ctx), &tpow(&pr, nn + npr - 1, ctx), ctx);
    let mut ratios: Vec<C> = Vec::new();
    for _ in 0..5 {
        let v0 = draw_c(rng, ctx, 0.5, 1.4);
        let v1 = perturb_c(&d(&pr.t, &v0, ctx), opts.perturb, ctx);
        let vs = [v0, v1];
        let lhs = skew_hat(&top_lo, &PartitionPair::empty(), &vs, &a, &b, &pr, ctx)?;
        let mut gam = ctx.one();
        for v in &vs {
            for x in &xs {
                gam = m(&gam, &gplus_ratio(x, v, &pr, ctx)?, ctx);
            }
        }
        let tail = skew_hat(&top_hi, &PartitionPair::empty(), &vs, &a_low, &b_low, &pr, ctx)?;
        ratios.push(d(&lhs, &m(&gam, &tail, ctx), ctx));
    }
    let mut worst = 0.0f64;
    for rr in &ratios[1..] {
        worst = worst.max(ctx.rel_err(&ratios[0], rr));
    }
    Ok(TrialOutcome::pair(
        ratios[0].clone(),
        ratios[1].clone(),
        format!("draws=5 worst={worst:.3e}"),
    ))
}

// ---------------------------------------------------------------------------
// Support (vanishing) theorems.

fn part_le(x: (u32, u32), y: (u32, u32)) -> bool {
    x.0 <= y.0 && x.1 <= y.1
}

/// Interlacing support `kap_i <= lam_i <= kap_{i-n} + (l, m)` with the
/// convention that rows of `kap` at nonpositive indices are infinite.
fn interlaced(lam: &PartitionPair, kap: &PartitionPair, n: usize, l: u32, mm: u32) -> bool {
    if !kap.contained_in(lam) {
        return false;
    }
    for i in (n + 1)..=lam.len() {
        let hi = kap.part(i - n);
        if !part_le(lam.part(i), (hi.0 + l, hi.1 + mm)) {
            return false;
        }
    }
    true
}

fn vanish_lemmas(
    rng: &mut ChaCha8Rng,
    opts: &RunOptions,
    ctx: &PrecisionContext,
) -> Result<TrialOutcome> {
    let pr = draw_params(rng, ctx);
    let (t, p, q) = (&pr.t, &pr.p, &pr.q);
    let pq = m(p, q, ctx);
    let a = draw_c(rng, ctx, 0.9, 1.7);
    let b = draw_c(rng, ctx, 0.6, 1.3);
    let v0 = draw_c(rng, ctx, 0.5, 1.4);
    let pool = small_pairs(4);
    let mut max_sup = 0.0f64;
    let mut max_vio = 0.0f64;

    // Interlacing support from an argument pair with product t p^{-1}.
    {
        let special = perturb_c(&d(&m(t, p, ctx), &ctx.one(), ctx), opts.perturb, ctx);
        let vs = [v0.clone(), d(&special, &v0, ctx)];
        for _ in 0..10 {
            let lam = pick(rng, &pool).clone();
            let kap = pick(rng, &pool).clone();
            if !kap.contained_in(&lam) {
                continue;
            }
            let val = skew_interp(&lam, &kap, &vs, &a, &b, &pr, ctx)?;
            let mag = ctx.abs(&val).to_f64();
            if interlaced(&lam, &kap, 1, 1, 0) {
                max_sup = max_sup.max(mag);
            } else {
                max_vio = max_vio.max(mag);
            }
        }
    }

    // First-part bound from an argument at a/(p^{-1}q^{-1}t).
    {
        let s = d(&m(t, &ctx.one(), ctx), &pq, ctx); // p^{-1} q^{-1} t
        let arg = perturb_c(&d(&a, &s, ctx), opts.perturb, ctx);
        let vs = [v0.clone(), arg];
        for _ in 0..10 {
            let lam = pick(rng, &pool).clone();
            let kap = pick(rng, &pool).clone();
            if !kap.contained_in(&lam) || !part_le(kap.part(2), (1, 1)) {
                continue;
            }
            let val = skew_interp(&lam, &kap, &vs, &a, &b, &pr, ctx)?;
            let mag = ctx.abs(&val).to_f64();
            if part_le(lam.part(2), (1, 1)) {
                max_sup = max_sup.max(mag);
            } else {
                max_vio = max_vio.max(mag);
            }
        }
    }

    // Lifted-function vanishing from a discrete first argument against a
    // matched lowered parameter.
    {
        let arg0 = perturb_c(&d(&m(&pq, &a, ctx), t, ctx), opts.perturb, ctx);
        let v1 = draw_c(rng, ctx, 0.5, 1.4);
        let b3 = d(&pq, &a, ctx);
        for _ in 0..8 {
            let lam = pick(rng, &pool).clone();
            let val = lifted(&lam, &[arg0.clone(), v1.clone()], &a, &b3, &pr, ctx)?;
            let mag = ctx.abs(&val).to_f64();
            if part_le(lam.part(2), (1, 1)) {
                max_sup = max_sup.max(mag);
            } else {
                max_vio = max_vio.max(mag);
            }
        }
    }

    if max_sup == 0.0 {
        return Ok(TrialOutcome::deviation(f64::NAN, ctx, "no supported draws".into()));
    }
    Ok(TrialOutcome::deviation(
        max_vio / max_sup,
        ctx,
        format!("sup={max_sup:.3e} vio={max_vio:.3e}"),
    ))
}

pub fn register(cases: &mut Vec<IdentityCase>) {
    cases.push(IdentityCase {
        id: "skew_delta",
        status: Status::Proved,
        description: "with no arguments (or an exactly inverse argument pair) the skew \
                      interpolation function is a Kronecker delta",
        tolerance: 1e-20,
        trials: 8,
        control: true,
        run: skew_delta,
    });
    cases.push(IdentityCase {
        id: "binom_inversion",
        status: Status::Proved,
        description: "elliptic binomial coefficients at inverted brackets are mutually inverse \
                      lower-triangular families",
        tolerance: 1e-20,
        trials: 6,
        control: true,
        run: binom_inversion,
    });
    cases.push(IdentityCase {
        id: "bailey_comp",
        status: Status::Proved,
        description: "four-argument skew interpolation functions expand as nested two-extra \
                      binomial coefficients",
        tolerance: 1e-20,
        trials: 6,
        control: true,
        run: bailey_comp,
    });
    cases.push(IdentityCase {
        id: "compose",
        status: Status::Proved,
        description: "argument-splitting composition rule for skew interpolation functions",
        tolerance: 1e-20,
        trials: 6,
        control: true,
        run: compose,
    });
    cases.push(IdentityCase {
        id: "symmA2n",
        status: Status::Proved,
        description: "lifted interpolation functions are symmetric in their arguments together \
                      with the hidden value a/V",
        tolerance: 1e-20,
        trials: 8,
        control: true,
        run: symm_hidden,
    });
    cases.push(IdentityCase {
        id: "conn_coeff",
        status: Status::Proved,
        description: "connection coefficients between lifted families are skew functions at the \
                      linking argument pair [a/V, V/a']",
        tolerance: 1e-20,
        trials: 6,
        control: true,
        run: conn_coeff,
    });
    cases.push(IdentityCase {
        id: "duality",
        status: Status::Proved,
        description: "single-partition skew functions transpose under (t;p,q) -> (1/q;p,1/t) \
                      with b -> b/qt",
        tolerance: 1e-20,
        trials: 8,
        control: true,
        run: duality,
    });
    cases.push(IdentityCase {
        id: "shift_add",
        status: Status::Proved,
        description: "adding a rectangle to both partitions shifts the rescaled skew function by \
                      explicit degree-zero symbols",
        tolerance: 1e-18,
        trials: 5,
        control: true,
        run: shift_add,
    });
    cases.push(IdentityCase {
        id: "shift_concat",
        status: Status::Proved,
        description: "concatenating a rectangle onto both partitions shifts the rescaled skew \
                      function by explicit degree-zero symbols",
        tolerance: 1e-18,
        trials: 5,
        control: true,
        run: shift_concat,
    });
    cases.push(IdentityCase {
        id: "shift_complement",
        status: Status::Proved,
        description: "complementing both partitions in a rectangle transforms the rescaled skew \
                      function with full Delta-symbol ratios",
        tolerance: 1e-18,
        trials: 5,
        control: true,
        run: shift_complement,
    });
    cases.push(IdentityCase {
        id: "thm_1_12",
        status: Status::Proved,
        description: "partition-swap transformation: concatenated tops against argument pairs in \
                      powers of t (and its add-rectangle dual in powers of 1/pq)",
        tolerance: 1e-18,
        trials: 5,
        control: true,
        run: partition_swap,
    });
    cases.push(IdentityCase {
        id: "dual_KM",
        status: Status::Proportionality,
        description: "dual Karlsson-Minton proportionality between rectangle-indexed rescaled \
                      functions at swapped parameter sets",
        tolerance: 1e-16,
        trials: 5,
        control: true,
        run: dual_km,
    });
    cases.push(IdentityCase {
        id: "vanish_lemmas",
        status: Status::Proved,
        description: "support theorems: interlacing bounds from argument pairs in t^n p^{-l} \
                      q^{-m}, first-part bounds from discrete arguments, and the lifted-function \
                      vanishing at matched lowered parameters",
        tolerance: 1e-20,
        trials: 6,
        control: true,
        run: vanish_lemmas,
    });
}
