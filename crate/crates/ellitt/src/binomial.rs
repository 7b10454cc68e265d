//! Elliptic binomial coefficients for partition pairs, plus the support
//! predicates that prune every terminating sum in the crate.
//!
//! The binomial coefficient `<lam/mu>_{[A,B];t;p,q}` is pinned by a contract,
//! not a printed formula:
//!
//! (i)   `<mu/0>_{[a,b]} = Delta0_mu(a|b)`;
//! (ii)  the inversion `sum_mu <lam/mu>_{[a/b,ab/pq]} <mu/kap>_{[pq/b^2,pq/ab]}
//!       = delta_{lam,kap}`;
//! (iii) the row-strip relation `<(l,m).lam/mu>_{[a,t]} =
//!       Delta0_{(l,m)}(a|t) (Delta_mu(a/t|1/Q,Qa) / Delta_lam(a/t^2|1/Q,Qa))
//!       <mu/lam>_{[a/t,t]}` with `Q = p^l q^m`;
//! (iv)  the rectangle-top closed form
//!       `<(l,m)^n/mu>_{[A,B]} = Delta0_{(l,m)^n}(A|B) Delta_mu(A/B|;)
//!       Delta0_mu(A/B | t^n, p^{-l}q^{-m}, p^l q^m A/t^{n-1})` for
//!       `mu` inside the rectangle.
//!
//! Relations (i)-(iv) are mutually consistent; this is non-obvious — the
//! one-box case reduces to `Delta_box(x|;) Delta0_box(x|t) Delta0_box(x|1/p)
//! p x = -1`, an exact theta identity that fails badly if the full-symbol
//! factor `Delta_mu(A/B|;)` in (iv) is dropped. The construction here
//! derives everything from two ingredients:
//!
//! 1. The two-argument skew interpolation function with plethystic pair
//!    product `t`, `R*_{lam/mu}([v0, t/v0]; a, b)`, evaluated via its hatted
//!    normalization by a terminating swap recursion: writing
//!    `top = (l,m)^{n'} . rest` (leading joint row times its multiplicity),
//!    the support bound forces `bottom = (l,m)^{n'-1} . rest'`, and
//!    `Rhat*_{top/bottom}` equals an explicit product of Delta symbols times
//!    `Rhat*_{rest'/rest}` at swapped parameters (see [`rhat2`]). Each step
//!    strictly reduces `|top| + |bottom|`. (A similar-looking factorization
//!    through a plain `[ab, t^n]` binomial is only support-accurate — it is
//!    off by an elementary theta ratio — so the fully normalized swap form
//!    is used instead.)
//! 2. Generic bracket `[A, B]`: the defining sum
//!    `R*_{lam/0}([v...]; a, b) = sum_{mu} <lam/mu>_{[a/b, ab/pq]}
//!    Delta0_mu(pq/b^2 | pq/bv_0, ..., pq prod v/ab)` is, for fixed draws of
//!    the arguments, a linear system in the unknown family
//!    `{<lam/mu>_{[A,B]}: mu inside lam}` with computable left-hand sides
//!    (item 1 plus composition). Solving it over enough draws recovers the
//!    family; the anchor `<lam/0> = Delta0_lam(A|B)` — and, when the top is
//!    a rectangle, the closed form (iv) for `<lam/lam>` — is verified on
//!    every solve, so a badly conditioned draw set fails loudly instead of
//!    silently.
//!
//! Relation (iii) gives an independent recursion for `[a, t]` brackets
//! (strip the first joint row, swap top with the remainder); a test checks
//! it against the generic solve.
//!
//! Values are memoized per (top, bottom, bracket, precision) fingerprint;
//! the Littlewood-type sums re-query heavily.

use crate::hp::{NumError, PrecisionContext, Result, C};
use crate::linalg;
use crate::partitions::{Partition, PartitionPair, Rect};
use crate::symbols::{cpow, delta0, delta_empty, delta_full};
use crate::theta::EllipticParams;
use rug::ops::CompleteRound;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// A fully specified binomial coefficient `<top/bottom>_{[bracket](extras)}`.
#[derive(Debug, Clone)]
pub struct BinomialSpec {
    pub top: PartitionPair,
    pub bottom: PartitionPair,
    /// The bracket `[A, B]`.
    pub bracket: (C, C),
    /// Parenthesized extra parameters; empty for the plain coefficient.
    /// Two extras `(e0, e1)` denote the two-argument skew interpolation
    /// function with `a^2 = B e0 e1`, `v_r = a/e_r`.
    pub extras: Vec<C>,
    pub params: EllipticParams,
}

/// Vanishing bound for bracket second entry `t^n`:
/// `bottom_i <= top_i <= bottom_{i-n}` with the `bottom_0 = infinity`
/// sentinel, componentwise.
pub fn support_t(top: &PartitionPair, bottom: &PartitionPair, n: usize) -> bool {
    if !bottom.contained_in(top) {
        return false;
    }
    for i in (n + 1)..=top.len() {
        let (tl, tm) = top.part(i);
        let (bl, bm) = bottom.part(i - n);
        if tl > bl || tm > bm {
            return false;
        }
    }
    true
}

/// Vanishing bound for bracket second entry `p^{-l} q^{-m}`:
/// `bottom_i <= top_i <= bottom_i + (l, m)` componentwise.
pub fn support_pq(top: &PartitionPair, bottom: &PartitionPair, b: Rect) -> bool {
    if !bottom.contained_in(top) {
        return false;
    }
    for i in 1..=top.len() {
        let (tl, tm) = top.part(i);
        let (bl, bm) = bottom.part(i);
        if tl > bl + b.l || tm > bm + b.m {
            return false;
        }
    }
    true
}

/// Drops the first `k` joint rows of the pair.
fn drop_rows(lam: &PartitionPair, k: usize) -> PartitionPair {
    let dropk = |p: &Partition| {
        if p.len() <= k {
            Partition::new(Vec::new())
        } else {
            Partition::new(p.parts()[k..].to_vec())
        }
    };
    PartitionPair::new(dropk(&lam.p_part), dropk(&lam.q_part))
}

/// If `lam` is a rectangle `(l, m)^k` (all joint rows equal), returns it.
fn as_rect(lam: &PartitionPair) -> Option<(u32, u32, usize)> {
    let k = lam.len();
    if k == 0 {
        return Some((0, 0, 0));
    }
    let (l, m) = lam.part(1);
    for i in 2..=k {
        if lam.part(i) != (l, m) {
            return None;
        }
    }
    Some((l, m, k))
}

fn kron(a: &PartitionPair, b: &PartitionPair, ctx: &PrecisionContext) -> C {
    if a == b {
        ctx.one()
    } else {
        ctx.zero()
    }
}

fn guard_div(num: C, den: C, what: &str, ctx: &PrecisionContext) -> Result<C> {
    if ctx.abs(&den) < ctx.f(ctx.abs_floor) {
        return Err(NumError::Pole(format!("{what} denominator vanished")));
    }
    Ok(num / den)
}

/// `<top/bottom>_{[a, t]}` by the strip-and-swap recursion of relation
/// (iii). Kept as an independent route for `[a, t]` brackets; a test checks
/// it against the generic linear solve.
fn binom_t(
    top: &PartitionPair,
    bottom: &PartitionPair,
    a: &C,
    pr: &EllipticParams,
    ctx: &PrecisionContext,
) -> Result<C> {
    if !bottom.contained_in(top) {
        return Ok(ctx.zero());
    }
    if top.is_empty() {
        return Ok(ctx.one());
    }
    let (t, p, q) = (&pr.t, &pr.p, &pr.q);
    let (l, m) = top.part(1);
    let row = PartitionPair::from_parts(vec![l], vec![m]);
    let rest = drop_rows(top, 1);
    let qpow = cpow(p, l as i64, ctx) * cpow(q, m as i64, ctx);
    let q_inv = qpow.clone().recip();
    let qa = (&qpow * a).complete(ctx.prec2());
    let a_t = (a / t).complete(ctx.prec2());
    let a_t2 = (&a_t / t).complete(ctx.prec2());
    let pref = delta0(&row, a, &[t.clone()], t, p, q, ctx)?;
    let num = delta_full(bottom, &a_t, &[q_inv.clone(), qa.clone()], t, p, q, ctx)?;
    let den = delta_full(&rest, &a_t2, &[q_inv, qa], t, p, q, ctx)?;
    let ratio = guard_div(num, den, "strip-and-swap Delta", ctx)?;
    let swapped = binom_t(bottom, &rest, &a_t, pr, ctx)?;
    Ok(pref * ratio * swapped)
}

/// `Rhat*_{top/bottom}([v0, t/v0]; a, b)`: the hatted two-argument skew
/// interpolation function with plethystic pair product `t`, by the
/// terminating swap recursion described in the module docs.
///
/// Writing `top = (l,m)^{n'} . lam` with `n'` the multiplicity of the
/// leading joint row, the support bound forces `bottom = (l,m)^{n'-1} . kap`
/// on the nonvanishing locus; with `n = n' - 1` and `Q = p^l q^m`,
///
/// `Rhat*_{top/bottom}([v0,v1];a,b) =
///   (Delta0_{(l,m)}(a/b t^n | a v0/t^{n'}, a v1/t^{n'})
///    / Delta0_{(l,m)}(a/b t^n | ab/pq, pq a/t^{n'+n} b))
///   (Delta_kap(a/t^{n'+n} b | 1/Q, Q a/t^{n'-1} b, ab/pq t^{n'}, pq t/ab)
///    / Delta_lam(a/t^{2n'} b | 1/Q, Q a/t^{n'-1} b, ab/pq t^{n'}, pq/ab))
///   Rhat*_{kap/lam}([v0,v1]; pq/t^n b, pq t^{n'}/a)`.
fn rhat2(
    top: &PartitionPair,
    bottom: &PartitionPair,
    v0: &C,
    a: &C,
    b: &C,
    pr: &EllipticParams,
    ctx: &PrecisionContext,
) -> Result<C> {
    if !support_t(top, bottom, 1) {
        return Ok(ctx.zero());
    }
    if top.is_empty() {
        return Ok(ctx.one());
    }
    let (t, p, q) = (&pr.t, &pr.p, &pr.q);
    let pq = (p * q).complete(ctx.prec2());
    let (l, m) = top.part(1);
    let mut np = 1usize;
    while np < top.len() && top.part(np + 1) == (l, m) {
        np += 1;
    }
    let n = np - 1;
    let lam = drop_rows(top, np);
    let kap = drop_rows(bottom, n);
    let row = PartitionPair::from_parts(vec![l], vec![m]);
    let qpow = cpow(p, l as i64, ctx) * cpow(q, m as i64, ctx);
    let v1 = (t / v0).complete(ctx.prec2());
    let ab = (a * b).complete(ctx.prec2());
    let t_np = cpow(t, np as i64, ctx);
    let a_row =
        (a / &(b * &cpow(t, n as i64, ctx)).complete(ctx.prec2())).complete(ctx.prec2());
    let num1 = delta0(
        &row,
        &a_row,
        &[
            (a * v0).complete(ctx.prec2()) / &t_np,
            (a * &v1).complete(ctx.prec2()) / &t_np,
        ],
        t,
        p,
        q,
        ctx,
    )?;
    let den1 = delta0(
        &row,
        &a_row,
        &[
            (&ab / &pq).complete(ctx.prec2()),
            (&pq * a).complete(ctx.prec2())
                / (&cpow(t, (np + n) as i64, ctx) * b).complete(ctx.prec2()),
        ],
        t,
        p,
        q,
        ctx,
    )?;
    // Shared full-Delta arguments of the swap prefactor.
    let shared = [
        qpow.clone().recip(),
        (&qpow * a).complete(ctx.prec2())
            / (&cpow(t, np as i64 - 1, ctx) * b).complete(ctx.prec2()),
        (&ab / &(&pq * &t_np).complete(ctx.prec2())).complete(ctx.prec2()),
    ];
    let mut kap_args = shared.to_vec();
    kap_args.push((&pq * t).complete(ctx.prec2()) / &ab);
    let mut lam_args = shared.to_vec();
    lam_args.push((&pq / &ab).complete(ctx.prec2()));
    let a_kap = (a / &(&cpow(t, (np + n) as i64, ctx) * b).complete(ctx.prec2()))
        .complete(ctx.prec2());
    let a_lam =
        (a / &(&cpow(t, 2 * np as i64, ctx) * b).complete(ctx.prec2())).complete(ctx.prec2());
    let num_d = delta_full(&kap, &a_kap, &kap_args, t, p, q, ctx)?;
    let den_d = delta_full(&lam, &a_lam, &lam_args, t, p, q, ctx)?;
    let a_next =
        (&pq / &(&cpow(t, n as i64, ctx) * b).complete(ctx.prec2())).complete(ctx.prec2());
    let b_next = (&pq * &t_np).complete(ctx.prec2()) / a;
    let swapped = rhat2(&kap, &lam, v0, &a_next, &b_next, pr, ctx)?;
    let r1 = guard_div(num1, den1, "swap rectangle Delta0", ctx)?;
    let r2 = guard_div(num_d, den_d, "swap full Delta", ctx)?;
    Ok(r1 * r2 * swapped)
}

/// `R*_{lam/kap}([v0, t^n/v0]; a, b)`: the two-argument skew interpolation
/// function with plethystic pair product `t^n`.
fn r2(
    lam: &PartitionPair,
    kap: &PartitionPair,
    v0: &C,
    n: usize,
    a: &C,
    b: &C,
    pr: &EllipticParams,
    ctx: &PrecisionContext,
) -> Result<C> {
    if !kap.contained_in(lam) {
        return Ok(ctx.zero());
    }
    if n == 0 {
        // The pair (v0, 1/v0) deletes; no arguments leaves a delta function.
        return Ok(kron(lam, kap, ctx));
    }
    let (t, p, q) = (&pr.t, &pr.p, &pr.q);
    let pq = (p * q).complete(ctx.prec2());
    if n == 1 {
        // Convert the hatted value back: for pair product V = t,
        // R* = (Delta0_lam(a/b | ab/pq) / Delta0_kap(a/bt | ab/pq t)) Rhat*.
        let hat = rhat2(lam, kap, v0, a, b, pr, ctx)?;
        if hat.real().is_zero() && hat.imag().is_zero() {
            return Ok(hat);
        }
        let ab = (a * b).complete(ctx.prec2());
        let num = delta0(
            lam,
            &(a / b).complete(ctx.prec2()),
            &[(&ab / &pq).complete(ctx.prec2())],
            t,
            p,
            q,
            ctx,
        )?;
        let den = delta0(
            kap,
            &((a / b).complete(ctx.prec2()) / t),
            &[(&ab / &pq).complete(ctx.prec2()) / t],
            t,
            p,
            q,
            ctx,
        )?;
        return Ok(guard_div(num, den, "hat conversion Delta0", ctx)? * hat);
    }
    // Split off one pair of product t via insertion of (t/v0, v0/t).
    let mut acc = ctx.zero();
    let v0_t = (v0 / t).complete(ctx.prec2());
    let a_t = (a / t).complete(ctx.prec2());
    for mu in lam.sub_pairs() {
        if !kap.contained_in(&mu) || !support_t(lam, &mu, 1) || !support_t(&mu, kap, n - 1) {
            continue;
        }
        let first = r2(lam, &mu, v0, 1, a, b, pr, ctx)?;
        let second = r2(&mu, kap, &v0_t, n - 1, &a_t, b, pr, ctx)?;
        acc += first * second;
    }
    Ok(acc)
}

/// `R*_{lam/0}([w_1, t/w_1, ..., w_k, t/w_k]; a, b)` by composition into
/// two-argument factors.
fn rstar_ladder(
    lam: &PartitionPair,
    ws: &[C],
    a: &C,
    b: &C,
    pr: &EllipticParams,
    ctx: &PrecisionContext,
) -> Result<C> {
    if ws.is_empty() {
        return Ok(kron(lam, &PartitionPair::empty(), ctx));
    }
    let a_t = (a / &pr.t).complete(ctx.prec2());
    let mut acc = ctx.zero();
    for mu in lam.sub_pairs() {
        if !support_t(lam, &mu, 1) || mu.len() > ws.len() - 1 {
            continue;
        }
        let first = r2(lam, &mu, &ws[0], 1, a, b, pr, ctx)?;
        let rest = rstar_ladder(&mu, &ws[1..], &a_t, b, pr, ctx)?;
        acc += first * rest;
    }
    Ok(acc)
}

/// The rectangle-top closed form (iv): `<(l,m)^k/mu>_{[A,B]}` for `mu`
/// inside the rectangle.
fn binom_rect_top(
    rect: (u32, u32, usize),
    mu: &PartitionPair,
    bracket_a: &C,
    bracket_b: &C,
    pr: &EllipticParams,
    ctx: &PrecisionContext,
) -> Result<C> {
    let (l, m, k) = rect;
    let lam = PartitionPair::from_parts(vec![l; k], vec![m; k]);
    if !mu.contained_in(&lam) {
        return Ok(ctx.zero());
    }
    let (t, p, q) = (&pr.t, &pr.p, &pr.q);
    let alpha = (bracket_a / bracket_b).complete(ctx.prec2());
    let qpow = cpow(p, l as i64, ctx) * cpow(q, m as i64, ctx);
    let extras = [
        cpow(t, k as i64, ctx),
        qpow.clone().recip(),
        (&qpow * bracket_a).complete(ctx.prec2()) / &cpow(t, k as i64 - 1, ctx),
    ];
    let head = delta0(&lam, bracket_a, &[bracket_b.clone()], t, p, q, ctx)?;
    let tail = delta_empty(mu, &alpha, t, p, q, ctx)? * delta0(mu, &alpha, &extras, t, p, q, ctx)?;
    Ok(head * tail)
}

/// The full family `{<lam/mu>_{[A,B]}: mu inside lam}` by the linear solve
/// described in the module docs, as (subpair, value) rows.
fn binom_family(
    lam: &PartitionPair,
    bracket_a: &C,
    bracket_b: &C,
    pr: &EllipticParams,
    ctx: &PrecisionContext,
) -> Result<Vec<(PartitionPair, C)>> {
    use rand::{Rng, SeedableRng};
    if lam.is_empty() {
        return Ok(vec![(PartitionPair::empty(), ctx.one())]);
    }
    let (t, p, q) = (&pr.t, &pr.p, &pr.q);
    let pq = (p * q).complete(ctx.prec2());
    // a^2 = A B pq, b = a/A; the defining sum is invariant under the root
    // choice, so either square root serves.
    let a = ((bracket_a * bracket_b).complete(ctx.prec2()) * &pq).sqrt();
    let b = (&a / bracket_a).complete(ctx.prec2());
    let subs = lam.sub_pairs();
    let dim = subs.len();
    let k = lam.len();
    let pq_b2 = (&pq / &(&b * &b).complete(ctx.prec2())).complete(ctx.prec2());
    let tail_arg =
        (&pq * &cpow(t, k as i64, ctx)).complete(ctx.prec2()) / (&a * &b).complete(ctx.prec2());
    let anchor_tol = ctx.rel_tol.sqrt();
    let mut last_err = None;
    for attempt in 0u64..3 {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xE111_B10_0 + attempt);
        let mut matrix: Vec<Vec<C>> = Vec::with_capacity(dim);
        let mut rhs: Vec<C> = Vec::with_capacity(dim);
        let mut failed = None;
        'draws: for _ in 0..dim {
            let ws: Vec<C> = (0..k)
                .map(|_| {
                    ctx.polar(
                        rng.gen_range(0.45..0.95),
                        rng.gen_range(0.0..std::f64::consts::TAU),
                    )
                })
                .collect();
            let mut args: Vec<C> = Vec::with_capacity(2 * k + 1);
            for w in &ws {
                args.push((&pq / &(&b * w).complete(ctx.prec2())).complete(ctx.prec2()));
                args.push((&pq * w).complete(ctx.prec2()) / (&b * t).complete(ctx.prec2()));
            }
            args.push(tail_arg.clone());
            let mut row = Vec::with_capacity(dim);
            for mu in &subs {
                match delta0(mu, &pq_b2, &args, t, p, q, ctx) {
                    Ok(v) => row.push(v),
                    Err(e) => {
                        failed = Some(e);
                        break 'draws;
                    }
                }
            }
            match rstar_ladder(lam, &ws, &a, &b, pr, ctx) {
                Ok(v) => rhs.push(v),
                Err(e) => {
                    failed = Some(e);
                    break 'draws;
                }
            }
            matrix.push(row);
        }
        if let Some(e) = failed {
            last_err = Some(e);
            continue;
        }
        let coeffs = match linalg::solve(matrix, rhs, ctx) {
            Ok(c) => c,
            Err(e) => {
                last_err = Some(e);
                continue;
            }
        };
        // Anchor: <lam/0> = Delta0_lam(A|B); for rectangle tops also check
        // <lam/lam> against the closed form (iv).
        let idx_0 = subs
            .iter()
            .position(|s| s.is_empty())
            .expect("empty pair among subpairs");
        let anchor0 = delta0(lam, bracket_a, &[bracket_b.clone()], t, p, q, ctx)?;
        let e0 = ctx.rel_err(&coeffs[idx_0], &anchor0);
        let e_rect = if let Some(rect) = as_rect(lam) {
            let idx_lam = subs
                .iter()
                .position(|s| s == lam)
                .expect("lam among its subpairs");
            let closed = binom_rect_top(rect, lam, bracket_a, bracket_b, pr, ctx)?;
            ctx.rel_err(&coeffs[idx_lam], &closed)
        } else {
            0.0
        };
        if e0 > anchor_tol || e_rect > anchor_tol {
            last_err = Some(NumError::NoConvergence(format!(
                "binomial family anchors off (delta0 {e0:.3e}, rectangle {e_rect:.3e})"
            )));
            continue;
        }
        return Ok(subs.into_iter().zip(coeffs).collect());
    }
    Err(last_err.unwrap_or_else(|| NumError::NoConvergence("binomial family solve failed".into())))
}

fn memo() -> &'static Mutex<HashMap<String, C>> {
    static MEMO: OnceLock<Mutex<HashMap<String, C>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

fn fingerprint(
    top: &PartitionPair,
    bottom: &PartitionPair,
    bracket: (&C, &C),
    pr: &EllipticParams,
    ctx: &PrecisionContext,
) -> String {
    format!(
        "{top};{bottom};{:?};{:?};{:?};{:?};{:?};{}",
        bracket.0, bracket.1, pr.t, pr.p, pr.q, ctx.digits
    )
}

/// The elliptic binomial coefficient described by `spec`.
///
/// Plain coefficients (no extras) come from the memoized family solve; two
/// extras denote the two-argument skew interpolation function and expand
/// through the defining sum. Other extras counts are not needed by any
/// identity checked in this crate and are rejected.
pub fn binom(spec: &BinomialSpec, ctx: &PrecisionContext) -> Result<C> {
    let pr = &spec.params;
    if !spec.bottom.contained_in(&spec.top) {
        return Ok(ctx.zero());
    }
    match spec.extras.len() {
        0 => {
            // The bracket [A, 1] is the Kronecker delta: support at t^0
            // forces top = bottom, and the diagonal value is 1 because a
            // plethystic pair (v, 1/v) — whose bracket this is — deletes
            // from the two-argument skew interpolation function.
            if ctx.rel_err(&spec.bracket.1, &ctx.one()) < ctx.rel_tol.sqrt() {
                return Ok(kron(&spec.top, &spec.bottom, ctx));
            }
            // The bracket [A, t] is a degenerate locus for the defining-sum
            // solve (ab = pq t puts a Delta0 argument at exactly 1), but it
            // is precisely where the strip-and-swap recursion applies.
            if ctx.rel_err(&spec.bracket.1, &pr.t) < ctx.rel_tol.sqrt() {
                return binom_t(&spec.top, &spec.bottom, &spec.bracket.0, pr, ctx);
            }
            let key = fingerprint(
                &spec.top,
                &spec.bottom,
                (&spec.bracket.0, &spec.bracket.1),
                pr,
                ctx,
            );
            if let Some(v) = memo().lock().unwrap().get(&key) {
                return Ok(v.clone());
            }
            let family = binom_family(&spec.top, &spec.bracket.0, &spec.bracket.1, pr, ctx)?;
            let mut out = None;
            {
                let mut cache = memo().lock().unwrap();
                for (mu, v) in family {
                    if mu == spec.bottom {
                        out = Some(v.clone());
                    }
                    let k = fingerprint(
                        &spec.top,
                        &mu,
                        (&spec.bracket.0, &spec.bracket.1),
                        pr,
                        ctx,
                    );
                    cache.insert(k, v);
                }
            }
            Ok(out.expect("bottom pair enumerated among subpairs"))
        }
        2 => {
            let (t, p, q) = (&pr.t, &pr.p, &pr.q);
            let pq = (p * q).complete(ctx.prec2());
            let (big_a, big_b) = (&spec.bracket.0, &spec.bracket.1);
            let (e0, e1) = (&spec.extras[0], &spec.extras[1]);
            // a^2 = B e0 e1; the value is invariant under the root choice.
            let a = ((big_b * e0).complete(ctx.prec2()) * e1).sqrt();
            let b = (&a / big_a).complete(ctx.prec2());
            let v0 = (&a / e0).complete(ctx.prec2());
            let v1 = (&a / e1).complete(ctx.prec2());
            let ab = (&a * &b).complete(ctx.prec2());
            let b1 = (&ab / &pq).complete(ctx.prec2());
            let a2 = (&pq / &(&b * &b).complete(ctx.prec2())).complete(ctx.prec2());
            let b2 = (&pq * big_b).complete(ctx.prec2()) / &ab;
            let d0_args = [
                (&pq / &(&b * &v0).complete(ctx.prec2())).complete(ctx.prec2()),
                (&pq / &(&b * &v1).complete(ctx.prec2())).complete(ctx.prec2()),
            ];
            let mut acc = ctx.zero();
            for mu in spec.top.sub_pairs() {
                if !spec.bottom.contained_in(&mu) {
                    continue;
                }
                let outer = binom(
                    &BinomialSpec {
                        top: spec.top.clone(),
                        bottom: mu.clone(),
                        bracket: (big_a.clone(), b1.clone()),
                        extras: vec![],
                        params: pr.clone(),
                    },
                    ctx,
                )?;
                let inner = binom(
                    &BinomialSpec {
                        top: mu.clone(),
                        bottom: spec.bottom.clone(),
                        bracket: (a2.clone(), b2.clone()),
                        extras: vec![],
                        params: pr.clone(),
                    },
                    ctx,
                )?;
                let d0 = delta0(&mu, &a2, &d0_args, t, p, q, ctx)?;
                acc += outer * inner * d0;
            }
            Ok(acc)
        }
        other => Err(NumError::InvalidParameter(format!(
            "binomial extras count {other} unsupported (0 or 2 expected)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(p: &[u32], q: &[u32]) -> PartitionPair {
        PartitionPair::from_parts(p.to_vec(), q.to_vec())
    }

    fn ctx() -> PrecisionContext {
        PrecisionContext::standard()
    }

    fn params(ctx: &PrecisionContext) -> EllipticParams {
        EllipticParams::new(ctx.c(0.23, -0.11), ctx.c(0.19, 0.13), ctx.c(0.31, 0.07), ctx)
            .unwrap()
    }

    fn plain(
        top: &PartitionPair,
        bottom: &PartitionPair,
        a: &C,
        b: &C,
        pr: &EllipticParams,
        ctx: &PrecisionContext,
    ) -> C {
        binom(
            &BinomialSpec {
                top: top.clone(),
                bottom: bottom.clone(),
                bracket: (a.clone(), b.clone()),
                extras: vec![],
                params: pr.clone(),
            },
            ctx,
        )
        .unwrap()
    }

    #[test]
    fn support_predicates() {
        // support_t: interlacing with shift n.
        assert!(support_t(&pp(&[2, 1], &[1]), &pp(&[2, 1], &[1]), 0));
        assert!(support_t(&pp(&[2, 1], &[1]), &pp(&[1], &[]), 1));
        assert!(!support_t(&pp(&[2, 2], &[]), &pp(&[1], &[]), 1));
        assert!(support_t(&pp(&[2, 2], &[]), &pp(&[1], &[]), 2));
        // support_pq: componentwise box bound.
        assert!(support_pq(&pp(&[2], &[1]), &pp(&[1], &[1]), Rect { l: 1, m: 0 }));
        assert!(!support_pq(&pp(&[2], &[]), &pp(&[], &[]), Rect { l: 1, m: 0 }));
        assert!(!support_pq(&pp(&[2], &[]), &pp(&[], &[]), Rect { l: 1, m: 1 }));
        assert!(support_pq(&pp(&[2], &[]), &pp(&[], &[]), Rect { l: 2, m: 0 }));
    }

    #[test]
    fn bottom_anchor_is_delta0() {
        // <lam/0>_{[A,B]} = Delta0_lam(A|B): exercised through the generic
        // solve, compared against an independent Delta0 evaluation.
        let ctx = ctx();
        let pr = params(&ctx);
        let a = ctx.c(1.3, 0.4);
        let b = ctx.c(0.7, -0.2);
        for lam in [pp(&[1], &[]), pp(&[1], &[1]), pp(&[2, 1], &[])] {
            let v = plain(&lam, &PartitionPair::empty(), &a, &b, &pr, &ctx);
            let d0 = delta0(&lam, &a, &[b.clone()], &pr.t, &pr.p, &pr.q, &ctx).unwrap();
            assert!(
                ctx.rel_err(&v, &d0) < 1e-12,
                "anchor mismatch for {lam}: {}",
                ctx.rel_err(&v, &d0)
            );
        }
    }

    #[test]
    fn rectangle_top_closed_form() {
        // For rectangle tops the whole family has the closed form (iv); the
        // generic solve must reproduce it for every sub-pair, not just the
        // anchors it self-checks.
        let ctx = ctx();
        let pr = params(&ctx);
        let a = ctx.c(1.15, 0.35);
        let b = ctx.c(0.8, -0.25);
        let cases = [(1u32, 0u32, 1usize), (0, 1, 1), (1, 1, 1), (1, 0, 2)];
        for rect in cases {
            let lam = PartitionPair::from_parts(vec![rect.0; rect.2], vec![rect.1; rect.2]);
            for mu in lam.sub_pairs() {
                let v = plain(&lam, &mu, &a, &b, &pr, &ctx);
                let closed = binom_rect_top(rect, &mu, &a, &b, &pr, &ctx).unwrap();
                assert!(
                    ctx.rel_err(&v, &closed) < 1e-12,
                    "closed form mismatch for top={lam}, mu={mu}: {}",
                    ctx.rel_err(&v, &closed)
                );
            }
        }
    }

    #[test]
    fn vanishes_outside_containment() {
        let ctx = ctx();
        let pr = params(&ctx);
        let v = plain(
            &pp(&[1], &[]),
            &pp(&[], &[1]),
            &ctx.c(1.2, 0.1),
            &ctx.c(0.9, 0.2),
            &pr,
            &ctx,
        );
        assert!(ctx.abs(&v).to_f64() == 0.0);
    }

    #[test]
    fn inversion_small() {
        // sum_mu <lam/mu>_{[a/b, ab/pq]} <mu/kap>_{[pq/b^2, pq/ab]} =
        // delta_{lam,kap}.
        let ctx = ctx();
        let pr = params(&ctx);
        let a = ctx.c(1.25, 0.35);
        let b = ctx.c(0.85, -0.3);
        let pq = (&pr.p * &pr.q).complete(ctx.prec2());
        let ab = (&a * &b).complete(ctx.prec2());
        let x1 = (&a / &b).complete(ctx.prec2());
        let y1 = (&ab / &pq).complete(ctx.prec2());
        let x2 = (&pq / &(&b * &b).complete(ctx.prec2())).complete(ctx.prec2());
        let y2 = (&pq / &ab).complete(ctx.prec2());
        let lam = pp(&[1], &[1]);
        for kap in [PartitionPair::empty(), pp(&[1], &[]), pp(&[1], &[1])] {
            let mut acc = ctx.zero();
            for mu in lam.sub_pairs() {
                if !kap.contained_in(&mu) {
                    continue;
                }
                let outer = plain(&lam, &mu, &x1, &y1, &pr, &ctx);
                let inner = plain(&mu, &kap, &x2, &y2, &pr, &ctx);
                acc += outer * inner;
            }
            let expect = kron(&lam, &kap, &ctx);
            assert!(
                ctx.abs(&(&acc - &expect).complete(ctx.prec2())).to_f64() < 1e-12,
                "inversion failed for kap={kap}: got {acc:?}"
            );
        }
    }

    #[test]
    fn t_bracket_matches_rectangle_closed_form() {
        // The [a, t] bracket is served by the strip-and-swap recursion
        // (the generic solve is degenerate there); for rectangle tops the
        // closed form (iv) still applies and shares no code with the
        // recursion beyond the Delta symbols.
        let ctx = ctx();
        let pr = params(&ctx);
        let a = ctx.c(1.35, 0.45);
        let cases = [(1u32, 0u32, 2usize), (1, 1, 1), (0, 1, 2)];
        let mut checked = 0usize;
        for rect in cases {
            let lam = PartitionPair::from_parts(vec![rect.0; rect.2], vec![rect.1; rect.2]);
            for mu in lam.sub_pairs() {
                // At this degenerate bracket the closed form can hit a 0*inf
                // collision exactly where the binomial vanishes; only the
                // regular evaluations are comparable.
                let closed = match binom_rect_top(rect, &mu, &a, &pr.t, &pr, &ctx) {
                    Ok(v) => v,
                    Err(NumError::Pole(_)) => continue,
                    Err(e) => panic!("unexpected error: {e:?}"),
                };
                let v = plain(&lam, &mu, &a, &pr.t, &pr, &ctx);
                assert!(
                    ctx.rel_err(&v, &closed) < 1e-12,
                    "t-bracket closed form mismatch for top={lam}, mu={mu}: {}",
                    ctx.rel_err(&v, &closed)
                );
                checked += 1;
            }
        }
        assert!(checked >= 6, "too few regular cases compared: {checked}");
    }

    #[test]
    fn t_bracket_inversion_with_generic_family() {
        // Choosing ab = pq t makes the outer bracket of the inversion
        // [a/b, t] (strip-and-swap route) while the inner [pq/b^2, 1/t]
        // stays generic (linear-solve route), so the identity genuinely
        // links the two constructions.
        let ctx = ctx();
        let pr = params(&ctx);
        let pq = (&pr.p * &pr.q).complete(ctx.prec2());
        let a = ctx.c(1.3, 0.4);
        let b = (&pq * &pr.t).complete(ctx.prec2()) / &a;
        let x1 = (&a / &b).complete(ctx.prec2());
        let x2 = (&pq / &(&b * &b).complete(ctx.prec2())).complete(ctx.prec2());
        let y2 = ctx.one() / &pr.t;
        let lam = pp(&[1], &[1]);
        for kap in [PartitionPair::empty(), pp(&[], &[1]), pp(&[1], &[1])] {
            let mut acc = ctx.zero();
            for mu in lam.sub_pairs() {
                if !kap.contained_in(&mu) {
                    continue;
                }
                let outer = plain(&lam, &mu, &x1, &pr.t, &pr, &ctx);
                let inner = plain(&mu, &kap, &x2, &y2, &pr, &ctx);
                acc += outer * inner;
            }
            let expect = kron(&lam, &kap, &ctx);
            assert!(
                ctx.abs(&(&acc - &expect).complete(ctx.prec2())).to_f64() < 1e-12,
                "t-bracket inversion failed for kap={kap}: got {acc:?}"
            );
        }
    }

    /// `R*_{top/bottom}([vs]; a, b)` by its defining sum through plain
    /// binomials, used as the reference in the composition tests.
    fn rskew(
        top: &PartitionPair,
        bottom: &PartitionPair,
        vs: &[C],
        a: &C,
        b: &C,
        pr: &EllipticParams,
        ctx: &PrecisionContext,
    ) -> C {
        let pq = (&pr.p * &pr.q).complete(ctx.prec2());
        let prod: C = vs.iter().fold(ctx.one(), |acc, x| acc * x);
        let ab = (a * b).complete(ctx.prec2());
        let x1 = (a / b).complete(ctx.prec2());
        let y1 = (&ab / &pq).complete(ctx.prec2());
        let x2 = (&pq / &(b * b).complete(ctx.prec2())).complete(ctx.prec2());
        let y2 = (&pq * &prod).complete(ctx.prec2()) / &ab;
        let args: Vec<C> = vs
            .iter()
            .map(|x| (&pq / &(b * x).complete(ctx.prec2())).complete(ctx.prec2()))
            .collect();
        let mut acc = ctx.zero();
        for mu in top.sub_pairs() {
            if !bottom.contained_in(&mu) {
                continue;
            }
            let outer = plain(top, &mu, &x1, &y1, pr, ctx);
            let inner = plain(&mu, bottom, &x2, &y2, pr, ctx);
            let d0 = delta0(&mu, &x2, &args, &pr.t, &pr.p, &pr.q, ctx).unwrap();
            acc += outer * inner * d0;
        }
        acc
    }

    #[test]
    fn defining_sum_matches_swap_recursion() {
        // R*_{lam/0}([v0, t/v0]; a, b) two ways: the defining sum through
        // the solved binomial family, and the terminating swap recursion —
        // checked at fresh v0 values not used by the solver's draws.
        let ctx = ctx();
        let pr = params(&ctx);
        let a = ctx.c(1.28, 0.42);
        let b = ctx.c(0.77, -0.31);
        let lam = pp(&[1], &[1]);
        for v0 in [ctx.c(0.55, 0.6), ctx.c(1.05, -0.2)] {
            let direct = r2(&lam, &PartitionPair::empty(), &v0, 1, &a, &b, &pr, &ctx).unwrap();
            let t_v0 = (&pr.t / &v0).complete(ctx.prec2());
            let via_sum = rskew(
                &lam,
                &PartitionPair::empty(),
                &[v0.clone(), t_v0],
                &a,
                &b,
                &pr,
                &ctx,
            );
            assert!(
                ctx.rel_err(&direct, &via_sum) < 1e-12,
                "defining sum vs swap recursion mismatch at v0={v0:?}: {}",
                ctx.rel_err(&direct, &via_sum)
            );
        }
    }

    #[test]
    fn four_argument_composition() {
        // R*_{lam/kap}([v0..v3]; a, b) =
        //   sum_mu R*_{lam/mu}([v0,v1]; a, b) R*_{mu/kap}([v2,v3]; a/v0v1, b).
        let ctx = ctx();
        let pr = params(&ctx);
        let a = ctx.c(1.2, 0.3);
        let b = ctx.c(0.75, -0.25);
        let v = [
            ctx.c(0.8, 0.15),
            ctx.c(0.65, -0.4),
            ctx.c(0.9, 0.3),
            ctx.c(0.7, 0.1),
        ];
        let lam = pp(&[1], &[1]);
        let kap = PartitionPair::empty();
        let v01 = (&v[0] * &v[1]).complete(ctx.prec2());
        let a_shift = (&a / &v01).complete(ctx.prec2());
        let full = rskew(&lam, &kap, &v, &a, &b, &pr, &ctx);
        let mut composed = ctx.zero();
        for mu in lam.sub_pairs() {
            let first = rskew(&lam, &mu, &v[..2], &a, &b, &pr, &ctx);
            let second = rskew(&mu, &kap, &v[2..], &a_shift, &b, &pr, &ctx);
            composed += first * second;
        }
        assert!(
            ctx.rel_err(&full, &composed) < 1e-12,
            "four-argument composition failed: rel err {}",
            ctx.rel_err(&full, &composed)
        );
    }

    #[test]
    fn two_extras_matches_swap_recursion() {
        // With bracket second entry t and a^2 = t e0 e1, the two-extras
        // binomial is R*([v0, t/v0]; a, b), which the swap recursion
        // computes directly. The two routes are independent beyond the
        // Delta symbols (defining-sum solve vs swap recursion), so
        // agreement is a real cross-check.
        let ctx = ctx();
        let pr = params(&ctx);
        let big_a = ctx.c(1.15, 0.45);
        let e0 = ctx.c(0.95, 0.25);
        let e1 = ctx.c(0.7, -0.35);
        let a = ((&pr.t * &e0).complete(ctx.prec2()) * &e1).sqrt();
        let b = (&a / &big_a).complete(ctx.prec2());
        let v0 = (&a / &e0).complete(ctx.prec2());
        let lam = pp(&[1], &[1]);
        for kap in [
            PartitionPair::empty(),
            pp(&[1], &[]),
            pp(&[], &[1]),
            pp(&[1], &[1]),
        ] {
            let lhs = binom(
                &BinomialSpec {
                    top: lam.clone(),
                    bottom: kap.clone(),
                    bracket: (big_a.clone(), pr.t.clone()),
                    extras: vec![e0.clone(), e1.clone()],
                    params: pr.clone(),
                },
                &ctx,
            )
            .unwrap();
            let rhs = r2(&lam, &kap, &v0, 1, &a, &b, &pr, &ctx).unwrap();
            assert!(
                ctx.rel_err(&lhs, &rhs) < 1e-12,
                "extras-2 vs swap recursion mismatch for kap={kap}: rel err {}",
                ctx.rel_err(&lhs, &rhs)
            );
        }
    }
}
