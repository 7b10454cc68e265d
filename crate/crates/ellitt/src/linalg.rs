//! Small dense linear solves over arbitrary-precision complex numbers.
//!
//! The binomial-coefficient construction recovers one unknown row of
//! coefficients from a handful of evaluations, so the systems are tiny
//! (dimension = number of partitions in a shell, rarely above 20). Plain
//! Gaussian elimination with partial pivoting at working precision is both
//! simple and far more accurate than the conditioning of the systems
//! requires; no external matrix library handles the `rug` scalar type.

use crate::hp::{NumError, PrecisionContext, Result, C};
use rug::ops::CompleteRound;

/// Solve `A x = b` in place by Gaussian elimination with partial pivoting.
///
/// `a` is row-major, `n x n`; `b` has length `n`. Returns the solution
/// vector, or [`NumError::Degenerate`] when a pivot falls below the
/// context's absolute floor (the caller should re-draw its evaluation
/// points rather than trust a nearly singular system).
pub fn solve(mut a: Vec<Vec<C>>, mut b: Vec<C>, ctx: &PrecisionContext) -> Result<Vec<C>> {
    let n = b.len();
    assert_eq!(a.len(), n, "matrix/vector dimension mismatch");
    for row in &a {
        assert_eq!(row.len(), n, "matrix is not square");
    }
    for col in 0..n {
        // Partial pivot on magnitude.
        let mut piv = col;
        let mut best = ctx.abs(&a[col][col]);
        for r in (col + 1)..n {
            let mag = ctx.abs(&a[r][col]);
            if mag > best {
                best = mag;
                piv = r;
            }
        }
        if best < ctx.f(ctx.abs_floor) {
            return Err(NumError::Degenerate(format!(
                "linear system is singular at column {col} (pivot {best:.3e})"
            )));
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in (col + 1)..n {
            if a[r][col].real().is_zero() && a[r][col].imag().is_zero() {
                continue;
            }
            let f = (&a[r][col] / &a[col][col]).complete(ctx.prec2());
            for c2 in col..n {
                let sub = (&f * &a[col][c2]).complete(ctx.prec2());
                a[r][c2] -= sub;
            }
            let sub = (&f * &b[col]).complete(ctx.prec2());
            b[r] -= sub;
        }
    }
    // Back substitution.
    let mut x = vec![ctx.zero(); n];
    for col in (0..n).rev() {
        let mut acc = b[col].clone();
        for c2 in (col + 1)..n {
            let sub = (&a[col][c2] * &x[c2]).complete(ctx.prec2());
            acc -= sub;
        }
        x[col] = acc / &a[col][col];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_known_system() {
        let ctx = PrecisionContext::standard();
        // [[2, 1], [1, 3i]] x = [5, 1 + 6i]  =>  x = ...
        let a = vec![
            vec![ctx.c(2.0, 0.0), ctx.c(1.0, 0.0)],
            vec![ctx.c(1.0, 0.0), ctx.c(0.0, 3.0)],
        ];
        let x_true = vec![ctx.c(1.5, -0.5), ctx.c(2.0, 1.0)];
        let b = vec![
            (&a[0][0] * &x_true[0]).complete(ctx.prec2()) + (&a[0][1] * &x_true[1]).complete(ctx.prec2()),
            (&a[1][0] * &x_true[0]).complete(ctx.prec2()) + (&a[1][1] * &x_true[1]).complete(ctx.prec2()),
        ];
        let x = solve(a, b, &ctx).unwrap();
        for (xi, ti) in x.iter().zip(&x_true) {
            assert!(ctx.approx_equal(xi, ti), "{xi:?} vs {ti:?}");
        }
    }

    #[test]
    fn random_roundtrip() {
        use rand::{Rng, SeedableRng};
        let ctx = PrecisionContext::standard();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for n in [1usize, 3, 6, 10] {
            let a: Vec<Vec<C>> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| ctx.c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                        .collect()
                })
                .collect();
            let x_true: Vec<C> = (0..n)
                .map(|_| ctx.c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let b: Vec<C> = (0..n)
                .map(|r| {
                    let mut acc = ctx.zero();
                    for c2 in 0..n {
                        acc += (&a[r][c2] * &x_true[c2]).complete(ctx.prec2());
                    }
                    acc
                })
                .collect();
            let x = solve(a, b, &ctx).unwrap();
            for (xi, ti) in x.iter().zip(&x_true) {
                assert!(ctx.approx_equal(xi, ti), "n={n}: {xi:?} vs {ti:?}");
            }
        }
    }

    #[test]
    fn rejects_singular_matrix() {
        let ctx = PrecisionContext::standard();
        let a = vec![
            vec![ctx.c(1.0, 0.0), ctx.c(2.0, 0.0)],
            vec![ctx.c(2.0, 0.0), ctx.c(4.0, 0.0)],
        ];
        let b = vec![ctx.one(), ctx.one()];
        assert!(matches!(solve(a, b, &ctx), Err(NumError::Degenerate(_))));
    }
}
