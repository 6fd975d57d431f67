//! The touching-circle ratio law behind the truncation construction.
//!
//! A small circle drawn inside a wedge near the top of the unit circle,
//! touching both wedge arcs, sits between distances `u1` (closest) and
//! `u2` (farthest) from the vertical axis.  As the circle shrinks toward
//! the top, the spread `(u2 - u1) / u1` tends to a limit that depends
//! only on the apex height `t` of the wedge and the arc skew `c` — this
//! limit is what decides whether a truncating facet keeps its foot, and
//! with it a new rest point.

use super::ChipError;

/// Limit of the spread `(u2 - u1) / u1` as the touching circle shrinks:
/// `2 t / (1 - t) + 2 c` for apex height `t` in `(0, 1)` and skew
/// `c >= 0`.
pub fn limit_ratio(t: f64, c: f64) -> Result<f64, ChipError> {
    if !(t > 0.0 && t < 1.0) {
        return Err(ChipError::DomainError(format!(
            "apex height t must lie in (0, 1), got {t}"
        )));
    }
    if !(c >= 0.0) {
        return Err(ChipError::DomainError(format!("skew c must be nonnegative, got {c}")));
    }
    Ok(2.0 * t / (1.0 - t) + 2.0 * c)
}

/// Exact finite-size spread from the planar construction.
///
/// Work in the meridian section: the unit circle centered at the origin,
/// the apex `p = (0, t)`, and the chord through `q1 = (u1, sqrt(1-u1^2))`
/// making angle `pi/2 - c*u1` with the segment `[p, q1]`.  The chord's
/// second circle intersection `q2` is the farthest point; the function
/// returns `(|q2.x| - u1) / u1`, which converges to [`limit_ratio`] as
/// `u1 -> 0`.
pub fn circle_ratio_oracle(t: f64, c: f64, u1: f64) -> Result<f64, ChipError> {
    limit_ratio(t, c)?;
    if !(u1 > 0.0 && u1 < 0.5) {
        return Err(ChipError::DomainError(format!(
            "closest distance u1 must lie in (0, 0.5), got {u1}"
        )));
    }
    let v1 = (1.0 - u1 * u1).sqrt();
    // Unit direction of [p, q1] and its left normal.
    let len = (u1 * u1 + (v1 - t) * (v1 - t)).sqrt();
    let d_hat = (u1 / len, (v1 - t) / len);
    let e = (-d_hat.1, d_hat.0);
    // Tilt the perpendicular chord by c*u1 toward d_hat (this is the
    // sense that widens the spread; the opposite sense narrows it).
    let phi = c * u1;
    let (s, co) = (phi.sin(), phi.cos());
    let dir = (e.0 * co + d_hat.0 * s, e.1 * co + d_hat.1 * s);
    // Second intersection of the chord with the unit circle: for the line
    // q1 + s*dir with |q1| = 1, the other root is s* = -2 q1 . dir.
    let q1 = (u1, v1);
    let s_star = -2.0 * (q1.0 * dir.0 + q1.1 * dir.1);
    let q2x = q1.0 + s_star * dir.0;
    Ok((q2x.abs() - u1) / u1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const PIN_TOL: f64 = 1e-2;

    #[test]
    fn limit_ratio_pins() {
        assert_eq!(limit_ratio(0.5, 0.0).unwrap(), 2.0);
        assert_eq!(limit_ratio(0.5, 0.25).unwrap(), 2.5);
        assert!((limit_ratio(0.9, 0.0).unwrap() - 18.0).abs() < 1e-12);
    }

    #[test]
    fn limit_ratio_rejects_heights_outside_the_open_interval() {
        assert!(matches!(limit_ratio(0.0, 0.0), Err(ChipError::DomainError(_))));
        assert!(matches!(limit_ratio(1.0, 0.0), Err(ChipError::DomainError(_))));
        assert!(matches!(limit_ratio(0.5, -0.1), Err(ChipError::DomainError(_))));
        assert!(matches!(circle_ratio_oracle(0.5, 0.0, 0.0), Err(ChipError::DomainError(_))));
    }

    #[test]
    fn oracle_reproduces_the_pinned_spread_near_the_pole() {
        let r = circle_ratio_oracle(0.9, 0.0, 1e-4).unwrap();
        assert!((r - 18.0).abs() < PIN_TOL, "spread {r}");
        let r = circle_ratio_oracle(0.5, 0.0, 1e-4).unwrap();
        assert!((r - 2.0).abs() < PIN_TOL, "spread {r}");
    }

    #[test]
    fn skew_shifts_the_limit_by_twice_its_value() {
        // The tilt sense is the widening one: +2c, not -2c.
        let base = circle_ratio_oracle(0.6, 0.0, 1e-5).unwrap();
        let skewed = circle_ratio_oracle(0.6, 0.8, 1e-5).unwrap();
        assert!((skewed - base - 1.6).abs() < 1e-3, "shift {}", skewed - base);
    }

    #[test]
    fn oracle_converges_monotonically_to_the_limit_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let t = rng.gen_range(0.05..0.95);
            let c = rng.gen_range(0.0..2.0);
            let limit = limit_ratio(t, c).unwrap();
            let mut last = f64::INFINITY;
            for exp in 2..=5 {
                let u1 = 10f64.powi(-exp);
                let err = (circle_ratio_oracle(t, c, u1).unwrap() - limit).abs();
                assert!(err < last, "t={t} c={c} u1={u1}: {err} !< {last}");
                last = err;
            }
            assert!(last < 1e-4, "t={t} c={c}: final error {last}");
        }
    }
}
