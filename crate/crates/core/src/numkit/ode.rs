//! Integration of the ruled-surface Frenet system.

use crate::error::{Error, Result};
use crate::frenet::StrictionFrameField;
use crate::Vec3;

use super::grid::UniformGrid;

const FRAME_TOL: f64 = 1e-10;

#[derive(Clone, Copy)]
struct State {
    q: Vec3,
    h: Vec3,
    a: Vec3,
    c: Vec3,
}

impl State {
    fn axpy(&self, k: &State, t: f64) -> State {
        State {
            q: self.q + k.q * t,
            h: self.h + k.h * t,
            a: self.a + k.a * t,
            c: self.c + k.c * t,
        }
    }
}

/// Largest deviation of `[e0, e1, e2]` from an orthonormal right-handed
/// frame.
pub fn frame_deviation(e: [Vec3; 3]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in i..3 {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((e[i].dot(&e[j]) - target).abs());
        }
    }
    worst.max((e[0].cross(&e[1]).dot(&e[2]) - 1.0).abs())
}

fn gram_schmidt(s: &mut State) {
    s.q = s.q.normalize();
    s.h = (s.h - s.q * s.h.dot(&s.q)).normalize();
    s.a = s.q.cross(&s.h);
}

/// Integrates `q' = k1 h`, `h' = -k1 q + k2 a`, `a' = -k2 h` together with
/// the striction line `c' = cos(phi) q + sin(phi) a` over `grid`, using
/// classical RK4 with Gram–Schmidt re-orthonormalization after every step.
pub fn integrate_frenet(
    k1: impl Fn(f64) -> Result<f64>,
    k2: impl Fn(f64) -> Result<f64>,
    phi: impl Fn(f64) -> Result<f64>,
    frame0: [Vec3; 3],
    c0: Vec3,
    grid: UniformGrid,
) -> Result<StrictionFrameField> {
    let deviation = frame_deviation(frame0);
    if !(deviation < FRAME_TOL) {
        return Err(Error::NonOrthonormalFrame { deviation });
    }
    let rhs = |s: f64, y: &State| -> Result<State> {
        let (k1, k2, phi) = (k1(s)?, k2(s)?, phi(s)?);
        Ok(State {
            q: y.h * k1,
            h: y.a * k2 - y.q * k1,
            a: -y.h * k2,
            c: y.q * phi.cos() + y.a * phi.sin(),
        })
    };

    let n = grid.count;
    let dt = grid.step;
    let mut out = StrictionFrameField::with_capacity(grid, n);
    let mut y = State {
        q: frame0[0],
        h: frame0[1],
        a: frame0[2],
        c: c0,
    };
    for i in 0..n {
        let s = grid.at(i);
        out.push(y.c, y.q, y.h, y.a, k1(s)?, k2(s)?, s);
        if i + 1 == n {
            break;
        }
        let d1 = rhs(s, &y)?;
        let d2 = rhs(s + 0.5 * dt, &y.axpy(&d1, 0.5 * dt))?;
        let d3 = rhs(s + 0.5 * dt, &y.axpy(&d2, 0.5 * dt))?;
        let d4 = rhs(s + dt, &y.axpy(&d3, dt))?;
        let mut next = y;
        next.q += (d1.q + (d2.q + d3.q) * 2.0 + d4.q) * (dt / 6.0);
        next.h += (d1.h + (d2.h + d3.h) * 2.0 + d4.h) * (dt / 6.0);
        next.a += (d1.a + (d2.a + d3.a) * 2.0 + d4.a) * (dt / 6.0);
        next.c += (d1.c + (d2.c + d3.c) * 2.0 + d4.c) * (dt / 6.0);
        gram_schmidt(&mut next);
        if ![next.q, next.h, next.a, next.c]
            .iter()
            .all(|v| v.iter().all(|x| x.is_finite()))
        {
            return Err(Error::NonFinite { index: i + 1 });
        }
        y = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn standard() -> [Vec3; 3] {
        [Vec3::x(), Vec3::y(), Vec3::z()]
    }

    #[test]
    fn zero_curvature_is_a_straight_line() {
        let g = UniformGrid::spanning(0.0, 2.0, 41).unwrap();
        let zero = |_| Ok(0.0);
        let ff = integrate_frenet(zero, zero, zero, standard(), Vec3::zeros(), g).unwrap();
        for i in 0..g.count {
            assert!((ff.q[i] - Vec3::x()).norm() < 1e-15);
            assert!((ff.c[i] - Vec3::x() * g.at(i)).norm() < 1e-13);
        }
    }

    #[test]
    fn frames_stay_orthonormal() {
        let g = UniformGrid::spanning(0.0, 3.0, 2000).unwrap();
        let ff = integrate_frenet(
            |s: f64| Ok(2.0 + s.sin()),
            |s: f64| Ok((3.0 * s).cos()),
            |s: f64| Ok(0.3 * s),
            standard(),
            Vec3::zeros(),
            g,
        )
        .unwrap();
        for i in 0..g.count {
            assert!(frame_deviation([ff.q[i], ff.h[i], ff.a[i]]) < 1e-12);
        }
    }

    #[test]
    fn constant_curvatures_trace_a_cone() {
        // with k1 = 2, k2 = 1 the ruling keeps a fixed angle with
        // u = (k2 q + k1 a) / sqrt(5)
        let g = UniformGrid::spanning(0.0, 3.0, 2000).unwrap();
        let ff = integrate_frenet(|_| Ok(2.0), |_| Ok(1.0), |_| Ok(0.0), standard(), Vec3::zeros(), g).unwrap();
        let u0 = (ff.q[0] + ff.a[0] * 2.0) / 5f64.sqrt();
        for i in 0..g.count {
            let u = (ff.q[i] + ff.a[i] * 2.0) / 5f64.sqrt();
            assert!((u - u0).norm() < 1e-9, "{i}");
        }
    }

    #[test]
    fn rejects_bad_initial_frame() {
        let g = UniformGrid::spanning(0.0, 1.0, 10).unwrap();
        let zero = |_| Ok(0.0);
        let skew = [Vec3::x(), Vec3::new(0.1, 1.0, 0.0), Vec3::z()];
        assert!(matches!(
            integrate_frenet(zero, zero, zero, skew, Vec3::zeros(), g),
            Err(Error::NonOrthonormalFrame { .. })
        ));
        let left = [Vec3::x(), Vec3::z(), Vec3::y()];
        assert!(integrate_frenet(zero, zero, zero, left, Vec3::zeros(), g).is_err());
    }
}
