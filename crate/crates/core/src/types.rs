//! Shared value types: Cartesian 3-vectors and uniform time grids.
//!
//! Units are carried by context and documented at each use site: tesla for
//! fields, m/s for velocities, A·m² (equivalently J/T) for magnetic moments.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cartesian 3-vector in double precision.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    /// Unit vector along z, the default field and ring axis.
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Right-handed cross product.
    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y).hypot(self.z)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Unit vector in the same direction, or `None` for zero or non-finite input.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            Some(self / n)
        } else {
            None
        }
    }

    /// True when `|self| = 1` within `tol`.
    pub fn is_unit(self, tol: f64) -> bool {
        self.is_finite() && (self.norm() - 1.0).abs() <= tol
    }

    /// A unit vector orthogonal to `self`, chosen from the coordinate axis
    /// least aligned with it. `self` must be nonzero.
    pub fn any_orthogonal(self) -> Vec3 {
        let (ax, ay, az) = (self.x.abs(), self.y.abs(), self.z.abs());
        let pick = if ax <= ay && ax <= az {
            Vec3::X
        } else if ay <= az {
            Vec3::Y
        } else {
            Vec3::Z
        };
        let v = pick - self * (pick.dot(self) / self.norm_squared());
        v / v.norm()
    }
}

/// Free-function form of [`Vec3::dot`].
pub fn dot(u: Vec3, v: Vec3) -> f64 {
    u.dot(v)
}

/// Free-function form of [`Vec3::cross`].
pub fn cross(u: Vec3, v: Vec3) -> Vec3 {
    u.cross(v)
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

impl From<Vec3> for [f64; 3] {
    fn from(v: Vec3) -> Self {
        [v.x, v.y, v.z]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

/// Uniform grid of `n_steps` intervals on `[t_start, t_end]` (seconds).
///
/// `t_start` is the reference instant before which the external field is off.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    t_start: f64,
    t_end: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, n_steps: usize) -> Result<Self> {
        if !t_start.is_finite() || !t_end.is_finite() {
            return Err(Error::Config("time grid bounds must be finite".into()));
        }
        if t_end <= t_start {
            return Err(Error::Config(format!(
                "time grid needs t_end > t_start (got {t_start} .. {t_end})"
            )));
        }
        if n_steps < 2 {
            return Err(Error::Config(format!(
                "time grid needs at least 2 steps (got {n_steps})"
            )));
        }
        Ok(Self {
            t_start,
            t_end,
            n_steps,
        })
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn duration(&self) -> f64 {
        self.t_end - self.t_start
    }

    pub fn dt(&self) -> f64 {
        self.duration() / self.n_steps as f64
    }

    /// Time of grid point `i`; `time(n_steps)` is exactly `t_end`.
    pub fn time(&self, i: usize) -> f64 {
        if i == self.n_steps {
            self.t_end
        } else {
            self.t_start + i as f64 * self.dt()
        }
    }

    /// All `n_steps + 1` grid points.
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n_steps).map(move |i| self.time(i))
    }

    /// Same interval with twice as many steps.
    pub fn refined(&self) -> TimeGrid {
        TimeGrid {
            n_steps: self.n_steps * 2,
            ..*self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn dot_examples() {
        assert_eq!(dot(Vec3::ZERO, Vec3::new(1.0, 2.0, 3.0)), 0.0);
        assert_eq!(dot(Vec3::X, Vec3::Y), 0.0);
        assert_eq!(dot(Vec3::new(1.0, 2.0, 3.0), Vec3::new(4.0, 5.0, 6.0)), 32.0);
    }

    #[test]
    fn cross_examples() {
        assert_eq!(cross(Vec3::X, Vec3::Y), Vec3::Z);
        let u = Vec3::new(0.3, -1.7, 2.2);
        assert_eq!(cross(u, u), Vec3::ZERO);
        assert_eq!(
            cross(Vec3::new(2.0, 0.0, 0.0), Vec3::new(0.0, 3.0, 0.0)),
            Vec3::new(0.0, 0.0, 6.0)
        );
    }

    #[test]
    fn orthogonal_is_unit_and_perpendicular() {
        for v in [Vec3::Z, Vec3::new(1.0, 1.0, 0.0), Vec3::new(-3.0, 0.2, 7.0)] {
            let o = v.any_orthogonal();
            assert!(o.is_unit(1e-14));
            assert!(o.dot(v).abs() < 1e-14 * v.norm());
        }
    }

    #[test]
    fn grid_rejects_bad_bounds() {
        assert!(TimeGrid::new(1.0, 1.0, 10).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 1).is_err());
        assert!(TimeGrid::new(0.0, f64::NAN, 4).is_err());
        let g = TimeGrid::new(0.0, 2.0, 8).unwrap();
        assert_eq!(g.dt(), 0.25);
        assert_eq!(g.times().count(), 9);
        assert_eq!(g.time(8), 2.0);
        assert_eq!(g.refined().n_steps(), 16);
    }

    fn vec3() -> impl Strategy<Value = Vec3> {
        (-1e3..1e3f64, -1e3..1e3f64, -1e3..1e3f64).prop_map(|(x, y, z)| Vec3::new(x, y, z))
    }

    fn close(a: f64, b: f64, scale: f64) -> bool {
        (a - b).abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE)
    }

    proptest! {
        #[test]
        fn lagrange_identity(u in vec3(), v in vec3()) {
            let lhs = u.cross(v).norm_squared() + u.dot(v).powi(2);
            let rhs = u.norm_squared() * v.norm_squared();
            prop_assert!(close(lhs, rhs, rhs));
            prop_assert!(u.dot(u) >= 0.0);
        }

        #[test]
        fn dot_and_cross_are_bilinear(u in vec3(), v in vec3(), w in vec3(), a in -10.0..10.0f64) {
            let scale = (u.norm() * a.abs() + v.norm()) * w.norm();
            let lhs = (u * a + v).dot(w);
            let rhs = a * u.dot(w) + v.dot(w);
            prop_assert!(close(lhs, rhs, scale));

            let lc = (u * a + v).cross(w);
            let rc = u.cross(w) * a + v.cross(w);
            prop_assert!((lc - rc).norm() <= 1e-12 * scale.max(f64::MIN_POSITIVE));
        }

        #[test]
        fn cross_is_orthogonal(u in vec3(), v in vec3()) {
            let c = u.cross(v);
            let scale = u.norm() * v.norm();
            prop_assert!(c.dot(u).abs() <= 1e-12 * scale * u.norm() + f64::MIN_POSITIVE);
            prop_assert!(c.is_finite());
        }
    }
}
