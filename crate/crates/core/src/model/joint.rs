use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix3, Vector3, Vector6};
use rand::Rng;

use crate::error::{Error, Result};
use crate::model::lie::{exp_se3, exp_so3, log_se3, log_so3, project_to_so3};
use crate::scalar::Scalar;
use crate::spatial::{orthonormality_error, Motion, SpatialTransform};

/// Orthonormality drift above which rotation configurations are projected
/// back onto SO(3).
pub const RENORMALIZE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum JointKind {
    RevoluteX,
    RevoluteY,
    RevoluteZ,
    PrismaticX,
    PrismaticY,
    PrismaticZ,
    /// Ball joint; velocity is the relative angular velocity in the child frame.
    Spherical,
    /// Free 6-DoF joint; velocity is the relative twist in the child frame.
    Floating,
}

impl JointKind {
    pub const ALL: [JointKind; 8] = [
        JointKind::RevoluteX,
        JointKind::RevoluteY,
        JointKind::RevoluteZ,
        JointKind::PrismaticX,
        JointKind::PrismaticY,
        JointKind::PrismaticZ,
        JointKind::Spherical,
        JointKind::Floating,
    ];

    pub fn dof(self) -> usize {
        match self {
            JointKind::Spherical => 3,
            JointKind::Floating => 6,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            JointKind::RevoluteX => "revolute-x",
            JointKind::RevoluteY => "revolute-y",
            JointKind::RevoluteZ => "revolute-z",
            JointKind::PrismaticX => "prismatic-x",
            JointKind::PrismaticY => "prismatic-y",
            JointKind::PrismaticZ => "prismatic-z",
            JointKind::Spherical => "spherical",
            JointKind::Floating => "floating",
        }
    }

    /// Column `p` of the local motion subspace, which is also `vee` of the
    /// generator `E_p`.
    pub fn axis(self, p: usize) -> Vector6<f64> {
        let idx = match self {
            JointKind::RevoluteX => 0,
            JointKind::RevoluteY => 1,
            JointKind::RevoluteZ => 2,
            JointKind::PrismaticX => 3,
            JointKind::PrismaticY => 4,
            JointKind::PrismaticZ => 5,
            JointKind::Spherical | JointKind::Floating => p,
        };
        assert!(p < self.dof(), "axis {p} out of range for {self}");
        let mut s = Vector6::zeros();
        s[idx] = 1.0;
        s
    }

    /// Local motion subspace as a list of columns.
    pub fn motion_subspace(self) -> Vec<Vector6<f64>> {
        (0..self.dof()).map(|p| self.axis(p)).collect()
    }

    pub fn neutral_config<T: Scalar>(self) -> JointConfig<T> {
        match self {
            JointKind::Spherical => JointConfig::Rotation(Matrix3::identity()),
            JointKind::Floating => JointConfig::Pose(Matrix3::identity(), Vector3::zeros()),
            _ => JointConfig::Scalar(T::zero()),
        }
    }

    /// Uniformly random angles in `[-π, π]`, displacements in `[-1, 1]`,
    /// rotations `exp` of a vector in the ball of radius π.
    pub fn random_config(self, rng: &mut impl Rng) -> JointConfig<f64> {
        use std::f64::consts::PI;
        let rvec = |rng: &mut dyn rand::RngCore, r: f64| {
            Vector3::new(rng.gen_range(-r..r), rng.gen_range(-r..r), rng.gen_range(-r..r))
        };
        match self {
            JointKind::RevoluteX | JointKind::RevoluteY | JointKind::RevoluteZ => {
                JointConfig::Scalar(rng.gen_range(-PI..PI))
            }
            JointKind::PrismaticX | JointKind::PrismaticY | JointKind::PrismaticZ => {
                JointConfig::Scalar(rng.gen_range(-1.0..1.0))
            }
            JointKind::Spherical => JointConfig::Rotation(exp_so3(&rvec(rng, PI / 3f64.sqrt()))),
            JointKind::Floating => {
                JointConfig::Pose(exp_so3(&rvec(rng, PI / 3f64.sqrt())), rvec(rng, 1.0))
            }
        }
    }

    /// Pose of the joint's child frame relative to its parent-side frame.
    pub fn transform<T: Scalar>(self, q: &JointConfig<T>) -> Result<SpatialTransform<T>> {
        let bad = |reason: &str| Error::BadConfig {
            joint: usize::MAX,
            reason: format!("{self} {reason}"),
        };
        let (z, o) = (T::zero(), T::one());
        Ok(match (self, q) {
            (JointKind::RevoluteX | JointKind::RevoluteY | JointKind::RevoluteZ, JointConfig::Scalar(a)) => {
                let (s, c) = (a.sin(), a.cos());
                let rot = match self {
                    JointKind::RevoluteX => Matrix3::new(o, z, z, z, c, -s, z, s, c),
                    JointKind::RevoluteY => Matrix3::new(c, z, s, z, o, z, -s, z, c),
                    _ => Matrix3::new(c, -s, z, s, c, z, z, z, o),
                };
                SpatialTransform::from_parts_unchecked(rot, Vector3::zeros())
            }
            (JointKind::PrismaticX | JointKind::PrismaticY | JointKind::PrismaticZ, JointConfig::Scalar(d)) => {
                let mut p = Vector3::zeros();
                let idx = match self {
                    JointKind::PrismaticX => 0,
                    JointKind::PrismaticY => 1,
                    _ => 2,
                };
                p[idx] = *d;
                SpatialTransform::translation(p)
            }
            (JointKind::Spherical, JointConfig::Rotation(r)) => {
                check_rotation(r).map_err(|e| bad(&e))?;
                SpatialTransform::from_parts_unchecked(*r, Vector3::zeros())
            }
            (JointKind::Floating, JointConfig::Pose(r, p)) => {
                check_rotation(r).map_err(|e| bad(&e))?;
                SpatialTransform::from_parts_unchecked(*r, *p)
            }
            _ => return Err(bad("received a configuration of the wrong shape")),
        })
    }
}

fn check_rotation<T: Scalar>(r: &Matrix3<T>) -> std::result::Result<(), String> {
    let e = orthonormality_error(r);
    if e > RENORMALIZE_TOL {
        Err(format!("rotation is not orthonormal (deviation {e:.3e})"))
    } else {
        Ok(())
    }
}

impl fmt::Display for JointKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for JointKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        JointKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownJoint(s.to_string()))
    }
}

/// Element of a joint's configuration group.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum JointConfig<T: Scalar> {
    /// Angle or displacement of a 1-DoF joint.
    Scalar(T),
    /// Spherical joint rotation.
    Rotation(Matrix3<T>),
    /// Floating joint pose.
    Pose(Matrix3<T>, Vector3<T>),
}

impl<T: Scalar> JointConfig<T> {
    pub fn dof(&self) -> usize {
        match self {
            JointConfig::Scalar(_) => 1,
            JointConfig::Rotation(_) => 3,
            JointConfig::Pose(..) => 6,
        }
    }

    /// `q · exp(Σ_j t_j E_j)`.
    pub fn retract(&self, tangent: &[T]) -> Result<Self> {
        if tangent.len() != self.dof() {
            return Err(Error::InvalidArgument(format!(
                "tangent of length {} for a {}-DoF joint",
                tangent.len(),
                self.dof()
            )));
        }
        Ok(match self {
            JointConfig::Scalar(x) => JointConfig::Scalar(*x + tangent[0]),
            JointConfig::Rotation(r) => {
                JointConfig::Rotation(r * exp_so3(&Vector3::from_column_slice(tangent)))
            }
            JointConfig::Pose(r, p) => {
                let (dr, dp) = exp_se3(&Motion(Vector6::from_column_slice(tangent)));
                JointConfig::Pose(r * dr, p + r * dp)
            }
        })
    }

    /// `q · exp((Σ_j δ_j E_j) ε)`.
    pub fn integrate(&self, delta: &[f64], eps: T) -> Result<Self> {
        let tangent: Vec<T> = delta.iter().map(|&d| eps.scale(d)).collect();
        self.retract(&tangent)
    }

    pub fn real_part(&self) -> JointConfig<f64> {
        match self {
            JointConfig::Scalar(x) => JointConfig::Scalar(x.re()),
            JointConfig::Rotation(r) => JointConfig::Rotation(r.map(|x| x.re())),
            JointConfig::Pose(r, p) => JointConfig::Pose(r.map(|x| x.re()), p.map(|x| x.re())),
        }
    }
}

impl JointConfig<f64> {
    /// Embeds a real configuration into another scalar type.
    pub fn lift<T: Scalar>(&self) -> JointConfig<T> {
        match self {
            JointConfig::Scalar(x) => JointConfig::Scalar(T::from_f64(*x)),
            JointConfig::Rotation(r) => JointConfig::Rotation(r.map(T::from_f64)),
            JointConfig::Pose(r, p) => JointConfig::Pose(r.map(T::from_f64), p.map(T::from_f64)),
        }
    }

    /// Projects the rotation part back onto SO(3) if it drifted by more
    /// than [`RENORMALIZE_TOL`].
    pub fn renormalized(&self) -> Self {
        let fix = |r: &Matrix3<f64>| {
            if orthonormality_error(r) > RENORMALIZE_TOL {
                project_to_so3(r)
            } else {
                *r
            }
        };
        match self {
            JointConfig::Scalar(_) => *self,
            JointConfig::Rotation(r) => JointConfig::Rotation(fix(r)),
            JointConfig::Pose(r, p) => JointConfig::Pose(fix(r), *p),
        }
    }

    /// Tangent `δ` with `self · exp(Σ δ_j E_j) = other`.
    pub fn log_to(&self, other: &Self) -> Result<Vec<f64>> {
        Ok(match (self, other) {
            (JointConfig::Scalar(a), JointConfig::Scalar(b)) => vec![b - a],
            (JointConfig::Rotation(a), JointConfig::Rotation(b)) => {
                log_so3(&(a.transpose() * b)).as_slice().to_vec()
            }
            (JointConfig::Pose(ra, pa), JointConfig::Pose(rb, pb)) => {
                let rt = ra.transpose();
                log_se3(&(rt * rb), &(rt * (pb - pa))).0.as_slice().to_vec()
            }
            _ => {
                return Err(Error::InvalidArgument(
                    "configurations belong to different joint kinds".into(),
                ))
            }
        })
    }

    /// Worst orthonormality error of the rotation part, 0 for 1-DoF joints.
    pub fn orthonormality_error(&self) -> f64 {
        match self {
            JointConfig::Scalar(_) => 0.0,
            JointConfig::Rotation(r) | JointConfig::Pose(r, _) => orthonormality_error(r),
        }
    }
}
