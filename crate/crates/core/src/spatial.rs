//! Spatial (6-D) vector algebra.
//!
//! Components are ordered angular first, linear second. Motion and force
//! vectors are distinct types so they cannot be mixed by accident; the raw
//! `Vector6` is reachable through the public field when a hot loop needs it.

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use nalgebra::{Matrix3, Matrix4, Matrix6, Vector3, Vector6};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Orthonormality tolerance for rotation blocks.
pub const ORTHO_TOL: f64 = 1e-12;

macro_rules! spatial_vector {
    ($name:ident, $doc:literal) => {
        #[doc = $doc]
        #[derive(Clone, Copy, Debug, PartialEq)]
        pub struct $name<T: Scalar>(pub Vector6<T>);

        impl<T: Scalar> $name<T> {
            pub fn new(angular: Vector3<T>, linear: Vector3<T>) -> Self {
                Self(Vector6::new(
                    angular[0], angular[1], angular[2], linear[0], linear[1], linear[2],
                ))
            }

            pub fn zero() -> Self {
                Self(Vector6::zeros())
            }

            pub fn from_slice(x: &[T; 6]) -> Self {
                Self(Vector6::from_column_slice(x))
            }

            #[inline]
            pub fn angular(&self) -> Vector3<T> {
                self.0.fixed_rows::<3>(0).into_owned()
            }

            #[inline]
            pub fn linear(&self) -> Vector3<T> {
                self.0.fixed_rows::<3>(3).into_owned()
            }
        }

        impl<T: Scalar> Add for $name<T> {
            type Output = Self;
            fn add(self, o: Self) -> Self {
                Self(self.0 + o.0)
            }
        }

        impl<T: Scalar> Sub for $name<T> {
            type Output = Self;
            fn sub(self, o: Self) -> Self {
                Self(self.0 - o.0)
            }
        }

        impl<T: Scalar> Neg for $name<T> {
            type Output = Self;
            fn neg(self) -> Self {
                Self(-self.0)
            }
        }

        impl<T: Scalar> AddAssign for $name<T> {
            fn add_assign(&mut self, o: Self) {
                self.0 += o.0;
            }
        }

        impl<T: Scalar> SubAssign for $name<T> {
            fn sub_assign(&mut self, o: Self) {
                self.0 -= o.0;
            }
        }

        impl<T: Scalar> Mul<T> for $name<T> {
            type Output = Self;
            fn mul(self, s: T) -> Self {
                Self(self.0 * s)
            }
        }
    };
}

spatial_vector!(Motion, "Spatial motion vector (velocity, acceleration, joint axis).");
spatial_vector!(Force, "Spatial force vector (wrench, momentum).");

impl<T: Scalar> Motion<T> {
    /// `self × u`, the motion cross product.
    #[inline]
    pub fn cross(&self, u: &Motion<T>) -> Motion<T> {
        Motion(cross_motion_vec(&self.0, &u.0))
    }

    /// `self ×* f`, the force cross product.
    #[inline]
    pub fn cross_force(&self, f: &Force<T>) -> Force<T> {
        Force(cross_force_vec(&self.0, &f.0))
    }

    /// Power `fᵀv`.
    #[inline]
    pub fn dot(&self, f: &Force<T>) -> T {
        self.0.dot(&f.0)
    }
}

#[inline]
pub fn skew<T: Scalar>(w: &Vector3<T>) -> Matrix3<T> {
    let z = T::zero();
    Matrix3::new(z, -w[2], w[1], w[2], z, -w[0], -w[1], w[0], z)
}

#[inline]
fn split<T: Scalar>(v: &Vector6<T>) -> (Vector3<T>, Vector3<T>) {
    (
        Vector3::new(v[0], v[1], v[2]),
        Vector3::new(v[3], v[4], v[5]),
    )
}

#[inline]
fn join<T: Scalar>(a: Vector3<T>, b: Vector3<T>) -> Vector6<T> {
    Vector6::new(a[0], a[1], a[2], b[0], b[1], b[2])
}

#[inline]
fn blocks<T: Scalar>(
    tl: &Matrix3<T>,
    tr: &Matrix3<T>,
    bl: &Matrix3<T>,
    br: &Matrix3<T>,
) -> Matrix6<T> {
    let mut m = Matrix6::zeros();
    m.fixed_view_mut::<3, 3>(0, 0).copy_from(tl);
    m.fixed_view_mut::<3, 3>(0, 3).copy_from(tr);
    m.fixed_view_mut::<3, 3>(3, 0).copy_from(bl);
    m.fixed_view_mut::<3, 3>(3, 3).copy_from(br);
    m
}

/// `v × u` on raw vectors.
#[inline]
pub fn cross_motion_vec<T: Scalar>(v: &Vector6<T>, u: &Vector6<T>) -> Vector6<T> {
    let (w, vl) = split(v);
    let (uw, ul) = split(u);
    join(w.cross(&uw), vl.cross(&uw) + w.cross(&ul))
}

/// `v ×* f` on raw vectors.
#[inline]
pub fn cross_force_vec<T: Scalar>(v: &Vector6<T>, f: &Vector6<T>) -> Vector6<T> {
    let (w, vl) = split(v);
    let (n, fl) = split(f);
    join(w.cross(&n) + vl.cross(&fl), w.cross(&fl))
}

/// `(v×)`: `[[ω×, 0], [v̄×, ω×]]`.
pub fn cross_motion<T: Scalar>(v: &Motion<T>) -> Matrix6<T> {
    cross_motion_mat(&v.0)
}

/// `(v×*)`: `[[ω×, v̄×], [0, ω×]]`, equal to `-(v×)ᵀ`.
pub fn cross_force<T: Scalar>(v: &Motion<T>) -> Matrix6<T> {
    cross_force_mat(&v.0)
}

/// `(f ×̄*)`, defined by `(f ×̄*) v = (v ×*) f`.
pub fn crossbar_star<T: Scalar>(f: &Force<T>) -> Matrix6<T> {
    crossbar_star_mat(&f.0)
}

#[inline]
pub fn cross_motion_mat<T: Scalar>(v: &Vector6<T>) -> Matrix6<T> {
    let (w, vl) = split(v);
    let sw = skew(&w);
    blocks(&sw, &Matrix3::zeros(), &skew(&vl), &sw)
}

#[inline]
pub fn cross_force_mat<T: Scalar>(v: &Vector6<T>) -> Matrix6<T> {
    let (w, vl) = split(v);
    let sw = skew(&w);
    blocks(&sw, &skew(&vl), &Matrix3::zeros(), &sw)
}

/// `[[-n×, -f̄×], [-f̄×, 0]]` for `f = (n, f̄)`. Antisymmetric.
#[inline]
pub fn crossbar_star_mat<T: Scalar>(f: &Vector6<T>) -> Matrix6<T> {
    let (n, fl) = split(f);
    let sf = -skew(&fl);
    blocks(&(-skew(&n)), &sf, &sf, &Matrix3::zeros())
}

/// Body-Coriolis matrix `B(I, v) = ½[(v×*)I − I(v×) + (Iv)×̄*]`.
pub fn body_coriolis<T: Scalar>(inertia: &SpatialInertia<T>, v: &Motion<T>) -> Matrix6<T> {
    body_coriolis_mat(&inertia.to_matrix(), &v.0)
}

/// [`body_coriolis`] for an inertia already in 6×6 form.
pub fn body_coriolis_mat<T: Scalar>(inertia: &Matrix6<T>, v: &Vector6<T>) -> Matrix6<T> {
    body_coriolis_doubled(inertia, v) * T::from_f64(0.5)
}

/// `2 B(I, v) = (v×*)I − I(v×) + (Iv)×̄*`.
///
/// The second-order recursions work exclusively with this unhalved form,
/// both for single bodies and for the composite `Bᶜ` accumulators.
#[inline]
pub fn body_coriolis_doubled<T: Scalar>(inertia: &Matrix6<T>, v: &Vector6<T>) -> Matrix6<T> {
    cross_force_mat(v) * inertia - inertia * cross_motion_mat(v)
        + crossbar_star_mat(&(inertia * v))
}

/// `hat(v) = [[ω×, v̄], [0, 0]]`.
pub fn hat<T: Scalar>(v: &Motion<T>) -> Matrix4<T> {
    let (w, vl) = split(&v.0);
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<3, 3>(0, 0).copy_from(&skew(&w));
    m.fixed_view_mut::<3, 1>(0, 3).copy_from(&vl);
    m
}

/// Inverse of [`hat`]. Rejects matrices whose rotational block is not
/// skew-symmetric or whose bottom row is nonzero (tolerance 1e-10).
pub fn vee<T: Scalar>(m: &Matrix4<T>) -> Result<Motion<T>> {
    let mut dev: f64 = 0.0;
    for i in 0..3 {
        dev = dev.max(m[(i, i)].re().abs());
        for j in 0..3 {
            dev = dev.max((m[(i, j)] + m[(j, i)]).re().abs());
        }
    }
    for j in 0..4 {
        dev = dev.max(m[(3, j)].re().abs());
    }
    if dev > 1e-10 {
        return Err(Error::NotSe3(dev));
    }
    let w = Vector3::new(m[(2, 1)], m[(0, 2)], m[(1, 0)]);
    let vl = Vector3::new(m[(0, 3)], m[(1, 3)], m[(2, 3)]);
    Ok(Motion::new(w, vl))
}

/// Largest entry of `RᵀR − 1` together with `|det R − 1|`.
pub fn orthonormality_error<T: Scalar>(r: &Matrix3<T>) -> f64 {
    let rr = r.map(|x| x.re());
    let e = (rr.transpose() * rr - Matrix3::identity()).abs().max();
    e.max((rr.determinant() - 1.0).abs())
}

/// Plücker transform built from a pose `(R, p)` of frame `k` in frame `0`.
///
/// As a 6×6 motion transform this is `[[R, 0], [p×R, R]]`, mapping
/// coordinates expressed in `k` to coordinates expressed in `0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpatialTransform<T: Scalar> {
    pub rot: Matrix3<T>,
    pub trans: Vector3<T>,
}

impl<T: Scalar> SpatialTransform<T> {
    pub fn identity() -> Self {
        Self {
            rot: Matrix3::identity(),
            trans: Vector3::zeros(),
        }
    }

    /// Validated constructor.
    pub fn new(rot: Matrix3<T>, trans: Vector3<T>) -> Result<Self> {
        let e = orthonormality_error(&rot);
        if e > ORTHO_TOL {
            return Err(Error::MalformedRotation(e));
        }
        Ok(Self { rot, trans })
    }

    pub fn from_parts_unchecked(rot: Matrix3<T>, trans: Vector3<T>) -> Self {
        Self { rot, trans }
    }

    pub fn translation(p: Vector3<T>) -> Self {
        Self {
            rot: Matrix3::identity(),
            trans: p,
        }
    }

    /// `self * other`: first `other`, then `self`.
    #[inline]
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            rot: self.rot * other.rot,
            trans: self.trans + self.rot * other.trans,
        }
    }

    pub fn inverse(&self) -> Self {
        let rt = self.rot.transpose();
        Self {
            rot: rt,
            trans: -(rt * self.trans),
        }
    }

    #[inline]
    pub fn apply_motion(&self, m: &Motion<T>) -> Motion<T> {
        Motion(self.apply_motion_vec(&m.0))
    }

    #[inline]
    pub fn apply_motion_vec(&self, m: &Vector6<T>) -> Vector6<T> {
        let (w, v) = split(m);
        let rw = self.rot * w;
        join(rw, self.rot * v + self.trans.cross(&rw))
    }

    /// Force rule, `X⁻ᵀ f`.
    #[inline]
    pub fn apply_force(&self, f: &Force<T>) -> Force<T> {
        let (n, fl) = split(&f.0);
        let rf = self.rot * fl;
        Force(join(self.rot * n + self.trans.cross(&rf), rf))
    }

    /// Congruence `X⁻ᵀ I X⁻¹`, evaluated in compact form.
    pub fn apply_inertia(&self, i: &SpatialInertia<T>) -> SpatialInertia<T> {
        let rh = self.rot * i.h;
        let px = skew(&self.trans);
        let rhx = skew(&rh);
        let inertia_o = self.rot * i.inertia_o * self.rot.transpose()
            - rhx * px
            - px * rhx
            - px * px * i.mass;
        SpatialInertia {
            mass: i.mass,
            h: rh + self.trans * i.mass,
            inertia_o,
        }
    }

    /// 6×6 motion transform.
    pub fn to_matrix(&self) -> Matrix6<T> {
        blocks(
            &self.rot,
            &Matrix3::zeros(),
            &(skew(&self.trans) * self.rot),
            &self.rot,
        )
    }

    /// 6×6 force transform `X⁻ᵀ`.
    pub fn to_force_matrix(&self) -> Matrix6<T> {
        blocks(
            &self.rot,
            &(skew(&self.trans) * self.rot),
            &Matrix3::zeros(),
            &self.rot,
        )
    }

    /// Homogeneous 4×4 pose.
    pub fn to_homogeneous(&self) -> Matrix4<T> {
        let mut m = Matrix4::identity();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(&self.rot);
        m.fixed_view_mut::<3, 1>(0, 3).copy_from(&self.trans);
        m
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> SpatialTransform<U> {
        SpatialTransform {
            rot: self.rot.map(&f),
            trans: self.trans.map(&f),
        }
    }
}

/// Rigid-body inertia in compact form: mass, first moment `h = m c` and the
/// rotational inertia about the frame origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpatialInertia<T: Scalar> {
    pub mass: T,
    pub h: Vector3<T>,
    pub inertia_o: Matrix3<T>,
}

impl SpatialInertia<f64> {
    /// Builds the inertia from mass, centre of mass and the rotational
    /// inertia about the centre of mass.
    pub fn from_com(mass: f64, com: Vector3<f64>, inertia_com: Matrix3<f64>) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidArgument(format!("mass must be positive, got {mass}")));
        }
        let asym = (inertia_com - inertia_com.transpose()).abs().max();
        if asym > 1e-12 * inertia_com.abs().max().max(1.0)
            || inertia_com.cholesky().is_none()
        {
            return Err(Error::InvalidArgument(
                "rotational inertia is not symmetric positive-definite".into(),
            ));
        }
        Ok(Self::from_com_unchecked(mass, com, inertia_com))
    }

    /// Point mass at `com`.
    pub fn point_mass(mass: f64, com: Vector3<f64>) -> Self {
        Self::from_com_unchecked(mass, com, Matrix3::zeros())
    }
}

impl<T: Scalar> SpatialInertia<T> {
    pub fn zero() -> Self {
        Self {
            mass: T::zero(),
            h: Vector3::zeros(),
            inertia_o: Matrix3::zeros(),
        }
    }

    pub fn from_com_unchecked(mass: T, com: Vector3<T>, inertia_com: Matrix3<T>) -> Self {
        let cx = skew(&com);
        Self {
            mass,
            h: com * mass,
            inertia_o: inertia_com - cx * cx * mass,
        }
    }

    pub fn com(&self) -> Vector3<T> {
        self.h / self.mass
    }

    /// `[[I_o, h×], [(h×)ᵀ, m 1]]`.
    pub fn to_matrix(&self) -> Matrix6<T> {
        let hx = skew(&self.h);
        blocks(
            &self.inertia_o,
            &hx,
            &hx.transpose(),
            &(Matrix3::identity() * self.mass),
        )
    }

    /// Momentum `I v`.
    #[inline]
    pub fn apply(&self, v: &Motion<T>) -> Force<T> {
        let (w, vl) = split(&v.0);
        Force(join(
            self.inertia_o * w + self.h.cross(&vl),
            vl * self.mass - self.h.cross(&w),
        ))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> SpatialInertia<U> {
        SpatialInertia {
            mass: f(self.mass),
            h: self.h.map(&f),
            inertia_o: self.inertia_o.map(&f),
        }
    }
}

impl<T: Scalar> Add for SpatialInertia<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            mass: self.mass + o.mass,
            h: self.h + o.h,
            inertia_o: self.inertia_o + o.inertia_o,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rvec(rng: &mut ChaCha8Rng) -> Vector6<f64> {
        Vector6::from_fn(|_, _| rng.gen_range(-1.0..1.0))
    }

    fn rinertia(rng: &mut ChaCha8Rng) -> SpatialInertia<f64> {
        let a = Matrix3::from_fn(|_, _| rng.gen_range(-1.0..1.0));
        let ic = a * a.transpose() + Matrix3::identity() * 0.1;
        let c = Vector3::from_fn(|_, _| rng.gen_range(-1.0..1.0));
        SpatialInertia::from_com(rng.gen_range(0.5..2.0), c, ic).unwrap()
    }

    fn rtransform(rng: &mut ChaCha8Rng) -> SpatialTransform<f64> {
        let axis = Vector3::from_fn(|_, _| rng.gen_range(-1.0..1.0));
        let rot = *nalgebra::Rotation3::new(axis).matrix();
        SpatialTransform::new(rot, Vector3::from_fn(|_, _| rng.gen_range(-1.0..1.0))).unwrap()
    }

    #[test]
    fn zero_inputs_give_zero_operators() {
        let z = Motion::<f64>::zero();
        assert_eq!(cross_motion(&z), Matrix6::zeros());
        assert_eq!(cross_force(&z), Matrix6::zeros());
        assert_eq!(crossbar_star(&Force::<f64>::zero()), Matrix6::zeros());
        assert_eq!(hat(&z), Matrix4::zeros());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(body_coriolis(&rinertia(&mut rng), &z), Matrix6::zeros());
    }

    #[test]
    fn cross_motion_block_structure() {
        let v = Motion::new(Vector3::new(1.0, 0.0, 0.0), Vector3::zeros());
        let m = cross_motion(&v);
        let s = skew(&Vector3::new(1.0, 0.0, 0.0));
        assert_eq!(m.fixed_view::<3, 3>(0, 0), s);
        assert_eq!(m.fixed_view::<3, 3>(3, 3), s);
        assert_eq!(m.fixed_view::<3, 3>(3, 0), Matrix3::zeros());
        assert_eq!(m.fixed_view::<3, 3>(0, 3), Matrix3::zeros());
    }

    #[test]
    fn cross_identities_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let (u, v, f) = (Motion(rvec(&mut rng)), Motion(rvec(&mut rng)), Force(rvec(&mut rng)));
            assert!((cross_motion(&v) * u.0 + cross_motion(&u) * v.0).amax() < 1e-15);
            assert!((cross_force(&v) + cross_motion(&v).transpose()).amax() < 1e-14);
            assert!((crossbar_star(&f) * v.0 - cross_force(&v) * f.0).amax() < 1e-15);
            assert!((cross_motion(&v) * u.0 - v.cross(&u).0).amax() < 1e-15);
            assert!((cross_force(&v) * f.0 - v.cross_force(&f).0).amax() < 1e-15);
            let cb = crossbar_star(&f);
            assert!((cb + cb.transpose()).amax() == 0.0);
            // fᵀ((v×)w) is antisymmetric in v, w.
            let s1 = f.0.dot(&v.cross(&u).0);
            let s2 = f.0.dot(&u.cross(&v).0);
            assert!((s1 + s2).abs() < 1e-15);
        }
    }

    #[test]
    fn crossbar_star_columns_from_definition() {
        let f = Force(Vector6::new(1.0, 0.0, 0.0, 0.0, 0.0, 0.0));
        let m = crossbar_star(&f);
        for c in 0..6 {
            let mut e = Vector6::zeros();
            e[c] = 1.0;
            let col = cross_force_vec(&e, &f.0);
            assert_eq!(m.column(c), col);
        }
    }

    #[test]
    fn body_coriolis_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let i = rinertia(&mut rng);
            let im = i.to_matrix();
            let (u, v, w) = (rvec(&mut rng), rvec(&mut rng), rvec(&mut rng));
            let b = |x: &Vector6<f64>| body_coriolis_mat(&im, x);
            let scale = im.amax() * 4.0;
            // M22
            assert!((b(&v).transpose() * w + b(&w).transpose() * v).amax() < 1e-12 * scale);
            // M23
            let rhs = b(&w) * v - im * cross_motion_vec(&v, &w);
            assert!((b(&v) * w - rhs).amax() < 1e-12 * scale);
            // M24
            assert!((u.dot(&(b(&v) * w)) + v.dot(&(b(&u) * w))).abs() < 1e-12 * scale);
        }
    }

    #[test]
    fn compact_inertia_matches_matrix_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let i = rinertia(&mut rng);
            let v = Motion(rvec(&mut rng));
            assert!((i.apply(&v).0 - i.to_matrix() * v.0).amax() < 1e-14);
            let m = i.to_matrix();
            assert_eq!(m, m.transpose());
        }
    }

    #[test]
    fn transforms_are_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..500 {
            let x = rtransform(&mut rng);
            let (v, f) = (Motion(rvec(&mut rng)), Force(rvec(&mut rng)));
            let xm = x.to_matrix();
            let xf = x.to_force_matrix();
            assert!((x.apply_motion(&v).0 - xm * v.0).amax() < 1e-14);
            assert!((x.apply_force(&f).0 - xf * f.0).amax() < 1e-14);
            assert!((xf - xm.try_inverse().unwrap().transpose()).amax() < 1e-13);
            // Round trip.
            let back = x.inverse().apply_motion(&x.apply_motion(&v));
            assert!((back.0 - v.0).amax() < 1e-13);
            // Power invariance.
            let p0 = v.dot(&f);
            let p1 = x.apply_motion(&v).dot(&x.apply_force(&f));
            assert!((p0 - p1).abs() < 1e-12 * p0.abs().max(1.0));
            // Compact inertia transform against the 6×6 congruence.
            let i = rinertia(&mut rng);
            let congruent = xf * i.to_matrix() * xf.transpose();
            assert!((x.apply_inertia(&i).to_matrix() - congruent).amax() < 1e-12 * congruent.amax());
            // Composition.
            let y = rtransform(&mut rng);
            assert!((x.compose(&y).to_matrix() - xm * y.to_matrix()).amax() < 1e-13);
        }
    }

    #[test]
    fn identity_transform_is_noop() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = SpatialTransform::<f64>::identity();
        let v = Motion(rvec(&mut rng));
        assert_eq!(x.apply_motion(&v), v);
        let i = rinertia(&mut rng);
        assert!((x.apply_inertia(&i).to_matrix() - i.to_matrix()).amax() < 1e-15);
    }

    #[test]
    fn malformed_rotation_rejected() {
        let r = Matrix3::new(1.0, 0.1, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0);
        assert!(matches!(
            SpatialTransform::new(r, Vector3::zeros()),
            Err(Error::MalformedRotation(_))
        ));
    }

    #[test]
    fn hat_vee_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let v = Motion(rvec(&mut rng));
            assert_eq!(vee(&hat(&v)).unwrap(), v);
        }
        let e4 = Motion(Vector6::new(0.0, 0.0, 0.0, 1.0, 0.0, 0.0));
        let mut expected = Matrix4::zeros();
        expected[(0, 3)] = 1.0;
        assert_eq!(hat(&e4), expected);
        let mut bad = hat(&e4);
        bad[(3, 0)] = 0.5;
        assert!(matches!(vee(&bad), Err(Error::NotSe3(_))));
        let mut bad = Matrix4::zeros();
        bad[(0, 1)] = 1.0;
        assert!(vee(&bad).is_err());
    }

    #[test]
    fn non_spd_inertia_rejected() {
        let r = SpatialInertia::from_com(1.0, Vector3::zeros(), -Matrix3::identity());
        assert!(r.is_err());
        assert!(SpatialInertia::from_com(0.0, Vector3::zeros(), Matrix3::identity()).is_err());
    }
}
