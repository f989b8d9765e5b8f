#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace quint {

/// Default tolerance for algebraic identities in double precision.
inline constexpr double kEpsAlg = 1e-9;
/// Tolerance used when deduplicating group elements. Distinct elements of
/// the binary dodecahedral group are at least pi/5 apart, so this has
/// roughly five orders of magnitude of headroom.
inline constexpr double kEpsMatch = 1e-6;

/// Thrown when the rotation axis of a quaternion at a pole (+-1) is accessed.
struct PoleHasNoAxis : std::domain_error {
  PoleHasNoAxis() : std::domain_error("quaternion at a pole has no rotation axis") {}
};

/// Thrown when stereographic projection is evaluated at the north pole -1.
struct NorthPoleProjection : std::domain_error {
  NorthPoleProjection() : std::domain_error("stereographic projection undefined at the north pole") {}
};

/// Quaternion w + x i + y j + z k over a real scalar type.
///
/// The Hamilton relations i^2 = j^2 = k^2 = ijk = -1 fix the product; all
/// operations are pure and the type is a plain value.
template <typename Scalar>
struct Quaternion {
  Scalar w{0}, x{0}, y{0}, z{0};

  using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
  using Vector4 = Eigen::Matrix<Scalar, 4, 1>;

  constexpr Quaternion() = default;
  constexpr Quaternion(Scalar w_, Scalar x_, Scalar y_, Scalar z_) : w(w_), x(x_), y(y_), z(z_) {}
  Quaternion(Scalar real, const Vector3& imag) : w(real), x(imag[0]), y(imag[1]), z(imag[2]) {}

  static constexpr Quaternion identity() { return {Scalar(1), Scalar(0), Scalar(0), Scalar(0)}; }
  static constexpr Quaternion i() { return {Scalar(0), Scalar(1), Scalar(0), Scalar(0)}; }
  static constexpr Quaternion j() { return {Scalar(0), Scalar(0), Scalar(1), Scalar(0)}; }
  static constexpr Quaternion k() { return {Scalar(0), Scalar(0), Scalar(0), Scalar(1)}; }

  constexpr Scalar real() const { return w; }
  Vector3 imag() const { return Vector3(x, y, z); }
  Vector4 coeffs() const { return Vector4(w, x, y, z); }

  constexpr Quaternion conjugate() const { return {w, -x, -y, -z}; }
  constexpr Scalar norm_sq() const { return w * w + x * x + y * y + z * z; }
  Scalar norm() const { return std::sqrt(norm_sq()); }

  Quaternion normalized() const {
    const Scalar n = norm();
    return {w / n, x / n, y / n, z / n};
  }

  constexpr Quaternion operator-() const { return {-w, -x, -y, -z}; }

  friend constexpr Quaternion operator+(const Quaternion& a, const Quaternion& b) {
    return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend constexpr Quaternion operator-(const Quaternion& a, const Quaternion& b) {
    return {a.w - b.w, a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend constexpr Quaternion operator*(const Quaternion& a, Scalar s) {
    return {a.w * s, a.x * s, a.y * s, a.z * s};
  }
  friend constexpr Quaternion operator*(Scalar s, const Quaternion& a) { return a * s; }
  friend constexpr Quaternion operator/(const Quaternion& a, Scalar s) {
    return {a.w / s, a.x / s, a.y / s, a.z / s};
  }

  /// Hamilton product.
  friend constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
  }

  /// Euclidean inner product of the coefficient vectors.
  friend constexpr Scalar dot(const Quaternion& a, const Quaternion& b) {
    return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
  }
};

/// A quaternion constrained to unit norm, i.e. a point of S^3.
/// The inverse of a unit quaternion is its conjugate.
template <typename Scalar>
class UnitQuaternion {
 public:
  using Quat = Quaternion<Scalar>;

  UnitQuaternion() : q_(Quat::identity()) {}
  /// Normalizes the argument; degenerate (near-zero) input is a logic error.
  explicit UnitQuaternion(const Quat& q) : q_(q.normalized()) {}

  /// Wraps a value that is already unit norm, without renormalizing.
  static UnitQuaternion from_unit_unchecked(const Quat& q) {
    UnitQuaternion u;
    u.q_ = q;
    return u;
  }

  const Quat& q() const { return q_; }
  operator const Quat&() const { return q_; }

  Scalar real() const { return q_.w; }
  typename Quat::Vector3 imag() const { return q_.imag(); }

  UnitQuaternion conjugate() const { return from_unit_unchecked(q_.conjugate()); }
  UnitQuaternion inverse() const { return conjugate(); }
  UnitQuaternion operator-() const { return from_unit_unchecked(-q_); }

  friend UnitQuaternion operator*(const UnitQuaternion& a, const UnitQuaternion& b) {
    return from_unit_unchecked(a.q_ * b.q_);
  }

 private:
  Quat q_;
};

/// A purely imaginary unit quaternion: a point of the equatorial sphere.
/// Satisfies u^2 = -1 under the quaternion product.
template <typename Scalar>
class ImaginaryUnit {
 public:
  using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

  ImaginaryUnit() : v_(Scalar(1), Scalar(0), Scalar(0)) {}
  explicit ImaginaryUnit(const Vector3& v) : v_(v.normalized()) {}
  ImaginaryUnit(Scalar x, Scalar y, Scalar z) : ImaginaryUnit(Vector3(x, y, z)) {}

  static ImaginaryUnit from_unit_unchecked(const Vector3& v) {
    ImaginaryUnit u;
    u.v_ = v;
    return u;
  }

  const Vector3& vec() const { return v_; }
  Quaternion<Scalar> q() const { return {Scalar(0), v_[0], v_[1], v_[2]}; }

 private:
  Vector3 v_;
};

/// Axis-angle decomposition of a unit quaternion, q = e^{u alpha}.
/// At the poles alpha is 0 or pi and the axis is undefined.
template <typename Scalar>
class AxisAngle {
 public:
  AxisAngle(const ImaginaryUnit<Scalar>& axis, Scalar alpha)
      : axis_(axis), alpha_(alpha), has_axis_(true) {}
  static AxisAngle pole(Scalar alpha) {
    AxisAngle a;
    a.alpha_ = alpha;
    return a;
  }

  Scalar alpha() const { return alpha_; }
  bool has_axis() const { return has_axis_; }
  const ImaginaryUnit<Scalar>& axis() const {
    if (!has_axis_) throw PoleHasNoAxis();
    return axis_;
  }

 private:
  AxisAngle() = default;
  ImaginaryUnit<Scalar> axis_;
  Scalar alpha_{0};
  bool has_axis_{false};
};

/// e^{u alpha} = cos(alpha) + u sin(alpha); a one-parameter subgroup of S^3.
template <typename Scalar>
UnitQuaternion<Scalar> exp_imag(const ImaginaryUnit<Scalar>& u, Scalar alpha) {
  const Scalar c = std::cos(alpha), s = std::sin(alpha);
  return UnitQuaternion<Scalar>::from_unit_unchecked(
      {c, s * u.vec()[0], s * u.vec()[1], s * u.vec()[2]});
}

/// Inverse of exp_imag on S^3 minus the poles. At the poles the angle is
/// still reported (0 or pi) but the axis is flagged undefined.
template <typename Scalar>
AxisAngle<Scalar> log_unit(const UnitQuaternion<Scalar>& q, Scalar eps = Scalar(kEpsAlg)) {
  const Scalar re = std::clamp(q.real(), Scalar(-1), Scalar(1));
  if (std::abs(re) >= Scalar(1) - eps) {
    return AxisAngle<Scalar>::pole(re > 0 ? Scalar(0) : Scalar(M_PI));
  }
  const Scalar alpha = std::acos(re);
  return {ImaginaryUnit<Scalar>(q.imag()), alpha};
}

/// Spherical distance arccos(<p, q>), symmetric and in [0, pi].
template <typename Scalar>
Scalar dist_s3(const UnitQuaternion<Scalar>& p, const UnitQuaternion<Scalar>& q) {
  return std::acos(std::clamp(dot(p.q(), q.q()), Scalar(-1), Scalar(1)));
}

/// Stereographic projection from the north pole -1: S^3 minus {-1} -> I.
/// Sends the south pole 1 to the origin and fixes the equatorial sphere
/// pointwise. Equals sin(alpha)/(1 + cos(alpha)) * u for q = e^{u alpha}.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> stereographic(const UnitQuaternion<Scalar>& q,
                                          Scalar eps = Scalar(kEpsAlg)) {
  const Scalar d = Scalar(1) + q.real();
  if (d < eps) throw NorthPoleProjection();
  return q.imag() / d;
}

/// Radial derivative of the projection, d rho / d alpha = 1 / (1 + cos alpha).
template <typename Scalar>
Scalar stereo_derivative(Scalar alpha) {
  if (!(alpha >= Scalar(0) && alpha < Scalar(M_PI)))
    throw std::domain_error("stereo_derivative requires alpha in [0, pi)");
  return Scalar(1) / (Scalar(1) + std::cos(alpha));
}

/// Twisted action phi_q(v) = q v q^{-1}. Fixes the reals pointwise and
/// restricts to a rotation of the imaginary 3-space.
template <typename Scalar>
Quaternion<Scalar> twisted_action(const UnitQuaternion<Scalar>& q, const Quaternion<Scalar>& v) {
  return q.q() * v * q.q().conjugate();
}

/// The rotation psi_q of the imaginary 3-space, as a matrix in the basis
/// {i, j, k}. This realizes the double cover S^3 -> SO(3).
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> rotation_matrix(const UnitQuaternion<Scalar>& q) {
  Eigen::Matrix<Scalar, 3, 3> m;
  m.col(0) = twisted_action(q, Quaternion<Scalar>::i()).imag();
  m.col(1) = twisted_action(q, Quaternion<Scalar>::j()).imag();
  m.col(2) = twisted_action(q, Quaternion<Scalar>::k()).imag();
  return m;
}

using Quatd = Quaternion<double>;
using UnitQuatd = UnitQuaternion<double>;
using ImaginaryUnitd = ImaginaryUnit<double>;
using AxisAngled = AxisAngle<double>;

}  // namespace quint
