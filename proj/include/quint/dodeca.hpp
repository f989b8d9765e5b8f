#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "quint/quaternion.hpp"

namespace quint {

/// Thrown when breadth-first closure fails to stabilize at 120 elements,
/// which signals a tolerance misconfiguration rather than bad luck.
struct GroupClosureFailure : std::runtime_error {
  explicit GroupClosureFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Trigonometry of the pentagon angles used throughout the construction.
struct TrigConstants {
  double cos_pi5, sin_pi5, cot_pi5;
  double cos_2pi5, sin_2pi5, cot_2pi5;

  static TrigConstants compute();
};

/// The positioned dodecahedral tiling frame: one vertex at (i+j+k)/sqrt(3),
/// the nearest face centers f = x i + y j, f' = x j + y k, f'' = y i + x k,
/// where x + y = cot(pi/5), x^2 + y^2 = 1 and x > y.
struct BaseFrame {
  ImaginaryUnitd v;
  ImaginaryUnitd f, f_prime, f_dprime;
  double x, y;
};

BaseFrame base_frame();

/// Lifts of the vertex rotation about v (order 6) and of the face rotations
/// about f, f', f'' (order 10) into S^3.
struct Generators {
  UnitQuatd p;
  UnitQuatd q;
  UnitQuatd q_prime;
  UnitQuatd q_dprime;
};

Generators generators();

/// The binary dodecahedral group: 120 unit quaternions with stable integer
/// ids. Id 0 is the identity; ids are assigned in breadth-first discovery
/// order from {p, q} with ties broken lexicographically on coordinates
/// rounded to six decimals, so they are reproducible across runs.
class BinaryDodecGroup {
 public:
  static constexpr int kOrder = 120;

  static BinaryDodecGroup generate(const Generators& gen, double eps_match = kEpsMatch);

  int size() const { return static_cast<int>(elements_.size()); }
  const UnitQuatd& element(int id) const { return elements_[static_cast<size_t>(id)]; }
  const std::vector<UnitQuatd>& elements() const { return elements_; }

  int mul(int a, int b) const { return mul_[static_cast<size_t>(a) * kOrder + b]; }
  int inv(int a) const { return inv_[static_cast<size_t>(a)]; }
  /// Id of -g; the group contains -1, so negation is total.
  int neg(int a) const { return neg_[static_cast<size_t>(a)]; }
  /// Id of the quaternion conjugate of g (equals inv for unit quaternions).
  int conj(int a) const { return inv(a); }

  int p_id() const { return p_id_; }
  int q_id() const { return q_id_; }
  int q_prime_id() const { return q_prime_id_; }
  int minus_one_id() const { return minus_one_id_; }

  /// Id of the element within eps of q, or -1 if none.
  int find(const Quatd& q, double eps = kEpsMatch) const;

  /// Census of real parts over the nine nominal values
  /// cos(0), cos(pi/5), ..., cos(pi). Entry k counts elements whose real
  /// part is within eps of the k-th nominal cosine.
  std::array<int, 9> re_census(double eps = kEpsAlg) const;

 private:
  BinaryDodecGroup() = default;

  std::vector<UnitQuatd> elements_;
  std::vector<std::uint8_t> mul_;
  std::array<std::uint8_t, kOrder> inv_{};
  std::array<std::uint8_t, kOrder> neg_{};
  int p_id_ = -1, q_id_ = -1, q_prime_id_ = -1, minus_one_id_ = -1;
};

/// One verification entry of the dodecahedral trigonometry report.
struct TrigCheck {
  std::string name;
  double measured;
  double expected;
  double tolerance;
  bool pass;
};

/// Checks the trig identities, the center-to-vertex distances of the
/// pentagon, and the flag-triangle area pi/30 against closed forms.
std::vector<TrigCheck> verify_dodeca_trig(double tol = 1e-12);

/// Nine nominal layer angles: 0, pi/5, pi/3, 2pi/5, pi/2, 3pi/5, 2pi/3,
/// 4pi/5, pi.
const std::array<double, 9>& nominal_layer_angles();

}  // namespace quint
