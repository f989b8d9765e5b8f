#include "quint/dodeca.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace quint {

namespace {

constexpr double kPi = std::numbers::pi;

std::array<std::int64_t, 4> round6(const Quatd& q) {
  const double s = 1e6;
  return {std::llround(q.w * s), std::llround(q.x * s), std::llround(q.y * s),
          std::llround(q.z * s)};
}

}  // namespace

TrigConstants TrigConstants::compute() {
  TrigConstants t;
  t.cos_pi5 = std::cos(kPi / 5);
  t.sin_pi5 = std::sin(kPi / 5);
  t.cot_pi5 = t.cos_pi5 / t.sin_pi5;
  t.cos_2pi5 = std::cos(2 * kPi / 5);
  t.sin_2pi5 = std::sin(2 * kPi / 5);
  t.cot_2pi5 = t.cos_2pi5 / t.sin_2pi5;
  return t;
}

BaseFrame base_frame() {
  const TrigConstants t = TrigConstants::compute();
  BaseFrame frame;
  const double s3 = 1.0 / std::sqrt(3.0);
  frame.v = ImaginaryUnitd::from_unit_unchecked({s3, s3, s3});
  // {x, y} = (cot(pi/5) +- cot(2pi/5)) / 2, taking x > y.
  frame.x = 0.5 * (t.cot_pi5 + t.cot_2pi5);
  frame.y = 0.5 * (t.cot_pi5 - t.cot_2pi5);
  frame.f = ImaginaryUnitd::from_unit_unchecked({frame.x, frame.y, 0.0});
  frame.f_prime = ImaginaryUnitd::from_unit_unchecked({0.0, frame.x, frame.y});
  frame.f_dprime = ImaginaryUnitd::from_unit_unchecked({frame.y, 0.0, frame.x});
  return frame;
}

Generators generators() {
  const BaseFrame frame = base_frame();
  Generators g;
  g.p = exp_imag(frame.v, kPi / 3);
  g.q = exp_imag(frame.f, kPi / 5);
  g.q_prime = exp_imag(frame.f_prime, kPi / 5);
  g.q_dprime = exp_imag(frame.f_dprime, kPi / 5);
  return g;
}

BinaryDodecGroup BinaryDodecGroup::generate(const Generators& gen, double eps_match) {
  BinaryDodecGroup group;
  auto& elems = group.elements_;
  elems.push_back(UnitQuatd());  // id 0 is the identity

  auto find_in = [&](const Quatd& q) -> int {
    for (size_t i = 0; i < elems.size(); ++i) {
      if (dot(elems[i].q(), q) > std::cos(eps_match)) return static_cast<int>(i);
    }
    return -1;
  };

  const std::array<UnitQuatd, 2> gens = {gen.p, gen.q};
  std::vector<int> frontier = {0};
  int rounds = 0;
  while (!frontier.empty()) {
    if (++rounds > 64)
      throw GroupClosureFailure("closure did not stabilize within 64 rounds");
    std::vector<UnitQuatd> fresh;
    for (int id : frontier) {
      for (const auto& g : gens) {
        const UnitQuatd prod = elems[static_cast<size_t>(id)] * g;
        if (find_in(prod.q()) >= 0) continue;
        bool dup = false;
        for (const auto& f : fresh) {
          if (dot(f.q(), prod.q()) > std::cos(eps_match)) {
            dup = true;
            break;
          }
        }
        if (!dup) fresh.push_back(prod);
      }
    }
    // Deterministic ids: new elements of a round are appended in
    // lexicographic order of their rounded coordinates.
    std::sort(fresh.begin(), fresh.end(), [](const UnitQuatd& a, const UnitQuatd& b) {
      return round6(a.q()) < round6(b.q());
    });
    frontier.clear();
    for (const auto& f : fresh) {
      frontier.push_back(static_cast<int>(elems.size()));
      elems.push_back(f);
      if (elems.size() > kOrder)
        throw GroupClosureFailure("closure exceeded 120 distinct elements");
    }
  }
  if (elems.size() != kOrder)
    throw GroupClosureFailure("closure stabilized at " + std::to_string(elems.size()) +
                              " elements, expected 120");

  group.mul_.assign(static_cast<size_t>(kOrder) * kOrder, 0);
  for (int a = 0; a < kOrder; ++a) {
    for (int b = 0; b < kOrder; ++b) {
      const Quatd prod = elems[static_cast<size_t>(a)].q() * elems[static_cast<size_t>(b)].q();
      const int id = find_in(prod);
      if (id < 0) throw GroupClosureFailure("product escaped the closed set");
      group.mul_[static_cast<size_t>(a) * kOrder + b] = static_cast<std::uint8_t>(id);
    }
  }
  for (int a = 0; a < kOrder; ++a) {
    const int inv = find_in(elems[static_cast<size_t>(a)].q().conjugate());
    const int neg = find_in(-elems[static_cast<size_t>(a)].q());
    if (inv < 0 || neg < 0) throw GroupClosureFailure("inverse or antipode missing");
    group.inv_[static_cast<size_t>(a)] = static_cast<std::uint8_t>(inv);
    group.neg_[static_cast<size_t>(a)] = static_cast<std::uint8_t>(neg);
  }

  group.p_id_ = find_in(gen.p.q());
  group.q_id_ = find_in(gen.q.q());
  group.q_prime_id_ = find_in(gen.q_prime.q());
  group.minus_one_id_ = find_in(-Quatd::identity());
  if (group.p_id_ < 0 || group.q_id_ < 0 || group.q_prime_id_ < 0 || group.minus_one_id_ < 0)
    throw GroupClosureFailure("generators or -1 not found in the closed set");
  return group;
}

int BinaryDodecGroup::find(const Quatd& q, double eps) const {
  for (size_t i = 0; i < elements_.size(); ++i) {
    if (dot(elements_[i].q(), q) > std::cos(eps)) return static_cast<int>(i);
  }
  return -1;
}

const std::array<double, 9>& nominal_layer_angles() {
  static const std::array<double, 9> angles = {
      0.0,        kPi / 5, kPi / 3,     2 * kPi / 5, kPi / 2,
      3 * kPi / 5, 2 * kPi / 3, 4 * kPi / 5, kPi};
  return angles;
}

std::array<int, 9> BinaryDodecGroup::re_census(double eps) const {
  std::array<int, 9> census{};
  for (const auto& g : elements_) {
    for (int k = 0; k < 9; ++k) {
      if (std::abs(g.real() - std::cos(nominal_layer_angles()[static_cast<size_t>(k)])) <= eps) {
        ++census[static_cast<size_t>(k)];
        break;
      }
    }
  }
  return census;
}

namespace {

// Interior angle at corner a of the spherical triangle (a, b, c) on the
// unit 2-sphere.
double spherical_angle(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                       const Eigen::Vector3d& c) {
  const Eigen::Vector3d tb = (b - a * a.dot(b)).normalized();
  const Eigen::Vector3d tc = (c - a * a.dot(c)).normalized();
  return std::acos(std::clamp(tb.dot(tc), -1.0, 1.0));
}

}  // namespace

std::vector<TrigCheck> verify_dodeca_trig(double tol) {
  const TrigConstants t = TrigConstants::compute();
  const BaseFrame frame = base_frame();
  std::vector<TrigCheck> checks;
  auto add = [&](const std::string& name, double measured, double expected) {
    checks.push_back({name, measured, expected, tol, std::abs(measured - expected) <= tol});
  };

  add("cot2_pi5_plus_cot2_2pi5", t.cot_pi5 * t.cot_pi5 + t.cot_2pi5 * t.cot_2pi5, 2.0);
  add("quadratic_cos_pi5", 4 * t.cos_pi5 * t.cos_pi5 - 2 * t.cos_pi5 - 1, 0.0);
  add("cos_pi5_closed_form", t.cos_pi5, (1.0 + std::sqrt(5.0)) / 4.0);
  add("frame_norm", frame.x * frame.x + frame.y * frame.y, 1.0);
  add("frame_sum", frame.x + frame.y, t.cot_pi5);

  // Spherical center-to-vertex distance of the pentagon.
  const Eigen::Vector3d v = frame.v.vec(), f = frame.f.vec();
  const double center_vertex = std::acos(std::clamp(v.dot(f), -1.0, 1.0));
  add("pentagon_center_vertex", center_vertex, std::acos(t.cot_pi5 / std::sqrt(3.0)));
  add("pentagon_center_vertex_sq_euclid", (v - f).squaredNorm(),
      2.0 - 2.0 / std::sqrt(3.0) * t.cot_pi5);

  // The edge between the pentagons about f and f' is centered at j, so
  // (f, j, v) is a flag triangle with angles pi/5, pi/2, pi/3.
  const Eigen::Vector3d e(0.0, 1.0, 0.0);
  const double ang_f = spherical_angle(f, e, v);
  const double ang_e = spherical_angle(e, f, v);
  const double ang_v = spherical_angle(v, f, e);
  add("flag_angle_face", ang_f, kPi / 5);
  add("flag_angle_edge", ang_e, kPi / 2);
  add("flag_angle_vertex", ang_v, kPi / 3);
  add("flag_area", ang_f + ang_e + ang_v - kPi, kPi / 30.0);
  return checks;
}

}  // namespace quint
