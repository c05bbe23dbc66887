#include "qsteer/optics.hpp"

#include <cmath>
#include <numbers>
#include <optional>

#include "qsteer/errors.hpp"

namespace qsteer {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
const Complex kI(0.0, 1.0);

Eigen::Index idx(const BasisDecl& decl, const std::string& site, Pol pol, int m) {
  return static_cast<Eigen::Index>(decl.index_of(site, pol, m));
}

double reduce_degrees(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r < 0) r += 360.0;
  return r;
}

}  // namespace

namespace {

/// Octant index when `r` is a multiple of 45 degrees.
std::optional<int> octant(double r) {
  const double k = r / 45.0;
  if (k != std::floor(k)) return std::nullopt;
  return static_cast<int>(k) % 8;
}

constexpr double kOctantCos[8] = {1.0, kInvSqrt2, 0.0, -kInvSqrt2, -1.0, -kInvSqrt2, 0.0, kInvSqrt2};

}  // namespace

double cos_deg(double deg) {
  const double r = reduce_degrees(deg);
  if (const auto k = octant(r)) return kOctantCos[*k];
  return std::cos(r * std::numbers::pi / 180.0);
}

double sin_deg(double deg) {
  const double r = reduce_degrees(deg);
  if (const auto k = octant(r)) return kOctantCos[(*k + 6) % 8];
  return std::sin(r * std::numbers::pi / 180.0);
}

CMatrix hwp_jones(double theta_deg) {
  const double c = cos_deg(2 * theta_deg), s = sin_deg(2 * theta_deg);
  CMatrix j(2, 2);
  j << c, s, s, -c;
  return j;
}

CMatrix qwp_jones(double theta_deg) {
  const double c = cos_deg(theta_deg), s = sin_deg(theta_deg);
  CMatrix rot(2, 2), retard(2, 2);
  rot << c, -s, s, c;
  retard << 1, 0, 0, kI;
  return rot * retard * rot.adjoint();
}

Eigen::Vector2cd left_circular() { return Eigen::Vector2cd(kInvSqrt2, -kI * kInvSqrt2); }
Eigen::Vector2cd right_circular() { return Eigen::Vector2cd(kInvSqrt2, kI * kInvSqrt2); }

StateVector heralded_source(const StateVector& s, const std::string& site, Pol pol) {
  const auto& decl = s.decl();
  decl.site_position(site);
  if (!decl.has_oam(0))
    throw Error(ErrorKind::OamOverflow, "heralded source emits OAM 0, which is not declared");
  const double photon_weight = s.amplitudes().tail(s.amplitudes().size() - 1).squaredNorm();
  if (photon_weight > kZeroNormTol)
    throw Error(ErrorKind::DoubleExcitation, "source fired on a state that already holds a photon");
  CVector out = CVector::Zero(s.amplitudes().size());
  out(idx(decl, site, pol, 0)) = s.amplitudes()(0);
  return StateVector(decl, std::move(out));
}

StateVector heralded_source(const BasisDecl& decl, const std::string& site, Pol pol) {
  return heralded_source(StateVector::vacuum(decl), site, pol);
}

StateVector waveplate(const StateVector& s, const std::string& site, WaveplateKind kind, double theta_deg) {
  const CMatrix jones = kind == WaveplateKind::Half ? hwp_jones(theta_deg) : qwp_jones(theta_deg);
  return apply_local_unitary(s, jones, Subsystem::polarization(), site);
}

namespace {

/// Moves the `pol` amplitudes of `from` onto `to`, refusing to overwrite
/// populated kets.
void move_pol(const BasisDecl& decl, const CVector& in, CVector& out, const std::string& from,
              const std::string& to, Pol pol) {
  if (from == to) return;
  for (int m : decl.oam_values()) {
    const auto src = idx(decl, from, pol, m);
    const auto dst = idx(decl, to, pol, m);
    if (in(src) == Complex(0.0)) continue;
    if (std::abs(in(dst)) > kZeroNormTol)
      throw Error(ErrorKind::SiteCollision, "routing " + std::string(1, to_char(pol)) + " light from '" + from +
                                                "' onto occupied site '" + to + "'");
    out(dst) += in(src);
    out(src) -= in(src);
  }
}

}  // namespace

StateVector pbs_route(const StateVector& s, const std::string& input, const std::string& out_h,
                      const std::string& out_v) {
  const auto& decl = s.decl();
  decl.site_position(input);
  decl.site_position(out_h);
  decl.site_position(out_v);
  if (out_h == out_v) throw Error(ErrorKind::BadParameters, "PBS output ports must be distinct sites");
  CVector out = s.amplitudes();
  move_pol(decl, s.amplitudes(), out, input, out_h, Pol::H);
  move_pol(decl, s.amplitudes(), out, input, out_v, Pol::V);
  return StateVector(decl, std::move(out));
}

StateVector pbs_merge(const StateVector& s, const std::string& in_h, const std::string& in_v,
                      const std::string& output) {
  const auto& decl = s.decl();
  decl.site_position(in_h);
  decl.site_position(in_v);
  decl.site_position(output);
  if (in_h == in_v) throw Error(ErrorKind::BadParameters, "PBS input ports must be distinct sites");
  CVector out = s.amplitudes();
  move_pol(decl, s.amplitudes(), out, in_h, output, Pol::H);
  move_pol(decl, s.amplitudes(), out, in_v, output, Pol::V);
  return StateVector(decl, std::move(out));
}

StateVector beamsplitter_5050(const StateVector& s, const std::string& site1, const std::string& site2) {
  const auto& decl = s.decl();
  decl.site_position(site1);
  decl.site_position(site2);
  if (site1 == site2) throw Error(ErrorKind::BadParameters, "beam splitter ports must be distinct sites");
  CVector out = s.amplitudes();
  for (Pol p : {Pol::H, Pol::V}) {
    for (int m : decl.oam_values()) {
      const auto i1 = idx(decl, site1, p, m);
      const auto i2 = idx(decl, site2, p, m);
      const Complex a = out(i1), b = out(i2);
      out(i1) = (a + kI * b) * kInvSqrt2;
      out(i2) = (kI * a + b) * kInvSqrt2;
    }
  }
  return StateVector(decl, std::move(out));
}

StateVector qplate(const StateVector& s, const std::string& site, int q) {
  const auto& decl = s.decl();
  decl.site_position(site);
  const auto& in = s.amplitudes();
  CVector out = in;
  // Circular components first, so the whole site is rewritten from the input.
  for (int m : decl.oam_values()) {
    out(idx(decl, site, Pol::H, m)) = 0.0;
    out(idx(decl, site, Pol::V, m)) = 0.0;
  }
  auto deposit = [&](int m, const Eigen::Vector2cd& pol, Complex c) {
    if (!decl.has_oam(m))
      throw Error(ErrorKind::OamOverflow, "q-plate maps populated light to undeclared OAM " + std::to_string(m));
    out(idx(decl, site, Pol::H, m)) += c * pol(0);
    out(idx(decl, site, Pol::V, m)) += c * pol(1);
  };
  constexpr double kPopulated = 1e-12;
  for (int m : decl.oam_values()) {
    const Complex h = in(idx(decl, site, Pol::H, m));
    const Complex v = in(idx(decl, site, Pol::V, m));
    const Complex c_left = (h + kI * v) * kInvSqrt2;
    const Complex c_right = (h - kI * v) * kInvSqrt2;
    if (std::abs(c_left) > kPopulated) deposit(m + 2 * q, right_circular(), c_left);
    if (std::abs(c_right) > kPopulated) deposit(m - 2 * q, left_circular(), c_right);
  }
  return StateVector(decl, std::move(out));
}

StateVector phase_shift(const StateVector& s, const std::string& site, double phi_deg) {
  const auto& decl = s.decl();
  decl.site_position(site);
  const Complex phase(cos_deg(phi_deg), sin_deg(phi_deg));
  CVector out = s.amplitudes();
  for (Pol p : {Pol::H, Pol::V})
    for (int m : decl.oam_values()) out(idx(decl, site, p, m)) *= phase;
  return StateVector(decl, std::move(out));
}

}  // namespace qsteer
