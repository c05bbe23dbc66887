#include "qsteer/registers.hpp"

#include <algorithm>

#include "qsteer/errors.hpp"

namespace qsteer {

namespace {

std::vector<Subsystem> all_registers(const BasisDecl& decl) {
  std::vector<Subsystem> regs;
  for (const auto& s : decl.sorted_sites()) regs.push_back(Subsystem::occupation(s));
  regs.push_back(Subsystem::polarization());
  regs.push_back(Subsystem::oam());
  return regs;
}

void check_selection(const BasisDecl& decl, std::span<const Subsystem> keep) {
  if (keep.empty()) throw Error(ErrorKind::UnknownSubsystem, "empty register selection");
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i].kind == RegisterKind::Occupation && !decl.has_site(keep[i].site))
      throw Error(ErrorKind::UnknownSubsystem, "no occupation register for site '" + keep[i].site + "'");
    for (std::size_t j = 0; j < i; ++j) {
      if (keep[i] == keep[j])
        throw Error(ErrorKind::UnknownSubsystem, "register " + keep[i].label() + " selected twice");
    }
  }
}

/// Values of the registers not in `keep`, used to match kets that survive the trace.
std::vector<std::size_t> rest_key(const BasisDecl& decl, const std::vector<Subsystem>& rest,
                                  const BasisKet& ket) {
  std::vector<std::size_t> key;
  key.reserve(rest.size());
  for (const auto& r : rest) key.push_back(register_value(decl, r, ket));
  return key;
}

std::vector<Subsystem> complement(const BasisDecl& decl, std::span<const Subsystem> keep) {
  std::vector<Subsystem> rest;
  for (const auto& r : all_registers(decl)) {
    if (std::find(keep.begin(), keep.end(), r) == keep.end()) rest.push_back(r);
  }
  return rest;
}

const BasisDecl& require_decl(const DensityOperator& rho) {
  if (!rho.decl())
    throw Error(ErrorKind::BasisMismatch, "operator is not a full-space operator over a basis declaration");
  return *rho.decl();
}

}  // namespace

std::size_t register_dimension(const BasisDecl& decl, const Subsystem& sub) {
  switch (sub.kind) {
    case RegisterKind::Occupation: return 2;
    case RegisterKind::Polarization: return 2;
    case RegisterKind::Oam: return decl.oam_values().size();
  }
  return 0;
}

std::vector<std::string> register_labels(const BasisDecl& decl, const Subsystem& sub) {
  switch (sub.kind) {
    case RegisterKind::Occupation: return {"0", "1"};
    case RegisterKind::Polarization: return {"H", "V"};
    case RegisterKind::Oam: {
      std::vector<std::string> out;
      for (int m : decl.oam_values()) out.push_back(std::to_string(m));
      return out;
    }
  }
  return {};
}

std::size_t register_value(const BasisDecl& decl, const Subsystem& sub, const BasisKet& ket) {
  switch (sub.kind) {
    case RegisterKind::Occupation: return (!ket.vacuum && ket.site == sub.site) ? 1 : 0;
    case RegisterKind::Polarization: return ket.vacuum ? 0 : static_cast<std::size_t>(ket.pol);
    case RegisterKind::Oam: return decl.oam_position(ket.vacuum ? decl.reference_oam() : ket.oam);
  }
  return 0;
}

DensityOperator partial_trace(const DensityOperator& rho, std::span<const Subsystem> keep) {
  const auto& decl = require_decl(rho);
  check_selection(decl, keep);
  const auto rest = complement(decl, keep);

  std::size_t kept_dim = 1;
  for (const auto& k : keep) kept_dim *= register_dimension(decl, k);

  const auto n = decl.dimension();
  std::vector<std::size_t> kept_index(n);
  std::vector<std::vector<std::size_t>> keys(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& ket = decl.ket(i);
    std::size_t idx = 0;
    for (const auto& k : keep) idx = idx * register_dimension(decl, k) + register_value(decl, k, ket);
    kept_index[i] = idx;
    keys[i] = rest_key(decl, rest, ket);
  }

  CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(kept_dim), static_cast<Eigen::Index>(kept_dim));
  const auto& m = rho.matrix();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (keys[i] != keys[j]) continue;
      out(static_cast<Eigen::Index>(kept_index[i]), static_cast<Eigen::Index>(kept_index[j])) +=
          m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }

  std::vector<std::string> labels{""};
  for (const auto& k : keep) {
    std::vector<std::string> next;
    for (const auto& prefix : labels)
      for (const auto& l : register_labels(decl, k)) next.push_back(prefix.empty() ? l : prefix + "|" + l);
    labels = std::move(next);
  }
  return DensityOperator(std::move(labels), std::move(out));
}

DensityOperator partial_trace(const DensityOperator& rho, const Subsystem& keep) {
  return partial_trace(rho, std::span<const Subsystem>(&keep, 1));
}

QubitRegister QubitRegister::polarization() { return QubitRegister{}; }

QubitRegister QubitRegister::occupation(std::string site) {
  QubitRegister r;
  r.kind_ = Kind::Occupation;
  r.site0_ = std::move(site);
  return r;
}

QubitRegister QubitRegister::dual_rail(std::string zero_site, std::string one_site) {
  if (zero_site == one_site)
    throw Error(ErrorKind::BadParameters, "dual-rail qubit needs two distinct sites");
  QubitRegister r;
  r.kind_ = Kind::DualRail;
  r.site0_ = std::move(zero_site);
  r.site1_ = std::move(one_site);
  return r;
}

QubitRegister QubitRegister::oam_pair(int zero_m, int one_m) {
  if (zero_m == one_m) throw Error(ErrorKind::BadParameters, "OAM qubit needs two distinct values");
  QubitRegister r;
  r.kind_ = Kind::OamPair;
  r.m0_ = zero_m;
  r.m1_ = one_m;
  return r;
}

std::vector<Subsystem> QubitRegister::registers() const {
  switch (kind_) {
    case Kind::Polarization: return {Subsystem::polarization()};
    case Kind::Occupation: return {Subsystem::occupation(site0_)};
    case Kind::DualRail: return {Subsystem::occupation(site0_), Subsystem::occupation(site1_)};
    case Kind::OamPair: return {Subsystem::oam()};
  }
  return {};
}

int QubitRegister::qubit_of(const BasisDecl& decl, const BasisKet& ket) const {
  switch (kind_) {
    case Kind::Polarization: return ket.vacuum ? 0 : static_cast<int>(ket.pol);
    case Kind::Occupation: return (!ket.vacuum && ket.site == site0_) ? 1 : 0;
    case Kind::DualRail:
      if (ket.vacuum) return -1;
      if (ket.site == site0_) return 0;
      if (ket.site == site1_) return 1;
      return -1;
    case Kind::OamPair: {
      const int m = ket.vacuum ? decl.reference_oam() : ket.oam;
      if (m == m0_) return 0;
      if (m == m1_) return 1;
      return -1;
    }
  }
  return -1;
}

std::string QubitRegister::describe() const {
  switch (kind_) {
    case Kind::Polarization: return "pol";
    case Kind::Occupation: return "occ[" + site0_ + "]";
    case Kind::DualRail: return "rail[" + site0_ + "=0," + site1_ + "=1]";
    case Kind::OamPair: return "oam[" + std::to_string(m0_) + "=0," + std::to_string(m1_) + "=1]";
  }
  return "?";
}

namespace {

void check_register_sites(const BasisDecl& decl, const QubitRegister& reg) {
  for (const auto& r : reg.registers()) {
    if (r.kind == RegisterKind::Occupation && !decl.has_site(r.site))
      throw Error(ErrorKind::UnknownSubsystem, "qubit register " + reg.describe() + " names an undeclared site");
  }
}

/// Reduce onto the span of `regs`, then read the kept values through `index_of`
/// (returns -1 outside the target subspace).
template <class IndexFn>
CMatrix reduce_to_qubits(const DensityOperator& rho, const std::vector<Subsystem>& regs, std::size_t dim,
                         IndexFn index_of, double leak_tol) {
  const auto& decl = require_decl(rho);
  const auto rest = complement(decl, regs);
  const auto n = decl.dimension();
  std::vector<int> q(n);
  std::vector<std::vector<std::size_t>> keys(n);
  double leak = 0.0;
  const auto& m = rho.matrix();
  for (std::size_t i = 0; i < n; ++i) {
    q[i] = index_of(decl.ket(i));
    keys[i] = rest_key(decl, rest, decl.ket(i));
    if (q[i] < 0) leak += m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
  }
  if (leak > leak_tol)
    throw Error(ErrorKind::NonQubitBobMarginal,
                "weight " + std::to_string(leak) + " lies outside the qubit subspace");

  CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < n; ++i) {
    if (q[i] < 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (q[j] < 0 || keys[i] != keys[j]) continue;
      out(q[i], q[j]) += m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

}  // namespace

CMatrix qubit_pair(const DensityOperator& rho, const QubitRegister& alice, const QubitRegister& bob,
                   double leak_tol) {
  const auto& decl = require_decl(rho);
  check_register_sites(decl, alice);
  check_register_sites(decl, bob);
  auto regs = alice.registers();
  for (const auto& r : bob.registers()) {
    if (std::find(regs.begin(), regs.end(), r) != regs.end())
      throw Error(ErrorKind::BadParameters, "Alice and Bob qubits share register " + r.label());
    regs.push_back(r);
  }
  return reduce_to_qubits(
      rho, regs, 4,
      [&](const BasisKet& ket) {
        const int a = alice.qubit_of(decl, ket);
        const int b = bob.qubit_of(decl, ket);
        return (a < 0 || b < 0) ? -1 : 2 * a + b;
      },
      leak_tol);
}

CMatrix single_qubit(const DensityOperator& rho, const QubitRegister& reg, double leak_tol) {
  const auto& decl = require_decl(rho);
  check_register_sites(decl, reg);
  return reduce_to_qubits(
      rho, reg.registers(), 2, [&](const BasisKet& ket) { return reg.qubit_of(decl, ket); }, leak_tol);
}

}  // namespace qsteer
