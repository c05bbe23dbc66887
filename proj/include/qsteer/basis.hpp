#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qsteer {

enum class Pol : unsigned char { H = 0, V = 1 };

char to_char(Pol pol);

/// One element of the vacuum (+) one-photon space. Vacuum kets carry no
/// payload; the defaulted site/pol/oam fields are ignored for them.
struct BasisKet {
  bool vacuum = true;
  std::string site;
  Pol pol = Pol::H;
  int oam = 0;

  static BasisKet vac() { return {}; }
  static BasisKet photon(std::string site, Pol pol, int oam = 0) {
    return {false, std::move(site), pol, oam};
  }

  /// "vac" or "site,H,0".
  std::string label() const;
  static std::optional<BasisKet> from_label(std::string_view text);

  bool operator==(const BasisKet& other) const;
  /// Vacuum first, then lexicographic by (site, pol, oam).
  std::strong_ordering operator<=>(const BasisKet& other) const;
};

/// The declared site set and OAM set a state lives over. Fixes the ordered
/// basis every matrix in the library is indexed by.
class BasisDecl {
 public:
  BasisDecl() : BasisDecl(std::vector<std::string>{}) {}
  explicit BasisDecl(std::vector<std::string> sites, std::vector<int> oam_values = {0});

  /// Sites in declaration order.
  const std::vector<std::string>& sites() const { return sites_; }
  /// Sites in basis order (sorted).
  const std::vector<std::string>& sorted_sites() const { return sorted_sites_; }
  /// Sorted, unique.
  const std::vector<int>& oam_values() const { return oam_; }

  bool has_site(std::string_view site) const;
  bool has_oam(int m) const;
  /// Internal reference state the vacuum is embedded with when the space is
  /// viewed as a tensor product of registers: H, and OAM 0 when declared.
  int reference_oam() const;

  std::size_t dimension() const { return kets_.size(); }
  const std::vector<BasisKet>& kets() const { return kets_; }
  const BasisKet& ket(std::size_t index) const { return kets_.at(index); }

  std::optional<std::size_t> find(const BasisKet& ket) const;
  /// Throws UnknownSite / OamOverflow.
  std::size_t index_of(const BasisKet& ket) const;
  std::size_t index_of(std::string_view site, Pol pol, int oam) const;

  /// Position of a site within sorted_sites(). Throws UnknownSite.
  std::size_t site_position(std::string_view site) const;
  std::size_t oam_position(int m) const;

  /// Same basis: equal site sets and OAM sets (declaration order is cosmetic).
  bool operator==(const BasisDecl& other) const;

 private:
  std::vector<std::string> sites_;
  std::vector<std::string> sorted_sites_;
  std::vector<int> oam_;
  std::vector<BasisKet> kets_;
};

enum class RegisterKind { Occupation, Polarization, Oam };

/// Names one tensor factor of the register view of the space: a site's
/// occupation (0/1), the polarization register, or the OAM register.
struct Subsystem {
  RegisterKind kind = RegisterKind::Polarization;
  std::string site;  // occupation registers only

  static Subsystem occupation(std::string site) { return {RegisterKind::Occupation, std::move(site)}; }
  static Subsystem polarization() { return {RegisterKind::Polarization, {}}; }
  static Subsystem oam() { return {RegisterKind::Oam, {}}; }

  std::string label() const;
  bool operator==(const Subsystem&) const = default;
};

}  // namespace qsteer
