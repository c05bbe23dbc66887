#include "qsteer/basis.hpp"

#include <algorithm>
#include <charconv>

#include "qsteer/errors.hpp"

namespace qsteer {

char to_char(Pol pol) { return pol == Pol::H ? 'H' : 'V'; }

std::string BasisKet::label() const {
  if (vacuum) return "vac";
  return site + ',' + to_char(pol) + ',' + std::to_string(oam);
}

std::optional<BasisKet> BasisKet::from_label(std::string_view text) {
  if (text == "vac") return BasisKet::vac();
  const auto first = text.find(',');
  if (first == std::string_view::npos || first == 0) return std::nullopt;
  const auto second = text.find(',', first + 1);
  if (second != first + 2) return std::nullopt;
  const char p = text[first + 1];
  if (p != 'H' && p != 'V') return std::nullopt;
  const auto oam_text = text.substr(second + 1);
  int oam = 0;
  const auto* end = oam_text.data() + oam_text.size();
  auto [ptr, ec] = std::from_chars(oam_text.data(), end, oam);
  if (ec != std::errc() || ptr != end || oam_text.empty()) return std::nullopt;
  return BasisKet::photon(std::string(text.substr(0, first)), p == 'H' ? Pol::H : Pol::V, oam);
}

bool BasisKet::operator==(const BasisKet& other) const {
  if (vacuum || other.vacuum) return vacuum == other.vacuum;
  return site == other.site && pol == other.pol && oam == other.oam;
}

std::strong_ordering BasisKet::operator<=>(const BasisKet& other) const {
  if (vacuum || other.vacuum) {
    if (vacuum && other.vacuum) return std::strong_ordering::equal;
    return vacuum ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (auto c = site <=> other.site; c != 0) return c;
  if (auto c = pol <=> other.pol; c != 0) return c;
  return oam <=> other.oam;
}

BasisDecl::BasisDecl(std::vector<std::string> sites, std::vector<int> oam_values)
    : sites_(std::move(sites)), oam_(std::move(oam_values)) {
  sorted_sites_ = sites_;
  std::sort(sorted_sites_.begin(), sorted_sites_.end());
  if (std::adjacent_find(sorted_sites_.begin(), sorted_sites_.end()) != sorted_sites_.end())
    throw Error(ErrorKind::BadParameters, "duplicate site identifier");
  for (const auto& s : sorted_sites_) {
    if (s.empty()) throw Error(ErrorKind::BadParameters, "empty site identifier");
  }
  std::sort(oam_.begin(), oam_.end());
  oam_.erase(std::unique(oam_.begin(), oam_.end()), oam_.end());
  if (oam_.empty()) throw Error(ErrorKind::BadParameters, "OAM set must not be empty");

  kets_.reserve(1 + sorted_sites_.size() * 2 * oam_.size());
  kets_.push_back(BasisKet::vac());
  for (const auto& s : sorted_sites_)
    for (Pol p : {Pol::H, Pol::V})
      for (int m : oam_) kets_.push_back(BasisKet::photon(s, p, m));
}

bool BasisDecl::has_site(std::string_view site) const {
  return std::binary_search(sorted_sites_.begin(), sorted_sites_.end(), site);
}

bool BasisDecl::has_oam(int m) const { return std::binary_search(oam_.begin(), oam_.end(), m); }

int BasisDecl::reference_oam() const { return has_oam(0) ? 0 : oam_.front(); }

std::size_t BasisDecl::site_position(std::string_view site) const {
  auto it = std::lower_bound(sorted_sites_.begin(), sorted_sites_.end(), site);
  if (it == sorted_sites_.end() || *it != site)
    throw Error(ErrorKind::UnknownSite, "site '" + std::string(site) + "' is not declared");
  return static_cast<std::size_t>(it - sorted_sites_.begin());
}

std::size_t BasisDecl::oam_position(int m) const {
  auto it = std::lower_bound(oam_.begin(), oam_.end(), m);
  if (it == oam_.end() || *it != m)
    throw Error(ErrorKind::OamOverflow, "OAM value " + std::to_string(m) + " is not declared");
  return static_cast<std::size_t>(it - oam_.begin());
}

std::optional<std::size_t> BasisDecl::find(const BasisKet& ket) const {
  if (ket.vacuum) return 0;
  if (!has_site(ket.site) || !has_oam(ket.oam)) return std::nullopt;
  return index_of(ket.site, ket.pol, ket.oam);
}

std::size_t BasisDecl::index_of(const BasisKet& ket) const {
  if (ket.vacuum) return 0;
  return index_of(ket.site, ket.pol, ket.oam);
}

std::size_t BasisDecl::index_of(std::string_view site, Pol pol, int oam) const {
  const auto s = site_position(site);
  const auto m = oam_position(oam);
  return 1 + (s * 2 + static_cast<std::size_t>(pol)) * oam_.size() + m;
}

bool BasisDecl::operator==(const BasisDecl& other) const {
  return sorted_sites_ == other.sorted_sites_ && oam_ == other.oam_;
}

std::string Subsystem::label() const {
  switch (kind) {
    case RegisterKind::Occupation: return "occ[" + site + "]";
    case RegisterKind::Polarization: return "pol";
    case RegisterKind::Oam: return "oam";
  }
  return "?";
}

}  // namespace qsteer
