#pragma once

#include <string>

#include "qsteer/state.hpp"

namespace qsteer {

// Thin-element models of the optical table. All actions are unitary on the
// populated part of the space and act on every OAM value alike, except the
// q-plate.
//
// Circular polarization convention: |L> = (|H> - i|V>)/sqrt2,
// |R> = (|H> + i|V>)/sqrt2.

enum class WaveplateKind { Half, Quarter };

/// cos/sin of an angle in degrees, exact at multiples of 90 and symmetric at
/// odd multiples of 45.
double cos_deg(double deg);
double sin_deg(double deg);

/// HWP(t) = [[cos2t, sin2t], [sin2t, -cos2t]].
CMatrix hwp_jones(double theta_deg);
/// QWP(t) = R(t) diag(1, i) R(-t).
CMatrix qwp_jones(double theta_deg);

Eigen::Vector2cd left_circular();
Eigen::Vector2cd right_circular();

/// Puts the photon at |site, pol, 0> on top of a vacuum state. Throws
/// DoubleExcitation when `s` already holds photon amplitude, UnknownSite,
/// OamOverflow when OAM 0 is not declared.
StateVector heralded_source(const StateVector& s, const std::string& site, Pol pol);
StateVector heralded_source(const BasisDecl& decl, const std::string& site, Pol pol);

StateVector waveplate(const StateVector& s, const std::string& site, WaveplateKind kind, double theta_deg);

/// H amplitudes at `input` move to `out_h`, V amplitudes to `out_v`; no
/// reflection phase. Throws SiteCollision if a target ket already holds
/// amplitude from elsewhere.
StateVector pbs_route(const StateVector& s, const std::string& input, const std::string& out_h,
                      const std::string& out_v);
/// Inverse of pbs_route: H from `in_h` and V from `in_v` recombine at `output`.
StateVector pbs_merge(const StateVector& s, const std::string& in_h, const std::string& in_v,
                      const std::string& output);

/// Symmetric lossless 50/50 splitter: |1> -> (|1> + i|2>)/sqrt2,
/// |2> -> (i|1> + |2>)/sqrt2.
StateVector beamsplitter_5050(const StateVector& s, const std::string& site1, const std::string& site2);

/// |L,m> -> |R,m+2q>, |R,m> -> |L,m-2q>. Throws OamOverflow when a populated
/// component would leave the declared OAM set.
StateVector qplate(const StateVector& s, const std::string& site, int q);

/// Multiplies the amplitudes at `site` by exp(i phi).
StateVector phase_shift(const StateVector& s, const std::string& site, double phi_deg);

}  // namespace qsteer
