// chain.hpp — Emitter chain geometry, drive placement, and validation

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace chaincorr {

// Unit system used throughout: the single-atom decay rate gamma is the unit
// of rate (gamma = 1), the transition wavelength lambda is the unit of
// length, hbar = 1, and the wavenumber is k = 2*pi/lambda.
//
// Geometry: the atoms sit on the x axis at x_i = (i - 1) * d, atom indices
// are 1-based. Detection angles theta are measured from the chain axis, with
// detectors confined to the plane that contains the chain. The transition
// dipoles point perpendicular to that plane, so mu.r_ij = 0, mu.R = 0, and
// the single-dipole pattern u(R) = (3/8pi)[1 - (mu.R)^2] reduces to the
// constant 3/8pi over the whole detection plane. All angular correlation
// values are reported divided by u (and u^2 for pair quantities).

inline constexpr double wavenumber = 2.0 * M_PI;         // k in units of 1/lambda
inline constexpr double dipole_pattern_u = 3.0 / (8.0 * M_PI);

// Dense generator construction covers this range; the 4^N-dimensional solve
// at N = 6 is already a 4096x4096 factorization.
inline constexpr int min_atoms = 1;
inline constexpr int max_atoms = 6;

class config_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class invalid_driven_atom final : public config_error {
public:
    using config_error::config_error;
};

class invalid_spacing final : public config_error {
public:
    using config_error::config_error;
};

class unsupported_atom_count final : public config_error {
public:
    using config_error::config_error;
};

class invalid_rabi final : public config_error {
public:
    using config_error::config_error;
};

struct ChainConfig {
    int n_atoms = 1;
    double spacing_over_lambda = 0.25;  // nearest-neighbour distance, equidistant chain
    int driven_atom = 1;                // 1-based index of the laser-driven atom
    double rabi_over_gamma = 0.0;       // resonant drive strength (detuning is fixed at zero)
};

// Returns cfg unchanged when all invariants hold, otherwise throws the
// matching config_error subtype.
ChainConfig validate(const ChainConfig& cfg);

// Position of atom i (1-based) along the chain axis, in wavelengths.
double atom_position(const ChainConfig& cfg, int atom);

} // namespace chaincorr
