#pragma once

#include <cstdint>
#include <string>

#include "lcqmac/nsum_box.hpp"

namespace lcqmac {

struct BellReport {
    uint32_t q = 2;
    bool basis_orthogonal = false;
    bool action_consistent = false;  ///< every X/Z encoding permutes the basis as a + M·(x;z)
    bool sso_ok = false;
    bool precoding_found = false;    ///< invertible per-transmitter map onto the 2-sum box
    FpMatrix mx, mz;                 ///< transfer matrix realized by the Bell basis
    FpMatrix precode1, precode2;     ///< data precoders carrying it to box1

    bool ok() const { return basis_orthogonal && action_consistent && sso_ok && precoding_found; }
    std::string summary() const;
};

/// Builds the generalized Bell basis on two q-dimensional systems with exact
/// cyclotomic amplitudes, derives the transfer matrix realized by local X/Z
/// encodings by direct operator application over all inputs, checks the SSO
/// conditions, and exhibits invertible per-transmitter data precodings onto
/// the standard 2-sum box. q must be a prime <= 7.
BellReport verify_bell_box1(uint32_t q);

}  // namespace lcqmac
