#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "lcqmac/fp.hpp"

namespace lcqmac {

enum class SsoVerdict { Valid, RankDeficient, NotSso };

/// Exact check of the two feasibility conditions on a transfer matrix
/// candidate: rank [Mx, Mz] = N and Mx·Mz^T = Mz·Mx^T.
SsoVerdict check_sso(const FpMatrix& mx, const FpMatrix& mz);

/// Transfer matrix of an N-sum box; construction validates the SSO
/// conditions unless `unchecked` is set (for candidates under test).
struct TransferMatrix {
    size_t N = 0;
    uint32_t q = 2;
    FpMatrix Mx, Mz;

    TransferMatrix(FpMatrix mx, FpMatrix mz, bool unchecked = false);
};

/// State index of the joint system: a vector in F_q^N.
using BoxState = std::vector<uint32_t>;

/// One round of per-transmitter X/Z encodings: the basis index moves from a
/// to a + Mx·x + Mz·z. With a = 0 the measured outcome is M·(x;z).
BoxState box_apply(const TransferMatrix& m, const BoxState& a, const std::vector<uint32_t>& x,
                   const std::vector<uint32_t>& z);

/// The 2-sum box: x-sum on the first output, z-difference on the second.
TransferMatrix box1(uint32_t q);
/// The 3-sum box: 3-way x-sum plus the coupled pair (z1-z2, z1-z3).
TransferMatrix box2(uint32_t q);

/// Gadget identifiers: the twenty catalog units plus the ternary-field
/// variant that packs two 3-way sums into one use of the 3-sum box.
struct GadgetKind {
    int protocol = 0;      ///< 1..20
    bool dense3 = false;   ///< protocol 16 realized on box2 (requires q = 3)

    std::string name() const;
    friend bool operator==(const GadgetKind&, const GadgetKind&) = default;
};

GadgetKind parse_gadget_kind(const std::string& name);

/// Input arity per transmitter and receiver output count for one unit.
struct GadgetShape {
    std::array<size_t, 3> inputs{0, 0, 0};
    size_t outputs = 0;
    std::array<int, 3> qudits{0, 0, 0};
};

GadgetShape gadget_shape(const GadgetKind& kind);

struct GadgetRun {
    GadgetKind kind;
    std::array<std::vector<uint32_t>, 3> inputs;
    std::vector<uint32_t> outputs;
    std::array<int, 3> qudit_cost{0, 0, 0};
};

/// Executes one protocol unit on raw data symbols. All sign conventions
/// (transmitter-side negations, pairwise recombination, o-pair expression
/// recovery) happen inside, so outputs are the demand values directly.
GadgetRun gadget_execute(const GadgetKind& kind, uint32_t q,
                         const std::array<std::vector<uint32_t>, 3>& inputs);

}  // namespace lcqmac
