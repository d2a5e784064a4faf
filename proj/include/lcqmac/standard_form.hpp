#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "lcqmac/fp.hpp"

namespace lcqmac {

/// A linear-computation instance: the receiver wants
/// V[0]·W_1 + ... + V[K-1]·W_K over F_d. Every V_k is m x m_k with full
/// column rank and m_k <= m.
struct FunctionSpec {
    uint32_t d = 2;
    std::vector<FpMatrix> V;

    size_t K() const { return V.size(); }
    size_t m() const { return V.empty() ? 0 : V.front().rows(); }

    void validate() const;
};

/// The seven ranks of V_1, V_2, V_3 and their concatenations.
struct RankProfile {
    size_t r1 = 0, r2 = 0, r3 = 0;
    size_t r12 = 0, r13 = 0, r23 = 0;
    size_t r123 = 0;

    std::array<size_t, 7> as_array() const { return {r1, r2, r3, r12, r13, r23, r123}; }
    friend bool operator==(const RankProfile&, const RankProfile&) = default;
};

/// Block dimension counts of a standard form.
struct NVector {
    size_t n123 = 0, n12 = 0, n13 = 0, n23 = 0;
    size_t no = 0;
    size_t n1 = 0, n2 = 0, n3 = 0;

    std::array<size_t, 8> as_array() const { return {n123, n12, n13, n23, no, n1, n2, n3}; }
    size_t total() const { return n123 + n12 + n13 + n23 + no + n1 + n2 + n3; }
    friend bool operator==(const NVector&, const NVector&) = default;
};

/// Canonical rewrite of (V_1, V_2, V_3): shared basis blocks, the coupled
/// o-pair blocks, and invertible per-transmitter precoders R_k with
/// V_k = B_k · R_k.
struct StandardForm {
    uint32_t d = 2;
    FpMatrix U123, U12, U13, U23;
    FpMatrix U_1_23, U_2_13, U_3_12;
    FpMatrix U1, U2, U3;
    FpMatrix R1, R2, R3;
    NVector n;

    /// Transmitter basis [U123 U12 U13 U_1_23 U1] and its two analogues.
    FpMatrix basis1() const;
    FpMatrix basis2() const;
    FpMatrix basis3() const;

    /// Receiver-side basis over the nine standard blocks:
    /// [U123 U12 U13 U23 U_2_13 U_3_12 U1 U2 U3].
    FpMatrix receiver_basis() const;
};

struct VerifyResult {
    bool ok = true;
    /// 1..8: first violated basis condition; 9: some R_k not invertible;
    /// 10: V_k != B_k·R_k. Zero when ok.
    int violated_condition = 0;
    std::string detail;
};

RankProfile rank_profile(const FunctionSpec& spec);

/// Decomposes a K=3 spec into its standard form. The construction is
/// deterministic (rref pivot bases everywhere, ordered adjustment search for
/// the o-pair split) and verified before returning.
StandardForm decompose(const FunctionSpec& spec);

VerifyResult verify_standard_form(const FunctionSpec& spec, const StandardForm& sf);

NVector n_vector(const StandardForm& sf);

}  // namespace lcqmac
