#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>

#include "lcqmac/cost_regions.hpp"

namespace lcqmac {

inline constexpr int kProtocolCount = 20;

enum class BoxKind { TQC, Box1, Box2 };

/// Which standard-form demand blocks a protocol serves.
enum class DemandBlock { ThreeWay, Pair12, Pair13, Pair23, OPair, Single1, Single2, Single3 };

struct ProtocolInfo {
    int id = 0;  ///< 1-based protocol number
    BoxKind box = BoxKind::TQC;
    int box_uses_per_unit = 0;
    /// Demand dimensions one indivisible unit satisfies (per covered block).
    int dims_per_unit = 1;
    /// Integral per-transmitter qudit cost of one unit.
    std::array<int, 3> unit_cost{0, 0, 0};
    std::vector<DemandBlock> covers;
};

/// The building-block catalog: amortized cost matrix D (3x20), 0/1 demand
/// matrix E (8x20), and the integral unit data scaling each column.
struct ProtocolCatalog {
    QMatrix D;  ///< 3x20
    QMatrix E;  ///< 8x20
    std::array<ProtocolInfo, kProtocolCount> info;
};

const ProtocolCatalog& catalog();

/// lambda[i] = amortized amount of protocol P(i+1) in use; always >= 0.
struct Allocation {
    QVector lambda = QVector(kProtocolCount, Rational(0));

    friend bool operator==(const Allocation&, const Allocation&) = default;
};

struct TraceStep {
    int protocol = 0;  ///< 1-based
    Rational amount;
    std::string reason;  ///< Step1 | Step2 | CaseI | II.1..II.7 | Lemma4
};

struct AllocationTrace {
    std::vector<TraceStep> steps;
    std::map<std::string, Rational> scalars;  ///< ntilde, no', n123', Gamma, a_i, b_i

    /// Sums the recorded steps back into an allocation.
    Allocation replay() const;
};

/// Demand vector as exact rationals, in catalog row order.
QVector demand_vector(const NVector& n);

bool allocation_feasible(const Allocation& lambda, const NVector& n, const CostTuple& budget);

/// Canonical exact-LP allocation: minimizes the total protocol usage, then
/// breaks ties lexicographically (lowest lambda_1, then lambda_2, ...).
/// Returns nullopt exactly when the budget lies outside region_standard(n).
std::optional<Allocation> allocate_lp(const NVector& n, const CostTuple& budget);

/// Constructive allocation following the step/case recipe, with a full
/// trace. Pre: budget inside region_standard(n) (throws NotInRegion).
/// If a subcase recipe fails validation the LP path is used and the trace is
/// tagged "lp-fallback"; this is treated as a defect and tested never to
/// happen on valid inputs.
std::pair<Allocation, AllocationTrace> allocate_constructive(const NVector& n,
                                                             const CostTuple& budget);

/// Independent-message allocation over {P1-P3, P10-P15} (TQC + superdense):
/// requires budget_i >= n_i/2 and sum(budget) >= n1+n2+n3, and realizes the
/// demands as a convex combination of the three extreme budget splits.
Allocation allocate_im(size_t n1, size_t n2, size_t n3, const CostTuple& budget);

/// Achievable cost region when transmitters may only use pairwise
/// entanglement: the projection of the usage system restricted to columns
/// P1-P16 onto the cost coordinates.
HPolyhedron restricted_region_pairwise(const NVector& n);

/// Full 23-variable usage system {Delta >= D·lambda, E·lambda >= n,
/// lambda >= 0} over (Delta_1..3, lambda_1..20); columns P(first..last).
HPolyhedron usage_system(const NVector& n, int first_protocol = 1, int last_protocol = 20);

namespace detail {
/// Case-I o-pair split: lambda_{7..9} solving the 3x3 system
/// [[1,1/2,1/2],[1/2,1,1/2],[1/2,1/2,1]]·lambda = no'/2 + a.
std::array<Rational, 3> case1_opair_split(const Rational& no_prime,
                                          const std::array<Rational, 3>& a);
}  // namespace detail

}  // namespace lcqmac
