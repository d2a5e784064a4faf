#pragma once

#include <string>

#include "lcqmac/polyhedra.hpp"
#include "lcqmac/standard_form.hpp"

namespace lcqmac {

/// Download cost tuple (qudits per computation instance per transmitter).
struct CostTuple {
    QVector delta;

    size_t K() const { return delta.size(); }
};

struct BoundRow {
    QVector coef;  ///< nonnegative coefficients over (Delta_1..Delta_K)
    Rational rhs;
    std::string tag;  ///< provenance, e.g. "Thm1-Eq16", "Thm2-Eq21({1}|{2,3}; K1={1})"
};

struct BoundSet {
    size_t K = 0;
    std::vector<BoundRow> rows;

    HPolyhedron to_polyhedron() const;
};

/// The 10x3 cost coefficient matrix shared by the rank-profile and
/// standard-form region generators.
extern const int kRegionCost[10][3];
/// 10x7 generator over (r1, r2, r3, r12, r13, r23, r123).
extern const int kRegionRankGen[10][7];
/// 10x8 generator over (n123, n12, n13, n23, no, n1, n2, n3), transcribed
/// literally; its rows 5 and 7 pair with rows 7 and 5 of kRegionRankGen (the
/// matching cost rows are identical, so both orderings define the same set).
extern const int kRegionStandardGen[10][8];

/// Rows 5..7 of the two generators enumerate the same three bounds in a
/// different order; composing with this permutation aligns them row-by-row.
QVector standard_rhs_aligned_to_rank_rows(const NVector& n);

bool valid_rank_profile(const RankProfile& rp, std::string* why = nullptr);

/// The capacity region for K = 3 as a 10-row H-representation over the rank
/// profile. Rows may be redundant; feed through remove_redundant for the
/// irredundant facet form.
HPolyhedron region_theorem3(const RankProfile& rp);

/// Same region generated from standard-form dimension counts.
HPolyhedron region_standard(const NVector& n);

/// Cut-set and multiparty-computation converse bounds for any K >= 1:
/// the total-download row, the doubled subset rows, and the partition-indexed
/// family (single designated cell, and ordered cell pairs). Deduplicated by
/// normalized row, first provenance kept.
BoundSet converse_bounds_general(const FunctionSpec& spec);

struct CheckResult {
    bool feasible = true;
    size_t violated_row = 0;
    QVector row_coef;
    Rational row_rhs = 0;
};

CheckResult check_cost(const HPolyhedron& region, const CostTuple& cost);

/// Minimum total download cost for a symmetric rank profile
/// (r_k = r1, r_jk = r2, r_123 = r3): max{3·r1/2 + 3·(r3 - r2)/4, r3}.
Rational symmetric_min_total(size_t r1, size_t r2, size_t r3);

}  // namespace lcqmac
