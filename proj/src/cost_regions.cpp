#include "lcqmac/cost_regions.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace lcqmac {

const int kRegionCost[10][3] = {
    {2, 0, 0}, {0, 2, 0}, {0, 0, 2}, {1, 1, 1}, {2, 2, 2},
    {2, 2, 2}, {2, 2, 2}, {4, 2, 2}, {2, 4, 2}, {2, 2, 4},
};

const int kRegionRankGen[10][7] = {
    {1, 0, 0, 0, 0, 0, 0},
    {0, 1, 0, 0, 0, 0, 0},
    {0, 0, 1, 0, 0, 0, 0},
    {0, 0, 0, 0, 0, 0, 1},
    {1, 1, 1, -1, 0, 0, 1},
    {1, 1, 1, 0, -1, 0, 1},
    {1, 1, 1, 0, 0, -1, 1},
    {2, 1, 1, -1, -1, 0, 2},
    {1, 2, 1, -1, 0, -1, 2},
    {1, 1, 2, 0, -1, -1, 2},
};

const int kRegionStandardGen[10][8] = {
    {1, 1, 1, 0, 1, 1, 0, 0},
    {1, 1, 0, 1, 1, 0, 1, 0},
    {1, 0, 1, 1, 1, 0, 0, 1},
    {1, 1, 1, 1, 2, 1, 1, 1},
    {3, 2, 2, 2, 3, 2, 1, 1},
    {3, 2, 2, 2, 3, 1, 2, 1},
    {3, 2, 2, 2, 3, 1, 1, 2},
    {4, 3, 3, 2, 4, 2, 2, 2},
    {4, 3, 2, 3, 4, 2, 2, 2},
    {4, 2, 3, 3, 4, 2, 2, 2},
};

namespace {

QVector standard_rhs(const NVector& n) {
    auto arr = n.as_array();
    QVector rhs(10, Rational(0));
    for (int i = 0; i < 10; ++i) {
        Rational acc = 0;
        for (int j = 0; j < 8; ++j) acc += Rational(kRegionStandardGen[i][j]) * Rational(static_cast<long>(arr[j]));
        rhs[i] = acc;
    }
    return rhs;
}

QVector rank_rhs(const RankProfile& rp) {
    auto arr = rp.as_array();
    QVector rhs(10, Rational(0));
    for (int i = 0; i < 10; ++i) {
        Rational acc = 0;
        for (int j = 0; j < 7; ++j) acc += Rational(kRegionRankGen[i][j]) * Rational(static_cast<long>(arr[j]));
        rhs[i] = acc;
    }
    return rhs;
}

HPolyhedron ten_row_region(const QVector& rhs) {
    HPolyhedron out;
    out.dim_hint = 3;
    for (int i = 0; i < 10; ++i) {
        QVector coef(3);
        for (int j = 0; j < 3; ++j) coef[j] = kRegionCost[i][j];
        out.add_row(std::move(coef), rhs[i]);
    }
    return out;
}

std::string set_to_string(const std::vector<size_t>& members) {
    std::ostringstream out;
    out << '{';
    for (size_t i = 0; i < members.size(); ++i) {
        if (i) out << ',';
        out << members[i] + 1;
    }
    out << '}';
    return out.str();
}

std::string partition_to_string(const std::vector<std::vector<size_t>>& cells) {
    std::ostringstream out;
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) out << '|';
        out << set_to_string(cells[i]);
    }
    return out.str();
}

/// All set partitions of {0..K-1} via restricted growth strings.
std::vector<std::vector<std::vector<size_t>>> all_partitions(size_t K) {
    std::vector<std::vector<std::vector<size_t>>> out;
    std::vector<size_t> rgs(K, 0);
    while (true) {
        size_t cells = *std::max_element(rgs.begin(), rgs.end()) + 1;
        std::vector<std::vector<size_t>> part(cells);
        for (size_t i = 0; i < K; ++i) part[rgs[i]].push_back(i);
        out.push_back(std::move(part));
        // next restricted growth string
        size_t i = K;
        while (i-- > 1) {
            size_t cap = *std::max_element(rgs.begin(), rgs.begin() + static_cast<long>(i)) + 1;
            if (rgs[i] < cap) {
                ++rgs[i];
                std::fill(rgs.begin() + static_cast<long>(i) + 1, rgs.end(), 0);
                break;
            }
            if (i == 1) return out;
            rgs[i] = 0;
        }
        if (K == 1) return out;
    }
}

}  // namespace

QVector standard_rhs_aligned_to_rank_rows(const NVector& n) {
    QVector rhs = standard_rhs(n);
    std::swap(rhs[4], rhs[6]);
    return rhs;
}

bool valid_rank_profile(const RankProfile& rp, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    const long r1 = static_cast<long>(rp.r1), r2 = static_cast<long>(rp.r2), r3 = static_cast<long>(rp.r3);
    const long r12 = static_cast<long>(rp.r12), r13 = static_cast<long>(rp.r13),
               r23 = static_cast<long>(rp.r23), r123 = static_cast<long>(rp.r123);
    if (r12 < std::max(r1, r2) || r13 < std::max(r1, r3) || r23 < std::max(r2, r3))
        return fail("pair rank below single rank");
    if (r123 < std::max({r12, r13, r23})) return fail("triple rank below a pair rank");
    if (r12 > r1 + r2 || r13 > r1 + r3 || r23 > r2 + r3) return fail("pair rank above sum");
    if (r123 > std::min({r12 + r3, r13 + r2, r23 + r1})) return fail("triple rank above pair+single");
    // A nonnegative n-vector must exist: the identities fix everything except
    // n123, which ranges over [max(0, n123 - no), min of the pairwise slots].
    long diff = r1 + r2 + r3 - r12 - r13 - r23 + r123;  // n123 - no
    long slot12 = r1 + r2 - r12, slot13 = r1 + r3 - r13, slot23 = r2 + r3 - r23;
    long lo = std::max(0L, diff);
    long hi = std::min({slot12, slot13, slot23});
    if (lo > hi) return fail("no nonnegative standard-form dimension vector exists");
    return true;
}

HPolyhedron region_theorem3(const RankProfile& rp) {
    std::string why;
    if (!valid_rank_profile(rp, &why)) throw InvalidRankProfile("region_theorem3: " + why);
    return ten_row_region(rank_rhs(rp));
}

HPolyhedron region_standard(const NVector& n) { return ten_row_region(standard_rhs(n)); }

HPolyhedron BoundSet::to_polyhedron() const {
    HPolyhedron out;
    out.dim_hint = K;
    for (const auto& row : rows) out.add_row(row.coef, row.rhs);
    return out;
}

BoundSet converse_bounds_general(const FunctionSpec& spec) {
    spec.validate();
    const size_t K = spec.K();
    if (K > 16) throw DimensionMismatch("converse_bounds_general: K > 16 not supported");
    BoundSet out;
    out.K = K;

    auto rank_of_subset = [&](uint32_t mask) -> long {
        std::vector<FpMatrix> blocks;
        for (size_t k = 0; k < K; ++k)
            if (mask & (1u << k)) blocks.push_back(spec.V[k]);
        if (blocks.empty()) return 0;
        return static_cast<long>(rank_of(hstack(blocks)));
    };
    const uint32_t full = (1u << K) - 1;
    std::vector<long> r(full + 1, 0);
    for (uint32_t mask = 1; mask <= full; ++mask) r[mask] = rank_of_subset(mask);
    auto s_of = [&](uint32_t mask) { return r[full] - r[full & ~mask]; };

    std::map<std::pair<QVector, Rational>, bool> seen;
    auto emit = [&](QVector coef, Rational rhs, std::string tag) {
        normalize_row(coef, rhs);
        if (!seen.emplace(std::make_pair(coef, rhs), true).second) return;
        out.rows.push_back({std::move(coef), std::move(rhs), std::move(tag)});
    };

    // Total-download cut-set row.
    emit(QVector(K, Rational(1)), Rational(r[full]), "Thm1-Eq16");
    // Doubled subset rows.
    for (uint32_t mask = 1; mask <= full; ++mask) {
        QVector coef(K, Rational(0));
        std::vector<size_t> members;
        for (size_t k = 0; k < K; ++k)
            if (mask & (1u << k)) {
                coef[k] = 2;
                members.push_back(k);
            }
        emit(std::move(coef), Rational(r[mask]), "Thm1-Eq17(" + set_to_string(members) + ")");
    }
    // Partition-indexed rows.
    for (const auto& part : all_partitions(K)) {
        const size_t T = part.size();
        std::vector<uint32_t> masks(T, 0);
        std::vector<long> cell_rank(T, 0);
        long rank_sum = 0;
        for (size_t t = 0; t < T; ++t) {
            for (size_t k : part[t]) masks[t] |= (1u << k);
            cell_rank[t] = r[masks[t]];
            rank_sum += cell_rank[t];
        }
        std::string part_str = partition_to_string(part);
        for (size_t t = 0; t < T; ++t) {
            emit(QVector(K, Rational(2)), Rational(s_of(masks[t]) + rank_sum),
                 "Thm2-Eq21(" + part_str + "; K1=" + set_to_string(part[t]) + ")");
        }
        if (T < 2) continue;
        for (size_t t1 = 0; t1 < T; ++t1)
            for (size_t t2 = 0; t2 < T; ++t2) {
                if (t1 == t2) continue;
                QVector coef(K, Rational(4));
                for (size_t k : part[t1]) coef[k] = 2;
                for (size_t k : part[t2]) coef[k] = 2;
                long rhs = s_of(masks[t1]) + s_of(masks[t2]) + cell_rank[t1] + cell_rank[t2];
                for (size_t t = 0; t < T; ++t)
                    if (t != t1 && t != t2) rhs += 2 * cell_rank[t];
                emit(std::move(coef), Rational(rhs),
                     "Thm2-Eq22(" + part_str + "; K1=" + set_to_string(part[t1]) +
                         ", K2=" + set_to_string(part[t2]) + ")");
            }
    }
    return out;
}

CheckResult check_cost(const HPolyhedron& region, const CostTuple& cost) {
    if (cost.delta.size() != region.dim()) throw DimensionMismatch("check_cost: dimension mismatch");
    CheckResult res;
    size_t row = 0;
    if (!contains_point(region, cost.delta, &row)) {
        res.feasible = false;
        res.violated_row = row;
        res.row_coef = region.A[row];
        res.row_rhs = region.b[row];
    }
    return res;
}

Rational symmetric_min_total(size_t r1v, size_t r2v, size_t r3v) {
    RankProfile rp{r1v, r1v, r1v, r2v, r2v, r2v, r3v};
    const long r1 = static_cast<long>(r1v), r2 = static_cast<long>(r2v), r3 = static_cast<long>(r3v);
    if (!(r1 <= r2 && r2 <= r3 && r3 <= std::min(3 * r1, r1 + r2)) || !valid_rank_profile(rp))
        throw InvalidSymmetricProfile("symmetric_min_total: profile not realizable");
    Rational candidate = make_rational(3 * r1, 2) + make_rational(3, 4) * Rational(r3 - r2);
    return std::max(candidate, Rational(r3));
}

}  // namespace lcqmac
