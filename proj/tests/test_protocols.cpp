#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lcqmac/nsum_box.hpp"
#include "lcqmac/protocols.hpp"

using namespace lcqmac;

namespace {

Rational q(long num, long den = 1) { return make_rational(num, den); }

NVector toyex1_n() { return NVector{1, 0, 0, 0, 1, 0, 0, 0}; }
NVector toyex3_n() { return NVector{1, 0, 0, 0, 0, 0, 0, 1}; }

NVector random_n(std::mt19937_64& rng, size_t hi) {
    std::uniform_int_distribution<size_t> dist(0, hi);
    return NVector{dist(rng), dist(rng), dist(rng), dist(rng),
                   dist(rng), dist(rng), dist(rng), dist(rng)};
}

bool has_reason(const AllocationTrace& trace, const std::string& prefix) {
    for (const auto& s : trace.steps)
        if (s.reason.rfind(prefix, 0) == 0) return true;
    return false;
}

}  // namespace

TEST_CASE("catalog matches the per-unit gadget accounting") {
    const auto& cat = catalog();
    for (int j = 0; j < kProtocolCount; ++j) {
        const ProtocolInfo& info = cat.info[j];
        CHECK(info.id == j + 1);
        // Amortized column times the unit's dimension count gives the
        // integral unit cost, which must match the executable gadget.
        GadgetShape shape = gadget_shape(GadgetKind{j + 1, false});
        for (int i = 0; i < 3; ++i) {
            Rational per_unit = cat.D[i][j] * info.dims_per_unit;
            CHECK(per_unit == q(info.unit_cost[i]));
            CHECK(info.unit_cost[i] == shape.qudits[i]);
        }
    }
    // Spot values: the three-way unit costs (2,2,2) for 4 dims.
    CHECK(cat.info[15].dims_per_unit == 4);
    CHECK(cat.info[15].unit_cost == std::array<int, 3>{2, 2, 2});
    CHECK(cat.D[0][15] == q(1, 2));
}

TEST_CASE("demand matrix columns match the covered blocks") {
    const auto& cat = catalog();
    for (int j = 0; j < kProtocolCount; ++j) {
        QVector col(8, q(0));
        for (DemandBlock b : cat.info[j].covers) col[static_cast<int>(b)] = 1;
        for (int i = 0; i < 8; ++i) CHECK(cat.E[i][j] == col[i]);
    }
}

TEST_CASE("allocate_lp worked examples") {
    auto a3 = allocate_lp(toyex3_n(), CostTuple{{q(1, 2), q(1, 2), q(3, 2)}});
    REQUIRE(a3.has_value());
    CHECK(a3->lambda[16 - 1] == 1);
    CHECK(a3->lambda[3 - 1] == 1);
    CHECK(allocation_feasible(*a3, toyex3_n(), CostTuple{{q(1, 2), q(1, 2), q(3, 2)}}));

    auto a1 = allocate_lp(toyex1_n(), CostTuple{{q(1), q(1), q(1)}});
    REQUIRE(a1.has_value());
    CHECK(a1->lambda[17 - 1] == 1);
    Rational total = 0;
    for (const auto& v : a1->lambda) total += v;
    CHECK(total == 1);

    auto zero = allocate_lp(NVector{}, CostTuple{{q(0), q(0), q(0)}});
    REQUIRE(zero.has_value());
    CHECK(*zero == Allocation{});
}

TEST_CASE("allocate_lp infeasible exactly outside the region") {
    std::mt19937_64 rng(127);
    std::uniform_int_distribution<long> num(0, 12);
    for (int trial = 0; trial < 25; ++trial) {
        NVector n = random_n(rng, 2);
        HPolyhedron region = region_standard(n);
        CostTuple budget{{q(num(rng), 2), q(num(rng), 2), q(num(rng), 2)}};
        bool inside = contains_point(region, budget.delta);
        auto lambda = allocate_lp(n, budget);
        CHECK(lambda.has_value() == inside);
        if (lambda) CHECK(allocation_feasible(*lambda, n, budget));
    }
}

TEST_CASE("allocate_im corner and mixture") {
    size_t n1 = 2, n2 = 3, n3 = 1;
    CostTuple corner{{q(1), q(3, 2), q(static_cast<long>(n1 + n2), 2) + q(1)}};
    Allocation a = allocate_im(n1, n2, n3, corner);
    CHECK(a.lambda[3 - 1] == q(1));
    CHECK(a.lambda[11 - 1] == q(2));
    CHECK(a.lambda[13 - 1] == q(3));
    NVector n;
    n.n1 = n1;
    n.n2 = n2;
    n.n3 = n3;
    CHECK(allocation_feasible(a, n, corner));

    Allocation zero = allocate_im(0, 0, 0, CostTuple{{q(0), q(0), q(0)}});
    CHECK(zero == Allocation{});

    // Equal-weight mixture: the three corners blend with weight 1/3 each.
    Allocation mix = allocate_im(2, 2, 2, CostTuple{{q(3), q(3), q(3)}});
    NVector n222;
    n222.n1 = n222.n2 = n222.n3 = 2;
    CHECK(allocation_feasible(mix, n222, CostTuple{{q(3), q(3), q(3)}}));
    CHECK(mix.lambda[1 - 1] == q(2, 3));
    CHECK(mix.lambda[2 - 1] == q(2, 3));
    CHECK(mix.lambda[3 - 1] == q(2, 3));

    CHECK_THROWS_AS(allocate_im(2, 0, 0, CostTuple{{q(1, 2), q(0), q(0)}}), HypothesisViolated);
}

TEST_CASE("case-I o-pair split solves the 3x3 system") {
    Rational no_prime = q(2);
    std::array<Rational, 3> a{q(0), q(0), q(1)};  // sums to no'/2
    auto lam = detail::case1_opair_split(no_prime, a);
    CHECK(lam[0] + lam[1] + lam[2] == no_prime);
    // Replay through the coefficient matrix.
    CHECK(lam[0] + lam[1] / 2 + lam[2] / 2 == no_prime / 2 + a[0]);
    CHECK(lam[0] / 2 + lam[1] + lam[2] / 2 == no_prime / 2 + a[1]);
    CHECK(lam[0] / 2 + lam[1] / 2 + lam[2] == no_prime / 2 + a[2]);
    CHECK(lam == std::array<Rational, 3>{q(0), q(0), q(2)});
}

TEST_CASE("constructive allocation on the coupled-demand fixture") {
    // n123 = 1, no = 3: step 2 imports one P17 unit, the leftover two o-pair
    // dimensions ride on P9 at the (2,2,3) corner.
    NVector n;
    n.n123 = 1;
    n.no = 3;
    CostTuple budget{{q(2), q(2), q(3)}};
    auto [lambda, trace] = allocate_constructive(n, budget);
    CHECK(allocation_feasible(lambda, n, budget));
    CHECK_FALSE(has_reason(trace, "lp-fallback"));
    CHECK(trace.scalars.at("ntilde") == q(1));
    CHECK(trace.scalars.at("no_prime") == q(2));
    CHECK(lambda.lambda[17 - 1] == q(1));
    CHECK(lambda.lambda[9 - 1] == q(2));
    CHECK(trace.replay() == lambda);
}

TEST_CASE("constructive allocation follows the case-II path") {
    NVector n = toyex3_n();
    CostTuple budget{{q(1, 2), q(1), q(1)}};
    auto [lambda, trace] = allocate_constructive(n, budget);
    CHECK(allocation_feasible(lambda, n, budget));
    CHECK_FALSE(has_reason(trace, "lp-fallback"));
    CHECK(trace.scalars.at("ntilde") == q(0));
    CHECK(trace.scalars.at("n123_prime") == q(1));
    CHECK(has_reason(trace, "II."));
    CHECK(trace.replay() == lambda);
}

TEST_CASE("constructive allocation rejects out-of-region budgets") {
    CHECK_THROWS_AS(allocate_constructive(toyex3_n(), CostTuple{{q(1, 2), q(1, 2), q(1)}}),
                    NotInRegion);
}

TEST_CASE("zero demand gives an empty trace") {
    auto [lambda, trace] = allocate_constructive(NVector{}, CostTuple{{q(0), q(0), q(0)}});
    CHECK(lambda == Allocation{});
    CHECK(trace.steps.empty());
}

TEST_CASE("constructive matches lp feasibility at region vertices") {
    std::mt19937_64 rng(131);
    int vertex_count = 0;
    for (int trial = 0; trial < 25 || vertex_count < 100; ++trial) {
        NVector n = random_n(rng, 2);
        HPolyhedron region = remove_redundant(region_standard(n));
        for (const auto& v : vertices_3d(region)) {
            ++vertex_count;
            CostTuple budget{v};
            auto lp = allocate_lp(n, budget);
            REQUIRE(lp.has_value());
            CHECK(allocation_feasible(*lp, n, budget));
            auto [lambda, trace] = allocate_constructive(n, budget);
            CHECK(allocation_feasible(lambda, n, budget));
            CHECK_FALSE(has_reason(trace, "lp-fallback"));
            CHECK(trace.replay() == lambda);
        }
        if (trial > 200) break;
    }
    CHECK(vertex_count >= 100);
}

TEST_CASE("restricted pairwise region") {
    // Coupled demands cost strictly more without the 3-sum box: 7/2 vs 3.
    HPolyhedron restricted = restricted_region_pairwise(toyex1_n());
    QVector ones{q(1), q(1), q(1)};
    LpResult lp = lp_solve(restricted, ones, LpSense::Minimize);
    REQUIRE(lp.status == LpStatus::Optimal);
    CHECK(lp.optimum == q(7, 2));
    LpResult full = lp_solve(region_standard(toyex1_n()), ones, LpSense::Minimize);
    CHECK(full.optimum == q(3));

    // Without coupled or three-way demands the restriction is vacuous.
    NVector plain;
    plain.n12 = 1;
    plain.n1 = 2;
    plain.n3 = 1;
    CHECK(poly_equal(restricted_region_pairwise(plain), region_standard(plain)).equal);

    HPolyhedron orthant;
    orthant.dim_hint = 3;
    for (int i = 0; i < 3; ++i) {
        QVector row(3, q(0));
        row[i] = 1;
        orthant.add_row(std::move(row), q(0));
    }
    CHECK(poly_equal(restricted_region_pairwise(NVector{}), orthant).equal);
}
