#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lcqmac/scheme.hpp"
#include "lcqmac/spec_io.hpp"

using namespace lcqmac;

namespace {

Rational q(long num, long den = 1) { return make_rational(num, den); }

FunctionSpec toyex1() {
    return spec_from_json(
        R"({"d":3,"V1":[[1,0],[0,1],[0,1]],"V2":[[1,0],[0,2],[0,0]],"V3":[[1,0],[0,0],[0,2]]})");
}
FunctionSpec toyex2() { return spec_from_json(R"({"d":3,"V1":[[1]],"V2":[[1]],"V3":[[1]]})"); }
FunctionSpec toyex3() {
    return spec_from_json(R"({"d":3,"V1":[[1],[0]],"V2":[[1],[0]],"V3":[[1,0],[0,1]]})");
}

FunctionSpec random_spec(std::mt19937_64& rng, uint32_t d, size_t max_m, size_t max_cols) {
    std::uniform_int_distribution<size_t> mdist(1, max_m);
    std::uniform_int_distribution<uint32_t> edist(0, d - 1);
    FunctionSpec s;
    s.d = d;
    size_t m = mdist(rng);
    for (int k = 0; k < 3; ++k) {
        std::uniform_int_distribution<size_t> cdist(1, std::min(m, max_cols));
        while (true) {
            size_t cols = cdist(rng);
            FpMatrix v(m, cols, d);
            for (size_t r = 0; r < m; ++r)
                for (size_t c = 0; c < cols; ++c) v(r, c) = edist(rng);
            if (rank_of(v) == cols) {
                s.V.push_back(std::move(v));
                break;
            }
        }
    }
    return s;
}

DataRealization sample_data(std::mt19937_64& rng, const FunctionSpec& spec, size_t L) {
    std::uniform_int_distribution<uint32_t> dist(0, spec.d - 1);
    DataRealization data;
    for (int k = 0; k < 3; ++k) {
        FpMatrix w(spec.V[k].cols(), L, spec.d);
        for (size_t r = 0; r < w.rows(); ++r)
            for (size_t c = 0; c < L; ++c) w(r, c) = dist(rng);
        data.W.push_back(std::move(w));
    }
    return data;
}

}  // namespace

TEST_CASE("compile the coupled-pair example at (1,1,1)") {
    Scheme s = compile_scheme(toyex1(), CostTuple{{q(1), q(1), q(1)}});
    CHECK(s.L == 1);
    REQUIRE(s.gadgets.size() == 1);
    CHECK(s.gadgets[0].kind == GadgetKind{17, false});
    CHECK(cost_of(s).delta == QVector{q(1), q(1), q(1)});

    VerifyMode mode;
    mode.exhaustive = true;
    VerifyOutcome out = verify_scheme(s, mode);
    CHECK(out.pass);
    CHECK(out.checked == 729);  // 3^6 realizations
}

TEST_CASE("compile the scalar three-way sum at (1/2,1/2,1/2)") {
    Scheme s = compile_scheme(toyex2(), CostTuple{{q(1, 2), q(1, 2), q(1, 2)}});
    CHECK(s.L == 2);
    REQUIRE(s.gadgets.size() == 1);
    CHECK(s.gadgets[0].kind == GadgetKind{16, true});  // ternary-packed 3-sum box
    CHECK(cost_of(s).delta == QVector{q(1, 2), q(1, 2), q(1, 2)});

    VerifyMode mode;
    mode.exhaustive = true;
    VerifyOutcome out = verify_scheme(s, mode);
    CHECK(out.pass);
    CHECK(out.checked == 729);  // 3^(3*2)
}

TEST_CASE("simulate the scalar sum pointwise") {
    Scheme s = compile_scheme(toyex2(), CostTuple{{q(1, 2), q(1, 2), q(1, 2)}});
    DataRealization data;
    data.W = {FpMatrix({{1, 2}}, 3), FpMatrix({{0, 1}}, 3), FpMatrix({{2, 2}}, 3)};
    FpMatrix out = simulate_scheme(s, data);
    REQUIRE(out.rows() == 1);
    REQUIRE(out.cols() == 2);
    CHECK(out(0, 0) == 0);  // 1+0+2
    CHECK(out(0, 1) == 2);  // 2+1+2
}

TEST_CASE("simulate the coupled pair pointwise") {
    Scheme s = compile_scheme(toyex1(), CostTuple{{q(1), q(1), q(1)}});
    DataRealization data;
    data.W = {FpMatrix({{1}, {1}}, 3), FpMatrix({{1}, {1}}, 3), FpMatrix({{1}, {1}}, 3)};
    FpMatrix out = simulate_scheme(s, data);
    CHECK(out(0, 0) == 0);  // 1+1+1
    CHECK(out(1, 0) == 0);  // 1+2
    CHECK(out(2, 0) == 0);  // 1+2

    DataRealization zero;
    zero.W = {FpMatrix(2, 1, 3), FpMatrix(2, 1, 3), FpMatrix(2, 1, 3)};
    CHECK(simulate_scheme(s, zero).is_zero());
}

TEST_CASE("toy example 3 verifies exhaustively at each vertex") {
    FunctionSpec spec = toyex3();
    std::vector<CostTuple> vertices = {{{q(1, 2), q(1, 2), q(3, 2)}},
                                       {{q(1, 2), q(1), q(1)}},
                                       {{q(1), q(1, 2), q(1)}}};
    for (const auto& budget : vertices) {
        Scheme s = compile_scheme(spec, budget);
        CHECK(s.L == 2);
        CostTuple cost = cost_of(s);
        for (int k = 0; k < 3; ++k) CHECK(cost.delta[k] <= budget.delta[k]);
        VerifyMode mode;
        mode.exhaustive = true;
        VerifyOutcome out = verify_scheme(s, mode);
        CHECK(out.pass);
        CHECK(out.checked == 6561);  // 3^(4*2)
    }
}

TEST_CASE("compile rejects budgets outside the region") {
    CHECK_THROWS_AS(compile_scheme(toyex3(), CostTuple{{q(1, 2), q(1, 2), q(1)}}), NotInRegion);
}

TEST_CASE("corrupted postprocess fails verification with a counterexample") {
    Scheme s = compile_scheme(toyex1(), CostTuple{{q(1), q(1), q(1)}});
    s.postprocess(1, 1) = (s.postprocess(1, 1) + 1) % 3;
    VerifyMode mode;
    mode.exhaustive = true;
    VerifyOutcome out = verify_scheme(s, mode);
    CHECK_FALSE(out.pass);
    REQUIRE(out.counterexample.has_value());
    CHECK_FALSE(simulate_scheme(s, *out.counterexample) ==
                direct_evaluate(s.spec, *out.counterexample));
}

TEST_CASE("exhaustive cap is enforced") {
    std::mt19937_64 cap_rng(7);
    FunctionSpec spec = random_spec(cap_rng, 3, 4, 3);
    VerifyMode mode;
    mode.exhaustive = true;
    mode.cap = 10;
    Scheme s = compile_scheme(spec, CostTuple{{q(4), q(4), q(4)}});
    CHECK_THROWS_AS(verify_scheme(s, mode), CapExceeded);
}

TEST_CASE("simulate is linear in the data") {
    std::mt19937_64 rng(307);
    for (int trial = 0; trial < 10; ++trial) {
        FunctionSpec spec = random_spec(rng, 3, 4, 3);
        HPolyhedron region = remove_redundant(region_theorem3(rank_profile(spec)));
        auto verts = vertices_3d(region);
        REQUIRE_FALSE(verts.empty());
        Scheme s = compile_scheme(spec, CostTuple{verts[trial % verts.size()]});
        for (int rep = 0; rep < 5; ++rep) {
            DataRealization a = sample_data(rng, spec, s.L);
            DataRealization b = sample_data(rng, spec, s.L);
            DataRealization sum;
            for (int k = 0; k < 3; ++k) sum.W.push_back(a.W[k] + b.W[k]);
            CHECK(simulate_scheme(s, sum) == simulate_scheme(s, a) + simulate_scheme(s, b));
        }
    }
}

TEST_CASE("every vertex of 30 random specs compiles and verifies") {
    std::mt19937_64 rng(311);
    for (int trial = 0; trial < 30; ++trial) {
        FunctionSpec spec = random_spec(rng, 3, 4, 3);
        HPolyhedron region = remove_redundant(region_theorem3(rank_profile(spec)));
        for (const auto& v : vertices_3d(region)) {
            CostTuple budget{v};
            Scheme s = compile_scheme(spec, budget);
            CostTuple cost = cost_of(s);
            for (int k = 0; k < 3; ++k) CHECK(cost.delta[k] <= budget.delta[k]);
            VerifyMode mode;
            mode.samples = 500;
            mode.seed = 1234 + trial;
            VerifyOutcome out = verify_scheme(s, mode);
            CHECK(out.pass);
        }
    }
}

TEST_CASE("scheme json round-trips and re-verifies") {
    Scheme s = compile_scheme(toyex3(), CostTuple{{q(1, 2), q(1, 2), q(3, 2)}});
    std::string text = scheme_to_json(s);
    Scheme back = scheme_from_json(text);
    CHECK(back.L == s.L);
    CHECK(back.gadgets.size() == s.gadgets.size());
    CHECK(back.postprocess == s.postprocess);
    CHECK(back.delta_exp == s.delta_exp);
    CHECK(scheme_to_json(back) == text);
    VerifyMode mode;
    mode.exhaustive = true;
    CHECK(verify_scheme(back, mode).pass);
}
