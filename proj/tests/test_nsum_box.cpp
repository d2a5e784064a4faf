#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lcqmac/nsum_box.hpp"

#include "gadget_reference.hpp"

using namespace lcqmac;

namespace {

/// All q^n input tuples, little-endian odometer.
template <typename F>
void for_all_inputs(uint32_t q, size_t n, F&& body) {
    std::vector<uint32_t> digits(n, 0);
    while (true) {
        body(digits);
        size_t k = 0;
        while (k < n && ++digits[k] == q) digits[k++] = 0;
        if (k == n) break;
    }
}

uint32_t madd(uint32_t a, uint32_t b, uint32_t q) { return (a + b) % q; }

}  // namespace

TEST_CASE("sso verdicts for the worked matrices") {
    CHECK(check_sso(FpMatrix({{1, 1}, {0, 0}}, 3), FpMatrix({{0, 0}, {1, -1}}, 3)) ==
          SsoVerdict::Valid);
    CHECK(check_sso(FpMatrix({{1, 1, 1}, {0, 0, 0}, {0, 0, 0}}, 3),
                    FpMatrix({{0, 0, 0}, {1, -1, 0}, {1, 0, -1}}, 3)) == SsoVerdict::Valid);
    // The coupled pair written with field negations (2 = -1 over F_3).
    CHECK(check_sso(FpMatrix({{1, 1, 1}, {0, 0, 0}, {0, 0, 0}}, 3),
                    FpMatrix({{0, 0, 0}, {1, 2, 0}, {1, 0, 2}}, 3)) == SsoVerdict::Valid);
    // The K=4 wish list fails strong self-orthogonality.
    FpMatrix mx5({{1, 0, 0, 0}, {0, 1, 1, 1}, {0, 0, 0, 0}, {0, 0, 0, 0}}, 3);
    FpMatrix mz5({{0, 0, 0, 0}, {0, 0, 0, 0}, {1, 0, 0, 0}, {0, 1, 1, 1}}, 3);
    CHECK(check_sso(mx5, mz5) == SsoVerdict::NotSso);
    // Rank-deficient candidate.
    CHECK(check_sso(FpMatrix(2, 2, 3), FpMatrix({{0, 0}, {1, 0}}, 3)) == SsoVerdict::RankDeficient);
    CHECK_THROWS_AS(check_sso(FpMatrix(2, 2, 3), FpMatrix(3, 3, 3)), DimensionMismatch);
}

TEST_CASE("box_apply matches the displayed outputs") {
    TransferMatrix toy(FpMatrix({{1, 1, 1}, {0, 0, 0}, {0, 0, 0}}, 3),
                       FpMatrix({{0, 0, 0}, {1, 2, 0}, {1, 0, 2}}, 3));
    for_all_inputs(3, 6, [&](const std::vector<uint32_t>& v) {
        BoxState y = box_apply(toy, {0, 0, 0}, {v[0], v[1], v[2]}, {v[3], v[4], v[5]});
        CHECK(y[0] == (v[0] + v[1] + v[2]) % 3);
        CHECK(y[1] == (v[3] + 2 * v[4]) % 3);
        CHECK(y[2] == (v[3] + 2 * v[5]) % 3);
    });

    // Zero inputs leave the zero state.
    TransferMatrix b1 = box1(5);
    CHECK(box_apply(b1, {0, 0}, {0, 0}, {0, 0}) == BoxState{0, 0});

    BoxState y5 = box_apply(box2(5), {0, 0, 0}, {1, 1, 1}, {0, 0, 0});
    CHECK(y5 == BoxState{3, 0, 0});
}

TEST_CASE("box_apply additivity") {
    std::mt19937_64 rng(211);
    for (uint32_t q : {2u, 3u, 5u}) {
        TransferMatrix boxes[2] = {box1(q), box2(q)};
        std::uniform_int_distribution<uint32_t> dist(0, q - 1);
        for (const auto& box : boxes) {
            for (int trial = 0; trial < 10000; ++trial) {
                size_t n = box.N;
                auto rand_vec = [&] {
                    std::vector<uint32_t> v(n);
                    for (auto& x : v) x = dist(rng);
                    return v;
                };
                BoxState a = rand_vec();
                auto x1 = rand_vec(), z1 = rand_vec(), x2 = rand_vec(), z2 = rand_vec();
                BoxState via_two = box_apply(box, box_apply(box, a, x1, z1), x2, z2);
                std::vector<uint32_t> xs(n), zs(n);
                for (size_t i = 0; i < n; ++i) {
                    xs[i] = madd(x1[i], x2[i], q);
                    zs[i] = madd(z1[i], z2[i], q);
                }
                CHECK(via_two == box_apply(box, a, xs, zs));
            }
        }
    }
}

TEST_CASE("gadget worked examples") {
    // Three-way unit on all-zero inputs: four zero sums at cost (2,2,2).
    GadgetRun p16 = gadget_execute(GadgetKind{16, false}, 3,
                                   {std::vector<uint32_t>(4, 0), std::vector<uint32_t>(4, 0),
                                    std::vector<uint32_t>(4, 0)});
    CHECK(p16.outputs == std::vector<uint32_t>{0, 0, 0, 0});
    CHECK(p16.qudit_cost == std::array<int, 3>{2, 2, 2});

    // Coupled-pair unit with x = (1,1,1), z = (1,2,0).
    GadgetRun p17 = gadget_execute(GadgetKind{17, false}, 3, {{{1, 1}, {1, 2}, {1, 0}}});
    CHECK(p17.outputs == std::vector<uint32_t>{0, 0, 1});
    CHECK(p17.qudit_cost == std::array<int, 3>{1, 1, 1});

    // Superdense unit with helper entanglement from transmitter 2.
    GadgetRun p10 = gadget_execute(GadgetKind{10, false}, 3, {{{2, 1}, {}, {}}});
    CHECK(p10.outputs == std::vector<uint32_t>{2, 1});
    CHECK(p10.qudit_cost == std::array<int, 3>{1, 1, 0});

    CHECK_THROWS_AS(gadget_execute(GadgetKind{10, false}, 3, {{{2}, {}, {}}}), BadArity);
    CHECK_THROWS_AS(gadget_execute(GadgetKind{16, true}, 5, {{{1, 1}, {1, 1}, {1, 1}}}), BadArity);
}

TEST_CASE("gadget kind names round-trip") {
    for (int p = 1; p <= 20; ++p) {
        GadgetKind kind{p, false};
        CHECK(parse_gadget_kind(kind.name()) == kind);
    }
    GadgetKind dense{16, true};
    CHECK(dense.name() == "P16d3");
    CHECK(parse_gadget_kind("P16d3") == dense);
    CHECK_THROWS_AS(parse_gadget_kind("P21"), ParseError);
    CHECK_THROWS_AS(parse_gadget_kind("P4d3"), ParseError);
}

// Exhaustive F_3 sweep of every protocol unit (and the ternary-packed
// variant): receiver outputs must be the advertised linear function of the
// raw inputs for every input combination.
TEST_CASE("gadget exhaustive input sweeps over F_3") {
    const uint32_t q = 3;
    for (int proto = 1; proto <= 21; ++proto) {
        GadgetKind kind = proto <= 20 ? GadgetKind{proto, false} : GadgetKind{16, true};
        GadgetShape shape = gadget_shape(kind);
        size_t arity = shape.inputs[0] + shape.inputs[1] + shape.inputs[2];
        for_all_inputs(q, arity, [&](const std::vector<uint32_t>& flat) {
            std::array<std::vector<uint32_t>, 3> in;
            size_t at = 0;
            for (int k = 0; k < 3; ++k)
                for (size_t i = 0; i < shape.inputs[k]; ++i) in[k].push_back(flat[at++]);
            GadgetRun run = gadget_execute(kind, q, in);
            REQUIRE(run.outputs.size() == shape.outputs);
            CHECK(run.outputs == testing::expected_gadget_outputs(kind, q, in));
        });
    }
}

// The sweep also holds over larger prime fields for the generic units.
TEST_CASE("gadget sweeps over F_5 for the box-2 units") {
    const uint32_t q = 5;
    for (int proto : {17, 18, 19, 20}) {
        GadgetKind kind{proto, false};
        GadgetShape shape = gadget_shape(kind);
        size_t arity = shape.inputs[0] + shape.inputs[1] + shape.inputs[2];
        for_all_inputs(q, arity, [&](const std::vector<uint32_t>& flat) {
            std::array<std::vector<uint32_t>, 3> in;
            size_t at = 0;
            for (int k = 0; k < 3; ++k)
                for (size_t i = 0; i < shape.inputs[k]; ++i) in[k].push_back(flat[at++]);
            CHECK(gadget_execute(kind, q, in).outputs ==
                  testing::expected_gadget_outputs(kind, q, in));
        });
    }
}

TEST_CASE("qudit accounting matches the catalog units") {
    for (int proto = 1; proto <= 20; ++proto) {
        GadgetShape shape = gadget_shape(GadgetKind{proto, false});
        int total = shape.qudits[0] + shape.qudits[1] + shape.qudits[2];
        // Box uses times two qudits per 2-sum box, three per 3-sum box; TQC
        // units send exactly one.
        if (proto <= 3) CHECK(total == 1);
        if (proto >= 4 && proto <= 15) CHECK(total % 2 == 0);
        if (proto >= 17) CHECK(total == 3);
    }
}
