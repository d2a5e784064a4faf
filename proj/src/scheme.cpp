#include "lcqmac/scheme.hpp"

#include <json.hpp>

#include <algorithm>
#include <numeric>
#include <random>

#include "lcqmac/standard_form.hpp"

namespace lcqmac {

namespace {

enum Block : int { B3Way = 0, B12, B13, B23, BOPair, BS1, BS2, BS3, kBlockCount };

struct BlockLayout {
    std::array<size_t, kBlockCount> count{};  // demand dims per instance

    /// Offsets of each transmitter's data blocks inside R_k W_k.
    /// Order per transmitter: (123, 12|13, 13|23, o, single).
    std::array<size_t, 3> m_k{};
    std::array<std::array<long, kBlockCount>, 3> source_offset{};

    explicit BlockLayout(const NVector& n) {
        count = {n.n123, n.n12, n.n13, n.n23, n.no, n.n1, n.n2, n.n3};
        for (auto& row : source_offset) row.fill(-1);
        // Alice1: [A123, A12, A13, Ao, A1]
        source_offset[0][B3Way] = 0;
        source_offset[0][B12] = static_cast<long>(n.n123);
        source_offset[0][B13] = static_cast<long>(n.n123 + n.n12);
        source_offset[0][BOPair] = static_cast<long>(n.n123 + n.n12 + n.n13);
        source_offset[0][BS1] = static_cast<long>(n.n123 + n.n12 + n.n13 + n.no);
        m_k[0] = n.n123 + n.n12 + n.n13 + n.no + n.n1;
        // Alice2: [B123, B12, B23, Bo, B2]
        source_offset[1][B3Way] = 0;
        source_offset[1][B12] = static_cast<long>(n.n123);
        source_offset[1][B23] = static_cast<long>(n.n123 + n.n12);
        source_offset[1][BOPair] = static_cast<long>(n.n123 + n.n12 + n.n23);
        source_offset[1][BS2] = static_cast<long>(n.n123 + n.n12 + n.n23 + n.no);
        m_k[1] = n.n123 + n.n12 + n.n23 + n.no + n.n2;
        // Alice3: [C123, C13, C23, Co, C3]
        source_offset[2][B3Way] = 0;
        source_offset[2][B13] = static_cast<long>(n.n123);
        source_offset[2][B23] = static_cast<long>(n.n123 + n.n13);
        source_offset[2][BOPair] = static_cast<long>(n.n123 + n.n13 + n.n23);
        source_offset[2][BS3] = static_cast<long>(n.n123 + n.n13 + n.n23 + n.no);
        m_k[2] = n.n123 + n.n13 + n.n23 + n.no + n.n3;
    }

    /// Demand-vector layout per instance: the o-pair expands into two
    /// consecutive blocks (A_o+B_o then A_o+C_o).
    size_t demand_width() const {
        return count[B3Way] + count[B12] + count[B13] + count[B23] + 2 * count[BOPair] +
               count[BS1] + count[BS2] + count[BS3];
    }
    size_t demand_offset(int block, bool o_second = false) const {
        size_t off = 0;
        for (int b = 0; b < block; ++b) off += (b == BOPair ? 2 : 1) * count[b];
        if (block == BOPair && o_second) off += count[BOPair];
        return off;
    }
};

/// A demand coordinate: (block, instance, dim), or unassigned padding.
struct Slot {
    int block = -1;
    size_t instance = 0;
    size_t dim = 0;
    bool assigned = false;
};

class DemandQueues {
  public:
    DemandQueues(const BlockLayout& layout, size_t L) : layout_(layout), L_(L) { next_.fill(0); }

    Slot take(int block) {
        Slot s;
        size_t per_instance = layout_.count[block];
        size_t total = per_instance * L_;
        if (next_[block] >= total) return s;  // exhausted: padding
        size_t idx = next_[block]++;
        s.block = block;
        s.instance = idx / per_instance;
        s.dim = idx % per_instance;
        s.assigned = true;
        return s;
    }

    bool fully_assigned() const {
        for (int b = 0; b < kBlockCount; ++b)
            if (next_[b] < layout_.count[b] * L_) return false;
        return true;
    }

  private:
    BlockLayout layout_;
    size_t L_;
    std::array<size_t, kBlockCount> next_{};
};

long source_index(const BlockLayout& layout, int transmitter, int block, const Slot& slot) {
    if (!slot.assigned) return -1;
    long off = layout.source_offset[transmitter][block];
    if (off < 0) throw ShapeMismatch("transmitter has no data for this block");
    return static_cast<long>(slot.instance) * static_cast<long>(layout.m_k[transmitter]) + off +
           static_cast<long>(slot.dim);
}

struct OutputTarget {
    Slot slot;
    bool o_second = false;  // for the o-pair: targets the A_o+C_o half
};

/// Builds one gadget unit: wiring per transmitter and the demand coordinate
/// each output feeds. Unassigned outputs are padding.
GadgetInstance make_unit(const GadgetKind& kind, const BlockLayout& layout, DemandQueues& queues,
                         std::vector<OutputTarget>& targets) {
    GadgetInstance unit;
    unit.kind = kind;
    GadgetShape shape = gadget_shape(kind);
    for (int k = 0; k < 3; ++k) unit.wiring[k].assign(shape.inputs[k], -1);
    targets.assign(shape.outputs, OutputTarget{});

    auto wire_all = [&](int block, const Slot& s, std::array<int, 3> positions) {
        for (int k = 0; k < 3; ++k)
            if (positions[k] >= 0) unit.wiring[k][positions[k]] = source_index(layout, k, block, s);
    };

    const int p = kind.protocol;
    if (kind.dense3 || p == 16) {
        size_t dims = kind.dense3 ? 2 : 4;
        for (size_t dim = 0; dim < dims; ++dim) {
            Slot s = queues.take(B3Way);
            wire_all(B3Way, s, {static_cast<int>(dim), static_cast<int>(dim), static_cast<int>(dim)});
            targets[dim].slot = s;
        }
    } else if (p >= 1 && p <= 3) {
        Slot s = queues.take(BS1 + (p - 1));
        std::array<int, 3> pos{-1, -1, -1};
        pos[p - 1] = 0;
        wire_all(BS1 + (p - 1), s, pos);
        targets[0].slot = s;
    } else if (p >= 4 && p <= 6) {
        int block = B12 + (p - 4);
        std::array<int, 2> members = p == 4 ? std::array<int, 2>{0, 1}
                                   : p == 5 ? std::array<int, 2>{0, 2}
                                            : std::array<int, 2>{1, 2};
        for (size_t dim = 0; dim < 2; ++dim) {
            Slot s = queues.take(block);
            std::array<int, 3> pos{-1, -1, -1};
            pos[members[0]] = static_cast<int>(dim);
            pos[members[1]] = static_cast<int>(dim);
            wire_all(block, s, pos);
            targets[dim].slot = s;
        }
    } else if (p >= 7 && p <= 9) {
        // Outputs: [AB_0, AC_0, AB_1, AC_1] for o-dims 0, 1.
        for (size_t dim = 0; dim < 2; ++dim) {
            Slot s = queues.take(BOPair);
            wire_all(BOPair, s, {static_cast<int>(dim), static_cast<int>(dim), static_cast<int>(dim)});
            targets[2 * dim] = {s, false};
            targets[2 * dim + 1] = {s, true};
        }
    } else if (p >= 10 && p <= 15) {
        static const int data_of[6] = {0, 0, 1, 1, 2, 2};
        int data = data_of[p - 10];
        int block = BS1 + data;
        for (size_t dim = 0; dim < 2; ++dim) {
            Slot s = queues.take(block);
            std::array<int, 3> pos{-1, -1, -1};
            pos[data] = static_cast<int>(dim);
            wire_all(block, s, pos);
            targets[dim].slot = s;
        }
    } else if (p == 17) {
        Slot t = queues.take(B3Way);
        wire_all(B3Way, t, {0, 0, 0});
        targets[0].slot = t;
        Slot o = queues.take(BOPair);
        wire_all(BOPair, o, {1, 1, 1});
        targets[1] = {o, false};
        targets[2] = {o, true};
    } else if (p >= 18 && p <= 20) {
        Slot t = queues.take(B3Way);
        wire_all(B3Way, t, {0, 0, 0});
        targets[0].slot = t;
        std::array<int, 2> singles = p == 18 ? std::array<int, 2>{0, 1}
                                   : p == 19 ? std::array<int, 2>{0, 2}
                                             : std::array<int, 2>{1, 2};
        for (int which = 0; which < 2; ++which) {
            int tr = singles[which];
            Slot s = queues.take(BS1 + tr);
            std::array<int, 3> pos{-1, -1, -1};
            pos[tr] = 1;
            wire_all(BS1 + tr, s, pos);
            targets[1 + which].slot = s;
        }
    } else {
        throw BadArity("make_unit: unknown protocol");
    }
    return unit;
}

long lcm_long(long a, long b) { return std::lcm(a, b); }

std::vector<long> integral_dims(const Allocation& lambda, size_t L) {
    std::vector<long> dims(kProtocolCount, 0);
    for (int j = 0; j < kProtocolCount; ++j) {
        Rational scaled = lambda.lambda[j] * Rational(static_cast<long>(L));
        if (scaled.get_den() != 1) return {};
        if (!scaled.get_num().fits_slong_p())
            throw ShapeMismatch("compile: protocol dimension count overflow");
        dims[j] = scaled.get_num().get_si();
    }
    return dims;
}

uint32_t symbol_at(const FpMatrix& std_data, long index, size_t m_k) {
    if (index < 0) return 0;
    size_t instance = static_cast<size_t>(index) / m_k;
    size_t coord = static_cast<size_t>(index) % m_k;
    return std_data(coord, instance);
}

}  // namespace

size_t Scheme::total_outputs() const {
    size_t total = 0;
    for (const auto& g : gadgets) total += gadget_shape(g.kind).outputs;
    return total;
}

Scheme compile_scheme(const FunctionSpec& spec, const CostTuple& budget) {
    if (spec.K() != 3) throw DimensionMismatch("compile: needs K = 3");
    if (budget.delta.size() != 3) throw DimensionMismatch("compile: budget length != 3");
    RankProfile rp = rank_profile(spec);
    HPolyhedron region = region_theorem3(rp);
    if (!contains_point(region, budget.delta))
        throw NotInRegion("compile: budget outside the cost region");

    StandardForm sf = decompose(spec);
    const NVector& n = sf.n;
    auto lambda = allocate_lp(n, budget);
    if (!lambda) throw NotInRegion("compile: no protocol allocation within budget");

    const bool dense3 = spec.d == 3;
    // Demand dimensions one unit yields, per protocol.
    std::array<long, kProtocolCount> unit_dims;
    for (int j = 0; j < kProtocolCount; ++j)
        unit_dims[j] = catalog().info[j].dims_per_unit;
    if (dense3) unit_dims[16 - 1] = 2;

    // Batch size: the smallest multiple of the allocation denominators that
    // also makes every used protocol's dimension count a unit multiple.
    long base = 1;
    for (int j = 0; j < kProtocolCount; ++j) {
        const mpz_class& den = lambda->lambda[j].get_den();
        if (!den.fits_slong_p()) throw ShapeMismatch("compile: allocation denominator overflow");
        base = lcm_long(base, den.get_si());
    }
    size_t L = 0;
    for (long mult : {1L, 2L, 4L}) {
        size_t cand = static_cast<size_t>(base * mult);
        auto dims = integral_dims(*lambda, cand);
        if (dims.empty()) continue;
        bool ok = true;
        for (int j = 0; j < kProtocolCount; ++j)
            if (dims[j] % unit_dims[j] != 0) {
                ok = false;
                break;
            }
        if (ok) {
            L = cand;
            break;
        }
    }
    if (L == 0) throw ShapeMismatch("compile: no admissible batch size");  // unreachable

    Scheme scheme;
    scheme.spec = spec;
    scheme.spec.validate();
    scheme.L = L;
    scheme.R = {sf.R1, sf.R2, sf.R3};

    BlockLayout layout(n);
    DemandQueues queues(layout, L);
    std::vector<long> dims = integral_dims(*lambda, L);
    std::vector<std::vector<OutputTarget>> all_targets;
    for (int j = 0; j < kProtocolCount; ++j) {
        if (dims[j] == 0) continue;
        GadgetKind kind{j + 1, dense3 && j + 1 == 16};
        long units = dims[j] / unit_dims[j];
        for (long u = 0; u < units; ++u) {
            std::vector<OutputTarget> targets;
            scheme.gadgets.push_back(make_unit(kind, layout, queues, targets));
            all_targets.push_back(std::move(targets));
            GadgetShape shape = gadget_shape(kind);
            for (int k = 0; k < 3; ++k) scheme.delta_exp[k] += shape.qudits[k];
        }
    }
    if (!queues.fully_assigned())
        throw ShapeMismatch("compile: allocation does not cover all demands");  // unreachable

    // Receiver postprocessing: route each assigned gadget output through the
    // matching column block of the receiver basis.
    const size_t m = spec.m();
    FpMatrix U = sf.receiver_basis();
    size_t total_outputs = 0;
    for (const auto& t : all_targets) total_outputs += t.size();
    FpMatrix post(m * L, total_outputs, spec.d);
    size_t out_base = 0;
    for (const auto& targets : all_targets) {
        for (size_t o = 0; o < targets.size(); ++o) {
            const OutputTarget& target = targets[o];
            if (!target.slot.assigned) continue;
            size_t ucol = layout.demand_offset(target.slot.block, target.o_second) + target.slot.dim;
            for (size_t r = 0; r < m; ++r)
                post(target.slot.instance * m + r, out_base + o) = U(r, ucol);
        }
        out_base += targets.size();
    }
    scheme.postprocess = post;

    CostTuple cost = cost_of(scheme);
    for (int k = 0; k < 3; ++k)
        if (cost.delta[k] > budget.delta[k])
            throw ShapeMismatch("compile: compiled cost exceeds budget");  // unreachable
    return scheme;
}

FpMatrix simulate_scheme(const Scheme& scheme, const DataRealization& data) {
    const FunctionSpec& spec = scheme.spec;
    if (data.W.size() != 3) throw ShapeMismatch("simulate: need 3 data streams");
    for (int k = 0; k < 3; ++k) {
        if (data.W[k].rows() != spec.V[k].cols() || data.W[k].cols() != scheme.L)
            throw ShapeMismatch("simulate: W_" + std::to_string(k + 1) + " has wrong shape");
        if (data.W[k].modulus() != spec.d) throw FieldError("simulate: data modulus mismatch");
    }
    std::array<FpMatrix, 3> std_data;
    std::array<size_t, 3> m_k;
    for (int k = 0; k < 3; ++k) {
        std_data[k] = scheme.R[k] * data.W[k];
        m_k[k] = std_data[k].rows();
    }
    std::vector<uint32_t> outputs;
    outputs.reserve(scheme.total_outputs());
    for (const auto& g : scheme.gadgets) {
        std::array<std::vector<uint32_t>, 3> in;
        for (int k = 0; k < 3; ++k) {
            in[k].reserve(g.wiring[k].size());
            for (long src : g.wiring[k]) in[k].push_back(symbol_at(std_data[k], src, m_k[k]));
        }
        GadgetRun run = gadget_execute(g.kind, spec.d, in);
        outputs.insert(outputs.end(), run.outputs.begin(), run.outputs.end());
    }
    FpMatrix out_col(outputs.size(), 1, spec.d);
    for (size_t i = 0; i < outputs.size(); ++i) out_col(i, 0) = outputs[i];
    FpMatrix flat = scheme.postprocess * out_col;
    const size_t m = spec.m();
    FpMatrix result(m, scheme.L, spec.d);
    for (size_t ell = 0; ell < scheme.L; ++ell)
        for (size_t r = 0; r < m; ++r) result(r, ell) = flat(ell * m + r, 0);
    return result;
}

FpMatrix direct_evaluate(const FunctionSpec& spec, const DataRealization& data) {
    FpMatrix acc = spec.V[0] * data.W[0];
    for (size_t k = 1; k < spec.K(); ++k) acc = acc + spec.V[k] * data.W[k];
    return acc;
}

VerifyOutcome verify_scheme(const Scheme& scheme, const VerifyMode& mode) {
    const FunctionSpec& spec = scheme.spec;
    const uint32_t d = spec.d;
    std::array<size_t, 3> m_k{spec.V[0].cols(), spec.V[1].cols(), spec.V[2].cols()};
    size_t symbols = (m_k[0] + m_k[1] + m_k[2]) * scheme.L;

    auto realize = [&](const std::vector<uint32_t>& digits) {
        DataRealization data;
        size_t at = 0;
        for (int k = 0; k < 3; ++k) {
            FpMatrix w(m_k[k], scheme.L, d);
            for (size_t c = 0; c < scheme.L; ++c)
                for (size_t r = 0; r < m_k[k]; ++r) w(r, c) = digits[at++];
            data.W.push_back(std::move(w));
        }
        return data;
    };

    VerifyOutcome outcome;
    if (mode.exhaustive) {
        // Overflow-safe cap check on d^symbols.
        uint64_t total = 1;
        for (size_t i = 0; i < symbols; ++i) {
            if (total > mode.cap / d)
                throw CapExceeded("verify_scheme: exhaustive space exceeds cap");
            total *= d;
        }
        std::vector<uint32_t> digits(symbols, 0);
        for (uint64_t it = 0; it < total; ++it) {
            DataRealization data = realize(digits);
            ++outcome.checked;
            if (!(simulate_scheme(scheme, data) == direct_evaluate(spec, data))) {
                outcome.pass = false;
                outcome.counterexample = std::move(data);
                return outcome;
            }
            size_t pos = 0;
            while (pos < symbols && ++digits[pos] == d) digits[pos++] = 0;
        }
        return outcome;
    }
    // Sampled mode: draw every realization up front from the seed, then
    // check concurrently. The reported counterexample is the lowest failing
    // sample index, so the outcome is independent of the thread count.
    std::mt19937_64 rng(mode.seed);
    std::uniform_int_distribution<uint32_t> dist(0, d - 1);
    std::vector<std::vector<uint32_t>> all_digits(mode.samples, std::vector<uint32_t>(symbols));
    for (auto& digits : all_digits)
        for (auto& v : digits) v = dist(rng);
    size_t first_fail = mode.samples;
#pragma omp parallel for schedule(static)
    for (size_t s = 0; s < mode.samples; ++s) {
        DataRealization data = realize(all_digits[s]);
        if (!(simulate_scheme(scheme, data) == direct_evaluate(spec, data))) {
#pragma omp critical
            first_fail = std::min(first_fail, s);
        }
    }
    outcome.checked = mode.samples;
    if (first_fail < mode.samples) {
        outcome.pass = false;
        outcome.counterexample = realize(all_digits[first_fail]);
    }
    return outcome;
}

CostTuple cost_of(const Scheme& scheme) {
    CostTuple cost;
    for (int k = 0; k < 3; ++k)
        cost.delta.push_back(make_rational(scheme.delta_exp[k], static_cast<long>(scheme.L)));
    return cost;
}

namespace {

nlohmann::json matrix_to_json(const FpMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (size_t r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

FpMatrix matrix_from_json(const nlohmann::json& j, uint32_t d, size_t cols_hint = 0) {
    std::vector<std::vector<int64_t>> raw;
    for (const auto& row : j) raw.push_back(row.get<std::vector<int64_t>>());
    if (raw.empty()) return FpMatrix(0, cols_hint, d);
    return FpMatrix(raw, d);
}

}  // namespace

std::string scheme_to_json(const Scheme& scheme) {
    nlohmann::json j;
    j["spec"]["d"] = scheme.spec.d;
    for (int k = 0; k < 3; ++k)
        j["spec"]["V" + std::to_string(k + 1)] = matrix_to_json(scheme.spec.V[k]);
    j["L"] = scheme.L;
    for (int k = 0; k < 3; ++k) j["R"][k] = matrix_to_json(scheme.R[k]);
    j["gadgets"] = nlohmann::json::array();
    for (const auto& g : scheme.gadgets) {
        nlohmann::json unit;
        unit["kind"] = g.kind.name();
        unit["wiring"] = {g.wiring[0], g.wiring[1], g.wiring[2]};
        j["gadgets"].push_back(std::move(unit));
    }
    j["postprocess"]["rows"] = scheme.postprocess.rows();
    j["postprocess"]["cols"] = scheme.postprocess.cols();
    j["postprocess"]["entries"] = matrix_to_json(scheme.postprocess);
    j["delta_exp"] = scheme.delta_exp;
    return j.dump();
}

Scheme scheme_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Scheme scheme;
    uint32_t d = j.at("spec").at("d").get<uint32_t>();
    scheme.spec.d = d;
    for (int k = 0; k < 3; ++k)
        scheme.spec.V.push_back(matrix_from_json(j.at("spec").at("V" + std::to_string(k + 1)), d));
    scheme.spec.validate();
    scheme.L = j.at("L").get<size_t>();
    for (int k = 0; k < 3; ++k) scheme.R[k] = matrix_from_json(j.at("R")[k], d);
    for (const auto& unit : j.at("gadgets")) {
        GadgetInstance g;
        g.kind = parse_gadget_kind(unit.at("kind").get<std::string>());
        for (int k = 0; k < 3; ++k) g.wiring[k] = unit.at("wiring")[k].get<std::vector<long>>();
        scheme.gadgets.push_back(std::move(g));
    }
    size_t rows = j.at("postprocess").at("rows").get<size_t>();
    size_t cols = j.at("postprocess").at("cols").get<size_t>();
    scheme.postprocess = FpMatrix(rows, cols, d);
    const auto& entries = j.at("postprocess").at("entries");
    for (size_t r = 0; r < rows; ++r)
        for (size_t c = 0; c < cols; ++c)
            scheme.postprocess(r, c) = entries[r][c].get<uint32_t>() % d;
    auto delta = j.at("delta_exp").get<std::vector<long>>();
    if (delta.size() != 3) throw ParseError("scheme: delta_exp needs 3 entries");
    std::copy(delta.begin(), delta.end(), scheme.delta_exp.begin());
    return scheme;
}

}  // namespace lcqmac
