// Command-line surface for the cost-region library: regions, bounds,
// decompositions, allocations, compiled schemes and their verification.
//
// Exit codes: 0 success; 1 infeasible or invalid input; 2 internal
// verification failure.
#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

#include "lcqmac/bell.hpp"
#include "lcqmac/cost_regions.hpp"
#include "lcqmac/protocols.hpp"
#include "lcqmac/scheme.hpp"
#include "lcqmac/spec_io.hpp"

using namespace lcqmac;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitInternal = 2;

bool g_human = false;

std::string render(const Rational& v) {
    if (!g_human) return to_string(v);
    return std::to_string(v.get_d());
}

json vector_json(const QVector& v) {
    json out = json::array();
    for (const auto& x : v) out.push_back(render(x));
    return out;
}

json region_json(const HPolyhedron& poly) {
    json rows = json::array();
    for (size_t i = 0; i < poly.row_count(); ++i)
        rows.push_back({{"coef", vector_json(poly.A[i])}, {"rhs", render(poly.b[i])}});
    return rows;
}

json matrix_json(const FpMatrix& m) {
    json rows = json::array();
    for (size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

void emit(const json& payload) { std::cout << payload.dump() << "\n"; }

CostTuple parse_cost(const std::string& text) {
    CostTuple cost;
    cost.delta = parse_rational_csv(text);
    if (cost.delta.size() != 3) throw ParseError("--cost expects three comma-separated rationals");
    for (const auto& v : cost.delta)
        if (v < 0) throw ParseError("--cost entries must be nonnegative");
    return cost;
}

/// Coordinate directions are recession directions iff their cost column is
/// nonnegative; for the emitted regions that is always the case.
json rays_json(const HPolyhedron& poly) {
    json rays = json::array();
    for (size_t j = 0; j < poly.dim(); ++j) {
        bool recession = true;
        for (size_t i = 0; i < poly.row_count() && recession; ++i) recession = poly.A[i][j] >= 0;
        if (recession) {
            json ray = json::array();
            for (size_t k = 0; k < poly.dim(); ++k) ray.push_back(k == j ? 1 : 0);
            rays.push_back(std::move(ray));
        }
    }
    return rays;
}

int cmd_ranks(const std::string& spec_path) {
    FunctionSpec spec = load_spec_file(spec_path);
    RankProfile rp = rank_profile(spec);
    emit({{"r1", rp.r1},
          {"r2", rp.r2},
          {"r3", rp.r3},
          {"r12", rp.r12},
          {"r13", rp.r13},
          {"r23", rp.r23},
          {"r123", rp.r123}});
    return kExitOk;
}

int cmd_region(const std::string& spec_path, bool vertices, bool standard, bool pairwise_only) {
    FunctionSpec spec = load_spec_file(spec_path);
    HPolyhedron region;
    if (pairwise_only || standard) {
        NVector n = n_vector(decompose(spec));
        region = pairwise_only ? restricted_region_pairwise(n) : region_standard(n);
    } else {
        region = region_theorem3(rank_profile(spec));
    }
    HPolyhedron minimal = remove_redundant(region);
    json out{{"rows", region_json(minimal)}, {"rays", rays_json(minimal)}};
    if (vertices) {
        json verts = json::array();
        for (const auto& v : vertices_3d(minimal)) verts.push_back(vector_json(v));
        out["vertices"] = verts;
    }
    emit(out);
    return kExitOk;
}

int cmd_check(const std::string& spec_path, const std::string& cost_text) {
    FunctionSpec spec = load_spec_file(spec_path);
    CostTuple cost = parse_cost(cost_text);
    HPolyhedron region = remove_redundant(region_theorem3(rank_profile(spec)));
    CheckResult res = check_cost(region, cost);
    if (res.feasible) {
        emit({{"feasible", true}});
        return kExitOk;
    }
    emit({{"feasible", false},
          {"violated_row", {{"coef", vector_json(res.row_coef)}, {"rhs", render(res.row_rhs)}}}});
    return kExitInfeasible;
}

int cmd_decompose(const std::string& spec_path) {
    FunctionSpec spec = load_spec_file(spec_path);
    StandardForm sf = decompose(spec);
    VerifyResult check = verify_standard_form(spec, sf);
    json out;
    out["n"] = {{"n123", sf.n.n123}, {"n12", sf.n.n12}, {"n13", sf.n.n13}, {"n23", sf.n.n23},
                {"no", sf.n.no},     {"n1", sf.n.n1},   {"n2", sf.n.n2},   {"n3", sf.n.n3}};
    out["U123"] = matrix_json(sf.U123);
    out["U12"] = matrix_json(sf.U12);
    out["U13"] = matrix_json(sf.U13);
    out["U23"] = matrix_json(sf.U23);
    out["U_1_23"] = matrix_json(sf.U_1_23);
    out["U_2_13"] = matrix_json(sf.U_2_13);
    out["U_3_12"] = matrix_json(sf.U_3_12);
    out["U1"] = matrix_json(sf.U1);
    out["U2"] = matrix_json(sf.U2);
    out["U3"] = matrix_json(sf.U3);
    out["R1"] = matrix_json(sf.R1);
    out["R2"] = matrix_json(sf.R2);
    out["R3"] = matrix_json(sf.R3);
    out["verified"] = check.ok;
    emit(out);
    return check.ok ? kExitOk : kExitInternal;
}

int cmd_allocate(const std::string& spec_path, const std::string& cost_text, bool constructive) {
    FunctionSpec spec = load_spec_file(spec_path);
    CostTuple cost = parse_cost(cost_text);
    NVector n = n_vector(decompose(spec));
    if (constructive) {
        std::pair<Allocation, AllocationTrace> res;
        try {
            res = allocate_constructive(n, cost);
        } catch (const NotInRegion&) {
            emit({{"feasible", false}});
            return kExitInfeasible;
        }
        json steps = json::array();
        for (const auto& s : res.second.steps)
            steps.push_back(
                {{"protocol", "P" + std::to_string(s.protocol)}, {"amount", render(s.amount)},
                 {"reason", s.reason}});
        json scalars = json::object();
        for (const auto& [key, value] : res.second.scalars) scalars[key] = render(value);
        emit({{"feasible", true},
              {"lambda", vector_json(res.first.lambda)},
              {"trace", steps},
              {"scalars", scalars}});
        return kExitOk;
    }
    auto lambda = allocate_lp(n, cost);
    if (!lambda) {
        emit({{"feasible", false}});
        return kExitInfeasible;
    }
    emit({{"feasible", true}, {"lambda", vector_json(lambda->lambda)}});
    return kExitOk;
}

int cmd_compile(const std::string& spec_path, const std::string& cost_text,
                const std::string& out_path) {
    FunctionSpec spec = load_spec_file(spec_path);
    CostTuple cost = parse_cost(cost_text);
    Scheme scheme;
    try {
        scheme = compile_scheme(spec, cost);
    } catch (const NotInRegion&) {
        emit({{"compiled", false}, {"reason", "budget outside cost region"}});
        return kExitInfeasible;
    }
    std::ofstream out(out_path);
    if (!out) throw ParseError("cannot write scheme file: " + out_path);
    out << scheme_to_json(scheme) << "\n";
    emit({{"compiled", true},
          {"L", scheme.L},
          {"gadgets", scheme.gadgets.size()},
          {"delta_exp", scheme.delta_exp},
          {"cost", vector_json(cost_of(scheme).delta)}});
    return kExitOk;
}

int cmd_simulate(const std::string& scheme_path, bool exhaustive, size_t samples, uint64_t seed) {
    std::ifstream in(scheme_path);
    if (!in) throw ParseError("cannot open scheme file: " + scheme_path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    Scheme scheme = scheme_from_json(text);
    VerifyMode mode;
    mode.exhaustive = exhaustive;
    mode.samples = samples;
    mode.seed = seed;
    VerifyOutcome outcome = verify_scheme(scheme, mode);
    json out{{"pass", outcome.pass}, {"checked", outcome.checked}};
    if (!outcome.pass && outcome.counterexample) {
        json w = json::array();
        for (const auto& wk : outcome.counterexample->W) w.push_back(matrix_json(wk));
        out["counterexample"] = w;
    }
    emit(out);
    return outcome.pass ? kExitOk : kExitInternal;
}

int cmd_bounds(const std::string& spec_path) {
    FunctionSpec spec = load_spec_file(spec_path);
    BoundSet bounds = converse_bounds_general(spec);
    for (const auto& row : bounds.rows)
        emit({{"coef", vector_json(row.coef)}, {"rhs", render(row.rhs)}, {"tag", row.tag}});
    return kExitOk;
}

int cmd_fm_verify(const std::string& spec_path) {
    FunctionSpec spec = load_spec_file(spec_path);
    NVector n = n_vector(decompose(spec));
    HPolyhedron sys = usage_system(n);
    std::set<size_t> drop;
    for (size_t j = 3; j < sys.dim(); ++j) drop.insert(j);
    HPolyhedron projected = fm_eliminate(sys, drop);
    auto res = poly_equal(projected, region_standard(n));
    emit({{"equal", res.equal}, {"projected_rows", projected.row_count()}});
    return res.equal ? kExitOk : kExitInternal;
}

int cmd_sso(const std::string& mx_text, const std::string& mz_text, uint32_t q) {
    FpMatrix mx = matrix_from_rows_string(mx_text, q);
    FpMatrix mz = matrix_from_rows_string(mz_text, q);
    SsoVerdict verdict = check_sso(mx, mz);
    json out{{"valid", verdict == SsoVerdict::Valid}};
    if (verdict == SsoVerdict::RankDeficient) out["reason"] = "RankDeficient";
    if (verdict == SsoVerdict::NotSso) out["reason"] = "NotSSO";
    emit(out);
    return verdict == SsoVerdict::Valid ? kExitOk : kExitInfeasible;
}

int cmd_symmetric(long r1, long r2, long r3) {
    Rational value = symmetric_min_total(r1, r2, r3);
    emit({{"min_total", render(value)}});
    return kExitOk;
}

int cmd_bell(uint32_t q) {
    BellReport report = verify_bell_box1(q);
    emit({{"q", q},
          {"ok", report.ok()},
          {"basis_orthogonal", report.basis_orthogonal},
          {"action_consistent", report.action_consistent},
          {"sso", report.sso_ok},
          {"precoding_found", report.precoding_found},
          {"Mx", matrix_json(report.mx)},
          {"Mz", matrix_json(report.mz)}});
    return report.ok() ? kExitOk : kExitInternal;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal download-cost regions and coding schemes for 3-transmitter "
                 "linear computation over entanglement-assisted quantum MACs"};
    app.require_subcommand(1);
    app.add_flag("--human", g_human, "render rationals as decimals (display only)");

    std::string spec_path, cost_text, out_path, scheme_path, mx_text, mz_text;
    bool vertices = false, standard = false, pairwise_only = false, constructive = false,
         exhaustive = false;
    size_t samples = 500;
    uint64_t seed = 1;
    uint32_t q = 3;
    long r1 = 0, r2 = 0, r3 = 0;

    auto* ranks = app.add_subcommand("ranks", "rank profile of a spec");
    ranks->add_option("spec", spec_path)->required();

    auto* region = app.add_subcommand("region", "irredundant cost region");
    region->add_option("spec", spec_path)->required();
    region->add_flag("--vertices", vertices, "include the vertex list");
    region->add_flag("--standard", standard, "generate from standard-form counts");
    region->add_flag("--pairwise-only", pairwise_only, "restrict to pairwise entanglement");

    auto* check = app.add_subcommand("check", "membership of a cost tuple");
    check->add_option("spec", spec_path)->required();
    check->add_option("--cost", cost_text)->required();

    auto* dec = app.add_subcommand("decompose", "standard form report");
    dec->add_option("spec", spec_path)->required();

    auto* alloc = app.add_subcommand("allocate", "protocol usage for a budget");
    alloc->add_option("spec", spec_path)->required();
    alloc->add_option("--cost", cost_text)->required();
    alloc->add_flag("--constructive", constructive, "use the step/case recipe with trace");

    auto* comp = app.add_subcommand("compile", "compile an executable scheme");
    comp->add_option("spec", spec_path)->required();
    comp->add_option("--cost", cost_text)->required();
    comp->add_option("--out", out_path)->required();

    auto* sim = app.add_subcommand("simulate", "verify a compiled scheme");
    sim->add_option("scheme", scheme_path)->required();
    sim->add_flag("--exhaustive", exhaustive);
    sim->add_option("--samples", samples);
    sim->add_option("--seed", seed);

    auto* bounds = app.add_subcommand("bounds", "general-K converse bounds");
    bounds->add_option("spec", spec_path)->required();

    auto* fmv = app.add_subcommand("fm-verify", "project the usage system and compare");
    fmv->add_option("spec", spec_path)->required();

    auto* sso = app.add_subcommand("sso", "check transfer-matrix feasibility");
    sso->add_option("--mx", mx_text)->required();
    sso->add_option("--mz", mz_text)->required();
    sso->add_option("--q", q)->required();

    auto* sym = app.add_subcommand("symmetric", "minimum total cost, symmetric profile");
    sym->add_option("r1", r1)->required();
    sym->add_option("r2", r2)->required();
    sym->add_option("r3", r3)->required();

    auto* bell = app.add_subcommand("bell", "verify the Bell realization of the 2-sum box");
    bell->add_option("--q", q)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (ranks->parsed()) return cmd_ranks(spec_path);
        if (region->parsed()) return cmd_region(spec_path, vertices, standard, pairwise_only);
        if (check->parsed()) return cmd_check(spec_path, cost_text);
        if (dec->parsed()) return cmd_decompose(spec_path);
        if (alloc->parsed()) return cmd_allocate(spec_path, cost_text, constructive);
        if (comp->parsed()) return cmd_compile(spec_path, cost_text, out_path);
        if (sim->parsed()) return cmd_simulate(scheme_path, exhaustive, samples, seed);
        if (bounds->parsed()) return cmd_bounds(spec_path);
        if (fmv->parsed()) return cmd_fm_verify(spec_path);
        if (sso->parsed()) return cmd_sso(mx_text, mz_text, q);
        if (sym->parsed()) return cmd_symmetric(r1, r2, r3);
        if (bell->parsed()) return cmd_bell(q);
    } catch (const ParseError& e) {
        emit({{"error", e.what()}});
        return kExitInfeasible;
    } catch (const std::invalid_argument& e) {
        emit({{"error", e.what()}});
        return kExitInfeasible;
    } catch (const std::exception& e) {
        emit({{"error", e.what()}});
        return kExitInternal;
    }
    return kExitInfeasible;
}
