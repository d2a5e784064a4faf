#include "lcqmac/spec_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace lcqmac {

namespace {

FpMatrix parse_matrix(const nlohmann::json& j, uint32_t d) {
    std::vector<std::vector<int64_t>> raw;
    for (const auto& row : j) raw.push_back(row.get<std::vector<int64_t>>());
    if (raw.empty()) throw ParseError("spec: empty matrix");
    return FpMatrix(raw, d);
}

}  // namespace

FunctionSpec spec_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("spec: invalid JSON: ") + e.what());
    }
    FunctionSpec spec;
    try {
        spec.d = j.at("d").get<uint32_t>();
        if (j.contains("V")) {
            for (const auto& vk : j.at("V")) spec.V.push_back(parse_matrix(vk, spec.d));
        } else {
            for (int k = 1; j.contains("V" + std::to_string(k)); ++k)
                spec.V.push_back(parse_matrix(j.at("V" + std::to_string(k)), spec.d));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("spec: ") + e.what());
    }
    spec.validate();
    return spec;
}

FunctionSpec load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open spec file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return spec_from_json(buf.str());
}

std::string spec_to_json(const FunctionSpec& spec) {
    nlohmann::json j;
    j["d"] = spec.d;
    auto emit = [&](const FpMatrix& m) {
        nlohmann::json rows = nlohmann::json::array();
        for (size_t r = 0; r < m.rows(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
            rows.push_back(std::move(row));
        }
        return rows;
    };
    if (spec.K() == 3) {
        for (int k = 0; k < 3; ++k) j["V" + std::to_string(k + 1)] = emit(spec.V[k]);
    } else {
        j["V"] = nlohmann::json::array();
        for (const auto& vk : spec.V) j["V"].push_back(emit(vk));
    }
    return j.dump();
}

FpMatrix matrix_from_rows_string(const std::string& text, uint32_t q) {
    std::vector<std::vector<int64_t>> raw;
    std::istringstream rows(text);
    std::string row;
    while (std::getline(rows, row, ';')) {
        std::vector<int64_t> entries;
        std::istringstream cells(row);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            try {
                entries.push_back(std::stoll(cell));
            } catch (const std::exception&) {
                throw ParseError("bad matrix entry: " + cell);
            }
        }
        if (entries.empty()) throw ParseError("empty matrix row");
        raw.push_back(std::move(entries));
    }
    if (raw.empty()) throw ParseError("empty matrix literal");
    return FpMatrix(raw, q);
}

}  // namespace lcqmac
