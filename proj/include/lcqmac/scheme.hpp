#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "lcqmac/cost_regions.hpp"
#include "lcqmac/nsum_box.hpp"
#include "lcqmac/protocols.hpp"

namespace lcqmac {

/// One executable gadget unit. Wiring entries index the transmitter's
/// precoded data stream R_k·W_k flattened instance-major
/// (index = instance * m_k + coordinate); -1 feeds a zero symbol.
struct GadgetInstance {
    GadgetKind kind;
    std::array<std::vector<long>, 3> wiring;
};

/// A compiled batch-L coding plan: gadget units wired into the precoded data
/// streams plus the receiver's linear postprocessing onto F^[L].
struct Scheme {
    FunctionSpec spec;
    size_t L = 1;
    std::array<FpMatrix, 3> R;
    std::vector<GadgetInstance> gadgets;
    /// (m*L) x (total gadget outputs) map over F_d; row ell*m + r produces
    /// entry (r, ell) of F^[L].
    FpMatrix postprocess;
    /// Qudits sent per transmitter over the whole batch: delta_k = d^exp.
    std::array<long, 3> delta_exp{0, 0, 0};

    size_t total_outputs() const;
};

/// Data realization: W[k] is an m_k x L matrix over F_d.
struct DataRealization {
    std::vector<FpMatrix> W;
};

/// Compiles a scheme meeting `budget` exactly-or-under. Batch size is the
/// smallest multiple of the allocation's denominator lcm that makes every
/// protocol's unit dimension count integral. Throws NotInRegion when the
/// budget lies outside the cost region.
Scheme compile_scheme(const FunctionSpec& spec, const CostTuple& budget);

/// Runs every gadget through the box simulator and applies the receiver
/// postprocessing; returns the m x L output block.
FpMatrix simulate_scheme(const Scheme& scheme, const DataRealization& data);

FpMatrix direct_evaluate(const FunctionSpec& spec, const DataRealization& data);

struct VerifyMode {
    bool exhaustive = false;
    size_t samples = 500;
    uint64_t seed = 1;
    uint64_t cap = 1000000;  ///< exhaustive-mode limit on d^(sum m_k * L)
};

struct VerifyOutcome {
    bool pass = true;
    uint64_t checked = 0;
    std::optional<DataRealization> counterexample;
};

/// Compares simulate_scheme against the direct evaluation for every (or a
/// seeded sample of) data realization. Throws CapExceeded when exhaustive
/// enumeration would exceed the cap.
VerifyOutcome verify_scheme(const Scheme& scheme, const VerifyMode& mode);

CostTuple cost_of(const Scheme& scheme);

std::string scheme_to_json(const Scheme& scheme);
Scheme scheme_from_json(const std::string& text);

}  // namespace lcqmac
