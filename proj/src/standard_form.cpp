#include "lcqmac/standard_form.hpp"

#include <cstdint>

namespace lcqmac {

namespace {

FpMatrix empty_block(size_t rows, uint32_t p) { return FpMatrix(rows, 0, p); }

FpMatrix maybe_hstack(const std::vector<FpMatrix>& blocks, size_t rows, uint32_t p) {
    size_t cols = 0;
    for (const auto& b : blocks) cols += b.cols();
    if (cols == 0) return empty_block(rows, p);
    std::vector<FpMatrix> nonempty;
    for (const auto& b : blocks)
        if (b.cols() > 0) nonempty.push_back(b);
    return hstack(nonempty);
}

// Enumerates the coset v0 + span(shift columns) in deterministic order:
// coefficient vectors over F_p counted in little-endian order.
class CosetEnumerator {
  public:
    CosetEnumerator(FpMatrix v0, FpMatrix shifts)
        : v0_(std::move(v0)), shifts_(std::move(shifts)), coeff_(shifts_.cols(), 0) {}

    bool next(FpMatrix& out) {
        if (done_) return false;
        out = v0_;
        for (size_t j = 0; j < shifts_.cols(); ++j)
            if (coeff_[j]) out = out + shifts_.column(j).scaled(coeff_[j]);
        // advance
        size_t k = 0;
        uint32_t p = v0_.modulus();
        while (k < coeff_.size()) {
            if (++coeff_[k] < p) break;
            coeff_[k] = 0;
            ++k;
        }
        if (k == coeff_.size()) done_ = true;
        return true;
    }

  private:
    FpMatrix v0_, shifts_;
    std::vector<uint32_t> coeff_;
    bool done_ = false;
};

bool extends_rank(const FpMatrix& base, const FpMatrix& v) {
    if (base.cols() == 0) return !v.is_zero();
    return rank_of(hstack({base, v})) > rank_of(base);
}

}  // namespace

void FunctionSpec::validate() const {
    if (V.empty()) throw DimensionMismatch("spec: no V matrices");
    if (!is_prime(d)) throw FieldError("spec: d must be prime");
    size_t rows = V.front().rows();
    for (const auto& v : V) {
        if (v.rows() != rows) throw DimensionMismatch("spec: V_k row counts differ");
        if (v.modulus() != d) throw FieldError("spec: V_k modulus != d");
        if (v.cols() > rows) throw DimensionMismatch("spec: m_k exceeds m");
        if (v.cols() == 0) throw DimensionMismatch("spec: V_k has no columns");
        if (rank_of(v) != v.cols()) throw DimensionMismatch("spec: V_k not full column rank");
    }
}

FpMatrix StandardForm::basis1() const {
    return maybe_hstack({U123, U12, U13, U_1_23, U1}, U123.rows(), d);
}
FpMatrix StandardForm::basis2() const {
    return maybe_hstack({U123, U12, U23, U_2_13, U2}, U123.rows(), d);
}
FpMatrix StandardForm::basis3() const {
    return maybe_hstack({U123, U13, U23, U_3_12, U3}, U123.rows(), d);
}
FpMatrix StandardForm::receiver_basis() const {
    return maybe_hstack({U123, U12, U13, U23, U_2_13, U_3_12, U1, U2, U3}, U123.rows(), d);
}

RankProfile rank_profile(const FunctionSpec& spec) {
    if (spec.K() != 3) throw DimensionMismatch("rank_profile: needs exactly K = 3");
    spec.validate();
    const FpMatrix &v1 = spec.V[0], &v2 = spec.V[1], &v3 = spec.V[2];
    RankProfile rp;
    rp.r1 = rank_of(v1);
    rp.r2 = rank_of(v2);
    rp.r3 = rank_of(v3);
    rp.r12 = rank_of(hstack({v1, v2}));
    rp.r13 = rank_of(hstack({v1, v3}));
    rp.r23 = rank_of(hstack({v2, v3}));
    rp.r123 = rank_of(hstack({v1, v2, v3}));
    return rp;
}

StandardForm decompose(const FunctionSpec& spec) {
    if (spec.K() != 3) throw DimensionMismatch("decompose: needs exactly K = 3");
    spec.validate();
    const uint32_t p = spec.d;
    const FpMatrix &v1 = spec.V[0], &v2 = spec.V[1], &v3 = spec.V[2];
    const size_t m = spec.m();

    StandardForm sf;
    sf.d = p;

    FpMatrix i12 = column_space_intersection(v1, v2);
    FpMatrix i13 = column_space_intersection(v1, v3);
    FpMatrix i23 = column_space_intersection(v2, v3);

    sf.U123 = i12.cols() == 0 || i13.cols() == 0 ? empty_block(m, p)
                                                 : column_space_intersection(i12, i13);
    if (sf.U123.cols() == 0) sf.U123 = empty_block(m, p);

    sf.U12 = i12.cols() == 0 ? empty_block(m, p) : basis_extension(sf.U123, i12);
    sf.U13 = i13.cols() == 0 ? empty_block(m, p) : basis_extension(sf.U123, i13);
    sf.U23 = i23.cols() == 0 ? empty_block(m, p) : basis_extension(sf.U123, i23);

    // o-part: extend span(U123, U12, U13) to a basis of
    // colspace(V1) ∩ (colspace(V2) + colspace(V3)); each new column u is
    // split as u = v + w with v in colspace(V2) and w in colspace(V3), and v
    // is shifted inside v + span(colspace(V2) ∩ colspace(V3)) until the
    // partial rank conditions for transmitters 2 and 3 both hold.
    FpMatrix sum23 = hstack({v2, v3});
    FpMatrix x1 = column_space_intersection(v1, sum23);
    FpMatrix pre_o = maybe_hstack({sf.U123, sf.U12, sf.U13}, m, p);
    FpMatrix o_cols = x1.cols() == 0 ? empty_block(m, p) : basis_extension(pre_o, x1);

    FpMatrix q2 = maybe_hstack({sf.U123, sf.U12, sf.U23}, m, p);
    FpMatrix q3 = maybe_hstack({sf.U123, sf.U13, sf.U23}, m, p);
    FpMatrix chosen_v = empty_block(m, p);
    FpMatrix chosen_w = empty_block(m, p);
    for (size_t j = 0; j < o_cols.cols(); ++j) {
        FpMatrix u = o_cols.column(j);
        auto split = solve_linear(sum23, u);
        if (!split) throw DecompositionFailed("o-part column not in colspace(V2)+colspace(V3)");
        FpMatrix y2(v2.cols(), 1, p), y3(v3.cols(), 1, p);
        for (size_t r = 0; r < v2.cols(); ++r) y2(r, 0) = (*split)(r, 0);
        for (size_t r = 0; r < v3.cols(); ++r) y3(r, 0) = (*split)(v2.cols() + r, 0);
        FpMatrix v0 = v2 * y2;

        FpMatrix base2 = maybe_hstack({q2, chosen_v}, m, p);
        FpMatrix base3 = maybe_hstack({q3, chosen_w}, m, p);
        CosetEnumerator coset(v0, i23);
        FpMatrix v;
        bool found = false;
        uint64_t budget = 1 << 16;
        while (budget-- && coset.next(v)) {
            FpMatrix w = u - v;
            if (extends_rank(base2, v) && extends_rank(base3, w)) {
                chosen_v = hstack({chosen_v, v});
                chosen_w = hstack({chosen_w, w});
                found = true;
                break;
            }
        }
        if (!found)
            throw DecompositionFailed(
                "o-part adjustment search exhausted; external construction needed");
    }
    sf.U_1_23 = o_cols;
    sf.U_2_13 = chosen_v;
    sf.U_3_12 = chosen_w;

    sf.U1 = basis_extension(maybe_hstack({sf.U123, sf.U12, sf.U13, sf.U_1_23}, m, p), v1);
    sf.U2 = basis_extension(maybe_hstack({sf.U123, sf.U12, sf.U23, sf.U_2_13}, m, p), v2);
    sf.U3 = basis_extension(maybe_hstack({sf.U123, sf.U13, sf.U23, sf.U_3_12}, m, p), v3);

    sf.n = NVector{sf.U123.cols(), sf.U12.cols(), sf.U13.cols(), sf.U23.cols(),
                   sf.U_1_23.cols(), sf.U1.cols(), sf.U2.cols(), sf.U3.cols()};

    auto solve_precoder = [&](const FpMatrix& basis, const FpMatrix& vk) {
        auto r = solve_linear(basis, vk);
        if (!r) throw DecompositionFailed("V_k not expressible over its transmitter basis");
        return *r;
    };
    sf.R1 = solve_precoder(sf.basis1(), v1);
    sf.R2 = solve_precoder(sf.basis2(), v2);
    sf.R3 = solve_precoder(sf.basis3(), v3);

    VerifyResult check = verify_standard_form(spec, sf);
    if (!check.ok)
        throw DecompositionFailed("decomposition failed verification: condition " +
                                  std::to_string(check.violated_condition) + " (" + check.detail +
                                  ")");
    return sf;
}

namespace {

bool is_basis_of(const FpMatrix& blocks, const FpMatrix& target) {
    size_t target_rank = rank_of(target);
    if (blocks.cols() != target_rank) return false;
    if (rank_of(blocks) != blocks.cols()) return false;
    return rank_of(hstack({blocks, target})) == target_rank;
}

}  // namespace

VerifyResult verify_standard_form(const FunctionSpec& spec, const StandardForm& sf) {
    const FpMatrix &v1 = spec.V[0], &v2 = spec.V[1], &v3 = spec.V[2];
    const size_t m = spec.m();
    const uint32_t p = spec.d;

    struct Condition {
        int id;
        FpMatrix blocks;
        FpMatrix target;
    };
    std::vector<Condition> conditions;
    auto join = [&](std::initializer_list<FpMatrix> list) {
        return maybe_hstack(std::vector<FpMatrix>(list), m, p);
    };
    conditions.push_back({1, sf.basis1(), v1});
    conditions.push_back({2, sf.basis2(), v2});
    conditions.push_back({3, sf.basis3(), v3});
    conditions.push_back({4, join({sf.U123, sf.U12, sf.U13, sf.U23, sf.U_1_23, sf.U_2_13, sf.U1, sf.U2}),
                          join({v1, v2})});
    conditions.push_back({5, join({sf.U123, sf.U12, sf.U13, sf.U23, sf.U_1_23, sf.U_3_12, sf.U1, sf.U3}),
                          join({v1, v3})});
    conditions.push_back({6, join({sf.U123, sf.U12, sf.U13, sf.U23, sf.U_2_13, sf.U_3_12, sf.U2, sf.U3}),
                          join({v2, v3})});
    conditions.push_back({7, sf.receiver_basis(), join({v1, v2, v3})});
    for (const auto& cond : conditions) {
        if (!is_basis_of(cond.blocks, cond.target))
            return {false, cond.id, "block set is not a basis of the target span"};
    }
    if (sf.U_2_13.cols() != sf.U_1_23.cols() || sf.U_3_12.cols() != sf.U_1_23.cols())
        return {false, 8, "o-pair blocks differ in size"};
    if (sf.U_1_23.cols() > 0 && !(sf.U_2_13 + sf.U_3_12 == sf.U_1_23))
        return {false, 8, "U_1_23 != U_2_13 + U_3_12"};

    auto check_precoder = [&](const FpMatrix& basis, const FpMatrix& rk,
                              const FpMatrix& vk) -> VerifyResult {
        if (rk.rows() != rk.cols() || !inverse_of(rk))
            return {false, 9, "precoder not invertible"};
        if (!(basis * rk == vk)) return {false, 10, "V_k != B_k * R_k"};
        return {true, 0, ""};
    };
    for (auto res : {check_precoder(sf.basis1(), sf.R1, v1), check_precoder(sf.basis2(), sf.R2, v2),
                     check_precoder(sf.basis3(), sf.R3, v3)})
        if (!res.ok) return res;
    return {true, 0, ""};
}

NVector n_vector(const StandardForm& sf) { return sf.n; }

}  // namespace lcqmac
