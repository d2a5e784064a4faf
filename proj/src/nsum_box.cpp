#include "lcqmac/nsum_box.hpp"

namespace lcqmac {

namespace {

uint32_t add(uint32_t a, uint32_t b, uint32_t q) { return (a + b) % q; }
uint32_t sub(uint32_t a, uint32_t b, uint32_t q) { return (a + q - b % q) % q; }
uint32_t neg(uint32_t a, uint32_t q) { return a ? q - a : 0; }

FpMatrix vec_to_col(const std::vector<uint32_t>& v, uint32_t q) {
    FpMatrix m(v.size(), 1, q);
    for (size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i] % q;
    return m;
}

/// Raw 2-sum box use: returns (x_a + x_b, z_a - z_b) for box roles (a, b).
std::array<uint32_t, 2> use_box1(uint32_t q, uint32_t xa, uint32_t za, uint32_t xb, uint32_t zb) {
    TransferMatrix m = box1(q);
    BoxState out = box_apply(m, BoxState(2, 0), {xa, xb}, {za, zb});
    return {out[0], out[1]};
}

std::array<uint32_t, 3> use_box2(uint32_t q, const std::array<uint32_t, 3>& x,
                                 const std::array<uint32_t, 3>& z) {
    TransferMatrix m = box2(q);
    BoxState out = box_apply(m, BoxState(3, 0), {x[0], x[1], x[2]}, {z[0], z[1], z[2]});
    return {out[0], out[1], out[2]};
}

/// 2-way sum (s_a + s_b, t_a + t_b) between transmitters a < b; the second
/// transmitter negates its z input to flip the box's minus sign.
std::array<uint32_t, 2> pair_sums(uint32_t q, uint32_t sa, uint32_t ta, uint32_t sb, uint32_t tb) {
    return use_box1(q, sa, ta, sb, neg(tb, q));
}

}  // namespace

SsoVerdict check_sso(const FpMatrix& mx, const FpMatrix& mz) {
    if (mx.rows() != mz.rows() || mx.cols() != mz.cols() || mx.rows() != mx.cols())
        throw DimensionMismatch("check_sso: Mx, Mz must be square with equal sizes");
    if (mx.modulus() != mz.modulus()) throw FieldError("check_sso: modulus mismatch");
    if (rank_of(hstack({mx, mz})) != mx.rows()) return SsoVerdict::RankDeficient;
    if (!(mx * mz.transposed() == mz * mx.transposed())) return SsoVerdict::NotSso;
    return SsoVerdict::Valid;
}

TransferMatrix::TransferMatrix(FpMatrix mx, FpMatrix mz, bool unchecked)
    : N(mx.rows()), q(mx.modulus()), Mx(std::move(mx)), Mz(std::move(mz)) {
    if (!unchecked) {
        SsoVerdict verdict = check_sso(Mx, Mz);
        if (verdict == SsoVerdict::RankDeficient)
            throw FieldError("transfer matrix is rank deficient");
        if (verdict == SsoVerdict::NotSso) throw FieldError("transfer matrix violates SSO");
    }
}

BoxState box_apply(const TransferMatrix& m, const BoxState& a, const std::vector<uint32_t>& x,
                   const std::vector<uint32_t>& z) {
    if (a.size() != m.N || x.size() != m.N || z.size() != m.N)
        throw DimensionMismatch("box_apply: vector length != N");
    FpMatrix shift = m.Mx * vec_to_col(x, m.q) + m.Mz * vec_to_col(z, m.q);
    BoxState out(m.N);
    for (size_t i = 0; i < m.N; ++i) out[i] = add(a[i] % m.q, shift(i, 0), m.q);
    return out;
}

TransferMatrix box1(uint32_t q) {
    FpMatrix mx({{1, 1}, {0, 0}}, q);
    FpMatrix mz({{0, 0}, {1, -1}}, q);
    return TransferMatrix(std::move(mx), std::move(mz));
}

TransferMatrix box2(uint32_t q) {
    FpMatrix mx({{1, 1, 1}, {0, 0, 0}, {0, 0, 0}}, q);
    FpMatrix mz({{0, 0, 0}, {1, -1, 0}, {1, 0, -1}}, q);
    return TransferMatrix(std::move(mx), std::move(mz));
}

std::string GadgetKind::name() const {
    std::string base = "P" + std::to_string(protocol);
    return dense3 ? base + "d3" : base;
}

GadgetKind parse_gadget_kind(const std::string& name) {
    if (name.size() < 2 || name[0] != 'P') throw ParseError("bad gadget name: " + name);
    bool dense3 = name.size() > 2 && name.substr(name.size() - 2) == "d3";
    std::string digits = dense3 ? name.substr(1, name.size() - 3) : name.substr(1);
    int proto = std::stoi(digits);
    if (proto < 1 || proto > 20) throw ParseError("bad gadget name: " + name);
    if (dense3 && proto != 16) throw ParseError("dense3 variant only exists for P16");
    return {proto, dense3};
}

GadgetShape gadget_shape(const GadgetKind& kind) {
    if (kind.dense3) return {{2, 2, 2}, 2, {1, 1, 1}};
    switch (kind.protocol) {
        case 1:
            return {{1, 0, 0}, 1, {1, 0, 0}};
        case 2:
            return {{0, 1, 0}, 1, {0, 1, 0}};
        case 3:
            return {{0, 0, 1}, 1, {0, 0, 1}};
        case 4:
            return {{2, 2, 0}, 2, {1, 1, 0}};
        case 5:
            return {{2, 0, 2}, 2, {1, 0, 1}};
        case 6:
            return {{0, 2, 2}, 2, {0, 1, 1}};
        case 7:
            return {{2, 2, 2}, 4, {2, 1, 1}};
        case 8:
            return {{2, 2, 2}, 4, {1, 2, 1}};
        case 9:
            return {{2, 2, 2}, 4, {1, 1, 2}};
        case 10:
            return {{2, 0, 0}, 2, {1, 1, 0}};
        case 11:
            return {{2, 0, 0}, 2, {1, 0, 1}};
        case 12:
            return {{0, 2, 0}, 2, {1, 1, 0}};
        case 13:
            return {{0, 2, 0}, 2, {0, 1, 1}};
        case 14:
            return {{0, 0, 2}, 2, {1, 0, 1}};
        case 15:
            return {{0, 0, 2}, 2, {0, 1, 1}};
        case 16:
            return {{4, 4, 4}, 4, {2, 2, 2}};
        case 17:
            return {{2, 2, 2}, 3, {1, 1, 1}};
        case 18:
            return {{2, 2, 1}, 3, {1, 1, 1}};
        case 19:
            return {{2, 1, 2}, 3, {1, 1, 1}};
        case 20:
            return {{1, 2, 2}, 3, {1, 1, 1}};
        default:
            throw BadArity("unknown protocol");
    }
}

GadgetRun gadget_execute(const GadgetKind& kind, uint32_t q,
                         const std::array<std::vector<uint32_t>, 3>& raw) {
    GadgetShape shape = gadget_shape(kind);
    if (kind.dense3 && q != 3) throw BadArity("dense3 gadget requires q = 3");
    std::array<std::vector<uint32_t>, 3> in;
    for (int k = 0; k < 3; ++k) {
        if (raw[k].size() != shape.inputs[k])
            throw BadArity("gadget " + kind.name() + ": transmitter " + std::to_string(k + 1) +
                           " expects " + std::to_string(shape.inputs[k]) + " symbols");
        in[k] = raw[k];
        for (auto& v : in[k]) v %= q;
    }
    GadgetRun run;
    run.kind = kind;
    run.inputs = in;
    run.qudit_cost = shape.qudits;
    auto& out = run.outputs;

    if (kind.dense3) {
        auto y = use_box2(q, {in[0][0], in[1][0], in[2][0]}, {in[0][1], in[1][1], in[2][1]});
        // (t1-t2) + (t1-t3) = -(t1+t2+t3) over F_3.
        out = {y[0], neg(add(y[1], y[2], q), q)};
        return run;
    }

    switch (kind.protocol) {
        case 1:
            out = {in[0][0]};
            break;
        case 2:
            out = {in[1][0]};
            break;
        case 3:
            out = {in[2][0]};
            break;
        case 4: {
            auto y = pair_sums(q, in[0][0], in[0][1], in[1][0], in[1][1]);
            out = {y[0], y[1]};
            break;
        }
        case 5: {
            auto y = pair_sums(q, in[0][0], in[0][1], in[2][0], in[2][1]);
            out = {y[0], y[1]};
            break;
        }
        case 6: {
            auto y = pair_sums(q, in[1][0], in[1][1], in[2][0], in[2][1]);
            out = {y[0], y[1]};
            break;
        }
        case 7: {
            auto ab = pair_sums(q, in[0][0], in[0][1], in[1][0], in[1][1]);
            auto ac = pair_sums(q, in[0][0], in[0][1], in[2][0], in[2][1]);
            out = {ab[0], ac[0], ab[1], ac[1]};
            break;
        }
        case 8: {
            auto ab = pair_sums(q, in[0][0], in[0][1], in[1][0], in[1][1]);
            // Second box carries -B_o + C_o; A_o + C_o is recovered as the sum.
            auto t = pair_sums(q, neg(in[1][0], q), neg(in[1][1], q), in[2][0], in[2][1]);
            out = {ab[0], add(ab[0], t[0], q), ab[1], add(ab[1], t[1], q)};
            break;
        }
        case 9: {
            auto ac = pair_sums(q, in[0][0], in[0][1], in[2][0], in[2][1]);
            auto t = pair_sums(q, in[1][0], in[1][1], neg(in[2][0], q), neg(in[2][1], q));
            out = {add(ac[0], t[0], q), ac[0], add(ac[1], t[1], q), ac[1]};
            break;
        }
        case 10:
        case 11:
        case 12:
        case 13:
        case 14:
        case 15: {
            static const int data_of[6] = {1, 1, 2, 2, 3, 3};
            static const int helper_of[6] = {2, 3, 1, 3, 1, 2};
            int data = data_of[kind.protocol - 10], helper = helper_of[kind.protocol - 10];
            const auto& s = in[data - 1];
            std::array<uint32_t, 2> y;
            if (data < helper)
                y = use_box1(q, s[0], s[1], 0, 0);
            else
                y = use_box1(q, 0, 0, s[0], neg(s[1], q));
            out = {y[0], y[1]};
            break;
        }
        case 16: {
            const auto &a = in[0], &b = in[1], &c = in[2];
            // Pairwise sums per the three-way construction:
            // (u1-v1)+u2, (w1-x1)+w2 | v2+(v3-u3), x2+(x3-w3) | v1+u3, x1+w3.
            auto o12 = use_box1(q, sub(a[0], a[1], q), sub(a[2], a[3], q), b[0], neg(b[2], q));
            auto o23 = use_box1(q, b[1], b[3], sub(c[1], c[0], q), sub(c[2], c[3], q));
            auto o31 = use_box1(q, a[1], a[3], c[0], neg(c[2], q));
            out = {add(o12[0], o31[0], q), add(o23[0], o31[0], q), add(o12[1], o31[1], q),
                   add(o23[1], o31[1], q)};
            break;
        }
        case 17: {
            auto y = use_box2(q, {in[0][0], in[1][0], in[2][0]},
                              {in[0][1], neg(in[1][1], q), neg(in[2][1], q)});
            out = {y[0], y[1], y[2]};
            break;
        }
        case 18: {
            // Box roles: the transmitter with no singleton demand zeroes its z.
            auto y = use_box2(q, {in[2][0], in[0][0], in[1][0]},
                              {0, neg(in[0][1], q), neg(in[1][1], q)});
            out = {y[0], y[1], y[2]};
            break;
        }
        case 19: {
            auto y = use_box2(q, {in[1][0], in[0][0], in[2][0]},
                              {0, neg(in[0][1], q), neg(in[2][1], q)});
            out = {y[0], y[1], y[2]};
            break;
        }
        case 20: {
            auto y = use_box2(q, {in[0][0], in[1][0], in[2][0]},
                              {0, neg(in[1][1], q), neg(in[2][1], q)});
            out = {y[0], y[1], y[2]};
            break;
        }
        default:
            throw BadArity("unknown protocol");
    }
    return run;
}

}  // namespace lcqmac
