#include "lcqmac/bell.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <vector>

namespace lcqmac {

namespace {

// Amplitudes live in Z[w] with w a primitive q-th root of unity, stored as
// integer coefficient vectors over w^0..w^{q-1}. A value is zero iff all
// coefficients are equal (the only relation is 1 + w + ... + w^{q-1} = 0).
struct Cyc {
    std::vector<long> c;

    explicit Cyc(uint32_t q) : c(q, 0) {}

    bool is_zero() const {
        for (size_t i = 1; i < c.size(); ++i)
            if (c[i] != c[0]) return false;
        return true;
    }
};

Cyc add(const Cyc& a, const Cyc& b) {
    Cyc out = a;
    for (size_t i = 0; i < out.c.size(); ++i) out.c[i] += b.c[i];
    return out;
}

/// Multiplication by w^k: rotate coefficients.
Cyc rotate(const Cyc& a, uint32_t k) {
    uint32_t q = a.c.size();
    Cyc out(q);
    for (uint32_t i = 0; i < q; ++i) out.c[(i + k) % q] = a.c[i];
    return out;
}

Cyc conj_mul(const Cyc& a, const Cyc& b) {
    // conj(a) * b with conj(w^i) = w^{q-i}.
    uint32_t q = a.c.size();
    Cyc out(q);
    for (uint32_t i = 0; i < q; ++i) {
        if (!a.c[i]) continue;
        for (uint32_t j = 0; j < q; ++j) {
            if (!b.c[j]) continue;
            out.c[(j + q - i) % q] += a.c[i] * b.c[j];
        }
    }
    return out;
}

/// Unnormalized state on two q-level systems: q^2 amplitudes indexed by
/// (ket1, ket2) = index/q, index%q.
struct State {
    uint32_t q;
    std::vector<Cyc> amp;

    explicit State(uint32_t q_) : q(q_), amp(q_ * q_, Cyc(q_)) {}
};

/// Bell state |phi_{a,b}> ~ sum_j w^{jb} |j, j+a>.
State bell_state(uint32_t q, uint32_t a, uint32_t b) {
    State s(q);
    for (uint32_t j = 0; j < q; ++j) {
        Cyc one(q);
        one.c[static_cast<size_t>(j) * b % q] = 1;
        s.amp[j * q + (j + a) % q] = one;
    }
    return s;
}

/// X(x) shifts the ket, Z(z) multiplies |j> by w^{jz}; applied per system.
State apply_xz(const State& s, uint32_t x1, uint32_t z1, uint32_t x2, uint32_t z2) {
    uint32_t q = s.q;
    State out(q);
    for (uint32_t j = 0; j < q; ++j)
        for (uint32_t l = 0; l < q; ++l) {
            const Cyc& a = s.amp[j * q + l];
            if (a.is_zero()) continue;
            uint32_t phase = (j * z1 + l * z2) % q;
            uint32_t nj = (j + x1) % q, nl = (l + x2) % q;
            out.amp[nj * q + nl] = add(out.amp[nj * q + nl], rotate(a, phase));
        }
    return out;
}

Cyc inner(const State& a, const State& b) {
    Cyc acc(a.q);
    for (size_t i = 0; i < a.amp.size(); ++i) acc = add(acc, conj_mul(a.amp[i], b.amp[i]));
    return acc;
}

bool equal_up_to_phase(const State& a, const State& b) {
    for (uint32_t t = 0; t < a.q; ++t) {
        bool all = true;
        for (size_t i = 0; i < a.amp.size() && all; ++i) {
            Cyc diff = rotate(a.amp[i], t);
            for (size_t k = 0; k < diff.c.size(); ++k) diff.c[k] -= b.amp[i].c[k];
            all = diff.is_zero();
        }
        if (all) return true;
    }
    return false;
}

/// Index (a, b) of the basis state matching s up to a power-of-w phase.
std::optional<std::pair<uint32_t, uint32_t>> match_basis(const State& s,
                                                         const std::vector<State>& basis,
                                                         uint32_t q) {
    for (uint32_t idx = 0; idx < q * q; ++idx)
        if (equal_up_to_phase(basis[idx], s)) return std::make_pair(idx / q, idx % q);
    return std::nullopt;
}

}  // namespace

std::string BellReport::summary() const {
    std::ostringstream out;
    out << "q=" << q << " orthogonal=" << basis_orthogonal << " action=" << action_consistent
        << " sso=" << sso_ok << " precoding=" << precoding_found;
    return out.str();
}

BellReport verify_bell_box1(uint32_t q) {
    if (!is_prime(q) || q > 7) throw FieldError("verify_bell_box1: q must be a prime <= 7");
    BellReport report;
    report.q = q;

    std::vector<State> basis;
    basis.reserve(q * q);
    for (uint32_t a = 0; a < q; ++a)
        for (uint32_t b = 0; b < q; ++b) basis.push_back(bell_state(q, a, b));

    report.basis_orthogonal = true;
    for (uint32_t i = 0; i < q * q && report.basis_orthogonal; ++i)
        for (uint32_t j = i + 1; j < q * q; ++j) {
            if (!inner(basis[i], basis[j]).is_zero()) {
                report.basis_orthogonal = false;
                break;
            }
        }

    // Transfer matrix columns from the generator inputs e_i.
    FpMatrix mx(2, 2, q), mz(2, 2, q);
    auto index_shift = [&](uint32_t x1, uint32_t z1, uint32_t x2,
                           uint32_t z2) -> std::optional<std::pair<uint32_t, uint32_t>> {
        State moved = apply_xz(basis[0], x1, z1, x2, z2);  // from |phi_{0,0}>
        return match_basis(moved, basis, q);
    };
    struct Gen {
        uint32_t x1, z1, x2, z2;
    };
    const Gen gens[4] = {{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}};
    bool derived = true;
    for (int g = 0; g < 4 && derived; ++g) {
        auto shift = index_shift(gens[g].x1, gens[g].z1, gens[g].x2, gens[g].z2);
        if (!shift) {
            derived = false;
            break;
        }
        if (g < 2) {
            mx(0, g) = shift->first;
            mx(1, g) = shift->second;
        } else {
            mz(0, g - 2) = shift->first;
            mz(1, g - 2) = shift->second;
        }
    }
    report.mx = mx;
    report.mz = mz;

    // Full action check: every input moves every basis state by M·(x;z).
    report.action_consistent = derived;
    if (derived) {
        TransferMatrix m(mx, mz, /*unchecked=*/true);
        for (uint32_t x1 = 0; x1 < q && report.action_consistent; ++x1)
            for (uint32_t z1 = 0; z1 < q && report.action_consistent; ++z1)
                for (uint32_t x2 = 0; x2 < q && report.action_consistent; ++x2)
                    for (uint32_t z2 = 0; z2 < q && report.action_consistent; ++z2)
                        for (uint32_t idx = 0; idx < q * q; ++idx) {
                            BoxState from{idx / q, idx % q};
                            BoxState to = box_apply(m, from, {x1, x2}, {z1, z2});
                            State moved = apply_xz(basis[idx], x1, z1, x2, z2);
                            if (!equal_up_to_phase(basis[to[0] * q + to[1]], moved)) {
                                report.action_consistent = false;
                                break;
                            }
                        }
    }

    report.sso_ok = derived && check_sso(mx, mz) == SsoVerdict::Valid;

    // Per-transmitter data precoding G_i with [Mx e_i | Mz e_i]·G_i equal to
    // the corresponding column pair of the 2-sum box.
    if (derived) {
        TransferMatrix target = box1(q);
        bool found = true;
        FpMatrix precode[2] = {FpMatrix(2, 2, q), FpMatrix(2, 2, q)};
        for (size_t i = 0; i < 2 && found; ++i) {
            FpMatrix lhs = hstack({report.mx.column(i), report.mz.column(i)});
            FpMatrix rhs = hstack({target.Mx.column(i), target.Mz.column(i)});
            auto g = solve_linear(lhs, rhs);
            if (!g || !inverse_of(*g) || !(lhs * *g == rhs)) {
                found = false;
                break;
            }
            precode[i] = *g;
        }
        report.precoding_found = found;
        if (found) {
            report.precode1 = precode[0];
            report.precode2 = precode[1];
        }
    }
    return report;
}

}  // namespace lcqmac
