#include "lcqmac/protocols.hpp"

#include <algorithm>

namespace lcqmac {

namespace {

Rational half() { return make_rational(1, 2); }

ProtocolCatalog build_catalog() {
    ProtocolCatalog cat;
    // Amortized per-dimension cost tuples, column j = P(j+1).
    const double D_raw[3][kProtocolCount] = {
        {1, 0, 0, .5, .5, 0, 1, .5, .5, .5, .5, .5, 0, .5, 0, .5, 1, 1, 1, 1},
        {0, 1, 0, .5, 0, .5, .5, 1, .5, .5, 0, .5, .5, 0, .5, .5, 1, 1, 1, 1},
        {0, 0, 1, 0, .5, .5, .5, .5, 1, 0, .5, 0, .5, .5, .5, .5, 1, 1, 1, 1},
    };
    const int E_raw[8][kProtocolCount] = {
        {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1},
        {0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
        {0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
        {0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
        {0, 0, 0, 0, 0, 0, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0},
        {1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 1, 1, 0},
        {0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 1, 0, 1},
        {0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 1, 1},
    };
    cat.D.assign(3, QVector(kProtocolCount));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < kProtocolCount; ++j)
            cat.D[i][j] = D_raw[i][j] == 0.5 ? half() : Rational(static_cast<int>(D_raw[i][j]));
    cat.E.assign(8, QVector(kProtocolCount));
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < kProtocolCount; ++j) cat.E[i][j] = E_raw[i][j];

    using B = DemandBlock;
    auto put = [&](int id, BoxKind box, int uses, int dims, std::array<int, 3> cost,
                   std::vector<B> covers) {
        cat.info[id - 1] = ProtocolInfo{id, box, uses, dims, cost, std::move(covers)};
    };
    put(1, BoxKind::TQC, 0, 1, {1, 0, 0}, {B::Single1});
    put(2, BoxKind::TQC, 0, 1, {0, 1, 0}, {B::Single2});
    put(3, BoxKind::TQC, 0, 1, {0, 0, 1}, {B::Single3});
    put(4, BoxKind::Box1, 1, 2, {1, 1, 0}, {B::Pair12});
    put(5, BoxKind::Box1, 1, 2, {1, 0, 1}, {B::Pair13});
    put(6, BoxKind::Box1, 1, 2, {0, 1, 1}, {B::Pair23});
    put(7, BoxKind::Box1, 2, 2, {2, 1, 1}, {B::OPair});
    put(8, BoxKind::Box1, 2, 2, {1, 2, 1}, {B::OPair});
    put(9, BoxKind::Box1, 2, 2, {1, 1, 2}, {B::OPair});
    put(10, BoxKind::Box1, 1, 2, {1, 1, 0}, {B::Single1});
    put(11, BoxKind::Box1, 1, 2, {1, 0, 1}, {B::Single1});
    put(12, BoxKind::Box1, 1, 2, {1, 1, 0}, {B::Single2});
    put(13, BoxKind::Box1, 1, 2, {0, 1, 1}, {B::Single2});
    put(14, BoxKind::Box1, 1, 2, {1, 0, 1}, {B::Single3});
    put(15, BoxKind::Box1, 1, 2, {0, 1, 1}, {B::Single3});
    put(16, BoxKind::Box1, 3, 4, {2, 2, 2}, {B::ThreeWay});
    put(17, BoxKind::Box2, 1, 1, {1, 1, 1}, {B::ThreeWay, B::OPair});
    put(18, BoxKind::Box2, 1, 1, {1, 1, 1}, {B::ThreeWay, B::Single1, B::Single2});
    put(19, BoxKind::Box2, 1, 1, {1, 1, 1}, {B::ThreeWay, B::Single1, B::Single3});
    put(20, BoxKind::Box2, 1, 1, {1, 1, 1}, {B::ThreeWay, B::Single2, B::Single3});
    return cat;
}

QVector costs_of(const Allocation& lambda) {
    const auto& cat = catalog();
    QVector cost(3, Rational(0));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < kProtocolCount; ++j) cost[i] += cat.D[i][j] * lambda.lambda[j];
    return cost;
}

QVector coverage_of(const Allocation& lambda) {
    const auto& cat = catalog();
    QVector cover(8, Rational(0));
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < kProtocolCount; ++j) cover[i] += cat.E[i][j] * lambda.lambda[j];
    return cover;
}

}  // namespace

const ProtocolCatalog& catalog() {
    static const ProtocolCatalog cat = build_catalog();
    return cat;
}

Allocation AllocationTrace::replay() const {
    Allocation out;
    for (const auto& step : steps) out.lambda[step.protocol - 1] += step.amount;
    return out;
}

QVector demand_vector(const NVector& n) {
    auto arr = n.as_array();
    QVector out(8);
    for (int i = 0; i < 8; ++i) out[i] = Rational(static_cast<long>(arr[i]));
    return out;
}

bool allocation_feasible(const Allocation& lambda, const NVector& n, const CostTuple& budget) {
    for (const auto& v : lambda.lambda)
        if (v < 0) return false;
    QVector cost = costs_of(lambda);
    for (int i = 0; i < 3; ++i)
        if (cost[i] > budget.delta[i]) return false;
    QVector cover = coverage_of(lambda);
    QVector need = demand_vector(n);
    for (int i = 0; i < 8; ++i)
        if (cover[i] < need[i]) return false;
    return true;
}

HPolyhedron usage_system(const NVector& n, int first_protocol, int last_protocol) {
    const auto& cat = catalog();
    const int num_lambda = last_protocol - first_protocol + 1;
    const size_t dim = 3 + static_cast<size_t>(num_lambda);
    HPolyhedron sys;
    sys.dim_hint = dim;
    for (int i = 0; i < 3; ++i) {
        QVector row(dim, Rational(0));
        row[static_cast<size_t>(i)] = 1;
        for (int j = 0; j < num_lambda; ++j) row[3 + j] = -cat.D[i][first_protocol - 1 + j];
        sys.add_row(std::move(row), Rational(0));
    }
    QVector need = demand_vector(n);
    for (int k = 0; k < 8; ++k) {
        QVector row(dim, Rational(0));
        for (int j = 0; j < num_lambda; ++j) row[3 + j] = cat.E[k][first_protocol - 1 + j];
        sys.add_row(std::move(row), need[k]);
    }
    for (int j = 0; j < num_lambda; ++j) {
        QVector row(dim, Rational(0));
        row[3 + j] = 1;
        sys.add_row(std::move(row), Rational(0));
    }
    return sys;
}

std::optional<Allocation> allocate_lp(const NVector& n, const CostTuple& budget) {
    if (budget.delta.size() != 3) throw DimensionMismatch("allocate_lp: K = 3 budget expected");
    const auto& cat = catalog();
    HPolyhedron sys;
    sys.dim_hint = kProtocolCount;
    for (int i = 0; i < 3; ++i) {
        QVector row(kProtocolCount);
        for (int j = 0; j < kProtocolCount; ++j) row[j] = -cat.D[i][j];
        sys.add_row(std::move(row), -budget.delta[i]);
    }
    QVector need = demand_vector(n);
    for (int k = 0; k < 8; ++k) {
        QVector row(kProtocolCount);
        for (int j = 0; j < kProtocolCount; ++j) row[j] = cat.E[k][j];
        sys.add_row(std::move(row), need[k]);
    }
    for (int j = 0; j < kProtocolCount; ++j) {
        QVector row(kProtocolCount, Rational(0));
        row[j] = 1;
        sys.add_row(std::move(row), Rational(0));
    }
    QVector ones(kProtocolCount, Rational(1));
    LpResult total = lp_solve(sys, ones, LpSense::Minimize);
    if (total.status != LpStatus::Optimal) return std::nullopt;
    // Lexicographic tie-break: pin total usage, then minimize each
    // coordinate in protocol order.
    sys.add_row(ones, total.optimum);
    QVector neg_ones(kProtocolCount, Rational(-1));
    sys.add_row(neg_ones, -total.optimum);
    Allocation out;
    for (int j = 0; j < kProtocolCount; ++j) {
        QVector obj(kProtocolCount, Rational(0));
        obj[j] = 1;
        LpResult step = lp_solve(sys, obj, LpSense::Minimize);
        if (step.status != LpStatus::Optimal) return std::nullopt;  // cannot happen
        out.lambda[j] = step.optimum;
        QVector fix(kProtocolCount, Rational(0));
        fix[j] = 1;
        sys.add_row(fix, step.optimum);
        QVector fix_neg(kProtocolCount, Rational(0));
        fix_neg[j] = -1;
        sys.add_row(std::move(fix_neg), -step.optimum);
    }
    return out;
}

Allocation allocate_im(size_t n1v, size_t n2v, size_t n3v, const CostTuple& budget) {
    if (budget.delta.size() != 3) throw DimensionMismatch("allocate_im: K = 3 budget expected");
    const Rational n1(static_cast<long>(n1v)), n2(static_cast<long>(n2v)), n3(static_cast<long>(n3v));
    const Rational total = n1 + n2 + n3;
    QVector d = budget.delta;
    if (d[0] < n1 / 2 || d[1] < n2 / 2 || d[2] < n3 / 2 || d[0] + d[1] + d[2] < total)
        throw HypothesisViolated("allocate_im: budget below the required corner bounds");
    Allocation out;
    if (total == 0) return out;
    // Excess over the per-transmitter floor, scaled down so the budget sits
    // exactly on the simplex spanned by the three extreme splits.
    QVector excess{d[0] - n1 / 2, d[1] - n2 / 2, d[2] - n3 / 2};
    Rational excess_sum = excess[0] + excess[1] + excess[2];
    Rational target = total / 2;
    if (excess_sum > 0) {
        Rational scale = target / excess_sum;
        for (auto& e : excess) e *= scale;
    }
    // Weight of the corner that piles the surplus onto transmitter i equals
    // the (scaled) excess on coordinate i.
    Rational w3 = excess[2] / target;  // helper Alice3: P3/P11/P13
    Rational w2 = excess[1] / target;  // helper Alice2: P2/P10/P15
    Rational w1 = excess[0] / target;  // helper Alice1: P1/P12/P14
    out.lambda[3 - 1] += w3 * n3;
    out.lambda[11 - 1] += w3 * n1;
    out.lambda[13 - 1] += w3 * n2;
    out.lambda[2 - 1] += w2 * n2;
    out.lambda[10 - 1] += w2 * n1;
    out.lambda[15 - 1] += w2 * n3;
    out.lambda[1 - 1] += w1 * n1;
    out.lambda[12 - 1] += w1 * n2;
    out.lambda[14 - 1] += w1 * n3;
    return out;
}

namespace detail {

/// The Case-I o-pair split: lambda_{7..9} solving
/// [[1,1/2,1/2],[1/2,1,1/2],[1/2,1/2,1]]·lambda = no'/2 + a.
std::array<Rational, 3> case1_opair_split(const Rational& no_prime, const std::array<Rational, 3>& a) {
    std::array<Rational, 3> lam;
    for (int i = 0; i < 3; ++i) {
        Rational three_ai = 3 * a[i];
        Rational others = a[(i + 1) % 3] + a[(i + 2) % 3];
        lam[i] = no_prime / 4 + (three_ai - others) / 2;
    }
    return lam;
}

}  // namespace detail

namespace {

struct Recipe {
    std::vector<TraceStep> steps;            // canonical-protocol steps
    std::map<std::string, Rational> scalars;
};

void add_step(Recipe& r, int proto, Rational amount, const std::string& tag) {
    if (amount == 0) return;
    if (amount < 0) throw HypothesisViolated("negative protocol amount");
    r.steps.push_back({proto, std::move(amount), tag});
}

void append_im(Recipe& r, size_t n1, size_t n2, size_t n3, const CostTuple& rem) {
    Allocation im = allocate_im(n1, n2, n3, rem);
    for (int j = 0; j < kProtocolCount; ++j)
        if (im.lambda[j] != 0) r.steps.push_back({j + 1, im.lambda[j], "Lemma4"});
}

Rational rat(size_t v) { return Rational(static_cast<long>(v)); }

/// One Case-II vertex recipe in canonical coordinates. `pattern` selects the
/// tight-row template (1..7 for II.1..II.7). Throws HypothesisViolated when
/// the template's side conditions fail; the caller then tries the next
/// template/permutation.
Recipe case2_recipe(int pattern, const Rational& n123p, const std::array<size_t, 3>& n,
                    const QVector& delta, const Rational& gamma) {
    Recipe r;
    const std::string tag = "II." + std::to_string(pattern);
    const Rational n1 = rat(n[0]), n2 = rat(n[1]), n3 = rat(n[2]);
    const Rational sum_n = n1 + n2 + n3;
    auto rem_after = [&](const Recipe& rec) {
        QVector rem = delta;
        const auto& cat = catalog();
        for (const auto& s : rec.steps)
            for (int i = 0; i < 3; ++i) rem[i] -= cat.D[i][s.protocol - 1] * s.amount;
        for (const auto& v : rem)
            if (v < 0) throw HypothesisViolated("recipe overspends");
        return CostTuple{rem};
    };
    switch (pattern) {
        case 1:
            add_step(r, 16, n123p, tag);
            break;
        case 2: {
            if (n123p >= n1 && n1 >= n2 && n[2] == 0 && n1 == n2) {
                add_step(r, 18, n1, tag);
                add_step(r, 16, n123p - n1, tag);
            } else if (n1 >= n123p && n2 >= n123p) {
                add_step(r, 18, n123p, tag);
                if (n123p.get_den() != 1) throw HypothesisViolated("fractional single demand");
                size_t used = static_cast<size_t>(n123p.get_num().get_si());
                append_im(r, n[0] - used, n[1] - used, n[2], rem_after(r));
            } else if (n123p >= n1) {
                // boundary mix: cover the single demands through P18 as far
                // as they go, then fill the three-way remainder with P16.
                add_step(r, 18, std::max(n1, n2), tag);
                add_step(r, 16, n123p - std::max(n1, n2), tag);
            } else {
                throw HypothesisViolated("II.2 side conditions fail");
            }
            break;
        }
        case 3: {
            if (!(n1 <= n123p && n1 <= n2)) throw HypothesisViolated("II.3 side conditions fail");
            add_step(r, 18, n1, tag);
            add_step(r, 16, n123p - n1, tag);
            append_im(r, 0, n[1] - n[0], n[2], rem_after(r));
            break;
        }
        case 4: {
            if (!(n123p >= n1 && n1 == n2 && n[2] == 0))
                throw HypothesisViolated("II.4 side conditions fail");
            add_step(r, 18, n1, tag);
            add_step(r, 16, n123p - n1, tag);
            break;
        }
        case 5: {
            if (gamma == (n123p + n1) / 2 && n1 >= n2 + n3 && n123p >= n2 + n3) {
                add_step(r, 18, n2, tag);
                add_step(r, 19, n3, tag);
                add_step(r, 16, n123p - n2 - n3, tag);
                append_im(r, n[0] - n[1] - n[2], 0, 0, rem_after(r));
            } else if (gamma == (n123p + n2) / 2 && n[2] == 0 && n123p >= n1 && n1 == n2) {
                add_step(r, 18, n2, tag);
                add_step(r, 16, n123p - n2, tag);
            } else if (gamma == (n123p + n3) / 2 && n[1] == 0 && n123p >= n1 && n3 >= n1) {
                add_step(r, 19, n1, tag);
                add_step(r, 16, n123p - n1, tag);
                add_step(r, 3, n3 - n1, tag);
            } else if (gamma == sum_n / 2 && n1 >= n123p && n123p >= n2 && n2 + n3 >= n123p) {
                add_step(r, 18, n2, tag);
                add_step(r, 19, n123p - n2, tag);
                if (n123p.get_den() != 1) throw HypothesisViolated("fractional single demand");
                size_t used = static_cast<size_t>(n123p.get_num().get_si());
                append_im(r, n[0] - used, 0, n[2] - used + n[1], rem_after(r));
            } else {
                throw HypothesisViolated("II.5 side conditions fail");
            }
            break;
        }
        case 6: {
            if (gamma == (n123p + n1) / 2 && n123p >= n1 && n1 == n2 + n3) {
                add_step(r, 18, n2, tag);
                add_step(r, 19, n3, tag);
                add_step(r, 16, n123p - n1, tag);
            } else if (gamma == (n123p + n2) / 2 && n123p >= n2 && n2 == n1 + n3) {
                add_step(r, 18, n1, tag);
                add_step(r, 20, n3, tag);
                add_step(r, 16, n123p - n2, tag);
            } else if (gamma == (n123p + n3) / 2 && n123p >= n1 + n2 && n3 >= n1 + n2) {
                add_step(r, 19, n1, tag);
                add_step(r, 20, n2, tag);
                add_step(r, 16, n123p - n1 - n2, tag);
                add_step(r, 3, n3 - n1 - n2, tag);
            } else if (gamma == sum_n / 2 && n1 + n2 >= n123p && n123p >= n1 && n123p >= n2 &&
                       sum_n >= 2 * n123p) {
                add_step(r, 18, n1 + n2 - n123p, tag);
                add_step(r, 19, n123p - n2, tag);
                add_step(r, 20, n123p - n1, tag);
                add_step(r, 3, sum_n - 2 * n123p, tag);
            } else {
                throw HypothesisViolated("II.6 side conditions fail");
            }
            break;
        }
        case 7: {
            if (!(n1 + n2 >= n3 && n1 + n3 >= n2 && n2 + n3 >= n1 && n123p >= sum_n / 2))
                throw HypothesisViolated("II.7 side conditions fail");
            add_step(r, 18, (n1 + n2 - n3) / 2, tag);
            add_step(r, 19, (n1 + n3 - n2) / 2, tag);
            add_step(r, 20, (n2 + n3 - n1) / 2, tag);
            add_step(r, 16, n123p - sum_n / 2, tag);
            break;
        }
        default:
            throw HypothesisViolated("unknown pattern");
    }
    r.scalars["Gamma"] = gamma;
    return r;
}

/// Maps a canonical protocol id back through the transmitter relabeling
/// sigma (sigma[c-1] = original transmitter playing canonical role c).
int map_protocol(int proto, const std::array<int, 3>& sigma) {
    auto pair_id = [&](int a, int b, int base12, int base13, int base23) {
        int x = std::min(a, b), y = std::max(a, b);
        if (x == 1 && y == 2) return base12;
        if (x == 1 && y == 3) return base13;
        return base23;
    };
    auto superdense = [&](int data, int helper) {
        static const int table[3][3] = {{0, 10, 11}, {12, 0, 13}, {14, 15, 0}};
        return table[data - 1][helper - 1];
    };
    switch (proto) {
        case 1:
        case 2:
        case 3:
            return sigma[proto - 1];
        case 4:
            return pair_id(sigma[0], sigma[1], 4, 5, 6);
        case 5:
            return pair_id(sigma[0], sigma[2], 4, 5, 6);
        case 6:
            return pair_id(sigma[1], sigma[2], 4, 5, 6);
        case 10:
            return superdense(sigma[0], sigma[1]);
        case 11:
            return superdense(sigma[0], sigma[2]);
        case 12:
            return superdense(sigma[1], sigma[0]);
        case 13:
            return superdense(sigma[1], sigma[2]);
        case 14:
            return superdense(sigma[2], sigma[0]);
        case 15:
            return superdense(sigma[2], sigma[1]);
        case 16:
            return 16;
        case 18:
            return pair_id(sigma[0], sigma[1], 18, 19, 20);
        case 19:
            return pair_id(sigma[0], sigma[2], 18, 19, 20);
        case 20:
            return pair_id(sigma[1], sigma[2], 18, 19, 20);
        default:
            throw HypothesisViolated("protocol not permutable");
    }
}

HPolyhedron case2_reduced_region(const Rational& n123p, const std::array<size_t, 3>& n,
                                 const Rational& gamma) {
    const Rational n1 = rat(n[0]), n2 = rat(n[1]), n3 = rat(n[2]);
    const Rational sum_n = n1 + n2 + n3;
    HPolyhedron reg;
    reg.dim_hint = 3;
    reg.add_row({1, 0, 0}, (n123p + n1) / 2);
    reg.add_row({0, 1, 0}, (n123p + n2) / 2);
    reg.add_row({0, 0, 1}, (n123p + n3) / 2);
    reg.add_row({1, 1, 1}, n123p + sum_n / 2 + gamma);
    reg.add_row({Rational(1), half(), half()}, n123p + sum_n / 2);
    reg.add_row({half(), Rational(1), half()}, n123p + sum_n / 2);
    reg.add_row({half(), half(), Rational(1)}, n123p + sum_n / 2);
    return reg;
}

Rational case2_gamma(const Rational& n123p, const std::array<size_t, 3>& n) {
    const Rational sum_n = rat(n[0]) + rat(n[1]) + rat(n[2]);
    Rational gamma = sum_n / 2;
    for (int i = 0; i < 3; ++i) gamma = std::max(gamma, Rational((n123p + rat(n[i])) / 2));
    return gamma;
}

const std::array<std::array<int, 3>, 7> kCase2Patterns = {{
    {1, 2, 3}, {1, 2, 4}, {1, 2, 5}, {1, 2, 7}, {1, 4, 6}, {4, 5, 6}, {5, 6, 7},
}};

const std::array<std::array<int, 3>, 6> kPerms = {{
    {1, 2, 3}, {1, 3, 2}, {2, 1, 3}, {2, 3, 1}, {3, 1, 2}, {3, 2, 1},
}};

/// Handles one Case-II vertex: finds a matching tight-row template under
/// some transmitter relabeling and returns the original-label steps.
Recipe case2_vertex(const Rational& n123p, const std::array<size_t, 3>& n, const QVector& vertex,
                    const std::vector<int>& tight_rows) {
    for (int pattern = 1; pattern <= 7; ++pattern) {
        for (const auto& sigma : kPerms) {
            auto mapped_row = [&](int r) {
                if (r <= 3) return sigma[r - 1];
                if (r == 4) return 4;
                return sigma[r - 5] + 4;
            };
            bool match = true;
            for (int r : kCase2Patterns[pattern - 1])
                if (std::find(tight_rows.begin(), tight_rows.end(), mapped_row(r)) ==
                    tight_rows.end()) {
                    match = false;
                    break;
                }
            if (!match) continue;
            std::array<size_t, 3> cn{n[sigma[0] - 1], n[sigma[1] - 1], n[sigma[2] - 1]};
            QVector cd{vertex[sigma[0] - 1], vertex[sigma[1] - 1], vertex[sigma[2] - 1]};
            Rational gamma = case2_gamma(n123p, cn);
            Recipe rec;
            try {
                rec = case2_recipe(pattern, n123p, cn, cd, gamma);
            } catch (const HypothesisViolated&) {
                continue;
            }
            // Validate in the canonical frame before mapping back.
            Allocation canon;
            for (const auto& s : rec.steps) canon.lambda[s.protocol - 1] += s.amount;
            NVector canon_n;
            if (n123p.get_den() != 1) continue;
            canon_n.n123 = static_cast<size_t>(n123p.get_num().get_si());
            canon_n.n1 = cn[0];
            canon_n.n2 = cn[1];
            canon_n.n3 = cn[2];
            if (!allocation_feasible(canon, canon_n, CostTuple{cd})) continue;
            Recipe out;
            out.scalars = rec.scalars;
            for (const auto& s : rec.steps)
                out.steps.push_back({map_protocol(s.protocol, sigma), s.amount, s.reason});
            return out;
        }
    }
    throw HypothesisViolated("no Case-II template matches this vertex");
}

}  // namespace

std::pair<Allocation, AllocationTrace> allocate_constructive(const NVector& n,
                                                             const CostTuple& budget) {
    if (budget.delta.size() != 3)
        throw DimensionMismatch("allocate_constructive: K = 3 budget expected");
    HPolyhedron region = region_standard(n);
    if (!contains_point(region, budget.delta)) throw NotInRegion("budget outside region_standard");

    AllocationTrace trace;
    auto record = [&](int proto, const Rational& amount, const std::string& tag) {
        if (amount != 0) trace.steps.push_back({proto, amount, tag});
    };
    try {
        QVector rem = budget.delta;
        const auto& cat = catalog();
        auto spend = [&](int proto, const Rational& amount) {
            for (int i = 0; i < 3; ++i) rem[i] -= cat.D[i][proto - 1] * amount;
        };
        // Step 1: pairwise demands through P4/P5/P6.
        record(4, rat(n.n12), "Step1");
        record(5, rat(n.n13), "Step1");
        record(6, rat(n.n23), "Step1");
        spend(4, rat(n.n12));
        spend(5, rat(n.n13));
        spend(6, rat(n.n23));
        // Step 2: min(n123, no) units of P17 cover the coupled part.
        size_t ntilde = std::min(n.n123, n.no);
        trace.scalars["ntilde"] = rat(ntilde);
        record(17, rat(ntilde), "Step2");
        spend(17, rat(ntilde));

        if (n.n123 <= n.no) {
            // Case I: remaining o-pair demand via P7-P9, singles via the
            // corner-mixture allocator.
            Rational no_prime = rat(n.no - n.n123);
            trace.scalars["no_prime"] = no_prime;
            std::array<Rational, 3> floor{(no_prime + rat(n.n1)) / 2, (no_prime + rat(n.n2)) / 2,
                                          (no_prime + rat(n.n3)) / 2};
            std::array<Rational, 3> surplus;
            Rational surplus_sum = 0;
            for (int i = 0; i < 3; ++i) {
                surplus[i] = rem[i] - floor[i];
                if (surplus[i] < 0) throw HypothesisViolated("Case I floor violated");
                surplus_sum += surplus[i];
            }
            Rational singles = rat(n.n1) + rat(n.n2) + rat(n.n3);
            Rational need = no_prime / 2 + singles / 2;
            if (surplus_sum < need) throw HypothesisViolated("Case I surplus short");
            std::array<Rational, 3> a{0, 0, 0}, b{0, 0, 0};
            if (need > 0 && surplus_sum > 0) {
                Rational scale = need / surplus_sum;
                for (int i = 0; i < 3; ++i) {
                    Rational si = surplus[i] * scale;
                    a[i] = need == 0 ? Rational(0) : si * (no_prime / 2) / need;
                    b[i] = si - a[i];
                }
            }
            for (int i = 0; i < 3; ++i) {
                trace.scalars["a" + std::to_string(i + 1)] = a[i];
                trace.scalars["b" + std::to_string(i + 1)] = b[i];
            }
            auto lam = detail::case1_opair_split(no_prime, a);
            for (int i = 0; i < 3; ++i) {
                if (lam[i] < 0) throw HypothesisViolated("Case I split negative");
                record(7 + i, lam[i], "CaseI");
            }
            CostTuple im_budget{{rat(n.n1) / 2 + b[0], rat(n.n2) / 2 + b[1], rat(n.n3) / 2 + b[2]}};
            Allocation im = allocate_im(n.n1, n.n2, n.n3, im_budget);
            for (int j = 0; j < kProtocolCount; ++j) record(j + 1, im.lambda[j], "Lemma4");
        } else {
            // Case II: decompose the remaining budget over the vertices of
            // the reduced region and apply the matching template at each.
            Rational n123p = rat(n.n123 - n.no);
            trace.scalars["n123_prime"] = n123p;
            std::array<size_t, 3> singles{n.n1, n.n2, n.n3};
            Rational gamma = case2_gamma(n123p, singles);
            trace.scalars["Gamma"] = gamma;
            HPolyhedron reduced = case2_reduced_region(n123p, singles, gamma);
            if (!contains_point(reduced, rem))
                throw HypothesisViolated("reduced budget outside Case-II region");
            std::vector<QVector> verts = vertices_3d(reduced);
            if (verts.empty()) throw HypothesisViolated("Case-II region has no vertices");
            // Convex weights with slack: sum w_v * v <= rem, sum w_v = 1.
            HPolyhedron wsys;
            wsys.dim_hint = verts.size();
            for (int c = 0; c < 3; ++c) {
                QVector row(verts.size());
                for (size_t v = 0; v < verts.size(); ++v) row[v] = -verts[v][c];
                wsys.add_row(std::move(row), -rem[c]);
            }
            wsys.add_row(QVector(verts.size(), Rational(1)), Rational(1));
            wsys.add_row(QVector(verts.size(), Rational(-1)), Rational(-1));
            for (size_t v = 0; v < verts.size(); ++v) {
                QVector row(verts.size(), Rational(0));
                row[v] = 1;
                wsys.add_row(std::move(row), Rational(0));
            }
            LpResult wsol = lp_feasible(wsys);
            if (wsol.status != LpStatus::Optimal)
                throw HypothesisViolated("no convex decomposition over Case-II vertices");
            for (size_t v = 0; v < verts.size(); ++v) {
                Rational w = wsol.witness[v];
                if (w == 0) continue;
                std::vector<int> tight;
                for (size_t r = 0; r < reduced.row_count(); ++r)
                    if (dot(reduced.A[r], verts[v]) == reduced.b[r])
                        tight.push_back(static_cast<int>(r) + 1);
                Recipe rec = case2_vertex(n123p, singles, verts[v], tight);
                for (const auto& s : rec.steps) record(s.protocol, s.amount * w, s.reason);
            }
        }
        Allocation out = trace.replay();
        if (!allocation_feasible(out, n, budget))
            throw HypothesisViolated("constructive allocation failed validation");
        return {out, trace};
    } catch (const std::exception&) {
        // Defensive fallback; must not trigger on valid inputs.
        auto lp = allocate_lp(n, budget);
        if (!lp) throw NotInRegion("budget outside region_standard");
        AllocationTrace fallback;
        for (int j = 0; j < kProtocolCount; ++j)
            if (lp->lambda[j] != 0) fallback.steps.push_back({j + 1, lp->lambda[j], "lp-fallback"});
        return {*lp, fallback};
    }
}

HPolyhedron restricted_region_pairwise(const NVector& n) {
    HPolyhedron sys = usage_system(n, 1, 16);
    std::set<size_t> drop;
    for (size_t j = 3; j < sys.dim(); ++j) drop.insert(j);
    return fm_eliminate(sys, drop);
}

}  // namespace lcqmac
