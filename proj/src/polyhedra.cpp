#include "lcqmac/polyhedra.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lcqmac {

void HPolyhedron::add_row(QVector coef, Rational rhs) {
    if (!A.empty() && coef.size() != A.front().size())
        throw DimensionMismatch("add_row: coefficient length mismatch");
    if (A.empty()) dim_hint = coef.size();
    A.push_back(std::move(coef));
    b.push_back(std::move(rhs));
}

namespace {

// Dense two-phase tableau simplex over exact rationals.
//
// min c·x subject to A x >= b, x free. Internally x = u - v with u, v >= 0
// and one surplus variable per row; rows with negative rhs are negated so
// every initial rhs is nonnegative. Artificials are added only where the
// surplus cannot serve as the initial basic variable. Entering variable:
// lowest index with negative reduced cost; leaving: lowest basic index among
// ratio ties (Bland).
class Simplex {
  public:
    Simplex(const HPolyhedron& poly, const QVector& cost) : n_(poly.dim()), m_(poly.row_count()) {
        num_structural_ = 2 * n_ + m_;
        rows_.assign(m_, QVector(num_structural_, Rational(0)));
        rhs_.assign(m_, Rational(0));
        basis_.assign(m_, 0);
        std::vector<size_t> needs_artificial;
        for (size_t i = 0; i < m_; ++i) {
            // Row "A x - s = b": when b <= 0 the negated row has rhs >= 0 and
            // surplus coefficient +1, so s can start in the basis; rows with
            // b > 0 keep their sign and get an artificial instead.
            bool flip = poly.b[i] <= 0;
            Rational sign = flip ? Rational(-1) : Rational(1);
            for (size_t j = 0; j < n_; ++j) {
                rows_[i][j] = sign * poly.A[i][j];
                rows_[i][n_ + j] = -sign * poly.A[i][j];
            }
            rows_[i][2 * n_ + i] = -sign;
            rhs_[i] = sign * poly.b[i];
            if (flip)
                basis_[i] = 2 * n_ + i;
            else
                needs_artificial.push_back(i);
        }
        total_ = num_structural_ + needs_artificial.size();
        for (auto& row : rows_) row.resize(total_, Rational(0));
        size_t k = num_structural_;
        for (size_t i : needs_artificial) {
            rows_[i][k] = 1;
            basis_[i] = k;
            ++k;
        }

        cost_.assign(total_, Rational(0));
        for (size_t j = 0; j < n_; ++j) {
            cost_[j] = cost[j];
            cost_[n_ + j] = -cost[j];
        }
    }

    LpResult run() {
        LpResult out;
        if (!phase1()) {
            out.status = LpStatus::Infeasible;
            return out;
        }
        int rc = phase2();
        if (rc < 0) {
            out.status = LpStatus::Unbounded;
            return out;
        }
        out.status = LpStatus::Optimal;
        QVector full(total_, Rational(0));
        for (size_t i = 0; i < m_; ++i) full[basis_[i]] = rhs_[i];
        out.witness.assign(n_, Rational(0));
        Rational value = 0;
        for (size_t j = 0; j < n_; ++j) out.witness[j] = full[j] - full[n_ + j];
        for (size_t j = 0; j < total_; ++j) value += cost_[j] * full[j];
        out.optimum = value;
        return out;
    }

  private:
    size_t n_, m_, num_structural_ = 0, total_ = 0;
    std::vector<QVector> rows_;
    QVector rhs_;
    std::vector<size_t> basis_;
    QVector cost_;

    void pivot(size_t r, size_t col, QVector& reduced, Rational& objective) {
        Rational inv = 1 / rows_[r][col];
        for (auto& v : rows_[r]) v *= inv;
        rhs_[r] *= inv;
        for (size_t i = 0; i < m_; ++i) {
            if (i == r || rows_[i][col] == 0) continue;
            Rational f = rows_[i][col];
            for (size_t j = 0; j < total_; ++j)
                if (rows_[r][j] != 0) rows_[i][j] -= f * rows_[r][j];
            rows_[i][col] = 0;
            rhs_[i] -= f * rhs_[r];
        }
        if (reduced[col] != 0) {
            Rational f = reduced[col];
            for (size_t j = 0; j < total_; ++j)
                if (rows_[r][j] != 0) reduced[j] -= f * rows_[r][j];
            reduced[col] = 0;
            objective -= f * rhs_[r];
        }
        basis_[r] = col;
    }

    // Returns false on "no entering column" (optimal), true when a pivot
    // happened, throws nothing; unbounded is signalled via *unbounded.
    bool bland_step(QVector& reduced, Rational& objective, size_t limit, bool* unbounded) {
        size_t enter = total_;
        for (size_t j = 0; j < limit; ++j)
            if (reduced[j] < 0) {
                enter = j;
                break;
            }
        if (enter == total_) return false;
        size_t leave = m_;
        Rational best_ratio = 0;
        for (size_t i = 0; i < m_; ++i) {
            if (rows_[i][enter] <= 0) continue;
            Rational ratio = rhs_[i] / rows_[i][enter];
            if (leave == m_ || ratio < best_ratio ||
                (ratio == best_ratio && basis_[i] < basis_[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave == m_) {
            *unbounded = true;
            return false;
        }
        pivot(leave, enter, reduced, objective);
        return true;
    }

    bool phase1() {
        if (total_ == num_structural_) return true;  // no artificials needed
        QVector reduced(total_, Rational(0));
        Rational objective = 0;
        for (size_t j = num_structural_; j < total_; ++j) reduced[j] = 1;
        for (size_t i = 0; i < m_; ++i) {
            if (basis_[i] < num_structural_) continue;
            for (size_t j = 0; j < total_; ++j) reduced[j] -= rows_[i][j];
            objective -= rhs_[i];
        }
        bool unbounded = false;
        while (bland_step(reduced, objective, num_structural_, &unbounded)) {
        }
        // objective holds -(sum of artificials); zero iff feasible.
        if (objective != 0) return false;
        // Pivot leftover artificials out of the basis, dropping rows that
        // turn out to be implied equalities.
        for (size_t i = 0; i < m_; ++i) {
            if (basis_[i] < num_structural_) continue;
            size_t col = num_structural_;
            for (size_t j = 0; j < num_structural_; ++j)
                if (rows_[i][j] != 0) {
                    col = j;
                    break;
                }
            if (col == num_structural_) {
                for (size_t j = 0; j < total_; ++j) rows_[i][j] = 0;
                rhs_[i] = 0;  // degenerate row; harmless to keep zeroed
                continue;
            }
            QVector dummy(total_, Rational(0));
            Rational dummy_obj = 0;
            pivot(i, col, dummy, dummy_obj);
        }
        return true;
    }

    int phase2() {
        QVector reduced = cost_;
        Rational objective = 0;
        for (size_t i = 0; i < m_; ++i) {
            if (reduced[basis_[i]] == 0) continue;
            Rational f = reduced[basis_[i]];
            for (size_t j = 0; j < total_; ++j)
                if (rows_[i][j] != 0) reduced[j] -= f * rows_[i][j];
            reduced[basis_[i]] = 0;
            objective -= f * rhs_[i];
        }
        bool unbounded = false;
        while (bland_step(reduced, objective, num_structural_, &unbounded)) {
        }
        return unbounded ? -1 : 0;
    }
};

struct NormalRow {
    QVector coef;
    Rational rhs;
};

NormalRow normalized(const QVector& coef, const Rational& rhs) {
    NormalRow out{coef, rhs};
    normalize_row(out.coef, out.rhs);
    return out;
}

// Syntactic cleanup: scale rows to primitive integer coefficients, drop
// trivially true rows, merge parallel rows keeping the strongest rhs.
// Returns false when a row 0 >= positive makes the system infeasible.
bool syntactic_prune(std::vector<NormalRow>& rows) {
    std::map<QVector, size_t> seen;
    std::vector<NormalRow> kept;
    for (auto& row : rows) {
        bool all_zero = std::all_of(row.coef.begin(), row.coef.end(),
                                    [](const Rational& v) { return v == 0; });
        if (all_zero) {
            if (row.rhs > 0) return false;
            continue;
        }
        auto it = seen.find(row.coef);
        if (it == seen.end()) {
            seen.emplace(row.coef, kept.size());
            kept.push_back(std::move(row));
        } else if (row.rhs > kept[it->second].rhs) {
            kept[it->second].rhs = row.rhs;
        }
    }
    rows = std::move(kept);
    return true;
}

HPolyhedron from_rows(const std::vector<NormalRow>& rows, size_t dim) {
    HPolyhedron out;
    out.dim_hint = dim;
    for (const auto& r : rows) out.add_row(r.coef, r.rhs);
    return out;
}

HPolyhedron infeasible_marker(size_t dim) {
    HPolyhedron out;
    out.dim_hint = dim;
    out.add_row(QVector(dim, Rational(0)), Rational(1));
    return out;
}

HPolyhedron without_row(const HPolyhedron& poly, size_t skip) {
    HPolyhedron out;
    out.dim_hint = poly.dim();
    for (size_t i = 0; i < poly.row_count(); ++i)
        if (i != skip) out.add_row(poly.A[i], poly.b[i]);
    return out;
}

bool row_redundant_against(const HPolyhedron& others, const QVector& coef, const Rational& rhs) {
    LpResult r = lp_solve(others, coef, LpSense::Minimize);
    if (r.status == LpStatus::Infeasible) return true;
    if (r.status == LpStatus::Unbounded) return false;
    return r.optimum >= rhs;
}

HPolyhedron prune_impl(const HPolyhedron& poly, bool parallel) {
    size_t dim = poly.dim();
    std::vector<NormalRow> rows;
    rows.reserve(poly.row_count());
    for (size_t i = 0; i < poly.row_count(); ++i) rows.push_back(normalized(poly.A[i], poly.b[i]));
    if (!syntactic_prune(rows)) return infeasible_marker(dim);
    HPolyhedron deduped = from_rows(rows, dim);
    if (deduped.row_count() == 0) return deduped;
    if (lp_feasible(deduped).status == LpStatus::Infeasible) return infeasible_marker(dim);

    size_t m = deduped.row_count();
    // Phase 1: each row tested against all the others. Rows that fail this
    // test are irredundant for every subset, so only flagged rows need the
    // sequential confirmation pass below.
    std::vector<char> candidate(m, 0);
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (size_t i = 0; i < m; ++i)
            candidate[i] =
                row_redundant_against(without_row(deduped, i), deduped.A[i], deduped.b[i]);
    } else {
        for (size_t i = 0; i < m; ++i)
            candidate[i] =
                row_redundant_against(without_row(deduped, i), deduped.A[i], deduped.b[i]);
    }

    // Phase 2: confirm flagged rows in index order against the shrinking
    // survivor set; this matches the serial sweep exactly.
    std::vector<char> removed(m, 0);
    bool any_removed = false;
    for (size_t i = 0; i < m; ++i) {
        if (!candidate[i]) continue;
        bool drop;
        if (!any_removed) {
            drop = true;  // phase-1 test was against exactly the current set
        } else {
            HPolyhedron others;
            others.dim_hint = dim;
            for (size_t j = 0; j < m; ++j)
                if (j != i && !removed[j]) others.add_row(deduped.A[j], deduped.b[j]);
            drop = row_redundant_against(others, deduped.A[i], deduped.b[i]);
        }
        if (drop) {
            removed[i] = 1;
            any_removed = true;
        }
    }
    HPolyhedron out;
    out.dim_hint = dim;
    for (size_t i = 0; i < m; ++i)
        if (!removed[i]) out.add_row(deduped.A[i], deduped.b[i]);
    return out;
}

}  // namespace

void normalize_row(QVector& coef, Rational& rhs) {
    mpz_class scale = 1;
    for (const auto& v : coef) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), v.get_den().get_mpz_t());
    mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), rhs.get_den().get_mpz_t());
    mpz_class g = 0;
    for (const auto& v : coef) {
        mpz_class scaled_num = v.get_num() * (scale / v.get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), scaled_num.get_mpz_t());
    }
    if (g == 0) g = 1;
    Rational factor(scale, g);
    factor.canonicalize();
    for (auto& v : coef) v *= factor;
    rhs *= factor;
}

LpResult lp_solve(const HPolyhedron& poly, const QVector& objective, LpSense sense) {
    if (objective.size() != poly.dim())
        throw DimensionMismatch("lp_solve: objective length != polyhedron dimension");
    QVector cost = objective;
    if (sense == LpSense::Maximize)
        for (auto& v : cost) v = -v;
    Simplex solver(poly, cost);
    LpResult out = solver.run();
    if (out.status == LpStatus::Optimal && sense == LpSense::Maximize) out.optimum = -out.optimum;
    return out;
}

LpResult lp_feasible(const HPolyhedron& poly) {
    return lp_solve(poly, QVector(poly.dim(), Rational(0)), LpSense::Minimize);
}

bool implies_row(const HPolyhedron& p, const QVector& coef, const Rational& rhs) {
    LpResult r = lp_solve(p, coef, LpSense::Minimize);
    if (r.status == LpStatus::Infeasible) return true;
    if (r.status == LpStatus::Unbounded) return false;
    return r.optimum >= rhs;
}

bool contains_point(const HPolyhedron& poly, const QVector& x, size_t* violated_row) {
    if (x.size() != poly.dim()) throw DimensionMismatch("contains_point: length mismatch");
    for (size_t i = 0; i < poly.row_count(); ++i) {
        if (dot(poly.A[i], x) < poly.b[i]) {
            if (violated_row) *violated_row = i;
            return false;
        }
    }
    return true;
}

HPolyhedron fm_eliminate(const HPolyhedron& poly, const std::set<size_t>& drop) {
    size_t dim = poly.dim();
    for (size_t idx : drop)
        if (idx >= dim) throw DimensionMismatch("fm_eliminate: drop index out of range");

    // Live columns, in original order; `cols[j]` is the original index.
    std::vector<size_t> cols(dim);
    std::iota(cols.begin(), cols.end(), 0);

    std::vector<NormalRow> rows;
    for (size_t i = 0; i < poly.row_count(); ++i) rows.push_back(normalized(poly.A[i], poly.b[i]));

    bool feasible = true;
    for (size_t target : drop) {
        size_t j = std::find(cols.begin(), cols.end(), target) - cols.begin();
        std::vector<size_t> pos, neg;
        std::vector<NormalRow> next;
        for (size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].coef[j] > 0)
                pos.push_back(i);
            else if (rows[i].coef[j] < 0)
                neg.push_back(i);
            else
                next.push_back(rows[i]);
        }
        for (size_t p : pos)
            for (size_t q : neg) {
                // Positive combination cancelling column j.
                Rational fp = -rows[q].coef[j];
                Rational fq = rows[p].coef[j];
                QVector coef(rows[p].coef.size());
                for (size_t k = 0; k < coef.size(); ++k)
                    coef[k] = fp * rows[p].coef[k] + fq * rows[q].coef[k];
                Rational rhs = fp * rows[p].rhs + fq * rows[q].rhs;
                next.push_back(normalized(coef, rhs));
            }
        for (auto& r : next) r.coef.erase(r.coef.begin() + static_cast<long>(j));
        cols.erase(cols.begin() + static_cast<long>(j));
        if (!syntactic_prune(next)) {
            feasible = false;
            rows.clear();
            break;
        }
        HPolyhedron pruned = remove_redundant(from_rows(next, cols.size()));
        rows.clear();
        for (size_t i = 0; i < pruned.row_count(); ++i)
            rows.push_back(normalized(pruned.A[i], pruned.b[i]));
        if (pruned.row_count() == 1 &&
            std::all_of(pruned.A[0].begin(), pruned.A[0].end(),
                        [](const Rational& v) { return v == 0; }) &&
            pruned.b[0] > 0) {
            feasible = false;
            rows.clear();
            break;
        }
    }
    size_t out_dim = dim - drop.size();
    if (!feasible) return infeasible_marker(out_dim);
    return from_rows(rows, out_dim);
}

HPolyhedron remove_redundant(const HPolyhedron& poly) { return prune_impl(poly, true); }

HPolyhedron remove_redundant_serial(const HPolyhedron& poly) { return prune_impl(poly, false); }

std::vector<QVector> vertices_3d(const HPolyhedron& poly) {
    if (poly.dim() != 3) throw NotThreeDimensional("vertices_3d: dimension must be 3");
    std::vector<QVector> found;
    size_t m = poly.row_count();
    for (size_t i = 0; i < m; ++i)
        for (size_t j = i + 1; j < m; ++j)
            for (size_t k = j + 1; k < m; ++k) {
                // Solve the 3x3 system of tight rows by Cramer's rule.
                const QVector &r0 = poly.A[i], &r1 = poly.A[j], &r2 = poly.A[k];
                Rational det = r0[0] * (r1[1] * r2[2] - r1[2] * r2[1]) -
                               r0[1] * (r1[0] * r2[2] - r1[2] * r2[0]) +
                               r0[2] * (r1[0] * r2[1] - r1[1] * r2[0]);
                if (det == 0) continue;
                Rational b0 = poly.b[i], b1 = poly.b[j], b2 = poly.b[k];
                Rational x = b0 * (r1[1] * r2[2] - r1[2] * r2[1]) -
                             r0[1] * (b1 * r2[2] - r1[2] * b2) +
                             r0[2] * (b1 * r2[1] - r1[1] * b2);
                Rational y = r0[0] * (b1 * r2[2] - r1[2] * b2) -
                             b0 * (r1[0] * r2[2] - r1[2] * r2[0]) +
                             r0[2] * (r1[0] * b2 - b1 * r2[0]);
                Rational z = r0[0] * (r1[1] * b2 - b1 * r2[1]) -
                             r0[1] * (r1[0] * b2 - b1 * r2[0]) +
                             b0 * (r1[0] * r2[1] - r1[1] * r2[0]);
                QVector v{x / det, y / det, z / det};
                if (contains_point(poly, v)) found.push_back(std::move(v));
            }
    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());
    return found;
}

PolyEqualResult poly_equal(const HPolyhedron& p, const HPolyhedron& q) {
    if (p.dim() != q.dim()) throw DimensionMismatch("poly_equal: dimension mismatch");
    LpResult pf = lp_feasible(p);
    LpResult qf = lp_feasible(q);
    if (pf.status == LpStatus::Infeasible && qf.status == LpStatus::Infeasible) return {true, {}, 0};
    if (pf.status == LpStatus::Infeasible) return {false, qf.witness, 1};
    if (qf.status == LpStatus::Infeasible) return {false, pf.witness, 0};
    // A violating point when the row minimum is unbounded below: cap the
    // objective from below and re-solve; if even the capped system is empty,
    // every point of the outer set violates, so any feasible point works.
    auto unbounded_witness = [](const HPolyhedron& outer, const QVector& coef,
                                const Rational& rhs) -> QVector {
        HPolyhedron capped = outer;
        capped.add_row(coef, rhs - 1);
        LpResult r = lp_solve(capped, coef, LpSense::Minimize);
        if (r.status == LpStatus::Optimal) return r.witness;
        return lp_feasible(outer).witness;
    };
    for (size_t i = 0; i < q.row_count(); ++i) {
        LpResult r = lp_solve(p, q.A[i], LpSense::Minimize);
        if (r.status == LpStatus::Unbounded)
            return {false, unbounded_witness(p, q.A[i], q.b[i]), 0};
        if (r.optimum < q.b[i]) return {false, r.witness, 0};
    }
    for (size_t i = 0; i < p.row_count(); ++i) {
        LpResult r = lp_solve(q, p.A[i], LpSense::Minimize);
        if (r.status == LpStatus::Unbounded)
            return {false, unbounded_witness(q, p.A[i], p.b[i]), 1};
        if (r.optimum < p.b[i]) return {false, r.witness, 1};
    }
    return {true, {}, 0};
}

}  // namespace lcqmac
