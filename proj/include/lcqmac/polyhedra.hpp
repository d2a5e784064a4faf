#pragma once

#include <cstddef>
#include <set>
#include <vector>

#include "lcqmac/rational.hpp"

namespace lcqmac {

/// Polyhedron in H-representation: { x : A·x >= b }. Rows may be redundant
/// unless the instance came out of remove_redundant.
struct HPolyhedron {
    QMatrix A;
    QVector b;

    size_t dim() const { return A.empty() ? dim_hint : A.front().size(); }
    size_t row_count() const { return A.size(); }

    /// Dimension to report when there are no rows (whole space).
    size_t dim_hint = 0;

    void add_row(QVector coef, Rational rhs);
};

enum class LpSense { Minimize, Maximize };
enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    Rational optimum = 0;
    QVector witness;
};

/// Exact LP over {x : A·x >= b} with free variables. Two-phase dense simplex
/// with Bland's anti-cycling rule; fully deterministic.
LpResult lp_solve(const HPolyhedron& poly, const QVector& objective, LpSense sense);

/// Feasibility probe (zero objective); witness populated when feasible.
LpResult lp_feasible(const HPolyhedron& poly);

/// Fourier-Motzkin projection onto the coordinates not in `drop`. Variables
/// are eliminated one at a time in ascending index order, with redundancy
/// pruning after every elimination to keep the row count in check. The
/// result uses the surviving coordinates in their original relative order.
HPolyhedron fm_eliminate(const HPolyhedron& poly, const std::set<size_t>& drop);

/// Irredundant H-representation with the feasible set unchanged. Every
/// retained row carries an LP certificate of irredundancy. Candidate rows
/// are certified concurrently (OpenMP); the outcome is identical to the
/// serial reference below for any thread count.
HPolyhedron remove_redundant(const HPolyhedron& poly);

/// Serial reference implementation of remove_redundant, kept for testing and
/// benchmarking against the parallel kernel.
HPolyhedron remove_redundant_serial(const HPolyhedron& poly);

/// All vertices (0-faces) of a 3-dimensional polyhedron, via enumeration of
/// row triples; deduplicated and sorted lexicographically. The polyhedron may
/// be unbounded.
std::vector<QVector> vertices_3d(const HPolyhedron& poly);

struct PolyEqualResult {
    bool equal = false;
    /// On failure: a point contained in exactly one of the two sets.
    QVector witness;
    /// 0 = witness lies in p only, 1 = witness lies in q only.
    int witness_side = 0;
};

/// Decides set equality of two H-representations by per-row LP implication.
PolyEqualResult poly_equal(const HPolyhedron& p, const HPolyhedron& q);

/// True when every point of p satisfies coef·x >= rhs.
bool implies_row(const HPolyhedron& p, const QVector& coef, const Rational& rhs);

bool contains_point(const HPolyhedron& poly, const QVector& x, size_t* violated_row = nullptr);

/// Scales a row so that the coefficients are coprime integers; used for
/// syntactic deduplication before any LP work.
void normalize_row(QVector& coef, Rational& rhs);

}  // namespace lcqmac
