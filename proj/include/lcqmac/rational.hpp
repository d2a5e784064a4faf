#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "lcqmac/errors.hpp"

namespace lcqmac {

/// Exact rational number. Backed by GMP; always kept in canonical form
/// (coprime numerator/denominator, positive denominator).
using Rational = mpq_class;

using QVector = std::vector<Rational>;
using QMatrix = std::vector<QVector>;

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw ParseError("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// Parses "a", "-a" or "a/b". Used for cost tuples and JSON payloads.
Rational parse_rational(const std::string& text);

/// Renders "num" when the denominator is 1, "num/den" otherwise.
std::string to_string(const Rational& value);

QVector parse_rational_csv(const std::string& text);

inline Rational dot(const QVector& lhs, const QVector& rhs) {
    if (lhs.size() != rhs.size()) throw DimensionMismatch("dot: length mismatch");
    Rational acc = 0;
    for (size_t i = 0; i < lhs.size(); ++i) acc += lhs[i] * rhs[i];
    return acc;
}

}  // namespace lcqmac
