#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lcqmac/errors.hpp"

namespace lcqmac {

bool is_prime(uint32_t n);

/// Element of the prime field F_p, stored reduced to [0, p).
struct FpElement {
    uint32_t value = 0;
    uint32_t p = 2;

    FpElement() = default;
    FpElement(int64_t raw, uint32_t prime);

    friend bool operator==(const FpElement&, const FpElement&) = default;
};

FpElement field_inverse(const FpElement& a);

/// Dense matrix over F_p, row-major. All arithmetic is exact; the modulus is
/// validated (prime) at construction and shared by every entry.
class FpMatrix {
  public:
    FpMatrix() = default;
    FpMatrix(size_t rows, size_t cols, uint32_t p);
    FpMatrix(const std::vector<std::vector<int64_t>>& raw, uint32_t p);

    static FpMatrix identity(size_t n, uint32_t p);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    uint32_t modulus() const { return p_; }

    uint32_t operator()(size_t r, size_t c) const { return e_[r * cols_ + c]; }
    uint32_t& operator()(size_t r, size_t c) { return e_[r * cols_ + c]; }
    void set(size_t r, size_t c, int64_t raw);

    FpMatrix operator+(const FpMatrix& rhs) const;
    FpMatrix operator-(const FpMatrix& rhs) const;
    FpMatrix operator*(const FpMatrix& rhs) const;
    FpMatrix negated() const;
    FpMatrix scaled(int64_t factor) const;
    FpMatrix transposed() const;

    FpMatrix column(size_t c) const;
    FpMatrix columns(size_t first, size_t count) const;
    bool is_zero() const;

    friend bool operator==(const FpMatrix&, const FpMatrix&) = default;

  private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    uint32_t p_ = 2;
    std::vector<uint32_t> e_;

    void check_compatible(const FpMatrix& rhs, const char* op) const;
};

/// Horizontal concatenation [A | B | ...]; empty blocks are skipped.
FpMatrix hstack(const std::vector<FpMatrix>& blocks);

struct RrefResult {
    FpMatrix reduced;
    std::vector<size_t> pivot_columns;
    size_t rank = 0;
};

/// Unique reduced row-echelon form. Pivots are the first nonzero entry in
/// column order; everything downstream relies on this tie-break for
/// deterministic basis choices.
RrefResult rref(const FpMatrix& m);

size_t rank_of(const FpMatrix& m);

/// Solves A·X = B. Free variables are set to zero, so the solution is
/// deterministic. Returns nullopt when the system is inconsistent.
std::optional<FpMatrix> solve_linear(const FpMatrix& a, const FpMatrix& b);

/// Basis of the right nullspace, one column per free variable.
FpMatrix nullspace(const FpMatrix& a);

/// Basis of colspace(A) ∩ colspace(B); the column count always equals
/// rk(A) + rk(B) - rk([A, B]).
FpMatrix column_space_intersection(const FpMatrix& a, const FpMatrix& b);

/// Columns of `outer` that extend the columns of `inner` to a basis of
/// colspace(outer). Pre: colspace(inner) ⊆ colspace(outer).
FpMatrix basis_extension(const FpMatrix& inner, const FpMatrix& outer);

bool in_column_space(const FpMatrix& space, const FpMatrix& v);

std::optional<FpMatrix> inverse_of(const FpMatrix& a);

}  // namespace lcqmac
