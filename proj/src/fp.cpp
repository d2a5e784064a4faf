#include "lcqmac/fp.hpp"

#include <string>

namespace lcqmac {

namespace {

uint32_t reduce(int64_t raw, uint32_t p) {
    int64_t r = raw % static_cast<int64_t>(p);
    if (r < 0) r += p;
    return static_cast<uint32_t>(r);
}

uint32_t mul_mod(uint32_t a, uint32_t b, uint32_t p) {
    return static_cast<uint32_t>((static_cast<uint64_t>(a) * b) % p);
}

uint32_t pow_mod(uint32_t base, uint32_t exp, uint32_t p) {
    uint64_t acc = 1, b = base % p;
    while (exp) {
        if (exp & 1) acc = acc * b % p;
        b = b * b % p;
        exp >>= 1;
    }
    return static_cast<uint32_t>(acc);
}

void require_prime(uint32_t p) {
    if (!is_prime(p)) throw FieldError("modulus " + std::to_string(p) + " is not prime");
}

}  // namespace

bool is_prime(uint32_t n) {
    if (n < 2) return false;
    for (uint32_t d = 2; static_cast<uint64_t>(d) * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

FpElement::FpElement(int64_t raw, uint32_t prime) : p(prime) {
    require_prime(prime);
    value = reduce(raw, prime);
}

FpElement field_inverse(const FpElement& a) {
    if (a.value == 0) throw ZeroInverse();
    FpElement out;
    out.p = a.p;
    out.value = pow_mod(a.value, a.p - 2, a.p);
    return out;
}

FpMatrix::FpMatrix(size_t rows, size_t cols, uint32_t p)
    : rows_(rows), cols_(cols), p_(p), e_(rows * cols, 0) {
    require_prime(p);
}

FpMatrix::FpMatrix(const std::vector<std::vector<int64_t>>& raw, uint32_t p)
    : rows_(raw.size()), cols_(raw.empty() ? 0 : raw.front().size()), p_(p) {
    require_prime(p);
    e_.resize(rows_ * cols_);
    for (size_t r = 0; r < rows_; ++r) {
        if (raw[r].size() != cols_) throw DimensionMismatch("ragged matrix literal");
        for (size_t c = 0; c < cols_; ++c) e_[r * cols_ + c] = reduce(raw[r][c], p);
    }
}

FpMatrix FpMatrix::identity(size_t n, uint32_t p) {
    FpMatrix m(n, n, p);
    for (size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

void FpMatrix::set(size_t r, size_t c, int64_t raw) { e_[r * cols_ + c] = reduce(raw, p_); }

void FpMatrix::check_compatible(const FpMatrix& rhs, const char* op) const {
    if (p_ != rhs.p_) throw FieldError(std::string(op) + ": modulus mismatch");
}

FpMatrix FpMatrix::operator+(const FpMatrix& rhs) const {
    check_compatible(rhs, "add");
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionMismatch("add: shape mismatch");
    FpMatrix out(rows_, cols_, p_);
    for (size_t i = 0; i < e_.size(); ++i) out.e_[i] = (e_[i] + rhs.e_[i]) % p_;
    return out;
}

FpMatrix FpMatrix::operator-(const FpMatrix& rhs) const { return *this + rhs.negated(); }

FpMatrix FpMatrix::operator*(const FpMatrix& rhs) const {
    check_compatible(rhs, "mul");
    if (cols_ != rhs.rows_) throw DimensionMismatch("mul: inner dimension mismatch");
    FpMatrix out(rows_, rhs.cols_, p_);
    for (size_t r = 0; r < rows_; ++r)
        for (size_t k = 0; k < cols_; ++k) {
            uint32_t a = e_[r * cols_ + k];
            if (!a) continue;
            for (size_t c = 0; c < rhs.cols_; ++c) {
                uint64_t acc = out.e_[r * rhs.cols_ + c];
                acc += static_cast<uint64_t>(a) * rhs.e_[k * rhs.cols_ + c] % p_;
                out.e_[r * rhs.cols_ + c] = static_cast<uint32_t>(acc % p_);
            }
        }
    return out;
}

FpMatrix FpMatrix::negated() const {
    FpMatrix out(rows_, cols_, p_);
    for (size_t i = 0; i < e_.size(); ++i) out.e_[i] = e_[i] ? p_ - e_[i] : 0;
    return out;
}

FpMatrix FpMatrix::scaled(int64_t factor) const {
    uint32_t f = reduce(factor, p_);
    FpMatrix out(rows_, cols_, p_);
    for (size_t i = 0; i < e_.size(); ++i) out.e_[i] = mul_mod(e_[i], f, p_);
    return out;
}

FpMatrix FpMatrix::transposed() const {
    FpMatrix out(cols_, rows_, p_);
    for (size_t r = 0; r < rows_; ++r)
        for (size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
    return out;
}

FpMatrix FpMatrix::column(size_t c) const { return columns(c, 1); }

FpMatrix FpMatrix::columns(size_t first, size_t count) const {
    FpMatrix out(rows_, count, p_);
    for (size_t r = 0; r < rows_; ++r)
        for (size_t c = 0; c < count; ++c) out(r, c) = (*this)(r, first + c);
    return out;
}

bool FpMatrix::is_zero() const {
    for (uint32_t v : e_)
        if (v) return false;
    return true;
}

FpMatrix hstack(const std::vector<FpMatrix>& blocks) {
    size_t rows = 0, cols = 0;
    uint32_t p = 0;
    for (const auto& b : blocks) {
        if (b.cols() == 0 && b.rows() == 0) continue;
        if (p == 0) {
            rows = b.rows();
            p = b.modulus();
        }
        if (b.rows() != rows || b.modulus() != p) throw DimensionMismatch("hstack: row/modulus mismatch");
        cols += b.cols();
    }
    if (p == 0) throw DimensionMismatch("hstack: all blocks empty");
    FpMatrix out(rows, cols, p);
    size_t at = 0;
    for (const auto& b : blocks) {
        if (b.cols() == 0 && b.rows() == 0) continue;
        for (size_t r = 0; r < rows; ++r)
            for (size_t c = 0; c < b.cols(); ++c) out(r, at + c) = b(r, c);
        at += b.cols();
    }
    return out;
}

RrefResult rref(const FpMatrix& m) {
    RrefResult out{m, {}, 0};
    FpMatrix& a = out.reduced;
    const uint32_t p = a.modulus();
    size_t lead = 0;
    for (size_t col = 0; col < a.cols() && lead < a.rows(); ++col) {
        size_t pivot = lead;
        while (pivot < a.rows() && a(pivot, col) == 0) ++pivot;
        if (pivot == a.rows()) continue;
        if (pivot != lead)
            for (size_t c = 0; c < a.cols(); ++c) std::swap(a(pivot, c), a(lead, c));
        uint32_t inv = field_inverse(FpElement(a(lead, col), p)).value;
        for (size_t c = 0; c < a.cols(); ++c) a(lead, c) = mul_mod(a(lead, c), inv, p);
        for (size_t r = 0; r < a.rows(); ++r) {
            if (r == lead) continue;
            uint32_t f = a(r, col);
            if (!f) continue;
            for (size_t c = 0; c < a.cols(); ++c) {
                uint64_t sub = static_cast<uint64_t>(f) * a(lead, c) % p;
                a(r, c) = static_cast<uint32_t>((a(r, c) + p - sub) % p);
            }
        }
        out.pivot_columns.push_back(col);
        ++lead;
    }
    out.rank = out.pivot_columns.size();
    return out;
}

size_t rank_of(const FpMatrix& m) { return rref(m).rank; }

std::optional<FpMatrix> solve_linear(const FpMatrix& a, const FpMatrix& b) {
    if (a.rows() != b.rows()) throw DimensionMismatch("solve_linear: row mismatch");
    if (a.modulus() != b.modulus()) throw FieldError("solve_linear: modulus mismatch");
    RrefResult red = rref(hstack({a, b}));
    const FpMatrix& r = red.reduced;
    // Any pivot landing in the RHS block marks an inconsistent row.
    for (size_t col : red.pivot_columns)
        if (col >= a.cols()) return std::nullopt;
    FpMatrix x(a.cols(), b.cols(), a.modulus());
    for (size_t i = 0; i < red.pivot_columns.size(); ++i)
        for (size_t c = 0; c < b.cols(); ++c) x(red.pivot_columns[i], c) = r(i, a.cols() + c);
    return x;
}

FpMatrix nullspace(const FpMatrix& a) {
    RrefResult red = rref(a);
    const uint32_t p = a.modulus();
    std::vector<size_t> free_cols;
    {
        size_t next = 0;
        for (size_t c = 0; c < a.cols(); ++c) {
            if (next < red.pivot_columns.size() && red.pivot_columns[next] == c)
                ++next;
            else
                free_cols.push_back(c);
        }
    }
    FpMatrix basis(a.cols(), free_cols.size(), p);
    for (size_t k = 0; k < free_cols.size(); ++k) {
        size_t f = free_cols[k];
        basis(f, k) = 1;
        for (size_t i = 0; i < red.pivot_columns.size(); ++i) {
            uint32_t v = red.reduced(i, f);
            basis(red.pivot_columns[i], k) = v ? p - v : 0;
        }
    }
    return basis;
}

FpMatrix column_space_intersection(const FpMatrix& a, const FpMatrix& b) {
    if (a.rows() != b.rows()) throw DimensionMismatch("intersection: row mismatch");
    if (a.modulus() != b.modulus()) throw FieldError("intersection: modulus mismatch");
    if (a.cols() == 0 || b.cols() == 0) return FpMatrix(a.rows(), 0, a.modulus());
    FpMatrix joint = hstack({a, b.negated()});
    FpMatrix null = nullspace(joint);
    if (null.cols() == 0) return FpMatrix(a.rows(), 0, a.modulus());
    // Each nullspace column splits as (x; y) with A·x = B·y, so A·x generates
    // the intersection. Dependent generators are dropped via rref pivots.
    FpMatrix xa(a.cols(), null.cols(), a.modulus());
    for (size_t r = 0; r < a.cols(); ++r)
        for (size_t c = 0; c < null.cols(); ++c) xa(r, c) = null(r, c);
    FpMatrix candidates = a * xa;
    RrefResult red = rref(candidates);
    FpMatrix out(a.rows(), red.rank, a.modulus());
    for (size_t i = 0; i < red.pivot_columns.size(); ++i)
        for (size_t r = 0; r < a.rows(); ++r) out(r, i) = candidates(r, red.pivot_columns[i]);
    return out;
}

FpMatrix basis_extension(const FpMatrix& inner, const FpMatrix& outer) {
    if (inner.cols() > 0 && inner.rows() != outer.rows())
        throw DimensionMismatch("basis_extension: row mismatch");
    size_t outer_rank = rank_of(outer);
    size_t inner_rank = 0;
    if (inner.cols() > 0) {
        inner_rank = rank_of(inner);
        if (rank_of(hstack({inner, outer})) != outer_rank)
            throw NotASubspace("basis_extension: inner span not contained in outer span");
    }
    FpMatrix current =
        inner.cols() > 0 ? inner : FpMatrix(outer.rows(), 0, outer.modulus());
    size_t current_rank = inner_rank;
    std::vector<FpMatrix> picked;
    for (size_t c = 0; c < outer.cols() && current_rank < outer_rank; ++c) {
        FpMatrix cand = outer.column(c);
        FpMatrix trial = hstack({current, cand});
        size_t r = rank_of(trial);
        if (r > current_rank) {
            picked.push_back(cand);
            current = trial;
            current_rank = r;
        }
    }
    if (picked.empty()) return FpMatrix(outer.rows(), 0, outer.modulus());
    return hstack(picked);
}

bool in_column_space(const FpMatrix& space, const FpMatrix& v) {
    if (space.cols() == 0) return v.is_zero();
    return solve_linear(space, v).has_value();
}

std::optional<FpMatrix> inverse_of(const FpMatrix& a) {
    if (a.rows() != a.cols()) return std::nullopt;
    auto x = solve_linear(a, FpMatrix::identity(a.rows(), a.modulus()));
    if (!x) return std::nullopt;
    if (!(a * *x == FpMatrix::identity(a.rows(), a.modulus()))) return std::nullopt;
    return x;
}

}  // namespace lcqmac
