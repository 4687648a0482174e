#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace pht::linalg {

bool is_prime(uint32_t n);

// Arithmetic in GF(p) for a small prime p. Values are kept reduced, 0 <= v < p.
class Field {
public:
    explicit Field(uint32_t prime);

    uint32_t prime() const { return p_; }

    uint32_t add(uint32_t a, uint32_t b) const {
        uint32_t s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    uint32_t sub(uint32_t a, uint32_t b) const { return a >= b ? a - b : a + p_ - b; }
    uint32_t mul(uint32_t a, uint32_t b) const {
        return static_cast<uint32_t>((static_cast<uint64_t>(a) * b) % p_);
    }
    uint32_t neg(uint32_t a) const { return a == 0 ? 0 : p_ - a; }
    uint32_t inv(uint32_t a) const;
    uint32_t reduce(int64_t v) const {
        int64_t r = v % static_cast<int64_t>(p_);
        return static_cast<uint32_t>(r < 0 ? r + p_ : r);
    }

private:
    uint32_t p_;
};

// Dense row-major matrix over GF(p). A 0xN or Nx0 matrix is a valid object;
// the zero-dimensional cases show up constantly as homology of empty complexes.
class Matrix {
public:
    Matrix() : rows_(0), cols_(0), prime_(2) {}
    Matrix(int rows, int cols, uint32_t prime);

    static Matrix identity(int n, uint32_t prime);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    uint32_t prime() const { return prime_; }

    uint32_t at(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }
    void set(int r, int c, uint32_t v) { data_[static_cast<size_t>(r) * cols_ + c] = v; }

    const uint32_t* row(int r) const { return data_.data() + static_cast<size_t>(r) * cols_; }
    uint32_t* row(int r) { return data_.data() + static_cast<size_t>(r) * cols_; }

    bool is_zero() const;
    bool operator==(const Matrix& o) const;

    Matrix operator*(const Matrix& rhs) const;
    std::vector<uint32_t> apply(const std::vector<uint32_t>& x) const;
    Matrix transposed() const;
    Matrix hconcat(const Matrix& right) const;
    Matrix columns(const std::vector<int>& which) const;

    // Writes src into this matrix with its top-left corner at (r0, c0).
    void insert_block(int r0, int c0, const Matrix& src);
    Matrix block(int r0, int c0, int rows, int cols) const;

private:
    int rows_, cols_;
    uint32_t prime_;
    std::vector<uint32_t> data_;
};

int rank(const Matrix& m);

// Pivot column indices of (deterministic, left-to-right) elimination.
std::vector<int> pivot_columns(const Matrix& m);

// Columns form a basis of the null space {x : m x = 0}.
Matrix kernel_basis(const Matrix& m);

// Columns of m (at the pivot positions of elimination) spanning the column space.
Matrix image_basis(const Matrix& m);

struct Cokernel {
    int dim = 0;
    // Surjective (dim x rows(m)) map whose kernel is the column space of m.
    Matrix projection;
};
Cokernel cokernel(const Matrix& m);

// Solves m x = b; nullopt when b is outside the column space.
std::optional<std::vector<uint32_t>> solve_in_image(const Matrix& m, const std::vector<uint32_t>& b);

// Column-wise batch solve: X with m X = rhs, nullopt if any column is unsolvable.
std::optional<Matrix> solve_in_image(const Matrix& m, const Matrix& rhs);

// A linear map with tagged endpoint spaces. Tags exist so that accidental
// composition of maps between unrelated spaces fails loudly.
struct LinearMap {
    Matrix mat;
    int64_t domain_id = -1;
    int64_t codomain_id = -1;

    int domain_dim() const { return mat.cols(); }
    int codomain_dim() const { return mat.rows(); }

    static LinearMap identity(int64_t space_id, int dim, uint32_t prime);

    // this after rhs: (*this) o rhs. Throws when tagged identifiers do not chain.
    LinearMap compose(const LinearMap& rhs) const;
};

}  // namespace pht::linalg
