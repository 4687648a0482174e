#include "pht/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace pht::linalg {

bool is_prime(uint32_t n) {
    if (n < 2) return false;
    for (uint32_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

Field::Field(uint32_t prime) : p_(prime) {
    if (!is_prime(prime)) throw std::invalid_argument("field characteristic must be prime");
}

uint32_t Field::inv(uint32_t a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    // Extended Euclid on (a, p).
    int64_t t = 0, new_t = 1;
    int64_t r = p_, new_r = a % p_;
    while (new_r != 0) {
        int64_t q = r / new_r;
        t -= q * new_t;
        std::swap(t, new_t);
        r -= q * new_r;
        std::swap(r, new_r);
    }
    if (r != 1) throw std::domain_error("value not invertible");
    return reduce(t);
}

Matrix::Matrix(int rows, int cols, uint32_t prime)
    : rows_(rows), cols_(cols), prime_(prime),
      data_(static_cast<size_t>(rows) * static_cast<size_t>(cols), 0) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
}

Matrix Matrix::identity(int n, uint32_t prime) {
    Matrix m(n, n, prime);
    for (int i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

bool Matrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](uint32_t v) { return v == 0; });
}

bool Matrix::operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && prime_ == o.prime_ && data_ == o.data_;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_ || prime_ != rhs.prime_)
        throw std::invalid_argument("matrix product shape/field mismatch");
    Matrix out(rows_, rhs.cols_, prime_);
    const uint64_t p = prime_;
    for (int i = 0; i < rows_; ++i) {
        const uint32_t* a = row(i);
        uint32_t* o = out.row(i);
        for (int k = 0; k < cols_; ++k) {
            uint64_t aik = a[k];
            if (aik == 0) continue;
            const uint32_t* b = rhs.row(k);
            for (int j = 0; j < rhs.cols_; ++j) {
                o[j] = static_cast<uint32_t>((o[j] + aik * b[j]) % p);
            }
        }
    }
    return out;
}

std::vector<uint32_t> Matrix::apply(const std::vector<uint32_t>& x) const {
    if (static_cast<int>(x.size()) != cols_) throw std::invalid_argument("apply: size mismatch");
    std::vector<uint32_t> out(rows_, 0);
    const uint64_t p = prime_;
    for (int i = 0; i < rows_; ++i) {
        uint64_t acc = 0;
        const uint32_t* a = row(i);
        for (int j = 0; j < cols_; ++j) acc += static_cast<uint64_t>(a[j]) * x[j] % p;
        out[i] = static_cast<uint32_t>(acc % p);
    }
    return out;
}

Matrix Matrix::transposed() const {
    Matrix out(cols_, rows_, prime_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out.set(j, i, at(i, j));
    return out;
}

Matrix Matrix::hconcat(const Matrix& right) const {
    if (rows_ != right.rows_ || prime_ != right.prime_)
        throw std::invalid_argument("hconcat shape/field mismatch");
    Matrix out(rows_, cols_ + right.cols_, prime_);
    for (int i = 0; i < rows_; ++i) {
        std::copy(row(i), row(i) + cols_, out.row(i));
        std::copy(right.row(i), right.row(i) + right.cols_, out.row(i) + cols_);
    }
    return out;
}

Matrix Matrix::columns(const std::vector<int>& which) const {
    Matrix out(rows_, static_cast<int>(which.size()), prime_);
    for (int i = 0; i < rows_; ++i)
        for (size_t j = 0; j < which.size(); ++j) out.set(i, static_cast<int>(j), at(i, which[j]));
    return out;
}

void Matrix::insert_block(int r0, int c0, const Matrix& src) {
    if (r0 + src.rows_ > rows_ || c0 + src.cols_ > cols_)
        throw std::invalid_argument("insert_block out of range");
    for (int i = 0; i < src.rows_; ++i)
        std::copy(src.row(i), src.row(i) + src.cols_, row(r0 + i) + c0);
}

Matrix Matrix::block(int r0, int c0, int rows, int cols) const {
    if (r0 + rows > rows_ || c0 + cols > cols_) throw std::invalid_argument("block out of range");
    Matrix out(rows, cols, prime_);
    for (int i = 0; i < rows; ++i) std::copy(row(r0 + i) + c0, row(r0 + i) + c0 + cols, out.row(i));
    return out;
}

namespace {

struct Echelon {
    Matrix reduced;               // row-reduced form
    std::vector<int> pivot_cols;  // pivot column per produced row, ascending
};

// Reduced row echelon form; pivots chosen left to right so that all derived
// bases are deterministic for a fixed input.
Echelon rref(const Matrix& m) {
    Echelon e{m, {}};
    Field f(m.prime());
    Matrix& a = e.reduced;
    int r = 0;
    for (int c = 0; c < a.cols() && r < a.rows(); ++c) {
        int piv = -1;
        for (int i = r; i < a.rows(); ++i) {
            if (a.at(i, c) != 0) { piv = i; break; }
        }
        if (piv < 0) continue;
        if (piv != r) {
            for (int j = 0; j < a.cols(); ++j) {
                uint32_t tmp = a.at(r, j);
                a.set(r, j, a.at(piv, j));
                a.set(piv, j, tmp);
            }
        }
        uint32_t s = f.inv(a.at(r, c));
        if (s != 1) {
            for (int j = 0; j < a.cols(); ++j) a.set(r, j, f.mul(a.at(r, j), s));
        }
        for (int i = 0; i < a.rows(); ++i) {
            if (i == r) continue;
            uint32_t v = a.at(i, c);
            if (v == 0) continue;
            for (int j = 0; j < a.cols(); ++j)
                a.set(i, j, f.sub(a.at(i, j), f.mul(v, a.at(r, j))));
        }
        e.pivot_cols.push_back(c);
        ++r;
    }
    return e;
}

}  // namespace

int rank(const Matrix& m) { return static_cast<int>(rref(m).pivot_cols.size()); }

std::vector<int> pivot_columns(const Matrix& m) { return rref(m).pivot_cols; }

Matrix kernel_basis(const Matrix& m) {
    Echelon e = rref(m);
    Field f(m.prime());
    std::vector<char> is_pivot(m.cols(), 0);
    for (int c : e.pivot_cols) is_pivot[c] = 1;
    int free_count = m.cols() - static_cast<int>(e.pivot_cols.size());
    Matrix out(m.cols(), free_count, m.prime());
    int k = 0;
    for (int c = 0; c < m.cols(); ++c) {
        if (is_pivot[c]) continue;
        out.set(c, k, 1);
        for (size_t r = 0; r < e.pivot_cols.size(); ++r) {
            uint32_t v = e.reduced.at(static_cast<int>(r), c);
            if (v != 0) out.set(e.pivot_cols[r], k, f.neg(v));
        }
        ++k;
    }
    return out;
}

Matrix image_basis(const Matrix& m) { return m.columns(rref(m).pivot_cols); }

Cokernel cokernel(const Matrix& m) {
    // Eliminate [m | I]; rows without a pivot in the m-part carry the quotient
    // coordinates, and the I-part of those rows is the projection.
    Matrix aug = m.hconcat(Matrix::identity(m.rows(), m.prime()));
    Echelon e = rref(aug);
    Cokernel out;
    std::vector<int> coker_rows;
    for (size_t r = 0; r < e.pivot_cols.size(); ++r) {
        if (e.pivot_cols[r] >= m.cols()) coker_rows.push_back(static_cast<int>(r));
    }
    out.dim = static_cast<int>(coker_rows.size());
    out.projection = Matrix(out.dim, m.rows(), m.prime());
    for (int i = 0; i < out.dim; ++i) {
        for (int j = 0; j < m.rows(); ++j)
            out.projection.set(i, j, e.reduced.at(coker_rows[i], m.cols() + j));
    }
    return out;
}

std::optional<Matrix> solve_in_image(const Matrix& m, const Matrix& rhs) {
    if (m.rows() != rhs.rows()) throw std::invalid_argument("solve_in_image: row mismatch");
    Echelon e = rref(m.hconcat(rhs));
    Field f(m.prime());
    // Any pivot landing in the rhs side witnesses an unsolvable column.
    for (int c : e.pivot_cols) {
        if (c >= m.cols()) return std::nullopt;
    }
    Matrix x(m.cols(), rhs.cols(), m.prime());
    for (size_t r = 0; r < e.pivot_cols.size(); ++r) {
        for (int j = 0; j < rhs.cols(); ++j)
            x.set(e.pivot_cols[r], j, e.reduced.at(static_cast<int>(r), m.cols() + j));
    }
    (void)f;
    return x;
}

std::optional<std::vector<uint32_t>> solve_in_image(const Matrix& m, const std::vector<uint32_t>& b) {
    if (static_cast<int>(b.size()) != m.rows()) throw std::invalid_argument("solve_in_image: size mismatch");
    Matrix rhs(m.rows(), 1, m.prime());
    for (int i = 0; i < m.rows(); ++i) rhs.set(i, 0, b[i]);
    auto x = solve_in_image(m, rhs);
    if (!x) return std::nullopt;
    std::vector<uint32_t> out(m.cols());
    for (int i = 0; i < m.cols(); ++i) out[i] = x->at(i, 0);
    return out;
}

LinearMap LinearMap::identity(int64_t space_id, int dim, uint32_t prime) {
    return LinearMap{Matrix::identity(dim, prime), space_id, space_id};
}

LinearMap LinearMap::compose(const LinearMap& rhs) const {
    if (domain_id >= 0 && rhs.codomain_id >= 0 && domain_id != rhs.codomain_id)
        throw std::invalid_argument("composition of maps whose spaces do not chain");
    return LinearMap{mat * rhs.mat, rhs.domain_id, codomain_id};
}

}  // namespace pht::linalg
