#include "qflux/complex_matrix.hpp"

#include <algorithm>
#include <cmath>

namespace qflux {

ComplexMatrix::ComplexMatrix(int dim, std::vector<cdouble> entries)
    : dim_(dim), entries_(std::move(entries)) {
    if (dim <= 0)
        throw ParameterOutOfRange("matrix dimension must be positive");
    if (entries_.size() != static_cast<size_t>(dim) * dim)
        throw DimensionMismatch("entry count does not match dim^2");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cdouble>> rows)
    : dim_(static_cast<int>(rows.size())) {
    if (dim_ <= 0)
        throw ParameterOutOfRange("matrix dimension must be positive");
    entries_.reserve(static_cast<size_t>(dim_) * dim_);
    for (const auto &row : rows) {
        if (static_cast<int>(row.size()) != dim_)
            throw DimensionMismatch("ragged initializer for square matrix");
        entries_.insert(entries_.end(), row.begin(), row.end());
    }
}

ComplexMatrix identity(int dim) {
    ComplexMatrix m(dim);
    for (int i = 0; i < dim; ++i)
        m(i, i) = 1.0;
    return m;
}

ComplexMatrix zeros(int dim) { return ComplexMatrix(dim); }

ComplexMatrix diagonal(const std::vector<double> &values) {
    ComplexMatrix m(static_cast<int>(values.size()));
    for (int i = 0; i < m.dim(); ++i)
        m(i, i) = values[i];
    return m;
}

static void check_same_dim(const ComplexMatrix &a, const ComplexMatrix &b, const char *op) {
    if (a.dim() != b.dim())
        throw DimensionMismatch(std::string(op) + ": dimensions differ");
}

ComplexMatrix add(const ComplexMatrix &a, const ComplexMatrix &b) {
    check_same_dim(a, b, "add");
    ComplexMatrix r(a.dim());
    for (size_t n = 0; n < a.entries().size(); ++n)
        r.entries()[n] = a.entries()[n] + b.entries()[n];
    return r;
}

ComplexMatrix sub(const ComplexMatrix &a, const ComplexMatrix &b) {
    check_same_dim(a, b, "sub");
    ComplexMatrix r(a.dim());
    for (size_t n = 0; n < a.entries().size(); ++n)
        r.entries()[n] = a.entries()[n] - b.entries()[n];
    return r;
}

ComplexMatrix mul(const ComplexMatrix &a, const ComplexMatrix &b) {
    check_same_dim(a, b, "mul");
    const int d = a.dim();
    ComplexMatrix r(d);
    for (int i = 0; i < d; ++i) {
        for (int k = 0; k < d; ++k) {
            const cdouble aik = a(i, k);
            if (aik == cdouble(0, 0))
                continue;
            for (int j = 0; j < d; ++j)
                r(i, j) += aik * b(k, j);
        }
    }
    return r;
}

ComplexMatrix scale(const cdouble &s, const ComplexMatrix &a) {
    ComplexMatrix r(a.dim());
    for (size_t n = 0; n < a.entries().size(); ++n)
        r.entries()[n] = s * a.entries()[n];
    return r;
}

ComplexMatrix adjoint(const ComplexMatrix &a) {
    const int d = a.dim();
    ComplexMatrix r(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            r(j, i) = std::conj(a(i, j));
    return r;
}

ComplexMatrix conjugate(const ComplexMatrix &a) {
    ComplexMatrix r(a.dim());
    for (size_t n = 0; n < a.entries().size(); ++n)
        r.entries()[n] = std::conj(a.entries()[n]);
    return r;
}

ComplexMatrix transpose(const ComplexMatrix &a) {
    const int d = a.dim();
    ComplexMatrix r(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            r(j, i) = a(i, j);
    return r;
}

cdouble trace(const ComplexMatrix &a) {
    cdouble t = 0;
    for (int i = 0; i < a.dim(); ++i)
        t += a(i, i);
    return t;
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    const int da = a.dim(), db = b.dim();
    ComplexMatrix r(da * db);
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < da; ++j) {
            const cdouble aij = a(i, j);
            if (aij == cdouble(0, 0))
                continue;
            for (int k = 0; k < db; ++k)
                for (int l = 0; l < db; ++l)
                    r(i * db + k, j * db + l) = aij * b(k, l);
        }
    return r;
}

double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
    check_same_dim(a, b, "max_abs_diff");
    double m = 0;
    for (size_t n = 0; n < a.entries().size(); ++n)
        m = std::max(m, std::abs(a.entries()[n] - b.entries()[n]));
    return m;
}

double max_abs(const ComplexMatrix &a) {
    double m = 0;
    for (const auto &e : a.entries())
        m = std::max(m, std::abs(e));
    return m;
}

double frobenius_norm(const ComplexMatrix &a) {
    double s = 0;
    for (const auto &e : a.entries())
        s += std::norm(e);
    return std::sqrt(s);
}

bool approx_equal(const ComplexMatrix &a, const ComplexMatrix &b, double tol) {
    return a.dim() == b.dim() && max_abs_diff(a, b) <= tol;
}

bool is_hermitian(const ComplexMatrix &a, double tol) {
    for (int i = 0; i < a.dim(); ++i)
        for (int j = i; j < a.dim(); ++j)
            if (std::abs(a(i, j) - std::conj(a(j, i))) > tol)
                return false;
    return true;
}

std::vector<cdouble> vec_row_major(const ComplexMatrix &a) { return a.entries(); }

ComplexMatrix unvec_row_major(const std::vector<cdouble> &v, int dim) {
    return ComplexMatrix(dim, v);
}

std::vector<cdouble> mat_vec(const ComplexMatrix &a, const std::vector<cdouble> &x) {
    if (x.size() != static_cast<size_t>(a.dim()))
        throw DimensionMismatch("mat_vec: vector length does not match matrix dim");
    std::vector<cdouble> y(x.size());
    for (int i = 0; i < a.dim(); ++i) {
        cdouble s = 0;
        for (int j = 0; j < a.dim(); ++j)
            s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

} // namespace qflux
