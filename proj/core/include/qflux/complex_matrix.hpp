#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

#include "qflux/errors.hpp"
#include "qflux/tolerances.hpp"

namespace qflux {

using cdouble = std::complex<double>;

// Dense square complex matrix, row-major. The universal numeric carrier for
// operators, states and superoperators; immutable by convention once built
// (all operations return fresh values).
class ComplexMatrix {
  public:
    ComplexMatrix() : dim_(0) {}
    explicit ComplexMatrix(int dim) : dim_(dim), entries_(static_cast<size_t>(dim) * dim) {
        if (dim <= 0)
            throw ParameterOutOfRange("matrix dimension must be positive");
    }
    ComplexMatrix(int dim, std::vector<cdouble> entries);
    // Row-by-row brace construction, e.g. {{1, 0}, {0, 1}}.
    ComplexMatrix(std::initializer_list<std::initializer_list<cdouble>> rows);

    int dim() const { return dim_; }

    cdouble &operator()(int row, int col) { return entries_[static_cast<size_t>(row) * dim_ + col]; }
    const cdouble &operator()(int row, int col) const {
        return entries_[static_cast<size_t>(row) * dim_ + col];
    }

    const std::vector<cdouble> &entries() const { return entries_; }
    std::vector<cdouble> &entries() { return entries_; }

  private:
    int dim_;
    std::vector<cdouble> entries_;
};

ComplexMatrix identity(int dim);
ComplexMatrix zeros(int dim);
ComplexMatrix diagonal(const std::vector<double> &values);

ComplexMatrix add(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexMatrix sub(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexMatrix mul(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexMatrix scale(const cdouble &s, const ComplexMatrix &a);
ComplexMatrix adjoint(const ComplexMatrix &a);
ComplexMatrix conjugate(const ComplexMatrix &a);
ComplexMatrix transpose(const ComplexMatrix &a);
cdouble trace(const ComplexMatrix &a);
ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);

inline ComplexMatrix operator+(const ComplexMatrix &a, const ComplexMatrix &b) { return add(a, b); }
inline ComplexMatrix operator-(const ComplexMatrix &a, const ComplexMatrix &b) { return sub(a, b); }
inline ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) { return mul(a, b); }
inline ComplexMatrix operator*(const cdouble &s, const ComplexMatrix &a) { return scale(s, a); }
inline ComplexMatrix operator*(double s, const ComplexMatrix &a) { return scale(cdouble(s, 0), a); }

// Largest entrywise absolute difference.
double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b);
double max_abs(const ComplexMatrix &a);
double frobenius_norm(const ComplexMatrix &a);

bool approx_equal(const ComplexMatrix &a, const ComplexMatrix &b,
                  double tol = default_tolerances().matrix_equality);
bool is_hermitian(const ComplexMatrix &a, double tol = default_tolerances().hermiticity);

// Row-major vectorization: vec(A)[i*d + j] = A(i, j). With this convention
// vec(A X B) = (A ⊗ Bᵀ) vec(X), so a Kraus channel acts as Σ K ⊗ conj(K).
std::vector<cdouble> vec_row_major(const ComplexMatrix &a);
ComplexMatrix unvec_row_major(const std::vector<cdouble> &v, int dim);

// y = A x for a vector (used on vectorized operators).
std::vector<cdouble> mat_vec(const ComplexMatrix &a, const std::vector<cdouble> &x);

} // namespace qflux
