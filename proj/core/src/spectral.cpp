#include "qflux/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qflux {

namespace {

// Multiply v by a phase so the largest-magnitude component is real >= 0.
void fix_phase(std::vector<cdouble> &v) {
    int idx = 0;
    double best = 0;
    for (int n = 0; n < static_cast<int>(v.size()); ++n) {
        const double m = std::abs(v[n]);
        if (m > best + 1e-15) {
            best = m;
            idx = n;
        }
    }
    if (best == 0)
        return;
    const cdouble phase = std::conj(v[idx]) / best;
    for (auto &x : v)
        x *= phase;
    v[idx] = cdouble(std::abs(v[idx]), 0);
}

void normalize(std::vector<cdouble> &v) {
    double s = 0;
    for (const auto &x : v)
        s += std::norm(x);
    s = std::sqrt(s);
    for (auto &x : v)
        x /= s;
}

ComplexMatrix outer(const std::vector<cdouble> &v) {
    const int d = static_cast<int>(v.size());
    ComplexMatrix p(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            p(i, j) = v[i] * std::conj(v[j]);
    return p;
}

// Closed-form 2x2 Hermitian eigensystem.
void eig2(const ComplexMatrix &m, std::vector<double> &vals,
          std::vector<std::vector<cdouble>> &vecs) {
    const double a = m(0, 0).real();
    const double c = m(1, 1).real();
    const cdouble b = 0.5 * (m(0, 1) + std::conj(m(1, 0)));
    const double mean = 0.5 * (a + c);
    const double half = 0.5 * (a - c);
    const double disc = std::hypot(half, std::abs(b));
    const double lo = mean + disc;
    const double hi = mean - disc; // lo >= hi
    vals = {lo, hi};
    if (std::abs(b) == 0.0) {
        if (a >= c)
            vecs = {{1, 0}, {0, 1}};
        else
            vecs = {{0, 1}, {1, 0}};
        return;
    }
    // Of the two algebraic eigenvector forms pick the better-conditioned one.
    std::vector<cdouble> v0;
    if (std::abs(lo - a) >= std::abs(lo - c))
        v0 = {b, cdouble(lo - a, 0)};
    else
        v0 = {cdouble(lo - c, 0), std::conj(b)};
    normalize(v0);
    std::vector<cdouble> v1 = {-std::conj(v0[1]), std::conj(v0[0])};
    vecs = {v0, v1};
}

// Cyclic Jacobi sweeps for d > 2. Each rotation zeroes one off-diagonal pair
// of the working copy; the accumulated unitary holds the eigenvectors.
void eig_jacobi(const ComplexMatrix &m, std::vector<double> &vals,
                std::vector<std::vector<cdouble>> &vecs) {
    const int d = m.dim();
    ComplexMatrix b = m;
    ComplexMatrix v = identity(d);
    const double scale = std::max(1.0, frobenius_norm(m));
    const double target = 1e-15 * scale;

    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0;
        for (int p = 0; p < d; ++p)
            for (int q = p + 1; q < d; ++q)
                off += 2 * std::norm(b(p, q));
        if (std::sqrt(off) < target)
            break;
        for (int p = 0; p < d; ++p) {
            for (int q = p + 1; q < d; ++q) {
                const cdouble apq = b(p, q);
                const double mag = std::abs(apq);
                if (mag < 1e-300)
                    continue;
                const cdouble phase = apq / mag; // apq = |apq| e^{iφ}
                const double app = b(p, p).real();
                const double aqq = b(q, q).real();
                const double tau = (aqq - app) / (2 * mag);
                double t;
                if (tau >= 0)
                    t = 1.0 / (tau + std::sqrt(1 + tau * tau));
                else
                    t = -1.0 / (-tau + std::sqrt(1 + tau * tau));
                const double cth = 1.0 / std::sqrt(1 + t * t);
                const double sth = t * cth;
                // Plane unitary G restricted to (p, q):
                //   [ c            s        ]
                //   [ -s conj(φ)   c conj(φ)]
                const cdouble g01 = cdouble(sth, 0);
                const cdouble g10 = -sth * std::conj(phase);
                const cdouble g11 = cth * std::conj(phase);
                // Columns: B <- B G, V <- V G.
                for (int r = 0; r < d; ++r) {
                    const cdouble brp = b(r, p), brq = b(r, q);
                    b(r, p) = brp * cth + brq * g10;
                    b(r, q) = brp * g01 + brq * g11;
                    const cdouble vrp = v(r, p), vrq = v(r, q);
                    v(r, p) = vrp * cth + vrq * g10;
                    v(r, q) = vrp * g01 + vrq * g11;
                }
                // Rows: B <- G† B.
                for (int col = 0; col < d; ++col) {
                    const cdouble bpc = b(p, col), bqc = b(q, col);
                    b(p, col) = cth * bpc + std::conj(g10) * bqc;
                    b(q, col) = std::conj(g01) * bpc + std::conj(g11) * bqc;
                }
                b(p, q) = 0;
                b(q, p) = 0;
            }
        }
    }

    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(d);
    for (int i = 0; i < d; ++i)
        diag[i] = b(i, i).real();
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return diag[x] > diag[y]; });

    vals.resize(d);
    vecs.assign(d, std::vector<cdouble>(d));
    for (int n = 0; n < d; ++n) {
        vals[n] = diag[order[n]];
        for (int r = 0; r < d; ++r)
            vecs[n][r] = v(r, order[n]);
        normalize(vecs[n]);
    }
}

} // namespace

SpectralDecomposition hermitian_eig(const ComplexMatrix &a, double hermiticity_tol) {
    if (!is_hermitian(a, hermiticity_tol))
        throw NotHermitian("hermitian_eig: input is not Hermitian within tolerance");

    SpectralDecomposition out;
    const int d = a.dim();
    if (d == 1) {
        out.eigenvalues = {a(0, 0).real()};
        out.vectors = {{cdouble(1, 0)}};
    } else if (d == 2) {
        eig2(a, out.eigenvalues, out.vectors);
    } else {
        eig_jacobi(a, out.eigenvalues, out.vectors);
    }

    for (auto &v : out.vectors)
        fix_phase(v);
    out.projectors.reserve(d);
    for (const auto &v : out.vectors)
        out.projectors.push_back(outer(v));

    const double gap_tol = default_tolerances().degeneracy_gap;
    for (int n = 0; n + 1 < d; ++n)
        if (out.eigenvalues[n] - out.eigenvalues[n + 1] < gap_tol)
            out.degenerate = true;
    return out;
}

ComplexMatrix matrix_power_hermitian(const ComplexMatrix &a, cdouble exponent,
                                     double positivity_floor) {
    const SpectralDecomposition sd = hermitian_eig(a);
    for (double ev : sd.eigenvalues)
        if (ev <= positivity_floor)
            throw NotPositiveDefinite("matrix_power_hermitian: eigenvalue at or below floor");
    ComplexMatrix out(a.dim());
    for (size_t n = 0; n < sd.eigenvalues.size(); ++n) {
        const cdouble factor = std::exp(exponent * std::log(sd.eigenvalues[n]));
        out = out + scale(factor, sd.projectors[n]);
    }
    return out;
}

DensityState make_density_state(const ComplexMatrix &rho, bool require_full_rank) {
    if (!is_hermitian(rho))
        throw NotHermitian("density matrix is not Hermitian");
    if (std::abs(trace(rho) - cdouble(1, 0)) > 1e-9)
        throw ParameterOutOfRange("density matrix trace is not 1");
    DensityState state{rho, hermitian_eig(rho)};
    for (double p : state.spectral.eigenvalues) {
        if (p < -1e-10)
            throw NotPositive("density matrix has a negative eigenvalue");
        if (require_full_rank && p <= default_tolerances().positive_definite)
            throw RankDeficientState("density matrix is rank deficient");
    }
    return state;
}

} // namespace qflux
