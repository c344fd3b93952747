#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qflux/spectral.hpp"
#include "support/test_util.hpp"

using namespace qflux;
using namespace qflux::test;

namespace {
const cdouble I1(0, 1);
}

TEST_CASE("arithmetic basics") {
    CHECK(trace(identity(2)) == cdouble(2, 0));
    CHECK(approx_equal(kron(identity(2), identity(2)), identity(4)));

    CounterRng rng(11);
    const ComplexMatrix a = random_matrix(rng, 3);
    CHECK(max_abs_diff(adjoint(adjoint(a)), a) == 0.0);

    const ComplexMatrix b = random_matrix(rng, 3);
    // (AB)† = B†A†
    CHECK(max_abs_diff(adjoint(mul(a, b)), mul(adjoint(b), adjoint(a))) < 1e-12);
    // trace cyclicity
    CHECK(std::abs(trace(mul(a, b)) - trace(mul(b, a))) < 1e-12);
}

TEST_CASE("dimension mismatches are rejected") {
    CHECK_THROWS_AS(add(identity(2), identity(3)), DimensionMismatch);
    CHECK_THROWS_AS(mul(identity(2), identity(3)), DimensionMismatch);
    CHECK_THROWS_AS((ComplexMatrix{2, {1, 0, 0}}), DimensionMismatch);
}

TEST_CASE("identity eigensystem is degenerate with projectors summing to 1") {
    const SpectralDecomposition sd = hermitian_eig(identity(2));
    CHECK(sd.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(sd.eigenvalues[1] == doctest::Approx(1.0));
    CHECK(sd.degenerate);
    CHECK(max_abs_diff(add(sd.projectors[0], sd.projectors[1]), identity(2)) < 1e-10);
}

TEST_CASE("diagonal stationary-state spectrum comes back verbatim") {
    const SpectralDecomposition sd = hermitian_eig(diagonal({0.5658, 0.4342}));
    CHECK(sd.eigenvalues[0] == doctest::Approx(0.5658).epsilon(1e-12));
    CHECK(sd.eigenvalues[1] == doctest::Approx(0.4342).epsilon(1e-12));
    CHECK(max_abs_diff(sd.projectors[0], ComplexMatrix{{1, 0}, {0, 0}}) < 1e-12);
    CHECK(max_abs_diff(sd.projectors[1], ComplexMatrix{{0, 0}, {0, 1}}) < 1e-12);
    CHECK_FALSE(sd.degenerate);
}

TEST_CASE("Pauli-Y eigensystem against the resolvent oracle") {
    const ComplexMatrix y{{0, -I1}, {I1, 0}};
    const SpectralDecomposition sd = hermitian_eig(y);
    CHECK(sd.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(sd.eigenvalues[1] == doctest::Approx(-1.0));

    const Eig2Oracle oracle = oracle_eig2(y);
    CHECK(max_abs_diff(sd.projectors[0], oracle.proj_hi) < 1e-12);
    CHECK(max_abs_diff(sd.projectors[1], oracle.proj_lo) < 1e-12);
    // which is (1 ± Y)/2
    CHECK(max_abs_diff(oracle.proj_hi, scale(0.5, add(identity(2), y))) < 1e-15);
}

TEST_CASE("random 2x2 eigensystems match the resolvent oracle") {
    CounterRng rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        const ComplexMatrix a = random_hermitian(rng, 2);
        const SpectralDecomposition sd = hermitian_eig(a);
        const Eig2Oracle oracle = oracle_eig2(a);
        CHECK(sd.eigenvalues[0] == doctest::Approx(oracle.lambda_hi).epsilon(1e-12));
        CHECK(sd.eigenvalues[1] == doctest::Approx(oracle.lambda_lo).epsilon(1e-12));
        if (oracle.lambda_hi - oracle.lambda_lo > 1e-6) {
            CHECK(max_abs_diff(sd.projectors[0], oracle.proj_hi) < 1e-10);
            CHECK(max_abs_diff(sd.projectors[1], oracle.proj_lo) < 1e-10);
        }
    }
}

TEST_CASE("non-Hermitian input is rejected") {
    CHECK_THROWS_AS(hermitian_eig(ComplexMatrix{{0, 1}, {0, 0}}), NotHermitian);
    // a loosened tolerance admits slightly skewed input
    const ComplexMatrix skew{{1.0, cdouble(0.5, 1e-6)}, {cdouble(0.5, 1e-6), 2.0}};
    CHECK_THROWS_AS(hermitian_eig(skew), NotHermitian);
    CHECK_NOTHROW(hermitian_eig(skew, 1e-3));
}

TEST_CASE("matrix equality uses an absolute entrywise tolerance") {
    ComplexMatrix a = identity(2);
    ComplexMatrix b = identity(2);
    b(0, 1) = 5e-11;
    CHECK(approx_equal(a, b));          // default 1e-10
    b(0, 1) = 5e-10;
    CHECK_FALSE(approx_equal(a, b));
    CHECK(approx_equal(a, b, 1e-9));
    CHECK_FALSE(approx_equal(a, identity(3)));
}

TEST_CASE("spectral properties over random Hermitian matrices") {
    CounterRng rng(31);
    for (int d : {2, 3, 4, 8}) {
        for (int trial = 0; trial < 8; ++trial) {
            const ComplexMatrix a = random_hermitian(rng, d);
            const SpectralDecomposition sd = hermitian_eig(a);

            // descending order
            for (int n = 0; n + 1 < d; ++n)
                CHECK(sd.eigenvalues[n] >= sd.eigenvalues[n + 1]);

            ComplexMatrix recon(d), psum(d);
            for (int n = 0; n < d; ++n) {
                const ComplexMatrix &p = sd.projectors[n];
                CHECK(max_abs_diff(p, adjoint(p)) < 1e-10);       // Hermitian
                CHECK(max_abs_diff(mul(p, p), p) < 1e-10);        // idempotent
                recon = recon + scale(sd.eigenvalues[n], p);
                psum = psum + p;
            }
            CHECK(max_abs_diff(psum, identity(d)) < 1e-10);
            CHECK(max_abs_diff(recon, a) < 1e-9);
        }
    }
}

TEST_CASE("known spectrum survives a change of basis") {
    CounterRng rng(41);
    const std::vector<double> spectrum = {3.0, 1.0, 0.5, -2.0};
    const ComplexMatrix u = random_unitary(rng, 4);
    const ComplexMatrix a = mul(mul(u, diagonal(spectrum)), adjoint(u));
    const SpectralDecomposition sd = hermitian_eig(a);
    for (int n = 0; n < 4; ++n)
        CHECK(sd.eigenvalues[n] == doctest::Approx(spectrum[n]).epsilon(1e-10));
}

TEST_CASE("eigenvector gauge is deterministic") {
    CounterRng rng(51);
    const ComplexMatrix a = random_hermitian(rng, 4);
    const SpectralDecomposition first = hermitian_eig(a);
    const SpectralDecomposition second = hermitian_eig(a);
    for (int n = 0; n < 4; ++n) {
        CHECK(max_abs_diff(first.projectors[n], second.projectors[n]) == 0.0);
        // largest-magnitude component real and non-negative
        int idx = 0;
        double best = 0;
        for (int r = 0; r < 4; ++r)
            if (std::abs(first.vectors[n][r]) > best + 1e-15) {
                best = std::abs(first.vectors[n][r]);
                idx = r;
            }
        CHECK(first.vectors[n][idx].imag() == doctest::Approx(0.0));
        CHECK(first.vectors[n][idx].real() >= 0.0);
    }
}

TEST_CASE("near-degenerate gaps raise the flag") {
    CHECK(hermitian_eig(diagonal({1.0, 1.0 - 5e-9})).degenerate);
    CHECK_FALSE(hermitian_eig(diagonal({1.0, 0.9})).degenerate);
}

TEST_CASE("matrix powers: diagonal roots and the zero exponent") {
    CHECK(max_abs_diff(matrix_power_hermitian(diagonal({4, 1}), 0.5), diagonal({2, 1})) < 1e-12);
    const ComplexMatrix g = diagonal({0.5658, 0.4342});
    CHECK(max_abs_diff(matrix_power_hermitian(g, cdouble(0, 0)), identity(2)) < 1e-12);
    CHECK(max_abs_diff(matrix_power_hermitian(g, 1.0), g) < 1e-12);
}

TEST_CASE("matrix power rejects non-positive spectra") {
    CHECK_THROWS_AS(matrix_power_hermitian(diagonal({1, 0}), 0.5), NotPositiveDefinite);
    CHECK_THROWS_AS(matrix_power_hermitian(diagonal({1, -0.2}), 0.5), NotPositiveDefinite);
}

TEST_CASE("matrix power additivity and unitarity of imaginary powers") {
    CounterRng rng(61);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix g = random_density(rng, 2, 0.3);
        const double a = 2 * rng.next_double() - 1;
        const double b = 2 * rng.next_double() - 1;
        const ComplexMatrix lhs =
            mul(matrix_power_hermitian(g, a), matrix_power_hermitian(g, b));
        CHECK(max_abs_diff(lhs, matrix_power_hermitian(g, a + b)) < 1e-9);
    }
    const ComplexMatrix g = diagonal({0.5658, 0.4342});
    for (double theta : {-M_PI, -M_PI / 4, -M_PI / 8, 0.0, 0.7, 2.9}) {
        const ComplexMatrix u = matrix_power_hermitian(g, cdouble(0, -theta));
        CHECK(max_abs_diff(mul(u, adjoint(u)), identity(2)) < 1e-10);
    }
    // the unitarity check by direct multiplication, d = 2 off-diagonal case
    CounterRng rng2(62);
    const ComplexMatrix gr = random_density(rng2, 2, 0.3);
    const ComplexMatrix u = matrix_power_hermitian(gr, cdouble(0, M_PI / 4));
    CHECK(max_abs_diff(mul(u, adjoint(u)), identity(2)) < 1e-10);
}
