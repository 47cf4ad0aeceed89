#include "braggkit/gram.hpp"
#include "braggkit/errors.hpp"

#include <algorithm>
#include <cmath>

namespace braggkit {

namespace {

// Cyclic Jacobi sweeps on a real symmetric matrix stored row-major;
// the matrix converges to its eigenvalues on the diagonal.
void jacobi_diagonalize(std::vector<double>& a, std::size_t n) {
    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(at(i, j)));
    if (scale == 0.0) return;
    const double stop = 1e-14 * scale;

    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(at(p, q)));
        if (off <= stop) return;

        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = at(p, q);
                if (std::abs(apq) <= stop * 1e-2) continue;
                double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
    }
}

} // namespace

std::vector<double> hermitian_eigenvalues(const std::vector<std::complex<double>>& a,
                                          std::size_t n) {
    if (a.size() != n * n) throw ValidationError("matrix size does not match dimension");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::complex<double> diff = a[i * n + j] - std::conj(a[j * n + i]);
            if (std::abs(diff) > 1e-9)
                throw DomainError("matrix is not Hermitian within 1e-9");
        }

    std::size_t n2 = 2 * n;
    std::vector<double> emb(n2 * n2, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double x = a[i * n + j].real(), y = a[i * n + j].imag();
            emb[i * n2 + j] = x;
            emb[(i + n) * n2 + (j + n)] = x;
            emb[i * n2 + (j + n)] = -y;
            emb[(i + n) * n2 + j] = y;
        }
    jacobi_diagonalize(emb, n2);

    std::vector<double> diag(n2);
    for (std::size_t i = 0; i < n2; ++i) diag[i] = emb[i * n2 + i];
    std::sort(diag.begin(), diag.end());
    // The embedding doubles every eigenvalue; adjacent sorted pairs collapse.
    std::vector<double> eigs(n);
    for (std::size_t i = 0; i < n; ++i) eigs[i] = 0.5 * (diag[2 * i] + diag[2 * i + 1]);
    return eigs;
}

} // namespace braggkit
