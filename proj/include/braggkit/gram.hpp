#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace braggkit {

// Positive-semidefiniteness evidence for a Hermitian matrix.
struct GramReport {
    std::size_t dimension = 0;
    double min_eigenvalue = 0.0;
    double trace = 0.0;
    double tolerance = 0.0;  // relative factor: pass iff min_eig >= -tolerance * trace
    bool pass = false;
    // Set when a table-backed builder had to substitute 0 for an entry whose
    // exact argument was missing from the source table.
    bool missing_entries = false;
};

// Eigenvalues of an n x n Hermitian matrix (row-major), ascending. Computed
// by cyclic Jacobi on the real symmetric embedding [[X, -Y], [Y, X]] of
// A = X + iY, whose spectrum is that of A doubled.
std::vector<double> hermitian_eigenvalues(const std::vector<std::complex<double>>& a,
                                          std::size_t n);

} // namespace braggkit
