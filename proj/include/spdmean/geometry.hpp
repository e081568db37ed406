#pragma once

// The SPD manifold under the affine-invariant (Fisher information) metric,
// plus the log-Euclidean distance and the Bhattacharyya (log-det) divergence.

#include "spdmean/linalg.hpp"

namespace spdmean {

/// Arc-length fraction along a geodesic, 0 <= beta <= 1.
class GeodesicParam {
public:
    explicit GeodesicParam(double beta);
    double value() const { return beta_; }

private:
    double beta_;
};

/// sqrt(sum_n ln^2 lambda_n) over the eigenvalues of C1^{-1/2} C2 C1^{-1/2}.
/// Exactly symmetric in its arguments.
double fi_distance(const SpdMatrix& c1, const SpdMatrix& c2);

/// Distance to the identity, ||ln C||_F.
double fi_norm(const SpdMatrix& c);

/// ||ln C1 - ln C2||_F.
double le_distance(const SpdMatrix& c1, const SpdMatrix& c2);

/// Squared Bhattacharyya distance ln|(C1+C2)/2| - (ln|C1| + ln|C2|)/2.
/// Take the square root for the metric form.
double bhat_divergence(const SpdMatrix& c1, const SpdMatrix& c2);

/// Omega^{1/2} (Omega^{-1/2} Phi Omega^{-1/2})^beta Omega^{1/2}.
SpdMatrix geodesic(const SpdMatrix& omega, const SpdMatrix& phi, GeodesicParam beta);

/// Omega^{1/2} exp(Omega^{-1/2} V Omega^{-1/2}) Omega^{1/2}.
SpdMatrix exp_map(const SpdMatrix& omega, const SymmetricMatrix& v);

/// Omega^{1/2} ln(Omega^{-1/2} Phi Omega^{-1/2}) Omega^{1/2}.
SymmetricMatrix log_map(const SpdMatrix& omega, const SpdMatrix& phi);

/// Two-matrix geometric mean C1 # C2, the geodesic midpoint.
SpdMatrix geomean2(const SpdMatrix& c1, const SpdMatrix& c2);

namespace raw {

/// fi_distance on raw SPD matrices, no argument canonicalization.
double fi_distance(const Matrix& c1, const Matrix& c2);

}  // namespace raw

}  // namespace spdmean
