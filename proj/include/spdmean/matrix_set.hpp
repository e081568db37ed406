#pragma once

#include <vector>

#include "spdmean/linalg.hpp"

namespace spdmean {

/// Ordered collection of same-dimension SPD matrices with positive weights
/// (all 1 unless given). The weights only affect the AJD criterion.
class MatrixSet {
public:
    explicit MatrixSet(std::vector<SpdMatrix> members, std::vector<double> weights = {});

    std::size_t size() const { return members_.size(); }
    Eigen::Index dim() const { return members_.front().dim(); }

    const SpdMatrix& operator[](std::size_t k) const { return members_[k]; }
    const std::vector<SpdMatrix>& members() const { return members_; }
    const std::vector<double>& weights() const { return weights_; }

    /// The member matrices as plain Eigen matrices, in order.
    const std::vector<Matrix>& raw() const { return raw_; }

    auto begin() const { return members_.begin(); }
    auto end() const { return members_.end(); }

private:
    std::vector<SpdMatrix> members_;
    std::vector<double> weights_;
    std::vector<Matrix> raw_;
};

}  // namespace spdmean
