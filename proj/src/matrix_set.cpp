#include "spdmean/matrix_set.hpp"

#include <cmath>
#include <sstream>

namespace spdmean {

MatrixSet::MatrixSet(std::vector<SpdMatrix> members, std::vector<double> weights)
    : members_(std::move(members)), weights_(std::move(weights)) {
    if (members_.empty()) throw DimensionError("MatrixSet: empty set");
    const Eigen::Index n = members_.front().dim();
    for (std::size_t k = 0; k < members_.size(); ++k) {
        if (members_[k].dim() != n) {
            std::ostringstream os;
            os << "MatrixSet: member " << k << " has dim " << members_[k].dim() << ", expected "
               << n;
            throw DimensionError(os.str());
        }
    }
    if (weights_.empty()) {
        weights_.assign(members_.size(), 1.0);
    } else if (weights_.size() != members_.size()) {
        throw DimensionError("MatrixSet: weight count does not match member count");
    }
    for (double w : weights_) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw std::invalid_argument("MatrixSet: weights must be positive and finite");
        }
    }
    raw_.reserve(members_.size());
    for (const auto& m : members_) raw_.push_back(m.matrix());
}

}  // namespace spdmean
