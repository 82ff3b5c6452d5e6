#include "support.hpp"

#include <Eigen/QR>

namespace cmlab::testing {

Eigen::MatrixXd random_rotation(Index n, std::uint64_t seed) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian_matrix(n, n, seed));
  return qr.householderQ();
}

}  // namespace cmlab::testing
