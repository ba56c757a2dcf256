#pragma once

#include <cstddef>
#include <vector>

namespace amo {

// Dense real symmetric matrix stored row-major.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  [[nodiscard]] std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  // Adds v at (i, j) and (j, i) (once on the diagonal).
  void add_symmetric(std::size_t i, std::size_t j, double v);

 private:
  std::size_t n_;
  std::vector<double> data_;
};

// All eigenvalues in ascending order by the cyclic Jacobi method.
std::vector<double> symmetric_eigenvalues(SymmetricMatrix m);

}  // namespace amo
