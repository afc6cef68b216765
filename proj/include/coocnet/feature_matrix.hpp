#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace coocnet {

/// Dense docs x features matrix with names on both axes.
struct FeatureMatrix {
  std::vector<std::string> doc_ids;
  std::vector<std::string> feature_names;
  std::vector<double> values; // row-major

  std::size_t rows() const { return doc_ids.size(); }
  std::size_t cols() const { return feature_names.size(); }

  double at(std::size_t d, std::size_t f) const {
    return values[d * feature_names.size() + f];
  }
  double& at(std::size_t d, std::size_t f) {
    return values[d * feature_names.size() + f];
  }
};

void write_feature_matrix_csv(std::ostream& out, const FeatureMatrix& m,
                              int decimals = 6);

} // namespace coocnet
