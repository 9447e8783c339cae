#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "mgtd/corpus.hpp"

namespace mgtd {

struct Projection {
  std::vector<std::array<double, 2>> points;  // input order
  std::array<double, 2> component_variance{};
  double total_variance = 0.0;

  double explained_ratio() const {
    return (component_variance[0] + component_variance[1]) / total_variance;
  }
};

/// PCA onto the top two eigenvectors of the centered covariance. Each
/// axis is signed so that its largest-magnitude loading is positive.
Projection project_2d(const std::vector<std::vector<double>>& vectors);

// doc_id,x,y,label
void write_projection_csv(const Projection& p, const std::vector<std::string>& ids, const std::vector<Label>& labels,
                          const std::filesystem::path& path);

}  // namespace mgtd
