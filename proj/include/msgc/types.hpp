#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace msgc {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Index = Eigen::Index;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// N x M panel of samples: rows are time, columns are channels.
struct TimeSeriesSet {
  MatrixXd values;
  std::vector<std::string> labels;
  std::optional<double> dt;

  Index samples() const { return values.rows(); }
  Index channels() const { return values.cols(); }

  /// Throws Error if values are non-finite, empty, or labels are not distinct.
  void validate() const;
};

/// Wraps a matrix as a series with labels y1..yM.
TimeSeriesSet make_series(MatrixXd values, std::optional<double> dt = std::nullopt);

/// Returns the columns `keep` (0-based) as a new series, preserving labels and dt.
TimeSeriesSet select_channels(const TimeSeriesSet& data, const std::vector<int>& keep);

/// How data-parallel loops are executed. `serial` is the reference path.
enum class Execution { serial, parallel };

}  // namespace msgc
