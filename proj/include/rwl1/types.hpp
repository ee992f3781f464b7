#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rwl1 {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Error taxonomy. Anything a caller may want to catch by category gets its
// own type; plain std::invalid_argument is reserved for garbage arguments.
struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DeltaOutOfRange : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct MuConditionViolated : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct PreconditionViolated : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NoAdmissibleDelta : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct CombinatorialBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InfeasibleReference : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

/// A signal stored as (support, values). Support indices are 0-based and
/// strictly increasing; stored values are nonzero by construction.
struct SparseSignal {
  int dim = 0;
  std::vector<int> support;
  std::vector<double> values;

  Vector densify() const {
    Vector x = Vector::Zero(dim);
    for (std::size_t k = 0; k < support.size(); ++k) x[support[k]] = values[k];
    return x;
  }

  void validate() const {
    require(dim >= 1, "SparseSignal: dim must be positive");
    require(support.size() == values.size(),
            "SparseSignal: support/values length mismatch");
    require(static_cast<int>(support.size()) <= dim,
            "SparseSignal: support larger than dimension");
    for (std::size_t k = 0; k < support.size(); ++k) {
      require(support[k] >= 0 && support[k] < dim,
              "SparseSignal: support index out of range");
      if (k > 0)
        require(support[k] > support[k - 1],
                "SparseSignal: support must be strictly increasing");
      require(values[k] != 0.0 && std::isfinite(values[k]),
              "SparseSignal: values must be nonzero and finite");
    }
  }
};

/// One recovery problem: measurements u of some signal through phi, with
/// noise level epsilon. Ground truth (and the noise that produced u) may be
/// attached for scoring purposes.
struct MeasurementInstance {
  Matrix phi;
  Vector u;
  double epsilon = 0.0;
  std::optional<Vector> truth;
  std::optional<Vector> noise;

  int rows() const { return static_cast<int>(phi.rows()); }
  int cols() const { return static_cast<int>(phi.cols()); }
};

/// Instance from raw measurements (no ground truth attached).
inline MeasurementInstance make_instance(Matrix phi, Vector u, double epsilon) {
  require(phi.rows() >= 1 && phi.cols() >= 1, "instance: empty matrix");
  require(phi.allFinite(), "instance: matrix entries must be finite");
  require(u.allFinite(), "instance: measurement entries must be finite");
  if (u.size() != phi.rows())
    throw DimensionMismatch("instance: dim(u) != rows(phi)");
  require(epsilon >= 0.0, "instance: epsilon must be nonnegative");
  return MeasurementInstance{std::move(phi), std::move(u), epsilon,
                             std::nullopt, std::nullopt};
}

/// Instance built from a known signal and noise vector; u is computed here
/// so that u = phi*truth + noise holds exactly as stored. Requires
/// ||noise||_2 <= epsilon, the regime the noise parameter promises.
inline MeasurementInstance make_noisy_instance(Matrix phi, Vector truth,
                                               Vector noise, double epsilon) {
  require(phi.rows() >= 1 && phi.cols() >= 1, "instance: empty matrix");
  if (truth.size() != phi.cols())
    throw DimensionMismatch("instance: dim(truth) != cols(phi)");
  if (noise.size() != phi.rows())
    throw DimensionMismatch("instance: dim(noise) != rows(phi)");
  require(epsilon >= 0.0, "instance: epsilon must be nonnegative");
  require(noise.norm() <= epsilon,
          "instance: ||noise||_2 exceeds epsilon; attach truth only");
  Vector u = phi * truth + noise;
  return MeasurementInstance{std::move(phi), std::move(u), epsilon,
                             std::move(truth), std::move(noise)};
}

/// Restricted-isometry constant of order s. `exact` is true when the value
/// came from full enumeration of all s-column submatrices.
struct RipEstimate {
  int s = 0;
  bool exact = false;
  double delta = 0.0;
};

}  // namespace rwl1
