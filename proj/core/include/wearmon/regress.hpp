#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wearmon/error.hpp"

namespace wearmon {

/// One labeled calibration sample: sensor voltage and temperature in, true
/// clearance (micrometer reading) out.
struct Observation {
  double timestamp = 0.0;    ///< seconds
  double voltage = 0.0;      ///< volts
  double temperature = 0.0;  ///< degrees Celsius
  double clearance = 0.0;    ///< millimeters
};

struct ObservationLimits {
  double temperature_min = -40.0;
  double temperature_max = 200.0;
};

/// Throws Error(InvalidSignal) on non-finite fields, negative clearance, or a
/// temperature outside the plausibility band.
void validate(const Observation& obs, const ObservationLimits& limits = {});

/// Append-only store of observations. Every non-empty append bumps the
/// version, which models fitted from the database carry along.
/// Single writer; concurrent appends must be serialized externally.
class TrainingDatabase {
 public:
  TrainingDatabase() = default;
  explicit TrainingDatabase(std::vector<Observation> observations);

  const std::vector<Observation>& observations() const { return observations_; }
  std::uint64_t version() const { return version_; }
  std::size_t size() const { return observations_.size(); }

  void append(std::span<const Observation> batch, const ObservationLimits& limits = {});

 private:
  std::vector<Observation> observations_;
  std::uint64_t version_ = 0;
};

struct FitMetrics {
  double r_squared = 0.0;
  double adjusted_r_squared = 0.0;
  double correlation_r = 0.0;          ///< sqrt(max(adjusted_r_squared, 0))
  double residual_sum_squares = 0.0;   ///< mm^2
};

/// Polynomial response surface d(V, T) = sum_{i<=m} sum_{j<=n} a_ij V^i T^j.
/// Coefficients are stored row-major over (i, j) with i outer.
struct SurfaceModel {
  int order_v = 0;  ///< m, voltage order
  int order_t = 0;  ///< n, temperature order
  std::vector<double> coefficients;
  FitMetrics metrics{};
  std::uint64_t db_version = 0;
  bool below_threshold = false;  ///< set when auto_fit exhausted its search

  // Training hull, used to flag extrapolated predictions.
  bool has_hull = false;
  double voltage_min = 0.0, voltage_max = 0.0;
  double temperature_min = 0.0, temperature_max = 0.0;

  double coefficient(int i, int j) const {
    return coefficients[static_cast<std::size_t>(i) * (order_t + 1) + j];
  }
};

/// Minimal dense row-major matrix, just enough for the design matrix contract.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// Monomial design matrix: one row per observation, columns V^i T^j ordered
/// row-major over (i, j) with i outer.
Matrix design_matrix(std::span<const Observation> obs, int order_v, int order_t);

/// Closed-form least squares through the normal equations (partial-pivot
/// elimination in extended precision, one refinement pass). Orders are capped
/// at 4 each.
SurfaceModel fit_surface(std::span<const Observation> obs, int order_v, int order_t);

/// Goodness-of-fit of the model on the given observations. Throws
/// ZeroVariance when the responses carry no variance.
FitMetrics model_metrics(const SurfaceModel& model, std::span<const Observation> obs);

/// Escalating order search: candidates (m, n) with m, n in 1..4 are tried in
/// ascending parameter count (ties prefer the higher voltage order) and the
/// first model whose adjusted R-square reaches the threshold wins. If caps or
/// identifiability ((m+1)(n+1) <= N/2) exhaust the search, the best model is
/// returned with below_threshold set.
SurfaceModel auto_fit(const TrainingDatabase& db, double threshold_r = 0.975);

struct Prediction {
  double clearance = 0.0;     ///< millimeters
  bool extrapolated = false;  ///< input outside the training hull by > 10%
};

Prediction predict_clearance(const SurfaceModel& model, double voltage,
                             double temperature);

/// Appends the batch (bumping the version when non-empty) and refits on the
/// full database. The returned model carries the new database version.
SurfaceModel append_and_refit(TrainingDatabase& db, std::span<const Observation> batch,
                              double threshold_r = 0.975);

inline constexpr int kOrderCap = 4;
inline constexpr std::size_t kMinAutoFitObservations = 8;

}  // namespace wearmon
