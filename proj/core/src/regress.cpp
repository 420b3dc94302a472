#include "wearmon/regress.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace wearmon {

namespace {

// Dense LU with partial pivoting in long double. Kept factored so the
// refinement pass can reuse it.
class LuSolver {
 public:
  // Throws SingularSystem if a pivot collapses relative to the matrix scale.
  LuSolver(std::vector<long double> matrix, std::size_t n) : lu_(std::move(matrix)), n_(n) {
    pivot_.resize(n_);
    std::iota(pivot_.begin(), pivot_.end(), std::size_t{0});
    long double scale = 0.0L;
    for (const long double v : lu_) scale = std::max(scale, std::abs(v));
    const long double tol = scale * 1e-13L * static_cast<long double>(n_);

    for (std::size_t col = 0; col < n_; ++col) {
      std::size_t best = col;
      for (std::size_t r = col + 1; r < n_; ++r) {
        if (std::abs(at(r, col)) > std::abs(at(best, col))) best = r;
      }
      if (std::abs(at(best, col)) <= tol) {
        throw Error(ErrorCode::SingularSystem,
                    "normal matrix is rank deficient (degenerate inputs)");
      }
      if (best != col) {
        for (std::size_t c = 0; c < n_; ++c) std::swap(at(best, c), at(col, c));
        std::swap(pivot_[best], pivot_[col]);
      }
      for (std::size_t r = col + 1; r < n_; ++r) {
        const long double f = at(r, col) / at(col, col);
        at(r, col) = f;
        for (std::size_t c = col + 1; c < n_; ++c) at(r, c) -= f * at(col, c);
      }
    }
  }

  std::vector<long double> solve(const std::vector<long double>& rhs) const {
    std::vector<long double> x(n_);
    for (std::size_t r = 0; r < n_; ++r) x[r] = rhs[pivot_[r]];
    for (std::size_t r = 1; r < n_; ++r) {
      for (std::size_t c = 0; c < r; ++c) x[r] -= at(r, c) * x[c];
    }
    for (std::size_t r = n_; r-- > 0;) {
      for (std::size_t c = r + 1; c < n_; ++c) x[r] -= at(r, c) * x[c];
      x[r] /= at(r, r);
    }
    return x;
  }

 private:
  long double& at(std::size_t r, std::size_t c) { return lu_[r * n_ + c]; }
  const long double& at(std::size_t r, std::size_t c) const { return lu_[r * n_ + c]; }

  std::vector<long double> lu_;
  std::size_t n_;
  std::vector<std::size_t> pivot_;
};

void check_orders(int order_v, int order_t) {
  if (order_v < 0 || order_t < 0) {
    throw Error(ErrorCode::InvalidSpec, "polynomial orders must be non-negative");
  }
  if (order_v > kOrderCap || order_t > kOrderCap) {
    throw Error(ErrorCode::OrderCapExceeded, "polynomial order above the cap of 4");
  }
}

FitMetrics metrics_from_sums(long double rss, long double tss, std::size_t n,
                             std::size_t n_params) {
  FitMetrics m;
  m.residual_sum_squares = static_cast<double>(rss);
  if (tss <= 0.0L) {
    // Zero-variance response: report no explanatory power instead of a
    // spurious perfect fit. model_metrics() raises the typed error.
    return m;
  }
  m.r_squared = static_cast<double>(1.0L - rss / tss);
  const std::size_t predictors = n_params - 1;  // intercept excluded
  if (n > predictors + 1) {
    const long double adj =
        1.0L - (rss / tss) * static_cast<long double>(n - 1) /
                   static_cast<long double>(n - predictors - 1);
    m.adjusted_r_squared = static_cast<double>(adj);
  } else {
    m.adjusted_r_squared = m.r_squared;
  }
  m.correlation_r = std::sqrt(std::max(m.adjusted_r_squared, 0.0));
  return m;
}

long double evaluate_surface(const SurfaceModel& model, long double v, long double t) {
  long double acc = 0.0L;
  for (int i = model.order_v; i >= 0; --i) {
    long double row = 0.0L;
    for (int j = model.order_t; j >= 0; --j) {
      row = row * t + model.coefficient(i, j);
    }
    acc = acc * v + row;
  }
  return acc;
}

}  // namespace

void validate(const Observation& obs, const ObservationLimits& limits) {
  if (!std::isfinite(obs.timestamp) || !std::isfinite(obs.voltage) ||
      !std::isfinite(obs.temperature) || !std::isfinite(obs.clearance)) {
    throw Error(ErrorCode::InvalidSignal, "observation has a non-finite field");
  }
  if (obs.clearance < 0.0) {
    throw Error(ErrorCode::InvalidSignal, "clearance must be non-negative");
  }
  if (obs.temperature < limits.temperature_min || obs.temperature > limits.temperature_max) {
    throw Error(ErrorCode::InvalidSignal, "temperature outside the plausibility band");
  }
}

TrainingDatabase::TrainingDatabase(std::vector<Observation> observations)
    : observations_(std::move(observations)) {
  for (const Observation& o : observations_) validate(o);
}

void TrainingDatabase::append(std::span<const Observation> batch,
                              const ObservationLimits& limits) {
  if (batch.empty()) return;
  for (const Observation& o : batch) validate(o, limits);
  observations_.insert(observations_.end(), batch.begin(), batch.end());
  ++version_;
}

Matrix design_matrix(std::span<const Observation> obs, int order_v, int order_t) {
  if (order_v < 0 || order_t < 0) {
    throw Error(ErrorCode::InvalidSpec, "polynomial orders must be non-negative");
  }
  if (obs.empty()) {
    throw Error(ErrorCode::Underdetermined, "no observations");
  }
  const std::size_t cols =
      static_cast<std::size_t>(order_v + 1) * static_cast<std::size_t>(order_t + 1);

  Matrix x;
  x.rows = obs.size();
  x.cols = cols;
  x.data.resize(x.rows * x.cols);
  for (std::size_t r = 0; r < obs.size(); ++r) {
    std::size_t c = 0;
    double v_pow = 1.0;
    for (int i = 0; i <= order_v; ++i) {
      double t_pow = 1.0;
      for (int j = 0; j <= order_t; ++j) {
        x.at(r, c++) = v_pow * t_pow;
        t_pow *= obs[r].temperature;
      }
      v_pow *= obs[r].voltage;
    }
  }
  return x;
}

SurfaceModel fit_surface(std::span<const Observation> obs, int order_v, int order_t) {
  check_orders(order_v, order_t);
  for (const Observation& o : obs) validate(o);

  const std::size_t n = obs.size();
  const std::size_t nv = static_cast<std::size_t>(order_v) + 1;
  const std::size_t nt = static_cast<std::size_t>(order_t) + 1;
  const std::size_t p = nv * nt;
  if (n == 0) throw Error(ErrorCode::Underdetermined, "no observations");
  if (p > n) {
    throw Error(ErrorCode::Underdetermined,
                "fewer observations than regression coefficients");
  }

  // Normal-equation entries are shared power sums: S[u][w] = sum V^u T^w for
  // u <= 2m, w <= 2n, and the right-hand side R[i][j] = sum d V^i T^j.
  std::vector<long double> moments((2 * nv - 1) * (2 * nt - 1), 0.0L);
  std::vector<long double> rhs(p, 0.0L);
  const std::size_t mom_cols = 2 * nt - 1;
  for (const Observation& o : obs) {
    const long double v = o.voltage;
    const long double t = o.temperature;
    long double v_pow = 1.0L;
    for (std::size_t u = 0; u < 2 * nv - 1; ++u) {
      long double t_pow = 1.0L;
      for (std::size_t w = 0; w < 2 * nt - 1; ++w) {
        moments[u * mom_cols + w] += v_pow * t_pow;
        t_pow *= t;
      }
      v_pow *= v;
    }
    long double vi = 1.0L;
    for (std::size_t i = 0; i < nv; ++i) {
      long double tj = 1.0L;
      for (std::size_t j = 0; j < nt; ++j) {
        rhs[i * nt + j] += static_cast<long double>(o.clearance) * vi * tj;
        tj *= t;
      }
      vi *= v;
    }
  }

  std::vector<long double> normal(p * p);
  for (std::size_t i = 0; i < nv; ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      for (std::size_t q = 0; q < nv; ++q) {
        for (std::size_t w = 0; w < nt; ++w) {
          normal[(i * nt + j) * p + (q * nt + w)] = moments[(i + q) * mom_cols + (j + w)];
        }
      }
    }
  }

  // Raw monomial columns carry wildly different scales (V^i T^j), so the
  // normal matrix is equilibrated symmetrically before elimination; pivot
  // collapse is then judged against a unit-diagonal matrix.
  std::vector<long double> scale(p);
  for (std::size_t k = 0; k < p; ++k) {
    const long double diag = normal[k * p + k];
    if (!(diag > 0.0L)) {
      throw Error(ErrorCode::SingularSystem, "zero design column (degenerate inputs)");
    }
    scale[k] = 1.0L / std::sqrt(diag);
  }
  std::vector<long double> scaled(p * p);
  for (std::size_t r = 0; r < p; ++r) {
    for (std::size_t c = 0; c < p; ++c) {
      scaled[r * p + c] = normal[r * p + c] * scale[r] * scale[c];
    }
  }
  const LuSolver lu(std::move(scaled), p);

  auto solve_scaled = [&](const std::vector<long double>& b) {
    std::vector<long double> tmp(p);
    for (std::size_t k = 0; k < p; ++k) tmp[k] = b[k] * scale[k];
    tmp = lu.solve(tmp);
    for (std::size_t k = 0; k < p; ++k) tmp[k] *= scale[k];
    return tmp;
  };

  std::vector<long double> coeffs = solve_scaled(rhs);

  // One refinement pass squeezes out the elimination rounding.
  {
    std::vector<long double> residual(rhs);
    for (std::size_t r = 0; r < p; ++r) {
      long double acc = 0.0L;
      for (std::size_t c = 0; c < p; ++c) acc += normal[r * p + c] * coeffs[c];
      residual[r] -= acc;
    }
    const std::vector<long double> delta = solve_scaled(residual);
    for (std::size_t c = 0; c < p; ++c) coeffs[c] += delta[c];
  }

  SurfaceModel model;
  model.order_v = order_v;
  model.order_t = order_t;
  model.coefficients.assign(coeffs.begin(), coeffs.end());

  model.has_hull = true;
  model.voltage_min = model.voltage_max = obs[0].voltage;
  model.temperature_min = model.temperature_max = obs[0].temperature;
  for (const Observation& o : obs) {
    model.voltage_min = std::min(model.voltage_min, o.voltage);
    model.voltage_max = std::max(model.voltage_max, o.voltage);
    model.temperature_min = std::min(model.temperature_min, o.temperature);
    model.temperature_max = std::max(model.temperature_max, o.temperature);
  }

  long double rss = 0.0L;
  long double sum = 0.0L;
  for (const Observation& o : obs) sum += o.clearance;
  const long double mean = sum / static_cast<long double>(n);
  long double tss = 0.0L;
  for (const Observation& o : obs) {
    const long double e = o.clearance - evaluate_surface(model, o.voltage, o.temperature);
    rss += e * e;
    const long double c = o.clearance - mean;
    tss += c * c;
  }
  model.metrics = metrics_from_sums(rss, tss, n, p);
  return model;
}

FitMetrics model_metrics(const SurfaceModel& model, std::span<const Observation> obs) {
  if (obs.empty()) {
    throw Error(ErrorCode::Underdetermined, "no observations");
  }
  long double sum = 0.0L;
  for (const Observation& o : obs) sum += o.clearance;
  const long double mean = sum / static_cast<long double>(obs.size());

  long double rss = 0.0L;
  long double tss = 0.0L;
  for (const Observation& o : obs) {
    const long double e = o.clearance - evaluate_surface(model, o.voltage, o.temperature);
    rss += e * e;
    const long double c = o.clearance - mean;
    tss += c * c;
  }
  if (tss <= 0.0L) {
    throw Error(ErrorCode::ZeroVariance, "responses carry no variance");
  }
  const std::size_t p =
      static_cast<std::size_t>(model.order_v + 1) * static_cast<std::size_t>(model.order_t + 1);
  return metrics_from_sums(rss, tss, obs.size(), p);
}

SurfaceModel auto_fit(const TrainingDatabase& db, double threshold_r) {
  const auto& obs = db.observations();
  if (obs.size() < kMinAutoFitObservations) {
    throw Error(ErrorCode::InsufficientData, "auto fit needs at least 8 observations");
  }

  struct Candidate {
    int m, n;
    std::size_t params;
  };
  std::vector<Candidate> candidates;
  for (int m = 1; m <= kOrderCap; ++m) {
    for (int n = 1; n <= kOrderCap; ++n) {
      candidates.push_back({m, n, static_cast<std::size_t>((m + 1) * (n + 1))});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.params != b.params) return a.params < b.params;
    return a.m > b.m;  // ties prefer the higher voltage order
  });

  SurfaceModel best;
  bool have_best = false;
  std::exception_ptr last_error;
  for (const Candidate& c : candidates) {
    if (2 * c.params > obs.size()) continue;  // identifiability floor
    SurfaceModel model;
    try {
      model = fit_surface(obs, c.m, c.n);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularSystem) throw;
      last_error = std::current_exception();
      continue;
    }
    model.db_version = db.version();
    if (model.metrics.adjusted_r_squared >= threshold_r) {
      return model;
    }
    if (!have_best || model.metrics.adjusted_r_squared > best.metrics.adjusted_r_squared) {
      best = std::move(model);
      have_best = true;
    }
  }
  if (!have_best) {
    if (last_error) std::rethrow_exception(last_error);
    throw Error(ErrorCode::InsufficientData, "no identifiable order for this database size");
  }
  best.below_threshold = true;
  return best;
}

Prediction predict_clearance(const SurfaceModel& model, double voltage,
                             double temperature) {
  if (!std::isfinite(voltage) || !std::isfinite(temperature)) {
    throw Error(ErrorCode::InvalidSample, "prediction inputs must be finite");
  }
  Prediction result;
  result.clearance = static_cast<double>(evaluate_surface(model, voltage, temperature));
  if (model.has_hull) {
    const double v_margin = 0.1 * (model.voltage_max - model.voltage_min);
    const double t_margin = 0.1 * (model.temperature_max - model.temperature_min);
    result.extrapolated = voltage < model.voltage_min - v_margin ||
                          voltage > model.voltage_max + v_margin ||
                          temperature < model.temperature_min - t_margin ||
                          temperature > model.temperature_max + t_margin;
  }
  return result;
}

SurfaceModel append_and_refit(TrainingDatabase& db, std::span<const Observation> batch,
                              double threshold_r) {
  db.append(batch);
  return auto_fit(db, threshold_r);
}

}  // namespace wearmon
