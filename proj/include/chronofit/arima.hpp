#pragma once

#include "chronofit/baseline.hpp"
#include "chronofit/core.hpp"
#include "chronofit/diagnostics.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace chronofit {

/// ARIMA(p,d,q)(P,D,Q)_s order.
struct ModelOrder {
  int p = 0, d = 0, q = 0;
  int P = 0, D = 0, Q = 0;
  int s = 1;

  /// Throws DataError on negative entries, s < 1, or seasonal terms with s = 1.
  void validate() const;
  [[nodiscard]] bool is_trivial() const noexcept { return p + q + P + Q == 0 && d + D == 0; }
  [[nodiscard]] int arma_parameters() const noexcept { return p + q + P + Q; }
  [[nodiscard]] bool is_seasonal() const noexcept { return P + D + Q > 0; }
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const ModelOrder&, const ModelOrder&) = default;
};

/// Parses "p,d,q" or "p,d,q,P,D,Q,s".
[[nodiscard]] ModelOrder parse_order(std::string_view text);

/// Coefficient convention:
///   phi(B) Phi(B^s) (1-B)^d (1-B^s)^D Y_t = c + theta(B) Theta(B^s) e_t
/// with phi(B) = 1 - phi_1 B - ..., theta(B) = 1 - theta_1 B - ... (and the
/// seasonal polynomials likewise in B^s).
struct ArimaFit {
  ModelOrder order;
  Vector ar;
  Vector ma;
  Vector seasonal_ar;
  Vector seasonal_ma;
  std::optional<double> intercept;
  double sigma2 = 0.0;
  double loglik = 0.0;
  double aic = 0.0;
  double sse = 0.0;
  /// Innovations over the differenced sample.
  Vector residuals;
  Index n_effective = 0;
  bool converged = true;
  TimeSeries series;
  /// Differenced working series.
  Vector differenced;

  /// Number of estimated parameters counted by the AIC (including sigma2).
  [[nodiscard]] int parameter_count() const noexcept;
};

/// Ordinary-lag coefficients of the combined AR operator phi(B)Phi(B^s),
/// written as 1 - sum_i a_i B^i. Returns a_1..a_{p+sP}.
[[nodiscard]] Vector combined_ar(const Vector& ar, const Vector& seasonal_ar, int s);
/// Same for the MA operator: 1 - sum_j m_j B^j, returns m_1..m_{q+sQ}.
[[nodiscard]] Vector combined_ma(const Vector& ma, const Vector& seasonal_ma, int s);

/// Smallest root modulus of 1 - c_1 z - ... - c_k z^k (infinity for k = 0).
[[nodiscard]] double min_root_modulus(const Vector& coefficients);

/// Conditional sum of squares residuals of the ARMA recursion on `w`, with
/// zero pre-sample innovations and pre-sample observations set to mean(w).
[[nodiscard]] Vector css_residuals(const Vector& w, const Vector& ar_full, const Vector& ma_full, double intercept);

struct ArimaOptions {
  /// Default: intercept iff d + D == 0.
  std::optional<bool> with_intercept;
};

[[nodiscard]] ArimaFit arima_fit(const TimeSeries& ts, const ModelOrder& order, const ArimaOptions& options = {});

/// psi_0..psi_{h-1} of the full operator including differencing.
[[nodiscard]] Vector psi_weights(const ArimaFit& fit, Index horizon);

[[nodiscard]] ForecastResult arima_forecast(const ArimaFit& fit, Index horizon, const IntervalLevel& level);

struct OrderCandidate {
  ModelOrder order;
  std::optional<double> aic;
  std::string failure;
};

struct OrderSearch {
  ModelOrder best;
  double best_aic = 0.0;
  std::vector<OrderCandidate> table;
};

/// AIC grid over (p,d,q) in [0,p_max]x[0,d_max]x[0,q_max], skipping the
/// all-zero order. Failed fits are recorded and skipped.
[[nodiscard]] OrderSearch auto_order_search(const TimeSeries& ts, int p_max = 2, int d_max = 2, int q_max = 2);

/// AIC grid over p,d,q,P,D,Q in [0,bound] at fixed period s.
[[nodiscard]] OrderSearch auto_seasonal_search(const TimeSeries& ts, int s, int bound = 1);

struct OrderSuggestion {
  ModelOrder suggestion;
  std::string rationale;
};

/// ACF/PACF cut-off heuristic on an already stationary series.
[[nodiscard]] OrderSuggestion suggest_order(const TimeSeries& ts, int s = 1, int max_consider = 5);

struct ResidualSummary {
  Vector standardized;
  Correlogram residual_acf;
  /// Bins [-4,-3.5), ..., [3.5,4]; values beyond +/-4 go into the end bins.
  Eigen::VectorXi histogram;
  Vector histogram_edges;
  /// (theoretical normal quantile, sorted standardized residual) pairs.
  Matrix qq_points;
};

[[nodiscard]] ResidualSummary diagnostics_summary(const ArimaFit& fit, int max_lag = 24);

}  // namespace chronofit
