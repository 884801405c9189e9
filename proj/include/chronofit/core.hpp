#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace chronofit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Number of observation periods per year (1 annual, 4 quarterly, 12 monthly).
class Frequency {
 public:
  explicit Frequency(int periods_per_year = 1);

  [[nodiscard]] int periods_per_year() const noexcept { return periods_; }
  [[nodiscard]] bool is_seasonal() const noexcept { return periods_ >= 2; }

  friend bool operator==(const Frequency&, const Frequency&) = default;

 private:
  int periods_;
};

/// A (year, period) time point; period is 1-based within the year.
struct Period {
  int year = 0;
  int period = 1;

  friend auto operator<=>(const Period&, const Period&) = default;
};

/// Shift `p` by `steps` periods (may be negative) under frequency `freq`.
[[nodiscard]] Period advance(Period p, long steps, Frequency freq);

/// Signed number of periods from `from` to `to`.
[[nodiscard]] long periods_between(Period from, Period to, Frequency freq);

/// Canonical text form: `YYYY`, `YYYY-Qn`, `YYYY-MM`, or `YYYY-Pn` otherwise.
[[nodiscard]] std::string format_period(Period p, Frequency freq);

/// Ordered, finite, gapless observations. Immutable after construction.
class TimeSeries {
 public:
  TimeSeries(Vector values, Period start, Frequency freq, std::string name = "value");

  [[nodiscard]] const Vector& values() const noexcept { return values_; }
  [[nodiscard]] Index size() const noexcept { return values_.size(); }
  [[nodiscard]] double operator[](Index i) const { return values_[i]; }
  [[nodiscard]] Period start() const noexcept { return start_; }
  [[nodiscard]] Period end() const { return period_at(size() - 1); }
  [[nodiscard]] Frequency frequency() const noexcept { return freq_; }
  [[nodiscard]] int periods_per_year() const noexcept { return freq_.periods_per_year(); }
  [[nodiscard]] const std::string& name() const noexcept { return name_; }

  [[nodiscard]] Period period_at(Index i) const { return advance(start_, i, freq_); }
  /// 0-based position of observation `i` within its seasonal cycle.
  [[nodiscard]] int season_of(Index i) const;

  /// Same metadata, new values (start unchanged).
  [[nodiscard]] TimeSeries with_values(Vector values) const;
  /// New values whose first element sits `offset` periods after this start.
  [[nodiscard]] TimeSeries with_values(Vector values, long offset) const;
  [[nodiscard]] TimeSeries renamed(std::string name) const;

 private:
  Vector values_;
  Period start_;
  Frequency freq_;
  std::string name_;
};

struct SeasonalLayout {
  std::vector<std::vector<double>> rows;
  int cycle_length = 0;
  std::vector<std::string> labels;
};

/// Period labels for a cycle of length `s` beginning at 1-based `first`.
[[nodiscard]] std::vector<std::string> period_labels(int s, int first = 1);

[[nodiscard]] SeasonalLayout seasonal_layout(const TimeSeries& ts);

/// Inclusive sub-series [from, to].
[[nodiscard]] TimeSeries slice(const TimeSeries& ts, Period from, Period to);

/// Parse a date in any of the accepted CSV forms; returns the time point and
/// the frequency implied by its format (0 when the format does not imply one).
struct ParsedDate {
  Period point;
  int implied_frequency = 0;
};
[[nodiscard]] std::optional<ParsedDate> parse_date(std::string_view text);

struct CsvSchema {
  std::string date_column = "date";
  std::string value_column = "value";
  /// Overrides the frequency inferred from the date format.
  std::optional<int> frequency;
};

[[nodiscard]] TimeSeries load_csv(const std::filesystem::path& path, const CsvSchema& schema = {});
void save_csv(const TimeSeries& ts, const std::filesystem::path& path);

/// Several aligned numeric columns sharing one date index.
struct SeriesTable {
  std::vector<TimeSeries> columns;

  [[nodiscard]] const TimeSeries& column(std::string_view name) const;
  [[nodiscard]] std::vector<std::string> names() const;
};

/// Loads every non-date column. Without a date column, rows are numbered
/// as consecutive annual observations starting at year 1.
[[nodiscard]] SeriesTable load_csv_table(const std::filesystem::path& path,
                                         const std::string& date_column = "date",
                                         std::optional<int> frequency = std::nullopt);

}  // namespace chronofit
