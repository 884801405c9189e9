#include "chronofit/core.hpp"

#include "chronofit/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace chronofit {

namespace {

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t begin = 0;
  while (true) {
    const auto comma = line.find(',', begin);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(begin)));
      break;
    }
    out.push_back(trim(line.substr(begin, comma - begin)));
    begin = comma + 1;
  }
  return out;
}

std::optional<long> parse_int(std::string_view s) {
  long v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return v;
}

std::optional<double> parse_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return v;
}

std::string shortest(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_numbers;
};

RawTable read_raw(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open '{}'", path.string()));
  RawTable table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    std::vector<std::string> owned(fields.begin(), fields.end());
    if (table.header.empty()) {
      table.header = std::move(owned);
      continue;
    }
    if (owned.size() != table.header.size()) {
      throw DataError(fmt::format("{}:{}: expected {} fields, found {}", path.string(), line_no,
                                  table.header.size(), owned.size()));
    }
    table.rows.push_back(std::move(owned));
    table.line_numbers.push_back(line_no);
  }
  if (table.header.empty()) throw DataError(fmt::format("'{}' is empty", path.string()));
  if (table.rows.empty()) throw DataError(fmt::format("'{}' has no data rows", path.string()));
  return table;
}

std::optional<std::size_t> column_index(const RawTable& t, std::string_view name) {
  auto it = std::find(t.header.begin(), t.header.end(), name);
  if (it == t.header.end()) return std::nullopt;
  return static_cast<std::size_t>(it - t.header.begin());
}

// Resolves the date column into a start point and frequency, checking that the
// sequence is gapless and strictly increasing.
std::pair<Period, Frequency> resolve_dates(const RawTable& t, std::size_t col,
                                           std::optional<int> override_freq,
                                           const std::filesystem::path& path) {
  std::vector<ParsedDate> dates;
  dates.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    auto d = parse_date(t.rows[r][col]);
    if (!d) {
      throw DataError(fmt::format("{}:{}: unparsable date '{}'", path.string(), t.line_numbers[r],
                                  t.rows[r][col]));
    }
    if (r > 0 && d->implied_frequency != dates.front().implied_frequency) {
      throw DataError(fmt::format("{}:{}: date '{}' mixes formats", path.string(),
                                  t.line_numbers[r], t.rows[r][col]));
    }
    dates.push_back(*d);
  }

  const int implied = dates.front().implied_frequency;
  int native = implied;
  if (native == 0) {
    if (!override_freq) {
      throw DataError(fmt::format("{}: generic period dates require an explicit frequency",
                                  path.string()));
    }
    native = *override_freq;
  }
  const Frequency native_freq(native);
  for (std::size_t r = 1; r < dates.size(); ++r) {
    const Period expected = advance(dates[r - 1].point, 1, native_freq);
    const Period got = dates[r].point;
    if (got == expected) continue;
    if (got <= dates[r - 1].point) {
      throw DataError(fmt::format("{}:{}: duplicate or decreasing date {}", path.string(),
                                  t.line_numbers[r], format_period(got, native_freq)));
    }
    throw DataError(fmt::format("{}:{}: gap at {}", path.string(), t.line_numbers[r],
                                format_period(expected, native_freq)));
  }

  const Frequency freq(override_freq.value_or(native));
  Period start = dates.front().point;
  if (freq.periods_per_year() != native) start.period = 1;
  if (start.period > freq.periods_per_year()) {
    throw DataError(fmt::format("{}: start period {} exceeds frequency {}", path.string(),
                                start.period, freq.periods_per_year()));
  }
  return {start, freq};
}

Vector parse_column(const RawTable& t, std::size_t col, const std::filesystem::path& path) {
  Vector v(static_cast<Index>(t.rows.size()));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    auto x = parse_double(t.rows[r][col]);
    if (!x) {
      throw DataError(fmt::format("{}:{}: unparsable value '{}' in column '{}'", path.string(),
                                  t.line_numbers[r], t.rows[r][col], t.header[col]));
    }
    if (!std::isfinite(*x)) {
      throw DataError(fmt::format("{}:{}: non-finite value in column '{}'", path.string(),
                                  t.line_numbers[r], t.header[col]));
    }
    v[static_cast<Index>(r)] = *x;
  }
  return v;
}

}  // namespace

Frequency::Frequency(int periods_per_year) : periods_(periods_per_year) {
  if (periods_per_year < 1) {
    throw DataError(fmt::format("frequency must be >= 1, got {}", periods_per_year));
  }
}

Period advance(Period p, long steps, Frequency freq) {
  const long s = freq.periods_per_year();
  const long linear = static_cast<long>(p.year) * s + (p.period - 1) + steps;
  return Period{static_cast<int>(floor_div(linear, s)),
                static_cast<int>(linear - floor_div(linear, s) * s) + 1};
}

long periods_between(Period from, Period to, Frequency freq) {
  const long s = freq.periods_per_year();
  return (static_cast<long>(to.year) * s + to.period) - (static_cast<long>(from.year) * s + from.period);
}

std::string format_period(Period p, Frequency freq) {
  switch (freq.periods_per_year()) {
    case 1: return fmt::format("{:04d}", p.year);
    case 4: return fmt::format("{:04d}-Q{}", p.year, p.period);
    case 12: return fmt::format("{:04d}-{:02d}", p.year, p.period);
    default: return fmt::format("{:04d}-P{}", p.year, p.period);
  }
}

std::optional<ParsedDate> parse_date(std::string_view text) {
  text = trim(text);
  const auto dash = text.find('-', 1);
  if (dash == std::string_view::npos) {
    auto y = parse_int(text);
    if (!y) return std::nullopt;
    return ParsedDate{Period{static_cast<int>(*y), 1}, 1};
  }
  auto y = parse_int(text.substr(0, dash));
  if (!y) return std::nullopt;
  std::string_view rest = text.substr(dash + 1);
  if (rest.empty()) return std::nullopt;
  if (rest.front() == 'Q' || rest.front() == 'q') {
    auto q = parse_int(rest.substr(1));
    if (!q || *q < 1 || *q > 4) return std::nullopt;
    return ParsedDate{Period{static_cast<int>(*y), static_cast<int>(*q)}, 4};
  }
  if (rest.front() == 'P' || rest.front() == 'p') {
    auto k = parse_int(rest.substr(1));
    if (!k || *k < 1) return std::nullopt;
    return ParsedDate{Period{static_cast<int>(*y), static_cast<int>(*k)}, 0};
  }
  // YYYY-MM, optionally YYYY-MM-01 style day suffix is not accepted.
  auto m = parse_int(rest);
  if (!m || *m < 1 || *m > 12 || rest.size() != 2) return std::nullopt;
  return ParsedDate{Period{static_cast<int>(*y), static_cast<int>(*m)}, 12};
}

TimeSeries::TimeSeries(Vector values, Period start, Frequency freq, std::string name)
    : values_(std::move(values)), start_(start), freq_(freq), name_(std::move(name)) {
  if (values_.size() == 0) throw DataError("time series must contain at least one value");
  for (Index i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw DataError(fmt::format("time series '{}' has a non-finite value at index {}", name_, i));
    }
  }
  if (start_.period < 1 || start_.period > freq_.periods_per_year()) {
    throw DataError(fmt::format("start period {} outside 1..{}", start_.period,
                                freq_.periods_per_year()));
  }
}

int TimeSeries::season_of(Index i) const {
  const long s = freq_.periods_per_year();
  const long pos = (start_.period - 1) + static_cast<long>(i);
  return static_cast<int>(pos - floor_div(pos, s) * s);
}

TimeSeries TimeSeries::with_values(Vector values) const {
  return TimeSeries(std::move(values), start_, freq_, name_);
}

TimeSeries TimeSeries::with_values(Vector values, long offset) const {
  return TimeSeries(std::move(values), advance(start_, offset, freq_), freq_, name_);
}

TimeSeries TimeSeries::renamed(std::string name) const {
  return TimeSeries(values_, start_, freq_, std::move(name));
}

std::vector<std::string> period_labels(int s, int first) {
  static constexpr std::array<const char*, 12> kMonths = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                          "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(s));
  for (int k = 0; k < s; ++k) {
    const int p = (first - 1 + k) % s + 1;
    if (s == 12) {
      labels.emplace_back(kMonths[static_cast<std::size_t>(p - 1)]);
    } else if (s == 4) {
      labels.push_back(fmt::format("Q{}", p));
    } else {
      labels.push_back(fmt::format("P{}", p));
    }
  }
  return labels;
}

SeasonalLayout seasonal_layout(const TimeSeries& ts) {
  const int s = ts.periods_per_year();
  if (s < 2) throw DataError("seasonal layout requires frequency >= 2");
  SeasonalLayout layout;
  layout.cycle_length = s;
  layout.labels = period_labels(s, ts.start().period);
  for (Index i = 0; i < ts.size(); ++i) {
    if (i % s == 0) layout.rows.emplace_back();
    layout.rows.back().push_back(ts[i]);
  }
  return layout;
}

TimeSeries slice(const TimeSeries& ts, Period from, Period to) {
  if (to < from) {
    throw DataError(fmt::format("slice end {} precedes start {}", format_period(to, ts.frequency()),
                                format_period(from, ts.frequency())));
  }
  const long first = periods_between(ts.start(), from, ts.frequency());
  const long last = periods_between(ts.start(), to, ts.frequency());
  if (first < 0 || last >= ts.size()) {
    throw DataError(fmt::format("slice [{}, {}] outside series span [{}, {}]",
                                format_period(from, ts.frequency()), format_period(to, ts.frequency()),
                                format_period(ts.start(), ts.frequency()),
                                format_period(ts.end(), ts.frequency())));
  }
  return ts.with_values(ts.values().segment(first, last - first + 1), first);
}

TimeSeries load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  const RawTable t = read_raw(path);
  const auto date_col = column_index(t, schema.date_column);
  if (!date_col) throw DataError(fmt::format("{}: missing column '{}'", path.string(), schema.date_column));
  const auto value_col = column_index(t, schema.value_column);
  if (!value_col) throw DataError(fmt::format("{}: missing column '{}'", path.string(), schema.value_column));
  auto [start, freq] = resolve_dates(t, *date_col, schema.frequency, path);
  return TimeSeries(parse_column(t, *value_col, path), start, freq, schema.value_column);
}

void save_csv(const TimeSeries& ts, const std::filesystem::path& path) {
  if (path.empty() || std::filesystem::is_directory(path)) {
    throw DataError(fmt::format("'{}' is not a writable file path", path.string()));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError(fmt::format("cannot write '{}'", path.string()));
  out << "date,value\n";
  for (Index i = 0; i < ts.size(); ++i) {
    out << format_period(ts.period_at(i), ts.frequency()) << ',' << shortest(ts[i]) << '\n';
  }
  if (!out) throw DataError(fmt::format("write to '{}' failed", path.string()));
}

const TimeSeries& SeriesTable::column(std::string_view name) const {
  for (const auto& c : columns) {
    if (c.name() == name) return c;
  }
  throw DataError(fmt::format("no column named '{}'", name));
}

std::vector<std::string> SeriesTable::names() const {
  std::vector<std::string> out;
  for (const auto& c : columns) out.push_back(c.name());
  return out;
}

SeriesTable load_csv_table(const std::filesystem::path& path, const std::string& date_column,
                           std::optional<int> frequency) {
  const RawTable t = read_raw(path);
  const auto date_col = column_index(t, date_column);
  Period start{1, 1};
  Frequency freq(frequency.value_or(1));
  if (date_col) std::tie(start, freq) = resolve_dates(t, *date_col, frequency, path);

  SeriesTable table;
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    if (date_col && c == *date_col) continue;
    table.columns.emplace_back(parse_column(t, c, path), start, freq, t.header[c]);
  }
  if (table.columns.empty()) throw DataError(fmt::format("{}: no value columns", path.string()));
  return table;
}

}  // namespace chronofit
