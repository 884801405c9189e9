#include "chronofit/core.hpp"
#include "chronofit/error.hpp"

#include "temp_dir.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

using namespace chronofit;
using chronofit::testing::TempDir;

namespace {

Index count_lines(const std::filesystem::path& p) {
  std::ifstream in(p);
  Index n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

}  // namespace

TEST_CASE("periods advance across year boundaries") {
  const Frequency m(12);
  CHECK(advance({1990, 11}, 3, m) == Period{1991, 2});
  CHECK(advance({1990, 1}, -1, m) == Period{1989, 12});
  CHECK(periods_between({1990, 1}, {1992, 3}, m) == 26);
  CHECK(format_period({1990, 3}, m) == "1990-03");
  CHECK(format_period({1990, 3}, Frequency(4)) == "1990-Q3");
  CHECK(format_period({1990, 1}, Frequency(1)) == "1990");
  CHECK(format_period({1990, 5}, Frequency(7)) == "1990-P5");
  CHECK_THROWS_AS(Frequency(0), DataError);
}

TEST_CASE("time series validates its values and start") {
  CHECK_THROWS_AS(TimeSeries(Vector(), {2000, 1}, Frequency(1)), DataError);
  Vector bad(2);
  bad << 1.0, std::nan("");
  CHECK_THROWS_AS(TimeSeries(bad, {2000, 1}, Frequency(1)), DataError);
  CHECK_THROWS_AS(TimeSeries(Vector::Ones(3), {2000, 13}, Frequency(12)), DataError);
  const TimeSeries ts(Vector::LinSpaced(5, 1, 5), {2000, 11}, Frequency(12));
  CHECK(ts.end() == Period{2001, 3});
  CHECK(ts.season_of(0) == 10);
  CHECK(ts.season_of(2) == 0);
}

TEST_CASE("load_csv maps monthly rows directly") {
  TempDir dir;
  const auto p = dir.file("m.csv", "date,value\n1990-01,10\n1990-02,11\n1990-03,12\n");
  const TimeSeries ts = load_csv(p);
  CHECK(ts.size() == 3);
  CHECK(ts[0] == 10.0);
  CHECK(ts[2] == 12.0);
  CHECK(ts.start() == Period{1990, 1});
  CHECK(ts.periods_per_year() == 12);
}

TEST_CASE("load_csv reports the gap") {
  TempDir dir;
  const auto p = dir.file("gap.csv", "date,value\n1990-01,10\n1990-03,12\n");
  try {
    (void)load_csv(p);
    FAIL("expected a gap error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("gap at 1990-02") != std::string::npos);
  }
}

TEST_CASE("load_csv infers annual and quarterly frequency") {
  TempDir dir;
  const TimeSeries a = load_csv(dir.file("a.csv", "date,value\n1990,5\n1991,6\n"));
  CHECK(a.periods_per_year() == 1);
  CHECK(a.start() == Period{1990, 1});
  const TimeSeries q = load_csv(dir.file("q.csv", "date,value\r\n1990-Q4,1\r\n1991-Q1,2\r\n"));
  CHECK(q.periods_per_year() == 4);
  CHECK(q.start() == Period{1990, 4});
}

TEST_CASE("load_csv rejects malformed input with line numbers") {
  TempDir dir;
  auto message = [&](const std::string& body) {
    try {
      (void)load_csv(dir.file("x.csv", body));
    } catch (const DataError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("date,value\n1990,1\n1991,abc\n").find(":3:") != std::string::npos);
  CHECK(message("date,value\n1990,1\n1990,2\n").find("duplicate") != std::string::npos);
  CHECK(message("date,value\n1990,1\n1991,nan\n").find("non-finite") != std::string::npos);
  CHECK(message("date,value\n1990,1\n1991,\n").find(":3:") != std::string::npos);
  CHECK_THROWS_AS((void)load_csv(dir / "missing.csv"), DataError);
}

TEST_CASE("save_csv round-trips bit-exactly") {
  TempDir dir;
  const Vector v = chronofit::testing::gaussian_noise(24, 99, 1e3);
  const TimeSeries ts(v, {1995, 4}, Frequency(12), "value");
  const auto p = dir / "out.csv";
  save_csv(ts, p);
  CHECK(count_lines(p) == 25);
  const TimeSeries back = load_csv(p);
  CHECK(back.start() == ts.start());
  CHECK(back.frequency() == ts.frequency());
  for (Index i = 0; i < v.size(); ++i) CHECK(back[i] == v[i]);
}

TEST_CASE("save_csv to a directory path fails") {
  TempDir dir;
  const TimeSeries ts(Vector::Ones(3), {2000, 1}, Frequency(1));
  CHECK_THROWS_AS(save_csv(ts, dir / ""), DataError);
  CHECK_THROWS_AS(save_csv(ts, dir / "no/such/dir/x.csv"), DataError);
}

TEST_CASE("seasonal layout partitions by cycle") {
  const auto full = chronofit::testing::monthly(Vector::LinSpaced(24, 1, 24));
  const SeasonalLayout l = seasonal_layout(full);
  CHECK(l.rows.size() == 2);
  CHECK(l.rows[0].size() == 12);
  CHECK(l.rows[1].size() == 12);
  CHECK(l.labels.front() == "Jan");

  const SeasonalLayout partial = seasonal_layout(chronofit::testing::monthly(Vector::LinSpaced(14, 1, 14)));
  REQUIRE(partial.rows.size() == 2);
  CHECK(partial.rows[1].size() == 2);

  CHECK_THROWS_AS((void)seasonal_layout(chronofit::testing::annual(Vector::Ones(5))), DataError);
}

TEST_CASE("seasonal layout preserves the multiset of values") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Index n = 5 + static_cast<Index>(seed * 7);
    const Vector v = chronofit::testing::gaussian_noise(n, seed);
    const TimeSeries ts(v, {2000, static_cast<int>(seed % 4) + 1}, Frequency(4));
    const SeasonalLayout l = seasonal_layout(ts);
    std::vector<double> flat;
    for (const auto& row : l.rows) flat.insert(flat.end(), row.begin(), row.end());
    std::vector<double> orig(v.begin(), v.end());
    std::sort(flat.begin(), flat.end());
    std::sort(orig.begin(), orig.end());
    CHECK(flat == orig);
    for (std::size_t r = 0; r + 1 < l.rows.size(); ++r) CHECK(l.rows[r].size() == 4u);
  }
}

TEST_CASE("slice extracts inclusive windows") {
  const TimeSeries ts = chronofit::testing::monthly(Vector::LinSpaced(36, 0, 35));
  const TimeSeries same = slice(ts, ts.start(), ts.end());
  CHECK(same.values() == ts.values());
  CHECK(same.start() == ts.start());

  const TimeSeries mid = slice(ts, {2001, 1}, {2001, 12});
  CHECK(mid.size() == 12);
  CHECK(mid.start() == Period{2001, 1});
  CHECK(mid[0] == 12.0);

  CHECK_THROWS_AS((void)slice(ts, {2001, 5}, {2001, 4}), DataError);
  CHECK_THROWS_AS((void)slice(ts, {1999, 12}, {2001, 4}), DataError);

  // Nested slices compose.
  const TimeSeries outer = slice(ts, {2000, 4}, {2002, 6});
  CHECK(slice(outer, {2001, 2}, {2001, 9}).values() == slice(ts, {2001, 2}, {2001, 9}).values());
}

TEST_CASE("multi-column tables and frequency override") {
  TempDir dir;
  const auto p = dir.file("t.csv", "date,a,b\n2000-P1,1,4\n2000-P2,2,5\n2000-P3,3,6\n2001-P1,4,7\n");
  CHECK_THROWS_AS((void)load_csv_table(p), DataError);
  const SeriesTable t = load_csv_table(p, "date", 3);
  CHECK(t.names() == std::vector<std::string>{"a", "b"});
  CHECK(t.column("b")[3] == 7.0);
  CHECK(t.column("a").end() == Period{2001, 1});
  CHECK_THROWS_AS((void)t.column("zzz"), DataError);

  const auto undated = dir.file("u.csv", "x,y\n1,2\n3,4\n");
  const SeriesTable u = load_csv_table(undated, "date");
  CHECK(u.columns.size() == 2);
  CHECK(u.column("y").start() == Period{1, 1});
}
