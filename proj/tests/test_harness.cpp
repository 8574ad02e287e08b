#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "memlane/harness.hpp"

using namespace memlane;

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.push_back("");
  return out;
}

double parse_double(const std::string& cell) {
  double v = 0;
  auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  REQUIRE(ec == std::errc{});
  REQUIRE(p == cell.data() + cell.size());
  return v;
}

BenchConfig small_measure(const char* kernel) {
  BenchConfig cfg;
  cfg.kernel = kernel;
  cfg.n = kernel == std::string("lbm") ? 8 : (kernel == std::string("jacobi2d") ? 32 : 4096);
  cfg.threads = 2;
  cfg.reps = 3;
  return cfg;
}

}  // namespace

TEST_CASE("measure mode: reported and actual bandwidth keep the RFO ratio") {
  auto rec = run(small_measure("triad"));
  REQUIRE(rec.time_best_s.has_value());
  REQUIRE(rec.time_median_s.has_value());
  CHECK(*rec.time_best_s <= *rec.time_median_s);
  REQUIRE(rec.gbs_reported.has_value());
  REQUIRE(rec.gbs_actual.has_value());
  CHECK(*rec.gbs_actual >= *rec.gbs_reported);
  CHECK(*rec.gbs_actual / *rec.gbs_reported == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(!rec.mlups.has_value());
  CHECK(!rec.balance.has_value());

  auto copy = run(small_measure("copy"));
  CHECK(*copy.gbs_actual / *copy.gbs_reported == doctest::Approx(3.0 / 2.0).epsilon(1e-12));
}

TEST_CASE("measure mode: grid kernels report MLUPs, not GB/s") {
  auto jacobi = run(small_measure("jacobi2d"));
  CHECK(jacobi.mlups.has_value());
  CHECK(!jacobi.gbs_reported.has_value());

  auto lbm = run(small_measure("lbm"));
  CHECK(lbm.mlups.has_value());
  CHECK(!lbm.gbs_reported.has_value());
}

TEST_CASE("the warm-up sweep never reaches the statistics") {
  RunHooks hooks;
  hooks.sweep_time_penalty = [](unsigned index) { return index == 0 ? 100.0 : 0.0; };
  auto cfg = small_measure("triad");
  cfg.n = 1024;
  auto rec = run(cfg, hooks);
  CHECK(*rec.time_best_s < 1.0);
  CHECK(*rec.time_median_s < 1.0);
}

TEST_CASE("median comes from the sorted timed sweeps") {
  RunHooks hooks;
  // timed sweeps get penalties 4,2,6 -> sorted 2,4,6: best ~2, median ~4
  hooks.sweep_time_penalty = [](unsigned index) {
    const double penalty[] = {100.0, 4.0, 2.0, 6.0};
    return penalty[index];
  };
  auto cfg = small_measure("triad");
  cfg.n = 1024;
  auto rec = run(cfg, hooks);
  CHECK(*rec.time_best_s == doctest::Approx(2.0).epsilon(0.05));
  CHECK(*rec.time_median_s == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("analyze mode fills the balance score and nothing else") {
  BenchConfig cfg;
  cfg.kernel = "triad";
  cfg.mode = BenchMode::Analyze;
  cfg.n = std::size_t{1} << 25;
  cfg.threads = 8;
  cfg.common_block = true;
  cfg.offsets = {0};
  auto rec = run(cfg);
  REQUIRE(rec.balance.has_value());
  CHECK(rec.balance_score() == 0.25);
  CHECK(!rec.time_best_s.has_value());
  CHECK(!rec.gbs_reported.has_value());

  cfg.offsets = {32 * 8};
  CHECK(run(cfg).balance_score() == 0.5);

  // determinism: identical configs give identical rationals
  auto again = run(cfg);
  CHECK(again.balance->distinct_sum == run(cfg).balance->distinct_sum);
  CHECK(again.balance->group_count == run(cfg).balance->group_count);
}

TEST_CASE("predict mode turns bandwidth into the expected rate") {
  BenchConfig cfg;
  cfg.kernel = "jacobi2d";
  cfg.mode = BenchMode::Predict;
  cfg.n = 100;
  cfg.bandwidth = 18e9;
  auto rec = run(cfg);
  CHECK(*rec.mlups == doctest::Approx(750.0).epsilon(1e-9));

  cfg.kernel = "triad";
  cfg.n = 4096;
  auto triad = run(cfg);
  CHECK(*triad.gbs_reported == doctest::Approx(18.0 * 3.0 / 4.0).epsilon(1e-9));
  CHECK(*triad.gbs_actual == doctest::Approx(18.0).epsilon(1e-12));
}

TEST_CASE("config validation") {
  BenchConfig bad;
  bad.kernel = "warp";
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  BenchConfig reps;
  reps.reps = 2;
  CHECK_THROWS_AS(reps.validate(), std::invalid_argument);

  BenchConfig predict;
  predict.mode = BenchMode::Predict;
  CHECK_THROWS_AS(predict.validate(), std::invalid_argument);  // no bandwidth

  BenchConfig common;
  common.common_block = true;
  CHECK_THROWS_AS(common.validate(), std::invalid_argument);  // measure + common

  BenchConfig lbm_common;
  lbm_common.kernel = "lbm";
  lbm_common.mode = BenchMode::Analyze;
  lbm_common.common_block = true;
  CHECK_THROWS_AS(lbm_common.validate(), std::invalid_argument);

  BenchConfig odd;
  odd.offsets = {12};  // not a multiple of the element size
  CHECK_THROWS_AS(odd.validate(), std::invalid_argument);

  BenchConfig multi;
  multi.mode = BenchMode::Analyze;
  multi.common_block = true;
  multi.offsets = {0, 128};  // COMMON takes a single padding value
  CHECK_THROWS_AS(multi.validate(), std::invalid_argument);
}

TEST_CASE("sweep: value handling") {
  BenchConfig cfg;
  cfg.kernel = "triad";
  cfg.mode = BenchMode::Analyze;
  cfg.n = 4096;
  cfg.threads = 2;

  CHECK_THROWS_AS(sweep(cfg, SweepVariable::Offset, {}), std::invalid_argument);
  CHECK_THROWS_AS(sweep(cfg, SweepVariable::Offset, {0, 8, 8}), std::invalid_argument);

  BenchConfig lbm;
  lbm.kernel = "lbm";
  lbm.n = 4;
  lbm.mode = BenchMode::Analyze;
  CHECK_THROWS_AS(sweep(lbm, SweepVariable::Offset, {0, 8}), std::invalid_argument);

  auto single = sweep(cfg, SweepVariable::Threads, {1});
  CHECK(single.records.size() == 1);
  CHECK(single.variable == "threads");

  // offset sweep scales per-array offsets k*value
  auto series = sweep(cfg, SweepVariable::Offset, {0, 128});
  CHECK(series.records[1].config.offsets == std::vector<std::size_t>{0, 128, 256});

  // jacobi2d gets per-plane offsets and runs in measure mode too
  auto jc = small_measure("jacobi2d");
  jc.n = 16;
  auto jseries = sweep(jc, SweepVariable::Offset, {0, 512});
  CHECK(jseries.records[1].config.offsets == std::vector<std::size_t>{0, 512});
  CHECK(jseries.records[1].mlups.has_value());
}

TEST_CASE("csv: header-only for an empty series, empty cells for n/a metrics") {
  SweepSeries empty;
  auto text = to_csv(empty);
  CHECK(text ==
        "variable,value,kernel,N,threads,schedule,offset,seg_align,shift,"
        "time_best_s,time_median_s,gbs_reported,gbs_actual,mlups,balance_score\n");

  BenchConfig cfg;
  cfg.kernel = "vtriad";
  cfg.mode = BenchMode::Analyze;
  cfg.n = 1 << 16;
  cfg.threads = 4;
  cfg.offsets = {0, 128, 256, 384};
  SweepSeries one;
  one.records.push_back(run(cfg));
  auto lines = split(to_csv(one), '\n');
  REQUIRE(lines.size() >= 2);
  auto cells = split(lines[1], ',');
  REQUIRE(cells.size() == 15);
  CHECK(cells[2] == "vtriad");
  CHECK(cells[6] == "0;128;256;384");
  CHECK(cells[9] == "");    // time_best_s
  CHECK(cells[11] == "");   // gbs_reported
  CHECK(cells[14] == "1");  // balance_score
}

TEST_CASE("csv round-trips every number exactly") {
  auto cfg = small_measure("triad");
  cfg.n = 2048;
  auto series = sweep(cfg, SweepVariable::Threads, {1, 2});
  auto lines = split(to_csv(series), '\n');
  REQUIRE(lines.size() == 4);  // header, two rows, trailing newline
  CHECK(lines[3].empty());
  for (std::size_t i = 0; i < 2; ++i) {
    auto cells = split(lines[1 + i], ',');
    REQUIRE(cells.size() == 15);
    const auto& rec = series.records[i];
    CHECK(parse_double(cells[9]) == *rec.time_best_s);
    CHECK(parse_double(cells[10]) == *rec.time_median_s);
    CHECK(parse_double(cells[11]) == *rec.gbs_reported);
    CHECK(parse_double(cells[12]) == *rec.gbs_actual);
    CHECK(cells[5] == "static");
  }
}

TEST_CASE("csv files are written and schedule uses the colon form") {
  auto path = std::filesystem::temp_directory_path() / "memlane_test_sweep.csv";
  auto cfg = small_measure("triad");
  cfg.n = 1024;
  cfg.schedule = Schedule{4};
  sweep(cfg, SweepVariable::Threads, {1, 2}, path.string());
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(split(row, ',')[5] == "static:4");
  std::filesystem::remove(path);

  CHECK_THROWS_AS(emit_csv(SweepSeries{}, "/nonexistent-dir/x.csv"), std::runtime_error);
}

TEST_CASE("recipe checks reproduce the qualitative claims") {
  for (const char* name :
       {"jacobi-512-128", "triad-offsets-128-256-384", "stream-offset-0-worstcase"}) {
    auto report = recipe_check(name);
    CHECK(report.pass);
    CHECK(!report.details.empty());
  }
  CHECK_THROWS_AS(recipe_check("unknown-recipe"), std::invalid_argument);
}

TEST_CASE("schedule parsing accepts comma and colon forms") {
  CHECK(Schedule::parse("static").chunk == 0);
  CHECK(Schedule::parse("static,1").chunk == 1);
  CHECK(Schedule::parse("static:16").chunk == 16);
  CHECK(Schedule{}.to_string() == "static");
  CHECK(Schedule{3}.to_string() == "static:3");
  CHECK_THROWS_AS(Schedule::parse("dynamic"), std::invalid_argument);
  CHECK_THROWS_AS(Schedule::parse("static,0"), std::invalid_argument);
}

TEST_CASE("static work assignment covers the index space exactly once") {
  for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{13}, std::size_t{100}}) {
    for (unsigned threads : {1u, 3u, 7u}) {
      for (std::size_t chunk : {std::size_t{0}, std::size_t{1}, std::size_t{4}, std::size_t{200}}) {
        std::vector<int> seen(n, 0);
        for (unsigned tid = 0; tid < threads; ++tid) {
          std::size_t count = 0;
          for (const auto& r : ranges_for(n, threads, tid, Schedule{chunk})) {
            CHECK(r.begin < r.end);
            CHECK(r.end <= n);
            for (std::size_t i = r.begin; i < r.end; ++i) ++seen[i];
            count += r.size();
          }
          CHECK(count == iterations_for(n, threads, tid, Schedule{chunk}));
        }
        for (int c : seen) CHECK(c == 1);
      }
    }
  }
  CHECK_THROWS_AS(ranges_for(10, 0, 0, Schedule{}), std::invalid_argument);
  CHECK_THROWS_AS(ranges_for(10, 2, 2, Schedule{}), std::invalid_argument);
}

TEST_CASE("thrashing candidates: lattice first dimension on a 64-element boundary") {
  BenchConfig cfg;
  cfg.kernel = "lbm";
  cfg.n = 62;  // 62 + 2 halo cells = 64
  CHECK(thrashing_candidate(cfg));
  cfg.pad_dim1 = 2;
  CHECK(!thrashing_candidate(cfg));
  cfg.n = 63;
  cfg.pad_dim1 = 0;
  CHECK(!thrashing_candidate(cfg));
  cfg.kernel = "triad";
  cfg.n = 62;
  CHECK(!thrashing_candidate(cfg));
}
