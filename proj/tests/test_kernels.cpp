#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "memlane/kernels.hpp"
#include "memlane/oracle.hpp"

using namespace memlane;

namespace {

SegmentedArray make_array(std::size_t n, std::size_t segments, std::span<const double> values,
                          const LayoutParams& params = LayoutParams{8, 4096, 0, 0, 0}) {
  auto a = SegmentedArray::create(n, segments, params);
  a.fill_from(values);
  return a;
}

std::vector<double> random_values(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

}  // namespace

TEST_CASE("triad matches its definition on eight elements") {
  std::vector<double> b{1, 2, 3, 4, 5, 6, 7, 8};
  std::vector<double> c{1, 2, 3, 4, 5, 6, 7, 8};
  auto a = make_array(8, 1, std::vector<double>(8, 0.0));
  auto bb = make_array(8, 1, b);
  auto cc = make_array(8, 1, c);
  stream_triad(a, bb, cc, 2.0, 1, Schedule{});
  CHECK(a.to_vector() == std::vector<double>{3, 6, 9, 12, 15, 18, 21, 24});
  CHECK(a.to_vector() == oracle::triad(b, 2.0, c));
}

TEST_CASE("copy reproduces the source bitwise") {
  auto values = random_values(777, 1);
  auto a = make_array(777, 3, values);
  auto c = make_array(777, 3, std::vector<double>(777, -1.0));
  stream_copy(a, c, 2, Schedule{});
  CHECK(c.to_vector() == values);
}

TEST_CASE("scale and add match the oracle") {
  auto cv = random_values(500, 2);
  auto av = random_values(500, 3);
  auto b = make_array(500, 2, std::vector<double>(500, 0.0));
  auto c = make_array(500, 2, cv);
  stream_scale(b, c, 3.5, 2, Schedule{1});
  CHECK(b.to_vector() == oracle::scale(3.5, cv));

  auto a = make_array(500, 2, av);
  auto sum = make_array(500, 2, std::vector<double>(500, 0.0));
  stream_add(a, b, sum, 3, Schedule{});
  CHECK(sum.to_vector() == oracle::add(av, b.to_vector()));
}

TEST_CASE("vector triad: unit inputs give 2 everywhere, any thread count bitwise") {
  const std::size_t n = 1000;
  std::vector<double> ones(n, 1.0);
  auto bv = random_values(n, 4), cv = random_values(n, 5), dv = random_values(n, 6);

  auto a = make_array(n, 4, std::vector<double>(n, 0.0));
  auto b = make_array(n, 4, ones);
  auto c = make_array(n, 4, ones);
  auto d = make_array(n, 4, ones);
  vector_triad(a, b, c, d, 4, Schedule{});
  for (double v : a.to_vector()) CHECK(v == 2.0);

  b.fill_from(bv);
  c.fill_from(cv);
  d.fill_from(dv);
  std::vector<std::vector<double>> results;
  for (unsigned threads : {1u, 2u, 3u, 8u})
    for (std::size_t chunk : {std::size_t{0}, std::size_t{1}, std::size_t{7}}) {
      vector_triad(a, b, c, d, threads, Schedule{chunk});
      results.push_back(a.to_vector());
    }
  for (const auto& r : results) CHECK(r == results.front());
  CHECK(results.front() == oracle::vector_triad(bv, cv, dv));
}

TEST_CASE("segmented execution equals the contiguous run bitwise") {
  const std::size_t n = 4093;  // prime, so segments are uneven
  auto bv = random_values(n, 7), cv = random_values(n, 8);

  auto flat_a = make_array(n, 1, std::vector<double>(n, 0.0));
  auto flat_b = make_array(n, 1, bv);
  auto flat_c = make_array(n, 1, cv);
  stream_triad(flat_a, flat_b, flat_c, 1.25, 1, Schedule{});

  LayoutParams segmented{8, 8192, 512, 128, 64};
  auto seg_a = make_array(n, 5, std::vector<double>(n, 0.0), segmented);
  auto seg_b = make_array(n, 5, bv, segmented);
  auto seg_c = make_array(n, 5, cv, segmented);
  stream_triad(seg_a, seg_b, seg_c, 1.25, 4, Schedule{2});

  CHECK(seg_a.to_vector() == flat_a.to_vector());
}

TEST_CASE("stream kernels reject shape mismatches and overlap") {
  auto a = make_array(100, 1, std::vector<double>(100, 0.0));
  auto b = make_array(100, 2, std::vector<double>(100, 0.0));
  auto c = make_array(101, 1, std::vector<double>(101, 0.0));
  CHECK_THROWS_AS(stream_copy(a, b, 1, Schedule{}), std::invalid_argument);  // segmentation differs
  CHECK_THROWS_AS(stream_copy(a, c, 1, Schedule{}), std::invalid_argument);  // length differs
  CHECK_THROWS_AS(stream_copy(a, a, 1, Schedule{}), std::invalid_argument);  // aliased
}

TEST_CASE("jacobi: all-ones plane is a fixed point") {
  auto grid = Jacobi2DGrid::create(16, LayoutParams{8, 4096, 0, 0, 0});
  for (std::size_t r = 0; r < 16; ++r)
    for (double& v : grid.source.segment(r)) v = 1.0;
  jacobi_sweep(grid, 2, Schedule{});
  for (std::size_t r = 0; r < 16; ++r)
    for (double v : grid.dest.segment(r)) CHECK(v == 1.0);
}

TEST_CASE("jacobi: 4x4 row-major ramp relaxes to 5.0 at (1,1)") {
  auto grid = Jacobi2DGrid::create(4, LayoutParams{8, 4096, 0, 0, 0});
  std::vector<double> plane(16);
  for (std::size_t i = 0; i < 16; ++i) plane[i] = static_cast<double>(i);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t j = 0; j < 4; ++j) grid.source.segment(r)[j] = plane[r * 4 + j];

  jacobi_sweep(grid, 1, Schedule{});
  CHECK(grid.dest.segment(1)[1] == 5.0);  // (1+4+6+9)/4

  auto expected = oracle::jacobi(plane, 4);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t j = 0; j < 4; ++j) CHECK(grid.dest.segment(r)[j] == expected[r * 4 + j]);
}

TEST_CASE("jacobi result is independent of threads, schedule and row layout") {
  const std::size_t n = 33;
  auto plane = random_values(n * n, 9);
  auto run = [&](const LayoutParams& p, unsigned threads, std::size_t chunk) {
    auto grid = Jacobi2DGrid::create(n, p);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t j = 0; j < n; ++j) grid.source.segment(r)[j] = plane[r * n + j];
    jacobi_sweep(grid, threads, Schedule{chunk});
    std::vector<double> out;
    for (std::size_t r = 0; r < n; ++r)
      for (double v : grid.dest.segment(r)) out.push_back(v);
    return out;
  };

  auto reference = oracle::jacobi(plane, n);
  LayoutParams packed{8, 4096, 0, 0, 0};
  LayoutParams aligned{8, 8192, 512, 128, 0};
  for (unsigned threads : {1u, 2u, 4u, 8u})
    for (std::size_t chunk : {std::size_t{0}, std::size_t{1}}) {
      CHECK(run(packed, threads, chunk) == reference);
      CHECK(run(aligned, threads, chunk) == reference);
    }
}

TEST_CASE("jacobi rejects tiny domains") {
  CHECK_THROWS_AS(Jacobi2DGrid::create(2, LayoutParams{}), std::invalid_argument);
}

TEST_CASE("stream descriptors: roles, streams and flops") {
  auto triad = stream_descriptor(StreamKernel::Triad, 100);
  CHECK(triad.read_stream_count() == 2);
  CHECK(triad.write_stream_count() == 1);
  CHECK(triad.bytes_per_iteration() == 24);
  CHECK(triad.iteration_count() == 100);

  auto vt = stream_descriptor(StreamKernel::VectorTriad, 100);
  CHECK(vt.read_stream_count() == 3);
  CHECK(vt.write_stream_count() == 1);
  CHECK(vt.flops_per_iteration == 2);
  CHECK(vt.bytes_per_iteration() == 32);
  auto vt_traffic = traffic_model(vt);
  CHECK(vt_traffic.bytes_memory_rfo == 40);  // one line fill per write stream
  CHECK(vt_traffic.rfo_ratio == doctest::Approx(5.0 / 4.0).epsilon(1e-12));
  CHECK(vt_traffic.balance_memory == 16.0);  // bytes/flop
}

TEST_CASE("traffic model: RFO accounting ratios") {
  auto triad = traffic_model(stream_descriptor(StreamKernel::Triad, 1));
  CHECK(triad.rfo_ratio == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(triad.bytes_memory == 24);
  CHECK(triad.bytes_memory_rfo == 32);

  auto copy = traffic_model(stream_descriptor(StreamKernel::Copy, 1));
  CHECK(copy.rfo_ratio == doctest::Approx(3.0 / 2.0).epsilon(1e-12));
  CHECK(copy.flops == 0);

  auto scale = traffic_model(stream_descriptor(StreamKernel::Scale, 1));
  CHECK(scale.rfo_ratio == doctest::Approx(3.0 / 2.0).epsilon(1e-12));
  auto add = traffic_model(stream_descriptor(StreamKernel::Add, 1));
  CHECK(add.rfo_ratio == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("traffic model: jacobi naive 10, effective 4 and 6 bytes/flop") {
  auto m = traffic_model(jacobi_descriptor(100));
  CHECK(m.balance_total == 10.0);
  CHECK(m.balance_memory == 4.0);
  CHECK(m.balance_memory_rfo == 6.0);
  CHECK(m.bytes_memory_rfo >= m.bytes_memory);
}

TEST_CASE("traffic model: RFO applies exactly to write streams") {
  for (auto kind : {StreamKernel::Copy, StreamKernel::Scale, StreamKernel::Add,
                    StreamKernel::Triad, StreamKernel::VectorTriad}) {
    auto m = traffic_model(stream_descriptor(kind, 1));
    CHECK(m.bytes_memory_rfo > m.bytes_memory);
  }
  auto reads_only = stream_descriptor(StreamKernel::Copy, 1);
  reads_only.streams.pop_back();  // drop the write stream
  auto m = traffic_model(reads_only);
  CHECK(m.bytes_memory_rfo == m.bytes_memory);
}

TEST_CASE("predictions: jacobi 750 MLUPs/s and copy ratio at 18 GB/s") {
  auto jacobi = predicted_performance(jacobi_descriptor(100), 18e9);
  CHECK(jacobi.unit == RateUnit::MLUPs);
  CHECK(jacobi.value == doctest::Approx(750.0).epsilon(1e-9));

  auto copy = predicted_performance(stream_descriptor(StreamKernel::Copy, 1), 18e9);
  CHECK(copy.unit == RateUnit::GBytesPerSec);
  CHECK(copy.value == doctest::Approx(18.0 * 2.0 / 3.0).epsilon(1e-9));

  CHECK_THROWS_AS(predicted_performance(jacobi_descriptor(10), 0.0), std::invalid_argument);
}

TEST_CASE("jacobi descriptor: one fetched read, three cache hits, one write") {
  auto d = jacobi_descriptor(10);
  REQUIRE(d.streams.size() == 5);
  int cached = 0, mem_reads = 0, writes = 0;
  for (const auto& s : d.streams) {
    if (s.cache_resident)
      ++cached;
    else if (s.direction == StreamDirection::Read)
      ++mem_reads;
    else
      ++writes;
  }
  CHECK(cached == 3);
  CHECK(mem_reads == 1);
  CHECK(writes == 1);
  CHECK(d.iteration_count() == 64);  // (10-2)^2 interior sites
}
