#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "pwret/io.hpp"

using namespace pwret;

namespace {

TimeLimitedSignal awkward_signal() {
  return TimeLimitedSignal(
      kPi, {Complex(1.0 / 3.0, -0.0), Complex(1e-300, 0.1),
            Complex(4.0, -1.0 / 7.0)});
}

}  // namespace

TEST_CASE("doubles round trip bitwise through text") {
  const std::vector<double> probes = {kPi,  1.0 / 3.0, 1e-300, -0.0,
                                      0.1,  4.0,       -1e308, 2.2250738585072014e-308};
  for (const double v : probes) {
    const double back = io::parse_double(io::format_double(v));
    CHECK(back == v);
    CHECK(std::signbit(back) == std::signbit(v));
  }
  CHECK_THROWS_AS(io::parse_double("not a number"), std::invalid_argument);
  CHECK_THROWS_AS(io::parse_double("1.5extra"), std::invalid_argument);
  CHECK_THROWS_AS(io::parse_double(""), std::invalid_argument);
}

TEST_CASE("signal records round trip byte identically") {
  const TimeLimitedSignal x = awkward_signal();
  const std::string text = io::write_signal(x);

  std::istringstream in(text);
  const TimeLimitedSignal back = io::read_signal(in);
  CHECK(back.interval_length() == x.interval_length());
  REQUIRE(back.max_harmonic() == x.max_harmonic());
  for (int j = -1; j <= 1; ++j) CHECK(back.coefficient(j) == x.coefficient(j));
  CHECK(io::write_signal(back) == text);
}

TEST_CASE("malformed signal records are rejected") {
  const std::vector<std::string> bad = {
      "",
      "T = 1.0\nJ = 1\n",
      "T = 1.0\nJ = 1\ncoefficients = 0,0 0,0\n",      // 2 of 3
      "T = 0.0\nJ = 0\ncoefficients = 0,0\n",          // bad interval
      "T = 1.0\nJ = one\ncoefficients = 0,0\n",
      "T = 1.0\nJ = 0\ncoefficients = 0\n",            // missing imag
  };
  for (const std::string& text : bad) {
    std::istringstream in(text);
    CHECK_THROWS_AS(io::read_signal(in), std::invalid_argument);
  }
}

TEST_CASE("frame records round trip byte identically") {
  const FrameFamily f = FrameFamily::canonical_k2();
  const std::string text = io::write_frame(f);

  std::istringstream in(text);
  const FrameFamily back = io::read_frame(in);
  REQUIRE(back.dim() == f.dim());
  REQUIRE(back.count() == f.count());
  for (int m = 0; m < f.count(); ++m)
    for (int k = 0; k < f.dim(); ++k)
      CHECK(back.vector(m)[k] == f.vector(m)[k]);
  CHECK(io::write_frame(back) == text);

  // The reloaded family still certifies.
  CHECK(back.verify_tight(1e-12).ok);
  CHECK(back.verify_two_uniform(1e-12).ok);
}

TEST_CASE("malformed frame records are rejected") {
  const std::vector<std::string> bad = {
      "",
      "K = 2\nM = 2\nvector = 1,0 0,0\n",  // one vector missing
      "K = 2\nM = 1\nvector = 1,0\n",      // wrong arity
  };
  for (const std::string& text : bad) {
    std::istringstream in(text);
    CHECK_THROWS_AS(io::read_frame(in), std::invalid_argument);
  }
}

TEST_CASE("grid csv lists every block position") {
  const InterpolationGrid grid = InterpolationGrid::shannon(1.0, 2, 1, -2, 1);
  const std::string text = io::write_grid_csv(grid);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  CHECK(line == "n,k,lambda_re,lambda_im");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == grid.block_count() * grid.dim());
}

TEST_CASE("measurement records round trip byte identically") {
  const InterpolationGrid grid = InterpolationGrid::shannon(1.0, 2, 1, -3, 2);
  const ModulatorBank bank(FrameFamily::canonical_k2(), grid);
  const TimeLimitedSignal x = TimeLimitedSignal::random(1.0, 4, 91);
  const MeasurementSet ms = add_noise(measure(x, bank), 1e-4, 17);

  const std::string text = io::write_measurements(ms);
  std::istringstream in(text);
  const MeasurementSet back = io::read_measurements(in);

  CHECK(back.grid().dim() == grid.dim());
  CHECK(back.grid().overlap() == grid.overlap());
  CHECK(back.grid().n_min() == grid.n_min());
  CHECK(back.grid().n_max() == grid.n_max());
  CHECK(back.grid().block_spacing() == grid.block_spacing());
  for (int k = 0; k < grid.dim(); ++k)
    CHECK(back.grid().offsets()[k] == grid.offsets()[k]);
  for (std::size_t i = 0; i < ms.samples().size(); ++i)
    CHECK(back.samples()[i] == ms.samples()[i]);
  CHECK(back.noise().enabled);
  CHECK(back.noise().sigma == 1e-4);
  CHECK(back.noise().seed == 17);
  CHECK_FALSE(back.augmented().enabled);
  CHECK(io::write_measurements(back) == text);
}

TEST_CASE("augmented metadata survives the round trip") {
  const double t_prime = 1.25;
  const TimeLimitedSignal x = TimeLimitedSignal::random(1.0, 3, 93);
  const L1BoundedSignal bounded(x, l1_norm(x) * 1.5);
  const InterpolationGrid grid =
      InterpolationGrid::shannon(t_prime, 2, 1, -4, 2);
  const ModulatorBank bank(FrameFamily::canonical_k2(), grid);
  const MeasurementSet ms = measure_augmented(bounded, bank, t_prime);

  const std::string text = io::write_measurements(ms);
  std::istringstream in(text);
  const MeasurementSet back = io::read_measurements(in);
  CHECK(back.augmented().enabled);
  CHECK(back.augmented().l1_bound == bounded.l1_bound());
  CHECK(back.augmented().t_prime == t_prime);
  CHECK(io::write_measurements(back) == text);
}

TEST_CASE("complex grids round trip through the measurement record") {
  const InterpolationGrid base = InterpolationGrid::shannon(1.0, 2, 1, -2, 2);
  const std::vector<double> eta = {0.5, 0.5};
  const InterpolationGrid grid = base.with_imaginary_shift(eta);
  const ModulatorBank bank(FrameFamily::canonical_k2(), grid);
  const TimeLimitedSignal x = TimeLimitedSignal::random(1.0, 3, 95);
  const MeasurementSet ms = measure(x, bank);

  const std::string text = io::write_measurements(ms);
  std::istringstream in(text);
  const MeasurementSet back = io::read_measurements(in);
  for (int k = 0; k < grid.dim(); ++k)
    CHECK(back.grid().offsets()[k] == grid.offsets()[k]);
  CHECK(io::write_measurements(back) == text);
}

TEST_CASE("malformed measurement records are rejected") {
  const std::vector<std::string> bad = {
      "",
      "not a measurement file\n",
      "# measurement-set v1\nn,m,c\n0,0,1.0\n",  // no grid metadata
  };
  for (const std::string& text : bad) {
    std::istringstream in(text);
    CHECK_THROWS_AS(io::read_measurements(in), std::invalid_argument);
  }
}

TEST_CASE("fourier value csv lists only resolved points") {
  const InterpolationGrid grid = InterpolationGrid::shannon(1.0, 2, 1, 0, 3);
  std::vector<Complex> values(grid.point_count(), Complex(1.0, -2.0));
  std::vector<bool> resolved(values.size(), true);
  resolved[1] = false;
  resolved[4] = false;

  const std::string text = io::write_fourier_values_csv(grid, values, resolved);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  CHECK(line == "lambda_re,lambda_im,value_re,value_im");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == grid.point_count() - 2);
}
