// Copyright 2026 The SFTW Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sftw/bayes.h"

#include <cmath>
#include <vector>

#include "doctest.h"

namespace sftw {
namespace {

using doctest::Approx;

McOptions Options(int64_t samples, uint64_t seed = 5) {
  McOptions o;
  o.samples = samples;
  o.seed = seed;
  return o;
}

// Expected service time of player 0 with two truthful players, types
// uniform on the unit square, by the midpoint rule. Player 0 only waits when
// the other type is earlier and within gamma.
// Agreement checks use a 99.9% band so a fixed seed is not a coin flip.
bool WithinBand(const McEstimate& e, double truth) {
  return std::abs(e.mean - truth) <= e.half_width_95 * 3.29 / 1.96 + 1e-12;
}

double TwoPlayerQuadrature(double gamma, int cells = 4000) {
  const double h = 1.0 / cells;
  double total = 0;
  for (int a = 0; a < cells; ++a) {
    const double t0 = (a + 0.5) * h;
    for (int b = 0; b < cells; ++b) {
      const double t1 = (b + 0.5) * h;
      double wait = t1 < t0 ? std::max(0.0, t1 + gamma - t0) : 0.0;
      total += t0 + wait;
    }
  }
  return total * h * h;
}

TEST_CASE("type sampling") {
  PriorSpec prior{Prior::Uniform(0, 10), 3};
  CHECK(SampleTypeProfile(prior, 9) == SampleTypeProfile(prior, 9));
  CHECK(SampleTypeProfile(prior, 9) != SampleTypeProfile(prior, 10));
  for (uint64_t seed = 0; seed < 1000; ++seed) {
    for (double t : SampleTypeProfile(prior, seed)) {
      CHECK(t >= 0);
      CHECK(t <= 10);
    }
  }
  PriorSpec unit{Prior::Uniform(0, 1), 2};
  std::vector<double> sums(2, 0);
  const int draws = 100000;
  for (int seed = 0; seed < draws; ++seed) {
    auto t = SampleTypeProfile(unit, seed);
    sums[0] += t[0];
    sums[1] += t[1];
  }
  CHECK(std::abs(sums[0] / draws - 0.5) <= 0.01);
  CHECK(std::abs(sums[1] / draws - 0.5) <= 0.01);

  CHECK_THROWS_AS(Prior::Uniform(1, 1), std::invalid_argument);
  CHECK_THROWS_AS(Prior::FromQuantiles({0, 1, 1}), std::invalid_argument);
}

TEST_CASE("custom prior by quantiles") {
  Prior p = Prior::FromQuantiles({0, 0.1, 1});
  CHECK(p.Quantile(0) == 0);
  CHECK(p.Quantile(0.5) == Approx(0.1));
  CHECK(p.Quantile(0.75) == Approx(0.55));
  PriorSpec prior{p, 1};
  std::vector<StrategyFunction> truthful{StrategyFunction::Truthful()};
  McEstimate e = MonteCarloServiceTime(0, truthful, prior, 0.5, Options(50000));
  // Mean of the piecewise-uniform law: 0.5 * 0.05 + 0.5 * 0.55.
  CHECK(WithinBand(e, 0.3));
}

TEST_CASE("strategy functions") {
  CHECK(StrategyFunction::Truthful()(1.5) == 1.5);
  auto shift = StrategyFunction::ShiftOnWindow(0.2, 0, 0.8);
  CHECK(shift(0.5) == Approx(0.7));
  CHECK(shift(0.9) == 0.9);
  CHECK(shift(0.8) == Approx(1.0));
  auto table = StrategyFunction::Tabulated({0, 1}, {0, 1});
  CHECK(table(0.5) == Approx(1.0));
  CHECK(table(2) == Approx(3));
  CHECK_THROWS_AS(StrategyFunction::ShiftOnWindow(-1, 0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(StrategyFunction::Tabulated({0, 1}, {0, -1}),
                  std::invalid_argument);
}

TEST_CASE("service time estimates") {
  std::vector<StrategyFunction> one{StrategyFunction::Truthful()};
  PriorSpec single{Prior::Uniform(0, 1), 1};
  McEstimate e = MonteCarloServiceTime(0, one, single, 0.3, Options(100000));
  CHECK(WithinBand(e, 0.5));
  CHECK(e.samples == 100000);
  CHECK(e.seed == 5);

  std::vector<StrategyFunction> two(2, StrategyFunction::Truthful());
  PriorSpec pair{Prior::Uniform(0, 1), 2};
  McEstimate zero = MonteCarloServiceTime(0, two, pair, 0.0, Options(100000));
  CHECK(WithinBand(zero, 0.5));

  McEstimate busy = MonteCarloServiceTime(0, two, pair, 0.1, Options(100000));
  const double oracle = TwoPlayerQuadrature(0.1);
  CHECK(std::abs(oracle - (0.5 + 0.1 * 0.1 / 2 - 0.001 / 6)) <= 1e-4);
  CHECK(WithinBand(busy, oracle));

  CHECK_THROWS_AS(MonteCarloServiceTime(0, two, pair, 0.1, Options(0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(MonteCarloServiceTime(0, one, pair, 0.1, Options(10)),
                  std::invalid_argument);
}

TEST_CASE("deviation gains") {
  PriorSpec pair{Prior::Uniform(0, 1), 2};
  McEstimate none = DeviationGain(0, 0.0, 0, 1, pair, 0.1, Options(20000));
  CHECK(none.mean == 0);
  CHECK(none.half_width_95 == 0);

  McEstimate g2 = DeviationGain(0, 0.2, 0, 0.8, pair, 0.1, Options(100000));
  CHECK(g2.upper_95() < 0);

  PriorSpec triple{Prior::Uniform(0, 1), 3};
  McEstimate g3 = DeviationGain(1, 0.1, 0, 1, triple, 0.05, Options(100000));
  CHECK(g3.upper_95() < 0);

  CHECK_THROWS_AS(DeviationGain(0, 0.1, 0.5, 0.4, pair, 0.1, Options(10)),
                  std::invalid_argument);
}

TEST_CASE("estimates do not depend on the thread count") {
  PriorSpec triple{Prior::Uniform(0, 1), 3};
  McOptions a = Options(50000, 77);
  a.threads = 1;
  McOptions b = a;
  b.threads = 3;
  McEstimate x = DeviationGain(2, 0.1, 0, 1, triple, 0.1, a);
  McEstimate y = DeviationGain(2, 0.1, 0, 1, triple, 0.1, b);
  CHECK(x.mean == y.mean);
  CHECK(x.half_width_95 == y.half_width_95);
  McEstimate z = DeviationGain(2, 0.1, 0, 1, triple, 0.1, a);
  CHECK(x.mean == z.mean);
}

TEST_CASE("best-response scan") {
  PriorSpec pair{Prior::Uniform(0, 1), 2};
  std::vector<double> own{0.3};
  auto single = ScanBestResponse(0, 0.3, own, pair, 0.1, Options(1000));
  CHECK(single.argmin == 0.3);

  std::vector<double> grid{0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  auto scan = ScanBestResponse(0, 0.3, grid, pair, 0.1, Options(100000));
  CHECK(scan.argmin == 0.3);
  REQUIRE(scan.rows.size() == grid.size());
  for (size_t k = 1; k < scan.rows.size(); ++k) {
    CHECK(scan.rows[k].estimate.mean > scan.rows[k - 1].estimate.mean);
  }

  // Without service time nobody waits, so each estimate is the grid point.
  auto free = ScanBestResponse(0, 0.3, grid, pair, 0.0, Options(10000));
  for (const auto& row : free.rows) {
    CHECK(row.estimate.mean == Approx(row.arrival));
  }
  CHECK(free.argmin == 0.3);

  std::vector<double> bad{0.2};
  CHECK_THROWS_AS(ScanBestResponse(0, 0.3, bad, pair, 0.1, Options(10)),
                  std::invalid_argument);
  CHECK_THROWS_AS(ScanBestResponse(0, 0.3, {}, pair, 0.1, Options(10)),
                  std::invalid_argument);
}

}  // namespace
}  // namespace sftw
