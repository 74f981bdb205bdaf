//  Copyright 2026 The ssvec Authors. All Rights Reserved.
//
//  Licensed under the Apache License, Version 2.0 (the "License");
//  you may not use this file except in compliance with the License.
//  You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
//  Unless required by applicable law or agreed to in writing, software
//  distributed under the License is distributed on an "AS IS" BASIS,
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//  See the License for the specific language governing permissions and
//  limitations under the License.


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "ssvec/error.hpp"
#include "ssvec/sgns.hpp"

using namespace ssvec;

namespace {

// exp(-1) from its Taylor series in long double, independent of libm.
long double exp_minus_one_series() {
  long double term = 1.0L, sum = 1.0L;
  for (int n = 1; n < 40; ++n) {
    term *= -1.0L / n;
    sum += term;
  }
  return sum;
}

double dot_d(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double log_sigmoid(double x) { return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); }

}  // namespace

TEST_CASE("sigmoid") {
  CHECK(sigmoid(0.0) == 0.5);
  const double oracle = static_cast<double>(1.0L / (1.0L + exp_minus_one_series()));
  CHECK(sigmoid(1.0) == doctest::Approx(oracle).epsilon(1e-15));
  CHECK(sigmoid(1.0) == doctest::Approx(0.7310585786).epsilon(1e-10));
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-30, 30);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(gen);
    CHECK(sigmoid(x) + sigmoid(-x) == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK(sigmoid(1000.0) == 1.0);
  CHECK(sigmoid(-1000.0) == 0.0);
  CHECK(std::isfinite(sigmoid(-1e308)));
}

TEST_CASE("standard normal initialization") {
  Rng rng(7);
  const auto table = EmbeddingTable::standard_normal(1000, 1000, rng);
  CHECK(table.rows() == 1000);
  CHECK(table.dim() == 1000);
  CHECK(table.target_data().size() == 1000000);
  CHECK(table.context_data().size() == 1000000);
  for (auto data : {table.target_data(), table.context_data()}) {
    double sum = 0, sq = 0;
    for (float x : data) {
      sum += x;
      sq += static_cast<double>(x) * x;
    }
    const double n = static_cast<double>(data.size());
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(var - 1.0) < 0.02);
  }
  Rng again(7);
  CHECK(EmbeddingTable::standard_normal(1000, 1000, again) == table);
}

TEST_CASE("learning schedules") {
  LearningSchedule lin;
  lin.rho0 = 2.5e-2;
  lin.rho_min = 2.5e-6;
  lin.horizon = 1e4;
  CHECK(lin.rate(1) == lin.rho0);
  CHECK(lin.rate(5001) == doctest::Approx(1.25e-2).epsilon(1e-12));
  CHECK(lin.rate(10001) == lin.rho_min);
  CHECK(lin.rate(1000000) == lin.rho_min);

  LearningSchedule poly = lin;
  poly.kind = ScheduleKind::kPolynomial;
  poly.tau = 100;
  poly.kappa = 0.5;
  CHECK(poly.rate(1) == poly.rho0);
  CHECK(poly.rate(301) == doctest::Approx(poly.rho0 * 0.5).epsilon(1e-12));

  for (const auto& s : {lin, poly}) {
    double prev = s.rate(1);
    for (std::uint64_t t = 2; t < 100000; t += 37) {
      const double r = s.rate(t);
      CHECK(r <= prev);
      CHECK(r >= s.rho_min);
      CHECK(r <= s.rho0);
      prev = r;
    }
  }

  LearningSchedule bad = lin;
  bad.rho_min = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = lin;
  bad.rho_min = 1.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("reset_slot redraws one row and restarts its schedule") {
  Rng rng(3);
  auto table = EmbeddingTable::standard_normal(4, 5, rng);
  SlotLearningState state(4, LearningSchedule{});
  for (int i = 0; i < 10; ++i) state.advance(2);
  const auto before = table;
  Rng r1(99);
  reset_slot(table, state, 2, r1);
  CHECK(state.steps(2) == 1);
  CHECK(state.rate(2) == state.schedule().rate(1));
  for (Slot s : {0u, 1u, 3u}) {
    CHECK(std::equal(table.target(s).begin(), table.target(s).end(),
                     before.target(s).begin()));
    CHECK(std::equal(table.context(s).begin(), table.context(s).end(),
                     before.context(s).begin()));
  }
  auto other = before;
  SlotLearningState other_state(4, LearningSchedule{});
  Rng r2(99);
  reset_slot(other, other_state, 2, r2);
  CHECK(other == table);
}

TEST_CASE("zero rows are a fixed point but still count steps") {
  EmbeddingTable table(6, 8);
  SlotLearningState state(6, LearningSchedule{});
  const std::vector<Slot> negs{2, 3, 3};
  sgns_step(table, state, GradientStepSpec{0, 1, negs});
  CHECK(table == EmbeddingTable(6, 8));
  CHECK(state.steps(0) == 2);
  CHECK(state.steps(1) == 2);
  CHECK(state.steps(2) == 2);
  CHECK(state.steps(3) == 2);  // repeated negatives advance once
  CHECK(state.steps(4) == 1);
}

TEST_CASE("one-dimensional step by hand") {
  // alpha = 1 - sigmoid(1); both rows move by 0.1 * alpha.
  const double expected = 1.0 + 0.1 * (1.0 - 1.0 / (1.0 + std::exp(-1.0)));
  CHECK(expected == doctest::Approx(1.02689414).epsilon(1e-8));

  EmbeddingTable table(2, 1);
  table.target(0)[0] = 1.0f;
  table.context(1)[0] = 1.0f;
  LearningSchedule s;
  s.rho0 = 0.1;
  s.rho_min = 0.1;
  SlotLearningState state(2, s);
  sgns_step(table, state, GradientStepSpec{0, 1, {}});
  CHECK(table.target(0)[0] == doctest::Approx(expected).epsilon(1e-6));
  CHECK(table.context(1)[0] == doctest::Approx(expected).epsilon(1e-6));

  EmbeddingTable fixed(2, 1);
  fixed.target(0)[0] = 1.0f;
  fixed.context(1)[0] = 1.0f;
  sgns_step(fixed, 0.1, GradientStepSpec{0, 1, {}});
  CHECK(fixed == table);
}

TEST_CASE("update matches finite differences of the pair objective") {
  const std::size_t dim = 10, negatives = 5;
  const double rate = 0.05, h = 1e-5;
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<float> u(-0.5f, 0.5f);
  for (int config = 0; config < 100; ++config) {
    // Slot 0 is the input, 1 the output and 2..6 the negatives.
    EmbeddingTable table(negatives + 2, dim);
    for (auto& x : table.target_data()) x = u(gen);
    for (auto& x : table.context_data()) x = u(gen);
    const auto before = table;
    std::vector<Slot> negs;
    for (Slot k = 2; k < negatives + 2; ++k) negs.push_back(k);
    sgns_step(table, rate, GradientStepSpec{0, 1, negs});

    // Parameters: input row then the six context rows, in double.
    std::vector<std::vector<double>> theta;
    theta.emplace_back(before.target(0).begin(), before.target(0).end());
    for (Slot k = 1; k < negatives + 2; ++k) {
      theta.emplace_back(before.context(k).begin(), before.context(k).end());
    }
    auto objective = [&] {
      double f = log_sigmoid(dot_d(theta[0], theta[1]));
      for (std::size_t j = 2; j < theta.size(); ++j) {
        f += log_sigmoid(-dot_d(theta[0], theta[j]));
      }
      return f;
    };

    double err2 = 0, norm2 = 0;
    for (std::size_t v = 0; v < theta.size(); ++v) {
      const auto after = v == 0 ? table.target(0) : table.context(static_cast<Slot>(v));
      const auto orig = v == 0 ? before.target(0) : before.context(static_cast<Slot>(v));
      for (std::size_t i = 0; i < dim; ++i) {
        const double saved = theta[v][i];
        theta[v][i] = saved + h;
        const double up = objective();
        theta[v][i] = saved - h;
        const double down = objective();
        theta[v][i] = saved;
        const double fd = (up - down) / (2 * h);
        const double step = (static_cast<double>(after[i]) - orig[i]) / rate;
        err2 += (step - fd) * (step - fd);
        norm2 += fd * fd;
      }
    }
    CHECK(std::sqrt(err2 / norm2) < 1e-4);
  }
}

TEST_CASE("a step touches only the named rows") {
  Rng rng(5);
  auto table = EmbeddingTable::standard_normal(10, 4, rng);
  const auto before = table;
  SlotLearningState state(10, LearningSchedule{});
  const std::vector<Slot> negs{7, 8};
  sgns_step(table, state, GradientStepSpec{2, 5, negs});
  for (Slot s = 0; s < 10; ++s) {
    const bool target_touched = s == 2;
    const bool context_touched = s == 5 || s == 7 || s == 8;
    CHECK(std::equal(table.target(s).begin(), table.target(s).end(),
                     before.target(s).begin()) != target_touched);
    CHECK(std::equal(table.context(s).begin(), table.context(s).end(),
                     before.context(s).begin()) != context_touched);
  }
  CHECK_THROWS_AS(sgns_step(table, state, GradientStepSpec{2, 10, {}}), Error);
}

TEST_CASE("extreme values stay finite") {
  EmbeddingTable table(3, 4);
  for (auto& x : table.target_data()) x = 1e3f;
  for (auto& x : table.context_data()) x = -1e3f;
  SlotLearningState state(3, LearningSchedule{});
  const std::vector<Slot> negs{2};
  for (int i = 0; i < 100; ++i) sgns_step(table, state, GradientStepSpec{0, 1, negs});
  CHECK(table.all_finite());
}

TEST_CASE("cosine") {
  const std::vector<float> v{1.0f, -2.0f, 0.5f};
  const std::vector<float> neg{-1.0f, 2.0f, -0.5f};
  const std::vector<float> a{1.0f, 0.0f, 0.0f};
  const std::vector<float> b{0.0f, 3.0f, 0.0f};
  const std::vector<float> zero(3, 0.0f);
  CHECK(*cosine(v, v) == doctest::Approx(1.0));
  CHECK(*cosine(v, neg) == doctest::Approx(-1.0));
  CHECK(*cosine(a, b) == 0.0);
  CHECK_FALSE(cosine(zero, v).has_value());
  CHECK_THROWS_AS(cosine(a, std::vector<float>{1.0f}), Error);
}

TEST_CASE("learning state restore") {
  auto ok = SlotLearningState::restore(LearningSchedule{}, {1, 5, 2});
  CHECK(ok.steps(1) == 5);
  CHECK_THROWS_AS(SlotLearningState::restore(LearningSchedule{}, {1, 0}), Error);
}
