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

#include "ssvec/sgns.hpp"

#include <algorithm>
#include <cstring>

#include "ssvec/error.hpp"

namespace ssvec {

namespace {

double dot(std::span<const float> a, std::span<const float> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return sum;
}

void axpy(float alpha, std::span<const float> x, std::span<float> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void check_slots(const EmbeddingTable& table, const GradientStepSpec& spec) {
  const auto rows = table.rows();
  bool ok = spec.input < rows && spec.output < rows;
  for (Slot k : spec.negatives) ok = ok && k < rows;
  if (!ok) fail(ErrorCode::kInvalidArgument, "slot index out of range");
}

template <typename RateOf>
void apply_step(EmbeddingTable& table, const GradientStepSpec& spec,
                RateOf rate_of) {
  thread_local std::vector<float> update;
  update.assign(table.dim(), 0.0f);

  const auto input = table.target(spec.input);
  const float input_rate = static_cast<float>(rate_of(spec.input));

  auto visit = [&](Slot k, double label) {
    auto ctx = table.context(k);
    const double alpha = label - sigmoid(dot(input, ctx));
    axpy(input_rate * static_cast<float>(alpha), ctx, update);
    axpy(static_cast<float>(rate_of(k) * alpha), input, ctx);
  };

  visit(spec.output, 1.0);
  for (Slot k : spec.negatives) visit(k, 0.0);
  axpy(1.0f, update, input);
}

}  // namespace

EmbeddingTable::EmbeddingTable(std::size_t rows, std::size_t dim)
    : rows_(rows),
      dim_(dim),
      target_(rows * dim, 0.0f),
      context_(rows * dim, 0.0f) {
  require(rows >= 1 && dim >= 1, "embedding table needs rows, dim >= 1");
}

EmbeddingTable EmbeddingTable::standard_normal(std::size_t rows,
                                               std::size_t dim, Rng& rng) {
  EmbeddingTable table(rows, dim);
  for (auto& x : table.target_) x = static_cast<float>(rng.normal());
  for (auto& x : table.context_) x = static_cast<float>(rng.normal());
  return table;
}

void EmbeddingTable::redraw_row(std::size_t row, Rng& rng) {
  require(row < rows_, "row out of range");
  for (auto& x : target(row)) x = static_cast<float>(rng.normal());
  for (auto& x : context(row)) x = static_cast<float>(rng.normal());
}

bool EmbeddingTable::all_finite() const {
  auto finite = [](float x) { return std::isfinite(x); };
  return std::all_of(target_.begin(), target_.end(), finite) &&
         std::all_of(context_.begin(), context_.end(), finite);
}

bool operator==(const EmbeddingTable& a, const EmbeddingTable& b) {
  if (a.rows_ != b.rows_ || a.dim_ != b.dim_) return false;
  const std::size_t bytes = a.target_.size() * sizeof(float);
  return std::memcmp(a.target_.data(), b.target_.data(), bytes) == 0 &&
         std::memcmp(a.context_.data(), b.context_.data(), bytes) == 0;
}

double LearningSchedule::rate(std::uint64_t t) const {
  const double elapsed = static_cast<double>(t > 0 ? t - 1 : 0);
  double rho;
  if (kind == ScheduleKind::kLinear) {
    rho = rho0 * (1.0 - elapsed / horizon);
  } else {
    rho = rho0 * std::pow(tau / (tau + elapsed), kappa);
  }
  return std::max(rho_min, rho);
}

void LearningSchedule::validate() const {
  require(std::isfinite(rho0) && std::isfinite(rho_min) && rho_min > 0 &&
              rho_min <= rho0,
          "learning rates must satisfy 0 < rho_min <= rho0");
  require(std::isfinite(horizon) && horizon > 0,
          "learning-rate horizon must be positive");
  require(std::isfinite(tau) && tau > 0, "tau must be positive");
  require(std::isfinite(kappa) && kappa >= 0, "kappa must be non-negative");
}

SlotLearningState::SlotLearningState(std::size_t slots,
                                     LearningSchedule schedule)
    : schedule_(schedule), steps_(slots, 1) {
  schedule_.validate();
}

SlotLearningState SlotLearningState::restore(
    LearningSchedule schedule, std::vector<std::uint64_t> steps) {
  if (std::any_of(steps.begin(), steps.end(),
                  [](std::uint64_t t) { return t == 0; })) {
    fail(ErrorCode::kCorrupt, "step counter below 1");
  }
  SlotLearningState state;
  state.schedule_ = schedule;
  state.steps_ = std::move(steps);
  return state;
}

void reset_slot(EmbeddingTable& table, SlotLearningState& state, Slot slot,
                Rng& rng) {
  require(slot < table.rows() && slot < state.slots(), "slot out of range");
  table.redraw_row(slot, rng);
  state.reset(slot);
}

void sgns_step(EmbeddingTable& table, SlotLearningState& state,
               const GradientStepSpec& spec) {
  check_slots(table, spec);
  require(state.slots() == table.rows(), "learning state size mismatch");
  apply_step(table, spec, [&](Slot k) { return state.rate(k); });

  thread_local std::vector<Slot> touched;
  touched.clear();
  touched.push_back(spec.input);
  touched.push_back(spec.output);
  touched.insert(touched.end(), spec.negatives.begin(), spec.negatives.end());
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  for (Slot k : touched) state.advance(k);
}

void sgns_step(EmbeddingTable& table, double rate,
               const GradientStepSpec& spec) {
  check_slots(table, spec);
  apply_step(table, spec, [rate](Slot) { return rate; });
}

std::optional<double> cosine(std::span<const float> u,
                             std::span<const float> v) {
  require(u.size() == v.size(), "cosine of vectors with different dims");
  const double uu = dot(u, u);
  const double vv = dot(v, v);
  if (uu == 0.0 || vv == 0.0) return std::nullopt;
  const double c = dot(u, v) / std::sqrt(uu * vv);
  return std::clamp(c, -1.0, 1.0);
}

}  // namespace ssvec
