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

// Skip-gram negative sampling kernel: embedding storage, the per-pair
// gradient step and per-slot learning-rate schedules.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ssvec/rng.hpp"
#include "ssvec/space_saving.hpp"

namespace ssvec {

/// Logistic function, evaluated without overflow for any finite x.
inline double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

/// Row-major K x D target (input) and context (output) matrices.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::size_t rows, std::size_t dim);

  /// Every entry of both matrices drawn i.i.d. from N(0, 1), target matrix
  /// first.
  static EmbeddingTable standard_normal(std::size_t rows, std::size_t dim,
                                        Rng& rng);

  std::size_t rows() const { return rows_; }
  std::size_t dim() const { return dim_; }

  std::span<float> target(std::size_t row) {
    return {target_.data() + row * dim_, dim_};
  }
  std::span<const float> target(std::size_t row) const {
    return {target_.data() + row * dim_, dim_};
  }
  std::span<float> context(std::size_t row) {
    return {context_.data() + row * dim_, dim_};
  }
  std::span<const float> context(std::size_t row) const {
    return {context_.data() + row * dim_, dim_};
  }

  std::span<float> target_data() { return target_; }
  std::span<const float> target_data() const { return target_; }
  std::span<float> context_data() { return context_; }
  std::span<const float> context_data() const { return context_; }

  /// Redraws both rows of `row` from N(0, 1), target row first.
  void redraw_row(std::size_t row, Rng& rng);

  bool all_finite() const;

  /// Bitwise equality of shapes and both matrices.
  friend bool operator==(const EmbeddingTable& a, const EmbeddingTable& b);

 private:
  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  std::vector<float> target_;
  std::vector<float> context_;
};

enum class ScheduleKind : std::uint8_t { kLinear = 0, kPolynomial = 1 };

/// Learning rate as a function of a step counter t >= 1.
///
///   linear:     max(rho_min, rho0 * (1 - (t - 1) / horizon))
///   polynomial: max(rho_min, rho0 * (tau / (tau + t - 1))^kappa)
struct LearningSchedule {
  ScheduleKind kind = ScheduleKind::kLinear;
  double rho0 = 2.5e-2;
  double rho_min = 2.5e-6;
  double horizon = 1e6;
  double tau = 1e3;
  double kappa = 0.6;

  double rate(std::uint64_t t) const;
  void validate() const;

  friend bool operator==(const LearningSchedule&,
                         const LearningSchedule&) = default;
};

/// One step counter per slot, all starting at 1.
class SlotLearningState {
 public:
  SlotLearningState() = default;
  SlotLearningState(std::size_t slots, LearningSchedule schedule);

  double rate(Slot slot) const { return schedule_.rate(steps_.at(slot)); }
  std::uint64_t steps(Slot slot) const { return steps_.at(slot); }
  void reset(Slot slot) { steps_.at(slot) = 1; }
  void advance(Slot slot) { ++steps_[slot]; }

  std::size_t slots() const { return steps_.size(); }
  const LearningSchedule& schedule() const { return schedule_; }
  std::span<const std::uint64_t> all_steps() const { return steps_; }

  /// Throws kCorrupt unless every counter is >= 1.
  static SlotLearningState restore(LearningSchedule schedule,
                                   std::vector<std::uint64_t> steps);

  friend bool operator==(const SlotLearningState&,
                         const SlotLearningState&) = default;

 private:
  LearningSchedule schedule_;
  std::vector<std::uint64_t> steps_;
};

/// Rows touched by a single (input, output) pair update.
struct GradientStepSpec {
  Slot input = 0;
  Slot output = 0;
  std::span<const Slot> negatives;
};

/// Redraws the slot's target and context rows and restarts its schedule.
void reset_slot(EmbeddingTable& table, SlotLearningState& state, Slot slot,
                Rng& rng);

/// One SGNS ascent step on
///   log s(<v_in, v'_out>) + sum_neg log s(-<v_in, v'_neg>)
/// using each row's own learning rate. Context rows are updated in order
/// (output, then negatives); the input row's update accumulates each context
/// row as it was just before that row's own update and is applied last.
/// Afterwards every distinct slot involved advances its step counter once.
void sgns_step(EmbeddingTable& table, SlotLearningState& state,
               const GradientStepSpec& spec);

/// Same update with one shared learning rate and no step counters.
void sgns_step(EmbeddingTable& table, double rate,
               const GradientStepSpec& spec);

/// Cosine similarity; nullopt when either vector has zero norm.
std::optional<double> cosine(std::span<const float> u,
                             std::span<const float> v);

}  // namespace ssvec
