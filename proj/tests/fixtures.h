//
// Copyright 2026 The privaudit Authors
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
//

#ifndef PRIVAUDIT_TESTS_FIXTURES_H_
#define PRIVAUDIT_TESTS_FIXTURES_H_

#include <cstdint>

#include "privaudit/attacks.h"
#include "privaudit/dataset.h"
#include "privaudit/mlp.h"
#include "privaudit/train.h"

namespace privaudit::testing {

// The canonical high-generalization-gap audit: two weakly separated Gaussian
// classes (separation 0.25) in 4 dimensions, 30 members, 30 non-members and 60 population
// records, and a [4, 64, 64, 2] target trained until it memorizes its members.
struct OverfitFixture {
  LabeledDataset dataset;
  AuditSplit split;
  LabeledDataset members;
  LabeledDataset nonmembers;
  LabeledDataset population;
  MlpModel init;  // untrained target
};

inline constexpr size_t kFixtureMembers = 30;
inline constexpr size_t kFixtureNonmembers = 30;
inline constexpr size_t kFixturePerClass = 60;
inline constexpr size_t kFixtureLayers[] = {4, 64, 64, 2};

OverfitFixture MakeOverfitFixture(uint64_t seed);

// Schedule that drives the fixture's training loss below 0.01.
TrainConfig OverfitTrainConfig(uint64_t seed);

MlpModel TrainOverfitTarget(const OverfitFixture& fixture, uint64_t seed);

// Four shadows with the target's architecture and schedule.
ShadowConfig FixtureShadowConfig(uint64_t seed);

// DP-SGD schedule for privacy-utility sweeps on the fixture: full batch, few
// steps, unit clip norm. The noise multiplier is set per sweep point.
TrainConfig FixtureDpTrainConfig(uint64_t seed);

}  // namespace privaudit::testing

#endif  // PRIVAUDIT_TESTS_FIXTURES_H_
