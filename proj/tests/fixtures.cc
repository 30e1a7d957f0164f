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

#include "fixtures.h"

#include <cstdlib>
#include <iostream>

#include "privaudit/rng.h"

namespace privaudit::testing {
namespace {

template <typename T>
T ValueOrDie(absl::StatusOr<T> v) {
  if (!v.ok()) {
    std::cerr << "fixture setup failed: " << v.status() << "\n";
    std::abort();
  }
  return *std::move(v);
}

}  // namespace

OverfitFixture MakeOverfitFixture(uint64_t seed) {
  OverfitFixture f;
  SyntheticParams params;
  params.n_per_class = kFixturePerClass;
  params.n_features = 4;
  params.num_classes = 2;
  params.class_separation = 0.25;
  params.seed = DeriveSeed(seed, 1);
  f.dataset = ValueOrDie(GenerateSynthetic(params));
  f.split = ValueOrDie(MakeAuditSplit(f.dataset, kFixtureMembers,
                                      kFixtureNonmembers, DeriveSeed(seed, 2)));
  f.members = Subset(f.dataset, f.split.member_idx);
  f.nonmembers = Subset(f.dataset, f.split.nonmember_idx);
  f.population = Subset(f.dataset, f.split.population_idx);
  f.init = ValueOrDie(InitMlp(kFixtureLayers, DeriveSeed(seed, 3)));
  return f;
}

TrainConfig OverfitTrainConfig(uint64_t seed) {
  TrainConfig c;
  c.learning_rate = 0.1;
  c.epochs = 300;
  c.batch_size = 10;
  c.seed = DeriveSeed(seed, 4);
  return c;
}

MlpModel TrainOverfitTarget(const OverfitFixture& fixture, uint64_t seed) {
  return ValueOrDie(
             TrainSgd(fixture.init, fixture.members, OverfitTrainConfig(seed)))
      .model;
}

ShadowConfig FixtureShadowConfig(uint64_t seed) {
  ShadowConfig c;
  c.n_shadows = 4;
  c.shadow_train_fraction = 0.5;
  c.shadow_model_layers.assign(std::begin(kFixtureLayers),
                               std::end(kFixtureLayers));
  c.shadow_train_config = OverfitTrainConfig(seed);
  c.attack_train_config.learning_rate = 0.1;
  c.attack_train_config.epochs = 100;
  c.attack_train_config.batch_size = 32;
  c.seed = DeriveSeed(seed, 5);
  return c;
}

TrainConfig FixtureDpTrainConfig(uint64_t seed) {
  TrainConfig c;
  c.learning_rate = 0.5;
  c.epochs = 50;
  c.batch_size = kFixtureMembers;
  c.seed = DeriveSeed(seed, 6);
  c.dp = DpParams{};
  c.dp->clip_norm = 1.0;
  c.dp->delta = 1e-5;
  return c;
}

}  // namespace privaudit::testing
