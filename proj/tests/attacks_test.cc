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

#include "privaudit/attacks.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "fixtures.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "privaudit/errors.h"
#include "privaudit/metrics.h"
#include "test_util.h"

namespace privaudit {
namespace {

using ::privaudit::testing::HasErrorKind;
using ::privaudit::testing::IsOk;
using ::privaudit::testing::OverfitFixture;

// Checks that `records` has exactly one entry per audited record, in
// ascending id order, with the split's membership bit and the record's class.
void ExpectCoversSplit(const std::vector<AttackRecord>& records,
                       const OverfitFixture& f, const std::string& name) {
  std::vector<size_t> expected = f.split.member_idx;
  expected.insert(expected.end(), f.split.nonmember_idx.begin(),
                  f.split.nonmember_idx.end());
  std::sort(expected.begin(), expected.end());
  ASSERT_EQ(records.size(), expected.size());
  const std::set<size_t> members(f.split.member_idx.begin(),
                                 f.split.member_idx.end());
  for (size_t i = 0; i < records.size(); ++i) {
    const AttackRecord& r = records[i];
    EXPECT_EQ(r.record_id, expected[i]);
    EXPECT_EQ(r.is_member, members.count(r.record_id) == 1);
    EXPECT_EQ(r.class_label, f.dataset.labels[r.record_id]);
    EXPECT_EQ(r.attack_name, name);
    EXPECT_TRUE(std::isfinite(r.score));
  }
}

class AttacksTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    fixture_ = new OverfitFixture(testing::MakeOverfitFixture(0));
    target_ = new MlpModel(testing::TrainOverfitTarget(*fixture_, 0));
  }
  static void TearDownTestSuite() {
    delete fixture_;
    delete target_;
  }
  static OverfitFixture* fixture_;
  static MlpModel* target_;
};

OverfitFixture* AttacksTest::fixture_ = nullptr;
MlpModel* AttacksTest::target_ = nullptr;

TEST_F(AttacksTest, PopulationLossScoresAreNegatedLosses) {
  const OverfitFixture& f = *fixture_;
  ASSERT_OK_AND_ASSIGN(const std::vector<AttackRecord> records,
                       PopulationLossAttack(*target_, f.dataset, f.split));
  ExpectCoversSplit(records, f, kPopulationLossAttack);
  for (const AttackRecord& r : records) {
    Matrix row(1, f.dataset.num_features());
    std::copy(f.dataset.features.row(r.record_id).begin(),
              f.dataset.features.row(r.record_id).end(),
              row.values().begin());
    const int label = f.dataset.labels[r.record_id];
    const double loss =
        (*PerExampleLosses(*target_, row, std::span(&label, 1)))[0];
    EXPECT_EQ(r.score, -loss);
    EXPECT_LE(r.score, 0.0);
  }
}

TEST_F(AttacksTest, PopulationLossDetectsOverfitting) {
  const auto records =
      *PopulationLossAttack(*target_, fixture_->dataset, fixture_->split);
  EXPECT_GE(*Auc(records), 0.7);
}

TEST_F(AttacksTest, PopulationLossShapeMismatch) {
  const size_t sizes[] = {3, 2};
  EXPECT_THAT(
      PopulationLossAttack(*InitMlp(sizes, 0), fixture_->dataset,
                           fixture_->split),
      HasErrorKind(kShapeMismatch));
}

TEST_F(AttacksTest, ShadowSplitsAndDeterminism) {
  const OverfitFixture& f = *fixture_;
  ShadowConfig cfg = testing::FixtureShadowConfig(0);
  cfg.shadow_train_config.epochs = 5;
  ASSERT_OK_AND_ASSIGN(const std::vector<ShadowModel> shadows,
                       TrainShadowModels(f.population, cfg));
  ASSERT_EQ(shadows.size(), 4u);
  for (const ShadowModel& s : shadows) {
    EXPECT_EQ(s.in_idx.size(), 30u);
    EXPECT_EQ(s.out_idx.size(), 30u);
    std::vector<size_t> both;
    std::set_intersection(s.in_idx.begin(), s.in_idx.end(), s.out_idx.begin(),
                          s.out_idx.end(), std::back_inserter(both));
    EXPECT_TRUE(both.empty());
    EXPECT_EQ(s.model.layer_sizes, cfg.shadow_model_layers);
  }
  EXPECT_NE(shadows[0].in_idx, shadows[1].in_idx);
  const std::vector<ShadowModel> again = *TrainShadowModels(f.population, cfg);
  for (size_t k = 0; k < shadows.size(); ++k) {
    EXPECT_EQ(shadows[k].model, again[k].model);
    EXPECT_EQ(shadows[k].in_idx, again[k].in_idx);
  }
}

TEST_F(AttacksTest, ShadowConfigErrors) {
  ShadowConfig cfg = testing::FixtureShadowConfig(0);
  cfg.n_shadows = 1;
  EXPECT_THAT(TrainShadowModels(fixture_->population, cfg),
              HasErrorKind(kInvalidArgument));
  cfg = testing::FixtureShadowConfig(0);
  cfg.shadow_train_fraction = 1.0;
  EXPECT_THAT(TrainShadowModels(fixture_->population, cfg),
              HasErrorKind(kInvalidArgument));
  cfg = testing::FixtureShadowConfig(0);
  const LabeledDataset tiny =
      Subset(fixture_->population, std::vector<size_t>{0, 1, 2});
  EXPECT_THAT(TrainShadowModels(tiny, cfg),
              HasErrorKind(kInsufficientPopulation));
}

TEST_F(AttacksTest, BlackboxFeatureLayout) {
  const std::vector<double> record = {0.1, -0.3, 2.0, 0.5};
  for (int label : {0, 1}) {
    ASSERT_OK_AND_ASSIGN(const std::vector<double> f,
                         BlackboxFeatures(*target_, record, label));
    ASSERT_EQ(f.size(), 4u);
    EXPECT_GE(f[0], f[1]);
    EXPECT_NEAR(f[0] + f[1], 1.0, 1e-9);
    EXPECT_EQ(f[2], label == 0 ? 1.0 : 0.0);
    EXPECT_EQ(f[3], label == 1 ? 1.0 : 0.0);
  }
}

TEST_F(AttacksTest, AttackDatasetIsBalanced) {
  const OverfitFixture& f = *fixture_;
  ShadowConfig cfg = testing::FixtureShadowConfig(0);
  cfg.shadow_train_fraction = 0.3;  // 18 in, 42 out per shadow
  cfg.shadow_train_config.epochs = 2;
  const std::vector<ShadowModel> shadows =
      *TrainShadowModels(f.population, cfg);
  ASSERT_OK_AND_ASSIGN(const LabeledDataset d,
                       BuildAttackDataset(shadows, f.population, 9));
  EXPECT_EQ(d.size(), 4u * 2u * 18u);
  EXPECT_EQ(std::count(d.labels.begin(), d.labels.end(), 1),
            std::count(d.labels.begin(), d.labels.end(), 0));
  EXPECT_EQ(d.num_features(), 4u);
  for (size_t i = 0; i < d.size(); ++i) {
    EXPECT_GE(d.features(i, 0), d.features(i, 1));
    EXPECT_NEAR(d.features(i, 0) + d.features(i, 1), 1.0, 1e-9);
  }
}

TEST_F(AttacksTest, WhiteboxFeatureLayout) {
  const size_t sizes[] = {4, 8, 2};
  const MlpModel m = *InitMlp(sizes, 3);
  ASSERT_OK_AND_ASSIGN(const std::vector<double> f,
                       ExtractWhiteboxFeatures(m, fixture_->dataset, 5));
  ASSERT_EQ(f.size(), 7u);  // 1 + 2 layers + 2 + 2 classes
  const int label = fixture_->dataset.labels[5];
  // The true-class probability is exp(-loss), the loss attack's observable.
  EXPECT_NEAR(f[3], std::exp(-f[0]), 1e-12);
  EXPECT_GE(f[4], f[3]);
  EXPECT_EQ(f[5 + label], 1.0);
  EXPECT_EQ(f[5 + (1 - label)], 0.0);
  EXPECT_EQ(f, *ExtractWhiteboxFeatures(m, fixture_->dataset, 5));
}

TEST_F(AttacksTest, WhiteboxFeaturesVanishForPerfectPrediction) {
  MlpModel m;
  m.layer_sizes = {4, 2};
  m.weights.push_back(Matrix(2, 4));
  m.biases.push_back({1000.0, -1000.0});
  const std::vector<double> record = {1, 2, 3, 4};
  ASSERT_OK_AND_ASSIGN(const std::vector<double> f,
                       WhiteboxFeatures(m, record, 0));
  EXPECT_EQ(f[0], 0.0);
  EXPECT_EQ(f[1], 0.0);
}

TEST_F(AttacksTest, WhiteboxRecordOutOfRange) {
  EXPECT_THAT(ExtractWhiteboxFeatures(*target_, fixture_->dataset, 10000),
              HasErrorKind(kInvalidArgument));
}

TEST_F(AttacksTest, WhiteboxRequiresMatchingArchitecture) {
  ShadowConfig cfg = testing::FixtureShadowConfig(0);
  cfg.shadow_model_layers = {4, 16, 2};
  EXPECT_THAT(WhiteboxAttack(*target_, fixture_->dataset, fixture_->split, cfg),
              HasErrorKind(kArchitectureMismatch));
  AttackSelection both;
  both.shadow_whitebox = true;
  EXPECT_THAT(
      RunAttacks(*target_, fixture_->dataset, fixture_->split, both, cfg),
      HasErrorKind(kArchitectureMismatch));
}

TEST_F(AttacksTest, ShadowAttacksOnOverfitTarget) {
  const OverfitFixture& f = *fixture_;
  AttackSelection all;
  all.shadow_blackbox = true;
  all.shadow_whitebox = true;
  ASSERT_OK_AND_ASSIGN(
      const auto by_name,
      RunAttacks(*target_, f.dataset, f.split, all,
                 testing::FixtureShadowConfig(0)));
  ASSERT_EQ(by_name.size(), 3u);
  for (const auto& [name, records] : by_name) {
    ExpectCoversSplit(records, f, name);
  }
  for (const AttackRecord& r : by_name.at(kShadowBlackboxAttack)) {
    EXPECT_GE(r.score, 0.0);
    EXPECT_LE(r.score, 1.0);
  }
  EXPECT_GE(*Auc(by_name.at(kShadowBlackboxAttack)), 0.6);
  EXPECT_GE(*Auc(by_name.at(kShadowWhiteboxAttack)), 0.6);

  // Running the attacks one at a time trains the same shadows.
  EXPECT_EQ(*ShadowAttack(*target_, f.dataset, f.split,
                          testing::FixtureShadowConfig(0)),
            by_name.at(kShadowBlackboxAttack));
  EXPECT_EQ(*WhiteboxAttack(*target_, f.dataset, f.split,
                            testing::FixtureShadowConfig(0)),
            by_name.at(kShadowWhiteboxAttack));
}

TEST_F(AttacksTest, UntrainedTargetLeaksNothing) {
  AttackSelection all;
  all.shadow_blackbox = true;
  all.shadow_whitebox = true;
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const OverfitFixture f = testing::MakeOverfitFixture(seed);
    ASSERT_OK_AND_ASSIGN(const auto by_name,
                         RunAttacks(f.init, f.dataset, f.split, all,
                                    testing::FixtureShadowConfig(seed)));
    for (const auto& [name, records] : by_name) {
      const double auc = *Auc(records);
      EXPECT_GE(auc, 0.35) << name << " seed " << seed;
      EXPECT_LE(auc, 0.65) << name << " seed " << seed;
    }
  }
}

// The attack classifier is fit on population records only, so perturbing one
// audited record cannot change another audited record's score.
TEST_F(AttacksTest, AttackTrainingNeverReadsAuditedRecords) {
  const OverfitFixture& f = *fixture_;
  ShadowConfig cfg = testing::FixtureShadowConfig(0);
  cfg.shadow_train_config.epochs = 20;
  const auto base = *ShadowAttack(*target_, f.dataset, f.split, cfg);
  LabeledDataset tampered = f.dataset;
  const size_t victim = f.split.member_idx[0];
  for (double& v : tampered.features.row(victim)) v += 5.0;
  tampered.labels[victim] = 1 - tampered.labels[victim];
  const auto after = *ShadowAttack(*target_, tampered, f.split, cfg);
  ASSERT_EQ(base.size(), after.size());
  for (size_t i = 0; i < base.size(); ++i) {
    if (base[i].record_id == victim) continue;
    EXPECT_EQ(base[i].score, after[i].score);
  }
}

TEST_F(AttacksTest, RunAttacksNeedsASelection) {
  AttackSelection none;
  none.population_loss = false;
  EXPECT_THAT(RunAttacks(*target_, fixture_->dataset, fixture_->split, none,
                         testing::FixtureShadowConfig(0)),
              HasErrorKind(kInvalidArgument));
}

}  // namespace
}  // namespace privaudit
