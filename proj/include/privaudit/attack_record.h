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

#ifndef PRIVAUDIT_ATTACK_RECORD_H_
#define PRIVAUDIT_ATTACK_RECORD_H_

#include <cstddef>
#include <string>

namespace privaudit {

inline constexpr char kPopulationLossAttack[] = "population_loss";
inline constexpr char kShadowBlackboxAttack[] = "shadow_blackbox";
inline constexpr char kShadowWhiteboxAttack[] = "shadow_whitebox";

// One audited record as seen by one attack. Higher scores mean the attacker
// believes more strongly that the record was in the training set.
struct AttackRecord {
  size_t record_id = 0;
  bool is_member = false;
  double score = 0.0;
  int class_label = 0;
  std::string attack_name;

  bool operator==(const AttackRecord&) const = default;
};

}  // namespace privaudit

#endif  // PRIVAUDIT_ATTACK_RECORD_H_
