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

#ifndef PRIVAUDIT_MODEL_IO_H_
#define PRIVAUDIT_MODEL_IO_H_

#include <filesystem>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include <nlohmann/json.hpp>
#include "privaudit/mlp.h"

namespace privaudit {

// {"layer_sizes":[...], "weights":[[row-major]...], "biases":[[...]...],
//  "activation":"relu", "meta":{...}}
//
// `meta` is stored verbatim; callers put seed, training config and PRNG
// version there. Doubles are written in shortest round-trip form, so a model
// read back is bit-identical.
nlohmann::json ModelToJson(const MlpModel& model,
                           const nlohmann::json& meta = nlohmann::json::object());

absl::StatusOr<MlpModel> ModelFromJson(const nlohmann::json& json);

absl::Status SaveModel(const MlpModel& model, const nlohmann::json& meta,
                       const std::filesystem::path& path);

absl::StatusOr<MlpModel> LoadModel(const std::filesystem::path& path);

}  // namespace privaudit

#endif  // PRIVAUDIT_MODEL_IO_H_
