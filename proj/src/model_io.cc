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

#include "privaudit/model_io.h"

#include "privaudit/errors.h"
#include "privaudit/file_util.h"

namespace privaudit {

using nlohmann::json;

json ModelToJson(const MlpModel& model, const json& meta) {
  json weights = json::array();
  json biases = json::array();
  for (size_t k = 0; k < model.num_layers(); ++k) {
    const std::span<const double> w = model.weights[k].values();
    weights.push_back(std::vector<double>(w.begin(), w.end()));
    biases.push_back(model.biases[k]);
  }
  return json{{"layer_sizes", model.layer_sizes},
              {"weights", std::move(weights)},
              {"biases", std::move(biases)},
              {"activation", model.activation},
              {"meta", meta}};
}

absl::StatusOr<MlpModel> ModelFromJson(const json& j) {
  MlpModel model;
  try {
    model.layer_sizes = j.at("layer_sizes").get<std::vector<size_t>>();
    model.activation = j.value("activation", std::string("relu"));
    const json& weights = j.at("weights");
    const json& biases = j.at("biases");
    if (model.layer_sizes.size() < 2 ||
        weights.size() + 1 != model.layer_sizes.size() ||
        biases.size() != weights.size()) {
      return SchemaError("model layer count does not match parameters");
    }
    for (size_t k = 0; k < weights.size(); ++k) {
      const auto flat = weights[k].get<std::vector<double>>();
      Matrix w(model.layer_sizes[k + 1], model.layer_sizes[k]);
      if (flat.size() != w.size()) {
        return SchemaError("weight block ", k, " has ", flat.size(),
                           " values, expected ", w.size());
      }
      std::copy(flat.begin(), flat.end(), w.values().begin());
      model.weights.push_back(std::move(w));
      model.biases.push_back(biases[k].get<std::vector<double>>());
    }
  } catch (const json::exception& e) {
    return SchemaError("malformed model json: ", e.what());
  }
  if (model.activation != "relu") {
    return SchemaError("unsupported activation '", model.activation, "'");
  }
  PRIVAUDIT_RETURN_IF_ERROR(ValidateModel(model));
  return model;
}

absl::Status SaveModel(const MlpModel& model, const json& meta,
                       const std::filesystem::path& path) {
  return WriteFileAtomically(path, ModelToJson(model, meta).dump(1) + "\n");
}

absl::StatusOr<MlpModel> LoadModel(const std::filesystem::path& path) {
  PRIVAUDIT_ASSIGN_OR_RETURN(const std::string text, ReadFile(path));
  const json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return ParseError(path.string(), ": invalid json");
  return ModelFromJson(j);
}

}  // namespace privaudit
