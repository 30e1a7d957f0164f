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

#include "privaudit/errors.h"

namespace privaudit {

absl::string_view ErrorKind(const absl::Status& status) {
  static constexpr absl::string_view kKinds[] = {
      kInvalidArgument,   kShapeMismatch,          kInvalidLabel,
      kIoError,           kParseError,             kSchemaError,
      kEmptySubset,       kDegenerateInput,        kInsufficientPopulation,
      kArchitectureMismatch, kInconsistentInputs};
  const absl::string_view message = status.message();
  for (absl::string_view kind : kKinds) {
    if (message.size() > kind.size() && message.substr(0, kind.size()) == kind &&
        message[kind.size()] == ':') {
      return kind;
    }
  }
  return "internal";
}

}  // namespace privaudit
