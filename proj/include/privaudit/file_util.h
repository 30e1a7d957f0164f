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

#ifndef PRIVAUDIT_FILE_UTIL_H_
#define PRIVAUDIT_FILE_UTIL_H_

#include <filesystem>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace privaudit {

// Writes to a sibling temporary file and renames it over `path`, so readers
// never observe a partially written file.
absl::Status WriteFileAtomically(const std::filesystem::path& path,
                                 std::string_view contents);

absl::StatusOr<std::string> ReadFile(const std::filesystem::path& path);

}  // namespace privaudit

#endif  // PRIVAUDIT_FILE_UTIL_H_
