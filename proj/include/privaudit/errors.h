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

#ifndef PRIVAUDIT_ERRORS_H_
#define PRIVAUDIT_ERRORS_H_

#include "absl/strings/string_view.h"

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

// Every error the toolkit reports is an absl::Status whose message starts with
// a stable kind tag ("shape-mismatch: ..."), so callers and the CLI can
// classify failures without parsing free text.
namespace privaudit {

inline constexpr char kInvalidArgument[] = "invalid-argument";
inline constexpr char kShapeMismatch[] = "shape-mismatch";
inline constexpr char kInvalidLabel[] = "invalid-label";
inline constexpr char kIoError[] = "io-error";
inline constexpr char kParseError[] = "parse-error";
inline constexpr char kSchemaError[] = "schema-error";
inline constexpr char kEmptySubset[] = "empty-subset";
inline constexpr char kDegenerateInput[] = "degenerate-input";
inline constexpr char kInsufficientPopulation[] =
    "insufficient-population";
inline constexpr char kArchitectureMismatch[] =
    "architecture-mismatch";
inline constexpr char kInconsistentInputs[] = "inconsistent-inputs";

template <typename... Args>
absl::Status InvalidArgument(const Args&... args) {
  return absl::InvalidArgumentError(absl::StrCat(kInvalidArgument, ": ", args...));
}

template <typename... Args>
absl::Status ShapeMismatch(const Args&... args) {
  return absl::InvalidArgumentError(absl::StrCat(kShapeMismatch, ": ", args...));
}

template <typename... Args>
absl::Status InvalidLabel(const Args&... args) {
  return absl::OutOfRangeError(absl::StrCat(kInvalidLabel, ": ", args...));
}

template <typename... Args>
absl::Status IoError(const Args&... args) {
  return absl::UnavailableError(absl::StrCat(kIoError, ": ", args...));
}

template <typename... Args>
absl::Status ParseError(const Args&... args) {
  return absl::DataLossError(absl::StrCat(kParseError, ": ", args...));
}

template <typename... Args>
absl::Status SchemaError(const Args&... args) {
  return absl::FailedPreconditionError(
      absl::StrCat(kSchemaError, ": ", args...));
}

template <typename... Args>
absl::Status EmptySubset(const Args&... args) {
  return absl::FailedPreconditionError(
      absl::StrCat(kEmptySubset, ": ", args...));
}

template <typename... Args>
absl::Status DegenerateInput(const Args&... args) {
  return absl::FailedPreconditionError(
      absl::StrCat(kDegenerateInput, ": ", args...));
}

template <typename... Args>
absl::Status InsufficientPopulation(const Args&... args) {
  return absl::FailedPreconditionError(
      absl::StrCat(kInsufficientPopulation, ": ", args...));
}

template <typename... Args>
absl::Status ArchitectureMismatch(const Args&... args) {
  return absl::FailedPreconditionError(
      absl::StrCat(kArchitectureMismatch, ": ", args...));
}

template <typename... Args>
absl::Status InconsistentInputs(const Args&... args) {
  return absl::FailedPreconditionError(
      absl::StrCat(kInconsistentInputs, ": ", args...));
}

// Returns the kind tag of a non-OK status produced by the helpers above, or
// "internal" for anything else.
absl::string_view ErrorKind(const absl::Status& status);

}  // namespace privaudit

#define PRIVAUDIT_RETURN_IF_ERROR(expr)       \
  do {                                        \
    if (absl::Status _st = (expr); !_st.ok()) \
      return _st;                             \
  } while (0)

#define PRIVAUDIT_CONCAT_INNER_(a, b) a##b
#define PRIVAUDIT_CONCAT_(a, b) PRIVAUDIT_CONCAT_INNER_(a, b)
#define PRIVAUDIT_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, expr) \
  auto tmp = (expr);                                     \
  if (!tmp.ok()) return tmp.status();                    \
  lhs = std::move(*tmp)
#define PRIVAUDIT_ASSIGN_OR_RETURN(lhs, expr) \
  PRIVAUDIT_ASSIGN_OR_RETURN_IMPL_(           \
      PRIVAUDIT_CONCAT_(_statusor_, __LINE__), lhs, expr)

#endif  // PRIVAUDIT_ERRORS_H_
