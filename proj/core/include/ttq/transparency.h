// Copyright 2026 The ttq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TTQ_TRANSPARENCY_H_
#define TTQ_TRANSPARENCY_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ttq/adapter.h"
#include "ttq/rubric.h"
#include "ttq/run_log.h"
#include "ttq/runner.h"

namespace ttq {

inline constexpr std::string_view kModelDocumentation = "model-documentation";
inline constexpr std::string_view kDataDocumentation = "data-documentation";
inline constexpr std::string_view kPerformanceLimitations =
    "performance-limitations";
inline constexpr std::string_view kEthicalSocietal = "ethical-societal";
inline constexpr std::string_view kBiasMitigation = "bias-mitigation";

inline constexpr std::string_view kMinimalTraceabilityFeature =
    "minimal-traceability-standard";
inline constexpr std::string_view kFeedbackUiFeature = "feedback-ui-available";
inline constexpr std::string_view kDisclosureFeature =
    "disclosure-standards-met";

struct ManifestDocument {
  std::string doc_id;
  // As written in the manifest; used in evidence.
  std::string path;
  // `path` resolved against the manifest's directory.
  std::filesystem::path resolved;
  std::string kind;
  bool attested = false;
};

struct TransparencyManifest {
  std::vector<ManifestDocument> documents;  // ordered by doc_id
  std::map<std::string, bool> features;

  bool Feature(std::string_view id) const;
};

// {"documents": {id: {"path", "kind", "attested"}}, "features": {id: bool}}.
// Unknown document kinds are rejected. Files are not checked here.
TransparencyManifest ParseManifest(const nlohmann::json& json,
                                   const std::filesystem::path& base_dir);
TransparencyManifest LoadManifest(const std::filesystem::path& path);

// Evaluates the transparency criteria over a finished run. `manifest` may be
// null, in which case document and attestation criteria fail. `log_name` is
// the evidence pointer for log-derived criteria.
CategoryResult Audit(const std::vector<GenerationRecord>& records,
                     const RunLog& log, const TransparencyManifest* manifest,
                     const MaturityRubric& rubric,
                     std::string_view log_name = "run-log.jsonl");

}  // namespace ttq

#endif  // TTQ_TRANSPARENCY_H_
