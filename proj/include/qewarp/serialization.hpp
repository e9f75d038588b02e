#pragma once

/// @file serialization.hpp
/// JSON documents for specs and reports, CSV table writers, and atomic file
/// output. Field names here are the external contract of the CLI.

#include <string>

#include <json.hpp>

#include "qewarp/families.hpp"
#include "qewarp/geometry.hpp"
#include "qewarp/ode.hpp"
#include "qewarp/verifier.hpp"

namespace qewarp {

// A parsed spec document: the assembled WarpedSpec plus everything needed to
// reproduce it (normalized family parameters) and the constants derived
// during construction (sidecar content).
struct SpecDocument {
  WarpedSpec spec;
  std::string family_tag;
  nlohmann::ordered_json family;   // normalized family parameters
  nlohmann::ordered_json derived;  // resolved constants: a, b, N, C, lambda...
  std::optional<ImplicitFamily> implicit;  // integration table when applicable
};

SpecDocument load_spec(const nlohmann::ordered_json& doc);
SpecDocument load_spec_file(const std::string& path);
nlohmann::ordered_json save_spec(const SpecDocument& doc);

nlohmann::ordered_json report_to_json(const ResidualReport& rep);
ResidualReport report_from_json(const nlohmann::ordered_json& j);
std::string report_to_text(const ResidualReport& rep);

nlohmann::ordered_json certificate_to_json(const AssemblyCertificate& cert);

// CSV bodies (deterministic %.17g formatting).
std::string profile_table_csv(const WarpedSpec& spec,
                              std::span<const double> xis);
std::string integration_table_csv(const ImplicitFamily& fam);
std::string mu_trace_csv(const MuTrace& mu);

// Writes content to path via a temporary file and rename.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace qewarp
