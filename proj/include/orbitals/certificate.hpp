#pragma once

#include "orbitals/error.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace orbitals {

enum class CertStatus { Verified, Refuted, Skipped };

std::string_view status_name(CertStatus status);

/// Outcome of one machine-checked claim. `evidence` is only complete when the
/// status is Verified; refuted certificates carry the failure instead.
struct Certificate {
    std::string claim;
    nlohmann::json parameters = nlohmann::json::object();
    CertStatus status = CertStatus::Skipped;
    nlohmann::json evidence = nlohmann::json::object();
    std::optional<double> elapsed_ms;
};

nlohmann::json to_json(const Certificate& cert);

/// A refuted certificate recording the error code and message.
Certificate refuted_certificate(std::string claim, nlohmann::json parameters, const Error& error);

}  // namespace orbitals
