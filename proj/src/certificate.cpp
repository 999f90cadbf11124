#include "orbitals/certificate.hpp"

namespace orbitals {

std::string_view status_name(CertStatus status)
{
    switch (status) {
    case CertStatus::Verified:
        return "verified";
    case CertStatus::Refuted:
        return "refuted";
    case CertStatus::Skipped:
        return "skipped";
    }
    return "unknown";
}

nlohmann::json to_json(const Certificate& cert)
{
    nlohmann::json out;
    out["claim"] = cert.claim;
    out["parameters"] = cert.parameters;
    out["status"] = std::string(status_name(cert.status));
    out["evidence"] = cert.evidence;
    out["elapsed_ms"] = cert.elapsed_ms ? nlohmann::json(*cert.elapsed_ms) : nlohmann::json(nullptr);
    return out;
}

Certificate refuted_certificate(std::string claim, nlohmann::json parameters, const Error& error)
{
    Certificate cert;
    cert.claim = std::move(claim);
    cert.parameters = std::move(parameters);
    cert.status = CertStatus::Refuted;
    cert.evidence = {{"error", std::string(error_code_name(error.code()))}, {"message", error.what()}};
    return cert;
}

}  // namespace orbitals
