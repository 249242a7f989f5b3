#pragma once

#include <string>

#include "json.hpp"
#include "pullgraph/pushout.hpp"
#include "pullgraph/resolution.hpp"

namespace pullgraph {

inline constexpr const char* kCertificateSchema = "pullgraph.certificate";
inline constexpr int kCertificateVersion = 1;

class CertificateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

nlohmann::json functor_to_json(const GraphFunctor& f);

nlohmann::json pullback_to_json(const PullbackCertificate& cert);

// Re-runs the verification recorded in a pullback certificate document,
// from its input graph, subset and bounds.
PullbackCertificate reverify_pullback(const nlohmann::json& doc);

// Whether a fresh certificate reproduces the recorded checks, flags, verdict
// and constructed graphs.
bool same_outcomes(const nlohmann::json& recorded, const PullbackCertificate& fresh);

nlohmann::json extension_to_json(const PullbackCertificate& base, const ExtensionCertificate& ext);

// Resolution output without the verification: E1, F1 and the functor.
nlohmann::json resolution_to_json(const Resolution& r);

}  // namespace pullgraph
