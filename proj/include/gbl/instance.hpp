#pragma once

#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "gbl/basis.hpp"
#include "gbl/space.hpp"

namespace gbl {

/// Per-file analysis overrides; absent fields fall back to CLI flags or
/// defaults.
struct AnalysisOverrides {
    std::optional<int> budget;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
};

/// A parsed problem instance: the normed space, the basis with its dual
/// system, and the cached basis-element norms.
struct Instance {
    NormedSpace space;
    Basis basis;
    std::vector<double> norms_of_elements;
    AnalysisOverrides overrides;
};

/// Builds an instance from space + basis, validating semi-normalization.
Instance make_instance(NormedSpace space, Basis basis, AnalysisOverrides overrides = {});

/// Parse / serialize the instance JSON schema ("schema": "gbl/1"):
///   { "dim": n, "norm": {"type": ...}, "basis": {"columns": [[...]]} }
/// Basis omitted means the canonical basis. Errors carry the offending
/// field path in the message.
Instance parse_instance_json(const nlohmann::json& j);
Instance parse_instance_text(const std::string& text);
Instance load_instance_file(const std::string& path);

nlohmann::json norm_spec_to_json(const NormSpec& spec);
NormSpec norm_spec_from_json(const nlohmann::json& j, int dim, const std::string& path);

/// Canonical form: sorted keys, shortest round-trip numbers, canonical basis
/// omitted. Two semantically equal instances serialize identically.
nlohmann::json instance_to_json(const Instance& inst);

/// "fnv1a64:<16 hex digits>" over the canonical serialization of dim, norm
/// and basis (analysis overrides excluded).
std::string instance_digest(const Instance& inst);

}  // namespace gbl
