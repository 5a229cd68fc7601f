#include "gbl/instance.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "gbl/errors.hpp"

namespace gbl {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw InstanceError(path + ": " + what);
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "expected a finite number");
    return v;
}

const json& field(const json& j, const char* key, const std::string& path) {
    const auto it = j.find(key);
    if (it == j.end()) fail(path, std::string("missing required field '") + key + "'");
    return *it;
}

Vec parse_vector(const json& j, int expect, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of numbers");
    if (expect >= 0 && static_cast<int>(j.size()) != expect) {
        fail(path, "expected " + std::to_string(expect) + " entries, got " +
                       std::to_string(j.size()));
    }
    Vec v(static_cast<int>(j.size()));
    for (int i = 0; i < v.size(); ++i) {
        v[i] = as_number(j[static_cast<size_t>(i)], path + "[" + std::to_string(i) + "]");
    }
    return v;
}

/// Array of `count` vectors of length `len`; each inner array becomes one
/// matrix column (resp. row if by_rows).
Mat parse_matrix(const json& j, int count, int len, bool by_rows, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of arrays");
    if (count >= 0 && static_cast<int>(j.size()) != count) {
        fail(path, "expected " + std::to_string(count) + " entries, got " +
                       std::to_string(j.size()));
    }
    const int outer = static_cast<int>(j.size());
    if (outer == 0) fail(path, "expected a nonempty array");
    Mat m = by_rows ? Mat(outer, len) : Mat(len, outer);
    for (int i = 0; i < outer; ++i) {
        const Vec v = parse_vector(j[static_cast<size_t>(i)], len,
                                   path + "[" + std::to_string(i) + "]");
        if (by_rows) {
            m.row(i) = v.transpose();
        } else {
            m.col(i) = v;
        }
    }
    return m;
}

double parse_exponent(const json& j, const std::string& path) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        fail(path, "expected a number >= 1 or \"inf\"");
    }
    return as_number(j, path);
}

json exponent_to_json(double p) {
    if (std::isinf(p)) return json("inf");
    return json(p);
}

json matrix_to_json(const Mat& m, bool by_rows) {
    json out = json::array();
    const int outer = static_cast<int>(by_rows ? m.rows() : m.cols());
    for (int i = 0; i < outer; ++i) {
        json inner = json::array();
        const int len = static_cast<int>(by_rows ? m.cols() : m.rows());
        for (int k = 0; k < len; ++k) inner.push_back(by_rows ? m(i, k) : m(k, i));
        out.push_back(std::move(inner));
    }
    return out;
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& path) {
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            std::string list;
            for (const char* key : allowed) {
                if (!list.empty()) list += ", ";
                list += key;
            }
            fail(path.empty() ? item.key() : path + "." + item.key(),
                 "unknown field (expected one of: " + list + ")");
        }
    }
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

NormSpec norm_spec_from_json(const json& j, int dim, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    const json& type = field(j, "type", path);
    if (!type.is_string()) fail(path + ".type", "expected a string");
    const std::string t = type.get<std::string>();

    if (t == "lp") {
        reject_unknown_keys(j, {"type", "p"}, path);
        return lp_norm(parse_exponent(field(j, "p", path), path + ".p"));
    }
    if (t == "weighted_lp") {
        reject_unknown_keys(j, {"type", "p", "weights"}, path);
        const double p = parse_exponent(field(j, "p", path), path + ".p");
        Vec w = parse_vector(field(j, "weights", path), dim, path + ".weights");
        return weighted_lp_norm(p, std::move(w));
    }
    if (t == "quadratic") {
        reject_unknown_keys(j, {"type", "gram"}, path);
        Mat g = parse_matrix(field(j, "gram", path), dim, dim, true, path + ".gram");
        return quadratic_norm(std::move(g));
    }
    if (t == "polyhedral") {
        reject_unknown_keys(j, {"type", "rows"}, path);
        Mat rows = parse_matrix(field(j, "rows", path), -1, dim, true, path + ".rows");
        return polyhedral_norm(std::move(rows));
    }
    if (t == "suppression_renorm") {
        reject_unknown_keys(j, {"type", "base", "columns"}, path);
        NormSpec base = norm_spec_from_json(field(j, "base", path), dim, path + ".base");
        Mat cols = parse_matrix(field(j, "columns", path), dim, dim, false, path + ".columns");
        NormSpec spec;
        spec.v = SuppressionRenorm{std::make_shared<const NormSpec>(std::move(base)),
                                   std::move(cols)};
        return spec;
    }
    fail(path + ".type", "unknown norm type '" + t +
                             "' (expected lp, weighted_lp, quadratic, polyhedral or "
                             "suppression_renorm)");
}

json norm_spec_to_json(const NormSpec& spec) {
    json j;
    if (spec.is<LpNorm>()) {
        j["type"] = "lp";
        j["p"] = exponent_to_json(spec.as<LpNorm>().p);
    } else if (spec.is<WeightedLpNorm>()) {
        const auto& w = spec.as<WeightedLpNorm>();
        j["type"] = "weighted_lp";
        j["p"] = exponent_to_json(w.p);
        json weights = json::array();
        for (int i = 0; i < w.weights.size(); ++i) weights.push_back(w.weights[i]);
        j["weights"] = std::move(weights);
    } else if (spec.is<QuadraticNorm>()) {
        j["type"] = "quadratic";
        j["gram"] = matrix_to_json(spec.as<QuadraticNorm>().gram, true);
    } else if (spec.is<PolyhedralNorm>()) {
        j["type"] = "polyhedral";
        j["rows"] = matrix_to_json(spec.as<PolyhedralNorm>().rows, true);
    } else {
        const auto& d = spec.as<SuppressionRenorm>();
        j["type"] = "suppression_renorm";
        j["base"] = norm_spec_to_json(*d.base);
        j["columns"] = matrix_to_json(d.columns, false);
    }
    return j;
}

Instance make_instance(NormedSpace space, Basis basis, AnalysisOverrides overrides) {
    if (space.dim() != basis.dim()) {
        throw InstanceError("instance: space and basis dimensions differ");
    }
    std::vector<double> norms = element_norms(space, basis);
    return Instance{std::move(space), std::move(basis), std::move(norms),
                    std::move(overrides)};
}

Instance parse_instance_json(const json& j) {
    if (!j.is_object()) fail("instance", "expected a JSON object");
    reject_unknown_keys(j, {"schema", "name", "dim", "norm", "basis", "budget", "seed", "tol"},
                        "");

    if (const auto it = j.find("schema"); it != j.end()) {
        if (!it->is_string() || it->get<std::string>() != "gbl/1") {
            fail("schema", "unsupported schema (expected \"gbl/1\")");
        }
    }

    const json& jd = field(j, "dim", "instance");
    if (!jd.is_number_integer() || jd.get<std::int64_t>() < 1) {
        fail("dim", "expected a positive integer");
    }
    const int dim = static_cast<int>(jd.get<std::int64_t>());

    NormSpec spec = norm_spec_from_json(field(j, "norm", "instance"), dim, "norm");

    Basis basis = Basis::canonical(dim);
    if (const auto it = j.find("basis"); it != j.end()) {
        if (!it->is_object()) fail("basis", "expected an object");
        reject_unknown_keys(*it, {"columns"}, "basis");
        Mat cols = parse_matrix(field(*it, "columns", "basis"), dim, dim, false,
                                "basis.columns");
        try {
            basis = Basis::make(cols);
        } catch (const InstanceError& e) {
            fail("basis.columns", e.what());
        }
    }

    AnalysisOverrides ov;
    if (const auto it = j.find("budget"); it != j.end()) {
        if (!it->is_number_integer() || it->get<std::int64_t>() < 1 ||
            it->get<std::int64_t>() > std::numeric_limits<int>::max()) {
            fail("budget", "expected a positive integer restart budget");
        }
        ov.budget = static_cast<int>(it->get<std::int64_t>());
    }
    if (const auto it = j.find("seed"); it != j.end()) {
        if (it->is_number_unsigned()) {
            ov.seed = it->get<std::uint64_t>();
        } else if (it->is_number_integer() && it->get<std::int64_t>() >= 0) {
            ov.seed = static_cast<std::uint64_t>(it->get<std::int64_t>());
        } else {
            fail("seed", "expected a nonnegative integer");
        }
    }
    if (const auto it = j.find("tol"); it != j.end()) {
        ov.tol = as_number(*it, "tol");
    }

    NormedSpace space = [&] {
        try {
            return NormedSpace(dim, std::move(spec));
        } catch (const InstanceError& e) {
            fail("norm", e.what());
        }
    }();
    return make_instance(std::move(space), std::move(basis), std::move(ov));
}

Instance parse_instance_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InstanceError(std::string("JSON parse error: ") + e.what());
    }
    return parse_instance_json(j);
}

Instance load_instance_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InstanceError("cannot read instance file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance_text(buf.str());
}

json instance_to_json(const Instance& inst) {
    json j;
    j["schema"] = "gbl/1";
    j["dim"] = inst.space.dim();
    j["norm"] = norm_spec_to_json(inst.space.spec());
    if (!inst.basis.is_canonical()) {
        j["basis"] = json{{"columns", matrix_to_json(inst.basis.vectors(), false)}};
    }
    if (inst.overrides.budget) j["budget"] = *inst.overrides.budget;
    if (inst.overrides.seed) j["seed"] = *inst.overrides.seed;
    if (inst.overrides.tol) j["tol"] = *inst.overrides.tol;
    return j;
}

std::string instance_digest(const Instance& inst) {
    json j = instance_to_json(inst);
    j.erase("budget");
    j.erase("seed");
    j.erase("tol");
    const std::string bytes = j.dump();
    const std::uint64_t h = fnv1a64(bytes);
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string("fnv1a64:") + buf;
}

}  // namespace gbl
