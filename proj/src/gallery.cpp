#include "gbl/gallery.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <optional>

#include "gbl/errors.hpp"
#include "gbl/rng.hpp"

namespace gbl {

namespace {

std::optional<int> parse_positive_int(const std::string& s) {
    if (s.empty()) return std::nullopt;
    int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || v < 1) return std::nullopt;
    return v;
}

std::optional<std::uint64_t> parse_seed(const std::string& s) {
    if (s.empty()) return std::nullopt;
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<double> parse_exponent(const std::string& s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
    if (!(v >= 1.0)) return std::nullopt;
    return v;
}

std::optional<Instance> build(const std::string& name) {
    if (name == "shear-2") {
        Mat g(2, 2);
        g << 1.0, 0.5, 0.5, 1.25;
        return make_instance(NormedSpace(2, quadratic_norm(std::move(g))),
                             Basis::canonical(2));
    }

    if (const auto pos = name.find("-canonical-");
        pos != std::string::npos && pos > 1 && name[0] == 'l') {
        const auto p = parse_exponent(name.substr(1, pos - 1));
        const auto n = parse_positive_int(name.substr(pos + 11));
        if (!p || !n) return std::nullopt;
        return make_instance(NormedSpace(*n, lp_norm(*p)), Basis::canonical(*n));
    }

    if (name.rfind("summing-", 0) == 0) {
        const auto n = parse_positive_int(name.substr(8));
        if (!n) return std::nullopt;
        Mat rows = Mat::Zero(*n, *n);
        for (int k = 0; k < *n; ++k) {
            for (int i = 0; i <= k; ++i) rows(k, i) = 1.0;  // f_k = (1,..,1,0,..,0)
        }
        return make_instance(NormedSpace(*n, polyhedral_norm(std::move(rows))),
                             Basis::canonical(*n));
    }

    if (name.rfind("random-quadratic-", 0) == 0) {
        const std::string rest = name.substr(17);
        const auto dash = rest.find('-');
        if (dash == std::string::npos) return std::nullopt;
        const auto n = parse_positive_int(rest.substr(0, dash));
        const auto seed = parse_seed(rest.substr(dash + 1));
        if (!n || !seed) return std::nullopt;
        Rng rng(Rng::derive(*seed, 1000003ull * static_cast<std::uint64_t>(*n)));
        Mat a(*n, *n);
        for (int i = 0; i < *n; ++i) {
            for (int j = 0; j < *n; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
        }
        Mat g = a.transpose() * a + 0.5 * Mat::Identity(*n, *n);
        return make_instance(NormedSpace(*n, quadratic_norm(std::move(g))),
                             Basis::canonical(*n));
    }

    return std::nullopt;
}

}  // namespace

const std::vector<GalleryFamily>& gallery_families() {
    static const std::vector<GalleryFamily> families = {
        {"l<p>-canonical-<n>", "lp norm with the canonical basis (p >= 1, or \"inf\")",
         "l2-canonical-4"},
        {"shear-2", "quadratic norm with Gram matrix [[1,1/2],[1/2,5/4]]", "shear-2"},
        {"summing-<n>", "polyhedral norm of the partial-sum functionals (1,..,1,0,..,0)",
         "summing-2"},
        {"random-quadratic-<n>-<s>", "quadratic norm with Gram A'A + I/2, A ~ U(-1,1)^(n x n) "
         "drawn from seed s", "random-quadratic-3-7"},
    };
    return families;
}

bool is_gallery_name(const std::string& name) { return build(name).has_value(); }

Instance gallery_instance(const std::string& name) {
    if (auto inst = build(name)) return std::move(*inst);
    std::string msg = "unknown gallery instance '" + name + "'; valid families:";
    for (const auto& f : gallery_families()) msg += " " + f.pattern;
    throw InstanceError(msg);
}

}  // namespace gbl
