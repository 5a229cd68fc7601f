#pragma once

#include <string>
#include <vector>

#include "gbl/instance.hpp"

namespace gbl {

/// Builtin instance families:
///   l<p>-canonical-<n>        lp norm, canonical basis (p numeric or "inf")
///   shear-2                   quadratic norm with gram [[1, 1/2], [1/2, 5/4]]
///   summing-<n>               polyhedral partial-sum functionals (1..1, 0..0)
///   random-quadratic-<n>-<s>  gram A'A + I/2 with A ~ U(-1,1) seeded by s
struct GalleryFamily {
    std::string pattern;
    std::string description;
    std::string example;
};

const std::vector<GalleryFamily>& gallery_families();

bool is_gallery_name(const std::string& name);

/// Materializes a builtin instance. Throws InstanceError for unknown names;
/// the message lists the valid families.
Instance gallery_instance(const std::string& name);

}  // namespace gbl
