#pragma once

#include <filesystem>

#include "explab/geometry.hpp"

namespace explab {

/// Curve exchange format: CSV with header `x,y` plus a JSON sidecar
/// {closed, p0, mu} stored next to it with the extension replaced by .json.
/// Extra sidecar entries (e.g. a flow time) are preserved on load-ignore.
void save_curve(const PolylineCurve& curve, const std::filesystem::path& csv,
                double time = 0.0, bool with_time = false);

PolylineCurve load_curve(const std::filesystem::path& csv);

std::filesystem::path sidecar_path(const std::filesystem::path& csv);

}  // namespace explab
