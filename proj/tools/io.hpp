#pragma once

#include <string>

#include <json.hpp>

#include "funmean/grid_fn.hpp"
#include "funmean/matrix.hpp"
#include "funmean/quadratic.hpp"
#include "funmean/verify.hpp"

namespace funmean::io {

/// {"lo": .., "hi": .., "values": [..]} with +inf written as "inf".
nlohmann::json to_json(const GridFn& f);
GridFn grid_fn_from_json(const nlohmann::json& j);

/// {"d": d, "entries": [row-major d*d]}.
nlohmann::json to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TrialReport& r);

/// Reads a GridFn from .json, or from .csv rows "x,value" through convexify
/// on the box spanned by the abscissae (n = number of rows).
GridFn load_grid_fn(const std::string& path);
SpdMatrix load_spd(const std::string& path);

nlohmann::json read_json(const std::string& path);
/// Writes to `path`, or to stdout when path is empty or "-".
void write_json(const std::string& path, const nlohmann::json& j);

}  // namespace funmean::io
