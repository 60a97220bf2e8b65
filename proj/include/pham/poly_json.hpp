#pragma once

// Polynomial literal: {"vars": n, "terms": [{"exp": [..], "re": x, "im": y}, ...]}.
// "im" may be omitted.

#include <json.hpp>

#include "pham/polyalg.hpp"

namespace pham {

SparsePoly poly_from_json(const nlohmann::json& j);
nlohmann::json poly_to_json(const SparsePoly& p);

}  // namespace pham
