#pragma once

#include "wg/mesh.hpp"

#include <functional>

namespace wg {

using ScalarField = std::function<double(double, double)>;
using VectorField = std::function<Vec2(double, double)>;

} // namespace wg
