#pragma once

#include "striplab/approximation.hpp"
#include "striplab/error.hpp"
#include "striplab/geometry.hpp"
#include "striplab/io.hpp"
#include "striplab/polynomial.hpp"
#include "striplab/repair.hpp"
#include "striplab/scan.hpp"
#include "striplab/target.hpp"
#include "striplab/zeta.hpp"

namespace striplab {

inline constexpr const char* version = "0.3.0";

}  // namespace striplab
