#pragma once

#include <span>

namespace spiral {

// 100 * ||estimate - truth||_2 / ||truth||_2
double rmse_percent(std::span<const double> estimate, std::span<const double> truth);

}  // namespace spiral
