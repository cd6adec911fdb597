#pragma once

#include <vector>

#include "funmean/verify.hpp"

namespace funmean::suites {

std::vector<SuiteInfo> duality();
std::vector<SuiteInfo> quadrature();
std::vector<SuiteInfo> functional();
std::vector<SuiteInfo> operators();
std::vector<SuiteInfo> bridge();

/// Values of y at the nodes of x, for operands whose grids agree up to
/// rounding of the box.
GridFn on_nodes_of(const GridFn& x, const GridFn& y);

}  // namespace funmean::suites
