#pragma once

#include <string>
#include <vector>

namespace shearlab {

// Writes matplotlib scripts next to the data of a run directory (decay and
// budget plots) or a sweep directory (one boundary plot per profile). Returns
// the written paths. Throws ValidationError on missing files or columns.
std::vector<std::string> emit_plots(const std::string& dir);

}  // namespace shearlab
