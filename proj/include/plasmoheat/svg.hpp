#pragma once

#include <string>
#include <vector>

#include "plasmoheat/geometry.hpp"
#include "plasmoheat/types.hpp"

namespace plasmoheat {

struct Series {
  std::string label;
  std::vector<double> x, y;
};

// Static line chart; log10 axes optional (nonpositive values are skipped).
void write_line_chart(const std::string& path, const std::string& title,
                      const std::vector<Series>& series, bool logx = false,
                      bool logy = false);

// Per-triangle filled heatmap with a vertical colorbar.
void write_tri_heatmap(const std::string& path, const std::string& title,
                       const InteriorMesh& mesh, const Vector& values);

// Index-vs-value stems (spectra).
void write_stem_chart(const std::string& path, const std::string& title,
                      const std::vector<double>& values);

}  // namespace plasmoheat
