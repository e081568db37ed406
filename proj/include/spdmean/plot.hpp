#pragma once

// Minimal static SVG charts: a row of panels, each with line or marker
// series. Output is deterministic text so plots can be diffed like the CSVs.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace spdmean::plot {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool lines = true;
    bool markers = false;
};

struct Panel {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    std::vector<Series> series;
};

void write_svg(std::ostream& os, const std::vector<Panel>& panels);
/// Throws IoError when the file cannot be written.
void save_svg(const std::filesystem::path& path, const std::vector<Panel>& panels);

}  // namespace spdmean::plot
