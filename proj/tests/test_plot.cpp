#include <gtest/gtest.h>

#include <sstream>

#include "spdmean/plot.hpp"

namespace spdmean::plot {
namespace {

std::string render(const std::vector<Panel>& panels) {
    std::ostringstream os;
    write_svg(os, panels);
    return os.str();
}

TEST(Svg, DeterministicWithOneGroupPerPanel) {
    Panel a{"a", "x", "y", false, false, {{"s1", {0, 1, 2}, {3, 1, 2}, true, false}}};
    Panel b{"b", "x", "y", true, true, {{"s2", {1, 10, 100}, {1e-3, 1e-2, 1}, true, true}}};
    const std::string svg = render({a, b});
    EXPECT_EQ(svg, render({a, b}));
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("width=\"720.00\""), std::string::npos);
    EXPECT_EQ(svg.find("nan"), std::string::npos);
    EXPECT_NE(svg.find("<polyline"), std::string::npos);
    EXPECT_NE(svg.find("<circle"), std::string::npos);
}

TEST(Svg, EscapesLabelsAndSkipsNonPositiveOnLogAxes) {
    Panel p{"a<b & c", "x", "y", false, true, {{"s", {1, 2, 3}, {0.0, -1.0, 5.0}, false, true}}};
    const std::string svg = render({p});
    EXPECT_NE(svg.find("a&lt;b &amp; c"), std::string::npos);
    std::size_t circles = 0;
    for (std::size_t pos = svg.find("<circle"); pos != std::string::npos; pos = svg.find("<circle", pos + 1))
        ++circles;
    EXPECT_EQ(circles, 1u);
}

TEST(Svg, EmptyPanelStillValid) {
    const std::string svg = render({Panel{"empty", "x", "y", false, false, {}}});
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    EXPECT_EQ(svg.find("nan"), std::string::npos);
}

}  // namespace
}  // namespace spdmean::plot
