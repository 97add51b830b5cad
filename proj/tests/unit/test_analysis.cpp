#include "hhj/analysis.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace hhj;

namespace {

EocTable synthetic(const std::array<double, 4>& p, int levels)
{
    EocTable t;
    t.m = 2;
    t.r = 1;
    for (int l = 0; l < levels; ++l) {
        LevelResult r;
        r.level = l;
        r.n_cells = 6 << (2 * l);
        r.h = std::pow(0.5, l);
        r.errors = {3.0 * std::pow(r.h, p[0]), 2.0 * std::pow(r.h, p[1]), std::pow(r.h, p[2]), 0.5 * std::pow(r.h, p[3])};
        t.levels.push_back(r);
    }
    return t;
}

}  // namespace

TEST(Analysis, EocOfPowerLaw)
{
    EXPECT_DOUBLE_EQ(eoc(1.0, 0.25), 2.0);
    EXPECT_TRUE(std::isnan(eoc(0.0, 1.0)));
    const auto s = eoc_series({1.0, 0.5, 0.125});
    ASSERT_EQ(s.size(), 3u);
    EXPECT_TRUE(std::isnan(s[0]));
    EXPECT_DOUBLE_EQ(s[1], 1.0);
    EXPECT_DOUBLE_EQ(s[2], 2.0);
}

TEST(Analysis, TableOrders)
{
    const auto t = synthetic({2.0, 1.0, 2.0, 1.5}, 4);
    const auto f = t.final_orders();
    EXPECT_NEAR(f[0], 2.0, 1e-12);
    EXPECT_NEAR(f[1], 1.0, 1e-12);
    EXPECT_NEAR(f[2], 2.0, 1e-12);
    EXPECT_NEAR(f[3], 1.5, 1e-12);
    const auto o = t.orders();
    EXPECT_TRUE(std::isnan(o[0][0]));
    EXPECT_NEAR(o[3][2], 1.5, 1e-12);
}

TEST(Analysis, CsvLayout)
{
    const auto t = synthetic({2.0, 1.0, 2.0, 2.0}, 3);
    const std::string csv = to_csv(t, {{"domain", "disk"}, {"library", "plate_hhj x"}});
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "# domain: disk");
    std::getline(in, line);
    EXPECT_EQ(line, "# library: plate_hhj x");
    std::getline(in, line);
    EXPECT_EQ(line, "level,N_T,h,eH1,eH2h,eSigma,eNN,eocH1,eocH2h,eocSigma,eocNN");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 10);
    }
    EXPECT_EQ(rows, 3);
    EXPECT_EQ(to_csv(t, {}), to_csv(t, {}));
}

TEST(Analysis, MarkdownSummaryRow)
{
    const auto t = synthetic({1.0, 0.0, 1.0, 1.0}, 3);
    const std::string md = to_markdown(t, {{"bc", "clamped"}}, "Clamped disk");
    EXPECT_NE(md.find("## Clamped disk"), std::string::npos);
    EXPECT_NE(md.find("| 96 | 2 | 1 | 1.0000 | 0.0000 | 1.0000 | 1.0000 |"), std::string::npos);
    const std::string sum = summary_markdown({t, t}, "Two", {});
    EXPECT_EQ(std::count(sum.begin(), sum.end(), '\n') >= 4, true);
}
