#include <gtest/gtest.h>

#include <sstream>

#include "wcluster/error.hpp"
#include "wcluster/ingest.hpp"

namespace wcluster {
namespace {

using std::chrono::day;
using std::chrono::month;
using std::chrono::year;

PanelData parse(const std::string& text, bool strict = false) {
    std::istringstream in(text);
    PanelLoadOptions opts;
    opts.strict = strict;
    return parse_panel(in, opts, "test.csv");
}

std::vector<PeriodSpec> periods(const std::string& text) {
    std::istringstream in(text);
    return parse_periods(in);
}

std::vector<PanelRecord> rows(std::initializer_list<std::vector<double>> values) {
    std::vector<PanelRecord> out;
    std::size_t line = 2;
    for (const auto& v : values) {
        out.push_back({"X", Date{year{2020}, month{1}, day{1}}, Eigen::Map<const Vector>(v.data(), v.size()), line++});
    }
    return out;
}

Errc code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return Errc::Io;
}

TEST(ParseDate, StrictIso) {
    EXPECT_EQ(parse_date("2019-02-28"), (Date{year{2019}, month{2}, day{28}}));
    EXPECT_EQ(format_date(parse_date("2001-04-09")), "2001-04-09");
    for (const char* bad : {"2019-02-29", "2019-2-28", "20190228", "2019-13-01", "", "2019-02-28x"})
        EXPECT_EQ(code_of([&] { (void)parse_date(bad); }), Errc::ParseError) << bad;
}

TEST(LoadPanel, EmptyDataSection) {
    const PanelData p = parse("entity,date,y1,y2\n");
    EXPECT_TRUE(p.records.empty());
    EXPECT_EQ(p.variables, (std::vector<std::string>{"y1", "y2"}));
}

TEST(LoadPanel, SortsByDate) {
    const PanelData p = parse("entity,date,a,b\nX,2020-03-01,1,2\nX,2020-01-01,3,4\nY,2020-02-01,5,6\n");
    ASSERT_EQ(p.records.size(), 3u);
    EXPECT_EQ(format_date(p.records[0].date), "2020-01-01");
    EXPECT_EQ(format_date(p.records[1].date), "2020-02-01");
    EXPECT_EQ(p.records[2].values(1), 2.0);
    EXPECT_EQ(p.records[0].line, 3u);
}

TEST(LoadPanel, FileFixture) {
    const PanelData p = load_panel(std::string(WCLUSTER_TEST_DATA_DIR) + "/panel_small.csv");
    EXPECT_EQ(p.records.size(), 9u);
}

TEST(LoadPanel, LenientDropsAndCounts) {
    const PanelData p = parse(
        "entity,date,a,b\r\n"
        "X,2020-01-01,1,NA\r\n"
        "X,2020-01-02,1,\r\n"
        "X,2020-01-03,1,abc\r\n"
        "X,2020-01-04,1\r\n"
        "X,2020-01-05,1,2\r\n");
    EXPECT_EQ(p.records.size(), 1u);
    EXPECT_EQ(p.dropped_missing, 2u);
    EXPECT_EQ(p.dropped_malformed, 2u);
}

TEST(LoadPanel, StrictNamesTheRow) {
    try {
        (void)parse("entity,date,a\nX,2020-01-01,1\nX,2020-01-02,oops\n", true);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::ParseError);
        EXPECT_NE(std::string(e.what()).find("test.csv:3"), std::string::npos) << e.what();
    }
}

TEST(LoadPanel, SchemaErrors) {
    EXPECT_EQ(code_of([] { (void)parse(""); }), Errc::SchemaError);
    EXPECT_EQ(code_of([] { (void)parse("date,entity,a\n"); }), Errc::SchemaError);
    EXPECT_EQ(code_of([] { (void)parse("entity,date\n"); }), Errc::SchemaError);
    EXPECT_EQ(code_of([] { (void)load_panel("/nonexistent/panel.csv"); }), Errc::Io);
}

TEST(Periods, ParseAndValidate) {
    const auto specs = periods("name,start,end\np1,2001-01-01,2004-12-31\np2,2005-01-01,2008-12-31\n");
    ASSERT_EQ(specs.size(), 2u);
    EXPECT_EQ(specs[1].name, "p2");
    EXPECT_EQ(code_of([] { (void)periods("name,start,end\na,2001-01-01,2004-12-31\nb,2004-06-01,2008-12-31\n"); }),
              Errc::OverlappingPeriods);
    EXPECT_EQ(code_of([] { (void)periods("name,start,end\na,2005-01-01,2004-12-31\n"); }), Errc::SchemaError);
    EXPECT_EQ(code_of([] { (void)periods("name,start,end\na,2001-01-01,2001-12-31\na,2002-01-01,2002-12-31\n"); }),
              Errc::SchemaError);
    EXPECT_NO_THROW((void)periods("name,start,end\na,2001-01-01,2001-06-30\nb,2001-06-30,2001-12-31\n"));
}

TEST(SplitPeriods, Buckets) {
    const PanelData p = parse(
        "entity,date,a\n"
        "X,2000-06-01,0\n"
        "X,2001-03-01,1\n"
        "Y,2001-06-30,2\n"
        "X,2001-07-01,3\n");
    const auto single = periods("name,start,end\nall,1999-01-01,2002-01-01\n");
    const PeriodSplit one = split_periods(p.records, single);
    ASSERT_EQ(one.buckets.size(), 1u);
    EXPECT_EQ(one.buckets[0].entities.at("X").size(), 3u);
    EXPECT_EQ(one.dropped, 0u);

    const auto two = periods("name,start,end\nh1,2001-01-01,2001-06-30\nh2,2001-06-30,2001-12-31\n");
    const PeriodSplit split = split_periods(p.records, two);
    EXPECT_EQ(split.dropped, 1u);
    EXPECT_EQ(split.buckets[0].entities.at("Y").size(), 1u);
    EXPECT_EQ(split.buckets[1].entities.count("Y"), 0u);
    EXPECT_EQ(split.buckets[1].entities.at("X").size(), 1u);
}

TEST(Summarize, Examples) {
    const auto r = rows({{1, 2}, {2, 1}, {3, 3}});
    const GaussianMeasure m = summarize(r);
    EXPECT_NEAR(m.mean()(0), 2.0, 1e-15);
    EXPECT_NEAR(m.mean()(1), 2.0, 1e-15);
    Matrix expected(2, 2);
    expected << 1, 0.5, 0.5, 1;
    EXPECT_LT((m.cov().matrix() - expected).norm(), 1e-15);

    const GaussianMeasure scalar = summarize(rows({{1}, {2}, {3}}));
    EXPECT_NEAR(scalar.mean()(0), 2.0, 1e-15);
    EXPECT_NEAR(scalar.cov()(0, 0), 1.0, 1e-15);
}

TEST(Summarize, ConstantRowsRepairedToJitter) {
    const auto r = rows({{5, 7}, {5, 7}, {5, 7}, {5, 7}});
    SummaryConfig cfg;
    cfg.jitter = 1e-6;
    const GaussianMeasure m = summarize(r, cfg);
    EXPECT_EQ(m.mean()(0), 5.0);
    EXPECT_EQ(m.mean()(1), 7.0);
    EXPECT_LT((m.cov().matrix() - 1e-6 * Matrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(Summarize, TooFewRecords) {
    EXPECT_EQ(code_of([] { (void)summarize(rows({{1, 2}, {3, 4}})); }), Errc::TooFewRecords);
    SummaryConfig cfg;
    cfg.min_records = 5;
    EXPECT_EQ(code_of([&] { (void)summarize(rows({{1}, {2}, {3}}), cfg); }), Errc::TooFewRecords);
}

TEST(Summarize, ScalingAndDenominator) {
    const auto r = rows({{1, 4}, {2, -1}, {0.5, 3}, {7, 2}, {3, 3}});
    std::vector<PanelRecord> scaled = r;
    for (auto& rec : scaled) rec.values *= 3.0;
    const RawSummary base = summarize_raw(r);
    EXPECT_LT((summarize_raw(scaled).cov - 9.0 * base.cov).norm(), 1e-10);
    SummaryConfig pop;
    pop.denominator = CovDenominator::N;
    EXPECT_LT((summarize_raw(r, pop).cov - (4.0 / 5.0) * base.cov).norm(), 1e-14);
}

TEST(SummarizePeriod, SkipsShortEntities) {
    const PanelData p = load_panel(std::string(WCLUSTER_TEST_DATA_DIR) + "/panel_small.csv");
    PanelData extra = p;
    extra.records.push_back({"D", Date{year{2020}, month{1}, day{6}}, Vector{{1.0, 1.0}}, 99});
    const auto spec = load_periods(std::string(WCLUSTER_TEST_DATA_DIR) + "/periods_single.csv");
    const PeriodSplit split = split_periods(extra.records, spec);
    const PeriodMeasures pm = summarize_period(split.buckets[0]);
    ASSERT_TRUE(pm.measures.has_value());
    EXPECT_EQ(pm.measures->size(), 3u);
    EXPECT_EQ(pm.measures->labels(), (std::vector<std::string>{"A", "B", "C"}));
    EXPECT_EQ(pm.skipped, (std::vector<std::string>{"D"}));
}

}  // namespace
}  // namespace wcluster
