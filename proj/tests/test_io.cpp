#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "treecover/io.hpp"
#include "treecover/limit_process.hpp"
#include "treecover/svg.hpp"

using namespace treecover;

TEST(Numbers, ShortestRoundTrip) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 1000; ++k) {
    const double v = u(gen) * std::pow(10.0, k % 20 - 10);
    EXPECT_EQ(parse_double(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.75), "0.75");
  EXPECT_TRUE(std::isnan(parse_double("nan")));
  EXPECT_THROW(parse_double("1.5x"), SchemaError);
  EXPECT_THROW(parse_int<int>("7.0"), SchemaError);
  EXPECT_EQ(parse_int<std::uint64_t>("18446744073709551615"), ~std::uint64_t{0});
}

TEST(Hash, Fnv1aKnownValues) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cull);
  EXPECT_EQ(hex64(0xabcull), "0000000000000abc");
}

TEST(Csv, QuotingRoundTrip) {
  const std::vector<std::string> fields{"plain", "with,comma", "with \"quote\"", "line\r\nbreak", ""};
  std::stringstream ss;
  write_csv_row(ss, fields);
  write_csv_row(ss, fields);
  EXPECT_EQ(ss.str().find("plain,\"with,comma\",\"with \"\"quote\"\"\",\"line\r\nbreak\",\r\n"), 0u);
  const auto rows = read_csv(ss);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], fields);
  EXPECT_EQ(rows[1], fields);
}

TEST(Csv, LineEndings) {
  std::stringstream lf("a,b\n1,2\n"), crlf("a,b\r\n1,2\r\n"), bare("a,b\r\n1,2");
  for (auto* s : {&lf, &crlf, &bare}) {
    const auto rows = read_csv(*s);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[1], (std::vector<std::string>{"1", "2"}));
  }
  std::stringstream open("\"abc");
  EXPECT_THROW(read_csv(open), SchemaError);
}

TEST(Csv, SampleRowsRoundTrip) {
  std::vector<SampleRow> rows;
  const Params p(0.5, 6);
  for (const auto& r : sample_raw_cover(p, 20, 3, 1)) {
    rows.push_back({Family::raw, 0.5, 6, 6, 3, r.tau, rescale_cover(r.tau, Family::raw, p).rescaled});
  }
  rows.push_back({Family::tilde, 2.5, 4, 4, 9, 1.25, std::numeric_limits<double>::quiet_NaN()});
  std::stringstream ss;
  write_samples_csv(ss, rows);
  const auto back = read_samples_csv(ss);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    EXPECT_EQ(back[i].family, rows[i].family);
    EXPECT_EQ(back[i].tau, rows[i].tau);
    EXPECT_EQ(back[i].rescaled, rows[i].rescaled);
    EXPECT_EQ(back[i].seed, rows[i].seed);
  }
  EXPECT_TRUE(std::isnan(back.back().rescaled));
  EXPECT_EQ(back.back().family, Family::tilde);
}

TEST(Csv, SchemaErrors) {
  std::stringstream empty;
  EXPECT_THROW(read_samples_csv(empty), SchemaError);
  std::stringstream wrong("family,lambda\r\nraw,0.5\r\n");
  EXPECT_THROW(read_samples_csv(wrong), SchemaError);
  std::stringstream short_row("family,lambda,n,level,seed,tau,rescaled\r\nraw,0.5,6\r\n");
  EXPECT_THROW(read_samples_csv(short_row), SchemaError);
  std::stringstream bad_number("family,lambda,n,level,seed,tau,rescaled\r\nraw,half,6,6,1,2,3\r\n");
  EXPECT_THROW(read_samples_csv(bad_number), SchemaError);
  std::stringstream header_only("family,lambda,n,level,seed,tau,rescaled\r\n");
  EXPECT_TRUE(read_samples_csv(header_only).empty());
}

TEST(Csv, RunRecordsRoundTrip) {
  const auto runs = sample_bar_cover(Params(0.5, 5), 10, 4, 1);
  std::stringstream ss;
  write_run_records_csv(ss, runs);
  const auto back = read_run_records_csv(ss);
  ASSERT_EQ(back.size(), runs.size());
  for (std::size_t i = 0; i < runs.size(); ++i) {
    EXPECT_EQ(back[i].tau, runs[i].tau);
    EXPECT_EQ(back[i].jumps, runs[i].jumps);
    EXPECT_EQ(back[i].family, Family::bar);
  }
}

TEST(Json, NetworkExactRoundTrip) {
  for (const auto& net : {build_tree_network(Params(0.7, 4)), build_bar_network(Params(0.5, 6)),
                          build_tilde_chain(Params(0.5, 3))}) {
    const auto text = network_to_json(net).dump();
    const auto back = network_from_json(nlohmann::json::parse(text));
    ASSERT_EQ(back.size(), net.size());
    EXPECT_EQ(back.vertices(), net.vertices());
    EXPECT_EQ(back.measure(), net.measure());
    const auto a = net.triplets(), b = back.triplets();
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      EXPECT_EQ(a[k].i, b[k].i);
      EXPECT_EQ(a[k].j, b[k].j);
      EXPECT_EQ(a[k].value, b[k].value);
    }
    EXPECT_EQ(network_to_json(back).dump(), text);
  }
}

TEST(Json, NetworkSchemaErrors) {
  EXPECT_THROW(network_from_json(nlohmann::json::parse(R"({"vertices": ["e"]})")), SchemaError);
  EXPECT_THROW(network_from_json(nlohmann::json::parse(
                   R"({"vertices": ["0", "1"], "conductance": [[0, 5, 1.0]], "measure": [1, 1]})")),
               SchemaError);
  EXPECT_THROW(network_from_json(nlohmann::json::parse(
                   R"({"vertices": ["0", "1"], "conductance": [[0, 1]], "measure": [1, 1]})")),
               SchemaError);
  EXPECT_THROW(network_from_json(nlohmann::json::parse(
                   R"({"vertices": ["0", "x"], "conductance": [], "measure": [1, 1]})")),
               SchemaError);
}

TEST(Json, EstimateKeys) {
  const Estimate e{0.5, 8, 1.25, 0.01, 1000, 7};
  const auto j = estimate_to_json(e);
  for (const char* key : {"lambda", "n", "estimate", "stderr", "samples", "seed"}) EXPECT_TRUE(j.contains(key));
  const auto back = estimate_from_json(j);
  EXPECT_EQ(back.estimate, 1.25);
  EXPECT_EQ(back.samples, 1000u);
  EXPECT_THROW(estimate_from_json(nlohmann::json::object()), SchemaError);
}

TEST(Tail, CsvHasFittedColumn) {
  TailFit fit;
  fit.u = {1.0, 2.0};
  fit.exceedance = {0.5, 0.1};
  fit.fitted = {0.45, 0.12};
  std::stringstream ss;
  write_tail_csv(ss, fit);
  const auto rows = read_csv(ss);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"u", "exceedance", "fitted"}));
  EXPECT_EQ(rows[2][2], "0.12");
}

TEST(Svg, RendersSeries) {
  const std::vector<Series> series{{"a<b", {1, 2, 3}, {1, 4, 9}}, {"flat", {1, 2}, {2, 2}}};
  PlotSpec spec;
  spec.title = "growth";
  spec.log_y = true;
  const auto svg = render_svg(spec, series);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("a&lt;b"), std::string::npos);
  EXPECT_EQ(std::count(svg.begin(), svg.end(), '\n') > 5, true);
  const std::vector<Series> bad{{"x", {1, 2}, {1}}};
  EXPECT_THROW(render_svg(spec, bad), DomainError);
}
