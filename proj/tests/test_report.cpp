#include <gtest/gtest.h>

#include <sstream>

#include "ptlat/report.hpp"

using namespace ptlat;

TEST(Csv, HeaderAndRows) {
  const SweepTable t = sweep(3, ParameterPath::single(1), 0.0, 0.5, 2);
  std::ostringstream os;
  write_sweep_csv(os, t);
  const std::string csv = os.str();
  EXPECT_EQ(csv.rfind("driver,index,re,im,is_real\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  EXPECT_NE(csv.find("\n0,1,2,0,1\n"), std::string::npos);
}

TEST(Csv, NumbersRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-17, 123456.789}) EXPECT_EQ(std::stod(format_number(x)), x);
  EXPECT_EQ(format_number(-0.0), "0");
}

TEST(Svg, SelfContainedWithOnePolylinePerBranch) {
  const SweepTable t = sweep(11, ParameterPath(1, {{1, 0}, {1, 0}}), -1.2, 1.2, 25);
  std::ostringstream os;
  write_sweep_svg(os, t, "test");
  const std::string svg = os.str();
  std::size_t count = 0;
  for (std::size_t pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) ++count;
  EXPECT_EQ(count, 11u);
  EXPECT_NE(svg.find("version=\"1.1\""), std::string::npos);
  EXPECT_EQ(svg.find("href"), std::string::npos);
  EXPECT_NE(svg.find("<circle"), std::string::npos);  // complex points beyond |lambda| = 1
}

TEST(Json, VerificationReportKeysAndRationals) {
  const Json j = to_json(verify_formulas(FormulaModel::one_param, {Rational(1, 3)}));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"model", "params", "n", "k", "match", "dieudonne_residual", "elements", "mismatches", "identities"}));
  EXPECT_EQ(j["params"][0], "1/3");
  EXPECT_EQ(j["elements"][4]["name"], "w");
  EXPECT_EQ(j["elements"][4]["expected"], "11/12");
  EXPECT_EQ(j["elements"][4]["got"], "11/12");
  EXPECT_TRUE(j["match"].get<bool>());
}

TEST(Json, EpLocation) {
  EPLocation ep;
  ep.driver = 0.75;
  ep.colliding_pairs = {{2, 3}};
  const Json j = to_json(ep);
  EXPECT_EQ(j["driver"], 0.75);
  EXPECT_EQ(j["colliding_pairs"][0][1], 3);
}
