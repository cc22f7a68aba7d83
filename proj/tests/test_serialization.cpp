#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "minorb/families.hpp"
#include "minorb/serialization.hpp"

using namespace minorb;
namespace fs = std::filesystem;

TEST_CASE("float formatting survives a parse round trip") {
  for (double v : {1.0 / 3.0, 2.0 * std::sqrt(3.0), 1e-17, -0.1,
                   1.7976931348623157e308}) {
    std::string s = format_float(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(format_float(0.0) == "0");
}

TEST_CASE("operator exchange round trip is exact") {
  FamilyParams p;
  p.gamma = 0.5;
  p.N = 8;
  DenseOperator zr = build_Zr(p);
  nlohmann::json params = {{"gamma", 0.5}, {"N", 8}};
  nlohmann::json doc = operator_to_json(zr, params);
  CHECK(doc["schema"] == 1);
  CHECK(doc["dim"] == 8);
  CHECK(doc["structure_flag"] == "anti_hermitian");
  CHECK(doc["entries"].size() == 64);
  CHECK(doc["entries"][0].size() == 2);

  nlohmann::json params_out;
  DenseOperator back = operator_from_json(doc, &params_out);
  CHECK(back.dim() == 8);
  CHECK(back.structure() == Structure::anti_hermitian);
  CHECK((back.entries() - zr.entries()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(params_out["gamma"] == 0.5);
}

TEST_CASE("tail descriptors round trip through JSON") {
  TailDescriptor t = TailDescriptor::two(0.625, -0.9375, 2.0, 0.36);
  TailDescriptor back = tail_from_json(tail_to_json(t));
  CHECK(back.kind == TailDescriptor::Kind::two_limits);
  CHECK(back.limit_even == 0.625);
  CHECK(back.limit_odd == -0.9375);
  CHECK(back.bound_q == 0.36);
}

TEST_CASE("non-finite entries are rejected on read") {
  nlohmann::json doc = operator_to_json(DenseOperator::zero(2));
  doc["entries"][1][0] = "not a number";
  CHECK_THROWS(operator_from_json(doc));
  nlohmann::json doc2 = operator_to_json(DenseOperator::zero(2));
  doc2["entries"][0][1] = std::numeric_limits<double>::infinity();
  CHECK_THROWS(operator_from_json(doc2));
  nlohmann::json doc3 = operator_to_json(DenseOperator::zero(2));
  doc3["schema"] = 2;
  CHECK_THROWS(operator_from_json(doc3));
}

TEST_CASE("report filename convention") {
  CHECK(report_filename("norm", 0.5, 64) == "norm_0.5_64.json");
  CHECK(report_filename("oscillant", 0.6, 32) == "oscillant_0.6_32.json");
}

TEST_CASE("report serialization carries metrics and assertions") {
  ConvergenceReport rep;
  rep.experiment_id = "norm";
  rep.gamma = 0.5;
  rep.N = 64;
  rep.n_list = {4, 8};
  rep.metrics.push_back({"m1", {0.5, 0.25}});
  rep.assertions.push_back({"decreasing", true, 0.25, 0.5});
  rep.fitted_ratio = 0.5;
  nlohmann::json j = report_to_json(rep);
  CHECK(j["experiment_id"] == "norm");
  CHECK(j["metrics"]["m1"].size() == 2);
  CHECK(j["assertions"][0]["passed"] == true);
  CHECK(j["passed"] == true);

  std::string csv = report_to_csv(rep);
  std::istringstream lines(csv);
  std::string header, row1, row2;
  std::getline(lines, header);
  std::getline(lines, row1);
  std::getline(lines, row2);
  CHECK(header == "n,m1");
  CHECK(row1 == "4,0.5");
  CHECK(row2 == "8,0.25");
}

TEST_CASE("atomic writes leave no temporary behind") {
  fs::path dir = fs::temp_directory_path() / "minorb_ser_test";
  fs::create_directories(dir);
  fs::path target = dir / "out.json";
  write_file_atomic(target, "{\"a\":1}");
  CHECK(fs::exists(target));
  std::ifstream in(target);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  CHECK(content == "{\"a\":1}");
  int extras = 0;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path() != target) ++extras;
  CHECK(extras == 0);
  // overwrite in place
  write_file_atomic(target, "{\"a\":2}");
  std::ifstream in2(target);
  std::string content2((std::istreambuf_iterator<char>(in2)),
                       std::istreambuf_iterator<char>());
  CHECK(content2 == "{\"a\":2}");
  fs::remove_all(dir);
}

TEST_CASE("curve serialization shape") {
  FamilyParams p;
  p.gamma = 0.5;
  p.N = 4;
  DenseOperator z = build_Zr(p);
  OrbitBasePoint b = default_base_point(4);
  OrbitCurve c = orbit_curve(z, b, 0.0, 0.5, 5);
  nlohmann::json j = curve_to_json(c);
  CHECK(j["samples"].size() == c.samples.size());
  std::string csv = curve_to_csv(c);
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header.substr(0, 2) == "t,");
}
