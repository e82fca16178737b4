#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "dataset.hpp"
#include "surrogate.hpp"
#include "testbed.hpp"

using namespace gldemu;

namespace {

std::string temp_path(const char* name) {
  return std::string("/tmp/gldemu_test_") + name;
}

}  // namespace

TEST_CASE("dataset CSV round trip is lossless") {
  MatrixXd pts(3, 2);
  pts << 0.1, 0.9, 0.5, 0.5, 1.0 / 3.0, 0.7071067811865476;
  MatrixXd Y(3, 2);
  Y << 1.5, -2.25, 1e-17, 3.0, 0.1 + 0.2, 123456.789;
  const InputModel im(std::vector<Marginal>(2, Marginal::Uniform(0.0, 1.0)));
  const ReplicatedDesign d = make_design(pts, Y, im, 9);

  const std::string path = temp_path("roundtrip.csv");
  save_csv(d, path);
  const ReplicatedDesign d2 = load_csv(path, im);
  CHECK(d2.X == d.X);
  CHECK(d2.Y == d.Y);
  std::remove(path.c_str());
}

TEST_CASE("dataset loader reports parse errors with line numbers") {
  const std::string path = temp_path("broken.csv");
  {
    std::ofstream out(path);
    out << "x1,rep,y\n0.5,1,1.25\n0.5,2,oops\n";
  }
  try {
    load_csv(path);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  std::remove(path.c_str());
}

TEST_CASE("dataset loader rejects ragged replication counts") {
  const std::string path = temp_path("ragged.csv");
  {
    std::ofstream out(path);
    out << "x1,rep,y\n0.2,1,1.0\n0.2,2,2.0\n0.8,1,3.0\n";
  }
  CHECK_THROWS_AS(load_csv(path), DataError);
  std::remove(path.c_str());
}

TEST_CASE("duplicate design rows are rejected") {
  MatrixXd pts(2, 1);
  pts << 0.4, 0.4;
  MatrixXd Y(2, 1);
  Y << 1.0, 2.0;
  CHECK_THROWS_AS(make_design(pts, Y, InputModel({Marginal::Uniform(0, 1)})), DataError);
}

TEST_CASE("loader infers uniform marginals from data ranges") {
  const std::string path = temp_path("infer.csv");
  {
    std::ofstream out(path);
    out << "x1,rep,y\n0.25,1,1.0\n0.75,1,2.0\n";
  }
  const ReplicatedDesign d = load_csv(path);
  CHECK(d.input.marginals[0].kind == MarginalKind::uniform);
  CHECK(d.input.marginals[0].lower == 0.25);
  CHECK(d.input.marginals[0].upper == 0.75);
  std::remove(path.c_str());
}

namespace {

LambdaSurrogate tiny_surrogate() {
  const InputModel im({Marginal::Uniform(0.0, 1.0)});
  LambdaSurrogate s;
  s.input = im;
  for (int k = 0; k < 4; ++k) {
    s.pc[k].input = im;
    s.pc[k].set = total_degree_set(1, 1);
    s.pc[k].coefficients = VectorXd::Zero(2);
    s.pc[k].loo_error = 0.01 * (k + 1);
  }
  s.pc[0].coefficients << 0.5, 0.30000000000000004;  // lambda1: 0.5 + c*psi_1
  s.pc[1].coefficients << -0.25, 0.125;              // log lambda2
  s.pc[2].coefficients << 0.4, 0.0;
  s.pc[3].coefficients << 1.0 / 3.0, -0.1;
  return s;
}

}  // namespace

TEST_CASE("model JSON round trip reproduces predictions bitwise") {
  const LambdaSurrogate s = tiny_surrogate();
  ModelFile m;
  m.surrogate = s;
  m.method = "infer-mm";
  m.fit_report_json = "{\"note\":42}";

  const std::string path = temp_path("model.json");
  save_model(m, path);
  const ModelFile m2 = load_model(path);

  CHECK(m2.method == "infer-mm");
  CHECK(m2.surrogate.pc[2].loo_error == s.pc[2].loo_error);
  Rng rng(4);
  for (int k = 0; k < 50; ++k) {
    VectorXd x(1);
    x << rng.uniform();
    const auto l1 = s.lambda(x);
    const auto l2 = m2.surrogate.lambda(x);
    for (int i = 0; i < 4; ++i) CHECK(l1[i] == l2[i]);
  }
  std::remove(path.c_str());
}

TEST_CASE("coefficient vector round trip") {
  const LambdaSurrogate s = tiny_surrogate();
  const VectorXd a = flatten(s);
  CHECK(a.size() == 8);
  const LambdaSurrogate s2 = with_coefficients(s, a);
  CHECK(flatten(s2) == a);
  VectorXd short_a(3);
  CHECK_THROWS_AS(with_coefficients(s, short_a), InvalidArgument);
}

TEST_CASE("model loader error paths") {
  CHECK_THROWS_AS(load_model("/nonexistent/path.json"), IoError);
  const std::string path = temp_path("badschema.json");
  {
    std::ofstream out(path);
    out << "{\"schema\": 99}";
  }
  CHECK_THROWS_AS(load_model(path), DataError);
  std::remove(path.c_str());
}
