#include "surrogate.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

namespace gldemu {

using nlohmann::json;

std::array<double, 4> LambdaSurrogate::lambda(const VectorXd& x) const {
  return {pc[0].eval(x), std::exp(pc[1].eval(x)), pc[2].eval(x), pc[3].eval(x)};
}

GldParams LambdaSurrogate::params_at(const VectorXd& x) const {
  const auto l = lambda(x);
  return GldParams(l[0], l[1], l[2], l[3]);
}

VectorXd flatten(const LambdaSurrogate& s) {
  Eigen::Index total = 0;
  for (const auto& m : s.pc) total += m.coefficients.size();
  VectorXd a(total);
  Eigen::Index off = 0;
  for (const auto& m : s.pc) {
    a.segment(off, m.coefficients.size()) = m.coefficients;
    off += m.coefficients.size();
  }
  return a;
}

LambdaSurrogate with_coefficients(const LambdaSurrogate& proto, const VectorXd& a) {
  Eigen::Index total = 0;
  for (const auto& m : proto.pc) total += m.coefficients.size();
  if (a.size() != total)
    throw InvalidArgument("with_coefficients: coefficient vector length mismatch");
  LambdaSurrogate out = proto;
  Eigen::Index off = 0;
  for (auto& m : out.pc) {
    m.coefficients = a.segment(off, m.coefficients.size());
    off += m.coefficients.size();
  }
  return out;
}

namespace {

json marginal_to_json(const Marginal& m) {
  if (m.kind == MarginalKind::gaussian) return json{{"kind", "gaussian"}};
  return json{{"kind", "uniform"}, {"lower", m.lower}, {"upper", m.upper}};
}

Marginal marginal_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "gaussian") return Marginal::Gaussian();
  if (kind == "uniform")
    return Marginal::Uniform(j.at("lower").get<double>(), j.at("upper").get<double>());
  throw DataError("unknown marginal kind '" + kind + "'");
}

json pce_to_json(const PceModel& m, const char* link) {
  json idx = json::array();
  for (const auto& a : m.set.indices) idx.push_back(a);
  json coef = json::array();
  for (Eigen::Index i = 0; i < m.coefficients.size(); ++i) coef.push_back(m.coefficients(i));
  return json{{"link", link}, {"multi_indices", idx}, {"coefficients", coef},
              {"loo_error", m.loo_error}};
}

PceModel pce_from_json(const json& j, const InputModel& im, const char* expected_link) {
  if (j.at("link").get<std::string>() != expected_link)
    throw DataError("model file: unexpected link function");
  PceModel m;
  m.input = im;
  m.set.dim = im.dim();
  for (const auto& a : j.at("multi_indices")) {
    MultiIndex mi = a.get<MultiIndex>();
    if (static_cast<int>(mi.size()) != im.dim())
      throw DataError("model file: multi-index dimension mismatch");
    for (const int d : mi)
      if (d < 0) throw DataError("model file: negative polynomial degree");
    m.set.indices.push_back(std::move(mi));
  }
  for (std::size_t i = 0; i < m.set.indices.size(); ++i)
    for (std::size_t k = i + 1; k < m.set.indices.size(); ++k)
      if (m.set.indices[i] == m.set.indices[k])
        throw DataError("model file: duplicate multi-index");
  const auto& coef = j.at("coefficients");
  if (coef.size() != m.set.indices.size())
    throw DataError("model file: coefficient count does not match multi-index count");
  m.coefficients.resize(static_cast<Eigen::Index>(coef.size()));
  for (std::size_t i = 0; i < coef.size(); ++i)
    m.coefficients(static_cast<Eigen::Index>(i)) = coef[i].get<double>();
  m.loo_error = j.value("loo_error", 0.0);
  return m;
}

}  // namespace

void save_model(const ModelFile& m, const std::string& path) {
  json j;
  j["schema"] = 1;
  json ms = json::array();
  for (const auto& marg : m.surrogate.input.marginals) ms.push_back(marginal_to_json(marg));
  j["input_model"] = json{{"marginals", ms}};
  static const char* links[4] = {"identity", "log", "identity", "identity"};
  json lam = json::array();
  for (int s = 0; s < 4; ++s) lam.push_back(pce_to_json(m.surrogate.pc[s], links[s]));
  j["lambda"] = lam;
  j["method"] = m.method;
  if (!m.fit_report_json.empty()) j["fit_report"] = json::parse(m.fit_report_json);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  try {
    if (j.at("schema").get<int>() != 1) throw DataError("unsupported model schema version");
    std::vector<Marginal> ms;
    for (const auto& marg : j.at("input_model").at("marginals"))
      ms.push_back(marginal_from_json(marg));
    ModelFile m;
    m.surrogate.input = InputModel(ms);
    static const char* links[4] = {"identity", "log", "identity", "identity"};
    const auto& lam = j.at("lambda");
    if (lam.size() != 4) throw DataError("model file: expected four expansions");
    for (int s = 0; s < 4; ++s)
      m.surrogate.pc[s] = pce_from_json(lam[s], m.surrogate.input, links[s]);
    m.method = j.value("method", "");
    if (j.contains("fit_report")) m.fit_report_json = j["fit_report"].dump();
    return m;
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

}  // namespace gldemu
