#include "dataset.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace gldemu {

ReplicatedDesign make_design(MatrixXd X, MatrixXd Y, InputModel input, std::uint64_t seed) {
  if (X.rows() < 1 || X.rows() != Y.rows())
    throw InvalidArgument("make_design: X and Y must have the same positive number of rows");
  if (Y.cols() < 1) throw InvalidArgument("make_design: at least one replication required");
  if (X.cols() != input.dim()) throw InvalidArgument("make_design: input model dimension mismatch");
  if (!X.allFinite() || !Y.allFinite())
    throw DataError("make_design: non-finite design point or output");
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = i + 1; j < X.rows(); ++j)
      if (X.row(i) == X.row(j)) throw DataError("make_design: duplicate design rows");
  ReplicatedDesign d;
  d.X = std::move(X);
  d.Y = std::move(Y);
  d.input = std::move(input);
  d.seed = seed;
  return d;
}

void save_csv(const ReplicatedDesign& d, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (int j = 0; j < d.dim(); ++j) out << "x" << (j + 1) << ",";
  out << "rep,y\n";
  char buf[40];
  for (int i = 0; i < d.n_points(); ++i) {
    for (int r = 0; r < d.replications(); ++r) {
      for (int j = 0; j < d.dim(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", d.X(i, j));
        out << buf << ",";
      }
      std::snprintf(buf, sizeof buf, "%.17g", d.Y(i, r));
      out << (r + 1) << "," << buf << "\n";
    }
  }
  if (!out) throw IoError("write failed: " + path);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, int line_no, const char* what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw DataError("line " + std::to_string(line_no) + ": cannot parse " + what + " '" + s + "'");
  }
}

}  // namespace

ReplicatedDesign load_csv(const std::string& path, std::optional<InputModel> input) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);

  std::string line;
  if (!std::getline(in, line)) throw DataError("empty file: " + path);
  const auto header = split_csv_line(line);
  if (header.size() < 3 || header[header.size() - 2] != "rep" || header.back() != "y")
    throw DataError("line 1: expected header x1,...,xM,rep,y");
  const int m = static_cast<int>(header.size()) - 2;
  for (int j = 0; j < m; ++j)
    if (header[j] != "x" + std::to_string(j + 1))
      throw DataError("line 1: expected column 'x" + std::to_string(j + 1) + "'");

  std::vector<std::vector<double>> xs;   // unique design points in appearance order
  std::vector<std::vector<double>> ys;   // outputs per point
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != m + 2)
      throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(m + 2) +
                      " fields, got " + std::to_string(fields.size()));
    std::vector<double> x(m);
    for (int j = 0; j < m; ++j) x[j] = parse_double(fields[j], line_no, "input coordinate");
    const double rep = parse_double(fields[m], line_no, "replication index");
    const double y = parse_double(fields[m + 1], line_no, "output");

    if (!xs.empty() && xs.back() == x) {
      ys.back().push_back(y);
    } else {
      xs.push_back(std::move(x));
      ys.push_back({y});
    }
    const std::size_t expected_rep = ys.back().size();
    if (rep != static_cast<double>(expected_rep))
      throw DataError("line " + std::to_string(line_no) + ": expected rep " +
                      std::to_string(expected_rep));
  }
  if (xs.empty()) throw DataError(path + ": no data rows");
  const std::size_t r = ys.front().size();
  for (std::size_t i = 0; i < ys.size(); ++i)
    if (ys[i].size() != r)
      throw DataError("ragged replications: point " + std::to_string(i + 1) + " has " +
                      std::to_string(ys[i].size()) + " rows, expected " + std::to_string(r));

  const int n = static_cast<int>(xs.size());
  MatrixXd X(n, m), Y(n, static_cast<int>(r));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) X(i, j) = xs[i][j];
    for (std::size_t k = 0; k < r; ++k) Y(i, static_cast<int>(k)) = ys[i][k];
  }

  InputModel im;
  if (input) {
    im = *input;
    if (im.dim() != m) throw DataError("input model dimension does not match data");
  } else {
    std::vector<Marginal> ms;
    for (int j = 0; j < m; ++j) {
      const double lo = X.col(j).minCoeff();
      const double hi = X.col(j).maxCoeff();
      if (!(lo < hi))
        throw DataError("input column x" + std::to_string(j + 1) +
                        " is constant; marginal bounds cannot be inferred");
      ms.push_back(Marginal::Uniform(lo, hi));
    }
    im = InputModel(ms);
  }
  return make_design(std::move(X), std::move(Y), std::move(im));
}

}  // namespace gldemu
