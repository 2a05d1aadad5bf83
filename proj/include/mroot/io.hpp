#ifndef MROOT_IO_HPP
#define MROOT_IO_HPP

// JSON tensor files and report serialization. Indices in files are 1-based.
//
// Tensor file:
//   {"dim": n, "rank": m, "coeffs": [{"index": [i1, ..., im], "value": v}, ...]}

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mroot/check_report.hpp"
#include "mroot/dense.hpp"
#include "mroot/error.hpp"
#include "mroot/symtensor.hpp"

namespace mroot {

using Json = nlohmann::json;

inline SymTensor tensor_from_json(const Json& j) {
  try {
    const int dim = j.at("dim").get<int>();
    const int rank = j.at("rank").get<int>();
    std::vector<std::pair<MultiIndex, double>> entries;
    for (const auto& e : j.at("coeffs")) {
      MultiIndex idx = e.at("index").get<MultiIndex>();
      for (int& i : idx) i -= 1;
      entries.emplace_back(std::move(idx), e.at("value").get<double>());
    }
    return build_sym(dim, rank, entries);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Io, std::string("malformed tensor JSON: ") + e.what());
  }
}

inline Json tensor_to_json(const SymTensor& t) {
  Json coeffs = Json::array();
  for (const auto& [idx, val] : t.entries()) {
    MultiIndex one_based = idx;
    for (int& i : one_based) i += 1;
    coeffs.push_back({{"index", one_based}, {"value", val}});
  }
  return {{"dim", t.dim()}, {"rank", t.rank()}, {"coeffs", coeffs}};
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Io, path + ": " + e.what());
  }
}

inline SymTensor load_tensor(const std::string& path) { return tensor_from_json(read_json_file(path)); }

/// Doubles are written in shortest round-trip form (at most 17 significant
/// digits), so reloading reproduces every bit.
inline std::string dump(const Json& j) { return j.dump(2); }

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << text << '\n';
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

inline Json to_json(const Vec& v) { return std::vector<double>(v.begin(), v.end()); }

inline Json to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) row[static_cast<std::size_t>(j)] = m(i, j);
    rows.push_back(row);
  }
  return rows;
}

/// Nested arrays, outermost index first.
template <int R>
Json to_json(const DenseTensor<R>& t) {
  const auto flat = t.flat();
  auto build = [&](auto&& self, int depth, std::size_t offset, std::size_t stride) -> Json {
    const std::size_t n = static_cast<std::size_t>(t.dim());
    Json arr = Json::array();
    const std::size_t inner = stride / n;
    for (std::size_t i = 0; i < n; ++i) {
      if (depth == R - 1)
        arr.push_back(flat[offset + i]);
      else
        arr.push_back(self(self, depth + 1, offset + i * inner, inner));
    }
    return arr;
  };
  return build(build, 0, 0, flat.size());
}

inline Json to_json(const CheckRecord& r) {
  return {{"name", r.name}, {"residual", r.residual}, {"tolerance", r.tolerance}, {"pass", r.pass}};
}

inline Json to_json(const CheckReport& rep) {
  Json checks = Json::array();
  for (const auto& r : rep.records()) checks.push_back(to_json(r));
  const ReportSummary s = rep.summary();
  return {{"engine_version", rep.engine_version},
          {"metric", rep.metric},
          {"seed", rep.seed},
          {"points", rep.points},
          {"skipped", rep.skipped},
          {"checks", checks},
          {"summary", {{"total", s.total}, {"passed", s.passed}, {"failed", s.failed}}}};
}

/// Inverse of to_json(CheckReport). Pass flags are read back as stored. A
/// residual that overflowed to a non-finite value is written as null and
/// read back as infinity.
inline CheckReport report_from_json(const Json& j) {
  try {
    CheckReport rep;
    rep.engine_version = j.at("engine_version").get<std::string>();
    rep.metric = j.at("metric").get<std::string>();
    rep.seed = j.at("seed").get<std::uint64_t>();
    rep.points = j.at("points").get<std::vector<std::vector<double>>>();
    rep.skipped = j.at("skipped").get<std::vector<std::string>>();
    for (const auto& c : j.at("checks")) {
      const auto& res = c.at("residual");
      rep.add(CheckRecord{c.at("name").get<std::string>(),
                          res.is_null() ? std::numeric_limits<double>::infinity() : res.get<double>(),
                          c.at("tolerance").get<double>(), c.at("pass").get<bool>()});
    }
    const ReportSummary s = rep.summary();
    const auto& js = j.at("summary");
    if (js.at("total").get<std::size_t>() != s.total || js.at("passed").get<std::size_t>() != s.passed ||
        js.at("failed").get<std::size_t>() != s.failed)
      throw Error(ErrorCode::Io, "report summary does not match its check list");
    return rep;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Io, std::string("malformed report JSON: ") + e.what());
  }
}

}  // namespace mroot

#endif  // MROOT_IO_HPP
