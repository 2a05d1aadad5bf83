// mroot: evaluate and verify m-th root Cartan geometry from the command line.
//
// Exit codes: 0 success / all checks pass, 1 some check failed, 2 usage,
// input or domain error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mroot/berwald_moor.hpp"
#include "mroot/curvature.hpp"
#include "mroot/io.hpp"
#include "mroot/metric.hpp"
#include "mroot/suite.hpp"
#include "mroot/ttensor.hpp"
#include "mroot/vgeometry.hpp"

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

mroot::Momentum parse_point(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size())
      throw mroot::Error(mroot::ErrorCode::InvalidArgument, "cannot parse '" + item + "' as a real number");
    vals.push_back(v);
  }
  if (vals.empty()) throw mroot::Error(mroot::ErrorCode::InvalidArgument, "empty point");
  return Eigen::Map<mroot::Vec>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

void apply_overrides(mroot::Tolerances& tol, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos)
      throw mroot::Error(mroot::ErrorCode::InvalidArgument, "--tol expects name=value, got '" + o + "'");
    const std::string name = o.substr(0, eq);
    double value = 0.0;
    try {
      value = std::stod(o.substr(eq + 1));
    } catch (const std::exception&) {
      throw mroot::Error(mroot::ErrorCode::InvalidArgument, "bad tolerance value in '" + o + "'");
    }
    if (!tol.set(name, value)) throw mroot::Error(mroot::ErrorCode::InvalidArgument, "unknown tolerance '" + name + "'");
  }
}

void emit(const mroot::Json& j, const std::string& out_path) {
  if (out_path.empty())
    std::cout << mroot::dump(j) << '\n';
  else
    mroot::write_text(out_path, mroot::dump(j));
}

int cmd_eval(const std::string& metric_path, const std::string& point, const std::string& out_path,
             const mroot::Tolerances& tol) {
  using namespace mroot;
  const SymTensor A = load_tensor(metric_path);
  const Momentum p = parse_point(point);
  const EvalContext c = make_context(A, p);

  Json j;
  j["engine_version"] = kEngineVersion;
  j["metric"] = metric_path;
  j["point"] = to_json(p);
  j["K"] = c.K;
  j["l"] = to_json(c.l_up);
  j["g_up"] = to_json(c.g_up);
  j["g_dn"] = to_json(c.g_dn);
  j["g_dn_route_discrepancy"] = c.g_dn_route_discrepancy;
  j["g_signature"] = {{"positive", c.g_signature.positive},
                      {"negative", c.g_signature.negative},
                      {"zero", c.g_signature.zero}};
  j["h_up"] = to_json(c.h_up);
  j["C_up"] = to_json(compute_C_up(c));
  const MixedTorsion cm = compute_C_mixed(c);
  j["C_mixed"] = to_json(cm.values);
  j["C_mixed_lowering_residual"] = cm.lowering_residual;
  const TorsionCovector cv = torsion_covector(c);
  j["torsion_covector"] = to_json(cv.trace);
  j["torsion_covector_discrepancy"] = cv.discrepancy;
  const CurvatureRoutes S = compute_S(c);
  j["S"] = to_json(S.by_definition);
  j["S_route_discrepancy"] = S.max_discrepancy;
  j["U"] = to_json(compute_U(c));
  if (c.n >= 4) {
    const S3Diagnosis d = s3_fit(c, tol.s3);
    j["s3"] = {{"lambda", d.lambda}, {"residual", d.residual}, {"S", d.S}, {"is_s3_like", d.is_s3_like},
               {"tolerance", tol.s3}};
  } else {
    j["s3"] = nullptr;
  }
  j["T"] = to_json(compute_T_closed(c));
  emit(j, out_path);
  return 0;
}

int cmd_verify(const std::string& metric_path, std::optional<int> bm, int samples, std::uint64_t seed,
               const std::string& out_path, const mroot::Tolerances& tol) {
  using namespace mroot;
  if (samples < 1) throw Error(ErrorCode::InvalidArgument, "--samples must be >= 1");
  std::optional<SymTensor> A;
  std::string descriptor;
  int bm_dim = 0;
  if (bm) {
    A = bm_tensor(*bm);
    bm_dim = *bm;
    descriptor = "berwald-moor:" + std::to_string(*bm);
  } else {
    A = load_tensor(metric_path);
    descriptor = metric_path;
  }
  const CheckReport rep = run_verify(*A, descriptor, bm_dim, VerifyOptions{samples, seed, tol});
  emit(to_json(rep), out_path);
  const ReportSummary s = rep.summary();
  std::cerr << descriptor << ": " << s.passed << "/" << s.total << " checks passed\n";
  for (const auto& r : rep.records())
    if (!r.pass) std::cerr << "FAIL " << r.name << " residual=" << r.residual << " tol=" << r.tolerance << '\n';
  return s.failed == 0 ? 0 : kExitCheckFailed;
}

int cmd_bm_gen(int n, const std::string& out_path) {
  emit(mroot::tensor_to_json(mroot::bm_tensor(n)), out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"m-th root Cartan space geometry engine"};
  app.require_subcommand(1);

  std::vector<std::string> tol_overrides;

  auto* eval = app.add_subcommand("eval", "Evaluate every geometric object at one point");
  std::string eval_metric, eval_point, eval_out;
  eval->add_option("--metric", eval_metric, "JSON tensor file")->required();
  eval->add_option("--p", eval_point, "Comma-separated momentum components")->required();
  eval->add_option("--out", eval_out, "Output path (default: stdout)");
  eval->add_option("--tol", tol_overrides, "Tolerance override name=value (repeatable)");

  auto* verify = app.add_subcommand("verify", "Run the identity suite at sampled points");
  std::string verify_metric, verify_out;
  std::optional<int> verify_bm;
  int samples = 25;
  std::uint64_t seed = 7;
  auto* metric_opt = verify->add_option("--metric", verify_metric, "JSON tensor file");
  auto* bm_opt = verify->add_option("--bm", verify_bm, "Use the Berwald-Moor metric of dimension n");
  metric_opt->excludes(bm_opt);
  verify->add_option("--samples", samples, "Number of sample points");
  verify->add_option("--seed", seed, "Sampling seed");
  verify->add_option("--out", verify_out, "Report path (default: stdout)");
  verify->add_option("--tol", tol_overrides, "Tolerance override name=value (repeatable)");

  auto* gen = app.add_subcommand("bm-gen", "Write the Berwald-Moor coefficient tensor as JSON");
  int gen_dim = 0;
  std::string gen_out;
  gen->add_option("--dim", gen_dim, "Dimension n >= 4")->required();
  gen->add_option("--out", gen_out, "Output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    mroot::Tolerances tol;
    apply_overrides(tol, tol_overrides);
    if (*eval) return cmd_eval(eval_metric, eval_point, eval_out, tol);
    if (*verify) {
      if (!verify_bm && verify_metric.empty())
        throw mroot::Error(mroot::ErrorCode::InvalidArgument, "verify needs --metric or --bm");
      return cmd_verify(verify_metric, verify_bm, samples, seed, verify_out, tol);
    }
    if (*gen) return cmd_bm_gen(gen_dim, gen_out);
  } catch (const mroot::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
