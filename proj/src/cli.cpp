#include "psdorder/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "psdorder/canonical.hpp"
#include "psdorder/errors.hpp"
#include "psdorder/linmodels.hpp"
#include "psdorder/matrix_io.hpp"
#include "psdorder/orders.hpp"
#include "psdorder/preservers.hpp"

namespace psdorder::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(std::vector<double>(m.row(i).begin(), m.row(i).end()));
  return rows;
}

json to_json(const RankTriple& r) { return json::array({r.rank_a, r.rank_b, r.rank_diff}); }

json certificate_json(const Certificate& c) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, MinEigenvalue>) {
          return {{"kind", "min_eigenvalue"}, {"value", v.value}};
        } else if constexpr (std::is_same_v<T, PsdWitness>) {
          return {{"kind", "psd_witness"}, {"x", v.x}, {"xt_diff_x", v.value}};
        } else if constexpr (std::is_same_v<T, RankTriple>) {
          return {{"kind", "rank_triple"}, {"rank_triple", to_json(v)}};
        } else if constexpr (std::is_same_v<T, InnerInverseWitness>) {
          return {{"kind", "inner_inverse"},
                  {"G", to_json(v.g)},
                  {"inner_residual", v.inner_residual},
                  {"left_residual", v.left_residual},
                  {"right_residual", v.right_residual}};
        } else if constexpr (std::is_same_v<T, StarResiduals>) {
          return {{"kind", "residuals"},
                  {"left_residual", v.left_residual},
                  {"right_residual", v.right_residual},
                  {"image_contained", v.image_contained}};
        } else {
          return {{"kind", "direct_sum"},
                  {"dim_image_a", v.dim_image_a},
                  {"dim_image_b", v.dim_image_b},
                  {"dim_image_diff", v.dim_image_diff},
                  {"dim_sum", v.dim_sum}};
        }
      },
      c);
}

json verdict_json(const OrderVerdict& v) {
  json j{{"holds", v.holds},
         {"relation", to_string(v.relation)},
         {"standing", to_string(v.standing)},
         {"certificate", certificate_json(v.certificate)},
         {"detail", v.detail}};
  if (v.method) j["method"] = to_string(*v.method);
  return j;
}

json tolerance_json(const ToleranceConfig& t) {
  return {{"eig_tol", t.eig_tol},
          {"max_sweeps", t.max_sweeps},
          {"rank_rel_tol", t.rank_rel_tol ? json(*t.rank_rel_tol) : json(nullptr)},
          {"psd_tol", t.psd_tol},
          {"idem_tol", t.idem_tol},
          {"recon_tol", t.recon_tol}};
}

json sim_cong_json(const SimCongResult& r) {
  return {{"r", r.r},
          {"s", r.s_rank},
          {"S", to_json(r.s)},
          {"residual_a", r.residual_a},
          {"residual_b", r.residual_b},
          {"min_singular", r.min_singular}};
}

json counterexamples_json(const std::vector<Counterexample>& list, std::size_t limit = 3) {
  json arr = json::array();
  for (std::size_t i = 0; i < std::min(limit, list.size()); ++i)
    arr.push_back({{"A", to_json(list[i].a)}, {"B", to_json(list[i].b)}, {"reason", list[i].reason}});
  return arr;
}

json report_json(const PreservationReport& r) {
  return {{"relation", r.relation},
          {"trials", r.trials},
          {"verdict", r.verdict()},
          {"forward_failure_count", r.forward_failures.size()},
          {"backward_failure_count", r.backward_failures.size()},
          {"forward_failures", counterexamples_json(r.forward_failures)},
          {"backward_failures", counterexamples_json(r.backward_failures)}};
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

struct Context {
  ToleranceConfig tol;
  bool compact = false;
  std::ostream& out;
  std::ostream& err;

  int emit(json body, const std::string& command, int code) const {
    body["command"] = command;
    body["tolerances"] = tolerance_json(tol);
    body["version"] = kVersion;
    out << (compact ? body.dump() : body.dump(2)) << '\n';
    return code;
  }
};

MatrixMap parse_map(const std::string& spec, const ToleranceConfig& tol, std::ostream& err) {
  if (spec == "trace-inflation") return trace_inflation_map();
  if (spec == "rank-collapse") return rank_collapse_map();
  if (spec == "identity") return identity_map();
  const std::string prefix = "congruence:";
  if (spec.rfind(prefix, 0) == 0) return congruence_map(io::read_general_matrix(spec.substr(prefix.size())), tol);
  (void)err;
  throw std::invalid_argument("unknown map '" + spec + "' (expected congruence:FILE, trace-inflation, rank-collapse, identity)");
}

std::vector<std::pair<SymMatrix, SymMatrix>> read_samples(const fs::path& dir, std::ostream& err) {
  if (!fs::is_directory(dir)) throw IoError("'" + dir.string() + "' is not a directory");
  std::map<std::string, fs::path> inputs;
  std::map<std::string, fs::path> outputs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const fs::path p = entry.path();
    const std::string stem = p.stem().string();  // e.g. "probe1.in"
    const fs::path inner(stem);
    if (inner.extension() == ".in") inputs[inner.stem().string()] = p;
    if (inner.extension() == ".out") outputs[inner.stem().string()] = p;
  }
  std::vector<std::pair<SymMatrix, SymMatrix>> pairs;
  for (const auto& [name, in] : inputs) {
    const auto it = outputs.find(name);
    if (it == outputs.end()) throw ParseError("sample '" + name + "' has no matching .out file");
    pairs.emplace_back(io::read_matrix(in, err), io::read_matrix(it->second, err));
  }
  if (pairs.empty()) throw ParseError("no NAME.in.csv / NAME.out.csv pairs in '" + dir.string() + "'");
  return pairs;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decision procedures for partial orders on the positive semidefinite cone", "psdorder"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);

  std::optional<double> tol_rank, tol_psd, tol_idem;
  bool compact = false;
  app.add_option("--tol-rank", tol_rank, "relative rank cutoff")->envname("PSDORDER_TOL_RANK");
  app.add_option("--tol-psd", tol_psd, "relative PSD slack")->envname("PSDORDER_TOL_PSD");
  app.add_option("--tol-idem", tol_idem, "idempotency slack")->envname("PSDORDER_TOL_IDEM");
  app.add_flag("--json", compact, "compact single-line JSON output");

  std::string relation_name, method_name, path_a, path_b, out_path, map_spec, samples_dir;
  std::string model1, model2, estimator, forms_list, cov_path, mean_path;
  int trials = 100, mc_samples = 0;
  std::uint64_t seed = 1;
  std::size_t dim = 2;

  auto* order = app.add_subcommand("order", "order predicates with certificates");
  order->require_subcommand(1);
  auto* order_check = order->add_subcommand("check", "test A <= B in a partial order");
  order_check->add_option("--relation", relation_name, "lowner|minus|star|left-star|right-star")->required();
  order_check->add_option("A", path_a)->required();
  order_check->add_option("B", path_b)->required();
  auto* order_minus = order->add_subcommand("minus", "minus order via a chosen characterization");
  order_minus->add_option("--method", method_name, "rank|image|ginv")->required();
  order_minus->add_option("A", path_a)->required();
  order_minus->add_option("B", path_b)->required();

  auto* canon = app.add_subcommand("canon", "congruence canonical forms");
  canon->require_subcommand(1);
  auto* canon_inertia = canon->add_subcommand("inertia", "inertia and congruence canonical form");
  canon_inertia->add_option("A", path_a)->required();
  auto* canon_simcong = canon->add_subcommand("simcong", "simultaneous congruence of a PSD pair");
  canon_simcong->add_option("A", path_a)->required();
  canon_simcong->add_option("B", path_b)->required();
  canon_simcong->add_option("--out", out_path, "write S to this file");

  auto* preserver = app.add_subcommand("preserver", "order preserver checks");
  preserver->require_subcommand(1);
  auto* pres_verify = preserver->add_subcommand("verify", "sample both-direction order preservation");
  pres_verify->add_option("--map", map_spec, "congruence:S.csv|trace-inflation|rank-collapse|identity")->required();
  pres_verify->add_option("--relation", relation_name)->required();
  pres_verify->add_option("--trials", trials)->check(CLI::PositiveNumber);
  pres_verify->add_option("--seed", seed);
  pres_verify->add_option("--dim", dim, "dimension for maps without a fixed size")->check(CLI::PositiveNumber);
  auto* pres_fit = preserver->add_subcommand("fit", "recover S from (A, phi(A)) samples");
  pres_fit->add_option("--samples", samples_dir, "directory of NAME.in.csv / NAME.out.csv pairs")->required();
  pres_fit->add_option("--out", out_path);

  auto* model = app.add_subcommand("model", "linear model comparison and BLUE checks");
  model->require_subcommand(1);
  auto* model_cmp = model->add_subcommand("compare", "is model 1 at least as good as model 2");
  model_cmp->add_option("M1", model1)->required();
  model_cmp->add_option("M2", model2)->required();
  auto* model_blue = model->add_subcommand("blue", "check the BLUE conditions for Ly");
  model_blue->add_option("--estimator", estimator)->required();
  model_blue->add_option("M", model1)->required();

  auto* qform = app.add_subcommand("qform", "quadratic forms in normal vectors");
  qform->require_subcommand(1);
  auto* qform_check = qform->add_subcommand("check", "rank criterion for independent chi-squared forms");
  qform_check->add_option("--forms", forms_list, "comma-separated form files")->required();
  qform_check->add_option("--cov", cov_path)->required();
  qform_check->add_option("--mean", mean_path)->required();
  qform_check->add_option("--mc", mc_samples, "Monte Carlo sample count")->check(CLI::NonNegativeNumber);
  qform_check->add_option("--seed", seed);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kHolds;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kHolds;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kHolds;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    out << json{{"error", "UsageError"}, {"message", e.what()}, {"version", kVersion}}.dump() << '\n';
    return kUsage;
  }

  Context ctx{ToleranceConfig{}, compact, out, err};
  if (tol_rank) ctx.tol.rank_rel_tol = *tol_rank;
  if (tol_psd) ctx.tol.psd_tol = *tol_psd;
  if (tol_idem) ctx.tol.idem_tol = *tol_idem;

  std::string command = "unknown";
  try {
    ctx.tol.validate();
    const ToleranceConfig& tol = ctx.tol;

    if (order_check->parsed()) {
      command = "order check";
      const Relation rel = parse_relation(relation_name);
      const auto v = order_leq(rel, io::read_matrix(path_a, err), io::read_matrix(path_b, err), tol);
      return ctx.emit(verdict_json(v), command, v.holds ? kHolds : kFails);
    }
    if (order_minus->parsed()) {
      command = "order minus";
      const MinusMethod method = parse_minus_method(method_name);
      const auto v = minus_leq(io::read_matrix(path_a, err), io::read_matrix(path_b, err), method, tol);
      return ctx.emit(verdict_json(v), command, v.holds ? kHolds : kFails);
    }
    if (canon_inertia->parsed()) {
      command = "canon inertia";
      const SymMatrix a = io::read_matrix(path_a, err);
      const CongruenceForm form = congruence_canonical(a, tol);
      const Inertia in = inertia(a, tol);
      json result{{"n_plus", in.n_plus}, {"n_minus", in.n_minus}, {"n_zero", in.n_zero},
                  {"rank", in.rank()}, {"S", to_json(form.s)}};
      return ctx.emit({{"holds", true}, {"result", result}}, command, kHolds);
    }
    if (canon_simcong->parsed()) {
      command = "canon simcong";
      const PsdMatrix a = PsdMatrix::certify(io::read_matrix(path_a, err), tol);
      const PsdMatrix b = PsdMatrix::certify(io::read_matrix(path_b, err), tol);
      try {
        const SimCongResult r = sim_congruence(a, b, tol);
        if (!out_path.empty()) io::write_matrix(out_path, r.s);
        return ctx.emit({{"holds", true}, {"result", sim_cong_json(r)}}, command, kHolds);
      } catch (const NotMinusComparable& e) {
        err << e.what() << '\n';
        return ctx.emit({{"holds", false},
                         {"error", "NotMinusComparable"},
                         {"rank_triple", to_json(e.ranks())},
                         {"stage", e.stage()},
                         {"message", e.what()}},
                        command, kFails);
      }
    }
    if (pres_verify->parsed()) {
      command = "preserver verify";
      const MatrixMap map = parse_map(map_spec, tol, err);
      PreservationOptions opts{parse_relation(relation_name), map.dim().value_or(dim), seed, trials};
      const PreservationReport r = preserves_order(map, opts, tol);
      json body{{"holds", r.preserves_both()}, {"map", map.name()}, {"dim", opts.n}, {"seed", seed},
                {"result", report_json(r)}};
      return ctx.emit(body, command, r.preserves_both() ? kHolds : kFails);
    }
    if (pres_fit->parsed()) {
      command = "preserver fit";
      const auto pairs = read_samples(samples_dir, err);
      try {
        const Matrix s = fit_congruence(pairs, tol);
        if (!out_path.empty()) io::write_matrix(out_path, s);
        return ctx.emit({{"holds", true}, {"result", {{"S", to_json(s)}, {"pairs", pairs.size()}}}}, command,
                        kHolds);
      } catch (const InconsistentSamples& e) {
        err << e.what() << '\n';
        return ctx.emit({{"holds", false}, {"error", "InconsistentSamples"}, {"message", e.what()}}, command, kFails);
      }
    }
    if (model_cmp->parsed()) {
      command = "model compare";
      const LinearModel l1 = io::read_model(model1, err, tol);
      const LinearModel l2 = io::read_model(model2, err, tol);
      const ComparisonVerdict v = model_compare(l1, l2, tol);
      json result{{"l1_geq_l2", v.l1_geq_l2},
                  {"l2_geq_l1", v.l2_geq_l1},
                  {"form", to_string(v.form)},
                  {"M1", to_json(v.m1.matrix())},
                  {"M2", to_json(v.m2.matrix())},
                  {"m2_below_m1", verdict_json(v.m2_below_m1)},
                  {"m1_below_m2", verdict_json(v.m1_below_m2)}};
      return ctx.emit({{"holds", v.l1_geq_l2}, {"result", result}}, command, v.l1_geq_l2 ? kHolds : kFails);
    }
    if (model_blue->parsed()) {
      command = "model blue";
      const Matrix l = io::read_general_matrix(estimator);
      const LinearModel m = io::read_model(model1, err, tol);
      try {
        const BlueVerdict v = blue_check(l, m, tol);
        json result{{"cond_i", v.cond_i},
                    {"cond_ii", v.cond_ii},
                    {"cond_iii", v.cond_iii},
                    {"unbiasedness_residual", v.unbiasedness_residual},
                    {"cond_iii_detail", v.cond_iii_detail},
                    {"sim_cong", v.sim_cong ? sim_cong_json(*v.sim_cong) : json(nullptr)}};
        return ctx.emit({{"holds", v.is_blue()}, {"result", result}}, command, v.is_blue() ? kHolds : kFails);
      } catch (const PreconditionViolated& e) {
        err << e.what() << '\n';
        return ctx.emit({{"holds", false}, {"error", "PreconditionViolated"}, {"message", e.what()}}, command, kFails);
      }
    }
    if (qform_check->parsed()) {
      command = "qform check";
      std::vector<PsdMatrix> forms;
      for (const auto& f : split_list(forms_list)) forms.push_back(PsdMatrix::certify(io::read_matrix(f, err), tol));
      if (forms.empty()) throw std::invalid_argument("--forms lists no files");
      const PsdMatrix v = PsdMatrix::certify(io::read_matrix(cov_path, err), tol);
      const Vector mu = io::read_vector(mean_path);
      const QFormReport rep = qform_rank_criterion(forms, v, mu, tol);
      json per = json::array();
      for (const auto& e : rep.forms)
        per.push_back({{"rank", e.rank},
                       {"minus", verdict_json(e.minus)},
                       {"sim_cong", e.sim_cong ? sim_cong_json(*e.sim_cong) : json(nullptr)}});
      json result{{"overall", rep.overall}, {"s", rep.s}, {"W", to_json(rep.w)}, {"forms", per}};
      if (mc_samples > 0) {
        const McReport mc = mc_quadratic_forms(forms, v, mu, mc_samples, seed, tol);
        result["monte_carlo"] = {{"samples", mc.samples},
                                 {"seed", seed},
                                 {"max_abs_corr", mc.max_abs_corr},
                                 {"correlation", to_json(mc.correlation)},
                                 {"df", mc.df},
                                 {"ks", mc.ks},
                                 {"mean", mc.mean}};
      }
      return ctx.emit({{"holds", rep.overall}, {"result", result}}, command, rep.overall ? kHolds : kFails);
    }
  } catch (const NonConvergence& e) {
    err << "error: " << e.what() << '\n';
    return ctx.emit({{"error", "NonConvergence"}, {"message", e.what()}}, command, kFails);
  } catch (const std::exception& e) {
    // Unreadable files, malformed input, non-PSD operands, bad option values.
    err << "error: " << e.what() << '\n';
    std::string kind = "UsageError";
    if (dynamic_cast<const ParseError*>(&e)) kind = "ParseError";
    if (dynamic_cast<const IoError*>(&e)) kind = "IoError";
    if (dynamic_cast<const NotPsd*>(&e)) kind = "NotPsd";
    if (dynamic_cast<const DimensionMismatch*>(&e)) kind = "DimensionMismatch";
    return ctx.emit({{"error", kind}, {"message", e.what()}}, command, kUsage);
  }
  err << "usage error: no command given\n";
  return kUsage;
}

}  // namespace psdorder::cli
