#include "polarlab/lab.hpp"
#include "polarlab/polynomial.hpp"
#include "polarlab/roots.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>

using namespace polarlab;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Where a command gets its polynomial: a JSON file or one of the built-in families.
struct PolySource {
  std::string file;
  std::string family;
  int n = 0;
  std::string lambda = "2";
  std::vector<std::string> upper, lower;
  int k = 0;
  std::string dilate, shift;

  void attach(CLI::App* app) {
    app->add_option("--poly", file, "polynomial JSON file ('-' for stdin)");
    app->add_option("--family", family, "laguerre, hypergeometric, cosine or q");
    app->add_option("--n", n, "degree of the family polynomial");
    app->add_option("--lambda", lambda, "Laguerre parameter");
    app->add_option("--upper", upper, "hypergeometric upper parameters")->delimiter(',');
    app->add_option("--lower", lower, "hypergeometric lower parameters")->delimiter(',');
    app->add_option("--k", k, "k of the q polynomial");
    app->add_option("--dilate", dilate, "multiply the roots by this rational");
    app->add_option("--shift", shift, "add this rational to the roots");
  }

  FormalPolynomial build() const {
    FormalPolynomial p = FormalPolynomial::zero(0);
    if (!file.empty()) {
      nlohmann::json j;
      if (file == "-") {
        std::cin >> j;
      } else {
        std::ifstream in(file);
        if (!in) throw UsageError("--poly: cannot read " + file);
        in >> j;
      }
      p = polynomial_from_json(j);
    } else if (family.empty()) {
      throw UsageError("give --poly or --family");
    } else if (n < 1) {
      throw UsageError("--n: family degree must be >= 1");
    } else if (family == "laguerre") {
      p = laguerre(n, parse_rational(lambda));
    } else if (family == "hypergeometric") {
      std::vector<Rational> up, lo;
      for (const auto& s : upper) up.push_back(parse_rational(s));
      for (const auto& s : lower) lo.push_back(parse_rational(s));
      p = hypergeometric(n, up, lo);
    } else if (family == "cosine") {
      p = cosine_appell(n);
    } else if (family == "q") {
      p = q_polynomial(n, k);
    } else {
      throw UsageError("--family: unknown polynomial family '" + family + "'");
    }
    if (!dilate.empty()) p = polarlab::dilate(p, parse_rational(dilate));
    if (!shift.empty()) p = polarlab::shift(p, parse_rational(shift));
    return p;
  }
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw UsageError("--out: cannot write " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

// CLI11 only reads config files on the top-level app, so `run --config FILE` is expanded here into
// the equivalent flags. Keys may sit at the top level or under [run]; flags on the command line win.
std::vector<std::string> expand_run_config(std::vector<std::string> args) {
  if (args.size() < 2 || args[1] != "run") return args;
  std::string path;
  std::size_t at = 0, len = 0;
  for (std::size_t i = 2; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1], at = i, len = 2;
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9), at = i, len = 1;
      break;
    }
  }
  if (len == 0) return args;
  args.erase(args.begin() + at, args.begin() + at + len);

  auto given = [&](const std::string& flag) {
    for (std::size_t i = 2; i < args.size(); ++i)
      if (args[i] == flag || args[i].rfind(flag + "=", 0) == 0) return true;
    return false;
  };
  std::vector<std::string> extra;
  for (const auto& item : CLI::ConfigTOML().from_file(path)) {
    if (item.name == "++" || item.name == "--") continue;
    if (!item.parents.empty() && item.parents != std::vector<std::string>{"run"})
      throw UsageError("--config: unexpected section in key '" + item.fullname() + "'");
    const std::string flag = "--" + item.name;
    if (given(flag) || item.inputs.empty()) continue;
    std::string joined;
    for (const auto& v : item.inputs) joined += (joined.empty() ? "" : ",") + v;
    extra.push_back(flag);
    extra.push_back(joined);
  }
  args.insert(args.begin() + 2, extra.begin(), extra.end());
  return args;
}

std::vector<Rational> parse_list(const std::vector<std::string>& xs) {
  std::vector<Rational> v;
  for (const auto& x : xs) v.push_back(parse_rational(x));
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polarlab: polar derivatives, root distributions and polar free powers", "polarlab"};
  app.require_subcommand(1);

  // derive
  PolySource derive_src;
  std::string derive_pole = "inf", derive_out;
  int derive_times = -1, derive_to = -1;
  auto* derive = app.add_subcommand("derive", "apply repeated polar derivatives");
  derive_src.attach(derive);
  derive->add_option("--pole", derive_pole, "pole a (rational or inf)");
  auto* times_opt = derive->add_option("--times", derive_times, "number of derivatives");
  derive->add_option("--to-degree", derive_to, "target formal degree")->excludes(times_opt);
  derive->add_option("--out", derive_out, "output file (default stdout)");

  // roots
  PolySource roots_src;
  std::string roots_tol = "1/1073741824", roots_format = "json", roots_out;
  auto* roots = app.add_subcommand("roots", "isolate real roots");
  roots_src.attach(roots);
  roots->add_option("--tol", roots_tol, "root interval width bound (rational)");
  roots->add_option("--format", roots_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  roots->add_option("--out", roots_out, "output file (default stdout)");

  // hist
  PolySource hist_src;
  std::string hist_roots, hist_chart = "linear", hist_scale = "1", hist_out;
  int hist_bins = 32;
  auto* hist = app.add_subcommand("hist", "histogram of a root profile");
  hist_src.attach(hist);
  hist->add_option("--roots", hist_roots, "root profile JSON from 'roots'");
  hist->add_option("--bins", hist_bins, "number of bins")->check(CLI::PositiveNumber);
  hist->add_option("--chart", hist_chart, "linear or arctan")->check(CLI::IsMember({"linear", "arctan"}));
  hist->add_option("--scale", hist_scale, "multiply roots by this factor before binning");
  hist->add_option("--out", hist_out, "output file (default stdout)");

  // run
  ExperimentConfig cfg;
  std::vector<std::string> lambdas, poles, s_values, t_values, weights;
  std::string atom, format = "csv", run_out;
  double tol = 0, h = 0;
  auto* run_cmd = app.add_subcommand("run", "run an experiment and write result records");
  std::string config_file;
  run_cmd->add_option("--config", config_file, "TOML or key=value file with the same keys as the flags");
  run_cmd->add_option("--experiment", cfg.experiment, "experiment kind")->required();
  run_cmd->add_option("--family", cfg.family, "free_poisson or cauchy");
  run_cmd->add_option("--lambda", lambdas, "family rates")->delimiter(',');
  run_cmd->add_option("--pole", poles, "poles a (rational or inf)")->delimiter(',');
  run_cmd->add_option("--s", s_values, "powers s")->delimiter(',');
  run_cmd->add_option("--t", t_values, "powers t")->delimiter(',');
  run_cmd->add_option("--ladder", cfg.ladder, "degree ladder")->delimiter(',');
  run_cmd->add_option("--weights", weights, "atom weights (atoms)")->delimiter(',');
  run_cmd->add_option("--atom", atom, "atom location b (atoms)");
  auto* tol_opt = run_cmd->add_option("--tol", tol, "main tolerance gate");
  auto* h_opt = run_cmd->add_option("--step", h, "finite-difference step (pde-residual)");
  run_cmd->add_option("--instances", cfg.instances, "suite size or number of random draws");
  run_cmd->add_option("--seed", cfg.seed, "random seed");
  run_cmd->add_option("--residual-csv", cfg.residual_csv, "residual sweep CSV (pde-residual)");
  run_cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  run_cmd->add_option("--out", run_out, "output file (default stdout)");

  try {
    std::vector<std::string> args = expand_run_config(std::vector<std::string>(argv, argv + argc));
    std::reverse(args.begin() + 1, args.end());
    args.erase(args.begin());
    app.parse(args);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (derive->parsed()) {
      const FormalPolynomial p = derive_src.build();
      const ExtendedPoint a = ExtendedPoint::parse(derive_pole);
      int target = p.formal_degree() - 1;
      if (derive_times >= 0) target = p.formal_degree() - derive_times;
      if (derive_to >= 0) target = derive_to;
      if (target < 0 || target > p.formal_degree()) throw UsageError("--times/--to-degree: target degree out of range");
      Output out(derive_out);
      nlohmann::json j = polar_derivative_iter(p, a, target);
      out.stream() << j.dump() << '\n';
      return kExitPass;
    }
    if (roots->parsed()) {
      const RootProfile r = isolate_roots(roots_src.build(), parse_rational(roots_tol));
      Output out(roots_out);
      if (roots_format == "json") {
        out.stream() << nlohmann::json(r).dump(2) << '\n';
      } else {
        out.stream() << "lo,hi,mult\n";
        for (const auto& iv : r.roots) out.stream() << to_string(iv.lo) << ',' << to_string(iv.hi) << ',' << iv.multiplicity << '\n';
        if (r.at_infinity > 0) out.stream() << "inf,inf," << r.at_infinity << '\n';
      }
      return kExitPass;
    }
    if (hist->parsed()) {
      RootProfile r;
      if (!hist_roots.empty()) {
        std::ifstream in(hist_roots);
        if (!in) throw UsageError("--roots: cannot read " + hist_roots);
        r = root_profile_from_json(nlohmann::json::parse(in));
      } else {
        r = isolate_roots(hist_src.build(), Rational(1, Integer(1) << 30));
      }
      const Histogram hg = emit_histogram(r, hist_bins, hist_chart == "arctan" ? Chart::Arctan : Chart::Linear,
                                          to_double(parse_rational(hist_scale)));
      Output out(hist_out);
      write_histogram_csv(out.stream(), hg);
      return kExitPass;
    }

    cfg.lambdas = parse_list(lambdas);
    cfg.s_values = parse_list(s_values);
    cfg.t_values = parse_list(t_values);
    cfg.weights = parse_list(weights);
    for (const auto& p : poles) cfg.poles.push_back(ExtendedPoint::parse(p));
    if (!atom.empty()) cfg.atom_at = parse_rational(atom);
    if (tol_opt->count() > 0) cfg.tol = tol;
    if (h_opt->count() > 0) cfg.h = h;
    validate(with_defaults(cfg));

    Output out(run_out);
    std::ostream& os = out.stream();
    std::vector<ResultRecord> records;
    bool pass = true;
    if (format == "csv") write_csv_header(os);
    try {
      run(cfg, [&](const ResultRecord& r) {
        pass = pass && r.pass;
        if (format == "csv") {
          write_csv_row(os, r);
          os.flush();
        } else {
          records.push_back(r);
        }
      });
    } catch (...) {
      if (format == "json") write_json(os, records);
      throw;
    }
    if (format == "json") write_json(os, records);
    return pass ? kExitPass : kExitFail;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
}
