#ifndef POLARLAB_LAB_HPP
#define POLARLAB_LAB_HPP

#include "polarlab/rational.hpp"
#include "polarlab/roots.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace polarlab {

/// Invalid experiment configuration; field() names the offending setting.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Empty lists and unset values are filled per experiment by with_defaults().
struct ExperimentConfig {
  std::string experiment;  // thm11, thm12, cauchy-invariance, interlacing, atoms, laguerre-flow, pde-residual
  std::string family;      // free_poisson or cauchy
  std::vector<Rational> lambdas;
  std::vector<ExtendedPoint> poles;
  std::vector<Rational> s_values;
  std::vector<Rational> t_values;
  std::vector<int> ladder;            // polynomial degrees, strictly increasing
  std::vector<Rational> weights;      // atom weights (atoms)
  std::optional<Rational> atom_at;    // atom location b (atoms)
  std::optional<double> tol;          // main gate of the experiment
  std::optional<double> h;            // finite-difference step (pde-residual)
  int instances = 0;                  // interlacing suite size / characteristic draws
  std::uint64_t seed = 7;
  std::string residual_csv;           // optional residual sweep output (pde-residual)
};

struct ResultRecord {
  std::string experiment;
  std::string param;
  std::string metric;
  std::string value;
  bool pass = true;
};

const std::vector<std::string>& experiment_kinds();

/// Copy of cfg with every unset field replaced by the experiment's default.
ExperimentConfig with_defaults(ExperimentConfig cfg);

/// Throws ConfigError on unknown experiments, non-increasing ladders, non-positive tolerances, etc.
void validate(const ExperimentConfig& cfg);

/// Runs the experiment and hands each record to sink in a fixed order. Ladder points run
/// concurrently. An exception leaves the records already emitted with the sink.
void run(const ExperimentConfig& cfg, const std::function<void(const ResultRecord&)>& sink);
std::vector<ResultRecord> run(const ExperimentConfig& cfg);

bool all_pass(const std::vector<ResultRecord>& records);

/// experiment,param,metric,value,pass
void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const ResultRecord& r);
void write_json(std::ostream& os, const std::vector<ResultRecord>& records);

/// Printf-style %.12g.
std::string format_double(double x);

enum class Chart { Linear, Arctan };

struct HistogramBin {
  double lo = 0, hi = 0;  // edges in the chart coordinate (x, or atan x)
  double mass = 0;        // fraction of all roots, infinity included
  double density = 0;     // mass / (hi - lo)
};

struct Histogram {
  std::vector<HistogramBin> bins;
  double at_infinity = 0;  // mass of the roots at infinity
};

/// Root histogram over `bins` equal bins. The linear chart spans the finite roots (scaled by
/// `scale`); the arctan chart spans (-pi/2, pi/2] and folds the mass at infinity into the last bin.
Histogram emit_histogram(const RootProfile& profile, int bins, Chart chart, double scale = 1);

/// bin,lo,hi,mass,density rows followed by an at_infinity row when that mass is positive.
void write_histogram_csv(std::ostream& os, const Histogram& h);

}  // namespace polarlab

#endif  // POLARLAB_LAB_HPP
