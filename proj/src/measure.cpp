#include "polarlab/measure.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace polarlab {

namespace {

bool point_less(const ExtendedPoint& a, const ExtendedPoint& b) {
  if (a.is_infinite()) return false;
  if (b.is_infinite()) return true;
  return a.value() < b.value();
}

// Free Poisson CDF through x = 1 + lambda - 2 sqrt(lambda) cos(phi), where the density
// becomes the smooth integrand 2 lambda sin^2(phi) / (pi x).
double free_poisson_continuous_cdf(double lambda, double x) {
  const double s = std::sqrt(lambda);
  const double lo = (1 - s) * (1 - s), hi = (1 + s) * (1 + s);
  const double mass = std::min(1.0, lambda);
  if (x <= lo) return 0;
  if (x >= hi) return mass;
  const double phi = std::acos(std::clamp((1 + lambda - x) / (2 * s), -1.0, 1.0));
  auto f = [&](double t) {
    const double st = std::sin(t);
    return 2 * lambda * st * st / (std::numbers::pi * (1 + lambda - 2 * s * std::cos(t)));
  };
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, phi, 12, 1e-14);
  return std::clamp(v, 0.0, mass);
}

// CDF of the undecorated law X, right-continuous (left = false) or left limit (left = true).
double base_cdf(const FamilyPart& f, double y, bool left) {
  if (f.kind == FamilyPart::Kind::Cauchy) return 0.5 + std::atan(y) / std::numbers::pi;
  const double lambda = to_double(f.lambda);
  const double atom = lambda < 1 ? 1 - lambda : 0.0;
  double v = free_poisson_continuous_cdf(lambda, y);
  if (y > 0 || (y == 0 && !left)) v += atom;
  return v;
}

double decorated_cdf(const FamilyPart& f, double x, bool left) {
  const double d = to_double(f.dilate), c = to_double(f.shift);
  const double y = (x - c) / d;
  if (d > 0) return base_cdf(f, y, left);
  // P(d X + c <= x) = P(X >= y) for d < 0.
  return 1 - base_cdf(f, y, !left);
}

std::string family_str(const FamilyPart& f) {
  std::string s = f.kind == FamilyPart::Kind::Cauchy ? "Cauchy" : "FreePoisson(" + f.lambda.get_str() + ")";
  if (f.dilate != 1) s = "Dil_" + f.dilate.get_str() + " " + s;
  if (f.shift != 0) s = "Shift_" + f.shift.get_str() + " " + s;
  return s;
}

Rational json_rational(const nlohmann::json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(Integer(std::to_string(v.get<long long>())));
  if (v.is_number()) return from_double(v.get<double>());
  throw std::invalid_argument("expected a number or rational string");
}

}  // namespace

ExtendedMeasure::ExtendedMeasure(std::vector<Atom> atoms, ContinuousPart part)
    : atoms_(std::move(atoms)), part_(std::move(part)) {
  for (auto& a : atoms_) a.weight.canonicalize();
  if (auto* f = std::get_if<FamilyPart>(&part_))
    for (Rational* q : {&f->lambda, &f->shift, &f->dilate}) q->canonicalize();
  std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return point_less(a.at, b.at); });
  Rational total = 0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i].weight <= 0) throw std::invalid_argument("atom weights must be positive");
    if (i > 0 && atoms_[i].at == atoms_[i - 1].at)
      throw std::invalid_argument("repeated atom location " + atoms_[i].at.str());
    total += atoms_[i].weight;
  }
  if (total > 1) throw std::invalid_argument("atom weights exceed total mass 1");
  if (const auto* f = family()) {
    if (f->dilate == 0) throw std::invalid_argument("family dilation must be nonzero");
    if (f->kind == FamilyPart::Kind::FreePoisson && f->lambda <= 0)
      throw std::invalid_argument("free Poisson rate must be positive");
  }
  if (auto* e = std::get_if<EmpiricalPart>(&part_)) {
    if (e->samples.empty()) throw std::invalid_argument("empirical part needs samples");
    for (double x : e->samples)
      if (!std::isfinite(x)) throw std::invalid_argument("empirical samples must be finite");
    std::sort(e->samples.begin(), e->samples.end());
  }
  if (total == 1 && has_part()) part_ = std::monostate{};
  if (total < 1 && !has_part()) throw std::invalid_argument("atom weights sum to less than 1 with no part");
}

ExtendedMeasure ExtendedMeasure::dirac(const ExtendedPoint& at) { return ExtendedMeasure({{at, 1}}, std::monostate{}); }

ExtendedMeasure ExtendedMeasure::of(const FamilyPart& family) { return ExtendedMeasure({}, family); }

ExtendedMeasure ExtendedMeasure::empirical(std::vector<double> samples) {
  return ExtendedMeasure({}, EmpiricalPart{std::move(samples)});
}

Rational ExtendedMeasure::part_weight() const {
  Rational w = 1;
  for (const auto& a : atoms_) w -= a.weight;
  return w;
}

Rational ExtendedMeasure::atom_at(const ExtendedPoint& x) const {
  Rational w = 0;
  for (const auto& a : atoms_)
    if (a.at == x) w += a.weight;
  // A free Poisson law with rate below 1 carries an atom at its shift.
  if (const auto* f = family(); f && f->kind == FamilyPart::Kind::FreePoisson && f->lambda < 1 && x.is_finite() &&
                                x.value() == f->shift)
    w += part_weight() * (1 - f->lambda);
  return w;
}

double ExtendedMeasure::cdf(double x) const {
  double v = 0;
  for (const auto& a : atoms_)
    if (a.at.is_finite() && to_double(a.at.value()) <= x) v += to_double(a.weight);
  const double w = to_double(part_weight());
  if (const auto* f = family()) v += w * decorated_cdf(*f, x, false);
  if (const auto* e = empirical_part()) {
    const auto k = std::upper_bound(e->samples.begin(), e->samples.end(), x) - e->samples.begin();
    v += w * static_cast<double>(k) / static_cast<double>(e->samples.size());
  }
  return v;
}

double ExtendedMeasure::cdf_left(double x) const {
  double v = 0;
  for (const auto& a : atoms_)
    if (a.at.is_finite() && to_double(a.at.value()) < x) v += to_double(a.weight);
  const double w = to_double(part_weight());
  if (const auto* f = family()) v += w * decorated_cdf(*f, x, true);
  if (const auto* e = empirical_part()) {
    const auto k = std::lower_bound(e->samples.begin(), e->samples.end(), x) - e->samples.begin();
    v += w * static_cast<double>(k) / static_cast<double>(e->samples.size());
  }
  return v;
}

double family_cdf(const FamilyPart& f, double x) { return decorated_cdf(f, x, false); }

std::string ExtendedMeasure::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& a : atoms_) {
    if (!first) os << " + ";
    first = false;
    os << a.weight.get_str() << " delta(" << a.at.str() << ")";
  }
  if (has_part()) {
    if (!first) os << " + ";
    os << part_weight().get_str() << " ";
    if (const auto* f = family()) os << family_str(*f);
    else os << "Empirical[" << empirical_part()->samples.size() << " samples]";
  }
  return os.str();
}

bool operator==(const ExtendedMeasure& a, const ExtendedMeasure& b) {
  if (a.atoms_.size() != b.atoms_.size() || a.part_ != b.part_) return false;
  for (std::size_t i = 0; i < a.atoms_.size(); ++i)
    if (!(a.atoms_[i].at == b.atoms_[i].at) || a.atoms_[i].weight != b.atoms_[i].weight) return false;
  return true;
}

void to_json(nlohmann::json& j, const ExtendedMeasure& m) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& a : m.atoms()) atoms.push_back({{"at", a.at.str()}, {"w", to_string(a.weight)}});
  nlohmann::json part;
  if (const auto* f = m.family()) {
    part["kind"] = f->kind == FamilyPart::Kind::Cauchy ? "cauchy" : "free_poisson";
    if (f->kind == FamilyPart::Kind::FreePoisson) part["lambda"] = to_string(f->lambda);
    part["shift"] = to_string(f->shift);
    part["dilate"] = to_string(f->dilate);
  } else if (const auto* e = m.empirical_part()) {
    part["kind"] = "empirical";
    part["samples"] = e->samples;
  } else {
    part["kind"] = "none";
  }
  j = nlohmann::json{{"atoms", std::move(atoms)}, {"part", std::move(part)}};
}

ExtendedMeasure measure_from_json(const nlohmann::json& j) {
  std::vector<Atom> atoms;
  if (j.contains("atoms"))
    for (const auto& a : j.at("atoms")) {
      const auto& at = a.at("at");
      ExtendedPoint p = at.is_string() ? ExtendedPoint::parse(at.get<std::string>()) : ExtendedPoint(json_rational(at));
      atoms.push_back({p, json_rational(a.at("w"))});
    }
  ContinuousPart part;
  if (j.contains("part")) {
    const auto& pj = j.at("part");
    const std::string kind = pj.value("kind", "none");
    if (kind == "free_poisson" || kind == "cauchy") {
      FamilyPart f = kind == "cauchy" ? FamilyPart::cauchy() : FamilyPart::free_poisson(json_rational(pj.at("lambda")));
      if (pj.contains("shift")) f.shift = json_rational(pj.at("shift"));
      if (pj.contains("dilate")) f.dilate = json_rational(pj.at("dilate"));
      part = f;
    } else if (kind == "empirical") {
      part = EmpiricalPart{pj.at("samples").get<std::vector<double>>()};
    } else if (kind != "none") {
      throw std::invalid_argument("unknown measure part kind '" + kind + "'");
    }
  }
  return ExtendedMeasure(std::move(atoms), std::move(part));
}

}  // namespace polarlab
