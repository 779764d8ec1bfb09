#ifndef POLARLAB_MEASURE_HPP
#define POLARLAB_MEASURE_HPP

#include "polarlab/rational.hpp"

#include "json.hpp"

#include <string>
#include <variant>
#include <vector>

namespace polarlab {

struct Atom {
  ExtendedPoint at;
  Rational weight;
};

/// Law of dilate * X + shift, where X is free Poisson with rate lambda or standard Cauchy.
struct FamilyPart {
  enum class Kind { FreePoisson, Cauchy };
  Kind kind = Kind::Cauchy;
  Rational lambda = 1;  // ignored for Cauchy
  Rational shift = 0;
  Rational dilate = 1;

  static FamilyPart free_poisson(const Rational& lambda) { return {Kind::FreePoisson, lambda, 0, 1}; }
  static FamilyPart cauchy() { return {Kind::Cauchy, 1, 0, 1}; }

  friend bool operator==(const FamilyPart&, const FamilyPart&) = default;
};

/// Equal-weight samples, kept sorted.
struct EmpiricalPart {
  std::vector<double> samples;
  friend bool operator==(const EmpiricalPart&, const EmpiricalPart&) = default;
};

using ContinuousPart = std::variant<std::monostate, FamilyPart, EmpiricalPart>;

/// Probability measure on the extended real line: weighted atoms (infinity allowed) plus
/// at most one non-atomic or sample part carrying the remaining mass.
class ExtendedMeasure {
 public:
  /// Throws std::invalid_argument when weights are not positive, locations repeat, the
  /// atoms exceed mass 1, or the leftover mass has no part to carry it.
  ExtendedMeasure(std::vector<Atom> atoms, ContinuousPart part);

  static ExtendedMeasure dirac(const ExtendedPoint& at);
  static ExtendedMeasure of(const FamilyPart& family);
  static ExtendedMeasure free_poisson(const Rational& lambda) { return of(FamilyPart::free_poisson(lambda)); }
  static ExtendedMeasure cauchy() { return of(FamilyPart::cauchy()); }
  static ExtendedMeasure empirical(std::vector<double> samples);

  /// Finite atoms ascending, the atom at infinity (if any) last.
  const std::vector<Atom>& atoms() const { return atoms_; }
  const ContinuousPart& part() const { return part_; }
  bool has_part() const { return !std::holds_alternative<std::monostate>(part_); }
  const FamilyPart* family() const { return std::get_if<FamilyPart>(&part_); }
  const EmpiricalPart* empirical_part() const { return std::get_if<EmpiricalPart>(&part_); }

  /// Mass carried by the part, 1 - sum of atom weights.
  Rational part_weight() const;
  /// Atom weight at a point (0 when there is no atom there).
  Rational atom_at(const ExtendedPoint& x) const;
  Rational infinity_mass() const { return atom_at(ExtendedPoint::infinity()); }

  /// F(x) = mu((-inf, x]) and mu((-inf, x)); infinity is never included.
  double cdf(double x) const;
  double cdf_left(double x) const;

  std::string str() const;

  friend bool operator==(const ExtendedMeasure&, const ExtendedMeasure&);

 private:
  std::vector<Atom> atoms_;
  ContinuousPart part_;
};

/// CDF of a free Poisson / Cauchy family part (no decoration handling beyond shift/dilate).
double family_cdf(const FamilyPart& f, double x);

void to_json(nlohmann::json& j, const ExtendedMeasure& m);
ExtendedMeasure measure_from_json(const nlohmann::json& j);

}  // namespace polarlab

#endif  // POLARLAB_MEASURE_HPP
