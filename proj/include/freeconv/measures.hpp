#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace freeconv {

struct Atom {
  double x;
  double w;
  bool operator==(const Atom&) const = default;
};

/// A probability measure on the real line: either finitely supported
/// (atoms sorted by position with positive weights summing to one) or a
/// centred semicircle law of given variance.
///
/// Measures are immutable values; all invariants are checked by the
/// factories, so downstream code never re-validates them.
class Measure {
 public:
  enum class Kind { Atomic, Semicircle };

  /// Atoms at identical positions are merged. Throws DomainError on
  /// nonpositive or non-finite weights, or weights not summing to 1 within 1e-12.
  static Measure atomic(std::vector<Atom> atoms);
  static Measure dirac(double x);
  /// Semicircle law with mean 0 and the given variance (> 0).
  static Measure semicircle(double variance);

  /// Symmetric two-point law 1/2 (delta_{-1} + delta_{1}).
  static Measure bernoulli();
  /// Standardized two-point law: sqrt(q/p) with weight p, -sqrt(p/q) with weight q.
  static Measure binomial(double p);

  Kind kind() const noexcept { return kind_; }
  bool is_atomic() const noexcept { return kind_ == Kind::Atomic; }
  std::span<const Atom> atoms() const noexcept { return atoms_; }
  /// Variance parameter of a semicircle measure (0 for atomic ones).
  double semicircle_variance() const noexcept { return variance_; }

  /// Smallest L with supp in [-L, L]; 2*sqrt(c) for Semicircle(c).
  double support_radius() const noexcept;

  bool operator==(const Measure&) const = default;

 private:
  Measure() = default;
  Kind kind_ = Kind::Atomic;
  std::vector<Atom> atoms_;
  double variance_ = 0.0;
};

struct MomentSummary {
  double mean = 0.0;
  double variance = 0.0;
  std::vector<double> moments;      // m_1..m_K
  std::vector<double> abs_moments;  // beta_1..beta_K
  double support_radius = 0.0;
};

double moment(const Measure& mu, int k);
double abs_moment(const Measure& mu, int k);
MomentSummary summarize(const Measure& mu, int max_order);
double mean(const Measure& mu);
double variance(const Measure& mu);

/// Pushforward under x -> c x for c > 0.
Measure dilate(const Measure& mu, double c);
/// Pushforward under x -> c x for any real c (c < 0 reflects, c = 0 gives delta_0).
Measure scale(const Measure& mu, double c);
/// Pushforward under x -> x + t. Semicircle measures only accept t = 0.
Measure shift(const Measure& mu, double t);
/// Shift to mean 0 and dilate to variance 1. Throws DegenerateMeasureError.
Measure standardize(const Measure& mu);

/// Distribution function of mu at x (right-continuous) and its left limit.
double cdf(const Measure& mu, double x);
double cdf_left(const Measure& mu, double x);

/// Standard (variance one) semicircle law on [-2, 2].
double semicircle_density(double x);
double semicircle_cdf(double x);

/// Catalan number C_k as a double (exact for k <= 30).
double catalan(int k);

}  // namespace freeconv
