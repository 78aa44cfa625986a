#ifndef MCKEAN_MODEL_HPP
#define MCKEAN_MODEL_HPP

#include <string>
#include <vector>

#include "mckean/polynomial.hpp"

namespace mckean {

/// Outcome of checking a confining potential against the double-well assumptions.
/// `violations` holds one short label per failed assumption, e.g. "V-3: ...".
struct PotentialReport {
  double a = 0.0;
  double theta = 0.0;
  bool ok = false;
  std::vector<std::string> violations;
};

struct InteractionReport {
  double alpha = 0.0;
  int n = 0;
  bool ok = false;
  std::vector<std::string> violations;
};

/// Sufficient condition for outlying invariant measures near +-a:
/// lhs = sum_{p=0}^{2n-2} |F^(p+2)(a)| a^p / p!  <  rhs = alpha + V''(a).
struct ConditionReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

PotentialReport validate_potential(const Poly& V);
InteractionReport validate_interaction(const Poly& F);

/// Validated (V, F) pair with the derived constants. Immutable.
///
/// The moment condition on the initial law that the well-posedness theory needs
/// is not represented: every Gibbs measure built from polynomial data here has
/// all moments finite.
class ModelSpec {
 public:
  /// Throws Error(InvalidModel) listing every violated assumption.
  ModelSpec(EvenPolynomial V, EvenPolynomial F);

  const Poly& V() const { return V_.poly(); }
  const Poly& F() const { return F_.poly(); }
  double a() const { return a_; }
  double theta() const { return theta_; }
  double alpha() const { return alpha_; }
  /// deg F = 2n.
  int n() const { return n_; }
  /// Number of moments parameterizing a candidate measure, 2n-1.
  int moment_count() const { return 2 * n_ - 1; }

 private:
  EvenPolynomial V_;
  EvenPolynomial F_;
  double a_;
  double theta_;
  double alpha_;
  int n_;
};

ConditionReport outlying_condition(const ModelSpec& spec);

/// The reference double well x^4/4 - x^2/2.
Poly quartic_double_well();

/// Raw coefficient lists as read from a model file, before validation.
struct ModelFile {
  std::vector<double> V;
  std::vector<double> F;
};

/// Parse a model document. JSON (`{"V": {"coeffs": [...]}, "F": {...}}`) and a TOML
/// subset (`[V]` tables or dotted `V.coeffs = [...]` keys) are accepted; the format
/// is sniffed from the first non-blank character. Throws Error(ParseError).
ModelFile parse_model_document(const std::string& text);

/// Read and parse a model file. Throws Error(IoError) or Error(ParseError).
ModelFile load_model_file(const std::string& path);

}  // namespace mckean

#endif  // MCKEAN_MODEL_HPP
