#pragma once

#include <optional>
#include <string>

#include "minorb/dense_operator.hpp"

namespace minorb {

/// Analytic tail descriptor of a diagonal entry sequence.
///
/// finite_support(n): entries vanish beyond index n.
/// single_limit: entries approach one limit geometrically.
/// two_limits: even and odd subsequences approach distinct limits.
struct TailDescriptor {
  enum class Kind { finite_support, single_limit, two_limits };
  Kind kind = Kind::finite_support;
  int support = 0;          // finite_support
  double limit = 0.0;       // single_limit
  double limit_even = 0.0;  // two_limits
  double limit_odd = 0.0;   // two_limits
  // Geometric bound |v_k - limit| <= bound_c * bound_q^k recorded by the
  // constructors; zero when not applicable.
  double bound_c = 0.0;
  double bound_q = 0.0;

  static TailDescriptor finite(int n) {
    TailDescriptor t;
    t.kind = Kind::finite_support;
    t.support = n;
    return t;
  }
  static TailDescriptor single(double lim, double c, double q) {
    TailDescriptor t;
    t.kind = Kind::single_limit;
    t.limit = lim;
    t.bound_c = c;
    t.bound_q = q;
    return t;
  }
  static TailDescriptor two(double even, double odd, double c, double q) {
    TailDescriptor t;
    t.kind = Kind::two_limits;
    t.limit_even = even;
    t.limit_odd = odd;
    t.bound_c = c;
    t.bound_q = q;
    return t;
  }
};

std::string to_string(TailDescriptor::Kind k);

/// Real diagonal sequence standing for the imaginary parts of an
/// anti-Hermitian diagonal operator i * Diag(values).
struct DiagonalSeq {
  RealVector values;
  TailDescriptor tail;

  int dim() const { return static_cast<int>(values.size()); }
  DenseOperator as_operator() const {
    return DenseOperator::diagonal_imaginary(values);
  }
};

}  // namespace minorb
