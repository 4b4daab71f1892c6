#include "hslab/params.hpp"

#include <cmath>
#include <sstream>

namespace hslab {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << "parameter " << name << " is not finite";
    throw ConstraintViolation(os.str());
  }
}

}  // namespace

FractionalParams make_params(int N, double s, double p, double alpha) {
  require_finite(s, "s");
  require_finite(p, "p");
  require_finite(alpha, "alpha");
  if (N < 1) throw ConstraintViolation("dimension N must be a positive integer");
  if (!(p > 1.0)) throw ConstraintViolation("constraint p > 1 fails");
  if (!(s > 0.0 && s < 1.0)) throw ConstraintViolation("constraint 0 < s < 1 fails");
  if (!(alpha >= 0.0)) throw ConstraintViolation("constraint alpha >= 0 fails");
  if (!(alpha < p * s)) throw ConstraintViolation("constraint alpha < p*s fails");
  if (!(p * s < static_cast<double>(N))) throw ConstraintViolation("constraint p*s < N fails");

  FractionalParams out;
  out.dim = N;
  out.s = s;
  out.p = p;
  out.alpha = alpha;
  out.r = p * (N - alpha) / (N - p * s);
  return out;
}

FractionalParams make_local_params(int N, double p, double alpha) {
  require_finite(p, "p");
  require_finite(alpha, "alpha");
  if (N < 1) throw ConstraintViolation("dimension N must be a positive integer");
  if (!(p > 1.0)) throw ConstraintViolation("constraint p > 1 fails");
  if (!(alpha >= 0.0)) throw ConstraintViolation("constraint alpha >= 0 fails");
  if (!(alpha < p)) throw ConstraintViolation("constraint alpha < p fails (s = 1)");
  if (!(p < static_cast<double>(N))) throw ConstraintViolation("constraint p < N fails (s = 1)");

  FractionalParams out;
  out.dim = N;
  out.s = 1.0;
  out.p = p;
  out.alpha = alpha;
  out.r = p * (N - alpha) / (N - p);
  return out;
}

}  // namespace hslab
