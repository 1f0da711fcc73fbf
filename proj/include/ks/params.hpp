#pragma once

namespace ks {

/// Model coefficients of u_t = Delta u - chi div(u grad v) + u (a - b u),
/// 0 = Delta v - v + u, posed in `dim` space dimensions.
struct Params {
  double chi = 0.0;
  double a = 1.0;
  double b = 1.0;
  int dim = 1;
};

/// Throws InvalidArgument unless chi >= 0, a >= 0, b > 0 and dim is 1 or 2.
void validate(const Params& p);

}  // namespace ks
