#pragma once

// Pointwise and reduction kernels used by the spectral operators and the
// time stepper. Every kernel exists twice: a plain serial loop kept as the
// reference, and an OpenMP variant used by the library. The test suite checks
// the two against each other and bench/ times them.

#include <complex>
#include <cstddef>
#include <span>

namespace ks::kernels {

using cplx = std::complex<double>;

namespace serial {

void scale(std::span<cplx> c, std::span<const double> m);
void scale_into(std::span<const cplx> in, std::span<const double> m, std::span<cplx> out);
/// out = i * k * in (k carries any extra real multiplier).
void imul_into(std::span<const cplx> in, std::span<const double> k, std::span<cplx> out);
/// acc += i * k * in
void imul_accumulate(std::span<const cplx> in, std::span<const double> k, std::span<cplx> acc);
void product(std::span<const double> a, std::span<const double> b, std::span<double> out);
/// out = growth * u - damping * u^2
void reaction(std::span<const double> u, double growth, double damping, std::span<double> out);
/// out = lin * u0 + phi * f
void etd_predict(std::span<const cplx> u0, std::span<const double> lin, std::span<const double> phi,
                 std::span<const cplx> f, std::span<cplx> out);
/// out = pred + phi * (f_pred - f0)
void etd_correct(std::span<const cplx> pred, std::span<const double> phi, std::span<const cplx> f_pred,
                 std::span<const cplx> f0, std::span<cplx> out);
/// out = alpha * x + beta * y
void combine(double alpha, std::span<const cplx> x, double beta, std::span<const cplx> y, std::span<cplx> out);
void to_complex(std::span<const double> in, std::span<cplx> out);
void real_part(std::span<const cplx> in, double scale, std::span<double> out);

double sum(std::span<const double> x);
double sum_abs_pow(std::span<const double> x, double p);
double max_abs(std::span<const double> x);
double min_value(std::span<const double> x);
double max_value(std::span<const double> x);
bool all_finite(std::span<const double> x);

}  // namespace serial

namespace omp {

void scale(std::span<cplx> c, std::span<const double> m);
void scale_into(std::span<const cplx> in, std::span<const double> m, std::span<cplx> out);
void imul_into(std::span<const cplx> in, std::span<const double> k, std::span<cplx> out);
void imul_accumulate(std::span<const cplx> in, std::span<const double> k, std::span<cplx> acc);
void product(std::span<const double> a, std::span<const double> b, std::span<double> out);
void reaction(std::span<const double> u, double growth, double damping, std::span<double> out);
void etd_predict(std::span<const cplx> u0, std::span<const double> lin, std::span<const double> phi,
                 std::span<const cplx> f, std::span<cplx> out);
void etd_correct(std::span<const cplx> pred, std::span<const double> phi, std::span<const cplx> f_pred,
                 std::span<const cplx> f0, std::span<cplx> out);
void combine(double alpha, std::span<const cplx> x, double beta, std::span<const cplx> y, std::span<cplx> out);
void to_complex(std::span<const double> in, std::span<cplx> out);
void real_part(std::span<const cplx> in, double scale, std::span<double> out);

// Reductions split the range into one contiguous block per thread and
// combine the partials in block order, so results depend only on the
// thread count.
double sum(std::span<const double> x);
double sum_abs_pow(std::span<const double> x, double p);
double max_abs(std::span<const double> x);
double min_value(std::span<const double> x);
double max_value(std::span<const double> x);
bool all_finite(std::span<const double> x);

}  // namespace omp

#ifdef KS_HAVE_OPENMP
namespace active = omp;
#else
namespace active = serial;
#endif

/// Number of worker threads the OpenMP variants will use (1 without OpenMP).
int thread_count();

}  // namespace ks::kernels
