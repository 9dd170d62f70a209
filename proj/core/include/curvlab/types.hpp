#pragma once

#include <complex>
#include <functional>

namespace curvlab {

using Complex = std::complex<double>;
using RealFn = std::function<double(Complex)>;
using ComplexFn = std::function<Complex(Complex)>;
using RadialFn = std::function<double(double)>;

}  // namespace curvlab
