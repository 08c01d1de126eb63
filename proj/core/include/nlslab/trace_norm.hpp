#pragma once

#include "nlslab/density_matrix.hpp"

namespace nlslab {

enum class TraceNormMethod {
  kAuto,
  // orthonormal basis of the factor span, then an exact nuclear norm in coordinates
  kOrthogonal,
  // Gram matrices of kets and bras, eigenvalues floored at 1e-14 of the largest
  kGram,
};

double trace_norm(const FactorizedDensityMatrix& gamma, TraceNormMethod method = TraceNormMethod::kAuto);

// numerical rank of the span of all distinct factors
std::size_t factor_span_rank(const FactorizedDensityMatrix& gamma);

}  // namespace nlslab
