#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <vector>

#include "nlslab/torus.hpp"

namespace nlslab {

using FieldPtr = std::shared_ptr<const SpectralField>;

inline FieldPtr share(SpectralField f) { return std::make_shared<const SpectralField>(std::move(f)); }

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultRankBudget = 4096;

// c * f_1(x_1)...f_k(x_k) * conj(g_1(x'_1))...conj(g_k(x'_k))
struct FactorizedTerm {
  cplx coefficient;
  std::vector<FieldPtr> kets;
  std::vector<FieldPtr> bras;
};

// Order-k density matrix stored as a sum of factorized terms. Factors are shared and immutable,
// so identical factors keep pointer identity through the operations below.
class FactorizedDensityMatrix {
 public:
  FactorizedDensityMatrix(TorusGeometry geometry, int order);

  int order() const { return order_; }
  const TorusGeometry& geometry() const { return geometry_; }
  const std::vector<FactorizedTerm>& terms() const { return terms_; }
  std::size_t rank() const { return terms_.size(); }

  void add_term(FactorizedTerm term);
  void append(const FactorizedDensityMatrix& other, cplx scale = 1.0);
  void reserve(std::size_t n) { terms_.reserve(n); }

  // kernel value at sample points; x and xp hold flat sample indices, one per slot
  cplx kernel(std::span<const std::size_t> x, std::span<const std::size_t> xp) const;

  // term list closed under (c, F, G) -> (conj c, G, F), or (-conj c, G, F) for anti-Hermitian
  bool is_hermitian(double tol = 1e-12) const;
  bool is_anti_hermitian(double tol = 1e-12) const;

 private:
  TorusGeometry geometry_;
  int order_;
  std::vector<FactorizedTerm> terms_;
};

FactorizedDensityMatrix tensor_power(const SpectralField& phi, int k);
FactorizedDensityMatrix tensor_power(const FieldPtr& phi, int k);

// B_{j,k+1} with 1-based j
FactorizedDensityMatrix collision_single(const FactorizedDensityMatrix& gamma, int j,
                                         std::size_t rank_budget = kDefaultRankBudget);
FactorizedDensityMatrix collision_full(const FactorizedDensityMatrix& gamma,
                                       std::size_t rank_budget = kDefaultRankBudget);

FactorizedDensityMatrix hierarchy_free_evolve(const FactorizedDensityMatrix& gamma, double t);

enum class SobolevConvention {
  kEigenvalue,  // <|xi|^2>^{alpha/2}, the weight of sobolev_norm
  kFrequency,   // <xi>^{alpha}
};

FactorizedDensityMatrix apply_sobolev_op(const FactorizedDensityMatrix& gamma, double alpha,
                                         SobolevConvention convention = SobolevConvention::kEigenvalue);

}  // namespace nlslab
