#include "nlslab/density_matrix.hpp"

#include <cmath>
#include <map>
#include <string>
#include <tuple>

namespace nlslab {

FactorizedDensityMatrix::FactorizedDensityMatrix(TorusGeometry geometry, int order)
    : geometry_(std::move(geometry)), order_(order) {
  if (order < 1) throw std::invalid_argument("FactorizedDensityMatrix: order must be >= 1");
}

void FactorizedDensityMatrix::add_term(FactorizedTerm term) {
  if (static_cast<int>(term.kets.size()) != order_ || static_cast<int>(term.bras.size()) != order_)
    throw std::invalid_argument("FactorizedDensityMatrix: term has the wrong number of factors");
  for (const auto* side : {&term.kets, &term.bras})
    for (const auto& f : *side) {
      if (!f) throw std::invalid_argument("FactorizedDensityMatrix: null factor");
      require_same_geometry(geometry_, f->geometry(), "FactorizedDensityMatrix");
    }
  terms_.push_back(std::move(term));
}

void FactorizedDensityMatrix::append(const FactorizedDensityMatrix& other, cplx scale) {
  if (other.order_ != order_) throw std::invalid_argument("FactorizedDensityMatrix: order mismatch in append");
  require_same_geometry(geometry_, other.geometry_, "FactorizedDensityMatrix append");
  terms_.reserve(terms_.size() + other.terms_.size());
  for (const auto& t : other.terms_) terms_.push_back({scale * t.coefficient, t.kets, t.bras});
}

cplx FactorizedDensityMatrix::kernel(std::span<const std::size_t> x, std::span<const std::size_t> xp) const {
  if (static_cast<int>(x.size()) != order_ || static_cast<int>(xp.size()) != order_)
    throw std::invalid_argument("kernel: need one point per slot");
  std::map<const SpectralField*, std::vector<cplx>> samples;
  auto sample = [&](const FieldPtr& f, std::size_t i) {
    auto it = samples.find(f.get());
    if (it == samples.end()) it = samples.emplace(f.get(), to_samples(*f)).first;
    return it->second.at(i);
  };
  cplx acc{};
  for (const auto& t : terms_) {
    cplx v = t.coefficient;
    for (int j = 0; j < order_; ++j) v *= sample(t.kets[j], x[j]) * std::conj(sample(t.bras[j], xp[j]));
    acc += v;
  }
  return acc;
}

namespace {

bool same_field(const FieldPtr& a, const FieldPtr& b, double tol) {
  return a == b || max_abs_diff(*a, *b) <= tol;
}

bool closed_under_swap(const std::vector<FactorizedTerm>& terms, double sign, double tol) {
  for (const auto& t : terms) {
    bool found = false;
    for (const auto& u : terms) {
      if (std::abs(u.coefficient - sign * std::conj(t.coefficient)) > tol * std::max(1.0, std::abs(t.coefficient)))
        continue;
      bool match = true;
      for (std::size_t j = 0; match && j < t.kets.size(); ++j)
        match = same_field(u.kets[j], t.bras[j], tol) && same_field(u.bras[j], t.kets[j], tol);
      if (match) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

bool FactorizedDensityMatrix::is_hermitian(double tol) const { return closed_under_swap(terms_, 1.0, tol); }
bool FactorizedDensityMatrix::is_anti_hermitian(double tol) const { return closed_under_swap(terms_, -1.0, tol); }

FactorizedDensityMatrix tensor_power(const FieldPtr& phi, int k) {
  if (k < 1) throw std::invalid_argument("tensor_power: k must be >= 1");
  FactorizedDensityMatrix out(phi->geometry(), k);
  out.add_term({1.0, std::vector<FieldPtr>(k, phi), std::vector<FieldPtr>(k, phi)});
  return out;
}

FactorizedDensityMatrix tensor_power(const SpectralField& phi, int k) { return tensor_power(share(phi), k); }

namespace {

// a * b * conj(c), memoized on factor identity
class ProductCache {
 public:
  FieldPtr get(const FieldPtr& a, const FieldPtr& b, const FieldPtr& c) {
    auto key = std::make_tuple(a.get(), b.get(), c.get());
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Factor fs[] = {{a.get(), false}, {b.get(), false}, {c.get(), true}};
    FieldPtr p = share(multiply(fs));
    keep_.push_back(a);
    keep_.push_back(b);
    keep_.push_back(c);
    cache_.emplace(key, p);
    return p;
  }

 private:
  std::map<std::tuple<const SpectralField*, const SpectralField*, const SpectralField*>, FieldPtr> cache_;
  std::vector<FieldPtr> keep_;
};

void check_budget(std::size_t terms, std::size_t budget, const char* what) {
  if (terms > budget)
    throw BudgetExceeded(std::string(what) + ": " + std::to_string(terms) + " terms exceed the rank budget of " +
                         std::to_string(budget));
}

void collide(const FactorizedDensityMatrix& gamma, int j, ProductCache& cache, FactorizedDensityMatrix& out) {
  const int k = gamma.order() - 1;
  for (const auto& t : gamma.terms()) {
    const FieldPtr& fk = t.kets[k];
    const FieldPtr& gk = t.bras[k];
    std::vector<FieldPtr> kets(t.kets.begin(), t.kets.begin() + k);
    std::vector<FieldPtr> bras(t.bras.begin(), t.bras.begin() + k);

    auto kets1 = kets;
    kets1[j - 1] = cache.get(t.kets[j - 1], fk, gk);
    out.add_term({t.coefficient, std::move(kets1), bras});

    auto bras2 = bras;
    bras2[j - 1] = cache.get(t.bras[j - 1], gk, fk);
    out.add_term({-t.coefficient, std::move(kets), std::move(bras2)});
  }
}

}  // namespace

FactorizedDensityMatrix collision_single(const FactorizedDensityMatrix& gamma, int j, std::size_t rank_budget) {
  const int k = gamma.order() - 1;
  if (k < 1) throw std::invalid_argument("collision_single: input order must be >= 2");
  if (j < 1 || j > k)
    throw std::invalid_argument("collision_single: j=" + std::to_string(j) + " outside 1.." + std::to_string(k));
  check_budget(2 * gamma.rank(), rank_budget, "collision_single");
  FactorizedDensityMatrix out(gamma.geometry(), k);
  out.reserve(2 * gamma.rank());
  ProductCache cache;
  collide(gamma, j, cache, out);
  return out;
}

FactorizedDensityMatrix collision_full(const FactorizedDensityMatrix& gamma, std::size_t rank_budget) {
  const int k = gamma.order() - 1;
  if (k < 1) throw std::invalid_argument("collision_full: input order must be >= 2");
  check_budget(2 * static_cast<std::size_t>(k) * gamma.rank(), rank_budget, "collision_full");
  FactorizedDensityMatrix out(gamma.geometry(), k);
  out.reserve(2 * static_cast<std::size_t>(k) * gamma.rank());
  ProductCache cache;
  for (int j = 1; j <= k; ++j) collide(gamma, j, cache, out);
  return out;
}

namespace {

template <class Map>
FactorizedDensityMatrix map_factors(const FactorizedDensityMatrix& gamma, Map&& fn) {
  std::map<const SpectralField*, FieldPtr> memo;
  auto get = [&](const FieldPtr& f) {
    auto it = memo.find(f.get());
    if (it != memo.end()) return it->second;
    FieldPtr g = share(fn(*f));
    memo.emplace(f.get(), g);
    return g;
  };
  FactorizedDensityMatrix out(gamma.geometry(), gamma.order());
  out.reserve(gamma.rank());
  for (const auto& t : gamma.terms()) {
    FactorizedTerm u{t.coefficient, {}, {}};
    for (const auto& f : t.kets) u.kets.push_back(get(f));
    for (const auto& g : t.bras) u.bras.push_back(get(g));
    out.add_term(std::move(u));
  }
  return out;
}

}  // namespace

FactorizedDensityMatrix hierarchy_free_evolve(const FactorizedDensityMatrix& gamma, double t) {
  if (t == 0.0) return gamma;
  return map_factors(gamma, [t](const SpectralField& f) { return free_evolve(f, t); });
}

FactorizedDensityMatrix apply_sobolev_op(const FactorizedDensityMatrix& gamma, double alpha,
                                         SobolevConvention convention) {
  if (alpha == 0.0) return gamma;
  if (convention == SobolevConvention::kEigenvalue)
    return map_factors(gamma, [alpha](const SpectralField& f) {
      return fourier_multiplier(f, [alpha](double l) { return std::pow(1.0 + l * l, 0.25 * alpha); });
    });
  return map_factors(gamma, [alpha](const SpectralField& f) {
    return fourier_multiplier(f, [alpha](double l) { return std::pow(1.0 + l, 0.5 * alpha); });
  });
}

}  // namespace nlslab
