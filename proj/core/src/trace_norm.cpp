#include "nlslab/trace_norm.hpp"

#include <Eigen/Dense>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace nlslab {
namespace {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

constexpr double kRankTol = 1e-14;
constexpr double kGramFloor = 1e-14;
// largest coordinate tensor block (entries) built by the orthogonal method
constexpr double kMaxCoordinateEntries = 4e7;
constexpr Eigen::Index kDenseCoreLimit = 1600;

struct Dictionary {
  std::vector<const SpectralField*> fields;
  std::unordered_map<const SpectralField*, int> index;
  std::vector<std::vector<int>> kets, bras;  // per term, per slot
};

Dictionary collect(const FactorizedDensityMatrix& gamma) {
  Dictionary d;
  auto id = [&](const FieldPtr& f) {
    auto [it, inserted] = d.index.emplace(f.get(), static_cast<int>(d.fields.size()));
    if (inserted) d.fields.push_back(f.get());
    return it->second;
  };
  for (const auto& t : gamma.terms()) {
    std::vector<int> k, b;
    for (const auto& f : t.kets) k.push_back(id(f));
    for (const auto& g : t.bras) b.push_back(id(g));
    d.kets.push_back(std::move(k));
    d.bras.push_back(std::move(b));
  }
  return d;
}

Mat factor_matrix(const Dictionary& d, const TorusGeometry& g) {
  const double s = std::sqrt(g.volume());
  Mat v(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(d.fields.size()));
  for (std::size_t c = 0; c < d.fields.size(); ++c) {
    auto coeffs = d.fields[c]->coeffs();
    for (std::size_t i = 0; i < coeffs.size(); ++i) v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = s * coeffs[i];
  }
  return v;
}

// columns pivoted by residual norm, classical Gram-Schmidt with one reorthogonalization pass
Mat orthonormal_basis(const Mat& v, double rel_tol) {
  const Eigen::Index n = v.rows(), p = v.cols();
  Mat residual = v;
  Eigen::VectorXd norms = residual.colwise().norm().transpose();
  const double ref = norms.size() ? norms.maxCoeff() : 0.0;
  Mat q(n, std::min(n, p));
  Eigen::Index r = 0;
  if (ref == 0.0) return q.leftCols(0);
  while (r < q.cols()) {
    Eigen::Index piv;
    const double best = norms.maxCoeff(&piv);
    if (best <= rel_tol * ref) break;
    Vec col = residual.col(piv);
    if (r > 0) col -= q.leftCols(r) * (q.leftCols(r).adjoint() * col);
    const double nrm = col.norm();
    if (nrm <= rel_tol * ref) {
      norms(piv) = 0.0;
      continue;
    }
    q.col(r) = col / nrm;
    residual -= q.col(r) * (q.col(r).adjoint() * residual);
    norms = residual.colwise().norm().transpose();
    ++r;
  }
  return q.leftCols(r);
}

double nuclear_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<Mat> svd(a);
  return svd.singularValues().sum();
}

// columns kron(x[:, idx_1], ..., x[:, idx_k]) for each term
Mat coordinate_tensors(const Mat& x, const std::vector<std::vector<int>>& idx) {
  const Eigen::Index r = x.rows();
  const int k = static_cast<int>(idx.front().size());
  Eigen::Index dim = 1;
  for (int j = 0; j < k; ++j) dim *= r;
  Mat out(dim, static_cast<Eigen::Index>(idx.size()));
  for (std::size_t a = 0; a < idx.size(); ++a) {
    Vec v = x.col(idx[a][0]);
    for (int j = 1; j < k; ++j) {
      Vec next(v.size() * r);
      const auto& col = x.col(idx[a][j]);
      for (Eigen::Index i = 0; i < v.size(); ++i) next.segment(i * r, r) = v(i) * col;
      v = std::move(next);
    }
    out.col(static_cast<Eigen::Index>(a)) = v;
  }
  return out;
}

// rows spanning the same column space as `u`, i.e. R P^T of a rank-revealing QR
Mat reduced_rows(const Mat& u) {
  Eigen::ColPivHouseholderQR<Mat> qr(u);
  qr.setThreshold(kRankTol);
  const Eigen::Index rank = qr.rank();
  Mat r = qr.matrixR().topRows(rank).triangularView<Eigen::Upper>();
  return r * qr.colsPermutation().transpose();
}

bool orthogonal_feasible(const FactorizedDensityMatrix& gamma, Eigen::Index r) {
  double dim = std::pow(static_cast<double>(r), gamma.order());
  return gamma.order() == 1 || dim * static_cast<double>(gamma.rank()) <= kMaxCoordinateEntries;
}

double trace_norm_orthogonal(const FactorizedDensityMatrix& gamma, const Dictionary& d, const Mat& x) {
  Eigen::VectorXcd c(static_cast<Eigen::Index>(gamma.rank()));
  for (std::size_t a = 0; a < gamma.rank(); ++a) c(static_cast<Eigen::Index>(a)) = gamma.terms()[a].coefficient;

  if (gamma.order() == 1) {
    Mat core = Mat::Zero(x.rows(), x.rows());
    for (std::size_t a = 0; a < gamma.rank(); ++a)
      core.noalias() += c(static_cast<Eigen::Index>(a)) * x.col(d.kets[a][0]) * x.col(d.bras[a][0]).adjoint();
    return nuclear_norm(core);
  }
  Mat uk = coordinate_tensors(x, d.kets);
  Mat ub = coordinate_tensors(x, d.bras);
  if (uk.rows() <= kDenseCoreLimit) {
    Mat core = uk * c.asDiagonal() * ub.adjoint();
    return nuclear_norm(core);
  }
  Mat rk = reduced_rows(uk);
  Mat rb = reduced_rows(ub);
  return nuclear_norm(rk * c.asDiagonal() * rb.adjoint());
}

// L with L^H L = K, rows for eigenvalues above the floor
Mat gram_factor(const Mat& k) {
  Eigen::SelfAdjointEigenSolver<Mat> es(k);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double top = ev.size() ? ev.maxCoeff() : 0.0;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > kGramFloor * top) keep.push_back(i);
  Mat l(static_cast<Eigen::Index>(keep.size()), k.cols());
  for (std::size_t i = 0; i < keep.size(); ++i)
    l.row(static_cast<Eigen::Index>(i)) = std::sqrt(ev(keep[i])) * es.eigenvectors().col(keep[i]).adjoint();
  return l;
}

double trace_norm_gram(const FactorizedDensityMatrix& gamma, const Dictionary& d, const Mat& v) {
  const Mat g = v.adjoint() * v;
  const auto rank = static_cast<Eigen::Index>(gamma.rank());
  auto gram = [&](const std::vector<std::vector<int>>& idx) {
    Mat k(rank, rank);
    for (Eigen::Index a = 0; a < rank; ++a)
      for (Eigen::Index b = 0; b <= a; ++b) {
        cplx prod = 1.0;
        for (std::size_t j = 0; j < idx[a].size(); ++j) prod *= g(idx[a][j], idx[b][j]);
        k(a, b) = prod;
        k(b, a) = std::conj(prod);
      }
    return k;
  };
  Mat lk = gram_factor(gram(d.kets));
  Mat lb = gram_factor(gram(d.bras));
  Eigen::VectorXcd c(rank);
  for (Eigen::Index a = 0; a < rank; ++a) c(a) = gamma.terms()[static_cast<std::size_t>(a)].coefficient;
  return nuclear_norm(lk * c.asDiagonal() * lb.adjoint());
}

}  // namespace

std::size_t factor_span_rank(const FactorizedDensityMatrix& gamma) {
  if (gamma.rank() == 0) return 0;
  Dictionary d = collect(gamma);
  return static_cast<std::size_t>(orthonormal_basis(factor_matrix(d, gamma.geometry()), kRankTol).cols());
}

double trace_norm(const FactorizedDensityMatrix& gamma, TraceNormMethod method) {
  if (gamma.rank() == 0) return 0.0;
  Dictionary d = collect(gamma);
  Mat v = factor_matrix(d, gamma.geometry());
  if (method == TraceNormMethod::kGram) return trace_norm_gram(gamma, d, v);

  Mat q = orthonormal_basis(v, kRankTol);
  if (q.cols() == 0) return 0.0;
  if (method == TraceNormMethod::kAuto && !orthogonal_feasible(gamma, q.cols())) return trace_norm_gram(gamma, d, v);
  if (!orthogonal_feasible(gamma, q.cols()))
    throw BudgetExceeded("trace_norm: coordinate tensors of order " + std::to_string(gamma.order()) + " over rank " +
                         std::to_string(q.cols()) + " exceed the memory budget");
  Mat x = q.adjoint() * v;
  return trace_norm_orthogonal(gamma, d, x);
}

}  // namespace nlslab
