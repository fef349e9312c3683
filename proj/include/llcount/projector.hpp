#pragma once

// Dense projectors on qudit supports. Every dimension, rank and trace is
// normalized by d^|support| of the operator it refers to, so the full space
// has dimension 1.
//
// Tensor layout: the qudits of a support are listed in ascending order and the
// composite index is row-major, i.e. the smallest qudit index is the most
// significant digit.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "llcount/errors.hpp"
#include "llcount/graph.hpp"

namespace llc {

using Matrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

struct LocalProjector {
  std::vector<int> support;  // sorted, distinct
  Matrix matrix;             // side d^|support|
};

struct Tolerances {
  double hermitian = 1e-8;
  double idempotent = 1e-8;
  double eigen_threshold = 1e-9;  // relative, for rank and kernel decisions
  double commute = 1e-8;
  double imaginary = 1e-9;
  double integrality = 1e-6;      // commuting traces must be integers / d^s
};

/// Largest d^|support| of a single dense computation. LLCOUNT_MAX_DENSE_DIM
/// overrides the default of 2^14.
inline std::int64_t default_max_dense_dim() {
  if (const char* env = std::getenv("LLCOUNT_MAX_DENSE_DIM")) {
    const long long v = std::atoll(env);
    if (v > 0) return v;
  }
  return std::int64_t{1} << 14;
}

/// Memory ceiling for one dense work matrix, in complex entries (1 GiB).
inline constexpr std::int64_t kMaxWorkEntries = (std::int64_t{1} << 30) / 16;

inline std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > (std::int64_t{1} << 62) / base) throw ResourceError("dimension overflow");
    r *= base;
  }
  return r;
}

struct ProjectorDiagnostics {
  double hermitian_deviation = 0.0;
  double idempotent_deviation = 0.0;
  double spectrum_deviation = 0.0;  // max distance of an eigenvalue from {0, 1}
  int rank = 0;
  bool passed = false;

  std::string describe() const {
    std::ostringstream os;
    os << (passed ? "pass" : "FAIL") << ": |P - P^H|max = " << hermitian_deviation
       << ", |P^2 - P|max = " << idempotent_deviation << ", eigenvalue distance from {0,1} = " << spectrum_deviation
       << ", rank = " << rank;
    return os.str();
  }
};

/// Checks Hermiticity, idempotency and the {0,1} spectrum. Throws
/// InvalidArgument when the matrix is not square of side d^|support| or the
/// support is not sorted and distinct.
inline ProjectorDiagnostics validate_projector(const LocalProjector& p, int d, const Tolerances& tol = {}) {
  if (d < 2) throw InvalidArgument("local dimension must be >= 2");
  for (std::size_t i = 0; i < p.support.size(); ++i) {
    if (p.support[i] < 0) throw InvalidArgument("negative qudit index");
    if (i > 0 && p.support[i] <= p.support[i - 1]) throw InvalidArgument("support must be sorted and distinct");
  }
  if (p.matrix.rows() != p.matrix.cols())
    throw InvalidArgument("projector matrix is " + std::to_string(p.matrix.rows()) + "x" +
                          std::to_string(p.matrix.cols()) + ", not square");
  const std::int64_t side = ipow(d, static_cast<int>(p.support.size()));
  if (p.matrix.rows() != side)
    throw InvalidArgument("projector matrix side " + std::to_string(p.matrix.rows()) + " does not match d^|support| = " +
                          std::to_string(side));
  ProjectorDiagnostics diag;
  const Matrix& m = p.matrix;
  diag.hermitian_deviation = (m - m.adjoint()).cwiseAbs().maxCoeff();
  diag.idempotent_deviation = (m * m - m).cwiseAbs().maxCoeff();
  const Matrix h = (m + m.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double ev = es.eigenvalues()(i);
    diag.spectrum_deviation = std::max(diag.spectrum_deviation, std::min(std::abs(ev), std::abs(ev - 1.0)));
    if (ev >= 0.5) ++diag.rank;
  }
  diag.passed = diag.hermitian_deviation <= tol.hermitian && diag.idempotent_deviation <= tol.idempotent &&
                diag.spectrum_deviation <= std::max(tol.hermitian, tol.idempotent) * 10;
  return diag;
}

/// (number of eigenvalues >= 1/2) / d^|support|.
inline double rank_normalized(const LocalProjector& p, int d) {
  const Matrix h = (p.matrix + p.matrix.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  int r = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) >= 0.5) ++r;
  return r / static_cast<double>(ipow(d, static_cast<int>(p.support.size())));
}

namespace detail {

inline std::vector<int> union_support(const std::vector<const std::vector<int>*>& supports) {
  std::vector<int> u;
  for (const auto* s : supports) u.insert(u.end(), s->begin(), s->end());
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  return u;
}

/// index[rest * local_dim + local] = composite index in `outer` of the state
/// whose digits on `inner` form `local` and on outer \ inner form `rest`.
struct Layout {
  std::int64_t local_dim = 1;
  std::int64_t rest_dim = 1;
  std::vector<std::int64_t> index;
};

inline Layout make_layout(const std::vector<int>& inner, const std::vector<int>& outer, int d) {
  Layout lay;
  const int n = static_cast<int>(outer.size());
  std::vector<char> in_inner(static_cast<std::size_t>(n), 0);
  for (int p = 0, q = 0; p < n; ++p) {
    if (q < static_cast<int>(inner.size()) && inner[q] == outer[p]) {
      in_inner[p] = 1;
      ++q;
    }
  }
  lay.local_dim = ipow(d, static_cast<int>(inner.size()));
  lay.rest_dim = ipow(d, n - static_cast<int>(inner.size()));
  const std::int64_t total = lay.local_dim * lay.rest_dim;
  lay.index.resize(static_cast<std::size_t>(total));
  std::vector<int> digit(static_cast<std::size_t>(n), 0);
  for (std::int64_t i = 0; i < total; ++i) {
    std::int64_t local = 0, rest = 0;
    for (int p = 0; p < n; ++p) {
      if (in_inner[p])
        local = local * d + digit[p];
      else
        rest = rest * d + digit[p];
    }
    lay.index[static_cast<std::size_t>(rest * lay.local_dim + local)] = i;
    for (int p = n - 1; p >= 0; --p) {  // odometer, last qudit fastest
      if (++digit[p] < d) break;
      digit[p] = 0;
    }
  }
  return lay;
}

/// X <- (V V^H ⊗ I) X, with V an orthonormal basis living on the layout's inner qudits.
inline void apply_projector(const Layout& lay, const Matrix& basis, Matrix& x) {
  const Eigen::Index cols = x.cols();
  Matrix block(lay.local_dim, cols);
  for (std::int64_t b = 0; b < lay.rest_dim; ++b) {
    const std::int64_t* idx = lay.index.data() + b * lay.local_dim;
    for (std::int64_t a = 0; a < lay.local_dim; ++a) block.row(a) = x.row(idx[a]);
    const Matrix coeff = basis.adjoint() * block;
    block.noalias() = basis * coeff;
    for (std::int64_t a = 0; a < lay.local_dim; ++a) x.row(idx[a]) = block.row(a);
  }
}

/// Columns spanning the image of (V V^H ⊗ I): one column per (rest, basis column).
inline Matrix embed_basis(const Layout& lay, const Matrix& basis) {
  const Eigen::Index r = basis.cols();
  Matrix w = Matrix::Zero(lay.local_dim * lay.rest_dim, r * lay.rest_dim);
  for (std::int64_t b = 0; b < lay.rest_dim; ++b) {
    const std::int64_t* idx = lay.index.data() + b * lay.local_dim;
    for (std::int64_t a = 0; a < lay.local_dim; ++a) w.row(idx[a]).segment(b * r, r) = basis.row(a);
  }
  return w;
}

/// Dense embedding of a local matrix into the outer support.
inline Matrix embed_dense(const Layout& lay, const Matrix& local, Matrix* accumulate = nullptr) {
  const std::int64_t dim = lay.local_dim * lay.rest_dim;
  Matrix out;
  Matrix& dst = accumulate ? *accumulate : out;
  if (!accumulate) dst = Matrix::Zero(dim, dim);
  for (std::int64_t b = 0; b < lay.rest_dim; ++b) {
    const std::int64_t* idx = lay.index.data() + b * lay.local_dim;
    for (std::int64_t a = 0; a < lay.local_dim; ++a)
      for (std::int64_t c = 0; c < lay.local_dim; ++c) dst(idx[a], idx[c]) += local(a, c);
  }
  return out;
}

inline void check_work_size(std::int64_t rows, std::int64_t cols) {
  if (cols > 0 && rows > kMaxWorkEntries / cols)
    throw ResourceError("dense work matrix " + std::to_string(rows) + "x" + std::to_string(cols) +
                        " exceeds the memory ceiling");
}

}  // namespace detail

struct CommutationReport {
  std::size_t pairs_checked = 0;
  double max_deviation = 0.0;
  int worst_u = -1, worst_v = -1;
  bool passed = true;
};

/// Projectors with a shared local dimension d. Construction validates every
/// projector and caches an orthonormal basis of its image.
class ProjectorSet {
 public:
  ProjectorSet(int d, int qudit_count, std::vector<LocalProjector> projectors, Tolerances tol = {},
               std::int64_t max_dense_dim = default_max_dense_dim())
      : d_(d), qudit_count_(qudit_count), projectors_(std::move(projectors)), tol_(tol), max_dense_dim_(max_dense_dim) {
    if (d < 2) throw InvalidArgument("local dimension must be >= 2");
    if (qudit_count < 0) throw InvalidArgument("negative qudit count");
    for (std::size_t i = 0; i < projectors_.size(); ++i) {
      auto& p = projectors_[i];
      for (int q : p.support)
        if (q >= qudit_count) throw InvalidArgument("projector " + std::to_string(i) + " acts on qudit " +
                                                    std::to_string(q) + " outside [0, " + std::to_string(qudit_count) + ")");
      ProjectorDiagnostics diag = validate_projector(p, d, tol_);
      if (!diag.passed) throw InvalidArgument("projector " + std::to_string(i) + " is not a projector: " + diag.describe());
      Eigen::SelfAdjointEigenSolver<Matrix> es((p.matrix + p.matrix.adjoint()) * 0.5);
      std::vector<Eigen::Index> keep;
      for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
        if (es.eigenvalues()(k) >= 0.5) keep.push_back(k);
      Matrix v(p.matrix.rows(), static_cast<Eigen::Index>(keep.size()));
      for (std::size_t k = 0; k < keep.size(); ++k) v.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(keep[k]);
      bases_.push_back(std::move(v));
    }
  }

  int d() const noexcept { return d_; }
  int qudit_count() const noexcept { return qudit_count_; }
  int size() const noexcept { return static_cast<int>(projectors_.size()); }
  const LocalProjector& operator[](int i) const { return projectors_.at(static_cast<std::size_t>(i)); }
  const std::vector<LocalProjector>& projectors() const noexcept { return projectors_; }
  const Tolerances& tolerances() const noexcept { return tol_; }
  std::int64_t max_dense_dim() const noexcept { return max_dense_dim_; }

  /// Orthonormal columns spanning the image of projector i.
  const Matrix& image_basis(int i) const { return bases_.at(static_cast<std::size_t>(i)); }
  int rank(int i) const { return static_cast<int>(image_basis(i).cols()); }
  double rank_normalized(int i) const {
    return rank(i) / static_cast<double>(ipow(d_, static_cast<int>((*this)[i].support.size())));
  }

  std::vector<int> support_of(const std::vector<int>& indices) const {
    std::vector<const std::vector<int>*> s;
    for (int i : indices) s.push_back(&(*this)[i].support);
    return detail::union_support(s);
  }

  /// d^|support|, throwing ResourceError beyond the dense cap.
  std::int64_t checked_dim(const std::vector<int>& support) const {
    const std::int64_t dim = ipow(d_, static_cast<int>(support.size()));
    if (dim > max_dense_dim_)
      throw ResourceError("joint support of " + std::to_string(support.size()) + " qudits (dimension " +
                          std::to_string(dim) + ") exceeds the dense cap " + std::to_string(max_dense_dim_));
    return dim;
  }

  /// Checks that every pair of projectors with overlapping supports commutes:
  /// P commutes with Q iff P maps the image of Q into itself.
  CommutationReport verify_commuting() const {
    CommutationReport rep;
    for (int u = 0; u < size(); ++u)
      for (int v = 0; v < size(); ++v) {
        if (u == v) continue;
        const auto& su = (*this)[u].support;
        const auto& sv = (*this)[v].support;
        if (std::find_first_of(su.begin(), su.end(), sv.begin(), sv.end()) == su.end()) continue;
        if (u < v) ++rep.pairs_checked;
        const auto joint = support_of({u, v});
        checked_dim(joint);
        const auto lu = detail::make_layout(su, joint, d_);
        const auto lv = detail::make_layout(sv, joint, d_);
        Matrix y = detail::embed_basis(lv, image_basis(v));
        detail::apply_projector(lu, image_basis(u), y);
        Matrix z = y;
        detail::apply_projector(lv, image_basis(v), z);
        const double dev = y.size() ? (z - y).cwiseAbs().maxCoeff() : 0.0;
        if (dev > rep.max_deviation) {
          rep.max_deviation = dev;
          rep.worst_u = std::min(u, v);
          rep.worst_v = std::max(u, v);
        }
      }
    rep.passed = rep.max_deviation <= tol_.commute;
    return rep;
  }

 private:
  int d_;
  int qudit_count_;
  std::vector<LocalProjector> projectors_;
  Tolerances tol_;
  std::int64_t max_dense_dim_;
  std::vector<Matrix> bases_;
};

/// One vertex per projector, an edge when supports intersect.
inline DependencyGraph support_dependency_graph(const ProjectorSet& ps) {
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < ps.size(); ++u)
    for (int v = u + 1; v < ps.size(); ++v) {
      const auto& a = ps[u].support;
      const auto& b = ps[v].support;
      if (std::find_first_of(a.begin(), a.end(), b.begin(), b.end()) != a.end()) edges.emplace_back(u, v);
    }
  return DependencyGraph(ps.size(), edges);
}

/// tr[Π_{order[0]} Π_{order[1]} ...] / d^{|union of supports|}, each factor
/// extended by the identity. Indices may repeat.
inline Complex normalized_product_trace_complex(const ProjectorSet& ps, const std::vector<int>& order) {
  if (order.empty()) throw InvalidArgument("product of an empty projector list");
  const auto u = ps.support_of(order);
  const std::int64_t dim = ps.checked_dim(u);
  if (order.size() == 1) return Complex(ps.rank_normalized(order[0]), 0.0);
  // tr is cyclic: start from the factor whose embedded image has fewest columns.
  std::size_t start = 0;
  std::int64_t best = -1;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::int64_t cols = ps.rank(order[i]) * (dim / ipow(ps.d(), static_cast<int>(ps[order[i]].support.size())));
    if (best < 0 || cols < best) {
      best = cols;
      start = i;
    }
  }
  if (best == 0) return Complex(0.0, 0.0);
  detail::check_work_size(dim, best);
  std::vector<int> seq(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) seq[i] = order[(start + i) % order.size()];

  const auto first = detail::make_layout(ps[seq[0]].support, u, ps.d());
  const Matrix w = detail::embed_basis(first, ps.image_basis(seq[0]));
  Matrix y = w;
  for (std::size_t j = seq.size() - 1; j >= 1; --j) {
    const auto lay = detail::make_layout(ps[seq[j]].support, u, ps.d());
    detail::apply_projector(lay, ps.image_basis(seq[j]), y);
  }
  const Complex tr = w.conjugate().cwiseProduct(y).sum();
  return tr / static_cast<double>(dim);
}

/// Real part of the normalized product trace; throws NumericError when the
/// imaginary part exceeds the tolerance.
inline double normalized_product_trace(const ProjectorSet& ps, const std::vector<int>& order) {
  const Complex t = normalized_product_trace_complex(ps, order);
  if (std::abs(t.imag()) > ps.tolerances().imaginary)
    throw NumericError("product trace has imaginary part " + std::to_string(t.imag()));
  return t.real();
}

/// Absolute dimension of ∩ ker Π_v over `indices` on their joint support,
/// with that support's size. Splits into support-connected components, whose
/// kernels multiply.
struct KernelDimension {
  std::int64_t nullity = 1;
  int support_size = 0;
};

namespace detail {

inline std::int64_t component_nullity(const ProjectorSet& ps, const std::vector<int>& comp, const std::vector<int>& u) {
  const std::int64_t dim = ps.checked_dim(u);
  std::int64_t cols = 0;
  for (int v : comp) cols += ps.rank(v) * (dim / ipow(ps.d(), static_cast<int>(ps[v].support.size())));
  if (cols == 0) return dim;
  const double thr = ps.tolerances().eigen_threshold;
  if (cols < dim) {
    // rank of the stacked image bases via their Gram matrix
    check_work_size(dim, cols);
    Matrix c(dim, cols);
    Eigen::Index at = 0;
    for (int v : comp) {
      const auto lay = make_layout(ps[v].support, u, ps.d());
      Matrix w = embed_basis(lay, ps.image_basis(v));
      c.middleCols(at, w.cols()) = w;
      at += w.cols();
    }
    const Matrix gram = c.adjoint() * c;
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
    const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    std::int64_t rank = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()(i) > thr * scale) ++rank;
    return dim - rank;
  }
  check_work_size(dim, dim);
  Matrix h = Matrix::Zero(dim, dim);
  for (int v : comp) {
    const auto lay = make_layout(ps[v].support, u, ps.d());
    embed_dense(lay, ps[v].matrix, &h);
  }
  h = (h + h.adjoint()).eval() * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  std::int64_t nullity = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) <= thr * scale) ++nullity;
  return nullity;
}

/// Components of `indices` under support overlap, each sorted; ordered by first element.
inline std::vector<std::vector<int>> support_components(const ProjectorSet& ps, std::vector<int> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  std::vector<std::vector<int>> comps;
  std::vector<char> used(indices.size(), 0);
  for (std::size_t s = 0; s < indices.size(); ++s) {
    if (used[s]) continue;
    std::vector<int> comp{indices[s]};
    used[s] = 1;
    std::vector<int> sup = ps[indices[s]].support;
    bool grew = true;
    while (grew) {
      grew = false;
      for (std::size_t t = 0; t < indices.size(); ++t) {
        if (used[t]) continue;
        const auto& st = ps[indices[t]].support;
        if (std::find_first_of(st.begin(), st.end(), sup.begin(), sup.end()) == st.end()) continue;
        used[t] = 1;
        comp.push_back(indices[t]);
        sup.insert(sup.end(), st.begin(), st.end());
        std::sort(sup.begin(), sup.end());
        sup.erase(std::unique(sup.begin(), sup.end()), sup.end());
        grew = true;
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

}  // namespace detail

inline KernelDimension kernel_intersection(const ProjectorSet& ps, const std::vector<int>& indices) {
  KernelDimension k;
  for (const auto& comp : detail::support_components(ps, indices)) {
    const auto u = ps.support_of(comp);
    k.nullity *= detail::component_nullity(ps, comp, u);
    k.support_size += static_cast<int>(u.size());
  }
  return k;
}

/// Normalized dim ∩_{v∈T} ker Π_v; the empty intersection is the full space (1).
inline double kernel_intersection_dim(const ProjectorSet& ps, const std::vector<int>& indices) {
  const KernelDimension k = kernel_intersection(ps, indices);
  return k.nullity / static_cast<double>(ipow(ps.d(), k.support_size));
}

struct SpectralGap {
  double gap = 0.0;                 // smallest nonzero eigenvalue of Σ Π_v, 0 if Σ Π_v = 0
  std::int64_t ground_nullity = 0;  // absolute dim of the kernel on the full space
  double ground_dim = 1.0;          // normalized
  bool exact = true;                // from dense diagonalization
};

/// Dense diagonalization of Σ Π_v on all qudits. Requires d^n within the
/// dense cap; at larger sizes callers must supply a certified lower bound.
inline SpectralGap spectral_gap(const ProjectorSet& ps) {
  std::vector<int> all(static_cast<std::size_t>(ps.qudit_count()));
  for (int q = 0; q < ps.qudit_count(); ++q) all[q] = q;
  const std::int64_t dim = ps.checked_dim(all);
  detail::check_work_size(dim, dim);
  Matrix h = Matrix::Zero(dim, dim);
  for (int v = 0; v < ps.size(); ++v) detail::embed_dense(detail::make_layout(ps[v].support, all, ps.d()), ps[v].matrix, &h);
  h = (h + h.adjoint()).eval() * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  const double thr = ps.tolerances().eigen_threshold * scale;
  SpectralGap g;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double ev = es.eigenvalues()(i);
    if (ev <= thr)
      ++g.ground_nullity;
    else if (g.gap == 0.0 || ev < g.gap)
      g.gap = ev;
  }
  g.ground_dim = g.ground_nullity / static_cast<double>(dim);
  return g;
}

}  // namespace llc
