#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ultranorm/diagonal_norm.hpp"
#include "ultranorm/error.hpp"
#include "ultranorm/graded/profile.hpp"
#include "ultranorm/graded/ring.hpp"
#include "ultranorm/operations.hpp"
#include "ultranorm/rational.hpp"

namespace ultranorm {

enum class NodeKind { monomial, table, translate, scale0, max, action, geodesic, ray, iota };

inline std::string to_string(NodeKind k) {
  switch (k) {
    case NodeKind::monomial: return "monomial";
    case NodeKind::table: return "table";
    case NodeKind::translate: return "translate";
    case NodeKind::scale0: return "scale0";
    case NodeKind::max: return "max";
    case NodeKind::action: return "action";
    case NodeKind::geodesic: return "geodesic";
    case NodeKind::ray: return "ray";
    case NodeKind::iota: return "iota";
  }
  return "?";
}

namespace detail {

struct GradedNode {
  NodeKind kind;
  std::shared_ptr<const SectionRing> ring;
  std::optional<FieldSpec> field;  // monomial
  Mode mode = Mode::norm;          // monomial
  std::optional<MonomialProfile> profile;
  std::vector<DiagonalNorm> table;  // table: degrees 1..size
  Rat scalar;                       // translate: c; scale0, geodesic, ray: t
  std::shared_ptr<const GradedNode> left, right;
  std::optional<ConvexProfile> convex;

  mutable std::mutex mutex;
  mutable std::map<int, std::shared_ptr<const DiagonalNorm>> memo;
};

}  // namespace detail

/// A graded norm on a toric section ring, evaluated lazily degree by degree.
/// Values are immutable; each node memoizes its evaluated degrees.
class GradedNorm {
 public:
  using Ring = std::shared_ptr<const SectionRing>;

  /// Diagonal in the monomial basis, weight of s_u in degree m is m * phi(u / m).
  static GradedNorm monomial(Ring ring, FieldSpec field, Mode mode, MonomialProfile profile) {
    if (profile.arity() != ring->ambient_dim())
      throw Error(ErrorCode::dimension_mismatch, "profile arity differs from the polytope dimension");
    auto n = make(NodeKind::monomial, std::move(ring));
    n->field = field;
    n->mode = mode;
    n->profile = std::move(profile);
    return GradedNorm(std::move(n));
  }

  /// Explicit norms for degrees 1..norms.size().
  static GradedNorm table(Ring ring, std::vector<DiagonalNorm> norms) {
    if (norms.empty()) throw Error(ErrorCode::invalid_argument, "table needs at least one degree");
    for (std::size_t i = 0; i < norms.size(); ++i) {
      if (norms[i].dim() != ring->rank(static_cast<int>(i + 1)))
        throw Error(ErrorCode::dimension_mismatch, "table norm at degree " + std::to_string(i + 1) +
                                                       " has dimension " + std::to_string(norms[i].dim()) +
                                                       ", ring rank is " + std::to_string(ring->rank(static_cast<int>(i + 1))));
      if (!(norms[i].field() == norms.front().field()) || norms[i].mode() != norms.front().mode())
        throw Error(ErrorCode::field_mismatch, "table norms must share field and mode");
    }
    auto n = make(NodeKind::table, std::move(ring));
    n->table = std::move(norms);
    return GradedNorm(std::move(n));
  }

  /// e^{m c} in degree m.
  static GradedNorm translate(const GradedNorm& e, Rat c) { return unary(NodeKind::translate, e, std::move(c)); }

  /// t.nu0 for a trivially-valued nu0.
  static GradedNorm scale0(const GradedNorm& e, Rat t) {
    if (t < 0) throw Error(ErrorCode::invalid_argument, "scale0 needs t >= 0");
    return unary(NodeKind::scale0, e, std::move(t));
  }

  static GradedNorm max(const GradedNorm& a, const GradedNorm& b) { return binary(NodeKind::max, a, b, Rat(0)); }

  static GradedNorm action(const GradedNorm& nu0, const GradedNorm& alpha) {
    return binary(NodeKind::action, nu0, alpha, Rat(0));
  }

  static GradedNorm geodesic(const GradedNorm& a, const GradedNorm& b, Rat t) {
    if (t < 0 || t > 1) throw Error(ErrorCode::t_out_of_range, "geodesic parameter must lie in [0, 1]");
    return binary(NodeKind::geodesic, a, b, std::move(t));
  }

  static GradedNorm ray(const GradedNorm& nu0, const GradedNorm& alpha, Rat t) {
    if (t < 0) throw Error(ErrorCode::t_negative, "ray parameter must be >= 0");
    return binary(NodeKind::ray, nu0, alpha, std::move(t));
  }

  /// Degree m: nu0's degree-m basis with weights -m f(w0_i / m).
  static GradedNorm iota(ConvexProfile f, const GradedNorm& nu0) {
    auto n = make(NodeKind::iota, nu0.node_->ring);
    n->left = nu0.node_;
    n->convex = std::move(f);
    return GradedNorm(std::move(n));
  }

  NodeKind kind() const { return node_->kind; }
  const SectionRing& ring() const { return *node_->ring; }
  const Ring& ring_ptr() const { return node_->ring; }

  GradedNorm left() const { return child(node_->left); }
  GradedNorm right() const { return child(node_->right); }
  const Rat& scalar() const { return node_->scalar; }
  const MonomialProfile& profile() const { return *node_->profile; }
  const FieldSpec& field() const { return *node_->field; }
  Mode mode() const { return node_->mode; }
  const std::vector<DiagonalNorm>& table_norms() const { return node_->table; }
  const ConvexProfile& convex() const { return *node_->convex; }

  /// Largest degree that can be evaluated (bounded only by table nodes).
  int max_degree() const {
    switch (node_->kind) {
      case NodeKind::monomial:
        return std::numeric_limits<int>::max();
      case NodeKind::table:
        return static_cast<int>(node_->table.size());
      case NodeKind::translate:
      case NodeKind::scale0:
      case NodeKind::iota:
        return left().max_degree();
      default:
        return std::min(left().max_degree(), right().max_degree());
    }
  }

  /// The norm on the degree-m piece. Thread-safe; results are cached.
  const DiagonalNorm& eval(int m) const {
    if (m < 1) throw Error(ErrorCode::invalid_degree, "degree must be >= 1");
    {
      std::lock_guard<std::mutex> lock(node_->mutex);
      auto it = node_->memo.find(m);
      if (it != node_->memo.end()) return *it->second;
    }
    auto value = std::make_shared<const DiagonalNorm>(compute(m));
    std::lock_guard<std::mutex> lock(node_->mutex);
    return *node_->memo.emplace(m, std::move(value)).first->second;
  }

  /// True when the two handles share a node.
  bool same_node(const GradedNorm& other) const { return node_ == other.node_; }

 private:
  explicit GradedNorm(std::shared_ptr<const detail::GradedNode> node) : node_(std::move(node)) {}

  static std::shared_ptr<detail::GradedNode> make(NodeKind kind, Ring ring) {
    auto n = std::make_shared<detail::GradedNode>();
    n->kind = kind;
    n->ring = std::move(ring);
    return n;
  }

  static GradedNorm child(const std::shared_ptr<const detail::GradedNode>& n) {
    if (!n) throw Error(ErrorCode::shape, "node has no such child");
    return GradedNorm(n);
  }

  static GradedNorm unary(NodeKind kind, const GradedNorm& e, Rat scalar) {
    auto n = make(kind, e.node_->ring);
    n->left = e.node_;
    n->scalar = std::move(scalar);
    return GradedNorm(std::move(n));
  }

  static GradedNorm binary(NodeKind kind, const GradedNorm& a, const GradedNorm& b, Rat scalar) {
    if (!(*a.node_->ring == *b.node_->ring))
      throw Error(ErrorCode::dimension_mismatch, "graded norms live on different section rings");
    auto n = make(kind, a.node_->ring);
    n->left = a.node_;
    n->right = b.node_;
    n->scalar = std::move(scalar);
    return GradedNorm(std::move(n));
  }

  DiagonalNorm compute(int m) const {
    const detail::GradedNode& n = *node_;
    switch (n.kind) {
      case NodeKind::monomial: {
        const auto basis = n.ring->basis(m);
        std::vector<Rat> w;
        w.reserve(basis->size());
        std::vector<Rat> x(n.ring->ambient_dim());
        for (const auto& u : basis->points) {
          for (std::size_t i = 0; i < u.size(); ++i) x[i] = make_rat(u[i], m);
          w.push_back(Rat(m) * (*n.profile)(x));
        }
        return DiagonalNorm::standard(*n.field, n.mode, std::move(w));
      }
      case NodeKind::table:
        if (m > static_cast<int>(n.table.size()))
          throw Error(ErrorCode::invalid_degree, "table defines degrees 1.." + std::to_string(n.table.size()));
        return n.table[static_cast<std::size_t>(m - 1)];
      case NodeKind::translate:
        return left().eval(m).translate(Rat(n.scalar * m));
      case NodeKind::scale0:
        return ultranorm::scale0(left().eval(m), n.scalar);
      case NodeKind::max:
        return max_norm(left().eval(m), right().eval(m));
      case NodeKind::action:
        return gerardin_apply(left().eval(m), right().eval(m));
      case NodeKind::geodesic:
        return geodesic_eval(left().eval(m), right().eval(m), n.scalar);
      case NodeKind::ray:
        return ray_eval(left().eval(m), right().eval(m), n.scalar);
      case NodeKind::iota: {
        const DiagonalNorm& nu0 = left().eval(m);
        if (!nu0.trivially_valued()) throw Error(ErrorCode::mode, "iota needs a trivially-valued graded norm");
        std::vector<Rat> w;
        w.reserve(nu0.dim());
        for (const auto& x : nu0.weights()) w.push_back(-Rat(m) * (*n.convex)(Rat(x / m)));
        return DiagonalNorm(nu0.field(), Mode::filtration, nu0.basis(), std::move(w));
      }
    }
    throw Error(ErrorCode::internal, "unknown node kind");
  }

  std::shared_ptr<const detail::GradedNode> node_;
};

}  // namespace ultranorm
