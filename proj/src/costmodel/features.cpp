#include "joinrelax/costmodel/features.hpp"

#include <cmath>

#include "joinrelax/error.hpp"
#include "joinrelax/random.hpp"

namespace joinrelax::costmodel {

Eigen::RowVectorXd entity_embedding(std::string_view label, const FeatureLayout& layout) {
  const auto d = static_cast<Eigen::Index>(layout.embedding_dim);
  Eigen::RowVectorXd e(d);
  std::uint64_t state = fnv1a(label) ^ layout.embedding_seed;
  for (Eigen::Index i = 0; i < d; ++i) {
    state = splitmix64(state);
    e(i) = 2.0 * open_unit(state) - 1.0;
  }
  const double norm = e.norm();
  if (norm > 0.0) e /= norm;
  return e;
}

namespace {

void write_entity(Eigen::Ref<Eigen::RowVectorXd> block, const Term& term, const TripleStore& store,
                  const FeatureLayout& layout) {
  const auto d = static_cast<Eigen::Index>(layout.embedding_dim);
  if (term.is_variable()) {
    block(0) = 1.0;
    block.segment(1, d).setOnes();
    block(d + 1) = 0.0;
    return;
  }
  block(0) = 0.0;
  if (term.id() >= store.dictionary().size()) {
    block.segment(1, d).setZero();
    block(d + 1) = 0.0;
    return;
  }
  block.segment(1, d) = entity_embedding(store.dictionary().label(term.id()), layout);
  block(d + 1) = std::log1p(static_cast<double>(store.occurrences(term.id())));
}

}  // namespace

Matrix pattern_features(const Query& query, const TripleStore& store, const FeatureLayout& layout) {
  const auto n = static_cast<Eigen::Index>(query.size());
  const auto w = static_cast<Eigen::Index>(layout.entity_width());
  Matrix x = Matrix::Zero(n, static_cast<Eigen::Index>(layout.width()));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& tp = query.patterns[static_cast<std::size_t>(i)];
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(x.cols());
    write_entity(row.segment(0, w), tp.s, store, layout);
    write_entity(row.segment(w, w), tp.p, store, layout);
    write_entity(row.segment(2 * w, w), tp.o, store, layout);
    x.row(i) = row;  // indicator stays 0
  }
  return x;
}

Matrix build_features(const Query& query, const TripleStore& store, const FeatureLayout& layout) {
  if (query.size() == 0) throw StructuralError("cannot build features for an empty query");
  const Matrix rows = pattern_features(query, store, layout);
  std::vector<std::size_t> all(query.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  Matrix x = Matrix::Zero(static_cast<Eigen::Index>(2 * query.size() - 1), rows.cols());
  x.topRows(rows.rows()) = rows;
  x.bottomRows(x.rows() - rows.rows()).col(x.cols() - 1).setOnes();
  return x;
}

Matrix plan_features(const Matrix& pattern_rows, const Plan& plan) {
  Matrix x = Matrix::Zero(static_cast<Eigen::Index>(plan.node_count()), pattern_rows.cols());
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const auto p = static_cast<Eigen::Index>(plan.patterns()[i]);
    if (p >= pattern_rows.rows()) throw StructuralError("plan references a pattern without a feature row");
    x.row(static_cast<Eigen::Index>(i)) = pattern_rows.row(p);
  }
  x.bottomRows(static_cast<Eigen::Index>(plan.size() - 1)).col(x.cols() - 1).setOnes();
  return x;
}

}  // namespace joinrelax::costmodel
