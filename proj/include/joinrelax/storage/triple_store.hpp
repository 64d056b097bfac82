#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "joinrelax/plan/query.hpp"

namespace joinrelax {

struct Triple {
  EntityId s = 0;
  EntityId p = 0;
  EntityId o = 0;

  auto operator<=>(const Triple&) const = default;
};

// Bijection between dense entity ids and their labels.
class Dictionary {
 public:
  EntityId intern(std::string_view label);
  std::optional<EntityId> find(std::string_view label) const;
  const std::string& label(EntityId id) const;
  std::size_t size() const { return labels_.size(); }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, EntityId> ids_;
};

// Immutable triple set with SPO, POS and OSP sorted permutations. Every access pattern
// (any combination of bound positions) resolves to one contiguous range of one permutation.
class TripleStore {
 public:
  TripleStore() = default;
  // Duplicates are dropped; every id must be registered in `dictionary`.
  TripleStore(Dictionary dictionary, std::vector<Triple> triples);

  const Dictionary& dictionary() const { return dictionary_; }
  std::size_t size() const { return spo_.size(); }

  // All triples in SPO order.
  std::span<const Triple> triples() const { return spo_; }

  // Indexed lookup; unbound positions are std::nullopt.
  std::span<const Triple> lookup(std::optional<EntityId> s, std::optional<EntityId> p,
                                 std::optional<EntityId> o) const;

  // Reference linear scan with the same contract as lookup (result in SPO order).
  std::vector<Triple> scan(std::optional<EntityId> s, std::optional<EntityId> p,
                           std::optional<EntityId> o) const;

  // Number of triples in which `id` occurs in any position (a triple counts once).
  std::uint64_t occurrences(EntityId id) const;

 private:
  Dictionary dictionary_;
  std::vector<Triple> spo_;
  std::vector<Triple> pos_;
  std::vector<Triple> osp_;
  std::vector<std::uint64_t> occurrences_;
};

// Collects labelled triples and assigns ids in order of first appearance.
class TripleStoreBuilder {
 public:
  EntityId intern(std::string_view label) { return dictionary_.intern(label); }
  void add(std::string_view s, std::string_view p, std::string_view o);
  void add(Triple t) { triples_.push_back(t); }
  const Dictionary& dictionary() const { return dictionary_; }
  TripleStore build() &&;

 private:
  Dictionary dictionary_;
  std::vector<Triple> triples_;
};

}  // namespace joinrelax
