#include "joinrelax/storage/triple_store.hpp"

#include <algorithm>
#include <tuple>

#include "joinrelax/error.hpp"

namespace joinrelax {

EntityId Dictionary::intern(std::string_view label) {
  if (auto it = ids_.find(std::string(label)); it != ids_.end()) return it->second;
  if (labels_.size() >= kUnknownEntity) throw BudgetError("dictionary is full");
  const auto id = static_cast<EntityId>(labels_.size());
  labels_.emplace_back(label);
  ids_.emplace(labels_.back(), id);
  return id;
}

std::optional<EntityId> Dictionary::find(std::string_view label) const {
  if (auto it = ids_.find(std::string(label)); it != ids_.end()) return it->second;
  return std::nullopt;
}

const std::string& Dictionary::label(EntityId id) const {
  if (id >= labels_.size()) throw StructuralError("entity id " + std::to_string(id) + " is not registered");
  return labels_[id];
}

namespace {

auto spo_key(const Triple& t) { return std::tie(t.s, t.p, t.o); }
auto pos_key(const Triple& t) { return std::tie(t.p, t.o, t.s); }
auto osp_key(const Triple& t) { return std::tie(t.o, t.s, t.p); }

// Range of `sorted` whose first `bound` key components equal those of `probe`.
template <typename KeyFn>
std::span<const Triple> prefix_range(const std::vector<Triple>& sorted, const Triple& probe,
                                     int bound, KeyFn key) {
  auto prefix_less = [&](const Triple& a, const Triple& b) {
    const auto ka = key(a);
    const auto kb = key(b);
    if (std::get<0>(ka) != std::get<0>(kb)) return std::get<0>(ka) < std::get<0>(kb);
    if (bound == 1) return false;
    if (std::get<1>(ka) != std::get<1>(kb)) return std::get<1>(ka) < std::get<1>(kb);
    if (bound == 2) return false;
    return std::get<2>(ka) < std::get<2>(kb);
  };
  auto [lo, hi] = std::equal_range(sorted.begin(), sorted.end(), probe, prefix_less);
  return {sorted.data() + (lo - sorted.begin()), static_cast<std::size_t>(hi - lo)};
}

}  // namespace

TripleStore::TripleStore(Dictionary dictionary, std::vector<Triple> triples)
    : dictionary_(std::move(dictionary)), spo_(std::move(triples)) {
  for (const auto& t : spo_) {
    if (t.s >= dictionary_.size() || t.p >= dictionary_.size() || t.o >= dictionary_.size()) {
      throw StructuralError("triple references an unregistered entity id");
    }
  }
  std::sort(spo_.begin(), spo_.end());
  spo_.erase(std::unique(spo_.begin(), spo_.end()), spo_.end());
  pos_ = spo_;
  std::sort(pos_.begin(), pos_.end(), [](const Triple& a, const Triple& b) { return pos_key(a) < pos_key(b); });
  osp_ = spo_;
  std::sort(osp_.begin(), osp_.end(), [](const Triple& a, const Triple& b) { return osp_key(a) < osp_key(b); });

  occurrences_.assign(dictionary_.size(), 0);
  for (const auto& t : spo_) {
    ++occurrences_[t.s];
    if (t.p != t.s) ++occurrences_[t.p];
    if (t.o != t.s && t.o != t.p) ++occurrences_[t.o];
  }
}

std::span<const Triple> TripleStore::lookup(std::optional<EntityId> s, std::optional<EntityId> p,
                                            std::optional<EntityId> o) const {
  if (spo_.empty()) return {};
  const Triple probe{s.value_or(0), p.value_or(0), o.value_or(0)};
  const int mask = (s ? 1 : 0) | (p ? 2 : 0) | (o ? 4 : 0);
  switch (mask) {
    case 0: return spo_;
    case 1: return prefix_range(spo_, probe, 1, spo_key);
    case 3: return prefix_range(spo_, probe, 2, spo_key);
    case 7: return prefix_range(spo_, probe, 3, spo_key);
    case 2: return prefix_range(pos_, probe, 1, pos_key);
    case 6: return prefix_range(pos_, probe, 2, pos_key);
    case 4: return prefix_range(osp_, probe, 1, osp_key);
    case 5: return prefix_range(osp_, probe, 2, osp_key);
  }
  return {};
}

std::vector<Triple> TripleStore::scan(std::optional<EntityId> s, std::optional<EntityId> p,
                                      std::optional<EntityId> o) const {
  std::vector<Triple> out;
  for (const auto& t : spo_) {
    if ((!s || t.s == *s) && (!p || t.p == *p) && (!o || t.o == *o)) out.push_back(t);
  }
  return out;
}

std::uint64_t TripleStore::occurrences(EntityId id) const {
  return id < occurrences_.size() ? occurrences_[id] : 0;
}

void TripleStoreBuilder::add(std::string_view s, std::string_view p, std::string_view o) {
  const EntityId si = dictionary_.intern(s);
  const EntityId pi = dictionary_.intern(p);
  const EntityId oi = dictionary_.intern(o);
  triples_.push_back({si, pi, oi});
}

TripleStore TripleStoreBuilder::build() && {
  return TripleStore(std::move(dictionary_), std::move(triples_));
}

}  // namespace joinrelax
