#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hpcoda/rdf/term.hpp"

namespace hpcoda::rdf {

using TermId = std::uint32_t;

struct TripleIds {
  TermId s = 0;
  TermId p = 0;
  TermId o = 0;

  friend bool operator==(const TripleIds&, const TripleIds&) = default;
  friend auto operator<=>(const TripleIds&, const TripleIds&) = default;
};

// One slot of a pattern: a bound term or a wildcard.
using PatternSlot = std::optional<Term>;

struct TriplePattern {
  PatternSlot subject;
  PatternSlot predicate;
  PatternSlot object;
};

// Pattern over interned ids; nullopt is a wildcard.
struct IdPattern {
  std::optional<TermId> s;
  std::optional<TermId> p;
  std::optional<TermId> o;
};

struct StoreStats {
  std::size_t triple_count = 0;
  std::size_t node_count = 0;
  std::size_t dict_size = 0;

  friend bool operator==(const StoreStats&, const StoreStats&) = default;
};

enum class IndexOrder : std::uint8_t { SPO, POS, OSP };

namespace detail {

struct TripleIdsHash {
  std::size_t operator()(const TripleIds& t) const noexcept {
    std::uint64_t h = (static_cast<std::uint64_t>(t.s) << 32) ^ t.p;
    h ^= static_cast<std::uint64_t>(t.o) * 0x9e3779b97f4a7c15ULL;
    h ^= h >> 29;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 32;
    return static_cast<std::size_t>(h);
  }
};

// Key permuted into index order.
inline std::array<TermId, 3> permute(const TripleIds& t, IndexOrder order) noexcept {
  switch (order) {
    case IndexOrder::SPO: return {t.s, t.p, t.o};
    case IndexOrder::POS: return {t.p, t.o, t.s};
    case IndexOrder::OSP: return {t.o, t.s, t.p};
  }
  return {t.s, t.p, t.o};
}

inline TripleIds unpermute(const std::array<TermId, 3>& k, IndexOrder order) noexcept {
  switch (order) {
    case IndexOrder::SPO: return {k[0], k[1], k[2]};
    case IndexOrder::POS: return {k[2], k[0], k[1]};
    case IndexOrder::OSP: return {k[1], k[2], k[0]};
  }
  return {k[0], k[1], k[2]};
}

}  // namespace detail

// Result of an index lookup: a contiguous run of one sorted index.
class MatchRange {
 public:
  using Key = std::array<TermId, 3>;

  class iterator {
   public:
    using value_type = TripleIds;
    using difference_type = std::ptrdiff_t;
    using iterator_category = std::forward_iterator_tag;

    iterator() = default;
    iterator(const Key* pos, IndexOrder order) : pos_(pos), order_(order) {}
    TripleIds operator*() const noexcept { return detail::unpermute(*pos_, order_); }
    iterator& operator++() noexcept {
      ++pos_;
      return *this;
    }
    iterator operator++(int) noexcept {
      iterator tmp = *this;
      ++pos_;
      return tmp;
    }
    friend bool operator==(const iterator& a, const iterator& b) noexcept { return a.pos_ == b.pos_; }

   private:
    const Key* pos_ = nullptr;
    IndexOrder order_ = IndexOrder::SPO;
  };

  MatchRange() = default;
  MatchRange(std::span<const Key> keys, IndexOrder order) : keys_(keys), order_(order) {}

  iterator begin() const noexcept { return {keys_.data(), order_}; }
  iterator end() const noexcept { return {keys_.data() + keys_.size(), order_}; }
  std::size_t size() const noexcept { return keys_.size(); }
  bool empty() const noexcept { return keys_.empty(); }
  IndexOrder order() const noexcept { return order_; }

 private:
  std::span<const Key> keys_;
  IndexOrder order_ = IndexOrder::SPO;
};

// Dictionary-encoded triple set with SPO, POS and OSP indexes.
//
// Inserts go to an append-only log plus a hash set (set semantics). seal()
// sorts the three indexes; lookups require a sealed store. Inserting after
// seal() unseals it until the next seal().
class TripleStore {
 public:
  TermId intern(const Term& term) {
    if (term.is_iri() && !is_valid_iri(term.text())) throw ValidationError("invalid IRI");
    if (term.is_blank() && !is_valid_blank_label(term.text())) throw ValidationError("invalid blank node label");
    if (term.is_literal() && !is_valid_lexical(term.text(), term.datatype()))
      throw ValidationError("invalid literal '" + term.text() + "'");
    const auto it = ids_.find(term);
    if (it != ids_.end()) return it->second;
    if (terms_.size() >= std::numeric_limits<TermId>::max()) throw Error("term dictionary full");
    const auto id = static_cast<TermId>(terms_.size());
    terms_.push_back(term);
    ids_.emplace(term, id);
    return id;
  }

  std::optional<TermId> lookup(const Term& term) const {
    const auto it = ids_.find(term);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

  const Term& resolve(TermId id) const {
    if (id >= terms_.size()) throw std::out_of_range("unknown term id " + std::to_string(id));
    return terms_[id];
  }

  std::size_t dict_size() const noexcept { return terms_.size(); }

  bool insert(const Triple& t) {
    check_triple(t);
    return insert_ids({intern(t.subject), intern(t.predicate), intern(t.object)});
  }

  // Ids must come from this store's dictionary.
  bool insert_ids(const TripleIds& t) {
    if (t.s >= terms_.size() || t.p >= terms_.size() || t.o >= terms_.size())
      throw std::out_of_range("triple references unknown term id");
    if (terms_[t.s].is_literal()) throw ValidationError("literal in subject position");
    if (!terms_[t.p].is_iri()) throw ValidationError("predicate must be an IRI");
    if (!set_.insert(t).second) return false;
    log_.push_back(t);
    sealed_ = false;
    return true;
  }

  void reserve(std::size_t triples) {
    set_.reserve(triples);
    log_.reserve(triples);
  }

  void seal() {
    if (sealed_) return;
    for (auto order : {IndexOrder::SPO, IndexOrder::POS, IndexOrder::OSP}) {
      auto& idx = index(order);
      idx.clear();
      idx.reserve(log_.size());
      for (const auto& t : log_) idx.push_back(detail::permute(t, order));
      std::sort(idx.begin(), idx.end());
    }
    sealed_ = true;
  }

  bool sealed() const noexcept { return sealed_; }
  std::size_t size() const noexcept { return log_.size(); }
  bool contains(const TripleIds& t) const { return set_.count(t) != 0; }

  // Triples in insertion order.
  std::span<const TripleIds> insertion_order() const noexcept { return log_; }

  // Index-ordered range over triples matching the bound positions.
  MatchRange match_ids(const IdPattern& pat) const {
    require_sealed();
    IndexOrder order = IndexOrder::SPO;
    std::array<std::optional<TermId>, 3> prefix;
    if (pat.s && pat.p) {
      order = IndexOrder::SPO;
      prefix = {pat.s, pat.p, pat.o};
    } else if (pat.p) {
      order = IndexOrder::POS;
      prefix = {pat.p, pat.o, pat.s};
    } else if (pat.o) {
      order = IndexOrder::OSP;
      prefix = {pat.o, pat.s, std::nullopt};
    } else {
      order = IndexOrder::SPO;
      prefix = {pat.s, std::nullopt, std::nullopt};
    }
    const auto& idx = index(order);
    std::size_t bound = 0;
    while (bound < 3 && prefix[bound]) ++bound;
    if (bound == 0) return {std::span<const MatchRange::Key>(idx), order};
    MatchRange::Key lo{0, 0, 0};
    MatchRange::Key hi{0, 0, 0};
    for (std::size_t i = 0; i < 3; ++i) {
      lo[i] = i < bound ? *prefix[i] : 0;
      hi[i] = i < bound ? *prefix[i] : std::numeric_limits<TermId>::max();
    }
    const auto first = std::lower_bound(idx.begin(), idx.end(), lo);
    const auto last = std::upper_bound(first, idx.end(), hi);
    return {std::span<const MatchRange::Key>(idx.data() + (first - idx.begin()), static_cast<std::size_t>(last - first)),
            order};
  }

  // Term-level match; a bound term unknown to the dictionary matches nothing.
  std::vector<Triple> match(const TriplePattern& pat) const {
    IdPattern ids;
    auto bind = [this](const PatternSlot& slot, std::optional<TermId>& out) {
      if (!slot) return true;
      out = lookup(*slot);
      return out.has_value();
    };
    std::vector<Triple> out;
    if (!bind(pat.subject, ids.s) || !bind(pat.predicate, ids.p) || !bind(pat.object, ids.o)) {
      require_sealed();
      return out;
    }
    for (const TripleIds t : match_ids(ids)) out.push_back(resolve_triple(t));
    return out;
  }

  Triple resolve_triple(const TripleIds& t) const { return {resolve(t.s), resolve(t.p), resolve(t.o)}; }

  // node_count: distinct IRI or blank-node terms in subject or object position.
  StoreStats stats() const {
    StoreStats st;
    st.triple_count = log_.size();
    st.dict_size = terms_.size();
    std::vector<bool> seen(terms_.size(), false);
    auto visit = [&](TermId id) {
      if (!seen[id] && !terms_[id].is_literal()) {
        seen[id] = true;
        ++st.node_count;
      }
    };
    for (const auto& t : log_) {
      visit(t.s);
      visit(t.o);
    }
    return st;
  }

 private:
  void require_sealed() const {
    if (!sealed_) throw std::logic_error("TripleStore::match on an unsealed store; call seal() first");
  }

  std::vector<MatchRange::Key>& index(IndexOrder order) { return indexes_[static_cast<std::size_t>(order)]; }
  const std::vector<MatchRange::Key>& index(IndexOrder order) const {
    return indexes_[static_cast<std::size_t>(order)];
  }

  std::vector<Term> terms_;
  std::unordered_map<Term, TermId, TermHash> ids_;
  std::vector<TripleIds> log_;
  std::unordered_set<TripleIds, detail::TripleIdsHash> set_;
  std::array<std::vector<MatchRange::Key>, 3> indexes_;
  bool sealed_ = true;
};

}  // namespace hpcoda::rdf
