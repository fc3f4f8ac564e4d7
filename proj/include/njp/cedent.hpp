// Cedents (finite formula sets in canonical print order) and sequents.
#pragma once

#include <algorithm>
#include <initializer_list>
#include <memory>
#include <string>
#include <vector>

#include "njp/formula.hpp"

namespace njp {

// Immutable, duplicate-free, canonically ordered formula set. Copies share
// the underlying vector; the modifying operations return new cedents.
class Cedent {
 public:
  using Vec = std::vector<FormulaRef>;

  Cedent() : elems_(empty_rep()) {}
  Cedent(std::initializer_list<FormulaRef> fs) : Cedent() {
    for (FormulaRef f : fs) *this = with(f);
  }
  template <typename It>
  Cedent(It first, It last) : Cedent() {
    Vec v(first, last);
    std::sort(v.begin(), v.end(), FormulaLess{});
    v.erase(std::unique(v.begin(), v.end()), v.end());
    elems_ = std::make_shared<const Rep>(std::move(v));
  }

  std::size_t size() const { return elems_->v.size(); }
  bool empty() const { return elems_->v.empty(); }
  auto begin() const { return elems_->v.begin(); }
  auto end() const { return elems_->v.end(); }
  FormulaRef operator[](std::size_t i) const { return elems_->v[i]; }

  bool contains(FormulaRef f) const {
    for (FormulaRef g : elems_->v)
      if (g == f) return true;
    return false;
  }

  // Index in the canonical ordering; requires membership.
  std::size_t index_of(FormulaRef f) const {
    for (std::size_t i = 0; i < elems_->v.size(); ++i)
      if (elems_->v[i] == f) return i;
    throw PreconditionError("formula not in cedent");
  }

  bool harrop() const {
    for (FormulaRef g : elems_->v)
      if (!g->harrop()) return false;
    return true;
  }

  Cedent with(FormulaRef f) const {
    if (contains(f)) return *this;
    Vec v;
    v.reserve(size() + 1);
    auto it = std::lower_bound(begin(), end(), f, FormulaLess{});
    v.insert(v.end(), begin(), it);
    v.push_back(f);
    v.insert(v.end(), it, end());
    return Cedent(std::make_shared<const Rep>(std::move(v)));
  }

  Cedent without(FormulaRef f) const {
    if (!contains(f)) return *this;
    Vec v;
    v.reserve(size() - 1);
    for (FormulaRef g : elems_->v)
      if (g != f) v.push_back(g);
    return Cedent(std::make_shared<const Rep>(std::move(v)));
  }

  Cedent union_with(const Cedent& o) const {
    if (o.empty()) return *this;
    if (empty()) return o;
    Vec v;
    v.reserve(size() + o.size());
    std::merge(begin(), end(), o.begin(), o.end(), std::back_inserter(v), FormulaLess{});
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return Cedent(std::make_shared<const Rep>(std::move(v)));
  }

  bool subset_of(const Cedent& o) const {
    for (FormulaRef g : elems_->v)
      if (!o.contains(g)) return false;
    return true;
  }

  bool operator==(const Cedent& o) const {
    return elems_ == o.elems_ ||
           (elems_->hash == o.elems_->hash && elems_->v == o.elems_->v);
  }
  bool operator!=(const Cedent& o) const { return !(*this == o); }

  // Same elements plus exactly {f}; used by rule checks to avoid allocating.
  bool equals_with(const Cedent& base, FormulaRef f) const {
    if (base.contains(f)) return *this == base;
    if (size() != base.size() + 1) return false;
    std::size_t i = 0;
    bool saw = false;
    for (FormulaRef g : elems_->v) {
      if (g == f) { saw = true; continue; }
      if (i >= base.size() || base[i] != g) return false;
      ++i;
    }
    return saw && i == base.size();
  }

  std::size_t hash() const { return elems_->hash; }

  const void* rep_identity() const { return elems_.get(); }

 private:
  struct Rep {
    Vec v;
    std::size_t hash;
    Rep() : hash(compute_hash(v)) {}
    explicit Rep(Vec vec) : v(std::move(vec)), hash(compute_hash(v)) {}
    static std::size_t compute_hash(const Vec& v) {
      std::size_t h = 0x9e3779b97f4a7c15ull;
      for (FormulaRef g : v) h = h * 1000003u ^ std::hash<const void*>()(g);
      return h;
    }
  };
  explicit Cedent(std::shared_ptr<const Rep> v) : elems_(std::move(v)) {}
  static const std::shared_ptr<const Rep>& empty_rep() {
    static const std::shared_ptr<const Rep> rep = std::make_shared<const Rep>();
    return rep;
  }
  std::shared_ptr<const Rep> elems_;
};

struct Sequent {
  Cedent antecedent;
  FormulaRef succedent = nullptr;

  Sequent() = default;
  Sequent(Cedent ant, FormulaRef succ) : antecedent(std::move(ant)), succedent(succ) {}

  bool operator==(const Sequent& o) const {
    return succedent == o.succedent && antecedent == o.antecedent;
  }
  bool operator!=(const Sequent& o) const { return !(*this == o); }

  // Antecedent shrinks, succedent fixed.
  bool subsequent_of(const Sequent& o) const {
    return succedent == o.succedent && antecedent.subset_of(o.antecedent);
  }
};

struct SequentHash {
  std::size_t operator()(const Sequent& s) const {
    return s.antecedent.hash() * 1000003u ^ std::hash<const void*>()(s.succedent);
  }
};

inline std::string to_string(const Cedent& g) {
  std::string out;
  bool first = true;
  for (FormulaRef f : g) {
    if (!first) out += ", ";
    first = false;
    out += to_string(f);
  }
  return out;
}

inline std::string to_string(const Sequent& s) {
  std::string out = to_string(s.antecedent);
  if (!out.empty()) out += ' ';
  out += "=> ";
  out += to_string(s.succedent);
  return out;
}

// Grammar: `g1, g2, ... => f`; the antecedent may be empty.
inline Sequent parse_sequent(std::string_view text) {
  detail::FormulaParser p(text);
  std::vector<FormulaRef> ant;
  p.skip_ws();
  if (!p.match("=>")) {
    for (;;) {
      ant.push_back(p.parse_impl());
      if (p.match(",")) continue;
      if (p.match("=>")) break;
      p.fail("expected ',' or '=>'");
    }
  }
  FormulaRef succ = p.parse_impl();
  if (!p.at_end()) p.fail("unexpected trailing input");
  return Sequent(Cedent(ant.begin(), ant.end()), succ);
}

// Parses a comma-separated cedent (possibly empty text).
inline Cedent parse_cedent(std::string_view text) {
  detail::FormulaParser p(text);
  std::vector<FormulaRef> fs;
  if (!p.at_end()) {
    for (;;) {
      fs.push_back(p.parse_impl());
      if (p.match(",")) continue;
      if (!p.at_end()) p.fail("expected ',' or end of cedent");
      break;
    }
  }
  return Cedent(fs.begin(), fs.end());
}

}  // namespace njp
