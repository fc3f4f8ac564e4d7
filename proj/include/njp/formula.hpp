// Propositional formulas over bottom / and / or / implication, with an
// interning table so that structural equality is pointer equality.
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace njp {

class Formula;
using FormulaRef = const Formula*;

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : Error {
  std::size_t position;
  ParseError(const std::string& msg, std::size_t pos)
      : Error(msg + " at offset " + std::to_string(pos)), position(pos) {}
};

struct PreconditionError : Error {
  using Error::Error;
};

// Immutable formula node. Construction goes through the static factories,
// which intern every node: two structurally equal formulas are always the
// same pointer. Negation is not a constructor; ~a is impl(a, bottom).
class Formula {
 public:
  enum class Kind : unsigned char { Atom, Bottom, Conj, Disj, Impl };

  Kind kind() const { return kind_; }
  const std::string& atom_name() const { return name_; }
  FormulaRef left() const { return left_; }
  FormulaRef right() const { return right_; }
  std::size_t hash() const { return hash_; }
  std::uint32_t size() const { return size_; }  // node count
  // True iff no strictly positive occurrence of a disjunction exists.
  bool harrop() const { return harrop_; }
  // Number of strictly positive disjunction occurrences.
  std::uint32_t spd_count() const { return spd_count_; }

  bool is_atom() const { return kind_ == Kind::Atom; }
  bool is_bottom() const { return kind_ == Kind::Bottom; }
  bool is_atomic() const { return kind_ == Kind::Atom || kind_ == Kind::Bottom; }

  static FormulaRef atom(std::string_view name);
  static FormulaRef bottom();
  static FormulaRef conj(FormulaRef l, FormulaRef r);
  static FormulaRef disj(FormulaRef l, FormulaRef r);
  static FormulaRef impl(FormulaRef l, FormulaRef r);
  static FormulaRef neg(FormulaRef f) { return impl(f, bottom()); }

 private:
  Formula() = default;

  static constexpr std::size_t kPrefixLen = 16;

  Kind kind_ = Kind::Bottom;
  bool harrop_ = true;
  unsigned char prefix_len_ = 0;  // < kPrefixLen means the print fits entirely
  char prefix_[kPrefixLen] = {};  // leading chars of the canonical print
  FormulaRef left_ = nullptr;
  FormulaRef right_ = nullptr;
  std::string name_;
  std::size_t hash_ = 0;
  std::uint32_t size_ = 1;
  std::uint32_t spd_count_ = 0;

  friend int formula_compare(FormulaRef a, FormulaRef b);

  void init_prefix();  // defined after PrintCursor

  struct Key {
    Kind kind;
    FormulaRef left;
    FormulaRef right;
    std::string_view name;
    bool operator==(const Key& o) const {
      return kind == o.kind && left == o.left && right == o.right && name == o.name;
    }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::size_t h = static_cast<std::size_t>(k.kind);
      h = h * 1000003u ^ std::hash<const void*>()(k.left);
      h = h * 1000003u ^ std::hash<const void*>()(k.right);
      h = h * 1000003u ^ std::hash<std::string_view>()(k.name);
      return h;
    }
  };

  static FormulaRef intern(Kind kind, FormulaRef l, FormulaRef r, std::string_view name);
};

inline FormulaRef Formula::intern(Kind kind, FormulaRef l, FormulaRef r,
                                  std::string_view name) {
  // Table owns the nodes for the lifetime of the process.
  static std::mutex mu;
  static std::unordered_map<Key, std::unique_ptr<Formula>, KeyHash> table;

  std::lock_guard<std::mutex> lock(mu);
  Key key{kind, l, r, name};
  auto it = table.find(key);
  if (it != table.end()) return it->second.get();

  auto node = std::unique_ptr<Formula>(new Formula());
  node->kind_ = kind;
  node->left_ = l;
  node->right_ = r;
  node->name_ = std::string(name);
  switch (kind) {
    case Kind::Atom:
    case Kind::Bottom:
      node->size_ = 1;
      node->harrop_ = true;
      node->spd_count_ = 0;
      break;
    case Kind::Conj:
      node->size_ = 1 + l->size_ + r->size_;
      node->harrop_ = l->harrop_ && r->harrop_;
      node->spd_count_ = l->spd_count_ + r->spd_count_;
      break;
    case Kind::Disj:
      node->size_ = 1 + l->size_ + r->size_;
      node->harrop_ = false;
      node->spd_count_ = 1 + l->spd_count_ + r->spd_count_;
      break;
    case Kind::Impl:
      node->size_ = 1 + l->size_ + r->size_;
      node->harrop_ = r->harrop_;
      node->spd_count_ = r->spd_count_;
      break;
  }
  node->hash_ = KeyHash()(Key{kind, l, r, node->name_});
  node->init_prefix();
  FormulaRef res = node.get();
  table.emplace(Key{kind, res->left_, res->right_, res->name_}, std::move(node));
  return res;
}

inline FormulaRef Formula::atom(std::string_view name) {
  if (name.empty()) throw PreconditionError("atom name must be nonempty");
  return intern(Kind::Atom, nullptr, nullptr, name);
}
inline FormulaRef Formula::bottom() {
  return intern(Kind::Bottom, nullptr, nullptr, {});
}
inline FormulaRef Formula::conj(FormulaRef l, FormulaRef r) {
  return intern(Kind::Conj, l, r, {});
}
inline FormulaRef Formula::disj(FormulaRef l, FormulaRef r) {
  return intern(Kind::Disj, l, r, {});
}
inline FormulaRef Formula::impl(FormulaRef l, FormulaRef r) {
  return intern(Kind::Impl, l, r, {});
}

// ---------------------------------------------------------------------------
// Printing. Grammar: atoms, _|_, ~ (input sugar only), & | ->, precedence
// ~ > & > | > ->, all binary connectives right-associative. The printer is
// injective on interned formulas and never emits ~, so prints are canonical.

namespace detail {

inline int precedence(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Impl: return 1;
    case Formula::Kind::Disj: return 2;
    case Formula::Kind::Conj: return 3;
    default: return 4;
  }
}

inline const char* connective_token(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Impl: return " -> ";
    case Formula::Kind::Disj: return " | ";
    case Formula::Kind::Conj: return " & ";
    default: return "";
  }
}

// Streams the canonical print of a formula chunk by chunk without
// materializing it; used both by to_string and by the ordering comparator
// (large formulas would otherwise cost megabytes per comparison).
class PrintCursor {
 public:
  explicit PrintCursor(FormulaRef f) { push_formula(f, 0); }

  // Fills buf with up to cap chars, returns the count; 0 means exhausted.
  std::size_t next_chunk(char* buf, std::size_t cap) {
    std::size_t n = 0;
    while (n < cap && !stack_.empty()) {
      Item& it = stack_.back();
      if (it.text != nullptr) {
        while (n < cap && it.text[it.offset] != '\0') buf[n++] = it.text[it.offset++];
        if (it.text[it.offset] == '\0') stack_.pop_back();
        continue;
      }
      FormulaRef f = it.formula;
      int parent = it.parent_prec;
      bool left_side = it.left_side;
      stack_.pop_back();
      switch (f->kind()) {
        case Formula::Kind::Atom:
          push_text(f->atom_name().c_str());
          break;
        case Formula::Kind::Bottom:
          push_text("_|_");
          break;
        default: {
          int prec = precedence(f->kind());
          // Right-associative: a left child at equal precedence needs parens.
          bool parens = prec < parent || (prec == parent && left_side);
          if (parens) push_text(")");
          push_formula(f->right(), prec, false);
          push_text(connective_token(f->kind()));
          push_formula(f->left(), prec, true);
          if (parens) push_text("(");
          break;
        }
      }
    }
    return n;
  }

 private:
  struct Item {
    const char* text = nullptr;  // null => formula item
    std::size_t offset = 0;
    FormulaRef formula = nullptr;
    int parent_prec = 0;
    bool left_side = false;
  };
  std::vector<Item> stack_;

  void push_text(const char* t) { stack_.push_back(Item{t, 0, nullptr, 0, false}); }
  void push_formula(FormulaRef f, int parent_prec, bool left_side = false) {
    stack_.push_back(Item{nullptr, 0, f, parent_prec, left_side});
  }
};

}  // namespace detail

inline std::string to_string(FormulaRef f) {
  std::string out;
  out.reserve(f->size() * 4);
  detail::PrintCursor cur(f);
  char buf[256];
  while (std::size_t n = cur.next_chunk(buf, sizeof buf)) out.append(buf, n);
  return out;
}

// prefix_len_ < kPrefixLen means the whole print is stored; == kPrefixLen
// means it was truncated (prints of exactly kPrefixLen chars fall back to
// streaming on ties, which stays correct).
inline void Formula::init_prefix() {
  detail::PrintCursor cur(this);
  prefix_len_ = static_cast<unsigned char>(cur.next_chunk(prefix_, kPrefixLen));
}

// Total order by canonical printed form; <0, 0, >0 like strcmp. Used for the
// canonical ordering of cedents and for deterministic unit selection. The
// stored prefixes settle almost every comparison without streaming.
inline int formula_compare(FormulaRef a, FormulaRef b) {
  if (a == b) return 0;
  std::size_t la = a->prefix_len_, lb = b->prefix_len_;
  std::size_t common = la < lb ? la : lb;
  for (std::size_t i = 0; i < common; ++i)
    if (a->prefix_[i] != b->prefix_[i])
      return static_cast<unsigned char>(a->prefix_[i]) < static_cast<unsigned char>(b->prefix_[i])
                 ? -1
                 : 1;
  bool a_complete = la < Formula::kPrefixLen;
  bool b_complete = lb < Formula::kPrefixLen;
  if (a_complete && b_complete) return la < lb ? -1 : (la > lb ? 1 : 0);
  if (a_complete) return -1;  // a's whole print is a prefix of b's
  if (b_complete) return 1;
  detail::PrintCursor ca(a), cb(b);
  char bufa[128], bufb[128];
  std::size_t na = 0, nb = 0, ia = 0, ib = 0;
  for (;;) {
    if (ia == na) { na = ca.next_chunk(bufa, sizeof bufa); ia = 0; }
    if (ib == nb) { nb = cb.next_chunk(bufb, sizeof bufb); ib = 0; }
    if (na == 0 && nb == 0) return 0;  // unreachable for interned distinct nodes
    if (na == 0) return -1;
    if (nb == 0) return 1;
    while (ia < na && ib < nb) {
      if (bufa[ia] != bufb[ib])
        return static_cast<unsigned char>(bufa[ia]) < static_cast<unsigned char>(bufb[ib]) ? -1 : 1;
      ++ia, ++ib;
    }
  }
}

struct FormulaLess {
  bool operator()(FormulaRef a, FormulaRef b) const { return formula_compare(a, b) < 0; }
};

// ---------------------------------------------------------------------------
// Parser.

namespace detail {

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : text_(text) {}

  FormulaRef parse_full() {
    FormulaRef f = parse_impl();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

  // Exposed for the sequent parser: parses one formula, stops at , or =>.
  FormulaRef parse_impl() {
    FormulaRef l = parse_or();
    skip_ws();
    if (match("->")) return Formula::impl(l, parse_impl());
    return l;
  }

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                   text_[pos_] == '\r' || text_[pos_] == '\n'))
      ++pos_;
  }
  bool match(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  std::size_t pos() const { return pos_; }
  bool at_end() {
    skip_ws();
    return pos_ == text_.size();
  }
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos_); }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  FormulaRef parse_or() {
    FormulaRef l = parse_and();
    if (match("|")) return Formula::disj(l, parse_or());
    return l;
  }
  FormulaRef parse_and() {
    FormulaRef l = parse_unary();
    if (match("&")) return Formula::conj(l, parse_and());
    return l;
  }
  FormulaRef parse_unary() {
    skip_ws();
    if (match("~")) return Formula::impl(parse_unary(), Formula::bottom());
    return parse_primary();
  }
  FormulaRef parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("formula expected");
    if (match("_|_")) return Formula::bottom();
    if (match("(")) {
      FormulaRef f = parse_impl();
      if (!match(")")) fail("expected ')'");
      return f;
    }
    char c = text_[pos_];
    if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size()) {
        char d = text_[pos_];
        bool ident = (d >= 'A' && d <= 'Z') || (d >= 'a' && d <= 'z') ||
                     (d >= '0' && d <= '9') || d == '_';
        if (!ident) break;
        ++pos_;
      }
      return Formula::atom(text_.substr(start, pos_ - start));
    }
    fail("formula expected");
  }
};

}  // namespace detail

inline FormulaRef parse_formula(std::string_view text) {
  return detail::FormulaParser(text).parse_full();
}

}  // namespace njp
