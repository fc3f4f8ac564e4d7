// Text formats: sequent-set files, clause files, and the s-expression
// certificate format for cut deductions.
#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "njp/cedent.hpp"
#include "njp/horn.hpp"

namespace njp {

// One sequent per line; `#` starts a comment.
inline std::vector<Sequent> parse_sequent_file(const std::string& text) {
  std::vector<Sequent> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    bool blank = true;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    if (blank) continue;
    out.push_back(parse_sequent(line));
  }
  return out;
}

inline std::string to_string(const std::vector<Sequent>& seqs) {
  std::string out;
  for (const Sequent& s : seqs) out += to_string(s) + "\n";
  return out;
}

// One clause per line: whitespace-separated literals, `-` prefix for
// negation; each literal body parses as a formula (so no spaces inside).
inline HornClauseSet parse_clause_file(const std::string& text) {
  HornClauseSet h;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    std::vector<FormulaRef> negs;
    FormulaRef pos = nullptr;
    bool any = false;
    while (ls >> tok) {
      any = true;
      if (tok[0] == '-') {
        negs.push_back(parse_formula(tok.substr(1)));
      } else {
        if (pos != nullptr) throw ParseError("clause has two positive literals", 0);
        pos = parse_formula(tok);
      }
    }
    if (any) h.clauses.push_back(HornClause{Cedent(negs.begin(), negs.end()), pos});
  }
  return h;
}

inline std::string to_string(const HornClause& c) {
  std::string out;
  for (FormulaRef f : c.negatives) {
    if (!out.empty()) out += ' ';
    out += "-" + to_string(f);
  }
  if (c.positive) {
    if (!out.empty()) out += ' ';
    out += to_string(c.positive);
  }
  return out;
}

// Cut deductions as s-expressions: (leaf "<sequent>") and
// (cut "<sequent>" <left> <right>).
inline void print_cut_deduction(std::ostream& os, const CutPtr& cd, int indent = 0) {
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  if (cd->is_leaf()) {
    os << pad << "(leaf \"" << to_string(cd->conclusion()) << "\")";
    return;
  }
  os << pad << "(cut \"" << to_string(cd->conclusion()) << "\"\n";
  print_cut_deduction(os, cd->left(), indent + 1);
  os << '\n';
  print_cut_deduction(os, cd->right(), indent + 1);
  os << ')';
}

inline std::string to_string(const CutPtr& cd) {
  std::ostringstream os;
  print_cut_deduction(os, cd);
  return os.str();
}

namespace detail {

class CutParser {
 public:
  explicit CutParser(std::string_view text) : text_(text) {}

  CutPtr parse() {
    CutPtr cd = parse_node();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
    return cd;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c)
      throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }
  Sequent quoted_sequent() {
    expect('"');
    std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '"') ++pos_;
    if (pos_ >= text_.size()) throw ParseError("unterminated sequent string", start);
    Sequent s = parse_sequent(text_.substr(start, pos_ - start));
    ++pos_;
    return s;
  }

  CutPtr parse_node() {
    expect('(');
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    if (name == "leaf") {
      Sequent s = quoted_sequent();
      expect(')');
      return CutDeduction::leaf(std::move(s));
    }
    if (name != "cut") throw ParseError("expected leaf or cut", start);
    Sequent s = quoted_sequent();
    CutPtr l = parse_node();
    CutPtr r = parse_node();
    expect(')');
    CutPtr cd = CutDeduction::cut(std::move(l), std::move(r));
    if (!(cd->conclusion() == s))
      throw ParseError("cut conclusion does not match its premises", start);
    return cd;
  }
};

}  // namespace detail

inline CutPtr parse_cut_deduction(std::string_view text) {
  return detail::CutParser(text).parse();
}

}  // namespace njp
