#pragma once

#include <algorithm>
#include <cctype>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "greenq/deformation.hpp"

namespace greenq {

enum class LetterKind { Annihilate, Create };
// Composite operators A_i sum the Green components; Component letters are the
// underlying oscillators b_i^alpha.
enum class OperatorKind { Composite, Component };

struct Letter {
  LetterKind kind;
  OperatorKind op;
  int site;
  int green;  // -1 for Composite letters

  bool operator==(const Letter&) const = default;
};

/// Operator string read left to right as written between <0| and |0>; the
/// leftmost letter acts last on the ket.
struct Word {
  std::vector<Letter> letters;
  cplx coeff{1.0, 0.0};
};

inline Letter a(int site) { return {LetterKind::Annihilate, OperatorKind::Composite, site, -1}; }
inline Letter a_dag(int site) { return {LetterKind::Create, OperatorKind::Composite, site, -1}; }
inline Letter b(int site, int green) {
  return {LetterKind::Annihilate, OperatorKind::Component, site, green};
}
inline Letter b_dag(int site, int green) {
  return {LetterKind::Create, OperatorKind::Component, site, green};
}

inline Word word_of(std::initializer_list<Letter> letters) {
  Word w;
  w.letters.assign(letters);
  return w;
}

inline Word concat(const Word& lhs, const Word& rhs) {
  Word out = lhs;
  out.letters.insert(out.letters.end(), rhs.letters.begin(), rhs.letters.end());
  out.coeff = lhs.coeff * rhs.coeff;
  return out;
}

inline bool is_b_word(const Word& w) {
  return std::all_of(w.letters.begin(), w.letters.end(),
                     [](const Letter& l) { return l.op == OperatorKind::Component; });
}

inline bool is_a_word(const Word& w) {
  return std::all_of(w.letters.begin(), w.letters.end(),
                     [](const Letter& l) { return l.op == OperatorKind::Composite; });
}

/// Adjoint of the operator string: reverse the letters and flip each kind.
inline Word dagger_reversed(const Word& w) {
  Word out;
  out.coeff = std::conj(w.coeff);
  out.letters.reserve(w.letters.size());
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
    Letter l = *it;
    l.kind = (l.kind == LetterKind::Annihilate) ? LetterKind::Create : LetterKind::Annihilate;
    out.letters.push_back(l);
  }
  return out;
}

inline std::string to_string(const Letter& l) {
  std::ostringstream os;
  os << (l.op == OperatorKind::Composite ? "a" : "b");
  if (l.kind == LetterKind::Create) os << '+';
  os << "(i" << l.site;
  if (l.op == OperatorKind::Component) os << ",g" << l.green + 1;
  os << ')';
  return os.str();
}

inline std::string to_string(const Word& w) {
  std::string out;
  for (std::size_t k = 0; k < w.letters.size(); ++k) {
    if (k) out += ' ';
    out += to_string(w.letters[k]);
  }
  return out;
}

// Grammar: whitespace-separated letters `a(iK)`, `a+(iK)`, `b(iK,gM)`,
// `b+(iK,gM)` with K a site index and M a 1-based Green index.
inline Word parse_word(const std::string& text) {
  Word w;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    std::size_t pos = 0;
    auto fail = [&](const std::string& why) {
      throw validation_error("bad word letter '" + tok + "': " + why);
    };
    if (pos >= tok.size() || (tok[pos] != 'a' && tok[pos] != 'b')) fail("expected 'a' or 'b'");
    const OperatorKind op = (tok[pos] == 'a') ? OperatorKind::Composite : OperatorKind::Component;
    ++pos;
    LetterKind kind = LetterKind::Annihilate;
    if (pos < tok.size() && tok[pos] == '+') {
      kind = LetterKind::Create;
      ++pos;
    }
    if (pos >= tok.size() || tok[pos] != '(') fail("expected '('");
    ++pos;
    if (pos >= tok.size() || tok[pos] != 'i') fail("expected site token iK");
    ++pos;
    std::size_t digits = 0;
    int site = 0;
    while (pos < tok.size() && std::isdigit(static_cast<unsigned char>(tok[pos]))) {
      site = site * 10 + (tok[pos] - '0');
      ++pos;
      ++digits;
    }
    if (digits == 0) fail("missing site number");
    int green = -1;
    if (op == OperatorKind::Component) {
      if (pos >= tok.size() || tok[pos] != ',') fail("component letter needs ,gM");
      ++pos;
      if (pos >= tok.size() || tok[pos] != 'g') fail("expected green token gM");
      ++pos;
      digits = 0;
      int g = 0;
      while (pos < tok.size() && std::isdigit(static_cast<unsigned char>(tok[pos]))) {
        g = g * 10 + (tok[pos] - '0');
        ++pos;
        ++digits;
      }
      if (digits == 0 || g < 1) fail("green index must be >= 1");
      green = g - 1;
    }
    if (pos >= tok.size() || tok[pos] != ')') fail("expected ')'");
    if (pos + 1 != tok.size()) fail("trailing characters");
    w.letters.push_back({kind, op, site, green});
  }
  return w;
}

}  // namespace greenq
