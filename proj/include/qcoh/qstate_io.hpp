#pragma once

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qcoh/decomposition.hpp"
#include "qcoh/state.hpp"

namespace qcoh {

// Structural problem in a QSTATE document; `line` is 1-based.
class ParseError : public std::runtime_error {
public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  int line() const { return line_; }

private:
  int line_;
};

struct ParseResult {
  State state;
  // Present when the document was a `mixed` block whose components all carry
  // a cut tag or a product body.
  std::optional<Decomposition> decomposition;
};

namespace qstate_detail {

struct TokenLine {
  int number = 0;
  std::vector<std::string> tokens;
};

inline std::vector<TokenLine> tokenize(std::istream& in) {
  std::vector<TokenLine> out;
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    TokenLine tl;
    tl.number = number;
    std::string tok;
    while (ls >> tok) tl.tokens.push_back(tok);
    if (!tl.tokens.empty()) out.push_back(std::move(tl));
  }
  return out;
}

class Cursor {
public:
  explicit Cursor(std::vector<TokenLine> lines) : lines_(std::move(lines)) {}

  bool done() const { return pos_ >= lines_.size(); }

  const TokenLine& peek() const {
    if (done()) throw ParseError(last_line() + 1, "unexpected end of file");
    return lines_[pos_];
  }

  const TokenLine& next() {
    const TokenLine& tl = peek();
    ++pos_;
    return tl;
  }

  int last_line() const {
    return lines_.empty() ? 0 : lines_.back().number;
  }

private:
  std::vector<TokenLine> lines_;
  size_t pos_ = 0;
};

inline double parse_real(const std::string& tok, int line) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size())
    throw ParseError(line, "bad number '" + tok + "'");
  return v;
}

inline int parse_int(const std::string& tok, int line) {
  char* end = nullptr;
  const long v = std::strtol(tok.c_str(), &end, 10);
  if (end != tok.c_str() + tok.size())
    throw ParseError(line, "bad integer '" + tok + "'");
  return static_cast<int>(v);
}

inline int parse_basis_index(const std::string& tok, const Dims& dims, int line) {
  if (static_cast<int>(tok.size()) != dims.count())
    throw ParseError(line, "basis string '" + tok + "' needs one digit per subsystem");
  std::vector<int> digits;
  for (int k = 0; k < dims.count(); ++k) {
    const char c = tok[static_cast<size_t>(k)];
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw ParseError(line, "basis string '" + tok + "' has a non-digit");
    const int d = c - '0';
    if (d >= dims.local(k))
      throw ParseError(line, "basis digit " + std::to_string(d) +
                                 " exceeds local dimension of subsystem " +
                                 std::to_string(k));
    digits.push_back(d);
  }
  return dims.index(digits);
}

// amp lines until a line whose first token is one of the stop keywords
// (or EOF when no stop keyword is given).
inline State parse_pure_body(Cursor& cur, const Dims& dims,
                             const std::vector<std::string>& stops) {
  std::vector<Complex> amps(static_cast<size_t>(dims.total()), 0.0);
  std::vector<bool> seen(static_cast<size_t>(dims.total()), false);
  bool any = false;
  while (!cur.done()) {
    const TokenLine& tl = cur.peek();
    const std::string& head = tl.tokens.front();
    bool stop = false;
    for (const std::string& s : stops)
      if (head == s) stop = true;
    if (stop) break;
    if (head != "amp")
      throw ParseError(tl.number, "expected 'amp', got '" + head + "'");
    if (tl.tokens.size() != 4)
      throw ParseError(tl.number, "amp lines need: amp <basis> <re> <im>");
    const int idx = parse_basis_index(tl.tokens[1], dims, tl.number);
    if (seen[static_cast<size_t>(idx)])
      throw ParseError(tl.number, "duplicate amplitude for basis " + tl.tokens[1]);
    seen[static_cast<size_t>(idx)] = true;
    amps[static_cast<size_t>(idx)] = Complex(parse_real(tl.tokens[2], tl.number),
                                             parse_real(tl.tokens[3], tl.number));
    any = true;
    cur.next();
  }
  if (!any) throw ParseError(cur.done() ? cur.last_line() : cur.peek().number,
                             "pure body has no amp lines");
  return make_pure(amps, dims);
}

inline Matrix parse_matrix_rows(Cursor& cur, int side) {
  Matrix m(side);
  for (int i = 0; i < side; ++i) {
    const TokenLine& tl = cur.next();
    if (static_cast<int>(tl.tokens.size()) != 2 * side)
      throw ParseError(tl.number, "matrix row needs " + std::to_string(2 * side) +
                                      " numbers, got " +
                                      std::to_string(tl.tokens.size()));
    for (int j = 0; j < side; ++j)
      m(i, j) = Complex(parse_real(tl.tokens[static_cast<size_t>(2 * j)], tl.number),
                        parse_real(tl.tokens[static_cast<size_t>(2 * j + 1)], tl.number));
  }
  return m;
}

struct RawComponent {
  double weight = 0.0;
  std::optional<Cut> cut;
  std::optional<State> state;
  std::vector<State> factors;
};

inline RawComponent parse_component(Cursor& cur, const Dims& dims) {
  RawComponent rc;
  {
    const TokenLine& tl = cur.next();
    if (tl.tokens.front() != "component" || tl.tokens.size() != 2)
      throw ParseError(tl.number, "expected 'component <weight>'");
    rc.weight = parse_real(tl.tokens[1], tl.number);
  }
  if (!cur.done() && cur.peek().tokens.front() == "cut") {
    const TokenLine& tl = cur.next();
    if (tl.tokens.size() != 2)
      throw ParseError(tl.number, "expected 'cut <solo-index>'");
    const int solo = parse_int(tl.tokens[1], tl.number);
    if (solo < 0 || solo >= dims.count())
      throw ParseError(tl.number, "cut index out of range");
    rc.cut = Cut{solo};
  }
  const TokenLine& kind = cur.next();
  const std::string& head = kind.tokens.front();
  if (head == "pure") {
    rc.state = parse_pure_body(cur, dims, {"end"});
  } else if (head == "matrix") {
    rc.state = State(parse_matrix_rows(cur, dims.total()), dims);
  } else if (head == "product") {
    for (int k = 0; k < dims.count(); ++k) {
      const Dims local({dims.local(k)});
      const TokenLine& fk = cur.next();
      if (fk.tokens.front() == "pure") {
        rc.factors.push_back(parse_pure_body(cur, local, {"pure", "matrix", "end"}));
      } else if (fk.tokens.front() == "matrix") {
        rc.factors.push_back(State(parse_matrix_rows(cur, local.total()), local));
      } else {
        throw ParseError(fk.number, "expected factor 'pure' or 'matrix', got '" +
                                        fk.tokens.front() + "'");
      }
    }
  } else {
    throw ParseError(kind.number,
                     "expected 'pure', 'matrix' or 'product', got '" + head + "'");
  }
  const TokenLine& end = cur.next();
  if (end.tokens.front() != "end")
    throw ParseError(end.number, "expected 'end', got '" + end.tokens.front() + "'");
  return rc;
}

}  // namespace qstate_detail

// Parses a QSTATE v1 document. Structural problems raise ParseError (with a
// line number); state-level violations (normalization, weights, hermiticity)
// raise qcoh::Error.
inline ParseResult parse_qstate(std::istream& in) {
  using namespace qstate_detail;
  Cursor cur(tokenize(in));

  {
    const TokenLine& tl = cur.next();
    if (tl.tokens.size() != 2 || tl.tokens[0] != "qstate" || tl.tokens[1] != "v1")
      throw ParseError(tl.number, "expected header 'qstate v1'");
  }
  Dims dims;
  {
    const TokenLine& tl = cur.next();
    if (tl.tokens.front() != "dims" || tl.tokens.size() < 2)
      throw ParseError(tl.number, "expected 'dims d1 d2 ...'");
    std::vector<int> d;
    for (size_t i = 1; i < tl.tokens.size(); ++i)
      d.push_back(parse_int(tl.tokens[i], tl.number));
    try {
      dims = Dims(d);
    } catch (const Error& e) {
      throw ParseError(tl.number, e.what());
    }
  }

  const TokenLine& body = cur.next();
  const std::string& head = body.tokens.front();
  if (head == "pure") {
    State s = parse_pure_body(cur, dims, {});
    if (!cur.done())
      throw ParseError(cur.peek().number, "trailing content after pure body");
    return ParseResult{std::move(s), std::nullopt};
  }
  if (head == "matrix") {
    State s(parse_matrix_rows(cur, dims.total()), dims);
    if (!cur.done())
      throw ParseError(cur.peek().number, "trailing content after matrix body");
    return ParseResult{std::move(s), std::nullopt};
  }
  if (head != "mixed")
    throw ParseError(body.number,
                     "expected 'pure', 'matrix' or 'mixed', got '" + head + "'");

  std::vector<RawComponent> raw;
  while (!cur.done()) raw.push_back(parse_component(cur, dims));
  if (raw.empty())
    throw ParseError(body.number, "mixed body has no components");

  bool tagged = true;
  std::vector<Component> comps;
  std::vector<std::pair<double, State>> parts;
  for (RawComponent& rc : raw) {
    State st = rc.factors.empty() ? std::move(*rc.state) : kron_all(rc.factors);
    parts.emplace_back(rc.weight, st);
    if (rc.cut) {
      comps.emplace_back(rc.weight, std::move(st), *rc.cut);
    } else if (!rc.factors.empty()) {
      comps.emplace_back(rc.weight, std::move(st), std::move(rc.factors));
    } else {
      tagged = false;
    }
  }
  State assembled = mix(parts);
  std::optional<Decomposition> decomp;
  if (tagged) decomp = Decomposition(std::move(comps));
  return ParseResult{std::move(assembled), std::move(decomp)};
}

inline ParseResult parse_qstate(const std::string& text) {
  std::istringstream in(text);
  return parse_qstate(in);
}

// Serializes a state in matrix form with enough digits for exact round-trips.
inline void write_qstate(std::ostream& out, const State& s) {
  out << "qstate v1\n";
  out << "dims";
  for (int d : s.dims().list()) out << ' ' << d;
  out << "\nmatrix\n";
  char buf[32];
  const int n = s.side();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Complex& z = s.entry(i, j);
      std::snprintf(buf, sizeof buf, "%.17g", z.real());
      out << (j ? " " : "") << buf;
      std::snprintf(buf, sizeof buf, "%.17g", z.imag());
      out << ' ' << buf;
    }
    out << '\n';
  }
}

inline std::string to_qstate_string(const State& s) {
  std::ostringstream out;
  write_qstate(out, s);
  return out.str();
}

}  // namespace qcoh
