#include "sigmalab/descriptor.hpp"

#include <cctype>
#include <map>
#include <sstream>

#include "sigmalab/errors.hpp"

namespace sigmalab {

// Provided by the generated builtins translation unit.
const std::map<std::string, std::string>& builtin_table();

TowerPtr TowerSpec::make() const {
  std::vector<int64_t> eis = eisenstein;
  if (eis.empty()) eis = {-int64_t(p)};
  return Tower::make(p, eis, 1, N);
}

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

int to_int(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw ParseError("bad " + what + " '" + s + "'");
    return int(v);
  } catch (const std::logic_error&) {
    throw ParseError("bad " + what + " '" + s + "'");
  }
}

int64_t to_int64(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw ParseError("bad " + what + " '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("bad " + what + " '" + s + "'");
  }
}

TowerSpec parse_tower_line(std::istringstream& is) {
  TowerSpec ts;
  std::string kv;
  int e = -1;
  bool have_p = false;
  while (is >> kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ParseError("tower field without '=': " + kv);
    const std::string k = kv.substr(0, eq), v = kv.substr(eq + 1);
    if (k == "p") {
      ts.p = uint64_t(to_int64(v, "p"));
      have_p = true;
    } else if (k == "N") {
      ts.N = to_int(v, "N");
    } else if (k == "e") {
      e = to_int(v, "e");
    } else if (k == "eis") {
      std::stringstream ss(v);
      std::string item;
      while (std::getline(ss, item, ',')) ts.eisenstein.push_back(to_int64(item, "Eisenstein coefficient"));
    } else {
      throw ParseError("unknown tower field '" + k + "'");
    }
  }
  if (!have_p) throw ParseError("tower line needs p=");
  if (e >= 0 && !ts.eisenstein.empty() && int(ts.eisenstein.size()) != e)
    throw ParseError("tower e does not match the Eisenstein coefficient count");
  if (e > 1 && ts.eisenstein.empty()) throw ParseError("ramified tower needs eis=");
  return ts;
}

class ExprParser {
 public:
  ExprParser(const std::string& s, const TowerPtr& t, int nvars) : s_(s), t_(t), nvars_(nvars) {}

  LaurentElement parse() {
    LaurentElement sum(t_, nvars_);
    skip();
    if (pos_ >= s_.size()) throw ParseError("empty expression");
    bool first = true;
    while (true) {
      skip();
      if (pos_ >= s_.size()) break;
      int sign = 1;
      if (s_[pos_] == '+' || s_[pos_] == '-') {
        sign = s_[pos_] == '-' ? -1 : 1;
        ++pos_;
      } else if (!first) {
        throw ParseError("expected '+' or '-' at position " + std::to_string(pos_) + " in '" + s_ + "'");
      }
      first = false;
      LaurentElement term = parse_term();
      sum += sign < 0 ? -term : term;
    }
    return sum;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  int parse_exponent() {
    skip();
    if (pos_ >= s_.size() || s_[pos_] != '^') return 1;
    ++pos_;
    skip();
    bool paren = false;
    if (pos_ < s_.size() && (s_[pos_] == '(' || s_[pos_] == '{')) {
      paren = true;
      ++pos_;
      skip();
    }
    size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const int v = to_int(s_.substr(start, pos_ - start), "exponent");
    if (paren) {
      skip();
      if (pos_ >= s_.size() || (s_[pos_] != ')' && s_[pos_] != '}')) throw ParseError("unclosed exponent");
      ++pos_;
    }
    return v;
  }

  LaurentElement parse_term() {
    PadicNumber c = PadicNumber::one(t_);
    Exponent e(static_cast<size_t>(nvars_), 0);
    bool any = false;
    while (true) {
      skip();
      if (pos_ >= s_.size()) break;
      const char ch = s_[pos_];
      if (std::isdigit(static_cast<unsigned char>(ch))) {
        size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        const int64_t v = to_int64(s_.substr(start, pos_ - start), "integer");
        const int k = parse_exponent();
        if (k < 0) throw ParseError("negative power of an integer");
        c *= PadicNumber::from_int(t_, v).pow(k);
      } else if (std::isalpha(static_cast<unsigned char>(ch))) {
        size_t start = pos_;
        while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        const std::string id = s_.substr(start, pos_ - start);
        const int k = parse_exponent();
        if (id == "p") {
          if (k < 0) throw ParseError("negative power of p");
          c *= PadicNumber::from_int(t_, int64_t(t_->p())).pow(k);
        } else if (id == "pi") {
          if (k < 0) throw ParseError("negative power of pi");
          c *= PadicNumber::pi(t_).pow(k);
        } else if (id == "x" && nvars_ == 1) {
          e[0] += k;
        } else if (id.size() > 1 && id[0] == 'x') {
          const int i = to_int(id.substr(1), "variable index");
          if (i < 1 || i > nvars_) throw ParseError("variable " + id + " out of range");
          e[i - 1] += k;
        } else {
          throw ParseError("unknown symbol '" + id + "'");
        }
      } else {
        throw ParseError("unexpected character '" + std::string(1, ch) + "' in '" + s_ + "'");
      }
      any = true;
      skip();
      if (pos_ < s_.size() && s_[pos_] == '*') {
        ++pos_;
        continue;
      }
      break;
    }
    if (!any) throw ParseError("empty term in '" + s_ + "'");
    return LaurentElement::monomial(c, e);
  }

  const std::string& s_;
  TowerPtr t_;
  int nvars_;
  size_t pos_ = 0;
};

}  // namespace

LaurentElement parse_expression(const std::string& expr, const TowerPtr& t, int nvars) {
  return ExprParser(expr, t, nvars).parse();
}

Descriptor parse_descriptor(const std::string& text) {
  Descriptor d;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool have_scheme = false, have_rank = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    try {
      if (kw == "tower") {
        d.tower = parse_tower_line(ls);
      } else if (kw == "scheme") {
        std::string kind;
        int n = 1;
        ls >> kind;
        if (!(ls >> n)) n = 1;
        d.kind = parse_scheme_kind(kind);
        d.n = n;
        if (n < 1) throw ParseError("scheme dimension must be >= 1");
        have_scheme = true;
      } else if (kw == "rank") {
        if (!(ls >> d.rank) || d.rank < 1) throw ParseError("bad rank");
        have_rank = true;
      } else if (kw == "i0") {
        int v;
        if (!(ls >> v)) throw ParseError("bad i0");
        d.i0 = v;
      } else if (kw == "name") {
        std::getline(ls, d.name);
        d.name = trim(d.name);
      } else if (kw == "entry") {
        int i, j;
        if (!(ls >> i >> j)) throw ParseError("entry needs row and column");
        std::string rest;
        std::getline(ls, rest);
        rest = trim(rest);
        if (rest.empty()) throw ParseError("entry without expression");
        d.entries.emplace_back(i, j, rest);
      } else {
        throw ParseError("unknown keyword '" + kw + "'");
      }
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!have_scheme) throw ParseError("descriptor lacks a scheme line");
  if (!have_rank) throw ParseError("descriptor lacks a rank line");
  for (const auto& [i, j, ex] : d.entries)
    if (i < 0 || j < 0 || i >= d.rank || j >= d.rank) throw ParseError("entry index out of range");
  if (d.i0 && (*d.i0 < 0 || *d.i0 >= d.rank)) throw ParseError("i0 out of range");
  return d;
}

SigmaMatrix build_matrix(const Descriptor& d, TowerPtr t) {
  if (!t) {
    if (!d.tower) throw ParseError("descriptor has no tower line and none was supplied");
    t = d.tower->make();
  }
  SigmaMatrix M(t, d.rank, d.n);
  for (const auto& [i, j, ex] : d.entries) M.set(i, j, M.at(i, j) + parse_expression(ex, t, d.n));
  if (d.i0) M.set_i0(*d.i0);
  if (d.kind == SchemeKind::AffineSpace)
    for (int i = 0; i < d.rank; ++i)
      for (int j = 0; j < d.rank; ++j)
        if (!M.at(i, j).is_polynomial()) throw ParseError("negative exponent in an affine-space descriptor");
  return M;
}

BaseScheme descriptor_scheme(const Descriptor& d, uint64_t q) { return BaseScheme{d.kind, d.n, q}; }

std::string write_expression(const LaurentElement& a) {
  if (a.is_zero()) return "0";
  const int e = a.tower()->e();
  std::ostringstream os;
  bool first = true;
  for (const auto& [ex, c] : a.terms()) {
    std::string mono;
    for (int i = 0; i < a.nvars(); ++i) {
      if (!ex[i]) continue;
      const std::string var = a.nvars() == 1 ? "x" : "x" + std::to_string(i + 1);
      mono += "*" + var + (ex[i] == 1 ? "" : "^" + std::to_string(ex[i]));
    }
    for (int j = 0; j < e; ++j) {
      const int64_t v = c.signed_coeff(0, j);
      if (!v) continue;
      const int64_t mag = v < 0 ? -v : v;
      os << (first ? (v < 0 ? "-" : "") : (v < 0 ? " - " : " + "));
      first = false;
      os << mag;
      if (j) os << "*pi" << (j == 1 ? "" : "^" + std::to_string(j));
      os << mono;
    }
  }
  return first ? "0" : os.str();
}

std::string write_descriptor(const SigmaMatrix& M, SchemeKind kind, bool with_tower, const std::string& header_comment) {
  std::ostringstream os;
  if (!header_comment.empty()) {
    std::istringstream hc(header_comment);
    std::string l;
    while (std::getline(hc, l)) os << "# " << l << "\n";
  }
  const TowerPtr& t = M.tower();
  if (with_tower) {
    os << "tower p=" << t->p() << " e=" << t->e() << " eis=";
    for (size_t k = 0; k < t->eisenstein().size(); ++k) os << (k ? "," : "") << t->eisenstein()[k];
    os << " N=" << M.prec() << "\n";
  }
  os << "scheme " << scheme_kind_name(kind) << " " << M.nvars() << "\n";
  os << "rank " << M.rank() << "\n";
  if (M.i0()) os << "i0 " << *M.i0() << "\n";
  for (int i = 0; i < M.rank(); ++i)
    for (int j = 0; j < M.rank(); ++j)
      if (!M.at(i, j).is_zero()) os << "entry " << i << " " << j << " " << write_expression(M.at(i, j)) << "\n";
  return os.str();
}

std::vector<std::string> builtin_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : builtin_table()) out.push_back(k);
  return out;
}

std::string builtin_text(const std::string& name) {
  const auto& tab = builtin_table();
  auto it = tab.find(name);
  if (it == tab.end()) throw ParseError("unknown builtin '" + name + "'");
  return it->second;
}

Descriptor builtin_descriptor(const std::string& name) {
  Descriptor d = parse_descriptor(builtin_text(name));
  if (d.name.empty()) d.name = name;
  return d;
}

}  // namespace sigmalab
