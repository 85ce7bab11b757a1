#include "splitform/emit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "splitform/bounds.hpp"
#include "splitform/problem_io.hpp"
#include "splitform/solver.hpp"
#include "splitform/text.hpp"

namespace splitform {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Linear and quadratic coefficients of a row in expanded form.
struct Poly {
  std::map<int, double> lin;
  std::map<int, double> quad;
  double constant = 0.0;
};

Poly expand(const SeparableFunction& f) {
  Poly p;
  p.constant = f.constant();
  for (const auto& t : f.terms()) {
    if (t.quad != 0.0) {
      p.quad[t.var] += t.quad;
      p.constant += t.quad * t.center * t.center;
    }
    const double b = t.lin - 2.0 * t.quad * t.center;
    if (b != 0.0 || t.quad == 0.0) p.lin[t.var] += b;
  }
  return p;
}

void write_terms(std::ostream& out, const std::vector<std::pair<double, std::string>>& terms) {
  int on_line = 0;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const double c = terms[k].first;
    out << ' ' << (c < 0 ? '-' : '+') << ' ' << num(std::abs(c)) << ' ' << terms[k].second;
    if (++on_line == 6 && k + 1 < terms.size()) {
      out << "\n  ";
      on_line = 0;
    }
  }
}

std::string sense_text(Sense s) {
  return s == Sense::kLessEqual ? "<=" : s == Sense::kGreaterEqual ? ">=" : "=";
}

bool close(double a, double b, double rel) {
  if (a == b) return true;
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(cur);
    cur.clear();
  };
  for (std::size_t k = 0; k < text.size(); ++k) {
    const char c = text[k];
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else if (c == '[' || c == ']' || c == '^' || c == '*') {
      flush();
      out.emplace_back(1, c);
    } else if (c == ':') {
      cur.push_back(c);
      flush();
    } else if ((c == '<' || c == '>' || c == '=') ) {
      flush();
      std::string s(1, c);
      if (k + 1 < text.size() && text[k + 1] == '=') {
        s.push_back('=');
        ++k;
      }
      out.push_back(s);
    } else if ((c == '+' || c == '-') && cur.empty()) {
      // A sign token unless it starts a number glued to it ("-4", "+inf").
      if (k + 1 < text.size() && !std::isspace(static_cast<unsigned char>(text[k + 1]))) {
        cur.push_back(c);
      } else {
        out.emplace_back(1, c);
      }
    } else {
      cur.push_back(c);
    }
  }
  flush();
  return out;
}

bool is_number(const std::string& t) {
  try {
    parse_double(t);
    return true;
  } catch (const ModelError&) {
    return false;
  }
}

struct Expr {
  std::vector<std::pair<std::string, double>> lin;
  std::vector<std::pair<std::string, double>> quad;
  double constant = 0.0;
};

// Parses tokens[pos..) until a sense token or the end.
Expr parse_expr(const std::vector<std::string>& tok, std::size_t& pos) {
  Expr e;
  bool in_bracket = false;
  double sign = 1.0;
  while (pos < tok.size()) {
    const std::string& t = tok[pos];
    if (t == "<=" || t == ">=" || t == "=" ) break;
    if (t == "[") { in_bracket = true; ++pos; continue; }
    if (t == "]") { in_bracket = false; ++pos; continue; }
    if (t == "+") { sign = 1.0; ++pos; continue; }
    if (t == "-") { sign = -1.0; ++pos; continue; }
    double coef = 1.0;
    std::string name;
    if (is_number(t)) {
      coef = parse_double(t);
      ++pos;
      if (pos >= tok.size() || tok[pos] == "+" || tok[pos] == "-" || tok[pos] == "<=" ||
          tok[pos] == ">=" || tok[pos] == "=" || tok[pos] == "]") {
        e.constant += sign * coef;
        sign = 1.0;
        continue;
      }
    }
    name = tok[pos++];
    if (in_bracket && pos < tok.size() && tok[pos] == "^") {
      pos += 2;  // "^" "2"
      e.quad.emplace_back(name, sign * coef);
    } else if (in_bracket && pos < tok.size() && tok[pos] == "*") {
      throw ModelError("LP reader: cross products are not supported");
    } else {
      e.lin.emplace_back(name, sign * coef);
    }
    sign = 1.0;
  }
  return e;
}

}  // namespace

void write_lp(const MixedModel& m, std::ostream& out) {
  out << "\\ model: " << m.name << "\n";
  out << "\\ formulation: " << m.formulation << "\n";
  out << (m.objective.sense == ObjectiveSense::kMaximize ? "Maximize" : "Minimize") << "\n";
  out << " obj:";
  std::vector<std::pair<double, std::string>> terms;
  for (int v = 0; v < m.num_vars(); ++v)
    if (m.objective.coeffs[static_cast<std::size_t>(v)] != 0.0)
      terms.emplace_back(m.objective.coeffs[static_cast<std::size_t>(v)],
                         m.vars[static_cast<std::size_t>(v)].name);
  write_terms(out, terms);
  if (m.objective.constant != 0.0 || terms.empty())
    out << ' ' << (m.objective.constant < 0 ? '-' : '+') << ' ' << num(std::abs(m.objective.constant));
  out << "\nSubject To\n";
  for (const auto& r : m.rows) {
    out << ' ' << r.name << ':';
    terms.clear();
    for (const auto& t : r.terms) terms.emplace_back(t.coeff, m.vars[static_cast<std::size_t>(t.var)].name);
    write_terms(out, terms);
    if (terms.empty()) out << " 0 " << m.vars.front().name;
    out << ' ' << sense_text(r.sense) << ' ' << num(r.rhs) << "\n";
  }
  for (const auto& r : m.convex_rows) {
    const Poly p = expand(r.f);
    out << ' ' << r.name << ':';
    terms.clear();
    for (const auto& [v, c] : p.lin) terms.emplace_back(c, m.vars[static_cast<std::size_t>(v)].name);
    write_terms(out, terms);
    out << " + [";
    bool first = true;
    for (const auto& [v, c] : p.quad) {
      out << ' ';
      if (!first || c < 0) out << (c < 0 ? "- " : "+ ");
      out << num(std::abs(c)) << ' ' << m.vars[static_cast<std::size_t>(v)].name << " ^2";
      first = false;
    }
    out << " ] <= " << num(r.rhs - p.constant) << "\n";
  }
  out << "Bounds\n";
  for (const auto& v : m.vars) out << ' ' << num(v.lower) << " <= " << v.name << " <= " << num(v.upper) << "\n";
  out << "Binaries\n";
  for (const auto& v : m.vars)
    if (v.kind == VarKind::kBinary) out << ' ' << v.name << "\n";
  out << "End\n";
}

void save_lp(const MixedModel& m, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ModelError("cannot write " + path);
  write_lp(m, f);
}

MixedModel read_lp(std::istream& in) {
  MixedModel m;
  std::map<std::string, std::string> sections;
  std::string section = "preamble";
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string_view t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '\\') {
      if (t.rfind("\\ model: ", 0) == 0) m.name = std::string(t.substr(9));
      if (t.rfind("\\ formulation: ", 0) == 0) m.formulation = std::string(t.substr(15));
      continue;
    }
    if (t == "Minimize" || t == "Maximize") {
      m.objective.sense = t == "Maximize" ? ObjectiveSense::kMaximize : ObjectiveSense::kMinimize;
      section = "objective";
      continue;
    }
    if (t == "Subject To" || t == "Bounds" || t == "Binaries" || t == "End") {
      section = std::string(t);
      continue;
    }
    sections[section] += std::string(t) + "\n";
  }

  std::map<std::string, int> col;
  auto column = [&](const std::string& name) {
    auto it = col.find(name);
    if (it != col.end()) return it->second;
    const int c = m.add_var({name, 0.0, kInf, VarKind::kContinuous, Role::kOther});
    col[name] = c;
    return c;
  };

  const auto bounds_tok = tokenize(sections["Bounds"]);
  for (std::size_t p = 0; p + 4 < bounds_tok.size() + 0; p += 5) {
    if (bounds_tok[p + 1] != "<=" || bounds_tok[p + 3] != "<=")
      throw ModelError("LP reader: malformed bound near \"" + bounds_tok[p] + "\"");
    const int c = column(bounds_tok[p + 2]);
    m.vars[static_cast<std::size_t>(c)].lower = parse_double(bounds_tok[p]);
    m.vars[static_cast<std::size_t>(c)].upper = parse_double(bounds_tok[p + 4]);
  }
  for (const auto& name : tokenize(sections["Binaries"])) {
    const int c = column(name);
    m.vars[static_cast<std::size_t>(c)].kind = VarKind::kBinary;
  }

  {
    const auto tok = tokenize(sections["objective"]);
    std::size_t pos = 0;
    if (pos < tok.size() && tok[pos].back() == ':') ++pos;
    const Expr e = parse_expr(tok, pos);
    for (const auto& [name, c] : e.lin) {
      const int v = column(name);
      m.objective.coeffs[static_cast<std::size_t>(v)] += c;
    }
    m.objective.constant = e.constant;
  }

  const auto tok = tokenize(sections["Subject To"]);
  std::size_t pos = 0;
  while (pos < tok.size()) {
    if (tok[pos].back() != ':') throw ModelError("LP reader: expected a row name, got \"" + tok[pos] + "\"");
    const std::string name = tok[pos].substr(0, tok[pos].size() - 1);
    ++pos;
    const Expr e = parse_expr(tok, pos);
    if (pos + 1 >= tok.size()) throw ModelError("LP reader: row " + name + " is incomplete");
    const Sense sense = tok[pos] == "<=" ? Sense::kLessEqual
                        : tok[pos] == ">=" ? Sense::kGreaterEqual
                                           : Sense::kEqual;
    const double rhs = parse_double(tok[pos + 1]) - e.constant;
    pos += 2;
    if (e.quad.empty()) {
      ModelRow row{name, {}, sense, rhs, Role::kOther};
      for (const auto& [v, c] : e.lin)
        if (!(c == 0.0 && e.lin.size() == 1)) row.terms.push_back({column(v), c});
      m.add_row(std::move(row));
    } else {
      if (sense != Sense::kLessEqual) throw ModelError("LP reader: quadratic row " + name + " must be <=");
      SeparableFunction f;
      for (const auto& [v, c] : e.quad) f.add_quadratic(column(v), c, 0.0);
      for (const auto& [v, c] : e.lin) f.add_linear(column(v), c);
      m.add_convex_row({name, f, rhs, Role::kOther});
    }
  }
  return m;
}

void write_mps(const MixedModel& m, std::ostream& out) {
  if (!m.convex_rows.empty())
    throw UnsupportedError("MPS output supports linear models only; write an LP file for models with quadratic rows");
  auto cname = [](std::size_t k) {
    char b[32];
    std::snprintf(b, sizeof b, "C%07zu", k + 1);
    return std::string(b);
  };
  auto rname = [](std::size_t k) {
    char b[32];
    std::snprintf(b, sizeof b, "R%07zu", k + 1);
    return std::string(b);
  };
  auto field = [](const std::string& s, std::size_t w) {
    return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' ');
  };
  out << "* model: " << m.name << "\n";
  out << "* formulation: " << m.formulation << "\n";
  for (std::size_t k = 0; k < m.vars.size(); ++k) out << "* " << cname(k) << " " << m.vars[k].name << "\n";
  for (std::size_t k = 0; k < m.rows.size(); ++k) out << "* " << rname(k) << " " << m.rows[k].name << "\n";
  out << "NAME          MODEL\n";
  if (m.objective.sense == ObjectiveSense::kMaximize) out << "OBJSENSE\n    MAX\n";
  out << "ROWS\n N  OBJ\n";
  for (std::size_t k = 0; k < m.rows.size(); ++k) {
    const char* s = m.rows[k].sense == Sense::kLessEqual ? "L" : m.rows[k].sense == Sense::kGreaterEqual ? "G" : "E";
    out << " " << s << "  " << rname(k) << "\n";
  }
  std::vector<std::vector<std::pair<std::size_t, double>>> by_col(m.vars.size());
  for (std::size_t k = 0; k < m.rows.size(); ++k)
    for (const auto& t : m.rows[k].terms) by_col[static_cast<std::size_t>(t.var)].emplace_back(k, t.coeff);
  out << "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (std::size_t c = 0; c < m.vars.size(); ++c) {
    const bool binary = m.vars[c].kind == VarKind::kBinary;
    if (binary != in_int) {
      char b[32];
      std::snprintf(b, sizeof b, "M%07d", ++marker);
      out << "    " << field(b, 10) << "'MARKER'                 " << (binary ? "'INTORG'" : "'INTEND'") << "\n";
      in_int = binary;
    }
    const double obj = m.objective.coeffs[c];
    bool wrote = false;
    if (obj != 0.0) {
      out << "    " << field(cname(c), 10) << field("OBJ", 10) << num(obj) << "\n";
      wrote = true;
    }
    for (const auto& [r, v] : by_col[c]) {
      out << "    " << field(cname(c), 10) << field(rname(r), 10) << num(v) << "\n";
      wrote = true;
    }
    if (!wrote) out << "    " << field(cname(c), 10) << field("OBJ", 10) << "0\n";
  }
  if (in_int) {
    char b[32];
    std::snprintf(b, sizeof b, "M%07d", ++marker);
    out << "    " << field(b, 10) << "'MARKER'                 'INTEND'\n";
  }
  out << "RHS\n";
  if (m.objective.constant != 0.0) out << "    " << field("RHS", 10) << field("OBJ", 10) << num(-m.objective.constant) << "\n";
  for (std::size_t k = 0; k < m.rows.size(); ++k)
    if (m.rows[k].rhs != 0.0) out << "    " << field("RHS", 10) << field(rname(k), 10) << num(m.rows[k].rhs) << "\n";
  out << "BOUNDS\n";
  for (std::size_t c = 0; c < m.vars.size(); ++c) {
    const auto& v = m.vars[c];
    if (v.lower == v.upper) {
      out << " FX " << field("BND", 10) << field(cname(c), 10) << num(v.lower) << "\n";
      continue;
    }
    if (std::isinf(v.lower)) out << " MI " << field("BND", 10) << cname(c) << "\n";
    else out << " LO " << field("BND", 10) << field(cname(c), 10) << num(v.lower) << "\n";
    if (std::isinf(v.upper)) out << " PL " << field("BND", 10) << cname(c) << "\n";
    else out << " UP " << field("BND", 10) << field(cname(c), 10) << num(v.upper) << "\n";
  }
  out << "ENDATA\n";
}

void save_mps(const MixedModel& m, const std::string& path) {
  std::ostringstream buf;
  write_mps(m, buf);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ModelError("cannot write " + path);
  f << buf.str();
}

MixedModel read_mps(std::istream& in) {
  MixedModel m;
  std::map<std::string, std::string> alias;
  std::map<std::string, int> row_index;
  std::map<std::string, int> col_index;
  std::string section;
  std::string line;
  bool in_int = false;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw ModelError("MPS line " + std::to_string(line_no) + ": " + what);
  };
  auto real_name = [&](const std::string& n) {
    auto it = alias.find(n);
    return it == alias.end() ? n : it->second;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '*') {
      std::istringstream ss(line.substr(1));
      std::string a, b;
      ss >> a;
      if (a == "model:") { std::getline(ss, b); m.name = std::string(trim(b)); continue; }
      if (a == "formulation:") { std::getline(ss, b); m.formulation = std::string(trim(b)); continue; }
      if (ss >> b) alias[a] = b;
      continue;
    }
    std::istringstream ss(line);
    std::vector<std::string> f;
    for (std::string t; ss >> t;) f.push_back(t);
    if (line[0] != ' ') {
      section = f[0];
      continue;
    }
    if (section == "OBJSENSE") {
      if (f[0] == "MAX" || f[0] == "MAXIMIZE") m.objective.sense = ObjectiveSense::kMaximize;
    } else if (section == "ROWS") {
      if (f.size() != 2) fail("bad ROWS entry");
      if (f[0] == "N") continue;
      const Sense s = f[0] == "L" ? Sense::kLessEqual : f[0] == "G" ? Sense::kGreaterEqual : Sense::kEqual;
      if (f[0] != "L" && f[0] != "G" && f[0] != "E") fail("unknown row type " + f[0]);
      row_index[f[1]] = static_cast<int>(m.rows.size());
      m.add_row({real_name(f[1]), {}, s, 0.0, Role::kOther});
    } else if (section == "COLUMNS") {
      if (f.size() >= 3 && f[1] == "'MARKER'") {
        in_int = f[2] == "'INTORG'";
        continue;
      }
      if (f.size() != 3 && f.size() != 5) fail("bad COLUMNS entry");
      auto it = col_index.find(f[0]);
      int c;
      if (it == col_index.end()) {
        c = m.add_var({real_name(f[0]), 0.0, kInf, in_int ? VarKind::kBinary : VarKind::kContinuous, Role::kOther});
        col_index[f[0]] = c;
      } else {
        c = it->second;
      }
      for (std::size_t k = 1; k + 1 < f.size(); k += 2) {
        const double v = parse_double(f[k + 1]);
        if (f[k] == "OBJ") {
          m.objective.coeffs[static_cast<std::size_t>(c)] = v;
          continue;
        }
        const auto r = row_index.find(f[k]);
        if (r == row_index.end()) fail("unknown row " + f[k]);
        m.rows[static_cast<std::size_t>(r->second)].terms.push_back({c, v});
      }
    } else if (section == "RHS") {
      for (std::size_t k = 1; k + 1 < f.size(); k += 2) {
        const double v = parse_double(f[k + 1]);
        if (f[k] == "OBJ") {
          m.objective.constant = -v;
          continue;
        }
        const auto r = row_index.find(f[k]);
        if (r == row_index.end()) fail("unknown row " + f[k]);
        m.rows[static_cast<std::size_t>(r->second)].rhs = v;
      }
    } else if (section == "BOUNDS") {
      if (f.size() < 3) fail("bad BOUNDS entry");
      const auto ci = col_index.find(f[2]);
      if (ci == col_index.end()) fail("unknown column " + f[2]);
      auto& v = m.vars[static_cast<std::size_t>(ci->second)];
      if (f[0] == "MI") v.lower = -kInf;
      else if (f[0] == "PL") v.upper = kInf;
      else if (f[0] == "FR") { v.lower = -kInf; v.upper = kInf; }
      else {
        if (f.size() < 4) fail("bound without value");
        const double x = parse_double(f[3]);
        if (f[0] == "LO") v.lower = x;
        else if (f[0] == "UP") v.upper = x;
        else if (f[0] == "FX") v.lower = v.upper = x;
        else fail("unknown bound type " + f[0]);
      }
    }
  }
  return m;
}

bool models_equivalent(const MixedModel& a, const MixedModel& b, double rel_tol, std::string* why) {
  auto no = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (a.vars.size() != b.vars.size()) return no("variable count differs");
  for (std::size_t k = 0; k < a.vars.size(); ++k) {
    const auto& x = a.vars[k];
    const auto& y = b.vars[k];
    if (x.name != y.name || x.kind != y.kind || !close(x.lower, y.lower, rel_tol) ||
        !close(x.upper, y.upper, rel_tol))
      return no("variable " + x.name + " differs");
  }
  if (a.objective.sense != b.objective.sense || !close(a.objective.constant, b.objective.constant, rel_tol))
    return no("objective differs");
  for (std::size_t k = 0; k < a.vars.size(); ++k)
    if (!close(a.objective.coeffs[k], b.objective.coeffs[k], rel_tol)) return no("objective differs");
  if (a.rows.size() != b.rows.size()) return no("row count differs");
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    const auto& x = a.rows[k];
    const auto& y = b.rows[k];
    std::map<int, double> cx, cy;
    for (const auto& t : x.terms) cx[t.var] += t.coeff;
    for (const auto& t : y.terms) cy[t.var] += t.coeff;
    std::erase_if(cx, [](const auto& e) { return e.second == 0.0; });
    std::erase_if(cy, [](const auto& e) { return e.second == 0.0; });
    if (x.name != y.name || x.sense != y.sense || !close(x.rhs, y.rhs, rel_tol) || cx.size() != cy.size())
      return no("row " + x.name + " differs");
    for (const auto& [v, c] : cx)
      if (!cy.count(v) || !close(c, cy[v], rel_tol)) return no("row " + x.name + " differs");
  }
  if (a.convex_rows.size() != b.convex_rows.size()) return no("convex row count differs");
  for (std::size_t k = 0; k < a.convex_rows.size(); ++k) {
    const Poly x = expand(a.convex_rows[k].f);
    const Poly y = expand(b.convex_rows[k].f);
    if (a.convex_rows[k].name != b.convex_rows[k].name) return no("convex row name differs");
    if (!close(a.convex_rows[k].rhs - x.constant, b.convex_rows[k].rhs - y.constant, rel_tol))
      return no("convex row " + a.convex_rows[k].name + " rhs differs");
    auto same = [&](const std::map<int, double>& p, const std::map<int, double>& q) {
      for (const auto& [v, c] : p) {
        const auto it = q.find(v);
        if (!close(c, it == q.end() ? 0.0 : it->second, rel_tol)) return false;
      }
      for (const auto& [v, c] : q)
        if (!p.count(v) && !close(c, 0.0, rel_tol)) return false;
      return true;
    };
    if (!same(x.lin, y.lin) || !same(x.quad, y.quad))
      return no("convex row " + a.convex_rows[k].name + " coefficients differ");
  }
  return true;
}

double FeasibilityGrid::center_i(int a) const {
  return range.lo_i + (a + 0.5) * (range.hi_i - range.lo_i) / resolution;
}
double FeasibilityGrid::center_j(int b) const {
  return range.lo_j + (b + 0.5) * (range.hi_j - range.lo_j) / resolution;
}
int FeasibilityGrid::count() const {
  return static_cast<int>(std::count(flags.begin(), flags.end(), std::uint8_t{1}));
}
bool FeasibilityGrid::subset_of(const FeasibilityGrid& other) const {
  if (flags.size() != other.flags.size()) return false;
  for (std::size_t k = 0; k < flags.size(); ++k)
    if (flags[k] && !other.flags[k]) return false;
  return true;
}

GridRange box_range(const DisjunctiveProblem& p, int i, int j) {
  return {p.lower.at(static_cast<std::size_t>(i)), p.upper.at(static_cast<std::size_t>(i)),
          p.lower.at(static_cast<std::size_t>(j)), p.upper.at(static_cast<std::size_t>(j))};
}

namespace {

// Runs fn(chunk) for a fixed chunk count over the available threads.
template <typename Fn>
void run_chunks(int chunks, int threads, Fn fn) {
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, chunks);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int c = next++; c < chunks; c = next++) fn(c);
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

constexpr int kChunks = 16;

FeasibilityGrid make_grid(int i, int j, int resolution, const GridRange& range, std::string label) {
  if (resolution < 1) throw ModelError("grid resolution must be positive");
  if (i == j) throw ModelError("projection axes must differ");
  FeasibilityGrid g;
  g.i = i;
  g.j = j;
  g.range = range;
  g.resolution = resolution;
  g.label = std::move(label);
  g.flags.assign(static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution), 0);
  return g;
}

}  // namespace

FeasibilityGrid project_2d(const MixedModel& m, int i, int j, int resolution,
                           const GridRange& range, const ProjectOptions& options) {
  if (i < 0 || j < 0 || i >= m.num_vars() || j >= m.num_vars())
    throw ModelError("projection axis out of range");
  FeasibilityGrid g = make_grid(i, j, resolution, range, m.formulation);
  const int cells = resolution * resolution;
  RelaxOptions ro;
  ro.violation_tol = options.violation_tol;
  const auto& vi = m.vars[static_cast<std::size_t>(i)];
  const auto& vj = m.vars[static_cast<std::size_t>(j)];
  RelaxationSession base(m, ro);
  base.set_objective(std::vector<double>(static_cast<std::size_t>(m.num_vars()), 0.0),
                     ObjectiveSense::kMinimize);
  run_chunks(kChunks, options.threads, [&](int chunk) {
    const int begin = static_cast<int>(static_cast<long long>(cells) * chunk / kChunks);
    const int end = static_cast<int>(static_cast<long long>(cells) * (chunk + 1) / kChunks);
    for (int cell = begin; cell < end; ++cell) {
      const double a = g.center_i(cell / resolution);
      const double b = g.center_j(cell % resolution);
      if (a < vi.lower || a > vi.upper || b < vj.lower || b > vj.upper) continue;
      // A fresh copy per cell: cuts carried over from other cells only grow
      // the tableau.
      RelaxationSession session = base;
      session.set_bounds(i, a, a);
      session.set_bounds(j, b, b);
      const RelaxResult r = session.solve();
      g.flags[static_cast<std::size_t>(cell)] =
          r.status == LpStatus::kOptimal && r.max_violation <= options.violation_tol;
    }
  });
  return g;
}

FeasibilityGrid project_disjunction(const DisjunctiveProblem& p, int i, int j, int resolution,
                                    const GridRange& range, const ProjectOptions& options) {
  if (i < 0 || j < 0 || i >= p.n || j >= p.n) throw ModelError("projection axis out of range");
  FeasibilityGrid g = make_grid(i, j, resolution, range, "disjunction");
  const int cells = resolution * resolution;
  RegionOptions ro;
  ro.relax.violation_tol = options.violation_tol;
  run_chunks(kChunks, options.threads, [&](int chunk) {
    const int begin = static_cast<int>(static_cast<long long>(cells) * chunk / kChunks);
    const int end = static_cast<int>(static_cast<long long>(cells) * (chunk + 1) / kChunks);
    DisjunctiveProblem fixed = p;
    for (int cell = begin; cell < end; ++cell) {
      const double a = g.center_i(cell / resolution);
      const double b = g.center_j(cell % resolution);
      const auto si = static_cast<std::size_t>(i);
      const auto sj = static_cast<std::size_t>(j);
      if (a < p.lower[si] || a > p.upper[si] || b < p.lower[sj] || b > p.upper[sj]) continue;
      fixed.lower[si] = fixed.upper[si] = a;
      fixed.lower[sj] = fixed.upper[sj] = b;
      bool ok = RegionOptimizer(fixed, -1, -1, ro).feasible();
      for (int d = 0; ok && d < static_cast<int>(p.disjunctions.size()); ++d) {
        bool any = false;
        for (int l = 0; !any && l < static_cast<int>(p.disjunctions[static_cast<std::size_t>(d)].disjuncts.size()); ++l)
          any = RegionOptimizer(fixed, d, l, ro).feasible();
        ok = any;
      }
      g.flags[static_cast<std::size_t>(cell)] = ok;
    }
  });
  return g;
}

void write_grid_csv(const FeasibilityGrid& g, std::ostream& out) {
  out << "x" << g.i << ",x" << g.j << ",flag\n";
  for (int a = 0; a < g.resolution; ++a)
    for (int b = 0; b < g.resolution; ++b)
      out << format_double(g.center_i(a)) << ',' << format_double(g.center_j(b)) << ','
          << static_cast<int>(g.flags[static_cast<std::size_t>(a * g.resolution + b)]) << '\n';
}

void write_grid_svg(const FeasibilityGrid& g, std::ostream& out) {
  const int cell = std::max(1, 400 / g.resolution);
  const int size = cell * g.resolution;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
      << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
  out << "<title>" << g.label << " x" << g.i << " x" << g.j << "</title>\n";
  for (int a = 0; a < g.resolution; ++a)
    for (int b = 0; b < g.resolution; ++b) {
      const bool on = g.flags[static_cast<std::size_t>(a * g.resolution + b)] != 0;
      out << "<rect x=\"" << a * cell << "\" y=\"" << (g.resolution - 1 - b) * cell << "\" width=\""
          << cell << "\" height=\"" << cell << "\" fill=\"" << (on ? "#555555" : "#f4f4f4") << "\"/>\n";
    }
  out << "</svg>\n";
}

void render_grid(const FeasibilityGrid& g, const std::string& stem) {
  std::ofstream csv(stem + ".csv", std::ios::binary);
  if (!csv) throw ModelError("cannot write " + stem + ".csv");
  write_grid_csv(g, csv);
  std::ofstream svg(stem + ".svg", std::ios::binary);
  if (!svg) throw ModelError("cannot write " + stem + ".svg");
  write_grid_svg(g, svg);
}

}  // namespace splitform
