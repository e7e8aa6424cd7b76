#include "pdeiss/scenario.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace pdeiss {

namespace {

struct RawValue {
  std::string text;
  bool quoted = false;
  int line = 0;
};

using Section = std::map<std::string, RawValue>;

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& path, int line, const std::string& msg) {
  throw ConfigError(path + ":" + std::to_string(line) + ": " + msg);
}

class Loader {
 public:
  Loader(const std::string& text, std::string path) : path_(std::move(path)) {
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    std::string section;
    while (std::getline(in, raw)) {
      ++line;
      std::string s = strip_comment(raw, line);
      s = trim(s);
      if (s.empty()) continue;
      if (s.front() == '[') {
        if (s.back() != ']') fail(path_, line, "malformed section header");
        section = trim(s.substr(1, s.size() - 2));
        if (section.empty()) fail(path_, line, "empty section name");
        sections_[section];
        continue;
      }
      const std::size_t eq = s.find('=');
      if (eq == std::string::npos) fail(path_, line, "expected 'key = value'");
      if (section.empty()) fail(path_, line, "key before any [section] header");
      const std::string key = trim(s.substr(0, eq));
      std::string value = trim(s.substr(eq + 1));
      if (key.empty()) fail(path_, line, "empty key");
      if (value.empty()) fail(path_, line, "empty value for key '" + key + "'");
      RawValue rv;
      rv.line = line;
      if (value.front() == '"') {
        if (value.size() < 2 || value.back() != '"')
          fail(path_, line, "unterminated quoted value");
        rv.text = value.substr(1, value.size() - 2);
        rv.quoted = true;
      } else {
        rv.text = value;
      }
      sections_[section][key] = rv;
    }
  }

  bool has(const std::string& name) const { return sections_.count(name) > 0; }

  const Section& section(const std::string& name) const { return sections_.at(name); }

  const RawValue& require(const std::string& sec, const std::string& key) const {
    const Section& s = section(sec);
    auto it = s.find(key);
    if (it == s.end())
      throw ConfigError(path_ + ": missing key '" + key + "' in section [" + sec + "]");
    return it->second;
  }

  std::optional<RawValue> maybe(const std::string& sec, const std::string& key) const {
    const Section& s = section(sec);
    auto it = s.find(key);
    if (it == s.end()) return std::nullopt;
    return it->second;
  }

  expr::Expr expression(const std::string& sec, const std::string& key) const {
    const RawValue& rv = require(sec, key);
    return parse_expr_value(rv, key);
  }

  expr::Expr expression_or(const std::string& sec, const std::string& key,
                           const char* fallback) const {
    auto rv = maybe(sec, key);
    if (!rv) return expr::parse(fallback);
    return parse_expr_value(*rv, key);
  }

  double number(const std::string& sec, const std::string& key) const {
    return to_number(require(sec, key), key);
  }

  double number_or(const std::string& sec, const std::string& key, double fallback) const {
    auto rv = maybe(sec, key);
    return rv ? to_number(*rv, key) : fallback;
  }

  int integer(const std::string& sec, const std::string& key) const {
    return to_integer(require(sec, key), key);
  }

  int integer_or(const std::string& sec, const std::string& key, int fallback) const {
    auto rv = maybe(sec, key);
    return rv ? to_integer(*rv, key) : fallback;
  }

  const std::string& path() const { return path_; }

 private:
  static std::string strip_comment(const std::string& s, int) {
    bool in_quotes = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '"') in_quotes = !in_quotes;
      if (s[i] == '#' && !in_quotes) return s.substr(0, i);
    }
    return s;
  }

  expr::Expr parse_expr_value(const RawValue& rv, const std::string& key) const {
    if (!rv.quoted)
      fail(path_, rv.line, "key '" + key + "' expects a double-quoted expression");
    try {
      return expr::parse(rv.text);
    } catch (const expr::SyntaxError& e) {
      fail(path_, rv.line, "in expression for '" + key + "': " + e.what());
    }
  }

  double to_number(const RawValue& rv, const std::string& key) const {
    if (rv.quoted) fail(path_, rv.line, "key '" + key + "' expects a plain number");
    char* end = nullptr;
    const double v = std::strtod(rv.text.c_str(), &end);
    if (end == rv.text.c_str() || *end != '\0')
      fail(path_, rv.line, "key '" + key + "' is not a number: '" + rv.text + "'");
    return v;
  }

  int to_integer(const RawValue& rv, const std::string& key) const {
    const double v = to_number(rv, key);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
      fail(path_, rv.line, "key '" + key + "' must be an integer");
    return i;
  }

  std::string path_;
  std::map<std::string, Section> sections_;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      cur = trim(cur);
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  cur = trim(cur);
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& path) {
  Loader ld(text, path);
  Scenario sc;
  sc.path = path;

  if (ld.has("problem")) {
    ProblemSection ps;
    ps.p = ld.expression("problem", "p");
    ps.r = ld.expression("problem", "r");
    ps.q = ld.expression("problem", "q");
    ps.g0 = ld.number("problem", "g0");
    ps.v0 = ld.number("problem", "v0");
    ps.g1 = ld.number("problem", "g1");
    ps.v1 = ld.number("problem", "v1");
    ps.grid_n = ld.integer_or("problem", "gridN", 1000);
    sc.problem = std::move(ps);
  }

  if (ld.has("simulation")) {
    SimulationSection ss;
    ss.n = ld.integer("simulation", "N");
    ss.lambda_fraction = ld.number_or("simulation", "lambdaFraction", 0.5);
    ss.t_final = ld.number("simulation", "tFinal");
    ss.record_every = ld.integer_or("simulation", "recordEvery", 1);
    sc.simulation = std::move(ss);
  }

  if (ld.has("inputs")) {
    InputsSection is;
    is.d0 = ld.expression_or("inputs", "d0", "0");
    is.d1 = ld.expression_or("inputs", "d1", "0");
    is.u = ld.expression_or("inputs", "u", "0");
    is.x0 = ld.expression_or("inputs", "x0", "0");
    sc.inputs = std::move(is);
  }

  if (ld.has("eta")) {
    EtaSection es;
    auto mode = ld.maybe("eta", "eta");
    if (!mode || (!mode->quoted && mode->text == "auto")) {
      es.auto_mode = true;
    } else {
      es.auto_mode = false;
      es.eta = ld.expression("eta", "eta");
    }
    es.sigma = ld.number("eta", "sigma");
    sc.eta = std::move(es);
  }

  if (ld.has("thermo")) {
    ThermoSection ts;
    ts.g0_kernel = ld.expression("thermo", "g0Kernel");
    ts.g1_kernel = ld.expression("thermo", "g1Kernel");
    sc.thermo = std::move(ts);
  }

  if (ld.has("certify")) {
    CertifySection cs;
    if (auto rv = ld.maybe("certify", "estimates")) cs.estimates = split_list(rv->text);
    if (auto rv = ld.maybe("certify", "tolerance"))
      cs.tolerance = ld.number("certify", "tolerance");
    if (auto rv = ld.maybe("certify", "epsOmega")) {
      cs.eps_omega.clear();
      for (const std::string& tok : split_list(rv->text)) {
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0')
          throw ConfigError(path + ": epsOmega entry is not a number: '" + tok + "'");
        cs.eps_omega.push_back(v);
      }
      if (cs.eps_omega.empty()) throw ConfigError(path + ": epsOmega list is empty");
    }
    cs.theta = ld.number_or("certify", "theta", cs.theta);
    sc.certify = std::move(cs);
  }

  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

}  // namespace pdeiss
