#include "cli.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fellq/calculus.hpp"
#include "fellq/norms.hpp"
#include "fellq/spectral.hpp"
#include "fellq/tolerances.hpp"
#include "fellq/verification.hpp"
#include "fellq/version.hpp"

namespace fellq::cli {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<int> parse_grid(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    part = trim(part);
    if (part.empty()) throw std::invalid_argument("grid: empty axis size in '" + text + "'");
    out.push_back(std::stoi(part));
  }
  if (out.empty()) throw std::invalid_argument("grid: no sizes in '" + text + "'");
  return out;
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) + " has no '='");
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    if (key == "model") cfg.model = val;
    else if (key == "theta") cfg.theta = std::stod(val);
    else if (key == "p") cfg.p = std::stoi(val);
    else if (key == "q") cfg.q = std::stoi(val);
    else if (key == "c") cfg.c = std::stoi(val);
    else if (key == "mu") cfg.mu = std::stod(val);
    else if (key == "nu") cfg.nu = std::stod(val);
    else if (key == "grid") cfg.grid = parse_grid(val);
    else if (key == "hbar-min") cfg.hbar_min = std::stod(val);
    else if (key == "hbar-max") cfg.hbar_max = std::stod(val);
    else if (key == "hbar-count") cfg.hbar_count = std::stoi(val);
    else if (key == "log") cfg.log_grid = (val == "true" || val == "1" || val == "yes");
    else if (key == "seed") cfg.seed = std::stoull(val, nullptr, 0);
    else if (key == "out") cfg.out = val;
    else if (key == "cutoff") cfg.cutoff = std::stoi(val);
    else if (key == "triples") cfg.triples = std::stoi(val);
    else if (key == "trials") cfg.trials = std::stoi(val);
    else if (key == "window") cfg.window = std::stoi(val);
    else if (key == "xi-columns") cfg.xi_columns = std::stoi(val);
    else if (key == "pair") cfg.pair = val;
    else if (key == "expr") cfg.expr = val;
    else
      throw std::invalid_argument("config: unknown key '" + key + "' on line " +
                                  std::to_string(lineno));
  }
}

ModelSpec model_from_config(const RunConfig& cfg) {
  ModelParams params;
  params.theta = cfg.theta;
  params.p = cfg.p;
  params.q = cfg.q;
  params.c = cfg.c;
  params.mu = cfg.mu;
  params.nu = cfg.nu;
  return build_model(cfg.model, params, cfg.grid);
}

std::vector<double> hbar_grid_from_config(const RunConfig& cfg) {
  return cfg.log_grid ? log_spaced(cfg.hbar_min, cfg.hbar_max, cfg.hbar_count)
                      : lin_spaced(cfg.hbar_min, cfg.hbar_max, cfg.hbar_count);
}

// ---------------------------------------------------------------------------
// Expression parser

namespace {

class Parser {
 public:
  Parser(const std::string& text, const ModelSpec& model) : text_(text), model_(model) {}

  GradedElement parse() {
    GradedElement e = expr();
    skip_ws();
    if (pos_ < text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("parse error, " + what + " at position " +
                                std::to_string(pos_ + 1));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool starts_atom() {
    skip_ws();
    if (pos_ >= text_.size()) return false;
    const char c = text_[pos_];
    return std::isalnum(static_cast<unsigned char>(c)) || c == '(';
  }

  GradedElement expr() {
    GradedElement acc = term();
    for (;;) {
      if (peek('+')) {
        ++pos_;
        acc += term();
      } else if (peek('-')) {
        ++pos_;
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  GradedElement term() {
    GradedElement acc = factor();
    while (starts_atom()) acc = ambient_product(acc, factor());
    return acc;
  }

  GradedElement factor() {
    GradedElement e = atom();
    for (;;) {
      if (peek('*')) {
        ++pos_;
        e = ambient_star(e);
      } else if (peek('^')) {
        const std::size_t mark = pos_;
        ++pos_;
        if (pos_ < text_.size() && text_[pos_] == 'd') {
          ++pos_;
          e = deformed_star(e, model_.deforming, model_.params.theta);
        } else {
          pos_ = mark;
          fail("expected 'd' after '^'");
        }
      } else {
        return e;
      }
    }
  }

  GradedElement scalar(cplx v) {
    GradedElement unit(model_.canonical_fiber(GroupIndex::zero(model_.group_rank)));
    unit *= v;
    return unit;
  }

  GradedElement atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expected an atom");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      GradedElement e = expr();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return scalar(static_cast<double>(std::stoll(text_.substr(start, pos_ - start))));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      // e(x) phase literal
      if (c == 'e' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '(') {
        pos_ += 2;
        std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != ')') ++pos_;
        if (pos_ >= text_.size()) fail("unterminated phase literal");
        const std::string num = trim(text_.substr(start, pos_ - start));
        ++pos_;
        double turns = 0.0;
        try {
          std::size_t used = 0;
          turns = std::stod(num, &used);
          if (used != num.size()) throw std::invalid_argument(num);
        } catch (const std::exception&) {
          pos_ = start;
          fail("bad phase literal '" + num + "'");
        }
        constexpr double kTwoPi = 6.283185307179586476925286766559;
        return scalar(cplx(std::cos(kTwoPi * turns), std::sin(kTwoPi * turns)));
      }
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string run = text_.substr(start, pos_ - start);
      auto it = model_.generators.find(run);
      if (it != model_.generators.end()) return it->second;
      // juxtaposed generator names, e.g. "ZW": greedy longest-prefix split
      GradedElement acc;
      bool have = false;
      std::size_t off = 0;
      while (off < run.size()) {
        std::size_t len = run.size() - off;
        for (; len > 0; --len)
          if (model_.generators.count(run.substr(off, len))) break;
        if (len == 0) {
          pos_ = start + off;
          fail("unknown symbol " + run.substr(off));
        }
        const GradedElement& g = model_.generators.at(run.substr(off, len));
        acc = have ? ambient_product(acc, g) : g;
        have = true;
        off += len;
      }
      return acc;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  const std::string& text_;
  const ModelSpec& model_;
  std::size_t pos_ = 0;
};

}  // namespace

GradedElement parse_element(const std::string& text, const ModelSpec& model) {
  return Parser(text, model).parse();
}

// ---------------------------------------------------------------------------
// CSV

std::string render_csv(const ScanReport& report) {
  std::ostringstream os;
  os << "# fellq " << kVersion << "\n";
  for (const auto& [k, v] : report.metadata) os << "# " << k << " = " << v << "\n";
  for (std::size_t c = 0; c < report.columns.size(); ++c) {
    if (c) os << ",";
    os << report.columns[c];
  }
  os << "\n";
  for (const auto& row : report.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ",";
      os << format_double(row[c]);
    }
    os << "\n";
  }
  return os.str();
}

void write_csv(const ScanReport& report, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out << render_csv(report);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

void echo_config(ScanReport& report, const RunConfig& cfg) {
  report.set_meta("command", cfg.command);
  report.set_meta("model", cfg.model);
  if (cfg.model != "heisenberg") report.set_meta("theta", format_double(cfg.theta));
  if (cfg.model == "lens") {
    report.set_meta("p", std::to_string(cfg.p));
    report.set_meta("q", std::to_string(cfg.q));
  }
  if (cfg.model == "heisenberg") {
    report.set_meta("c", std::to_string(cfg.c));
    report.set_meta("mu", format_double(cfg.mu));
    report.set_meta("nu", format_double(cfg.nu));
  }
  if (cfg.command == "derivative-scan" || cfg.command == "commutator-scan" ||
      cfg.command == "field-scan") {
    report.set_meta("hbar-min", format_double(cfg.hbar_min));
    report.set_meta("hbar-max", format_double(cfg.hbar_max));
    report.set_meta("hbar-count", std::to_string(cfg.hbar_count));
    report.set_meta("log", cfg.log_grid ? "true" : "false");
  }
  report.set_meta("seed", std::to_string(cfg.seed));
}

// ---------------------------------------------------------------------------
// Subcommands

namespace {

std::pair<GradedElement, GradedElement> generator_pair(const RunConfig& cfg,
                                                       const ModelSpec& model) {
  const std::size_t comma = cfg.pair.find(',');
  if (cfg.pair.empty() || comma == std::string::npos)
    throw std::invalid_argument("pair: expected two generator names like 'W,Z'");
  const std::string f = trim(cfg.pair.substr(0, comma));
  const std::string g = trim(cfg.pair.substr(comma + 1));
  for (const std::string* name : {&f, &g})
    if (model.generators.find(*name) == model.generators.end())
      throw std::invalid_argument("pair: unknown generator name '" + *name + "'");
  return {model.generators.at(f), model.generators.at(g)};
}

void emit(const ScanReport& report, const RunConfig& cfg) {
  if (cfg.out.empty()) {
    std::fputs(render_csv(report).c_str(), stdout);
  } else {
    write_csv(report, cfg.out);
    std::printf("wrote %s (%zu rows)\n", cfg.out.c_str(), report.rows.size());
  }
}

}  // namespace

int cmd_verify(const RunConfig& cfg) {
  const ModelSpec model = model_from_config(cfg);
  CheckOptions opts;
  opts.triples = cfg.triples;
  opts.seed = cfg.seed;
  const auto results = run_model_checks(model, opts);
  std::printf("model %s (grid %s), %d seeded triples, seed %llu\n", model.name.c_str(),
              model.geometry->str().c_str(), cfg.triples,
              static_cast<unsigned long long>(cfg.seed));
  std::printf("%-58s %13s %9s  %s\n", "check", "residual", "tol", "status");
  bool ok = true;
  for (const auto& r : results) {
    std::printf("%-58s %13.4e %9.1e  %s\n", r.name.c_str(), r.residual, r.tolerance,
                r.pass() ? "pass" : "FAIL");
    ok = ok && r.pass();
  }
  std::printf("%s: %zu checks, %s\n", model.name.c_str(), results.size(),
              ok ? "all passed" : "FAILURES PRESENT");
  return ok ? 0 : 1;
}

int cmd_derivative_scan(const RunConfig& cfg) {
  const ModelSpec model = model_from_config(cfg);
  const auto [f, g] = generator_pair(cfg, model);
  ScanReport report =
      derivative_limit_scan(f, g, hbar_grid_from_config(cfg), model.deforming, model.calculus);
  echo_config(report, cfg);
  report.set_meta("grid", model.geometry->str());
  report.set_meta("pair", cfg.pair);
  emit(report, cfg);
  return 0;
}

int cmd_commutator_scan(const RunConfig& cfg) {
  const ModelSpec model = model_from_config(cfg);
  const auto [f, g] = generator_pair(cfg, model);
  ScanReport report =
      commutator_limit_scan(f, g, hbar_grid_from_config(cfg), model.deforming, model.calculus);
  echo_config(report, cfg);
  report.set_meta("grid", model.geometry->str());
  report.set_meta("pair", cfg.pair);
  emit(report, cfg);
  return 0;
}

int cmd_field_scan(const RunConfig& cfg) {
  const ModelSpec model = model_from_config(cfg);
  if (cfg.expr.empty()) throw std::invalid_argument("field-scan: --element expression required");
  const GradedElement phi = parse_element(cfg.expr, model);
  const auto trials = make_trial_sections(model, cfg.trials, cfg.seed);
  const std::vector<ModuleVector> xis(
      trials.begin(),
      trials.begin() + std::min<std::size_t>(trials.size(),
                                             static_cast<std::size_t>(cfg.xi_columns)));
  ScanReport report =
      field_scan(phi, xis, hbar_grid_from_config(cfg), model.deforming, cfg.window);
  // lower_bound over the full trial set, replacing the xi-only column
  {
    const int lb = report.column_index("lower_bound");
    for (auto& row : report.rows)
      row[static_cast<std::size_t>(lb)] = reduced_norm_lower_bound(
          phi, model.deforming, row[0], std::span<const ModuleVector>(trials), cfg.window);
  }
  echo_config(report, cfg);
  report.set_meta("grid", model.geometry->str());
  report.set_meta("element", cfg.expr);
  report.set_meta("trials", std::to_string(cfg.trials));
  const auto mods = continuity_moduli(report);
  for (std::size_t c = 3; c < report.columns.size(); ++c)
    report.set_meta("continuity_modulus " + report.columns[c], format_double(mods[c]));
  emit(report, cfg);
  return 0;
}

int cmd_spectral(const RunConfig& cfg) {
  const ModelSpec model = model_from_config(cfg);
  if (cfg.expr.empty()) throw std::invalid_argument("spectral: --expr expression required");
  const GradedElement element = parse_element(cfg.expr, model);

  ScanReport report;
  report.columns = {"t_1", "fiber_norm"};
  for (int t = -cfg.cutoff; t <= cfg.cutoff; ++t) {
    double norm = 0.0;
    if (!element.empty()) {
      const Fiber p = spectral_projection(element, GroupIndex{t}, model.gauge);
      norm = fiber_norm(p);
    }
    report.rows.push_back({static_cast<double>(t), norm});
  }
  echo_config(report, cfg);
  report.set_meta("grid", model.geometry->str());
  report.set_meta("expr", cfg.expr);
  report.set_meta("cutoff", std::to_string(cfg.cutoff));
  emit(report, cfg);
  return 0;
}

}  // namespace fellq::cli
