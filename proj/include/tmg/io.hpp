#pragma once

// JSON in and out. Field elements are digit arrays, polynomials are lowest degree first,
// RatTheta is a bare coefficient array when its denominator is 1 and {num, den} otherwise.
// Objects use nlohmann's sorted map, so dumps are canonical.

#include <json.hpp>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tmg/galois.hpp"

namespace tmg {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Serialization

inline Json to_json(const Field& F, FqElem a) {
  Json out = Json::array();
  for (auto d : F.digits(a)) out.push_back(d);
  return out;
}

template <class Tag>
Json to_json(const Poly<Tag>& a) {
  Json out = Json::array();
  for (auto c : a.coeffs()) out.push_back(to_json(*a.field(), c));
  return out;
}

inline Json to_json(const RatTheta& a) {
  if (a.is_polynomial()) return to_json(a.num());
  return Json{{"num", to_json(a.num())}, {"den", to_json(a.den())}};
}

inline Json to_json(const BivarPoly& f) {
  Json out = Json::array();
  for (const auto& r : f.rows()) out.push_back(to_json(r));
  return out;
}

inline Json to_json(const InfSeries& s) {
  Json coeffs = Json::array();
  for (auto c : s.coeffs()) coeffs.push_back(to_json(*s.field(), c));
  return Json{{"start", s.start()}, {"prec_end", s.prec_end()}, {"coeffs", coeffs}};
}

/// tail_val is [base, slope] (valuation ≥ base + slope·(j − Dt − 1) for j > Dt), or [] when
/// the omitted part is exactly zero.
inline Json to_json(const TSeries& f) {
  Json coeffs = Json::array();
  for (const auto& c : f.coeffs()) coeffs.push_back(to_json(c));
  Json tail = Json::array();
  if (!f.tail().exact_zero) tail = Json::array({f.tail().base, f.tail().slope});
  return Json{{"Dt", f.degree()}, {"coeffs", coeffs}, {"tail_val", tail}};
}

inline Json to_json(const TMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows; ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols; ++j) row.push_back(to_json(m.at(i, j)));
    rows.push_back(row);
  }
  return rows;
}

inline Json to_json(const AdditivePoly& p) {
  Json out = Json::array();
  for (const auto& c : p.coeffs()) out.push_back(to_json(c));
  return out;
}

inline Json to_json(const TrivializationReport& r) {
  Json out{{"pass", r.pass}, {"window", {{"Dt", r.checked_degree}, {"prec", r.checked_prec}}}};
  out["worst_residual_valuation"] = r.worst_residual_valuation ? Json(*r.worst_residual_valuation) : Json();
  if (r.location)
    out["location"] = {{"row", r.location->row},
                       {"col", r.location->col},
                       {"t_degree", r.location->t_degree},
                       {"v_exponent", r.location->v_exponent}};
  else
    out["location"] = Json();
  return out;
}

inline Json to_json(const TorsionScreen& s) {
  return Json{{"annihilator", s.annihilator ? to_json(*s.annihilator) : Json()},
              {"non_torsion_proven", s.non_torsion_proven},
              {"searched_degree", s.searched_degree}};
}

inline Json to_json(const SolverBounds& b) {
  Json out{{"B_t", b.t_degree}, {"B_theta", b.theta_degree}, {"B_mu", b.mu_degree}};
  if (b.escalation) out["escalation"] = {{"factor", b.escalation->factor}, {"max_rounds", b.escalation->max_rounds}};
  return out;
}

inline Json optional_bool(const std::optional<bool>& b) { return b ? Json(*b) : Json(); }

inline Json to_json(const RelationWitness& w) {
  Json mu = Json::array();
  for (const auto& m : w.mu) mu.push_back(to_json(m));
  return Json{{"mu", mu},
              {"f", to_json(w.f)},
              {"f_denominator", to_json(w.f_denominator)},
              {"omega_coefficient", w.omega_coefficient ? to_json(*w.omega_coefficient) : Json()},
              {"checks",
               {{"substitution_pass", w.checks.substitution_pass},
                {"f_at_theta_zero", w.checks.f_at_theta_zero},
                {"numeric_pass", optional_bool(w.checks.numeric_pass)},
                {"numeric_note", w.checks.numeric_note},
                {"exact_certificate", optional_bool(w.checks.exact_certificate)}}}};
}

inline Json to_json(const ScanCandidate& c) {
  Json cs = Json::array();
  for (const auto& x : c.c) cs.push_back(to_json(x));
  return Json{{"c0", to_json(c.c0)}, {"c", cs}, {"exact_pass", optional_bool(c.exact_pass)}};
}

inline Json to_json(const ScanResult& s) {
  Json cands = Json::array();
  for (const auto& c : s.candidates) cands.push_back(to_json(c));
  return Json{{"degree_bound", s.degree_bound},
              {"prec", {{"rows", s.rows}, {"lowest_exponent", s.lowest_exponent}, {"highest_exponent", s.highest_exponent}}},
              {"candidates", cands}};
}

inline Json to_json(const Certificate& c) {
  Json cs = Json::array(), as = Json::array();
  for (const auto& x : c.c) cs.push_back(to_json(x));
  for (const auto& a : c.alphas) as.push_back(to_json(a));
  return Json{{"c", cs}, {"alphas", as}, {"exact_pass", c.exact_pass}, {"source", c.source}};
}

inline Json to_json(const GaloisReport& r) {
  Json alphas = Json::array(), witnesses = Json::array(), torsion = Json::array(), certs = Json::array();
  for (const auto& a : r.alphas) alphas.push_back(to_json(a));
  for (const auto& w : r.witnesses) witnesses.push_back(to_json(w));
  for (const auto& t : r.torsion) {
    Json j = to_json(t.screen);
    j["alpha_index"] = t.alpha_index;
    torsion.push_back(j);
  }
  for (const auto& c : r.certificates) certs.push_back(to_json(c));
  Json numeric;
  if (r.scan) {
    numeric = to_json(*r.scan);
  } else {
    numeric = Json{{"prec", Json()}, {"candidates", Json::array()}};
  }
  numeric["note"] = r.scan_note;
  return Json{{"q", r.field->q()},
              {"p", r.field->p()},
              {"e", r.field->e()},
              {"alphas", alphas},
              {"bounds", to_json(r.bounds)},
              {"rounds", r.rounds},
              {"witnesses", witnesses},
              {"relation_rank", r.relation_rank},
              {"n", r.n},
              {"dim_G", r.dim_G},
              {"dim_Ru", r.dim_Ru},
              {"quotient_group", r.quotient_group},
              {"status", to_string(r.status)},
              {"numeric", numeric},
              {"torsion", torsion},
              {"certificates", certs}};
}

// ---------------------------------------------------------------------------
// Parsing with JSON-path diagnostics

/// Collects every schema violation as "<json path>: <message>".
class Violations {
 public:
  void add(const std::string& path, const std::string& message) { list_.push_back(path + ": " + message); }
  bool empty() const noexcept { return list_.empty(); }
  const std::vector<std::string>& list() const noexcept { return list_; }
  std::string joined() const {
    std::string s;
    for (const auto& v : list_) s += (s.empty() ? "" : "; ") + v;
    return s;
  }

 private:
  std::vector<std::string> list_;
};

inline std::optional<FqElem> parse_fq(const FieldPtr& F, const Json& j, const std::string& path, Violations& err) {
  if (j.is_number_integer()) {
    // A bare integer is accepted for prime fields.
    const long long v = j.get<long long>();
    if (F->e() != 1 || v < 0 || v >= static_cast<long long>(F->p())) {
      err.add(path, "field element must be a digit array (or an integer in [0, p) when e = 1)");
      return std::nullopt;
    }
    return FqElem{static_cast<std::uint32_t>(v)};
  }
  if (!j.is_array() || j.size() > F->e()) {
    err.add(path, "field element must be an array of at most e digits");
    return std::nullopt;
  }
  std::vector<std::uint32_t> digits;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer() || j[i].get<long long>() < 0 || j[i].get<long long>() >= static_cast<long long>(F->p())) {
      err.add(path + "[" + std::to_string(i) + "]", "digit must be an integer in [0, p)");
      return std::nullopt;
    }
    digits.push_back(j[i].get<std::uint32_t>());
  }
  return F->from_digits(digits);
}

template <class Tag>
std::optional<Poly<Tag>> parse_poly(const FieldPtr& F, const Json& j, const std::string& path, Violations& err) {
  if (!j.is_array()) {
    err.add(path, "polynomial must be a coefficient array, lowest degree first");
    return std::nullopt;
  }
  std::vector<FqElem> c;
  bool ok = true;
  for (std::size_t i = 0; i < j.size(); ++i) {
    auto e = parse_fq(F, j[i], path + "[" + std::to_string(i) + "]", err);
    ok = ok && e.has_value();
    c.push_back(e.value_or(FqElem{0}));
  }
  if (!ok) return std::nullopt;
  return Poly<Tag>(F, std::move(c));
}

inline std::optional<RatTheta> parse_rat(const FieldPtr& F, const Json& j, const std::string& path, Violations& err) {
  if (j.is_array()) {
    auto p = parse_poly<ThetaTag>(F, j, path, err);
    if (!p) return std::nullopt;
    return RatTheta(*p);
  }
  if (j.is_object()) {
    if (!j.contains("num") || !j.contains("den")) {
      err.add(path, "rational function must be a coefficient array or {num, den}");
      return std::nullopt;
    }
    for (const auto& [k, v] : j.items())
      if (k != "num" && k != "den") err.add(path + "." + k, "unknown key");
    auto n = parse_poly<ThetaTag>(F, j["num"], path + ".num", err);
    auto d = parse_poly<ThetaTag>(F, j["den"], path + ".den", err);
    if (!n || !d) return std::nullopt;
    if (d->is_zero()) {
      err.add(path + ".den", "denominator must be nonzero");
      return std::nullopt;
    }
    return RatTheta(*n, *d);
  }
  err.add(path, "rational function must be a coefficient array or {num, den}");
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Run configuration

struct FieldSpec {
  std::uint32_t p = 2;
  std::uint32_t e = 1;
  std::vector<std::uint32_t> modulus;  // empty: first irreducible
  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

struct PrecisionSpec {
  long long v_terms = 64;        // absolute v-window (prec_end) for series values
  long long t_degree = 8;        // D_t
  unsigned product_terms = 6;    // M
  unsigned scan_degree = 2;      // B of the numeric scan
  friend bool operator==(const PrecisionSpec&, const PrecisionSpec&) = default;
};

struct CommandOptions {
  std::optional<ThetaPoly> a;                 // act: the polynomial acting
  std::optional<ThetaPoly> f_denominator;     // relations, galois
  std::optional<long long> scan_rows;         // scan, galois: N
  unsigned torsion_degree = 8;
  bool numeric_checks = true;
  bool scan = true;
  std::size_t matrix_cap = kDefaultMatrixCap;
  friend bool operator==(const CommandOptions&, const CommandOptions&) = default;
};

struct RunConfig {
  FieldSpec field_spec;
  FieldPtr field;
  std::vector<RatTheta> alphas;
  SolverBounds bounds;
  PrecisionSpec precision;
  CommandOptions options;

  friend bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.field_spec == b.field_spec && a.alphas == b.alphas && a.bounds == b.bounds && a.precision == b.precision &&
           a.options == b.options;
  }
};

inline const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> c{"period", "log", "exp", "act", "omega", "relations",
                                          "scan", "galois", "check-trivialization", "selftest"};
  return c;
}

inline bool command_needs_alphas(const std::string& cmd) {
  return cmd == "log" || cmd == "exp" || cmd == "relations" || cmd == "scan" || cmd == "galois";
}

inline Json to_json(const RunConfig& c) {
  Json field{{"p", c.field_spec.p}, {"e", c.field_spec.e}};
  if (!c.field_spec.modulus.empty()) field["modulus"] = c.field_spec.modulus;
  Json alphas = Json::array();
  for (const auto& a : c.alphas) alphas.push_back(to_json(a));
  Json options{{"torsion_degree", c.options.torsion_degree},
               {"numeric_checks", c.options.numeric_checks},
               {"scan", c.options.scan},
               {"matrix_cap", c.options.matrix_cap}};
  if (c.options.a) options["a"] = to_json(*c.options.a);
  if (c.options.f_denominator) options["f_denominator"] = to_json(*c.options.f_denominator);
  if (c.options.scan_rows) options["scan_rows"] = *c.options.scan_rows;
  return Json{{"field", field},
              {"alphas", alphas},
              {"bounds", to_json(c.bounds)},
              {"precision",
               {{"v_terms", c.precision.v_terms},
                {"t_degree", c.precision.t_degree},
                {"product_terms", c.precision.product_terms},
                {"scan_degree", c.precision.scan_degree}}},
              {"options", options}};
}

struct ConfigParse {
  std::optional<RunConfig> config;
  std::vector<std::string> violations;
};

namespace detail {
inline void check_keys(const Json& obj, const std::string& path, std::initializer_list<const char*> allowed, Violations& err) {
  for (const auto& [k, v] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) err.add(path + "." + k, "unknown key");
  }
}

template <class T>
void read_int(const Json& obj, const char* key, const std::string& path, T& out, long long lo, long long hi, Violations& err) {
  if (!obj.contains(key)) return;
  const Json& v = obj[key];
  const std::string p = path + "." + key;
  if (!v.is_number_integer()) {
    err.add(p, "must be an integer");
    return;
  }
  const long long x = v.get<long long>();
  if (x < lo || x > hi) {
    err.add(p, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return;
  }
  out = static_cast<T>(x);
}

inline void read_bool(const Json& obj, const char* key, const std::string& path, bool& out, Violations& err) {
  if (!obj.contains(key)) return;
  if (!obj[key].is_boolean()) {
    err.add(path + "." + key, "must be a boolean");
    return;
  }
  out = obj[key].get<bool>();
}
}  // namespace detail

/// Validates the whole document and reports every violation with its JSON path. When a
/// command is given, command-specific requirements are checked too.
inline ConfigParse parse_config(const std::string& text, const std::string& command = "") {
  ConfigParse out;
  Violations err;
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    out.violations.push_back(std::string("$: invalid JSON: ") + e.what());
    return out;
  }
  if (!doc.is_object()) {
    out.violations.push_back("$: configuration must be a JSON object");
    return out;
  }
  detail::check_keys(doc, "$", {"field", "alphas", "bounds", "precision", "options"}, err);

  RunConfig cfg;
  bool field_ok = false;
  if (!doc.contains("field") || !doc["field"].is_object()) {
    err.add("$.field", "required object {p, e, modulus?}");
  } else {
    const Json& f = doc["field"];
    detail::check_keys(f, "$.field", {"p", "e", "modulus"}, err);
    const std::size_t before = err.list().size();
    if (!f.contains("p")) err.add("$.field.p", "required");
    detail::read_int(f, "p", "$.field", cfg.field_spec.p, 2, 65536, err);
    detail::read_int(f, "e", "$.field", cfg.field_spec.e, 1, 16, err);
    if (f.contains("modulus")) {
      if (!f["modulus"].is_array()) {
        err.add("$.field.modulus", "must be a digit array, lowest degree first");
      } else {
        for (std::size_t i = 0; i < f["modulus"].size(); ++i) {
          const Json& d = f["modulus"][i];
          if (!d.is_number_integer() || d.get<long long>() < 0) {
            err.add("$.field.modulus[" + std::to_string(i) + "]", "must be a nonnegative integer");
            continue;
          }
          cfg.field_spec.modulus.push_back(d.get<std::uint32_t>());
        }
      }
    }
    if (err.list().size() == before) {
      if (!detail::is_prime(cfg.field_spec.p)) {
        err.add("$.field.p", "p must be prime");
      } else {
        try {
          cfg.field = Field::make(cfg.field_spec.p, cfg.field_spec.e, cfg.field_spec.modulus);
          field_ok = true;
        } catch (const Error& e) {
          err.add(f.contains("modulus") ? "$.field.modulus" : "$.field", e.what());
        }
      }
    }
  }

  if (doc.contains("alphas")) {
    if (!doc["alphas"].is_array()) {
      err.add("$.alphas", "must be an array of rational functions");
    } else if (field_ok) {
      for (std::size_t i = 0; i < doc["alphas"].size(); ++i) {
        const std::string p = "$.alphas[" + std::to_string(i) + "]";
        auto a = parse_rat(cfg.field, doc["alphas"][i], p, err);
        if (!a) continue;
        if (a->is_zero()) err.add(p, "alpha must be nonzero");
        cfg.alphas.push_back(*a);
      }
    }
  }
  if (command_needs_alphas(command) && cfg.alphas.empty() && (!doc.contains("alphas") || doc["alphas"].empty()))
    err.add("$.alphas", "command \"" + command + "\" requires at least one alpha");

  if (doc.contains("bounds")) {
    const Json& b = doc["bounds"];
    if (!b.is_object()) {
      err.add("$.bounds", "must be an object {B_t, B_theta, B_mu?, escalation?}");
    } else {
      detail::check_keys(b, "$.bounds", {"B_t", "B_theta", "B_mu", "escalation"}, err);
      detail::read_int(b, "B_t", "$.bounds", cfg.bounds.t_degree, 0, 4096, err);
      detail::read_int(b, "B_theta", "$.bounds", cfg.bounds.theta_degree, 0, 4096, err);
      cfg.bounds.mu_degree = cfg.bounds.t_degree;
      detail::read_int(b, "B_mu", "$.bounds", cfg.bounds.mu_degree, 0, 4096, err);
      if (b.contains("escalation")) {
        const Json& e = b["escalation"];
        if (!e.is_object()) {
          err.add("$.bounds.escalation", "must be an object {factor, max_rounds}");
        } else {
          detail::check_keys(e, "$.bounds.escalation", {"factor", "max_rounds"}, err);
          Escalation esc;
          detail::read_int(e, "factor", "$.bounds.escalation", esc.factor, 2, 16, err);
          detail::read_int(e, "max_rounds", "$.bounds.escalation", esc.max_rounds, 0, 16, err);
          cfg.bounds.escalation = esc;
        }
      }
    }
  }

  if (doc.contains("precision")) {
    const Json& p = doc["precision"];
    if (!p.is_object()) {
      err.add("$.precision", "must be an object {v_terms, t_degree, product_terms, scan_degree}");
    } else {
      detail::check_keys(p, "$.precision", {"v_terms", "t_degree", "product_terms", "scan_degree"}, err);
      detail::read_int(p, "v_terms", "$.precision", cfg.precision.v_terms, 0, 1 << 20, err);
      detail::read_int(p, "t_degree", "$.precision", cfg.precision.t_degree, 0, 4096, err);
      detail::read_int(p, "product_terms", "$.precision", cfg.precision.product_terms, 1, 64, err);
      detail::read_int(p, "scan_degree", "$.precision", cfg.precision.scan_degree, 0, 256, err);
    }
  }

  if (doc.contains("options")) {
    const Json& o = doc["options"];
    if (!o.is_object()) {
      err.add("$.options", "must be an object");
    } else {
      detail::check_keys(o, "$.options",
                         {"a", "f_denominator", "scan_rows", "torsion_degree", "numeric_checks", "scan", "matrix_cap"}, err);
      if (field_ok && o.contains("a")) cfg.options.a = parse_poly<ThetaTag>(cfg.field, o["a"], "$.options.a", err);
      if (field_ok && o.contains("f_denominator")) {
        cfg.options.f_denominator = parse_poly<ThetaTag>(cfg.field, o["f_denominator"], "$.options.f_denominator", err);
        if (cfg.options.f_denominator && cfg.options.f_denominator->is_zero())
          err.add("$.options.f_denominator", "must be nonzero");
      }
      if (o.contains("scan_rows")) {
        long long n = 0;
        detail::read_int(o, "scan_rows", "$.options", n, 1, 1 << 20, err);
        cfg.options.scan_rows = n;
      }
      detail::read_int(o, "torsion_degree", "$.options", cfg.options.torsion_degree, 0, 64, err);
      detail::read_bool(o, "numeric_checks", "$.options", cfg.options.numeric_checks, err);
      detail::read_bool(o, "scan", "$.options", cfg.options.scan, err);
      detail::read_int(o, "matrix_cap", "$.options", cfg.options.matrix_cap, 1, 1LL << 40, err);
    }
  }
  if (command == "act" && !cfg.options.a) err.add("$.options.a", "command \"act\" requires the polynomial a");

  if (!err.empty()) {
    out.violations = err.list();
    return out;
  }
  out.config = std::move(cfg);
  return out;
}

/// Throws ConfigError listing all violations.
inline RunConfig parse_config_or_throw(const std::string& text, const std::string& command = "") {
  ConfigParse p = parse_config(text, command);
  if (!p.config) {
    std::string msg = "invalid configuration";
    for (const auto& v : p.violations) msg += "\n  " + v;
    throw ConfigError(msg);
  }
  return std::move(*p.config);
}

// ---------------------------------------------------------------------------
// Reports

inline constexpr const char* kToolVersion = "0.1.0";

struct ReportError {
  std::string kind;
  std::string message;
};

struct RunReport {
  std::string command;
  std::optional<Json> config;
  Json result;
  std::vector<ReportError> errors;
  int exit_code = 0;
  std::optional<double> seconds;  // only with --timing; excluded by default for reproducibility
  std::string summary;            // human-readable lines for text mode
};

inline Json to_json(const RunReport& r) {
  Json errors = Json::array();
  for (const auto& e : r.errors) errors.push_back({{"kind", e.kind}, {"message", e.message}});
  Json out{{"command", r.command},
           {"config", r.config ? *r.config : Json()},
           {"result", r.result},
           {"errors", errors},
           {"exit_code", r.exit_code},
           {"tool", {{"name", "tmg"}, {"version", kToolVersion}}},
           {"uniformizer", "theta = -v^-(q-1)"}};
  if (r.seconds) out["timing"] = {{"seconds", *r.seconds}};
  return out;
}

/// json: canonical dump (sorted keys, two-space indent, trailing newline).
/// text: the command summary plus errors.
inline std::string emit_report(const RunReport& r, const std::string& format) {
  if (format == "json") return to_json(r).dump(2) + "\n";
  std::ostringstream os;
  os << "tmg " << r.command << "\n";
  if (!r.summary.empty()) os << r.summary;
  for (const auto& e : r.errors) os << "error (" << e.kind << "): " << e.message << "\n";
  os << "exit code " << r.exit_code << "\n";
  return os.str();
}

}  // namespace tmg
