#pragma once

// Command dispatch for the tmg tool. Each command turns a validated RunConfig into a
// RunReport; exceptions map to exit codes 1 (input), 2 (bounds or precision exhausted) and
// 3 (an exact invariant failed).

#include <chrono>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tmg/io.hpp"

namespace tmg {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitExhausted = 2;
inline constexpr int kExitInternal = 3;

inline int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::domain:
    case ErrorKind::configuration: return kExitInput;
    case ErrorKind::precision:
    case ErrorKind::resource: return kExitExhausted;
    case ErrorKind::internal: return kExitInternal;
  }
  return kExitInternal;
}

// ---------------------------------------------------------------------------
// Plain-text rendering

namespace text {

inline std::string fq(const Field& F, FqElem a) {
  if (F.e() == 1) return std::to_string(a.code);
  std::string s = "[";
  const auto d = F.digits(a);
  for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
  return s + "]";
}

template <class Tag>
std::string poly(const Poly<Tag>& a, const char* var) {
  if (a.is_zero()) return "0";
  std::string s;
  for (long long i = a.degree(); i >= 0; --i) {
    const FqElem c = a.coeff(i);
    if (!c.code) continue;
    if (!s.empty()) s += " + ";
    const bool unit = c.code == 1;
    if (i == 0 || !unit) s += fq(*a.field(), c);
    if (i >= 1) s += var;
    if (i >= 2) s += "^" + std::to_string(i);
  }
  return s;
}

inline std::string rat(const RatTheta& a) {
  if (a.is_polynomial()) return poly(a.num(), "θ");
  return "(" + poly(a.num(), "θ") + ")/(" + poly(a.den(), "θ") + ")";
}

inline std::string bivar(const BivarPoly& f) {
  if (f.is_zero()) return "0";
  std::string s;
  for (long long j = f.t_degree(); j >= 0; --j) {
    const ThetaPoly& r = f.row(std::size_t(j));
    if (r.is_zero()) continue;
    if (!s.empty()) s += " + ";
    const std::string rs = poly(r, "θ");
    if (j == 0) {
      s += rs;
    } else {
      if (!r.is_one()) s += "(" + rs + ")";
      s += j == 1 ? "t" : "t^" + std::to_string(j);
    }
  }
  return s;
}

inline std::string series(const InfSeries& s) { return s.to_string(); }

inline std::string alphas(const std::vector<RatTheta>& a) {
  std::string s = "(";
  for (std::size_t i = 0; i < a.size(); ++i) s += (i ? ", " : "") + rat(a[i]);
  return s + ")";
}

}  // namespace text

inline std::string galois_summary(const GaloisReport& r) {
  std::ostringstream os;
  const std::size_t rr = r.alphas.size();
  os << "q = " << r.field->q() << ", alphas = " << text::alphas(r.alphas) << "\n";
  os << "bounds: B_t = " << r.bounds.t_degree << ", B_theta = " << r.bounds.theta_degree << ", B_mu = " << r.bounds.mu_degree
     << " (rounds " << r.rounds << ")\n";
  os << "relation rank = " << r.relation_rank << "\n";
  os << "n = r - rank = " << r.n << " (r = " << rr << ")\n";
  os << "dim G = n+1 = " << r.dim_G << " (r = " << rr << ")\n";
  os << "dim R_u = n = " << r.dim_Ru << "\n";
  os << "G / R_u = " << r.quotient_group << "\n";
  os << "status: " << to_string(r.status) << "\n";
  for (std::size_t i = 0; i < r.witnesses.size(); ++i) {
    const auto& w = r.witnesses[i];
    os << "witness " << i + 1 << ": mu = (";
    for (std::size_t k = 0; k < w.mu.size(); ++k) os << (k ? ", " : "") << text::poly(w.mu[k], "t");
    os << "), f = " << text::bivar(w.f);
    if (!w.f_denominator.is_one()) os << " / (" << text::poly(w.f_denominator, "θ") << ")";
    os << "; substitution " << (w.checks.substitution_pass ? "ok" : "FAIL") << ", f(θ) = 0 "
       << (w.checks.f_at_theta_zero ? "ok" : "FAIL") << ", numeric "
       << (w.checks.numeric_pass ? (*w.checks.numeric_pass ? "ok" : "FAIL") : "skipped") << "\n";
  }
  for (const auto& c : r.certificates) {
    os << "certificate (" << c.source << "): sum C_{c_i}(alpha_i) = 0 with c = (";
    for (std::size_t k = 0; k < c.c.size(); ++k) os << (k ? ", " : "") << text::poly(c.c[k], "θ");
    os << ") " << (c.exact_pass ? "confirmed" : "rejected") << "\n";
  }
  for (const auto& t : r.torsion) {
    os << "torsion alpha_" << t.alpha_index + 1 << ": ";
    if (t.screen.annihilator)
      os << "annihilated by " << text::poly(*t.screen.annihilator, "θ");
    else if (t.screen.non_torsion_proven)
      os << "non-torsion (degree growth)";
    else
      os << "no annihilator of degree <= " << t.screen.searched_degree;
    os << "\n";
  }
  if (r.scan) os << "numeric scan: " << r.scan->candidates.size() << " candidate(s), B = " << r.scan->degree_bound
                 << ", N = " << r.scan->rows << "\n";
  else if (!r.scan_note.empty()) os << "numeric scan " << r.scan_note << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Selftest suites

struct SuiteResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

namespace detail {

inline ThetaPoly random_theta_poly(const FieldPtr& F, std::mt19937_64& rng, int max_degree) {
  std::uniform_int_distribution<int> deg(-1, max_degree);
  std::uniform_int_distribution<std::uint32_t> coef(0, F->q() - 1);
  std::vector<FqElem> c(std::size_t(deg(rng) + 1));
  for (auto& x : c) x = FqElem{coef(rng)};
  return ThetaPoly(F, std::move(c));
}

inline RatTheta random_rat(const FieldPtr& F, std::mt19937_64& rng, int max_degree) {
  ThetaPoly den = random_theta_poly(F, rng, max_degree);
  if (den.is_zero()) den = ThetaPoly::one(F);
  return RatTheta(random_theta_poly(F, rng, max_degree), den);
}

inline std::vector<SuiteResult> run_selftests() {
  std::vector<SuiteResult> out;
  auto suite = [&](const std::string& name, const std::function<std::string()>& body) {
    try {
      const std::string failure = body();
      out.push_back({name, failure.empty(), failure});
    } catch (const std::exception& e) {
      out.push_back({name, false, e.what()});
    }
  };
  std::mt19937_64 rng(20240601);

  suite("field-axioms", [&]() -> std::string {
    for (auto [p, e] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}, {3, 2}}) {
      const auto F = Field::make(p, e);
      for (std::uint32_t a = 0; a < F->q(); ++a)
        for (std::uint32_t b = 0; b < F->q(); ++b) {
          const FqElem x{a}, y{b};
          if (F->add(x, y) != F->add(y, x) || F->mul(x, y) != F->mul(y, x)) return "commutativity fails";
          if (b && F->mul(F->div(x, y), y) != x) return "division fails";
          for (std::uint32_t c = 0; c < F->q(); ++c)
            if (F->mul(x, F->add(y, FqElem{c})) != F->add(F->mul(x, y), F->mul(x, FqElem{c}))) return "distributivity fails";
        }
    }
    return "";
  });

  suite("twist-homomorphism", [&]() -> std::string {
    for (std::uint32_t q : {2u, 3u, 4u}) {
      const auto F = q == 4 ? Field::make(2, 2) : Field::make(q);
      for (int i = 0; i < 100; ++i) {
        const RatTheta a = random_rat(F, rng, 3), b = random_rat(F, rng, 3);
        if (twist(a + b) != twist(a) + twist(b) || twist(a * b) != twist(a) * twist(b)) return "twist is not a ring map";
      }
    }
    return "";
  });

  suite("embedding-homomorphism", [&]() -> std::string {
    for (std::uint32_t q : {2u, 3u}) {
      const auto F = Field::make(q);
      for (int i = 0; i < 50; ++i) {
        const RatTheta a = random_rat(F, rng, 3), b = random_rat(F, rng, 3);
        if (!(embed_theta(a * b, 30)).agrees_with(embed_theta(a, 30) * embed_theta(b, 30))) return "embedding is not multiplicative";
        if (!(embed_theta(a + b, 30)).agrees_with(embed_theta(a, 30) + embed_theta(b, 30))) return "embedding is not additive";
      }
    }
    return "";
  });

  suite("omega-identity", [&]() -> std::string {
    for (std::uint32_t q : {2u, 3u}) {
      const auto r = check_omega_identity(Field::make(q), 6, 8, 48);
      if (!r.pass) return "nonzero residual for q = " + std::to_string(q);
    }
    return "";
  });

  suite("trivialization", [&]() -> std::string {
    const auto F = Field::make(2);
    const std::vector<RatTheta> a{RatTheta::theta(F)};
    const auto r = check_trivialization(PhiMatrix(a).twisted_once(F, 8, 48), psi_matrix(F, a, 6, 8, 48));
    return r.pass ? "" : "Psi = tau(Phi) tau(Psi) fails";
  });

  suite("period-cross-check", [&]() -> std::string {
    for (std::uint32_t q : {2u, 3u}) {
      const auto F = Field::make(q);
      const InfSeries a = period_via_omega(F, 6, 8, 64), b = pi_product(F, 64, 6);
      if (!a.agrees_with(b)) return "-1/Omega(theta) differs from the product formula for q = " + std::to_string(q);
    }
    return "";
  });

  suite("exp-log-inverse", [&]() -> std::string {
    for (std::uint32_t q : {2u, 3u}) {
      const auto F = Field::make(q);
      if (compose(exp_series(F, 3), log_series(F, 3), 3) != AdditivePoly::identity(F)) return "exp o log != id";
    }
    return "";
  });

  suite("solver-witness", [&]() -> std::string {
    const auto F = Field::make(2);
    const auto rep = galois_dimension({RatTheta::theta(F)}, SolverBounds::uniform(2));
    if (rep.status != GaloisStatus::dependent_proven || rep.dim_G != 1) return "alpha = theta over F_2 not found dependent";
    return "";
  });
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Commands

struct RunOptions {
  bool timing = false;
};

namespace detail {

inline Json series_list(const std::vector<InfSeries>& s) {
  Json out = Json::array();
  for (const auto& x : s) out.push_back(to_json(x));
  return out;
}

inline unsigned product_terms_for(const FieldPtr& F, long long prec_end, unsigned requested) {
  unsigned m = requested;
  while (omega_exact_window(F->q(), m) < prec_end) ++m;
  return m;
}

inline void run_period(const RunConfig& c, RunReport& rep) {
  const auto& F = c.field;
  const InfSeries pi = pi_product(F, c.precision.v_terms, c.precision.product_terms);
  Json cross;
  std::ostringstream os;
  os << "pi = " << text::series(pi) << "\n";
  try {
    const unsigned m = product_terms_for(F, c.precision.v_terms, c.precision.product_terms);
    const InfSeries via = period_via_omega(F, m, c.precision.t_degree, c.precision.v_terms);
    const long long window = std::min(pi.prec_end(), via.prec_end());
    const bool agree = via.agrees_with(pi);
    cross = {{"agree", agree}, {"window", window}, {"value", to_json(via)}};
    os << "-1/Omega(theta) agrees through v^" << window << ": " << (agree ? "yes" : "NO") << "\n";
    if (!agree) {
      rep.errors.push_back({"internal", "-1/Omega(theta) disagrees with the product formula"});
      rep.exit_code = kExitInternal;
    }
  } catch (const PrecisionError& e) {
    cross = {{"agree", Json()}, {"note", e.what()}};
    os << "-1/Omega(theta): " << e.what() << "\n";
  }
  rep.result = {{"pi", to_json(pi)}, {"omega_cross_check", cross}};
  rep.summary = os.str();
}

inline void run_log(const RunConfig& c, RunReport& rep) {
  Json values = Json::array();
  std::ostringstream os;
  for (const auto& a : c.alphas) {
    require_convergence(a, "log");
    const unsigned m = std::max(c.precision.product_terms, log_terms_for(a, c.precision.v_terms));
    const InfSeries v = log_value(a, m, c.precision.v_terms);
    values.push_back({{"alpha", to_json(a)}, {"terms", m}, {"value", to_json(v)}});
    os << "log_C(" << text::rat(a) << ") = " << text::series(v) << "\n";
  }
  rep.result = {{"values", values}};
  rep.summary = os.str();
}

inline void run_exp(const RunConfig& c, RunReport& rep) {
  Json values = Json::array();
  std::ostringstream os;
  for (const auto& a : c.alphas) {
    const InfSeries v = exp_value(embed_theta(a, c.precision.v_terms), c.precision.product_terms);
    values.push_back({{"z", to_json(a)}, {"terms", c.precision.product_terms}, {"value", to_json(v)}});
    os << "exp_C(" << text::rat(a) << ") = " << text::series(v) << "\n";
  }
  rep.result = {{"values", values}};
  rep.summary = os.str();
}

inline void run_act(const RunConfig& c, RunReport& rep) {
  const ThetaPoly& a = *c.options.a;
  const AdditivePoly symbolic = carlitz_act(a);
  Json values = Json::array();
  std::ostringstream os;
  os << "C_a with a = " << text::poly(a, "θ") << ": " << symbolic.coeffs().size() << " coefficient(s)\n";
  for (const auto& x : c.alphas) {
    const RatTheta v = carlitz_act(a, x);
    values.push_back({{"alpha", to_json(x)}, {"value", to_json(v)}});
    os << "C_a(" << text::rat(x) << ") = " << text::rat(v) << "\n";
  }
  rep.result = {{"a", to_json(a)}, {"symbolic", to_json(symbolic)}, {"values", values}};
  rep.summary = os.str();
}

inline void run_omega(const RunConfig& c, RunReport& rep) {
  const auto& F = c.field;
  const TSeries om = omega(F, c.precision.product_terms, c.precision.t_degree, c.precision.v_terms);
  const auto check = check_omega_identity(F, c.precision.product_terms, c.precision.t_degree, c.precision.v_terms);
  rep.result = {{"omega", to_json(om)}, {"identity", to_json(check)}};
  std::ostringstream os;
  os << "Omega to t^" << c.precision.t_degree << " through v^" << c.precision.v_terms << "\n";
  os << "Omega = (t - θ^q) tau(Omega): " << (check.pass ? "pass" : "FAIL") << " (window D_t = " << check.checked_degree
     << ", v^" << check.checked_prec << ")\n";
  rep.summary = os.str();
  if (!check.pass) {
    rep.errors.push_back({"internal", "Omega functional identity fails"});
    rep.exit_code = kExitInternal;
  }
}

inline NumericOptions numeric_options(const RunConfig& c) {
  NumericOptions n;
  n.prec = c.precision.v_terms;
  n.t_degree = c.precision.t_degree;
  n.product_terms = c.precision.product_terms;
  return n;
}

inline void run_relations(const RunConfig& c, RunReport& rep) {
  const LinearSystem sys = build_system(c.alphas, c.bounds, c.options.f_denominator, c.options.matrix_cap);
  auto ws = solve_relations(sys);
  Json witnesses = Json::array();
  for (auto& w : ws) {
    if (c.options.numeric_checks) w = verify_witness(std::move(w), c.alphas, numeric_options(c));
    witnesses.push_back(to_json(w));
  }
  const std::size_t rank = relation_rank(ws);
  rep.result = {{"system", {{"rows", sys.matrix.rows()}, {"cols", sys.matrix.cols()}}},
                {"kernel_dimension", solution_space(sys).size()},
                {"witnesses", witnesses},
                {"relation_rank", rank},
                {"bounds", to_json(c.bounds)}};
  std::ostringstream os;
  os << "system " << sys.matrix.rows() << " x " << sys.matrix.cols() << ", " << ws.size() << " witness(es), relation rank "
     << rank << "\n";
  rep.summary = os.str();
  if (ws.empty()) rep.exit_code = kExitExhausted;
}

inline long long default_scan_rows(const RunConfig& c) {
  const long long r = static_cast<long long>(c.alphas.size());
  return c.options.scan_rows.value_or(std::max<long long>(80, 4 * (c.precision.scan_degree + 1LL) * (r + 1)));
}

inline void run_scan(const RunConfig& c, RunReport& rep) {
  const ScanResult s = numeric_scan(c.alphas, c.precision.scan_degree, default_scan_rows(c));
  rep.result = to_json(s);
  std::ostringstream os;
  os << "numeric scan B = " << s.degree_bound << ", N = " << s.rows << ": " << s.candidates.size() << " candidate(s)\n";
  for (const auto& cand : s.candidates) {
    os << "  c0 = " << text::poly(cand.c0, "θ") << ", c = (";
    for (std::size_t k = 0; k < cand.c.size(); ++k) os << (k ? ", " : "") << text::poly(cand.c[k], "θ");
    os << "), exact " << (cand.exact_pass ? (*cand.exact_pass ? "confirmed" : "rejected") : "n/a") << "\n";
  }
  rep.summary = os.str();
}

inline GaloisOptions galois_options(const RunConfig& c) {
  GaloisOptions o;
  o.numeric = numeric_options(c);
  o.run_numeric_checks = c.options.numeric_checks;
  o.run_scan = c.options.scan;
  o.scan_degree = c.precision.scan_degree;
  o.scan_rows = default_scan_rows(c);
  o.torsion_degree = c.options.torsion_degree;
  o.f_denominator = c.options.f_denominator;
  o.matrix_cap = c.options.matrix_cap;
  return o;
}

inline void run_galois(const RunConfig& c, RunReport& rep) {
  const GaloisReport r = galois_dimension(c.alphas, c.bounds, galois_options(c));
  rep.result = to_json(r);
  rep.summary = galois_summary(r);
  if (r.status == GaloisStatus::independent_up_to_bounds) rep.exit_code = kExitExhausted;
}

inline void run_check_trivialization(const RunConfig& c, RunReport& rep) {
  const auto& F = c.field;
  const PhiMatrix phi = c.alphas.empty() ? PhiMatrix::carlitz() : PhiMatrix(c.alphas);
  const auto tw = phi.twisted_once(F, c.precision.t_degree, c.precision.v_terms);
  const auto psi = psi_matrix(F, c.alphas, c.precision.product_terms, c.precision.t_degree, c.precision.v_terms);
  const auto r = check_trivialization(tw, psi);
  rep.result = to_json(r);
  std::ostringstream os;
  os << "Psi = tau(Phi) tau(Psi) for r = " << c.alphas.size() << ": " << (r.pass ? "pass" : "FAIL") << " (D_t = " << r.checked_degree
     << ", through v^" << r.checked_prec << ")\n";
  rep.summary = os.str();
  if (!r.pass) {
    rep.errors.push_back({"internal", "rigid analytic trivialization identity fails"});
    rep.exit_code = kExitInternal;
  }
}

inline void run_selftest(RunReport& rep) {
  const auto suites = run_selftests();
  Json list = Json::array();
  std::ostringstream os;
  bool all = true;
  for (const auto& s : suites) {
    list.push_back({{"name", s.name}, {"pass", s.pass}, {"detail", s.detail}});
    os << (s.pass ? "PASS " : "FAIL ") << s.name << (s.detail.empty() ? "" : ": " + s.detail) << "\n";
    all = all && s.pass;
  }
  rep.result = {{"suites", list}, {"pass", all}};
  rep.summary = os.str();
  if (!all) rep.exit_code = kExitInternal;
}

}  // namespace detail

/// Runs one command on a validated configuration. Never throws for library errors: they
/// are recorded in the report with the matching exit code.
inline RunReport run_command(const std::string& command, const RunConfig& config, const RunOptions& opt = {}) {
  RunReport rep;
  rep.command = command;
  rep.config = to_json(config);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (command == "period") detail::run_period(config, rep);
    else if (command == "log") detail::run_log(config, rep);
    else if (command == "exp") detail::run_exp(config, rep);
    else if (command == "act") detail::run_act(config, rep);
    else if (command == "omega") detail::run_omega(config, rep);
    else if (command == "relations") detail::run_relations(config, rep);
    else if (command == "scan") detail::run_scan(config, rep);
    else if (command == "galois") detail::run_galois(config, rep);
    else if (command == "check-trivialization") detail::run_check_trivialization(config, rep);
    else if (command == "selftest") detail::run_selftest(rep);
    else throw ConfigError("unknown command \"" + command + "\"");
  } catch (const Error& e) {
    rep.errors.push_back({to_string(e.kind()), e.what()});
    rep.exit_code = exit_code_for(e.kind());
  } catch (const std::exception& e) {
    rep.errors.push_back({"internal", e.what()});
    rep.exit_code = kExitInternal;
  }
  if (opt.timing) rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

/// Parses the configuration text for `command` and runs it; violations become an input
/// error report.
inline RunReport run_from_text(const std::string& command, const std::string& config_text, const RunOptions& opt = {}) {
  ConfigParse parsed = parse_config(config_text, command);
  if (!parsed.config) {
    RunReport rep;
    rep.command = command;
    for (const auto& v : parsed.violations) rep.errors.push_back({"configuration", v});
    rep.exit_code = kExitInput;
    rep.result = Json{{"violations", parsed.violations}};
    return rep;
  }
  return run_command(command, *parsed.config, opt);
}

}  // namespace tmg
