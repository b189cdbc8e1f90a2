// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>

#include "tmg/cli.hpp"
#include "tmg/parallel.hpp"

using namespace tmg;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  Json report;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

struct Criterion {
  int id;
  std::string title;
  double time_limit;  // seconds, 0 for none
  std::function<Outcome()> run;
};

FieldPtr fq(std::uint32_t p) { return Field::make(p); }
ThetaPoly tp(const FieldPtr& F, std::initializer_list<long long> c) { return ThetaPoly::from_ints(F, c); }
RatTheta rat(const FieldPtr& F, std::initializer_list<long long> c) { return RatTheta(tp(F, c)); }

// Kernel membership of a proposed (f, μ) in the solver's system.
bool in_kernel(const LinearSystem& sys, const BivarPoly& f, const std::vector<TPoly>& mu) {
  if (f.t_degree() > sys.bounds.t_degree || f.theta_degree() > sys.bounds.theta_degree) return false;
  std::vector<FqElem> x(sys.unknowns(), FqElem{0});
  for (long long j = 0; j <= f.t_degree(); ++j)
    for (long long l = 0; l <= f.theta_degree(); ++l) x[sys.f_index(unsigned(j), unsigned(l))] = f.coeff(j, l);
  for (std::size_t i = 0; i < mu.size(); ++i)
    for (long long j = 0; j <= mu[i].degree(); ++j) x[sys.mu_index(i, unsigned(j))] = mu[i].coeff(j);
  for (auto y : sys.matrix.apply(x))
    if (y.code) return false;
  return true;
}

Outcome omega_identity() {
  Outcome o;
  for (std::uint32_t q : {2u, 3u}) {
    const auto F = fq(q);
    const TrivializationReport r = check_omega_identity(F, 6, 8, 40);
    o.require(r.pass, "q=" + std::to_string(q) + " residual nonzero");
    o.require(r.checked_prec >= 40 - static_cast<long long>(q), "q=" + std::to_string(q) + " window too small");
    o.report["q" + std::to_string(q)] = to_json(r);
  }
  return o;
}

Outcome trivialization() {
  Outcome o;
  const auto F = fq(2);
  const std::vector<std::vector<RatTheta>> cases{{RatTheta::theta(F)}, {rat(F, {1}), RatTheta::theta(F)}};
  for (const auto& alphas : cases) {
    const TrivializationReport r = check_trivialization(PhiMatrix(alphas).twisted_once(F, 8, 40), psi_matrix(F, alphas, 6, 8, 40));
    o.require(r.pass, "r=" + std::to_string(alphas.size()) + " fails");
    o.report["r" + std::to_string(alphas.size())] = to_json(r);
  }
  return o;
}

Outcome period() {
  Outcome o;
  const auto F2 = fq(2), F3 = fq(3);
  const InfSeries a2 = period_via_omega(F2, 8, 16, 64), a3 = period_via_omega(F3, 6, 8, 64);
  const InfSeries p2 = pi_product(F2, 64, 8), p3 = pi_product(F3, 64, 6);
  o.require(a2.prec_end() >= 30 && a2.agrees_with(p2), "q=2 disagreement or window < 30");
  o.require(a3.prec_end() >= 30 && a3.agrees_with(p3), "q=3 disagreement or window < 30");
  // θ² + θ + 1 + θ^{-4}: v-exponents −2..4 carry 1 1 1 0 0 0 1.
  const int lead[] = {1, 1, 1, 0, 0, 0, 1};
  for (int k = 0; k < 7; ++k) o.require(a2.coeff(k - 2).code == std::uint32_t(lead[k]), "q=2 leading term v^" + std::to_string(k - 2));
  o.report = {{"q2", {{"omega", to_json(a2)}, {"product", to_json(p2)}}}, {"q3", {{"omega", to_json(a3)}, {"product", to_json(p3)}}}};
  return o;
}

Outcome logarithm() {
  Outcome o;
  const auto F = fq(2);
  for (const auto& a : {rat(F, {1}), rat(F, {0, 1}), rat(F, {1, 1})}) {
    const InfSeries via_l = eval_at_theta(l_series(a, 10, 40, 64));
    const InfSeries direct = log_value(a, 10, 64);
    o.require(via_l.prec_end() >= 20 && via_l.agrees_with(direct), "alpha deg " + std::to_string(a.num().degree()) + " mismatch");
    o.report["values"].push_back({{"alpha", to_json(a)}, {"eval_at_theta", to_json(via_l)}, {"log_value", to_json(direct)}});
  }
  const InfSeries one = log_value(rat(F, {1}), 6, 3);
  o.require(one.agrees_with(InfSeries::from_terms(F, 0, {F->one(), F->zero(), F->one(), F->one()}, 3)),
            "log_C(1) leading terms");
  return o;
}

Outcome formal_inverse() {
  Outcome o;
  for (std::uint32_t q : {2u, 3u}) {
    const auto F = fq(q);
    const AdditivePoly e = exp_series(F, 3), l = log_series(F, 3);
    o.require(compose(e, l, 3) == AdditivePoly::identity(F), "exp∘log q=" + std::to_string(q));
    // Every a of degree ≤ 2 over F_q.
    const std::uint32_t count = q * q * q;
    for (std::uint32_t code = 1; code < count; ++code) {
      const ThetaPoly a(F, {FqElem{code % q}, FqElem{(code / q) % q}, FqElem{code / (q * q)}});
      o.require(compose(l, carlitz_act(a), 3) == l.scaled(RatTheta(a)), "log∘C_a q=" + std::to_string(q));
    }
    o.report["q" + std::to_string(q)] = {{"exp", to_json(e)}, {"log", to_json(l)}};
  }
  return o;
}

Outcome single_dependent() {
  Outcome o;
  const auto F = fq(2);
  const std::vector<RatTheta> alphas{RatTheta::theta(F)};
  const SolverBounds b = SolverBounds::uniform(4);
  const LinearSystem sys = build_system(alphas, b);
  const BivarPoly f(F, {tp(F, {0, 0, 1}), tp(F, {0, 1})});
  o.require(in_kernel(sys, f, {TPoly::from_ints(F, {0, 1})}), "(t, (t+θ)θ) not in kernel");
  const GaloisReport r = galois_dimension(alphas, b);
  o.require(!r.witnesses.empty(), "no witness");
  for (const auto& w : r.witnesses)
    o.require(w.checks.substitution_pass && w.checks.f_at_theta_zero, "witness check failed");
  o.require(r.n == 0 && r.dim_G == 1 && r.status == GaloisStatus::dependent_proven, "report values");
  o.require(verify_relation_exact({ThetaPoly::x(F)}, alphas), "C_θ(θ) != 0");
  bool cert = false;
  for (const auto& c : r.certificates) cert = cert || c.exact_pass;
  o.require(cert, "no exact certificate in report");
  o.report = to_json(r);
  return o;
}

Outcome pair_dependent() {
  Outcome o;
  const auto F = fq(3);
  const std::vector<RatTheta> alphas{RatTheta::theta(F), rat(F, {0, 0, 1, 1})};
  const SolverBounds b = SolverBounds::uniform(6);
  const LinearSystem sys = build_system(alphas, b);
  const BivarPoly f(F, {tp(F, {0, 0, -1}), tp(F, {0, 1})});
  o.require(in_kernel(sys, f, {TPoly::from_ints(F, {0, 1}), TPoly::from_ints(F, {-1})}), "(t,-1), (t-θ)θ not in kernel");
  const GaloisReport r = galois_dimension(alphas, b);
  o.require(r.relation_rank == 1 && r.n == 1 && r.dim_G == 2 && r.dim_Ru == 1, "report values");
  o.require(r.status == GaloisStatus::dependent_proven, "status");
  o.report = to_json(r);
  return o;
}

Outcome independence() {
  Outcome o;
  const auto F = fq(3);
  const std::vector<RatTheta> alphas{RatTheta::theta(F)};
  for (unsigned b = 0; b <= 8; ++b)
    o.require(solve_relations(build_system(alphas, SolverBounds::uniform(b))).empty(), "kernel at B=" + std::to_string(b));
  const ScanResult scan = numeric_scan(alphas, 6, 200);
  o.require(scan.candidates.empty(), "scan candidate");
  const TorsionScreen t = torsion_screen(alphas[0], 8);
  o.require(t.non_torsion_proven && !t.annihilator, "torsion screen");
  GaloisOptions opt;
  opt.scan_degree = 6;
  opt.scan_rows = 200;
  const GaloisReport r = galois_dimension(alphas, SolverBounds::uniform(8), opt);
  o.require(r.dim_G == 2 && r.status == GaloisStatus::independent_up_to_bounds, "report values");
  o.report = to_json(r);
  return o;
}

// Solutions over F_2 of τ(f) − (t+θ²)(f + μθ) = 0 by enumeration, using BivarPoly
// arithmetic only. Bit k of an assignment is the solver's unknown k.
std::set<unsigned> enumerate_solutions(const FieldPtr& F, unsigned bt, unsigned bth, unsigned bmu) {
  const unsigned nf = (bt + 1) * (bth + 1), n = nf + bmu + 1;
  const BivarPoly tq = BivarPoly::t(F) + BivarPoly::from_theta(tp(F, {0, 0, 1}));
  std::set<unsigned> out;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<ThetaPoly> rows;
    for (unsigned j = 0; j <= bt; ++j) {
      std::vector<FqElem> c;
      for (unsigned l = 0; l <= bth; ++l) c.push_back(FqElem{(mask >> (j * (bth + 1) + l)) & 1u});
      rows.emplace_back(F, c);
    }
    std::vector<FqElem> m;
    for (unsigned j = 0; j <= bmu; ++j) m.push_back(FqElem{(mask >> (nf + j)) & 1u});
    const BivarPoly f(F, rows);
    const BivarPoly mu_theta = BivarPoly::from_t(TPoly(F, m)) * BivarPoly::from_theta(ThetaPoly::x(F));
    if ((twist(f) - tq * (f + mu_theta)).is_zero()) out.insert(mask);
  }
  return out;
}

std::set<unsigned> kernel_span(const LinearSystem& sys) {
  const auto basis = solution_space(sys);
  std::set<unsigned> span;
  for (unsigned s = 0; s < (1u << basis.size()); ++s) {
    unsigned v = 0;
    for (std::size_t b = 0; b < basis.size(); ++b)
      if ((s >> b) & 1u)
        for (std::size_t k = 0; k < sys.unknowns(); ++k) v ^= basis[b][k].code << k;
    span.insert(v);
  }
  return span;
}

Outcome oracle() {
  Outcome o;
  const auto F = fq(2);
  const LinearSystem sys = build_system({RatTheta::theta(F)}, SolverBounds::uniform(1));
  const std::set<unsigned> expected = enumerate_solutions(F, 1, 1, 1);
  o.require(sys.unknowns() == 6, "unknown count");
  o.require(kernel_span(sys) == expected, "kernel differs from enumeration");
  // One step wider in θ, where the torsion witness appears and the kernel is nonzero.
  const LinearSystem wide = build_system({RatTheta::theta(F)}, SolverBounds{1, 2, 1, std::nullopt});
  const std::set<unsigned> wide_expected = enumerate_solutions(F, 1, 2, 1);
  o.require(wide_expected.size() > 1, "wider enumeration found only zero");
  o.require(kernel_span(wide) == wide_expected, "wider kernel differs from enumeration");
  o.report = {{"solutions", std::vector<unsigned>(expected.begin(), expected.end())},
              {"wide_solutions", std::vector<unsigned>(wide_expected.begin(), wide_expected.end())}};
  return o;
}

Outcome torsion() {
  Outcome o;
  const auto F = fq(2);
  const std::vector<RatTheta> alphas{rat(F, {1})};
  const ThetaPoly c = tp(F, {0, 1, 1});
  const ScanResult scan = numeric_scan(alphas, 2, 80);
  bool found = false;
  for (const auto& cand : scan.candidates) found = found || cand.c[0] == c;
  o.require(found, "scan misses θ²+θ");
  o.require(verify_relation_exact({c}, alphas), "C_{θ²+θ}(1) != 0");
  GaloisOptions opt;
  opt.scan_rows = 80;
  const GaloisReport r = galois_dimension(alphas, SolverBounds::uniform(2), opt);
  o.require(r.n == 0 && r.dim_G == 1 && r.status == GaloisStatus::dependent_proven, "report values");
  o.report = {{"scan", to_json(scan)}, {"galois", to_json(r)}};
  return o;
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", s);
  return buf;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {1, "omega functional identity", 5.0, omega_identity},
      {2, "trivialization r=1,2", 10.0, trivialization},
      {3, "period cross-check", 0, period},
      {4, "logarithm consistency", 0, logarithm},
      {5, "formal exp/log inverse", 0, formal_inverse},
      {6, "dependent single alpha", 1.0, single_dependent},
      {7, "dependent pair", 5.0, pair_dependent},
      {8, "independence corroboration", 0, independence},
      {9, "oracle equivalence", 0, oracle},
      {10, "torsion detection", 0, torsion},
  };

  bool all = true;
  std::vector<std::string> first_bytes;
  for (const auto& c : criteria) {
    set_worker_count(1);
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit > 0 && secs >= c.time_limit) o.require(false, "runtime " + fmt_seconds(secs) + " s over limit");
    first_bytes.push_back(o.report.dump(2));
    all = all && o.pass;
    std::printf("criterion %d (%s): %s [%s s]%s%s\n", c.id, c.title.c_str(), o.pass ? "PASS" : "FAIL",
                fmt_seconds(secs).c_str(), o.detail.empty() ? "" : " ", o.detail.c_str());
    std::fflush(stdout);
  }

  // Criterion 11: repeat every run, and again with 2 and 4 workers.
  Outcome det;
  const auto t0 = std::chrono::steady_clock::now();
  for (int workers : {1, 2, 4}) {
    set_worker_count(workers);
    for (std::size_t i = 0; i < criteria.size(); ++i) {
      std::string bytes;
      try {
        bytes = criteria[i].run().report.dump(2);
      } catch (const std::exception& e) {
        bytes = std::string("exception: ") + e.what();
      }
      det.require(bytes == first_bytes[i],
                  "criterion " + std::to_string(criteria[i].id) + " differs with " + std::to_string(workers) + " workers");
    }
  }
  // The tool's report bytes as well.
  for (int workers : {1, 2, 4}) {
    set_worker_count(workers);
    const std::string cfg = R"({"field":{"p":3},"alphas":[[[0],[1]],[[0],[0],[1],[1]]],"bounds":{"B_t":6,"B_theta":6}})";
    static std::string ref;
    const std::string bytes = emit_report(run_from_text("galois", cfg), "json");
    if (ref.empty()) ref = bytes;
    det.require(bytes == ref, "galois report differs with " + std::to_string(workers) + " workers");
  }
  set_worker_count(0);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  all = all && det.pass;
  std::printf("criterion 11 (determinism): %s [%s s]%s%s\n", det.pass ? "PASS" : "FAIL", fmt_seconds(secs).c_str(),
              det.detail.empty() ? "" : " ", det.detail.c_str());
  std::printf("%s\n", all ? "all criteria pass" : "some criteria FAIL");
  return all ? 0 : 1;
}
