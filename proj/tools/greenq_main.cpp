// Command-line front end: builds deformation specs, emits Gram-matrix and
// spectral-scan reports, evaluates vacuum expectation values of operator
// words and runs the named verification checks. All numeric output uses 17
// significant digits so identical inputs produce byte-identical reports.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "greenq/greenq.hpp"

using namespace greenq;

namespace {

struct SpecOptions {
  std::string preset = "quon";
  double q = 0.0;
  std::string order_text = "1";
  int epsilon = 1;
  double lambda = 0.0;
  std::vector<std::string> phi_entries;  // "i,j,value"
  int sites = 0;                          // 0: infer from indices
  std::string spec_file;

  void attach(CLI::App* cmd) {
    cmd->add_option("--preset", preset,
                    "spec family: quon, green, para, multiparam, anyon, speicher, infinite");
    cmd->add_option("--q", q, "scalar deformation parameter");
    cmd->add_option("--p", order_text, "order of parastatistics (positive integer or 'inf')");
    cmd->add_option("--epsilon", epsilon, "sign for para/speicher presets (+1 or -1)");
    cmd->add_option("--lambda", lambda, "anyon statistics parameter in [0,1]");
    cmd->add_option("--phi", phi_entries, "anyon phase entry 'i,j,value' (repeatable)");
    cmd->add_option("--sites", sites, "number of sites (default: inferred from indices)");
    cmd->add_option("--spec-file,--qfile", spec_file, "load the spec from a config file");
  }

  int order() const {
    if (order_text == "inf") return -1;
    const int p = std::stoi(order_text);
    if (p < 1) throw validation_error("order must be a positive integer or 'inf'");
    return p;
  }

  DeformationSpec build(int min_sites) const {
    if (!spec_file.empty()) {
      std::ifstream in(spec_file);
      if (!in) throw validation_error("cannot open spec file '" + spec_file + "'");
      std::stringstream buffer;
      buffer << in.rdbuf();
      return parse_spec(buffer.str());
    }
    // explicit --sites is honored (out-of-range indices then fail validation);
    // otherwise the count is inferred from the indices in play
    const int n_sites = sites > 0 ? sites : std::max(min_sites, 1);
    const int p = order();
    if (preset == "quon") {
      if (p == -1) return presets::infinite_quon(q, n_sites);
      if (p != 1) throw validation_error("quon preset has order 1; use --preset green");
      return presets::quon(q, n_sites);
    }
    if (preset == "green") {
      if (p == -1) return presets::infinite_quon(q, n_sites);
      return presets::green_quon(q, p, n_sites);
    }
    if (preset == "para") {
      if (p == -1) throw validation_error("para preset needs a finite order");
      return presets::para(epsilon, p, n_sites);
    }
    if (preset == "infinite") return presets::infinite_quon(q, n_sites);
    if (preset == "anyon") {
      std::vector<double> phi(static_cast<std::size_t>(n_sites) * n_sites, 0.0);
      for (const std::string& entry : phi_entries) {
        const auto parts = detail::split(entry, ',');
        if (parts.size() != 3) throw validation_error("bad --phi entry '" + entry + "'");
        const int i = std::stoi(parts[0]);
        const int j = std::stoi(parts[1]);
        const double v = parse_double(parts[2]);
        if (i < 0 || j < 0 || i >= n_sites || j >= n_sites)
          throw validation_error("--phi indices out of range");
        phi[static_cast<std::size_t>(i) * n_sites + j] = v;
        phi[static_cast<std::size_t>(j) * n_sites + i] = -v;
      }
      if (p == -1) throw validation_error("anyon preset needs a finite order");
      return presets::anyon(lambda, phi, p);
    }
    if (preset == "speicher") {
      if (p == -1) throw validation_error("speicher preset needs a finite order");
      return presets::speicher(epsilon, q, p, n_sites);
    }
    if (preset == "multiparam")
      throw validation_error("multiparam specs are loaded with --spec-file");
    throw validation_error("unknown preset '" + preset + "'");
  }
};

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw validation_error("cannot open output file '" + out_path + "'");
  out << text;
}

std::vector<double> parse_grid(const std::string& text) {
  const auto parts = detail::split(text, ':');
  if (parts.size() != 3) throw validation_error("grid must be lo:hi:count");
  return linear_grid(parse_double(parts[0]), parse_double(parts[1]), std::stoi(parts[2]));
}

DeformationSpec seeded_multiparam(unsigned seed, int sites, int order, double cap) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<cplx> q(static_cast<std::size_t>(sites) * sites);
  for (int i = 0; i < sites; ++i) {
    q[static_cast<std::size_t>(i) * sites + i] = cplx(cap * unif(rng), 0.0);
    for (int j = i + 1; j < sites; ++j) {
      const cplx v = std::polar(cap * 0.5 * (unif(rng) + 1.0), M_PI * unif(rng));
      q[static_cast<std::size_t>(i) * sites + j] = v;
      q[static_cast<std::size_t>(j) * sites + i] = std::conj(v);
    }
  }
  return presets::multiparam(q, order);
}

struct CheckResult {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  std::string detail;
};

std::string render(const CheckResult& r) {
  std::string line = r.name + (r.pass ? " PASS" : " FAIL") +
                     " max_residual=" + fmt_double(r.residual);
  if (!r.detail.empty()) line += " " + r.detail;
  return line + "\n";
}

// enumerate composite words of length <= max_len over `sites` sites
std::vector<Word> annihilator_words(int sites, int max_len) {
  std::vector<Word> out{Word{}};
  std::vector<Word> frontier{Word{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<Word> next;
    for (const Word& w : frontier) {
      for (int s = 0; s < sites; ++s) {
        Word ext = w;
        ext.letters.push_back(a(s));
        next.push_back(ext);
        out.push_back(ext);
      }
    }
    frontier = std::move(next);
  }
  return out;
}

CheckResult check_coeff_limit(double tol) {
  CheckResult r{"coeff-limit", true, 0.0, ""};
  for (int p = 2; p <= 6; ++p) {
    for (int eps : {1, -1}) {
      const double pd = p;
      const double generic =
          8.0 * pd * (pd - 1.0) * eps / std::pow(pd * pd - (pd - 2.0) * (pd - 2.0), 2.0);
      const double limit = eps * pd / (2.0 * (pd - 1.0));
      r.residual = std::max(r.residual, std::abs(generic - limit));
    }
  }
  r.pass = r.residual < tol;
  return r;
}

CheckResult check_expansion(int p, double qv, double tol, unsigned seed,
                            const std::string& report_path) {
  auto spec = presets::green_quon(qv, p, 3);
  VevEngine engine(spec);
  auto rep = extract_second_order(spec, 0, 1, {0, 1, 2}, engine, seed);
  if (!report_path.empty()) {
    std::ofstream out(report_path, std::ios::binary);
    if (!out) throw validation_error("cannot open '" + report_path + "'");
    out << write_coeff_text(rep, spec);
  }
  CheckResult r{"expansion", false, 0.0, ""};
  r.residual = std::max({std::abs(rep.extracted - rep.closed_form), rep.residual_norm,
                         rep.spot_check_max});
  r.pass = r.residual < tol;
  r.detail = "coefficient=" + fmt_double(rep.extracted.real());
  return r;
}

CheckResult check_multiparam_expansion(int p, double tol, unsigned seed,
                                       const std::string& report_path) {
  auto spec = seeded_multiparam(seed, 3, p, 0.8);
  VevEngine engine(spec);
  auto rep = extract_second_order(spec, 0, 1, {0, 1, 2}, engine, seed);
  if (!report_path.empty()) {
    std::ofstream out(report_path, std::ios::binary);
    if (!out) throw validation_error("cannot open '" + report_path + "'");
    out << write_coeff_text(rep, spec);
  }
  CheckResult r{"multiparam-expansion", false, 0.0, ""};
  r.residual = std::max(rep.residual_norm, rep.spot_check_max);
  for (const auto& kc : rep.per_k)
    r.residual = std::max(r.residual, std::abs(kc.extracted - kc.closed_form));
  r.pass = r.residual < tol;
  return r;
}

CheckResult check_trilinear(int epsilon, int p, double tol, int sites, int max_particles) {
  auto spec = presets::para(epsilon, p, sites);
  VevEngine engine(spec);
  CheckResult r{"trilinear", false, 0.0, ""};
  const auto annies = annihilator_words(sites, max_particles);
  for (const Word& bra : annies) {
    for (const Word& ket_pattern : annies) {
      const Word ket = dagger_reversed(ket_pattern);
      for (int k = 0; k < sites; ++k)
        for (int l = 0; l < sites; ++l)
          for (int m = 0; m < sites; ++m)
            r.residual = std::max(
                r.residual, std::abs(engine.trilinear_defect(epsilon, k, l, m, bra, ket)));
    }
  }
  r.pass = r.residual < tol;
  return r;
}

std::vector<Word> component_words(int sites, int order, int max_len, bool creators) {
  std::vector<Word> out{Word{}};
  std::vector<Word> frontier{Word{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<Word> next;
    for (const Word& w : frontier) {
      for (int s = 0; s < sites; ++s) {
        for (int g = 0; g < order; ++g) {
          Word ext = w;
          ext.letters.push_back(creators ? b_dag(s, g) : b(s, g));
          next.push_back(ext);
          out.push_back(ext);
        }
      }
    }
    frontier = std::move(next);
  }
  return out;
}

CheckResult check_nonclosure(int p, double qv, double tol, int sites) {
  auto spec = presets::green_quon(qv, p, sites);
  VevEngine engine(spec);
  CheckResult r{"nonclosure", false, 0.0, ""};
  const auto bras = component_words(sites, p, 3, false);
  const auto kets = component_words(sites, p, 3, true);
  for (const Word& bra : bras)
    for (const Word& ket : kets)
      for (int i = 0; i < sites; ++i)
        for (int j = 0; j < sites; ++j)
          r.residual = std::max(r.residual, std::abs(engine.nonclosure_defect(i, j, bra, ket)));
  r.pass = r.residual < tol;
  return r;
}

CheckResult check_phi(int p, double tol, unsigned seed) {
  auto spec = seeded_multiparam(seed, 3, p, 0.85);
  VevEngine engine(spec);
  CheckResult r{"phi", false, 0.0, ""};
  const IndexTuple base{0, 1, 2};
  for (int site : base) {
    auto table = phi_table(spec, base, site, engine);
    for (const IndexTuple& tau : table.residual_basis) {
      cplx via_phi(0.0, 0.0);
      for (std::size_t u = 0; u < table.residual_basis.size(); ++u)
        via_phi += fock_inner(spec, tau, table.residual_basis[u], engine) *
                   table.coeffs[static_cast<Eigen::Index>(u)];
      Word w;
      for (auto it = tau.rbegin(); it != tau.rend(); ++it) w.letters.push_back(a(*it));
      w.letters.push_back(a(site));
      for (int x : base) w.letters.push_back(a_dag(x));
      r.residual = std::max(r.residual, std::abs(via_phi - engine.vev_a_word(w).value));
    }
  }
  r.pass = r.residual < tol;
  return r;
}

CheckResult check_jw(double lambda, double mu, int sites, int p, int cutoff, double tol,
                     const std::string& csv_path) {
  auto rep = build_rep(sites, p, cutoff);
  std::vector<double> phi(static_cast<std::size_t>(sites) * sites, 0.0);
  if (sites > 1) {
    phi[1] = M_PI / 3.0;
    phi[static_cast<std::size_t>(sites)] = -M_PI / 3.0;
  }
  auto params = JwParams::lower_triangular(lambda, mu, phi, sites);
  auto residuals = algebra_residual(rep, jw_map(rep, params), params);
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw validation_error("cannot open '" + csv_path + "'");
    csv << write_jw_csv(residuals, lambda, mu);
  }
  CheckResult r{"jw", false, 0.0, ""};
  r.residual = std::max({residuals.r1_max, residuals.r2_max, residuals.r3_alt_max});
  r.pass = r.residual < tol;
  r.detail = "target_cross=" + fmt_double(residuals.target_cross_site_max) +
             " target_diag=" + fmt_double(residuals.target_diagonal_max) +
             " target_same_site_cross_green=" +
             fmt_double(residuals.target_same_site_cross_green_max);
  return r;
}

CheckResult check_gram_oracle(int n, int p, double tol, unsigned seed) {
  auto spec = seeded_multiparam(seed, n, p, 1.0);
  VevEngine engine(spec);
  IndexTuple base(n);
  std::iota(base.begin(), base.end(), 0);
  auto g = build_gram(spec, base);
  CheckResult r{"gram-oracle", false, 0.0, ""};
  for (std::size_t row = 0; row < g.size(); ++row)
    for (std::size_t col = 0; col < g.size(); ++col) {
      const cplx oracle =
          engine.vev_a_word(detail::gram_word(g.basis().elements[row], g.basis().elements[col]))
              .value;
      r.residual = std::max(r.residual, std::abs(g.entry(row, col) - oracle));
    }
  r.pass = r.residual < tol;
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fock-space analysis of interpolations between para-Bose and para-Fermi statistics"};
  app.require_subcommand(1);

  std::string out_path;
  double tol = -1.0;
  unsigned seed = 12345;
  int threads = 1;
  app.add_option("--out", out_path, "write output to a file instead of stdout");
  app.add_option("--tol", tol, "tolerance override");
  app.add_option("--seed", seed, "seed for randomized cross-check selection");
  app.add_option("--threads", threads, "worker threads for scans");
  app.fallthrough();  // let subcommands use the shared options above

  // gram
  auto* gram_cmd = app.add_subcommand("gram", "emit the sector matrix of inner products");
  SpecOptions gram_spec;
  gram_spec.attach(gram_cmd);
  std::string gram_indices, gram_format = "text";
  int gram_limit = 7;
  gram_cmd->add_option("--indices", gram_indices, "base index tuple, e.g. i0,i1")->required();
  gram_cmd->add_option("--format", gram_format, "output format: text or csv");
  gram_cmd->add_option("--max-particles", gram_limit, "particle-number limit");

  // spectrum
  auto* spectrum_cmd =
      app.add_subcommand("spectrum", "scan min eigenvalue and rank over a scalar q grid");
  std::string spectrum_indices, spectrum_grid = "-1:1:21", spectrum_p = "1";
  spectrum_cmd->add_option("--indices", spectrum_indices, "base index tuple")->required();
  spectrum_cmd->add_option("--grid", spectrum_grid, "q grid as lo:hi:count");
  spectrum_cmd->add_option("--p", spectrum_p, "order of parastatistics");

  // rank-scan
  auto* rank_cmd = app.add_subcommand("rank-scan", "anyonic rank scan over a lambda grid");
  std::string rank_indices, rank_grid = "0:1:11", rank_p = "2";
  std::vector<std::string> rank_phi;
  rank_cmd->add_option("--indices", rank_indices, "base index tuple (repeats allowed)")
      ->required();
  rank_cmd->add_option("--grid", rank_grid, "lambda grid as lo:hi:count");
  rank_cmd->add_option("--p", rank_p, "order of parastatistics");
  rank_cmd->add_option("--phi", rank_phi, "phase entry 'i,j,value' (repeatable)");

  // vev
  auto* vev_cmd = app.add_subcommand("vev", "vacuum expectation value of an operator word");
  SpecOptions vev_spec;
  vev_spec.attach(vev_cmd);
  std::string vev_word;
  vev_cmd->add_option("--word", vev_word, "word, e.g. 'a(i1) a+(i1)' or 'b(i0,g1) b+(i0,g1)'")
      ->required();

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "run a named verification check");
  SpecOptions verify_spec;
  std::string check_name;
  double verify_lambda = 0.0, verify_mu = 1.0;
  int verify_sites = 2, verify_cutoff = 3;
  verify_cmd->add_option("check", check_name,
                         "expansion | multiparam-expansion | trilinear | nonclosure | phi | jw | "
                         "coeff-limit | gram-oracle | all")
      ->required();
  verify_spec.attach(verify_cmd);
  verify_cmd->add_option("--jw-lambda", verify_lambda, "lambda for the jw check");
  verify_cmd->add_option("--jw-mu", verify_mu, "mu for the jw check");
  verify_cmd->add_option("--jw-sites", verify_sites, "sites for the jw check");
  verify_cmd->add_option("--cutoff", verify_cutoff, "per-mode occupation cutoff");
  std::string jw_csv_path;
  verify_cmd->add_option("--jw-csv", jw_csv_path, "write per-relation jw residual rows as CSV");
  std::string coeff_report_path;
  verify_cmd->add_option("--coeff-report", coeff_report_path,
                         "write the serialized coefficient report of an expansion check");

  // reemit
  auto* reemit_cmd = app.add_subcommand("reemit", "parse a gram report and emit it again");
  std::string reemit_in, reemit_format = "text";
  reemit_cmd->add_option("--in", reemit_in, "input report (text or csv)")->required();
  reemit_cmd->add_option("--format", reemit_format, "output format: text or csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gram_cmd->parsed()) {
      const IndexTuple base = detail::parse_tuple_token(gram_indices);
      const int min_sites = base.empty() ? 1 : *std::max_element(base.begin(), base.end()) + 1;
      const auto spec = gram_spec.build(min_sites);
      GramLimits limits;
      limits.max_particles = gram_limit;
      const auto report = make_report(build_gram(spec, base, limits));
      emit(out_path, gram_format == "csv" ? write_gram_csv(report) : write_gram_text(report));
      return 0;
    }
    if (spectrum_cmd->parsed()) {
      const IndexTuple base = detail::parse_tuple_token(spectrum_indices);
      const int p = std::stoi(spectrum_p);
      auto report = positivity_scan(p, base, parse_grid(spectrum_grid), threads, tol);
      emit(out_path, write_scan_csv(report));
      return 0;
    }
    if (rank_cmd->parsed()) {
      const IndexTuple base = detail::parse_tuple_token(rank_indices);
      const int sites = base.empty() ? 1 : *std::max_element(base.begin(), base.end()) + 1;
      std::vector<double> phi(static_cast<std::size_t>(sites) * sites, 0.0);
      for (const std::string& entry : rank_phi) {
        const auto parts = detail::split(entry, ',');
        if (parts.size() != 3) throw validation_error("bad --phi entry '" + entry + "'");
        const int i = std::stoi(parts[0]);
        const int j = std::stoi(parts[1]);
        if (i < 0 || j < 0 || i >= sites || j >= sites)
          throw validation_error("--phi indices out of range");
        phi[static_cast<std::size_t>(i) * sites + j] = parse_double(parts[2]);
        phi[static_cast<std::size_t>(j) * sites + i] = -parse_double(parts[2]);
      }
      auto report =
          rank_scan_anyon(parse_grid(rank_grid), phi, std::stoi(rank_p), base, threads, tol);
      emit(out_path, write_scan_csv(report));
      return 0;
    }
    if (vev_cmd->parsed()) {
      const Word word = parse_word(vev_word);
      int min_sites = 1;
      for (const Letter& l : word.letters) min_sites = std::max(min_sites, l.site + 1);
      const auto spec = vev_spec.build(min_sites);
      VevEngine engine(spec);
      const cplx value =
          is_b_word(word) ? engine.vev_b_word(word).value : engine.vev_a_word(word).value;
      emit(out_path, fmt_double(value.real()) + " " + fmt_double(value.imag()) + "\n");
      return 0;
    }
    if (reemit_cmd->parsed()) {
      std::ifstream in(reemit_in, std::ios::binary);
      if (!in) throw validation_error("cannot open report '" + reemit_in + "'");
      std::stringstream buffer;
      buffer << in.rdbuf();
      const auto report = parse_gram(buffer.str());
      emit(out_path, reemit_format == "csv" ? write_gram_csv(report) : write_gram_text(report));
      return 0;
    }
    if (verify_cmd->parsed()) {
      const int p = verify_spec.order() == -1 ? 1 : verify_spec.order();
      const double qv = verify_spec.q;
      std::vector<CheckResult> results;
      auto tol_or = [&](double fallback) { return tol > 0.0 ? tol : fallback; };
      if (check_name == "coeff-limit" || check_name == "all") results.push_back(check_coeff_limit(tol_or(1e-13)));
      if (check_name == "expansion" || check_name == "all")
        results.push_back(check_expansion(check_name == "all" ? 2 : p,
                                          check_name == "all" ? 0.5 : qv, tol_or(1e-8), seed,
                                          coeff_report_path));
      if (check_name == "multiparam-expansion" || check_name == "all")
        results.push_back(check_multiparam_expansion(check_name == "all" ? 2 : std::max(p, 1),
                                                      tol_or(1e-8), seed, coeff_report_path));
      if (check_name == "trilinear" || check_name == "all")
        results.push_back(check_trilinear(check_name == "all" ? 1 : verify_spec.epsilon,
                                          check_name == "all" ? 2 : p, tol_or(1e-10), 2, 3));
      if (check_name == "nonclosure" || check_name == "all")
        results.push_back(check_nonclosure(check_name == "all" ? 2 : p,
                                           check_name == "all" ? 0.5 : qv, tol_or(1e-12), 2));
      if (check_name == "phi" || check_name == "all")
        results.push_back(check_phi(check_name == "all" ? 2 : p, tol_or(1e-10), seed));
      if (check_name == "jw" || check_name == "all")
        results.push_back(check_jw(verify_lambda, verify_mu, verify_sites, 2, verify_cutoff,
                                   tol_or(1e-10), jw_csv_path));
      if (check_name == "gram-oracle" || check_name == "all")
        results.push_back(check_gram_oracle(3, check_name == "all" ? 2 : std::max(p, 1),
                                            tol_or(1e-10), seed));
      if (results.empty()) throw validation_error("unknown check '" + check_name + "'");
      std::string text;
      bool all_pass = true;
      for (const auto& r : results) {
        text += render(r);
        all_pass = all_pass && r.pass;
      }
      emit(out_path, text);
      return all_pass ? 0 : 1;
    }
  } catch (const budget_error& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 3;
  } catch (const validation_error& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
